mod csvout;

use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use prolate::criteria::{compute_artifacts, constant_plateau, evaluate, render, RunConfig, EPS};
use prolate::elements::HelmholtzCase;
use prolate::kr_rule::select_n;
use prolate::studies::eigen::{run_eig_study_with, run_extreme_eigs, EigOperator, Pairing};
use prolate::studies::tables::{table1, table2, table3, TABLE2_NS, TABLE3_ELEMENTS, TABLE3_NS};
use prolate::tolerances::{ERROR_SAMPLES, PCOL_TABLE_MAXIT};
use prolate::{
    build_basis, build_birkhoff, model_problem, rational_diffmats, solve_npcol, solve_pcol, solve_ppcol,
    DiffOperators, ProlateGrid, SolveOptions, Solver,
};

use csvout::Table;

/// Bandwidth value; accepts plain numbers and multiples of pi such as `120pi`.
fn parse_bandwidth(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let v = match t.strip_suffix("pi") {
        Some("") => PI,
        Some(m) => m.trim_end_matches('*').parse::<f64>().map_err(|e| e.to_string())? * PI,
        None => t.parse::<f64>().map_err(|e| e.to_string())?,
    };
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("bandwidth must be a nonnegative number, got {s}"))
    }
}

#[derive(Parser)]
#[command(name = "prolate", version, about = "Prolate spectral toolkit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    D1,
    D2,
    Dh1,
    Dh2,
    B,
    B1,
    Bin,
    B1in,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Pcol,
    Ppcol,
    Npcol,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    PiecewiseConst,
    PiecewiseSmooth,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    Laplacian,
    Bessel,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairingArg {
    Rank,
    Nearest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    One,
}

#[derive(Subcommand)]
enum Command {
    /// Prolate-Lobatto nodes and weights.
    Grid {
        #[arg(long, value_parser = parse_bandwidth)]
        c: f64,
        #[arg(long = "N")]
        n: usize,
    },
    /// Differentiation or Birkhoff matrices on the prolate-Lobatto grid.
    Diffmat {
        #[arg(long, value_parser = parse_bandwidth)]
        c: f64,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_enum, default_value = "d1")]
        kind: MatrixKind,
    },
    /// Bandwidth-to-degree pairing rule.
    Krrule {
        #[arg(long, value_parser = parse_bandwidth, required_unless_present = "table1")]
        c: Option<f64>,
        #[arg(long, default_value_t = EPS)]
        eps: f64,
        /// Emit the full pairing table as CSV.
        #[arg(long)]
        table1: bool,
    },
    /// Collocation solve of the piecewise-smooth model problem.
    Bvp {
        #[arg(long, value_enum, default_value = "npcol")]
        scheme: SchemeArg,
        /// Defaults to N / 2.
        #[arg(long, value_parser = parse_bandwidth)]
        c: Option<f64>,
        #[arg(long = "N", required_unless_present = "table2")]
        n: Option<usize>,
        #[arg(long)]
        iterative: bool,
        #[arg(long)]
        maxit: Option<usize>,
        /// Sweep N = 4 .. 512 with c = N / 2 and emit CSV.
        #[arg(long)]
        table2: bool,
    },
    /// Prolate-element Helmholtz solve; JSON report on stdout.
    Helmholtz {
        #[arg(long, value_enum, default_value = "piecewise-const")]
        case: CaseArg,
        #[arg(long)]
        k: f64,
        #[arg(long, value_parser = parse_bandwidth)]
        bandwidth: f64,
        #[arg(long, default_value_t = EPS)]
        eps: f64,
        /// Degree per element; rule-selected from the bandwidth by default.
        #[arg(long = "N")]
        n: Option<usize>,
        /// CSV file for the `(x, Re u, Im u)` samples.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// h-refinement at fixed degree: prolate (c = N / 4) against Legendre elements.
    HpDemo,
    /// Piecewise L2 projection plateau.
    Project {
        #[arg(long, value_enum, default_value = "one")]
        target: Target,
        #[arg(long, value_parser = parse_bandwidth, default_value = "1")]
        c: f64,
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        #[arg(long = "M", value_delimiter = ',', default_value = "2,4,8,16")]
        m: Vec<usize>,
    },
    /// Eigenvalue accuracy of the interior second-derivative operators.
    EigStudy {
        #[arg(long, value_enum, default_value = "laplacian")]
        operator: OperatorArg,
        #[arg(long, value_parser = parse_bandwidth, default_value = "120pi")]
        c: f64,
        #[arg(long, default_value_t = EPS)]
        eps: f64,
        /// Overrides the rule-selected degree.
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "rank")]
        pairing: PairingArg,
    },
    /// Extreme eigenvalue magnitudes against N.
    ExtremeEigs {
        #[arg(long = "N", value_delimiter = ',', default_value = "16,32,64,128,256")]
        n: Vec<usize>,
        #[arg(long, default_value_t = EPS)]
        eps: f64,
    },
    /// Every artifact plus summary.json with the acceptance verdicts.
    RunAll {
        #[arg(long)]
        out: PathBuf,
        /// Reduced sizes; verdicts are not meaningful.
        #[arg(long)]
        quick: bool,
    },
}

fn stdout_table(t: &Table) -> Result<()> {
    t.write(io::stdout().lock())
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn write_file(path: &Path, t: &Table) -> Result<()> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    t.write(BufWriter::new(f))
}

fn bvp(scheme: SchemeArg, c: Option<f64>, n: usize, iterative: bool, maxit: Option<usize>) -> Result<()> {
    let c = c.unwrap_or(n as f64 / 2.0);
    let basis = build_basis(c, n)?;
    let grid = ProlateGrid::new(&basis)?;
    let solver = if iterative { Solver::Iterative { maxit } } else { Solver::Direct };
    let opts = SolveOptions { solver, condition: true };
    let prob = model_problem();
    let report = match scheme {
        SchemeArg::Pcol => solve_pcol(&prob, c, &DiffOperators::new(&basis, &grid)?, opts)?,
        SchemeArg::Ppcol => {
            let ops = DiffOperators::new(&basis, &grid)?;
            solve_ppcol(&prob, c, &ops, &build_birkhoff(&basis, &grid)?, opts)?
        }
        SchemeArg::Npcol => solve_npcol(&prob, c, &build_birkhoff(&basis, &grid)?, opts)?,
    };
    print_json(&serde_json::to_value(report)?)
}

fn helmholtz(case: CaseArg, k: f64, c: f64, eps: f64, n: Option<usize>, out: Option<PathBuf>) -> Result<()> {
    let case = match case {
        CaseArg::PiecewiseConst => HelmholtzCase::PiecewiseConst,
        CaseArg::PiecewiseSmooth => HelmholtzCase::PiecewiseSmooth,
    };
    let n = match n {
        Some(n) => n,
        None => select_n(c, eps)?.n_star,
    };
    let pb = case.problem(k);
    let sol = pb.solve_prolate(case.elements(), c, n)?;
    let exact = pb.exact.map(|u| move |x: f64| u(x, k));
    let report = sol.report(exact.as_ref().map(|f| f as &dyn Fn(f64) -> _), ERROR_SAMPLES);
    if let Some(path) = out {
        let pts: Vec<(f64, f64, f64)> = sol
            .mesh
            .samples(ERROR_SAMPLES)
            .into_iter()
            .map(|x| {
                let v = sol.eval(x);
                (x, v.re, v.im)
            })
            .collect();
        write_file(&path, &csvout::samples("helmholtz", c, n, Some(eps), &pts))?;
    }
    print_json(&json!({ "case": case.tag(), "k": k, "eps": eps, "report": report }))
}

fn run_all(out: &Path, quick: bool) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let cfg = if quick { RunConfig::quick() } else { RunConfig::full() };
    let artifacts = compute_artifacts(cfg)?;
    for (name, table) in csvout::run_all_tables(&artifacts, EPS) {
        write_file(&out.join(name), &table)?;
    }
    let results = evaluate(&artifacts);
    let passed = results.iter().filter(|r| r.passed).count();
    let summary = json!({
        "config": cfg,
        "eps": EPS,
        "criteria_total": results.len(),
        "criteria_passed": passed,
        "criteria": results,
    });
    let f = File::create(out.join("summary.json"))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, &summary)?;
    writeln!(w)?;
    w.flush()?;
    eprint!("{}", render(&results));
    eprintln!("{passed}/{} criteria pass", results.len());
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Grid { c, n } => {
            let grid = ProlateGrid::new(&build_basis(c, n)?)?;
            stdout_table(&csvout::grid(c, n, &grid.nodes, &grid.weights))
        }
        Command::Diffmat { c, n, kind } => {
            let basis = build_basis(c, n)?;
            let grid = ProlateGrid::new(&basis)?;
            let (label, m) = match kind {
                MatrixKind::D1 | MatrixKind::D2 => {
                    let ops = DiffOperators::new(&basis, &grid)?;
                    if matches!(kind, MatrixKind::D1) {
                        ("D1", ops.d1)
                    } else {
                        ("D2", ops.d2)
                    }
                }
                MatrixKind::Dh1 => ("Dh1", rational_diffmats(&basis, &grid)?.0),
                MatrixKind::Dh2 => ("Dh2", rational_diffmats(&basis, &grid)?.1),
                MatrixKind::B | MatrixKind::B1 | MatrixKind::Bin | MatrixKind::B1in => {
                    let bb = build_birkhoff(&basis, &grid)?;
                    match kind {
                        MatrixKind::B => ("B", bb.b),
                        MatrixKind::B1 => ("B1", bb.b1),
                        MatrixKind::Bin => ("Bin", bb.bin),
                        _ => ("B1in", bb.b1in),
                    }
                }
            };
            stdout_table(&csvout::matrix(c, n, label, &m))
        }
        Command::Krrule { c, eps, table1: true } => {
            if c.is_some() {
                bail!("--table1 uses the fixed bandwidth list; drop --c");
            }
            stdout_table(&csvout::table1(&table1(eps)?))
        }
        Command::Krrule { c, eps, table1: false } => {
            let c = c.expect("clap requires --c without --table1");
            let pair = select_n(c, eps)?;
            let lambda = build_basis(c, pair.n_star)?.lambda_n(pair.n_star)?;
            print_json(&json!({
                "c": c,
                "eps": eps,
                "n_star": pair.n_star,
                "nu": pair.nu_at_n_star,
                "lambda_estimate": lambda,
            }))
        }
        Command::Bvp { table2: true, maxit, .. } => {
            stdout_table(&csvout::table2(&table2(&TABLE2_NS, Some(maxit.unwrap_or(PCOL_TABLE_MAXIT)))?))
        }
        Command::Bvp { scheme, c, n, iterative, maxit, table2: false } => {
            bvp(scheme, c, n.expect("clap requires --N without --table2"), iterative, maxit)
        }
        Command::Helmholtz { case, k, bandwidth, eps, n, out } => helmholtz(case, k, bandwidth, eps, n, out),
        Command::HpDemo => stdout_table(&csvout::table3(&table3(&TABLE3_NS, &TABLE3_ELEMENTS)?)),
        Command::Project { target: Target::One, c, n, m } => stdout_table(&csvout::plateau(&constant_plateau(c, n, &m)?)),
        Command::EigStudy { operator, c, eps, n, pairing } => {
            let op = match operator {
                OperatorArg::Laplacian => EigOperator::Laplacian,
                OperatorArg::Bessel => EigOperator::Bessel,
            };
            let pairing = match pairing {
                PairingArg::Rank => Pairing::Rank,
                PairingArg::Nearest => Pairing::Nearest,
            };
            let n = match n {
                Some(n) => n,
                None => select_n(c, eps)?.n_star,
            };
            let rep = run_eig_study_with(op, c, n, eps, pairing)?;
            eprintln!(
                "accurate eigenvalues: prolate {}, rational {}, legendre {} of {}",
                rep.prolate.accurate,
                rep.rational.accurate,
                rep.legendre.accurate,
                n - 1
            );
            stdout_table(&csvout::eig_study(&format!("eig_{}", op.tag()), &rep))
        }
        Command::ExtremeEigs { n, eps } => stdout_table(&csvout::extreme(&run_extreme_eigs(&n, eps)?, eps)),
        Command::RunAll { out, quick } => run_all(&out, quick),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bandwidth_tokens() {
        assert_eq!(parse_bandwidth("120pi").unwrap(), 120.0 * PI);
        assert_eq!(parse_bandwidth("pi").unwrap(), PI);
        assert_eq!(parse_bandwidth("2.5").unwrap(), 2.5);
        assert_eq!(parse_bandwidth("0.5*pi").unwrap(), 0.5 * PI);
        assert!(parse_bandwidth("-1").is_err());
        assert!(parse_bandwidth("abc").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
