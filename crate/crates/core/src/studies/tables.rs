//! Sweeps reproducing the reference tables and the Helmholtz comparisons.

use serde::Serialize;

use crate::birkhoff::build_birkhoff;
use crate::cardinal::DiffOperators;
use crate::collocation::{model_problem, solve_npcol, solve_pcol, solve_ppcol, Scheme, SolveOptions, SolveReport, Solver};
use crate::elements::{model_problem_sec4, solve_sem, HelmholtzCase, Mesh1D};
use crate::error::Result;
use crate::kr_rule::{select_n, TABLE1_BANDWIDTHS, TABLE1_EXPECTED};
use crate::pswf::build_basis;
use crate::quadrature::ProlateGrid;
use crate::tolerances::ERROR_SAMPLES;

#[derive(Clone, Debug, Serialize)]
pub struct Table1Row {
    pub c: f64,
    pub eps: f64,
    pub n_star: usize,
    pub target: usize,
    pub x_root: f64,
    pub nu: f64,
    /// Order-of-magnitude estimate of `lambda_{N*}(c)`.
    pub lambda: f64,
    /// `c / sqrt(chi_{N*})`.
    pub q: f64,
}

pub fn table1(eps: f64) -> Result<Vec<Table1Row>> {
    TABLE1_BANDWIDTHS
        .iter()
        .zip(TABLE1_EXPECTED)
        .map(|(&c, target)| {
            let pair = select_n(c, eps)?;
            let basis = build_basis(c, pair.n_star)?;
            Ok(Table1Row {
                c,
                eps,
                n_star: pair.n_star,
                target,
                x_root: pair.x_root,
                nu: pair.nu_at_n_star,
                lambda: basis.lambda_n(pair.n_star)?,
                q: basis.q_ratio(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2Row {
    pub n: usize,
    pub c: f64,
    pub scheme: String,
    pub condition: f64,
    /// Max node error of the BiCGStab solution.
    pub error: f64,
    pub steps: usize,
    pub converged: bool,
    /// Max node error of the direct LU solution.
    pub direct_error: f64,
}

/// Collocation sweep with `c = N / 2`. `pcol_maxit` caps the BiCGStab iterations
/// for the ill-conditioned scheme (`None`: the default `2 (N - 1)^2`).
pub fn table2(ns: &[usize], pcol_maxit: Option<usize>) -> Result<Vec<Table2Row>> {
    let prob = model_problem();
    let mut rows = Vec::new();
    for &n in ns {
        let c = n as f64 / 2.0;
        let basis = build_basis(c, n)?;
        let grid = ProlateGrid::new(&basis)?;
        let ops = DiffOperators::new(&basis, &grid)?;
        let bb = build_birkhoff(&basis, &grid)?;
        for scheme in [Scheme::Pcol, Scheme::PPcol, Scheme::NPcol] {
            let maxit = if scheme == Scheme::Pcol { pcol_maxit } else { None };
            let run = |solver, condition| -> Result<SolveReport<f64>> {
                let opts = SolveOptions { solver, condition };
                match scheme {
                    Scheme::Pcol => solve_pcol(&prob, c, &ops, opts),
                    Scheme::PPcol => solve_ppcol(&prob, c, &ops, &bb, opts),
                    Scheme::NPcol => solve_npcol(&prob, c, &bb, opts),
                }
            };
            let it = run(Solver::Iterative { maxit }, true)?;
            let direct = run(Solver::Direct, false)?;
            let stats = it.stats.expect("iterative solve reports statistics");
            rows.push(Table2Row {
                n,
                c,
                scheme: scheme.tag().to_string(),
                condition: it.condition,
                error: it.max_error.unwrap_or(f64::NAN),
                steps: stats.iterations,
                converged: stats.converged,
                direct_error: direct.max_error.unwrap_or(f64::NAN),
            });
        }
    }
    Ok(rows)
}

pub const TABLE2_NS: [usize; 8] = [4, 8, 16, 32, 64, 128, 256, 512];

#[derive(Clone, Debug, Serialize)]
pub struct Table3Row {
    pub method: String,
    pub n: usize,
    pub c: f64,
    pub h: f64,
    /// Max error at the global nodes.
    pub error: f64,
}

pub const TABLE3_NS: [usize; 6] = [2, 3, 4, 6, 8, 16];
pub const TABLE3_ELEMENTS: [usize; 4] = [2, 4, 8, 16];

/// Spectral-element errors on the nonconvergence problem: `c = N / 4`
/// (prolate) and `c = 0` (Legendre), `h = 1/2 .. 1/16`.
pub fn table3(ns: &[usize], elements: &[usize]) -> Result<Vec<Table3Row>> {
    let prob = model_problem_sec4();
    let exact = prob.exact.as_ref().expect("model problem has an exact solution");
    let mut rows = Vec::new();
    for (method, scale) in [("prolate", 0.25), ("legendre", 0.0)] {
        for &n in ns {
            let c = scale * n as f64;
            let basis = build_basis(c, n)?;
            let grid = ProlateGrid::new(&basis)?;
            for &m in elements {
                let mesh = Mesh1D::new(0.0, 1.0, m)?;
                let sol = solve_sem(&prob, &mesh, &basis, &grid)?;
                rows.push(Table3Row {
                    method: method.into(),
                    n,
                    c,
                    h: mesh.h(),
                    error: sol.node_error(exact.as_ref()),
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct HelmholtzRow {
    pub k: f64,
    pub c: f64,
    pub n: usize,
    pub dofs: usize,
    pub prolate_error: f64,
    pub legendre_error: f64,
}

/// Prolate elements against Legendre elements with the same `N` on the
/// piecewise-constant medium; `N` is rule-selected from each bandwidth.
pub fn helmholtz_exact_sweep(k: f64, bandwidths: &[f64], eps: f64) -> Result<Vec<HelmholtzRow>> {
    let case = HelmholtzCase::PiecewiseConst;
    let pb = case.problem(k);
    let u = pb.exact.expect("piecewise-constant case has an exact solution");
    let exact = move |x: f64| u(x, k);
    bandwidths
        .iter()
        .map(|&c| {
            let n = select_n(c, eps)?.n_star;
            let p = pb.solve_prolate(case.elements(), c, n)?;
            let l = pb.solve_legendre(case.elements(), n)?;
            Ok(HelmholtzRow {
                k,
                c,
                n,
                dofs: p.dofs,
                prolate_error: p.sampled_error(&exact, ERROR_SAMPLES),
                legendre_error: l.sampled_error(&exact, ERROR_SAMPLES),
            })
        })
        .collect()
}

pub const HELMHOLTZ_K60_BANDWIDTHS: [f64; 9] = [2.0, 8.0, 14.0, 20.0, 26.0, 32.0, 40.0, 46.0, 52.0];

#[derive(Clone, Debug, Serialize)]
pub struct HeterogeneousReport {
    pub k: f64,
    pub coarse: (f64, usize),
    pub reference: (f64, usize),
    pub legendre_n: usize,
    /// Max difference between the coarse and reference solutions.
    pub coarse_vs_reference: f64,
    /// Max difference between the reference and a fine Legendre solution.
    pub reference_vs_legendre: f64,
    /// `(x, Re u, Im u)` of the reference solution on the uniform sample.
    pub samples: Vec<(f64, f64, f64)>,
}

pub fn helmholtz_heterogeneous(
    k: f64,
    coarse: (f64, usize),
    reference: (f64, usize),
    legendre_n: usize,
) -> Result<HeterogeneousReport> {
    let case = HelmholtzCase::PiecewiseSmooth;
    let pb = case.problem(k);
    let m = case.elements();
    let coarse_sol = pb.solve_prolate(m, coarse.0, coarse.1)?;
    let fine = pb.solve_prolate(m, reference.0, reference.1)?;
    let leg = pb.solve_legendre(m, legendre_n)?;
    let samples = fine
        .mesh
        .samples(ERROR_SAMPLES)
        .into_iter()
        .map(|x| {
            let v = fine.eval(x);
            (x, v.re, v.im)
        })
        .collect();
    Ok(HeterogeneousReport {
        k,
        coarse,
        reference,
        legendre_n,
        coarse_vs_reference: coarse_sol.sampled_difference(&fine, ERROR_SAMPLES),
        reference_vs_legendre: fine.sampled_difference(&leg, ERROR_SAMPLES),
        samples,
    })
}
