//! Acceptance criteria: the experiment bundle and its pass/fail evaluation.

use std::f64::consts::PI;

use serde::Serialize;

use crate::birkhoff::build_birkhoff;
use crate::cardinal::modal_diffmats;
use crate::elements::{hp_project, Mesh1D};
use crate::error::Result;
use crate::legendre::classical;
use crate::linalg::DenseMatrix;
use crate::pswf::build_basis;
use crate::quadrature::{gauss_legendre, lgl_rule, ProlateGrid};
use crate::studies::eigen::{
    loglog_slope, run_eig_study, run_envelope, run_extreme_eigs, EigOperator, EigStudyReport, EnvelopeRow,
    ExtremeEigRow,
};
use crate::studies::tables::{
    helmholtz_exact_sweep, helmholtz_heterogeneous, table1, table2, table3, HelmholtzRow, HeterogeneousReport,
    Table1Row, Table2Row, Table3Row, HELMHOLTZ_K60_BANDWIDTHS, TABLE2_NS, TABLE3_ELEMENTS, TABLE3_NS,
};
use crate::tolerances::PCOL_TABLE_MAXIT;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    /// Reduced sizes for smoke runs; criteria are not meaningful in this mode.
    pub quick: bool,
}

impl RunConfig {
    pub fn full() -> Self {
        Self { quick: false }
    }

    pub fn quick() -> Self {
        Self { quick: true }
    }

    pub fn eig_bandwidth(&self) -> f64 {
        if self.quick {
            20.0
        } else {
            120.0 * PI
        }
    }

    fn table2_ns(&self) -> Vec<usize> {
        if self.quick {
            vec![4, 8, 16, 32, 64]
        } else {
            TABLE2_NS.to_vec()
        }
    }

    fn envelope_ns(&self) -> Vec<usize> {
        if self.quick {
            vec![16, 32]
        } else {
            vec![16, 32, 64, 128]
        }
    }

    fn extreme_ns(&self) -> Vec<usize> {
        if self.quick {
            vec![16, 32, 64]
        } else {
            vec![16, 32, 64, 128, 256]
        }
    }

    fn k60_bandwidths(&self) -> Vec<f64> {
        if self.quick {
            vec![14.0, 20.0, 40.0]
        } else {
            HELMHOLTZ_K60_BANDWIDTHS.to_vec()
        }
    }

    /// `(coarse, reference, Legendre degree)` for the heterogeneous medium.
    pub fn k160(&self) -> ((f64, usize), (f64, usize), usize) {
        if self.quick {
            ((36.0, 48), (60.0, 80), 100)
        } else {
            ((36.0, 48), (177.0, 144), 160)
        }
    }

    fn birkhoff_n(&self) -> usize {
        if self.quick {
            64
        } else {
            512
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlateauRow {
    pub c: f64,
    pub n: usize,
    pub elements: usize,
    pub h: f64,
    pub l2_error: f64,
}

/// `L^2` projection error of `u = 1` on `(0, 1)` for each element count.
pub fn constant_plateau(c: f64, n: usize, elements: &[usize]) -> Result<Vec<PlateauRow>> {
    let basis = build_basis(c, n)?;
    elements
        .iter()
        .map(|&m| {
            let mesh = Mesh1D::new(0.0, 1.0, m)?;
            let p = hp_project(&|_| 1.0, &mesh, &basis)?;
            Ok(PlateauRow { c, n, elements: m, h: mesh.h(), l2_error: p.l2_error })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertySuite {
    /// `max |(psi_i, psi_j) - delta_ij|` over `c in {1, 10, 50}`, `N = 32`.
    pub orthonormality: f64,
    /// Max Sturm-Liouville residual divided by `1 + chi_n`.
    pub ode_residual: f64,
    /// `c = 0` node, weight and first-derivative matrix deviations from the Legendre objects.
    pub legendre_nodes: f64,
    pub legendre_weights: f64,
    pub legendre_d1: f64,
    pub birkhoff_n: usize,
    pub birkhoff_residual: f64,
}

/// Classical Legendre-Gauss-Lobatto first-derivative matrix.
pub fn lgl_d1(n: usize) -> Result<DenseMatrix<f64>> {
    let (x, _) = lgl_rule(n)?;
    let p: Vec<f64> = x.iter().map(|&t| classical(n, t).0).collect();
    let corner = (n * (n + 1)) as f64 / 4.0;
    Ok(DenseMatrix::from_fn(n + 1, n + 1, |i, j| {
        if i != j {
            p[i] / (p[j] * (x[i] - x[j]))
        } else if i == 0 {
            -corner
        } else if i == n {
            corner
        } else {
            0.0
        }
    }))
}

pub fn property_suite(birkhoff_n: usize) -> Result<PropertySuite> {
    let (gx, gw) = gauss_legendre(400)?;
    let mut orthonormality = 0.0f64;
    let mut ode_residual = 0.0f64;
    for c in [1.0, 10.0, 50.0] {
        let basis = build_basis(c, 32)?;
        let v = basis.values_matrix(&gx, 0);
        for i in 0..=32 {
            for j in 0..=32 {
                let s: f64 = (0..gx.len()).map(|l| gw[l] * v[(l, i)] * v[(l, j)]).sum();
                let d = if i == j { 1.0 } else { 0.0 };
                orthonormality = orthonormality.max((s - d).abs());
            }
        }
        for k in 0..=200 {
            let x = -1.0 + k as f64 / 100.0;
            let (p0, p1, p2) = (basis.eval_all(x, 0), basis.eval_all(x, 1), basis.eval_all(x, 2));
            for n in 0..=32 {
                let chi = basis.chi()[n];
                let r = (1.0 - x * x) * p2[n] - 2.0 * x * p1[n] + (chi - c * c * x * x) * p0[n];
                ode_residual = ode_residual.max(r.abs() / (1.0 + chi));
            }
        }
    }
    let n = 16;
    let basis = build_basis(0.0, n)?;
    let grid = ProlateGrid::new(&basis)?;
    let (lx, lw) = lgl_rule(n)?;
    let legendre_nodes = grid.nodes.iter().zip(&lx).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let legendre_weights = grid.weights.iter().zip(&lw).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let (d1, _) = modal_diffmats(&basis, &grid)?;
    let legendre_d1 = d1.sub(&lgl_d1(n)?).max_abs();

    let nb = birkhoff_n;
    let basis = build_basis(nb as f64 / 2.0, nb)?;
    let grid = ProlateGrid::new(&basis)?;
    let birkhoff_residual = build_birkhoff(&basis, &grid)?.condition_residual();
    Ok(PropertySuite {
        orthonormality,
        ode_residual,
        legendre_nodes,
        legendre_weights,
        legendre_d1,
        birkhoff_n: nb,
        birkhoff_residual,
    })
}

/// Everything the criteria and the artifact files are computed from.
#[derive(Clone, Debug, Serialize)]
pub struct Artifacts {
    pub config: RunConfig,
    pub table1: Vec<Table1Row>,
    pub table2: Vec<Table2Row>,
    pub table3: Vec<Table3Row>,
    pub plateau: Vec<PlateauRow>,
    pub eig_laplacian: EigStudyReport,
    pub eig_bessel: EigStudyReport,
    pub envelope: Vec<EnvelopeRow>,
    pub extreme: Vec<ExtremeEigRow>,
    pub helmholtz_k60: Vec<HelmholtzRow>,
    pub helmholtz_k160: HeterogeneousReport,
    pub properties: PropertySuite,
}

pub const EPS: f64 = 1e-14;

pub fn compute_artifacts(cfg: RunConfig) -> Result<Artifacts> {
    let c = cfg.eig_bandwidth();
    let (coarse, reference, leg_n) = cfg.k160();
    Ok(Artifacts {
        config: cfg,
        table1: table1(EPS)?,
        table2: table2(&cfg.table2_ns(), Some(PCOL_TABLE_MAXIT))?,
        table3: table3(&TABLE3_NS, &TABLE3_ELEMENTS)?,
        plateau: constant_plateau(1.0, 2, &[2, 4, 8, 16])?,
        eig_laplacian: run_eig_study(EigOperator::Laplacian, c, EPS)?,
        eig_bessel: run_eig_study(EigOperator::Bessel, c, EPS)?,
        envelope: run_envelope(&cfg.envelope_ns())?,
        extreme: run_extreme_eigs(&cfg.extreme_ns(), EPS)?,
        helmholtz_k60: helmholtz_exact_sweep(60.0, &cfg.k60_bandwidths(), EPS)?,
        helmholtz_k160: helmholtz_heterogeneous(160.0, coarse, reference, leg_n)?,
        properties: property_suite(cfg.birkhoff_n())?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: String,
    pub passed: bool,
    /// A reference target this implementation does not reproduce; documented in the README.
    pub known_deviation: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    /// Every failing check is a documented deviation.
    pub known_deviation: bool,
    pub checks: Vec<Check>,
}

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, value: f64, bound: impl Into<String>, passed: bool) {
        self.checks.push(Check { name: name.into(), value, bound: bound.into(), passed, known_deviation: false });
    }

    /// Same as `check`, for a target that is not reproduced.
    fn deviation(&mut self, name: impl Into<String>, value: f64, bound: impl Into<String>, passed: bool) {
        self.check(name, value, bound, passed);
        if let Some(c) = self.checks.last_mut() {
            c.known_deviation = !passed;
        }
    }

    fn finish(self, id: u8, title: &str) -> CriterionResult {
        let passed = !self.checks.is_empty() && self.checks.iter().all(|c| c.passed);
        CriterionResult {
            id,
            title: title.into(),
            passed,
            known_deviation: !passed && self.checks.iter().all(|c| c.passed || c.known_deviation),
            checks: self.checks,
        }
    }
}

fn within_order(value: f64, target: f64) -> bool {
    value <= 10.0 * target && value >= 0.1 * target
}

fn criterion1(a: &Artifacts) -> CriterionResult {
    let mut b = Builder::new();
    for r in &a.table1 {
        let frac = r.x_root - r.x_root.floor();
        let boundary = frac.min(1.0 - frac) < 0.05;
        let diff = r.n_star.abs_diff(r.target);
        let name = format!("N*(c={}) = {} vs {}", r.c, r.n_star, r.target);
        let bound = "exact, or +-1 with the root within 0.05 of an integer";
        let passed = diff == 0 || (diff == 1 && boundary);
        if diff == 1 {
            b.deviation(name, r.n_star as f64, bound, passed);
        } else {
            b.check(name, r.n_star as f64, bound, passed);
        }
    }
    b.finish(1, "Pairing rule reproduction")
}

fn eig_checks(b: &mut Builder, rep: &EigStudyReport, legendre_target: usize, with_rational: bool) {
    let tag = rep.operator.tag();
    b.check(format!("{tag}: accurate D2in eigenvalues (N={})", rep.n), rep.prolate.accurate as f64, ">= 240", rep.prolate.accurate >= 240);
    if with_rational {
        b.deviation(format!("{tag}: accurate Dh2in eigenvalues"), rep.rational.accurate as f64, ">= 240", rep.rational.accurate >= 240);
    }
    b.deviation(
        format!("{tag}: accurate Legendre eigenvalues"),
        rep.legendre.accurate as f64,
        format!("{legendre_target} +- 10"),
        rep.legendre.accurate.abs_diff(legendre_target) <= 10,
    );
}

fn criterion2(a: &Artifacts) -> CriterionResult {
    let mut b = Builder::new();
    eig_checks(&mut b, &a.eig_laplacian, 72, true);
    b.finish(2, "Laplacian eigenvalue resolution")
}

fn criterion3(a: &Artifacts) -> CriterionResult {
    let mut b = Builder::new();
    eig_checks(&mut b, &a.eig_bessel, 111, false);
    b.finish(3, "Bessel eigenvalue resolution")
}

/// Reference errors of the three schemes at N = 16, 64, 256, 512.
const SCHEME_ERROR_TARGETS: [(usize, [f64; 3]); 4] = [
    (16, [6.78e-6, 6.78e-6, 6.78e-6]),
    (64, [3.20e-8, 3.20e-8, 3.20e-8]),
    (256, [3.29e-8, 1.32e-10, 1.32e-10]),
    (512, [8.65e-4, 1.21e-11, 8.35e-12]),
];

fn criterion4(a: &Artifacts) -> CriterionResult {
    let mut b = Builder::new();
    let find = |n: usize, s: &str| a.table2.iter().find(|r| r.n == n && r.scheme == s);
    for (n, targets) in SCHEME_ERROR_TARGETS {
        for (k, scheme) in ["PCOL", "P-PCOL", "N-PCOL"].iter().enumerate() {
            let Some(r) = find(n, scheme) else {
                b.check(format!("{scheme} N={n} present"), f64::NAN, "row computed", false);
                continue;
            };
            match *scheme {
                "P-PCOL" => b.check(format!("P-PCOL cond N={n}"), r.condition, "1.33 +- 0.05", (r.condition - 1.33).abs() <= 0.05),
                "N-PCOL" => b.check(format!("N-PCOL cond N={n}"), r.condition, "[1.5, 2.0]", (1.5..=2.0).contains(&r.condition)),
                _ => {}
            }
            if *scheme != "PCOL" {
                b.check(format!("{scheme} steps N={n}"), r.steps as f64, "<= 8", r.steps <= 8 && r.converged);
            }
            let name = format!("{scheme} error N={n}");
            let bound = format!("within 10x of {:.2e}", targets[k]);
            if *scheme == "PCOL" {
                // Unpreconditioned iterates depend on the stopping rule at cond ~ 1e7.
                b.deviation(name, r.error, bound, within_order(r.error, targets[k]));
            } else {
                b.check(name, r.error, bound, within_order(r.error, targets[k]));
            }
        }
    }
    if let Some(r) = find(512, "PCOL") {
        b.check("PCOL cond N=512", r.condition, "within 5x of 4.60e8", r.condition >= 4.6e8 / 5.0 && r.condition <= 4.6e8 * 5.0);
    }
    b.finish(4, "Collocation conditioning and accuracy")
}

/// N-PCOL error slope over `N = 16 .. 256`.
pub fn npcol_slope(rows: &[Table2Row]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.scheme == "N-PCOL" && (16..=256).contains(&r.n))
        .map(|r| (r.n as f64, r.error))
        .collect();
    let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    loglog_slope(&x, &y)
}

fn criterion5(a: &Artifacts) -> CriterionResult {
    let mut b = Builder::new();
    let s = npcol_slope(&a.table2);
    b.check("N-PCOL log-log error slope", s, "-3.95 +- 0.2", (s + 3.95).abs() <= 0.2);
    b.finish(5, "Convergence slope")
}

fn criterion6(a: &Artifacts) -> CriterionResult {
    let mut b = Builder::new();
    let err = |method: &str, h: f64| {
        a.table3
            .iter()
            .find(|r| r.method == method && r.n == 4 && (r.h - h).abs() < 1e-12)
            .map_or(f64::NAN, |r| r.error)
    };
    let ratio = err("prolate", 0.125) / err("prolate", 0.0625);
    b.check("prolate N=4 error(h=1/8) / error(h=1/16)", ratio, "[0.5, 2]", (0.5..=2.0).contains(&ratio));
    for (h0, h1) in [(0.25, 0.125), (0.125, 0.0625)] {
        let r = err("legendre", h0) / err("legendre", h1);
        b.check(format!("Legendre N=4 error(h={h0}) / error(h={h1})"), r, ">= 30", r >= 30.0);
    }
    let e: Vec<f64> = a.plateau.iter().map(|r| r.l2_error).collect();
    let (lo, hi) = e.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
    b.check("u = 1 projection plateau variation", hi / lo - 1.0, "< 0.01", e.len() == 4 && hi / lo - 1.0 < 0.01);
    b.finish(6, "Nonconvergence of h-refinement")
}

fn criterion7(a: &Artifacts) -> CriterionResult {
    let mut b = Builder::new();
    let best = a
        .helmholtz_k60
        .iter()
        .filter(|r| r.c >= 40.0)
        .map(|r| r.prolate_error)
        .fold(f64::INFINITY, f64::min);
    b.check("k=60 prolate error at bandwidth >= 40", best, "< 1e-8", best < 1e-8);
    let wins = a.helmholtz_k60.iter().filter(|r| r.prolate_error < r.legendre_error).count();
    b.check("resolutions where prolate beats Legendre at matched DOF", wins as f64, ">= 1", wins >= 1);
    b.finish(7, "Helmholtz with exact solution")
}

fn criterion8(a: &Artifacts) -> CriterionResult {
    let mut b = Builder::new();
    let h = &a.helmholtz_k160;
    b.check(
        format!("coarse ({}, {}) vs reference ({}, {})", h.coarse.0, h.coarse.1, h.reference.0, h.reference.1),
        h.coarse_vs_reference,
        "<= 1e-5",
        h.coarse_vs_reference <= 1e-5,
    );
    b.check(
        format!("reference vs Legendre elements of degree {}", h.legendre_n),
        h.reference_vs_legendre,
        "<= 1e-8",
        h.reference_vs_legendre <= 1e-8,
    );
    b.finish(8, "Heterogeneous Helmholtz")
}

fn criterion9(a: &Artifacts) -> CriterionResult {
    let mut b = Builder::new();
    let p = &a.properties;
    b.check("PSWF orthonormality", p.orthonormality, "< 1e-12", p.orthonormality < 1e-12);
    b.check("Sturm-Liouville residual / (1 + chi)", p.ode_residual, "< 1e-8", p.ode_residual < 1e-8);
    b.check("c = 0 nodes vs LGL", p.legendre_nodes, "< 1e-10", p.legendre_nodes < 1e-10);
    b.check("c = 0 weights vs LGL", p.legendre_weights, "< 1e-10", p.legendre_weights < 1e-10);
    b.check("c = 0 D1 vs LGL matrix", p.legendre_d1, "< 1e-10", p.legendre_d1 < 1e-10);
    b.check(
        format!("Birkhoff conditions at N = {}", p.birkhoff_n),
        p.birkhoff_residual,
        "< 1e-9",
        p.birkhoff_residual < 1e-9,
    );
    for r in a.envelope.iter().filter(|r| r.n >= 64) {
        let d = (r.min_re - 1.0).abs().max((r.max_re - 1.0).abs());
        b.check(format!("Bin D2in spectrum in [0.8, 1.2], N = {}", r.n), d, "<= 0.2", r.min_re >= 0.8 && r.max_re <= 1.2);
    }
    b.finish(9, "Property suites")
}

pub fn evaluate(a: &Artifacts) -> Vec<CriterionResult> {
    vec![
        criterion1(a),
        criterion2(a),
        criterion3(a),
        criterion4(a),
        criterion5(a),
        criterion6(a),
        criterion7(a),
        criterion8(a),
        criterion9(a),
    ]
}

/// One line per criterion followed by indented check lines.
pub fn render(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        let status = match (r.passed, r.known_deviation) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known deviation)",
            (false, false) => "FAIL",
        };
        out.push_str(&format!("criterion {}: {} - {}\n", r.id, status, r.title));
        for c in &r.checks {
            out.push_str(&format!(
                "    [{}] {}: {:.6e} ({})\n",
                match (c.passed, c.known_deviation) {
                    (true, _) => "ok",
                    (false, true) => "deviation",
                    (false, false) => "x",
                },
                c.name,
                c.value,
                c.bound
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_is_flat() {
        let rows = constant_plateau(1.0, 2, &[2, 4, 8, 16]).unwrap();
        let e0 = rows[0].l2_error;
        assert!(rows.iter().all(|r| (r.l2_error / e0 - 1.0).abs() < 0.01 && r.l2_error > 1e-6));
    }

    #[test]
    fn lgl_matrix_corner() {
        let d = lgl_d1(4).unwrap();
        assert_eq!(d[(0, 0)], -5.0);
        let rowsum: f64 = (0..=4).map(|k| d[(2, k)]).sum();
        assert!(rowsum.abs() < 1e-13);
    }

    #[test]
    fn small_property_suite() {
        let p = property_suite(32).unwrap();
        assert!(p.orthonormality < 1e-12);
        assert!(p.ode_residual < 1e-8);
        assert!(p.legendre_d1 < 1e-10);
        assert!(p.birkhoff_residual < 1e-9);
    }

    #[test]
    fn within_order_is_symmetric() {
        assert!(within_order(9e-6, 1e-6));
        assert!(!within_order(1e-4, 1e-6));
        assert!(within_order(1.1e-7, 1e-6));
        assert!(!within_order(1e-8, 1e-6));
    }
}
