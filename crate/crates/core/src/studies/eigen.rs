//! Eigenvalue studies of the interior second-derivative matrices.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::birkhoff::build_birkhoff;
use crate::cardinal::{modal_diffmats, rational_diffmats};
use crate::error::Result;
use crate::kr_rule::{bandwidth_for, select_n};
use crate::linalg::{dense_eig, DenseMatrix};
use crate::pswf::build_basis;
use crate::quadrature::ProlateGrid;
use crate::studies::bessel::j1_zeros;
use crate::tolerances::{EIG_ACCURATE, EIG_ONE_DIGIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigOperator {
    /// `u''` on `(-1, 1)`.
    Laplacian,
    /// `u'' + u' / r - u / r^2` on `(0, 1)`.
    Bessel,
}

impl EigOperator {
    pub fn tag(self) -> &'static str {
        match self {
            EigOperator::Laplacian => "laplacian",
            EigOperator::Bessel => "bessel",
        }
    }

    /// The `count` largest exact eigenvalues, in decreasing order.
    pub fn exact(self, count: usize) -> Result<Vec<f64>> {
        Ok(match self {
            EigOperator::Laplacian => (1..=count).map(|j| -(j as f64 * PI / 2.0).powi(2)).collect(),
            EigOperator::Bessel => j1_zeros(count)?.into_iter().map(|r| -r * r).collect(),
        })
    }

    /// Interior discrete operator built from full first/second differentiation
    /// matrices on the reference grid `nodes`.
    pub fn assemble(self, nodes: &[f64], d1: &DenseMatrix<f64>, d2: &DenseMatrix<f64>) -> DenseMatrix<f64> {
        let d2in = d2.interior();
        match self {
            EigOperator::Laplacian => d2in,
            EigOperator::Bessel => {
                // r = (x + 1) / 2, d/dr = 2 d/dx
                let n = nodes.len() - 1;
                let r: Vec<f64> = nodes[1..n].iter().map(|x| 0.5 * (x + 1.0)).collect();
                let inv: Vec<f64> = r.iter().map(|r| 2.0 / r).collect();
                let mut a = d2in.map(|v| 4.0 * v).add(&d1.interior().scale_rows(&inv));
                for (i, ri) in r.iter().enumerate() {
                    a[(i, i)] -= 1.0 / (ri * ri);
                }
                a
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigComparison {
    pub label: String,
    /// Relative errors after pairing by rank.
    pub errors: Vec<f64>,
    /// Indices with relative error below `1e-12`.
    pub accurate: usize,
    /// Indices with relative error below `0.1`.
    pub one_digit: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigStudyReport {
    pub operator: EigOperator,
    pub c: f64,
    pub n: usize,
    pub eps: f64,
    pub prolate: EigComparison,
    pub rational: EigComparison,
    pub legendre: EigComparison,
}

/// How discrete eigenvalues are matched to exact ones.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// Both lists sorted by decreasing real part, matched by position.
    #[default]
    Rank,
    /// Each exact eigenvalue takes the closest discrete real part.
    Nearest,
}

/// Sorts real parts in decreasing order and pairs them with `exact` by rank.
pub fn compare_by_rank(label: &str, a: &DenseMatrix<f64>, exact: &[f64]) -> Result<EigComparison> {
    compare(label, a, exact, Pairing::Rank)
}

pub fn compare(label: &str, a: &DenseMatrix<f64>, exact: &[f64], pairing: Pairing) -> Result<EigComparison> {
    let mut re: Vec<f64> = dense_eig(a)?.into_iter().map(|z| z.re).collect();
    re.sort_by(|x, y| y.total_cmp(x));
    let errors: Vec<f64> = match pairing {
        Pairing::Rank => re.iter().zip(exact).map(|(l, e)| (l - e).abs() / e.abs()).collect(),
        Pairing::Nearest => exact
            .iter()
            .map(|e| re.iter().map(|l| (l - e).abs()).fold(f64::INFINITY, f64::min) / e.abs())
            .collect(),
    };
    Ok(EigComparison {
        label: label.to_string(),
        accurate: errors.iter().filter(|&&e| e < EIG_ACCURATE).count(),
        one_digit: errors.iter().filter(|&&e| e < EIG_ONE_DIGIT).count(),
        errors,
    })
}

/// Eigenvalue study at the pairing `(c, N)` selected for tolerance `eps`.
pub fn run_eig_study(op: EigOperator, c: f64, eps: f64) -> Result<EigStudyReport> {
    let n = select_n(c, eps)?.n_star;
    run_eig_study_at(op, c, n, eps)
}

pub fn run_eig_study_at(op: EigOperator, c: f64, n: usize, eps: f64) -> Result<EigStudyReport> {
    run_eig_study_with(op, c, n, eps, Pairing::Rank)
}

pub fn run_eig_study_with(op: EigOperator, c: f64, n: usize, eps: f64, pairing: Pairing) -> Result<EigStudyReport> {
    let exact = op.exact(n - 1)?;
    let basis = build_basis(c, n)?;
    let grid = ProlateGrid::new(&basis)?;
    let (d1, d2) = modal_diffmats(&basis, &grid)?;
    let (dh1, dh2) = rational_diffmats(&basis, &grid)?;
    let prolate = compare("prolate", &op.assemble(&grid.nodes, &d1, &d2), &exact, pairing)?;
    let rational = compare("prolate-rational", &op.assemble(&grid.nodes, &dh1, &dh2), &exact, pairing)?;
    let leg = build_basis(0.0, n)?;
    let lgrid = ProlateGrid::new(&leg)?;
    let (l1, l2) = modal_diffmats(&leg, &lgrid)?;
    let legendre = compare("legendre", &op.assemble(&lgrid.nodes, &l1, &l2), &exact, pairing)?;
    Ok(EigStudyReport { operator: op, c, n, eps, prolate, rational, legendre })
}

/// Largest and smallest eigenvalue magnitudes of the interior second-derivative matrices.
#[derive(Clone, Debug, Serialize)]
pub struct ExtremeEigRow {
    pub n: usize,
    pub c: f64,
    pub prolate_max: f64,
    pub prolate_min: f64,
    pub rational_max: f64,
    pub rational_min: f64,
    pub legendre_max: f64,
    pub legendre_min: f64,
}

fn extremes(a: &DenseMatrix<f64>) -> Result<(f64, f64)> {
    let mags: Vec<f64> = dense_eig(a)?.iter().map(|z| z.norm()).collect();
    Ok((mags.iter().cloned().fold(0.0, f64::max), mags.iter().cloned().fold(f64::INFINITY, f64::min)))
}

/// For each `N`, the bandwidth is the one the pairing rule maps to `N` at `eps`.
pub fn run_extreme_eigs(ns: &[usize], eps: f64) -> Result<Vec<ExtremeEigRow>> {
    ns.iter()
        .map(|&n| {
            let c = bandwidth_for(n, eps);
            let basis = build_basis(c, n)?;
            let grid = ProlateGrid::new(&basis)?;
            let (_, d2) = modal_diffmats(&basis, &grid)?;
            let (_, dh2) = rational_diffmats(&basis, &grid)?;
            let leg = build_basis(0.0, n)?;
            let lgrid = ProlateGrid::new(&leg)?;
            let (_, l2) = modal_diffmats(&leg, &lgrid)?;
            let (prolate_max, prolate_min) = extremes(&d2.interior())?;
            let (rational_max, rational_min) = extremes(&dh2.interior())?;
            let (legendre_max, legendre_min) = extremes(&l2.interior())?;
            Ok(ExtremeEigRow { n, c, prolate_max, prolate_min, rational_max, rational_min, legendre_max, legendre_min })
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Spectrum of `Bin D2in` (and of `Bin Dh2in`) around one.
#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeRow {
    pub n: usize,
    pub c: f64,
    pub min_re: f64,
    pub max_re: f64,
    pub max_abs_im: f64,
    pub max_dist_from_one: f64,
    pub rational_min_re: f64,
    pub rational_max_re: f64,
    pub rational_max_dist_from_one: f64,
}

pub fn run_envelope(ns: &[usize]) -> Result<Vec<EnvelopeRow>> {
    ns.iter()
        .map(|&n| {
            let c = n as f64 / 2.0;
            let basis = build_basis(c, n)?;
            let grid = ProlateGrid::new(&basis)?;
            let bb = build_birkhoff(&basis, &grid)?;
            let (_, d2) = modal_diffmats(&basis, &grid)?;
            let (_, dh2) = rational_diffmats(&basis, &grid)?;
            let ev = dense_eig(&bb.bin.matmul(&d2.interior()))?;
            let evh = dense_eig(&bb.bin.matmul(&dh2.interior()))?;
            let range = |v: &[num_complex::Complex64]| {
                v.iter().fold((f64::INFINITY, f64::NEG_INFINITY, 0.0f64, 0.0f64), |(lo, hi, im, d), z| {
                    (lo.min(z.re), hi.max(z.re), im.max(z.im.abs()), d.max((z - 1.0).norm()))
                })
            };
            let (min_re, max_re, max_abs_im, max_dist_from_one) = range(&ev);
            let (rational_min_re, rational_max_re, _, rational_max_dist_from_one) = range(&evh);
            Ok(EnvelopeRow {
                n,
                c,
                min_re,
                max_re,
                max_abs_im,
                max_dist_from_one,
                rational_min_re,
                rational_max_re,
                rational_max_dist_from_one,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_laplacian_study() {
        let rep = run_eig_study_at(EigOperator::Laplacian, 20.0, 34, 1e-14).unwrap();
        assert_eq!(rep.prolate.errors.len(), 33);
        assert!(rep.prolate.accurate >= rep.legendre.accurate);
        assert!(rep.prolate.errors[0] < 1e-12);
        assert!(rep.legendre.errors[0] < 1e-12);
    }

    #[test]
    fn nearest_pairing_never_worse_than_rank() {
        let rank = run_eig_study_with(EigOperator::Bessel, 20.0, 34, 1e-14, Pairing::Rank).unwrap();
        let near = run_eig_study_with(EigOperator::Bessel, 20.0, 34, 1e-14, Pairing::Nearest).unwrap();
        for (a, b) in near.legendre.errors.iter().zip(&rank.legendre.errors) {
            assert!(a <= b);
        }
        assert!(near.prolate.accurate >= rank.prolate.accurate);
    }

    #[test]
    fn bessel_low_modes() {
        let rep = run_eig_study_at(EigOperator::Bessel, 20.0, 34, 1e-14).unwrap();
        assert!(rep.prolate.errors[0] < 1e-10, "{}", rep.prolate.errors[0]);
        assert!(rep.legendre.errors[..5].iter().all(|&e| e < 1e-10));
    }

    #[test]
    fn pairing_by_rank() {
        let a = DenseMatrix::diagonal(&[-9.0, -1.0, -4.5]);
        let cmp = compare_by_rank("t", &a, &[-1.0, -4.0, -9.0]).unwrap();
        assert_eq!(cmp.errors[0], 0.0);
        assert!((cmp.errors[1] - 0.125).abs() < 1e-15);
        assert_eq!(cmp.accurate, 2);
        assert_eq!(cmp.one_digit, 2);
    }

    #[test]
    fn slope_of_power_law() {
        let x = [2.0, 4.0, 8.0, 16.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-2.5)).collect();
        assert!((loglog_slope(&x, &y) + 2.5).abs() < 1e-12);
    }

    #[test]
    fn legendre_extreme_growth_is_quartic() {
        let rows = run_extreme_eigs(&[16, 32, 64], 1e-14).unwrap();
        let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
        let lmax: Vec<f64> = rows.iter().map(|r| r.legendre_max).collect();
        let pmax: Vec<f64> = rows.iter().map(|r| r.prolate_max).collect();
        let sl = loglog_slope(&ns, &lmax);
        assert!((sl - 4.0).abs() < 0.3, "{sl}");
        assert!(loglog_slope(&ns, &pmax) < sl);
        let r = &rows[0];
        assert!((r.prolate_min / r.rational_min - 1.0).abs() < 0.2);
    }

    #[test]
    fn envelope_near_one() {
        let rows = run_envelope(&[16, 32]).unwrap();
        assert!(rows[1].max_dist_from_one <= rows[0].max_dist_from_one + 1e-12);
        assert!(rows[1].min_re > 0.5 && rows[1].max_re < 1.5);
    }
}
