//! Cardinal bases on the prolate-Lobatto grid and their differentiation
//! matrices.
//!
//! Two constructions are provided. The modal one spans `psi_0 .. psi_N`
//! and differentiates through `Psi^(m) Psi^{-1}`. The rational one uses
//! `l_k(x) = s(x) / (s'(x_k) (x - x_k))` with `s = (1 - x^2) psi_N'`, whose
//! derivatives at the nodes have closed forms needing only `psi_N(x_j)`,
//! `chi_N` and `c`.

use log::warn;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Lu};
use crate::pswf::ProlateBasis;
use crate::quadrature::ProlateGrid;
use crate::tolerances::{INTERPOLATION_CONDITION_LIMIT, NODE_VALUE_FLOOR, Q_ADMISSIBLE};

/// Node-value and differentiation matrices on one grid.
#[derive(Clone, Debug)]
pub struct DiffOperators {
    pub nodes: Vec<f64>,
    pub psi: DenseMatrix<f64>,
    pub psi1: DenseMatrix<f64>,
    pub psi2: DenseMatrix<f64>,
    pub d1: DenseMatrix<f64>,
    pub d2: DenseMatrix<f64>,
    pub dh1: DenseMatrix<f64>,
    pub dh2: DenseMatrix<f64>,
    /// `c / sqrt(chi_N)`.
    pub q: f64,
}

impl DiffOperators {
    pub fn new(basis: &ProlateBasis, grid: &ProlateGrid) -> Result<Self> {
        check_grid(basis, grid)?;
        let q = basis.q_ratio();
        if q >= Q_ADMISSIBLE {
            warn!("q = {q:.4} exceeds the admissibility bound {Q_ADMISSIBLE}; accuracy may degrade");
        }
        let psi = basis.values_matrix(&grid.nodes, 0);
        let psi1 = basis.values_matrix(&grid.nodes, 1);
        let psi2 = basis.values_matrix(&grid.nodes, 2);
        let lu = factor_psi_transpose(&psi, q)?;
        let d1 = apply_inverse(&lu, &psi1);
        let d2 = apply_inverse(&lu, &psi2);
        let (dh1, dh2) = rational_diffmats(basis, grid)?;
        Ok(Self { nodes: grid.nodes.clone(), psi, psi1, psi2, d1, d2, dh1, dh2, q })
    }

    pub fn n(&self) -> usize {
        self.nodes.len() - 1
    }
}

fn check_grid(basis: &ProlateBasis, grid: &ProlateGrid) -> Result<()> {
    if grid.n != basis.n() || grid.nodes.len() != basis.n() + 1 {
        return Err(Error::InvalidArgument(format!(
            "grid has N = {} but basis has N = {}",
            grid.n,
            basis.n()
        )));
    }
    Ok(())
}

fn factor_psi_transpose(psi: &DenseMatrix<f64>, q: f64) -> Result<Lu<f64>> {
    let lu = Lu::factor(&psi.transpose()).map_err(|_| Error::IllConditionedInterpolation {
        condition: f64::INFINITY,
        q,
    })?;
    let condition = lu.condition_estimate();
    if !(condition <= INTERPOLATION_CONDITION_LIMIT) {
        return Err(Error::IllConditionedInterpolation { condition, q });
    }
    Ok(lu)
}

/// `X Psi^{-1}` via `Psi^T Y = X^T`, `Y^T`.
fn apply_inverse(lu: &Lu<f64>, x: &DenseMatrix<f64>) -> DenseMatrix<f64> {
    lu.solve_mat(&x.transpose()).transpose()
}

/// Modal differentiation matrices `D^(1)`, `D^(2)`.
pub fn modal_diffmats(basis: &ProlateBasis, grid: &ProlateGrid) -> Result<(DenseMatrix<f64>, DenseMatrix<f64>)> {
    check_grid(basis, grid)?;
    let psi = basis.values_matrix(&grid.nodes, 0);
    let lu = factor_psi_transpose(&psi, basis.q_ratio())?;
    Ok((
        apply_inverse(&lu, &basis.values_matrix(&grid.nodes, 1)),
        apply_inverse(&lu, &basis.values_matrix(&grid.nodes, 2)),
    ))
}

/// Values `h_0(x) .. h_N(x)` of the modal cardinal functions.
pub fn modal_cardinal_values(basis: &ProlateBasis, grid: &ProlateGrid, x: f64) -> Result<Vec<f64>> {
    check_grid(basis, grid)?;
    let psi = basis.values_matrix(&grid.nodes, 0);
    let lu = factor_psi_transpose(&psi, basis.q_ratio())?;
    // h(x)^T = psi(x)^T Psi^{-1}
    Ok(lu.solve_vec(&basis.eval_all(x, 0)))
}

/// Value of the rational cardinal function `l_k` at `x`, by its defining formula.
pub fn rational_cardinal(basis: &ProlateBasis, grid: &ProlateGrid, k: usize, x: f64) -> f64 {
    let n = basis.n();
    let c2 = basis.c() * basis.c();
    let chi = basis.chi()[n];
    let xk = grid.nodes[k];
    let s = (1.0 - x * x) * basis.eval_psi(n, x.clamp(-1.0, 1.0), 1).unwrap_or(f64::NAN);
    let ds_k = (c2 * xk * xk - chi) * basis.eval_psi(n, xk, 0).unwrap_or(f64::NAN);
    s / (ds_k * (x - xk))
}

/// Rational-cardinal differentiation matrices `Dh^(1)`, `Dh^(2)`.
pub fn rational_diffmats(basis: &ProlateBasis, grid: &ProlateGrid) -> Result<(DenseMatrix<f64>, DenseMatrix<f64>)> {
    check_grid(basis, grid)?;
    let n = basis.n();
    let x = &grid.nodes;
    let c2 = basis.c() * basis.c();
    let chi = basis.chi()[n];
    let q2 = c2 / chi;
    let psi: Vec<f64> = x.iter().map(|&xj| basis.eval_psi(n, xj, 0)).collect::<Result<_>>()?;
    let scale = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (j, &v) in psi.iter().enumerate() {
        if v.abs() < NODE_VALUE_FLOOR * scale {
            return Err(Error::VanishingNodeValue { node: j, value: v });
        }
    }

    // s'(x_j) / chi and s''(x_j) / chi.
    let ds: Vec<f64> = x.iter().zip(&psi).map(|(&xj, &p)| (q2 * xj * xj - 1.0) * p).collect();
    let mut dds: Vec<f64> = x.iter().zip(&psi).map(|(&xj, &p)| 2.0 * q2 * xj * p).collect();
    let d = c2 - chi;
    dds[0] = -(2.0 * c2 - 0.5 * d * d) * psi[0] / chi;
    dds[n] = (2.0 * c2 - 0.5 * d * d) * psi[n] / chi;

    let mut dh1 = DenseMatrix::zeros(n + 1, n + 1);
    for j in 0..=n {
        for k in 0..=n {
            if j != k {
                dh1[(j, k)] = ds[j] / (ds[k] * (x[j] - x[k]));
            }
        }
    }
    let corner = q2 / (q2 - 1.0) - chi * (q2 - 1.0) / 4.0;
    dh1[(0, 0)] = -corner;
    dh1[(n, n)] = corner;
    for k in 1..n {
        dh1[(k, k)] = q2 * x[k] / (q2 * x[k] * x[k] - 1.0);
    }

    let mut dh2 = DenseMatrix::zeros(n + 1, n + 1);
    for j in 0..=n {
        for k in 0..=n {
            if j != k {
                dh2[(j, k)] = (dds[j] / ds[k] - 2.0 * dh1[(j, k)]) / (x[j] - x[k]);
            }
        }
    }
    let e = c2 - chi + 1.0;
    let end_diag = 2.0 * q2 / (3.0 * (q2 - 1.0)) + e * e / 24.0 - 5.0 * c2 / 6.0 - 1.0 / 24.0;
    dh2[(0, 0)] = end_diag;
    dh2[(n, n)] = end_diag;
    for k in 1..n {
        let t = q2 * x[k] * x[k] - 1.0;
        dh2[(k, k)] = (2.0 / 3.0) * q2 / t + (chi / 3.0) * t / (1.0 - x[k] * x[k]);
    }
    Ok((dh1, dh2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendre;
    use crate::pswf::build_basis;

    fn setup(c: f64, n: usize) -> (ProlateBasis, ProlateGrid) {
        let b = build_basis(c, n).unwrap();
        let g = ProlateGrid::new(&b).unwrap();
        (b, g)
    }

    fn lgl_diffmat(x: &[f64]) -> DenseMatrix<f64> {
        let n = x.len() - 1;
        let nf = n as f64;
        let p: Vec<f64> = x.iter().map(|&xi| legendre::classical(n, xi).0).collect();
        let mut d = DenseMatrix::from_fn(n + 1, n + 1, |j, k| if j == k { 0.0 } else { p[j] / (p[k] * (x[j] - x[k])) });
        d[(0, 0)] = -nf * (nf + 1.0) / 4.0;
        d[(n, n)] = nf * (nf + 1.0) / 4.0;
        d
    }

    #[test]
    fn legendre_corner_entry() {
        let (b, g) = setup(0.0, 4);
        let (d1, _) = modal_diffmats(&b, &g).unwrap();
        assert!((d1[(0, 0)] + 5.0).abs() < 1e-10);
    }

    #[test]
    fn zero_bandwidth_matches_lgl_matrix() {
        let (b, g) = setup(0.0, 8);
        let ops = DiffOperators::new(&b, &g).unwrap();
        let lgl = lgl_diffmat(&g.nodes);
        assert!(ops.d1.sub(&lgl).max_abs() < 1e-10);
        assert!(ops.dh1.sub(&ops.d1).max_abs() < 1e-10);
        assert!((ops.dh1[(0, 0)] + 18.0).abs() < 1e-12);
        assert!(ops.dh2.sub(&ops.d2).max_abs() < 1e-8 * ops.d2.max_abs());
    }

    #[test]
    fn modal_matrices_reproduce_psi_derivatives() {
        let (b, g) = setup(10.0, 24);
        let ops = DiffOperators::new(&b, &g).unwrap();
        let r1 = ops.d1.matmul(&ops.psi).sub(&ops.psi1).max_abs();
        let r2 = ops.d2.matmul(&ops.psi).sub(&ops.psi2).max_abs();
        assert!(r1 < 1e-8 * ops.psi1.max_abs());
        assert!(r2 < 1e-8 * ops.psi2.max_abs());
    }

    #[test]
    fn constant_is_nearly_annihilated() {
        let (b, g) = setup(10.0, 24);
        let (d1, _) = modal_diffmats(&b, &g).unwrap();
        let worst = (0..=24).map(|j| d1.row(j).iter().sum::<f64>().abs()).fold(0.0, f64::max);
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn second_derivative_close_to_square_of_first() {
        // psi_n' is not in the span, so D1 * D1 and D2 differ at the level of
        // the interpolation error of the top modes' derivatives.
        let (b, g) = setup(10.0, 24);
        let (d1, d2) = modal_diffmats(&b, &g).unwrap();
        let sq = d1.matmul(&d1);
        let diff = d2.interior().sub(&sq.interior()).max_abs();
        assert!(diff < 1e-3 * d2.interior().max_abs(), "{diff}");
        let u: Vec<f64> = g.nodes.iter().map(|x| (5.0 * x).sin()).collect();
        let a = d2.matvec(&u);
        let b2 = sq.matvec(&u);
        for (j, x) in g.nodes.iter().enumerate() {
            let exact = -25.0 * (5.0 * x).sin();
            assert!((a[j] - exact).abs() < 1e-6 && (b2[j] - exact).abs() < 1e-6);
        }
    }

    #[test]
    fn modal_cardinal_interpolates() {
        let (b, g) = setup(10.0, 24);
        for j in [0, 3, 12, 24] {
            let h = modal_cardinal_values(&b, &g, g.nodes[j]).unwrap();
            for (k, v) in h.iter().enumerate() {
                let e = if j == k { 1.0 } else { 0.0 };
                assert!((v - e).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rational_first_derivative_matches_finite_difference() {
        let (b, g) = setup(12.0, 24);
        let (dh1, _) = rational_diffmats(&b, &g).unwrap();
        let h = 1e-5;
        for &(j, k) in &[(3usize, 7usize), (10, 11), (12, 2), (20, 5)] {
            let f = |x| rational_cardinal(&b, &g, k, x);
            let fd = (f(g.nodes[j] + h) - f(g.nodes[j] - h)) / (2.0 * h);
            assert!(((fd - dh1[(j, k)]) / dh1[(j, k)]).abs() < 1e-5, "{j},{k}: {fd} vs {}", dh1[(j, k)]);
        }
    }

    #[test]
    fn rational_second_derivative_matches_finite_difference() {
        let (b, g) = setup(12.0, 24);
        let (_, dh2) = rational_diffmats(&b, &g).unwrap();
        let h = 1e-4;
        for &(j, k) in &[(3usize, 7usize), (10, 10), (12, 2), (20, 5), (0, 4), (2, 24)] {
            let f = |x: f64| rational_cardinal(&b, &g, k, x);
            let xj = g.nodes[j];
            let fd = if j == 0 {
                (2.0 * f(xj) - 5.0 * f(xj + h) + 4.0 * f(xj + 2.0 * h) - f(xj + 3.0 * h)) / (h * h)
            } else {
                (f(xj + h) - 2.0 * f(xj) + f(xj - h)) / (h * h)
            };
            let fd = if j == k && j > 0 { (f(xj + h) - 2.0 + f(xj - h)) / (h * h) } else { fd };
            let tol = 1e-4 * dh2[(j, k)].abs().max(1.0);
            assert!((fd - dh2[(j, k)]).abs() < tol, "{j},{k}: {fd} vs {}", dh2[(j, k)]);
        }
    }

    #[test]
    fn rational_endpoint_diagonal_matches_third_derivative_route() {
        // l_N''(1) = s'''(1) / (3 s'(1)).
        let (b, g) = setup(12.0, 24);
        let (_, dh2) = rational_diffmats(&b, &g).unwrap();
        let n = 24;
        let c2 = 144.0;
        let chi = b.chi()[n];
        let p = b.eval_psi(n, 1.0, 0).unwrap();
        let dp = b.eval_psi(n, 1.0, 1).unwrap();
        let ddp = b.eval_psi(n, 1.0, 2).unwrap();
        let s3 = 2.0 * c2 * p + 4.0 * c2 * dp + (c2 - chi) * ddp;
        let s1 = (c2 - chi) * p;
        let expected = s3 / (3.0 * s1);
        assert!(((dh2[(n, n)] - expected) / expected).abs() < 1e-8);
    }

    #[test]
    fn endpoint_slope_relation_and_antisymmetry() {
        let (b, g) = setup(12.0, 24);
        let n = 24;
        let chi = b.chi()[n];
        for s in [-1.0, 1.0] {
            let lhs = b.eval_psi(n, s, 1).unwrap();
            let rhs = s * (chi - 144.0) * b.eval_psi(n, s, 0).unwrap() / 2.0;
            assert!(((lhs - rhs) / rhs).abs() < 1e-8);
        }
        let (dh1, _) = rational_diffmats(&b, &g).unwrap();
        assert_eq!(dh1[(n, n)], -dh1[(0, 0)]);
    }

    #[test]
    fn mismatched_grid_rejected() {
        let (b, _) = setup(4.0, 8);
        let (_, g) = setup(4.0, 10);
        assert!(matches!(DiffOperators::new(&b, &g), Err(Error::InvalidArgument(_))));
    }
}
