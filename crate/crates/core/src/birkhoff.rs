//! Birkhoff-type interpolation basis on the prolate-Lobatto grid.
//!
//! `beta_0 = (1 - x) / 2` and `beta_N = (1 + x) / 2` carry the endpoint values.
//! For `1 <= k <= N - 1`, `beta_k` vanishes at `x = +-1` and its second
//! derivative interpolates `delta_jk` at the interior nodes. Each interior
//! `beta_k` is a combination of `phi_0 .. phi_{N-2}`, where `phi_n'' = psi_n`
//! and `phi_n(+-1) = 0`; all of it is kept in Legendre coefficient form.

use crate::error::{Error, Result};
use crate::legendre;
use crate::linalg::{DenseMatrix, Lu};
use crate::pswf::ProlateBasis;
use crate::quadrature::ProlateGrid;

/// Legendre coefficients of `phi_0 .. phi_{N-2}`, one row each.
pub fn build_phi(basis: &ProlateBasis) -> Result<DenseMatrix<f64>> {
    let n = basis.n();
    if n < 2 {
        return Err(Error::InvalidArgument("Birkhoff basis needs N >= 2".into()));
    }
    let len = basis.truncation() + 2;
    let mut out = DenseMatrix::zeros(n - 1, len);
    for (i, row) in (0..n - 1).map(|i| (i, phi_coefficients(basis.coeff_row(i)))) {
        out.row_mut(i)[..row.len()].copy_from_slice(&row);
    }
    Ok(out)
}

/// `phi(x) = x F(x) - G(x) + K (1 + x) / 2` with `F = int psi`, `G = int t psi`
/// taken from `-1`, and `K = G(1) - F(1)`.
fn phi_coefficients(psi: &[f64]) -> Vec<f64> {
    let f = legendre::integrate_from_minus_one(psi);
    let g = legendre::integrate_from_minus_one(&legendre::mul_x(psi));
    let k = legendre::value_at_one(&g) - legendre::value_at_one(&f);
    let mut out = legendre::mul_x(&f);
    for (o, gv) in out.iter_mut().zip(&g) {
        *o -= gv;
    }
    // (1 + x) / 2 = Pbar_0 / sqrt(2) + Pbar_1 / (2 sqrt(3/2))
    out[0] += k * std::f64::consts::FRAC_1_SQRT_2;
    out[1] += k * 0.5 / 1.5f64.sqrt();
    out
}

#[derive(Clone, Debug)]
pub struct BirkhoffBasis {
    pub nodes: Vec<f64>,
    /// `A = Psibar^{-1}`, rows indexed by mode `0..N-2`, columns by interior node.
    pub a: DenseMatrix<f64>,
    pub phi: DenseMatrix<f64>,
    /// Row `k - 1` holds the Legendre coefficients of interior `beta_k`.
    pub beta: DenseMatrix<f64>,
    /// `B[j][k] = beta_k(x_j)`.
    pub b: DenseMatrix<f64>,
    /// `B1[j][k] = beta_k'(x_j)`.
    pub b1: DenseMatrix<f64>,
    pub bin: DenseMatrix<f64>,
    pub b1in: DenseMatrix<f64>,
}

pub fn build_birkhoff(basis: &ProlateBasis, grid: &ProlateGrid) -> Result<BirkhoffBasis> {
    let n = basis.n();
    if grid.n != n {
        return Err(Error::InvalidArgument(format!("grid has N = {} but basis has N = {n}", grid.n)));
    }
    let phi = build_phi(basis)?;
    let interior = grid.interior_nodes();
    let all = basis.values_matrix(interior, 0);
    let psibar = all.block(0, n - 1, 0, n - 1);
    let lu = Lu::factor(&psibar).map_err(|e| Error::DegenerateGrid(format!("interior PSWF matrix: {e}")))?;
    let a = lu.inverse();
    // beta_k = sum_m A[m][k] phi_m, i.e. beta = A^T phi.
    let beta = a.transpose().matmul(&phi);

    let mut b = DenseMatrix::zeros(n + 1, n + 1);
    let mut b1 = DenseMatrix::zeros(n + 1, n + 1);
    for (j, &x) in grid.nodes.iter().enumerate() {
        b[(j, 0)] = 0.5 * (1.0 - x);
        b[(j, n)] = 0.5 * (1.0 + x);
        b1[(j, 0)] = -0.5;
        b1[(j, n)] = 0.5;
        let [p, d1, _] = legendre::table(x, beta.cols(), 1);
        let end = j == 0 || j == n;
        for k in 1..n {
            let row = beta.row(k - 1);
            if !end {
                b[(j, k)] = row.iter().zip(&p).map(|(u, v)| u * v).sum();
            }
            b1[(j, k)] = row.iter().zip(&d1).map(|(u, v)| u * v).sum();
        }
    }
    let bin = b.interior();
    let b1in = b1.interior();
    Ok(BirkhoffBasis { nodes: grid.nodes.clone(), a, phi, beta, b, b1, bin, b1in })
}

impl BirkhoffBasis {
    pub fn n(&self) -> usize {
        self.nodes.len() - 1
    }

    /// `beta_0^{(m)}(x) .. beta_N^{(m)}(x)` for `m <= 2`.
    pub fn eval_all(&self, x: f64, m: usize) -> Vec<f64> {
        let n = self.n();
        let table = legendre::table(x, self.beta.cols(), m);
        let p = &table[m];
        let mut out = vec![0.0; n + 1];
        for k in 1..n {
            out[k] = self.beta.row(k - 1).iter().zip(p).map(|(u, v)| u * v).sum();
        }
        let (e0, en) = match m {
            0 => (0.5 * (1.0 - x), 0.5 * (1.0 + x)),
            1 => (-0.5, 0.5),
            _ => (0.0, 0.0),
        };
        out[0] = e0;
        out[n] = en;
        out
    }

    /// Matrix of `beta_k''(x_j)` over interior nodes; the identity up to rounding.
    pub fn interior_second_derivatives(&self) -> DenseMatrix<f64> {
        let n = self.n();
        let mut out = DenseMatrix::zeros(n - 1, n - 1);
        for j in 1..n {
            let v = self.eval_all(self.nodes[j], 2);
            out.row_mut(j - 1).copy_from_slice(&v[1..n]);
        }
        out
    }

    /// Largest deviation from the Birkhoff conditions at the nodes.
    pub fn condition_residual(&self) -> f64 {
        let n = self.n();
        let d2 = self.interior_second_derivatives().sub(&DenseMatrix::identity(n - 1)).max_abs();
        let ends = [-1.0, 1.0]
            .iter()
            .flat_map(|&x| self.eval_all(x, 0)[1..n].to_vec())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        d2.max(ends)
    }
}

/// `u(-1) beta_0(x) + sum_k u''(x_k) beta_k(x) + u(1) beta_N(x)`.
pub fn birkhoff_interpolate(bb: &BirkhoffBasis, u_minus: f64, u2_interior: &[f64], u_plus: f64, x: f64) -> Result<f64> {
    let n = bb.n();
    if u2_interior.len() != n - 1 {
        return Err(Error::InvalidArgument(format!(
            "expected {} interior second derivatives, got {}",
            n - 1,
            u2_interior.len()
        )));
    }
    let v = bb.eval_all(x, 0);
    Ok(u_minus * v[0] + u_plus * v[n] + u2_interior.iter().zip(&v[1..n]).map(|(a, b)| a * b).sum::<f64>())
}
