//! Piecewise `L^2` projection onto `span{psi_0 .. psi_N}` on every element.

use std::sync::Arc;

use crate::elements::Mesh1D;
use crate::error::Result;
use crate::pswf::ProlateBasis;
use crate::quadrature::gauss_legendre;
use crate::tolerances::ELEMENT_QUAD_EXTRA;

#[derive(Clone)]
pub struct HpProjection {
    pub mesh: Mesh1D,
    /// `coeffs[i][n]` is the `n`-th expansion coefficient on element `i`.
    pub coeffs: Vec<Vec<f64>>,
    /// Broken `L^2` norm of the projection error.
    pub l2_error: f64,
    basis: Arc<ProlateBasis>,
}

impl HpProjection {
    pub fn eval(&self, x: f64) -> f64 {
        let (i, y) = self.mesh.locate(x);
        self.basis.eval_all(y, 0).iter().zip(&self.coeffs[i]).map(|(a, b)| a * b).sum()
    }
}

pub fn hp_project(u: &dyn Fn(f64) -> f64, mesh: &Mesh1D, basis: &ProlateBasis) -> Result<HpProjection> {
    let (y, w) = gauss_legendre(2 * basis.truncation() + ELEMENT_QUAD_EXTRA)?;
    let psi = basis.values_matrix(&y, 0);
    let modes = basis.n() + 1;
    let mut coeffs = Vec::with_capacity(mesh.m);
    let mut err2 = 0.0;
    for i in 0..mesh.m {
        let uy: Vec<f64> = y.iter().map(|&t| u(mesh.to_physical(i, t))).collect();
        let mut c = vec![0.0; modes];
        for (l, (&ul, &wl)) in uy.iter().zip(&w).enumerate() {
            for (cn, &p) in c.iter_mut().zip(psi.row(l)) {
                *cn += wl * ul * p;
            }
        }
        let local: f64 = uy
            .iter()
            .zip(&w)
            .enumerate()
            .map(|(l, (&ul, &wl))| {
                let v: f64 = psi.row(l).iter().zip(&c).map(|(a, b)| a * b).sum();
                wl * (v - ul).powi(2)
            })
            .sum();
        err2 += 0.5 * mesh.h() * local;
        coeffs.push(c);
    }
    Ok(HpProjection { mesh: *mesh, coeffs, l2_error: err2.sqrt(), basis: Arc::new(basis.clone()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pswf::build_basis;

    #[test]
    fn constants_exact_for_legendre() {
        for n in [1, 3, 5] {
            let basis = build_basis(0.0, n).unwrap();
            for m in [1, 3] {
                let mesh = Mesh1D::new(0.0, 1.0, m).unwrap();
                let p = hp_project(&|_| 1.0, &mesh, &basis).unwrap();
                assert!(p.l2_error < 1e-13, "{}", p.l2_error);
                assert!((p.eval(0.37) - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn constant_plateau_matches_closed_form() {
        // For u = 1 the local error is 2 - sum mu_n^2 with mu_n = int psi_n,
        // scaled by h/2 and summed over (b - a)/h elements.
        let basis = build_basis(1.0, 2).unwrap();
        let mu2: f64 = (0..=2).map(|n| basis.integral(n).powi(2)).sum();
        let expected = (0.5 * (2.0 - mu2)).sqrt();
        let mut errs = vec![];
        for m in [2, 4, 8, 16] {
            let mesh = Mesh1D::new(0.0, 1.0, m).unwrap();
            let e = hp_project(&|_| 1.0, &mesh, &basis).unwrap().l2_error;
            assert!((e - expected).abs() < 1e-3 * expected, "{e} vs {expected}");
            assert!(e > 1e-6);
            errs.push(e);
        }
        let (lo, hi) = errs.iter().fold((f64::MAX, 0.0f64), |(a, b), &e| (a.min(e), b.max(e)));
        assert!(hi / lo - 1.0 < 0.01);
    }

    #[test]
    fn constant_decays_in_n() {
        let mesh = Mesh1D::new(0.0, 1.0, 2).unwrap();
        let errs: Vec<f64> = [2usize, 4, 8, 16]
            .iter()
            .map(|&n| hp_project(&|_| 1.0, &mesh, &build_basis(n as f64 / 2.0, n).unwrap()).unwrap().l2_error)
            .collect();
        for w in errs.windows(2) {
            assert!(w[1] < 0.5 * w[0], "{errs:?}");
        }
    }

    #[test]
    fn smooth_function_converges_in_n() {
        let mesh = Mesh1D::new(-1.0, 2.0, 3).unwrap();
        let basis = build_basis(4.0, 20).unwrap();
        let p = hp_project(&|x: f64| (2.0 * x).sin(), &mesh, &basis).unwrap();
        assert!(p.l2_error < 1e-10, "{}", p.l2_error);
        assert!((p.eval(0.3) - 0.6f64.sin()).abs() < 1e-9);
    }
}
