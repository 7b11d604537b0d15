//! `(s(x)^2 u')' + k^2 n(x)^2 u = f` on `(a, b)` with `u(a)` given and either
//! a Dirichlet value or the radiation condition `s u' - i k n u = 0` at `b`.
//! Here `s` is the sound speed and `n` the refraction index.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::birkhoff::build_birkhoff;
use crate::elements::{
    sem::solve_sem, solve_prolate_element, ElementProblem, ElementSolution, Mesh1D, PointCoefs, RightBoundary,
};
use crate::error::{Error, Result};
use crate::pswf::build_basis;
use crate::quadrature::ProlateGrid;

/// Piecewise-smooth medium: `profile(piece, x)` returns `(s, s', n)`.
#[derive(Clone, Copy)]
pub struct Medium {
    pub a: f64,
    pub b: f64,
    pub breaks: &'static [f64],
    pub profile: fn(usize, f64) -> (f64, f64, f64),
}

impl Medium {
    /// Index of the piece containing `x`, ties going right.
    pub fn piece(&self, x: f64) -> usize {
        self.breaks.iter().filter(|&&z| z <= x).count()
    }

    fn at(&self, x: f64, hint: f64) -> (f64, f64, f64) {
        (self.profile)(self.piece(hint), x)
    }
}

#[derive(Clone, Copy, Debug)]
pub enum HelmholtzRight {
    Dirichlet(Complex64),
    Radiation,
}

#[derive(Clone, Copy)]
pub struct HelmholtzProblem {
    pub medium: Medium,
    pub k: f64,
    pub u_a: Complex64,
    pub right: HelmholtzRight,
    pub forcing: fn(f64) -> Complex64,
    pub exact: Option<fn(f64, f64) -> Complex64>,
}

impl HelmholtzProblem {
    /// Recast as `-(p u')' + q u = -f` with `p = s^2`, `q = -k^2 n^2`.
    pub fn to_element_problem(&self) -> Result<ElementProblem<Complex64>> {
        let med = self.medium;
        for piece in 0..=med.breaks.len() {
            let lo = if piece == 0 { med.a } else { med.breaks[piece - 1] };
            let hi = med.breaks.get(piece).copied().unwrap_or(med.b);
            for t in [lo, 0.5 * (lo + hi), hi] {
                let (s, _, n) = (med.profile)(piece, t);
                if !(s > 0.0 && n > 0.0) {
                    return Err(Error::InvalidArgument(format!("speed and index must be positive, got ({s}, {n}) at {t}")));
                }
            }
        }
        let k = self.k;
        let forcing = self.forcing;
        let right = match self.right {
            HelmholtzRight::Dirichlet(v) => RightBoundary::Dirichlet(v),
            HelmholtzRight::Radiation => {
                let (s, _, n) = med.at(med.b, med.b);
                // s^2 u' = (i k n s) u
                RightBoundary::Robin(Complex64::new(0.0, k * n * s))
            }
        };
        let exact = self.exact.map(|u| Box::new(move |x: f64| u(x, k)) as Box<dyn Fn(f64) -> Complex64 + Send + Sync>);
        Ok(ElementProblem {
            a: med.a,
            b: med.b,
            breaks: med.breaks.to_vec(),
            coefs: Box::new(move |x, hint| {
                let (s, ds, n) = med.at(x, hint);
                PointCoefs {
                    p: Complex64::new(s * s, 0.0),
                    dp: Complex64::new(2.0 * s * ds, 0.0),
                    r: Complex64::new(0.0, 0.0),
                    q: Complex64::new(-k * k * n * n, 0.0),
                    f: -forcing(x),
                }
            }),
            u_a: self.u_a,
            right,
            exact,
        })
    }

    /// Prolate-element solution with `elements` elements and one shared `(c, N)`.
    pub fn solve_prolate(&self, elements: usize, c: f64, n: usize) -> Result<ElementSolution<Complex64>> {
        let prob = self.to_element_problem()?;
        let mesh = Mesh1D::new(self.medium.a, self.medium.b, elements)?;
        let basis = build_basis(c, n)?;
        let grid = ProlateGrid::new(&basis)?;
        let bb = build_birkhoff(&basis, &grid)?;
        solve_prolate_element(&prob, &mesh, &basis, &bb)
    }

    /// Legendre spectral-element solution of degree `n` per element.
    pub fn solve_legendre(&self, elements: usize, n: usize) -> Result<ElementSolution<Complex64>> {
        let prob = self.to_element_problem()?;
        let mesh = Mesh1D::new(self.medium.a, self.medium.b, elements)?;
        let basis = build_basis(0.0, n)?;
        let grid = ProlateGrid::new(&basis)?;
        solve_sem(&prob, &mesh, &basis, &grid)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HelmholtzCase {
    PiecewiseConst,
    PiecewiseSmooth,
}

fn const_profile(piece: usize, _x: f64) -> (f64, f64, f64) {
    if piece == 0 {
        (2.0, 0.0, 1.0)
    } else {
        (1.0, 0.0, 1.0)
    }
}

fn smooth_profile(piece: usize, x: f64) -> (f64, f64, f64) {
    match piece {
        0 => (1.0 + x * x, 2.0 * x, 1.75 + x),
        1 => (1.0 - x * x, -2.0 * x, 1.25 - x),
        _ => (1.0, 0.0, 2.0),
    }
}

fn const_exact(x: f64, k: f64) -> Complex64 {
    let e = |t: f64| Complex64::new(0.0, t).exp();
    if x < 0.5 {
        (e(k * (1.0 + 2.0 * x) / 4.0) * 3.0 + e(k * (3.0 - 2.0 * x) / 4.0)) / 4.0
    } else {
        e(k * x)
    }
}

impl HelmholtzCase {
    pub fn problem(self, k: f64) -> HelmholtzProblem {
        match self {
            HelmholtzCase::PiecewiseConst => HelmholtzProblem {
                medium: Medium { a: 0.0, b: 1.0, breaks: &[0.5], profile: const_profile },
                k,
                u_a: const_exact(0.0, k),
                right: HelmholtzRight::Radiation,
                forcing: |_| Complex64::new(0.0, 0.0),
                exact: Some(const_exact),
            },
            HelmholtzCase::PiecewiseSmooth => HelmholtzProblem {
                medium: Medium { a: 0.0, b: 1.0, breaks: &[0.25, 0.5], profile: smooth_profile },
                k,
                u_a: Complex64::new(1.0, 0.0),
                right: HelmholtzRight::Radiation,
                forcing: |_| Complex64::new(1.0, 0.0),
                exact: None,
            },
        }
    }

    /// Element count used for this case.
    pub fn elements(self) -> usize {
        match self {
            HelmholtzCase::PiecewiseConst => 2,
            HelmholtzCase::PiecewiseSmooth => 4,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            HelmholtzCase::PiecewiseConst => "piecewise-const",
            HelmholtzCase::PiecewiseSmooth => "piecewise-smooth",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kr_rule::select_n;
    use crate::tolerances::ERROR_SAMPLES;

    #[test]
    fn exact_solution_satisfies_the_problem() {
        // Continuity of u and s^2 u' at x = 1/2, radiation at 1, by finite differences.
        let k = 60.0;
        let d = 1e-6;
        let du = |x: f64| (const_exact(x + d, k) - const_exact(x - d, k)) / (2.0 * d);
        let l = const_exact(0.5 - 1e-12, k);
        let r = const_exact(0.5, k);
        assert!((l - r).norm() < 1e-9);
        let fl = du(0.5 - 2e-6) * 4.0;
        let fr = du(0.5 + 2e-6);
        assert!((fl - fr).norm() < 1e-3 * k, "{fl} {fr}");
        let rad = du(1.0 - 2e-6) - Complex64::new(0.0, k) * const_exact(1.0 - 2e-6, k);
        assert!(rad.norm() < 1e-3 * k);
    }

    #[test]
    fn piecewise_constant_k60() {
        let pb = HelmholtzCase::PiecewiseConst.problem(60.0);
        let pair = select_n(40.0, 1e-14).unwrap();
        let sol = pb.solve_prolate(2, 40.0, pair.n_star).unwrap();
        let u = pb.exact.unwrap();
        let err = sol.sampled_error(&|x| u(x, 60.0), ERROR_SAMPLES);
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn legendre_baseline_converges() {
        let pb = HelmholtzCase::PiecewiseConst.problem(20.0);
        let u = pb.exact.unwrap();
        let err = pb.solve_legendre(2, 40).unwrap().sampled_error(&|x| u(x, 20.0), ERROR_SAMPLES);
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn radiation_row_for_variable_medium() {
        let pb = HelmholtzCase::PiecewiseSmooth.problem(20.0);
        let a = pb.solve_prolate(4, 20.0, 40).unwrap();
        let b = pb.solve_legendre(4, 40).unwrap();
        assert!(a.sampled_difference(&b, ERROR_SAMPLES) < 1e-8);
    }
}
