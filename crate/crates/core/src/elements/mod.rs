//! Multi-element discretizations on a uniform mesh of `[a, b]`.

pub mod helmholtz;
pub mod mesh;
pub mod projection;
pub mod prolate_element;
pub mod sem;

use std::sync::Arc;

use serde::Serialize;

use crate::collocation::CoefFn;
use crate::linalg::Scalar;

pub use helmholtz::{HelmholtzCase, HelmholtzProblem, Medium};
pub use mesh::Mesh1D;
pub use projection::{hp_project, HpProjection};
pub use prolate_element::solve_prolate_element;
pub use sem::{model_problem_sec4, solve_sem};

/// Coefficients of `-(p u')' + r u' + q u = f` at one point, with `dp = p'`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointCoefs<T> {
    pub p: T,
    pub dp: T,
    pub r: T,
    pub q: T,
    pub f: T,
}

/// Coefficient callback `(x, element midpoint)`; the midpoint picks the
/// smooth piece when the coefficients jump at a breakpoint.
pub type PieceFn<T> = Box<dyn Fn(f64, f64) -> PointCoefs<T> + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RightBoundary<T> {
    Dirichlet(T),
    /// `p u'(b) = gamma u(b)`.
    Robin(T),
}

/// `-(p u')' + r u' + q u = f` on `(a, b)` with `u(a)` given.
pub struct ElementProblem<T: Scalar = f64> {
    pub a: f64,
    pub b: f64,
    /// Interior points where the coefficients may jump.
    pub breaks: Vec<f64>,
    pub coefs: PieceFn<T>,
    pub u_a: T,
    pub right: RightBoundary<T>,
    pub exact: Option<CoefFn<T>>,
}

type LocalEval = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// Piecewise solution: per-element coefficients against a shared local basis.
#[derive(Clone)]
pub struct ElementSolution<T: Scalar> {
    pub scheme: String,
    pub c: f64,
    pub n: usize,
    pub mesh: Mesh1D,
    pub dofs: usize,
    /// `local[i][k]` multiplies the `k`-th local basis function on element `i`.
    pub local: Vec<Vec<T>>,
    /// Physical nodes of every element, shared endpoints listed once.
    pub nodes: Vec<f64>,
    pub node_values: Vec<T>,
    basis_at: LocalEval,
}

impl<T: Scalar> ElementSolution<T> {
    pub fn eval(&self, x: f64) -> T {
        let (i, y) = self.mesh.locate(x);
        let phi = (self.basis_at)(y);
        self.local[i].iter().zip(&phi).fold(T::zero(), |s, (&u, &v)| s + u.scale(v))
    }

    pub fn node_error(&self, exact: &dyn Fn(f64) -> T) -> f64 {
        self.nodes
            .iter()
            .zip(&self.node_values)
            .map(|(&x, &v)| (v - exact(x)).modulus())
            .fold(0.0, f64::max)
    }

    /// Max error over `count` equispaced points.
    pub fn sampled_error(&self, exact: &dyn Fn(f64) -> T, count: usize) -> f64 {
        self.mesh
            .samples(count)
            .into_iter()
            .map(|x| (self.eval(x) - exact(x)).modulus())
            .fold(0.0, f64::max)
    }

    pub fn sampled_difference(&self, other: &ElementSolution<T>, count: usize) -> f64 {
        self.mesh
            .samples(count)
            .into_iter()
            .map(|x| (self.eval(x) - other.eval(x)).modulus())
            .fold(0.0, f64::max)
    }

    pub fn report(&self, exact: Option<&dyn Fn(f64) -> T>, count: usize) -> ElementReport {
        ElementReport {
            scheme: self.scheme.clone(),
            c: self.c,
            n: self.n,
            elements: self.mesh.m,
            dofs: self.dofs,
            node_error: exact.map(|u| self.node_error(u)),
            max_error: exact.map(|u| self.sampled_error(u, count)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementReport {
    pub scheme: String,
    pub c: f64,
    pub n: usize,
    pub elements: usize,
    pub dofs: usize,
    pub node_error: Option<f64>,
    /// Max error over the uniform sample.
    pub max_error: Option<f64>,
}
