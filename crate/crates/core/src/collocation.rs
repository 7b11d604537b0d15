//! Collocation on the prolate-Lobatto grid for
//! `u'' + p(x) u' + q(x) u = f` on `(-1, 1)` with Dirichlet data.
//!
//! Three schemes share one problem description:
//! - `Pcol`: interior rows of `D2 + diag(p) D1 + diag(q)` from the cardinal basis;
//! - `PPcol`: the same system left-multiplied by the Birkhoff block `Bin`;
//! - `NPcol`: unknowns are the interior second derivatives `w`, the system is
//!   `I + diag(p) B1in + diag(q) Bin`, and values follow from `Bin w` plus the
//!   endpoint hats.

use serde::{Deserialize, Serialize};

use crate::birkhoff::BirkhoffBasis;
use crate::cardinal::DiffOperators;
use crate::error::{Error, Result};
use crate::linalg::{bicgstab, cond2, lu_solve_vec, DenseMatrix, IterStats, Scalar};
use crate::tolerances::BICGSTAB_TOL;

pub type CoefFn<T> = Box<dyn Fn(f64) -> T + Send + Sync>;

/// `u'' + p u' + q u = f`, `u(-1) = u_minus`, `u(1) = u_plus`.
pub struct Bvp2<T: Scalar = f64> {
    pub p: CoefFn<T>,
    pub q: CoefFn<T>,
    pub f: CoefFn<T>,
    pub u_minus: T,
    pub u_plus: T,
    pub exact: Option<CoefFn<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "PCOL")]
    Pcol,
    #[serde(rename = "P-PCOL")]
    PPcol,
    #[serde(rename = "N-PCOL")]
    NPcol,
}

impl Scheme {
    pub fn tag(self) -> &'static str {
        match self {
            Scheme::Pcol => "PCOL",
            Scheme::PPcol => "P-PCOL",
            Scheme::NPcol => "N-PCOL",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Solver {
    Direct,
    /// BiCGStab with the given iteration cap; `None` uses `2 (N - 1)^2`.
    Iterative { maxit: Option<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub solver: Solver,
    pub condition: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { solver: Solver::Direct, condition: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport<T: Scalar + Serialize = f64> {
    pub scheme: String,
    pub c: f64,
    pub n: usize,
    pub nodes: Vec<f64>,
    pub values: Vec<T>,
    /// 2-norm condition number of the assembled interior system (`NaN` if not computed).
    pub condition: f64,
    pub stats: Option<IterStats>,
    pub max_error: Option<f64>,
}

fn check_size(ops_n: usize) -> Result<()> {
    if ops_n < 3 {
        return Err(Error::InvalidArgument(format!("collocation needs N >= 3, got {ops_n}")));
    }
    Ok(())
}

fn lift<T: Scalar>(m: &DenseMatrix<f64>) -> DenseMatrix<T> {
    m.map(T::from_real)
}

/// Interior operator `D2in + diag(p) D1in + diag(q)` and right-hand side `g`.
fn pcol_system<T: Scalar>(prob: &Bvp2<T>, ops: &DiffOperators) -> (DenseMatrix<T>, Vec<T>) {
    let n = ops.n();
    let x = &ops.nodes;
    let p: Vec<T> = x[1..n].iter().map(|&xj| (prob.p)(xj)).collect();
    let q: Vec<T> = x[1..n].iter().map(|&xj| (prob.q)(xj)).collect();
    let mut a = lift::<T>(&ops.d2.interior()).add(&lift::<T>(&ops.d1.interior()).scale_rows(&p));
    for i in 0..n - 1 {
        a[(i, i)] += q[i];
    }
    let g = (1..n)
        .map(|j| {
            let pj = p[j - 1];
            let left = T::from_real(ops.d2[(j, 0)]) + pj * T::from_real(ops.d1[(j, 0)]);
            let right = T::from_real(ops.d2[(j, n)]) + pj * T::from_real(ops.d1[(j, n)]);
            (prob.f)(x[j]) - prob.u_minus * left - prob.u_plus * right
        })
        .collect();
    (a, g)
}

fn solve_system<T: Scalar>(a: &DenseMatrix<T>, rhs: &[T], opts: SolveOptions) -> Result<(Vec<T>, Option<IterStats>)> {
    match opts.solver {
        Solver::Direct => Ok((lu_solve_vec(a, rhs)?, None)),
        Solver::Iterative { maxit } => {
            let m = a.rows();
            let cap = maxit.unwrap_or(2 * m * m);
            let (x, stats) = bicgstab(|v: &[T]| a.matvec(v), rhs, BICGSTAB_TOL, cap)?;
            Ok((x, Some(stats)))
        }
    }
}

fn finish<T: Scalar + Serialize>(
    scheme: Scheme,
    c: f64,
    prob: &Bvp2<T>,
    nodes: &[f64],
    interior: Vec<T>,
    a: &DenseMatrix<T>,
    stats: Option<IterStats>,
    opts: SolveOptions,
) -> SolveReport<T> {
    let mut values = Vec::with_capacity(nodes.len());
    values.push(prob.u_minus);
    values.extend(interior);
    values.push(prob.u_plus);
    let max_error = prob.exact.as_ref().map(|u| {
        nodes.iter().zip(&values).map(|(&x, &v)| (v - u(x)).modulus()).fold(0.0, f64::max)
    });
    let condition = if opts.condition { cond2(a) } else { f64::NAN };
    SolveReport {
        scheme: scheme.tag().to_string(),
        c,
        n: nodes.len() - 1,
        nodes: nodes.to_vec(),
        values,
        condition,
        stats,
        max_error,
    }
}

pub fn solve_pcol<T: Scalar + Serialize>(prob: &Bvp2<T>, c: f64, ops: &DiffOperators, opts: SolveOptions) -> Result<SolveReport<T>> {
    check_size(ops.n())?;
    let (a, g) = pcol_system(prob, ops);
    let (u, stats) = solve_system(&a, &g, opts)?;
    Ok(finish(Scheme::Pcol, c, prob, &ops.nodes, u, &a, stats, opts))
}

pub fn solve_ppcol<T: Scalar + Serialize>(
    prob: &Bvp2<T>,
    c: f64,
    ops: &DiffOperators,
    bb: &BirkhoffBasis,
    opts: SolveOptions,
) -> Result<SolveReport<T>> {
    check_size(ops.n())?;
    let (a, g) = pcol_system(prob, ops);
    let bin = lift::<T>(&bb.bin);
    let pa = bin.matmul(&a);
    let pg = bin.matvec(&g);
    let (u, stats) = solve_system(&pa, &pg, opts)?;
    Ok(finish(Scheme::PPcol, c, prob, &ops.nodes, u, &pa, stats, opts))
}

pub fn solve_npcol<T: Scalar + Serialize>(prob: &Bvp2<T>, c: f64, bb: &BirkhoffBasis, opts: SolveOptions) -> Result<SolveReport<T>> {
    let n = bb.n();
    check_size(n)?;
    let x = &bb.nodes;
    let p: Vec<T> = x[1..n].iter().map(|&xj| (prob.p)(xj)).collect();
    let q: Vec<T> = x[1..n].iter().map(|&xj| (prob.q)(xj)).collect();
    let bin = lift::<T>(&bb.bin);
    let mut a = lift::<T>(&bb.b1in).scale_rows(&p).add(&bin.scale_rows(&q));
    for i in 0..n - 1 {
        a[(i, i)] += T::one();
    }
    let half = T::from_real(0.5);
    let jump = (prob.u_plus - prob.u_minus) * half;
    let mean = (prob.u_plus + prob.u_minus) * half;
    let h: Vec<T> = (1..n)
        .map(|j| {
            let (pj, qj) = (p[j - 1], q[j - 1]);
            (prob.f)(x[j]) - (pj + T::from_real(x[j]) * qj) * jump - qj * mean
        })
        .collect();
    let (w, stats) = solve_system(&a, &h, opts)?;
    let bw = bin.matvec(&w);
    let v = (1..n)
        .map(|j| bw[j - 1] + prob.u_minus * T::from_real(bb.b[(j, 0)]) + prob.u_plus * T::from_real(bb.b[(j, n)]))
        .collect();
    Ok(finish(Scheme::NPcol, c, prob, x, v, &a, stats, opts))
}

/// `u'' - x u' - u = f` with a right-hand side that switches on at `x = 0`.
pub fn model_problem() -> Bvp2<f64> {
    let exact = |x: f64| {
        if x < 0.0 {
            (0.5 * x * x + 1.0).exp() + (0.5 * x * x).exp()
        } else {
            (0.5 * x * x + 1.0).exp() + 0.5 * x * x + 1.0
        }
    };
    Bvp2 {
        p: Box::new(|x| -x),
        q: Box::new(|_| -1.0),
        f: Box::new(|x| if x < 0.0 { 0.0 } else { -1.5 * x * x }),
        u_minus: exact(-1.0),
        u_plus: exact(1.0),
        exact: Some(Box::new(exact)),
    }
}
