//! Prolate-Lobatto nodes and weights, plus the Legendre rules used as
//! baselines and as internal integrators.

use std::f64::consts::PI;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legendre;
use crate::linalg::lu_solve_vec;
use crate::pswf::ProlateBasis;
use crate::tolerances::{ROOT_RESIDUAL, ROOT_SCAN_PER_MODE, ROOT_STEP};

/// Prolate-Lobatto grid: `-1`, the `N - 1` zeros of `psi_N'`, and `1`,
/// with weights integrating `psi_0 .. psi_N` exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProlateGrid {
    pub c: f64,
    pub n: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ProlateGrid {
    pub fn new(basis: &ProlateBasis) -> Result<Self> {
        let nodes = pl_points(basis)?;
        let weights = pl_weights(basis, &nodes)?;
        if let Some(j) = weights.iter().position(|&w| w <= 0.0) {
            warn!("prolate-Lobatto weight {j} is not positive (c = {}, N = {})", basis.c(), basis.n());
        }
        Ok(Self { c: basis.c(), n: basis.n(), nodes, weights })
    }

    pub fn interior_nodes(&self) -> &[f64] {
        &self.nodes[1..self.n]
    }

    pub fn has_nonpositive_weight(&self) -> bool {
        self.weights.iter().any(|&w| w <= 0.0)
    }

    /// `max_n |sum_j psi_n(x_j) w_j - int psi_n|`.
    pub fn exactness_residual(&self, basis: &ProlateBasis) -> f64 {
        let psi = basis.values_matrix(&self.nodes, 0);
        (0..=self.n)
            .map(|k| {
                let s: f64 = (0..=self.n).map(|j| psi[(j, k)] * self.weights[j]).sum();
                (s - basis.integral(k)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `x_0 = -1`, `x_N = 1` and the interior zeros of `psi_N'`, ascending.
pub fn pl_points(basis: &ProlateBasis) -> Result<Vec<f64>> {
    let n = basis.n();
    let row = basis.coeff_row(n);
    let dpsi = |x: f64| legendre::eval_series(row, x, 1);
    let d2psi = |x: f64| legendre::eval_series(row, x, 2);

    let samples = ROOT_SCAN_PER_MODE * n;
    let scan: Vec<(f64, f64)> = (1..samples)
        .map(|i| {
            let x = -(PI * i as f64 / samples as f64).cos();
            (x, dpsi(x))
        })
        .collect();
    let scale = scan.iter().fold(0.0f64, |m, &(_, f)| m.max(f.abs()));

    let mut brackets = Vec::with_capacity(n.saturating_sub(1));
    let mut i = 0;
    while i + 1 < scan.len() {
        let (xa, fa) = scan[i];
        let (xb, fb) = scan[i + 1];
        if fa == 0.0 {
            brackets.push((xa, xa));
        } else if fa * fb < 0.0 {
            brackets.push((xa, xb));
        }
        i += 1;
    }
    if let Some(&(x, f)) = scan.last() {
        if f == 0.0 {
            brackets.push((x, x));
        }
    }
    if brackets.len() + 1 != n {
        return Err(Error::RootCount { expected: n - 1, found: brackets.len() });
    }

    let mut nodes = Vec::with_capacity(n + 1);
    nodes.push(-1.0);
    for (a, b) in brackets {
        nodes.push(refine_root(a, b, &dpsi, &d2psi, scale));
    }
    nodes.push(1.0);
    // psi_N' has definite parity, so the exact zeros are symmetric.
    for j in 1..=n / 2 {
        let s = 0.5 * (nodes[n - j] - nodes[j]);
        nodes[j] = -s;
        nodes[n - j] = s;
    }
    if n % 2 == 0 {
        nodes[n / 2] = 0.0;
    }
    Ok(nodes)
}

/// Safeguarded Newton on a sign-change bracket.
fn refine_root(mut a: f64, mut b: f64, f: &impl Fn(f64) -> f64, df: &impl Fn(f64) -> f64, scale: f64) -> f64 {
    if a == b {
        return a;
    }
    let fa = f(a);
    let mut x = 0.5 * (a + b);
    for _ in 0..100 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx * fa < 0.0 {
            b = x;
        } else {
            a = x;
        }
        let d = df(x);
        let mut xn = if d != 0.0 { x - fx / d } else { f64::NAN };
        if !(xn > a.min(b) && xn < a.max(b)) {
            xn = 0.5 * (a + b);
        }
        let step = (xn - x).abs();
        x = xn;
        if step < ROOT_STEP && f(x).abs() < ROOT_RESIDUAL * scale {
            break;
        }
        if (b - a).abs() < f64::EPSILON * x.abs().max(1e-300) {
            break;
        }
    }
    x
}

/// Weights from the moment system `sum_j psi_n(x_j) w_j = int psi_n`, `n = 0..N`.
pub fn pl_weights(basis: &ProlateBasis, nodes: &[f64]) -> Result<Vec<f64>> {
    let n = basis.n();
    if nodes.len() != n + 1 {
        return Err(Error::InvalidArgument(format!(
            "pl_weights: expected {} nodes, got {}",
            n + 1,
            nodes.len()
        )));
    }
    let psi_t = basis.values_matrix(nodes, 0).transpose();
    let moments: Vec<f64> = (0..=n).map(|k| basis.integral(k)).collect();
    lu_solve_vec(&psi_t, &moments).map_err(|e| match e {
        Error::Singular { .. } => Error::DegenerateGrid(format!("moment system singular: {e}")),
        other => other,
    })
}

/// Legendre-Gauss-Lobatto nodes (zeros of `(1 - x^2) P_N'`) and weights, ascending.
pub fn lgl_rule(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 1 {
        return Err(Error::InvalidArgument("LGL rule needs N >= 1".into()));
    }
    let nf = n as f64;
    let mut nodes = vec![0.0; n + 1];
    for (j, x) in nodes.iter_mut().enumerate() {
        // Chebyshev-Lobatto start, Newton on x P_N - P_{N-1}.
        let mut xi = -(PI * j as f64 / nf).cos();
        if j == 0 || j == n {
            *x = xi;
            continue;
        }
        for _ in 0..100 {
            let (pn, _) = legendre::classical(n, xi);
            let (pm, _) = legendre::classical(n - 1, xi);
            let dx = (xi * pn - pm) / ((nf + 1.0) * pn);
            xi -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        *x = xi;
    }
    for j in 1..=n / 2 {
        let s = 0.5 * (nodes[n - j] - nodes[j]);
        nodes[j] = -s;
        nodes[n - j] = s;
    }
    if n % 2 == 0 {
        nodes[n / 2] = 0.0;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (p, _) = legendre::classical(n, x);
            2.0 / (nf * (nf + 1.0) * p * p)
        })
        .collect();
    Ok((nodes, weights))
}

/// `n`-point Gauss-Legendre rule, ascending nodes.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(1..=4096).contains(&n) {
        return Err(Error::InvalidArgument(format!("Gauss-Legendre point count {n} outside 1..=4096")));
    }
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre::classical(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre::classical(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

/// Maps a reference rule on `[-1, 1]` to `[a, b]`.
pub fn map_rule(nodes: &[f64], weights: &[f64], a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let h = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (nodes.iter().map(|y| mid + h * y).collect(), weights.iter().map(|w| w * h).collect())
}
