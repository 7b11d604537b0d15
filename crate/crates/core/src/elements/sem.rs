//! C0 spectral-element Galerkin method with a nodal cardinal basis on the
//! prolate-Lobatto grid of every element. All inner products use the grid's
//! own quadrature, which is inexact for `c > 0`.

use std::sync::Arc;

use crate::cardinal::modal_diffmats;
use crate::elements::{ElementProblem, ElementSolution, Mesh1D, PointCoefs, RightBoundary};
use crate::error::{Error, Result};
use crate::linalg::{lu_solve_vec, DenseMatrix, Lu, Scalar};
use crate::pswf::ProlateBasis;
use crate::quadrature::ProlateGrid;

pub(crate) fn check_problem<T: Scalar>(prob: &ElementProblem<T>, mesh: &Mesh1D) -> Result<()> {
    let tol = 1e-12 * (mesh.b - mesh.a);
    if (prob.a - mesh.a).abs() > tol || (prob.b - mesh.b).abs() > tol {
        return Err(Error::MeshMismatch(format!(
            "problem lives on [{}, {}] but the mesh covers [{}, {}]",
            prob.a, prob.b, mesh.a, mesh.b
        )));
    }
    mesh.check_breaks(&prob.breaks)
}

pub fn solve_sem<T: Scalar>(
    prob: &ElementProblem<T>,
    mesh: &Mesh1D,
    basis: &ProlateBasis,
    grid: &ProlateGrid,
) -> Result<ElementSolution<T>> {
    check_problem(prob, mesh)?;
    let n = basis.n();
    if n < 1 {
        return Err(Error::InvalidArgument("spectral elements need N >= 1".into()));
    }
    let (d1, _) = modal_diffmats(basis, grid)?;
    let (y, w) = (&grid.nodes, &grid.weights);
    let h = mesh.h();
    let size = mesh.m * n + 1;
    let mut k = DenseMatrix::<T>::zeros(size, size);
    let mut rhs = vec![T::zero(); size];
    let mut nodes = Vec::with_capacity(size);
    for e in 0..mesh.m {
        let mid = mesh.midpoint(e);
        let pts: Vec<PointCoefs<T>> = y.iter().map(|&t| (prob.coefs)(mesh.to_physical(e, t), mid)).collect();
        let off = e * n;
        for j in 0..=n {
            for l in 0..=n {
                let mut s = T::zero();
                for (i, c) in pts.iter().enumerate() {
                    s += c.p.scale(w[i] * d1[(i, j)] * d1[(i, l)]);
                }
                let mut v = s.scale(2.0 / h) + pts[j].r.scale(w[j] * d1[(j, l)]);
                if j == l {
                    v += pts[j].q.scale(0.5 * h * w[j]);
                }
                k[(off + j, off + l)] += v;
            }
            rhs[off + j] += pts[j].f.scale(0.5 * h * w[j]);
        }
        for (j, &t) in y.iter().enumerate() {
            if e == 0 || j > 0 {
                nodes.push(mesh.to_physical(e, t));
            }
        }
    }
    let last = size - 1;
    k.row_mut(0).fill(T::zero());
    k[(0, 0)] = T::one();
    rhs[0] = prob.u_a;
    match prob.right {
        RightBoundary::Dirichlet(ub) => {
            k.row_mut(last).fill(T::zero());
            k[(last, last)] = T::one();
            rhs[last] = ub;
        }
        RightBoundary::Robin(gamma) => k[(last, last)] -= gamma,
    }
    let u = lu_solve_vec(&k, &rhs)?;
    let local = (0..mesh.m).map(|e| u[e * n..=e * n + n].to_vec()).collect();

    let lu = Arc::new(Lu::factor(&basis.values_matrix(&grid.nodes, 0).transpose())?);
    let shared = Arc::new(basis.clone());
    let basis_at = Arc::new(move |t: f64| lu.solve_vec(&shared.eval_all(t, 0)));
    Ok(ElementSolution {
        scheme: if basis.c() == 0.0 { "legendre-sem" } else { "prolate-sem" }.to_string(),
        c: basis.c(),
        n,
        mesh: *mesh,
        dofs: size,
        local,
        nodes,
        node_values: u,
        basis_at,
    })
}

/// `-(1 + x^2) u'' - (2x + sin x) u' + u = f` on `(0, 1)` with
/// `u = (x + 1)^{13/3} sin(pi x / 2)`.
pub fn model_problem_sec4() -> ElementProblem<f64> {
    use std::f64::consts::PI;
    let alpha = 13.0 / 3.0;
    let exact = move |x: f64| (x + 1.0).powf(alpha) * (0.5 * PI * x).sin();
    let f = move |x: f64| {
        let (s, c) = (0.5 * PI * x).sin_cos();
        let z = x + 1.0;
        let u = z.powf(alpha) * s;
        let du = alpha * z.powf(alpha - 1.0) * s + 0.5 * PI * z.powf(alpha) * c;
        let d2u = alpha * (alpha - 1.0) * z.powf(alpha - 2.0) * s + alpha * PI * z.powf(alpha - 1.0) * c
            - 0.25 * PI * PI * u;
        -(1.0 + x * x) * d2u - (2.0 * x + x.sin()) * du + u
    };
    ElementProblem {
        a: 0.0,
        b: 1.0,
        breaks: vec![],
        coefs: Box::new(move |x, _| PointCoefs { p: 1.0 + x * x, dp: 2.0 * x, r: -x.sin(), q: 1.0, f: f(x) }),
        u_a: 0.0,
        right: RightBoundary::Dirichlet(exact(1.0)),
        exact: Some(Box::new(exact)),
    }
}
