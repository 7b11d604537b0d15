//! p-version prolate-element scheme.
//!
//! On element `i` the trial function is
//! `v = U_i beta_0(y) + sum_k w_{i,k} beta_k(y) + U_{i+1} beta_N(y)`, so the
//! global unknowns are one hat amplitude per breakpoint and `N - 1` Birkhoff
//! amplitudes per element. Rows are: the Dirichlet value at `a`, one Galerkin
//! equation per interior breakpoint tested against its hat function, the
//! right boundary condition, and strong collocation at every mapped interior
//! node, where `v'' = (4 / h^2) w_{i,j}`.

use std::sync::Arc;

use crate::birkhoff::BirkhoffBasis;
use crate::elements::sem::check_problem;
use crate::elements::{ElementProblem, ElementSolution, Mesh1D, PointCoefs, RightBoundary};
use crate::error::{Error, Result};
use crate::linalg::{lu_solve_vec, DenseMatrix, Scalar};
use crate::pswf::ProlateBasis;
use crate::quadrature::gauss_legendre;
use crate::tolerances::ELEMENT_QUAD_EXTRA;

struct Layout {
    m: usize,
    n: usize,
}

impl Layout {
    fn size(&self) -> usize {
        self.m * self.n + 1
    }

    /// Global unknown of local function `k` on element `e`.
    fn dof(&self, e: usize, k: usize) -> usize {
        if k == 0 {
            e
        } else if k == self.n {
            e + 1
        } else {
            self.m + 1 + e * (self.n - 1) + k - 1
        }
    }

    fn collocation_row(&self, e: usize, j: usize) -> usize {
        self.m + 1 + e * (self.n - 1) + j - 1
    }
}

pub fn solve_prolate_element<T: Scalar>(
    prob: &ElementProblem<T>,
    mesh: &Mesh1D,
    basis: &ProlateBasis,
    bb: &BirkhoffBasis,
) -> Result<ElementSolution<T>> {
    check_problem(prob, mesh)?;
    let n = bb.n();
    if n != basis.n() {
        return Err(Error::InvalidArgument(format!("Birkhoff basis has N = {n} but basis has N = {}", basis.n())));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("prolate elements need N >= 2".into()));
    }
    let lay = Layout { m: mesh.m, n };
    let h = mesh.h();
    let mut a = DenseMatrix::<T>::zeros(lay.size(), lay.size());
    let mut rhs = vec![T::zero(); lay.size()];

    // Joint equations.
    let (gy, gw) = gauss_legendre(2 * basis.truncation() + ELEMENT_QUAD_EXTRA)?;
    let vals: Vec<Vec<f64>> = gy.iter().map(|&t| bb.eval_all(t, 0)).collect();
    let ders: Vec<Vec<f64>> = gy.iter().map(|&t| bb.eval_all(t, 1)).collect();
    for e in 0..mesh.m {
        let mid = mesh.midpoint(e);
        let pts: Vec<PointCoefs<T>> = gy.iter().map(|&t| (prob.coefs)(mesh.to_physical(e, t), mid)).collect();
        // (joint index, hat slope in y, hat value as a function of y)
        let mut tests: Vec<(usize, f64, fn(f64) -> f64)> = Vec::new();
        if e >= 1 {
            tests.push((e, -0.5, |t| 0.5 * (1.0 - t)));
        }
        if e + 1 < mesh.m {
            tests.push((e + 1, 0.5, |t| 0.5 * (1.0 + t)));
        }
        for (row, slope, hat) in tests {
            let mut f_int = T::zero();
            let mut entries = vec![T::zero(); n + 1];
            for (l, c) in pts.iter().enumerate() {
                let phi = hat(gy[l]);
                let grad = c.p.scale(2.0 / h * slope) + c.r.scale(phi);
                let mass = c.q.scale(0.5 * h * phi);
                for k in 0..=n {
                    entries[k] += (grad.scale(ders[l][k]) + mass.scale(vals[l][k])).scale(gw[l]);
                }
                f_int += c.f.scale(0.5 * h * phi * gw[l]);
            }
            for (k, v) in entries.into_iter().enumerate() {
                a[(row, lay.dof(e, k))] += v;
            }
            rhs[row] += f_int;
        }
    }

    // Boundary rows.
    a[(0, 0)] = T::one();
    rhs[0] = prob.u_a;
    let last = mesh.m;
    match prob.right {
        RightBoundary::Dirichlet(ub) => {
            a[(last, last)] = T::one();
            rhs[last] = ub;
        }
        RightBoundary::Robin(gamma) => {
            let e = mesh.m - 1;
            let pb = (prob.coefs)(mesh.b, mesh.midpoint(e)).p;
            for k in 0..=n {
                a[(last, lay.dof(e, k))] += pb.scale(2.0 / h * bb.b1[(n, k)]);
            }
            a[(last, last)] -= gamma;
        }
    }

    // Interior collocation, scaled by -h^2 / (4 p).
    for e in 0..mesh.m {
        let mid = mesh.midpoint(e);
        for j in 1..n {
            let c = (prob.coefs)(mesh.to_physical(e, bb.nodes[j]), mid);
            let s = T::from_real(-0.25 * h * h) / c.p;
            let first = (c.r - c.dp) * s * T::from_real(2.0 / h);
            let zeroth = c.q * s;
            let row = lay.collocation_row(e, j);
            for k in 0..=n {
                a[(row, lay.dof(e, k))] += first.scale(bb.b1[(j, k)]) + zeroth.scale(bb.b[(j, k)]);
            }
            a[(row, lay.dof(e, j))] += T::one();
            rhs[row] = c.f * s;
        }
    }

    let u = lu_solve_vec(&a, &rhs)?;
    let local: Vec<Vec<T>> = (0..mesh.m).map(|e| (0..=n).map(|k| u[lay.dof(e, k)]).collect()).collect();
    let mut nodes = Vec::with_capacity(lay.size());
    let mut node_values = Vec::with_capacity(lay.size());
    for (e, coef) in local.iter().enumerate() {
        for j in usize::from(e > 0)..=n {
            nodes.push(mesh.to_physical(e, bb.nodes[j]));
            let v = (0..=n).fold(T::zero(), |s, k| s + coef[k].scale(bb.b[(j, k)]));
            node_values.push(v);
        }
    }
    let shared = Arc::new(bb.clone());
    Ok(ElementSolution {
        scheme: "prolate-element".into(),
        c: basis.c(),
        n,
        mesh: *mesh,
        dofs: lay.size(),
        local,
        nodes,
        node_values,
        basis_at: Arc::new(move |t| shared.eval_all(t, 0)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::build_birkhoff;
    use crate::collocation::{solve_npcol, Bvp2, SolveOptions};
    use crate::pswf::build_basis;
    use crate::quadrature::ProlateGrid;

    fn setup(c: f64, n: usize) -> (ProlateBasis, BirkhoffBasis) {
        let basis = build_basis(c, n).unwrap();
        let grid = ProlateGrid::new(&basis).unwrap();
        let bb = build_birkhoff(&basis, &grid).unwrap();
        (basis, bb)
    }

    #[test]
    fn harmonic_solution_is_affine() {
        let prob = ElementProblem {
            a: 0.0,
            b: 1.0,
            breaks: vec![],
            coefs: Box::new(|_, _| PointCoefs { p: 1.0, dp: 0.0, r: 0.0, q: 0.0, f: 0.0 }),
            u_a: 0.0,
            right: RightBoundary::Dirichlet(1.0),
            exact: None,
        };
        let (basis, bb) = setup(3.0, 8);
        let mesh = Mesh1D::new(0.0, 1.0, 4).unwrap();
        let sol = solve_prolate_element(&prob, &mesh, &basis, &bb).unwrap();
        assert_eq!(sol.dofs, 33);
        for x in mesh.samples(101) {
            assert!((sol.eval(x) - x).abs() < 1e-10);
        }
    }

    #[test]
    fn single_element_matches_npcol() {
        let (basis, bb) = setup(6.0, 20);
        let q = |x: f64| 1.0 + x * x;
        let f = |x: f64| (3.0 * x).cos() + x;
        let prob = ElementProblem {
            a: -1.0,
            b: 1.0,
            breaks: vec![],
            coefs: Box::new(move |x, _| PointCoefs { p: 1.0, dp: 0.0, r: 0.0, q: q(x), f: f(x) }),
            u_a: 0.5,
            right: RightBoundary::Dirichlet(-0.25),
            exact: None,
        };
        let mesh = Mesh1D::new(-1.0, 1.0, 1).unwrap();
        let sol = solve_prolate_element(&prob, &mesh, &basis, &bb).unwrap();
        // -u'' + q u = f  <=>  u'' - q u = -f
        let bvp = Bvp2::<f64> {
            p: Box::new(|_| 0.0),
            q: Box::new(move |x| -q(x)),
            f: Box::new(move |x| -f(x)),
            u_minus: 0.5,
            u_plus: -0.25,
            exact: None,
        };
        let rep = solve_npcol(&bvp, 6.0, &bb, SolveOptions { condition: false, ..Default::default() }).unwrap();
        for (v, w) in sol.node_values.iter().zip(&rep.values) {
            assert!((v - w).abs() < 1e-10, "{v} {w}");
        }
    }

    #[test]
    fn continuous_at_joints() {
        let (basis, bb) = setup(5.0, 12);
        let prob = ElementProblem {
            a: 0.0,
            b: 2.0,
            breaks: vec![],
            coefs: Box::new(|x: f64, _| PointCoefs { p: 1.0 + x, dp: 1.0, r: 0.0, q: 2.0, f: x.exp() }),
            u_a: 1.0,
            right: RightBoundary::Dirichlet(0.0),
            exact: None,
        };
        let mesh = Mesh1D::new(0.0, 2.0, 4).unwrap();
        let sol = solve_prolate_element(&prob, &mesh, &basis, &bb).unwrap();
        for i in 1..mesh.m {
            let x = mesh.breakpoint(i);
            let left: f64 = bb.eval_all(1.0, 0).iter().zip(&sol.local[i - 1]).map(|(a, b)| a * b).sum();
            let right: f64 = bb.eval_all(-1.0, 0).iter().zip(&sol.local[i]).map(|(a, b)| a * b).sum();
            assert!((left - right).abs() < 1e-10, "joint {x}");
        }
    }

    #[test]
    fn smooth_variable_coefficients_converge() {
        // u = sin(x) e^x on (0, 2) for -((1 + x) u')' + 2 u = f
        let u = |x: f64| x.sin() * x.exp();
        let du = |x: f64| (x.sin() + x.cos()) * x.exp();
        let d2u = |x: f64| 2.0 * x.cos() * x.exp();
        let f = move |x: f64| -(1.0 + x) * d2u(x) - du(x) + 2.0 * u(x);
        let prob = ElementProblem {
            a: 0.0,
            b: 2.0,
            breaks: vec![],
            coefs: Box::new(move |x: f64, _| PointCoefs { p: 1.0 + x, dp: 1.0, r: 0.0, q: 2.0, f: f(x) }),
            u_a: 0.0,
            right: RightBoundary::Dirichlet(u(2.0)),
            exact: None,
        };
        let (basis, bb) = setup(6.0, 20);
        let mesh = Mesh1D::new(0.0, 2.0, 3).unwrap();
        let sol = solve_prolate_element(&prob, &mesh, &basis, &bb).unwrap();
        assert!(sol.sampled_error(&u, 1000) < 1e-10, "{}", sol.sampled_error(&u, 1000));
    }

    #[test]
    fn rejects_misaligned_breaks() {
        let prob = ElementProblem {
            a: 0.0,
            b: 1.0,
            breaks: vec![0.3],
            coefs: Box::new(|_, _| PointCoefs { p: 1.0, dp: 0.0, r: 0.0, q: 0.0, f: 0.0 }),
            u_a: 0.0,
            right: RightBoundary::Dirichlet(1.0),
            exact: None,
        };
        let (basis, bb) = setup(3.0, 8);
        let mesh = Mesh1D::new(0.0, 1.0, 2).unwrap();
        assert!(matches!(solve_prolate_element(&prob, &mesh, &basis, &bb), Err(Error::MeshMismatch(_))));
    }
}
