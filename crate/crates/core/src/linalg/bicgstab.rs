use serde::{Deserialize, Serialize};

use super::dense::{dot, norm2, Scalar};
use crate::error::{Error, Result};

/// Outcome of an iterative solve.
///
/// `iterations` counts completed BiCGStab iterations; convergence detected at
/// the intermediate half-step of iteration `i` reports `i - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterStats {
    pub iterations: usize,
    pub matvecs: usize,
    pub final_residual: f64,
    pub converged: bool,
}

/// Stabilized bi-conjugate gradients for `A x = b`, starting from `x = 0`.
///
/// `apply` computes `A v`. A right preconditioner `M` is used by passing
/// `v -> A (M v)` and mapping the returned solution through `M`.
/// Convergence means `||b - A x|| / ||b|| <= tol`. Reaching `maxit` without
/// convergence is reported through `converged = false` and returns the iterate
/// with the smallest residual seen; only a repeated breakdown is an error.
pub fn bicgstab<T, F>(apply: F, b: &[T], tol: f64, maxit: usize) -> Result<(Vec<T>, IterStats)>
where
    T: Scalar,
    F: Fn(&[T]) -> Vec<T>,
{
    let n = b.len();
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        let stats = IterStats { iterations: 0, matvecs: 0, final_residual: 0.0, converged: true };
        return Ok((vec![T::zero(); n], stats));
    }
    let mut x = vec![T::zero(); n];
    let mut r = b.to_vec();
    let mut shadow = r.clone();
    let mut restarted = false;
    let mut matvecs = 0usize;

    let mut rho = T::one();
    let mut alpha = T::one();
    let mut omega = T::one();
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    let mut best = (1.0, x.clone());

    let mut it = 0usize;
    while it < maxit {
        let rho_new = dot(&shadow, &r);
        if rho_new.modulus() <= f64::MIN_POSITIVE.sqrt() * norm2(&shadow) * norm2(&r) || omega == T::zero() {
            if restarted {
                return Err(Error::Breakdown { iterations: it });
            }
            // Restart with a perturbed shadow residual.
            restarted = true;
            shadow = r
                .iter()
                .enumerate()
                .map(|(i, &ri)| ri + T::from_real(1e-3 * bnorm * (((i * 7919) % 97) as f64 / 97.0 - 0.5)))
                .collect();
            rho = T::one();
            alpha = T::one();
            omega = T::one();
            v.iter_mut().for_each(|e| *e = T::zero());
            p.iter_mut().for_each(|e| *e = T::zero());
            continue;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        v = apply(&p);
        matvecs += 1;
        let sv = dot(&shadow, &v);
        if sv == T::zero() {
            return Err(Error::Breakdown { iterations: it });
        }
        alpha = rho / sv;
        let s: Vec<T> = r.iter().zip(&v).map(|(&ri, &vi)| ri - alpha * vi).collect();
        let snorm = norm2(&s) / bnorm;
        if snorm <= tol {
            for i in 0..n {
                x[i] += alpha * p[i];
            }
            return Ok((x, IterStats { iterations: it, matvecs, final_residual: snorm, converged: true }));
        }
        let t = apply(&s);
        matvecs += 1;
        let tt = dot(&t, &t);
        omega = if tt == T::zero() { T::zero() } else { dot(&t, &s) / tt };
        for i in 0..n {
            x[i] += alpha * p[i] + omega * s[i];
            r[i] = s[i] - omega * t[i];
        }
        it += 1;
        let resid = norm2(&r) / bnorm;
        if resid <= tol {
            return Ok((x, IterStats { iterations: it, matvecs, final_residual: resid, converged: true }));
        }
        if resid < best.0 {
            best = (resid, x.clone());
        }
    }
    let (final_residual, x) = best;
    Ok((x, IterStats { iterations: it, matvecs, final_residual, converged: false }))
}
