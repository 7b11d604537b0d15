//! Implicit-shift QL iteration for symmetric tridiagonal matrices.

use crate::error::{Error, Result};

/// Eigen-decomposition of a symmetric tridiagonal matrix.
///
/// `vectors[i]` is the unit eigenvector of `values[i]`; values are ascending.
#[derive(Clone, Debug)]
pub struct TridiagEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

const MAX_SWEEPS: usize = 50;

/// All eigenpairs of the symmetric tridiagonal matrix with diagonal `diag`
/// and sub/super-diagonal `offdiag` (`offdiag[i]` couples `i` and `i + 1`).
pub fn tridiag_eig(diag: &[f64], offdiag: &[f64]) -> Result<TridiagEigen> {
    let n = diag.len();
    if n == 0 {
        return Ok(TridiagEigen { values: vec![], vectors: vec![] });
    }
    if offdiag.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "tridiag_eig: {} diagonal entries need {} off-diagonal entries, got {}",
            n,
            n - 1,
            offdiag.len()
        )));
    }
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    // z[i] holds the i-th eigenvector, so the rotations touch contiguous rows.
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        })
        .collect();

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::NoConvergence(format!(
                    "tridiagonal QL: eigenvalue {l} after {MAX_SWEEPS} sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let (lo, hi) = z.split_at_mut(i + 1);
                let zi = &mut lo[i];
                let zi1 = &mut hi[0];
                for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                    let f = *b;
                    *b = s * *a + c * f;
                    *a = c * *a - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = order.into_iter().map(|i| std::mem::take(&mut z[i])).collect();
    Ok(TridiagEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn apply(diag: &[f64], off: &[f64], v: &[f64]) -> Vec<f64> {
        let n = diag.len();
        (0..n)
            .map(|i| {
                let mut s = diag[i] * v[i];
                if i > 0 {
                    s += off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    #[test]
    fn three_by_three_laplacian() {
        let eig = tridiag_eig(&[2.0, 2.0, 2.0], &[-1.0, -1.0]).unwrap();
        let s = 2f64.sqrt();
        let expected = [2.0 - s, 2.0, 2.0 + s];
        for (a, b) in eig.values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn one_by_one() {
        let eig = tridiag_eig(&[3.5], &[]).unwrap();
        assert_eq!(eig.values, vec![3.5]);
        assert_eq!(eig.vectors, vec![vec![1.0]]);
    }

    #[test]
    fn random_100_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let diag: Vec<f64> = (0..100).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let off: Vec<f64> = (0..99).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let eig = tridiag_eig(&diag, &off).unwrap();
        let tnorm = diag.iter().map(|d| d.abs()).fold(0.0, f64::max) + 4.0;
        for (lam, v) in eig.values.iter().zip(&eig.vectors) {
            let tv = apply(&diag, &off, v);
            let r: f64 = tv.iter().zip(v).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt();
            assert!(r <= 1e-12 * tnorm, "residual {r}");
        }
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }
}
