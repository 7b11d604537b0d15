use num_complex::Complex64;

use super::dense::{DenseMatrix, Scalar};

const ROTATION_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 80;

/// Singular values of a real matrix by one-sided (Hestenes) Jacobi, descending.
pub fn singular_values(a: &DenseMatrix<f64>) -> Vec<f64> {
    let (m, n) = (a.rows(), a.cols());
    // columns stored contiguously
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (left, right) = cols.split_at_mut(q);
                let ap = &mut left[p];
                let aq = &mut right[0];
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    alpha += ap[i] * ap[i];
                    beta += aq[i] * aq[i];
                    gamma += ap[i] * aq[i];
                }
                if gamma == 0.0 || gamma.abs() <= ROTATION_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let x = ap[i];
                    let y = aq[i];
                    ap[i] = c * x - s * y;
                    aq[i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// 2-norm condition number `sigma_max / sigma_min`; infinite when singular.
pub fn cond2<T: Scalar>(a: &DenseMatrix<T>) -> f64 {
    let sv = if T::IS_REAL {
        singular_values(&a.map(|v| v.re()))
    } else {
        // [[Re, -Im], [Im, Re]] has each singular value of A twice.
        let (m, n) = (a.rows(), a.cols());
        let emb = DenseMatrix::from_fn(2 * m, 2 * n, |i, j| {
            let v = a[(i % m, j % n)];
            match (i < m, j < n) {
                (true, true) | (false, false) => v.re(),
                (true, false) => -v.im(),
                (false, true) => v.im(),
            }
        });
        singular_values(&emb)
    };
    match (sv.first(), sv.last()) {
        (Some(&smax), Some(&smin)) if smin > 0.0 => smax / smin,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

pub fn cond2_complex(a: &DenseMatrix<Complex64>) -> f64 {
    cond2(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_has_unit_condition() {
        assert_eq!(cond2(&DenseMatrix::<f64>::identity(5)), 1.0);
    }

    #[test]
    fn diagonal_condition() {
        let c = cond2(&DenseMatrix::diagonal(&[10.0, 0.1]));
        assert!((c - 100.0).abs() < 1e-12);
    }

    #[test]
    fn householder_product_is_perfectly_conditioned() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 12;
        let mut q = DenseMatrix::<f64>::identity(n);
        for _ in 0..4 {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let vv: f64 = v.iter().map(|x| x * x).sum();
            let h = DenseMatrix::from_fn(n, n, |i, j| {
                (if i == j { 1.0 } else { 0.0 }) - 2.0 * v[i] * v[j] / vv
            });
            q = q.matmul(&h);
        }
        let c = cond2(&q);
        assert!((c - 1.0).abs() < 1e-10, "{c}");
    }

    #[test]
    fn complex_embedding_matches_real_case() {
        let a = DenseMatrix::from_rows(&[vec![3.0, 1.0], vec![0.5, 2.0]]);
        let ac = a.to_complex().map(|z| z * Complex64::new(0.0, 1.0));
        assert!((cond2(&a) - cond2_complex(&ac)).abs() < 1e-12);
    }

    #[test]
    fn singular_values_of_known_matrix() {
        let a = DenseMatrix::from_rows(&[vec![3.0, 0.0], vec![4.0, 5.0]]);
        // A^T A = [[25, 20], [20, 25]] -> eigenvalues 45, 5
        let sv = singular_values(&a);
        assert!((sv[0] - 45f64.sqrt()).abs() < 1e-13);
        assert!((sv[1] - 5f64.sqrt()).abs() < 1e-13);
    }
}
