use super::dense::{DenseMatrix, Scalar};
use crate::error::{Error, Result};

/// Partial-pivot LU factorization `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu<T: Scalar = f64> {
    lu: DenseMatrix<T>,
    perm: Vec<usize>,
    norm1: f64,
}

impl<T: Scalar> Lu<T> {
    pub fn factor(a: &DenseMatrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidArgument(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let norm1 = a.norm1();
        let tiny = n as f64 * f64::EPSILON * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].modulus()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= tiny || !pmax.is_finite() {
                return Err(Error::Singular { pivot: k, size: n });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / piv;
                lu[(i, k)] = l;
                if l == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Self { lu, perm, norm1 })
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn solve_vec(&self, b: &[T]) -> Vec<T> {
        let n = self.size();
        assert_eq!(b.len(), n, "rhs length mismatch");
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in 0..i {
                s -= row[j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in i + 1..n {
                s -= row[j] * x[j];
            }
            x[i] = s / row[i];
        }
        x
    }

    /// Solves `A^T x = b` (plain transpose, no conjugation).
    pub fn solve_transpose_vec(&self, b: &[T]) -> Vec<T> {
        let n = self.size();
        assert_eq!(b.len(), n, "rhs length mismatch");
        // A^T = U^T L^T P, so solve U^T y = b, L^T z = y, x = P^T z.
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[(j, i)] * y[j];
            }
            y[i] = s / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[(j, i)] * y[j];
            }
            y[i] = s;
        }
        let mut x = vec![T::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }

    pub fn solve_mat(&self, b: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(b.rows(), self.size(), "rhs row count mismatch");
        let mut out = DenseMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve_vec(&b.column(j));
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }

    pub fn inverse(&self) -> DenseMatrix<T> {
        self.solve_mat(&DenseMatrix::identity(self.size()))
    }

    /// 1-norm condition estimate `||A||_1 * est(||A^{-1}||_1)` by Hager's method.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.size();
        if n == 0 {
            return 1.0;
        }
        let mut x = vec![T::from_real(1.0 / n as f64); n];
        let mut est = 0.0;
        for _ in 0..5 {
            let y = self.solve_vec(&x);
            let ynorm: f64 = y.iter().map(|v| v.modulus()).sum();
            if ynorm <= est {
                break;
            }
            est = ynorm;
            let xi: Vec<T> = y
                .iter()
                .map(|v| {
                    let m = v.modulus();
                    if m == 0.0 {
                        T::one()
                    } else {
                        v.scale(1.0 / m).conj()
                    }
                })
                .collect();
            let z = self.solve_transpose_vec(&xi);
            let (jmax, zmax) = z
                .iter()
                .enumerate()
                .map(|(j, v)| (j, v.modulus()))
                .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * *b).re()).sum();
            if zmax <= ztx {
                break;
            }
            x = vec![T::zero(); n];
            x[jmax] = T::one();
        }
        self.norm1 * est
    }
}

/// Solves `A X = B` by partial-pivot LU.
pub fn lu_solve<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if a.rows() != b.rows() {
        return Err(Error::InvalidArgument(format!(
            "lu_solve: A is {}x{}, B has {} rows",
            a.rows(),
            a.cols(),
            b.rows()
        )));
    }
    Ok(Lu::factor(a)?.solve_mat(b))
}

pub fn lu_solve_vec<T: Scalar>(a: &DenseMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    Ok(Lu::factor(a)?.solve_vec(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_returns_rhs() {
        let b = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let x = lu_solve(&DenseMatrix::identity(2), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn two_by_two_hand_solve() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let x = lu_solve_vec(&a, &[1.0, 2.0]).unwrap();
        assert!((x[0] - 0.2).abs() < 1e-15 && (x[1] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn random_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 50;
        let a = DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let b = DenseMatrix::from_fn(n, 3, |_, _| rng.gen_range(-1.0..1.0));
        let x = lu_solve(&a, &b).unwrap();
        let r = a.matmul(&x).sub(&b).max_abs();
        assert!(r <= 1e-10 * a.max_abs() * x.max_abs(), "residual {r}");
    }

    #[test]
    fn transpose_solve_matches_explicit_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = DenseMatrix::from_fn(8, 8, |_, _| rng.gen_range(-1.0..1.0));
        let b: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let x1 = Lu::factor(&a).unwrap().solve_transpose_vec(&b);
        let x2 = lu_solve_vec(&a.transpose(), &b).unwrap();
        for (u, v) in x1.iter().zip(&x2) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_system() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let a = DenseMatrix::from_rows(&[vec![one, i], vec![-i, one * 3.0]]);
        let x = lu_solve_vec(&a, &[one, i]).unwrap();
        let r = a.matvec(&x);
        assert!((r[0] - one).norm() < 1e-14 && (r[1] - i).norm() < 1e-14);
    }

    #[test]
    fn singular_is_reported() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(Lu::factor(&a), Err(Error::Singular { .. })));
    }

    #[test]
    fn condition_estimate_of_diagonal() {
        let a = DenseMatrix::diagonal(&[10.0, 0.1, 1.0]);
        let c = Lu::factor(&a).unwrap().condition_estimate();
        assert!((c - 100.0).abs() < 1e-10, "{c}");
    }
}
