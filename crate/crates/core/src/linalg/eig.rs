//! Eigenvalues of dense real nonsymmetric matrices: balancing, Householder
//! reduction to upper Hessenberg form, Francis double-shift QR.

use num_complex::Complex64;

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

/// All eigenvalues of a real square matrix, in no particular order.
pub fn dense_eig(a: &DenseMatrix<f64>) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::InvalidArgument(format!(
            "dense_eig needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.all_finite() {
        return Err(Error::InvalidArgument("dense_eig: non-finite entry".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    let mut h = OneBased::from_matrix(a);
    h.balance();
    h.reduce_to_hessenberg();
    h.hessenberg_qr()
}

/// Square work array addressed with 1-based indices, as in the classical
/// EISPACK formulations of these algorithms.
struct OneBased {
    n: usize,
    a: Vec<f64>,
}

impl OneBased {
    fn from_matrix(m: &DenseMatrix<f64>) -> Self {
        let n = m.rows();
        let mut a = vec![0.0; (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                a[(i + 1) * (n + 1) + j + 1] = m[(i, j)];
            }
        }
        Self { n, a }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * (self.n + 1) + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        let n1 = self.n + 1;
        self.a[i * n1 + j] = v;
    }

    /// Diagonal similarity scaling by powers of two so that row and column
    /// norms are comparable.
    fn balance(&mut self) {
        const RADIX: f64 = 2.0;
        let sqrdx = RADIX * RADIX;
        let n = self.n;
        let mut done = false;
        while !done {
            done = true;
            for i in 1..=n {
                let (mut r, mut c) = (0.0, 0.0);
                for j in 1..=n {
                    if j != i {
                        c += self.at(j, i).abs();
                        r += self.at(i, j).abs();
                    }
                }
                if c == 0.0 || r == 0.0 {
                    continue;
                }
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        let v = self.at(i, j) * g;
                        self.set(i, j, v);
                    }
                    for j in 1..=n {
                        let v = self.at(j, i) * f;
                        self.set(j, i, v);
                    }
                }
            }
        }
    }

    /// Orthogonal (Householder) similarity reduction to upper Hessenberg form.
    fn reduce_to_hessenberg(&mut self) {
        let n = self.n;
        let mut ort = vec![0.0; n + 1];
        for m in 2..n {
            let scale: f64 = (m..=n).map(|i| self.at(i, m - 1).abs()).sum();
            if scale == 0.0 {
                continue;
            }
            let mut h = 0.0;
            for i in (m..=n).rev() {
                ort[i] = self.at(i, m - 1) / scale;
                h += ort[i] * ort[i];
            }
            let g = -h.sqrt().copysign(ort[m]);
            h -= ort[m] * g;
            ort[m] -= g;
            for j in m..=n {
                let f: f64 = (m..=n).map(|i| ort[i] * self.at(i, j)).sum::<f64>() / h;
                for i in m..=n {
                    let v = self.at(i, j) - f * ort[i];
                    self.set(i, j, v);
                }
            }
            for i in 1..=n {
                let f: f64 = (m..=n).map(|j| ort[j] * self.at(i, j)).sum::<f64>() / h;
                for j in m..=n {
                    let v = self.at(i, j) - f * ort[j];
                    self.set(i, j, v);
                }
            }
            self.set(m, m - 1, scale * g);
            for i in m + 1..=n {
                self.set(i, m - 1, 0.0);
            }
        }
    }

    /// Francis double-shift QR on the Hessenberg matrix.
    fn hessenberg_qr(mut self) -> Result<Vec<Complex64>> {
        let n = self.n;
        let max_total = 100 * n.max(1);
        let mut wr = vec![0.0; n + 1];
        let mut wi = vec![0.0; n + 1];
        let mut anorm = 0.0;
        for i in 1..=n {
            for j in i.saturating_sub(1).max(1)..=n {
                anorm += self.at(i, j).abs();
            }
        }
        let mut nn = n;
        let mut t = 0.0;
        let mut total = 0usize;
        while nn >= 1 {
            let mut its = 0;
            loop {
                // Look for a single small subdiagonal element.
                let mut l = nn;
                while l >= 2 {
                    let mut s = self.at(l - 1, l - 1).abs() + self.at(l, l).abs();
                    if s == 0.0 {
                        s = anorm;
                    }
                    if self.at(l, l - 1).abs() + s == s {
                        self.set(l, l - 1, 0.0);
                        break;
                    }
                    l -= 1;
                }
                let mut x = self.at(nn, nn);
                if l == nn {
                    wr[nn] = x + t;
                    wi[nn] = 0.0;
                    nn -= 1;
                    break;
                }
                let mut y = self.at(nn - 1, nn - 1);
                let mut w = self.at(nn, nn - 1) * self.at(nn - 1, nn);
                if l == nn - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + z.copysign(p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != 0.0 {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn = nn.saturating_sub(2);
                    break;
                }
                if its == 60 || total > max_total {
                    return Err(Error::NoConvergence(format!(
                        "Hessenberg QR stalled with {nn} eigenvalues remaining"
                    )));
                }
                if its == 10 || its == 20 || its == 40 {
                    // Exceptional shift.
                    t += x;
                    for i in 1..=nn {
                        let v = self.at(i, i) - x;
                        self.set(i, i, v);
                    }
                    let s = self.at(nn, nn - 1).abs() + self.at(nn - 1, nn - 2).abs();
                    x = 0.75 * s;
                    y = x;
                    w = -0.4375 * s * s;
                }
                its += 1;
                total += 1;
                // Look for two consecutive small subdiagonal elements.
                let mut m = nn - 2;
                let (mut p, mut q, mut r);
                loop {
                    let z = self.at(m, m);
                    let rr = x - z;
                    let ss = y - z;
                    p = (rr * ss - w) / self.at(m + 1, m) + self.at(m, m + 1);
                    q = self.at(m + 1, m + 1) - z - rr - ss;
                    r = self.at(m + 2, m + 1);
                    let s = p.abs() + q.abs() + r.abs();
                    p /= s;
                    q /= s;
                    r /= s;
                    if m == l {
                        break;
                    }
                    let u = self.at(m, m - 1).abs() * (q.abs() + r.abs());
                    let v = p.abs() * (self.at(m - 1, m - 1).abs() + z.abs() + self.at(m + 1, m + 1).abs());
                    if u + v == v {
                        break;
                    }
                    m -= 1;
                }
                for i in m + 2..=nn {
                    self.set(i, i - 2, 0.0);
                    if i != m + 2 {
                        self.set(i, i - 3, 0.0);
                    }
                }
                // Double QR step on rows l..nn and columns m..nn.
                let mut xk = 0.0;
                for k in m..nn {
                    if k != m {
                        p = self.at(k, k - 1);
                        q = self.at(k + 1, k - 1);
                        r = if k != nn - 1 { self.at(k + 2, k - 1) } else { 0.0 };
                        xk = p.abs() + q.abs() + r.abs();
                        if xk != 0.0 {
                            p /= xk;
                            q /= xk;
                            r /= xk;
                        }
                    }
                    let s = (p * p + q * q + r * r).sqrt().copysign(p);
                    if s == 0.0 {
                        continue;
                    }
                    if k == m {
                        if l != m {
                            let v = -self.at(k, k - 1);
                            self.set(k, k - 1, v);
                        }
                    } else {
                        self.set(k, k - 1, -s * xk);
                    }
                    p += s;
                    let xx = p / s;
                    let yy = q / s;
                    let zz = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        let mut pp = self.at(k, j) + q * self.at(k + 1, j);
                        if k != nn - 1 {
                            pp += r * self.at(k + 2, j);
                            let v = self.at(k + 2, j) - pp * zz;
                            self.set(k + 2, j, v);
                        }
                        let v = self.at(k + 1, j) - pp * yy;
                        self.set(k + 1, j, v);
                        let v = self.at(k, j) - pp * xx;
                        self.set(k, j, v);
                    }
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        let mut pp = xx * self.at(i, k) + yy * self.at(i, k + 1);
                        if k != nn - 1 {
                            pp += zz * self.at(i, k + 2);
                            let v = self.at(i, k + 2) - pp * r;
                            self.set(i, k + 2, v);
                        }
                        let v = self.at(i, k + 1) - pp * q;
                        self.set(i, k + 1, v);
                        let v = self.at(i, k) - pp;
                        self.set(i, k, v);
                    }
                }
                if l >= nn - 1 {
                    break;
                }
            }
        }
        Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn diagonal_matrix() {
        let a = DenseMatrix::diagonal(&[3.0, -1.0, 2.5, 7.0]);
        let ev = sorted_re(dense_eig(&a).unwrap());
        let expected = [-1.0, 2.5, 3.0, 7.0];
        for (e, x) in ev.iter().zip(expected) {
            assert!((e.re - x).abs() < 1e-14 && e.im == 0.0);
        }
    }

    #[test]
    fn rotation_has_unit_complex_pair() {
        let th = PI / 3.0;
        let a = DenseMatrix::from_rows(&[vec![th.cos(), -th.sin()], vec![th.sin(), th.cos()]]);
        let ev = sorted_re(dense_eig(&a).unwrap());
        for e in &ev {
            assert!((e.re - 0.5).abs() < 1e-14);
            assert!((e.im.abs() - th.sin()).abs() < 1e-14);
        }
        assert!(ev[0].im * ev[1].im < 0.0);
    }

    #[test]
    fn companion_matrix_roots() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let a = DenseMatrix::from_rows(&[
            vec![6.0, -11.0, 6.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ]);
        let ev = sorted_re(dense_eig(&a).unwrap());
        for (e, x) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((e.re - x).abs() < 1e-12 && e.im.abs() < 1e-12, "{e}");
        }
    }

    #[test]
    fn one_by_one() {
        let ev = dense_eig(&DenseMatrix::from_rows(&[vec![-4.0]])).unwrap();
        assert_eq!(ev, vec![Complex64::new(-4.0, 0.0)]);
    }

    #[test]
    fn symmetric_tridiagonal_agrees_with_closed_form() {
        let n = 40;
        let a = DenseMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        });
        let mut ev: Vec<f64> = dense_eig(&a).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        for (k, e) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * (PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((e - exact).abs() < 1e-12);
        }
    }
}
