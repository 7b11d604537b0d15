//! Orthonormal Legendre polynomials `Pbar_k = sqrt(k + 1/2) P_k` and the
//! coefficient-space algebra used to build PSWF antiderivatives.

/// Recurrence coefficient: `x Pbar_k = a_k Pbar_{k+1} + a_{k-1} Pbar_{k-1}`.
#[inline]
pub fn alpha(k: usize) -> f64 {
    let k = k as f64;
    (k + 1.0) / ((2.0 * k + 1.0) * (2.0 * k + 3.0)).sqrt()
}

/// `sqrt(k + 1/2)`, the value `Pbar_k(1)`.
#[inline]
pub fn norm_factor(k: usize) -> f64 {
    (k as f64 + 0.5).sqrt()
}

/// Values of `Pbar_k^{(m)}(x)` for `k < len`, for every order `0..=order`.
///
/// `out[m][k]` holds the `m`-th derivative. `order <= 2`.
pub fn table(x: f64, len: usize, order: usize) -> [Vec<f64>; 3] {
    assert!(order <= 2);
    let mut p = vec![0.0; len];
    let mut d1 = if order >= 1 { vec![0.0; len] } else { Vec::new() };
    let mut d2 = if order >= 2 { vec![0.0; len] } else { Vec::new() };
    if len == 0 {
        return [p, d1, d2];
    }
    p[0] = std::f64::consts::FRAC_1_SQRT_2;
    if len > 1 {
        p[1] = 1.5f64.sqrt() * x;
        if order >= 1 {
            d1[1] = 1.5f64.sqrt();
        }
    }
    for k in 1..len.saturating_sub(1) {
        let ak = alpha(k);
        let akm = alpha(k - 1);
        p[k + 1] = (x * p[k] - akm * p[k - 1]) / ak;
        if order >= 1 {
            d1[k + 1] = (x * d1[k] + p[k] - akm * d1[k - 1]) / ak;
        }
        if order >= 2 {
            d2[k + 1] = (x * d2[k] + 2.0 * d1[k] - akm * d2[k - 1]) / ak;
        }
    }
    [p, d1, d2]
}

/// Values `Pbar_k^{(m)}(x)` for a single derivative order.
pub fn values(x: f64, len: usize, m: usize) -> Vec<f64> {
    let [p, d1, d2] = table(x, len, m);
    match m {
        0 => p,
        1 => d1,
        _ => d2,
    }
}

/// Evaluates the series `sum_k coeffs[k] Pbar_k^{(m)}(x)`.
pub fn eval_series(coeffs: &[f64], x: f64, m: usize) -> f64 {
    let v = values(x, coeffs.len(), m);
    coeffs.iter().zip(&v).map(|(a, b)| a * b).sum()
}

/// Coefficients of `x f(x)`; output is one entry longer than the input.
pub fn mul_x(coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len() + 1];
    for (k, &a) in coeffs.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        out[k + 1] += alpha(k) * a;
        if k > 0 {
            out[k - 1] += alpha(k - 1) * a;
        }
    }
    out
}

/// Coefficients of `int_{-1}^x f(t) dt`; output is one entry longer.
pub fn integrate_from_minus_one(coeffs: &[f64]) -> Vec<f64> {
    // int_{-1}^x P_k = (P_{k+1} - P_{k-1}) / (2k + 1) for k >= 1, and x + 1 for k = 0.
    let mut out = vec![0.0; coeffs.len() + 1];
    for (k, &a) in coeffs.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let sk = norm_factor(k);
        if k == 0 {
            out[1] += a * sk / norm_factor(1);
            out[0] += a;
        } else {
            let w = a * sk / (2.0 * k as f64 + 1.0);
            out[k + 1] += w / norm_factor(k + 1);
            out[k - 1] -= w / norm_factor(k - 1);
        }
    }
    out
}

/// Coefficients of `f'`; the output has the same length as the input.
pub fn differentiate(coeffs: &[f64]) -> Vec<f64> {
    // Classical form: if f = sum a_k P_k then b_{k-1} = (2k - 1)(a_k + b_{k+1} / (2k + 3)).
    let len = coeffs.len();
    let a: Vec<f64> = coeffs.iter().enumerate().map(|(k, c)| c * norm_factor(k)).collect();
    let mut b = vec![0.0; len + 2];
    for k in (1..len).rev() {
        let kf = k as f64;
        b[k - 1] = (2.0 * kf - 1.0) * (a[k] + b[k + 1] / (2.0 * kf + 3.0));
    }
    b.truncate(len);
    b.iter().enumerate().map(|(k, v)| v / norm_factor(k)).collect()
}

/// Value of the series at `x = 1`.
pub fn value_at_one(coeffs: &[f64]) -> f64 {
    coeffs.iter().enumerate().map(|(k, a)| a * norm_factor(k)).sum()
}

/// Value of the series at `x = -1`.
pub fn value_at_minus_one(coeffs: &[f64]) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| if k % 2 == 0 { a * norm_factor(k) } else { -a * norm_factor(k) })
        .sum()
}

/// Coefficients of the Legendre polynomial `P_n` (classical normalization).
pub fn classical_legendre(n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0 / norm_factor(n);
    c
}

/// Classical `P_n(x)` and `P_n'(x)` by the three-term recurrence.
pub fn classical(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        let s = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        s * nf * (nf + 1.0) / 2.0
    } else {
        nf * (p0 - x * p1) / (1.0 - x * x)
    };
    (p1, dp)
}
