//! Prolate spheroidal wave functions of order zero, `psi_n(x; c)`, represented
//! by their coefficients in the orthonormal Legendre basis.
//!
//! In that basis the prolate differential operator
//! `-((1 - x^2) u')' + c^2 x^2 u` is symmetric pentadiagonal with only even
//! offsets, so it splits by parity into two symmetric tridiagonal matrices.
//! Their lowest eigenpairs give `chi_n(c)` and the expansion coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legendre;
use crate::linalg::{tridiag_eig, DenseMatrix};
use crate::quadrature::gauss_legendre;
use crate::tolerances::{MAX_MODE, TRUNCATION_TAIL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProlateParams {
    /// Bandwidth parameter.
    pub c: f64,
    /// Highest mode index.
    pub n: usize,
    /// Legendre truncation length.
    pub m: usize,
}

/// `psi_0 .. psi_N` for one bandwidth `c`.
///
/// Row `n` of `coeffs` holds the orthonormal-Legendre coefficients of
/// `psi_n`; `chi[n]` is its Sturm-Liouville eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct ProlateBasis {
    params: ProlateParams,
    coeffs: DenseMatrix<f64>,
    chi: Vec<f64>,
}

/// Builds `psi_0 .. psi_n` for bandwidth `c`.
pub fn build_basis(c: f64, n: usize) -> Result<ProlateBasis> {
    if !c.is_finite() || c < 0.0 {
        return Err(Error::InvalidArgument(format!("bandwidth must be finite and >= 0, got {c}")));
    }
    if n < 1 || n > MAX_MODE {
        return Err(Error::InvalidArgument(format!("mode count must lie in 1..={MAX_MODE}, got {n}")));
    }
    let scale = n.max(c.ceil() as usize);
    let cap = 4 * scale + 200;
    let mut m = 2 * scale + 60;
    let mut tail = f64::INFINITY;
    while m <= cap {
        let basis = galerkin(c, n, m)?;
        tail = basis.trailing_tail();
        if tail < TRUNCATION_TAIL {
            return Ok(basis);
        }
        m *= 2;
    }
    Err(Error::TruncationFailure { m: m / 2, tail })
}

fn galerkin(c: f64, n: usize, m: usize) -> Result<ProlateBasis> {
    let c2 = c * c;
    let diag = |k: usize| {
        let a = legendre::alpha(k);
        let am = if k == 0 { 0.0 } else { legendre::alpha(k - 1) };
        let kf = k as f64;
        kf * (kf + 1.0) + c2 * (a * a + am * am)
    };
    let off = |k: usize| c2 * legendre::alpha(k) * legendre::alpha(k + 1);

    let mut coeffs = DenseMatrix::zeros(n + 1, m);
    let mut chi = vec![0.0; n + 1];
    for parity in 0..2usize {
        let idx: Vec<usize> = (parity..m).step_by(2).collect();
        let d: Vec<f64> = idx.iter().map(|&k| diag(k)).collect();
        let e: Vec<f64> = idx[..idx.len() - 1].iter().map(|&k| off(k)).collect();
        let eig = tridiag_eig(&d, &e)?;
        for (i, (val, vec)) in eig.values.iter().zip(&eig.vectors).enumerate() {
            let mode = 2 * i + parity;
            if mode > n {
                break;
            }
            chi[mode] = *val;
            // positive coefficient on Pbar_mode
            let sign = if vec[i] < 0.0 { -1.0 } else { 1.0 };
            let row = coeffs.row_mut(mode);
            for (&k, &v) in idx.iter().zip(vec) {
                row[k] = sign * v;
            }
        }
    }
    if !chi.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::NoConvergence(format!(
            "prolate eigenvalues not strictly ascending for c = {c}, N = {n}"
        )));
    }
    Ok(ProlateBasis { params: ProlateParams { c, n, m }, coeffs, chi })
}

impl ProlateBasis {
    pub fn params(&self) -> ProlateParams {
        self.params
    }

    pub fn c(&self) -> f64 {
        self.params.c
    }

    /// Highest mode index `N`.
    pub fn n(&self) -> usize {
        self.params.n
    }

    /// Legendre truncation length `M`.
    pub fn truncation(&self) -> usize {
        self.params.m
    }

    pub fn chi(&self) -> &[f64] {
        &self.chi
    }

    pub fn coeffs(&self) -> &DenseMatrix<f64> {
        &self.coeffs
    }

    pub fn coeff_row(&self, n: usize) -> &[f64] {
        self.coeffs.row(n)
    }

    /// `c / sqrt(chi_N)`.
    pub fn q_ratio(&self) -> f64 {
        self.params.c / self.chi[self.params.n].sqrt()
    }

    /// `int_{-1}^{1} psi_n`, carried entirely by the `Pbar_0` coefficient.
    pub fn integral(&self, n: usize) -> f64 {
        std::f64::consts::SQRT_2 * self.coeffs[(n, 0)]
    }

    fn trailing_tail(&self) -> f64 {
        let m = self.params.m;
        (0..=self.params.n)
            .map(|r| self.coeffs[(r, m - 1)].abs().max(self.coeffs[(r, m - 2)].abs()))
            .fold(0.0, f64::max)
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n > self.params.n {
            return Err(Error::InvalidArgument(format!("mode index {n} exceeds N = {}", self.params.n)));
        }
        Ok(())
    }

    /// `psi_n^{(m)}(x)` for `m` in `0..=2` and `|x| <= 1`.
    pub fn eval_psi(&self, n: usize, x: f64, m: usize) -> Result<f64> {
        self.check_index(n)?;
        check_point(x)?;
        if m > 2 {
            return Err(Error::InvalidArgument(format!("derivative order {m} not supported")));
        }
        Ok(legendre::eval_series(self.coeffs.row(n), x, m))
    }

    /// `psi_0^{(m)}(x) .. psi_N^{(m)}(x)`; `x` is not range-checked.
    pub fn eval_all(&self, x: f64, m: usize) -> Vec<f64> {
        let p = legendre::values(x, self.params.m, m);
        (0..=self.params.n)
            .map(|r| self.coeffs.row(r).iter().zip(&p).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Matrix with entries `psi_k^{(m)}(points[j])`, rows indexed by point.
    pub fn values_matrix(&self, points: &[f64], m: usize) -> DenseMatrix<f64> {
        let mut out = DenseMatrix::zeros(points.len(), self.params.n + 1);
        for (j, &x) in points.iter().enumerate() {
            out.row_mut(j).copy_from_slice(&self.eval_all(x, m));
        }
        out
    }

    /// `lambda_n(c)`, the modulus of the finite Fourier transform eigenvalue.
    ///
    /// Computed from `|int e^{i c x0 t} psi_n(t) dt| / |psi_n(x0)|` with `x0`
    /// chosen on a uniform scan of `[0, 1]` to maximize `|psi_n(x0)|`. Relative
    /// accuracy is about `1e-16 / lambda_n`, so values below roughly `1e-13`
    /// are only good to their order of magnitude.
    pub fn lambda_n(&self, n: usize) -> Result<f64> {
        self.check_index(n)?;
        let c = self.params.c;
        let (x0, psi_x0) = (0..=32)
            .map(|i| {
                let x = i as f64 / 32.0;
                (x, legendre::eval_series(self.coeffs.row(n), x, 0))
            })
            .fold((0.0, 0.0f64), |best, cur| if cur.1.abs() > best.1.abs() { cur } else { best });
        let npts = self.params.m.max(c.ceil() as usize) + 40;
        let (t, w) = gauss_legendre(npts)?;
        let row = self.coeffs.row(n);
        let integral: Complex64 = t
            .iter()
            .zip(&w)
            .map(|(&ti, &wi)| {
                let psi = legendre::eval_series(row, ti, 0);
                Complex64::from_polar(wi * psi, c * x0 * ti)
            })
            .sum();
        Ok(integral.norm() / psi_x0.abs())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BasisRecord::from(self)).expect("basis serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let rec: BasisRecord = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidArgument(format!("malformed basis JSON: {e}")))?;
        rec.try_into()
    }
}

/// On-disk form `{c, N, M, chi[], coeffs[][]}`.
#[derive(Serialize, Deserialize)]
struct BasisRecord {
    c: f64,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    chi: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
}

impl From<&ProlateBasis> for BasisRecord {
    fn from(b: &ProlateBasis) -> Self {
        Self {
            c: b.params.c,
            n: b.params.n,
            m: b.params.m,
            chi: b.chi.clone(),
            coeffs: (0..=b.params.n).map(|r| b.coeffs.row(r).to_vec()).collect(),
        }
    }
}

impl TryFrom<BasisRecord> for ProlateBasis {
    type Error = Error;

    fn try_from(r: BasisRecord) -> Result<Self> {
        if r.chi.len() != r.n + 1 || r.coeffs.len() != r.n + 1 || r.coeffs.iter().any(|row| row.len() != r.m) {
            return Err(Error::InvalidArgument("basis JSON has inconsistent shapes".into()));
        }
        if r.m < r.n + 1 {
            return Err(Error::InvalidArgument("basis JSON violates M >= N + 1".into()));
        }
        Ok(Self {
            params: ProlateParams { c: r.c, n: r.n, m: r.m },
            coeffs: DenseMatrix::from_rows(&r.coeffs),
            chi: r.chi,
        })
    }
}

fn check_point(x: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("evaluation point {x} outside [-1, 1]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_reduction_at_zero_bandwidth() {
        let b = build_basis(0.0, 8).unwrap();
        for (n, chi) in b.chi().iter().enumerate() {
            assert!((chi - (n * (n + 1)) as f64).abs() < 1e-12);
            for k in 0..b.truncation() {
                let expected = if k == n { 1.0 } else { 0.0 };
                assert!((b.coeffs()[(n, k)] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn chi_bounds_at_c10() {
        let b = build_basis(10.0, 24).unwrap();
        let chi24 = b.chi()[24];
        assert!(chi24 > 600.0 && chi24 < 700.0, "{chi24}");
        for (n, chi) in b.chi().iter().enumerate() {
            let base = (n * (n + 1)) as f64;
            assert!(*chi > base && *chi < base + 100.0);
        }
    }

    #[test]
    fn chi_large_n_asymptotic() {
        let b = build_basis(1.0, 100).unwrap();
        assert!((b.chi()[100] - (100.0 * 101.0 + 0.5)).abs() < 0.01);
    }

    #[test]
    fn rows_are_unit_parity_and_signed() {
        let b = build_basis(20.0, 30).unwrap();
        for n in 0..=30 {
            let row = b.coeff_row(n);
            let norm: f64 = row.iter().map(|v| v * v).sum();
            assert!((norm - 1.0).abs() < 1e-13);
            assert!(row[n] > 0.0);
            for (k, v) in row.iter().enumerate() {
                if (k + n) % 2 == 1 {
                    assert_eq!(*v, 0.0);
                }
            }
        }
    }

    #[test]
    fn eval_legendre_p3() {
        let b = build_basis(0.0, 4).unwrap();
        let v = b.eval_psi(3, 0.5, 0).unwrap();
        let expected = (3.5f64).sqrt() * (5.0 * 0.125 - 1.5) / 2.0;
        assert!((v - expected).abs() < 1e-14);
    }

    #[test]
    fn odd_mode_is_odd() {
        let b = build_basis(10.0, 8).unwrap();
        let a = b.eval_psi(5, 0.3, 0).unwrap();
        let z = b.eval_psi(5, -0.3, 0).unwrap();
        assert!((a + z).abs() < 1e-14 && a.abs() > 1e-3);
    }

    #[test]
    fn second_derivative_matches_finite_difference() {
        let b = build_basis(10.0, 8).unwrap();
        let h = 1e-4;
        let f = |x| b.eval_psi(7, x, 0).unwrap();
        let fd = (f(0.2 + h) - 2.0 * f(0.2) + f(0.2 - h)) / (h * h);
        let exact = b.eval_psi(7, 0.2, 2).unwrap();
        assert!(((fd - exact) / exact).abs() < 1e-6, "{fd} vs {exact}");
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(build_basis(-1.0, 4), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_basis(1.0, 0), Err(Error::InvalidArgument(_))));
        let b = build_basis(1.0, 4).unwrap();
        assert!(b.eval_psi(5, 0.0, 0).is_err());
        assert!(b.eval_psi(1, 1.2, 0).is_err());
        assert!(b.eval_psi(1, 0.2, 3).is_err());
    }

    #[test]
    fn lambda_small_bandwidth_limit() {
        let b = build_basis(1e-6, 2).unwrap();
        assert!((b.lambda_n(0).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn lambda_decreasing_and_table_magnitude() {
        let b = build_basis(10.0, 24).unwrap();
        let lam: Vec<f64> = (0..=24).map(|n| b.lambda_n(n).unwrap()).collect();
        assert!(lam.windows(2).skip(1).all(|w| w[1] < w[0]), "{lam:?}");
        let l24 = lam[24];
        assert!(l24 > 1.77e-15 && l24 < 1.77e-13, "{l24}");
    }

    #[test]
    fn json_round_trip() {
        let b = build_basis(3.0, 6).unwrap();
        let back = ProlateBasis::from_json(&b.to_json()).unwrap();
        assert_eq!(b, back);
        let v = b.to_json();
        assert!(v.get("N").is_some() && v.get("M").is_some() && v.get("chi").is_some());
    }
}
