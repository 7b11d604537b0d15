//! Approximate Kong-Rokhlin rule for pairing a bandwidth `c` with a mode count.
//!
//! `lambda_N(c)` is replaced by the closed-form upper estimate
//! `nu_N(c) = sqrt(pi e / 2) (e c / 4)^N (N + 1/2)^{-(N + 1/2)} e^{1/(6N)}`,
//! and `N_*` is the integer part of the root of `log nu_x(c) = log eps`.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::KR_BISECTION_WIDTH;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrPair {
    pub c: f64,
    pub epsilon: f64,
    pub n_star: usize,
    pub nu_at_n_star: f64,
    /// Real root of the crossing equation, before flooring.
    pub x_root: f64,
}

/// `log nu_x(c)`.
pub fn log_nu(c: f64, x: f64) -> f64 {
    0.5 * (PI * E / 2.0).ln() + x * (E * c / 4.0).ln() - (x + 0.5) * (x + 0.5).ln() + 1.0 / (6.0 * x)
}

/// `nu_n(c)`, or 0 when it underflows.
pub fn nu(c: f64, n: f64) -> f64 {
    let l = log_nu(c, n);
    if l < -745.0 {
        0.0
    } else {
        l.exp()
    }
}

fn crossing(c: f64, eps: f64, x: f64) -> f64 {
    log_nu(c, x) - eps.ln()
}

fn slope(c: f64, x: f64) -> f64 {
    (E * c / 4.0).ln() - (x + 0.5).ln() - 1.0 - 1.0 / (6.0 * x * x)
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    // f(lo) > 0 >= f(hi)
    while hi - lo > KR_BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn grow_until_negative(start: f64, f: &impl Fn(f64) -> f64) -> Result<f64> {
    let mut hi = 2.0 * start.max(1.0);
    while f(hi) >= 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoRoot("crossing bracket did not close".into()));
        }
    }
    Ok(hi)
}

/// Smallest-mode-count pairing `N_*(c, eps)`.
pub fn select_n(c: f64, eps: f64) -> Result<KrPair> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("bandwidth must be positive, got {c}")));
    }
    if !(1e-16..=1e-1).contains(&eps) {
        return Err(Error::InvalidArgument(format!("tolerance {eps} outside [1e-16, 1e-1]")));
    }
    // The crossing function is concave on [1, inf); start the bracket at its peak.
    let x_lo = if slope(c, 1.0) <= 0.0 {
        1.0
    } else {
        let s = |x| slope(c, x);
        let hi = grow_until_negative(1.0, &s)?;
        bisect(1.0, hi, s)
    };
    let f = |x| crossing(c, eps, x);
    if f(x_lo) < 0.0 {
        return Err(Error::NoRoot(format!("no crossing for c = {c}, eps = {eps}")));
    }
    let hi = grow_until_negative(x_lo, &f)?;
    let x_root = bisect(x_lo, hi, f);
    let n_star = (x_root.floor() as usize).max(1);
    Ok(KrPair { c, epsilon: eps, n_star, nu_at_n_star: nu(c, n_star as f64), x_root })
}

/// `c_*(N) = (pi / 2)(N + 1/2)`.
pub fn transition_bandwidth(n: usize) -> f64 {
    0.5 * PI * (n as f64 + 0.5)
}

/// Bandwidth whose crossing root sits at `N + 1/2`, so that `select_n` returns `N`.
pub fn bandwidth_for(n: usize, eps: f64) -> f64 {
    let x = n as f64 + 0.5;
    let rhs = (x + 0.5) * (x + 0.5).ln() - 1.0 / (6.0 * x) + eps.ln() - 0.5 * (PI * E / 2.0).ln();
    4.0 / E * (rhs / x).exp()
}

/// Bandwidths of the reference pairing table.
pub const TABLE1_BANDWIDTHS: [f64; 8] = [10.0, 20.0, 40.0, 80.0, 100.0, 200.0, 400.0, 800.0];

/// Mode counts expected for [`TABLE1_BANDWIDTHS`] at `eps = 1e-14`.
pub const TABLE1_EXPECTED: [usize; 8] = [24, 34, 50, 79, 94, 163, 299, 571];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_pairs_within_one() {
        for (c, n) in TABLE1_BANDWIDTHS.iter().zip(TABLE1_EXPECTED) {
            let got = select_n(*c, 1e-14).unwrap().n_star;
            assert!(got.abs_diff(n) <= 1, "c = {c}: {got} vs {n}");
        }
        for (c, n) in [(10.0, 24), (40.0, 50), (80.0, 79), (200.0, 163)] {
            assert_eq!(select_n(c, 1e-14).unwrap().n_star, n);
        }
    }

    #[test]
    fn roots_of_the_crossing_equation() {
        // Independent evaluation of the crossing function at the integers around each root.
        let f = |x: f64, c: f64| {
            x * (E * c / 4.0).ln() - (x + 0.5) * (x + 0.5).ln() + 1.0 / (6.0 * x) + (1e14f64).ln()
                + 0.5 * (PI * E / 2.0).ln()
        };
        for c in TABLE1_BANDWIDTHS {
            let p = select_n(c, 1e-14).unwrap();
            let n = p.n_star as f64;
            assert!(f(n, c) >= 0.0 && f(n + 1.0, c) < 0.0);
            assert!(f(p.x_root, c).abs() < 1e-8);
        }
    }

    #[test]
    fn nu_magnitudes() {
        let v = nu(10.0, 24.0);
        assert!((1e-15..=1e-13).contains(&v), "{v}");
        let v = nu(100.0, 94.0);
        assert!((1e-16..=1e-13).contains(&v), "{v}");
    }

    #[test]
    fn nu_decreasing_for_small_bandwidth() {
        let c = 4.0 / E;
        for n in 1..200 {
            assert!(log_nu(c, n as f64 + 1.0) < log_nu(c, n as f64));
        }
    }

    #[test]
    fn looser_tolerance_needs_fewer_modes() {
        assert!(select_n(100.0, 1e-7).unwrap().n_star < 94);
    }

    #[test]
    fn crossing_slack_around_selected_pair() {
        for c in TABLE1_BANDWIDTHS {
            let p = select_n(c, 1e-14).unwrap();
            assert!(nu(c, p.n_star as f64) <= 1e-13);
            assert!(nu(c, p.n_star as f64 - 1.0) >= 1e-15);
        }
    }

    #[test]
    fn transition_values() {
        assert!((transition_bandwidth(1) - 0.75 * PI).abs() < 1e-15);
        assert!((transition_bandwidth(284) - 446.89).abs() < 0.01);
        assert!(120.0 * PI < transition_bandwidth(284));
        assert!(transition_bandwidth(24) > 38.48 && transition_bandwidth(24) < 38.49);
    }

    #[test]
    fn bandwidth_for_inverts_selection() {
        for n in [16, 32, 64, 128, 284] {
            assert_eq!(select_n(bandwidth_for(n, 1e-14), 1e-14).unwrap().n_star, n);
        }
        assert!((bandwidth_for(284, 1e-14) - 120.0 * PI).abs() < 2.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(select_n(0.0, 1e-14).is_err());
        assert!(select_n(10.0, 0.5).is_err());
    }
}
