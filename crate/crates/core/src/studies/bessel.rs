//! Bessel functions of the first kind and the positive zeros of `J_1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `J_n(x)` from `(1 / 2 pi) int_0^{2 pi} cos(n t - x sin t) dt`; the
/// trapezoid rule on the full period converges geometrically once the point
/// count exceeds `|x| + n`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    let points = 2 * (x.abs() as usize + n as usize) + 64;
    let dt = 2.0 * PI / points as f64;
    let s: f64 = (0..points)
        .map(|i| {
            let t = i as f64 * dt;
            (n as f64 * t - x * t.sin()).cos()
        })
        .sum();
    s / points as f64
}

/// First `count` positive zeros of `J_1`, by Newton from `(k + 1/4) pi`.
pub fn j1_zeros(count: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    for k in 1..=count {
        let mut r = (k as f64 + 0.25) * PI;
        let mut done = false;
        for _ in 0..50 {
            let j1 = bessel_j(1, r);
            // J_1' = J_0 - J_1 / r
            let step = j1 / (bessel_j(0, r) - j1 / r);
            r -= step;
            if step.abs() < 1e-15 * r {
                done = true;
                break;
            }
        }
        if !done && bessel_j(1, r).abs() > 1e-13 {
            return Err(Error::NoConvergence(format!("zero {k} of J_1")));
        }
        out.push(r);
    }
    Ok(out)
}
