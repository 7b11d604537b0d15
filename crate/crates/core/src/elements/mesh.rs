use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform partition of `[a, b]` into `m` elements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mesh1D {
    pub a: f64,
    pub b: f64,
    pub m: usize,
}

impl Mesh1D {
    pub fn new(a: f64, b: f64, m: usize) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!("mesh needs a < b, got [{a}, {b}]")));
        }
        if m < 1 {
            return Err(Error::InvalidArgument("mesh needs at least one element".into()));
        }
        Ok(Self { a, b, m })
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.m as f64
    }

    /// `a_i = a + i h`, `i = 0..=m`.
    pub fn breakpoint(&self, i: usize) -> f64 {
        if i == self.m {
            self.b
        } else {
            self.a + i as f64 * self.h()
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        (0..=self.m).map(|i| self.breakpoint(i)).collect()
    }

    /// Midpoint of element `i` (0-based).
    pub fn midpoint(&self, i: usize) -> f64 {
        0.5 * (self.breakpoint(i) + self.breakpoint(i + 1))
    }

    /// Physical point of reference coordinate `y` in element `i`.
    pub fn to_physical(&self, i: usize, y: f64) -> f64 {
        self.midpoint(i) + 0.5 * self.h() * y
    }

    /// Element containing `x` and the reference coordinate there.
    pub fn locate(&self, x: f64) -> (usize, f64) {
        let t = ((x - self.a) / self.h()).floor();
        let i = (t.max(0.0) as usize).min(self.m - 1);
        let y = ((x - self.midpoint(i)) * 2.0 / self.h()).clamp(-1.0, 1.0);
        (i, y)
    }

    /// Checks that every coefficient breakpoint is a mesh breakpoint.
    pub fn check_breaks(&self, breaks: &[f64]) -> Result<()> {
        let tol = 1e-12 * (self.b - self.a);
        for &z in breaks {
            if z <= self.a || z >= self.b {
                continue;
            }
            let r = (z - self.a) / self.h();
            if (r - r.round()).abs() * self.h() > tol {
                return Err(Error::MeshMismatch(format!(
                    "coefficient breakpoint {z} is not a breakpoint of the {}-element mesh",
                    self.m
                )));
            }
        }
        Ok(())
    }

    /// `count` equispaced points covering `[a, b]`.
    pub fn samples(&self, count: usize) -> Vec<f64> {
        (0..count)
            .map(|i| self.a + (self.b - self.a) * i as f64 / (count - 1) as f64)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry() {
        let m = Mesh1D::new(0.0, 1.0, 4).unwrap();
        assert_eq!(m.breakpoints(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(m.to_physical(1, -1.0), 0.25);
        assert_eq!(m.to_physical(1, 1.0), 0.5);
        let (i, y) = m.locate(0.3);
        assert_eq!(i, 1);
        assert!((y + 0.6).abs() < 1e-14);
        assert_eq!(m.locate(1.0).0, 3);
        assert_eq!(m.locate(0.0), (0, -1.0));
    }

    #[test]
    fn rejects_bad_meshes() {
        assert!(Mesh1D::new(1.0, 0.0, 2).is_err());
        assert!(Mesh1D::new(0.0, 1.0, 0).is_err());
        let m = Mesh1D::new(0.0, 1.0, 2).unwrap();
        assert!(m.check_breaks(&[0.5]).is_ok());
        assert!(m.check_breaks(&[0.25]).is_err());
    }
}
