//! Closed test sectors and the open angular components of the background
//! resolvent set.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub(crate) const TAU: f64 = 2.0 * PI;

/// Wraps an angle into `[0, 2π)`.
pub(crate) fn wrap_angle(a: f64) -> f64 {
    let mut r = a % TAU;
    if r < 0.0 {
        r += TAU;
    }
    if r >= TAU {
        r = 0.0;
    }
    r
}

/// Minimal absolute difference of two angles modulo 2π.
pub(crate) fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (wrap_angle(a) - wrap_angle(b)).abs();
    d.min(TAU - d)
}

/// The closed sector `{r e^{iφ} : r ≥ 0, |φ − φ₀| ≤ a}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector {
    bisector: f64,
    half_angle: f64,
}

impl Sector {
    /// Angles in radians; the bisector is normalized into `[0, 2π)` and the
    /// half-angle must lie in `[0, π)`.
    pub fn new(bisector_angle: f64, half_angle: f64) -> Result<Self> {
        if !bisector_angle.is_finite() || !half_angle.is_finite() {
            return Err(Error::InvalidSector {
                reason: "angles must be finite".into(),
            });
        }
        if !(0.0..PI).contains(&half_angle) {
            return Err(Error::InvalidSector {
                reason: format!("half-angle {half_angle} outside [0, π)"),
            });
        }
        Ok(Self {
            bisector: wrap_angle(bisector_angle),
            half_angle,
        })
    }

    pub fn bisector_angle(&self) -> f64 {
        self.bisector
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    /// Closed membership; the origin belongs to every sector.
    pub fn contains(&self, z: Complex64) -> bool {
        if z.norm() == 0.0 {
            return true;
        }
        angular_distance(z.arg(), self.bisector) <= self.half_angle
    }

    /// Whether the closed ray `direction · [0, ∞)` meets the sector anywhere
    /// away from the origin.
    pub fn contains_ray(&self, direction: Complex64) -> bool {
        angular_distance(direction.arg(), self.bisector) <= self.half_angle
    }

    /// Same bisector, different opening.
    pub fn with_half_angle(&self, half_angle: f64) -> Result<Self> {
        Self::new(self.bisector, half_angle)
    }
}

/// An open angular sector `{r e^{iφ} : r > 0, φ_lo < φ < φ_hi}` with
/// `φ_hi ≤ φ_lo + 2π`. The upper angle may exceed 2π so that the wrapping
/// component between the last and first background ray keeps its natural
/// bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenSector {
    lo: f64,
    span: f64,
}

impl OpenSector {
    pub fn new(angle_low: f64, angle_high: f64) -> Result<Self> {
        if !angle_low.is_finite() || !angle_high.is_finite() {
            return Err(Error::InvalidSector {
                reason: "angles must be finite".into(),
            });
        }
        let span = angle_high - angle_low;
        if span <= 0.0 || span > TAU + 1e-12 {
            return Err(Error::InvalidSector {
                reason: format!("span {span} outside (0, 2π]"),
            });
        }
        Ok(Self {
            lo: wrap_angle(angle_low),
            span: span.min(TAU),
        })
    }

    pub fn angle_low(&self) -> f64 {
        self.lo
    }

    pub fn angle_high(&self) -> f64 {
        self.lo + self.span
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn bisector(&self) -> f64 {
        wrap_angle(self.lo + 0.5 * self.span)
    }

    /// Strict membership: the bounding rays and the origin are excluded.
    pub fn contains(&self, z: Complex64) -> bool {
        if z.norm() == 0.0 {
            return false;
        }
        let a = wrap_angle(z.arg() - self.lo);
        a > 0.0 && a < self.span
    }

    /// Deterministic sample points strictly inside the sector, at angles
    /// spread over the opening and radii cycling a small ladder.
    pub fn interior_points(&self, count: usize) -> Vec<Complex64> {
        const RADII: [f64; 5] = [1.0, 0.5, 2.0, 0.8, 1.6];
        (0..count)
            .map(|i| {
                let frac = (i as f64 + 1.0) / (count as f64 + 1.0);
                let angle = self.lo + self.span * frac;
                Complex64::from_polar(RADII[i % RADII.len()], angle)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_membership_closed() {
        let s = Sector::new(PI, PI / 4.0).unwrap();
        assert!(s.contains(Complex64::new(-1.0, 0.0)));
        assert!(s.contains(Complex64::new(0.0, 0.0)));
        // boundary ray belongs to the closed sector
        assert!(s.contains(Complex64::from_polar(2.0, PI + PI / 4.0)));
        assert!(!s.contains(Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn open_sector_strictness_and_wrap() {
        let s = OpenSector::new(1.5 * PI, 2.5 * PI).unwrap();
        assert!(s.contains(Complex64::from_polar(1.0, 1.75 * PI)));
        assert!(s.contains(Complex64::from_polar(1.0, 0.25 * PI)));
        assert!(!s.contains(Complex64::from_polar(1.0, 1.5 * PI)));
        assert!(!s.contains(Complex64::from_polar(1.0, 0.5 * PI)));
        assert!(!s.contains(Complex64::new(0.0, 0.0)));
        assert!((s.bisector() - 0.0).abs() < 1e-15);
    }

    #[test]
    fn interior_points_stay_inside() {
        let s = OpenSector::new(0.0, TAU).unwrap();
        for p in s.interior_points(25) {
            assert!(s.contains(p));
        }
    }

    #[test]
    fn rejects_bad_angles() {
        assert!(Sector::new(0.0, PI).is_err());
        assert!(Sector::new(f64::NAN, 0.1).is_err());
        assert!(OpenSector::new(1.0, 1.0).is_err());
        assert!(OpenSector::new(0.0, 7.0).is_err());
    }
}
