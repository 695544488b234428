//! Closed-form aspect-ratio thresholds for regular polygons.
//!
//! Two ratios control what a partition of a regular k-gon can achieve:
//! [`gamma_one`], the ratio of the whole polygon (circumradius over inradius),
//! below which more than one piece is forced; and [`gamma_theta`], the
//! smallest ratio any piece containing a convex vertex of interior angle
//! theta can have.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dimensionless aspect-ratio bound, always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RatioBound {
    pub value: f64,
}

impl RatioBound {
    pub fn new(value: f64) -> Self {
        assert!(value.is_finite() && value >= 1.0, "aspect ratio bound must be at least 1");
        RatioBound { value }
    }
}

/// Interior angle of the regular k-gon, `(k - 2) pi / k`.
pub fn interior_angle(k: u32) -> f64 {
    assert!(k >= 3, "polygon needs at least 3 vertices");
    (k as f64 - 2.0) * std::f64::consts::PI / k as f64
}

/// Aspect ratio of the regular k-gon itself: `1 / cos(pi / k)`.
///
/// At or above this ratio the polygon is a single admissible piece.
pub fn gamma_one(k: u32) -> Result<RatioBound> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!(
            "gamma_one requires k >= 3, got {k}"
        )));
    }
    Ok(RatioBound::new(1.0 / (std::f64::consts::PI / k as f64).cos()))
}

/// Lower bound forced by a convex vertex of interior angle `theta`:
/// `(1 + csc(theta / 2)) / 2`.
///
/// Any piece containing such a vertex has at least this aspect ratio.
pub fn gamma_theta(theta: f64) -> Result<RatioBound> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(Error::InvalidArgument(format!(
            "gamma_theta requires an angle in (0, pi), got {theta}"
        )));
    }
    Ok(RatioBound::new(0.5 * (1.0 + 1.0 / (theta / 2.0).sin())))
}
