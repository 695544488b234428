//! Floating-point primitives for disks: tangency tests, circle intersection,
//! and the outcircle spanned over a covering gap.
//!
//! All disks are closed sets; boundary points count as contained.  A single
//! [`Tolerance`] carries the relative and absolute slack used by every
//! comparison, and tangency within that band is classified as exact tangency
//! so downstream constructions see the configurations they were built for.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        assert!(x.is_finite() && y.is_finite(), "point coordinates must be finite");
        Point2 { x, y }
    }

    pub fn distance(&self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A closed disk with strictly positive radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point2, radius: f64) -> Self {
        assert!(radius.is_finite() && radius > 0.0, "disk radius must be strictly positive");
        Disk { center, radius }
    }

    /// Closed-disk membership with tolerance slack on the radius.
    pub fn contains(&self, p: Point2, tol: Tolerance) -> bool {
        self.center.distance(p) <= self.radius + tol.band(self.radius)
    }
}

/// Comparison slack: `band(scale) = max(abs, rel * |scale|)`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        assert!(rel > 0.0 && abs > 0.0, "tolerances must be positive");
        Tolerance { rel, abs }
    }

    /// Slack appropriate for quantities of the given magnitude.
    pub fn band(&self, scale: f64) -> f64 {
        self.abs.max(self.rel * scale.abs())
    }
}

/// An indisk nested inside its outcircle, with the inflation ratio tying them.
///
/// The outcircle radius is `gamma` times the indisk radius and the indisk lies
/// inside the outcircle; both are checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverPair {
    pub indisk: Disk,
    pub outcircle: Disk,
    pub gamma: f64,
}

impl CoverPair {
    pub fn new(indisk: Disk, outcircle: Disk, gamma: f64) -> Self {
        let tol = Tolerance::default();
        assert!(gamma >= 1.0, "cover pair ratio must be at least 1");
        assert!(
            (outcircle.radius - gamma * indisk.radius).abs() <= tol.band(outcircle.radius),
            "outcircle radius must equal gamma times indisk radius"
        );
        let gap = outcircle.radius - indisk.radius;
        assert!(
            indisk.center.distance(outcircle.center) <= gap + tol.band(outcircle.radius),
            "indisk must lie inside its outcircle"
        );
        CoverPair { indisk, outcircle, gamma }
    }
}

/// Intersection points of two bounding circles, smaller y first, then smaller x.
///
/// Tangent circles (external or internal, within the tolerance band) return
/// exactly one point; disjoint or nested circles return none.
pub fn circle_circle_intersection(a: &Disk, b: &Disk, tol: Tolerance) -> Result<Vec<Point2>> {
    let d = a.center.distance(b.center);
    let scale = a.radius.max(b.radius);
    let band = tol.band(scale);

    if d <= band && (a.radius - b.radius).abs() <= band {
        return Err(Error::Degenerate("degenerate: coincident circles".into()));
    }
    if d > a.radius + b.radius + band || d < (a.radius - b.radius).abs() - band {
        return Ok(Vec::new());
    }

    // Distance from a.center to the radical line, along the center axis.
    let along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    let ux = (b.center.x - a.center.x) / d;
    let uy = (b.center.y - a.center.y) / d;
    let foot = Point2::new(a.center.x + ux * along, a.center.y + uy * along);

    let tangent = (d - (a.radius + b.radius)).abs() <= band
        || (d - (a.radius - b.radius).abs()).abs() <= band;
    if tangent {
        return Ok(vec![foot]);
    }

    let half_sq = a.radius * a.radius - along * along;
    let half = half_sq.max(0.0).sqrt();
    let p1 = Point2::new(foot.x - uy * half, foot.y + ux * half);
    let p2 = Point2::new(foot.x + uy * half, foot.y - ux * half);
    let mut pts = vec![p1, p2];
    pts.sort_by(|p, q| {
        p.y.partial_cmp(&q.y)
            .unwrap()
            .then(p.x.partial_cmp(&q.x).unwrap())
    });
    Ok(pts)
}

/// True iff the two disks touch from outside: center distance equals the sum
/// of radii within the tolerance band.
pub fn is_externally_tangent(a: &Disk, b: &Disk, tol: Tolerance) -> bool {
    let d = a.center.distance(b.center);
    let sum = a.radius + b.radius;
    (d - sum).abs() <= tol.band(sum)
}

/// Half-width of the x-axis chord cut by the outcircle of an axis-tangent
/// indisk of the given radius: `2 r sqrt(gamma - 1)`.
pub fn gap_chord_half_width(radius: f64, gamma: f64) -> f64 {
    2.0 * radius * (gamma - 1.0).max(0.0).sqrt()
}

/// Outcircle of an indisk tangent to the x-axis from above: same topmost
/// point, radius inflated by `gamma`, so the center drops to `2r - gamma r`.
pub fn gap_outcircle(indisk: &Disk, gamma: f64) -> Result<Disk> {
    if gamma < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "gap outcircle requires gamma >= 1, got {gamma}"
        )));
    }
    let tol = Tolerance::default();
    assert!(
        (indisk.center.y - indisk.radius).abs() <= tol.band(indisk.radius),
        "indisk must be tangent to the x-axis from above"
    );
    let r = indisk.radius;
    Ok(Disk::new(
        Point2::new(indisk.center.x, 2.0 * r - gamma * r),
        gamma * r,
    ))
}

/// Closed-disk membership; see [`Disk::contains`].
pub fn disk_contains(d: &Disk, p: Point2, tol: Tolerance) -> bool {
    d.contains(p, tol)
}
