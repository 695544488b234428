//! Fixed points of the rescaled gap map.
//!
//! A gap state with scaled width `x` maps to `F(x) = 8(x - 2s)/(x + 2s)^2`
//! where `s = sqrt(gamma - 1)`.  Its fixed points are the roots of the cubic
//!
//! ```text
//! x^3 + 4 s x^2 + 4 (gamma - 3) x + 16 s = 0
//! ```
//!
//! For ratios below the critical value [`gamma_star`] the cubic has three real
//! roots, two of them positive; the positive pair collides at `gamma_star` and
//! disappears above it, which is what makes every gap recursion terminate.

use crate::error::{Error, Result};

/// All real roots of the fixed-point cubic for one ratio, in descending
/// order, together with the discriminant that signals how many exist.
///
/// The discriminant is the closed form `-(64/27)(4 gamma^2 - 79 gamma + 83)`;
/// it is negative exactly when three real roots exist.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicRoots {
    pub roots: Vec<f64>,
    pub discriminant: f64,
}

/// Discriminant of the fixed-point cubic: `-(64/27)(4 gamma^2 - 79 gamma + 83)`.
pub fn discriminant(gamma: f64) -> f64 {
    -(64.0 / 27.0) * (4.0 * gamma * gamma - 79.0 * gamma + 83.0)
}

/// The critical ratio `(79 - 17 sqrt(17)) / 8 = 1.11340...` at which the two
/// positive fixed points collide.
pub fn gamma_star() -> f64 {
    (79.0 - 17.0 * 17.0_f64.sqrt()) / 8.0
}

/// Both roots of the discriminant quadratic `4 gamma^2 - 79 gamma + 83 = 0`.
///
/// Only the smaller one lies in the aspect-ratio range of interest; the
/// larger, `(79 + 17 sqrt(17)) / 8 = 18.6...`, is returned for completeness
/// but excluded from the valid ratio domain.
pub fn discriminant_roots() -> (f64, f64) {
    (gamma_star(), (79.0 + 17.0 * 17.0_f64.sqrt()) / 8.0)
}

/// Evaluate the monic fixed-point cubic and its derivative at `x`.
fn cubic_and_derivative(x: f64, a: f64, b: f64, c: f64) -> (f64, f64) {
    let f = ((x + a) * x + b) * x + c;
    let fp = (3.0 * x + 2.0 * a) * x + b;
    (f, fp)
}

/// Two guarded Newton steps on the monic cubic; skipped near critical points
/// so double roots are not disturbed.
fn polish_root(mut x: f64, a: f64, b: f64, c: f64) -> f64 {
    for _ in 0..2 {
        let (f, fp) = cubic_and_derivative(x, a, b, c);
        if fp.abs() <= 1e-9 * (1.0 + x * x) {
            break;
        }
        let next = x - f / fp;
        if !next.is_finite() {
            break;
        }
        x = next;
    }
    x
}

/// All real fixed points of the gap map for the given ratio.
///
/// Below [`gamma_star`] there are three, the two positive ones exceeding the
/// scaled termination width `2 sqrt(gamma - 1)`; above it a single negative
/// root remains.
pub fn fixed_points(gamma: f64) -> Result<CubicRoots> {
    if !(gamma.is_finite() && gamma > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "fixed points require gamma > 1, got {gamma}"
        )));
    }
    let s = (gamma - 1.0).sqrt();
    let a = 4.0 * s;
    let b = 4.0 * (gamma - 3.0);
    let c = 16.0 * s;

    // Depressed form t^3 + p t + q with x = t - a/3.
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let depressed_disc = -4.0 * p * p * p - 27.0 * q * q;
    // Rounding at the double root can push the discriminant a hair negative;
    // treat that band as the three-root case.
    let disc_scale = (4.0 * p * p * p).abs() + 27.0 * q * q;

    let mut roots: Vec<f64> = if depressed_disc >= -1e-12 * disc_scale {
        // Three real roots; p < 0 throughout the domain so the trigonometric
        // form is well defined and stable near the double root.
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt();
        let phi = arg.clamp(-1.0, 1.0).acos();
        (0..3)
            .map(|k| m * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos() - shift)
            .collect()
    } else {
        let root_disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let u = (-q / 2.0 + root_disc).cbrt();
        let v = (-q / 2.0 - root_disc).cbrt();
        vec![u + v - shift]
    };

    for r in &mut roots {
        *r = polish_root(*r, a, b, c);
    }
    roots.sort_by(|x, y| y.partial_cmp(x).unwrap());

    Ok(CubicRoots {
        roots,
        discriminant: discriminant(gamma),
    })
}

/// Residual of a candidate root in the cubic for the given ratio, normalized
/// for the invariant bound `1e-8 * max(1, |x|^3)`.
pub fn cubic_residual(gamma: f64, x: f64) -> f64 {
    let s = (gamma - 1.0).sqrt();
    let (f, _) = cubic_and_derivative(x, 4.0 * s, 4.0 * (gamma - 3.0), 16.0 * s);
    f.abs()
}
