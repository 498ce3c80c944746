//! Plane geometry, range scaling and per-hop progress arithmetic.
//!
//! A hop is described in polar form relative to the bearing toward the
//! destination. The distance actually gained toward the destination is
//! given exactly by the law of cosines and is bracketed by
//!
//! ```text
//! S cos a - S^2 / eps  <=  |OA| - |OB|  <=  S cos a
//! ```
//!
//! whenever the current distance exceeds `S + eps`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in unit-square (or plane) coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    /// Absolute angle of the vector from `self` to `other`.
    pub fn bearing_to(self, other: Point2) -> f64 {
        (other.y - self.y).atan2(other.x - self.x)
    }

    /// The point reached by moving `length` along absolute angle `angle`.
    pub fn offset(self, length: f64, angle: f64) -> Point2 {
        Point2::new(self.x + length * angle.cos(), self.y + length * angle.sin())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// One hop in polar form: radial length and angle measured from the true
/// bearing toward the destination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarStep {
    pub length: f64,
    pub angle: f64,
}

impl PolarStep {
    /// Builds a step, normalizing the angle into `(-pi, pi]`.
    pub fn new(length: f64, angle: f64) -> Self {
        PolarStep {
            length,
            angle: normalize_angle(angle),
        }
    }

    /// Projection of the step onto the destination bearing.
    pub fn projection(&self) -> f64 {
        self.length * self.angle.cos()
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn normalize_angle(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    // rem_euclid maps -pi to pi already; -0.0 is fine as is
    a
}

/// Common transmission range `K * sqrt(ln n / n)`.
pub fn transmission_range(n: u64, k: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(
            "transmission_range",
            format!("n must be at least 2 (got {n})"),
        ));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::domain(
            "transmission_range",
            format!("K must be positive (got {k})"),
        ));
    }
    let n = n as f64;
    Ok(k * (n.ln() / n).sqrt())
}

/// Exact distance gained toward the destination by `step` when the packet
/// is `dist_to_dest` away. Negative for backward steps.
pub fn exact_progress(dist_to_dest: f64, step: PolarStep) -> f64 {
    let s = step.length;
    let (sin_a, cos_a) = step.angle.sin_cos();
    let remaining = (dist_to_dest - s * cos_a).hypot(s * sin_a);
    // (|OA|^2 - |OB|^2) / (|OA| + |OB|) avoids cancellation for short hops
    let denom = dist_to_dest + remaining;
    if denom == 0.0 {
        return 0.0;
    }
    (2.0 * s * dist_to_dest * cos_a - s * s) / denom
}

/// Lower and upper bounds on [`exact_progress`] that hold whenever the
/// distance to the destination exceeds `step.length + eps`.
pub fn progress_bounds(step: PolarStep, eps: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0) {
        return Err(Error::domain(
            "progress_bounds",
            format!("eps must be positive (got {eps})"),
        ));
    }
    let upper = step.projection();
    let lower = upper - step.length * step.length / eps;
    Ok((lower, upper))
}

/// Network scale: node count, range constant and the derived hop range and
/// destination-ball radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    pub n: u64,
    pub k: f64,
    /// Transmission range.
    pub m: f64,
    /// Destination-ball radius.
    pub eps: f64,
    /// Source to destination distance.
    pub d: f64,
}

impl ScalingParams {
    /// Range from the scaling law, unit source distance.
    pub fn new(n: u64, k: f64) -> Result<Self> {
        let m = transmission_range(n, k)?;
        Self::assemble(n, k, m, 1.0)
    }

    /// Range supplied directly (calibration mode); `K` is back-computed.
    pub fn with_range(n: u64, m: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(
                "ScalingParams",
                format!("n must be at least 2 (got {n})"),
            ));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::domain(
                "ScalingParams",
                format!("range must be positive (got {m})"),
            ));
        }
        let unit = transmission_range(n, 1.0)?;
        Self::assemble(n, m / unit, m, 1.0)
    }

    /// Replaces the source to destination distance, re-validating.
    pub fn with_distance(self, d: f64) -> Result<Self> {
        Self::assemble(self.n, self.k, self.m, d)
    }

    fn assemble(n: u64, k: f64, m: f64, d: f64) -> Result<Self> {
        let eps = destination_radius(n, m);
        if !(d.is_finite() && m < d && eps < d) {
            return Err(Error::domain(
                "ScalingParams",
                format!("need 0 < M < d and eps < d (M={m}, eps={eps}, d={d})"),
            ));
        }
        Ok(ScalingParams { n, k, m, eps, d })
    }
}

/// `max(n^(-1/4), 2M)`: the destination ball always spans at least two hops.
pub fn destination_radius(n: u64, m: f64) -> f64 {
    (n as f64).powf(-0.25).max(2.0 * m)
}
