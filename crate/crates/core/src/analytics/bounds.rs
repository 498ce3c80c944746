use serde::{Deserialize, Serialize};

use super::drift::DriftConstant;
use crate::error::{Error, Result};
use crate::geometry::ScalingParams;

/// Predicted hop count with a bracketing pair of constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lower_hops: f64,
    pub point_estimate: f64,
    pub upper_hops: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Default relative half-width of the bracketing constants.
pub const DEFAULT_BRACKET: f64 = 0.1;

/// `1 / (p beta M)` with bounds `c1 / M`, `c2 / M`. When `constants` is
/// `None`, `c1` and `c2` sit 10% either side of `1 / (p beta)`.
pub fn predicted_delay(
    beta: &DriftConstant,
    p: f64,
    scaling: &ScalingParams,
    constants: Option<(f64, f64)>,
) -> Result<BoundReport> {
    if !(beta.value > 0.0) {
        return Err(Error::NoDrift(format!(
            "drift constant {} is not positive",
            beta.value
        )));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::domain(
            "predicted_delay",
            format!("p must lie in (0, 1] (got {p})"),
        ));
    }
    let inv = 1.0 / (p * beta.value);
    let (c1, c2) = constants.unwrap_or((inv * (1.0 - DEFAULT_BRACKET), inv * (1.0 + DEFAULT_BRACKET)));
    if !(c1 > 0.0 && c1 < inv && inv < c2) {
        return Err(Error::domain(
            "predicted_delay",
            format!("constants must satisfy 0 < c1 < {inv} < c2 (got {c1}, {c2})"),
        ));
    }
    let m = scaling.m;
    Ok(BoundReport {
        lower_hops: c1 / m,
        point_estimate: inv / m,
        upper_hops: c2 / m,
        c1,
        c2,
    })
}

/// Almost-sure ceiling on the per-tile hop load:
/// `sqrt(n ln n) / delta + sqrt(6 ln n sqrt(n ln n) / delta)`.
pub fn mu_bound(n: u64, delta: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain("mu_bound", format!("n must be at least 2 (got {n})")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain(
            "mu_bound",
            format!("delta must lie in (0, 1] (got {delta})"),
        ));
    }
    let nf = n as f64;
    let ln = nf.ln();
    let lead = (nf * ln).sqrt() / delta;
    Ok(lead + (6.0 * ln * lead).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::drift::{beta_quadrant_uniform, beta_sector, DriftMethod};
    use std::f64::consts::PI;

    fn exact(value: f64) -> DriftConstant {
        DriftConstant {
            value,
            method: DriftMethod::ClosedForm,
            abs_error_estimate: 0.0,
        }
    }

    #[test]
    fn sector_delay_at_small_scale() {
        let s = ScalingParams::new(1000, 1.717).unwrap();
        let b = beta_sector(-PI / 6.0, PI / 6.0).unwrap();
        let r = predicted_delay(&b, 1.0, &s, None).unwrap();
        assert!((r.point_estimate - 11.01).abs() < 0.05, "{}", r.point_estimate);
        assert!(r.lower_hops <= r.point_estimate && r.point_estimate <= r.upper_hops);
    }

    #[test]
    fn fractional_delay() {
        let s = ScalingParams::with_range(1000, 0.1427).unwrap();
        let r = predicted_delay(&beta_quadrant_uniform(), 0.35, &s, None).unwrap();
        let expected = 1.0 / (0.35 * 16.0 / (3.0 * PI * PI) * 0.1427);
        assert!((r.point_estimate - expected).abs() < 1e-6);
        assert!((r.point_estimate - 37.1).abs() < 0.05);
    }

    #[test]
    fn straight_line_degenerate() {
        let s = ScalingParams::new(5000, 1.3).unwrap();
        let r = predicted_delay(&exact(1.0), 1.0, &s, None).unwrap();
        assert!((r.point_estimate - 1.0 / s.m).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let s = ScalingParams::new(5000, 1.3).unwrap();
        assert!(matches!(predicted_delay(&exact(0.0), 1.0, &s, None), Err(Error::NoDrift(_))));
        assert!(matches!(predicted_delay(&exact(-0.2), 1.0, &s, None), Err(Error::NoDrift(_))));
        assert!(predicted_delay(&exact(0.5), 0.0, &s, None).is_err());
        assert!(predicted_delay(&exact(0.5), 1.0, &s, Some((2.5, 3.0))).is_err());
        let r = predicted_delay(&exact(0.5), 1.0, &s, Some((1.0, 5.0))).unwrap();
        assert!(r.lower_hops < r.point_estimate && r.point_estimate < r.upper_hops);
    }

    #[test]
    fn mu_examples() {
        let mu = mu_bound(10_000, 0.5).unwrap();
        assert!((mu - 790.2).abs() < 0.5, "{mu}");
        let grid = [1_000u64, 10_000, 100_000, 1_000_000];
        let vals: Vec<f64> = grid.iter().map(|&n| mu_bound(n, 0.5).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
        let ratio = |n| mu_bound(n, 0.25).unwrap() / mu_bound(n, 0.5).unwrap();
        assert!((ratio(1_000_000_000_000) - 2.0).abs() < (ratio(1_000) - 2.0).abs());
        assert!((ratio(1_000_000_000_000) - 2.0).abs() < 0.02);
        assert!(mu_bound(1, 0.5).is_err());
        assert!(mu_bound(100, 0.0).is_err());
    }
}
