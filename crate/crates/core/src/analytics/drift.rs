//! Drift constants: the expected per-hop projection onto the destination
//! bearing, in units of the transmission range.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use super::quadrature::{integrate_2d, Estimate};
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;
use crate::strategies::StrategySpec;

/// Absolute tolerance used for every drift quadrature.
pub const QUADRATURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftMethod {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftConstant {
    pub value: f64,
    pub method: DriftMethod,
    pub abs_error_estimate: f64,
}

impl DriftConstant {
    fn exact(value: f64) -> Self {
        DriftConstant {
            value,
            method: DriftMethod::ClosedForm,
            abs_error_estimate: 0.0,
        }
    }

    fn from_quadrature(e: Estimate) -> Self {
        DriftConstant {
            value: e.value,
            method: DriftMethod::Quadrature,
            abs_error_estimate: e.abs_error,
        }
    }

    /// True if the two estimates agree within three combined error bars,
    /// with a floor of `floor` for exact values.
    pub fn agrees_with(&self, other: &DriftConstant, floor: f64) -> bool {
        let combined = (self.abs_error_estimate.powi(2) + other.abs_error_estimate.powi(2)).sqrt();
        (self.value - other.value).abs() <= (3.0 * combined).max(floor)
    }
}

/// `(2/3) (sin phi2 - sin phi1) / (phi2 - phi1)`, cross-checked against 2-D
/// quadrature of the uniform-area sector density.
pub fn beta_sector(phi1: f64, phi2: f64) -> Result<DriftConstant> {
    let closed = beta_sector_closed_form(phi1, phi2)?;
    let quad = beta_sector_quadrature(phi1, phi2)?;
    let gap = (closed.value - quad.value).abs();
    if gap > 1e-7 {
        return Err(Error::domain(
            "beta_sector",
            format!("closed form and quadrature disagree by {gap}"),
        ));
    }
    Ok(DriftConstant {
        abs_error_estimate: gap.max(quad.abs_error_estimate),
        ..closed
    })
}

fn check_sector(phi1: f64, phi2: f64) -> Result<()> {
    if !(phi1.is_finite() && phi2.is_finite() && -PI <= phi1 && phi1 < phi2 && phi2 <= PI) {
        return Err(Error::domain(
            "beta_sector",
            format!("need -pi <= phi1 < phi2 <= pi with nonzero width (got [{phi1}, {phi2}])"),
        ));
    }
    Ok(())
}

pub fn beta_sector_closed_form(phi1: f64, phi2: f64) -> Result<DriftConstant> {
    check_sector(phi1, phi2)?;
    Ok(DriftConstant::exact(
        (2.0 / 3.0) * (phi2.sin() - phi1.sin()) / (phi2 - phi1),
    ))
}

pub fn beta_sector_quadrature(phi1: f64, phi2: f64) -> Result<DriftConstant> {
    check_sector(phi1, phi2)?;
    let width = phi2 - phi1;
    let e = integrate_2d(
        |l, a| l * a.cos() * 2.0 * l / width,
        (0.0, 1.0),
        &[],
        (phi1, phi2),
        &[0.0],
        QUADRATURE_TOL,
    );
    Ok(DriftConstant::from_quadrature(e))
}

/// Joint density of (length, angle) for uniform-offset quadrant routing on
/// the unit disk: a uniform offset, then a uniform-area point in the
/// quadrant, gives angular weight `pi/2 - |a|`.
pub fn quadrant_uniform_density(l: f64, a: f64) -> f64 {
    if !(0.0..=1.0).contains(&l) || a.abs() >= FRAC_PI_2 {
        return 0.0;
    }
    (8.0 / (PI * PI)) * l * (FRAC_PI_2 - a.abs())
}

/// `16 / (3 pi^2)` by quadrature.
pub fn beta_quadrant_uniform() -> DriftConstant {
    let e = integrate_2d(
        |l, a| l * a.cos() * quadrant_uniform_density(l, a),
        (0.0, 1.0),
        &[],
        (-FRAC_PI_2, FRAC_PI_2),
        &[0.0],
        QUADRATURE_TOL,
    );
    DriftConstant::from_quadrature(e)
}

/// `E[L min(cos g, sin g)]` with `g` the quadrant angle of a uniform-area
/// point, by quadrature.
pub fn beta_quadrant_adversarial() -> DriftConstant {
    let e = integrate_2d(
        |l, g| l * g.cos().min(g.sin()) * 2.0 * l / FRAC_PI_2,
        (0.0, 1.0),
        &[],
        (0.0, FRAC_PI_2),
        &[FRAC_PI_4],
        QUADRATURE_TOL,
    );
    DriftConstant::from_quadrature(e)
}

/// Closed-form drift of any strategy (zero for the random disk).
pub fn closed_form_drift(spec: &StrategySpec) -> f64 {
    match spec {
        StrategySpec::StraightLine => 1.0,
        StrategySpec::Sector { phi1, phi2 } => (2.0 / 3.0) * (phi2.sin() - phi1.sin()) / (phi2 - phi1),
        StrategySpec::QuadrantUniform => 16.0 / (3.0 * PI * PI),
        StrategySpec::QuadrantAdversarial => (8.0 / (3.0 * PI)) * (1.0 - 0.5 * 2f64.sqrt()),
        StrategySpec::Fractional { p, inner } => p * closed_form_drift(inner),
        StrategySpec::RandomDisk => 0.0,
    }
}

/// Monte Carlo drift from the strategy's own sampler. The error estimate is
/// one standard error.
pub fn monte_carlo_drift(spec: &StrategySpec, draws: usize, seed: u64) -> Result<DriftConstant> {
    if draws < 2 {
        return Err(Error::domain("monte_carlo_drift", "need at least two draws"));
    }
    spec.validate()?;
    let mut rng = rng_from_seed(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..draws {
        let x = spec.sample(1.0, &mut rng)?.step.projection();
        sum += x;
        sum_sq += x * x;
    }
    let n = draws as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(DriftConstant {
        value: mean,
        method: DriftMethod::MonteCarlo,
        abs_error_estimate: (var / n).sqrt(),
    })
}
