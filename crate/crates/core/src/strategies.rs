//! Next-hop samplers for each forwarding scheme.
//!
//! In the continuum model a strategy yields a [`PolarStep`] drawn from its
//! hop law. In the node model it yields a [`RelativeRegion`], the angular
//! window (relative to the destination bearing) from which a relay node is
//! picked uniformly.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PolarStep;

/// A forwarding scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategySpec {
    /// Greedy geographic forwarding: full range, straight at the destination.
    StraightLine,
    /// Uniform point in the sector `[phi1, phi2]` about the destination bearing.
    Sector { phi1: f64, phi2: f64 },
    /// Uniform point in a quadrant known to contain the destination, with a
    /// uniformly random offset between the local axes and the true bearing.
    QuadrantUniform,
    /// Quadrant routing where the offset is chosen per hop to minimise progress.
    QuadrantAdversarial,
    /// Informed hop (`inner`) with probability `p`, otherwise a random disk hop.
    Fractional { p: f64, inner: Box<StrategySpec> },
    /// Uniform point in the full disk; no drift.
    RandomDisk,
}

/// One sampled hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSample {
    pub step: PolarStep,
    /// Whether the hop used routing information (always true outside the
    /// fractional mixture).
    pub informed: bool,
}

/// Angular window relative to the destination bearing.
///
/// Arcs are half-open `[lo, hi)`, measured counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeRegion {
    Disk,
    Arc { lo: f64, hi: f64 },
    /// `[lo, hi)` together with its mirror image `[-hi, -lo)`.
    TwinArc { lo: f64, hi: f64 },
}

/// A drawn relay region plus the informed flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionDraw {
    pub region: RelativeRegion,
    pub informed: bool,
}

impl StrategySpec {
    pub fn sector(phi1: f64, phi2: f64) -> Result<Self> {
        let spec = StrategySpec::Sector { phi1, phi2 };
        spec.validate()?;
        Ok(spec)
    }

    /// Sector given in degrees.
    pub fn sector_degrees(lo: f64, hi: f64) -> Result<Self> {
        Self::sector(lo.to_radians(), hi.to_radians())
    }

    /// Symmetric 60 degree sector.
    pub fn unbiased_sector() -> Self {
        StrategySpec::Sector {
            phi1: -PI / 6.0,
            phi2: PI / 6.0,
        }
    }

    /// Default biased sector, lying entirely on one side of the bearing.
    pub fn biased_sector() -> Self {
        StrategySpec::Sector {
            phi1: 0.0,
            phi2: FRAC_PI_2,
        }
    }

    pub fn fractional(p: f64, inner: StrategySpec) -> Result<Self> {
        let spec = StrategySpec::Fractional {
            p,
            inner: Box::new(inner),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StrategySpec::Sector { phi1, phi2 } => {
                validate_sector_angles(*phi1, *phi2)?;
                // E[L cos a] has the sign of sin(phi2) - sin(phi1)
                if phi2.sin() - phi1.sin() <= 1e-12 {
                    return Err(Error::domain(
                        "sector strategy",
                        format!(
                            "sector [{phi1}, {phi2}] has no positive drift toward the destination"
                        ),
                    ));
                }
                Ok(())
            }
            StrategySpec::Fractional { p, inner } => {
                if !(*p > 0.0 && *p < 1.0) {
                    return Err(Error::domain(
                        "fractional strategy",
                        format!("p must lie in (0, 1) (got {p})"),
                    ));
                }
                if matches!(**inner, StrategySpec::Fractional { .. }) {
                    return Err(Error::domain(
                        "fractional strategy",
                        "inner strategy must not itself be fractional",
                    ));
                }
                inner.validate()
            }
            _ => Ok(()),
        }
    }

    /// Short stable name, used for seed labels and file names.
    pub fn label(&self) -> String {
        match self {
            StrategySpec::StraightLine => "straight_line".into(),
            StrategySpec::Sector { phi1, phi2 } => format!(
                "sector[{:.1},{:.1}]",
                phi1.to_degrees(),
                phi2.to_degrees()
            ),
            StrategySpec::QuadrantUniform => "quadrant_uniform".into(),
            StrategySpec::QuadrantAdversarial => "quadrant_adversarial".into(),
            StrategySpec::Fractional { p, inner } => format!("fractional[{p}]({})", inner.label()),
            StrategySpec::RandomDisk => "random_disk".into(),
        }
    }

    /// Draws one continuum hop for range `m`.
    pub fn sample<R: Rng + ?Sized>(&self, m: f64, rng: &mut R) -> Result<StepSample> {
        match self {
            StrategySpec::StraightLine => Ok(sample_straight_line(m)),
            StrategySpec::Sector { phi1, phi2 } => sample_sector(*phi1, *phi2, m, rng),
            StrategySpec::QuadrantUniform => Ok(sample_quadrant_uniform(m, rng)),
            StrategySpec::QuadrantAdversarial => Ok(sample_quadrant_adversarial(m, rng)),
            StrategySpec::Fractional { p, inner } => sample_fractional(*p, inner, m, rng),
            StrategySpec::RandomDisk => Ok(sample_random_disk(m, rng)),
        }
    }

    /// Draws the relay region for one node-level hop. Straight-line routing
    /// has no random region and returns the full disk.
    pub fn draw_region<R: Rng + ?Sized>(&self, rng: &mut R) -> RegionDraw {
        let informed = |region| RegionDraw {
            region,
            informed: true,
        };
        match self {
            StrategySpec::StraightLine => informed(RelativeRegion::Disk),
            StrategySpec::RandomDisk => RegionDraw {
                region: RelativeRegion::Disk,
                informed: false,
            },
            StrategySpec::Sector { phi1, phi2 } => informed(RelativeRegion::Arc {
                lo: *phi1,
                hi: *phi2,
            }),
            StrategySpec::QuadrantUniform => {
                let kappa = FRAC_PI_2 * rng.random::<f64>();
                informed(RelativeRegion::Arc {
                    lo: kappa - FRAC_PI_2,
                    hi: kappa,
                })
            }
            // The adversary puts the destination on whichever quadrant
            // boundary is farther from the relay, so relays land in the
            // outer octants on either side of the bearing.
            StrategySpec::QuadrantAdversarial => informed(RelativeRegion::TwinArc {
                lo: FRAC_PI_4,
                hi: FRAC_PI_2,
            }),
            StrategySpec::Fractional { p, inner } => {
                if rng.random::<f64>() < *p {
                    inner.draw_region(rng)
                } else {
                    RegionDraw {
                        region: RelativeRegion::Disk,
                        informed: false,
                    }
                }
            }
        }
    }

    /// True when the region draw is random, so redrawing may help after a
    /// dead end.
    pub fn has_random_region(&self) -> bool {
        matches!(
            self,
            StrategySpec::QuadrantUniform | StrategySpec::Fractional { .. }
        )
    }
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn validate_sector_angles(phi1: f64, phi2: f64) -> Result<()> {
    if !(phi1.is_finite() && phi2.is_finite() && -PI <= phi1 && phi1 < phi2 && phi2 <= PI) {
        return Err(Error::domain(
            "sector strategy",
            format!("need -pi <= phi1 < phi2 <= pi (got [{phi1}, {phi2}])"),
        ));
    }
    Ok(())
}

/// Radius of a point uniform over the area of a disk of radius `m`.
fn area_uniform_radius<R: Rng + ?Sized>(m: f64, rng: &mut R) -> f64 {
    m * rng.random::<f64>().sqrt()
}

pub fn sample_straight_line(m: f64) -> StepSample {
    StepSample {
        step: PolarStep::new(m, 0.0),
        informed: true,
    }
}

pub fn sample_sector<R: Rng + ?Sized>(
    phi1: f64,
    phi2: f64,
    m: f64,
    rng: &mut R,
) -> Result<StepSample> {
    validate_sector_angles(phi1, phi2)?;
    let length = area_uniform_radius(m, rng);
    let angle = phi1 + (phi2 - phi1) * rng.random::<f64>();
    Ok(StepSample {
        step: PolarStep::new(length, angle),
        informed: true,
    })
}

pub fn sample_quadrant_uniform<R: Rng + ?Sized>(m: f64, rng: &mut R) -> StepSample {
    let kappa = FRAC_PI_2 * rng.random::<f64>();
    let length = area_uniform_radius(m, rng);
    let angle = kappa - FRAC_PI_2 * rng.random::<f64>();
    StepSample {
        step: PolarStep::new(length, angle),
        informed: true,
    }
}

/// Quadrant hop whose destination bearing is put on the worse of the two
/// quadrant boundaries, so the projection credit is `L min(cos g, sin g)`.
pub fn sample_quadrant_adversarial<R: Rng + ?Sized>(m: f64, rng: &mut R) -> StepSample {
    let length = area_uniform_radius(m, rng);
    let gamma = FRAC_PI_2 * rng.random::<f64>();
    StepSample {
        step: PolarStep::new(length, adversarial_angle(gamma)),
        informed: true,
    }
}

/// Angle to the destination once the adversary orients the quadrant for a
/// relay at quadrant angle `gamma` in `[0, pi/2]`.
pub fn adversarial_angle(gamma: f64) -> f64 {
    if gamma >= FRAC_PI_4 {
        gamma
    } else {
        -(FRAC_PI_2 - gamma)
    }
}

pub fn sample_random_disk<R: Rng + ?Sized>(m: f64, rng: &mut R) -> StepSample {
    let length = area_uniform_radius(m, rng);
    let angle = PI - 2.0 * PI * rng.random::<f64>();
    StepSample {
        step: PolarStep::new(length, angle),
        informed: false,
    }
}

pub fn sample_fractional<R: Rng + ?Sized>(
    p: f64,
    inner: &StrategySpec,
    m: f64,
    rng: &mut R,
) -> Result<StepSample> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(
            "sample_fractional",
            format!("p must lie in (0, 1) (got {p})"),
        ));
    }
    if matches!(inner, StrategySpec::Fractional { .. }) {
        return Err(Error::domain(
            "sample_fractional",
            "inner strategy must not itself be fractional",
        ));
    }
    if rng.random::<f64>() < p {
        let mut s = inner.sample(m, rng)?;
        s.informed = true;
        Ok(s)
    } else {
        Ok(sample_random_disk(m, rng))
    }
}
