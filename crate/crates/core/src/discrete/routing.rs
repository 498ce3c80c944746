//! Hop-by-hop relay selection among actual nodes.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::{generate_field_with_anchors, Neighbor, NodeField, QueryRegion};
use crate::continuum::default_hop_budget;
use crate::error::{Error, Result};
use crate::geometry::{Point2, ScalingParams};
use crate::histogram::DelayHistogram;
use crate::output::fmt_float;
use crate::seed::{rng_from_seed, SeedStream, SimRng};
use crate::strategies::StrategySpec;

/// Default source and destination of the node-level experiments.
pub const DEFAULT_SRC: Point2 = Point2::new(0.0, 0.0);
pub const DEFAULT_DST: Point2 = Point2::new(0.7, 0.7);

/// What to do when the drawn relay region holds no node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeadEndPolicy {
    /// Redraws of the strategy's random offset or coin before giving up on
    /// the region. Only used by strategies with a random region.
    pub max_redraws: u32,
    /// Then pick uniformly in the full disk instead of failing.
    pub fallback_disk: bool,
}

impl Default for DeadEndPolicy {
    fn default() -> Self {
        DeadEndPolicy {
            max_redraws: 8,
            fallback_disk: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RouteOptions {
    pub policy: DeadEndPolicy,
    /// Defaults to [`default_hop_budget`] for the field's range.
    pub hop_budget: Option<u64>,
    /// Only relays that cut the distance to the destination by at least
    /// this much are admissible (the final direct hop is exempt).
    pub min_progress: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PathResult {
    /// Node indices, source first and destination last.
    pub hops: Vec<usize>,
    pub hop_count: u64,
    /// Region draws that contained no admissible node.
    pub dead_end_events: u64,
    /// Hops taken from the full disk after all redraws came up empty.
    pub fallback_events: u64,
}

impl PathResult {
    fn start(src: usize) -> Self {
        PathResult {
            hops: vec![src],
            ..Default::default()
        }
    }

    fn push(&mut self, node: usize) {
        self.hops.push(node);
        self.hop_count += 1;
    }

    /// Header `hop,node,x,y`.
    pub fn to_csv(&self, field: &NodeField) -> String {
        let mut out = String::from("hop,node,x,y\n");
        for (i, &node) in self.hops.iter().enumerate() {
            let p = field.position(node);
            out.push_str(&format!("{i},{node},{},{}\n", fmt_float(p.x), fmt_float(p.y)));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    BudgetExhausted,
    /// Greedy forwarding found no neighbor closer to the destination.
    DeadEnd,
    /// No admissible neighbor at all, even in the full disk.
    Isolated,
}

/// A route that did not reach its destination, with the path so far.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteFailure {
    pub kind: FailureKind,
    pub partial: PathResult,
}

impl fmt::Display for RouteFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = self.partial.hops.last().copied().unwrap_or_default();
        write!(f, "route failed ({:?}) at node {at} after {} hops", self.kind, self.partial.hop_count)
    }
}

impl std::error::Error for RouteFailure {}

impl From<RouteFailure> for Error {
    fn from(e: RouteFailure) -> Self {
        Error::Routing(e.to_string())
    }
}

/// Routes between the nodes nearest to `src` and `dst`.
pub fn route_discrete(
    field: &NodeField,
    spec: &StrategySpec,
    src: Point2,
    dst: Point2,
    policy: DeadEndPolicy,
    seed: u64,
) -> Result<std::result::Result<PathResult, RouteFailure>> {
    spec.validate()?;
    for p in [src, dst] {
        if !(p.is_finite() && (0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y)) {
            return Err(Error::domain("route_discrete", format!("endpoint {p:?} outside the unit square")));
        }
    }
    let (Some(s), Some(d)) = (field.nearest(src), field.nearest(dst)) else {
        return Err(Error::domain("route_discrete", "empty field"));
    };
    let options = RouteOptions {
        policy,
        ..Default::default()
    };
    Ok(route_between(field, spec, s, d, &options, &mut rng_from_seed(seed)))
}

/// Routes from node `src` to node `dst`. The caller validates `spec`.
pub fn route_between(
    field: &NodeField,
    spec: &StrategySpec,
    src: usize,
    dst: usize,
    options: &RouteOptions,
    rng: &mut SimRng,
) -> std::result::Result<PathResult, RouteFailure> {
    let m = field.range();
    let budget = options
        .hop_budget
        .unwrap_or_else(|| default_hop_budget(spec, m));
    let target = field.position(dst);
    let mut path = PathResult::start(src);
    let mut cur = src;
    let fail = |kind, partial| Err(RouteFailure { kind, partial });

    while cur != dst {
        let here = field.position(cur);
        let r = field.distance(here, target);
        if r < m {
            path.push(dst);
            break;
        }
        if path.hop_count >= budget {
            return fail(FailureKind::BudgetExhausted, path);
        }
        let (dx, dy) = field.displacement(here, target);
        let bearing = dy.atan2(dx);
        let mut disk = field.neighbors_within(here, m, &QueryRegion::Disk);
        if let Some(min) = options.min_progress {
            disk.retain(|n| r - distance_after(field, n, target) >= min);
        }

        let next = match spec {
            StrategySpec::StraightLine => {
                let best = disk
                    .iter()
                    .map(|n| (n.index, distance_after(field, n, target)))
                    .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
                match best {
                    Some((i, after)) if after < r => i,
                    _ => {
                        path.dead_end_events += 1;
                        return fail(FailureKind::DeadEnd, path);
                    }
                }
            }
            _ => {
                let draws = if spec.has_random_region() {
                    1 + options.policy.max_redraws
                } else {
                    1
                };
                let mut chosen = None;
                for _ in 0..draws {
                    let region = QueryRegion::from_relative(spec.draw_region(rng).region, bearing);
                    let cands: Vec<&Neighbor> =
                        disk.iter().filter(|n| region.contains_angle(n.angle())).collect();
                    if cands.is_empty() {
                        path.dead_end_events += 1;
                        continue;
                    }
                    chosen = Some(cands[rng.random_range(0..cands.len())].index);
                    break;
                }
                match chosen {
                    Some(i) => i,
                    None if options.policy.fallback_disk && !disk.is_empty() => {
                        path.fallback_events += 1;
                        disk[rng.random_range(0..disk.len())].index
                    }
                    None => return fail(FailureKind::Isolated, path),
                }
            }
        };
        path.push(next);
        cur = next;
    }
    Ok(path)
}

fn distance_after(field: &NodeField, n: &Neighbor, target: Point2) -> f64 {
    field.distance(field.position(n.index), target)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteOptions {
    pub src: Point2,
    pub dst: Point2,
    pub policy: DeadEndPolicy,
    /// Draw a new node field for every trial instead of reusing one.
    pub resample_field: bool,
    pub hop_budget: Option<u64>,
}

impl Default for DiscreteOptions {
    fn default() -> Self {
        DiscreteOptions {
            src: DEFAULT_SRC,
            dst: DEFAULT_DST,
            policy: DeadEndPolicy::default(),
            resample_field: true,
            hop_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteSummary {
    pub histogram: DelayHistogram,
    pub dead_end_events: u64,
    pub fallback_events: u64,
    pub budget_exhausted: u64,
    pub aborted: u64,
}

/// Runs `trials` routes. Source and destination are pinned as nodes 0 and 1
/// of every field, so the node count stays `n`.
pub fn discrete_ensemble_with(
    spec: &StrategySpec,
    scaling: &ScalingParams,
    trials: usize,
    stream: &SeedStream,
    options: &DiscreteOptions,
) -> Result<DiscreteSummary> {
    if trials == 0 {
        return Err(Error::domain("discrete_ensemble", "trials must be at least 1"));
    }
    spec.validate()?;
    let anchors = [options.src, options.dst];
    let fields = stream.child("field");
    let routes = stream.child("route");
    let shared = if options.resample_field {
        None
    } else {
        Some(generate_field_with_anchors(scaling, fields.trial_seed(0), false, &anchors)?)
    };
    let route_opts = RouteOptions {
        policy: options.policy,
        hop_budget: options.hop_budget,
        min_progress: None,
    };
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let owned;
            let field = match &shared {
                Some(f) => f,
                None => {
                    owned = generate_field_with_anchors(scaling, fields.trial_seed(t), false, &anchors)?;
                    &owned
                }
            };
            let mut rng = routes.trial_rng(t);
            Ok(route_between(field, spec, 0, 1, &route_opts, &mut rng))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut summary = DiscreteSummary {
        histogram: DelayHistogram::from_samples(
            &outcomes
                .iter()
                .map(|o| o.as_ref().ok().map(|p| p.hop_count))
                .collect::<Vec<_>>(),
        )?,
        dead_end_events: 0,
        fallback_events: 0,
        budget_exhausted: 0,
        aborted: 0,
    };
    for o in &outcomes {
        let path = match o {
            Ok(p) => p,
            Err(f) => {
                match f.kind {
                    FailureKind::BudgetExhausted => summary.budget_exhausted += 1,
                    _ => summary.aborted += 1,
                }
                &f.partial
            }
        };
        summary.dead_end_events += path.dead_end_events;
        summary.fallback_events += path.fallback_events;
    }
    Ok(summary)
}

/// Histogram of hop counts from the default source to the default
/// destination. Failed routes are censored.
pub fn discrete_ensemble(
    spec: &StrategySpec,
    scaling: &ScalingParams,
    trials: usize,
    master_seed: u64,
    resample_field: bool,
) -> Result<DelayHistogram> {
    let stream = SeedStream::new(master_seed, format!("discrete/{}/{}", scaling.n, spec.label()));
    let options = DiscreteOptions {
        resample_field,
        ..Default::default()
    };
    Ok(discrete_ensemble_with(spec, scaling, trials, &stream, &options)?.histogram)
}

/// Finds the transmission range at which greedy forwarding between the
/// default endpoints takes `target_hops` on average over `trials` fields.
///
/// Fields are drawn from the same seeds at every candidate range, so the
/// mean is a step function of the range and bisection settles on the
/// smallest range (to within `1e-6`) whose mean does not exceed the target.
pub fn calibrate_range(n: u64, target_hops: f64, trials: usize, master_seed: u64) -> Result<f64> {
    if !(target_hops >= 1.0) {
        return Err(Error::domain("calibrate_range", format!("target must be >= 1 (got {target_hops})")));
    }
    let stream = SeedStream::new(master_seed, format!("calibrate/{n}"));
    let d = DEFAULT_SRC.distance(DEFAULT_DST);
    let mean_at = |m: f64| -> Result<f64> {
        let scaling = ScalingParams::with_range(n, m)?;
        let s = discrete_ensemble_with(&StrategySpec::StraightLine, &scaling, trials, &stream, &Default::default())?;
        if s.histogram.censored > 0 {
            return Ok(f64::INFINITY);
        }
        Ok(s.histogram.mean)
    };
    let (mut lo, mut hi) = (d / (4.0 * target_hops), (2.0 * d / target_hops).min(0.99));
    if mean_at(hi)? > target_hops {
        return Err(Error::domain("calibrate_range", format!("target {target_hops} hops is below the reachable range")));
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if mean_at(mid)? > target_hops {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}
