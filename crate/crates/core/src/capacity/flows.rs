//! Random flows under progressive routing and per-tile congestion.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tiling::{build_tiling, color_tiles, Coloring, InterferenceGraph, Tiling};
use crate::analytics::mu_bound;
use crate::discrete::{generate_field, route_between, FailureKind, NodeField, PathResult, RouteOptions};
use crate::error::{Error, Result};
use crate::geometry::ScalingParams;
use crate::output::round_sig9;
use crate::seed::{rng_from_seed, SeedStream};
use crate::strategies::StrategySpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flow {
    pub src: usize,
    pub dst: usize,
    pub path: Option<PathResult>,
    pub failure: Option<FailureKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowSet {
    pub delta: f64,
    pub flows: Vec<Flow>,
}

impl FlowSet {
    pub fn failed(&self) -> usize {
        self.flows.iter().filter(|f| f.path.is_none()).count()
    }

    pub fn routed(&self) -> impl Iterator<Item = &PathResult> {
        self.flows.iter().filter_map(|f| f.path.as_ref())
    }
}

/// Pairs the nodes of a torus field into `n / 2` flows by a random
/// permutation and routes each with relays restricted to progress of at
/// least `delta * M`.
pub fn route_flows(field: &NodeField, spec: &StrategySpec, delta: f64, seed: u64) -> Result<FlowSet> {
    if !field.is_torus() {
        return Err(Error::domain("route_flows", "capacity flows need a torus field"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain("route_flows", format!("delta must lie in (0, 1) (got {delta})")));
    }
    spec.validate()?;
    let stream = SeedStream::new(seed, format!("flows/{}", spec.label()));
    let mut order: Vec<usize> = (0..field.len()).collect();
    order.shuffle(&mut rng_from_seed(stream.child("pairing").trial_seed(0)));
    let m = field.range();
    let options = RouteOptions {
        min_progress: Some(delta * m),
        // half the torus diagonal bounds any start distance
        hop_budget: Some((std::f64::consts::FRAC_1_SQRT_2 / (delta * m)).floor() as u64 + 1),
        ..Default::default()
    };
    let routes = stream.child("route");
    let flows = order
        .par_chunks_exact(2)
        .enumerate()
        .map(|(i, pair)| {
            let mut rng = routes.trial_rng(i as u64);
            match route_between(field, spec, pair[0], pair[1], &options, &mut rng) {
                Ok(p) => Flow {
                    src: pair[0],
                    dst: pair[1],
                    path: Some(p),
                    failure: None,
                },
                Err(e) => Flow {
                    src: pair[0],
                    dst: pair[1],
                    path: None,
                    failure: Some(e.kind),
                },
            }
        })
        .collect();
    Ok(FlowSet { delta, flows })
}

/// `(tile, hops)` pairs of one path, attributing each hop to the tile of its
/// transmitter, sorted by tile.
pub fn tile_hops(tiling: &Tiling, field: &NodeField, path: &PathResult) -> Vec<(usize, u64)> {
    let mut tiles: Vec<usize> = path.hops[..path.hops.len() - 1]
        .iter()
        .map(|&i| tiling.tile_of(field.position(i)))
        .collect();
    tiles.sort_unstable();
    let mut out: Vec<(usize, u64)> = Vec::new();
    for t in tiles {
        match out.last_mut() {
            Some((last, c)) if *last == t => *c += 1,
            _ => out.push((t, 1)),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TileReport {
    pub n: u64,
    pub m: f64,
    pub delta: f64,
    pub guard: f64,
    pub a: f64,
    pub tiles: usize,
    pub tiles_per_axis: usize,
    pub colors_used: usize,
    #[serde(rename = "J")]
    pub j: usize,
    /// H(n): largest number of hops transmitted from one tile.
    pub max_tile_hops: u64,
    /// `(sqrt 2 / delta) * (most paths through one tile)`.
    pub path_proxy_hops: f64,
    pub mu_bound: f64,
    pub achieved_rate: f64,
    pub target_rate: f64,
    /// `achieved_rate * sqrt(n ln n)`.
    pub rate_ratio: f64,
    pub flows: usize,
    pub failed_flows: usize,
    /// Largest hop count of a single flow inside a single tile.
    pub max_flow_tile_hops: u64,
    /// Largest number of distinct tiles used by one flow.
    pub max_tiles_touched: usize,
    pub max_flow_hops: u64,
    /// Largest fraction of routed flows passing through one tile.
    pub max_touch_fraction: f64,
    pub tile_hops: Vec<u64>,
}

pub fn congestion_report(
    tiling: &Tiling,
    graph: &InterferenceGraph,
    coloring: &Coloring,
    field: &NodeField,
    flows: &FlowSet,
) -> Result<TileReport> {
    let n = field.len() as u64;
    let per_flow: Vec<Vec<(usize, u64)>> = flows
        .routed()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|p| tile_hops(tiling, field, p))
        .collect();
    let mut totals = vec![0u64; tiling.tile_count()];
    let mut touches = vec![0u64; tiling.tile_count()];
    for f in &per_flow {
        for &(t, c) in f {
            totals[t] += c;
            touches[t] += 1;
        }
    }
    let max_tile_hops = totals.iter().copied().max().unwrap_or(0);
    let routed = per_flow.len();
    let most_paths = touches.iter().copied().max().unwrap_or(0);
    let nf = n as f64;
    let target_rate = 1.0 / (nf * nf.ln()).sqrt();
    let achieved_rate = if max_tile_hops == 0 {
        0.0
    } else {
        1.0 / (coloring.colors_used as f64 * max_tile_hops as f64)
    };
    Ok(TileReport {
        n,
        m: field.range(),
        delta: flows.delta,
        guard: graph.guard,
        a: tiling.a,
        tiles: tiling.tile_count(),
        tiles_per_axis: tiling.tiles_per_axis,
        colors_used: coloring.colors_used,
        j: graph.j(),
        max_tile_hops,
        path_proxy_hops: round_sig9(std::f64::consts::SQRT_2 / flows.delta * most_paths as f64),
        mu_bound: round_sig9(mu_bound(n, flows.delta)?),
        achieved_rate: round_sig9(achieved_rate),
        target_rate: round_sig9(target_rate),
        rate_ratio: round_sig9(achieved_rate / target_rate),
        flows: flows.flows.len(),
        failed_flows: flows.failed(),
        max_flow_tile_hops: per_flow.iter().flatten().map(|&(_, c)| c).max().unwrap_or(0),
        max_tiles_touched: per_flow.iter().map(Vec::len).max().unwrap_or(0),
        max_flow_hops: flows.routed().map(|p| p.hop_count).max().unwrap_or(0),
        max_touch_fraction: if routed == 0 {
            0.0
        } else {
            round_sig9(most_paths as f64 / routed as f64)
        },
        tile_hops: totals,
    })
}

/// Range constant used by the capacity experiments unless overridden. Keeps
/// starvation of the progress filter below one percent of flows from
/// `n = 4000` up.
pub const DEFAULT_CAPACITY_K: f64 = 1.3;

/// Everything produced by one capacity experiment.
#[derive(Debug, Clone)]
pub struct CapacityRun {
    pub field: NodeField,
    pub tiling: Tiling,
    pub graph: InterferenceGraph,
    pub coloring: Coloring,
    pub flows: FlowSet,
    pub report: TileReport,
}

/// Torus field, tiling, interference graph with guard `guard`, coloring,
/// `n / 2` progressive flows and the congestion report.
pub fn run_capacity(
    scaling: &ScalingParams,
    spec: &StrategySpec,
    delta: f64,
    guard: f64,
    seed: u64,
) -> Result<CapacityRun> {
    let stream = SeedStream::new(seed, format!("capacity/{}", scaling.n));
    let field = generate_field(scaling, stream.trial_seed(0), true)?;
    let tiling = build_tiling(scaling)?;
    let graph = InterferenceGraph::build(tiling, scaling.m, guard)?;
    let coloring = color_tiles(&graph);
    let flows = route_flows(&field, spec, delta, stream.trial_seed(1))?;
    let report = congestion_report(&tiling, &graph, &coloring, &field, &flows)?;
    Ok(CapacityRun {
        field,
        tiling,
        graph,
        coloring,
        flows,
        report,
    })
}
