//! Throughput under progressive routing: torus tiling, tile interference
//! graph and coloring, `n / 2` random flows and per-tile congestion.

pub mod flows;
pub mod tiling;

pub use flows::{congestion_report, route_flows, run_capacity, tile_hops, CapacityRun, DEFAULT_CAPACITY_K, Flow, FlowSet, TileReport};
pub use tiling::{build_tiling, color_tiles, Coloring, InterferenceGraph, Tiling};
