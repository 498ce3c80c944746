//! Node-level model: random fields, neighbor queries and relay selection.

pub mod field;
pub mod routing;

pub use field::{generate_field, generate_field_with_anchors, Neighbor, NodeField, QueryRegion};
pub use routing::{
    calibrate_range, discrete_ensemble, discrete_ensemble_with, route_between, route_discrete, DeadEndPolicy,
    DiscreteOptions, DiscreteSummary, FailureKind, PathResult, RouteFailure, RouteOptions, DEFAULT_DST,
    DEFAULT_SRC,
};
