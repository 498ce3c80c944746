//! Geographic routing with imprecise destination information.
//!
//! Hop-count simulation for randomized forwarding schemes in a continuum
//! model ([`continuum`]) and on random node fields ([`discrete`]), drift
//! constants and delay predictions ([`analytics`]), and a tiling based
//! capacity measurement for progressive routing ([`capacity`]).
//! [`experiment`] holds the configuration, reproduction suite and CLI
//! plumbing used by the `georoute` binary.

pub mod analytics;
pub mod capacity;
pub mod continuum;
pub mod discrete;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod histogram;
pub mod output;
pub mod seed;
pub mod strategies;

pub use error::{Error, Result};
pub use geometry::{Point2, PolarStep, ScalingParams};
pub use histogram::DelayHistogram;
pub use strategies::StrategySpec;
