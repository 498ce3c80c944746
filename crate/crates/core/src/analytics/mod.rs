//! Drift constants, delay predictions, capacity bounds and the empirical
//! concentration check.

pub mod bounds;
pub mod concentration;
pub mod drift;
pub mod quadrature;

pub use bounds::{mu_bound, predicted_delay, BoundReport, DEFAULT_BRACKET};
pub use concentration::{triangular_array_check, ConvergenceRow, ConvergenceTable};
pub use drift::{
    beta_quadrant_adversarial, beta_quadrant_uniform, beta_sector, beta_sector_closed_form, beta_sector_quadrature,
    closed_form_drift, monte_carlo_drift, DriftConstant, DriftMethod, QUADRATURE_TOL,
};
