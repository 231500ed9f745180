//! Optimal security investment under the Gordon-Loeb model, extended to
//! several periods and to a disruptive technology that steepens the
//! breach-probability function.
//!
//! - [`model`]: domain types and the breach-probability/benefit functions.
//! - [`optimizer`]: closed-form optimum with golden-section and grid
//!   cross-checks.
//! - [`analysis`]: two-span ENBIS comparison, disruption classification,
//!   productivity ratio, and sweeps over the disruption propositions.
//! - [`io`] and [`cli`]: scenario files, CSV/SVG output, command line.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod io;
pub mod model;
pub mod optimizer;

pub use error::{Error, Result};
pub use model::{CurvePoint, InvestmentPlan, PeriodSpec, Scenario, TechnologyProfile};
pub use optimizer::{OptimizationResult, PeriodOptimum};
