//! Per-period and per-scenario investment optimization.
//!
//! The scenario objective is a sum of independent per-period terms, so the
//! scenario optimum is the vector of per-period optima. For the class-I
//! breach function the per-period optimum has a closed form; golden-section
//! search and an exhaustive grid are kept as independent cross-checks.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{enbis_eval, InvestmentPlan, PeriodSpec, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    GoldenSection,
    Grid,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::GoldenSection => "golden_section",
            Method::Grid => "grid",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodOptimum {
    pub z_star: f64,
    pub breach_probability_at_optimum: f64,
    pub ebis_at_optimum: f64,
    pub enbis_at_optimum: f64,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub plan: InvestmentPlan,
    pub enbis_total: f64,
    pub per_period: Vec<PeriodOptimum>,
}

/// Maximizer of `(v - S(z, v)) * L - z` over `z ≥ 0`.
///
/// With `k = beta + d`, the first-order condition
/// `alpha * k * v * L * (alpha * z + 1)^-(k + 1) = 1` gives
/// `z* = ((alpha * k * v * L)^(1 / (k + 1)) - 1) / alpha`, clamped at 0
/// when `alpha * k * v * L ≤ 1`.
pub fn closed_form_optimum(period: &PeriodSpec) -> f64 {
    let tech = period.technology();
    let k = tech.exponent();
    let drive = tech.alpha() * k * period.expected_loss();
    if drive <= 1.0 {
        return 0.0;
    }
    let z = (drive.powf(1.0 / (k + 1.0)) - 1.0) / tech.alpha();
    z.max(0.0)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of per-period ENBIS on `[0, z_max]`.
///
/// Falls back to `z = 0` whenever investing nothing does at least as well
/// as the interior candidate.
pub fn golden_section_optimum(period: &PeriodSpec, z_max: f64, tol: f64) -> Result<f64> {
    if !(z_max.is_finite() && z_max > 0.0) {
        return Err(Error::domain("z_max", "must be finite and > 0"));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::domain("tol", "must be finite and > 0"));
    }
    if period.expected_loss() == 0.0 {
        return Ok(0.0);
    }

    let f = |z: f64| -> Result<f64> {
        let value = period.enbis_unchecked(z);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Numeric(format!("objective is {value} at z = {z}")))
        }
    };

    let (mut lo, mut hi) = (0.0_f64, z_max);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        }
        // Bracket can stall once it shrinks to adjacent floats.
        if x1 >= x2 {
            break;
        }
    }

    let z = 0.5 * (lo + hi);
    if f(0.0)? >= f(z)? {
        Ok(0.0)
    } else {
        Ok(z)
    }
}

/// Exhaustive search over `{0, z_max/steps, ..., z_max}`; ties go to the
/// smallest `z`.
pub fn grid_oracle(period: &PeriodSpec, z_max: f64, steps: usize) -> Result<f64> {
    if steps < 2 {
        return Err(Error::domain("steps", "must be ≥ 2"));
    }
    if !(z_max.is_finite() && z_max >= 0.0) {
        return Err(Error::domain("z_max", "must be finite and ≥ 0"));
    }
    let n = steps as f64;
    let mut best_z = 0.0;
    let mut best = period.enbis_unchecked(0.0);
    for i in 1..=steps {
        let z = z_max * (i as f64) / n;
        let value = period.enbis_unchecked(z);
        if value > best {
            best = value;
            best_z = z;
        }
    }
    Ok(best_z)
}

pub fn optimize_period(period: &PeriodSpec) -> PeriodOptimum {
    let z_star = closed_form_optimum(period);
    let breach_probability_at_optimum = period.breach_probability_unchecked(z_star);
    let ebis_at_optimum = period.ebis_unchecked(z_star);
    PeriodOptimum {
        z_star,
        breach_probability_at_optimum,
        ebis_at_optimum,
        enbis_at_optimum: ebis_at_optimum - z_star,
        method: Method::ClosedForm,
    }
}

pub fn optimize_scenario(scenario: &Scenario) -> OptimizationResult {
    let per_period: Vec<PeriodOptimum> = scenario.periods().iter().map(optimize_period).collect();
    let plan = InvestmentPlan::new(per_period.iter().map(|p| p.z_star).collect())
        .expect("closed-form optima are finite and nonnegative");
    let enbis_total = enbis_eval(&plan, scenario).expect("plan length matches scenario");
    OptimizationResult {
        plan,
        enbis_total,
        per_period,
    }
}
