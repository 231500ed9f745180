//! Scenario comparison and probes of the disruption propositions.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{
    disruption_gap, enbis_eval, InvestmentPlan, PeriodSpec, Scenario, TechnologyProfile,
};
use crate::optimizer::closed_form_optimum;

/// Relative ENBIS gain above which a technology counts as disruptive.
pub const DEFAULT_THRESHOLD: f64 = 0.10;

/// Optima closer than this are reported as unshifted.
pub const SHIFT_TOLERANCE: f64 = 1e-9;

const EQUAL_DURATION: &str =
    "time spans must have the same number of periods; their durations must be equal in order to proceed to the comparison";

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaZReport {
    /// `enbis_a - enbis_b`.
    pub delta_z: f64,
    pub enbis_a: f64,
    pub enbis_b: f64,
    pub period_count: usize,
    pub classified_disruptive: bool,
    pub threshold_used: f64,
}

/// Compares realized ENBIS of two equal-duration scenarios at given plans.
/// The report is classified with [`DEFAULT_THRESHOLD`]; reclassify with
/// [`classify_disruptive`].
pub fn delta_z(
    scenario_a: &Scenario,
    plan_a: &InvestmentPlan,
    scenario_b: &Scenario,
    plan_b: &InvestmentPlan,
) -> Result<DeltaZReport> {
    check_equal_duration(scenario_a, scenario_b)?;
    let enbis_a = enbis_eval(plan_a, scenario_a)?;
    let enbis_b = enbis_eval(plan_b, scenario_b)?;
    let mut report = DeltaZReport {
        delta_z: enbis_a - enbis_b,
        enbis_a,
        enbis_b,
        period_count: scenario_a.horizon(),
        classified_disruptive: false,
        threshold_used: DEFAULT_THRESHOLD,
    };
    classify_disruptive(&mut report, DEFAULT_THRESHOLD)?;
    Ok(report)
}

pub fn check_equal_duration(a: &Scenario, b: &Scenario) -> Result<()> {
    if a.horizon() == b.horizon() {
        Ok(())
    } else {
        Err(Error::contract(format!(
            "{EQUAL_DURATION} ('{}' has {} periods, '{}' has {})",
            a.label(),
            a.horizon(),
            b.label(),
            b.horizon()
        )))
    }
}

/// Requires the `(v_i, L_i)` sequences of both scenarios to be identical,
/// so only the technology differs between the spans.
pub fn check_same_exposure(a: &Scenario, b: &Scenario) -> Result<()> {
    check_equal_duration(a, b)?;
    for (i, (pa, pb)) in a.periods().iter().zip(b.periods()).enumerate() {
        if pa.vulnerability() != pb.vulnerability() || pa.loss() != pb.loss() {
            return Err(Error::contract(format!(
                "strict comparison requires identical vulnerability and loss; periods[{i}] differs"
            )));
        }
    }
    Ok(())
}

/// Decides whether B's ENBIS gain over A is substantial and records the
/// threshold in the report.
pub fn classify_disruptive(report: &mut DeltaZReport, threshold: f64) -> Result<bool> {
    if !(threshold.is_finite() && threshold >= 0.0) {
        return Err(Error::domain("threshold", "must be finite and ≥ 0"));
    }
    let (a, b) = (report.enbis_a, report.enbis_b);
    let disruptive = if a > 0.0 {
        b > a * (1.0 + threshold)
    } else {
        b - a > threshold * a.abs().max(1.0)
    };
    report.classified_disruptive = disruptive;
    report.threshold_used = threshold;
    Ok(disruptive)
}

/// Ratio of total investment in B to total investment in A.
pub fn productivity_ratio(plan_a: &InvestmentPlan, plan_b: &InvestmentPlan) -> Result<f64> {
    if plan_a.is_empty() || plan_b.is_empty() {
        return Err(Error::contract("both investment plans must be nonempty"));
    }
    let total_a = plan_a.total();
    if total_a == 0.0 {
        return Err(Error::domain(
            "plan_a",
            "total investment must be > 0 to form a ratio",
        ));
    }
    Ok(plan_b.total() / total_a)
}

/// Checks that EBIS under the disruptive technology is at least the
/// baseline EBIS at every grid point, strictly above it for `z > 0` when
/// `v * L > 0`.
pub fn dominance_check(
    baseline: &PeriodSpec,
    disrupted: &PeriodSpec,
    z_grid: &[f64],
) -> Result<bool> {
    if baseline.technology().is_disruptive() || !disrupted.technology().is_disruptive() {
        return Err(Error::contract(
            "baseline must have d = 0 and disrupted must have d = 1",
        ));
    }
    if !baseline.differs_only_in_disruption(disrupted) {
        return Err(Error::contract(
            "periods must differ only in the disruption flag",
        ));
    }
    let exposed = baseline.expected_loss() > 0.0;
    for &z in z_grid {
        let gap = disruption_gap(z, baseline)?;
        if gap < 0.0 || (exposed && z > 0.0 && gap <= 0.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    Left,
    Right,
    None,
}

impl ShiftDirection {
    pub fn classify(baseline: f64, disrupted: f64) -> Self {
        if disrupted < baseline - SHIFT_TOLERANCE {
            ShiftDirection::Left
        } else if disrupted > baseline + SHIFT_TOLERANCE {
            ShiftDirection::Right
        } else {
            ShiftDirection::None
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ShiftDirection::Left => "left",
            ShiftDirection::Right => "right",
            ShiftDirection::None => "none",
        }
    }
}

impl fmt::Display for ShiftDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepParameters {
    pub alpha: f64,
    pub beta: f64,
    pub vulnerability: f64,
    pub loss: f64,
}

impl SweepParameters {
    fn cmp_tuple(&self, other: &Self) -> Ordering {
        self.alpha
            .total_cmp(&other.alpha)
            .then(self.beta.total_cmp(&other.beta))
            .then(self.vulnerability.total_cmp(&other.vulnerability))
            .then(self.loss.total_cmp(&other.loss))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub parameters: SweepParameters,
    pub z_star_baseline: f64,
    pub z_star_disrupted: f64,
    pub shift_direction: ShiftDirection,
}

/// Axis values for [`proposition_sweep`]; the sweep covers their
/// Cartesian product.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepGrid {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub vulnerabilities: Vec<f64>,
    pub losses: Vec<f64>,
}

/// Computes the optimum with and without the disruption dummy for every
/// parameter tuple. Records come back sorted by `(alpha, beta, v, L)`.
pub fn proposition_sweep(grid: &SweepGrid) -> Result<Vec<SweepRecord>> {
    let mut records = Vec::with_capacity(
        grid.alphas.len() * grid.betas.len() * grid.vulnerabilities.len() * grid.losses.len(),
    );
    for &alpha in &grid.alphas {
        for &beta in &grid.betas {
            let tech = TechnologyProfile::new(alpha, beta, false)?;
            for &vulnerability in &grid.vulnerabilities {
                for &loss in &grid.losses {
                    let baseline = PeriodSpec::new(vulnerability, loss, tech)?;
                    let z_star_baseline = closed_form_optimum(&baseline);
                    let z_star_disrupted = closed_form_optimum(&baseline.with_disruptive(true));
                    records.push(SweepRecord {
                        parameters: SweepParameters {
                            alpha,
                            beta,
                            vulnerability,
                            loss,
                        },
                        z_star_baseline,
                        z_star_disrupted,
                        shift_direction: ShiftDirection::classify(
                            z_star_baseline,
                            z_star_disrupted,
                        ),
                    });
                }
            }
        }
    }
    records.sort_by(|a, b| a.parameters.cmp_tuple(&b.parameters));
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn period(v: f64, l: f64, d: bool) -> PeriodSpec {
        PeriodSpec::new(v, l, TechnologyProfile::new(1.0, 1.0, d).unwrap()).unwrap()
    }

    fn one(p: PeriodSpec) -> Scenario {
        Scenario::new("s", vec![p]).unwrap()
    }

    fn plan(z: &[f64]) -> InvestmentPlan {
        InvestmentPlan::new(z.to_vec()).unwrap()
    }

    #[test]
    fn delta_z_examples() {
        let a = one(period(0.5, 100.0, false));
        let b = one(period(0.5, 100.0, true));
        let z = plan(&[1.0]);

        let same = delta_z(&a, &z, &a, &z).unwrap();
        assert_eq!(same.delta_z, 0.0);
        assert!(!same.classified_disruptive);

        let ab = delta_z(&a, &z, &b, &z).unwrap();
        assert!((ab.enbis_a - 24.0).abs() < 1e-9);
        assert!((ab.enbis_b - 36.5).abs() < 1e-9);
        assert!((ab.delta_z + 12.5).abs() < 1e-9);
        assert_eq!(ab.period_count, 1);
        assert!(ab.classified_disruptive);

        let ba = delta_z(&b, &z, &a, &z).unwrap();
        assert_eq!(ba.delta_z, -ab.delta_z);
    }

    #[test]
    fn delta_z_rejects_unequal_horizons() {
        let a = one(period(0.5, 100.0, false));
        let p = period(0.5, 100.0, true);
        let b = Scenario::new("b", vec![p, p]).unwrap();
        let err = delta_z(&a, &plan(&[1.0]), &b, &plan(&[1.0, 1.0])).unwrap_err();
        assert!(err
            .to_string()
            .contains("must be equal in order to proceed"));
    }

    #[test]
    fn strict_exposure_check() {
        let a = one(period(0.5, 100.0, false));
        let b = one(period(0.5, 100.0, true));
        let c = one(period(0.4, 100.0, true));
        assert!(check_same_exposure(&a, &b).is_ok());
        assert!(matches!(
            check_same_exposure(&a, &c),
            Err(Error::Contract(_))
        ));
    }

    fn report(a: f64, b: f64) -> DeltaZReport {
        DeltaZReport {
            delta_z: a - b,
            enbis_a: a,
            enbis_b: b,
            period_count: 1,
            classified_disruptive: false,
            threshold_used: DEFAULT_THRESHOLD,
        }
    }

    #[test]
    fn classify_examples() {
        for t in [0.0, 0.1, 2.0] {
            assert!(!classify_disruptive(&mut report(24.0, 24.0), t).unwrap());
        }
        let mut r = report(24.0, 36.5);
        assert!(classify_disruptive(&mut r, 0.10).unwrap());
        assert!(r.classified_disruptive);
        assert_eq!(r.threshold_used, 0.10);
        assert!(!classify_disruptive(&mut report(24.0, 25.0), 0.10).unwrap());
        assert!(classify_disruptive(&mut report(24.0, 25.0), 0.04).unwrap());
        // Nonpositive baseline uses the absolute rule.
        assert!(classify_disruptive(&mut report(0.0, 0.2), 0.1).unwrap());
        assert!(!classify_disruptive(&mut report(0.0, 0.05), 0.1).unwrap());
        assert!(matches!(
            classify_disruptive(&mut report(1.0, 2.0), -0.1),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn productivity_ratio_examples() {
        assert_eq!(
            productivity_ratio(&plan(&[1.0, 2.0]), &plan(&[1.0, 2.0])).unwrap(),
            1.0
        );
        assert_eq!(
            productivity_ratio(&plan(&[4.0, 6.0]), &plan(&[5.0])).unwrap(),
            0.5
        );
        assert!(matches!(
            productivity_ratio(&plan(&[0.0, 0.0]), &plan(&[1.0])),
            Err(Error::Domain { .. })
        ));
        assert!(productivity_ratio(&plan(&[]), &plan(&[1.0])).is_err());
    }

    #[test]
    fn dominance_examples() {
        let base = period(0.5, 100.0, false);
        let dis = period(0.5, 100.0, true);
        assert!(dominance_check(&base, &dis, &[0.0, 1.0, 2.0]).unwrap());
        assert!(dominance_check(&base, &dis, &[0.0]).unwrap());
        let zero = period(0.0, 100.0, false);
        assert!(dominance_check(&zero, &zero.with_disruptive(true), &[0.0, 1.0, 5.0]).unwrap());
        assert!(matches!(
            dominance_check(&base, &period(0.4, 100.0, true), &[1.0]),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            dominance_check(&dis, &base, &[1.0]),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn sweep_examples() {
        let grid = SweepGrid {
            alphas: vec![1.0],
            betas: vec![1.0],
            vulnerabilities: vec![0.5, 0.0],
            losses: vec![20.0, 4.0],
        };
        let records = proposition_sweep(&grid).unwrap();
        assert_eq!(records.len(), 4);
        // Sorted: v = 0 first, then v = 0.5 with L = 4 before L = 20.
        assert_eq!(records[0].shift_direction, ShiftDirection::None);
        assert_eq!(records[1].shift_direction, ShiftDirection::None);
        assert_eq!(records[2].parameters.loss, 4.0);
        assert_eq!(records[2].shift_direction, ShiftDirection::Right);
        assert_eq!(records[3].shift_direction, ShiftDirection::Left);
    }

    #[test]
    fn sweep_rejects_invalid_axes() {
        let grid = SweepGrid {
            alphas: vec![1.0],
            betas: vec![0.5],
            vulnerabilities: vec![0.5],
            losses: vec![1.0],
        };
        assert!(proposition_sweep(&grid).is_err());
    }
}
