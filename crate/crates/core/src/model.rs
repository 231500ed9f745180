//! Domain types and the class-I breach-probability model.
//!
//! A period's breach probability under investment `z` is
//! `S(z, v) = v / (alpha * z + 1)^(beta + d)`, where `d` is 1 when a
//! disruptive technology is in force. Expected benefits are
//! `EBIS = (v - S) * L` and expected net benefits are `ENBIS = EBIS - z`.
//! A scenario's objective is the undiscounted sum of per-period ENBIS.

use crate::error::{Error, Result};

/// Absolute tolerance for comparing probabilities and monetary values.
pub const TOLERANCE: f64 = 1e-9;

/// Productivity parameters of one security technology plus the
/// disruption dummy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TechnologyProfile {
    alpha: f64,
    beta: f64,
    disruptive: bool,
}

impl TechnologyProfile {
    pub fn new(alpha: f64, beta: f64, disruptive: bool) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::domain("alpha", "must be > 0"));
        }
        if !(beta.is_finite() && beta >= 1.0) {
            return Err(Error::domain("beta", "must be ≥ 1"));
        }
        Ok(Self {
            alpha,
            beta,
            disruptive,
        })
    }

    /// Builds a profile from a numeric dummy, rejecting anything but 0 or 1.
    pub fn with_indicator(alpha: f64, beta: f64, indicator: f64) -> Result<Self> {
        let disruptive = disruption_flag(indicator)?;
        Self::new(alpha, beta, disruptive)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_disruptive(&self) -> bool {
        self.disruptive
    }

    /// The dummy `d` as 0 or 1.
    pub fn indicator(&self) -> u8 {
        u8::from(self.disruptive)
    }

    /// The breach-probability exponent `beta + d`.
    pub fn exponent(&self) -> f64 {
        self.beta + f64::from(self.indicator())
    }

    pub fn with_disruptive(self, disruptive: bool) -> Self {
        Self { disruptive, ..self }
    }
}

/// Maps a numeric dummy onto the disruption flag.
pub fn disruption_flag(indicator: f64) -> Result<bool> {
    if indicator == 0.0 {
        Ok(false)
    } else if indicator == 1.0 {
        Ok(true)
    } else {
        Err(Error::domain(
            "disruptive",
            "must be 0 or 1 (dummy: 0 when no disruptive technology is used, 1 otherwise)",
        ))
    }
}

/// One period: vulnerability `v`, potential loss `L`, and the technology
/// in force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodSpec {
    vulnerability: f64,
    loss: f64,
    technology: TechnologyProfile,
}

impl PeriodSpec {
    pub fn new(vulnerability: f64, loss: f64, technology: TechnologyProfile) -> Result<Self> {
        check_vulnerability(vulnerability)?;
        if !(loss.is_finite() && loss >= 0.0) {
            return Err(Error::domain("loss", "must be ≥ 0"));
        }
        Ok(Self {
            vulnerability,
            loss,
            technology,
        })
    }

    pub fn vulnerability(&self) -> f64 {
        self.vulnerability
    }

    pub fn loss(&self) -> f64 {
        self.loss
    }

    pub fn technology(&self) -> &TechnologyProfile {
        &self.technology
    }

    /// Expected loss `v * L` with no investment.
    pub fn expected_loss(&self) -> f64 {
        self.vulnerability * self.loss
    }

    pub fn with_disruptive(self, disruptive: bool) -> Self {
        Self {
            technology: self.technology.with_disruptive(disruptive),
            ..self
        }
    }

    /// True when `other` matches in everything but the disruption flag.
    pub fn differs_only_in_disruption(&self, other: &PeriodSpec) -> bool {
        self.vulnerability == other.vulnerability
            && self.loss == other.loss
            && self.technology.alpha == other.technology.alpha
            && self.technology.beta == other.technology.beta
    }

    // Evaluation with `z` already validated.
    #[inline]
    pub(crate) fn breach_probability_unchecked(&self, z: f64) -> f64 {
        breach_probability(z, self.vulnerability, &self.technology)
    }

    #[inline]
    pub(crate) fn ebis_unchecked(&self, z: f64) -> f64 {
        (self.vulnerability - self.breach_probability_unchecked(z)) * self.loss
    }

    #[inline]
    pub(crate) fn enbis_unchecked(&self, z: f64) -> f64 {
        self.ebis_unchecked(z) - z
    }
}

/// An ordered, nonempty run of periods. The period count is the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    label: String,
    periods: Vec<PeriodSpec>,
}

impl Scenario {
    pub fn new(label: impl Into<String>, periods: Vec<PeriodSpec>) -> Result<Self> {
        if periods.is_empty() {
            return Err(Error::domain("periods", "must contain at least one period"));
        }
        Ok(Self {
            label: label.into(),
            periods,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn periods(&self) -> &[PeriodSpec] {
        &self.periods
    }

    pub fn horizon(&self) -> usize {
        self.periods.len()
    }

    /// Appends `other`'s periods after this scenario's.
    pub fn concat(&self, other: &Scenario, label: impl Into<String>) -> Scenario {
        let mut periods = self.periods.clone();
        periods.extend_from_slice(&other.periods);
        Scenario {
            label: label.into(),
            periods,
        }
    }
}

/// Per-period investment amounts `z_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvestmentPlan(Vec<f64>);

impl InvestmentPlan {
    pub fn new(amounts: Vec<f64>) -> Result<Self> {
        for (i, &z) in amounts.iter().enumerate() {
            check_investment(z).map_err(|e| e.within(&format!("amounts[{i}]")))?;
        }
        Ok(Self(amounts))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn amounts(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn concat(&self, other: &InvestmentPlan) -> InvestmentPlan {
        let mut amounts = self.0.clone();
        amounts.extend_from_slice(&other.0);
        InvestmentPlan(amounts)
    }
}

/// One sample of a period's benefit curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub z: f64,
    pub ebis: f64,
    pub enbis: f64,
    pub breach_probability: f64,
}

fn check_vulnerability(v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain("vulnerability", "must be in [0, 1]"))
    }
}

fn check_investment(z: f64) -> Result<()> {
    if z.is_finite() && z >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain("z", "must be finite and ≥ 0"))
    }
}

#[inline]
fn breach_probability(z: f64, v: f64, tech: &TechnologyProfile) -> f64 {
    v / (tech.alpha * z + 1.0).powf(tech.exponent())
}

/// Class-I breach probability `v / (alpha * z + 1)^(beta + d)`.
pub fn sbpf_eval(z: f64, v: f64, tech: &TechnologyProfile) -> Result<f64> {
    check_investment(z)?;
    check_vulnerability(v)?;
    Ok(breach_probability(z, v, tech))
}

/// Expected benefit `(v - S(z, v)) * L` of investing `z` in `period`.
pub fn ebis_eval(z: f64, period: &PeriodSpec) -> Result<f64> {
    check_investment(z)?;
    Ok(period.ebis_unchecked(z))
}

/// Expected net benefit `EBIS(z) - z` for a single period.
pub fn period_enbis(z: f64, period: &PeriodSpec) -> Result<f64> {
    check_investment(z)?;
    Ok(period.enbis_unchecked(z))
}

/// Sum of per-period ENBIS for `plan` over `scenario`.
pub fn enbis_eval(plan: &InvestmentPlan, scenario: &Scenario) -> Result<f64> {
    if plan.len() != scenario.horizon() {
        return Err(Error::contract(format!(
            "investment plan has {} amounts but scenario '{}' has {} periods",
            plan.len(),
            scenario.label(),
            scenario.horizon()
        )));
    }
    Ok(plan
        .amounts()
        .iter()
        .zip(scenario.periods())
        .map(|(&z, period)| period.enbis_unchecked(z))
        .sum())
}

pub fn curve_point(z: f64, period: &PeriodSpec) -> Result<CurvePoint> {
    check_investment(z)?;
    let breach_probability = period.breach_probability_unchecked(z);
    let ebis = (period.vulnerability - breach_probability) * period.loss;
    Ok(CurvePoint {
        z,
        ebis,
        enbis: ebis - z,
        breach_probability,
    })
}

/// EBIS under `d = 1` minus EBIS under `d = 0` at the same `z`, with the
/// period's other parameters fixed.
///
/// Computed as `L * (S_0 - S_1)` so the gap stays representable where
/// both EBIS values round to `v * L`.
pub fn disruption_gap(z: f64, period: &PeriodSpec) -> Result<f64> {
    check_investment(z)?;
    let baseline = period.with_disruptive(false);
    let disrupted = period.with_disruptive(true);
    Ok(
        (baseline.breach_probability_unchecked(z) - disrupted.breach_probability_unchecked(z))
            * period.loss,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixBranch {
    Pre,
    Post,
}

impl MixBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            MixBranch::Pre => "pre",
            MixBranch::Post => "post",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixPoint {
    pub index: usize,
    pub branch: MixBranch,
    pub point: CurvePoint,
}

/// Piecewise benefit curve across a technology switch.
#[derive(Debug, Clone, PartialEq)]
pub struct MixCurve {
    pub points: Vec<MixPoint>,
    pub switch_index: usize,
    /// Post-branch EBIS minus pre-branch EBIS at the switch point, when the
    /// switch falls inside the grid.
    pub jump: Option<f64>,
}

/// Builds the mixed curve: grid index `i` doubles as the period index, so
/// rows before `switch_index` follow the pre-switch technology and rows
/// from `switch_index` on follow the post-switch one.
///
/// `pre` must be non-disruptive. `post` must match `pre` in everything but
/// the disruption flag; an identical `post` gives a curve with no jump.
pub fn ebis_mix_curve(
    pre: &PeriodSpec,
    post: &PeriodSpec,
    switch_index: usize,
    z_grid: &[f64],
) -> Result<MixCurve> {
    if pre.technology.is_disruptive() {
        return Err(Error::contract(
            "pre-switch technology must be non-disruptive (d = 0)",
        ));
    }
    if !pre.differs_only_in_disruption(post) {
        return Err(Error::contract(
            "pre- and post-switch periods must differ only in the disruption flag",
        ));
    }
    let points = z_grid
        .iter()
        .enumerate()
        .map(|(index, &z)| {
            let (branch, period) = if index < switch_index {
                (MixBranch::Pre, pre)
            } else {
                (MixBranch::Post, post)
            };
            Ok(MixPoint {
                index,
                branch,
                point: curve_point(z, period)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let jump = match z_grid.get(switch_index) {
        Some(&z) if post.technology.is_disruptive() => Some(disruption_gap(z, pre)?),
        Some(_) => Some(0.0),
        None => None,
    };
    Ok(MixCurve {
        points,
        switch_index,
        jump,
    })
}
