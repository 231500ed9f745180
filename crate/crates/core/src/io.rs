//! Scenario documents (JSON) and CSV/SVG emission.
//!
//! A scenario document looks like
//!
//! ```json
//! {"label": "baseline",
//!  "periods": [{"vulnerability": 0.5, "loss": 100, "alpha": 1, "beta": 1, "disruptive": 0}]}
//! ```
//!
//! Periods may also carry `"investment": z` to fix the plan evaluated by
//! `delta-z`; either every period carries one or none does. Any other field
//! is rejected.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::SweepRecord;
use crate::error::{Error, Result};
use crate::model::{
    curve_point, ebis_mix_curve, InvestmentPlan, PeriodSpec, Scenario, TechnologyProfile,
};
use crate::optimizer::closed_form_optimum;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    label: String,
    periods: Vec<PeriodEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PeriodEntry {
    vulnerability: f64,
    loss: f64,
    alpha: f64,
    beta: f64,
    disruptive: serde_json::Number,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    investment: Option<f64>,
}

/// A parsed scenario plus the optional plan carried in its periods.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioDocument {
    pub scenario: Scenario,
    pub plan: Option<InvestmentPlan>,
}

pub fn parse_scenario(document: &str) -> Result<Scenario> {
    parse_scenario_document(document).map(|doc| doc.scenario)
}

pub fn parse_scenario_document(document: &str) -> Result<ScenarioDocument> {
    let file: ScenarioFile = serde_json::from_str(document).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;

    let mut periods = Vec::with_capacity(file.periods.len());
    let mut investments = Vec::with_capacity(file.periods.len());
    for (i, entry) in file.periods.iter().enumerate() {
        let at = format!("periods[{i}]");
        let indicator = entry.disruptive.as_f64().unwrap_or(f64::NAN);
        let tech = TechnologyProfile::with_indicator(entry.alpha, entry.beta, indicator)
            .map_err(|e| e.within(&at))?;
        let period =
            PeriodSpec::new(entry.vulnerability, entry.loss, tech).map_err(|e| e.within(&at))?;
        periods.push(period);
        investments.push(entry.investment);
    }

    let plan = match investments.iter().position(Option::is_none) {
        None if !investments.is_empty() => Some(
            InvestmentPlan::new(investments.into_iter().flatten().collect()).map_err(
                |e| match e {
                    Error::Domain { field, reason } => Error::Domain {
                        field: field
                            .replace("amounts[", "periods[")
                            .replace("].z", "].investment"),
                        reason,
                    },
                    other => other,
                },
            )?,
        ),
        Some(missing) if investments.iter().any(Option::is_some) => {
            return Err(Error::domain(
                format!("periods[{missing}].investment"),
                "is missing; either every period carries an investment or none does",
            ));
        }
        _ => None,
    };

    let scenario = Scenario::new(file.label, periods)?;
    Ok(ScenarioDocument { scenario, plan })
}

// serde_json appends " at line X column Y"; the position lives in the
// error variant instead.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(idx) => message[..idx].to_string(),
        None => message.to_string(),
    }
}

/// Serializes a scenario (and optionally a plan) back to a JSON document.
pub fn emit_scenario(scenario: &Scenario, plan: Option<&InvestmentPlan>) -> Result<String> {
    if let Some(plan) = plan {
        if plan.len() != scenario.horizon() {
            return Err(Error::contract(
                "plan length must equal scenario period count",
            ));
        }
    }
    let periods = scenario
        .periods()
        .iter()
        .enumerate()
        .map(|(i, p)| PeriodEntry {
            vulnerability: p.vulnerability(),
            loss: p.loss(),
            alpha: p.technology().alpha(),
            beta: p.technology().beta(),
            disruptive: serde_json::Number::from(p.technology().indicator()),
            investment: plan.map(|plan| plan.amounts()[i]),
        })
        .collect();
    let file = ScenarioFile {
        label: scenario.label().to_string(),
        periods,
    };
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Numeric(format!("cannot serialize scenario: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Fixed six-digit decimal, with negative zero printed as zero.
pub fn fmt_num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// `steps + 1` evenly spaced points from `z_min` to `z_max` inclusive.
pub fn uniform_grid(z_min: f64, z_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(z_min.is_finite() && z_min >= 0.0) {
        return Err(Error::domain("z_min", "must be finite and ≥ 0"));
    }
    if !(z_max.is_finite() && z_max > z_min) {
        return Err(Error::domain("z_max", "must be finite and > z_min"));
    }
    if steps < 2 {
        return Err(Error::domain("steps", "must be ≥ 2"));
    }
    let span = z_max - z_min;
    let n = steps as f64;
    Ok((0..=steps)
        .map(|i| {
            if i == steps {
                z_max
            } else {
                z_min + span * (i as f64) / n
            }
        })
        .collect())
}

/// Benefit curves of `period` under `d = 0`, and optionally `d = 1`, with a
/// trailing `#` row holding each curve's optimum.
pub fn emit_curve_csv(
    period: &PeriodSpec,
    z_min: f64,
    z_max: f64,
    steps: usize,
    include_disrupted: bool,
) -> Result<String> {
    let grid = uniform_grid(z_min, z_max, steps)?;
    let baseline = period.with_disruptive(false);
    let disrupted = period.with_disruptive(true);

    let mut out = String::new();
    out.push_str("z,ebis_0,enbis_0");
    if include_disrupted {
        out.push_str(",ebis_d,enbis_d");
    }
    out.push('\n');
    for &z in &grid {
        let b = curve_point(z, &baseline)?;
        let _ = write!(
            out,
            "{},{},{}",
            fmt_num(z),
            fmt_num(b.ebis),
            fmt_num(b.enbis)
        );
        if include_disrupted {
            let d = curve_point(z, &disrupted)?;
            let _ = write!(out, ",{},{}", fmt_num(d.ebis), fmt_num(d.enbis));
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "# z_star_0={}",
        fmt_num(closed_form_optimum(&baseline))
    );
    if include_disrupted {
        let _ = writeln!(
            out,
            "# z_star_d={}",
            fmt_num(closed_form_optimum(&disrupted))
        );
    }
    Ok(out)
}

/// The mixed pre/post-switch curve, one row per grid index.
pub fn emit_mix_csv(
    pre: &PeriodSpec,
    post: &PeriodSpec,
    switch_index: usize,
    z_grid: &[f64],
) -> Result<String> {
    let curve = ebis_mix_curve(pre, post, switch_index, z_grid)?;
    let mut out = String::from("index,branch,z,ebis\n");
    for p in &curve.points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            p.index,
            p.branch.as_str(),
            fmt_num(p.point.z),
            fmt_num(p.point.ebis)
        );
    }
    let _ = writeln!(out, "# switch_index={}", curve.switch_index);
    if let Some(jump) = curve.jump {
        let _ = writeln!(out, "# jump={}", fmt_num(jump));
    }
    Ok(out)
}

pub fn emit_sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(
        "alpha,beta,vulnerability,loss,z_star_baseline,z_star_disrupted,shift_direction\n",
    );
    for r in records {
        let p = &r.parameters;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_num(p.alpha),
            fmt_num(p.beta),
            fmt_num(p.vulnerability),
            fmt_num(p.loss),
            fmt_num(r.z_star_baseline),
            fmt_num(r.z_star_disrupted),
            r.shift_direction
        );
    }
    out
}

const SVG_WIDTH: f64 = 640.0;
const SVG_HEIGHT: f64 = 400.0;
const SVG_MARGIN: f64 = 40.0;
const SVG_COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"];

/// Draws every numeric column of an emitted CSV against its `z` column.
pub fn svg_from_csv(csv: &str) -> Result<String> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::contract("CSV has no header"))?
        .split(',')
        .collect();
    let x_col = header
        .iter()
        .position(|&h| h == "z")
        .ok_or_else(|| Error::contract("CSV has no z column"))?;
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let series: Vec<usize> = (0..header.len())
        .filter(|&c| c != x_col && header[c] != "index")
        .filter(|&c| rows.iter().all(|r| r[c].parse::<f64>().is_ok()))
        .collect();

    let num = |r: &[&str], c: usize| r[c].parse::<f64>().unwrap_or(0.0);
    let xs: Vec<f64> = rows.iter().map(|r| num(r, x_col)).collect();
    let ys = series
        .iter()
        .flat_map(|&c| rows.iter().map(move |r| num(r, c)));
    let (x_lo, x_hi) = bounds(xs.iter().copied());
    let (y_lo, y_hi) = bounds(ys);

    let sx = |x: f64| SVG_MARGIN + (x - x_lo) / (x_hi - x_lo) * (SVG_WIDTH - 2.0 * SVG_MARGIN);
    let sy = |y: f64| {
        SVG_HEIGHT - SVG_MARGIN - (y - y_lo) / (y_hi - y_lo) * (SVG_HEIGHT - 2.0 * SVG_MARGIN)
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="{m}" y="{m}" width="{w}" height="{h}" fill="none" stroke="gray"/>"#,
        m = SVG_MARGIN,
        w = SVG_WIDTH - 2.0 * SVG_MARGIN,
        h = SVG_HEIGHT - 2.0 * SVG_MARGIN
    );
    for (k, &c) in series.iter().enumerate() {
        let color = SVG_COLORS[k % SVG_COLORS.len()];
        let points: Vec<String> = rows
            .iter()
            .zip(&xs)
            .map(|(r, &x)| format!("{:.2},{:.2}", sx(x), sy(num(r, c))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="{color}">{}</text>"#,
            SVG_MARGIN + 8.0,
            SVG_MARGIN + 16.0 * (k as f64 + 1.0),
            header[c]
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}
