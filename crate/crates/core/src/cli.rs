//! Command-line front end. Data goes to `out`, diagnostics to `err`.
//!
//! Exit codes: 0 on success, 1 on domain or contract errors, 2 on usage
//! errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    check_equal_duration, check_same_exposure, classify_disruptive, delta_z, proposition_sweep,
    SweepGrid, DEFAULT_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::io::{
    emit_curve_csv, emit_mix_csv, emit_sweep_csv, fmt_num, parse_scenario_document, svg_from_csv,
    uniform_grid, ScenarioDocument,
};
use crate::model::{InvestmentPlan, PeriodSpec, TechnologyProfile};
use crate::optimizer::optimize_scenario;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "secinvest",
    version,
    about = "Optimal security investment under disruptive technology"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal per-period investment for a scenario file.
    Optimize { scenario: PathBuf },
    /// EBIS/ENBIS curves of one period as CSV.
    Curve {
        #[command(flatten)]
        period: PeriodArgs,
        #[command(flatten)]
        range: RangeArgs,
        /// Add the d = 1 curves next to the d = 0 ones.
        #[arg(long)]
        with_disrupted: bool,
        /// Also draw the curves as SVG.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// EBIS across a switch to a disruptive technology as CSV.
    MixCurve {
        #[command(flatten)]
        period: PeriodArgs,
        #[command(flatten)]
        range: RangeArgs,
        /// Grid index at which the disruptive technology takes over.
        #[arg(long)]
        switch_index: usize,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Compare cumulative ENBIS of two equal-duration scenarios.
    DeltaZ {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Optimize both scenarios before comparing instead of using the
        /// investments in the files.
        #[arg(long)]
        optimize: bool,
        /// Require identical vulnerability and loss in every period.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD, allow_negative_numbers = true)]
        threshold: f64,
    },
    /// Direction of the optimum shift under disruption over a parameter grid.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        beta: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        vulnerability: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        loss: Vec<f64>,
    },
}

#[derive(Debug, Args)]
struct PeriodArgs {
    #[arg(long)]
    vulnerability: f64,
    #[arg(long)]
    loss: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

impl PeriodArgs {
    fn baseline(&self) -> Result<PeriodSpec> {
        let tech = TechnologyProfile::new(self.alpha, self.beta, false)?;
        PeriodSpec::new(self.vulnerability, self.loss, tech)
    }
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[arg(long, default_value_t = 0.0)]
    z_min: f64,
    /// Defaults to the expected loss v * L.
    #[arg(long)]
    z_max: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
}

impl RangeArgs {
    fn z_max_for(&self, period: &PeriodSpec) -> f64 {
        self.z_max.unwrap_or_else(|| period.expected_loss())
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_FAILURE;
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn execute(command: Command) -> Result<String> {
    match command {
        Command::Optimize { scenario } => run_optimize(&scenario),
        Command::Curve {
            period,
            range,
            with_disrupted,
            svg,
        } => {
            let p = period.baseline()?;
            let csv = emit_curve_csv(
                &p,
                range.z_min,
                range.z_max_for(&p),
                range.steps,
                with_disrupted,
            )?;
            write_svg(svg.as_deref(), &csv)?;
            Ok(csv)
        }
        Command::MixCurve {
            period,
            range,
            switch_index,
            svg,
        } => {
            let pre = period.baseline()?;
            let grid = uniform_grid(range.z_min, range.z_max_for(&pre), range.steps)?;
            let csv = emit_mix_csv(&pre, &pre.with_disruptive(true), switch_index, &grid)?;
            write_svg(svg.as_deref(), &csv)?;
            Ok(csv)
        }
        Command::DeltaZ {
            file_a,
            file_b,
            optimize,
            strict,
            threshold,
        } => run_delta_z(&file_a, &file_b, optimize, strict, threshold),
        Command::Sweep {
            alpha,
            beta,
            vulnerability,
            loss,
        } => {
            let grid = SweepGrid {
                alphas: alpha,
                betas: beta,
                vulnerabilities: vulnerability,
                losses: loss,
            };
            Ok(emit_sweep_csv(&proposition_sweep(&grid)?))
        }
    }
}

fn read_document(path: &Path) -> Result<ScenarioDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::contract(format!("cannot read {}: {e}", path.display())))?;
    parse_scenario_document(&text).map_err(|e| match e {
        Error::Parse { .. } => Error::contract(format!("{}: {e}", path.display())),
        other => other,
    })
}

fn write_svg(path: Option<&Path>, csv: &str) -> Result<()> {
    if let Some(path) = path {
        let svg = svg_from_csv(csv)?;
        std::fs::write(path, svg)
            .map_err(|e| Error::contract(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run_optimize(path: &Path) -> Result<String> {
    let doc = read_document(path)?;
    let result = optimize_scenario(&doc.scenario);
    let mut out = String::new();
    let _ = writeln!(out, "label: {}", doc.scenario.label());
    let _ = writeln!(out, "horizon: {}", doc.scenario.horizon());
    for (i, p) in result.per_period.iter().enumerate() {
        let _ = writeln!(
            out,
            "period[{i}]: z_star={} breach_probability={} ebis={} enbis={} method={}",
            fmt_num(p.z_star),
            fmt_num(p.breach_probability_at_optimum),
            fmt_num(p.ebis_at_optimum),
            fmt_num(p.enbis_at_optimum),
            p.method
        );
    }
    let _ = writeln!(out, "enbis_total: {}", fmt_num(result.enbis_total));
    Ok(out)
}

fn run_delta_z(
    path_a: &Path,
    path_b: &Path,
    optimize: bool,
    strict: bool,
    threshold: f64,
) -> Result<String> {
    let a = read_document(path_a)?;
    let b = read_document(path_b)?;
    check_equal_duration(&a.scenario, &b.scenario)?;
    if strict {
        check_same_exposure(&a.scenario, &b.scenario)?;
    }

    let plans = |doc: &ScenarioDocument, path: &Path| -> Result<InvestmentPlan> {
        if optimize {
            Ok(optimize_scenario(&doc.scenario).plan)
        } else {
            doc.plan.clone().ok_or_else(|| {
                Error::contract(format!(
                    "{} carries no investments; add them to every period or pass --optimize",
                    path.display()
                ))
            })
        }
    };
    let plan_a = plans(&a, path_a)?;
    let plan_b = plans(&b, path_b)?;

    let mut report = delta_z(&a.scenario, &plan_a, &b.scenario, &plan_b)?;
    classify_disruptive(&mut report, threshold)?;

    let join = |plan: &InvestmentPlan| {
        plan.amounts()
            .iter()
            .map(|&z| fmt_num(z))
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = String::new();
    let _ = writeln!(out, "label_a: {}", a.scenario.label());
    let _ = writeln!(out, "label_b: {}", b.scenario.label());
    let _ = writeln!(
        out,
        "mode: {}",
        if optimize { "optimized" } else { "given" }
    );
    let _ = writeln!(out, "period_count: {}", report.period_count);
    let _ = writeln!(out, "plan_a: {}", join(&plan_a));
    let _ = writeln!(out, "plan_b: {}", join(&plan_b));
    let _ = writeln!(out, "enbis_a: {}", fmt_num(report.enbis_a));
    let _ = writeln!(out, "enbis_b: {}", fmt_num(report.enbis_b));
    let _ = writeln!(out, "delta_z: {}", fmt_num(report.delta_z));
    let _ = writeln!(out, "threshold: {}", fmt_num(report.threshold_used));
    let _ = writeln!(
        out,
        "classified_disruptive: {}",
        report.classified_disruptive
    );
    Ok(out)
}
