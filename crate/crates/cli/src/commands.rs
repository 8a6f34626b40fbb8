//! Subcommand implementations. Each returns the full report text so callers
//! decide where it goes.

use std::fmt::Write as _;

use rayon::prelude::*;

use qchan::format::format_sig;
use qchan::simulate::{validate_against, Validation};
use qchan::{
    capacity, capacity_derivative, cutoff_rate, cutoff_rate_derivative, design, dispersion, estimate_matrix, ppv_blep,
    ppv_surrogate, ppv_surrogate_derivative, transition_matrix, ChannelParams, Criterion, DesignResult, McConfig,
    Objective, OptimizerConfig, Quantizer, TransitionMatrix,
};

use crate::config::Config;
use crate::error::CliError;

pub const BOUNDS_HEADER: &str = "sigma_ratio,criterion,thresholds,capacity,cutoff_rate,dispersion,ppv_blep";
pub const DESIGN_HEADER: &str =
    "criterion,thresholds,objective,capacity,cutoff_rate,dispersion,ppv_blep,iterations,fallback";
pub const DERIVATIVES_HEADER: &str = "a1,capacity,dcapacity,cutoff_rate,dcutoff_rate,ppv_surrogate,dppv_surrogate";
pub const VALIDATE_HEADER: &str = "input,output,analytic,empirical,count,z_score,status";

const SIG: usize = 12;

fn num(x: f64) -> String {
    format_sig(x, SIG)
}

fn join_thresholds(q: &Quantizer<f64>, fmt: impl Fn(f64) -> String) -> String {
    q.boundaries().iter().map(|b| fmt(*b)).collect::<Vec<_>>().join(";")
}

fn optimizer_config(cfg: &Config, params: &ChannelParams<f64>) -> OptimizerConfig<f64> {
    let mut opt = OptimizerConfig::for_params(params);
    opt.lloyd_bac_weights = cfg.lloyd_bac_weights;
    opt
}

fn run_designer(
    cfg: &Config,
    params: &ChannelParams<f64>,
    criterion: Criterion,
) -> Result<DesignResult<f64>, CliError> {
    let objective = Objective::from_criterion(criterion, cfg.blocklength, cfg.rate);
    Ok(design(params, cfg.levels, &objective, &optimizer_config(cfg, params))?)
}

/// Quantizer used by single-quantizer commands: the fixed `thresholds` if
/// configured, otherwise the design for `criterion`.
fn chosen_quantizer(cfg: &Config, params: &ChannelParams<f64>) -> Result<Quantizer<f64>, CliError> {
    match &cfg.thresholds {
        Some(t) => Ok(Quantizer::new(t.clone())?),
        None => Ok(run_designer(cfg, params, cfg.criterion)?.quantizer),
    }
}

struct Metrics {
    capacity: f64,
    cutoff_rate: f64,
    dispersion: f64,
    blep: f64,
}

fn metrics(cfg: &Config, m: &TransitionMatrix<f64>) -> Metrics {
    Metrics {
        capacity: capacity(m),
        cutoff_rate: cutoff_rate(m),
        dispersion: dispersion(m),
        blep: ppv_blep(m, cfg.blocklength, cfg.rate),
    }
}

/// Sweep over `sigma_ratio_grid`: one row per grid point and criterion.
pub fn bounds(cfg: &Config) -> Result<String, CliError> {
    if cfg.sigmas.is_some() {
        return Err(CliError::Usage("sigma0/sigma1 cannot be combined with a sigma_ratio_grid sweep".into()));
    }
    let rows: Vec<Result<String, CliError>> = cfg
        .sigma_ratio_grid
        .par_iter()
        .map(|&ratio| {
            let params = cfg.params_at(ratio)?;
            let mut block = String::new();
            if let Some(t) = &cfg.thresholds {
                let q = Quantizer::new(t.clone())?;
                push_bounds_row(&mut block, cfg, ratio, "fixed", &q, &params)?;
            } else {
                for &criterion in &cfg.criteria {
                    let d = run_designer(cfg, &params, criterion)?;
                    push_bounds_row(&mut block, cfg, ratio, criterion.as_str(), &d.quantizer, &params)?;
                }
            }
            Ok(block)
        })
        .collect();
    let mut out = String::from(BOUNDS_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row?);
    }
    Ok(out)
}

fn push_bounds_row(
    out: &mut String,
    cfg: &Config,
    ratio: f64,
    label: &str,
    q: &Quantizer<f64>,
    params: &ChannelParams<f64>,
) -> Result<(), CliError> {
    let m = metrics(cfg, &transition_matrix(params, q)?);
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        num(ratio),
        label,
        join_thresholds(q, num),
        num(m.capacity),
        num(m.cutoff_rate),
        num(m.dispersion),
        num(m.blep)
    )
    .expect("write to string");
    Ok(())
}

/// Per-criterion thresholds and diagnostics for one parameter set.
/// Thresholds are printed in shortest round-trip form so they can be fed
/// back as a fixed quantizer.
pub fn design_report(cfg: &Config) -> Result<String, CliError> {
    let params = cfg.params()?;
    let mut out = String::from(DESIGN_HEADER);
    out.push('\n');
    let shortest = |x: f64| format!("{x}");
    if let Some(t) = &cfg.thresholds {
        let q = Quantizer::new(t.clone())?;
        let m = metrics(cfg, &transition_matrix(&params, &q)?);
        writeln!(
            out,
            "fixed,{},,{},{},{},{},0,none",
            join_thresholds(&q, shortest),
            num(m.capacity),
            num(m.cutoff_rate),
            num(m.dispersion),
            num(m.blep)
        )
        .expect("write to string");
        return Ok(out);
    }
    let designs: Vec<Result<DesignResult<f64>, CliError>> =
        cfg.criteria.par_iter().map(|&c| run_designer(cfg, &params, c)).collect();
    for d in designs {
        let d = d?;
        let m = metrics(cfg, &transition_matrix(&params, &d.quantizer)?);
        let fallback = if d.diagnostics.ppv_infeasible { "ppv_infeasible" } else { d.diagnostics.fallback.as_str() };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            d.criterion,
            join_thresholds(&d.quantizer, shortest),
            num(d.objective_value),
            num(m.capacity),
            num(m.cutoff_rate),
            num(m.dispersion),
            num(m.blep),
            d.iterations,
            fallback
        )
        .expect("write to string");
    }
    Ok(out)
}

/// Closed-form threshold derivatives of the three 1-bit bounds on an evenly
/// spaced `a1` grid (default `[mu0, mu1]`).
pub fn derivatives(cfg: &Config) -> Result<String, CliError> {
    let params = cfg.params()?;
    let (lo, hi) = cfg.derivative_range.unwrap_or((params.mu0, params.mu1));
    let points = cfg.derivative_points;
    let step = (hi - lo) / (points - 1) as f64;
    let mut out = String::from(DERIVATIVES_HEADER);
    out.push('\n');
    for i in 0..points {
        let a = if i + 1 == points { hi } else { lo + step * i as f64 };
        let m = transition_matrix(&params, &Quantizer::one_bit(a)?)?;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            num(a),
            num(capacity(&m)),
            num(capacity_derivative(&params, a).0),
            num(cutoff_rate(&m)),
            num(cutoff_rate_derivative(&params, a).0),
            num(ppv_surrogate(&m, cfg.rate)),
            num(ppv_surrogate_derivative(&params, a, cfg.rate))
        )
        .expect("write to string");
    }
    Ok(out)
}

/// Monte Carlo check of the analytic transition matrix. Returns the report
/// and whether every check passed.
pub fn validate(cfg: &Config) -> Result<(String, bool), CliError> {
    let params = cfg.params()?;
    let q = chosen_quantizer(cfg, &params)?;
    let analytic = transition_matrix(&params, &q)?;
    let report = estimate_matrix(&params, &q, &McConfig::new(cfg.seed, cfg.samples))?;
    let v = validate_against(&report, &analytic, cfg.z_limit, cfg.significance);
    let mut out = String::new();
    writeln!(out, "{VALIDATE_HEADER}").expect("write to string");
    for e in &v.entries {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            e.input,
            e.output,
            num(e.analytic),
            num(e.empirical),
            e.count,
            num(e.z_score),
            if e.pass { "PASS" } else { "FAIL" }
        )
        .expect("write to string");
    }
    write_summary(&mut out, cfg, &q, &report, &v);
    Ok((out, v.pass()))
}

fn write_summary(out: &mut String, cfg: &Config, q: &Quantizer<f64>, report: &qchan::McReport<f64>, v: &Validation) {
    let lines = [
        ("thresholds", join_thresholds(q, num)),
        ("seed", cfg.seed.to_string()),
        ("samples", report.samples_drawn.to_string()),
        ("raw_ber", num(report.raw_ber)),
        ("raw_ber_half_width", num(report.raw_ber_half_width)),
        ("chi_square", num(v.chi_square)),
        ("degrees_of_freedom", v.degrees_of_freedom.to_string()),
        ("p_value", num(v.p_value)),
        ("significance", num(v.significance)),
        ("z_limit", num(v.z_limit)),
        ("chi_square_result", if v.chi_square_pass() { "PASS" } else { "FAIL" }.to_string()),
        ("result", if v.pass() { "PASS" } else { "FAIL" }.to_string()),
    ];
    out.push('\n');
    for (k, val) in lines {
        writeln!(out, "{k},{val}").expect("write to string");
    }
}

/// Writes raw samples for the configured quantizer to `path`.
pub fn export_samples(cfg: &Config, path: &std::path::Path) -> Result<(), CliError> {
    let params = cfg.params()?;
    let q = chosen_quantizer(cfg, &params)?;
    let mut mc = McConfig::new(cfg.seed, cfg.samples);
    mc.record_resistance = cfg.include_resistance;
    qchan::export_samples(&params, &q, &mc, path)?;
    Ok(())
}
