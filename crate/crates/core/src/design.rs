//! Quantizer threshold design.
//!
//! 1-bit designers locate stationary points of the closed-form (capacity,
//! cutoff rate) or numerical (finite blocklength surrogate) derivative by
//! grid scan plus bisection, then keep the best candidate. Lloyd-Max runs
//! the classic centroid/midpoint iteration on the channel-output mixture.
//! Multi-level designs use cyclic coordinate ascent with golden-section
//! line searches.

use std::fmt;
use std::str::FromStr;

use crate::bounds::{
    blep_from, capacity, capacity_derivative, cutoff_rate, cutoff_rate_derivative, dispersion,
    ppv_surrogate_derivative, surrogate_from,
};
use crate::channel::{
    crossover_probs_unchecked, transition_matrix_unchecked, ChannelParams, Quantizer, TransitionMatrix,
};
use crate::error::{Error, Result};
use crate::numerics::{normal_pdf, q};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    Capacity,
    CutoffRate,
    PpvBlep,
    LloydMax,
}

impl Criterion {
    pub const ALL: [Criterion; 4] =
        [Criterion::Capacity, Criterion::CutoffRate, Criterion::PpvBlep, Criterion::LloydMax];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Capacity => "capacity",
            Criterion::CutoffRate => "cutoff_rate",
            Criterion::PpvBlep => "ppv_blep",
            Criterion::LloydMax => "lloyd_max",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::invalid("criterion", format!("unknown criterion `{s}`")))
    }
}

/// Design objective: a criterion plus whatever it needs to be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective<T> {
    Capacity,
    CutoffRate,
    /// Minimize the normal-approximation block error probability.
    PpvBlep {
        blocklength: u64,
        rate: T,
    },
    /// Minimize the mean squared reconstruction error.
    LloydMax,
}

impl<T: Real> Objective<T> {
    pub fn criterion(&self) -> Criterion {
        match self {
            Objective::Capacity => Criterion::Capacity,
            Objective::CutoffRate => Criterion::CutoffRate,
            Objective::PpvBlep { .. } => Criterion::PpvBlep,
            Objective::LloydMax => Criterion::LloydMax,
        }
    }

    /// Builds the objective for `criterion`; the finite blocklength pair is
    /// used only by [`Criterion::PpvBlep`].
    pub fn from_criterion(criterion: Criterion, blocklength: u64, rate: T) -> Self {
        match criterion {
            Criterion::Capacity => Objective::Capacity,
            Criterion::CutoffRate => Objective::CutoffRate,
            Criterion::PpvBlep => Objective::PpvBlep { blocklength, rate },
            Criterion::LloydMax => Objective::LloydMax,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig<T> {
    pub bracket_lo: T,
    pub bracket_hi: T,
    /// Threshold tolerance in kΩ.
    pub tol_a: T,
    pub max_iter: usize,
    /// Step of the central differences used by the finite blocklength designer.
    pub fd_step: T,
    /// Points of the sign-change scan that precedes bisection.
    pub grid_points: usize,
    /// Weight the Lloyd-Max mixture by the post-BAC priors instead of 1/2 each.
    pub lloyd_bac_weights: bool,
}

impl<T: Real> OptimizerConfig<T> {
    /// Defaults relative to the channel: bracket `[mu0, mu1]`,
    /// `tol_a = 1e-9 (mu1 - mu0)`, `fd_step = 1e-5 (mu1 - mu0)`.
    pub fn for_params(params: &ChannelParams<T>) -> Self {
        let span = params.mu1 - params.mu0;
        OptimizerConfig {
            bracket_lo: params.mu0,
            bracket_hi: params.mu1,
            tol_a: T::lit(1e-9) * span,
            max_iter: 200,
            fd_step: T::lit(1e-5) * span,
            grid_points: 512,
            lloyd_bac_weights: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bracket_lo < self.bracket_hi) || !self.bracket_lo.is_finite() || !self.bracket_hi.is_finite() {
            return Err(Error::invalid(
                "bracket",
                format!("[{}, {}] is not a finite increasing interval", self.bracket_lo, self.bracket_hi),
            ));
        }
        if !(self.tol_a > T::zero()) {
            return Err(Error::invalid("tol_a", "must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter", "must be at least 1"));
        }
        if !(self.fd_step > T::zero()) {
            return Err(Error::invalid("fd_step", "must be positive"));
        }
        if self.grid_points < 2 {
            return Err(Error::invalid("grid_points", "must be at least 2"));
        }
        Ok(())
    }
}

/// How the stationary-point search found its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    /// Sign change found on the configured bracket.
    None,
    /// Sign change found only after widening to `[mu0 - 3 sigma0, mu1 + 3 sigma1]`.
    WidenedBracket,
    /// No sign change anywhere; grid argmax refined by golden section.
    GridScan,
}

impl Fallback {
    pub fn as_str(self) -> &'static str {
        match self {
            Fallback::None => "none",
            Fallback::WidenedBracket => "widened_bracket",
            Fallback::GridScan => "grid_scan",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics<T> {
    /// Search interval actually used.
    pub bracket: (T, T),
    /// Derivative (or gradient max-norm for multi-level) at the result.
    pub residual_derivative: T,
    pub roots_found: usize,
    pub fallback: Fallback,
    /// Finite blocklength design fell back to the capacity-max threshold
    /// because `C <= R` over the whole bracket.
    pub ppv_infeasible: bool,
    /// Maximized score after each coordinate-ascent sweep (multi-level only).
    pub sweep_history: Vec<T>,
}

impl<T: Real> Diagnostics<T> {
    fn new(bracket: (T, T)) -> Self {
        Diagnostics {
            bracket,
            residual_derivative: T::zero(),
            roots_found: 0,
            fallback: Fallback::None,
            ppv_infeasible: false,
            sweep_history: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignResult<T> {
    pub quantizer: Quantizer<T>,
    /// Criterion value at the returned quantizer: `Cq`, `R0`, `P_B` or MSE.
    pub objective_value: T,
    pub criterion: Criterion,
    pub iterations: usize,
    pub diagnostics: Diagnostics<T>,
}

impl<T: Real> DesignResult<T> {
    /// Threshold of a 1-bit design (first boundary otherwise).
    pub fn threshold(&self) -> T {
        self.quantizer.boundaries()[0]
    }
}

/// Final bracket of a bisection run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub x: T,
    pub lo: T,
    pub hi: T,
    pub iterations: usize,
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Stops once the bracket is no wider than `tol` (or cannot be split
/// further) and returns its midpoint.
pub fn bisect_root<T: Real, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, tol: T, max_iter: usize) -> Result<Root<T>> {
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == T::zero() {
        return Ok(Root { x: lo, lo, hi: lo, iterations: 0 });
    }
    if f_hi == T::zero() {
        return Ok(Root { x: hi, lo: hi, hi, iterations: 0 });
    }
    if !f_lo.is_finite() || !f_hi.is_finite() || f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo: lo.as_f64(), hi: hi.as_f64(), f_lo: f_lo.as_f64(), f_hi: f_hi.as_f64() });
    }
    let half = T::lit(0.5);
    let mut iterations = 0;
    while hi - lo > tol {
        if iterations >= max_iter {
            return Err(Error::Convergence { iterations, lo: lo.as_f64(), hi: hi.as_f64() });
        }
        let mid = half * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        iterations += 1;
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return Ok(Root { x: mid, lo: mid, hi: mid, iterations });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(Root { x: half * (lo + hi), lo, hi, iterations })
}

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`.
fn golden_max<T: Real, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, tol: T, max_iter: usize) -> (T, T) {
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if b - a <= tol || !(c < d) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn grid<T: Real>(lo: T, hi: T, points: usize) -> impl Iterator<Item = T> {
    let steps = T::from_usize(points).expect("grid size representable");
    (0..=points).map(move |k| {
        if k == points {
            hi
        } else {
            lo + (hi - lo) * T::from_usize(k).expect("grid index representable") / steps
        }
    })
}

/// Roots of `derivative` on `[lo, hi]` found by scanning for sign changes
/// and bisecting each one. Returns `(x, iterations)` pairs.
fn scan_roots<T: Real, D: Fn(T) -> T>(derivative: &D, lo: T, hi: T, cfg: &OptimizerConfig<T>) -> Result<Vec<Root<T>>> {
    let xs: Vec<T> = grid(lo, hi, cfg.grid_points).collect();
    let fs: Vec<T> = xs.iter().map(|&x| derivative(x)).collect();
    let mut roots = Vec::new();
    for k in 0..xs.len() {
        if fs[k] == T::zero() {
            roots.push(Root { x: xs[k], lo: xs[k], hi: xs[k], iterations: 0 });
            continue;
        }
        if k + 1 < xs.len()
            && fs[k + 1] != T::zero()
            && fs[k].is_finite()
            && fs[k + 1].is_finite()
            && fs[k].signum() != fs[k + 1].signum()
        {
            roots.push(bisect_root(derivative, xs[k], xs[k + 1], cfg.tol_a, cfg.max_iter)?);
        }
    }
    Ok(roots)
}

/// Maximizes `score` over a 1-bit threshold through the stationary points of
/// `derivative`.
fn design_stationary<T, D, S>(
    params: &ChannelParams<T>,
    cfg: &OptimizerConfig<T>,
    derivative: D,
    score: S,
) -> Result<(T, usize, Diagnostics<T>)>
where
    T: Real,
    D: Fn(T) -> T,
    S: Fn(T) -> T,
{
    cfg.validate()?;
    let three = T::lit(3.0);
    let mut bracket = (cfg.bracket_lo, cfg.bracket_hi);
    let mut fallback = Fallback::None;
    let mut roots = scan_roots(&derivative, bracket.0, bracket.1, cfg)?;
    if roots.is_empty() {
        bracket =
            (bracket.0.min(params.mu0 - three * params.sigma0), bracket.1.max(params.mu1 + three * params.sigma1));
        fallback = Fallback::WidenedBracket;
        roots = scan_roots(&derivative, bracket.0, bracket.1, cfg)?;
    }
    let roots_found = roots.len();

    let mut candidates: Vec<(T, usize)> = roots.iter().map(|r| (r.x, r.iterations)).collect();
    if roots.is_empty() {
        fallback = Fallback::GridScan;
        let steps = T::from_usize(cfg.grid_points).expect("grid size representable");
        let h = (bracket.1 - bracket.0) / steps;
        let best = grid(bracket.0, bracket.1, cfg.grid_points)
            .map(|x| (x, score(x)))
            .fold((bracket.0, T::neg_infinity()), |acc, c| if c.1 > acc.1 { c } else { acc });
        let lo = (best.0 - h).max(bracket.0);
        let hi = (best.0 + h).min(bracket.1);
        let (x, _) = golden_max(&score, lo, hi, cfg.tol_a, cfg.max_iter);
        candidates.push((x, cfg.max_iter.min(100)));
        candidates.push((best.0, 0));
    }
    candidates.push((bracket.0, 0));
    candidates.push((bracket.1, 0));

    let mut best = candidates[0];
    let mut best_score = score(best.0);
    for &cand in &candidates[1..] {
        let s = score(cand.0);
        if s > best_score {
            best = cand;
            best_score = s;
        }
    }
    let mut diagnostics = Diagnostics::new(bracket);
    diagnostics.roots_found = roots_found;
    diagnostics.fallback = fallback;
    diagnostics.residual_derivative = derivative(best.0);
    Ok((best.0, best.1, diagnostics))
}

fn one_bit_matrix<T: Real>(params: &ChannelParams<T>, a1: T) -> TransitionMatrix<T> {
    transition_matrix_unchecked(params, &Quantizer { boundaries: vec![a1] })
}

/// Mixture weights of the Lloyd-Max source density.
fn lloyd_weights<T: Real>(params: &ChannelParams<T>, bac_weights: bool) -> [T; 2] {
    if bac_weights {
        let cp = crossover_probs_unchecked(params);
        let half = T::lit(0.5);
        [(cp.q0 + cp.p1) * half, (cp.p0 + cp.q1) * half]
    } else {
        [T::lit(0.5); 2]
    }
}

/// Probability mass and first moment of the weighted mixture on each
/// quantizer interval.
fn interval_moments<T: Real>(params: &ChannelParams<T>, weights: &[T; 2], boundaries: &[T]) -> (Vec<T>, Vec<T>) {
    let n = boundaries.len() + 1;
    let mut mass = vec![T::zero(); n];
    let mut moment = vec![T::zero(); n];
    for c in 0..2 {
        let (mu, sigma, w) = (params.mean(c), params.sigma(c), weights[c]);
        // CDF and density at each edge, including the infinite ends
        let mut cdf = Vec::with_capacity(n + 1);
        let mut pdf = Vec::with_capacity(n + 1);
        cdf.push(T::zero());
        pdf.push(T::zero());
        for &a in boundaries {
            let z = (a - mu) / sigma;
            cdf.push(q(-z));
            pdf.push(normal_pdf(z));
        }
        cdf.push(T::one());
        pdf.push(T::zero());
        for j in 0..n {
            let m = (cdf[j + 1] - cdf[j]).max(T::zero());
            mass[j] = mass[j] + w * m;
            moment[j] = moment[j] + w * (mu * m + sigma * (pdf[j] - pdf[j + 1]));
        }
    }
    (mass, moment)
}

/// Mean squared error of the mixture reconstructed at interval centroids.
pub(crate) fn lloyd_mse<T: Real>(params: &ChannelParams<T>, weights: &[T; 2], boundaries: &[T]) -> T {
    let second: T =
        (0..2).map(|c| weights[c] * (params.mean(c) * params.mean(c) + params.sigma(c) * params.sigma(c))).sum();
    let (mass, moment) = interval_moments(params, weights, boundaries);
    let explained: T = mass.iter().zip(&moment).filter(|(&m, _)| m > T::zero()).map(|(&m, &s)| s * s / m).sum();
    (second - explained).max(T::zero())
}

fn score<T: Real>(params: &ChannelParams<T>, objective: &Objective<T>, lloyd_weights: &[T; 2], boundaries: &[T]) -> T {
    if let Objective::LloydMax = objective {
        return -lloyd_mse(params, lloyd_weights, boundaries);
    }
    let m = transition_matrix_unchecked(params, &Quantizer { boundaries: boundaries.to_vec() });
    match objective {
        Objective::Capacity => capacity(&m),
        Objective::CutoffRate => cutoff_rate(&m),
        Objective::PpvBlep { rate, .. } => surrogate_from(capacity(&m), dispersion(&m), *rate),
        Objective::LloydMax => unreachable!(),
    }
}

/// Criterion value of `quantizer`: `Cq`, `R0`, `P_B` or the Lloyd-Max MSE.
pub fn evaluate_objective<T: Real>(
    params: &ChannelParams<T>,
    quantizer: &Quantizer<T>,
    objective: &Objective<T>,
    cfg: &OptimizerConfig<T>,
) -> T {
    match objective {
        Objective::LloydMax => lloyd_mse(params, &lloyd_weights(params, cfg.lloyd_bac_weights), quantizer.boundaries()),
        Objective::PpvBlep { blocklength, rate } => {
            let m = transition_matrix_unchecked(params, quantizer);
            blep_from(capacity(&m), dispersion(&m), *blocklength, *rate)
        }
        _ => score(params, objective, &[T::zero(); 2], quantizer.boundaries()),
    }
}

fn finish<T: Real>(
    params: &ChannelParams<T>,
    a1: T,
    objective: Objective<T>,
    iterations: usize,
    diagnostics: Diagnostics<T>,
    cfg: &OptimizerConfig<T>,
) -> Result<DesignResult<T>> {
    let quantizer = Quantizer::one_bit(a1)?;
    let objective_value = evaluate_objective(params, &quantizer, &objective, cfg);
    Ok(DesignResult { quantizer, objective_value, criterion: objective.criterion(), iterations, diagnostics })
}

/// Capacity-maximizing 1-bit threshold.
pub fn design_capacity_max<T: Real>(params: &ChannelParams<T>, cfg: &OptimizerConfig<T>) -> Result<DesignResult<T>> {
    params.validate()?;
    let (a1, iterations, diagnostics) =
        design_stationary(params, cfg, |a| capacity_derivative(params, a).0, |a| capacity(&one_bit_matrix(params, a)))?;
    finish(params, a1, Objective::Capacity, iterations, diagnostics, cfg)
}

/// Cutoff-rate-maximizing 1-bit threshold.
pub fn design_cutoff_max<T: Real>(params: &ChannelParams<T>, cfg: &OptimizerConfig<T>) -> Result<DesignResult<T>> {
    params.validate()?;
    let (a1, iterations, diagnostics) = design_stationary(
        params,
        cfg,
        |a| cutoff_rate_derivative(params, a).0,
        |a| cutoff_rate(&one_bit_matrix(params, a)),
    )?;
    finish(params, a1, Objective::CutoffRate, iterations, diagnostics, cfg)
}

/// 1-bit threshold minimizing the normal-approximation block error
/// probability at blocklength `blocklength` and rate `rate`.
///
/// Maximizes `(C - R) / sqrt(V)`, which orders thresholds exactly as `P_B`
/// does but does not underflow.
pub fn design_ppv_min<T: Real>(
    params: &ChannelParams<T>,
    blocklength: u64,
    rate: T,
    cfg: &OptimizerConfig<T>,
) -> Result<DesignResult<T>> {
    params.validate()?;
    if blocklength == 0 {
        return Err(Error::invalid("blocklength", "must be at least 1"));
    }
    if !(rate < T::one()) || !rate.is_finite() {
        return Err(Error::invalid("rate", format!("{rate} must be below 1")));
    }
    let objective = Objective::PpvBlep { blocklength, rate };
    let cap = design_capacity_max(params, cfg)?;
    if cap.objective_value <= rate {
        let threshold = cap.threshold();
        let mut diagnostics = cap.diagnostics;
        diagnostics.ppv_infeasible = true;
        return finish(params, threshold, objective, cap.iterations, diagnostics, cfg);
    }
    let surrogate = |a: T| {
        let m = one_bit_matrix(params, a);
        surrogate_from(capacity(&m), dispersion(&m), rate)
    };
    let (a1, iterations, diagnostics) =
        design_stationary(params, cfg, |a| ppv_surrogate_derivative(params, a, rate), surrogate)?;
    finish(params, a1, objective, iterations, diagnostics, cfg)
}

/// 1-bit Lloyd-Max (MMSE) threshold of the channel-output mixture.
pub fn design_lloyd_max<T: Real>(params: &ChannelParams<T>, cfg: &OptimizerConfig<T>) -> Result<DesignResult<T>> {
    params.validate()?;
    cfg.validate()?;
    let weights = lloyd_weights(params, cfg.lloyd_bac_weights);
    let half = T::lit(0.5);
    let mut a = params.midpoint();
    let mut step = T::infinity();
    for iteration in 1..=cfg.max_iter {
        let (mass, moment) = interval_moments(params, &weights, &[a]);
        if !(mass[0] > T::zero() && mass[1] > T::zero()) {
            return Err(Error::DegenerateQuantizer { lo: a.as_f64(), hi: a.as_f64(), tol: cfg.tol_a.as_f64() });
        }
        let next = half * (moment[0] / mass[0] + moment[1] / mass[1]);
        step = (next - a).abs();
        a = next;
        if step < cfg.tol_a.max(T::epsilon() * T::lit(4.0) * a.abs()) {
            let mut diagnostics = Diagnostics::new((cfg.bracket_lo, cfg.bracket_hi));
            diagnostics.residual_derivative = step;
            return finish(params, a, Objective::LloydMax, iteration, diagnostics, cfg);
        }
    }
    Err(Error::Convergence { iterations: cfg.max_iter, lo: (a - step).as_f64(), hi: (a + step).as_f64() })
}

fn design_one_bit<T: Real>(
    params: &ChannelParams<T>,
    objective: &Objective<T>,
    cfg: &OptimizerConfig<T>,
) -> Result<DesignResult<T>> {
    match *objective {
        Objective::Capacity => design_capacity_max(params, cfg),
        Objective::CutoffRate => design_cutoff_max(params, cfg),
        Objective::PpvBlep { blocklength, rate } => design_ppv_min(params, blocklength, rate, cfg),
        Objective::LloydMax => design_lloyd_max(params, cfg),
    }
}

/// One full cycle of coordinate ascent; returns the score after the sweep.
fn sweep<T: Real, S: Fn(&[T]) -> T>(
    boundaries: &mut [T],
    outer: (T, T),
    cfg: &OptimizerConfig<T>,
    score: &S,
    mut current: T,
) -> Result<T> {
    let m = boundaries.len();
    for k in 0..m {
        let lo = if k == 0 { outer.0 } else { boundaries[k - 1] };
        let hi = if k + 1 == m { outer.1 } else { boundaries[k + 1] };
        if hi - lo < cfg.tol_a * T::lit(3.0) {
            return Err(Error::DegenerateQuantizer { lo: lo.as_f64(), hi: hi.as_f64(), tol: cfg.tol_a.as_f64() });
        }
        let original = boundaries[k];
        let mut trial = boundaries.to_vec();
        let (x, value) = golden_max(
            |x| {
                trial[k] = x;
                score(&trial)
            },
            lo + cfg.tol_a,
            hi - cfg.tol_a,
            cfg.tol_a,
            cfg.max_iter,
        );
        if value > current && x > lo && x < hi {
            boundaries[k] = x;
            current = value;
        } else {
            boundaries[k] = original;
        }
    }
    Ok(current)
}

/// Locally optimal `n_levels`-level quantizer by cyclic coordinate ascent.
///
/// Starts from the 1-bit design for the same objective and doubles the
/// number of levels by splitting every interval, re-optimizing after each
/// doubling, so the result never scores below the coarser designs it
/// refines.
pub fn design_multibit<T: Real>(
    params: &ChannelParams<T>,
    n_levels: usize,
    objective: &Objective<T>,
    cfg: &OptimizerConfig<T>,
) -> Result<DesignResult<T>> {
    params.validate()?;
    cfg.validate()?;
    if n_levels < 4 || !n_levels.is_power_of_two() {
        return Err(Error::invalid("levels", format!("{n_levels}; multi-level design needs a power of two >= 4")));
    }
    let weights = lloyd_weights(params, cfg.lloyd_bac_weights);
    let score_of = |b: &[T]| score(params, objective, &weights, b);
    let ten = T::lit(10.0);
    let three = T::lit(3.0);
    let half = T::lit(0.5);
    let outer = (params.mu0 - ten * params.sigma0, params.mu1 + ten * params.sigma1);
    let seed_span = (params.mu0 - three * params.sigma0, params.mu1 + three * params.sigma1);

    let mut boundaries = design_one_bit(params, objective, cfg)?.quantizer.boundaries().to_vec();
    let mut history = Vec::new();
    let mut sweeps = 0;
    while boundaries.len() + 1 < n_levels {
        let mut edges = vec![seed_span.0.min(boundaries[0] - params.sigma0)];
        edges.extend_from_slice(&boundaries);
        edges.push(seed_span.1.max(boundaries[boundaries.len() - 1] + params.sigma1));
        let mut refined = Vec::with_capacity(2 * boundaries.len() + 1);
        for (i, w) in edges.windows(2).enumerate() {
            refined.push(half * (w[0] + w[1]));
            if i < boundaries.len() {
                refined.push(boundaries[i]);
            }
        }
        boundaries = refined;
        let mut current = score_of(&boundaries);
        history.push(current);
        loop {
            let next = sweep(&mut boundaries, outer, cfg, &score_of, current)?;
            sweeps += 1;
            history.push(next);
            let gain = next - current;
            current = next;
            if gain < T::lit(1e-12) || sweeps >= cfg.max_iter {
                break;
            }
        }
    }

    let quantizer = Quantizer::new(boundaries)?;
    let h = cfg.fd_step;
    let gradient = (0..quantizer.levels() - 1)
        .map(|k| {
            let mut plus = quantizer.boundaries().to_vec();
            let mut minus = plus.clone();
            plus[k] = plus[k] + h;
            minus[k] = minus[k] - h;
            ((score_of(&plus) - score_of(&minus)) / (T::lit(2.0) * h)).abs()
        })
        .fold(T::zero(), T::max);
    let mut diagnostics = Diagnostics::new(outer);
    diagnostics.residual_derivative = gradient;
    diagnostics.sweep_history = history;
    let objective_value = evaluate_objective(params, &quantizer, objective, cfg);
    Ok(DesignResult { quantizer, objective_value, criterion: objective.criterion(), iterations: sweeps, diagnostics })
}

/// Dispatches to the 1-bit designer (`levels == 2`) or to
/// [`design_multibit`].
pub fn design<T: Real>(
    params: &ChannelParams<T>,
    levels: usize,
    objective: &Objective<T>,
    cfg: &OptimizerConfig<T>,
) -> Result<DesignResult<T>> {
    if levels == 2 {
        design_one_bit(params, objective, cfg)
    } else {
        design_multibit(params, levels, objective, cfg)
    }
}
