//! Seeded Monte Carlo sampling of the quantized cascade.
//!
//! Randomness is counter based: sample `i` reads a fixed window of the
//! ChaCha8 keystream for `seed` starting at word `4 i`, so every sample is
//! a pure function of `(seed, i)` and results do not depend on sharding or
//! thread scheduling. The input bit of sample `i` is `i mod 2`.

use std::io::Write;
use std::path::Path;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::channel::{
    crossover_probs_unchecked, transition_matrix_unchecked, ChannelParams, Quantizer, TransitionMatrix,
};
use crate::error::{Error, Result};
use crate::format::format_sig;
use crate::numerics::{inv_q_function, Probability};
use crate::scalar::Real;

const WORDS_PER_SAMPLE: u128 = 4;

/// Per-shard `counts[x][symbol]` and MAP error count.
type ShardTally = ([Vec<u64>; 2], u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub seed: u64,
    /// Total samples; inputs alternate so each input gets half.
    pub num_samples: u64,
    pub shards: usize,
    /// Write the raw resistance column when exporting samples.
    pub record_resistance: bool,
}

impl McConfig {
    pub fn new(seed: u64, num_samples: u64) -> Self {
        McConfig { seed, num_samples, shards: rayon::current_num_threads().max(1), record_resistance: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_samples == 0 {
            return Err(Error::invalid("samples", "must be at least 1"));
        }
        if self.shards == 0 {
            return Err(Error::invalid("shards", "must be at least 1"));
        }
        Ok(())
    }
}

/// One draw through the cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSample<T> {
    /// BAC output `x̂`.
    pub written: u8,
    pub resistance: T,
    pub symbol: usize,
}

#[inline]
fn unit_open(word: u64) -> f64 {
    ((word >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

#[inline]
fn unit_half_open(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws one quantized output for input bit `x`: BAC flip, Gaussian
/// resistance of the resulting state, then the quantizer interval.
pub fn sample_channel<T: Real, R: RngCore>(
    params: &ChannelParams<T>,
    quantizer: &Quantizer<T>,
    x: u8,
    rng: &mut R,
) -> ChannelSample<T> {
    let cp = crossover_probs_unchecked(params);
    let flip = if x == 0 { cp.p0 } else { cp.p1 };
    let u_flip = T::lit(unit_half_open(rng.next_u64()));
    let written = if u_flip < flip { 1 - x } else { x };
    let u = T::lit(unit_open(rng.next_u64()));
    let z = inv_q_function(Probability::new(u).expect("open unit interval")).expect("open unit interval");
    let component = usize::from(written);
    let resistance = params.mean(component) + params.sigma(component) * z;
    ChannelSample { written, resistance, symbol: quantizer.symbol(resistance) }
}

fn stream_at(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(index) * WORDS_PER_SAMPLE);
    rng
}

fn for_each_sample<T: Real, F: FnMut(u64, u8, ChannelSample<T>)>(
    params: &ChannelParams<T>,
    quantizer: &Quantizer<T>,
    seed: u64,
    range: std::ops::Range<u64>,
    mut f: F,
) {
    let mut rng = stream_at(seed, range.start);
    for index in range {
        let x = (index & 1) as u8;
        let sample = sample_channel(params, quantizer, x, &mut rng);
        f(index, x, sample);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McReport<T> {
    /// `counts[x][j]`: samples with input `x` quantized to symbol `j`.
    pub counts: [Vec<u64>; 2],
    pub frequencies: [Vec<T>; 2],
    /// Raw bit error rate of the MAP hard decision on the quantized output.
    pub raw_ber: T,
    /// 95% normal-approximation half-width of `raw_ber`.
    pub raw_ber_half_width: T,
    pub samples_drawn: u64,
    /// MAP decision per output symbol taken from the analytic matrix.
    pub decisions: Vec<u8>,
}

impl<T: Real> McReport<T> {
    pub fn row_total(&self, input: usize) -> u64 {
        self.counts[input].iter().sum()
    }
}

/// Empirical transition matrix of `num_samples` draws (inputs alternating).
pub fn estimate_matrix<T: Real>(
    params: &ChannelParams<T>,
    quantizer: &Quantizer<T>,
    cfg: &McConfig,
) -> Result<McReport<T>> {
    params.validate()?;
    cfg.validate()?;
    let analytic = transition_matrix_unchecked(params, quantizer);
    let decisions = analytic.map_decisions();
    let n = quantizer.levels();
    let shards = cfg.shards as u64;
    let per_shard = cfg.num_samples.div_ceil(shards);

    let partials: Vec<ShardTally> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let start = (s * per_shard).min(cfg.num_samples);
            let end = ((s + 1) * per_shard).min(cfg.num_samples);
            let mut counts = [vec![0u64; n], vec![0u64; n]];
            let mut errors = 0u64;
            for_each_sample(params, quantizer, cfg.seed, start..end, |_, x, sample| {
                counts[usize::from(x)][sample.symbol] += 1;
                errors += u64::from(decisions[sample.symbol] != x);
            });
            (counts, errors)
        })
        .collect();

    let mut counts = [vec![0u64; n], vec![0u64; n]];
    let mut errors = 0u64;
    for (c, e) in partials {
        for i in 0..2 {
            for j in 0..n {
                counts[i][j] += c[i][j];
            }
        }
        errors += e;
    }
    let frequencies = [0, 1].map(|i| {
        let total: u64 = counts[i].iter().sum();
        counts[i]
            .iter()
            .map(|&c| if total == 0 { T::zero() } else { T::lit(c as f64 / total as f64) })
            .collect::<Vec<T>>()
    });
    let ber = errors as f64 / cfg.num_samples as f64;
    let half_width = 1.96 * (ber * (1.0 - ber) / cfg.num_samples as f64).sqrt();
    Ok(McReport {
        counts,
        frequencies,
        raw_ber: T::lit(ber),
        raw_ber_half_width: T::lit(half_width),
        samples_drawn: cfg.num_samples,
        decisions,
    })
}

/// Agreement of one empirical entry with its analytic probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryCheck {
    pub input: usize,
    pub output: usize,
    pub analytic: f64,
    pub empirical: f64,
    pub count: u64,
    /// Deviation in binomial standard deviations.
    pub z_score: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub entries: Vec<EntryCheck>,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub significance: f64,
    pub z_limit: f64,
}

impl Validation {
    pub fn chi_square_pass(&self) -> bool {
        self.p_value >= self.significance
    }

    pub fn pass(&self) -> bool {
        self.chi_square_pass() && self.entries.iter().all(|e| e.pass)
    }
}

/// Compares empirical counts against `analytic`: each entry within
/// `z_limit` binomial standard deviations, plus a Pearson chi-square test
/// at `significance` (cells with expected count below 5 pooled per row).
pub fn validate_against<T: Real>(
    report: &McReport<T>,
    analytic: &TransitionMatrix<T>,
    z_limit: f64,
    significance: f64,
) -> Validation {
    let mut entries = Vec::new();
    let mut chi_square = 0.0;
    let mut dof = 0usize;
    for i in 0..2 {
        let total = report.row_total(i) as f64;
        let mut pooled = (0.0, 0.0);
        let mut bins = 0usize;
        for j in 0..analytic.levels() {
            let p = analytic.get(i, j).as_f64();
            let observed = report.counts[i][j] as f64;
            let expected = total * p;
            let sd = (total * p * (1.0 - p)).sqrt();
            let deviation = (observed - expected).abs();
            let z_score = if sd > 0.0 {
                deviation / sd
            } else if deviation == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            entries.push(EntryCheck {
                input: i,
                output: j,
                analytic: p,
                empirical: report.frequencies[i][j].as_f64(),
                count: report.counts[i][j],
                z_score,
                pass: z_score <= z_limit,
            });
            if expected >= 5.0 {
                chi_square += (observed - expected).powi(2) / expected;
                bins += 1;
            } else {
                pooled.0 += observed;
                pooled.1 += expected;
            }
        }
        if pooled.1 > 0.0 {
            chi_square += (pooled.0 - pooled.1).powi(2) / pooled.1;
            bins += 1;
        } else if pooled.0 > 0.0 {
            chi_square = f64::INFINITY;
        }
        dof += bins.saturating_sub(1);
    }
    let p_value = if !chi_square.is_finite() {
        0.0
    } else if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
        1.0 - dist.cdf(chi_square)
    };
    Validation { entries, chi_square, degrees_of_freedom: dof, p_value, significance, z_limit }
}

/// Column header of the sample export.
pub const SAMPLE_CSV_HEADER: &str = "sample_index,x,symbol,resistance_kohm";

/// Writes `cfg.num_samples` samples as CSV to `path`.
///
/// The file is written to a temporary sibling and renamed into place, so a
/// failed export leaves no partial file.
pub fn export_samples<T: Real>(
    params: &ChannelParams<T>,
    quantizer: &Quantizer<T>,
    cfg: &McConfig,
    path: &Path,
) -> Result<()> {
    params.validate()?;
    cfg.validate()?;
    let io_err = |source: std::io::Error| Error::Io { path: path.display().to_string(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err)?;
    {
        let mut out = std::io::BufWriter::new(tmp.as_file());
        writeln!(out, "{SAMPLE_CSV_HEADER}").map_err(io_err)?;
        let mut result = Ok(());
        for_each_sample(params, quantizer, cfg.seed, 0..cfg.num_samples, |index, x, sample| {
            if result.is_err() {
                return;
            }
            result = if cfg.record_resistance {
                writeln!(out, "{index},{x},{},{}", sample.symbol, format_sig(sample.resistance.as_f64(), 9))
            } else {
                writeln!(out, "{index},{x},{},", sample.symbol)
            };
        });
        result.map_err(io_err)?;
        out.flush().map_err(io_err)?;
    }
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::transition_matrix;

    fn noiseless() -> ChannelParams<f64> {
        ChannelParams::new(0.0, 0.0, 0.0, 1.0, 2.0, 1e-9, 2e-9).unwrap()
    }

    #[test]
    fn noiseless_sample_is_deterministic() {
        let p = noiseless();
        let qz = Quantizer::one_bit(1.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            assert_eq!(sample_channel(&p, &qz, 0, &mut rng).symbol, 0);
            assert_eq!(sample_channel(&p, &qz, 1, &mut rng).symbol, 1);
        }
    }

    #[test]
    fn saturated_bac_routes_through_low_state() {
        let p = ChannelParams::new(1.0, 1.0, 1.0, 1.0, 2.0, 0.1, 0.2).unwrap();
        let qz = Quantizer::one_bit(1.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            assert_eq!(sample_channel(&p, &qz, 0, &mut rng).written, 0);
            assert_eq!(sample_channel(&p, &qz, 1, &mut rng).written, 0);
        }
    }

    #[test]
    fn noiseless_report_is_identity() {
        let p = noiseless();
        let qz = Quantizer::one_bit(1.5).unwrap();
        let r = estimate_matrix(&p, &qz, &McConfig::new(1, 10_000)).unwrap();
        assert_eq!(r.frequencies, [vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(r.counts, [vec![5000, 0], vec![0, 5000]]);
        assert_eq!(r.raw_ber, 0.0);
        let v = validate_against(&r, &transition_matrix(&p, &qz).unwrap(), 4.0, 1e-3);
        assert!(v.pass());
    }

    #[test]
    fn shard_count_does_not_change_report() {
        let p = ChannelParams::mtj_default(0.12, 1e-3, 1e-3).unwrap();
        let qz = Quantizer::new(vec![1.2, 1.4, 1.7]).unwrap();
        let mut cfg = McConfig::new(77, 100_001);
        cfg.shards = 1;
        let one = estimate_matrix(&p, &qz, &cfg).unwrap();
        cfg.shards = 8;
        let eight = estimate_matrix(&p, &qz, &cfg).unwrap();
        assert_eq!(one, eight);
        assert_eq!(one.row_total(0) + one.row_total(1), 100_001);
        assert_eq!(one.row_total(0), 50_001);
    }

    #[test]
    fn config_validation() {
        let p = noiseless();
        let qz = Quantizer::one_bit(1.5).unwrap();
        assert!(estimate_matrix(&p, &qz, &McConfig::new(1, 0)).is_err());
        let mut cfg = McConfig::new(1, 10);
        cfg.shards = 0;
        assert!(estimate_matrix(&p, &qz, &cfg).is_err());
    }

    #[test]
    fn corrupted_matrix_fails_validation() {
        let p = ChannelParams::mtj_default(0.12, 0.0, 0.0).unwrap();
        let qz = Quantizer::one_bit(1.35).unwrap();
        let report = estimate_matrix(&p, &qz, &McConfig::new(5, 200_000)).unwrap();
        let good = transition_matrix(&p, &qz).unwrap();
        assert!(validate_against(&report, &good, 4.0, 1e-3).pass());
        let n = report.row_total(0) as f64;
        let w = good.get(0, 1);
        let shift = 10.0 * (w * (1.0 - w) / n).sqrt();
        let bad = TransitionMatrix::from_rows(vec![good.get(0, 0) - shift, w + shift], good.row(1).to_vec()).unwrap();
        let v = validate_against(&report, &bad, 4.0, 1e-3);
        assert!(!v.pass());
        assert!(!v.entries[1].pass);
    }
}
