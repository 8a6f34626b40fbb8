//! Capacity, cutoff rate, dispersion and normal-approximation finite
//! blocklength quantities of the quantized channel, with the closed-form
//! threshold derivatives used by the 1-bit designers.
//!
//! Everything is in bits under equiprobable binary input.

use crate::channel::{crossover_probs_unchecked, ChannelParams, TransitionMatrix};
use crate::error::{Error, Result};
use crate::numerics::{inv_q_function, normal_pdf, q, Probability};
use crate::quadrature::integrate;
use crate::scalar::Real;

/// Information density `log2(W(j|i) / P(j))` for every entry with
/// `W(j|i) > 0`, evaluated as a difference of logarithms.
fn information_density<T: Real>(matrix: &TransitionMatrix<T>, input: usize, output: usize) -> Option<T> {
    let w = matrix.get(input, output);
    if w <= T::zero() {
        return None;
    }
    let p = T::lit(0.5) * (matrix.get(0, output) + matrix.get(1, output));
    Some((w.ln() - p.ln()) / T::LN_2())
}

fn raw_capacity<T: Real>(matrix: &TransitionMatrix<T>) -> T {
    let half = T::lit(0.5);
    let mut total = T::zero();
    for j in 0..matrix.levels() {
        for i in 0..2 {
            if let Some(density) = information_density(matrix, i, j) {
                total = total + half * matrix.get(i, j) * density;
            }
        }
    }
    total
}

/// Mutual information `I(X; Y)` of the quantized channel (its capacity
/// under the equiprobable-input constraint), clamped to `[0, 1]`.
pub fn capacity<T: Real>(matrix: &TransitionMatrix<T>) -> T {
    raw_capacity(matrix).max(T::zero()).min(T::one())
}

/// Cutoff rate `1 - log2(1 + Σ_j sqrt(W(j|0) W(j|1)))`.
pub fn cutoff_rate<T: Real>(matrix: &TransitionMatrix<T>) -> T {
    let bhattacharyya: T = matrix.row(0).iter().zip(matrix.row(1)).map(|(&a, &b)| a.sqrt() * b.sqrt()).sum();
    (T::one() - bhattacharyya.ln_1p() / T::LN_2()).max(T::zero()).min(T::one())
}

/// Channel dispersion: variance of the information density.
///
/// Evaluated in centred form `½ Σ W (i - C)²`, algebraically equal to the
/// second moment minus `C²` but without the cancellation; the result is
/// clamped at zero.
pub fn dispersion<T: Real>(matrix: &TransitionMatrix<T>) -> T {
    let c = raw_capacity(matrix);
    let half = T::lit(0.5);
    let mut total = T::zero();
    for j in 0..matrix.levels() {
        for i in 0..2 {
            if let Some(density) = information_density(matrix, i, j) {
                let d = density - c;
                total = total + half * matrix.get(i, j) * d * d;
            }
        }
    }
    total.max(T::zero())
}

/// Blocklength, rate and target block error probability for the
/// normal-approximation bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteBlocklengthQuery<T> {
    pub blocklength: u64,
    pub rate: T,
    pub epsilon: T,
}

impl<T: Real> FiniteBlocklengthQuery<T> {
    pub fn new(blocklength: u64, rate: T, epsilon: T) -> Result<Self> {
        if blocklength == 0 {
            return Err(Error::invalid("blocklength", "must be at least 1"));
        }
        if !(rate > T::zero() && rate < T::one()) {
            return Err(Error::invalid("rate", format!("{rate} is not in (0, 1)")));
        }
        if !(epsilon > T::zero() && epsilon < T::one()) {
            return Err(Error::invalid("epsilon", format!("{epsilon} is not in (0, 1)")));
        }
        Ok(FiniteBlocklengthQuery { blocklength, rate, epsilon })
    }
}

/// Normal-approximation maximal rate `C - sqrt(V/N) Q⁻¹(ε)`.
pub fn ppv_max_rate<T: Real>(matrix: &TransitionMatrix<T>, blocklength: u64, epsilon: T) -> Result<T> {
    if blocklength == 0 {
        return Err(Error::invalid("blocklength", "must be at least 1"));
    }
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::domain("ppv_max_rate", format!("epsilon = {epsilon} is not in (0, 1)")));
    }
    let c = capacity(matrix);
    let v = dispersion(matrix);
    let n = T::from_u64(blocklength).expect("blocklength representable");
    let backoff = inv_q_function(Probability::new(epsilon)?)?;
    if backoff == T::zero() {
        return Ok(c);
    }
    Ok(c - (v / n).sqrt() * backoff)
}

/// Normal-approximation block error probability `Q(sqrt(N/V) (C - R))`.
///
/// With zero dispersion the limit is used: 0 below capacity, 1 above, and
/// 0.5 exactly at capacity.
pub fn ppv_blep<T: Real>(matrix: &TransitionMatrix<T>, blocklength: u64, rate: T) -> T {
    let c = capacity(matrix);
    let v = dispersion(matrix);
    blep_from(c, v, blocklength, rate)
}

pub(crate) fn blep_from<T: Real>(c: T, v: T, blocklength: u64, rate: T) -> T {
    let gap = c - rate;
    if v <= T::zero() {
        return if gap > T::zero() {
            T::zero()
        } else if gap < T::zero() {
            T::one()
        } else {
            T::lit(0.5)
        };
    }
    let n = T::from_u64(blocklength).expect("blocklength representable");
    q((n / v).sqrt() * gap)
}

/// `(C - R) / sqrt(V)`, a strictly increasing transform of `-P_B` for any
/// fixed blocklength. Infinite with the sign of `C - R` when `V = 0`.
pub fn ppv_surrogate<T: Real>(matrix: &TransitionMatrix<T>, rate: T) -> T {
    surrogate_from(capacity(matrix), dispersion(matrix), rate)
}

pub(crate) fn surrogate_from<T: Real>(c: T, v: T, rate: T) -> T {
    let gap = c - rate;
    if v <= T::zero() {
        return if gap > T::zero() {
            T::infinity()
        } else if gap < T::zero() {
            T::neg_infinity()
        } else {
            T::zero()
        };
    }
    gap / v.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpvResult<T> {
    pub max_rate: T,
    pub blep: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport<T> {
    pub capacity: T,
    pub cutoff_rate: T,
    pub dispersion: T,
    pub ppv: Option<PpvResult<T>>,
}

impl<T: Real> BoundsReport<T> {
    pub fn evaluate(matrix: &TransitionMatrix<T>, query: Option<&FiniteBlocklengthQuery<T>>) -> Result<Self> {
        let capacity = capacity(matrix);
        let dispersion = dispersion(matrix);
        let ppv = match query {
            Some(q) => Some(PpvResult {
                max_rate: ppv_max_rate(matrix, q.blocklength, q.epsilon)?,
                blep: blep_from(capacity, dispersion, q.blocklength, q.rate),
            }),
            None => None,
        };
        Ok(BoundsReport { capacity, cutoff_rate: cutoff_rate(matrix), dispersion, ppv })
    }
}

/// Intermediate quantities of the closed-form `dC/da1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityDerivativeTerms<T> {
    /// `Ψ = P(y = 1)`.
    pub psi: T,
    pub psi_prime: T,
    pub h_prime_y: T,
    pub h_prime_y_given_x: T,
    /// `w_prime[j][i] = dW(y_j | x = i) / da1`.
    pub w_prime: [[T; 2]; 2],
}

/// Intermediate quantities of the closed-form `dR0/da1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffDerivativeTerms<T> {
    /// `dW(y_0 | x = 0) / da1`.
    pub alpha: T,
    /// `dW(y_0 | x = 1) / da1`.
    pub beta: T,
    /// `W(y_0 | x = 0) - 1`.
    pub omega: T,
    /// `W(y_0 | x = 1) - 1`.
    pub phi: T,
}

/// Per-threshold Gaussian quantities shared by both derivatives.
struct ThresholdTerms<T> {
    /// `P(y = 0 | x = i)`, `P(y = 1 | x = i)`.
    w: [[T; 2]; 2],
    /// `dW(y_0 | x = i) / da1`.
    w0_prime: [T; 2],
    /// component densities at `a1`
    density: [T; 2],
    upper: [T; 2],
    lower: [T; 2],
}

fn threshold_terms<T: Real>(params: &ChannelParams<T>, a1: T) -> ThresholdTerms<T> {
    let cp = crossover_probs_unchecked(params);
    let z = [params.standardize(a1, 0), params.standardize(a1, 1)];
    let upper = [q(z[0]), q(z[1])];
    let lower = [q(-z[0]), q(-z[1])];
    let density = [normal_pdf(z[0]) / params.sigma0, normal_pdf(z[1]) / params.sigma1];
    let mut w = [[T::zero(); 2]; 2];
    let mut w0_prime = [T::zero(); 2];
    for i in 0..2 {
        let (c0, c1) = (cp.get(i, 0), cp.get(i, 1));
        w[0][i] = c0 * lower[0] + c1 * lower[1];
        w[1][i] = c0 * upper[0] + c1 * upper[1];
        w0_prime[i] = c0 * density[0] + c1 * density[1];
    }
    ThresholdTerms { w, w0_prime, density, upper, lower }
}

#[inline]
fn log2_or_zero<T: Real>(x: T) -> T {
    if x > T::zero() {
        x.log2()
    } else {
        T::zero()
    }
}

/// Closed-form `dC/da1` of the 1-bit quantized channel.
pub fn capacity_derivative<T: Real>(params: &ChannelParams<T>, a1: T) -> (T, CapacityDerivativeTerms<T>) {
    let cp = crossover_probs_unchecked(params);
    let t = threshold_terms(params, a1);
    let half = T::lit(0.5);
    let weight0 = (cp.q0 + cp.p1) * half;
    let weight1 = (cp.p0 + cp.q1) * half;

    let psi = weight0 * t.upper[0] + weight1 * t.upper[1];
    let one_minus_psi = weight0 * t.lower[0] + weight1 * t.lower[1];
    let psi_prime = -(weight0 * t.density[0]) - weight1 * t.density[1];
    let h_prime_y = if psi > T::zero() && one_minus_psi > T::zero() {
        -psi_prime * (psi.ln() - one_minus_psi.ln()) / T::LN_2()
    } else {
        T::zero()
    };

    let mut w_prime = [[T::zero(); 2]; 2];
    for i in 0..2 {
        w_prime[0][i] = t.w0_prime[i];
        w_prime[1][i] = -t.w0_prime[i];
    }
    let mut sum = T::zero();
    for j in 0..2 {
        for i in 0..2 {
            let wp = w_prime[j][i];
            sum = sum + wp * log2_or_zero(t.w[j][i]) + wp / T::LN_2();
        }
    }
    let h_prime_y_given_x = -half * sum;

    let terms = CapacityDerivativeTerms { psi, psi_prime, h_prime_y, h_prime_y_given_x, w_prime };
    (h_prime_y - h_prime_y_given_x, terms)
}

/// Closed-form `dR0/da1` of the 1-bit quantized channel.
pub fn cutoff_rate_derivative<T: Real>(params: &ChannelParams<T>, a1: T) -> (T, CutoffDerivativeTerms<T>) {
    let t = threshold_terms(params, a1);
    let two = T::lit(2.0);
    let alpha = t.w0_prime[0];
    let beta = t.w0_prime[1];
    let omega = -t.w[1][0];
    let phi = -t.w[1][1];
    // Ω + 1 and Φ + 1, taken from the lower tails to avoid cancellation
    let omega1 = t.w[0][0];
    let phi1 = t.w[0][1];

    let root_tail = t.w[1][0].sqrt() * t.w[1][1].sqrt();
    let root_head = omega1.sqrt() * phi1.sqrt();
    let tail_term = if root_tail > T::zero() { (beta * omega + alpha * phi) / (two * root_tail) } else { T::zero() };
    let head_term = if root_head > T::zero() { (beta * omega1 + alpha * phi1) / (two * root_head) } else { T::zero() };
    let denom = T::LN_2() * (root_head + root_tail + T::one());
    let value = -(tail_term + head_term) / denom;
    (value, CutoffDerivativeTerms { alpha, beta, omega, phi })
}

/// Closed-form `dV/da1` of the 1-bit quantized channel.
pub fn dispersion_derivative<T: Real>(params: &ChannelParams<T>, a1: T) -> T {
    let t = threshold_terms(params, a1);
    let half = T::lit(0.5);
    let w_prime = [t.w0_prime, [-t.w0_prime[0], -t.w0_prime[1]]];
    let mut density = [[None; 2]; 2];
    let mut c = T::zero();
    for j in 0..2 {
        let p = half * (t.w[j][0] + t.w[j][1]);
        for i in 0..2 {
            if t.w[j][i] > T::zero() {
                let d = (t.w[j][i].ln() - p.ln()) / T::LN_2();
                density[j][i] = Some(d);
                c = c + half * t.w[j][i] * d;
            }
        }
    }
    let mut total = T::zero();
    for j in 0..2 {
        let p = half * (t.w[j][0] + t.w[j][1]);
        let p_prime = half * (w_prime[j][0] + w_prime[j][1]);
        for i in 0..2 {
            if let Some(d) = density[j][i] {
                let centred = d - c;
                let d_prime = (w_prime[j][i] - t.w[j][i] * p_prime / p) / T::LN_2();
                total = total + half * (w_prime[j][i] * centred * centred + T::lit(2.0) * centred * d_prime);
            }
        }
    }
    total
}

/// Closed-form derivative of `(C - R) / sqrt(V)` with respect to the 1-bit
/// threshold; zero where the dispersion vanishes.
pub fn ppv_surrogate_derivative<T: Real>(params: &ChannelParams<T>, a1: T, rate: T) -> T {
    let m = crate::channel::transition_matrix_unchecked(params, &crate::channel::Quantizer { boundaries: vec![a1] });
    let c = capacity(&m);
    let v = dispersion(&m);
    if v <= T::zero() {
        return T::zero();
    }
    let dc = capacity_derivative(params, a1).0;
    let dv = dispersion_derivative(params, a1);
    let root = v.sqrt();
    dc / root - (c - rate) * dv / (T::lit(2.0) * v * root)
}

fn log_sum_exp<T: Real>(a: T, b: T) -> T {
    let m = a.max(b);
    if m == T::neg_infinity() {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Absolute quadrature tolerance of [`unquantized_mutual_information`].
pub const MI_QUADRATURE_TOL: f64 = 1e-10;

/// Mutual information of the unquantized (continuous-output) cascade.
///
/// Adaptive quadrature over `[mu0 - 10 sigma0, mu1 + 10 sigma1]`, split at
/// `mu_i + k sigma_i` so narrow components are never straddled by a single
/// panel.
pub fn unquantized_mutual_information<T: Real>(params: &ChannelParams<T>) -> Result<T> {
    let cp = crossover_probs_unchecked(params);
    let log_norm = [-(params.sigma0 * T::TAU().sqrt()).ln(), -(params.sigma1 * T::TAU().sqrt()).ln()];
    let log_weight = |i: usize, c: usize| cp.get(i, c).ln();
    let half = T::lit(0.5);
    let integrand = |y: T| -> T {
        let mut log_comp = [T::zero(); 2];
        for c in 0..2 {
            let z = params.standardize(y, c);
            log_comp[c] = log_norm[c] - half * z * z;
        }
        let log_f = [
            log_sum_exp(log_weight(0, 0) + log_comp[0], log_weight(0, 1) + log_comp[1]),
            log_sum_exp(log_weight(1, 0) + log_comp[0], log_weight(1, 1) + log_comp[1]),
        ];
        let log_mix = log_sum_exp(log_f[0], log_f[1]) - T::LN_2();
        let mut acc = T::zero();
        for lf in log_f {
            if lf > T::neg_infinity() {
                acc = acc + lf.exp() * (lf - log_mix);
            }
        }
        half * acc / T::LN_2()
    };

    let ten = T::lit(10.0);
    let lo = params.mu0 - ten * params.sigma0;
    let hi = params.mu1 + ten * params.sigma1;
    let mut points = vec![lo, hi];
    for c in 0..2 {
        for k in [-10.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 10.0] {
            let p = params.mean(c) + T::lit(k) * params.sigma(c);
            if p > lo && p < hi {
                points.push(p);
            }
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    points.dedup();
    let tol = T::lit(MI_QUADRATURE_TOL).max(T::epsilon() * T::lit(16.0));
    let result = integrate(integrand, &points, tol, 4000)?;
    Ok(result.value.max(T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{transition_matrix, Quantizer};
    use crate::numerics::binary_entropy;

    fn bsc(eps: f64) -> TransitionMatrix<f64> {
        TransitionMatrix::from_rows(vec![1.0 - eps, eps], vec![eps, 1.0 - eps]).unwrap()
    }

    fn identical(a: f64) -> TransitionMatrix<f64> {
        TransitionMatrix::from_rows(vec![a, 1.0 - a], vec![a, 1.0 - a]).unwrap()
    }

    fn mtj(ratio: f64) -> ChannelParams<f64> {
        ChannelParams::mtj_default(ratio, 0.0, 0.0).unwrap()
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(capacity(&bsc(0.0)), 1.0);
        assert_eq!(capacity(&identical(0.3)), 0.0);
        let eps = 1.545e-5;
        let expected = 1.0 - binary_entropy(Probability::new(eps).unwrap());
        assert!((capacity(&bsc(eps)) - expected).abs() < 1e-14);
        // 30-digit reference
        assert!((capacity(&bsc(eps)) - 0.999_730_788_114_125_7).abs() < 1e-14);
        assert!((capacity(&bsc(eps)) - 0.99972).abs() < 2e-5);
    }

    #[test]
    fn cutoff_examples() {
        assert_eq!(cutoff_rate(&bsc(0.0)), 1.0);
        assert_eq!(cutoff_rate(&identical(0.3)), 0.0);
        for eps in [1e-6_f64, 0.01, 0.11, 0.3] {
            let expected = 1.0 - (1.0 + 2.0 * (eps * (1.0 - eps)).sqrt()).log2();
            assert!((cutoff_rate(&bsc(eps)) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn dispersion_examples() {
        assert_eq!(dispersion(&bsc(0.0)), 0.0);
        assert_eq!(dispersion(&identical(0.3)), 0.0);
        let eps: f64 = 0.11;
        let closed = eps * (1.0 - eps) * ((1.0 - eps) / eps).log2().powi(2);
        assert!((dispersion(&bsc(eps)) - closed).abs() < 1e-13);
        // 40-digit reference 0.89070170139755600653
        assert!((dispersion(&bsc(eps)) - 0.890_701_701_397_556).abs() < 1e-12);
        assert!((dispersion(&bsc(eps)) - 0.8912).abs() < 1e-3);
    }

    #[test]
    fn ppv_max_rate_examples() {
        let m = bsc(0.01);
        assert_eq!(ppv_max_rate(&m, 128, 0.5).unwrap(), capacity(&m));
        assert_eq!(ppv_max_rate(&bsc(0.0), 7, 1e-3).unwrap(), 1.0);
        assert!(ppv_max_rate(&m, 128, 0.0).is_err());
        assert!(ppv_max_rate(&m, 128, 1.0).is_err());
        // C = 0.95, V = 0.1 plugged into the same formula
        let backoff = inv_q_function(Probability::new(1e-4).unwrap()).unwrap();
        let r = 0.95 - (0.1_f64 / 128.0).sqrt() * backoff;
        assert!((r - 0.8461).abs() < 1e-3);
        assert!((r - 0.846_050_329_113_484_2).abs() < 1e-12);
    }

    #[test]
    fn ppv_blep_examples() {
        let m = bsc(0.02);
        let c = capacity(&m);
        assert_eq!(ppv_blep(&m, 128, c), 0.5);
        let r = 0.7;
        assert!(ppv_blep(&m, 256, r) < ppv_blep(&m, 128, r));
        let noiseless = bsc(0.0);
        assert_eq!(ppv_blep(&noiseless, 10, 0.5), 0.0);
        assert_eq!(ppv_blep(&identical(0.4), 10, 0.5), 1.0);
        assert_eq!(ppv_blep(&noiseless, 10, 1.0), 0.5);
    }

    #[test]
    fn query_validation() {
        assert!(FiniteBlocklengthQuery::new(0, 0.5, 0.1).is_err());
        assert!(FiniteBlocklengthQuery::new(10, 1.0, 0.1).is_err());
        assert!(FiniteBlocklengthQuery::new(10, 0.5, 0.0).is_err());
        assert!(FiniteBlocklengthQuery::new(128, 110.0 / 128.0, 1e-4).is_ok());
    }

    #[test]
    fn report_bundles_all_quantities() {
        let p = mtj(0.12);
        let m = transition_matrix(&p, &Quantizer::one_bit(1.35).unwrap()).unwrap();
        let query = FiniteBlocklengthQuery::new(128, 110.0 / 128.0, 1e-3).unwrap();
        let r = BoundsReport::evaluate(&m, Some(&query)).unwrap();
        assert_eq!(r.capacity, capacity(&m));
        assert!(r.cutoff_rate <= r.capacity + 1e-9);
        let ppv = r.ppv.unwrap();
        assert!(ppv.blep > 0.0 && ppv.blep < 1.0);
        assert!(ppv.max_rate < r.capacity);
    }

    #[test]
    fn symmetric_derivatives_vanish_at_midpoint() {
        let p: ChannelParams<f64> = ChannelParams::new(1e-3, 1e-3, 0.0, 1.0, 2.0, 0.13, 0.13).unwrap();
        assert!(capacity_derivative(&p, 1.5).0.abs() < 1e-10);
        assert!(cutoff_rate_derivative(&p, 1.5).0.abs() < 1e-10);
    }

    #[test]
    fn derivative_signs_in_asymmetric_regime() {
        let p = mtj(0.12);
        assert!(capacity_derivative(&p, 1.0).0 > 0.0);
        assert!(capacity_derivative(&p, 2.0).0 < 0.0);
        assert!(cutoff_rate_derivative(&p, 1.0).0 > 0.0);
        assert!(cutoff_rate_derivative(&p, 2.0).0 < 0.0);
    }

    #[test]
    fn cutoff_terms_consistent_with_capacity_terms() {
        let p: ChannelParams<f64> = ChannelParams::new(3e-4, 2e-4, 1e-4, 1.0, 2.0, 0.1, 0.2).unwrap();
        for a in [1.1, 1.3, 1.6] {
            let (_, ct) = capacity_derivative(&p, a);
            let (_, rt) = cutoff_rate_derivative(&p, a);
            assert!((ct.w_prime[0][0] - rt.alpha).abs() < 1e-12);
            assert!((ct.w_prime[0][1] - rt.beta).abs() < 1e-12);
            assert_eq!(ct.w_prime[1][0], -ct.w_prime[0][0]);
            assert_eq!(ct.w_prime[1][1], -ct.w_prime[0][1]);
            let m = transition_matrix(&p, &Quantizer::one_bit(a).unwrap()).unwrap();
            assert!((rt.omega + 1.0 - m.get(0, 0)).abs() < 1e-12);
            assert!((rt.phi + 1.0 - m.get(1, 0)).abs() < 1e-12);
            assert!((ct.psi - 0.5 * (m.get(0, 1) + m.get(1, 1))).abs() < 1e-15);
        }
    }

    #[test]
    fn unquantized_mi_limits() {
        let sharp: ChannelParams<f64> = ChannelParams::new(0.0, 0.0, 0.0, 1.0, 2.0, 1e-6, 2e-6).unwrap();
        assert!((unquantized_mutual_information(&sharp).unwrap() - 1.0).abs() < 1e-6);
        let same: ChannelParams<f64> = ChannelParams::new_unchecked(0.0, 0.0, 0.0, 1.5, 1.5, 0.2, 0.2);
        assert!(unquantized_mutual_information(&same).unwrap().abs() < 1e-9);
    }

    #[test]
    fn unquantized_mi_dominates_one_bit_grid() {
        let p = mtj(0.12);
        let mi = unquantized_mutual_information(&p).unwrap();
        let best = (0..=1000)
            .map(|k| {
                let a = 1.0 + k as f64 / 1000.0;
                capacity(&transition_matrix(&p, &Quantizer::one_bit(a).unwrap()).unwrap())
            })
            .fold(f64::MIN, f64::max);
        assert!(mi >= best - 1e-9, "mi = {mi}, best 1-bit = {best}");
        assert!(mi < 1.0);
    }
}
