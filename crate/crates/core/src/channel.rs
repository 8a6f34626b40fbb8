//! Cascaded BAC + Gaussian-mixture read channel and its quantized
//! transition matrix.
//!
//! Resistances are in kΩ. Only the read-along-write-0 direction is modelled;
//! the opposite read direction is the same channel with input labels swapped.

use crate::error::{Error, Result};
use crate::numerics::q;
use crate::scalar::Real;

/// Physical and statistical parameters of the cascaded channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams<T> {
    /// `P0`, write error rate for 1→0 switching.
    pub write_error_0: T,
    /// `P1`, write error rate for 0→1 switching.
    pub write_error_1: T,
    /// `Pr`, read disturb rate.
    pub read_disturb: T,
    pub mu0: T,
    pub mu1: T,
    pub sigma0: T,
    pub sigma1: T,
}

fn check_probability<T: Real>(field: &'static str, v: T) -> Result<()> {
    if v >= T::zero() && v <= T::one() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("{v} is not a probability in [0, 1]")))
    }
}

impl<T: Real> ChannelParams<T> {
    /// Validated constructor.
    pub fn new(
        write_error_0: T,
        write_error_1: T,
        read_disturb: T,
        mu0: T,
        mu1: T,
        sigma0: T,
        sigma1: T,
    ) -> Result<Self> {
        let params = Self::new_unchecked(write_error_0, write_error_1, read_disturb, mu0, mu1, sigma0, sigma1);
        params.validate()?;
        Ok(params)
    }

    /// Builds parameters without validation. Used for limiting cases such as
    /// coincident component means that the validated model excludes.
    pub fn new_unchecked(
        write_error_0: T,
        write_error_1: T,
        read_disturb: T,
        mu0: T,
        mu1: T,
        sigma0: T,
        sigma1: T,
    ) -> Self {
        ChannelParams { write_error_0, write_error_1, read_disturb, mu0, mu1, sigma0, sigma1 }
    }

    /// Standard MTJ regime: `mu0 = 1 kΩ`, `mu1 = 2 kΩ`, equal relative spread
    /// `sigma0/mu0 = sigma1/mu1 = sigma_ratio`, `P1 = 2e-4`.
    pub fn mtj_default(sigma_ratio: T, write_error_0: T, read_disturb: T) -> Result<Self> {
        let mu0 = T::one();
        let mu1 = T::lit(2.0);
        Self::new(write_error_0, T::lit(2e-4), read_disturb, mu0, mu1, sigma_ratio * mu0, sigma_ratio * mu1)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("P0", self.write_error_0)?;
        check_probability("P1", self.write_error_1)?;
        check_probability("Pr", self.read_disturb)?;
        for (field, v) in [("mu0", self.mu0), ("mu1", self.mu1)] {
            if !v.is_finite() {
                return Err(Error::invalid(field, format!("{v} is not finite")));
            }
        }
        if !(self.mu0 < self.mu1) {
            return Err(Error::invalid("mu1", format!("mu0 = {} must be below mu1 = {}", self.mu0, self.mu1)));
        }
        for (field, v) in [("sigma0", self.sigma0), ("sigma1", self.sigma1)] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::invalid(field, format!("{v} must be positive and finite")));
            }
        }
        Ok(())
    }

    /// Midpoint `(mu0 + mu1) / 2`.
    pub fn midpoint(&self) -> T {
        (self.mu0 + self.mu1) / T::lit(2.0)
    }

    pub fn mean(&self, component: usize) -> T {
        if component == 0 {
            self.mu0
        } else {
            self.mu1
        }
    }

    pub fn sigma(&self, component: usize) -> T {
        if component == 0 {
            self.sigma0
        } else {
            self.sigma1
        }
    }

    /// Standardized boundary `(a - mu_i) / sigma_i`.
    #[inline]
    pub fn standardize(&self, a: T, component: usize) -> T {
        (a - self.mean(component)) / self.sigma(component)
    }

    /// Applies a common scale factor to all resistances.
    pub fn scaled(&self, k: T) -> Self {
        ChannelParams {
            mu0: self.mu0 * k,
            mu1: self.mu1 * k,
            sigma0: self.sigma0 * k,
            sigma1: self.sigma1 * k,
            ..*self
        }
    }
}

/// Transition probabilities of the binary asymmetric channel.
///
/// `p0 = P(x̂=1 | x=0)`, `q0 = P(x̂=0 | x=0)`, `p1 = P(x̂=0 | x=1)`,
/// `q1 = P(x̂=1 | x=1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverProbs<T> {
    pub p0: T,
    pub q0: T,
    pub p1: T,
    pub q1: T,
}

impl<T: Real> CrossoverProbs<T> {
    /// `P(x̂ = component | x = input)`.
    pub fn get(&self, input: usize, component: usize) -> T {
        match (input, component) {
            (0, 0) => self.q0,
            (0, _) => self.p0,
            (_, 0) => self.p1,
            _ => self.q1,
        }
    }
}

/// BAC crossover probabilities for reading along the write-0 direction.
pub fn crossover_probs<T: Real>(params: &ChannelParams<T>) -> Result<CrossoverProbs<T>> {
    params.validate()?;
    Ok(crossover_probs_unchecked(params))
}

pub(crate) fn crossover_probs_unchecked<T: Real>(params: &ChannelParams<T>) -> CrossoverProbs<T> {
    let one = T::one();
    let half = T::lit(0.5);
    let pr = params.read_disturb;
    let hp0 = params.write_error_0 * half;
    let hp1 = params.write_error_1 * half;
    let p0 = hp0 * (one - pr);
    let p1 = hp1 + (one - hp1) * pr;
    // complements taken from the computed crossovers so rows sum to one
    CrossoverProbs { p0, q0: one - p0, p1, q1: one - p1 }
}

/// Output quantizer given by its interior boundaries `a_1 < ... < a_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantizer<T> {
    pub(crate) boundaries: Vec<T>,
}

impl<T: Real> Quantizer<T> {
    pub fn new(boundaries: Vec<T>) -> Result<Self> {
        let levels = boundaries.len() + 1;
        if levels < 2 || !levels.is_power_of_two() {
            return Err(Error::invalid("quantizer", format!("{levels} levels; need a power of two >= 2")));
        }
        if let Some(bad) = boundaries.iter().find(|b| !b.is_finite()) {
            return Err(Error::invalid("quantizer", format!("boundary {bad} is not finite")));
        }
        if let Some(w) = boundaries.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::invalid(
                "quantizer",
                format!("boundaries must be strictly increasing ({} then {})", w[0], w[1]),
            ));
        }
        Ok(Quantizer { boundaries })
    }

    /// 1-bit quantizer with decision threshold `a1`.
    pub fn one_bit(threshold: T) -> Result<Self> {
        Self::new(vec![threshold])
    }

    pub fn boundaries(&self) -> &[T] {
        &self.boundaries
    }

    /// Number of output symbols `n`.
    pub fn levels(&self) -> usize {
        self.boundaries.len() + 1
    }

    /// Quantizer bits `log2 n`.
    pub fn bits(&self) -> u32 {
        self.levels().trailing_zeros()
    }

    /// Index `j` of the interval containing `y`. Points on a boundary go to
    /// the upper interval.
    pub fn symbol(&self, y: T) -> usize {
        self.boundaries.partition_point(|&b| b <= y)
    }
}

/// Probability mass of `N(mu_i, sigma_i^2)` over each quantizer interval.
///
/// End intervals use the single-tail forms; interior intervals difference
/// whichever tail keeps the subtraction away from 1.
pub fn interval_probs<T: Real>(params: &ChannelParams<T>, quantizer: &Quantizer<T>, component: usize) -> Vec<T> {
    let z: Vec<T> = quantizer.boundaries().iter().map(|&a| params.standardize(a, component)).collect();
    let n = quantizer.levels();
    let mut out = Vec::with_capacity(n);
    out.push(q(-z[0]));
    for w in z.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mass = if lo >= T::zero() {
            q(lo) - q(hi)
        } else if hi <= T::zero() {
            q(-hi) - q(-lo)
        } else {
            T::one() - (q(hi) + q(-lo))
        };
        out.push(mass.max(T::zero()));
    }
    out.push(q(z[z.len() - 1]));
    out
}

/// 2×n row-stochastic matrix `W(y_j | x = i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix<T> {
    rows: [Vec<T>; 2],
}

impl<T: Real> TransitionMatrix<T> {
    /// Validates shape, non-negativity and row sums (within `1e-12` for
    /// `f64`, scaled by machine epsilon otherwise).
    pub fn from_rows(row0: Vec<T>, row1: Vec<T>) -> Result<Self> {
        if row0.len() != row1.len() || row0.len() < 2 {
            return Err(Error::invalid("transition matrix", "rows must have equal length >= 2"));
        }
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
        for row in [&row0, &row1] {
            if row.iter().any(|&w| !(w >= T::zero())) {
                return Err(Error::invalid("transition matrix", "entries must be non-negative"));
            }
            let sum: T = row.iter().copied().sum();
            if (sum - T::one()).abs() > tol {
                return Err(Error::invalid("transition matrix", format!("row sums to {sum}")));
            }
        }
        Ok(TransitionMatrix { rows: [row0, row1] })
    }

    pub(crate) fn from_rows_unchecked(row0: Vec<T>, row1: Vec<T>) -> Self {
        TransitionMatrix { rows: [row0, row1] }
    }

    pub fn row(&self, input: usize) -> &[T] {
        &self.rows[input]
    }

    pub fn get(&self, input: usize, output: usize) -> T {
        self.rows[input][output]
    }

    pub fn levels(&self) -> usize {
        self.rows[0].len()
    }

    /// Reorders output columns by `perm` (`new[j] = old[perm[j]]`).
    pub fn permute_outputs(&self, perm: &[usize]) -> Self {
        let pick = |r: &Vec<T>| perm.iter().map(|&k| r[k]).collect::<Vec<T>>();
        TransitionMatrix { rows: [pick(&self.rows[0]), pick(&self.rows[1])] }
    }

    /// MAP decision per output symbol under equiprobable inputs (ties → 0).
    pub fn map_decisions(&self) -> Vec<u8> {
        (0..self.levels()).map(|j| u8::from(self.rows[1][j] > self.rows[0][j])).collect()
    }
}

/// Transition matrix of the quantized cascade.
pub fn transition_matrix<T: Real>(params: &ChannelParams<T>, quantizer: &Quantizer<T>) -> Result<TransitionMatrix<T>> {
    params.validate()?;
    Ok(transition_matrix_unchecked(params, quantizer))
}

pub(crate) fn transition_matrix_unchecked<T: Real>(
    params: &ChannelParams<T>,
    quantizer: &Quantizer<T>,
) -> TransitionMatrix<T> {
    let cp = crossover_probs_unchecked(params);
    let g0 = interval_probs(params, quantizer, 0);
    let g1 = interval_probs(params, quantizer, 1);
    let row = |input: usize| -> Vec<T> {
        g0.iter().zip(&g1).map(|(&a, &b)| cp.get(input, 0) * a + cp.get(input, 1) * b).collect()
    };
    TransitionMatrix::from_rows_unchecked(row(0), row(1))
}

/// Equiprobable-input output marginal `P(y_j)`.
pub fn output_distribution<T: Real>(matrix: &TransitionMatrix<T>) -> Vec<T> {
    let half = T::lit(0.5);
    matrix.row(0).iter().zip(matrix.row(1)).map(|(&a, &b)| half * (a + b)).collect()
}
