//! Gaussian tail, its inverse and entropy helpers.
//!
//! `erfc` is the FreeBSD/Sun `s_erf.c` rational approximation (as carried by
//! Go's `math.Erfc`), written once against [`Real`]. Its `[1/0.35, 28)` branch
//! is the asymptotic `exp(-x^2)/x` tail form, so Q keeps full relative
//! precision far into the tail instead of cancelling in `1 - Phi(t)`.

// coefficients are kept digit for digit as published
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A real number known to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability<T>(T);

impl<T: Real> Probability<T> {
    pub fn new(value: T) -> Result<Self> {
        if value >= T::zero() && value <= T::one() {
            Ok(Probability(value))
        } else {
            Err(Error::domain("Probability::new", format!("{value} is not in [0, 1]")))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    /// `1 - p`.
    #[inline]
    pub fn complement(self) -> Self {
        Probability(T::one() - self.0)
    }
}

impl<T: Real> From<Probability<T>> for f64 {
    fn from(p: Probability<T>) -> f64 {
        p.0.as_f64()
    }
}

#[inline]
fn poly<T: Real>(x: T, coeffs: &[f64]) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + T::lit(c))
}

const ERX: f64 = 8.45062911510467529297e-01;
// erf on [0, 0.84375]
const PP: [f64; 5] = [
    1.28379167095512558561e-01,
    -3.25042107247001499370e-01,
    -2.84817495755985104766e-02,
    -5.77027029648944159157e-03,
    -2.37630166566501626084e-05,
];
const QQ: [f64; 6] = [
    1.0,
    3.97917223959155352819e-01,
    6.50222499887672944485e-02,
    5.08130628187576562776e-03,
    1.32494738004321644526e-04,
    -3.96022827877536812320e-06,
];
// erf on [0.84375, 1.25]
const PA: [f64; 7] = [
    -2.36211856075265944077e-03,
    4.14856118683748331666e-01,
    -3.72207876035701323847e-01,
    3.18346619901161753674e-01,
    -1.10894694282396677476e-01,
    3.54783043256182359371e-02,
    -2.16637559486879084300e-03,
];
const QA: [f64; 7] = [
    1.0,
    1.06420880400844228286e-01,
    5.40397917702171048937e-01,
    7.18286544141962662868e-02,
    1.26171219808761642112e-01,
    1.36370839120290507362e-02,
    1.19844998467991074170e-02,
];
// erfc on [1.25, 1/0.35]
const RA: [f64; 8] = [
    -9.86494403484714822705e-03,
    -6.93858572707181764372e-01,
    -1.05586262253232909814e+01,
    -6.23753324503260060396e+01,
    -1.62396669462573470355e+02,
    -1.84605092906711035994e+02,
    -8.12874355063065934246e+01,
    -9.81432934416914548592e+00,
];
const SA: [f64; 9] = [
    1.0,
    1.96512716674392571292e+01,
    1.37657754143519042600e+02,
    4.34565877475229228821e+02,
    6.45387271733267880336e+02,
    4.29008140027567833386e+02,
    1.08635005541779435134e+02,
    6.57024977031928170135e+00,
    -6.04244152148580987438e-02,
];
// erfc on [1/0.35, 28]
const RB: [f64; 7] = [
    -9.86494292470009928597e-03,
    -7.99283237680523006574e-01,
    -1.77579549177547519889e+01,
    -1.60636384855821916062e+02,
    -6.37566443368389627722e+02,
    -1.02509513161107724954e+03,
    -4.83519191608651397019e+02,
];
const SB: [f64; 8] = [
    1.0,
    3.03380607434824582924e+01,
    3.25792512996573918826e+02,
    1.53672958608443695994e+03,
    3.19985821950859553908e+03,
    2.55305040643316442583e+03,
    4.74528541206955367215e+02,
    -2.24409524465858183362e+01,
];

/// Complementary error function.
pub fn erfc<T: Real>(x: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    if x.is_nan() {
        return x;
    }
    if x == T::infinity() {
        return T::zero();
    }
    if x == T::neg_infinity() {
        return two;
    }
    let negative = x < T::zero();
    let ax = x.abs();

    if ax < T::lit(0.84375) {
        let temp = if ax < T::lit(1.387_778_780_781_445_7e-17) {
            ax
        } else {
            let z = ax * ax;
            let y = poly(z, &PP) / poly(z, &QQ);
            if ax < T::lit(0.25) {
                ax + ax * y
            } else {
                T::lit(0.5) + (ax * y + (ax - T::lit(0.5)))
            }
        };
        return if negative { one + temp } else { one - temp };
    }
    if ax < T::lit(1.25) {
        let s = ax - one;
        let r = poly(s, &PA) / poly(s, &QA);
        return if negative { one + T::lit(ERX) + r } else { one - T::lit(ERX) - r };
    }
    if ax < T::lit(28.0) {
        let s = one / (ax * ax);
        let ratio = if ax < T::lit(1.0 / 0.35) {
            poly(s, &RA) / poly(s, &SA)
        } else {
            if negative && ax > T::lit(6.0) {
                return two;
            }
            poly(s, &RB) / poly(s, &SB)
        };
        let z = ax.split_high();
        let r = (-z * z - T::lit(0.5625)).exp() * ((z - ax) * (z + ax) + ratio).exp();
        return if negative { two - r / ax } else { r / ax };
    }
    if negative {
        two
    } else {
        T::zero()
    }
}

/// Standard normal density.
#[inline]
pub fn normal_pdf<T: Real>(t: T) -> T {
    (-(t * t) / T::lit(2.0)).exp() / (T::TAU()).sqrt()
}

/// Gaussian upper tail `Q(t)` without input checking (`NaN` propagates).
#[inline]
pub fn q<T: Real>(t: T) -> T {
    erfc(t / T::SQRT_2()) / T::lit(2.0)
}

/// Gaussian upper tail probability `Q(t) = P(Z > t)`.
pub fn q_function<T: Real>(t: T) -> Result<Probability<T>> {
    if !t.is_finite() {
        return Err(Error::domain("q_function", format!("argument {t} is not finite")));
    }
    Ok(Probability(q(t)))
}

// Acklam's rational approximation to the normal quantile.
const ACKLAM_A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.383577518672690e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const ACKLAM_B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const ACKLAM_C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549671010029796e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const ACKLAM_D: [f64; 4] = [7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00, 3.754408661907416e+00];

fn horner<T: Real>(x: T, coeffs: &[f64]) -> T {
    coeffs.iter().fold(T::zero(), |acc, &c| acc * x + T::lit(c))
}

/// Normal quantile for `p <= 0.5` (returns a value `<= 0`).
fn lower_quantile_guess<T: Real>(p: T) -> T {
    let p_low = T::lit(0.02425);
    let one = T::one();
    if p < p_low {
        let r = (T::lit(-2.0) * p.ln()).sqrt();
        horner(r, &ACKLAM_C) / (horner(r, &ACKLAM_D) * r + one)
    } else {
        let u = p - T::lit(0.5);
        let r = u * u;
        horner(r, &ACKLAM_A) * u / (horner(r, &ACKLAM_B) * r + one)
    }
}

/// Inverse of [`q`] for `p` in `(0, 0.5]`, returning `t >= 0`.
fn inv_q_upper<T: Real>(p: T) -> T {
    let mut t = -lower_quantile_guess(p);
    for _ in 0..3 {
        let density = normal_pdf(t);
        if density == T::zero() {
            break;
        }
        let newton = -(q(t) - p) / density;
        let step = newton / (T::one() + newton * t / T::lit(2.0));
        t = t - step;
        if step.abs() <= T::epsilon() * t.abs() {
            break;
        }
    }
    t.max(T::zero())
}

/// Inverse Gaussian tail: the `t` with `Q(t) = p`.
pub fn inv_q_function<T: Real>(p: Probability<T>) -> Result<T> {
    let p = p.value();
    if p <= T::zero() || p >= T::one() {
        return Err(Error::domain("inv_q_function", format!("{p} is not in (0, 1)")));
    }
    let half = T::lit(0.5);
    Ok(if p == half {
        T::zero()
    } else if p < half {
        inv_q_upper(p)
    } else {
        -inv_q_upper(T::one() - p)
    })
}

/// `p * log2(p)` with `0 * log2(0) = 0`.
pub fn xlog2x<T: Real>(p: Probability<T>) -> T {
    let p = p.value();
    if p == T::zero() {
        T::zero()
    } else {
        p * p.log2()
    }
}

/// Binary entropy in bits.
pub fn binary_entropy<T: Real>(p: Probability<T>) -> T {
    let p = p.value();
    let lo = if p <= T::lit(0.5) { p } else { T::one() - p };
    let hi = T::one() - lo;
    -(xlog2x(Probability(lo)) + xlog2x(Probability(hi)))
}
