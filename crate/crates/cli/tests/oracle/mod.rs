//! Reference implementation used as a test oracle. Built on statrs so that it
//! shares no numeric code with the crate under test.
#![allow(dead_code, clippy::needless_range_loop)]

use statrs::function::erf::erfc;

pub struct Channel {
    pub p0: f64,
    pub p1: f64,
    pub pr: f64,
    pub mu: [f64; 2],
    pub sigma: [f64; 2],
}

impl Channel {
    pub fn mtj(ratio: f64, p0: f64, pr: f64) -> Self {
        Channel { p0, p1: 2e-4, pr, mu: [1.0, 2.0], sigma: [ratio, 2.0 * ratio] }
    }

    /// `[x][component]` probabilities that `x` is read as a cell in state
    /// `component`.
    pub fn bac(&self) -> [[f64; 2]; 2] {
        let p0 = self.p0 / 2.0 * (1.0 - self.pr);
        let p1 = self.p1 / 2.0 + (1.0 - self.p1 / 2.0) * self.pr;
        [[1.0 - p0, p0], [p1, 1.0 - p1]]
    }

    pub fn matrix(&self, boundaries: &[f64]) -> [Vec<f64>; 2] {
        let n = boundaries.len() + 1;
        let g: Vec<Vec<f64>> = (0..2)
            .map(|c| {
                (0..n)
                    .map(|j| {
                        let lo = if j == 0 { f64::NEG_INFINITY } else { boundaries[j - 1] };
                        let hi = if j == n - 1 { f64::INFINITY } else { boundaries[j] };
                        interval(self.mu[c], self.sigma[c], lo, hi)
                    })
                    .collect()
            })
            .collect();
        let b = self.bac();
        let row = |x: usize| (0..n).map(|j| b[x][0] * g[0][j] + b[x][1] * g[1][j]).collect();
        [row(0), row(1)]
    }
}

pub fn q(t: f64) -> f64 {
    0.5 * erfc(t / std::f64::consts::SQRT_2)
}

fn interval(mu: f64, sigma: f64, lo: f64, hi: f64) -> f64 {
    let zl = (lo - mu) / sigma;
    let zh = (hi - mu) / sigma;
    if zl >= 0.0 {
        q(zl) - q(zh)
    } else if zh <= 0.0 {
        q(-zh) - q(-zl)
    } else {
        1.0 - q(zh) - q(-zl)
    }
}

fn phi(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

pub fn capacity(w: &[Vec<f64>; 2]) -> f64 {
    let mut c = 0.0;
    for j in 0..w[0].len() {
        let py = 0.5 * (w[0][j] + w[1][j]);
        for row in w {
            if row[j] > 0.0 {
                c += 0.5 * row[j] * (row[j] / py).log2();
            }
        }
    }
    c
}

pub fn cutoff(w: &[Vec<f64>; 2]) -> f64 {
    let z: f64 = (0..w[0].len()).map(|j| (w[0][j] * w[1][j]).sqrt()).sum();
    1.0 - (1.0 + z).log2()
}

pub fn dispersion(w: &[Vec<f64>; 2]) -> f64 {
    let c = capacity(w);
    let mut m2 = 0.0;
    for j in 0..w[0].len() {
        let py = 0.5 * (w[0][j] + w[1][j]);
        for row in w {
            if row[j] > 0.0 {
                let i = (row[j] / py).log2();
                m2 += 0.5 * row[j] * (i - c) * (i - c);
            }
        }
    }
    m2
}

/// Argument of `Q` in the normal-approximation block error probability;
/// larger means smaller error.
pub fn blep_argument(w: &[Vec<f64>; 2], blocklength: f64, rate: f64) -> f64 {
    (blocklength / dispersion(w)).sqrt() * (capacity(w) - rate)
}

/// Mean squared error of the 2-level quantizer at threshold `a` with
/// centroid reconstruction, on the output mixture with weights `weights`.
pub fn lloyd_mse(ch: &Channel, weights: [f64; 2], a: f64) -> f64 {
    // E[Y^k ; Y in (lo, hi)] for a single Gaussian, k = 0, 1, 2
    let moments = |c: usize, lo: f64, hi: f64| {
        let (m, s) = (ch.mu[c], ch.sigma[c]);
        let zl = (lo - m) / s;
        let zh = (hi - m) / s;
        let p = interval(m, s, lo, hi);
        let (fl, fh) = (if lo.is_finite() { phi(zl) } else { 0.0 }, if hi.is_finite() { phi(zh) } else { 0.0 });
        let (zfl, zfh) =
            (if lo.is_finite() { zl * phi(zl) } else { 0.0 }, if hi.is_finite() { zh * phi(zh) } else { 0.0 });
        let m1 = m * p + s * (fl - fh);
        let m2 = (m * m + s * s) * p + 2.0 * m * s * (fl - fh) + s * s * (zfl - zfh);
        (p, m1, m2)
    };
    let mut total = 0.0;
    for (lo, hi) in [(f64::NEG_INFINITY, a), (a, f64::INFINITY)] {
        let (mut p, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for (c, w) in weights.iter().enumerate() {
            let (a0, a1, a2) = moments(c, lo, hi);
            p += w * a0;
            m1 += w * a1;
            m2 += w * a2;
        }
        total += m2 - m1 * m1 / p;
    }
    total
}

pub fn bac_weights(ch: &Channel) -> [f64; 2] {
    let b = ch.bac();
    [(b[0][0] + b[1][0]) / 2.0, (b[0][1] + b[1][1]) / 2.0]
}

/// Index of the grid point maximizing `f` over `points` evenly spaced points
/// of `[lo, hi]`, returned as the abscissa.
pub fn grid_argmax(lo: f64, hi: f64, points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let step = (hi - lo) / (points - 1) as f64;
    let mut best = (f64::NEG_INFINITY, lo);
    for i in 0..points {
        let a = lo + step * i as f64;
        let v = f(a);
        if v > best.0 {
            best = (v, a);
        }
    }
    best.1
}
