use proptest::prelude::*;
use qchan::{
    capacity, capacity_derivative, cutoff_rate, cutoff_rate_derivative, dispersion, dispersion_derivative, ppv_blep,
    ppv_surrogate, ppv_surrogate_derivative, transition_matrix, unquantized_mutual_information, ChannelParams,
    Quantizer, TransitionMatrix,
};

fn params() -> impl Strategy<Value = ChannelParams<f64>> {
    (0.0f64..0.1, 0.0f64..0.1, 0.0f64..0.1, 0.5f64..2.0, 0.2f64..2.0, 0.02f64..0.4, 0.02f64..0.4)
        .prop_map(|(p0, p1, pr, mu0, gap, s0, s1)| ChannelParams::new(p0, p1, pr, mu0, mu0 + gap, s0, s1).unwrap())
}

fn one_bit(p: &ChannelParams<f64>, a: f64) -> TransitionMatrix<f64> {
    transition_matrix(p, &Quantizer::one_bit(a).unwrap()).unwrap()
}

/// Fourth-order central difference.
fn fd(f: impl Fn(f64) -> f64, a: f64, h: f64) -> f64 {
    (-f(a + 2.0 * h) + 8.0 * f(a + h) - 8.0 * f(a - h) + f(a - 2.0 * h)) / (12.0 * h)
}

fn close(analytic: f64, numeric: f64) -> bool {
    let abs = (analytic - numeric).abs();
    abs < 1e-9 || abs / numeric.abs().max(analytic.abs()) < 1e-6
}

fn random_quantizer(p: &ChannelParams<f64>, levels: usize, u: &[f64]) -> Option<Quantizer<f64>> {
    let lo = p.mu0 - 3.0 * p.sigma0;
    let hi = p.mu1 + 3.0 * p.sigma1;
    let mut b: Vec<f64> = u[..levels - 1].iter().map(|x| lo + x * (hi - lo)).collect();
    b.sort_by(f64::total_cmp);
    Quantizer::new(b).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cutoff_rate_below_capacity(p in params(), u in 0.0f64..1.0) {
        let a = p.mu0 + u * (p.mu1 - p.mu0);
        let m = one_bit(&p, a);
        prop_assert!(cutoff_rate(&m) <= capacity(&m) + 1e-9);
    }

    #[test]
    fn derivatives_match_finite_differences(p in params(), u in 0.0f64..1.0) {
        let a = p.mu0 + u * (p.mu1 - p.mu0);
        let h = 1e-4 * p.sigma0.min(p.sigma1);
        let num_c = fd(|x| capacity(&one_bit(&p, x)), a, h);
        let num_r = fd(|x| cutoff_rate(&one_bit(&p, x)), a, h);
        let (dc, _) = capacity_derivative(&p, a);
        let (dr, _) = cutoff_rate_derivative(&p, a);
        prop_assert!(close(dc, num_c), "dC: {:e} vs {:e} at a = {} for {:?}", dc, num_c, a, p);
        prop_assert!(close(dr, num_r), "dR0: {:e} vs {:e} at a = {} for {:?}", dr, num_r, a, p);
    }

    #[test]
    fn surrogate_derivatives_match_finite_differences(p in params(), u in 0.0f64..1.0, rate in 0.1f64..0.9) {
        let a = p.mu0 + u * (p.mu1 - p.mu0);
        let h = 1e-4 * p.sigma0.min(p.sigma1);
        let num_v = fd(|x| dispersion(&one_bit(&p, x)), a, h);
        let num_s = fd(|x| ppv_surrogate(&one_bit(&p, x), rate), a, h);
        let dv = dispersion_derivative(&p, a);
        let ds = ppv_surrogate_derivative(&p, a, rate);
        prop_assert!(close(dv, num_v), "dV: {:e} vs {:e} at a = {} for {:?}", dv, num_v, a, p);
        prop_assert!(close(ds, num_s), "dS: {:e} vs {:e} at a = {} for {:?}", ds, num_s, a, p);
    }

    #[test]
    fn dispersion_nonnegative(p in params(), u in prop::collection::vec(0.0f64..1.0, 7), bits in 1u32..=3) {
        if let Some(q) = random_quantizer(&p, 1 << bits, &u) {
            let m = transition_matrix(&p, &q).unwrap();
            prop_assert!(dispersion(&m) >= 0.0);
        }
    }

    #[test]
    fn permutation_invariance(p in params(), u in prop::collection::vec(0.0f64..1.0, 7), perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle()) {
        let q = random_quantizer(&p, 8, &u);
        prop_assume!(q.is_some());
        let m = transition_matrix(&p, &q.unwrap()).unwrap();
        let pm = m.permute_outputs(&perm);
        prop_assert!((capacity(&m) - capacity(&pm)).abs() <= 1e-14);
        prop_assert!((cutoff_rate(&m) - cutoff_rate(&pm)).abs() <= 1e-14);
        prop_assert!((dispersion(&m) - dispersion(&pm)).abs() <= 1e-13);
    }

    #[test]
    fn blep_monotone(p in params(), u in 0.0f64..1.0, r1 in 0.01f64..0.99, r2 in 0.01f64..0.99, n1 in 1u64..4096, n2 in 1u64..4096) {
        let a = p.mu0 + u * (p.mu1 - p.mu0);
        let m = one_bit(&p, a);
        let (rl, rh) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let (nl, nh) = if n1 <= n2 { (n1, n2) } else { (n2, n1) };
        prop_assert!(ppv_blep(&m, nl, rl) <= ppv_blep(&m, nl, rh));
        if capacity(&m) > rl {
            prop_assert!(ppv_blep(&m, nh, rl) <= ppv_blep(&m, nl, rl));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unquantized_information_dominates(p in params(), u in prop::collection::vec(0.0f64..1.0, 7), bits in 1u32..=3) {
        let q = random_quantizer(&p, 1 << bits, &u);
        prop_assume!(q.is_some());
        let m = transition_matrix(&p, &q.unwrap()).unwrap();
        let mi = unquantized_mutual_information(&p).unwrap();
        prop_assert!(mi >= capacity(&m) - 1e-9, "{} < {}", mi, capacity(&m));
    }
}

#[test]
fn blocklength_sequence_at_reference_rate() {
    let p = ChannelParams::mtj_default(0.12, 0.0, 0.0).unwrap();
    let m = one_bit(&p, 1.36);
    let rate = 110.0 / 128.0;
    let b: Vec<f64> = [64, 128, 256, 512, 1024].iter().map(|n| ppv_blep(&m, *n, rate)).collect();
    assert!(b.windows(2).all(|w| w[1] <= w[0]), "{b:?}");
    assert!(b[1] > 0.0 && b[1] < 1.0);
}
