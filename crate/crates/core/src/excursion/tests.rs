use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Exact first-return law of the biased walk by dynamic programming over
/// paths that stay strictly on one side of 0.
fn brw_first_return_dp(p: f64, n_max: usize) -> Vec<f64> {
    let q = 1.0 - p;
    let mut out = vec![0.0; n_max + 1];
    // Two sides: start with an up step (height 1) or a down step (height -1).
    for (first, up, down) in [(p, p, q), (q, q, p)] {
        let mut h = vec![0.0; n_max + 2];
        h[1] = first;
        for n in 2..=n_max {
            let mut next = vec![0.0; n_max + 2];
            for k in 1..=n_max {
                if h[k] == 0.0 {
                    continue;
                }
                next[k + 1] += h[k] * up;
                if k == 1 {
                    out[n] += h[k] * down;
                } else {
                    next[k - 1] += h[k] * down;
                }
            }
            h = next;
        }
    }
    out
}

#[test]
fn biased_walk_matches_path_dp() {
    for &p in &[0.5, 0.6, 0.7, 0.93] {
        let law = ExcursionLaw::<f64>::biased_rw(p).unwrap();
        let dp = brw_first_return_dp(p, 60);
        for n in 1..=60u64 {
            assert!(close(law.pmf(n), dp[n as usize], 1e-12), "p={p} n={n}");
        }
        assert!(close(law.mass_inf(), (2.0 * p - 1.0).abs(), 1e-15));
    }
}

#[test]
fn biased_walk_monte_carlo() {
    let p = 0.7;
    let law = ExcursionLaw::<f64>::biased_rw(p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let trials = 200_000;
    let cutoff = 2_000;
    let mut counts = [0u32; 9];
    let mut escaped = 0u32;
    for _ in 0..trials {
        let mut x = 0i64;
        let mut t = 0;
        loop {
            x += if rng.gen::<f64>() < p { 1 } else { -1 };
            t += 1;
            if x == 0 {
                if t <= 8 {
                    counts[t] += 1;
                }
                break;
            }
            if t >= cutoff {
                escaped += 1;
                break;
            }
        }
    }
    let n = trials as f64;
    for k in [2usize, 4, 6, 8] {
        let freq = counts[k] as f64 / n;
        let exact = law.pmf(k as u64);
        let se = (exact * (1.0 - exact) / n).sqrt();
        assert!((freq - exact).abs() < 5.0 * se, "n={k}: {freq} vs {exact}");
    }
    let freq_inf = escaped as f64 / n;
    let se = (0.4 * 0.6 / n).sqrt();
    // Surviving to the cutoff without returning differs from escaping by a
    // negligible amount (P(cutoff <= E < ∞) is tiny).
    assert!((freq_inf - 0.4).abs() < 5.0 * se, "{freq_inf}");
}

#[test]
fn analytics_of_biased_walk() {
    let law = ExcursionLaw::<f64>::biased_rw(0.7).unwrap();
    let a = law.analytics();
    let b = -0.5 * (4.0f64 * 0.7 * 0.3).ln();
    assert!(close(a.b_e, b, 1e-15));
    assert!(close(a.r, -(0.6f64).ln(), 1e-15));
    assert!(close(a.p_finite, 0.6, 1e-15));
    // m_E = E(E | E < ∞) = 1 + 1/|2p - 1| = 3.5 for p = 0.7
    assert!(close(a.m_e, 3.5, 1e-12), "{}", a.m_e);
    assert_eq!(a.a, 2);
    assert_eq!(a.big_a, None);
    assert_eq!(a.lattice, 2);
    // sum of prefactors is the SRW first-return mass 1.
    assert!(close(a.log_sum_gamma.unwrap(), 0.0, 1e-15));
    assert!(a.b_e_prime.is_infinite());
}

#[test]
fn simple_walk_is_recurrent_heavy_tailed() {
    let law = ExcursionLaw::<f64>::biased_rw(0.5).unwrap();
    assert!(law.is_recurrent());
    assert_eq!(law.b_e(), 0.0);
    assert!(law.m_e().is_infinite());
    assert!(close(law.survival(2), 0.5, 1e-15));
    // P(E > 2k) = u_{2k} = C(2k, k) 4^{-k}
    let mut u = 1.0;
    for k in 1..=50u64 {
        u *= (2 * k - 1) as f64 / (2 * k) as f64;
        assert!(close(law.survival(2 * k), u, 1e-13), "k={k}");
        assert!(close(law.survival(2 * k + 1), u, 1e-13));
    }
}

#[test]
fn survival_table_matches_direct_sums() {
    let laws = [
        ExcursionLaw::<f64>::biased_rw(0.7).unwrap(),
        ExcursionLaw::<f64>::biased_rw(0.5).unwrap(),
        ExcursionLaw::<f64>::geometric_prefactor_normalized(0.3, 1.5).unwrap(),
        ExcursionLaw::<f64>::geometric_prefactor_with_finite_mass(0.05, 2.2, 0.8).unwrap(),
        ExcursionLaw::<f64>::power_law_normalized(2.5).unwrap(),
        ExcursionLaw::<f64>::finite_support(&[(1, 0.2), (3, 0.5), (4, 0.1)], None).unwrap(),
    ];
    for law in &laws {
        let table = law.log_survival_table(400);
        assert_eq!(table[0], 0.0);
        for n in [1u64, 2, 3, 17, 100, 399, 400] {
            let direct = law.log_survival(n);
            assert!(close(table[n as usize], direct, 1e-11), "{:?} n={n}", law.family());
        }
        // Far tail: table and direct tail agree where the survival is tiny.
        let deep = law.log_survival_table(4000);
        assert!(close(deep[3999], law.log_survival(3999), 1e-10));
    }
}

#[test]
fn geometric_prefactor_mass_accounting() {
    let law = ExcursionLaw::<f64>::geometric_prefactor(0.1, 1.5, 0.2).unwrap();
    let direct: f64 = (1..200_000u64)
        .map(|n| 0.2 * (n as f64).powf(-1.5) * (-0.1 * n as f64).exp())
        .sum();
    assert!(close(1.0 - law.mass_inf(), direct, 1e-12));
    assert!(close(law.total_mass_check(1000), 1.0, 1e-13));
    assert!(ExcursionLaw::<f64>::geometric_prefactor(0.0, 1.5, 0.9).is_err());
}

#[test]
fn finite_support_analytics() {
    let law = ExcursionLaw::<f64>::finite_support(&[(2, 1.0)], None).unwrap();
    assert!(law.b_e().is_infinite());
    assert_eq!(law.b_e_prime(), 2.0);
    assert_eq!(law.analytics().a, 2);
    assert_eq!(law.analytics().big_a, Some(2));
    assert_eq!(law.lattice(), 2);
    assert!(matches!(law.loosen(), Err(Error::Unsupported(_))));
    let bad = ExcursionLaw::<f64>::finite_support(&[(1, 0.5), (2, 0.6)], None);
    assert!(matches!(bad, Err(Error::InvalidLaw(_))));
    let bad = ExcursionLaw::<f64>::finite_support(&[(1, 0.5)], Some(0.4));
    assert!(matches!(bad, Err(Error::InvalidLaw(_))));
}

#[test]
fn invalid_parameters_rejected() {
    assert!(ExcursionLaw::<f64>::biased_rw(0.0).is_err());
    assert!(ExcursionLaw::<f64>::biased_rw(1.0).is_err());
    assert!(ExcursionLaw::<f64>::power_law_normalized(1.0).is_err());
    assert!(ExcursionLaw::<f64>::geometric_prefactor_normalized(-0.1, 2.0).is_err());
    assert!(ExcursionLaw::<f64>::geometric_prefactor_with_finite_mass(0.1, 2.0, 1.5).is_err());
}

#[test]
fn mgf_conventions() {
    let law = ExcursionLaw::<f64>::biased_rw(0.7).unwrap();
    assert!(close(law.mgf(0.0), 0.6, 1e-15));
    assert!(law.mgf(0.01).is_infinite());
    let x = -0.2;
    let direct: f64 = (1..4000u64).map(|n| law.pmf(n) * (x * n as f64).exp()).sum();
    assert!(close(law.mgf(x), direct, 1e-13));
    assert!(close(law.mgf_finite(x).unwrap(), direct / 0.6, 1e-13));
    assert!(law.mgf_finite(law.b_e() + 1e-3).is_err());
    // M^f(b_E) = sum gamma / P(E < ∞) = 1/0.6
    assert!(close(law.mgf_finite_at_b_e().unwrap(), 1.0 / 0.6, 1e-13));
}

#[test]
fn loosening_biased_walk_gives_simple_walk() {
    let brw = ExcursionLaw::<f64>::biased_rw(0.7).unwrap();
    let srw = ExcursionLaw::<f64>::biased_rw(0.5).unwrap();
    assert!(matches!(brw.loosen(), Err(Error::NotRecurrent(_))));
    let loose = brw.conditioned().unwrap().loosen().unwrap();
    for n in 1..=200u64 {
        assert!(close(loose.pmf(n), srw.pmf(n), 1e-13), "n={n}");
    }
    assert_eq!(loose.b_e(), 0.0);
}

#[test]
fn loosening_divergent_prefactors() {
    // c = 1.5 > 1: summable prefactors; c in (1, 2] is the "ii" regime.
    let law = ExcursionLaw::<f64>::geometric_prefactor_normalized(0.2, 1.5).unwrap();
    let loose = law.loosen().unwrap();
    let pure = ExcursionLaw::<f64>::power_law_normalized(1.5).unwrap();
    for n in [1u64, 5, 50, 500] {
        assert!(close(loose.pmf(n), pure.pmf(n), 1e-12));
    }
    // c <= 1 makes the prefactor sum diverge.
    let law = ExcursionLaw::<f64>::geometric_prefactor_normalized(0.2, 0.8).unwrap();
    assert!(matches!(law.loosen(), Err(Error::DivergentSum(_))));
    assert!(law.analytics().log_sum_gamma.is_none());
}

#[test]
fn partial_loosening_keeps_escape_mass() {
    let law = ExcursionLaw::<f64>::biased_rw(0.7).unwrap();
    let b = law.b_e() / 2.0;
    let pl = law.partially_loosen(b).unwrap();
    assert_eq!(pl.mass_inf(), law.mass_inf());
    assert!(close(pl.b_e(), law.b_e() - b, 1e-14));
    let mf = law.mgf_finite(b).unwrap();
    for n in [2u64, 10, 100] {
        let want = law.pmf(n) * (b * n as f64).exp() / mf;
        assert!(close(pl.pmf(n), want, 1e-13));
    }
    assert!(close(pl.total_mass_check(3000), 1.0, 1e-13));
    assert!(law.partially_loosen(law.b_e()).is_err());
}

#[test]
fn b_prime_for_summable_case() {
    // c = 2.5: both sum gamma and sum n gamma converge.
    let law = ExcursionLaw::<f64>::geometric_prefactor_normalized(0.1, 2.5).unwrap();
    let s0: f64 = (1..2_000_000u64).map(|n| (n as f64).powf(-2.5)).sum::<f64>() + 2.0 / 3.0 * (2e6f64).powf(-1.5);
    let s1: f64 = (1..2_000_000u64).map(|n| (n as f64).powf(-1.5)).sum::<f64>() + 2.0 * (2e6f64).powf(-0.5);
    assert!(
        close(law.b_e_prime(), s1 / s0, 1e-6),
        "{} vs {}",
        law.b_e_prime(),
        s1 / s0
    );
    // c = 1.8: sum gamma converges, sum n gamma diverges.
    let law = ExcursionLaw::<f64>::geometric_prefactor_normalized(0.1, 1.8).unwrap();
    assert!(law.b_e_prime().is_infinite());
    assert!(law.analytics().log_sum_gamma.is_some());
}

#[test]
fn truncation_window_bounds_tail() {
    let law = ExcursionLaw::<f64>::biased_rw(0.7).unwrap();
    let w = law.truncation_window(1e-14).unwrap();
    assert!(law.log_finite_tail(w) <= (1e-14f64).ln());
    assert!(law.log_finite_tail(w - 2) > (1e-14f64).ln());
    assert!(ExcursionLaw::<f64>::biased_rw(0.5)
        .unwrap()
        .truncation_window(1e-14)
        .is_none());
}

#[test]
fn serde_round_trip() {
    let laws = [
        ExcursionLaw::<f64>::biased_rw(0.7).unwrap(),
        ExcursionLaw::<f64>::geometric_prefactor_with_finite_mass(0.1, 1.5, 0.7).unwrap(),
        ExcursionLaw::<f64>::finite_support(&[(1, 0.3), (5, 0.7)], None).unwrap(),
        ExcursionLaw::<f64>::biased_rw(0.7)
            .unwrap()
            .partially_loosen(0.03)
            .unwrap(),
    ];
    for law in laws {
        let json = serde_json::to_string(&law).unwrap();
        let back: ExcursionLaw<f64> = serde_json::from_str(&json).unwrap();
        for n in 1..50 {
            assert!(close(back.pmf(n), law.pmf(n), 1e-14), "{json}");
        }
        assert!(close(back.mass_inf(), law.mass_inf(), 1e-14));
    }
    let parsed: ExcursionLaw<f64> = serde_json::from_str(r#"{"family":"biased_rw","p":0.7}"#).unwrap();
    assert_eq!(parsed.step(), 2);
    assert!(serde_json::from_str::<ExcursionLaw<f64>>(r#"{"family":"biased_rw","p":1.7}"#).is_err());
}

#[test]
fn single_precision_agrees() {
    let l32 = ExcursionLaw::<f32>::biased_rw(0.7).unwrap();
    let l64 = ExcursionLaw::<f64>::biased_rw(0.7).unwrap();
    for n in [2u64, 8, 40] {
        assert!(close(l32.pmf(n) as f64, l64.pmf(n), 1e-5));
    }
    assert!(close(l32.b_e() as f64, l64.b_e(), 1e-6));
    assert!(close(l32.m_e() as f64, l64.m_e(), 1e-5));
}

fn law_strategy() -> impl Strategy<Value = ExcursionLaw<f64>> {
    prop_oneof![
        (0.5f64..0.95).prop_map(|p| ExcursionLaw::biased_rw(p).unwrap()),
        (0.01f64..1.0, 1.1f64..4.0, 0.3f64..1.0)
            .prop_map(|(b, c, m)| { ExcursionLaw::geometric_prefactor_with_finite_mass(b, c, m).unwrap() }),
        prop::collection::btree_map(1u64..30, 0.01f64..1.0, 1..6).prop_map(|w| {
            let total: f64 = w.values().sum::<f64>() * 1.25;
            let w: Vec<(u64, f64)> = w.into_iter().map(|(k, v)| (k, v / total)).collect();
            ExcursionLaw::finite_support(&w, None).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn total_mass_is_one(law in law_strategy()) {
        prop_assert!(close(law.total_mass_check(500), 1.0, 1e-12));
    }

    #[test]
    fn survival_is_monotone(law in law_strategy()) {
        let t = law.log_survival_table(300);
        for w in t.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-14);
        }
        prop_assert!(t[300] >= law.mass_inf().ln() - 1e-12);
    }

    #[test]
    fn tilts_compose(law in law_strategy(), a1 in -0.5f64..0.0, a2 in -0.5f64..0.0) {
        let two = law.tilt(a1).unwrap().tilt(a2).unwrap();
        let one = law.tilt(a1 + a2).unwrap();
        for n in 1..40u64 {
            prop_assert!(close(two.pmf(n), one.pmf(n), 1e-12));
        }
        prop_assert!(two.is_recurrent());
    }

    #[test]
    fn log_mgf_is_convex(law in law_strategy(), x in -2.0f64..-0.05, h in 0.001f64..0.04) {
        let f = |y: f64| law.log_mgf_finite(y).unwrap();
        let second = f(x + h) - 2.0 * f(x) + f(x - h);
        prop_assert!(second >= -1e-12);
        let m = law.log_moments(x).unwrap();
        let d = 1e-5;
        let fd = (f(x + d) - f(x - d)) / (2.0 * d);
        prop_assert!(close(m.mean(), fd, 1e-6));
    }

    #[test]
    fn decay_rate_consistent(law in law_strategy()) {
        if law.b_e().is_finite() {
            // pmf(n) e^{b_E n} is subexponential: log-ratio over a long span is small.
            let n1 = 1000 * law.step();
            let n2 = 2000 * law.step();
            let g1 = law.log_pmf(n1) + law.b_e() * n1 as f64;
            let g2 = law.log_pmf(n2) + law.b_e() * n2 as f64;
            prop_assert!(((g2 - g1) / (n2 - n1) as f64).abs() < 1e-2);
            prop_assert!(law.mgf_finite(law.b_e() + 1e-6).is_err());
        } else {
            prop_assert!(law.mgf_finite(5.0).is_ok());
        }
    }

    #[test]
    fn mean_is_between_support_ends(law in law_strategy()) {
        let a = law.analytics();
        prop_assert!(a.m_e >= a.a as f64 - 1e-12);
        if let Some(big) = a.big_a {
            prop_assert!(a.m_e <= big as f64 + 1e-12);
        }
    }
}
