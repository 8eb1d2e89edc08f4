use proptest::prelude::*;

use dynet_core::analytics::{tv, tv_binomial, tv_binomial_direct, FinitePmf};
use dynet_core::rng::seeded;
use dynet_core::simulator::{simulate_si, simulate_si_with_edges, SiConfig, StopRule};
use dynet_core::{derive_rates, derive_stationary, edge_on_probability, EdgeParams, InfectionRate};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rates_round_trip(lambda in 1e-3f64..10.0, mu in 1e-3f64..10.0) {
        let params = EdgeParams::new(lambda, mu).unwrap();
        let st = derive_stationary(&params).unwrap();
        let back = derive_rates(st.p, st.alpha).unwrap();
        prop_assert!((back.lambda() - lambda).abs() <= 1e-9 * lambda);
        prop_assert!((back.mu().unwrap() - mu).abs() <= 1e-9 * mu);
    }

    #[test]
    fn on_probability_stays_between_start_and_stationary(
        lambda in 1e-2f64..5.0, mu in 1e-2f64..5.0, t in 0.0f64..20.0, on in any::<bool>(),
    ) {
        let params = EdgeParams::new(lambda, mu).unwrap();
        let p = derive_stationary(&params).unwrap().p;
        let q = edge_on_probability(on, t, &params).unwrap();
        let start = if on { 1.0 } else { 0.0 };
        prop_assert!(q >= p.min(start) - 1e-12 && q <= p.max(start) + 1e-12);
    }

    #[test]
    fn binomial_tv_forms_agree(k in 1u64..60, p in 0.01f64..0.99, q in 0.01f64..0.99) {
        let fast = tv_binomial(k, p, q).unwrap();
        let direct = tv_binomial_direct(k, p, q);
        let pmf = tv(&FinitePmf::binomial(k, p).unwrap(), &FinitePmf::binomial(k, q).unwrap()).unwrap();
        prop_assert!((fast - direct).abs() < 1e-9);
        prop_assert!((fast - pmf).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&fast));
    }

    #[test]
    fn si_trajectories_are_monotone(n in 2usize..30, seed in any::<u64>(), beta in 0.1f64..5.0) {
        let mut cfg = SiConfig::new(n, EdgeParams::new(0.3, 0.5).unwrap(), InfectionRate::Finite(beta));
        cfg.stop = StopRule::horizon(50.0);
        let run = simulate_si(&cfg, &mut seeded(seed)).unwrap();
        prop_assert!(run.jumps.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 < w[1].1));
        prop_assert!(run.infected() <= n);
        let full = simulate_si_with_edges(&cfg, &mut seeded(seed)).unwrap();
        prop_assert!(full.events.validate().is_ok());
    }
}
