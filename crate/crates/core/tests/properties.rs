use std::cmp::Ordering;

use freqlaw::asymptote::{beta_of_theta, geometric_pmf, theta_of_beta, AsymptoteSpec};
use freqlaw::estimation::{
    build_ranking, default_geometric_p, geometric_tail_smooth, good_turing_smooth, RankingCriteria,
};
use freqlaw::histogram::build_histogram;
use freqlaw::{FrequencyHistogram, SpeciesCounts, ThetaParam};
use proptest::prelude::*;

fn counts_strategy() -> impl Strategy<Value = SpeciesCounts> {
    prop::collection::vec(("[a-f]{1,3}", 1u64..40), 1..60)
        .prop_map(|pairs| SpeciesCounts::from_pairs(pairs).unwrap())
}

fn integral_histogram() -> impl Strategy<Value = FrequencyHistogram> {
    prop::collection::btree_map(1u64..200, 1u32..1000, 1..40).prop_map(|m| {
        FrequencyHistogram::from_cells(m.into_iter().map(|(x, n)| (x, n as f64))).unwrap()
    })
}

proptest! {
    #[test]
    fn rank_duality_is_exact_on_integral_histograms(h in integral_histogram()) {
        let max_x = h.max_frequency().unwrap();
        for x in 1..=max_x {
            prop_assert_eq!(h.get(x), h.rank_of(x) - h.rank_of(x + 1));
        }
        prop_assert_eq!(h.rank_of(max_x + 1), 0.0);
    }

    #[test]
    fn rank_duality_on_real_histograms(theta in 0.2f64..6.0, n1 in 0.5f64..1e4, max_x in 1u64..300) {
        let h = FrequencyHistogram::ideal(ThetaParam::new(theta).unwrap(), n1, max_x).unwrap();
        let scale = h.rank_of(1);
        for x in 1..=max_x {
            prop_assert!((h.get(x) - (h.rank_of(x) - h.rank_of(x + 1))).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn ideal_histograms_are_fixed_points(theta in 0.05f64..8.0, n1 in 0.1f64..1e6, max_x in 2u64..400) {
        let t = ThetaParam::new(theta).unwrap();
        let h = FrequencyHistogram::ideal(t, n1, max_x).unwrap();
        for x in 1..max_x {
            let xs = h.reestimate(x, t).unwrap();
            prop_assert!((xs - x as f64).abs() <= 1e-12 * x as f64, "x={} x*={}", x, xs);
        }
    }

    #[test]
    fn theta_one_is_turing(h in integral_histogram()) {
        for (x, n_x) in h.cells() {
            let direct = (x as f64 + 1.0) * h.get(x + 1) / n_x;
            prop_assert_eq!(h.reestimate(x, ThetaParam::TURING).unwrap(), direct);
        }
    }

    #[test]
    fn ideal_matches_factorial_product(theta in 0.1f64..5.0, n1 in 1.0f64..100.0) {
        let t = ThetaParam::new(theta).unwrap();
        let h = FrequencyHistogram::ideal(t, n1, 101).unwrap();
        for x in 1..=100u64 {
            let num: f64 = (1..=x).map(|k| k as f64).product();
            let den: f64 = (1..=x).map(|k| k as f64 + theta).product();
            let closed = n1 * num / den;
            prop_assert!((h.get(x + 1) - closed).abs() <= 1e-12 * closed);
        }
    }

    #[test]
    fn histogram_conserves_tokens(c in counts_strategy()) {
        let h = build_histogram(&c);
        prop_assert_eq!(h.total_population(), c.total() as f64);
        prop_assert_eq!(h.species_count(), c.len() as f64);
    }

    #[test]
    fn smoothed_distributions_sum_to_one(c in counts_strategy(), p in 0.01f64..0.99, head_frac in 0.0f64..1.0) {
        if let Ok(d) = good_turing_smooth(&c) {
            prop_assert!((d.total() - 1.0).abs() < 1e-9);
            prop_assert!(d.species.iter().all(|s| s.probability > 0.0));
            let h = build_histogram(&c);
            prop_assert_eq!(d.unseen_mass, h.get(1) / h.total_population());
        }
        let ranking = build_ranking(&c, &RankingCriteria::default());
        let head = (head_frac * c.len() as f64) as usize;
        let d = geometric_tail_smooth(&c, &ranking, p, head).unwrap();
        prop_assert!((d.total() - 1.0).abs() < 1e-9);
        if let Ok(p) = default_geometric_p(&c) {
            let d = geometric_tail_smooth(&c, &ranking, p, 0).unwrap();
            prop_assert!((d.total() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ranking_is_a_deterministic_total_order(c in counts_strategy(), bo in counts_strategy()) {
        let criteria = RankingCriteria::with_backoff(bo.clone());
        let r = build_ranking(&c, &criteria);
        prop_assert_eq!(&r, &build_ranking(&c, &criteria));
        prop_assert_eq!(r.len(), c.len());
        let key = |s: &str| {
            (
                std::cmp::Reverse(c.get(s).unwrap()),
                std::cmp::Reverse(bo.get(s).unwrap_or(0)),
                c.appearance_index(s).unwrap(),
                s.to_owned(),
            )
        };
        for w in r.windows(2) {
            prop_assert_eq!(key(&w[0]).cmp(&key(&w[1])), Ordering::Less);
        }
    }

    #[test]
    fn beta_theta_inverse(theta in 1.0001f64..50.0) {
        let back = theta_of_beta(beta_of_theta(theta).unwrap()).unwrap();
        prop_assert!((back - theta).abs() <= 1e-12 * theta);
    }

    #[test]
    fn laws_decrease_in_rank(theta in 1.01f64..6.0, scale in 0.01f64..10.0, r in 1.0f64..1e5, dr in 0.01f64..100.0) {
        // strict decrease is only resolvable above the subnormal range;
        // β = 1/(θ-1) reaches 100 here, so r^(-β) underflows long before 1e5
        let p = AsymptoteSpec::power(theta, scale).unwrap();
        let (a, b) = (p.frequency_at(r).unwrap(), p.frequency_at(r + dr).unwrap());
        prop_assert!(b <= a);
        prop_assert!(b < a || a < f64::MIN_POSITIVE);
        let e = AsymptoteSpec::exponential(scale, 1.0 / theta).unwrap();
        let (a, b) = (e.frequency_at(r).unwrap(), e.frequency_at(r + dr).unwrap());
        prop_assert!(b <= a);
        prop_assert!(b < a || a < f64::MIN_POSITIVE);
    }

    #[test]
    fn geometric_pmf_is_non_increasing(p in 0.001f64..0.999, r in 1u64..500) {
        prop_assert!(geometric_pmf(p, r + 1).unwrap() <= geometric_pmf(p, r).unwrap());
    }
}
