mod common;

use dseu_core::aa::{aa_value, conditional_act, independence_witness, realize_lottery_act, reduce_act, Lottery, LotteryAct};
use dseu_core::acts::{splice_event, splice_time};
use dseu_core::audit::{run_audit, AuditConfig, AuditContext};
use dseu_core::bracketing::{bracket_act, bracket_profile, independent_selection, utility_bins};
use dseu_core::elicitation::section2_demo;
use dseu_core::equivalents::{time_equivalent_act, time_equivalent_bisect, time_equivalent_value};
use dseu_core::oracles::{choquet_oracle, seu_oracle, Capacity, Preference, PreferenceOracle};
use dseu_core::sampling::{random_profile, random_simplex, random_time_set};
use dseu_core::{Beliefs, DiscountRate, DseuModel, Event, GridAct, StateSet, StepProfile, TimeInterval, TimeSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn lambda() -> impl Strategy<Value = DiscountRate> {
    (0.05f64..5.0).prop_map(|l| DiscountRate::new(l).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn measure_is_additive_on_disjoint_sets(r in lambda(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = random_time_set(&mut g, r, 4);
        let b = random_time_set(&mut g, r, 4).difference(&a);
        prop_assert!(a.is_disjoint(&b));
        prop_assert!((r.mass(&a.union(&b)) - r.mass(&a) - r.mass(&b)).abs() <= 1e-14);
    }

    #[test]
    fn measure_of_complement(r in lambda(), seed in any::<u64>()) {
        let a = random_time_set(&mut rng(seed), r, 4);
        prop_assert!((r.mass(&a) + r.mass(&a.complement()) - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn shift_scales_mass(r in lambda(), p in 0.0f64..0.99, seed in any::<u64>()) {
        let a = random_time_set(&mut rng(seed), r, 4);
        let t = r.quantile(p).unwrap();
        prop_assert!((r.mass(&a.shifted(t).unwrap()) - r.discount(t) * r.mass(&a)).abs() <= 1e-14);
    }

    #[test]
    fn quantile_inverts_cdf(r in lambda(), p in 0.0f64..0.999) {
        prop_assert!((r.cdf(r.quantile(p).unwrap()).unwrap() - p).abs() <= 1e-14);
    }

    #[test]
    fn split_pieces_carry_their_weight(r in lambda(), lo in 0.0f64..2.0, len in 0.01f64..3.0, seed in any::<u64>()) {
        let i = TimeInterval::new(lo, lo + len).unwrap();
        let w = random_simplex(&mut rng(seed), 4);
        let parts = r.split_interval(&i, &w).unwrap();
        prop_assert_eq!(parts.first().unwrap().lo(), lo);
        prop_assert_eq!(parts.last().unwrap().hi(), lo + len);
        let total = r.interval_mass(&i);
        for (p, w) in parts.iter().zip(&w) {
            prop_assert!((r.interval_mass(p) - w * total).abs() <= 1e-12);
        }
    }

    #[test]
    fn splice_at_zero_is_the_suffix(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 3, 4);
        let h = common::act(&mut g, &sp, &m, &xs, 5);
        let f = common::act(&mut g, &sp, &m, &xs, 5);
        prop_assert_eq!(splice_time(&h, 0.0, &f).unwrap(), f);
    }

    #[test]
    fn splicing_nests(seed in any::<u64>(), p1 in 0.0f64..0.5, p2 in 0.5f64..0.99) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 2, 4);
        let (h, k, f) = (common::act(&mut g, &sp, &m, &xs, 5), common::act(&mut g, &sp, &m, &xs, 5), common::act(&mut g, &sp, &m, &xs, 5));
        let (s, t) = (m.rate.quantile(p1).unwrap(), m.rate.quantile(p2).unwrap());
        // h on [0,s), then k delayed by s until s+t, then f delayed by s+t
        let nested = splice_time(&h, s, &splice_time(&k, t, &f).unwrap()).unwrap();
        for (i, p) in nested.profiles().iter().enumerate() {
            for &u in &[0.0, s * 0.5, s, s + t * 0.5, s + t, s + t * 1.5 + 1.0] {
                let want = if u < s {
                    h.outcome_at(i, u)
                } else if u < s + t {
                    k.outcome_at(i, u - s)
                } else {
                    f.outcome_at(i, u - s - t)
                };
                prop_assert_eq!(p.outcome_at(u), want);
            }
        }
    }

    #[test]
    fn event_splice_and_its_complement(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 3, 4);
        let (f, h) = (common::act(&mut g, &sp, &m, &xs, 5), common::act(&mut g, &sp, &m, &xs, 5));
        let states = StateSet::from_bits(g.gen_range(0..8));
        let ev = Event::new(states, random_time_set(&mut g, m.rate, 3));
        let a = splice_event(&f, &ev, &h).unwrap();
        if let Some(c) = ev.complement(3) {
            prop_assert_eq!(splice_event(&h, &c, &f).unwrap(), a);
        }
    }

    #[test]
    fn fubini_duality(seed in any::<u64>()) {
        let mut g = rng(seed);
        let n = g.gen_range(1..=6);
        let (sp, xs, m) = common::model(&mut g, n, 5);
        let f = common::act(&mut g, &sp, &m, &xs, 6);
        prop_assert!((m.act_value(&f).unwrap() - m.act_value_dual(&f).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn pointwise_improvement_raises_value(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 3, 4);
        let f = common::act(&mut g, &sp, &m, &xs, 5);
        let best = m.util.best().0.clone();
        let better = f.map_profiles(|_, p| p.paste(&random_time_set(&mut rng(seed ^ 1), m.rate, 2), &StepProfile::constant(best.clone())));
        prop_assert!(m.act_value(&better).unwrap() >= m.act_value(&f).unwrap() - 1e-12);
    }

    #[test]
    fn affine_utility_keeps_the_order(seed in any::<u64>(), a in 0.1f64..10.0, b in -10.0f64..10.0) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 3, 4);
        let (f, h) = (common::act(&mut g, &sp, &m, &xs, 5), common::act(&mut g, &sp, &m, &xs, 5));
        let scaled = DseuModel::new(m.rate, m.util.affine(a, b).unwrap(), m.beliefs.clone());
        let (v, w) = (m.act_value(&f).unwrap(), m.act_value(&h).unwrap());
        let (sv, sw) = (scaled.act_value(&f).unwrap(), scaled.act_value(&h).unwrap());
        prop_assert!(((sv - b) - a * v).abs() <= 1e-12 * (1.0 + a));
        if (v - w).abs() > 1e-9 {
            prop_assert_eq!(v > w, sv > sw);
        }
    }

    #[test]
    fn null_state_is_ignored(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (sp, xs, mut m) = common::model(&mut g, 3, 4);
        let mut w = random_simplex(&mut g, 2);
        w.insert(1, 0.0);
        m.beliefs = Beliefs::on_space(&sp, &w).unwrap();
        let f = common::act(&mut g, &sp, &m, &xs, 5);
        let other = random_profile(&mut g, m.rate, &xs, 5);
        let changed = f.map_profiles(|i, p| if i == 1 { other.clone() } else { p.clone() });
        prop_assert_eq!(m.act_value(&f).unwrap(), m.act_value(&changed).unwrap());
    }

    #[test]
    fn stationarity_under_seu(seed in any::<u64>(), p in 0.0f64..0.99) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 3, 4);
        let (f, k, h) = (common::act(&mut g, &sp, &m, &xs, 5), common::act(&mut g, &sp, &m, &xs, 5), common::act(&mut g, &sp, &m, &xs, 5));
        let t = m.rate.quantile(p).unwrap();
        let d0 = m.act_value(&f).unwrap() - m.act_value(&k).unwrap();
        let d1 = m.act_value(&splice_time(&h, t, &f).unwrap()).unwrap() - m.act_value(&splice_time(&h, t, &k).unwrap()).unwrap();
        prop_assert!((d1 - m.rate.discount(t) * d0).abs() <= 1e-12);
    }

    #[test]
    fn time_equivalent_round_trip(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 3, 4);
        let f = common::act(&mut g, &sp, &m, &xs, 5);
        let (x, y) = (m.util.best().0.clone(), m.util.worst().0.clone());
        let te = time_equivalent_act(&m, &f, &x, &y).unwrap();
        let v = m.act_value(&GridAct::deterministic(sp, te.profile(&x, &y))).unwrap();
        prop_assert!((v - m.act_value(&f).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn time_equivalent_is_monotone(r in lambda(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let sp = common::space(1);
        let xs = common::outcomes(2);
        let m = DseuModel::new(r, dseu_core::UtilityModel::new([(xs[0].clone(), 0.0), (xs[1].clone(), 1.0)]).unwrap(), Beliefs::uniform(&sp));
        let ta = time_equivalent_value(&m, a, &xs[1], &xs[0]).unwrap().mass(r);
        let tb = time_equivalent_value(&m, b, &xs[1], &xs[0]).unwrap().mass(r);
        if a < b { prop_assert!(ta <= tb); } else { prop_assert!(ta >= tb); }
    }

    #[test]
    fn bisection_tracks_closed_form(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 2, 4);
        let f = common::act(&mut g, &sp, &m, &xs, 5);
        let (x, y) = (m.util.best().0.clone(), m.util.worst().0.clone());
        let closed = time_equivalent_act(&m, &f, &x, &y).unwrap();
        let b = time_equivalent_bisect(&seu_oracle(m.clone(), 0.0).unwrap(), &f, &x, &y, 1e-9).unwrap();
        prop_assert!(b.queries <= 64);
        if let (Some(s), Some(t)) = (b.finite(), closed.finite()) {
            prop_assert!((s - t).abs() <= 1e-9);
        }
    }

    #[test]
    fn walkthrough_holds(r in lambda(), e in 0.01f64..0.9, share in 0.01f64..0.99) {
        let f = (1.0 - e) * share;
        prop_assert!(section2_demo(r, e, f).unwrap().holds(1e-12));
    }

    #[test]
    fn additive_choquet_is_seu(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 3, 4);
        let seu = seu_oracle(m.clone(), 1e-9).unwrap();
        let ch = choquet_oracle(m.rate, m.util.clone(), Capacity::additive(sp.clone(), &m.beliefs).unwrap(), 1e-9).unwrap();
        let (f, h) = (common::act(&mut g, &sp, &m, &xs, 5), common::act(&mut g, &sp, &m, &xs, 5));
        prop_assert_eq!(seu.compare(&f, &h).unwrap(), ch.compare(&f, &h).unwrap());
    }

    #[test]
    fn oracle_is_antisymmetric(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 3, 4);
        let or = seu_oracle(m.clone(), 1e-12).unwrap();
        let (f, h) = (common::act(&mut g, &sp, &m, &xs, 5), common::act(&mut g, &sp, &m, &xs, 5));
        prop_assert_eq!(or.compare(&f, &h).unwrap(), or.compare(&h, &f).unwrap().reversed());
        prop_assert_eq!(or.compare(&f, &f).unwrap(), Preference::Indifferent);
    }

    #[test]
    fn aa_value_matches(seed in any::<u64>()) {
        let mut g = rng(seed);
        let n = g.gen_range(1..=5);
        let (sp, xs, m) = common::model(&mut g, n, 4);
        let f = common::act(&mut g, &sp, &m, &xs, 6);
        prop_assert!((aa_value(&m, &f).unwrap() - m.act_value(&f).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn independence_witness_sides_agree(seed in any::<u64>(), p in 0.01f64..0.99) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 3, 4);
        let f = common::act(&mut g, &sp, &m, &xs, 5);
        let lots = (0..3).map(|_| Lottery::new(xs.iter().cloned().zip(random_simplex(&mut g, xs.len()))).unwrap()).collect();
        let gl = LotteryAct::new(sp, lots).unwrap();
        let (lhs, rhs) = independence_witness(m.rate, m.rate.quantile(p).unwrap(), &gl, &f).unwrap();
        prop_assert!(lhs.max_gap(&rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn realization_is_onto(seed in any::<u64>(), p in 0.01f64..0.99) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 2, 4);
        let lots = (0..2).map(|_| Lottery::new(xs.iter().cloned().zip(random_simplex(&mut g, xs.len()))).unwrap()).collect();
        let gl = LotteryAct::new(sp, lots).unwrap();
        let t = m.rate.quantile(p).unwrap();
        let h = realize_lottery_act(m.rate, t, &gl).unwrap();
        prop_assert!(conditional_act(m.rate, &h, t).unwrap().max_gap(&gl).unwrap() <= 1e-12);
        let reduced = reduce_act(m.rate, &h);
        prop_assert_eq!(reduced.space().len(), 2);
    }

    #[test]
    fn brackets_sandwich_and_shrink(seed in any::<u64>(), e in 0u32..7) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 3, 5);
        let n = 1usize << e;
        let p = random_profile(&mut g, m.rate, &xs, 10);
        let b = bracket_profile(&m, &p, n).unwrap();
        prop_assert!(b.sandwiched(1e-12));
        prop_assert!(b.gap <= 1.0 / n as f64 + 1e-12);
        let f = common::act(&mut g, &sp, &m, &xs, 6);
        let a = bracket_act(&m, &f, n).unwrap();
        prop_assert!(a.sandwiched(1e-12));
        prop_assert!(a.gap <= 1.0 / n as f64 + 1e-12);
    }

    #[test]
    fn selections_are_independent_of_bins(seed in any::<u64>(), n in 1usize..20, q in 0.0f64..0.999) {
        let mut g = rng(seed);
        let (_, xs, m) = common::model(&mut g, 1, 5);
        let p = random_profile(&mut g, m.rate, &xs, 10);
        let bins = utility_bins(&m, &p, n).unwrap();
        let sel = independent_selection(m.rate, &bins, q).unwrap();
        prop_assert!((m.rate.mass(&sel) - q).abs() <= 1e-12);
        for b in &bins {
            prop_assert!((m.rate.mass(&sel.intersection(b)) - q * m.rate.mass(b)).abs() <= 1e-12);
        }
        let cover = bins.iter().fold(TimeSet::empty(), |acc, b| acc.union(b));
        prop_assert_eq!(cover, TimeSet::whole());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn audit_is_reproducible(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (sp, xs, m) = common::model(&mut g, 2, 3);
        let or = seu_oracle(m.clone(), 1e-12).unwrap();
        let ctx = AuditContext::probe(&or, sp, &xs, m.rate).unwrap();
        let cfg = AuditConfig { samples: 40, seed, horizon_max: 64 };
        let a = run_audit(&or, &ctx, &cfg, Some((&m, &m))).unwrap();
        prop_assert!(a.all_pass());
        prop_assert_eq!(a, run_audit(&or, &ctx, &cfg, Some((&m, &m))).unwrap());
    }
}
