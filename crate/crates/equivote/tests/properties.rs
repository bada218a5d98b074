//! Randomized structural invariants: permutation-group laws, equivariance of
//! the histogram action, agreement between the fast and general tie-breaking
//! algorithms, and monotonicity of coin feasibility.

use std::collections::BTreeSet;

use proptest::prelude::*;

use equivote::groups::{fpd_from_stab, stab_histogram};
use equivote::impossibility::feasible;
use equivote::likelihood::{sample_profile, DistributionFamily};
use equivote::prefs::{Perm, Pref, PriorityOrder, Profile, Setting, Space};
use equivote::rules::{evaluate, RuleSpec};
use equivote::tiebreak::{mfp_fast, mfp_general, TieBreaker};

/// A random full-ranking profile over m alternatives.
fn full_profile(m_range: std::ops::RangeInclusive<usize>, max_n: usize) -> impl Strategy<Value = (usize, Profile)> {
    m_range.prop_flat_map(move |m| {
        let rankings = Space::full_rankings(m).unwrap().enumerate();
        let k = rankings.len();
        prop::collection::vec(0..k, 1..=max_n).prop_map(move |idxs| {
            let votes = idxs.iter().map(|&i| rankings[i].clone()).collect();
            (m, Profile::new(votes).unwrap())
        })
    })
}

fn random_perm(m: usize) -> impl Strategy<Value = Perm> {
    let all = Perm::all(m);
    let k = all.len();
    (0..k).prop_map(move |i| all[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_with_inverse_is_identity((m, _) in full_profile(2..=5, 1)) {
        // piggyback on the m generator only
        for sigma in Perm::all(m) {
            let id = sigma.compose(&sigma.inverse());
            prop_assert!(id.is_identity());
        }
    }

    #[test]
    fn profile_and_histogram_actions_commute(
        (m, p) in full_profile(2..=4, 6),
        idx in 0usize..24,
    ) {
        let all = Perm::all(m);
        let sigma = &all[idx % all.len()];
        prop_assert_eq!(p.apply(sigma).histogram(), p.histogram().apply(sigma));
    }

    #[test]
    fn permutation_action_is_compatible_with_composition(
        (m, p) in full_profile(2..=4, 5),
        i in 0usize..24,
        j in 0usize..24,
    ) {
        let all = Perm::all(m);
        let (s, t) = (&all[i % all.len()], &all[j % all.len()]);
        prop_assert_eq!(
            p.apply(t).apply(s).histogram(),
            p.apply(&s.compose(t)).histogram()
        );
    }

    #[test]
    fn stabilizer_is_a_group((m, p) in full_profile(2..=4, 6)) {
        let h = p.histogram();
        let stab = stab_histogram(&h, m).unwrap();
        for a in stab.elements() {
            prop_assert!(h.apply(a) == h);
            for b in stab.elements() {
                prop_assert!(stab.contains(&a.compose(b)));
            }
            prop_assert!(stab.contains(&a.inverse()));
        }
    }

    #[test]
    fn fixed_decisions_are_stable((m, p) in full_profile(2..=4, 6)) {
        let decisions: BTreeSet<Pref> = (1..=m as u8).map(|a| Pref::list(vec![a])).collect();
        let stab = stab_histogram(&p.histogram(), m).unwrap();
        for d in fpd_from_stab(&stab, &decisions) {
            for sigma in stab.elements() {
                prop_assert_eq!(sigma.apply_pref(&d), d.clone());
            }
        }
    }

    #[test]
    fn priority_order_is_total_and_consistent(m in 2usize..=4, sigma in (2usize..=4).prop_flat_map(random_perm)) {
        let m = sigma.m().min(m).max(2);
        let prio = PriorityOrder::default_for(m);
        let prefs = Space::full_rankings(m).unwrap().enumerate();
        let mut sorted = prefs.clone();
        sorted.sort_by(|a, b| prio.cmp_prefs(a, b).reverse());
        // highest priority first = ascending natural order for the default
        prop_assert_eq!(sorted, prefs);
    }

    #[test]
    fn fast_and_general_tiebreaks_agree((m, p) in full_profile(2..=4, 6)) {
        let setting = Setting::parse("Lm>L1", m).unwrap();
        let prio = PriorityOrder::default_for(m);
        let backup = TieBreaker::Lex;
        let d = evaluate(&RuleSpec::Plurality, &p.histogram(), &setting).unwrap();
        let fast = mfp_fast(&p, &d, &backup, &setting, &prio).unwrap();
        let general = mfp_general(&p, &d, &backup, &setting, &prio).unwrap();
        prop_assert_eq!(fast, general);
    }

    #[test]
    fn feasibility_is_monotone_in_the_coin_set(
        coins in prop::collection::btree_set(1u64..10, 1..5),
        extra in 1u64..10,
        n in 1u64..60,
    ) {
        let mut bigger = coins.clone();
        bigger.insert(extra);
        if feasible(n, &coins) {
            prop_assert!(feasible(n, &bigger));
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed(seed in any::<u64>(), n in 1usize..20) {
        let dists = vec![DistributionFamily::ImpartialCulture; n];
        let a = sample_profile(&dists, 3, seed).unwrap();
        let b = sample_profile(&dists, 3, seed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn rules_are_anonymous((m, p) in full_profile(2..=4, 6), rot in 0usize..6) {
        // evaluating the histogram makes anonymity structural; spot-check that
        // vote order really is irrelevant end to end
        let setting = Setting::parse("Lm>L1", m).unwrap();
        let mut votes = p.votes.clone();
        let len = votes.len();
        votes.rotate_left(rot % len);
        let q = Profile::new(votes).unwrap();
        for rule in [RuleSpec::Plurality, RuleSpec::Borda, RuleSpec::Maximin] {
            prop_assert_eq!(
                evaluate(&rule, &p.histogram(), &setting).unwrap(),
                evaluate(&rule, &q.histogram(), &setting).unwrap()
            );
        }
    }

    #[test]
    fn rule_winner_sets_are_neutral((m, p) in full_profile(2..=3, 5), i in 0usize..6) {
        let all = Perm::all(m);
        let sigma = &all[i % all.len()];
        let setting = Setting::parse("Lm>L1", m).unwrap();
        for rule in [RuleSpec::Plurality, RuleSpec::Borda, RuleSpec::Veto, RuleSpec::Maximin] {
            let winners = evaluate(&rule, &p.histogram(), &setting).unwrap();
            let mapped: BTreeSet<Pref> = winners.iter().map(|d| sigma.apply_pref(d)).collect();
            prop_assert_eq!(
                evaluate(&rule, &p.apply(sigma).histogram(), &setting).unwrap(),
                mapped
            );
        }
    }
}
