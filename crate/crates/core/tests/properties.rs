//! Randomized invariant suites over the deletion engine. Every suite runs at
//! least 500 seeded cases.

use domlab_core::dominance::{
    dominates_at, expected_utility, has_non_domination_property, robust_geq, robust_gt, robust_ud1,
    robust_udinf, ud1_at, udinf_at,
};
use domlab_core::domains::sample_cardinal;
use domlab_core::lp::{lp_feasible, lp_witness, LinearSystem};
use domlab_core::testkit::{gen_lottery, gen_mechanism, gen_space, gen_strict_preference, rng_for, GenCfg};
use domlab_core::{
    derive_seed, AgentSet, CardinalState, Lottery, Mechanism, OrdinalState, OutcomeSpace,
    Preference, Rat, Restriction,
};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

/// Strict preference, or a weak one obtained by merging an adjacent pair of
/// classes. Deletion semantics must not depend on strictness.
fn gen_preference(rng: &mut ChaCha12Rng, space: &OutcomeSpace) -> Preference {
    let strict = gen_strict_preference(rng, space);
    if space.len() < 2 || rng.gen_bool(0.7) {
        return strict;
    }
    let mut classes: Vec<Vec<usize>> = strict.classes().to_vec();
    let j = rng.gen_range(0..classes.len() - 1);
    let merged = classes.remove(j + 1);
    classes[j].extend(merged);
    classes[j].sort_unstable();
    Preference::from_classes(space, classes).expect("merged classes stay a partition")
}

fn gen_state(rng: &mut ChaCha12Rng, agents: &AgentSet, space: &OutcomeSpace) -> OrdinalState {
    OrdinalState::new(agents, (0..agents.len()).map(|_| gen_preference(rng, space)).collect())
        .expect("one preference per agent")
}

/// Deletes one dominated strategy at a time, picked uniformly among all
/// currently dominated ones, with dominators drawn from the surviving sets.
/// Any maximal order must land on the synchronous fixed point.
fn sequential_fixpoint(rng: &mut ChaCha12Rng, m: &Mechanism, u: &CardinalState) -> Restriction {
    let mut sets: Vec<Vec<usize>> =
        (0..m.num_agents()).map(|i| (0..m.num_strategies(i)).collect()).collect();
    loop {
        let r = Restriction::new(sets.clone());
        let mut dominated = Vec::new();
        for i in 0..m.num_agents() {
            for &s in r.set(i) {
                if r.set(i).iter().any(|&d| dominates_at(m, &r, i, d, s, u.agent(i))) {
                    dominated.push((i, s));
                }
            }
        }
        if dominated.is_empty() {
            return r;
        }
        let (i, s) = dominated[rng.gen_range(0..dominated.len())];
        sets[i].retain(|&x| x != s);
    }
}

#[test]
fn deletion_order_does_not_change_the_fixed_point() {
    let mut rng = rng_for(71001);
    let cfg = GenCfg { max_agents: 3, max_strategies: 4, ..GenCfg::default() };
    for case in 0..500u64 {
        let m = gen_mechanism(&mut rng, &cfg);
        let state = gen_state(&mut rng, m.agents(), m.outcomes());
        let u = sample_cardinal(&state, derive_seed(4000, case));
        let (synchronous, trace) = udinf_at(&m, &u);
        trace.validate(&m).unwrap();
        assert_eq!(sequential_fixpoint(&mut rng, &m, &u), synchronous);
    }
}

#[test]
fn rounds_shrink_monotonically() {
    let mut rng = rng_for(71002);
    let cfg = GenCfg::default();
    for case in 0..500u64 {
        let m = gen_mechanism(&mut rng, &cfg);
        let state = gen_state(&mut rng, m.agents(), m.outcomes());
        let u = sample_cardinal(&state, derive_seed(4100, case));
        let (survivors, trace) = udinf_at(&m, &u);
        for w in trace.rounds.windows(2) {
            assert!(w[1].survivors.is_subset_of(&w[0].survivors));
        }
        assert_eq!(trace.final_survivors(), &survivors);
        assert!(ud1_at(&m, &u).is_subset_of(&trace.rounds[0].survivors));
    }
}

#[test]
fn iterated_deletion_never_empties_a_strategy_set() {
    let mut rng = rng_for(71003);
    let cfg = GenCfg::default();
    for case in 0..500u64 {
        let m = gen_mechanism(&mut rng, &cfg);
        let state = gen_state(&mut rng, m.agents(), m.outcomes());
        let u = sample_cardinal(&state, derive_seed(4200, case));
        let (survivors, trace) = udinf_at(&m, &u);
        assert!(survivors.is_nonempty());
        for round in &trace.rounds {
            assert!(round.survivors.is_nonempty());
        }
    }
}

/// The representations of `pref` as a linear system over one utility level
/// per preference class, plus the expected-utility gap EU(better) - EU(worse)
/// as a strict or weak row.
fn representation_system(
    pref: &Preference,
    worse: &Lottery,
    better: &Lottery,
    strict_gap: bool,
) -> LinearSystem {
    let k = pref.num_classes();
    let mut sys = LinearSystem::new(k);
    for j in 0..k.saturating_sub(1) {
        let mut row = vec![Rat::zero(); k];
        row[j] = Rat::one();
        row[j + 1] = -Rat::one();
        sys.push_gt(row, Rat::zero());
    }
    let mut gap = vec![Rat::zero(); k];
    for (z, (mb, mw)) in better.mass().iter().zip(worse.mass()).enumerate() {
        gap[pref.rank(z)] += mb - mw;
    }
    if strict_gap {
        sys.push_gt(gap, Rat::zero());
    } else {
        sys.push_geq(gap, Rat::zero());
    }
    sys
}

#[test]
fn fosd_matches_the_lp_oracle_and_sampling() {
    let mut rng = rng_for(71004);
    let cfg = GenCfg::default();
    let pair = AgentSet::numbered(2);
    for case in 0..500u64 {
        let space = gen_space(&mut rng, &cfg);
        let pref = gen_preference(&mut rng, &space);
        let y = gen_lottery(&mut rng, &space, &cfg);
        let y_prime = gen_lottery(&mut rng, &space, &cfg);

        // All-representations weak dominance holds iff no representation
        // reverses it strictly; likewise strict dominance against a weak
        // reversal. The linear systems are the independent oracle.
        let geq = robust_geq(&pref, &y, &y_prime);
        assert_eq!(geq, !lp_feasible(&representation_system(&pref, &y, &y_prime, true)));
        let gt = robust_gt(&pref, &y, &y_prime);
        assert_eq!(gt, !lp_feasible(&representation_system(&pref, &y, &y_prime, false)));
        if gt {
            assert!(geq);
        }

        if geq {
            let holder = OrdinalState::new(&pair, vec![pref.clone(), pref.clone()]).unwrap();
            for k in 0..1000 {
                let u = sample_cardinal(&holder, derive_seed(4300, case * 1000 + k));
                assert!(
                    expected_utility(u.agent(0), &y) >= expected_utility(u.agent(0), &y_prime)
                );
            }
        } else {
            let x = lp_witness(&representation_system(&pref, &y, &y_prime, true))
                .expect("reversal is feasible when robust_geq fails");
            let u: Vec<Rat> = (0..space.len()).map(|z| x[pref.rank(z)].clone()).collect();
            assert!(expected_utility(&u, &y_prime) > expected_utility(&u, &y));
        }
    }
}

#[test]
fn robust_deletion_covers_every_sampled_representation() {
    let mut rng = rng_for(71005);
    let cfg = GenCfg::default();
    let mut cases = 0u64;
    while cases < 600 {
        let m = gen_mechanism(&mut rng, &cfg);
        let state = gen_state(&mut rng, m.agents(), m.outcomes());
        let (robust, robust_trace) = robust_udinf(&m, &state);
        robust_trace.validate(&m).unwrap();
        let robust_one = robust_ud1(&m, &state);
        for k in 0..10 {
            let u = sample_cardinal(&state, derive_seed(4400, cases * 97 + k));
            let (survivors, _) = udinf_at(&m, &u);
            assert!(survivors.is_subset_of(&robust));
            assert!(ud1_at(&m, &u).is_subset_of(&robust_one));
            cases += 1;
        }
    }
}

fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n)).map(|mask| (0..n).filter(|&s| mask & (1 << s) != 0).collect()).collect()
}

#[test]
fn no_product_set_avoiding_domination_exceeds_the_fixed_point() {
    let mut rng = rng_for(71006);
    let cfg = GenCfg { max_outcomes: 3, ..GenCfg::default() };
    let agents = AgentSet::numbered(2);
    let mut cases = 0u64;
    for (shape, mechs) in [(2usize, 7u64), (3, 6)] {
        let subsets = nonempty_subsets(shape);
        for mech in 0..mechs {
            let space = gen_space(&mut rng, &cfg);
            let labels: Vec<String> = (1..=shape).map(|s| format!("s{s}")).collect();
            let cells: Vec<Lottery> =
                (0..shape * shape).map(|_| gen_lottery(&mut rng, &space, &cfg)).collect();
            let m = Mechanism::new(
                agents.clone(),
                space.clone(),
                vec![labels.clone(), labels.clone()],
                cells,
            )
            .unwrap();
            for rep in 0..2u64 {
                let state = gen_state(&mut rng, &agents, &space);
                let u = sample_cardinal(&state, derive_seed(4500, mech * 31 + rep));
                let (survivors, _) = udinf_at(&m, &u);
                assert!(has_non_domination_property(&m, &survivors, &u));
                for s1 in &subsets {
                    for s2 in &subsets {
                        let cand = Restriction::new(vec![s1.clone(), s2.clone()]);
                        if has_non_domination_property(&m, &cand, &u) {
                            assert!(cand.is_subset_of(&survivors));
                        }
                        cases += 1;
                    }
                }
            }
        }
    }
    assert!(cases >= 500, "only {cases} product subsets scanned");
}

#[test]
fn one_round_survivors_for_an_agent_ignore_other_utilities() {
    let mut rng = rng_for(71007);
    let cfg = GenCfg::default();
    for case in 0..500u64 {
        let m = gen_mechanism(&mut rng, &cfg);
        let state = gen_state(&mut rng, m.agents(), m.outcomes());
        let u = sample_cardinal(&state, derive_seed(4600, case));
        let base = ud1_at(&m, &u);
        let i = rng.gen_range(0..m.num_agents());
        let other = gen_state(&mut rng, m.agents(), m.outcomes());
        let mut utils: Vec<Vec<Rat>> =
            sample_cardinal(&other, derive_seed(4700, case)).utils().to_vec();
        utils[i] = u.agent(i).to_vec();
        let patched = CardinalState::new(utils).unwrap();
        assert_eq!(ud1_at(&m, &patched).set(i), base.set(i));
    }
}
