//! One test per acceptance criterion; the per-test pass/fail lines are the
//! criterion report. Criteria about the command surface shell out to the
//! binary, the exhaustive-search and exactness criteria drive the library
//! directly.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use domlab_core::constructions::hat_mechanism;
use domlab_core::domains::{crossing_state, sample_cardinal, DomainKind, DomainSpec};
use domlab_core::dominance::ud1_at;
use domlab_core::search::{mechanism_cursor, mine, mine_range};
use domlab_core::testkit::{gen_mechanism, gen_strict_state, rng_for, GenCfg};
use domlab_core::verify::{verify_ud, Notion};
use domlab_core::{
    derive_seed, AgentSet, Caps, OmegaSpec, OutcomeSpace, Problem, Scf, SearchSpace,
    VerdictStatus, DEFAULT_ROOT_SEED,
};
use rand::Rng;

fn domlab(args: &[&str]) -> (Output, Duration) {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_domlab"))
        .args(args)
        .env_remove("DOMLAB_CAPS")
        .output()
        .expect("binary runs");
    (out, started.elapsed())
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

/// Search space used throughout: strict-all domain at two outcomes, the
/// unanimity-plus-crossing domain at three.
fn space(
    outcomes: usize,
    shape: (usize, usize),
    q: u32,
    notion: Notion,
    deterministic: bool,
) -> SearchSpace {
    let outcomes = OutcomeSpace::alphabetic(outcomes);
    let agents = AgentSet::numbered(2);
    let domain = if outcomes.len() == 2 {
        DomainSpec { kind: DomainKind::StrictAll, extra: vec![] }
    } else {
        let crossing = crossing_state(&agents, &outcomes).unwrap();
        DomainSpec { kind: DomainKind::UnanimityStrict, extra: vec![crossing] }
    };
    SearchSpace {
        agents,
        outcomes,
        strategy_counts: vec![shape.0, shape.1],
        q,
        deterministic_only: deterministic,
        notion,
        domain,
    }
}

#[test]
fn criterion_1_lemma5_table_reproduces_exactly() {
    let (out, elapsed) = domlab(&["reproduce", "lemma5"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "reproduction failed:\n{text}");
    assert!(text.contains("| {a,b}") && text.contains("| {a,c}"), "{text}");
    assert!(text.contains("PASS"), "{text}");
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}, budget is 1s");
}

#[test]
fn criterion_2_theorem4_round3_projections_are_exact() {
    let started = Instant::now();
    for target in ["theorem4:4", "theorem4:5"] {
        let (out, _) = domlab(&["reproduce", target]);
        let text = stdout(&out);
        assert_eq!(out.status.code(), Some(0), "{target} failed:\n{text}");
        assert!(text.contains("round-3 projections exact"), "{text}");
        assert!(text.contains("verification verified"), "{text}");
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}, budget is 10s");
}

#[test]
fn criterion_3_theorem5_proof_steps_hold_for_sampled_representations() {
    let (out, elapsed) = domlab(&["reproduce", "theorem5:12", "--samples", "50"]);
    let text = stdout(&out);
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}, budget is 30s");
    // The canonical representations satisfy every claimed domination and both
    // first-round projections; sampled representations whose middle utility
    // falls close enough to the top drive the computed threshold past any
    // fixed cap, where the claimed chain of dominations has no members left.
    // The audit reports those honestly, so this criterion stays red.
    assert_eq!(
        out.status.code(),
        Some(0),
        "sampled representations defeat the claimed threshold dominations:\n{}",
        text.lines()
            .filter(|l| l.contains("FAIL") || l.contains("not beaten"))
            .take(12)
            .collect::<Vec<_>>()
            .join("\n")
    );
}

#[test]
fn criterion_4_ud_mines_come_back_empty() {
    let started = Instant::now();
    let caps = Caps::default();
    let mut runs: Vec<SearchSpace> = Vec::new();
    for q in [2, 3, 4] {
        runs.push(space(2, (2, 2), q, Notion::Ud, false));
        runs.push(space(3, (2, 2), q, Notion::Ud, false));
    }
    for shape in [(2, 3), (3, 2), (3, 3)] {
        runs.push(space(2, shape, 2, Notion::Ud, false));
    }
    for s in &runs {
        let report = mine(s, &caps).unwrap();
        assert!(
            report.counterexamples.is_empty(),
            "UD counterexample in {}",
            s.descriptor()
        );
        assert_eq!(report.unresolved, 0, "unresolved pairs in {}", s.descriptor());
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30 * 60), "took {elapsed:?}, budget is 30min");
}

#[test]
fn criterion_5_udinf_mines_empty_at_two_outcomes_and_rediscover_the_hat_pair() {
    let started = Instant::now();
    let caps = Caps::default();
    for shape in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        for q in [2, 3, 4] {
            let s = space(2, shape, q, Notion::Udinf, false);
            let report = mine(&s, &caps).unwrap();
            assert!(
                report.counterexamples.is_empty(),
                "UDINF counterexample in {}",
                s.descriptor()
            );
        }
    }

    let s = space(3, (3, 3), 4, Notion::Udinf, false);
    let hat = hat_mechanism(&s.outcomes, "a", "b", "c").unwrap();
    let cursor = mechanism_cursor(&s, &hat).unwrap();
    let report = mine_range(&s, cursor, cursor + 1, &caps).unwrap();
    let found = report
        .counterexamples
        .iter()
        .find(|c| c.cursor == cursor)
        .expect("the hat mechanism must be rediscovered as a certified hit");
    // The miner names strategies s1..s3; compare cell by cell.
    for profile in hat.profiles() {
        assert_eq!(
            found.mechanism.outcome_lottery(&profile),
            hat.outcome_lottery(&profile),
            "rediscovered mechanism differs at {profile:?}"
        );
    }
    assert_eq!(report.unresolved, 0);
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60 * 60), "took {elapsed:?}, budget is 60min");
}

#[test]
fn criterion_6_deterministic_mines_find_no_nondictatorial_implementations() {
    let started = Instant::now();
    let caps = Caps::default();
    for outcomes in [2, 3] {
        for notion in [Notion::Ud, Notion::Udinf] {
            let s = space(outcomes, (2, 2), 1, notion, true);
            let report = mine(&s, &caps).unwrap();
            assert!(
                report.counterexamples.is_empty(),
                "deterministic counterexample in {}",
                s.descriptor()
            );
            assert_eq!(report.unresolved, 0, "unresolved pairs in {}", s.descriptor());
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(5 * 60), "took {elapsed:?}, budget is 5min");
}

#[test]
fn criterion_7_property_suites_pass() {
    // The randomized suites live beside the library; run them as their own
    // process so this criterion reports their verdict even when invoked alone.
    let manifest = concat!(env!("CARGO_MANIFEST_DIR"), "/../../Cargo.toml");
    let out = Command::new(env!("CARGO"))
        .args(["test", "--manifest-path", manifest, "-p", "domlab-core", "--test", "properties"])
        .output()
        .expect("cargo runs");
    let combined = format!(
        "{}{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.status.success(), "property suites failed:\n{combined}");
    assert!(combined.contains("7 passed"), "expected all seven suites:\n{combined}");
}

#[test]
fn criterion_8_all_mode_ud_verdicts_replay_exactly() {
    let caps = Caps::default();
    let mut rng = rng_for(derive_seed(DEFAULT_ROOT_SEED, 88));
    let cfg = GenCfg {
        max_agents: 2,
        max_strategies: 3,
        max_outcomes: 3,
        weight_scale: 4,
        deterministic: false,
    };
    let mut verified = 0usize;
    let mut refuted = 0usize;
    for case in 0..100u64 {
        let m = gen_mechanism(&mut rng, &cfg);
        let num_states = rng.gen_range(2..=4usize);
        let mut domain = Vec::new();
        while domain.len() < num_states {
            let s = gen_strict_state(&mut rng, m.agents(), m.outcomes());
            if !domain.contains(&s) {
                domain.push(s);
            }
        }
        let mut choices: Vec<usize> =
            (0..domain.len()).map(|_| rng.gen_range(0..m.outcomes().len())).collect();
        // Prefer surjective targets when the domain is large enough to allow one.
        for _ in 0..30 {
            let mut seen = vec![false; m.outcomes().len()];
            for &c in &choices {
                seen[c] = true;
            }
            if seen.iter().all(|&b| b) || domain.len() < m.outcomes().len() {
                break;
            }
            choices =
                (0..domain.len()).map(|_| rng.gen_range(0..m.outcomes().len())).collect();
        }
        let problem = Problem {
            agents: m.agents().clone(),
            outcomes: m.outcomes().clone(),
            omega: OmegaSpec::All,
            scf: Scf::new(domain.clone(), choices.clone()).unwrap(),
        };
        let report = verify_ud(&m, &problem, &caps).unwrap();
        match report.status {
            VerdictStatus::Verified => {
                verified += 1;
                for (idx, state) in domain.iter().enumerate() {
                    for j in 0..200u64 {
                        let seed = derive_seed(DEFAULT_ROOT_SEED, case * 100_000 + (idx as u64) * 500 + j);
                        let u = sample_cardinal(state, seed);
                        let survivors = ud1_at(&m, &u);
                        for profile in m.profiles() {
                            if profile.iter().enumerate().any(|(i, &s)| !survivors.set(i).contains(&s)) {
                                continue;
                            }
                            assert_eq!(
                                m.outcome_lottery(&profile).degenerate_on(),
                                Some(choices[idx]),
                                "case {case}: verified verdict violated by a sampled representation"
                            );
                        }
                    }
                }
            }
            VerdictStatus::Refuted => {
                refuted += 1;
                let state_outcome = report
                    .states
                    .iter()
                    .find(|s| s.verdict.status == VerdictStatus::Refuted)
                    .expect("refuted report names a state");
                let witness = state_outcome.verdict.witness.as_ref().expect("witness present");
                let u = witness.cardinal.clone();
                let survivors = ud1_at(&m, &u);
                let profile: Vec<usize> = witness
                    .profile
                    .iter()
                    .enumerate()
                    .map(|(i, label)| {
                        m.strategy_labels(i).iter().position(|l| l == label).expect("known label")
                    })
                    .collect();
                for (i, &s) in profile.iter().enumerate() {
                    assert!(
                        survivors.set(i).contains(&s),
                        "case {case}: witness profile does not survive its own representation"
                    );
                }
                let f_choice = choices[witness.state_index];
                assert_ne!(
                    m.outcome_lottery(&profile).degenerate_on(),
                    Some(f_choice),
                    "case {case}: witness profile actually meets the target"
                );
            }
            VerdictStatus::Inconclusive => {
                panic!("case {case}: inconclusive at a size the exact path must cover");
            }
        }
    }
    assert!(verified + refuted == 100);
    assert!(refuted > 0, "the sample should contain refutations");
}
