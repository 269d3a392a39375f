use criterion::{black_box, criterion_group, criterion_main, Criterion};
use domlab_core::constructions::{TruncationHarness, TruncationParams};
use domlab_core::domains::{canonical_cardinal, crossing_state, DomainKind, DomainSpec};
use domlab_core::dominance::{robust_udinf, ud1_at};
use domlab_core::search::mine;
use domlab_core::testkit::{gen_mechanism, gen_strict_state, hat_problem, rng_for, GenCfg};
use domlab_core::verify::{verify_udinf, Notion};
use domlab_core::{AgentSet, Caps, OutcomeSpace, SearchSpace};

fn robust_deletion(c: &mut Criterion) {
    let (m, p) = hat_problem();
    let crossing = p.theta()[0].clone();
    c.bench_function("robust_udinf at the crossing state", |b| {
        b.iter(|| robust_udinf(black_box(&m), black_box(&crossing)))
    });
}

fn representation_wave(c: &mut Criterion) {
    let mut rng = rng_for(42);
    let m = gen_mechanism(&mut rng, &GenCfg::default());
    let u = canonical_cardinal(&gen_strict_state(&mut rng, m.agents(), m.outcomes()));
    c.bench_function("ud1_at on a random mechanism", |b| {
        b.iter(|| ud1_at(black_box(&m), black_box(&u)))
    });
}

fn full_verification(c: &mut Criterion) {
    let (m, p) = hat_problem();
    c.bench_function("verify_udinf over all representations", |b| {
        b.iter(|| verify_udinf(black_box(&m), black_box(&p)).unwrap())
    });
}

fn grid_mining(c: &mut Criterion) {
    let caps = Caps::default();
    for notion in [Notion::Ud, Notion::Udinf] {
        let space = SearchSpace {
            agents: AgentSet::numbered(2),
            outcomes: OutcomeSpace::alphabetic(2),
            strategy_counts: vec![2, 2],
            q: 4,
            deterministic_only: false,
            notion,
            domain: DomainSpec { kind: DomainKind::StrictAll, extra: vec![] },
        };
        let name = format!("mine 625 mechanisms, {notion:?}");
        c.bench_function(&name, |b| b.iter(|| mine(black_box(&space), &caps).unwrap()));
    }
}

fn truncation_audit(c: &mut Criterion) {
    let agents = AgentSet::numbered(2);
    let space = OutcomeSpace::alphabetic(3);
    let theta_bar = crossing_state(&agents, &space).unwrap();
    let params = TruncationParams::new(12).unwrap();
    let harness = TruncationHarness::new(&theta_bar, 0, &agents, &space, params).unwrap();
    let reps = vec![("canonical".to_string(), canonical_cardinal(&theta_bar))];
    c.bench_function("truncation audit at the cap 12", |b| {
        b.iter(|| harness.audit_state(black_box(&theta_bar), &reps).unwrap())
    });
}

criterion_group!(
    benches,
    robust_deletion,
    representation_wave,
    full_verification,
    grid_mining,
    truncation_audit
);
criterion_main!(benches);
