//! Preference domains: enumeration, state text parsing, canonical and
//! sampled cardinal representations, and problem assembly.

use crate::types::{
    rat, AgentSet, Caps, CardinalState, CoreError, OmegaSpec, OrdinalState, OutcomeSpace,
    Preference, Problem, ProfileIter, Rat, Scf,
};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Hard ceiling on enumerated state counts, independent of the caps knobs.
const MAX_STATES: u128 = 1_000_000;

/// All strict rankings of the outcome space in lexicographic order of their
/// ranking sequences; the first entry ranks outcomes in label order.
pub fn enumerate_strict_preferences(
    space: &OutcomeSpace,
    caps: &Caps,
) -> Result<Vec<Preference>, CoreError> {
    if space.len() > caps.max_outcomes {
        return Err(CoreError::SizeLimit(format!(
            "{} outcomes exceeds cap {}",
            space.len(),
            caps.max_outcomes
        )));
    }
    let mut order: Vec<usize> = (0..space.len()).collect();
    let mut out = Vec::new();
    loop {
        out.push(Preference::from_ranking(space, &order)?);
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// States where every agent holds the same strict ranking, ordered like
/// [`enumerate_strict_preferences`].
pub fn unanimity_strict_states(
    agents: &AgentSet,
    space: &OutcomeSpace,
    caps: &Caps,
) -> Result<Vec<OrdinalState>, CoreError> {
    if agents.len() > caps.max_agents {
        return Err(CoreError::SizeLimit(format!(
            "{} agents exceeds cap {}",
            agents.len(),
            caps.max_agents
        )));
    }
    enumerate_strict_preferences(space, caps)?
        .into_iter()
        .map(|p| OrdinalState::new(agents, vec![p; agents.len()]))
        .collect()
}

/// Every profile of strict rankings, the last agent's ranking varying fastest.
pub fn all_strict_states(
    agents: &AgentSet,
    space: &OutcomeSpace,
    caps: &Caps,
) -> Result<Vec<OrdinalState>, CoreError> {
    if agents.len() > caps.max_agents {
        return Err(CoreError::SizeLimit(format!(
            "{} agents exceeds cap {}",
            agents.len(),
            caps.max_agents
        )));
    }
    let prefs = enumerate_strict_preferences(space, caps)?;
    let count = (prefs.len() as u128).checked_pow(agents.len() as u32);
    if count.is_none() || count.unwrap() > MAX_STATES {
        return Err(CoreError::SizeLimit("too many strict states".into()));
    }
    ProfileIter::new(vec![prefs.len(); agents.len()])
        .map(|combo| {
            OrdinalState::new(agents, combo.iter().map(|&k| prefs[k].clone()).collect())
        })
        .collect()
}

/// Per-agent top outcomes of a strict state.
pub fn tops(state: &OrdinalState) -> Result<Vec<usize>, CoreError> {
    state.prefs().iter().map(Preference::top).collect()
}

/// True when `z` is ranked second by both named agents and their tops differ.
/// The two agents' preferences must be strict.
pub fn is_second_best_pair_state(
    state: &OrdinalState,
    i1: usize,
    i2: usize,
    z: usize,
) -> Result<bool, CoreError> {
    if i1 == i2 {
        return Err(CoreError::Invalid("the two agents must differ".into()));
    }
    let p1 = state.pref(i1);
    let p2 = state.pref(i2);
    if !p1.is_strict() || !p2.is_strict() {
        return Err(CoreError::NotStrict);
    }
    Ok(p1.rank(z) == 1 && p2.rank(z) == 1 && p1.top()? != p2.top()?)
}

/// The canonical representation: with k indifference classes, class j from the
/// top gets utility (k-1-j)/(k-1); a single class collapses to constant zero.
pub fn canonical_cardinal(state: &OrdinalState) -> CardinalState {
    let utils = state
        .prefs()
        .iter()
        .map(|pref| {
            let k = pref.num_classes();
            let n = pref.classes().iter().map(Vec::len).sum();
            let mut u = vec![Rat::zero(); n];
            if k >= 2 {
                for (z, slot) in u.iter_mut().enumerate() {
                    *slot = rat((k - 1 - pref.rank(z)) as i64, (k - 1) as i64);
                }
            }
            u
        })
        .collect();
    CardinalState::new(utils).expect("canonical table is rectangular")
}

/// Draws per-outcome utilities representing one preference: one value per
/// indifference class, pairwise distinct, in [0, 1] with denominators at most
/// 1000, assigned in rank order. Deterministic in (pref, seed).
pub fn sample_utility_values(pref: &Preference, seed: u64) -> Vec<Rat> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let k = pref.num_classes();
    let mut values: Vec<Rat> = Vec::with_capacity(k);
    while values.len() < k {
        let den: i64 = rng.gen_range(1..=1000);
        let num: i64 = rng.gen_range(0..=den);
        let v = rat(num, den);
        if !values.contains(&v) {
            values.push(v);
        }
    }
    values.sort();
    values.reverse();
    let n = pref.classes().iter().map(Vec::len).sum();
    let mut u = vec![Rat::zero(); n];
    for (z, slot) in u.iter_mut().enumerate() {
        *slot = values[pref.rank(z)].clone();
    }
    u
}

/// Draws a representation of `state`, agent by agent with independent derived
/// streams. Deterministic in (state, seed).
pub fn sample_cardinal(state: &OrdinalState, seed: u64) -> CardinalState {
    let utils = state
        .prefs()
        .iter()
        .enumerate()
        .map(|(agent, pref)| sample_utility_values(pref, crate::derive_seed(seed, agent as u64)))
        .collect();
    CardinalState::new(utils).expect("sampled table is rectangular")
}

/// Renders "i1:b>a>c;i2:c>a>b" with agents in canonical order and ties as "=".
pub fn render_state(state: &OrdinalState, agents: &AgentSet, space: &OutcomeSpace) -> String {
    let mut parts = Vec::with_capacity(agents.len());
    for (name, pref) in agents.names().iter().zip(state.prefs()) {
        let ranking = pref
            .classes()
            .iter()
            .map(|class| {
                class.iter().map(|&z| space.label(z)).collect::<Vec<_>>().join("=")
            })
            .collect::<Vec<_>>()
            .join(">");
        parts.push(format!("{name}:{ranking}"));
    }
    parts.join(";")
}

/// Parses the state text format. Column numbers are 1-based byte offsets into
/// the given line; `line` seeds the reported line number.
pub fn parse_state(
    text: &str,
    agents: &AgentSet,
    space: &OutcomeSpace,
    line: usize,
) -> Result<OrdinalState, CoreError> {
    let mut prefs: Vec<Option<Preference>> = vec![None; agents.len()];
    let mut offset = 0usize;
    for segment in text.split(';') {
        let col0 = offset;
        offset += segment.len() + 1;
        if segment.trim().is_empty() {
            return Err(CoreError::parse(line, col0 + 1, "empty agent segment"));
        }
        let Some((name, ranking)) = segment.split_once(':') else {
            return Err(CoreError::parse(line, col0 + 1, "expected agent:ranking"));
        };
        let agent = agents.index_of(name.trim())?;
        if prefs[agent].is_some() {
            return Err(CoreError::parse(
                line,
                col0 + 1,
                format!("agent {:?} listed twice", name.trim()),
            ));
        }
        let rank_col = col0 + name.len() + 1;
        prefs[agent] = Some(parse_preference(ranking, space, line, rank_col + 1)?);
    }
    let mut out = Vec::with_capacity(agents.len());
    for (i, p) in prefs.into_iter().enumerate() {
        match p {
            Some(p) => out.push(p),
            None => {
                return Err(CoreError::parse(
                    line,
                    text.len() + 1,
                    format!("missing preference for agent {:?}", agents.name(i)),
                ))
            }
        }
    }
    OrdinalState::new(agents, out)
}

/// Parses "b>a=c" style rankings; `col` is the 1-based column of the first byte.
pub fn parse_preference(
    text: &str,
    space: &OutcomeSpace,
    line: usize,
    col: usize,
) -> Result<Preference, CoreError> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut offset = 0usize;
    for class_text in text.split('>') {
        let class_col = col + offset;
        offset += class_text.len() + 1;
        if class_text.trim().is_empty() {
            return Err(CoreError::parse(line, class_col, "empty indifference class"));
        }
        let mut class = Vec::new();
        let mut label_off = 0usize;
        for label in class_text.split('=') {
            let label_col = class_col + label_off;
            label_off += label.len() + 1;
            let trimmed = label.trim();
            if trimmed.is_empty() {
                return Err(CoreError::parse(line, label_col, "empty outcome label"));
            }
            class.push(space.index_of(trimmed)?);
        }
        classes.push(class);
    }
    Preference::from_classes(space, classes).map_err(|e| match e {
        CoreError::Invalid(msg) => CoreError::parse(line, col, msg),
        other => other,
    })
}

/// How the ordinal domain of a problem is specified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainKind {
    /// Every strict state, plus any extras (which must then be duplicates).
    StrictAll,
    /// Every unanimous strict state, plus the listed extras.
    UnanimityStrict,
    /// Exactly the listed extras.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub extra: Vec<OrdinalState>,
}

#[derive(Debug, Clone)]
pub struct ProblemOpts {
    /// Require every domain state to be strict.
    pub require_strict: bool,
    /// Require f to pick the shared top at unanimous strict states.
    pub require_unanimity_respecting: bool,
    pub omega: OmegaSpec,
}

impl Default for ProblemOpts {
    fn default() -> Self {
        ProblemOpts {
            require_strict: true,
            require_unanimity_respecting: false,
            omega: OmegaSpec::All,
        }
    }
}

/// Assembles and validates an implementation problem. The f table must be
/// total on the induced domain; extras merge set-wise (duplicates collapse).
pub fn build_problem(
    spec: &DomainSpec,
    agents: &AgentSet,
    space: &OutcomeSpace,
    f_table: &[(OrdinalState, usize)],
    opts: &ProblemOpts,
    caps: &Caps,
) -> Result<Problem, CoreError> {
    let mut theta: Vec<OrdinalState> = match spec.kind {
        DomainKind::StrictAll => all_strict_states(agents, space, caps)?,
        DomainKind::UnanimityStrict => unanimity_strict_states(agents, space, caps)?,
        DomainKind::Custom => Vec::new(),
    };
    for extra in &spec.extra {
        if extra.prefs().len() != agents.len() {
            return Err(CoreError::WrongArity("extra state has wrong agent count".into()));
        }
        if extra.prefs().iter().any(|p| p.classes().iter().map(Vec::len).sum::<usize>() != space.len()) {
            return Err(CoreError::WrongArity("extra state over wrong outcome space".into()));
        }
        if !theta.contains(extra) {
            theta.push(extra.clone());
        }
    }
    if theta.is_empty() {
        return Err(CoreError::DomainViolation("empty domain".into()));
    }
    if opts.require_strict {
        if let Some(bad) = theta.iter().find(|t| !t.is_strict()) {
            return Err(CoreError::DomainViolation(format!(
                "state {:?} is not strict",
                render_state(bad, agents, space)
            )));
        }
    }
    let mut choice = Vec::with_capacity(theta.len());
    for state in &theta {
        match f_table.iter().find(|(s, _)| s == state) {
            Some((_, z)) => {
                if *z >= space.len() {
                    return Err(CoreError::UnknownOutcome(format!("#{z}")));
                }
                choice.push(*z);
            }
            None => {
                return Err(CoreError::ScfPartial(render_state(state, agents, space)));
            }
        }
    }
    for (state, _) in f_table {
        if !theta.contains(state) {
            return Err(CoreError::DomainViolation(format!(
                "f assigns a value outside the domain at {:?}",
                render_state(state, agents, space)
            )));
        }
    }
    if opts.require_unanimity_respecting {
        for (state, z) in theta.iter().zip(&choice) {
            if state.is_strict() {
                let t = tops(state)?;
                if t.iter().all(|&x| x == t[0]) && t[0] != *z {
                    return Err(CoreError::DomainViolation(format!(
                        "f must pick the shared top at {:?}",
                        render_state(state, agents, space)
                    )));
                }
            }
        }
    }
    if let OmegaSpec::Explicit(lists) = &opts.omega {
        if lists.len() != theta.len() {
            return Err(CoreError::WrongArity(
                "explicit representation lists misaligned with the domain".into(),
            ));
        }
        for (state, list) in theta.iter().zip(lists) {
            if list.is_empty() {
                return Err(CoreError::DomainViolation(
                    "explicit representation list is empty".into(),
                ));
            }
            for u in list {
                if !u.represents(state) {
                    return Err(CoreError::DomainViolation(format!(
                        "listed utilities do not represent {:?}",
                        render_state(state, agents, space)
                    )));
                }
            }
        }
    }
    Ok(Problem {
        agents: agents.clone(),
        outcomes: space.clone(),
        omega: opts.omega.clone(),
        scf: Scf::new(theta, choice)?,
    })
}

/// Largest denominator appearing in a utility table; used by tests to check
/// the sampler's bound.
pub fn max_denominator(u: &CardinalState) -> BigInt {
    let mut best = BigInt::from(1);
    for row in u.utils() {
        for v in row {
            if v.denom() > &best {
                best = v.denom().clone();
            }
        }
    }
    best
}

/// Builds the canonical two-agent three-outcome crossing state used by the
/// worked examples: i1 ranks b>a>c, i2 ranks c>a>b.
pub fn crossing_state(agents: &AgentSet, space: &OutcomeSpace) -> Result<OrdinalState, CoreError> {
    if agents.len() != 2 || space.len() != 3 {
        return Err(CoreError::WrongArity("crossing state needs 2 agents, 3 outcomes".into()));
    }
    OrdinalState::new(
        agents,
        vec![
            Preference::from_ranking(space, &[1, 0, 2])?,
            Preference::from_ranking(space, &[2, 0, 1])?,
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::rat_to_string;

    fn setup() -> (AgentSet, OutcomeSpace, Caps) {
        (AgentSet::numbered(2), OutcomeSpace::alphabetic(3), Caps::default())
    }

    #[test]
    fn strict_preference_enumeration_order() {
        let (_, space, caps) = setup();
        let prefs = enumerate_strict_preferences(&space, &caps).unwrap();
        assert_eq!(prefs.len(), 6);
        assert_eq!(prefs[0].classes(), &[vec![0], vec![1], vec![2]]);
        assert_eq!(prefs[5].classes(), &[vec![2], vec![1], vec![0]]);
        let four = enumerate_strict_preferences(&OutcomeSpace::alphabetic(4), &caps).unwrap();
        assert_eq!(four.len(), 24);
        let seven = enumerate_strict_preferences(&OutcomeSpace::alphabetic(7), &caps);
        assert!(matches!(seven.unwrap_err(), CoreError::SizeLimit(_)));
    }

    #[test]
    fn unanimity_states_share_rankings() {
        let (agents, space, caps) = setup();
        let states = unanimity_strict_states(&agents, &space, &caps).unwrap();
        assert_eq!(states.len(), 6);
        for s in &states {
            assert_eq!(s.pref(0), s.pref(1));
        }
        assert_eq!(render_state(&states[0], &agents, &space), "i1:a>b>c;i2:a>b>c");
        let three = AgentSet::numbered(3);
        let two_outcomes = OutcomeSpace::alphabetic(2);
        assert_eq!(unanimity_strict_states(&three, &two_outcomes, &caps).unwrap().len(), 2);
    }

    #[test]
    fn all_strict_states_count_and_order() {
        let (agents, space, caps) = setup();
        let states = all_strict_states(&agents, &space, &caps).unwrap();
        assert_eq!(states.len(), 36);
        assert_eq!(render_state(&states[0], &agents, &space), "i1:a>b>c;i2:a>b>c");
        assert_eq!(render_state(&states[1], &agents, &space), "i1:a>b>c;i2:a>c>b");
        assert_eq!(render_state(&states[35], &agents, &space), "i1:c>b>a;i2:c>b>a");
    }

    #[test]
    fn second_best_pair_predicate() {
        let (agents, space, caps) = setup();
        let crossing = crossing_state(&agents, &space).unwrap();
        assert!(is_second_best_pair_state(&crossing, 0, 1, 0).unwrap());
        assert!(!is_second_best_pair_state(&crossing, 0, 1, 1).unwrap());
        let unan = unanimity_strict_states(&agents, &space, &caps).unwrap();
        // Shared top means the tops do not differ.
        assert!(!is_second_best_pair_state(&unan[2], 0, 1, 0).unwrap());
        let tied = OrdinalState::new(
            &agents,
            vec![
                Preference::from_classes(&space, vec![vec![0, 1], vec![2]]).unwrap(),
                Preference::from_ranking(&space, &[2, 0, 1]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(is_second_best_pair_state(&tied, 0, 1, 0).unwrap_err(), CoreError::NotStrict);
    }

    #[test]
    fn canonical_cardinal_matches_rank_formula() {
        let (agents, space, _) = setup();
        let crossing = crossing_state(&agents, &space).unwrap();
        let u = canonical_cardinal(&crossing);
        assert_eq!(u.agent(0), &[rat(1, 2), rat(1, 1), rat(0, 1)]);
        assert_eq!(u.agent(1), &[rat(1, 2), rat(0, 1), rat(1, 1)]);
        assert!(u.represents(&crossing));

        let weak = OrdinalState::new(
            &agents,
            vec![
                Preference::from_classes(&space, vec![vec![2], vec![0, 1]]).unwrap(),
                Preference::from_classes(&space, vec![vec![0, 1, 2]]).unwrap(),
            ],
        )
        .unwrap();
        let wu = canonical_cardinal(&weak);
        assert_eq!(wu.agent(0), &[rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(wu.agent(1), &[rat(0, 1), rat(0, 1), rat(0, 1)]);
        assert!(wu.represents(&weak));
    }

    #[test]
    fn sampled_cardinals_are_deterministic_representations() {
        let (agents, space, _) = setup();
        let crossing = crossing_state(&agents, &space).unwrap();
        let u1 = sample_cardinal(&crossing, 11);
        let u2 = sample_cardinal(&crossing, 11);
        let u3 = sample_cardinal(&crossing, 12);
        assert_eq!(u1, u2);
        assert_ne!(u1, u3);
        assert!(u1.represents(&crossing));
        assert!(u3.represents(&crossing));
        assert!(max_denominator(&u1) <= BigInt::from(1000));

        let weak = OrdinalState::new(
            &agents,
            vec![
                Preference::from_classes(&space, vec![vec![0, 2], vec![1]]).unwrap(),
                Preference::from_classes(&space, vec![vec![1], vec![0, 2]]).unwrap(),
            ],
        )
        .unwrap();
        let wu = sample_cardinal(&weak, 5);
        assert!(wu.represents(&weak));
        assert_eq!(wu.agent(0)[0], wu.agent(0)[2]);
    }

    #[test]
    fn state_text_round_trips() {
        let (agents, space, _) = setup();
        let state = parse_state("i1:b>a>c;i2:c>a>b", &agents, &space, 1).unwrap();
        assert_eq!(state, crossing_state(&agents, &space).unwrap());
        assert_eq!(render_state(&state, &agents, &space), "i1:b>a>c;i2:c>a>b");

        let tied = parse_state("i1:b=a>c;i2:c>a=b", &agents, &space, 1).unwrap();
        assert_eq!(render_state(&tied, &agents, &space), "i1:a=b>c;i2:c>a=b");

        // Whitespace is tolerated, order of agents is free.
        let swapped = parse_state("i2:c>a>b; i1:b>a>c", &agents, &space, 1).unwrap();
        assert_eq!(swapped, state);
    }

    #[test]
    fn state_text_errors_carry_positions() {
        let (agents, space, _) = setup();
        match parse_state("i1:b>a>c;i2:c>>b", &agents, &space, 3) {
            Err(CoreError::Parse { line, col, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(col, 15);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_state("i1:b>a>c", &agents, &space, 1) {
            Err(CoreError::Parse { col, .. }) => assert_eq!(col, 9),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_state("i9:a>b>c;i2:a>b>c", &agents, &space, 1),
            Err(CoreError::UnknownAgent(_))
        ));
        assert!(matches!(
            parse_state("i1:a>b>c;i1:a>b>c;i2:a>b>c", &agents, &space, 1),
            Err(CoreError::Parse { .. })
        ));
        // Incomplete ranking surfaces as a parse error at the ranking column.
        assert!(matches!(
            parse_state("i1:a>b;i2:a>b>c", &agents, &space, 1),
            Err(CoreError::Parse { .. })
        ));
    }

    #[test]
    fn build_problem_assembles_crossing_domain() {
        let (agents, space, caps) = setup();
        let crossing = crossing_state(&agents, &space).unwrap();
        let unan = unanimity_strict_states(&agents, &space, &caps).unwrap();
        let mut f: Vec<(OrdinalState, usize)> = unan
            .iter()
            .map(|s| (s.clone(), s.pref(0).top().unwrap()))
            .collect();
        f.push((crossing.clone(), 0));
        let spec = DomainSpec { kind: DomainKind::UnanimityStrict, extra: vec![crossing.clone()] };
        let opts = ProblemOpts { require_unanimity_respecting: true, ..Default::default() };
        let p = build_problem(&spec, &agents, &space, &f, &opts, &caps).unwrap();
        assert_eq!(p.theta().len(), 7);
        assert_eq!(p.scf.choice(6), 0);

        // Dropping the crossing entry leaves f partial.
        let partial = build_problem(&spec, &agents, &space, &f[..6], &opts, &caps);
        assert!(matches!(partial.unwrap_err(), CoreError::ScfPartial(_)));

        // Violating unanimity respect is a domain violation.
        let mut bad = f.clone();
        bad[0].1 = 2;
        assert!(matches!(
            build_problem(&spec, &agents, &space, &bad, &opts, &caps).unwrap_err(),
            CoreError::DomainViolation(_)
        ));
    }

    #[test]
    fn build_problem_checks_strictness_and_omega() {
        let (agents, space, caps) = setup();
        let tied = OrdinalState::new(
            &agents,
            vec![
                Preference::from_classes(&space, vec![vec![0, 1], vec![2]]).unwrap(),
                Preference::from_ranking(&space, &[0, 1, 2]).unwrap(),
            ],
        )
        .unwrap();
        let spec = DomainSpec { kind: DomainKind::Custom, extra: vec![tied.clone()] };
        let f = vec![(tied.clone(), 0)];
        let strict_req = build_problem(&spec, &agents, &space, &f, &ProblemOpts::default(), &caps);
        assert!(matches!(strict_req.unwrap_err(), CoreError::DomainViolation(_)));

        let lax = ProblemOpts { require_strict: false, ..Default::default() };
        assert!(build_problem(&spec, &agents, &space, &f, &lax, &caps).is_ok());

        let crossing = crossing_state(&agents, &space).unwrap();
        let cspec = DomainSpec { kind: DomainKind::Custom, extra: vec![crossing.clone()] };
        let cf = vec![(crossing.clone(), 0)];
        let good_u = canonical_cardinal(&crossing);
        let opts = ProblemOpts {
            omega: OmegaSpec::Explicit(vec![vec![good_u.clone()]]),
            ..Default::default()
        };
        assert!(build_problem(&cspec, &agents, &space, &cf, &opts, &caps).is_ok());
        let wrong_u = canonical_cardinal(&unanimity_strict_states(&agents, &space, &caps).unwrap()[0]);
        let bad_opts = ProblemOpts {
            omega: OmegaSpec::Explicit(vec![vec![wrong_u]]),
            ..Default::default()
        };
        assert!(matches!(
            build_problem(&cspec, &agents, &space, &cf, &bad_opts, &caps).unwrap_err(),
            CoreError::DomainViolation(_)
        ));
    }

    #[test]
    fn rationals_render_normalized() {
        assert_eq!(rat_to_string(&rat(2, 4)), "1/2");
    }
}
