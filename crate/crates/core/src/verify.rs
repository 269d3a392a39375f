//! Implementation-claim verdicts and the structural diagnostics used to
//! falsify or cross-check them.

use std::collections::BTreeMap;

use crate::dominance::{possibly_undominated, robust_udinf, ud1_at, udinf_at, SurvivorSet};
use crate::domains::{render_state, sample_cardinal, unanimity_strict_states};
use crate::types::{
    CardinalState, Caps, CoreError, DeletionTrace, Lottery, Mechanism, OmegaSpec, Problem,
    Restriction, Verdict, VerdictStatus, Witness,
};
use crate::{derive_seed, DEFAULT_ROOT_SEED};

/// Representations sampled per state when a decision needs cardinal evidence.
pub const SAMPLES_PER_STATE: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notion {
    Ud,
    Udinf,
}

impl std::fmt::Display for Notion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Notion::Ud => write!(f, "UD"),
            Notion::Udinf => write!(f, "UDINF"),
        }
    }
}

/// For each agent and outcome, the strategies from which some opponent
/// profile reaches the outcome for sure.
pub fn s_z_sets(m: &Mechanism) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut sets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for i in 0..m.num_agents() {
        for z in 0..m.outcomes().len() {
            sets.insert((i, z), Vec::new());
        }
    }
    for profile in m.profiles() {
        if let Some(z) = m.outcome_lottery(&profile).degenerate_on() {
            for (i, &s) in profile.iter().enumerate() {
                let entry = sets.get_mut(&(i, z)).expect("prefilled");
                if !entry.contains(&s) {
                    entry.push(s);
                }
            }
        }
    }
    for entry in sets.values_mut() {
        entry.sort_unstable();
    }
    sets
}

pub fn is_surjective(scf: &crate::types::Scf, num_outcomes: usize) -> bool {
    (0..num_outcomes).all(|z| scf.choices().contains(&z))
}

/// True iff the chosen outcome is the agent's unique strict top at every
/// domain state.
pub fn is_dictator(problem: &Problem, i: usize) -> bool {
    problem.theta().iter().enumerate().all(|(idx, state)| {
        let f = problem.scf.choice(idx);
        (0..problem.outcomes.len())
            .all(|z| z == f || state.pref(i).strictly_prefers(f, z))
    })
}

/// For each outcome, whether the product of the reaching sets maps only to
/// that outcome for sure. A mechanism implementing a surjective rule in one
/// round must pass everywhere, so any false entry is a refutation.
pub fn check_lemma1(m: &Mechanism, problem: &Problem) -> Result<Vec<(usize, bool)>, CoreError> {
    if !is_surjective(&problem.scf, m.outcomes().len()) {
        return Err(CoreError::DomainViolation("lemma checks need a surjective rule".into()));
    }
    let sets = s_z_sets(m);
    let mut out = Vec::with_capacity(m.outcomes().len());
    for z in 0..m.outcomes().len() {
        let per_agent: Vec<&Vec<usize>> =
            (0..m.num_agents()).map(|i| &sets[&(i, z)]).collect();
        if let Some(i) = per_agent.iter().position(|s| s.is_empty()) {
            return Err(CoreError::EmptyWitness(format!(
                "agent {} cannot force outcome {}",
                m.agents().name(i),
                m.outcomes().label(z)
            )));
        }
        let product = Restriction::new(per_agent.into_iter().cloned().collect());
        let target = Lottery::degenerate(m.outcomes(), z);
        let ok = product.profiles().all(|p| m.outcome_lottery(&p) == &target);
        out.push((z, ok));
    }
    Ok(out)
}

/// One nesting violation: the reaching set for one outcome sits inside the
/// reaching set for another without both being the full strategy set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma2Violation {
    pub agent: String,
    pub subset_outcome: String,
    pub superset_outcome: String,
}

pub fn check_lemma2(m: &Mechanism) -> Vec<Lemma2Violation> {
    let sets = s_z_sets(m);
    let mut out = Vec::new();
    for i in 0..m.num_agents() {
        let full_len = m.num_strategies(i);
        for z in 0..m.outcomes().len() {
            for zp in 0..m.outcomes().len() {
                if z == zp {
                    continue;
                }
                let a = &sets[&(i, z)];
                let b = &sets[&(i, zp)];
                let nested = a.iter().all(|s| b.contains(s));
                let both_full = a.len() == full_len && b.len() == full_len;
                if nested && !both_full {
                    out.push(Lemma2Violation {
                        agent: m.agents().name(i).to_string(),
                        subset_outcome: m.outcomes().label(z).to_string(),
                        superset_outcome: m.outcomes().label(zp).to_string(),
                    });
                }
            }
        }
    }
    out
}

/// Two-outcome intersection test: a one-shot implementing mechanism with a
/// non-dictator agent must give that agent a strategy reaching both outcomes.
pub fn check_lemma4(m: &Mechanism, problem: &Problem, i: usize) -> Result<bool, CoreError> {
    if m.outcomes().len() != 2 {
        return Err(CoreError::WrongArity("intersection test is specific to two outcomes".into()));
    }
    if !is_surjective(&problem.scf, m.outcomes().len()) {
        return Err(CoreError::DomainViolation("intersection test needs a surjective rule".into()));
    }
    let sets = s_z_sets(m);
    let a = &sets[&(i, 0)];
    let b = &sets[&(i, 1)];
    Ok(a.iter().any(|s| b.contains(s)))
}

/// Outcome for one explicitly listed representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepOutcome {
    pub label: String,
    pub ok: bool,
    pub survivors: Vec<Vec<String>>,
    pub trace: Option<DeletionTrace>,
}

/// Per-ordinal-state verification outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateOutcome {
    pub state_text: String,
    pub verdict: Verdict,
    /// Surviving strategy labels per agent: the representation union in UD
    /// mode, the robust sets in UDINF mode, the last checked representation
    /// in explicit mode.
    pub survivors: Vec<Vec<String>>,
    /// True when the verdict is certificate-backed (witness or exact set);
    /// inconclusive verdicts are never exact.
    pub exact: bool,
    pub trace: Option<DeletionTrace>,
    pub reps: Vec<RepOutcome>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictatorCheck {
    pub dictators: Vec<String>,
    /// False would mean a certified non-dictatorial implementation on a
    /// qualifying domain, contradicting the impossibility result.
    pub consistent: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub lemma2: Vec<Lemma2Violation>,
    /// Product-image check per outcome label, when run.
    pub lemma1: Option<Vec<(String, bool)>>,
    pub lemma1_note: Option<String>,
    pub dictator: Option<DictatorCheck>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub notion: Notion,
    pub status: VerdictStatus,
    pub states: Vec<StateOutcome>,
    pub diagnostics: Diagnostics,
}

fn aggregate(states: &[StateOutcome]) -> VerdictStatus {
    if states.iter().any(|s| s.verdict.status == VerdictStatus::Refuted) {
        VerdictStatus::Refuted
    } else if states.iter().any(|s| s.verdict.status == VerdictStatus::Inconclusive) {
        VerdictStatus::Inconclusive
    } else {
        VerdictStatus::Verified
    }
}

fn labels_of(m: &Mechanism, sets: &[Vec<usize>]) -> Vec<Vec<String>> {
    sets.iter()
        .enumerate()
        .map(|(i, set)| set.iter().map(|&s| m.strategy_labels(i)[s].clone()).collect())
        .collect()
}

fn profile_labels(m: &Mechanism, profile: &[usize]) -> Vec<String> {
    profile
        .iter()
        .enumerate()
        .map(|(i, &s)| m.strategy_labels(i)[s].clone())
        .collect()
}

fn validate_problem(m: &Mechanism, problem: &Problem) -> Result<(), CoreError> {
    if m.agents() != &problem.agents {
        return Err(CoreError::DomainViolation("mechanism and problem agents differ".into()));
    }
    if m.outcomes() != &problem.outcomes {
        return Err(CoreError::DomainViolation("mechanism and problem outcomes differ".into()));
    }
    if let OmegaSpec::Explicit(lists) = &problem.omega {
        if lists.len() != problem.theta().len() {
            return Err(CoreError::WrongArity(
                "one representation list per domain state".into(),
            ));
        }
        for (state, list) in problem.theta().iter().zip(lists) {
            for u in list {
                if !u.represents(state) {
                    return Err(CoreError::DomainViolation(
                        "listed utilities do not represent their state".into(),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Whether the impossibility hypotheses hold: surjective rule, strict domain
/// containing every unanimous strict state.
fn qualifying(problem: &Problem, caps: &Caps) -> Result<bool, CoreError> {
    if !is_surjective(&problem.scf, problem.outcomes.len()) {
        return Ok(false);
    }
    if problem.theta().iter().any(|s| !s.is_strict()) {
        return Ok(false);
    }
    let unan = unanimity_strict_states(&problem.agents, &problem.outcomes, caps)?;
    Ok(unan.iter().all(|u| problem.theta().contains(u)))
}

fn state_seed(state_idx: usize, k: u64) -> u64 {
    derive_seed(DEFAULT_ROOT_SEED, state_idx as u64 * 1_000_003 + k)
}

/// Decides one-round implementation. Explicit mode checks each listed
/// representation directly. ALL mode is exact through the per-agent survivor
/// union: one round of deletion depends only on the agent's own utilities, so
/// the union over joint representations factorizes into a product.
pub fn verify_ud(m: &Mechanism, problem: &Problem, caps: &Caps) -> Result<VerificationReport, CoreError> {
    validate_problem(m, problem)?;
    let mut states = Vec::with_capacity(problem.theta().len());
    match &problem.omega {
        OmegaSpec::Explicit(lists) => {
            for (idx, (state, list)) in problem.theta().iter().zip(lists).enumerate() {
                states.push(explicit_state_outcome(
                    m, problem, idx, state, list, Notion::Ud,
                )?);
            }
        }
        OmegaSpec::All => {
            let full = Restriction::full(m);
            for (idx, state) in problem.theta().iter().enumerate() {
                let expected = Lottery::degenerate(&problem.outcomes, problem.scf.choice(idx));
                let per_agent: Vec<SurvivorSet> = (0..m.num_agents())
                    .map(|i| possibly_undominated(m, &full, i, state.pref(i), caps))
                    .collect();
                let exact = per_agent.iter().all(|s| s.exact);
                let union =
                    Restriction::new(per_agent.iter().map(|s| s.members.clone()).collect());
                let violation = union.profiles().find(|p| m.outcome_lottery(p) != &expected);
                let verdict = match violation {
                    Some(profile) => {
                        let utils = profile
                            .iter()
                            .enumerate()
                            .map(|(i, s)| per_agent[i].witness[s].clone())
                            .collect();
                        let cardinal = CardinalState::new(utils)?;
                        let replay = ud1_at(m, &cardinal);
                        let contained = profile
                            .iter()
                            .enumerate()
                            .all(|(i, &s)| replay.set(i).binary_search(&s).is_ok());
                        let y = m.outcome_lottery(&profile);
                        if !contained || y == &expected {
                            return Err(CoreError::Invalid(
                                "witness replay failed to reproduce the violation".into(),
                            ));
                        }
                        Verdict::refuted(Witness {
                            state_index: idx,
                            cardinal,
                            profile: profile_labels(m, &profile),
                            lottery: y.clone(),
                            expected: problem
                                .outcomes
                                .label(problem.scf.choice(idx))
                                .to_string(),
                        })
                    }
                    None if exact => Verdict::verified(),
                    None => {
                        // The union is a flagged under-approximation; look for
                        // a sampled refutation before settling on inconclusive.
                        let mut found = None;
                        for k in 0..SAMPLES_PER_STATE {
                            let u = sample_cardinal(state, state_seed(idx, k));
                            let r = ud1_at(m, &u);
                            let hit = r.profiles().find(|p| m.outcome_lottery(p) != &expected);
                            if let Some(p) = hit {
                                found = Some((u, p));
                                break;
                            }
                        }
                        match found {
                            Some((u, p)) => {
                                let y = m.outcome_lottery(&p).clone();
                                Verdict::refuted(Witness {
                                    state_index: idx,
                                    cardinal: u,
                                    profile: profile_labels(m, &p),
                                    lottery: y,
                                    expected: problem
                                        .outcomes
                                        .label(problem.scf.choice(idx))
                                        .to_string(),
                                })
                            }
                            None => Verdict::inconclusive(),
                        }
                    }
                };
                let exact_out = verdict.status != VerdictStatus::Inconclusive;
                states.push(StateOutcome {
                    state_text: render_state(state, &problem.agents, &problem.outcomes),
                    verdict,
                    survivors: labels_of(m, union.sets()),
                    exact: exact_out,
                    trace: None,
                    reps: Vec::new(),
                });
            }
        }
    }
    let status = aggregate(&states);
    let mut diagnostics = Diagnostics { lemma2: check_lemma2(m), ..Diagnostics::default() };
    for s in states.iter().filter(|s| s.verdict.status == VerdictStatus::Inconclusive) {
        diagnostics.notes.push(format!(
            "{}: exact survivor decision exceeded the choice cap; {} sampled representations found no violation",
            s.state_text, SAMPLES_PER_STATE
        ));
    }
    if status == VerdictStatus::Verified && matches!(problem.omega, OmegaSpec::All) {
        if qualifying(problem, caps)? {
            let dictators: Vec<String> = (0..problem.agents.len())
                .filter(|&i| is_dictator(problem, i))
                .map(|i| problem.agents.name(i).to_string())
                .collect();
            let consistent = !dictators.is_empty();
            if !consistent {
                diagnostics.notes.push(
                    "certified a non-dictatorial rule on a qualifying domain; this contradicts the one-round impossibility result".into(),
                );
            }
            diagnostics.dictator = Some(DictatorCheck { dictators, consistent });
        } else {
            diagnostics.notes.push("domain does not meet the impossibility hypotheses; dictatorship cross-check skipped".into());
        }
    }
    Ok(VerificationReport { notion: Notion::Ud, status, states, diagnostics })
}

/// Decides iterated implementation. Explicit mode is exact per listed
/// representation. ALL mode certifies through the robust deletion relation
/// (sound superset), refutes through sampled representations, and otherwise
/// stays inconclusive.
pub fn verify_udinf(m: &Mechanism, problem: &Problem) -> Result<VerificationReport, CoreError> {
    validate_problem(m, problem)?;
    let mut states = Vec::with_capacity(problem.theta().len());
    match &problem.omega {
        OmegaSpec::Explicit(lists) => {
            for (idx, (state, list)) in problem.theta().iter().zip(lists).enumerate() {
                states.push(explicit_state_outcome(
                    m, problem, idx, state, list, Notion::Udinf,
                )?);
            }
        }
        OmegaSpec::All => {
            for (idx, state) in problem.theta().iter().enumerate() {
                let expected = Lottery::degenerate(&problem.outcomes, problem.scf.choice(idx));
                let (robust, trace) = robust_udinf(m, state);
                let ok = robust.profiles().all(|p| m.outcome_lottery(&p) == &expected);
                let verdict = if ok {
                    Verdict::verified()
                } else {
                    let mut found = None;
                    for k in 0..SAMPLES_PER_STATE {
                        let u = sample_cardinal(state, state_seed(idx, k));
                        let (r, _) = udinf_at(m, &u);
                        let hit = r.profiles().find(|p| m.outcome_lottery(p) != &expected);
                        if let Some(p) = hit {
                            found = Some((u, p));
                            break;
                        }
                    }
                    match found {
                        Some((u, p)) => {
                            let y = m.outcome_lottery(&p).clone();
                            Verdict::refuted(Witness {
                                state_index: idx,
                                cardinal: u,
                                profile: profile_labels(m, &p),
                                lottery: y,
                                expected: problem
                                    .outcomes
                                    .label(problem.scf.choice(idx))
                                    .to_string(),
                            })
                        }
                        None => Verdict::inconclusive(),
                    }
                };
                let exact = verdict.status != VerdictStatus::Inconclusive;
                states.push(StateOutcome {
                    state_text: render_state(state, &problem.agents, &problem.outcomes),
                    verdict,
                    survivors: labels_of(m, robust.sets()),
                    exact,
                    trace: Some(trace),
                    reps: Vec::new(),
                });
            }
        }
    }
    let status = aggregate(&states);
    let mut diagnostics = Diagnostics { lemma2: check_lemma2(m), ..Diagnostics::default() };
    for s in states.iter().filter(|s| s.verdict.status == VerdictStatus::Inconclusive) {
        diagnostics.notes.push(format!(
            "{}: robust survivors stray off target but {} sampled representations found no refuting one",
            s.state_text, SAMPLES_PER_STATE
        ));
    }
    if status == VerdictStatus::Verified && is_surjective(&problem.scf, problem.outcomes.len()) {
        match check_lemma1(m, problem) {
            Ok(rows) => {
                let named =
                    rows.iter().map(|&(z, ok)| (problem.outcomes.label(z).to_string(), ok)).collect();
                diagnostics.lemma1 = Some(named);
                diagnostics
                    .notes
                    .push("post-certification product-image check recorded above".into());
            }
            Err(e) => diagnostics.lemma1_note = Some(e.to_string()),
        }
    }
    Ok(VerificationReport { notion: Notion::Udinf, status, states, diagnostics })
}

/// Shared explicit-mode worker: checks every listed representation of one
/// state and reports the first violation as the state's witness.
fn explicit_state_outcome(
    m: &Mechanism,
    problem: &Problem,
    idx: usize,
    state: &crate::types::OrdinalState,
    list: &[CardinalState],
    notion: Notion,
) -> Result<StateOutcome, CoreError> {
    let expected = Lottery::degenerate(&problem.outcomes, problem.scf.choice(idx));
    let mut reps = Vec::with_capacity(list.len());
    let mut verdict = Verdict::verified();
    let mut last_survivors: Vec<Vec<String>> = Vec::new();
    for (k, u) in list.iter().enumerate() {
        let (r, trace) = match notion {
            Notion::Ud => (ud1_at(m, u), None),
            Notion::Udinf => {
                let (r, t) = udinf_at(m, u);
                (r, Some(t))
            }
        };
        let violation = r.profiles().find(|p| m.outcome_lottery(p) != &expected);
        let ok = violation.is_none();
        last_survivors = labels_of(m, r.sets());
        reps.push(RepOutcome {
            label: format!("rep{}", k + 1),
            ok,
            survivors: last_survivors.clone(),
            trace,
        });
        if let Some(p) = violation {
            if verdict.status == VerdictStatus::Verified {
                verdict = Verdict::refuted(Witness {
                    state_index: idx,
                    cardinal: u.clone(),
                    profile: profile_labels(m, &p),
                    lottery: m.outcome_lottery(&p).clone(),
                    expected: problem.outcomes.label(problem.scf.choice(idx)).to_string(),
                });
            }
        }
    }
    Ok(StateOutcome {
        state_text: render_state(state, &problem.agents, &problem.outcomes),
        verdict,
        survivors: last_survivors,
        exact: true,
        trace: None,
        reps,
    })
}

/// Plain-text rendering: headline, one block per state, diagnostics tail.
pub fn render_report(m: &Mechanism, report: &VerificationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} verification: {}\n", report.notion, report.status));
    for s in &report.states {
        out.push_str(&format!("  {}: {}\n", s.state_text, s.verdict.status));
        let sets: Vec<String> = s
            .survivors
            .iter()
            .enumerate()
            .map(|(i, set)| format!("{}={{{}}}", m.agents().name(i), set.join(",")))
            .collect();
        out.push_str(&format!("    survivors {}\n", sets.join(" ")));
        if let Some(w) = &s.verdict.witness {
            out.push_str(&format!(
                "    witness profile ({}) -> {}, expected {}\n",
                w.profile.join(","),
                w.lottery.describe(m.outcomes()),
                w.expected
            ));
        }
        for rep in &s.reps {
            let mark = if rep.ok { "ok" } else { "violation" };
            out.push_str(&format!("    {}: {}\n", rep.label, mark));
        }
    }
    let d = &report.diagnostics;
    out.push_str("diagnostics:\n");
    if d.lemma2.is_empty() {
        out.push_str("  nesting check: clean\n");
    } else {
        for v in &d.lemma2 {
            out.push_str(&format!(
                "  nesting violation: {} reaches {} only from within the {} set\n",
                v.agent, v.subset_outcome, v.superset_outcome
            ));
        }
    }
    if let Some(rows) = &d.lemma1 {
        for (z, ok) in rows {
            out.push_str(&format!(
                "  product image at {}: {}\n",
                z,
                if *ok { "exact" } else { "strays" }
            ));
        }
    }
    if let Some(note) = &d.lemma1_note {
        out.push_str(&format!("  product image check: {note}\n"));
    }
    if let Some(check) = &d.dictator {
        out.push_str(&format!(
            "  dictators: [{}] (consistent: {})\n",
            check.dictators.join(","),
            check.consistent
        ));
    }
    for n in &d.notes {
        out.push_str(&format!("  note: {n}\n"));
    }
    out
}
