//! Shared value types. All quantities are exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Rat = BigRational;

/// Convenience constructor for small rational constants.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses "p/q" or a bare integer "p". The result is normalized (q > 0, reduced).
pub fn rat_from_str(s: &str) -> Result<Rat, CoreError> {
    let parse_int = |t: &str| -> Result<BigInt, CoreError> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| CoreError::Invalid(format!("bad rational literal {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(CoreError::Invalid(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
        None => Ok(Rat::from(parse_int(s)?)),
    }
}

/// Renders a rational as "p/q" with q > 0 and gcd(p, q) = 1.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("lottery masses do not sum to one")]
    NonUnitMass,
    #[error("unknown outcome {0:?}")]
    UnknownOutcome(String),
    #[error("unknown agent {0:?}")]
    UnknownAgent(String),
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("preference has ties where a strict ranking is required")]
    NotStrict,
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("scf is not total on the domain: missing {0}")]
    ScfPartial(String),
    #[error("construction undefined in a dictatorial case: {0}")]
    DictatorialCase(String),
    #[error("announcement decoding is ambiguous: {0}")]
    DisjointnessViolation(String),
    #[error("label clash: {0}")]
    LabelClash(String),
    #[error("wrong arity: {0}")]
    WrongArity(String),
    #[error("no witness profile reaches the outcome: {0}")]
    EmptyWitness(String),
    #[error("work cap exceeded: {0}")]
    Timeout(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("io error: {0}")]
    Io(String),
}

impl CoreError {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        CoreError::Parse { line, col, msg: msg.into() }
    }
}

/// Work limits for the enumerating operations. Overridable through the
/// `DOMLAB_CAPS` environment variable, e.g. `DOMLAB_CAPS=outcomes=7,choices=500`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Largest outcome-space size accepted by domain enumeration.
    pub max_outcomes: usize,
    /// Largest agent-set size accepted by domain enumeration.
    pub max_agents: usize,
    /// Largest number of social choice functions an enumeration may produce.
    pub max_scfs: u64,
    /// Cap on choice-function combinations in the exact survivor test; past
    /// it the test falls back to a flagged sampling under-approximation.
    pub max_choices: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_outcomes: 6, max_agents: 4, max_scfs: 1_000_000, max_choices: 1_000_000 }
    }
}

impl Caps {
    /// Reads overrides from a `key=value` comma list; unknown keys are errors.
    pub fn from_env_str(s: &str) -> Result<Self, CoreError> {
        let mut caps = Caps::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| CoreError::Invalid(format!("caps entry {part:?} is not key=value")))?;
            let n: u64 = value
                .trim()
                .parse()
                .map_err(|_| CoreError::Invalid(format!("caps value {value:?} is not a number")))?;
            match key.trim() {
                "outcomes" => caps.max_outcomes = n as usize,
                "agents" => caps.max_agents = n as usize,
                "scfs" => caps.max_scfs = n,
                "choices" => caps.max_choices = n,
                other => {
                    return Err(CoreError::Invalid(format!("unknown caps key {other:?}")));
                }
            }
        }
        Ok(caps)
    }

    pub fn from_env() -> Result<Self, CoreError> {
        match std::env::var("DOMLAB_CAPS") {
            Ok(s) => Caps::from_env_str(&s),
            Err(_) => Ok(Caps::default()),
        }
    }
}

/// Ordered set of outcome labels. Label order is the canonical order used by
/// every enumeration and serialization in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSpace {
    labels: Vec<String>,
}

impl OutcomeSpace {
    pub fn new<S: Into<String>>(labels: Vec<S>) -> Result<Self, CoreError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(CoreError::Invalid("need at least two outcomes".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains([',', ';', ':', '>', '=', '/']) || l.contains(char::is_whitespace) {
                return Err(CoreError::Invalid(format!("bad outcome label {l:?}")));
            }
            if labels[..i].contains(l) {
                return Err(CoreError::LabelClash(l.clone()));
            }
        }
        Ok(OutcomeSpace { labels })
    }

    /// The first `n` lowercase letters, the default space in examples.
    pub fn alphabetic(n: usize) -> Self {
        let labels: Vec<String> =
            (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        OutcomeSpace::new(labels).expect("alphabetic space is valid")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, CoreError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| CoreError::UnknownOutcome(label.to_string()))
    }
}

/// Ordered set of agent names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentSet {
    agents: Vec<String>,
}

impl AgentSet {
    pub fn new<S: Into<String>>(agents: Vec<S>) -> Result<Self, CoreError> {
        let agents: Vec<String> = agents.into_iter().map(Into::into).collect();
        if agents.len() < 2 {
            return Err(CoreError::Invalid("need at least two agents".into()));
        }
        for (i, a) in agents.iter().enumerate() {
            if a.is_empty() || a.contains([',', ';', ':', '>', '=', '/']) || a.contains(char::is_whitespace) {
                return Err(CoreError::Invalid(format!("bad agent name {a:?}")));
            }
            if agents[..i].contains(a) {
                return Err(CoreError::LabelClash(a.clone()));
            }
        }
        Ok(AgentSet { agents })
    }

    /// Agents named i1..in, the default in examples.
    pub fn numbered(n: usize) -> Self {
        AgentSet::new((1..=n).map(|i| format!("i{i}")).collect::<Vec<_>>())
            .expect("numbered agent set is valid")
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn names(&self) -> &[String] {
        &self.agents
    }

    pub fn name(&self, i: usize) -> &str {
        &self.agents[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, CoreError> {
        self.agents
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| CoreError::UnknownAgent(name.to_string()))
    }
}

/// Probability distribution over an outcome space, stored densely in label
/// order. Equality is exact componentwise comparison, so explicitly stored
/// zero masses never matter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lottery {
    mass: Vec<Rat>,
}

impl Lottery {
    pub fn from_masses(mass: Vec<Rat>) -> Result<Self, CoreError> {
        if mass.iter().any(|m| m.is_negative()) {
            return Err(CoreError::Invalid("negative lottery mass".into()));
        }
        let total: Rat = mass.iter().sum();
        if !total.is_one() {
            return Err(CoreError::NonUnitMass);
        }
        Ok(Lottery { mass })
    }

    /// Degenerate lottery on one outcome.
    pub fn degenerate(space: &OutcomeSpace, outcome: usize) -> Self {
        let mut mass = vec![Rat::zero(); space.len()];
        mass[outcome] = Rat::one();
        Lottery { mass }
    }

    /// Uniform lottery over the whole space.
    pub fn uniform(space: &OutcomeSpace) -> Self {
        let n = space.len();
        Lottery { mass: vec![Rat::new(BigInt::one(), BigInt::from(n)); n] }
    }

    pub fn mass(&self) -> &[Rat] {
        &self.mass
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.mass.len()).filter(|&i| !self.mass[i].is_zero()).collect()
    }

    /// Index of the single outcome carrying all mass, if the lottery is degenerate.
    pub fn degenerate_on(&self) -> Option<usize> {
        let support = self.support();
        if support.len() == 1 {
            Some(support[0])
        } else {
            None
        }
    }

    /// Short human-readable form: "a" for a degenerate lottery, otherwise
    /// "1/2 a + 1/2 b" over the support in label order.
    pub fn describe(&self, space: &OutcomeSpace) -> String {
        if let Some(z) = self.degenerate_on() {
            return space.label(z).to_string();
        }
        self.support()
            .iter()
            .map(|&z| format!("{} {}", rat_to_string(&self.mass[z]), space.label(z)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Builds a lottery from (label, mass) pairs; missing outcomes get zero mass
/// and repeated labels accumulate.
pub fn make_lottery(space: &OutcomeSpace, entries: &[(&str, Rat)]) -> Result<Lottery, CoreError> {
    let mut mass = vec![Rat::zero(); space.len()];
    for (label, m) in entries {
        let idx = space.index_of(label)?;
        mass[idx] += m.clone();
    }
    Lottery::from_masses(mass)
}

/// Convex combination of lotteries. Weights must sum to one.
pub fn mix(weights: &[Rat], parts: &[Lottery]) -> Result<Lottery, CoreError> {
    if weights.len() != parts.len() || parts.is_empty() {
        return Err(CoreError::WrongArity(format!(
            "mix got {} weights for {} lotteries",
            weights.len(),
            parts.len()
        )));
    }
    if weights.iter().any(|w| w.is_negative()) {
        return Err(CoreError::Invalid("negative mixture weight".into()));
    }
    let total: Rat = weights.iter().sum();
    if !total.is_one() {
        return Err(CoreError::NonUnitMass);
    }
    let n = parts[0].mass.len();
    if parts.iter().any(|p| p.mass.len() != n) {
        return Err(CoreError::WrongArity("mixing lotteries over different spaces".into()));
    }
    let mut mass = vec![Rat::zero(); n];
    for (w, p) in weights.iter().zip(parts) {
        for (slot, m) in mass.iter_mut().zip(&p.mass) {
            *slot += w * m;
        }
    }
    Ok(Lottery { mass })
}

/// Exact equality of lotteries over the same space.
pub fn lottery_equal(a: &Lottery, b: &Lottery) -> bool {
    a == b
}

/// Weak order over outcomes as ranked indifference classes, best class first.
/// Within a class, outcome indices are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preference {
    classes: Vec<Vec<usize>>,
    rank_of: Vec<usize>,
}

impl Preference {
    pub fn from_classes(space: &OutcomeSpace, classes: Vec<Vec<usize>>) -> Result<Self, CoreError> {
        let n = space.len();
        let mut seen = vec![false; n];
        let mut normalized = Vec::with_capacity(classes.len());
        for class in &classes {
            if class.is_empty() {
                return Err(CoreError::Invalid("empty indifference class".into()));
            }
            let mut c = class.clone();
            c.sort_unstable();
            for &z in &c {
                if z >= n {
                    return Err(CoreError::UnknownOutcome(format!("#{z}")));
                }
                if seen[z] {
                    return Err(CoreError::Invalid(format!(
                        "outcome {:?} ranked twice",
                        space.label(z)
                    )));
                }
                seen[z] = true;
            }
            normalized.push(c);
        }
        if !seen.iter().all(|&s| s) {
            return Err(CoreError::Invalid("preference does not rank every outcome".into()));
        }
        let mut rank_of = vec![0usize; n];
        for (r, class) in normalized.iter().enumerate() {
            for &z in class {
                rank_of[z] = r;
            }
        }
        Ok(Preference { classes: normalized, rank_of })
    }

    /// Strict ranking from a permutation of all outcome indices, best first.
    pub fn from_ranking(space: &OutcomeSpace, ranking: &[usize]) -> Result<Self, CoreError> {
        Preference::from_classes(space, ranking.iter().map(|&z| vec![z]).collect())
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// 0 is the best class.
    pub fn rank(&self, outcome: usize) -> usize {
        self.rank_of[outcome]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn is_strict(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// True when the agent weakly prefers x to y.
    pub fn weakly_prefers(&self, x: usize, y: usize) -> bool {
        self.rank_of[x] <= self.rank_of[y]
    }

    pub fn strictly_prefers(&self, x: usize, y: usize) -> bool {
        self.rank_of[x] < self.rank_of[y]
    }

    /// The best indifference class.
    pub fn top_class(&self) -> &[usize] {
        &self.classes[0]
    }

    /// The unique top outcome of a strict ranking.
    pub fn top(&self) -> Result<usize, CoreError> {
        if self.classes[0].len() != 1 {
            return Err(CoreError::NotStrict);
        }
        Ok(self.classes[0][0])
    }
}

/// Profile of preferences, one per agent in agent order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalState {
    prefs: Vec<Preference>,
}

impl OrdinalState {
    pub fn new(agents: &AgentSet, prefs: Vec<Preference>) -> Result<Self, CoreError> {
        if prefs.len() != agents.len() {
            return Err(CoreError::WrongArity(format!(
                "state has {} preferences for {} agents",
                prefs.len(),
                agents.len()
            )));
        }
        Ok(OrdinalState { prefs })
    }

    pub fn prefs(&self) -> &[Preference] {
        &self.prefs
    }

    pub fn pref(&self, agent: usize) -> &Preference {
        &self.prefs[agent]
    }

    pub fn is_strict(&self) -> bool {
        self.prefs.iter().all(Preference::is_strict)
    }
}

/// Cardinal utilities, one vector per agent aligned to the outcome space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardinalState {
    utils: Vec<Vec<Rat>>,
}

impl CardinalState {
    pub fn new(utils: Vec<Vec<Rat>>) -> Result<Self, CoreError> {
        if utils.is_empty() || utils.iter().any(|u| u.len() != utils[0].len()) {
            return Err(CoreError::WrongArity("ragged utility table".into()));
        }
        Ok(CardinalState { utils })
    }

    pub fn utils(&self) -> &[Vec<Rat>] {
        &self.utils
    }

    pub fn agent(&self, i: usize) -> &[Rat] {
        &self.utils[i]
    }

    pub fn num_agents(&self) -> usize {
        self.utils.len()
    }

    /// True when for every agent, utility comparisons reproduce the ordinal
    /// state exactly: u(x) >= u(y) iff x is weakly preferred to y.
    pub fn represents(&self, state: &OrdinalState) -> bool {
        if self.utils.len() != state.prefs().len() {
            return false;
        }
        for (u, pref) in self.utils.iter().zip(state.prefs()) {
            let n = u.len();
            if n != pref.rank_of.len() {
                return false;
            }
            for x in 0..n {
                for y in 0..n {
                    if (u[x] >= u[y]) != pref.weakly_prefers(x, y) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Finite normal-form mechanism: named strategy sets per agent and a lottery
/// per strategy profile. Cells are stored row-major with the last agent's
/// strategy index varying fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mechanism {
    agents: AgentSet,
    outcomes: OutcomeSpace,
    strategies: Vec<Vec<String>>,
    cells: Vec<Lottery>,
}

impl Mechanism {
    pub fn new(
        agents: AgentSet,
        outcomes: OutcomeSpace,
        strategies: Vec<Vec<String>>,
        cells: Vec<Lottery>,
    ) -> Result<Self, CoreError> {
        if strategies.len() != agents.len() {
            return Err(CoreError::WrongArity(format!(
                "{} strategy sets for {} agents",
                strategies.len(),
                agents.len()
            )));
        }
        let mut total: usize = 1;
        for set in &strategies {
            if set.is_empty() {
                return Err(CoreError::Invalid("empty strategy set".into()));
            }
            for (i, s) in set.iter().enumerate() {
                if s.is_empty() || s.contains([',', ';']) || s.contains(char::is_whitespace) {
                    return Err(CoreError::Invalid(format!("bad strategy label {s:?}")));
                }
                if set[..i].contains(s) {
                    return Err(CoreError::LabelClash(s.clone()));
                }
            }
            total = total
                .checked_mul(set.len())
                .ok_or_else(|| CoreError::SizeLimit("profile space overflows".into()))?;
        }
        if cells.len() != total {
            return Err(CoreError::WrongArity(format!(
                "{} cells for {} profiles",
                cells.len(),
                total
            )));
        }
        for cell in &cells {
            if cell.mass().len() != outcomes.len() {
                return Err(CoreError::WrongArity("cell lottery over wrong space".into()));
            }
        }
        Ok(Mechanism { agents, outcomes, strategies, cells })
    }

    pub fn agents(&self) -> &AgentSet {
        &self.agents
    }

    pub fn outcomes(&self) -> &OutcomeSpace {
        &self.outcomes
    }

    pub fn num_agents(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategy_labels(&self, agent: usize) -> &[String] {
        &self.strategies[agent]
    }

    pub fn num_strategies(&self, agent: usize) -> usize {
        self.strategies[agent].len()
    }

    pub fn strategy_index(&self, agent: usize, label: &str) -> Result<usize, CoreError> {
        self.strategies[agent]
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| CoreError::UnknownStrategy(label.to_string()))
    }

    pub fn num_profiles(&self) -> usize {
        self.cells.len()
    }

    pub fn profile_index(&self, profile: &[usize]) -> usize {
        debug_assert_eq!(profile.len(), self.strategies.len());
        let mut idx = 0usize;
        for (agent, &s) in profile.iter().enumerate() {
            debug_assert!(s < self.strategies[agent].len());
            idx = idx * self.strategies[agent].len() + s;
        }
        idx
    }

    pub fn profile_of_index(&self, mut idx: usize) -> Vec<usize> {
        let mut profile = vec![0usize; self.strategies.len()];
        for agent in (0..self.strategies.len()).rev() {
            let n = self.strategies[agent].len();
            profile[agent] = idx % n;
            idx /= n;
        }
        profile
    }

    pub fn outcome_lottery(&self, profile: &[usize]) -> &Lottery {
        &self.cells[self.profile_index(profile)]
    }

    pub fn cell(&self, idx: usize) -> &Lottery {
        &self.cells[idx]
    }

    pub fn cells(&self) -> &[Lottery] {
        &self.cells
    }

    pub fn is_deterministic(&self) -> bool {
        self.cells.iter().all(|c| c.degenerate_on().is_some())
    }

    /// Iterates all strategy profiles in canonical order.
    pub fn profiles(&self) -> ProfileIter {
        ProfileIter::new(self.strategies.iter().map(Vec::len).collect())
    }
}

/// Mixed-radix counter over strategy indices; the last coordinate moves fastest.
pub struct ProfileIter {
    radices: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl ProfileIter {
    pub fn new(radices: Vec<usize>) -> Self {
        let next =
            if radices.iter().any(|&r| r == 0) { None } else { Some(vec![0; radices.len()]) };
        ProfileIter { radices, next }
    }
}

impl Iterator for ProfileIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.clone()?;
        let mut bump = current.clone();
        let mut pos = self.radices.len();
        loop {
            if pos == 0 {
                self.next = None;
                break;
            }
            pos -= 1;
            bump[pos] += 1;
            if bump[pos] < self.radices[pos] {
                self.next = Some(bump);
                break;
            }
            bump[pos] = 0;
        }
        Some(current)
    }
}

/// Social choice function: an outcome per ordinal state of its domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scf {
    domain: Vec<OrdinalState>,
    choice: Vec<usize>,
}

impl Scf {
    pub fn new(domain: Vec<OrdinalState>, choice: Vec<usize>) -> Result<Self, CoreError> {
        if domain.len() != choice.len() {
            return Err(CoreError::WrongArity(format!(
                "{} choices for {} states",
                choice.len(),
                domain.len()
            )));
        }
        if domain.is_empty() {
            return Err(CoreError::Invalid("empty scf domain".into()));
        }
        Ok(Scf { domain, choice })
    }

    pub fn domain(&self) -> &[OrdinalState] {
        &self.domain
    }

    pub fn choice(&self, state_idx: usize) -> usize {
        self.choice[state_idx]
    }

    pub fn choices(&self) -> &[usize] {
        &self.choice
    }

    pub fn state_index(&self, state: &OrdinalState) -> Option<usize> {
        self.domain.iter().position(|s| s == state)
    }
}

/// Which cardinal representations a verification should quantify over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OmegaSpec {
    /// Every utility representation of each ordinal state.
    All,
    /// An explicit finite list per state, aligned with the problem's domain.
    Explicit(Vec<Vec<CardinalState>>),
}

/// An implementation problem: who plays, over what outcomes, on which ordinal
/// domain, quantifying over which representations, targeting which choice rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub agents: AgentSet,
    pub outcomes: OutcomeSpace,
    pub omega: OmegaSpec,
    pub scf: Scf,
}

impl Problem {
    pub fn theta(&self) -> &[OrdinalState] {
        self.scf.domain()
    }
}

/// Per-agent surviving strategy sets, stored as sorted index lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    sets: Vec<Vec<usize>>,
}

impl Restriction {
    pub fn full(m: &Mechanism) -> Self {
        Restriction { sets: (0..m.num_agents()).map(|i| (0..m.num_strategies(i)).collect()).collect() }
    }

    pub fn new(sets: Vec<Vec<usize>>) -> Self {
        let mut sets = sets;
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        Restriction { sets }
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set(&self, agent: usize) -> &[usize] {
        &self.sets[agent]
    }

    pub fn is_nonempty(&self) -> bool {
        self.sets.iter().all(|s| !s.is_empty())
    }

    pub fn is_subset_of(&self, other: &Restriction) -> bool {
        self.sets
            .iter()
            .zip(&other.sets)
            .all(|(a, b)| a.iter().all(|x| b.binary_search(x).is_ok()))
    }

    pub fn product_size(&self) -> usize {
        self.sets.iter().map(Vec::len).product()
    }

    /// Iterates surviving strategy profiles in canonical order.
    pub fn profiles(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        ProfileIter::new(self.sets.iter().map(Vec::len).collect())
            .map(move |pos| pos.iter().enumerate().map(|(i, &p)| self.sets[i][p]).collect())
    }
}

/// One recorded deletion: `deleted` was removed because `dominator` strictly
/// dominated it on the round's surviving opponent sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionRecord {
    pub agent: String,
    pub deleted: String,
    pub dominator: String,
}

/// One synchronous round: the sets in force while testing, and what fell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRound {
    pub survivors: Restriction,
    pub deletions: Vec<DeletionRecord>,
}

/// Full deletion history. Round 0 holds the untouched strategy sets; the
/// final round records no deletions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionTrace {
    pub rounds: Vec<TraceRound>,
}

impl DeletionTrace {
    pub fn final_survivors(&self) -> &Restriction {
        &self.rounds.last().expect("trace has at least one round").survivors
    }

    /// Checks the structural invariants: sets weakly shrink, a deleted
    /// strategy never reappears, and the last round deletes nothing.
    pub fn validate(&self, m: &Mechanism) -> Result<(), CoreError> {
        if self.rounds.is_empty() {
            return Err(CoreError::Invalid("empty trace".into()));
        }
        if self.rounds[0].survivors != Restriction::full(m) {
            return Err(CoreError::Invalid("trace round 0 must hold the full sets".into()));
        }
        for w in self.rounds.windows(2) {
            if !w[1].survivors.is_subset_of(&w[0].survivors) {
                return Err(CoreError::Invalid("trace sets must weakly shrink".into()));
            }
            for rec in &w[0].deletions {
                let agent = m.agents().index_of(&rec.agent)?;
                let strat = m.strategy_index(agent, &rec.deleted)?;
                if w[1].survivors.set(agent).binary_search(&strat).is_ok() {
                    return Err(CoreError::Invalid(format!(
                        "deleted strategy {} reappears",
                        rec.deleted
                    )));
                }
            }
        }
        if !self.rounds.last().unwrap().deletions.is_empty() {
            return Err(CoreError::Invalid("final trace round must delete nothing".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Verified,
    Refuted,
    Inconclusive,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictStatus::Verified => write!(f, "verified"),
            VerdictStatus::Refuted => write!(f, "refuted"),
            VerdictStatus::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Replayable counterexample: at `state` under utilities `cardinal`, the
/// surviving profile `profile` yields `lottery` instead of the target outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub state_index: usize,
    pub cardinal: CardinalState,
    pub profile: Vec<String>,
    pub lottery: Lottery,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn verified() -> Self {
        Verdict { status: VerdictStatus::Verified, witness: None }
    }

    pub fn refuted(witness: Witness) -> Self {
        Verdict { status: VerdictStatus::Refuted, witness: Some(witness) }
    }

    pub fn inconclusive() -> Self {
        Verdict { status: VerdictStatus::Inconclusive, witness: None }
    }
}
