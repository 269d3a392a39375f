//! The specific mechanisms the verification and reproduction commands study:
//! dictatorships, the 3x3 crossing-table mechanism, its |Z|>=4 generalization,
//! and a finite truncation of the infinite-action announcement mechanism,
//! together with an exact audit of that truncation's claimed deletion steps.

use crate::domains::{canonical_cardinal, is_second_best_pair_state, render_state, tops};
use crate::types::{
    rat, AgentSet, CardinalState, CoreError, Lottery, Mechanism, OrdinalState, OutcomeSpace,
    Preference, ProfileIter, Rat,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Mechanism where `dictator` announces an outcome and everyone else has a
/// single dummy strategy; the outcome is the announcement.
pub fn dictatorial_mechanism(
    agents: &AgentSet,
    space: &OutcomeSpace,
    dictator: usize,
) -> Result<Mechanism, CoreError> {
    if dictator >= agents.len() {
        return Err(CoreError::UnknownAgent(format!("#{dictator}")));
    }
    let strategies: Vec<Vec<String>> = (0..agents.len())
        .map(|i| {
            if i == dictator {
                space.labels().to_vec()
            } else {
                vec!["dummy".to_string()]
            }
        })
        .collect();
    let cells = (0..space.len()).map(|z| Lottery::degenerate(space, z)).collect();
    // Profile index equals the dictator's announcement index because every
    // other agent contributes radix one.
    Mechanism::new(agents.clone(), space.clone(), strategies, cells)
}

fn check_distinct_labels(space: &OutcomeSpace, labels: &[&str]) -> Result<Vec<usize>, CoreError> {
    let mut idx = Vec::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(CoreError::LabelClash(l.to_string()));
        }
        idx.push(space.index_of(l)?);
    }
    Ok(idx)
}

/// The two-agent 3x3 mechanism given by the crossing table. Both agents
/// announce an outcome; the diagonal is degenerate and the off-diagonal cells
/// are the fixed quarter/half mixtures of the table.
pub fn hat_mechanism(
    space: &OutcomeSpace,
    a: &str,
    b: &str,
    c: &str,
) -> Result<Mechanism, CoreError> {
    if space.len() != 3 {
        return Err(CoreError::WrongArity("hat mechanism needs exactly 3 outcomes".into()));
    }
    let ids = check_distinct_labels(space, &[a, b, c])?;
    let (za, zb, zc) = (ids[0], ids[1], ids[2]);
    let agents = AgentSet::numbered(2);
    let half = rat(1, 2);
    let quarter = rat(1, 4);
    let three_quarters = rat(3, 4);
    let pair = |x: usize, wx: Rat, y: usize, wy: Rat| {
        let mut mass = vec![Rat::zero(); 3];
        mass[x] = wx;
        mass[y] = wy;
        Lottery::from_masses(mass).expect("table masses sum to one")
    };
    let cell = |s1: usize, s2: usize| -> Lottery {
        if s1 == s2 {
            return Lottery::degenerate(space, s1);
        }
        match (
            (s1 == za, s1 == zb, s1 == zc),
            (s2 == za, s2 == zb, s2 == zc),
        ) {
            ((true, _, _), (_, true, _)) => pair(za, quarter.clone(), zb, three_quarters.clone()),
            ((true, _, _), (_, _, true)) => pair(za, half.clone(), zb, half.clone()),
            ((_, true, _), (true, _, _)) => pair(za, half.clone(), zc, half.clone()),
            ((_, true, _), (_, _, true)) => pair(zb, half.clone(), zc, half.clone()),
            ((_, _, true), (true, _, _)) => pair(za, quarter.clone(), zc, three_quarters.clone()),
            ((_, _, true), (_, true, _)) => pair(zb, half.clone(), zc, half.clone()),
            _ => unreachable!("distinct labels cover the table"),
        }
    };
    let strategies = vec![space.labels().to_vec(), space.labels().to_vec()];
    let mut cells = Vec::with_capacity(9);
    for s1 in 0..3 {
        for s2 in 0..3 {
            cells.push(cell(s1, s2));
        }
    }
    Mechanism::new(agents, space.clone(), strategies, cells)
}

/// The three distinguished outcomes of the |Z|>=4 construction: a is the
/// target at the crossing state, b and c are the two agents' tops there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarLabels {
    pub a: String,
    pub b: String,
    pub c: String,
}

impl StarLabels {
    pub fn new(space: &OutcomeSpace, a: &str, b: &str, c: &str) -> Result<Self, CoreError> {
        check_distinct_labels(space, &[a, b, c])?;
        Ok(StarLabels { a: a.into(), b: b.into(), c: c.into() })
    }

    /// Derives labels from a crossing state: a = f(state), b and c the two
    /// agents' tops. Fails unless a is ranked second by both and tops differ.
    pub fn derive(
        space: &OutcomeSpace,
        state: &OrdinalState,
        i1: usize,
        i2: usize,
        f_value: usize,
    ) -> Result<Self, CoreError> {
        if !is_second_best_pair_state(state, i1, i2, f_value)? {
            return Err(CoreError::DomainViolation(
                "state does not rank the target second for both agents with distinct tops".into(),
            ));
        }
        StarLabels::new(
            space,
            space.label(f_value),
            space.label(state.pref(i1).top()?),
            space.label(state.pref(i2).top()?),
        )
    }
}

/// The two-agent generalization: both agents announce an outcome, matching
/// announcements are honored, and off-diagonal cells follow the three-row
/// table over rows {a} / {b} / rest and columns {a} / {c} / rest. The table
/// instance targets |Z| >= 4; |Z| = 3 is accepted so the cell-by-cell
/// comparison against the 3x3 table can be reported.
pub fn star_mechanism(space: &OutcomeSpace, labels: &StarLabels) -> Result<Mechanism, CoreError> {
    if space.len() < 3 {
        return Err(CoreError::WrongArity("star mechanism needs at least 3 outcomes".into()));
    }
    let ids = check_distinct_labels(space, &[&labels.a, &labels.b, &labels.c])?;
    let (za, zb, zc) = (ids[0], ids[1], ids[2]);
    let half = rat(1, 2);
    let quarter = rat(1, 4);
    let three_quarters = rat(3, 4);
    let cell = |s1: usize, s2: usize| -> Lottery {
        if s1 == s2 {
            return Lottery::degenerate(space, s1);
        }
        let mut mass = vec![Rat::zero(); space.len()];
        if s1 == za {
            if s2 == zc {
                mass[za] = three_quarters.clone();
                mass[zb] += quarter.clone();
            } else {
                mass[za] = half.clone();
                mass[s2] += half.clone();
            }
        } else if s1 == zb {
            if s2 == za {
                mass[za] = three_quarters.clone();
                mass[zc] += quarter.clone();
            } else if s2 == zc {
                mass[za] = half.clone();
                mass[zb] += quarter.clone();
                mass[zc] += quarter.clone();
            } else {
                mass[zb] = half.clone();
                mass[s2] += half.clone();
            }
        } else if s2 == za {
            mass[s1] = half.clone();
            mass[za] += half.clone();
        } else if s2 == zc {
            mass[s1] = half.clone();
            mass[zc] += half.clone();
        } else {
            mass[s1] = half.clone();
            mass[s2] += half.clone();
        }
        Lottery::from_masses(mass).expect("table masses sum to one")
    };
    let strategies = vec![space.labels().to_vec(), space.labels().to_vec()];
    let mut cells = Vec::with_capacity(space.len() * space.len());
    for s1 in 0..space.len() {
        for s2 in 0..space.len() {
            cells.push(cell(s1, s2));
        }
    }
    Mechanism::new(AgentSet::numbered(2), space.clone(), strategies, cells)
}

/// Cell-by-cell comparison of the |Z|=3 star instance against the 3x3 table
/// under the same labels. Returns (cell key, star lottery, hat lottery) for
/// each differing cell; the two tables are NOT identical and the difference
/// is reported rather than hidden.
pub fn star_hat_discrepancy(
    space: &OutcomeSpace,
    a: &str,
    b: &str,
    c: &str,
) -> Result<Vec<(String, Lottery, Lottery)>, CoreError> {
    let hat = hat_mechanism(space, a, b, c)?;
    let star = star_mechanism(space, &StarLabels::new(space, a, b, c)?)?;
    let mut diffs = Vec::new();
    for profile in hat.profiles() {
        let hy = hat.outcome_lottery(&profile);
        let sy = star.outcome_lottery(&profile);
        if hy != sy {
            let key = format!(
                "{},{}",
                hat.strategy_labels(0)[profile[0]],
                hat.strategy_labels(1)[profile[1]]
            );
            diffs.push((key, sy.clone(), hy.clone()));
        }
    }
    Ok(diffs)
}

/// Checks the non-dictatorship condition for one agent at the crossing state
/// and returns the agent's announcement set for z: {z} off target, {z, top}
/// at the target outcome.
pub fn sigma(
    state: &OrdinalState,
    agent: usize,
    z: usize,
    f_value: usize,
) -> Result<Vec<usize>, CoreError> {
    let top = state.pref(agent).top()?;
    if top == f_value {
        return Err(CoreError::DictatorialCase(format!(
            "agent #{agent} already tops the target outcome",
        )));
    }
    if z == f_value {
        let mut set = vec![z, top];
        set.sort_unstable();
        Ok(set)
    } else {
        Ok(vec![z])
    }
}

fn gamma_preflight(state: &OrdinalState, f_value: usize) -> Result<Vec<usize>, CoreError> {
    let t = tops(state)?;
    for (i, &top) in t.iter().enumerate() {
        if top == f_value {
            return Err(CoreError::DictatorialCase(format!(
                "agent #{i} already tops the target outcome",
            )));
        }
    }
    if t.iter().all(|&x| x == t[0]) {
        // The announcement cells for the shared top and for the target overlap
        // on the all-tops profile, so decoding would be ambiguous.
        return Err(CoreError::DisjointnessViolation(
            "all agents share a top, so two announcement cells intersect".into(),
        ));
    }
    Ok(t)
}

/// Decodes an announcement profile: the agreed outcome when the profile lies
/// in one outcome's announcement cell, otherwise the uniform lottery.
pub fn gamma(
    state: &OrdinalState,
    f_value: usize,
    announcements: &[usize],
    space: &OutcomeSpace,
) -> Result<Lottery, CoreError> {
    let t = gamma_preflight(state, f_value)?;
    if announcements.len() != t.len() {
        return Err(CoreError::WrongArity("one announcement per agent".into()));
    }
    for z in 0..space.len() {
        let hit = announcements
            .iter()
            .enumerate()
            .all(|(i, &ann)| ann == z || (z == f_value && ann == t[i]));
        if hit {
            return Ok(Lottery::degenerate(space, z));
        }
    }
    Ok(Lottery::uniform(space))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationParams {
    /// Inclusive cap on the integer coordinate.
    pub n: usize,
}

impl TruncationParams {
    pub fn new(n: usize) -> Result<Self, CoreError> {
        if n < 2 {
            return Err(CoreError::Invalid("truncation cap must be at least 2".into()));
        }
        Ok(TruncationParams { n })
    }
}

/// Smallest n with min_z U[(1/n)z + ((n-1)/n)top] strictly above every
/// alternative of interest: all single outcomes other than the top, and the
/// uniform lottery.
pub fn n_threshold(u_i: &[Rat], pref_i: &Preference) -> Result<u64, CoreError> {
    if !pref_i.is_strict() {
        return Err(CoreError::NotStrict);
    }
    let top = pref_i.top()?;
    let t = &u_i[top];
    let worst = u_i.iter().min().expect("nonempty utility vector");
    let second = u_i
        .iter()
        .enumerate()
        .filter(|&(z, _)| z != top)
        .map(|(_, v)| v)
        .max()
        .expect("at least two outcomes");
    let mean: Rat = u_i.iter().sum::<Rat>() / Rat::from_integer((u_i.len() as i64).into());
    let rhs = if second > &mean { second.clone() } else { mean };
    debug_assert!(t > &rhs, "top utility is the unique maximum");
    // Need n(t - rhs) > t - worst.
    let q = (t - worst) / (t - rhs);
    Ok(q.floor().to_integer().to_u64().expect("threshold fits in u64") + 1)
}

/// Strategy space of the truncated announcement mechanism: outcome, integer
/// in 1..=N, and a fallback outcome, labeled "z:n:zhat".
fn announcement_labels(space: &OutcomeSpace, params: &TruncationParams) -> Vec<String> {
    let mut labels = Vec::with_capacity(space.len() * space.len() * params.n);
    for z in space.labels() {
        for n in 1..=params.n {
            for zhat in space.labels() {
                labels.push(format!("{z}:{n}:{zhat}"));
            }
        }
    }
    labels
}

fn decode_strategy(space_len: usize, params: &TruncationParams, idx: usize) -> (usize, usize, usize) {
    let zhat = idx % space_len;
    let rest = idx / space_len;
    let n = rest % params.n + 1;
    let z = rest / params.n;
    (z, n, zhat)
}

fn encode_strategy(space_len: usize, params: &TruncationParams, z: usize, n: usize, zhat: usize) -> usize {
    (z * params.n + (n - 1)) * space_len + zhat
}

/// Exact integer image of the truncated mechanism: every cell is a vector of
/// numerators over the shared denominator `denom`.
struct AnnouncementCells {
    denom: i64,
    cells: Vec<Vec<i64>>,
    strategies_per_agent: usize,
}

fn lcm_1_to(n: usize) -> i64 {
    (1..=n as i64).fold(1i64, |acc, k| acc.lcm(&k))
}

fn build_cells(
    state: &OrdinalState,
    f_value: usize,
    agents: &AgentSet,
    space: &OutcomeSpace,
    params: &TruncationParams,
) -> Result<AnnouncementCells, CoreError> {
    let t = gamma_preflight(state, f_value)?;
    let z_count = space.len();
    let n_agents = agents.len();
    let per_agent = z_count * z_count * params.n;
    let total = (per_agent as u128).checked_pow(n_agents as u32);
    if total.is_none() || total.unwrap() > 2_000_000 {
        return Err(CoreError::SizeLimit("truncated mechanism profile space too large".into()));
    }
    let denom = 2 * n_agents as i64 * z_count as i64 * lcm_1_to(params.n);
    let mut cells = Vec::with_capacity(total.unwrap() as usize);
    let mut decoded: Vec<(usize, usize, usize)> = Vec::with_capacity(n_agents);
    for profile in ProfileIter::new(vec![per_agent; n_agents]) {
        decoded.clear();
        decoded.extend(profile.iter().map(|&s| decode_strategy(z_count, params, s)));
        // Announcement decode on first coordinates.
        let gamma_on: Option<usize> = (0..z_count).find(|&z| {
            decoded
                .iter()
                .enumerate()
                .all(|(i, &(zi, _, _))| zi == z || (z == f_value && zi == t[i]))
        });
        let mut mass = vec![0i64; z_count];
        if decoded.iter().all(|&(_, n, _)| n == 1) {
            match gamma_on {
                Some(z) => mass[z] = denom,
                None => mass.iter_mut().for_each(|m| *m = denom / z_count as i64),
            }
        } else {
            for &(_, n_i, zhat_i) in &decoded {
                let n_i = n_i as i64;
                // Agent weight 1/|I|; inside it: 1/2n on the decode, 1/2n on
                // uniform, (n-1)/n on the fallback outcome.
                let unit = denom / (2 * n_agents as i64 * n_i);
                match gamma_on {
                    Some(z) => mass[z] += unit,
                    None => {
                        let share = unit / z_count as i64;
                        mass.iter_mut().for_each(|m| *m += share);
                    }
                }
                let share = unit / z_count as i64;
                mass.iter_mut().for_each(|m| *m += share);
                mass[zhat_i] += 2 * unit * (n_i - 1);
            }
        }
        debug_assert_eq!(mass.iter().sum::<i64>(), denom);
        cells.push(mass);
    }
    Ok(AnnouncementCells { denom, cells, strategies_per_agent: per_agent })
}

/// The finite truncation of the announcement mechanism: strategies are
/// (outcome, n, fallback) with n capped; profiles where every n is one decode
/// through the announcement map, and all others mix the decode, the uniform
/// lottery, and each agent's fallback with the n-dependent weights.
pub fn truncated_infinite_mechanism(
    state: &OrdinalState,
    f_value: usize,
    agents: &AgentSet,
    space: &OutcomeSpace,
    params: &TruncationParams,
) -> Result<Mechanism, CoreError> {
    let built = build_cells(state, f_value, agents, space, params)?;
    let denom = BigInt::from(built.denom);
    let lotteries = built
        .cells
        .iter()
        .map(|mass| {
            Lottery::from_masses(
                mass.iter().map(|&m| Rat::new(BigInt::from(m), denom.clone())).collect(),
            )
            .expect("integer cells are unit mass")
        })
        .collect();
    let labels = announcement_labels(space, params);
    Mechanism::new(
        agents.clone(),
        space.clone(),
        vec![labels; agents.len()],
        lotteries,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One failed claimed domination, with the exact expected utilities at the
/// offending opponent column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFail {
    pub agent: String,
    pub strategy: String,
    pub dominator: String,
    pub column: String,
    pub old_eu: Rat,
    pub new_eu: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionReport {
    pub agent: String,
    pub status: CheckStatus,
    pub detail: String,
}

/// Audit of one representation at one state: the per-agent thresholds, the
/// two families of claimed dominations, and the survivor projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepAudit {
    pub label: String,
    pub thresholds: Vec<u64>,
    pub bump_checked: u64,
    pub bump_failures: Vec<StepFail>,
    pub threshold_checked: u64,
    pub threshold_failures: Vec<StepFail>,
    pub threshold_skipped: Vec<String>,
    pub projections: Vec<ProjectionReport>,
}

impl RepAudit {
    pub fn passed(&self) -> bool {
        self.bump_failures.is_empty()
            && self.threshold_failures.is_empty()
            && self.projections.iter().all(|p| p.status != CheckStatus::Fail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateAudit {
    pub state_text: String,
    pub reps: Vec<RepAudit>,
}

impl StateAudit {
    pub fn passed(&self) -> bool {
        self.reps.iter().all(RepAudit::passed)
    }
}

/// Exact audit harness for the truncated announcement mechanism. Expected
/// utilities are compared as integers over a shared denominator, so the whole
/// audit runs on machine arithmetic without approximation.
pub struct TruncationHarness {
    agents: AgentSet,
    space: OutcomeSpace,
    theta_bar: OrdinalState,
    f_value: usize,
    params: TruncationParams,
    cells: AnnouncementCells,
    strides: Vec<usize>,
}

impl TruncationHarness {
    pub fn new(
        theta_bar: &OrdinalState,
        f_value: usize,
        agents: &AgentSet,
        space: &OutcomeSpace,
        params: TruncationParams,
    ) -> Result<Self, CoreError> {
        let cells = build_cells(theta_bar, f_value, agents, space, &params)?;
        let n_agents = agents.len();
        let mut strides = vec![1usize; n_agents];
        for i in (0..n_agents.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * cells.strategies_per_agent;
        }
        Ok(TruncationHarness {
            agents: agents.clone(),
            space: space.clone(),
            theta_bar: theta_bar.clone(),
            f_value,
            params,
            cells,
            strides,
        })
    }

    pub fn mechanism(&self) -> Result<Mechanism, CoreError> {
        truncated_infinite_mechanism(
            &self.theta_bar,
            self.f_value,
            &self.agents,
            &self.space,
            &self.params,
        )
    }

    pub fn strategy_label(&self, idx: usize) -> String {
        let (z, n, zhat) = decode_strategy(self.space.len(), &self.params, idx);
        format!("{}:{}:{}", self.space.label(z), n, self.space.label(zhat))
    }

    fn column_label(&self, agent: usize, column: &[usize]) -> String {
        let mut parts = Vec::new();
        for (j, &s) in column.iter().enumerate() {
            if j != agent {
                parts.push(format!("{}={}", self.agents.name(j), self.strategy_label(s)));
            }
        }
        parts.join(",")
    }

    /// Scaled integer utilities for one agent; exact for rational inputs.
    fn scaled_utils(&self, u_i: &[Rat]) -> Vec<i128> {
        let mut lcm = BigInt::one();
        for v in u_i {
            lcm = lcm.lcm(v.denom());
        }
        u_i.iter()
            .map(|v| {
                let scaled = v.numer() * (&lcm / v.denom());
                scaled.to_i128().expect("scaled utility fits in i128")
            })
            .collect()
    }

    /// Expected-utility numerators per profile over the shared denominator.
    fn eu_table(&self, u_hat: &[i128]) -> Vec<i128> {
        self.cells
            .cells
            .iter()
            .map(|mass| mass.iter().zip(u_hat).map(|(&m, &u)| m as i128 * u).sum())
            .collect()
    }

    fn profile_index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.strides).map(|(&s, &st)| s * st).sum()
    }

    /// All opponent columns for `agent` with the given per-agent strategy
    /// pools (own slot ignored).
    fn columns(&self, agent: usize, pools: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let radices: Vec<usize> =
            (0..pools.len()).map(|j| if j == agent { 1 } else { pools[j].len() }).collect();
        ProfileIter::new(radices)
            .map(|pos| {
                (0..pos.len())
                    .map(|j| if j == agent { 0 } else { pools[j][pos[j]] })
                    .collect()
            })
            .collect()
    }

    /// First column where `dominator` fails to strictly beat `strategy`.
    fn domination_gap(
        &self,
        eu: &[i128],
        agent: usize,
        dominator: usize,
        strategy: usize,
        columns: &[Vec<usize>],
    ) -> Option<Vec<usize>> {
        let mut col;
        for template in columns {
            col = template.clone();
            col[agent] = dominator;
            let new_eu = eu[self.profile_index(&col)];
            col[agent] = strategy;
            let old_eu = eu[self.profile_index(&col)];
            if new_eu <= old_eu {
                return Some(col);
            }
        }
        None
    }

    fn eu_as_rat(&self, value: i128, u_i: &[Rat]) -> Rat {
        // Undo the utility scaling so reported EUs are in the caller's units.
        let mut lcm = BigInt::one();
        for v in u_i {
            lcm = lcm.lcm(v.denom());
        }
        Rat::new(BigInt::from(value), BigInt::from(self.cells.denom) * lcm)
    }

    /// Audits one state (the crossing state itself or a unanimous strict
    /// state) under one cardinal representation.
    pub fn audit_rep(
        &self,
        state: &OrdinalState,
        label: &str,
        u: &CardinalState,
    ) -> Result<RepAudit, CoreError> {
        self.validate_state(state)?;
        if !u.represents(state) {
            return Err(CoreError::DomainViolation(
                "audit utilities do not represent the state".into(),
            ));
        }
        let n_agents = self.agents.len();
        let z_count = self.space.len();
        let cap = self.params.n;
        let state_tops = tops(state)?;
        let full_pool: Vec<usize> = (0..self.cells.strategies_per_agent).collect();
        let full_pools: Vec<Vec<usize>> = vec![full_pool; n_agents];

        let mut thresholds = Vec::with_capacity(n_agents);
        let mut bump_checked = 0u64;
        let mut bump_failures = Vec::new();
        let mut threshold_checked = 0u64;
        let mut threshold_failures = Vec::new();
        let mut threshold_skipped = Vec::new();
        let mut projections = Vec::new();
        let proj_pools = thresholds_pools(self, state, u, cap)?;

        for agent in 0..n_agents {
            let u_i = u.agent(agent);
            let n_star = n_threshold(u_i, state.pref(agent))? as usize;
            thresholds.push(n_star as u64);
            let u_hat = self.scaled_utils(u_i);
            let eu = self.eu_table(&u_hat);
            let tau = state_tops[agent];
            let columns = self.columns(agent, &full_pools);

            // Claimed step one: (z, n, zhat) with 1 < n < cap is beaten by
            // (z, n+1, tau).
            for z in 0..z_count {
                for n in 2..cap {
                    for zhat in 0..z_count {
                        let s = encode_strategy(z_count, &self.params, z, n, zhat);
                        let d = encode_strategy(z_count, &self.params, z, n + 1, tau);
                        bump_checked += 1;
                        if let Some(col) = self.domination_gap(&eu, agent, d, s, &columns) {
                            bump_failures.push(self.step_fail(agent, s, d, &col, &eu, u_i));
                        }
                    }
                }
            }

            // Claimed step two: (z, 1, zhat) with z outside the announcement
            // set of the agent's top is beaten by (z, n*, tau). The
            // announcement sets are the construction's, so sigma is evaluated
            // at the crossing state even when auditing a unanimous one.
            let keep = sigma(&self.theta_bar, agent, tau, self.f_value)
                .expect("construction already rejected the dictatorial case");
            if n_star > cap {
                threshold_skipped.push(self.agents.name(agent).to_string());
            } else {
                for z in (0..z_count).filter(|z| !keep.contains(z)) {
                    for zhat in 0..z_count {
                        let s = encode_strategy(z_count, &self.params, z, 1, zhat);
                        let d = encode_strategy(z_count, &self.params, z, n_star, tau);
                        threshold_checked += 1;
                        if let Some(col) = self.domination_gap(&eu, agent, d, s, &columns) {
                            threshold_failures.push(self.step_fail(agent, s, d, &col, &eu, u_i));
                        }
                    }
                }
            }

            // Survivor projection on the thresholded restriction.
            projections.push(self.projection(agent, n_star, &keep, &eu, &proj_pools)?);
        }

        Ok(RepAudit {
            label: label.to_string(),
            thresholds,
            bump_checked,
            bump_failures,
            threshold_checked,
            threshold_failures,
            threshold_skipped,
            projections,
        })
    }

    fn step_fail(
        &self,
        agent: usize,
        strategy: usize,
        dominator: usize,
        col: &[usize],
        eu: &[i128],
        u_i: &[Rat],
    ) -> StepFail {
        let mut with_old = col.to_vec();
        with_old[agent] = strategy;
        let old_val = eu[self.profile_index(&with_old)];
        with_old[agent] = dominator;
        let new_val = eu[self.profile_index(&with_old)];
        StepFail {
            agent: self.agents.name(agent).to_string(),
            strategy: self.strategy_label(strategy),
            dominator: self.strategy_label(dominator),
            column: self.column_label(agent, col),
            old_eu: self.eu_as_rat(old_val, u_i),
            new_eu: self.eu_as_rat(new_val, u_i),
        }
    }

    fn projection(
        &self,
        agent: usize,
        n_star: usize,
        keep: &[usize],
        eu: &[i128],
        pools: &[Vec<usize>],
    ) -> Result<ProjectionReport, CoreError> {
        let name = self.agents.name(agent).to_string();
        if n_star > self.params.n {
            return Ok(ProjectionReport {
                agent: name,
                status: CheckStatus::Skipped,
                detail: format!("threshold {n_star} exceeds truncation cap {}", self.params.n),
            });
        }
        let z_count = self.space.len();
        let columns = self.columns(agent, pools);
        let mut unexpected = Vec::new();
        let mut missing = Vec::new();
        for &s in &pools[agent] {
            let (z, n, _zhat) = decode_strategy(z_count, &self.params, s);
            if n == self.params.n {
                continue;
            }
            let surviving = (0..self.cells.strategies_per_agent)
                .all(|d| self.domination_gap(eu, agent, d, s, &columns).is_some());
            let expected = n == 1 && keep.contains(&z);
            if surviving && !expected {
                unexpected.push(self.strategy_label(s));
            } else if !surviving && expected {
                missing.push(self.strategy_label(s));
            }
        }
        if unexpected.is_empty() && missing.is_empty() {
            Ok(ProjectionReport {
                agent: name,
                status: CheckStatus::Pass,
                detail: String::new(),
            })
        } else {
            Ok(ProjectionReport {
                agent: name,
                status: CheckStatus::Fail,
                detail: format!(
                    "unexpected survivors [{}]; missing survivors [{}]",
                    unexpected.join(" "),
                    missing.join(" ")
                ),
            })
        }
    }

    fn validate_state(&self, state: &OrdinalState) -> Result<(), CoreError> {
        if state == &self.theta_bar {
            return Ok(());
        }
        if !state.is_strict() {
            return Err(CoreError::NotStrict);
        }
        let first = state.pref(0).clone();
        if state.prefs().iter().any(|p| p != &first) {
            return Err(CoreError::DomainViolation(
                "audit states must be the crossing state or unanimous".into(),
            ));
        }
        Ok(())
    }

    /// Audits one state under several labeled representations.
    pub fn audit_state(
        &self,
        state: &OrdinalState,
        reps: &[(String, CardinalState)],
    ) -> Result<StateAudit, CoreError> {
        let mut out = Vec::with_capacity(reps.len());
        for (label, u) in reps {
            out.push(self.audit_rep(state, label, u)?);
        }
        Ok(StateAudit {
            state_text: render_state(state, &self.agents, &self.space),
            reps: out,
        })
    }
}

/// Per-agent strategy pools for the projection check: n = 1 strategies plus
/// those with n at least the agent's threshold.
fn thresholds_pools(
    h: &TruncationHarness,
    state: &OrdinalState,
    u: &CardinalState,
    cap: usize,
) -> Result<Vec<Vec<usize>>, CoreError> {
    let z_count = h.space.len();
    let mut pools = Vec::with_capacity(h.agents.len());
    for agent in 0..h.agents.len() {
        let n_star = n_threshold(u.agent(agent), state.pref(agent))? as usize;
        let mut pool = Vec::new();
        for s in 0..h.cells.strategies_per_agent {
            let (_z, n, _zhat) = decode_strategy(z_count, &h.params, s);
            if n == 1 || n >= n_star.min(cap + 1) {
                pool.push(s);
            }
        }
        pools.push(pool);
    }
    Ok(pools)
}

/// Convenience: canonical representation audit of a list of states.
pub fn audit_canonical(
    h: &TruncationHarness,
    states: &[OrdinalState],
) -> Result<Vec<StateAudit>, CoreError> {
    states
        .iter()
        .map(|s| h.audit_state(s, &[("canonical".to_string(), canonical_cardinal(s))]))
        .collect()
}
