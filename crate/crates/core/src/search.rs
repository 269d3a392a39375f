//! Exhaustive enumeration of small discretized mechanism spaces, hunting for
//! certified non-dictatorial implementations.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::domains::{
    all_strict_states, canonical_cardinal, render_state, unanimity_strict_states, DomainKind,
    DomainSpec,
};
use crate::dominance::{possibly_undominated, robust_udinf, udinf_at};
use crate::format::{checksum64, mechanism_from_value, mechanism_to_value};
use crate::types::{
    AgentSet, Caps, CoreError, Lottery, Mechanism, OmegaSpec, OrdinalState, OutcomeSpace, Problem,
    ProfileIter, Rat, Restriction, Scf, VerdictStatus,
};
use crate::verify::{verify_ud, verify_udinf, Notion};

fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}

/// Number of lotteries on the 1/q grid: compositions of q into |Z| parts.
pub fn grid_lottery_count(q: u32, parts: usize) -> u128 {
    binom(q as u64 + parts as u64 - 1, parts as u64 - 1)
}

/// Lottery at a composition rank. Ranks order the mass-numerator tuples
/// lexicographically ascending in outcome order.
pub fn unrank_grid_lottery(
    q: u32,
    space: &OutcomeSpace,
    rank: u128,
) -> Result<Lottery, CoreError> {
    let k = space.len();
    if rank >= grid_lottery_count(q, k) {
        return Err(CoreError::Invalid(format!("lottery rank {rank} out of range")));
    }
    let mut rank = rank;
    let mut left = q as u64;
    let mut numers = vec![0u64; k];
    for i in 0..k {
        if i + 1 == k {
            numers[i] = left;
            break;
        }
        let rest = (k - i - 1) as u64;
        for v in 0..=left {
            let count = binom(left - v + rest - 1, rest - 1);
            if rank < count {
                numers[i] = v;
                left -= v;
                break;
            }
            rank -= count;
        }
    }
    Lottery::from_masses(
        numers
            .iter()
            .map(|&c| Rat::new(BigInt::from(c), BigInt::from(q)))
            .collect(),
    )
}

/// Inverse of [`unrank_grid_lottery`]; None when some mass is not a multiple
/// of 1/q.
pub fn grid_lottery_rank(q: u32, y: &Lottery) -> Option<u128> {
    let k = y.mass().len();
    let mut numers = Vec::with_capacity(k);
    for m in y.mass() {
        let scaled = m * Rat::from_integer(BigInt::from(q));
        if !scaled.is_integer() {
            return None;
        }
        numers.push(scaled.to_integer().to_u64()?);
    }
    let mut rank: u128 = 0;
    let mut left = q as u64;
    for (i, &c) in numers.iter().enumerate() {
        if i + 1 == k {
            break;
        }
        let rest = (k - i - 1) as u64;
        for v in 0..c {
            rank += binom(left - v + rest - 1, rest - 1);
        }
        left -= c;
    }
    Some(rank)
}

/// One discretized space of mechanisms plus the implementation question asked
/// of each: the ordinal domain and the deletion notion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpace {
    pub agents: AgentSet,
    pub outcomes: OutcomeSpace,
    pub strategy_counts: Vec<usize>,
    /// Grid denominator; cell masses are multiples of 1/q. Irrelevant when
    /// `deterministic_only`.
    pub q: u32,
    pub deterministic_only: bool,
    pub notion: Notion,
    pub domain: DomainSpec,
}

impl SearchSpace {
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.q < 1 {
            return Err(CoreError::Invalid("grid denominator must be at least 1".into()));
        }
        if self.strategy_counts.len() != self.agents.len() {
            return Err(CoreError::WrongArity(format!(
                "{} strategy counts for {} agents",
                self.strategy_counts.len(),
                self.agents.len()
            )));
        }
        if self.strategy_counts.iter().any(|&c| c == 0) {
            return Err(CoreError::Invalid("empty strategy set in search space".into()));
        }
        Ok(())
    }

    pub fn num_cells(&self) -> usize {
        self.strategy_counts.iter().product()
    }

    pub fn lotteries_per_cell(&self) -> u128 {
        if self.deterministic_only {
            self.outcomes.len() as u128
        } else {
            grid_lottery_count(self.q, self.outcomes.len())
        }
    }

    pub fn total_mechanisms(&self) -> Result<u128, CoreError> {
        let l = self.lotteries_per_cell();
        let mut total: u128 = 1;
        for _ in 0..self.num_cells() {
            total = total
                .checked_mul(l)
                .ok_or_else(|| CoreError::SizeLimit("mechanism space exceeds u128".into()))?;
        }
        Ok(total)
    }

    /// The ordinal domain: kind states plus deduplicated extras, strict only.
    pub fn theta(&self, caps: &Caps) -> Result<Vec<OrdinalState>, CoreError> {
        let mut theta = match self.domain.kind {
            DomainKind::StrictAll => all_strict_states(&self.agents, &self.outcomes, caps)?,
            DomainKind::UnanimityStrict => {
                unanimity_strict_states(&self.agents, &self.outcomes, caps)?
            }
            DomainKind::Custom => Vec::new(),
        };
        for extra in &self.domain.extra {
            if extra.prefs().len() != self.agents.len() {
                return Err(CoreError::WrongArity("extra state has wrong agent count".into()));
            }
            if !theta.contains(extra) {
                theta.push(extra.clone());
            }
        }
        if theta.is_empty() {
            return Err(CoreError::DomainViolation("empty search domain".into()));
        }
        if let Some(bad) = theta.iter().find(|t| !t.is_strict()) {
            return Err(CoreError::DomainViolation(format!(
                "search domains must be strict; {} is not",
                render_state(bad, &self.agents, &self.outcomes)
            )));
        }
        Ok(theta)
    }

    pub fn descriptor(&self) -> String {
        let kind = match self.domain.kind {
            DomainKind::StrictAll => "strict-all",
            DomainKind::UnanimityStrict => "unanimity-strict",
            DomainKind::Custom => "custom",
        };
        let extra: Vec<String> = self
            .domain
            .extra
            .iter()
            .map(|s| render_state(s, &self.agents, &self.outcomes))
            .collect();
        format!(
            "agents={};outcomes={};shape={:?};q={};det={};notion={};domain={}+[{}]",
            self.agents.names().join("|"),
            self.outcomes.labels().join("|"),
            self.strategy_counts,
            if self.deterministic_only { 0 } else { self.q },
            self.deterministic_only,
            self.notion,
            kind,
            extra.join("|"),
        )
    }

    pub fn space_hash(&self) -> u64 {
        checksum64(&self.descriptor())
    }
}

fn unrank_cell(space: &SearchSpace, rank: u64) -> Result<Lottery, CoreError> {
    if space.deterministic_only {
        if (rank as usize) < space.outcomes.len() {
            Ok(Lottery::degenerate(&space.outcomes, rank as usize))
        } else {
            Err(CoreError::Invalid(format!("degenerate rank {rank} out of range")))
        }
    } else {
        unrank_grid_lottery(space.q, &space.outcomes, rank as u128)
    }
}

/// Mixed-radix counter over per-cell lottery ranks. The first cell is the most
/// significant digit, so cursors order mechanisms lexicographically by their
/// cell sequence.
pub struct RankStream {
    radix: u128,
    digits: Vec<u64>,
    cursor: u128,
    total: u128,
}

impl RankStream {
    pub fn starting_at(space: &SearchSpace, cursor: u128) -> Result<Self, CoreError> {
        space.validate()?;
        let total = space.total_mechanisms()?;
        if cursor > total {
            return Err(CoreError::Invalid(format!("cursor {cursor} beyond the space")));
        }
        let radix = space.lotteries_per_cell();
        let mut digits = vec![0u64; space.num_cells()];
        let mut rest = cursor;
        for d in digits.iter_mut().rev() {
            *d = (rest % radix) as u64;
            rest /= radix;
        }
        Ok(RankStream { radix, digits, cursor, total })
    }

    pub fn cursor(&self) -> u128 {
        self.cursor
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn exhausted(&self) -> bool {
        self.cursor >= self.total
    }

    pub fn advance(&mut self) {
        self.cursor += 1;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if (*d as u128) < self.radix {
                return;
            }
            *d = 0;
        }
    }
}

/// Builds the concrete mechanism for one digit vector. Strategies are named
/// s1, s2, ... per agent.
pub fn materialize(space: &SearchSpace, digits: &[u64]) -> Result<Mechanism, CoreError> {
    let strategies: Vec<Vec<String>> = space
        .strategy_counts
        .iter()
        .map(|&k| (1..=k).map(|j| format!("s{j}")).collect())
        .collect();
    let cells = digits
        .iter()
        .map(|&d| unrank_cell(space, d))
        .collect::<Result<Vec<_>, _>>()?;
    Mechanism::new(space.agents.clone(), space.outcomes.clone(), strategies, cells)
}

pub struct MechanismStream {
    space: SearchSpace,
    inner: RankStream,
}

impl MechanismStream {
    /// Cursor of the next mechanism the stream will yield.
    pub fn cursor(&self) -> u128 {
        self.inner.cursor()
    }
}

impl Iterator for MechanismStream {
    type Item = Mechanism;

    fn next(&mut self) -> Option<Mechanism> {
        if self.inner.exhausted() {
            return None;
        }
        let m = materialize(&self.space, self.inner.digits()).expect("stream digits are in range");
        self.inner.advance();
        Some(m)
    }
}

pub fn enumerate_mechanisms(space: &SearchSpace) -> Result<MechanismStream, CoreError> {
    enumerate_mechanisms_from(space, 0)
}

pub fn enumerate_mechanisms_from(
    space: &SearchSpace,
    cursor: u128,
) -> Result<MechanismStream, CoreError> {
    Ok(MechanismStream { space: space.clone(), inner: RankStream::starting_at(space, cursor)? })
}

/// Cursor of a concrete mechanism within the space, when it lies on the grid.
/// Strategy labels are ignored; shape and outcome space must match.
pub fn mechanism_cursor(space: &SearchSpace, m: &Mechanism) -> Option<u128> {
    if m.num_agents() != space.agents.len() || m.outcomes() != &space.outcomes {
        return None;
    }
    if (0..m.num_agents()).any(|i| m.num_strategies(i) != space.strategy_counts[i]) {
        return None;
    }
    let radix = space.lotteries_per_cell();
    let mut cursor: u128 = 0;
    for profile in m.profiles() {
        let y = m.outcome_lottery(&profile);
        let rank = if space.deterministic_only {
            y.degenerate_on()? as u128
        } else {
            grid_lottery_rank(space.q, y)?
        };
        cursor = cursor * radix + rank;
    }
    Some(cursor)
}

/// All maps f from the domain into the outcomes that pass the given filters.
/// Unanimity-respecting pins f to the shared top on unanimous strict states;
/// non-dictatorial drops every f that follows one agent's strict top
/// throughout.
pub fn enumerate_scfs(
    domain: &[OrdinalState],
    space: &OutcomeSpace,
    require_surjective: bool,
    require_nondictatorial: bool,
    require_unanimity_respecting: bool,
    caps: &Caps,
) -> Result<Vec<Scf>, CoreError> {
    if domain.is_empty() {
        return Err(CoreError::DomainViolation("empty domain".into()));
    }
    let raw = (space.len() as u128).checked_pow(domain.len() as u32);
    match raw {
        Some(c) if c <= caps.max_scfs as u128 => {}
        _ => {
            return Err(CoreError::SizeLimit(format!(
                "{}^{} candidate maps exceed the scf cap",
                space.len(),
                domain.len()
            )))
        }
    }
    let num_agents = domain[0].prefs().len();
    let tops: Vec<Vec<Option<usize>>> = domain
        .iter()
        .map(|s| (0..num_agents).map(|i| s.pref(i).top().ok()).collect())
        .collect();
    let pinned: Vec<Option<usize>> = domain
        .iter()
        .map(|s| {
            let p0 = s.pref(0);
            if s.is_strict() && s.prefs().iter().all(|p| p == p0) {
                p0.top().ok()
            } else {
                None
            }
        })
        .collect();
    let mut out = Vec::new();
    'maps: for choice in ProfileIter::new(vec![space.len(); domain.len()]) {
        if require_unanimity_respecting {
            for (c, pin) in choice.iter().zip(&pinned) {
                if matches!(pin, Some(t) if t != c) {
                    continue 'maps;
                }
            }
        }
        if require_surjective && (0..space.len()).any(|z| !choice.contains(&z)) {
            continue;
        }
        if require_nondictatorial {
            let dictator = (0..num_agents).any(|i| {
                choice.iter().zip(&tops).all(|(&c, state_tops)| state_tops[i] == Some(c))
            });
            if dictator {
                continue;
            }
        }
        out.push(Scf::new(domain.to_vec(), choice)?);
    }
    Ok(out)
}

/// What one mechanism does at one ordinal state, independent of any f:
/// certified on-target for exactly one outcome, definitively off-target for
/// every outcome, or only tentatively on-target for one outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StateClass {
    Implements(usize),
    OnlyMaybe(usize),
    FailsAll,
}

fn image_class(m: &Mechanism, r: &Restriction, exact: bool) -> StateClass {
    let mut target: Option<usize> = None;
    for p in r.profiles() {
        match m.outcome_lottery(&p).degenerate_on() {
            Some(z) if target.is_none() || target == Some(z) => target = Some(z),
            _ => return StateClass::FailsAll,
        }
    }
    match target {
        Some(z) if exact => StateClass::Implements(z),
        Some(z) => StateClass::OnlyMaybe(z),
        None => StateClass::FailsAll,
    }
}

/// Exact state decision for two outcomes on integer masses. With two outcomes
/// an expected-utility comparison reduces to comparing the mass on the
/// preferred outcome, identically for every representation, so one integer
/// fixpoint decides the state for the entire representation family.
fn two_outcome_class(
    tops: &[i128],
    full: i128,
    n1: usize,
    n2: usize,
    zero_top: [bool; 2],
    notion: Notion,
) -> StateClass {
    let mut alive1 = vec![true; n1];
    let mut alive2 = vec![true; n2];
    loop {
        let beats_row = |d: usize, s: usize, alive2: &[bool]| {
            (0..n2).filter(|&j| alive2[j]).all(|j| {
                let (a, b) = (tops[d * n2 + j], tops[s * n2 + j]);
                if zero_top[0] {
                    a > b
                } else {
                    a < b
                }
            })
        };
        let beats_col = |d: usize, s: usize, alive1: &[bool]| {
            (0..n1).filter(|&i| alive1[i]).all(|i| {
                let (a, b) = (tops[i * n2 + d], tops[i * n2 + s]);
                if zero_top[1] {
                    a > b
                } else {
                    a < b
                }
            })
        };
        let del1: Vec<usize> = (0..n1)
            .filter(|&s| {
                alive1[s] && (0..n1).any(|d| d != s && alive1[d] && beats_row(d, s, &alive2))
            })
            .collect();
        let del2: Vec<usize> = (0..n2)
            .filter(|&s| {
                alive2[s] && (0..n2).any(|d| d != s && alive2[d] && beats_col(d, s, &alive1))
            })
            .collect();
        if del1.is_empty() && del2.is_empty() {
            break;
        }
        for s in del1 {
            alive1[s] = false;
        }
        for s in del2 {
            alive2[s] = false;
        }
        if notion == Notion::Ud {
            break;
        }
    }
    let mut seen_full = false;
    let mut seen_zero = false;
    for s in (0..n1).filter(|&s| alive1[s]) {
        for j in (0..n2).filter(|&j| alive2[j]) {
            let t = tops[s * n2 + j];
            if t == full {
                seen_full = true;
            } else if t == 0 {
                seen_zero = true;
            } else {
                return StateClass::FailsAll;
            }
            if seen_full && seen_zero {
                return StateClass::FailsAll;
            }
        }
    }
    if seen_full {
        StateClass::Implements(0)
    } else {
        StateClass::Implements(1)
    }
}

fn generic_class(m: &Mechanism, state: &OrdinalState, notion: Notion, caps: &Caps) -> StateClass {
    match notion {
        Notion::Ud => {
            let full = Restriction::full(m);
            let per: Vec<_> = (0..m.num_agents())
                .map(|i| possibly_undominated(m, &full, i, state.pref(i), caps))
                .collect();
            let exact = per.iter().all(|s| s.exact);
            let union = Restriction::new(per.into_iter().map(|s| s.members).collect());
            image_class(m, &union, exact)
        }
        Notion::Udinf => {
            let (robust, _) = robust_udinf(m, state);
            match image_class(m, &robust, true) {
                StateClass::Implements(z) => StateClass::Implements(z),
                _ => {
                    // The robust relation over-covers; an exact run at the
                    // canonical representation can still refute outright.
                    let (r, _) = udinf_at(m, &canonical_cardinal(state));
                    match image_class(m, &r, true) {
                        StateClass::Implements(z) => StateClass::OnlyMaybe(z),
                        _ => StateClass::FailsAll,
                    }
                }
            }
        }
    }
}

/// A certified non-dictatorial implementation found by the miner. `choices`
/// aligns with the space's domain order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub cursor: u128,
    pub mechanism: Mechanism,
    pub choices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub space_hash: u64,
    pub notion: Notion,
    pub spaces_scanned: u64,
    pub mechanisms_tested: u64,
    pub scfs_tested: u64,
    pub pairs_tested: u64,
    /// Pairs the notion could not resolve either way; counted apart so the
    /// zero-counterexample claim stays sound.
    pub unresolved: u64,
    pub counterexamples: Vec<Counterexample>,
    pub wall_ms: u64,
    pub cursor_start: u128,
    pub cursor_end: u128,
}

pub fn shard_bounds(total: u128, k: u64, n: u64) -> Result<(u128, u128), CoreError> {
    if n == 0 || k >= n {
        return Err(CoreError::Invalid(format!("shard {k}/{n} is out of range")));
    }
    let lo = total
        .checked_mul(k as u128)
        .ok_or_else(|| CoreError::SizeLimit("shard arithmetic overflows".into()))?
        / n as u128;
    let hi = total
        .checked_mul((k + 1) as u128)
        .ok_or_else(|| CoreError::SizeLimit("shard arithmetic overflows".into()))?
        / n as u128;
    Ok((lo, hi))
}

pub fn mine(space: &SearchSpace, caps: &Caps) -> Result<SearchReport, CoreError> {
    let total = space.total_mechanisms()?;
    mine_range(space, 0, total, caps)
}

/// Scans the cursor window [start, end). Every (mechanism, qualifying SCF)
/// pair is decided for the space's notion; certified non-dictatorial hits are
/// re-verified through the verify module before being recorded.
pub fn mine_range(
    space: &SearchSpace,
    start: u128,
    end: u128,
    caps: &Caps,
) -> Result<SearchReport, CoreError> {
    let t0 = Instant::now();
    space.validate()?;
    let total = space.total_mechanisms()?;
    if start > end || end > total {
        return Err(CoreError::Invalid(format!("bad cursor range {start}..{end}")));
    }
    let theta = space.theta(caps)?;
    let unan = unanimity_strict_states(&space.agents, &space.outcomes, caps)?;
    if let Some(missing) = unan.iter().find(|u| !theta.contains(u)) {
        return Err(CoreError::DomainViolation(format!(
            "domain misses the unanimity state {}",
            render_state(missing, &space.agents, &space.outcomes)
        )));
    }
    let scfs = enumerate_scfs(&theta, &space.outcomes, true, true, false, caps)?;
    let tables: Vec<Vec<usize>> = scfs.iter().map(|s| s.choices().to_vec()).collect();
    let range_masks: Vec<u32> =
        tables.iter().map(|t| t.iter().fold(0u32, |m, &z| m | (1 << z))).collect();

    let radix = space.lotteries_per_cell() as usize;
    let mut degen = Vec::with_capacity(radix);
    let mut rank_top = Vec::with_capacity(radix);
    for r in 0..radix {
        let y = unrank_cell(space, r as u64)?;
        degen.push(y.degenerate_on());
        let scale = if space.deterministic_only { 1u32 } else { space.q };
        let top = (&y.mass()[0] * Rat::from_integer(BigInt::from(scale)))
            .to_integer()
            .to_i128()
            .expect("grid numerator fits");
        rank_top.push(top);
    }
    let full_top: i128 = if space.deterministic_only { 1 } else { space.q as i128 };
    let two = space.outcomes.len() == 2 && space.agents.len() == 2;
    let dirs: Vec<[bool; 2]> = if two {
        theta
            .iter()
            .map(|s| {
                [
                    s.pref(0).top().expect("strict") == 0,
                    s.pref(1).top().expect("strict") == 0,
                ]
            })
            .collect()
    } else {
        Vec::new()
    };
    let (n1, n2) = if two { (space.strategy_counts[0], space.strategy_counts[1]) } else { (0, 0) };

    let mut report = SearchReport {
        space_hash: space.space_hash(),
        notion: space.notion,
        spaces_scanned: 1,
        mechanisms_tested: 0,
        scfs_tested: scfs.len() as u64,
        pairs_tested: 0,
        unresolved: 0,
        counterexamples: Vec::new(),
        wall_ms: 0,
        cursor_start: start,
        cursor_end: end,
    };
    let mut stream = RankStream::starting_at(space, start)?;
    let mut classes: Vec<Option<StateClass>> = vec![None; theta.len()];
    while stream.cursor() < end {
        report.mechanisms_tested += 1;
        let digits = stream.digits();
        let mut mask: u32 = 0;
        for &d in digits {
            if let Some(z) = degen[d as usize] {
                mask |= 1 << z;
            }
        }
        classes.iter_mut().for_each(|c| *c = None);
        let mut mech: Option<Mechanism> = None;
        let mut tops: Option<Vec<i128>> = None;
        for (k, table) in tables.iter().enumerate() {
            report.pairs_tested += 1;
            // An implementation needs a surely-f(θ) cell at every state, so a
            // mechanism missing a degenerate cell for some chosen outcome is
            // resolved negative immediately.
            if range_masks[k] & !mask != 0 {
                continue;
            }
            let mut failed = false;
            let mut unknown = false;
            for (idx, &want) in table.iter().enumerate() {
                let class = match classes[idx] {
                    Some(c) => c,
                    None => {
                        let c = if two {
                            let tops = tops.get_or_insert_with(|| {
                                digits.iter().map(|&d| rank_top[d as usize]).collect()
                            });
                            two_outcome_class(tops, full_top, n1, n2, dirs[idx], space.notion)
                        } else {
                            let m = mech.get_or_insert_with(|| {
                                materialize(space, digits).expect("stream digits are in range")
                            });
                            generic_class(m, &theta[idx], space.notion, caps)
                        };
                        classes[idx] = Some(c);
                        c
                    }
                };
                match class {
                    StateClass::Implements(z) if z == want => {}
                    StateClass::OnlyMaybe(z) if z == want => unknown = true,
                    _ => {
                        failed = true;
                        break;
                    }
                }
            }
            if failed {
                continue;
            }
            if unknown {
                report.unresolved += 1;
                continue;
            }
            let m = mech
                .get_or_insert_with(|| materialize(space, digits).expect("stream digits are in range"))
                .clone();
            let problem = Problem {
                agents: space.agents.clone(),
                outcomes: space.outcomes.clone(),
                omega: OmegaSpec::All,
                scf: scfs[k].clone(),
            };
            let status = match space.notion {
                Notion::Ud => verify_ud(&m, &problem, caps)?.status,
                Notion::Udinf => verify_udinf(&m, &problem)?.status,
            };
            if status == VerdictStatus::Verified {
                report.counterexamples.push(Counterexample {
                    cursor: stream.cursor(),
                    mechanism: m,
                    choices: table.clone(),
                });
            } else {
                report.unresolved += 1;
            }
        }
        stream.advance();
    }
    report.wall_ms = t0.elapsed().as_millis() as u64;
    Ok(report)
}

/// Combines shard reports of the same space. Associative and commutative up
/// to wall-clock.
pub fn merge_reports(a: &SearchReport, b: &SearchReport) -> Result<SearchReport, CoreError> {
    if a.space_hash != b.space_hash || a.notion != b.notion {
        return Err(CoreError::Invalid("cannot merge reports from different spaces".into()));
    }
    let mut counterexamples = a.counterexamples.clone();
    counterexamples.extend(b.counterexamples.iter().cloned());
    counterexamples.sort_by_key(|c| c.cursor);
    counterexamples.dedup();
    Ok(SearchReport {
        space_hash: a.space_hash,
        notion: a.notion,
        spaces_scanned: a.spaces_scanned.max(b.spaces_scanned),
        mechanisms_tested: a.mechanisms_tested + b.mechanisms_tested,
        scfs_tested: a.scfs_tested.max(b.scfs_tested),
        pairs_tested: a.pairs_tested + b.pairs_tested,
        unresolved: a.unresolved + b.unresolved,
        counterexamples,
        wall_ms: a.wall_ms + b.wall_ms,
        cursor_start: a.cursor_start.min(b.cursor_start),
        cursor_end: a.cursor_end.max(b.cursor_end),
    })
}

/// Checkpoint document: the full report, with cursors as decimal strings.
pub fn search_report_to_value(r: &SearchReport) -> Value {
    json!({
        "space_hash": format!("{:016x}", r.space_hash),
        "notion": r.notion.to_string(),
        "spaces_scanned": r.spaces_scanned,
        "mechanisms_tested": r.mechanisms_tested,
        "scfs_tested": r.scfs_tested,
        "pairs_tested": r.pairs_tested,
        "unresolved": r.unresolved,
        "wall_ms": r.wall_ms,
        "cursor_start": r.cursor_start.to_string(),
        "cursor_end": r.cursor_end.to_string(),
        "counterexamples": r.counterexamples.iter().map(|c| json!({
            "cursor": c.cursor.to_string(),
            "choices": c.choices,
            "mechanism": mechanism_to_value(&c.mechanism),
        })).collect::<Vec<_>>(),
    })
}

fn get_u64(v: &Value, key: &str) -> Result<u64, CoreError> {
    v.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| CoreError::Invalid(format!("missing numeric field {key:?}")))
}

fn get_u128(v: &Value, key: &str) -> Result<u128, CoreError> {
    v.get(key)
        .and_then(Value::as_str)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CoreError::Invalid(format!("missing cursor field {key:?}")))
}

pub fn search_report_from_value(v: &Value) -> Result<SearchReport, CoreError> {
    let hash_text = v
        .get("space_hash")
        .and_then(Value::as_str)
        .ok_or_else(|| CoreError::Invalid("missing space_hash".into()))?;
    let space_hash = u64::from_str_radix(hash_text, 16)
        .map_err(|_| CoreError::Invalid(format!("bad space hash {hash_text:?}")))?;
    let notion = match v.get("notion").and_then(Value::as_str) {
        Some("UD") => Notion::Ud,
        Some("UDINF") => Notion::Udinf,
        other => return Err(CoreError::Invalid(format!("bad notion {other:?}"))),
    };
    let mut counterexamples = Vec::new();
    if let Some(list) = v.get("counterexamples").and_then(Value::as_array) {
        for c in list {
            let mechanism = mechanism_from_value(
                c.get("mechanism")
                    .ok_or_else(|| CoreError::Invalid("counterexample misses mechanism".into()))?,
            )?;
            let choices = c
                .get("choices")
                .and_then(Value::as_array)
                .ok_or_else(|| CoreError::Invalid("counterexample misses choices".into()))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|n| n as usize)
                        .ok_or_else(|| CoreError::Invalid("bad choice entry".into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            counterexamples.push(Counterexample {
                cursor: get_u128(c, "cursor")?,
                mechanism,
                choices,
            });
        }
    }
    Ok(SearchReport {
        space_hash,
        notion,
        spaces_scanned: get_u64(v, "spaces_scanned")?,
        mechanisms_tested: get_u64(v, "mechanisms_tested")?,
        scfs_tested: get_u64(v, "scfs_tested")?,
        pairs_tested: get_u64(v, "pairs_tested")?,
        unresolved: get_u64(v, "unresolved")?,
        counterexamples,
        wall_ms: get_u64(v, "wall_ms")?,
        cursor_start: get_u128(v, "cursor_start")?,
        cursor_end: get_u128(v, "cursor_end")?,
    })
}
