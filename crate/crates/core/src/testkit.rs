//! Deterministic fixtures and random generators shared by the test suites
//! and the command-line reproduction targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::constructions::{hat_mechanism, star_mechanism, StarLabels};
use crate::domains::{crossing_state, parse_state, unanimity_strict_states};
use crate::types::{
    rat, AgentSet, Caps, CoreError, Lottery, Mechanism, OmegaSpec, OrdinalState, OutcomeSpace,
    Preference, Problem, Rat, Scf,
};
use num_traits::Zero;

pub fn rng_for(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// The 3x3 crossing-table mechanism with its seven-state problem: the
/// crossing state mapped to a, every unanimous strict state to the shared
/// top. Surjective and non-dictatorial.
pub fn hat_problem() -> (Mechanism, Problem) {
    let agents = AgentSet::numbered(2);
    let space = OutcomeSpace::alphabetic(3);
    let m = hat_mechanism(&space, "a", "b", "c").expect("fixed labels");
    let theta_bar = crossing_state(&agents, &space).expect("fixed shape");
    let mut domain = vec![theta_bar];
    let mut choice = vec![0usize];
    for state in unanimity_strict_states(&agents, &space, &Caps::default()).expect("small") {
        choice.push(state.pref(0).top().expect("strict"));
        domain.push(state);
    }
    let scf = Scf::new(domain, choice).expect("aligned");
    (m, Problem { agents, outcomes: space, omega: OmegaSpec::All, scf })
}

/// The |Z|>=4 generalization with its crossing-plus-unanimity problem.
pub fn star_problem(num_outcomes: usize) -> Result<(Mechanism, Problem), CoreError> {
    if num_outcomes < 4 {
        return Err(CoreError::WrongArity("star problem needs at least 4 outcomes".into()));
    }
    let agents = AgentSet::numbered(2);
    let space = OutcomeSpace::alphabetic(num_outcomes);
    // Crossing state: i1 tops b, i2 tops c, both rank a second, the rest in
    // label order.
    let tail: Vec<String> =
        space.labels().iter().skip(3).map(|l| format!(">{l}")).collect();
    let text = format!("i1:b>a>c{t};i2:c>a>b{t}", t = tail.concat());
    let theta_bar = parse_state(&text, &agents, &space, 1)?;
    let labels = StarLabels::derive(&space, &theta_bar, 0, 1, 0)?;
    let m = star_mechanism(&space, &labels)?;
    let mut domain = vec![theta_bar];
    let mut choice = vec![0usize];
    for state in unanimity_strict_states(&agents, &space, &Caps::default())? {
        choice.push(state.pref(0).top()?);
        domain.push(state);
    }
    let scf = Scf::new(domain, choice)?;
    Ok((m, Problem { agents, outcomes: space, omega: OmegaSpec::All, scf }))
}

/// A 3x4 mechanism on which the union-over-representations survivor set is
/// strictly smaller than the robust one: row r is strictly dominated at every
/// representation, but by different dominators on different representation
/// ranges, so no single robust dominator exists.
pub fn coupled_dominator_mechanism() -> Mechanism {
    let agents = AgentSet::numbered(2);
    let space = OutcomeSpace::alphabetic(3);
    let cell = |a: Rat, b: Rat, c: Rat| {
        Lottery::from_masses(vec![a, b, c]).expect("unit mass")
    };
    let one = || rat(1, 1);
    let zero = Rat::zero;
    let cells = vec![
        // Row p.
        cell(one(), zero(), zero()),
        cell(rat(1, 2), zero(), rat(1, 2)),
        cell(rat(1, 2), rat(1, 2), zero()),
        cell(rat(3, 5), zero(), rat(2, 5)),
        // Row q.
        cell(one(), zero(), zero()),
        cell(rat(3, 4), rat(1, 4), zero()),
        cell(zero(), rat(7, 8), rat(1, 8)),
        cell(rat(3, 4), rat(1, 4), zero()),
        // Row r: beaten by p exactly when u(b) < 1/2 (column x binds) and by
        // q exactly when u(b) > 2/5 (column y binds), never by one uniformly.
        cell(rat(1, 2), rat(1, 2), zero()),
        cell(zero(), one(), zero()),
        cell(rat(1, 4), rat(1, 4), rat(1, 2)),
        cell(zero(), one(), zero()),
    ];
    Mechanism::new(
        agents,
        space,
        vec![
            vec!["p".into(), "q".into(), "r".into()],
            vec!["w".into(), "x".into(), "y".into(), "z".into()],
        ],
        cells,
    )
    .expect("consistent shape")
}

/// Single-state problem for the coupled-dominator mechanism: both agents rank
/// a>b>c and the target is a.
pub fn coupled_dominator_problem() -> (Mechanism, Problem) {
    let m = coupled_dominator_mechanism();
    let agents = m.agents().clone();
    let space = m.outcomes().clone();
    let state = parse_state("i1:a>b>c;i2:a>b>c", &agents, &space, 1).expect("fixed");
    let scf = Scf::new(vec![state], vec![0]).expect("aligned");
    (m, Problem { agents, outcomes: space, omega: OmegaSpec::All, scf })
}

/// Configuration for the random generators. Sizes are inclusive upper bounds.
#[derive(Debug, Clone)]
pub struct GenCfg {
    pub max_agents: usize,
    pub max_strategies: usize,
    pub max_outcomes: usize,
    /// Per-cell lottery weights are drawn as integers in 0..=weight_scale and
    /// normalized, so denominators stay small and exact.
    pub weight_scale: u32,
    pub deterministic: bool,
}

impl Default for GenCfg {
    fn default() -> Self {
        GenCfg { max_agents: 3, max_strategies: 4, max_outcomes: 4, weight_scale: 6, deterministic: false }
    }
}

pub fn gen_space(rng: &mut ChaCha12Rng, cfg: &GenCfg) -> OutcomeSpace {
    OutcomeSpace::alphabetic(rng.gen_range(2..=cfg.max_outcomes))
}

pub fn gen_lottery(rng: &mut ChaCha12Rng, space: &OutcomeSpace, cfg: &GenCfg) -> Lottery {
    if cfg.deterministic {
        return Lottery::degenerate(space, rng.gen_range(0..space.len()));
    }
    let mut weights: Vec<u32> = (0..space.len()).map(|_| rng.gen_range(0..=cfg.weight_scale)).collect();
    if weights.iter().all(|&w| w == 0) {
        weights[rng.gen_range(0..space.len())] = 1;
    }
    let total: u32 = weights.iter().sum();
    Lottery::from_masses(
        weights.iter().map(|&w| rat(w as i64, total as i64)).collect(),
    )
    .expect("normalized weights")
}

pub fn gen_mechanism(rng: &mut ChaCha12Rng, cfg: &GenCfg) -> Mechanism {
    let space = gen_space(rng, cfg);
    let agents = AgentSet::numbered(rng.gen_range(2..=cfg.max_agents));
    let counts: Vec<usize> =
        (0..agents.len()).map(|_| rng.gen_range(1..=cfg.max_strategies)).collect();
    let strategies: Vec<Vec<String>> = counts
        .iter()
        .map(|&k| (0..k).map(|s| format!("s{s}")).collect())
        .collect();
    let num_cells: usize = counts.iter().product();
    let cells = (0..num_cells).map(|_| gen_lottery(rng, &space, cfg)).collect();
    Mechanism::new(agents, space, strategies, cells).expect("consistent shape")
}

pub fn gen_strict_preference(rng: &mut ChaCha12Rng, space: &OutcomeSpace) -> Preference {
    let mut ranking: Vec<usize> = (0..space.len()).collect();
    for i in (1..ranking.len()).rev() {
        ranking.swap(i, rng.gen_range(0..=i));
    }
    Preference::from_ranking(space, &ranking).expect("permutation")
}

pub fn gen_strict_state(
    rng: &mut ChaCha12Rng,
    agents: &AgentSet,
    space: &OutcomeSpace,
) -> OrdinalState {
    OrdinalState::new(
        agents,
        (0..agents.len()).map(|_| gen_strict_preference(rng, space)).collect(),
    )
    .expect("one preference per agent")
}

/// A nonempty sub-restriction of the full strategy sets, keeping at least one
/// strategy per agent.
pub fn gen_restriction(rng: &mut ChaCha12Rng, m: &Mechanism) -> crate::types::Restriction {
    let sets = (0..m.num_agents())
        .map(|i| {
            let n = m.num_strategies(i);
            let keep_total = rng.gen_range(1..=n);
            let mut pool: Vec<usize> = (0..n).collect();
            for j in (1..pool.len()).rev() {
                pool.swap(j, rng.gen_range(0..=j));
            }
            pool.truncate(keep_total);
            pool
        })
        .collect();
    crate::types::Restriction::new(sets)
}
