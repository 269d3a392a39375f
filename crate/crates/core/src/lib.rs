//! Exact-rational toolkit for dominance analysis of finite mechanisms.
//!
//! Everything here works over arbitrary-precision rationals; no floating
//! point enters any decision. The crate is organized as:
//!
//! * [`types`]: outcome spaces, lotteries, preferences, mechanisms, traces.
//! * [`domains`]: preference-domain enumeration, state parsing, sampling.
//! * [`lp`]: exact linear feasibility via Fourier-Motzkin, with witnesses.
//! * [`dominance`]: one-shot and iterated deletion, robust (all-representation)
//!   deletion, and the exact union-over-representations survivor test.
//! * [`constructions`]: the specific mechanisms studied by the verification
//!   and reproduction commands, plus the truncated infinite-action family.
//! * [`verify`]: implementation verification with replayable witnesses.
//! * [`search`]: exhaustive mechanism-space mining with shards and resume.
//! * [`format`]: canonical JSON file formats.
//! * [`testkit`]: seeded generators and the randomized invariant suites.

pub mod constructions;
pub mod domains;
pub mod dominance;
pub mod format;
pub mod lp;
pub mod search;
pub mod testkit;
pub mod types;
pub mod verify;

pub use search::{Counterexample, SearchReport, SearchSpace};
pub use types::{
    AgentSet, Caps, CardinalState, CoreError, DeletionRecord, DeletionTrace, Lottery, Mechanism,
    OmegaSpec, OrdinalState, OutcomeSpace, Preference, Problem, Rat, Restriction, Scf, TraceRound,
    Verdict, VerdictStatus, Witness,
};
pub use verify::{Notion, VerificationReport};

/// Root seed used by every deterministic command unless overridden.
pub const DEFAULT_ROOT_SEED: u64 = 7919;

/// splitmix64 step, used to derive independent child seeds from a root seed.
pub fn derive_seed(root: u64, stream: u64) -> u64 {
    let mut z = root
        .wrapping_add(0x9e3779b97f4a7c15)
        .wrapping_add(stream.wrapping_mul(0xbf58476d1ce4e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
