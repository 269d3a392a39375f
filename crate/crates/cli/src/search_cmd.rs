use std::path::Path;
use std::thread;

use clap::Args;
use domlab_core::domains::{DomainKind, DomainSpec};
use domlab_core::search::{
    merge_reports, mine_range, search_report_from_value, search_report_to_value, shard_bounds,
};
use domlab_core::format::to_pretty;
use domlab_core::{AgentSet, Caps, CoreError, SearchReport, SearchSpace};

use crate::util::{parse_counts, parse_notion, parse_outcomes, read_file, write_out};

#[derive(Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 2)]
    pub agents: usize,
    /// Outcome labels "a,b" or a bare count.
    #[arg(long, default_value = "2")]
    pub outcomes: String,
    /// Per-agent strategy counts, e.g. "3,3".
    #[arg(long, default_value = "2,2")]
    pub strategies: String,
    /// Grid denominator; every cell mass is a multiple of 1/grid.
    #[arg(long, default_value_t = 2)]
    pub grid: u32,
    #[arg(long, default_value = "ud")]
    pub notion: String,
    /// Restrict cells to degenerate lotteries.
    #[arg(long)]
    pub deterministic: bool,
    /// Ordinal domain: "strict-all" or "hat" (unanimity plus the crossing
    /// state). Defaults to strict-all for two outcomes, hat otherwise.
    #[arg(long)]
    pub domain: Option<String>,
    /// Scan only shard k of n, written "k/n".
    #[arg(long)]
    pub shard: Option<String>,
    /// Scan only the cursor window "start:end".
    #[arg(long)]
    pub window: Option<String>,
    /// Resume from a checkpoint report written by --out.
    #[arg(long)]
    pub resume: Option<std::path::PathBuf>,
    /// Worker threads; the window is split into that many cursor shards.
    #[arg(long, default_value_t = 1)]
    pub jobs: u64,
}

fn build_space(args: &SearchArgs, caps: &Caps) -> Result<SearchSpace, CoreError> {
    let outcomes = parse_outcomes(Some(&args.outcomes), 2)?;
    let agents = AgentSet::numbered(args.agents);
    let domain_name = match &args.domain {
        Some(d) => d.clone(),
        None => {
            if outcomes.len() == 2 {
                "strict-all".to_string()
            } else {
                "hat".to_string()
            }
        }
    };
    let domain = match domain_name.as_str() {
        "strict-all" => DomainSpec { kind: DomainKind::StrictAll, extra: vec![] },
        "hat" => {
            let crossing = domlab_core::domains::crossing_state(&agents, &outcomes)?;
            DomainSpec { kind: DomainKind::UnanimityStrict, extra: vec![crossing] }
        }
        _ => {
            return Err(CoreError::Invalid(format!(
                "unknown domain {domain_name:?}; use strict-all or hat"
            )))
        }
    };
    let space = SearchSpace {
        agents,
        outcomes,
        strategy_counts: parse_counts(&args.strategies)?,
        q: args.grid,
        deterministic_only: args.deterministic,
        notion: parse_notion(&args.notion)?,
        domain,
    };
    space.validate()?;
    space.theta(caps)?;
    Ok(space)
}

fn parse_window(s: &str) -> Result<(u128, u128), CoreError> {
    let Some((a, b)) = s.split_once(':') else {
        return Err(CoreError::Invalid(format!("bad window {s:?}; use start:end")));
    };
    let lo = a.trim().parse::<u128>();
    let hi = b.trim().parse::<u128>();
    match (lo, hi) {
        (Ok(lo), Ok(hi)) if lo <= hi => Ok((lo, hi)),
        _ => Err(CoreError::Invalid(format!("bad window {s:?}; use start:end"))),
    }
}

fn parse_shard(s: &str) -> Result<(u64, u64), CoreError> {
    let Some((k, n)) = s.split_once('/') else {
        return Err(CoreError::Invalid(format!("bad shard {s:?}; use k/n")));
    };
    match (k.trim().parse::<u64>(), n.trim().parse::<u64>()) {
        (Ok(k), Ok(n)) => Ok((k, n)),
        _ => Err(CoreError::Invalid(format!("bad shard {s:?}; use k/n"))),
    }
}

fn mine_parallel(
    space: &SearchSpace,
    start: u128,
    end: u128,
    jobs: u64,
    caps: &Caps,
) -> Result<SearchReport, CoreError> {
    if jobs <= 1 || end <= start {
        return mine_range(space, start, end, caps);
    }
    let width = end - start;
    let jobs = jobs.min(u64::try_from(width).unwrap_or(u64::MAX)).max(1);
    let mut partials: Vec<Result<SearchReport, CoreError>> = Vec::new();
    thread::scope(|scope| {
        let mut handles = Vec::new();
        for k in 0..jobs {
            let (lo, hi) = (
                start + width * u128::from(k) / u128::from(jobs),
                start + width * u128::from(k + 1) / u128::from(jobs),
            );
            handles.push(scope.spawn(move || mine_range(space, lo, hi, caps)));
        }
        for h in handles {
            partials.push(h.join().expect("search worker panicked"));
        }
    });
    let mut merged: Option<SearchReport> = None;
    for partial in partials {
        let partial = partial?;
        merged = Some(match merged {
            None => partial,
            Some(m) => merge_reports(&m, &partial)?,
        });
    }
    Ok(merged.expect("at least one shard"))
}

pub fn run(args: &SearchArgs, out: Option<&Path>, caps: &Caps) -> Result<u8, CoreError> {
    let space = build_space(args, caps)?;
    let total = space.total_mechanisms()?;
    let (mut start, end) = match (&args.shard, &args.window) {
        (Some(_), Some(_)) => {
            return Err(CoreError::Invalid("use either --shard or --window, not both".into()))
        }
        (Some(s), None) => {
            let (k, n) = parse_shard(s)?;
            shard_bounds(total, k, n)?
        }
        (None, Some(w)) => {
            let (lo, hi) = parse_window(w)?;
            if hi > total {
                return Err(CoreError::Invalid(format!(
                    "window end {hi} is past the {total} mechanisms"
                )));
            }
            (lo, hi)
        }
        (None, None) => (0, total),
    };
    let mut resumed: Option<SearchReport> = None;
    if let Some(path) = &args.resume {
        let value: serde_json::Value = serde_json::from_str(&read_file(path)?)
            .map_err(|e| CoreError::parse(e.line(), e.column(), e.to_string()))?;
        let report = search_report_from_value(&value)?;
        if report.space_hash != space.space_hash() || report.notion != space.notion {
            return Err(CoreError::Invalid(
                "the checkpoint was written for a different search space".into(),
            ));
        }
        start = start.max(report.cursor_end);
        resumed = Some(report);
    }
    let fresh = mine_parallel(&space, start, end.max(start), args.jobs, caps)?;
    let report = match resumed {
        Some(prev) => merge_reports(&prev, &fresh)?,
        None => fresh,
    };
    println!("space {}", space.descriptor());
    println!(
        "cursors [{}, {}) of {total}; {} mechanisms, {} choice rules, {} pairs tested; {} ms",
        report.cursor_start,
        report.cursor_end,
        report.mechanisms_tested,
        report.scfs_tested,
        report.pairs_tested,
        report.wall_ms,
    );
    if report.unresolved > 0 {
        println!("unresolved pairs: {}", report.unresolved);
    }
    for c in &report.counterexamples {
        let choices: Vec<&str> =
            c.choices.iter().map(|&z| space.outcomes.labels()[z].as_str()).collect();
        println!("counterexample at cursor {}: f = [{}]", c.cursor, choices.join(","));
        for profile in c.mechanism.profiles() {
            let cell: Vec<&str> = profile
                .iter()
                .enumerate()
                .map(|(i, &s)| c.mechanism.strategy_labels(i)[s].as_str())
                .collect();
            println!(
                "  g({}) = {}",
                cell.join(","),
                c.mechanism.outcome_lottery(&profile).describe(&space.outcomes)
            );
        }
    }
    println!(
        "{} counterexamples, {} unresolved",
        report.counterexamples.len(),
        report.unresolved
    );
    write_out(out, &to_pretty(&search_report_to_value(&report)))?;
    Ok(if report.counterexamples.is_empty() { 0 } else { 5 })
}
