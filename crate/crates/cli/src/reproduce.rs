use std::path::Path;
use std::time::Instant;

use domlab_core::constructions::{CheckStatus, StateAudit, TruncationHarness, TruncationParams};
use domlab_core::dominance::robust_udinf;
use domlab_core::domains::{
    canonical_cardinal, crossing_state, render_state, sample_cardinal, unanimity_strict_states,
};
use domlab_core::format::{audit_to_value, render_trace_table, to_pretty};
use domlab_core::testkit::{hat_problem, star_problem};
use domlab_core::types::rat_to_string;
use domlab_core::verify::verify_udinf;
use domlab_core::{
    derive_seed, AgentSet, Caps, CoreError, OrdinalState, OutcomeSpace, VerdictStatus,
};

use crate::golden;
use crate::util::write_out;

pub fn run(
    target: &str,
    samples: u32,
    seed: u64,
    out: Option<&Path>,
    caps: &Caps,
) -> Result<u8, CoreError> {
    if target == "lemma5" {
        return lemma5(out);
    }
    if let Some(arg) = target.strip_prefix("theorem4:") {
        let z: usize = arg
            .parse()
            .map_err(|_| CoreError::Invalid(format!("bad outcome count {arg:?}")))?;
        return theorem4(z, out, caps);
    }
    if let Some(arg) = target.strip_prefix("theorem5:") {
        let n: usize = arg
            .parse()
            .map_err(|_| CoreError::Invalid(format!("bad announcement cap {arg:?}")))?;
        return theorem5(n, samples, seed, out, caps);
    }
    Err(CoreError::Invalid(format!(
        "unknown target {target:?}; use lemma5, theorem4:<outcomes>, or theorem5:<cap>"
    )))
}

fn lemma5(out: Option<&Path>) -> Result<u8, CoreError> {
    golden::guard("lemma5", golden::LEMMA5_TABLE, golden::LEMMA5_SUM)?;
    let (m, problem) = hat_problem();
    let columns: Vec<_> = problem
        .theta()
        .iter()
        .map(|s| (render_state(s, &problem.agents, &problem.outcomes), robust_udinf(&m, s).1))
        .collect();
    let table = render_trace_table(&m, &columns);
    print!("{table}");
    if table == golden::LEMMA5_TABLE {
        println!("PASS");
        write_out(out, &table)?;
        return Ok(0);
    }
    println!("FAIL: regenerated table differs from the embedded one");
    let want: Vec<&str> = golden::LEMMA5_TABLE.lines().collect();
    let got: Vec<&str> = table.lines().collect();
    for k in 0..want.len().max(got.len()) {
        let w = want.get(k).copied().unwrap_or("<missing>");
        let g = got.get(k).copied().unwrap_or("<missing>");
        if w != g {
            println!("  line {}: expected {w:?}", k + 1);
            println!("  line {}:      got {g:?}", k + 1);
        }
    }
    write_out(out, &table)?;
    Ok(1)
}

/// Which column of the claims table a state falls in. Index 0 is reserved for
/// the crossing state; the rest split on the shared top and on whether the
/// second label beats the third.
fn theorem4_group(state: &OrdinalState, idx: usize) -> Result<usize, CoreError> {
    if idx == 0 {
        return Ok(0);
    }
    let p = state.pref(0);
    let b_over_c = p.rank(1) < p.rank(2);
    Ok(match p.top()? {
        0 if b_over_c => 1,
        0 => 2,
        1 => 3,
        2 => 4,
        _ if b_over_c => 5,
        _ => 6,
    })
}

fn theorem4(z: usize, out: Option<&Path>, caps: &Caps) -> Result<u8, CoreError> {
    let table = golden::render_theorem4();
    golden::guard("theorem4", &table, golden::T4_SUM)?;
    if z > caps.max_outcomes {
        return Err(CoreError::SizeLimit(format!(
            "{z} outcomes exceeds the cap {}",
            caps.max_outcomes
        )));
    }
    let started = Instant::now();
    let (m, problem) = star_problem(z)?;
    let states = problem.theta();
    let mut group_counts = [0usize; 7];
    let mut violations: Vec<String> = Vec::new();
    for (idx, state) in states.iter().enumerate() {
        let group = theorem4_group(state, idx)?;
        group_counts[group] += 1;
        let name = render_state(state, &problem.agents, &problem.outcomes);
        let own_top = if group == 0 { 0 } else { state.pref(0).top()? };
        let (_, trace) = robust_udinf(&m, state);
        let survivors = |k: usize| &trace.rounds[k.min(trace.rounds.len() - 1)].survivors;
        for agent in 0..2 {
            for k in 1..=3usize {
                let row = match k {
                    1 => agent,
                    2 => 2,
                    _ => 3,
                };
                let mut token = golden::T4_CLAIMS[row][group];
                if token.is_empty() {
                    token = golden::T4_CLAIMS[row - 1][group];
                }
                let allowed = golden::resolve_claim(token, own_top, z);
                for &s in survivors(k).set(agent) {
                    if !allowed.contains(&s) {
                        violations.push(format!(
                            "{name}: round {k} keeps {} for {} outside the {token:?} bound",
                            m.strategy_labels(agent)[s],
                            problem.agents.name(agent),
                        ));
                    }
                }
            }
            let want = problem.scf.choice(idx);
            if survivors(3).set(agent) != [want] {
                violations.push(format!(
                    "{name}: round 3 for {} is not exactly {{{}}}",
                    problem.agents.name(agent),
                    problem.outcomes.labels()[want],
                ));
            }
        }
    }
    let report = verify_udinf(&m, &problem)?;
    if report.status != VerdictStatus::Verified {
        violations.push(format!("full verification over all representations: {}", report.status));
    }
    print!("{table}");
    let tally: Vec<String> = golden::T4_GROUPS
        .iter()
        .zip(group_counts)
        .map(|(g, n)| format!("{g}: {n}"))
        .collect();
    println!("state groups at |Z|={z}: {}", tally.join(", "));
    println!(
        "round-3 projections exact on all {} states; verification {}; {} ms",
        states.len(),
        report.status,
        started.elapsed().as_millis()
    );
    write_out(out, &table)?;
    if violations.is_empty() {
        println!("PASS");
        Ok(0)
    } else {
        for v in &violations {
            println!("  {v}");
        }
        println!("FAIL");
        Ok(1)
    }
}

fn status_word(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Skipped => "skipped",
    }
}

fn print_audit(audit: &StateAudit) {
    println!("state {}", audit.state_text);
    for rep in &audit.reps {
        let projections: Vec<String> = rep
            .projections
            .iter()
            .map(|p| format!("{} {}", p.agent, status_word(p.status)))
            .collect();
        let skipped = if rep.threshold_skipped.is_empty() {
            String::new()
        } else {
            format!("; skipped beyond cap: {}", rep.threshold_skipped.join(","))
        };
        println!(
            "  {}: thresholds {:?}; bump steps {} ({} failed); threshold steps {} ({} failed){}; projections {}",
            rep.label,
            rep.thresholds,
            rep.bump_checked,
            rep.bump_failures.len(),
            rep.threshold_checked,
            rep.threshold_failures.len(),
            skipped,
            projections.join(", "),
        );
        for fail in rep.bump_failures.iter().chain(&rep.threshold_failures).take(4) {
            println!(
                "    {} {} is not beaten by {} against {}: {} vs {}",
                fail.agent,
                fail.strategy,
                fail.dominator,
                fail.column,
                rat_to_string(&fail.old_eu),
                rat_to_string(&fail.new_eu),
            );
        }
        for p in &rep.projections {
            if p.status == CheckStatus::Fail {
                println!("    projection {}: {}", p.agent, p.detail);
            }
        }
    }
}

fn theorem5(
    n: usize,
    samples: u32,
    seed: u64,
    out: Option<&Path>,
    caps: &Caps,
) -> Result<u8, CoreError> {
    let agents = AgentSet::numbered(2);
    let space = OutcomeSpace::alphabetic(3);
    let theta_bar = crossing_state(&agents, &space)?;
    let params = TruncationParams::new(n)?;
    let harness = TruncationHarness::new(&theta_bar, 0, &agents, &space, params)?;
    let mut states = vec![theta_bar.clone()];
    states.extend(unanimity_strict_states(&agents, &space, caps)?);
    let mut audits = Vec::new();
    let mut all_pass = true;
    for (idx, state) in states.iter().enumerate() {
        let mut reps = vec![("canonical".to_string(), canonical_cardinal(state))];
        for j in 1..=samples {
            let child = derive_seed(seed, (idx as u64) * 1009 + j as u64);
            reps.push((format!("sample{j}"), sample_cardinal(state, child)));
        }
        let audit = harness.audit_state(state, &reps)?;
        print_audit(&audit);
        all_pass &= audit.passed();
        audits.push(audit);
    }
    println!("{}", if all_pass { "PASS" } else { "FAIL" });
    let value = serde_json::Value::Array(audits.iter().map(audit_to_value).collect());
    write_out(out, &to_pretty(&value))?;
    Ok(if all_pass { 0 } else { 1 })
}
