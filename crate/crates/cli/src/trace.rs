use std::path::Path;

use domlab_core::dominance::{robust_udinf, udinf_at};
use domlab_core::domains::{parse_state, render_state};
use domlab_core::format::{parse_mechanism, render_trace_table, to_pretty, trace_to_value};
use domlab_core::types::rat_from_str;
use domlab_core::{CardinalState, CoreError, Mechanism};

use crate::util::{read_file, write_out};

/// "u1,u2,...;v1,v2,..." with one rational list per agent in outcome order.
fn parse_cardinal(spec: &str, m: &Mechanism) -> Result<CardinalState, CoreError> {
    let chunks: Vec<&str> = spec.split(';').collect();
    if chunks.len() != m.num_agents() {
        return Err(CoreError::WrongArity(format!(
            "{} utility lists for {} agents",
            chunks.len(),
            m.num_agents()
        )));
    }
    let mut utils = Vec::with_capacity(chunks.len());
    for chunk in chunks {
        let row = chunk
            .split(',')
            .map(|p| rat_from_str(p.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != m.outcomes().len() {
            return Err(CoreError::WrongArity(format!(
                "{} utilities for {} outcomes",
                row.len(),
                m.outcomes().len()
            )));
        }
        utils.push(row);
    }
    CardinalState::new(utils)
}

pub fn run(
    mechanism: &Path,
    state_text: &str,
    mode: &str,
    out: Option<&Path>,
) -> Result<u8, CoreError> {
    let m = parse_mechanism(&read_file(mechanism)?)?;
    let state = parse_state(state_text, m.agents(), m.outcomes(), 1)?;
    let trace = if mode == "robust" {
        robust_udinf(&m, &state).1
    } else if let Some(spec) = mode.strip_prefix("cardinal:") {
        let u = parse_cardinal(spec, &m)?;
        if !u.represents(&state) {
            return Err(CoreError::DomainViolation(
                "the utilities do not represent the given state".into(),
            ));
        }
        udinf_at(&m, &u).1
    } else {
        return Err(CoreError::Invalid(format!(
            "unknown trace mode {mode:?}; use robust or cardinal:<utilities>"
        )));
    };
    let header = render_state(&state, m.agents(), m.outcomes());
    print!("{}", render_trace_table(&m, &[(header, trace.clone())]));
    let survivors = trace.final_survivors();
    let line: Vec<String> = (0..m.num_agents())
        .map(|i| {
            let labels: Vec<&str> = survivors
                .set(i)
                .iter()
                .map(|&s| m.strategy_labels(i)[s].as_str())
                .collect();
            format!("{}={{{}}}", m.agents().name(i), labels.join(","))
        })
        .collect();
    println!("survivors: {}", line.join("  "));
    write_out(out, &to_pretty(&trace_to_value(&m, &trace)))?;
    Ok(0)
}
