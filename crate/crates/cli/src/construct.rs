use std::path::Path;

use domlab_core::constructions::{
    dictatorial_mechanism, hat_mechanism, star_mechanism, truncated_infinite_mechanism,
    StarLabels, TruncationParams,
};
use domlab_core::domains::{crossing_state, parse_state};
use domlab_core::format::write_mechanism;
use domlab_core::{AgentSet, CoreError, Mechanism};

use crate::util::{parse_outcomes, write_out};

fn three_labels(arg: &str) -> Result<(String, String, String), CoreError> {
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    if parts.len() != 3 || parts.iter().any(|p| p.is_empty()) {
        return Err(CoreError::Invalid(format!("expected three labels, got {arg:?}")));
    }
    Ok((parts[0].to_string(), parts[1].to_string(), parts[2].to_string()))
}

pub fn run(
    target: &str,
    outcomes: Option<&str>,
    agents: usize,
    state: Option<&str>,
    choice: &str,
    out: Option<&Path>,
) -> Result<u8, CoreError> {
    let agents = AgentSet::numbered(agents);
    let m: Mechanism = if let Some(arg) = target.strip_prefix("dictatorial:") {
        let space = parse_outcomes(outcomes, 3)?;
        dictatorial_mechanism(&agents, &space, agents.index_of(arg.trim())?)?
    } else if let Some(arg) = target.strip_prefix("hat:") {
        let (a, b, c) = three_labels(arg)?;
        let space = match outcomes {
            Some(spec) => parse_outcomes(Some(spec), 3)?,
            None => domlab_core::OutcomeSpace::new(vec![a.clone(), b.clone(), c.clone()])?,
        };
        hat_mechanism(&space, &a, &b, &c)?
    } else if let Some(arg) = target.strip_prefix("star:") {
        let (a, b, c) = three_labels(arg)?;
        let space = parse_outcomes(outcomes, 4)?;
        let labels = StarLabels::new(&space, &a, &b, &c)?;
        star_mechanism(&space, &labels)?
    } else if let Some(arg) = target.strip_prefix("infinite:") {
        let cap: usize = arg
            .trim()
            .parse()
            .map_err(|_| CoreError::Invalid(format!("bad announcement cap {arg:?}")))?;
        let space = parse_outcomes(outcomes, 3)?;
        let theta_bar = match state {
            Some(text) => parse_state(text, &agents, &space, 1)?,
            None => crossing_state(&agents, &space)?,
        };
        let f_value = space.index_of(choice)?;
        let params = TruncationParams::new(cap)?;
        truncated_infinite_mechanism(&theta_bar, f_value, &agents, &space, &params)?
    } else {
        return Err(CoreError::Invalid(format!(
            "unknown construction {target:?}; use dictatorial:<agent>, hat:<a,b,c>, star:<a,b,c>, or infinite:<cap>"
        )));
    };
    let text = write_mechanism(&m);
    print!("{text}");
    write_out(out, &text)?;
    Ok(0)
}
