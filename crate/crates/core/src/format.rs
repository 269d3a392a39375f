//! Canonical file formats. Everything is JSON-compatible structured text with
//! rationals rendered as "p/q" strings; serialization sorts object keys, so a
//! parse/serialize pass is a canonicalization and a fixed point thereafter.

use serde_json::{json, Map, Value};

use crate::constructions::{CheckStatus, RepAudit, StateAudit, StepFail};
use crate::domains::{parse_state, render_state, DomainKind, DomainSpec, ProblemOpts};
use crate::types::{
    rat_from_str, rat_to_string, AgentSet, CardinalState, Caps, CoreError, DeletionTrace, Lottery,
    Mechanism, OmegaSpec, OutcomeSpace, Problem, Rat, Restriction, Witness,
};
use crate::verify::{StateOutcome, VerificationReport};

fn json_err(e: &serde_json::Error) -> CoreError {
    CoreError::parse(e.line(), e.column(), e.to_string())
}

fn obj_get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CoreError> {
    v.get(key)
        .ok_or_else(|| CoreError::Invalid(format!("missing field {key:?}")))
}

fn as_str_list(v: &Value, what: &str) -> Result<Vec<String>, CoreError> {
    let arr = v
        .as_array()
        .ok_or_else(|| CoreError::Invalid(format!("{what} must be an array of strings")))?;
    arr.iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| CoreError::Invalid(format!("{what} must be an array of strings")))
        })
        .collect()
}

fn as_obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, CoreError> {
    v.as_object().ok_or_else(|| CoreError::Invalid(format!("{what} must be an object")))
}

/// Pretty JSON with a trailing newline; the only emission path, so output is
/// byte-stable for equal values.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value trees always serialize");
    s.push('\n');
    s
}

pub fn lottery_to_value(space: &OutcomeSpace, y: &Lottery) -> Value {
    let mut map = Map::new();
    for z in y.support() {
        map.insert(space.label(z).to_string(), Value::String(rat_to_string(&y.mass()[z])));
    }
    Value::Object(map)
}

pub fn lottery_from_value(space: &OutcomeSpace, v: &Value) -> Result<Lottery, CoreError> {
    let map = as_obj(v, "lottery")?;
    let mut mass = vec![Rat::from_integer(0.into()); space.len()];
    for (label, raw) in map {
        let z = space.index_of(label)?;
        let s = raw
            .as_str()
            .ok_or_else(|| CoreError::Invalid("lottery masses must be \"p/q\" strings".into()))?;
        mass[z] = rat_from_str(s)?;
    }
    Lottery::from_masses(mass)
}

fn profile_key(m: &Mechanism, profile: &[usize]) -> String {
    profile
        .iter()
        .enumerate()
        .map(|(i, &s)| m.strategy_labels(i)[s].as_str())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn mechanism_to_value(m: &Mechanism) -> Value {
    let strategies: Vec<Value> = (0..m.num_agents())
        .map(|i| Value::Array(m.strategy_labels(i).iter().map(|s| json!(s)).collect()))
        .collect();
    let mut cells = Map::new();
    for profile in m.profiles() {
        cells.insert(
            profile_key(m, &profile),
            lottery_to_value(m.outcomes(), m.outcome_lottery(&profile)),
        );
    }
    json!({
        "agents": m.agents().names(),
        "outcomes": m.outcomes().labels(),
        "strategies": strategies,
        "cells": cells,
    })
}

pub fn mechanism_from_value(v: &Value) -> Result<Mechanism, CoreError> {
    let agents = AgentSet::new(as_str_list(obj_get(v, "agents")?, "agents")?)?;
    let outcomes = OutcomeSpace::new(as_str_list(obj_get(v, "outcomes")?, "outcomes")?)?;
    let strat_value = obj_get(v, "strategies")?
        .as_array()
        .ok_or_else(|| CoreError::Invalid("strategies must be an array of arrays".into()))?;
    let mut strategies = Vec::with_capacity(strat_value.len());
    for s in strat_value {
        strategies.push(as_str_list(s, "strategy list")?);
    }
    let cells_obj = as_obj(obj_get(v, "cells")?, "cells")?;
    // Build through a probe mechanism to get the canonical profile order, then
    // fill cells for real. The probe reuses the first outcome everywhere.
    let probe_cells = vec![
        Lottery::degenerate(&outcomes, 0);
        strategies.iter().map(Vec::len).product()
    ];
    let probe = Mechanism::new(agents.clone(), outcomes.clone(), strategies.clone(), probe_cells)?;
    let mut cells = Vec::with_capacity(cells_obj.len());
    let mut seen = 0usize;
    for profile in probe.profiles() {
        let key = profile_key(&probe, &profile);
        let cell = cells_obj
            .get(&key)
            .ok_or_else(|| CoreError::Invalid(format!("missing cell {key:?}")))?;
        cells.push(lottery_from_value(&outcomes, cell)?);
        seen += 1;
    }
    if cells_obj.len() != seen {
        return Err(CoreError::Invalid(format!(
            "{} cells given, {} profiles exist",
            cells_obj.len(),
            seen
        )));
    }
    Mechanism::new(agents, outcomes, strategies, cells)
}

pub fn write_mechanism(m: &Mechanism) -> String {
    to_pretty(&mechanism_to_value(m))
}

pub fn parse_mechanism(text: &str) -> Result<Mechanism, CoreError> {
    let v: Value = serde_json::from_str(text).map_err(|e| json_err(&e))?;
    mechanism_from_value(&v)
}

fn kind_from_name(name: &str) -> Result<DomainKind, CoreError> {
    match name {
        "strict-all" => Ok(DomainKind::StrictAll),
        "unanimity-strict" => Ok(DomainKind::UnanimityStrict),
        "custom" => Ok(DomainKind::Custom),
        other => Err(CoreError::Invalid(format!("unknown domain kind {other:?}"))),
    }
}

pub fn cardinal_to_value(u: &CardinalState) -> Value {
    Value::Array(
        u.utils()
            .iter()
            .map(|row| Value::Array(row.iter().map(|x| json!(rat_to_string(x))).collect()))
            .collect(),
    )
}

pub fn cardinal_from_value(v: &Value) -> Result<CardinalState, CoreError> {
    let rows = v
        .as_array()
        .ok_or_else(|| CoreError::Invalid("cardinal state must be an array of arrays".into()))?;
    let mut utils = Vec::with_capacity(rows.len());
    for row in rows {
        let mut out = Vec::new();
        for x in as_str_list(row, "utility row")? {
            out.push(rat_from_str(&x)?);
        }
        utils.push(out);
    }
    CardinalState::new(utils)
}

/// Serializes with the domain flattened to `custom` + the full state list, so
/// the output is self-contained and the round-trip is exact.
pub fn problem_to_value(p: &Problem) -> Value {
    let extra: Vec<Value> = p
        .theta()
        .iter()
        .map(|s| json!(render_state(s, &p.agents, &p.outcomes)))
        .collect();
    let mut scf = Map::new();
    for (idx, state) in p.theta().iter().enumerate() {
        scf.insert(
            render_state(state, &p.agents, &p.outcomes),
            json!(p.outcomes.label(p.scf.choice(idx))),
        );
    }
    let omega = match &p.omega {
        OmegaSpec::All => json!("all"),
        OmegaSpec::Explicit(lists) => {
            let per_state: Vec<Value> = lists
                .iter()
                .map(|reps| Value::Array(reps.iter().map(cardinal_to_value).collect()))
                .collect();
            json!({ "explicit": per_state })
        }
    };
    json!({
        "agents": p.agents.names(),
        "outcomes": p.outcomes.labels(),
        "domain": { "kind": "custom", "extra": extra },
        "scf": scf,
        "omega": omega,
    })
}

pub fn problem_from_value(v: &Value, caps: &Caps) -> Result<Problem, CoreError> {
    let agents = AgentSet::new(as_str_list(obj_get(v, "agents")?, "agents")?)?;
    let outcomes = OutcomeSpace::new(as_str_list(obj_get(v, "outcomes")?, "outcomes")?)?;
    let domain_v = obj_get(v, "domain")?;
    let kind = kind_from_name(
        obj_get(domain_v, "kind")?
            .as_str()
            .ok_or_else(|| CoreError::Invalid("domain kind must be a string".into()))?,
    )?;
    let mut extra = Vec::new();
    if let Some(list) = domain_v.get("extra") {
        for (n, text) in as_str_list(list, "extra states")?.iter().enumerate() {
            extra.push(parse_state(text, &agents, &outcomes, n + 1)?);
        }
    }
    let scf_obj = as_obj(obj_get(v, "scf")?, "scf")?;
    let mut f_table = Vec::with_capacity(scf_obj.len());
    for (n, (state_text, label)) in scf_obj.iter().enumerate() {
        let state = parse_state(state_text, &agents, &outcomes, n + 1)?;
        let z = outcomes.index_of(
            label
                .as_str()
                .ok_or_else(|| CoreError::Invalid("scf values must be outcome labels".into()))?,
        )?;
        f_table.push((state, z));
    }
    let omega_v = obj_get(v, "omega")?;
    let omega = if omega_v.as_str() == Some("all") {
        OmegaSpec::All
    } else {
        let lists = obj_get(omega_v, "explicit")?
            .as_array()
            .ok_or_else(|| CoreError::Invalid("explicit omega must be an array".into()))?;
        let mut per_state = Vec::with_capacity(lists.len());
        for reps in lists {
            let reps = reps
                .as_array()
                .ok_or_else(|| CoreError::Invalid("omega entries must be arrays".into()))?;
            per_state.push(reps.iter().map(cardinal_from_value).collect::<Result<Vec<_>, _>>()?);
        }
        OmegaSpec::Explicit(per_state)
    };
    let spec = DomainSpec { kind, extra };
    let opts = ProblemOpts { omega, ..ProblemOpts::default() };
    let problem = crate::domains::build_problem(&spec, &agents, &outcomes, &f_table, &opts, caps)?;
    if let OmegaSpec::Explicit(lists) = &problem.omega {
        if lists.len() != problem.theta().len() {
            return Err(CoreError::WrongArity(
                "explicit omega needs one representation list per domain state".into(),
            ));
        }
        for (state, reps) in problem.theta().iter().zip(lists) {
            if let Some(bad) = reps.iter().find(|u| !u.represents(state)) {
                return Err(CoreError::DomainViolation(format!(
                    "representation {:?} does not represent {}",
                    cardinal_to_value(bad).to_string(),
                    render_state(state, &problem.agents, &problem.outcomes)
                )));
            }
        }
    }
    Ok(problem)
}

pub fn write_problem(p: &Problem) -> String {
    to_pretty(&problem_to_value(p))
}

pub fn parse_problem(text: &str, caps: &Caps) -> Result<Problem, CoreError> {
    let v: Value = serde_json::from_str(text).map_err(|e| json_err(&e))?;
    problem_from_value(&v, caps)
}

fn restriction_labels(m: &Mechanism, r: &Restriction) -> Value {
    Value::Array(
        r.sets()
            .iter()
            .enumerate()
            .map(|(i, set)| {
                Value::Array(set.iter().map(|&s| json!(m.strategy_labels(i)[s])).collect())
            })
            .collect(),
    )
}

pub fn trace_to_value(m: &Mechanism, trace: &DeletionTrace) -> Value {
    let rounds: Vec<Value> = trace
        .rounds
        .iter()
        .map(|round| {
            let deletions: Vec<Value> = round
                .deletions
                .iter()
                .map(|d| {
                    json!({ "agent": d.agent, "deleted": d.deleted, "dominator": d.dominator })
                })
                .collect();
            json!({
                "survivors": restriction_labels(m, &round.survivors),
                "deletions": deletions,
            })
        })
        .collect();
    json!({ "rounds": rounds })
}

pub fn witness_to_value(m: &Mechanism, w: &Witness) -> Value {
    json!({
        "state_index": w.state_index,
        "utilities": cardinal_to_value(&w.cardinal),
        "profile": w.profile,
        "lottery": lottery_to_value(m.outcomes(), &w.lottery),
        "expected": w.expected,
    })
}

fn state_outcome_to_value(m: &Mechanism, s: &StateOutcome) -> Value {
    let mut map = Map::new();
    map.insert("state".into(), json!(s.state_text));
    map.insert("status".into(), json!(s.verdict.status.to_string()));
    map.insert("exact".into(), json!(s.exact));
    map.insert(
        "survivors".into(),
        Value::Array(
            s.survivors
                .iter()
                .map(|set| Value::Array(set.iter().map(|l| json!(l)).collect()))
                .collect(),
        ),
    );
    if let Some(w) = &s.verdict.witness {
        map.insert("witness".into(), witness_to_value(m, w));
    }
    if let Some(t) = &s.trace {
        map.insert("trace".into(), trace_to_value(m, t));
    }
    if !s.reps.is_empty() {
        let reps: Vec<Value> = s
            .reps
            .iter()
            .map(|r| {
                let mut rep = Map::new();
                rep.insert("label".into(), json!(r.label));
                rep.insert("ok".into(), json!(r.ok));
                if let Some(t) = &r.trace {
                    rep.insert("trace".into(), trace_to_value(m, t));
                }
                Value::Object(rep)
            })
            .collect();
        map.insert("representations".into(), Value::Array(reps));
    }
    Value::Object(map)
}

pub fn report_to_value(m: &Mechanism, report: &VerificationReport) -> Value {
    let d = &report.diagnostics;
    let mut diag = Map::new();
    diag.insert(
        "nesting_violations".into(),
        Value::Array(
            d.lemma2
                .iter()
                .map(|v| {
                    json!({
                        "agent": v.agent,
                        "subset_outcome": v.subset_outcome,
                        "superset_outcome": v.superset_outcome,
                    })
                })
                .collect(),
        ),
    );
    if let Some(rows) = &d.lemma1 {
        let mut img = Map::new();
        for (label, ok) in rows {
            img.insert(label.clone(), json!(ok));
        }
        diag.insert("product_image".into(), Value::Object(img));
    }
    if let Some(note) = &d.lemma1_note {
        diag.insert("product_image_note".into(), json!(note));
    }
    if let Some(check) = &d.dictator {
        diag.insert(
            "dictators".into(),
            json!({ "names": check.dictators, "consistent": check.consistent }),
        );
    }
    diag.insert("notes".into(), json!(d.notes));
    json!({
        "notion": report.notion.to_string(),
        "status": report.status.to_string(),
        "states": report.states.iter().map(|s| state_outcome_to_value(m, s)).collect::<Vec<_>>(),
        "diagnostics": diag,
    })
}

fn step_fail_to_value(f: &StepFail) -> Value {
    json!({
        "agent": f.agent,
        "strategy": f.strategy,
        "dominator": f.dominator,
        "column": f.column,
        "old_eu": rat_to_string(&f.old_eu),
        "new_eu": rat_to_string(&f.new_eu),
    })
}

fn check_status_name(s: &CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::Skipped => "skipped",
    }
}

fn rep_audit_to_value(r: &RepAudit) -> Value {
    json!({
        "label": r.label,
        "thresholds": r.thresholds,
        "bump_checked": r.bump_checked,
        "bump_failures": r.bump_failures.iter().map(step_fail_to_value).collect::<Vec<_>>(),
        "threshold_checked": r.threshold_checked,
        "threshold_failures":
            r.threshold_failures.iter().map(step_fail_to_value).collect::<Vec<_>>(),
        "threshold_skipped": r.threshold_skipped,
        "projections": r
            .projections
            .iter()
            .map(|p| json!({
                "agent": p.agent,
                "status": check_status_name(&p.status),
                "detail": p.detail,
            }))
            .collect::<Vec<_>>(),
        "passed": r.passed(),
    })
}

pub fn audit_to_value(audit: &StateAudit) -> Value {
    json!({
        "state": audit.state_text,
        "passed": audit.passed(),
        "representations": audit.reps.iter().map(rep_audit_to_value).collect::<Vec<_>>(),
    })
}

/// Renders deletion traces in the deletion-table layout: one column per
/// ordinal state, one row per round per agent. Traces shorter than the widest
/// one repeat their fixed point.
pub fn render_trace_table(m: &Mechanism, columns: &[(String, DeletionTrace)]) -> String {
    let set_text = |r: &Restriction, i: usize| -> String {
        let labels: Vec<&str> =
            r.set(i).iter().map(|&s| m.strategy_labels(i)[s].as_str()).collect();
        format!("{{{}}}", labels.join(","))
    };
    let depth = columns
        .iter()
        .map(|(_, t)| t.rounds.len().saturating_sub(1))
        .max()
        .unwrap_or(0)
        .max(1);
    let mut row_names = Vec::new();
    for k in 1..=depth {
        for i in 0..m.num_agents() {
            row_names.push(format!("k={} S_{}", k, m.agents().name(i)));
        }
    }
    let mut grid: Vec<Vec<String>> = vec![Vec::new(); row_names.len()];
    for (_, trace) in columns {
        for k in 1..=depth {
            let round = k.min(trace.rounds.len() - 1);
            for i in 0..m.num_agents() {
                grid[(k - 1) * m.num_agents() + i]
                    .push(set_text(&trace.rounds[round].survivors, i));
            }
        }
    }
    let head_width = row_names.iter().map(String::len).max().unwrap_or(0);
    let col_widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(c, (name, _))| grid.iter().map(|row| row[c].len()).max().unwrap_or(0).max(name.len()))
        .collect();
    let mut out = String::new();
    out.push_str(&" ".repeat(head_width));
    for (c, (name, _)) in columns.iter().enumerate() {
        out.push_str(&format!(" | {:w$}", name, w = col_widths[c]));
    }
    out.push('\n');
    for (r, name) in row_names.iter().enumerate() {
        out.push_str(&format!("{:head_width$}", name));
        for c in 0..columns.len() {
            out.push_str(&format!(" | {:w$}", grid[r][c], w = col_widths[c]));
        }
        out.push('\n');
    }
    out
}

/// FNV-1a 64-bit, used to guard embedded golden tables against silent edits.
pub fn checksum64(text: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::hat_mechanism;
    use crate::dominance::robust_udinf;
    use crate::testkit::{coupled_dominator_problem, hat_problem};
    use crate::verify::verify_ud;

    #[test]
    fn mechanism_round_trip_is_canonical() {
        let space = OutcomeSpace::alphabetic(3);
        let m = hat_mechanism(&space, "a", "b", "c").unwrap();
        let text = write_mechanism(&m);
        let back = parse_mechanism(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(write_mechanism(&back), text);
        // The advertised cell shape.
        let v = mechanism_to_value(&m);
        assert_eq!(v["cells"]["a,b"], json!({ "a": "1/4", "b": "3/4" }));
        assert_eq!(v["cells"]["a,a"], json!({ "a": "1/1" }));
    }

    #[test]
    fn mechanism_parse_reports_structural_errors() {
        assert!(matches!(parse_mechanism("{"), Err(CoreError::Parse { .. })));
        let space = OutcomeSpace::alphabetic(2);
        let m = Mechanism::new(
            AgentSet::numbered(2),
            space.clone(),
            vec![vec!["s".into()], vec!["t".into()]],
            vec![Lottery::degenerate(&space, 0)],
        )
        .unwrap();
        let mut v = mechanism_to_value(&m);
        v["cells"] = json!({ "s,t": { "a": "1/2", "b": "1/3" } });
        assert_eq!(mechanism_from_value(&v).unwrap_err(), CoreError::NonUnitMass);
        v["cells"] = json!({ "s,u": { "a": "1/1" } });
        assert!(matches!(mechanism_from_value(&v), Err(CoreError::Invalid(_))));
        v["cells"] = json!({ "s,t": { "a": "1/1" }, "x,y": { "a": "1/1" } });
        assert!(matches!(mechanism_from_value(&v), Err(CoreError::Invalid(_))));
    }

    #[test]
    fn problem_round_trip_all_and_explicit() {
        let (_, p) = hat_problem();
        let text = write_problem(&p);
        let back = parse_problem(&text, &Caps::default()).unwrap();
        assert_eq!(back, p);
        assert_eq!(write_problem(&back), text);

        let lists: Vec<Vec<CardinalState>> = p
            .theta()
            .iter()
            .map(|s| vec![crate::domains::canonical_cardinal(s)])
            .collect();
        let explicit = Problem { omega: OmegaSpec::Explicit(lists), ..p };
        let text = write_problem(&explicit);
        let back = parse_problem(&text, &Caps::default()).unwrap();
        assert_eq!(back, explicit);
    }

    #[test]
    fn problem_parse_rejects_bad_tables() {
        let (_, p) = hat_problem();
        let mut v = problem_to_value(&p);
        v["scf"]["i1:b>a>c;i2:c>a>b"] = json!("zzz");
        assert!(matches!(problem_from_value(&v, &Caps::default()), Err(CoreError::UnknownOutcome(_))));
        let mut v = problem_to_value(&p);
        let removed = v["scf"].as_object_mut().unwrap().remove("i1:b>a>c;i2:c>a>b");
        assert!(removed.is_some());
        assert!(matches!(problem_from_value(&v, &Caps::default()), Err(CoreError::ScfPartial(_))));
        // A representation that contradicts its state: state 0 gets state 1's.
        let mut v = problem_to_value(&p);
        let lists: Vec<Value> = (0..p.theta().len())
            .map(|i| {
                let source = if i == 0 { 1 } else { i };
                json!([cardinal_to_value(&crate::domains::canonical_cardinal(&p.theta()[source]))])
            })
            .collect();
        v["omega"] = json!({ "explicit": lists });
        assert!(matches!(
            problem_from_value(&v, &Caps::default()),
            Err(CoreError::DomainViolation(_))
        ));
    }

    #[test]
    fn strict_all_domain_files_parse() {
        let text = r#"{
            "agents": ["i1", "i2"],
            "outcomes": ["a", "b"],
            "domain": { "kind": "strict-all", "extra": [] },
            "scf": {
                "i1:a>b;i2:a>b": "a",
                "i1:a>b;i2:b>a": "a",
                "i1:b>a;i2:a>b": "a",
                "i1:b>a;i2:b>a": "b"
            },
            "omega": "all"
        }"#;
        let p = parse_problem(text, &Caps::default()).unwrap();
        assert_eq!(p.theta().len(), 4);
        assert_eq!(p.scf.choices(), [0, 0, 0, 1]);
    }

    #[test]
    fn report_serializes_with_witness() {
        let (m, p) = hat_problem();
        let report = verify_ud(&m, &p, &Caps::default()).unwrap();
        let v = report_to_value(&m, &report);
        assert_eq!(v["status"], json!("refuted"));
        assert_eq!(v["notion"], json!("UD"));
        let w = &v["states"][0]["witness"];
        assert_eq!(w["expected"], json!("a"));
        assert!(w["utilities"].is_array());
        assert_eq!(v["diagnostics"]["nesting_violations"], json!([]));

        let (cm, cp) = coupled_dominator_problem();
        let tight = Caps { max_choices: 1, ..Caps::default() };
        let capped = verify_ud(&cm, &cp, &tight).unwrap();
        let cv = report_to_value(&cm, &capped);
        assert_eq!(cv["states"][0]["exact"], json!(false));
    }

    #[test]
    fn trace_table_layout_matches_contract() {
        let (m, p) = hat_problem();
        let columns: Vec<(String, DeletionTrace)> = p
            .theta()
            .iter()
            .map(|s| {
                let (_, t) = robust_udinf(&m, s);
                (render_state(s, &p.agents, &p.outcomes), t)
            })
            .collect();
        let table = render_trace_table(&m, &columns);
        let lines: Vec<&str> = table.lines().collect();
        // Header plus two rounds times two agents.
        assert_eq!(lines.len(), 5);
        assert!(lines[0].contains("i1:b>a>c;i2:c>a>b"));
        assert!(lines[1].starts_with("k=1 S_i1"));
        assert!(lines[1].contains("{a,b}"));
        assert!(lines[2].contains("{a,c}"));
        assert!(lines[3].starts_with("k=2 S_i1"));
        assert!(!lines[3].contains("{a,b}"));
        for line in &lines[1..] {
            assert!(line.contains("{a}"));
        }
    }

    #[test]
    fn audit_serializes() {
        use crate::constructions::{audit_canonical, TruncationHarness, TruncationParams};
        use crate::domains::parse_state;
        let agents = AgentSet::numbered(2);
        let space = OutcomeSpace::alphabetic(3);
        let theta_bar = parse_state("i1:b>a>c;i2:c>a>b", &agents, &space, 1).unwrap();
        let h = TruncationHarness::new(
            &theta_bar,
            0,
            &agents,
            &space,
            TruncationParams::new(3).unwrap(),
        )
        .unwrap();
        let audits = audit_canonical(&h, &[theta_bar]).unwrap();
        let v = audit_to_value(&audits[0]);
        assert_eq!(v["passed"], json!(true));
        assert_eq!(v["representations"][0]["thresholds"], json!([3, 3]));
    }

    #[test]
    fn checksum_is_stable() {
        assert_eq!(checksum64(""), 0xcbf29ce484222325);
        assert_eq!(checksum64("a"), 0xaf63dc4c8601ec8c);
        assert_ne!(checksum64("table"), checksum64("tablf"));
    }
}
