use std::path::Path;

use domlab_core::format::{parse_mechanism, parse_problem, report_to_value, to_pretty};
use domlab_core::verify::{render_report, verify_ud, verify_udinf, Notion};
use domlab_core::{Caps, CoreError, OmegaSpec, VerdictStatus};

use crate::util::{parse_notion, read_file, write_out};

pub fn run(
    mechanism: &Path,
    problem: &Path,
    notion: &str,
    mode: &str,
    out: Option<&Path>,
    caps: &Caps,
) -> Result<u8, CoreError> {
    let m = parse_mechanism(&read_file(mechanism)?)?;
    let mut p = parse_problem(&read_file(problem)?, caps)?;
    match mode {
        "file" => {}
        "all" => p.omega = OmegaSpec::All,
        "explicit" => {
            if !matches!(p.omega, OmegaSpec::Explicit(_)) {
                return Err(CoreError::DomainViolation(
                    "explicit mode needs a problem file with listed representations".into(),
                ));
            }
        }
        _ => {
            return Err(CoreError::Invalid(format!(
                "unknown mode {mode:?}; use file, all, or explicit"
            )))
        }
    }
    let report = match parse_notion(notion)? {
        Notion::Ud => verify_ud(&m, &p, caps)?,
        Notion::Udinf => verify_udinf(&m, &p)?,
    };
    print!("{}", render_report(&m, &report));
    write_out(out, &to_pretty(&report_to_value(&m, &report)))?;
    Ok(match report.status {
        VerdictStatus::Verified => 0,
        VerdictStatus::Refuted => 1,
        VerdictStatus::Inconclusive => 4,
    })
}
