use std::path::Path;

use domlab_core::verify::Notion;
use domlab_core::{CoreError, OutcomeSpace};

pub fn read_file(path: &Path) -> Result<String, CoreError> {
    std::fs::read_to_string(path).map_err(|e| CoreError::Io(format!("{}: {e}", path.display())))
}

pub fn write_out(out: Option<&Path>, text: &str) -> Result<(), CoreError> {
    if let Some(path) = out {
        std::fs::write(path, text)
            .map_err(|e| CoreError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Outcome flag value: either a comma-separated label list or a bare count
/// for the alphabetic space.
pub fn parse_outcomes(spec: Option<&str>, default_n: usize) -> Result<OutcomeSpace, CoreError> {
    let Some(s) = spec else {
        return Ok(OutcomeSpace::alphabetic(default_n));
    };
    let s = s.trim();
    if let Ok(n) = s.parse::<usize>() {
        if !(2..=26).contains(&n) {
            return Err(CoreError::Invalid(format!("outcome count {n} not in 2..=26")));
        }
        return Ok(OutcomeSpace::alphabetic(n));
    }
    OutcomeSpace::new(s.split(',').map(|p| p.trim().to_string()).collect())
}

pub fn parse_counts(s: &str) -> Result<Vec<usize>, CoreError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| CoreError::Invalid(format!("bad strategy count {:?}", p.trim())))
        })
        .collect()
}

pub fn parse_notion(s: &str) -> Result<Notion, CoreError> {
    match s.to_ascii_lowercase().as_str() {
        "ud" => Ok(Notion::Ud),
        "udinf" => Ok(Notion::Udinf),
        _ => Err(CoreError::Invalid(format!("unknown notion {s:?}; use ud or udinf"))),
    }
}
