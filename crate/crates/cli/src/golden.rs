//! Embedded reference tables. Each one was transcribed once and is guarded by
//! a checksum so silent edits fail loudly instead of shifting the baseline.

use domlab_core::format::checksum64;
use domlab_core::CoreError;

pub const LEMMA5_TABLE: &str = include_str!("assets/lemma5_table.txt");
pub const LEMMA5_SUM: u64 = 0x4a1c9d12b2c36002;

/// Superset bounds on the deletion rounds of the star mechanism, one column
/// per state group. Tokens list outcome labels, with `z` standing for the
/// state's own top outcome outside {a,b,c}, `*` for no constraint, and the
/// empty token inheriting the bound one row above.
pub const T4_CLAIMS: [[&str; 7]; 4] = [
    ["ab", "a", "*", "*", "c", "*", "az"],
    ["ac", "*", "a", "b", "*", "az", "*"],
    ["a", "a", "a", "b", "c", "az", "az"],
    ["", "", "", "", "", "z", "z"],
];
pub const T4_ROWS: [&str; 4] = ["k=1 i1", "k=1 i2", "k=2 both", "k>=3 both"];
pub const T4_GROUPS: [&str; 7] =
    ["crossing", "a>b>c", "a>c>b", "b top", "c top", "z>b>c", "z>c>b"];
pub const T4_SUM: u64 = 0x0e5c602b9ce34561;

fn claim_cell(token: &str) -> String {
    match token {
        "" => String::new(),
        "*" => "⊆ Z".to_string(),
        _ => {
            let labels: Vec<String> = token.chars().map(|c| c.to_string()).collect();
            format!("⊆ {{{}}}", labels.join(","))
        }
    }
}

/// Expands a claim token into allowed outcome indices. `own_top` substitutes
/// for `z`; blank tokens must be resolved to the inherited row by the caller.
pub fn resolve_claim(token: &str, own_top: usize, num_outcomes: usize) -> Vec<usize> {
    if token == "*" {
        return (0..num_outcomes).collect();
    }
    token
        .chars()
        .map(|c| match c {
            'a' => 0,
            'b' => 1,
            'c' => 2,
            _ => own_top,
        })
        .collect()
}

pub fn render_theorem4() -> String {
    let head_width = T4_ROWS.iter().map(|r| r.len()).max().unwrap();
    let col_widths: Vec<usize> = (0..7)
        .map(|c| {
            (0..4)
                .map(|r| claim_cell(T4_CLAIMS[r][c]).chars().count())
                .max()
                .unwrap()
                .max(T4_GROUPS[c].len())
        })
        .collect();
    let mut out = String::new();
    out.push_str(&" ".repeat(head_width));
    for (c, name) in T4_GROUPS.iter().enumerate() {
        out.push_str(&format!(" | {:w$}", name, w = col_widths[c]));
    }
    out.push('\n');
    for (r, name) in T4_ROWS.iter().enumerate() {
        out.push_str(&format!("{:head_width$}", name));
        for c in 0..7 {
            let cell = claim_cell(T4_CLAIMS[r][c]);
            let pad = col_widths[c].saturating_sub(cell.chars().count());
            out.push_str(&format!(" | {}{}", cell, " ".repeat(pad)));
        }
        out.push('\n');
    }
    out.push_str("z is the state's own top outcome outside {a,b,c}; blank cells inherit\n");
    out.push_str("the bound one row above.\n");
    out
}

pub fn guard(name: &str, text: &str, sum: u64) -> Result<(), CoreError> {
    if checksum64(text) != sum {
        return Err(CoreError::Invalid(format!("embedded {name} table fails its checksum")));
    }
    Ok(())
}
