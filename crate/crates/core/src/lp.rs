//! Exact feasibility of systems of weak and strict linear inequalities over
//! the rationals, by Fourier-Motzkin elimination. Since the coefficients are
//! rational, rational feasibility coincides with real feasibility, and the
//! eliminator doubles as a witness constructor by back-substitution.

use crate::types::{CoreError, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// One inequality `coeffs . x >= rhs` (or `> rhs` when `strict`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinRow {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
    pub strict: bool,
}

impl LinRow {
    fn satisfied_by(&self, x: &[Rat]) -> bool {
        let lhs: Rat = self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
        if self.strict {
            lhs > self.rhs
        } else {
            lhs >= self.rhs
        }
    }
}

/// A conjunction of linear inequalities over `num_vars` rational unknowns.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub rows: Vec<LinRow>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem { num_vars, rows: Vec::new() }
    }

    pub fn push_geq(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push(LinRow { coeffs, rhs, strict: false });
    }

    pub fn push_gt(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push(LinRow { coeffs, rhs, strict: true });
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        x.len() == self.num_vars && self.rows.iter().all(|r| r.satisfied_by(x))
    }
}

/// Rows kept at one elimination step, expressed over the variables that were
/// still present when the step ran.
struct Step {
    var: usize,
    rows: Vec<LinRow>,
}

struct Eliminated {
    steps: Vec<Step>,
    feasible: bool,
}

/// Scales a row so its first nonzero coefficient has absolute value one, and
/// drops rows that hold identically. Returns None for an identically false row.
fn normalize(row: LinRow) -> Option<Result<LinRow, ()>> {
    match row.coeffs.iter().find(|c| !c.is_zero()) {
        None => {
            let holds = if row.strict { row.rhs.is_negative() } else { !row.rhs.is_positive() };
            if holds {
                None
            } else {
                Some(Err(()))
            }
        }
        Some(pivot) => {
            let scale = pivot.abs();
            let coeffs = row.coeffs.iter().map(|c| c / &scale).collect();
            Some(Ok(LinRow { coeffs, rhs: row.rhs / scale, strict: row.strict }))
        }
    }
}

/// Dedupes rows with equal coefficient vectors, keeping the binding one.
fn compact(rows: Vec<LinRow>) -> Result<Vec<LinRow>, ()> {
    let mut best: BTreeMap<Vec<Rat>, (Rat, bool)> = BTreeMap::new();
    for row in rows {
        match normalize(row) {
            None => continue,
            Some(Err(())) => return Err(()),
            Some(Ok(r)) => {
                match best.get_mut(&r.coeffs) {
                    Some((rhs, strict)) => {
                        if r.rhs > *rhs || (r.rhs == *rhs && r.strict && !*strict) {
                            *rhs = r.rhs;
                            *strict = r.strict;
                        }
                    }
                    None => {
                        best.insert(r.coeffs, (r.rhs, r.strict));
                    }
                }
            }
        }
    }
    Ok(best
        .into_iter()
        .map(|(coeffs, (rhs, strict))| LinRow { coeffs, rhs, strict })
        .collect())
}

fn eliminate(sys: &LinearSystem) -> Eliminated {
    let mut rows = match compact(sys.rows.clone()) {
        Ok(r) => r,
        Err(()) => return Eliminated { steps: Vec::new(), feasible: false },
    };
    let mut remaining: Vec<usize> = (0..sys.num_vars).collect();
    let mut steps = Vec::new();
    while let Some(pos) = pick_variable(&rows, &remaining) {
        let var = remaining.remove(pos);
        let (with_var, without): (Vec<LinRow>, Vec<LinRow>) =
            rows.into_iter().partition(|r| !r.coeffs[var].is_zero());
        let mut next = without;
        for lower in with_var.iter().filter(|r| r.coeffs[var].is_positive()) {
            for upper in with_var.iter().filter(|r| r.coeffs[var].is_negative()) {
                let a = lower.coeffs[var].clone();
                let b = -upper.coeffs[var].clone();
                // b * lower + a * upper cancels `var`.
                let coeffs: Vec<Rat> = lower
                    .coeffs
                    .iter()
                    .zip(&upper.coeffs)
                    .map(|(lc, uc)| &b * lc + &a * uc)
                    .collect();
                let rhs = &b * &lower.rhs + &a * &upper.rhs;
                next.push(LinRow { coeffs, rhs, strict: lower.strict || upper.strict });
            }
        }
        steps.push(Step { var, rows: with_var });
        rows = match compact(next) {
            Ok(r) => r,
            Err(()) => return Eliminated { steps, feasible: false },
        };
    }
    // All remaining rows are constant and were validated by compact.
    debug_assert!(rows.is_empty());
    Eliminated { steps, feasible: true }
}

/// Picks the remaining variable whose elimination creates the fewest rows.
fn pick_variable(rows: &[LinRow], remaining: &[usize]) -> Option<usize> {
    if remaining.is_empty() {
        return None;
    }
    let mut best = (usize::MAX, 0usize);
    for (pos, &var) in remaining.iter().enumerate() {
        let pos_count = rows.iter().filter(|r| r.coeffs[var].is_positive()).count();
        let neg_count = rows.iter().filter(|r| r.coeffs[var].is_negative()).count();
        let cost = pos_count * neg_count;
        if cost < best.0 {
            best = (cost, pos);
        }
    }
    Some(best.1)
}

/// Decides whether the system has a rational (equivalently real) solution.
pub fn lp_feasible(sys: &LinearSystem) -> bool {
    eliminate(sys).feasible
}

/// Produces a solution when one exists. The returned point satisfies every
/// row exactly; callers are expected to replay it through `satisfied_by`.
pub fn lp_witness(sys: &LinearSystem) -> Option<Vec<Rat>> {
    let elim = eliminate(sys);
    if !elim.feasible {
        return None;
    }
    let mut x = vec![Rat::zero(); sys.num_vars];
    for step in elim.steps.iter().rev() {
        let mut lower: Option<(Rat, bool)> = None;
        let mut upper: Option<(Rat, bool)> = None;
        for row in &step.rows {
            let c = &row.coeffs[step.var];
            let rest: Rat = row
                .coeffs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != step.var)
                .map(|(j, cj)| cj * &x[j])
                .sum();
            let bound = (&row.rhs - rest) / c;
            if c.is_positive() {
                if lower.as_ref().map_or(true, |(b, s)| bound > *b || (bound == *b && row.strict && !s)) {
                    lower = Some((bound, row.strict));
                }
            } else if upper.as_ref().map_or(true, |(b, s)| bound < *b || (bound == *b && row.strict && !s)) {
                upper = Some((bound, row.strict));
            }
        }
        x[step.var] = match (lower, upper) {
            (None, None) => Rat::zero(),
            (Some((l, _)), None) => l + Rat::one(),
            (None, Some((u, _))) => u - Rat::one(),
            (Some((l, ls)), Some((u, us))) => {
                debug_assert!(l < u || (l == u && !ls && !us), "elimination missed a conflict");
                if l == u {
                    l
                } else {
                    (l + u) / Rat::from_integer(2.into())
                }
            }
        };
    }
    debug_assert!(sys.satisfied_by(&x));
    Some(x)
}

/// Feasibility plus a mandatory witness check, as one call.
pub fn lp_solve(sys: &LinearSystem) -> Result<Option<Vec<Rat>>, CoreError> {
    match lp_witness(sys) {
        Some(x) => {
            if !sys.satisfied_by(&x) {
                return Err(CoreError::Invalid("witness failed replay".into()));
            }
            Ok(Some(x))
        }
        None => Ok(None),
    }
}
