use std::collections::BTreeSet;

use super::formula::*;
use crate::error::{Error, Result};

/// One propositional interpretation: the atoms that hold at a position.
pub type Letter = BTreeSet<String>;

pub fn letter<I, S>(atoms: I) -> Letter
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    atoms.into_iter().map(Into::into).collect()
}

/// Parses a trace from its JSON form, e.g. `[["g"],["g","c"]]`.
pub fn parse_trace(json: &str) -> Result<Vec<Letter>> {
    let raw: Vec<Vec<String>> = serde_json::from_str(json)?;
    Ok(raw.into_iter().map(letter).collect())
}

/// Direct finite-trace semantics: `trace, 0 |= f`.
pub fn evaluate(trace: &[Letter], f: &Formula) -> Result<bool> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(holds(trace, 0, f))
}

fn holds(trace: &[Letter], i: usize, f: &Formula) -> bool {
    let last = trace.len() - 1;
    match f {
        True => true,
        False => false,
        Atom(p) => trace[i].contains(&**p),
        Not(g) => !holds(trace, i, g),
        And(g, h) => holds(trace, i, g) && holds(trace, i, h),
        Or(g, h) => holds(trace, i, g) || holds(trace, i, h),
        Implies(g, h) => !holds(trace, i, g) || holds(trace, i, h),
        Next(g) => i < last && holds(trace, i + 1, g),
        WeakNext(g) => i == last || holds(trace, i + 1, g),
        Until(g, h) => {
            for j in i..=last {
                if holds(trace, j, h) {
                    return true;
                }
                if !holds(trace, j, g) {
                    return false;
                }
            }
            false
        }
        Release(g, h) => {
            // Dual of Until: h holds up to and including the first position
            // where g holds, or everywhere.
            for j in i..=last {
                if !holds(trace, j, h) {
                    return false;
                }
                if holds(trace, j, g) {
                    return true;
                }
            }
            true
        }
        Eventually(g) => (i..=last).any(|j| holds(trace, j, g)),
        Always(g) => (i..=last).all(|j| holds(trace, j, g)),
    }
}
