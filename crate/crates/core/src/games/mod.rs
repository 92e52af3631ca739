//! Reachability games over move-labelled transition systems, the
//! winning-pending fixpoint, and strategy execution and serialization.

mod reach;
mod transducer;
mod winpend;

use serde::{Deserialize, Serialize};

use crate::automata::{Alphabet, TransitionSystem};

pub use reach::{solve_adv, solve_coop, RegionSolution};
pub use transducer::{extract_transducer, Transducer};
pub use winpend::{solve_winpend, WinPendSolution};

pub const STRATEGY_FORMAT_VERSION: u32 = 1;

/// Serialized positional strategy. States are listed by id, which is the
/// breadth-first construction order of the arena.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDocument {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
    pub formulas: Vec<String>,
    pub states: Vec<StrategyEntry>,
    pub initial: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyEntry {
    pub id: usize,
    pub tag: String,
    pub action: Option<String>,
    pub rank: Option<usize>,
    /// Cooperative strategy, present in single-objective documents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coop: Option<CoopEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoopEntry {
    pub action: Option<String>,
    pub rank: Option<usize>,
}

fn action_name(ts: &TransitionSystem, a: Option<usize>) -> Option<String> {
    let Alphabet::Moves { actions, .. } = ts.alphabet() else {
        unreachable!("strategies act on move alphabets")
    };
    a.map(|a| actions[a].clone())
}

/// One entry per state of `ts`.
pub fn strategy_entries(ts: &TransitionSystem, strategy: &[Option<usize>], rank: &[Option<usize>]) -> Vec<StrategyEntry> {
    (0..ts.num_states())
        .map(|q| StrategyEntry {
            id: q,
            tag: ts.label(q).to_string(),
            action: action_name(ts, strategy[q]),
            rank: rank[q],
            coop: None,
        })
        .collect()
}

/// Attaches a cooperative strategy to existing entries.
pub fn with_coop(mut entries: Vec<StrategyEntry>, ts: &TransitionSystem, coop: &RegionSolution) -> Vec<StrategyEntry> {
    for e in &mut entries {
        e.coop = Some(CoopEntry {
            action: action_name(ts, coop.strategy[e.id]),
            rank: coop.rank[e.id],
        });
    }
    entries
}
