use std::collections::HashMap;

use crate::automata::{Alphabet, StateSet, TransitionSystem};

/// Region of a reachability game with a positional strategy and the level
/// at which each state entered the fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionSolution {
    pub region: StateSet,
    /// Action index per state; `None` on target states and outside the region.
    pub strategy: Vec<Option<usize>>,
    pub rank: Vec<Option<usize>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Adversarial,
    Cooperative,
}

/// Attractor for the agent: `X = target ∪ {q | ∃a ∀r. δ(q,a,r) ∈ X}`.
pub fn solve_adv(ts: &TransitionSystem, target: &StateSet) -> RegionSolution {
    solve(ts, target, Mode::Adversarial)
}

/// Cooperative reachability: `X = target ∪ {q | ∃a ∃r. δ(q,a,r) ∈ X}`.
pub fn solve_coop(ts: &TransitionSystem, target: &StateSet) -> RegionSolution {
    solve(ts, target, Mode::Cooperative)
}

pub(crate) fn move_dims(ts: &TransitionSystem) -> (usize, usize) {
    ts.alphabet()
        .move_dims()
        .expect("games are played over agent/environment moves")
}

/// Positions of action ids in lexicographic name order.
pub(crate) fn action_name_order(ts: &TransitionSystem) -> Vec<usize> {
    let Alphabet::Moves { actions, .. } = ts.alphabet() else {
        unreachable!("games are played over agent/environment moves")
    };
    let mut ids: Vec<usize> = (0..actions.len()).collect();
    ids.sort_by(|&a, &b| actions[a].cmp(&actions[b]));
    let mut order = vec![0; actions.len()];
    for (pos, id) in ids.into_iter().enumerate() {
        order[id] = pos;
    }
    order
}

/// Predecessor lists: `(source, letter)` for every edge into a state.
pub(crate) fn predecessors(ts: &TransitionSystem) -> Vec<Vec<(usize, usize)>> {
    let mut pred = vec![Vec::new(); ts.num_states()];
    for q in 0..ts.num_states() {
        for (l, &t) in ts.successors(q).iter().enumerate() {
            pred[t].push((q, l));
        }
    }
    pred
}

fn solve(ts: &TransitionSystem, target: &StateSet, mode: Mode) -> RegionSolution {
    let n = ts.num_states();
    let (na, nr) = move_dims(ts);
    let order = action_name_order(ts);
    let pred = predecessors(ts);
    let needed = match mode {
        Mode::Adversarial => nr,
        Mode::Cooperative => 1,
    };

    let mut region = target.clone();
    let mut rank: Vec<Option<usize>> = (0..n).map(|q| target.contains(q).then_some(0)).collect();
    let mut strategy = vec![None; n];
    let mut count = vec![0usize; n * na];
    let mut layer: Vec<usize> = target.iter().collect();
    let mut level = 0;
    while !layer.is_empty() {
        level += 1;
        // Best completing action per candidate for this level.
        let mut chosen: HashMap<usize, usize> = HashMap::new();
        for &q in &layer {
            for &(p, l) in &pred[q] {
                let a = l / nr;
                count[p * na + a] += 1;
                if count[p * na + a] == needed && !region.contains(p) {
                    let slot = chosen.entry(p).or_insert(a);
                    if order[a] < order[*slot] {
                        *slot = a;
                    }
                }
            }
        }
        let mut best: Vec<(usize, usize)> = chosen.into_iter().collect();
        best.sort_unstable();
        layer.clear();
        for (p, a) in best {
            region.insert(p);
            rank[p] = Some(level);
            strategy[p] = Some(a);
            layer.push(p);
        }
    }
    RegionSolution { region, strategy, rank }
}
