use std::collections::HashMap;

use super::reach::{action_name_order, move_dims, predecessors};
use crate::arena::PairArena;
use crate::automata::StateSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinPendSolution {
    pub region: StateSet,
    pub rank: Vec<Option<usize>>,
    /// Action per pair state: the progress witness on states that entered
    /// after level 0, otherwise the first component's winning strategy.
    pub strategy: Vec<Option<usize>>,
}

/// Winning-pending fixpoint over a pair arena. All sets are in pair-arena
/// coordinates; `kappa1` is indexed by first-component arena states.
///
/// `WP_0 = adv1 ∩ coop2`, and a state joins at level `i+1` when one action
/// reaches `WP_i` under some reaction and stays in `WP_i ∪ (w1 \ c2)` under
/// all of them.
pub fn solve_winpend(
    pa: &PairArena,
    adv1: &StateSet,
    coop2: &StateSet,
    w1: &StateSet,
    c2: &StateSet,
    kappa1: &[Option<usize>],
) -> WinPendSolution {
    let ts = pa.ts();
    let n = ts.num_states();
    let (na, nr) = move_dims(ts);
    let order = action_name_order(ts);
    let pred = predecessors(ts);
    let exit = w1.difference(c2);

    let mut region = adv1.intersection(coop2);
    let mut rank: Vec<Option<usize>> = (0..n).map(|q| region.contains(q).then_some(0)).collect();
    let mut strategy: Vec<Option<usize>> = (0..n).map(|q| kappa1[pa.pair(q).0]).collect();

    // safe[p,a]: reactions landing in WP ∪ exit; hit[p,a]: reactions landing in WP.
    let mut safe = vec![0usize; n * na];
    let mut hit = vec![0usize; n * na];
    for q in exit.iter() {
        for &(p, l) in &pred[q] {
            safe[p * na + l / nr] += 1;
        }
    }
    let mut layer: Vec<usize> = region.iter().collect();
    let mut level = 0;
    while !layer.is_empty() {
        level += 1;
        let mut chosen: HashMap<usize, usize> = HashMap::new();
        for &q in &layer {
            for &(p, l) in &pred[q] {
                let k = p * na + l / nr;
                safe[k] += 1;
                hit[k] += 1;
            }
        }
        for &q in &layer {
            for &(p, l) in &pred[q] {
                let a = l / nr;
                let k = p * na + a;
                if safe[k] == nr && hit[k] > 0 && !region.contains(p) {
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
    WinPendSolution { region, rank, strategy }
}
