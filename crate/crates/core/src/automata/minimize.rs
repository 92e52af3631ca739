use std::collections::HashMap;

use super::ts::{Dfa, StateSet, TransitionSystem};
use crate::error::Result;

/// Language-preserving minimization by partition refinement (Moore's
/// algorithm) on the reachable part. States of the result are numbered in
/// breadth-first order from the initial state.
pub fn minimize(d: &Dfa) -> Result<Dfa> {
    let ts = &d.ts;
    let width = ts.num_letters();
    let reachable = ts.bfs_order();

    let mut class: HashMap<usize, usize> = reachable
        .iter()
        .map(|&q| (q, usize::from(d.finals.contains(q))))
        .collect();
    let mut num_classes = class.values().copied().max().map_or(0, |m| m + 1);
    loop {
        let mut signatures: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut refined = HashMap::new();
        for &q in &reachable {
            let mut sig = Vec::with_capacity(width + 1);
            sig.push(class[&q]);
            sig.extend(ts.successors(q).iter().map(|t| class[t]));
            let next_id = signatures.len();
            refined.insert(q, *signatures.entry(sig).or_insert(next_id));
        }
        let count = signatures.len();
        class = refined;
        if count == num_classes {
            break;
        }
        num_classes = count;
    }

    // Renumber classes in BFS order of their first representative.
    let mut renumber: HashMap<usize, usize> = HashMap::new();
    let mut representative = Vec::new();
    for &q in &reachable {
        renumber.entry(class[&q]).or_insert_with(|| {
            representative.push(q);
            representative.len() - 1
        });
    }
    let mut delta = Vec::with_capacity(representative.len() * width);
    for &q in &representative {
        delta.extend(ts.successors(q).iter().map(|t| renumber[&class[t]]));
    }
    let labels = representative.iter().map(|&q| ts.label(q).to_string()).collect();
    let finals = StateSet::from_fn(representative.len(), |c| d.finals.contains(representative[c]));
    let min_ts = TransitionSystem::new(ts.alphabet().clone(), renumber[&class[&ts.initial()]], delta, labels)?;
    Dfa::new(min_ts, finals)
}
