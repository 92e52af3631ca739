use std::collections::BTreeMap;
use std::fmt::Write;

use super::ts::{Dfa, TransitionSystem};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering of a transition system. Nodes are emitted in BFS order
/// from the initial state and named by that order; `attrs` adds per-state
/// attributes. Parallel edges are merged into one edge with all letters.
pub fn ts_to_dot(ts: &TransitionSystem, name: &str, attrs: impl Fn(usize) -> String) -> String {
    let order = ts.bfs_order();
    let mut position = vec![usize::MAX; ts.num_states()];
    for (i, &q) in order.iter().enumerate() {
        position[q] = i;
    }
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  __start [shape=point];").unwrap();
    for (i, &q) in order.iter().enumerate() {
        let extra = attrs(q);
        let sep = if extra.is_empty() { "" } else { ", " };
        writeln!(out, "  n{i} [label=\"{}\"{sep}{extra}];", escape(ts.label(q))).unwrap();
    }
    writeln!(out, "  __start -> n0;").unwrap();
    for (i, &q) in order.iter().enumerate() {
        let mut edges: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (letter, &t) in ts.successors(q).iter().enumerate() {
            edges.entry(position[t]).or_default().push(ts.alphabet().letter_name(letter));
        }
        for (j, letters) in edges {
            writeln!(out, "  n{i} -> n{j} [label=\"{}\"];", escape(&letters.join(" "))).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// DFA rendering: residual labels, final states double-circled.
pub fn dfa_to_dot(d: &Dfa, name: &str) -> String {
    ts_to_dot(&d.ts, name, |q| {
        if d.finals.contains(q) {
            "shape=doublecircle".to_string()
        } else {
            "shape=circle".to_string()
        }
    })
}
