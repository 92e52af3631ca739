//! Game arenas: the domain automaton synchronized with an objective DFA,
//! and synchronized pairs of such arenas.

use std::collections::HashMap;
use std::sync::Arc;

use crate::automata::{product_ts, ts_to_dot, Alphabet, Dfa, Product, StateSet, TransitionSystem};
use crate::domain::{DomainDfa, DomainNode, FluentSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Arena {
    pub domain: Arc<DomainDfa>,
    pub ts: TransitionSystem,
    /// `(domain automaton state, objective DFA state)` per arena state.
    pub tags: Vec<(usize, usize)>,
    pub ag_err: StateSet,
    pub env_err: StateSet,
    pub acc: StateSet,
    pub adv: StateSet,
    pub coop: StateSet,
}

/// Objective letter of a domain state: the state projected onto the
/// objective's atoms, as a bitmask.
fn projection(dd: &DomainDfa, atoms: &[String]) -> Result<Vec<usize>> {
    let fluents = dd.domain.fluents();
    let bits = atoms
        .iter()
        .map(|a| fluents.iter().position(|f| f == a).ok_or_else(|| Error::OutOfAlphabet(a.clone())))
        .collect::<Result<Vec<_>>>()?;
    let project = |s: FluentSet| {
        bits.iter()
            .enumerate()
            .filter(|(_, &b)| s.contains(b))
            .fold(0usize, |m, (i, _)| m | 1 << i)
    };
    Ok(dd.domain.reachable_states().iter().map(|&s| project(s)).collect())
}

/// Builds the reachable product. The objective reads the initial domain
/// state before any move, and stops reading once an error sink is entered.
pub fn build_arena(dd: &Arc<DomainDfa>, objective: &Dfa) -> Result<Arena> {
    let Alphabet::PropSymbols(atoms) = objective.ts.alphabet() else {
        return Err(Error::AlphabetMismatch("objective must read propositional letters".into()));
    };
    let letters = projection(dd, atoms)?;
    let obj = &objective.ts;
    let width = dd.ts.num_letters();
    let n_domain = letters.len();

    let start = (0, obj.step(obj.initial(), letters[0]));
    let mut tags = vec![start];
    let mut index = HashMap::from([(start, 0usize)]);
    let mut delta = Vec::new();
    let mut next = 0;
    while next < tags.len() {
        let (s, q) = tags[next];
        for l in 0..width {
            let s2 = dd.ts.step(s, l);
            let q2 = if s < n_domain && s2 < n_domain { obj.step(q, letters[s2]) } else { q };
            let id = *index.entry((s2, q2)).or_insert_with(|| {
                tags.push((s2, q2));
                tags.len() - 1
            });
            delta.push(id);
        }
        next += 1;
    }

    let labels = tags
        .iter()
        .map(|&(s, q)| format!("({}, {})", dd.ts.label(s), obj.label(q)))
        .collect();
    let ts = TransitionSystem::new(dd.ts.alphabet().clone(), 0, delta, labels)?;
    let n = tags.len();
    let ag_err = StateSet::from_fn(n, |i| tags[i].0 == dd.ag_err());
    let env_err = StateSet::from_fn(n, |i| tags[i].0 == dd.env_err());
    let acc = StateSet::from_fn(n, |i| objective.finals.contains(tags[i].1));
    let adv = env_err.union(&acc).difference(&ag_err);
    let coop = acc.difference(&ag_err).difference(&env_err);
    Ok(Arena {
        domain: Arc::clone(dd),
        ts,
        tags,
        ag_err,
        env_err,
        acc,
        adv,
        coop,
    })
}

impl Arena {
    pub fn num_states(&self) -> usize {
        self.ts.num_states()
    }

    pub fn node(&self, q: usize) -> DomainNode {
        self.domain.node(self.tags[q].0)
    }

    pub fn is_error(&self, q: usize) -> bool {
        self.ag_err.contains(q) || self.env_err.contains(q)
    }

    /// DOT with region colouring: `w` green, `c \ w` yellow.
    pub fn to_dot(&self, name: &str, w: &StateSet, c: &StateSet) -> String {
        ts_to_dot(&self.ts, name, |q| region_attrs(w.contains(q), c.contains(q), false))
    }
}

fn region_attrs(win: bool, coop: bool, winpend: bool) -> String {
    let mut attrs = Vec::new();
    if win {
        attrs.push("style=\"filled".to_string() + if winpend { ",dashed\"" } else { "\"" });
        attrs.push("fillcolor=palegreen".into());
    } else if coop {
        attrs.push("style=\"filled".to_string() + if winpend { ",dashed\"" } else { "\"" });
        attrs.push("fillcolor=lightyellow".into());
    } else if winpend {
        attrs.push("style=dashed".into());
    }
    attrs.join(", ")
}

/// Synchronized product of two arenas over the same domain.
#[derive(Debug, Clone)]
pub struct PairArena {
    pub product: Product,
}

pub fn build_pair_arena(a1: &Arena, a2: &Arena) -> Result<PairArena> {
    if !Arc::ptr_eq(&a1.domain, &a2.domain) && a1.domain.domain.fingerprint() != a2.domain.domain.fingerprint() {
        return Err(Error::DomainMismatch);
    }
    Ok(PairArena {
        product: product_ts(&a1.ts, &a2.ts)?,
    })
}

impl PairArena {
    pub fn ts(&self) -> &TransitionSystem {
        &self.product.ts
    }

    pub fn num_states(&self) -> usize {
        self.product.ts.num_states()
    }

    pub fn pair(&self, q: usize) -> (usize, usize) {
        self.product.pairs[q]
    }

    pub fn lift(&self, side: u8, set: &StateSet) -> Result<StateSet> {
        self.product.lift(side, set)
    }

    /// DOT with `w1` green, `c2 \ w1` yellow and `wp` dashed.
    pub fn to_dot(&self, name: &str, w1: &StateSet, c2: &StateSet, wp: &StateSet) -> String {
        ts_to_dot(&self.product.ts, name, |q| {
            let (q1, q2) = self.pair(q);
            region_attrs(w1.contains(q1), c2.contains(q2), wp.contains(q))
        })
    }
}
