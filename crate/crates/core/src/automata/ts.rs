use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::ltlf::Letter;

/// Input alphabet of a transition system.
///
/// `PropSymbols` letters are indexed by bitmask: bit `i` set means the `i`-th
/// atom holds. `Moves` letters are indexed as `action * |reactions| + reaction`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Alphabet {
    PropSymbols(Vec<String>),
    Moves {
        actions: Vec<String>,
        reactions: Vec<String>,
    },
}

impl Alphabet {
    pub fn len(&self) -> usize {
        match self {
            Alphabet::PropSymbols(atoms) => 1usize << atoms.len(),
            Alphabet::Moves { actions, reactions } => actions.len() * reactions.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Letter index for a propositional interpretation.
    pub fn letter_of(&self, letter: &Letter) -> Result<usize> {
        let Alphabet::PropSymbols(atoms) = self else {
            return Err(Error::AlphabetMismatch("expected a propositional alphabet".into()));
        };
        let mut index = 0usize;
        for name in letter {
            let bit = atoms
                .iter()
                .position(|a| a == name)
                .ok_or_else(|| Error::OutOfAlphabet(name.clone()))?;
            index |= 1 << bit;
        }
        Ok(index)
    }

    pub fn move_letter(&self, action: usize, reaction: usize) -> usize {
        match self {
            Alphabet::Moves { reactions, .. } => action * reactions.len() + reaction,
            Alphabet::PropSymbols(_) => panic!("move_letter on a propositional alphabet"),
        }
    }

    /// `(actions, reactions)` counts for a move alphabet.
    pub fn move_dims(&self) -> Option<(usize, usize)> {
        match self {
            Alphabet::Moves { actions, reactions } => Some((actions.len(), reactions.len())),
            Alphabet::PropSymbols(_) => None,
        }
    }

    pub fn letter_name(&self, letter: usize) -> String {
        match self {
            Alphabet::PropSymbols(atoms) => {
                let held: Vec<&str> = atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| letter >> i & 1 == 1)
                    .map(|(_, a)| a.as_str())
                    .collect();
                format!("{{{}}}", held.join(","))
            }
            Alphabet::Moves { actions, reactions } => {
                let n = reactions.len();
                format!("{}/{}", actions[letter / n], reactions[letter % n])
            }
        }
    }
}

/// A set of states over a fixed universe `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct StateSet {
    bits: Vec<bool>,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet { bits: vec![false; universe] }
    }

    pub fn full(universe: usize) -> Self {
        StateSet { bits: vec![true; universe] }
    }

    pub fn from_states(universe: usize, states: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(universe);
        for s in states {
            set.insert(s);
        }
        set
    }

    pub fn from_fn(universe: usize, f: impl Fn(usize) -> bool) -> Self {
        StateSet { bits: (0..universe).map(f).collect() }
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, s: usize) -> bool {
        !std::mem::replace(&mut self.bits[s], true)
    }

    pub fn contains(&self, s: usize) -> bool {
        self.bits.get(s).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        self.zip(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        self.zip(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> StateSet {
        StateSet { bits: self.bits.iter().map(|b| !b).collect() }
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    fn zip(&self, other: &StateSet, op: impl Fn(bool, bool) -> bool) -> StateSet {
        assert_eq!(self.universe(), other.universe(), "state sets over different universes");
        StateSet {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| op(*a, *b)).collect(),
        }
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Deterministic transition system with a total transition function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    alphabet: Alphabet,
    initial: usize,
    delta: Vec<usize>,
    labels: Vec<String>,
}

impl TransitionSystem {
    /// `delta[q * |alphabet| + letter]` is the successor of `q` on `letter`.
    pub fn new(alphabet: Alphabet, initial: usize, delta: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        let width = alphabet.len();
        let states = labels.len();
        if delta.len() != states * width {
            return Err(Error::AlphabetMismatch(format!(
                "transition table has {} entries, expected {} states x {} letters",
                delta.len(),
                states,
                width
            )));
        }
        if initial >= states || delta.iter().any(|&t| t >= states) {
            return Err(Error::AlphabetMismatch("transition target outside the state set".into()));
        }
        Ok(TransitionSystem {
            alphabet,
            initial,
            delta,
            labels,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn num_letters(&self) -> usize {
        self.alphabet.len()
    }

    pub fn label(&self, q: usize) -> &str {
        &self.labels[q]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn step(&self, q: usize, letter: usize) -> usize {
        self.delta[q * self.alphabet.len() + letter]
    }

    pub fn successors(&self, q: usize) -> &[usize] {
        let w = self.alphabet.len();
        &self.delta[q * w..(q + 1) * w]
    }

    /// Extended transition function over a word.
    pub fn run(&self, from: usize, word: &[usize]) -> Result<usize> {
        word.iter().try_fold(from, |q, &l| {
            if l >= self.num_letters() {
                Err(Error::LetterOutOfRange(l))
            } else {
                Ok(self.step(q, l))
            }
        })
    }

    /// States in breadth-first order from the initial state, successors
    /// visited in letter order.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for &t in self.successors(q) {
                if !std::mem::replace(&mut seen[t], true) {
                    queue.push_back(t);
                }
            }
        }
        order
    }
}

/// A transition system with a set of final states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub ts: TransitionSystem,
    pub finals: StateSet,
}

impl Dfa {
    pub fn new(ts: TransitionSystem, finals: StateSet) -> Result<Self> {
        if finals.universe() != ts.num_states() {
            return Err(Error::AlphabetMismatch("final set over a different state space".into()));
        }
        Ok(Dfa { ts, finals })
    }

    pub fn num_states(&self) -> usize {
        self.ts.num_states()
    }

    pub fn accepts_word(&self, word: &[usize]) -> Result<bool> {
        Ok(self.finals.contains(self.ts.run(self.ts.initial(), word)?))
    }

    /// Acceptance of a trace of propositional interpretations.
    pub fn accepts(&self, trace: &[Letter]) -> Result<bool> {
        let word = trace
            .iter()
            .map(|l| self.ts.alphabet().letter_of(l))
            .collect::<Result<Vec<_>>>()?;
        self.accepts_word(&word)
    }
}

/// Reachable part of the synchronous product of two transition systems.
/// `pairs[q]` records the component states of product state `q`.
#[derive(Debug, Clone)]
pub struct Product {
    pub ts: TransitionSystem,
    pub pairs: Vec<(usize, usize)>,
}

pub fn product_ts(t1: &TransitionSystem, t2: &TransitionSystem) -> Result<Product> {
    if t1.alphabet() != t2.alphabet() {
        return Err(Error::AlphabetMismatch("product operands read different alphabets".into()));
    }
    let width = t1.num_letters();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = vec![(t1.initial(), t2.initial())];
    index.insert(pairs[0], 0);
    let mut delta = Vec::new();
    let mut next = 0;
    while next < pairs.len() {
        let (q1, q2) = pairs[next];
        for l in 0..width {
            let succ = (t1.step(q1, l), t2.step(q2, l));
            let id = *index.entry(succ).or_insert_with(|| {
                pairs.push(succ);
                pairs.len() - 1
            });
            delta.push(id);
        }
        next += 1;
    }
    let labels = pairs
        .iter()
        .map(|&(a, b)| format!("({}, {})", t1.label(a), t2.label(b)))
        .collect();
    let ts = TransitionSystem::new(t1.alphabet().clone(), 0, delta, labels)?;
    Ok(Product { ts, pairs })
}

impl Product {
    /// Lifts a set of component states of operand `side` to the product.
    pub fn lift(&self, side: u8, subset: &StateSet) -> Result<StateSet> {
        let pick: fn(&(usize, usize)) -> usize = match side {
            1 => |p| p.0,
            2 => |p| p.1,
            other => return Err(Error::InvalidSide(other)),
        };
        Ok(StateSet::from_fn(self.pairs.len(), |q| subset.contains(pick(&self.pairs[q]))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counter(mod_n: usize) -> TransitionSystem {
        // Counts letter 1 modulo n over the alphabet {a}.
        let alphabet = Alphabet::PropSymbols(vec!["a".into()]);
        let mut delta = Vec::new();
        for q in 0..mod_n {
            delta.push(q);
            delta.push((q + 1) % mod_n);
        }
        TransitionSystem::new(alphabet, 0, delta, (0..mod_n).map(|q| q.to_string()).collect()).unwrap()
    }

    #[test]
    fn product_projects_runs() {
        let t1 = counter(2);
        let t2 = counter(3);
        let p = product_ts(&t1, &t2).unwrap();
        assert_eq!(p.ts.num_states(), 6);
        let word = [1, 0, 1, 1, 0, 1, 1];
        let q = p.ts.run(0, &word).unwrap();
        assert_eq!(p.pairs[q], (t1.run(0, &word).unwrap(), t2.run(0, &word).unwrap()));
    }

    #[test]
    fn product_with_single_state_system_is_isomorphic() {
        let unit = TransitionSystem::new(
            Alphabet::PropSymbols(vec!["a".into()]),
            0,
            vec![0, 0],
            vec!["u".into()],
        )
        .unwrap();
        let t = counter(3);
        let p = product_ts(&t, &unit).unwrap();
        assert_eq!(p.ts.num_states(), 3);
        for q in 0..3 {
            for l in 0..2 {
                let (a, _) = p.pairs[p.ts.step(q, l)];
                assert_eq!(a, t.step(p.pairs[q].0, l));
            }
        }
    }

    #[test]
    fn lift_edge_cases() {
        let p = product_ts(&counter(2), &counter(3)).unwrap();
        assert!(p.lift(1, &StateSet::empty(2)).unwrap().is_empty());
        assert_eq!(p.lift(1, &StateSet::full(2)).unwrap().len(), 6);
        assert_eq!(p.lift(2, &StateSet::from_states(3, [1])).unwrap().len(), 2);
        assert!(matches!(p.lift(3, &StateSet::full(2)), Err(Error::InvalidSide(3))));
    }

    #[test]
    fn product_rejects_mismatched_alphabets() {
        let other = TransitionSystem::new(
            Alphabet::PropSymbols(vec!["b".into()]),
            0,
            vec![0, 0],
            vec!["u".into()],
        )
        .unwrap();
        assert!(product_ts(&counter(2), &other).is_err());
    }

    #[test]
    fn totality_is_enforced() {
        let alphabet = Alphabet::PropSymbols(vec!["a".into()]);
        assert!(TransitionSystem::new(alphabet.clone(), 0, vec![0], vec!["x".into()]).is_err());
        assert!(TransitionSystem::new(alphabet, 0, vec![0, 1], vec!["x".into()]).is_err());
    }
}
