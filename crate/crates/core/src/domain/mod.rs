//! Fully observable nondeterministic planning domains with explicit
//! reactions, their legality machinery, and their view as a transition
//! system over agent/environment moves with two error sinks.

mod dfa;
mod schema;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ltlf::{evaluate, Formula, Letter};

pub use dfa::{domain_to_dfa, DomainDfa, DomainNode};
pub use schema::{DomainDocument, MoveDocument, TraceDocument, TransitionDocument};

/// A domain state: the set of fluents that hold, as a bitmask over the
/// domain's fluent list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FluentSet(pub u64);

impl FluentSet {
    pub fn contains(self, fluent: usize) -> bool {
        self.0 >> fluent & 1 == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReactionId(pub usize);

pub const MAX_FLUENTS: usize = 63;

#[derive(Debug, Clone)]
pub struct Domain {
    fluents: Vec<String>,
    actions: Vec<String>,
    reactions: Vec<String>,
    initial: FluentSet,
    outgoing: HashMap<FluentSet, Vec<(ActionId, ReactionId, FluentSet)>>,
    reachable: Vec<FluentSet>,
    index: HashMap<FluentSet, usize>,
    fingerprint: String,
}

impl Domain {
    pub fn fluents(&self) -> &[String] {
        &self.fluents
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn reactions(&self) -> &[String] {
        &self.reactions
    }

    pub fn initial(&self) -> FluentSet {
        self.initial
    }

    /// Reachable states in breadth-first order from the initial state.
    pub fn reachable_states(&self) -> &[FluentSet] {
        &self.reachable
    }

    pub fn state_index(&self, s: FluentSet) -> Option<usize> {
        self.index.get(&s).copied()
    }

    /// SHA-256 over the canonical JSON form of the domain.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Applicable agent actions, in id order.
    pub fn alpha(&self, s: FluentSet) -> Vec<ActionId> {
        let mut out: Vec<ActionId> = self.moves(s).iter().map(|m| m.0).collect();
        out.dedup();
        out
    }

    /// Admissible reactions to `a` in `s`, in id order.
    pub fn beta(&self, s: FluentSet, a: ActionId) -> Vec<ReactionId> {
        self.moves(s).iter().filter(|m| m.0 == a).map(|m| m.1).collect()
    }

    pub fn delta(&self, s: FluentSet, a: ActionId, r: ReactionId) -> Option<FluentSet> {
        self.moves(s).iter().find(|m| m.0 == a && m.1 == r).map(|m| m.2)
    }

    /// Legal moves of `s` sorted by (action, reaction) id.
    pub fn moves(&self, s: FluentSet) -> &[(ActionId, ReactionId, FluentSet)] {
        self.outgoing.get(&s).map_or(&[], Vec::as_slice)
    }

    pub fn action_id(&self, name: &str) -> Result<ActionId> {
        self.actions.iter().position(|a| a == name).map(ActionId).ok_or_else(|| Error::UnknownName {
            kind: "action",
            name: name.to_string(),
        })
    }

    pub fn reaction_id(&self, name: &str) -> Result<ReactionId> {
        self.reactions
            .iter()
            .position(|r| r == name)
            .map(ReactionId)
            .ok_or_else(|| Error::UnknownName {
                kind: "reaction",
                name: name.to_string(),
            })
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.actions[a.0]
    }

    pub fn reaction_name(&self, r: ReactionId) -> &str {
        &self.reactions[r.0]
    }

    /// Fluent names of a state, sorted.
    pub fn state_names(&self, s: FluentSet) -> Vec<String> {
        let mut names: Vec<String> = (0..self.fluents.len())
            .filter(|&i| s.contains(i))
            .map(|i| self.fluents[i].clone())
            .collect();
        names.sort();
        names
    }

    pub fn state_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<FluentSet> {
        let mut bits = 0u64;
        for n in names {
            let n = n.as_ref();
            let i = self.fluents.iter().position(|f| f == n).ok_or_else(|| Error::UnknownName {
                kind: "fluent",
                name: n.to_string(),
            })?;
            if bits >> i & 1 == 1 {
                return Err(Error::Schema(format!("fluent `{n}` listed twice in a state")));
            }
            bits |= 1 << i;
        }
        Ok(FluentSet(bits))
    }

    /// The propositional interpretation of a state.
    pub fn letter(&self, s: FluentSet) -> Letter {
        self.state_names(s).into_iter().collect()
    }

    pub fn is_legal_trace(&self, t: &DomainTrace) -> bool {
        self.check_legal(t).is_ok()
    }

    fn check_legal(&self, t: &DomainTrace) -> Result<()> {
        if t.states.len() != t.moves.len() + 1 {
            return Err(Error::IllegalTrace("states and moves have inconsistent lengths".into()));
        }
        if t.states[0] != self.initial {
            return Err(Error::IllegalTrace("trace does not start in the initial state".into()));
        }
        for (i, &(a, r)) in t.moves.iter().enumerate() {
            let s = t.states[i];
            if !self.alpha(s).contains(&a) {
                return Err(Error::IllegalTrace(format!("step {}: action not applicable", i + 1)));
            }
            if !self.beta(s, a).contains(&r) {
                return Err(Error::IllegalTrace(format!("step {}: reaction not admissible", i + 1)));
            }
            if self.delta(s, a, r) != Some(t.states[i + 1]) {
                return Err(Error::IllegalTrace(format!("step {}: wrong successor state", i + 1)));
            }
        }
        Ok(())
    }

    /// `t |=_P f`: the state projection of a legal trace satisfies `f`.
    pub fn trace_satisfies(&self, t: &DomainTrace, f: &Formula) -> Result<bool> {
        self.check_legal(t)?;
        let letters: Vec<Letter> = t.states.iter().map(|&s| self.letter(s)).collect();
        evaluate(&letters, f)
    }

    /// Builds the trace that follows `moves` from the initial state, or
    /// `None` when some move is not legal.
    pub fn follow(&self, moves: &[(ActionId, ReactionId)]) -> Option<DomainTrace> {
        let mut t = DomainTrace::new(self.initial);
        for &(a, r) in moves {
            let next = self.delta(t.last(), a, r)?;
            t.push(a, r, next);
        }
        Some(t)
    }

    /// Recovers the reaction sequence of a trace from its states and actions.
    pub fn reactions_from_states(&self, states: &[FluentSet], actions: &[ActionId]) -> Option<Vec<ReactionId>> {
        actions
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                self.moves(states[i])
                    .iter()
                    .find(|m| m.0 == a && m.2 == states[i + 1])
                    .map(|m| m.1)
            })
            .collect()
    }
}

/// A finite domain trace `s0 (a1, r1, s1) ... (an, rn, sn)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DomainTrace {
    pub states: Vec<FluentSet>,
    pub moves: Vec<(ActionId, ReactionId)>,
}

impl DomainTrace {
    pub fn new(initial: FluentSet) -> Self {
        DomainTrace {
            states: vec![initial],
            moves: Vec::new(),
        }
    }

    pub fn push(&mut self, a: ActionId, r: ReactionId, s: FluentSet) {
        self.moves.push((a, r));
        self.states.push(s);
    }

    pub fn last(&self) -> FluentSet {
        *self.states.last().expect("traces are non-empty")
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn display<'a>(&'a self, d: &'a Domain) -> impl fmt::Display + 'a {
        TraceDisplay { t: self, d }
    }
}

struct TraceDisplay<'a> {
    t: &'a DomainTrace,
    d: &'a Domain,
}

impl fmt::Display for TraceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.d.state_names(self.t.states[0]).join(","))?;
        for (i, &(a, r)) in self.t.moves.iter().enumerate() {
            write!(
                f,
                " -({},{})-> {{{}}}",
                self.d.action_name(a),
                self.d.reaction_name(r),
                self.d.state_names(self.t.states[i + 1]).join(",")
            )?;
        }
        Ok(())
    }
}

/// Parses and validates a domain from its JSON document.
pub fn load_domain(json: &str) -> Result<Domain> {
    let doc: DomainDocument = serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))?;
    Domain::from_document(&doc)
}

impl Domain {
    pub fn from_document(doc: &DomainDocument) -> Result<Domain> {
        check_names("fluent", &doc.fluents, true)?;
        check_names("action", &doc.actions, false)?;
        check_names("reaction", &doc.reactions, false)?;
        if doc.fluents.len() > MAX_FLUENTS {
            return Err(Error::Schema(format!("at most {MAX_FLUENTS} fluents are supported")));
        }
        let mut d = Domain {
            fluents: doc.fluents.clone(),
            actions: doc.actions.clone(),
            reactions: doc.reactions.clone(),
            initial: FluentSet(0),
            outgoing: HashMap::new(),
            reachable: Vec::new(),
            index: HashMap::new(),
            fingerprint: String::new(),
        };
        d.initial = d.state_from_names(&doc.initial)?;

        let mut table: BTreeMap<(FluentSet, ActionId, ReactionId), FluentSet> = BTreeMap::new();
        for t in &doc.transitions {
            let from = d.state_from_names(&t.from)?;
            let to = d.state_from_names(&t.to)?;
            let a = d.action_id(&t.action)?;
            let r = d.reaction_id(&t.reaction)?;
            if table.insert((from, a, r), to).is_some() {
                return Err(Error::DuplicateTransition {
                    state: d.state_names(from),
                    action: t.action.clone(),
                    reaction: t.reaction.clone(),
                });
            }
        }
        for (&(s, a, r), &to) in &table {
            d.outgoing.entry(s).or_default().push((a, r, to));
        }

        // Uniqueness of environment reaction over every listed transition.
        for (&s, moves) in &d.outgoing {
            for (i, m1) in moves.iter().enumerate() {
                for m2 in &moves[i + 1..] {
                    if m1.0 == m2.0 && m1.2 == m2.2 {
                        return Err(Error::Uniqueness {
                            state: d.state_names(s),
                            action: d.actions[m1.0 .0].clone(),
                            first: d.reactions[m1.1 .0].clone(),
                            second: d.reactions[m2.1 .0].clone(),
                        });
                    }
                }
            }
        }

        // Existence of an agent action on reachable states. Existence of a
        // reaction holds by construction: actions only exist through moves.
        let mut queue = VecDeque::from([d.initial]);
        d.index.insert(d.initial, 0);
        d.reachable.push(d.initial);
        while let Some(s) = queue.pop_front() {
            let moves = d.moves(s).to_vec();
            if moves.is_empty() {
                return Err(Error::DeadState { state: d.state_names(s) });
            }
            for (_, _, t) in moves {
                if !d.index.contains_key(&t) {
                    d.index.insert(t, d.reachable.len());
                    d.reachable.push(t);
                    queue.push_back(t);
                }
            }
        }

        let canonical = serde_json::to_string(&d.to_document())?;
        d.fingerprint = hex::encode(Sha256::digest(canonical.as_bytes()));
        Ok(d)
    }

    /// Canonical document: states sorted, transitions in (state, action,
    /// reaction) order.
    pub fn to_document(&self) -> DomainDocument {
        let mut keys: Vec<&FluentSet> = self.outgoing.keys().collect();
        keys.sort_by_key(|s| self.state_names(**s));
        let transitions = keys
            .into_iter()
            .flat_map(|&s| {
                self.moves(s).iter().map(move |&(a, r, t)| TransitionDocument {
                    from: self.state_names(s),
                    action: self.actions[a.0].clone(),
                    reaction: self.reactions[r.0].clone(),
                    to: self.state_names(t),
                })
            })
            .collect();
        DomainDocument {
            fluents: self.fluents.clone(),
            initial: self.state_names(self.initial),
            actions: self.actions.clone(),
            reactions: self.reactions.clone(),
            transitions,
        }
    }

    pub fn trace_to_document(&self, t: &DomainTrace) -> TraceDocument {
        TraceDocument {
            states: t.states.iter().map(|&s| self.state_names(s)).collect(),
            moves: t
                .moves
                .iter()
                .map(|&(a, r)| MoveDocument {
                    action: self.action_name(a).to_string(),
                    reaction: self.reaction_name(r).to_string(),
                })
                .collect(),
        }
    }

    pub fn trace_from_document(&self, doc: &TraceDocument) -> Result<DomainTrace> {
        if doc.states.is_empty() {
            return Err(Error::Schema("a trace needs at least one state".into()));
        }
        let states = doc.states.iter().map(|s| self.state_from_names(s)).collect::<Result<Vec<_>>>()?;
        let moves = doc
            .moves
            .iter()
            .map(|m| Ok((self.action_id(&m.action)?, self.reaction_id(&m.reaction)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DomainTrace { states, moves })
    }
}

fn check_names(kind: &str, names: &[String], identifiers: bool) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() {
            return Err(Error::Schema(format!("empty {kind} name")));
        }
        if identifiers && !crate::ltlf::is_identifier(n) {
            return Err(Error::Schema(format!("{kind} `{n}` is not an identifier")));
        }
        if names[..i].contains(n) {
            return Err(Error::Schema(format!("duplicate {kind} `{n}`")));
        }
    }
    Ok(())
}
