//! Brute-force ground truth for small instances.
//!
//! Values are decided by enumerating positional agent strategies over the
//! states reachable from a history, with play acceptance decided by the
//! direct LTLf evaluator on the full trace. Regions and the winning-pending
//! set are then rebuilt from these values without the worklist solvers.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::arena::{build_arena, Arena, PairArena};
use crate::automata::{to_dfa, Dfa, StateSet, TransitionSystem};
use crate::domain::{domain_to_dfa, ActionId, Domain, DomainNode, DomainTrace, FluentSet, ReactionId};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::games::Transducer;
use crate::ltlf::Formula;
use crate::synthesis::AdaptiveExecutor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    /// Distinct (domain state, objective state) pairs reachable from a history.
    pub max_states: usize,
    pub max_actions: usize,
    /// Strategy choices tried per value query.
    pub max_strategies: u64,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_states: 12,
            max_actions: 6,
            max_strategies: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Win,
    Pend,
    Lose,
}

type Node = (FluentSet, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Positional strategy; `None` means stop.
    Strategy(BTreeMap<Node, Option<ActionId>>),
    /// An accepting continuation.
    Play(Vec<(ActionId, ReactionId)>),
    /// No strategy has an accepting play.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueVerdict {
    pub value: Value,
    pub witness: Witness,
}

/// The value of `f` at history `h`.
pub fn oracle_value(d: &Domain, f: &Formula, h: &DomainTrace, caps: &OracleCaps) -> Result<ValueVerdict> {
    let dfa = to_dfa(f, &f.atoms())?;
    Query::new(d, f, &dfa, caps).value(h)
}

struct Query<'a> {
    d: &'a Domain,
    f: &'a Formula,
    dfa: &'a Dfa,
    bits: Vec<usize>,
    caps: &'a OracleCaps,
}

#[derive(Clone)]
struct Pending {
    node: Node,
    trace: DomainTrace,
    path: Vec<Node>,
}

impl<'a> Query<'a> {
    fn new(d: &'a Domain, f: &'a Formula, dfa: &'a Dfa, caps: &'a OracleCaps) -> Self {
        let crate::automata::Alphabet::PropSymbols(atoms) = dfa.ts.alphabet() else {
            unreachable!("LTLf automata read propositional letters")
        };
        let bits = atoms
            .iter()
            .map(|a| d.fluents().iter().position(|x| x == a).unwrap_or(usize::MAX))
            .collect();
        Query { d, f, dfa, bits, caps }
    }

    fn letter(&self, s: FluentSet) -> usize {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != usize::MAX && s.contains(b))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    fn step(&self, q: usize, s: FluentSet) -> usize {
        self.dfa.ts.step(q, self.letter(s))
    }

    fn node_of(&self, h: &DomainTrace) -> Node {
        let q = h.states.iter().fold(self.dfa.ts.initial(), |q, &s| self.step(q, s));
        (h.last(), q)
    }

    fn accepting(&self, t: &DomainTrace) -> Result<bool> {
        self.d.trace_satisfies(t, self.f)
    }

    fn value(&self, h: &DomainTrace) -> Result<ValueVerdict> {
        if let Some(name) = self.bits.iter().zip(self.f.atoms()).find(|(b, _)| **b == usize::MAX).map(|x| x.1) {
            return Err(Error::OutOfAlphabet(name));
        }
        if !self.d.is_legal_trace(h) {
            return Err(Error::IllegalTrace("oracle queried on an illegal history".into()));
        }
        if self.d.actions().len() > self.caps.max_actions {
            return Err(Error::Resource {
                what: "oracle actions",
                limit: self.caps.max_actions as u64,
            });
        }
        let root = self.node_of(h);
        self.check_reachable(root)?;

        let mut budget = 0u64;
        let start = Pending {
            node: root,
            trace: h.clone(),
            path: Vec::new(),
        };
        if let Some(strategy) = self.win(vec![start], HashMap::new(), &mut budget)? {
            return Ok(ValueVerdict {
                value: Value::Win,
                witness: Witness::Strategy(strategy.into_iter().collect()),
            });
        }
        match self.accepting_path(h, root)? {
            Some(play) => Ok(ValueVerdict {
                value: Value::Pend,
                witness: Witness::Play(play),
            }),
            None => Ok(ValueVerdict {
                value: Value::Lose,
                witness: Witness::Exhausted,
            }),
        }
    }

    fn check_reachable(&self, root: Node) -> Result<()> {
        let mut seen = HashSet::from([root]);
        let mut queue = VecDeque::from([root]);
        while let Some((s, q)) = queue.pop_front() {
            for &(_, _, t) in self.d.moves(s) {
                let n = (t, self.step(q, t));
                if seen.insert(n) {
                    if seen.len() > self.caps.max_states {
                        return Err(Error::Resource {
                            what: "oracle states",
                            limit: self.caps.max_states as u64,
                        });
                    }
                    queue.push_back(n);
                }
            }
        }
        Ok(())
    }

    /// Searches for a positional assignment under which every play from the
    /// pending nodes is finite and accepting. Choices are made lazily, the
    /// first time a play reaches a node. At accepting nodes only stopping
    /// is tried: any play stopped there is accepting, so continuing cannot
    /// do better.
    fn win(
        &self,
        mut pending: Vec<Pending>,
        mut strategy: HashMap<Node, Option<ActionId>>,
        budget: &mut u64,
    ) -> Result<Option<HashMap<Node, Option<ActionId>>>> {
        while let Some(p) = pending.pop() {
            if p.path.contains(&p.node) {
                return Ok(None);
            }
            if self.accepting(&p.trace)? {
                strategy.entry(p.node).or_insert(None);
                continue;
            }
            match strategy.get(&p.node) {
                Some(Some(a)) => self.expand(&p, *a, &mut pending),
                Some(None) => return Ok(None),
                None => {
                    for a in self.actions_by_name(p.node.0) {
                        *budget += 1;
                        if *budget > self.caps.max_strategies {
                            return Err(Error::Resource {
                                what: "oracle strategies",
                                limit: self.caps.max_strategies,
                            });
                        }
                        let mut next = pending.clone();
                        self.expand(&p, a, &mut next);
                        let mut trial = strategy.clone();
                        trial.insert(p.node, Some(a));
                        if let Some(found) = self.win(next, trial, budget)? {
                            return Ok(Some(found));
                        }
                    }
                    return Ok(None);
                }
            }
        }
        Ok(Some(strategy))
    }

    fn actions_by_name(&self, s: FluentSet) -> Vec<ActionId> {
        let mut actions = self.d.alpha(s);
        actions.sort_by(|a, b| self.d.action_name(*a).cmp(self.d.action_name(*b)));
        actions
    }

    fn expand(&self, p: &Pending, a: ActionId, out: &mut Vec<Pending>) {
        let (s, q) = p.node;
        for r in self.d.beta(s, a) {
            let t = self.d.delta(s, a, r).expect("admissible reaction");
            let mut trace = p.trace.clone();
            trace.push(a, r, t);
            let mut path = p.path.clone();
            path.push(p.node);
            out.push(Pending {
                node: (t, self.step(q, t)),
                trace,
                path,
            });
        }
    }

    /// Breadth-first search for a legal continuation after which stopping
    /// is accepting. A simple path is realized by a positional strategy.
    fn accepting_path(&self, h: &DomainTrace, root: Node) -> Result<Option<Vec<(ActionId, ReactionId)>>> {
        let mut seen = HashSet::from([root]);
        let mut queue = VecDeque::from([(root, h.clone())]);
        while let Some(((s, q), t)) = queue.pop_front() {
            if self.accepting(&t)? {
                return Ok(Some(t.moves[h.len()..].to_vec()));
            }
            for &(a, r, s2) in self.d.moves(s) {
                let n = (s2, self.step(q, s2));
                if seen.insert(n) {
                    let mut t2 = t.clone();
                    t2.push(a, r, s2);
                    queue.push_back((n, t2));
                }
            }
        }
        Ok(None)
    }
}

/// Shortest legal history reaching each state of a transition system over
/// the domain's moves; `None` for states no legal history reaches.
pub fn shortest_histories(d: &Domain, ts: &TransitionSystem) -> Vec<Option<DomainTrace>> {
    let nr = d.reactions().len();
    let mut out: Vec<Option<DomainTrace>> = vec![None; ts.num_states()];
    out[ts.initial()] = Some(DomainTrace::new(d.initial()));
    let mut queue = VecDeque::from([ts.initial()]);
    while let Some(q) = queue.pop_front() {
        let h = out[q].clone().expect("queued states have histories");
        for &(a, r, t) in d.moves(h.last()) {
            let q2 = ts.step(q, a.0 * nr + r.0);
            if out[q2].is_none() {
                let mut h2 = h.clone();
                h2.push(a, r, t);
                out[q2] = Some(h2);
                queue.push_back(q2);
            }
        }
    }
    out
}

/// Oracle winning and cooperative regions over an arena. Error sinks
/// follow the game targets: the environment-error sink counts as won and
/// neither sink as cooperatively reachable.
#[derive(Debug, Clone)]
pub struct OracleRegions {
    pub win: StateSet,
    pub coop: StateSet,
}

pub fn oracle_regions_on(arena: &Arena, f: &Formula, caps: &OracleCaps, exec_mode: Execution) -> Result<OracleRegions> {
    let d = &arena.domain.domain;
    let dfa = to_dfa(f, &f.atoms())?;
    let query = Query::new(d, f, &dfa, caps);
    let histories = shortest_histories(d, &arena.ts);
    let ids: Vec<usize> = (0..arena.num_states()).collect();
    let values = exec::map(exec_mode, &ids, |&q| match arena.node(q) {
        DomainNode::AgErr => Ok(None),
        DomainNode::EnvErr => Ok(Some(Value::Win)),
        DomainNode::State(_) => match &histories[q] {
            Some(h) => Ok(Some(query.value(h)?.value)),
            None => Ok(None),
        },
    })?;
    let n = ids.len();
    Ok(OracleRegions {
        win: StateSet::from_fn(n, |q| values[q] == Some(Value::Win)),
        coop: StateSet::from_fn(n, |q| !arena.is_error(q) && matches!(values[q], Some(Value::Win | Value::Pend))),
    })
}

/// Builds the arena for `f` and returns it with its oracle regions.
pub fn oracle_regions(d: &Arc<Domain>, f: &Formula, caps: &OracleCaps) -> Result<(Arena, OracleRegions)> {
    let dd = Arc::new(domain_to_dfa(d));
    let arena = build_arena(&dd, &to_dfa(f, &f.atoms())?)?;
    let regions = oracle_regions_on(&arena, f, caps, Execution::Parallel)?;
    Ok((arena, regions))
}

/// The winning-pending set recomputed by full rescans, with entry levels.
pub fn oracle_winpend_on(
    pa: &PairArena,
    a1: &Arena,
    a2: &Arena,
    w1: &StateSet,
    c2: &StateSet,
) -> (StateSet, Vec<Option<usize>>) {
    let n = pa.num_states();
    let ts = pa.ts();
    let (na, nr) = ts.alphabet().move_dims().expect("move alphabet");
    let in_wp0 = |q: usize| {
        let (q1, q2) = pa.pair(q);
        a1.adv.contains(q1) && a2.coop.contains(q2)
    };
    let exit = |q: usize| {
        let (q1, q2) = pa.pair(q);
        w1.contains(q1) && !c2.contains(q2)
    };
    let mut rank: Vec<Option<usize>> = (0..n).map(|q| in_wp0(q).then_some(0)).collect();
    for level in 1.. {
        let snapshot = rank.clone();
        let inside = |q: usize| snapshot[q].is_some();
        let mut grew = false;
        for (q, slot) in rank.iter_mut().enumerate() {
            if inside(q) {
                continue;
            }
            let ok = (0..na).any(|a| {
                let succ: Vec<usize> = (0..nr).map(|r| ts.step(q, a * nr + r)).collect();
                succ.iter().any(|&t| inside(t)) && succ.iter().all(|&t| inside(t) || exit(t))
            });
            if ok {
                *slot = Some(level);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    (StateSet::from_fn(n, |q| rank[q].is_some()), rank)
}

/// Something that picks agent actions along a history.
pub trait Agent: Clone {
    fn next_action(&mut self) -> Result<Option<ActionId>>;
    fn observe(&mut self, a: ActionId, r: ReactionId) -> Result<()>;
    /// Internal state; equal keys mean equal future behaviour.
    fn key(&self) -> Vec<usize>;
}

impl Agent for AdaptiveExecutor {
    fn next_action(&mut self) -> Result<Option<ActionId>> {
        self.action()
    }

    fn observe(&mut self, a: ActionId, r: ReactionId) -> Result<()> {
        self.advance(a, r)
    }

    fn key(&self) -> Vec<usize> {
        let s = self.synthesis();
        let mut k: Vec<usize> = (0..s.n()).map(|i| self.single_cursor(i)).collect();
        k.extend(s.pairs.iter().map(|p| self.pair_cursor(p.tiers.0, p.tiers.1)));
        k
    }
}

impl Agent for Transducer {
    fn next_action(&mut self) -> Result<Option<ActionId>> {
        Ok(self.output().map(ActionId))
    }

    fn observe(&mut self, a: ActionId, r: ReactionId) -> Result<()> {
        self.advance(a.0, r.0)
    }

    fn key(&self) -> Vec<usize> {
        vec![self.state()]
    }
}

/// Every legal history of length at most `depth` consistent with the
/// agent, including the empty one, paired with the agent state reached.
pub fn explore_histories<A: Agent>(d: &Domain, agent: &A, depth: usize) -> Result<Vec<(DomainTrace, A)>> {
    let mut out = Vec::new();
    let mut stack = vec![(DomainTrace::new(d.initial()), agent.clone())];
    while let Some((h, ag)) = stack.pop() {
        out.push((h.clone(), ag.clone()));
        if h.len() == depth {
            continue;
        }
        let mut probe = ag.clone();
        let Some(a) = probe.next_action()? else { continue };
        let mut children = Vec::new();
        for r in d.beta(h.last(), a) {
            let t = d.delta(h.last(), a, r).ok_or_else(|| Error::IllegalTrace("agent chose an inapplicable action".into()))?;
            let mut next = probe.clone();
            next.observe(a, r)?;
            let mut h2 = h.clone();
            h2.push(a, r, t);
            children.push((h2, next));
        }
        stack.extend(children.into_iter().rev());
    }
    out.sort_by_key(|x| x.0.len());
    Ok(out)
}

pub fn enumerate_histories<A: Agent>(d: &Domain, agent: &A, depth: usize) -> Result<Vec<DomainTrace>> {
    Ok(explore_histories(d, agent, depth)?.into_iter().map(|x| x.0).collect())
}

/// All maximal plays of an agent from a history, against every legal
/// environment. `infinite` is set when some play revisits an agent/domain
/// configuration, which makes it loop forever.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub plays: Vec<DomainTrace>,
    pub infinite: bool,
}

pub fn expand_plays<A: Agent>(d: &Domain, agent: &A, h: &DomainTrace, max_plays: usize) -> Result<Expansion> {
    let mut plays = Vec::new();
    let mut infinite = false;
    let mut stack = vec![(h.clone(), agent.clone(), Vec::<(FluentSet, Vec<usize>)>::new())];
    while let Some((t, mut ag, mut path)) = stack.pop() {
        let config = (t.last(), ag.key());
        if path.contains(&config) {
            infinite = true;
            continue;
        }
        path.push(config);
        let Some(a) = ag.next_action()? else {
            plays.push(t);
            if plays.len() > max_plays {
                return Err(Error::Resource {
                    what: "expanded plays",
                    limit: max_plays as u64,
                });
            }
            continue;
        };
        let s = t.last();
        let rs = d.beta(s, a);
        if rs.is_empty() {
            return Err(Error::IllegalTrace("agent chose an inapplicable action".into()));
        }
        for r in rs {
            let mut next = ag.clone();
            next.observe(a, r)?;
            let mut t2 = t.clone();
            t2.push(a, r, d.delta(s, a, r).expect("admissible reaction"));
            stack.push((t2, next, path.clone()));
        }
    }
    Ok(Expansion { plays, infinite })
}

/// Replays a legal history into a fresh agent.
pub fn replay<A: Agent>(agent: &A, h: &DomainTrace) -> Result<A> {
    let mut ag = agent.clone();
    for &(a, r) in &h.moves {
        ag.observe(a, r)?;
    }
    Ok(ag)
}
