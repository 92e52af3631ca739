//! Synthesis pipelines: single objectives, objective pairs, tier
//! validation, multi-tier assembly, and the adaptive executor.

mod bundle;
mod executor;
mod policy;

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::arena::{build_arena, build_pair_arena, Arena, PairArena};
use crate::automata::{to_dfa_with, Caps, Dfa};
use crate::domain::{domain_to_dfa, ActionId, Domain, DomainDfa, DomainTrace, FluentSet, ReactionId};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::games::{extract_transducer, solve_adv, solve_coop, solve_winpend, RegionSolution, Transducer, WinPendSolution};
use crate::ltlf::Formula;

pub use bundle::{read_manifest, write_bundle, BundleReport, Manifest, BUNDLE_VERSION, TIE_BREAK_RULE};
pub use executor::{play, AdaptiveExecutor, Dispatch, PlayOutcome, Selection, Termination};
pub use policy::{EnvPolicy, GreedyAdversarial, GreedyCooperative, Interactive, PolicyView, RandomPolicy, Scripted};

/// Compiles a goal over its own atoms with the configured caps.
pub fn compile_goal(f: &Formula, caps: &Caps) -> Result<Dfa> {
    to_dfa_with(f, &f.atoms(), caps)
}

#[derive(Debug, Clone)]
pub struct SingleSynthesis {
    pub formula: Formula,
    pub arena: Arc<Arena>,
    pub win: RegionSolution,
    pub coop: RegionSolution,
}

impl SingleSynthesis {
    /// The winning strategy κ as a transducer.
    pub fn kappa(&self) -> Transducer {
        extract_transducer(Arc::new(self.arena.ts.clone()), Arc::new(self.win.strategy.clone()))
    }

    /// The cooperative strategy ν as a transducer.
    pub fn nu(&self) -> Transducer {
        extract_transducer(Arc::new(self.arena.ts.clone()), Arc::new(self.coop.strategy.clone()))
    }
}

#[derive(Debug, Clone)]
pub struct PairSynthesis {
    /// Zero-based tier indices `(i, j)` with `i < j`.
    pub tiers: (usize, usize),
    pub arena: PairArena,
    pub wp: WinPendSolution,
}

impl PairSynthesis {
    /// The winning-pending strategy ω as a transducer.
    pub fn omega(&self) -> Transducer {
        extract_transducer(Arc::new(self.arena.ts().clone()), Arc::new(self.wp.strategy.clone()))
    }
}

pub fn synth_single_on(dd: &Arc<DomainDfa>, f: &Formula, caps: &Caps) -> Result<SingleSynthesis> {
    let arena = build_arena(dd, &compile_goal(f, caps)?)?;
    caps.check_states(arena.num_states(), "arena states")?;
    let win = solve_adv(&arena.ts, &arena.adv);
    let coop = solve_coop(&arena.ts, &arena.coop);
    Ok(SingleSynthesis {
        formula: f.clone(),
        arena: Arc::new(arena),
        win,
        coop,
    })
}

/// Single-objective synthesis: arena, winning and cooperative regions and
/// strategies.
pub fn synth_single(d: &Arc<Domain>, f: &Formula) -> Result<SingleSynthesis> {
    synth_single_on(&Arc::new(domain_to_dfa(d)), f, &Caps::from_env())
}

/// Solves the winning-pending game for two solved objectives.
pub fn synth_pair(tiers: (usize, usize), s1: &SingleSynthesis, s2: &SingleSynthesis, caps: &Caps) -> Result<PairSynthesis> {
    let arena = build_pair_arena(&s1.arena, &s2.arena)?;
    caps.check_states(arena.num_states(), "pair arena states")?;
    let adv1 = arena.lift(1, &s1.arena.adv)?;
    let coop2 = arena.lift(2, &s2.arena.coop)?;
    let w1 = arena.lift(1, &s1.win.region)?;
    let c2 = arena.lift(2, &s2.coop.region)?;
    let wp = solve_winpend(&arena, &adv1, &coop2, &w1, &c2, &s1.win.strategy);
    Ok(PairSynthesis { tiers, arena, wp })
}

/// Winning-pending synthesis for `(f1, f2)`, after checking that `f2`
/// strengthens `f1` over legal traces.
pub fn synth_winpend(d: &Arc<Domain>, f1: &Formula, f2: &Formula) -> Result<PairSynthesis> {
    let goals = [f1.clone(), f2.clone()];
    if let Some(cx) = check_multitier(d, &goals)? {
        return Err(cx.into_error(d));
    }
    let caps = Caps::from_env();
    let dd = Arc::new(domain_to_dfa(d));
    let s1 = synth_single_on(&dd, f1, &caps)?;
    let s2 = synth_single_on(&dd, f2, &caps)?;
    synth_pair((0, 1), &s1, &s2, &caps)
}

/// A legal trace accepted by tier `index + 1` but not by tier `index`
/// (both one-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub index: usize,
    pub trace: DomainTrace,
}

impl Counterexample {
    pub fn into_error(self, d: &Domain) -> Error {
        Error::NotMultiTier {
            tier: self.index + 1,
            witness: vec![self.trace.display(d).to_string()],
        }
    }
}

fn projector(d: &Domain, dfa: &Dfa) -> Result<impl Fn(FluentSet) -> usize> {
    let crate::automata::Alphabet::PropSymbols(atoms) = dfa.ts.alphabet() else {
        return Err(Error::AlphabetMismatch("goal must read propositional letters".into()));
    };
    let bits = atoms
        .iter()
        .map(|a| d.fluents().iter().position(|f| f == a).ok_or_else(|| Error::OutOfAlphabet(a.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(move |s: FluentSet| {
        bits.iter()
            .enumerate()
            .filter(|(_, &b)| s.contains(b))
            .fold(0, |m, (i, _)| m | 1 << i)
    })
}

/// Checks language containment between adjacent tiers over legal traces by
/// breadth-first search of the domain synchronized with both goal DFAs.
/// Returns the shortest violating trace, if any.
pub fn check_multitier(d: &Domain, goals: &[Formula]) -> Result<Option<Counterexample>> {
    if goals.is_empty() {
        return Err(Error::NoGoals);
    }
    let caps = Caps::from_env();
    let dfas = goals.iter().map(|g| compile_goal(g, &caps)).collect::<Result<Vec<_>>>()?;
    for i in 0..goals.len() - 1 {
        let (weak, strong) = (&dfas[i], &dfas[i + 1]);
        let (pw, ps) = (projector(d, weak)?, projector(d, strong)?);
        let s0 = d.initial();
        let start = (s0, weak.ts.step(weak.ts.initial(), pw(s0)), strong.ts.step(strong.ts.initial(), ps(s0)));
        type Node = (FluentSet, usize, usize);
        let mut parent: HashMap<Node, Option<(Node, ActionId, ReactionId)>> = HashMap::from([(start, None)]);
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            let (s, qw, qs) = node;
            if strong.finals.contains(qs) && !weak.finals.contains(qw) {
                let mut rev = Vec::new();
                let mut cur = node;
                while let Some(&Some((prev, a, r))) = parent.get(&cur) {
                    rev.push((a, r, cur.0));
                    cur = prev;
                }
                let mut trace = DomainTrace::new(s0);
                for (a, r, st) in rev.into_iter().rev() {
                    trace.push(a, r, st);
                }
                return Ok(Some(Counterexample { index: i + 1, trace }));
            }
            for &(a, r, t) in d.moves(s) {
                let next = (t, weak.ts.step(qw, pw(t)), strong.ts.step(qs, ps(t)));
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some((node, a, r)));
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(None)
}

/// Counts of game solves performed during multi-tier synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveCounts {
    pub single_solves: usize,
    pub pair_solves: usize,
}

/// All strategies needed by the adaptive executor.
#[derive(Debug, Clone)]
pub struct MultiTierSynthesis {
    pub domain: Arc<Domain>,
    pub domain_dfa: Arc<DomainDfa>,
    pub goals: Vec<Formula>,
    pub singles: Vec<SingleSynthesis>,
    /// Pair solutions in `(i, j)` lexicographic order.
    pub pairs: Vec<PairSynthesis>,
    pair_index: HashMap<(usize, usize), usize>,
    pub counts: SolveCounts,
}

impl MultiTierSynthesis {
    pub fn n(&self) -> usize {
        self.goals.len()
    }

    /// Pair solution for zero-based tiers `i < j`.
    pub fn pair(&self, i: usize, j: usize) -> &PairSynthesis {
        &self.pairs[self.pair_index[&(i, j)]]
    }

    pub fn executor(self: &Arc<Self>) -> AdaptiveExecutor {
        AdaptiveExecutor::new(Arc::clone(self))
    }
}

/// Validates the tiers, then solves every objective and every ordered pair.
pub fn synth_multitier(d: &Arc<Domain>, goals: &[Formula], exec_mode: Execution) -> Result<MultiTierSynthesis> {
    if let Some(cx) = check_multitier(d, goals)? {
        return Err(cx.into_error(d));
    }
    synth_multitier_unchecked(d, goals, exec_mode)
}

/// As [`synth_multitier`] without the containment check.
pub fn synth_multitier_unchecked(d: &Arc<Domain>, goals: &[Formula], exec_mode: Execution) -> Result<MultiTierSynthesis> {
    if goals.is_empty() {
        return Err(Error::NoGoals);
    }
    let caps = Caps::from_env();
    let dd = Arc::new(domain_to_dfa(d));
    let singles = exec::map(exec_mode, goals, |g| synth_single_on(&dd, g, &caps))?;
    let n = goals.len();
    let index_pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let pairs = exec::map(exec_mode, &index_pairs, |&(i, j)| synth_pair((i, j), &singles[i], &singles[j], &caps))?;
    let pair_index = index_pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let counts = SolveCounts {
        single_solves: singles.len(),
        pair_solves: pairs.len(),
    };
    Ok(MultiTierSynthesis {
        domain: Arc::clone(d),
        domain_dfa: dd,
        goals: goals.to_vec(),
        singles,
        pairs,
        pair_index,
        counts,
    })
}
