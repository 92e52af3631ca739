use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::executor::{AdaptiveExecutor, Dispatch};
use crate::domain::{ActionId, Domain, DomainNode, ReactionId};
use crate::error::{Error, Result};

/// What an environment sees when it answers an agent action.
pub struct PolicyView<'a> {
    pub executor: &'a AdaptiveExecutor,
    pub action: ActionId,
    pub dispatch: &'a Dispatch,
}

impl PolicyView<'_> {
    pub fn domain(&self) -> &Domain {
        &self.executor.synthesis().domain
    }

    /// Admissible reactions in lexicographic name order.
    pub fn legal_reactions(&self) -> Vec<ReactionId> {
        let d = self.domain();
        let mut rs = match self.executor.domain_node() {
            DomainNode::State(s) => d.beta(s, self.action),
            _ => (0..d.reactions().len()).map(ReactionId).collect(),
        };
        rs.sort_by(|a, b| d.reaction_name(*a).cmp(d.reaction_name(*b)));
        rs
    }
}

/// An environment strategy for simulation.
pub trait EnvPolicy {
    fn react(&mut self, view: &PolicyView<'_>) -> Result<ReactionId>;
}

/// Replays a fixed reaction list, cycling when exhausted. Reactions are
/// used as given, even when not admissible.
pub struct Scripted {
    reactions: Vec<ReactionId>,
    next: usize,
}

impl Scripted {
    pub fn new<S: AsRef<str>>(d: &Domain, names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Schema("scripted environment needs at least one reaction".into()));
        }
        let reactions = names.iter().map(|n| d.reaction_id(n.as_ref())).collect::<Result<_>>()?;
        Ok(Scripted { reactions, next: 0 })
    }
}

impl EnvPolicy for Scripted {
    fn react(&mut self, _: &PolicyView<'_>) -> Result<ReactionId> {
        let r = self.reactions[self.next % self.reactions.len()];
        self.next += 1;
        Ok(r)
    }
}

/// Uniform choice among admissible reactions from a seeded stream.
pub struct RandomPolicy {
    rng: ChaCha8Rng,
}

impl RandomPolicy {
    pub fn new(seed: u64) -> Self {
        RandomPolicy {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl EnvPolicy for RandomPolicy {
    fn react(&mut self, view: &PolicyView<'_>) -> Result<ReactionId> {
        let rs = view.legal_reactions();
        Ok(rs[self.rng.random_range(0..rs.len())])
    }
}

/// Heuristic opponent: leaves the region the executor currently relies on
/// when it can, otherwise maximizes the remaining rank.
pub struct GreedyAdversarial;

impl EnvPolicy for GreedyAdversarial {
    fn react(&mut self, view: &PolicyView<'_>) -> Result<ReactionId> {
        let sel = view.dispatch.selection;
        let rs = view.legal_reactions();
        // Lexicographic order is kept by taking the first maximum.
        let key = |r: ReactionId| match view.executor.rank_after(sel, view.action, r) {
            None => (1, 0),
            Some(k) => (0, k),
        };
        let mut best = rs[0];
        for &r in &rs[1..] {
            if key(r) > key(best) {
                best = r;
            }
        }
        Ok(best)
    }
}

/// Helpful environment: picks the reaction after which the highest tier
/// is still cooperatively reachable, closest to its target.
pub struct GreedyCooperative;

impl EnvPolicy for GreedyCooperative {
    fn react(&mut self, view: &PolicyView<'_>) -> Result<ReactionId> {
        let n = view.executor.synthesis().n();
        let rs = view.legal_reactions();
        let key = |r: ReactionId| {
            (1..=n)
                .rev()
                .find_map(|m| view.executor.coop_rank_after(m, view.action, r).map(|k| (n - m, k)))
                .unwrap_or((n, 0))
        };
        let mut best = rs[0];
        for &r in &rs[1..] {
            if key(r) < key(best) {
                best = r;
            }
        }
        Ok(best)
    }
}

/// Prompts on a terminal-like stream for each reaction.
pub struct Interactive<R, W> {
    input: R,
    output: W,
    explain: bool,
}

impl<R: BufRead, W: Write> Interactive<R, W> {
    pub fn new(input: R, output: W, explain: bool) -> Self {
        Interactive { input, output, explain }
    }
}

impl<R: BufRead, W: Write> EnvPolicy for Interactive<R, W> {
    fn react(&mut self, view: &PolicyView<'_>) -> Result<ReactionId> {
        let d = view.domain();
        let state = match view.executor.domain_node() {
            DomainNode::State(s) => format!("{{{}}}", d.state_names(s).join(",")),
            other => format!("{other:?}"),
        };
        writeln!(self.output, "state {state}: agent plays {}", d.action_name(view.action))?;
        if self.explain {
            writeln!(self.output, "  dispatch: {}", view.dispatch)?;
        }
        let rs = view.legal_reactions();
        loop {
            for (i, r) in rs.iter().enumerate() {
                writeln!(self.output, "  [{i}] {}", d.reaction_name(*r))?;
            }
            write!(self.output, "reaction> ")?;
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Err(Error::Io(std::io::Error::new(
                    std::io::ErrorKind::UnexpectedEof,
                    "input closed during interactive simulation",
                )));
            }
            let line = line.trim();
            let chosen = line
                .parse::<usize>()
                .ok()
                .and_then(|i| rs.get(i).copied())
                .or_else(|| rs.iter().copied().find(|r| d.reaction_name(*r) == line));
            match chosen {
                Some(r) => return Ok(r),
                None => writeln!(self.output, "not a legal reaction: {line}")?,
            }
        }
    }
}
