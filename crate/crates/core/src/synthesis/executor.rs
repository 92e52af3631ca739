use std::fmt;
use std::sync::Arc;

use super::policy::{EnvPolicy, PolicyView};
use super::MultiTierSynthesis;
use crate::domain::{ActionId, DomainNode, DomainTrace, ReactionId};
use crate::error::{Error, Result};

/// Which strategy the executor consults. Tier numbers are one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// ω for the pair `(j, l)`.
    WinPend { j: usize, l: usize },
    /// κ of tier `j`.
    Win { j: usize },
    /// ν of tier `m`.
    Coop { m: usize },
    Stop,
}

/// One dispatch decision with the quantities it was based on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dispatch {
    /// Highest tier whose winning region holds the current state, or 0.
    pub j: usize,
    /// Highest tier above `j` whose pair with `j` is winning-pending, or 0.
    pub l: usize,
    /// Highest tier whose cooperative region holds the current state, or 0.
    pub m: usize,
    pub selection: Selection,
    pub action: Option<ActionId>,
    /// Per tier: "win", "pend" or "lose" by region membership.
    pub tags: Vec<&'static str>,
}

impl fmt::Display for Dispatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sel = match self.selection {
            Selection::WinPend { j, l } => format!("omega[{j},{l}]"),
            Selection::Win { j } => format!("kappa[{j}]"),
            Selection::Coop { m } => format!("nu[{m}]"),
            Selection::Stop => "stop".into(),
        };
        write!(f, "j={} l={} m={} via {} regions=[{}]", self.j, self.l, self.m, sel, self.tags.join(","))
    }
}

/// Runs the multi-tier strategy: keeps every arena and pair-arena cursor in
/// step with the move history and dispatches to ω, κ or ν each turn.
#[derive(Debug, Clone)]
pub struct AdaptiveExecutor {
    synth: Arc<MultiTierSynthesis>,
    domain_cursor: usize,
    singles: Vec<usize>,
    pairs: Vec<usize>,
    trace: DomainTrace,
    env_violation: Option<(ActionId, ReactionId)>,
    emitted: Option<ActionId>,
    stopped: bool,
}

impl AdaptiveExecutor {
    pub fn new(synth: Arc<MultiTierSynthesis>) -> Self {
        let singles = synth.singles.iter().map(|s| s.arena.ts.initial()).collect();
        let pairs = synth.pairs.iter().map(|p| p.arena.ts().initial()).collect();
        let trace = DomainTrace::new(synth.domain.initial());
        AdaptiveExecutor {
            domain_cursor: synth.domain_dfa.ts.initial(),
            synth,
            singles,
            pairs,
            trace,
            env_violation: None,
            emitted: None,
            stopped: false,
        }
    }

    pub fn synthesis(&self) -> &Arc<MultiTierSynthesis> {
        &self.synth
    }

    /// Legal part of the history.
    pub fn trace(&self) -> &DomainTrace {
        &self.trace
    }

    /// The move that took the play outside the domain, if any.
    pub fn env_violation(&self) -> Option<(ActionId, ReactionId)> {
        self.env_violation
    }

    pub fn domain_node(&self) -> DomainNode {
        self.synth.domain_dfa.node(self.domain_cursor)
    }

    pub fn is_stopped(&self) -> bool {
        self.stopped
    }

    /// Arena cursor of zero-based tier `i`.
    pub fn single_cursor(&self, i: usize) -> usize {
        self.singles[i]
    }

    pub fn pair_cursor(&self, i: usize, j: usize) -> usize {
        self.pairs[self.synth.pair_index[&(i, j)]]
    }

    /// The dispatch at the current history, without side effects.
    pub fn peek(&self) -> Dispatch {
        let s = &self.synth;
        let n = s.n();
        let in_w = |i: usize| s.singles[i].win.region.contains(self.singles[i]);
        let in_c = |i: usize| s.singles[i].coop.region.contains(self.singles[i]);
        let j = (1..=n).rev().find(|&i| in_w(i - 1)).unwrap_or(0);
        let l = if j > 0 {
            (j + 1..=n)
                .rev()
                .find(|&i| s.pair(j - 1, i - 1).wp.region.contains(self.pair_cursor(j - 1, i - 1)))
                .unwrap_or(0)
        } else {
            0
        };
        let m = (1..=n).rev().find(|&i| in_c(i - 1)).unwrap_or(0);
        let (selection, action) = if l > j && j > 0 {
            let p = s.pair(j - 1, l - 1);
            (Selection::WinPend { j, l }, p.wp.strategy[self.pair_cursor(j - 1, l - 1)])
        } else if j > 0 {
            (Selection::Win { j }, s.singles[j - 1].win.strategy[self.singles[j - 1]])
        } else if m > 0 {
            (Selection::Coop { m }, s.singles[m - 1].coop.strategy[self.singles[m - 1]])
        } else {
            (Selection::Stop, None)
        };
        let tags = (0..n)
            .map(|i| if in_w(i) { "win" } else if in_c(i) { "pend" } else { "lose" })
            .collect();
        Dispatch {
            j,
            l,
            m,
            selection,
            action: action.map(ActionId),
            tags,
        }
    }

    /// The next action, or `None` when the strategy ends the play.
    pub fn action(&mut self) -> Result<Option<ActionId>> {
        if self.stopped {
            return Err(Error::Stopped);
        }
        let a = self.peek().action;
        self.stopped = a.is_none();
        self.emitted = a;
        Ok(a)
    }

    /// Advances every cursor by the agent's action and the environment's
    /// reaction. The action must be the one the executor chose.
    pub fn advance(&mut self, a: ActionId, r: ReactionId) -> Result<()> {
        if self.stopped {
            return Err(Error::Stopped);
        }
        let expected = match self.emitted {
            Some(e) => e,
            None => self.peek().action.ok_or(Error::Stopped)?,
        };
        let d = &self.synth.domain;
        if a != expected {
            let got = d.actions().get(a.0).cloned().unwrap_or_else(|| format!("#{}", a.0));
            return Err(Error::ActionMismatch {
                expected: d.action_name(expected).to_string(),
                got,
            });
        }
        if r.0 >= d.reactions().len() {
            return Err(Error::UnknownName {
                kind: "reaction",
                name: format!("#{}", r.0),
            });
        }
        let dd = &self.synth.domain_dfa;
        let letter = dd.letter(a, r);
        for (i, c) in self.singles.iter_mut().enumerate() {
            *c = self.synth.singles[i].arena.ts.step(*c, letter);
        }
        for (k, c) in self.pairs.iter_mut().enumerate() {
            *c = self.synth.pairs[k].arena.ts().step(*c, letter);
        }
        self.domain_cursor = dd.ts.step(self.domain_cursor, letter);
        match dd.node(self.domain_cursor) {
            DomainNode::State(s) if self.env_violation.is_none() => self.trace.push(a, r, s),
            DomainNode::State(_) => {}
            DomainNode::EnvErr | DomainNode::AgErr => {
                self.env_violation.get_or_insert((a, r));
            }
        }
        self.emitted = None;
        Ok(())
    }

    /// Rank of the successor under `(a, r)` in the target region of
    /// `selection`, or `None` if the successor leaves it.
    pub fn rank_after(&self, selection: Selection, a: ActionId, r: ReactionId) -> Option<usize> {
        let s = &self.synth;
        let letter = s.domain_dfa.letter(a, r);
        match selection {
            Selection::WinPend { j, l } => {
                let p = s.pair(j - 1, l - 1);
                p.wp.rank[p.arena.ts().step(self.pair_cursor(j - 1, l - 1), letter)]
            }
            Selection::Win { j } => {
                let t = &s.singles[j - 1];
                t.win.rank[t.arena.ts.step(self.singles[j - 1], letter)]
            }
            Selection::Coop { m } => coop_rank_after(self, m, letter),
            Selection::Stop => None,
        }
    }

    /// Cooperative rank of the successor in tier `m` (one-based).
    pub fn coop_rank_after(&self, m: usize, a: ActionId, r: ReactionId) -> Option<usize> {
        coop_rank_after(self, m, self.synth.domain_dfa.letter(a, r))
    }
}

fn coop_rank_after(e: &AdaptiveExecutor, m: usize, letter: usize) -> Option<usize> {
    let t = &e.synth.singles[m - 1];
    t.coop.rank[t.arena.ts.step(e.singles[m - 1], letter)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The strategy chose to end the play.
    Stopped,
    /// The step budget ran out first.
    Truncated,
}

#[derive(Debug, Clone)]
pub struct PlayOutcome {
    /// Legal part of the play.
    pub trace: DomainTrace,
    pub env_violation: Option<(ActionId, ReactionId)>,
    pub termination: Termination,
    /// Per tier, whether the legal trace satisfies it (direct evaluation).
    pub verdicts: Vec<bool>,
    /// Dispatch decisions, one per turn including the final one.
    pub dispatches: Vec<Dispatch>,
}

impl PlayOutcome {
    /// Highest satisfied tier (one-based), or 0.
    pub fn highest_tier(&self) -> usize {
        self.verdicts.iter().rposition(|&v| v).map_or(0, |i| i + 1)
    }
}

/// Alternates executor and environment until the executor stops or
/// `max_steps` moves have been made.
pub fn play(executor: &mut AdaptiveExecutor, env: &mut dyn EnvPolicy, max_steps: usize) -> Result<PlayOutcome> {
    let mut dispatches = Vec::new();
    let mut termination = Termination::Truncated;
    for step in 0..=max_steps {
        let dispatch = executor.peek();
        dispatches.push(dispatch.clone());
        if dispatch.action.is_none() {
            executor.action()?;
            termination = Termination::Stopped;
            break;
        }
        if step == max_steps {
            break;
        }
        let a = executor.action()?.expect("dispatch chose an action");
        let r = {
            let view = PolicyView {
                executor,
                action: a,
                dispatch: &dispatch,
            };
            env.react(&view)?
        };
        executor.advance(a, r)?;
    }
    let synth = executor.synthesis();
    let verdicts = synth
        .goals
        .iter()
        .map(|g| synth.domain.trace_satisfies(executor.trace(), g))
        .collect::<Result<Vec<_>>>()?;
    Ok(PlayOutcome {
        trace: executor.trace().clone(),
        env_violation: executor.env_violation(),
        termination,
        verdicts,
        dispatches,
    })
}
