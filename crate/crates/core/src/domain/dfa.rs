use std::sync::Arc;

use super::{ActionId, Domain, FluentSet, ReactionId};
use crate::automata::{Alphabet, TransitionSystem};

/// A node of the domain automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainNode {
    State(FluentSet),
    /// The agent played an inapplicable action.
    AgErr,
    /// The environment answered with an inadmissible reaction.
    EnvErr,
}

/// The domain as a total transition system over `actions x reactions`.
/// Ids `0..n` are the reachable states in BFS order, followed by the two
/// absorbing error sinks.
#[derive(Debug, Clone)]
pub struct DomainDfa {
    pub domain: Arc<Domain>,
    pub ts: TransitionSystem,
}

impl DomainDfa {
    pub fn ag_err(&self) -> usize {
        self.domain.reachable_states().len()
    }

    pub fn env_err(&self) -> usize {
        self.ag_err() + 1
    }

    pub fn num_states(&self) -> usize {
        self.ts.num_states()
    }

    pub fn node(&self, id: usize) -> DomainNode {
        let n = self.ag_err();
        match id {
            _ if id < n => DomainNode::State(self.domain.reachable_states()[id]),
            _ if id == n => DomainNode::AgErr,
            _ => DomainNode::EnvErr,
        }
    }

    pub fn letter(&self, a: ActionId, r: ReactionId) -> usize {
        self.ts.alphabet().move_letter(a.0, r.0)
    }

    pub fn step(&self, id: usize, a: ActionId, r: ReactionId) -> usize {
        self.ts.step(id, self.letter(a, r))
    }
}

pub fn domain_to_dfa(domain: &Arc<Domain>) -> DomainDfa {
    let d = domain.as_ref();
    let n = d.reachable_states().len();
    let (ag_err, env_err) = (n, n + 1);
    let (na, nr) = (d.actions().len(), d.reactions().len());
    let mut delta = Vec::with_capacity((n + 2) * na * nr);
    for &s in d.reachable_states() {
        for a in 0..na {
            let applicable = d.moves(s).iter().any(|m| m.0 .0 == a);
            for r in 0..nr {
                let target = if !applicable {
                    ag_err
                } else {
                    match d.delta(s, ActionId(a), ReactionId(r)) {
                        Some(t) => d.state_index(t).expect("successors of reachable states are reachable"),
                        None => env_err,
                    }
                };
                delta.push(target);
            }
        }
    }
    delta.extend(std::iter::repeat_n(ag_err, na * nr));
    delta.extend(std::iter::repeat_n(env_err, na * nr));

    let mut labels: Vec<String> = d
        .reachable_states()
        .iter()
        .map(|&s| format!("{{{}}}", d.state_names(s).join(",")))
        .collect();
    labels.push("ag_err".into());
    labels.push("env_err".into());
    let alphabet = Alphabet::Moves {
        actions: d.actions().to_vec(),
        reactions: d.reactions().to_vec(),
    };
    let ts = TransitionSystem::new(alphabet, 0, delta, labels).expect("domain automaton is total");
    DomainDfa {
        domain: Arc::clone(domain),
        ts,
    }
}
