use std::sync::Arc;

use crate::automata::TransitionSystem;
use crate::error::{Error, Result};

/// A positional strategy executed over its transition system. An undefined
/// output means the strategy ends the play.
#[derive(Debug, Clone)]
pub struct Transducer {
    ts: Arc<TransitionSystem>,
    strategy: Arc<Vec<Option<usize>>>,
    current: usize,
    stopped: bool,
}

pub fn extract_transducer(ts: Arc<TransitionSystem>, strategy: Arc<Vec<Option<usize>>>) -> Transducer {
    assert_eq!(strategy.len(), ts.num_states(), "strategy over a different state space");
    let current = ts.initial();
    Transducer {
        ts,
        strategy,
        current,
        stopped: false,
    }
}

impl Transducer {
    pub fn state(&self) -> usize {
        self.current
    }

    pub fn is_stopped(&self) -> bool {
        self.stopped
    }

    /// The current action, or `None` to stop. Stopping is final.
    pub fn output(&mut self) -> Option<usize> {
        if self.stopped {
            return None;
        }
        let out = self.strategy[self.current];
        self.stopped = out.is_none();
        out
    }

    pub fn advance(&mut self, action: usize, reaction: usize) -> Result<()> {
        if self.stopped {
            return Err(Error::Stopped);
        }
        let (na, nr) = super::reach::move_dims(&self.ts);
        if action >= na || reaction >= nr {
            return Err(Error::LetterOutOfRange(action * nr + reaction));
        }
        self.current = self.ts.step(self.current, action * nr + reaction);
        Ok(())
    }
}
