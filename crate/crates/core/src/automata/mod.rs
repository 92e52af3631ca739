//! Deterministic transition systems and automata: the LTLf compiler,
//! synchronous products, lifting, minimization and DOT export.

mod bdd;
mod dot;
mod minimize;
mod progression;
mod ts;

pub use dot::{dfa_to_dot, ts_to_dot};
pub use minimize::minimize;
pub use progression::{to_dfa, to_dfa_with, Caps, Progression, Residual};
pub use ts::{product_ts, Alphabet, Dfa, Product, StateSet, TransitionSystem};
