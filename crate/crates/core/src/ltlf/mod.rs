//! LTLf formulas over named atoms: syntax, parsing, normalization, and the
//! direct finite-trace semantics used as ground truth everywhere else.

mod eval;
pub mod formula;
mod parser;

pub use eval::{evaluate, letter, parse_trace, Letter};
pub use formula::{is_identifier, Formula};
pub use parser::parse_formula;
