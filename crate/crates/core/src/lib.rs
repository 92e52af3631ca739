pub mod arena;
pub mod automata;
pub mod cli;
pub mod domain;
pub mod error;
pub mod exec;
pub mod games;
pub mod ltlf;
pub mod oracle;
pub mod synthesis;

pub use error::{Error, Result};
