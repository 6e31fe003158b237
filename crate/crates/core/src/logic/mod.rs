//! Formulas of coalgebraic modal logic: syntax, parsing and evaluation.

mod eval;
mod formula;
mod parser;

pub use eval::{eval, extension};
pub use formula::{Formula, Modality};
pub use parser::{parse_formula, parse_unchecked, ParseError};
