//! First-order logic over the graph signature: syntax, parsing, the naive
//! Tarskian evaluator used as the correctness oracle, edge-atom rewriting,
//! and range measurement.

mod ast;
mod eval;
mod parse;
mod rewrite;

pub use ast::{Formula, Term};
pub use eval::{eval, Evaluator};
pub(crate) use rewrite::freshen_binders;
pub use rewrite::{range_of, rewrite_edges, RangeReport};
