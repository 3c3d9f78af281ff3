//! Model checking for first-order logic on interpretations of graph classes,
//! built around guarded flips.
//!
//! The crate decomposes into:
//!
//! - [`graph`]: finite colored graphs, BFS metrics, balls, induced subgraphs,
//!   and flip operations over labeled partitions.
//! - [`logic`]: FO syntax, a parser, a memoizing Tarskian evaluator (the
//!   correctness oracle throughout), edge-atom rewriting, and formula range
//!   measurement.
//! - [`interpret`]: simple interpretations `I_{phi,delta}` mapping colored
//!   graphs to plain graphs.
//! - [`vc`]: VC dimension, shatter functions, and minimum-order duality
//!   witnesses for finite binary relations.
//! - [`locality`]: partitions under which a pair relation is generic on all
//!   far pairs, and a refinement procedure computing them.
//! - [`slemma`]: the witness-set construction (large/small cells, splitting,
//!   per-cell-pair dualities) and its brute-force verifier at radius `5r`.
//! - [`flipdecomp`]: guarded flip decompositions `F(H) = I_{psi,delta}(Ghat)`
//!   with a bounded-range formula `psi`.
//! - [`cliquewidth`]: k-expressions, exact cliquewidth for small graphs, and
//!   local cliquewidth.
//! - [`pipeline`]: the (S,R)-candidate model checking loop, cross-checked
//!   against the naive evaluator.
//! - [`gen`] and [`suite`]: graph generators, the default corpus, and the
//!   acceptance checks run by the CLI `suite` subcommand.
//!
//! With the default `parallel` feature the hot scans run on rayon; without it
//! every operation falls back to equivalent sequential loops. Results are
//! identical in both modes.

pub mod bitset;
pub mod cliquewidth;
pub mod error;
pub mod flipdecomp;
pub mod gen;
pub mod graph;
pub mod interpret;
pub mod locality;
pub mod logic;
mod par;
pub mod pipeline;
pub mod slemma;
pub mod suite;
pub mod vc;

pub use error::{Error, Result};
