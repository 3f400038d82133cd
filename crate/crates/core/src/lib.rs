//! A constructor pattern calculus with a constructive standardisation engine.
//!
//! The calculus extends the lambda calculus with constants and constructor
//! patterns: an abstraction binds a pattern, and beta fires only when the
//! argument matches it. On top of the calculus this crate provides
//!
//! - matching and its substitution algebra ([`matching`], [`subst`]),
//! - one-step reduction by position and fueled tracing ([`reduction`]),
//! - the head-step relation and its pattern-relative refinement ([`head`]),
//! - developments, internal developments and their proof trees ([`dev`]),
//! - splitting of developments into head steps plus an internal remainder
//!   ([`hsplit`]),
//! - the standardisation engine and a checker for the standard-sequence
//!   grammar ([`standardisation`]),
//! - exhaustive enumeration of terms, patterns and reduction chains with
//!   brute-force validators ([`oracle`]), and a property suite ([`props`]).
//!
//! Every relation comes with replayable derivation trees: proofs print in an
//! S-expression style and re-validate against the rules that produced them.
//!
//! See the crate examples for runnable tours of each capability:
//!
//! ```bash
//! cargo run --example matching
//! cargo run --example head_steps
//! cargo run --example reduction_trace
//! cargo run --example developments
//! cargo run --example h_split
//! cargo run --example standardise
//! cargo run --example enumerate
//! ```
//!
//! The `patcalc` binary exposes the same functionality as a command line
//! tool; `patcalc verify` runs the full property suite.

pub mod cli;
pub mod dev;
pub mod error;
pub mod head;
pub mod hsplit;
pub mod matching;
pub mod oracle;
pub mod parser;
pub mod props;
pub mod reduction;
pub mod standardisation;
pub mod subst;
pub mod syntax;

pub use dev::{
    match_after_dev, subst_apply_dev, DevProof, DevSearch, IntDevProof, PatIntDevProof,
    SubstDevProof,
};
pub use error::{Error, Result};
pub use head::{
    head_reduce_star, head_step, pattern_head_reduce_star, pattern_head_step, HeadJust, PatJust,
};
pub use hsplit::{h_split, h_split_pattern, HSplit, PatHSplit};
pub use matching::{match_pattern, match_under_subst, matches, MatchOutcome};
pub use oracle::UniverseConfig;
pub use parser::{parse_pattern, parse_term};
pub use reduction::{
    redex_positions, reduce_fuelled, step_at, Dir, Position, StepRecord, Strategy,
};
pub use standardisation::{
    bifurcate, check_standard, commute_head, postpone, postpone_pattern, standardise,
    standardise_reduction, step_to_development, StdProof, StdSequence,
};
pub use subst::Subst;
pub use syntax::{alpha_eq, DataPattern, Ident, Pattern, Term};
