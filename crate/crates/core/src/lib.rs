//! A provenance-tracking update calculus.
//!
//! Processes over data tuples are rewritten by deep-inference rules
//! ([`engine`]); every interaction between a stored tuple and a consumer
//! leaves an artefact, and the causal order among artefacts is read back as
//! a "was derived from" diagram ([`provenance`]). Terms also denote ideals
//! of labelled series-parallel DAGs ([`denotation`], [`spdag`]), which gives
//! an independent decision procedure for the order the rules induce.

pub mod terms;
pub mod syntax;
pub mod congruence;
pub mod spdag;
pub mod denotation;
pub mod engine;
pub mod provenance;
pub mod generate;
pub mod cli;

pub use syntax::{parse_process, parse_triples, print_process, ParseError, SourceSpan};
pub use terms::{Atom, Label, Name, Polarity, Process, Sort, Tuple, Valuation, Variable};
