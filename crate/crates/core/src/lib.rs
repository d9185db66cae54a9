//! Evaluators, translations and decision procedures for a set-based
//! fragment of XQuery (RX and pure RX) and for the positive-existential
//! nested relational calculus with kind tests (PENRC[kind]).
//!
//! The crate is organized bottom-up:
//!
//! * [`value`]: complex values, RX items and environments, the sub-value
//!   order and the JSON value format;
//! * [`types`]: kinds, types, the numeric measures on types, and bounded
//!   enumeration of typed values;
//! * [`syntax`]: ASTs, the s-expression parser and printers, and removal of
//!   syntactic sugar;
//! * [`rx`] and [`nrc`]: evaluators reporting where and why an expression
//!   is undefined;
//! * [`translate`]: pure PERX into PENRC[kind], relational algebra into RX,
//!   dependency implication into RX, and emptiness tests into type switches;
//! * [`decide`]: small-model decision procedures and brute-force oracles.

pub mod decide;
pub mod nrc;
pub mod outcome;
pub mod rx;
pub mod syntax;
pub mod translate;
pub mod types;
pub mod value;

pub use outcome::{Outcome, Reason, Undefined};
pub use value::{Atom, Environment, Item, JsonForm, NrcValue, PureRxValue, RxNode, RxValue};
