//! Decision procedures by small-model enumeration: well-definedness,
//! semantic type-checking and satisfiability for PENRC[kind], their lifting
//! to pure PERX, and brute-force oracles with caller-chosen bounds.

use std::time::Duration;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::translate::TranslateError;
use crate::types::TypeError;
use crate::value::{Environment, JsonForm};

pub mod brute;
pub mod penrc;
pub mod pure;
pub mod search;

pub use brute::{brute_force_pure_verdict, brute_force_verdict, bounded_rx_verdict, Mode, PureMode, RxMode};
pub use penrc::{
    satisfiable_penrc, satisfiable_penrc_with, typecheck_penrc, typecheck_penrc_with, well_defined_penrc,
    well_defined_penrc_with,
};
pub use pure::{typecheck_pure_rx, typecheck_pure_rx_with, well_defined_pure_rx, well_defined_pure_rx_with};

/// Search budgets.
#[derive(Clone, Debug)]
pub struct Config {
    /// Largest number of environments a search may enumerate.
    pub max_envs: u64,
    pub timeout: Duration,
    /// Skip environments whose fresh atoms are not an initial segment of
    /// the fresh-atom block; they are renamings of ones that are.
    pub prune: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { max_envs: 1_000_000, timeout: Duration::from_secs(60), prune: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Set-cardinality bound of the enumerated environments.
    pub card: BigUint,
    /// Size of the atom set (literals and fresh atoms).
    pub atoms: BigUint,
    /// Environments actually examined.
    pub examined: u64,
}

/// The answer of a decision procedure. For well-definedness and
/// type-checking a counterexample accompanies every negative answer; for
/// satisfiability the environment is a witness accompanying a positive one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<V> {
    pub result: bool,
    pub counterexample: Option<Environment<V>>,
    pub bounds: Bounds,
}

fn big_json(n: &BigUint) -> Json {
    match n.to_u64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

impl<V: JsonForm> Verdict<V> {
    pub fn to_json(&self) -> Json {
        json!({
            "result": self.result,
            "counterexample": self.counterexample.as_ref().map(JsonForm::to_json),
            "bounds": {
                "card": big_json(&self.bounds.card),
                "atoms": big_json(&self.bounds.atoms),
                "examined": self.bounds.examined,
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error(
        "the expression uses an emptiness test; with it the problem is undecidable, \
         so only PENRC[kind] inputs are accepted"
    )]
    FullNrc,
    #[error("free variable `{0}` has no type in the type assignment")]
    UnboundVariable(String),
    #[error("the expression is not well-defined under the type assignment (counterexample {0})")]
    NotWellDefined(String),
    #[error("search space holds {needed} environments, budget is {budget}")]
    BudgetExceeded { needed: BigUint, budget: u64 },
    #[error("timed out after examining {examined} environments")]
    Timeout { examined: u64 },
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Type(#[from] TypeError),
}
