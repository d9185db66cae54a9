//! Exhaustive checks with caller-chosen bounds.
//!
//! These scan the whole space in one pass without pruning, layering or
//! minimization, and serve as an independent reference for the decision
//! procedures and for RX questions that have no decision procedure.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::decide::search::{self, Problem};
use crate::decide::{Bounds, Config, DecideError, Verdict};
use crate::nrc::eval_penrc;
use crate::rx::{eval_pure_rx, eval_rx, Oracles};
use crate::syntax::ast::{NrcExpr, PureRxExpr, RxExpr};
use crate::translate::encode::{decode_env, decode_rx};
use crate::types::{NrcType, PureRxType, RxType, Space, TypeAssignment};
use crate::value::{Atom, Environment, NrcValue, PureRxValue, RxValue};

/// What [`brute_force_verdict`] looks for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    WellDefined,
    Type(NrcType),
    /// Positive when some environment yields a nonempty output.
    Satisfiable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PureMode {
    WellDefined,
    Type(PureRxType),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RxMode {
    WellDefined,
    Type(RxType),
}

fn scan(
    spaces: BTreeMap<String, Space>,
    literals: std::collections::BTreeSet<Atom>,
    card: usize,
    fresh: usize,
    fails: &(dyn Fn(&Environment<NrcValue>) -> bool + Sync),
    config: &Config,
) -> Result<(Option<Environment<NrcValue>>, Bounds), DecideError> {
    let n_literals = literals.len();
    let problem = Problem { spaces, literals, card, fresh, fails };
    let config = Config { prune: false, ..config.clone() };
    let found = search::run(&problem, &config, false)?;
    let bounds = Bounds {
        card: BigUint::from(card),
        atoms: BigUint::from(n_literals + fresh),
        examined: found.examined,
    };
    Ok((found.counterexample, bounds))
}

fn spaces<T>(
    free: &std::collections::BTreeSet<String>,
    gamma: &TypeAssignment<T>,
    space: impl Fn(&T) -> Space,
) -> Result<BTreeMap<String, Space>, DecideError> {
    free.iter()
        .map(|x| {
            gamma.get(x).map(|t| (x.clone(), space(t))).ok_or_else(|| DecideError::UnboundVariable(x.clone()))
        })
        .collect()
}

/// Scans every environment compatible with `gamma` whose sets have at most
/// `card` elements and whose atoms are the literals of `e` plus `fresh`
/// fresh atoms. The first failure in canonical order is reported as is.
pub fn brute_force_verdict(
    e: &NrcExpr,
    gamma: &TypeAssignment<NrcType>,
    mode: &Mode,
    card: usize,
    fresh: usize,
    config: &Config,
) -> Result<Verdict<NrcValue>, DecideError> {
    let spaces = spaces(&e.free_vars(), gamma, |t| Space::from(t))?;
    let fails = |env: &Environment<NrcValue>| match (mode, eval_penrc(e, env)) {
        (Mode::WellDefined, r) => r.is_err(),
        (Mode::Type(t), r) => r.map_or(true, |v| !t.contains(&v)),
        (Mode::Satisfiable, r) => r.is_ok_and(|v| v != NrcValue::empty()),
    };
    let (cex, bounds) = scan(spaces, e.literals(), card, fresh, &fails, config)?;
    let result = match mode {
        Mode::Satisfiable => cex.is_some(),
        _ => cex.is_none(),
    };
    Ok(Verdict { result, counterexample: cex, bounds })
}

/// [`brute_force_verdict`] for pure RX, evaluated directly.
pub fn brute_force_pure_verdict(
    e: &PureRxExpr,
    gamma: &TypeAssignment<PureRxType>,
    mode: &PureMode,
    card: usize,
    fresh: usize,
    config: &Config,
) -> Result<Verdict<PureRxValue>, DecideError> {
    let spaces = spaces(&e.free_vars(), gamma, Space::of_pure)?;
    let fails = |env: &Environment<NrcValue>| {
        let env = decode_env(env).expect("enumerated environments are encodings");
        match (mode, eval_pure_rx(e, &env)) {
            (PureMode::WellDefined, r) => r.is_err(),
            (PureMode::Type(t), r) => r.map_or(true, |v| !t.contains(&v)),
        }
    };
    let (cex, bounds) = scan(spaces, e.literals(), card, fresh, &fails, config)?;
    let cex = cex.map(|env| decode_env(&env).expect("enumerated environments are encodings"));
    Ok(Verdict { result: cex.is_none(), counterexample: cex, bounds })
}

fn decode_rx_env(env: &Environment<NrcValue>) -> Environment<RxValue> {
    env.map(|v| decode_rx(v).expect("enumerated values encode RX values"))
}

/// Bounded exhaustive check of an RX expression. RX well-definedness is
/// undecidable in general, so this only covers the given bounds.
pub fn bounded_rx_verdict(
    e: &RxExpr,
    gamma: &TypeAssignment<RxType>,
    mode: &RxMode,
    card: usize,
    fresh: usize,
    oracles: &dyn Oracles,
    config: &Config,
) -> Result<Verdict<RxValue>, DecideError> {
    for t in gamma.values() {
        t.check()?;
    }
    let spaces = spaces(&e.free_vars(), gamma, Space::of_rx)?;
    let fails = |env: &Environment<NrcValue>| match (mode, eval_rx(e, &decode_rx_env(env), oracles)) {
        (RxMode::WellDefined, r) => r.is_err(),
        (RxMode::Type(t), r) => r.map_or(true, |v| !t.contains(&v)),
    };
    let (cex, bounds) = scan(spaces, e.literals(), card, fresh, &fails, config)?;
    let cex = cex.map(|env| decode_rx_env(&env));
    Ok(Verdict { result: cex.is_none(), counterexample: cex, bounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::well_defined_penrc;
    use crate::syntax::parse::{parse_gamma, parse_penrc};

    #[test]
    fn agrees_with_the_decision_procedure_on_projection() {
        let e = parse_penrc("(fst x)").unwrap().expr;
        for g in ["(x (prod (atom) (atom)))", "(x (coll (atom)))", "(x (sum (atom) (prod (atom) (atom))))"] {
            let g: TypeAssignment<NrcType> = parse_gamma(g).unwrap();
            let fast = well_defined_penrc(&e, &g).unwrap();
            let slow = brute_force_verdict(&e, &g, &Mode::WellDefined, 2, 2, &Config::default()).unwrap();
            assert_eq!(fast.result, slow.result);
        }
    }
}
