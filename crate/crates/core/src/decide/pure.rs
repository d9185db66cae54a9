//! Pure PERX decisions, obtained by translating into PENRC[kind].
//!
//! Only encodings of pure RX values are enumerated. Sub-values of an
//! encoding are again encodings, so the small-model argument carries over
//! to this restricted search unchanged.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::decide::penrc::{restrict, well_defined_card, Plan};
use crate::decide::{Config, DecideError, Verdict};
use crate::nrc::{complexity, eval_penrc};
use crate::syntax::ast::PureRxExpr;
use crate::translate::encode::decode_env;
use crate::translate::{decode_pure, translate_expr, translate_type};
use crate::types::{type_complexity, NrcType, PureRxType, Space, TypeAssignment};
use crate::value::{Environment, NrcValue, PureRxValue};

struct Lifted {
    expr: crate::syntax::ast::NrcExpr,
    types: TypeAssignment<NrcType>,
    spaces: BTreeMap<String, Space>,
}

fn lift(e: &PureRxExpr, gamma: &TypeAssignment<PureRxType>) -> Result<Lifted, DecideError> {
    let gamma = restrict(&e.free_vars(), gamma)?;
    for t in gamma.values() {
        t.check()?;
    }
    Ok(Lifted {
        expr: translate_expr(e)?,
        types: gamma.iter().map(|(x, t)| (x.clone(), translate_type(t))).collect(),
        spaces: gamma.iter().map(|(x, t)| (x.clone(), Space::of_pure(t))).collect(),
    })
}

fn decode(cex: Option<Environment<NrcValue>>) -> Option<Environment<PureRxValue>> {
    cex.map(|env| decode_env(&env).expect("enumerated environments are encodings"))
}

pub fn well_defined_pure_rx(
    e: &PureRxExpr,
    gamma: &TypeAssignment<PureRxType>,
) -> Result<Verdict<PureRxValue>, DecideError> {
    well_defined_pure_rx_with(e, gamma, &Config::default())
}

pub fn well_defined_pure_rx_with(
    e: &PureRxExpr,
    gamma: &TypeAssignment<PureRxType>,
    config: &Config,
) -> Result<Verdict<PureRxValue>, DecideError> {
    let l = lift(e, gamma)?;
    let card = well_defined_card(&l.expr);
    let plan = Plan { literals: l.expr.literals(), rank_types: &l.types, spaces: l.spaces, card };
    let fails = |env: &Environment<NrcValue>| eval_penrc(&l.expr, env).is_err();
    let (cex, bounds) = plan.run(&fails, config)?;
    Ok(Verdict { result: cex.is_none(), counterexample: decode(cex), bounds })
}

pub fn typecheck_pure_rx(
    e: &PureRxExpr,
    gamma: &TypeAssignment<PureRxType>,
    tau: &PureRxType,
) -> Result<Verdict<PureRxValue>, DecideError> {
    typecheck_pure_rx_with(e, gamma, tau, &Config::default())
}

pub fn typecheck_pure_rx_with(
    e: &PureRxExpr,
    gamma: &TypeAssignment<PureRxType>,
    tau: &PureRxType,
    config: &Config,
) -> Result<Verdict<PureRxValue>, DecideError> {
    tau.check()?;
    let wd = well_defined_pure_rx_with(e, gamma, config)?;
    if let Some(cex) = wd.counterexample {
        return Err(DecideError::NotWellDefined(cex.to_string()));
    }
    let l = lift(e, gamma)?;
    let k: BigUint = type_complexity(&translate_type(tau));
    let card = complexity(&l.expr, &k);
    let plan = Plan { literals: l.expr.literals(), rank_types: &l.types, spaces: l.spaces, card };
    let fails = |env: &Environment<NrcValue>| match eval_penrc(&l.expr, env) {
        Ok(v) => !decode_pure(&v).is_some_and(|w| tau.contains(&w)),
        Err(_) => true,
    };
    let (cex, bounds) = plan.run(&fails, config)?;
    Ok(Verdict { result: cex.is_none(), counterexample: decode(cex), bounds })
}
