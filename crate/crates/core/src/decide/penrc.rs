//! The PENRC[kind] decision procedures.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::decide::search::{self, Problem};
use crate::decide::{Bounds, Config, DecideError, Verdict};
use crate::nrc::{complexity, eval_penrc, undefinedness_bound};
use crate::syntax::ast::NrcExpr;
use crate::types::{rank, type_complexity, NrcType, Space, TypeAssignment};
use crate::value::{Atom, Environment, NrcValue};

/// Restricts `gamma` to the free variables of `e`, failing on any that is
/// missing.
pub(crate) fn restrict<T: Clone>(e_free: &BTreeSet<String>, gamma: &TypeAssignment<T>) -> Result<TypeAssignment<T>, DecideError> {
    e_free
        .iter()
        .map(|x| gamma.get(x).map(|t| (x.clone(), t.clone())).ok_or_else(|| DecideError::UnboundVariable(x.clone())))
        .collect()
}

/// A search at cardinality `card` over the literals of `e` and
/// `Σₓ rank(rank_types(x), card)` fresh atoms.
pub(crate) struct Plan<'a> {
    pub literals: BTreeSet<Atom>,
    pub rank_types: &'a TypeAssignment<NrcType>,
    pub spaces: BTreeMap<String, Space>,
    pub card: BigUint,
}

impl Plan<'_> {
    pub(crate) fn run(
        self,
        fails: &(dyn Fn(&Environment<NrcValue>) -> bool + Sync),
        config: &Config,
    ) -> Result<(Option<Environment<NrcValue>>, Bounds), DecideError> {
        let fresh: BigUint = self.rank_types.values().map(|t| rank(t, &self.card)).sum();
        // More fresh atoms than the budget allows can never be enumerated
        // completely; the clamp keeps the search in range and it reports
        // the overrun itself.
        let usable = fresh.to_usize().map_or(usize::MAX, |n| n).min(config.max_envs.saturating_add(1) as usize);
        let problem = Problem {
            spaces: self.spaces,
            literals: self.literals,
            card: self.card.to_usize().unwrap_or(usize::MAX),
            fresh: usable,
            fails,
        };
        let found = search::run(&problem, config, true)?;
        let bounds = Bounds {
            card: self.card,
            atoms: fresh + BigUint::from(problem.literals.len()),
            examined: found.examined,
        };
        let cex = found.counterexample.map(|env| search::minimize(env, &problem));
        Ok((cex, bounds))
    }
}

fn check_penrc(e: &NrcExpr) -> Result<(), DecideError> {
    if e.is_penrc() {
        Ok(())
    } else {
        Err(DecideError::FullNrc)
    }
}

fn spaces_of(gamma: &TypeAssignment<NrcType>) -> BTreeMap<String, Space> {
    gamma.iter().map(|(x, t)| (x.clone(), Space::from(t))).collect()
}

/// The cardinality bound for well-definedness: `max(c(e, 1), u(e))`.
pub fn well_defined_card(e: &NrcExpr) -> BigUint {
    complexity(e, &BigUint::one()).max(undefinedness_bound(e))
}

pub fn well_defined_penrc(e: &NrcExpr, gamma: &TypeAssignment<NrcType>) -> Result<Verdict<NrcValue>, DecideError> {
    well_defined_penrc_with(e, gamma, &Config::default())
}

/// Decides whether `e(σ)` is defined for every `σ` compatible with `gamma`.
pub fn well_defined_penrc_with(
    e: &NrcExpr,
    gamma: &TypeAssignment<NrcType>,
    config: &Config,
) -> Result<Verdict<NrcValue>, DecideError> {
    check_penrc(e)?;
    let gamma = restrict(&e.free_vars(), gamma)?;
    let plan = Plan { literals: e.literals(), rank_types: &gamma, spaces: spaces_of(&gamma), card: well_defined_card(e) };
    let fails = |env: &Environment<NrcValue>| eval_penrc(e, env).is_err();
    let (cex, bounds) = plan.run(&fails, config)?;
    Ok(Verdict { result: cex.is_none(), counterexample: cex, bounds })
}

pub fn typecheck_penrc(
    e: &NrcExpr,
    gamma: &TypeAssignment<NrcType>,
    tau: &NrcType,
) -> Result<Verdict<NrcValue>, DecideError> {
    typecheck_penrc_with(e, gamma, tau, &Config::default())
}

/// Decides whether `e(σ) ∈ tau` for every `σ` compatible with `gamma`.
/// Fails with [`DecideError::NotWellDefined`] unless `e` is well-defined.
pub fn typecheck_penrc_with(
    e: &NrcExpr,
    gamma: &TypeAssignment<NrcType>,
    tau: &NrcType,
    config: &Config,
) -> Result<Verdict<NrcValue>, DecideError> {
    let wd = well_defined_penrc_with(e, gamma, config)?;
    if let Some(cex) = wd.counterexample {
        return Err(DecideError::NotWellDefined(cex.to_string()));
    }
    let gamma = restrict(&e.free_vars(), gamma)?;
    let card = complexity(e, &type_complexity(tau));
    let plan = Plan { literals: e.literals(), rank_types: &gamma, spaces: spaces_of(&gamma), card };
    let fails = |env: &Environment<NrcValue>| eval_penrc(e, env).map_or(true, |v| !tau.contains(&v));
    let (cex, bounds) = plan.run(&fails, config)?;
    Ok(Verdict { result: cex.is_none(), counterexample: cex, bounds })
}

pub fn satisfiable_penrc(e: &NrcExpr, gamma: &TypeAssignment<NrcType>) -> Result<Verdict<NrcValue>, DecideError> {
    satisfiable_penrc_with(e, gamma, &Config::default())
}

/// Decides whether some `σ` compatible with `gamma` gives `e` a nonempty
/// output, i.e. whether `coll(∅)` fails to be an output type. A positive
/// answer carries the witness environment.
pub fn satisfiable_penrc_with(
    e: &NrcExpr,
    gamma: &TypeAssignment<NrcType>,
    config: &Config,
) -> Result<Verdict<NrcValue>, DecideError> {
    let empty_only = NrcType::coll(NrcType::Void);
    let v = typecheck_penrc_with(e, gamma, &empty_only, config)?;
    Ok(Verdict { result: !v.result, counterexample: v.counterexample, bounds: v.bounds })
}
