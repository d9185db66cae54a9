//! PENRC[kind] evaluation and the cardinality measures used by the
//! decision procedures.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::outcome::{at, Outcome, Reason, Scope, Stuck};
use crate::syntax::ast::NrcExpr;
use crate::value::{Environment, NrcValue};

/// Why a PENRC expression is undefined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NrcReason {
    ProjOnNonPair,
    UnionOnNonSet,
    FlattenOnNonSetOfSets,
    EqOnNonAtom,
    ComprehensionOnNonSet,
}

impl Reason for NrcReason {
    fn code(self) -> &'static str {
        match self {
            NrcReason::ProjOnNonPair => "proj-on-nonpair",
            NrcReason::UnionOnNonSet => "union-on-nonset",
            NrcReason::FlattenOnNonSetOfSets => "flatten-on-nonset-of-sets",
            NrcReason::EqOnNonAtom => "eq-on-nonatom",
            NrcReason::ComprehensionOnNonSet => "comprehension-on-nonset",
        }
    }
}

type Step = Result<NrcValue, Stuck<NrcReason>>;

fn set_of(v: &NrcValue, why: NrcReason) -> Result<&BTreeSet<NrcValue>, Stuck<NrcReason>> {
    v.as_set().ok_or_else(|| Stuck::here(why))
}

fn eval<'e>(e: &'e NrcExpr, s: &mut Scope<'e, NrcValue>) -> Step {
    use NrcExpr::*;
    use NrcReason as R;
    Ok(match e {
        Var(x) => s.lookup(x).clone(),
        Atom(a) => NrcValue::Atom(a.clone()),
        Pair(a, b) => NrcValue::pair(at(0, eval(a, s))?, at(1, eval(b, s))?),
        Fst(x) | Snd(x) => {
            let v = at(0, eval(x, s))?;
            let (l, r) = v.as_pair().ok_or_else(|| Stuck::here(R::ProjOnNonPair))?;
            if matches!(e, Fst(_)) { l.clone() } else { r.clone() }
        }
        Empty => NrcValue::empty(),
        Sing(x) => NrcValue::set([at(0, eval(x, s))?]),
        Union(a, b) => {
            let l = at(0, eval(a, s))?;
            let r = at(1, eval(b, s))?;
            let mut out = set_of(&l, R::UnionOnNonSet)?.clone();
            out.extend(set_of(&r, R::UnionOnNonSet)?.iter().cloned());
            NrcValue::set(out)
        }
        Flatten(x) => {
            let v = at(0, eval(x, s))?;
            let mut out = BTreeSet::new();
            for inner in set_of(&v, R::FlattenOnNonSetOfSets)? {
                out.extend(set_of(inner, R::FlattenOnNonSetOfSets)?.iter().cloned());
            }
            NrcValue::set(out)
        }
        For { var, source, body } => {
            let src = at(0, eval(source, s))?;
            let mut out = BTreeSet::new();
            for v in set_of(&src, R::ComprehensionOnNonSet)? {
                s.push(var, v.clone());
                let r = at(1, eval(body, s));
                s.pop();
                out.insert(r?);
            }
            NrcValue::set(out)
        }
        IfEq(a, b, p, q) => {
            let x = at(0, eval(a, s))?;
            let y = at(1, eval(b, s))?;
            if x.as_atom().is_none() || y.as_atom().is_none() {
                return Err(Stuck::here(R::EqOnNonAtom));
            }
            if x == y {
                at(2, eval(p, s))?
            } else {
                at(3, eval(q, s))?
            }
        }
        IfKind(a, k, p, q) => {
            if k.contains(&at(0, eval(a, s))?) {
                at(1, eval(p, s))?
            } else {
                at(2, eval(q, s))?
            }
        }
        IfEmpty(a, p, q) => {
            let empty = at(0, eval(a, s))?.as_set().is_some_and(BTreeSet::is_empty);
            if empty {
                at(1, eval(p, s))?
            } else {
                at(2, eval(q, s))?
            }
        }
    })
}

/// Evaluates a PENRC[kind] expression (the emptiness test of full NRC is
/// accepted too). Every free variable must be bound in `env`.
pub fn eval_penrc(e: &NrcExpr, env: &Environment<NrcValue>) -> Outcome<NrcValue, NrcReason> {
    eval(e, &mut Scope::new(env)).map_err(Stuck::finish)
}

/// The k-complexity `c(e, k)`: if `u ∈ V_k` lies below `e(σ)`, some
/// `σ' ⊑ σ` in `E_{c(e,k)}` already produces a value above `u`.
pub fn complexity(e: &NrcExpr, k: &BigUint) -> BigUint {
    use NrcExpr::*;
    match e {
        Var(_) => k.clone(),
        Atom(_) | Empty => BigUint::zero(),
        Pair(a, b) | Union(a, b) => complexity(a, k) + complexity(b, k),
        Fst(x) | Snd(x) | Flatten(x) => complexity(x, k),
        Sing(x) => k * complexity(x, k),
        For { source, body, .. } => {
            let cb = complexity(body, k);
            complexity(source, &cb.clone().max(k.clone())) + k * cb
        }
        IfEq(_, _, p, q) | IfKind(_, _, p, q) => complexity(p, k).max(complexity(q, k)),
        IfEmpty(a, p, q) => complexity(a, k).max(complexity(p, k)).max(complexity(q, k)),
    }
}

/// A set-cardinality bound `u(e)` for undefinedness: whenever `e(σ)` is
/// undefined, some `σ' ⊑ σ` in `E_{u(e)}` makes it undefined too. Unlike
/// `c(e, 1)` it accounts for failures inside the test operands of
/// conditionals.
pub fn undefinedness_bound(e: &NrcExpr) -> BigUint {
    use NrcExpr::*;
    let one = BigUint::one();
    match e {
        Var(_) | Atom(_) | Empty => BigUint::zero(),
        Pair(a, b) | Union(a, b) => undefinedness_bound(a).max(undefinedness_bound(b)),
        Fst(x) | Snd(x) | Sing(x) => undefinedness_bound(x),
        Flatten(x) => undefinedness_bound(x).max(complexity(x, &one)),
        For { source, body, .. } => {
            let ub = undefinedness_bound(body);
            let reach = complexity(source, &ub.clone().max(one)) + ub;
            undefinedness_bound(source).max(reach)
        }
        IfEq(..) | IfKind(..) | IfEmpty(..) => {
            e.children().into_iter().map(undefinedness_bound).max().unwrap_or_default()
        }
    }
}
