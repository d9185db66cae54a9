//! Translation of pure PERX expressions into PENRC[kind].

use thiserror::Error;

use crate::syntax::ast::{NrcExpr, PureRxExpr, XqExpr};
use crate::syntax::desugar::desugar;
use crate::translate::encode::{data_kind, elem_kind, translate_kind};
use crate::types::NrcKind;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("{0} is outside the positive-existential fragment and has no PENRC image")]
    NotPositiveExistential(&'static str),
}

/// Name of the variable bound by the comprehensions the translation
/// introduces. Its scope never contains a translated subexpression, so it
/// cannot capture.
const LOCAL: &str = "_i";

/// `e₁ ∈ κ → e₂`, i.e. `e₁ ∈ κ ? e₂ : π₁(∅)`.
fn guard(e: NrcExpr, k: NrcKind, then: NrcExpr) -> NrcExpr {
    NrcExpr::if_kind(e, k, then, NrcExpr::fst(NrcExpr::Empty))
}

fn data_enc(e: NrcExpr) -> NrcExpr {
    NrcExpr::pair(NrcExpr::pair(e.clone(), e), NrcExpr::Empty)
}

fn local() -> NrcExpr {
    NrcExpr::var(LOCAL)
}

/// Computes `e′` with `e(σ)` defined iff `e′(enc(σ))` is, and
/// `enc(e(σ)) = e′(enc(σ))` when defined. Sugar is removed first.
pub fn translate_expr(e: &PureRxExpr) -> Result<NrcExpr, TranslateError> {
    tr(&desugar(e))
}

fn tr(e: &PureRxExpr) -> Result<NrcExpr, TranslateError> {
    use XqExpr::*;
    Ok(match e {
        Var(x) => NrcExpr::Var(x.clone()),
        Atom(a) => NrcExpr::Atom(a.clone()),
        Text(x) => {
            let x = tr(x)?;
            guard(x.clone(), NrcKind::Atom, data_enc(x))
        }
        Elem(n, c) => {
            let n = tr(n)?;
            let wrap = NrcExpr::if_kind(local(), NrcKind::Atom, data_enc(local()), local());
            guard(n.clone(), NrcKind::Atom, NrcExpr::pair(n, NrcExpr::comp(wrap, LOCAL, tr(c)?)))
        }
        Data(x) => {
            let pick = NrcExpr::if_kind(
                local(),
                data_kind(),
                NrcExpr::sing(NrcExpr::fst(NrcExpr::fst(local()))),
                NrcExpr::if_kind(local(), NrcKind::Atom, NrcExpr::sing(local()), NrcExpr::Empty),
            );
            NrcExpr::flatten(NrcExpr::comp(pick, LOCAL, tr(x)?))
        }
        Name(x) => {
            let first = NrcExpr::fst(tr(x)?);
            guard(first.clone(), NrcKind::Atom, first)
        }
        Children(x) => NrcExpr::flatten(NrcExpr::comp(NrcExpr::snd(local()), LOCAL, tr(x)?)),
        Empty => NrcExpr::Empty,
        Single(x) => {
            let x = tr(x)?;
            let item = NrcKind::union(NrcKind::union(NrcKind::Atom, data_kind()), elem_kind());
            guard(x.clone(), item, NrcExpr::sing(x))
        }
        Seq(a, b) => NrcExpr::union(tr(a)?, tr(b)?),
        For { var, kind, source, body } => {
            let body = tr(body)?;
            let body = match kind {
                None => body,
                Some(k) => NrcExpr::if_kind(NrcExpr::Var(var.clone()), translate_kind(k), body, NrcExpr::Empty),
            };
            NrcExpr::flatten(NrcExpr::comp(body, var, tr(source)?))
        }
        IfEq(a, b, p, q) => NrcExpr::if_eq(tr(a)?, tr(b)?, tr(p)?, tr(q)?),
        IfEmpty(..) => return Err(TranslateError::NotPositiveExistential("an emptiness test")),
        IfType(..) => return Err(TranslateError::NotPositiveExistential("a type switch")),
        ForMany { .. } | If(..) => unreachable!("desugared"),
    })
}
