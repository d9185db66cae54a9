//! Elimination of emptiness tests from RX in favour of type switches.

use crate::syntax::ast::{RxExpr, XqExpr};
use crate::types::RxType;

/// Element name produced for each item of a tested sequence.
pub const PROBE_TAG: &str = "@t";

const PROBE_VAR: &str = "_e";

/// Replaces every `if e₁ = ∅ then e₂ else e₃` by
/// `iftype (for _e in e₁ return elem{"@t"}{()}) coll(data) e₂ e₃`.
///
/// The loop body is closed, so its binder captures nothing. The loop
/// yields `∅` (which has type `coll(data)`) when `e₁` is empty and an
/// element node otherwise, and it is undefined exactly when `e₁` is.
pub fn desugar_emptiness(e: &RxExpr) -> RxExpr {
    use XqExpr::*;
    let d = |e: &RxExpr| Box::new(desugar_emptiness(e));
    match e {
        Var(_) | Atom(_) | Empty => e.clone(),
        Text(x) => Text(d(x)),
        Data(x) => Data(d(x)),
        Name(x) => Name(d(x)),
        Children(x) => Children(d(x)),
        Single(x) => Single(d(x)),
        Elem(x, y) => Elem(d(x), d(y)),
        Seq(x, y) => Seq(d(x), d(y)),
        For { var, kind, source, body } => {
            For { var: var.clone(), kind: kind.clone(), source: d(source), body: d(body) }
        }
        ForMany { bindings, kind, body } => ForMany {
            bindings: bindings.iter().map(|(x, s)| (x.clone(), desugar_emptiness(s))).collect(),
            kind: kind.clone(),
            body: d(body),
        },
        IfEq(a, b, c, e4) => IfEq(d(a), d(b), d(c), d(e4)),
        IfEmpty(a, b, c) => {
            let marks = XqExpr::for_in(
                PROBE_VAR,
                None,
                desugar_emptiness(a),
                XqExpr::elem(XqExpr::Atom(crate::value::Atom::named(PROBE_TAG)), XqExpr::Empty),
            );
            XqExpr::if_type(marks, RxType::coll(RxType::Data), desugar_emptiness(b), desugar_emptiness(c))
        }
        IfType(a, t, b, c) => IfType(d(a), t.clone(), d(b), d(c)),
        If(c, p, q) => If(Box::new(map_cond(c)), d(p), d(q)),
    }
}

fn map_cond(c: &crate::syntax::ast::Cond<RxType>) -> crate::syntax::ast::Cond<RxType> {
    use crate::syntax::ast::Cond;
    match c {
        Cond::Eq(l, r) => Cond::Eq(desugar_emptiness(l), desugar_emptiness(r)),
        Cond::Ne(l, r) => Cond::Ne(desugar_emptiness(l), desugar_emptiness(r)),
        Cond::And(cs) => Cond::And(cs.iter().map(map_cond).collect()),
        Cond::Or(cs) => Cond::Or(cs.iter().map(map_cond).collect()),
    }
}
