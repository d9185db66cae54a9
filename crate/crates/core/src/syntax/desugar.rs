//! Elimination of the two surface conveniences of RX and pure RX: loops
//! binding several variables, and boolean combinations of equality tests.

use crate::syntax::ast::{Cond, XqExpr};

/// Rewrites `e` into core constructors only. Core expressions are returned
/// unchanged.
pub fn desugar<T: Clone>(e: &XqExpr<T>) -> XqExpr<T> {
    use XqExpr::*;
    let d = |e: &XqExpr<T>| Box::new(desugar(e));
    match e {
        Var(_) | Atom(_) | Empty => e.clone(),
        Text(x) => Text(d(x)),
        Data(x) => Data(d(x)),
        Name(x) => Name(d(x)),
        Children(x) => Children(d(x)),
        Single(x) => Single(d(x)),
        Elem(x, y) => Elem(d(x), d(y)),
        Seq(x, y) => Seq(d(x), d(y)),
        For { var, kind, source, body } => For { var: var.clone(), kind: kind.clone(), source: d(source), body: d(body) },
        ForMany { bindings, kind, body } => {
            bindings.iter().rev().fold(desugar(body), |inner, (x, s)| For {
                var: x.clone(),
                kind: kind.clone(),
                source: d(s),
                body: Box::new(inner),
            })
        }
        IfEq(a, b, c, e4) => IfEq(d(a), d(b), d(c), d(e4)),
        IfEmpty(a, b, c) => IfEmpty(d(a), d(b), d(c)),
        IfType(a, t, b, c) => IfType(d(a), t.clone(), d(b), d(c)),
        If(c, p, q) => expand(c, desugar(p), desugar(q)),
    }
}

/// `if c then p else q`, with the condition's subexpressions desugared.
fn expand<T: Clone>(c: &Cond<T>, p: XqExpr<T>, q: XqExpr<T>) -> XqExpr<T> {
    match c {
        Cond::Eq(l, r) => XqExpr::if_eq(desugar(l), desugar(r), p, q),
        Cond::Ne(l, r) => XqExpr::if_eq(desugar(l), desugar(r), q, p),
        Cond::And(cs) => cs.iter().rev().fold(p, |inner, c| expand(c, inner, q.clone())),
        Cond::Or(cs) => cs.iter().rev().fold(q, |inner, c| expand(c, p.clone(), inner)),
    }
}
