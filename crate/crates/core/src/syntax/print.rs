//! Rendering of ASTs, types and kinds in the s-expression syntax accepted
//! by [`crate::syntax::parse`].

use crate::syntax::ast::{Cond, Dependency, DepsProblem, NrcExpr, RaExpr, RaProgram, XqExpr};
use crate::syntax::parse::TypeSyntax;
use crate::syntax::sexp::Sexp;
use crate::types::{NrcKind, NrcType, PureRxType, RxKind, RxType};
use crate::value::Atom;

/// Line width used by the pretty printers.
pub const WIDTH: usize = 80;

fn atom_lit(a: &Atom) -> Sexp {
    Sexp::string(a.as_str())
}

fn attr(a: &Atom) -> Sexp {
    Sexp::sym(a.as_str())
}

pub fn rx_kind_sexp(k: &RxKind) -> Sexp {
    match k {
        RxKind::Atom => Sexp::form("kind-atom", []),
        RxKind::Data => Sexp::form("kind-data", []),
        RxKind::Elem => Sexp::form("kind-elem", []),
        RxKind::Union(a, b) => Sexp::form("kind-sum", [rx_kind_sexp(a), rx_kind_sexp(b)]),
    }
}

pub fn nrc_kind_sexp(k: &NrcKind) -> Sexp {
    match k {
        NrcKind::Atom => Sexp::form("kind-atom", []),
        NrcKind::Coll => Sexp::form("kind-coll", []),
        NrcKind::Prod(a, b) => Sexp::form("kind-prod", [nrc_kind_sexp(a), nrc_kind_sexp(b)]),
        NrcKind::Union(a, b) => Sexp::form("kind-sum", [nrc_kind_sexp(a), nrc_kind_sexp(b)]),
    }
}

pub fn nrc_type_sexp(t: &NrcType) -> Sexp {
    match t {
        NrcType::Void => Sexp::form("void", []),
        NrcType::Atom => Sexp::form("atom", []),
        NrcType::Prod(a, b) => Sexp::form("prod", [nrc_type_sexp(a), nrc_type_sexp(b)]),
        NrcType::Union(a, b) => Sexp::form("sum", [nrc_type_sexp(a), nrc_type_sexp(b)]),
        NrcType::Coll(t) => Sexp::form("coll", [nrc_type_sexp(t)]),
    }
}

pub fn rx_type_sexp(t: &RxType) -> Sexp {
    match t {
        RxType::Atom => Sexp::form("atom", []),
        RxType::Data => Sexp::form("data", []),
        RxType::Elem(g) => Sexp::form("elem", [rx_type_sexp(g)]),
        RxType::Union(a, b) => Sexp::form("sum", [rx_type_sexp(a), rx_type_sexp(b)]),
        RxType::Coll(t) => Sexp::form("coll", [rx_type_sexp(t)]),
        RxType::Single(t) => Sexp::form("single", [rx_type_sexp(t)]),
    }
}

pub fn pure_type_sexp(t: &PureRxType) -> Sexp {
    match t {
        PureRxType::Atom => Sexp::form("atom", []),
        PureRxType::Data => Sexp::form("data", []),
        PureRxType::Elem(ns) => Sexp::form("elem", ns.iter().map(pure_type_sexp)),
        PureRxType::Union(a, b) => Sexp::form("sum", [pure_type_sexp(a), pure_type_sexp(b)]),
        PureRxType::Coll(t) => Sexp::form("coll", [pure_type_sexp(t)]),
    }
}

fn cond_sexp<T: TypeSyntax>(c: &Cond<T>) -> Sexp {
    match c {
        Cond::Eq(l, r) => Sexp::form("eq", [xq_sexp(l), xq_sexp(r)]),
        Cond::Ne(l, r) => Sexp::form("ne", [xq_sexp(l), xq_sexp(r)]),
        Cond::And(cs) => Sexp::form("and", cs.iter().map(cond_sexp)),
        Cond::Or(cs) => Sexp::form("or", cs.iter().map(cond_sexp)),
    }
}

pub fn xq_sexp<T: TypeSyntax>(e: &XqExpr<T>) -> Sexp {
    use XqExpr::*;
    let kind_arg = |k: &Option<RxKind>| k.iter().map(rx_kind_sexp).collect::<Vec<_>>();
    match e {
        Var(x) => Sexp::sym(x.clone()),
        Atom(a) => atom_lit(a),
        Text(e) => Sexp::form("text", [xq_sexp(e)]),
        Elem(n, c) => Sexp::form("elem", [xq_sexp(n), xq_sexp(c)]),
        Data(e) => Sexp::form("data", [xq_sexp(e)]),
        Name(e) => Sexp::form("name", [xq_sexp(e)]),
        Children(e) => Sexp::form("children", [xq_sexp(e)]),
        Empty => Sexp::list(vec![]),
        Seq(a, b) => Sexp::form("seq", [xq_sexp(a), xq_sexp(b)]),
        Single(e) => Sexp::form("sing", [xq_sexp(e)]),
        For { var, kind, source, body } => {
            let mut args = vec![Sexp::sym(var.clone())];
            args.extend(kind_arg(kind));
            args.push(xq_sexp(source));
            args.push(xq_sexp(body));
            Sexp::form("for", args)
        }
        ForMany { bindings, kind, body } => {
            let binds = Sexp::list(
                bindings
                    .iter()
                    .map(|(x, s)| Sexp::list(vec![Sexp::sym(x.clone()), xq_sexp(s)]))
                    .collect(),
            );
            let mut args = vec![binds];
            args.extend(kind_arg(kind));
            args.push(xq_sexp(body));
            Sexp::form("for*", args)
        }
        IfEq(a, b, c, d) => Sexp::form("ifeq", [xq_sexp(a), xq_sexp(b), xq_sexp(c), xq_sexp(d)]),
        IfEmpty(a, b, c) => Sexp::form("ifempty", [xq_sexp(a), xq_sexp(b), xq_sexp(c)]),
        IfType(a, t, b, c) => Sexp::form("iftype", [xq_sexp(a), t.type_sexp(), xq_sexp(b), xq_sexp(c)]),
        If(c, p, q) => Sexp::form("if", [cond_sexp(c), xq_sexp(p), xq_sexp(q)]),
    }
}

pub fn nrc_sexp(e: &NrcExpr) -> Sexp {
    use NrcExpr::*;
    match e {
        Var(x) => Sexp::sym(x.clone()),
        Atom(a) => atom_lit(a),
        Pair(a, b) => Sexp::form("pair", [nrc_sexp(a), nrc_sexp(b)]),
        Fst(e) => Sexp::form("fst", [nrc_sexp(e)]),
        Snd(e) => Sexp::form("snd", [nrc_sexp(e)]),
        Empty => Sexp::form("empty", []),
        Sing(e) => Sexp::form("sing", [nrc_sexp(e)]),
        Union(a, b) => Sexp::form("union", [nrc_sexp(a), nrc_sexp(b)]),
        Flatten(e) => Sexp::form("flatten", [nrc_sexp(e)]),
        For { var, source, body } => {
            Sexp::form("for", [Sexp::sym(var.clone()), nrc_sexp(source), nrc_sexp(body)])
        }
        IfEq(a, b, c, d) => Sexp::form("ifeq", [nrc_sexp(a), nrc_sexp(b), nrc_sexp(c), nrc_sexp(d)]),
        IfKind(a, k, b, c) => Sexp::form("ifkind", [nrc_sexp(a), nrc_kind_sexp(k), nrc_sexp(b), nrc_sexp(c)]),
        IfEmpty(a, b, c) => Sexp::form("ifempty", [nrc_sexp(a), nrc_sexp(b), nrc_sexp(c)]),
    }
}

pub fn ra_sexp(q: &RaExpr) -> Sexp {
    match q {
        RaExpr::Relation(r) => Sexp::sym(r.clone()),
        RaExpr::Select(a, b, q) => Sexp::form("select", [attr(a), attr(b), ra_sexp(q)]),
        RaExpr::Project(attrs, q) => {
            Sexp::form("project", [Sexp::list(attrs.iter().map(attr).collect()), ra_sexp(q)])
        }
        RaExpr::Product(p, q) => Sexp::form("product", [ra_sexp(p), ra_sexp(q)]),
        RaExpr::Rename(a, c, q) => Sexp::form("rename", [attr(a), attr(c), ra_sexp(q)]),
        RaExpr::Union(p, q) => Sexp::form("union", [ra_sexp(p), ra_sexp(q)]),
        RaExpr::Difference(p, q) => Sexp::form("diff", [ra_sexp(p), ra_sexp(q)]),
    }
}

pub fn print_ra_program(p: &RaProgram) -> String {
    let schema = Sexp::form(
        "schema",
        p.schema.iter().map(|(r, attrs)| {
            let mut items = vec![Sexp::sym(r.clone())];
            items.extend(attrs.iter().map(attr));
            Sexp::list(items)
        }),
    );
    format!("{}\n{}\n", schema.pretty(WIDTH), ra_sexp(&p.query).pretty(WIDTH))
}

fn dep_sexp(d: &Dependency) -> Sexp {
    let (head, l, r) = match d {
        Dependency::Fd(l, r) => ("fd", l, r),
        Dependency::Ind(l, r) => ("ind", l, r),
    };
    Sexp::form(
        head,
        [Sexp::list(l.iter().map(attr).collect()), Sexp::list(r.iter().map(attr).collect())],
    )
}

pub fn print_deps(p: &DepsProblem) -> String {
    Sexp::form(
        "problem",
        [
            Sexp::form("arity", [Sexp::sym(p.arity.to_string())]),
            Sexp::form("sigma", p.sigma.iter().map(dep_sexp)),
            Sexp::form("target", [dep_sexp(&p.target)]),
        ],
    )
    .pretty(WIDTH)
}

/// Single-line rendering of an RX or pure RX expression.
pub fn print_xq<T: TypeSyntax>(e: &XqExpr<T>) -> String {
    xq_sexp(e).compact()
}

pub fn pretty_xq<T: TypeSyntax>(e: &XqExpr<T>) -> String {
    xq_sexp(e).pretty(WIDTH)
}

pub fn print_nrc(e: &NrcExpr) -> String {
    nrc_sexp(e).compact()
}

pub fn pretty_nrc(e: &NrcExpr) -> String {
    nrc_sexp(e).pretty(WIDTH)
}

/// A type assignment file: one `(x T)` form per line, variables in order.
pub fn print_gamma<T: TypeSyntax>(gamma: &std::collections::BTreeMap<String, T>) -> String {
    gamma
        .iter()
        .map(|(x, t)| Sexp::list(vec![Sexp::sym(x.clone()), t.type_sexp()]).pretty(WIDTH) + "\n")
        .collect()
}

impl<T: TypeSyntax> std::fmt::Display for XqExpr<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_xq(self))
    }
}

impl std::fmt::Display for NrcExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_nrc(self))
    }
}
