//! Abstract syntax for the query languages.
//!
//! Every subexpression is addressed by a [`NodePath`]: the sequence of child
//! indices leading to it from the root. Child order follows the written order
//! of operands (see [`XqExpr::children`] and [`NrcExpr::children`]).

use std::collections::BTreeSet;

use crate::types::{NrcKind, PureRxType, RxKind, RxType};
use crate::value::Atom;

pub type NodePath = Vec<u32>;

/// RX and pure RX expressions, parameterized by the type language used in
/// type switches.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum XqExpr<T> {
    Var(String),
    /// An atom literal (an extension of the core grammar).
    Atom(Atom),
    Text(Box<XqExpr<T>>),
    Elem(Box<XqExpr<T>>, Box<XqExpr<T>>),
    Data(Box<XqExpr<T>>),
    Name(Box<XqExpr<T>>),
    Children(Box<XqExpr<T>>),
    Empty,
    Seq(Box<XqExpr<T>>, Box<XqExpr<T>>),
    /// The singleton constructor `(e)` of pure RX.
    Single(Box<XqExpr<T>>),
    /// `for x : κ in source return body`; `None` is the kind `atom ∪ data ∪ elem`.
    For {
        var: String,
        kind: Option<RxKind>,
        source: Box<XqExpr<T>>,
        body: Box<XqExpr<T>>,
    },
    /// Sugar: `for x₁ in s₁, …, xₙ in sₙ return body`, all with the same kind.
    ForMany {
        bindings: Vec<(String, XqExpr<T>)>,
        kind: Option<RxKind>,
        body: Box<XqExpr<T>>,
    },
    IfEq(Box<XqExpr<T>>, Box<XqExpr<T>>, Box<XqExpr<T>>, Box<XqExpr<T>>),
    IfEmpty(Box<XqExpr<T>>, Box<XqExpr<T>>, Box<XqExpr<T>>),
    IfType(Box<XqExpr<T>>, T, Box<XqExpr<T>>, Box<XqExpr<T>>),
    /// Sugar: a conditional over a boolean combination of equality tests.
    If(Box<Cond<T>>, Box<XqExpr<T>>, Box<XqExpr<T>>),
}

/// Boolean combinations of equality tests, evaluated left to right with
/// short-circuiting.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cond<T> {
    Eq(XqExpr<T>, XqExpr<T>),
    Ne(XqExpr<T>, XqExpr<T>),
    And(Vec<Cond<T>>),
    Or(Vec<Cond<T>>),
}

pub type RxExpr = XqExpr<RxType>;
pub type PureRxExpr = XqExpr<PureRxType>;

fn b<T>(e: T) -> Box<T> {
    Box::new(e)
}

impl<T> XqExpr<T> {
    pub fn var(x: &str) -> Self {
        XqExpr::Var(x.to_string())
    }

    pub fn atom(a: &str) -> Self {
        XqExpr::Atom(Atom::named(a))
    }

    pub fn text(e: Self) -> Self {
        XqExpr::Text(b(e))
    }

    pub fn elem(name: Self, content: Self) -> Self {
        XqExpr::Elem(b(name), b(content))
    }

    pub fn data(e: Self) -> Self {
        XqExpr::Data(b(e))
    }

    pub fn name(e: Self) -> Self {
        XqExpr::Name(b(e))
    }

    pub fn children_of(e: Self) -> Self {
        XqExpr::Children(b(e))
    }

    pub fn seq(a: Self, c: Self) -> Self {
        XqExpr::Seq(b(a), b(c))
    }

    /// Left-nested sequence of the given expressions; `()` when empty.
    pub fn seq_all(items: impl IntoIterator<Item = Self>) -> Self {
        items.into_iter().reduce(XqExpr::seq).unwrap_or(XqExpr::Empty)
    }

    pub fn single(e: Self) -> Self {
        XqExpr::Single(b(e))
    }

    pub fn for_in(var: &str, kind: Option<RxKind>, source: Self, body: Self) -> Self {
        XqExpr::For { var: var.to_string(), kind, source: b(source), body: b(body) }
    }

    pub fn for_many(bindings: Vec<(String, Self)>, kind: Option<RxKind>, body: Self) -> Self {
        XqExpr::ForMany { bindings, kind, body: b(body) }
    }

    pub fn if_eq(l: Self, r: Self, then: Self, other: Self) -> Self {
        XqExpr::IfEq(b(l), b(r), b(then), b(other))
    }

    pub fn if_empty(e: Self, then: Self, other: Self) -> Self {
        XqExpr::IfEmpty(b(e), b(then), b(other))
    }

    pub fn if_type(e: Self, t: T, then: Self, other: Self) -> Self {
        XqExpr::IfType(b(e), t, b(then), b(other))
    }

    pub fn if_cond(c: Cond<T>, then: Self, other: Self) -> Self {
        XqExpr::If(b(c), b(then), b(other))
    }

    /// Immediate subexpressions in path order.
    pub fn children(&self) -> Vec<&Self> {
        use XqExpr::*;
        match self {
            Var(_) | Atom(_) | Empty => vec![],
            Text(e) | Data(e) | Name(e) | Children(e) | Single(e) => vec![e],
            Elem(x, y) | Seq(x, y) => vec![x, y],
            For { source, body, .. } => vec![source, body],
            ForMany { bindings, body, .. } => {
                bindings.iter().map(|(_, s)| s).chain(std::iter::once(&**body)).collect()
            }
            IfEq(a, b, c, d) => vec![a, b, c, d],
            IfEmpty(a, b, c) | IfType(a, _, b, c) => vec![a, b, c],
            If(c, p, q) => {
                let mut out = c.operands();
                out.push(p);
                out.push(q);
                out
            }
        }
    }

    /// The subexpression at `path`, if any.
    pub fn at(&self, path: &[u32]) -> Option<&Self> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i as usize)?.at(rest),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            XqExpr::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            XqExpr::For { var, source, body, .. } => {
                source.collect_free(bound, out);
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            XqExpr::ForMany { bindings, body, .. } => {
                for (x, s) in bindings {
                    s.collect_free(bound, out);
                    bound.push(x.clone());
                }
                body.collect_free(bound, out);
                bound.truncate(bound.len() - bindings.len());
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    /// Atom literals occurring in the expression.
    pub fn literals(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let XqExpr::Atom(a) = e {
                out.insert(a.clone());
            }
        });
        out
    }

    /// Pre-order traversal over all subexpressions.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Self)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    /// All variable names, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| match e {
            XqExpr::Var(x) | XqExpr::For { var: x, .. } => {
                out.insert(x.clone());
            }
            XqExpr::ForMany { bindings, .. } => out.extend(bindings.iter().map(|(x, _)| x.clone())),
            _ => {}
        });
        out
    }

    /// Height of the syntax tree (a leaf has depth 1).
    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// True when the expression uses neither emptiness tests nor type
    /// switches (the positive-existential fragment).
    pub fn is_positive_existential(&self) -> bool {
        let mut ok = true;
        self.walk(&mut |e| {
            if matches!(e, XqExpr::IfEmpty(..) | XqExpr::IfType(..)) {
                ok = false;
            }
        });
        ok
    }

    /// True when no sugar (`ForMany`, `If`) remains.
    pub fn is_core(&self) -> bool {
        let mut ok = true;
        self.walk(&mut |e| {
            if matches!(e, XqExpr::ForMany { .. } | XqExpr::If(..)) {
                ok = false;
            }
        });
        ok
    }
}

impl<T> Cond<T> {
    pub fn eq(l: XqExpr<T>, r: XqExpr<T>) -> Self {
        Cond::Eq(l, r)
    }

    pub fn ne(l: XqExpr<T>, r: XqExpr<T>) -> Self {
        Cond::Ne(l, r)
    }

    /// Operand expressions in left-to-right order.
    pub fn operands(&self) -> Vec<&XqExpr<T>> {
        match self {
            Cond::Eq(l, r) | Cond::Ne(l, r) => vec![l, r],
            Cond::And(cs) | Cond::Or(cs) => cs.iter().flat_map(Cond::operands).collect(),
        }
    }
}

/// PENRC[kind] expressions, plus the emptiness test of full NRC.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NrcExpr {
    Var(String),
    Atom(Atom),
    Pair(Box<NrcExpr>, Box<NrcExpr>),
    Fst(Box<NrcExpr>),
    Snd(Box<NrcExpr>),
    Empty,
    Sing(Box<NrcExpr>),
    Union(Box<NrcExpr>, Box<NrcExpr>),
    Flatten(Box<NrcExpr>),
    /// `{body | var ∈ source}`.
    For { var: String, source: Box<NrcExpr>, body: Box<NrcExpr> },
    IfEq(Box<NrcExpr>, Box<NrcExpr>, Box<NrcExpr>, Box<NrcExpr>),
    IfKind(Box<NrcExpr>, NrcKind, Box<NrcExpr>, Box<NrcExpr>),
    /// `e₁ = ∅ ? e₂ : e₃`; only full NRC has it, and the decision procedures
    /// reject it.
    IfEmpty(Box<NrcExpr>, Box<NrcExpr>, Box<NrcExpr>),
}

impl NrcExpr {
    pub fn var(x: &str) -> Self {
        NrcExpr::Var(x.to_string())
    }

    pub fn atom(a: &str) -> Self {
        NrcExpr::Atom(Atom::named(a))
    }

    pub fn pair(a: NrcExpr, c: NrcExpr) -> Self {
        NrcExpr::Pair(b(a), b(c))
    }

    pub fn fst(e: NrcExpr) -> Self {
        NrcExpr::Fst(b(e))
    }

    pub fn snd(e: NrcExpr) -> Self {
        NrcExpr::Snd(b(e))
    }

    pub fn sing(e: NrcExpr) -> Self {
        NrcExpr::Sing(b(e))
    }

    pub fn union(a: NrcExpr, c: NrcExpr) -> Self {
        NrcExpr::Union(b(a), b(c))
    }

    pub fn flatten(e: NrcExpr) -> Self {
        NrcExpr::Flatten(b(e))
    }

    pub fn comp(body: NrcExpr, var: &str, source: NrcExpr) -> Self {
        NrcExpr::For { var: var.to_string(), source: b(source), body: b(body) }
    }

    pub fn if_eq(l: NrcExpr, r: NrcExpr, then: NrcExpr, other: NrcExpr) -> Self {
        NrcExpr::IfEq(b(l), b(r), b(then), b(other))
    }

    pub fn if_kind(e: NrcExpr, k: NrcKind, then: NrcExpr, other: NrcExpr) -> Self {
        NrcExpr::IfKind(b(e), k, b(then), b(other))
    }

    pub fn if_empty(e: NrcExpr, then: NrcExpr, other: NrcExpr) -> Self {
        NrcExpr::IfEmpty(b(e), b(then), b(other))
    }

    pub fn children(&self) -> Vec<&NrcExpr> {
        use NrcExpr::*;
        match self {
            Var(_) | Atom(_) | Empty => vec![],
            Fst(e) | Snd(e) | Sing(e) | Flatten(e) => vec![e],
            Pair(x, y) | Union(x, y) => vec![x, y],
            For { source, body, .. } => vec![source, body],
            IfEq(a, b, c, d) => vec![a, b, c, d],
            IfKind(a, _, b, c) | IfEmpty(a, b, c) => vec![a, b, c],
        }
    }

    pub fn at(&self, path: &[u32]) -> Option<&NrcExpr> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i as usize)?.at(rest),
        }
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a NrcExpr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            NrcExpr::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            NrcExpr::For { var, source, body } => {
                source.collect_free(bound, out);
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    pub fn literals(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let NrcExpr::Atom(a) = e {
                out.insert(a.clone());
            }
        });
        out
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// True when the expression lies in PENRC[kind] (no emptiness test).
    pub fn is_penrc(&self) -> bool {
        let mut ok = true;
        self.walk(&mut |e| {
            if matches!(e, NrcExpr::IfEmpty(..)) {
                ok = false;
            }
        });
        ok
    }
}

/// Relational algebra queries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RaExpr {
    Relation(String),
    /// `σ_{A=B}(q)`.
    Select(Atom, Atom, Box<RaExpr>),
    Project(Vec<Atom>, Box<RaExpr>),
    Product(Box<RaExpr>, Box<RaExpr>),
    /// `ρ_{A/C}(q)`: attribute `A` renamed to `C`.
    Rename(Atom, Atom, Box<RaExpr>),
    Union(Box<RaExpr>, Box<RaExpr>),
    Difference(Box<RaExpr>, Box<RaExpr>),
}

impl RaExpr {
    pub fn depth(&self) -> usize {
        match self {
            RaExpr::Relation(_) => 1,
            RaExpr::Select(_, _, q) | RaExpr::Project(_, q) | RaExpr::Rename(_, _, q) => 1 + q.depth(),
            RaExpr::Product(p, q) | RaExpr::Union(p, q) | RaExpr::Difference(p, q) => {
                1 + p.depth().max(q.depth())
            }
        }
    }
}

/// Relation names mapped to their attribute lists.
pub type Schema = std::collections::BTreeMap<String, Vec<Atom>>;

/// A query together with the schema it ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaProgram {
    pub schema: Schema,
    pub query: RaExpr,
}

/// A functional or inclusion dependency over the attributes `A1 … Ak`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Dependency {
    /// `X → Y`.
    Fd(Vec<Atom>, Vec<Atom>),
    /// `[B₁ … Bᵢ] ⊆ [C₁ … Cᵢ]`.
    Ind(Vec<Atom>, Vec<Atom>),
}

/// An implication instance: does `sigma` imply `target` over relations of
/// the given arity?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepsProblem {
    pub arity: usize,
    pub sigma: Vec<Dependency>,
    pub target: Dependency,
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = RxExpr;

    #[test]
    fn free_vars_respect_binding() {
        assert_eq!(NrcExpr::var("x").free_vars(), BTreeSet::from(["x".to_string()]));
        let e = NrcExpr::comp(NrcExpr::var("x"), "x", NrcExpr::var("R"));
        assert_eq!(e.free_vars(), BTreeSet::from(["R".to_string()]));
        let inner = NrcExpr::comp(
            NrcExpr::if_eq(NrcExpr::var("z"), NrcExpr::var("y"), NrcExpr::fst(NrcExpr::var("z")), NrcExpr::var("y")),
            "y",
            NrcExpr::var("x"),
        );
        let e = NrcExpr::comp(inner, "x", NrcExpr::var("R"));
        assert_eq!(e.free_vars(), BTreeSet::from(["R".to_string(), "z".to_string()]));
    }

    #[test]
    fn multi_for_sources_see_earlier_bindings() {
        let e = E::for_many(
            vec![("x".into(), E::var("r")), ("y".into(), E::children_of(E::var("x")))],
            None,
            E::var("y"),
        );
        assert_eq!(e.free_vars(), BTreeSet::from(["r".to_string()]));
    }

    #[test]
    fn paths_address_operands() {
        let e = E::if_cond(
            Cond::And(vec![Cond::eq(E::var("a"), E::var("b")), Cond::ne(E::var("c"), E::var("d"))]),
            E::var("p"),
            E::var("q"),
        );
        assert_eq!(e.at(&[2]), Some(&E::var("c")));
        assert_eq!(e.at(&[5]), Some(&E::var("q")));
        assert_eq!(e.at(&[6]), None);
    }
}
