//! Evaluators for set-based RX and for pure RX.
//!
//! Both evaluate the surface sugar (`for*` and boolean conditions) directly,
//! so that [`crate::syntax::desugar`] can be tested against them.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::outcome::{at, Outcome, Reason, Scope, Stuck};
use crate::syntax::ast::{Cond, PureRxExpr, RxExpr, XqExpr};
use crate::types::{PureRxType, RxKind, RxType};
use crate::value::{Atom, Environment, Item, PureRxValue, RxNode, RxValue};

// ---------------------------------------------------------------------------
// Oracles

/// Interpretations of the two string functions RX abstracts over.
/// Implementations must be deterministic.
pub trait Oracles: Sync {
    /// The string content of the element node `⟨name : children⟩`.
    fn content(&self, name: &Atom, children: &BTreeSet<RxNode>) -> Atom;
    /// The concatenation of a finite set of atoms.
    fn concat(&self, atoms: &BTreeSet<Atom>) -> Atom;
}

/// Joins sorted tokens with `·`; the empty concatenation is `ε`. The content
/// of an element is the concatenation of the data of its children.
#[derive(Clone, Copy, Debug, Default)]
pub struct DefaultOracles;

impl Oracles for DefaultOracles {
    fn content(&self, _name: &Atom, children: &BTreeSet<RxNode>) -> Atom {
        let data = data_of_items(children.iter().map(|n| ItemRef::Node(n)), self);
        self.concat(&data)
    }

    fn concat(&self, atoms: &BTreeSet<Atom>) -> Atom {
        if atoms.is_empty() {
            return Atom::named("ε");
        }
        let tokens: Vec<&str> = atoms.iter().map(Atom::as_str).collect();
        Atom::named(&tokens.join("·"))
    }
}

/// A second, structurally different suite: `concat` brackets its input and
/// `content` spells out the whole subtree including element names.
#[derive(Clone, Copy, Debug, Default)]
pub struct BracketOracles;

impl BracketOracles {
    fn render(node: &RxNode, out: &mut String) {
        match node {
            RxNode::Data(a) => out.push_str(a.as_str()),
            RxNode::Elem(name, children) => {
                out.push_str(name.as_str());
                out.push('<');
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    Self::render(c, out);
                }
                out.push('>');
            }
        }
    }
}

impl Oracles for BracketOracles {
    fn content(&self, name: &Atom, children: &BTreeSet<RxNode>) -> Atom {
        let mut s = String::new();
        Self::render(&RxNode::Elem(name.clone(), Arc::new(children.clone())), &mut s);
        Atom::named(&s)
    }

    fn concat(&self, atoms: &BTreeSet<Atom>) -> Atom {
        let tokens: Vec<&str> = atoms.iter().map(Atom::as_str).collect();
        Atom::named(&format!("[{}]", tokens.join(",")))
    }
}

/// Looks up an oracle suite by its command-line name.
pub fn oracles_by_name(name: &str) -> Option<&'static dyn Oracles> {
    match name {
        "default" => Some(&DefaultOracles),
        "bracket" => Some(&BracketOracles),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Helper functions on RX values

enum ItemRef<'a> {
    Atom(&'a Atom),
    Node(&'a RxNode),
}

fn data_of_items<'a>(items: impl Iterator<Item = ItemRef<'a>>, o: &dyn Oracles) -> BTreeSet<Atom> {
    items
        .map(|i| match i {
            ItemRef::Atom(a) => a.clone(),
            ItemRef::Node(RxNode::Data(a)) => a.clone(),
            ItemRef::Node(RxNode::Elem(name, children)) => o.content(name, children),
        })
        .collect()
}

fn item_ref(i: &Item) -> ItemRef<'_> {
    match i {
        Item::Atom(a) => ItemRef::Atom(a),
        Item::Node(n) => ItemRef::Node(n),
    }
}

/// `data(v)` as a set of atoms.
pub fn rx_data_atoms(v: &RxValue, o: &dyn Oracles) -> BTreeSet<Atom> {
    data_of_items(v.iter().map(item_ref), o)
}

pub fn rx_data(v: &RxValue, o: &dyn Oracles) -> RxValue {
    rx_data_atoms(v, o).into_iter().map(Item::Atom).collect()
}

/// `name(v)`. The empty input yields `{concat(∅)}`, keeping every RX result a
/// set.
pub fn rx_name(v: &RxValue, o: &dyn Oracles) -> Option<RxValue> {
    if v.is_empty() {
        return Some(RxValue::singleton(Item::Atom(o.concat(&BTreeSet::new()))));
    }
    match v.the_item()? {
        Item::Node(RxNode::Elem(name, _)) => Some(RxValue::singleton(Item::Atom(name.clone()))),
        _ => None,
    }
}

fn children_of<'a>(items: impl Iterator<Item = &'a Item>) -> Option<BTreeSet<Item>> {
    let mut out = BTreeSet::new();
    for i in items {
        match i {
            Item::Atom(_) => return None,
            Item::Node(RxNode::Data(_)) => {}
            Item::Node(RxNode::Elem(_, children)) => out.extend(children.iter().cloned().map(Item::Node)),
        }
    }
    Some(out)
}

/// `children(v)`; `None` when `v` contains an atom.
pub fn rx_children(v: &RxValue) -> Option<RxValue> {
    children_of(v.iter()).map(RxValue::new)
}

/// Turns the atoms of `w` into data nodes.
fn as_content<'a>(w: impl Iterator<Item = &'a Item>) -> BTreeSet<RxNode> {
    w.map(|i| match i {
        Item::Atom(a) => RxNode::Data(a.clone()),
        Item::Node(n) => n.clone(),
    })
    .collect()
}

/// `construct(v, w)`; `None` unless `data(v)` is a single atom.
pub fn rx_construct(v: &RxValue, w: &RxValue, o: &dyn Oracles) -> Option<RxNode> {
    let data = rx_data_atoms(v, o);
    if data.len() != 1 {
        return None;
    }
    let name = data.into_iter().next().expect("one atom");
    Some(RxNode::elem_with(name, as_content(w.iter())))
}

// ---------------------------------------------------------------------------
// RX evaluation

/// Why an RX expression is undefined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RxReason {
    /// `elem{e₁}{e₂}` where `data(e₁)` is not a single atom.
    ConstructNameNotSingleton,
    /// `name(e)` where `e` is neither empty nor a single element node.
    NameNotSingletonElem,
    /// `children(e)` where `e` contains an atom.
    ChildrenSawAtom,
    /// An equality test whose operand does not extract to a single atom.
    EqNotSingletonAtom,
}

impl Reason for RxReason {
    fn code(self) -> &'static str {
        match self {
            RxReason::ConstructNameNotSingleton => "construct-name-not-singleton",
            RxReason::NameNotSingletonElem => "name-not-singleton-elem",
            RxReason::ChildrenSawAtom => "children-saw-atom",
            RxReason::EqNotSingletonAtom => "eq-not-singleton-atom",
        }
    }
}

type RxStep = Result<RxValue, Stuck<RxReason>>;

struct RxEval<'o> {
    o: &'o dyn Oracles,
}

impl RxEval<'_> {
    fn eval<'e>(&self, e: &'e RxExpr, s: &mut Scope<'e, RxValue>) -> RxStep {
        use XqExpr::*;
        Ok(match e {
            Var(x) => s.lookup(x).clone(),
            Atom(a) => RxValue::singleton(Item::Atom(a.clone())),
            Text(x) => {
                let v = at(0, self.eval(x, s))?;
                let a = self.o.concat(&rx_data_atoms(&v, self.o));
                RxValue::singleton(Item::Node(RxNode::Data(a)))
            }
            Elem(n, c) => {
                let name = at(0, self.eval(n, s))?;
                let content = at(1, self.eval(c, s))?;
                let node = rx_construct(&name, &content, self.o)
                    .ok_or_else(|| Stuck::here(RxReason::ConstructNameNotSingleton))?;
                RxValue::singleton(Item::Node(node))
            }
            Data(x) => rx_data(&at(0, self.eval(x, s))?, self.o),
            Name(x) => {
                let v = at(0, self.eval(x, s))?;
                rx_name(&v, self.o).ok_or_else(|| Stuck::here(RxReason::NameNotSingletonElem))?
            }
            Children(x) => {
                let v = at(0, self.eval(x, s))?;
                rx_children(&v).ok_or_else(|| Stuck::here(RxReason::ChildrenSawAtom))?
            }
            Empty => RxValue::empty(),
            Seq(a, b) => {
                let mut items = at(0, self.eval(a, s))?.into_items();
                items.extend(at(1, self.eval(b, s))?.into_items());
                RxValue::new(items)
            }
            Single(_) => unreachable!("RX has no singleton constructor"),
            For { var, kind, source, body } => {
                let src = at(0, self.eval(source, s))?;
                self.for_loop(var, kind.as_ref(), &src, s, |me, s| at(1, me.eval(body, s)))?
            }
            ForMany { bindings, kind, body } => self.for_many(bindings, 0, kind.as_ref(), body, s)?,
            IfEq(a, b, p, q) => {
                let x = self.eq_operand(a, s, 0)?;
                let y = self.eq_operand(b, s, 1)?;
                if x == y {
                    at(2, self.eval(p, s))?
                } else {
                    at(3, self.eval(q, s))?
                }
            }
            IfEmpty(a, p, q) => {
                if at(0, self.eval(a, s))?.is_empty() {
                    at(1, self.eval(p, s))?
                } else {
                    at(2, self.eval(q, s))?
                }
            }
            IfType(a, t, p, q) => {
                if t.contains(&at(0, self.eval(a, s))?) {
                    at(1, self.eval(p, s))?
                } else {
                    at(2, self.eval(q, s))?
                }
            }
            If(c, p, q) => {
                let n = c.operands().len() as u32;
                if self.cond(c, s, &mut 0)? {
                    at(n, self.eval(p, s))?
                } else {
                    at(n + 1, self.eval(q, s))?
                }
            }
        })
    }

    fn for_loop<'e>(
        &self,
        var: &'e str,
        kind: Option<&RxKind>,
        src: &RxValue,
        s: &mut Scope<'e, RxValue>,
        mut body: impl FnMut(&Self, &mut Scope<'e, RxValue>) -> RxStep,
    ) -> RxStep {
        let mut out = BTreeSet::new();
        for i in src.iter().filter(|i| kind.map_or(true, |k| k.contains(i))) {
            s.push(var, RxValue::singleton(i.clone()));
            let r = body(self, s);
            s.pop();
            out.extend(r?.into_items());
        }
        Ok(RxValue::new(out))
    }

    fn for_many<'e>(
        &self,
        bindings: &'e [(String, RxExpr)],
        from: usize,
        kind: Option<&RxKind>,
        body: &'e RxExpr,
        s: &mut Scope<'e, RxValue>,
    ) -> RxStep {
        match bindings.get(from) {
            None => at(bindings.len() as u32, self.eval(body, s)),
            Some((x, src)) => {
                let v = at(from as u32, self.eval(src, s))?;
                self.for_loop(x, kind, &v, s, |me, s| me.for_many(bindings, from + 1, kind, body, s))
            }
        }
    }

    fn eq_operand<'e>(&self, e: &'e RxExpr, s: &mut Scope<'e, RxValue>, i: u32) -> Result<Atom, Stuck<RxReason>> {
        let v = at(i, self.eval(e, s))?;
        let data = rx_data_atoms(&v, self.o);
        if data.len() == 1 {
            Ok(data.into_iter().next().expect("one atom"))
        } else {
            Err(Stuck::here(RxReason::EqNotSingletonAtom))
        }
    }

    fn cond<'e>(&self, c: &'e Cond<RxType>, s: &mut Scope<'e, RxValue>, next: &mut u32) -> Result<bool, Stuck<RxReason>> {
        match c {
            Cond::Eq(l, r) | Cond::Ne(l, r) => {
                let i = *next;
                *next += 2;
                let x = self.eq_operand(l, s, i)?;
                let y = self.eq_operand(r, s, i + 1)?;
                Ok((x == y) == matches!(c, Cond::Eq(..)))
            }
            Cond::And(cs) => self.connective(cs, s, next, false),
            Cond::Or(cs) => self.connective(cs, s, next, true),
        }
    }

    /// Evaluates conditions left to right, stopping at the first one equal to
    /// `stop`.
    fn connective<'e>(
        &self,
        cs: &'e [Cond<RxType>],
        s: &mut Scope<'e, RxValue>,
        next: &mut u32,
        stop: bool,
    ) -> Result<bool, Stuck<RxReason>> {
        for c in cs {
            if self.cond(c, s, next)? == stop {
                return Ok(stop);
            }
        }
        Ok(!stop)
    }
}


/// Evaluates an RX expression. Every free variable of `e` must be bound in
/// `env`.
pub fn eval_rx(e: &RxExpr, env: &Environment<RxValue>, o: &dyn Oracles) -> Outcome<RxValue, RxReason> {
    RxEval { o }.eval(e, &mut Scope::new(env)).map_err(Stuck::finish)
}

// ---------------------------------------------------------------------------
// Pure RX evaluation

/// Why a pure RX expression is undefined. The last five cover operations
/// that expect a set and receive a bare item.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PureReason {
    TextOfNonAtom,
    ConstructNameNotAtom,
    NameOfNonElem,
    ChildrenSawAtom,
    SingletonOfNonItem,
    SeqOfNonSet,
    EqOnNonAtom,
    DataOfNonSet,
    ChildrenOfNonSet,
    ContentNonSet,
    ForOverNonSet,
    ForBodyNonSet,
}

impl Reason for PureReason {
    fn code(self) -> &'static str {
        match self {
            PureReason::TextOfNonAtom => "text-of-nonatom",
            PureReason::ConstructNameNotAtom => "construct-name-not-atom",
            PureReason::NameOfNonElem => "name-of-nonelem",
            PureReason::ChildrenSawAtom => "children-saw-atom",
            PureReason::SingletonOfNonItem => "singleton-of-nonitem",
            PureReason::SeqOfNonSet => "seq-of-nonset",
            PureReason::EqOnNonAtom => "eq-on-nonatom",
            PureReason::DataOfNonSet => "data-of-nonset",
            PureReason::ChildrenOfNonSet => "children-of-nonset",
            PureReason::ContentNonSet => "elem-content-nonset",
            PureReason::ForOverNonSet => "for-over-nonset",
            PureReason::ForBodyNonSet => "for-body-nonset",
        }
    }
}

type PureStep = Result<PureRxValue, Stuck<PureReason>>;

fn into_set(v: PureRxValue, why: PureReason) -> Result<BTreeSet<Item>, Stuck<PureReason>> {
    match v {
        PureRxValue::Set(s) => Ok(s),
        PureRxValue::Item(_) => Err(Stuck::here(why)),
    }
}

fn into_atom(v: PureRxValue, why: PureReason) -> Result<Atom, Stuck<PureReason>> {
    match v {
        PureRxValue::Item(Item::Atom(a)) => Ok(a),
        _ => Err(Stuck::here(why)),
    }
}

fn pure_eval<'e>(e: &'e PureRxExpr, s: &mut Scope<'e, PureRxValue>) -> PureStep {
    use PureReason as R;
    use XqExpr::*;
    Ok(match e {
        Var(x) => s.lookup(x).clone(),
        Atom(a) => PureRxValue::Item(Item::Atom(a.clone())),
        Text(x) => {
            let a = into_atom(at(0, pure_eval(x, s))?, R::TextOfNonAtom)?;
            PureRxValue::Item(Item::Node(RxNode::Data(a)))
        }
        Elem(n, c) => {
            let name = into_atom(at(0, pure_eval(n, s))?, R::ConstructNameNotAtom)?;
            let content = into_set(at(1, pure_eval(c, s))?, R::ContentNonSet)?;
            PureRxValue::Item(Item::Node(RxNode::elem_with(name, as_content(content.iter()))))
        }
        Data(x) => {
            let v = into_set(at(0, pure_eval(x, s))?, R::DataOfNonSet)?;
            PureRxValue::Set(
                v.into_iter()
                    .filter_map(|i| match i {
                        Item::Atom(a) | Item::Node(RxNode::Data(a)) => Some(Item::Atom(a)),
                        Item::Node(RxNode::Elem(..)) => None,
                    })
                    .collect(),
            )
        }
        Name(x) => match at(0, pure_eval(x, s))? {
            PureRxValue::Item(Item::Node(RxNode::Elem(name, _))) => PureRxValue::Item(Item::Atom(name)),
            _ => return Err(Stuck::here(R::NameOfNonElem)),
        },
        Children(x) => {
            let v = into_set(at(0, pure_eval(x, s))?, R::ChildrenOfNonSet)?;
            PureRxValue::Set(children_of(v.iter()).ok_or_else(|| Stuck::here(R::ChildrenSawAtom))?)
        }
        Empty => PureRxValue::empty(),
        Single(x) => match at(0, pure_eval(x, s))? {
            PureRxValue::Item(i) => PureRxValue::Set(BTreeSet::from([i])),
            PureRxValue::Set(_) => return Err(Stuck::here(R::SingletonOfNonItem)),
        },
        Seq(a, b) => {
            let mut l = into_set(at(0, pure_eval(a, s))?, R::SeqOfNonSet)?;
            l.extend(into_set(at(1, pure_eval(b, s))?, R::SeqOfNonSet)?);
            PureRxValue::Set(l)
        }
        For { var, kind, source, body } => {
            let src = into_set(at(0, pure_eval(source, s))?, R::ForOverNonSet)?;
            pure_for(var, kind.as_ref(), src, s, &mut |s| at(1, pure_eval(body, s)))?
        }
        ForMany { bindings, kind, body } => pure_for_many(bindings, 0, kind.as_ref(), body, s)?,
        IfEq(a, b, p, q) => {
            let x = into_atom(at(0, pure_eval(a, s))?, R::EqOnNonAtom)?;
            let y = into_atom(at(1, pure_eval(b, s))?, R::EqOnNonAtom)?;
            if x == y {
                at(2, pure_eval(p, s))?
            } else {
                at(3, pure_eval(q, s))?
            }
        }
        IfEmpty(a, p, q) => {
            let empty = matches!(at(0, pure_eval(a, s))?, PureRxValue::Set(ref v) if v.is_empty());
            if empty {
                at(1, pure_eval(p, s))?
            } else {
                at(2, pure_eval(q, s))?
            }
        }
        IfType(a, t, p, q) => {
            if t.contains(&at(0, pure_eval(a, s))?) {
                at(1, pure_eval(p, s))?
            } else {
                at(2, pure_eval(q, s))?
            }
        }
        If(c, p, q) => {
            let n = c.operands().len() as u32;
            if pure_cond(c, s, &mut 0)? {
                at(n, pure_eval(p, s))?
            } else {
                at(n + 1, pure_eval(q, s))?
            }
        }
    })
}

fn pure_for<'e>(
    var: &'e str,
    kind: Option<&RxKind>,
    src: BTreeSet<Item>,
    s: &mut Scope<'e, PureRxValue>,
    body: &mut dyn FnMut(&mut Scope<'e, PureRxValue>) -> PureStep,
) -> PureStep {
    let mut out = BTreeSet::new();
    for i in src.into_iter().filter(|i| kind.map_or(true, |k| k.contains(i))) {
        s.push(var, PureRxValue::Item(i));
        let r = body(s);
        s.pop();
        out.extend(into_set(r?, PureReason::ForBodyNonSet)?);
    }
    Ok(PureRxValue::Set(out))
}

fn pure_for_many<'e>(
    bindings: &'e [(String, PureRxExpr)],
    from: usize,
    kind: Option<&RxKind>,
    body: &'e PureRxExpr,
    s: &mut Scope<'e, PureRxValue>,
) -> PureStep {
    match bindings.get(from) {
        None => at(bindings.len() as u32, pure_eval(body, s)),
        Some((x, src)) => {
            let v = into_set(at(from as u32, pure_eval(src, s))?, PureReason::ForOverNonSet)?;
            pure_for(x, kind, v, s, &mut |s| pure_for_many(bindings, from + 1, kind, body, s))
        }
    }
}

fn pure_cond<'e>(
    c: &'e Cond<PureRxType>,
    s: &mut Scope<'e, PureRxValue>,
    next: &mut u32,
) -> Result<bool, Stuck<PureReason>> {
    match c {
        Cond::Eq(l, r) | Cond::Ne(l, r) => {
            let i = *next;
            *next += 2;
            let x = into_atom(at(i, pure_eval(l, s))?, PureReason::EqOnNonAtom)?;
            let y = into_atom(at(i + 1, pure_eval(r, s))?, PureReason::EqOnNonAtom)?;
            Ok((x == y) == matches!(c, Cond::Eq(..)))
        }
        Cond::And(cs) | Cond::Or(cs) => {
            let stop = matches!(c, Cond::Or(_));
            for c in cs {
                if pure_cond(c, s, next)? == stop {
                    return Ok(stop);
                }
            }
            Ok(!stop)
        }
    }
}

/// Evaluates a pure RX expression. Every free variable of `e` must be bound
/// in `env`.
pub fn eval_pure_rx(e: &PureRxExpr, env: &Environment<PureRxValue>) -> Outcome<PureRxValue, PureReason> {
    pure_eval(e, &mut Scope::new(env)).map_err(Stuck::finish)
}
