//! Type and kind grammars for RX, pure RX and PENRC, their membership tests,
//! the numeric measures used by the small-model bounds, and bounded value
//! enumeration.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::translate::encode;
use crate::value::{Atom, Item, NrcValue, PureRxValue, RxNode, RxValue};

/// A finite map from variables to types of one calculus.
pub type TypeAssignment<T> = std::collections::BTreeMap<String, T>;

/// Default cap on the number of values a single enumeration may produce.
pub const DEFAULT_VALUE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("value and type belong to different calculi")]
    CalculusMismatch,
    #[error("ill-formed type: {0}")]
    IllFormed(String),
    #[error("enumeration needs {count} values, budget is {budget}")]
    BudgetExceeded { count: BigUint, budget: u64 },
}

// ---------------------------------------------------------------------------
// Kinds

/// An RX kind (shared by RX and pure RX): classifies items.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RxKind {
    Atom,
    Data,
    Elem,
    Union(Box<RxKind>, Box<RxKind>),
}

impl RxKind {
    pub fn union(a: RxKind, b: RxKind) -> RxKind {
        RxKind::Union(Box::new(a), Box::new(b))
    }

    /// `atom ∪ data ∪ elem`, the kind of an unannotated `for`.
    pub fn universal() -> RxKind {
        RxKind::union(RxKind::union(RxKind::Atom, RxKind::Data), RxKind::Elem)
    }

    pub fn contains(&self, item: &Item) -> bool {
        match self {
            RxKind::Atom => matches!(item, Item::Atom(_)),
            RxKind::Data => matches!(item, Item::Node(RxNode::Data(_))),
            RxKind::Elem => matches!(item, Item::Node(RxNode::Elem(..))),
            RxKind::Union(a, b) => a.contains(item) || b.contains(item),
        }
    }
}

/// An NRC kind: a shape classifier on NRC values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NrcKind {
    Atom,
    Coll,
    Prod(Box<NrcKind>, Box<NrcKind>),
    Union(Box<NrcKind>, Box<NrcKind>),
}

impl NrcKind {
    pub fn prod(a: NrcKind, b: NrcKind) -> NrcKind {
        NrcKind::Prod(Box::new(a), Box::new(b))
    }

    pub fn union(a: NrcKind, b: NrcKind) -> NrcKind {
        NrcKind::Union(Box::new(a), Box::new(b))
    }

    pub fn contains(&self, v: &NrcValue) -> bool {
        match (self, v) {
            (NrcKind::Atom, NrcValue::Atom(_)) => true,
            (NrcKind::Coll, NrcValue::Set(_)) => true,
            (NrcKind::Prod(a, b), NrcValue::Pair(x, y)) => a.contains(x) && b.contains(y),
            (NrcKind::Union(a, b), _) => a.contains(v) || b.contains(v),
            _ => false,
        }
    }
}

// ---------------------------------------------------------------------------
// NRC types

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NrcType {
    /// The empty type `∅`.
    Void,
    Atom,
    Prod(Box<NrcType>, Box<NrcType>),
    Union(Box<NrcType>, Box<NrcType>),
    Coll(Box<NrcType>),
}

impl NrcType {
    pub fn prod(a: NrcType, b: NrcType) -> NrcType {
        NrcType::Prod(Box::new(a), Box::new(b))
    }

    pub fn union(a: NrcType, b: NrcType) -> NrcType {
        NrcType::Union(Box::new(a), Box::new(b))
    }

    pub fn coll(t: NrcType) -> NrcType {
        NrcType::Coll(Box::new(t))
    }

    pub fn contains(&self, v: &NrcValue) -> bool {
        match (self, v) {
            (NrcType::Void, _) => false,
            (NrcType::Atom, NrcValue::Atom(_)) => true,
            (NrcType::Prod(a, b), NrcValue::Pair(x, y)) => a.contains(x) && b.contains(y),
            (NrcType::Union(a, b), _) => a.contains(v) || b.contains(v),
            (NrcType::Coll(t), NrcValue::Set(s)) => s.iter().all(|x| t.contains(x)),
            _ => false,
        }
    }
}

/// `rank(t ∩ V_k)`: an upper bound on the number of distinct atoms a value
/// of `t` with all sets of size at most `k` can mention.
pub fn rank(t: &NrcType, k: &BigUint) -> BigUint {
    match t {
        NrcType::Void => BigUint::zero(),
        NrcType::Atom => BigUint::one(),
        NrcType::Prod(a, b) => rank(a, k) + rank(b, k),
        NrcType::Union(a, b) => rank(a, k).max(rank(b, k)),
        NrcType::Coll(t) => k * rank(t, k),
    }
}

/// The complexity of a type: a cardinality bound below which every
/// non-member has a non-member sub-value.
pub fn type_complexity(t: &NrcType) -> BigUint {
    match t {
        NrcType::Void | NrcType::Atom => BigUint::zero(),
        NrcType::Prod(a, b) => type_complexity(a).max(type_complexity(b)),
        NrcType::Union(a, b) => type_complexity(a) + type_complexity(b),
        NrcType::Coll(t) => type_complexity(t).max(BigUint::one()),
    }
}

// ---------------------------------------------------------------------------
// RX types

/// An RX type term. A single enum covers all four strata of the grammar
/// (value types, item types, node types, node content types); [`RxType::check`]
/// enforces the stratification.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RxType {
    Atom,
    Data,
    /// `elem(γ)`, with `γ` a content type (`coll` or `single` of node types).
    Elem(Box<RxType>),
    Union(Box<RxType>, Box<RxType>),
    Coll(Box<RxType>),
    Single(Box<RxType>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RxStratum {
    Value,
    Item,
    Node,
    Content,
}

impl RxType {
    pub fn elem(content: RxType) -> RxType {
        RxType::Elem(Box::new(content))
    }

    pub fn union(a: RxType, b: RxType) -> RxType {
        RxType::Union(Box::new(a), Box::new(b))
    }

    pub fn coll(t: RxType) -> RxType {
        RxType::Coll(Box::new(t))
    }

    pub fn single(t: RxType) -> RxType {
        RxType::Single(Box::new(t))
    }

    /// Checks that `self` is a value type (`coll(ι)` or `single(ι)`).
    pub fn check(&self) -> Result<(), TypeError> {
        self.check_at(RxStratum::Value)
    }

    fn check_at(&self, at: RxStratum) -> Result<(), TypeError> {
        use RxStratum::*;
        let bad = |what: &str| Err(TypeError::IllFormed(format!("{what} is not allowed here")));
        match (self, at) {
            (RxType::Coll(t) | RxType::Single(t), Value) => t.check_at(Item),
            (RxType::Coll(t) | RxType::Single(t), Content) => t.check_at(Node),
            (RxType::Atom, Item) => Ok(()),
            (RxType::Data, Item | Node) => Ok(()),
            (RxType::Elem(g), Item | Node) => g.check_at(Content),
            (RxType::Union(a, b), Item | Node) => {
                a.check_at(at)?;
                b.check_at(at)
            }
            (RxType::Coll(_) | RxType::Single(_), _) => bad("a collection type"),
            (RxType::Atom, _) => bad("atom"),
            (RxType::Union(..), _) => bad("a union"),
            (RxType::Data | RxType::Elem(_), _) => bad("a bare node type"),
        }
    }

    /// Membership of a value in a value type or a node content type; both
    /// strata are `coll(·)` or `single(·)`.
    pub fn contains(&self, v: &RxValue) -> bool {
        self.contains_items(v.items())
    }

    fn contains_items(&self, items: &BTreeSet<Item>) -> bool {
        match self {
            RxType::Coll(t) => items.iter().all(|i| t.contains_item(i)),
            RxType::Single(t) => items.len() == 1 && items.iter().all(|i| t.contains_item(i)),
            _ => false,
        }
    }

    pub fn contains_item(&self, item: &Item) -> bool {
        match (self, item) {
            (RxType::Atom, Item::Atom(_)) => true,
            (RxType::Data, Item::Node(RxNode::Data(_))) => true,
            (RxType::Elem(g), Item::Node(RxNode::Elem(_, children))) => {
                let as_items: BTreeSet<Item> = children.iter().cloned().map(Item::Node).collect();
                g.contains_items(&as_items)
            }
            (RxType::Union(a, b), _) => a.contains_item(item) || b.contains_item(item),
            _ => false,
        }
    }
}

// ---------------------------------------------------------------------------
// Pure RX types

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PureRxType {
    Atom,
    Data,
    /// `elem(ν₁ ∪ … ∪ ν_k)`; the list may be empty.
    Elem(Vec<PureRxType>),
    Union(Box<PureRxType>, Box<PureRxType>),
    Coll(Box<PureRxType>),
}

impl PureRxType {
    pub fn union(a: PureRxType, b: PureRxType) -> PureRxType {
        PureRxType::Union(Box::new(a), Box::new(b))
    }

    pub fn coll(t: PureRxType) -> PureRxType {
        PureRxType::Coll(Box::new(t))
    }

    pub fn check(&self) -> Result<(), TypeError> {
        match self {
            PureRxType::Coll(t) => t.check_item(),
            PureRxType::Union(a, b) => {
                a.check()?;
                b.check()
            }
            _ => self.check_item(),
        }
    }

    fn check_item(&self) -> Result<(), TypeError> {
        match self {
            PureRxType::Atom => Ok(()),
            PureRxType::Union(a, b) => {
                a.check_item()?;
                b.check_item()
            }
            PureRxType::Coll(_) => Err(TypeError::IllFormed("coll inside an item type".into())),
            _ => self.check_node(),
        }
    }

    fn check_node(&self) -> Result<(), TypeError> {
        match self {
            PureRxType::Data => Ok(()),
            PureRxType::Elem(ns) => ns.iter().try_for_each(PureRxType::check_node),
            _ => Err(TypeError::IllFormed("element content must list node types".into())),
        }
    }

    pub fn contains(&self, v: &PureRxValue) -> bool {
        match (self, v) {
            (PureRxType::Union(a, b), _) => a.contains(v) || b.contains(v),
            (PureRxType::Coll(t), PureRxValue::Set(s)) => s.iter().all(|i| t.contains_item(i)),
            (_, PureRxValue::Item(i)) => self.contains_item(i),
            _ => false,
        }
    }

    pub fn contains_item(&self, item: &Item) -> bool {
        match (self, item) {
            (PureRxType::Atom, Item::Atom(_)) => true,
            (PureRxType::Data, Item::Node(RxNode::Data(_))) => true,
            (PureRxType::Elem(ns), Item::Node(RxNode::Elem(_, children))) => children
                .iter()
                .all(|c| ns.iter().any(|n| n.contains_item(&Item::Node(c.clone())))),
            (PureRxType::Union(a, b), _) => a.contains_item(item) || b.contains_item(item),
            _ => false,
        }
    }
}

// ---------------------------------------------------------------------------
// Dynamic membership

/// A value of any calculus, for calculus-agnostic membership checks.
#[derive(Clone, Copy, Debug)]
pub enum AnyValue<'a> {
    Nrc(&'a NrcValue),
    Rx(&'a RxValue),
    Pure(&'a PureRxValue),
    Item(&'a Item),
}

#[derive(Clone, Copy, Debug)]
pub enum AnyType<'a> {
    Nrc(&'a NrcType),
    Rx(&'a RxType),
    Pure(&'a PureRxType),
}

#[derive(Clone, Copy, Debug)]
pub enum AnyKind<'a> {
    Nrc(&'a NrcKind),
    Rx(&'a RxKind),
}

pub fn member(v: AnyValue<'_>, t: AnyType<'_>) -> Result<bool, TypeError> {
    match (v, t) {
        (AnyValue::Nrc(v), AnyType::Nrc(t)) => Ok(t.contains(v)),
        (AnyValue::Rx(v), AnyType::Rx(t)) => Ok(t.contains(v)),
        (AnyValue::Pure(v), AnyType::Pure(t)) => Ok(t.contains(v)),
        (AnyValue::Item(i), AnyType::Pure(t)) => Ok(t.contains_item(i)),
        _ => Err(TypeError::CalculusMismatch),
    }
}

pub fn kind_member(v: AnyValue<'_>, k: AnyKind<'_>) -> Result<bool, TypeError> {
    match (v, k) {
        (AnyValue::Nrc(v), AnyKind::Nrc(k)) => Ok(k.contains(v)),
        (AnyValue::Item(i), AnyKind::Rx(k)) => Ok(k.contains(i)),
        (AnyValue::Pure(PureRxValue::Item(i)), AnyKind::Rx(k)) => Ok(k.contains(i)),
        _ => Err(TypeError::CalculusMismatch),
    }
}

// ---------------------------------------------------------------------------
// Value spaces and enumeration

/// A description of a set of NRC values used to drive enumeration. It
/// extends NRC types with two constructors needed to enumerate encodings of
/// RX values exactly: `Diag` is the set of pairs `(a, a)` and `Single(t)`
/// the set of singletons over `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Void,
    Atom,
    Diag,
    Prod(Box<Space>, Box<Space>),
    Union(Box<Space>, Box<Space>),
    Coll(Box<Space>),
    Single(Box<Space>),
}

impl From<&NrcType> for Space {
    fn from(t: &NrcType) -> Self {
        match t {
            NrcType::Void => Space::Void,
            NrcType::Atom => Space::Atom,
            NrcType::Prod(a, b) => Space::Prod(Box::new((&**a).into()), Box::new((&**b).into())),
            NrcType::Union(a, b) => Space::Union(Box::new((&**a).into()), Box::new((&**b).into())),
            NrcType::Coll(t) => Space::Coll(Box::new((&**t).into())),
        }
    }
}

fn binom(n: &BigUint, i: usize) -> BigUint {
    let mut acc = BigUint::one();
    for j in 0..i {
        acc = acc * (n - BigUint::from(j)) / BigUint::from(j + 1);
    }
    acc
}

impl Space {
    fn prod(a: Space, b: Space) -> Space {
        Space::Prod(Box::new(a), Box::new(b))
    }

    fn union(a: Space, b: Space) -> Space {
        Space::Union(Box::new(a), Box::new(b))
    }

    fn coll(t: Space) -> Space {
        Space::Coll(Box::new(t))
    }

    /// The data-node encoding `(atom × atom) × coll(∅)` restricted to its
    /// diagonal.
    pub fn data_node() -> Space {
        Space::prod(Space::Diag, Space::coll(Space::Void))
    }

    /// The space of encodings of values of a pure RX type.
    pub fn of_pure(t: &PureRxType) -> Space {
        match t {
            PureRxType::Atom => Space::Atom,
            PureRxType::Data => Space::data_node(),
            PureRxType::Elem(ns) => Space::prod(
                Space::Atom,
                Space::coll(
                    ns.iter()
                        .map(Space::of_pure)
                        .reduce(Space::union)
                        .unwrap_or(Space::Void),
                ),
            ),
            PureRxType::Union(a, b) => Space::union(Space::of_pure(a), Space::of_pure(b)),
            PureRxType::Coll(t) => Space::coll(Space::of_pure(t)),
        }
    }

    /// The space of encodings of values of an RX type (the top-level set is
    /// encoded as a set of encoded items).
    pub fn of_rx(t: &RxType) -> Space {
        match t {
            RxType::Atom => Space::Atom,
            RxType::Data => Space::data_node(),
            RxType::Elem(g) => Space::prod(Space::Atom, Space::of_rx(g)),
            RxType::Union(a, b) => Space::union(Space::of_rx(a), Space::of_rx(b)),
            RxType::Coll(t) => Space::coll(Space::of_rx(t)),
            RxType::Single(t) => Space::Single(Box::new(Space::of_rx(t))),
        }
    }

    pub fn contains(&self, v: &NrcValue) -> bool {
        match (self, v) {
            (Space::Void, _) => false,
            (Space::Atom, NrcValue::Atom(_)) => true,
            (Space::Diag, NrcValue::Pair(a, b)) => a.as_atom().is_some() && a == b,
            (Space::Prod(p, q), NrcValue::Pair(a, b)) => p.contains(a) && q.contains(b),
            (Space::Union(p, q), _) => p.contains(v) || q.contains(v),
            (Space::Coll(t), NrcValue::Set(s)) => s.iter().all(|x| t.contains(x)),
            (Space::Single(t), NrcValue::Set(s)) => s.len() == 1 && s.iter().all(|x| t.contains(x)),
            _ => false,
        }
    }

    fn has_all_atoms(&self) -> bool {
        match self {
            Space::Atom => true,
            Space::Union(a, b) => a.has_all_atoms() || b.has_all_atoms(),
            _ => false,
        }
    }

    /// A space denoting the intersection of `self` and `other`.
    fn meet(&self, other: &Space) -> Space {
        use Space::*;
        match (self, other) {
            (Void, _) | (_, Void) => Void,
            (Union(a, b), _) => Space::union(a.meet(other), b.meet(other)),
            (_, Union(a, b)) => Space::union(self.meet(a), self.meet(b)),
            (Atom, Atom) => Atom,
            (Diag, Diag) => Diag,
            (Diag, Prod(p, q)) | (Prod(p, q), Diag) => {
                if p.has_all_atoms() && q.has_all_atoms() {
                    Diag
                } else {
                    Void
                }
            }
            (Prod(a, b), Prod(c, d)) => Space::prod(a.meet(c), b.meet(d)),
            (Coll(a), Coll(b)) => Space::coll(a.meet(b)),
            (Coll(a), Single(b)) | (Single(a), Coll(b)) | (Single(a), Single(b)) => {
                Single(Box::new(a.meet(b)))
            }
            _ => Void,
        }
    }

    /// The operands of top-level unions, without empty spaces.
    fn flatten_into(&self, out: &mut Vec<Space>) {
        match self {
            Space::Union(a, b) => {
                a.flatten_into(out);
                b.flatten_into(out);
            }
            Space::Void => {}
            t => {
                if !out.contains(t) {
                    out.push(t.clone());
                }
            }
        }
    }

    /// Exact number of values in the space with every set of size at most
    /// `k` and atoms drawn from a set of `n_atoms` atoms.
    pub fn count(&self, k: usize, n_atoms: usize) -> BigUint {
        match self {
            Space::Void => BigUint::zero(),
            Space::Atom | Space::Diag => BigUint::from(n_atoms),
            Space::Prod(a, b) => a.count(k, n_atoms) * b.count(k, n_atoms),
            Space::Union(..) => {
                let mut terms = Vec::new();
                self.flatten_into(&mut terms);
                count_union(&terms, k, n_atoms)
            }
            Space::Coll(t) => {
                let n = t.count(k, n_atoms);
                let top = n.to_usize().map_or(k, |n| n.min(k));
                (0..=top).map(|i| binom(&n, i)).sum()
            }
            Space::Single(t) => {
                if k == 0 {
                    BigUint::zero()
                } else {
                    t.count(k, n_atoms)
                }
            }
        }
    }

    /// All values of the space in `V_k` over `atoms`, in canonical order.
    pub fn enumerate(&self, k: usize, atoms: &[Atom], budget: u64) -> Result<Vec<NrcValue>, TypeError> {
        let count = self.count(k, atoms.len());
        if count > BigUint::from(budget) {
            return Err(TypeError::BudgetExceeded { count, budget });
        }
        let mut atoms: Vec<Atom> = atoms.to_vec();
        atoms.sort();
        atoms.dedup();
        let out = self.generate(k, &atoms);
        debug_assert_eq!(BigUint::from(out.len()), count);
        Ok(out)
    }

    fn generate(&self, k: usize, atoms: &[Atom]) -> Vec<NrcValue> {
        match self {
            Space::Void => Vec::new(),
            Space::Atom => atoms.iter().cloned().map(NrcValue::Atom).collect(),
            Space::Diag => atoms
                .iter()
                .map(|a| NrcValue::pair(NrcValue::Atom(a.clone()), NrcValue::Atom(a.clone())))
                .collect(),
            Space::Prod(a, b) => {
                let xs = a.generate(k, atoms);
                if xs.is_empty() {
                    return xs;
                }
                let ys = b.generate(k, atoms);
                let mut out = Vec::with_capacity(xs.len() * ys.len());
                for x in &xs {
                    for y in &ys {
                        out.push(NrcValue::pair(x.clone(), y.clone()));
                    }
                }
                out
            }
            Space::Union(a, b) => {
                let mut out = a.generate(k, atoms);
                out.extend(b.generate(k, atoms));
                out.sort();
                out.dedup();
                out
            }
            Space::Coll(t) => {
                if k == 0 {
                    return vec![NrcValue::empty()];
                }
                let elems = t.generate(k, atoms);
                let mut out = Vec::new();
                let mut chosen = Vec::new();
                subsets(&elems, 0, k, &mut chosen, &mut out);
                out.sort();
                out
            }
            Space::Single(t) => {
                if k == 0 {
                    return Vec::new();
                }
                t.generate(k, atoms).into_iter().map(|v| NrcValue::set([v])).collect()
            }
        }
    }
}

/// Size of the union of non-union spaces, by inclusion and exclusion on
/// the first term: `|t ∪ R| = |t| + |R| - |⋃{t ∩ r | r ∈ R}|`. The meet of
/// two non-union spaces is again a non-union space (or empty), so every
/// step shortens the term list.
fn count_union(terms: &[Space], k: usize, n_atoms: usize) -> BigUint {
    let Some((first, rest)) = terms.split_first() else {
        return BigUint::zero();
    };
    let mut overlap = Vec::new();
    for r in rest {
        first.meet(r).flatten_into(&mut overlap);
    }
    first.count(k, n_atoms) + count_union(rest, k, n_atoms) - count_union(&overlap, k, n_atoms)
}

fn subsets(elems: &[NrcValue], from: usize, k: usize, chosen: &mut Vec<NrcValue>, out: &mut Vec<NrcValue>) {
    out.push(NrcValue::set(chosen.iter().cloned()));
    if chosen.len() == k {
        return;
    }
    for i in from..elems.len() {
        chosen.push(elems[i].clone());
        subsets(elems, i + 1, k, chosen, out);
        chosen.pop();
    }
}

/// Number of values of `t` in `V_k` over `n_atoms` atoms.
pub fn count_values(t: &NrcType, k: usize, n_atoms: usize) -> BigUint {
    Space::from(t).count(k, n_atoms)
}

/// All values `v` of `t` with `v ∈ V_k` and atoms drawn from `atoms`, in
/// canonical order, under the default value budget.
pub fn enumerate_values(t: &NrcType, k: usize, atoms: &[Atom]) -> Result<Vec<NrcValue>, TypeError> {
    Space::from(t).enumerate(k, atoms, DEFAULT_VALUE_BUDGET)
}

/// All pure RX values of `t` whose sets (top-level and element contents)
/// have at most `k` elements, with atoms drawn from `atoms`.
pub fn enumerate_pure_values(
    t: &PureRxType,
    k: usize,
    atoms: &[Atom],
    budget: u64,
) -> Result<Vec<PureRxValue>, TypeError> {
    let encoded = Space::of_pure(t).enumerate(k, atoms, budget)?;
    Ok(encoded
        .iter()
        .map(|v| encode::decode_pure(v).expect("enumerated value is an encoding"))
        .collect())
}

/// All RX values of `t` whose sets have at most `k` elements, with atoms
/// drawn from `atoms`.
pub fn enumerate_rx_values(
    t: &RxType,
    k: usize,
    atoms: &[Atom],
    budget: u64,
) -> Result<Vec<RxValue>, TypeError> {
    let encoded = Space::of_rx(t).enumerate(k, atoms, budget)?;
    Ok(encoded
        .iter()
        .map(|v| encode::decode_rx(v).expect("enumerated value is an encoding"))
        .collect())
}

// ---------------------------------------------------------------------------
// Display

impl fmt::Display for NrcType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NrcType::Void => f.write_str("∅"),
            NrcType::Atom => f.write_str("atom"),
            NrcType::Prod(a, b) => write!(f, "({a} × {b})"),
            NrcType::Union(a, b) => write!(f, "({a} ∪ {b})"),
            NrcType::Coll(t) => write!(f, "coll({t})"),
        }
    }
}

impl fmt::Display for NrcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NrcKind::Atom => f.write_str("atom"),
            NrcKind::Coll => f.write_str("coll"),
            NrcKind::Prod(a, b) => write!(f, "({a} × {b})"),
            NrcKind::Union(a, b) => write!(f, "({a} ∪ {b})"),
        }
    }
}

impl fmt::Display for RxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RxKind::Atom => f.write_str("atom"),
            RxKind::Data => f.write_str("data"),
            RxKind::Elem => f.write_str("elem"),
            RxKind::Union(a, b) => write!(f, "({a} ∪ {b})"),
        }
    }
}

impl fmt::Display for RxType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RxType::Atom => f.write_str("atom"),
            RxType::Data => f.write_str("data"),
            RxType::Elem(g) => write!(f, "elem({g})"),
            RxType::Union(a, b) => write!(f, "({a} ∪ {b})"),
            RxType::Coll(t) => write!(f, "coll({t})"),
            RxType::Single(t) => write!(f, "single({t})"),
        }
    }
}

impl fmt::Display for PureRxType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PureRxType::Atom => f.write_str("atom"),
            PureRxType::Data => f.write_str("data"),
            PureRxType::Elem(ns) => {
                f.write_str("elem(")?;
                for (i, n) in ns.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ∪ ")?;
                    }
                    write!(f, "{n}")?;
                }
                f.write_str(")")
            }
            PureRxType::Union(a, b) => write!(f, "({a} ∪ {b})"),
            PureRxType::Coll(t) => write!(f, "coll({t})"),
        }
    }
}
