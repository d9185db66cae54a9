//! Values of the three calculi and the order-theoretic toolkit used by the
//! small-model arguments.
//!
//! All collections are kept in canonical form: sets are `BTreeSet`s, so they
//! are duplicate-free and iterate in the canonical value order. The derived
//! `Ord` instances fix that order:
//!
//! * atoms compare lexicographically (byte order) on their token;
//! * RX items order atoms before data nodes before element nodes;
//! * NRC values order atoms before pairs before sets;
//! * within a tier, comparison is recursive (sets compare as their sorted
//!   element sequences).
//!
//! Structural equality of canonical forms is therefore value equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Map, Value as Json};
use thiserror::Error;

/// Errors raised while building or converting values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("atom tokens must be nonempty")]
    EmptyToken,
    #[error("cannot join {left} with {right}: shapes differ")]
    JoinShape { left: String, right: String },
    #[error("malformed value JSON: {0}")]
    Json(String),
}

/// An atom, identified by its token.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

/// Prefix of atoms minted by the library (fresh atoms, reduction tags).
pub const RESERVED_PREFIX: char = '@';

impl Atom {
    pub fn new(token: impl AsRef<str>) -> Result<Atom, ValueError> {
        let token = token.as_ref();
        if token.is_empty() {
            return Err(ValueError::EmptyToken);
        }
        Ok(Atom(Arc::from(token)))
    }

    /// Builds an atom from a token known to be nonempty.
    ///
    /// Panics on the empty string.
    pub fn named(token: &str) -> Atom {
        Atom::new(token).expect("atom token must be nonempty")
    }

    /// The `i`-th fresh atom, `@i`.
    pub fn fresh(i: usize) -> Atom {
        Atom(Arc::from(format!("{RESERVED_PREFIX}{i}")))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        self.0.starts_with(RESERVED_PREFIX)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

// ---------------------------------------------------------------------------
// NRC values

/// A complex-object value: an atom, a pair, or a finite (possibly
/// heterogeneous) set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NrcValue {
    Atom(Atom),
    Pair(Arc<NrcValue>, Arc<NrcValue>),
    Set(Arc<BTreeSet<NrcValue>>),
}

impl NrcValue {
    pub fn atom(token: &str) -> NrcValue {
        NrcValue::Atom(Atom::named(token))
    }

    pub fn pair(first: NrcValue, second: NrcValue) -> NrcValue {
        NrcValue::Pair(Arc::new(first), Arc::new(second))
    }

    pub fn set(elements: impl IntoIterator<Item = NrcValue>) -> NrcValue {
        NrcValue::Set(Arc::new(elements.into_iter().collect()))
    }

    pub fn empty() -> NrcValue {
        NrcValue::Set(Arc::new(BTreeSet::new()))
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            NrcValue::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&NrcValue, &NrcValue)> {
        match self {
            NrcValue::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<&BTreeSet<NrcValue>> {
        match self {
            NrcValue::Set(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_set(&self) -> bool {
        matches!(self, NrcValue::Set(_))
    }
}

impl From<Atom> for NrcValue {
    fn from(a: Atom) -> Self {
        NrcValue::Atom(a)
    }
}

/// `v ⊑ w`: atoms are below themselves, pairs compare componentwise, and a
/// set is below another when each of its elements is below some element of
/// the other. Mixed shapes are never related.
pub fn subvalue(v: &NrcValue, w: &NrcValue) -> bool {
    match (v, w) {
        (NrcValue::Atom(a), NrcValue::Atom(b)) => a == b,
        (NrcValue::Pair(v1, v2), NrcValue::Pair(w1, w2)) => subvalue(v1, w1) && subvalue(v2, w2),
        (NrcValue::Set(vs), NrcValue::Set(ws)) => {
            vs.iter().all(|x| ws.iter().any(|y| subvalue(x, y)))
        }
        _ => false,
    }
}

/// `u ⊔ v`. Defined when both lie below a common value; distinct atoms or
/// mismatched shapes are reported as an error.
pub fn join(u: &NrcValue, v: &NrcValue) -> Result<NrcValue, ValueError> {
    match (u, v) {
        (NrcValue::Atom(a), NrcValue::Atom(b)) if a == b => Ok(u.clone()),
        (NrcValue::Pair(u1, u2), NrcValue::Pair(v1, v2)) => {
            Ok(NrcValue::pair(join(u1, v1)?, join(u2, v2)?))
        }
        (NrcValue::Set(us), NrcValue::Set(vs)) => {
            Ok(NrcValue::set(us.iter().chain(vs.iter()).cloned()))
        }
        _ => Err(ValueError::JoinShape {
            left: u.to_string(),
            right: v.to_string(),
        }),
    }
}

/// [`join`] with the common upper bound supplied; the bound is checked in
/// debug builds.
pub fn join_within(u: &NrcValue, v: &NrcValue, bound: &NrcValue) -> Result<NrcValue, ValueError> {
    debug_assert!(subvalue(u, bound) && subvalue(v, bound), "join witness is not an upper bound");
    join(u, v)
}

/// Replaces every set occurring in `v`, including `v` itself, by `∅`.
pub fn min_value(v: &NrcValue) -> NrcValue {
    match v {
        NrcValue::Atom(_) => v.clone(),
        NrcValue::Pair(a, b) => NrcValue::pair(min_value(a), min_value(b)),
        NrcValue::Set(_) => NrcValue::empty(),
    }
}

/// Membership in `V_k`: every set occurring in `v` has at most `k` elements.
pub fn in_vk(v: &NrcValue, k: usize) -> bool {
    match v {
        NrcValue::Atom(_) => true,
        NrcValue::Pair(a, b) => in_vk(a, k) && in_vk(b, k),
        NrcValue::Set(s) => s.len() <= k && s.iter().all(|x| in_vk(x, k)),
    }
}

/// Pointwise `⊑` on environments over the same variables.
pub fn subvalue_env(sigma: &Environment<NrcValue>, tau: &Environment<NrcValue>) -> bool {
    sigma.len() == tau.len()
        && sigma
            .iter()
            .all(|(x, v)| tau.get(x).is_some_and(|w| subvalue(v, w)))
}

/// Pointwise `⊔`; both environments must have the same domain.
pub fn join_env(
    sigma: &Environment<NrcValue>,
    tau: &Environment<NrcValue>,
) -> Result<Environment<NrcValue>, ValueError> {
    let mut out = Environment::new();
    for (x, v) in sigma.iter() {
        let w = tau.get(x).ok_or_else(|| ValueError::JoinShape {
            left: format!("environment binding {x}"),
            right: "no binding".into(),
        })?;
        out.insert(x, join(v, w)?);
    }
    if out.len() != tau.len() {
        return Err(ValueError::JoinShape {
            left: "environment".into(),
            right: "environment with a different domain".into(),
        });
    }
    Ok(out)
}

/// Pointwise [`min_value`].
pub fn min_env(sigma: &Environment<NrcValue>) -> Environment<NrcValue> {
    sigma.iter().map(|(x, v)| (x.to_string(), min_value(v))).collect()
}

/// Membership in `E_k`.
pub fn in_ek(sigma: &Environment<NrcValue>, k: usize) -> bool {
    sigma.values().all(|v| in_vk(v, k))
}

// ---------------------------------------------------------------------------
// RX values

/// A data node `⟨a⟩` or an element node `⟨a : N⟩`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RxNode {
    Data(Atom),
    Elem(Atom, Arc<BTreeSet<RxNode>>),
}

impl RxNode {
    pub fn data(token: &str) -> RxNode {
        RxNode::Data(Atom::named(token))
    }

    pub fn elem(name: &str, children: impl IntoIterator<Item = RxNode>) -> RxNode {
        RxNode::Elem(Atom::named(name), Arc::new(children.into_iter().collect()))
    }

    pub fn elem_with(name: Atom, children: BTreeSet<RxNode>) -> RxNode {
        RxNode::Elem(name, Arc::new(children))
    }
}

/// An atom or a node.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    Atom(Atom),
    Node(RxNode),
}

impl Item {
    pub fn atom(token: &str) -> Item {
        Item::Atom(Atom::named(token))
    }

    pub fn data(token: &str) -> Item {
        Item::Node(RxNode::data(token))
    }

    pub fn elem(name: &str, children: impl IntoIterator<Item = RxNode>) -> Item {
        Item::Node(RxNode::elem(name, children))
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Item::Atom(a) => Some(a),
            Item::Node(_) => None,
        }
    }

    pub fn as_node(&self) -> Option<&RxNode> {
        match self {
            Item::Node(n) => Some(n),
            Item::Atom(_) => None,
        }
    }
}

impl From<RxNode> for Item {
    fn from(n: RxNode) -> Self {
        Item::Node(n)
    }
}

impl From<Atom> for Item {
    fn from(a: Atom) -> Self {
        Item::Atom(a)
    }
}

/// A finite set of items.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RxValue(BTreeSet<Item>);

impl RxValue {
    pub fn new(items: BTreeSet<Item>) -> RxValue {
        RxValue(items)
    }

    pub fn empty() -> RxValue {
        RxValue(BTreeSet::new())
    }

    pub fn singleton(item: Item) -> RxValue {
        RxValue(BTreeSet::from([item]))
    }

    pub fn items(&self) -> &BTreeSet<Item> {
        &self.0
    }

    pub fn into_items(self) -> BTreeSet<Item> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Item> {
        self.0.iter()
    }

    /// The sole item, if this is a singleton.
    pub fn the_item(&self) -> Option<&Item> {
        if self.0.len() == 1 {
            self.0.first()
        } else {
            None
        }
    }
}

impl FromIterator<Item> for RxValue {
    fn from_iter<I: IntoIterator<Item = Item>>(iter: I) -> Self {
        RxValue(iter.into_iter().collect())
    }
}

/// A pure RX value: either a bare item or a set of items. An item is never
/// identified with its singleton.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PureRxValue {
    Item(Item),
    Set(BTreeSet<Item>),
}

impl PureRxValue {
    pub fn set(items: impl IntoIterator<Item = Item>) -> PureRxValue {
        PureRxValue::Set(items.into_iter().collect())
    }

    pub fn empty() -> PureRxValue {
        PureRxValue::Set(BTreeSet::new())
    }

    pub fn as_item(&self) -> Option<&Item> {
        match self {
            PureRxValue::Item(i) => Some(i),
            PureRxValue::Set(_) => None,
        }
    }

    pub fn as_set(&self) -> Option<&BTreeSet<Item>> {
        match self {
            PureRxValue::Set(s) => Some(s),
            PureRxValue::Item(_) => None,
        }
    }
}

impl From<Item> for PureRxValue {
    fn from(i: Item) -> Self {
        PureRxValue::Item(i)
    }
}

// ---------------------------------------------------------------------------
// Environments

/// A finite map from variable names to values of one calculus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Environment<V>(BTreeMap<String, V>);

impl<V> Default for Environment<V> {
    fn default() -> Self {
        Environment(BTreeMap::new())
    }
}

impl<V> Environment<V> {
    pub fn new() -> Self {
        Environment(BTreeMap::new())
    }

    pub fn get(&self, var: &str) -> Option<&V> {
        self.0.get(var)
    }

    pub fn insert(&mut self, var: impl Into<String>, value: V) -> Option<V> {
        self.0.insert(var.into(), value)
    }

    pub fn with(mut self, var: impl Into<String>, value: V) -> Self {
        self.insert(var, value);
        self
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &V)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn values(&self) -> impl Iterator<Item = &V> {
        self.0.values()
    }

    pub fn map<W>(&self, mut f: impl FnMut(&V) -> W) -> Environment<W> {
        Environment(self.0.iter().map(|(k, v)| (k.clone(), f(v))).collect())
    }

    pub fn try_map<W, E>(&self, mut f: impl FnMut(&V) -> Result<W, E>) -> Result<Environment<W>, E> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.0 {
            out.insert(k.clone(), f(v)?);
        }
        Ok(Environment(out))
    }
}

impl<V, S: Into<String>> FromIterator<(S, V)> for Environment<V> {
    fn from_iter<I: IntoIterator<Item = (S, V)>>(iter: I) -> Self {
        Environment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

// ---------------------------------------------------------------------------
// Atom maps

/// Values whose atom positions can be inspected and rewritten.
///
/// Mapping re-canonicalizes every set, so a non-injective map can merge
/// elements.
pub trait AtomSupport: Sized {
    fn collect_atoms(&self, out: &mut BTreeSet<Atom>);

    fn map_atoms(&self, f: &dyn Fn(&Atom) -> Atom) -> Self;

    fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }
}

impl AtomSupport for Atom {
    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        out.insert(self.clone());
    }

    fn map_atoms(&self, f: &dyn Fn(&Atom) -> Atom) -> Self {
        f(self)
    }
}

impl AtomSupport for NrcValue {
    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            NrcValue::Atom(a) => {
                out.insert(a.clone());
            }
            NrcValue::Pair(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            NrcValue::Set(s) => s.iter().for_each(|v| v.collect_atoms(out)),
        }
    }

    fn map_atoms(&self, f: &dyn Fn(&Atom) -> Atom) -> Self {
        match self {
            NrcValue::Atom(a) => NrcValue::Atom(f(a)),
            NrcValue::Pair(a, b) => NrcValue::pair(a.map_atoms(f), b.map_atoms(f)),
            NrcValue::Set(s) => NrcValue::set(s.iter().map(|v| v.map_atoms(f))),
        }
    }
}

impl AtomSupport for RxNode {
    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            RxNode::Data(a) => {
                out.insert(a.clone());
            }
            RxNode::Elem(a, children) => {
                out.insert(a.clone());
                children.iter().for_each(|n| n.collect_atoms(out));
            }
        }
    }

    fn map_atoms(&self, f: &dyn Fn(&Atom) -> Atom) -> Self {
        match self {
            RxNode::Data(a) => RxNode::Data(f(a)),
            RxNode::Elem(a, children) => {
                RxNode::elem_with(f(a), children.iter().map(|n| n.map_atoms(f)).collect())
            }
        }
    }
}

impl AtomSupport for Item {
    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Item::Atom(a) => {
                out.insert(a.clone());
            }
            Item::Node(n) => n.collect_atoms(out),
        }
    }

    fn map_atoms(&self, f: &dyn Fn(&Atom) -> Atom) -> Self {
        match self {
            Item::Atom(a) => Item::Atom(f(a)),
            Item::Node(n) => Item::Node(n.map_atoms(f)),
        }
    }
}

impl AtomSupport for RxValue {
    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        self.0.iter().for_each(|i| i.collect_atoms(out));
    }

    fn map_atoms(&self, f: &dyn Fn(&Atom) -> Atom) -> Self {
        self.0.iter().map(|i| i.map_atoms(f)).collect()
    }
}

impl AtomSupport for PureRxValue {
    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            PureRxValue::Item(i) => i.collect_atoms(out),
            PureRxValue::Set(s) => s.iter().for_each(|i| i.collect_atoms(out)),
        }
    }

    fn map_atoms(&self, f: &dyn Fn(&Atom) -> Atom) -> Self {
        match self {
            PureRxValue::Item(i) => PureRxValue::Item(i.map_atoms(f)),
            PureRxValue::Set(s) => PureRxValue::Set(s.iter().map(|i| i.map_atoms(f)).collect()),
        }
    }
}

impl<V: AtomSupport> AtomSupport for Environment<V> {
    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        self.0.values().for_each(|v| v.collect_atoms(out));
    }

    fn map_atoms(&self, f: &dyn Fn(&Atom) -> Atom) -> Self {
        self.map(|v| v.map_atoms(f))
    }
}

/// A permutation of atoms with finite support.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Permutation(BTreeMap<Atom, Atom>);

impl Permutation {
    pub fn identity() -> Self {
        Permutation(BTreeMap::new())
    }

    /// Builds a permutation from explicit `from ↦ to` pairs. Returns `None`
    /// unless the pairs describe a bijection of their support.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Atom, Atom)>) -> Option<Self> {
        let map: BTreeMap<Atom, Atom> = pairs.into_iter().collect();
        let domain: BTreeSet<&Atom> = map.keys().collect();
        let image: BTreeSet<&Atom> = map.values().collect();
        (domain == image && image.len() == map.len()).then_some(Permutation(map))
    }

    /// The transposition swapping `a` and `b`.
    pub fn swap(a: Atom, b: Atom) -> Self {
        if a == b {
            return Permutation::identity();
        }
        Permutation(BTreeMap::from([(a.clone(), b.clone()), (b, a)]))
    }

    pub fn apply(&self, a: &Atom) -> Atom {
        self.0.get(a).cloned().unwrap_or_else(|| a.clone())
    }

    pub fn inverse(&self) -> Self {
        Permutation(self.0.iter().map(|(k, v)| (v.clone(), k.clone())).collect())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        let support: BTreeSet<Atom> = self.0.keys().chain(other.0.keys()).cloned().collect();
        Permutation(
            support
                .into_iter()
                .map(|a| {
                    let b = self.apply(&other.apply(&a));
                    (a, b)
                })
                .filter(|(a, b)| a != b)
                .collect(),
        )
    }

    pub fn fixes(&self, a: &Atom) -> bool {
        self.apply(a) == *a
    }

    pub fn support(&self) -> impl Iterator<Item = &Atom> {
        self.0.keys()
    }

    pub fn lift<V: AtomSupport>(&self, v: &V) -> V {
        v.map_atoms(&|a| self.apply(a))
    }
}

// ---------------------------------------------------------------------------
// JSON form

/// Conversion to and from the value JSON form:
/// `{"atom":"a"} | {"pair":[V,V]} | {"set":[V,...]} | {"data":"a"} |
/// {"elem":{"name":"a","children":[N,...]}}`.
pub trait JsonForm: Sized {
    fn to_json(&self) -> Json;
    fn from_json(json: &Json) -> Result<Self, ValueError>;
}

fn single_key(json: &Json) -> Result<(&str, &Json), ValueError> {
    let obj = json
        .as_object()
        .ok_or_else(|| ValueError::Json(format!("expected an object, got {json}")))?;
    if obj.len() != 1 {
        return Err(ValueError::Json(format!("expected exactly one key in {json}")));
    }
    let (k, v) = obj.iter().next().expect("one entry");
    Ok((k.as_str(), v))
}

fn json_atom(json: &Json) -> Result<Atom, ValueError> {
    let s = json
        .as_str()
        .ok_or_else(|| ValueError::Json(format!("expected an atom token string, got {json}")))?;
    Atom::new(s)
}

fn json_array(json: &Json) -> Result<&Vec<Json>, ValueError> {
    json.as_array()
        .ok_or_else(|| ValueError::Json(format!("expected an array, got {json}")))
}

impl JsonForm for NrcValue {
    fn to_json(&self) -> Json {
        match self {
            NrcValue::Atom(a) => json!({ "atom": a.as_str() }),
            NrcValue::Pair(a, b) => json!({ "pair": [a.to_json(), b.to_json()] }),
            NrcValue::Set(s) => json!({ "set": s.iter().map(JsonForm::to_json).collect::<Vec<_>>() }),
        }
    }

    fn from_json(json: &Json) -> Result<Self, ValueError> {
        match single_key(json)? {
            ("atom", v) => Ok(NrcValue::Atom(json_atom(v)?)),
            ("pair", v) => match json_array(v)?.as_slice() {
                [a, b] => Ok(NrcValue::pair(NrcValue::from_json(a)?, NrcValue::from_json(b)?)),
                _ => Err(ValueError::Json("a pair has exactly two components".into())),
            },
            ("set", v) => Ok(NrcValue::Set(Arc::new(
                json_array(v)?
                    .iter()
                    .map(NrcValue::from_json)
                    .collect::<Result<_, _>>()?,
            ))),
            (k, _) => Err(ValueError::Json(format!("unknown NRC value form `{k}`"))),
        }
    }
}

impl JsonForm for RxNode {
    fn to_json(&self) -> Json {
        match self {
            RxNode::Data(a) => json!({ "data": a.as_str() }),
            RxNode::Elem(name, children) => json!({
                "elem": {
                    "name": name.as_str(),
                    "children": children.iter().map(JsonForm::to_json).collect::<Vec<_>>(),
                }
            }),
        }
    }

    fn from_json(json: &Json) -> Result<Self, ValueError> {
        match single_key(json)? {
            ("data", v) => Ok(RxNode::Data(json_atom(v)?)),
            ("elem", v) => {
                let obj = v
                    .as_object()
                    .ok_or_else(|| ValueError::Json("elem body must be an object".into()))?;
                let name = json_atom(
                    obj.get("name")
                        .ok_or_else(|| ValueError::Json("elem without name".into()))?,
                )?;
                let children = match obj.get("children") {
                    None => BTreeSet::new(),
                    Some(c) => json_array(c)?
                        .iter()
                        .map(RxNode::from_json)
                        .collect::<Result<_, _>>()?,
                };
                if obj.keys().any(|k| k != "name" && k != "children") {
                    return Err(ValueError::Json("unexpected key in elem body".into()));
                }
                Ok(RxNode::elem_with(name, children))
            }
            (k, _) => Err(ValueError::Json(format!("expected a node, found `{k}`"))),
        }
    }
}

impl JsonForm for Item {
    fn to_json(&self) -> Json {
        match self {
            Item::Atom(a) => json!({ "atom": a.as_str() }),
            Item::Node(n) => n.to_json(),
        }
    }

    fn from_json(json: &Json) -> Result<Self, ValueError> {
        match single_key(json)? {
            ("atom", v) => Ok(Item::Atom(json_atom(v)?)),
            _ => Ok(Item::Node(RxNode::from_json(json)?)),
        }
    }
}

fn items_json(items: &BTreeSet<Item>) -> Json {
    json!({ "set": items.iter().map(JsonForm::to_json).collect::<Vec<_>>() })
}

fn items_from_json(json: &Json) -> Result<BTreeSet<Item>, ValueError> {
    json_array(json)?.iter().map(Item::from_json).collect()
}

impl JsonForm for RxValue {
    fn to_json(&self) -> Json {
        items_json(&self.0)
    }

    fn from_json(json: &Json) -> Result<Self, ValueError> {
        match single_key(json)? {
            ("set", v) => Ok(RxValue(items_from_json(v)?)),
            (k, _) => Err(ValueError::Json(format!("an RX value is a set of items, found `{k}`"))),
        }
    }
}

impl JsonForm for PureRxValue {
    fn to_json(&self) -> Json {
        match self {
            PureRxValue::Item(i) => i.to_json(),
            PureRxValue::Set(s) => items_json(s),
        }
    }

    fn from_json(json: &Json) -> Result<Self, ValueError> {
        match single_key(json)? {
            ("set", v) => Ok(PureRxValue::Set(items_from_json(v)?)),
            _ => Ok(PureRxValue::Item(Item::from_json(json)?)),
        }
    }
}

impl<V: JsonForm> JsonForm for Environment<V> {
    fn to_json(&self) -> Json {
        Json::Object(
            self.0
                .iter()
                .map(|(k, v)| (k.clone(), v.to_json()))
                .collect::<Map<_, _>>(),
        )
    }

    fn from_json(json: &Json) -> Result<Self, ValueError> {
        let obj = json
            .as_object()
            .ok_or_else(|| ValueError::Json("an environment is a JSON object".into()))?;
        obj.iter()
            .map(|(k, v)| Ok((k.clone(), V::from_json(v)?)))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Display

fn write_set<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &BTreeSet<T>) -> fmt::Result {
    if items.is_empty() {
        return f.write_str("∅");
    }
    f.write_str("{")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("}")
}

impl fmt::Display for NrcValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NrcValue::Atom(a) => write!(f, "{a}"),
            NrcValue::Pair(a, b) => write!(f, "({a}, {b})"),
            NrcValue::Set(s) => write_set(f, s),
        }
    }
}

impl fmt::Debug for NrcValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RxNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RxNode::Data(a) => write!(f, "⟨{a}⟩"),
            RxNode::Elem(a, children) => {
                write!(f, "⟨{a} : ")?;
                write_set(f, children)?;
                f.write_str("⟩")
            }
        }
    }
}

impl fmt::Debug for RxNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Atom(a) => write!(f, "{a}"),
            Item::Node(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Debug for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_set(f, &self.0)
    }
}

impl fmt::Debug for RxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PureRxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PureRxValue::Item(i) => write!(f, "{i}"),
            PureRxValue::Set(s) => write_set(f, s),
        }
    }
}

impl fmt::Debug for PureRxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<V: fmt::Display> fmt::Display for Environment<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} ↦ {v}")?;
        }
        f.write_str("]")
    }
}
