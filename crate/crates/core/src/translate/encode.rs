//! The encoding of pure RX values as NRC values, its inverse on the image,
//! and the matching translation of types and kinds.

use std::collections::BTreeSet;

use crate::types::{NrcKind, NrcType, PureRxType, RxKind};
use crate::value::{Atom, Environment, Item, NrcValue, PureRxValue, RxNode, RxValue};

pub fn enc_node(n: &RxNode) -> NrcValue {
    match n {
        RxNode::Data(a) => {
            let a = NrcValue::Atom(a.clone());
            NrcValue::pair(NrcValue::pair(a.clone(), a), NrcValue::empty())
        }
        RxNode::Elem(name, children) => {
            NrcValue::pair(NrcValue::Atom(name.clone()), NrcValue::set(children.iter().map(enc_node)))
        }
    }
}

pub fn enc_item(i: &Item) -> NrcValue {
    match i {
        Item::Atom(a) => NrcValue::Atom(a.clone()),
        Item::Node(n) => enc_node(n),
    }
}

pub fn enc(v: &PureRxValue) -> NrcValue {
    match v {
        PureRxValue::Item(i) => enc_item(i),
        PureRxValue::Set(s) => NrcValue::set(s.iter().map(enc_item)),
    }
}

/// Encodes an RX value (a set of items) the same way as a pure RX set.
pub fn enc_rx(v: &RxValue) -> NrcValue {
    NrcValue::set(v.iter().map(enc_item))
}

pub fn enc_env(env: &Environment<PureRxValue>) -> Environment<NrcValue> {
    env.map(enc)
}

fn atom_of(v: &NrcValue) -> Option<Atom> {
    v.as_atom().cloned()
}

pub fn decode_node(v: &NrcValue) -> Option<RxNode> {
    let (l, r) = v.as_pair()?;
    if let Some(name) = atom_of(l) {
        let children = r.as_set()?.iter().map(decode_node).collect::<Option<BTreeSet<_>>>()?;
        return Some(RxNode::elem_with(name, children));
    }
    let (a, b) = l.as_pair()?;
    let a = atom_of(a)?;
    (atom_of(b)? == a && r.as_set()?.is_empty()).then_some(RxNode::Data(a))
}

pub fn decode_item(v: &NrcValue) -> Option<Item> {
    match v {
        NrcValue::Atom(a) => Some(Item::Atom(a.clone())),
        _ => decode_node(v).map(Item::Node),
    }
}

/// The pure RX value encoded by `v`, if `v` is an encoding.
pub fn decode_pure(v: &NrcValue) -> Option<PureRxValue> {
    match v.as_set() {
        Some(s) => s.iter().map(decode_item).collect::<Option<BTreeSet<_>>>().map(PureRxValue::Set),
        None => decode_item(v).map(PureRxValue::Item),
    }
}

/// The RX value encoded by `v`, if `v` is the encoding of a set of items.
pub fn decode_rx(v: &NrcValue) -> Option<RxValue> {
    v.as_set()?.iter().map(decode_item).collect::<Option<BTreeSet<_>>>().map(RxValue::new)
}

pub fn decode_env(env: &Environment<NrcValue>) -> Option<Environment<PureRxValue>> {
    env.try_map(|v| decode_pure(v).ok_or(())).ok()
}

/// `(atom × atom) × coll(∅)`.
pub fn data_type() -> NrcType {
    NrcType::prod(NrcType::prod(NrcType::Atom, NrcType::Atom), NrcType::coll(NrcType::Void))
}

pub fn translate_type(t: &PureRxType) -> NrcType {
    match t {
        PureRxType::Atom => NrcType::Atom,
        PureRxType::Data => data_type(),
        PureRxType::Elem(ns) => NrcType::prod(
            NrcType::Atom,
            NrcType::coll(ns.iter().map(translate_type).reduce(NrcType::union).unwrap_or(NrcType::Void)),
        ),
        PureRxType::Union(a, b) => NrcType::union(translate_type(a), translate_type(b)),
        PureRxType::Coll(t) => NrcType::coll(translate_type(t)),
    }
}

pub fn data_kind() -> NrcKind {
    NrcKind::prod(NrcKind::prod(NrcKind::Atom, NrcKind::Atom), NrcKind::Coll)
}

pub fn elem_kind() -> NrcKind {
    NrcKind::prod(NrcKind::Atom, NrcKind::Coll)
}

pub fn translate_kind(k: &RxKind) -> NrcKind {
    match k {
        RxKind::Atom => NrcKind::Atom,
        RxKind::Data => data_kind(),
        RxKind::Elem => elem_kind(),
        RxKind::Union(a, b) => NrcKind::union(translate_kind(a), translate_kind(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{enumerate_pure_values, Space, DEFAULT_VALUE_BUDGET};
    use crate::value::NrcValue as V;

    #[test]
    fn examples() {
        assert_eq!(enc(&PureRxValue::Item(Item::atom("a"))), V::atom("a"));
        let b = V::atom("b");
        let data_b = V::pair(V::pair(b.clone(), b), V::empty());
        assert_eq!(enc(&PureRxValue::Item(Item::data("b"))), data_b);
        let e = PureRxValue::Item(Item::elem("a", [RxNode::data("b")]));
        assert_eq!(enc(&e), V::pair(V::atom("a"), V::set([data_b])));
        assert_eq!(translate_type(&PureRxType::Data), data_type());
        assert_eq!(translate_kind(&RxKind::Elem), elem_kind());
        assert_eq!(
            translate_type(&PureRxType::coll(PureRxType::union(PureRxType::Atom, PureRxType::Data))),
            NrcType::coll(NrcType::union(NrcType::Atom, data_type()))
        );
    }

    #[test]
    fn decode_rejects_non_encodings() {
        let off_diagonal = V::pair(V::pair(V::atom("a"), V::atom("b")), V::empty());
        assert_eq!(decode_pure(&off_diagonal), None);
        assert_eq!(decode_pure(&V::pair(V::atom("a"), V::set([V::atom("b")]))), None);
        assert_eq!(decode_rx(&V::atom("a")), None);
    }

    #[test]
    fn round_trip_and_type_soundness() {
        let atoms = [Atom::named("a"), Atom::named("b")];
        let t = PureRxType::union(
            PureRxType::coll(PureRxType::union(PureRxType::Atom, PureRxType::Elem(vec![PureRxType::Data]))),
            PureRxType::Elem(vec![PureRxType::Data, PureRxType::Elem(vec![])]),
        );
        let vs = enumerate_pure_values(&t, 2, &atoms, DEFAULT_VALUE_BUDGET).unwrap();
        assert!(!vs.is_empty());
        let tt = translate_type(&t);
        for v in vs {
            let e = enc(&v);
            assert_eq!(decode_pure(&e).as_ref(), Some(&v));
            assert!(t.contains(&v) && tt.contains(&e) && Space::of_pure(&t).contains(&e));
        }
    }
}
