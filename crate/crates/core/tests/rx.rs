mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use nrc_core::rx::{
    eval_pure_rx, eval_rx, oracles_by_name, rx_children, rx_construct, rx_data, rx_name, BracketOracles, DefaultOracles,
    Oracles, PureReason, RxReason,
};
use nrc_core::syntax::parse::{parse_pure_rx, parse_rx};
use nrc_core::translate::encode::decode_pure;
use nrc_core::translate::ra::{compile_ra, encode_database};
use nrc_core::types::{kind_member, AnyKind, AnyValue, RxKind};
use nrc_core::{Atom, Environment, Item, PureRxValue, Reason, RxNode, RxValue};

fn set(items: impl IntoIterator<Item = Item>) -> RxValue {
    items.into_iter().collect()
}

fn env(pairs: &[(&str, RxValue)]) -> Environment<RxValue> {
    pairs.iter().fold(Environment::new(), |e, (x, v)| e.with(*x, v.clone()))
}

fn penv(pairs: &[(&str, PureRxValue)]) -> Environment<PureRxValue> {
    pairs.iter().fold(Environment::new(), |e, (x, v)| e.with(*x, v.clone()))
}

fn rx(src: &str, env: &Environment<RxValue>) -> Result<RxValue, RxReason> {
    eval_rx(&parse_rx(src).unwrap().expr, env, &DefaultOracles).map_err(|u| u.reason)
}

fn pure(src: &str, env: &Environment<PureRxValue>) -> Result<PureRxValue, PureReason> {
    eval_pure_rx(&parse_pure_rx(src).unwrap().expr, env).map_err(|u| u.reason)
}

#[test]
fn data_of_values() {
    let o = DefaultOracles;
    assert_eq!(rx_data(&RxValue::empty(), &o), RxValue::empty());
    assert_eq!(rx_data(&set([Item::atom("a"), Item::data("b")]), &o), set([Item::atom("a"), Item::atom("b")]));
    let leaf = RxNode::elem("a", []);
    let want = o.content(&Atom::named("a"), &BTreeSet::new());
    assert_eq!(rx_data(&set([Item::Node(leaf)]), &o), set([Item::Atom(want)]));
    assert_eq!(o.concat(&BTreeSet::new()), Atom::named("ε"));
}

#[test]
fn helper_functions() {
    let o = DefaultOracles;
    assert_eq!(rx_name(&set([Item::elem("a", [])]), &o), Some(set([Item::atom("a")])));
    assert_eq!(rx_name(&RxValue::empty(), &o), Some(set([Item::Atom(o.concat(&BTreeSet::new()))])));
    assert_eq!(rx_name(&set([Item::elem("a", []), Item::elem("b", [])]), &o), None);
    assert_eq!(rx_name(&set([Item::atom("a")]), &o), None);

    let v = set([Item::elem("a", [RxNode::data("b")]), Item::elem("c", [])]);
    assert_eq!(rx_children(&v), Some(set([Item::data("b")])));
    assert_eq!(rx_children(&set([Item::atom("a")])), None);
    assert_eq!(rx_children(&set([Item::data("a")])), Some(RxValue::empty()));

    let n = rx_construct(&set([Item::atom("a")]), &set([Item::atom("b"), Item::elem("c", [])]), &o).unwrap();
    assert_eq!(n, RxNode::elem("a", [RxNode::data("b"), RxNode::elem("c", [])]));
    assert_eq!(rx_construct(&set([Item::atom("a"), Item::atom("b")]), &RxValue::empty(), &o), None);
}

#[test]
fn rx_evaluation_examples() {
    assert_eq!(rx("()", &Environment::new()), Ok(RxValue::empty()));
    let e = env(&[("x", set([Item::atom("a")])), ("y", set([Item::atom("b")]))]);
    assert_eq!(rx("(elem x y)", &e), Ok(set([Item::elem("a", [RxNode::data("b")])])));
    let e = env(&[("x", set([Item::atom("a"), Item::atom("b")]))]);
    assert_eq!(rx("(elem x ())", &e), Err(RxReason::ConstructNameNotSingleton));
}

#[test]
fn rx_undefinedness_reasons_and_paths() {
    let atoms = env(&[("x", set([Item::atom("a")])), ("y", set([Item::atom("a"), Item::atom("b")]))]);
    assert_eq!(rx("(children x)", &atoms), Err(RxReason::ChildrenSawAtom));
    assert_eq!(rx("(name x)", &atoms), Err(RxReason::NameNotSingletonElem));
    assert_eq!(rx("(ifeq x y x x)", &atoms), Err(RxReason::EqNotSingletonAtom));
    // Only the selected branch is evaluated.
    assert_eq!(rx("(ifeq x x x (children x))", &atoms), Ok(set([Item::atom("a")])));
    assert_eq!(rx("(ifempty x (children x) y)", &atoms).map(|v| v.len()), Ok(2));

    let e = parse_rx("(seq x (for z y (text (children z))))").unwrap().expr;
    let u = eval_rx(&e, &atoms, &DefaultOracles).unwrap_err();
    assert_eq!(u.path, vec![1, 1, 0]);
    assert_eq!(e.at(&u.path), parse_rx("(children z)").ok().map(|p| p.expr).as_ref());
    assert_eq!(u.reason.code(), "children-saw-atom");
}

#[test]
fn for_filters_by_kind_and_binds_singletons() {
    let v = set([Item::atom("a"), Item::data("b"), Item::elem("c", [])]);
    let e = env(&[("x", v)]);
    assert_eq!(rx("(for y (kind-atom) x y)", &e), Ok(set([Item::atom("a")])));
    assert_eq!(rx("(for y (kind-data) x (data y))", &e), Ok(set([Item::atom("b")])));
    assert_eq!(rx("(for y (kind-elem) x (name y))", &e), Ok(set([Item::atom("c")])));
    assert_eq!(rx("(for y x (text y))", &e).map(|v| v.len()), Ok(3));
}

#[test]
fn pure_evaluation_examples() {
    let node = PureRxValue::Item(Item::elem("a", []));
    assert_eq!(pure("(name x)", &penv(&[("x", node)])), Ok(PureRxValue::Item(Item::atom("a"))));
    let a = PureRxValue::Item(Item::atom("a"));
    assert_eq!(pure("(sing x)", &penv(&[("x", a.clone())])), Ok(PureRxValue::set([Item::atom("a")])));
    assert_eq!(pure("(sing x)", &penv(&[("x", PureRxValue::empty())])), Err(PureReason::SingletonOfNonItem));
    assert_eq!(pure("(text x)", &penv(&[("x", a.clone())])), Ok(PureRxValue::Item(Item::data("a"))));
    assert_eq!(pure("(seq x x)", &penv(&[("x", a.clone())])), Err(PureReason::SeqOfNonSet));
    assert_eq!(pure("(text x)", &penv(&[("x", PureRxValue::empty())])), Err(PureReason::TextOfNonAtom));
    assert_eq!(pure("(name x)", &penv(&[("x", a.clone())])), Err(PureReason::NameOfNonElem));
    let both = PureRxValue::set([Item::atom("a"), Item::atom("b")]);
    assert_eq!(pure("(for y x (sing (text y)))", &penv(&[("x", both.clone())])).map(|v| v.as_set().unwrap().len()), Ok(2));
    assert_eq!(pure("(for y x y)", &penv(&[("x", both)])), Err(PureReason::ForBodyNonSet));
    assert_eq!(pure("(for y x (sing y))", &penv(&[("x", a)])), Err(PureReason::ForOverNonSet));
}

#[test]
fn reason_codes_are_distinct() {
    let rx: BTreeSet<&str> = [
        RxReason::ConstructNameNotSingleton,
        RxReason::NameNotSingletonElem,
        RxReason::ChildrenSawAtom,
        RxReason::EqNotSingletonAtom,
    ]
    .into_iter()
    .map(Reason::code)
    .collect();
    assert_eq!(rx.len(), 4);
}

#[test]
fn oracle_suites_differ_on_element_content() {
    assert!(oracles_by_name("default").is_some() && oracles_by_name("bracket").is_some() && oracles_by_name("x").is_none());
    let v = set([Item::elem("a", [RxNode::data("b")])]);
    assert_ne!(rx_data(&v, &DefaultOracles), rx_data(&v, &BracketOracles));
}

/// Compiled relational queries only inspect attribute names and data nodes,
/// so the oracle suite never shows through on encoded databases.
#[test]
fn compiled_queries_are_oracle_independent() {
    let schema = common::ra_schema();
    let dbs = common::ra_databases();
    for q in common::ra_queries(2).into_iter().take(60) {
        let program = nrc_core::syntax::ast::RaProgram { schema: schema.clone(), query: q };
        let (e, _) = compile_ra(&program).unwrap();
        for db in dbs.iter().step_by(7) {
            let env = encode_database(db);
            let a = eval_rx(&e, &env, &DefaultOracles);
            let b = eval_rx(&e, &env, &BracketOracles);
            assert_eq!(a, b);
        }
    }
}

fn rx_value() -> impl Strategy<Value = RxValue> {
    let token = prop::sample::select(vec!["a", "b"]);
    let node = token.clone().prop_map(RxNode::data).prop_recursive(2, 6, 2, move |n| {
        (prop::sample::select(vec!["a", "b"]), prop::collection::btree_set(n, 0..3)).prop_map(|(t, c)| RxNode::elem(t, c))
    });
    let item = prop_oneof![token.prop_map(Item::atom), node.prop_map(Item::Node)];
    prop::collection::btree_set(item, 0..3).prop_map(RxValue::new)
}

fn rx_exprs() -> Vec<nrc_core::syntax::ast::RxExpr> {
    common::rx_depth2()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rx_evaluation_is_deterministic(v in rx_value(), w in rx_value()) {
        let env = Environment::new().with("x", v).with("y", w);
        for e in rx_exprs().iter().filter(|e| e.free_vars().iter().all(|x| x == "x" || x == "y")).take(400) {
            prop_assert_eq!(eval_rx(e, &env, &DefaultOracles), eval_rx(e, &env, &DefaultOracles));
        }
    }

    #[test]
    fn pure_for_loops_keep_only_items_of_their_kind(items in prop::collection::btree_set(
        prop_oneof![Just(Item::atom("a")), Just(Item::data("b")), Just(Item::elem("c", [])), Just(Item::elem("a", [RxNode::data("a")]))],
        0..4,
    )) {
        let x = PureRxValue::Set(items);
        for (kind, src) in [
            (RxKind::Atom, "(for y (kind-atom) x (sing y))"),
            (RxKind::Data, "(for y (kind-data) x (sing y))"),
            (RxKind::Elem, "(for y (kind-elem) x (sing y))"),
            (RxKind::union(RxKind::Atom, RxKind::Elem), "(for y (kind-sum (kind-atom) (kind-elem)) x (sing y))"),
        ] {
            let out = pure(src, &penv(&[("x", x.clone())])).unwrap();
            let out = out.as_set().unwrap();
            for i in out {
                let v = PureRxValue::Item(i.clone());
                prop_assert!(kind_member(AnyValue::Pure(&v), AnyKind::Rx(&kind)).unwrap());
            }
            let expected = x.as_set().unwrap().iter().filter(|i| kind.contains(i)).count();
            prop_assert_eq!(out.len(), expected);
        }
    }
}

#[test]
fn pure_results_are_valid_values() {
    let values = vec![
        PureRxValue::Item(Item::atom("a")),
        PureRxValue::empty(),
        PureRxValue::set([Item::atom("a"), Item::elem("b", [RxNode::data("a")])]),
        PureRxValue::Item(Item::elem("b", [RxNode::data("a"), RxNode::elem("a", [])])),
    ];
    for e in common::pure_corpus_two_vars().iter().step_by(13) {
        let names: Vec<String> = e.free_vars().into_iter().collect();
        let mut envs = vec![Environment::new()];
        for x in &names {
            envs = envs.into_iter().flat_map(|env| values.iter().map(move |v| env.clone().with(x.clone(), v.clone()))).collect();
        }
        for env in envs {
            if let Ok(v) = eval_pure_rx(e, &env) {
                let round = decode_pure(&nrc_core::translate::enc(&v));
                assert_eq!(round.as_ref(), Some(&v));
            }
        }
    }
}
