mod common;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::seq::SliceRandom;

use nrc_core::nrc::{complexity, eval_penrc, NrcReason};
use nrc_core::syntax::ast::NrcExpr;
use nrc_core::syntax::parse::parse_penrc;
use nrc_core::types::Space;
use nrc_core::value::{in_ek, in_vk, subvalue};
use nrc_core::{Environment, NrcValue};

const WORKED_E: &str = "(for x R (for y x (ifeq z y (fst z) y)))";

fn a(t: &str) -> NrcValue {
    NrcValue::atom(t)
}

fn set(vs: impl IntoIterator<Item = NrcValue>) -> NrcValue {
    NrcValue::set(vs)
}

fn eval(src: &str, env: &Environment<NrcValue>) -> Result<NrcValue, NrcReason> {
    eval_penrc(&parse_penrc(src).unwrap().expr, env).map_err(|u| u.reason)
}

#[test]
fn evaluation_examples() {
    let env = Environment::new().with("x", NrcValue::pair(a("a"), a("b")));
    assert_eq!(eval("(fst x)", &env), Ok(a("a")));
    assert_eq!(eval("(snd x)", &env), Ok(a("b")));

    let big = Environment::new()
        .with("R", set([set([a("a"), a("b")]), set([a("c")]), set([a("a"), a("b"), a("d")])]))
        .with("z", a("d"));
    assert_eq!(eval(WORKED_E, &big), Err(NrcReason::ProjOnNonPair));
    let small = Environment::new().with("R", set([set([a("d")])])).with("z", a("d"));
    assert_eq!(eval(WORKED_E, &small), Err(NrcReason::ProjOnNonPair));
    let fine = Environment::new().with("R", set([set([a("a"), a("b")])])).with("z", a("d"));
    assert_eq!(eval(WORKED_E, &fine), Ok(set([set([a("a"), a("b")])])));
}

#[test]
fn undefinedness_reasons() {
    let env = Environment::new().with("x", a("a")).with("s", set([a("a")])).with("p", NrcValue::pair(a("a"), a("a")));
    assert_eq!(eval("(union x s)", &env), Err(NrcReason::UnionOnNonSet));
    assert_eq!(eval("(flatten s)", &env), Err(NrcReason::FlattenOnNonSetOfSets));
    assert_eq!(eval("(ifeq s x x x)", &env), Err(NrcReason::EqOnNonAtom));
    assert_eq!(eval("(for y p y)", &env), Err(NrcReason::ComprehensionOnNonSet));
    assert_eq!(eval("(fst s)", &env), Err(NrcReason::ProjOnNonPair));
    // Branches that are not taken never fail.
    assert_eq!(eval("(ifeq x x s (fst s))", &env), Ok(set([a("a")])));
    assert_eq!(eval("(ifkind p (kind-coll) (fst s) (fst p))", &env), Ok(a("a")));
    assert_eq!(eval("(ifkind s (kind-prod (kind-atom) (kind-atom)) (fst s) x)", &env), Ok(a("a")));
}

#[test]
fn comprehension_collapses_duplicates() {
    let env = Environment::new().with("R", set([NrcValue::pair(a("a"), a("b")), NrcValue::pair(a("a"), a("c"))]));
    assert_eq!(eval("(for x R (fst x))", &env), Ok(set([a("a")])));
    assert_eq!(eval("(flatten (sing (for x R (sing (snd x)))))", &env).map(|v| v.as_set().unwrap().len()), Ok(2));
}

#[test]
fn complexity_examples() {
    let c = |src: &str, k: u32| complexity(&parse_penrc(src).unwrap().expr, &BigUint::from(k));
    assert_eq!(c("(empty)", 7), BigUint::from(0u32));
    assert_eq!(c("(sing x)", 2), BigUint::from(4u32));
    assert_eq!(c("(for x R y)", 1), BigUint::from(2u32));
    assert_eq!(c("x", 5), BigUint::from(5u32));
    assert_eq!(c("(flatten x)", 3), c("x", 3));
    assert_eq!(c("(fst x)", 3), c("x", 3));
    // Exact arithmetic: nested singletons grow geometrically without overflow.
    let mut e = NrcExpr::var("x");
    for _ in 0..80 {
        e = NrcExpr::sing(e);
    }
    assert_eq!(complexity(&e, &BigUint::from(2u32)), BigUint::from(2u32).pow(81));
}

#[test]
fn complexity_is_monotone_in_k() {
    let mut rng = common::rng(11);
    for _ in 0..300 {
        let mut scope = vec!["x".to_string(), "y".to_string()];
        let e = common::random_penrc(&mut rng, 5, &mut scope, true);
        let mut last = BigUint::from(0u32);
        for k in 1..5u32 {
            let c = complexity(&e, &BigUint::from(k));
            assert!(c >= last, "{e:?}");
            last = c;
        }
    }
}

/// Every `u ⊑ v` with `u ∈ V_k`.
fn subvalues_within(v: &NrcValue, k: usize) -> Vec<NrcValue> {
    match v {
        NrcValue::Atom(_) => vec![v.clone()],
        NrcValue::Pair(x, y) => {
            let ys = subvalues_within(y, k);
            subvalues_within(x, k)
                .into_iter()
                .flat_map(|p| ys.iter().map(move |q| NrcValue::pair(p.clone(), q.clone())))
                .collect()
        }
        NrcValue::Set(s) => {
            let pool: Vec<NrcValue> =
                s.iter().flat_map(|x| subvalues_within(x, k)).collect::<BTreeSet<_>>().into_iter().collect();
            let mut out: BTreeSet<BTreeSet<NrcValue>> = BTreeSet::from([BTreeSet::new()]);
            for x in &pool {
                let grown: Vec<BTreeSet<NrcValue>> = out
                    .iter()
                    .filter(|t| t.len() < k)
                    .map(|t| {
                        let mut t = t.clone();
                        t.insert(x.clone());
                        t
                    })
                    .collect();
                out.extend(grown);
            }
            out.into_iter().map(NrcValue::set).collect()
        }
    }
}

/// Every `σ′ ⊑ σ` with `σ′ ∈ E_k`, or `None` past `cap` environments.
fn sub_envs(env: &Environment<NrcValue>, k: usize, cap: usize) -> Option<Vec<Environment<NrcValue>>> {
    let mut out = vec![Environment::new()];
    for (x, v) in env.iter() {
        let subs = subvalues_within(v, k);
        if out.len() * subs.len() > cap {
            return None;
        }
        out = out.into_iter().flat_map(|e| subs.iter().map(move |s| e.clone().with(x, s.clone()))).collect();
    }
    Some(out)
}

struct Sample {
    e: NrcExpr,
    env: Environment<NrcValue>,
}

fn samples(seed: u64, n: usize) -> Vec<Sample> {
    let mut rng = common::rng(seed);
    let pool = common::atoms(&["a", "b"]);
    (0..n)
        .map(|_| {
            let gamma = common::random_gamma(&mut rng);
            let mut scope = vec!["x".to_string(), "y".to_string()];
            let e = common::random_penrc(&mut rng, 4, &mut scope, false);
            let mut env = Environment::new();
            for x in e.free_vars() {
                let vals = Space::from(&gamma[&x]).enumerate(3, &pool, 100_000).unwrap();
                env.insert(x, vals.choose(&mut rng).unwrap().clone());
            }
            Sample { e, env }
        })
        .collect()
}

const SUB_ENV_CAP: usize = 2_000;
const MAX_OUTPUT_TEXT: usize = 40;

#[test]
fn undefinedness_has_a_small_witness_below() {
    let mut checked = 0;
    for Sample { e, env } in samples(21, 3000) {
        if eval_penrc(&e, &env).is_ok() {
            continue;
        }
        let Some(l) = complexity(&e, &BigUint::from(1u32)).to_usize() else { continue };
        let Some(subs) = sub_envs(&env, l, SUB_ENV_CAP) else { continue };
        let found = subs.iter().any(|s| in_ek(s, l) && eval_penrc(&e, s).is_err());
        assert!(found, "no witness in E_{l} below {env} for {e:?}");
        checked += 1;
    }
    assert!(checked >= 200, "only {checked} undefined samples were checked");
}

#[test]
fn small_parts_of_outputs_come_from_small_inputs() {
    let mut checked = 0;
    for Sample { e, env } in samples(22, 800) {
        let Ok(out) = eval_penrc(&e, &env) else { continue };
        if out.to_string().len() > MAX_OUTPUT_TEXT {
            continue;
        }
        for k in 1..=2usize {
            let Some(l) = complexity(&e, &BigUint::from(k)).to_usize() else { continue };
            let Some(subs) = sub_envs(&env, l, SUB_ENV_CAP) else { continue };
            let Some(targets) = Some(subvalues_within(&out, k)).filter(|t| t.len() <= 64) else { continue };
            let outs: Vec<NrcValue> = subs.iter().filter_map(|s| eval_penrc(&e, s).ok()).collect();
            for u in targets {
                assert!(in_vk(&u, k));
                assert!(outs.iter().any(|o| subvalue(&u, o)), "{u} below {out} has no witness in E_{l} under {env} for {e:?}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 500, "only {checked} sub-outputs were checked");
}

fn small_env() -> impl Strategy<Value = Environment<NrcValue>> {
    let pool = common::atoms(&["a", "b"]);
    let vals = common::nrc_values(&pool, 2, 2);
    (prop::sample::select(vals.clone()), prop::sample::select(vals)).prop_map(|(x, y)| Environment::new().with("x", x).with("y", y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn union_with_itself_is_idempotent(seed in 0u64..1_000_000, env in small_env()) {
        let mut rng = common::rng(seed);
        let mut scope = vec!["x".to_string(), "y".to_string()];
        let e = common::random_penrc(&mut rng, 4, &mut scope, true);
        let doubled = NrcExpr::union(e.clone(), e.clone());
        match (eval_penrc(&e, &env), eval_penrc(&doubled, &env)) {
            (Ok(v), Ok(w)) => prop_assert_eq!(v, w),
            (Ok(v), Err(_)) => prop_assert!(!v.is_set()),
            (Err(_), r) => prop_assert!(r.is_err()),
        }
    }

    #[test]
    fn evaluation_is_deterministic(seed in 0u64..1_000_000, env in small_env()) {
        let mut rng = common::rng(seed);
        let mut scope = vec!["x".to_string(), "y".to_string()];
        let e = common::random_penrc(&mut rng, 5, &mut scope, true);
        prop_assert_eq!(eval_penrc(&e, &env), eval_penrc(&e, &env));
    }
}
