//! Generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nrc_core::syntax::ast::{NrcExpr, PureRxExpr, RaExpr, RxExpr, Schema, XqExpr};
use nrc_core::translate::ra::{Database, Relation, Tuple};
use nrc_core::types::{NrcKind, NrcType, PureRxType, RxKind, Space, TypeAssignment};
use nrc_core::value::{Atom, NrcValue};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn atoms(names: &[&str]) -> Vec<Atom> {
    names.iter().map(|a| Atom::named(a)).collect()
}

fn subsets_upto<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for (i, x) in items.iter().enumerate() {
        let grown: Vec<Vec<T>> = out
            .iter()
            .filter(|s| s.len() < k)
            .map(|s| {
                let mut s = s.clone();
                s.push(x.clone());
                s
            })
            .collect();
        out.extend(grown);
        let _ = i;
    }
    out
}

/// Every NRC value of nesting depth at most `depth` over `atoms` whose sets
/// have at most `k` elements. Atoms have depth 0; pairs and sets add one.
pub fn nrc_values(atoms: &[Atom], depth: usize, k: usize) -> Vec<NrcValue> {
    let mut level: BTreeSet<NrcValue> = atoms.iter().cloned().map(NrcValue::Atom).collect();
    for _ in 0..depth {
        let prev: Vec<NrcValue> = level.iter().cloned().collect();
        let mut next = level.clone();
        for a in &prev {
            for b in &prev {
                next.insert(NrcValue::pair(a.clone(), b.clone()));
            }
        }
        for s in subsets_upto(&prev, k) {
            next.insert(NrcValue::set(s));
        }
        level = next;
    }
    level.into_iter().collect()
}

/// Small NRC types: depth at most `depth` over `∅` and `atom`.
pub fn nrc_types(depth: usize) -> Vec<NrcType> {
    let mut all = vec![NrcType::Void, NrcType::Atom];
    for _ in 1..depth {
        let prev = all.clone();
        let mut next = prev.clone();
        for a in &prev {
            next.push(NrcType::coll(a.clone()));
            for b in &prev {
                next.push(NrcType::prod(a.clone(), b.clone()));
                next.push(NrcType::union(a.clone(), b.clone()));
            }
        }
        next.sort_by_key(|t| t.to_string());
        next.dedup();
        all = next;
    }
    all
}

/// Small NRC kinds: depth at most `depth` over `atom` and `coll`.
pub fn nrc_kinds(depth: usize) -> Vec<NrcKind> {
    let mut all = vec![NrcKind::Atom, NrcKind::Coll];
    for _ in 1..depth {
        let prev = all.clone();
        let mut next = prev.clone();
        for a in &prev {
            for b in &prev {
                next.push(NrcKind::prod(a.clone(), b.clone()));
                next.push(NrcKind::union(a.clone(), b.clone()));
            }
        }
        next.sort_by_key(|k| k.to_string());
        next.dedup();
        all = next;
    }
    all
}

/// A random sub-value of `v`.
pub fn shrink(v: &NrcValue, rng: &mut impl Rng) -> NrcValue {
    match v {
        NrcValue::Atom(_) => v.clone(),
        NrcValue::Pair(a, b) => NrcValue::pair(shrink(a, rng), shrink(b, rng)),
        NrcValue::Set(s) => {
            let mut kept = Vec::new();
            for x in s.iter() {
                if rng.gen_bool(0.6) {
                    kept.push(shrink(x, rng));
                }
            }
            NrcValue::set(kept)
        }
    }
}

// ---------------------------------------------------------------------------
// PENRC[kind] expressions

pub const PENRC_KINDS: [&str; 4] = ["atom", "coll", "prod-atom-atom", "prod-atom-coll"];

fn kind_named(name: &str) -> NrcKind {
    match name {
        "atom" => NrcKind::Atom,
        "coll" => NrcKind::Coll,
        "prod-atom-atom" => NrcKind::prod(NrcKind::Atom, NrcKind::Atom),
        _ => NrcKind::prod(NrcKind::Atom, NrcKind::Coll),
    }
}

/// A random PENRC[kind] expression of depth at most `depth` whose free
/// variables are among `scope`. `literals` toggles the atom literal `"a"`.
pub fn random_penrc(rng: &mut impl Rng, depth: usize, scope: &mut Vec<String>, literals: bool) -> NrcExpr {
    if depth <= 1 || rng.gen_bool(0.2) {
        let r = rng.gen_range(0..10);
        return if r < 7 && !scope.is_empty() {
            NrcExpr::Var(scope.choose(rng).unwrap().clone())
        } else if r < 9 && literals {
            NrcExpr::atom("a")
        } else {
            NrcExpr::Empty
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..10) {
        0 => NrcExpr::pair(random_penrc(rng, d, scope, literals), random_penrc(rng, d, scope, literals)),
        1 => NrcExpr::fst(random_penrc(rng, d, scope, literals)),
        2 => NrcExpr::snd(random_penrc(rng, d, scope, literals)),
        3 => NrcExpr::sing(random_penrc(rng, d, scope, literals)),
        4 => NrcExpr::union(random_penrc(rng, d, scope, literals), random_penrc(rng, d, scope, literals)),
        5 => NrcExpr::flatten(random_penrc(rng, d, scope, literals)),
        6 | 7 => {
            let source = random_penrc(rng, d, scope, literals);
            let v = format!("v{}", scope.len());
            scope.push(v.clone());
            let body = random_penrc(rng, d, scope, literals);
            scope.pop();
            NrcExpr::comp(body, &v, source)
        }
        8 => NrcExpr::if_eq(
            random_penrc(rng, d, scope, literals),
            random_penrc(rng, d, scope, literals),
            random_penrc(rng, d, scope, literals),
            random_penrc(rng, d, scope, literals),
        ),
        _ => NrcExpr::if_kind(
            random_penrc(rng, d, scope, literals),
            kind_named(PENRC_KINDS.choose(rng).unwrap()),
            random_penrc(rng, d, scope, literals),
            random_penrc(rng, d, scope, literals),
        ),
    }
}

/// Input types drawn on for the random corpora.
pub fn input_types() -> Vec<NrcType> {
    let a = || NrcType::Atom;
    vec![
        a(),
        NrcType::coll(a()),
        NrcType::prod(a(), a()),
        NrcType::coll(NrcType::prod(a(), a())),
        NrcType::union(a(), NrcType::coll(a())),
        NrcType::prod(a(), NrcType::coll(a())),
        NrcType::coll(NrcType::coll(a())),
    ]
}

pub fn random_gamma(rng: &mut impl Rng) -> TypeAssignment<NrcType> {
    let ts = input_types();
    ["x", "y"].iter().map(|x| (x.to_string(), ts.choose(rng).unwrap().clone())).collect()
}

/// Number of environments over the free variables of `e` with sets of at
/// most `card` elements and `n_atoms` atoms.
pub fn space_size(e: &NrcExpr, gamma: &TypeAssignment<NrcType>, card: usize, n_atoms: usize) -> BigUint {
    e.free_vars().iter().map(|x| Space::from(&gamma[x]).count(card, n_atoms)).product()
}

// ---------------------------------------------------------------------------
// Pure PERX expressions

/// The pure RX values used as environment entries: the items over `atoms`
/// (atoms, data nodes, elements whose children are data nodes) and the sets
/// of at most two such items.
pub fn pure_value_type() -> PureRxType {
    let item = PureRxType::union(
        PureRxType::union(PureRxType::Atom, PureRxType::Data),
        PureRxType::Elem(vec![PureRxType::Data]),
    );
    PureRxType::union(item.clone(), PureRxType::coll(item))
}

fn pure_unary(e: PureRxExpr) -> Vec<PureRxExpr> {
    vec![
        XqExpr::text(e.clone()),
        XqExpr::data(e.clone()),
        XqExpr::name(e.clone()),
        XqExpr::children_of(e.clone()),
        XqExpr::single(e),
    ]
}

fn pure_binary(a: &PureRxExpr, b: &PureRxExpr) -> Vec<PureRxExpr> {
    vec![XqExpr::elem(a.clone(), b.clone()), XqExpr::seq(a.clone(), b.clone())]
}

fn pure_loops(source: &PureRxExpr, body: &PureRxExpr) -> Vec<PureRxExpr> {
    [None, Some(RxKind::Elem)]
        .into_iter()
        .map(|k| XqExpr::for_in("y", k, source.clone(), body.clone()))
        .collect()
}

/// Pure PERX expressions of depth at most two over `leaves`, with `y` as
/// the only loop variable.
pub fn pure_depth2(leaves: &[PureRxExpr], bodies: &[PureRxExpr]) -> Vec<PureRxExpr> {
    let mut out: Vec<PureRxExpr> = leaves.to_vec();
    for l in leaves {
        out.extend(pure_unary(l.clone()));
    }
    for a in leaves {
        for b in leaves {
            out.extend(pure_binary(a, b));
        }
    }
    for s in leaves {
        for b in bodies {
            out.extend(pure_loops(s, b));
        }
    }
    for a in leaves {
        for b in leaves {
            for c in leaves {
                for d in leaves {
                    out.push(XqExpr::if_eq(a.clone(), b.clone(), c.clone(), d.clone()));
                }
            }
        }
    }
    out
}

fn leaf_x() -> Vec<PureRxExpr> {
    vec![XqExpr::var("x"), XqExpr::Empty, XqExpr::atom("a")]
}

/// Every pure PERX expression of depth at most two over the variables `x`
/// and `y` (either free, or `y` bound by a loop).
pub fn pure_corpus_two_vars() -> Vec<PureRxExpr> {
    let mut leaves = leaf_x();
    leaves.push(XqExpr::var("y"));
    pure_depth2(&leaves, &leaves)
}

/// Depth-three pure PERX expressions with the single free variable `x`
/// (`y` only as a loop variable). Unary and binary constructors and loops
/// are applied to every combination of depth-two operands. An `ifeq` has
/// either leaf comparands and depth-two branches, or depth-two comparands
/// and leaf branches.
pub fn pure_corpus_depth3() -> Vec<PureRxExpr> {
    let leaves = leaf_x();
    let mut with_y = leaves.clone();
    with_y.push(XqExpr::var("y"));
    let closed_in_x = |e: &PureRxExpr| e.free_vars().iter().all(|v| v == "x");
    let d2: Vec<PureRxExpr> = pure_depth2(&leaves, &with_y);
    let d2_y: Vec<PureRxExpr> = pure_depth2(&with_y, &with_y);
    let mut out = Vec::new();
    for e in &d2 {
        out.extend(pure_unary(e.clone()));
    }
    for a in &d2 {
        for b in &d2 {
            out.extend(pure_binary(a, b));
        }
    }
    for s in &d2 {
        for b in &d2_y {
            out.extend(pure_loops(s, b));
        }
    }
    for s in &leaves {
        for b in &d2_y {
            out.extend(pure_loops(s, b));
        }
    }
    for a in &leaves {
        for b in &leaves {
            for c in &d2 {
                for d in &d2 {
                    out.push(XqExpr::if_eq(a.clone(), b.clone(), c.clone(), d.clone()));
                }
            }
        }
    }
    for a in &d2 {
        for b in &d2 {
            for c in &leaves {
                for d in &leaves {
                    out.push(XqExpr::if_eq(a.clone(), b.clone(), c.clone(), d.clone()));
                }
            }
        }
    }
    out.retain(|e| closed_in_x(e) && e.depth() == 3);
    out
}

// ---------------------------------------------------------------------------
// RX expressions with emptiness tests

/// RX expressions of depth at most two over `x`, with `y` as loop variable.
pub fn rx_depth2() -> Vec<RxExpr> {
    let leaves: Vec<RxExpr> = vec![XqExpr::var("x"), XqExpr::Empty, XqExpr::atom("a")];
    let mut out = leaves.clone();
    for l in &leaves {
        out.push(XqExpr::text(l.clone()));
        out.push(XqExpr::data(l.clone()));
        out.push(XqExpr::name(l.clone()));
        out.push(XqExpr::children_of(l.clone()));
        for m in &leaves {
            out.push(XqExpr::elem(l.clone(), m.clone()));
            out.push(XqExpr::seq(l.clone(), m.clone()));
        }
        for b in [XqExpr::var("y"), XqExpr::children_of(XqExpr::var("y")), XqExpr::Empty] {
            out.push(XqExpr::for_in("y", None, l.clone(), b));
        }
    }
    out
}

/// RX expressions built around emptiness tests: every test over a depth-two
/// condition with leaf branches, plus tests nested in other constructors
/// and in one another.
pub fn emptiness_corpus() -> Vec<RxExpr> {
    let branches: Vec<RxExpr> = vec![XqExpr::var("x"), XqExpr::Empty, XqExpr::atom("a"), XqExpr::children_of(XqExpr::var("x"))];
    let mut out = Vec::new();
    for c in rx_depth2() {
        for t in &branches {
            for f in &branches {
                out.push(XqExpr::if_empty(c.clone(), t.clone(), f.clone()));
            }
        }
    }
    let inner: Vec<RxExpr> = out.iter().step_by(7).cloned().collect();
    for e in &inner {
        out.push(XqExpr::seq(e.clone(), XqExpr::var("x")));
        out.push(XqExpr::elem(XqExpr::atom("b"), e.clone()));
        out.push(XqExpr::if_empty(e.clone(), XqExpr::atom("c"), e.clone()));
        out.push(XqExpr::if_type(e.clone(), nrc_core::types::RxType::coll(nrc_core::types::RxType::Atom), XqExpr::Empty, XqExpr::var("x")));
    }
    for c in [XqExpr::children_of(XqExpr::var("y")), XqExpr::var("y"), XqExpr::data(XqExpr::var("y"))] {
        out.push(XqExpr::for_in("y", None, XqExpr::var("x"), XqExpr::if_empty(c, XqExpr::var("y"), XqExpr::atom("a"))));
    }
    out
}

// ---------------------------------------------------------------------------
// Relational algebra

pub fn ra_schema() -> Schema {
    BTreeMap::from([
        ("R".to_string(), atoms(&["A", "B"])),
        ("S".to_string(), atoms(&["C"])),
    ])
}

/// Well-formed queries of depth at most `depth` over [`ra_schema`]. Renames
/// draw target attributes from `A`, `B`, `C`.
pub fn ra_queries(depth: usize) -> Vec<RaExpr> {
    let schema = ra_schema();
    let pool = atoms(&["A", "B", "C"]);
    let ok = |q: &RaExpr| nrc_core::translate::ra::schema_of(q, &schema).ok();
    let mut layers: Vec<Vec<RaExpr>> = vec![vec![RaExpr::Relation("R".into()), RaExpr::Relation("S".into())]];
    for _ in 1..depth {
        let below: Vec<RaExpr> = layers.iter().flatten().cloned().collect();
        let mut next = Vec::new();
        for q in &below {
            let attrs: Vec<Atom> = ok(q).unwrap().into_iter().collect();
            for (i, a) in attrs.iter().enumerate() {
                for b in &attrs[i + 1..] {
                    next.push(RaExpr::Select(a.clone(), b.clone(), Box::new(q.clone())));
                }
                for c in pool.iter().filter(|c| !attrs.contains(c)) {
                    next.push(RaExpr::Rename(a.clone(), c.clone(), Box::new(q.clone())));
                }
            }
            for s in subsets_upto(&attrs, attrs.len()) {
                if !s.is_empty() {
                    next.push(RaExpr::Project(s, Box::new(q.clone())));
                }
            }
        }
        for p in &below {
            for q in &below {
                let b = |x: &RaExpr| Box::new(x.clone());
                for cand in [RaExpr::Product(b(p), b(q)), RaExpr::Union(b(p), b(q)), RaExpr::Difference(b(p), b(q))] {
                    if ok(&cand).is_some() {
                        next.push(cand);
                    }
                }
            }
        }
        next.retain(|q| ok(q).is_some());
        let seen: BTreeSet<String> = below.iter().map(|q| format!("{q:?}")).collect();
        next.retain(|q| !seen.contains(&format!("{q:?}")));
        next.sort_by_key(|q| format!("{q:?}"));
        next.dedup();
        layers.push(next);
    }
    layers.into_iter().flatten().collect()
}

/// All relations over `attrs` with at most `max_tuples` tuples over `values`.
pub fn relations(attrs: &[Atom], values: &[Atom], max_tuples: usize) -> Vec<Relation> {
    let mut tuples: Vec<Tuple> = vec![Tuple::new()];
    for a in attrs {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                values.iter().map(move |v| {
                    let mut t = t.clone();
                    t.insert(a.clone(), v.clone());
                    t
                })
            })
            .collect();
    }
    subsets_upto(&tuples, max_tuples).into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Every database over [`ra_schema`] with at most two tuples per relation
/// over the atoms `a`, `b`, `c`.
pub fn ra_databases() -> Vec<Database> {
    let vals = atoms(&["a", "b", "c"]);
    let schema = ra_schema();
    let rs = relations(&schema["R"], &vals, 2);
    let ss = relations(&schema["S"], &vals, 2);
    let mut out = Vec::new();
    for r in &rs {
        for s in &ss {
            out.push(BTreeMap::from([("R".to_string(), r.clone()), ("S".to_string(), s.clone())]));
        }
    }
    out
}
