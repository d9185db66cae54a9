//! Bounded enumeration of environments.
//!
//! The candidate space is `E_k` over an atom set made of the literals of
//! the expression and a block of fresh atoms. Layers grow the cardinality
//! bound and the number of fresh atoms together, so small counterexamples
//! are found before large spaces are materialized. Each layer only tests
//! environments that no earlier layer contained.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::decide::{Config, DecideError};
use crate::types::Space;
use crate::value::{in_vk, Atom, AtomSupport, Environment, NrcValue};

/// Candidates tested per parallel batch.
const CHUNK: u64 = 1 << 12;

/// A search problem: one enumeration space per variable and a failure test.
pub struct Problem<'a> {
    pub spaces: BTreeMap<String, Space>,
    pub literals: BTreeSet<Atom>,
    /// Largest set cardinality to enumerate.
    pub card: usize,
    /// Number of fresh atoms available.
    pub fresh: usize,
    pub fails: &'a (dyn Fn(&Environment<NrcValue>) -> bool + Sync),
}

/// What a finished search saw.
#[derive(Clone, Debug)]
pub struct Found {
    pub counterexample: Option<Environment<NrcValue>>,
    pub examined: u64,
}

/// Fresh atoms `@0, @1, …`, skipping any token that is also a literal.
pub fn fresh_atoms(n: usize, literals: &BTreeSet<Atom>) -> Vec<Atom> {
    (0..).map(Atom::fresh).filter(|a| !literals.contains(a)).take(n).collect()
}

/// Number of environments in the space at the given bounds.
pub fn space_size(spaces: &BTreeMap<String, Space>, card: usize, atoms: usize) -> BigUint {
    spaces.values().map(|s| s.count(card, atoms)).product()
}

enum Mark {
    Old,
    Passed,
    Failed,
}

struct Layer {
    card: usize,
    fresh: usize,
}

fn layers(card: usize, fresh: usize, layered: bool) -> Box<dyn Iterator<Item = Layer>> {
    if !layered {
        return Box::new(std::iter::once(Layer { card, fresh }));
    }
    let steps = card.max(fresh);
    Box::new((0..=steps).map(move |s| Layer { card: s.min(card), fresh: s.min(fresh) }))
}

/// Runs the search. With `layered` unset the full space is scanned in one
/// pass, which is what the brute-force oracle uses.
pub fn run(p: &Problem<'_>, config: &Config, layered: bool) -> Result<Found, DecideError> {
    let start = Instant::now();
    let fresh = fresh_atoms(p.fresh, &p.literals);
    let fresh_index: BTreeMap<&Atom, usize> = fresh.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut examined = 0u64;
    let mut prev: Option<Layer> = None;
    let mut prev_size: Option<u64> = None;
    for layer in layers(p.card, p.fresh, layered) {
        let mut atoms: Vec<Atom> = p.literals.iter().cloned().collect();
        atoms.extend(fresh[..layer.fresh].iter().cloned());
        let size = space_size(&p.spaces, layer.card, atoms.len());
        if size > BigUint::from(config.max_envs) {
            return Err(DecideError::BudgetExceeded { needed: size, budget: config.max_envs });
        }
        let size: u64 = size.try_into().expect("bounded by max_envs");
        if let Some(l) = &prev {
            // Once every fresh atom is in use and a larger cardinality adds
            // nothing, no later layer can add anything either.
            if layer.fresh == l.fresh && Some(size) == prev_size {
                break;
            }
        }
        let vars: Vec<&String> = p.spaces.keys().collect();
        let values: Vec<Vec<NrcValue>> = p
            .spaces
            .values()
            .map(|s| s.enumerate(layer.card, &atoms, config.max_envs))
            .collect::<Result<_, _>>()
            .map_err(DecideError::Type)?;
        let radices: Vec<u64> = values.iter().map(|v| v.len() as u64).collect();

        let seen_before = |env: &Environment<NrcValue>| match &prev {
            None => false,
            Some(l) => {
                env.values().all(|v| in_vk(v, l.card))
                    && env.atoms().iter().all(|a| fresh_index.get(a).is_none_or(|&i| i < l.fresh))
            }
        };
        let pruned = |env: &Environment<NrcValue>| {
            config.prune && {
                let used: BTreeSet<usize> = env.atoms().iter().filter_map(|a| fresh_index.get(a).copied()).collect();
                used.iter().enumerate().any(|(rank, &i)| rank != i)
            }
        };
        let build = |mut index: u64| {
            let mut env = Environment::new();
            for (pos, var) in vars.iter().enumerate().rev() {
                let r = radices[pos];
                env.insert(var.as_str(), values[pos][(index % r) as usize].clone());
                index /= r;
            }
            env
        };

        let mut offset = 0u64;
        while offset < size {
            if start.elapsed() > config.timeout {
                return Err(DecideError::Timeout { examined });
            }
            let end = (offset + CHUNK).min(size);
            let marks: Vec<Mark> = (offset..end)
                .into_par_iter()
                .map(|i| {
                    let env = build(i);
                    if seen_before(&env) {
                        Mark::Old
                    } else if pruned(&env) || !(p.fails)(&env) {
                        Mark::Passed
                    } else {
                        Mark::Failed
                    }
                })
                .collect();
            for (j, m) in marks.iter().enumerate() {
                match m {
                    Mark::Old => {}
                    Mark::Passed => examined += 1,
                    Mark::Failed => {
                        return Ok(Found {
                            counterexample: Some(build(offset + j as u64)),
                            examined: examined + 1,
                        });
                    }
                }
            }
            offset = end;
        }
        prev = Some(layer);
        prev_size = Some(size);
    }
    Ok(Found { counterexample: None, examined })
}

/// Environments one step below `env` under `⊑`: one set element removed,
/// or one element replaced by a value one step below it.
fn shrinks(v: &NrcValue) -> Vec<NrcValue> {
    match v {
        NrcValue::Atom(_) => Vec::new(),
        NrcValue::Pair(a, b) => {
            let mut out: Vec<NrcValue> = shrinks(a).into_iter().map(|x| NrcValue::pair(x, (**b).clone())).collect();
            out.extend(shrinks(b).into_iter().map(|y| NrcValue::pair((**a).clone(), y)));
            out
        }
        NrcValue::Set(s) => {
            let mut out = Vec::new();
            for x in s.iter() {
                let mut rest = (**s).clone();
                rest.remove(x);
                out.push(NrcValue::set(rest.iter().cloned()));
                for y in shrinks(x) {
                    let mut t = rest.clone();
                    t.insert(y);
                    out.push(NrcValue::set(t));
                }
            }
            out
        }
    }
}

/// Walks down `⊑` from a failing environment while the failure persists,
/// taking the first shrink in canonical order at each step, then renames
/// fresh atoms in order of first occurrence.
pub fn minimize(env: Environment<NrcValue>, p: &Problem<'_>) -> Environment<NrcValue> {
    let mut cur = env;
    'outer: loop {
        let snapshot = cur.clone();
        for (x, v) in snapshot.iter() {
            let space = &p.spaces[x];
            for w in shrinks(v) {
                if !space.contains(&w) {
                    continue;
                }
                let cand = cur.clone().with(x, w);
                if (p.fails)(&cand) {
                    cur = cand;
                    continue 'outer;
                }
            }
        }
        break;
    }
    canonical_fresh(&cur, &p.literals)
}

fn canonical_fresh(env: &Environment<NrcValue>, literals: &BTreeSet<Atom>) -> Environment<NrcValue> {
    let mut order: Vec<Atom> = Vec::new();
    for v in env.values() {
        collect_in_order(v, literals, &mut order);
    }
    let targets = fresh_atoms(order.len(), literals);
    let map: BTreeMap<Atom, Atom> = order.into_iter().zip(targets).collect();
    env.map_atoms(&|a| map.get(a).cloned().unwrap_or_else(|| a.clone()))
}

fn collect_in_order(v: &NrcValue, literals: &BTreeSet<Atom>, out: &mut Vec<Atom>) {
    match v {
        NrcValue::Atom(a) => {
            if !literals.contains(a) && !out.contains(a) {
                out.push(a.clone());
            }
        }
        NrcValue::Pair(a, b) => {
            collect_in_order(a, literals, out);
            collect_in_order(b, literals, out);
        }
        NrcValue::Set(s) => s.iter().for_each(|x| collect_in_order(x, literals, out)),
    }
}
