//! Reduction of implication for functional and inclusion dependencies to
//! containment and well-definedness questions about RX.
//!
//! Over a single relation `r` with attributes `A1 … Ak`, a tuple is encoded
//! as `⟨A1:{⟨A1:{⟨a₁⟩}⟩, …, ⟨Ak:{⟨aₖ⟩}⟩}⟩`. The reduction produces `e₁`
//! and `e₂` with `e₁(σ) ⊆ e₂(σ)` for every admissible `σ` exactly when the
//! dependencies in `Σ` imply the target. `e₂` is closed.

use std::collections::BTreeSet;

use crate::syntax::ast::{Cond, Dependency, DepsProblem, RxExpr, XqExpr};
use crate::translate::ra::{bind_children, conj, encode_relation, name_is, normalize, same_value, Names};
use crate::types::{RxType, TypeAssignment};
use crate::value::{Atom, Environment, RxValue};

use super::ra::{Relation, Tuple};

/// Name of the single relation variable.
pub const RELATION_VAR: &str = "r";

/// Tag of the target component of `e₁`.
pub const TARGET_TAG: &str = "@D0";

pub fn attribute(i: usize) -> Atom {
    Atom::named(&format!("A{i}"))
}

pub fn attributes(arity: usize) -> Vec<Atom> {
    (1..=arity).map(attribute).collect()
}

fn fd_tag(i: usize) -> Atom {
    Atom::named(&format!("@D{i}"))
}

fn ind_tag(i: usize) -> Atom {
    Atom::named(&format!("@E{i}"))
}

/// The output of the reduction.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub e1: RxExpr,
    pub e2: RxExpr,
    /// Input type of `r`.
    pub gamma: TypeAssignment<RxType>,
    /// A common output type of `e₁` and `e₂`.
    pub output: RxType,
    /// `name((elem{A1}{e₁, e₂}, elem{A1}{e₂}))`: defined everywhere iff
    /// `e₁ ⊆ e₂` everywhere.
    pub probe: RxExpr,
}

/// `γ = coll(elem(coll(elem(coll(elem(coll(elem(coll(data)))))))))`.
pub fn output_type() -> RxType {
    (0..4).fold(RxType::coll(RxType::Data), |t, _| RxType::coll(RxType::elem(t)))
}

pub fn relation_type() -> RxType {
    crate::translate::ra::relation_type()
}

/// Whether a relation over `A1 … Ak` satisfies a dependency.
pub fn satisfies(r: &Relation, d: &Dependency) -> bool {
    let proj = |t: &Tuple, xs: &[Atom]| xs.iter().map(|a| t[a].clone()).collect::<Vec<_>>();
    match d {
        Dependency::Fd(x, y) => r
            .iter()
            .all(|t1| r.iter().all(|t2| proj(t1, x) != proj(t2, x) || proj(t1, y) == proj(t2, y))),
        Dependency::Ind(b, c) => {
            let targets: BTreeSet<_> = r.iter().map(|t| proj(t, c)).collect();
            r.iter().all(|t| targets.contains(&proj(t, b)))
        }
    }
}

/// The encoding of `r` as an environment for `e₁`.
pub fn encode_instance(r: &Relation) -> Environment<RxValue> {
    Environment::new().with(RELATION_VAR, encode_relation(r, &attribute(1)))
}

fn a1() -> RxExpr {
    XqExpr::Atom(attribute(1))
}

fn tagged(tag: &Atom, content: RxExpr) -> RxExpr {
    XqExpr::elem(XqExpr::Atom(tag.clone()), content)
}

/// `⟨A1:∅⟩`.
fn marker() -> RxExpr {
    XqExpr::elem(a1(), XqExpr::Empty)
}

/// The value of an IND test when satisfied: `⟨A1:{⟨A1:∅⟩}⟩`.
fn ind_sat() -> RxExpr {
    XqExpr::elem(a1(), marker())
}

fn ind_violated() -> RxExpr {
    XqExpr::seq(ind_sat(), marker())
}

struct Builder {
    names: Names,
    attrs: Vec<Atom>,
}

impl Builder {
    fn normalized(&mut self) -> RxExpr {
        normalize(&mut self.names, XqExpr::var(RELATION_VAR), &self.attrs.clone(), &attribute(1))
    }

    /// Binds a fresh variable to each child of `t` whose name is in `of`,
    /// returning the bindings, the name tests and the variables in the
    /// order of `of`.
    fn fields(&mut self, t: &str, of: &[Atom]) -> (Vec<(String, RxExpr)>, Vec<Cond<RxType>>, Vec<String>) {
        let binds = bind_children(&mut self.names, t, of);
        let tests = binds.iter().zip(of).map(|((x, _), a)| name_is(x, a)).collect();
        let vars = binds.iter().map(|(x, _)| x.clone()).collect();
        (binds, tests, vars)
    }

    /// `∅` when `X → Y` holds and `{⟨A1:∅⟩}` otherwise.
    fn fd(&mut self, x: &[Atom], y: &[Atom]) -> RxExpr {
        if y.is_empty() {
            return XqExpr::Empty;
        }
        let (n1, n2) = (self.normalized(), self.normalized());
        let (t1, t2) = (self.names.fresh("t"), self.names.fresh("t"));
        let (bx1, mut tests, vx1) = self.fields(&t1, x);
        let (by1, ty1, vy1) = self.fields(&t1, y);
        let (bx2, tx2, vx2) = self.fields(&t2, x);
        let (by2, ty2, vy2) = self.fields(&t2, y);
        tests.extend(ty1);
        tests.extend(tx2);
        tests.extend(ty2);
        let mut agree: Vec<Cond<RxType>> = vx1.iter().zip(&vx2).map(|(a, b)| same_value(a, b)).collect();
        let mut differ: Vec<Cond<RxType>> = vy1
            .iter()
            .zip(&vy2)
            .map(|(a, b)| Cond::Ne(XqExpr::children_of(XqExpr::var(a)), XqExpr::children_of(XqExpr::var(b))))
            .collect();
        agree.push(if differ.len() == 1 { differ.remove(0) } else { Cond::Or(differ) });
        let violation = XqExpr::if_cond(conj(agree), marker(), XqExpr::Empty);
        let mut binds = bx1;
        binds.extend(by1);
        binds.extend(bx2);
        binds.extend(by2);
        let body = if binds.is_empty() {
            violation
        } else {
            XqExpr::for_many(binds, None, XqExpr::if_cond(conj(tests), violation, XqExpr::Empty))
        };
        XqExpr::for_many(vec![(t1, n1), (t2, n2)], None, body)
    }

    /// `{⟨A1:{⟨A1:∅⟩}⟩}` when `B ⊆ C` holds and additionally `⟨A1:∅⟩`
    /// otherwise.
    fn ind(&mut self, b: &[Atom], c: &[Atom]) -> RxExpr {
        let (n1, n2) = (self.normalized(), self.normalized());
        let (t1, t2) = (self.names.fresh("t"), self.names.fresh("t"));
        let (bb, mut tests, vb) = self.fields(&t1, b);
        let (bc, tc, vc) = self.fields(&t2, c);
        tests.extend(tc);
        tests.extend(vb.iter().zip(&vc).map(|(x, y)| same_value(x, y)));
        let mut binds = bb;
        binds.extend(bc);
        let hit = if binds.is_empty() {
            marker()
        } else {
            XqExpr::for_many(binds, None, XqExpr::if_cond(conj(tests), marker(), XqExpr::Empty))
        };
        let per_tuple = XqExpr::for_in(&t2, None, n2, hit);
        let body = XqExpr::for_in(&t1, None, n1, XqExpr::elem(a1(), per_tuple));
        XqExpr::seq(body, ind_sat())
    }

    fn dep(&mut self, d: &Dependency) -> RxExpr {
        match d {
            Dependency::Fd(x, y) => self.fd(x, y),
            Dependency::Ind(b, c) => self.ind(b, c),
        }
    }
}

/// The test for one dependency over relations of the given arity: for an FD
/// it yields `∅` when the FD holds and `{⟨A1:∅⟩}` otherwise; for an IND it
/// yields `{⟨A1:{⟨A1:∅⟩}⟩}` when it holds and that plus `⟨A1:∅⟩` otherwise.
pub fn dependency_test(arity: usize, d: &Dependency) -> RxExpr {
    Builder { names: Names::default(), attrs: attributes(arity) }.dep(d)
}

/// The possible values of a dependency test, as closed expressions;
/// the satisfied form comes first.
fn forms(d: &Dependency) -> [RxExpr; 2] {
    match d {
        Dependency::Fd(..) => [XqExpr::Empty, marker()],
        Dependency::Ind(..) => [ind_sat(), ind_violated()],
    }
}

/// Every combination of test outcomes except the one where all of `Σ`
/// holds and the target fails.
fn admissible(p: &DepsProblem) -> Vec<RxExpr> {
    let fds: Vec<&Dependency> = p.sigma.iter().filter(|d| matches!(d, Dependency::Fd(..))).collect();
    let inds: Vec<&Dependency> = p.sigma.iter().filter(|d| matches!(d, Dependency::Ind(..))).collect();
    let n = 1 + fds.len() + inds.len();
    let tests: Vec<&Dependency> = std::iter::once(&p.target).chain(fds.iter().copied()).chain(inds.iter().copied()).collect();
    let tags: Vec<Atom> = std::iter::once(Atom::named(TARGET_TAG))
        .chain((1..=fds.len()).map(fd_tag))
        .chain((1..=inds.len()).map(ind_tag))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let violated = |i: usize| mask >> i & 1 == 1;
        if violated(0) && (1..n).all(|i| !violated(i)) {
            continue;
        }
        let parts = (0..n).map(|i| tagged(&tags[i], forms(tests[i])[violated(i) as usize].clone()));
        out.push(XqExpr::elem(a1(), XqExpr::seq_all(parts)));
    }
    out
}

/// Builds the reduction for an implication problem.
///
/// Panics if `Σ` has more than 62 dependencies, since `e₂` enumerates all
/// outcome combinations.
pub fn build_fd_id_reduction(p: &DepsProblem) -> Reduction {
    assert!(p.sigma.len() < 63, "too many dependencies for the reduction");
    let attrs = attributes(p.arity);
    let mut b = Builder { names: Names::default(), attrs };
    let mut parts = vec![tagged(&Atom::named(TARGET_TAG), b.dep(&p.target))];
    let fds = p.sigma.iter().filter(|d| matches!(d, Dependency::Fd(..)));
    for (i, d) in fds.enumerate() {
        parts.push(tagged(&fd_tag(i + 1), b.dep(d)));
    }
    let inds = p.sigma.iter().filter(|d| matches!(d, Dependency::Ind(..)));
    for (i, d) in inds.enumerate() {
        parts.push(tagged(&ind_tag(i + 1), b.dep(d)));
    }
    let e1 = XqExpr::elem(a1(), XqExpr::seq_all(parts));
    let e2 = XqExpr::seq_all(admissible(p));
    let probe = XqExpr::name(XqExpr::seq(
        XqExpr::elem(a1(), XqExpr::seq(e1.clone(), e2.clone())),
        XqExpr::elem(a1(), e2.clone()),
    ));
    Reduction {
        e1,
        e2,
        gamma: [(RELATION_VAR.to_string(), relation_type())].into(),
        output: output_type(),
        probe,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rx::{eval_rx, DefaultOracles};
    use crate::syntax::parse::parse_deps;

    fn rel(rows: &[&[&str]]) -> Relation {
        rows.iter()
            .map(|row| row.iter().enumerate().map(|(i, v)| (attribute(i + 1), Atom::named(v))).collect())
            .collect()
    }

    #[test]
    fn probe_tracks_implication_on_instances() {
        let p = parse_deps("(problem (arity 2) (sigma (fd (A1) (A2))) (target (fd (A1) (A2))))").unwrap();
        let red = build_fd_id_reduction(&p);
        for r in [rel(&[]), rel(&[&["a", "b"]]), rel(&[&["a", "b"], &["a", "c"]])] {
            let env = encode_instance(&r);
            assert!(eval_rx(&red.probe, &env, &DefaultOracles).is_ok());
        }
    }

    #[test]
    fn containment_fails_when_target_is_violated_alone() {
        let p = parse_deps("(problem (arity 2) (sigma) (target (fd (A1) (A2))))").unwrap();
        let red = build_fd_id_reduction(&p);
        let bad = rel(&[&["a", "b"], &["a", "c"]]);
        assert!(!satisfies(&bad, &p.target));
        assert!(eval_rx(&red.probe, &encode_instance(&bad), &DefaultOracles).is_err());
        let out = eval_rx(&red.e1, &encode_instance(&bad), &DefaultOracles).unwrap();
        assert!(red.output.contains(&out));
    }

    #[test]
    fn ind_tests_produce_their_forms() {
        let p = parse_deps("(problem (arity 2) (sigma) (target (ind (A1) (A2))))").unwrap();
        let red = build_fd_id_reduction(&p);
        let ok = rel(&[&["a", "a"]]);
        let bad = rel(&[&["a", "b"]]);
        assert!(satisfies(&ok, &p.target) && !satisfies(&bad, &p.target));
        assert!(eval_rx(&red.probe, &encode_instance(&ok), &DefaultOracles).is_ok());
        assert!(eval_rx(&red.probe, &encode_instance(&bad), &DefaultOracles).is_err());
    }
}
