//! Compilation of relational algebra into RX with emptiness tests.
//!
//! A tuple `(A₁:a₁, …, Aₙ:aₙ)` is the element `⟨T:{⟨A₁:{⟨a₁⟩}⟩, …}⟩` and a
//! relation is the RX value holding its tuples. Inputs are only assumed to
//! have the loose type `coll(elem(coll(elem(single(data)))))`; every relation
//! variable is first passed through a normalizing loop that rebuilds well
//! formed tuples, so the compiled query never depends on the oracles.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::ast::{Cond, RaExpr, RaProgram, RxExpr, Schema, XqExpr};
use crate::types::{RxType, TypeAssignment};
use crate::value::{Atom, Environment, Item, RxNode, RxValue};

/// Element name wrapping each compiled tuple.
pub const TUPLE_TAG: &str = "T";

pub type Tuple = BTreeMap<Atom, Atom>;
pub type Relation = BTreeSet<Tuple>;
pub type Database = BTreeMap<String, Relation>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RaError {
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("attribute `{0}` is not in the schema of the operand")]
    UnknownAttribute(Atom),
    #[error("attribute `{0}` occurs twice")]
    DuplicateAttribute(Atom),
    #[error("operands of {0} must have the same attributes")]
    SchemaMismatch(&'static str),
    #[error("operands of a product must have disjoint attributes (shared: `{0}`)")]
    OverlappingProduct(Atom),
    #[error("relation `{0}` is missing from the database")]
    MissingRelation(String),
    #[error("value is not an encoded relation over {0:?}")]
    NotARelation(Vec<String>),
    #[error("tuple attributes {found:?} differ from the schema {expected:?}")]
    BadTuple { expected: Vec<String>, found: Vec<String> },
}

/// The attribute set of a query, checking that every operator is applied
/// within its schema constraints.
pub fn schema_of(q: &RaExpr, schema: &Schema) -> Result<BTreeSet<Atom>, RaError> {
    Ok(match q {
        RaExpr::Relation(r) => {
            let attrs = schema.get(r).ok_or_else(|| RaError::UnknownRelation(r.clone()))?;
            let mut out = BTreeSet::new();
            for a in attrs {
                if !out.insert(a.clone()) {
                    return Err(RaError::DuplicateAttribute(a.clone()));
                }
            }
            out
        }
        RaExpr::Select(a, b, q) => {
            let s = schema_of(q, schema)?;
            for x in [a, b] {
                if !s.contains(x) {
                    return Err(RaError::UnknownAttribute(x.clone()));
                }
            }
            s
        }
        RaExpr::Project(attrs, q) => {
            let s = schema_of(q, schema)?;
            let mut out = BTreeSet::new();
            for a in attrs {
                if !s.contains(a) {
                    return Err(RaError::UnknownAttribute(a.clone()));
                }
                if !out.insert(a.clone()) {
                    return Err(RaError::DuplicateAttribute(a.clone()));
                }
            }
            out
        }
        RaExpr::Product(p, q) => {
            let l = schema_of(p, schema)?;
            let r = schema_of(q, schema)?;
            if let Some(a) = l.intersection(&r).next() {
                return Err(RaError::OverlappingProduct(a.clone()));
            }
            l.union(&r).cloned().collect()
        }
        RaExpr::Rename(from, to, q) => {
            let mut s = schema_of(q, schema)?;
            if !s.remove(from) {
                return Err(RaError::UnknownAttribute(from.clone()));
            }
            if !s.insert(to.clone()) {
                return Err(RaError::DuplicateAttribute(to.clone()));
            }
            s
        }
        RaExpr::Union(p, r) | RaExpr::Difference(p, r) => {
            let l = schema_of(p, schema)?;
            if l != schema_of(r, schema)? {
                let op = if matches!(q, RaExpr::Union(..)) { "union" } else { "difference" };
                return Err(RaError::SchemaMismatch(op));
            }
            l
        }
    })
}

fn relations_of(q: &RaExpr, out: &mut BTreeSet<String>) {
    match q {
        RaExpr::Relation(r) => {
            out.insert(r.clone());
        }
        RaExpr::Select(_, _, q) | RaExpr::Project(_, q) | RaExpr::Rename(_, _, q) => relations_of(q, out),
        RaExpr::Product(p, q) | RaExpr::Union(p, q) | RaExpr::Difference(p, q) => {
            relations_of(p, out);
            relations_of(q, out);
        }
    }
}

/// Evaluates a query directly over a database.
pub fn eval_ra(q: &RaExpr, schema: &Schema, db: &Database) -> Result<Relation, RaError> {
    schema_of(q, schema)?;
    eval_checked(q, db)
}

fn eval_checked(q: &RaExpr, db: &Database) -> Result<Relation, RaError> {
    Ok(match q {
        RaExpr::Relation(r) => db.get(r).cloned().ok_or_else(|| RaError::MissingRelation(r.clone()))?,
        RaExpr::Select(a, b, q) => eval_checked(q, db)?.into_iter().filter(|t| t[a] == t[b]).collect(),
        RaExpr::Project(attrs, q) => eval_checked(q, db)?
            .into_iter()
            .map(|t| t.into_iter().filter(|(a, _)| attrs.contains(a)).collect())
            .collect(),
        RaExpr::Product(p, q) => {
            let l = eval_checked(p, db)?;
            let r = eval_checked(q, db)?;
            l.iter()
                .flat_map(|t1| r.iter().map(move |t2| t1.iter().chain(t2).map(|(a, v)| (a.clone(), v.clone())).collect()))
                .collect()
        }
        RaExpr::Rename(from, to, q) => eval_checked(q, db)?
            .into_iter()
            .map(|mut t| {
                let v = t.remove(from).expect("schema checked");
                t.insert(to.clone(), v);
                t
            })
            .collect(),
        RaExpr::Union(p, q) => {
            let mut l = eval_checked(p, db)?;
            l.extend(eval_checked(q, db)?);
            l
        }
        RaExpr::Difference(p, q) => {
            let r = eval_checked(q, db)?;
            eval_checked(p, db)?.into_iter().filter(|t| !r.contains(t)).collect()
        }
    })
}

/// `⟨tag:{⟨A:{⟨a⟩}⟩ …}⟩` for a tuple.
pub fn encode_tuple(t: &Tuple, tag: &Atom) -> RxNode {
    RxNode::elem_with(
        tag.clone(),
        t.iter()
            .map(|(a, v)| RxNode::elem_with(a.clone(), BTreeSet::from([RxNode::Data(v.clone())])))
            .collect(),
    )
}

pub fn encode_relation(r: &Relation, tag: &Atom) -> RxValue {
    r.iter().map(|t| Item::Node(encode_tuple(t, tag))).collect()
}

/// Inverse of [`encode_relation`] on values whose every item is a well
/// formed tuple over exactly `attrs`.
pub fn decode_relation(v: &RxValue, attrs: &BTreeSet<Atom>, tag: &Atom) -> Result<Relation, RaError> {
    let names = || attrs.iter().map(|a| a.as_str().to_string()).collect::<Vec<_>>();
    let mut out = Relation::new();
    for item in v.iter() {
        let Some(RxNode::Elem(t, fields)) = item.as_node() else {
            return Err(RaError::NotARelation(names()));
        };
        if t != tag {
            return Err(RaError::NotARelation(names()));
        }
        let mut tuple = Tuple::new();
        for f in fields.iter() {
            let RxNode::Elem(a, content) = f else {
                return Err(RaError::NotARelation(names()));
            };
            let mut content = content.iter();
            let (Some(RxNode::Data(x)), None) = (content.next(), content.next()) else {
                return Err(RaError::NotARelation(names()));
            };
            if tuple.insert(a.clone(), x.clone()).is_some() {
                return Err(RaError::BadTuple {
                    expected: names(),
                    found: fields.iter().map(node_name).collect(),
                });
            }
        }
        if !tuple.keys().eq(attrs.iter()) {
            return Err(RaError::BadTuple {
                expected: names(),
                found: tuple.keys().map(|a| a.as_str().to_string()).collect(),
            });
        }
        out.insert(tuple);
    }
    Ok(out)
}

fn node_name(n: &RxNode) -> String {
    match n {
        RxNode::Data(a) | RxNode::Elem(a, _) => a.as_str().to_string(),
    }
}

/// Encodes each relation of the database under the schema's tuple tag.
pub fn encode_database(db: &Database) -> Environment<RxValue> {
    let tag = Atom::named(TUPLE_TAG);
    db.iter().map(|(r, rel)| (r.clone(), encode_relation(rel, &tag))).collect()
}

/// `coll(elem(coll(elem(single(data)))))`.
pub fn relation_type() -> RxType {
    RxType::coll(RxType::elem(RxType::coll(RxType::elem(RxType::single(RxType::Data)))))
}

/// Fresh variable names. Relation names never start with `_`, so these
/// cannot capture the free variables of a compiled query.
#[derive(Default)]
pub(crate) struct Names(usize);

impl Names {
    pub(crate) fn fresh(&mut self, stem: &str) -> String {
        self.0 += 1;
        format!("_{stem}{}", self.0)
    }
}

fn lit(a: &Atom) -> RxExpr {
    XqExpr::Atom(a.clone())
}

fn var(x: &str) -> RxExpr {
    XqExpr::var(x)
}

pub(crate) fn conj(cs: Vec<Cond<RxType>>) -> Cond<RxType> {
    if cs.len() == 1 {
        cs.into_iter().next().expect("one condition")
    } else {
        Cond::And(cs)
    }
}

pub(crate) fn name_is(x: &str, a: &Atom) -> Cond<RxType> {
    Cond::Eq(XqExpr::name(var(x)), lit(a))
}

pub(crate) fn same_value(x: &str, y: &str) -> Cond<RxType> {
    Cond::Eq(XqExpr::children_of(var(x)), XqExpr::children_of(var(y)))
}

/// `for*` over the children of `t`, one fresh variable per attribute.
pub(crate) fn bind_children(names: &mut Names, t: &str, attrs: &[Atom]) -> Vec<(String, RxExpr)> {
    attrs.iter().map(|_| (names.fresh("x"), XqExpr::children_of(var(t)))).collect()
}

/// Builds `for t in r, for* xᵢ in children(t) return if name(xᵢ)=Aᵢ ∧ …
/// then elem{tag}{x₁, …, xₙ} else ()`.
pub(crate) fn normalize(names: &mut Names, source: RxExpr, attrs: &[Atom], tag: &Atom) -> RxExpr {
    let t = names.fresh("t");
    let binds = bind_children(names, &t, attrs);
    let test = conj(binds.iter().zip(attrs).map(|((x, _), a)| name_is(x, a)).collect());
    let rebuilt = XqExpr::elem(lit(tag), XqExpr::seq_all(binds.iter().map(|(x, _)| var(x))));
    let inner = XqExpr::for_many(binds, None, XqExpr::if_cond(test, rebuilt, XqExpr::Empty));
    XqExpr::for_in(&t, None, source, inner)
}

struct Compiler<'s> {
    schema: &'s Schema,
    names: Names,
    tag: Atom,
}

impl Compiler<'_> {
    fn compile(&mut self, q: &RaExpr) -> Result<RxExpr, RaError> {
        let tag = self.tag.clone();
        Ok(match q {
            RaExpr::Relation(r) => {
                let attrs = self.schema.get(r).ok_or_else(|| RaError::UnknownRelation(r.clone()))?;
                normalize(&mut self.names, var(r), attrs, &tag)
            }
            RaExpr::Select(a, b, q) => {
                let src = self.compile(q)?;
                let t = self.names.fresh("t");
                let (x1, x2) = (self.names.fresh("x"), self.names.fresh("x"));
                let test = Cond::And(vec![name_is(&x1, a), name_is(&x2, b), same_value(&x1, &x2)]);
                let body = XqExpr::for_many(
                    vec![(x1, XqExpr::children_of(var(&t))), (x2, XqExpr::children_of(var(&t)))],
                    None,
                    XqExpr::if_cond(test, var(&t), XqExpr::Empty),
                );
                XqExpr::for_in(&t, None, src, body)
            }
            RaExpr::Project(attrs, q) => {
                let src = self.compile(q)?;
                let t = self.names.fresh("t");
                let x = self.names.fresh("x");
                let keep = match attrs.len() {
                    1 => name_is(&x, &attrs[0]),
                    _ => Cond::Or(attrs.iter().map(|a| name_is(&x, a)).collect()),
                };
                let fields = XqExpr::for_in(
                    &x,
                    None,
                    XqExpr::children_of(var(&t)),
                    XqExpr::if_cond(keep, var(&x), XqExpr::Empty),
                );
                XqExpr::for_in(&t, None, src, XqExpr::elem(lit(&tag), fields))
            }
            RaExpr::Product(p, q) => {
                let (l, r) = (self.compile(p)?, self.compile(q)?);
                let (t1, t2) = (self.names.fresh("t"), self.names.fresh("t"));
                let body = XqExpr::elem(
                    lit(&tag),
                    XqExpr::seq(XqExpr::children_of(var(&t1)), XqExpr::children_of(var(&t2))),
                );
                XqExpr::for_many(vec![(t1, l), (t2, r)], None, body)
            }
            RaExpr::Rename(from, to, q) => {
                let src = self.compile(q)?;
                let t = self.names.fresh("t");
                let x = self.names.fresh("x");
                let renamed = XqExpr::elem(lit(to), XqExpr::children_of(var(&x)));
                let fields = XqExpr::for_in(
                    &x,
                    None,
                    XqExpr::children_of(var(&t)),
                    XqExpr::if_cond(name_is(&x, from), renamed, var(&x)),
                );
                XqExpr::for_in(&t, None, src, XqExpr::elem(lit(&tag), fields))
            }
            RaExpr::Union(p, q) => XqExpr::seq(self.compile(p)?, self.compile(q)?),
            RaExpr::Difference(p, q) => {
                let attrs: Vec<Atom> = schema_of(p, self.schema)?.into_iter().collect();
                let (l, r) = (self.compile(p)?, self.compile(q)?);
                let (t1, t2) = (self.names.fresh("t"), self.names.fresh("t"));
                let xs = bind_children(&mut self.names, &t1, &attrs);
                let ys = bind_children(&mut self.names, &t2, &attrs);
                let mut tests = Vec::new();
                for (((x, _), (y, _)), a) in xs.iter().zip(&ys).zip(&attrs) {
                    tests.push(name_is(x, a));
                    tests.push(name_is(y, a));
                }
                for ((x, _), (y, _)) in xs.iter().zip(&ys) {
                    tests.push(same_value(x, y));
                }
                let mut binds = xs;
                binds.extend(ys);
                let matched = XqExpr::for_many(
                    binds,
                    None,
                    XqExpr::if_cond(conj(tests), var(&t1), XqExpr::Empty),
                );
                let witness = XqExpr::for_in(&t2, None, r, matched);
                XqExpr::for_in(&t1, None, l, XqExpr::if_empty(witness, var(&t1), XqExpr::Empty))
            }
        })
    }
}

/// Compiles a query into an RX expression with emptiness tests, together
/// with the input type of each relation it mentions. On encoded databases
/// the result is the encoding of the query answer.
pub fn compile_ra(p: &RaProgram) -> Result<(RxExpr, TypeAssignment<RxType>), RaError> {
    schema_of(&p.query, &p.schema)?;
    let mut c = Compiler { schema: &p.schema, names: Names::default(), tag: Atom::named(TUPLE_TAG) };
    let e = c.compile(&p.query)?;
    let mut rels = BTreeSet::new();
    relations_of(&p.query, &mut rels);
    let gamma = rels.into_iter().map(|r| (r, relation_type())).collect();
    Ok((e, gamma))
}
