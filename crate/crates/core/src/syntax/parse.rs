//! Parsers from the s-expression syntax to ASTs. The grammar is documented
//! in `docs/grammar.md`.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::ast::{
    Cond, Dependency, DepsProblem, NodePath, NrcExpr, PureRxExpr, RaExpr, RaProgram, RxExpr, Schema, XqExpr,
};
use crate::syntax::print;
use crate::syntax::sexp::{read_all, read_one, ParseError, Pos, Sexp, Span};
use crate::types::{NrcKind, NrcType, PureRxType, RxKind, RxType, TypeAssignment};
use crate::value::Atom;

/// Source spans of parsed subexpressions, keyed by node path.
pub type Spans = BTreeMap<NodePath, Span>;

/// An expression together with the spans of its subexpressions.
#[derive(Clone, Debug)]
pub struct Parsed<E> {
    pub expr: E,
    pub spans: Spans,
}

/// The five input languages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lang {
    Rx,
    PureRx,
    Penrc,
    Ra,
    Deps,
}

impl Lang {
    pub fn from_tag(tag: &str) -> Option<Lang> {
        match tag {
            "rx" => Some(Lang::Rx),
            "pure-rx" => Some(Lang::PureRx),
            "penrc" => Some(Lang::Penrc),
            "ra" => Some(Lang::Ra),
            "deps" => Some(Lang::Deps),
            _ => None,
        }
    }

    pub fn from_extension(ext: &str) -> Option<Lang> {
        match ext {
            "rx" => Some(Lang::Rx),
            "prx" => Some(Lang::PureRx),
            "nrc" => Some(Lang::Penrc),
            "ra" => Some(Lang::Ra),
            "dep" => Some(Lang::Deps),
            _ => None,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Lang::Rx => "rx",
            Lang::PureRx => "pure-rx",
            Lang::Penrc => "penrc",
            Lang::Ra => "ra",
            Lang::Deps => "deps",
        }
    }
}

/// Any parsed input.
#[derive(Clone, Debug)]
pub enum Ast {
    Rx(Parsed<RxExpr>),
    PureRx(Parsed<PureRxExpr>),
    Penrc(Parsed<NrcExpr>),
    Ra(RaProgram),
    Deps(DepsProblem),
}

pub fn parse(text: &str, lang: Lang) -> Result<Ast, ParseError> {
    Ok(match lang {
        Lang::Rx => Ast::Rx(parse_rx(text)?),
        Lang::PureRx => Ast::PureRx(parse_pure_rx(text)?),
        Lang::Penrc => Ast::Penrc(parse_penrc(text)?),
        Lang::Ra => Ast::Ra(parse_ra(text)?),
        Lang::Deps => Ast::Deps(parse_deps(text)?),
    })
}

/// The type language of type switches, with its concrete syntax.
pub trait TypeSyntax: Sized {
    /// Whether the singleton constructor `(sing e)` is part of the language.
    const ALLOWS_SINGLETON: bool;
    fn parse_type(s: &Sexp) -> Result<Self, ParseError>;
    fn type_sexp(&self) -> Sexp;
}

impl TypeSyntax for RxType {
    const ALLOWS_SINGLETON: bool = false;

    fn parse_type(s: &Sexp) -> Result<Self, ParseError> {
        let t = rx_type_term(s)?;
        t.check().map_err(|e| s.error(e.to_string()))?;
        Ok(t)
    }

    fn type_sexp(&self) -> Sexp {
        print::rx_type_sexp(self)
    }
}

impl TypeSyntax for PureRxType {
    const ALLOWS_SINGLETON: bool = true;

    fn parse_type(s: &Sexp) -> Result<Self, ParseError> {
        let t = pure_type_term(s)?;
        t.check().map_err(|e| s.error(e.to_string()))?;
        Ok(t)
    }

    fn type_sexp(&self) -> Sexp {
        print::pure_type_sexp(self)
    }
}

impl TypeSyntax for NrcType {
    const ALLOWS_SINGLETON: bool = true;

    fn parse_type(s: &Sexp) -> Result<Self, ParseError> {
        nrc_type_term(s)
    }

    fn type_sexp(&self) -> Sexp {
        print::nrc_type_sexp(self)
    }
}

// ---------------------------------------------------------------------------
// Helpers

fn arity<'a>(s: &'a Sexp, head: &str, args: &'a [Sexp], n: usize) -> Result<&'a [Sexp], ParseError> {
    if args.len() == n {
        Ok(args)
    } else {
        Err(s.error(format!("`{head}` takes {n} argument(s), found {}", args.len())))
    }
}

fn at_least<'a>(s: &'a Sexp, head: &str, args: &'a [Sexp], n: usize) -> Result<&'a [Sexp], ParseError> {
    if args.len() >= n {
        Ok(args)
    } else {
        Err(s.error(format!("`{head}` takes at least {n} arguments, found {}", args.len())))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '\'' | '.' | '-'))
}

fn identifier(s: &Sexp) -> Result<String, ParseError> {
    match s {
        Sexp::Sym(x, _) if is_identifier(x) => Ok(x.clone()),
        _ => Err(s.error("expected an identifier")),
    }
}

fn atom_literal(s: &Sexp, text: &str) -> Result<Atom, ParseError> {
    Atom::new(text).map_err(|e| s.error(e.to_string()))
}

fn fold_binary<T>(items: Vec<T>, f: impl Fn(T, T) -> T) -> T {
    items.into_iter().reduce(f).expect("at least one operand")
}

// ---------------------------------------------------------------------------
// Kinds and types

pub fn rx_kind(s: &Sexp) -> Result<RxKind, ParseError> {
    let (head, args) = s.as_form().ok_or_else(|| s.error("expected a kind"))?;
    match head {
        "kind-atom" => arity(s, head, args, 0).map(|_| RxKind::Atom),
        "kind-data" => arity(s, head, args, 0).map(|_| RxKind::Data),
        "kind-elem" => arity(s, head, args, 0).map(|_| RxKind::Elem),
        "kind-sum" => {
            let ks = at_least(s, head, args, 2)?.iter().map(rx_kind).collect::<Result<Vec<_>, _>>()?;
            Ok(fold_binary(ks, RxKind::union))
        }
        _ => Err(s.error(format!("unknown RX kind `{head}`"))),
    }
}

pub fn nrc_kind(s: &Sexp) -> Result<NrcKind, ParseError> {
    let (head, args) = s.as_form().ok_or_else(|| s.error("expected a kind"))?;
    match head {
        "kind-atom" => arity(s, head, args, 0).map(|_| NrcKind::Atom),
        "kind-coll" => arity(s, head, args, 0).map(|_| NrcKind::Coll),
        "kind-prod" => {
            let a = arity(s, head, args, 2)?;
            Ok(NrcKind::prod(nrc_kind(&a[0])?, nrc_kind(&a[1])?))
        }
        "kind-sum" => {
            let ks = at_least(s, head, args, 2)?.iter().map(nrc_kind).collect::<Result<Vec<_>, _>>()?;
            Ok(fold_binary(ks, NrcKind::union))
        }
        _ => Err(s.error(format!("unknown NRC kind `{head}`"))),
    }
}

fn nrc_type_term(s: &Sexp) -> Result<NrcType, ParseError> {
    let (head, args) = s.as_form().ok_or_else(|| s.error("expected a type"))?;
    match head {
        "void" => arity(s, head, args, 0).map(|_| NrcType::Void),
        "atom" => arity(s, head, args, 0).map(|_| NrcType::Atom),
        "prod" => {
            let a = arity(s, head, args, 2)?;
            Ok(NrcType::prod(nrc_type_term(&a[0])?, nrc_type_term(&a[1])?))
        }
        "sum" => {
            let ts = at_least(s, head, args, 2)?
                .iter()
                .map(nrc_type_term)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(fold_binary(ts, NrcType::union))
        }
        "coll" => Ok(NrcType::coll(nrc_type_term(&arity(s, head, args, 1)?[0])?)),
        _ => Err(s.error(format!("unknown NRC type `{head}`"))),
    }
}

fn rx_type_term(s: &Sexp) -> Result<RxType, ParseError> {
    let (head, args) = s.as_form().ok_or_else(|| s.error("expected a type"))?;
    match head {
        "atom" => arity(s, head, args, 0).map(|_| RxType::Atom),
        "data" => arity(s, head, args, 0).map(|_| RxType::Data),
        "elem" => Ok(RxType::elem(rx_type_term(&arity(s, head, args, 1)?[0])?)),
        "sum" => {
            let ts = at_least(s, head, args, 2)?.iter().map(rx_type_term).collect::<Result<Vec<_>, _>>()?;
            Ok(fold_binary(ts, RxType::union))
        }
        "coll" => Ok(RxType::coll(rx_type_term(&arity(s, head, args, 1)?[0])?)),
        "single" => Ok(RxType::single(rx_type_term(&arity(s, head, args, 1)?[0])?)),
        _ => Err(s.error(format!("unknown RX type `{head}`"))),
    }
}

fn pure_type_term(s: &Sexp) -> Result<PureRxType, ParseError> {
    let (head, args) = s.as_form().ok_or_else(|| s.error("expected a type"))?;
    match head {
        "atom" => arity(s, head, args, 0).map(|_| PureRxType::Atom),
        "data" => arity(s, head, args, 0).map(|_| PureRxType::Data),
        "elem" => Ok(PureRxType::Elem(args.iter().map(pure_type_term).collect::<Result<_, _>>()?)),
        "sum" => {
            let ts = at_least(s, head, args, 2)?
                .iter()
                .map(pure_type_term)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(fold_binary(ts, PureRxType::union))
        }
        "coll" => Ok(PureRxType::coll(pure_type_term(&arity(s, head, args, 1)?[0])?)),
        _ => Err(s.error(format!("unknown pure RX type `{head}`"))),
    }
}

pub fn parse_rx_type(text: &str) -> Result<RxType, ParseError> {
    RxType::parse_type(&read_one(text)?)
}

pub fn parse_pure_type(text: &str) -> Result<PureRxType, ParseError> {
    PureRxType::parse_type(&read_one(text)?)
}

pub fn parse_nrc_type(text: &str) -> Result<NrcType, ParseError> {
    NrcType::parse_type(&read_one(text)?)
}

/// Parses a type assignment: a sequence of `(x T)` forms with distinct
/// variables.
pub fn parse_gamma<T: TypeSyntax>(text: &str) -> Result<TypeAssignment<T>, ParseError> {
    let mut out = BTreeMap::new();
    for s in read_all(text)? {
        let items = match &s {
            Sexp::List(items, _) if items.len() == 2 => items,
            _ => return Err(s.error("expected `(variable type)`")),
        };
        let x = identifier(&items[0])?;
        let t = T::parse_type(&items[1])?;
        if out.insert(x.clone(), t).is_some() {
            return Err(s.error(format!("variable `{x}` is assigned twice")));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// RX and pure RX

struct XqParser<'s> {
    spans: &'s mut Spans,
}

impl XqParser<'_> {
    fn expr<T: TypeSyntax>(&mut self, s: &Sexp, path: &mut NodePath) -> Result<XqExpr<T>, ParseError> {
        self.spans.insert(path.clone(), s.span());
        match s {
            Sexp::Sym(_, _) => Ok(XqExpr::Var(identifier(s)?)),
            Sexp::Str(text, _) => Ok(XqExpr::Atom(atom_literal(s, text)?)),
            Sexp::List(items, _) if items.is_empty() => Ok(XqExpr::Empty),
            Sexp::List(..) => {
                let (head, args) = s.as_form().ok_or_else(|| s.error("expected an operator"))?;
                self.form(s, head, args, path)
            }
        }
    }

    fn child<T: TypeSyntax>(&mut self, s: &Sexp, path: &mut NodePath, i: u32) -> Result<XqExpr<T>, ParseError> {
        path.push(i);
        let r = self.expr(s, path);
        path.pop();
        r
    }

    fn boxed<T: TypeSyntax>(&mut self, s: &Sexp, path: &mut NodePath, i: u32) -> Result<Box<XqExpr<T>>, ParseError> {
        self.child(s, path, i).map(Box::new)
    }

    fn form<T: TypeSyntax>(
        &mut self,
        s: &Sexp,
        head: &str,
        args: &[Sexp],
        path: &mut NodePath,
    ) -> Result<XqExpr<T>, ParseError> {
        use XqExpr as X;
        Ok(match head {
            "text" => X::Text(self.boxed(&arity(s, head, args, 1)?[0], path, 0)?),
            "data" => X::Data(self.boxed(&arity(s, head, args, 1)?[0], path, 0)?),
            "name" => X::Name(self.boxed(&arity(s, head, args, 1)?[0], path, 0)?),
            "children" => X::Children(self.boxed(&arity(s, head, args, 1)?[0], path, 0)?),
            "empty" => {
                arity(s, head, args, 0)?;
                X::Empty
            }
            "elem" => {
                let a = arity(s, head, args, 2)?;
                X::Elem(self.boxed(&a[0], path, 0)?, self.boxed(&a[1], path, 1)?)
            }
            "seq" => {
                // n-ary sequences nest to the left; each nested node gets the
                // span of the whole form.
                let a = at_least(s, head, args, 2)?;
                self.seq_chain(s, a, path)?
            }
            "sing" => {
                if !T::ALLOWS_SINGLETON {
                    return Err(s.error("the singleton constructor is only available in pure RX"));
                }
                X::Single(self.boxed(&arity(s, head, args, 1)?[0], path, 0)?)
            }
            "for" => {
                let (var, kind, rest) = match args.len() {
                    3 => (identifier(&args[0])?, None, &args[1..]),
                    4 => (identifier(&args[0])?, Some(rx_kind(&args[1])?), &args[2..]),
                    n => return Err(s.error(format!("`for` takes 3 or 4 arguments, found {n}"))),
                };
                X::For { var, kind, source: self.boxed(&rest[0], path, 0)?, body: self.boxed(&rest[1], path, 1)? }
            }
            "for*" => {
                let (binds, kind, body) = match args.len() {
                    2 => (&args[0], None, &args[1]),
                    3 => (&args[0], Some(rx_kind(&args[1])?), &args[2]),
                    n => return Err(s.error(format!("`for*` takes 2 or 3 arguments, found {n}"))),
                };
                let list = match binds {
                    Sexp::List(items, _) => items,
                    _ => return Err(binds.error("expected a binding list")),
                };
                let mut bindings = Vec::new();
                for (i, bnd) in list.iter().enumerate() {
                    match bnd {
                        Sexp::List(pair, _) if pair.len() == 2 => {
                            let x = identifier(&pair[0])?;
                            bindings.push((x, self.child(&pair[1], path, i as u32)?));
                        }
                        _ => return Err(bnd.error("expected `(variable source)`")),
                    }
                }
                let n = bindings.len() as u32;
                X::ForMany { bindings, kind, body: self.boxed(body, path, n)? }
            }
            "ifeq" => {
                let a = arity(s, head, args, 4)?;
                X::IfEq(
                    self.boxed(&a[0], path, 0)?,
                    self.boxed(&a[1], path, 1)?,
                    self.boxed(&a[2], path, 2)?,
                    self.boxed(&a[3], path, 3)?,
                )
            }
            "ifempty" => {
                let a = arity(s, head, args, 3)?;
                X::IfEmpty(self.boxed(&a[0], path, 0)?, self.boxed(&a[1], path, 1)?, self.boxed(&a[2], path, 2)?)
            }
            "iftype" => {
                let a = arity(s, head, args, 4)?;
                let t = T::parse_type(&a[1])?;
                X::IfType(self.boxed(&a[0], path, 0)?, t, self.boxed(&a[2], path, 1)?, self.boxed(&a[3], path, 2)?)
            }
            "if" => {
                let a = arity(s, head, args, 3)?;
                let mut next = 0u32;
                let c = self.cond(&a[0], path, &mut next)?;
                let p = self.boxed(&a[1], path, next)?;
                let q = self.boxed(&a[2], path, next + 1)?;
                X::If(Box::new(c), p, q)
            }
            _ => return Err(s.error(format!("unknown form `{head}`"))),
        })
    }

    fn seq_chain<T: TypeSyntax>(&mut self, s: &Sexp, args: &[Sexp], path: &mut NodePath) -> Result<XqExpr<T>, ParseError> {
        let (last, init) = args.split_last().expect("non-empty");
        let left = if init.len() == 1 {
            self.child(&init[0], path, 0)?
        } else {
            path.push(0);
            self.spans.insert(path.clone(), s.span());
            let r = self.seq_chain(s, init, path);
            path.pop();
            r?
        };
        let right = self.child(last, path, 1)?;
        Ok(XqExpr::seq(left, right))
    }

    fn cond<T: TypeSyntax>(&mut self, s: &Sexp, path: &mut NodePath, next: &mut u32) -> Result<Cond<T>, ParseError> {
        let (head, args) = s.as_form().ok_or_else(|| s.error("expected a condition"))?;
        match head {
            "eq" | "ne" => {
                let a = arity(s, head, args, 2)?;
                let l = self.child(&a[0], path, *next)?;
                let r = self.child(&a[1], path, *next + 1)?;
                *next += 2;
                Ok(if head == "eq" { Cond::Eq(l, r) } else { Cond::Ne(l, r) })
            }
            "and" | "or" => {
                let cs = args.iter().map(|c| self.cond(c, path, next)).collect::<Result<Vec<_>, _>>()?;
                Ok(if head == "and" { Cond::And(cs) } else { Cond::Or(cs) })
            }
            _ => Err(s.error(format!("unknown condition `{head}`"))),
        }
    }
}

fn parse_xq<T: TypeSyntax>(text: &str) -> Result<Parsed<XqExpr<T>>, ParseError> {
    let s = read_one(text)?;
    let mut spans = Spans::new();
    let expr = XqParser { spans: &mut spans }.expr(&s, &mut Vec::new())?;
    Ok(Parsed { expr, spans })
}

pub fn parse_rx(text: &str) -> Result<Parsed<RxExpr>, ParseError> {
    parse_xq(text)
}

pub fn parse_pure_rx(text: &str) -> Result<Parsed<PureRxExpr>, ParseError> {
    parse_xq(text)
}

/// Parses an RX or pure RX expression from an already-read s-expression.
pub fn xq_from_sexp<T: TypeSyntax>(s: &Sexp) -> Result<XqExpr<T>, ParseError> {
    XqParser { spans: &mut Spans::new() }.expr(s, &mut Vec::new())
}

// ---------------------------------------------------------------------------
// PENRC

fn nrc_expr(s: &Sexp, path: &mut NodePath, spans: &mut Spans) -> Result<NrcExpr, ParseError> {
    spans.insert(path.clone(), s.span());
    let mut child = |s: &Sexp, i: u32, spans: &mut Spans| -> Result<Box<NrcExpr>, ParseError> {
        path.push(i);
        let r = nrc_expr(s, path, spans);
        path.pop();
        r.map(Box::new)
    };
    match s {
        Sexp::Sym(_, _) => Ok(NrcExpr::Var(identifier(s)?)),
        Sexp::Str(text, _) => Ok(NrcExpr::Atom(atom_literal(s, text)?)),
        Sexp::List(..) => {
            let (head, args) = s.as_form().ok_or_else(|| s.error("expected an operator"))?;
            Ok(match head {
                "pair" => {
                    let a = arity(s, head, args, 2)?;
                    NrcExpr::Pair(child(&a[0], 0, spans)?, child(&a[1], 1, spans)?)
                }
                "fst" => NrcExpr::Fst(child(&arity(s, head, args, 1)?[0], 0, spans)?),
                "snd" => NrcExpr::Snd(child(&arity(s, head, args, 1)?[0], 0, spans)?),
                "empty" => {
                    arity(s, head, args, 0)?;
                    NrcExpr::Empty
                }
                "sing" => NrcExpr::Sing(child(&arity(s, head, args, 1)?[0], 0, spans)?),
                "flatten" => NrcExpr::Flatten(child(&arity(s, head, args, 1)?[0], 0, spans)?),
                "union" => {
                    let a = at_least(s, head, args, 2)?;
                    drop(child);
                    return nrc_union_chain(s, a, path, spans);
                }
                "for" => {
                    let a = arity(s, head, args, 3)?;
                    let var = identifier(&a[0])?;
                    NrcExpr::For { var, source: child(&a[1], 0, spans)?, body: child(&a[2], 1, spans)? }
                }
                "ifeq" => {
                    let a = arity(s, head, args, 4)?;
                    NrcExpr::IfEq(
                        child(&a[0], 0, spans)?,
                        child(&a[1], 1, spans)?,
                        child(&a[2], 2, spans)?,
                        child(&a[3], 3, spans)?,
                    )
                }
                "ifkind" => {
                    let a = arity(s, head, args, 4)?;
                    let k = nrc_kind(&a[1])?;
                    NrcExpr::IfKind(child(&a[0], 0, spans)?, k, child(&a[2], 1, spans)?, child(&a[3], 2, spans)?)
                }
                "ifempty" => {
                    let a = arity(s, head, args, 3)?;
                    NrcExpr::IfEmpty(child(&a[0], 0, spans)?, child(&a[1], 1, spans)?, child(&a[2], 2, spans)?)
                }
                _ => return Err(s.error(format!("unknown form `{head}`"))),
            })
        }
    }
}

fn nrc_union_chain(s: &Sexp, args: &[Sexp], path: &mut NodePath, spans: &mut Spans) -> Result<NrcExpr, ParseError> {
    let (last, init) = args.split_last().expect("non-empty");
    path.push(0);
    let left = if init.len() == 1 {
        nrc_expr(&init[0], path, spans)
    } else {
        spans.insert(path.clone(), s.span());
        nrc_union_chain(s, init, path, spans)
    };
    path.pop();
    let left = left?;
    path.push(1);
    let right = nrc_expr(last, path, spans);
    path.pop();
    Ok(NrcExpr::union(left, right?))
}

pub fn parse_penrc(text: &str) -> Result<Parsed<NrcExpr>, ParseError> {
    let s = read_one(text)?;
    let mut spans = Spans::new();
    let expr = nrc_expr(&s, &mut Vec::new(), &mut spans)?;
    Ok(Parsed { expr, spans })
}

// ---------------------------------------------------------------------------
// Relational algebra

fn attribute(s: &Sexp) -> Result<Atom, ParseError> {
    let name = identifier(s)?;
    atom_literal(s, &name)
}

fn attribute_list(s: &Sexp) -> Result<Vec<Atom>, ParseError> {
    match s {
        Sexp::List(items, _) => items.iter().map(attribute).collect(),
        _ => Err(s.error("expected an attribute list")),
    }
}

fn ra_expr(s: &Sexp, schema: &Schema) -> Result<RaExpr, ParseError> {
    if let Sexp::Sym(..) = s {
        let r = identifier(s)?;
        if !schema.contains_key(&r) {
            return Err(s.error(format!("relation `{r}` is not in the schema")));
        }
        return Ok(RaExpr::Relation(r));
    }
    let (head, args) = s.as_form().ok_or_else(|| s.error("expected a query"))?;
    let sub = |s: &Sexp| ra_expr(s, schema).map(Box::new);
    Ok(match head {
        "select" => {
            let a = arity(s, head, args, 3)?;
            RaExpr::Select(attribute(&a[0])?, attribute(&a[1])?, sub(&a[2])?)
        }
        "project" => {
            let a = arity(s, head, args, 2)?;
            RaExpr::Project(attribute_list(&a[0])?, sub(&a[1])?)
        }
        "product" => {
            let a = arity(s, head, args, 2)?;
            RaExpr::Product(sub(&a[0])?, sub(&a[1])?)
        }
        "rename" => {
            let a = arity(s, head, args, 3)?;
            RaExpr::Rename(attribute(&a[0])?, attribute(&a[1])?, sub(&a[2])?)
        }
        "union" => {
            let a = arity(s, head, args, 2)?;
            RaExpr::Union(sub(&a[0])?, sub(&a[1])?)
        }
        "diff" => {
            let a = arity(s, head, args, 2)?;
            RaExpr::Difference(sub(&a[0])?, sub(&a[1])?)
        }
        _ => return Err(s.error(format!("unknown query form `{head}`"))),
    })
}

/// Parses `(schema (r A …) …)` followed by one query.
pub fn parse_ra(text: &str) -> Result<RaProgram, ParseError> {
    let forms = read_all(text)?;
    let [schema_form, query_form] = forms.as_slice() else {
        let pos = forms.get(2).map_or(Pos { line: 1, col: 1 }, |s| s.span().start);
        return Err(ParseError::at(pos, "expected a schema followed by a single query"));
    };
    let (head, rels) = schema_form
        .as_form()
        .filter(|(h, _)| *h == "schema")
        .ok_or_else(|| schema_form.error("expected `(schema …)`"))?;
    debug_assert_eq!(head, "schema");
    let mut schema = Schema::new();
    for rel in rels {
        let items = match rel {
            Sexp::List(items, _) if items.len() >= 2 => items,
            _ => return Err(rel.error("expected `(relation attribute …)`")),
        };
        let name = identifier(&items[0])?;
        if name.starts_with('_') {
            return Err(items[0].error("relation names may not start with `_`"));
        }
        let attrs = items[1..].iter().map(attribute).collect::<Result<Vec<_>, _>>()?;
        if attrs.iter().collect::<BTreeSet<_>>().len() != attrs.len() {
            return Err(rel.error("repeated attribute"));
        }
        if schema.insert(name.clone(), attrs).is_some() {
            return Err(rel.error(format!("relation `{name}` declared twice")));
        }
    }
    let query = ra_expr(query_form, &schema)?;
    Ok(RaProgram { schema, query })
}

// ---------------------------------------------------------------------------
// Dependencies

fn dependency(s: &Sexp, arity_k: usize) -> Result<Dependency, ParseError> {
    let (head, args) = s.as_form().ok_or_else(|| s.error("expected a dependency"))?;
    let a = arity(s, head, args, 2)?;
    let (l, r) = (attribute_list(&a[0])?, attribute_list(&a[1])?);
    for attr in l.iter().chain(&r) {
        let ok = attr
            .as_str()
            .strip_prefix('A')
            .and_then(|n| n.parse::<usize>().ok())
            .is_some_and(|n| (1..=arity_k).contains(&n));
        if !ok {
            return Err(s.error(format!("attribute `{attr}` is not one of A1…A{arity_k}")));
        }
    }
    match head {
        "fd" => Ok(Dependency::Fd(l, r)),
        "ind" => {
            if l.len() != r.len() {
                return Err(s.error("inclusion dependency sides differ in length"));
            }
            Ok(Dependency::Ind(l, r))
        }
        _ => Err(s.error(format!("unknown dependency `{head}`"))),
    }
}

/// Parses `(problem (arity k) (sigma dep …) (target dep))`.
pub fn parse_deps(text: &str) -> Result<DepsProblem, ParseError> {
    let s = read_one(text)?;
    let (head, args) = s.as_form().ok_or_else(|| s.error("expected `(problem …)`"))?;
    if head != "problem" {
        return Err(s.error("expected `(problem …)`"));
    }
    let a = arity(&s, head, args, 3)?;
    let section = |s: &Sexp, name: &str| -> Result<Vec<Sexp>, ParseError> {
        match s.as_form() {
            Some((h, rest)) if h == name => Ok(rest.to_vec()),
            _ => Err(s.error(format!("expected `({name} …)`"))),
        }
    };
    let ar = section(&a[0], "arity")?;
    let k = match ar.as_slice() {
        [Sexp::Sym(n, _)] => n.parse::<usize>().ok().filter(|&k| k >= 1),
        _ => None,
    }
    .ok_or_else(|| a[0].error("arity must be a positive integer"))?;
    let sigma = section(&a[1], "sigma")?
        .iter()
        .map(|d| dependency(d, k))
        .collect::<Result<Vec<_>, _>>()?;
    let target = match section(&a[2], "target")?.as_slice() {
        [d] => dependency(d, k)?,
        _ => return Err(a[2].error("expected exactly one target dependency")),
    };
    Ok(DepsProblem { arity: k, sigma, target })
}
