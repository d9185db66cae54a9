//! Evaluation outcomes shared by the three evaluators.

use std::fmt;

use crate::syntax::ast::NodePath;

/// A reason for a run-time error, with a stable kebab-case code.
pub trait Reason: Copy + fmt::Debug + Eq {
    fn code(self) -> &'static str;
}

/// Evaluation got stuck at the subexpression found at `path`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Undefined<R> {
    pub reason: R,
    pub path: NodePath,
}

impl<R: Reason> fmt::Display for Undefined<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "undefined ({}) at node {:?}", self.reason.code(), self.path)
    }
}

/// The result of evaluating an expression: a value or a run-time error.
pub type Outcome<V, R> = Result<V, Undefined<R>>;

/// Internal form of [`Undefined`] while unwinding: the path is collected
/// innermost index first and reversed once at the top.
#[derive(Debug)]
pub(crate) struct Stuck<R> {
    pub reason: R,
    rev_path: Vec<u32>,
}

impl<R> Stuck<R> {
    pub fn here(reason: R) -> Self {
        Stuck { reason, rev_path: Vec::new() }
    }

    pub fn finish(mut self) -> Undefined<R> {
        self.rev_path.reverse();
        Undefined { reason: self.reason, path: self.rev_path }
    }
}

/// Runs a child evaluation, tagging a failure with the child's index.
pub(crate) fn at<T, R>(i: u32, r: Result<T, Stuck<R>>) -> Result<T, Stuck<R>> {
    r.map_err(|mut s| {
        s.rev_path.push(i);
        s
    })
}

/// Variable scope during evaluation: the environment plus loop bindings.
pub(crate) struct Scope<'a, V> {
    base: &'a crate::value::Environment<V>,
    local: Vec<(&'a str, V)>,
}

impl<'a, V> Scope<'a, V> {
    pub fn new(base: &'a crate::value::Environment<V>) -> Self {
        Scope { base, local: Vec::new() }
    }

    pub fn lookup(&self, x: &str) -> &V {
        self.local
            .iter()
            .rev()
            .find(|(y, _)| *y == x)
            .map(|(_, v)| v)
            .or_else(|| self.base.get(x))
            .unwrap_or_else(|| panic!("unbound variable `{x}`"))
    }

    pub fn push(&mut self, x: &'a str, v: V) {
        self.local.push((x, v));
    }

    pub fn pop(&mut self) {
        self.local.pop();
    }
}
