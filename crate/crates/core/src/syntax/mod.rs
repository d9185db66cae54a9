//! Abstract syntax, the s-expression concrete syntax, and sugar removal.

pub mod ast;
pub mod desugar;
pub mod parse;
pub mod print;
pub mod sexp;

pub use ast::*;
pub use desugar::desugar;
pub use parse::{parse, Ast, Lang, Parsed, Spans, TypeSyntax};
pub use sexp::{ParseError, Pos, Span};
