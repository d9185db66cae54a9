//! Constructive translations: pure PERX into PENRC[kind], relational
//! algebra into RX with emptiness tests, dependency implication into pairs
//! of RX expressions, and emptiness tests into type switches.

pub mod deps;
pub mod emptiness;
pub mod encode;
pub mod expr;
pub mod ra;

pub use encode::{decode_pure, decode_rx, enc, translate_kind, translate_type};
pub use expr::{translate_expr, TranslateError};
