//! Exact arithmetic for constacyclic codes over `F_{p^m}[u]/<u^t>`: the
//! chain ring, the quotient rings housing repeated-root codes, their ideals
//! and the closed-form invariants attached to them, together with a
//! brute-force ideal census used as ground truth.

pub mod chain;
pub mod classify;
pub mod decomposition;
pub mod error;
pub mod field;
pub mod ideal;
pub mod lemmas;
pub mod linalg;
pub mod oracle;
pub mod quotient;
pub mod text;

pub use chain::{ChainRing, ChainRingElement};
pub use error::{Error, Result};
pub use field::{FieldContext, FieldElement, FieldPoly};
pub use quotient::{LevelPart, ModulusKind, ModulusSpec, QuotElement, RingContext, RingDescriptor};
