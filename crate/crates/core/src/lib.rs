//! Decision procedures for constructive modal logics with a master modality,
//! by translation into propositional dynamic logic.

pub mod error;
pub mod oracle;
pub mod relmodel;
pub mod semantics;
pub mod solver;
pub mod syntax;
pub mod translate;

pub use error::{Error, Result};
