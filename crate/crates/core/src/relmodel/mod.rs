//! Finite models, relation algebra and model-condition validators.

mod bits;
mod io;
mod model;
mod relation;
mod validate;

pub use bits::{BitSet, WorldSet};
pub use io::{dump_model, load_model, AnyModel};
pub use model::{restrict_to_infallible, BiModel, ModelKind, PdlModel, Restriction};
pub use relation::{rel_compose, rel_star, Relation};
pub use validate::{confluence_witness, is_model, require, validate, Condition, ModelViolation};
