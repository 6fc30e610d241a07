//! PDL satisfiability by type elimination, and the validity pipelines built
//! on top of it.

mod closure;
mod decide;
mod eliminate;
mod types;

pub use closure::{fl_closure, ClosureSet, Literal, Member};
pub use decide::{decide, decide_text, pdl_valid, Countermodel, Logic, Query, Verdict};
pub use eliminate::{pdl_satisfiable, satisfiable_with, PdlWitness, DEFAULT_BUDGET};
pub use types::{PdlType, TypeGraph};
