//! Formula languages: the constructive language with master modalities and
//! test-free PDL. ASTs, parsing, printing and structural metadata.

mod formula;
mod parse;
mod pdl;
mod render;

pub use formula::{check_fragment, formula_size, AnyFormula, Formula, FragmentTag, P_BOT};
pub use parse::{
    parse_constructive, parse_formula, parse_pdl, parse_program, ParseError, ParseErrorKind,
};
pub use pdl::{expand_diamonds, PdlFormula, Program, ProgramAtom};
pub use render::render;
