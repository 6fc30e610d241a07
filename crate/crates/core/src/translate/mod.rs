//! Formula translations between the logics and the matching model constructions.

mod formulas;
mod models;

pub use formulas::{iota, kappa, kstar_to_constructive, omega, omega_of, tau, TranslationEnv};
pub use models::{
    ck_model_to_cs4, ck_model_to_wk, k_model_to_ck, pdl_model_to_wk, wk_generated_classical,
    wk_model_to_ck, wk_model_to_pdl, Cs4Construction, GeneratedClassical,
};
