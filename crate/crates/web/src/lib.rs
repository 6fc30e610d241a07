//! WebAssembly bindings for the browser demo. Every entry point takes and
//! returns plain strings; results are JSON objects with either the payload or
//! an `"error"` key.

mod svg;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use mastermodal::relmodel::{load_model, AnyModel};
use mastermodal::semantics::{pdl_satisfies, satisfies};
use mastermodal::solver::Logic;
use mastermodal::syntax::{parse_constructive, parse_formula, parse_pdl, render};
use mastermodal::translate::{iota, kappa, omega_of, tau};

pub use svg::draw;

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// Decides `formula` in `logic`. Invalid verdicts also carry an `"svg"`
/// drawing of the countermodel.
#[wasm_bindgen]
pub fn decide(logic: &str, formula: &str) -> String {
    respond((|| {
        let logic: Logic = logic.parse()?;
        let verdict = mastermodal::solver::decide_text(logic, formula).map_err(err)?;
        let mut out = verdict.to_json();
        if let Some(c) = verdict.countermodel() {
            out["svg"] = json!(draw(&c.model, Some(c.world)));
        }
        Ok(out)
    })())
}

/// Applies `omega`, `tau`, `iota` or `kappa`.
#[wasm_bindgen]
pub fn translate(map: &str, formula: &str) -> String {
    respond((|| {
        let text = match map {
            "omega" => render(&omega_of(&parse_constructive(formula).map_err(err)?).map_err(err)?),
            "tau" => render(&tau(&parse_formula(formula).map_err(err)?)),
            "iota" => render(&iota(&parse_pdl(formula).map_err(err)?).map_err(err)?),
            "kappa" => render(&kappa(&parse_formula(formula).map_err(err)?).map_err(err)?),
            other => return Err(format!("unknown translation `{other}`")),
        };
        Ok(json!({ "formula": text }))
    })())
}

/// Evaluates `formula` at `world` of a model document, and reports every
/// world where it holds.
#[wasm_bindgen]
pub fn evaluate(model: &str, world: usize, formula: &str) -> String {
    respond((|| {
        let doc = load_model(model).map_err(err)?;
        let extension: Vec<usize> = match &doc {
            AnyModel::Bi { model, .. } => {
                let f = parse_formula(formula).map_err(err)?;
                model.check_world(world).map_err(err)?;
                let mut ext = Vec::new();
                for w in 0..model.worlds {
                    if satisfies(model, w, &f).map_err(err)? {
                        ext.push(w);
                    }
                }
                ext
            }
            AnyModel::Pdl(m) => {
                let f = parse_pdl(formula).map_err(err)?;
                m.check_world(world).map_err(err)?;
                let mut ext = Vec::new();
                for w in 0..m.worlds {
                    if pdl_satisfies(m, w, &f).map_err(err)? {
                        ext.push(w);
                    }
                }
                ext
            }
        };
        Ok(json!({
            "world": world,
            "holds": extension.contains(&world),
            "extension": extension,
            "svg": draw(&doc, Some(world)),
        }))
    })())
}

/// Draws a model document as SVG.
#[wasm_bindgen]
pub fn model_svg(model: &str) -> String {
    respond(
        load_model(model)
            .map(|doc| json!({ "svg": draw(&doc, None) }))
            .map_err(err),
    )
}
