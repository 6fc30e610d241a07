//! JSON model documents.
//!
//! ```text
//! {"bot":[..],"kind":"ck"|"wk"|"cs4"|"ws4","mod":[[w,v],..],"pre":[[w,v],..],"val":{"p":[..]},"worlds":n}
//! {"kind":"pdl","rho":{"i":[[w,v],..],..},"val":{..},"worlds":n}
//! ```
//!
//! Keys are emitted sorted and every array ascending, so equal models dump to
//! identical bytes.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::syntax::ProgramAtom;

use super::bits::WorldSet;
use super::model::{BiModel, ModelKind, PdlModel};
use super::relation::Relation;

/// A model document of either family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyModel {
    Bi { kind: ModelKind, model: BiModel },
    Pdl(PdlModel),
}

impl AnyModel {
    pub fn worlds(&self) -> usize {
        match self {
            AnyModel::Bi { model, .. } => model.worlds,
            AnyModel::Pdl(m) => m.worlds,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            AnyModel::Bi { kind, .. } => kind.name(),
            AnyModel::Pdl(_) => "pdl",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyModel::Bi { kind, model } => json!({
                "kind": kind.name(),
                "worlds": model.worlds,
                "pre": pairs_json(&model.pre),
                "mod": pairs_json(&model.modal),
                "val": val_json(&model.val),
                "bot": model.bot.iter().collect::<Vec<_>>(),
            }),
            AnyModel::Pdl(m) => {
                let rho: Map<String, Value> = m
                    .rho
                    .iter()
                    .map(|(a, r)| (a.to_string(), pairs_json(r)))
                    .collect();
                json!({
                    "kind": "pdl",
                    "worlds": m.worlds,
                    "rho": rho,
                    "val": val_json(&m.val),
                })
            }
        }
    }
}

fn pairs_json(r: &Relation) -> Value {
    Value::Array(r.pairs().map(|(a, b)| json!([a, b])).collect())
}

fn val_json(val: &BTreeMap<String, WorldSet>) -> Value {
    Value::Object(
        val.iter()
            .map(|(k, s)| (k.clone(), json!(s.iter().collect::<Vec<_>>())))
            .collect(),
    )
}

pub fn dump_model(m: &AnyModel) -> String {
    // serde_json's default map is ordered, so keys come out sorted
    m.to_json().to_string()
}

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::ModelFormat(msg.into())
}

fn take<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| fmt_err(format!("missing key `{key}`")))
}

fn world(v: &Value, n: usize) -> Result<usize> {
    let w = v
        .as_u64()
        .ok_or_else(|| fmt_err(format!("expected a world index, found {v}")))? as usize;
    if w >= n {
        return Err(Error::WorldOutOfRange {
            world: w,
            worlds: n,
        });
    }
    Ok(w)
}

fn world_set(v: &Value, n: usize) -> Result<WorldSet> {
    let items = v
        .as_array()
        .ok_or_else(|| fmt_err(format!("expected an array of worlds, found {v}")))?;
    let mut s = WorldSet::new(n);
    for item in items {
        s.insert(world(item, n)?);
    }
    Ok(s)
}

fn relation(v: &Value, n: usize) -> Result<Relation> {
    let items = v
        .as_array()
        .ok_or_else(|| fmt_err(format!("expected an array of pairs, found {v}")))?;
    let mut r = Relation::empty(n);
    for item in items {
        match item.as_array().map(Vec::as_slice) {
            Some([a, b]) => {
                r.insert(world(a, n)?, world(b, n)?);
            }
            _ => return Err(fmt_err(format!("expected a pair, found {item}"))),
        }
    }
    Ok(r)
}

fn valuation(v: &Value, n: usize) -> Result<BTreeMap<String, WorldSet>> {
    let obj = v
        .as_object()
        .ok_or_else(|| fmt_err("`val` must be an object"))?;
    obj.iter()
        .map(|(k, s)| Ok((k.clone(), world_set(s, n)?)))
        .collect()
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(fmt_err(format!("unexpected key `{k}`"))),
        None => Ok(()),
    }
}

pub fn load_model(text: &str) -> Result<AnyModel> {
    let doc: Value = serde_json::from_str(text).map_err(|e| fmt_err(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| fmt_err("model document must be an object"))?;
    let kind = take(obj, "kind")?
        .as_str()
        .ok_or_else(|| fmt_err("`kind` must be a string"))?;
    let n = take(obj, "worlds")?
        .as_u64()
        .ok_or_else(|| fmt_err("`worlds` must be a natural number"))? as usize;
    if kind == "pdl" {
        check_keys(obj, &["kind", "worlds", "rho", "val"])?;
        let rho_obj = take(obj, "rho")?
            .as_object()
            .ok_or_else(|| fmt_err("`rho` must be an object"))?;
        let mut rho = BTreeMap::new();
        for (k, v) in rho_obj {
            let mut cs = k.chars();
            let atom = match (cs.next(), cs.next()) {
                (Some(c), None) => ProgramAtom::from_char(c),
                _ => None,
            }
            .ok_or_else(|| fmt_err(format!("unknown program `{k}`")))?;
            rho.insert(atom, relation(v, n)?);
        }
        return Ok(AnyModel::Pdl(PdlModel {
            worlds: n,
            rho,
            val: valuation(take(obj, "val")?, n)?,
        }));
    }
    let kind: ModelKind = kind.parse()?;
    check_keys(obj, &["kind", "worlds", "pre", "mod", "val", "bot"])?;
    Ok(AnyModel::Bi {
        kind,
        model: BiModel {
            worlds: n,
            pre: relation(take(obj, "pre")?, n)?,
            modal: relation(take(obj, "mod")?, n)?,
            val: valuation(take(obj, "val")?, n)?,
            bot: world_set(take(obj, "bot")?, n)?,
        },
    })
}
