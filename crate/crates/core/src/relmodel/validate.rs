use std::fmt;

use super::model::{BiModel, ModelKind};
use super::relation::Relation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    AtomicExFalso,
    AtomicPersistence,
    FalsumPersistence,
    FalsumSeriality,
    Infallibility,
    PreNotPreorder,
    ModNotPreorder,
    NotConfluent,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::AtomicExFalso => "atomic-ex-falso",
            Condition::AtomicPersistence => "atomic-persistence",
            Condition::FalsumPersistence => "falsum-persistence",
            Condition::FalsumSeriality => "falsum-seriality",
            Condition::Infallibility => "infallibility",
            Condition::PreNotPreorder => "pre-not-preorder",
            Condition::ModNotPreorder => "mod-not-preorder",
            Condition::NotConfluent => "not-confluent",
        }
    }
}

/// A failed model condition together with worlds that witness the failure.
///
/// Witness layout per condition:
/// - ex falso, seriality, infallibility: `[w]`
/// - persistence: `[w, v]` with `w ≼ v` (or `w R v` for falsum)
/// - preorder: `[w]` (not reflexive) or `[a, b, c]` (not transitive)
/// - confluence: `[w, v, v']` with `w R v ≼ v'`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelViolation {
    pub condition: Condition,
    pub witness: Vec<usize>,
    pub atom: Option<String>,
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {:?}", self.condition.name(), self.witness)?;
        if let Some(a) = &self.atom {
            write!(f, " for `{a}`")?;
        }
        Ok(())
    }
}

fn violation(condition: Condition, witness: Vec<usize>) -> ModelViolation {
    ModelViolation {
        condition,
        witness,
        atom: None,
    }
}

fn preorder_witness(r: &Relation) -> Option<Vec<usize>> {
    if let Some(w) = (0..r.worlds()).find(|&w| !r.contains(w, w)) {
        return Some(vec![w]);
    }
    r.transitivity_witness().map(|(a, b, c)| vec![a, b, c])
}

/// Some `(w, v, v')` with `w R v ≼ v'` but no `w'` such that `w ≼ w' R v'`.
pub fn confluence_witness(pre: &Relation, modal: &Relation) -> Option<(usize, usize, usize)> {
    let n = pre.worlds();
    for w in 0..n {
        // everything reachable as w ≼ w' R v'
        let mut reach = super::bits::WorldSet::new(n);
        for w2 in pre.successors(w).iter() {
            reach.union_with(modal.successors(w2));
        }
        for v in modal.successors(w).iter() {
            if let Some(v2) = pre.successors(v).difference(&reach).first() {
                return Some((w, v, v2));
            }
        }
    }
    None
}

/// Checks `m` against the conditions of `kind`. Empty iff `m` is a model of that kind.
pub fn validate(m: &BiModel, kind: ModelKind) -> Vec<ModelViolation> {
    let mut out = Vec::new();
    if let Some(w) = preorder_witness(&m.pre) {
        out.push(violation(Condition::PreNotPreorder, w));
    }
    for (atom, ext) in &m.val {
        if let Some(w) = m.bot.difference(ext).first() {
            out.push(ModelViolation {
                condition: Condition::AtomicExFalso,
                witness: vec![w],
                atom: Some(atom.clone()),
            });
        }
        let escape = ext
            .iter()
            .find_map(|w| m.pre.successors(w).difference(ext).first().map(|v| (w, v)));
        if let Some((w, v)) = escape {
            out.push(ModelViolation {
                condition: Condition::AtomicPersistence,
                witness: vec![w, v],
                atom: Some(atom.clone()),
            });
        }
    }
    let escape = m.bot.iter().find_map(|w| {
        m.pre
            .successors(w)
            .union(m.modal.successors(w))
            .difference(&m.bot)
            .first()
            .map(|v| (w, v))
    });
    if let Some((w, v)) = escape {
        out.push(violation(Condition::FalsumPersistence, vec![w, v]));
    }
    if let Some(w) = m.bot.iter().find(|&w| m.modal.successors(w).is_empty()) {
        out.push(violation(Condition::FalsumSeriality, vec![w]));
    }
    if kind.infallible() {
        if let Some(w) = m.bot.first() {
            out.push(violation(Condition::Infallibility, vec![w]));
        }
    }
    if kind.s4() {
        if let Some(w) = preorder_witness(&m.modal) {
            out.push(violation(Condition::ModNotPreorder, w));
        }
        if let Some((w, v, v2)) = confluence_witness(&m.pre, &m.modal) {
            out.push(violation(Condition::NotConfluent, vec![w, v, v2]));
        }
    }
    out
}

pub fn is_model(m: &BiModel, kind: ModelKind) -> bool {
    validate(m, kind).is_empty()
}

/// Returns `Ok` for a model of the given kind, else the violations as an error.
pub fn require(m: &BiModel, kind: ModelKind) -> crate::error::Result<()> {
    let violations = validate(m, kind);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(crate::error::Error::InvalidModel {
            kind: kind.to_string(),
            violations,
        })
    }
}
