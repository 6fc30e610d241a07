//! Model constructions that transport countermodels between the logics.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::relmodel::{require, BiModel, ModelKind, PdlModel, Relation, WorldSet};
use crate::semantics::Evaluator;
use crate::syntax::{Formula, PdlFormula, ProgramAtom, P_BOT};

use super::formulas::{excluded_middle, TranslationEnv};

/// Interprets `p_bot` as falsum and makes the model infallible.
///
/// Only atoms present in `m.val` carry over; an atom that is missing falls
/// back to `‖⊥‖` in `m` but to the empty set in the result. Call
/// [`BiModel::with_atoms`] first to pin the atoms of interest.
pub fn ck_model_to_wk(m: &BiModel) -> Result<BiModel> {
    require(m, ModelKind::Ck)?;
    let mut out = m.clone();
    out.val.insert(P_BOT.to_string(), m.bot.clone());
    out.bot = WorldSet::new(m.worlds);
    Ok(out)
}

/// Reads `‖ω(⊥)‖` as falsum; atoms outside `Var(f)` become falsum too.
pub fn wk_model_to_ck(m: &BiModel, f: &Formula) -> Result<BiModel> {
    require(m, ModelKind::Wk)?;
    if f.mentions(P_BOT) {
        return Err(Error::ReservedAtom(P_BOT.to_string()));
    }
    let vars = f.variables();
    let falsum = Evaluator::new(m).extension(&TranslationEnv::for_formula(f).falsum());
    let mut val = BTreeMap::new();
    for p in &vars {
        val.insert(p.clone(), m.val_of(p));
    }
    for p in m.val.keys() {
        if !vars.contains(p) {
            val.insert(p.clone(), falsum.clone());
        }
    }
    Ok(BiModel {
        worlds: m.worlds,
        pre: m.pre.clone(),
        modal: m.modal.clone(),
        val,
        bot: falsum,
    })
}

/// `ρ(i) = ≼`, `ρ(m) = R`.
pub fn wk_model_to_pdl(m: &BiModel) -> Result<PdlModel> {
    require(m, ModelKind::Wk)?;
    let mut out = PdlModel::new(m.worlds);
    out.rho.insert(ProgramAtom::I, m.pre.clone());
    out.rho.insert(ProgramAtom::M, m.modal.clone());
    out.val = m.val.clone();
    Ok(out)
}

/// `≼ = ρ(i)*`, `R = ρ(m)`, and each atom reinterpreted as `[i*]p`.
pub fn pdl_model_to_wk(m: &PdlModel) -> Result<BiModel> {
    let pre = m.program(ProgramAtom::I)?.star();
    let modal = m.program(ProgramAtom::M)?.clone();
    let val = m
        .val
        .iter()
        .map(|(p, ext)| (p.clone(), pre.box_of(ext)))
        .collect();
    Ok(BiModel {
        worlds: m.worlds,
        pre,
        modal,
        val,
        bot: WorldSet::new(m.worlds),
    })
}

/// A classical K model as an infallible birelational model with `≼ = Id`.
pub fn k_model_to_ck(m: &PdlModel) -> Result<BiModel> {
    Ok(BiModel {
        worlds: m.worlds,
        pre: Relation::identity(m.worlds),
        modal: m.program(ProgramAtom::A)?.clone(),
        val: m.val.clone(),
        bot: WorldSet::new(m.worlds),
    })
}

/// Output of [`wk_generated_classical`].
#[derive(Clone, Debug)]
pub struct GeneratedClassical {
    /// The submodel generated by `u`, renumbered.
    pub sub: BiModel,
    /// `(≼;R)` on the same worlds as `sub`, as the program `a`.
    pub classical: PdlModel,
    /// Worlds where excluded middle holds hereditarily for every subformula, in
    /// the numbering of the input model.
    pub u: WorldSet,
    /// `worlds[i]` is the input world behind world `i` of `sub` and `classical`.
    pub worlds: Vec<usize>,
}

/// Restricts `m` to the worlds generated by `U_f` and flattens it into a
/// classical model over `(≼;R)`.
pub fn wk_generated_classical(m: &BiModel, f: &PdlFormula) -> Result<GeneratedClassical> {
    require(m, ModelKind::Wk)?;
    super::formulas::kstar_to_constructive(f)?;
    let u = Evaluator::new(m).extension(&Formula::box_star(excluded_middle(f)));
    let step = m.pre.union(&m.modal)?;
    let worlds: Vec<usize> = step.reach(&u).iter().collect();
    let sub = m.restrict(&worlds);
    let mut classical = PdlModel::new(sub.worlds);
    classical
        .rho
        .insert(ProgramAtom::A, sub.pre.compose(&sub.modal)?);
    classical.val = sub.val.clone();
    Ok(GeneratedClassical {
        sub,
        classical,
        u,
        worlds,
    })
}

/// Output of [`ck_model_to_cs4`].
#[derive(Clone, Debug)]
pub struct Cs4Construction {
    pub model: BiModel,
    /// `pi[k] = (w, i)` for world `k` of `model`.
    pub pi: Vec<(usize, usize)>,
}

impl Cs4Construction {
    /// Index of the copy `(w, i)`.
    pub fn world(w: usize, i: usize) -> usize {
        2 * w + i
    }
}

/// Doubles every world: copy 0 keeps `R*`, copy 1 sees all of `(≼;R*)*`.
pub fn ck_model_to_cs4(m: &BiModel) -> Result<Cs4Construction> {
    require(m, ModelKind::Ck)?;
    let n = m.worlds;
    let r_star = m.modal.star();
    let wide = m.pre.compose(&r_star)?.star();
    let pi: Vec<(usize, usize)> = (0..2 * n).map(|k| (k / 2, k % 2)).collect();
    let lift =
        |s: &WorldSet| WorldSet::from_indices(2 * n, (0..2 * n).filter(|k| s.contains(k / 2)));
    let mut pre = Relation::empty(2 * n);
    let mut modal = Relation::empty(2 * n);
    for (a, &(w, i)) in pi.iter().enumerate() {
        for (b, &(v, j)) in pi.iter().enumerate() {
            if m.pre.contains(w, v) {
                pre.insert(a, b);
            }
            if (i == 0 && j == 0 && r_star.contains(w, v)) || (i == 1 && wide.contains(w, v)) {
                modal.insert(a, b);
            }
        }
    }
    let model = BiModel {
        worlds: 2 * n,
        pre,
        modal,
        val: m.val.iter().map(|(p, s)| (p.clone(), lift(s))).collect(),
        bot: lift(&m.bot),
    };
    Ok(Cs4Construction { model, pi })
}
