//! Satisfaction for constructive formulas over birelational models and for PDL
//! formulas over classical models.
//!
//! Both evaluators work bottom-up on extension sets: the extension of a
//! formula is computed from the extensions of its children with a handful of
//! relation operations, never world by world.

use std::cell::OnceCell;
use std::collections::HashMap;

use crate::error::Result;
use crate::relmodel::{require, BiModel, ModelKind, PdlModel, Relation, WorldSet};
use crate::syntax::{Formula, PdlFormula, Program};

/// Which clause to use for `[*]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxStarClause {
    /// Quantify over `(≼;R)*`-successors.
    Standard,
    /// Quantify over `(≼;R*)*`-successors. Equivalent on CK-models.
    Alternative,
}

/// Extension-set evaluator for one birelational model. Derived relations are
/// computed on first use and reused across formulas.
pub struct Evaluator<'m> {
    model: &'m BiModel,
    clause: BoxStarClause,
    pre_mod: OnceCell<Relation>,
    pre_mod_star: OnceCell<Relation>,
    pre_modstar_star: OnceCell<Relation>,
    mod_star: OnceCell<Relation>,
}

impl<'m> Evaluator<'m> {
    /// No validation; callers vouch that `model` is a CK-model.
    pub fn new(model: &'m BiModel) -> Self {
        Self::with_clause(model, BoxStarClause::Standard)
    }

    pub fn with_clause(model: &'m BiModel, clause: BoxStarClause) -> Self {
        Evaluator {
            model,
            clause,
            pre_mod: OnceCell::new(),
            pre_mod_star: OnceCell::new(),
            pre_modstar_star: OnceCell::new(),
            mod_star: OnceCell::new(),
        }
    }

    pub fn model(&self) -> &BiModel {
        self.model
    }

    fn pre_mod(&self) -> &Relation {
        self.pre_mod.get_or_init(|| {
            self.model
                .pre
                .compose(&self.model.modal)
                .expect("same world count")
        })
    }

    fn mod_star(&self) -> &Relation {
        self.mod_star.get_or_init(|| self.model.modal.star())
    }

    fn box_star_relation(&self) -> &Relation {
        match self.clause {
            BoxStarClause::Standard => self.pre_mod_star.get_or_init(|| self.pre_mod().star()),
            BoxStarClause::Alternative => self.pre_modstar_star.get_or_init(|| {
                self.model
                    .pre
                    .compose(self.mod_star())
                    .expect("same world count")
                    .star()
            }),
        }
    }

    /// `‖f‖`
    pub fn extension(&self, f: &Formula) -> WorldSet {
        let m = self.model;
        match f {
            Formula::Bot => m.bot.clone(),
            Formula::Atom(p) => m.val_of(p),
            Formula::And(l, r) => self.extension(l).intersection(&self.extension(r)),
            Formula::Or(l, r) => self.extension(l).union(&self.extension(r)),
            Formula::Imp(l, r) => {
                let ok = self.extension(l).complement().union(&self.extension(r));
                m.pre.box_of(&ok)
            }
            Formula::Box(g) => self.pre_mod().box_of(&self.extension(g)),
            Formula::Dia(g) => m.pre.box_of(&m.modal.dia_of(&self.extension(g))),
            Formula::BoxStar(g) => self.box_star_relation().box_of(&self.extension(g)),
            // a single ≼ step followed by R*, as in the clause
            Formula::DiaStar(g) => m.pre.box_of(&self.mod_star().dia_of(&self.extension(g))),
        }
    }

    pub fn holds(&self, w: usize, f: &Formula) -> bool {
        self.extension(f).contains(w)
    }
}

/// `(m, w) ⊩ f`
pub fn satisfies(m: &BiModel, w: usize, f: &Formula) -> Result<bool> {
    require(m, ModelKind::Ck)?;
    m.check_world(w)?;
    Ok(Evaluator::new(m).holds(w, f))
}

/// [`satisfies`] with the `(≼;R*)*` clause for `[*]`.
pub fn satisfies_alt(m: &BiModel, w: usize, f: &Formula) -> Result<bool> {
    require(m, ModelKind::Ck)?;
    m.check_world(w)?;
    Ok(Evaluator::with_clause(m, BoxStarClause::Alternative).holds(w, f))
}

pub fn valid_in_model(m: &BiModel, f: &Formula) -> Result<bool> {
    Ok(falsifying_world(m, f)?.is_none())
}

/// The least world where `f` fails, if any.
pub fn falsifying_world(m: &BiModel, f: &Formula) -> Result<Option<usize>> {
    require(m, ModelKind::Ck)?;
    Ok(Evaluator::new(m).extension(f).complement().first())
}

/// Evaluator for classical PDL models; compound program relations are memoized.
pub struct PdlEvaluator<'m> {
    model: &'m PdlModel,
    programs: std::cell::RefCell<HashMap<Program, Relation>>,
}

impl<'m> PdlEvaluator<'m> {
    pub fn new(model: &'m PdlModel) -> Self {
        PdlEvaluator {
            model,
            programs: Default::default(),
        }
    }

    pub fn relation(&self, p: &Program) -> Result<Relation> {
        if let Some(r) = self.programs.borrow().get(p) {
            return Ok(r.clone());
        }
        let r = match p {
            Program::Atom(a) => self.model.program(*a)?.clone(),
            Program::Comp(l, r) => self.relation(l)?.compose(&self.relation(r)?)?,
            Program::Star(q) => self.relation(q)?.star(),
        };
        self.programs.borrow_mut().insert(p.clone(), r.clone());
        Ok(r)
    }

    pub fn extension(&self, f: &PdlFormula) -> Result<WorldSet> {
        Ok(match f {
            PdlFormula::Atom(p) => self.model.val_of(p),
            PdlFormula::Neg(g) => self.extension(g)?.complement(),
            PdlFormula::And(l, r) => self.extension(l)?.intersection(&self.extension(r)?),
            PdlFormula::Or(l, r) => self.extension(l)?.union(&self.extension(r)?),
            PdlFormula::BoxP(p, g) => self.relation(p)?.box_of(&self.extension(g)?),
        })
    }
}

pub fn pdl_satisfies(m: &PdlModel, w: usize, f: &PdlFormula) -> Result<bool> {
    m.check_world(w)?;
    Ok(PdlEvaluator::new(m).extension(f)?.contains(w))
}

pub fn pdl_falsifying_world(m: &PdlModel, f: &PdlFormula) -> Result<Option<usize>> {
    Ok(PdlEvaluator::new(m).extension(f)?.complement().first())
}

pub fn pdl_valid_in_model(m: &PdlModel, f: &PdlFormula) -> Result<bool> {
    Ok(pdl_falsifying_world(m, f)?.is_none())
}
