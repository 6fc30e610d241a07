use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::relmodel::{require, AnyModel, BiModel, ModelKind, PdlModel};
use crate::semantics::{pdl_satisfies, satisfies};
use crate::syntax::{
    parse_constructive, parse_formula, parse_pdl, Formula, FragmentTag, PdlFormula, ProgramAtom,
    P_BOT,
};
use crate::translate::{ck_model_to_cs4, kappa, omega_of, pdl_model_to_wk, tau, wk_model_to_ck};

use super::eliminate::{satisfiable_with, DEFAULT_BUDGET};

/// The logics with a decision pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Logic {
    CkStar,
    WkStar,
    CkStarBox,
    Cs4,
    Ws4,
    KStar,
    Pdl,
}

impl Logic {
    pub const ALL: [Logic; 7] = [
        Logic::CkStar,
        Logic::WkStar,
        Logic::CkStarBox,
        Logic::Cs4,
        Logic::Ws4,
        Logic::KStar,
        Logic::Pdl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Logic::CkStar => "ck_star",
            Logic::WkStar => "wk_star",
            Logic::CkStarBox => "ck_star_box",
            Logic::Cs4 => "cs4",
            Logic::Ws4 => "ws4",
            Logic::KStar => "k_star",
            Logic::Pdl => "pdl",
        }
    }

    /// Whether queries are constructive formulas rather than PDL formulas.
    pub fn constructive(self) -> bool {
        !matches!(self, Logic::KStar | Logic::Pdl)
    }

    /// The fragment a query must belong to, if restricted.
    pub fn fragment(self) -> Option<FragmentTag> {
        match self {
            Logic::CkStarBox => Some(FragmentTag::LStarBox),
            Logic::Cs4 | Logic::Ws4 => Some(FragmentTag::L),
            Logic::KStar => Some(FragmentTag::LKStar),
            _ => None,
        }
    }

    /// Whether `p_bot` is part of the query language.
    fn allows_p_bot(self) -> bool {
        matches!(self, Logic::WkStar | Logic::Ws4 | Logic::KStar | Logic::Pdl)
    }

    /// Parses a query in this logic's language.
    pub fn parse(self, text: &str) -> Result<Query> {
        Ok(if !self.constructive() {
            Query::Classical(parse_pdl(text)?)
        } else if self.allows_p_bot() {
            Query::Constructive(parse_formula(text)?)
        } else {
            Query::Constructive(parse_constructive(text)?)
        })
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Logic::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown logic `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Constructive(Formula),
    Classical(PdlFormula),
}

impl From<Formula> for Query {
    fn from(f: Formula) -> Self {
        Query::Constructive(f)
    }
}

impl From<PdlFormula> for Query {
    fn from(f: PdlFormula) -> Self {
        Query::Classical(f)
    }
}

/// A certified countermodel.
#[derive(Clone, Debug)]
pub struct Countermodel {
    pub model: AnyModel,
    /// A world where the query fails.
    pub world: usize,
    /// Size of the closure of the PDL formula the solver refuted.
    pub closure_size: usize,
    /// Worlds of the model the solver extracted, before any conversion.
    pub solver_worlds: usize,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Valid,
    Invalid(Box<Countermodel>),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid(c) => Some(c),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Valid => json!({"verdict": "valid"}),
            Verdict::Invalid(c) => json!({
                "verdict": "invalid",
                "world": c.world,
                "model": c.model.to_json(),
            }),
        }
    }
}

fn certification(what: &str, detail: impl fmt::Display) -> Error {
    Error::Certification(format!("{what}: {detail}"))
}

/// A certified PDL model falsifying `f` at world 0.
struct Refutation {
    model: PdlModel,
    world: usize,
    closure_size: usize,
}

fn refute(f: &PdlFormula, programs: BTreeSet<ProgramAtom>) -> Result<Option<Refutation>> {
    let neg = PdlFormula::neg(f.clone());
    let Some(w) = satisfiable_with(&neg, &programs, DEFAULT_BUDGET)? else {
        return Ok(None);
    };
    match pdl_satisfies(&w.model, w.world, f) {
        Ok(false) => Ok(Some(Refutation {
            model: w.model,
            world: w.world,
            closure_size: w.closure_size,
        })),
        Ok(true) => Err(certification(
            "PDL model",
            "query holds at the reported world",
        )),
        Err(e) => Err(certification("PDL model", e)),
    }
}

/// Validity of a PDL formula, by refuting its negation.
pub fn pdl_valid(f: &PdlFormula) -> Result<Verdict> {
    Ok(match refute(f, f.program_atoms())? {
        None => Verdict::Valid,
        Some(r) => Verdict::Invalid(Box::new(Countermodel {
            solver_worlds: r.model.worlds,
            model: AnyModel::Pdl(r.model),
            world: r.world,
            closure_size: r.closure_size,
        })),
    })
}

/// Checks that `m` is a `kind` model where `f` fails at `w`.
fn certify(m: &BiModel, kind: ModelKind, w: usize, f: &Formula) -> Result<()> {
    require(m, kind).map_err(|e| certification(kind.name(), e))?;
    match satisfies(m, w, f) {
        Ok(false) => Ok(()),
        Ok(true) => Err(certification(
            kind.name(),
            "query holds at the reported world",
        )),
        Err(e) => Err(certification(kind.name(), e)),
    }
}

/// A birelational countermodel with solver statistics.
struct BiRefutation {
    model: BiModel,
    world: usize,
    closure_size: usize,
    solver_worlds: usize,
}

fn refute_wk(f: &Formula) -> Result<Option<BiRefutation>> {
    let programs = [ProgramAtom::I, ProgramAtom::M].into_iter().collect();
    let Some(r) = refute(&tau(f), programs)? else {
        return Ok(None);
    };
    let model = pdl_model_to_wk(&r.model)?;
    certify(&model, ModelKind::Wk, r.world, f)?;
    Ok(Some(BiRefutation {
        solver_worlds: r.model.worlds,
        model,
        world: r.world,
        closure_size: r.closure_size,
    }))
}

fn refute_ck(f: &Formula) -> Result<Option<BiRefutation>> {
    let Some(r) = refute_wk(&omega_of(f)?)? else {
        return Ok(None);
    };
    let model = wk_model_to_ck(&r.model, f)?;
    certify(&model, ModelKind::Ck, r.world, f)?;
    Ok(Some(BiRefutation { model, ..r }))
}

fn refute_s4(f: &Formula, kind: ModelKind) -> Result<Option<BiRefutation>> {
    let k = kappa(f)?;
    let r = if kind.infallible() {
        refute_wk(&k)?
    } else {
        refute_ck(&k)?
    };
    let Some(r) = r else {
        return Ok(None);
    };
    let c = ck_model_to_cs4(&r.model)?;
    let world = crate::translate::Cs4Construction::world(r.world, 0);
    certify(&c.model, kind, world, f)?;
    Ok(Some(BiRefutation {
        model: c.model,
        world,
        ..r
    }))
}

fn bi_verdict(r: Option<BiRefutation>, kind: ModelKind) -> Verdict {
    match r {
        None => Verdict::Valid,
        Some(r) => Verdict::Invalid(Box::new(Countermodel {
            model: AnyModel::Bi {
                kind,
                model: r.model,
            },
            world: r.world,
            closure_size: r.closure_size,
            solver_worlds: r.solver_worlds,
        })),
    }
}

/// Decides validity of `query` in `logic`. Every invalid verdict carries a
/// countermodel that has been re-checked with the model checker.
pub fn decide(logic: Logic, query: &Query) -> Result<Verdict> {
    match (logic.constructive(), query) {
        (true, Query::Constructive(f)) => decide_constructive(logic, f),
        (false, Query::Classical(f)) => decide_classical(logic, f),
        (true, Query::Classical(_)) => Err(Error::Unsupported {
            logic: logic.name().into(),
            what: "decide a PDL formula".into(),
        }),
        (false, Query::Constructive(_)) => Err(Error::Unsupported {
            logic: logic.name().into(),
            what: "decide a constructive formula".into(),
        }),
    }
}

/// Parses `text` in the language of `logic` and decides it.
pub fn decide_text(logic: Logic, text: &str) -> Result<Verdict> {
    decide(logic, &logic.parse(text)?)
}

fn decide_constructive(logic: Logic, f: &Formula) -> Result<Verdict> {
    if let Some(tag) = logic.fragment() {
        if !f.in_fragment(tag) {
            return Err(Error::Fragment(tag));
        }
    }
    if !logic.allows_p_bot() && f.mentions(P_BOT) {
        return Err(Error::ReservedAtom(P_BOT.into()));
    }
    Ok(match logic {
        Logic::WkStar => bi_verdict(refute_wk(f)?, ModelKind::Wk),
        // ◇-free formulas have the same countermodels in both classes
        Logic::CkStarBox => bi_verdict(refute_wk(f)?, ModelKind::Wk),
        Logic::CkStar => bi_verdict(refute_ck(f)?, ModelKind::Ck),
        Logic::Cs4 => bi_verdict(refute_s4(f, ModelKind::Cs4)?, ModelKind::Cs4),
        Logic::Ws4 => bi_verdict(refute_s4(f, ModelKind::Ws4)?, ModelKind::Ws4),
        Logic::KStar | Logic::Pdl => unreachable!("classical logics"),
    })
}

fn decide_classical(logic: Logic, f: &PdlFormula) -> Result<Verdict> {
    let programs = match logic {
        Logic::KStar => {
            if !f.in_kstar() {
                return Err(Error::Fragment(FragmentTag::LKStar));
            }
            [ProgramAtom::A].into_iter().collect()
        }
        _ => f.program_atoms(),
    };
    Ok(match refute(f, programs)? {
        None => Verdict::Valid,
        Some(r) => Verdict::Invalid(Box::new(Countermodel {
            solver_worlds: r.model.worlds,
            model: AnyModel::Pdl(r.model),
            world: r.world,
            closure_size: r.closure_size,
        })),
    })
}
