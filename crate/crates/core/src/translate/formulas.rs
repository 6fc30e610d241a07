use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::syntax::{Formula, FragmentTag, PdlFormula, Program, ProgramAtom, P_BOT};

/// The atom set `P` that `ω` conjoins in place of falsum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationEnv {
    /// Sorted, with `p_bot` last.
    atoms: Vec<String>,
}

impl TranslationEnv {
    /// `P = atoms ∪ {p_bot}`.
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = S>) -> Self {
        let set: BTreeSet<String> = atoms
            .into_iter()
            .map(Into::into)
            .filter(|a| a != P_BOT)
            .collect();
        let mut atoms: Vec<String> = set.into_iter().collect();
        atoms.push(P_BOT.to_string());
        TranslationEnv { atoms }
    }

    /// `P(f) = Var(f) ∪ {p_bot}`.
    pub fn for_formula(f: &Formula) -> Self {
        Self::new(f.variables())
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// `ω_P(⊥) = [*](⋀P & <>p_bot)`
    pub fn falsum(&self) -> Formula {
        let conj = Formula::conj(self.atoms.iter().map(Formula::atom)).expect("P is never empty");
        Formula::box_star(Formula::and(conj, Formula::dia(Formula::atom(P_BOT))))
    }
}

fn reject_p_bot(f: &Formula) -> Result<()> {
    if f.mentions(P_BOT) {
        Err(Error::ReservedAtom(P_BOT.to_string()))
    } else {
        Ok(())
    }
}

/// Replaces every falsum leaf by `env.falsum()`.
pub fn omega(f: &Formula, env: &TranslationEnv) -> Result<Formula> {
    reject_p_bot(f)?;
    let bot = env.falsum();
    Ok(f.map_bottom_up(&mut |g| match g {
        Formula::Bot => bot.clone(),
        other => other,
    }))
}

/// `ω(f)`, i.e. `ω_P` with `P = P(f)`.
pub fn omega_of(f: &Formula) -> Result<Formula> {
    omega(f, &TranslationEnv::for_formula(f))
}

fn atom_program(a: ProgramAtom) -> Program {
    Program::Atom(a)
}

fn i_star() -> Program {
    Program::star(atom_program(ProgramAtom::I))
}

/// The translation into PDL over the programs `i` and `m`.
pub fn tau(f: &Formula) -> PdlFormula {
    let m = || atom_program(ProgramAtom::M);
    match f {
        Formula::Bot => {
            let p = PdlFormula::atom(P_BOT);
            PdlFormula::and(p.clone(), PdlFormula::neg(p))
        }
        Formula::Atom(p) => PdlFormula::boxed(i_star(), PdlFormula::atom(p.clone())),
        Formula::And(l, r) => PdlFormula::and(tau(l), tau(r)),
        Formula::Or(l, r) => PdlFormula::or(tau(l), tau(r)),
        Formula::Imp(l, r) => {
            PdlFormula::boxed(i_star(), PdlFormula::or(PdlFormula::neg(tau(l)), tau(r)))
        }
        Formula::Box(g) => PdlFormula::boxed(Program::comp(i_star(), m()), tau(g)),
        Formula::BoxStar(g) => {
            PdlFormula::boxed(Program::star(Program::comp(i_star(), m())), tau(g))
        }
        Formula::Dia(g) => PdlFormula::boxed(i_star(), PdlFormula::dia(m(), tau(g))),
        Formula::DiaStar(g) => {
            PdlFormula::boxed(i_star(), PdlFormula::dia(Program::star(m()), tau(g)))
        }
    }
}

/// Reads a K* formula as a box-only constructive formula: `[a]` as `[]`,
/// `[a*]` as `[*]` and `!ψ` as `ψ -> false`.
pub fn kstar_to_constructive(f: &PdlFormula) -> Result<Formula> {
    if !f.in_kstar() {
        return Err(Error::Fragment(FragmentTag::LKStar));
    }
    Ok(kstar_rec(f))
}

fn kstar_rec(f: &PdlFormula) -> Formula {
    match f {
        PdlFormula::Atom(p) => Formula::atom(p.clone()),
        PdlFormula::Neg(g) => Formula::neg(kstar_rec(g)),
        PdlFormula::And(l, r) => Formula::and(kstar_rec(l), kstar_rec(r)),
        PdlFormula::Or(l, r) => Formula::or(kstar_rec(l), kstar_rec(r)),
        PdlFormula::BoxP(p, g) => match **p {
            Program::Star(_) => Formula::box_star(kstar_rec(g)),
            _ => Formula::boxed(kstar_rec(g)),
        },
    }
}

/// `⋀{ψ | !ψ}` over the subformulas of `f`, in post-order, already read constructively.
pub(crate) fn excluded_middle(f: &PdlFormula) -> Formula {
    Formula::conj(f.subformulas().iter().map(|g| {
        let c = kstar_rec(g);
        Formula::or(c.clone(), Formula::neg(c))
    }))
    .expect("a formula is its own subformula")
}

/// `[*]⋀{ψ | !ψ : ψ ∈ Subf(f)} -> f`, read constructively.
pub fn iota(f: &PdlFormula) -> Result<Formula> {
    let body = kstar_to_constructive(f)?;
    if f.variables().contains(P_BOT) {
        return Err(Error::ReservedAtom(P_BOT.to_string()));
    }
    Ok(Formula::imp(Formula::box_star(excluded_middle(f)), body))
}

/// Replaces `[]` by `[*]` and `<>` by `<*>`.
pub fn kappa(f: &Formula) -> Result<Formula> {
    if !f.in_fragment(FragmentTag::L) {
        return Err(Error::Fragment(FragmentTag::L));
    }
    Ok(f.map_bottom_up(&mut |g| match g {
        Formula::Box(x) => Formula::BoxStar(x),
        Formula::Dia(x) => Formula::DiaStar(x),
        other => other,
    }))
}
