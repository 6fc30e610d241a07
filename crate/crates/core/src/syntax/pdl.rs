use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexSet;

use crate::error::{Error, Result};

use super::FragmentTag;

/// Atomic programs: `i` (intuitionistic), `m` (modal), `a` (the single K* program).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProgramAtom {
    I,
    M,
    A,
}

impl ProgramAtom {
    pub const ALL: [ProgramAtom; 3] = [ProgramAtom::I, ProgramAtom::M, ProgramAtom::A];

    pub fn as_char(self) -> char {
        match self {
            ProgramAtom::I => 'i',
            ProgramAtom::M => 'm',
            ProgramAtom::A => 'a',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'i' => Some(ProgramAtom::I),
            'm' => Some(ProgramAtom::M),
            'a' => Some(ProgramAtom::A),
            _ => None,
        }
    }
}

impl fmt::Display for ProgramAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Test-free regular programs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Program {
    Atom(ProgramAtom),
    Comp(Box<Program>, Box<Program>),
    Star(Box<Program>),
}

impl Program {
    pub fn comp(l: Program, r: Program) -> Self {
        Program::Comp(Box::new(l), Box::new(r))
    }

    pub fn star(p: Program) -> Self {
        Program::Star(Box::new(p))
    }

    pub fn size(&self) -> usize {
        match self {
            Program::Atom(_) => 1,
            Program::Comp(l, r) => 1 + l.size() + r.size(),
            Program::Star(p) => 1 + p.size(),
        }
    }

    pub fn atoms(&self, out: &mut BTreeSet<ProgramAtom>) {
        match self {
            Program::Atom(a) => {
                out.insert(*a);
            }
            Program::Comp(l, r) => {
                l.atoms(out);
                r.atoms(out);
            }
            Program::Star(p) => p.atoms(out),
        }
    }
}

/// A classical PDL formula. `<α>φ` is sugar for `!([α]!φ)` and never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PdlFormula {
    Atom(String),
    Neg(Box<PdlFormula>),
    And(Box<PdlFormula>, Box<PdlFormula>),
    Or(Box<PdlFormula>, Box<PdlFormula>),
    BoxP(Box<Program>, Box<PdlFormula>),
}

impl PdlFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        PdlFormula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: PdlFormula) -> Self {
        PdlFormula::Neg(Box::new(f))
    }

    pub fn and(l: PdlFormula, r: PdlFormula) -> Self {
        PdlFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: PdlFormula, r: PdlFormula) -> Self {
        PdlFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn boxed(p: Program, f: PdlFormula) -> Self {
        PdlFormula::BoxP(Box::new(p), Box::new(f))
    }

    /// `<p>f`, expanded to `![p]!f`.
    pub fn dia(p: Program, f: PdlFormula) -> Self {
        PdlFormula::neg(PdlFormula::boxed(p, PdlFormula::neg(f)))
    }

    /// `!l | r`
    pub fn implies(l: PdlFormula, r: PdlFormula) -> Self {
        PdlFormula::or(PdlFormula::neg(l), r)
    }

    pub fn children(&self) -> Vec<&PdlFormula> {
        match self {
            PdlFormula::Atom(_) => vec![],
            PdlFormula::Neg(f) | PdlFormula::BoxP(_, f) => vec![f],
            PdlFormula::And(l, r) | PdlFormula::Or(l, r) => vec![l, r],
        }
    }

    /// Number of AST nodes; a box counts one plus its program's nodes.
    pub fn size(&self) -> usize {
        match self {
            PdlFormula::Atom(_) => 1,
            PdlFormula::Neg(f) => 1 + f.size(),
            PdlFormula::And(l, r) | PdlFormula::Or(l, r) => 1 + l.size() + r.size(),
            PdlFormula::BoxP(p, f) => 1 + p.size() + f.size(),
        }
    }

    pub fn subformulas(&self) -> IndexSet<PdlFormula> {
        fn walk(f: &PdlFormula, out: &mut IndexSet<PdlFormula>) {
            for c in f.children() {
                walk(c, out);
            }
            out.insert(f.clone());
        }
        let mut out = IndexSet::new();
        walk(self, &mut out);
        out
    }

    pub fn variables(&self) -> BTreeSet<String> {
        fn walk(f: &PdlFormula, out: &mut BTreeSet<String>) {
            if let PdlFormula::Atom(p) = f {
                out.insert(p.clone());
            }
            for c in f.children() {
                walk(c, out);
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    pub fn program_atoms(&self) -> BTreeSet<ProgramAtom> {
        fn walk(f: &PdlFormula, out: &mut BTreeSet<ProgramAtom>) {
            if let PdlFormula::BoxP(p, _) = f {
                p.atoms(out);
            }
            for c in f.children() {
                walk(c, out);
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }
}

/// Normalization point before translating a K* formula into the constructive
/// language. Diamonds are already expanded by construction, so this only
/// enforces the fragment.
pub fn expand_diamonds(f: &PdlFormula) -> Result<PdlFormula> {
    if !f.in_kstar() {
        return Err(Error::Fragment(FragmentTag::LKStar));
    }
    Ok(f.clone())
}
