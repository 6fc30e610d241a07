//! Fischer–Ladner closure with negations tracked by sign.

use indexmap::IndexSet;

use crate::syntax::{PdlFormula, Program, ProgramAtom};

/// A closure member together with a sign. `positive == false` stands for
/// the negation of the member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub index: usize,
    pub positive: bool,
}

impl Literal {
    pub fn flip(self) -> Literal {
        Literal {
            index: self.index,
            positive: !self.positive,
        }
    }
}

/// How a member decomposes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Member {
    Atom(String),
    And(Literal, Literal),
    Or(Literal, Literal),
    /// `[a]ψ`
    BoxAtom(ProgramAtom, Literal),
    /// `[α;β]ψ`, equivalent to the member `[α][β]ψ`.
    BoxComp(usize),
    /// `[α*]ψ`: `ψ` and the unfolding `[α][α*]ψ`.
    BoxStar(Literal, usize),
}

/// The closure of a formula: every member is a formula without a leading
/// negation, listed in discovery order.
#[derive(Clone, Debug)]
pub struct ClosureSet {
    formulas: IndexSet<PdlFormula>,
    members: Vec<Member>,
    root: Literal,
}

/// Strips leading negations, returning the positive form and the parity.
fn strip(f: &PdlFormula) -> (&PdlFormula, bool) {
    let mut f = f;
    let mut positive = true;
    while let PdlFormula::Neg(g) = f {
        f = g;
        positive = !positive;
    }
    (f, positive)
}

pub fn fl_closure(f: &PdlFormula) -> ClosureSet {
    let mut c = ClosureSet {
        formulas: IndexSet::new(),
        members: Vec::new(),
        root: Literal {
            index: 0,
            positive: true,
        },
    };
    c.root = c.add(f);
    c
}

impl ClosureSet {
    fn add(&mut self, f: &PdlFormula) -> Literal {
        let (g, positive) = strip(f);
        if let Some(index) = self.formulas.get_index_of(g) {
            return Literal { index, positive };
        }
        let (index, _) = self.formulas.insert_full(g.clone());
        // placeholder until the children are known; cycles through `[α*]` only
        // ever point back at already-inserted members
        self.members.push(Member::Atom(String::new()));
        let member = match g {
            PdlFormula::Atom(p) => Member::Atom(p.clone()),
            PdlFormula::And(l, r) => {
                let l = self.add(l);
                Member::And(l, self.add(r))
            }
            PdlFormula::Or(l, r) => {
                let l = self.add(l);
                Member::Or(l, self.add(r))
            }
            PdlFormula::BoxP(p, body) => match &**p {
                Program::Atom(a) => Member::BoxAtom(*a, self.add(body)),
                Program::Comp(a, b) => {
                    let inner = PdlFormula::BoxP(b.clone(), body.clone());
                    let lit = self.add(&PdlFormula::BoxP(a.clone(), Box::new(inner)));
                    Member::BoxComp(lit.index)
                }
                Program::Star(a) => {
                    let b = self.add(body);
                    let unfold = PdlFormula::BoxP(a.clone(), Box::new(g.clone()));
                    Member::BoxStar(b, self.add(&unfold).index)
                }
            },
            PdlFormula::Neg(_) => unreachable!("stripped"),
        };
        self.members[index] = member;
        Literal { index, positive }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn formulas(&self) -> impl Iterator<Item = &PdlFormula> {
        self.formulas.iter()
    }

    pub fn formula(&self, i: usize) -> &PdlFormula {
        &self.formulas[i]
    }

    pub fn member(&self, i: usize) -> &Member {
        &self.members[i]
    }

    pub fn index_of(&self, f: &PdlFormula) -> Option<usize> {
        self.formulas.get_index_of(f)
    }

    pub fn contains(&self, f: &PdlFormula) -> bool {
        self.formulas.contains(f)
    }

    /// The literal of the formula the closure was built from.
    pub fn root(&self) -> Literal {
        self.root
    }

    /// The program of a box member.
    pub fn program(&self, i: usize) -> Option<&Program> {
        match &self.formulas[i] {
            PdlFormula::BoxP(p, _) => Some(p),
            _ => None,
        }
    }

    /// The body literal of a box member `[α]ψ`.
    pub fn body(&self, i: usize) -> Option<Literal> {
        match &self.formulas[i] {
            PdlFormula::BoxP(_, body) => {
                let (g, positive) = strip(body);
                self.index_of(g).map(|index| Literal { index, positive })
            }
            _ => None,
        }
    }
}
