use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexSet;

use super::pdl::{PdlFormula, Program, ProgramAtom};

/// The atom reserved for encoding falsum in the infallible language.
pub const P_BOT: &str = "p_bot";

/// A formula of the constructive language with master modalities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bot,
    Atom(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Dia(Box<Formula>),
    BoxStar(Box<Formula>),
    DiaStar(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Self {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    /// `f -> false`
    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Self {
        Formula::imp(f, Formula::Bot)
    }

    pub fn boxed(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    pub fn dia(f: Formula) -> Self {
        Formula::Dia(Box::new(f))
    }

    pub fn box_star(f: Formula) -> Self {
        Formula::BoxStar(Box::new(f))
    }

    pub fn dia_star(f: Formula) -> Self {
        Formula::DiaStar(Box::new(f))
    }

    /// Right-nested conjunction; `None` for an empty input.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        let mut items: Vec<_> = items.into_iter().collect();
        let mut acc = items.pop()?;
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        Some(acc)
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Bot | Formula::Atom(_) => vec![],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => vec![l, r],
            Formula::Box(f) | Formula::Dia(f) | Formula::BoxStar(f) | Formula::DiaStar(f) => {
                vec![f]
            }
        }
    }

    /// Applies `g` bottom-up to every node.
    pub fn map_bottom_up(&self, g: &mut impl FnMut(Formula) -> Formula) -> Formula {
        let rebuilt = match self {
            Formula::Bot | Formula::Atom(_) => self.clone(),
            Formula::And(l, r) => Formula::and(l.map_bottom_up(g), r.map_bottom_up(g)),
            Formula::Or(l, r) => Formula::or(l.map_bottom_up(g), r.map_bottom_up(g)),
            Formula::Imp(l, r) => Formula::imp(l.map_bottom_up(g), r.map_bottom_up(g)),
            Formula::Box(f) => Formula::boxed(f.map_bottom_up(g)),
            Formula::Dia(f) => Formula::dia(f.map_bottom_up(g)),
            Formula::BoxStar(f) => Formula::box_star(f.map_bottom_up(g)),
            Formula::DiaStar(f) => Formula::dia_star(f.map_bottom_up(g)),
        };
        g(rebuilt)
    }

    /// Subformulas in post-order of first occurrence, `self` last.
    pub fn subformulas(&self) -> IndexSet<Formula> {
        fn walk(f: &Formula, out: &mut IndexSet<Formula>) {
            for c in f.children() {
                walk(c, out);
            }
            out.insert(f.clone());
        }
        let mut out = IndexSet::new();
        walk(self, &mut out);
        out
    }

    /// Atom names, sorted.
    pub fn variables(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, out: &mut BTreeSet<String>) {
            if let Formula::Atom(p) = f {
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

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    pub fn in_fragment(&self, tag: FragmentTag) -> bool {
        let ok = match (tag, self) {
            (FragmentTag::LKStar, _) => return false,
            (FragmentTag::LStarBox, Formula::Dia(_) | Formula::DiaStar(_)) => false,
            (FragmentTag::L, Formula::BoxStar(_) | Formula::DiaStar(_)) => false,
            _ => true,
        };
        ok && self.children().into_iter().all(|c| c.in_fragment(tag))
    }

    pub fn mentions(&self, atom: &str) -> bool {
        match self {
            Formula::Atom(p) => p == atom,
            _ => self.children().into_iter().any(|c| c.mentions(atom)),
        }
    }
}

/// Named syntactic fragments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FragmentTag {
    /// The full constructive language.
    LStar,
    /// No `<>` and no `<*>`.
    LStarBox,
    /// No master modalities.
    L,
    /// Classical formulas over the single program `a` and `a*`.
    LKStar,
}

impl fmt::Display for FragmentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FragmentTag::LStar => "L*",
            FragmentTag::LStarBox => "L*[]",
            FragmentTag::L => "L",
            FragmentTag::LKStar => "K*",
        })
    }
}

/// Either language, for the operations defined on both.
#[derive(Clone, Copy, Debug)]
pub enum AnyFormula<'a> {
    Constructive(&'a Formula),
    Classical(&'a PdlFormula),
}

impl<'a> From<&'a Formula> for AnyFormula<'a> {
    fn from(f: &'a Formula) -> Self {
        AnyFormula::Constructive(f)
    }
}

impl<'a> From<&'a PdlFormula> for AnyFormula<'a> {
    fn from(f: &'a PdlFormula) -> Self {
        AnyFormula::Classical(f)
    }
}

pub fn formula_size<'a>(f: impl Into<AnyFormula<'a>>) -> usize {
    match f.into() {
        AnyFormula::Constructive(f) => f.size(),
        AnyFormula::Classical(f) => f.size(),
    }
}

pub fn check_fragment<'a>(f: impl Into<AnyFormula<'a>>, tag: FragmentTag) -> bool {
    match f.into() {
        AnyFormula::Constructive(f) => f.in_fragment(tag),
        AnyFormula::Classical(f) => tag == FragmentTag::LKStar && f.in_kstar(),
    }
}

impl PdlFormula {
    /// Whether every program is `a` or `a*`.
    pub fn in_kstar(&self) -> bool {
        match self {
            PdlFormula::Atom(_) => true,
            PdlFormula::Neg(f) => f.in_kstar(),
            PdlFormula::And(l, r) | PdlFormula::Or(l, r) => l.in_kstar() && r.in_kstar(),
            PdlFormula::BoxP(p, f) => {
                let a = Program::Atom(ProgramAtom::A);
                (**p == a || **p == Program::star(a)) && f.in_kstar()
            }
        }
    }
}
