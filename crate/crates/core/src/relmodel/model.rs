use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::syntax::ProgramAtom;

use super::bits::WorldSet;
use super::relation::Relation;

/// Model classes for birelational models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Ck,
    Wk,
    Cs4,
    Ws4,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Ck => "ck",
            ModelKind::Wk => "wk",
            ModelKind::Cs4 => "cs4",
            ModelKind::Ws4 => "ws4",
        }
    }

    pub fn infallible(self) -> bool {
        matches!(self, ModelKind::Wk | ModelKind::Ws4)
    }

    pub fn s4(self) -> bool {
        matches!(self, ModelKind::Cs4 | ModelKind::Ws4)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ck" => Ok(ModelKind::Ck),
            "wk" => Ok(ModelKind::Wk),
            "cs4" => Ok(ModelKind::Cs4),
            "ws4" => Ok(ModelKind::Ws4),
            other => Err(Error::ModelFormat(format!("unknown kind `{other}`"))),
        }
    }
}

/// A finite birelational model `(W, ≼, R, ‖·‖)`.
///
/// Atoms missing from `val` are read as `‖⊥‖`, the least extension allowed by
/// atomic ex falso. In infallible models that is the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiModel {
    pub worlds: usize,
    /// The intuitionistic preorder.
    pub pre: Relation,
    /// The modal relation.
    pub modal: Relation,
    pub val: BTreeMap<String, WorldSet>,
    pub bot: WorldSet,
}

impl BiModel {
    /// `n` worlds, `≼` the identity, no modal edges, nothing true.
    pub fn new(n: usize) -> Self {
        BiModel {
            worlds: n,
            pre: Relation::identity(n),
            modal: Relation::empty(n),
            val: BTreeMap::new(),
            bot: WorldSet::new(n),
        }
    }

    pub fn set_val(&mut self, atom: &str, worlds: impl IntoIterator<Item = usize>) {
        self.val.insert(
            atom.to_string(),
            WorldSet::from_indices(self.worlds, worlds),
        );
    }

    pub fn val_of(&self, atom: &str) -> WorldSet {
        self.val.get(atom).unwrap_or(&self.bot).clone()
    }

    pub fn check_world(&self, w: usize) -> Result<()> {
        if w < self.worlds {
            Ok(())
        } else {
            Err(Error::WorldOutOfRange {
                world: w,
                worlds: self.worlds,
            })
        }
    }

    /// Makes the default extension of the given atoms explicit.
    pub fn with_atoms<S: AsRef<str>>(mut self, atoms: impl IntoIterator<Item = S>) -> Self {
        for a in atoms {
            if !self.val.contains_key(a.as_ref()) {
                let ext = self.bot.clone();
                self.val.insert(a.as_ref().to_string(), ext);
            }
        }
        self
    }

    /// Restriction to `keep`; new world `i` is old world `keep[i]`.
    pub fn restrict(&self, keep: &[usize]) -> BiModel {
        let n = keep.len();
        let project = |s: &WorldSet| {
            WorldSet::from_indices(
                n,
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &o)| s.contains(o))
                    .map(|(i, _)| i),
            )
        };
        BiModel {
            worlds: n,
            pre: self.pre.restrict(keep),
            modal: self.modal.restrict(keep),
            val: self
                .val
                .iter()
                .map(|(k, v)| (k.clone(), project(v)))
                .collect(),
            bot: project(&self.bot),
        }
    }
}

/// A finite classical PDL model `(W, ρ, ‖·‖)`. Missing atoms are false everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdlModel {
    pub worlds: usize,
    pub rho: BTreeMap<ProgramAtom, Relation>,
    pub val: BTreeMap<String, WorldSet>,
}

impl PdlModel {
    pub fn new(n: usize) -> Self {
        PdlModel {
            worlds: n,
            rho: BTreeMap::new(),
            val: BTreeMap::new(),
        }
    }

    pub fn set_val(&mut self, atom: &str, worlds: impl IntoIterator<Item = usize>) {
        self.val.insert(
            atom.to_string(),
            WorldSet::from_indices(self.worlds, worlds),
        );
    }

    pub fn val_of(&self, atom: &str) -> WorldSet {
        self.val
            .get(atom)
            .cloned()
            .unwrap_or_else(|| WorldSet::new(self.worlds))
    }

    pub fn program(&self, a: ProgramAtom) -> Result<&Relation> {
        self.rho.get(&a).ok_or(Error::UnknownProgram(a.as_char()))
    }

    pub fn check_world(&self, w: usize) -> Result<()> {
        if w < self.worlds {
            Ok(())
        } else {
            Err(Error::WorldOutOfRange {
                world: w,
                worlds: self.worlds,
            })
        }
    }
}

/// Result of [`restrict_to_infallible`].
#[derive(Clone, Debug)]
pub struct Restriction {
    pub model: BiModel,
    /// Old world index to new index; `None` for dropped (fallible) worlds.
    pub index: Vec<Option<usize>>,
}

/// Drops every world that forces falsum, restricting `≼`, `R` and the valuation.
///
/// Intended for valid CK-models; the result is infallible.
pub fn restrict_to_infallible(m: &BiModel) -> Restriction {
    let keep: Vec<usize> = (0..m.worlds).filter(|&w| !m.bot.contains(w)).collect();
    let mut index = vec![None; m.worlds];
    for (i, &w) in keep.iter().enumerate() {
        index[w] = Some(i);
    }
    Restriction {
        model: m.restrict(&keep),
        index,
    }
}
