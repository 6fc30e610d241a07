//! Types as sign assignments to closure members.
//!
//! A type fixes the sign of the members it mentions and is closed under the
//! local rules: conjunctions and disjunctions are decomposed, `[α;β]ψ` agrees
//! with `[α][β]ψ`, and `[α*]ψ` is positive exactly when `ψ` and `[α][α*]ψ`
//! are. Members a type leaves open are irrelevant at that world. Only types
//! reachable from the query are generated: the successors of a type for a
//! negative `[a]ψ` are the saturations of `{χ | [a]χ positive} ∪ {!ψ}`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::relmodel::BitSet;
use crate::syntax::ProgramAtom;

use super::closure::{ClosureSet, Literal, Member};

/// A locally consistent, saturated sign assignment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PdlType {
    pub pos: BitSet,
    pub neg: BitSet,
}

impl PdlType {
    fn empty(k: usize) -> Self {
        PdlType {
            pos: BitSet::new(k),
            neg: BitSet::new(k),
        }
    }

    pub fn has(&self, l: Literal) -> bool {
        if l.positive {
            self.pos.contains(l.index)
        } else {
            self.neg.contains(l.index)
        }
    }

    fn insert(&mut self, l: Literal) {
        if l.positive {
            self.pos.insert(l.index);
        } else {
            self.neg.insert(l.index);
        }
    }
}

/// All saturations of a set of literals.
fn saturate(c: &ClosureSet, seed: &PdlType, out: &mut Vec<PdlType>) {
    let mut agenda: Vec<Literal> = seed
        .pos
        .iter()
        .map(|index| Literal {
            index,
            positive: true,
        })
        .chain(seed.neg.iter().map(|index| Literal {
            index,
            positive: false,
        }))
        .collect();
    // re-add every seed literal so its consequences are derived
    let start = PdlType::empty(c.len());
    agenda.reverse();
    extend(c, start, agenda, out);
}

fn extend(c: &ClosureSet, mut t: PdlType, mut agenda: Vec<Literal>, out: &mut Vec<PdlType>) {
    while let Some(l) = agenda.pop() {
        if t.has(l) {
            continue;
        }
        if t.has(l.flip()) {
            return;
        }
        t.insert(l);
        let branch = match (c.member(l.index), l.positive) {
            (Member::Atom(_), _) | (Member::BoxAtom(..), _) => None,
            (Member::And(a, b), true) | (Member::Or(a, b), false) => {
                let (a, b) = if l.positive {
                    (*a, *b)
                } else {
                    (a.flip(), b.flip())
                };
                agenda.push(b);
                agenda.push(a);
                None
            }
            (Member::And(a, b), false) => Some((a.flip(), b.flip())),
            (Member::Or(a, b), true) => Some((*a, *b)),
            (Member::BoxComp(eq), _) => {
                agenda.push(Literal {
                    index: *eq,
                    positive: l.positive,
                });
                None
            }
            (Member::BoxStar(body, unfold), true) => {
                agenda.push(Literal {
                    index: *unfold,
                    positive: true,
                });
                agenda.push(*body);
                None
            }
            (Member::BoxStar(body, unfold), false) => Some((
                body.flip(),
                Literal {
                    index: *unfold,
                    positive: false,
                },
            )),
        };
        if let Some((x, y)) = branch {
            let mut left = agenda.clone();
            left.push(x);
            extend(c, t.clone(), left, out);
            agenda.push(y);
        }
    }
    out.push(t);
}

/// Every type reachable from the query, with the data elimination needs.
pub struct TypeGraph<'c> {
    pub closure: &'c ClosureSet,
    pub types: Vec<PdlType>,
    /// Types that contain the query literal.
    pub roots: Vec<usize>,
    /// Per atomic program, `req[a][t]` is the set of bodies `χ` with `[a]χ ∈ t`.
    requirements: HashMap<ProgramAtom, Vec<BitSet>>,
}

/// Literal sets, keyed for deduplication.
fn key_of(t: &PdlType) -> (BitSet, BitSet) {
    (t.pos.clone(), t.neg.clone())
}

impl<'c> TypeGraph<'c> {
    /// Generates the reachable types, failing once more than `budget` exist.
    pub fn build(closure: &'c ClosureSet, budget: usize) -> Result<Self> {
        let k = closure.len();
        let mut types: Vec<PdlType> = Vec::new();
        let mut ids: HashMap<(BitSet, BitSet), usize> = HashMap::new();
        let mut seen_seeds: HashMap<(BitSet, BitSet), ()> = HashMap::new();

        let mut intern = |t: PdlType, types: &mut Vec<PdlType>| -> Result<usize> {
            let key = key_of(&t);
            if let Some(&id) = ids.get(&key) {
                return Ok(id);
            }
            if types.len() >= budget {
                return Err(Error::Budget(format!(
                    "more than {budget} types over a closure of {k} formulas"
                )));
            }
            let id = types.len();
            ids.insert(key, id);
            types.push(t);
            Ok(id)
        };

        let mut seed = PdlType::empty(k);
        seed.insert(closure.root());
        let mut fresh = Vec::new();
        saturate(closure, &seed, &mut fresh);
        let mut roots = Vec::new();
        for t in fresh {
            roots.push(intern(t, &mut types)?);
        }
        roots.sort_unstable();
        roots.dedup();

        let boxes: Vec<(usize, ProgramAtom, Literal)> = (0..k)
            .filter_map(|i| match closure.member(i) {
                Member::BoxAtom(a, body) => Some((i, *a, *body)),
                _ => None,
            })
            .collect();

        let mut next = 0;
        while next < types.len() {
            let t = types[next].clone();
            next += 1;
            for &(i, a, body) in &boxes {
                if !t.neg.contains(i) {
                    continue;
                }
                let mut seed = PdlType::empty(k);
                for &(j, b, chi) in &boxes {
                    if b == a && t.pos.contains(j) {
                        seed.insert(chi);
                    }
                }
                if seed.has(body) {
                    // `[a]ψ` and `!ψ` demanded together: no successor
                    continue;
                }
                seed.insert(body.flip());
                if seen_seeds.insert(key_of(&seed), ()).is_some() {
                    continue;
                }
                let mut fresh = Vec::new();
                saturate(closure, &seed, &mut fresh);
                for u in fresh {
                    intern(u, &mut types)?;
                }
            }
        }

        let mut requirements: HashMap<ProgramAtom, Vec<BitSet>> = HashMap::new();
        for a in ProgramAtom::ALL {
            requirements.insert(
                a,
                types
                    .iter()
                    .map(|t| {
                        let mut req = BitSet::new(2 * k);
                        for &(j, b, chi) in &boxes {
                            if b == a && t.pos.contains(j) {
                                req.insert(lit_slot(chi));
                            }
                        }
                        req
                    })
                    .collect(),
            );
        }
        Ok(TypeGraph {
            closure,
            types,
            roots,
            requirements,
        })
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// Literals of a type as one bitset over `2k` slots.
    pub fn slots(&self, t: usize) -> BitSet {
        let k = self.closure.len();
        let ty = &self.types[t];
        let mut s = BitSet::new(2 * k);
        for i in ty.pos.iter() {
            s.insert(2 * i);
        }
        for i in ty.neg.iter() {
            s.insert(2 * i + 1);
        }
        s
    }

    pub fn requirement(&self, a: ProgramAtom, t: usize) -> &BitSet {
        &self.requirements[&a][t]
    }

    /// Types containing `l`.
    pub fn with_literal(&self, l: Literal) -> BitSet {
        BitSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&t| self.types[t].has(l)),
        )
    }
}

/// Position of a literal in the `2k`-slot encoding.
pub fn lit_slot(l: Literal) -> usize {
    2 * l.index + usize::from(!l.positive)
}
