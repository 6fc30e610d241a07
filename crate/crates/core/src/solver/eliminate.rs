//! Pratt-style elimination over the reachable types, and model extraction.

use std::collections::{BTreeSet, HashMap};

use crate::error::Result;
use crate::relmodel::{BitSet, PdlModel, Relation};
use crate::syntax::{PdlFormula, Program, ProgramAtom};

use super::closure::{fl_closure, ClosureSet, Literal, Member};
use super::types::{lit_slot, TypeGraph};

/// Default cap on the number of generated types.
pub const DEFAULT_BUDGET: usize = 1 << 18;

/// `Δ_a`: `t Δ_a u` iff every `χ` with `[a]χ ∈ t` is in `u`. Types with equal
/// requirements share one row.
struct Compat {
    class: Vec<usize>,
    rows: Vec<BitSet>,
}

impl Compat {
    fn new(g: &TypeGraph, a: ProgramAtom) -> Self {
        let n = g.len();
        let slots: Vec<BitSet> = (0..n).map(|u| g.slots(u)).collect();
        let mut index: HashMap<&BitSet, usize> = HashMap::new();
        let mut class = Vec::with_capacity(n);
        let mut rows = Vec::new();
        for t in 0..n {
            let req = g.requirement(a, t);
            let c = *index.entry(req).or_insert_with(|| {
                rows.push(BitSet::from_indices(
                    n,
                    (0..n).filter(|&u| req.is_subset(&slots[u])),
                ));
                rows.len() - 1
            });
            class.push(c);
        }
        Compat { class, rows }
    }

    fn successors(&self, t: usize) -> &BitSet {
        &self.rows[self.class[t]]
    }
}

struct Eliminator<'g, 'c> {
    g: &'g TypeGraph<'c>,
    alive: BitSet,
    compat: HashMap<ProgramAtom, Compat>,
    memo: HashMap<(Program, BitSet), BitSet>,
}

impl<'g, 'c> Eliminator<'g, 'c> {
    fn new(g: &'g TypeGraph<'c>) -> Self {
        let compat = ProgramAtom::ALL
            .into_iter()
            .map(|a| (a, Compat::new(g, a)))
            .collect();
        Eliminator {
            g,
            alive: BitSet::full(g.len()),
            compat,
            memo: HashMap::new(),
        }
    }

    /// Alive types with a `Δ_a`-successor in `x`.
    fn pre_atom(&self, a: ProgramAtom, x: &BitSet) -> BitSet {
        let c = &self.compat[&a];
        let hits: Vec<bool> = c.rows.iter().map(|r| r.intersects(x)).collect();
        BitSet::from_indices(
            self.g.len(),
            self.alive.iter().filter(|&t| hits[c.class[t]]),
        )
    }

    /// Alive types with a `Δ_α`-path into `x`, where `x` holds only alive types.
    fn pre(&mut self, p: &Program, x: &BitSet) -> BitSet {
        let key = (p.clone(), x.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let r = match p {
            Program::Atom(a) => self.pre_atom(*a, x),
            Program::Comp(l, r) => {
                let mid = self.pre(r, x);
                self.pre(l, &mid)
            }
            Program::Star(q) => {
                let mut acc = x.clone();
                loop {
                    let step = self.pre(q, &acc);
                    if !acc.union_with(&step) {
                        break acc;
                    }
                }
            }
        };
        self.memo.insert(key, r.clone());
        r
    }

    /// Deletes types with an unwitnessed negative box until nothing changes.
    fn run(&mut self) {
        let c = self.g.closure;
        let boxes: Vec<(usize, Program, Literal, BitSet)> = (0..c.len())
            .filter_map(|i| {
                let p = c.program(i)?.clone();
                let body = c.body(i)?;
                let holders = self.g.with_literal(Literal {
                    index: i,
                    positive: false,
                });
                (!holders.is_empty()).then_some((i, p, body.flip(), holders))
            })
            .collect();
        let targets: Vec<BitSet> = boxes
            .iter()
            .map(|(_, _, want, _)| self.g.with_literal(*want))
            .collect();
        loop {
            self.memo.clear();
            let mut changed = false;
            for ((_, p, _, holders), target) in boxes.iter().zip(&targets) {
                if !holders.intersects(&self.alive) {
                    continue;
                }
                let x = target.intersection(&self.alive);
                let ok = self.pre(p, &x);
                let doomed = holders.intersection(&self.alive).difference(&ok);
                if !doomed.is_empty() {
                    self.alive.difference_with(&doomed);
                    self.memo.clear();
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// A `Δ_α`-path from `t` into `x` through alive types, excluding `t`.
    /// Prefers types already in `kept`.
    fn witness(&mut self, t: usize, p: &Program, x: &BitSet, kept: &BitSet) -> Vec<usize> {
        match p {
            Program::Atom(a) => {
                let cands = self.compat[a].successors(t).intersection(x);
                let u = cands
                    .intersection(kept)
                    .first()
                    .or_else(|| cands.first())
                    .expect("witness exists for surviving types");
                vec![u]
            }
            Program::Comp(l, r) => {
                let mid = self.pre(r, x);
                let mut path = self.witness(t, l, &mid, kept);
                let end = path.last().copied().unwrap_or(t);
                path.extend(self.witness(end, r, x, kept));
                path
            }
            Program::Star(q) => {
                let mut layers = vec![x.clone()];
                while !layers.last().unwrap().contains(t) {
                    let last = layers.last().unwrap().clone();
                    let mut next = last.clone();
                    next.union_with(&self.pre(q, &last));
                    assert!(next != last, "witness exists for surviving types");
                    layers.push(next);
                }
                let mut path = Vec::new();
                let mut cur = t;
                let mut j = layers.len() - 1;
                while j > 0 {
                    // cur ∈ layers[j] \ layers[j-1]
                    let step = self.witness(cur, q, &layers[j - 1].clone(), kept);
                    cur = *step.last().expect("a step leaves the layer");
                    path.extend(step);
                    j = (0..j)
                        .find(|&i| layers[i].contains(cur))
                        .expect("layers nest");
                }
                path
            }
        }
    }
}

/// A model and a world satisfying a formula.
#[derive(Clone, Debug)]
pub struct PdlWitness {
    pub model: PdlModel,
    pub world: usize,
    /// Number of closure members of the formula.
    pub closure_size: usize,
}

/// Satisfiability of a test-free PDL formula.
///
/// The returned model interprets every program atom of `f`; its worlds are
/// surviving types and the satisfying world is `0`.
pub fn pdl_satisfiable(f: &PdlFormula) -> Result<Option<PdlWitness>> {
    satisfiable_with(f, &f.program_atoms(), DEFAULT_BUDGET)
}

/// As [`pdl_satisfiable`], also interpreting the given program atoms.
pub fn satisfiable_with(
    f: &PdlFormula,
    programs: &BTreeSet<ProgramAtom>,
    budget: usize,
) -> Result<Option<PdlWitness>> {
    let closure = fl_closure(f);
    let graph = TypeGraph::build(&closure, budget)?;
    let mut el = Eliminator::new(&graph);
    el.run();
    let Some(&root) = graph.roots.iter().find(|&&r| el.alive.contains(r)) else {
        return Ok(None);
    };
    let kept = extract(&mut el, root);
    Ok(Some(PdlWitness {
        model: build_model(&closure, &el, &kept, programs, &f.variables()),
        world: 0,
        closure_size: closure.len(),
    }))
}

/// A set of surviving types containing `root` that holds a witness path for
/// every negative box of each of its members.
fn extract(el: &mut Eliminator, root: usize) -> Vec<usize> {
    let c = el.g.closure;
    let n = el.g.len();
    let mut order = vec![root];
    let mut kept = BitSet::singleton(n, root);
    let mut next = 0;
    while next < order.len() {
        let t = order[next];
        next += 1;
        let negs: Vec<usize> = el.g.types[t].neg.iter().collect();
        for i in negs {
            let (Some(p), Some(body)) = (c.program(i).cloned(), c.body(i)) else {
                continue;
            };
            let x = el.g.with_literal(body.flip()).intersection(&el.alive);
            for u in el.witness(t, &p, &x, &kept) {
                if kept.insert(u) {
                    order.push(u);
                }
            }
        }
    }
    order
}

fn build_model(
    c: &ClosureSet,
    el: &Eliminator,
    kept: &[usize],
    programs: &BTreeSet<ProgramAtom>,
    vars: &BTreeSet<String>,
) -> PdlModel {
    let n = kept.len();
    let mut m = PdlModel::new(n);
    for &a in programs {
        let compat = &el.compat[&a];
        let mut r = Relation::empty(n);
        for (i, &t) in kept.iter().enumerate() {
            for (j, &u) in kept.iter().enumerate() {
                if compat.successors(t).contains(u) {
                    r.insert(i, j);
                }
            }
        }
        m.rho.insert(a, r);
    }
    for v in vars {
        m.set_val(v, []);
    }
    for i in 0..c.len() {
        if let Member::Atom(p) = c.member(i) {
            let slot = lit_slot(Literal {
                index: i,
                positive: true,
            });
            let ext = (0..n).filter(|&w| el.g.slots(kept[w]).contains(slot));
            m.set_val(p, ext);
        }
    }
    m
}
