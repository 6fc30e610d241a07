//! Brute-force ground truth over all small models, and seeded random
//! generators for property tests.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::relmodel::{confluence_witness, BiModel, ModelKind, PdlModel, Relation, WorldSet};
use crate::semantics::{Evaluator, PdlEvaluator};
use crate::solver::Logic;
use crate::syntax::{Formula, FragmentTag, PdlFormula, Program, ProgramAtom};
use crate::translate::ck_model_to_cs4;

/// Largest world count enumerated without `allow_large`.
pub const MAX_ENUM_WORLDS: usize = 4;

/// Which models to enumerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumSpec {
    pub max_worlds: usize,
    pub atoms: Vec<String>,
    pub kind: ModelKind,
    /// Lifts the world cap. Masks are 16 bits wide, so 16 worlds is a hard limit.
    pub allow_large: bool,
}

impl EnumSpec {
    pub fn new<S: Into<String>>(
        max_worlds: usize,
        atoms: impl IntoIterator<Item = S>,
        kind: ModelKind,
    ) -> Self {
        EnumSpec {
            max_worlds,
            atoms: atoms.into_iter().map(Into::into).collect(),
            kind,
            allow_large: false,
        }
    }

    fn check(&self) -> Result<()> {
        let cap = if self.allow_large {
            16
        } else {
            MAX_ENUM_WORLDS
        };
        if self.max_worlds > cap {
            return Err(Error::Budget(format!(
                "refusing to enumerate models with {} worlds (limit {cap})",
                self.max_worlds
            )));
        }
        Ok(())
    }
}

type Mask = u16;

fn set_of(n: usize, mask: Mask) -> WorldSet {
    WorldSet::from_mask(n, u64::from(mask))
}

fn mask_of(s: &WorldSet) -> Mask {
    s.iter().fold(0, |m, w| m | 1 << w)
}

fn relations(n: usize) -> impl Iterator<Item = Relation> {
    (0..1u64 << (n * n)).map(move |m| Relation::from_mask(n, m))
}

fn preorders(n: usize) -> impl Iterator<Item = Relation> {
    relations(n).filter(Relation::is_preorder)
}

/// Sets closed under `r`, in ascending mask order.
fn closed_sets(r: &Relation) -> Vec<Mask> {
    let n = r.worlds();
    (0..1 << n)
        .filter(|&m| {
            let s = set_of(n, m);
            r.image(&s).is_subset(&s)
        })
        .collect()
}

/// A frame together with its admissible falsum sets and valuations.
struct Frame {
    n: usize,
    pre: Relation,
    modal: Relation,
    bot: Mask,
    /// Up-sets of `≼` containing `bot`, ascending.
    upsets: Vec<Mask>,
}

fn frames(n: usize, kind: ModelKind) -> impl Iterator<Item = Frame> {
    preorders(n).flat_map(move |pre| {
        let pre_up = closed_sets(&pre);
        let modals: Vec<Relation> = if kind.s4() {
            preorders(n)
                .filter(|m| confluence_witness(&pre, m).is_none())
                .collect()
        } else {
            relations(n).collect()
        };
        modals.into_iter().flat_map(move |modal| {
            let bots: Vec<Mask> = if kind.infallible() {
                vec![0]
            } else {
                let both = pre.union(&modal).expect("same size");
                closed_sets(&both)
                    .into_iter()
                    .filter(|&b| set_of(n, b).iter().all(|w| !modal.successors(w).is_empty()))
                    .collect()
            };
            let pre = pre.clone();
            let pre_up = pre_up.clone();
            bots.into_iter().map(move |bot| Frame {
                n,
                pre: pre.clone(),
                modal: modal.clone(),
                bot,
                upsets: pre_up.iter().copied().filter(|u| u & bot == bot).collect(),
            })
        })
    })
}

fn model_of(f: &Frame, atoms: &[String], val: &[Mask]) -> BiModel {
    let mut m = BiModel::new(f.n);
    m.pre = f.pre.clone();
    m.modal = f.modal.clone();
    m.bot = set_of(f.n, f.bot);
    for (a, &v) in atoms.iter().zip(val) {
        m.val.insert(a.clone(), set_of(f.n, v));
    }
    m
}

/// Every model of `spec.kind` with at most `spec.max_worlds` worlds, valuations
/// ranging over `spec.atoms`. Order: world count, `≼`, `R`, falsum, then
/// valuations lexicographically in `spec.atoms` order.
pub fn enumerate_models(spec: &EnumSpec) -> Result<impl Iterator<Item = BiModel>> {
    spec.check()?;
    let atoms = spec.atoms.clone();
    let kind = spec.kind;
    Ok((1..=spec.max_worlds)
        .flat_map(move |n| frames(n, kind))
        .flat_map(move |frame| {
            let atoms = atoms.clone();
            valuations(frame.upsets.len(), atoms.len())
                .map(move |ix| {
                    let val: Vec<Mask> = ix.iter().map(|&i| frame.upsets[i]).collect();
                    model_of(&frame, &atoms, &val)
                })
                .collect::<Vec<_>>()
        }))
}

/// All index vectors in `0..choices` of length `k`, lexicographically.
fn valuations(choices: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = choices.checked_pow(k as u32).unwrap_or(0);
    (0..total).map(move |mut code| {
        let mut v = vec![0; k];
        for slot in v.iter_mut().rev() {
            *slot = code % choices;
            code /= choices;
        }
        v
    })
}

/// Outcome of a bounded search.
#[derive(Clone, Debug)]
pub enum BoundedVerdict {
    /// No countermodel with at most `max_worlds` worlds.
    ValidUpToBound { max_worlds: usize, models: u64 },
    /// The first countermodel in enumeration order, and its least falsifying world.
    Invalid { model: BiModel, world: usize },
    /// Same, for the classical logics.
    InvalidPdl { model: PdlModel, world: usize },
}

impl BoundedVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, BoundedVerdict::ValidUpToBound { .. })
    }
}

/// Model class searched for each constructive logic.
pub fn model_kind(logic: Logic) -> Option<ModelKind> {
    match logic {
        Logic::CkStar | Logic::CkStarBox => Some(ModelKind::Ck),
        Logic::WkStar => Some(ModelKind::Wk),
        Logic::Cs4 => Some(ModelKind::Cs4),
        Logic::Ws4 => Some(ModelKind::Ws4),
        Logic::KStar | Logic::Pdl => None,
    }
}

/// Step of a compiled formula, run on a stack of world masks.
#[derive(Clone, Copy, Debug)]
enum Op {
    Bot,
    Atom(usize),
    And,
    Or,
    Imp,
    Box,
    Dia,
    BoxStar,
    DiaStar,
}

fn compile(f: &Formula, atoms: &[String], out: &mut Vec<Op>) {
    for c in f.children() {
        compile(c, atoms, out);
    }
    out.push(match f {
        Formula::Bot => Op::Bot,
        Formula::Atom(p) => Op::Atom(atoms.iter().position(|a| a == p).expect("atom listed")),
        Formula::And(..) => Op::And,
        Formula::Or(..) => Op::Or,
        Formula::Imp(..) => Op::Imp,
        Formula::Box(_) => Op::Box,
        Formula::Dia(_) => Op::Dia,
        Formula::BoxStar(_) => Op::BoxStar,
        Formula::DiaStar(_) => Op::DiaStar,
    });
}

/// Per-frame truth tables of the connectives, indexed by argument extension.
/// Filled in by the model checker itself, so evaluating with them is
/// evaluating with [`Evaluator`].
struct Tables {
    full: Mask,
    bot: Mask,
    width: usize,
    imp: Vec<Mask>,
    boxed: Vec<Mask>,
    dia: Vec<Mask>,
    box_star: Vec<Mask>,
    dia_star: Vec<Mask>,
}

impl Tables {
    fn new(frame: &Frame) -> Self {
        let n = frame.n;
        let width = 1usize << n;
        let x = Formula::atom("x");
        let y = Formula::atom("y");
        let mut m = model_of(frame, &[], &[]);
        let mut unary = |g: &Formula| -> Vec<Mask> {
            (0..width)
                .map(|a| {
                    m.val.insert("x".into(), set_of(n, a as Mask));
                    mask_of(&Evaluator::new(&m).extension(g))
                })
                .collect()
        };
        let boxed = unary(&Formula::boxed(x.clone()));
        let dia = unary(&Formula::dia(x.clone()));
        let box_star = unary(&Formula::box_star(x.clone()));
        let dia_star = unary(&Formula::dia_star(x.clone()));
        let mut m = model_of(frame, &[], &[]);
        let imp_f = Formula::imp(x, y);
        let mut imp = vec![0; width * width];
        for a in 0..width {
            m.val.insert("x".into(), set_of(n, a as Mask));
            for b in 0..width {
                m.val.insert("y".into(), set_of(n, b as Mask));
                imp[a * width + b] = mask_of(&Evaluator::new(&m).extension(&imp_f));
            }
        }
        Tables {
            full: (width - 1) as Mask,
            bot: frame.bot,
            width,
            imp,
            boxed,
            dia,
            box_star,
            dia_star,
        }
    }

    fn eval(&self, code: &[Op], val: &[Mask], stack: &mut Vec<Mask>) -> Mask {
        stack.clear();
        for op in code {
            let v = match *op {
                Op::Bot => self.bot,
                Op::Atom(i) => val[i],
                Op::And => {
                    let b = stack.pop().unwrap();
                    stack.pop().unwrap() & b
                }
                Op::Or => {
                    let b = stack.pop().unwrap();
                    stack.pop().unwrap() | b
                }
                Op::Imp => {
                    let b = stack.pop().unwrap() as usize;
                    let a = stack.pop().unwrap() as usize;
                    self.imp[a * self.width + b]
                }
                Op::Box => self.boxed[stack.pop().unwrap() as usize],
                Op::Dia => self.dia[stack.pop().unwrap() as usize],
                Op::BoxStar => self.box_star[stack.pop().unwrap() as usize],
                Op::DiaStar => self.dia_star[stack.pop().unwrap() as usize],
            };
            stack.push(v);
        }
        stack.pop().unwrap()
    }
}

/// All frames of one class up to a size, prepared for repeated queries.
pub struct Oracle {
    kind: ModelKind,
    max_worlds: usize,
    frames: Vec<(Frame, Tables)>,
}

impl Oracle {
    pub fn new(kind: ModelKind, max_worlds: usize) -> Result<Self> {
        EnumSpec::new(max_worlds, Vec::<String>::new(), kind).check()?;
        Self::build(kind, max_worlds)
    }

    fn build(kind: ModelKind, max_worlds: usize) -> Result<Self> {
        let frames = (1..=max_worlds)
            .flat_map(|n| frames(n, kind))
            .map(|f| {
                let t = Tables::new(&f);
                (f, t)
            })
            .collect();
        Ok(Oracle {
            kind,
            max_worlds,
            frames,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    /// The first countermodel over `atoms` (which must include `Var(f)`).
    pub fn decide(&self, f: &Formula, atoms: &[String]) -> BoundedVerdict {
        // unused atoms sit at their first choice in the first countermodel
        let used: Vec<String> = atoms.iter().filter(|a| f.mentions(a)).cloned().collect();
        let mut code = Vec::new();
        compile(f, &used, &mut code);
        let mut stack = Vec::with_capacity(code.len());
        let mut models = 0u64;
        let mut val = vec![0; used.len()];
        for (frame, tables) in &self.frames {
            let choices = frame.upsets.len();
            for ix in valuations(choices, used.len()) {
                for (v, &i) in val.iter_mut().zip(&ix) {
                    *v = frame.upsets[i];
                }
                models += 1;
                let ext = tables.eval(&code, &val, &mut stack);
                if ext != tables.full {
                    let world = (!ext).trailing_zeros() as usize;
                    let full: Vec<Mask> = atoms
                        .iter()
                        .map(|a| match used.iter().position(|u| u == a) {
                            Some(i) => val[i],
                            None => frame.upsets[0],
                        })
                        .collect();
                    return BoundedVerdict::Invalid {
                        model: model_of(frame, atoms, &full),
                        world,
                    };
                }
            }
        }
        BoundedVerdict::ValidUpToBound {
            max_worlds: self.max_worlds,
            models,
        }
    }
}

/// Bounded validity in the models of `logic`, searching the class of the
/// logic (`spec.kind` is ignored for the constructive logics).
pub fn brute_force_decide(logic: Logic, f: &Formula, spec: &EnumSpec) -> Result<BoundedVerdict> {
    spec.check()?;
    if let Some(tag) = logic.fragment() {
        if !f.in_fragment(tag) {
            return Err(Error::Fragment(tag));
        }
    }
    let kind = model_kind(logic).ok_or_else(|| Error::Unsupported {
        logic: logic.name().into(),
        what: "search birelational models".into(),
    })?;
    let atoms = atoms_covering(&spec.atoms, f.variables());
    Ok(Oracle::build(kind, spec.max_worlds)?.decide(f, &atoms))
}

fn atoms_covering(listed: &[String], vars: BTreeSet<String>) -> Vec<String> {
    let mut atoms = listed.to_vec();
    for v in vars {
        if !atoms.contains(&v) {
            atoms.push(v);
        }
    }
    atoms
}

/// Bounded validity of a PDL formula over all classical models on its
/// programs (the atom `a` alone for `k_star`).
pub fn brute_force_decide_pdl(
    logic: Logic,
    f: &PdlFormula,
    spec: &EnumSpec,
) -> Result<BoundedVerdict> {
    spec.check()?;
    let programs: Vec<ProgramAtom> = match logic {
        Logic::KStar => {
            if !f.in_kstar() {
                return Err(Error::Fragment(FragmentTag::LKStar));
            }
            vec![ProgramAtom::A]
        }
        Logic::Pdl => f.program_atoms().into_iter().collect(),
        _ => {
            return Err(Error::Unsupported {
                logic: logic.name().into(),
                what: "search classical models".into(),
            })
        }
    };
    let atoms = atoms_covering(&spec.atoms, f.variables());
    let mut models = 0u64;
    for n in 1..=spec.max_worlds {
        let rels = 1u64 << (n * n);
        let frames = rels
            .checked_pow(programs.len() as u32)
            .ok_or_else(|| Error::Budget("too many classical frames".into()))?;
        for code in 0..frames {
            let mut m = PdlModel::new(n);
            let mut c = code;
            for &a in &programs {
                m.rho.insert(a, Relation::from_mask(n, c % rels));
                c /= rels;
            }
            for ix in valuations(1 << n, atoms.len()) {
                for (a, &v) in atoms.iter().zip(&ix) {
                    m.val.insert(a.clone(), set_of(n, v as Mask));
                }
                models += 1;
                let ext = PdlEvaluator::new(&m).extension(f)?;
                if let Some(world) = ext.complement().first() {
                    return Ok(BoundedVerdict::InvalidPdl { model: m, world });
                }
            }
        }
    }
    Ok(BoundedVerdict::ValidUpToBound {
        max_worlds: spec.max_worlds,
        models,
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_relation(r: &mut ChaCha8Rng, n: usize, p: f64) -> Relation {
    let mut rel = Relation::empty(n);
    for a in 0..n {
        for b in 0..n {
            if r.gen_bool(p) {
                rel.insert(a, b);
            }
        }
    }
    rel
}

fn random_set(r: &mut ChaCha8Rng, n: usize, p: f64) -> WorldSet {
    WorldSet::from_indices(n, (0..n).filter(|_| r.gen_bool(p)))
}

/// A random model of `spec.kind` with between 1 and `spec.max_worlds` worlds,
/// repaired until it satisfies every condition of its class.
pub fn random_model(seed: u64, spec: &EnumSpec) -> BiModel {
    let mut r = rng(seed);
    let max = spec.max_worlds.max(1);
    if spec.kind.s4() {
        // doubling a CK-model yields a CS4-model with twice the worlds
        let half = (r.gen_range(1..=max) / 2).max(1);
        let base = if spec.kind.infallible() {
            ModelKind::Wk
        } else {
            ModelKind::Ck
        };
        let inner = EnumSpec::new(half, spec.atoms.clone(), base);
        let m = random_model(r.gen(), &inner);
        return ck_model_to_cs4(&m).expect("repaired model is valid").model;
    }
    let n = r.gen_range(1..=max);
    let pre = random_relation(&mut r, n, 0.3).star();
    let modal = random_relation(&mut r, n, 0.35);
    let mut m = BiModel::new(n);
    m.pre = pre;
    m.modal = modal;
    if !spec.kind.infallible() && r.gen_bool(0.5) {
        let seed_set = random_set(&mut r, n, 0.3);
        let step = m.pre.union(&m.modal).expect("same size");
        m.bot = step.reach(&seed_set);
        for w in m.bot.iter().collect::<Vec<_>>() {
            if m.modal.successors(w).is_empty() {
                m.modal.insert(w, w);
            }
        }
    }
    for a in &spec.atoms {
        let s = random_set(&mut r, n, 0.4);
        let mut ext = m.pre.reach(&s);
        ext.union_with(&m.bot);
        m.val.insert(a.clone(), ext);
    }
    m
}

/// A random formula of the fragment with nesting depth at most `depth`. Each
/// node picks uniformly among the constructors of the fragment (only leaves
/// at depth 0).
pub fn random_formula<S: AsRef<str>>(
    seed: u64,
    depth: usize,
    atoms: &[S],
    fragment: FragmentTag,
) -> Formula {
    let atoms: Vec<&str> = atoms.iter().map(AsRef::as_ref).collect();
    random_formula_with(&mut rng(seed), depth, &atoms, fragment)
}

/// Constructors of a fragment: leaves first, then the rest.
fn constructors(fragment: FragmentTag) -> &'static [&'static str] {
    match fragment {
        FragmentTag::LStar => &[
            "bot", "atom", "and", "or", "imp", "box", "dia", "box*", "dia*",
        ],
        FragmentTag::LStarBox => &["bot", "atom", "and", "or", "imp", "box", "box*"],
        FragmentTag::L => &["bot", "atom", "and", "or", "imp", "box", "dia"],
        FragmentTag::LKStar => &["bot", "atom", "and", "or", "imp", "box", "box*"],
    }
}

pub fn random_formula_with(
    r: &mut ChaCha8Rng,
    depth: usize,
    atoms: &[&str],
    fragment: FragmentTag,
) -> Formula {
    let all = constructors(fragment);
    let pick = if depth == 0 {
        all[r.gen_range(0..2)]
    } else {
        all[r.gen_range(0..all.len())]
    };
    let sub = |r: &mut ChaCha8Rng| random_formula_with(r, depth.saturating_sub(1), atoms, fragment);
    match pick {
        "bot" => Formula::Bot,
        "atom" => match atoms.choose(r) {
            Some(a) => Formula::atom(*a),
            None => Formula::Bot,
        },
        "and" => Formula::and(sub(r), sub(r)),
        "or" => Formula::or(sub(r), sub(r)),
        "imp" => Formula::imp(sub(r), sub(r)),
        "box" => Formula::boxed(sub(r)),
        "dia" => Formula::dia(sub(r)),
        "box*" => Formula::box_star(sub(r)),
        "dia*" => Formula::dia_star(sub(r)),
        _ => unreachable!(),
    }
}

/// A random PDL formula over the given atomic programs, with program nesting
/// up to `depth` as well.
pub fn random_pdl_formula<S: AsRef<str>>(
    seed: u64,
    depth: usize,
    atoms: &[S],
    programs: &[ProgramAtom],
) -> PdlFormula {
    let atoms: Vec<&str> = atoms.iter().map(AsRef::as_ref).collect();
    pdl_rec(&mut rng(seed), depth, &atoms, programs)
}

fn pdl_rec(
    r: &mut ChaCha8Rng,
    depth: usize,
    atoms: &[&str],
    programs: &[ProgramAtom],
) -> PdlFormula {
    let choice = if depth == 0 { 0 } else { r.gen_range(0..6) };
    let d = depth.saturating_sub(1);
    match choice {
        0 => PdlFormula::atom(*atoms.choose(r).expect("at least one atom")),
        1 => PdlFormula::neg(pdl_rec(r, d, atoms, programs)),
        2 => PdlFormula::and(
            pdl_rec(r, d, atoms, programs),
            pdl_rec(r, d, atoms, programs),
        ),
        3 => PdlFormula::or(
            pdl_rec(r, d, atoms, programs),
            pdl_rec(r, d, atoms, programs),
        ),
        _ => {
            let p = random_program(r, d.min(2), programs);
            PdlFormula::boxed(p, pdl_rec(r, d, atoms, programs))
        }
    }
}

fn random_program(r: &mut ChaCha8Rng, depth: usize, programs: &[ProgramAtom]) -> Program {
    let choice = if depth == 0 { 0 } else { r.gen_range(0..4) };
    match choice {
        0 | 1 => Program::Atom(*programs.choose(r).expect("at least one program")),
        2 => Program::comp(
            random_program(r, depth - 1, programs),
            random_program(r, depth - 1, programs),
        ),
        _ => Program::star(random_program(r, depth - 1, programs)),
    }
}

/// A random K* formula: the only programs are `a` and `a*`.
pub fn random_kstar_formula<S: AsRef<str>>(seed: u64, depth: usize, atoms: &[S]) -> PdlFormula {
    let atoms: Vec<&str> = atoms.iter().map(AsRef::as_ref).collect();
    kstar_rec(&mut rng(seed), depth, &atoms)
}

fn kstar_rec(r: &mut ChaCha8Rng, depth: usize, atoms: &[&str]) -> PdlFormula {
    let choice = if depth == 0 { 0 } else { r.gen_range(0..6) };
    let d = depth.saturating_sub(1);
    let a = || Program::Atom(ProgramAtom::A);
    match choice {
        0 => PdlFormula::atom(*atoms.choose(r).expect("at least one atom")),
        1 => PdlFormula::neg(kstar_rec(r, d, atoms)),
        2 => PdlFormula::and(kstar_rec(r, d, atoms), kstar_rec(r, d, atoms)),
        3 => PdlFormula::or(kstar_rec(r, d, atoms), kstar_rec(r, d, atoms)),
        4 => PdlFormula::boxed(a(), kstar_rec(r, d, atoms)),
        _ => PdlFormula::boxed(Program::star(a()), kstar_rec(r, d, atoms)),
    }
}

/// A random classical model interpreting the given programs.
pub fn random_pdl_model<S: AsRef<str>>(
    seed: u64,
    max_worlds: usize,
    atoms: &[S],
    programs: &[ProgramAtom],
) -> PdlModel {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_worlds.max(1));
    let mut m = PdlModel::new(n);
    for &a in programs {
        m.rho.insert(a, random_relation(&mut r, n, 0.3));
    }
    for a in atoms {
        m.val
            .insert(a.as_ref().to_string(), random_set(&mut r, n, 0.5));
    }
    m
}
