#![allow(dead_code)]

use std::collections::VecDeque;

use mastermodal::oracle::{random_model, random_pdl_model, EnumSpec};
use mastermodal::relmodel::{
    is_model, restrict_to_infallible, validate, AnyModel, BiModel, ModelKind,
};
use mastermodal::semantics::{pdl_satisfies, satisfies, satisfies_alt, Evaluator};
use mastermodal::solver::{Logic, Query, Verdict};
use mastermodal::syntax::{Formula, FragmentTag, PdlFormula, Program, ProgramAtom, P_BOT};
use mastermodal::translate::{
    ck_model_to_cs4, ck_model_to_wk, iota, k_model_to_ck, kappa, kstar_to_constructive, omega_of,
    pdl_model_to_wk, tau, wk_generated_classical, wk_model_to_ck, wk_model_to_pdl, Cs4Construction,
};
use proptest::prelude::*;

pub const ATOMS: [&str; 2] = ["p", "q"];

/// Largest model drawn by the property checks.
pub const PROP_WORLDS: usize = 5;

/// Every formula with exactly `n` nodes over the given atoms, built from all
/// nine constructors.
pub fn formulas_of_size(n: usize, atoms: &[&str]) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new()];
    for k in 1..=n {
        let mut out = Vec::new();
        if k == 1 {
            out.push(Formula::Bot);
            out.extend(atoms.iter().map(|a| Formula::atom(*a)));
        } else {
            for g in &by_size[k - 1] {
                out.push(Formula::boxed(g.clone()));
                out.push(Formula::dia(g.clone()));
                out.push(Formula::box_star(g.clone()));
                out.push(Formula::dia_star(g.clone()));
            }
            for i in 1..k - 1 {
                for l in &by_size[i] {
                    for r in &by_size[k - 1 - i] {
                        out.push(Formula::and(l.clone(), r.clone()));
                        out.push(Formula::or(l.clone(), r.clone()));
                        out.push(Formula::imp(l.clone(), r.clone()));
                    }
                }
            }
        }
        by_size.push(out);
    }
    by_size.swap_remove(n)
}

/// Every formula with at most `n` nodes, smallest first.
pub fn corpus(n: usize, atoms: &[&str]) -> Vec<Formula> {
    (1..=n).flat_map(|k| formulas_of_size(k, atoms)).collect()
}

/// Every K* formula with at most `n` nodes (program nodes included).
pub fn kstar_corpus(n: usize, atoms: &[&str]) -> Vec<PdlFormula> {
    let a = || Program::Atom(ProgramAtom::A);
    let mut by_size: Vec<Vec<PdlFormula>> = vec![Vec::new()];
    for k in 1..=n {
        let mut out = Vec::new();
        if k == 1 {
            out.extend(atoms.iter().map(|x| PdlFormula::atom(*x)));
        } else {
            out.extend(by_size[k - 1].iter().map(|g| PdlFormula::neg(g.clone())));
            if k >= 3 {
                out.extend(
                    by_size[k - 2]
                        .iter()
                        .map(|g| PdlFormula::boxed(a(), g.clone())),
                );
            }
            if k >= 4 {
                out.extend(
                    by_size[k - 3]
                        .iter()
                        .map(|g| PdlFormula::boxed(Program::star(a()), g.clone())),
                );
            }
            for i in 1..k - 1 {
                for l in &by_size[i] {
                    for r in &by_size[k - 1 - i] {
                        out.push(PdlFormula::and(l.clone(), r.clone()));
                        out.push(PdlFormula::or(l.clone(), r.clone()));
                    }
                }
            }
        }
        by_size.push(out);
    }
    by_size.into_iter().flatten().collect()
}

// ---------------------------------------------------------------------------
// A world-by-world evaluator written straight from the satisfaction clauses,
// sharing nothing with the library's extension-set evaluator.

fn pre(m: &BiModel, w: usize) -> impl Iterator<Item = usize> + '_ {
    (0..m.worlds).filter(move |&v| m.pre.contains(w, v))
}

fn succ(m: &BiModel, w: usize) -> impl Iterator<Item = usize> + '_ {
    (0..m.worlds).filter(move |&v| m.modal.contains(w, v))
}

/// Worlds reachable from `w` in zero or more steps of `step`.
fn closure_from(n: usize, w: usize, step: impl Fn(usize) -> Vec<usize>) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([w]);
    seen[w] = true;
    let mut out = Vec::new();
    while let Some(u) = queue.pop_front() {
        out.push(u);
        for v in step(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    out
}

pub fn pointwise(m: &BiModel, w: usize, f: &Formula) -> bool {
    match f {
        Formula::Bot => m.bot.contains(w),
        Formula::Atom(p) => m.val_of(p).contains(w),
        Formula::And(l, r) => pointwise(m, w, l) && pointwise(m, w, r),
        Formula::Or(l, r) => pointwise(m, w, l) || pointwise(m, w, r),
        Formula::Imp(l, r) => pre(m, w).all(|v| !pointwise(m, v, l) || pointwise(m, v, r)),
        Formula::Box(g) => pre(m, w).all(|u| succ(m, u).all(|v| pointwise(m, v, g))),
        Formula::Dia(g) => pre(m, w).all(|v| succ(m, v).any(|u| pointwise(m, u, g))),
        Formula::BoxStar(g) => {
            let step = |u| pre(m, u).flat_map(|x| succ(m, x)).collect();
            closure_from(m.worlds, w, step)
                .into_iter()
                .all(|v| pointwise(m, v, g))
        }
        Formula::DiaStar(g) => pre(m, w).all(|v| {
            closure_from(m.worlds, v, |u| succ(m, u).collect())
                .into_iter()
                .any(|u| pointwise(m, u, g))
        }),
    }
}

// ---------------------------------------------------------------------------
// Properties. Each check draws its model from `seed`, compares both sides at
// every relevant world, and returns how many comparisons it made.

pub type Outcome = Result<usize, String>;

#[derive(Clone, Copy)]
pub enum Check {
    Constructive(FragmentTag, fn(u64, &Formula) -> Outcome),
    Classical(fn(u64, &PdlFormula) -> Outcome),
}

pub struct Property {
    pub name: &'static str,
    pub check: Check,
}

pub const PROPERTIES: &[Property] = &[
    Property {
        name: "ck model to wk, query under omega",
        check: Check::Constructive(FragmentTag::LStar, ck_to_wk_omega),
    },
    Property {
        name: "wk model to ck, query under omega",
        check: Check::Constructive(FragmentTag::LStar, wk_to_ck_omega),
    },
    Property {
        name: "wk model to pdl, query under tau",
        check: Check::Constructive(FragmentTag::LStar, wk_to_pdl_tau),
    },
    Property {
        name: "pdl model to wk, query under tau",
        check: Check::Constructive(FragmentTag::LStar, pdl_to_wk_tau),
    },
    Property {
        name: "kappa is truth-preserving on cs4 models",
        check: Check::Constructive(FragmentTag::L, cs4_kappa),
    },
    Property {
        name: "ck model to cs4, query under kappa",
        check: Check::Constructive(FragmentTag::L, ck_to_cs4_kappa),
    },
    Property {
        name: "k model to ck with identity preorder",
        check: Check::Classical(k_to_ck),
    },
    Property {
        name: "generated classical submodel",
        check: Check::Classical(generated_classical),
    },
    Property {
        name: "alternative master-box clause",
        check: Check::Constructive(FragmentTag::LStar, alt_box_star),
    },
    Property {
        name: "truth persistence",
        check: Check::Constructive(FragmentTag::LStar, persistence),
    },
    Property {
        name: "infallible restriction on box-only formulas",
        check: Check::Constructive(FragmentTag::LStarBox, restriction),
    },
    Property {
        name: "ex falso at fallible worlds",
        check: Check::Constructive(FragmentTag::LStar, ex_falso),
    },
    Property {
        name: "extension sets match pointwise evaluation",
        check: Check::Constructive(FragmentTag::LStar, pointwise_agreement),
    },
    Property {
        name: "iota is exact on classical models",
        check: Check::Classical(iota_on_classical),
    },
];

fn spec(kind: ModelKind, atoms: &[&str]) -> EnumSpec {
    EnumSpec::new(PROP_WORLDS, atoms.iter().copied(), kind)
}

fn model(seed: u64, kind: ModelKind) -> BiModel {
    random_model(seed, &spec(kind, &ATOMS))
}

fn need_valid(m: &BiModel, kind: ModelKind, what: &str) -> Result<(), String> {
    let v = validate(m, kind);
    if v.is_empty() {
        Ok(())
    } else {
        Err(format!("{what} is not a {kind} model: {v:?}"))
    }
}

fn sat(m: &BiModel, w: usize, f: &Formula) -> Result<bool, String> {
    satisfies(m, w, f).map_err(|e| e.to_string())
}

fn psat(m: &mastermodal::relmodel::PdlModel, w: usize, f: &PdlFormula) -> Result<bool, String> {
    pdl_satisfies(m, w, f).map_err(|e| e.to_string())
}

fn differ(what: &str, w: usize, f: &impl std::fmt::Debug, left: bool) -> String {
    format!("{what}: sides differ at world {w} for {f:?} (left side {left})")
}

fn ck_to_wk_omega(seed: u64, f: &Formula) -> Outcome {
    let m = model(seed, ModelKind::Ck);
    let wk = ck_model_to_wk(&m).map_err(|e| e.to_string())?;
    need_valid(&wk, ModelKind::Wk, "ck_model_to_wk output")?;
    let g = omega_of(f).map_err(|e| e.to_string())?;
    for w in 0..m.worlds {
        let l = sat(&m, w, f)?;
        if l != sat(&wk, w, &g)? {
            return Err(differ("omega", w, f, l));
        }
    }
    Ok(m.worlds)
}

fn wk_to_ck_omega(seed: u64, f: &Formula) -> Outcome {
    let m = random_model(seed, &spec(ModelKind::Wk, &["p", "q", P_BOT]));
    let ck = wk_model_to_ck(&m, f).map_err(|e| e.to_string())?;
    need_valid(&ck, ModelKind::Ck, "wk_model_to_ck output")?;
    let g = omega_of(f).map_err(|e| e.to_string())?;
    for w in 0..m.worlds {
        let l = sat(&ck, w, f)?;
        if l != sat(&m, w, &g)? {
            return Err(differ("omega back", w, f, l));
        }
    }
    Ok(m.worlds)
}

fn wk_to_pdl_tau(seed: u64, f: &Formula) -> Outcome {
    let m = model(seed, ModelKind::Wk);
    let pm = wk_model_to_pdl(&m).map_err(|e| e.to_string())?;
    let g = tau(f);
    for w in 0..m.worlds {
        let l = sat(&m, w, f)?;
        if l != psat(&pm, w, &g)? {
            return Err(differ("tau", w, f, l));
        }
    }
    Ok(m.worlds)
}

fn pdl_to_wk_tau(seed: u64, f: &Formula) -> Outcome {
    let pm = random_pdl_model(seed, PROP_WORLDS, &ATOMS, &[ProgramAtom::I, ProgramAtom::M]);
    let wk = pdl_model_to_wk(&pm).map_err(|e| e.to_string())?;
    need_valid(&wk, ModelKind::Wk, "pdl_model_to_wk output")?;
    let g = tau(f);
    for w in 0..pm.worlds {
        let l = sat(&wk, w, f)?;
        if l != psat(&pm, w, &g)? {
            return Err(differ("tau back", w, f, l));
        }
    }
    Ok(pm.worlds)
}

fn cs4_kappa(seed: u64, f: &Formula) -> Outcome {
    let kind = if seed.is_multiple_of(2) {
        ModelKind::Cs4
    } else {
        ModelKind::Ws4
    };
    let m = model(seed, kind);
    need_valid(&m, kind, "random model")?;
    let g = kappa(f).map_err(|e| e.to_string())?;
    for w in 0..m.worlds {
        let l = sat(&m, w, f)?;
        if l != sat(&m, w, &g)? {
            return Err(differ("kappa", w, f, l));
        }
    }
    Ok(m.worlds)
}

fn ck_to_cs4_kappa(seed: u64, f: &Formula) -> Outcome {
    let (kind, target) = if seed.is_multiple_of(2) {
        (ModelKind::Ck, ModelKind::Cs4)
    } else {
        (ModelKind::Wk, ModelKind::Ws4)
    };
    let m = model(seed, kind);
    let c = ck_model_to_cs4(&m).map_err(|e| e.to_string())?;
    need_valid(&c.model, target, "ck_model_to_cs4 output")?;
    let g = kappa(f).map_err(|e| e.to_string())?;
    for w in 0..m.worlds {
        let l = sat(&m, w, &g)?;
        for i in 0..2 {
            if l != sat(&c.model, Cs4Construction::world(w, i), f)? {
                return Err(differ("cs4 copy", w, f, l));
            }
        }
    }
    Ok(2 * m.worlds)
}

fn k_to_ck(seed: u64, f: &PdlFormula) -> Outcome {
    let pm = random_pdl_model(seed, PROP_WORLDS, &ATOMS, &[ProgramAtom::A]);
    let ck = k_model_to_ck(&pm).map_err(|e| e.to_string())?;
    need_valid(&ck, ModelKind::Wk, "k_model_to_ck output")?;
    let g = kstar_to_constructive(f).map_err(|e| e.to_string())?;
    for w in 0..pm.worlds {
        let l = psat(&pm, w, f)?;
        if l != sat(&ck, w, &g)? {
            return Err(differ("k to ck", w, f, l));
        }
    }
    Ok(pm.worlds)
}

fn generated_classical(seed: u64, f: &PdlFormula) -> Outcome {
    let m = model(seed, ModelKind::Wk);
    let g = wk_generated_classical(&m, f).map_err(|e| e.to_string())?;
    need_valid(&g.sub, ModelKind::Wk, "generated submodel")?;
    let step = m.pre.union(&m.modal).map_err(|e| e.to_string())?;
    if step.reach(&g.u).count() != g.worlds.len() {
        return Err("generated worlds are not the closure of U".into());
    }
    let mut checked = 0;
    for psi in f.subformulas() {
        let c = kstar_to_constructive(&psi).map_err(|e| e.to_string())?;
        for w in 0..g.sub.worlds {
            let l = psat(&g.classical, w, &psi)?;
            if l != sat(&g.sub, w, &c)? {
                return Err(differ("generated submodel", w, &psi, l));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn alt_box_star(seed: u64, f: &Formula) -> Outcome {
    let m = model(seed, ModelKind::Ck);
    let g = Formula::box_star(f.clone());
    for w in 0..m.worlds {
        for h in [f, &g] {
            let l = sat(&m, w, h)?;
            if l != satisfies_alt(&m, w, h).map_err(|e| e.to_string())? {
                return Err(differ("alternative clause", w, h, l));
            }
        }
    }
    Ok(2 * m.worlds)
}

fn persistence(seed: u64, f: &Formula) -> Outcome {
    let m = model(seed, ModelKind::Ck);
    let ext = Evaluator::new(&m).extension(f);
    let mut checked = 0;
    for (w, v) in m.pre.pairs() {
        if ext.contains(w) && !ext.contains(v) {
            return Err(format!("{f:?} holds at {w} but not at its successor {v}"));
        }
        checked += 1;
    }
    Ok(checked)
}

fn restriction(seed: u64, f: &Formula) -> Outcome {
    let m = model(seed, ModelKind::Ck);
    let r = restrict_to_infallible(&m);
    need_valid(&r.model, ModelKind::Wk, "restriction")?;
    let mut checked = 0;
    for w in 0..m.worlds {
        let Some(v) = r.index[w] else {
            continue;
        };
        let l = sat(&m, w, f)?;
        if l != sat(&r.model, v, f)? {
            return Err(differ("restriction", w, f, l));
        }
        checked += 1;
    }
    Ok(checked)
}

fn ex_falso(seed: u64, f: &Formula) -> Outcome {
    let m = model(seed, ModelKind::Ck);
    let mut checked = 0;
    for w in m.bot.iter() {
        if !sat(&m, w, f)? {
            return Err(format!("{f:?} fails at fallible world {w}"));
        }
        checked += 1;
    }
    Ok(checked)
}

fn pointwise_agreement(seed: u64, f: &Formula) -> Outcome {
    let m = model(seed, ModelKind::Ck);
    let ext = Evaluator::new(&m).extension(f);
    for w in 0..m.worlds {
        let l = pointwise(&m, w, f);
        if l != ext.contains(w) || l != sat(&m, w, f)? {
            return Err(differ("pointwise", w, f, l));
        }
    }
    Ok(m.worlds)
}

/// A K* countermodel of `f` yields a CK countermodel of `ι(f)` at the same
/// world, and a K* model of `f` satisfies `ι(f)` everywhere it satisfies `f`.
fn iota_on_classical(seed: u64, f: &PdlFormula) -> Outcome {
    let pm = random_pdl_model(seed, PROP_WORLDS, &ATOMS, &[ProgramAtom::A]);
    let ck = k_model_to_ck(&pm).map_err(|e| e.to_string())?;
    let g = iota(f).map_err(|e| e.to_string())?;
    for w in 0..pm.worlds {
        let l = psat(&pm, w, f)?;
        if l != sat(&ck, w, &g)? {
            return Err(differ("iota", w, f, l));
        }
    }
    Ok(pm.worlds)
}

// ---------------------------------------------------------------------------
// proptest strategies

pub fn arb_formula(fragment: FragmentTag) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Bot),
        Just(Formula::atom("p")),
        Just(Formula::atom("q")),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let mut unary: Vec<fn(Formula) -> Formula> = vec![Formula::boxed];
        match fragment {
            FragmentTag::LStar => unary.extend([
                Formula::dia as fn(Formula) -> Formula,
                Formula::box_star,
                Formula::dia_star,
            ]),
            FragmentTag::L => unary.push(Formula::dia),
            _ => unary.push(Formula::box_star),
        }
        let n = unary.len();
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::imp(l, r)),
            (0..n, inner).prop_map(move |(i, g)| unary[i](g)),
        ]
    })
}

pub fn arb_kstar() -> impl Strategy<Value = PdlFormula> {
    let leaf = prop_oneof![Just(PdlFormula::atom("p")), Just(PdlFormula::atom("q"))];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let a = || Program::Atom(ProgramAtom::A);
        prop_oneof![
            inner.clone().prop_map(PdlFormula::neg),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| PdlFormula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| PdlFormula::or(l, r)),
            inner.clone().prop_map(move |g| PdlFormula::boxed(a(), g)),
            inner.prop_map(move |g| PdlFormula::boxed(Program::star(a()), g)),
        ]
    })
}

// ---------------------------------------------------------------------------
// Certification, done again from the outside.

/// Re-checks an invalid verdict against the model checker and the model
/// validators. Valid verdicts pass trivially.
pub fn recertify(logic: Logic, query: &Query, verdict: &Verdict) -> Result<(), String> {
    let Some(c) = verdict.countermodel() else {
        return Ok(());
    };
    match (&c.model, query) {
        (AnyModel::Bi { kind, model }, Query::Constructive(f)) => {
            let expected = match logic {
                Logic::CkStar => ModelKind::Ck,
                Logic::WkStar | Logic::CkStarBox => ModelKind::Wk,
                Logic::Cs4 => ModelKind::Cs4,
                Logic::Ws4 => ModelKind::Ws4,
                _ => return Err(format!("{logic} returned a birelational model")),
            };
            if *kind != expected || !is_model(model, expected) {
                return Err(format!("{logic} countermodel is not a {expected} model"));
            }
            if sat(model, c.world, f)? || pointwise(model, c.world, f) {
                return Err(format!("{logic} countermodel satisfies {f:?}"));
            }
        }
        (AnyModel::Pdl(m), Query::Classical(f)) => {
            if psat(m, c.world, f)? {
                return Err(format!("{logic} countermodel satisfies {f:?}"));
            }
        }
        _ => return Err(format!("{logic} countermodel has the wrong family")),
    }
    Ok(())
}

/// `worlds ≤ 2^closure`.
pub fn within_closure_bound(worlds: usize, closure: usize) -> bool {
    closure >= usize::BITS as usize - 1 || worlds <= 1usize << closure
}
