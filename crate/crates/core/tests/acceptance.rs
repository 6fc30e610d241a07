//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mastermodal::oracle::{
    random_formula, random_kstar_formula, random_pdl_formula, BoundedVerdict, Oracle,
};
use mastermodal::relmodel::ModelKind;
use mastermodal::solver::{decide, Logic, Query, Verdict};
use mastermodal::syntax::{
    parse_constructive, parse_pdl, Formula, FragmentTag, PdlFormula, ProgramAtom,
};
use mastermodal::translate::{iota, kappa, omega_of, tau};

use common::{Check, PROPERTIES};

/// Largest formula size in the exhaustive oracle corpus.
const CORPUS_NODES: usize = 7;
const ORACLE_WORLDS: usize = 3;
const PROPERTY_INSTANCES: u64 = 10_000;
const DEEP_FORMULAS: u64 = 1_000;
const SWEEP_PER_LOGIC: u64 = 300;

/// Largest `|τ(φ)| / |φ|`: the `<*>` clause adds eight nodes.
const TAU_FACTOR: usize = 8;
/// `|ω(φ)| ≤ 2|φ|² + 5|φ| ≤ 7|φ|²`.
const OMEGA_FACTOR: usize = 7;
/// `|ι(φ)| ≤ 4|φ|² + 6|φ| + 1 ≤ 11|φ|²`.
const IOTA_FACTOR: usize = 11;

/// Evidence shared by the closure-bound and certification criteria.
#[derive(Default)]
struct Ledger {
    invalid: usize,
    certified: usize,
    over_bound: Vec<String>,
    cert_failures: Vec<String>,
}

impl Ledger {
    fn record(&mut self, logic: Logic, query: &Query, verdict: &Verdict) {
        let Some(c) = verdict.countermodel() else {
            return;
        };
        self.invalid += 1;
        match common::recertify(logic, query, verdict) {
            Ok(()) => self.certified += 1,
            Err(e) => self.cert_failures.push(e),
        }
        if !common::within_closure_bound(c.model.worlds(), c.closure_size)
            || !common::within_closure_bound(c.solver_worlds, c.closure_size)
        {
            self.over_bound.push(format!(
                "{logic} {query:?}: {} worlds, closure {}",
                c.model.worlds(),
                c.closure_size
            ));
        }
    }
}

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, detail: impl AsRef<str>) {
        if !ok {
            self.failed += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} {id}: {}", detail.as_ref());
    }
}

fn first<T: std::fmt::Debug>(items: &[T]) -> String {
    match items.first() {
        Some(x) => format!("; first: {x:?}"),
        None => String::new(),
    }
}

fn con(s: &str) -> Formula {
    parse_constructive(s).expect("golden formula parses")
}

// ---------------------------------------------------------------------------

fn golden_table(report: &mut Report, ledger: &mut Ledger) {
    let mut rows: Vec<(Logic, Query, bool)> = vec![
        (Logic::WkStar, con("~<>false").into(), true),
        (Logic::CkStar, con("~<>false").into(), false),
        (
            Logic::CkStar,
            con("[](p -> q) -> ([]p -> []q)").into(),
            true,
        ),
        (
            Logic::CkStar,
            con("[](p -> q) -> (<>p -> <>q)").into(),
            true,
        ),
        (Logic::CkStar, con("[*]p -> [*][*]p").into(), true),
        (Logic::CkStar, con("<*><*>p -> <*>p").into(), true),
    ];
    for s in ["[]p -> [][]p", "<><>p -> <>p"] {
        let f = con(s);
        rows.push((Logic::Cs4, f.clone().into(), true));
        rows.push((Logic::CkStar, kappa(&f).expect("in L").into(), true));
    }
    let unfold = parse_pdl("[a*]p -> [a][a*]p").expect("K* formula parses");
    rows.push((Logic::KStar, unfold.clone().into(), true));
    rows.push((
        Logic::CkStarBox,
        iota(&unfold).expect("K* formula").into(),
        true,
    ));

    let start = Instant::now();
    let mut verdicts = Vec::new();
    let mut problems = Vec::new();
    for (logic, query, _) in &rows {
        match decide(*logic, query) {
            Ok(v) => verdicts.push(Some(v)),
            Err(e) => {
                problems.push(format!("{logic}: {e}"));
                verdicts.push(None);
            }
        }
    }
    let elapsed = start.elapsed();
    for ((logic, query, expected), v) in rows.iter().zip(&verdicts) {
        let Some(v) = v else { continue };
        if v.is_valid() != *expected {
            problems.push(format!("{logic} {query:?}: valid = {}", v.is_valid()));
        }
        ledger.record(*logic, query, v);
    }
    // kappa must not change a verdict: cs4 on the axiom, ck_star on its image
    for pair in verdicts[6..10].chunks(2) {
        if let [Some(a), Some(b)] = pair {
            if a.is_valid() != b.is_valid() {
                problems.push("kappa changed a verdict".into());
            }
        }
    }
    let fast = elapsed < Duration::from_secs(1);
    report.line(
        "golden decision table",
        problems.is_empty() && fast,
        format!(
            "{} rows in {:.3}s{}",
            rows.len(),
            elapsed.as_secs_f64(),
            first(&problems)
        ),
    );
}

// ---------------------------------------------------------------------------

#[derive(Default)]
struct SizeStats {
    checked: usize,
    tau_ratio: f64,
    omega_ratio: f64,
    iota_ratio: f64,
    violations: Vec<String>,
}

impl SizeStats {
    fn constructive(&mut self, f: &Formula) {
        let n = f.size();
        let t = tau(f).size();
        let o = omega_of(f).expect("no p_bot").size();
        self.checked += 1;
        self.tau_ratio = self.tau_ratio.max(t as f64 / n as f64);
        self.omega_ratio = self.omega_ratio.max(o as f64 / (n * n) as f64);
        if t > TAU_FACTOR * n {
            self.violations
                .push(format!("tau {f:?}: {t} > {TAU_FACTOR}*{n}"));
        }
        if o > 2 * n * n + 5 * n || o > OMEGA_FACTOR * n * n {
            self.violations.push(format!("omega {f:?}: {o}"));
        }
    }

    fn classical(&mut self, f: &PdlFormula) {
        let n = f.size();
        let i = iota(f).expect("K* formula").size();
        self.checked += 1;
        self.iota_ratio = self.iota_ratio.max(i as f64 / (n * n) as f64);
        if i > 4 * n * n + 6 * n + 1 || i > IOTA_FACTOR * n * n {
            self.violations.push(format!("iota {f:?}: {i}"));
        }
    }
}

fn oracle_equivalence(report: &mut Report, ledger: &mut Ledger, sizes: &mut SizeStats) {
    let start = Instant::now();
    let atoms: Vec<String> = common::ATOMS.iter().map(|s| s.to_string()).collect();
    let oracles = [
        (
            Logic::CkStar,
            Oracle::new(ModelKind::Ck, ORACLE_WORLDS).expect("small bound"),
        ),
        (
            Logic::WkStar,
            Oracle::new(ModelKind::Wk, ORACLE_WORLDS).expect("small bound"),
        ),
    ];
    let mut formulas = 0usize;
    let mut valid = [0usize; 2];
    let mut small_invalid = 0usize;
    let mut problems = Vec::new();
    for n in 1..=CORPUS_NODES {
        for f in common::formulas_of_size(n, &common::ATOMS) {
            formulas += 1;
            sizes.constructive(&f);
            let query = Query::Constructive(f.clone());
            let mut verdict_pair = [None, None];
            for (k, (logic, oracle)) in oracles.iter().enumerate() {
                let v = match decide(*logic, &query) {
                    Ok(v) => v,
                    Err(e) => {
                        problems.push(format!("{logic} {f:?}: {e}"));
                        continue;
                    }
                };
                ledger.record(*logic, &query, &v);
                verdict_pair[k] = Some(v.is_valid());
                match v.countermodel() {
                    None => {
                        valid[k] += 1;
                        if let BoundedVerdict::Invalid { model, world } = oracle.decide(&f, &atoms)
                        {
                            problems.push(format!(
                                "{logic} {f:?}: solver valid, oracle refutes at world {world} of {model:?}"
                            ));
                        }
                    }
                    Some(c) if c.model.worlds() <= ORACLE_WORLDS => {
                        small_invalid += 1;
                        match oracle.decide(&f, &atoms) {
                            BoundedVerdict::Invalid { model, .. } => {
                                if model.worlds > c.model.worlds() {
                                    problems.push(format!(
                                        "{logic} {f:?}: oracle's first countermodel is larger than the solver's"
                                    ));
                                }
                            }
                            _ => problems.push(format!(
                                "{logic} {f:?}: solver countermodel with {} worlds, oracle finds none",
                                c.model.worlds()
                            )),
                        }
                    }
                    Some(_) => {}
                }
            }
            let box_only = f.in_fragment(FragmentTag::LStarBox);
            if let [Some(ck), Some(wk)] = verdict_pair {
                if box_only && ck != wk {
                    problems.push(format!("box-only {f:?}: ck_star {ck}, wk_star {wk}"));
                }
            }
        }
    }
    report.line(
        "oracle equivalence",
        problems.is_empty(),
        format!(
            "{formulas} formulas over {{p,q}} with <= {CORPUS_NODES} nodes; valid ck_star {} / wk_star {}; \
             {small_invalid} small countermodels matched; {} disagreements in {:.1}s{}",
            valid[0],
            valid[1],
            problems.len(),
            start.elapsed().as_secs_f64(),
            first(&problems)
        ),
    );
}

// ---------------------------------------------------------------------------

fn truth_preservation(report: &mut Report) {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for (k, prop) in PROPERTIES.iter().enumerate() {
        let mut comparisons = 0usize;
        let mut failed = 0usize;
        for i in 0..PROPERTY_INSTANCES {
            let seed = (k as u64) << 32 | i;
            let formula_seed = seed ^ 0x9e37_79b9_7f4a_7c15;
            let depth = 2 + (i % 3) as usize;
            let outcome = match prop.check {
                Check::Constructive(tag, check) => check(
                    seed,
                    &random_formula(formula_seed, depth, &common::ATOMS, tag),
                ),
                Check::Classical(check) => check(
                    seed,
                    &random_kstar_formula(formula_seed, depth, &common::ATOMS),
                ),
            };
            match outcome {
                Ok(c) => comparisons += c,
                Err(e) => {
                    failed += 1;
                    if failures.len() < 3 {
                        failures.push(format!("{}: {e}", prop.name));
                    }
                }
            }
        }
        if comparisons == 0 {
            failures.push(format!("{}: no comparison was made", prop.name));
        }
        summary.push(format!(
            "{} ({comparisons} checks, {failed} failures)",
            prop.name
        ));
    }
    for s in &summary {
        println!("    {s}");
    }
    report.line(
        "truth preservation",
        failures.is_empty(),
        format!(
            "{} properties x {PROPERTY_INSTANCES} random instances in {:.1}s{}",
            PROPERTIES.len(),
            start.elapsed().as_secs_f64(),
            first(&failures)
        ),
    );
}

// ---------------------------------------------------------------------------

fn size_bounds(report: &mut Report, sizes: &mut SizeStats) {
    for f in common::kstar_corpus(CORPUS_NODES + 1, &common::ATOMS) {
        sizes.classical(&f);
    }
    for seed in 0..DEEP_FORMULAS {
        sizes.constructive(&random_formula(seed, 8, &common::ATOMS, FragmentTag::LStar));
        sizes.classical(&random_kstar_formula(seed, 8, &common::ATOMS));
    }
    report.line(
        "size bounds",
        sizes.violations.is_empty(),
        format!(
            "{} formulas; |tau| <= {TAU_FACTOR}|f| (max ratio {:.2}), |omega| <= {OMEGA_FACTOR}|f|^2 \
             (max {:.2}), |iota| <= {IOTA_FACTOR}|f|^2 (max {:.2}){}",
            sizes.checked,
            sizes.tau_ratio,
            sizes.omega_ratio,
            sizes.iota_ratio,
            first(&sizes.violations)
        ),
    );
}

// ---------------------------------------------------------------------------

/// Random queries for every logic, so that certification covers all seven
/// pipelines and not only the two the corpus exercises.
fn certification_sweep(ledger: &mut Ledger) -> Vec<String> {
    let mut errors = Vec::new();
    for logic in Logic::ALL {
        for seed in 0..SWEEP_PER_LOGIC {
            let depth = 2 + (seed % 3) as usize;
            let query: Query = match logic {
                Logic::CkStar | Logic::WkStar => {
                    random_formula(seed, depth, &common::ATOMS, FragmentTag::LStar).into()
                }
                Logic::CkStarBox => {
                    random_formula(seed, depth, &common::ATOMS, FragmentTag::LStarBox).into()
                }
                Logic::Cs4 | Logic::Ws4 => {
                    random_formula(seed, depth, &common::ATOMS, FragmentTag::L).into()
                }
                Logic::KStar => random_kstar_formula(seed, depth, &common::ATOMS).into(),
                Logic::Pdl => random_pdl_formula(
                    seed,
                    depth,
                    &common::ATOMS,
                    &[ProgramAtom::I, ProgramAtom::M, ProgramAtom::A],
                )
                .into(),
            };
            match decide(logic, &query) {
                Ok(v) => ledger.record(logic, &query, &v),
                Err(e) => errors.push(format!("{logic} {query:?}: {e}")),
            }
        }
    }
    errors
}

fn main() -> ExitCode {
    let mut report = Report { failed: 0 };
    let mut ledger = Ledger::default();
    let mut sizes = SizeStats::default();

    golden_table(&mut report, &mut ledger);
    let golden_invalid = ledger.invalid;
    oracle_equivalence(&mut report, &mut ledger, &mut sizes);
    let bound_invalid = ledger.invalid;
    let bound_failures = ledger.over_bound.len();
    truth_preservation(&mut report);
    size_bounds(&mut report, &mut sizes);

    report.line(
        "exponential model property",
        bound_failures == 0 && bound_invalid > 0,
        format!(
            "{bound_invalid} countermodels from the golden table ({golden_invalid}) and the oracle corpus \
             have at most 2^|closure| worlds{}",
            first(&ledger.over_bound)
        ),
    );

    let sweep_errors = certification_sweep(&mut ledger);
    let all_certified = ledger.cert_failures.is_empty()
        && sweep_errors.is_empty()
        && ledger.certified == ledger.invalid;
    report.line(
        "self-certification",
        all_certified,
        format!(
            "{}/{} invalid verdicts re-verified by the model checker and validators \
             (including a sweep of {SWEEP_PER_LOGIC} random queries per logic){}{}",
            ledger.certified,
            ledger.invalid,
            first(&ledger.cert_failures),
            first(&sweep_errors)
        ),
    );

    if report.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
