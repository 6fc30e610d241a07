use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;
use std::thread;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mastermodal::oracle::{
    brute_force_decide, brute_force_decide_pdl, model_kind, random_formula, random_kstar_formula,
    random_model, BoundedVerdict, EnumSpec,
};
use mastermodal::relmodel::{dump_model, load_model, validate, AnyModel, ModelKind};
use mastermodal::semantics::{pdl_satisfies, satisfies};
use mastermodal::solver::{decide, Logic, Query, Verdict};
use mastermodal::syntax::{
    parse_constructive, parse_formula, parse_pdl, render, FragmentTag, ParseError,
};
use mastermodal::translate::{iota, kappa, omega_of, tau};
use mastermodal::Error;

/// Validity, translations and countermodels for constructive modal logics
/// with a master modality.
#[derive(Parser)]
#[command(name = "mastermodal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide validity; prints a JSON verdict.
    Decide {
        #[arg(long)]
        logic: Logic,
        /// Treat the input as a file of formulas, one per line; prints JSON lines.
        #[arg(long)]
        batch: bool,
        /// Worker threads for batch mode.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// A formula, `@path` to read it from a file, or `-` for stdin.
        input: String,
    },
    /// Apply a translation and print the result.
    Translate {
        #[arg(long)]
        map: Map,
        input: String,
    },
    /// Evaluate a formula at a world of a model file.
    Eval {
        #[arg(long)]
        model: String,
        #[arg(long)]
        world: usize,
        input: String,
    },
    /// Check a model file against the conditions of a model class.
    CheckModel {
        #[arg(long)]
        kind: ModelKind,
        file: String,
    },
    /// Search all small models for a countermodel.
    Oracle {
        #[arg(long)]
        logic: Logic,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        /// Lift the four-world cap.
        #[arg(long)]
        allow_large: bool,
        input: String,
    },
    /// Draw a random formula or model.
    Sample {
        #[command(subcommand)]
        what: Sample,
    },
}

#[derive(Subcommand)]
enum Sample {
    Formula {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Fragment::Full)]
        fragment: Fragment,
    },
    Model {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        kind: ModelKind,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Map {
    Omega,
    Tau,
    Iota,
    Kappa,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fragment {
    Full,
    BoxOnly,
    StarFree,
    Kstar,
}

/// A failure to report on stderr with exit code 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decide {
            logic,
            batch,
            jobs,
            input,
        } => {
            if batch {
                decide_batch(logic, &input, jobs)
            } else {
                decide_one(logic, &input)
            }
        }
        Command::Translate { map, input } => translate(map, &input),
        Command::Eval {
            model,
            world,
            input,
        } => eval(&model, world, &input),
        Command::CheckModel { kind, file } => check_model(kind, &file),
        Command::Oracle {
            logic,
            max_worlds,
            allow_large,
            input,
        } => oracle(logic, max_worlds, allow_large, &input),
        Command::Sample { what } => sample(what),
    };
    result.unwrap_or_else(|Failure(msg)| {
        eprintln!("error: {msg}");
        ExitCode::from(2)
    })
}

fn read_input(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn formula_text(arg: &str) -> Result<String, Failure> {
    Ok(read_input(arg)?.trim().to_string())
}

fn verdict_code(valid: bool) -> ExitCode {
    if valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print(v: &Value) {
    println!("{v}");
}

fn decide_one(logic: Logic, input: &str) -> Outcome {
    let query = logic.parse(&formula_text(input)?)?;
    let verdict = decide(logic, &query)?;
    print(&verdict.to_json());
    Ok(verdict_code(verdict.is_valid()))
}

fn decide_line(logic: Logic, text: &str) -> Result<Verdict, Error> {
    decide(logic, &logic.parse(text)?)
}

fn decide_batch(logic: Logic, input: &str, jobs: usize) -> Outcome {
    let text = read_input(input)?;
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let jobs = jobs.max(1);
    let chunk = lines.len().div_ceil(jobs).max(1);
    let results: Vec<Result<Verdict, Error>> = thread::scope(|s| {
        let handles: Vec<_> = lines
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|(_, l)| decide_line(logic, l))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let (mut invalid, mut errors) = (false, false);
    for ((line, formula), result) in lines.iter().zip(results) {
        let mut out = json!({"line": line, "formula": formula});
        match result {
            Ok(v) => {
                invalid |= !v.is_valid();
                if let (Value::Object(o), Value::Object(extra)) = (&mut out, v.to_json()) {
                    o.extend(extra);
                }
            }
            Err(e) => {
                errors = true;
                eprintln!("line {line}: {e}");
                out["error"] = json!(e.to_string());
            }
        }
        print(&out);
    }
    Ok(if errors {
        ExitCode::from(2)
    } else {
        verdict_code(!invalid)
    })
}

fn translate(map: Map, input: &str) -> Outcome {
    let text = formula_text(input)?;
    let (name, output) = match map {
        Map::Omega => ("omega", render(&omega_of(&parse_constructive(&text)?)?)),
        Map::Tau => ("tau", render(&tau(&parse_formula(&text)?))),
        Map::Iota => ("iota", render(&iota(&parse_pdl(&text)?)?)),
        Map::Kappa => ("kappa", render(&kappa(&parse_formula(&text)?)?)),
    };
    print(&json!({"map": name, "formula": output}));
    Ok(ExitCode::SUCCESS)
}

fn eval(model: &str, world: usize, input: &str) -> Outcome {
    let doc =
        load_model(&fs::read_to_string(model).map_err(|e| Failure(format!("{model}: {e}")))?)?;
    let text = formula_text(input)?;
    let holds = match &doc {
        AnyModel::Bi { model, .. } => satisfies(model, world, &parse_formula(&text)?)?,
        AnyModel::Pdl(m) => pdl_satisfies(m, world, &parse_pdl(&text)?)?,
    };
    print(&json!({"world": world, "holds": holds}));
    Ok(verdict_code(holds))
}

fn check_model(kind: ModelKind, file: &str) -> Outcome {
    let doc = load_model(&fs::read_to_string(file).map_err(|e| Failure(format!("{file}: {e}")))?)?;
    let AnyModel::Bi { model, .. } = doc else {
        return Err(Failure("check-model expects a birelational model".into()));
    };
    let violations = validate(&model, kind);
    let list: Vec<Value> = violations
        .iter()
        .map(|v| {
            let mut o = json!({"condition": v.condition.name(), "witness": v.witness});
            if let Some(a) = &v.atom {
                o["atom"] = json!(a);
            }
            o
        })
        .collect();
    for v in &violations {
        eprintln!("{v}");
    }
    print(&json!({"kind": kind.name(), "ok": list.is_empty(), "violations": list}));
    Ok(verdict_code(violations.is_empty()))
}

fn oracle(logic: Logic, max_worlds: usize, allow_large: bool, input: &str) -> Outcome {
    let query = logic.parse(&formula_text(input)?)?;
    let kind = model_kind(logic).unwrap_or(ModelKind::Ck);
    let result = match &query {
        Query::Constructive(f) => {
            let mut spec = EnumSpec::new(max_worlds, f.variables(), kind);
            spec.allow_large = allow_large;
            brute_force_decide(logic, f, &spec)?
        }
        Query::Classical(f) => {
            let mut spec = EnumSpec::new(max_worlds, f.variables(), kind);
            spec.allow_large = allow_large;
            brute_force_decide_pdl(logic, f, &spec)?
        }
    };
    let out = match &result {
        BoundedVerdict::ValidUpToBound { max_worlds, models } => json!({
            "verdict": "valid-up-to-bound",
            "max_worlds": max_worlds,
            "models": models,
        }),
        BoundedVerdict::Invalid { model, world } => json!({
            "verdict": "invalid",
            "world": world,
            "model": AnyModel::Bi { kind, model: model.clone() }.to_json(),
        }),
        BoundedVerdict::InvalidPdl { model, world } => json!({
            "verdict": "invalid",
            "world": world,
            "model": AnyModel::Pdl(model.clone()).to_json(),
        }),
    };
    print(&out);
    Ok(verdict_code(result.is_valid()))
}

fn sample(what: Sample) -> Outcome {
    let atoms = ["p", "q"];
    match what {
        Sample::Formula {
            seed,
            depth,
            fragment,
        } => {
            let text = match fragment {
                Fragment::Kstar => render(&random_kstar_formula(seed, depth, &atoms)),
                other => {
                    let tag = match other {
                        Fragment::Full => FragmentTag::LStar,
                        Fragment::BoxOnly => FragmentTag::LStarBox,
                        _ => FragmentTag::L,
                    };
                    render(&random_formula(seed, depth, &atoms, tag))
                }
            };
            print(&json!({"formula": text}));
        }
        Sample::Model {
            seed,
            kind,
            max_worlds,
        } => {
            let m = random_model(seed, &EnumSpec::new(max_worlds, atoms, kind));
            println!("{}", dump_model(&AnyModel::Bi { kind, model: m }));
        }
    }
    Ok(ExitCode::SUCCESS)
}
