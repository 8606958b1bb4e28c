//! The `chow` command-line front end.
//!
//! Every command prints a text report, or a JSON document with `--json`.
//! Exit status: 0 when the computation succeeds and its checks pass, 1 when a
//! check fails, 2 on bad input.

pub mod expr;
pub mod presets;
pub mod scenario;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::divisor_model::{
    projectors_via_formula, split_antisym, split_antisym_via_formula, sym_antisym_projectors, PicClass,
};
use crate::fourier::{check_inversion, dual_fourier, fourier, poincare_class, FourierError};
use crate::orbit::{
    certify, default_max_rounds, orbit_span, step3_pipeline_with, OrbitError, Step3Options, SymCycle,
};
use crate::semigroup::{affine_pullback, normalize, word_pullback};
use expr::{format_class, parse_class};
use scenario::{int_to_json, matrix_to_json, parse_scenario, ErrorCode, InputError, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "chow",
    version,
    about = "Exact orbit spans of cycles on model abelian varieties"
)]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Scenario file (JSON).
    pub scenario: Option<PathBuf>,
    /// Use a built-in scenario instead of a file.
    #[arg(long, conflicts_with = "scenario")]
    pub preset: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check F̂∘F = (−1)^g [−1]^* on every basis class of Λ(Q^{2g}).
    VerifyFm {
        #[arg(long, default_value_t = 2)]
        g: usize,
    },
    /// Apply the Fourier transform to a class such as "e1^e2 - 2 e3".
    Fourier {
        #[arg(long)]
        g: usize,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        /// Transform a class on the dual (generators f1..f2g) back to A.
        #[arg(long)]
        dual: bool,
    },
    /// Split the scenario's divisor class into symmetric and antisymmetric parts.
    Split {
        #[command(flatten)]
        source: Source,
    },
    /// Rewrite a word over the generators as x ↦ F(x) + c.
    Normalize {
        #[command(flatten)]
        source: Source,
        /// Word such as "e1 t2^-3" (defaults to options.word).
        #[arg(long)]
        word: Option<String>,
    },
    /// Span of the orbit of the scenario's cycle under its generators.
    OrbitSpan {
        #[command(flatten)]
        source: Source,
        /// Random words to check against the span.
        #[arg(long, default_value_t = 50)]
        certify: usize,
    },
    /// Orbit of the Poincaré class on A × Â and the spans of its powers.
    DemoStep3 {
        #[command(flatten)]
        source: Source,
        /// Highest power of l to span (default 2g).
        #[arg(long)]
        max_power: Option<usize>,
    },
    /// List the built-in scenarios, or print one as JSON.
    Presets {
        #[arg(long)]
        show: Option<String>,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub passed: bool,
    pub input: Value,
    pub result: Value,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    match execute(&cli.command) {
        Ok(report) => {
            let elapsed = start.elapsed().as_secs_f64() * 1000.0;
            let stdout = if cli.json {
                let mut doc = json!({
                    "command": report.command,
                    "status": if report.passed { "pass" } else { "fail" },
                    "input": report.input,
                    "result": report.result,
                });
                if cli.timing {
                    doc["timing_ms"] = json!((elapsed * 1000.0).round() / 1000.0);
                }
                scenario::to_pretty(&doc) + "\n"
            } else {
                let mut t = report.text;
                if cli.timing {
                    let _ = writeln!(t, "elapsed: {elapsed:.3} ms");
                }
                t
            };
            Outcome {
                code: if report.passed { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => {
            let stderr = if cli.json {
                scenario::to_pretty(&json!({
                    "error": {"code": e.code.as_str(), "message": e.message}
                })) + "\n"
            } else {
                format!("error: {e}\n")
            };
            Outcome {
                code: 2,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    let out = run_args(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

fn load(source: &Source) -> Result<(Value, Scenario), InputError> {
    match (&source.scenario, &source.preset) {
        (Some(path), None) => {
            let bytes = std::fs::read(path)
                .map_err(|e| InputError::new(ErrorCode::Io, format!("{}: {e}", path.display())))?;
            Ok((json!(path.display().to_string()), parse_scenario(&bytes)?))
        }
        (None, Some(name)) => Ok((json!(format!("preset:{name}")), presets::preset(name)?)),
        _ => Err(InputError::new(
            ErrorCode::Schema,
            "give a scenario file or --preset NAME",
        )),
    }
}

fn echo(source: Value, s: &Scenario) -> Value {
    json!({"source": source, "scenario": s.to_json()})
}

fn orbit_input_error(e: OrbitError) -> InputError {
    InputError::new(ErrorCode::Shape, e.to_string())
}

fn fourier_input_error(e: FourierError) -> InputError {
    InputError::new(ErrorCode::Unsupported, e.to_string())
}

fn execute(cmd: &Command) -> Result<Report, InputError> {
    match cmd {
        Command::VerifyFm { g } => verify_fm(*g),
        Command::Fourier { g, class, dual } => fourier_cmd(*g, class, *dual),
        Command::Split { source } => split(source),
        Command::Normalize { source, word } => normalize_cmd(source, word.as_deref()),
        Command::OrbitSpan { source, certify } => orbit_cmd(source, *certify),
        Command::DemoStep3 { source, max_power } => step3_cmd(source, *max_power),
        Command::Presets { show } => presets_cmd(show.as_deref()),
    }
}

fn verify_fm(g: usize) -> Result<Report, InputError> {
    let r = check_inversion(g).map_err(fourier_input_error)?;
    let total = r.entries.len();
    let failures: Vec<Value> = r
        .failures()
        .map(|e| {
            json!({
                "basis": format_class(&e.basis),
                "image": format_class(&e.image),
                "expected": format_class(&e.expected),
            })
        })
        .collect();
    let ok = total - failures.len();
    let text = format!(
        "Fourier-Mukai inversion, g = {g}: {ok}/{total} basis classes satisfy F^(F(b)) = (-1)^{g} [-1]^* b\n{}\n",
        if r.passed { "PASS" } else { "FAIL" }
    );
    Ok(Report {
        command: "verify-fm",
        passed: r.passed,
        input: json!({"g": g}),
        result: json!({"g": g, "basis_size": total, "passed": ok, "failures": failures}),
        text,
    })
}

fn fourier_cmd(g: usize, src: &str, dual: bool) -> Result<Report, InputError> {
    let ctx = poincare_class(g).map_err(fourier_input_error)?;
    let ground = if dual { ctx.dual() } else { ctx.a() };
    let u =
        parse_class(src, ground).map_err(|e| InputError::new(ErrorCode::Syntax, format!("class: {e}")))?;
    let image = if dual {
        dual_fourier(&ctx, &u)
    } else {
        fourier(&ctx, &u)
    }
    .map_err(fourier_input_error)?;
    let mut by_degree = serde_json::Map::new();
    let mut text = format!(
        "{} {} =\n  {}\n",
        if dual { "F^" } else { "F" },
        format_class(&u),
        format_class(&image)
    );
    for k in image.degrees() {
        let part = format_class(&image.grade(k));
        let _ = writeln!(text, "  degree {k}: {part}");
        by_degree.insert(k.to_string(), json!(part));
    }
    Ok(Report {
        command: "fourier",
        passed: true,
        input: json!({"g": g, "class": src, "dual": dual}),
        result: json!({"class": format_class(&u), "image": format_class(&image), "by_degree": by_degree}),
        text,
    })
}

fn class_json(d: &PicClass) -> Value {
    json!({"ns": matrix_to_json(d.ns.matrix()), "pic0": matrix_to_json(d.alg0.matrix())})
}

fn split(source: &Source) -> Result<Report, InputError> {
    let (src, s) = load(source)?;
    let d = s.class()?;
    let (sym, anti) = sym_antisym_projectors(d);
    let (sym_f, anti_f) =
        projectors_via_formula(d).map_err(|e| InputError::new(ErrorCode::Shape, e.to_string()))?;
    let phi = split_antisym_via_formula(d).map_err(|e| InputError::new(ErrorCode::Shape, e.to_string()))?;
    let stored = split_antisym(d);
    let agrees = sym == sym_f && anti == anti_f && phi.alg0 == stored && phi.ns.matrix().is_zero();
    let text = format!(
        "class:          N = {}, c = {}\nsymmetric:      N = {}, c = {}\nantisymmetric:  N = {}, c = {}\nformula check:  {}\n",
        d.ns.matrix(),
        d.alg0.matrix(),
        sym.ns.matrix(),
        sym.alg0.matrix(),
        anti.ns.matrix(),
        anti.alg0.matrix(),
        if agrees { "PASS" } else { "FAIL" }
    );
    Ok(Report {
        command: "split",
        passed: agrees,
        input: echo(src, &s),
        result: json!({"symmetric": class_json(&sym), "antisymmetric": class_json(&anti), "formula_agrees": agrees}),
        text,
    })
}

fn normalize_cmd(source: &Source, word: Option<&str>) -> Result<Report, InputError> {
    let (src, s) = load(source)?;
    let gens = s.generator_set()?;
    let w = s.word(word)?;
    let h = normalize(&w, &gens)?;
    let shifted = h
        .to_shifted_endo()
        .map_err(|e| InputError::new(ErrorCode::Shape, e.to_string()))?;
    let mut result = json!({
        "word": w.to_string(),
        "linear": matrix_to_json(h.linear.matrix()),
        "shift": matrix_to_json(h.shift.matrix()),
        "shifted_form": shifted.as_ref().map(|(f, b)| json!({"endo": matrix_to_json(f.matrix()), "point": matrix_to_json(b.matrix())})),
    });
    let mut text = format!(
        "word:   {}\nmap:    x -> F x + c\nF:      {}\nc:      {}\n",
        if w.is_empty() {
            "(empty)".to_string()
        } else {
            w.to_string()
        },
        h.linear.matrix(),
        h.shift.matrix()
    );
    match &shifted {
        Some((_, b)) => {
            let _ = writeln!(text, "as f o t_b with b = {}", b.matrix());
        }
        None => text.push_str("c is not in the image of F; no f o t_b form\n"),
    }
    let mut passed = true;
    if let Ok(d) = s.class() {
        let lhs = word_pullback(&w, &gens, d)?;
        let rhs = affine_pullback(&h, d).map_err(|e| InputError::new(ErrorCode::Shape, e.to_string()))?;
        passed = lhs == rhs;
        result["pullback"] = class_json(&rhs);
        result["pullback_agrees"] = json!(passed);
        let _ = writeln!(
            text,
            "pullback of the cycle: N = {}, c = {}\nletter-by-letter check: {}",
            rhs.ns.matrix(),
            rhs.alg0.matrix(),
            if passed { "PASS" } else { "FAIL" }
        );
    }
    Ok(Report {
        command: "normalize",
        passed,
        input: echo(src, &s),
        result,
        text,
    })
}

fn cycle_json(x: &SymCycle) -> Value {
    Value::Array(
        x.terms()
            .map(|(m, c)| json!([m.indices(), [int_to_json(c.numer()), int_to_json(c.denom())]]))
            .collect(),
    )
}

fn big(n: u128) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn orbit_cmd(source: &Source, n_words: usize) -> Result<Report, InputError> {
    let (src, s) = load(source)?;
    let gens = s.generator_set()?;
    let x = s.sym_cycle()?;
    let rounds = s.options.max_rounds.unwrap_or_else(|| default_max_rounds(&x));
    let report = match orbit_span(&gens, &x, rounds) {
        Ok(r) => r,
        Err(OrbitError::NotConverged { rounds, dimension }) => {
            return Ok(Report {
                command: "orbit-span",
                passed: false,
                input: echo(src, &s),
                result: json!({"converged": false, "rounds": rounds, "dimension_so_far": dimension}),
                text: format!("not converged after {rounds} rounds (dimension so far {dimension})\nFAIL\n"),
            })
        }
        Err(e) => return Err(orbit_input_error(e)),
    };
    let invariant = report
        .is_invariant_under(&gens.letters())
        .map_err(orbit_input_error)?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed());
    let cert = certify(&mut rng, &gens, &x, &report, n_words, 8).map_err(orbit_input_error)?;
    let passed = invariant && cert.passed() && report.dimension as u128 <= report.ambient_dimension;
    let mut text = format!(
        "orbit span: dimension {} (ambient {}), {} rounds, {} generator applications\nbasis:\n",
        report.dimension, report.ambient_dimension, report.rounds, report.generators_applied
    );
    for (i, v) in report.basis.iter().enumerate() {
        let _ = writeln!(text, "  [{}] {}", i + 1, v);
    }
    let _ = writeln!(
        text,
        "invariant under generators: {}",
        if invariant { "yes" } else { "no" }
    );
    let _ = writeln!(
        text,
        "soundness: {}/{} random words (seed {}) land in the span",
        cert.words_checked - cert.failures.len(),
        cert.words_checked,
        s.seed()
    );
    text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    Ok(Report {
        command: "orbit-span",
        passed,
        input: echo(src, &s),
        result: json!({
            "converged": true,
            "dimension": report.dimension,
            "ambient_dimension": big(report.ambient_dimension),
            "rounds": report.rounds,
            "generators_applied": report.generators_applied,
            "basis": report.basis.iter().map(cycle_json).collect::<Vec<_>>(),
            "basis_text": report.basis.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "invariant": invariant,
            "certificate": {"seed": s.seed(), "words_checked": cert.words_checked, "failures": cert.failures},
        }),
        text,
    })
}

fn step3_cmd(source: &Source, max_power: Option<usize>) -> Result<Report, InputError> {
    let (src, s) = load(source)?;
    let gens = s.generator_set()?;
    let opts = Step3Options {
        max_power,
        degree: None,
    };
    let r = match step3_pipeline_with(&gens, opts) {
        Ok(r) => r,
        Err(OrbitError::NotConverged { rounds, dimension }) => {
            return Ok(Report {
                command: "demo-step3",
                passed: false,
                input: echo(src, &s),
                result: json!({"converged": false, "rounds": rounds, "dimension_so_far": dimension}),
                text: format!("not converged after {rounds} rounds (dimension so far {dimension})\nFAIL\n"),
            })
        }
        Err(e) => return Err(orbit_input_error(e)),
    };
    let passed = r.within_bounds();
    let p = r.product;
    let mut text = format!(
        "product A x A^ = E^{} (d = {}, rho = {}), {} lifted generators\n\
         Poincare class l: {}\n\
         orbit of l: dimension {} ({} rounds)\n",
        p.g(),
        p.d(),
        p.rho(),
        r.lifted.len(),
        r.poincare,
        r.orbit.dimension,
        r.orbit.rounds
    );
    for pw in &r.powers {
        let _ = writeln!(
            text,
            "  l^{}: span dimension {} <= C({} + {} - 1, {}) = {}",
            pw.n, pw.dimension, r.orbit.dimension, pw.n, pw.n, pw.bound
        );
    }
    text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    Ok(Report {
        command: "demo-step3",
        passed,
        input: echo(src, &s),
        result: json!({
            "converged": true,
            "product": {"g": p.g(), "d": p.d(), "rho": p.rho()},
            "poincare": cycle_json(&r.poincare),
            "dimension": r.orbit.dimension,
            "rounds": r.orbit.rounds,
            "basis": r.orbit.basis.iter().map(cycle_json).collect::<Vec<_>>(),
            "powers": r.powers.iter().map(|pw| json!({"n": pw.n, "bound": big(pw.bound), "dimension": pw.dimension})).collect::<Vec<_>>(),
            "within_bounds": passed,
        }),
        text,
    })
}

fn presets_cmd(show: Option<&str>) -> Result<Report, InputError> {
    match show {
        Some(name) => {
            let s = presets::preset(name)?;
            Ok(Report {
                command: "presets",
                passed: true,
                input: json!({"show": name}),
                result: s.to_json(),
                text: s.to_json_string() + "\n",
            })
        }
        None => Ok(Report {
            command: "presets",
            passed: true,
            input: json!({}),
            result: json!(presets::PRESETS),
            text: presets::PRESETS.join("\n") + "\n",
        }),
    }
}
