use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sigma_integral::classical::bridge_check;
use sigma_integral::congruence::CongruenceFrame;
use sigma_integral::decompose::{decompose, decompose_on_frame, DecompositionStep, DEFAULT_HORIZON};
use sigma_integral::document::{load_lattice, FunctionDoc, MeasureDoc, SpaceDoc};
use sigma_integral::integral::{integrate_general, SummabilityReport};
use sigma_integral::rational::format_rational;
use sigma_integral::real::CutFunction;
use sigma_integral::simple::SimpleFunction;
use sigma_integral::verify::{run_suite, SuiteSize, DEFAULT_SEED};
use sigma_integral::measure::Measure;
use sigma_integral::{Error, FiniteLattice};

#[derive(Parser)]
#[command(name = "sigma-integral", version, about = "Exact point-free integration on finite distributive lattices")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a lattice document, and optionally a measure and a function on it.
    Validate {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        measure: Option<PathBuf>,
        #[arg(long)]
        function: Option<PathBuf>,
    },
    /// List the congruences of L with their ∇/Δ labels.
    Congruences {
        #[arg(long)]
        lattice: PathBuf,
    },
    /// Print the canonical form of a simple function.
    Canonicalize {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// Print both cut ladders of a function.
    Eval {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// Integrate a function on C(L) against a measure on S(L).
    Integrate {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        function: PathBuf,
        /// Sublocale: L, void, open:a, closed:a, or a partition such as {0,x}{y,1}.
        #[arg(long, default_value = "L")]
        over: String,
    },
    /// Print S ↦ ∫_S g dμ on every sublocale and check the measure axioms.
    Indefinite {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// Trace the approximating simple functions f_1, …, f_K of a nonnegative function.
    Decompose {
        #[arg(long)]
        function: PathBuf,
        /// Defaults to the two-element chain.
        #[arg(long)]
        lattice: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        k: u32,
    },
    /// Compare the classical and the point-free integral on a finite measure space.
    Bridge {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        function: PathBuf,
        /// Measurable subset such as `x|y`; defaults to the whole space.
        #[arg(long)]
        over: Option<String>,
    },
    /// Run the seeded property suite.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run only these criteria (1–9).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        /// Append elapsed time to each line (breaks byte-identical output).
        #[arg(long)]
        timings: bool,
    },
}

/// A command failure and its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_undefined_operation() { 3 } else { 2 }, message: e.to_string() }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { code: 2, message: format!("cannot read {}: {e}", path.display()) })
}

fn lattice(path: &Path) -> Result<Arc<FiniteLattice>, Failure> {
    Ok(Arc::new(load_lattice(&read(path)?)?))
}

fn frame(l: &Arc<FiniteLattice>) -> Result<Arc<CongruenceFrame>, Failure> {
    Ok(Arc::new(CongruenceFrame::enumerate(l.clone())?))
}

fn function_doc(path: &Path) -> Result<FunctionDoc, Failure> {
    Ok(FunctionDoc::parse(&read(path)?)?)
}

/// Functions stay on `L` unless they mention congruences.
fn function_on(doc: &FunctionDoc, l: &Arc<FiniteLattice>) -> Result<CutFunction, Failure> {
    if doc.mentions_congruences() {
        Ok(doc.on_frame(&*frame(l)?)?)
    } else {
        Ok(doc.on_lattice(l)?)
    }
}

fn measure(path: &Path, frame: &Arc<CongruenceFrame>) -> Result<Measure, Failure> {
    Ok(MeasureDoc::parse(&read(path)?)?.build(frame.clone())?)
}

fn render(format: Format, text: String, value: Value) -> String {
    match format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&value).expect("json values serialize") + "\n",
    }
}

fn terms_json(g: &SimpleFunction) -> Value {
    let l = g.carrier();
    Value::Array(g.terms().iter().map(|(r, a)| json!([format_rational(r), l.name(*a)])).collect())
}

/// A constant prints as its value, anything else as its term list.
fn simple_text(g: &SimpleFunction) -> String {
    match g.terms() {
        [(r, a)] if *a == g.carrier().top() => format_rational(r),
        _ => g.to_string(),
    }
}

fn validate(format: Format, lattice_path: &Path, measure_path: Option<&Path>, function_path: Option<&Path>) -> Outcome {
    let l = lattice(lattice_path)?;
    let mut text = format!("lattice: ok ({} elements, distributive)\n", l.len());
    let mut report = json!({"lattice": {"ok": true, "elements": l.len()}});
    let needs_frame = measure_path.is_some() || function_path.is_some();
    let cf = if needs_frame { Some(frame(&l)?) } else { None };
    if let (Some(path), Some(cf)) = (measure_path, &cf) {
        measure(path, cf)?;
        text += "measure: ok ((M1)–(M3) hold on every pair of sublocales)\n";
        report["measure"] = json!({"ok": true});
    }
    if let Some(path) = function_path {
        let f = function_on(&function_doc(path)?, &l)?;
        let kind = if f.is_finite() { "finite" } else { "extended" };
        text += &format!("function: ok ({kind}, {} breakpoints)\n", f.breakpoints().len());
        report["function"] = json!({"ok": true, "finite": f.is_finite()});
    }
    Ok((render(format, text, report), 0))
}

fn congruences(format: Format, lattice_path: &Path) -> Outcome {
    let l = lattice(lattice_path)?;
    let cf = frame(&l)?;
    let c = cf.lattice();
    let mut text = format!("C(L): {} congruences\n", cf.len());
    let mut rows = Vec::new();
    for theta in c.elements() {
        let labels = cf.labels(theta);
        text += &format!("{}  {}\n", c.name(theta), labels.join(" "));
        rows.push(json!({"congruence": c.name(theta), "labels": labels}));
    }
    Ok((render(format, text, json!({"congruences": rows})), 0))
}

fn canonicalize(format: Format, lattice_path: &Path, function_path: &Path) -> Outcome {
    let l = lattice(lattice_path)?;
    let g = SimpleFunction::from_cut(&function_on(&function_doc(function_path)?, &l)?)?;
    Ok((render(format, format!("{g}\n"), json!({"terms": terms_json(&g)})), 0))
}

fn eval(format: Format, lattice_path: &Path, function_path: &Path) -> Outcome {
    let l = lattice(lattice_path)?;
    let f = function_on(&function_doc(function_path)?, &l)?;
    let (bp, upper, lower) = f.describe();
    let mut text = String::from("f(p,—):\n");
    for (i, e) in upper.iter().enumerate() {
        let range = match (i.checked_sub(1).map(|j| &bp[j]), bp.get(i)) {
            (None, None) => "every p".to_string(),
            (None, Some(t)) => format!("p < {t}"),
            (Some(s), Some(t)) => format!("{s} <= p < {t}"),
            (Some(s), None) => format!("p >= {s}"),
        };
        text += &format!("  {range}: {e}\n");
    }
    text += "f(—,q):\n";
    for (i, e) in lower.iter().enumerate() {
        let range = match (i.checked_sub(1).map(|j| &bp[j]), bp.get(i)) {
            (None, None) => "every q".to_string(),
            (None, Some(t)) => format!("q <= {t}"),
            (Some(s), Some(t)) => format!("{s} < q <= {t}"),
            (Some(s), None) => format!("q > {s}"),
        };
        text += &format!("  {range}: {e}\n");
    }
    let value = json!({"breakpoints": bp, "upper": upper, "lower": lower, "finite": f.is_finite()});
    Ok((render(format, text, value), 0))
}

fn integrate(format: Format, lattice_path: &Path, measure_path: &Path, function_path: &Path, over: &str) -> Outcome {
    let l = lattice(lattice_path)?;
    let cf = frame(&l)?;
    let mu = measure(measure_path, &cf)?;
    let f = function_doc(function_path)?.on_frame(&cf)?;
    let s = cf.sublocales().resolve(over)?;
    let zero = CutFunction::zero(f.carrier().clone());
    let positive = integrate_general(&f.join(&zero)?, &mu, s)?;
    let negative = integrate_general(&f.neg().join(&zero)?, &mu, s)?;
    let report = SummabilityReport::from_parts(positive, negative);
    let value = report
        .value()
        .ok_or_else(|| Failure::from(Error::NotIntegrable { over: cf.sublocales().name(s) }))?;
    let text = format!("{value}\n{}\n", report.classification);
    let json = json!({
        "over": cf.sublocales().name(s),
        "value": value.to_string(),
        "positive": report.positive.to_string(),
        "negative": report.negative.to_string(),
        "classification": report.classification.to_string(),
    });
    Ok((render(format, text, json), 0))
}

fn indefinite(format: Format, lattice_path: &Path, measure_path: &Path, function_path: &Path) -> Outcome {
    let l = lattice(lattice_path)?;
    let cf = frame(&l)?;
    let mu = measure(measure_path, &cf)?;
    let g = SimpleFunction::from_cut(&function_doc(function_path)?.on_frame(&cf)?)?;
    if !g.is_nonnegative() {
        return Err(Error::NotNonnegative.into());
    }
    let s = cf.sublocales();
    let mut values = Vec::new();
    let mut text = String::new();
    let mut rows = Vec::new();
    for t in s.elements() {
        let (v, _) = sigma_integral::integral::integrate_simple(&g, &mu, t)?;
        text += &format!("{}: {v}\n", s.name(t));
        rows.push(json!({"sublocale": s.name(t), "value": v.to_string()}));
        values.push(v);
    }
    let (axioms, code) = match Measure::validate(cf.clone(), values) {
        Ok(_) => ("ok".to_string(), 0),
        Err(e) => (e.to_string(), 2),
    };
    text += &format!("measure axioms: {axioms}\n");
    Ok((render(format, text, json!({"values": rows, "measure_axioms": axioms})), code))
}

fn decompose_cmd(format: Format, function_path: &Path, lattice_path: Option<&Path>, k: u32) -> Outcome {
    let l = match lattice_path {
        Some(p) => lattice(p)?,
        None => Arc::new(FiniteLattice::chain(&["0", "1"])?),
    };
    let doc = function_doc(function_path)?;
    let steps: Vec<DecompositionStep> = if doc.mentions_congruences() {
        let cf = frame(&l)?;
        decompose_on_frame(&cf, &doc.on_frame(&cf)?, k)?
    } else {
        decompose(&doc.on_lattice(&l)?, k)?
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for s in &steps {
        let carrier = s.f_k.carrier();
        let grid: Vec<String> = s.grid.iter().map(format_rational).collect();
        let mut flags = Vec::new();
        if !s.table_conforms {
            flags.push("table mismatch".to_string());
        }
        if !s.closed_form_agrees {
            flags.push("closed form mismatch".to_string());
        }
        if let Some(closed) = s.in_closed_image {
            flags.push(format!("closed congruence: {}", if closed { "yes" } else { "no" }));
        }
        text += &format!(
            "k = {}: a_{} = {}, grid = [{}], residual = {}{}\n",
            s.k,
            s.k,
            carrier.name(s.a_k),
            grid.join(", "),
            s.residual,
            if flags.is_empty() { String::new() } else { format!(" ({})", flags.join("; ")) }
        );
        text += &format!("f_{} = {}\n", s.k, simple_text(&s.f_k));
        rows.push(json!({
            "k": s.k,
            "a_k": carrier.name(s.a_k),
            "f_k": terms_json(&s.f_k),
            "grid": grid,
            "residual": s.residual.to_string(),
            "table_conforms": s.table_conforms,
            "closed_form_agrees": s.closed_form_agrees,
            "in_closed_image": s.in_closed_image,
        }));
    }
    Ok((render(format, text, json!({"steps": rows})), 0))
}

fn bridge(format: Format, space_path: &Path, function_path: &Path, over: Option<&str>) -> Outcome {
    let space = SpaceDoc::parse(&read(space_path)?)?.build()?;
    let f = function_doc(function_path)?.classical(&space)?;
    let over = match over {
        Some(text) => space.parse_set(text)?,
        None => space.full(),
    };
    let cf = frame(space.algebra())?;
    let report = bridge_check(&space, cf, &f, over)?;
    let show = |v: &Option<sigma_integral::Extended>| v.as_ref().map_or("undefined".to_string(), |v| v.to_string());
    let agrees = report.agrees();
    let text = format!(
        "classical: {} ({})\npoint-free: {} ({})\n{}\n",
        show(&report.classical_value),
        report.classical.classification,
        show(&report.localic_value),
        report.localic.classification,
        if agrees { "agree" } else { "DISAGREE" }
    );
    let json = json!({
        "over": space.name(over),
        "classical": {"value": show(&report.classical_value), "classification": report.classical.classification.to_string()},
        "point_free": {"value": show(&report.localic_value), "classification": report.localic.classification.to_string()},
        "agree": agrees,
    });
    Ok((render(format, text, json), if agrees { 0 } else { 1 }))
}

fn verify(format: Format, seed: u64, only: &[u32], timings: bool) -> Outcome {
    let reports = run_suite(seed, SuiteSize::default(), only)?;
    let mut text = format!("seed {seed}\n");
    let mut rows = Vec::new();
    for r in &reports {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        text += &format!("criterion {} ({}): {verdict}, {} cases, {} failures", r.id, r.title, r.cases, r.failure_count);
        if timings || !r.within_budget() {
            text += &format!(", {:.2} s", r.elapsed.as_secs_f64());
        }
        text += "\n";
        for f in &r.failures {
            text += &format!("  {f}\n");
        }
        let mut row = json!({
            "criterion": r.id,
            "title": r.title,
            "passed": r.passed(),
            "cases": r.cases,
            "failures": r.failure_count,
            "examples": r.failures,
        });
        if timings {
            row["seconds"] = json!(r.elapsed.as_secs_f64());
        }
        rows.push(row);
    }
    let all = reports.iter().all(|r| r.passed());
    Ok((render(format, text, json!({"seed": seed, "criteria": rows, "passed": all})), if all { 0 } else { 1 }))
}

fn run(cli: Cli) -> Outcome {
    let fmt = cli.format;
    match cli.command {
        Command::Validate { lattice, measure, function } => {
            validate(fmt, &lattice, measure.as_deref(), function.as_deref())
        }
        Command::Congruences { lattice } => congruences(fmt, &lattice),
        Command::Canonicalize { lattice, function } => canonicalize(fmt, &lattice, &function),
        Command::Eval { lattice, function } => eval(fmt, &lattice, &function),
        Command::Integrate { lattice, measure, function, over } => integrate(fmt, &lattice, &measure, &function, &over),
        Command::Indefinite { lattice, measure, function } => indefinite(fmt, &lattice, &measure, &function),
        Command::Decompose { function, lattice, k } => decompose_cmd(fmt, &function, lattice.as_deref(), k),
        Command::Bridge { space, function, over } => bridge(fmt, &space, &function, over.as_deref()),
        Command::Verify { seed, only, timings } => verify(fmt, seed, &only, timings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            match format {
                Format::Text => eprintln!("error: {}", f.message),
                Format::Json => println!("{}", json!({"error": f.message, "exit": f.code})),
            }
            ExitCode::from(f.code)
        }
    }
}
