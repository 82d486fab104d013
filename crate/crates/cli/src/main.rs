//! `lvaci`: exact integrability analysis of 3D skew-symmetric Lotka-Volterra
//! systems from the command line.
//!
//! Exit codes: analyze 0/3/4 (a.c.i. / not / degenerate), verify 0/1/5
//! (pass / threshold missed / blow-up), scan and lemmas 0/1, parse errors 2.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde_json::{json, Value};

use lvaci::classify::{
    lemma1_closed_form, lemma1_solutions, lemma2_closed_form, lemma2_solutions, normalize, ClassKind,
};
use lvaci::dynamics::{drift_report, integrate, CheckRegistry, IntegrateError, VerifyConfig};
use lvaci::exactmath::parse_rational;
use lvaci::report::{analyze, drift_json, float_json, outcome_json, scan, system_json};
use lvaci::system::LVSystem;

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NOT_ACI: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;
const EXIT_BLOWUP: u8 = 5;

#[derive(Parser)]
#[command(name = "lvaci", version, about = "Algebraic complete integrability of 3D Lotka-Volterra systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Triple {
    /// Coefficient a (integer, p/q or finite decimal)
    #[arg(allow_hyphen_values = true)]
    a: String,
    #[arg(allow_hyphen_values = true)]
    b: String,
    #[arg(allow_hyphen_values = true)]
    c: String,
}

#[derive(Subcommand)]
enum Command {
    /// Exponents, free-parameter test and class of one system
    Analyze {
        #[command(flatten)]
        triple: Triple,
        /// Truncation order for every balance (default: largest exponent + 2)
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Classify every orbit of integer triples in a box
    Scan {
        #[arg(long, default_value_t = 3)]
        max: i64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numeric checks along an RK4 trajectory
    Verify {
        #[command(flatten)]
        triple: Triple,
        /// Initial state v1,v2,v3
        #[arg(long, default_value = "1,2,3", allow_hyphen_values = true)]
        x0: String,
        #[arg(long = "t", default_value_t = 10.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        /// Comma-separated check names (default: every applicable check)
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force the two Diophantine lemmas and compare with their closed forms
    Lemmas {
        #[arg(long, default_value_t = 6)]
        bound: i64,
    },
    /// Canonical orbit representative
    Normalize {
        #[command(flatten)]
        triple: Triple,
        #[arg(long)]
        json: bool,
    },
}

fn parse_system(t: &Triple) -> Result<LVSystem, String> {
    let p = |s: &str| parse_rational(s).ok_or_else(|| format!("cannot parse '{s}' as a rational"));
    LVSystem::new(p(&t.a)?, p(&t.b)?, p(&t.c)?).map_err(|e| e.to_string())
}

fn parse_state(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("cannot parse '{x}' as a number")))
        .collect::<Result<_, _>>()?;
    let arr: [f64; 3] = v.try_into().map_err(|_| "x0 needs exactly three components".to_string())?;
    if arr.iter().all(|x| x.is_finite()) {
        Ok(arr)
    } else {
        Err("x0 must be finite".into())
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn parse_error(msg: String) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_PARSE)
}

fn cmd_analyze(triple: &Triple, order: Option<usize>, as_json: bool) -> ExitCode {
    let s = match parse_system(triple) {
        Ok(s) => s,
        Err(e) => return parse_error(e),
    };
    let report = match analyze(&s, order) {
        Ok(r) => r,
        Err(e) => return parse_error(e.to_string()),
    };
    if as_json {
        print_json(&report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if report.label.kind == ClassKind::Degenerate {
        ExitCode::from(EXIT_DEGENERATE)
    } else if report.verdict.is_aci {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NOT_ACI)
    }
}

fn cmd_scan(max: i64, as_json: bool, out: Option<PathBuf>) -> ExitCode {
    if max < 1 {
        return parse_error("--max must be at least 1".into());
    }
    info!("scanning box of half-width {max}");
    let report = scan(max);
    let text = if as_json {
        format!("{}\n", serde_json::to_string_pretty(&report.to_json()).expect("json values serialize"))
    } else {
        report.to_text()
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_FAIL);
            }
        }
        None => print!("{text}"),
    }
    if report.disagreements().is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("classifier and free-parameter test disagree on {} orbits", report.disagreements().len());
        ExitCode::from(EXIT_FAIL)
    }
}

fn cmd_verify(triple: &Triple, x0: &str, t_end: f64, h: f64, checks: &[String], as_json: bool) -> ExitCode {
    let s = match parse_system(triple) {
        Ok(s) => s,
        Err(e) => return parse_error(e),
    };
    let x0 = match parse_state(x0) {
        Ok(x) => x,
        Err(e) => return parse_error(e),
    };
    if !(t_end.is_finite() && t_end > 0.0 && h.is_finite() && h > 0.0) {
        return parse_error("--t and --h must be positive and finite".into());
    }
    let cfg = VerifyConfig { x0, t_end, h, ..VerifyConfig::default() };
    let registry = CheckRegistry::builtin();
    let selected = if checks.is_empty() {
        registry.all().into_iter().filter(|c| c.applies(&s, &cfg)).collect()
    } else {
        match registry.select(checks) {
            Ok(c) => c,
            Err(name) => return parse_error(format!("unknown check '{name}' (known: {})", registry.names().join(", "))),
        }
    };

    let drift = match integrate(&s, x0, t_end, h) {
        Ok(traj) => drift_report(&s, &traj),
        Err(IntegrateError::BlowUp { t_last, .. }) => {
            if as_json {
                print_json(&json!({ "system": system_json(&s), "blow_up": float_json(t_last) }));
            } else {
                println!("blow-up after t = {t_last}");
            }
            return ExitCode::from(EXIT_BLOWUP);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };

    let mut outcomes = Vec::new();
    for check in selected {
        info!("running check {}", check.name());
        match check.run(&s, &cfg) {
            Ok(o) => outcomes.push(o),
            Err(IntegrateError::BlowUp { t_last, .. }) => {
                eprintln!("check {} hit a blow-up after t = {t_last}", check.name());
                return ExitCode::from(EXIT_BLOWUP);
            }
            Err(e) => {
                eprintln!("check {} failed: {e}", check.name());
                return ExitCode::from(EXIT_FAIL);
            }
        }
    }
    let passed = outcomes.iter().all(|o| o.passed);
    if as_json {
        print_json(&json!({
            "system": system_json(&s),
            "x0": x0.iter().map(|v| float_json(*v)).collect::<Vec<_>>(),
            "t": float_json(t_end),
            "h": float_json(h),
            "drift": drift_json(&drift),
            "checks": outcomes.iter().map(outcome_json).collect::<Vec<_>>(),
            "passed": passed,
        }));
    } else {
        println!("system   {s}");
        println!("H drift  {:e}", drift.h_drift);
        println!("F drift  {:e}{}", drift.f_drift, if drift.valid_region { "" } else { " (left positive orthant)" });
        for o in &outcomes {
            let metrics: Vec<String> = o.metrics.iter().map(|(k, v)| format!("{k}={v:e}")).collect();
            println!("{:<12} {}  {}", o.name, if o.passed { "PASS" } else { "FAIL" }, metrics.join(" "));
        }
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn cmd_lemmas(bound: i64) -> ExitCode {
    if bound < 1 {
        return parse_error("--bound must be at least 1".into());
    }
    let pairs = |v: &[(i64, i64)]| v.iter().map(|(x, y)| format!("({x},{y})")).collect::<Vec<_>>().join(" ");
    let l1 = lemma1_solutions(bound);
    let l2 = lemma2_solutions(bound);
    let ok1 = l1 == lemma1_closed_form(bound);
    let ok2 = l2 == lemma2_closed_form(bound);
    println!("lemma 1 ({} pairs, closed form {}): {}", l1.len(), if ok1 { "matches" } else { "DIFFERS" }, pairs(&l1));
    println!("lemma 2 ({} pairs, closed form {}): {}", l2.len(), if ok2 { "matches" } else { "DIFFERS" }, pairs(&l2));
    if ok1 && ok2 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn cmd_normalize(triple: &Triple, as_json: bool) -> ExitCode {
    let s = match parse_system(triple) {
        Ok(s) => s,
        Err(e) => return parse_error(e),
    };
    let (rep, g) = normalize(&s);
    if as_json {
        print_json(&json!({
            "system": system_json(&s),
            "representative": system_json(&rep),
            "map": { "sigma": g.sigma.name(), "scale": lvaci::report::rational_json(&g.scale) },
        }));
    } else {
        println!("{rep} via {g}");
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("LV_LOG", "warn")).init();
    let cli = Cli::parse();
    match &cli.command {
        Command::Analyze { triple, order, json } => cmd_analyze(triple, *order, *json),
        Command::Scan { max, json, out } => cmd_scan(*max, *json, out.clone()),
        Command::Verify { triple, x0, t_end, h, checks, json } => cmd_verify(triple, x0, *t_end, *h, checks, *json),
        Command::Lemmas { bound } => cmd_lemmas(*bound),
        Command::Normalize { triple, json } => cmd_normalize(triple, *json),
    }
}
