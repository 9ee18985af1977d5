use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ospq_core::fockrep::{self, FockRep, Tolerances, MAX_DIM};
use ospq_core::ospclassic;
use ospq_core::qcoeff::ComplexValue;
use ospq_core::report::{CheckResult, RunReport};
use ospq_core::uqosp::{self, CatalogOptions, Family};
use ospq_core::walgebra::{normal_order, parse_word};
use ospq_core::Error;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "ospq", version, about = "Exact and numerical checks for U_q[osp(1|2n)] and its oscillator realization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the classical identities and the quantum relation catalog.
    Verify(VerifyArgs),
    /// Build the Fock representation at q = exp(i pi / k) and check it.
    Rep(RepArgs),
    /// Split the Fock space into U_q[gl(n)] blocks.
    Decompose(DecomposeArgs),
    /// Print the normal form of a word such as "a1- a1+ k2^-1".
    NormalOrder(NormalOrderArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Classical,
    #[value(name = "CK")]
    Ck,
    #[value(name = "SERRE")]
    Serre,
    #[value(name = "PRE")]
    Pre,
    #[value(name = "T")]
    T,
    #[value(name = "G")]
    G,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Unitarity,
    Relations,
    Dims,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report (or exports) here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Tol {
    /// Relative operator-norm tolerance for relation residuals.
    #[arg(long, default_value_t = 1e-9)]
    tol_rel: f64,
    /// Entrywise tolerance for structural checks.
    #[arg(long, default_value_t = 1e-12)]
    tol_entry: f64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=5))]
    n: u64,
    #[arg(long, value_enum, value_delimiter = ',', ignore_case = true, default_value = "all")]
    families: Vec<FamilyArg>,
    /// Seed for sampled catalogs at n >= 4.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
    /// Test hook: realize L_i with the wrong power of s.
    #[arg(long, hide = true)]
    corrupt: bool,
}

#[derive(Args)]
struct RepArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..), required_unless_present_any = ["q", "q_arg"])]
    k: Option<u64>,
    /// Deformation parameter as `re[,im]`; anything but exp(i pi / k) is refused.
    #[arg(long, conflicts_with_all = ["k", "q_arg"], allow_hyphen_values = true)]
    q: Option<String>,
    /// Deformation parameter as exp(i * THETA).
    #[arg(long, conflicts_with = "k", allow_hyphen_values = true)]
    q_arg: Option<f64>,
    #[arg(long, value_enum, value_delimiter = ',', ignore_case = true, default_value = "all")]
    checks: Vec<CheckArg>,
    #[command(flatten)]
    output: Output,
    #[command(flatten)]
    tol: Tol,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    k: u64,
    #[command(flatten)]
    output: Output,
    #[command(flatten)]
    tol: Tol,
}

#[derive(Args)]
struct NormalOrderArgs {
    word: String,
    /// Number of modes; defaults to the largest index in the word.
    #[arg(long)]
    n: Option<usize>,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Parse { .. } | Error::IndexOutOfRange { .. } | Error::NegativeArgument(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn threads() -> usize {
    std::env::var("OSPQ_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from))
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn emit(output: &Output, text: &str, json: &str) -> std::io::Result<()> {
    let body = match output.format {
        Format::Text => text,
        Format::Json => json,
    };
    match &output.out {
        Some(path) => std::fs::write(path, body),
        None => {
            print!("{body}");
            if !body.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn emit_report(output: &Output, report: &RunReport, preamble: &str) -> std::io::Result<()> {
    emit(output, &format!("{preamble}{}", report.to_text()), &report.to_json())
}

fn selected_families(args: &[FamilyArg]) -> (bool, Vec<Family>) {
    let all = args.contains(&FamilyArg::All);
    let classical = all || args.contains(&FamilyArg::Classical);
    let groups: Vec<&str> = args
        .iter()
        .filter_map(|f| match f {
            FamilyArg::Ck => Some("CK"),
            FamilyArg::Serre => Some("SERRE"),
            FamilyArg::Pre => Some("PRE"),
            FamilyArg::T => Some("T"),
            FamilyArg::G => Some("G"),
            _ => None,
        })
        .collect();
    let families = Family::ALL.iter().copied().filter(|f| all || groups.contains(&f.group())).collect();
    (classical, families)
}

fn family_names(args: &[FamilyArg]) -> Value {
    Value::from(
        args.iter()
            .map(|f| f.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default())
            .collect::<Vec<_>>(),
    )
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let n = args.n as usize;
    let (classical, families) = selected_families(&args.families);
    let mut params = BTreeMap::new();
    params.insert("n".into(), json!(n));
    params.insert("families".into(), family_names(&args.families));
    params.insert("seed".into(), json!(args.seed));
    if args.corrupt {
        params.insert("corrupt".into(), json!(true));
    }
    let mut report = RunReport::new(VERSION, timestamp(), params);
    if classical {
        report.extend(ospclassic::verify_classical(n)?);
        report.extend(ospclassic::verify_pre_limits(n)?);
    }
    if !families.is_empty() {
        let opts = CatalogOptions { families, seed: args.seed, ..Default::default() };
        let instances = uqosp::catalog_with(n, &opts)?;
        report.extend(uqosp::check_catalog(&instances, n, args.corrupt, threads())?);
    }
    emit_report(&args.output, &report, "")?;
    Ok(report.passed())
}

fn parse_q(text: &str) -> Result<ComplexValue, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| Failure::Usage(format!("cannot parse '{s}' in --q")));
    match parts.as_slice() {
        [re] => Ok(ComplexValue::new(num(re)?, 0.0)),
        [re, im] => Ok(ComplexValue::new(num(re)?, num(im)?)),
        _ => Err(Failure::Usage(format!("--q expects re[,im], got '{text}'"))),
    }
}

fn check_guard(n: u64, k: u64) -> Result<(), Failure> {
    match k.checked_pow(n.min(64) as u32) {
        Some(d) if d <= MAX_DIM as u64 && n <= 64 => Ok(()),
        _ => Err(Failure::Usage(format!("k^n must not exceed {MAX_DIM} (n={n}, k={k})"))),
    }
}

fn export_path(base: &Path, label: &str) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "matrix".into());
    let ext = base.extension().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    base.with_file_name(format!("{stem}.{label}.{ext}"))
}

fn cmd_rep(args: &RepArgs) -> Outcome {
    let n = args.n as usize;
    let rep = match (args.k, &args.q, args.q_arg) {
        (Some(k), _, _) => {
            check_guard(args.n, k)?;
            FockRep::new(n, k as usize)?
        }
        (None, q, theta) => {
            let q = match (q, theta) {
                (Some(text), _) => parse_q(text)?,
                (None, Some(t)) => ComplexValue::from_polar(1.0, t),
                (None, None) => unreachable!("clap requires one of --k, --q, --q-arg"),
            };
            match fockrep::build_for_parameter(q, n) {
                Ok(rep) => {
                    check_guard(args.n, rep.k() as u64)?;
                    rep
                }
                Err(diag) => {
                    let text = format!("refusing to build matrices: {diag}\n");
                    let json = serde_json::to_string_pretty(&json!({ "schema": "1", "positivity": diag })).expect("json");
                    emit(&args.output, &text, &json)?;
                    return Ok(false);
                }
            }
        }
    };
    let all = args.checks.contains(&CheckArg::All);
    let wants = |c| all || args.checks.contains(&c);
    let tol = Tolerances { rel: args.tol.tol_rel, entry: args.tol.tol_entry };

    let mut params = BTreeMap::new();
    params.insert("n".into(), json!(n));
    params.insert("k".into(), json!(rep.k()));
    params.insert(
        "checks".into(),
        Value::from(args.checks.iter().filter_map(|c| c.to_possible_value()).map(|v| v.get_name().to_string()).collect::<Vec<_>>()),
    );
    params.insert("tol-rel".into(), json!(tol.rel));
    params.insert("tol-entry".into(), json!(tol.entry));
    let mut report = RunReport::new(VERSION, timestamp(), params);
    let expect = rep.k().pow(n as u32);
    report.extend([CheckResult::flag(
        format!("DIM[n={n},k={}]", rep.k()),
        rep.dim() == expect,
        format!("dimension {} (k^n = {expect})", rep.dim()),
    )]);
    if wants(CheckArg::Unitarity) {
        report.extend(fockrep::check_unitarity(&rep, &tol)?);
        report.extend(fockrep::check_norm_consistency(&rep, &tol)?);
    }
    if wants(CheckArg::Relations) {
        report.extend(fockrep::check_weyl_relations(&rep, &tol)?);
        report.extend(fockrep::check_gl_images(&rep, &tol)?);
        let instances = uqosp::catalog(n)?;
        let chunk = instances.len().div_ceil(threads()).max(1);
        let parts: Vec<_> = std::thread::scope(|scope| {
            let handles: Vec<_> = instances
                .chunks(chunk)
                .map(|c| {
                    let rep = &rep;
                    scope.spawn(move || fockrep::check_matrix_relations(rep, c, &tol))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("relation worker panicked")).collect()
        });
        for part in parts {
            report.extend(part?);
        }
    }
    if wants(CheckArg::Dims) {
        report.extend(fockrep::decompose_gl(&rep, &tol)?.1);
    }
    if let Some(base) = &args.output.out {
        let mut labels = rep.basic_labels();
        labels.extend(rep.gl_labels());
        for label in labels {
            std::fs::write(export_path(base, &label.to_string()), rep.generator(label)?.to_csv())?;
        }
        let text = format!("dimension {}\n{}", rep.dim(), report.to_text());
        match args.output.format {
            Format::Text => print!("{text}"),
            Format::Json => println!("{}", report.to_json()),
        }
    } else {
        emit_report(&args.output, &report, &format!("dimension {}\n", rep.dim()))?;
    }
    Ok(report.passed())
}

fn cmd_decompose(args: &DecomposeArgs) -> Outcome {
    check_guard(args.n, args.k)?;
    let rep = FockRep::new(args.n as usize, args.k as usize)?;
    let tol = Tolerances { rel: args.tol.tol_rel, entry: args.tol.tol_entry };
    let (decomp, checks) = fockrep::decompose_gl(&rep, &tol)?;
    let ok = checks.iter().all(CheckResult::passed);
    let mut text = format!("{} blocks, dims {}\n", decomp.blocks.len(), decomp.dims().iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    for c in &checks {
        text.push_str(&format!("{} {}{}\n", if c.passed() { "PASS" } else { "FAIL" }, c.id, if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) }));
    }
    if !ok && args.output.format == Format::Json {
        for c in checks.iter().filter(|c| !c.passed()) {
            eprintln!("FAIL {} ({})", c.id, c.detail);
        }
    }
    emit(&args.output, &text, &decomp.to_json())?;
    Ok(ok)
}

fn cmd_normal_order(args: &NormalOrderArgs) -> Outcome {
    let word = parse_word(&args.word)?;
    let inferred = word
        .iter()
        .map(|l| match *l {
            ospq_core::Letter::Plus(i) | ospq_core::Letter::Minus(i) | ospq_core::Letter::Kappa(i, _) => i + 1,
        })
        .max()
        .unwrap_or(1);
    let n = args.n.unwrap_or(inferred);
    println!("{}", normal_order(&word, n)?);
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Rep(a) => cmd_rep(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::NormalOrder(a) => cmd_normal_order(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
