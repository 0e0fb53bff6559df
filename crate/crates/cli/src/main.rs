//! `fsalg`: verification suites and one-shot evaluators over the core library.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::ArgGroup;
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fsalg_core::coset::{extract_almost_coset, CosetExpr, CosetExprData};
use fsalg_core::group::{self, validate_model, FiniteGroupModel, GroupFile, IrrepCatalog};
use fsalg_core::linalg::C64;
use fsalg_core::pdf::{
    chi_pairing_report, haagerup_eval, haagerup_l2_report, haagerup_min_l2_power,
    parse_riesz_spec, powers_all_singular, riesz_classify, riesz_eval, riesz_power, HaagerupParam,
    RieszFamily, RieszSpec,
};
use fsalg_core::verify::{run_suite, VerifyError, DEFAULT_CAP, DEFAULT_TOL, SUITE_NAMES};
use fsalg_core::words::{count_words, cyclic_coset_scan, enumerate_words, GeneratorSet, ReducedWord};

#[derive(Parser)]
#[command(name = "fsalg", version, about = "Fourier-Stieltjes algebra toolkit")]
struct Cli {
    /// Numeric tolerance for verification checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,

    /// Group catalog file (JSON); overrides bundled catalog lookup.
    #[arg(long, global = true, value_name = "PATH")]
    group_file: Option<PathBuf>,

    /// Enumeration cap (word listings, scan pair budgets).
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite and print its report.
    Verify {
        /// Suite name, or `all` for every suite.
        suite: String,
    },

    /// Load a group catalog, audit it, and print a summary.
    Group {
        /// Bundled name (z1..z12, s3, d4, q8) or a file stem under FSALG_GROUP_DIR.
        name: Option<String>,
        /// List the available catalog names.
        #[arg(long)]
        list: bool,
    },

    /// Reports for the radial function r^|x| on the free group F_k.
    #[command(group(ArgGroup::new("action").required(true).args(["report", "eval"])))]
    Haagerup {
        /// Number of free generators.
        #[arg(long)]
        k: u32,
        /// Radial decay parameter, 0 < r < 1.
        #[arg(long)]
        r: f64,
        /// Which report to print.
        #[arg(long, value_enum)]
        report: Option<HaagerupReport>,
        /// Evaluate r^|w| at a reduced word, e.g. x1.x2^-1.
        #[arg(long, value_name = "WORD")]
        eval: Option<String>,
        /// Sphere radius for the pairing report.
        #[arg(long, default_value_t = 2)]
        n: u64,
    },

    /// Evaluate and classify free Riesz products.
    #[command(group(ArgGroup::new("action").required(true).args(["eval", "classify", "power"])))]
    Riesz {
        /// Coefficient spec: finite:<c>,.. | geometric:c=<c>,q=<r> | powerlaw:c=<c>,p=<r> | loglaw:c=<c>,p=<r>.
        #[arg(long, value_name = "SPEC")]
        alphas: String,
        /// Evaluate the product at a reduced word.
        #[arg(long, value_name = "WORD")]
        eval: Option<String>,
        /// Print summability data and the classification.
        #[arg(long)]
        classify: bool,
        /// Print the coefficient spec of the m-th pointwise power.
        #[arg(long, value_name = "M")]
        power: Option<u32>,
    },

    /// Reduced word counting, listing, and coset scans.
    Words {
        #[command(subcommand)]
        op: WordsOp,
    },

    /// Coset expressions over Z^d: membership, box checks, extraction.
    #[command(group(ArgGroup::new("action").required(true).args(["extract", "member", "check"])))]
    Coset {
        /// Expression file: JSON {dim, positives: [{anchor, basis}], negatives: [..]}.
        #[arg(long, value_name = "PATH")]
        file: PathBuf,
        /// Extract an infinite coset almost contained in the set.
        #[arg(long)]
        extract: bool,
        /// Test membership of a comma-separated point, e.g. 3 or 1,-2.
        #[arg(long, value_name = "POINT")]
        member: Option<String>,
        /// Confirm the expression is a 0/1 indicator on [-R,R]^d.
        #[arg(long, value_name = "R")]
        check: Option<i64>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum HaagerupReport {
    /// Square-summability ratio q and the closed-form l2 norm.
    Norms,
    /// Summability threshold and the first square-summable power.
    Threshold,
    /// Pairing with the length-n sphere indicator.
    Pairing,
}

#[derive(Subcommand)]
enum WordsOp {
    /// Number of reduced words of length exactly n over k generators.
    Count {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
    },
    /// List the reduced words of length exactly n (bounded by --cap).
    List {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
    },
    /// Max hits of any cyclic coset g<w> inside the symmetrized set {x1..xg}.
    Scan {
        /// Number of generators in the set.
        #[arg(long)]
        gens: u32,
        /// Length bound for g and w.
        #[arg(long, default_value_t = 2)]
        len: u64,
        /// Power range 1..=N scanned per pair.
        #[arg(long, default_value_t = 20)]
        powers: u64,
    },
}

/// Exit discipline: 0 all checks pass, 1 some check fails, 2 usage or input error.
enum Outcome {
    Pass,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((text, outcome)) => {
            if let Err(msg) = flush_stdout(&text) {
                eprintln!("fsalg: {msg}");
                return ExitCode::from(2);
            }
            match outcome {
                Outcome::Pass => ExitCode::SUCCESS,
                Outcome::CheckFailed => ExitCode::from(1),
            }
        }
        Err(msg) => {
            eprintln!("fsalg: {msg}");
            ExitCode::from(2)
        }
    }
}

/// One write at the end of the run. A consumer that closes the pipe early
/// (`fsalg .. | grep -q ..`) must not turn into a panic; the exit code still
/// reflects the computed outcome.
fn flush_stdout(text: &str) -> Result<(), String> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(format!("stdout: {e}")),
    }
}

fn run(cli: Cli) -> Result<(String, Outcome), String> {
    match cli.cmd {
        Cmd::Verify { ref suite } => cmd_verify(&cli, suite),
        Cmd::Group { ref name, list } => cmd_group(&cli, name.as_deref(), list),
        Cmd::Haagerup { k, r, report, ref eval, n } => {
            cmd_haagerup(&cli, k, r, report, eval.as_deref(), n)
        }
        Cmd::Riesz { ref alphas, ref eval, classify, power } => {
            cmd_riesz(&cli, alphas, eval.as_deref(), classify, power)
        }
        Cmd::Words { ref op } => cmd_words(&cli, op),
        Cmd::Coset { ref file, extract, ref member, check } => {
            cmd_coset(&cli, file, extract, member.as_deref(), check)
        }
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_verify(cli: &Cli, suite: &str) -> Result<(String, Outcome), String> {
    let report = run_suite(suite, cli.seed, cli.tol, cli.cap).map_err(|e| match e {
        VerifyError::UnknownSuite(_) => {
            format!("{e}; expected one of: {}, all", SUITE_NAMES.join(", "))
        }
        other => other.to_string(),
    })?;
    let text = match cli.format {
        Format::Tsv => report.to_tsv(),
        Format::Json => report.to_json(),
    };
    flush_stdout(&text)?;
    // informational only; kept off stdout so reports stay byte-identical
    eprintln!("# wall_time_ms\t{}", report.wall_time_ms);
    let outcome = if report.all_passed() { Outcome::Pass } else { Outcome::CheckFailed };
    Ok((String::new(), outcome))
}

fn cmd_group(cli: &Cli, name: Option<&str>, list: bool) -> Result<(String, Outcome), String> {
    if list {
        let mut names = group::bundled_names();
        if let Ok(dir) = env::var("FSALG_GROUP_DIR") {
            let mut stems: Vec<String> = fs::read_dir(&dir)
                .map_err(|e| format!("{dir}: {e}"))?
                .filter_map(|entry| {
                    let path = entry.ok()?.path();
                    if path.extension()? == "json" {
                        Some(path.file_stem()?.to_string_lossy().into_owned())
                    } else {
                        None
                    }
                })
                .collect();
            stems.sort();
            names.extend(stems);
        }
        let mut text = names.join("\n");
        text.push('\n');
        return Ok((text, Outcome::Pass));
    }

    let (model, cat) = resolve_group(cli, name)?;
    let report = validate_model(&model, &cat);
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| Value::String(format!("{}: {}", f.check, f.witness)))
        .collect();

    let mut rows = Rows::new();
    rows.push("group", Value::String(model.name().to_string()));
    rows.push("order", json!(model.order()));
    rows.push("dims", json!(cat.dims()));
    rows.push("checks_run", json!(report.checks_run));
    rows.push("passed", json!(report.passed()));
    rows.push("failures", Value::Array(failures));
    let outcome = if report.passed() { Outcome::Pass } else { Outcome::CheckFailed };
    Ok((rows.render(cli.format), outcome))
}

fn cmd_haagerup(
    cli: &Cli,
    k: u32,
    r: f64,
    report: Option<HaagerupReport>,
    eval: Option<&str>,
    n: u64,
) -> Result<(String, Outcome), String> {
    let p = HaagerupParam::new(r, k).map_err(|e| e.to_string())?;

    if let Some(text) = eval {
        let w = ReducedWord::parse(text, true).map_err(|e| format!("--eval: {e}"))?;
        let v = haagerup_eval(&p, &w).map_err(|e| format!("--eval: {e}"))?;
        return Ok((value_line(cli.format, &json!(v)), Outcome::Pass));
    }

    let mut rows = Rows::new();
    match report.expect("clap enforces one action") {
        HaagerupReport::Norms => {
            let l2 = haagerup_l2_report(&p);
            rows.push("q", json!(l2.q));
            rows.push("in_l2", json!(l2.in_l2));
            rows.push("norm_sq", opt_f64(l2.norm_sq));
        }
        HaagerupReport::Threshold => {
            let threshold = 1.0 / (2.0 * k as f64 - 1.0).sqrt();
            let regime = chi_pairing_report(&p, 1, 1).regime;
            rows.push("threshold", json!(threshold));
            rows.push("regime", Value::String(regime.to_string()));
            rows.push("min_l2_power", json!(haagerup_min_l2_power(&p)));
        }
        HaagerupReport::Pairing => {
            let rep = chi_pairing_report(&p, n, cli.cap);
            rows.push("n", json!(rep.n));
            rows.push("pairing", json!(rep.pairing));
            rows.push("bound", json!(rep.haagerup_bound));
            rows.push("regime", Value::String(rep.regime.to_string()));
            rows.push(
                "first_exceeding_n",
                rep.first_exceeding_n.map_or(Value::Null, |m| json!(m)),
            );
        }
    }
    Ok((rows.render(cli.format), Outcome::Pass))
}

fn cmd_riesz(
    cli: &Cli,
    alphas: &str,
    eval: Option<&str>,
    classify: bool,
    power: Option<u32>,
) -> Result<(String, Outcome), String> {
    let spec = parse_riesz_spec(alphas).map_err(|e| format!("--alphas: {e}"))?;

    if let Some(text) = eval {
        let w = ReducedWord::parse(text, true).map_err(|e| format!("--eval: {e}"))?;
        let line = value_line(cli.format, &complex_value(riesz_eval(&spec, &w)));
        return Ok((line, Outcome::Pass));
    }

    let mut rows = Rows::new();
    if classify {
        let cls = riesz_classify(&spec);
        rows.push("class", Value::String(cls.class.to_string()));
        rows.push("beta", opt_f64(cls.beta));
        rows.push("gamma", opt_f64(cls.gamma));
        rows.push("powers_all_singular", json!(powers_all_singular(&spec)));
    } else {
        let m = power.expect("clap enforces one action");
        let powered = riesz_power(&spec, m).map_err(|e| e.to_string())?;
        let cls = riesz_classify(&powered);
        rows.push("m", json!(m));
        rows.push("spec", Value::String(spec_text(&powered)));
        rows.push("class", Value::String(cls.class.to_string()));
    }
    Ok((rows.render(cli.format), Outcome::Pass))
}

fn cmd_words(cli: &Cli, op: &WordsOp) -> Result<(String, Outcome), String> {
    let text = match *op {
        WordsOp::Count { k, n } => {
            let c = count_words(k, n).map_err(|e| e.to_string())?;
            let v = if c <= u64::MAX as u128 {
                json!(c as u64)
            } else {
                Value::String(c.to_string())
            };
            value_line(cli.format, &v)
        }
        WordsOp::List { k, n } => {
            let ws = enumerate_words(k, n, cli.cap).map_err(|e| e.to_string())?;
            let texts: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
            match cli.format {
                Format::Tsv => {
                    let mut out = texts.join("\n");
                    if !out.is_empty() {
                        out.push('\n');
                    }
                    out
                }
                Format::Json => {
                    let mut out =
                        serde_json::to_string_pretty(&texts).expect("string list");
                    out.push('\n');
                    out
                }
            }
        }
        WordsOp::Scan { gens, len, powers } => {
            let s = GeneratorSet::new(1..=gens, true).map_err(|e| e.to_string())?;
            let rep = cyclic_coset_scan(&s, len, powers, cli.cap).map_err(|e| e.to_string())?;
            let mut rows = Rows::new();
            rows.push("max_hits", json!(rep.max_hits));
            rows.push("witness_g", Value::String(rep.witness_g.to_string()));
            rows.push("witness_w", Value::String(rep.witness_w.to_string()));
            rows.push("witness_powers", json!(rep.witness_powers));
            rows.push("pairs_scanned", json!(rep.pairs_scanned));
            rows.render(cli.format)
        }
    };
    Ok((text, Outcome::Pass))
}

fn cmd_coset(
    cli: &Cli,
    file: &Path,
    extract: bool,
    member: Option<&str>,
    check: Option<i64>,
) -> Result<(String, Outcome), String> {
    let expr = load_expression(file)?;

    if let Some(text) = member {
        let p = parse_point(text)?;
        let inside = expr.membership(&p).map_err(|e| format!("{}: {e}", file.display()))?;
        return Ok((value_line(cli.format, &json!(inside)), Outcome::Pass));
    }

    if let Some(radius) = check {
        expr.verify_box(radius).map_err(|e| format!("{}: {e}", file.display()))?;
        let mut rows = Rows::new();
        rows.push("radius", json!(radius));
        rows.push("indicator", json!(true));
        return Ok((rows.render(cli.format), Outcome::Pass));
    }

    debug_assert!(extract);
    let out = extract_almost_coset(&expr).map_err(|e| format!("{}: {e}", file.display()))?;
    let mut rows = Rows::new();
    rows.push("anchor", json!(out.coset.anchor()));
    rows.push("basis", json!(out.coset.lattice().basis()));
    rows.push("rank", json!(out.coset.lattice().rank()));
    rows.push("exceptions", json!(out.exceptions));
    Ok((rows.render(cli.format), Outcome::Pass))
}

// ---------------------------------------------------------------------------
// Input resolution
// ---------------------------------------------------------------------------

fn resolve_group(cli: &Cli, name: Option<&str>) -> Result<(FiniteGroupModel, IrrepCatalog), String> {
    if let Some(path) = &cli.group_file {
        return load_group_file(path);
    }
    let name = name.ok_or("group name required (or pass --group-file / --list)")?;
    if let Ok(pair) = group::bundled(name) {
        return Ok(pair);
    }
    match env::var("FSALG_GROUP_DIR") {
        Ok(dir) => {
            let path = Path::new(&dir).join(format!("{name}.json"));
            if path.is_file() {
                load_group_file(&path)
            } else {
                Err(format!(
                    "unknown group '{name}': not bundled and {} not found",
                    path.display()
                ))
            }
        }
        Err(_) => Err(format!(
            "unknown group '{name}' (bundled: {}); set FSALG_GROUP_DIR or --group-file for custom catalogs",
            group::bundled_names().join(", ")
        )),
    }
}

fn load_group_file(path: &Path) -> Result<(FiniteGroupModel, IrrepCatalog), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: GroupFile =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    file.build().map_err(|e| format!("{}: {e}", path.display()))
}

fn load_expression(path: &Path) -> Result<CosetExpr, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let data: CosetExprData =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    data.build().map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_point(text: &str) -> Result<Vec<i64>, String> {
    text.split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<i64>()
                .map_err(|_| format!("--member: invalid integer '{}'", piece.trim()))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/// Ordered key/value report, printed as TSV rows or a JSON object.
struct Rows(Vec<(&'static str, Value)>);

impl Rows {
    fn new() -> Rows {
        Rows(Vec::new())
    }

    fn push(&mut self, key: &'static str, value: Value) {
        self.0.push((key, value));
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Tsv => {
                for (k, v) in &self.0 {
                    out.push_str(&format!("{k}\t{}\n", tsv_cell(v)));
                }
            }
            Format::Json => {
                // hand-rolled object so keys keep insertion order
                out.push_str("{\n");
                for (i, (k, v)) in self.0.iter().enumerate() {
                    let comma = if i + 1 < self.0.len() { "," } else { "" };
                    out.push_str(&format!(
                        "  {}: {}{comma}\n",
                        Value::String(k.to_string()),
                        serde_json::to_string(v).expect("row value")
                    ));
                }
                out.push_str("}\n");
            }
        }
        out
    }
}

fn value_line(format: Format, v: &Value) -> String {
    match format {
        Format::Tsv => format!("{}\n", tsv_cell(v)),
        Format::Json => format!("{}\n", serde_json::to_string(v).expect("value")),
    }
}

/// TSV cells: strings raw, lists joined with `;`, nested lists with `,`.
fn tsv_cell(v: &Value) -> String {
    match v {
        Value::Array(items) => items
            .iter()
            .map(|item| match item {
                Value::Array(inner) => {
                    inner.iter().map(tsv_scalar).collect::<Vec<_>>().join(",")
                }
                other => tsv_scalar(other),
            })
            .collect::<Vec<_>>()
            .join(";"),
        other => tsv_scalar(other),
    }
}

fn tsv_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

fn opt_f64(x: Option<f64>) -> Value {
    x.map_or(Value::Null, |v| json!(v))
}

fn complex_value(z: C64) -> Value {
    if z.im == 0.0 {
        json!(z.re)
    } else {
        Value::String(complex_text(z))
    }
}

/// Complex scalar in the `--alphas` grammar (`a`, `bi`, `a+bi`, `a-bi`).
fn complex_text(z: C64) -> String {
    let num = |x: f64| json!(x).to_string();
    if z.im == 0.0 {
        num(z.re)
    } else if z.re == 0.0 {
        format!("{}i", num(z.im))
    } else if z.im < 0.0 {
        format!("{}-{}i", num(z.re), num(-z.im))
    } else {
        format!("{}+{}i", num(z.re), num(z.im))
    }
}

fn spec_text(spec: &RieszSpec) -> String {
    match spec.family() {
        RieszFamily::Finite { alphas } => {
            let parts: Vec<String> = alphas.iter().map(|z| complex_text(*z)).collect();
            format!("finite:{}", parts.join(","))
        }
        RieszFamily::Geometric { c, q } => {
            format!("geometric:c={},q={}", complex_text(*c), json!(q))
        }
        RieszFamily::PowerLaw { c, p } => {
            format!("powerlaw:c={},p={}", complex_text(*c), json!(p))
        }
        RieszFamily::LogLaw { c, p } => {
            format!("loglaw:c={},p={}", complex_text(*c), json!(p))
        }
    }
}
