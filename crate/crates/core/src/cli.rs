//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::braid::{
    build_matrix, evaluate_word, parse_word, Backend, BraidMatrices, BuildOptions, BuiltMatrices, Route, SigmaFormula,
};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::export::{precision_from_env, word_json, ExportScalar, Format};
use crate::oscillator::{LabelSet, NumericModel, RepLabel};
use crate::verify::{self, Suite};
use crate::weightspace::{counts, monomial_exponents};

/// Exit code for invalid configurations.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for failed invariants or checks.
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "braidosc",
    version,
    about = "Braid group representations on lowest-weight spaces of the q-oscillator algebra"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generator matrices sigma_1 .. sigma_{n-1} at one level.
    Matrix(MatrixArgs),
    /// Product of generator matrices along a braid word.
    Word(WordArgs),
    /// Weight-space and lowest-weight dimensions.
    Dims(DimsArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
struct LabelArgs {
    /// All slots carry (gamma, c).
    #[arg(long, conflicts_with_all = ["het", "labels"])]
    homogeneous: bool,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    /// One slot carries (gamma2, c2), the others (gamma, c).
    #[arg(long, conflicts_with = "labels")]
    het: bool,
    #[arg(long, default_value_t = 1.7)]
    gamma2: f64,
    #[arg(long, default_value_t = 0.8)]
    c2: f64,
    /// 1-based slot of the distinguished label (default: last).
    #[arg(long)]
    position: Option<usize>,
    /// Explicit slot labels, `gamma:c` separated by commas.
    #[arg(long)]
    labels: Option<String>,
}

#[derive(Debug, Clone, Args)]
struct FamilyArgs {
    /// Number of tensor slots.
    #[arg(long)]
    n: usize,
    /// Excitation level.
    #[arg(long = "N")]
    total: u32,
    #[command(flatten)]
    labels: LabelArgs,
    #[arg(long, default_value_t = 0.6)]
    q: f64,
    /// numeric or exact (alias laurent).
    #[arg(long, default_value = "numeric")]
    backend: String,
    /// direct, rewrite or closed_form.
    #[arg(long, default_value = "rewrite")]
    route: String,
    /// series or printed (direct route only).
    #[arg(long, default_value = "series")]
    formula: String,
    /// JSON file overriding tolerance defaults.
    #[arg(long)]
    tolerances: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MatrixArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// json or csv.
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Emit the inverse generators.
    #[arg(long)]
    inverse: bool,
    /// Keep the homogeneous phase in the entries.
    #[arg(long)]
    raw: bool,
}

#[derive(Debug, Args)]
struct WordArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Signed generator indices, e.g. "1 2 -1".
    #[arg(long, allow_hyphen_values = true)]
    word: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DimsArgs {
    #[arg(long)]
    n: usize,
    /// Level; without it a table for N = 0..=max-n is printed.
    #[arg(long = "N")]
    total: Option<u32>,
    #[arg(long, default_value_t = 5)]
    max_n: u32,
    /// text or json.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// algebra, spaces, braid or all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    tolerances: Option<PathBuf>,
}

/// Validated inputs of a matrix or word computation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub total: u32,
    pub labels: LabelSet,
    pub backend: Backend,
    pub options: BuildOptions,
    pub tolerances: Tolerances,
    pub precision: Option<usize>,
}

fn load_tolerances(path: &Option<PathBuf>) -> Result<Tolerances> {
    match path {
        None => Ok(Tolerances::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::InvalidParameter(format!("bad tolerances file: {e}")))
        }
    }
}

fn parse_labels(s: &str) -> Result<Vec<RepLabel>> {
    s.split(',')
        .map(|item| {
            let (g, c) = item.split_once(':').ok_or_else(|| Error::Parse(format!("label {item:?} is not gamma:c")))?;
            let g: f64 = g.trim().parse().map_err(|_| Error::Parse(format!("bad gamma in {item:?}")))?;
            let c: f64 = c.trim().parse().map_err(|_| Error::Parse(format!("bad c in {item:?}")))?;
            RepLabel::new(g, c)
        })
        .collect()
}

impl FamilyArgs {
    fn label_set(&self) -> Result<LabelSet> {
        let l = &self.labels;
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("n must be at least 2, got {}", self.n)));
        }
        if let Some(list) = &l.labels {
            let slots = parse_labels(list)?;
            if slots.len() != self.n {
                return Err(Error::InvalidParameter(format!("{} labels given for n = {}", slots.len(), self.n)));
            }
            return LabelSet::new(&slots);
        }
        let base = RepLabel::new(l.gamma, l.c)?;
        if l.het {
            let other = RepLabel::new(l.gamma2, l.c2)?;
            let pos = l.position.unwrap_or(self.n);
            if pos == 0 || pos > self.n {
                return Err(Error::InvalidParameter(format!("position {pos} outside 1..={}", self.n)));
            }
            return LabelSet::one_distinguished(self.n, base, other, pos - 1);
        }
        LabelSet::homogeneous(self.n, base)
    }

    fn config(&self, inverse: bool, raw: bool) -> Result<RunConfig> {
        let labels = self.label_set()?;
        let backend = match self.backend.as_str() {
            "numeric" => {
                NumericModel::new(self.q, labels.clone())?;
                Backend::Numeric { q: self.q }
            }
            "exact" | "laurent" => {
                if !labels.is_homogeneous() {
                    return Err(Error::InvalidParameter("the exact backend needs homogeneous labels".into()));
                }
                Backend::Exact
            }
            b => return Err(Error::Parse(format!("unknown backend {b:?} (numeric, exact)"))),
        };
        let route: Route = self.route.parse()?;
        let formula = match self.formula.as_str() {
            "series" => SigmaFormula::Series,
            "printed" => SigmaFormula::Printed,
            f => return Err(Error::Parse(format!("unknown formula {f:?} (series, printed)"))),
        };
        if formula == SigmaFormula::Printed && route != Route::Direct {
            return Err(Error::InvalidParameter("the printed formula is only used by the direct route".into()));
        }
        if raw && backend == Backend::Exact {
            return Err(Error::InvalidParameter("--raw is numeric only".into()));
        }
        Ok(RunConfig {
            n: self.n,
            total: self.total,
            labels,
            backend,
            options: BuildOptions { route, formula, inverse, raw },
            tolerances: load_tolerances(&self.tolerances)?,
            precision: precision_from_env()?,
        })
    }
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn build(cfg: &RunConfig, inverse: bool) -> Result<BuiltMatrices> {
    let opts = BuildOptions { inverse, ..cfg.options };
    build_matrix(&cfg.labels, cfg.total, cfg.backend, opts, &cfg.tolerances)
}

fn cmd_matrix(args: &MatrixArgs) -> Result<i32> {
    let format: Format = args.format.parse()?;
    let cfg = args.family.config(args.inverse, args.raw)?;
    let built = build(&cfg, args.inverse)?;
    emit(&built.render(format, cfg.precision), &args.output)?;
    Ok(0)
}

fn word_document<S: ExportScalar>(
    word: &[i64],
    fwd: &BraidMatrices<S>,
    bwd: &BraidMatrices<S>,
    precision: Option<usize>,
) -> Result<String> {
    let (product, phase) = evaluate_word(fwd, bwd, word)?;
    let mut s = serde_json::to_string_pretty(&word_json(word, fwd, &product, &phase, precision))?;
    s.push('\n');
    Ok(s)
}

fn cmd_word(args: &WordArgs) -> Result<i32> {
    let cfg = args.family.config(false, false)?;
    let word = parse_word(&args.word)?;
    if let Some(&bad) = word.iter().find(|l| l.unsigned_abs() as usize >= cfg.n) {
        return Err(Error::InvalidParameter(format!("letter {bad} outside ±1..={}", cfg.n - 1)));
    }
    let text = match (build(&cfg, false)?, build(&cfg, true)?) {
        (BuiltMatrices::Numeric(f), BuiltMatrices::Numeric(b)) => word_document(&word, &f, &b, cfg.precision)?,
        (BuiltMatrices::Exact(f), BuiltMatrices::Exact(b)) => word_document(&word, &f, &b, cfg.precision)?,
        _ => unreachable!("both families use one backend"),
    };
    emit(&text, &args.output)?;
    Ok(0)
}

fn monomial_label(exps: &[u32]) -> String {
    let mut s = String::new();
    for (k, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => {
                let _ = write!(s, "O{} ", k + 1);
            }
            _ => {
                let _ = write!(s, "O{}^{} ", k + 1, e);
            }
        }
    }
    s.push_str("v0");
    s
}

fn cmd_dims(args: &DimsArgs) -> Result<i32> {
    let json_out = match args.format.as_str() {
        "text" => false,
        "json" => true,
        f => return Err(Error::Parse(format!("unknown format {f:?} (text, json)"))),
    };
    let n = args.n;
    let mut out = String::new();
    match args.total {
        Some(total) => {
            let c = counts(n, total)?;
            let mut rows = Vec::new();
            for j in 0..=total {
                for exps in monomial_exponents(n, j) {
                    rows.push((total - j, j, exps));
                }
            }
            if json_out {
                let states: Vec<_> = rows
                    .iter()
                    .map(|(raise, j, e)| json!({ "raise": raise, "exponents": e, "casimir_shift": j }))
                    .collect();
                let doc = json!({
                    "n": n, "N": total,
                    "weight_dim": c.weight_dim as u64,
                    "lowest_dims": c.lowest.iter().map(|&v| v as u64).collect::<Vec<_>>(),
                    "states": states,
                });
                out = serde_json::to_string_pretty(&doc)? + "\n";
            } else {
                let _ = writeln!(out, "n = {n}, N = {total}, N_(n,N) = {}", c.weight_dim);
                let _ = writeln!(out, "{:<32} {:<9} M_(n,j)", "state", "casimir");
                let mut last = None;
                for (raise, j, e) in &rows {
                    let state = match raise {
                        0 => monomial_label(e),
                        1 => format!("Da+ {}", monomial_label(e)),
                        r => format!("(Da+)^{r} {}", monomial_label(e)),
                    };
                    let m = if last != Some(*j) { c.lowest[*j as usize].to_string() } else { String::new() };
                    last = Some(*j);
                    let _ = writeln!(out, "{:<32} {:<9} {}", state, format!("c+{j}"), m);
                }
            }
        }
        None => {
            let table: Vec<_> = (0..=args.max_n).map(|t| counts(n, t)).collect::<Result<_>>()?;
            if json_out {
                let doc: Vec<_> = table
                    .iter()
                    .map(|c| json!({ "N": c.total, "weight_dim": c.weight_dim as u64, "lowest_dim": *c.lowest.last().unwrap_or(&0) as u64 }))
                    .collect();
                out = serde_json::to_string_pretty(&json!({ "n": n, "rows": doc }))? + "\n";
            } else {
                let _ = writeln!(out, "n = {n}");
                let _ = writeln!(out, "{:>3} {:>10} {:>10}", "N", "N_(n,N)", "M_(n,N)");
                for c in &table {
                    let _ = writeln!(out, "{:>3} {:>10} {:>10}", c.total, c.weight_dim, c.lowest.last().unwrap_or(&0));
                }
            }
        }
    }
    emit(&out, &None)?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let suite: Suite = args.suite.parse()?;
    let tol = load_tolerances(&args.tolerances)?;
    let reports = verify::run(suite, args.seed, &tol);
    let mut summary = String::new();
    for r in &reports {
        let failed = r.failures().count();
        let _ = writeln!(
            summary,
            "{:<8} {} ({} checks, {} failed, max residual {:.3e}, {:.2}s)",
            r.suite,
            if r.passed { "PASS" } else { "FAIL" },
            r.checks.len(),
            failed,
            r.max_residual,
            r.runtime_seconds
        );
        for c in r.failures() {
            let _ = writeln!(summary, "  failed: {} {}", c.name, c.detail);
        }
    }
    emit(&summary, &None)?;
    let passed = reports.iter().all(|r| r.passed);
    if let Some(path) = &args.report {
        let doc = json!({ "seed": args.seed, "passed": passed, "suites": reports });
        std::fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")?;
    }
    Ok(if passed { 0 } else { EXIT_FAILURE })
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Matrix(a) => cmd_matrix(a),
        Command::Word(a) => cmd_word(a),
        Command::Dims(a) => cmd_dims(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            }
        }
    }
}
