//! `leibniz`: command-line front end for the Leibniz algebra toolkit.
//!
//! Exit codes: 0 success, 1 failed bound or validation error, 2 usage or
//! parse error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leibniz_core::algebra::{catalog, CatalogFamily, LeibnizAlgebra};
use leibniz_core::batch::{render_run_kv, render_run_text, run_fuzz, EvalOptions};
use leibniz_core::bounds::{verify_corollaries, verify_theorem_a, verify_theorem_b, BoundReport};
use leibniz_core::derivations::{adl_set, DerivationSet};
use leibniz_core::field::FieldSpec;
use leibniz_core::format::{
    parse_algebra_file, parse_derivation_file, render_algebra, FormatError,
};
use leibniz_core::fuzz::{FuzzConfig, FuzzStrategy};
use leibniz_core::linalg::Subspace;
use leibniz_core::report::{all_hold, analyze, render_report, ReportFormat};
use leibniz_core::series::{lower_d_central_series, upper_d_central_series, SeriesResult};

#[derive(Parser)]
#[command(
    name = "leibniz",
    version,
    about = "Exact computations on finite-dimensional left Leibniz algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an algebra file and check the Leibniz identity.
    Validate { file: PathBuf },
    /// Dimensions of the centers, derived subalgebra, Der, Ad^l and the classical series.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate the dimension bounds.
    Verify(VerifyArgs),
    /// Upper or lower D-central series.
    Series(SeriesArgs),
    /// Write a catalog algebra in the file format.
    Catalog {
        /// abelian, cyclic_leibniz, heisenberg or nonabelian2.
        name: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value = "rational")]
        field: String,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate random algebras and check every bound and invariant on them.
    Fuzz(FuzzArgs),
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Derivation file; D is the Lie closure of its matrices together with Ad^l(L).
    /// Without it D = Ad^l(L).
    #[arg(long = "d")]
    d: Option<PathBuf>,
    /// Comma-separated subset of a, b, corollaries.
    #[arg(long, value_delimiter = ',', default_values_t = [ClaimGroup::A, ClaimGroup::B, ClaimGroup::Corollaries])]
    claims: Vec<ClaimGroup>,
    #[arg(long, default_value_t = 1)]
    series_index: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SeriesArgs {
    file: PathBuf,
    #[arg(long = "d")]
    d: Option<PathBuf>,
    #[arg(long, conflicts_with = "lower", required_unless_present = "lower")]
    upper: bool,
    #[arg(long)]
    lower: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value = "rational")]
    field: String,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Strategy::CatalogConjugate)]
    strategy: Strategy,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Skip the structural invariant suite (bounds only).
    #[arg(long)]
    no_invariants: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Kv => ReportFormat::Kv,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Debug)]
enum ClaimGroup {
    A,
    B,
    Corollaries,
}

impl std::fmt::Display for ClaimGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(
            self.to_possible_value()
                .expect("no skipped variants")
                .get_name(),
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    #[value(name = "catalog_conjugate")]
    CatalogConjugate,
    #[value(name = "graded_reject")]
    GradedReject,
}

/// A failed command: message for stderr and the exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn from_format(path: &Path, e: FormatError) -> Failure {
    Failure {
        code: if e.is_validation() { 1 } else { 2 },
        message: format!("{}: {e}", path.display()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<Arc<LeibnizAlgebra>, Failure> {
    let text = read(path)?;
    parse_algebra_file(&text)
        .map(Arc::new)
        .map_err(|e| from_format(path, e))
}

fn load_derivations(
    a: &Arc<LeibnizAlgebra>,
    path: Option<&Path>,
) -> Result<DerivationSet, Failure> {
    match path {
        None => Ok(adl_set(a)),
        Some(p) => parse_derivation_file(&read(p)?, a).map_err(|e| from_format(p, e)),
    }
}

fn parse_field(s: &str) -> Result<FieldSpec, Failure> {
    s.parse().map_err(|e| usage(format!("--field: {e}")))
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: 1,
        message: e.to_string(),
    }
}

type Outcome = Result<(String, bool), Failure>;

fn validate(file: &Path) -> Outcome {
    let a = load_algebra(file)?;
    let lie = if a.is_lie() { ", Lie" } else { "" };
    Ok((
        format!("valid: dim {} over {}{lie}\n", a.dim(), a.field()),
        true,
    ))
}

fn analyze_cmd(file: &Path, format: Format) -> Outcome {
    let a = load_algebra(file)?;
    let an = analyze(&a).map_err(internal)?;
    Ok((an.render(format.into()), true))
}

fn verify(args: &VerifyArgs) -> Outcome {
    let a = load_algebra(&args.file)?;
    let d = load_derivations(&a, args.d.as_deref())?;
    if args.series_index == 0 {
        return Err(usage("--series-index must be at least 1"));
    }
    let mut reports: Vec<BoundReport> = Vec::new();
    for group in &args.claims {
        match group {
            ClaimGroup::A => reports.push(verify_theorem_a(&d).map_err(internal)?),
            ClaimGroup::B => reports.push(verify_theorem_b(&d).map_err(internal)?),
            ClaimGroup::Corollaries => {
                reports.extend(verify_corollaries(&a, args.series_index).map_err(internal)?)
            }
        }
    }
    let k = d.k().map_err(internal)?;
    let mut out = String::new();
    match args.format {
        Format::Kv => {
            let _ = writeln!(out, "d.dim = {}", d.dim());
            let _ = writeln!(out, "d.k = {k}");
        }
        Format::Text => {
            let _ = writeln!(out, "D: dim {}, k = {k}", d.dim());
        }
    }
    out.push_str(&render_report(&reports, args.format.into()));
    Ok((out, all_hold(&reports)))
}

/// Basis vectors in parentheses; `0` for the zero subspace.
fn render_subspace(s: &Subspace) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let rows: Vec<String> = s
        .basis_vectors()
        .iter()
        .map(|v| {
            format!(
                "({})",
                v.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            )
        })
        .collect();
    rows.join(" ")
}

fn series(args: &SeriesArgs) -> Outcome {
    let a = load_algebra(&args.file)?;
    let d = load_derivations(&a, args.d.as_deref())?;
    let (name, result, first): (&str, SeriesResult, usize) = if args.upper {
        ("upper", upper_d_central_series(&d).map_err(internal)?, 0)
    } else {
        ("lower", lower_d_central_series(&d).map_err(internal)?, 1)
    };
    let dims: Vec<String> = result.dims().iter().map(ToString::to_string).collect();
    let mut out = String::new();
    match args.format {
        Format::Kv => {
            let _ = writeln!(out, "series.flavor = {name}");
            let _ = writeln!(out, "series.dims = {}", dims.join(" "));
            let _ = writeln!(out, "series.stabilized_at = {}", result.stabilized_at);
            if let Some(zl) = result.zl {
                let _ = writeln!(out, "series.zl = {zl}");
            }
            for (i, t) in result.terms.iter().enumerate() {
                let _ = writeln!(out, "series.term.{} = {}", i + first, render_subspace(t));
            }
        }
        Format::Text => {
            let symbol = if args.upper { "ζ" } else { "γ" };
            let _ = writeln!(
                out,
                "{name} D-central series (dim D = {}): {}",
                d.dim(),
                dims.join(" ")
            );
            for (i, t) in result.terms.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  {symbol}_{}  dim {}  {}",
                    i + first,
                    t.dim(),
                    render_subspace(t)
                );
            }
            if let Some(zl) = result.zl {
                let _ = writeln!(out, "zl = {zl}");
            }
        }
    }
    Ok((out, true))
}

fn catalog_cmd(name: &str, dim: usize, field: &str, output: Option<&Path>) -> Outcome {
    let family: CatalogFamily = name.parse().map_err(|e| usage(format!("{e}")))?;
    let field = parse_field(field)?;
    let a = catalog(family, dim, field).map_err(|e| usage(format!("{e}")))?;
    let text = render_algebra(&a);
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Ok((String::new(), true))
        }
        None => Ok((text, true)),
    }
}

fn fuzz(args: &FuzzArgs) -> Outcome {
    let cfg = FuzzConfig {
        dim: args.dim,
        field: parse_field(&args.field)?,
        count: args.count,
        seed: args.seed,
        strategy: match args.strategy {
            Strategy::CatalogConjugate => FuzzStrategy::CatalogConjugate,
            Strategy::GradedReject => FuzzStrategy::GradedReject,
        },
    };
    let opts = EvalOptions {
        invariants: !args.no_invariants,
        ..EvalOptions::default()
    };
    let run = run_fuzz(cfg, opts).map_err(|e| usage(e.to_string()))?;
    let out = match args.format {
        Format::Kv => render_run_kv(&run),
        Format::Text => render_run_text(&run),
    };
    Ok((out, run.passed()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Analyze { file, format } => analyze_cmd(file, *format),
        Command::Verify(args) => verify(args),
        Command::Series(args) => series(args),
        Command::Catalog {
            name,
            dim,
            field,
            output,
        } => catalog_cmd(name, *dim, field, output.as_deref()),
        Command::Fuzz(args) => fuzz(args),
    };
    match outcome {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
