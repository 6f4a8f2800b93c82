//! The `qdiv` command line: `div`, `check`, `reconstruct` and `sample`.
//!
//! Exit codes: 0 success, 1 suite or assertion failure, 2 input validation
//! failure, 3 usage error.

pub mod io;
pub mod registry;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::divergence::Divergence;
use crate::error::Error;
use crate::matrixcore::ComplexMatrix;
use crate::operators::PositiveOperator;
use crate::preserver::{
    verify_conjugation, wigner_reconstruct, StateMap, SymmetryKind, WignerImages,
};
use crate::sampling::{
    haar_unitary, random_density, random_positive_definite, SeededRng, SEED_ENV,
};

use io::{OperatorFile, Role};
use report::RunReport;
use suites::{Suite, SuiteParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qdiv",
    version,
    about = "Quantum divergences and their preservers"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a divergence between two operator files.
    Div(DivArgs),
    /// Run a property suite.
    Check(CheckArgs),
    /// Recover the (anti)unitary implementing a map from projection images.
    Reconstruct(ReconstructArgs),
    /// Write a seeded random operator file.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DivTag {
    Umegaki,
    Renyi,
    Sandwiched,
    #[value(name = "sandwiched-core")]
    SandwichedCore,
    Fdiv,
    Dfg,
}

#[derive(Debug, Args)]
struct DivArgs {
    #[arg(value_enum)]
    divergence: DivTag,
    a: PathBuf,
    b: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Function from the registry: power:<p>, xlogx, linear:<c>, frac.
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    g: Option<String>,
    /// Write a JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["unitary", "haar", "transpose", "images"])))]
struct ReconstructArgs {
    /// Simulate conjugation by the unitary in this operator file.
    #[arg(long)]
    unitary: Option<PathBuf>,
    /// Simulate conjugation by a seeded Haar unitary.
    #[arg(long)]
    haar: bool,
    /// Simulate the transpose in the standard basis.
    #[arg(long)]
    transpose: bool,
    /// Directory of image files image_00.json, image_01.json, … in reconstruction order.
    #[arg(long)]
    images: Option<PathBuf>,
    /// Use antiunitary conjugation for --unitary and --haar.
    #[arg(long)]
    antiunitary: bool,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    /// Write the recovered operator here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the simulated projection images to this directory.
    #[arg(long)]
    write_images: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SampleKind {
    Density,
    Pd,
    Unitary,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(value_enum)]
    kind: SampleKind,
    #[arg(long)]
    dim: usize,
    /// Rank of a density sample (defaults to full rank).
    #[arg(long)]
    rank: Option<usize>,
    /// Condition-number cap of a positive definite sample.
    #[arg(long, default_value_t = 10.0)]
    kappa: f64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Output file (standard output when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Why a command stopped early.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String),
    Suite(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Suite(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) | Failure::Suite(m) => m,
        }
    }
}

fn classify(context: &str, e: Error) -> Failure {
    let msg = if context.is_empty() {
        e.to_string()
    } else {
        format!("{context}: {e}")
    };
    match e {
        Error::InvalidParameter(_)
        | Error::Hypothesis(_)
        | Error::Undeclared { .. }
        | Error::FlagViolation { .. } => Failure::Usage(msg),
        Error::TransitionProbability { .. } => Failure::Suite(msg),
        _ => Failure::Validation(msg),
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{text}");
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        EXIT_USAGE
                    } else {
                        EXIT_OK
                    }
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let started = Instant::now();
    let result = match cli.command {
        Command::Div(a) => cmd_div(a, started, out),
        Command::Check(a) => cmd_check(a, started, out),
        Command::Reconstruct(a) => cmd_reconstruct(a, started, out),
        Command::Sample(a) => cmd_sample(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn finish(
    mut report: RunReport,
    path: Option<&Path>,
    started: Instant,
) -> Result<RunReport, Failure> {
    report.wall_time_seconds = started.elapsed().as_secs_f64();
    if let Some(p) = path {
        std::fs::write(p, report.to_json())
            .map_err(|e| Failure::Validation(format!("{}: {e}", p.display())))?;
    }
    Ok(report)
}

fn read_operator(path: &Path) -> Result<OperatorFile, Failure> {
    OperatorFile::read(path).map_err(|e| classify_input(path, e))
}

fn classify_input(path: &Path, e: Error) -> Failure {
    // anything wrong with an input file is a validation failure
    Failure::Validation(format!("{}: {e}", path.display()))
}

fn positive_input(path: &Path) -> Result<PositiveOperator, Failure> {
    let file = read_operator(path)?;
    PositiveOperator::new(file.matrix).map_err(|e| classify_input(path, e))
}

fn cmd_div(a: DivArgs, started: Instant, out: &mut dyn Write) -> Result<(), Failure> {
    let alpha = || {
        let alpha = a
            .alpha
            .ok_or_else(|| Failure::Usage("this divergence needs --alpha".into()))?;
        crate::divergence::check_alpha(alpha).map_err(usage)?;
        Ok::<f64, Failure>(alpha)
    };
    let function = |name: &str, v: &Option<String>| {
        let v = v
            .as_deref()
            .ok_or_else(|| Failure::Usage(format!("this divergence needs --{name}")))?;
        registry::lookup(v).map_err(usage)
    };
    let div = match a.divergence {
        DivTag::Umegaki => Divergence::Umegaki,
        DivTag::Renyi => Divergence::Renyi { alpha: alpha()? },
        DivTag::Sandwiched => Divergence::Sandwiched { alpha: alpha()? },
        DivTag::SandwichedCore => Divergence::SandwichedCore { alpha: alpha()? },
        DivTag::Fdiv => Divergence::FDivergence {
            f: function("f", &a.f)?,
        },
        DivTag::Dfg => Divergence::Dfg {
            f: function("f", &a.f)?,
            g: function("g", &a.g)?,
        },
    };

    let pa = positive_input(&a.a)?;
    let pb = positive_input(&a.b)?;
    if pa.dim() != pb.dim() {
        return Err(Failure::Validation(format!(
            "dimension mismatch: {} is {}x{}, {} is {}x{}",
            a.a.display(),
            pa.dim(),
            pa.dim(),
            a.b.display(),
            pb.dim(),
            pb.dim()
        )));
    }
    let value = div.evaluate(&pa, &pb).map_err(|e| classify("", e))?;

    let mut report = RunReport::new(format!("div {}", div.tag()));
    report.param("a", a.a.display());
    report.param("b", a.b.display());
    if let Some(x) = div.alpha() {
        report.param("alpha", x);
    }
    if let Some(f) = &a.f {
        report.param("f", f);
    }
    if let Some(g) = &a.g {
        report.param("g", g);
    }
    report.result("value", value);
    finish(report, a.report.as_deref(), started)?;
    let _ = writeln!(out, "{}", value.format_fixed(12));
    Ok(())
}

fn cmd_check(a: CheckArgs, started: Instant, out: &mut dyn Write) -> Result<(), Failure> {
    let params = SuiteParams {
        dim: a.dim,
        samples: a.samples,
        seed: a.seed,
        tol: a.tol,
        alpha: a.alpha,
    };
    let mut report = RunReport::new(format!("check {}", a.suite.name()));
    if let Some(d) = a.dim {
        report.param("dim", d);
    }
    if let Some(s) = a.samples {
        report.param("samples", s);
    }
    report.param("seed", a.seed);
    if let Some(t) = a.tol {
        report.param("tol", t);
    }
    if let Some(x) = a.alpha {
        report.param("alpha", x);
    }
    suites::run_suite(a.suite, &params, &mut report).map_err(|e| classify(a.suite.name(), e))?;
    let report = finish(report, a.report.as_deref(), started)?;
    let _ = write!(out, "{}", report.summary());
    if report.passed {
        let _ = writeln!(out, "check {}: all assertions passed", a.suite.name());
        Ok(())
    } else {
        let failed = report.assertions.iter().filter(|x| !x.passed).count();
        Err(Failure::Suite(format!(
            "check {}: {failed} assertion(s) failed",
            a.suite.name()
        )))
    }
}

fn image_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("image_{index:02}.json"))
}

fn read_images(dir: &Path) -> Result<WignerImages, Failure> {
    let mut list = Vec::new();
    loop {
        let path = image_path(dir, list.len());
        if !path.exists() {
            break;
        }
        list.push(read_operator(&path)?.matrix);
    }
    if list.is_empty() {
        return Err(Failure::Validation(format!(
            "{}: no image_00.json found",
            dir.display()
        )));
    }
    WignerImages::from_list(list)
        .map_err(|e| Failure::Validation(format!("{}: {e}", dir.display())))
}

fn write_images(dir: &Path, images: &WignerImages) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::Validation(format!("{}: {e}", dir.display())))?;
    for (k, p) in images.all().into_iter().enumerate() {
        let path = image_path(dir, k);
        OperatorFile::new(p.clone(), Some(Role::Projection))
            .write(&path)
            .map_err(|e| Failure::Validation(e.to_string()))?;
    }
    Ok(())
}

fn cmd_reconstruct(
    a: ReconstructArgs,
    started: Instant,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let tol = a.tol.unwrap_or(1e-8);
    let kind = if a.antiunitary {
        SymmetryKind::Antiunitary
    } else {
        SymmetryKind::Unitary
    };
    let mut report = RunReport::new("reconstruct");
    report.param("seed", a.seed);
    report.param("tol", tol);

    let need_dim = || {
        a.dim
            .filter(|&d| d > 0)
            .ok_or_else(|| Failure::Usage("this source needs a positive --dim".into()))
    };
    let map: Option<StateMap> = if let Some(path) = &a.unitary {
        report.param("source", format!("unitary file {}", path.display()));
        report.param("kind", kind);
        let file = read_operator(path)?;
        Some(StateMap::conjugation(kind, file.matrix).map_err(|e| classify_input(path, e))?)
    } else if a.haar {
        let n = need_dim()?;
        report.param("source", "haar");
        report.param("dim", n);
        report.param("kind", kind);
        let mut rng = SeededRng::new(a.seed);
        Some(StateMap::conjugation(kind, haar_unitary(n, &mut rng)).map_err(|e| classify("", e))?)
    } else if a.transpose {
        let n = need_dim()?;
        report.param("source", "transpose");
        report.param("dim", n);
        Some(StateMap::transpose(n))
    } else {
        None
    };

    let images = match (&map, &a.images) {
        (Some(m), _) => WignerImages::from_map(m).map_err(|e| classify("", e))?,
        (None, Some(dir)) => {
            report.param("source", format!("images {}", dir.display()));
            read_images(dir)?
        }
        (None, None) => unreachable!("clap requires a source"),
    };
    if let Some(dir) = &a.write_images {
        write_images(dir, &images)?;
    }

    let n = images.dim();
    let result = wigner_reconstruct(&images).map_err(|e| match e {
        Error::TransitionProbability {
            first,
            second,
            expected,
            found,
        } => Failure::Suite(format!(
            "no Wigner representation: transition probability between {} and {} is {expected:.6e}, image gives {found:.6e}",
            WignerImages::label(n, first),
            WignerImages::label(n, second)
        )),
        Error::NotRankOneProjection { index } => Failure::Validation(format!(
            "{} is not a rank-one projection",
            WignerImages::label(n, index)
        )),
        other => classify("", other),
    })?;

    report.result(
        "residual",
        crate::extended::ExtendedReal::Finite(result.residual),
    );
    report.at_most("reconstruction residual", result.residual, tol);
    if let Some(m) = &map {
        let v = verify_conjugation(m, &result.u, result.kind, 50, a.seed, tol)
            .map_err(|e| classify("", e))?;
        report.at_most(
            "conjugation deviation on fresh densities",
            v.max_deviation,
            tol,
        );
    }
    report.witness(&result);
    if let Some(path) = &a.out {
        OperatorFile::new(result.u.clone(), Some(Role::Unitary))
            .write(path)
            .map_err(|e| Failure::Validation(e.to_string()))?;
    }
    let report = finish(report, a.report.as_deref(), started)?;
    let _ = writeln!(out, "kind: {}", result.kind);
    let _ = writeln!(out, "residual: {:.3e}", result.residual);
    let _ = write!(out, "{}", report.summary());
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Suite(
            "reconstruction exceeded the tolerance".into(),
        ))
    }
}

fn cmd_sample(a: SampleArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if a.dim == 0 {
        return Err(Failure::Usage("--dim must be positive".into()));
    }
    if a.rank.is_some() && !matches!(a.kind, SampleKind::Density) {
        return Err(Failure::Usage(
            "--rank applies to density samples only".into(),
        ));
    }
    let mut rng = SeededRng::new(a.seed);
    let (matrix, role): (ComplexMatrix, Role) = match a.kind {
        SampleKind::Density => {
            let rank = a.rank.unwrap_or(a.dim);
            let d = random_density(a.dim, rank, &mut rng).map_err(usage)?;
            (d.matrix().clone(), Role::Density)
        }
        SampleKind::Pd => {
            let p = random_positive_definite(a.dim, a.kappa, &mut rng).map_err(usage)?;
            (p.matrix().clone(), Role::Positive)
        }
        SampleKind::Unitary => (haar_unitary(a.dim, &mut rng), Role::Unitary),
    };
    let file = OperatorFile::new(matrix, Some(role));
    match &a.out {
        Some(path) => file
            .write(path)
            .map_err(|e| Failure::Validation(e.to_string()))?,
        None => {
            let _ = write!(out, "{}", file.to_text());
        }
    }
    Ok(())
}
