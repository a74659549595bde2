use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tuttet::embed::{self, EmbedError, PlacementStrategy, WeightScheme};
use tuttet::experiment::{experiment_options, run_random_weight_experiment};
use tuttet::io::{self, Format, IoError};
use tuttet::minors::{self, Answer, FourCliqueBound, LinklessCheck, MinorQueryResult};
use tuttet::validate::{validate_all, Status};
use tuttet::verify::{certify, CertifyOptions, SampleSpec, Verdict};
use tuttet::{generators, Complex, RealizedMesh, TetMesh, Tolerance};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_SOFTWARE: u8 = 70;
const SEED_ENV: &str = "TUTTET_SEED";

#[derive(Parser)]
#[command(name = "tuttet", version, about = "Tutte-style embeddings of tetrahedral meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the combinatorial hypotheses; exit 0 pass, 1 fail, 2 partial.
    Validate {
        mesh: PathBuf,
        /// Search budget for each minor query.
        #[arg(long, default_value_t = minors::DEFAULT_BUDGET)]
        budget: u64,
        /// Leave out the K6 / K3,3,1 minor queries.
        #[arg(long)]
        skip_minors: bool,
    },
    /// Test the mesh graph for K6 and K3,3,1 minors; exit 0 if both are absent,
    /// 1 if one is present, 2 if undecided within budget.
    Minors {
        mesh: PathBuf,
        #[arg(long, default_value_t = minors::DEFAULT_BUDGET)]
        budget: u64,
        /// Also query the remaining Petersen-family graphs.
        #[arg(long)]
        full_petersen: bool,
    },
    /// Solve for interior positions and write the realized mesh.
    Embed {
        mesh: PathBuf,
        #[arg(long, value_enum, default_value_t = Weights::Uniform)]
        weights: Weights,
        /// Dirichlet concentration.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Boundary::AsGiven)]
        boundary: Boundary,
        /// Output path; `.node`/`.ele` selects TetGen, anything else JSON.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Certify a realized mesh; exit 0 if embedded, 1 otherwise.
    Verify {
        mesh: PathBuf,
        /// Random interior samples for the containment certificate.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Embed and certify under repeated random Dirichlet weights.
    Experiment {
        mesh: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write a reference mesh.
    Gen {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(generators::NAMES))]
        name: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    Uniform,
    Dirichlet,
}

#[derive(Clone, Copy, ValueEnum)]
enum Boundary {
    AsGiven,
    Sphere,
}

/// A failure mapped to an exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EX_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl ToString) -> Self {
        Failure {
            code: EX_DATAERR,
            message: message.to_string(),
        }
    }

    fn internal(message: impl ToString) -> Self {
        Failure {
            code: EX_SOFTWARE,
            message: message.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::data(e)
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Self {
        match e {
            EmbedError::SingularSystem { .. } | EmbedError::NotConverged { .. } | EmbedError::Internal(_) => {
                Failure::internal(e)
            }
            _ => Failure::data(e),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("tuttet: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate {
            mesh,
            budget,
            skip_minors,
        } => validate(&mesh, budget, skip_minors),
        Command::Minors {
            mesh,
            budget,
            full_petersen,
        } => minors_cmd(&mesh, budget, full_petersen),
        Command::Embed {
            mesh,
            weights,
            alpha,
            seed,
            boundary,
            output,
        } => embed_cmd(&mesh, weights, alpha, seed, boundary, &output),
        Command::Verify { mesh, samples, seed } => verify_cmd(&mesh, samples, seed),
        Command::Experiment {
            mesh,
            trials,
            alpha,
            seed,
        } => experiment_cmd(&mesh, trials, alpha, seed),
        Command::Gen { name, output } => gen(&name, &output),
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{SEED_ENV} must be an unsigned 64-bit integer, got `{v}`"))),
        Err(_) => Ok(tuttet::DEFAULT_SEED),
    }
}

fn check_budget(budget: u64) -> Result<(), Failure> {
    if budget == 0 {
        return Err(Failure::usage("--budget must be positive"));
    }
    Ok(())
}

fn load(path: &Path) -> Result<TetMesh, Failure> {
    Ok(io::load_mesh(path, Format::from_path(path))?)
}

fn load_complex(path: &Path) -> Result<Complex, Failure> {
    Complex::build(load(path)?).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Failure::internal)?;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        // a closed reader (e.g. `| head`) is not an error of ours
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::internal(e)),
        _ => Ok(()),
    }
}

fn validate(path: &Path, budget: u64, skip_minors: bool) -> Outcome {
    check_budget(budget)?;
    let complex = load_complex(path)?;
    let minors = (!skip_minors).then(|| minors::linkless_exclusion_check(&complex.graph(), budget));
    let report = validate_all(&complex, minors.as_ref());
    emit(&report)?;
    Ok(match report.verdict {
        Status::Pass | Status::Skipped => 0,
        Status::Fail => 1,
        Status::Partial => 2,
    })
}

#[derive(Serialize)]
struct MinorsReport {
    k6: MinorQueryResult,
    k331: MinorQueryResult,
    four_cliques: Option<FourCliqueBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    petersen_family: Option<Vec<PetersenEntry>>,
}

#[derive(Serialize)]
struct PetersenEntry {
    graph: &'static str,
    result: MinorQueryResult,
}

fn minors_cmd(path: &Path, budget: u64, full_petersen: bool) -> Outcome {
    check_budget(budget)?;
    let graph = load_complex(path)?.graph();
    let check: LinklessCheck = minors::linkless_exclusion_check(&graph, budget);
    let code = match check.passed() {
        Some(true) => 0,
        Some(false) => 1,
        None => 2,
    };
    let petersen_family = full_petersen.then(|| {
        minors::petersen_family_check(&graph, budget)
            .into_iter()
            .map(|(graph, result)| PetersenEntry { graph, result })
            .collect::<Vec<_>>()
    });
    let code = match &petersen_family {
        Some(family) if code == 0 && family.iter().any(|e| e.result.answer == Answer::Unknown) => 2,
        _ => code,
    };
    emit(&MinorsReport {
        k6: check.k6,
        k331: check.k331,
        four_cliques: (graph.n() >= 4).then(|| minors::four_clique_bound_check(&graph)),
        petersen_family,
    })?;
    Ok(code)
}

#[derive(Serialize)]
struct EmbedReport<'a> {
    output: &'a Path,
    interior_vertices: usize,
    vacuous: bool,
    residual: Option<f64>,
}

fn embed_cmd(path: &Path, weights: Weights, alpha: f64, seed: Option<u64>, boundary: Boundary, out: &Path) -> Outcome {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Failure::usage("--alpha must be a positive number"));
    }
    let complex = load_complex(path)?;
    let scheme = match weights {
        Weights::Uniform => WeightScheme::Uniform,
        Weights::Dirichlet => WeightScheme::Dirichlet {
            alpha,
            seed: resolve_seed(seed)?,
        },
    };
    let strategy = match boundary {
        Boundary::AsGiven => PlacementStrategy::AsGiven,
        Boundary::Sphere => PlacementStrategy::SphereNormalize,
    };
    let realized = embed::embed_mesh(&complex, &scheme, strategy, &Tolerance::default())?;
    io::save_mesh(&realized.to_mesh(), out, Format::from_path(out)).map_err(Failure::internal)?;
    emit(&EmbedReport {
        output: out,
        interior_vertices: complex.interior_vertices().len(),
        vacuous: realized.vacuous,
        residual: realized.residual,
    })?;
    Ok(0)
}

fn verify_cmd(path: &Path, samples: usize, seed: Option<u64>) -> Outcome {
    let mesh = load(path)?;
    let coords = mesh
        .coords()
        .ok_or_else(|| Failure::data(format!("{}: a realized mesh needs vertex coordinates", path.display())))?
        .to_vec();
    let complex = Complex::build(mesh).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    let realized = RealizedMesh::from_coords(complex, coords);
    let opts = CertifyOptions {
        tolerance: Tolerance::default(),
        samples: SampleSpec {
            samples,
            seed: resolve_seed(seed)?,
        },
    };
    let cert = certify(&realized, &opts);
    emit(&cert)?;
    Ok(if cert.verdict == Verdict::Embedded { 0 } else { 1 })
}

fn experiment_cmd(path: &Path, trials: usize, alpha: f64, seed: Option<u64>) -> Outcome {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Failure::usage("--alpha must be a positive number"));
    }
    let seed = resolve_seed(seed)?;
    let complex = load_complex(path)?;
    let id = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    let result = run_random_weight_experiment(&id, &complex, trials, alpha, seed, &experiment_options(Tolerance::default()))?;
    emit(&result)?;
    Ok(0)
}

fn gen(name: &str, out: &Path) -> Outcome {
    let mesh = generators::by_name(name).ok_or_else(|| Failure::usage(format!("unknown generator `{name}`")))?;
    io::save_mesh(&mesh, out, Format::from_path(out)).map_err(Failure::internal)?;
    Ok(0)
}
