//! Command-line front end: jet computation, lost-abbey checks, Hermite
//! interpolation, minimal propagation, structure analysis, identity testing,
//! inner ranks and growth tables. Inputs and outputs are JSON (fraction
//! strings for scalars); identical inputs and seeds produce identical bytes.

use clap::{Args, Parser, Subcommand};
use ncgerm::exactmath::{Mat, MatTuple, Scalar};
use ncgerm::freealg::NcPoly;
use ncgerm::guard::ResourceError;
use ncgerm::hermite::{self, InterpolationProblem};
use ncgerm::jet::{self, Jet, JetError};
use ncgerm::lac;
use ncgerm::mero::{self, IdentityTestOptions};
use ncgerm::propagate::{self, PropagateError, PropagationConfig};
use ncgerm::structure::{self, StructureError};
use serde::Serialize;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ncgerm",
    version,
    about = "exact local calculus of free noncommutative functions"
)]
struct Cli {
    /// worker threads for parallel evaluations (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Differentials of a polynomial at a point, as a jet
    Jet(JetArgs),
    /// Check the truncated lost-abbey conditions of a jet
    LacCheck(LacArgs),
    /// Interpolate target jets by an nc polynomial
    Interpolate(ProblemArgs),
    /// Smallest feasible interpolation degree
    MinDegree(ProblemArgs),
    /// Minimal propagation of a seed jet to a higher order
    Propagate(PropagateArgs),
    /// Embed elements of the generated algebra as one-term propagations
    Embed(EmbedArgs),
    /// Generated algebra, centralizer, semisimplicity and irreducibility
    Structure(StructureArgs),
    /// Random-evaluation identity test of a meromorphic expression
    IdentityTest(IdentityArgs),
    /// Inner-rank estimate of a matrix of nc polynomials
    InnerRank(InnerRankArgs),
    /// Growth-bound recurrence table
    GrowthTable(GrowthArgs),
}

#[derive(Args)]
struct JetArgs {
    /// polynomial file (JSON)
    #[arg(long)]
    poly: PathBuf,
    /// point file (JSON matrix tuple)
    #[arg(long)]
    point: PathBuf,
    /// jet order
    #[arg(long)]
    order: usize,
}

#[derive(Args)]
struct LacArgs {
    #[arg(long)]
    point: PathBuf,
    /// jet file (JSON)
    #[arg(long)]
    jet: PathBuf,
    #[arg(long)]
    order: usize,
}

#[derive(Args)]
struct ProblemArgs {
    /// problem file: {"points": [...], "targets": [...], "L": 1, "Dmax": 12}
    #[arg(long)]
    problem: PathBuf,
}

#[derive(Args)]
struct PropagateArgs {
    #[arg(long)]
    point: PathBuf,
    /// seed jet file (JSON)
    #[arg(long)]
    seed: PathBuf,
    /// target order
    #[arg(long)]
    order: usize,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    point: PathBuf,
    /// JSON array of matrices in the generated algebra
    #[arg(long)]
    elements: PathBuf,
    #[arg(long)]
    order: usize,
}

#[derive(Args)]
struct StructureArgs {
    #[arg(long)]
    point: PathBuf,
}

#[derive(Args)]
struct IdentityArgs {
    /// expression file: optional `let name = ...;` preamble, then the expression
    #[arg(long)]
    expr: PathBuf,
    /// comma-separated matrix sizes
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// RNG seed (mandatory: no silent nondeterminism)
    #[arg(long)]
    seed: u64,
    /// entries are sampled uniformly from [-bound, bound]
    #[arg(long, default_value_t = 10)]
    bound: i64,
}

#[derive(Args)]
struct InnerRankArgs {
    /// matrix file: {"rows": d, "cols": e, "entries": [[NcPoly, ...], ...]}
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, default_value_t = 3)]
    nmax: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// RNG seed (mandatory: no silent nondeterminism)
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    bound: i64,
}

#[derive(Args)]
struct GrowthArgs {
    /// positive rational, e.g. 2 or 3/2
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    #[arg(long)]
    lmax: usize,
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: String,
}

enum CliError {
    Precondition(String),
    Parse(String),
    Resource(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Precondition(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Resource(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Precondition(m) | CliError::Parse(m) | CliError::Resource(m) => m,
        }
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<JetError> for CliError {
    fn from(e: JetError) -> Self {
        match e {
            JetError::Resource(r) => CliError::Resource(r.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<ResourceError> for CliError {
    fn from(e: ResourceError) -> Self {
        CliError::Resource(e.to_string())
    }
}

impl From<PropagateError> for CliError {
    fn from(e: PropagateError) -> Self {
        match e {
            PropagateError::Resource(r) => CliError::Resource(r.to_string()),
            PropagateError::Jet(JetError::Resource(r)) => CliError::Resource(r.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<hermite::HermiteError> for CliError {
    fn from(e: hermite::HermiteError) -> Self {
        match e {
            hermite::HermiteError::Resource(r) => CliError::Resource(r.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display()))),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output")
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Jet(args) => {
            let poly: NcPoly = read_json(&args.poly)?;
            let point: MatTuple = read_json(&args.point)?;
            if poly.g() != point.g() {
                return Err(CliError::Precondition(format!(
                    "polynomial has {} letters, point has {}",
                    poly.g(),
                    point.g()
                )));
            }
            let jet = jet::jet_eval(&poly, &point, args.order)?;
            Ok(to_json(&jet))
        }
        Command::LacCheck(args) => {
            let point: MatTuple = read_json(&args.point)?;
            let jet: Jet = read_json(&args.jet)?;
            if jet.base() != &point {
                return Err(CliError::Precondition(
                    "jet basepoint differs from the point".into(),
                ));
            }
            if jet.order() < args.order {
                return Err(CliError::Precondition(format!(
                    "jet has order {} < requested {}",
                    jet.order(),
                    args.order
                )));
            }
            let report = lac::check_lac_truncated(&point, &jet, args.order)?;
            Ok(to_json(&report))
        }
        Command::Interpolate(args) => {
            let problem: InterpolationProblem = read_json(&args.problem)?;
            let poly = hermite::interpolate(&problem)?;
            Ok(to_json(&poly))
        }
        Command::MinDegree(args) => {
            let problem: InterpolationProblem = read_json(&args.problem)?;
            let degree = hermite::min_degree(&problem)?;
            Ok(to_json(&json!({ "min_degree": degree })))
        }
        Command::Propagate(args) => {
            let point: MatTuple = read_json(&args.point)?;
            let seed: Jet = read_json(&args.seed)?;
            let ops = structure::bimodule_ops(&point)?;
            let cfg = PropagationConfig {
                ops,
                seed,
                extend_to: args.order,
            };
            let jet = propagate::propagate_minimal(&cfg)?;
            Ok(to_json(&json!({
                "pi": cfg.ops.pi,
                "jet": jet,
            })))
        }
        Command::Embed(args) => {
            let point: MatTuple = read_json(&args.point)?;
            let elements: Vec<Mat> = read_json(&args.elements)?;
            let jets = propagate::embed_algebra(&point, &elements, args.order)?;
            Ok(to_json(&jets))
        }
        Command::Structure(args) => {
            let point: MatTuple = read_json(&args.point)?;
            let generated = structure::generated_algebra(&point)?;
            let cent = structure::centralizer(&point)?;
            let semisimple = structure::is_semisimple(&point)?;
            let irreducible = structure::is_irreducible(&point)?;
            Ok(to_json(&json!({
                "generated_dim": generated.dim(),
                "generated": generated,
                "centralizer_dim": cent.dim(),
                "centralizer": cent,
                "semisimple": semisimple,
                "irreducible": irreducible,
            })))
        }
        Command::IdentityTest(args) => {
            let text = std::fs::read_to_string(&args.expr)
                .map_err(|e| CliError::Parse(format!("{}: {e}", args.expr.display())))?;
            let (atoms, expr) =
                mero::parse_program(&text).map_err(|e| CliError::Parse(e.to_string()))?;
            if args.sizes.is_empty() || args.sizes.contains(&0) {
                return Err(CliError::Precondition("sizes must be positive".into()));
            }
            if args.trials == 0 {
                return Err(CliError::Precondition("trials must be at least 1".into()));
            }
            let reports = mero::identity_test(
                &expr,
                &atoms,
                &args.sizes,
                &IdentityTestOptions {
                    trials: args.trials,
                    seed: args.seed,
                    bound: args.bound,
                    retry_cap: 20,
                    symbolic: true,
                },
            );
            Ok(to_json(&reports))
        }
        Command::InnerRank(args) => {
            #[derive(serde::Deserialize)]
            struct PolyMatrix {
                rows: usize,
                cols: usize,
                entries: Vec<Vec<NcPoly>>,
            }
            let m: PolyMatrix = read_json(&args.matrix)?;
            if m.entries.len() != m.rows || m.entries.iter().any(|r| r.len() != m.cols) {
                return Err(CliError::Parse(
                    "entry grid does not match rows x cols".into(),
                ));
            }
            let report = mero::inner_rank_estimate(
                &m.entries,
                args.nmax,
                args.trials,
                args.seed,
                args.bound,
            );
            Ok(to_json(&report))
        }
        Command::GrowthTable(args) => {
            let alpha: Scalar = args
                .alpha
                .parse()
                .map_err(|_| CliError::Parse(format!("invalid alpha {:?}", args.alpha)))?;
            let beta: Scalar = args
                .beta
                .parse()
                .map_err(|_| CliError::Parse(format!("invalid beta {:?}", args.beta)))?;
            let seq = propagate::growth_bound(&alpha, &beta, args.lmax)?;
            match args.format.as_str() {
                "json" => Ok(to_json(&seq)),
                "csv" => {
                    let mut out = String::from("l,m,value\n");
                    for (ell, row) in seq.table.iter().enumerate() {
                        for (m, v) in row.iter().enumerate() {
                            out.push_str(&format!("{ell},{m},{v}\n"));
                        }
                    }
                    Ok(out.trim_end().to_string())
                }
                other => Err(CliError::Parse(format!(
                    "unknown format {other:?} (expected csv or json)"
                ))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("ncgerm: could not configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(text) => match write_output(cli.out.as_deref(), &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("ncgerm: {}", e.message());
                ExitCode::from(e.code())
            }
        },
        Err(e) => {
            eprintln!("ncgerm: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    /// Subcommand-to-operation dispatch, one pipeline entry point per
    /// subcommand.
    const DISPATCH: &[(&str, &str)] = &[
        ("jet", "jet::jet_eval"),
        ("lac-check", "lac::check_lac_truncated"),
        ("interpolate", "hermite::interpolate"),
        ("min-degree", "hermite::min_degree"),
        ("propagate", "propagate::propagate_minimal"),
        ("embed", "propagate::embed_algebra"),
        ("structure", "structure::generated_algebra"),
        ("identity-test", "mero::identity_test"),
        ("inner-rank", "mero::inner_rank_estimate"),
        ("growth-table", "propagate::growth_bound"),
    ];

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn every_pipeline_has_exactly_one_subcommand() {
        let cmd = Cli::command();
        let subcommands: Vec<&str> = cmd.get_subcommands().map(|c| c.get_name()).collect();
        assert_eq!(subcommands.len(), DISPATCH.len());
        for (name, _) in DISPATCH {
            assert_eq!(
                subcommands.iter().filter(|s| *s == name).count(),
                1,
                "subcommand {name} missing or duplicated"
            );
        }
        // each dispatch target appears exactly once
        for (_, op) in DISPATCH {
            assert_eq!(
                DISPATCH.iter().filter(|(_, o)| o == op).count(),
                1,
                "operation {op} reachable from more than one subcommand"
            );
        }
    }
}
