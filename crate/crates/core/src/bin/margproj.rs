use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use marginal_proj::harness::{emit_outputs, run_experiment, Case, ExperimentSpec};
use marginal_proj::io::{fmt_f64, format_matrix, parse_vector, read_matrix};
use marginal_proj::{
    project_bistochastic, project_ghr, project_unit_sums, solve, AffineMarginalSet, Algorithm, DenseVector,
    ScaledMarginalOperator,
};

#[derive(Parser)]
#[command(name = "margproj", version, about = "Projections onto matrices with prescribed row/column sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProjectionKind {
    /// Scaled sums T e = s, T^T f = r (weights default to ones)
    General,
    /// Plain row sums s and column sums r
    UnitSums,
    /// Square T with T e = gamma e and T^T f = gamma f
    Ghr,
    /// Square T with all row and column sums equal to one
    Bistochastic,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Dr,
    Map,
    Dyk,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Dr => Algorithm::DouglasRachford,
            AlgorithmArg::Map => Algorithm::AlternatingProjections,
            AlgorithmArg::Dyk => Algorithm::Dykstra,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Convex,
    Integer,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Convex => Case::Convex,
            CaseArg::Integer => Case::Integer,
        }
    }
}

/// Overrides applied on top of the experiment config file.
#[derive(clap::Args)]
struct SpecArgs {
    /// Experiment config (JSON); defaults to the bundled 4x5 instance
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "case", value_enum)]
    case: Option<CaseArg>,
}

impl SpecArgs {
    fn load(&self) -> marginal_proj::Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(path) => ExperimentSpec::from_json_file(path)?,
            None => ExperimentSpec::bundled(),
        };
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        if let Some(iters) = self.iters {
            spec.max_iterations = iters;
        }
        if let Some(tol) = self.tol {
            spec.feasibility_tol = tol;
        }
        if let Some(case) = self.case {
            spec.case = case.into();
        }
        Ok(spec)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Project a matrix file onto a set of matrices with prescribed sums
    Project {
        /// Matrix file: "m n" header followed by m rows
        matrix: PathBuf,
        #[arg(long = "spec", value_enum, default_value = "general")]
        kind: ProjectionKind,
        /// Row targets, comma separated
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        /// Column targets, comma separated
        #[arg(long, allow_hyphen_values = true)]
        r: Option<String>,
        /// Column weights (length n)
        #[arg(long, allow_hyphen_values = true)]
        e: Option<String>,
        /// Row weights (length m)
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// Run one solver from a single start and print its trace
    Solve {
        #[arg(long, value_enum, default_value = "dr")]
        algorithm: AlgorithmArg,
        /// Start matrix file; otherwise drawn like run --run-index of an experiment
        #[arg(long)]
        start: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        run_index: u64,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Run a random-start batch of all three solvers and write CSV/JSON output
    Experiment {
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        spec: SpecArgs,
    },
}

fn vector_arg(name: &str, value: Option<&String>) -> marginal_proj::Result<DenseVector> {
    let text = value.ok_or_else(|| marginal_proj::Error::InvalidConfig(format!("--{name} is required")))?;
    parse_vector(text)
}

fn run(cli: Cli) -> marginal_proj::Result<()> {
    match cli.command {
        Command::Project { matrix, kind, s, r, e, f, gamma } => {
            let t = read_matrix(&matrix)?;
            let (m, n) = t.shape();
            let projected = match kind {
                ProjectionKind::General => {
                    let e = e.as_ref().map_or(Ok(DenseVector::ones(n)), |v| parse_vector(v))?;
                    let f = f.as_ref().map_or(Ok(DenseVector::ones(m)), |v| parse_vector(v))?;
                    let set = AffineMarginalSet::new(
                        ScaledMarginalOperator::new(e, f),
                        vector_arg("s", s.as_ref())?,
                        vector_arg("r", r.as_ref())?,
                    )?;
                    if set.consistency_residual() > 0.0 {
                        eprintln!("note: targets inconsistent, residual {}", fmt_f64(set.consistency_residual()));
                    }
                    set.project(&t)?
                }
                ProjectionKind::UnitSums => {
                    project_unit_sums(&vector_arg("s", s.as_ref())?, &vector_arg("r", r.as_ref())?, &t)?
                }
                ProjectionKind::Ghr => {
                    project_ghr(&vector_arg("e", e.as_ref())?, &vector_arg("f", f.as_ref())?, gamma, &t)?
                }
                ProjectionKind::Bistochastic => project_bistochastic(&t)?,
            };
            print!("{}", format_matrix(&projected));
        }
        Command::Solve { algorithm, start, run_index, spec } => {
            let spec = spec.load()?;
            spec.validate()?;
            let (set, hbox) = spec.problem()?;
            let t0 = match start {
                Some(path) => read_matrix(&path)?,
                None => spec.start_matrix(run_index),
            };
            let mut cfg = spec.solver_config(algorithm.into());
            cfg.record_trace = false;
            let trace = solve(&set, &hbox, &t0, &cfg)?;
            println!("iteration delta");
            for (k, d) in trace.deltas.iter().enumerate() {
                println!("{k} {}", fmt_f64(*d));
            }
            match (&trace.first_feasible_iteration, &trace.first_feasible_matrix) {
                (Some(k), Some(x)) => {
                    println!("# feasible at iteration {k}");
                    print!("{}", format_matrix(x));
                }
                _ => println!("# not feasible after {} iterations", cfg.max_iterations),
            }
        }
        Command::Experiment { runs, out_dir, threads, spec } => {
            let mut spec = spec.load()?;
            if let Some(runs) = runs {
                spec.num_runs = runs;
            }
            let exp = match threads {
                Some(k) => rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .map_err(|e| marginal_proj::Error::InvalidConfig(format!("thread pool: {e}")))?
                    .install(|| run_experiment(&spec))?,
                None => run_experiment(&spec)?,
            };
            let paths = emit_outputs(&exp, &out_dir)?;
            let summary = &exp.summary;
            println!("runs: {}", summary.num_runs);
            for alg in &summary.algorithms {
                println!("{:>4} converged: {}", alg.algorithm.short_name(), alg.converged);
            }
            println!("feasibility order:");
            for (label, count) in &summary.feasibility_order_counts {
                println!("  {label:<16} {count}");
            }
            println!("distance order:");
            for (label, count) in &summary.distance_order_counts {
                println!("  {label:<16} {count}");
            }
            if let Some(census) = &summary.census {
                println!("solutions (found / unique):");
                for row in &census.per_algorithm {
                    println!("  {:<4} {} / {}", row.algorithm.short_name(), row.found, row.unique);
                }
                println!("  all  {} / {}", census.total_found, census.total_unique);
            }
            println!(
                "wrote {}, {}, {}",
                paths.runs_csv.display(),
                paths.summary_json.display(),
                paths.deltas_csv.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
