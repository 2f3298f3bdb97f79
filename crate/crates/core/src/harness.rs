//! Random-start batches comparing the three feasibility solvers.
//!
//! Each run draws `T0` entrywise uniform in `[init_low, init_high)` from a
//! ChaCha8 stream keyed by `(seed, run_index)`, runs DR, MAP and Dykstra from
//! that start, and labels the run two ways:
//!
//! * feasibility order: converged algorithms sorted by first feasible
//!   iteration, equal iterations tied;
//! * distance order: converged algorithms sorted by the spectral norm of
//!   `T0 - X`, where `X` is the first feasible point, tied when two distances
//!   differ by at most `distance_tie_tol`.
//!
//! Algorithms that never become feasible are left out of both orders; a run
//! where nothing converges is labelled `None`. Labels read like `DR<MAP=Dyk`.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::AffineMarginalSet;
use crate::error::{Error, Result};
use crate::hyperbox::{HyperBox, TieRule};
use crate::io::fmt_f64;
use crate::matrix::{DenseMatrix, DenseVector};
use crate::solvers::{solve, Algorithm, SolverConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// Relative accuracy of the spectral norms used for distance ordering.
pub const DISTANCE_NORM_TOL: f64 = 1e-13;

const BUNDLED_SPEC: &str = include_str!("../configs/reference_4x5.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Convex,
    Integer,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub m: usize,
    pub n: usize,
    pub s: Vec<f64>,
    pub r: Vec<f64>,
    pub case: Case,
    pub num_runs: usize,
    pub init_low: f64,
    pub init_high: f64,
    pub seed: u64,
    pub max_iterations: usize,
    pub feasibility_tol: f64,
    pub distance_tie_tol: f64,
    #[serde(default)]
    pub tie_rule: TieRule,
}

impl ExperimentSpec {
    /// The bundled 4x5 instance.
    pub fn bundled() -> Self {
        serde_json::from_str(BUNDLED_SPEC).expect("bundled spec is valid")
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        serde_json::from_str(&text).map_err(|source| Error::Json { path: path.to_path_buf(), source })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.m == 0 || self.n == 0 {
            return bad(format!("dimensions must be positive, got {}x{}", self.m, self.n));
        }
        if self.s.len() != self.m || self.r.len() != self.n {
            return bad(format!(
                "targets have lengths {} and {}, expected {} and {}",
                self.s.len(),
                self.r.len(),
                self.m,
                self.n
            ));
        }
        if self.init_low.partial_cmp(&self.init_high) != Some(std::cmp::Ordering::Less)
            || !self.init_low.is_finite()
            || !self.init_high.is_finite()
        {
            return bad(format!("need finite init_low < init_high, got [{}, {})", self.init_low, self.init_high));
        }
        if self.num_runs == 0 {
            return bad("num_runs must be at least 1".into());
        }
        if self.distance_tie_tol.is_nan() || self.distance_tie_tol < 0.0 {
            return bad(format!("distance_tie_tol must be nonnegative, got {}", self.distance_tie_tol));
        }
        self.solver_config(Algorithm::DouglasRachford).validate()
    }

    pub fn solver_config(&self, algorithm: Algorithm) -> SolverConfig {
        SolverConfig {
            algorithm,
            max_iterations: self.max_iterations,
            feasibility_tol: self.feasibility_tol,
            record_trace: false,
        }
    }

    /// The affine set `B` and the box `A`, the latter built from the
    /// range-projected targets.
    pub fn problem(&self) -> Result<(AffineMarginalSet, HyperBox)> {
        let set =
            AffineMarginalSet::with_unit_sums(DenseVector::new(self.s.clone())?, DenseVector::new(self.r.clone())?)?;
        let target = set.projected_target();
        let hbox =
            HyperBox::from_targets(&target.row_part, &target.col_part, self.case == Case::Integer, self.tie_rule)?;
        Ok((set, hbox))
    }

    /// Starting matrix of run `run_index`, from its own substream.
    pub fn start_matrix(&self, run_index: u64) -> DenseMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(run_index);
        let data = (0..self.m * self.n).map(|_| rng.gen_range(self.init_low..self.init_high)).collect();
        DenseMatrix::from_vec(self.m, self.n, data).expect("finite draws")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmOutcome {
    pub algorithm: Algorithm,
    pub converged: bool,
    pub first_feasible_iteration: Option<usize>,
    /// Spectral norm of `T0 - X` for the first feasible point `X`.
    pub distance_to_start: Option<f64>,
    /// First feasible point, kept in the integer case only.
    pub solution: Option<DenseMatrix>,
    /// Feasibility of the reported point rechecked outside the solver.
    pub verified: bool,
    pub deltas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub run_index: usize,
    /// Indexed like [`Algorithm::ALL`].
    pub outcomes: [AlgorithmOutcome; 3],
    pub feasibility_order: String,
    pub distance_order: String,
}

impl RunRecord {
    pub fn outcome(&self, algorithm: Algorithm) -> &AlgorithmOutcome {
        &self.outcomes[Algorithm::ALL.iter().position(|&a| a == algorithm).expect("listed")]
    }
}

/// Orders `(algorithm, value)` pairs ascending; consecutive values within
/// `tie_tol` of each other share a rank.
pub fn order_label(entries: &[(Algorithm, f64)], tie_tol: f64) -> String {
    if entries.is_empty() {
        return "None".to_string();
    }
    let mut sorted = entries.to_vec();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut label = sorted[0].0.short_name().to_string();
    for pair in sorted.windows(2) {
        label.push(if (pair[1].1 - pair[0].1).abs() <= tie_tol { '=' } else { '<' });
        label.push_str(pair[1].0.short_name());
    }
    label
}

/// True when `algorithm` alone holds the first rank of `label`.
pub fn strictly_first(label: &str, algorithm: Algorithm) -> bool {
    let first = label.split('<').next().unwrap_or("");
    first == algorithm.short_name()
}

/// True when `algorithm` is in the first rank of `label`, possibly tied.
pub fn first_or_tied(label: &str, algorithm: Algorithm) -> bool {
    label.split('<').next().unwrap_or("").split('=').any(|a| a == algorithm.short_name())
}

/// Independent feasibility check of a reported point.
pub fn verify_solution(set: &AffineMarginalSet, hbox: &HyperBox, x: &DenseMatrix, tol: f64) -> bool {
    if !hbox.contains(x) {
        return false;
    }
    if hbox.is_integer_restricted() {
        // exact in f64 for integers of this size
        let target = set.projected_target();
        let rows_ok = (0..x.rows()).all(|i| x.row(i).iter().sum::<f64>() == target.row_part[i]);
        let cols_ok = (0..x.cols()).all(|j| (0..x.rows()).map(|i| x.get(i, j)).sum::<f64>() == target.col_part[j]);
        rows_ok && cols_ok
    } else {
        // ||A(X) - (s_bar, r_bar)|| <= ||A|| dist(X, B)
        set.residual(x).map(|r| r <= set.operator().operator_norm() * tol).unwrap_or(false)
    }
}

fn run_one(spec: &ExperimentSpec, set: &AffineMarginalSet, hbox: &HyperBox, run_index: usize) -> Result<RunRecord> {
    let t0 = spec.start_matrix(run_index as u64);
    let outcomes = Algorithm::ALL.map(|algorithm| -> Result<AlgorithmOutcome> {
        let trace = solve(set, hbox, &t0, &spec.solver_config(algorithm))?;
        let distance = trace
            .first_feasible_matrix
            .as_ref()
            .map(|x| t0.sub(x).map(|d| d.spectral_norm(DISTANCE_NORM_TOL)))
            .transpose()?;
        let verified =
            trace.first_feasible_matrix.as_ref().is_some_and(|x| verify_solution(set, hbox, x, spec.feasibility_tol));
        Ok(AlgorithmOutcome {
            algorithm,
            converged: trace.converged,
            first_feasible_iteration: trace.first_feasible_iteration,
            distance_to_start: distance,
            solution: if spec.case == Case::Integer { trace.first_feasible_matrix } else { None },
            verified,
            deltas: trace.deltas,
        })
    });
    let [a, b, c] = outcomes;
    let outcomes = [a?, b?, c?];

    let iterations: Vec<(Algorithm, f64)> =
        outcomes.iter().filter_map(|o| o.first_feasible_iteration.map(|k| (o.algorithm, k as f64))).collect();
    let distances: Vec<(Algorithm, f64)> =
        outcomes.iter().filter_map(|o| o.distance_to_start.map(|d| (o.algorithm, d))).collect();
    Ok(RunRecord {
        run_index,
        feasibility_order: order_label(&iterations, 0.0),
        distance_order: order_label(&distances, spec.distance_tie_tol),
        outcomes,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationStats {
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub converged: usize,
    pub verified: usize,
    /// `delta_k` statistics across runs for `k = 0..=max_iterations`.
    pub delta_stats: Vec<IterationStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusRow {
    pub algorithm: Algorithm,
    pub found: usize,
    pub unique: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionCensus {
    pub per_algorithm: Vec<CensusRow>,
    pub total_found: usize,
    pub total_unique: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub num_runs: usize,
    pub feasibility_order_counts: BTreeMap<String, usize>,
    pub distance_order_counts: BTreeMap<String, usize>,
    pub algorithms: Vec<AlgorithmSummary>,
    pub census: Option<SolutionCensus>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub spec: ExperimentSpec,
    pub records: Vec<RunRecord>,
    pub summary: Summary,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<Experiment> {
    spec.validate()?;
    let (set, hbox) = spec.problem()?;
    let records =
        (0..spec.num_runs).into_par_iter().map(|i| run_one(spec, &set, &hbox, i)).collect::<Result<Vec<_>>>()?;
    let summary = summarize(spec, &records);
    Ok(Experiment { spec: spec.clone(), records, summary })
}

fn count_labels<'a>(labels: impl Iterator<Item = &'a str>) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for label in labels {
        *counts.entry(label.to_string()).or_insert(0) += 1;
    }
    counts
}

fn median(sorted: &[f64]) -> f64 {
    let k = sorted.len();
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    }
}

/// Per-iteration statistics. A run that stopped early contributes its last
/// recorded `delta` to every later iteration.
fn delta_stats(records: &[RunRecord], algorithm: Algorithm, max_iterations: usize) -> Vec<IterationStats> {
    let series: Vec<&[f64]> = records.iter().map(|r| r.outcome(algorithm).deltas.as_slice()).collect();
    (0..=max_iterations)
        .map(|k| {
            let mut column: Vec<f64> =
                series.iter().map(|d| d.get(k).or(d.last()).copied().unwrap_or(f64::NAN)).collect();
            column.sort_by(f64::total_cmp);
            IterationStats { median: median(&column), min: column[0], max: column[column.len() - 1] }
        })
        .collect()
}

pub fn summarize(spec: &ExperimentSpec, records: &[RunRecord]) -> Summary {
    let algorithms = Algorithm::ALL
        .iter()
        .map(|&algorithm| AlgorithmSummary {
            algorithm,
            converged: records.iter().filter(|r| r.outcome(algorithm).converged).count(),
            verified: records.iter().filter(|r| r.outcome(algorithm).verified).count(),
            delta_stats: delta_stats(records, algorithm, spec.max_iterations),
        })
        .collect();
    Summary {
        num_runs: records.len(),
        feasibility_order_counts: count_labels(records.iter().map(|r| r.feasibility_order.as_str())),
        distance_order_counts: count_labels(records.iter().map(|r| r.distance_order.as_str())),
        algorithms,
        census: (spec.case == Case::Integer).then(|| dedup_solutions(records)),
    }
}

fn integer_key(x: &DenseMatrix) -> Vec<i64> {
    x.as_slice().iter().map(|&v| v as i64).collect()
}

/// Found and distinct integer solutions, per algorithm and overall.
pub fn dedup_solutions(records: &[RunRecord]) -> SolutionCensus {
    let mut all = HashSet::new();
    let mut total_found = 0;
    let per_algorithm = Algorithm::ALL
        .iter()
        .map(|&algorithm| {
            let mut seen = HashSet::new();
            let mut found = 0;
            for x in records.iter().filter_map(|r| r.outcome(algorithm).solution.as_ref()) {
                found += 1;
                let key = integer_key(x);
                all.insert(key.clone());
                seen.insert(key);
            }
            total_found += found;
            CensusRow { algorithm, found, unique: seen.len() }
        })
        .collect();
    SolutionCensus { per_algorithm, total_found, total_unique: all.len() }
}

#[derive(Serialize)]
struct Conventions {
    rounding_tie_rule: &'static str,
    delta_definition: &'static str,
    dykstra_delta: &'static str,
    distance_norm: &'static str,
    order_labels: &'static str,
    early_stop_padding: &'static str,
    uniform_draw: &'static str,
    rng: &'static str,
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    schema_version: u32,
    config: &'a ExperimentSpec,
    conventions: Conventions,
    #[serde(flatten)]
    summary: &'a Summary,
}

/// Paths written by [`emit_outputs`].
#[derive(Clone, Debug)]
pub struct OutputPaths {
    pub runs_csv: PathBuf,
    pub summary_json: PathBuf,
    pub deltas_csv: PathBuf,
}

fn solution_cell(x: Option<&DenseMatrix>) -> String {
    let Some(x) = x else { return String::new() };
    (0..x.rows())
        .map(|i| x.row(i).iter().map(|v| format!("{}", *v as i64)).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(";")
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv { path: path.to_path_buf(), source }
}

fn write_runs_csv(path: &Path, exp: &Experiment) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    let mut header = vec!["run_index".to_string()];
    for alg in Algorithm::ALL {
        let p = alg.short_name().to_lowercase();
        header.extend([format!("{p}_converged"), format!("{p}_iteration"), format!("{p}_distance")]);
    }
    header.extend(["feasibility_order".to_string(), "distance_order".to_string()]);
    if exp.spec.case == Case::Integer {
        header.extend(Algorithm::ALL.iter().map(|a| format!("{}_solution", a.short_name().to_lowercase())));
    }
    w.write_record(&header).map_err(csv_err(path))?;

    for rec in &exp.records {
        let mut row = vec![rec.run_index.to_string()];
        for o in &rec.outcomes {
            row.push(o.converged.to_string());
            row.push(o.first_feasible_iteration.map(|k| k.to_string()).unwrap_or_default());
            row.push(o.distance_to_start.map(fmt_f64).unwrap_or_default());
        }
        row.push(rec.feasibility_order.clone());
        row.push(rec.distance_order.clone());
        if exp.spec.case == Case::Integer {
            row.extend(rec.outcomes.iter().map(|o| solution_cell(o.solution.as_ref())));
        }
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn write_deltas_csv(path: &Path, summary: &Summary) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(["iteration", "algorithm", "median", "min", "max"]).map_err(csv_err(path))?;
    for alg in &summary.algorithms {
        for (k, st) in alg.delta_stats.iter().enumerate() {
            w.write_record([
                k.to_string(),
                alg.algorithm.short_name().to_string(),
                fmt_f64(st.median),
                fmt_f64(st.min),
                fmt_f64(st.max),
            ])
            .map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Writes `runs.csv`, `summary.json` and `deltas.csv` into `out_dir`.
pub fn emit_outputs(exp: &Experiment, out_dir: &Path) -> Result<OutputPaths> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Io { path: out_dir.to_path_buf(), source })?;
    let paths = OutputPaths {
        runs_csv: out_dir.join("runs.csv"),
        summary_json: out_dir.join("summary.json"),
        deltas_csv: out_dir.join("deltas.csv"),
    };
    write_runs_csv(&paths.runs_csv, exp)?;
    write_deltas_csv(&paths.deltas_csv, &exp.summary)?;

    let file = SummaryFile {
        schema_version: SCHEMA_VERSION,
        config: &exp.spec,
        conventions: Conventions {
            rounding_tie_rule: exp.spec.tie_rule.name(),
            delta_definition: "||P_A(T_k) - P_B(P_A(T_k))||_F on the shadow sequence P_A(T_k)",
            dykstra_delta: "computed from P_A(T_k) with T_k = P_B(A_k), same as DR and MAP",
            distance_norm: "spectral norm of T0 - X for the first feasible X",
            order_labels: "non-converged algorithms excluded; ties chain over consecutive sorted values; 'None' when nothing converged",
            early_stop_padding: "runs that stop early repeat their last delta in later iterations",
            uniform_draw: "half-open [init_low, init_high)",
            rng: "ChaCha8, seeded with seed, stream = run_index",
        },
        summary: &exp.summary,
    };
    let json = serde_json::to_string_pretty(&file)
        .map_err(|source| Error::Json { path: paths.summary_json.clone(), source })?;
    fs::write(&paths.summary_json, json + "\n")
        .map_err(|source| Error::Io { path: paths.summary_json.clone(), source })?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::known_solution;
    use Algorithm::*;

    fn small_spec(case: Case, runs: usize) -> ExperimentSpec {
        ExperimentSpec { case, num_runs: runs, ..ExperimentSpec::bundled() }
    }

    #[test]
    fn bundled_spec_is_the_reference_instance() {
        let spec = ExperimentSpec::bundled();
        spec.validate().unwrap();
        assert_eq!(spec.s, crate::instance::ROW_SUMS);
        assert_eq!(spec.r, crate::instance::COL_SUMS);
        assert_eq!((spec.init_low, spec.init_high), (-100.0, 100.0));
        assert_eq!(spec.max_iterations, 250);
        assert_eq!(spec.distance_tie_tol, 1e-15);
    }

    #[test]
    fn invalid_specs() {
        let ok = ExperimentSpec::bundled();
        for broken in [
            ExperimentSpec { num_runs: 0, ..ok.clone() },
            ExperimentSpec { init_low: 1.0, init_high: 1.0, ..ok.clone() },
            ExperimentSpec { m: 3, ..ok.clone() },
            ExperimentSpec { max_iterations: 0, ..ok.clone() },
            ExperimentSpec { distance_tie_tol: f64::NAN, ..ok.clone() },
        ] {
            assert!(matches!(run_experiment(&broken), Err(Error::InvalidConfig(_))));
        }
        let negative = ExperimentSpec { s: vec![-20.0, 43.0, 33.0, 23.0], ..ok };
        assert!(matches!(run_experiment(&negative), Err(Error::NegativeTarget { .. })));
    }

    #[test]
    fn labels() {
        assert_eq!(order_label(&[], 0.0), "None");
        assert_eq!(order_label(&[(Dykstra, 3.0)], 0.0), "Dyk");
        assert_eq!(
            order_label(&[(Dykstra, 9.0), (DouglasRachford, 2.0), (AlternatingProjections, 5.0)], 0.0),
            "DR<MAP<Dyk"
        );
        assert_eq!(
            order_label(&[(Dykstra, 2.0), (DouglasRachford, 2.0), (AlternatingProjections, 5.0)], 0.0),
            "DR=Dyk<MAP"
        );
        assert_eq!(order_label(&[(Dykstra, 1.0), (DouglasRachford, 1.0 + 2e-16)], 1e-15), "Dyk=DR");
        assert!(strictly_first("Dyk<MAP<DR", Dykstra));
        assert!(!strictly_first("Dyk=MAP<DR", Dykstra));
        assert!(first_or_tied("MAP=DR<Dyk", DouglasRachford));
        assert!(!first_or_tied("MAP<DR", DouglasRachford));
        assert!(!first_or_tied("None", DouglasRachford));
    }

    #[test]
    fn substreams_do_not_depend_on_run_count() {
        let spec = ExperimentSpec::bundled();
        let a = spec.start_matrix(7);
        assert_eq!(a, ExperimentSpec { num_runs: 3, ..spec.clone() }.start_matrix(7));
        assert_ne!(a, spec.start_matrix(8));
        assert!(a.as_slice().iter().all(|&x| (-100.0..100.0).contains(&x)));
    }

    #[test]
    fn feasible_start_ties_everything() {
        let spec = small_spec(Case::Integer, 1);
        let (set, hbox) = spec.problem().unwrap();
        let t0 = known_solution();
        let mut iterations = Vec::new();
        let mut distances = Vec::new();
        for alg in Algorithm::ALL {
            let trace = solve(&set, &hbox, &t0, &spec.solver_config(alg)).unwrap();
            assert_eq!(trace.first_feasible_iteration, Some(0));
            iterations.push((alg, 0.0));
            let x = trace.first_feasible_matrix.unwrap();
            distances.push((alg, t0.sub(&x).unwrap().spectral_norm(DISTANCE_NORM_TOL)));
        }
        assert_eq!(order_label(&iterations, 0.0), "DR=MAP=Dyk");
        assert_eq!(order_label(&distances, spec.distance_tie_tol), "DR=MAP=Dyk");
    }

    #[test]
    fn tiny_start_interval_around_solution() {
        // starts within 0.4 of the known integer solution round back onto it
        let mut spec = small_spec(Case::Integer, 3);
        spec.init_low = -0.4;
        spec.init_high = 0.4;
        let (set, hbox) = spec.problem().unwrap();
        for i in 0..3 {
            let t0 = spec.start_matrix(i).add(&known_solution()).unwrap();
            for alg in Algorithm::ALL {
                let trace = solve(&set, &hbox, &t0, &spec.solver_config(alg)).unwrap();
                assert_eq!(trace.first_feasible_iteration, Some(0));
                assert_eq!(trace.first_feasible_matrix.unwrap(), known_solution());
            }
        }
    }

    #[test]
    fn census_counts() {
        let spec = small_spec(Case::Integer, 40);
        let exp = run_experiment(&spec).unwrap();
        let census = exp.summary.census.as_ref().unwrap();
        let found: usize = census.per_algorithm.iter().map(|r| r.found).sum();
        assert_eq!(found, census.total_found);
        assert!(census.total_unique <= census.total_found);

        // duplicate one run: found goes up, unique does not
        let mut doubled = exp.records.clone();
        doubled.extend(exp.records.iter().cloned());
        let again = dedup_solutions(&doubled);
        assert_eq!(again.total_found, 2 * census.total_found);
        assert_eq!(again.total_unique, census.total_unique);
    }

    #[test]
    fn label_counts_sum_to_runs() {
        let exp = run_experiment(&small_spec(Case::Convex, 25)).unwrap();
        assert_eq!(exp.summary.feasibility_order_counts.values().sum::<usize>(), 25);
        assert_eq!(exp.summary.distance_order_counts.values().sum::<usize>(), 25);
        assert_eq!(exp.summary.algorithms[0].delta_stats.len(), 251);
        for rec in &exp.records {
            for o in &rec.outcomes {
                assert_eq!(o.converged, o.verified);
            }
        }
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[1.0, 2.0, 10.0]), 2.0);
        assert_eq!(median(&[1.0, 2.0, 4.0, 10.0]), 3.0);
    }
}
