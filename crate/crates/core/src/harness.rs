//! Seeded trial ensembles, aggregation, and report rendering.
//!
//! Trial `i` of an experiment with master seed `s` runs on a ChaCha8 stream
//! seeded with [`split_seed`]`(s, i)`. Trials are independent, so they run
//! on a rayon pool and are reduced in trial-index order, which keeps every
//! report byte-identical for a given configuration.

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    boosted_success_prob, expected_bound, expected_exact, BasePreset, RecurrenceParams,
    RecurrenceTable, HEADLINE_CONSTANT,
};
use crate::error::{Error, Result};
use crate::maxfind::{default_budget, find_max, find_max_boosted, MaxConfig, MaxRun, Mode};
use crate::oracle::{QueryCounter, Table};
use crate::statevector::{analytic_success_probability, QuantumState};

/// Bit-exact header of the per-trial CSV.
pub const CSV_HEADER: &str =
    "trial,seed,n,final_index,succeeded,grover_queries,verification_queries,total_queries,rounds";

/// Header of the recurrence CSV emitted by `analyze`.
pub const RECURRENCE_CSV_HEADER: &str = "N,t,base_preset,E_exact,E_telescoped,E_bound";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-trial seed: `splitmix64(master_seed ^ splitmix64(trial_index))`.
pub fn split_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(trial_index))
}

pub fn trial_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableSource {
    /// A fresh random permutation of `0..n` per trial, drawn from the
    /// trial's own stream before the algorithm starts.
    Permutation,
    /// One table read from disk and shared by every trial.
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_items: usize,
    pub table_source: TableSource,
    pub trials: u64,
    pub master_seed: u64,
    pub mode: Mode,
    pub k_repetitions: u32,
    pub base_preset: BasePreset,
    pub output_format: OutputFormat,
    /// Total query budget per run; `None` uses `ceil(13.6 sqrt(N))`.
    pub budget: Option<u64>,
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
}

impl ExperimentConfig {
    pub fn permutation(n_items: usize, trials: u64, master_seed: u64, mode: Mode) -> Self {
        Self {
            n_items,
            table_source: TableSource::Permutation,
            trials,
            master_seed,
            mode,
            k_repetitions: 1,
            base_preset: BasePreset::Pi4,
            output_format: OutputFormat::Csv,
            budget: None,
            jobs: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        if self.n_items == 0 {
            return Err(Error::EmptyTable);
        }
        if self.k_repetitions == 0 {
            return Err(Error::Domain("k must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    pub final_index: usize,
    pub succeeded: bool,
    pub grover_queries: u64,
    pub verification_queries: u64,
    pub total_queries: u64,
    pub rounds: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregates {
    pub trials: u64,
    pub mean_total_queries: f64,
    pub std_total_queries: f64,
    pub median_total_queries: f64,
    pub p90_total_queries: f64,
    pub p99_total_queries: f64,
    pub mean_grover_queries: f64,
    pub mean_verification_queries: f64,
    pub success_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Predictions {
    pub bound_6_8: f64,
    pub budget_13_6: f64,
    #[serde(rename = "E_exact")]
    pub e_exact: Option<f64>,
    #[serde(rename = "E_bound")]
    pub e_bound: Option<f64>,
    pub base_preset: String,
    pub boosted_success: Option<f64>,
}

/// Comparisons that apply to the experiment's mode; `None` when not
/// applicable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdicts {
    /// Oracle-terminated: mean total queries <= 6.8 sqrt(N).
    pub mean_within_bound: Option<bool>,
    /// Budgeted, k = 1: failure rate < 1/2.
    pub failure_below_half: Option<bool>,
    /// Budgeted, k > 1: success rate >= 1 - 2^-k.
    pub boosted_meets_target: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub n: usize,
    pub mode: String,
    pub k: u32,
    pub master_seed: u64,
    pub records: Vec<TrialRecord>,
    pub aggregates: Aggregates,
    pub predictions: Predictions,
    pub verdicts: Verdicts,
}

/// Argmax by a single left-to-right scan, returning the index and the
/// number of comparisons made (`len - 1`).
pub fn classical_baseline<T: PartialOrd>(table: &Table<T>) -> Result<(usize, u64)> {
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut best = 0;
    let mut comparisons = 0u64;
    for j in 1..table.len() {
        comparisons += 1;
        if table.beats(j, best) {
            best = j;
        }
    }
    Ok((best, comparisons))
}

fn load_file_table(path: &PathBuf) -> Result<Table<f64>> {
    let text = std::fs::read_to_string(path)?;
    Table::parse(&text)
}

fn run_trial(
    config: &ExperimentConfig,
    shared: Option<&Table<f64>>,
    trial: u64,
) -> Result<TrialRecord> {
    let seed = split_seed(config.master_seed, trial);
    let mut rng = trial_rng(seed);
    let generated;
    let table = match shared {
        Some(t) => t,
        None => {
            generated = Table::permutation(config.n_items, &mut rng)?;
            &generated
        }
    };
    let mut max_config = MaxConfig::for_table(table, config.mode);
    if let Some(budget) = config.budget {
        max_config = max_config.with_budget(budget)?;
    }
    let run: MaxRun = if config.k_repetitions > 1 {
        find_max_boosted(table, &mut rng, &max_config, config.k_repetitions)?
    } else {
        find_max(table, &mut rng, &max_config)?
    };
    check_run(table, &run)?;
    let (truth, _) = classical_baseline(table)?;
    Ok(TrialRecord {
        trial,
        seed,
        n: table.len(),
        final_index: run.final_index,
        succeeded: table.values()[run.final_index] == table.values()[truth],
        grover_queries: run.total_grover_queries,
        verification_queries: run.total_verification_queries,
        total_queries: run.total_queries(),
        rounds: run.rounds,
    })
}

/// Checks the run-level invariants: strictly improving guesses and exact
/// query accounting.
pub fn check_run<T: PartialOrd>(table: &Table<T>, run: &MaxRun) -> Result<()> {
    if run.guess_trace.windows(2).any(|w| !table.beats(w[1], w[0])) {
        return Err(Error::Invariant("guess trace is not strictly improving".into()));
    }
    let mut summed = QueryCounter::default();
    for s in &run.searches {
        summed.charge_grover(s.grover_queries_spent);
        summed.charge_verification(s.verification_queries_spent);
    }
    if summed.grover_queries != run.total_grover_queries
        || summed.verification_queries != run.total_verification_queries
        || run.rounds != run.searches.len() as u64
    {
        return Err(Error::Invariant("query totals disagree with per-round counts".into()));
    }
    Ok(())
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<StatsReport> {
    config.validate()?;
    let shared = match &config.table_source {
        TableSource::Permutation => None,
        TableSource::File(path) => Some(load_file_table(path)?),
    };
    let n = shared.as_ref().map_or(config.n_items, Table::len);

    let run_all = || -> Result<Vec<TrialRecord>> {
        (0..config.trials)
            .into_par_iter()
            .map(|trial| run_trial(config, shared.as_ref(), trial))
            .collect()
    };
    let records = match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Domain(format!("cannot build worker pool: {e}")))?
            .install(run_all)?,
        None => run_all()?,
    };

    let aggregates = aggregate(&records);
    let predictions = predict(n, config)?;
    let bound = predictions.bound_6_8;
    let verdicts = Verdicts {
        mean_within_bound: (config.mode == Mode::OracleTerminated && config.k_repetitions == 1)
            .then(|| aggregates.mean_total_queries <= bound),
        failure_below_half: (config.mode == Mode::Budgeted && config.k_repetitions == 1)
            .then(|| 1.0 - aggregates.success_rate < 0.5),
        boosted_meets_target: predictions
            .boosted_success
            .map(|target| aggregates.success_rate >= target),
    };
    Ok(StatsReport {
        n,
        mode: mode_name(config.mode).to_string(),
        k: config.k_repetitions,
        master_seed: config.master_seed,
        records,
        aggregates,
        predictions,
        verdicts,
    })
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Budgeted => "budgeted",
        Mode::OracleTerminated => "oracle-terminated",
    }
}

fn predict(n: usize, config: &ExperimentConfig) -> Result<Predictions> {
    let root = (n as f64).sqrt();
    let (e_exact, e_bound) = if n >= 2 {
        let params = RecurrenceParams::with_preset(n as u64, config.base_preset)?;
        (
            Some(expected_exact(&params, params.t_max)?),
            Some(expected_bound(&params, params.t_max)?),
        )
    } else {
        (None, None)
    };
    let boosted_success = if config.k_repetitions > 1 {
        Some(boosted_success_prob(config.k_repetitions)?)
    } else {
        None
    };
    Ok(Predictions {
        bound_6_8: HEADLINE_CONSTANT * root,
        budget_13_6: config.budget.unwrap_or_else(|| default_budget(n)) as f64,
        e_exact,
        e_bound,
        base_preset: config.base_preset.name().to_string(),
        boosted_success,
    })
}

/// Nearest-rank percentile of a sorted slice.
pub fn percentile(sorted: &[u64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1] as f64
}

pub fn median(sorted: &[u64]) -> f64 {
    let n = sorted.len();
    match n {
        0 => f64::NAN,
        _ if n % 2 == 1 => sorted[n / 2] as f64,
        _ => (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0,
    }
}

pub fn aggregate(records: &[TrialRecord]) -> Aggregates {
    let count = records.len() as f64;
    let mean_of = |f: fn(&TrialRecord) -> u64| records.iter().map(|r| f(r) as f64).sum::<f64>() / count;
    let mean = mean_of(|r| r.total_queries);
    let var = if records.len() > 1 {
        records
            .iter()
            .map(|r| (r.total_queries as f64 - mean).powi(2))
            .sum::<f64>()
            / (count - 1.0)
    } else {
        0.0
    };
    let mut totals: Vec<u64> = records.iter().map(|r| r.total_queries).collect();
    totals.sort_unstable();
    Aggregates {
        trials: records.len() as u64,
        mean_total_queries: mean,
        std_total_queries: var.sqrt(),
        median_total_queries: median(&totals),
        p90_total_queries: percentile(&totals, 0.90),
        p99_total_queries: percentile(&totals, 0.99),
        mean_grover_queries: mean_of(|r| r.grover_queries),
        mean_verification_queries: mean_of(|r| r.verification_queries),
        success_rate: records.iter().filter(|r| r.succeeded).count() as f64 / count,
    }
}

pub fn to_csv(report: &StatsReport) -> String {
    let mut out = String::with_capacity(64 * (report.records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &report.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.trial,
            r.seed,
            r.n,
            r.final_index,
            r.succeeded,
            r.grover_queries,
            r.verification_queries,
            r.total_queries,
            r.rounds
        );
    }
    out
}

pub fn to_json(report: &StatsReport) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Invariant(e.to_string()))
}

pub fn render(report: &StatsReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(to_csv(report)),
        OutputFormat::Json => to_json(report),
    }
}

/// Recurrence tables for every `(N, preset)` pair as CSV.
pub fn recurrence_csv(ns: &[u64], presets: &[BasePreset]) -> Result<String> {
    let mut out = String::new();
    out.push_str(RECURRENCE_CSV_HEADER);
    out.push('\n');
    for &n in ns {
        for &preset in presets {
            let table = RecurrenceTable::build(RecurrenceParams::with_preset(n, preset)?)?;
            for row in &table.rows {
                let _ = writeln!(
                    out,
                    "{n},{},{preset},{},{},{}",
                    row.t, row.exact, row.telescoped, row.bound
                );
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub cases: u64,
    pub max_deviation: f64,
    /// `(N, t, j)` of the largest deviation.
    pub worst_case: (u64, u64, u64),
}

/// Simulated marked-probability mass against `sin^2((2j+1) theta)` for each
/// `N` in `ns`, `t = 1..=N/2`, `j = 0..=j_max`. The first `t` indices are
/// marked.
pub fn verify_sweep(ns: &[u64], j_max: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport {
        cases: 0,
        max_deviation: 0.0,
        worst_case: (0, 0, 0),
    };
    for &n in ns {
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::Domain(format!("sweep size {n} is not a power of two >= 2")));
        }
        let n_qubits = n.trailing_zeros();
        for t in 1..=n / 2 {
            let marked = |i: usize| (i as u64) < t;
            let mut state = QuantumState::uniform(n_qubits)?;
            let mut counter = QueryCounter::default();
            for j in 0..=j_max {
                if j > 0 {
                    state.grover_power(marked, 1, &mut counter);
                }
                let dev = (state.marked_mass(marked) - analytic_success_probability(n, t, j)).abs();
                report.cases += 1;
                if dev > report.max_deviation {
                    report.max_deviation = dev;
                    report.worst_case = (n, t, j);
                }
            }
        }
    }
    Ok(report)
}

/// Least-squares fit of `y = c sqrt(N)` through the origin. Returns `c` and
/// the coefficient of determination against the mean of `y`.
pub fn fit_sqrt_scaling(points: &[(u64, f64)]) -> (f64, f64) {
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).sqrt()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y).collect();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let c = sxy / sxx;
    let mean_y = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - c * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    (c, 1.0 - ss_res / ss_tot)
}
