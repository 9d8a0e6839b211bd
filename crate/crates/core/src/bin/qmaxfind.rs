use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qmaxfind::analysis::BasePreset;
use qmaxfind::harness::{
    self, classical_baseline, recurrence_csv, run_experiment, trial_rng, verify_sweep,
    ExperimentConfig, OutputFormat, TableSource,
};
use qmaxfind::{Error, Mode, Table};

/// Tolerance of the statevector-vs-closed-form sweep.
const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "qmaxfind", version, about = "Grover-based maximum finding: simulation and analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded ensemble of maximum-finding trials.
    Simulate(SimulateArgs),
    /// Emit the expected-cost recurrence, telescoped sum and bound as CSV.
    Analyze(AnalyzeArgs),
    /// Compare simulated Grover success probabilities with the closed form.
    Verify(VerifyArgs),
    /// Classical single-scan argmax.
    Baseline(TableArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Budgeted,
    OracleTerminated,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Six,
    Pi4,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenArg {
    Permutation,
}

impl From<BaseArg> for BasePreset {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Six => BasePreset::Six,
            BaseArg::Pi4 => BasePreset::Pi4,
        }
    }
}

#[derive(Args)]
struct TableArgs {
    /// Number of items for a generated table.
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generate the table instead of reading one.
    #[arg(long, value_enum, default_value = "permutation", conflicts_with = "input")]
    gen: GenArg,
    /// Table file: one number per line, `#` starts a comment.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    table: TableArgs,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, value_enum, default_value = "budgeted")]
    mode: ModeArg,
    /// Independent repetitions per trial; the best result is kept.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Per-run Grover query budget (default ceil(13.6 sqrt(N))).
    #[arg(long)]
    budget: Option<u64>,
    /// Base value E(N,1) used for the predictions.
    #[arg(long, value_enum, default_value = "pi4")]
    base: BaseArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Table sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [16u64, 64, 256, 1024, 4096])]
    n: Vec<u64>,
    /// Base preset; both when omitted.
    #[arg(long, value_enum)]
    base: Option<BaseArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Register sizes, comma separated powers of two.
    #[arg(long, value_delimiter = ',', default_values_t = [4u64, 8, 16, 32])]
    n: Vec<u64>,
    /// Largest Grover iteration count checked.
    #[arg(long, default_value_t = 10)]
    j_max: u64,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_table(args: &TableArgs) -> Result<Table<f64>, Error> {
    match &args.input {
        Some(path) => Table::parse(&fs::read_to_string(path)?),
        None => match args.gen {
            GenArg::Permutation => Table::permutation(args.n, &mut trial_rng(args.seed)),
        },
    }
}

fn simulate(args: SimulateArgs) -> Result<(), Error> {
    let format = match args.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    };
    let config = ExperimentConfig {
        n_items: args.table.n,
        table_source: match args.table.input {
            Some(path) => TableSource::File(path),
            None => TableSource::Permutation,
        },
        trials: args.trials,
        master_seed: args.table.seed,
        mode: match args.mode {
            ModeArg::Budgeted => Mode::Budgeted,
            ModeArg::OracleTerminated => Mode::OracleTerminated,
        },
        k_repetitions: args.k,
        base_preset: args.base.into(),
        output_format: format,
        budget: args.budget,
        jobs: args.jobs,
    };
    let report = run_experiment(&config)?;
    let a = &report.aggregates;
    eprintln!(
        "n={} mode={} k={} trials={} mean_total={:.3} median={} p90={} p99={} success={:.4} bound_6_8={:.3}",
        report.n,
        report.mode,
        report.k,
        a.trials,
        a.mean_total_queries,
        a.median_total_queries,
        a.p90_total_queries,
        a.p99_total_queries,
        a.success_rate,
        report.predictions.bound_6_8,
    );
    emit(&harness::render(&report, format)?, args.out.as_ref())
}

fn analyze(args: AnalyzeArgs) -> Result<(), Error> {
    let presets: Vec<BasePreset> = match args.base {
        Some(b) => vec![b.into()],
        None => BasePreset::ALL.to_vec(),
    };
    emit(&recurrence_csv(&args.n, &presets)?, args.out.as_ref())
}

fn verify(args: VerifyArgs) -> Result<(), Error> {
    let report = verify_sweep(&args.n, args.j_max)?;
    let (n, t, j) = report.worst_case;
    println!(
        "cases={} max_deviation={:.3e} worst=(N={n}, t={t}, j={j}) tolerance={VERIFY_TOLERANCE:e}",
        report.cases, report.max_deviation
    );
    if report.max_deviation > VERIFY_TOLERANCE {
        return Err(Error::Invariant(format!(
            "simulated success probability deviates by {:e}",
            report.max_deviation
        )));
    }
    println!("ok");
    Ok(())
}

fn baseline(args: TableArgs) -> Result<(), Error> {
    let table = load_table(&args)?;
    let (index, comparisons) = classical_baseline(&table)?;
    println!("index={index} value={} comparisons={comparisons}", table.values()[index]);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Analyze(a) => analyze(a),
        Command::Verify(a) => verify(a),
        Command::Baseline(a) => baseline(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
