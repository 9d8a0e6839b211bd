//! Maximum finding: start from a random guess and repeatedly Grover-search
//! for an item that beats it, adopting each verified hit as the new guess.

use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::{QueryCounter, Table};
use crate::search::{search_above, SearchLimits, SearchResult};

/// Budget multiplier under which a single run fails with probability
/// below one half.
pub const BUDGET_FACTOR: f64 = 13.6;

/// How a run decides to stop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Stop once the Grover queries spent reach `total_query_budget`.
    #[default]
    Budgeted,
    /// Stop as soon as the guess is the true best item. Consults ground
    /// truth for termination only, never for steering, and ignores the
    /// budget so completion cost is measured without truncation.
    OracleTerminated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxConfig {
    pub total_query_budget: u64,
    pub limits: SearchLimits,
    pub mode: Mode,
}

/// `ceil(13.6 sqrt(n))`.
pub fn default_budget(n_items: usize) -> u64 {
    (BUDGET_FACTOR * (n_items as f64).sqrt()).ceil() as u64
}

impl MaxConfig {
    pub fn for_table<T: PartialOrd>(table: &Table<T>, mode: Mode) -> Self {
        Self {
            total_query_budget: default_budget(table.len()),
            limits: SearchLimits::for_table(table),
            mode,
        }
    }

    pub fn with_budget(mut self, total_query_budget: u64) -> Result<Self> {
        if total_query_budget == 0 {
            return Err(Error::Domain("total query budget must be at least 1".into()));
        }
        self.total_query_budget = total_query_budget;
        Ok(self)
    }
}

/// Trace of one maximum-finding run (or of a boosted group of runs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxRun {
    pub final_index: usize,
    /// Accepted guesses in order, starting with the random initial guess.
    pub guess_trace: Vec<usize>,
    pub total_grover_queries: u64,
    pub total_verification_queries: u64,
    /// Number of `search_above` calls.
    pub rounds: u64,
    /// Per-call results, in order.
    pub searches: Vec<SearchResult>,
}

impl MaxRun {
    pub fn total_queries(&self) -> u64 {
        self.total_grover_queries + self.total_verification_queries
    }
}

pub fn find_max<T, R>(table: &Table<T>, rng: &mut R, config: &MaxConfig) -> Result<MaxRun>
where
    T: PartialOrd,
    R: Rng + ?Sized,
{
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut y = rng.gen_range(0..table.len());
    let mut guess_trace = vec![y];
    let mut counter = QueryCounter::default();
    let mut searches = Vec::new();

    if table.len() > 1 {
        loop {
            let done = match config.mode {
                Mode::Budgeted => counter.grover_queries >= config.total_query_budget,
                Mode::OracleTerminated => table.marked_count(y)? == 0,
            };
            if done {
                break;
            }
            let result = search_above(table, y, rng, &config.limits, &mut counter)?;
            if let Some(x) = result.found {
                y = x;
                guess_trace.push(x);
            }
            searches.push(result);
        }
    }

    Ok(MaxRun {
        final_index: y,
        guess_trace,
        total_grover_queries: counter.grover_queries,
        total_verification_queries: counter.verification_queries,
        rounds: searches.len() as u64,
        searches,
    })
}

/// Runs `k` budgeted [`find_max`] calls back to back on the same stream and
/// keeps the one whose final item is best. Query and round totals cover all
/// `k` runs.
pub fn find_max_boosted<T, R>(
    table: &Table<T>,
    rng: &mut R,
    config: &MaxConfig,
    k: u32,
) -> Result<MaxRun>
where
    T: PartialOrd,
    R: Rng + ?Sized,
{
    if k == 0 {
        return Err(Error::Domain("repetition count k must be at least 1".into()));
    }
    let single = MaxConfig {
        mode: Mode::Budgeted,
        ..*config
    };
    let mut best = find_max(table, rng, &single)?;
    for _ in 1..k {
        let run = find_max(table, rng, &single)?;
        best.total_grover_queries += run.total_grover_queries;
        best.total_verification_queries += run.total_verification_queries;
        best.rounds += run.rounds;
        let mut searches = std::mem::take(&mut best.searches);
        searches.extend_from_slice(&run.searches);
        if table.beats(run.final_index, best.final_index) {
            best.final_index = run.final_index;
            best.guess_trace = run.guess_trace;
        }
        best.searches = searches;
    }
    Ok(best)
}
