//! Grover search for an item that beats the current guess when the number
//! of such items is unknown.
//!
//! Each attempt picks an iteration count `j` uniformly from `0..ceil(m)`,
//! runs `j` Grover iterations on a fresh uniform superposition, measures, and
//! checks the outcome classically. On failure the cutoff grows as
//! `m <- min(growth_factor * m, m_cap)`. A call gives up once it has spent
//! `round_query_budget` Grover queries, which is also how the no-marked-item
//! case terminates.

use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::{QueryCounter, Table};
use crate::statevector::QuantumState;

pub const DEFAULT_GROWTH_FACTOR: f64 = 6.0 / 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchLimits {
    pub growth_factor: f64,
    pub m_cap: f64,
    pub round_query_budget: u64,
}

impl SearchLimits {
    pub fn new(growth_factor: f64, m_cap: f64, round_query_budget: u64) -> Result<Self> {
        // written so that NaN fails too
        if !(growth_factor > 1.0) {
            return Err(Error::Domain(format!(
                "growth factor must exceed 1, got {growth_factor}"
            )));
        }
        if !(m_cap >= 1.0) || !m_cap.is_finite() {
            return Err(Error::Domain(format!("m_cap must be >= 1, got {m_cap}")));
        }
        Ok(Self {
            growth_factor,
            m_cap,
            round_query_budget,
        })
    }

    /// Defaults for a simulated register of `dim` basis states: growth 6/5,
    /// `m_cap = sqrt(dim)`, budget `ceil(3 sqrt(dim)) + 10`.
    pub fn for_dim(dim: usize) -> Self {
        let root = (dim as f64).sqrt();
        Self {
            growth_factor: DEFAULT_GROWTH_FACTOR,
            m_cap: root.max(1.0),
            round_query_budget: (3.0 * root).ceil() as u64 + 10,
        }
    }

    /// [`Self::for_dim`] for the register that indexes `table`.
    pub fn for_table<T: PartialOrd>(table: &Table<T>) -> Self {
        Self::for_dim(simulated_dim(table))
    }
}

/// Outcome of one `search_above` call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchResult {
    /// A verified index beating the guess, if one was found.
    pub found: Option<usize>,
    pub grover_queries_spent: u64,
    pub verification_queries_spent: u64,
    /// Measurement attempts made.
    pub rounds: u64,
}

/// Size of the statevector used for `table`: the padded size, but never
/// below a single qubit.
pub fn simulated_dim<T: PartialOrd>(table: &Table<T>) -> usize {
    1usize << table.n_qubits()
}

/// Searches for an index whose item beats `table[y]`.
///
/// Queries are charged to `counter` as they are spent and also reported in
/// the returned [`SearchResult`]. Measurements that land on a pad index are
/// rejected without a verification query; the schedule moves on to the next
/// attempt.
pub fn search_above<T, R>(
    table: &Table<T>,
    y: usize,
    rng: &mut R,
    limits: &SearchLimits,
    counter: &mut QueryCounter,
) -> Result<SearchResult>
where
    T: PartialOrd,
    R: Rng + ?Sized,
{
    let n_qubits = table.n_qubits();
    let mut mask = table.marked_mask(y)?;
    mask.resize(1usize << n_qubits, false);
    let marked = |i: usize| mask[i];

    let mut spent = QueryCounter::default();
    let mut rounds = 0u64;
    let mut m = 1.0f64;
    let mut found = None;
    // with the cutoff pinned at 1 every attempt uses j = 0 and costs no Grover
    // query, so the attempt count is bounded by the budget instead
    let zero_cost_schedule = limits.m_cap.ceil() <= 1.0;

    while spent.grover_queries < limits.round_query_budget {
        if zero_cost_schedule && rounds >= limits.round_query_budget {
            break;
        }
        rounds += 1;
        let j = rng.gen_range(0..m.ceil() as u64);
        let mut state = QuantumState::uniform(n_qubits)?;
        state.grover_power(marked, j, &mut spent);
        let x = state.measure(rng)?;
        if x < table.len() {
            spent.charge_verification(1);
            if table.f(y, x)? {
                found = Some(x);
                break;
            }
        }
        m = (limits.growth_factor * m).min(limits.m_cap);
    }

    counter.charge_grover(spent.grover_queries);
    counter.charge_verification(spent.verification_queries);
    Ok(SearchResult {
        found,
        grover_queries_spent: spent.grover_queries,
        verification_queries_spent: spent.verification_queries,
        rounds,
    })
}
