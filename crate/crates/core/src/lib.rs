//! Statevector simulation of Grover-based maximum finding, with exact
//! oracle-query accounting and tools for checking its expected query cost.
//!
//! * [`statevector`]: dense amplitudes, oracle phase flip, diffusion, measurement.
//! * [`oracle`]: the comparison table and query counters.
//! * [`search`]: Grover search for a marked item with unknown marked count.
//! * [`maxfind`]: the maximum-finding loop and its boosted variant.
//! * [`analysis`]: the expected-cost recurrence, its closed forms and bounds.
//! * [`harness`]: seeded trial ensembles and CSV/JSON reports.

pub mod analysis;
pub mod error;
pub mod harness;
pub mod maxfind;
pub mod oracle;
pub mod search;
pub mod statevector;

pub use error::{Error, Result};
pub use maxfind::{find_max, find_max_boosted, MaxConfig, MaxRun, Mode};
pub use oracle::{Objective, QueryCounter, Table};
pub use search::{search_above, SearchLimits, SearchResult};
pub use statevector::QuantumState;
