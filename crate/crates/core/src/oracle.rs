//! The comparison oracle `f_y(j) = [T[j] > T[y]]` and the table it reads.

use std::cmp::Ordering;
use std::fmt::Debug;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Direction of the search. `Minimize` flips the comparator so the same
/// machinery finds the smallest item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    Maximize,
    Minimize,
}

/// Pairwise distinct, totally ordered items padded to a power-of-two
/// index space for the simulator. Pad indices are never marked.
#[derive(Debug, Clone)]
pub struct Table<T> {
    values: Vec<T>,
    padded_size: usize,
    objective: Objective,
}

impl<T: PartialOrd + Debug> Table<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        Self::with_objective(values, Objective::Maximize)
    }

    pub fn with_objective(values: Vec<T>, objective: Objective) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyTable);
        }
        for (position, v) in values.iter().enumerate() {
            if v.partial_cmp(v) != Some(Ordering::Equal) {
                return Err(Error::Incomparable { position });
            }
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));
        for w in order.windows(2) {
            if values[w[0]] == values[w[1]] {
                let later = w[0].max(w[1]);
                return Err(Error::Duplicate {
                    value: format!("{:?}", values[later]),
                    line: later + 1,
                });
            }
        }
        let padded_size = values.len().next_power_of_two();
        Ok(Self {
            values,
            padded_size,
            objective,
        })
    }
}

impl<T: PartialOrd> Table<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn padded_size(&self) -> usize {
        self.padded_size
    }

    /// Qubits needed to index the padded table (at least one).
    pub fn n_qubits(&self) -> u32 {
        self.padded_size.trailing_zeros().max(1)
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    fn check_guess(&self, y: usize) -> Result<()> {
        if y >= self.values.len() {
            return Err(Error::Index {
                index: y,
                len: self.values.len(),
            });
        }
        Ok(())
    }

    /// True when item `a` beats item `b` under the table's objective.
    pub fn beats(&self, a: usize, b: usize) -> bool {
        match self.objective {
            Objective::Maximize => self.values[a] > self.values[b],
            Objective::Minimize => self.values[a] < self.values[b],
        }
    }

    /// `f_y(j)`: 1 iff `j` is a real index whose item beats the guess `y`.
    pub fn f(&self, y: usize, j: usize) -> Result<bool> {
        self.check_guess(y)?;
        if j >= self.padded_size {
            return Err(Error::Index {
                index: j,
                len: self.padded_size,
            });
        }
        Ok(j < self.values.len() && self.beats(j, y))
    }

    /// Classical ground truth: every index marked by `f_y`.
    pub fn marked_set(&self, y: usize) -> Result<Vec<usize>> {
        self.check_guess(y)?;
        Ok((0..self.values.len()).filter(|&j| self.beats(j, y)).collect())
    }

    /// `|marked_set(y)|` without allocating.
    pub fn marked_count(&self, y: usize) -> Result<usize> {
        self.check_guess(y)?;
        Ok((0..self.values.len()).filter(|&j| self.beats(j, y)).count())
    }

    /// Per-index mask of `f_y` over the padded index space.
    pub fn marked_mask(&self, y: usize) -> Result<Vec<bool>> {
        self.check_guess(y)?;
        let mut mask: Vec<bool> = (0..self.values.len()).map(|j| self.beats(j, y)).collect();
        mask.resize(self.padded_size, false);
        Ok(mask)
    }

    /// Index of the best item, found by a plain scan.
    pub fn best_index(&self) -> usize {
        (1..self.values.len()).fold(0, |best, j| if self.beats(j, best) { j } else { best })
    }
}

impl Table<f64> {
    /// Random permutation of `0..n`, so the number of items above any guess
    /// with value `v` is exactly `n - 1 - v`.
    pub fn permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut values: Vec<f64> = (0..n).map(|v| v as f64).collect();
        values.shuffle(rng);
        Self::new(values)
    }

    /// Parses one number per line. Blank lines and `#` comments are skipped;
    /// errors report 1-based line numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let v: f64 = body.parse().map_err(|_| Error::Parse {
                line: i + 1,
                text: body.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: i + 1,
                    text: body.to_string(),
                });
            }
            values.push(v);
            lines.push(i + 1);
        }
        Self::new(values).map_err(|e| match e {
            Error::Duplicate { value, line } => Error::Duplicate {
                value,
                line: lines[line - 1],
            },
            other => other,
        })
    }
}

/// Oracle queries spent by one run, split by purpose.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryCounter {
    /// One per phase-flip application inside a Grover iteration.
    pub grover_queries: u64,
    /// One per classical check of a measured index.
    pub verification_queries: u64,
}

impl QueryCounter {
    pub fn charge_grover(&mut self, n: u64) {
        self.grover_queries += n;
    }

    pub fn charge_verification(&mut self, n: u64) {
        self.verification_queries += n;
    }

    pub fn total(&self) -> u64 {
        self.grover_queries + self.verification_queries
    }
}
