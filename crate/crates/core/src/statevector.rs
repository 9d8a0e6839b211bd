//! Dense statevector with the operators Grover search needs.
//!
//! Amplitudes live in a flat `Vec<Complex64>` of length `2^n`. The oracle is
//! a sign flip on marked indices and the diffusion operator is the mean
//! reflection `a_i -> 2*mean - a_i`, so one Grover iteration is two O(N)
//! passes with no matrices involved.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::QueryCounter;

/// Largest register the simulator will allocate (2^24 amplitudes).
pub const MAX_QUBITS: u32 = 24;

/// Norm deviation tolerated by [`QuantumState::measure`].
pub const MEASURE_NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
    n_qubits: u32,
}

fn check_qubits(n_qubits: u32) -> Result<usize> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::Size {
            requested: n_qubits,
            cap: MAX_QUBITS,
        });
    }
    Ok(1usize << n_qubits)
}

impl QuantumState {
    /// Equal superposition over all `2^n_qubits` basis states, the result of
    /// a Hadamard on every qubit of `|0...0>`.
    pub fn uniform(n_qubits: u32) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            amplitudes: vec![amp; dim],
            n_qubits,
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: u32, index: usize) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        if index >= dim {
            return Err(Error::Index { index, len: dim });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            n_qubits,
        })
    }

    /// Wraps raw amplitudes. The length must be a power of two within the
    /// qubit cap; normalization is not enforced here (see [`Self::measure`]).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::Domain(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros();
        check_qubits(n_qubits)?;
        Ok(Self {
            amplitudes,
            n_qubits,
        })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Total probability of measuring an index accepted by `marked`.
    pub fn marked_mass(&self, marked: impl Fn(usize) -> bool) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| marked(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Negates the amplitude of every index accepted by `marked`.
    pub fn apply_phase_flip(&mut self, marked: impl Fn(usize) -> bool) {
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if marked(i) {
                *a = -*a;
            }
        }
    }

    /// Reflection about the uniform state, `2|u><u| - I`.
    pub fn apply_diffusion(&mut self) {
        let sum: Complex64 = self.amplitudes.iter().sum();
        let twice_mean = sum * (2.0 / self.amplitudes.len() as f64);
        for a in self.amplitudes.iter_mut() {
            *a = twice_mean - *a;
        }
    }

    /// Applies `iterations` Grover iterations (phase flip then diffusion),
    /// charging one oracle query per iteration.
    pub fn grover_power(
        &mut self,
        marked: impl Fn(usize) -> bool,
        iterations: u64,
        counter: &mut QueryCounter,
    ) {
        for _ in 0..iterations {
            self.apply_phase_flip(&marked);
            self.apply_diffusion();
            counter.charge_grover(1);
        }
    }

    /// Samples a basis index with probability `|a_i|^2`.
    ///
    /// Draws exactly one uniform `f64` from `rng` and walks the cumulative
    /// distribution in index order. The state is left untouched.
    pub fn measure<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > MEASURE_NORM_TOLERANCE {
            return Err(Error::Invariant(format!(
                "measuring a state with squared norm {norm}"
            )));
        }
        let target: f64 = rng.gen::<f64>() * norm;
        let mut cumulative = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                cumulative += p;
                last_nonzero = i;
                if target < cumulative {
                    return Ok(i);
                }
            }
        }
        // rounding left the draw just past the final partial sum
        Ok(last_nonzero)
    }
}

/// Probability that measuring after `iterations` Grover iterations from the
/// uniform state over `n` items with `t` marked yields a marked index:
/// `sin^2((2j+1) theta)` with `sin theta = sqrt(t/n)`.
pub fn analytic_success_probability(n: u64, t: u64, iterations: u64) -> f64 {
    if t == 0 || n == 0 {
        return 0.0;
    }
    let t = t.min(n);
    let theta = (t as f64 / n as f64).sqrt().asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}
