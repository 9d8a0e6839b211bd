//! Expected query count of maximum finding, evaluated three ways.
//!
//! `E(N,t)` is the expected number of oracle queries to reach the maximum
//! when `t` items beat the current guess. With an inner search costing at
//! most `6 sqrt(N/t)`:
//!
//! * exact recurrence: `E(N,t) = (1/t) sum_{i<t} E(N,i) + 6 sqrt(N/t)`
//! * telescoped sum: `E(N,t) = E(N,1) + 6 sqrt(N) sum_{i=2..t} (sqrt(i) - sqrt(i-1)) / i`
//! * integral bound: `E(N,t) <= E(N,1) + 6 sqrt(N) (1 - 1/sqrt(t))`
//!
//! `E(N,1)` is not pinned down by the recurrence, so it is a parameter with
//! two presets (see [`BasePreset`]).

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Constant in the inner-search cost `6 sqrt(N/t)`.
pub const INNER_SEARCH_CONSTANT: f64 = 6.0;
/// Headline expected-cost constant: `E <= 6.8 sqrt(N)`.
pub const HEADLINE_CONSTANT: f64 = 6.8;

/// Choice of base value `E(N,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasePreset {
    /// `6 sqrt(N)`: the recurrence at `t = 1` with an empty sum.
    Six,
    /// `(pi/4) sqrt(N)`: the base under which the integral bound at
    /// `t = N-1` stays below `6.8 sqrt(N)`.
    Pi4,
}

impl BasePreset {
    pub const ALL: [BasePreset; 2] = [BasePreset::Six, BasePreset::Pi4];

    pub fn coefficient(self) -> f64 {
        match self {
            BasePreset::Six => INNER_SEARCH_CONSTANT,
            BasePreset::Pi4 => FRAC_PI_4,
        }
    }

    pub fn base_value(self, n: u64) -> f64 {
        self.coefficient() * (n as f64).sqrt()
    }

    pub fn name(self) -> &'static str {
        match self {
            BasePreset::Six => "six",
            BasePreset::Pi4 => "pi4",
        }
    }
}

impl fmt::Display for BasePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "six" => Ok(BasePreset::Six),
            "pi4" => Ok(BasePreset::Pi4),
            other => Err(Error::Domain(format!(
                "unknown base preset {other:?} (expected six or pi4)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceParams {
    pub n: u64,
    pub t_max: u64,
    pub base_e1: f64,
}

impl RecurrenceParams {
    pub fn new(n: u64, t_max: u64, base_e1: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("N must be at least 2, got {n}")));
        }
        if t_max < 1 || t_max >= n {
            return Err(Error::Domain(format!(
                "t_max must lie in [1, {}], got {t_max}",
                n - 1
            )));
        }
        if !(base_e1 > 0.0) || !base_e1.is_finite() {
            return Err(Error::Domain(format!("E(N,1) must be positive, got {base_e1}")));
        }
        Ok(Self { n, t_max, base_e1 })
    }

    /// Full range `t_max = N - 1` with the preset's base value.
    pub fn with_preset(n: u64, preset: BasePreset) -> Result<Self> {
        Self::new(n, n.saturating_sub(1).max(1), preset.base_value(n))
    }

    fn check_t(&self, t: u64) -> Result<()> {
        if t < 1 || t > self.t_max {
            return Err(Error::Domain(format!(
                "t = {t} outside [1, {}]",
                self.t_max
            )));
        }
        Ok(())
    }

    fn sqrt_n(&self) -> f64 {
        (self.n as f64).sqrt()
    }
}

/// `E(N,1..=t)` from the recurrence, using a running sum.
pub fn exact_series(params: &RecurrenceParams, t: u64) -> Result<Vec<f64>> {
    params.check_t(t)?;
    let n = params.n as f64;
    let mut values = Vec::with_capacity(t as usize);
    values.push(params.base_e1);
    let mut running = params.base_e1;
    for i in 2..=t {
        let i = i as f64;
        let e = running / i + INNER_SEARCH_CONSTANT * (n / i).sqrt();
        values.push(e);
        running += e;
    }
    Ok(values)
}

pub fn expected_exact(params: &RecurrenceParams, t: u64) -> Result<f64> {
    Ok(*exact_series(params, t)?.last().expect("t >= 1"))
}

/// `E(N,1..=t)` from the telescoped sum.
pub fn telescoped_series(params: &RecurrenceParams, t: u64) -> Result<Vec<f64>> {
    params.check_t(t)?;
    let scale = INNER_SEARCH_CONSTANT * params.sqrt_n();
    let mut values = Vec::with_capacity(t as usize);
    let mut sum = 0.0;
    values.push(params.base_e1);
    for i in 2..=t {
        let i = i as f64;
        sum += (i.sqrt() - (i - 1.0).sqrt()) / i;
        values.push(params.base_e1 + scale * sum);
    }
    Ok(values)
}

pub fn expected_telescoped(params: &RecurrenceParams, t: u64) -> Result<f64> {
    Ok(*telescoped_series(params, t)?.last().expect("t >= 1"))
}

pub fn expected_bound(params: &RecurrenceParams, t: u64) -> Result<f64> {
    params.check_t(t)?;
    Ok(params.base_e1 + INNER_SEARCH_CONSTANT * params.sqrt_n() * (1.0 - 1.0 / (t as f64).sqrt()))
}

/// Markov bound on `P(X >= k E[X])`: `min(1, 1/k)`.
pub fn markov_tail_bound(k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("k must be positive, got {k}")));
    }
    Ok((1.0 / k).min(1.0))
}

/// Success probability of the best of `k` independent runs that each fail
/// with probability at most one half: `1 - 2^-k`.
pub fn boosted_success_prob(k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    Ok(1.0 - 0.5f64.powi(k as i32))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceRow {
    pub t: u64,
    pub exact: f64,
    pub telescoped: f64,
    pub bound: f64,
}

/// All three evaluations for `t = 1..=t_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    pub params: RecurrenceParams,
    pub rows: Vec<RecurrenceRow>,
}

impl RecurrenceTable {
    pub fn build(params: RecurrenceParams) -> Result<Self> {
        let exact = exact_series(&params, params.t_max)?;
        let telescoped = telescoped_series(&params, params.t_max)?;
        let rows = (1..=params.t_max)
            .zip(exact.into_iter().zip(telescoped))
            .map(|(t, (exact, telescoped))| {
                Ok(RecurrenceRow {
                    t,
                    exact,
                    telescoped,
                    bound: expected_bound(&params, t)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { params, rows })
    }

    /// Largest `|exact - telescoped|` over the table.
    pub fn max_telescoping_gap(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.exact - r.telescoped).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `exact - bound`; non-positive when the bound dominates.
    pub fn max_bound_excess(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.exact - r.bound)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T2: f64 = 72.426_406_871_192_85;

    fn p100(base: f64) -> RecurrenceParams {
        RecurrenceParams::new(100, 99, base).unwrap()
    }

    #[test]
    fn exact_examples() {
        let p = RecurrenceParams::with_preset(100, BasePreset::Six).unwrap();
        assert_eq!(p.base_e1, 60.0);
        assert_eq!(expected_exact(&p, 1).unwrap(), 60.0);
        assert!((expected_exact(&p100(60.0), 2).unwrap() - T2).abs() < 1e-9);
        let via_difference = 60.0 + (6.0 * 10.0 / 2.0) * (2f64.sqrt() - 1.0);
        assert!((via_difference - T2).abs() < 1e-9);
    }

    #[test]
    fn telescoped_examples() {
        let p = p100(60.0);
        assert_eq!(expected_telescoped(&p, 1).unwrap(), 60.0);
        assert!((expected_telescoped(&p, 2).unwrap() - T2).abs() < 1e-9);
        let a = expected_exact(&p, 99).unwrap();
        let b = expected_telescoped(&p, 99).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn bound_examples() {
        let p = p100(8.0);
        assert_eq!(expected_bound(&p, 1).unwrap(), 8.0);
        let b = expected_bound(&p, 99).unwrap();
        assert!((b - (8.0 + 60.0 * (1.0 - 1.0 / 99f64.sqrt()))).abs() < 1e-12);
        assert!((b - 61.970).abs() < 1e-3);
        assert!(b <= 68.0);
    }

    #[test]
    fn markov_and_boosting() {
        assert_eq!(markov_tail_bound(2.0).unwrap(), 0.5);
        assert_eq!(markov_tail_bound(1.0).unwrap(), 1.0);
        assert_eq!(markov_tail_bound(0.25).unwrap(), 1.0);
        assert!((markov_tail_bound(10.0).unwrap() - 0.1).abs() < 1e-15);
        assert!(markov_tail_bound(0.0).is_err());

        assert_eq!(boosted_success_prob(1).unwrap(), 0.5);
        assert_eq!(boosted_success_prob(7).unwrap(), 0.9921875);
        assert!(boosted_success_prob(0).is_err());
        let seq: Vec<f64> = (1..=40).map(|k| boosted_success_prob(k).unwrap()).collect();
        assert!(seq.windows(2).all(|w| w[1] > w[0]));
        assert!(1.0 - seq[39] < 1e-11);
    }

    #[test]
    fn params_validation() {
        assert!(RecurrenceParams::new(1, 1, 1.0).is_err());
        assert!(RecurrenceParams::new(10, 10, 1.0).is_err());
        assert!(RecurrenceParams::new(10, 0, 1.0).is_err());
        assert!(RecurrenceParams::new(10, 9, 0.0).is_err());
        let p = p100(60.0);
        assert!(expected_exact(&p, 0).is_err());
        assert!(expected_bound(&p, 100).is_err());
    }

    #[test]
    fn presets_parse() {
        assert_eq!("six".parse::<BasePreset>().unwrap(), BasePreset::Six);
        assert_eq!("pi4".parse::<BasePreset>().unwrap(), BasePreset::Pi4);
        assert!("seven".parse::<BasePreset>().is_err());
        assert!((BasePreset::Pi4.base_value(64) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn table_is_monotone() {
        for preset in BasePreset::ALL {
            let t = RecurrenceTable::build(RecurrenceParams::with_preset(256, preset).unwrap())
                .unwrap();
            assert_eq!(t.rows.len(), 255);
            assert!(t.rows.windows(2).all(|w| w[1].exact >= w[0].exact));
        }
    }

    #[test]
    fn six_base_closes_the_algebra() {
        let t = RecurrenceTable::build(RecurrenceParams::with_preset(256, BasePreset::Six).unwrap())
            .unwrap();
        assert!(t.max_telescoping_gap() < 1e-9);
        assert!(t.max_bound_excess() <= 1e-9);
    }

    #[test]
    fn other_bases_shift_by_a_constant() {
        // for t >= 2 the recurrence exceeds the telescoped sum by
        // 3 sqrt(N) - E(N,1)/2, which vanishes only for E(N,1) = 6 sqrt(N)
        let n = 256u64;
        let p = RecurrenceParams::with_preset(n, BasePreset::Pi4).unwrap();
        let shift = 3.0 * 16.0 - p.base_e1 / 2.0;
        let table = RecurrenceTable::build(p).unwrap();
        for row in &table.rows[1..] {
            assert!((row.exact - row.telescoped - shift).abs() < 1e-9);
        }
        assert!(table.max_bound_excess() > 0.0);
    }
}
