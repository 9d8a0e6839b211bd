mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use qmaxfind::harness::{check_run, split_seed, trial_rng};
use qmaxfind::search::simulated_dim;
use qmaxfind::statevector::analytic_success_probability;
use qmaxfind::{
    find_max, find_max_boosted, search_above, MaxConfig, Mode, QuantumState, QueryCounter,
    SearchLimits, Table,
};
use rand::Rng;

use common::{chi_square_critical, chi_square_uniform, clopper_pearson};

fn arbitrary_state(n_qubits: u32) -> impl Strategy<Value = QuantumState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1usize << n_qubits).prop_filter_map(
        "zero vector",
        |pairs| {
            let amps: Vec<Complex64> = pairs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            (norm > 1e-3).then(|| {
                QuantumState::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
            })
        },
    )
}

fn state_and_mask() -> impl Strategy<Value = (QuantumState, Vec<bool>)> {
    (1u32..=6).prop_flat_map(|q| (arbitrary_state(q), prop::collection::vec(any::<bool>(), 1usize << q)))
}

fn max_abs_diff(a: &QuantumState, b: &QuantumState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn operators_preserve_norm((state, mask) in state_and_mask(), ops in prop::collection::vec(any::<bool>(), 0..40)) {
        let mut s = state;
        for flip in ops {
            if flip { s.apply_phase_flip(|i| mask[i]) } else { s.apply_diffusion() }
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn phase_flip_is_involution((state, mask) in state_and_mask()) {
        let mut s = state.clone();
        s.apply_phase_flip(|i| mask[i]);
        s.apply_phase_flip(|i| mask[i]);
        prop_assert!(max_abs_diff(&s, &state) < 1e-12);
    }

    #[test]
    fn diffusion_is_involution((state, _mask) in state_and_mask()) {
        let mut s = state.clone();
        s.apply_diffusion();
        s.apply_diffusion();
        prop_assert!(max_abs_diff(&s, &state) < 1e-12);
    }

    #[test]
    fn grover_commutes_with_relabeling(q in 1u32..=6, seed in any::<u64>(), j in 0u64..8) {
        let dim = 1usize << q;
        let mut rng = trial_rng(seed);
        let mask: Vec<bool> = (0..dim).map(|_| rng.gen_bool(0.3)).collect();
        let mut perm: Vec<usize> = (0..dim).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        // relabeled mask: index perm[i] is marked iff i was
        let mut moved = vec![false; dim];
        for i in 0..dim { moved[perm[i]] = mask[i]; }

        let mut a = QuantumState::uniform(q).unwrap();
        a.grover_power(|i| mask[i], j, &mut QueryCounter::default());
        let mut b = QuantumState::uniform(q).unwrap();
        b.grover_power(|i| moved[i], j, &mut QueryCounter::default());
        for i in 0..dim {
            prop_assert!((a.amplitudes()[i] - b.amplitudes()[perm[i]]).norm() < 1e-12);
        }
    }

    #[test]
    fn grover_matches_closed_form(q in 1u32..=8, t_frac in 0.0f64..1.0, j in 0u64..12) {
        let n = 1u64 << q;
        let t = ((t_frac * n as f64) as u64).max(1);
        let mut s = QuantumState::uniform(q).unwrap();
        let mut counter = QueryCounter::default();
        s.grover_power(|i| (i as u64) < t, j, &mut counter);
        prop_assert_eq!(counter.grover_queries, j);
        let mass = s.marked_mass(|i| (i as u64) < t);
        prop_assert!((mass - analytic_success_probability(n, t, j)).abs() < 1e-9);
    }

    #[test]
    fn runs_improve_strictly_and_account_exactly(n in 1usize..300, seed in any::<u64>(), oracle_mode in any::<bool>()) {
        let mut rng = trial_rng(seed);
        let table = Table::permutation(n, &mut rng).unwrap();
        let mode = if oracle_mode { Mode::OracleTerminated } else { Mode::Budgeted };
        let config = MaxConfig::for_table(&table, mode);
        let run = find_max(&table, &mut rng, &config).unwrap();
        prop_assert!(check_run(&table, &run).is_ok());
        let values: Vec<f64> = run.guess_trace.iter().map(|&i| table.values()[i]).collect();
        prop_assert!(values.windows(2).all(|w| w[1] > w[0]));
        let counts: Vec<usize> = run.guess_trace.iter().map(|&y| table.marked_count(y).unwrap()).collect();
        prop_assert!(counts.windows(2).all(|w| w[1] < w[0]));
        if oracle_mode {
            prop_assert_eq!(run.final_index, table.best_index());
        } else if n > 1 {
            // a round in flight may finish past the budget, but never more than one
            let last = run.searches.last().unwrap().grover_queries_spent;
            prop_assert!(run.total_grover_queries >= config.total_query_budget);
            prop_assert!(run.total_grover_queries - last < config.total_query_budget);
        }
    }

    #[test]
    fn runs_are_reproducible(n in 2usize..200, seed in any::<u64>(), k in 1u32..4) {
        let table = Table::permutation(n, &mut trial_rng(seed ^ 1)).unwrap();
        let config = MaxConfig::for_table(&table, Mode::Budgeted);
        let a = find_max_boosted(&table, &mut trial_rng(seed), &config, k).unwrap();
        let b = find_max_boosted(&table, &mut trial_rng(seed), &config, k).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn uniform_measurement_passes_chi_square() {
    let s = QuantumState::uniform(2).unwrap();
    let mut rng = trial_rng(2024);
    let mut counts = [0u64; 4];
    for _ in 0..40_000 {
        counts[s.measure(&mut rng).unwrap()] += 1;
    }
    let stat = chi_square_uniform(&counts);
    assert!(stat < chi_square_critical(3, 0.99), "chi2 = {stat}, counts {counts:?}");
}

fn index_of(table: &Table<f64>, value: usize) -> usize {
    table.values().iter().position(|&v| v == value as f64).unwrap()
}

/// Mean Grover queries of `search_above` over `trials` seeds, with the
/// guess chosen so that exactly `t` items beat it.
fn mean_search_cost(n: usize, t: usize, trials: u64, master: u64) -> (f64, u64) {
    let mut total = 0u64;
    let mut found = 0u64;
    for trial in 0..trials {
        let mut rng = trial_rng(split_seed(master, trial));
        let table = Table::permutation(n, &mut rng).unwrap();
        let y = index_of(&table, n - 1 - t);
        let limits = SearchLimits::for_table(&table);
        let r = search_above(&table, y, &mut rng, &limits, &mut QueryCounter::default()).unwrap();
        total += r.grover_queries_spent;
        found += r.found.is_some() as u64;
    }
    (total as f64 / trials as f64, found)
}

#[test]
fn search_cost_within_six_root_n_over_t() {
    for n in [16usize, 64, 256] {
        for t in [1, 2, n / 4, n / 2] {
            let (mean, _) = mean_search_cost(n, t, 2000, 17);
            let bound = 6.0 * (n as f64 / t as f64).sqrt();
            assert!(mean <= bound, "N={n} t={t}: mean {mean} > {bound}");
        }
    }
}

#[test]
fn search_with_single_marked_item_in_four() {
    let (mean, found) = mean_search_cost(4, 1, 1000, 5);
    assert!(mean <= 12.0, "mean {mean}");
    assert!(found >= 990);
}

#[test]
fn search_from_minimum_succeeds_and_is_uniform() {
    for n in [16usize, 64] {
        let table = Table::permutation(n, &mut trial_rng(n as u64)).unwrap();
        let y = index_of(&table, 0);
        let limits = SearchLimits::for_table(&table);
        let mut counts = vec![0u64; n];
        let trials = 8000u64;
        for trial in 0..trials {
            let mut rng = trial_rng(split_seed(99, trial));
            let r = search_above(&table, y, &mut rng, &limits, &mut QueryCounter::default()).unwrap();
            if let Some(x) = r.found {
                counts[x] += 1;
            }
        }
        let found: u64 = counts.iter().sum();
        assert!(found as f64 >= 0.99 * trials as f64, "found {found}");
        assert_eq!(counts[y], 0);
        let marked: Vec<u64> = counts.iter().enumerate().filter(|&(i, _)| i != y).map(|(_, &c)| c).collect();
        let stat = chi_square_uniform(&marked);
        assert!(stat < chi_square_critical(n - 2, 0.99), "N={n} chi2 {stat}");
    }
}

#[test]
fn search_conditioned_on_success_is_uniform_over_marked() {
    let n = 64;
    let t = 8;
    let table = Table::permutation(n, &mut trial_rng(3)).unwrap();
    let y = index_of(&table, n - 1 - t);
    let marked = table.marked_set(y).unwrap();
    let limits = SearchLimits::for_table(&table);
    let mut counts = vec![0u64; n];
    for trial in 0..6000 {
        let mut rng = trial_rng(split_seed(7, trial));
        if let Some(x) = search_above(&table, y, &mut rng, &limits, &mut QueryCounter::default()).unwrap().found {
            counts[x] += 1;
        }
    }
    let observed: Vec<u64> = marked.iter().map(|&i| counts[i]).collect();
    assert_eq!(observed.iter().sum::<u64>(), counts.iter().sum::<u64>());
    let stat = chi_square_uniform(&observed);
    assert!(stat < chi_square_critical(t - 1, 0.99), "chi2 {stat}");
}

#[test]
fn padded_tables_never_measure_into_pads() {
    let table = Table::permutation(37, &mut trial_rng(1)).unwrap();
    assert_eq!(simulated_dim(&table), 64);
    let config = MaxConfig::for_table(&table, Mode::OracleTerminated);
    for seed in 0..200 {
        let run = find_max(&table, &mut trial_rng(seed), &config).unwrap();
        assert!(run.guess_trace.iter().all(|&i| i < 37));
        assert_eq!(run.final_index, table.best_index());
    }
}

fn success_rate(n: usize, k: u32, trials: u64, master: u64) -> (u64, Vec<bool>) {
    let mut outcomes = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = trial_rng(split_seed(master, trial));
        let table = Table::permutation(n, &mut rng).unwrap();
        let config = MaxConfig::for_table(&table, Mode::Budgeted);
        let run = find_max_boosted(&table, &mut rng, &config, k).unwrap();
        outcomes.push(run.final_index == table.best_index());
    }
    (outcomes.iter().filter(|&&s| s).count() as u64, outcomes)
}

#[test]
fn boosting_seven_times_meets_target() {
    let trials = 1000;
    let (successes, _) = success_rate(256, 7, trials, 21);
    let (_, hi) = clopper_pearson(successes, trials, 0.99);
    assert!(hi >= 0.992_187_5, "{successes}/{trials}");
}

#[test]
fn best_of_three_dominates_single_run() {
    // small budget so single runs fail often enough to compare
    let trials = 1000u64;
    let mut single = 0;
    let mut triple = 0;
    for trial in 0..trials {
        let seed = split_seed(5, trial);
        let table = Table::permutation(256, &mut trial_rng(seed ^ 0xabc)).unwrap();
        let config = MaxConfig::for_table(&table, Mode::Budgeted).with_budget(20).unwrap();
        let one = find_max_boosted(&table, &mut trial_rng(seed), &config, 1).unwrap();
        let three = find_max_boosted(&table, &mut trial_rng(seed), &config, 3).unwrap();
        // the first repetition of the boosted run replays the single run
        assert!(table.values()[three.final_index] >= table.values()[one.final_index]);
        single += (one.final_index == table.best_index()) as u64;
        triple += (three.final_index == table.best_index()) as u64;
    }
    assert!(triple >= single, "{triple} < {single}");
    assert!(single < trials);
}
