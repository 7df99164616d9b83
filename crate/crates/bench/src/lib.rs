//! Fixtures shared by the benchmarks.

use shortreset::{random_dfa, Dfa, RngSpec, StateSet};

/// Synchronizing random automata, skipping the rare ones that are not.
pub fn synchronizing_samples(n: usize, k: usize, count: usize, seed: u64) -> Vec<Dfa> {
    (0..)
        .map(|i| random_dfa(n, k, RngSpec::new(seed).for_index(i)))
        .filter(Dfa::is_synchronizing)
        .take(count)
        .collect()
}

/// Uniform random subsets of `0..n`, each state included with probability 1/2.
pub fn random_sets(n: usize, count: usize, seed: u64) -> Vec<StateSet> {
    use rand::Rng;
    let mut rng = RngSpec::new(seed).rng();
    (0..count)
        .map(|_| {
            let mut s = StateSet::empty(n);
            for q in 0..n {
                if rng.gen_bool(0.5) {
                    s.insert(q);
                }
            }
            if s.is_empty() {
                s.insert(0);
            }
            s
        })
        .collect()
}
