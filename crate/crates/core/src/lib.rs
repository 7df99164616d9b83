//! Exact shortest reset words for synchronizing automata.
//!
//! The search runs a breadth-first search over state subsets from both ends
//! at once: images of the full state set going forward, preimages of
//! singletons going backward. Visited sets and the current levels are kept
//! in compressed binary tries that answer "is any stored set a subset (or
//! superset) of this one" by a pruned depth-first walk.
//!
//! Besides the solver, the crate carries the random-automaton generators
//! and the batch experiment harness used to estimate the expected length of
//! shortest reset words.

pub mod dfa;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod oracle;
pub mod search;
pub mod state_set;
pub mod trie;

pub use dfa::{
    greedy_reset_word, parse_automata, reduce_reachable, Dfa, InverseDfa, PairAutomaton, Reduction,
};
pub use error::{Error, Result};
pub use experiment::{
    fit_sqrt_model, hoeffding_bound, run_batch, sink_component_size, BatchConfig, BatchOutput,
    ExperimentRecord, ExperimentStats, SqrtFit,
};
pub use generators::{cerny, random_dfa, RngAlgorithm, RngSpec};
pub use search::{shortest_reset_word, SearchConfig, SearchResult, SearchStats};
pub use state_set::StateSet;
pub use trie::{InsertOutcome, Keep, SubsetTrie};
