//! Exact shortest reset words by bidirectional subset search.
//!
//! The forward side starts from the full state set and applies letters; the
//! backward side starts from all singletons and takes preimages. Each side
//! keeps its current level as an antichain (minimal sets forward, maximal
//! sets backward) and a trie of visited sets used to skip images that cannot
//! lead to a shorter word. After every step the two levels are compared; the
//! first time a backward set contains a forward set, the sum of both depths
//! is the length of a shortest reset word.

mod fallback;
mod frontier;

use std::time::{Duration, Instant};

pub use fallback::hybrid_fallback;
pub use frontier::{
    bfs_step, choose_by_len, choose_step, ibfs_step, meet_check, reconstruct_word, Direction,
    Frontier, History, Meet, Provenance,
};

use crate::dfa::{greedy_reset_word, reduce_reachable, Dfa, InverseDfa, Reduction};
use crate::error::{usage, Error, Result};
use crate::state_set::StateSet;
use crate::trie::{Keep, SubsetTrie};
use frontier::trie_of;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Weight of the backward list when choosing the next step. `None`
    /// means the alphabet size.
    pub ibfs_weight: Option<f64>,
    /// Forward levels explored before dropping unreachable states.
    pub warmup_steps: usize,
    /// Byte budget for tries, levels and provenance; beyond it the search
    /// switches to the memoryless hybrid mode.
    pub memory_limit: usize,
    /// A visited trie is rebuilt once it has grown by this factor since its
    /// last rebuild.
    pub rebuild_threshold: f64,
    pub reconstruct_word: bool,
    /// Hybrid mode splits lists longer than this...
    pub fallback_split_len: usize,
    /// ...into this many chunks.
    pub fallback_chunks: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            ibfs_weight: None,
            warmup_steps: 3,
            memory_limit: 2 << 30,
            rebuild_threshold: 2.0,
            reconstruct_word: true,
            fallback_split_len: 1024,
            fallback_chunks: 8,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(w) = self.ibfs_weight {
            if !(w.is_finite() && w > 0.0) {
                return Err(usage("ibfs weight must be positive"));
            }
        }
        if !(self.rebuild_threshold.is_finite() && self.rebuild_threshold >= 1.0) {
            return Err(usage("rebuild threshold must be at least 1"));
        }
        if self.fallback_split_len == 0 || self.fallback_chunks == 0 {
            return Err(usage(
                "fallback split length and chunk count must be positive",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchStats {
    /// Forward levels, warmup included.
    pub forward_steps: usize,
    pub backward_steps: usize,
    pub warmup_steps: usize,
    /// States left after the unreachable-state reduction.
    pub reduced_states: usize,
    /// Largest total number of sets held by both visited tries.
    pub peak_stored_sets: usize,
    pub forward_visits: u64,
    pub backward_visits: u64,
    pub fallback_used: bool,
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub length: usize,
    /// A reset word of that length for the original automaton, when requested.
    pub word: Option<Vec<usize>>,
    pub stats: SearchStats,
}

/// A bidirectional search in progress. [`BidirectionalSearch::run`] drives it
/// to completion; the step-wise API exists for inspection.
pub struct BidirectionalSearch<'a> {
    original: &'a Dfa,
    reduction: Option<Reduction>,
    dfa: Dfa,
    inv: InverseDfa,
    cfg: SearchConfig,
    weight: f64,
    forward: Frontier,
    backward: Frontier,
    forward_history: History,
    backward_history: History,
    forward_visited: SubsetTrie,
    backward_visited: SubsetTrie,
    // holds exactly the current forward level
    forward_aux: SubsetTrie,
    forward_rebuilt_at: usize,
    backward_rebuilt_at: usize,
    stats: SearchStats,
    started: Instant,
}

impl<'a> BidirectionalSearch<'a> {
    /// Checks synchronization, runs the warmup levels on the original
    /// automaton and restricts the rest of the search to the states still
    /// reachable.
    pub fn new(original: &'a Dfa, cfg: SearchConfig) -> Result<Self> {
        cfg.validate()?;
        let started = Instant::now();
        if !original.is_synchronizing() {
            return Err(Error::NotSynchronizing);
        }
        let n = original.states();
        let mut forward = Frontier::initial_forward(n);
        let mut visited = trie_of(&forward);
        let mut forward_history = History::default();
        let mut warmup = 0;
        while warmup < cfg.warmup_steps && !forward.contains_singleton() {
            forward.sort_for_step();
            let (next, _) = bfs_step(original, &forward, &mut visited);
            if next.is_empty() {
                return Err(Error::Internal(
                    "forward level emptied during warmup".into(),
                ));
            }
            if cfg.reconstruct_word {
                forward_history.push(&forward);
            }
            forward = next;
            warmup += 1;
        }

        let reduction = reduce_reachable(original, warmup)?;
        let (dfa, reduction) = if reduction.is_identity() {
            (original.clone(), None)
        } else {
            let m = reduction.new_to_old.len();
            forward = forward.remap(m, |s| {
                reduction
                    .map_set(s)
                    .expect("warmup images lie in the kept states")
            });
            (reduction.dfa.clone(), Some(reduction))
        };
        let m = dfa.states();
        let backward = Frontier::initial_backward(m);
        let forward_visited = trie_of(&forward);
        let backward_visited = trie_of(&backward);
        let forward_aux = trie_of(&forward);
        let weight = cfg.ibfs_weight.unwrap_or(dfa.letters() as f64);
        let stats = SearchStats {
            forward_steps: warmup,
            warmup_steps: warmup,
            reduced_states: m,
            peak_stored_sets: forward_visited.stored_count() + backward_visited.stored_count(),
            ..SearchStats::default()
        };
        Ok(BidirectionalSearch {
            original,
            reduction,
            inv: dfa.inverse(),
            dfa,
            cfg,
            weight,
            forward,
            backward,
            forward_history,
            backward_history: History::default(),
            forward_rebuilt_at: forward_visited.stored_count(),
            backward_rebuilt_at: backward_visited.stored_count(),
            forward_visited,
            backward_visited,
            forward_aux,
            stats,
            started,
        })
    }

    /// The automaton the bidirectional phase runs on (reduced if states
    /// were dropped).
    pub fn working_dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn forward(&self) -> &Frontier {
        &self.forward
    }

    pub fn backward(&self) -> &Frontier {
        &self.backward
    }

    pub fn forward_visited(&self) -> &SubsetTrie {
        &self.forward_visited
    }

    pub fn backward_visited(&self) -> &SubsetTrie {
        &self.backward_visited
    }

    /// Maps a set of working states back to original state indices.
    pub fn to_original(&self, s: &StateSet) -> StateSet {
        match &self.reduction {
            None => s.clone(),
            Some(r) => {
                StateSet::from_states(self.original.states(), s.iter().map(|q| r.new_to_old[q]))
                    .expect("reduced states map into the original")
            }
        }
    }

    /// The letters leading from the full state set to forward entry `i`.
    /// Requires word reconstruction.
    pub fn forward_word(&self, i: usize) -> Vec<usize> {
        self.forward_history
            .path_to(self.forward.provenance(i), self.forward.depth())
    }

    /// Letters, in application order, that map backward entry `j` into its
    /// root singleton. Requires word reconstruction.
    pub fn backward_word(&self, j: usize) -> Vec<usize> {
        let mut w = self
            .backward_history
            .path_to(self.backward.provenance(j), self.backward.depth());
        w.reverse();
        w
    }

    pub fn memory_bytes(&self) -> usize {
        self.forward_visited.memory_bytes()
            + self.backward_visited.memory_bytes()
            + self.forward_aux.memory_bytes()
            + self.forward.memory_bytes()
            + self.backward.memory_bytes()
            + self.forward_history.memory_bytes()
            + self.backward_history.memory_bytes()
    }

    pub fn check_meet(&self) -> Option<Meet> {
        meet_check(&self.backward, &self.forward_aux)
    }

    /// Expands the side picked by the size rule.
    pub fn step(&mut self) -> Result<Direction> {
        let dir = choose_step(&self.forward, &self.backward, self.weight);
        match dir {
            Direction::Forward => {
                self.forward.sort_for_step();
                let (next, aux) = bfs_step(&self.dfa, &self.forward, &mut self.forward_visited);
                if next.is_empty() {
                    return Err(Error::Internal(
                        "forward level emptied before a meet".into(),
                    ));
                }
                if self.cfg.reconstruct_word {
                    self.forward_history.push(&self.forward);
                }
                self.forward = next;
                self.forward_aux = aux;
                self.stats.forward_steps += 1;
                let stored = self.forward_visited.stored_count();
                if stored as f64 >= self.cfg.rebuild_threshold * self.forward_rebuilt_at as f64 {
                    self.forward_visited = self.forward_visited.rebuild_minimal(Keep::Minimal);
                    self.forward_rebuilt_at = self.forward_visited.stored_count().max(1);
                }
            }
            Direction::Backward => {
                self.backward.sort_for_step();
                let next = ibfs_step(&self.inv, &self.backward, &mut self.backward_visited);
                if next.is_empty() {
                    return Err(Error::Internal(
                        "backward level emptied before a meet".into(),
                    ));
                }
                if self.cfg.reconstruct_word {
                    self.backward_history.push(&self.backward);
                }
                self.backward = next;
                self.stats.backward_steps += 1;
                let stored = self.backward_visited.stored_count();
                if stored as f64 >= self.cfg.rebuild_threshold * self.backward_rebuilt_at as f64 {
                    self.backward_visited = self.backward_visited.rebuild_minimal(Keep::Maximal);
                    self.backward_rebuilt_at = self.backward_visited.stored_count().max(1);
                }
            }
        }
        let stored = self.forward_visited.stored_count() + self.backward_visited.stored_count();
        self.stats.peak_stored_sets = self.stats.peak_stored_sets.max(stored);
        Ok(dir)
    }

    /// Steps until the two sides meet, or hands over to the hybrid mode once
    /// the memory budget is exceeded.
    pub fn run(mut self) -> Result<SearchResult> {
        loop {
            if let Some(meet) = self.check_meet() {
                return self.finish(meet);
            }
            if self.memory_bytes() > self.cfg.memory_limit {
                return self.fall_back();
            }
            self.step()?;
        }
    }

    fn finish(mut self, meet: Meet) -> Result<SearchResult> {
        let length = self.forward.depth() + self.backward.depth();
        let word = if self.cfg.reconstruct_word {
            let fi = self
                .forward
                .position_of(meet.forward_set.words())
                .ok_or_else(|| Error::Internal("met set missing from the forward level".into()))?;
            let word = reconstruct_word(
                &self.forward,
                fi,
                &self.forward_history,
                &self.backward,
                meet.backward_index,
                &self.backward_history,
            );
            Some(word)
        } else {
            None
        };
        self.collect_stats();
        verify(self.original, length, word.as_deref())?;
        Ok(SearchResult {
            length,
            word,
            stats: self.stats,
        })
    }

    fn fall_back(mut self) -> Result<SearchResult> {
        let greedy = greedy_reset_word(self.original).ok_or_else(|| {
            Error::Internal("greedy bound failed on a synchronizing automaton".into())
        })?;
        self.collect_stats();
        self.stats.fallback_used = true;
        let found = hybrid_fallback(
            &self.dfa,
            &self.forward,
            greedy.len(),
            self.cfg.fallback_split_len,
            self.cfg.fallback_chunks,
        );
        let (length, word) = match found {
            Some((length, start, tail)) => {
                let word = self.cfg.reconstruct_word.then(|| {
                    let mut w = self.forward_word(start);
                    w.extend(tail);
                    w
                });
                (length, word)
            }
            None => (greedy.len(), self.cfg.reconstruct_word.then_some(greedy)),
        };
        self.stats.wall_time = self.started.elapsed();
        verify(self.original, length, word.as_deref())?;
        Ok(SearchResult {
            length,
            word,
            stats: self.stats,
        })
    }

    fn collect_stats(&mut self) {
        self.stats.forward_visits =
            self.forward_visited.visit_count() + self.forward_aux.visit_count();
        self.stats.backward_visits = self.backward_visited.visit_count();
        self.stats.wall_time = self.started.elapsed();
    }
}

fn verify(dfa: &Dfa, length: usize, word: Option<&[usize]>) -> Result<()> {
    if let Some(w) = word {
        if w.len() != length || !dfa.apply_word(&dfa.full_set(), w)?.is_singleton() {
            return Err(Error::Internal(format!(
                "reconstructed word of length {} does not reset the automaton (expected length {length})",
                w.len()
            )));
        }
    }
    Ok(())
}

/// Length (and, if configured, a witness) of a shortest reset word.
///
/// Fails with [`Error::NotSynchronizing`] when no reset word exists.
pub fn shortest_reset_word(dfa: &Dfa, cfg: &SearchConfig) -> Result<SearchResult> {
    BidirectionalSearch::new(dfa, cfg.clone())?.run()
}
