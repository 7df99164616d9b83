//! Memoryless depth-first/breadth-first hybrid used once the visited tries
//! no longer fit in the memory budget.
//!
//! Starting from the last forward level, each list is either expanded by one
//! plain level (no visited sets are stored or checked) or, when long, split
//! into chunks explored recursively, smallest sets first. Depth is capped by
//! the shortest reset word found so far, so the result is still exact.

use super::frontier::{Frontier, Provenance};
use crate::dfa::Dfa;
use crate::state_set::{is_subset, popcount, words_for};

struct Level {
    sets: Vec<u64>,
    provenance: Vec<Provenance>,
}

impl Level {
    fn len(&self) -> usize {
        self.provenance.len()
    }
}

struct Hybrid<'a> {
    dfa: &'a Dfa,
    stride: usize,
    split_len: usize,
    chunks: usize,
    best_len: usize,
    // (index in the start frontier, letters after it)
    best: Option<(usize, Vec<usize>)>,
    stack: Vec<Level>,
}

/// Searches below `start` for a reset word shorter than `best_known` (a
/// total length, counting `start.depth()`).
///
/// Returns the improved length, the start entry it grows from and the
/// letters applied after that entry, or `None` when `best_known` is already
/// optimal.
pub fn hybrid_fallback(
    dfa: &Dfa,
    start: &Frontier,
    best_known: usize,
    split_len: usize,
    chunks: usize,
) -> Option<(usize, usize, Vec<usize>)> {
    let stride = words_for(dfa.states());
    let mut h = Hybrid {
        dfa,
        stride,
        split_len: split_len.max(1),
        chunks: chunks.max(1),
        best_len: best_known,
        best: None,
        stack: Vec::new(),
    };
    let depth = start.depth();
    if let Some(i) = (0..start.len()).find(|&i| popcount(start.words(i)) == 1) {
        if depth < best_known {
            return Some((depth, i, Vec::new()));
        }
    }
    let root = Level {
        sets: start.raw_sets().to_vec(),
        provenance: (0..start.len())
            .map(|i| Provenance {
                parent: i as u32,
                letter: u32::MAX,
            })
            .collect(),
    };
    h.explore(root, depth, true);
    let best_len = h.best_len;
    h.best.map(|(i, w)| (best_len, i, w))
}

impl Hybrid<'_> {
    fn explore(&mut self, level: Level, depth: usize, is_root: bool) {
        if depth + 1 >= self.best_len {
            return;
        }
        if level.len() > self.split_len && self.chunks > 1 {
            let level = self.sorted(level);
            let size = level.len().div_ceil(self.chunks);
            for c in 0..self.chunks {
                let lo = c * size;
                let hi = ((c + 1) * size).min(level.len());
                if lo >= hi {
                    break;
                }
                let chunk = Level {
                    sets: level.sets[lo * self.stride..hi * self.stride].to_vec(),
                    provenance: level.provenance[lo..hi].to_vec(),
                };
                self.explore_level(chunk, depth, is_root);
            }
        } else {
            self.explore_level(level, depth, is_root);
        }
    }

    fn explore_level(&mut self, level: Level, depth: usize, is_root: bool) {
        if depth + 1 >= self.best_len {
            return;
        }
        let mut next = Level {
            sets: Vec::new(),
            provenance: Vec::new(),
        };
        let mut image = vec![0u64; self.stride];
        for i in 0..level.len() {
            let src = &level.sets[i * self.stride..(i + 1) * self.stride];
            for a in 0..self.dfa.letters() {
                image.iter_mut().for_each(|w| *w = 0);
                self.dfa.image_into(src, a, &mut image);
                let prov = Provenance {
                    parent: i as u32,
                    letter: a as u32,
                };
                if popcount(&image) == 1 {
                    self.record(&level, prov, depth + 1, is_root);
                    return;
                }
                next.sets.extend_from_slice(&image);
                next.provenance.push(prov);
            }
        }
        let next = self.minimal(next);
        self.stack.push(level);
        self.explore(next, depth + 1, false);
        self.stack.pop();
    }

    fn record(&mut self, level: &Level, prov: Provenance, length: usize, is_root: bool) {
        // walk parents from `level` down through the stack to the start entry
        let mut letters = vec![prov.letter as usize];
        let mut p = level.provenance[prov.parent as usize];
        if !is_root {
            for lower in self.stack.iter().rev() {
                letters.push(p.letter as usize);
                p = lower.provenance[p.parent as usize];
            }
        }
        letters.reverse();
        self.best_len = length;
        self.best = Some((p.parent as usize, letters));
    }

    fn sorted(&self, level: Level) -> Level {
        let mut keys: Vec<(u32, usize)> = (0..level.len())
            .map(|i| {
                (
                    popcount(&level.sets[i * self.stride..(i + 1) * self.stride]),
                    i,
                )
            })
            .collect();
        keys.sort_unstable();
        let mut out = Level {
            sets: Vec::with_capacity(level.sets.len()),
            provenance: Vec::with_capacity(level.len()),
        };
        for (_, i) in keys {
            out.sets
                .extend_from_slice(&level.sets[i * self.stride..(i + 1) * self.stride]);
            out.provenance.push(level.provenance[i]);
        }
        out
    }

    /// ⊆-minimal elements, sorted by size.
    fn minimal(&self, level: Level) -> Level {
        let level = self.sorted(level);
        let mut trie = crate::trie::SubsetTrie::new(self.dfa.states());
        let mut out = Level {
            sets: Vec::new(),
            provenance: Vec::new(),
        };
        for i in 0..level.len() {
            let s = &level.sets[i * self.stride..(i + 1) * self.stride];
            if trie.find_subset_words(s).is_some() {
                continue;
            }
            debug_assert!(!out.sets.chunks_exact(self.stride).any(|x| is_subset(x, s)));
            trie.insert_words(s);
            out.sets.extend_from_slice(s);
            out.provenance.push(level.provenance[i]);
        }
        out
    }
}
