//! One level of the forward (BFS) or backward (IBFS) search and the steps
//! that produce the next level.

use crate::dfa::{Dfa, InverseDfa};
use crate::state_set::{popcount, words_for, StateSet};
use crate::trie::{reduce_flat, Keep, SubsetTrie};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// How an entry was produced: the index of its parent in the previous level
/// and the letter applied. Depth-0 entries have no parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub parent: u32,
    pub letter: u32,
}

impl Provenance {
    pub const ROOT: Provenance = Provenance {
        parent: u32::MAX,
        letter: u32::MAX,
    };

    pub fn is_root(&self) -> bool {
        self.parent == u32::MAX
    }
}

/// A list of state sets reached after `depth` letters, with the provenance
/// of each entry. After reduction the entries form an antichain: ⊆-minimal
/// going forward, ⊆-maximal going backward.
#[derive(Clone, Debug)]
pub struct Frontier {
    direction: Direction,
    depth: usize,
    n: usize,
    stride: usize,
    sets: Vec<u64>,
    provenance: Vec<Provenance>,
}

impl Frontier {
    fn empty(direction: Direction, depth: usize, n: usize) -> Self {
        Frontier {
            direction,
            depth,
            n,
            stride: words_for(n),
            sets: Vec::new(),
            provenance: Vec::new(),
        }
    }

    /// The forward start: the full state set.
    pub fn initial_forward(n: usize) -> Self {
        let mut f = Self::empty(Direction::Forward, 0, n);
        f.push(StateSet::full(n).words(), Provenance::ROOT);
        f
    }

    /// The backward start: every singleton.
    pub fn initial_backward(n: usize) -> Self {
        let mut f = Self::empty(Direction::Backward, 0, n);
        for q in 0..n {
            f.push(StateSet::singleton(n, q).words(), Provenance::ROOT);
        }
        f
    }

    /// A frontier holding the given nonempty sets as root entries.
    pub fn from_sets(direction: Direction, depth: usize, n: usize, sets: &[StateSet]) -> Self {
        let mut f = Self::empty(direction, depth, n);
        for s in sets {
            assert_eq!(s.capacity(), n, "set capacity must match frontier");
            assert!(!s.is_empty(), "frontiers never hold the empty set");
            f.push(s.words(), Provenance::ROOT);
        }
        f
    }

    pub(crate) fn push(&mut self, words: &[u64], prov: Provenance) {
        self.sets.extend_from_slice(words);
        self.provenance.push(prov);
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn capacity(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.provenance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.provenance.is_empty()
    }

    #[inline]
    pub(crate) fn words(&self, i: usize) -> &[u64] {
        &self.sets[i * self.stride..(i + 1) * self.stride]
    }

    pub fn set(&self, i: usize) -> StateSet {
        StateSet::from_words(self.n, self.words(i))
    }

    pub fn sets(&self) -> Vec<StateSet> {
        (0..self.len()).map(|i| self.set(i)).collect()
    }

    pub fn provenance(&self, i: usize) -> Provenance {
        self.provenance[i]
    }

    pub(crate) fn provenance_list(&self) -> &[Provenance] {
        &self.provenance
    }

    pub(crate) fn raw_sets(&self) -> &[u64] {
        &self.sets
    }

    pub fn contains_singleton(&self) -> bool {
        (0..self.len()).any(|i| popcount(self.words(i)) == 1)
    }

    pub(crate) fn position_of(&self, words: &[u64]) -> Option<usize> {
        (0..self.len()).find(|&i| self.words(i) == words)
    }

    pub fn memory_bytes(&self) -> usize {
        self.sets.capacity() * 8 + self.provenance.capacity() * std::mem::size_of::<Provenance>()
    }

    /// Stable sort by set size: ascending going forward, descending going
    /// backward, so small (resp. large) sets are tried first.
    pub fn sort_for_step(&mut self) {
        let mut keys: Vec<(u32, usize)> = (0..self.len())
            .map(|i| (popcount(self.words(i)), i))
            .collect();
        let sorted = match self.direction {
            Direction::Forward => keys.windows(2).all(|w| w[0].0 <= w[1].0),
            Direction::Backward => keys.windows(2).all(|w| w[0].0 >= w[1].0),
        };
        if sorted {
            return;
        }
        match self.direction {
            Direction::Forward => keys.sort_by_key(|&(c, i)| (c, i)),
            Direction::Backward => keys.sort_by_key(|&(c, i)| (std::cmp::Reverse(c), i)),
        }
        let mut sets = Vec::with_capacity(self.sets.len());
        let mut provenance = Vec::with_capacity(self.provenance.len());
        for &(_, i) in &keys {
            sets.extend_from_slice(self.words(i));
            provenance.push(self.provenance[i]);
        }
        self.sets = sets;
        self.provenance = provenance;
    }

    pub(crate) fn is_sorted_for_step(&self) -> bool {
        let counts: Vec<u32> = (0..self.len()).map(|i| popcount(self.words(i))).collect();
        match self.direction {
            Direction::Forward => counts.windows(2).all(|w| w[0] <= w[1]),
            Direction::Backward => counts.windows(2).all(|w| w[0] >= w[1]),
        }
    }

    /// Keeps only the flagged entries, in order.
    fn retain(&mut self, keep: &[bool]) {
        let mut w = 0;
        for (r, &k) in keep.iter().enumerate() {
            if k {
                if w != r {
                    self.sets
                        .copy_within(r * self.stride..(r + 1) * self.stride, w * self.stride);
                    self.provenance[w] = self.provenance[r];
                }
                w += 1;
            }
        }
        self.sets.truncate(w * self.stride);
        self.provenance.truncate(w);
    }

    /// Maps every set through `f` into a frontier over `n` states, keeping
    /// provenance and depth.
    pub(crate) fn remap(&self, n: usize, f: impl Fn(&StateSet) -> StateSet) -> Frontier {
        let mut out = Frontier::empty(self.direction, self.depth, n);
        for i in 0..self.len() {
            out.push(f(&self.set(i)).words(), self.provenance[i]);
        }
        out
    }
}

/// Builds a trie holding exactly the frontier's sets.
pub(crate) fn trie_of(f: &Frontier) -> SubsetTrie {
    let keep = match f.direction {
        Direction::Forward => Keep::Minimal,
        Direction::Backward => Keep::Maximal,
    };
    let mut t = SubsetTrie::with_keep(f.n, keep);
    for i in 0..f.len() {
        t.insert_words(f.words(i));
    }
    t
}

/// One forward level: every image `S·a` not covered by a visited subset is
/// recorded as visited and appended; the new list is then reduced to its
/// ⊆-minimal sets. Returns the new frontier and the auxiliary trie that holds
/// exactly its sets.
///
/// `f` should be sorted with [`Frontier::sort_for_step`].
pub fn bfs_step(dfa: &Dfa, f: &Frontier, visited: &mut SubsetTrie) -> (Frontier, SubsetTrie) {
    debug_assert_eq!(f.direction, Direction::Forward);
    debug_assert!(f.is_sorted_for_step());
    let mut next = Frontier::empty(Direction::Forward, f.depth + 1, f.n);
    let mut image = vec![0u64; f.stride];
    for i in 0..f.len() {
        for a in 0..dfa.letters() {
            image.iter_mut().for_each(|w| *w = 0);
            dfa.image_into(f.words(i), a, &mut image);
            if visited.find_subset_words(&image).is_some() {
                continue;
            }
            visited.insert_words(&image);
            next.push(
                &image,
                Provenance {
                    parent: i as u32,
                    letter: a as u32,
                },
            );
        }
    }
    let aux = reduce_level(&mut next, Keep::Minimal);
    (next, aux)
}

/// One backward level, dual to [`bfs_step`]: preimages, superset skipping,
/// ⊆-maximal reduction. Empty preimages are dropped.
pub fn ibfs_step(inv: &InverseDfa, f: &Frontier, visited: &mut SubsetTrie) -> Frontier {
    debug_assert_eq!(f.direction, Direction::Backward);
    debug_assert!(f.is_sorted_for_step());
    let mut next = Frontier::empty(Direction::Backward, f.depth + 1, f.n);
    let mut pre = vec![0u64; f.stride];
    for i in 0..f.len() {
        for a in 0..inv.letters() {
            pre.iter_mut().for_each(|w| *w = 0);
            inv.preimage_into(f.words(i), a, &mut pre);
            if pre.iter().all(|&w| w == 0) || visited.find_superset_words(&pre).is_some() {
                continue;
            }
            visited.insert_words(&pre);
            next.push(
                &pre,
                Provenance {
                    parent: i as u32,
                    letter: a as u32,
                },
            );
        }
    }
    reduce_level(&mut next, Keep::Maximal);
    next
}

fn reduce_level(next: &mut Frontier, keep: Keep) -> SubsetTrie {
    let (survives, aux) = reduce_flat(next.n, &next.sets, keep);
    next.retain(&survives);
    if aux.stored_count() == next.len() {
        aux
    } else {
        // the list broke the ordering precondition; rebuild from survivors
        trie_of(next)
    }
}

/// Which side to expand next: forward iff the forward list is no longer
/// than `weight` times the backward list.
pub fn choose_step(forward: &Frontier, backward: &Frontier, weight: f64) -> Direction {
    choose_by_len(forward.len(), backward.len(), weight)
}

pub fn choose_by_len(forward_len: usize, backward_len: usize, weight: f64) -> Direction {
    if forward_len as f64 <= weight * backward_len as f64 {
        Direction::Forward
    } else {
        Direction::Backward
    }
}

/// A backward entry containing a current forward set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Meet {
    pub backward_index: usize,
    pub forward_set: StateSet,
}

/// Finds the first backward entry `T` for which the forward trie stores some
/// `X ⊆ T`.
pub fn meet_check(backward: &Frontier, forward_trie: &SubsetTrie) -> Option<Meet> {
    (0..backward.len()).find_map(|j| {
        forward_trie
            .find_subset_words(backward.words(j))
            .map(|slot| Meet {
                backward_index: j,
                forward_set: StateSet::from_words(backward.n, forward_trie.slot_words(slot)),
            })
    })
}

/// Per-level provenance of consumed frontiers, oldest first.
#[derive(Clone, Debug, Default)]
pub struct History {
    levels: Vec<Vec<Provenance>>,
}

impl History {
    pub fn push(&mut self, level: &Frontier) {
        self.levels.push(level.provenance_list().to_vec());
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn memory_bytes(&self) -> usize {
        self.levels
            .iter()
            .map(|l| l.capacity() * std::mem::size_of::<Provenance>())
            .sum()
    }

    /// Letters from the root to entry `index` of a level at depth `depth`
    /// whose own provenance is `prov`, listed root first.
    pub fn path_to(&self, prov: Provenance, depth: usize) -> Vec<usize> {
        let mut letters = Vec::with_capacity(depth);
        let mut p = prov;
        for level in (0..depth).rev() {
            letters.push(p.letter as usize);
            p = self.levels[level][p.parent as usize];
        }
        debug_assert!(p.is_root());
        letters.reverse();
        letters
    }
}

/// The reset word through a meet: the forward word reaching the met forward
/// entry followed by the backward word of the met backward entry in
/// application order.
pub fn reconstruct_word(
    forward: &Frontier,
    forward_index: usize,
    forward_history: &History,
    backward: &Frontier,
    backward_index: usize,
    backward_history: &History,
) -> Vec<usize> {
    let mut word = forward_history.path_to(forward.provenance(forward_index), forward.depth());
    let mut back = backward_history.path_to(backward.provenance(backward_index), backward.depth());
    // backward letters were applied outward from the singleton
    back.reverse();
    word.extend(back);
    word
}
