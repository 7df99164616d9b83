//! Compressed binary (Patricia) tries over state sets with subset and
//! superset queries.
//!
//! States are tested in a fixed order; a branch node testing position `p`
//! sends sets containing `order[p]` right and the others left. Every branch
//! has two children and positions strictly increase along a path, so a
//! descent touches at most `n` levels. All sets below a branch testing `p`
//! agree on positions before `p`. A set lives at the leaf where its path
//! first becomes unique. Branch nodes and stored sets live in flat arenas.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{usage, Result};
use crate::state_set::{contains_bit, is_subset, popcount, words_for, StateSet};

const NIL: u32 = u32::MAX;
// child links with this bit set point at a set slot rather than a branch
const LEAF: u32 = 1 << 31;

#[derive(Clone, Copy, Debug)]
struct Branch {
    // position in the test order, and the state tested there
    pos: u32,
    state: u32,
    child: [u32; 2],
}

/// What [`SubsetTrie::insert`] did with the offered set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertOutcome {
    /// Stored as a new element.
    Inserted,
    /// Replaced a stored superset found at the end of its path.
    ReplacedLarger,
    /// Replaced a stored subset found at the end of its path (maximal
    /// polarity only).
    ReplacedSmaller,
    /// A stored set dominating it (a subset, or a superset under maximal
    /// polarity) was found at the end of its path; nothing changed.
    AlreadySubsumed,
}

/// Which end of the inclusion order an antichain reduction keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    Minimal,
    Maximal,
}

#[derive(Debug)]
pub struct SubsetTrie {
    n: usize,
    keep: Keep,
    stride: usize,
    order: Vec<u32>,
    // inverse of `order`
    rank: Vec<u32>,
    identity_order: bool,
    nodes: Vec<Branch>,
    sets: Vec<u64>,
    root: u32,
    visits: AtomicU64,
}

impl Clone for SubsetTrie {
    fn clone(&self) -> Self {
        SubsetTrie {
            n: self.n,
            keep: self.keep,
            stride: self.stride,
            order: self.order.clone(),
            rank: self.rank.clone(),
            identity_order: self.identity_order,
            nodes: self.nodes.clone(),
            sets: self.sets.clone(),
            root: self.root,
            visits: AtomicU64::new(self.visits.load(Ordering::Relaxed)),
        }
    }
}

impl SubsetTrie {
    /// An empty trie over `n` states testing them in natural order. On a
    /// path collision it keeps the smaller of two comparable sets.
    pub fn new(n: usize) -> Self {
        Self::with_order(n, (0..n as u32).collect()).expect("identity order is a permutation")
    }

    /// An empty trie that keeps the larger of two comparable sets on a path
    /// collision, as the backward search needs.
    pub fn new_maximal(n: usize) -> Self {
        let mut t = Self::new(n);
        t.keep = Keep::Maximal;
        t
    }

    pub fn with_keep(n: usize, keep: Keep) -> Self {
        match keep {
            Keep::Minimal => Self::new(n),
            Keep::Maximal => Self::new_maximal(n),
        }
    }

    pub fn keep(&self) -> Keep {
        self.keep
    }

    /// An empty trie testing states in the given order, which must be a
    /// permutation of `0..n`.
    pub fn with_order(n: usize, order: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(usage(format!(
                "order has {} entries, expected {n}",
                order.len()
            )));
        }
        for &q in &order {
            if q as usize >= n || std::mem::replace(&mut seen[q as usize], true) {
                return Err(usage("order is not a permutation of the states"));
            }
        }
        let identity_order = order.iter().enumerate().all(|(i, &q)| i == q as usize);
        let mut rank = vec![0; n];
        for (p, &q) in order.iter().enumerate() {
            rank[q as usize] = p as u32;
        }
        Ok(SubsetTrie {
            n,
            keep: Keep::Minimal,
            stride: words_for(n),
            order,
            rank,
            identity_order,
            nodes: Vec::new(),
            sets: Vec::new(),
            root: NIL,
            visits: AtomicU64::new(0),
        })
    }

    fn empty_like(&self) -> Self {
        SubsetTrie {
            n: self.n,
            keep: self.keep,
            stride: self.stride,
            order: self.order.clone(),
            rank: self.rank.clone(),
            identity_order: self.identity_order,
            nodes: Vec::new(),
            sets: Vec::new(),
            root: NIL,
            visits: AtomicU64::new(0),
        }
    }

    pub fn capacity(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn stored_count(&self) -> usize {
        self.sets.len() / self.stride
    }

    pub fn is_empty(&self) -> bool {
        self.root == NIL
    }

    /// Branch nodes plus leaves.
    pub fn node_count(&self) -> usize {
        self.nodes.len() + self.stored_count()
    }

    /// Cumulative nodes visited by subset and superset queries.
    pub fn visit_count(&self) -> u64 {
        self.visits.load(Ordering::Relaxed)
    }

    /// `(stored_count, visit_count)`
    pub fn visit_cost_report(&self) -> (usize, u64) {
        (self.stored_count(), self.visit_count())
    }

    pub fn reset_visits(&self) {
        self.visits.store(0, Ordering::Relaxed);
    }

    /// Approximate heap footprint in bytes.
    pub fn memory_bytes(&self) -> usize {
        self.nodes.capacity() * std::mem::size_of::<Branch>()
            + self.sets.capacity() * std::mem::size_of::<u64>()
    }

    fn check(&self, s: &StateSet) -> Result<()> {
        if s.capacity() != self.n {
            return Err(usage(format!(
                "state set capacity {} does not match trie capacity {}",
                s.capacity(),
                self.n
            )));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn slot_words(&self, slot: u32) -> &[u64] {
        self.set_at(slot)
    }

    #[inline]
    fn set_at(&self, slot: u32) -> &[u64] {
        let i = slot as usize * self.stride;
        &self.sets[i..i + self.stride]
    }

    #[inline]
    fn bit(&self, words: &[u64], pos: usize) -> usize {
        contains_bit(words, self.order[pos] as usize) as usize
    }

    fn push_set(&mut self, words: &[u64]) -> u32 {
        let slot = self.stored_count() as u32;
        self.sets.extend_from_slice(words);
        slot | LEAF
    }

    /// First position (in test order) where `a` and `b` differ.
    fn first_difference(&self, a: &[u64], b: &[u64]) -> Option<usize> {
        if self.identity_order {
            a.iter()
                .zip(b)
                .enumerate()
                .find(|(_, (x, y))| x != y)
                .map(|(i, (x, y))| i * 64 + (x ^ y).trailing_zeros() as usize)
        } else {
            let mut best = None;
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                let mut d = x ^ y;
                while d != 0 {
                    let r = self.rank[i * 64 + d.trailing_zeros() as usize] as usize;
                    best = Some(best.map_or(r, |b: usize| b.min(r)));
                    d &= d - 1;
                }
            }
            best
        }
    }

    /// Inserts a nonempty set.
    pub fn insert(&mut self, s: &StateSet) -> Result<InsertOutcome> {
        self.check(s)?;
        if s.is_empty() {
            return Err(usage("the empty set cannot be stored"));
        }
        Ok(self.insert_words(s.words()))
    }

    pub(crate) fn insert_words(&mut self, s: &[u64]) -> InsertOutcome {
        debug_assert_eq!(s.len(), self.stride);
        if self.root == NIL {
            self.root = self.push_set(s);
            return InsertOutcome::Inserted;
        }
        // descend to the leaf that s's bits select
        let mut link = self.root;
        let mut last_pos = None;
        while link & LEAF == 0 {
            let b = &self.nodes[link as usize];
            last_pos = Some(b.pos as usize);
            link = b.child[self.bit(s, b.pos as usize)];
        }
        let slot = link & !LEAF;
        let stored = self.set_at(slot);
        let Some(diff) = self.first_difference(stored, s) else {
            return InsertOutcome::AlreadySubsumed;
        };
        if last_pos.is_none_or(|p| diff > p) {
            // s shares the whole path of the stored set
            let (dominated, dominates) = match self.keep {
                Keep::Minimal => (is_subset(stored, s), is_subset(s, stored)),
                Keep::Maximal => (is_subset(s, stored), is_subset(stored, s)),
            };
            if dominated {
                return InsertOutcome::AlreadySubsumed;
            }
            if dominates {
                let i = slot as usize * self.stride;
                self.sets[i..i + self.stride].copy_from_slice(s);
                return match self.keep {
                    Keep::Minimal => InsertOutcome::ReplacedLarger,
                    Keep::Maximal => InsertOutcome::ReplacedSmaller,
                };
            }
        }
        // splice a branch testing `diff` above the first node testing a later
        // position; everything below it agrees with the stored set there
        let new_leaf = self.push_set(s);
        let side = self.bit(s, diff);
        let mut child = [NIL; 2];
        let mut parent: Option<(usize, usize)> = None;
        let mut link = self.root;
        while link & LEAF == 0 {
            let b = self.nodes[link as usize];
            if b.pos as usize > diff {
                break;
            }
            let dir = self.bit(s, b.pos as usize);
            parent = Some((link as usize, dir));
            link = b.child[dir];
        }
        child[side] = new_leaf;
        child[1 - side] = link;
        self.nodes.push(Branch {
            pos: diff as u32,
            state: self.order[diff],
            child,
        });
        let id = (self.nodes.len() - 1) as u32;
        match parent {
            Some((p, dir)) => self.nodes[p].child[dir] = id,
            None => self.root = id,
        }
        InsertOutcome::Inserted
    }

    /// True iff some stored set is a subset of `s`.
    pub fn contains_subset_of(&self, s: &StateSet) -> Result<bool> {
        self.check(s)?;
        Ok(self.find_subset_words(s.words()).is_some())
    }

    /// True iff some stored set is a superset of `s`.
    pub fn contains_superset_of(&self, s: &StateSet) -> Result<bool> {
        self.check(s)?;
        Ok(self.find_superset_words(s.words()).is_some())
    }

    /// Some stored subset of `s`, if any.
    pub fn find_subset_of(&self, s: &StateSet) -> Result<Option<StateSet>> {
        self.check(s)?;
        Ok(self
            .find_subset_words(s.words())
            .map(|slot| StateSet::from_words(self.n, self.set_at(slot))))
    }

    pub(crate) fn find_subset_words(&self, s: &[u64]) -> Option<u32> {
        if self.root == NIL {
            return None;
        }
        let mut visits = 0;
        let hit = match self.stride {
            1 => self.subset_dfs::<1>(self.root, s.try_into().unwrap(), &mut visits),
            2 => self.subset_dfs::<2>(self.root, s.try_into().unwrap(), &mut visits),
            3 => self.subset_dfs::<3>(self.root, s.try_into().unwrap(), &mut visits),
            4 => self.subset_dfs::<4>(self.root, s.try_into().unwrap(), &mut visits),
            _ => self.subset_dfs_any(self.root, s, &mut visits),
        };
        self.visits.fetch_add(visits, Ordering::Relaxed);
        hit
    }

    pub(crate) fn find_superset_words(&self, s: &[u64]) -> Option<u32> {
        if self.root == NIL {
            return None;
        }
        let mut visits = 0;
        let hit = match self.stride {
            1 => self.superset_dfs::<1>(self.root, s.try_into().unwrap(), &mut visits),
            2 => self.superset_dfs::<2>(self.root, s.try_into().unwrap(), &mut visits),
            3 => self.superset_dfs::<3>(self.root, s.try_into().unwrap(), &mut visits),
            4 => self.superset_dfs::<4>(self.root, s.try_into().unwrap(), &mut visits),
            _ => self.superset_dfs_any(self.root, s, &mut visits),
        };
        self.visits.fetch_add(visits, Ordering::Relaxed);
        hit
    }

    #[inline]
    fn fixed<const W: usize>(&self, slot: u32) -> &[u64; W] {
        let i = slot as usize * W;
        self.sets[i..i + W].try_into().unwrap()
    }

    // Left child always; right child only when the tested state is in `s`.
    fn subset_dfs<const W: usize>(
        &self,
        mut link: u32,
        s: &[u64; W],
        visits: &mut u64,
    ) -> Option<u32> {
        loop {
            *visits += 1;
            if link & LEAF != 0 {
                let slot = link & !LEAF;
                let x = self.fixed::<W>(slot);
                return (0..W).all(|i| x[i] & !s[i] == 0).then_some(slot);
            }
            let b = &self.nodes[link as usize];
            if contains_bit(s, b.state as usize) {
                if let Some(hit) = self.subset_dfs(b.child[0], s, visits) {
                    return Some(hit);
                }
                link = b.child[1];
            } else {
                link = b.child[0];
            }
        }
    }

    // Right child always; left child only when the tested state is not in `s`.
    fn superset_dfs<const W: usize>(
        &self,
        mut link: u32,
        s: &[u64; W],
        visits: &mut u64,
    ) -> Option<u32> {
        loop {
            *visits += 1;
            if link & LEAF != 0 {
                let slot = link & !LEAF;
                let x = self.fixed::<W>(slot);
                return (0..W).all(|i| s[i] & !x[i] == 0).then_some(slot);
            }
            let b = &self.nodes[link as usize];
            if !contains_bit(s, b.state as usize) {
                if let Some(hit) = self.superset_dfs(b.child[1], s, visits) {
                    return Some(hit);
                }
                link = b.child[0];
            } else {
                link = b.child[1];
            }
        }
    }

    fn subset_dfs_any(&self, mut link: u32, s: &[u64], visits: &mut u64) -> Option<u32> {
        loop {
            *visits += 1;
            if link & LEAF != 0 {
                let slot = link & !LEAF;
                return is_subset(self.set_at(slot), s).then_some(slot);
            }
            let b = &self.nodes[link as usize];
            if contains_bit(s, b.state as usize) {
                if let Some(hit) = self.subset_dfs_any(b.child[0], s, visits) {
                    return Some(hit);
                }
                link = b.child[1];
            } else {
                link = b.child[0];
            }
        }
    }

    fn superset_dfs_any(&self, mut link: u32, s: &[u64], visits: &mut u64) -> Option<u32> {
        loop {
            *visits += 1;
            if link & LEAF != 0 {
                let slot = link & !LEAF;
                return is_subset(s, self.set_at(slot)).then_some(slot);
            }
            let b = &self.nodes[link as usize];
            if !contains_bit(s, b.state as usize) {
                if let Some(hit) = self.superset_dfs_any(b.child[1], s, visits) {
                    return Some(hit);
                }
                link = b.child[0];
            } else {
                link = b.child[1];
            }
        }
    }

    /// Deepest root-to-leaf descent, in branch nodes.
    pub fn height(&self) -> usize {
        fn go(t: &SubsetTrie, link: u32) -> usize {
            if link & LEAF != 0 {
                0
            } else {
                let b = &t.nodes[link as usize];
                1 + go(t, b.child[0]).max(go(t, b.child[1]))
            }
        }
        if self.root == NIL {
            0
        } else {
            go(self, self.root)
        }
    }

    /// Stored sets as raw words, in storage order.
    pub(crate) fn raw_sets(&self) -> impl Iterator<Item = &[u64]> {
        self.sets.chunks_exact(self.stride)
    }

    /// All stored sets.
    pub fn sets(&self) -> Vec<StateSet> {
        self.raw_sets()
            .map(|w| StateSet::from_words(self.n, w))
            .collect()
    }

    /// One stored set per line as a bitstring in state order, sorted.
    pub fn dump(&self) -> String {
        let mut lines: Vec<String> = self.sets().iter().map(StateSet::to_bitstring).collect();
        lines.sort();
        lines.join("\n")
    }

    /// A fresh trie holding exactly the ⊆-minimal (or ⊆-maximal) stored
    /// sets. The visit counter carries over.
    pub fn rebuild_minimal(&self, keep: Keep) -> SubsetTrie {
        let mut order: Vec<(u32, usize)> = self
            .raw_sets()
            .enumerate()
            .map(|(i, w)| (popcount(w), i))
            .collect();
        match keep {
            Keep::Minimal => order.sort_unstable(),
            Keep::Maximal => order.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1))),
        }
        let mut fresh = self.empty_like();
        fresh.keep = keep;
        for (_, i) in order {
            let s = &self.sets[i * self.stride..(i + 1) * self.stride];
            let covered = match keep {
                Keep::Minimal => fresh.find_subset_words(s).is_some(),
                Keep::Maximal => fresh.find_superset_words(s).is_some(),
            };
            if !covered {
                fresh.insert_words(s);
            }
        }
        fresh.visits.store(self.visit_count(), Ordering::Relaxed);
        fresh
    }
}

/// Reduces a flat list of sets (`stride` words each) to an antichain by
/// inserting it backwards into an auxiliary trie, skipping every set that
/// already has a stored subset (or superset, for [`Keep::Maximal`]).
///
/// The list must be ordered so that, for `Keep::Minimal`, no set contains an
/// earlier one; dually for `Keep::Maximal`. This is not checked. Returns the
/// survivor flags and the auxiliary trie, which then holds exactly the
/// survivors.
pub(crate) fn reduce_flat(n: usize, sets: &[u64], keep: Keep) -> (Vec<bool>, SubsetTrie) {
    let stride = words_for(n);
    let count = sets.len() / stride;
    let mut aux = SubsetTrie::with_keep(n, keep);
    let mut survives = vec![false; count];
    for i in (0..count).rev() {
        let s = &sets[i * stride..(i + 1) * stride];
        let covered = match keep {
            Keep::Minimal => aux.find_subset_words(s).is_some(),
            Keep::Maximal => aux.find_superset_words(s).is_some(),
        };
        if !covered {
            aux.insert_words(s);
            survives[i] = true;
        }
    }
    (survives, aux)
}

/// Reduces an ordered list to its ⊆-minimal (or ⊆-maximal) elements,
/// keeping survivors in their original relative order.
///
/// Precondition (not checked): for `Keep::Minimal`, larger sets precede
/// their subsets; dually for `Keep::Maximal`.
pub fn reduce_list_to_antichain(sets: &[StateSet], keep: Keep) -> Result<Vec<StateSet>> {
    Ok(reduce_list_with_trie(sets, keep)?.0)
}

/// Like [`reduce_list_to_antichain`], also returning the auxiliary trie.
pub fn reduce_list_with_trie(sets: &[StateSet], keep: Keep) -> Result<(Vec<StateSet>, SubsetTrie)> {
    let Some(first) = sets.first() else {
        return Ok((Vec::new(), SubsetTrie::with_keep(0, keep)));
    };
    let n = first.capacity();
    let mut flat = Vec::with_capacity(sets.len() * words_for(n));
    for s in sets {
        if s.capacity() != n {
            return Err(usage("sets in one list must share a capacity"));
        }
        if s.is_empty() {
            return Err(usage("the empty set cannot be stored"));
        }
        flat.extend_from_slice(s.words());
    }
    let (survives, aux) = reduce_flat(n, &flat, keep);
    let out = sets
        .iter()
        .zip(survives)
        .filter(|&(_, keep)| keep)
        .map(|(s, _)| s.clone())
        .collect();
    Ok((out, aux))
}
