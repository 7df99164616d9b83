//! Fixed-capacity bit sets over the states of an automaton.
//!
//! The search keeps sets in flat word arenas; the helpers on raw `&[u64]`
//! slices below are what the hot loops use. [`StateSet`] is the owned,
//! capacity-checked form used at API boundaries.

use std::fmt;

use crate::error::{usage, Result};

/// Number of 64-bit words needed for `n` states.
#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

#[inline]
pub(crate) fn contains_bit(words: &[u64], q: usize) -> bool {
    words[q >> 6] >> (q & 63) & 1 == 1
}

#[inline]
pub(crate) fn set_bit(words: &mut [u64], q: usize) {
    words[q >> 6] |= 1u64 << (q & 63);
}

#[inline]
pub(crate) fn popcount(words: &[u64]) -> u32 {
    words.iter().map(|w| w.count_ones()).sum()
}

/// `a ⊆ b`
#[inline]
pub(crate) fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Iterates the indices of set bits in ascending order.
#[inline]
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i * 64 + bit)
        })
    })
}

/// A subset of the states `0..n` of an automaton.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    n: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet {
            n,
            words: vec![0; words_for(n)],
        }
    }

    /// The set of all `n` states.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for q in 0..n {
            set_bit(&mut s.words, q);
        }
        s
    }

    pub fn singleton(n: usize, q: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(q);
        s
    }

    /// Builds a set from state indices. Indices must be below `n`.
    pub fn from_states(n: usize, states: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(n);
        for q in states {
            if q >= n {
                return Err(usage(format!("state {q} out of range for n = {n}")));
            }
            s.insert(q);
        }
        Ok(s)
    }

    /// Wraps raw words. Bits at positions `>= n` must be clear.
    pub(crate) fn from_words(n: usize, words: &[u64]) -> Self {
        debug_assert_eq!(words.len(), words_for(n));
        StateSet {
            n,
            words: words.to_vec(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn insert(&mut self, q: usize) {
        assert!(q < self.n, "state {q} out of range for n = {}", self.n);
        set_bit(&mut self.words, q);
    }

    pub fn contains(&self, q: usize) -> bool {
        q < self.n && contains_bit(&self.words, q)
    }

    pub fn len(&self) -> usize {
        popcount(&self.words) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_singleton(&self) -> bool {
        self.len() == 1
    }

    pub fn is_subset_of(&self, other: &StateSet) -> bool {
        self.n == other.n && is_subset(&self.words, &other.words)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        ones(&self.words)
    }

    /// Bitstring in state order, `1` for members. Used by debug dumps.
    pub fn to_bitstring(&self) -> String {
        (0..self.n)
            .map(|q| if self.contains(q) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_singleton() {
        let q = StateSet::full(70);
        assert_eq!(q.len(), 70);
        assert!(!q.contains(70));
        let s = StateSet::singleton(70, 65);
        assert!(s.is_singleton());
        assert!(s.is_subset_of(&q));
        assert!(!q.is_subset_of(&s));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![65]);
    }

    #[test]
    fn out_of_range_state_rejected() {
        assert!(StateSet::from_states(3, [0, 3]).is_err());
    }

    #[test]
    fn bitstring() {
        let s = StateSet::from_states(5, [0, 3]).unwrap();
        assert_eq!(s.to_bitstring(), "10010");
    }

    #[test]
    fn ones_crosses_word_boundary() {
        let s = StateSet::from_states(130, [0, 63, 64, 129]).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
    }
}
