//! Exhaustive forward BFS over the power set, for cross-checking the search
//! on small automata. Exponential in `n`; refuses `n > 24`.

use std::collections::VecDeque;

use crate::dfa::Dfa;
use crate::error::{usage, Result};
use crate::state_set::StateSet;

pub const MAX_ORACLE_STATES: usize = 24;

const UNSEEN: u32 = u32::MAX;

fn image(dfa: &Dfa, mut mask: u32, a: usize) -> u32 {
    let mut out = 0u32;
    while mask != 0 {
        let q = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        out |= 1 << dfa.transition(q, a);
    }
    out
}

/// A shortest word mapping `start` to a singleton, by plain BFS over all
/// subsets reachable from it. `None` if no such word exists.
pub fn shortest_word_from(dfa: &Dfa, start: &StateSet) -> Result<Option<Vec<usize>>> {
    let n = dfa.states();
    if n > MAX_ORACLE_STATES {
        return Err(usage(format!(
            "oracle refuses n = {n} > {MAX_ORACLE_STATES}"
        )));
    }
    if start.capacity() != n || start.is_empty() {
        return Err(usage("oracle start set must be nonempty with capacity n"));
    }
    let start = start.words()[0] as u32;
    let mut parent = vec![UNSEEN; 1 << n];
    let mut letter = vec![0u8; 1 << n];
    parent[start as usize] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        if s.count_ones() == 1 {
            let mut word = Vec::new();
            let mut cur = s;
            while cur != start {
                word.push(letter[cur as usize] as usize);
                cur = parent[cur as usize];
            }
            word.reverse();
            return Ok(Some(word));
        }
        for a in 0..dfa.letters() {
            let t = image(dfa, s, a);
            if parent[t as usize] == UNSEEN {
                parent[t as usize] = s;
                letter[t as usize] = a as u8;
                queue.push_back(t);
            }
        }
    }
    Ok(None)
}

/// Length of the shortest reset word, or `None` if not synchronizing.
pub fn shortest_reset_length(dfa: &Dfa) -> Result<Option<usize>> {
    Ok(shortest_word_from(dfa, &dfa.full_set())?.map(|w| w.len()))
}

/// Synchronization by exhaustive subset BFS.
pub fn is_synchronizing(dfa: &Dfa) -> Result<bool> {
    Ok(shortest_reset_length(dfa)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::cerny;

    #[test]
    fn cerny_lengths() {
        for n in 1..=8 {
            let c = cerny(n);
            let w = shortest_word_from(&c, &c.full_set()).unwrap().unwrap();
            assert_eq!(w.len(), (n - 1) * (n - 1));
            assert!(c.is_reset_word(&w) || n == 1);
        }
    }

    #[test]
    fn refuses_large_n() {
        assert!(shortest_reset_length(&cerny(25)).is_err());
    }

    #[test]
    fn non_synchronizing() {
        let d = Dfa::from_rows(&[vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(shortest_reset_length(&d).unwrap(), None);
    }
}
