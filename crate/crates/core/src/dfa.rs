//! Complete deterministic automata, their inverse transition tables, the
//! pair-automaton synchronization check and the unreachable-state reduction.

use std::fmt;
use std::str::FromStr;

use crate::error::{usage, Error, Result};
use crate::state_set::{self, words_for, StateSet};

/// A complete deterministic automaton over states `0..n` and letters `0..k`.
///
/// Transitions are stored letter-major so that applying one letter to a set
/// walks a single contiguous row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    n: usize,
    k: usize,
    by_letter: Vec<u32>,
}

impl Dfa {
    /// Builds an automaton from `rows[q][a] = δ(q, a)`.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(usage("automaton needs at least one state"));
        }
        let k = rows[0].len();
        if k == 0 {
            return Err(usage("automaton needs at least one letter"));
        }
        let mut by_letter = vec![0u32; n * k];
        for (q, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(usage(format!(
                    "state {q} has {} transitions, expected {k}",
                    row.len()
                )));
            }
            for (a, &t) in row.iter().enumerate() {
                if t >= n {
                    return Err(usage(format!("δ({q},{a}) = {t} out of range for n = {n}")));
                }
                by_letter[a * n + q] = t as u32;
            }
        }
        Ok(Dfa { n, k, by_letter })
    }

    /// Builds an automaton from a transition function.
    pub fn from_fn(
        n: usize,
        k: usize,
        mut delta: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self> {
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|q| (0..k).map(|a| delta(q, a)).collect())
            .collect();
        if n == 0 {
            return Err(usage("automaton needs at least one state"));
        }
        Self::from_rows(&rows)
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> usize {
        self.k
    }

    /// δ(q, a)
    #[inline]
    pub fn transition(&self, q: usize, a: usize) -> usize {
        self.by_letter[a * self.n + q] as usize
    }

    #[inline]
    pub(crate) fn letter_row(&self, a: usize) -> &[u32] {
        &self.by_letter[a * self.n..(a + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|q| (0..self.k).map(|a| self.transition(q, a)).collect())
            .collect()
    }

    pub fn full_set(&self) -> StateSet {
        StateSet::full(self.n)
    }

    fn check_letter(&self, a: usize) -> Result<()> {
        if a >= self.k {
            return Err(usage(format!("letter {a} out of range for k = {}", self.k)));
        }
        Ok(())
    }

    fn check_set(&self, s: &StateSet) -> Result<()> {
        if s.capacity() != self.n {
            return Err(usage(format!(
                "state set capacity {} does not match n = {}",
                s.capacity(),
                self.n
            )));
        }
        Ok(())
    }

    /// Writes `src · a` into `dst`, which must be zeroed.
    #[inline]
    pub(crate) fn image_into(&self, src: &[u64], a: usize, dst: &mut [u64]) {
        let row = self.letter_row(a);
        for q in state_set::ones(src) {
            state_set::set_bit(dst, row[q] as usize);
        }
    }

    /// `{ δ(q, a) : q ∈ s }`
    pub fn apply_letter(&self, s: &StateSet, a: usize) -> Result<StateSet> {
        self.check_letter(a)?;
        self.check_set(s)?;
        let mut out = vec![0u64; words_for(self.n)];
        self.image_into(s.words(), a, &mut out);
        Ok(StateSet::from_words(self.n, &out))
    }

    /// Left-to-right action of a word on a set.
    pub fn apply_word(&self, s: &StateSet, word: &[usize]) -> Result<StateSet> {
        self.check_set(s)?;
        if let Some(&a) = word.iter().find(|&&a| a >= self.k) {
            return Err(usage(format!("letter {a} out of range for k = {}", self.k)));
        }
        let w = words_for(self.n);
        let mut cur = s.words().to_vec();
        let mut next = vec![0u64; w];
        for &a in word {
            next.iter_mut().for_each(|x| *x = 0);
            self.image_into(&cur, a, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(StateSet::from_words(self.n, &cur))
    }

    /// True iff `word` maps the whole state set to a single state.
    pub fn is_reset_word(&self, word: &[usize]) -> bool {
        self.apply_word(&self.full_set(), word)
            .map(|s| s.is_singleton())
            .unwrap_or(false)
    }

    pub fn inverse(&self) -> InverseDfa {
        InverseDfa::new(self)
    }

    /// Pair-automaton criterion: every pair of states can be merged.
    pub fn is_synchronizing(&self) -> bool {
        PairAutomaton::new(self).all_pairs_mergeable()
    }

    /// Serializes to the text format: `n k`, then one row of `k` targets per state.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dfa")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("rows", &self.rows())
            .finish()
    }
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.k)?;
        for q in 0..self.n {
            for a in 0..self.k {
                if a > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.transition(q, a))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Dfa {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut all = parse_automata(s)?;
        match all.len() {
            1 => Ok(all.pop().unwrap()),
            0 => Err(Error::Parse {
                line: 1,
                column: 1,
                message: "no automaton found".into(),
            }),
            c => Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("expected one automaton, found {c}"),
            }),
        }
    }
}

/// Parses a sequence of automaton records. Blank lines between records are
/// ignored.
pub fn parse_automata(text: &str) -> Result<Vec<Dfa>> {
    struct Tok<'a> {
        text: &'a str,
        column: usize,
    }
    fn tokens(line: &str) -> Vec<Tok<'_>> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in line.char_indices() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push(Tok {
                        text: &line[s..i],
                        column: s + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push(Tok {
                text: &line[s..],
                column: s + 1,
            });
        }
        out
    }
    fn number(tok: &Tok<'_>, line: usize) -> Result<usize> {
        tok.text.parse::<usize>().map_err(|_| Error::Parse {
            line,
            column: tok.column,
            message: format!("expected a non-negative integer, found {:?}", tok.text),
        })
    }

    let lines: Vec<&str> = text.lines().collect();
    let mut automata = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let header = tokens(lines[i]);
        if header.is_empty() {
            i += 1;
            continue;
        }
        let line_no = i + 1;
        if header.len() != 2 {
            let column = header.get(2).map_or(lines[i].len() + 1, |t| t.column);
            return Err(Error::Parse {
                line: line_no,
                column,
                message: format!("header must be `n k`, found {} fields", header.len()),
            });
        }
        let n = number(&header[0], line_no)?;
        let k = number(&header[1], line_no)?;
        if n == 0 || k == 0 {
            return Err(Error::Parse {
                line: line_no,
                column: if n == 0 {
                    header[0].column
                } else {
                    header[1].column
                },
                message: "n and k must be positive".into(),
            });
        }
        let mut rows = Vec::with_capacity(n);
        for q in 0..n {
            let idx = i + 1 + q;
            let row_no = idx + 1;
            let Some(line) = lines.get(idx) else {
                return Err(Error::Parse {
                    line: row_no,
                    column: 1,
                    message: format!("missing transition row for state {q}"),
                });
            };
            let toks = tokens(line);
            if toks.len() != k {
                let column = toks.get(k).map_or(line.len() + 1, |t| t.column);
                return Err(Error::Parse {
                    line: row_no,
                    column,
                    message: format!("expected {k} transitions, found {}", toks.len()),
                });
            }
            let mut row = Vec::with_capacity(k);
            for tok in &toks {
                let t = number(tok, row_no)?;
                if t >= n {
                    return Err(Error::Parse {
                        line: row_no,
                        column: tok.column,
                        message: format!("target state {t} out of range for n = {n}"),
                    });
                }
                row.push(t);
            }
            rows.push(row);
        }
        automata.push(Dfa::from_rows(&rows)?);
        i += 1 + n;
    }
    Ok(automata)
}

/// Preimage lists `{ q : δ(q, a) = t }` for every letter `a` and state `t`,
/// stored as one compressed table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseDfa {
    n: usize,
    k: usize,
    starts: Vec<u32>,
    sources: Vec<u32>,
}

impl InverseDfa {
    pub fn new(dfa: &Dfa) -> Self {
        let (n, k) = (dfa.n, dfa.k);
        let mut counts = vec![0u32; n * k + 1];
        for a in 0..k {
            for &t in dfa.letter_row(a) {
                counts[a * n + t as usize + 1] += 1;
            }
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let starts = counts.clone();
        let mut fill = counts;
        let mut sources = vec![0u32; n * k];
        for a in 0..k {
            for (q, &t) in dfa.letter_row(a).iter().enumerate() {
                let slot = &mut fill[a * n + t as usize];
                sources[*slot as usize] = q as u32;
                *slot += 1;
            }
        }
        InverseDfa {
            n,
            k,
            starts,
            sources,
        }
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> usize {
        self.k
    }

    /// `{ q : δ(q, a) = t }` in ascending order.
    #[inline]
    pub fn preimages(&self, t: usize, a: usize) -> &[u32] {
        let i = a * self.n + t;
        &self.sources[self.starts[i] as usize..self.starts[i + 1] as usize]
    }

    /// Writes `{ q : δ(q, a) ∈ src }` into `dst`, which must be zeroed.
    #[inline]
    pub(crate) fn preimage_into(&self, src: &[u64], a: usize, dst: &mut [u64]) {
        for t in state_set::ones(src) {
            for &q in self.preimages(t, a) {
                state_set::set_bit(dst, q as usize);
            }
        }
    }

    /// `{ q : δ(q, a) ∈ s }`. May be empty.
    pub fn apply_letter_inverse(&self, s: &StateSet, a: usize) -> Result<StateSet> {
        if a >= self.k {
            return Err(usage(format!("letter {a} out of range for k = {}", self.k)));
        }
        if s.capacity() != self.n {
            return Err(usage(format!(
                "state set capacity {} does not match n = {}",
                s.capacity(),
                self.n
            )));
        }
        let mut out = vec![0u64; words_for(self.n)];
        self.preimage_into(s.words(), a, &mut out);
        Ok(StateSet::from_words(self.n, &out))
    }
}

const UNREACHED: u32 = u32::MAX;

/// Shortest merging words for every unordered pair of states, computed by a
/// backward BFS from the diagonal of the pair automaton in O(n²·k).
pub struct PairAutomaton<'a> {
    dfa: &'a Dfa,
    // indexed p * n + q with p < q
    dist: Vec<u32>,
    next: Vec<u32>,
}

impl<'a> PairAutomaton<'a> {
    pub fn new(dfa: &'a Dfa) -> Self {
        let n = dfa.n;
        let inv = InverseDfa::new(dfa);
        let mut dist = vec![UNREACHED; n * n];
        let mut next = vec![UNREACHED; n * n];
        // BFS queue of unordered pairs (p < q), consumed from `head`
        let mut queue: Vec<(u32, u32)> = Vec::new();

        fn visit(
            dist: &mut [u32],
            next: &mut [u32],
            queue: &mut Vec<(u32, u32)>,
            n: usize,
            (p, q): (u32, u32),
            a: usize,
            d: u32,
        ) {
            let (p, q) = if p < q { (p, q) } else { (q, p) };
            let i = p as usize * n + q as usize;
            if dist[i] == UNREACHED {
                dist[i] = d;
                next[i] = a as u32;
                queue.push((p, q));
            }
        }

        for r in 0..n {
            for a in 0..dfa.k {
                let pre = inv.preimages(r, a);
                for (i, &p) in pre.iter().enumerate() {
                    for &q in &pre[i + 1..] {
                        visit(&mut dist, &mut next, &mut queue, n, (p, q), a, 1);
                    }
                }
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let (r, s) = queue[head];
            head += 1;
            let d = dist[r as usize * n + s as usize] + 1;
            for a in 0..dfa.k {
                for &p in inv.preimages(r as usize, a) {
                    for &q in inv.preimages(s as usize, a) {
                        visit(&mut dist, &mut next, &mut queue, n, (p, q), a, d);
                    }
                }
            }
        }
        PairAutomaton { dfa, dist, next }
    }

    /// Length of the shortest word merging `p` and `q`, or `None` if they
    /// cannot be merged. Zero when `p == q`.
    pub fn merge_distance(&self, p: usize, q: usize) -> Option<usize> {
        if p == q {
            return Some(0);
        }
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        match self.dist[p * self.dfa.n + q] {
            UNREACHED => None,
            d => Some(d as usize),
        }
    }

    /// A shortest word `w` with `δ(p, w) = δ(q, w)`.
    pub fn merging_word(&self, p: usize, q: usize) -> Option<Vec<usize>> {
        self.merge_distance(p, q)?;
        let (mut p, mut q) = (p, q);
        let mut word = Vec::new();
        while p != q {
            let (lo, hi) = if p < q { (p, q) } else { (q, p) };
            let a = self.next[lo * self.dfa.n + hi] as usize;
            word.push(a);
            p = self.dfa.transition(p, a);
            q = self.dfa.transition(q, a);
        }
        Some(word)
    }

    pub fn all_pairs_mergeable(&self) -> bool {
        let n = self.dfa.n;
        (0..n).all(|p| (p + 1..n).all(|q| self.dist[p * n + q] != UNREACHED))
    }
}

/// A reset word built by repeatedly merging the closest pair of states left
/// in the current image. Not shortest in general; `None` if the automaton is
/// not synchronizing.
pub fn greedy_reset_word(dfa: &Dfa) -> Option<Vec<usize>> {
    let pairs = PairAutomaton::new(dfa);
    if !pairs.all_pairs_mergeable() {
        return None;
    }
    let mut current: Vec<usize> = (0..dfa.n).collect();
    let mut word = Vec::new();
    while current.len() > 1 {
        let mut best = (usize::MAX, 0, 0);
        for (i, &p) in current.iter().enumerate() {
            for &q in &current[i + 1..] {
                let d = pairs.merge_distance(p, q)?;
                if d < best.0 {
                    best = (d, p, q);
                }
            }
        }
        let w = pairs.merging_word(best.1, best.2)?;
        for &a in &w {
            for q in current.iter_mut() {
                *q = dfa.transition(*q, a);
            }
        }
        current.sort_unstable();
        current.dedup();
        word.extend(w);
    }
    Some(word)
}

/// The sub-automaton left after dropping states that become unreachable
/// after a few forward steps.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub dfa: Dfa,
    /// `old_to_new[q]` is the new index of original state `q`, if kept.
    pub old_to_new: Vec<Option<usize>>,
    /// `new_to_old[i]` is the original index of reduced state `i`.
    pub new_to_old: Vec<usize>,
}

impl Reduction {
    pub fn removed(&self) -> usize {
        self.old_to_new.len() - self.new_to_old.len()
    }

    pub fn is_identity(&self) -> bool {
        self.removed() == 0
    }

    /// Maps a set of original states into the reduced automaton. Fails if a
    /// member was removed.
    pub fn map_set(&self, s: &StateSet) -> Result<StateSet> {
        let m = self.new_to_old.len();
        let mut out = StateSet::empty(m);
        for q in s.iter() {
            match self.old_to_new.get(q).copied().flatten() {
                Some(i) => out.insert(i),
                None => return Err(usage(format!("state {q} was removed by the reduction"))),
            }
        }
        Ok(out)
    }
}

/// Follows `warmup_steps` forward levels from the full state set, takes the
/// union `R` of the images on the final level (the states reachable by walks
/// of exactly that length) and returns the sub-automaton induced by the
/// closure of `R` under all letters.
pub fn reduce_reachable(dfa: &Dfa, warmup_steps: usize) -> Result<Reduction> {
    let n = dfa.n;
    let mut level = vec![true; n];
    for _ in 0..warmup_steps {
        let mut next = vec![false; n];
        for q in (0..n).filter(|&q| level[q]) {
            for a in 0..dfa.k {
                next[dfa.transition(q, a)] = true;
            }
        }
        if next == level {
            break;
        }
        level = next;
    }
    let mut keep = level;
    let mut stack: Vec<usize> = (0..n).filter(|&q| keep[q]).collect();
    while let Some(q) = stack.pop() {
        for a in 0..dfa.k {
            let t = dfa.transition(q, a);
            if !keep[t] {
                keep[t] = true;
                stack.push(t);
            }
        }
    }
    let new_to_old: Vec<usize> = (0..n).filter(|&q| keep[q]).collect();
    let mut old_to_new = vec![None; n];
    for (i, &q) in new_to_old.iter().enumerate() {
        old_to_new[q] = Some(i);
    }
    let mut rows = Vec::with_capacity(new_to_old.len());
    for &q in &new_to_old {
        let mut row = Vec::with_capacity(dfa.k);
        for a in 0..dfa.k {
            let t = old_to_new[dfa.transition(q, a)].ok_or_else(|| {
                Error::Internal("reduced state set is not transition-closed".into())
            })?;
            row.push(t);
        }
        rows.push(row);
    }
    Ok(Reduction {
        dfa: Dfa::from_rows(&rows)?,
        old_to_new,
        new_to_old,
    })
}
