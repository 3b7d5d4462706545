use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::freealg::{GeneratorSet, Word};

/// Aho–Corasick automaton over a set of forbidden words.
///
/// State 0 is the root. `goto` is total (failure transitions are folded in),
/// so a scan costs one table lookup per letter.
#[derive(Clone, Debug)]
pub struct Automaton {
    letters: usize,
    goto: Vec<u32>,
    /// Pattern that ends at this state, following dictionary suffix links.
    hit: Vec<Option<u32>>,
    depth: Vec<u32>,
}

impl Automaton {
    pub fn new(letters: usize, patterns: &[Word]) -> Self {
        let mut goto: Vec<u32> = vec![u32::MAX; letters];
        let mut hit = vec![None];
        let mut depth = vec![0u32];
        for (pid, p) in patterns.iter().enumerate() {
            let mut s = 0usize;
            for &l in p.letters() {
                let slot = s * letters + l as usize;
                if goto[slot] == u32::MAX {
                    let t = hit.len();
                    goto[slot] = t as u32;
                    goto.extend(std::iter::repeat_n(u32::MAX, letters));
                    hit.push(None);
                    depth.push(depth[s] + 1);
                }
                s = goto[slot] as usize;
            }
            if hit[s].is_none() {
                hit[s] = Some(pid as u32);
            }
        }
        let states = hit.len();
        let mut fail = vec![0u32; states];
        let mut queue = VecDeque::new();
        for slot in goto.iter_mut().take(letters) {
            match *slot {
                u32::MAX => *slot = 0,
                t => {
                    fail[t as usize] = 0;
                    queue.push_back(t as usize);
                }
            }
        }
        while let Some(s) = queue.pop_front() {
            let f = fail[s] as usize;
            if hit[s].is_none() {
                hit[s] = hit[f];
            }
            for l in 0..letters {
                let slot = s * letters + l;
                let fallback = goto[f * letters + l];
                match goto[slot] {
                    u32::MAX => goto[slot] = fallback,
                    t => {
                        fail[t as usize] = fallback;
                        queue.push_back(t as usize);
                    }
                }
            }
        }
        Automaton { letters, goto, hit, depth }
    }

    pub fn states(&self) -> usize {
        self.hit.len()
    }

    pub fn step(&self, state: usize, letter: u8) -> usize {
        self.goto[state * self.letters + letter as usize] as usize
    }

    /// Whether some pattern ends at `state`.
    pub fn is_dead(&self, state: usize) -> bool {
        self.hit[state].is_some()
    }

    /// Earliest-ending occurrence: `(end, pattern)` with the pattern
    /// occupying `letters[end - len .. end]`.
    pub fn find(&self, letters: &[u8]) -> Option<(usize, usize)> {
        let mut s = 0;
        for (i, &l) in letters.iter().enumerate() {
            s = self.step(s, l);
            if let Some(p) = self.hit[s] {
                return Some((i + 1, p as usize));
            }
        }
        None
    }

    pub fn avoids(&self, w: &Word) -> bool {
        self.find(w.letters()).is_none()
    }

    /// Number of pattern-avoiding words in each weighted degree `0..=max`.
    pub fn count_avoiding(&self, gens: &GeneratorSet, max: u32) -> Vec<BigUint> {
        let states = self.states();
        let mut table: Vec<Vec<BigUint>> = Vec::with_capacity(max as usize + 1);
        let mut start = vec![BigUint::zero(); states];
        start[0] = BigUint::from(1u32);
        table.push(start);
        for d in 1..=max {
            let mut row = vec![BigUint::zero(); states];
            for g in 0..gens.len() {
                let gd = gens.degree_of(g);
                if gd > d {
                    continue;
                }
                let prev = &table[(d - gd) as usize];
                for (s, c) in prev.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let t = self.step(s, g as u8);
                    if !self.is_dead(t) {
                        row[t] += c;
                    }
                }
            }
            table.push(row);
        }
        table.into_iter().map(|row| row.into_iter().sum()).collect()
    }

    /// The avoiding words themselves, sorted within each degree.
    pub fn words_avoiding(&self, gens: &GeneratorSet, max: u32) -> Vec<Vec<Word>> {
        let mut levels: Vec<Vec<(Word, usize)>> = vec![vec![(Word::empty(), 0)]];
        for d in 1..=max {
            let mut level = Vec::new();
            for g in 0..gens.len() {
                let gd = gens.degree_of(g);
                if gd > d {
                    continue;
                }
                for (w, s) in &levels[(d - gd) as usize] {
                    let t = self.step(*s, g as u8);
                    if !self.is_dead(t) {
                        let mut v = w.clone();
                        v.push(g as u8);
                        level.push((v, t));
                    }
                }
            }
            level.sort();
            levels.push(level);
        }
        levels.into_iter().map(|l| l.into_iter().map(|(w, _)| w).collect()).collect()
    }

    /// Length of the longest pattern.
    pub fn max_pattern_len(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0) as usize
    }
}
