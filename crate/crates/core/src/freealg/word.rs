use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of generators (letters are stored as bytes).
pub const MAX_GENERATORS: usize = 255;

/// Named generators with positive weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSet {
    names: Vec<String>,
    degrees: Vec<u32>,
}

impl GeneratorSet {
    pub fn new(names: Vec<String>, degrees: Vec<u32>) -> Result<Self> {
        if names.len() != degrees.len() {
            return Err(Error::Input("generator names and degrees differ in length".into()));
        }
        if names.len() > MAX_GENERATORS {
            return Err(Error::Input(format!("at most {MAX_GENERATORS} generators are supported")));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Input(format!("generator `{n}` declared twice")));
            }
            if degrees[i] == 0 {
                return Err(Error::DegreeZeroGenerator { name: n.clone() });
            }
        }
        Ok(GeneratorSet { names, degrees })
    }

    /// `x0, x1, …` with the given degrees.
    pub fn anonymous(degrees: &[u32]) -> Result<Self> {
        let names = if degrees.len() <= 3 {
            ["x", "y", "z"][..degrees.len()].iter().map(|s| s.to_string()).collect()
        } else {
            (0..degrees.len()).map(|i| format!("x{i}")).collect()
        };
        Self::new(names, degrees.to_vec())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree_of(&self, g: usize) -> u32 {
        self.degrees[g]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn word_degree(&self, w: &Word) -> u32 {
        w.letters().iter().map(|&l| self.degrees[l as usize]).sum()
    }

    /// Number of generators per degree `0..=max`.
    pub fn count_by_degree(&self, max: u32) -> Vec<usize> {
        let mut out = vec![0; max as usize + 1];
        for &d in &self.degrees {
            if d <= max {
                out[d as usize] += 1;
            }
        }
        out
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut s = String::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(&self.names[letters[i] as usize]);
            if j - i > 1 {
                let _ = write!(s, "^{}", j - i);
            }
            i = j;
        }
        s
    }
}

/// A word in the free monoid, as a sequence of generator indices.
///
/// The derived order is lexicographic on letters; on words of equal weighted
/// degree it is the degree-lexicographic order used for leading terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: usize) -> Self {
        Word(vec![g as u8])
    }

    pub fn from_letters(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `left · self · right`.
    pub fn wrap(&self, left: &[u8], right: &[u8]) -> Word {
        let mut v = Vec::with_capacity(left.len() + self.0.len() + right.len());
        v.extend_from_slice(left);
        v.extend_from_slice(&self.0);
        v.extend_from_slice(right);
        Word(v)
    }

    pub fn push(&mut self, g: u8) {
        self.0.push(g);
    }

    /// Position of the first occurrence of `pat` as a contiguous subword.
    pub fn find(&self, pat: &Word) -> Option<usize> {
        if pat.0.len() > self.0.len() {
            return None;
        }
        if pat.0.is_empty() {
            return Some(0);
        }
        self.0.windows(pat.0.len()).position(|w| w == pat.0.as_slice())
    }
}

/// All words of weighted degree exactly `d`, in increasing order.
pub fn words_of_degree(gens: &GeneratorSet, d: u32) -> Vec<Word> {
    let mut by_degree: Vec<Vec<Word>> = vec![vec![Word::empty()]];
    for e in 1..=d {
        let mut level = Vec::new();
        for g in 0..gens.len() {
            let gd = gens.degree_of(g);
            if gd <= e {
                for w in &by_degree[(e - gd) as usize] {
                    let mut v = w.clone();
                    v.push(g as u8);
                    level.push(v);
                }
            }
        }
        level.sort();
        by_degree.push(level);
    }
    by_degree.swap_remove(d as usize)
}

/// Dimension of the degree-`d` component of the free algebra on `gens`.
pub fn graded_component_dim_free(gens: &GeneratorSet, d: u32) -> BigUint {
    let mut dims: Vec<BigUint> = vec![BigUint::from(1u32)];
    for e in 1..=d {
        let mut acc = BigUint::zero();
        for &gd in gens.degrees() {
            if gd <= e {
                acc += &dims[(e - gd) as usize];
            }
        }
        dims.push(acc);
    }
    dims.swap_remove(d as usize)
}
