use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactlin::{Echelon, FieldSpec, Scalar, SparseVec};
use crate::freealg::{GeneratorSet, NcPolynomial, Presentation, Word};

use super::buchberger::{groebner_truncated, GroebnerResult};

/// `dim A_0 ..= dim A_n`, by counting normal words.
pub fn algebra_dims(p: &Presentation, n: u32) -> Result<Vec<BigInt>> {
    let g = groebner_truncated(p, n.max(p.max_relation_degree()))?;
    Ok(g.automaton().count_avoiding(p.gens(), n).into_iter().map(BigInt::from).collect())
}

/// The graded pieces `A_0 ..= A_max` of `A = k⟨X⟩/I` with their normal-word
/// bases, and normal forms of words in those coordinates.
///
/// Coordinates of `A_d` are positions in the sorted list of normal words of
/// degree `d`, so a larger index means a larger word.
#[derive(Debug)]
pub struct QuotientAlgebra {
    gb: GroebnerResult,
    max_degree: u32,
    normal: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, usize>>,
    memo: RefCell<HashMap<Word, SparseVec>>,
}

impl QuotientAlgebra {
    pub fn new(gb: GroebnerResult, max_degree: u32) -> Result<Self> {
        if max_degree > gb.truncation() {
            return Err(Error::TruncationTooSmall {
                needed: max_degree,
                have: gb.truncation(),
                context: "quotient algebra beyond the Gröbner truncation".into(),
            });
        }
        let normal = gb.automaton().words_avoiding(gb.gens(), max_degree);
        let index = normal.iter().map(|ws| ws.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect()).collect();
        Ok(QuotientAlgebra { gb, max_degree, normal, index, memo: RefCell::new(HashMap::new()) })
    }

    /// Gröbner basis to `max(n, top relation degree)` and graded pieces to `n`.
    pub fn from_presentation(p: &Presentation, n: u32) -> Result<Self> {
        let gb = groebner_truncated(p, n.max(p.max_relation_degree()))?;
        Self::new(gb, n)
    }

    pub fn field(&self) -> FieldSpec {
        self.gb.field()
    }

    pub fn gens(&self) -> &GeneratorSet {
        self.gb.gens()
    }

    pub fn groebner(&self) -> &GroebnerResult {
        &self.gb
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn dim(&self, d: u32) -> usize {
        self.normal[d as usize].len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.normal.iter().map(|l| l.len()).collect()
    }

    pub fn normal_words(&self, d: u32) -> &[Word] {
        &self.normal[d as usize]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        let d = self.gens().word_degree(w);
        self.index.get(d as usize)?.get(w).copied()
    }

    /// Normal form of a word of degree at most `max_degree`, as coordinates
    /// in `A_{deg w}`.
    pub fn nf_word(&self, w: &Word) -> SparseVec {
        let field = self.field();
        if let Some(i) = self.index_of(w) {
            return SparseVec::unit(field, i);
        }
        if let Some(v) = self.memo.borrow().get(w) {
            return v.clone();
        }
        let d = self.gens().word_degree(w);
        assert!(d <= self.max_degree, "word beyond the computed degree range");
        let basis = self.gb.basis();
        let aut = self.gb.automaton();
        let mut work: BTreeMap<Word, Scalar> = BTreeMap::new();
        work.insert(w.clone(), field.one());
        let mut out: Vec<(usize, Scalar)> = Vec::new();
        while let Some((u, c)) = work.pop_last() {
            if let Some(i) = self.index[d as usize].get(&u) {
                out.push((*i, c));
                continue;
            }
            if let Some(v) = self.memo.borrow().get(&u) {
                out.extend(v.entries().iter().map(|(i, a)| (*i, field.mul(&c, a))));
                continue;
            }
            let (end, pid) = aut.find(u.letters()).expect("non-normal word has a leading subword");
            let g = &basis[pid];
            let lead = g.leading_word().unwrap();
            let start = end - lead.len();
            let (left, right) = (&u.letters()[..start], &u.letters()[end..]);
            let neg = field.neg(&c);
            for (t, tc) in g.terms().range(..lead.clone()) {
                let v = t.wrap(left, right);
                let add = field.mul(&neg, tc);
                let slot = work.entry(v.clone()).or_insert_with(|| field.zero());
                *slot = field.add(slot, &add);
                if field.is_zero(slot) {
                    work.remove(&v);
                }
            }
        }
        let v = SparseVec::from_entries(field, out);
        self.memo.borrow_mut().insert(w.clone(), v.clone());
        v
    }

    /// `u_i · x_g` where `u_i` is the `i`-th normal word of degree `d`.
    pub fn times_letter(&self, d: u32, i: usize, g: usize) -> SparseVec {
        let mut w = self.normal[d as usize][i].clone();
        w.push(g as u8);
        self.nf_word(&w)
    }

    /// `u_i · w` for a normal word index `i` of degree `d`.
    pub fn times_word(&self, d: u32, i: usize, w: &Word) -> SparseVec {
        self.nf_word(&self.normal[d as usize][i].concat(w))
    }

    /// `v · x_g` for `v ∈ A_d` in normal coordinates.
    pub fn mul_letter(&self, d: u32, v: &SparseVec, g: usize) -> SparseVec {
        let field = self.field();
        let mut raw = Vec::new();
        for (i, c) in v.entries() {
            raw.extend(self.times_letter(d, *i, g).entries().iter().map(|(j, b)| (*j, field.mul(c, b))));
        }
        SparseVec::from_entries(field, raw)
    }

    /// Graded pieces `I_0 ..= I_n` of the right ideal `Σ p·A`.
    pub fn right_ideal(&self, gens: &[NcPolynomial], n: u32) -> Result<Vec<Echelon>> {
        let field = self.field();
        let mut out: Vec<Echelon> = Vec::with_capacity(n as usize + 1);
        for d in 0..=n {
            let mut e = Echelon::new(field);
            for x in 0..self.gens().len() {
                let xd = self.gens().degree_of(x);
                if xd > d {
                    continue;
                }
                for row in out[(d - xd) as usize].rows() {
                    e.insert(&self.mul_letter(d - xd, row, x));
                }
            }
            for p in gens.iter().filter(|p| p.degree() == d) {
                p.check_field(field)?;
                e.insert(&self.nf_poly(p));
            }
            out.push(e);
        }
        Ok(out)
    }

    pub fn nf_poly(&self, p: &NcPolynomial) -> SparseVec {
        let field = self.field();
        let mut raw = Vec::new();
        for (w, c) in p.terms() {
            raw.extend(self.nf_word(w).entries().iter().map(|(i, a)| (*i, field.mul(c, a))));
        }
        SparseVec::from_entries(field, raw)
    }

    pub fn to_poly(&self, d: u32, v: &SparseVec) -> NcPolynomial {
        NcPolynomial::from_terms(
            self.field(),
            d,
            v.entries().iter().map(|(i, c)| (self.normal[d as usize][*i].clone(), c.clone())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::parse_presentation;

    fn dims(text: &str, n: u32) -> Vec<BigInt> {
        algebra_dims(&parse_presentation(text).unwrap().algebra, n).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_algebras() {
        assert_eq!(dims("field Q\ngen x:1 y:1", 4), ints(&[1, 2, 4, 8, 16]));
        assert_eq!(dims("field Q\ngen x:1 y:1\nrel x*y - y*x", 4), ints(&[1, 2, 3, 4, 5]));
        assert_eq!(dims("field GF(2)\ngen x:1 y:1\nrel y^2; y*x", 4), ints(&[1, 2, 2, 2, 2]));
        assert_eq!(dims("field GF(2)\ngen x:1\nrel x^2", 4), ints(&[1, 1, 0, 0, 0]));
        assert_eq!(dims("field Q\ngen x:1 y:2", 4), ints(&[1, 1, 2, 3, 5]));
    }

    #[test]
    fn normal_forms_in_coordinates() {
        let doc = parse_presentation("field Q\ngen x:1 y:1\nrel x*y - y*x").unwrap();
        let a = QuotientAlgebra::from_presentation(&doc.algebra, 5).unwrap();
        assert_eq!(a.dims(), vec![1, 2, 3, 4, 5, 6]);
        // y*x*y*x = x^2*y^2
        let v = a.nf_word(&Word::from_letters(vec![1, 0, 1, 0]));
        let p = a.to_poly(4, &v);
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.leading_word().unwrap(), &Word::from_letters(vec![0, 0, 1, 1]));
        let w = a.nf_word(&Word::from_letters(vec![1, 0, 1, 0]));
        assert_eq!(v, w);
    }
}
