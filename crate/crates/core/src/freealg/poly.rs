use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, Scalar};

use super::word::{GeneratorSet, Word};

/// Homogeneous element of the free algebra. Terms are keyed by word; all
/// words share `degree`, so the map order is the term order and the last key
/// is the leading word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NcPolynomial {
    terms: BTreeMap<Word, Scalar>,
    degree: u32,
}

impl NcPolynomial {
    pub fn zero(degree: u32) -> Self {
        NcPolynomial { terms: BTreeMap::new(), degree }
    }

    pub fn monomial(gens: &GeneratorSet, w: Word, c: Scalar) -> Self {
        let degree = gens.word_degree(&w);
        let mut terms = BTreeMap::new();
        terms.insert(w, c);
        NcPolynomial { terms, degree }
    }

    /// Build from terms that are already known to share `degree`; zero
    /// coefficients are dropped and repeated words summed.
    pub fn from_terms(field: FieldSpec, degree: u32, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut map: BTreeMap<Word, Scalar> = BTreeMap::new();
        for (w, c) in terms {
            match map.get_mut(&w) {
                Some(acc) => *acc = field.add(acc, &c),
                None => {
                    map.insert(w, c);
                }
            }
        }
        map.retain(|_, c| !field.is_zero(c));
        NcPolynomial { terms: map, degree }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.last_key_value()
    }

    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.last_key_value().map(|(w, _)| w)
    }

    pub fn scale(&self, field: FieldSpec, c: &Scalar) -> Self {
        if field.is_zero(c) {
            return Self::zero(self.degree);
        }
        NcPolynomial {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), field.mul(v, c))).collect(),
            degree: self.degree,
        }
    }

    /// Scale so the leading coefficient is one.
    pub fn monic(&self, field: FieldSpec) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(field, &field.inv(c)),
        }
    }

    /// `self + c · other`; both must have the same degree unless one is zero.
    pub fn axpy(&self, field: FieldSpec, c: &Scalar, other: &NcPolynomial) -> Self {
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut terms = self.terms.clone();
        for (w, v) in &other.terms {
            let add = field.mul(c, v);
            match terms.get_mut(w) {
                Some(acc) => {
                    *acc = field.add(acc, &add);
                    if field.is_zero(acc) {
                        terms.remove(w);
                    }
                }
                None => {
                    if !field.is_zero(&add) {
                        terms.insert(w.clone(), add);
                    }
                }
            }
        }
        NcPolynomial { terms, degree }
    }

    pub fn add(&self, field: FieldSpec, other: &NcPolynomial) -> Self {
        self.axpy(field, &field.one(), other)
    }

    pub fn sub(&self, field: FieldSpec, other: &NcPolynomial) -> Self {
        self.axpy(field, &field.neg(&field.one()), other)
    }

    /// `left · self · right` for words `left`, `right`.
    pub fn wrap(&self, gens: &GeneratorSet, left: &[u8], right: &[u8]) -> Self {
        let extra: u32 = left.iter().chain(right).map(|&l| gens.degree_of(l as usize)).sum();
        NcPolynomial {
            terms: self.terms.iter().map(|(w, c)| (w.wrap(left, right), c.clone())).collect(),
            degree: self.degree + extra,
        }
    }

    pub fn check_field(&self, field: FieldSpec) -> Result<()> {
        if self.terms.values().all(|c| field.contains(c)) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn format(&self, field: FieldSpec, gens: &GeneratorSet) -> String {
        format_terms(field, self.terms.iter().rev().map(|(w, c)| (gens.format_word(w), c)))
    }
}

/// Product in the free algebra.
pub fn multiply(field: FieldSpec, p: &NcPolynomial, q: &NcPolynomial) -> Result<NcPolynomial> {
    p.check_field(field)?;
    q.check_field(field)?;
    let mut terms = Vec::with_capacity(p.terms.len() * q.terms.len());
    for (u, a) in &p.terms {
        for (v, b) in &q.terms {
            terms.push((u.concat(v), field.mul(a, b)));
        }
    }
    Ok(NcPolynomial::from_terms(field, p.degree + q.degree, terms))
}

/// Homogeneous element of a free right module `⊕ e_g · A`, keyed by
/// (module generator, word).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModElement {
    terms: BTreeMap<(usize, Word), Scalar>,
    degree: u32,
}

impl ModElement {
    pub fn zero(degree: u32) -> Self {
        ModElement { terms: BTreeMap::new(), degree }
    }

    pub fn from_terms(field: FieldSpec, degree: u32, terms: impl IntoIterator<Item = ((usize, Word), Scalar)>) -> Self {
        let mut map: BTreeMap<(usize, Word), Scalar> = BTreeMap::new();
        for (k, c) in terms {
            match map.get_mut(&k) {
                Some(acc) => *acc = field.add(acc, &c),
                None => {
                    map.insert(k, c);
                }
            }
        }
        map.retain(|_, c| !field.is_zero(c));
        ModElement { terms: map, degree }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<(usize, Word), Scalar> {
        &self.terms
    }

    pub fn format(&self, field: FieldSpec, gens: &GeneratorSet, mgen_names: &[String]) -> String {
        format_terms(
            field,
            self.terms.iter().map(|((g, w), c)| {
                let name = &mgen_names[*g];
                let s = if w.is_empty() { name.clone() } else { format!("{name}*{}", gens.format_word(w)) };
                (s, c)
            }),
        )
    }
}

fn format_terms<'a>(field: FieldSpec, terms: impl Iterator<Item = (String, &'a Scalar)>) -> String {
    let mut out = String::new();
    for (word, c) in terms {
        let neg = field.is_negative(c);
        let mag = if neg { field.neg(c) } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !field.is_one(&mag) {
            out.push_str(&field.format(&mag));
            out.push('*');
        }
        out.push_str(&word);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (FieldSpec, GeneratorSet) {
        (FieldSpec::prime(2).unwrap(), GeneratorSet::anonymous(&[1, 1]).unwrap())
    }

    fn var(f: FieldSpec, g: &GeneratorSet, i: usize) -> NcPolynomial {
        NcPolynomial::monomial(g, Word::letter(i), f.one())
    }

    #[test]
    fn product_of_letters() {
        let (f, g) = setup();
        let xy = multiply(f, &var(f, &g, 0), &var(f, &g, 1)).unwrap();
        assert_eq!(xy.terms().len(), 1);
        assert_eq!(xy.leading_word(), Some(&Word::from_letters(vec![0, 1])));
        assert_eq!(xy.degree(), 2);
    }

    #[test]
    fn square_of_sum_over_gf2() {
        let (f, g) = setup();
        let s = var(f, &g, 0).add(f, &var(f, &g, 1));
        let sq = multiply(f, &s, &s).unwrap();
        assert_eq!(sq.terms().len(), 4);
        assert_eq!(sq.format(f, &g), "y^2 + y*x + x*y + x^2");
    }

    #[test]
    fn product_with_zero() {
        let (f, g) = setup();
        let z = NcPolynomial::zero(0);
        assert!(multiply(f, &var(f, &g, 0), &z).unwrap().is_zero());
    }

    #[test]
    fn field_mismatch_detected() {
        let (f, g) = setup();
        let q = FieldSpec::Rationals;
        let p = NcPolynomial::monomial(&g, Word::letter(0), q.one());
        assert_eq!(multiply(f, &p, &p), Err(Error::FieldMismatch));
    }
}
