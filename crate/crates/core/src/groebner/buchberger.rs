use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::exactlin::{Echelon, FieldSpec, Scalar, SparseVec};
use crate::freealg::{GeneratorSet, NcPolynomial, Presentation, Word};

use super::automaton::Automaton;

/// A two-sided Gröbner basis of a homogeneous ideal, exact through degree
/// `truncation`.
///
/// Basis elements are monic, sorted by degree and then leading word, and
/// their tails contain no leading word. `complete` holds iff every overlap of
/// the basis has degree at most `truncation` (all such overlaps were
/// resolved), in which case the basis is a Gröbner basis of the whole ideal.
#[derive(Clone, Debug)]
pub struct GroebnerResult {
    field: FieldSpec,
    gens: GeneratorSet,
    basis: Vec<NcPolynomial>,
    truncation: u32,
    complete: bool,
    automaton: Automaton,
}

impl GroebnerResult {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn basis(&self) -> &[NcPolynomial] {
        &self.basis
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn leading_words(&self) -> Vec<Word> {
        self.basis.iter().map(|g| g.leading_word().unwrap().clone()).collect()
    }

    pub fn max_leading_len(&self) -> usize {
        self.basis.iter().map(|g| g.leading_word().unwrap().len()).max().unwrap_or(0)
    }

    pub(crate) fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.automaton.avoids(w)
    }

    /// Reduce `f` to its normal form.
    pub fn normal_form(&self, f: &NcPolynomial) -> Result<NcPolynomial> {
        if f.degree() > self.truncation {
            return Err(Error::TruncationTooSmall {
                needed: f.degree(),
                have: self.truncation,
                context: "normal form".into(),
            });
        }
        f.check_field(self.field)?;
        Ok(reduce(self.field, &self.basis, &self.automaton, f))
    }
}

/// Full reduction of `f` by `basis`, whose leading words are the patterns of
/// `aut` in basis order.
pub(crate) fn reduce(field: FieldSpec, basis: &[NcPolynomial], aut: &Automaton, f: &NcPolynomial) -> NcPolynomial {
    let mut work: BTreeMap<Word, Scalar> = f.terms().clone();
    let mut out: Vec<(Word, Scalar)> = Vec::new();
    while let Some((w, c)) = work.pop_last() {
        let Some((end, pid)) = aut.find(w.letters()) else {
            out.push((w, c));
            continue;
        };
        let g = &basis[pid];
        let lead = g.leading_word().unwrap();
        let start = end - lead.len();
        let (left, right) = (&w.letters()[..start], &w.letters()[end..]);
        let neg = field.neg(&c);
        for (t, tc) in g.terms().range(..lead.clone()) {
            let v = t.wrap(left, right);
            let add = field.mul(&neg, tc);
            match work.get_mut(&v) {
                Some(acc) => {
                    *acc = field.add(acc, &add);
                    if field.is_zero(acc) {
                        work.remove(&v);
                    }
                }
                None => {
                    work.insert(v, add);
                }
            }
        }
    }
    NcPolynomial::from_terms(field, f.degree(), out)
}

/// Overlap obstruction: a proper suffix of `lm(left)` of length `overlap`
/// equals a proper prefix of `lm(right)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Obstruction {
    left: usize,
    right: usize,
    overlap: usize,
}

struct Run {
    field: FieldSpec,
    gens: GeneratorSet,
    basis: Vec<NcPolynomial>,
    pending: BTreeMap<u32, BTreeSet<Obstruction>>,
    limit: u32,
    complete: bool,
    automaton: Automaton,
}

impl Run {
    fn new(field: FieldSpec, gens: &GeneratorSet, limit: u32) -> Self {
        Run {
            field,
            gens: gens.clone(),
            basis: Vec::new(),
            pending: BTreeMap::new(),
            limit,
            complete: true,
            automaton: Automaton::new(gens.len(), &[]),
        }
    }

    fn record_overlaps(&mut self, a: usize, b: usize) {
        let u = self.basis[a].leading_word().unwrap().letters().to_vec();
        let v = self.basis[b].leading_word().unwrap().letters().to_vec();
        for k in 1..u.len().min(v.len()) {
            if u[u.len() - k..] == v[..k] {
                let tail = Word::from_letters(v[k..].to_vec());
                let degree = self.basis[a].degree() + self.gens.word_degree(&tail);
                if degree > self.limit {
                    self.complete = false;
                } else {
                    self.pending.entry(degree).or_default().insert(Obstruction { left: a, right: b, overlap: k });
                }
            }
        }
    }

    fn s_polynomial(&self, o: Obstruction) -> NcPolynomial {
        let f = &self.basis[o.left];
        let g = &self.basis[o.right];
        let u = f.leading_word().unwrap().letters();
        let v = g.leading_word().unwrap().letters();
        let left = &u[..u.len() - o.overlap];
        let right = &v[o.overlap..];
        let minus_one = self.field.neg(&self.field.one());
        f.wrap(&self.gens, &[], right).axpy(self.field, &minus_one, &g.wrap(&self.gens, left, &[]))
    }

    fn normal_form(&self, f: &NcPolynomial) -> NcPolynomial {
        reduce(self.field, &self.basis, &self.automaton, f)
    }

    /// Process one degree. Returns the minimal relations found among `rels`
    /// (all of degree `d`).
    fn step(&mut self, d: u32, rels: &[NcPolynomial]) -> Vec<NcPolynomial> {
        let field = self.field;
        let obstructions = self.pending.remove(&d).unwrap_or_default();
        let s_forms: Vec<NcPolynomial> =
            obstructions.iter().map(|&o| self.normal_form(&self.s_polynomial(o))).filter(|p| !p.is_zero()).collect();
        let r_forms: Vec<NcPolynomial> = rels.iter().map(|r| self.normal_form(r)).filter(|p| !p.is_zero()).collect();
        if s_forms.is_empty() && r_forms.is_empty() {
            return Vec::new();
        }

        let mut words: Vec<Word> = s_forms.iter().chain(&r_forms).flat_map(|p| p.terms().keys().cloned()).collect();
        words.sort();
        words.dedup();
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let to_vec = |p: &NcPolynomial| {
            SparseVec::from_entries(field, p.terms().iter().map(|(w, c)| (index[w], c.clone())).collect())
        };
        let to_poly = |v: &SparseVec| {
            NcPolynomial::from_terms(field, d, v.entries().iter().map(|(i, c)| (words[*i].clone(), c.clone())))
        };

        let mut all = Echelon::new(field);
        for p in &s_forms {
            all.insert(&to_vec(p));
        }
        let mut minimal = Echelon::new(field);
        for p in &r_forms {
            let residual = all.reduce_full(&to_vec(p));
            if !residual.is_zero() {
                minimal.insert(&residual);
                all.insert(&residual);
            }
        }
        let minimal_rels = minimal.reduced_basis().iter().map(to_poly).collect();

        let first_new = self.basis.len();
        for v in all.reduced_basis() {
            self.basis.push(to_poly(&v));
        }
        let leads: Vec<Word> = self.basis.iter().map(|g| g.leading_word().unwrap().clone()).collect();
        self.automaton = Automaton::new(self.gens.len(), &leads);
        for b in first_new..self.basis.len() {
            for a in 0..=b {
                self.record_overlaps(a, b);
                if a != b {
                    self.record_overlaps(b, a);
                }
            }
        }
        minimal_rels
    }

    /// Run through degree `limit`; returns the minimal relations.
    fn run(&mut self, rels: &[NcPolynomial]) -> Vec<NcPolynomial> {
        let mut by_degree: BTreeMap<u32, Vec<NcPolynomial>> = BTreeMap::new();
        for r in rels.iter().filter(|r| !r.is_zero()) {
            by_degree.entry(r.degree()).or_default().push(r.monic(self.field));
        }
        let mut minimal = Vec::new();
        loop {
            let next_rel = by_degree.keys().next().copied();
            let next_obs = self.pending.keys().next().copied();
            let d = match (next_rel, next_obs) {
                (None, None) => break,
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
            };
            if d > self.limit {
                break;
            }
            let rels_d = by_degree.remove(&d).unwrap_or_default();
            minimal.extend(self.step(d, &rels_d));
        }
        minimal
    }
}

/// Gröbner basis truncated at degree `n`.
pub fn groebner_truncated(p: &Presentation, n: u32) -> Result<GroebnerResult> {
    let max_rel = p.max_relation_degree();
    if n < max_rel {
        return Err(Error::TruncationTooSmall {
            needed: max_rel,
            have: n,
            context: "Gröbner basis below the top relation degree".into(),
        });
    }
    let mut run = Run::new(p.field(), p.gens(), n);
    run.run(p.rels());
    Ok(GroebnerResult {
        field: run.field,
        gens: run.gens,
        basis: run.basis,
        truncation: n,
        complete: run.complete,
        automaton: run.automaton,
    })
}

/// Minimal relations spanning the same ideal: in each degree, the reduced
/// echelon form of the relations that are not consequences of lower ones.
pub fn minimize_relations(field: FieldSpec, gens: &GeneratorSet, rels: Vec<NcPolynomial>) -> Vec<NcPolynomial> {
    let limit = rels.iter().map(|r| r.degree()).max().unwrap_or(0);
    let mut run = Run::new(field, gens, limit);
    run.run(&rels)
}

pub fn normal_form(f: &NcPolynomial, g: &GroebnerResult) -> Result<NcPolynomial> {
    g.normal_form(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::parse_presentation;

    fn gb(text: &str, n: u32) -> GroebnerResult {
        let doc = parse_presentation(text).unwrap();
        groebner_truncated(&doc.algebra, n).unwrap()
    }

    fn poly(g: &GroebnerResult, terms: &[(&[u8], i64)]) -> NcPolynomial {
        let f = g.field();
        NcPolynomial::from_terms(
            f,
            terms[0].0.len() as u32,
            terms.iter().map(|(w, c)| (Word::from_letters(w.to_vec()), f.from_i64(*c))),
        )
    }

    #[test]
    fn commutator_is_its_own_basis() {
        let g = gb("field Q\ngen x:1 y:1\nrel x*y - y*x", 6);
        assert_eq!(g.basis().len(), 1);
        assert!(g.complete());
        assert_eq!(g.leading_words(), vec![Word::from_letters(vec![1, 0])]);
        let yx = poly(&g, &[(&[1, 0], 1)]);
        assert_eq!(g.normal_form(&yx).unwrap(), poly(&g, &[(&[0, 1], 1)]));
    }

    #[test]
    fn free_algebra_basis_is_empty() {
        let g = gb("field GF(2)\ngen x:1 y:1", 5);
        assert!(g.basis().is_empty());
        assert!(g.complete());
    }

    #[test]
    fn monomial_relations() {
        let g = gb("field GF(2)\ngen x:1 y:1\nrel y^2; y*x", 6);
        assert_eq!(g.basis().len(), 2);
        assert!(g.complete());
        let yy = poly(&g, &[(&[1, 1], 1)]);
        assert!(g.normal_form(&yy).unwrap().is_zero());
        let xy = poly(&g, &[(&[0, 1], 1)]);
        assert_eq!(g.normal_form(&xy).unwrap(), xy);
    }

    #[test]
    fn overlap_creates_new_element() {
        // x^2 - y*x: overlap of x*x with itself gives y*x*x - x*y*x ...
        let g = gb("field Q\ngen x:1 y:1\nrel y^2 - x*y", 8);
        let h = gb("field Q\ngen x:1 y:1\nrel y^2 - x*y", 4);
        assert!(g.basis().len() >= h.basis().len());
        for b in h.basis() {
            assert!(g.normal_form(b).unwrap().is_zero());
        }
    }

    #[test]
    fn truncation_checks() {
        let doc = parse_presentation("field Q\ngen x:1\nrel x^3").unwrap();
        assert!(matches!(groebner_truncated(&doc.algebra, 2), Err(Error::TruncationTooSmall { .. })));
        let g = groebner_truncated(&doc.algebra, 3).unwrap();
        // self-overlaps of x^3 lie in degrees 4 and 5
        assert!(!g.complete());
        let g = groebner_truncated(&doc.algebra, 5).unwrap();
        assert!(g.complete());
        let big =
            NcPolynomial::monomial(doc.algebra.gens(), Word::from_letters(vec![0; 6]), FieldSpec::Rationals.one());
        assert!(g.normal_form(&big).is_err());
    }

    #[test]
    fn stable_once_complete() {
        let a = gb("field GF(3)\ngen x:1 y:1 z:1\nrel x*y - y*x; x*z - z*x; y*z - z*y", 6);
        let b = gb("field GF(3)\ngen x:1 y:1 z:1\nrel x*y - y*x; x*z - z*x; y*z - z*y", 9);
        assert!(a.complete());
        assert_eq!(a.basis(), b.basis());
    }
}
