use crate::error::{Error, Result};
use crate::exactlin::{Echelon, FieldSpec, SparseVec};
use crate::freealg::{ModElement, ModulePresentation, Word};

use super::quotient::QuotientAlgebra;

/// Column layout of one graded piece of a free module: generator `g`
/// occupies `start .. start + dim A_{d - deg g}`.
#[derive(Clone, Debug, Default)]
struct Layout {
    blocks: Vec<(usize, usize, usize)>,
    len: usize,
}

/// A free right module `⊕_g e_g A` with `deg e_g` given.
///
/// The basis of the degree-`d` piece is `(g, u)` for normal words `u` of
/// degree `d - deg e_g`, ordered by generator and then word. Generators may
/// be appended in non-decreasing degree; cached layouts are extended so that
/// existing indices never move.
#[derive(Clone, Debug, Default)]
pub struct FreeModule {
    degrees: Vec<u32>,
    layouts: Vec<Option<Layout>>,
}

impl FreeModule {
    pub fn new(degrees: &[u32]) -> Self {
        FreeModule { degrees: degrees.to_vec(), layouts: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn add_generator(&mut self, a: &QuotientAlgebra, degree: u32) -> usize {
        let g = self.degrees.len();
        self.degrees.push(degree);
        for (e, slot) in self.layouts.iter_mut().enumerate() {
            let e = e as u32;
            if let Some(l) = slot {
                if e >= degree {
                    let n = a.dim(e - degree);
                    if n > 0 {
                        l.blocks.push((g, l.len, n));
                        l.len += n;
                    }
                }
            }
        }
        g
    }

    fn layout(&mut self, a: &QuotientAlgebra, d: u32) -> &Layout {
        let d = d as usize;
        if self.layouts.len() <= d {
            self.layouts.resize(d + 1, None);
        }
        if self.layouts[d].is_none() {
            let mut l = Layout::default();
            for (g, &gd) in self.degrees.iter().enumerate() {
                if gd as usize <= d {
                    let n = a.dim(d as u32 - gd);
                    if n > 0 {
                        l.blocks.push((g, l.len, n));
                        l.len += n;
                    }
                }
            }
            self.layouts[d] = Some(l);
        }
        self.layouts[d].as_ref().unwrap()
    }

    pub fn dim(&mut self, a: &QuotientAlgebra, d: u32) -> usize {
        self.layout(a, d).len
    }

    pub fn index(&mut self, a: &QuotientAlgebra, d: u32, g: usize, word_index: usize) -> usize {
        let l = self.layout(a, d);
        let k = l.blocks.binary_search_by_key(&g, |b| b.0).expect("generator present in this degree");
        l.blocks[k].1 + word_index
    }

    /// `(g, word index)` of a column.
    pub fn decode(&mut self, a: &QuotientAlgebra, d: u32, column: usize) -> (usize, usize) {
        let l = self.layout(a, d);
        let k = l.blocks.partition_point(|b| b.1 <= column) - 1;
        let (g, start, _) = l.blocks[k];
        (g, column - start)
    }

    /// Right multiplication by the generator `x` of the algebra.
    pub fn act_letter(&mut self, a: &QuotientAlgebra, d: u32, v: &SparseVec, x: usize) -> SparseVec {
        let field = a.field();
        let target = d + a.gens().degree_of(x);
        let mut raw = Vec::new();
        for (col, c) in v.entries() {
            let (g, wi) = self.decode(a, d, *col);
            let image = a.times_letter(d - self.degrees[g], wi, x);
            self.layout(a, target);
            for (j, b) in image.entries() {
                raw.push((self.index(a, target, g, *j), field.mul(c, b)));
            }
        }
        SparseVec::from_entries(field, raw)
    }

    /// Right multiplication by a word.
    pub fn act_word(&mut self, a: &QuotientAlgebra, d: u32, v: &SparseVec, w: &Word) -> SparseVec {
        let mut cur = v.clone();
        let mut e = d;
        for &x in w.letters() {
            cur = self.act_letter(a, e, &cur, x as usize);
            e += a.gens().degree_of(x as usize);
        }
        cur
    }

    /// Coordinates of a free-module element given by words.
    pub fn embed(&mut self, a: &QuotientAlgebra, m: &ModElement) -> SparseVec {
        let field = a.field();
        let d = m.degree();
        let mut raw = Vec::new();
        for ((g, w), c) in m.terms() {
            for (j, b) in a.nf_word(w).entries() {
                raw.push((self.index(a, d, *g, *j), field.mul(c, b)));
            }
        }
        SparseVec::from_entries(field, raw)
    }

    /// Inverse of [`Self::embed`] on normal words.
    pub fn to_element(&mut self, a: &QuotientAlgebra, d: u32, v: &SparseVec) -> ModElement {
        let field = a.field();
        let mut terms = Vec::new();
        for (col, c) in v.entries() {
            let (g, wi) = self.decode(a, d, *col);
            terms.push(((g, a.normal_words(d - self.degrees[g])[wi].clone()), c.clone()));
        }
        ModElement::from_terms(field, d, terms)
    }
}

/// `M = F / R` in degrees `0..=max`, with `R` the submodule generated by the
/// presentation's relations. The normal basis of `M_d` is the set of
/// non-pivot columns of `R_d`, in column order.
#[derive(Debug)]
pub struct GradedModule {
    field: FieldSpec,
    free: FreeModule,
    rels: Vec<Echelon>,
    normal: Vec<Vec<usize>>,
    max_degree: u32,
}

impl GradedModule {
    pub fn new(a: &QuotientAlgebra, m: &ModulePresentation, max: u32) -> Result<Self> {
        if max > a.max_degree() {
            return Err(Error::TruncationTooSmall {
                needed: max,
                have: a.max_degree(),
                context: "module beyond the algebra's computed range".into(),
            });
        }
        let field = a.field();
        let mut free = FreeModule::new(m.mgen_degrees());
        let mut rels: Vec<Echelon> = Vec::with_capacity(max as usize + 1);
        let mut normal = Vec::with_capacity(max as usize + 1);
        for d in 0..=max {
            let mut e = Echelon::new(field);
            for x in 0..a.gens().len() {
                let xd = a.gens().degree_of(x);
                if xd > d {
                    continue;
                }
                let prev: Vec<SparseVec> = rels[(d - xd) as usize].rows().to_vec();
                for row in prev {
                    let moved = free.act_letter(a, d - xd, &row, x);
                    e.insert(&moved);
                }
            }
            for r in m.mrels().iter().filter(|r| r.degree() == d) {
                let v = free.embed(a, r);
                e.insert(&v);
            }
            let len = free.dim(a, d);
            normal.push((0..len).filter(|c| !e.is_pivot(*c)).collect());
            rels.push(e);
        }
        Ok(GradedModule { field, free, rels, normal, max_degree: max })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn dim(&self, d: u32) -> usize {
        self.normal[d as usize].len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.normal.iter().map(|n| n.len()).collect()
    }

    pub fn free(&mut self) -> &mut FreeModule {
        &mut self.free
    }

    /// Basis of the relation submodule in degree `d`, over the free columns.
    pub fn relations(&self, d: u32) -> &Echelon {
        &self.rels[d as usize]
    }

    /// Normal basis of `M_d` as `(module generator, word)`.
    pub fn normal_basis(&mut self, a: &QuotientAlgebra, d: u32) -> Vec<(usize, Word)> {
        let cols = self.normal[d as usize].clone();
        cols.into_iter()
            .map(|c| {
                let (g, wi) = self.free.decode(a, d, c);
                (g, a.normal_words(d - self.free.degrees()[g])[wi].clone())
            })
            .collect()
    }

    /// Coordinates in the normal basis of the class of a free element.
    pub fn reduce(&self, d: u32, v: &SparseVec) -> SparseVec {
        let r = self.rels[d as usize].reduce_full(v);
        let normal = &self.normal[d as usize];
        r.remap(|c| normal.binary_search(&c).ok())
    }

    /// Lift normal coordinates back to free columns.
    pub fn lift(&self, d: u32, v: &SparseVec) -> SparseVec {
        let normal = &self.normal[d as usize];
        v.remap(|k| Some(normal[k]))
    }

    /// `v · x` for `v ∈ M_d` in normal coordinates.
    pub fn act_letter(&mut self, a: &QuotientAlgebra, d: u32, v: &SparseVec, x: usize) -> SparseVec {
        let lifted = self.lift(d, v);
        let moved = self.free.act_letter(a, d, &lifted, x);
        self.reduce(d + a.gens().degree_of(x), &moved)
    }
}

/// Normal module words `(generator, word)` of one degree.
pub type ModuleBasis = Vec<(usize, Word)>;

/// `dim M_0 ..= dim M_n` with the normal module words per degree.
pub fn module_dims(m: &ModulePresentation, n: u32) -> Result<(Vec<usize>, Vec<ModuleBasis>)> {
    let a = QuotientAlgebra::from_presentation(m.base(), n)?;
    let mut gm = GradedModule::new(&a, m, n)?;
    let bases = (0..=n).map(|d| gm.normal_basis(&a, d)).collect();
    Ok((gm.dims(), bases))
}
