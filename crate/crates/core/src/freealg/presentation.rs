use std::fmt;

use crate::error::{Error, Result};
use crate::exactlin::FieldSpec;
use crate::groebner::minimize_relations;

use super::poly::{multiply, ModElement, NcPolynomial};
use super::word::{GeneratorSet, Word};

/// A connected graded algebra `k⟨gens⟩ / (rels)`.
///
/// Relations are kept minimal: each degree holds the reduced row echelon
/// form of the relations that are not consequences of lower-degree ones, so
/// the relation count per degree is `dim Tor_2(k,k)` in that degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    field: FieldSpec,
    gens: GeneratorSet,
    rels: Vec<NcPolynomial>,
}

impl Presentation {
    /// Validate and minimize. Relations must not contain single-letter
    /// terms (see [`eliminate_linear_relations`]).
    pub fn new(field: FieldSpec, gens: GeneratorSet, rels: Vec<NcPolynomial>) -> Result<Self> {
        for r in &rels {
            r.check_field(field)?;
            if r.terms().keys().any(|w| w.len() < 2) && !r.is_zero() {
                return Err(Error::Input(format!(
                    "relation `{}` is not decomposable; eliminate the generator first",
                    r.format(field, &gens)
                )));
            }
        }
        let rels = minimize_relations(field, &gens, rels.into_iter().filter(|r| !r.is_zero()).collect());
        Ok(Presentation { field, gens, rels })
    }

    pub fn free(field: FieldSpec, gens: GeneratorSet) -> Self {
        Presentation { field, gens, rels: Vec::new() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn rels(&self) -> &[NcPolynomial] {
        &self.rels
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.rels.iter().map(|r| r.degree()).max().unwrap_or(0)
    }

    /// Relation count per degree `0..=max`.
    pub fn relations_by_degree(&self, max: u32) -> Vec<usize> {
        let mut out = vec![0; max as usize + 1];
        for r in &self.rels {
            if r.degree() <= max {
                out[r.degree() as usize] += 1;
            }
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {}", self.field)?;
        write!(f, "gen")?;
        for (n, d) in self.gens.names().iter().zip(self.gens.degrees()) {
            write!(f, " {n}:{d}")?;
        }
        writeln!(f)?;
        for r in &self.rels {
            writeln!(f, "rel {}", r.format(self.field, &self.gens))?;
        }
        Ok(())
    }
}

/// A graded right module `(⊕ e_g A) / (mrels · A)` over `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    name: String,
    base: Presentation,
    mgen_names: Vec<String>,
    mgen_degrees: Vec<u32>,
    mrels: Vec<ModElement>,
}

impl ModulePresentation {
    pub fn new(
        name: impl Into<String>,
        base: Presentation,
        mgen_names: Vec<String>,
        mgen_degrees: Vec<u32>,
        mrels: Vec<ModElement>,
    ) -> Result<Self> {
        if mgen_names.len() != mgen_degrees.len() {
            return Err(Error::Input("module generator names and degrees differ in length".into()));
        }
        for (i, n) in mgen_names.iter().enumerate() {
            if mgen_names[..i].contains(n) || base.gens().index_of(n).is_some() {
                return Err(Error::Input(format!("module generator name `{n}` is not unique")));
            }
        }
        let min_deg = mgen_degrees.iter().copied().min().unwrap_or(0);
        let field = base.field();
        let mut kept = Vec::new();
        for r in mrels {
            if r.is_zero() {
                continue;
            }
            if !r.terms().values().all(|c| field.contains(c)) {
                return Err(Error::FieldMismatch);
            }
            for (g, w) in r.terms().keys() {
                if *g >= mgen_names.len() {
                    return Err(Error::Input(format!("module generator index {g} out of range")));
                }
                if mgen_degrees[*g] + base.gens().word_degree(w) != r.degree() {
                    return Err(Error::Input("inhomogeneous module relation".into()));
                }
            }
            if r.degree() < min_deg + 1 {
                return Err(Error::Input(format!(
                    "module relation of degree {} must lie above the lowest generator degree {min_deg}",
                    r.degree()
                )));
            }
            kept.push(r);
        }
        Ok(ModulePresentation { name: name.into(), base, mgen_names, mgen_degrees, mrels: kept })
    }

    /// The free module with generators in the given degrees.
    pub fn free(base: Presentation, degrees: &[u32]) -> Self {
        let names = (0..degrees.len()).map(|i| format!("e{i}")).collect();
        ModulePresentation {
            name: "free".into(),
            base,
            mgen_names: names,
            mgen_degrees: degrees.to_vec(),
            mrels: Vec::new(),
        }
    }

    /// `A` as a right module over itself.
    pub fn regular(base: Presentation) -> Self {
        let mut m = Self::free(base, &[0]);
        m.name = "A".into();
        m.mgen_names = vec!["e".into()];
        m
    }

    /// The trivial module `k = A / A_+`.
    pub fn trivial(base: Presentation) -> Self {
        let field = base.field();
        let mrels = (0..base.gens().len())
            .map(|g| ModElement::from_terms(field, base.gens().degree_of(g), [((0, Word::letter(g)), field.one())]))
            .collect();
        ModulePresentation { name: "k".into(), base, mgen_names: vec!["e".into()], mgen_degrees: vec![0], mrels }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn field(&self) -> FieldSpec {
        self.base.field()
    }

    pub fn mgen_names(&self) -> &[String] {
        &self.mgen_names
    }

    pub fn mgen_degrees(&self) -> &[u32] {
        &self.mgen_degrees
    }

    pub fn mrels(&self) -> &[ModElement] {
        &self.mrels
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.mgen_degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.mrels.iter().map(|r| r.degree()).max().unwrap_or(0)
    }

    /// Write the module block of the input format.
    pub fn format_block(&self) -> String {
        let field = self.field();
        let mut s = format!("module {}\nmgen", self.name);
        for (n, d) in self.mgen_names.iter().zip(&self.mgen_degrees) {
            s.push_str(&format!(" {n}:{d}"));
        }
        s.push('\n');
        for r in &self.mrels {
            s.push_str(&format!("mrel {}\n", r.format(field, self.base.gens(), &self.mgen_names)));
        }
        s
    }
}

/// Result of substituting away generators that occur linearly in relations.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub gens: GeneratorSet,
    pub rels: Vec<NcPolynomial>,
    /// For every original generator: its expression in the surviving ones.
    images: Vec<NcPolynomial>,
}

impl Elimination {
    /// Rewrite a polynomial over the original generators.
    pub fn apply(&self, field: FieldSpec, p: &NcPolynomial) -> NcPolynomial {
        substitute_letters(field, &self.images, p)
    }

    /// Rewrite a module element whose words use the original generators.
    pub fn apply_module(&self, field: FieldSpec, m: &ModElement) -> ModElement {
        let mut terms = Vec::new();
        for ((g, w), c) in m.terms() {
            let p = self.apply(field, &NcPolynomial::from_terms(field, 0, [(w.clone(), c.clone())]));
            for (v, d) in p.terms() {
                terms.push(((*g, v.clone()), d.clone()));
            }
        }
        ModElement::from_terms(field, m.degree(), terms)
    }
}

/// Replace every letter `l` of `p` by `images[l]`.
fn substitute_letters(field: FieldSpec, images: &[NcPolynomial], p: &NcPolynomial) -> NcPolynomial {
    let mut out = NcPolynomial::zero(p.degree());
    for (w, c) in p.terms() {
        let mut acc = NcPolynomial::from_terms(field, 0, [(Word::empty(), c.clone())]);
        for &l in w.letters() {
            acc = multiply(field, &acc, &images[l as usize]).expect("same field");
        }
        out = out.add(field, &acc);
    }
    NcPolynomial::from_terms(field, p.degree(), out.into_terms())
}

/// Remove generators that appear as single-letter terms of relations by
/// solving for them. Relations are scanned in order; within a relation the
/// largest such generator is eliminated.
pub fn eliminate_linear_relations(
    field: FieldSpec,
    gens: &GeneratorSet,
    rels: Vec<NcPolynomial>,
) -> Result<Elimination> {
    let n = gens.len();
    let mut images: Vec<NcPolynomial> =
        (0..n).map(|g| NcPolynomial::monomial(gens, Word::letter(g), field.one())).collect();
    let mut alive = vec![true; n];
    let mut rels = rels;

    loop {
        let pick = rels.iter().enumerate().find_map(|(ri, r)| {
            r.terms().keys().filter(|w| w.len() == 1).map(|w| w.letters()[0]).max().map(|g| (ri, g))
        });
        let Some((ri, g)) = pick else { break };
        let rel = rels.remove(ri);
        let g = g as usize;
        let c = rel.terms()[&Word::letter(g)].clone();
        // g = -(rel - c·g) / c
        let rest = rel.axpy(field, &field.neg(&c), &NcPolynomial::monomial(gens, Word::letter(g), field.one()));
        let expr = rest.scale(field, &field.neg(&field.inv(&c)));
        let expr = NcPolynomial::from_terms(field, gens.degree_of(g), expr.into_terms());
        let mut step: Vec<NcPolynomial> =
            (0..n).map(|h| NcPolynomial::monomial(gens, Word::letter(h), field.one())).collect();
        step[g] = expr;
        for img in images.iter_mut() {
            *img = substitute_letters(field, &step, img);
        }
        for r in rels.iter_mut() {
            *r = substitute_letters(field, &step, r);
        }
        rels.retain(|r| !r.is_zero());
        alive[g] = false;
    }

    let mut new_index = vec![usize::MAX; n];
    let mut names = Vec::new();
    let mut degrees = Vec::new();
    for g in 0..n {
        if alive[g] {
            new_index[g] = names.len();
            names.push(gens.names()[g].clone());
            degrees.push(gens.degree_of(g));
        }
    }
    let new_gens = GeneratorSet::new(names, degrees)?;
    let reindex = |p: &NcPolynomial| -> NcPolynomial {
        NcPolynomial::from_terms(
            field,
            p.degree(),
            p.terms().iter().map(|(w, c)| {
                let letters = w.letters().iter().map(|&l| new_index[l as usize] as u8).collect();
                (Word::from_letters(letters), c.clone())
            }),
        )
    };
    Ok(Elimination {
        rels: rels.iter().map(&reindex).collect(),
        images: images.iter().map(&reindex).collect(),
        gens: new_gens,
    })
}
