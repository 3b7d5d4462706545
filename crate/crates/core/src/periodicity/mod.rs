//! Shifted modules `M^n = (⊕_{t ≥ n} M_t)[n]`, their canonical finite
//! presentations, and certified periodicity of the Hilbert function.
//!
//! `M^n` is presented as `F / W·A` with `F = V ⊗ A`, `V = M_n ⊕ … ⊕ M_{n+g}`
//! on the canonical normal bases, and `W_t = ker(F_t → M_{n+t})` for
//! `t ≤ rel_bound`. Both pieces are canonical, so two shifts with the same
//! dimension vector and the same reduced bases of every `W_t` are isomorphic,
//! and `M^i ≅ M^j` forces `dim M_s = dim M_{s + j - i}` for `s ≥ i`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{Echelon, FieldSpec, SparseVec};
use crate::freealg::{ModElement, ModulePresentation};
use crate::groebner::{growth_estimate, GradedModule, GrowthEstimate, GrowthKind, QuotientAlgebra};
use crate::resolution::{algebra_homology, minimal_resolution};
use crate::series::{RationalSeriesForm, TruncatedSeries};

/// `(g, rel_bound)`: `V` spans shift degrees `0..=g` and relations are taken
/// through degree `rel_bound = max(r, g)`, where `g` bounds `m_0(M)` and
/// `m_1(A)`, and `r` bounds `m_1(M)` and `m_2(A)`.
pub fn shift_bounds(m: &ModulePresentation) -> (u32, u32) {
    let a = m.base();
    let g = m.max_generator_degree().max(a.gens().max_degree());
    let r = m.max_relation_degree().max(a.max_relation_degree());
    (g, r.max(g))
}

/// Canonical data of `M^n`: dimensions of `V` by shift degree and the
/// reduced basis of `W_t` for `t = 1..=rel_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub dim_vector: Vec<usize>,
    pub relation_bases: Vec<Vec<SparseVec>>,
}

impl Fingerprint {
    pub fn relation_ranks(&self) -> Vec<usize> {
        self.relation_bases.iter().map(Vec::len).collect()
    }

    pub fn is_zero_module(&self) -> bool {
        self.dim_vector.iter().all(|&d| d == 0)
    }
}

impl Serialize for Fingerprint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Fingerprint", 2)?;
        st.serialize_field("dim_vector", &self.dim_vector)?;
        st.serialize_field("relation_ranks", &self.relation_ranks())?;
        st.end()
    }
}

#[derive(Clone, Debug)]
pub struct ShiftedModule {
    pub n: u32,
    pub gen_bound: u32,
    pub rel_bound: u32,
    pub presentation: ModulePresentation,
    pub fingerprint: Fingerprint,
}

/// Module data through degree `N`, shared by all shifts.
struct ShiftContext<'a> {
    alg: &'a QuotientAlgebra,
    gm: GradedModule,
    source: &'a ModulePresentation,
    g: u32,
    rel_bound: u32,
}

impl<'a> ShiftContext<'a> {
    fn new(alg: &'a QuotientAlgebra, m: &'a ModulePresentation, n: u32) -> Result<Self> {
        let (g, rel_bound) = shift_bounds(m);
        Ok(ShiftContext { alg, gm: GradedModule::new(alg, m, n)?, source: m, g, rel_bound })
    }

    fn field(&self) -> FieldSpec {
        self.alg.field()
    }

    fn shift(&mut self, n: u32) -> Result<ShiftedModule> {
        let top = n + self.rel_bound;
        if top > self.gm.max_degree() {
            return Err(Error::TruncationTooSmall {
                needed: top,
                have: self.gm.max_degree(),
                context: format!("shift {n} needs relations through degree {}", self.rel_bound),
            });
        }
        let alg = self.alg;
        let field = self.field();
        let (g, rb) = (self.g, self.rel_bound);
        let dim_vector: Vec<usize> = (0..=g).map(|s| self.gm.dim(n + s)).collect();

        // images[s][b][e][wi] = (basis element b of M_{n+s}) · w, w the wi-th
        // normal word of degree e
        let mut images: Vec<Vec<Vec<Vec<SparseVec>>>> = Vec::with_capacity(g as usize + 1);
        for s in 0..=g {
            let mut per_b = Vec::with_capacity(dim_vector[s as usize]);
            for b in 0..dim_vector[s as usize] {
                let mut by_e: Vec<Vec<SparseVec>> = vec![vec![SparseVec::unit(field, b)]];
                for e in 1..=rb.saturating_sub(s) {
                    let mut row = Vec::with_capacity(alg.dim(e));
                    for w in alg.normal_words(e) {
                        let (&x, prefix) = w.letters().split_last().expect("positive degree");
                        let x = x as usize;
                        let pe = e - alg.gens().degree_of(x);
                        let pw = crate::freealg::Word::from_letters(prefix.to_vec());
                        let pi = alg.index_of(&pw).expect("prefix of a normal word is normal");
                        let prev = by_e[pe as usize][pi].clone();
                        row.push(self.gm.act_letter(alg, n + s + pe, &prev, x));
                    }
                    by_e.push(row);
                }
                per_b.push(by_e);
            }
            images.push(per_b);
        }

        let mut gen_index = Vec::new();
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for s in 0..=g {
            let mut idx = Vec::new();
            for b in 0..dim_vector[s as usize] {
                idx.push(names.len());
                names.push(format!("v{s}_{b}"));
                degrees.push(s);
            }
            gen_index.push(idx);
        }

        let mut relation_bases = Vec::with_capacity(rb as usize);
        let mut mrels = Vec::new();
        for t in 1..=rb {
            // columns (s, b, wi) in that order
            let mut columns: Vec<(u32, usize, usize)> = Vec::new();
            let mut ech = Echelon::with_tracking(field);
            for s in 0..=g.min(t) {
                for (b, per_degree) in images[s as usize].iter().enumerate().take(dim_vector[s as usize]) {
                    for (wi, img) in per_degree[(t - s) as usize].iter().enumerate() {
                        columns.push((s, b, wi));
                        ech.insert(img);
                    }
                }
            }
            let mut w = Echelon::new(field);
            for rel in ech.take_relations() {
                w.insert(&rel);
            }
            let basis = w.reduced_basis();
            for v in &basis {
                let terms = v.entries().iter().map(|(c, coef)| {
                    let (s, b, wi) = columns[*c];
                    ((gen_index[s as usize][b], alg.normal_words(t - s)[wi].clone()), coef.clone())
                });
                mrels.push(ModElement::from_terms(field, t, terms));
            }
            relation_bases.push(basis);
        }

        let presentation = ModulePresentation::new(
            format!("{}^{n}", self.source.name()),
            self.source.base().clone(),
            names,
            degrees,
            mrels,
        )?;
        Ok(ShiftedModule {
            n,
            gen_bound: g,
            rel_bound: rb,
            presentation,
            fingerprint: Fingerprint { dim_vector, relation_bases },
        })
    }
}

fn require(needed: u32, have: u32, context: &str) -> Result<()> {
    if have < needed {
        return Err(Error::TruncationTooSmall { needed, have, context: context.into() });
    }
    Ok(())
}

/// Presentation and fingerprint of `M^n`, using module data through `N`.
pub fn shift_module(m: &ModulePresentation, n: u32, big_n: u32) -> Result<ShiftedModule> {
    let (_, rb) = shift_bounds(m);
    require(n + rb, big_n, "shift plus relation bound")?;
    let alg = QuotientAlgebra::from_presentation(m.base(), big_n)?;
    ShiftContext::new(&alg, m, big_n)?.shift(n)
}

pub fn fingerprint(s: &ShiftedModule) -> &Fingerprint {
    &s.fingerprint
}

/// `M^i ≅ M^j`, hence `dim M_s = dim M_{s+d}` for all `s ≥ i`, `d = j - i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodCertificate {
    pub i: u32,
    pub j: u32,
    pub period: u32,
    pub preperiod: u32,
    pub rational_form: RationalSeriesForm,
    pub fingerprint: Fingerprint,
}

impl PeriodCertificate {
    /// Check `dim M_s = dim M_{s+d}` for every `i ≤ s ≤ len - 1 - d`.
    pub fn holds_on(&self, dims: &[usize]) -> bool {
        let d = self.period as usize;
        (self.i as usize..dims.len().saturating_sub(d)).all(|s| dims[s] == dims[s + d])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PeriodOutcome {
    Certified(PeriodCertificate),
    NotFound { max_shift: u32, note: Option<String> },
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodReport {
    pub outcome: PeriodOutcome,
    pub growth: GrowthEstimate,
    pub warning: Option<String>,
    pub truncation: u32,
    pub dims: Vec<usize>,
}

impl fmt::Display for PeriodReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(w) = &self.warning {
            writeln!(f, "warning: {w}")?;
        }
        match &self.outcome {
            PeriodOutcome::Certified(c) => {
                writeln!(f, "certified: M^{} ≅ M^{}", c.i, c.j)?;
                writeln!(f, "period {} from degree {}", c.period, c.preperiod)?;
                write!(f, "M(z) = {}", c.rational_form)
            }
            PeriodOutcome::NotFound { max_shift, note } => {
                write!(f, "not found: no fingerprint collision among shifts 0..={max_shift}")?;
                if let Some(n) = note {
                    write!(f, " ({n})")?;
                }
                Ok(())
            }
        }
    }
}

/// `p(z) / (1 - z^d)` from dimensions periodic from `i` with period `d`, or
/// the polynomial `c_0 + … + c_{i-1} z^{i-1}` when the tail vanishes.
fn periodic_form(dims: &[usize], i: usize, d: usize) -> RationalSeriesForm {
    let c: Vec<BigInt> = dims.iter().map(|&v| BigInt::from(v)).collect();
    if c[i..i + d].iter().all(Zero::is_zero) {
        return RationalSeriesForm::new(c[..i.max(1)].to_vec(), vec![BigInt::one()]);
    }
    let num = (0..i + d).map(|k| if k >= d { &c[k] - &c[k - d] } else { c[k].clone() }).collect();
    let mut den = vec![BigInt::zero(); d + 1];
    den[0] = BigInt::one();
    den[d] = -BigInt::one();
    RationalSeriesForm::new(num, den)
}

/// Heuristic shift budget `4 · max dim · (r + g)`.
pub fn default_max_shift(m: &ModulePresentation, big_n: u32) -> Result<u32> {
    let (g, rb) = shift_bounds(m);
    let alg = QuotientAlgebra::from_presentation(m.base(), big_n)?;
    let gm = GradedModule::new(&alg, m, big_n)?;
    let top = gm.dims().into_iter().max().unwrap_or(0).max(1) as u32;
    Ok(4 * top * (rb + g).max(1))
}

/// Scan shifts `0..=S` for the first fingerprint collision.
pub fn certify_period(m: &ModulePresentation, max_shift: u32, big_n: u32) -> Result<PeriodReport> {
    let (_, rb) = shift_bounds(m);
    require(max_shift + rb, big_n, "largest shift plus relation bound")?;
    let alg = QuotientAlgebra::from_presentation(m.base(), big_n)?;
    let growth = growth_estimate(alg.groebner());
    let warning = match growth.kind {
        GrowthKind::FiniteDimensional | GrowthKind::Linear => None,
        kind => Some(format!("growth estimate is {kind}; periodicity is not expected")),
    };
    let mut ctx = ShiftContext::new(&alg, m, big_n)?;
    let dims = ctx.gm.dims();
    let mut seen: Vec<Fingerprint> = Vec::new();
    for n in 0..=max_shift {
        let fp = ctx.shift(n)?.fingerprint;
        if let Some(i) = seen.iter().position(|f| *f == fp) {
            let (i, j) = (i as u32, n);
            let d = (j - i) as usize;
            let form = periodic_form(&dims, i as usize, d);
            let series = TruncatedSeries::from_usize(&dims);
            if !form.reproduces(&series) {
                return Err(Error::Verification(format!(
                    "rational form {form} does not reproduce the dimensions through degree {big_n}"
                )));
            }
            let cert = PeriodCertificate { i, j, period: j - i, preperiod: i, rational_form: form, fingerprint: fp };
            if !cert.holds_on(&dims) {
                return Err(Error::Verification("certified period contradicts the dimensions".into()));
            }
            return Ok(PeriodReport {
                outcome: PeriodOutcome::Certified(cert),
                growth,
                warning,
                truncation: big_n,
                dims,
            });
        }
        seen.push(fp);
    }
    let note = (!alg.field().is_finite()).then(|| "no effective bound known over an infinite field".to_string());
    Ok(PeriodReport { outcome: PeriodOutcome::NotFound { max_shift, note }, growth, warning, truncation: big_n, dims })
}

/// Distinct truncated series among `M^0(z), …, M^S(z)`, each known through
/// degree `N - S`. Equality is only up to that truncation.
#[derive(Clone, Debug, Serialize)]
pub struct HilbertSeriesSet {
    pub truncation: u32,
    pub series: Vec<TruncatedSeries>,
    /// First shift realizing each series.
    pub first_shift: Vec<u32>,
}

pub fn hilbert_series_set(m: &ModulePresentation, max_shift: u32, big_n: u32) -> Result<HilbertSeriesSet> {
    require(max_shift, big_n, "largest shift")?;
    let alg = QuotientAlgebra::from_presentation(m.base(), big_n)?;
    let dims = GradedModule::new(&alg, m, big_n)?.dims();
    let len = (big_n - max_shift) as usize + 1;
    let mut series: Vec<TruncatedSeries> = Vec::new();
    let mut first_shift = Vec::new();
    for n in 0..=max_shift as usize {
        let s = TruncatedSeries::from_usize(&dims[n..n + len]);
        if !series.contains(&s) {
            series.push(s);
            first_shift.push(n as u32);
        }
    }
    Ok(HilbertSeriesSet { truncation: big_n - max_shift, series, first_shift })
}

/// Computed `m_0`, `m_1` of one shift against the a priori bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftBoundCheck {
    pub n: u32,
    pub m0: Option<u32>,
    pub m1: Option<u32>,
}

/// Generator and relation degrees of the shifts compared with
/// `max{m_0(M), m_1(A)}` and `max{m_1(M), m_2(A)}`. `None` stands for a
/// vanishing `Tor`, which sits below every degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftBoundReport {
    pub gen_bound: Option<u32>,
    pub rel_bound: Option<u32>,
    pub shifts: Vec<ShiftBoundCheck>,
}

impl ShiftBoundReport {
    /// `m_0(M^n) ≤ gen_bound` and `m_1(M^n) ≤ rel_bound` for every shift.
    pub fn holds(&self) -> bool {
        self.shifts.iter().all(|s| s.m0 <= self.gen_bound && s.m1 <= self.rel_bound)
    }

    /// The strict form `<` for every proper shift `n ≥ 1`; `M^0 = M` meets
    /// its own bound with equality.
    pub fn holds_strictly(&self) -> bool {
        let lt = |v: Option<u32>, b: Option<u32>| v.is_none() || v < b;
        self.shifts.iter().filter(|s| s.n >= 1).all(|s| lt(s.m0, self.gen_bound) && lt(s.m1, self.rel_bound))
    }
}

/// Resolve every shift `0..=S` to level 1 and compare with the bounds.
pub fn shift_bound_check(m: &ModulePresentation, max_shift: u32, big_n: u32) -> Result<ShiftBoundReport> {
    let (_, rb) = shift_bounds(m);
    require(max_shift + 2 * rb, big_n, "shift plus twice the relation bound")?;
    let own = minimal_resolution(m, 1, big_n)?;
    let alg_h = algebra_homology(m.base(), 2, big_n)?;
    let gen_bound = own.m[0].value.max(alg_h.m[1].value);
    let rel_bound = own.m[1].value.max(alg_h.m[2].value);
    let alg = QuotientAlgebra::from_presentation(m.base(), big_n)?;
    let mut ctx = ShiftContext::new(&alg, m, big_n)?;
    let mut shifts = Vec::new();
    for n in 0..=max_shift {
        let sh = ctx.shift(n)?;
        let prof = minimal_resolution(&sh.presentation, 1, big_n - n)?;
        shifts.push(ShiftBoundCheck { n, m0: prof.m[0].value, m1: prof.m[1].value });
    }
    Ok(ShiftBoundReport { gen_bound, rel_bound, shifts })
}
