//! Quasi-coherent families of right ideals: degreewise verification of the
//! witness axioms, the resulting bounds on `m_i(I)`, rational forms of
//! `I(z) / A(z)` and, for Koszul families, Poincaré series.
//!
//! A witness `(I, J1, J2, t, x)` asserts `I / J1 ≅ (A / J2)[-t]` via
//! `a ↦ x·a`, which unfolds into four linear conditions per degree `s`:
//! `J1 ⊊ I`, `m_0(J1) ≤ m_0(I)`, `I_s = (J1)_s + x·A_{s-t}` and
//! `{a ∈ A_{s-t} : x·a ∈ (J1)_s} = (J2)_{s-t}`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{Echelon, SparseVec};
use crate::freealg::{NcPolynomial, Presentation};
use crate::groebner::QuotientAlgebra;
use crate::resolution::{MValue, Resolution, Target};
use crate::series::{fit_rational_general, RationalSeriesForm, TruncatedSeries};

/// A right ideal `I = Σ p·A` of the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSpec {
    pub name: String,
    pub generators: Vec<NcPolynomial>,
}

/// `I / J1 ≅ (A / J2)[-t]` through `a ↦ x·a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTriple {
    pub ideal: String,
    pub j1: String,
    pub j2: String,
    pub t: u32,
    pub x: NcPolynomial,
}

/// Graded pieces of one ideal through the truncation.
struct IdealData {
    spec: IdealSpec,
    comps: Vec<Echelon>,
    m0: Option<u32>,
    minimal: Vec<NcPolynomial>,
}

impl IdealData {
    fn new(alg: &QuotientAlgebra, spec: &IdealSpec, n: u32) -> Result<Self> {
        let comps = alg.right_ideal(&spec.generators, n)?;
        let field = alg.field();
        let mut m0 = None;
        let mut minimal = Vec::new();
        for d in 0..=n {
            // decomposables I_{<d}·A in degree d
            let mut dec = Echelon::new(field);
            for x in 0..alg.gens().len() {
                let xd = alg.gens().degree_of(x);
                if xd <= d {
                    for row in comps[(d - xd) as usize].rows() {
                        dec.insert(&alg.mul_letter(d - xd, row, x));
                    }
                }
            }
            if dec.rank() < comps[d as usize].rank() {
                m0 = Some(d);
                for row in comps[d as usize].reduced_basis() {
                    if dec.insert(&row) {
                        minimal.push(alg.to_poly(d, &row));
                    }
                }
            }
        }
        Ok(IdealData { spec: spec.clone(), comps, m0, minimal })
    }

    fn dims(&self) -> Vec<usize> {
        self.comps.iter().map(Echelon::rank).collect()
    }

    fn is_zero(&self) -> bool {
        self.comps.iter().all(|e| e.rank() == 0)
    }
}

fn same_space(a: &Echelon, b: &Echelon) -> bool {
    a.rank() == b.rank() && b.rows().iter().all(|r| a.contains(r))
}

/// Outcome of one witness: which axioms held, and the first failure of each.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub axioms: [bool; 4],
    pub failures: Vec<String>,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|&a| a)
    }
}

fn check_witness(
    alg: &QuotientAlgebra,
    n: u32,
    i: &IdealData,
    j1: &IdealData,
    j2: &IdealData,
    t: u32,
    x: &NcPolynomial,
) -> WitnessCheck {
    let field = alg.field();
    let mut out = WitnessCheck { axioms: [true; 4], failures: Vec::new() };
    let mut fail = |axiom: usize, msg: String| {
        if out.axioms[axiom - 1] {
            out.axioms[axiom - 1] = false;
            out.failures.push(format!("axiom {axiom}: {msg}"));
        }
    };

    // 1: J1 ⊊ I
    for s in 0..=n {
        if !j1.comps[s as usize].rows().iter().all(|r| i.comps[s as usize].contains(r)) {
            fail(1, format!("{} is not contained in {} in degree {s}", j1.spec.name, i.spec.name));
        }
    }
    if (0..=n).all(|s| j1.comps[s as usize].rank() == i.comps[s as usize].rank()) {
        fail(1, format!("{} equals {} through degree {n}", j1.spec.name, i.spec.name));
    }
    // 2: m_0(J1) ≤ m_0(I)
    if j1.m0 > i.m0 {
        fail(2, format!("m_0({}) = {:?} exceeds m_0({}) = {:?}", j1.spec.name, j1.m0, i.spec.name, i.m0));
    }
    if x.degree() != t || t == 0 {
        fail(3, format!("x has degree {} but t = {t}", x.degree()));
        fail(4, "not checked: x has the wrong degree".into());
        return out;
    }

    // x·w for normal words w, by degree of w
    let mut xw: Vec<Vec<SparseVec>> = vec![vec![alg.nf_poly(x)]];
    for e in 1..=n.saturating_sub(t) {
        let row = alg
            .normal_words(e)
            .iter()
            .map(|w| {
                let (&l, prefix) = w.letters().split_last().expect("positive degree");
                let pe = e - alg.gens().degree_of(l as usize);
                let pi = alg.index_of(&crate::freealg::Word::from_letters(prefix.to_vec())).expect("normal prefix");
                alg.mul_letter(t + pe, &xw[pe as usize][pi], l as usize)
            })
            .collect();
        xw.push(row);
    }

    for s in 0..=n {
        let js = &j1.comps[s as usize];
        // 3: I_s = (J1)_s + x·A_{s-t}
        let mut sum = js.clone();
        if s >= t {
            for v in &xw[(s - t) as usize] {
                sum.insert(v);
            }
        }
        if !same_space(&i.comps[s as usize], &sum) {
            fail(3, format!("{} ≠ {} + x·A in degree {s}", i.spec.name, j1.spec.name));
        }
        // 4: (J1 : x) = J2
        if s >= t {
            let mut ech = Echelon::with_tracking(field);
            for r in js.rows() {
                ech.insert(r);
            }
            let q = js.rank();
            for v in &xw[(s - t) as usize] {
                ech.insert(v);
            }
            let mut colon = Echelon::new(field);
            for rel in ech.take_relations() {
                colon.insert(&rel.remap(|k| k.checked_sub(q)));
            }
            if !same_space(&j2.comps[(s - t) as usize], &colon) {
                fail(4, format!("({} : x) ≠ {} in degree {}", j1.spec.name, j2.spec.name, s - t));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealReport {
    pub name: String,
    /// Computed top degree of a minimal generator; `None` for the zero ideal.
    pub m0: Option<u32>,
    pub dims: Vec<usize>,
    /// The kept witness as `I J1 J2 t x`.
    pub witness: Option<String>,
    /// Whether the kept witness came from the search rather than the file.
    pub searched: bool,
    pub axioms: [bool; 4],
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub truncation: u32,
    pub verified: bool,
    pub family_degree: u32,
    /// Sorted by name.
    pub ideals: Vec<IdealReport>,
    /// Number of distinct truncated `I(z)` over the family.
    pub distinct_series: usize,
}

/// A family together with its computed data, input to the bound, series
/// and Poincaré computations.
pub struct Family {
    alg: QuotientAlgebra,
    n: u32,
    data: Vec<IdealData>,
    /// Kept witness per ideal (index into `witnesses`).
    kept: Vec<Option<usize>>,
    witnesses: Vec<WitnessTriple>,
    report: FamilyReport,
}

impl Family {
    pub fn report(&self) -> &FamilyReport {
        &self.report
    }

    pub fn truncation(&self) -> u32 {
        self.n
    }

    fn position(&self, name: &str) -> usize {
        self.data.iter().position(|d| d.spec.name == name).expect("validated name")
    }

    /// Minimized generators of each ideal, by ideal name order of the input.
    pub fn minimal_generators(&self, name: &str) -> &[NcPolynomial] {
        &self.data[self.position(name)].minimal
    }
}

pub fn verify_family(a: &Presentation, ideals: &[IdealSpec], witnesses: &[WitnessTriple], n: u32) -> Result<Family> {
    verify_family_with(a, ideals, witnesses, n, false)
}

/// As [`verify_family`]; with `search`, ideals lacking a valid witness are
/// tried against every `(J1, J2)` pair of the family with `x` a minimal
/// generator. Exponential, meant for tiny inputs.
pub fn verify_family_with(
    a: &Presentation,
    ideals: &[IdealSpec],
    witnesses: &[WitnessTriple],
    n: u32,
    search: bool,
) -> Result<Family> {
    let alg = QuotientAlgebra::from_presentation(a, n)?;
    let data: Vec<IdealData> = ideals.iter().map(|s| IdealData::new(&alg, s, n)).collect::<Result<_>>()?;
    if !data.iter().any(IdealData::is_zero) {
        return Err(Error::Input("the family must contain the zero ideal".into()));
    }
    let pos = |name: &str| {
        data.iter()
            .position(|d| d.spec.name == name)
            .ok_or_else(|| Error::Input(format!("witness names unknown ideal `{name}`")))
    };
    let mut witnesses = witnesses.to_vec();
    let mut kept = vec![None; data.len()];
    let mut checks: Vec<Option<WitnessCheck>> = vec![None; data.len()];
    let mut searched = vec![false; data.len()];
    for (k, d) in data.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let mine: Vec<usize> = (0..witnesses.len()).filter(|&w| witnesses[w].ideal == d.spec.name).collect();
        if mine.is_empty() && !search {
            return Err(Error::Input(format!("ideal `{}` has no witness", d.spec.name)));
        }
        for w in mine {
            let wt = &witnesses[w];
            let c = check_witness(&alg, n, d, &data[pos(&wt.j1)?], &data[pos(&wt.j2)?], wt.t, &wt.x);
            let ok = c.passed();
            if checks[k].is_none() || ok {
                checks[k] = Some(c);
            }
            if ok {
                kept[k] = Some(w);
                break;
            }
        }
        if kept[k].is_none() && search {
            'found: for j1 in 0..data.len() {
                for j2 in 0..data.len() {
                    if j1 == k {
                        continue;
                    }
                    for x in &d.minimal {
                        let c = check_witness(&alg, n, d, &data[j1], &data[j2], x.degree(), x);
                        if c.passed() {
                            witnesses.push(WitnessTriple {
                                ideal: d.spec.name.clone(),
                                j1: data[j1].spec.name.clone(),
                                j2: data[j2].spec.name.clone(),
                                t: x.degree(),
                                x: x.clone(),
                            });
                            kept[k] = Some(witnesses.len() - 1);
                            checks[k] = Some(c);
                            searched[k] = true;
                            break 'found;
                        }
                    }
                }
            }
            if checks[k].is_none() {
                checks[k] =
                    Some(WitnessCheck { axioms: [false; 4], failures: vec!["no witness found by search".into()] });
            }
        }
    }

    let field = alg.field();
    let mut reports: Vec<IdealReport> = data
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let c = checks[k].clone().unwrap_or(WitnessCheck { axioms: [true; 4], failures: Vec::new() });
            IdealReport {
                name: d.spec.name.clone(),
                m0: d.m0,
                dims: d.dims(),
                witness: kept[k].map(|w| {
                    let wt = &witnesses[w];
                    format!("{} {} {} {} {}", wt.ideal, wt.j1, wt.j2, wt.t, wt.x.format(field, alg.gens()))
                }),
                searched: searched[k],
                axioms: c.axioms,
                failures: c.failures,
            }
        })
        .collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    let verified = data.iter().enumerate().all(|(k, d)| d.is_zero() || kept[k].is_some());
    let family_degree = data.iter().filter_map(|d| d.m0).max().unwrap_or(0);
    let mut series: Vec<Vec<usize>> = data.iter().map(IdealData::dims).collect();
    series.sort();
    series.dedup();
    let report =
        FamilyReport { truncation: n, verified, family_degree, ideals: reports, distinct_series: series.len() };
    Ok(Family { alg, n, data, kept, witnesses, report })
}

fn require_verified(f: &Family) -> Result<()> {
    if f.report.verified {
        Ok(())
    } else {
        Err(Error::Verification("the family did not pass verification".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealBounds {
    pub name: String,
    pub tor_dims: Vec<Vec<usize>>,
    pub m: Vec<MValue>,
    /// `m_0(I) + i·d` for each `i`.
    pub bound: Vec<u32>,
}

fn ideal_profile(f: &Family, k: usize, imax: usize) -> Result<(Vec<Vec<usize>>, Vec<MValue>)> {
    let d = &f.data[k];
    let r = Resolution::compute(&f.alg, Target::Ideal(&d.minimal), imax, f.n)?;
    let top = d.m0.unwrap_or(0);
    let p = r.profile(&[Some(top)]);
    Ok((p.tor_dims, p.m))
}

/// `m_i(I)` for `i ≤ imax`, checked against `m_i(I) ≤ m_0(I) + i·d` and the
/// inductive bound `m_i(I) ≤ max{m_i(J1), m_{i-1}(J2) + t}` of the kept
/// witness.
pub fn family_mi_bounds(f: &Family, imax: usize) -> Result<Vec<IdealBounds>> {
    require_verified(f)?;
    let fd = f.report.family_degree;
    let profiles: Vec<(Vec<Vec<usize>>, Vec<MValue>)> =
        (0..f.data.len()).map(|k| ideal_profile(f, k, imax)).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(f.data.len());
    for (k, d) in f.data.iter().enumerate() {
        let m0 = d.m0.unwrap_or(0);
        let bound: Vec<u32> = (0..=imax as u32).map(|i| m0 + i * fd).collect();
        let m = &profiles[k].1;
        for i in 0..=imax {
            if m[i].value.is_some_and(|v| v > bound[i]) {
                return Err(Error::Verification(format!(
                    "m_{i}({}) = {} exceeds m_0 + {i}·d = {}",
                    d.spec.name, m[i], bound[i]
                )));
            }
        }
        if let Some(w) = f.kept[k] {
            let wt = &f.witnesses[w];
            let j1 = &profiles[f.position(&wt.j1)].1;
            let j2 = &profiles[f.position(&wt.j2)].1;
            for i in 0..=imax {
                let from_quotient = if i == 0 { Some(wt.t) } else { j2[i - 1].value.map(|v| v + wt.t) };
                let b = j1[i].value.max(from_quotient);
                if m[i].value > b {
                    return Err(Error::Verification(format!(
                        "m_{i}({}) = {} exceeds max(m_{i}({}), m_{}({}) + {})",
                        d.spec.name,
                        m[i],
                        wt.j1,
                        i as i64 - 1,
                        wt.j2,
                        wt.t
                    )));
                }
            }
        }
        out.push(IdealBounds { name: d.spec.name.clone(), tor_dims: profiles[k].0.clone(), m: m.clone(), bound });
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealSeriesForm {
    pub name: String,
    /// `I(z) / A(z) = p(z) / q(z)`.
    pub form: RationalSeriesForm,
}

fn ratio_series(f: &Family, k: usize) -> Result<TruncatedSeries> {
    let i = TruncatedSeries::from_usize(&f.data[k].dims());
    let a = TruncatedSeries::from_usize(&f.alg.dims());
    Ok(i.mul(&a.invert()?))
}

fn fit_ratio(f: &Family, k: usize) -> Result<RationalSeriesForm> {
    let s = ratio_series(f, k)?;
    let n = f.n as usize;
    for total in 0..n {
        for degq in 0..=total {
            if let Some(form) = fit_rational_general(&s, total - degq, degq) {
                return Ok(form);
            }
        }
    }
    Err(Error::Verification(format!(
        "no rational form p/q with deg p + deg q < {n} fits I(z)/A(z) for `{}`",
        f.data[k].spec.name
    )))
}

/// `I(z) / A(z) = p(z) / q(z)` for each ideal, smallest total degree first.
pub fn family_hilbert_rational(f: &Family) -> Result<Vec<IdealSeriesForm>> {
    require_verified(f)?;
    let mut out: Vec<IdealSeriesForm> = (0..f.data.len())
        .map(|k| Ok(IdealSeriesForm { name: f.data[k].spec.name.clone(), form: fit_ratio(f, k)? }))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoincareReport {
    pub name: String,
    /// `P_I(z) = Σ dim Tor_i(I, k) z^i`.
    pub poincare: RationalSeriesForm,
    pub tor_totals: Vec<usize>,
}

fn alternate(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect()
}

/// For a Koszul family (`d = 1`): `P_I(z) = p̃(-z) / q(-z)` where
/// `p = z^{m_0} p̃`, cross-checked against the resolution: `Tor_i(I, k)`
/// must sit in degree `m_0(I) + i` alone, with total dimension the
/// coefficient of `z^i` in `P_I`.
pub fn koszul_poincare(f: &Family, imax: usize) -> Result<Vec<PoincareReport>> {
    require_verified(f)?;
    if f.report.family_degree > 1 {
        return Err(Error::Input(format!(
            "Poincaré series need a Koszul family; the family degree is {}",
            f.report.family_degree
        )));
    }
    let mut out = Vec::with_capacity(f.data.len());
    for (k, d) in f.data.iter().enumerate() {
        let form = fit_ratio(f, k)?;
        let (tor, _) = ideal_profile(f, k, imax)?;
        let m0 = d.m0.unwrap_or(0) as usize;
        let p = &form.numerator;
        if p.iter().take(m0).any(|c| !c.is_zero()) {
            return Err(Error::Verification(format!("p(z) for `{}` is not divisible by z^{m0}", d.spec.name)));
        }
        let shifted: Vec<BigInt> = if p.len() > m0 { p[m0..].to_vec() } else { vec![BigInt::zero()] };
        let poincare = RationalSeriesForm::new(alternate(&shifted), alternate(&form.denominator));
        for (i, row) in tor.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c > 0 && (d.m0.is_none() || j != m0 + i) {
                    return Err(Error::Verification(format!(
                        "Tor_{i}({}, k) has a class in degree {j}, expected only {}",
                        d.spec.name,
                        m0 + i
                    )));
                }
            }
        }
        let expansion = poincare
            .expand(imax)
            .ok_or_else(|| Error::Verification(format!("P_I for `{}` has non-integral coefficients", d.spec.name)))?;
        let totals: Vec<usize> = tor.iter().map(|r| r.iter().sum()).collect();
        for (i, &t) in totals.iter().enumerate() {
            if m0 + i > f.n as usize {
                break;
            }
            let c = expansion.coeff(i);
            if c.is_negative() || *c != BigInt::from(t) {
                return Err(Error::Verification(format!("dim Tor_{i}({}, k) = {t} but P_I gives {c}", d.spec.name)));
            }
        }
        // P_I(-z)·z^{m0}·A(z) = I(z)
        let a = TruncatedSeries::from_usize(&f.alg.dims());
        let back = form.expand(f.n as usize).map(|r| r.mul(&a));
        if back != Some(TruncatedSeries::from_usize(&d.dims())) {
            return Err(Error::Verification(format!("P_I(-z)·A(z) does not reproduce I(z) for `{}`", d.spec.name)));
        }
        out.push(PoincareReport { name: d.spec.name.clone(), poincare, tor_totals: totals });
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// Ratio `I(z) / A(z)` used by the fits, exposed for reporting.
pub fn hilbert_ratio(f: &Family, name: &str) -> Result<TruncatedSeries> {
    ratio_series(f, f.position(name))
}
