//! Exhaustive enumeration of bounded presentations over a prime field and
//! the census of their truncated Hilbert series.
//!
//! A presentation is a homogeneous subspace of an ambient graded space, one
//! RREF subspace per degree, so the stream is indexed by a mixed-radix
//! counter. Workers take indices by stride and the merged census is sorted,
//! which keeps the output independent of the thread count.

use std::collections::BTreeMap;
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::FieldSpec;
use crate::freealg::{words_of_degree, GeneratorSet, ModElement, ModulePresentation, NcPolynomial, Presentation, Word};
use crate::groebner::{algebra_dims, module_dims, QuotientAlgebra};
use crate::resolution::algebra_homology;
use crate::series::{LexOrder, TruncatedSeries};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// `[n choose k]_q`, the number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u32) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Number of subspaces of `F_q^n`.
pub fn subspace_count(n: usize, q: u32) -> u128 {
    (0..=n).map(|k| gaussian_binomial(n, k, q)).sum()
}

/// Number of homogeneous subspaces of a graded space with the given
/// component dimensions; `None` on overflow.
pub fn homogeneous_subspace_count(dims: &[usize], q: u32) -> Option<u128> {
    dims.iter().try_fold(1u128, |acc, &d| acc.checked_mul(subspace_count(d, q)))
}

/// A subspace of `F_q^n` in reduced row echelon form (leftmost pivots).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    pub ambient: usize,
    pub rows: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// All subspaces of `F_q^n`, ordered by dimension, then pivot set, then
/// free entries.
pub fn all_subspaces(n: usize, q: u32) -> Vec<Subspace> {
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            // free slots: (row r, column c) with c > pivot_r and c not a pivot
            let slots: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| {
                    let pivots = &pivots;
                    (pivots[r] + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
                })
                .collect();
            let total = (q as u128).pow(slots.len() as u32);
            for code in 0..total {
                let mut rows = vec![vec![0u32; n]; k];
                for (r, &p) in pivots.iter().enumerate() {
                    rows[r][p] = 1;
                }
                let mut c = code;
                for &(r, col) in &slots {
                    rows[r][col] = (c % q as u128) as u32;
                    c /= q as u128;
                }
                out.push(Subspace { ambient: n, rows });
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The homogeneous subspaces of a graded space, addressable by index.
#[derive(Clone, Debug)]
pub struct HomogeneousSubspaces {
    per_degree: Vec<Vec<Subspace>>,
    len: u128,
}

impl HomogeneousSubspaces {
    pub fn len(&self) -> u128 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Mixed-radix decoding, the first degree varying fastest.
    pub fn get(&self, mut index: u128) -> Vec<&Subspace> {
        self.per_degree
            .iter()
            .map(|choices| {
                let r = choices.len() as u128;
                let s = &choices[(index % r) as usize];
                index /= r;
                s
            })
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<&Subspace>> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

fn prime_of(field: FieldSpec) -> Result<u32> {
    field.order().ok_or_else(|| Error::Input("enumeration needs a finite field".into()))
}

/// Every homogeneous subspace of `⊕ F_q^{dims[d]}` exactly once.
pub fn enumerate_subspaces(ambient_dims: &[usize], field: FieldSpec, budget: u128) -> Result<HomogeneousSubspaces> {
    let q = prime_of(field)?;
    let count = homogeneous_subspace_count(ambient_dims, q).unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let per_degree = ambient_dims.iter().map(|&d| all_subspaces(d, q)).collect();
    Ok(HomogeneousSubspaces { per_degree, len: count })
}

/// Module part of the configuration: generator degrees and the top
/// relation degree; relations live in degrees above the lowest generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleBounds {
    pub gen_degrees: Vec<u32>,
    pub max_rel_degree: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationConfig {
    #[serde(serialize_with = "ser_field")]
    pub field: FieldSpec,
    pub gen_degrees: Vec<u32>,
    /// Relations in degrees `2..=max_rel_degree` (single letters excluded).
    pub max_rel_degree: u32,
    /// Keep only algebras with `m_3(A) ≤ c` at this truncation.
    pub m3_filter: Option<u32>,
    pub truncation: u32,
    pub budget: u128,
    pub threads: usize,
    pub module: Option<ModuleBounds>,
}

fn ser_field<S: serde::Serializer>(f: &FieldSpec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

impl EnumerationConfig {
    pub fn new(field: FieldSpec, gen_degrees: Vec<u32>, max_rel_degree: u32, truncation: u32) -> Self {
        EnumerationConfig {
            field,
            gen_degrees,
            max_rel_degree,
            m3_filter: None,
            truncation,
            budget: DEFAULT_BUDGET,
            threads: 1,
            module: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub series: TruncatedSeries,
    pub count: u128,
    /// Relations of the lowest-index presentation with this series.
    pub sample_relations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesCensus {
    pub truncation: u32,
    /// Presentations enumerated.
    pub enumerated: u128,
    /// Presentations dropped by the `m_3` filter.
    pub filtered_out: u128,
    /// Strictly descending in lex order.
    pub entries: Vec<CensusEntry>,
}

impl SeriesCensus {
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }
}

/// Census accumulator: series → (count, lowest index, sample).
type Tally = BTreeMap<TruncatedSeries, (u128, u128, Vec<String>)>;

fn merge(into: &mut Tally, from: Tally) {
    for (s, (c, i, sample)) in from {
        match into.get_mut(&s) {
            Some(e) => {
                e.0 += c;
                if i < e.1 {
                    e.1 = i;
                    e.2 = sample;
                }
            }
            None => {
                into.insert(s, (c, i, sample));
            }
        }
    }
}

/// Run `job` on indices `0..len` split by stride over `threads` workers.
/// `job` returns `None` for a filtered presentation.
fn run_strided<F>(len: u128, threads: usize, job: F) -> Result<(Tally, u128)>
where
    F: Fn(u128) -> Result<Option<(TruncatedSeries, Vec<String>)>> + Sync,
{
    let threads = threads.max(1);
    let results: Mutex<Vec<Result<(Tally, u128)>>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for w in 0..threads {
            let job = &job;
            let results = &results;
            scope.spawn(move || {
                let run = || -> Result<(Tally, u128)> {
                    let mut tally = Tally::new();
                    let mut dropped = 0;
                    let mut i = w as u128;
                    while i < len {
                        match job(i)? {
                            Some((s, sample)) => {
                                let e = tally.entry(s).or_insert((0, i, sample));
                                e.0 += 1;
                            }
                            None => dropped += 1,
                        }
                        i += threads as u128;
                    }
                    Ok((tally, dropped))
                };
                let r = run();
                results.lock().expect("worker panicked").push(r);
            });
        }
    });
    let mut total = Tally::new();
    let mut dropped = 0;
    for r in results.into_inner().expect("worker panicked") {
        let (t, d) = r?;
        merge(&mut total, t);
        dropped += d;
    }
    Ok((total, dropped))
}

fn into_census(tally: Tally, truncation: u32, enumerated: u128, filtered_out: u128) -> SeriesCensus {
    let entries = tally
        .into_iter()
        .rev()
        .map(|(series, (count, _, sample_relations))| CensusEntry { series, count, sample_relations })
        .collect();
    SeriesCensus { truncation, enumerated, filtered_out, entries }
}

/// Relation words of degree `d`: words of at least two letters.
fn relation_words(gens: &GeneratorSet, d: u32) -> Vec<Word> {
    words_of_degree(gens, d).into_iter().filter(|w| w.len() >= 2).collect()
}

struct AlgebraSpace {
    gens: GeneratorSet,
    degrees: Vec<u32>,
    words: Vec<Vec<Word>>,
    subspaces: HomogeneousSubspaces,
}

impl AlgebraSpace {
    fn new(cfg: &EnumerationConfig, budget: u128) -> Result<Self> {
        let gens = GeneratorSet::anonymous(&cfg.gen_degrees)?;
        let degrees: Vec<u32> = (2..=cfg.max_rel_degree).collect();
        let words: Vec<Vec<Word>> = degrees.iter().map(|&d| relation_words(&gens, d)).collect();
        let dims: Vec<usize> = words.iter().map(Vec::len).collect();
        let subspaces = enumerate_subspaces(&dims, cfg.field, budget)?;
        Ok(AlgebraSpace { gens, degrees, words, subspaces })
    }

    fn presentation(&self, field: FieldSpec, index: u128) -> Result<(Presentation, Vec<String>)> {
        let mut rels = Vec::new();
        for (k, s) in self.subspaces.get(index).into_iter().enumerate() {
            for row in &s.rows {
                let terms = row
                    .iter()
                    .zip(&self.words[k])
                    .filter(|(c, _)| **c != 0)
                    .map(|(c, w)| (w.clone(), field.from_i64(*c as i64)));
                rels.push(NcPolynomial::from_terms(field, self.degrees[k], terms));
            }
        }
        let sample = rels.iter().map(|r| r.format(field, &self.gens)).collect();
        Ok((Presentation::new(field, self.gens.clone(), rels)?, sample))
    }
}

fn passes_m3(p: &Presentation, cfg: &EnumerationConfig) -> Result<bool> {
    let Some(c) = cfg.m3_filter else { return Ok(true) };
    let h = algebra_homology(p, 3, cfg.truncation)?;
    Ok(h.m[3].value.is_none_or(|v| v <= c))
}

fn check_m3_truncation(cfg: &EnumerationConfig) -> Result<()> {
    if let Some(c) = cfg.m3_filter {
        if cfg.truncation <= c {
            return Err(Error::TruncationTooSmall {
                needed: c + 1,
                have: cfg.truncation,
                context: "the m_3 filter must see degree c + 1".into(),
            });
        }
    }
    if cfg.truncation < cfg.max_rel_degree {
        return Err(Error::TruncationTooSmall {
            needed: cfg.max_rel_degree,
            have: cfg.truncation,
            context: "relation degree bound".into(),
        });
    }
    Ok(())
}

/// Hilbert series of every algebra `k⟨X⟩ / (W)` with `W` a homogeneous
/// subspace of relations in degrees `2..=b`.
pub fn census_algebras(cfg: &EnumerationConfig) -> Result<SeriesCensus> {
    check_m3_truncation(cfg)?;
    let space = AlgebraSpace::new(cfg, cfg.budget)?;
    let (tally, dropped) = run_strided(space.subspaces.len(), cfg.threads, |i| {
        let (p, sample) = space.presentation(cfg.field, i)?;
        if !passes_m3(&p, cfg)? {
            return Ok(None);
        }
        let dims = algebra_dims(&p, cfg.truncation)?;
        Ok(Some((TruncatedSeries::new(dims), sample)))
    })?;
    Ok(into_census(tally, cfg.truncation, space.subspaces.len(), dropped))
}

/// The algebras enumerated by `cfg` (after the `m_3` filter), in index order.
pub fn enumerated_algebras(cfg: &EnumerationConfig) -> Result<Vec<Presentation>> {
    check_m3_truncation(cfg)?;
    let space = AlgebraSpace::new(cfg, cfg.budget)?;
    let mut out = Vec::new();
    for i in 0..space.subspaces.len() {
        let (p, _) = space.presentation(cfg.field, i)?;
        if passes_m3(&p, cfg)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Module relation basis of `F_d`, `F = ⊕ e_g A`: pairs (generator, normal
/// word) ordered by generator, then word.
fn module_basis(alg: &QuotientAlgebra, gen_degrees: &[u32], d: u32) -> Vec<(usize, Word)> {
    let mut out = Vec::new();
    for (g, &gd) in gen_degrees.iter().enumerate() {
        if gd <= d {
            out.extend(alg.normal_words(d - gd).iter().map(|w| (g, w.clone())));
        }
    }
    out
}

struct ModuleSpace {
    base: Presentation,
    degrees: Vec<u32>,
    basis: Vec<Vec<(usize, Word)>>,
    subspaces: HomogeneousSubspaces,
}

/// Hilbert series of every module `F / W·A` over each algebra in `over`,
/// `W` ranging over homogeneous subspaces of `F` in degrees from one above
/// the lowest generator degree to `max_rel_degree`.
pub fn census_modules(cfg: &EnumerationConfig, over: &[Presentation]) -> Result<SeriesCensus> {
    let bounds = cfg.module.clone().ok_or_else(|| Error::Input("module bounds are required".into()))?;
    if cfg.truncation < bounds.max_rel_degree {
        return Err(Error::TruncationTooSmall {
            needed: bounds.max_rel_degree,
            have: cfg.truncation,
            context: "module relation degree bound".into(),
        });
    }
    let lo = bounds.gen_degrees.iter().copied().min().unwrap_or(0) + 1;
    let mut spaces = Vec::with_capacity(over.len());
    let mut total: u128 = 0;
    for a in over {
        let alg = QuotientAlgebra::from_presentation(a, cfg.truncation)?;
        let degrees: Vec<u32> = (lo..=bounds.max_rel_degree).collect();
        let basis: Vec<Vec<(usize, Word)>> =
            degrees.iter().map(|&d| module_basis(&alg, &bounds.gen_degrees, d)).collect();
        let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
        let remaining = cfg.budget.saturating_sub(total);
        let subspaces = match enumerate_subspaces(&dims, cfg.field, remaining) {
            Err(Error::BudgetExceeded { count, .. }) => {
                return Err(Error::BudgetExceeded { count: total.saturating_add(count), budget: cfg.budget })
            }
            other => other?,
        };
        total += subspaces.len();
        spaces.push(ModuleSpace { base: a.clone(), degrees, basis, subspaces });
    }
    // global index = (algebra, subspace) in order
    let offsets: Vec<u128> = spaces
        .iter()
        .scan(0u128, |acc, s| {
            let o = *acc;
            *acc += s.subspaces.len();
            Some(o)
        })
        .collect();
    let field = cfg.field;
    let names: Vec<String> = (0..bounds.gen_degrees.len()).map(|g| format!("e{g}")).collect();
    let (tally, dropped) = run_strided(total, cfg.threads, |i| {
        let k = offsets.partition_point(|&o| o <= i) - 1;
        let sp = &spaces[k];
        let mut rels = Vec::new();
        for (j, s) in sp.subspaces.get(i - offsets[k]).into_iter().enumerate() {
            for row in &s.rows {
                let terms = row
                    .iter()
                    .zip(&sp.basis[j])
                    .filter(|(c, _)| **c != 0)
                    .map(|(c, gw)| (gw.clone(), field.from_i64(*c as i64)));
                rels.push(ModElement::from_terms(field, sp.degrees[j], terms));
            }
        }
        let m = ModulePresentation::new("M", sp.base.clone(), names.clone(), bounds.gen_degrees.clone(), rels)?;
        let mut sample: Vec<String> = sp.base.rels().iter().map(|r| r.format(field, sp.base.gens())).collect();
        sample.extend(m.mrels().iter().map(|r| r.format(field, sp.base.gens(), &names)));
        let (dims, _) = module_dims(&m, cfg.truncation)?;
        Ok(Some((TruncatedSeries::from_usize(&dims), sample)))
    })?;
    Ok(into_census(tally, cfg.truncation, total, dropped))
}

/// Chains realized by a census. Lex order is total, so the lex chain is the
/// whole census; the coefficientwise order is only partial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub distinct: usize,
    /// Longest strictly descending lex chain (census indices).
    pub lex_descending: Vec<usize>,
    /// Longest strictly ascending lex chain.
    pub lex_ascending: Vec<usize>,
    /// Longest strictly ascending chain in the coefficientwise order.
    pub coefficientwise_ascending: Vec<usize>,
    /// Entries realized by several presentations: equal up to truncation,
    /// worth inspecting by hand.
    pub ambiguous: Vec<usize>,
}

pub fn chain_analysis(census: &SeriesCensus) -> Result<ChainReport> {
    let e = &census.entries;
    let mut sorted: Vec<usize> = (0..e.len()).collect();
    let mut err = None;
    sorted.sort_by(|&a, &b| match e[b].series.lex_compare(&e[a].series) {
        Ok(v) => match v.order {
            LexOrder::Less => std::cmp::Ordering::Less,
            LexOrder::Greater => std::cmp::Ordering::Greater,
            LexOrder::EqualUpToTruncation => std::cmp::Ordering::Equal,
        },
        Err(x) => {
            err = Some(x);
            std::cmp::Ordering::Equal
        }
    });
    if let Some(x) = err {
        return Err(x);
    }
    let lex_descending = sorted.clone();
    let lex_ascending: Vec<usize> = sorted.iter().rev().copied().collect();

    // longest path in the strict coefficientwise order, over lex-ascending
    // order (a topological order, since c ≤ c' coefficientwise implies lex)
    let n = lex_ascending.len();
    let mut best = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    for j in 0..n {
        for i in 0..j {
            let (a, b) = (&e[lex_ascending[i]].series, &e[lex_ascending[j]].series);
            if a != b && a.coefficientwise_leq(b)? && best[i] + 1 > best[j] {
                best[j] = best[i] + 1;
                prev[j] = i;
            }
        }
    }
    let mut coefficientwise_ascending = Vec::new();
    if let Some(mut j) = (0..n).max_by_key(|&j| (best[j], std::cmp::Reverse(j))) {
        loop {
            coefficientwise_ascending.push(lex_ascending[j]);
            if prev[j] == usize::MAX {
                break;
            }
            j = prev[j];
        }
        coefficientwise_ascending.reverse();
    }
    let ambiguous = (0..e.len()).filter(|&i| e[i].count > 1).collect();
    Ok(ChainReport { distinct: e.len(), lex_descending, lex_ascending, coefficientwise_ascending, ambiguous })
}
