//! Minimal graded free resolutions, computed degree by degree.
//!
//! Level `i` resolves a subquotient `Sub / Q` of a free ambient module `X_i`:
//! at level 0 this is the module itself (`X_0 = F`, `Q = R`) or an ideal
//! (`X_0 = A`, `Sub = I`), and at level `i ≥ 1` it is the kernel `K_{i-1}`
//! inside `X_i = F_{i-1}`. In each degree `d` the images of decomposable
//! basis elements `(g, w)`, `w ≠ 1`, of `F_i` are reduced together with `Q`;
//! their dependencies give `K_i` in degree `d`, and the elements of `Sub_d`
//! that stay independent become new generators, one `Tor_i` class each.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{Echelon, SparseVec};
use crate::freealg::{ModElement, ModulePresentation, NcPolynomial, Presentation};
use crate::groebner::{FreeModule, GradedModule, QuotientAlgebra};
use crate::series::TruncatedSeries;

/// `m_i` as far as the truncation can tell. `value` is the top degree of a
/// nonzero `Tor_i` class found through the truncation (`None` if none was
/// found); `exact` means no class can exist above the truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MValue {
    pub value: Option<u32>,
    pub exact: bool,
}

impl MValue {
    /// Exact value, with vanishing reported as 0.
    pub fn exact_value(&self) -> Option<u32> {
        self.exact.then(|| self.value.unwrap_or(0))
    }
}

impl fmt::Display for MValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.value.map_or("-".to_string(), |v| v.to_string());
        if self.exact {
            write!(f, "{v}")
        } else {
            write!(f, "{v}*")
        }
    }
}

/// Betti table `dim Tor_i(M, k)_j` for `i ≤ i_max`, `j ≤ N`, and the `m_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionProfile {
    pub truncation: u32,
    pub tor_dims: Vec<Vec<usize>>,
    pub m: Vec<MValue>,
}

impl ResolutionProfile {
    pub fn tor_series(&self, i: usize) -> TruncatedSeries {
        TruncatedSeries::from_usize(&self.tor_dims[i])
    }

    pub fn tor_all(&self) -> Vec<TruncatedSeries> {
        (0..self.tor_dims.len()).map(|i| self.tor_series(i)).collect()
    }

    pub fn total(&self, i: usize) -> usize {
        self.tor_dims[i].iter().sum()
    }

    /// Degrees `j` with `Tor_i` nonzero.
    pub fn support(&self, i: usize) -> Vec<u32> {
        self.tor_dims[i].iter().enumerate().filter(|(_, &c)| c > 0).map(|(j, _)| j as u32).collect()
    }
}

impl fmt::Display for ResolutionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>4}", "i\\j")?;
        for j in 0..=self.truncation {
            write!(f, " {j:>4}")?;
        }
        writeln!(f, " {:>6}", "m_i")?;
        for (i, row) in self.tor_dims.iter().enumerate() {
            write!(f, "{i:>4}")?;
            for c in row {
                if *c == 0 {
                    write!(f, " {:>4}", ".")?;
                } else {
                    write!(f, " {c:>4}")?;
                }
            }
            writeln!(f, " {:>6}", self.m[i].to_string())?;
        }
        write!(f, "(- = no class found; * = value at this truncation, not proved)")
    }
}

/// What level 0 resolves.
#[derive(Clone, Copy, Debug)]
pub enum Target<'m> {
    Module(&'m ModulePresentation),
    /// The right ideal generated by these elements of `A`.
    Ideal(&'m [NcPolynomial]),
}

enum Level0 {
    Module(Box<GradedModule>),
    Ideal { ambient: FreeModule, sub: Vec<Echelon> },
}

/// A minimal resolution `F_{i_max} → … → F_0` in degrees `≤ N`.
pub struct Resolution<'a> {
    alg: &'a QuotientAlgebra,
    n: u32,
    level0: Level0,
    frees: Vec<FreeModule>,
    /// `images[i][d][c]`: image in `X_i` of column `c` of `(F_i)_d`.
    images: Vec<Vec<Vec<SparseVec>>>,
    /// Per level, generator degrees and images in `X_i`.
    gens: Vec<Vec<(u32, SparseVec)>>,
    tor: Vec<Vec<usize>>,
}

impl<'a> Resolution<'a> {
    /// Resolve `target` over `alg` through degree `n` (at most the algebra's
    /// computed range) and homological degree `imax`.
    pub fn compute(alg: &'a QuotientAlgebra, target: Target<'_>, imax: usize, n: u32) -> Result<Self> {
        if n > alg.max_degree() {
            return Err(Error::TruncationTooSmall {
                needed: n,
                have: alg.max_degree(),
                context: "resolution beyond the algebra's computed range".into(),
            });
        }
        let level0 = match target {
            Target::Module(m) => Level0::Module(Box::new(GradedModule::new(alg, m, n)?)),
            Target::Ideal(gens) => {
                let sub = alg.right_ideal(gens, n)?;
                Level0::Ideal { ambient: FreeModule::new(&[0]), sub }
            }
        };
        let mut r = Resolution {
            alg,
            n,
            level0,
            frees: (0..=imax).map(|_| FreeModule::new(&[])).collect(),
            images: vec![Vec::new(); imax + 1],
            gens: vec![Vec::new(); imax + 1],
            tor: vec![vec![0; n as usize + 1]; imax + 1],
        };
        let mut kernels: Vec<Vec<SparseVec>> = vec![Vec::new(); imax + 1];
        for d in 0..=n {
            for i in 0..=imax {
                let sub = if i == 0 { None } else { Some(std::mem::take(&mut kernels[i - 1])) };
                kernels[i] = r.step(d, i, sub, i < imax);
            }
        }
        Ok(r)
    }

    fn step(&mut self, d: u32, i: usize, sub: Option<Vec<SparseVec>>, want_kernel: bool) -> Vec<SparseVec> {
        let alg = self.alg;
        let field = alg.field();
        let (lower, upper) = self.frees.split_at_mut(i);
        let source = &mut upper[0];
        let (ambient, q_rows, level0_sub): (&mut FreeModule, Vec<SparseVec>, Option<Vec<SparseVec>>) = if i == 0 {
            match &mut self.level0 {
                Level0::Module(gm) => {
                    let q = gm.relations(d).rows().to_vec();
                    let len = gm.free().dim(alg, d);
                    let units = (0..len).map(|c| SparseVec::unit(field, c)).collect();
                    (gm.free(), q, Some(units))
                }
                Level0::Ideal { ambient, sub } => {
                    let rows = sub[d as usize].rows().to_vec();
                    (ambient, Vec::new(), Some(rows))
                }
            }
        } else {
            (&mut lower[i - 1], Vec::new(), None)
        };
        let sub = sub.or(level0_sub).unwrap_or_default();

        // images of the current basis of (F_i)_d
        let width = source.dim(alg, d);
        let mut imgs: Vec<SparseVec> = Vec::with_capacity(width);
        for c in 0..width {
            let (g, wi) = source.decode(alg, d, c);
            let gd = source.degrees()[g];
            let word = &alg.normal_words(d - gd)[wi];
            let (&x, prefix) = word.letters().split_last().expect("generators of degree d are added later");
            let x = x as usize;
            let e = d - alg.gens().degree_of(x);
            let pw = crate::freealg::Word::from_letters(prefix.to_vec());
            let pwi = alg.index_of(&pw).expect("prefix of a normal word is normal");
            let pc = source.index(alg, e, g, pwi);
            let prev = self.images[i][e as usize][pc].clone();
            imgs.push(ambient.act_letter(alg, e, &prev, x));
        }

        let mut ech = Echelon::with_tracking(field);
        for row in &q_rows {
            ech.insert(row);
        }
        let q = q_rows.len();
        for v in &imgs {
            ech.insert(v);
        }
        let kernel: Vec<SparseVec> = if want_kernel {
            ech.take_relations().iter().map(|r| r.remap(|k| k.checked_sub(q))).collect()
        } else {
            Vec::new()
        };

        for s in sub {
            if ech.contains(&s) {
                continue;
            }
            ech.insert(&s);
            source.add_generator(alg, d);
            self.gens[i].push((d, s.clone()));
            self.tor[i][d as usize] += 1;
            imgs.push(s);
        }
        let slot = &mut self.images[i];
        if slot.len() <= d as usize {
            slot.resize(d as usize + 1, Vec::new());
        }
        slot[d as usize] = imgs;
        kernel
    }

    pub fn tor_dims(&self) -> &[Vec<usize>] {
        &self.tor
    }

    pub fn truncation(&self) -> u32 {
        self.n
    }

    /// Generators of level `i`: degree and image in the ambient of level `i`.
    pub fn generators(&self, i: usize) -> &[(u32, SparseVec)] {
        &self.gens[i]
    }

    pub fn free_module(&self, i: usize) -> &FreeModule {
        &self.frees[i]
    }

    /// Whether every differential `F_i → F_{i-1}`, `i ≥ 1`, has no component
    /// on a generator of the target, i.e. no unit entries.
    pub fn is_minimal(&mut self) -> bool {
        let alg = self.alg;
        for i in 1..self.gens.len() {
            for (d, img) in self.gens[i].clone() {
                for (c, _) in img.entries() {
                    let (g, _) = self.frees[i - 1].decode(alg, d, *c);
                    if self.frees[i - 1].degrees()[g] == d {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Images of level-`i` generators as free-module elements over the
    /// generators of level `i - 1`.
    pub fn differential(&mut self, i: usize) -> Vec<ModElement> {
        assert!(i >= 1);
        let alg = self.alg;
        let gens = self.gens[i].clone();
        gens.iter().map(|(d, v)| self.frees[i - 1].to_element(alg, *d, v)).collect()
    }

    /// Exactness of each `m_i` from the given a priori bounds: `bounds[i]`
    /// is an upper bound for `m_i` known independently of the computation.
    pub fn profile(&self, bounds: &[Option<u32>]) -> ResolutionProfile {
        let mut m = Vec::with_capacity(self.tor.len());
        let mut vanished = false;
        for (i, row) in self.tor.iter().enumerate() {
            let value = row.iter().rposition(|&c| c > 0).map(|j| j as u32);
            let bounded = bounds.get(i).copied().flatten().is_some_and(|b| b <= self.n);
            let exact = vanished || bounded;
            if exact && value.is_none() {
                vanished = true;
            }
            m.push(MValue { value: if vanished { None } else { value }, exact });
        }
        ResolutionProfile { truncation: self.n, tor_dims: self.tor.clone(), m }
    }
}

fn require(needed: u32, have: u32, context: &str) -> Result<()> {
    if have < needed {
        return Err(Error::TruncationTooSmall { needed, have, context: context.into() });
    }
    Ok(())
}

fn module_bounds(m: &ModulePresentation) -> Vec<Option<u32>> {
    vec![Some(m.max_generator_degree()), Some(m.max_relation_degree())]
}

/// Betti table of a module through degree `n`.
pub fn minimal_resolution(m: &ModulePresentation, imax: usize, n: u32) -> Result<ResolutionProfile> {
    require(m.max_generator_degree().max(m.max_relation_degree()), n, "module presentation degrees")?;
    let alg = QuotientAlgebra::from_presentation(m.base(), n)?;
    let r = Resolution::compute(&alg, Target::Module(m), imax, n)?;
    Ok(r.profile(&module_bounds(m)))
}

/// `Tor_i(k, k)`, with the consistency check against the presentation.
pub fn algebra_homology(p: &Presentation, imax: usize, n: u32) -> Result<ResolutionProfile> {
    require(p.max_relation_degree(), n, "algebra relation degrees")?;
    let alg = QuotientAlgebra::from_presentation(p, n)?;
    let k = ModulePresentation::trivial(p.clone());
    let r = Resolution::compute(&alg, Target::Module(&k), imax, n)?;
    let bounds = [Some(0), Some(p.gens().max_degree()), Some(p.max_relation_degree())];
    let profile = r.profile(&bounds);
    let gens = p.gens().count_by_degree(n);
    let rels = p.relations_by_degree(n);
    if imax >= 1 && profile.tor_dims[1] != gens {
        return Err(Error::Verification(format!(
            "Tor_1 {:?} differs from the generator degrees {gens:?}",
            profile.tor_dims[1]
        )));
    }
    if imax >= 2 && profile.tor_dims[2] != rels {
        return Err(Error::Verification(format!(
            "Tor_2 {:?} differs from the minimal relation degrees {rels:?}",
            profile.tor_dims[2]
        )));
    }
    Ok(profile)
}

/// Betti table of the right ideal generated by `gens`.
pub fn ideal_resolution(p: &Presentation, gens: &[NcPolynomial], imax: usize, n: u32) -> Result<ResolutionProfile> {
    let top = gens.iter().map(|g| g.degree()).max().unwrap_or(0);
    require(top, n, "ideal generator degrees")?;
    let alg = QuotientAlgebra::from_presentation(p, n)?;
    let r = Resolution::compute(&alg, Target::Ideal(gens), imax, n)?;
    Ok(r.profile(&[Some(top)]))
}

/// `Ω = ker(H_0(M) ⊗ A → M)` with an explicit presentation, exact in
/// degrees `≤ exact_through`.
#[derive(Clone, Debug)]
pub struct SyzygyModule {
    pub presentation: ModulePresentation,
    pub exact_through: u32,
}

pub fn syzygy_presentation(m: &ModulePresentation, n: u32) -> Result<SyzygyModule> {
    require(m.max_generator_degree().max(m.max_relation_degree()), n, "module presentation degrees")?;
    let alg = QuotientAlgebra::from_presentation(m.base(), n)?;
    let mut r = Resolution::compute(&alg, Target::Module(m), 2, n)?;
    let degrees: Vec<u32> = r.generators(1).iter().map(|g| g.0).collect();
    let names = (0..degrees.len()).map(|i| format!("s{i}")).collect();
    let rels = r.differential(2);
    let presentation = ModulePresentation::new(format!("syz({})", m.name()), m.base().clone(), names, degrees, rels)?;
    Ok(SyzygyModule { presentation, exact_through: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::parse_presentation;
    use crate::groebner::module_dims;

    fn alg(text: &str) -> Presentation {
        parse_presentation(text).unwrap().algebra
    }

    #[test]
    fn free_algebra_has_global_dimension_one() {
        let p = alg("field Q\ngen x:1 y:1");
        let r = algebra_homology(&p, 2, 5).unwrap();
        assert_eq!(r.tor_dims[0], vec![1, 0, 0, 0, 0, 0]);
        assert_eq!(r.tor_dims[1], vec![0, 2, 0, 0, 0, 0]);
        assert_eq!(r.tor_dims[2], vec![0; 6]);
        assert_eq!(r.m[1], MValue { value: Some(1), exact: true });
        assert_eq!(r.m[2], MValue { value: None, exact: true });
    }

    #[test]
    fn koszul_complex_of_two_commuting_variables() {
        let p = alg("field Q\ngen x:1 y:1\nrel x*y - y*x");
        let r = algebra_homology(&p, 3, 6).unwrap();
        assert_eq!(r.support(2), vec![2]);
        assert_eq!(r.total(2), 1);
        assert_eq!(r.total(3), 0);
        assert_eq!(r.m[2].exact_value(), Some(2));
    }

    #[test]
    fn dual_numbers_are_koszul() {
        let p = alg("field GF(2)\ngen x:1\nrel x^2");
        let r = algebra_homology(&p, 4, 8).unwrap();
        for i in 0..=4 {
            assert_eq!(r.support(i), vec![i as u32], "Tor_{i}");
            assert_eq!(r.total(i), 1);
        }
        assert_eq!(r.m[3].value, Some(3));
        assert!(!r.m[3].exact);
    }

    #[test]
    fn syzygies() {
        let doc = parse_presentation("field Q\ngen x:1 y:1\nrel x*y - y*x\nmodule F\nmgen e:0\n").unwrap();
        let free = doc.module("F").unwrap();
        let s = syzygy_presentation(free, 5).unwrap();
        assert!(s.presentation.mgen_degrees().is_empty());

        let k = ModulePresentation::trivial(doc.algebra.clone());
        let s = syzygy_presentation(&k, 6).unwrap();
        assert_eq!(s.presentation.mgen_degrees(), &[1, 1]);
        assert_eq!(s.presentation.mrels().len(), 1);
        assert_eq!(s.presentation.mrels()[0].degree(), 2);
        // Ω(z) = A(z) - 1
        let (dims, _) = module_dims(&s.presentation, 6).unwrap();
        assert_eq!(dims, vec![0, 2, 3, 4, 5, 6, 7]);

        let doc = parse_presentation("field Q\ngen x:1\nmodule M\nmgen e:0\nmrel e*x").unwrap();
        let s = syzygy_presentation(doc.module("M").unwrap(), 5).unwrap();
        assert_eq!(s.presentation.mgen_degrees(), &[1]);
        assert!(s.presentation.mrels().is_empty());
    }

    #[test]
    fn differentials_are_minimal() {
        let p = alg("field GF(3)\ngen x:1 y:1\nrel x*y - y*x; x^2");
        let a = QuotientAlgebra::from_presentation(&p, 7).unwrap();
        let k = ModulePresentation::trivial(p.clone());
        let mut r = Resolution::compute(&a, Target::Module(&k), 4, 7).unwrap();
        assert!(r.is_minimal());
    }

    #[test]
    fn ideal_of_a_variable_is_free() {
        let doc = parse_presentation("field Q\ngen x:1 y:1\nrel x*y - y*x\nideal I = (x)\nideal J = (x, y)").unwrap();
        let i = ideal_resolution(&doc.algebra, &doc.ideals[0].generators, 2, 6).unwrap();
        assert_eq!(i.support(0), vec![1]);
        assert_eq!(i.total(1), 0);
        let j = ideal_resolution(&doc.algebra, &doc.ideals[1].generators, 2, 6).unwrap();
        assert_eq!((j.total(0), j.total(1), j.total(2)), (2, 1, 0));
        assert_eq!(j.support(1), vec![2]);
    }
}
