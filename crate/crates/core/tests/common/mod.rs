//! Shared corpus and independent oracles for the integration tests.
//!
//! The rank oracle spans `{u·r·v}` in the free algebra and eliminates with
//! its own arithmetic; it shares nothing with the Gröbner machinery.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hilbseries::exactlin::{FieldSpec, Scalar};
use hilbseries::freealg::{parse_presentation, Presentation};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Algebra presentations used across the oracle and identity tests.
pub const CORPUS: &[(&str, &str)] = &[
    ("free2_q", "field Q\ngen x:1 y:1\n"),
    ("free3_gf2", "field GF(2)\ngen x:1 y:1 z:1\n"),
    ("comm2_q", "field Q\ngen x:1 y:1\nrel x*y - y*x\n"),
    ("comm3_q", "field Q\ngen x:1 y:1 z:1\nrel x*y - y*x; x*z - z*x; y*z - z*y\n"),
    ("comm3_gf3", "field GF(3)\ngen x:1 y:1 z:1\nrel x*y - y*x; x*z - z*x; y*z - z*y\n"),
    ("linear_gf2", "field GF(2)\ngen x:1 y:1\nrel y^2; y*x\n"),
    ("linear_q", "field Q\ngen x:1 y:1\nrel y^2; y*x\n"),
    ("bounded_gf2", "field GF(2)\ngen x:1 y:1\nrel y*x*y; x^2\n"),
    ("bounded3_q", "field Q\ngen x:1 y:1\nrel y*x*y; x^2; x*y^2*x\n"),
    ("bounded4_gf2", "field GF(2)\ngen x:1 y:1\nrel y*x*y; x^2; x*y^2*x; x*y^4*x\n"),
    ("dual_numbers_gf3", "field GF(3)\ngen x:1\nrel x^2\n"),
    ("quantum_plane_gf5", "field GF(5)\ngen x:1 y:1\nrel x*y - 2*y*x\n"),
    ("weighted_q", "field Q\ngen x:1 y:2\nrel x*y - y*x; y^2 - x^4\n"),
    ("mixed_quadratic_q", "field Q\ngen x:1 y:1\nrel x^2 - y^2; x*y\n"),
    ("cubic_q", "field Q\ngen x:1 y:1\nrel x^2*y - y*x^2; x*y^2 - y^2*x\n"),
];

pub fn corpus(name: &str) -> Presentation {
    let (_, text) = CORPUS.iter().find(|(n, _)| *n == name).expect("corpus entry");
    parse_presentation(text).expect("corpus parses").algebra
}

/// Exact scalars for the oracle: residues mod p, or rationals.
#[derive(Clone, Copy, Debug)]
enum Arith {
    Mod(i64),
    Rational,
}

#[derive(Clone, Debug, PartialEq)]
enum Val {
    M(i64),
    R(BigRational),
}

impl Arith {
    fn of(f: FieldSpec) -> Self {
        f.order().map_or(Arith::Rational, |p| Arith::Mod(p as i64))
    }
    fn lift(self, s: &Scalar) -> Val {
        match (self, s) {
            (Arith::Mod(p), Scalar::Fp(v)) => Val::M(*v as i64 % p),
            (Arith::Rational, Scalar::Q(q)) => Val::R(q.clone()),
            _ => panic!("scalar from another field"),
        }
    }
    fn is_zero(self, v: &Val) -> bool {
        match v {
            Val::M(a) => *a == 0,
            Val::R(q) => q.is_zero(),
        }
    }
    fn inv(self, v: &Val) -> Val {
        match (self, v) {
            (Arith::Mod(p), Val::M(a)) => Val::M(pow_mod(*a, p - 2, p)),
            (_, Val::R(q)) => Val::R(q.recip()),
            _ => unreachable!(),
        }
    }
    fn mul(self, a: &Val, b: &Val) -> Val {
        match (self, a, b) {
            (Arith::Mod(p), Val::M(x), Val::M(y)) => Val::M(x * y % p),
            (_, Val::R(x), Val::R(y)) => Val::R(x * y),
            _ => unreachable!(),
        }
    }
    fn sub(self, a: &Val, b: &Val) -> Val {
        match (self, a, b) {
            (Arith::Mod(p), Val::M(x), Val::M(y)) => Val::M((x - y).rem_euclid(p)),
            (_, Val::R(x), Val::R(y)) => Val::R(x - y),
            _ => unreachable!(),
        }
    }
}

fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Every word (as letter indices) of weight exactly `d`.
pub fn words_of_weight(degrees: &[u32], d: u32) -> Vec<Vec<u8>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (g, &gd) in degrees.iter().enumerate() {
        if gd <= d {
            for mut w in words_of_weight(degrees, d - gd) {
                w.insert(0, g as u8);
                out.push(w);
            }
        }
    }
    out
}

/// Rank of a set of sparse rows, eliminating on the smallest column index.
fn rank(arith: Arith, rows: Vec<BTreeMap<usize, Val>>) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Val>> = BTreeMap::new();
    for mut row in rows {
        loop {
            row.retain(|_, v| !arith.is_zero(v));
            let Some((&col, lead)) = row.iter().next() else { break };
            match pivots.get(&col) {
                None => {
                    let inv = arith.inv(lead);
                    let normed = row.into_iter().map(|(c, v)| (c, arith.mul(&v, &inv))).collect();
                    pivots.insert(col, normed);
                    break;
                }
                Some(p) => {
                    let f = lead.clone();
                    for (c, v) in p {
                        let cur = row.remove(c).unwrap_or(match arith {
                            Arith::Mod(_) => Val::M(0),
                            Arith::Rational => Val::R(BigRational::zero()),
                        });
                        row.insert(*c, arith.sub(&cur, &arith.mul(&f, v)));
                    }
                }
            }
        }
    }
    pivots.len()
}

/// `dim T(V)_d − rank(I_d)` for `d = 0..=n`, by spanning the ideal directly.
pub fn ideal_rank_dims(p: &Presentation, n: u32) -> Vec<usize> {
    let arith = Arith::of(p.field());
    let degrees = p.gens().degrees().to_vec();
    (0..=n)
        .map(|d| {
            let basis = words_of_weight(&degrees, d);
            let index: BTreeMap<&[u8], usize> = basis.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
            let mut rows = Vec::new();
            for r in p.rels() {
                let e = r.degree();
                if e > d {
                    continue;
                }
                for left in 0..=d - e {
                    for u in words_of_weight(&degrees, left) {
                        for v in words_of_weight(&degrees, d - e - left) {
                            let mut row = BTreeMap::new();
                            for (w, c) in r.terms() {
                                let full: Vec<u8> = u.iter().chain(w.letters()).chain(&v).copied().collect();
                                row.insert(index[full.as_slice()], arith.lift(c));
                            }
                            rows.push(row);
                        }
                    }
                }
            }
            basis.len() - rank(arith, rows)
        })
        .collect()
}

pub fn as_usize(v: &[BigInt]) -> Vec<usize> {
    v.iter().map(|b| usize::try_from(b).expect("small dimension")).collect()
}

pub fn one() -> BigRational {
    BigRational::one()
}

/// Input files for the command-line tests, written into a scratch directory.
pub const FIXTURES: &[(&str, &str)] = &[
    ("comm2.alg", "field Q\ngen x:1 y:1\nrel x*y - y*x\n"),
    ("linear.alg", "field GF(2)\ngen x:1 y:1\nrel y^2; y*x\n"),
    ("linear_q.alg", "field Q\ngen x:1 y:1\nrel y^2; y*x\n"),
    ("bounded.alg", "field GF(2)\ngen x:1 y:1\nrel y*x*y; x^2; x*y^2*x; x*y^4*x\n"),
    (
        "koszul.fam",
        "field Q\ngen x:1 y:1\nrel x*y - y*x\nideal Z = 0\nideal X = (x)\nideal M = (x, y)\nwit X Z Z 1 x\nwit M X X 1 y\n",
    ),
    ("bad_witness.fam", "field Q\ngen x:1 y:1\nrel x*y - y*x\nideal Z = 0\nideal X = (x)\nwit X Z Z 2 x\n"),
    ("cyclic.alg", "field GF(3)\ngen x:1 y:1\nrel x*y - y*x\nmodule K\nmgen e:0\nmrel e*x; e*y\n"),
    ("broken.alg", "field Q\ngen x:1\nrel x*+x\n"),
    ("a.csv", "1,3,0\n"),
    ("b.csv", "1\n2\n9\n"),
];

pub fn write_fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().expect("scratch dir");
    for (name, text) in FIXTURES {
        std::fs::write(dir.path().join(name), text).expect("fixture written");
    }
    dir
}
