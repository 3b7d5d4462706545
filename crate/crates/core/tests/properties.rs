mod common;

use common::{corpus, CORPUS};
use hilbseries::exactlin::FieldSpec;
use hilbseries::freealg::{
    multiply, parse_presentation, GeneratorSet, ModulePresentation, NcPolynomial, Presentation, Word,
};
use hilbseries::groebner::{
    algebra_dims, groebner_truncated, growth_estimate, module_dims, GrowthKind, QuotientAlgebra,
};
use hilbseries::periodicity::{certify_period, shift_bound_check, shift_module, PeriodOutcome};
use hilbseries::resolution::{algebra_homology, minimal_resolution, Resolution, Target};
use hilbseries::series::{euler_check, module_euler_residual, TruncatedSeries};
use proptest::prelude::*;

fn poly(field: FieldSpec, deg: usize, terms: &[(Vec<u8>, i64)]) -> NcPolynomial {
    NcPolynomial::from_terms(
        field,
        deg as u32,
        terms.iter().map(|(w, c)| (Word::from_letters(w[..deg].to_vec()), field.from_i64(*c))),
    )
}

fn terms() -> impl Strategy<Value = Vec<(Vec<u8>, i64)>> {
    proptest::collection::vec((proptest::collection::vec(0u8..3, 3), -4i64..5), 0..4)
}

fn monomial_algebra(words: &[Vec<u8>]) -> Presentation {
    let field = FieldSpec::prime(2).unwrap();
    let gens = GeneratorSet::anonymous(&[1, 1]).unwrap();
    let rels =
        words.iter().map(|w| NcPolynomial::monomial(&gens, Word::from_letters(w.clone()), field.one())).collect();
    Presentation::new(field, gens, rels).unwrap()
}

#[test]
fn homology_matches_presentation() {
    for (name, _) in CORPUS {
        let p = corpus(name);
        let h = algebra_homology(&p, 2, 7).unwrap();
        assert_eq!(h.tor_dims[0][0], 1, "{name}");
        assert_eq!(h.tor_dims[1], p.gens().count_by_degree(7), "{name}");
        assert_eq!(h.tor_dims[2], p.relations_by_degree(7), "{name}");
    }
}

#[test]
fn resolutions_are_minimal() {
    for (name, _) in CORPUS {
        let p = corpus(name);
        let a = QuotientAlgebra::from_presentation(&p, 6).unwrap();
        let k = ModulePresentation::trivial(p.clone());
        let mut r = Resolution::compute(&a, Target::Module(&k), 3, 6).unwrap();
        assert!(r.is_minimal(), "{name}");
    }
}

#[test]
fn module_euler_identity() {
    let docs = [
        "field Q\ngen x:1 y:1\nrel x*y - y*x\nmodule M\nmgen e:0 f:1\nmrel e*x*y - f*y; f*x\n",
        "field GF(2)\ngen x:1 y:1\nrel y^2; y*x\nmodule M\nmgen e:0\nmrel e*y\n",
        "field GF(3)\ngen x:1\nrel x^2\nmodule M\nmgen e:0 f:0\nmrel e*x + f*x\n",
    ];
    let n = 7;
    for text in docs {
        let doc = parse_presentation(text).unwrap();
        let m = doc.module("M").unwrap();
        let dims = TruncatedSeries::from_usize(&module_dims(m, n).unwrap().0);
        let a = TruncatedSeries::new(algebra_dims(&doc.algebra, n).unwrap());
        // every generator has degree ≥ 0 and every letter degree ≥ 1, so Tor_i
        // sits in degrees ≥ i and levels 0..=n exhaust degrees ≤ n
        let prof = minimal_resolution(m, n as usize, n).unwrap();
        assert!(module_euler_residual(&dims, &a, &prof.tor_all()).is_zero(), "{text}");
    }
}

#[test]
fn certificates_divide_fingerprint_collisions() {
    let doc = parse_presentation("field GF(2)\ngen x:1 y:1\nrel y*x*y; x^2; x*y^2*x\n").unwrap();
    let m = ModulePresentation::regular(doc.algebra);
    let n = 40;
    let PeriodOutcome::Certified(c) = certify_period(&m, 12, n).unwrap().outcome else {
        panic!("expected a certificate")
    };
    let fps: Vec<_> = (0..=12).map(|s| shift_module(&m, s, n).unwrap().fingerprint).collect();
    for i in 0..fps.len() {
        for j in i + 1..fps.len() {
            if fps[i] == fps[j] && i as u32 >= c.preperiod {
                assert_eq!((j - i) as u32 % c.period, 0);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_round_trip(t1 in terms(), t2 in terms(), q in prop_oneof![Just(2u32), Just(3), Just(7)]) {
        let field = FieldSpec::prime(q).unwrap();
        let gens = GeneratorSet::anonymous(&[1, 1, 1]).unwrap();
        let rels: Vec<_> = [poly(field, 3, &t1), poly(field, 2, &t2)].into_iter().filter(|p| !p.is_zero()).collect();
        let p = Presentation::new(field, gens, rels).unwrap();
        let text = format!(
            "field {field}\ngen x:1 y:1 z:1\n{}",
            if p.rels().is_empty() { String::new() } else {
                format!("rel {}\n", p.rels().iter().map(|r| r.format(field, p.gens())).collect::<Vec<_>>().join("; "))
            }
        );
        let doc = parse_presentation(&text).unwrap();
        let again = parse_presentation(&doc.to_text()).unwrap();
        prop_assert_eq!(&doc, &again);
        prop_assert_eq!(again.algebra.rels().len(), p.rels().len());
    }

    #[test]
    fn multiplication_is_associative_and_distributive(a in terms(), b in terms(), c in terms(), d in terms()) {
        let f = FieldSpec::Rationals;
        let (a, b, c, d) = (poly(f, 1, &a), poly(f, 2, &b), poly(f, 3, &c), poly(f, 3, &d));
        let ab_c = multiply(f, &multiply(f, &a, &b).unwrap(), &c).unwrap();
        let a_bc = multiply(f, &a, &multiply(f, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = multiply(f, &a, &c.add(f, &d)).unwrap();
        let right = multiply(f, &a, &c).unwrap().add(f, &multiply(f, &a, &d).unwrap());
        prop_assert_eq!(left, right);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn euler_identity_on_monomial_algebras(words in proptest::collection::vec(proptest::collection::vec(0u8..2, 2..4), 0..4)) {
        let p = monomial_algebra(&words);
        let n = 6;
        let h = algebra_homology(&p, n as usize, n).unwrap();
        prop_assert!(euler_check(&p, &h.tor_all(), n).unwrap().is_zero());
    }

    #[test]
    fn linear_growth_certificates_are_sound(words in proptest::collection::vec(proptest::collection::vec(0u8..2, 2..5), 1..5)) {
        let p = monomial_algebra(&words);
        let g = groebner_truncated(&p, 8).unwrap();
        let kind = growth_estimate(&g).kind;
        prop_assume!(matches!(kind, GrowthKind::Linear | GrowthKind::FiniteDimensional));
        let m = ModulePresentation::regular(p);
        let n = 36;
        let report = certify_period(&m, 16, n).unwrap();
        let PeriodOutcome::Certified(c) = report.outcome else {
            return Err(TestCaseError::fail("bounded growth without a certificate"));
        };
        let longer = module_dims(&m, n + 20).unwrap().0;
        prop_assert!(c.holds_on(&longer));

        let (dims, _) = module_dims(&m, n).unwrap();
        for s in [0u32, 1, 3, 7] {
            let sh = shift_module(&m, s, n).unwrap();
            let (sd, _) = module_dims(&sh.presentation, n - s).unwrap();
            prop_assert_eq!(&sd[..], &dims[s as usize..]);
        }
        let bounds = shift_bound_check(&m, 6, 20).unwrap();
        prop_assert!(bounds.holds() && bounds.holds_strictly());
    }
}

#[test]
fn bounded_truncation_is_periodic() {
    // finitely many of the relations x·y^(2^k)·x: the tail is eventually
    // constant, so the scan finds a collision
    let p = corpus("bounded4_gf2");
    let m = ModulePresentation::regular(p);
    let report = certify_period(&m, 20, 60).unwrap();
    let PeriodOutcome::Certified(c) = &report.outcome else { panic!("{report}") };
    assert_eq!((c.i, c.j, c.period), (7, 8, 1));
    assert_eq!(&report.dims[..12], &[1, 2, 3, 4, 3, 4, 3, 4, 4, 4, 4, 4]);
}
