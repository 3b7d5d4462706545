//! Acceptance suite: one line per criterion, then a single verdict.
//!
//! Arithmetic is exact throughout, so every numeric tolerance is zero; the
//! only tolerances are the runtime budgets below.

mod common;

use std::time::{Duration, Instant};

use common::{as_usize, corpus, ideal_rank_dims, write_fixtures, CORPUS};
use hilbseries::cli::run_json;
use hilbseries::enumerate::{census_algebras, enumerate_subspaces, gaussian_binomial, EnumerationConfig};
use hilbseries::exactlin::{FieldSpec, Matrix};
use hilbseries::families::{family_hilbert_rational, family_mi_bounds, koszul_poincare, verify_family};
use hilbseries::freealg::{parse_presentation, ModulePresentation};
use hilbseries::groebner::algebra_dims;
use hilbseries::periodicity::{certify_period, shift_bound_check, shift_bounds, shift_module, PeriodOutcome};
use hilbseries::resolution::algebra_homology;
use hilbseries::series::{euler_check, LexOrder, TruncatedSeries};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const ORACLE_DEGREE: u32 = 6;
const ORACLE_MIN_CORPUS: usize = 10;
const ORACLE_BUDGET: Duration = Duration::from_secs(10);

const EULER_TRUNCATION: u32 = 10;
const DUAL_NUMBERS_IMAX: usize = 5;

const PERIOD_CHECK_TO: usize = 30;
const PERIOD_MAX_SHIFT: u32 = 10;
const PERIOD_BUDGET: Duration = Duration::from_secs(5);

const SHIFT_BOUND_SHIFTS: u32 = 8;

const ENUM_BUDGET: Duration = Duration::from_secs(1);

const STABILITY_M3: u32 = 6;
const STABILITY_TRUNCATIONS: (u32, u32) = (10, 14);
const STABILITY_BUDGET: Duration = Duration::from_secs(300);

const FAMILY_TRUNCATION: u32 = 12;
const FAMILY_IMAX: usize = 3;

const SERIES_CASES: u32 = 10_000;
const MATRIX_CASES: u32 = 1_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    check(t < budget, || format!("took {t:.2?}, budget {budget:?}"))?;
    Ok(t)
}

fn c1_dimension_oracle() -> Outcome {
    let start = Instant::now();
    check(CORPUS.len() >= ORACLE_MIN_CORPUS, || format!("corpus has {} entries", CORPUS.len()))?;
    for required in ["free2_q", "comm2_q", "linear_gf2", "bounded_gf2", "weighted_q"] {
        check(CORPUS.iter().any(|(n, _)| *n == required), || format!("corpus lacks {required}"))?;
    }
    for (name, _) in CORPUS {
        let p = corpus(name);
        let got = as_usize(&algebra_dims(&p, ORACLE_DEGREE).map_err(|e| e.to_string())?);
        let want = ideal_rank_dims(&p, ORACLE_DEGREE);
        check(got == want, || format!("{name}: {got:?} != oracle {want:?}"))?;
    }
    let t = within(start, ORACLE_BUDGET)?;
    Ok(format!("{} presentations agree through degree {ORACLE_DEGREE} ({t:.2?})", CORPUS.len()))
}

fn c2_euler_identity() -> Outcome {
    let n = EULER_TRUNCATION;
    // global dimension ≤ 3, so levels 0..=4 exhaust the resolution
    for name in ["free2_q", "free3_gf2", "comm2_q", "comm3_q", "comm3_gf3"] {
        let p = corpus(name);
        let h = algebra_homology(&p, 4, n).map_err(|e| e.to_string())?;
        check(h.tor_dims[4].iter().all(|&c| c == 0), || format!("{name}: Tor_4 nonzero"))?;
        let r = euler_check(&p, &h.tor_all(), n).map_err(|e| e.to_string())?;
        check(r.is_zero(), || format!("{name}: residual {r}"))?;
    }
    // Tor_i of k⟨x|x²⟩ sits in degree i for every i: levels 0..=5 exhaust
    // degrees ≤ 5 only, and levels 0..=N exhaust the whole truncation
    let p = corpus("dual_numbers_gf3");
    let h = algebra_homology(&p, DUAL_NUMBERS_IMAX, n).map_err(|e| e.to_string())?;
    let r = euler_check(&p, &h.tor_all(), n).map_err(|e| e.to_string())?;
    check(r.truncate(DUAL_NUMBERS_IMAX).is_zero(), || format!("dual numbers, i_max 5: residual {r}"))?;
    let h = algebra_homology(&p, n as usize, n).map_err(|e| e.to_string())?;
    let r = euler_check(&p, &h.tor_all(), n).map_err(|e| e.to_string())?;
    check(r.is_zero(), || format!("dual numbers, i_max {n}: residual {r}"))?;
    Ok(format!("residual zero through degree {n} on 6 algebras (dual numbers: i_max 5 through degree 5, i_max {n} through {n})"))
}

fn c3_certified_periodicity() -> Outcome {
    let start = Instant::now();
    let n = PERIOD_CHECK_TO as u32 + 2;
    let mut seen = Vec::new();
    for name in ["linear_gf2", "linear_q"] {
        let m = ModulePresentation::regular(corpus(name));
        let report = certify_period(&m, PERIOD_MAX_SHIFT, n).map_err(|e| e.to_string())?;
        let PeriodOutcome::Certified(c) = &report.outcome else {
            return Err(format!("{name}: {}", report));
        };
        check(c.period == 1 && c.preperiod <= 1, || format!("{name}: period {} preperiod {}", c.period, c.preperiod))?;
        let d = &report.dims;
        for s in 1..=PERIOD_CHECK_TO {
            check(d[s] == d[s + 1], || format!("{name}: dim M_{s} = {} but dim M_{} = {}", d[s], s + 1, d[s + 1]))?;
        }
        seen.push(format!("{name} d={} i={} {}", c.period, c.preperiod, c.rational_form));
    }
    let t = within(start, PERIOD_BUDGET)?;
    Ok(format!("{} ({t:.2?})", seen.join("; ")))
}

fn c4_shift_bounds() -> Outcome {
    let docs = [
        "field GF(2)\ngen x:1 y:1\nrel y^2; y*x\n",
        "field Q\ngen x:1 y:1\nrel y^2; y*x\nmodule M\nmgen e:0 f:1\nmrel e*y\n",
        "field GF(2)\ngen x:1 y:1\nrel y*x*y; x^2\n",
        "field Q\ngen x:1 y:1\nrel y*x*y; x^2; x*y^2*x\n",
        "field GF(3)\ngen x:1\nrel x^2\nmodule M\nmgen e:0 f:1\nmrel e*x - f\n",
        "field GF(2)\ngen x:1\nmodule M\nmgen e:0\nmrel e*x^3\n",
    ];
    let mut shifts = 0;
    for text in docs {
        let doc = parse_presentation(text).map_err(|e| e.to_string())?;
        let m = doc.modules.first().cloned().unwrap_or_else(|| ModulePresentation::regular(doc.algebra.clone()));
        let (_, rb) = shift_bounds(&m);
        let n = SHIFT_BOUND_SHIFTS + 2 * rb + 2;
        let report = shift_bound_check(&m, SHIFT_BOUND_SHIFTS, n).map_err(|e| e.to_string())?;
        check(report.holds(), || format!("violation: {report:?}"))?;
        // strict for every proper shift n >= 1
        check(report.holds_strictly(), || format!("strict violation: {report:?}"))?;
        for s in 0..=SHIFT_BOUND_SHIFTS {
            let sh = shift_module(&m, s, n).map_err(|e| e.to_string())?;
            let r = sh.presentation.max_relation_degree();
            check(r <= rb, || format!("shift {s}: relation degree {r} above {rb}"))?;
            shifts += 1;
        }
    }
    Ok(format!(
        "{shifts} shifts of {} modules: m_0(M^n) < max(m_0(M), m_1(A)) and m_1(M^n) < max(m_1(M), m_2(A)) for n ≥ 1, \
         relation degrees within bound",
        docs.len()
    ))
}

fn c5_enumeration_counts() -> Outcome {
    let start = Instant::now();
    let f2 = FieldSpec::prime(2).unwrap();
    let two = enumerate_subspaces(&[2], f2, u128::MAX).map_err(|e| e.to_string())?;
    let four = enumerate_subspaces(&[4], f2, u128::MAX).map_err(|e| e.to_string())?;
    let closed = |n| (0..=n).map(|k| gaussian_binomial(n, k, 2)).sum::<u128>();
    check(two.len() == 5 && two.iter().count() == 5, || format!("2-dim: {}", two.len()))?;
    check(four.len() == 67 && four.iter().count() == 67, || format!("4-dim: {}", four.len()))?;
    check(closed(2) == 5 && closed(4) == 67, || "Gaussian binomial sums disagree".into())?;
    let census = census_algebras(&EnumerationConfig::new(f2, vec![1], 2, 8)).map_err(|e| e.to_string())?;
    check(census.distinct() == 2, || format!("n=1 census has {} series", census.distinct()))?;
    let t = within(start, ENUM_BUDGET)?;
    Ok(format!("5 and 67 subspaces; n=1 census has 2 series ({t:.2?})"))
}

fn c6_finiteness_evidence() -> Outcome {
    let start = Instant::now();
    let f2 = FieldSpec::prime(2).unwrap();
    let (lo, hi) = STABILITY_TRUNCATIONS;
    let mut counts = Vec::new();
    for n in [lo, hi] {
        let mut cfg = EnumerationConfig::new(f2, vec![1, 1], 2, n);
        cfg.m3_filter = Some(STABILITY_M3);
        let c = census_algebras(&cfg).map_err(|e| e.to_string())?;
        check(c.entries.iter().map(|e| e.count).sum::<u128>() + c.filtered_out == c.enumerated, || {
            "multiplicities do not add up".into()
        })?;
        counts.push((c.distinct(), c.filtered_out));
    }
    check(counts[0].0 == counts[1].0, || {
        format!("distinct series {} at N={lo} but {} at N={hi}", counts[0].0, counts[1].0)
    })?;
    let t = within(start, STABILITY_BUDGET)?;
    Ok(format!(
        "{} distinct series at N={lo} and N={hi} ({} of 67 filtered by m_3 ≤ {STABILITY_M3}; {t:.2?})",
        counts[0].0, counts[0].1
    ))
}

fn c7_koszul_family() -> Outcome {
    let text = common::FIXTURES.iter().find(|(n, _)| *n == "koszul.fam").unwrap().1;
    let doc = parse_presentation(text).map_err(|e| e.to_string())?;
    let f = verify_family(&doc.algebra, &doc.ideals, &doc.witnesses, FAMILY_TRUNCATION).map_err(|e| e.to_string())?;
    let r = f.report();
    check(r.verified && r.family_degree == 1, || format!("verified {} degree {}", r.verified, r.family_degree))?;
    for i in &r.ideals {
        check(i.axioms.iter().all(|&a| a), || format!("{}: axioms {:?}", i.name, i.axioms))?;
    }
    let bounds = family_mi_bounds(&f, FAMILY_IMAX).map_err(|e| e.to_string())?;
    for b in &bounds {
        let m0 = r.ideals.iter().find(|i| i.name == b.name).unwrap().m0;
        for (i, row) in b.tor_dims.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                let allowed = m0.is_some_and(|m0| j as u32 == m0 + i as u32);
                check(c == 0 || allowed, || format!("{}: Tor_{i} in degree {j}", b.name))?;
            }
        }
    }
    let big = |v: &[i64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
    let forms = family_hilbert_rational(&f).map_err(|e| e.to_string())?;
    let form = |n: &str| forms.iter().find(|x| x.name == n).map(|x| x.form.clone()).unwrap();
    check(form("X").numerator == big(&[0, 1]) && form("X").denominator == big(&[1]), || format!("(x): {}", form("X")))?;
    check(form("M").numerator == big(&[0, 2, -1]) && form("M").denominator == big(&[1]), || {
        format!("(x,y): {}", form("M"))
    })?;
    let p = koszul_poincare(&f, FAMILY_IMAX).map_err(|e| e.to_string())?;
    Ok(format!(
        "axioms hold to N={FAMILY_TRUNCATION}; m_i ≤ m_0 + i for i ≤ {FAMILY_IMAX}; (x): {}, (x,y): {}; Poincaré {}",
        form("X"),
        form("M"),
        p.iter().map(|x| format!("{}={}", x.name, x.poincare)).collect::<Vec<_>>().join(", ")
    ))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn lex(a: &TruncatedSeries, b: &TruncatedSeries) -> LexOrder {
    a.lex_compare(b).unwrap().order
}

fn c8_order_laws() -> Outcome {
    let series = || proptest::collection::vec(-3i64..4, 6).prop_map(|v| TruncatedSeries::from_i64(&v));
    let positive = proptest::collection::vec(1i64..4, 6).prop_map(|v| TruncatedSeries::from_i64(&v));
    runner(SERIES_CASES)
        .run(&(series(), series(), series(), positive), |(a, b, c, f)| {
            let ab = lex(&a, &b);
            prop_assert_eq!(ab == LexOrder::EqualUpToTruncation, a == b);
            prop_assert_eq!(ab == LexOrder::Less, lex(&b, &a) == LexOrder::Greater);
            if ab != LexOrder::Greater && lex(&b, &c) != LexOrder::Greater {
                prop_assert!(lex(&a, &c) != LexOrder::Greater);
            }
            if a.coefficientwise_leq(&b).unwrap() && a != b {
                prop_assert_eq!(ab, LexOrder::Less);
            }
            if ab == LexOrder::Less {
                prop_assert_eq!(lex(&f.mul(&a), &f.mul(&b)), LexOrder::Less);
            }
            Ok(())
        })
        .map_err(|e| format!("series law: {e}"))?;
    let matrix =
        (prop_oneof![Just(2u32), Just(3), Just(5), Just(0)], 1usize..5, 1usize..6).prop_flat_map(|(p, r, c)| {
            (Just(p), Just(c), proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r))
        });
    runner(MATRIX_CASES)
        .run(&matrix, |(p, c, rows)| {
            let field = if p == 0 { FieldSpec::Rationals } else { FieldSpec::prime(p).unwrap() };
            let m = Matrix::from_i64(field, &rows);
            let (once, _) = m.rref();
            prop_assert_eq!(&once.rref().0, &once);
            let k = m.kernel_basis();
            prop_assert_eq!(k.rows() + m.rank(), c);
            for i in 0..k.rows() {
                let v = k.row(i);
                for row in &rows {
                    // dot product with the original integer rows
                    let mut acc = field.zero();
                    for (a, x) in row.iter().zip(v) {
                        acc = field.add(&acc, &field.mul(&field.from_i64(*a), x));
                    }
                    prop_assert!(field.is_zero(&acc));
                }
            }
            Ok(())
        })
        .map_err(|e| format!("matrix law: {e}"))?;
    Ok(format!("{SERIES_CASES} series cases and {MATRIX_CASES} matrix cases"))
}

fn c9_determinism() -> Outcome {
    let dir = write_fixtures();
    let path = |f: &str| dir.path().join(f).to_string_lossy().into_owned();
    let commands: Vec<Vec<String>> = vec![
        vec!["gb".into(), path("comm2.alg"), "--deg".into(), "6".into()],
        vec!["hilb".into(), path("comm2.alg"), "--deg".into(), "6".into()],
        vec!["resolve".into(), path("comm2.alg"), "--deg".into(), "8".into(), "--imax".into(), "3".into()],
        vec!["period".into(), path("linear.alg"), "--deg".into(), "30".into(), "--max-shift".into(), "10".into()],
        vec!["period".into(), path("linear_q.alg"), "--deg".into(), "30".into(), "--max-shift".into(), "10".into()],
        vec!["family".into(), path("koszul.fam"), "--deg".into(), "12".into()],
        [
            "enum",
            "--field",
            "2",
            "--gens",
            "2",
            "--gendegs",
            "1,1",
            "--reldeg",
            "2",
            "--m3",
            "6",
            "--deg",
            "10",
            "--threads",
            "4",
        ]
        .map(String::from)
        .to_vec(),
        vec!["cmp".into(), path("a.csv"), path("b.csv")],
    ];
    for args in &commands {
        let (c1, first) = run_json(args.clone());
        let (c2, second) = run_json(args.clone());
        check(c1 == 0 && c2 == 0, || format!("{args:?} exited {c1}, {c2}"))?;
        check(first == second, || format!("{args:?} differs between runs"))?;
    }
    Ok(format!("{} commands byte-identical across two runs", commands.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 dimension oracle", c1_dimension_oracle),
        ("2 Euler identity", c2_euler_identity),
        ("3 certified periodicity", c3_certified_periodicity),
        ("4 shift bounds", c4_shift_bounds),
        ("5 enumeration counts", c5_enumeration_counts),
        ("6 finiteness evidence", c6_finiteness_evidence),
        ("7 Koszul family", c7_koszul_family),
        ("8 order laws", c8_order_laws),
        ("9 determinism", c9_determinism),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
