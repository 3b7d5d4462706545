//! Integer power series known up to a truncation degree, their two orders,
//! truncated ring arithmetic and rational reconstruction.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, Matrix, Scalar};
use crate::freealg::Presentation;
use crate::groebner::algebra_dims;

/// Coefficients `c_0 ..= c_N`, exact; nothing is known beyond `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LexOrder {
    Less,
    EqualUpToTruncation,
    Greater,
}

/// Lex verdict with the first degree where the series differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LexVerdict {
    pub order: LexOrder,
    pub first_difference: Option<usize>,
}

impl fmt::Display for LexVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.first_difference) {
            (LexOrder::Less, Some(d)) => write!(f, "LESS (lex, first difference at degree {d})"),
            (LexOrder::Greater, Some(d)) => write!(f, "GREATER (lex, first difference at degree {d})"),
            _ => write!(f, "EQUAL-UP-TO-TRUNCATION"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    /// Inverts the first operand; the second is ignored.
    Invert,
}

impl TruncatedSeries {
    /// Panics on an empty coefficient list: a series knows at least `c_0`.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncatedSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_usize(coeffs: &[usize]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![BigInt::zero(); n + 1])
    }

    pub fn one(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Polynomial `Σ c_k z^k` truncated (or zero-padded) to degree `n`.
    pub fn from_polynomial(poly: &[BigInt], n: usize) -> Self {
        let mut s = Self::zero(n);
        for (k, c) in poly.iter().enumerate().take(n + 1) {
            s.coeffs[k] = c.clone();
        }
        s
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs[..=n.min(self.truncation())].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.truncation() != other.truncation() {
            return Err(Error::TruncationMismatch { left: self.truncation() as u32, right: other.truncation() as u32 });
        }
        Ok(())
    }

    pub fn lex_compare(&self, other: &Self) -> Result<LexVerdict> {
        self.check_same(other)?;
        for (k, (a, b)) in self.coeffs.iter().zip(&other.coeffs).enumerate() {
            match a.cmp(b) {
                Ordering::Equal => continue,
                Ordering::Less => return Ok(LexVerdict { order: LexOrder::Less, first_difference: Some(k) }),
                Ordering::Greater => return Ok(LexVerdict { order: LexOrder::Greater, first_difference: Some(k) }),
            }
        }
        Ok(LexVerdict { order: LexOrder::EqualUpToTruncation, first_difference: None })
    }

    pub fn coefficientwise_leq(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self::new((0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self::new((0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by `z^k`, keeping the truncation.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.truncation();
        let mut out = vec![BigInt::zero(); n + 1];
        if k <= n {
            out[k..].clone_from_slice(&self.coeffs[..=n - k]);
        }
        Self::new(out)
    }

    /// Substitute `z ↦ -z`.
    pub fn alternate(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect())
    }

    /// Multiplicative inverse; the constant term must be `±1`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(Error::NotInvertible { constant: c0.to_string() });
        }
        let n = self.truncation();
        let mut out: Vec<BigInt> = Vec::with_capacity(n + 1);
        out.push(c0.clone());
        for k in 1..=n {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            // c0 = ±1 is its own inverse
            out.push(-(acc * c0));
        }
        Ok(Self::new(out))
    }

    /// Comma-separated coefficients.
    pub fn to_csv(&self) -> String {
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    /// Parse a CSV row, or one integer per line.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (k, tok) in text.split([',', '\n', '\r']).map(str::trim).filter(|t| !t.is_empty()).enumerate() {
            let v: BigInt =
                tok.parse().map_err(|_| Error::Input(format!("coefficient {k}: `{tok}` is not an integer")))?;
            coeffs.push(v);
        }
        if coeffs.is_empty() {
            return Err(Error::Input("empty series".into()));
        }
        Ok(Self::new(coeffs))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn lex_compare(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<LexVerdict> {
    a.lex_compare(b)
}

pub fn coefficientwise_leq(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<bool> {
    a.coefficientwise_leq(b)
}

pub fn series_arith(a: &TruncatedSeries, b: &TruncatedSeries, op: SeriesOp) -> Result<TruncatedSeries> {
    match op {
        SeriesOp::Add => Ok(a.add(b)),
        SeriesOp::Sub => Ok(a.sub(b)),
        SeriesOp::Mul => Ok(a.mul(b)),
        SeriesOp::Invert => a.invert(),
    }
}

/// `Σ (-1)^i H_i(z)`.
pub fn alternating_sum(tor: &[TruncatedSeries], n: usize) -> TruncatedSeries {
    tor.iter().enumerate().fold(TruncatedSeries::zero(n), |acc, (i, h)| {
        let h = h.truncate(n);
        if i % 2 == 0 {
            acc.add(&h)
        } else {
            acc.sub(&h)
        }
    })
}

/// Residual `A(z)^{-1} - Σ (-1)^i H_i(z)` through degree `n`, where `tor`
/// lists the series of `Tor_i(k, k)`.
pub fn euler_check(p: &Presentation, tor: &[TruncatedSeries], n: u32) -> Result<TruncatedSeries> {
    let a = TruncatedSeries::new(algebra_dims(p, n)?);
    Ok(a.invert()?.sub(&alternating_sum(tor, n as usize)))
}

/// Residual `M(z) - (Σ (-1)^i H_i M(z)) · A(z)` for a module.
pub fn module_euler_residual(m: &TruncatedSeries, a: &TruncatedSeries, tor: &[TruncatedSeries]) -> TruncatedSeries {
    let n = m.truncation().min(a.truncation());
    m.truncate(n).sub(&alternating_sum(tor, n).mul(&a.truncate(n)))
}

/// `p(z) / q(z)` with integer coefficients (lowest degree first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalSeriesForm {
    #[serde(serialize_with = "ser_bigints")]
    pub numerator: Vec<BigInt>,
    #[serde(serialize_with = "ser_bigints")]
    pub denominator: Vec<BigInt>,
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    if v.is_empty() {
        v.push(BigInt::zero());
    }
    v
}

impl RationalSeriesForm {
    pub fn new(numerator: Vec<BigInt>, denominator: Vec<BigInt>) -> Self {
        RationalSeriesForm { numerator: trim(numerator), denominator: trim(denominator) }
    }

    /// Power-series expansion through degree `n`; `None` when a coefficient
    /// is not an integer.
    pub fn expand(&self, n: usize) -> Option<TruncatedSeries> {
        let q0 = BigRational::from_integer(self.denominator[0].clone());
        if q0.is_zero() {
            return None;
        }
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = BigRational::from_integer(self.numerator.get(k).cloned().unwrap_or_default());
            for j in 1..=k.min(self.denominator.len() - 1) {
                acc -= BigRational::from_integer(self.denominator[j].clone()) * &out[k - j];
            }
            out.push(acc / &q0);
        }
        out.into_iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(TruncatedSeries::new)
    }

    pub fn reproduces(&self, s: &TruncatedSeries) -> bool {
        self.expand(s.truncation()).as_ref() == Some(s)
    }

    /// Denominator `1`.
    pub fn is_polynomial(&self) -> bool {
        self.denominator.len() == 1 && self.denominator[0].is_one()
    }
}

impl fmt::Display for RationalSeriesForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", format_polynomial(&self.numerator, "z"))
        } else {
            write!(f, "({}) / ({})", format_polynomial(&self.numerator, "z"), format_polynomial(&self.denominator, "z"))
        }
    }
}

/// `2*z - z^2` style, lowest degree first.
pub fn format_polynomial(coeffs: &[BigInt], var: &str) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Find the smallest period `d ≤ dmax`, then the smallest preperiod
/// `D' ≤ max_preperiod`, with `c_{n+d} = c_n` for `D' ≤ n ≤ N - d`. At least
/// two full periods must be visible (`D' + 2d - 1 ≤ N`). Returns
/// `p(z)/(1 - z^d)`, or a polynomial when the periodic part is zero.
pub fn fit_rational(s: &TruncatedSeries, max_preperiod: usize, dmax: usize) -> Option<RationalSeriesForm> {
    let n = s.truncation();
    let c = s.coeffs();
    for d in 1..=dmax {
        for pre in 0..=max_preperiod {
            if pre + 2 * d > n + 1 {
                break;
            }
            if (pre..=n - d).all(|k| c[k + d] == c[k]) {
                let form = if (pre..=n).all(|k| c[k].is_zero()) {
                    RationalSeriesForm::new(c[..pre.max(1)].to_vec(), vec![BigInt::one()])
                } else {
                    let num: Vec<BigInt> =
                        (0..pre + d).map(|k| if k >= d { &c[k] - &c[k - d] } else { c[k].clone() }).collect();
                    let mut den = vec![BigInt::zero(); d + 1];
                    den[0] = BigInt::one();
                    den[d] = -BigInt::one();
                    RationalSeriesForm::new(num, den)
                };
                return form.reproduces(s).then_some(form);
            }
        }
    }
    None
}

/// Solve `q·s ≡ p (mod z^{N+1})` with `deg p ≤ degp`, `deg q ≤ degq` and
/// `q(0) ≠ 0`, trying denominators of increasing degree. The result is the
/// primitive integer form with `q(0) > 0`.
pub fn fit_rational_general(s: &TruncatedSeries, degp: usize, degq: usize) -> Option<RationalSeriesForm> {
    let n = s.truncation();
    if degp + degq >= n {
        return None;
    }
    let field = FieldSpec::Rationals;
    let c = s.coeffs();
    let rat = |x: &BigInt| Scalar::Q(BigRational::from_integer(x.clone()));
    for k in 0..=degq {
        // unknowns q_1..q_k; equations for degrees degp+1..=N
        let mut rows = Vec::new();
        for m in degp + 1..=n {
            let mut row: Vec<Scalar> = (1..=k).map(|j| if m >= j { rat(&c[m - j]) } else { field.zero() }).collect();
            row.push(field.neg(&rat(&c[m])));
            rows.push(row);
        }
        let aug = Matrix::from_rows(field, k + 1, rows);
        let (r, pivots) = aug.rref();
        if pivots.contains(&k) {
            continue;
        }
        let mut q: Vec<BigRational> = vec![BigRational::one()];
        q.extend((0..k).map(|_| BigRational::zero()));
        for (row, &pc) in pivots.iter().enumerate() {
            if let Scalar::Q(v) = r.get(row, k) {
                q[pc + 1] = v.clone();
            }
        }
        let p: Vec<BigRational> = (0..=degp)
            .map(|m| (0..=k.min(m)).map(|j| &q[j] * BigRational::from_integer(c[m - j].clone())).sum())
            .collect();
        let lcm = p.iter().chain(&q).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scale = |v: &[BigRational]| -> Vec<BigInt> { v.iter().map(|x| (x * &lcm).to_integer()).collect() };
        let (mut pi, mut qi) = (scale(&p), scale(&q));
        let g = pi.iter().chain(&qi).fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_zero() && !g.is_one() {
            pi.iter_mut().for_each(|x| *x /= &g);
            qi.iter_mut().for_each(|x| *x /= &g);
        }
        let form = RationalSeriesForm::new(pi, qi);
        if form.reproduces(s) {
            return Some(form);
        }
    }
    None
}

/// Integers as JSON numbers when they fit in `i64`, as strings otherwise.
pub fn bigint_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

pub fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&bigint_json(x))?;
    }
    seq.end()
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ser_bigints(&self.coeffs, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_i64(v)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn lex_examples() {
        assert_eq!(s(&[1, 2, 3]).lex_compare(&s(&[1, 2, 3])).unwrap().order, LexOrder::EqualUpToTruncation);
        let v = s(&[1, 3, 0]).lex_compare(&s(&[1, 2, 9])).unwrap();
        assert_eq!(v, LexVerdict { order: LexOrder::Greater, first_difference: Some(1) });
        assert_eq!(v.to_string(), "GREATER (lex, first difference at degree 1)");
        assert_eq!(s(&[1, 2, 2]).lex_compare(&s(&[1, 2, 3])).unwrap().order, LexOrder::Less);
        assert!(matches!(s(&[1]).lex_compare(&s(&[1, 2])), Err(Error::TruncationMismatch { .. })));
    }

    #[test]
    fn coefficientwise_examples() {
        assert!(s(&[1, 1, 1]).coefficientwise_leq(&s(&[1, 2, 1])).unwrap());
        assert!(!s(&[1, 3, 0]).coefficientwise_leq(&s(&[1, 2, 9])).unwrap());
        assert!(s(&[4, 5]).coefficientwise_leq(&s(&[4, 5])).unwrap());
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(s(&[1, -2, 0, 0]).invert().unwrap(), s(&[1, 2, 4, 8]));
        assert_eq!(s(&[1, 1, 0, 0]).mul(&s(&[1, -1, 0, 0])), s(&[1, 0, -1, 0]));
        let a = s(&[1, 2, 3, 4, 5, 6]);
        assert_eq!(a.mul(&a.invert().unwrap()), TruncatedSeries::one(5));
        assert!(matches!(s(&[2, 1]).invert(), Err(Error::NotInvertible { .. })));
        assert_eq!(s(&[-1, 1, 0]).invert().unwrap(), s(&[-1, -1, -1]));
        assert_eq!(series_arith(&s(&[1, 2]), &s(&[1, 2, 3]), SeriesOp::Add).unwrap(), s(&[2, 4]));
    }

    #[test]
    fn periodic_fits() {
        let f = fit_rational(&s(&[1, 2, 2, 2, 2, 2]), 3, 3).unwrap();
        assert_eq!(f, RationalSeriesForm::new(ints(&[1, 1]), ints(&[1, -1])));
        assert_eq!(f.to_string(), "(1 + z) / (1 - z)");
        let p = fit_rational(&s(&[1, 0, 0, 0, 0]), 3, 3).unwrap();
        assert_eq!(p, RationalSeriesForm::new(ints(&[1]), ints(&[1])));
        assert_eq!(fit_rational(&s(&[1, 2, 4, 8, 16]), 3, 3), None);
    }

    #[test]
    fn general_fits() {
        let poly = s(&[0, 2, -1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let f = fit_rational_general(&poly, 2, 0).unwrap();
        assert_eq!(f, RationalSeriesForm::new(ints(&[0, 2, -1]), ints(&[1])));
        let geo = s(&[0, 1, 1, 1, 1, 1, 1, 1]);
        let f = fit_rational_general(&geo, 1, 1).unwrap();
        assert_eq!(f, RationalSeriesForm::new(ints(&[0, 1]), ints(&[1, -1])));
        let fib = s(&[1, 1, 2, 3, 5, 8, 13, 21, 34]);
        let f = fit_rational_general(&fib, 1, 2).unwrap();
        assert_eq!(f.denominator, ints(&[1, -1, -1]));
        assert!(f.reproduces(&fib));
    }

    #[test]
    fn csv_round_trip() {
        let a = s(&[1, -3, 0, 12]);
        assert_eq!(TruncatedSeries::from_csv(&a.to_csv()).unwrap(), a);
        assert_eq!(TruncatedSeries::from_csv("1\n2\n3\n").unwrap(), s(&[1, 2, 3]));
        assert!(TruncatedSeries::from_csv("1,x").is_err());
    }
}
