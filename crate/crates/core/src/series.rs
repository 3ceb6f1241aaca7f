//! Truncated Laurent series in `q` with exact rational coefficients.
//!
//! A [`LaurentSeries`] stores the dense coefficient window `v <= n < P`, where
//! `v` is the valuation and `P` the (exclusive) precision. Coefficients below
//! `v` are zero; coefficients at or above `P` are unknown, and asking for them
//! is an error. Every operation derives its output precision from the input
//! precisions alone, so a coefficient is only ever reported when it is
//! provably correct.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    valuation: i64,
    precision: i64,
    // coeffs[0] is nonzero unless the series is zero, in which case the
    // vector is empty and valuation == precision.
    coeffs: Vec<Rational>,
}

/// Result of comparing two series on their common window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub equal: bool,
    /// Compared exponents `lo <= n < hi`.
    pub window: (i64, i64),
    pub first_mismatch: Option<i64>,
}

impl LaurentSeries {
    /// Builds the series `sum coeffs[i] q^(start + i) + O(q^precision)`.
    ///
    /// `coeffs` may be shorter than the window; missing entries are zero.
    pub fn new(start: i64, mut coeffs: Vec<Rational>, precision: i64) -> Result<Self> {
        let len = precision - start;
        if len < 0 || coeffs.len() as i64 > len {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients from q^{start} do not fit below q^{precision}",
                coeffs.len()
            )));
        }
        coeffs.resize(len as usize, Rational::zero());
        let mut s = LaurentSeries {
            valuation: start,
            precision,
            coeffs,
        };
        s.normalize();
        Ok(s)
    }

    /// Series whose precision is exactly the end of `coeffs`.
    pub fn from_coefficients(start: i64, coeffs: Vec<Rational>) -> Self {
        let precision = start + coeffs.len() as i64;
        Self::new(start, coeffs, precision).expect("window is exact")
    }

    pub fn from_integers(start: i64, coeffs: &[i64]) -> Self {
        Self::from_coefficients(start, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_fn(start: i64, precision: i64, f: impl FnMut(i64) -> Rational) -> Self {
        let coeffs = (start..precision.max(start)).map(f).collect();
        Self::from_coefficients(start, coeffs)
    }

    pub fn zero(precision: i64) -> Self {
        LaurentSeries {
            valuation: precision,
            precision,
            coeffs: Vec::new(),
        }
    }

    pub fn one(precision: i64) -> Self {
        Self::monomial(rat(1), 0, precision)
    }

    /// `c q^n + O(q^precision)`.
    pub fn monomial(c: Rational, n: i64, precision: i64) -> Self {
        if n >= precision {
            return Self::zero(precision);
        }
        let mut coeffs = vec![Rational::zero(); (precision - n) as usize];
        coeffs[0] = c;
        let mut s = LaurentSeries {
            valuation: n,
            precision,
            coeffs,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.valuation += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.valuation = self.precision;
            }
        }
    }

    /// Index of the first nonzero coefficient, or the precision for a series
    /// that is zero to its precision.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Number of coefficients known past the valuation.
    pub fn relative_precision(&self) -> i64 {
        self.precision - self.valuation
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    /// The stored coefficients, starting at the valuation.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `(n, c(n))` over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        let v = self.valuation;
        self.coeffs.iter().enumerate().map(move |(i, c)| (v + i as i64, c))
    }

    pub fn coefficient(&self, n: i64) -> Result<Rational> {
        self.coefficient_ref(n).map(|c| c.cloned().unwrap_or_else(Rational::zero))
    }

    /// `Ok(None)` stands for an exact zero below the valuation.
    pub fn coefficient_ref(&self, n: i64) -> Result<Option<&Rational>> {
        if n >= self.precision {
            return Err(Error::PrecisionExceeded {
                index: n,
                precision: self.precision,
            });
        }
        if n < self.valuation {
            return Ok(None);
        }
        Ok(Some(&self.coeffs[(n - self.valuation) as usize]))
    }

    /// Coefficient for an index already known to lie below the precision.
    pub(crate) fn c(&self, n: i64) -> Rational {
        debug_assert!(n < self.precision);
        if n < self.valuation {
            Rational::zero()
        } else {
            self.coeffs[(n - self.valuation) as usize].clone()
        }
    }

    pub fn truncate(&self, precision: i64) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        if precision <= self.valuation {
            return Self::zero(precision);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate((precision - self.valuation) as usize);
        LaurentSeries {
            valuation: self.valuation,
            precision,
            coeffs,
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            valuation: self.valuation + k,
            precision: self.precision + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.precision);
        }
        LaurentSeries {
            valuation: self.valuation,
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(i64, &Rational) -> Rational) -> Self {
        let coeffs = self.iter().map(|(n, c)| f(n, c)).collect();
        Self::new(self.valuation, coeffs, self.precision).expect("same window")
    }

    /// Coefficient-wise sum; precision is the smaller of the two.
    pub fn add(&self, other: &Self) -> Self {
        let precision = self.precision.min(other.precision);
        let start = self.valuation.min(other.valuation).min(precision);
        let mut coeffs = vec![Rational::zero(); (precision - start) as usize];
        for s in [self, other] {
            for (n, c) in s.iter() {
                if n >= precision {
                    break;
                }
                coeffs[(n - start) as usize] += c;
            }
        }
        Self::new(start, coeffs, precision).expect("window fits")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            valuation: self.valuation,
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Cauchy product. Output precision is `min(P_a + v_b, P_b + v_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        let precision =
            (self.precision + other.valuation).min(other.precision + self.valuation);
        if self.is_zero() || other.is_zero() {
            return Self::zero(precision);
        }
        let start = self.valuation + other.valuation;
        let len = (precision - start).max(0) as usize;
        if len == 0 {
            return Self::zero(precision);
        }
        let coeffs = convolve(&self.coeffs, &other.coeffs, len);
        Self::new(start, coeffs, precision).expect("window fits")
    }

    /// `self^e` by repeated squaring; `self^0` is 1 to the relative precision
    /// of `self`.
    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one(self.relative_precision().max(1));
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result.expect("e > 0")
    }

    /// `1 / self` to absolute precision `target`.
    ///
    /// The inverse has valuation `-v`; a series known to relative precision
    /// `R` determines its inverse only below `q^(R - v)`.
    pub fn invert(&self, target: i64) -> Result<Self> {
        let lead = self.leading_coefficient().ok_or(Error::ZeroLeadingCoefficient)?;
        let v = self.valuation;
        let max_target = self.precision - 2 * v;
        if target > max_target {
            return Err(Error::InsufficientPrecision(format!(
                "inverse known below q^{max_target}, q^{target} requested"
            )));
        }
        let start = -v;
        if target <= start {
            return Err(Error::InsufficientPrecision(format!(
                "target q^{target} is at or below the inverse's valuation q^{start}"
            )));
        }
        let len = (target - start) as usize;
        let coeffs = invert_power_series(&self.coeffs, lead, len);
        Self::new(start, coeffs, target)
    }

    /// `self / other` to absolute precision `target`.
    pub fn div(&self, other: &Self, target: i64) -> Result<Self> {
        let vb = other.valuation;
        if other.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        if target > self.precision - vb {
            return Err(Error::InsufficientPrecision(format!(
                "quotient known below q^{}, q^{target} requested",
                self.precision - vb
            )));
        }
        let inv_target = (target - self.valuation).max(-vb + 1);
        let inv = other.invert(inv_target)?;
        let q = self.mul(&inv);
        if q.precision < target {
            return Err(Error::InsufficientPrecision(format!(
                "quotient known below q^{}, q^{target} requested",
                q.precision
            )));
        }
        Ok(q.truncate(target))
    }

    /// Applies `D^j = (q d/dq)^j`: the coefficient of `q^n` is multiplied by `n^j`.
    pub fn d_power(&self, j: u32) -> Self {
        if j == 0 {
            return self.clone();
        }
        self.map_coefficients(|n, c| c * int(BigInt::from(n).pow(j)))
    }

    /// Terms with exponent `<= 0`.
    pub fn principal_part(&self) -> Vec<(i64, Rational)> {
        self.iter()
            .take_while(|(n, _)| *n <= 0)
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n, c.clone()))
            .collect()
    }

    /// Compares on the common window (everything below both precisions).
    pub fn equals_to_precision(&self, other: &Self) -> Comparison {
        let hi = self.precision.min(other.precision);
        let lo = self.valuation.min(other.valuation).min(hi);
        let first_mismatch = (lo..hi).find(|&n| self.c(n) != other.c(n));
        Comparison {
            equal: first_mismatch.is_none(),
            window: (lo, hi),
            first_mismatch,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Least common multiple of the denominators.
fn common_denominator(xs: &[Rational]) -> BigInt {
    xs.iter()
        .fold(BigInt::one(), |acc, x| if x.denom().is_one() { acc } else { acc.lcm(x.denom()) })
}

fn scaled_numerators(xs: &[Rational], den: &BigInt) -> Vec<BigInt> {
    if den.is_one() {
        return xs.iter().map(|x| x.numer().clone()).collect();
    }
    xs.iter().map(|x| x.numer() * (den / x.denom())).collect()
}

/// First `len` terms of the product of two dense coefficient vectors.
///
/// Both operands are brought to integer numerators over a common denominator,
/// so the inner loop is pure big-integer arithmetic.
fn convolve(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let da = common_denominator(a);
    let db = common_denominator(b);
    let ia = scaled_numerators(&a[..a.len().min(len)], &da);
    let ib = scaled_numerators(&b[..b.len().min(len)], &db);
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in ia.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in ib.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    let den = da * db;
    if den.is_one() {
        out.into_iter().map(int).collect()
    } else {
        out.into_iter().map(|c| Rational::new(c, den.clone())).collect()
    }
}

/// First `len` coefficients of `1 / a` for a power series `a` with `a[0] = lead != 0`.
fn invert_power_series(a: &[Rational], lead: &Rational, len: usize) -> Vec<Rational> {
    let den = common_denominator(&a[..a.len().min(len)]);
    let ia = scaled_numerators(&a[..a.len().min(len)], &den);
    let a0 = &ia[0];
    // 1/a = den / A with A integral; a unit leading term keeps everything integral.
    if a0.abs().is_one() {
        let mut b: Vec<BigInt> = Vec::with_capacity(len);
        b.push(a0.clone());
        for n in 1..len {
            let mut s = BigInt::zero();
            for k in 1..=n.min(ia.len() - 1) {
                if !ia[k].is_zero() {
                    s += &ia[k] * &b[n - k];
                }
            }
            // a0 = +-1, so dividing by a0 is multiplying by it.
            b.push(-(s * a0));
        }
        return b.into_iter().map(|x| int(x * &den)).collect();
    }
    let inv_lead = lead.recip();
    let mut b: Vec<Rational> = Vec::with_capacity(len);
    b.push(inv_lead.clone());
    for n in 1..len {
        let mut s = Rational::zero();
        for k in 1..=n.min(a.len() - 1) {
            if !a[k].is_zero() {
                s += &a[k] * &b[n - k];
            }
        }
        b.push(-(s * &inv_lead));
    }
    b
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: Self) -> LaurentSeries {
        LaurentSeries::add(self, rhs)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: Self) -> LaurentSeries {
        LaurentSeries::sub(self, rhs)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: Self) -> LaurentSeries {
        LaurentSeries::mul(self, rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries::neg(self)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.iter() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match n {
                0 => write!(f, "{}", format_rational(&mag))?,
                _ => {
                    if !unit {
                        write!(f, "{}*", format_rational(&mag))?;
                    }
                    if n == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                }
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(q^{})", self.precision)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    valuation: i64,
    precision: i64,
    coefficients: Vec<String>,
}

impl Serialize for LaurentSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            valuation: self.valuation,
            precision: self.precision,
            coefficients: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SeriesJson::deserialize(d)?;
        if raw.precision - raw.valuation != raw.coefficients.len() as i64 {
            return Err(D::Error::custom(format!(
                "expected {} coefficients, found {}",
                raw.precision - raw.valuation,
                raw.coefficients.len()
            )));
        }
        let coeffs = raw
            .coefficients
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        LaurentSeries::new(raw.valuation, coeffs, raw.precision).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn s(start: i64, c: &[i64]) -> LaurentSeries {
        LaurentSeries::from_integers(start, c)
    }

    #[test]
    fn add_cancels_leading_terms() {
        // (q^-1 + 1) + (-q^-1 + q), both to O(q^3)
        let a = LaurentSeries::new(-1, vec![rat(1), rat(1)], 3).unwrap();
        let b = LaurentSeries::new(-1, vec![rat(-1), rat(0), rat(1)], 3).unwrap();
        let c = a.add(&b);
        assert_eq!(c, s(0, &[1, 1, 0]));
        assert_eq!(c.valuation(), 0);
        assert_eq!(c.precision(), 3);
        assert_eq!(a.add(&LaurentSeries::zero(3)), a);
    }

    #[test]
    fn mul_hand_expansion() {
        // (q^-1 + 1)(q - 1) = -q^-1 + q
        let a = s(-1, &[1, 1, 0, 0, 0]);
        let b = s(0, &[-1, 1, 0, 0, 0]);
        let c = a.mul(&b);
        assert_eq!(c.valuation(), -1);
        assert_eq!(c.precision(), 4);
        assert_eq!(c.coefficients(), &[rat(-1), rat(0), rat(1), rat(0), rat(0)]);
    }

    #[test]
    fn mul_precision_contract() {
        let a = LaurentSeries::new(2, vec![rat(1)], 10).unwrap();
        let b = LaurentSeries::new(-1, vec![rat(3)], 4).unwrap();
        let c = a.mul(&b);
        assert_eq!(c.precision(), (10 - 1i64).min(4 + 2));
        assert_eq!(c.valuation(), 1);
    }

    #[test]
    fn invert_geometric() {
        let a = s(0, &[1, -1, 0, 0, 0, 0]);
        let b = a.invert(6).unwrap();
        assert_eq!(b, s(0, &[1, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn invert_errors() {
        assert_eq!(
            LaurentSeries::zero(5).invert(3),
            Err(Error::ZeroLeadingCoefficient)
        );
        let a = s(0, &[1, 1, 1]);
        assert!(matches!(a.invert(4), Err(Error::InsufficientPrecision(_))));
        let b = s(1, &[1, 2, 3]);
        assert!(b.invert(2).is_ok());
        assert!(b.invert(3).is_err());
    }

    #[test]
    fn invert_nonunit_leading() {
        let a = LaurentSeries::from_coefficients(-2, vec![frac(2, 3), rat(5), frac(-1, 7), rat(0)]);
        let b = a.invert(4).unwrap();
        let one = a.mul(&b);
        assert!(one.equals_to_precision(&LaurentSeries::one(one.precision())).equal);
    }

    #[test]
    fn div_identity() {
        let a = s(-1, &[3, 1, 4, 1, 5, 9, 2]);
        let q = a.div(&a, 5).unwrap();
        assert_eq!(q, LaurentSeries::one(5));
    }

    #[test]
    fn d_power_rules() {
        let a = s(-1, &[1, 7, 2, 3]);
        assert_eq!(a.d_power(0), a);
        assert_eq!(a.d_power(1), s(-1, &[-1, 0, 2, 6]));
        assert_eq!(a.d_power(2).d_power(3), a.d_power(5));
        assert!(s(0, &[5, 0, 0]).d_power(1).is_zero());
    }

    #[test]
    fn shift_pow_truncate() {
        let one = LaurentSeries::one(3);
        let s1 = one.shift(-1);
        assert_eq!(s1.valuation(), -1);
        assert_eq!(s1.precision(), 2);
        let p = s(0, &[1, -1, 0, 0]).pow(2);
        assert_eq!(p, s(0, &[1, -2, 1, 0]));
        assert_eq!(p.truncate(2), s(0, &[1, -2]));
        assert!(p.truncate(-1).is_zero());
    }

    #[test]
    fn coefficient_access() {
        let a = s(-1, &[1, 2]);
        assert_eq!(a.coefficient(-5).unwrap(), rat(0));
        assert_eq!(a.coefficient(0).unwrap(), rat(2));
        assert_eq!(
            a.coefficient(1),
            Err(Error::PrecisionExceeded { index: 1, precision: 1 })
        );
    }

    #[test]
    fn comparison_reports_window_and_mismatch() {
        let a = s(0, &[1, 2, 3, 4]);
        let b = s(0, &[1, 2, 5]);
        let c = a.equals_to_precision(&b);
        assert_eq!(c.window, (0, 3));
        assert_eq!(c.first_mismatch, Some(2));
        assert!(!c.equal);
    }

    #[test]
    fn json_format() {
        let a = LaurentSeries::from_coefficients(-1, vec![rat(1), frac(-3, 4), rat(0)]);
        let j = a.to_json();
        assert_eq!(j, r#"{"valuation":-1,"precision":2,"coefficients":["1","-3/4","0"]}"#);
        assert_eq!(LaurentSeries::from_json(&j).unwrap(), a);
        assert!(LaurentSeries::from_json(r#"{"valuation":0,"precision":2,"coefficients":["1"]}"#).is_err());
        let z = LaurentSeries::zero(4);
        assert_eq!(LaurentSeries::from_json(&z.to_json()).unwrap(), z);
    }

    #[test]
    fn display() {
        let a = s(-1, &[1, 0, -24, 3]);
        assert_eq!(a.to_string(), "q^-1 - 24*q + 3*q^2 + O(q^3)");
        assert_eq!(LaurentSeries::zero(2).to_string(), "O(q^2)");
    }
}
