use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, Word};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Exact conversion of a big integer (rounded to `p` bits).
pub fn bigint_to_float(n: &BigInt, p: usize) -> BigFloat {
    if n.is_zero() {
        return BigFloat::from_word(0, p);
    }
    let words: Vec<Word> = n.magnitude().to_u64_digits().into_iter().map(|w| w as Word).collect();
    let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
    let e = (words.len() * Word::BITS as usize) as astro_float::Exponent;
    let mut x = BigFloat::from_words(&words, sign, e);
    if x.mantissa_max_bit_len().is_some_and(|b| b > p) {
        x.set_precision(p, RM).expect("precision is valid");
    }
    x
}

pub fn rational_to_float(r: &Rational, p: usize) -> BigFloat {
    let n = bigint_to_float(r.numer(), p + 8);
    if r.denom() == &BigInt::from(1) {
        return n.add(&BigFloat::from_word(0, p), p, RM);
    }
    n.div(&bigint_to_float(r.denom(), p + 8), p, RM)
}

/// Nearest `f64`, saturating to infinity outside its range.
pub fn to_f64(x: &BigFloat) -> f64 {
    let Some((m, _, s, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let Some(&top) = m.last() else {
        return 0.0;
    };
    if top == 0 {
        return 0.0;
    }
    let mant = top as f64 / 2f64.powi(Word::BITS as i32);
    let v = mant * 2f64.powi(e.clamp(-1100, 1100));
    if s == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Base-2 logarithm of `|x|`, finite for nonzero `x` of any magnitude.
pub fn log2_abs(x: &BigFloat) -> f64 {
    let Some((m, _, _, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    match m.last() {
        Some(&top) if top != 0 => (top as f64 / 2f64.powi(Word::BITS as i32)).log2() + e as f64,
        _ => f64::NEG_INFINITY,
    }
}

pub fn format_float(x: &BigFloat, cc: &mut Consts) -> String {
    x.format(Radix::Dec, RM, cc).unwrap_or_else(|_| "NaN".into())
}

#[derive(Clone, Debug)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Complex { re, im }
    }

    pub fn zero(p: usize) -> Self {
        Complex::new(BigFloat::from_word(0, p), BigFloat::from_word(0, p))
    }

    pub fn one(p: usize) -> Self {
        Complex::new(BigFloat::from_word(1, p), BigFloat::from_word(0, p))
    }

    pub fn real(x: BigFloat, p: usize) -> Self {
        Complex::new(x, BigFloat::from_word(0, p))
    }

    pub fn from_i64(re: i64, im: i64, p: usize) -> Self {
        Complex::new(BigFloat::from_i64(re, p), BigFloat::from_i64(im, p))
    }

    pub fn from_rational(r: &Rational, p: usize) -> Self {
        Complex::real(rational_to_float(r, p), p)
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        Complex::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM))
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        Complex::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM))
    }

    pub fn neg(&self) -> Self {
        Complex::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        let rr = self.re.mul(&o.re, p, RM);
        let ii = self.im.mul(&o.im, p, RM);
        let ri = self.re.mul(&o.im, p, RM);
        let ir = self.im.mul(&o.re, p, RM);
        Complex::new(rr.sub(&ii, p, RM), ri.add(&ir, p, RM))
    }

    pub fn scale(&self, x: &BigFloat, p: usize) -> Self {
        Complex::new(self.re.mul(x, p, RM), self.im.mul(x, p, RM))
    }

    pub fn norm_sqr(&self, p: usize) -> BigFloat {
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self, p: usize) -> BigFloat {
        self.norm_sqr(p).sqrt(p, RM)
    }

    pub fn recip(&self, p: usize) -> Self {
        let n = self.norm_sqr(p);
        Complex::new(self.re.div(&n, p, RM), self.im.neg().div(&n, p, RM))
    }

    pub fn div(&self, o: &Self, p: usize) -> Self {
        self.mul(&o.recip(p), p)
    }

    pub fn powi(&self, n: i64, p: usize) -> Self {
        let mut base = if n < 0 { self.recip(p) } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Complex::one(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, p);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }

    /// `|self - other| / |other|`, or `|self|` when `other` is zero.
    pub fn rel_diff(&self, other: &Self, p: usize) -> f64 {
        let d = self.sub(other, p).abs(p);
        if other.is_zero() {
            return to_f64(&d);
        }
        let l = log2_abs(&d) - log2_abs(&other.abs(p));
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            l.exp2()
        }
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        if im < 0.0 {
            write!(f, "{re:e} - {:e}i", -im)
        } else {
            write!(f, "{re:e} + {im:e}i")
        }
    }
}

pub(crate) fn parse_float(s: &str, p: usize, cc: &mut Consts) -> Result<BigFloat> {
    let x = BigFloat::parse(s.trim(), Radix::Dec, p, RM, cc);
    if x.is_nan() {
        return Err(Error::Parse(format!("`{s}` is not a decimal number")));
    }
    Ok(x)
}
