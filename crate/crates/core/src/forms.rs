//! Classical modular forms on SL2(Z) and echelon bases of `M_2k` and `S_2k`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hecke;
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::rational::{int, rat, Rational};
use crate::series::LaurentSeries;

/// A q-expansion together with its weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularFormSeries {
    pub weight: i64,
    pub series: LaurentSeries,
}

impl ModularFormSeries {
    pub fn new(weight: i64, series: LaurentSeries) -> Self {
        ModularFormSeries { weight, series }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Holomorphic,
    Cuspidal,
    /// Weakly holomorphic forms with a pole of order at most `max_pole` at the cusp.
    WeaklyHolomorphic { max_pole: i64 },
}

/// Reduced echelon basis: element `i` is `q^leading[i] + O(q^P)` with zero
/// coefficients at every other leading exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormBasis {
    pub weight: i64,
    pub kind: FormKind,
    pub elements: Vec<LaurentSeries>,
}

impl FormBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading(&self) -> Vec<i64> {
        self.elements.iter().map(LaurentSeries::valuation).collect()
    }

    pub fn precision(&self) -> Option<i64> {
        self.elements.iter().map(LaurentSeries::precision).min()
    }

    pub fn form(&self, i: usize) -> ModularFormSeries {
        ModularFormSeries::new(self.weight, self.elements[i].clone())
    }

    /// Coordinates of `f` read off at the leading exponents, after checking
    /// that `f` minus the combination vanishes on the common window.
    pub fn coordinates(&self, f: &LaurentSeries) -> Result<Vec<Rational>> {
        let coords: Vec<Rational> = self
            .elements
            .iter()
            .map(|b| f.coefficient(b.valuation()))
            .collect::<Result<_>>()?;
        let mut residual = f.clone();
        for (b, c) in self.elements.iter().zip(&coords) {
            residual = residual.sub(&b.scale(c));
        }
        if !residual.is_zero() {
            return Err(Error::NotInSpan {
                index: residual.valuation(),
            });
        }
        Ok(coords)
    }
}

/// Bernoulli number `B_k` with `B_1 = -1/2`.
pub fn bernoulli(k: u32) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(k as usize + 1);
    b.push(Rational::one());
    for n in 1..=k as u64 {
        let s = (0..n).fold(Rational::zero(), |acc, j| {
            acc + int(binomial(BigInt::from(n + 1), BigInt::from(j))) * &b[j as usize]
        });
        b.push(-s / rat(n as i64 + 1));
    }
    b.pop().expect("B_0 present")
}

/// `sigma_r(n)`, the sum of `d^r` over the divisors of `n`.
pub fn sigma(r: u32, n: u64) -> BigInt {
    assert!(n > 0, "sigma is defined for positive n");
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(r);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(r);
            }
        }
        d += 1;
    }
    s
}

/// `sigma_r(n)` for `0 <= n < len` (entry 0 is unused and set to 0).
pub fn sigma_table(r: u32, len: usize) -> Vec<BigInt> {
    let mut t = vec![BigInt::zero(); len];
    for d in 1..len {
        let p = BigInt::from(d).pow(r);
        for m in (d..len).step_by(d) {
            t[m] += &p;
        }
    }
    t
}

pub fn dimension(weight: i64, kind: FormKind) -> usize {
    let m = |w: i64| -> usize {
        if w < 0 || w % 2 != 0 {
            0
        } else if w % 12 == 2 {
            (w / 12) as usize
        } else {
            (w / 12) as usize + 1
        }
    };
    match kind {
        FormKind::Holomorphic => m(weight),
        FormKind::Cuspidal => {
            if weight >= 4 {
                m(weight) - 1
            } else {
                0
            }
        }
        FormKind::WeaklyHolomorphic { max_pole } => m(weight + 12 * max_pole),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum MemoKey {
    Delta,
    Eisenstein(i64),
    Basis(i64, FormKind),
    Named(&'static str),
}

type Memo = RwLock<HashMap<MemoKey, Vec<LaurentSeries>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Looks up a cached value known to at least `precision`, computing and
/// storing it otherwise. Cached entries are kept at the highest precision
/// seen and truncated on the way out.
pub(crate) fn memoized(
    key: MemoKey,
    precision: i64,
    compute: impl FnOnce() -> Result<Vec<LaurentSeries>>,
) -> Result<Vec<LaurentSeries>> {
    let covers = |v: &Vec<LaurentSeries>| v.iter().all(|s| s.precision() >= precision);
    if let Some(v) = memo().read().expect("memo lock").get(&key) {
        if covers(v) {
            return Ok(v.iter().map(|s| s.truncate(precision)).collect());
        }
    }
    let v = compute()?;
    let mut w = memo().write().expect("memo lock");
    let better = w.get(&key).is_none_or(|old| {
        old.iter().map(LaurentSeries::precision).min() < v.iter().map(LaurentSeries::precision).min()
    });
    if better {
        w.insert(key, v.clone());
    }
    Ok(v.iter().map(|s| s.truncate(precision)).collect())
}

/// Normalized Eisenstein series `E_weight` to precision `precision`.
pub fn eisenstein(weight: i64, precision: i64) -> Result<ModularFormSeries> {
    if weight < 4 || weight % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "Eisenstein series need even weight >= 4, got {weight}"
        )));
    }
    let v = memoized(MemoKey::Eisenstein(weight), precision, || {
        let len = precision.max(1) as usize;
        let factor = -rat(2 * weight) / bernoulli(weight as u32);
        let sig = sigma_table(weight as u32 - 1, len);
        let coeffs = (0..len)
            .map(|n| if n == 0 { Rational::one() } else { &factor * int(sig[n].clone()) })
            .collect();
        Ok(vec![LaurentSeries::from_coefficients(0, coeffs)])
    })?;
    Ok(ModularFormSeries::new(weight, v.into_iter().next().expect("one series")))
}

/// `Delta = q prod (1 - q^n)^24`, computed from Euler's pentagonal series.
pub fn delta(precision: i64) -> ModularFormSeries {
    let v = memoized(MemoKey::Delta, precision, || {
        let len = (precision - 1).max(0) as usize;
        Ok(vec![LaurentSeries::new(1, pentagonal_power(24, len), precision.max(1))
            .expect("window fits")])
    })
    .expect("delta construction is infallible");
    ModularFormSeries::new(12, v.into_iter().next().expect("one series"))
}

/// First `len` coefficients of `prod (1 - q^n)^k`.
///
/// Uses the power recurrence `n b_n = sum_i ((k+1) i - n) a_i b_{n-i}` for
/// `b = a^k`, where `a` is the sparse pentagonal series.
fn pentagonal_power(k: i64, len: usize) -> Vec<Rational> {
    let mut pent: Vec<(usize, i64)> = Vec::new();
    for j in 1i64.. {
        let e1 = (j * (3 * j - 1) / 2) as usize;
        if e1 >= len {
            break;
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        pent.push((e1, sign));
        let e2 = (j * (3 * j + 1) / 2) as usize;
        if e2 < len {
            pent.push((e2, sign));
        }
    }
    pent.sort_unstable();
    let mut b: Vec<BigInt> = Vec::with_capacity(len);
    if len > 0 {
        b.push(BigInt::one());
    }
    for n in 1..len {
        let mut s = BigInt::zero();
        for &(i, a) in pent.iter().take_while(|(i, _)| *i <= n) {
            let w = ((k + 1) * i as i64 - n as i64) * a;
            s += &b[n - i] * w;
        }
        b.push(s / BigInt::from(n));
    }
    b.into_iter().map(int).collect()
}

/// `j = E_4^3 / Delta`, known below `q^precision`.
pub fn j_function(precision: i64) -> ModularFormSeries {
    let e4 = eisenstein(4, precision + 2).expect("weight 4").series;
    let d = delta(precision + 2).series;
    let j = e4.pow(3).div(&d, precision).expect("Delta is a unit times q");
    ModularFormSeries::new(0, j)
}

/// Brings a family of series into reduced echelon form with leading
/// coefficient 1, dropping dependent members.
pub(crate) fn reduce_echelon(family: Vec<LaurentSeries>) -> Vec<LaurentSeries> {
    let mut rows: Vec<LaurentSeries> = Vec::new();
    for mut f in family {
        for r in &rows {
            if f.is_zero() {
                break;
            }
            let v = r.valuation();
            if v < f.precision() {
                let c = f.c(v);
                if !c.is_zero() {
                    f = f.sub(&r.scale(&c));
                }
            }
        }
        if f.is_zero() {
            continue;
        }
        let lead = f.leading_coefficient().expect("nonzero").recip();
        f = f.scale(&lead);
        let v = f.valuation();
        for r in rows.iter_mut() {
            if v < r.precision() {
                let c = r.c(v);
                if !c.is_zero() {
                    *r = r.sub(&f.scale(&c));
                }
            }
        }
        rows.push(f);
    }
    rows.sort_by_key(LaurentSeries::valuation);
    rows
}

/// Echelon basis of `M_weight`, `S_weight`, or a weakly holomorphic slice,
/// known below `q^precision`.
pub fn basis(weight: i64, kind: FormKind, precision: i64) -> Result<FormBasis> {
    if let FormKind::WeaklyHolomorphic { max_pole } = kind {
        return crate::whbasis::wh_slice_basis(weight, max_pole, precision);
    }
    let d = dimension(weight, kind);
    if d as i64 > precision {
        return Err(Error::InsufficientPrecision(format!(
            "a basis of dimension {d} needs precision at least {d}"
        )));
    }
    let elements = memoized(MemoKey::Basis(weight, kind), precision, || {
        let range = match kind {
            FormKind::Cuspidal => 1..d as i64 + 1,
            _ => 0..d as i64,
        };
        let family = range
            .map(|a| monomial_product(weight, a, precision))
            .collect::<Result<Vec<_>>>()?;
        Ok(reduce_echelon(family))
    })?;
    Ok(FormBasis {
        weight,
        kind,
        elements,
    })
}

/// `Delta^a E_4^b E_6^c` of the given weight with `c` in `{0, 1}`.
fn monomial_product(weight: i64, a: i64, precision: i64) -> Result<LaurentSeries> {
    let rest = weight - 12 * a;
    let c = if rest % 4 == 0 { 0 } else { 1 };
    let b = (rest - 6 * c) / 4;
    if rest < 0 || b < 0 {
        return Err(Error::InvalidArgument(format!(
            "no product Delta^{a} E4^b E6^c of weight {weight}"
        )));
    }
    let mut f = if a == 0 {
        LaurentSeries::one(precision)
    } else {
        delta(precision).series.pow(a as u32)
    };
    if b > 0 {
        f = f.mul(&eisenstein(4, precision)?.series.pow(b as u32));
    }
    if c > 0 {
        f = f.mul(&eisenstein(6, precision)?.series);
    }
    Ok(f.truncate(precision))
}

/// Matrix of `T_m` on the echelon basis; column `i` holds the coordinates of
/// `T_m b_i`.
pub fn hecke_matrix_on_space(weight: i64, kind: FormKind, m: i64) -> Result<Matrix> {
    let d = dimension(weight, kind) as i64;
    // Past the Sturm bound the coordinates are overdetermined, which makes
    // the span check below meaningful.
    let out_len = d + weight / 12 + 2;
    let b = basis(weight, kind, m * out_len)?;
    let mut cols = Vec::with_capacity(b.len());
    for e in &b.elements {
        let t = hecke::t_op(e, weight, m)?;
        cols.push(b.coordinates(&t)?);
    }
    Ok(Matrix::from_fn(b.len(), b.len(), |i, j| cols[j][i].clone()))
}

pub fn hecke_charpoly_on_space(weight: i64, kind: FormKind, m: i64) -> Result<Polynomial> {
    hecke_matrix_on_space(weight, kind, m)?.charpoly()
}
