//! Weakly holomorphic forms of bounded pole order and the principal-part
//! problem.
//!
//! A principal part `sum lambda_r q^-r + a_0` is realized by some weakly
//! holomorphic form of weight `w` exactly when, for every `g` in the dual
//! space of weight `2 - w`, the constant term of `f g` vanishes, i.e.
//! `sum lambda_r c_g(r) + a_0 c_g(0) = 0`. Pairing against cusp forms leaves
//! the constant term free; pairing against all of `M_{2-w}` pins it.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::{self, basis, dimension, FormBasis, FormKind, ModularFormSeries, MemoKey};
use crate::poly::Polynomial;
use crate::rational::{format_rational, parse_rational, pow_i, Rational};
use crate::series::LaurentSeries;

/// Principal part at the cusp: `sum_r lambda_r q^-r` plus a constant term.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PrincipalPart {
    negative: BTreeMap<i64, Rational>,
    constant: Rational,
}

impl PrincipalPart {
    pub fn new() -> Self {
        Self::default()
    }

    /// `q^-r`.
    pub fn pole(r: i64) -> Self {
        Self::from_terms([(r, Rational::from_integer(1.into()))])
    }

    /// Terms `(r, lambda_r)`; `r = 0` sets the constant.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut p = Self::new();
        for (r, c) in terms {
            let cur = p.lambda(r) + c;
            p.set(r, cur);
        }
        p
    }

    /// Reads the terms of exponent `<= 0` from a series.
    pub fn from_series(f: &LaurentSeries) -> Self {
        Self::from_terms(f.principal_part().into_iter().map(|(n, c)| (-n, c)))
    }

    pub fn with_constant(mut self, a0: Rational) -> Self {
        self.constant = a0;
        self
    }

    pub fn set(&mut self, r: i64, c: Rational) {
        assert!(r >= 0, "principal part index must be >= 0");
        if r == 0 {
            self.constant = c;
        } else if c.is_zero() {
            self.negative.remove(&r);
        } else {
            self.negative.insert(r, c);
        }
    }

    /// `lambda_r`; `r = 0` gives the constant term.
    pub fn lambda(&self, r: i64) -> Rational {
        if r == 0 {
            return self.constant.clone();
        }
        self.negative.get(&r).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn poles(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.negative.iter().map(|(r, c)| (*r, c))
    }

    pub fn max_pole(&self) -> i64 {
        self.negative.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.negative.is_empty() && self.constant.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(
            self.negative
                .iter()
                .map(|(r, l)| (*r, l * c))
                .chain([(0, &self.constant * c)]),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(
            self.negative
                .iter()
                .chain(&other.negative)
                .map(|(r, l)| (*r, l.clone()))
                .chain([(0, &self.constant + &other.constant)]),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from_integer((-1).into())))
    }

    /// The principal part as a series known below `q^precision`.
    pub fn to_series(&self, precision: i64) -> LaurentSeries {
        let start = -self.max_pole();
        LaurentSeries::from_fn(start, precision.max(start + 1), |n| {
            if n <= 0 {
                self.lambda(-n)
            } else {
                Rational::zero()
            }
        })
        .truncate(precision)
    }

    /// Parses `"r:coeff,r:coeff,..."`, where `r = 0` addresses the constant.
    pub fn parse(s: &str) -> Result<Self> {
        let mut p = Self::new();
        for term in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (r, c) = term
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("`{term}`: expected r:coeff")))?;
            let r: i64 = r
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("`{term}`: {e}")))?;
            if r < 0 {
                return Err(Error::Parse(format!("`{term}`: pole order must be >= 0")));
            }
            let cur = p.lambda(r) + parse_rational(c)?;
            p.set(r, cur);
        }
        Ok(p)
    }
}

impl fmt::Display for PrincipalPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .negative
            .iter()
            .rev()
            .map(|(r, c)| format!("{}:{}", r, format_rational(c)))
            .collect();
        if !self.constant.is_zero() {
            parts.push(format!("0:{}", format_rational(&self.constant)));
        }
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DualKind {
    Cusp,
    Holomorphic,
}

impl DualKind {
    fn form_kind(self) -> FormKind {
        match self {
            DualKind::Cusp => FormKind::Cuspidal,
            DualKind::Holomorphic => FormKind::Holomorphic,
        }
    }
}

/// Echelon basis of the weakly holomorphic forms of weight `weight` with a
/// pole of order at most `max_pole`, known below `q^precision`.
///
/// Built as `Delta^-max_pole M_{weight + 12 max_pole}`.
pub fn wh_slice_basis(weight: i64, max_pole: i64, precision: i64) -> Result<FormBasis> {
    if max_pole < 0 {
        return Err(Error::InvalidArgument(format!("negative pole order {max_pole}")));
    }
    let kind = FormKind::WeaklyHolomorphic { max_pole };
    let lifted = weight + 12 * max_pole;
    if weight % 2 != 0 || lifted < 0 {
        return Ok(FormBasis {
            weight,
            kind,
            elements: Vec::new(),
        });
    }
    if precision < -max_pole + dimension(lifted, FormKind::Holomorphic) as i64 {
        return Err(Error::InsufficientPrecision(format!(
            "precision {precision} does not reach every leading exponent"
        )));
    }
    let elements = forms::memoized(MemoKey::Basis(weight, kind), precision, || {
        let m = basis(lifted, FormKind::Holomorphic, precision + max_pole)?;
        let d = forms::delta(precision + max_pole + 2).series;
        let inv = d.invert(precision + max_pole)?.pow(max_pole as u32);
        let family = m
            .elements
            .iter()
            .map(|b| {
                let f = if max_pole == 0 { b.clone() } else { inv.mul(b) };
                f.truncate(precision)
            })
            .collect();
        Ok(forms::reduce_echelon(family))
    })?;
    Ok(FormBasis {
        weight,
        kind,
        elements,
    })
}

fn dual_basis(weight: i64, pp: &PrincipalPart, dual: DualKind) -> Result<FormBasis> {
    let dual_weight = 2 - weight;
    let kind = dual.form_kind();
    let precision = (pp.max_pole() + 1).max(dimension(dual_weight, kind) as i64 + 1);
    if dual_weight < 0 {
        return Ok(FormBasis {
            weight: dual_weight,
            kind,
            elements: Vec::new(),
        });
    }
    basis(dual_weight, kind, precision)
}

/// `sum_r lambda_r c_g(r) + a_0 c_g(0)` for each `g` in the dual basis.
pub fn obstruction(weight: i64, pp: &PrincipalPart, dual: DualKind) -> Result<Vec<Rational>> {
    let b = dual_basis(weight, pp, dual)?;
    Ok(b.elements.iter().map(|g| pairing(pp, g)).collect())
}

pub(crate) fn pairing(pp: &PrincipalPart, g: &LaurentSeries) -> Rational {
    let mut s = pp.constant() * g.c(0);
    for (r, l) in pp.poles() {
        s += l * g.c(r);
    }
    s
}

/// Outcome of a principal-part problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Form(ModularFormSeries),
    /// The nonzero obstruction vector.
    Obstructed(Vec<Rational>),
}

impl Solution {
    pub fn form(self) -> Option<ModularFormSeries> {
        match self {
            Solution::Form(f) => Some(f),
            Solution::Obstructed(_) => None,
        }
    }

    pub fn into_result(self) -> Result<ModularFormSeries> {
        match self {
            Solution::Form(f) => Ok(f),
            Solution::Obstructed(o) => Err(Error::Obstructed(o)),
        }
    }
}

/// Finds the weakly holomorphic form of weight `weight` with principal part
/// `pp`, known below `q^precision`.
///
/// With `pin_constant` the constant term must equal `pp.constant()` and the
/// principal part is paired against all of `M_{2-w}`; a zero constant then
/// asks for a form in `S^!_w`. Without it only the poles are prescribed and
/// the pairing runs over cusp forms.
pub fn solve_principal_part(
    weight: i64,
    pp: &PrincipalPart,
    pin_constant: bool,
    precision: i64,
) -> Result<Solution> {
    if weight % 2 != 0 {
        return Err(Error::InvalidArgument(format!("weight must be even, got {weight}")));
    }
    if weight > 0 || (weight == 0 && !pin_constant) {
        return Err(Error::NonUniqueSolution { weight });
    }
    if precision < 1 {
        return Err(Error::InsufficientPrecision(format!(
            "precision {precision} does not reach the constant term"
        )));
    }
    let dual = if pin_constant {
        DualKind::Holomorphic
    } else {
        DualKind::Cusp
    };
    let obs = obstruction(weight, pp, dual)?;
    if obs.iter().any(|c| !c.is_zero()) {
        return Ok(Solution::Obstructed(obs));
    }
    let max_pole = pp.max_pole() + dimension(2 - weight, FormKind::Cuspidal) as i64;
    let b = wh_slice_basis(weight, max_pole, precision)?;
    let mut f = LaurentSeries::zero(precision);
    for e in &b.elements {
        let v = e.valuation();
        if v > 0 || (v == 0 && !pin_constant) {
            continue;
        }
        let t = pp.lambda(-v);
        if !t.is_zero() {
            f = f.add(&e.scale(&t));
        }
    }
    let last = if pin_constant { 0 } else { -1 };
    for n in -max_pole..=last {
        if f.c(n) != pp.lambda(-n) {
            return Err(Error::Inconsistent(format!(
                "coefficient of q^{n} cannot be matched by the weight {weight} slice"
            )));
        }
    }
    Ok(Solution::Form(ModularFormSeries::new(weight, f)))
}

/// The polynomial `Q` with `f = seed Q(j)`.
pub fn j_polynomial_decompose(f: &LaurentSeries, seed: &LaurentSeries) -> Result<Polynomial> {
    let s = seed.valuation();
    let lead = seed
        .leading_coefficient()
        .ok_or(Error::ZeroLeadingCoefficient)?
        .clone();
    if f.is_zero() {
        return Ok(Polynomial::zero());
    }
    let deg = s - f.valuation();
    if deg < 0 {
        return Err(Error::NotPolynomialInJ { index: f.valuation() });
    }
    let j = forms::j_function(f.precision() + deg + 2).series;
    let mut powers = vec![seed.clone()];
    for d in 1..=deg as usize {
        let next = powers[d - 1].mul(&j);
        powers.push(next);
    }
    let mut coeffs = vec![Rational::zero(); deg as usize + 1];
    let mut r = f.clone();
    for d in (0..=deg).rev() {
        let n = s - d;
        if n >= r.precision() {
            return Err(Error::InsufficientPrecision(format!(
                "residual known only below q^{}",
                r.precision()
            )));
        }
        let a = r.c(n) / &lead;
        if !a.is_zero() {
            r = r.sub(&powers[d as usize].scale(&a));
        }
        coeffs[d as usize] = a;
    }
    if !r.is_zero() {
        return Err(Error::NotPolynomialInJ { index: r.valuation() });
    }
    Ok(Polynomial::new(coeffs))
}

/// Outcome of a Bol-image membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BolOutcome {
    /// `F` with `D^(2k-1) F = h`.
    Witness(ModularFormSeries),
    Obstructed(Vec<Rational>),
    Mismatch { index: i64 },
}

impl BolOutcome {
    pub fn is_member(&self) -> bool {
        matches!(self, BolOutcome::Witness(_))
    }
}

/// Tests whether `h` of weight `2k` lies in `D^(2k-1)` of `M^!_{2-2k}`, or of
/// `S^!_{2-2k}` when `in_s_shriek` is set.
pub fn bol_image_membership(h: &LaurentSeries, k: i64, in_s_shriek: bool) -> Result<BolOutcome> {
    let e = 2 * k - 1;
    let precision = h.precision();
    if precision > 0 && !h.c(0).is_zero() {
        return Ok(BolOutcome::Mismatch { index: 0 });
    }
    if h.is_zero() {
        return Ok(BolOutcome::Witness(ModularFormSeries::new(
            2 - 2 * k,
            LaurentSeries::zero(precision),
        )));
    }
    let pp = PrincipalPart::from_terms(
        h.principal_part()
            .into_iter()
            .filter(|(n, _)| *n < 0)
            .map(|(n, c)| (-n, c * pow_i(n, -e))),
    );
    let f = match solve_principal_part(2 - 2 * k, &pp, in_s_shriek, precision)? {
        Solution::Form(f) => f,
        Solution::Obstructed(o) => return Ok(BolOutcome::Obstructed(o)),
    };
    let cmp = f.series.d_power(e as u32).equals_to_precision(h);
    Ok(match cmp.first_mismatch {
        Some(index) => BolOutcome::Mismatch { index },
        None => BolOutcome::Witness(f),
    })
}
