//! Hecke action on harmonic Maass form classes modulo weakly holomorphic
//! forms.
//!
//! A class in weight `2 - 2k` is represented by the obstruction vector of a
//! principal part: its pairings against `S_2k` (classes modulo `M^!`) or
//! against `M_2k` (classes modulo `S^!`). The latter pairing includes the
//! constant term; that it realizes the quotient by `S^!` is a modelling
//! assumption which every example computed here is consistent with.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{dimension, hecke_charpoly_on_space, FormKind, ModularFormSeries};
use crate::hecke::divisors;
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::rational::{format_rational, pow_i, Rational};
use crate::whbasis::{obstruction, solve_principal_part, DualKind, PrincipalPart, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuotientKind {
    /// Classes modulo `M^!`, dual to `S_2k`.
    #[serde(rename = "modM!")]
    ModM,
    /// Classes modulo `S^!`, dual to `M_2k`.
    #[serde(rename = "modS!")]
    ModS,
}

impl QuotientKind {
    pub fn dual(self) -> DualKind {
        match self {
            QuotientKind::ModM => DualKind::Cusp,
            QuotientKind::ModS => DualKind::Holomorphic,
        }
    }

    /// The holomorphic space whose Hecke module this quotient matches.
    pub fn space(self) -> FormKind {
        match self {
            QuotientKind::ModM => FormKind::Cuspidal,
            QuotientKind::ModS => FormKind::Holomorphic,
        }
    }

    pub fn pins_constant(self) -> bool {
        self == QuotientKind::ModS
    }
}

impl fmt::Display for QuotientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuotientKind::ModM => "modM!",
            QuotientKind::ModS => "modS!",
        })
    }
}

impl FromStr for QuotientKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "modM!" | "modM" | "M" => Ok(QuotientKind::ModM),
            "modS!" | "modS" | "S" => Ok(QuotientKind::ModS),
            _ => Err(Error::Parse(format!("unknown quotient kind `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientClass {
    /// Harmonic weight `2 - 2k`.
    pub weight: i64,
    pub kind: QuotientKind,
    pub coords: Vec<Rational>,
}

impl QuotientClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// `T_m` in weight `weight` applied to the principal part alone.
pub fn hecke_on_principal_part(pp: &PrincipalPart, weight: i64, m: i64) -> PrincipalPart {
    assert!(m >= 1, "operator index must be positive");
    let divs = divisors(m);
    let mut out = PrincipalPart::new();
    for (s, lam) in pp.poles() {
        // lambda_s contributes to pole order n whenever m n / r^2 = s with r | gcd(m, n).
        for &r in &divs {
            let num = s * r * r;
            if num % m != 0 {
                continue;
            }
            let n = num / m;
            if n % r != 0 {
                continue;
            }
            let cur = out.lambda(n) + pow_i(r, weight - 1) * lam;
            out.set(n, cur);
        }
    }
    let sig = divs
        .iter()
        .fold(Rational::zero(), |acc, &r| acc + pow_i(r, weight - 1));
    out.with_constant(sig * pp.constant())
}

pub fn class_of(pp: &PrincipalPart, weight2k: i64, kind: QuotientKind) -> Result<QuotientClass> {
    let w = 2 - weight2k;
    Ok(QuotientClass {
        weight: w,
        kind,
        coords: obstruction(w, pp, kind.dual())?,
    })
}

pub fn quotient_dimension(weight2k: i64, kind: QuotientKind) -> usize {
    dimension(weight2k, kind.space())
}

/// Coordinate matrix of the classes of `q^-1, ..., q^-d`; column `i` is the
/// class of `q^-(i+1)`.
fn coordinate_matrix(weight2k: i64, kind: QuotientKind) -> Result<Matrix> {
    let d = quotient_dimension(weight2k, kind);
    let cols = (1..=d as i64)
        .map(|i| class_of(&PrincipalPart::pole(i), weight2k, kind).map(|c| c.coords))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_fn(d, d, |i, j| cols[j][i].clone()))
}

/// Matrix of `T_m` on the quotient in the basis of classes of `q^-1, ..., q^-d`.
pub fn quotient_hecke_matrix(weight2k: i64, kind: QuotientKind, m: i64) -> Result<Matrix> {
    if weight2k < 4 || weight2k % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "quotient Hecke matrices need even weight >= 4, got {weight2k}"
        )));
    }
    let d = quotient_dimension(weight2k, kind);
    let c = coordinate_matrix(weight2k, kind)?;
    let w = 2 - weight2k;
    let images = (1..=d as i64)
        .map(|i| {
            let t = hecke_on_principal_part(&PrincipalPart::pole(i), w, m);
            class_of(&t, weight2k, kind).map(|c| c.coords)
        })
        .collect::<Result<Vec<_>>>()?;
    let v = Matrix::from_fn(d, d, |i, j| images[j][i].clone());
    c.inverse()?.mul(&v)
}

/// Outcome of comparing the quotient Hecke module with its holomorphic partner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremCheck {
    pub weight2k: i64,
    pub kind: QuotientKind,
    pub m: i64,
    /// Characteristic polynomial of `m^(2k-1)` times the quotient matrix.
    pub quotient_charpoly: Polynomial,
    pub space_charpoly: Polynomial,
}

impl TheoremCheck {
    pub fn holds(&self) -> bool {
        self.quotient_charpoly == self.space_charpoly
    }
}

pub fn theorem_check(weight2k: i64, kind: QuotientKind, m: i64) -> Result<TheoremCheck> {
    let a = quotient_hecke_matrix(weight2k, kind, m)?.scale(&pow_i(m, weight2k - 1));
    Ok(TheoremCheck {
        weight2k,
        kind,
        m,
        quotient_charpoly: a.charpoly()?,
        space_charpoly: hecke_charpoly_on_space(weight2k, kind.space(), m)?,
    })
}

/// Checks `[F_-1 | T_n] = n^(1-2k) [F_-n]` on classes.
pub fn pole_class_relation(weight2k: i64, kind: QuotientKind, n: i64) -> Result<bool> {
    let w = 2 - weight2k;
    let lhs = class_of(&hecke_on_principal_part(&PrincipalPart::pole(1), w, n), weight2k, kind)?;
    let rhs = class_of(&PrincipalPart::pole(n), weight2k, kind)?;
    let f = pow_i(n, 1 - weight2k);
    Ok(lhs
        .coords
        .iter()
        .zip(&rhs.coords)
        .all(|(a, b)| *a == b * &f))
}

/// The weakly holomorphic form `F_-1 | T_m - m^(1-2k) lambda F_-1`, computed
/// from its principal part. Fails with [`Error::Obstructed`] unless
/// `lambda` is the eigenvalue on the (one-dimensional) quotient.
pub fn eigen_witness(
    weight2k: i64,
    m: i64,
    lambda: &Rational,
    kind: QuotientKind,
    precision: i64,
) -> Result<ModularFormSeries> {
    if quotient_dimension(weight2k, kind) != 1 {
        return Err(Error::InvalidArgument(format!(
            "eigen witnesses need a one-dimensional quotient, weight {weight2k} {kind} has dimension {}",
            quotient_dimension(weight2k, kind)
        )));
    }
    let w = 2 - weight2k;
    let f = PrincipalPart::pole(1);
    let pp = hecke_on_principal_part(&f, w, m).sub(&f.scale(&(pow_i(m, 1 - weight2k) * lambda)));
    match solve_principal_part(w, &pp, kind.pins_constant(), precision)? {
        Solution::Form(g) => Ok(g),
        Solution::Obstructed(o) => Err(Error::Obstructed(o)),
    }
}

/// `[["num/den", ...], ...]`.
pub fn matrix_json(m: &Matrix) -> String {
    m.to_json()
}

pub fn class_json(c: &QuotientClass) -> serde_json::Value {
    serde_json::json!({
        "weight": c.weight,
        "kind": c.kind,
        "coords": c.coords.iter().map(format_rational).collect::<Vec<_>>(),
    })
}
