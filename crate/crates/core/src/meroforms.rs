//! Named meromorphic and weakly holomorphic forms and exact identity checks.
//!
//! Every series here is the formal q-expansion at the cusp. For forms with
//! poles in the upper half-plane the expansion only converges above the
//! highest pole; [`NamedForm::valid_height`] records that height so numeric
//! evaluation can refuse points below it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{self, delta, eisenstein, j_function, sigma, MemoKey};
use crate::hecke::t_op;
use crate::poly::Polynomial;
use crate::rational::{int, pow_i, rat, Rational};
use crate::series::LaurentSeries;
use crate::whbasis::{bol_image_membership, solve_principal_part, BolOutcome, PrincipalPart, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormName {
    #[serde(rename = "f6iinfty")]
    F6iInfty,
    #[serde(rename = "f6i")]
    F6i,
    #[serde(rename = "g5")]
    G5,
    #[serde(rename = "g7")]
    G7,
    #[serde(rename = "F7")]
    F7,
    #[serde(rename = "G")]
    BigG,
    #[serde(rename = "g")]
    SmallG,
}

impl FormName {
    pub const ALL: [FormName; 7] = [
        FormName::F6iInfty,
        FormName::F6i,
        FormName::G5,
        FormName::G7,
        FormName::F7,
        FormName::BigG,
        FormName::SmallG,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FormName::F6iInfty => "f6iinfty",
            FormName::F6i => "f6i",
            FormName::G5 => "g5",
            FormName::G7 => "g7",
            FormName::F7 => "F7",
            FormName::BigG => "G",
            FormName::SmallG => "g",
        }
    }

    pub fn weight(self) -> i64 {
        match self {
            FormName::F6iInfty | FormName::F6i => 6,
            FormName::G5 | FormName::G7 => -4,
            FormName::F7 | FormName::BigG => 12,
            FormName::SmallG => -10,
        }
    }

    pub fn construction(self) -> &'static str {
        match self {
            FormName::F6iInfty => "E6^3/Delta + 1488*E6",
            FormName::F6i => "Delta/E6",
            FormName::G5 => "weight -4 form in S^! with principal part q^-5 - 3126*q^-1",
            FormName::G7 => "weight -4 form in S^! with principal part q^-7 - 16808*q^-1",
            FormName::F7 => "E4^3 + 3375*Delta",
            FormName::BigG => "Delta^2/(E4^3 + 3375*Delta)",
            FormName::SmallG => "E4^2*E6/Delta^2",
        }
    }

    /// Height above which the q-expansion converges; `None` when the form
    /// has no poles in the upper half-plane.
    pub fn valid_height(self) -> Option<f64> {
        match self {
            FormName::F6i => Some(1.0),
            FormName::BigG => Some(7f64.sqrt() / 2.0),
            _ => None,
        }
    }
}

impl fmt::Display for FormName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FormName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown form `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedForm {
    pub name: FormName,
    pub weight: i64,
    pub series: LaurentSeries,
    pub construction: &'static str,
}

impl NamedForm {
    pub fn valid_height(&self) -> Option<f64> {
        self.name.valid_height()
    }
}

/// The stored `g5` and `g7` are `alpha` times the forms of the same name,
/// i.e. they have leading coefficient 1.
pub fn build(name: FormName, precision: i64) -> Result<NamedForm> {
    let v = forms::memoized(MemoKey::Named(name.as_str()), precision, || {
        compute(name, precision).map(|s| vec![s])
    })?;
    Ok(NamedForm {
        name,
        weight: name.weight(),
        series: v.into_iter().next().expect("one series"),
        construction: name.construction(),
    })
}

fn compute(name: FormName, p: i64) -> Result<LaurentSeries> {
    let e4 = |q| eisenstein(4, q).map(|f| f.series);
    let e6 = |q| eisenstein(6, q).map(|f| f.series);
    let d = |q| delta(q).series;
    let f7 = |q| Ok::<_, Error>(e4(q)?.pow(3).add(&d(q).scale(&rat(3375))));
    Ok(match name {
        FormName::F6iInfty => e6(p + 2)?
            .pow(3)
            .div(&d(p + 2), p)?
            .add(&e6(p)?.scale(&rat(1488))),
        FormName::F6i => d(p).div(&e6(p)?, p)?,
        FormName::G5 => solve_s_shriek(&[(5, 1), (1, -3126)], p)?,
        FormName::G7 => solve_s_shriek(&[(7, 1), (1, -16808)], p)?,
        FormName::F7 => f7(p)?,
        FormName::BigG => d(p).pow(2).div(&f7(p)?, p)?,
        FormName::SmallG => e4(p + 2)?
            .pow(2)
            .mul(&e6(p + 2)?)
            .div(&d(p + 3).pow(2), p)?,
    })
}

fn solve_s_shriek(terms: &[(i64, i64)], p: i64) -> Result<LaurentSeries> {
    let pp = PrincipalPart::from_terms(terms.iter().map(|&(r, c)| (r, rat(c))));
    Ok(solve_principal_part(-4, &pp, true, p)?.into_result()?.series)
}

/// `E_8 / Delta` known below `q^p`.
pub fn e8_over_delta(p: i64) -> Result<LaurentSeries> {
    eisenstein(8, p + 1)?.series.div(&delta(p + 2).series, p)
}

/// Evaluates `seed * Q(j)` as a series known below `q^p`.
pub fn seed_times_j_polynomial(seed: &LaurentSeries, q: &Polynomial, p: i64) -> LaurentSeries {
    let deg = q.degree().unwrap_or(0) as i64;
    let j = j_function(p + deg + 2).series;
    let mut acc = LaurentSeries::zero(seed.precision());
    let mut term = seed.clone();
    for (d, c) in q.coefficients().iter().enumerate() {
        if d > 0 {
            term = term.mul(&j);
        }
        if !c.is_zero() {
            acc = acc.add(&term.scale(c));
        }
    }
    acc.truncate(p)
}

/// Builds a product of powers of `E<k>`, `Delta`, `j` and the named forms,
/// e.g. `E4^2*E6/Delta^2`, known below `q^precision`.
pub fn build_formula(expr: &str, precision: i64) -> Result<(i64, LaurentSeries)> {
    if let Ok(name) = expr.trim().parse::<FormName>() {
        let f = build(name, precision)?;
        return Ok((f.weight, f.series));
    }
    let factors = parse_formula(expr)?;
    let mut slack = 4;
    loop {
        let w = precision + slack;
        let mut weight = 0;
        let mut num = LaurentSeries::one(w);
        let mut den = LaurentSeries::one(w);
        for (atom, e) in &factors {
            let (aw, s) = atom_series(atom, w)?;
            weight += aw * e;
            let pw = s.pow(e.unsigned_abs() as u32);
            if *e > 0 {
                num = num.mul(&pw);
            } else {
                den = den.mul(&pw);
            }
        }
        match num.div(&den, precision) {
            Ok(s) => return Ok((weight, s)),
            Err(Error::InsufficientPrecision(_)) if slack < 4096 => slack *= 2,
            Err(e) => return Err(e),
        }
    }
}

fn parse_formula(expr: &str) -> Result<Vec<(String, i64)>> {
    let mut out = Vec::new();
    let mut sign = 1;
    let mut cur = String::new();
    let push = |tok: &str, sign: i64, out: &mut Vec<(String, i64)>| -> Result<()> {
        let tok = tok.trim();
        if tok.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{expr}`")));
        }
        let (atom, e) = match tok.split_once('^') {
            Some((a, e)) => (
                a.trim(),
                e.trim()
                    .parse::<i64>()
                    .map_err(|err| Error::Parse(format!("`{tok}`: {err}")))?,
            ),
            None => (tok, 1),
        };
        out.push((atom.to_string(), sign * e));
        Ok(())
    };
    for ch in expr.chars() {
        match ch {
            '*' | '/' => {
                push(&cur, sign, &mut out)?;
                cur.clear();
                sign = if ch == '*' { 1 } else { -1 };
            }
            _ => cur.push(ch),
        }
    }
    push(&cur, sign, &mut out)?;
    Ok(out)
}

fn atom_series(atom: &str, p: i64) -> Result<(i64, LaurentSeries)> {
    match atom {
        "Delta" | "D" => Ok((12, delta(p).series)),
        "j" => Ok((0, j_function(p).series)),
        _ => {
            if let Some(k) = atom.strip_prefix('E') {
                let k: i64 = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("unknown factor `{atom}`")))?;
                return Ok((k, eisenstein(k, p)?.series));
            }
            let name: FormName = atom.parse()?;
            let f = build(name, p)?;
            Ok((f.weight, f.series))
        }
    }
}

/// Result of an exact identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: String,
    pub pass: bool,
    /// Exponents `lo <= n < hi` on which the identity was compared.
    pub window: (i64, i64),
    pub mismatch: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl IdentityReport {
    fn from_parts(id: &str, window: (i64, i64), mismatch: Option<i64>, detail: Option<String>) -> Self {
        IdentityReport {
            id: id.to_string(),
            pass: mismatch.is_none() && detail.is_none(),
            window,
            mismatch,
            detail,
        }
    }
}

pub fn identity_ids() -> Vec<String> {
    let mut ids = vec!["bol-f6iinfty".to_string()];
    ids.extend([2, 3, 5, 7].iter().map(|m| format!("infty-eigen({m})")));
    ids.extend(
        ["g5-def", "g7-def", "gT2", "gT3", "G-hecke", "jpoly-eval", "F-over-Delta", "psi-fourier-consistency"]
            .iter()
            .map(|s| s.to_string()),
    );
    ids
}

/// Input precision used when none is given.
pub fn default_precision(id: &str) -> i64 {
    if id == "G-hecke" || id == "jpoly-eval" {
        40
    } else {
        60
    }
}

pub fn verify_identity(id: &str) -> Result<IdentityReport> {
    verify_identity_at(id, default_precision(id))
}

fn parse_infty_eigen(id: &str) -> Option<i64> {
    let rest = id.strip_prefix("infty-eigen")?;
    let rest = rest.trim_start_matches(['(', '-']).trim_end_matches(')');
    rest.parse().ok().filter(|m: &i64| *m >= 1)
}

pub fn verify_identity_at(id: &str, p: i64) -> Result<IdentityReport> {
    if let Some(m) = parse_infty_eigen(id) {
        return infty_eigen(id, m, p);
    }
    match id {
        "bol-f6iinfty" => {
            let lhs = e8_over_delta(p)?.d_power(5);
            let f = build(FormName::F6iInfty, p)?.series;
            Ok(compare(id, &lhs, &f.neg(), &[(&f, -1, &["1", "0", "-73764", "-86241280"])]))
        }
        "g5-def" => j_poly_def(id, FormName::G5, &[1, -3480, 3838860, -1425282400, 114237825024], &[
            (-5, "1"),
            (-1, "-3126"),
            (0, "0"),
            (1, "26994415788736"),
            (2, "519615094283304960"),
        ], p),
        "g7-def" => j_poly_def(
            id,
            FormName::G7,
            &[1, -4968, 9176868, -7736486240, 2925506969154, -411526489432464, 12317318339088384],
            &[(-7, "1"), (-1, "-16808"), (0, "0"), (1, "10625045828793993"), (2, "1689691172521357344768")],
            p,
        ),
        "gT2" => g_hecke(id, 2, &gt2_polynomial(), &["1", "0", "24", "2048", "-402751440", "-7553771839488"], p),
        "gT3" => g_hecke(
            id,
            3,
            &gt3_polynomial(),
            &["1", "0", "0", "24", "0", "0", "-34820210880", "-27948629556463536"],
            p,
        ),
        "G-hecke" => {
            let lhs = big_g_hecke(p)?;
            let expected = ["0", "1", "16868409", "279687514914333"];
            let mismatch = check_displayed(&lhs, 0, &expected);
            Ok(IdentityReport::from_parts(id, (0, expected.len() as i64), mismatch.err(), None))
        }
        "jpoly-eval" => {
            let lhs = big_g_hecke(p)?;
            let z = rat(-3375);
            let mut mismatch = None;
            for (n, poly, printed) in [
                (2, gt2_polynomial(), "16868409"),
                (3, gt3_polynomial(), "279687514914333"),
            ] {
                let v = poly.eval(&z);
                if lhs.coefficient(n)? != v || v != printed.parse::<Rational>().expect("literal") {
                    mismatch.get_or_insert(n);
                }
            }
            Ok(IdentityReport::from_parts(id, (2, 4), mismatch, None))
        }
        "F-over-Delta" => {
            let f7 = build(FormName::F7, p + 2)?.series;
            let lhs = f7.div(&delta(p + 2).series, p)?;
            let rhs = j_function(p).series.add(&LaurentSeries::monomial(rat(3375), 0, p));
            Ok(compare(id, &lhs, &rhs, &[]))
        }
        "psi-fourier-consistency" => psi_fourier(id, p),
        _ => Err(Error::InvalidArgument(format!("unknown identity `{id}`"))),
    }
}

pub fn gt2_polynomial() -> Polynomial {
    Polynomial::from_descending(&[1, -1512, 374784])
}

pub fn gt3_polynomial() -> Polynomial {
    Polynomial::from_descending(&[1, -3000, 2784384, -842201064, 52796307708])
}

fn compare(
    id: &str,
    lhs: &LaurentSeries,
    rhs: &LaurentSeries,
    displayed: &[(&LaurentSeries, i64, &[&str])],
) -> IdentityReport {
    let cmp = lhs.equals_to_precision(rhs);
    let mut mismatch = cmp.first_mismatch;
    for (s, start, coeffs) in displayed {
        if let Err(n) = check_displayed(s, *start, coeffs) {
            mismatch = Some(mismatch.map_or(n, |m| m.min(n)));
        }
    }
    IdentityReport::from_parts(id, cmp.window, mismatch, None)
}

/// Checks consecutive coefficients from `q^start` against decimal literals.
fn check_displayed(s: &LaurentSeries, start: i64, coeffs: &[&str]) -> std::result::Result<(), i64> {
    for (i, lit) in coeffs.iter().enumerate() {
        let n = start + i as i64;
        let want = int(lit.parse::<BigInt>().expect("literal"));
        match s.coefficient(n) {
            Ok(c) if c == want => {}
            _ => return Err(n),
        }
    }
    Ok(())
}

fn infty_eigen(id: &str, m: i64, p: i64) -> Result<IdentityReport> {
    let f = build(FormName::F6iInfty, p)?.series;
    let t = t_op(&f, 6, m)?;
    let h = t.sub(&f.scale(&int(sigma(5, m as u64))));
    let window = (h.valuation().min(-m), h.precision());
    Ok(match bol_image_membership(&h, 3, true)? {
        BolOutcome::Witness(_) => IdentityReport::from_parts(id, window, None, None),
        BolOutcome::Mismatch { index } => IdentityReport::from_parts(id, window, Some(index), None),
        BolOutcome::Obstructed(o) => IdentityReport::from_parts(
            id,
            window,
            None,
            Some(format!("obstruction {:?}", o.iter().map(ToString::to_string).collect::<Vec<_>>())),
        ),
    })
}

fn j_poly_def(id: &str, name: FormName, poly: &[i64], displayed: &[(i64, &str)], p: i64) -> Result<IdentityReport> {
    let f = build(name, p)?.series;
    let rhs = seed_times_j_polynomial(&e8_over_delta(p + 2)?, &Polynomial::from_descending(poly), p);
    let mut report = compare(id, &f, &rhs, &[]);
    for (n, lit) in displayed {
        if check_displayed(&f, *n, &[lit]).is_err() {
            report.mismatch = Some(report.mismatch.map_or(*n, |m| m.min(*n)));
            report.pass = false;
        }
    }
    Ok(report)
}

fn g_hecke(id: &str, m: i64, poly: &Polynomial, displayed: &[&str], p: i64) -> Result<IdentityReport> {
    let g = build(FormName::SmallG, p)?.series;
    let lhs = t_op(&g, -10, m)?.scale(&pow_i(m, 11));
    let rhs = seed_times_j_polynomial(&build(FormName::SmallG, p + 8)?.series, poly, p);
    Ok(compare(id, &lhs, &rhs, &[(&lhs, -2 * m, displayed)]))
}

/// `G | T_2 + 24 G`.
fn big_g_hecke(p: i64) -> Result<LaurentSeries> {
    let g = build(FormName::BigG, p)?.series;
    Ok(t_op(&g, 12, 2)?.add(&g.scale(&rat(24))))
}

/// The first coefficients of `alpha Delta + beta G` as linear forms in
/// `(alpha, beta)`, and `Delta / G = j + 3375`.
fn psi_fourier(id: &str, p: i64) -> Result<IdentityReport> {
    let d = delta(p).series;
    let g = build(FormName::BigG, p)?.series;
    let expected = [(1, (1, 0)), (2, (-24, 1)), (3, (252, -4143))];
    let mut mismatch = None;
    for (n, (a, b)) in expected {
        if d.coefficient(n)? != rat(a) || g.coefficient(n)? != rat(b) {
            mismatch.get_or_insert(n);
        }
    }
    let ratio = delta(p + 3).series.div(&build(FormName::BigG, p + 3)?.series, p)?;
    let rhs = j_function(p).series.add(&LaurentSeries::monomial(rat(3375), 0, p));
    let cmp = ratio.equals_to_precision(&rhs);
    if let Some(n) = cmp.first_mismatch {
        mismatch = Some(mismatch.map_or(n, |m: i64| m.min(n)));
    }
    Ok(IdentityReport::from_parts(id, cmp.window, mismatch, None))
}

/// The solver output for a principal part, unwrapped.
pub fn solve_named_principal_part(weight: i64, pp: &PrincipalPart, p: i64) -> Result<Solution> {
    solve_principal_part(weight, pp, true, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_expansions() {
        let f = build(FormName::F6iInfty, 3).unwrap().series;
        assert_eq!(f, LaurentSeries::from_integers(-1, &[1, 0, -73764, -86241280]));
        let f = build(FormName::F7, 4).unwrap().series;
        assert_eq!(f, LaurentSeries::from_integers(0, &[1, 4095, 98280, 17805060]));
        let g = build(FormName::BigG, 6).unwrap().series;
        assert_eq!(g, LaurentSeries::from_integers(2, &[1, -4143, 16868385, -68686682635]));
        let f = build(FormName::F6i, 5).unwrap().series;
        assert_eq!(f, LaurentSeries::from_integers(1, &[1, 480, 258804, 138542080]));
        let g = build(FormName::SmallG, 3).unwrap().series;
        assert_eq!(
            g,
            LaurentSeries::from_integers(-2, &[1, 24, -196560, -47709536, -3688365156])
        );
    }

    #[test]
    fn formulas() {
        let (w, s) = build_formula("E4^2*E6/Delta^2", 3).unwrap();
        assert_eq!(w, -10);
        assert_eq!(s, build(FormName::SmallG, 3).unwrap().series);
        let (w, s) = build_formula("E8/Delta", 3).unwrap();
        assert_eq!(w, -4);
        assert_eq!(s, LaurentSeries::from_integers(-1, &[1, 504, 73764, 2695040]));
        assert_eq!(build_formula("G", 6).unwrap().0, 12);
        assert!(build_formula("E4**E6", 3).is_err());
        assert!(build_formula("X", 3).is_err());
    }

    #[test]
    fn all_identities_pass() {
        for id in identity_ids() {
            let r = verify_identity(&id).unwrap_or_else(|e| panic!("{id}: {e}"));
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn id_parsing() {
        assert_eq!(parse_infty_eigen("infty-eigen(5)"), Some(5));
        assert_eq!(parse_infty_eigen("infty-eigen-7"), Some(7));
        assert!(verify_identity("nope").is_err());
    }

    #[test]
    fn corrupted_identity_fails() {
        let lhs = e8_over_delta(20).unwrap().d_power(5);
        let mut rhs = build(FormName::F6iInfty, 20).unwrap().series.neg();
        rhs = rhs.add(&LaurentSeries::monomial(rat(1), 7, 20));
        let r = compare("corrupt", &lhs, &rhs, &[]);
        assert!(!r.pass);
        assert_eq!(r.mismatch, Some(7));
    }
}
