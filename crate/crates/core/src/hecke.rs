//! The operators `U_m`, `V_m` and the weight-`2k` Hecke operator `T_m` on
//! q-expansions.
//!
//! `T_m` is normalized so that the coefficient of `q^n` in `f | T_m` is
//! `sum_{r | gcd(m, n)} r^(2k-1) c(mn / r^2)`, with `gcd(m, 0) = m`.

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{pow_i, Rational};
use crate::series::LaurentSeries;

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

pub fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn check_m(m: i64) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("operator index must be positive, got {m}")));
    }
    Ok(())
}

/// `f(q) -> f(q^m)`.
pub fn v_op(f: &LaurentSeries, m: i64) -> Result<LaurentSeries> {
    check_m(m)?;
    let precision = m * (f.precision() - 1) + 1;
    if f.is_zero() {
        return Ok(LaurentSeries::zero(precision));
    }
    let v = f.valuation();
    let mut coeffs = vec![Rational::zero(); (precision - m * v) as usize];
    for (n, c) in f.iter() {
        coeffs[(m * (n - v)) as usize] = c.clone();
    }
    LaurentSeries::new(m * v, coeffs, precision)
}

/// Keeps the coefficients at multiples of `m` and relabels `q^(mn) -> q^n`.
pub fn u_op(f: &LaurentSeries, m: i64) -> Result<LaurentSeries> {
    check_m(m)?;
    let precision = ceil_div(f.precision(), m);
    if f.is_zero() {
        return Ok(LaurentSeries::zero(precision));
    }
    let start = ceil_div(f.valuation(), m).min(precision);
    Ok(LaurentSeries::from_fn(start, precision, |n| f.c(m * n)))
}

/// `f | T_m` in weight `weight`.
pub fn t_op(f: &LaurentSeries, weight: i64, m: i64) -> Result<LaurentSeries> {
    check_m(m)?;
    if weight % 2 != 0 {
        return Err(Error::InvalidArgument(format!("weight must be even, got {weight}")));
    }
    let precision = ceil_div(f.precision(), m);
    if f.is_zero() {
        return Ok(LaurentSeries::zero(precision));
    }
    let v = f.valuation();
    let start = if v < 0 { m * v } else { ceil_div(v, m) };
    if start >= precision {
        return Err(Error::InsufficientPrecision(format!(
            "T_{m} of a series known on [{v}, {}) has an empty window",
            f.precision()
        )));
    }
    let divs: Vec<(i64, Rational)> = divisors(m)
        .into_iter()
        .map(|r| (r, pow_i(r, weight - 1)))
        .collect();
    Ok(LaurentSeries::from_fn(start, precision, |n| {
        let g = m.gcd(&n);
        let mut s = Rational::zero();
        for (r, w) in &divs {
            if g % r != 0 {
                continue;
            }
            let idx = m * n / (r * r);
            if idx >= v {
                s += w * f.c(idx);
            }
        }
        s
    }))
}

/// `sum_{r | m} r^(weight-1) (f | U_{m/r}) | V_r`, the operator-level form of `T_m`.
pub fn t_op_decomposed(f: &LaurentSeries, weight: i64, m: i64) -> Result<LaurentSeries> {
    check_m(m)?;
    let mut acc: Option<LaurentSeries> = None;
    for r in divisors(m) {
        let term = v_op(&u_op(f, m / r)?, r)?.scale(&pow_i(r, weight - 1));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    Ok(acc.expect("m has divisors"))
}

/// Checks `T_m T_n = T_n T_m` on the common window, and `T_m T_n = T_mn`
/// when `m` and `n` are coprime.
pub fn t_op_commutes_check(f: &LaurentSeries, weight: i64, m: i64, n: i64) -> Result<bool> {
    let mn = t_op(&t_op(f, weight, n)?, weight, m)?;
    let nm = t_op(&t_op(f, weight, m)?, weight, n)?;
    if !mn.equals_to_precision(&nm).equal {
        return Ok(false);
    }
    if m.gcd(&n) == 1 {
        let direct = t_op(f, weight, m * n)?;
        return Ok(direct.equals_to_precision(&mn).equal);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{delta, eisenstein, j_function, sigma};
    use crate::rational::{int, rat};

    #[test]
    fn v_and_u_basics() {
        let q = LaurentSeries::monomial(rat(1), 1, 5);
        let v = v_op(&q, 3).unwrap();
        assert_eq!(v.valuation(), 3);
        assert_eq!(v.precision(), 13);
        assert_eq!(v.coefficient(3).unwrap(), rat(1));

        let f = LaurentSeries::from_integers(-1, &[1, 1, 0]);
        let g = v_op(&f, 2).unwrap();
        assert_eq!(g, LaurentSeries::new(-2, vec![rat(1), rat(0), rat(1)], 3).unwrap());

        let q2 = LaurentSeries::monomial(rat(1), 2, 6);
        assert_eq!(u_op(&q2, 2).unwrap(), LaurentSeries::monomial(rat(1), 1, 3));

        let d = delta(20).series;
        assert_eq!(v_op(&d, 2).unwrap().coefficient(4).unwrap(), rat(-24));
        assert_eq!(v_op(&d, 2).unwrap().valuation(), 2);
        assert_eq!(u_op(&d, 2).unwrap().coefficient(1).unwrap(), rat(-24));
        let uv = u_op(&v_op(&f, 3).unwrap(), 3).unwrap();
        assert!(uv.equals_to_precision(&f).equal);
    }

    #[test]
    fn delta_eigen() {
        let d = delta(40).series;
        let t2 = t_op(&d, 12, 2).unwrap();
        assert_eq!(t2.precision(), 20);
        assert!(t2.equals_to_precision(&d.scale(&rat(-24))).equal);
    }

    #[test]
    fn eisenstein_eigen() {
        for w in [4, 6, 8, 10, 14] {
            let e = eisenstein(w, 120).unwrap().series;
            for m in 1..=10 {
                let t = t_op(&e, w, m).unwrap();
                let lam = int(sigma(w as u32 - 1, m as u64));
                assert!(t.equals_to_precision(&e.scale(&lam)).equal, "E{w} T{m}");
            }
        }
    }

    #[test]
    fn windows() {
        let e8 = eisenstein(8, 41).unwrap().series;
        let f = e8.div(&delta(42).series, 40).unwrap();
        let t = t_op(&f, -4, 3).unwrap();
        assert_eq!(t.valuation(), -3);
        assert_eq!(t.precision(), 14);
        // The constant term picks up sigma_{-5}(3) c(0).
        assert_eq!(
            t.coefficient(0).unwrap(),
            rat(504) * (rat(1) + pow_i(3, -5))
        );
        assert!(t_op(&LaurentSeries::monomial(rat(1), 5, 6), 12, 7).is_err());
    }

    #[test]
    fn decomposition_agrees() {
        let j = j_function(60).series;
        for m in 1..=12 {
            let a = t_op(&j, 0, m).unwrap();
            let b = t_op_decomposed(&j, 0, m).unwrap();
            let cmp = a.equals_to_precision(&b);
            assert!(cmp.equal, "m={m} {cmp:?}");
        }
    }

    #[test]
    fn commuting() {
        let j = j_function(80).series.sub(&LaurentSeries::monomial(rat(744), 0, 80));
        assert!(t_op_commutes_check(&j, 0, 2, 3).unwrap());
        assert!(t_op_commutes_check(&delta(80).series, 12, 2, 3).unwrap());
        assert!(t_op_commutes_check(&delta(80).series, 12, 2, 4).unwrap());
        let f = eisenstein(8, 81).unwrap().series.div(&delta(82).series, 80).unwrap();
        assert!(t_op_commutes_check(&f, -4, 2, 3).unwrap());
    }

    #[test]
    fn divisor_list() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }
}
