//! Truncated elliptic Poincare series
//! `Psi(z) = sum_{gamma in SL_2(Z)} psi(z) |_{2k} gamma` with seed
//! `psi(z) = (z - conj(zz))^(-2k) X(z)^l`, `X(z) = (z - zz) / (z - conj(zz))`.

use astro_float::BigFloat;
use num_complex::Complex64 as C64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::complex::RM;
use super::{mobius, reduce, to_f64, Complex, Ctx, HPoint, IntMatrix};
use crate::error::{Error, Result};
use crate::hecke::divisors;
use crate::rational::pow_i;

#[derive(Clone, Debug)]
pub struct PoincareSeed {
    pub k: i64,
    pub ell: i64,
    pub zz: HPoint,
}

impl PoincareSeed {
    pub fn new(k: i64, ell: i64, zz: HPoint) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("need k >= 2 for absolute convergence, got {k}")));
        }
        Ok(PoincareSeed { k, ell, zz })
    }

    /// Half the order of the stabilizer of `zz` in `SL_2(Z)`.
    pub fn omega(&self, ctx: &Ctx) -> i64 {
        let p = ctx.wp();
        let (w, _) = reduce(&self.zz, ctx);
        let tol = (-(ctx.bits() as f64) / 2.0).exp2();
        let near = |pt: &HPoint| to_f64(&w.as_complex().sub(pt.as_complex(), p).abs(p)) < tol;
        let rho = HPoint::rho(ctx);
        let rho2 = HPoint { z: Complex::new(rho.x().neg(), rho.y().clone()) };
        if near(&HPoint::i(ctx)) {
            2
        } else if near(&rho) || near(&rho2) {
            3
        } else {
            1
        }
    }

    /// Whether `l = -k (mod omega)` fails, in which case the series is zero.
    pub fn vanishes(&self, ctx: &Ctx) -> bool {
        (self.ell + self.k).rem_euclid(self.omega(ctx)) != 0
    }

    fn seed(&self, w: &Complex, p: usize) -> Result<Complex> {
        let zz = self.zz.as_complex();
        let a = w.sub(zz, p);
        let b = w.sub(&zz.conj(), p);
        if self.ell < 0 && a.is_zero() {
            return Err(Error::InvalidArgument("evaluation point is a pole of the series".into()));
        }
        // a^l b^(-2k-l) with a single reciprocal
        let (up, down) = (self.ell.max(0), (-self.ell).max(0));
        let num = a.powi(up, p);
        let den = a.powi(down, p).mul(&b.powi(2 * self.k + self.ell, p), p);
        Ok(num.div(&den, p))
    }

    fn seed_f64(&self, w: C64, zz: C64) -> Result<C64> {
        let a = w - zz;
        let b = w - zz.conj();
        if self.ell < 0 && a == C64::new(0.0, 0.0) {
            return Err(Error::InvalidArgument("evaluation point is a pole of the series".into()));
        }
        Ok(a.powi(self.ell as i32) * b.powi((-2 * self.k - self.ell) as i32))
    }
}

#[derive(Clone, Debug)]
pub struct PsiResult {
    pub value: Complex,
    /// Crude `O(B^(1-2k))` estimate of the omitted terms, scaled by the
    /// largest summand.
    pub tail_estimate: f64,
    pub terms: usize,
    pub vanishing: bool,
    pub note: String,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Sums over `gamma = T^t gamma_0` for coprime bottom rows `(c, d)` with
/// `max(|c|, |d|) <= bound` and `|t| <= bound`.
///
/// Requests of at most 53 bits are summed in hardware doubles.
pub fn psi_truncated(seed: &PoincareSeed, z: &HPoint, bound: i64, ctx: &mut Ctx) -> Result<PsiResult> {
    let p = ctx.wp();
    if seed.vanishes(ctx) {
        return Ok(PsiResult {
            value: Complex::zero(p),
            tail_estimate: 0.0,
            terms: 0,
            vanishing: true,
            note: format!(
                "series vanishes identically: l = {} is not -k mod {}",
                seed.ell,
                seed.omega(ctx)
            ),
        });
    }
    if bound < 1 {
        return Err(Error::InvalidArgument("bound must be positive".into()));
    }
    // Sum at the reduced point; Psi(z) = (cz + d)^(-2k) Psi(gamma z).
    let (w, g) = reduce(z, ctx);
    let (mut value, mut biggest, terms) = if ctx.bits() <= 53 {
        sum_f64(seed, &w, bound)?
    } else {
        sum_big(seed, &w, bound, ctx.bits())?
    };
    let [_, [c, d]] = g;
    if (c, d) != (0, 1) {
        let j = z
            .as_complex()
            .mul(&Complex::from_i64(c, 0, p), p)
            .add(&Complex::from_i64(d, 0, p), p)
            .powi(-2 * seed.k, p);
        value = value.mul(&j, p);
        biggest += super::log2_abs(&j.abs(p));
    }
    let tail_estimate = biggest.exp2() * (bound as f64).powi((1 - 2 * seed.k) as i32);
    Ok(PsiResult {
        value,
        tail_estimate,
        terms,
        vanishing: false,
        note: format!("tail O(B^{}) with B = {bound}, not certified", 1 - 2 * seed.k),
    })
}

fn coprime_rows(bound: i64) -> impl Iterator<Item = (i64, i64, IntMatrix)> {
    (-bound..=bound).flat_map(move |c| {
        (-bound..=bound).filter_map(move |d| {
            if c.gcd(&d) != 1 {
                return None;
            }
            let (_, x, y) = ext_gcd(d, c);
            Some((c, d, [[x, -y], [c, d]]))
        })
    })
}

fn sum_big(seed: &PoincareSeed, w: &HPoint, bound: i64, bits: usize) -> Result<(Complex, f64, usize)> {
    let rows: Vec<(i64, i64, IntMatrix)> = coprime_rows(bound).collect();
    let parts: Vec<Result<(Complex, f64)>> = rows
        .par_chunks(64)
        .map(|chunk| {
            let ctx = Ctx::new(bits)?;
            let p = ctx.wp();
            let mut acc = Complex::zero(p);
            let mut biggest = f64::NEG_INFINITY;
            for &(c, d, g0) in chunk {
                let base = mobius(&g0, w.as_complex(), &ctx);
                let j = w
                    .as_complex()
                    .mul(&Complex::from_i64(c, 0, p), p)
                    .add(&Complex::from_i64(d, 0, p), p)
                    .powi(-2 * seed.k, p);
                let mut inner = Complex::zero(p);
                for t in -bound..=bound {
                    let pt = Complex::new(base.re.add(&BigFloat::from_i64(t, p), p, RM), base.im.clone());
                    inner = inner.add(&seed.seed(&pt, p)?, p);
                }
                let term = inner.mul(&j, p);
                biggest = biggest.max(super::log2_abs(&term.abs(p)));
                acc = acc.add(&term, p);
            }
            Ok((acc, biggest))
        })
        .collect();
    let p = bits + 64;
    let mut value = Complex::zero(p);
    let mut biggest = f64::NEG_INFINITY;
    for part in parts {
        let (v, b) = part?;
        value = value.add(&v, p);
        biggest = biggest.max(b);
    }
    Ok((value, biggest, rows.len() * (2 * bound + 1) as usize))
}

fn sum_f64(seed: &PoincareSeed, w: &HPoint, bound: i64) -> Result<(Complex, f64, usize)> {
    let (x, y) = w.as_complex().to_f64();
    let wz = C64::new(x, y);
    let (zx, zy) = seed.zz.as_complex().to_f64();
    let zz = C64::new(zx, zy);
    let mut acc = C64::new(0.0, 0.0);
    let mut biggest = 0.0f64;
    let mut rows = 0;
    for (c, d, [[a, b], _]) in coprime_rows(bound) {
        let cd = C64::new(c as f64, 0.0) * wz + d as f64;
        let base = (C64::new(a as f64, 0.0) * wz + b as f64) / cd;
        let mut inner = C64::new(0.0, 0.0);
        for t in -bound..=bound {
            inner += seed.seed_f64(base + t as f64, zz)?;
        }
        let term = inner * cd.powi(-2 * seed.k as i32);
        biggest = biggest.max(term.norm());
        acc += term;
        rows += 1;
    }
    let p = 128;
    let value = Complex::new(BigFloat::from_f64(acc.re, p), BigFloat::from_f64(acc.im, p));
    Ok((value, biggest.log2(), rows * (2 * bound + 1) as usize))
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiReport {
    pub k: i64,
    pub ell: i64,
    pub n: i64,
    pub bound: i64,
    pub lhs: (f64, f64),
    pub rhs: (f64, f64),
    pub rel_diff: f64,
}

/// Compares `Psi |_{2k,z} T_n` (coset sum in `z`) with the expansion of the
/// Hecke action in the seed variable,
/// `(n/y)^(2k+l) n^(-2k-l-1) y^(2k+l) sum_{r | n} r^(2k) sum_{j < n/r} Psi^{(r^2 zz + r j)/n}(z)`.
pub fn psi_two_variable_check(
    seed: &PoincareSeed,
    z: &HPoint,
    n: i64,
    bound: i64,
    ctx: &mut Ctx,
) -> Result<PsiReport> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("n must be positive, got {n}")));
    }
    let p = ctx.wp();
    let k2 = 2 * seed.k;
    let mut lhs = Complex::zero(p);
    for d in divisors(n) {
        let a = n / d;
        for b in 0..d {
            let w = HPoint::from_complex(mobius(&[[a, b], [0, d]], z.as_complex(), ctx))?;
            let v = psi_truncated(seed, &w, bound, ctx)?.value;
            lhs = lhs.add(&v.mul(&Complex::from_rational(&pow_i(d, -k2), p), p), p);
        }
    }
    lhs = lhs.mul(&Complex::from_rational(&pow_i(n, k2 - 1), p), p);

    let y = seed.zz.y().clone();
    let e = k2 + seed.ell;
    let mut rhs = Complex::zero(p);
    for r in divisors(n) {
        let mut inner = Complex::zero(p);
        for j in 0..n / r {
            let zz = HPoint::from_complex(mobius(&[[r * r, r * j], [0, n]], seed.zz.as_complex(), ctx))?;
            let s = PoincareSeed::new(seed.k, seed.ell, zz)?;
            inner = inner.add(&psi_truncated(&s, z, bound, ctx)?.value, p);
        }
        rhs = rhs.add(&inner.mul(&Complex::from_rational(&pow_i(r, k2), p), p), p);
    }
    let y_e = Complex::real(y.clone(), p).powi(e, p);
    let n_over_y = Complex::real(BigFloat::from_i64(n, p).div(&y, p, RM), p).powi(e, p);
    let factor = n_over_y
        .mul(&Complex::from_rational(&pow_i(n, -e - 1), p), p)
        .mul(&y_e, p);
    rhs = rhs.mul(&factor, p);
    Ok(PsiReport {
        k: seed.k,
        ell: seed.ell,
        n,
        bound,
        lhs: lhs.to_f64(),
        rhs: rhs.to_f64(),
        rel_diff: lhs.rel_diff(&rhs, p),
    })
}
