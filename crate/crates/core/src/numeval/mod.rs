//! Multi-precision evaluation of exact q-series in the upper half-plane.
//!
//! Values are [`Complex`] numbers backed by `astro-float`. Every evaluation
//! carries an error estimate: a heuristic geometric bound on the discarded
//! tail of the series plus a rounding allowance. The tail bound comes from the
//! growth of the last stored coefficients and is not a certificate.

mod complex;
mod poincare;

use astro_float::{BigFloat, Consts};
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{delta, eisenstein, j_function, sigma};
use crate::hecke::{divisors, t_op};
use crate::meroforms::{build, FormName};
use crate::rational::{int, log2_abs as log2_rat, rat};
use crate::series::LaurentSeries;

pub use complex::{bigint_to_float, log2_abs, rational_to_float, to_f64, Complex};
pub use poincare::{psi_truncated, psi_two_variable_check, PoincareSeed, PsiReport, PsiResult};

use complex::{format_float, parse_float, RM};

/// Integer matrix `[[a, b], [c, d]]`.
pub type IntMatrix = [[i64; 2]; 2];

/// Working precision and the constants cache.
pub struct Ctx {
    bits: usize,
    cc: Consts,
}

impl Ctx {
    pub fn new(bits: usize) -> Result<Self> {
        if bits < 32 {
            return Err(Error::InvalidArgument(format!("need at least 32 bits, got {bits}")));
        }
        let cc = Consts::new().map_err(|e| Error::InvalidArgument(format!("constants cache: {e:?}")))?;
        Ok(Ctx { bits, cc })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Internal precision, a few words above the requested one.
    pub fn wp(&self) -> usize {
        self.bits + 64
    }

    pub fn pi(&mut self) -> BigFloat {
        let p = self.wp();
        self.cc.pi(p, RM)
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.wp())
    }

    pub fn sqrt(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(self.wp(), RM)
    }

    pub fn parse(&mut self, s: &str) -> Result<BigFloat> {
        let p = self.wp();
        parse_float(s, p, &mut self.cc)
    }

    pub fn format(&mut self, x: &BigFloat) -> String {
        format_float(x, &mut self.cc)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        let p = self.wp();
        x.exp(p, RM, &mut self.cc)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        let p = self.wp();
        x.ln(p, RM, &mut self.cc)
    }

    /// `e^(2 pi i z)`.
    pub fn q(&mut self, z: &Complex) -> Complex {
        let p = self.wp();
        let two_pi = self.pi().mul(&self.int(2), p, RM);
        let r = self.exp(&two_pi.mul(&z.im, p, RM).neg());
        let t = two_pi.mul(&z.re, p, RM);
        let (c, s) = (t.cos(p, RM, &mut self.cc), t.sin(p, RM, &mut self.cc));
        Complex::new(r.mul(&c, p, RM), r.mul(&s, p, RM))
    }

    /// `z^s` on the principal branch for a real exponent.
    pub fn powf(&mut self, x: &BigFloat, s: &BigFloat) -> BigFloat {
        let p = self.wp();
        x.pow(s, p, RM, &mut self.cc)
    }

    /// Tolerance scale `2^-bits`.
    pub fn epsilon(&self) -> f64 {
        (-(self.bits as f64)).exp2()
    }
}

/// A point of the upper half-plane.
#[derive(Clone, Debug)]
pub struct HPoint {
    z: Complex,
}

impl HPoint {
    pub fn new(x: BigFloat, y: BigFloat) -> Result<Self> {
        if !y.is_positive() || y.is_zero() {
            return Err(Error::InvalidArgument("point must have positive imaginary part".into()));
        }
        Ok(HPoint { z: Complex::new(x, y) })
    }

    pub fn from_complex(z: Complex) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn i(ctx: &Ctx) -> Self {
        HPoint { z: Complex::from_i64(0, 1, ctx.wp()) }
    }

    /// `(1 + sqrt(-7)) / 2`, where `j = -15^3`.
    pub fn cm7(ctx: &Ctx) -> Self {
        let p = ctx.wp();
        let half = BigFloat::from_f64(0.5, p);
        let y = ctx.sqrt(&ctx.int(7)).mul(&half, p, RM);
        HPoint { z: Complex::new(half, y) }
    }

    /// `(-1 + sqrt(-3)) / 2`.
    pub fn rho(ctx: &Ctx) -> Self {
        let p = ctx.wp();
        let half = BigFloat::from_f64(0.5, p);
        let y = ctx.sqrt(&ctx.int(3)).mul(&half, p, RM);
        HPoint { z: Complex::new(half.neg(), y) }
    }

    pub fn from_f64(x: f64, y: f64, ctx: &Ctx) -> Result<Self> {
        Self::new(BigFloat::from_f64(x, ctx.wp()), BigFloat::from_f64(y, ctx.wp()))
    }

    /// Parses `i`, `rho`, `cm7`, or `x,y` where each part is a decimal, a
    /// fraction `a/b`, or `sqrt(n)` optionally divided by an integer.
    pub fn parse(s: &str, ctx: &mut Ctx) -> Result<Self> {
        match s.trim() {
            "i" => return Ok(Self::i(ctx)),
            "rho" => return Ok(Self::rho(ctx)),
            "cm7" => return Ok(Self::cm7(ctx)),
            _ => {}
        }
        let (x, y) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected `x,y`, got `{s}`")))?;
        let x = parse_real(x, ctx)?;
        let y = parse_real(y, ctx)?;
        Self::new(x, y)
    }

    pub fn as_complex(&self) -> &Complex {
        &self.z
    }

    pub fn x(&self) -> &BigFloat {
        &self.z.re
    }

    pub fn y(&self) -> &BigFloat {
        &self.z.im
    }

    pub fn y_f64(&self) -> f64 {
        to_f64(&self.z.im)
    }
}

fn parse_real(s: &str, ctx: &mut Ctx) -> Result<BigFloat> {
    let s = s.trim();
    let p = ctx.wp();
    let (num, den) = match s.rsplit_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let (neg, body) = match num.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, num),
    };
    let mut x = if let Some(arg) = body.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let v = ctx.parse(arg)?;
        if v.is_negative() {
            return Err(Error::Parse(format!("sqrt of a negative number in `{s}`")));
        }
        ctx.sqrt(&v)
    } else {
        ctx.parse(body)?
    };
    if neg {
        x = x.neg();
    }
    if let Some(d) = den {
        let d = ctx.parse(d)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("division by zero in `{s}`")));
        }
        x = x.div(&d, p, RM);
    }
    Ok(x)
}

/// `(a z + b) / (c z + d)`.
pub fn mobius(g: &IntMatrix, z: &Complex, ctx: &Ctx) -> Complex {
    let p = ctx.wp();
    let [[a, b], [c, d]] = *g;
    let num = z.mul(&Complex::from_i64(a, 0, p), p).add(&Complex::from_i64(b, 0, p), p);
    let den = z.mul(&Complex::from_i64(c, 0, p), p).add(&Complex::from_i64(d, 0, p), p);
    num.div(&den, p)
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut m = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

/// Moves `z` into the standard fundamental domain. Returns `(w, gamma)` with
/// `w = gamma z` and `gamma` in `SL_2(Z)`.
pub fn reduce(z: &HPoint, ctx: &Ctx) -> (HPoint, IntMatrix) {
    let p = ctx.wp();
    let mut w = z.z.clone();
    let mut g: IntMatrix = [[1, 0], [0, 1]];
    let one = ctx.int(1);
    for _ in 0..10_000 {
        let n = to_f64(&w.re).round() as i64;
        if n != 0 {
            w.re = w.re.sub(&ctx.int(n), p, RM);
            g = mat_mul(&[[1, -n], [0, 1]], &g);
        }
        let r = w.norm_sqr(p);
        if r.cmp(&one).is_some_and(|c| c < 0) && to_f64(&r) < 1.0 - 1e-30_f64.max(ctx.epsilon()) {
            w = w.recip(p).neg();
            g = mat_mul(&[[0, -1], [1, 0]], &g);
        } else {
            break;
        }
    }
    (HPoint { z: w }, g)
}

/// A numeric value with its estimated absolute error.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: Complex,
    pub err_bound: f64,
    pub tail_note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvaluationJson {
    pub value_re: String,
    pub value_im: String,
    pub err_bound: f64,
    pub tail_note: String,
}

impl Evaluation {
    pub fn exact(value: Complex) -> Self {
        Evaluation { value, err_bound: 0.0, tail_note: String::new() }
    }

    pub fn to_json(&self, ctx: &mut Ctx) -> EvaluationJson {
        EvaluationJson {
            value_re: ctx.format(&self.value.re),
            value_im: ctx.format(&self.value.im),
            err_bound: self.err_bound,
            tail_note: self.tail_note.clone(),
        }
    }

    pub fn rel_err(&self, ctx: &Ctx) -> f64 {
        let a = log2_abs(&self.value.abs(ctx.wp()));
        if a == f64::NEG_INFINITY {
            return self.err_bound;
        }
        self.err_bound / a.exp2()
    }
}

/// Sums the stored window of `f` at `q = e^(2 pi i z)`.
///
/// `min_height` is the height above which the expansion is valid; points at or
/// below it are refused.
pub fn eval_series(f: &LaurentSeries, z: &HPoint, min_height: Option<f64>, ctx: &mut Ctx) -> Result<Evaluation> {
    let y = z.y_f64();
    if let Some(h) = min_height {
        if y <= h {
            return Err(Error::RegionGuard { height: y, min_height: h });
        }
    }
    let p = ctx.wp();
    if f.is_zero() {
        return Ok(Evaluation::exact(Complex::zero(p)));
    }
    let q = ctx.q(&z.z);
    let log2q = -2.0 * std::f64::consts::PI * y / std::f64::consts::LN_2;
    let v = f.valuation();
    let prec = f.precision();
    let mut acc = Complex::zero(p);
    for n in (v..prec).rev() {
        acc = acc.mul(&q, p);
        let c = f.c(n);
        if !c.is_zero() {
            acc = acc.add(&Complex::from_rational(&c, p), p);
        }
    }
    let value = acc.mul(&q.powi(v, p), p);

    let len = (prec - v) as usize;
    let tail_len = len.div_ceil(4).max(2).min(len);
    let tail: Vec<(i64, f64)> = (prec - tail_len as i64..prec)
        .filter_map(|n| {
            let c = f.c(n);
            (!c.is_zero()).then(|| (n, log2_rat(&c)))
        })
        .collect();
    let (tail_log2, tail_note) = match tail.as_slice() {
        [] => (f64::NEG_INFINITY, "stored tail is zero; no growth estimate".to_string()),
        [(n, l)] => {
            let lead = l + (prec - n) as f64 * 0.0 + prec as f64 * log2q;
            (lead - (1.0 - (log2q).exp2()).log2(), "single nonzero tail coefficient; unit ratio assumed".to_string())
        }
        _ => {
            let rho = tail
                .windows(2)
                .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0) as f64)
                .fold(f64::NEG_INFINITY, f64::max)
                .max(0.0);
            let step = rho + log2q;
            if step >= 0.0 {
                return Err(Error::DivergentTail { ratio: step.exp2() });
            }
            let (n_last, l_last) = *tail.last().expect("nonempty");
            let lead = l_last + (prec - n_last) as f64 * rho + prec as f64 * log2q;
            (
                lead - (1.0 - step.exp2()).log2(),
                format!("geometric tail, ratio {:.3e} per term", step.exp2()),
            )
        }
    };
    let max_term = (v..prec)
        .filter_map(|n| {
            let c = f.c(n);
            (!c.is_zero()).then(|| log2_rat(&c) + n as f64 * log2q)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let rounding = max_term + (len as f64).log2() + 4.0 - ctx.wp() as f64;
    let err_bound = tail_log2.exp2() + rounding.exp2();
    Ok(Evaluation { value, err_bound, tail_note })
}

/// Evaluates a modular form of the given weight by first reducing the point
/// into the fundamental domain.
pub fn eval_modular(
    f: &LaurentSeries,
    weight: i64,
    z: &HPoint,
    min_height: Option<f64>,
    ctx: &mut Ctx,
) -> Result<Evaluation> {
    let (w, g) = reduce(z, ctx);
    let e = eval_series(f, &w, min_height, ctx)?;
    let [_, [c, d]] = g;
    if c == 0 && d == 1 {
        return Ok(e);
    }
    let p = ctx.wp();
    let j = z.z.mul(&Complex::from_i64(c, 0, p), p).add(&Complex::from_i64(d, 0, p), p);
    let factor = j.powi(-weight, p);
    let scale = to_f64(&factor.abs(p));
    Ok(Evaluation {
        value: e.value.mul(&factor, p),
        err_bound: e.err_bound * scale,
        tail_note: e.tail_note,
    })
}

/// `det(gamma)^(weight/2) (cz+d)^(-weight) f(gamma z)`.
pub fn slash(
    f: &mut dyn FnMut(&HPoint, &mut Ctx) -> Result<Evaluation>,
    gamma: &IntMatrix,
    weight: i64,
    z: &HPoint,
    ctx: &mut Ctx,
) -> Result<Evaluation> {
    if weight % 2 != 0 {
        return Err(Error::InvalidArgument(format!("weight must be even, got {weight}")));
    }
    let [[a, b], [c, d]] = *gamma;
    let det = a * d - b * c;
    if det <= 0 {
        return Err(Error::InvalidArgument("slash needs a matrix of positive determinant".into()));
    }
    let p = ctx.wp();
    let gz = HPoint::from_complex(mobius(gamma, &z.z, ctx))?;
    let e = f(&gz, ctx)?;
    let j = z.z.mul(&Complex::from_i64(c, 0, p), p).add(&Complex::from_i64(d, 0, p), p);
    let det_pow = Complex::from_rational(&crate::rational::pow_i(det, weight / 2), p);
    let factor = j.powi(-weight, p).mul(&det_pow, p);
    let scale = to_f64(&factor.abs(p));
    Ok(Evaluation {
        value: e.value.mul(&factor, p),
        err_bound: e.err_bound * scale,
        tail_note: e.tail_note,
    })
}

/// Both evaluations of `(f | T_m)(z)`.
#[derive(Clone, Debug)]
pub struct HeckeValue {
    /// Exact `T_m` on the series, then evaluation. `None` when the image
    /// series is too short to evaluate.
    pub series_path: Option<Evaluation>,
    /// `m^(2k-1) sum_{ad=m, b mod d} d^(-2k) f((az+b)/d)`.
    pub coset_path: Evaluation,
}

impl HeckeValue {
    /// The path with the smaller error bound.
    pub fn best(&self) -> &Evaluation {
        match &self.series_path {
            Some(s) if s.err_bound <= self.coset_path.err_bound => s,
            _ => &self.coset_path,
        }
    }

    pub fn rel_diff(&self, ctx: &Ctx) -> Option<f64> {
        let s = self.series_path.as_ref()?;
        Some(s.value.rel_diff(&self.coset_path.value, ctx.wp()))
    }
}

/// `(f |_weight T_m)(z)` for a weakly holomorphic `f`.
pub fn hecke_value(f: &LaurentSeries, weight: i64, m: i64, z: &HPoint, ctx: &mut Ctx) -> Result<HeckeValue> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("operator index must be positive, got {m}")));
    }
    let p = ctx.wp();
    let series_path = t_op(f, weight, m)
        .ok()
        .and_then(|t| eval_modular(&t, weight, z, None, ctx).ok());
    let mut sum = Complex::zero(p);
    let mut err = 0.0;
    for d in divisors(m) {
        let a = m / d;
        let dk = Complex::from_rational(&crate::rational::pow_i(d, -weight), p);
        for b in 0..d {
            let w = HPoint::from_complex(mobius(&[[a, b], [0, d]], &z.z, ctx))?;
            let e = eval_modular(f, weight, &w, None, ctx)?;
            sum = sum.add(&e.value.mul(&dk, p), p);
            err += e.err_bound * to_f64(&dk.re).abs();
        }
    }
    let mk = Complex::from_rational(&crate::rational::pow_i(m, weight - 1), p);
    let coset_path = Evaluation {
        value: sum.mul(&mk, p),
        err_bound: err * to_f64(&mk.re).abs(),
        tail_note: "coset sum".into(),
    };
    Ok(HeckeValue { series_path, coset_path })
}

/// `alpha = E_8(i) / Delta(i)`.
pub fn alpha(ctx: &mut Ctx) -> Result<Evaluation> {
    let terms = (ctx.bits() as i64) / 8 + 10;
    let i = HPoint::i(ctx);
    let e8 = eval_series(&eisenstein(8, terms)?.series, &i, None, ctx)?;
    let d = eval_series(&delta(terms).series, &i, None, ctx)?;
    Ok(quotient(&e8, &d, ctx))
}

fn quotient(a: &Evaluation, b: &Evaluation, ctx: &Ctx) -> Evaluation {
    let p = ctx.wp();
    let value = a.value.div(&b.value, p);
    let rel = a.rel_err(ctx) + b.rel_err(ctx);
    let err_bound = rel * to_f64(&value.abs(p));
    Evaluation { value, err_bound, tail_note: a.tail_note.clone() }
}

/// Evaluations at the CM point `(1 + sqrt(-7))/2`.
#[derive(Clone, Debug, Serialize)]
pub struct CmReport {
    pub bits: usize,
    pub omega: String,
    /// `|Im Delta| / |Delta|` at the point.
    pub delta_imag_ratio: f64,
    pub j: String,
    pub j_rel_err: f64,
    pub e4_over_omega4: String,
    pub e4_rel_err: f64,
    pub e6_over_sqrt7_omega6: String,
    pub e6_rel_err: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn cm_checks(ctx: &mut Ctx, tol: f64) -> Result<CmReport> {
    let p = ctx.wp();
    let z = HPoint::cm7(ctx);
    let terms = (ctx.bits() as i64) / 10 + 10;
    let dz = eval_series(&delta(terms).series, &z, None, ctx)?.value;
    let e4 = eval_series(&eisenstein(4, terms)?.series, &z, None, ctx)?.value;
    let e6 = eval_series(&eisenstein(6, terms)?.series, &z, None, ctx)?.value;
    let j = eval_series(&j_function(terms).series, &z, None, ctx)?.value;
    let delta_imag_ratio = (log2_abs(&dz.im) - log2_abs(&dz.abs(p))).exp2();
    let minus_delta = dz.re.neg();
    let log = ctx.ln(&minus_delta).div(&ctx.int(12), p, RM);
    let omega = ctx.exp(&log);
    let omega4 = Complex::real(omega.clone(), p).powi(4, p);
    let omega6 = Complex::real(omega.clone(), p).powi(6, p);
    let e4r = e4.div(&omega4, p);
    let e6r = e6.div(&omega6.scale(&ctx.sqrt(&ctx.int(7)), p), p);
    let j_rel_err = j.rel_diff(&Complex::from_i64(-3375, 0, p), p);
    let e4_rel_err = e4r.rel_diff(&Complex::from_i64(15, 0, p), p);
    let e6_rel_err = e6r.rel_diff(&Complex::from_i64(27, 0, p), p);
    let pass = delta_imag_ratio <= tol && j_rel_err <= tol && e4_rel_err <= tol && e6_rel_err <= tol;
    Ok(CmReport {
        bits: ctx.bits(),
        omega: ctx.format(&omega),
        delta_imag_ratio,
        j: ctx.format(&j.re),
        j_rel_err,
        e4_over_omega4: ctx.format(&e4r.re),
        e4_rel_err,
        e6_over_sqrt7_omega6: ctx.format(&e6r.re),
        e6_rel_err,
        tol,
        pass,
    })
}

/// The coefficient of `q^m` in `G_g(z, zz)`: `m^(2k-l) (g |_(2l-2k) T_m)(zz)`.
pub fn script_g_coefficient(
    g: &LaurentSeries,
    k: i64,
    ell: i64,
    zz: &HPoint,
    m: i64,
    ctx: &mut Ctx,
) -> Result<Evaluation> {
    let p = ctx.wp();
    let hv = hecke_value(g, 2 * ell - 2 * k, m, zz, ctx)?;
    let e = hv.best().clone();
    let s = Complex::from_rational(&crate::rational::pow_i(m, 2 * k - ell), p);
    Ok(Evaluation {
        value: e.value.mul(&s, p),
        err_bound: e.err_bound * to_f64(&s.re).abs(),
        tail_note: e.tail_note,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenRow {
    pub n: i64,
    /// Exact coefficient of `q^n` in `f_{6,i} | T_m - lambda f_{6,i}`.
    pub lhs: String,
    /// `-2^-10` times the coefficient of `q^n` in `G_{g_m}(z, i)`.
    pub rhs: f64,
    pub rel_err: f64,
    /// `lhs` divided by the `G_{g_m}` coefficient.
    pub fitted_constant: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenReport {
    pub m: i64,
    pub bits: usize,
    pub eigenvalue_shift: i64,
    pub rows: Vec<EigenRow>,
    pub max_rel_err: f64,
    /// Mean of the per-row ratios `lhs / G_{g_m}`, for comparison with `-2^-10`.
    pub fitted_constant: f64,
    pub fitted_spread: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Compares `f_{6,i} | T_m - sigma_5(m) f_{6,i}` with `-2^-10 G_{g_m}(z, i)`
/// coefficientwise for `n = 1..=n_max`. `eigenvalue_shift` is added to
/// `sigma_5(m)` and should be zero except for negative controls.
pub fn verify_f6i_eigen(m: i64, n_max: i64, eigenvalue_shift: i64, tol: f64, ctx: &mut Ctx) -> Result<EigenReport> {
    let name = match m {
        5 => FormName::G5,
        7 => FormName::G7,
        _ => return Err(Error::InvalidArgument(format!("no reference form for m = {m}; use 5 or 7"))),
    };
    let p = ctx.wp();
    let f = build(FormName::F6i, m * (n_max + 1) + 1)?.series;
    let lam = int(sigma(5, m as u64)) + rat(eigenvalue_shift);
    let lhs_series = t_op(&f, 6, m)?.sub(&f.scale(&lam));
    let terms = (ctx.bits() as i64) / 2 + 40;
    let g_scaled = build(name, terms)?.series;
    let a = alpha(ctx)?;
    let i = HPoint::i(ctx);
    let scale = BigFloat::from_f64(-1.0 / 1024.0, p);
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let c = lhs_series.coefficient(n)?;
        let sg = script_g_coefficient(&g_scaled, 3, 1, &i, n, ctx)?;
        let sg = sg.value.div(&a.value, p);
        let rhs = sg.scale(&scale, p);
        let lhs = Complex::from_rational(&c, p);
        let rel_err = lhs.rel_diff(&rhs, p);
        let fitted = lhs.div(&sg, p);
        rows.push(EigenRow {
            n,
            lhs: crate::rational::format_rational(&c),
            rhs: to_f64(&rhs.re),
            rel_err,
            fitted_constant: to_f64(&fitted.re),
        });
    }
    let fitted_constant = rows.iter().map(|r| r.fitted_constant).sum::<f64>() / rows.len().max(1) as f64;
    let fitted_spread = rows
        .iter()
        .map(|r| (r.fitted_constant - fitted_constant).abs() / fitted_constant.abs())
        .fold(0.0, f64::max);
    let max_rel_err = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    Ok(EigenReport {
        m,
        bits: ctx.bits(),
        eigenvalue_shift,
        rows,
        max_rel_err,
        fitted_constant,
        fitted_spread,
        tol,
        pass: max_rel_err <= tol,
    })
}
