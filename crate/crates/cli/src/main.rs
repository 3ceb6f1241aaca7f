mod cache;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use merohecke::forms::FormKind;
use merohecke::hecke::t_op;
use merohecke::meroforms::{self, build_formula, FormName, IdentityReport};
use merohecke::numeval::{
    cm_checks, eval_modular, eval_series, psi_truncated, psi_two_variable_check, verify_f6i_eigen, Ctx, HPoint,
    PoincareSeed,
};
use merohecke::quotient::{quotient_hecke_matrix, theorem_check, QuotientKind};
use merohecke::rational::format_rational;
use merohecke::whbasis::{solve_principal_part, Solution};
use merohecke::{Error, LaurentSeries, PrincipalPart};
use serde_json::json;

use cache::Cache;

const DEFAULT_BITS: usize = 200;
const DEFAULT_TOL: f64 = 1e-10;
const DEFAULT_BOUND: i64 = 40;

#[derive(Parser)]
#[command(name = "merohecke", version, about = "Exact and numeric computations with modular forms on SL2(Z)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the q-expansion of a named form or a product of E<k>, Delta, j and named forms.
    Expand {
        form: String,
        #[arg(long, default_value_t = 10)]
        prec: i64,
        #[arg(long)]
        json: bool,
    },
    /// Apply T_m to a series file (as written by `expand --json`) or a named form.
    Hecke {
        source: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<i64>,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 20)]
        prec: i64,
        #[arg(long)]
        json: bool,
    },
    /// Find the weakly holomorphic form with a given principal part.
    SolvePp {
        #[arg(long, allow_hyphen_values = true)]
        weight: i64,
        /// Comma-separated `r:coeff` terms for coeff * q^-r; `0:c` sets the constant term.
        #[arg(long)]
        pp: String,
        /// Pin the constant term, solving in S^! when it is zero.
        #[arg(long)]
        sshriek: bool,
        #[arg(long, default_value_t = 10)]
        prec: i64,
        #[arg(long)]
        json: bool,
    },
    /// Hecke matrix on a quotient of harmonic classes.
    Quotient {
        #[arg(long)]
        weight2k: i64,
        /// `modM!` or `modS!`.
        #[arg(long)]
        kind: QuotientKind,
        #[arg(long)]
        m: i64,
        /// Print the characteristic polynomial of m^(2k-1) times the matrix.
        #[arg(long)]
        charpoly: bool,
        /// Compare that polynomial with T_m on the holomorphic partner space.
        #[arg(long)]
        check: bool,
    },
    /// Run an exact identity check, or `all` of them plus the quotient grid.
    Verify {
        id: String,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Evaluate a form at a point of the upper half-plane.
    Eval {
        form: String,
        /// `x,y`, `i`, `rho` or `cm7`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: usize,
        #[arg(long)]
        prec: Option<i64>,
        /// Height above which the expansion converges, for formulas with poles.
        #[arg(long)]
        min_height: Option<f64>,
    },
    /// Values of E4, E6, Delta and j at the CM point (1 + sqrt(-7))/2.
    CmCheck {
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Compare f6i | T_m - sigma_5(m) f6i with the Fourier coefficients of G_{g_m}.
    EigenNum {
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: usize,
        #[arg(long, default_value_t = 10)]
        n: i64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
    },
    /// Truncated elliptic Poincare series.
    PsiSum {
        #[arg(long)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        #[arg(long, allow_hyphen_values = true)]
        zz: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: usize,
    },
    /// Hecke action on a Poincare series computed in both variables.
    PsiPropCheck {
        #[arg(long)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        #[arg(long, allow_hyphen_values = true)]
        zz: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

enum Failure {
    Mismatch,
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type Outcome = Result<(), Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::RegionGuard { .. } | Error::DivergentTail { .. } => 3,
        Error::Parse(_) | Error::InvalidArgument(_) | Error::NonUniqueSolution { .. } => 2,
        _ => 1,
    }
}

fn check(pass: bool) -> Outcome {
    if pass {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("value serializes"));
}

/// Named form or formula through the cache.
fn load_form(cache: &Cache, form: &str, precision: i64) -> merohecke::Result<(i64, LaurentSeries)> {
    let form = form.trim();
    let key = match form.parse::<FormName>() {
        Ok(name) => name.construction().to_string(),
        Err(_) => form.split_whitespace().collect(),
    };
    cache.get_or_compute(&key, precision, || build_formula(form, precision))
}

fn expand(cache: &Cache, form: &str, prec: i64, as_json: bool) -> Outcome {
    let (_, s) = load_form(cache, form, prec)?;
    if as_json {
        println!("{}", s.to_json());
    } else {
        println!("{s}");
    }
    Ok(())
}

fn hecke(cache: &Cache, source: &str, weight: Option<i64>, m: i64, prec: i64, as_json: bool) -> Outcome {
    let (w, s) = if Path::new(source).is_file() {
        let text = fs::read_to_string(source).map_err(|e| Error::Parse(format!("{source}: {e}")))?;
        let w = weight.ok_or_else(|| Error::InvalidArgument("--weight is required for series files".into()))?;
        (w, LaurentSeries::from_json(&text)?)
    } else {
        let (w, s) = load_form(cache, source, prec)?;
        if let Some(given) = weight.filter(|&given| given != w) {
            return Err(Error::InvalidArgument(format!("{source} has weight {w}, not {given}")).into());
        }
        (w, s)
    };
    let t = t_op(&s, w, m)?;
    if as_json {
        println!("{}", t.to_json());
    } else {
        println!("{t}");
        println!("window: q^{} .. q^{}", t.valuation().min(0), t.precision() - 1);
    }
    Ok(())
}

fn solve_pp(weight: i64, pp: &str, sshriek: bool, prec: i64, as_json: bool) -> Outcome {
    let pp = PrincipalPart::parse(pp)?;
    match solve_principal_part(weight, &pp, sshriek, prec)? {
        Solution::Form(f) => {
            if as_json {
                println!("{}", f.series.to_json());
            } else {
                println!("{}", f.series);
            }
            Ok(())
        }
        Solution::Obstructed(o) => {
            let o: Vec<String> = o.iter().map(format_rational).collect();
            if as_json {
                print_json(&json!({ "obstruction": o }));
            } else {
                println!("obstruction [{}]", o.join(", "));
            }
            Err(Failure::Mismatch)
        }
    }
}

fn quotient(weight2k: i64, kind: QuotientKind, m: i64, charpoly: bool, do_check: bool) -> Outcome {
    if !charpoly && !do_check {
        println!("{}", quotient_hecke_matrix(weight2k, kind, m)?.to_json());
        return Ok(());
    }
    let t = theorem_check(weight2k, kind, m)?;
    if charpoly {
        println!("{}", t.quotient_charpoly);
    }
    if do_check {
        let space = if kind.space() == FormKind::Cuspidal { "S" } else { "M" };
        print_json(&json!({
            "weight2k": weight2k,
            "kind": kind,
            "m": m,
            "quotient_charpoly": t.quotient_charpoly.to_string(),
            "space": format!("{space}{weight2k}"),
            "space_charpoly": t.space_charpoly.to_string(),
            "pass": t.holds(),
        }));
        return check(t.holds());
    }
    Ok(())
}

fn identity_report(id: &str, prec: Option<i64>) -> IdentityReport {
    let r = match prec {
        Some(p) => meroforms::verify_identity_at(id, p),
        None => meroforms::verify_identity(id),
    };
    r.unwrap_or_else(|e| IdentityReport {
        id: id.to_string(),
        pass: false,
        window: (0, 0),
        mismatch: None,
        detail: Some(e.to_string()),
    })
}

fn verify(id: &str, prec: Option<i64>) -> Outcome {
    if id != "all" {
        if !meroforms::identity_ids().iter().any(|known| known == id) && !id.starts_with("infty-eigen") {
            return Err(Error::InvalidArgument(format!(
                "unknown identity `{id}`; known: {}",
                meroforms::identity_ids().join(", ")
            ))
            .into());
        }
        let r = identity_report(id, prec);
        print_json(&r);
        return check(r.pass);
    }
    let identities: Vec<IdentityReport> = meroforms::identity_ids().iter().map(|id| identity_report(id, prec)).collect();
    let mut grid = Vec::new();
    for weight2k in (4..=28).step_by(2) {
        for m in [2, 3, 5] {
            for kind in [QuotientKind::ModM, QuotientKind::ModS] {
                let pass = theorem_check(weight2k, kind, m).map(|t| t.holds());
                grid.push(json!({
                    "id": format!("theorem({weight2k},{kind},{m})"),
                    "pass": pass.as_ref().is_ok_and(|p| *p),
                    "error": pass.err().map(|e| e.to_string()),
                }));
            }
        }
    }
    let pass = identities.iter().all(|r| r.pass) && grid.iter().all(|g| g["pass"] == true);
    print_json(&json!({ "identities": identities, "theorem_checks": grid, "pass": pass }));
    check(pass)
}

/// Largest validity height among named factors, and whether some factor
/// other than Delta is divided by.
fn formula_poles(form: &str) -> (Option<f64>, bool) {
    let mut height: Option<f64> = None;
    let mut divides = false;
    let mut op = '*';
    for tok in form.split_inclusive(['*', '/']) {
        let next = tok.chars().last().filter(|c| *c == '*' || *c == '/');
        let atom = tok.trim_end_matches(['*', '/']).split('^').next().unwrap_or("").trim();
        if let Ok(name) = atom.parse::<FormName>() {
            if let Some(h) = name.valid_height() {
                height = Some(height.map_or(h, |cur| cur.max(h)));
            }
        }
        if op == '/' && !matches!(atom, "Delta" | "D") {
            divides = true;
        }
        op = next.unwrap_or('*');
    }
    (height, divides)
}

fn eval(cache: &Cache, form: &str, at: &str, bits: usize, prec: Option<i64>, min_height: Option<f64>) -> Outcome {
    let mut ctx = Ctx::new(bits)?;
    let z = HPoint::parse(at, &mut ctx)?;
    let terms = prec.unwrap_or(bits as i64 / 6 + 20);
    let (weight, s) = load_form(cache, form, terms)?;
    let (named_height, divides) = formula_poles(form);
    let e = match min_height.or(named_height) {
        Some(h) => eval_series(&s, &z, Some(h), &mut ctx)?,
        None if divides => {
            return Err(Error::InvalidArgument(format!(
                "`{form}` may have poles in the upper half-plane; pass --min-height"
            ))
            .into())
        }
        None => eval_modular(&s, weight, &z, None, &mut ctx)?,
    };
    let note = match form.trim().parse::<FormName>() {
        Ok(FormName::G5 | FormName::G7) => Some("stored series is alpha times the form; divide by alpha"),
        _ => None,
    };
    print_json(&json!({
        "form": form,
        "note": note,
        "weight": weight,
        "at": at,
        "bits": bits,
        "terms": terms,
        "value": e.to_json(&mut ctx),
    }));
    Ok(())
}

fn cm_check(bits: usize, tol: f64) -> Outcome {
    let mut ctx = Ctx::new(bits)?;
    let r = cm_checks(&mut ctx, tol)?;
    print_json(&r);
    check(r.pass)
}

fn eigen_num(m: i64, bits: usize, n: i64, tol: f64, shift: i64) -> Outcome {
    let mut ctx = Ctx::new(bits)?;
    let r = verify_f6i_eigen(m, n, shift, tol, &mut ctx)?;
    print_json(&r);
    check(r.pass)
}

fn psi_sum(k: i64, ell: i64, zz: &str, at: &str, bound: i64, bits: usize) -> Outcome {
    let mut ctx = Ctx::new(bits)?;
    let seed = PoincareSeed::new(k, ell, HPoint::parse(zz, &mut ctx)?)?;
    let z = HPoint::parse(at, &mut ctx)?;
    let r = psi_truncated(&seed, &z, bound, &mut ctx)?;
    print_json(&json!({
        "k": k,
        "ell": ell,
        "bound": bound,
        "bits": bits,
        "value_re": ctx.format(&r.value.re),
        "value_im": ctx.format(&r.value.im),
        "tail_estimate": r.tail_estimate,
        "terms": r.terms,
        "vanishing": r.vanishing,
        "note": r.note,
    }));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn psi_prop_check(k: i64, ell: i64, zz: &str, at: &str, n: i64, bound: i64, bits: usize, tol: f64) -> Outcome {
    let mut ctx = Ctx::new(bits)?;
    let seed = PoincareSeed::new(k, ell, HPoint::parse(zz, &mut ctx)?)?;
    let z = HPoint::parse(at, &mut ctx)?;
    let r = psi_two_variable_check(&seed, &z, n, bound, &mut ctx)?;
    let pass = r.rel_diff <= tol;
    print_json(&json!({ "report": r, "tol": tol, "pass": pass }));
    check(pass)
}

fn run(cli: Cli) -> Outcome {
    let cache = Cache::from_env();
    match cli.command {
        Command::Expand { form, prec, json } => expand(&cache, &form, prec, json),
        Command::Hecke { source, weight, m, prec, json } => hecke(&cache, &source, weight, m, prec, json),
        Command::SolvePp { weight, pp, sshriek, prec, json } => solve_pp(weight, &pp, sshriek, prec, json),
        Command::Quotient { weight2k, kind, m, charpoly, check } => quotient(weight2k, kind, m, charpoly, check),
        Command::Verify { id, prec } => verify(&id, prec),
        Command::Eval { form, at, bits, prec, min_height } => eval(&cache, &form, &at, bits, prec, min_height),
        Command::CmCheck { bits, tol } => cm_check(bits, tol),
        Command::EigenNum { m, bits, n, tol, shift } => eigen_num(m, bits, n, tol, shift),
        Command::PsiSum { k, ell, zz, at, bound, bits } => psi_sum(k, ell, &zz, &at, bound, bits),
        Command::PsiPropCheck { k, ell, zz, at, n, bound, bits, tol } => {
            psi_prop_check(k, ell, &zz, &at, n, bound, bits, tol)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
