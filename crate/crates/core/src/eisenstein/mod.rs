//! Truncated Eisenstein-type series over a coset table.
//!
//! Every series here is `Σ w(M, x)` over the representatives with
//! `‖(c,d)‖ ≤ R`, for an automorphy factor `w`. The tail estimate fits a
//! power law `C·R^{−β}` with `β = α − p − 1`, where `‖w(M,x)‖ ~ ‖cx+d‖^{−α}`.

mod fourier;

pub use fourier::fourier_coefficient;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{Multivector, VectorPoint};
use crate::error::{Error, Result};
use crate::modular::{CosetRep, CosetTable, GroupParams};
pub use crate::summation::{SeriesValue, Truncation};
use crate::summation::{reduce_terms, try_par_map_ordered, Term};
use crate::vahlen::{weight_from_eval, MobiusEval, WeightKind};

/// Which Eisenstein-type series to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "series", rename_all = "snake_case")]
pub enum SeriesKind {
    /// `Σ J(M,x)`.
    Monogenic,
    /// `Σ J_k(M,x)`.
    KGenic { k: i32 },
    /// `Σ H(M,x)^s J(M,x)`.
    Hecke { s: f64 },
    /// `Σ K_k(M,x)`.
    Hypergenic { k: f64 },
    /// `Σ L_k(M,x)`.
    HyperbolicHarmonic { k: f64 },
}

pub(crate) fn check_point(params: &GroupParams, x: &VectorPoint) -> Result<()> {
    if x.dim() != params.n {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: params.n,
        });
    }
    if !(x.last() > 0.0) {
        return Err(Error::Domain(format!(
            "requires a point of the upper half-space (x_n > 0), got x_n = {}",
            x.last()
        )));
    }
    Ok(())
}

pub(crate) fn check_table(params: &GroupParams, table: &CosetTable) -> Result<()> {
    if table.params != *params {
        return Err(Error::InvalidParameters(format!(
            "coset table was built for {:?}, not {:?}",
            table.params, params
        )));
    }
    Ok(())
}

pub(crate) fn require_level_three(params: &GroupParams, what: &str) -> Result<()> {
    if params.level < 3 {
        return Err(Error::IdenticallyZero(format!(
            "{what} needs N >= 3: for N = {} the matrix −I lies in Γ_p[N] and the series \
             equals its own negative",
            params.level
        )));
    }
    Ok(())
}

/// Validate the parameter regime of `kind`; returns the tail exponent `β`.
pub fn series_decay(params: &GroupParams, kind: SeriesKind) -> Result<f64> {
    params.validate()?;
    let n = params.n as f64;
    let p = params.p as f64;
    match kind {
        SeriesKind::Monogenic => {
            if params.p + 2 >= params.n {
                return Err(Error::InvalidParameters(format!(
                    "the monogenic series requires p < n-2 (got p = {}, n = {}); use the Hecke \
                     series for p >= n-2",
                    params.p, params.n
                )));
            }
            require_level_three(params, "the monogenic Eisenstein series")?;
            Ok(n - 2.0 - p)
        }
        SeriesKind::KGenic { k } => {
            if k < 1 || k as usize >= params.n {
                return Err(Error::InvalidParameters(format!(
                    "the k-genic series requires 1 <= k < n (got k = {k}, n = {})",
                    params.n
                )));
            }
            let alpha = n - f64::from(k);
            if alpha <= p + 1.0 {
                return Err(Error::InvalidParameters(format!(
                    "the k-genic series needs weight exponent α = n-k > p+1, i.e. p < n-k-1 \
                     (got α = {alpha}, p = {})",
                    params.p
                )));
            }
            if k % 2 == 1 {
                require_level_three(params, "the k-genic series with odd k")?;
            }
            Ok(alpha - p - 1.0)
        }
        SeriesKind::Hecke { s } => {
            if params.p + 2 < params.n {
                return Err(Error::InvalidParameters(format!(
                    "the Hecke series is for p in {{n-2, n-1}} (got p = {}, n = {})",
                    params.p, params.n
                )));
            }
            let bound = p + 2.0 - n;
            if s <= bound {
                return Err(Error::InvalidParameters(format!(
                    "direct Hecke evaluation requires s > p+2-n = {bound} (got s = {s}); \
                     extrapolate to smaller s instead"
                )));
            }
            require_level_three(params, "the Hecke series")?;
            Ok(n - 2.0 - p + 2.0 * s)
        }
        SeriesKind::Hypergenic { k } => {
            if k >= n - p - 2.0 {
                return Err(Error::InvalidParameters(format!(
                    "the k-hypergenic series requires k < n-p-2 = {} (got k = {k})",
                    n - p - 2.0
                )));
            }
            require_level_three(params, "the k-hypergenic series")?;
            Ok(n - k - p - 2.0)
        }
        SeriesKind::HyperbolicHarmonic { k } => {
            // terms decay like ‖cx+d‖^{−(n−k−2)}, summable only past p+1
            if k >= n - p - 3.0 {
                return Err(Error::InvalidParameters(format!(
                    "the hyperbolic harmonic series needs weight exponent n-k-2 > p+1, i.e. \
                     k < n-p-3 = {} (got k = {k})",
                    n - p - 3.0
                )));
            }
            Ok(n - k - p - 3.0)
        }
    }
}

fn weight_for(kind: SeriesKind, n: usize, ev: &MobiusEval, x_n: f64) -> Result<Multivector> {
    match kind {
        SeriesKind::Monogenic => weight_from_eval(WeightKind::J, 1.0, n, ev, x_n),
        SeriesKind::KGenic { k } => weight_from_eval(WeightKind::J, f64::from(k), n, ev, x_n),
        SeriesKind::Hecke { s } => {
            let j = weight_from_eval(WeightKind::J, 1.0, n, ev, x_n)?;
            if s == 0.0 {
                return Ok(j);
            }
            let h = x_n / (ev.cxd_norm * ev.cxd_norm);
            Ok(j.scale(h.powf(s)))
        }
        SeriesKind::Hypergenic { k } => weight_from_eval(WeightKind::K, k, n, ev, x_n),
        SeriesKind::HyperbolicHarmonic { k } => weight_from_eval(WeightKind::L, k, n, ev, x_n),
    }
}

/// Generic driver: `Σ_{‖(c,d)‖ ≤ r} term(M, M-evaluation at x)`.
pub fn sum_over_table<F>(
    params: &GroupParams,
    x: &VectorPoint,
    table: &CosetTable,
    r: f64,
    beta: f64,
    s: Option<f64>,
    term: F,
) -> Result<SeriesValue>
where
    F: Fn(&CosetRep, &MobiusEval) -> Result<Multivector> + Sync + Send,
{
    check_point(params, x)?;
    check_table(params, table)?;
    let reps = table.reps_up_to(r);
    let terms = try_par_map_ordered(reps, |rep| {
        let ev = rep.float.evaluate(x)?;
        Ok(Term {
            value: term(rep, &ev)?,
            row_norm: rep.row_norm,
            shift_norm: 0.0,
        })
    })?;
    reduce_terms(
        params.n,
        terms,
        Truncation {
            row_cutoff: r,
            lattice_radius: 0.0,
            s: s.map(|v| Complex64::new(v, 0.0)),
        },
        beta,
        None,
    )
}

/// Evaluate the series `kind` at `x` over representatives with `‖(c,d)‖ ≤ r`.
pub fn eval_series(
    kind: SeriesKind,
    params: &GroupParams,
    x: &VectorPoint,
    table: &CosetTable,
    r: f64,
) -> Result<SeriesValue> {
    let beta = series_decay(params, kind)?;
    let s = match kind {
        SeriesKind::Hecke { s } => Some(s),
        _ => None,
    };
    let n = params.n;
    let x_n = x.last();
    sum_over_table(params, x, table, r, beta, s, |_, ev| weight_for(kind, n, ev, x_n))
}

/// `E_{p,N}(x) = Σ J(M,x)`.
pub fn eval_eisenstein_monogenic(
    params: &GroupParams,
    x: &VectorPoint,
    table: &CosetTable,
    r: f64,
) -> Result<SeriesValue> {
    eval_series(SeriesKind::Monogenic, params, x, table, r)
}

/// `Σ J_k(M,x)`.
pub fn eval_eisenstein_kgenic(
    params: &GroupParams,
    k: i32,
    x: &VectorPoint,
    table: &CosetTable,
    r: f64,
) -> Result<SeriesValue> {
    eval_series(SeriesKind::KGenic { k }, params, x, table, r)
}

/// `Σ H(M,x)^s J(M,x)` for real `s`.
pub fn eval_eisenstein_hecke(
    params: &GroupParams,
    x: &VectorPoint,
    s: f64,
    table: &CosetTable,
    r: f64,
) -> Result<SeriesValue> {
    eval_series(SeriesKind::Hecke { s }, params, x, table, r)
}

/// `ε_{k,p,N}(x) = Σ K_k(M,x)`.
pub fn eval_eisenstein_hypergenic(
    params: &GroupParams,
    k: f64,
    x: &VectorPoint,
    table: &CosetTable,
    r: f64,
) -> Result<SeriesValue> {
    eval_series(SeriesKind::Hypergenic { k }, params, x, table, r)
}

/// `Σ L_k(M,x)`.
pub fn eval_eisenstein_hyperbolic_harmonic(
    params: &GroupParams,
    k: f64,
    x: &VectorPoint,
    table: &CosetTable,
    r: f64,
) -> Result<SeriesValue> {
    eval_series(SeriesKind::HyperbolicHarmonic { k }, params, x, table, r)
}

/// `Σ J(M,x) f(M⟨x⟩)` for a bounded periodic left-monogenic `f`.
pub fn poincare_series<F>(
    params: &GroupParams,
    f: F,
    x: &VectorPoint,
    table: &CosetTable,
    r: f64,
) -> Result<SeriesValue>
where
    F: Fn(&VectorPoint) -> Result<Multivector> + Sync + Send,
{
    let beta = series_decay(params, SeriesKind::Monogenic)?;
    let n = params.n;
    let x_n = x.last();
    sum_over_table(params, x, table, r, beta, None, |_, ev| {
        let j = weight_from_eval(WeightKind::J, 1.0, n, ev, x_n)?;
        Ok(&j * &f(&ev.image)?)
    })
}

/// `f e_n / x_n^k`.
pub fn hypergenic_lift(f: &Multivector, k: f64, x: &VectorPoint) -> Result<Multivector> {
    let x_n = x.last();
    if !(x_n > 0.0) {
        return Err(Error::Domain(format!("the lift needs x_n > 0, got {x_n}")));
    }
    let en = Multivector::e(f.dim(), f.dim());
    Ok((f * &en).scale(x_n.powf(-k)))
}

/// The s → 0⁺ limit obtained from a ladder of Hecke evaluations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extrapolated {
    pub value: SeriesValue,
    /// `‖P_all(0) − P_{all but last}(0)‖` for the interpolating polynomials.
    pub extrapolation_error: f64,
}

fn neville_at_zero(points: &[(f64, &Multivector)]) -> Multivector {
    let dim = points[0].1.dim();
    let size = 1usize << dim;
    let mut out = Multivector::zero(dim);
    for coef in 0..size {
        let xs: Vec<f64> = points.iter().map(|(s, _)| *s).collect();
        let mut p: Vec<f64> = points.iter().map(|(_, v)| v.coeff(coef)).collect();
        let m = p.len();
        for level in 1..m {
            for i in 0..m - level {
                let (xi, xj) = (xs[i], xs[i + level]);
                p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
            }
        }
        out.set(coef, p[0]);
    }
    out
}

/// Polynomial extrapolation in `s` of the rungs to `s = 0`.
pub fn extrapolate_to_zero(rungs: &[SeriesValue]) -> Result<Extrapolated> {
    if rungs.len() < 2 {
        return Err(Error::InvalidParameters("extrapolation needs at least two rungs".into()));
    }
    let mut pts = Vec::with_capacity(rungs.len());
    for r in rungs {
        let s = r
            .truncation
            .s
            .ok_or_else(|| Error::InvalidParameters("rung without an s value".into()))?;
        pts.push((s.re, &r.value));
    }
    for w in pts.windows(2) {
        if !(w[1].0 < w[0].0) || !(w[1].0 > 0.0) {
            return Err(Error::InvalidParameters(
                "the s ladder must be strictly decreasing and positive".into(),
            ));
        }
    }
    let all = neville_at_zero(&pts);
    let fewer = neville_at_zero(&pts[..pts.len() - 1]);
    let err = (&all - &fewer).norm();
    let tail = rungs.iter().map(|r| r.tail_estimate).fold(0.0, f64::max);
    let first = &rungs[0];
    Ok(Extrapolated {
        value: SeriesValue {
            value: all,
            terms_used: rungs.iter().map(|r| r.terms_used).max().unwrap_or(0),
            tail_estimate: tail,
            truncation: Truncation {
                row_cutoff: first.truncation.row_cutoff,
                lattice_radius: first.truncation.lattice_radius,
                s: Some(Complex64::new(0.0, 0.0)),
            },
        },
        extrapolation_error: err,
    })
}

pub const DEFAULT_LADDER: [f64; 4] = [0.4, 0.2, 0.1, 0.05];

/// Hecke series on every rung of `ladder`, then extrapolated to `s = 0`.
pub fn eval_hecke_extrapolated(
    params: &GroupParams,
    x: &VectorPoint,
    ladder: &[f64],
    table: &CosetTable,
    r: f64,
) -> Result<Extrapolated> {
    let rungs = ladder
        .iter()
        .map(|&s| eval_eisenstein_hecke(params, x, s, table, r))
        .collect::<Result<Vec<_>>>()?;
    extrapolate_to_zero(&rungs)
}
