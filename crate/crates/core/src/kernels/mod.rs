//! Fundamental solutions and their automorphized series over `Γ_p[N]`.
//!
//! A series is a sum over orbit elements `T·M`, a coset representative `M`
//! premultiplied by a lattice translation `T`. Every sum can be evaluated
//! on an explicit element list, so that matched index sets (`S·L`, `S*`)
//! can be compared term for term.

mod pointwise;

pub use pointwise::{
    green_k, hyper_kernels_pointwise, normalization_constant_ck, omega, HyperKernels,
    POINT_POLE_TOLERANCE,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{Multivector, VectorPoint};
use crate::eisenstein::{check_point, check_table, extrapolate_to_zero, require_level_three, Extrapolated};
use crate::error::{Error, Result};
use crate::modular::{translation_lattice_iter, CosetTable, GroupParams};
use crate::summation::{reduce_terms, try_par_map_ordered, SeriesValue, Term, Truncation};
use crate::vahlen::{weight_from_eval, MobiusEval, VahlenMatrix, WeightKind};

pub(crate) use pointwise::h_kernel;
use pointwise::{cauchy_g, e_kernel, f_kernel, p_kernel, q_kernel};

/// Orbit points closer than this to the second argument are poles.
pub const ORBIT_POLE_TOLERANCE: f64 = 1e-9;

/// A kernel series value at `(x, y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Multivector,
    pub x: VectorPoint,
    pub y: VectorPoint,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub truncation: Truncation,
    /// Smallest distance between the second point and an orbit point.
    pub min_orbit_distance: f64,
}

impl KernelValue {
    pub fn series(&self) -> SeriesValue {
        SeriesValue {
            value: self.value.clone(),
            terms_used: self.terms_used,
            tail_estimate: self.tail_estimate,
            truncation: self.truncation.clone(),
        }
    }
}

/// One orbit element `T·M` in floating point.
#[derive(Clone, Debug)]
pub struct OrbitElement {
    pub matrix: VahlenMatrix,
    /// `‖(c,d)‖` of `M`.
    pub row_norm: f64,
    /// `‖u‖` of the translation `T = T_u`.
    pub shift_norm: f64,
    /// Shared by the two members of a `±m` translation pair.
    pub pair: usize,
}

/// `T·M` for every representative with `‖(c,d)‖ ≤ r` and every lattice
/// translation with `‖u‖ ≤ lattice_radius`, representatives outermost.
pub fn orbit_elements(
    params: &GroupParams,
    table: &CosetTable,
    r: f64,
    lattice_radius: f64,
) -> Result<Vec<OrbitElement>> {
    check_table(params, table)?;
    let lattice = translation_lattice_iter(params, lattice_radius);
    let per_rep = lattice.len().div_ceil(2);
    let translations: Vec<Option<VahlenMatrix>> = lattice
        .iter()
        .map(|t| (t.shift.norm() > 0.0).then(|| VahlenMatrix::translation(&t.shift)))
        .collect();
    let mut out = Vec::new();
    for (i, rep) in table.reps_up_to(r).iter().enumerate() {
        for (j, (t, tm)) in lattice.iter().zip(&translations).enumerate() {
            let matrix = match tm {
                Some(tm) => tm.matrix_mul(&rep.float),
                None => rep.float.clone(),
            };
            out.push(OrbitElement {
                matrix,
                row_norm: rep.row_norm,
                shift_norm: t.shift.norm(),
                pair: i * per_rep + j.div_ceil(2),
            });
        }
    }
    Ok(out)
}

/// `{T·M·L}` for `L` applied on the right.
pub fn right_multiplied(elements: &[OrbitElement], l: &VahlenMatrix) -> Vec<OrbitElement> {
    elements
        .iter()
        .map(|e| OrbitElement {
            matrix: e.matrix.matrix_mul(l),
            ..e.clone()
        })
        .collect()
}

/// `{(T·M)*}`.
pub fn starred(elements: &[OrbitElement]) -> Vec<OrbitElement> {
    elements
        .iter()
        .map(|e| OrbitElement {
            matrix: e.matrix.star(),
            ..e.clone()
        })
        .collect()
}

/// The hypermonogenic and hyperbolic harmonic series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HyperSeriesKind {
    /// `Σ K_{n−2}(M,x) p(TM⟨x⟩,y)`, translations in `±m` pairs; `p = 1`.
    A,
    /// `Σ K_{2−n}(M,x) q(TM⟨x⟩,y)`.
    B,
    /// `Σ K_{2−n}(M,x) E(TM⟨x⟩,y)`.
    E2n,
    /// `Σ \hat{K}_{2−n}(M,x) F(TM⟨x⟩,y)`.
    F2n,
    /// `Σ L_{2−n}(M,y) H(TM⟨y⟩,x)`, an orbit in the second point.
    HSeries,
}

/// Every kernel series with a closed-form term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelKind {
    /// `Σ J(M,x) G(y − TM⟨x⟩)`.
    Cauchy,
    /// `Σ J_k(M,x) G_k(y − TM⟨x⟩)`.
    KGenic { k: usize },
    /// `Σ H(M,x)^s J(M,x) G(y − TM⟨x⟩)`, `±m` pairs when `p = n−1`.
    Hecke { s: f64 },
    Hyper(HyperSeriesKind),
}

struct Regime {
    beta_row: f64,
    beta_lattice: f64,
    paired: bool,
}

fn regime(kind: KernelKind, params: &GroupParams) -> Result<Regime> {
    params.validate()?;
    let (n, p) = (params.n, params.p);
    let nf = n as f64;
    let pf = p as f64;
    let need = |ok: bool, msg: String| {
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameters(msg))
        }
    };
    let plain = |beta_row: f64, beta_lattice: f64| Regime {
        beta_row,
        beta_lattice,
        paired: false,
    };
    match kind {
        KernelKind::Cauchy => {
            need(p + 2 < n, format!("the Cauchy kernel series requires p < n-2 (p = {p}, n = {n}); use the Hecke kernel"))?;
            require_level_three(params, "the Cauchy kernel series")?;
            Ok(plain(nf - 2.0 - pf, nf - 1.0 - pf))
        }
        KernelKind::KGenic { k } => {
            need(k >= 1 && k < n, format!("the k-genic kernel requires 1 <= k < n (k = {k}, n = {n})"))?;
            need(p + 1 + k < n, format!("the k-genic kernel requires p < n-1-k (p = {p}, n = {n}, k = {k})"))?;
            if k % 2 == 1 {
                require_level_three(params, "the k-genic kernel with odd k")?;
            }
            let kf = k as f64;
            Ok(plain(nf - kf - pf - 1.0, nf - kf - pf))
        }
        KernelKind::Hecke { s } => {
            need(p + 2 >= n, format!("the Hecke kernel is for p in {{n-2, n-1}} (p = {p}, n = {n})"))?;
            if !(s > 0.0) {
                return Err(Error::InvalidParameters(format!(
                    "direct Hecke kernel evaluation requires s > 0 (got s = {s}); extrapolate instead"
                )));
            }
            require_level_three(params, "the Hecke kernel")?;
            let paired = p + 1 == n;
            Ok(Regime {
                beta_row: nf - 2.0 - pf + 2.0 * s,
                beta_lattice: if paired { nf - pf } else { nf - 1.0 - pf },
                paired,
            })
        }
        KernelKind::Hyper(h) => {
            need(n >= 3, format!("hypermonogenic kernels need n >= 3, got n = {n}"))?;
            match h {
                HyperSeriesKind::A => {
                    need(p == 1, format!("the A-series is defined for p = 1 only (got p = {p})"))?;
                    require_level_three(params, "the A-series")?;
                    Ok(Regime {
                        beta_row: 2.0 * nf - 4.0 - pf,
                        beta_lattice: 2.0 * nf - 2.0 - pf,
                        paired: true,
                    })
                }
                HyperSeriesKind::B | HyperSeriesKind::E2n | HyperSeriesKind::F2n => {
                    need(p + 2 < n, format!("the {h:?} series requires p < n-2 (p = {p}, n = {n})"))?;
                    require_level_three(params, "odd-weight hypermonogenic series")?;
                    Ok(plain(2.0 * nf - 4.0 - pf, 2.0 * nf - 3.0 - pf))
                }
                HyperSeriesKind::HSeries => {
                    need(p + 3 < n, format!("the H-series requires p < n-3 (p = {p}, n = {n})"))?;
                    Ok(plain(2.0 * nf - 5.0 - pf, 2.0 * nf - 4.0 - pf))
                }
            }
        }
    }
}

fn orbit_gap(image: &VectorPoint, target: &VectorPoint) -> Result<f64> {
    let d = image.distance(target);
    if d < ORBIT_POLE_TOLERANCE {
        return Err(Error::Pole(format!(
            "orbit point {:?} lies within {d:e} of {:?}",
            image.coords, target.coords
        )));
    }
    Ok(d)
}

fn j1(n: usize, ev: &MobiusEval) -> Result<Multivector> {
    weight_from_eval(WeightKind::J, 1.0, n, ev, 0.0)
}

fn kernel_term(
    kind: KernelKind,
    n: usize,
    x: &VectorPoint,
    y: &VectorPoint,
    m: &VahlenMatrix,
) -> Result<(Multivector, f64)> {
    let nf = n as f64;
    if let KernelKind::Hyper(HyperSeriesKind::HSeries) = kind {
        let ev = m.evaluate(y)?;
        let gap = orbit_gap(&ev.image, x)?;
        let w = weight_from_eval(WeightKind::L, 2.0 - nf, n, &ev, 0.0)?;
        return Ok((w.scale(h_kernel(&ev.image, x, n)?), gap));
    }
    let ev = m.evaluate(x)?;
    let u = &ev.image;
    let gap = orbit_gap(u, y)?;
    let value = match kind {
        KernelKind::Cauchy => &j1(n, &ev)? * &cauchy_g(&y.sub(u), n),
        KernelKind::KGenic { k } => {
            let w = weight_from_eval(WeightKind::J, k as f64, n, &ev, 0.0)?;
            &w * &green_k(k, y, u, n)?
        }
        KernelKind::Hecke { s } => {
            let h = x.last() / (ev.cxd_norm * ev.cxd_norm);
            (&j1(n, &ev)? * &cauchy_g(&y.sub(u), n)).scale(h.powf(s))
        }
        KernelKind::Hyper(h) => {
            let k2n = || weight_from_eval(WeightKind::K, 2.0 - nf, n, &ev, 0.0);
            match h {
                HyperSeriesKind::A => {
                    &weight_from_eval(WeightKind::K, nf - 2.0, n, &ev, 0.0)? * &p_kernel(u, y, n)?
                }
                HyperSeriesKind::B => &k2n()? * &q_kernel(u, y, n)?,
                HyperSeriesKind::E2n => &k2n()? * &e_kernel(u, y, n)?,
                HyperSeriesKind::F2n => &k2n()?.hat() * &f_kernel(u, y, n)?,
                HyperSeriesKind::HSeries => unreachable!("handled above"),
            }
        }
    };
    Ok((value, gap))
}

fn check_pair(params: &GroupParams, x: &VectorPoint, y: &VectorPoint) -> Result<()> {
    check_point(params, x)?;
    check_point(params, y)
}

/// Sum `term` over `elements`, merging `±m` pairs when `paired`.
fn sum_elements<F>(
    n: usize,
    x: &VectorPoint,
    y: &VectorPoint,
    elements: &[OrbitElement],
    truncation: Truncation,
    regime: &Regime,
    term: F,
) -> Result<KernelValue>
where
    F: Fn(&VahlenMatrix) -> Result<(Multivector, f64)> + Sync + Send,
{
    let evaluated = try_par_map_ordered(elements, |e| term(&e.matrix))?;
    let min_gap = evaluated.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
    let mut terms: Vec<Term> = Vec::with_capacity(evaluated.len());
    let mut last_pair = None;
    for (e, (value, _)) in elements.iter().zip(evaluated) {
        if regime.paired && last_pair == Some(e.pair) {
            let t = terms.last_mut().expect("pair continues a term");
            t.value += &value;
            continue;
        }
        last_pair = Some(e.pair);
        terms.push(Term {
            value,
            row_norm: e.row_norm,
            shift_norm: e.shift_norm,
        });
    }
    let sv = reduce_terms(n, terms, truncation, regime.beta_row, Some(regime.beta_lattice))?;
    Ok(KernelValue {
        value: sv.value,
        x: x.clone(),
        y: y.clone(),
        terms_used: elements.len(),
        tail_estimate: sv.tail_estimate,
        truncation: sv.truncation,
        min_orbit_distance: min_gap,
    })
}

/// Evaluate `kind` at `(x, y)` over an explicit element list.
pub fn kernel_series_over(
    kind: KernelKind,
    params: &GroupParams,
    x: &VectorPoint,
    y: &VectorPoint,
    elements: &[OrbitElement],
    truncation: Truncation,
) -> Result<KernelValue> {
    let reg = regime(kind, params)?;
    check_pair(params, x, y)?;
    let n = params.n;
    sum_elements(n, x, y, elements, truncation, &reg, |m| kernel_term(kind, n, x, y, m))
}

/// Evaluate `kind` over rows `‖(c,d)‖ ≤ r` and translations `‖u‖ ≤ lattice_radius`.
pub fn kernel_series(
    kind: KernelKind,
    params: &GroupParams,
    x: &VectorPoint,
    y: &VectorPoint,
    table: &CosetTable,
    r: f64,
    lattice_radius: f64,
) -> Result<KernelValue> {
    regime(kind, params)?;
    let elements = orbit_elements(params, table, r, lattice_radius)?;
    let s = match kind {
        KernelKind::Hecke { s } => Some(Complex64::new(s, 0.0)),
        _ => None,
    };
    let truncation = Truncation {
        row_cutoff: r,
        lattice_radius,
        s,
    };
    kernel_series_over(kind, params, x, y, &elements, truncation)
}

/// `C_{p,N}(x,y)`.
pub fn cauchy_kernel(
    params: &GroupParams,
    x: &VectorPoint,
    y: &VectorPoint,
    table: &CosetTable,
    r: f64,
    lattice_radius: f64,
) -> Result<KernelValue> {
    kernel_series(KernelKind::Cauchy, params, x, y, table, r, lattice_radius)
}

/// `C_{k,p,N}(x,y)`.
pub fn kgenic_kernel(
    k: usize,
    params: &GroupParams,
    x: &VectorPoint,
    y: &VectorPoint,
    table: &CosetTable,
    r: f64,
    lattice_radius: f64,
) -> Result<KernelValue> {
    kernel_series(KernelKind::KGenic { k }, params, x, y, table, r, lattice_radius)
}

/// `C_{p,N,s}(x,y)` for real `s > 0`.
pub fn hecke_kernel(
    params: &GroupParams,
    x: &VectorPoint,
    y: &VectorPoint,
    s: f64,
    table: &CosetTable,
    r: f64,
    lattice_radius: f64,
) -> Result<KernelValue> {
    kernel_series(KernelKind::Hecke { s }, params, x, y, table, r, lattice_radius)
}

/// `C_{p,N}(x,y)` for `p ≥ n−2` as the `s → 0⁺` limit of the Hecke kernels.
#[allow(clippy::too_many_arguments)]
pub fn hecke_kernel_extrapolated(
    params: &GroupParams,
    x: &VectorPoint,
    y: &VectorPoint,
    ladder: &[f64],
    table: &CosetTable,
    r: f64,
    lattice_radius: f64,
) -> Result<Extrapolated> {
    let rungs = ladder
        .iter()
        .map(|&s| hecke_kernel(params, x, y, s, table, r, lattice_radius).map(|v| v.series()))
        .collect::<Result<Vec<_>>>()?;
    extrapolate_to_zero(&rungs)
}

/// The series of [`HyperSeriesKind`].
pub fn hyper_series(
    kind: HyperSeriesKind,
    params: &GroupParams,
    x: &VectorPoint,
    y: &VectorPoint,
    table: &CosetTable,
    r: f64,
    lattice_radius: f64,
) -> Result<KernelValue> {
    kernel_series(KernelKind::Hyper(kind), params, x, y, table, r, lattice_radius)
}

const PHI_PROBES: [[f64; 3]; 4] = [
    [0.3, -0.8, 0.5],
    [1.0, 0.2, -0.1],
    [-0.4, 0.4, 0.9],
    [0.05, 1.3, 0.7],
];

/// Spot checks `φ(−u) = −φ(u)` and `φ(2u) = φ(u)`.
pub fn check_phi<F>(phi: &F, n: usize) -> Result<()>
where
    F: Fn(&VectorPoint) -> Multivector,
{
    for probe in PHI_PROBES {
        let u = VectorPoint::new((0..n).map(|i| probe[i % 3] * (1.0 + 0.1 * i as f64)).collect());
        let v = phi(&u);
        let scale = v.norm().max(1.0);
        let odd = (&phi(&u.scale(-1.0)) + &v).norm();
        let homog = (&phi(&u.scale(2.0)) - &v).norm();
        if odd > 1e-12 * scale {
            return Err(Error::Contract(format!("phi is not odd: defect {odd:e} at {:?}", u.coords)));
        }
        if homog > 1e-12 * scale {
            return Err(Error::Contract(format!(
                "phi is not homogeneous of degree 0: defect {homog:e} at {:?}",
                u.coords
            )));
        }
    }
    Ok(())
}

/// `Σ J(M,x) K(TM⟨x⟩ − y)` with `K(u) = φ(u)/‖u‖^{n−1}` over explicit elements.
pub fn cz_kernel_over<F>(
    phi: F,
    params: &GroupParams,
    x: &VectorPoint,
    y: &VectorPoint,
    elements: &[OrbitElement],
    truncation: Truncation,
) -> Result<KernelValue>
where
    F: Fn(&VectorPoint) -> Multivector + Sync + Send,
{
    let mut reg = regime(KernelKind::Cauchy, params)?;
    check_pair(params, x, y)?;
    check_phi(&phi, params.n)?;
    let n = params.n;
    reg.beta_lattice = n as f64 - 1.0 - params.p as f64;
    sum_elements(n, x, y, elements, truncation, &reg, |m| {
        let ev = m.evaluate(x)?;
        let gap = orbit_gap(&ev.image, y)?;
        let u = ev.image.sub(y);
        let k = phi(&u).scale(u.norm().powi(1 - n as i32));
        Ok((&j1(n, &ev)? * &k, gap))
    })
}

/// The Calderón–Zygmund type kernel series `K_{p,N}(x,y)`.
#[allow(clippy::too_many_arguments)]
pub fn cz_kernel_series<F>(
    phi: F,
    params: &GroupParams,
    x: &VectorPoint,
    y: &VectorPoint,
    table: &CosetTable,
    r: f64,
    lattice_radius: f64,
) -> Result<KernelValue>
where
    F: Fn(&VectorPoint) -> Multivector + Sync + Send,
{
    regime(KernelKind::Cauchy, params)?;
    let elements = orbit_elements(params, table, r, lattice_radius)?;
    let truncation = Truncation {
        row_cutoff: r,
        lattice_radius,
        s: None,
    };
    cz_kernel_over(phi, params, x, y, &elements, truncation)
}

/// `J(M,x) G(y − M⟨x⟩)` for a single matrix.
pub fn cauchy_term(m: &VahlenMatrix, x: &VectorPoint, y: &VectorPoint) -> Result<Multivector> {
    let n = m.dim();
    Ok(kernel_term(KernelKind::Cauchy, n, x, y, m)?.0)
}

/// Smallest `‖y − TM⟨x⟩‖` over `elements`.
pub fn min_orbit_distance(elements: &[OrbitElement], x: &VectorPoint, y: &VectorPoint) -> Result<f64> {
    let mut best = f64::INFINITY;
    for e in elements {
        best = best.min(e.matrix.mobius_apply(x)?.distance(y));
    }
    Ok(best)
}
