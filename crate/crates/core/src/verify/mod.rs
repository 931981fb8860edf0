//! Residual suites: numeric checks of the differential equations,
//! automorphy and symmetry relations satisfied by the truncated series.
//!
//! A check passes when its residual is below `max(tolerance, 3·tail)`;
//! term-matched identities use the bare tolerance, since both sides run
//! over the same index set.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{Multivector, VectorPoint};
use crate::eisenstein::{eval_series, hypergenic_lift, SeriesKind, SeriesValue};
use crate::error::{Error, Result};
use crate::kernels::{kernel_series_over, orbit_elements, starred, KernelKind};
use crate::modular::{is_in_congruence_subgroup, translation_element, CosetTable, GroupElement, GroupParams};
use crate::operators::{apply_dirac, apply_dirac_power, apply_mk, FdConfig};
use crate::summation::{pairwise_sum, try_par_map_ordered, Truncation};
use crate::vahlen::{weight_factor, VahlenMatrix, WeightKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidualTarget {
    /// `D E_{p,N}` at sample points.
    Monogenicity,
    /// `D^k` of the k-genic series.
    KGenicity,
    /// `M_k ε_{k,p,N}`, and `M_{−k}` of its lift `ε e_n / x_n^k`.
    Hypergenicity,
    /// `E` and `ε` against their weights under random group elements.
    Automorphy,
    /// `C_S(x,y) = −rev(C_{S*}(y,x))`.
    Asymmetry,
    /// `E_{p,N}(t e_n) → 1`.
    LimitAtInfinity,
}

impl ResidualTarget {
    pub const ALL: [ResidualTarget; 6] = [
        ResidualTarget::Monogenicity,
        ResidualTarget::KGenicity,
        ResidualTarget::Hypergenicity,
        ResidualTarget::Automorphy,
        ResidualTarget::Asymmetry,
        ResidualTarget::LimitAtInfinity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ResidualTarget::Monogenicity => "monogenicity",
            ResidualTarget::KGenicity => "k-genicity",
            ResidualTarget::Hypergenicity => "hypergenicity",
            ResidualTarget::Automorphy => "automorphy",
            ResidualTarget::Asymmetry => "asymmetry",
            ResidualTarget::LimitAtInfinity => "limit-at-infinity",
        }
    }
}

impl std::str::FromStr for ResidualTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ResidualTarget::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown residual target '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub params: GroupParams,
    /// Row-norm cutoff `R`.
    #[serde(rename = "R")]
    pub r: f64,
    pub lattice_radius: f64,
    pub samples: usize,
    pub words: usize,
    /// Factors per random group element.
    pub word_length: usize,
    pub seed: u64,
    pub fd: FdConfig,
    /// Order for k-genicity (integer) and hypergenicity; each target picks
    /// the largest admissible value when absent.
    pub k: Option<f64>,
    /// Replaces every per-check tolerance.
    pub tolerance: Option<f64>,
    pub heights: Vec<f64>,
}

impl SuiteConfig {
    pub fn new(params: GroupParams, r: f64, lattice_radius: f64) -> Self {
        SuiteConfig {
            params,
            r,
            lattice_radius,
            samples: 10,
            words: 5,
            word_length: 3,
            seed: 0x5eed,
            fd: FdConfig::default(),
            k: None,
            tolerance: None,
            heights: vec![5.0, 10.0, 20.0, 50.0, 100.0],
        }
    }

    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

/// One check: the JSON-lines record of the `verify` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub point: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_point: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    pub residual: f64,
    pub tolerance: f64,
    pub tail_estimate: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn new(check: &str, point: &VectorPoint, residual: f64, tolerance: f64, tail: f64) -> Self {
        CheckRecord {
            check: check.into(),
            point: point.coords.clone(),
            second_point: None,
            word: None,
            residual,
            tolerance,
            tail_estimate: tail,
            pass: residual < tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub target: ResidualTarget,
    pub params: GroupParams,
    pub truncation: Truncation,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
}

const TOL_FIRST_ORDER: f64 = 1e-5;
const TOL_NESTED: f64 = 1e-3;
const TOL_IDENTITY: f64 = 1e-10;
const TOL_LIMIT: f64 = 1e-2;

/// Deterministic sample points above the cusp region: `x_i ∈ [−½, ½]`,
/// `x_n ∈ [0.8, 1.6]`.
pub fn sample_points(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<VectorPoint> {
    (0..count)
        .map(|_| {
            let mut c: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-0.5..0.5)).collect();
            c.push(rng.gen_range(0.8..1.6));
            VectorPoint::new(c)
        })
        .collect()
}

/// A product of `len` factors drawn from the non-identity table
/// representatives, their inverses and the translations `T_{±N e_i}`.
pub fn random_congruence_element(
    params: &GroupParams,
    table: &CosetTable,
    len: usize,
    rng: &mut ChaCha8Rng,
) -> Result<GroupElement> {
    let reps: Vec<&GroupElement> = table.reps.iter().skip(1).map(|r| &r.element).collect();
    let mut m = GroupElement::identity(params.p);
    for _ in 0..len {
        let pick_rep = !reps.is_empty() && rng.gen_bool(0.6);
        let f = if pick_rep {
            let e = reps[rng.gen_range(0..reps.len())];
            if rng.gen_bool(0.5) {
                e.clone()
            } else {
                e.inverse()
            }
        } else {
            let i = rng.gen_range(0..params.p);
            let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let mut u = vec![BigInt::from(0); params.p];
            u[i] = BigInt::from(sign * params.level as i64);
            translation_element(params.p, &u)
        };
        m = m.mul(&f);
    }
    if !is_in_congruence_subgroup(&m, params) {
        return Err(Error::Contract(format!("{} left Γ_p[N]", m.word_string())));
    }
    Ok(m)
}

fn series_at(kind: SeriesKind, cfg: &SuiteConfig, table: &CosetTable, x: &VectorPoint) -> Result<SeriesValue> {
    eval_series(kind, &cfg.params, x, table, cfg.r)
}

fn fd_tolerance(tol: f64, tail: f64) -> f64 {
    tol.max(3.0 * tail)
}

fn largest_below(bound: f64) -> f64 {
    // largest integer strictly below the bound
    (bound - 1.0).ceil()
}

/// Run the residual checks of `target`.
pub fn residual_suite(target: ResidualTarget, table: &CosetTable, cfg: &SuiteConfig) -> Result<ResidualReport> {
    cfg.fd.validate()?;
    let params = cfg.params;
    params.validate()?;
    let n = params.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points = sample_points(n, cfg.samples, &mut rng);
    let records = match target {
        ResidualTarget::Monogenicity => {
            let tol = cfg.tol(TOL_FIRST_ORDER);
            try_par_map_ordered(&points, |x| {
                let sv = series_at(SeriesKind::Monogenic, cfg, table, x)?;
                let f = |z: &VectorPoint| Ok(series_at(SeriesKind::Monogenic, cfg, table, z)?.value);
                let res = apply_dirac(&f, x, &cfg.fd)?.norm();
                Ok(CheckRecord::new("monogenicity", x, res, fd_tolerance(tol, sv.tail_estimate), sv.tail_estimate))
            })?
        }
        ResidualTarget::KGenicity => {
            let k = cfg.k.unwrap_or_else(|| largest_below((n - params.p - 1) as f64).min(3.0));
            if k.fract() != 0.0 || !(1.0..=3.0).contains(&k) {
                return Err(Error::InvalidParameters(format!("k-genicity checks use an integer 1 <= k <= 3, got {k}")));
            }
            let kind = SeriesKind::KGenic { k: k as i32 };
            let tol = cfg.tol(if k > 1.0 { TOL_NESTED } else { TOL_FIRST_ORDER });
            try_par_map_ordered(&points, |x| {
                let sv = series_at(kind, cfg, table, x)?;
                let f = |z: &VectorPoint| Ok(series_at(kind, cfg, table, z)?.value);
                let res = apply_dirac_power(&f, x, k as usize, &cfg.fd)?.norm();
                Ok(CheckRecord::new("k-genicity", x, res, fd_tolerance(tol, sv.tail_estimate), sv.tail_estimate))
            })?
        }
        ResidualTarget::Hypergenicity => {
            let k = cfg.k.unwrap_or_else(|| largest_below((n - params.p - 2) as f64));
            let kind = SeriesKind::Hypergenic { k };
            let tol = cfg.tol(TOL_FIRST_ORDER);
            let nested = try_par_map_ordered(&points, |x| {
                let sv = series_at(kind, cfg, table, x)?;
                let t = fd_tolerance(tol, sv.tail_estimate);
                let f = |z: &VectorPoint| Ok(series_at(kind, cfg, table, z)?.value);
                let res = apply_mk(&f, x, k, &cfg.fd)?.norm();
                let lift = |z: &VectorPoint| hypergenic_lift(&series_at(kind, cfg, table, z)?.value, k, z);
                let res_lift = apply_mk(&lift, x, -k, &cfg.fd)?.norm();
                let scale = x.last().powf(-k);
                Ok(vec![
                    CheckRecord::new("hypergenicity", x, res, t, sv.tail_estimate),
                    CheckRecord::new("hypergenic-lift", x, res_lift, t * scale, sv.tail_estimate * scale),
                ])
            })?;
            nested.into_iter().flatten().collect()
        }
        ResidualTarget::Automorphy => automorphy_records(table, cfg, &points, &mut rng)?,
        ResidualTarget::Asymmetry => {
            let ys = sample_points(n, cfg.samples, &mut rng);
            let elements = orbit_elements(&params, table, cfg.r, cfg.lattice_radius)?;
            let star = starred(&elements);
            let trunc = Truncation {
                row_cutoff: cfg.r,
                lattice_radius: cfg.lattice_radius,
                s: None,
            };
            let tol = cfg.tol(TOL_IDENTITY);
            let pairs: Vec<(VectorPoint, VectorPoint)> = points.into_iter().zip(ys).collect();
            try_par_map_ordered(&pairs, |(x, y)| {
                let a = kernel_series_over(KernelKind::Cauchy, &params, x, y, &elements, trunc.clone())?;
                let b = kernel_series_over(KernelKind::Cauchy, &params, y, x, &star, trunc.clone())?;
                let res = (&a.value + &b.value.reversion()).norm() / a.value.norm();
                let mut rec = CheckRecord::new("asymmetry", x, res, tol, a.tail_estimate);
                rec.second_point = Some(y.coords.clone());
                Ok(rec)
            })?
        }
        ResidualTarget::LimitAtInfinity => {
            let tol = cfg.tol(TOL_LIMIT);
            let t_max = cfg.heights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            // E − 1 decays like t^{−(n−1−p)}
            let beta = (n - 1 - params.p) as f64;
            try_par_map_ordered(&cfg.heights, |&t| {
                let x = VectorPoint::axis(n, n, t);
                let sv = series_at(SeriesKind::Monogenic, cfg, table, &x)?;
                let res = (&sv.value - &Multivector::one(n)).norm();
                let envelope = tol * (t_max / t).powf(beta);
                Ok(CheckRecord::new(
                    "limit-at-infinity",
                    &x,
                    res,
                    fd_tolerance(envelope, sv.tail_estimate),
                    sv.tail_estimate,
                ))
            })?
        }
    };
    let pass = records.iter().all(|r| r.pass);
    Ok(ResidualReport {
        target,
        params,
        truncation: Truncation {
            row_cutoff: cfg.r,
            lattice_radius: if target == ResidualTarget::Asymmetry { cfg.lattice_radius } else { 0.0 },
            s: None,
        },
        records,
        pass,
    })
}

/// `Σ_S w(S·M, x)` against `w(M, x) Σ_S w(S, M⟨x⟩)` over the same reps.
fn matched_automorphy(
    reps: &[VahlenMatrix],
    m: &VahlenMatrix,
    x: &VectorPoint,
    kind: WeightKind,
    k: f64,
) -> Result<f64> {
    let n = x.dim();
    let mx = m.mobius_apply(x)?;
    let lhs: Vec<Multivector> = reps
        .iter()
        .map(|s| weight_factor(kind, k, &s.matrix_mul(m), x))
        .collect::<Result<_>>()?;
    let rhs: Vec<Multivector> = reps.iter().map(|s| weight_factor(kind, k, s, &mx)).collect::<Result<_>>()?;
    let lhs = pairwise_sum(n, &lhs);
    let rhs = &weight_factor(kind, k, m, x)? * &pairwise_sum(n, &rhs);
    Ok((&lhs - &rhs).norm() / lhs.norm())
}

fn automorphy_records(
    table: &CosetTable,
    cfg: &SuiteConfig,
    points: &[VectorPoint],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<CheckRecord>> {
    let params = cfg.params;
    let n = params.n;
    let words: Vec<GroupElement> = (0..cfg.words)
        .map(|_| random_congruence_element(&params, table, cfg.word_length, rng))
        .collect::<Result<_>>()?;
    let reps: Vec<VahlenMatrix> = table.reps_up_to(cfg.r).iter().map(|r| r.float.clone()).collect();
    let tol = cfg.tol(TOL_IDENTITY);
    let mut series: Vec<(&str, WeightKind, f64)> = Vec::new();
    if eval_series(SeriesKind::Monogenic, &params, &points[0], table, cfg.r).is_ok() {
        series.push(("automorphy-monogenic", WeightKind::J, 1.0));
    }
    let k = cfg.k.unwrap_or_else(|| largest_below((n - params.p - 2) as f64));
    if eval_series(SeriesKind::Hypergenic { k }, &params, &points[0], table, cfg.r).is_ok() {
        series.push(("automorphy-hypergenic", WeightKind::K, k));
    }
    if series.is_empty() {
        return Err(Error::InvalidParameters(format!(
            "no Eisenstein series converges absolutely for {params:?}"
        )));
    }
    let mut jobs = Vec::new();
    for w in &words {
        for x in points {
            jobs.push((w, x));
        }
    }
    let nested = try_par_map_ordered(&jobs, |(w, x)| {
        let m = w.matrix.to_float(n);
        series
            .iter()
            .map(|(name, kind, k)| {
                let res = matched_automorphy(&reps, &m, x, *kind, *k)?;
                let mut rec = CheckRecord::new(name, x, res, tol, 0.0);
                rec.word = Some(w.word_string());
                Ok(rec)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(nested.into_iter().flatten().collect())
}
