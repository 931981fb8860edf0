//! Volume potentials and their reproduction by differential operators.
//!
//! The midpoint grid moves with the evaluation point: nodes are
//! `x_j = y + (j + ½)Δ`, so the singular factor `G(−u_j)` is a fixed
//! weight and the difference stencil acts on smooth functions of `y`.

use serde::{Deserialize, Serialize};

use super::cauchy::{check_ball_in_domain, SeriesSource};
use super::fd::{apply_dirac_power, apply_laplacian_k, FdConfig, Field};
use crate::clifford::{Multivector, VectorPoint};
use crate::error::{Error, Result};
use crate::kernels::{green_k, h_kernel, kernel_series_over, HyperSeriesKind, KernelKind, OrbitElement};
use crate::modular::GroupParams;
use crate::summation::{pairwise_sum, try_par_map_ordered};
use crate::vahlen::{weight_from_eval, WeightKind};

/// Support ball of `ψ` and the resolution of the grid over its bounding box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeGrid {
    pub center: VectorPoint,
    pub radius: f64,
    /// Cells per axis across the box `[c − a, c + a]^n`.
    pub cells: usize,
}

impl VolumeGrid {
    pub fn new(center: VectorPoint, radius: f64, cells: usize) -> Result<Self> {
        let g = VolumeGrid { center, radius, cells };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::InvalidParameters(format!("support radius must be positive, got {}", self.radius)));
        }
        if self.cells < 2 {
            return Err(Error::InvalidParameters("the grid needs at least two cells per axis".into()));
        }
        let total = (self.cells as f64 + 4.0).powi(self.center.dim() as i32);
        if total > 5e7 {
            return Err(Error::Resource(format!("a grid of {total:e} nodes is too large")));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.radius / self.cells as f64
    }

    /// Offsets `u_j = (j + ½)Δ` whose nodes `y + u_j` cover the support box.
    fn offsets(&self, y: &VectorPoint) -> Vec<VectorPoint> {
        let h = self.spacing();
        let axes: Vec<Vec<f64>> = (0..self.center.dim())
            .map(|i| {
                let lo = ((self.center.coords[i] - self.radius - y.coords[i]) / h - 0.5).floor() as i64 - 1;
                let hi = ((self.center.coords[i] + self.radius - y.coords[i]) / h - 0.5).ceil() as i64 + 1;
                (lo..=hi).map(|j| (j as f64 + 0.5) * h).collect()
            })
            .collect();
        let mut out = vec![Vec::new()];
        for ax in &axes {
            let mut next = Vec::with_capacity(out.len() * ax.len());
            for p in &out {
                for &t in ax {
                    let mut q = p.clone();
                    q.push(t);
                    next.push(q);
                }
            }
            out = next;
        }
        out.into_iter().map(VectorPoint::new).collect()
    }
}

/// The potential and the operator that inverts it.
#[derive(Clone, Copy, Debug)]
pub enum VolumeKernel<'a> {
    /// `ψ(y) = −D^k ∫ G_k(y − x) ψ(x) dx`, `k = 1, 2`.
    Dirac { k: usize },
    /// `ψ(y) = −2^{n−2} y_n^{n−2} Δ_{2−n} ∫ H(x, y) ψ(x) dx` with the
    /// pointwise `H`, or with the series `H_{p,N}` when a source is given.
    Hyperbolic(Option<SeriesSource<'a>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeReproduction {
    pub value: Multivector,
    pub nodes: usize,
    /// `∫|ψ|` times the kernel tail estimate at the support center.
    pub tail_estimate: f64,
}

/// Apply the inverting operator to the volume potential of `ψ` at `y`.
///
/// `domain`, when given, requires the support ball to pass the sufficient
/// test [`check_ball_in_domain`]; the series source always does.
pub fn greens_reproduction_volume(
    psi: &Field,
    kernel: VolumeKernel,
    domain: Option<&GroupParams>,
    y: &VectorPoint,
    grid: &VolumeGrid,
    cfg: &FdConfig,
) -> Result<VolumeReproduction> {
    grid.validate()?;
    cfg.validate()?;
    let n = grid.center.dim();
    if y.dim() != n {
        return Err(Error::DimensionMismatch { left: y.dim(), right: n });
    }
    if let Some(params) = domain {
        check_ball_in_domain(params, &grid.center, grid.radius)?;
    }
    let offsets = grid.offsets(y);
    let cell = grid.spacing().powi(n as i32);
    match kernel {
        VolumeKernel::Dirac { k } => {
            if !(1..=2).contains(&k) || k >= n {
                return Err(Error::Unsupported(format!("volume reproduction uses k in {{1, 2}} with k < n, got k = {k}")));
            }
            let zero = VectorPoint::zero(n);
            let weighted = try_par_map_ordered(&offsets, |u| Ok((green_k(k, &zero, u, n)?.scale(cell), u.clone())))?;
            let potential = |z: &VectorPoint| {
                let terms = try_par_map_ordered(&weighted, |(g, u)| Ok(g * &psi(&z.add(u))?))?;
                Ok(pairwise_sum(n, &terms))
            };
            let d = apply_dirac_power(&potential, y, k, cfg)?;
            Ok(VolumeReproduction {
                value: d.scale(-1.0),
                nodes: offsets.len(),
                tail_estimate: 0.0,
            })
        }
        VolumeKernel::Hyperbolic(source) => {
            if n < 3 {
                return Err(Error::Unsupported(format!("the H kernel needs n >= 3, got n = {n}")));
            }
            if !(grid.center.last() - grid.radius > 0.0) || !(y.last() > 0.0) {
                return Err(Error::Domain("the support and y must lie in x_n > 0".into()));
            }
            let series = match source {
                None => None,
                Some(src) => {
                    check_ball_in_domain(&src.params, &grid.center, grid.radius)?;
                    Some((src, src.elements()?))
                }
            };
            let potential = |z: &VectorPoint| {
                let orbit = match &series {
                    None => vec![(1.0, z.clone())],
                    Some((_, elements)) => orbit_of(elements, z, n)?,
                };
                let terms = try_par_map_ordered(&offsets, |u| {
                    let x = z.add(u);
                    let mut hsum = 0.0;
                    for (w, img) in &orbit {
                        hsum += w * h_kernel(img, &x, n)?;
                    }
                    Ok(psi(&x)?.scale(hsum * cell))
                })?;
                Ok(pairwise_sum(n, &terms))
            };
            let lap = apply_laplacian_k(&potential, y, 2.0 - n as f64, cfg)?;
            let ni = n as i32;
            let value = lap.scale(-(2f64.powi(ni - 2)) * y.last().powi(ni - 2));
            let tail = match &series {
                None => 0.0,
                Some((src, elements)) => series_tail(psi, src, elements, grid, y, &offsets, cell)?,
            };
            Ok(VolumeReproduction {
                value,
                nodes: offsets.len(),
                tail_estimate: tail,
            })
        }
    }
}

/// `(L_{2−n}(M, z), TM⟨z⟩)` for every element.
fn orbit_of(elements: &[OrbitElement], z: &VectorPoint, n: usize) -> Result<Vec<(f64, VectorPoint)>> {
    elements
        .iter()
        .map(|e| {
            let ev = e.matrix.evaluate(z)?;
            let w = weight_from_eval(WeightKind::L, 2.0 - n as f64, n, &ev, 0.0)?.scalar_part();
            Ok((w, ev.image))
        })
        .collect()
}

fn series_tail(
    psi: &Field,
    src: &SeriesSource,
    elements: &[OrbitElement],
    grid: &VolumeGrid,
    y: &VectorPoint,
    offsets: &[VectorPoint],
    cell: f64,
) -> Result<f64> {
    let mut mass = 0.0;
    for u in offsets {
        mass += psi(&y.add(u))?.norm() * cell;
    }
    let mut probe = grid.center.clone();
    if probe.distance(y) < 0.25 * grid.radius {
        probe = probe.shifted(0, 0.5 * grid.radius);
    }
    let kv = kernel_series_over(KernelKind::Hyper(HyperSeriesKind::HSeries), &src.params, &probe, y, elements, src.truncation())?;
    Ok(mass * kv.tail_estimate)
}
