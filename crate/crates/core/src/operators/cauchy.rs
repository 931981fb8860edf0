//! Boundary integral reproduction formulas on spheres.

use serde::{Deserialize, Serialize};

use super::fd::Field;
use super::quadrature::{QuadratureRule, SurfaceNode};
use crate::clifford::{Multivector, VectorPoint};
use crate::error::{Error, Result};
use crate::kernels::{
    hyper_kernels_pointwise, kernel_series_over, orbit_elements, HyperSeriesKind, KernelKind, OrbitElement,
};
use crate::modular::{CosetTable, GroupParams};
use crate::summation::{pairwise_sum, try_par_map_ordered, Truncation};

/// Relative distance from the sphere below which `y` counts as on it.
pub const SURFACE_TOLERANCE: f64 = 1e-9;

/// Coset table and truncation of an automorphized kernel.
#[derive(Clone, Copy, Debug)]
pub struct SeriesSource<'a> {
    pub params: GroupParams,
    pub table: &'a CosetTable,
    pub r: f64,
    pub lattice_radius: f64,
}

impl SeriesSource<'_> {
    pub(crate) fn truncation(&self) -> Truncation {
        Truncation {
            row_cutoff: self.r,
            lattice_radius: self.lattice_radius,
            s: None,
        }
    }

    pub(crate) fn elements(&self) -> Result<Vec<OrbitElement>> {
        orbit_elements(&self.params, self.table, self.r, self.lattice_radius)
    }
}

/// Which kernel a Cauchy integral uses.
#[derive(Clone, Copy, Debug)]
pub enum CauchyKernel<'a> {
    /// `G(y − x)`.
    Euclidean,
    /// The truncated series `C_{p,N}(x, y)`.
    Automorphic(SeriesSource<'a>),
}

/// Which kernels the hypermonogenic formula uses.
#[derive(Clone, Copy, Debug)]
pub enum HyperKernelSource<'a> {
    /// `p` and `q` themselves.
    Pointwise,
    /// The `A` and `B` series.
    Series(SeriesSource<'a>),
}

/// Result of a boundary integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryIntegral {
    pub value: Multivector,
    /// Whether `y` lies inside the sphere; outside, the value should vanish.
    pub inside: bool,
    pub nodes: usize,
    /// Quadrature-weighted sum of the kernel tail estimates.
    pub tail_estimate: f64,
}

/// Sufficient test that the closed ball lies in `𝓕_p[N]`: inside the
/// translation box `|x_i| ≤ N/2` for `i ≤ p` and above height `1/N`,
/// which clears every isometric sphere (radius `1/‖c‖ ≤ 1/N`).
pub fn check_ball_in_domain(params: &GroupParams, center: &VectorPoint, radius: f64) -> Result<()> {
    params.validate()?;
    if center.dim() != params.n {
        return Err(Error::DimensionMismatch {
            left: center.dim(),
            right: params.n,
        });
    }
    let half = params.level as f64 / 2.0;
    for i in 0..params.p {
        if center.coords[i].abs() + radius > half {
            return Err(Error::Domain(format!(
                "the ball leaves the translation box |x_{}| <= {half}",
                i + 1
            )));
        }
    }
    let floor = 1.0 / params.level as f64;
    if !(center.last() - radius > floor) {
        return Err(Error::Domain(format!(
            "the ball reaches below x_n = 1/N = {floor}, where isometric spheres may cut it"
        )));
    }
    Ok(())
}

fn prepare(
    rule: &QuadratureRule,
    center: &VectorPoint,
    radius: f64,
    y: &VectorPoint,
) -> Result<(Vec<SurfaceNode>, bool)> {
    if y.dim() != rule.n {
        return Err(Error::DimensionMismatch {
            left: y.dim(),
            right: rule.n,
        });
    }
    let nodes = rule.scaled(center, radius)?;
    let d = y.distance(center);
    if (d - radius).abs() <= SURFACE_TOLERANCE * radius {
        return Err(Error::Pole(format!("y lies on the sphere (|y - c| = {d}, radius {radius})")));
    }
    Ok((nodes, d < radius))
}

/// `∫_{∂B} K̃(x,y) n(x) f(x) dσ(x)` on the sphere `∂B(center, radius)`.
///
/// With the Euclidean kernel and left-monogenic `f` this reproduces
/// `f(y)` inside and vanishes outside. The automorphic kernel needs the
/// ball inside the fundamental domain.
pub fn cauchy_integral_sphere(
    f: &Field,
    center: &VectorPoint,
    radius: f64,
    y: &VectorPoint,
    rule: &QuadratureRule,
    kernel: CauchyKernel,
) -> Result<BoundaryIntegral> {
    let (nodes, inside) = prepare(rule, center, radius, y)?;
    let n = rule.n;
    let series = match kernel {
        CauchyKernel::Euclidean => None,
        CauchyKernel::Automorphic(src) => {
            check_ball_in_domain(&src.params, center, radius)?;
            Some((src, src.elements()?, src.truncation()))
        }
    };
    let terms = try_par_map_ordered(&nodes, |node| {
        let (k, tail) = match &series {
            None => (crate::kernels::green_k(1, y, &node.point, n)?, 0.0),
            Some((src, elements, trunc)) => {
                let kv = kernel_series_over(KernelKind::Cauchy, &src.params, &node.point, y, elements, trunc.clone())?;
                (kv.value, kv.tail_estimate)
            }
        };
        let fx = f(&node.point)?;
        let nf = &node.normal.to_multivector() * &fx;
        let v = (&k.reversion() * &nf).scale(node.weight);
        Ok((v, node.weight * tail * fx.norm()))
    })?;
    let tail = terms.iter().map(|t| t.1).sum();
    let values: Vec<Multivector> = terms.into_iter().map(|t| t.0).collect();
    Ok(BoundaryIntegral {
        value: pairwise_sum(n, &values),
        inside,
        nodes: nodes.len(),
        tail_estimate: tail,
    })
}

/// Hypermonogenic Cauchy formula on a sphere in `x_n > 0`:
/// `f(y) = 2^{n−1} P(∫ Ã n x_n^{2−n} f dσ) − 2^{n−2} Q(∫ B̃ n f dσ) e_n`
/// for `f` annihilated by `M_{n−2}`.
pub fn hyper_cauchy_integral(
    f: &Field,
    center: &VectorPoint,
    radius: f64,
    y: &VectorPoint,
    rule: &QuadratureRule,
    source: HyperKernelSource,
) -> Result<BoundaryIntegral> {
    let (nodes, inside) = prepare(rule, center, radius, y)?;
    let n = rule.n;
    if !(center.last() - radius > 0.0) || !(y.last() > 0.0) {
        return Err(Error::Domain("the ball and y must lie in x_n > 0".into()));
    }
    let series = match source {
        HyperKernelSource::Pointwise => None,
        HyperKernelSource::Series(src) => {
            check_ball_in_domain(&src.params, center, radius)?;
            Some((src, src.elements()?, src.truncation()))
        }
    };
    let terms = try_par_map_ordered(&nodes, |node| {
        let x = &node.point;
        let (a, b, tail) = match &series {
            None => {
                let k = hyper_kernels_pointwise(x, y, n)?;
                (k.p, k.q, 0.0)
            }
            Some((src, elements, trunc)) => {
                let eval = |h| kernel_series_over(KernelKind::Hyper(h), &src.params, x, y, elements, trunc.clone());
                let a = eval(HyperSeriesKind::A)?;
                let b = eval(HyperSeriesKind::B)?;
                (a.value, b.value, a.tail_estimate + b.tail_estimate)
            }
        };
        let fx = f(x)?;
        let nf = &node.normal.to_multivector() * &fx;
        let ia = (&a.reversion() * &nf).scale(node.weight * x.last().powi(2 - n as i32));
        let ib = (&b.reversion() * &nf).scale(node.weight);
        Ok((ia, ib, node.weight * tail * fx.norm()))
    })?;
    let tail: f64 = terms.iter().map(|t| t.2).sum();
    let (ia, ib): (Vec<Multivector>, Vec<Multivector>) = terms.into_iter().map(|t| (t.0, t.1)).unzip();
    let ia = pairwise_sum(n, &ia);
    let ib = pairwise_sum(n, &ib);
    let ni = n as i32;
    let q_en = &ib - &ib.p_part();
    let value = &ia.p_part().scale(2f64.powi(ni - 1)) - &q_en.scale(2f64.powi(ni - 2));
    Ok(BoundaryIntegral {
        value,
        inside,
        nodes: nodes.len(),
        tail_estimate: tail,
    })
}
