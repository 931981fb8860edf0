//! Quadrature on the unit sphere `S^{n−1}`.
//!
//! The product rule writes `x = (√(1−t²) ξ, t)` with `ξ ∈ S^{n−2}`, so that
//! `dσ_{n−1} = (1−t²)^{(n−3)/2} dt dσ_{n−2}`; the `t` factor is Gauss–Jacobi
//! and the recursion ends in the trapezoid rule on the circle.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::clifford::VectorPoint;
use crate::error::{Error, Result};
use crate::special::{gamma, sphere_area};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    ProductGauss,
    /// Midpoint-subdivided icosahedron, `n = 3` only.
    Icosahedral,
}

/// Nodes and weights on `S^{n−1}`, exact for polynomials of degree `≤ order`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub n: usize,
    pub order: usize,
    pub nodes: Vec<VectorPoint>,
    pub weights: Vec<f64>,
}

/// A node on a scaled sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceNode {
    pub point: VectorPoint,
    /// Outward unit normal.
    pub normal: VectorPoint,
    pub weight: f64,
}

const SELF_TEST_TOLERANCE: f64 = 1e-10;
const MAX_SELF_TEST_DEGREE: usize = 8;

/// Gauss–Jacobi nodes and weights for `(1−t)^a (1+t)^b` on `[−1, 1]`.
// the initial-guess constants (6.28 among them) are empirical, not 2π
#[allow(clippy::approx_constant)]
pub fn gauss_jacobi(m: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::InvalidParameters("a Gauss rule needs at least one node".into()));
    }
    if !(a > -1.0) || !(b > -1.0) {
        return Err(Error::InvalidParameters(format!("Jacobi exponents must exceed -1, got ({a}, {b})")));
    }
    let ab = a + b;
    let mf = m as f64;
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    let mut z = 0.0f64;
    for i in 0..m {
        // initial guesses for the roots in decreasing order
        if i == 0 {
            let an = a / mf;
            let bn = b / mf;
            let r1 = (1.0 + a) * (2.78 / (4.0 + mf * mf) + 0.768 * an / mf);
            let r2 = 1.0 + 1.48 * an + 0.96 * bn + 0.452 * an * an + 0.83 * an * bn;
            z = 1.0 - r1 / r2;
        } else if i == 1 {
            let r1 = (4.1 + a) / ((1.0 + a) * (1.0 + 0.156 * a));
            let r2 = 1.0 + 0.06 * (mf - 8.0) * (1.0 + 0.12 * a) / mf;
            let r3 = 1.0 + 0.012 * b * (1.0 + 0.25 * a.abs()) / mf;
            z -= (1.0 - z) * r1 * r2 * r3;
        } else if i == 2 {
            let r1 = (1.67 + 0.28 * a) / (1.0 + 0.37 * a);
            let r2 = 1.0 + 0.22 * (mf - 8.0) / mf;
            let r3 = 1.0 + 8.0 * b / ((6.28 + b) * mf * mf);
            z -= (x[0] - z) * r1 * r2 * r3;
        } else if i == m - 2 {
            let r1 = (1.0 + 0.235 * b) / (0.766 + 0.119 * b);
            let r2 = 1.0 / (1.0 + 0.639 * (mf - 4.0) / (1.0 + 0.71 * (mf - 4.0)));
            let r3 = 1.0 / (1.0 + 20.0 * a / ((7.5 + a) * mf * mf));
            z += (z - x[m - 4]) * r1 * r2 * r3;
        } else if i == m - 1 {
            let r1 = (1.0 + 0.37 * b) / (1.67 + 0.28 * b);
            let r2 = 1.0 / (1.0 + 0.22 * (mf - 8.0) / mf);
            let r3 = 1.0 / (1.0 + 8.0 * a / ((6.28 + a) * mf * mf));
            z += (z - x[m - 3]) * r1 * r2 * r3;
        } else {
            z = 3.0 * x[i - 1] - 3.0 * x[i - 2] + x[i - 3];
        }
        let mut converged = false;
        let (mut p2, mut pp, mut temp) = (0.0, 0.0, 0.0);
        for _ in 0..100 {
            temp = 2.0 + ab;
            let mut p1 = (a - b + temp * z) / 2.0;
            p2 = 1.0;
            for j in 2..=m {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                temp = 2.0 * jf + ab;
                let aa = 2.0 * jf * (jf + ab) * (temp - 2.0);
                let bb = (temp - 1.0) * (a * a - b * b + temp * (temp - 2.0) * z);
                let cc = 2.0 * (jf - 1.0 + a) * (jf - 1.0 + b) * temp;
                p1 = (bb * p2 - cc * p3) / aa;
            }
            pp = (mf * (a - b - temp * z) * p1 + 2.0 * (mf + a) * (mf + b) * p2) / (temp * (1.0 - z * z));
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Quadrature(format!("Gauss-Jacobi root {i} of {m} did not converge")));
        }
        x[i] = z;
        w[i] = (ln_gamma(a + mf) + ln_gamma(b + mf) - ln_gamma(mf + 1.0) - ln_gamma(mf + ab + 1.0)).exp()
            * temp
            * 2f64.powf(ab)
            / (pp * p2);
    }
    Ok((x, w))
}

/// Unnormalized product rule on `S^{d−1}` as coordinate vectors.
fn product_nodes(d: usize, order: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    if d == 2 {
        let mut m = order + 1;
        m += m % 2;
        let h = std::f64::consts::TAU / m as f64;
        let nodes = (0..m)
            .map(|j| {
                let th = (j as f64 + 0.5) * h;
                vec![th.cos(), th.sin()]
            })
            .collect();
        return Ok((nodes, vec![h; m]));
    }
    let a = (d as f64 - 3.0) / 2.0;
    let (ts, tw) = gauss_jacobi(order / 2 + 1, a, a)?;
    let (sub, sw) = product_nodes(d - 1, order)?;
    let mut nodes = Vec::with_capacity(ts.len() * sub.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (t, wt) in ts.iter().zip(&tw) {
        let rho = (1.0 - t * t).max(0.0).sqrt();
        for (xi, wx) in sub.iter().zip(&sw) {
            let mut v: Vec<f64> = xi.iter().map(|c| rho * c).collect();
            v.push(*t);
            nodes.push(v);
            weights.push(wt * wx);
        }
    }
    Ok((nodes, weights))
}

fn icosahedron() -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (raw.iter().map(|v| normalized(*v)).collect(), faces)
}

fn normalized(v: [f64; 3]) -> [f64; 3] {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / r, v[1] / r, v[2] / r]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn triple(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Spherical triangle `(a, b, c)`: `tan(E/2) = |a·(b×c)| / (1 + a·b + b·c + c·a)`.
fn spherical_area(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let num = triple(a, b, c).abs();
    let den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * num.atan2(den)
}

fn midpoint(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    normalized([a[0] + b[0], a[1] + b[1], a[2] + b[2]])
}

/// Exact `∫_{S^{n−1}} x^α dσ`.
pub fn sphere_monomial_integral(alpha: &[usize]) -> f64 {
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let n = alpha.len() as f64;
    let total: usize = alpha.iter().sum();
    let num: f64 = alpha.iter().map(|&a| gamma((a as f64 + 1.0) / 2.0)).product();
    2.0 * num / gamma((total as f64 + n) / 2.0)
}

fn multi_indices(n: usize, max_degree: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for a in &out {
            let used: usize = a.iter().sum();
            for k in 0..=max_degree - used {
                let mut b = a.clone();
                b.push(k);
                next.push(b);
            }
        }
        out = next;
    }
    out
}

impl QuadratureRule {
    /// Product Gauss rule on `S^{n−1}` exact to degree `order`.
    pub fn product_gauss(n: usize, order: usize) -> Result<Self> {
        if !(2..=8).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let (nodes, weights) = product_nodes(n, order)?;
        let rule = QuadratureRule {
            kind: QuadratureKind::ProductGauss,
            n,
            order,
            nodes: nodes.into_iter().map(VectorPoint::new).collect(),
            weights,
        };
        rule.self_test()?;
        Ok(rule)
    }

    /// Icosahedral rule on `S²` after `levels` midpoint subdivisions:
    /// centroid nodes weighted by exact spherical-triangle areas.
    ///
    /// The rule is invariant under the icosahedral group, which has no
    /// invariant harmonics of degree 1 to 5, so it is exact to degree 5.
    pub fn icosahedral(levels: usize) -> Result<Self> {
        if levels > 7 {
            return Err(Error::Resource(format!("icosahedral refinement level {levels} exceeds 7")));
        }
        let (verts, faces) = icosahedron();
        let mut tris: Vec<[[f64; 3]; 3]> = faces.iter().map(|f| [verts[f[0]], verts[f[1]], verts[f[2]]]).collect();
        for _ in 0..levels {
            let mut next = Vec::with_capacity(tris.len() * 4);
            for [a, b, c] in tris {
                let (ab, bc, ca) = (midpoint(&a, &b), midpoint(&b, &c), midpoint(&c, &a));
                next.push([a, ab, ca]);
                next.push([ab, b, bc]);
                next.push([ca, bc, c]);
                next.push([ab, bc, ca]);
            }
            tris = next;
        }
        let mut nodes = Vec::with_capacity(tris.len());
        let mut weights = Vec::with_capacity(tris.len());
        for [a, b, c] in &tris {
            let g = normalized([a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]]);
            nodes.push(VectorPoint::new(g.to_vec()));
            weights.push(spherical_area(a, b, c));
        }
        let rule = QuadratureRule {
            kind: QuadratureKind::Icosahedral,
            n: 3,
            order: 5,
            nodes,
            weights,
        };
        rule.self_test()?;
        Ok(rule)
    }

    /// Build a rule of `kind`; for the icosahedral rule `order` is the
    /// number of subdivision levels.
    pub fn new(kind: QuadratureKind, n: usize, order: usize) -> Result<Self> {
        match kind {
            QuadratureKind::ProductGauss => Self::product_gauss(n, order),
            QuadratureKind::Icosahedral if n == 3 => Self::icosahedral(order),
            QuadratureKind::Icosahedral => Err(Error::Unsupported(format!(
                "the icosahedral rule exists for n = 3 only, got n = {n}"
            ))),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Total weight against `ω_n` and every monomial of degree up to
    /// `min(order, 8)` against its exact integral.
    pub fn self_test(&self) -> Result<()> {
        let area = sphere_area(self.n);
        let total: f64 = self.weights.iter().sum();
        if (total - area).abs() > SELF_TEST_TOLERANCE * area.max(1.0) {
            return Err(Error::Quadrature(format!("weights sum to {total}, sphere area is {area}")));
        }
        let deg = self.order.min(MAX_SELF_TEST_DEGREE);
        for alpha in multi_indices(self.n, deg) {
            let approx: f64 = self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(x, w)| w * x.coords.iter().zip(&alpha).map(|(c, &a)| c.powi(a as i32)).product::<f64>())
                .sum();
            let exact = sphere_monomial_integral(&alpha);
            if (approx - exact).abs() > SELF_TEST_TOLERANCE {
                return Err(Error::Quadrature(format!(
                    "monomial {alpha:?}: rule gives {approx:e}, exact {exact:e}"
                )));
            }
        }
        Ok(())
    }

    /// Nodes moved to the sphere of `radius` about `center`.
    pub fn scaled(&self, center: &VectorPoint, radius: f64) -> Result<Vec<SurfaceNode>> {
        if center.dim() != self.n {
            return Err(Error::DimensionMismatch {
                left: center.dim(),
                right: self.n,
            });
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameters(format!("sphere radius must be positive, got {radius}")));
        }
        let jac = radius.powi(self.n as i32 - 1);
        Ok(self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(u, w)| SurfaceNode {
                point: center.add(&u.scale(radius)),
                normal: u.clone(),
                weight: w * jac,
            })
            .collect())
    }
}
