//! Ahlfors-Vahlen matrices and the Möbius action they induce on `R^n`.

mod weights;

pub use weights::{weight_factor, weight_from_eval, MobiusEval, WeightKind};

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::clifford::{ExactMultivector, Multivector, VectorPoint};
use crate::error::{Error, Result};

/// Threshold for discarding non-vector noise after a Möbius map.
pub const GRADE_ONE_TOLERANCE: f64 = 1e-10;
/// Below this `‖cx+d‖` the point is treated as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;
/// Float tolerance used by the Vahlen-condition checks on float entries.
pub const FLOAT_CONDITION_TOLERANCE: f64 = 1e-10;

/// Ring operations a matrix entry must support.
pub trait Entry: Clone + Debug + PartialEq {
    fn dim(&self) -> usize;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn reversion(&self) -> Self;
    /// `Some(value)` if the element is a real scalar (exactly or to tolerance).
    fn as_real(&self) -> Option<f64>;
    /// Whether only grade-1 coefficients survive (exactly or to tolerance).
    fn is_vector_like(&self) -> bool;
}

impl Entry for Multivector {
    fn dim(&self) -> usize {
        Multivector::dim(self)
    }
    fn zero_like(&self) -> Self {
        Multivector::zero(self.dim())
    }
    fn one_like(&self) -> Self {
        Multivector::one(self.dim())
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn reversion(&self) -> Self {
        Multivector::reversion(self)
    }
    fn as_real(&self) -> Option<f64> {
        let tol = FLOAT_CONDITION_TOLERANCE * self.norm().max(1.0);
        (self.off_grade_norm(0) <= tol).then(|| self.scalar_part())
    }
    fn is_vector_like(&self) -> bool {
        self.off_grade_norm(1) <= FLOAT_CONDITION_TOLERANCE * self.norm().max(1.0)
    }
}

impl Entry for ExactMultivector {
    fn dim(&self) -> usize {
        ExactMultivector::dim(self)
    }
    fn zero_like(&self) -> Self {
        ExactMultivector::zero(self.dim())
    }
    fn one_like(&self) -> Self {
        ExactMultivector::one(self.dim())
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn reversion(&self) -> Self {
        ExactMultivector::reversion(self)
    }
    fn as_real(&self) -> Option<f64> {
        use num_traits::ToPrimitive;
        self.is_scalar().then(|| self.coeff(0).to_f64().unwrap_or(f64::NAN))
    }
    fn is_vector_like(&self) -> bool {
        self.is_vector()
    }
}

/// `(a b; c d)` with Clifford entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VahlenMatrix<E = Multivector> {
    pub a: E,
    pub b: E,
    pub c: E,
    pub d: E,
}

/// Which Vahlen condition failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum VahlenViolation {
    DimensionMismatch,
    PseudoDeterminantNotReal,
    PseudoDeterminantZero,
    /// One of `ãc`, `c̃d`, `d̃b`, `b̃a` has non-vector parts.
    NotVector(&'static str),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VahlenReport {
    pub pass: bool,
    pub pseudo_determinant: Option<f64>,
    pub violation: Option<VahlenViolation>,
}

impl<E: Entry> VahlenMatrix<E> {
    pub fn new(a: E, b: E, c: E, d: E) -> Self {
        VahlenMatrix { a, b, c, d }
    }

    pub fn identity_like(template: &E) -> Self {
        let one = template.one_like();
        let zero = template.zero_like();
        VahlenMatrix::new(one.clone(), zero.clone(), zero, one)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn matrix_mul(&self, rhs: &Self) -> Self {
        VahlenMatrix {
            a: self.a.mul(&rhs.a).add(&self.b.mul(&rhs.c)),
            b: self.a.mul(&rhs.b).add(&self.b.mul(&rhs.d)),
            c: self.c.mul(&rhs.a).add(&self.d.mul(&rhs.c)),
            d: self.c.mul(&rhs.b).add(&self.d.mul(&rhs.d)),
        }
    }

    /// `M* = (d̃, −b̃; −c̃, ã)`.
    pub fn star(&self) -> Self {
        VahlenMatrix {
            a: self.d.reversion(),
            b: self.b.reversion().neg(),
            c: self.c.reversion().neg(),
            d: self.a.reversion(),
        }
    }

    pub fn negate(&self) -> Self {
        VahlenMatrix {
            a: self.a.neg(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.d.neg(),
        }
    }

    /// `a d̃ − b c̃`.
    pub fn pseudo_determinant(&self) -> E {
        self.a.mul(&self.d.reversion()).sub(&self.b.mul(&self.c.reversion()))
    }

    /// Checks the pseudo-determinant and the four vector conditions.
    pub fn verify_vahlen_conditions(&self) -> VahlenReport {
        let n = self.dim();
        if [&self.b, &self.c, &self.d].iter().any(|e| e.dim() != n) {
            return VahlenReport {
                pass: false,
                pseudo_determinant: None,
                violation: Some(VahlenViolation::DimensionMismatch),
            };
        }
        let fail = |det: Option<f64>, v| VahlenReport {
            pass: false,
            pseudo_determinant: det,
            violation: Some(v),
        };
        let det = match self.pseudo_determinant().as_real() {
            Some(v) => v,
            None => return fail(None, VahlenViolation::PseudoDeterminantNotReal),
        };
        if det == 0.0 || !det.is_finite() {
            return fail(Some(det), VahlenViolation::PseudoDeterminantZero);
        }
        let checks: [(&'static str, E); 4] = [
            ("ãc", self.a.reversion().mul(&self.c)),
            ("c̃d", self.c.reversion().mul(&self.d)),
            ("d̃b", self.d.reversion().mul(&self.b)),
            ("b̃a", self.b.reversion().mul(&self.a)),
        ];
        for (name, prod) in checks {
            if !prod.is_vector_like() {
                return fail(Some(det), VahlenViolation::NotVector(name));
            }
        }
        VahlenReport {
            pass: true,
            pseudo_determinant: Some(det),
            violation: None,
        }
    }
}

impl VahlenMatrix<ExactMultivector> {
    /// Float image with entries embedded in `Cl_n`.
    pub fn to_float(&self, n: usize) -> VahlenMatrix<Multivector> {
        VahlenMatrix {
            a: self.a.to_float(n),
            b: self.b.to_float(n),
            c: self.c.to_float(n),
            d: self.d.to_float(n),
        }
    }

    /// Inverse of a pseudo-determinant-one matrix, which is its star.
    pub fn inverse_sav(&self) -> Self {
        self.star()
    }
}

/// Sphere `{x : ‖x − center‖ = radius}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometricSphere {
    pub center: VectorPoint,
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MobiusClass {
    Hyperbolic,
    Elliptic,
    Parabolic,
}

/// Tolerance on `|dist − r1 − r2|` for calling two spheres tangent.
pub const TANGENCY_TOLERANCE: f64 = 1e-9;

/// External spheres are hyperbolic, tangent parabolic, intersecting elliptic.
pub fn classify_spheres(s1: &IsometricSphere, s2: &IsometricSphere) -> MobiusClass {
    let dist = s1.center.distance(&s2.center);
    let gap = dist - s1.radius - s2.radius;
    if gap.abs() < TANGENCY_TOLERANCE {
        MobiusClass::Parabolic
    } else if gap > 0.0 {
        MobiusClass::Hyperbolic
    } else {
        MobiusClass::Elliptic
    }
}

impl VahlenMatrix<Multivector> {
    pub fn identity(n: usize) -> Self {
        Self::identity_like(&Multivector::zero(n))
    }

    /// Translation `x ↦ x + u`.
    pub fn translation(u: &VectorPoint) -> Self {
        let n = u.dim();
        VahlenMatrix::new(
            Multivector::one(n),
            u.to_multivector(),
            Multivector::zero(n),
            Multivector::one(n),
        )
    }

    /// `(ax+b)(cx+d)^{-1}` together with `cx+d`.
    pub fn evaluate(&self, x: &VectorPoint) -> Result<MobiusEval> {
        let n = self.dim();
        if x.dim() != n {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: n,
            });
        }
        let xm = x.to_multivector();
        let cxd = &(&self.c * &xm) + &self.d;
        let norm = cxd.norm();
        if norm <= POLE_TOLERANCE {
            return Err(Error::Pole(format!(
                "‖cx+d‖ = {norm:e} at x = {:?}; the point maps to infinity",
                x.coords
            )));
        }
        let num = &(&self.a * &xm) + &self.b;
        let inv = cxd.conjugate().scale(1.0 / (norm * norm));
        let img = &num * &inv;
        let off = img.off_grade_norm(1);
        if off > GRADE_ONE_TOLERANCE * img.norm().max(1.0) {
            return Err(Error::NotAVector(off));
        }
        Ok(MobiusEval {
            image: VectorPoint::from_multivector(&img),
            cxd,
            cxd_norm: norm,
        })
    }

    pub fn mobius_apply(&self, x: &VectorPoint) -> Result<VectorPoint> {
        Ok(self.evaluate(x)?.image)
    }

    /// `1/‖c‖` sphere about `−c^{-1}d`.
    pub fn isometric_sphere(&self) -> Result<IsometricSphere> {
        let cn = self.c.norm();
        if cn <= POLE_TOLERANCE {
            return Err(Error::Singularity(
                "c = 0: translation-type matrix has no isometric sphere".into(),
            ));
        }
        let cinv = self.c.versor_inverse()?;
        let center = -(&cinv * &self.d);
        Ok(IsometricSphere {
            center: VectorPoint::from_multivector(&center),
            radius: 1.0 / cn,
        })
    }

    /// Inverse `M* / Δ` for any matrix with a real nonzero pseudo-determinant.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.pseudo_determinant().as_real().ok_or_else(|| {
            Error::Singularity("pseudo-determinant is not a real scalar".into())
        })?;
        if det == 0.0 {
            return Err(Error::Singularity("pseudo-determinant vanishes".into()));
        }
        let s = self.star();
        let k = 1.0 / det;
        Ok(VahlenMatrix::new(s.a.scale(k), s.b.scale(k), s.c.scale(k), s.d.scale(k)))
    }

    /// Classification by the relative position of `S_M` and `S_{M^{-1}}`.
    pub fn classify_mobius(&self) -> Result<MobiusClass> {
        let s1 = self.isometric_sphere().map_err(|_| {
            Error::Singularity("c = 0: not classifiable by isometric spheres".into())
        })?;
        let s2 = self.inverse()?.isometric_sphere()?;
        Ok(classify_spheres(&s1, &s2))
    }

    /// Jacobian of `x ↦ M⟨x⟩` by central differences, row `i` = `∂/∂x_i`.
    pub fn jacobian(&self, x: &VectorPoint, h: f64) -> Result<Vec<Vec<f64>>> {
        let n = self.dim();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let fp = self.mobius_apply(&x.shifted(j, h))?;
            let fm = self.mobius_apply(&x.shifted(j, -h))?;
            cols.push(
                fp.coords
                    .iter()
                    .zip(&fm.coords)
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect::<Vec<_>>(),
            );
        }
        Ok(cols)
    }

    /// Relative bound on `|σ_i / λ − 1|` over the singular values `σ_i` of
    /// the Jacobian, with `λ = 1/‖cx+d‖²`.
    ///
    /// Uses Gershgorin discs of `JᵀJ − λ²I`, so no SVD is needed.
    pub fn conformality_defect(&self, x: &VectorPoint) -> Result<f64> {
        let n = self.dim();
        let eval = self.evaluate(x)?;
        let lambda = 1.0 / (eval.cxd_norm * eval.cxd_norm);
        // step relative to the distance from the pole of the map
        let cn = self.c.norm();
        let scale = if cn > 0.0 {
            (eval.cxd_norm / cn).min(x.norm().max(1.0))
        } else {
            x.norm().max(1.0)
        };
        let h = 1e-5 * scale;
        let cols = self.jacobian(x, h)?;
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut radius = 0.0;
            let mut diag = 0.0;
            for j in 0..n {
                let g: f64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
                if i == j {
                    diag = g;
                } else {
                    radius += g.abs();
                }
            }
            let lo = ((diag - radius) / (lambda * lambda)).max(0.0).sqrt();
            let hi = ((diag + radius) / (lambda * lambda)).sqrt();
            worst = worst.max((lo - 1.0).abs()).max((hi - 1.0).abs());
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jm(n: usize) -> VahlenMatrix {
        VahlenMatrix::new(
            Multivector::zero(n),
            Multivector::scalar(n, -1.0),
            Multivector::one(n),
            Multivector::zero(n),
        )
    }

    fn t1(n: usize) -> VahlenMatrix {
        VahlenMatrix::translation(&VectorPoint::axis(n, 1, 1.0))
    }

    #[test]
    fn generators_pass() {
        let r = jm(3).verify_vahlen_conditions();
        assert!(r.pass);
        assert_eq!(r.pseudo_determinant, Some(1.0));
        assert!(t1(3).verify_vahlen_conditions().pass);
    }

    #[test]
    fn bivector_translation_fails() {
        let m = VahlenMatrix::new(
            Multivector::one(3),
            Multivector::blade(3, 0b011, 1.0),
            Multivector::zero(3),
            Multivector::one(3),
        );
        let r = m.verify_vahlen_conditions();
        assert!(!r.pass);
        assert_eq!(r.violation, Some(VahlenViolation::NotVector("d̃b")));
    }

    #[test]
    fn products_and_star() {
        let j2 = jm(3).matrix_mul(&jm(3));
        assert_eq!(j2, VahlenMatrix::identity(3).negate());
        let tt = t1(3).matrix_mul(&t1(3));
        assert_eq!(tt, VahlenMatrix::translation(&VectorPoint::axis(3, 1, 2.0)));
        let js = jm(3).star();
        assert_eq!(js.b, Multivector::one(3));
        assert_eq!(js.c, Multivector::scalar(3, -1.0));
        let ts = t1(3).star();
        assert_eq!(ts, VahlenMatrix::translation(&VectorPoint::axis(3, 1, -1.0)));
    }

    #[test]
    fn mobius_examples() {
        let x = VectorPoint::axis(3, 3, 2.0);
        let y = jm(3).mobius_apply(&x).unwrap();
        assert!((y.coords[2] - 0.5).abs() < 1e-15);
        let z = t1(3).mobius_apply(&x).unwrap();
        assert_eq!(z.coords, vec![1.0, 0.0, 2.0]);
        assert!(matches!(
            jm(3).mobius_apply(&VectorPoint::zero(3)),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn isometric_sphere_examples() {
        let n = 3;
        let m = VahlenMatrix::new(
            Multivector::scalar(n, 5.0),
            Multivector::e(n, 1).scale(4.0),
            Multivector::e(n, 1).scale(4.0),
            Multivector::scalar(n, -3.0),
        );
        assert!(m.verify_vahlen_conditions().pass);
        let s = m.isometric_sphere().unwrap();
        assert!((s.radius - 0.25).abs() < 1e-15);
        assert!((s.center.coords[0] + 0.75).abs() < 1e-15);
        let sj = jm(3).isometric_sphere().unwrap();
        assert_eq!(sj.radius, 1.0);
        assert!(sj.center.norm() == 0.0);
        assert!(t1(3).isometric_sphere().is_err());
    }

    #[test]
    fn sphere_classification() {
        let s = |c: f64| IsometricSphere {
            center: VectorPoint::new(vec![c, 0.0, 0.0]),
            radius: 1.0,
        };
        assert_eq!(classify_spheres(&s(0.0), &s(2.0)), MobiusClass::Parabolic);
        assert_eq!(classify_spheres(&s(0.0), &s(3.0)), MobiusClass::Hyperbolic);
        assert_eq!(classify_spheres(&s(0.0), &s(1.5)), MobiusClass::Elliptic);
    }
}
