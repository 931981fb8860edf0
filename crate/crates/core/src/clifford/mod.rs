//! Dense Clifford algebra `Cl_n` with negative-definite signature.
//!
//! Blades are indexed by bitmask: bit `i` set means `e_{i+1}` is a factor.
//! Products use a per-dimension sign table built on first use.

mod exact;
mod point;

pub use exact::ExactMultivector;
pub use point::{vector_inverse, VectorPoint};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 8;

/// Sign of `e_a * e_b` (as blades) in `Cl_n` with `e_i^2 = -1`.
///
/// Swapping the factors of `a` past the lower-indexed factors of `b` gives
/// the transposition count; every shared generator contributes one more
/// minus sign when it squares.
pub fn blade_sign(a: usize, b: usize) -> f64 {
    let mut swaps = 0u32;
    let mut rest = a >> 1;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    swaps += (a & b).count_ones();
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

static SIGN_TABLES: [OnceLock<Vec<i8>>; MAX_DIM + 1] = [const { OnceLock::new() }; MAX_DIM + 1];

pub(crate) fn sign_table(dim: usize) -> &'static [i8] {
    SIGN_TABLES[dim].get_or_init(|| {
        let size = 1usize << dim;
        let mut t = vec![0i8; size * size];
        for a in 0..size {
            for b in 0..size {
                t[a * size + b] = blade_sign(a, b) as i8;
            }
        }
        t
    })
}

#[inline]
pub fn grade_of(mask: usize) -> u32 {
    mask.count_ones()
}

#[inline]
fn reversion_sign(r: u32) -> f64 {
    if r % 4 < 2 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn conjugation_sign(r: u32) -> f64 {
    if (r + 1) % 4 < 2 {
        1.0
    } else {
        -1.0
    }
}

/// Element of `Cl_n` stored as `2^n` real coefficients.
#[derive(Clone, PartialEq)]
pub struct Multivector {
    dim: usize,
    coeffs: Vec<f64>,
}

impl Multivector {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Multivector {
            dim,
            coeffs: vec![0.0; 1 << dim],
        }
    }

    pub fn scalar(dim: usize, s: f64) -> Self {
        let mut m = Self::zero(dim);
        m.coeffs[0] = s;
        m
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, 1.0)
    }

    /// Blade `coef * e_A` for the bitmask `mask`.
    pub fn blade(dim: usize, mask: usize, coef: f64) -> Self {
        let mut m = Self::zero(dim);
        m.coeffs[mask] = coef;
        m
    }

    /// Basis vector `e_i`, 1-based.
    pub fn e(dim: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= dim, "basis index {i} out of range for n={dim}");
        Self::blade(dim, 1 << (i - 1), 1.0)
    }

    /// `x_1 e_1 + ... + x_m e_m` embedded in `Cl_dim`.
    pub fn from_vector(dim: usize, coords: &[f64]) -> Self {
        assert!(coords.len() <= dim);
        let mut m = Self::zero(dim);
        for (i, &c) in coords.iter().enumerate() {
            m.coeffs[1 << i] = c;
        }
        m
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<f64>) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        if coeffs.len() != 1 << dim {
            return Err(Error::DimensionMismatch {
                left: coeffs.len(),
                right: 1 << dim,
            });
        }
        Ok(Multivector { dim, coeffs })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    #[inline]
    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    #[inline]
    pub fn set(&mut self, mask: usize, value: f64) {
        self.coeffs[mask] = value;
    }

    #[inline]
    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Embed into a larger algebra by zero-padding.
    pub fn embed(&self, dim: usize) -> Self {
        assert!(dim >= self.dim);
        let mut m = Self::zero(dim);
        m.coeffs[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        m
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Coefficient ℓ² norm.
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn map_by_grade(&self, sign: impl Fn(u32) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| c * sign(grade_of(m)))
            .collect();
        Multivector {
            dim: self.dim,
            coeffs,
        }
    }

    /// Reversion: grade `r` picks up `(-1)^{r(r-1)/2}`.
    pub fn reversion(&self) -> Self {
        self.map_by_grade(reversion_sign)
    }

    /// Clifford conjugation: grade `r` picks up `(-1)^{r(r+1)/2}`.
    pub fn conjugate(&self) -> Self {
        self.map_by_grade(conjugation_sign)
    }

    /// Main involution: grade `r` picks up `(-1)^r`.
    pub fn grade_involution(&self) -> Self {
        self.map_by_grade(|r| if r % 2 == 0 { 1.0 } else { -1.0 })
    }

    /// Writes `a = b + c e_n` and returns `b - c e_n`.
    pub fn hat(&self) -> Self {
        let top = 1usize << (self.dim - 1);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| if m & top != 0 { -c } else { c })
            .collect();
        Multivector {
            dim: self.dim,
            coeffs,
        }
    }

    /// `P(a) = (a + â)/2`, the part free of `e_n`.
    pub fn p_part(&self) -> Self {
        let top = 1usize << (self.dim - 1);
        let mut m = self.clone();
        for (mask, c) in m.coeffs.iter_mut().enumerate() {
            if mask & top != 0 {
                *c = 0.0;
            }
        }
        m
    }

    /// `Q(a)` with `a = P(a) + Q(a) e_n`.
    pub fn q_part(&self) -> Self {
        let top = 1usize << (self.dim - 1);
        let mut m = Self::zero(self.dim);
        for mask in 0..top {
            m.coeffs[mask] = self.coeffs[mask | top];
        }
        m
    }

    /// `Q*(a) = e_n Q(a) e_n`.
    pub fn q_star(&self) -> Self {
        let en = Self::e(self.dim, self.dim);
        &(&en * &self.q_part()) * &en
    }

    /// `(P a, Q a, Q* a)` in one call.
    pub fn pq_projections(&self) -> (Self, Self, Self) {
        (self.p_part(), self.q_part(), self.q_star())
    }

    /// Only the grade-`r` coefficients.
    pub fn grade_part(&self, r: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| if grade_of(m) == r { c } else { 0.0 })
            .collect();
        Multivector {
            dim: self.dim,
            coeffs,
        }
    }

    /// ℓ² norm of everything outside grade `r`.
    pub fn off_grade_norm(&self, r: u32) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(m, _)| grade_of(*m) != r)
            .map(|(_, c)| c * c)
            .sum::<f64>()
            .sqrt()
    }

    pub fn vector_coords(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.coeffs[1 << i]).collect()
    }

    /// Inverse of an element of the Clifford group (a product of vectors):
    /// `conj(u)/‖u‖²`.
    pub fn versor_inverse(&self) -> Result<Self> {
        let ns = self.norm_squared();
        if ns == 0.0 || !ns.is_finite() {
            return Err(Error::Singularity("inverse of a zero element".into()));
        }
        Ok(self.conjugate().scale(1.0 / ns))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let size = 1usize << self.dim;
        let table = sign_table(self.dim);
        let mut out = vec![0.0; size];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            let row = &table[a * size..(a + 1) * size];
            for (b, &cb) in other.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                out[a ^ b] += f64::from(row[b]) * ca * cb;
            }
        }
        Ok(Multivector {
            dim: self.dim,
            coeffs: out,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self + other)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Geometric product with a dimension check.
pub fn geometric_product(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    a.try_mul(b)
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(n={}; ", self.dim)?;
        let mut first = true;
        for (m, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if m != 0 {
                write!(f, "e")?;
                for i in 0..self.dim {
                    if m & (1 << i) != 0 {
                        write!(f, "{}", i + 1)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl<'a> Mul<&'a Multivector> for &'a Multivector {
    type Output = Multivector;
    /// Panics on dimension mismatch; use [`geometric_product`] for a checked product.
    fn mul(self, rhs: &'a Multivector) -> Multivector {
        self.try_mul(rhs).expect("geometric product dimension mismatch")
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        &self * &rhs
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

impl<'a> Add<&'a Multivector> for &'a Multivector {
    type Output = Multivector;
    fn add(self, rhs: &'a Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in addition");
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Multivector> for &'a Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &'a Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in subtraction");
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        &self - &rhs
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in addition");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in subtraction");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

#[derive(Serialize, Deserialize)]
struct MultivectorRepr {
    dim: usize,
    coeffs: BTreeMap<String, f64>,
}

impl Serialize for Multivector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        use serde::ser::SerializeStruct;
        // keys emitted in numeric blade order, which BTreeMap<String> would not give
        struct Coeffs<'a>(&'a [f64]);
        impl Serialize for Coeffs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let nz = self.0.iter().filter(|c| **c != 0.0).count();
                let mut map = s.serialize_map(Some(nz))?;
                for (m, c) in self.0.iter().enumerate() {
                    if *c != 0.0 {
                        map.serialize_entry(&m.to_string(), c)?;
                    }
                }
                map.end()
            }
        }
        let mut st = s.serialize_struct("Multivector", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("coeffs", &Coeffs(&self.coeffs))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MultivectorRepr::deserialize(d)?;
        if repr.dim == 0 || repr.dim > MAX_DIM {
            return Err(D::Error::custom(format!("unsupported dimension {}", repr.dim)));
        }
        let mut m = Multivector::zero(repr.dim);
        for (k, v) in repr.coeffs {
            let mask: usize = k
                .parse()
                .map_err(|_| D::Error::custom(format!("bad blade key {k:?}")))?;
            if mask >= 1 << repr.dim {
                return Err(D::Error::custom(format!("blade {mask} out of range")));
            }
            m.coeffs[mask] = v;
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Multivector {
        Multivector::e(n, i)
    }

    #[test]
    fn basis_squares_and_anticommutes() {
        let n = 3;
        assert_eq!((&e(n, 1) * &e(n, 1)).coeffs(), Multivector::scalar(n, -1.0).coeffs());
        let e12 = &e(n, 1) * &e(n, 2);
        assert_eq!(e12, Multivector::blade(n, 0b011, 1.0));
        assert_eq!(&e(n, 2) * &e(n, 1), Multivector::blade(n, 0b011, -1.0));
    }

    #[test]
    fn vector_square_is_minus_norm() {
        let x = Multivector::from_vector(2, &[3.0, 4.0]);
        assert_eq!(&x * &x, Multivector::scalar(2, -25.0));
    }

    #[test]
    fn reversion_examples() {
        let e12 = Multivector::blade(3, 0b011, 1.0);
        assert_eq!(e12.reversion(), e12.scale(-1.0));
        // e3 e2 e1 brought back to e1 e2 e3 takes three swaps
        let e123 = Multivector::blade(3, 0b111, 1.0);
        let rev = &(&e(3, 3) * &e(3, 2)) * &e(3, 1);
        assert_eq!(e123.reversion(), rev);
        assert_eq!(rev, e123.scale(-1.0));
        let a = &Multivector::scalar(3, 5.0) + &e(3, 1).scale(2.0);
        assert_eq!(a.reversion(), a);
    }

    #[test]
    fn hat_examples() {
        let a = &e(3, 1) + &e(3, 3);
        assert_eq!(a.hat(), &e(3, 1) - &e(3, 3));
        let b = &Multivector::scalar(3, 2.0) + &Multivector::blade(3, 0b101, 1.0);
        assert_eq!(b.hat(), &Multivector::scalar(3, 2.0) - &Multivector::blade(3, 0b101, 1.0));
    }

    #[test]
    fn projection_examples() {
        let a = &Multivector::scalar(3, 2.0) + &Multivector::blade(3, 0b101, 1.0);
        let (p, q, qs) = a.pq_projections();
        assert_eq!(p, Multivector::scalar(3, 2.0));
        assert_eq!(q, e(3, 1));
        // e3 e1 e3 = e1
        assert_eq!(qs, e(3, 1));
        let (p, q, qs) = e(3, 3).pq_projections();
        assert!(p.is_zero());
        assert_eq!(q, Multivector::one(3));
        assert_eq!(qs, Multivector::scalar(3, -1.0));
        let (p, q, qs) = e(3, 1).pq_projections();
        assert_eq!(p, e(3, 1));
        assert!(q.is_zero() && qs.is_zero());
    }

    #[test]
    fn norm_examples() {
        let a = &Multivector::scalar(2, 3.0) + &Multivector::blade(2, 0b11, 4.0);
        assert_eq!(a.norm(), 5.0);
        assert_eq!(Multivector::zero(4).norm(), 0.0);
    }

    #[test]
    fn mismatch_is_an_error() {
        assert!(geometric_product(&e(2, 1), &e(3, 1)).is_err());
    }

    #[test]
    fn json_roundtrip_drops_zeros() {
        let a = &Multivector::scalar(3, 2.5) + &Multivector::blade(3, 5, -1.0);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"dim":3,"coeffs":{"0":2.5,"5":-1.0}}"#);
        let b: Multivector = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sign_table_matches_direct_sign() {
        let t = sign_table(4);
        for a in 0..16 {
            for b in 0..16 {
                assert_eq!(f64::from(t[a * 16 + b]), blade_sign(a, b));
            }
        }
    }
}
