use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{grade_of, sign_table, Multivector, MAX_DIM};

/// Element of the integer ring spanned by the blades of `Cl_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMultivector {
    dim: usize,
    coeffs: Vec<BigInt>,
}

impl ExactMultivector {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        ExactMultivector {
            dim,
            coeffs: vec![BigInt::zero(); 1 << dim],
        }
    }

    pub fn scalar(dim: usize, s: impl Into<BigInt>) -> Self {
        let mut m = Self::zero(dim);
        m.coeffs[0] = s.into();
        m
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, 1)
    }

    /// `c e_i`, 1-based.
    pub fn e(dim: usize, i: usize, c: impl Into<BigInt>) -> Self {
        assert!(i >= 1 && i <= dim);
        let mut m = Self::zero(dim);
        m.coeffs[1 << (i - 1)] = c.into();
        m
    }

    pub fn from_vector(dim: usize, coords: &[i64]) -> Self {
        let mut m = Self::zero(dim);
        for (i, &c) in coords.iter().enumerate() {
            m.coeffs[1 << i] = BigInt::from(c);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> &BigInt {
        &self.coeffs[mask]
    }

    pub fn set(&mut self, mask: usize, v: BigInt) {
        self.coeffs[mask] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_scalar(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// True when only grade-1 coefficients are nonzero (zero counts).
    pub fn is_vector(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, c)| grade_of(m) == 1 || c.is_zero())
    }

    pub fn norm_squared(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn divisible_by(&self, n: &BigInt) -> bool {
        self.coeffs.iter().all(|c| c.is_multiple_of(n))
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        ExactMultivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn map_sign(&self, negate: impl Fn(u32) -> bool) -> Self {
        ExactMultivector {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| if negate(grade_of(m)) { -c } else { c.clone() })
                .collect(),
        }
    }

    pub fn reversion(&self) -> Self {
        self.map_sign(|r| r % 4 >= 2)
    }

    pub fn conjugate(&self) -> Self {
        self.map_sign(|r| (r + 1) % 4 >= 2)
    }

    /// Float image in `Cl_n`, `n >= p`, by zero-padding the blade index.
    pub fn to_float(&self, n: usize) -> Multivector {
        assert!(n >= self.dim);
        let mut m = Multivector::zero(n);
        for (mask, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                m.set(mask, c.to_f64().unwrap_or(f64::NAN));
            }
        }
        m
    }

    /// Canonical byte serialization: per coefficient a little-endian u32
    /// length followed by two's-complement little-endian bytes.
    pub fn canonical_bytes(&self, out: &mut Vec<u8>) {
        out.push(self.dim as u8);
        for c in &self.coeffs {
            let b = c.to_signed_bytes_le();
            out.extend_from_slice(&(b.len() as u32).to_le_bytes());
            out.extend_from_slice(&b);
        }
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.is_scalar()
    }
}

impl<'a> Mul<&'a ExactMultivector> for &'a ExactMultivector {
    type Output = ExactMultivector;
    fn mul(self, rhs: &'a ExactMultivector) -> ExactMultivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in exact product");
        let size = 1usize << self.dim;
        let table = sign_table(self.dim);
        let mut out = vec![BigInt::zero(); size];
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in rhs.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let prod = ca * cb;
                if table[a * size + b] > 0 {
                    out[a ^ b] += prod;
                } else {
                    out[a ^ b] -= prod;
                }
            }
        }
        ExactMultivector {
            dim: self.dim,
            coeffs: out,
        }
    }
}

impl<'a> Add<&'a ExactMultivector> for &'a ExactMultivector {
    type Output = ExactMultivector;
    fn add(self, rhs: &'a ExactMultivector) -> ExactMultivector {
        assert_eq!(self.dim, rhs.dim);
        ExactMultivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ExactMultivector> for &'a ExactMultivector {
    type Output = ExactMultivector;
    fn sub(self, rhs: &'a ExactMultivector) -> ExactMultivector {
        assert_eq!(self.dim, rhs.dim);
        ExactMultivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ExactMultivector {
    type Output = ExactMultivector;
    fn neg(self) -> ExactMultivector {
        ExactMultivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Serialize for ExactMultivector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::{SerializeMap, SerializeStruct};
        struct Coeffs<'a>(&'a [BigInt]);
        impl Serialize for Coeffs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let nz = self.0.iter().filter(|c| !c.is_zero()).count();
                let mut map = s.serialize_map(Some(nz))?;
                for (m, c) in self.0.iter().enumerate() {
                    if !c.is_zero() {
                        map.serialize_entry(&m.to_string(), &c.to_string())?;
                    }
                }
                map.end()
            }
        }
        let mut st = s.serialize_struct("ExactMultivector", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("coeffs", &Coeffs(&self.coeffs))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ExactMultivector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            dim: usize,
            coeffs: BTreeMap<String, String>,
        }
        let repr = Repr::deserialize(d)?;
        if repr.dim > MAX_DIM {
            return Err(D::Error::custom("dimension too large"));
        }
        let mut m = ExactMultivector::zero(repr.dim);
        for (k, v) in repr.coeffs {
            let mask: usize = k.parse().map_err(D::Error::custom)?;
            if mask >= 1 << repr.dim {
                return Err(D::Error::custom(format!("blade {mask} out of range")));
            }
            m.coeffs[mask] = v.parse().map_err(D::Error::custom)?;
        }
        Ok(m)
    }
}
