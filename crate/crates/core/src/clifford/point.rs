use serde::{Deserialize, Serialize};

use super::Multivector;
use crate::error::{Error, Result};

/// A point `x = x_1 e_1 + ... + x_n e_n` of `R^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VectorPoint {
    pub coords: Vec<f64>,
}

impl VectorPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        VectorPoint { coords }
    }

    pub fn zero(n: usize) -> Self {
        VectorPoint {
            coords: vec![0.0; n],
        }
    }

    /// `t e_i`, 1-based.
    pub fn axis(n: usize, i: usize, t: f64) -> Self {
        let mut p = Self::zero(n);
        p.coords[i - 1] = t;
        p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The height `x_n`.
    #[inline]
    pub fn last(&self) -> f64 {
        *self.coords.last().expect("empty point")
    }

    pub fn to_multivector(&self) -> Multivector {
        Multivector::from_vector(self.dim(), &self.coords)
    }

    /// Grade-1 part of `m`; other grades are dropped.
    pub fn from_multivector(m: &Multivector) -> Self {
        VectorPoint {
            coords: m.vector_coords(),
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Reflection across the boundary hyperplane `x_n = 0`.
    pub fn hat(&self) -> Self {
        let mut p = self.clone();
        if let Some(last) = p.coords.last_mut() {
            *last = -*last;
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        VectorPoint {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorPoint {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        VectorPoint {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    /// Same point with coordinate `i` (0-based) moved by `delta`.
    pub fn shifted(&self, i: usize, delta: f64) -> Self {
        let mut p = self.clone();
        p.coords[i] += delta;
        p
    }

    pub fn in_upper_half_space(&self) -> bool {
        self.last() > 0.0
    }
}

/// `x^{-1} = -x/‖x‖²`.
pub fn vector_inverse(x: &VectorPoint) -> Result<VectorPoint> {
    let ns = x.norm_squared();
    if ns == 0.0 {
        return Err(Error::Singularity("inverse of the zero vector".into()));
    }
    Ok(x.scale(-1.0 / ns))
}
