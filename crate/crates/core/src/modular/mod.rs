//! The groups `Γ_p = ⟨J, T_{e_1}, …, T_{e_p}⟩`, their principal congruence
//! subgroups `Γ_p[N]`, and coset tables modulo translations.

mod cosets;
mod domain;
mod lattice;

pub use cosets::{enumerate_cosets, CosetRep, CosetTable, EnumerationBound};
pub use domain::{fundamental_domain_membership_gamma1_4, DomainMembership, Gamma14Face};
pub use lattice::{translation_lattice_iter, LatticePoint};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::clifford::{ExactMultivector, MAX_DIM};
use crate::error::{Error, Result};
use crate::vahlen::VahlenMatrix;

/// Ambient dimension `n`, number of translation generators `p`, level `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupParams {
    pub n: usize,
    pub p: usize,
    #[serde(rename = "N")]
    pub level: u64,
}

impl GroupParams {
    pub fn new(n: usize, p: usize, level: u64) -> Result<Self> {
        let g = GroupParams { n, p, level };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > MAX_DIM {
            return Err(Error::InvalidParameters(format!(
                "requires 2 <= n <= {MAX_DIM}, got n = {}",
                self.n
            )));
        }
        if self.p < 1 || self.p >= self.n {
            return Err(Error::InvalidParameters(format!(
                "requires 1 <= p <= n-1, got p = {} with n = {}",
                self.p, self.n
            )));
        }
        if self.level < 1 {
            return Err(Error::InvalidParameters("requires level N >= 1".into()));
        }
        Ok(())
    }
}

/// Generators of `Γ_p` and their inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    J,
    JInv,
    /// `T_{e_i}`, 1-based.
    T(usize),
    TInv(usize),
}

impl Generator {
    pub fn symbol(&self) -> String {
        match self {
            Generator::J => "J".into(),
            Generator::JInv => "J^-1".into(),
            Generator::T(i) => format!("T{i}"),
            Generator::TInv(i) => format!("T{i}^-1"),
        }
    }

    pub fn inverse(&self) -> Generator {
        match *self {
            Generator::J => Generator::JInv,
            Generator::JInv => Generator::J,
            Generator::T(i) => Generator::TInv(i),
            Generator::TInv(i) => Generator::T(i),
        }
    }

    pub fn matrix(&self, p: usize) -> VahlenMatrix<ExactMultivector> {
        let one = ExactMultivector::one(p);
        let zero = ExactMultivector::zero(p);
        match *self {
            Generator::J => VahlenMatrix::new(zero.clone(), ExactMultivector::scalar(p, -1), one, zero),
            Generator::JInv => VahlenMatrix::new(zero.clone(), one, ExactMultivector::scalar(p, -1), zero),
            Generator::T(i) => VahlenMatrix::new(one.clone(), ExactMultivector::e(p, i, 1), zero, one),
            Generator::TInv(i) => VahlenMatrix::new(one.clone(), ExactMultivector::e(p, i, -1), zero, one),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown generator symbol {s:?}"));
        match s {
            "J" => Ok(Generator::J),
            "J^-1" => Ok(Generator::JInv),
            _ => {
                let rest = s.strip_prefix('T').ok_or_else(bad)?;
                let (idx, inv) = match rest.strip_suffix("^-1") {
                    Some(r) => (r, true),
                    None => (rest, false),
                };
                let i: usize = idx.parse().map_err(|_| bad())?;
                if i == 0 {
                    return Err(bad());
                }
                Ok(if inv { Generator::TInv(i) } else { Generator::T(i) })
            }
        }
    }
}

/// Exact group element with the generator word that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub matrix: VahlenMatrix<ExactMultivector>,
    pub word: Vec<Generator>,
}

impl GroupElement {
    pub fn identity(p: usize) -> Self {
        GroupElement {
            matrix: VahlenMatrix::identity_like(&ExactMultivector::zero(p)),
            word: Vec::new(),
        }
    }

    pub fn from_word(p: usize, word: &[Generator]) -> Self {
        let mut m = Self::identity(p);
        for g in word {
            m = m.mul(&GroupElement {
                matrix: g.matrix(p),
                word: vec![*g],
            });
        }
        m
    }

    pub fn parse_word(p: usize, word: &str) -> Result<Self> {
        let gens = parse_word(word)?;
        for g in &gens {
            if let Generator::T(i) | Generator::TInv(i) = g {
                if *i > p {
                    return Err(Error::Parse(format!("generator T{i} needs p >= {i}")));
                }
            }
        }
        Ok(Self::from_word(p, &gens))
    }

    pub fn p(&self) -> usize {
        self.matrix.a.dim()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut word = self.word.clone();
        word.extend_from_slice(&rhs.word);
        GroupElement {
            matrix: self.matrix.matrix_mul(&rhs.matrix),
            word,
        }
    }

    /// Inverse via the star map, valid since every element has
    /// pseudo-determinant one.
    pub fn inverse(&self) -> Self {
        GroupElement {
            matrix: self.matrix.star(),
            word: self.word.iter().rev().map(Generator::inverse).collect(),
        }
    }

    pub fn word_string(&self) -> String {
        word_string(&self.word)
    }

    /// `‖c‖² + ‖d‖²`.
    pub fn row_norm_squared(&self) -> BigInt {
        self.matrix.c.norm_squared() + self.matrix.d.norm_squared()
    }

    /// Exact isometric sphere: center `−c^{-1}d` and squared radius `1/‖c‖²`.
    pub fn exact_isometric_sphere(&self) -> Option<ExactSphere> {
        let c = &self.matrix.c;
        let cn2 = c.norm_squared();
        if cn2.is_zero() {
            return None;
        }
        let num = -&(&c.conjugate() * &self.matrix.d);
        let center = (0..self.p())
            .map(|i| BigRational::new(num.coeff(1 << i).clone(), cn2.clone()))
            .collect();
        Some(ExactSphere {
            center,
            radius_squared: BigRational::new(BigInt::one(), cn2),
            center_is_vector: num.is_vector(),
        })
    }
}

/// Isometric sphere with rational data.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSphere {
    /// Coordinates along `e_1 … e_p`.
    pub center: Vec<BigRational>,
    pub radius_squared: BigRational,
    pub center_is_vector: bool,
}

pub fn word_string(word: &[Generator]) -> String {
    word.iter().map(Generator::symbol).collect::<Vec<_>>().join(" ")
}

pub fn parse_word(s: &str) -> Result<Vec<Generator>> {
    s.split_whitespace().map(str::parse).collect()
}

/// `J, J^-1, T_1, T_1^-1, …, T_p, T_p^-1`.
pub fn generator_list(p: usize) -> Vec<Generator> {
    let mut g = vec![Generator::J, Generator::JInv];
    for i in 1..=p {
        g.push(Generator::T(i));
        g.push(Generator::TInv(i));
    }
    g
}

/// The generators of `Γ_p` and their inverses as exact elements.
pub fn generators(params: &GroupParams) -> Vec<GroupElement> {
    generator_list(params.p)
        .into_iter()
        .map(|g| GroupElement {
            matrix: g.matrix(params.p),
            word: vec![g],
        })
        .collect()
}

/// `a−1, b, c, d−1 ∈ N·O_p`.
pub fn is_in_congruence_subgroup(m: &GroupElement, params: &GroupParams) -> bool {
    let n = BigInt::from(params.level);
    let one = ExactMultivector::one(m.p());
    let mx = &m.matrix;
    (&mx.a - &one).divisible_by(&n)
        && mx.b.divisible_by(&n)
        && mx.c.divisible_by(&n)
        && (&mx.d - &one).divisible_by(&n)
}

/// Translation `T_u` for the integer vector `u` along `e_1 … e_p`, with its
/// word written as repeated generator letters.
pub fn translation_element(p: usize, u: &[BigInt]) -> GroupElement {
    let mut b = ExactMultivector::zero(p);
    let mut word = Vec::new();
    for (i, ui) in u.iter().enumerate() {
        b.set(1 << i, ui.clone());
        let count: u64 = num_traits::ToPrimitive::to_u64(&num_traits::Signed::abs(ui))
            .expect("translation too large for a word");
        let g = if ui > &BigInt::zero() {
            Generator::T(i + 1)
        } else {
            Generator::TInv(i + 1)
        };
        word.extend(std::iter::repeat_n(g, count as usize));
    }
    let one = ExactMultivector::one(p);
    GroupElement {
        matrix: VahlenMatrix::new(one.clone(), b, ExactMultivector::zero(p), one),
        word,
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "I")
        } else {
            write!(f, "{}", self.word_string())
        }
    }
}
