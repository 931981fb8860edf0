use serde::{Deserialize, Serialize};

use crate::clifford::VectorPoint;
use crate::error::{Error, Result};

pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Faces of the `Γ_1[4]` fundamental domain.
///
/// `C1 … C8` are hemispheres of radius `1/4` about `(−3/4 + (k−1)/2) e_1`,
/// `C9` is `x_1 = −1` and `C10` is `x_1 = 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gamma14Face(pub u8);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainMembership {
    Interior,
    Boundary(Gamma14Face),
    Exterior,
}

pub fn gamma1_4_hemisphere_center(k: u8) -> f64 {
    -0.75 + 0.5 * f64::from(k - 1)
}

pub const GAMMA1_4_RADIUS: f64 = 0.25;

/// Locate `x ∈ H⁺` relative to the `Γ_1[4]` fundamental domain.
pub fn fundamental_domain_membership_gamma1_4(x: &VectorPoint) -> Result<DomainMembership> {
    if x.dim() < 2 {
        return Err(Error::Domain("needs n >= 2".into()));
    }
    if x.last() <= 0.0 {
        return Err(Error::Domain(format!("requires x_n > 0, got {}", x.last())));
    }
    let x1 = x.coords[0];
    let tol = BOUNDARY_TOLERANCE;
    if x1 < -1.0 - tol || x1 > 3.0 + tol {
        return Ok(DomainMembership::Exterior);
    }
    let mut boundary = None;
    for k in 1..=8u8 {
        let mut c = VectorPoint::zero(x.dim());
        c.coords[0] = gamma1_4_hemisphere_center(k);
        let dist = x.distance(&c);
        if dist < GAMMA1_4_RADIUS - tol {
            return Ok(DomainMembership::Exterior);
        }
        if (dist - GAMMA1_4_RADIUS).abs() <= tol && boundary.is_none() {
            boundary = Some(Gamma14Face(k));
        }
    }
    if (x1 + 1.0).abs() <= tol {
        return Ok(DomainMembership::Boundary(Gamma14Face(9)));
    }
    if (x1 - 3.0).abs() <= tol {
        return Ok(DomainMembership::Boundary(Gamma14Face(10)));
    }
    Ok(match boundary {
        Some(f) => DomainMembership::Boundary(f),
        None => DomainMembership::Interior,
    })
}
