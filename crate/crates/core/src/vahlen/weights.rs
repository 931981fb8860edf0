use serde::{Deserialize, Serialize};

use super::VahlenMatrix;
use crate::clifford::{Multivector, VectorPoint};
use crate::error::{Error, Result};

/// Image of a point under a Möbius map together with `cx+d`.
#[derive(Clone, Debug)]
pub struct MobiusEval {
    pub image: VectorPoint,
    pub cxd: Multivector,
    pub cxd_norm: f64,
}

/// Automorphy factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightKind {
    /// `J_k`: reversed `cx+d` over a power of its norm for odd `k`, a pure
    /// power for even `k`. `k` may be negative.
    J,
    /// `K_k = (cx+d)~ / ‖cx+d‖^{n−k}`.
    K,
    /// `L_k = 1 / ‖cx+d‖^{n−k−2}`.
    L,
    /// `H = x_n / ‖cx+d‖²`.
    H,
}

/// Weight of `kind` from an already evaluated `cx+d`.
///
/// `x_n` is only read for [`WeightKind::H`].
pub fn weight_from_eval(kind: WeightKind, k: f64, n: usize, eval: &MobiusEval, x_n: f64) -> Result<Multivector> {
    let nf = n as f64;
    let r = eval.cxd_norm;
    match kind {
        WeightKind::J => {
            if k.fract() != 0.0 || k == 0.0 {
                return Err(Error::InvalidParameters(format!(
                    "J_k needs a nonzero integer k, got {k}"
                )));
            }
            if k >= nf {
                return Err(Error::InvalidParameters(format!(
                    "J_k needs k < n (k = {k}, n = {n})"
                )));
            }
            let odd = (k.abs() as i64) % 2 == 1;
            if odd {
                Ok(eval.cxd.reversion().scale(r.powf(-(nf - k + 1.0))))
            } else {
                Ok(Multivector::scalar(n, r.powf(-(nf - k))))
            }
        }
        WeightKind::K => Ok(eval.cxd.reversion().scale(r.powf(-(nf - k)))),
        WeightKind::L => Ok(Multivector::scalar(n, r.powf(-(nf - k - 2.0)))),
        WeightKind::H => {
            if x_n <= 0.0 {
                return Err(Error::Domain(format!("H needs x_n > 0, got {x_n}")));
            }
            Ok(Multivector::scalar(n, x_n / (r * r)))
        }
    }
}

/// `J_k(M,x)`, `K_k(M,x)`, `L_k(M,x)` or `H(M,x)`.
pub fn weight_factor(kind: WeightKind, k: f64, m: &VahlenMatrix, x: &VectorPoint) -> Result<Multivector> {
    let eval = m.evaluate(x)?;
    weight_from_eval(kind, k, m.dim(), &eval, x.last())
}
