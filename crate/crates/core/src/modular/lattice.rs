use num_bigint::BigInt;

use super::{translation_element, GroupElement, GroupParams};
use crate::clifford::VectorPoint;

/// Translation by `N·(m_1 e_1 + … + m_p e_p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticePoint {
    pub m: Vec<i64>,
    /// The translation vector in `R^n`.
    pub shift: VectorPoint,
}

impl LatticePoint {
    pub fn element(&self, params: &GroupParams) -> GroupElement {
        let level = params.level as i64;
        let u: Vec<BigInt> = self.m.iter().map(|&mi| BigInt::from(mi * level)).collect();
        translation_element(params.p, &u)
    }

    pub fn norm_squared_units(&self) -> i64 {
        self.m.iter().map(|x| x * x).sum()
    }
}

/// Lattice translations with `‖N m‖ ≤ radius`, by shells of increasing norm,
/// with `+m` immediately followed by `−m`.
///
/// Within a pair the member whose first nonzero coordinate is positive
/// comes first; pairs in a shell are ordered lexicographically.
pub fn translation_lattice_iter(params: &GroupParams, radius: f64) -> Vec<LatticePoint> {
    let p = params.p;
    let level = params.level as f64;
    let bound = (radius / level + 1e-12).floor().max(0.0) as i64;
    let r2 = (radius / level) * (radius / level) + 1e-9;
    let mut half: Vec<Vec<i64>> = Vec::new();
    let mut m = vec![-bound; p];
    if bound >= 0 {
        loop {
            let ns: i64 = m.iter().map(|x| x * x).sum();
            let positive_first = m.iter().find(|&&x| x != 0).map(|&x| x > 0).unwrap_or(false);
            if (ns as f64) <= r2 && positive_first {
                half.push(m.clone());
            }
            let mut i = 0;
            while i < p {
                if m[i] < bound {
                    m[i] += 1;
                    break;
                }
                m[i] = -bound;
                i += 1;
            }
            if i == p {
                break;
            }
        }
    }
    half.sort_by(|a, b| {
        let na: i64 = a.iter().map(|x| x * x).sum();
        let nb: i64 = b.iter().map(|x| x * x).sum();
        na.cmp(&nb).then_with(|| a.cmp(b))
    });
    let point = |m: Vec<i64>| {
        let mut coords = vec![0.0; params.n];
        for (i, &mi) in m.iter().enumerate() {
            coords[i] = mi as f64 * level;
        }
        LatticePoint {
            m,
            shift: VectorPoint::new(coords),
        }
    };
    let mut out = vec![point(vec![0; p])];
    for m in half {
        let neg: Vec<i64> = m.iter().map(|x| -x).collect();
        out.push(point(m));
        out.push(point(neg));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_zero_is_identity() {
        let pr = GroupParams::new(3, 1, 4).unwrap();
        let l = translation_lattice_iter(&pr, 0.0);
        assert_eq!(l.len(), 1);
        assert!(l[0].element(&pr).word.is_empty());
    }

    #[test]
    fn level_four_line() {
        let pr = GroupParams::new(3, 1, 4).unwrap();
        let l = translation_lattice_iter(&pr, 8.0);
        let shifts: Vec<f64> = l.iter().map(|t| t.shift.coords[0]).collect();
        assert_eq!(shifts, vec![0.0, 4.0, -4.0, 8.0, -8.0]);
    }

    #[test]
    fn pairs_are_adjacent() {
        let pr = GroupParams::new(4, 2, 3).unwrap();
        let l = translation_lattice_iter(&pr, 6.0);
        for pair in l[1..].chunks(2) {
            let neg: Vec<i64> = pair[0].m.iter().map(|x| -x).collect();
            assert_eq!(pair[1].m, neg);
        }
    }
}
