//! Breadth-first enumeration of `𝒯_p[N] \ Γ_p[N]`.
//!
//! Two elements share a coset of the translation group exactly when their
//! bottom rows agree, and right multiplication by a generator acts on the
//! bottom row alone, so the search runs over bottom rows of `Γ_p`. A row
//! `(c, d)` meets `Γ_p[N]` iff `c ≡ 0` and `d ≡ 1 (mod N)`; the stored
//! element is then moved into `Γ_p[N]` by a left translation.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{
    generator_list, is_in_congruence_subgroup, parse_word, translation_element, GroupElement, GroupParams,
};
use crate::clifford::{ExactMultivector, Multivector};
use crate::error::{Error, Result};
use crate::vahlen::VahlenMatrix;

/// Controls for [`enumerate_cosets`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationBound {
    /// Maximal generator-word length `L`.
    #[serde(rename = "L")]
    pub max_word_len: usize,
    /// Optional cutoff on `‖(c,d)‖` for the kept rows.
    #[serde(rename = "row_R")]
    pub row_norm_cutoff: Option<f64>,
    /// Cap on the number of distinct bottom rows visited.
    pub max_rows: usize,
}

impl EnumerationBound {
    pub const DEFAULT_MAX_ROWS: usize = 4_000_000;

    pub fn words(max_word_len: usize) -> Self {
        EnumerationBound {
            max_word_len,
            row_norm_cutoff: None,
            max_rows: Self::DEFAULT_MAX_ROWS,
        }
    }

    pub fn with_cutoff(mut self, r: f64) -> Self {
        self.row_norm_cutoff = Some(r);
        self
    }
}

/// One coset representative.
#[derive(Clone, Debug)]
pub struct CosetRep {
    pub element: GroupElement,
    pub row_norm_sq: BigInt,
    pub row_norm: f64,
    /// Length of the shortest word reaching this bottom row.
    pub depth: usize,
    /// Entries embedded in `Cl_n`.
    pub float: VahlenMatrix<Multivector>,
}

/// Canonical coset representatives sorted by bottom-row norm.
#[derive(Clone, Debug)]
pub struct CosetTable {
    pub params: GroupParams,
    pub bound: EnumerationBound,
    pub reps: Vec<CosetRep>,
    /// Rows with `‖(c,d)‖ ≤ complete_up_to_r` are taken as exhausted.
    pub complete_up_to_r: f64,
}

fn row_key(c: &ExactMultivector, d: &ExactMultivector) -> Vec<u8> {
    let mut k = Vec::with_capacity(32);
    c.canonical_bytes(&mut k);
    d.canonical_bytes(&mut k);
    k
}

/// `(c,d) ≡ (0,1) mod N`.
fn row_in_level(c: &ExactMultivector, d: &ExactMultivector, level: &BigInt) -> bool {
    c.divisible_by(level) && (d - &ExactMultivector::one(d.dim())).divisible_by(level)
}

fn check_unitriangular(m_new: &GroupElement, m_old: &GroupElement) -> Result<()> {
    let q = m_new.matrix.matrix_mul(&m_old.matrix.star());
    if q.c.is_zero() && q.a.is_one() && q.d.is_one() && q.b.is_vector() {
        Ok(())
    } else {
        Err(Error::Contract(format!(
            "bottom-row collision without a translation quotient: {} vs {}",
            m_new.word_string(),
            m_old.word_string()
        )))
    }
}

/// Left translation placing `M⟨2e_n⟩` into the box `[−N/2, N/2)^p`, after
/// fixing `b ≡ 0 mod N`. Computed in exact arithmetic.
fn canonical_shift(m: &GroupElement, params: &GroupParams) -> Vec<BigInt> {
    let p = params.p;
    let n = params.n;
    let level = BigInt::from(params.level);
    // b ≡ d̃b (mod N) and d̃b is a vector; subtracting it lands in Γ_p[N]
    let dtb = &m.matrix.d.reversion() * &m.matrix.b;
    let fix: Vec<BigInt> = (0..p).map(|i| -dtb.coeff(1 << i).clone()).collect();
    let fixed = translation_element(p, &fix).mul(m);

    let emb = |e: &ExactMultivector| -> ExactMultivector {
        let mut out = ExactMultivector::zero(n);
        for (mask, c) in e.coeffs().iter().enumerate() {
            out.set(mask, c.clone());
        }
        out
    };
    let x = ExactMultivector::e(n, n, 2);
    let (a, b, c, d) = (
        emb(&fixed.matrix.a),
        emb(&fixed.matrix.b),
        emb(&fixed.matrix.c),
        emb(&fixed.matrix.d),
    );
    let den_mv = &(&c * &x) + &d;
    let den = den_mv.norm_squared();
    let num = &(&(&a * &x) + &b) * &den_mv.conjugate();
    (0..p)
        .map(|i| {
            let yi = num.coeff(1 << i);
            // floor((y + N/2)/N) with y = yi/den
            let top: BigInt = yi * 2 + &level * &den;
            let bottom: BigInt = &level * &den * 2;
            let m_i = top.div_floor(&bottom);
            &fix[i] - &level * m_i
        })
        .collect()
}

struct Node {
    element: GroupElement,
    depth: usize,
}

/// Enumerate canonical representatives of `𝒯_p[N] \ Γ_p[N]` reachable by
/// words of length at most `bound.max_word_len`.
pub fn enumerate_cosets(params: &GroupParams, bound: &EnumerationBound) -> Result<CosetTable> {
    params.validate()?;
    if let Some(r) = bound.row_norm_cutoff {
        if r < 1.0 {
            return Err(Error::InvalidParameters(format!(
                "row cutoff R = {r} excludes the identity (requires R >= 1)"
            )));
        }
    }
    let p = params.p;
    let level = BigInt::from(params.level);
    let gens: Vec<_> = generator_list(p)
        .into_iter()
        .map(|g| GroupElement {
            matrix: g.matrix(p),
            word: vec![g],
        })
        .collect();

    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let id = GroupElement::identity(p);
    index.insert(row_key(&id.matrix.c, &id.matrix.d), 0);
    nodes.push(Node { element: id, depth: 0 });
    let mut frontier = vec![0usize];

    for depth in 1..=bound.max_word_len {
        let mut next = Vec::new();
        for &i in &frontier {
            for g in &gens {
                let cand = nodes[i].element.mul(g);
                let key = row_key(&cand.matrix.c, &cand.matrix.d);
                match index.get(&key) {
                    Some(&j) => {
                        if row_in_level(&cand.matrix.c, &cand.matrix.d, &level) {
                            check_unitriangular(&cand, &nodes[j].element)?;
                        }
                    }
                    None => {
                        if nodes.len() >= bound.max_rows {
                            return Err(Error::Resource(format!(
                                "more than {} bottom rows visited at word length {depth}",
                                bound.max_rows
                            )));
                        }
                        index.insert(key, nodes.len());
                        next.push(nodes.len());
                        nodes.push(Node { element: cand, depth });
                    }
                }
            }
        }
        frontier = next;
    }

    let mut reps = Vec::new();
    for node in &nodes {
        let mx = &node.element.matrix;
        if !row_in_level(&mx.c, &mx.d, &level) {
            continue;
        }
        let row_norm_sq = node.element.row_norm_squared();
        let row_norm = row_norm_sq.to_f64().unwrap_or(f64::INFINITY).sqrt();
        if let Some(r) = bound.row_norm_cutoff {
            if row_norm > r {
                continue;
            }
        }
        let shift = canonical_shift(&node.element, params);
        let element = if shift.iter().all(Zero::is_zero) {
            node.element.clone()
        } else {
            translation_element(p, &shift).mul(&node.element)
        };
        if !is_in_congruence_subgroup(&element, params) {
            return Err(Error::Contract(format!(
                "canonical representative {} left Γ_p[N]",
                element.word_string()
            )));
        }
        let float = element.matrix.to_float(params.n);
        reps.push(CosetRep {
            element,
            row_norm_sq,
            row_norm,
            depth: node.depth,
            float,
        });
    }
    reps.sort_by(|a, b| {
        a.row_norm_sq
            .cmp(&b.row_norm_sq)
            .then_with(|| a.element.word_string().cmp(&b.element.word_string()))
    });

    let complete_up_to_r = certified_radius(&reps, bound.max_word_len);
    Ok(CosetTable {
        params: *params,
        bound: *bound,
        reps,
        complete_up_to_r,
    })
}

/// Largest kept row norm seen by depth `L−2` that lies below every row
/// first reached at depth `L−1` or `L`.
fn certified_radius(reps: &[CosetRep], l: usize) -> f64 {
    if l < 2 {
        return 1.0;
    }
    let frontier_min = reps
        .iter()
        .filter(|r| r.depth + 1 >= l)
        .map(|r| r.row_norm)
        .fold(f64::INFINITY, f64::min);
    reps.iter()
        .filter(|r| r.depth + 2 <= l && r.row_norm < frontier_min)
        .map(|r| r.row_norm)
        .fold(1.0, f64::max)
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    params: GroupParams,
    bound: EnumerationBound,
    #[serde(rename = "complete_up_to_R")]
    complete_up_to_r: f64,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct RepLine {
    word: String,
    a: ExactMultivector,
    b: ExactMultivector,
    c: ExactMultivector,
    d: ExactMultivector,
    row_norm_sq: String,
    row_norm: f64,
    depth: usize,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Representatives with `‖(c,d)‖ ≤ r`, which form a prefix of the table.
    pub fn reps_up_to(&self, r: f64) -> &[CosetRep] {
        let end = self.reps.partition_point(|rep| rep.row_norm <= r);
        &self.reps[..end]
    }

    /// Table holding only the identity.
    pub fn identity_only(params: &GroupParams) -> Self {
        let element = GroupElement::identity(params.p);
        let float = element.matrix.to_float(params.n);
        CosetTable {
            params: *params,
            bound: EnumerationBound::words(0),
            reps: vec![CosetRep {
                element,
                row_norm_sq: BigInt::from(1),
                row_norm: 1.0,
                depth: 0,
                float,
            }],
            complete_up_to_r: 1.0,
        }
    }

    /// JSON-lines: a header, then one representative per line.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header = HeaderLine {
            params: self.params,
            bound: self.bound,
            complete_up_to_r: self.complete_up_to_r,
            count: self.reps.len(),
        };
        serde_json::to_writer(&mut w, &header)?;
        writeln!(w)?;
        for rep in &self.reps {
            let m = &rep.element.matrix;
            let line = RepLine {
                word: rep.element.word_string(),
                a: m.a.clone(),
                b: m.b.clone(),
                c: m.c.clone(),
                d: m.d.clone(),
                row_norm_sq: rep.row_norm_sq.to_string(),
                row_norm: rep.row_norm,
                depth: rep.depth,
            };
            serde_json::to_writer(&mut w, &line)?;
            writeln!(w)?;
        }
        Ok(())
    }

    /// Inverse of [`CosetTable::write_jsonl`]; checks every invariant.
    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let parse_err = |e: String| Error::Parse(format!("coset table: {e}"));
        let header: HeaderLine = match lines.next() {
            Some(l) => serde_json::from_str(&l.map_err(|e| parse_err(e.to_string()))?)
                .map_err(|e| parse_err(e.to_string()))?,
            None => return Err(parse_err("empty input".into())),
        };
        header.params.validate()?;
        let mut reps = Vec::with_capacity(header.count);
        let mut seen = std::collections::HashSet::new();
        for l in lines {
            let l = l.map_err(|e| parse_err(e.to_string()))?;
            if l.trim().is_empty() {
                continue;
            }
            let line: RepLine = serde_json::from_str(&l).map_err(|e| parse_err(e.to_string()))?;
            let matrix = VahlenMatrix::new(line.a, line.b, line.c, line.d);
            if matrix.dim() != header.params.p {
                return Err(parse_err("entry dimension differs from p".into()));
            }
            let element = GroupElement {
                matrix,
                word: parse_word(&line.word)?,
            };
            let report = element.matrix.verify_vahlen_conditions();
            if !report.pass || report.pseudo_determinant != Some(1.0) {
                return Err(parse_err(format!("{} fails the Vahlen conditions", line.word)));
            }
            if !is_in_congruence_subgroup(&element, &header.params) {
                return Err(parse_err(format!("{} is not in Γ_p[N]", line.word)));
            }
            if !seen.insert(row_key(&element.matrix.c, &element.matrix.d)) {
                return Err(parse_err(format!("duplicate bottom row at {}", line.word)));
            }
            let row_norm_sq = element.row_norm_squared();
            let float = element.matrix.to_float(header.params.n);
            reps.push(CosetRep {
                element,
                row_norm_sq,
                row_norm: line.row_norm,
                depth: line.depth,
                float,
            });
        }
        if reps.len() != header.count {
            return Err(parse_err(format!(
                "header announces {} rows, found {}",
                header.count,
                reps.len()
            )));
        }
        if reps.first().map(|r| !r.element.word.is_empty()).unwrap_or(true) {
            return Err(parse_err("first representative must be the identity".into()));
        }
        Ok(CosetTable {
            params: header.params,
            bound: header.bound,
            reps,
            complete_up_to_r: header.complete_up_to_r,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_zero_table_is_identity() {
        let pr = GroupParams::new(3, 1, 4).unwrap();
        let t = enumerate_cosets(&pr, &EnumerationBound::words(0)).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.reps[0].element.word.is_empty());
    }

    #[test]
    fn cutoff_below_one_is_rejected() {
        let pr = GroupParams::new(3, 1, 4).unwrap();
        assert!(enumerate_cosets(&pr, &EnumerationBound::words(3).with_cutoff(0.5)).is_err());
    }

    #[test]
    fn reps_are_canonical_members() {
        let pr = GroupParams::new(3, 1, 3).unwrap();
        let t = enumerate_cosets(&pr, &EnumerationBound::words(8)).unwrap();
        assert!(t.len() > 1);
        assert!(t.reps[0].element.word.is_empty());
        for rep in &t.reps {
            assert!(is_in_congruence_subgroup(&rep.element, &pr));
            let r = rep.element.matrix.verify_vahlen_conditions();
            assert!(r.pass);
            assert_eq!(r.pseudo_determinant, Some(1.0));
            let from_word = GroupElement::from_word(1, &rep.element.word);
            assert_eq!(from_word.matrix, rep.element.matrix);
            let y = rep.float.mobius_apply(&crate::VectorPoint::axis(3, 3, 2.0)).unwrap();
            assert!(y.coords[0] >= -1.5 && y.coords[0] < 1.5);
        }
        for w in t.reps.windows(2) {
            assert!(w[0].row_norm_sq <= w[1].row_norm_sq);
        }
    }

    #[test]
    fn jsonl_roundtrip() {
        let pr = GroupParams::new(4, 2, 3).unwrap();
        let t = enumerate_cosets(&pr, &EnumerationBound::words(5)).unwrap();
        let mut buf = Vec::new();
        t.write_jsonl(&mut buf).unwrap();
        let back = CosetTable::read_jsonl(buf.as_slice()).unwrap();
        assert_eq!(back.len(), t.len());
        let mut buf2 = Vec::new();
        back.write_jsonl(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }
}
