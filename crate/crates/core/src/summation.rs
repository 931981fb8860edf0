//! Order-preserving parallel term evaluation and a fixed-shape reduction.
//!
//! Terms are computed with rayon and collected in input order; the sum is
//! then formed sequentially by a pairwise scheme whose shape depends only
//! on the number of terms. The result is bit-identical for any thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::Multivector;
use crate::error::{Error, Result};

/// Truncation metadata of a series evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// Row-norm cutoff `R`.
    #[serde(rename = "R")]
    pub row_cutoff: f64,
    pub lattice_radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Complex64>,
}

/// Partial sum with a heuristic tail estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: Multivector,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub truncation: Truncation,
}

/// One evaluated term with the keys its tail fit uses.
#[derive(Clone, Debug)]
pub struct Term {
    pub value: Multivector,
    /// `‖(c,d)‖` of the coset representative.
    pub row_norm: f64,
    /// `‖u‖` of the lattice translation (0 when there is none).
    pub shift_norm: f64,
}

/// Evaluate `f` on every item in parallel, keeping input order.
pub fn par_map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Like [`par_map_ordered`] but stops at the first error (in input order).
pub fn try_par_map_ordered<T, R, F>(items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    par_map_ordered(items, f).into_iter().collect()
}

const LEAF: usize = 16;

fn leaf_sum(terms: &[&Multivector], out: &mut [f64], comp: &mut [f64]) {
    // Neumaier compensated accumulation per coefficient
    for t in terms {
        for ((s, c), &v) in out.iter_mut().zip(comp.iter_mut()).zip(t.coeffs()) {
            let sum = *s + v;
            if s.abs() >= v.abs() {
                *c += (*s - sum) + v;
            } else {
                *c += (v - sum) + *s;
            }
            *s = sum;
        }
    }
}

fn pairwise(terms: &[&Multivector], dim: usize) -> Vec<f64> {
    let size = 1usize << dim;
    if terms.len() <= LEAF {
        let mut s = vec![0.0; size];
        let mut c = vec![0.0; size];
        leaf_sum(terms, &mut s, &mut c);
        return s.iter().zip(&c).map(|(a, b)| a + b).collect();
    }
    let mid = terms.len() / 2;
    let left = pairwise(&terms[..mid], dim);
    let right = pairwise(&terms[mid..], dim);
    left.iter().zip(&right).map(|(a, b)| a + b).collect()
}

/// Deterministic compensated pairwise sum.
pub fn pairwise_sum(dim: usize, terms: &[Multivector]) -> Multivector {
    let refs: Vec<&Multivector> = terms.iter().collect();
    Multivector::from_coeffs(dim, pairwise(&refs, dim)).expect("consistent dimension")
}

/// Power-law tail estimate: fits `C` in `‖term‖ ~ C·R^{−β}`
/// (cumulative) on the shells `(R/4, R/2]` and `(R/2, R]` and returns the
/// larger extrapolated remainder `C·R^{−β}`.
pub fn fit_power_tail(keys: &[f64], mags: &[f64], r: f64, beta: f64) -> f64 {
    if !(beta > 0.0) {
        return f64::INFINITY;
    }
    if !(r > 0.0) || !r.is_finite() {
        return 0.0;
    }
    let shells = [(r / 4.0, r / 2.0), (r / 2.0, r)];
    let mut c_max = 0.0f64;
    for (lo, hi) in shells {
        let s: f64 = keys
            .iter()
            .zip(mags)
            .filter(|(k, _)| **k > lo && **k <= hi)
            .map(|(_, m)| *m)
            .sum();
        if s == 0.0 {
            continue;
        }
        let denom = lo.powf(-beta) - hi.powf(-beta);
        c_max = c_max.max(s / denom);
    }
    c_max * r.powf(-beta)
}

/// Reduce evaluated terms into a [`SeriesValue`].
///
/// `beta_row` governs the decay over coset rows, `beta_lattice` over
/// translations; pass `None` for a sum without a translation part.
pub fn reduce_terms(
    dim: usize,
    terms: Vec<Term>,
    truncation: Truncation,
    beta_row: f64,
    beta_lattice: Option<f64>,
) -> Result<SeriesValue> {
    if terms.is_empty() {
        return Err(Error::InvalidParameters(
            "truncation keeps no terms (the identity must be included)".into(),
        ));
    }
    let mags: Vec<f64> = terms.iter().map(|t| t.value.norm()).collect();
    let rows: Vec<f64> = terms.iter().map(|t| t.row_norm).collect();
    let mut tail = fit_power_tail(&rows, &mags, truncation.row_cutoff, beta_row);
    if let Some(bl) = beta_lattice {
        if truncation.lattice_radius > 0.0 {
            let shifts: Vec<f64> = terms.iter().map(|t| t.shift_norm).collect();
            tail += fit_power_tail(&shifts, &mags, truncation.lattice_radius, bl);
        }
    }
    if !tail.is_finite() {
        return Err(Error::NonConvergence(format!(
            "tail estimate is not finite (decay exponents {beta_row}, {beta_lattice:?})"
        )));
    }
    let values: Vec<Multivector> = terms.into_iter().map(|t| t.value).collect();
    let value = pairwise_sum(dim, &values);
    Ok(SeriesValue {
        value,
        terms_used: values.len(),
        tail_estimate: tail,
        truncation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_is_accurate() {
        let vals = [1e16, 1.0, -1e16, 1.0];
        // 1024 terms split into aligned leaves of 16, each holding whole patterns
        let terms: Vec<Multivector> = (0..1024).map(|i| Multivector::scalar(2, vals[i % 4])).collect();
        let s = pairwise_sum(2, &terms);
        assert_eq!(s.scalar_part(), 512.0);
    }

    #[test]
    fn power_tail_recovers_exact_law() {
        // terms m^{-3} at key m: cumulative tail beyond R is about R^{-2}/2
        let keys: Vec<f64> = (1..=1000).map(|m| m as f64).collect();
        let mags: Vec<f64> = keys.iter().map(|m| m.powi(-3)).collect();
        let t = fit_power_tail(&keys, &mags, 1000.0, 2.0);
        let exact: f64 = (1001..2_000_000).map(|m| (m as f64).powi(-3)).sum();
        assert!((t / exact - 1.0).abs() < 0.01, "{t} vs {exact}");
    }

    #[test]
    fn order_is_preserved() {
        let items: Vec<usize> = (0..10_000).collect();
        let out = par_map_ordered(&items, |i| i * 2);
        assert!(out.iter().enumerate().all(|(i, v)| *v == 2 * i));
    }
}
