//! Coproduct, group-like and primitive tests, commutativization.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::series::TruncSeries;
use super::word::{shuffle, words_of_degree, Word};
use crate::error::{Error, Result};

/// Default absolute tolerance per identity for the group-like and primitive tests.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Coefficient of `u ⊗ v` in `Δ(a)`, where `Δ(Z_i) = Z_i ⊗ 1 + 1 ⊗ Z_i`.
///
/// Equals the sum of `a[w]` over the shuffles `w` of `u` and `v`.
pub fn coproduct_pair(a: &TruncSeries, u: &Word, v: &Word) -> Result<Complex64> {
    let degree = u.degree() + v.degree();
    if degree > a.cap() {
        return Err(Error::DegreeOverflow { degree, cap: a.cap() });
    }
    Ok(shuffle(u, v).iter().map(|w| a.coeff(w)).sum())
}

/// Group-like test through the shuffle identities
/// `sum_{w in u ш v} a[w] = a[u] a[v]` for all `|u| + |v| <= cap`, plus `a[∅] = 1`.
pub fn is_grouplike(a: &TruncSeries, tol: f64) -> bool {
    grouplike_defect(a) <= tol
}

/// Largest violation of the shuffle identities (and of `a[∅] = 1`).
pub fn grouplike_defect(a: &TruncSeries) -> f64 {
    let mut worst = (a.constant_term() - 1.0).norm();
    let (dim, cap) = (a.dim(), a.cap());
    for du in 1..cap {
        for dv in du..=(cap - du) {
            for u in words_of_degree(dim, du) {
                let au = a.coeff(&u);
                for v in words_of_degree(dim, dv) {
                    let lhs: Complex64 = shuffle(&u, &v).iter().map(|w| a.coeff(w)).sum();
                    worst = worst.max((lhs - au * a.coeff(&v)).norm());
                }
            }
        }
    }
    worst
}

/// Left-normed bracketing `[..[[Z_{i1}, Z_{i2}], Z_{i3}] .., Z_{im}]` expanded into words.
pub fn left_normed_bracket(w: &Word) -> Vec<(Word, f64)> {
    let letters = w.letters();
    let Some((&first, rest)) = letters.split_first() else {
        return Vec::new();
    };
    let mut terms: Vec<(Vec<u8>, f64)> = vec![(vec![first], 1.0)];
    for &l in rest {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (t, s) in &terms {
            let mut right = t.clone();
            right.push(l);
            next.push((right, *s));
            let mut left = Vec::with_capacity(t.len() + 1);
            left.push(l);
            left.extend_from_slice(t);
            next.push((left, -*s));
        }
        terms = next;
    }
    terms.into_iter().map(|(t, s)| (Word::from_raw(t), s)).collect()
}

/// Dynkin operator `δ` applied to the whole series (degree by degree).
pub fn dynkin(a: &TruncSeries) -> TruncSeries {
    let mut terms = Vec::new();
    for (w, c) in a.iter() {
        for (t, s) in left_normed_bracket(&w) {
            terms.push((t, c * s));
        }
    }
    TruncSeries::from_terms(a.dim(), a.cap(), terms).expect("bracketing preserves degree")
}

/// Friedrichs/Dynkin test: each homogeneous part `x_m` is a Lie element iff `δ(x_m) = m x_m`.
pub fn is_primitive(a: &TruncSeries, tol: f64) -> Result<bool> {
    Ok(primitive_defect(a)? <= tol)
}

pub fn primitive_defect(a: &TruncSeries) -> Result<f64> {
    let c0 = a.constant_term();
    if c0.norm() > 0.0 {
        return Err(Error::ConstantTerm {
            found: format!("{c0}"),
            expected: "0",
        });
    }
    let delta = dynkin(a);
    let mut worst: f64 = 0.0;
    for m in 1..=a.cap() {
        let lhs = delta.homogeneous_part(m);
        let rhs = a.homogeneous_part(m).scale(Complex64::new(m as f64, 0.0));
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

/// Image under `Z_i -> z_i` commuting: coefficient at multidegree `α` is the
/// sum of `a[w]` over words with letter counts `α`.
pub fn commutativize(a: &TruncSeries) -> BTreeMap<Vec<u32>, Complex64> {
    let mut out: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
    for (w, c) in a.iter() {
        *out.entry(w.multidegree(a.dim())).or_default() += c;
    }
    out
}

/// Truncation of the commutative exponential `exp((a, z))` as a multidegree table.
pub fn commutative_exp(a: &[f64], cap: usize) -> BTreeMap<Vec<u32>, Complex64> {
    let mut out = BTreeMap::new();
    let dim = a.len();
    let mut alpha = vec![0u32; dim];
    fn rec(pos: usize, left: u32, alpha: &mut Vec<u32>, a: &[f64], out: &mut BTreeMap<Vec<u32>, Complex64>) {
        if pos == a.len() {
            let mut v = 1.0;
            for (k, &e) in alpha.iter().enumerate() {
                v *= a[k].powi(e as i32) / (1..=e).map(f64::from).product::<f64>();
            }
            out.insert(alpha.clone(), Complex64::new(v, 0.0));
            return;
        }
        for e in 0..=left {
            alpha[pos] = e;
            rec(pos + 1, left - e, alpha, a, out);
        }
        alpha[pos] = 0;
    }
    if dim > 0 {
        rec(0, cap as u32, &mut alpha, a, &mut out);
    }
    out
}
