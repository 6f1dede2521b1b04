//! Evaluating signatures and truncated series on tuples of matrices.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_complex::Complex64;

use super::expm::mexp;
use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::ncseries::TruncSeries;
use crate::pathsig::{GroupWord, PlPath};

/// Default unitarity tolerance per unit of matrix order.
pub const UNITARY_TOL_PER_N: f64 = 1e-10;

/// `n` square matrices of a common order.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple {
    mats: Vec<CMatrix>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::InvalidArgument("empty matrix tuple".into()));
        };
        let n = first.order();
        if mats.iter().any(|m| !m.is_square() || m.order() != n) {
            return Err(Error::Shape("tuple entries must be square of one order".into()));
        }
        Ok(MatrixTuple { mats })
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    /// Common matrix order `N`.
    pub fn order(&self) -> usize {
        self.mats[0].order()
    }

    pub fn get(&self, i: usize) -> &CMatrix {
        &self.mats[i]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.mats.iter().all(|m| m.is_hermitian(tol))
    }

    /// Unitarity within `UNITARY_TOL_PER_N * N`.
    pub fn is_unitary(&self) -> bool {
        let tol = UNITARY_TOL_PER_N * self.order() as f64;
        self.mats.iter().all(|m| m.is_unitary(tol))
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim > self.len() {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: self.len(),
            });
        }
        Ok(())
    }
}

/// Exact holonomy of a piecewise-linear path on a matrix tuple: the ordered
/// product over segments of `exp(scale * sum_i a_i Z_i)`, first segment leftmost.
pub fn eval_exact_path(p: &PlPath, t: &MatrixTuple, scale: Complex64) -> Result<CMatrix> {
    if p.dim() != t.len() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: t.len(),
        });
    }
    let n = t.order();
    let mut acc = CMatrix::identity(n);
    for inc in p.increments() {
        let mut gen = CMatrix::zeros(n, n);
        for (a, z) in inc.iter().zip(t.matrices()) {
            gen = &gen + &z.scale(scale * a);
        }
        acc = &acc * &mexp(&gen)?;
    }
    Ok(acc)
}

/// Exact value of the word signature: `prod_letters exp(±scale * Z_i)`.
pub fn eval_exact_word(w: &GroupWord, t: &MatrixTuple, scale: Complex64) -> Result<CMatrix> {
    t.check_dim(w.max_index().into())?;
    let n = t.order();
    let mut cache: BTreeMap<(u8, bool), CMatrix> = BTreeMap::new();
    let mut acc = CMatrix::identity(n);
    for l in w.letters() {
        let key = (l.index, l.inverse);
        let factor = match cache.entry(key) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(mexp(&t.get(usize::from(l.index) - 1).scale(scale * l.sign()))?),
        };
        acc = &acc * &*factor;
    }
    Ok(acc)
}

/// Laurent monomial `X^γ` on unitary matrices (inverses via the adjoint).
pub fn laurent_monomial(w: &GroupWord, x: &MatrixTuple) -> Result<CMatrix> {
    x.check_dim(w.max_index().into())?;
    let adj: Vec<CMatrix> = x.matrices().iter().map(|m| m.adjoint()).collect();
    let mut acc = CMatrix::identity(x.order());
    for l in w.letters() {
        let i = usize::from(l.index) - 1;
        acc = &acc * if l.inverse { &adj[i] } else { x.get(i) };
    }
    Ok(acc)
}

/// `sum_w s[w] (scale Z)_w` over the stored words of `s`, evaluated by
/// Horner's rule on the word trie: `v(u) = s[u] I + sum_i (scale Z_i) v(u i)`.
pub fn eval_trunc(s: &TruncSeries, t: &MatrixTuple, scale: Complex64) -> Result<CMatrix> {
    if s.dim() != t.len() {
        return Err(Error::DimensionMismatch {
            left: s.dim(),
            right: t.len(),
        });
    }
    let scaled: Vec<CMatrix> = t.matrices().iter().map(|m| m.scale(scale)).collect();
    let terms: Vec<(Vec<u8>, Complex64)> = s
        .iter()
        .filter(|(_, c)| *c != Complex64::default())
        .map(|(w, c)| (w.letters().to_vec(), c))
        .collect();
    // Words sorted lexicographically so each prefix owns a contiguous range.
    let mut sorted = terms;
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(horner(&sorted, 0, &scaled, t.order()))
}

fn horner(terms: &[(Vec<u8>, Complex64)], depth: usize, z: &[CMatrix], n: usize) -> CMatrix {
    let mut acc = CMatrix::zeros(n, n);
    let mut rest = terms;
    if let Some((w, c)) = rest.first() {
        if w.len() == depth {
            acc = CMatrix::identity(n).scale(*c);
            rest = &rest[1..];
        }
    }
    while let Some((w, _)) = rest.first() {
        let letter = w[depth];
        let end = rest.iter().position(|(u, _)| u[depth] != letter).unwrap_or(rest.len());
        let child = horner(&rest[..end], depth + 1, z, n);
        acc = &acc + &(&z[usize::from(letter) - 1] * &child);
        rest = &rest[end..];
    }
    acc
}

/// Largest order for [`amitsur_levitsky`] (it sums `(2N)!` products).
pub const MAX_AL_ORDER: usize = 3;

/// Standard polynomial `sum_{σ ∈ S_{2N}} sgn(σ) X_{σ(1)} ... X_{σ(2N)}` on
/// `2N` matrices of order `N`; the Amitsur–Levitsky theorem says it vanishes.
pub fn amitsur_levitsky(mats: &[CMatrix]) -> Result<CMatrix> {
    let Some(first) = mats.first() else {
        return Err(Error::InvalidArgument("no matrices".into()));
    };
    let n = first.order();
    if n > MAX_AL_ORDER {
        return Err(Error::Guard(format!(
            "standard polynomial limited to N <= {MAX_AL_ORDER}"
        )));
    }
    if mats.len() != 2 * n || mats.iter().any(|m| !m.is_square() || m.order() != n) {
        return Err(Error::Shape(format!("need exactly {} matrices of order {n}", 2 * n)));
    }
    // Heap's algorithm; every step is one transposition, flipping the sign.
    let k = mats.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut counters = vec![0usize; k];
    let mut sign = 1.0;
    let product = |perm: &[usize]| {
        perm.iter()
            .skip(1)
            .fold(mats[perm[0]].clone(), |acc, &i| &acc * &mats[i])
    };
    let mut total = product(&perm);
    let mut i = 0;
    while i < k {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            sign = -sign;
            total = &total + &product(&perm).scale(Complex64::new(sign, 0.0));
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}
