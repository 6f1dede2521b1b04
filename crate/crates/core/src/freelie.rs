//! Free Lie algebra in the Lyndon basis: brackets and Baker–Campbell–Hausdorff.
//!
//! Basis elements are Lyndon words `w` with the standard bracketing
//! `P_w = [P_u, P_v]`, where `v` is the longest proper Lyndon suffix of `w`.
//! The expansion of `P_w` into words is `w` plus lexicographically larger
//! words of the same degree, which is what makes rewriting a Lie polynomial
//! into Lyndon coordinates a triangular solve.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ncseries::{TruncSeries, Word};

/// Tolerance for the triangular rewrite into Lyndon coordinates.
pub const REWRITE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub word: Word,
    /// Bracketing written with 1-based letters, e.g. `[1,[1,2]]`.
    pub bracketing: String,
    /// Expansion of the bracket polynomial into words.
    pub expansion: Vec<(Word, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LyndonBasis {
    pub dim: usize,
    pub max_degree: usize,
    /// Ordered by degree, then lexicographically.
    pub elements: Vec<BasisElement>,
}

impl LyndonBasis {
    pub fn of_degree(&self, d: usize) -> impl Iterator<Item = &BasisElement> {
        self.elements.iter().filter(move |e| e.word.degree() == d)
    }

    fn index_of(&self, w: &Word) -> Option<usize> {
        self.elements.binary_search_by(|e| e.word.cmp(w)).ok()
    }
}

type BasisCache = RwLock<HashMap<(usize, usize), Arc<LyndonBasis>>>;

fn cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Lyndon basis of the free Lie algebra on `n` letters up to degree `d`.
pub fn lyndon_basis(n: usize, d: usize) -> Result<Arc<LyndonBasis>> {
    if n == 0 || d == 0 || n > u8::MAX as usize {
        return Err(Error::InvalidArgument(format!(
            "lyndon basis needs n >= 1 and d >= 1 (got n={n}, d={d})"
        )));
    }
    if let Some(b) = cache().read().expect("basis cache poisoned").get(&(n, d)) {
        return Ok(b.clone());
    }
    let built = Arc::new(build_basis(n, d));
    let mut guard = cache().write().expect("basis cache poisoned");
    Ok(guard.entry((n, d)).or_insert(built).clone())
}

fn build_basis(n: usize, d: usize) -> LyndonBasis {
    let mut words: Vec<Word> = lyndon_words(n, d);
    words.sort();
    let mut expansions: HashMap<Word, Vec<(Word, f64)>> = HashMap::new();
    let mut brackets: HashMap<Word, String> = HashMap::new();
    let mut elements = Vec::with_capacity(words.len());
    for w in words {
        let (exp, br) = if w.degree() == 1 {
            (vec![(w.clone(), 1.0)], w.to_string())
        } else {
            let (u, v) = standard_factorization(&w);
            let (pu, pv) = (&expansions[&u], &expansions[&v]);
            let mut acc: BTreeMap<Word, f64> = BTreeMap::new();
            for (a, ca) in pu {
                for (b, cb) in pv {
                    *acc.entry(a.concat(b)).or_default() += ca * cb;
                    *acc.entry(b.concat(a)).or_default() -= ca * cb;
                }
            }
            acc.retain(|_, c| *c != 0.0);
            (
                acc.into_iter().collect(),
                format!("[{},{}]", brackets[&u], brackets[&v]),
            )
        };
        expansions.insert(w.clone(), exp.clone());
        brackets.insert(w.clone(), br.clone());
        elements.push(BasisElement {
            word: w,
            bracketing: br,
            expansion: exp,
        });
    }
    LyndonBasis {
        dim: n,
        max_degree: d,
        elements,
    }
}

/// Lyndon words of length `1..=d` over `1..=n` (Duval's generation, lexicographic order).
pub fn lyndon_words(n: usize, d: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![1];
    loop {
        out.push(Word::new(w.clone()));
        let m = w.len();
        while w.len() < d {
            let next = w[w.len() % m];
            w.push(next);
        }
        while w.last().is_some_and(|&l| usize::from(l) == n) {
            w.pop();
        }
        match w.last_mut() {
            Some(l) => *l += 1,
            None => break,
        }
    }
    out
}

/// `w = uv` with `v` the longest proper suffix of `w` that is a Lyndon word.
pub fn standard_factorization(w: &Word) -> (Word, Word) {
    let k = (1..w.degree())
        .find(|&i| w.suffix_from(i).is_lyndon())
        .expect("words of degree >= 2 have a Lyndon suffix");
    (w.prefix(k), w.suffix_from(k))
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Witt's necklace count `(1/d) sum_{e | d} μ(e) n^{d/e}`: the dimension of
/// the degree-`d` component of the free Lie algebra on `n` generators.
pub fn witt_dimension(n: usize, d: usize) -> usize {
    let s: i64 = (1..=d)
        .filter(|e| d.is_multiple_of(*e))
        .map(|e| mobius(e) * (n as i64).pow((d / e) as u32))
        .sum();
    (s / d as i64) as usize
}

/// Element of the free nilpotent Lie algebra of step `cap`, in Lyndon coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElement {
    dim: usize,
    cap: usize,
    coords: BTreeMap<Word, Complex64>,
}

impl LieElement {
    pub fn zero(dim: usize, cap: usize) -> Result<Self> {
        TruncSeries::zero(dim, cap)?;
        Ok(LieElement {
            dim,
            cap,
            coords: BTreeMap::new(),
        })
    }

    /// `sum_k c_k P_{w_k}`; every key must be a Lyndon word of degree `<= cap`.
    pub fn from_coords(dim: usize, cap: usize, coords: impl IntoIterator<Item = (Word, Complex64)>) -> Result<Self> {
        let mut e = Self::zero(dim, cap)?;
        for (w, c) in coords {
            if !w.is_lyndon() || w.degree() > cap || usize::from(w.max_letter()) > dim {
                return Err(Error::InvalidArgument(format!(
                    "{w} is not a Lyndon word of degree <= {cap} over {dim} letters"
                )));
            }
            *e.coords.entry(w).or_default() += c;
        }
        Ok(e)
    }

    /// `sum_i a_i Z_i`.
    pub fn linear(cap: usize, a: &[Complex64]) -> Result<Self> {
        Self::from_coords(
            a.len(),
            cap,
            a.iter().enumerate().map(|(i, &c)| (Word::letter(i as u8 + 1), c)),
        )
    }

    pub fn generator(dim: usize, cap: usize, i: u8) -> Result<Self> {
        Self::from_coords(dim, cap, [(Word::letter(i), Complex64::new(1.0, 0.0))])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Coordinate on the basis element indexed by the Lyndon word `w`.
    pub fn coord(&self, w: &Word) -> Complex64 {
        self.coords.get(w).copied().unwrap_or_default()
    }

    pub fn coords(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.coords.iter()
    }

    pub fn scale(&self, c: Complex64) -> LieElement {
        let mut out = self.clone();
        out.coords.values_mut().for_each(|v| *v *= c);
        out
    }

    pub fn add(&self, other: &LieElement) -> Result<LieElement> {
        check_same(self, other)?;
        let mut out = self.clone();
        for (w, c) in &other.coords {
            *out.coords.entry(w.clone()).or_default() += c;
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Expansion into the truncated tensor algebra.
    pub fn to_series(&self) -> TruncSeries {
        let basis = lyndon_basis(self.dim, self.cap).expect("shape validated");
        let mut terms = Vec::new();
        for (w, &c) in &self.coords {
            let idx = basis.index_of(w).expect("keys are basis words");
            for (word, s) in &basis.elements[idx].expansion {
                terms.push((word.clone(), c * s));
            }
        }
        TruncSeries::from_terms(self.dim, self.cap, terms).expect("shape validated")
    }

    /// Rewrites a Lie polynomial into Lyndon coordinates by triangularity.
    ///
    /// Fails with [`Error::NotLie`] when the input is not a Lie element (at
    /// tolerance `tol`), or has a nonzero constant term.
    pub fn from_series(s: &TruncSeries, tol: f64) -> Result<LieElement> {
        if s.constant_term().norm() > tol {
            return Err(Error::NotLie {
                word: "e".into(),
                residual: s.constant_term().norm(),
            });
        }
        let (dim, cap) = (s.dim(), s.cap());
        let basis = lyndon_basis(dim, cap)?;
        let mut coords = BTreeMap::new();
        for degree in 1..=cap {
            let mut rest: BTreeMap<Word, Complex64> = s.iter_degree(degree).collect();
            while let Some((w, c)) = rest.pop_first() {
                if c.norm() <= tol {
                    continue;
                }
                let Some(idx) = basis.index_of(&w) else {
                    return Err(Error::NotLie {
                        word: w.to_string(),
                        residual: c.norm(),
                    });
                };
                for (word, sgn) in &basis.elements[idx].expansion[..] {
                    if *word != w {
                        *rest.entry(word.clone()).or_default() -= c * sgn;
                    }
                }
                coords.insert(w, c);
            }
        }
        Ok(LieElement { dim, cap, coords })
    }

    /// `[a, b] = ab - ba`, re-expressed in the Lyndon basis.
    pub fn bracket(&self, other: &LieElement) -> Result<LieElement> {
        check_same(self, other)?;
        let (a, b) = (self.to_series(), other.to_series());
        let comm = &(&a * &b) - &(&b * &a);
        LieElement::from_series(&comm, REWRITE_TOL)
    }
}

fn check_same(a: &LieElement, b: &LieElement) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    if a.cap != b.cap {
        return Err(Error::CapMismatch {
            left: a.cap,
            right: b.cap,
        });
    }
    Ok(())
}

/// Truncated Baker–Campbell–Hausdorff: `log(exp(a) exp(b))` in Lyndon coordinates.
pub fn bch(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    check_same(a, b)?;
    let prod = &a.to_series().exp()? * &b.to_series().exp()?;
    LieElement::from_series(&prod.log()?, REWRITE_TOL)
}
