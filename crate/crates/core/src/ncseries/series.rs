use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::word::Word;
use crate::error::{Error, Result};

/// Default truncation degree.
pub const DEFAULT_CAP: usize = 5;

/// Largest number of stored words (all degrees) a series may address;
/// this is the word count of `n = 4`, `cap = 8`.
pub const MAX_WORDS: u64 = 87_381;

/// Hard ceiling on the degree cap regardless of alphabet size.
pub const MAX_CAP: usize = 16;

const DEGREE_SHIFT: u32 = 56;

/// Number of words of degree `<= cap` over `dim` letters.
pub fn word_count(dim: usize, cap: usize) -> u64 {
    (0..=cap as u32).fold(0u64, |acc, k| acc.saturating_add((dim as u64).saturating_pow(k)))
}

pub(crate) fn check_shape(dim: usize, cap: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::Guard("alphabet must have at least one letter".into()));
    }
    if cap > MAX_CAP || word_count(dim, cap) > MAX_WORDS {
        return Err(Error::Guard(format!(
            "dim {dim} with cap {cap} addresses {} words (limit {MAX_WORDS}, cap <= {MAX_CAP})",
            word_count(dim, cap)
        )));
    }
    Ok(())
}

/// Noncommutative power series in `Z_1..Z_dim`, truncated above degree `cap`.
///
/// Coefficients are stored sparsely under a packed key `(degree, lex index)`,
/// so iteration runs degree by degree and lexicographically within a degree.
/// Absent words have coefficient zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries {
    dim: usize,
    cap: usize,
    coeffs: BTreeMap<u64, Complex64>,
}

impl TruncSeries {
    pub fn zero(dim: usize, cap: usize) -> Result<Self> {
        check_shape(dim, cap)?;
        Ok(TruncSeries {
            dim,
            cap,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn one(dim: usize, cap: usize) -> Result<Self> {
        let mut s = Self::zero(dim, cap)?;
        s.coeffs.insert(0, Complex64::new(1.0, 0.0));
        Ok(s)
    }

    /// `c * w` as a series.
    pub fn monomial(dim: usize, cap: usize, word: &Word, c: Complex64) -> Result<Self> {
        Self::from_terms(dim, cap, [(word.clone(), c)])
    }

    /// The generator `Z_i` (1-based).
    pub fn generator(dim: usize, cap: usize, i: u8) -> Result<Self> {
        Self::monomial(dim, cap, &Word::letter(i), Complex64::new(1.0, 0.0))
    }

    /// `sum_i a_i Z_i`.
    pub fn linear(cap: usize, a: &[Complex64]) -> Result<Self> {
        let mut s = Self::zero(a.len(), cap)?;
        if cap >= 1 {
            for (i, &c) in a.iter().enumerate() {
                if c != Complex64::new(0.0, 0.0) {
                    s.coeffs.insert(pack(1, i as u64), c);
                }
            }
        }
        Ok(s)
    }

    /// Builds a series from `(word, coefficient)` pairs; repeated words add up.
    /// Words above the cap are an error, not silently dropped.
    pub fn from_terms(dim: usize, cap: usize, terms: impl IntoIterator<Item = (Word, Complex64)>) -> Result<Self> {
        let mut s = Self::zero(dim, cap)?;
        for (w, c) in terms {
            s.check_word(&w)?;
            if w.degree() > cap {
                return Err(Error::DegreeOverflow {
                    degree: w.degree(),
                    cap,
                });
            }
            *s.coeffs.entry(s.key(&w)).or_default() += c;
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `w`; zero for absent words and for words above the cap.
    pub fn coeff(&self, w: &Word) -> Complex64 {
        if w.degree() > self.cap || usize::from(w.max_letter()) > self.dim {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get(&self.key(w)).copied().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs.get(&0).copied().unwrap_or_default()
    }

    /// Stored `(word, coefficient)` pairs in degree-lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Word, Complex64)> + '_ {
        self.coeffs.iter().map(move |(&k, &c)| (unpack(k, self.dim), c))
    }

    /// Stored terms of exactly `degree`.
    pub fn iter_degree(&self, degree: usize) -> impl Iterator<Item = (Word, Complex64)> + '_ {
        let lo = pack(degree as u64, 0);
        let hi = pack(degree as u64 + 1, 0);
        self.coeffs.range(lo..hi).map(move |(&k, &c)| (unpack(k, self.dim), c))
    }

    /// Homogeneous component of the given degree.
    pub fn homogeneous_part(&self, degree: usize) -> TruncSeries {
        let lo = pack(degree as u64, 0);
        let hi = pack(degree as u64 + 1, 0);
        TruncSeries {
            dim: self.dim,
            cap: self.cap,
            coeffs: self.coeffs.range(lo..hi).map(|(&k, &c)| (k, c)).collect(),
        }
    }

    /// Same coefficients viewed at a lower cap.
    pub fn truncate(&self, cap: usize) -> TruncSeries {
        let cap = cap.min(self.cap);
        let hi = pack(cap as u64 + 1, 0);
        TruncSeries {
            dim: self.dim,
            cap,
            coeffs: self.coeffs.range(..hi).map(|(&k, &c)| (k, c)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> TruncSeries {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    /// Substitutes `Z_i -> c Z_i`, i.e. multiplies each degree-k coefficient by `c^k`.
    pub fn scale_variables(&self, c: Complex64) -> TruncSeries {
        let mut out = self.clone();
        for (&k, v) in out.coeffs.iter_mut() {
            *v *= c.powu((k >> DEGREE_SHIFT) as u32);
        }
        out
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &TruncSeries) -> f64 {
        let mut m: f64 = 0.0;
        for (k, a) in &self.coeffs {
            let b = other.coeffs.get(k).copied().unwrap_or_default();
            m = m.max((a - b).norm());
        }
        for (k, b) in &other.coeffs {
            if !self.coeffs.contains_key(k) {
                m = m.max(b.norm());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    fn check_compatible(&self, other: &TruncSeries) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.cap != other.cap {
            return Err(Error::CapMismatch {
                left: self.cap,
                right: other.cap,
            });
        }
        Ok(())
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|&&l| usize::from(l) > self.dim) {
            Some(&l) => Err(Error::LetterOutOfRange {
                letter: l.into(),
                dim: self.dim,
            }),
            None => Ok(()),
        }
    }

    fn key(&self, w: &Word) -> u64 {
        pack(w.degree() as u64, w.lex_index(self.dim))
    }

    pub fn checked_add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&k, &c) in &other.coeffs {
            *out.coeffs.entry(k).or_default() += c;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.checked_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Truncated product: the coefficient of `w` is the sum over splittings
    /// `w = uv` of `a[u] * b[v]`, for `|w| <= cap`.
    pub fn checked_mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_compatible(other)?;
        let dim = self.dim as u64;
        let mut out: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (&ka, &ca) in &self.coeffs {
            let da = ka >> DEGREE_SHIFT;
            let ia = ka & index_mask();
            let room = self.cap as u64 - da;
            let hi = pack(room + 1, 0);
            for (&kb, &cb) in other.coeffs.range(..hi) {
                let db = kb >> DEGREE_SHIFT;
                let ib = kb & index_mask();
                let key = pack(da + db, ia * dim.pow(db as u32) + ib);
                *out.entry(key).or_default() += ca * cb;
            }
        }
        Ok(TruncSeries {
            dim: self.dim,
            cap: self.cap,
            coeffs: out,
        })
    }

    /// `exp(a) = sum_k a^k / k!`, exact up to the cap. Requires zero constant term.
    pub fn exp(&self) -> Result<TruncSeries> {
        let c0 = self.constant_term();
        if c0.norm() > 1e-12 {
            return Err(Error::ConstantTerm {
                found: format!("{c0}"),
                expected: "0",
            });
        }
        let x = self.without_constant();
        // Horner: 1 + x(1 + x/2 (1 + x/3 (...)))
        let one = TruncSeries::one(self.dim, self.cap)?;
        let mut acc = one.clone();
        for k in (1..=self.cap).rev() {
            acc = &one + &(&x * &acc).scale(Complex64::new(1.0 / k as f64, 0.0));
        }
        Ok(acc)
    }

    /// `log(a) = sum_k (-1)^{k+1} (a - 1)^k / k`. Requires constant term 1.
    pub fn log(&self) -> Result<TruncSeries> {
        let c0 = self.constant_term();
        if (c0 - 1.0).norm() > 1e-12 {
            return Err(Error::ConstantTerm {
                found: format!("{c0}"),
                expected: "1",
            });
        }
        let x = self.without_constant();
        // x (1 - x (1/2 - x (1/3 - ...)))
        let one = TruncSeries::one(self.dim, self.cap)?;
        let mut acc = TruncSeries::zero(self.dim, self.cap)?;
        for k in (1..=self.cap).rev() {
            let term = one.scale(Complex64::new(1.0 / k as f64, 0.0));
            acc = &term - &(&x * &acc);
        }
        Ok(&x * &acc)
    }

    /// Multiplicative inverse via the geometric series. Requires an invertible constant term.
    pub fn inv(&self) -> Result<TruncSeries> {
        let c0 = self.constant_term();
        if c0.norm() == 0.0 {
            return Err(Error::ConstantTerm {
                found: "0".into(),
                expected: "nonzero",
            });
        }
        let inv_c0 = c0.inv();
        // a = c0 (1 + x)  =>  a^{-1} = c0^{-1} sum_k (-x)^k
        let neg_x = self.scale(-inv_c0).without_constant();
        let one = TruncSeries::one(self.dim, self.cap)?;
        let mut acc = one.clone();
        for _ in 0..self.cap {
            acc = &one + &(&neg_x * &acc);
        }
        Ok(acc.scale(inv_c0))
    }

    /// Substitution `Z_i -> -Z_i`.
    pub fn negate_variables(&self) -> TruncSeries {
        self.scale_variables(Complex64::new(-1.0, 0.0))
    }

    /// Antipode `Z_{i_1}..Z_{i_k} -> (-1)^k Z_{i_k}..Z_{i_1}`: the inverse of a
    /// group-like element. Plain substitution `Z -> -Z` agrees with it only
    /// when every coefficient is reversal-symmetric, e.g. `exp` of a linear term.
    pub fn antipode(&self) -> TruncSeries {
        TruncSeries::from_terms(
            self.dim,
            self.cap,
            self.iter().map(|(w, c)| {
                let sign = if w.degree() % 2 == 0 { 1.0 } else { -1.0 };
                (w.reversed(), c * sign)
            }),
        )
        .expect("same shape")
    }

    pub(crate) fn without_constant(&self) -> TruncSeries {
        let mut out = self.clone();
        out.coeffs.remove(&0);
        out
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn prune(&self, tol: f64) -> TruncSeries {
        let mut out = self.clone();
        out.coeffs.retain(|_, c| c.norm() > tol);
        out
    }

    pub(crate) fn insert_raw(&mut self, degree: usize, lex_index: u64, c: Complex64) {
        self.coeffs.insert(pack(degree as u64, lex_index), c);
    }
}

fn pack(degree: u64, index: u64) -> u64 {
    (degree << DEGREE_SHIFT) | index
}

fn index_mask() -> u64 {
    (1u64 << DEGREE_SHIFT) - 1
}

fn unpack(key: u64, dim: usize) -> Word {
    Word::from_lex_index(key & index_mask(), (key >> DEGREE_SHIFT) as usize, dim)
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for &TruncSeries {
            type Output = TruncSeries;

            /// # Panics
            /// On alphabet or cap mismatch; use the `checked_*` form to get an error instead.
            fn $m(self, rhs: &TruncSeries) -> TruncSeries {
                self.$checked(rhs).expect("incompatible truncated series")
            }
        }

        impl $tr for TruncSeries {
            type Output = TruncSeries;

            fn $m(self, rhs: TruncSeries) -> TruncSeries {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &TruncSeries {
    type Output = TruncSeries;

    fn neg(self) -> TruncSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// The noncommutative Gaussian `exp(-1/2 sum_i Z_i^2)` truncated at `cap`.
pub fn gaussian_series(dim: usize, cap: usize) -> Result<TruncSeries> {
    gaussian_like(dim, cap, -0.5)
}

/// `exp(c * sum_i Z_i^2)`; `c = 1/2` is the expected Stratonovich signature
/// of Brownian motion at time 1.
pub fn gaussian_like(dim: usize, cap: usize, c: f64) -> Result<TruncSeries> {
    let squares = (1..=dim as u8).map(|i| (Word::new([i, i]), Complex64::new(c, 0.0)));
    let quad = if cap >= 2 {
        TruncSeries::from_terms(dim, cap, squares)?
    } else {
        TruncSeries::zero(dim, cap)?
    };
    quad.exp()
}
