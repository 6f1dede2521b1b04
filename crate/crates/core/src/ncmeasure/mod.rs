//! Noncommutative measures as moment functionals on words: free products,
//! Haar and delta functionals, explicit tables, and convolution.
//!
//! A free product is built from single-variable components. Its value on a
//! word is computed from the block decomposition `x_{c_1}^{k_1} ... x_{c_m}^{k_m}`
//! (adjacent components distinct) by expanding
//! `prod_j (b_j - μ_j)`, whose value vanishes, into values on shorter block
//! sequences.

mod ops;
mod parse;

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ncseries::{TruncSeries, Word};
use crate::pathsig::GroupWord;

pub use ops::{convolve, deconcatenation, dual_ft, dual_ft_series, dual_ft_word, pair, shuffle_eval};

/// Default evaluation degree for experiments.
pub const DEFAULT_DEGREE_CAP: usize = 8;
/// Longest word (or block sequence) the evaluators accept.
pub const MAX_EVAL_DEGREE: usize = 16;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A normalized functional on polynomials in one variable, given by its moments.
#[derive(Clone, Debug, PartialEq)]
pub enum Component {
    /// Standard Gaussian: `(k-1)!!` for even `k`, 0 for odd.
    Gauss,
    /// Semicircle of variance 1: Catalan numbers at even degrees.
    Semicircle,
    /// Haar measure on the circle: `τ(x^k) = [k = 0]`, `k ∈ ℤ`.
    HaarCircle,
    /// Point mass: `τ(x^k) = a^k`.
    Delta(Complex64),
    /// Explicit moments `m_1, ..., m_D`; `m_0 = 1`.
    Moments(Vec<Complex64>),
}

fn double_factorial_odd(k: u32) -> f64 {
    // (k-1)!! for even k.
    (1..k).step_by(2).map(f64::from).product()
}

fn catalan(m: u32) -> f64 {
    (0..m).fold(1.0, |c, j| c * 2.0 * f64::from(2 * j + 1) / f64::from(j + 2))
}

/// Explicit Catalan moment table up to `max_degree`.
pub fn semicircle_table(max_degree: usize) -> Component {
    Component::Moments(
        (1..=max_degree as i32)
            .map(|k| Component::Semicircle.moment(k).expect("k >= 0"))
            .collect(),
    )
}

impl Component {
    pub fn moment(&self, k: i32) -> Result<Complex64> {
        if k == 0 {
            return Ok(ONE);
        }
        let negative = || Error::InvalidArgument(format!("negative power {k} for a polynomial moment rule"));
        match self {
            Component::Gauss => {
                let k = u32::try_from(k).map_err(|_| negative())?;
                Ok(Complex64::new(
                    if k % 2 == 0 { double_factorial_odd(k) } else { 0.0 },
                    0.0,
                ))
            }
            Component::Semicircle => {
                let k = u32::try_from(k).map_err(|_| negative())?;
                Ok(Complex64::new(if k % 2 == 0 { catalan(k / 2) } else { 0.0 }, 0.0))
            }
            Component::HaarCircle => Ok(ZERO),
            Component::Delta(a) => {
                if k < 0 && *a == ZERO {
                    return Err(Error::InvalidArgument("negative power of a zero point mass".into()));
                }
                Ok(a.powi(k))
            }
            Component::Moments(m) => {
                let k = usize::try_from(k).map_err(|_| negative())?;
                m.get(k - 1).copied().ok_or(Error::MomentUnavailable {
                    degree: k,
                    max: m.len(),
                })
            }
        }
    }

    fn max_degree(&self) -> Option<usize> {
        match self {
            Component::Moments(m) => Some(m.len()),
            _ => None,
        }
    }

    fn laurent(&self) -> bool {
        matches!(self, Component::HaarCircle | Component::Delta(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    /// Free product of single-variable components; variable `i` is component `i`.
    Free(Vec<Component>),
    /// Constant term of a Laurent polynomial in `n` free unitaries.
    Haar(usize),
    /// Evaluation at the commuting point `(a_1, ..., a_n)`.
    Delta(Vec<Complex64>),
    /// Explicit word table; words up to `max_degree` not listed are 0.
    Table {
        dim: usize,
        max_degree: usize,
        entries: BTreeMap<Word, Complex64>,
    },
    /// `(τ * σ)(w) = Σ_S τ(w_S) σ(w_{S^c})`.
    Convolution(Box<MomentFunctional>, Box<MomentFunctional>),
    /// Coefficient extractor `δ^{(J)}`.
    DeltaJ(Word),
}

/// A linear functional on noncommutative (Laurent) polynomials, evaluated
/// word by word. Free-product values are memoized.
#[derive(Debug)]
pub struct MomentFunctional {
    kind: Kind,
    memo: RwLock<HashMap<Vec<(u8, i32)>, Complex64>>,
}

impl Clone for MomentFunctional {
    fn clone(&self) -> Self {
        MomentFunctional::from_kind(self.kind.clone())
    }
}

impl PartialEq for MomentFunctional {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

type Blocks = Vec<(u8, i32)>;

/// Run-length blocks of a signed letter sequence, merged with a stack so
/// that cancelled blocks let their neighbours join.
fn blocks_of(letters: impl IntoIterator<Item = (u8, i32)>) -> Blocks {
    let mut out: Blocks = Vec::new();
    for (c, k) in letters {
        if k == 0 {
            continue;
        }
        match out.last_mut() {
            Some((lc, lk)) if *lc == c => {
                *lk += k;
                if *lk == 0 {
                    out.pop();
                }
            }
            _ => out.push((c, k)),
        }
    }
    out
}

impl MomentFunctional {
    pub fn from_kind(kind: Kind) -> Self {
        MomentFunctional {
            kind,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn free_product(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("free product of no components".into()));
        }
        if components.len() > usize::from(u8::MAX) {
            return Err(Error::Guard("too many free components".into()));
        }
        Ok(MomentFunctional::from_kind(Kind::Free(components)))
    }

    /// Free product of `n` classical standard Gaussians.
    pub fn free_gaussian(n: usize) -> Result<Self> {
        MomentFunctional::free_product(vec![Component::Gauss; n])
    }

    /// Free product of `n` semicircles, with the Catalan moments supplied as
    /// explicit tables up to `max_degree`.
    pub fn free_semicircle(n: usize, max_degree: usize) -> Result<Self> {
        MomentFunctional::free_product(vec![semicircle_table(max_degree); n])
    }

    pub fn haar_free_product(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one generator".into()));
        }
        Ok(MomentFunctional::from_kind(Kind::Haar(n)))
    }

    pub fn delta_free_product(a: &[Complex64]) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("delta functional needs a point".into()));
        }
        if a.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite point".into()));
        }
        Ok(MomentFunctional::from_kind(Kind::Delta(a.to_vec())))
    }

    pub fn delta_j(j: Word) -> Self {
        MomentFunctional::from_kind(Kind::DeltaJ(j))
    }

    pub fn table(dim: usize, max_degree: usize, entries: BTreeMap<Word, Complex64>) -> Result<Self> {
        for (w, c) in &entries {
            if w.degree() > max_degree {
                return Err(Error::DegreeOverflow {
                    degree: w.degree(),
                    cap: max_degree,
                });
            }
            if usize::from(w.max_letter()) > dim {
                return Err(Error::LetterOutOfRange {
                    letter: w.max_letter().into(),
                    dim,
                });
            }
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite entry at {w}")));
            }
        }
        Ok(MomentFunctional::from_kind(Kind::Table {
            dim,
            max_degree,
            entries,
        }))
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    /// Number of variables.
    pub fn arity(&self) -> usize {
        match &self.kind {
            Kind::Free(c) => c.len(),
            Kind::Haar(n) => *n,
            Kind::Delta(a) => a.len(),
            Kind::Table { dim, .. } => *dim,
            Kind::Convolution(a, b) => a.arity().max(b.arity()),
            Kind::DeltaJ(j) => j.max_letter().into(),
        }
    }

    /// Largest degree for which values are available, if bounded.
    pub fn max_degree(&self) -> Option<usize> {
        match &self.kind {
            Kind::Free(c) => c.iter().filter_map(Component::max_degree).min(),
            Kind::Table { max_degree, .. } => Some(*max_degree),
            Kind::Convolution(a, b) => match (a.max_degree(), b.max_degree()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            },
            _ => None,
        }
    }

    /// Whether inverse letters are meaningful.
    pub fn is_laurent(&self) -> bool {
        match &self.kind {
            Kind::Haar(_) | Kind::Delta(_) => true,
            Kind::Free(c) => c.iter().all(Component::laurent),
            _ => false,
        }
    }

    /// `τ(1) = 1`.
    pub fn is_normalized(&self) -> bool {
        self.eval(&Word::empty()).is_ok_and(|v| (v - ONE).norm() == 0.0)
    }

    fn check_letters(&self, max_letter: u8) -> Result<()> {
        let dim = self.arity();
        if usize::from(max_letter) > dim && !matches!(self.kind, Kind::DeltaJ(_)) {
            return Err(Error::LetterOutOfRange {
                letter: max_letter.into(),
                dim,
            });
        }
        Ok(())
    }

    /// Value on a word in the (positive) letters.
    pub fn eval(&self, w: &Word) -> Result<Complex64> {
        if w.degree() > MAX_EVAL_DEGREE {
            return Err(Error::Guard(format!("evaluation limited to degree {MAX_EVAL_DEGREE}")));
        }
        self.check_letters(w.max_letter())?;
        match &self.kind {
            Kind::Free(comps) => self.free_eval(comps, &blocks_of(w.letters().iter().map(|&l| (l, 1)))),
            Kind::Haar(_) => Ok(if w.is_empty() { ONE } else { ZERO }),
            Kind::Delta(a) => Ok(w.letters().iter().map(|&l| a[usize::from(l) - 1]).product()),
            Kind::Table {
                max_degree, entries, ..
            } => {
                if w.degree() > *max_degree {
                    return Err(Error::MomentUnavailable {
                        degree: w.degree(),
                        max: *max_degree,
                    });
                }
                Ok(entries.get(w).copied().unwrap_or(ZERO))
            }
            Kind::Convolution(a, b) => {
                let letters = w.letters();
                let k = letters.len();
                let mut total = ZERO;
                for mask in 0u32..(1 << k) {
                    let (mut left, mut right) = (Vec::new(), Vec::new());
                    for (j, &l) in letters.iter().enumerate() {
                        if mask >> j & 1 == 1 {
                            left.push(l);
                        } else {
                            right.push(l);
                        }
                    }
                    let x = a.eval(&Word::new(left))?;
                    if x != ZERO {
                        total += x * b.eval(&Word::new(right))?;
                    }
                }
                Ok(total)
            }
            Kind::DeltaJ(j) => Ok(if w == j { ONE } else { ZERO }),
        }
    }

    /// Value on a Laurent monomial `X^γ`.
    pub fn eval_group(&self, g: &GroupWord) -> Result<Complex64> {
        if g.len() > MAX_EVAL_DEGREE {
            return Err(Error::Guard(format!("evaluation limited to length {MAX_EVAL_DEGREE}")));
        }
        self.check_letters(g.max_index())?;
        let signed = g.letters().iter().map(|l| (l.index, if l.inverse { -1 } else { 1 }));
        match &self.kind {
            Kind::Haar(_) => Ok(if g.is_identity() { ONE } else { ZERO }),
            Kind::Free(comps) => self.free_eval(comps, &blocks_of(signed)),
            Kind::Delta(a) => {
                let mut v = ONE;
                for (l, k) in signed {
                    let x = a[usize::from(l) - 1];
                    if k < 0 && x == ZERO {
                        return Err(Error::InvalidArgument("inverse of a zero coordinate".into()));
                    }
                    v *= x.powi(k);
                }
                Ok(v)
            }
            _ if g.letters().iter().all(|l| !l.inverse) => {
                self.eval(&Word::new(g.letters().iter().map(|l| l.index).collect::<Vec<_>>()))
            }
            _ => Err(Error::InvalidArgument(
                "functional is not defined on inverse letters".into(),
            )),
        }
    }

    /// `Σ_w f[w] τ(w)`.
    pub fn eval_poly(&self, f: &TruncSeries) -> Result<Complex64> {
        let mut total = ZERO;
        for (w, c) in f.iter() {
            if c != ZERO {
                total += c * self.eval(&w)?;
            }
        }
        Ok(total)
    }

    fn free_eval(&self, comps: &[Component], blocks: &[(u8, i32)]) -> Result<Complex64> {
        match blocks {
            [] => return Ok(ONE),
            [(c, k)] => return comps[usize::from(*c) - 1].moment(*k),
            _ => {}
        }
        if blocks.len() > MAX_EVAL_DEGREE {
            return Err(Error::Guard(format!(
                "free product limited to {MAX_EVAL_DEGREE} blocks"
            )));
        }
        if let Some(v) = self.memo.read().expect("memo lock").get(blocks) {
            return Ok(*v);
        }
        let m = blocks.len();
        let mus: Vec<Complex64> = blocks
            .iter()
            .map(|&(c, k)| comps[usize::from(c) - 1].moment(k))
            .collect::<Result<_>>()?;
        let full = (1u32 << m) - 1;
        let mut total = ZERO;
        for mask in 0..full {
            // Coefficient prod_{j not in S} (-μ_j).
            let mut coeff = ONE;
            for (j, mu) in mus.iter().enumerate() {
                if mask >> j & 1 == 0 {
                    coeff *= -mu;
                }
            }
            if coeff == ZERO {
                continue;
            }
            let sub = blocks_of((0..m).filter(|j| mask >> j & 1 == 1).map(|j| blocks[j]));
            total += coeff * self.free_eval(comps, &sub)?;
        }
        let value = -total;
        self.memo.write().expect("memo lock").insert(blocks.to_vec(), value);
        Ok(value)
    }
}

#[cfg(test)]
mod tests;
