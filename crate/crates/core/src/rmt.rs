//! Random matrices: Haar unitaries and GUE samples, Monte Carlo estimators of
//! normalized traces, and the fixed-`N` matrix Fourier coefficient.
//!
//! Every estimator draws sample `i` from [`mc::sample_rng`]`(seed, i)` and
//! reduces through [`mc::chunked`], so serial and parallel runs agree bitwise.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matfun::{
    eval_trunc, hermitian_function, laurent_monomial, principal_log_unitary, qr, CMatrix, MatrixTuple, MAX_EIG_ORDER,
};
use crate::mc::{self, ComplexStats, Exec};
use crate::ncseries::{TruncSeries, Word};
use crate::pathsig::GroupWord;

/// Upper bound on `N` for the Monte Carlo experiments.
pub const MAX_MATRIX_SIZE: usize = MAX_EIG_ORDER;

/// Angular distance from `-1` below which the principal log is refused.
pub const BRANCH_TOL: f64 = 1e-9;

/// Redraws allowed per sample when the principal log is ambiguous.
pub const MAX_REDRAWS: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimatorReport {
    pub value: Complex64,
    pub std_error: f64,
    pub samples: usize,
    pub matrix_size: usize,
    pub seed: u64,
}

impl EstimatorReport {
    fn from_stats(s: &ComplexStats, matrix_size: usize, seed: u64) -> Self {
        EstimatorReport {
            value: s.mean,
            std_error: s.std_error(),
            samples: s.count as usize,
            matrix_size,
            seed,
        }
    }

    /// `|value - target| <= k * std_error + slack`.
    pub fn within(&self, target: Complex64, k: f64, slack: f64) -> bool {
        (self.value - target).norm() <= k * self.std_error + slack
    }
}

/// Size and sample-count guards shared by every estimator.
pub fn check_size(n: usize, samples: usize) -> Result<()> {
    if n == 0 || n > MAX_MATRIX_SIZE {
        return Err(Error::Guard(format!("matrix size {n} outside 1..={MAX_MATRIX_SIZE}")));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample required".into()));
    }
    Ok(())
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Haar unitary from QR of a complex Ginibre matrix, with the columns of `Q`
/// rotated by the phases of `diag(R)` so the law is exactly Haar.
pub fn haar_from_rng<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let g = CMatrix::from_fn(n, n, |_, _| Complex64::new(s * normal(rng), s * normal(rng)));
    let (q, r) = qr(&g).expect("square input");
    let phases: Vec<Complex64> = (0..n)
        .map(|k| {
            let d = r.get(k, k);
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect();
    CMatrix::from_fn(n, n, |i, j| q.get(i, j) * phases[j])
}

/// GUE matrix with density proportional to `exp(-(N/2) tr Z^2)`: entry
/// variance `1/N`, so `(1/N) E tr Z^2 = 1`.
pub fn gue_from_rng<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let diag_sd = (1.0 / n as f64).sqrt();
    let off_sd = (0.5 / n as f64).sqrt();
    let mut z = CMatrix::zeros(n, n);
    for i in 0..n {
        z.set(i, i, Complex64::new(diag_sd * normal(rng), 0.0));
        for j in i + 1..n {
            let v = Complex64::new(off_sd * normal(rng), off_sd * normal(rng));
            z.set(i, j, v);
            z.set(j, i, v.conj());
        }
    }
    z
}

pub fn sample_haar(n: usize, seed: u64) -> Result<CMatrix> {
    check_size(n, 1)?;
    Ok(haar_from_rng(n, &mut mc::sample_rng(seed, 0)))
}

pub fn sample_gue(n: usize, seed: u64) -> Result<CMatrix> {
    check_size(n, 1)?;
    Ok(gue_from_rng(n, &mut mc::sample_rng(seed, 0)))
}

fn haar_tuple<R: Rng + ?Sized>(arity: usize, n: usize, rng: &mut R) -> MatrixTuple {
    MatrixTuple::new((0..arity).map(|_| haar_from_rng(n, rng)).collect()).expect("common order")
}

/// `(1/N) tr(A B)` without forming the product.
fn normalized_trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.order();
    let mut t = Complex64::default();
    for i in 0..n {
        for k in 0..n {
            t += a.get(i, k) * b.get(k, i);
        }
    }
    t / n as f64
}

/// Finite combination `sum_γ c_γ X^γ` of Laurent monomials.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaurentPoly {
    terms: Vec<(GroupWord, Complex64)>,
}

impl LaurentPoly {
    pub fn new(terms: Vec<(GroupWord, Complex64)>) -> Self {
        LaurentPoly { terms }
    }

    pub fn constant(c: Complex64) -> Self {
        LaurentPoly::new(vec![(GroupWord::identity(), c)])
    }

    pub fn terms(&self) -> &[(GroupWord, Complex64)] {
        &self.terms
    }

    /// Number of variables the polynomial mentions.
    pub fn arity(&self) -> usize {
        self.terms
            .iter()
            .map(|(w, _)| usize::from(w.max_index()))
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &MatrixTuple) -> Result<CMatrix> {
        let mut acc = CMatrix::zeros(x.order(), x.order());
        for (w, c) in &self.terms {
            acc = &acc + &laurent_monomial(w, x)?.scale(*c);
        }
        Ok(acc)
    }

    /// Parses `coeff : word` terms separated by `;`, where `coeff` is `re` or
    /// `re im` and `word` uses the group-word syntax (`1 -2`, `e`).
    pub fn parse(text: &str) -> Result<LaurentPoly> {
        let mut terms = Vec::new();
        for (k, part) in text.split(';').enumerate() {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (c, w) = part
                .split_once(':')
                .ok_or_else(|| Error::parse(k + 1, "expected `coeff : word`"))?;
            let nums: Vec<&str> = c.split_whitespace().collect();
            let num = |s: &str| -> Result<f64> {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse(k + 1, format!("bad coefficient `{s}`")))
            };
            let coeff = match nums.as_slice() {
                [re] => Complex64::new(num(re)?, 0.0),
                [re, im] => Complex64::new(num(re)?, num(im)?),
                _ => return Err(Error::parse(k + 1, "coefficient must be `re` or `re im`")),
            };
            let word = GroupWord::parse(w).map_err(|e| Error::parse(k + 1, e.to_string()))?;
            terms.push((word, coeff));
        }
        if terms.is_empty() {
            return Err(Error::parse(1, "empty Laurent polynomial"));
        }
        Ok(LaurentPoly::new(terms))
    }
}

/// Estimates `(1/N) tr E[f(X) X^{-γ}]` over independent Haar tuples.
pub fn haar_coefficient(
    f: &LaurentPoly,
    gamma: &GroupWord,
    n: usize,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<EstimatorReport> {
    Ok(haar_coefficients(f, std::slice::from_ref(gamma), n, samples, seed, exec)?.remove(0))
}

/// Several coefficients of the same `f` from one set of Haar tuples.
pub fn haar_coefficients(
    f: &LaurentPoly,
    gammas: &[GroupWord],
    n: usize,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<EstimatorReport>> {
    check_size(n, samples)?;
    let arity = gammas
        .iter()
        .map(|g| usize::from(g.max_index()))
        .chain([f.arity(), 1])
        .max()
        .unwrap_or(1);
    let inverses: Vec<GroupWord> = gammas.iter().map(GroupWord::inverse).collect();
    let stats = mc::chunked(
        samples,
        exec,
        vec![ComplexStats::default(); gammas.len()],
        |i| {
            let x = haar_tuple(arity, n, &mut mc::sample_rng(seed, i as u64));
            let fx = f.eval(&x).expect("arity checked");
            inverses
                .iter()
                .map(|g| normalized_trace_product(&fx, &laurent_monomial(g, &x).expect("arity checked")))
                .collect::<Vec<_>>()
        },
        |acc, vals| acc.iter_mut().zip(vals).for_each(|(s, v)| s.push(v)),
        merge_all,
    );
    Ok(stats.iter().map(|s| EstimatorReport::from_stats(s, n, seed)).collect())
}

#[allow(clippy::ptr_arg)]
fn merge_all(acc: &mut Vec<ComplexStats>, part: Vec<ComplexStats>) {
    acc.iter_mut().zip(&part).for_each(|(a, b)| a.merge(b));
}

/// Estimates `(1/N) E tr(Z_{w_1} ... Z_{w_k})` over independent GUE tuples.
pub fn gue_word_moment(w: &Word, n: usize, samples: usize, seed: u64, exec: Exec) -> Result<EstimatorReport> {
    Ok(gue_word_moments(std::slice::from_ref(w), n, samples, seed, exec)?.remove(0))
}

/// Several word moments from one set of GUE tuples.
pub fn gue_word_moments(
    words: &[Word],
    n: usize,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<EstimatorReport>> {
    check_size(n, samples)?;
    let arity = words
        .iter()
        .map(|w| usize::from(w.max_letter()))
        .max()
        .unwrap_or(0)
        .max(1);
    let stats = mc::chunked(
        samples,
        exec,
        vec![ComplexStats::default(); words.len()],
        |i| {
            let mut rng = mc::sample_rng(seed, i as u64);
            let z: Vec<CMatrix> = (0..arity).map(|_| gue_from_rng(n, &mut rng)).collect();
            words
                .iter()
                .map(|w| match w.letters() {
                    [] => Complex64::new(1.0, 0.0),
                    [head @ .., last] => {
                        let prefix = head
                            .iter()
                            .fold(CMatrix::identity(n), |acc, &l| &acc * &z[usize::from(l) - 1]);
                        normalized_trace_product(&prefix, &z[usize::from(*last) - 1])
                    }
                })
                .collect::<Vec<_>>()
        },
        |acc, vals| acc.iter_mut().zip(vals).for_each(|(s, v)| s.push(v)),
        merge_all,
    );
    Ok(stats.iter().map(|s| EstimatorReport::from_stats(s, n, seed)).collect())
}

/// A noncommutative function that can be evaluated on Hermitian tuples.
pub trait NcFunction: Sync {
    fn arity(&self) -> usize;
    fn eval(&self, z: &[CMatrix]) -> Result<CMatrix>;
}

/// `f(Z_k)` for a scalar function `f`, applied spectrally.
pub struct Spectral<F> {
    pub variable: usize,
    pub arity: usize,
    pub f: F,
}

impl<F: Fn(f64) -> Complex64 + Sync> NcFunction for Spectral<F> {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval(&self, z: &[CMatrix]) -> Result<CMatrix> {
        let m = z
            .get(self.variable)
            .ok_or_else(|| Error::InvalidArgument(format!("variable {} out of range", self.variable + 1)))?;
        hermitian_function(m, &self.f)
    }
}

/// Noncommutative polynomial given by a truncated series.
impl NcFunction for TruncSeries {
    fn arity(&self) -> usize {
        self.dim()
    }

    fn eval(&self, z: &[CMatrix]) -> Result<CMatrix> {
        eval_trunc(self, &MatrixTuple::new(z.to_vec())?, Complex64::new(1.0, 0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierReport {
    pub report: EstimatorReport,
    /// Samples redrawn because an eigenvalue sat on the branch cut.
    pub redraws: u64,
}

/// Monte Carlo estimate of `(1/N) tr E[f(-i log X) X^{-γ}]` over Haar
/// tuples, with the principal logarithm (spectrum in `(-π, π)`).
///
/// `E_{γ^{-1}}(iZ)` at `Z = -i log X` is exactly `X^{-γ}`, which is what is
/// multiplied in.
pub fn matrix_fourier_coeff(
    f: &dyn NcFunction,
    gamma: &GroupWord,
    n: usize,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<FourierReport> {
    check_size(n, samples)?;
    let arity = f.arity().max(usize::from(gamma.max_index())).max(1);
    let inverse = gamma.inverse();
    let redraw_seed = mc::splitmix64(seed ^ 0x5EED_5EED);
    let one = |i: usize| -> Result<(Complex64, u64)> {
        for attempt in 0..=MAX_REDRAWS {
            let mut rng = if attempt == 0 {
                mc::sample_rng(seed, i as u64)
            } else {
                mc::sample_rng(redraw_seed.wrapping_add(attempt), i as u64)
            };
            let x = haar_tuple(arity, n, &mut rng);
            let logs: Result<Vec<CMatrix>> = x
                .matrices()
                .iter()
                .map(|u| principal_log_unitary(u, BRANCH_TOL))
                .collect();
            match logs {
                Ok(z) => {
                    let fz = f.eval(&z)?;
                    let mono = laurent_monomial(&inverse, &x)?;
                    return Ok((normalized_trace_product(&fz, &mono), attempt));
                }
                Err(Error::BranchAmbiguity { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::BranchAmbiguity { tol: BRANCH_TOL })
    };
    let (stats, redraws, err) = mc::chunked(
        samples,
        exec,
        (ComplexStats::default(), 0u64, None::<Error>),
        one,
        |acc, r| match r {
            Ok((v, k)) => {
                acc.0.push(v);
                acc.1 += k;
            }
            Err(e) => {
                acc.2.get_or_insert(e);
            }
        },
        |acc, part| {
            acc.0.merge(&part.0);
            acc.1 += part.1;
            if acc.2.is_none() {
                acc.2 = part.2;
            }
        },
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(FourierReport {
        report: EstimatorReport::from_stats(&stats, n, seed),
        redraws,
    })
}

/// Jacobian of `Z -> exp(iZ)` at a Hermitian matrix with eigenvalues
/// `λ`: `prod_{j<k} 2(1 - cos(λ_j - λ_k)) / (λ_j - λ_k)^2`.
pub fn jacobian_exp_map(eigenvalues: &[f64]) -> f64 {
    let mut prod = 1.0;
    for (j, a) in eigenvalues.iter().enumerate() {
        for b in &eigenvalues[j + 1..] {
            let d = a - b;
            // 2(1 - cos d)/d^2 = (sin(d/2)/(d/2))^2, finite at d = 0.
            let h = 0.5 * d;
            prod *= if h == 0.0 { 1.0 } else { (h.sin() / h).powi(2) };
        }
    }
    prod
}

/// `V_N = prod_{m=0}^{N-1} 2 π^{m+1} / m!`.
pub fn unitary_volume(n: usize) -> f64 {
    let mut v = 1.0;
    let mut fact = 1.0;
    for m in 0..n {
        if m > 0 {
            fact *= m as f64;
        }
        v *= 2.0 * PI.powi(m as i32 + 1) / fact;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn haar_samples_are_unitary() {
        for n in [1, 2, 5, 16, 32] {
            let u = sample_haar(n, 11).unwrap();
            assert!(u.unitarity_defect() <= 1e-12 * n as f64, "n={n}");
        }
    }

    #[test]
    fn gue_samples_are_hermitian() {
        let z = sample_gue(7, 3).unwrap();
        assert_eq!(z, z.adjoint());
    }

    #[test]
    fn haar_mean_trace_vanishes() {
        let f = LaurentPoly::new(vec![(GroupWord::from_signed(&[1]), c(1.0))]);
        let r = haar_coefficient(&f, &GroupWord::identity(), 8, 10_000, 1, Exec::Parallel).unwrap();
        assert!(r.within(c(0.0), 3.0, 0.0), "{r:?}");
    }

    #[test]
    fn haar_second_moment_of_trace() {
        // |tr U|^2 = N^2 (1/N) tr(U) (1/N) tr(U*); estimate it directly.
        for n in [1, 4] {
            let stats = mc::chunked(
                10_000,
                Exec::Parallel,
                ComplexStats::default(),
                |i| c(haar_from_rng(n, &mut mc::sample_rng(5, i as u64)).trace().norm_sqr()),
                |a, v| a.push(v),
                |a, b| a.merge(&b),
            );
            let r = EstimatorReport::from_stats(&stats, n, 5);
            assert!(r.within(c(1.0), 3.0, 0.0), "n={n} {r:?}");
        }
    }

    #[test]
    fn n1_haar_is_uniform_on_circle() {
        // E[cos(k θ)] = 0 and E[θ^2] = π^2/3 for θ uniform on (-π, π].
        let stats = mc::chunked(
            20_000,
            Exec::Serial,
            ComplexStats::default(),
            |i| {
                let t = haar_from_rng(1, &mut mc::sample_rng(8, i as u64)).get(0, 0).arg();
                c(t * t)
            },
            |a, v| a.push(v),
            |a, b| a.merge(&b),
        );
        let r = EstimatorReport::from_stats(&stats, 1, 8);
        assert!(r.within(c(PI * PI / 3.0), 3.0, 0.0), "{r:?}");
    }

    #[test]
    fn haar_two_by_two_eigenvalue_repulsion() {
        // For Haar U(2), E[cos(θ1 - θ2)] = -1/2.
        let stats = mc::chunked(
            10_000,
            Exec::Parallel,
            ComplexStats::default(),
            |i| {
                let u = haar_from_rng(2, &mut mc::sample_rng(21, i as u64));
                let (t, _) = crate::matfun::unitary_eig(&u).unwrap();
                c((t[0] - t[1]).cos())
            },
            |a, v| a.push(v),
            |a, b| a.merge(&b),
        );
        let r = EstimatorReport::from_stats(&stats, 2, 21);
        assert!(r.within(c(-0.5), 3.0, 0.0), "{r:?}");
    }

    #[test]
    fn left_invariance_two_sample() {
        let n = 6;
        let v = sample_haar(n, 999).unwrap();
        let run = |shift: bool, seed| {
            mc::chunked(
                8_000,
                Exec::Parallel,
                ComplexStats::default(),
                |i| {
                    let u = haar_from_rng(n, &mut mc::sample_rng(seed, i as u64));
                    let m = if shift { &v * &u } else { u };
                    c((m.trace() / n as f64).re)
                },
                |a, x| a.push(x),
                |a, b| a.merge(&b),
            )
        };
        let (a, b) = (run(false, 1), run(true, 2));
        let se = (a.std_error().powi(2) + b.std_error().powi(2)).sqrt();
        assert!((a.mean - b.mean).norm() <= 3.0 * se);
    }

    #[test]
    fn gue_normalization() {
        let words = [Word::new([1, 1]), Word::new([1, 1, 1, 1])];
        let r = gue_word_moments(&words, 64, 200, 4, Exec::Parallel).unwrap();
        assert!(r[0].within(c(1.0), 3.0, 0.0), "{:?}", r[0]);
        assert!(r[1].within(c(2.0), 3.0, 0.02), "{:?}", r[1]);
    }

    #[test]
    fn gue_mixed_moments() {
        let words = [Word::new([1, 2]), Word::new([1, 1, 2, 2]), Word::new([1, 2, 1, 2])];
        let r = gue_word_moments(&words, 64, 200, 6, Exec::Parallel).unwrap();
        assert!(r[0].within(c(0.0), 3.0, 0.0), "{:?}", r[0]);
        assert!(r[1].within(c(1.0), 3.0, 0.0), "{:?}", r[1]);
        assert!(r[2].within(c(0.0), 3.0, 0.02), "{:?}", r[2]);
    }

    #[test]
    fn constant_coefficient_is_exact() {
        let f = LaurentPoly::constant(c(3.0));
        for n in [1, 5] {
            let r = haar_coefficient(&f, &GroupWord::identity(), n, 10, 0, Exec::Serial).unwrap();
            assert!((r.value - c(3.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn commutator_trace_decays() {
        let f = LaurentPoly::new(vec![(GroupWord::from_signed(&[1, 2, -1, -2]), c(1.0))]);
        let mut prev = f64::INFINITY;
        for n in [4, 8, 16] {
            let r = haar_coefficient(&f, &GroupWord::identity(), n, 4_000, 2, Exec::Parallel).unwrap();
            // Exact mean is 1/N^2.
            assert!(r.within(c(1.0 / (n * n) as f64), 3.0, 0.0), "n={n} {r:?}");
            assert!(r.value.norm() < prev);
            prev = r.value.norm();
        }
        assert!(prev < 0.05);
    }

    #[test]
    fn laurent_parse() {
        let f = LaurentPoly::parse("3 : e; 2 : 1 -2; -1 0.5 : 2 1").unwrap();
        assert_eq!(f.terms().len(), 3);
        assert_eq!(f.terms()[2].1, Complex64::new(-1.0, 0.5));
        assert_eq!(f.arity(), 2);
        for bad in ["", "3", "x : 1", "1 2 3 : 1", "1 : 0", "inf : e"] {
            assert!(LaurentPoly::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn jacobian_and_volume() {
        assert_eq!(jacobian_exp_map(&[0.0, 0.0, 0.0]), 1.0);
        assert_eq!(jacobian_exp_map(&[0.7]), 1.0);
        let d: f64 = 1.3;
        assert!((jacobian_exp_map(&[d, 0.0]) - 2.0 * (1.0 - d.cos()) / (d * d)).abs() < 1e-15);
        assert_eq!(unitary_volume(1), 2.0 * PI);
        assert!((unitary_volume(2) - 2.0 * PI * 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn n1_fourier_matches_quadrature() {
        let f = Spectral {
            variable: 0,
            arity: 1,
            f: |z: f64| c((-z * z).exp()),
        };
        for k in [0i32, 1, 2] {
            let gamma = GroupWord::from_signed(&vec![1; k as usize]);
            let r = matrix_fourier_coeff(&f, &gamma, 1, 20_000, 7, Exec::Parallel).unwrap();
            // Midpoint rule for (1/2π) ∫_{-π}^{π} e^{-z^2} cos(kz) dz.
            let m = 200_000;
            let h = 2.0 * PI / m as f64;
            let quad: f64 = (0..m)
                .map(|j| {
                    let z = -PI + (j as f64 + 0.5) * h;
                    (-z * z).exp() * (k as f64 * z).cos()
                })
                .sum::<f64>()
                * h
                / (2.0 * PI);
            assert!(r.report.within(c(quad), 3.0, 0.0), "k={k} {r:?} {quad}");
        }
    }

    #[test]
    fn fourier_of_polynomial_series() {
        // f = Z_1 at N = 1, coefficient of X^1 against quadrature.
        let s = TruncSeries::generator(1, 2, 1).unwrap();
        let r = matrix_fourier_coeff(&s, &GroupWord::from_signed(&[1]), 1, 20_000, 4, Exec::Serial).unwrap();
        let m = 100_000;
        let h = 2.0 * PI / m as f64;
        let quad: Complex64 = (0..m)
            .map(|j| {
                let z = -PI + (j as f64 + 0.5) * h;
                z * Complex64::new(0.0, -z).exp()
            })
            .sum::<Complex64>()
            * h
            / (2.0 * PI);
        assert!(r.report.within(quad, 3.0, 0.0), "{r:?} {quad}");
    }

    #[test]
    fn serial_parallel_bitwise() {
        let f = LaurentPoly::parse("1 : 1 2 -1").unwrap();
        let g = [GroupWord::from_signed(&[2])];
        let a = haar_coefficients(&f, &g, 4, 700, 3, Exec::Serial).unwrap();
        let b = haar_coefficients(&f, &g, 4, 700, 3, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let w = [Word::new([1, 2, 2])];
        assert_eq!(
            gue_word_moments(&w, 5, 600, 1, Exec::Serial).unwrap(),
            gue_word_moments(&w, 5, 600, 1, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn guards() {
        assert!(sample_haar(0, 1).is_err());
        assert!(sample_gue(MAX_MATRIX_SIZE + 1, 1).is_err());
        let f = LaurentPoly::constant(c(1.0));
        assert!(haar_coefficient(&f, &GroupWord::identity(), 2, 0, 1, Exec::Serial).is_err());
    }
}
