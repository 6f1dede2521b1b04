//! Dual Fourier transform, coefficient pairing, convolution, and the shuffle
//! and deconcatenation identities for iterated integrals.

use num_complex::Complex64;

use super::{Kind, MomentFunctional};
use crate::error::{Error, Result};
use crate::ncseries::{shuffle, TruncSeries, Word};
use crate::pathsig::{signature, signature_word, GroupWord, PlPath};

fn check_degree(tau: &MomentFunctional, cap: usize) -> Result<()> {
    match tau.max_degree() {
        Some(max) if max < cap => Err(Error::MomentUnavailable { degree: cap, max }),
        _ => Ok(()),
    }
}

/// `Σ_w scale^{|w|} s[w] τ(w)`: the functional applied term by term to a
/// truncated series with its variables rescaled. The tail beyond the cap
/// is not estimated.
pub fn dual_ft_series(tau: &MomentFunctional, s: &TruncSeries, scale: Complex64) -> Result<Complex64> {
    check_degree(tau, s.cap())?;
    tau.eval_poly(&s.scale_variables(scale))
}

/// `τ(E_γ(iZ))` truncated at `cap`, for a piecewise-linear path.
pub fn dual_ft(tau: &MomentFunctional, p: &PlPath, cap: usize) -> Result<Complex64> {
    check_degree(tau, cap)?;
    dual_ft_series(tau, &signature(p, cap)?, Complex64::new(0.0, 1.0))
}

/// `τ(E_γ(iZ))` truncated at `cap`, for a lattice path given as a group word.
pub fn dual_ft_word(tau: &MomentFunctional, g: &GroupWord, cap: usize) -> Result<Complex64> {
    check_degree(tau, cap)?;
    let dim = tau.arity().max(g.max_index().into()).max(1);
    dual_ft_series(tau, &signature_word(g, dim, cap)?, Complex64::new(0.0, 1.0))
}

/// Coefficient pairing `⟨f, s⟩ = Σ_I f[I] s[I]`.
pub fn pair(f: &TruncSeries, s: &TruncSeries) -> Result<Complex64> {
    if f.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim(),
            right: s.dim(),
        });
    }
    if f.cap() > s.cap() {
        return Err(Error::CapMismatch {
            left: f.cap(),
            right: s.cap(),
        });
    }
    Ok(f.iter().map(|(w, c)| c * s.coeff(&w)).sum())
}

/// `τ * σ`, defined by `Z_i ↦ Z_i ⊗ 1 + 1 ⊗ Z_i`.
pub fn convolve(tau: &MomentFunctional, sigma: &MomentFunctional) -> Result<MomentFunctional> {
    if matches!(tau.kind(), Kind::Haar(_)) || matches!(sigma.kind(), Kind::Haar(_)) {
        return Err(Error::InvalidArgument(
            "convolution is defined for polynomial alphabets only".into(),
        ));
    }
    Ok(MomentFunctional::from_kind(Kind::Convolution(
        Box::new(tau.clone()),
        Box::new(sigma.clone()),
    )))
}

fn check_cap(degree: usize, cap: usize) -> Result<()> {
    if degree > cap {
        return Err(Error::DegreeOverflow { degree, cap });
    }
    Ok(())
}

/// `W_J(p) W_K(p)` and `Σ_{u ∈ J ⧢ K} W_u(p)`, read off the signature
/// through the coefficient extractors.
pub fn shuffle_eval(j: &Word, k: &Word, p: &PlPath, cap: usize) -> Result<(Complex64, Complex64)> {
    check_cap(j.degree() + k.degree(), cap)?;
    let sig = signature(p, cap)?;
    let one = Complex64::new(1.0, 0.0);
    let w = |u: &Word| dual_ft_series(&MomentFunctional::delta_j(u.clone()), &sig, one);
    let lhs = w(j)? * w(k)?;
    let mut rhs = Complex64::default();
    for u in shuffle(j, k) {
        rhs += w(&u)?;
    }
    Ok((lhs, rhs))
}

/// `W_J(p q)` and `Σ_ν W_{J_{≤ν}}(p) W_{J_{>ν}}(q)`, with `p` traversed first.
pub fn deconcatenation(j: &Word, p: &PlPath, q: &PlPath, cap: usize) -> Result<(Complex64, Complex64)> {
    check_cap(j.degree(), cap)?;
    let sp = signature(p, cap)?;
    let sq = signature(q, cap)?;
    let spq = signature(&p.concat(q)?, cap)?;
    let rhs = (0..=j.degree())
        .map(|nu| sp.coeff(&j.prefix(nu)) * sq.coeff(&j.suffix_from(nu)))
        .sum();
    Ok((spq.coeff(j), rhs))
}
