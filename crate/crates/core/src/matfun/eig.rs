//! Hermitian eigensolver (cyclic Jacobi), unitary diagonalisation, and QR.

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

/// Order limit for the eigen-based routines.
pub const MAX_EIG_ORDER: usize = 64;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `A = V diag(λ) V*` of a Hermitian matrix.
/// Eigenvalues are returned in ascending order with matching columns of `V`.
pub fn hermitian_eig(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !a.is_square() {
        return Err(Error::Shape("eigen-decomposition of a non-square matrix".into()));
    }
    let n = a.order();
    if n > MAX_EIG_ORDER {
        return Err(Error::Guard(format!("eigensolver limited to order {MAX_EIG_ORDER}")));
    }
    let mut m = a.clone();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(format!(
            "Jacobi did not converge in {MAX_SWEEPS} sweeps"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).re.total_cmp(&m.get(j, j).re));
    let values = order.iter().map(|&i| m.get(i, i).re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v.get(r, order[c]));
    Ok((values, vectors))
}

/// One complex Jacobi rotation annihilating `m[p][q]`.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let b = m.get(p, q);
    let g = b.norm();
    if g == 0.0 {
        return;
    }
    let phase = b / g;
    let (a, d) = (m.get(p, p).re, m.get(q, q).re);
    let zeta = (d - a) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let t = if zeta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // Block transform W = diag(1, conj(phase)) [[c, s], [-s, c]].
    let w_pp = Complex64::new(c, 0.0);
    let w_pq = Complex64::new(s, 0.0);
    let w_qp = -phase.conj() * s;
    let w_qq = phase.conj() * c;
    let n = m.order();
    for k in 0..n {
        let (x, y) = (m.get(k, p), m.get(k, q));
        m.set(k, p, x * w_pp + y * w_qp);
        m.set(k, q, x * w_pq + y * w_qq);
    }
    for k in 0..n {
        let (x, y) = (m.get(p, k), m.get(q, k));
        m.set(p, k, w_pp.conj() * x + w_qp.conj() * y);
        m.set(q, k, w_pq.conj() * x + w_qq.conj() * y);
    }
    m.set(p, q, Complex64::default());
    m.set(q, p, Complex64::default());
    m.set(p, p, Complex64::new(m.get(p, p).re, 0.0));
    m.set(q, q, Complex64::new(m.get(q, q).re, 0.0));
    for k in 0..n {
        let (x, y) = (v.get(k, p), v.get(k, q));
        v.set(k, p, x * w_pp + y * w_qp);
        v.set(k, q, x * w_pq + y * w_qq);
    }
}

/// `V diag(f(λ)) V*` for a Hermitian matrix.
pub fn hermitian_function(a: &CMatrix, f: impl Fn(f64) -> Complex64) -> Result<CMatrix> {
    let (vals, v) = hermitian_eig(a)?;
    Ok(reassemble(&v, &vals.iter().map(|&x| f(x)).collect::<Vec<_>>()))
}

fn reassemble(v: &CMatrix, diag: &[Complex64]) -> CMatrix {
    let n = v.order();
    let scaled = CMatrix::from_fn(n, n, |i, j| v.get(i, j) * diag[j]);
    &scaled * &v.adjoint()
}

/// Eigen-decomposition `U = V diag(e^{iθ}) V*` of a unitary matrix with
/// `θ ∈ (-π, π]`.
///
/// Diagonalises the Hermitian combination `Re U + α Im U` (which shares the
/// eigenvectors of `U`) and reads the angles off `V* U V`; a few values of
/// `α` are tried in case of an accidental degeneracy.
pub fn unitary_eig(u: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !u.is_square() {
        return Err(Error::Shape("eigen-decomposition of a non-square matrix".into()));
    }
    let n = u.order();
    let ua = u.adjoint();
    let re = (u + &ua).scale(Complex64::new(0.5, 0.0));
    let im = (u - &ua).scale(Complex64::new(0.0, -0.5));
    for alpha in [0.618_033_988_749_895, -1.373_1, 2.417_9, 0.3] {
        let h = &re + &im.scale(Complex64::new(alpha, 0.0));
        let (_, v) = hermitian_eig(&h)?;
        let d = &(&v.adjoint() * u) * &v;
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| d.get(i, j).norm())
            .fold(0.0, f64::max);
        if off <= 1e-9 {
            let angles = (0..n).map(|i| d.get(i, i).arg()).collect();
            return Ok((angles, v));
        }
    }
    Err(Error::NoConvergence("unitary diagonalisation failed".into()))
}

/// Hermitian `Z = -i log U` with spectrum in `(-π, π)`, the principal branch.
///
/// Errors with [`Error::BranchAmbiguity`] when an eigenvalue lies within
/// `tol` (in angle) of `-1`.
pub fn principal_log_unitary(u: &CMatrix, tol: f64) -> Result<CMatrix> {
    let (angles, v) = unitary_eig(u)?;
    if angles.iter().any(|t| std::f64::consts::PI - t.abs() <= tol) {
        return Err(Error::BranchAmbiguity { tol });
    }
    let z = reassemble(&v, &angles.iter().map(|&t| Complex64::new(t, 0.0)).collect::<Vec<_>>());
    // Symmetrise away rounding.
    Ok((&z + &z.adjoint()).scale(Complex64::new(0.5, 0.0)))
}

/// Householder QR of a square matrix: `A = Q R` with `Q` unitary and `R`
/// upper triangular. The diagonal of `R` is in general complex.
pub fn qr(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    if !a.is_square() {
        return Err(Error::Shape("QR implemented for square matrices".into()));
    }
    let n = a.order();
    let mut r = a.clone();
    let mut reflectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for k in 0..n {
        let x: Vec<Complex64> = (k..n).map(|i| r.get(i, k)).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);
        // R <- (I - 2 v v*) R on rows k..n
        for j in k..n {
            let dot: Complex64 = (k..n).map(|i| v[i - k].conj() * r.get(i, j)).sum();
            for i in k..n {
                let val = r.get(i, j) - v[i - k] * dot * 2.0;
                r.set(i, j, val);
            }
        }
        for i in k + 1..n {
            r.set(i, k, Complex64::default());
        }
        reflectors.push(v);
    }
    // Q = H_0 H_1 ... H_{n-1}, applied to the identity from the right end.
    let mut q = CMatrix::identity(n);
    for (k, v) in reflectors.iter().enumerate().rev() {
        if v.is_empty() {
            continue;
        }
        for j in 0..n {
            let dot: Complex64 = (k..n).map(|i| v[i - k].conj() * q.get(i, j)).sum();
            for i in k..n {
                let val = q.get(i, j) - v[i - k] * dot * 2.0;
                q.set(i, j, val);
            }
        }
    }
    Ok((q, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        let a = random(n, seed);
        (&a + &a.adjoint()).scale(Complex64::new(0.5, 0.0))
    }

    #[test]
    fn hermitian_reconstruction() {
        for n in [1, 2, 5, 12] {
            let h = random_hermitian(n, n as u64);
            let (vals, v) = hermitian_eig(&h).unwrap();
            assert!(v.unitarity_defect() < 1e-12);
            let back = reassemble(&v, &vals.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>());
            assert!(back.distance(&h) < 1e-12 * h.frobenius_norm().max(1.0));
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            let tr: f64 = vals.iter().sum();
            assert!((tr - h.trace().re).abs() < 1e-12);
        }
    }

    #[test]
    fn qr_factors() {
        let a = random(6, 4);
        let (q, r) = qr(&a).unwrap();
        assert!(q.unitarity_defect() < 1e-13);
        assert!((&q * &r).distance(&a) < 1e-13);
        for i in 0..6 {
            for j in 0..i {
                assert_eq!(r.get(i, j), Complex64::default());
            }
        }
    }

    #[test]
    fn unitary_log_roundtrip() {
        let h = random_hermitian(5, 8);
        // Keep the spectrum inside (-π, π).
        let h = h.scale(Complex64::new(2.0 / h.frobenius_norm(), 0.0));
        let u = super::super::expm::mexp(&h.scale(Complex64::new(0.0, 1.0))).unwrap();
        let z = principal_log_unitary(&u, 1e-9).unwrap();
        assert!(z.distance(&h) < 1e-10);
    }

    #[test]
    fn branch_ambiguity_detected() {
        let u = CMatrix::diag(&[Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)]);
        assert!(matches!(
            principal_log_unitary(&u, 1e-9),
            Err(Error::BranchAmbiguity { .. })
        ));
    }
}
