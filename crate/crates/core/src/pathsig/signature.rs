use num_complex::Complex64;
use rayon::prelude::*;

use super::group_word::GroupWord;
use super::path::PlPath;
use crate::error::{Error, Result};
use crate::ncseries::dense::{DenseTensor, Scratch};
use crate::ncseries::{TruncSeries, Word};

/// Longest word accepted by [`iterated_integral`].
pub const MAX_ORACLE_DEGREE: usize = 4;

/// Signature as a dense real tensor (the hot path used by the Monte Carlo code).
///
/// Segments are multiplied in traversal order with the first segment on the
/// left, so `sig(p then q) = sig(p) * sig(q)`.
pub fn signature_dense(p: &PlPath, cap: usize) -> Result<DenseTensor> {
    let mut sig = DenseTensor::one(p.dim(), cap)?;
    let mut scratch = Scratch::default();
    for inc in p.increments() {
        sig.mul_segment_exp(inc, &mut scratch);
    }
    Ok(sig)
}

/// Chen signature of a piecewise-linear path truncated at `cap`: the ordered
/// product of `exp(sum_i a_i Z_i)` over its segments.
pub fn signature(p: &PlPath, cap: usize) -> Result<TruncSeries> {
    Ok(signature_dense(p, cap)?.to_series())
}

/// Signatures of many paths, computed in parallel; output order follows input order.
pub fn signatures(paths: &[PlPath], cap: usize) -> Result<Vec<TruncSeries>> {
    paths.par_iter().map(|p| signature(p, cap)).collect()
}

/// Product over the letters of `exp(±Z_i)`, left to right.
pub fn signature_word(w: &GroupWord, dim: usize, cap: usize) -> Result<TruncSeries> {
    if usize::from(w.max_index()) > dim {
        return Err(Error::LetterOutOfRange {
            letter: w.max_index().into(),
            dim,
        });
    }
    let mut acc = TruncSeries::one(dim, cap)?;
    for l in w.letters() {
        let z = TruncSeries::generator(dim, cap, l.index)?;
        acc = &acc * &z.scale(Complex64::new(l.sign(), 0.0)).exp()?;
    }
    Ok(acc)
}

/// Iterated integral `∫_{t_1 < ... < t_k} dy_{w_1}(t_1) ... dy_{w_k}(t_k)` by a
/// Riemann sum on the order simplex.
///
/// The path is run at unit speed per segment over `[0, 1]` and the time axis
/// is cut into `mesh` equal cells. Strictly ordered cell tuples contribute the
/// product of the cell increments; tuples with `m` coincident cells are
/// weighted by `1/m!`, the share of the simplex inside that cube. The sum is
/// accumulated prefix by prefix, so the cost is `O(mesh |w|^2)` rather than
/// `mesh^|w|`.
pub fn iterated_integral(p: &PlPath, w: &Word, mesh: usize) -> Result<f64> {
    if mesh == 0 {
        return Err(Error::InvalidArgument("mesh must be >= 1".into()));
    }
    if w.degree() > MAX_ORACLE_DEGREE {
        return Err(Error::Guard(format!(
            "iterated-integral oracle limited to |w| <= {MAX_ORACLE_DEGREE}"
        )));
    }
    if usize::from(w.max_letter()) > p.dim() {
        return Err(Error::LetterOutOfRange {
            letter: w.max_letter().into(),
            dim: p.dim(),
        });
    }
    let k = w.degree();
    let letters: Vec<usize> = w.letters().iter().map(|&l| usize::from(l) - 1).collect();
    let segs = p.increments();
    if segs.is_empty() {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let position = |t: f64| -> Vec<f64> {
        // Point at time t in [0,1], each segment taking time 1/segs.len().
        let s = t * segs.len() as f64;
        let full = (s.floor() as usize).min(segs.len());
        let mut y = vec![0.0; p.dim()];
        for inc in &segs[..full] {
            for (a, b) in y.iter_mut().zip(inc) {
                *a += b;
            }
        }
        if full < segs.len() {
            let frac = s - full as f64;
            for (a, b) in y.iter_mut().zip(&segs[full]) {
                *a += frac * b;
            }
        }
        y
    };
    // prefix[j] = value of the sum for the first j letters over cells seen so far.
    let mut prefix = vec![0.0; k + 1];
    prefix[0] = 1.0;
    let mut left = position(0.0);
    for c in 0..mesh {
        let right = position((c + 1) as f64 / mesh as f64);
        let dy: Vec<f64> = right.iter().zip(&left).map(|(b, a)| b - a).collect();
        for j in (1..=k).rev() {
            // m letters w[j-m..j] all land in this cell.
            let mut add = 0.0;
            let mut prod = 1.0;
            for m in 1..=j {
                prod *= dy[letters[j - m]] / m as f64;
                add += prefix[j - m] * prod;
            }
            prefix[j] += add;
        }
        left = right;
    }
    Ok(prefix[k])
}

/// Oriented (Lévy) area `½ (S[12] - S[21])` of the planar projection onto letters `i, j`.
pub fn levy_area(sig: &TruncSeries, i: u8, j: u8) -> f64 {
    0.5 * (sig.coeff(&Word::new([i, j])) - sig.coeff(&Word::new([j, i]))).re
}
