//! Matrix exponential by scaling and squaring around a Taylor core.
//!
//! The matrix is halved until its 1-norm is at most `1/2`; the degree-18
//! Taylor polynomial is then accurate to `0.5^19 / 19! < 1e-22` relative,
//! well below double precision, and the result is squared back.

use num_complex::Complex64;

use super::matrix::{CMatrix, MAX_ORDER};
use crate::error::{Error, Result};

const TAYLOR_DEGREE: usize = 18;
const SCALED_NORM: f64 = 0.5;

pub fn mexp(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "exponential of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.order();
    if n > MAX_ORDER {
        return Err(Error::Guard(format!("matrix order {n} above {MAX_ORDER}")));
    }
    if m.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidArgument("non-finite matrix entry".into()));
    }
    let norm = m.one_norm();
    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let a = m.scale(Complex64::new(0.5f64.powi(squarings), 0.0));
    // Horner: I + A(I + A/2(I + A/3(...)))
    let id = CMatrix::identity(n);
    let mut acc = id.clone();
    for k in (1..=TAYLOR_DEGREE).rev() {
        acc = &id + &(&a * &acc).scale(Complex64::new(1.0 / k as f64, 0.0));
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    Ok(acc)
}
