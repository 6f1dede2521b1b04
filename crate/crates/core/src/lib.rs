//! Computational toolkit for the noncommutative Fourier transform.
//!
//! The crate is organised around a handful of value types:
//!
//! * [`ncseries::TruncSeries`]: noncommutative power series in `Z_1..Z_n`
//!   truncated above a degree cap, with the Hopf-algebra tests that
//!   characterise group-like and primitive elements.
//! * [`freelie::LieElement`]: coordinates in the Lyndon basis of the free
//!   Lie algebra, with brackets and Baker–Campbell–Hausdorff.
//! * [`pathsig::PlPath`] and [`pathsig::GroupWord`]: piecewise-linear paths
//!   and reduced words in the free group, together with their signatures.
//! * [`matfun::CMatrix`]: a small dense complex matrix kernel used to
//!   evaluate series and holonomies on matrix tuples.
//! * [`ncmeasure::MomentFunctional`]: noncommutative measures given by
//!   their values on words, including free products and convolution.
//!
//! The Monte Carlo modules ([`rmt`], [`wiener`]) are deterministic
//! functions of a master seed; serial and parallel runs agree bitwise.

pub mod error;
pub mod freelie;
pub mod matfun;
pub mod mc;
pub mod ncmeasure;
pub mod ncseries;
pub mod pathsig;
pub mod rmt;
pub mod wiener;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Library version string recorded in experiment headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
