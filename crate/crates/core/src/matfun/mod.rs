//! Dense complex matrix kernel: exponentials, eigen-decompositions, and
//! evaluation of signatures and truncated series on matrix tuples.

mod eig;
mod eval;
mod expm;
mod matrix;

pub use eig::{hermitian_eig, hermitian_function, principal_log_unitary, qr, unitary_eig, MAX_EIG_ORDER};
pub use eval::{
    amitsur_levitsky, eval_exact_path, eval_exact_word, eval_trunc, laurent_monomial, MatrixTuple, MAX_AL_ORDER,
    UNITARY_TOL_PER_N,
};
pub use expm::mexp;
pub use matrix::{CMatrix, MAX_ORDER};
