//! Truncated free tensor algebra `C<<Z_1..Z_n>> / (degree > cap)` and its Hopf structure.

pub mod dense;
mod hopf;
mod series;
pub mod text;
mod word;

pub use hopf::{
    commutative_exp, commutativize, coproduct_pair, dynkin, grouplike_defect, is_grouplike, is_primitive,
    left_normed_bracket, primitive_defect, DEFAULT_TOL,
};
pub use series::{gaussian_like, gaussian_series, word_count, TruncSeries, DEFAULT_CAP, MAX_CAP, MAX_WORDS};
pub use word::{shuffle, words_of_degree, words_up_to, Word};
