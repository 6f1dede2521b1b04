//! Paths, the signature map and iterated-integral oracles.

mod group_word;
mod path;
mod signature;

pub use group_word::{reduce, GroupWord, Letter};
pub use path::PlPath;
pub use signature::{
    iterated_integral, levy_area, signature, signature_dense, signature_word, signatures, MAX_ORACLE_DEGREE,
};

#[cfg(test)]
mod tests;
