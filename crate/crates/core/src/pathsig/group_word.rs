use std::fmt;

use super::path::PlPath;
use crate::error::{Error, Result};

/// Generator `X_i^{±1}` of the free group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    /// 1-based generator index.
    pub index: u8,
    /// `true` for `X_i^{-1}`.
    pub inverse: bool,
}

impl Letter {
    pub fn new(index: u8, inverse: bool) -> Self {
        assert!(index >= 1, "letters are 1-based");
        Letter { index, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            index: self.index,
            inverse: !self.inverse,
        }
    }

    pub fn sign(self) -> f64 {
        if self.inverse {
            -1.0
        } else {
            1.0
        }
    }
}

/// Freely reduced word in the free group `F_n`, i.e. a lattice path up to
/// cancellation of back-tracking steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GroupWord(Vec<Letter>);

/// Free reduction with a stack: each letter cancels against the top if they are inverse.
pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> GroupWord {
    let mut stack: Vec<Letter> = Vec::new();
    for l in raw {
        if stack.last() == Some(&l.inv()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    GroupWord(stack)
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    /// Reduces a signed-index sequence such as `[1, 2, -1, -2]`.
    ///
    /// # Panics
    /// On a zero entry.
    pub fn from_signed(indices: &[i32]) -> Self {
        reduce(indices.iter().map(|&i| {
            assert!(i != 0, "letters are 1-based");
            Letter::new(i.unsigned_abs() as u8, i < 0)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_index(&self) -> u8 {
        self.0.iter().map(|l| l.index).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Group product (concatenation followed by reduction).
    pub fn compose(&self, other: &GroupWord) -> GroupWord {
        reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Signed indices, e.g. `[1, 2, -1, -2]`.
    pub fn to_signed(&self) -> Vec<i32> {
        self.0
            .iter()
            .map(|l| {
                if l.inverse {
                    -i32::from(l.index)
                } else {
                    i32::from(l.index)
                }
            })
            .collect()
    }

    /// Unit-step lattice path in `R^dim` traversing the letters left to right.
    pub fn to_path(&self, dim: usize) -> Result<PlPath> {
        if usize::from(self.max_index()) > dim {
            return Err(Error::LetterOutOfRange {
                letter: self.max_index().into(),
                dim,
            });
        }
        let increments = self
            .0
            .iter()
            .map(|l| {
                let mut v = vec![0.0; dim];
                v[usize::from(l.index) - 1] = l.sign();
                v
            })
            .collect();
        PlPath::new(dim, increments)
    }

    /// Parses `"1 2 -1 -2"`; the empty string (or `e`) is the identity.
    /// The result is freely reduced.
    pub fn parse(text: &str) -> Result<GroupWord> {
        let text = text.trim();
        if text.is_empty() || text == "e" {
            return Ok(GroupWord::identity());
        }
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let v: i32 = tok
                .parse()
                .map_err(|_| Error::parse(1, format!("bad letter {tok:?}")))?;
            if v == 0 || v.unsigned_abs() > u32::from(u8::MAX) {
                return Err(Error::parse(1, format!("letter {v} out of range")));
            }
            letters.push(Letter::new(v.unsigned_abs() as u8, v < 0));
        }
        Ok(reduce(letters))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.to_signed().iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}
