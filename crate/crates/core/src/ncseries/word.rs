use std::cmp::Ordering;
use std::fmt;

/// A word in the letters `1..=n`, i.e. the monomial `Z_{i_1} ... Z_{i_k}`.
///
/// Words order first by degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from 1-based letters.
    ///
    /// # Panics
    /// If a letter is 0.
    pub fn new(letters: impl Into<Vec<u8>>) -> Self {
        let letters = letters.into();
        assert!(letters.iter().all(|&l| l >= 1), "letters are 1-based");
        Word(letters)
    }

    pub fn letter(i: u8) -> Self {
        Word::new(vec![i])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_letter(&self) -> u8 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn suffix_from(&self, start: usize) -> Word {
        Word(self.0[start..].to_vec())
    }

    /// Letter-count vector `(#1, ..., #n)`.
    pub fn multidegree(&self, dim: usize) -> Vec<u32> {
        let mut alpha = vec![0u32; dim];
        for &l in &self.0 {
            alpha[usize::from(l) - 1] += 1;
        }
        alpha
    }

    /// Lyndon test: strictly smaller (lexicographically) than every proper suffix.
    pub fn is_lyndon(&self) -> bool {
        let w = &self.0;
        !w.is_empty() && (1..w.len()).all(|i| w[..] < w[i..])
    }

    pub(crate) fn from_raw(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    /// Index of the word among the `dim^degree` words of its degree in lexicographic order.
    pub(crate) fn lex_index(&self, dim: usize) -> u64 {
        self.0.iter().fold(0u64, |acc, &l| acc * dim as u64 + u64::from(l - 1))
    }

    pub(crate) fn from_lex_index(mut index: u64, degree: usize, dim: usize) -> Self {
        let mut v = vec![0u8; degree];
        for slot in v.iter_mut().rev() {
            *slot = (index % dim as u64) as u8 + 1;
            index /= dim as u64;
        }
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl From<&[u8]> for Word {
    fn from(letters: &[u8]) -> Self {
        Word::new(letters.to_vec())
    }
}

/// All words of exactly `degree` letters over `1..=dim`, in lexicographic order.
pub fn words_of_degree(dim: usize, degree: usize) -> impl Iterator<Item = Word> {
    let count = (dim as u64).pow(degree as u32);
    (0..count).map(move |i| Word::from_lex_index(i, degree, dim))
}

/// All words of degree at most `cap`, ordered by degree then lexicographically.
pub fn words_up_to(dim: usize, cap: usize) -> impl Iterator<Item = Word> {
    (0..=cap).flat_map(move |d| words_of_degree(dim, d))
}

/// The multiset of shuffles of `u` and `v`: every interleaving preserving
/// the internal order of both words, listed with multiplicity.
pub fn shuffle(u: &Word, v: &Word) -> Vec<Word> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(u.degree() + v.degree());
    shuffle_rec(u.letters(), v.letters(), &mut buf, &mut out);
    out
}

fn shuffle_rec(u: &[u8], v: &[u8], buf: &mut Vec<u8>, out: &mut Vec<Word>) {
    if u.is_empty() || v.is_empty() {
        let mut w = buf.clone();
        w.extend_from_slice(u);
        w.extend_from_slice(v);
        out.push(Word(w));
        return;
    }
    buf.push(u[0]);
    shuffle_rec(&u[1..], v, buf, out);
    buf.pop();
    buf.push(v[0]);
    shuffle_rec(u, &v[1..], buf, out);
    buf.pop();
}
