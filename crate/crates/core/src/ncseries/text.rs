//! Line format: `i1 i2 ... ik : re im`, the empty word written `e`.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::series::TruncSeries;
use super::word::Word;
use crate::error::{Error, Result};

/// Renders stored coefficients in degree-lexicographic order, one per line.
pub fn to_text(s: &TruncSeries) -> String {
    let mut out = String::new();
    for (w, c) in s.iter() {
        let _ = writeln!(out, "{w} : {} {}", c.re, c.im);
    }
    out
}

/// Parses a word written as space-separated 1-based letters, or `e`.
pub fn parse_word(text: &str) -> std::result::Result<Word, String> {
    let text = text.trim();
    if text == "e" || text.is_empty() {
        return Ok(Word::empty());
    }
    let mut letters = Vec::new();
    for tok in text.split_whitespace() {
        let l: u8 = tok.parse().map_err(|_| format!("bad letter {tok:?}"))?;
        if l == 0 {
            return Err("letters are 1-based".into());
        }
        letters.push(l);
    }
    Ok(Word::new(letters))
}

/// Parses the line format. Blank lines and lines starting with `#` are skipped;
/// a word listed twice is rejected.
pub fn from_text(text: &str, dim: usize, cap: usize) -> Result<TruncSeries> {
    let mut terms: Vec<(Word, Complex64)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (lhs, rhs) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(line_no, "missing ':'"))?;
        let word = parse_word(lhs).map_err(|m| Error::parse(line_no, m))?;
        if let Some(&l) = word.letters().iter().find(|&&l| usize::from(l) > dim) {
            return Err(Error::parse(line_no, format!("letter {l} outside 1..={dim}")));
        }
        if word.degree() > cap {
            return Err(Error::parse(
                line_no,
                format!("degree {} above cap {cap}", word.degree()),
            ));
        }
        let parts: Vec<&str> = rhs.split_whitespace().collect();
        let [re, im] = parts[..] else {
            return Err(Error::parse(line_no, "expected 're im'"));
        };
        let re: f64 = re.parse().map_err(|_| Error::parse(line_no, "bad real part"))?;
        let im: f64 = im.parse().map_err(|_| Error::parse(line_no, "bad imaginary part"))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::parse(line_no, "non-finite coefficient"));
        }
        if !seen.insert(word.clone()) {
            return Err(Error::parse(line_no, format!("duplicate word {word}")));
        }
        terms.push((word, Complex64::new(re, im)));
    }
    TruncSeries::from_terms(dim, cap, terms)
}
