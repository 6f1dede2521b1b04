use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest matrix order accepted by the kernel.
pub const MAX_ORDER: usize = 256;

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        CMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn scalar(c: Complex64) -> Self {
        Self::diag(&[c])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Order of a square matrix.
    pub fn order(&self) -> usize {
        self.rows
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::default() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    fn zip_with(&self, other: &CMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<CMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        self.checked_sub(other)
            .map(|d| d.frobenius_norm())
            .unwrap_or(f64::INFINITY)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.distance(&self.adjoint()) <= tol
    }

    /// `‖U* U - I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.adjoint()
            .matmul(self)
            .map(|p| p.distance(&CMatrix::identity(self.rows)))
            .unwrap_or(f64::INFINITY)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Renders as text: a header line with the order, then one row per line
    /// of whitespace-separated `re,im` pairs.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.rows);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{},{}", z.re, z.im)
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Parses one or more square matrices in the text format, back to back.
    /// Blank lines and `#` lines are ignored.
    pub fn parse_many(text: &str) -> Result<Vec<CMatrix>> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let mut out = Vec::new();
        while let Some((line_no, header)) = lines.next() {
            let n: usize = header
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad order {header:?}")))?;
            if n == 0 || n > MAX_ORDER {
                return Err(Error::parse(line_no, format!("order {n} outside 1..={MAX_ORDER}")));
            }
            let mut data = Vec::with_capacity(n * n);
            for _ in 0..n {
                let (row_no, row) = lines.next().ok_or_else(|| Error::parse(line_no, "truncated matrix"))?;
                let entries: Vec<&str> = row.split_whitespace().collect();
                if entries.len() != n {
                    return Err(Error::parse(row_no, format!("expected {n} entries")));
                }
                for e in entries {
                    let (re, im) = e
                        .split_once(',')
                        .ok_or_else(|| Error::parse(row_no, format!("bad entry {e:?}")))?;
                    let re: f64 = re.parse().map_err(|_| Error::parse(row_no, "bad real part"))?;
                    let im: f64 = im.parse().map_err(|_| Error::parse(row_no, "bad imaginary part"))?;
                    if !re.is_finite() || !im.is_finite() {
                        return Err(Error::parse(row_no, "non-finite entry"));
                    }
                    data.push(Complex64::new(re, im));
                }
            }
            out.push(CMatrix { rows: n, cols: n, data });
        }
        Ok(out)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    /// # Panics
    /// On incompatible shapes.
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("incompatible matrix shapes")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.checked_add(rhs).expect("incompatible matrix shapes")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.checked_sub(rhs).expect("incompatible matrix shapes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let m = CMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64 - 0.5, j as f64 * 0.25));
        let t = m.to_text();
        assert!(t.starts_with("3\n"));
        let back = CMatrix::parse_many(&format!("# fixture\n{t}\n{}", CMatrix::identity(2).to_text())).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0], m);
        assert_eq!(back[1], CMatrix::identity(2));
    }

    #[test]
    fn parse_errors() {
        assert!(CMatrix::parse_many("2\n1,0 0,0\n").is_err());
        assert!(CMatrix::parse_many("2\n1,0 0,0\n0,0\n").is_err());
        assert!(CMatrix::parse_many("1\n1;0\n").is_err());
        assert!(CMatrix::parse_many("0\n").is_err());
        assert!(CMatrix::parse_many("x\n").is_err());
    }

    #[test]
    fn shapes() {
        let a = CMatrix::zeros(2, 3);
        assert!(a.matmul(&a).is_err());
        assert_eq!(a.matmul(&CMatrix::zeros(3, 1)).unwrap().cols(), 1);
        assert!(!a.is_hermitian(1.0));
    }
}
