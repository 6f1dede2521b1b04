//! Dense real truncated tensors: the hot kernel behind path signatures.
//!
//! Level `k` holds `dim^k` coefficients in lexicographic word order. All
//! arithmetic is real because path increments are real; conversion to
//! [`TruncSeries`] happens once at the end.

use num_complex::Complex64;

use super::series::{check_shape, TruncSeries};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    dim: usize,
    cap: usize,
    levels: Vec<Vec<f64>>,
}

impl DenseTensor {
    /// The unit element `1`.
    pub fn one(dim: usize, cap: usize) -> Result<Self> {
        check_shape(dim, cap)?;
        let levels = (0..=cap)
            .map(|k| {
                let mut v = vec![0.0; dim.pow(k as u32)];
                if k == 0 {
                    v[0] = 1.0;
                }
                v
            })
            .collect();
        Ok(DenseTensor { dim, cap, levels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k]
    }

    /// In-place right multiplication by `exp(sum_i inc_i Z_i)`.
    ///
    /// Level `k` is updated by the Horner scheme
    /// `((S_0 a/k + S_1) a/(k-1) + ... + S_{k-1}) a/1 + S_k`, highest level
    /// first so lower levels are still the old values when read.
    pub fn mul_segment_exp(&mut self, inc: &[f64], scratch: &mut Scratch) {
        debug_assert_eq!(inc.len(), self.dim);
        let n = self.dim;
        for k in (1..=self.cap).rev() {
            let (acc, tmp) = (&mut scratch.a, &mut scratch.b);
            acc.clear();
            acc.extend_from_slice(&self.levels[0]);
            for j in 1..=k {
                let f = 1.0 / (k - j + 1) as f64;
                let next = &self.levels[j];
                tmp.resize(next.len(), 0.0);
                for ((&t, out), base) in acc.iter().zip(tmp.chunks_exact_mut(n)).zip(next.chunks_exact(n)) {
                    let tf = t * f;
                    for ((o, &a), &s) in out.iter_mut().zip(inc).zip(base) {
                        *o = tf * a + s;
                    }
                }
                std::mem::swap(acc, tmp);
            }
            self.levels[k].copy_from_slice(acc);
        }
    }

    /// Truncated product `self * other`.
    pub fn mul(&self, other: &DenseTensor) -> DenseTensor {
        assert_eq!((self.dim, self.cap), (other.dim, other.cap));
        let mut out = DenseTensor {
            dim: self.dim,
            cap: self.cap,
            levels: self.levels.iter().map(|l| vec![0.0; l.len()]).collect(),
        };
        for k in 0..=self.cap {
            let dst = &mut out.levels[k];
            for i in 0..=k {
                let a = &self.levels[i];
                let b = &other.levels[k - i];
                let blen = b.len();
                for (ia, &x) in a.iter().enumerate() {
                    if x == 0.0 {
                        continue;
                    }
                    let row = &mut dst[ia * blen..(ia + 1) * blen];
                    for (d, &y) in row.iter_mut().zip(b) {
                        *d += x * y;
                    }
                }
            }
        }
        out
    }

    pub fn to_series(&self) -> TruncSeries {
        let mut s = TruncSeries::zero(self.dim, self.cap).expect("shape checked at construction");
        for (k, level) in self.levels.iter().enumerate() {
            for (i, &x) in level.iter().enumerate() {
                if x != 0.0 {
                    s.insert_raw(k, i as u64, Complex64::new(x, 0.0));
                }
            }
        }
        s
    }

    /// All coefficients flattened degree by degree.
    pub fn flat(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.iter().flatten().copied()
    }
}

/// Reusable buffers for [`DenseTensor::mul_segment_exp`].
#[derive(Default, Debug)]
pub struct Scratch {
    a: Vec<f64>,
    b: Vec<f64>,
}
