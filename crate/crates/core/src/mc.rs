//! Seeding, chunked deterministic reduction, and sample statistics shared by
//! the Monte Carlo modules.
//!
//! Sample `i` of an experiment with master seed `s` draws from a ChaCha
//! stream seeded by `splitmix64(s ^ splitmix64(i))`. Samples are grouped
//! into fixed-size chunks; each chunk is reduced serially in index order and
//! chunk results are merged in chunk order, so the thread count never
//! changes a single bit of the output.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Samples per reduction chunk.
pub const CHUNK: usize = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Serial,
    #[default]
    Parallel,
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Independent stream for sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)))
}

/// Maps `count` samples through `sample` and folds them chunk by chunk.
///
/// `fold` adds one sample into a chunk accumulator, `merge` combines chunk
/// accumulators left to right.
pub fn chunked<T, A, S, F, M>(count: usize, exec: Exec, init: A, sample: S, fold: F, merge: M) -> A
where
    T: Send,
    A: Clone + Send + Sync,
    S: Fn(usize) -> T + Sync,
    F: Fn(&mut A, T) + Sync,
    M: Fn(&mut A, A),
{
    let chunks = count.div_ceil(CHUNK);
    let run = |c: usize| {
        let mut acc = init.clone();
        for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
            fold(&mut acc, sample(i));
        }
        acc
    };
    let parts: Vec<A> = match exec {
        Exec::Serial => (0..chunks).map(run).collect(),
        Exec::Parallel => (0..chunks).into_par_iter().map(run).collect(),
    };
    let mut total = init;
    for p in parts {
        merge(&mut total, p);
    }
    total
}

/// Running mean and second moment of complex samples (Chan et al. merge).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexStats {
    pub count: u64,
    pub mean: Complex64,
    /// Sum of `|x - mean|^2`.
    pub m2: f64,
}

impl ComplexStats {
    pub fn push(&mut self, x: Complex64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += (delta.conj() * (x - self.mean)).re;
    }

    pub fn merge(&mut self, other: &ComplexStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        self.mean += delta * (nb / n);
        self.m2 += other.m2 + delta.norm_sqr() * na * nb / n;
        self.count += other.count;
    }

    /// Sample variance `E|x - mean|^2` with Bessel correction.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Per-coefficient statistics of a vector-valued sample.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VecStats {
    pub count: u64,
    pub mean: Vec<f64>,
    pub m2: Vec<f64>,
}

impl VecStats {
    pub fn new(len: usize) -> Self {
        VecStats {
            count: 0,
            mean: vec![0.0; len],
            m2: vec![0.0; len],
        }
    }

    pub fn push(&mut self, x: impl IntoIterator<Item = f64>) {
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), v) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(x) {
            let d = v - *m;
            *m += d / n;
            *s += d * (v - *m);
        }
    }

    pub fn merge(&mut self, other: &VecStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        for i in 0..self.mean.len() {
            let d = other.mean[i] - self.mean[i];
            self.mean[i] += d * nb / n;
            self.m2[i] += other.m2[i] + d * d * na * nb / n;
        }
        self.count += other.count;
    }

    pub fn std_errors(&self) -> Vec<f64> {
        let c = self.count as f64;
        self.m2
            .iter()
            .map(|&s| {
                if self.count < 2 {
                    0.0
                } else {
                    (s / (c - 1.0) / c).sqrt()
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn serial_and_parallel_agree_bitwise() {
        let run = |exec| {
            chunked(
                5000,
                exec,
                ComplexStats::default(),
                |i| {
                    let mut r = sample_rng(42, i as u64);
                    Complex64::new(r.random::<f64>(), r.random::<f64>())
                },
                |a, x| a.push(x),
                |a, b| a.merge(&b),
            )
        };
        let s = run(Exec::Serial);
        let p = run(Exec::Parallel);
        assert_eq!(s.mean.re.to_bits(), p.mean.re.to_bits());
        assert_eq!(s.m2.to_bits(), p.m2.to_bits());
        assert_eq!(s.count, 5000);
    }

    #[test]
    fn merged_stats_match_direct() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut direct = ComplexStats::default();
        xs.iter().for_each(|&x| direct.push(Complex64::new(x, 0.0)));
        let mut a = ComplexStats::default();
        let mut b = ComplexStats::default();
        xs[..30].iter().for_each(|&x| a.push(Complex64::new(x, 0.0)));
        xs[30..].iter().for_each(|&x| b.push(Complex64::new(x, 0.0)));
        a.merge(&b);
        assert!((a.mean - direct.mean).norm() < 1e-14);
        assert!((a.m2 - direct.m2).abs() < 1e-12);
        let mean = xs.iter().sum::<f64>() / 100.0;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 99.0;
        assert!((direct.variance() - var).abs() < 1e-12);
    }
}
