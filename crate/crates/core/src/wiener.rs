//! Brownian paths, their chord (Stratonovich) signatures, Monte Carlo
//! expected signatures, and checks on the Heisenberg group `G_{2,2}`.
//!
//! The Stratonovich signature of a Brownian path sampled at level `q` is the
//! exact signature of its dyadic piecewise-linear interpolation.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::mc::{self, ComplexStats, Exec, VecStats};
use crate::ncseries::dense::{DenseTensor, Scratch};
use crate::ncseries::{gaussian_like, word_count, words_up_to, TruncSeries, Word};
use crate::pathsig::PlPath;

pub const MAX_LEVEL: u32 = 16;
pub const MAX_STRAT_CAP: usize = 6;
pub const MAX_DIM: usize = 8;
/// Bound on `paths * 2^q * (number of words)` for Monte Carlo runs.
pub const MAX_WORK: f64 = 1e11;

/// `V = GAVEAU_V_SCALE * v`: the heat-kernel formula's central coordinate in
/// units of the Lévy area `v`.
pub const GAVEAU_V_SCALE: f64 = 4.0;
/// Weight of `v^2` in Folland's kernel `((y1^2 + y2^2)^2 + c v^2)^{-1/2}`.
pub const FOLLAND_V_WEIGHT: f64 = 16.0;
/// Largest quadrature change tolerated between a run and its refinement.
pub const QUAD_TOL: f64 = 1e-6;

/// Brownian motion on `[0, 1]` sampled at the dyadic times `k 2^{-q}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BrownianPath {
    n: usize,
    q: u32,
    values: Vec<f64>,
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn check_nq(n: usize, q: u32) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Guard(format!("dimension {n} outside 1..={MAX_DIM}")));
    }
    if q == 0 || q > MAX_LEVEL {
        return Err(Error::Guard(format!("dyadic level {q} outside 1..={MAX_LEVEL}")));
    }
    Ok(())
}

impl BrownianPath {
    /// Samples by summing independent `N(0, 2^{-q} I)` increments.
    pub fn from_rng<R: Rng + ?Sized>(n: usize, q: u32, rng: &mut R) -> Result<Self> {
        check_nq(n, q)?;
        let steps = 1usize << q;
        let sd = (1.0 / steps as f64).sqrt();
        let mut values = vec![0.0; (steps + 1) * n];
        for k in 1..=steps {
            for i in 0..n {
                values[k * n + i] = values[(k - 1) * n + i] + sd * normal(rng);
            }
        }
        Ok(BrownianPath { n, q, values })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> u32 {
        self.q
    }

    /// Number of sample points, `2^q + 1`.
    pub fn len(&self) -> usize {
        self.values.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at time `k 2^{-q}`.
    pub fn point(&self, k: usize) -> &[f64] {
        &self.values[k * self.n..(k + 1) * self.n]
    }

    pub fn endpoint(&self) -> &[f64] {
        self.point(self.len() - 1)
    }

    /// Inserts Brownian-bridge midpoints: the same underlying path at level `q + 1`.
    pub fn refine<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<BrownianPath> {
        check_nq(self.n, self.q + 1)?;
        let n = self.n;
        let sd = (0.25 / (1u64 << self.q) as f64).sqrt();
        let mut values = Vec::with_capacity((2 * self.len() - 1) * n);
        values.extend_from_slice(self.point(0));
        for k in 1..self.len() {
            let (a, b) = (self.point(k - 1), self.point(k));
            values.extend((0..n).map(|i| 0.5 * (a[i] + b[i]) + sd * normal(rng)));
            values.extend_from_slice(b);
        }
        Ok(BrownianPath {
            n,
            q: self.q + 1,
            values,
        })
    }

    /// The chord path as a [`PlPath`].
    pub fn to_pl_path(&self) -> PlPath {
        let incs = (1..self.len())
            .map(|k| {
                self.point(k)
                    .iter()
                    .zip(self.point(k - 1))
                    .map(|(b, a)| b - a)
                    .collect()
            })
            .collect();
        PlPath::new(self.n, incs).expect("finite increments")
    }

    fn chord_signature(&self, cap: usize, scratch: &mut Scratch) -> DenseTensor {
        let mut sig = DenseTensor::one(self.n, cap).expect("shape checked");
        let mut inc = vec![0.0; self.n];
        for k in 1..self.len() {
            for (i, d) in inc.iter_mut().enumerate() {
                *d = self.values[k * self.n + i] - self.values[(k - 1) * self.n + i];
            }
            sig.mul_segment_exp(&inc, scratch);
        }
        sig
    }
}

pub fn sample_brownian(n: usize, q: u32, seed: u64) -> Result<BrownianPath> {
    BrownianPath::from_rng(n, q, &mut mc::sample_rng(seed, 0))
}

fn check_cap(cap: usize) -> Result<()> {
    if cap > MAX_STRAT_CAP {
        return Err(Error::Guard(format!(
            "Stratonovich signatures limited to cap {MAX_STRAT_CAP}"
        )));
    }
    Ok(())
}

pub fn stratonovich_signature(p: &BrownianPath, cap: usize) -> Result<TruncSeries> {
    check_cap(cap)?;
    Ok(p.chord_signature(cap, &mut Scratch::default()).to_series())
}

fn check_work(paths: usize, q: u32, n: usize, cap: usize) -> Result<()> {
    if paths == 0 {
        return Err(Error::InvalidArgument("at least one path required".into()));
    }
    let work = paths as f64 * (1u64 << q) as f64 * word_count(n, cap) as f64;
    if work > MAX_WORK {
        return Err(Error::Guard(format!(
            "Monte Carlo work {work:.3e} exceeds {MAX_WORK:.0e}"
        )));
    }
    Ok(())
}

/// Every guard a signature-valued Monte Carlo run checks, without running it.
pub fn check_budget(n: usize, cap: usize, q: u32, paths: usize) -> Result<()> {
    check_nq(n, q)?;
    check_cap(cap)?;
    check_work(paths, q, n, cap)
}

/// Coefficient-wise Monte Carlo mean of a signature-valued sample.
#[derive(Clone, Debug, PartialEq)]
pub struct SignatureEstimate {
    pub dim: usize,
    pub cap: usize,
    /// Words in degree-lexicographic order, matching `mean` and `std_error`.
    pub words: Vec<Word>,
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    pub paths: usize,
}

impl SignatureEstimate {
    fn from_stats(dim: usize, cap: usize, stats: &VecStats) -> Self {
        SignatureEstimate {
            dim,
            cap,
            words: words_up_to(dim, cap).collect(),
            mean: stats.mean.clone(),
            std_error: stats.std_errors(),
            paths: stats.count as usize,
        }
    }

    fn index(&self, w: &Word) -> Option<usize> {
        if w.degree() > self.cap || usize::from(w.max_letter()) > self.dim {
            return None;
        }
        let offset: u64 = (0..w.degree()).map(|k| (self.dim as u64).pow(k as u32)).sum();
        Some((offset + w.lex_index(self.dim)) as usize)
    }

    pub fn coeff(&self, w: &Word) -> f64 {
        self.index(w).map_or(0.0, |i| self.mean[i])
    }

    pub fn se(&self, w: &Word) -> f64 {
        self.index(w).map_or(0.0, |i| self.std_error[i])
    }

    pub fn to_series(&self) -> TruncSeries {
        TruncSeries::from_terms(
            self.dim,
            self.cap,
            self.words
                .iter()
                .cloned()
                .zip(self.mean.iter().map(|&x| Complex64::new(x, 0.0))),
        )
        .expect("words within shape")
    }
}

/// Monte Carlo estimate of `E[S(b)]` at time 1; the target is
/// `exp(½ Σ Z_j^2)` truncated at `cap`.
pub fn expected_signature(
    n: usize,
    cap: usize,
    q: u32,
    paths: usize,
    seed: u64,
    exec: Exec,
) -> Result<SignatureEstimate> {
    check_nq(n, q)?;
    check_cap(cap)?;
    check_work(paths, q, n, cap)?;
    let len = word_count(n, cap) as usize;
    let stats = mc::chunked(
        paths,
        exec,
        VecStats::new(len),
        |i| {
            let p = BrownianPath::from_rng(n, q, &mut mc::sample_rng(seed, i as u64)).expect("checked");
            p.chord_signature(cap, &mut Scratch::default())
        },
        |acc, sig| acc.push(sig.flat()),
        |acc, part| acc.merge(&part),
    );
    Ok(SignatureEstimate::from_stats(n, cap, &stats))
}

/// Truncation of `exp(t/2 · Σ Z_j^2)`, the expected signature at time `t`.
pub fn gaussian_target(n: usize, cap: usize, t: f64) -> Result<TruncSeries> {
    gaussian_like(n, cap, 0.5 * t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductCheck {
    /// `E[S(b)] · E[S(b')]` from two independent batches.
    pub product_of_means: TruncSeries,
    /// `E[S(b) S(b')]`, the expected signature of the concatenated path.
    pub concatenated: SignatureEstimate,
}

impl ProductCheck {
    /// Largest `|lhs - rhs| / se` over words with a nonzero standard error,
    /// and the largest absolute gap over the remaining words.
    pub fn worst(&self) -> (f64, f64) {
        let mut z: f64 = 0.0;
        let mut gap: f64 = 0.0;
        for (k, w) in self.concatenated.words.iter().enumerate() {
            let d = (self.product_of_means.coeff(w).re - self.concatenated.mean[k]).abs();
            let se = self.concatenated.std_error[k];
            if se > 0.0 {
                z = z.max(d / se);
            } else {
                gap = gap.max(d);
            }
        }
        (z, gap)
    }
}

/// Heat-semigroup check: for independent pairs `(b_i, b'_i)`, the mean of
/// `S(b_i) S(b'_i)` against the product of the two batch means.
pub fn product_check(n: usize, cap: usize, q: u32, paths: usize, seed: u64, exec: Exec) -> Result<ProductCheck> {
    check_nq(n, q)?;
    check_cap(cap)?;
    check_work(2 * paths, q, n, cap)?;
    let len = word_count(n, cap) as usize;
    let (a, b, ab) = mc::chunked(
        paths,
        exec,
        (VecStats::new(len), VecStats::new(len), VecStats::new(len)),
        |i| {
            let mut rng = mc::sample_rng(seed, i as u64);
            let mut scratch = Scratch::default();
            let p = BrownianPath::from_rng(n, q, &mut rng).expect("checked");
            let p2 = BrownianPath::from_rng(n, q, &mut rng).expect("checked");
            let s = p.chord_signature(cap, &mut scratch);
            let s2 = p2.chord_signature(cap, &mut scratch);
            let prod = s.mul(&s2);
            (s, s2, prod)
        },
        |acc, (s, s2, prod)| {
            acc.0.push(s.flat());
            acc.1.push(s2.flat());
            acc.2.push(prod.flat());
        },
        |acc, part| {
            acc.0.merge(&part.0);
            acc.1.merge(&part.1);
            acc.2.merge(&part.2);
        },
    );
    let ea = SignatureEstimate::from_stats(n, cap, &a).to_series();
    let eb = SignatureEstimate::from_stats(n, cap, &b).to_series();
    Ok(ProductCheck {
        product_of_means: ea.checked_mul(&eb)?,
        concatenated: SignatureEstimate::from_stats(n, cap, &ab),
    })
}

/// Exponential coordinates on the Heisenberg group: endpoint `(y1, y2)` and
/// Lévy area `v`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HeisenbergPoint {
    pub y1: f64,
    pub y2: f64,
    pub v: f64,
}

impl HeisenbergPoint {
    pub fn new(y1: f64, y2: f64, v: f64) -> Self {
        HeisenbergPoint { y1, y2, v }
    }
}

fn project_dense(sig: &DenseTensor) -> HeisenbergPoint {
    let l1 = sig.level(1);
    let l2 = sig.level(2);
    HeisenbergPoint {
        y1: l1[0],
        y2: l1[1],
        v: 0.5 * (l2[1] - l2[2]),
    }
}

/// Projects a planar path to `G_{2,2}`: `v` is the `[Z1, Z2]` coordinate of
/// the log-signature, `½(S_12 - S_21)`.
pub fn heisenberg_projection(p: &BrownianPath) -> Result<HeisenbergPoint> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: 2,
        });
    }
    Ok(project_dense(&p.chord_signature(2, &mut Scratch::default())))
}

/// Same projection for a piecewise-linear path.
pub fn heisenberg_projection_pl(p: &PlPath) -> Result<HeisenbergPoint> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: 2,
        });
    }
    Ok(project_dense(&crate::pathsig::signature_dense(p, 2)?))
}

/// Trapezoid parameters for the heat-kernel quadrature: `τ ∈ [-t, t]` with
/// `steps` intervals per half-line, `V ∈ [-4t, 4t]` likewise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub t: f64,
    pub steps: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { t: 10.0, steps: 2000 }
    }
}

/// `τ`-integrand after the Gaussian `y`-integral:
/// `(2τ / sinh 2τ) · π tanh(2τ) / (2τ)`.
fn gaveau_tau_weight(tau: f64) -> f64 {
    if tau == 0.0 {
        return std::f64::consts::PI;
    }
    let x = 2.0 * tau;
    (x / x.sinh()) * std::f64::consts::PI * x.tanh() / x
}

fn trapezoid_weights(steps: usize) -> impl Iterator<Item = (usize, f64)> {
    (0..=steps).map(move |k| (k, if k == 0 || k == steps { 0.5 } else { 1.0 }))
}

/// Characteristic function `∫ e^{iλV} p(V) dV` of the `V`-marginal of the
/// kernel, at each `λ`; the density `p(V)` is itself a `τ`-trapezoid.
fn gaveau_cf_raw(lambdas: &[f64], quad: Quadrature) -> Vec<f64> {
    let ht = quad.t / quad.steps as f64;
    let taus: Vec<(f64, f64)> = trapezoid_weights(quad.steps)
        .map(|(k, w)| (k as f64 * ht, w * gaveau_tau_weight(k as f64 * ht)))
        .collect();
    let vmax = 4.0 * quad.t;
    let hv = vmax / quad.steps as f64;
    let norm = 1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    let mut out = vec![0.0; lambdas.len()];
    for (k, wv) in trapezoid_weights(quad.steps) {
        let v = k as f64 * hv;
        // Both integrands are even, so integrate over the half-lines.
        let p = norm * 2.0 * ht * taus.iter().map(|&(tau, w)| w * (tau * v).cos()).sum::<f64>();
        for (o, l) in out.iter_mut().zip(lambdas) {
            *o += 2.0 * hv * wv * p * (l * v).cos();
        }
    }
    out
}

/// Normalized kernel characteristic function at each `λ`, and the largest
/// change against a run with doubled range and halved steps.
pub fn gaveau_cf(lambdas: &[f64], quad: Quadrature) -> Result<(Vec<f64>, f64)> {
    if !(quad.t > 0.0 && quad.t.is_finite()) || quad.steps < 2 {
        return Err(Error::InvalidArgument("quadrature needs t > 0 and steps >= 2".into()));
    }
    let mut with_zero = vec![0.0];
    with_zero.extend_from_slice(lambdas);
    let coarse = gaveau_cf_raw(&with_zero, quad);
    let fine = gaveau_cf_raw(
        &with_zero,
        Quadrature {
            t: 2.0 * quad.t,
            steps: 4 * quad.steps,
        },
    );
    let change = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a / coarse[0] - b / fine[0]).abs())
        .fold(0.0, f64::max);
    if change > QUAD_TOL {
        return Err(Error::Quadrature { change });
    }
    Ok((fine[1..].iter().map(|x| x / fine[0]).collect(), change))
}

/// Total mass of the kernel as printed (before normalization).
pub fn gaveau_mass(quad: Quadrature) -> f64 {
    gaveau_cf_raw(&[0.0], quad)[0]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatRow {
    pub lambda: f64,
    pub empirical: Complex64,
    pub std_error: f64,
    pub kernel: f64,
}

impl HeatRow {
    pub fn discrepancy(&self) -> f64 {
        (self.empirical - self.kernel).norm()
    }

    /// `|empirical - kernel| <= max(k·se, rel·|kernel|)`.
    pub fn passes(&self, k: f64, rel: f64) -> bool {
        self.discrepancy() <= (k * self.std_error).max(rel * self.kernel.abs())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeatCheck {
    /// Empirical side uses `E[exp(iλ · GAVEAU_V_SCALE · v)]`.
    pub rows: Vec<HeatRow>,
    /// Same comparison with the literal scale 1.
    pub literal: Vec<HeatRow>,
    /// Scale `s` minimizing `Σ_λ |E[exp(iλ s v)] - kernel(λ)|^2`.
    pub best_scale: f64,
    pub quad_change: f64,
}

fn empirical_cf(vs: &[f64], lambda: f64) -> (Complex64, f64) {
    let mut s = ComplexStats::default();
    for &v in vs {
        s.push(Complex64::from_polar(1.0, lambda * v));
    }
    (s.mean, s.std_error())
}

/// Compares the empirical characteristic function of the Lévy area with the
/// heat-kernel formula's `V`-marginal.
pub fn heisenberg_heat_check(
    lambdas: &[f64],
    paths: usize,
    q: u32,
    seed: u64,
    quad: Quadrature,
    exec: Exec,
) -> Result<HeatCheck> {
    check_nq(2, q)?;
    check_work(paths, q, 2, 2)?;
    let (kernel, quad_change) = gaveau_cf(lambdas, quad)?;
    let vs = mc::chunked(
        paths,
        exec,
        Vec::new(),
        |i| {
            let p = BrownianPath::from_rng(2, q, &mut mc::sample_rng(seed, i as u64)).expect("checked");
            project_dense(&p.chord_signature(2, &mut Scratch::default())).v
        },
        |acc: &mut Vec<f64>, v| acc.push(v),
        |acc, part| acc.extend(part),
    );
    let rows_at = |scale: f64| -> Vec<HeatRow> {
        lambdas
            .iter()
            .zip(&kernel)
            .map(|(&lambda, &k)| {
                let (empirical, std_error) = empirical_cf(&vs, lambda * scale);
                HeatRow {
                    lambda,
                    empirical,
                    std_error,
                    kernel: k,
                }
            })
            .collect()
    };
    let loss = |s: f64| {
        lambdas
            .iter()
            .zip(&kernel)
            .filter(|(l, _)| **l != 0.0)
            .map(|(&l, &k)| (empirical_cf(&vs, l * s).0 - k).norm_sqr())
            .sum::<f64>()
    };
    Ok(HeatCheck {
        rows: rows_at(GAVEAU_V_SCALE),
        literal: rows_at(1.0),
        best_scale: minimize_scale(loss),
        quad_change,
    })
}

/// Log-grid scan over `[1/4, 16]` followed by golden-section refinement.
fn minimize_scale(f: impl Fn(f64) -> f64) -> f64 {
    let grid: Vec<f64> = (0..=96).map(|k| 0.25 * 2f64.powf(k as f64 / 16.0)).collect();
    let best = (0..grid.len())
        .min_by(|&a, &b| f(grid[a]).total_cmp(&f(grid[b])))
        .expect("nonempty grid");
    let (mut lo, mut hi) = (grid[best.saturating_sub(1)], grid[(best + 1).min(grid.len() - 1)]);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    0.5 * (lo + hi)
}

/// Folland's fundamental solution `(1/π)((y1^2 + y2^2)^2 + 16 v^2)^{-1/2}`.
pub fn folland_kernel(p: HeisenbergPoint) -> f64 {
    let r2 = p.y1 * p.y1 + p.y2 * p.y2;
    1.0 / (std::f64::consts::PI * (r2 * r2 + FOLLAND_V_WEIGHT * p.v * p.v).sqrt())
}

/// Homogeneous norm `((y1^2 + y2^2)^2 + 16 v^2)^{1/4}`.
pub fn homogeneous_norm(p: HeisenbergPoint) -> f64 {
    let r2 = p.y1 * p.y1 + p.y2 * p.y2;
    (r2 * r2 + FOLLAND_V_WEIGHT * p.v * p.v).powf(0.25)
}

/// Flows of the left-invariant fields `L1 = ∂y1 - (y2/2)∂v`, `L2 = ∂y2 + (y1/2)∂v`.
fn flow(p: HeisenbergPoint, field: usize, t: f64) -> HeisenbergPoint {
    match field {
        0 => HeisenbergPoint::new(p.y1 + t, p.y2, p.v - 0.5 * t * p.y2),
        _ => HeisenbergPoint::new(p.y1, p.y2 + t, p.v + 0.5 * t * p.y1),
    }
}

/// Relative residual `|(L1^2 + L2^2) g| / (|L1^2 g| + |L2^2 g|)` at each
/// point, by second differences along the field flows.
pub fn folland_residuals(points: &[HeisenbergPoint], h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    points
        .iter()
        .map(|&p| {
            let rho = homogeneous_norm(p);
            if !rho.is_finite() || rho < 100.0 * h {
                return Err(Error::InvalidArgument(format!(
                    "point ({}, {}, {}) too close to the origin for step {h}",
                    p.y1, p.y2, p.v
                )));
            }
            let g0 = folland_kernel(p);
            let second =
                |field| (folland_kernel(flow(p, field, h)) - 2.0 * g0 + folland_kernel(flow(p, field, -h))) / (h * h);
            let (a, b) = (second(0), second(1));
            Ok((a + b).abs() / (a.abs() + b.abs()))
        })
        .collect()
}

/// Eight points away from the origin where neither field's second
/// derivative of the kernel vanishes, so the relative residual is meaningful.
pub fn folland_grid() -> Vec<HeisenbergPoint> {
    [
        (1.0, 0.0, 0.0),
        (0.3, 1.0, 0.25),
        (1.0, 1.0, 0.5),
        (-1.0, 0.5, 0.25),
        (0.5, -1.0, -0.5),
        (1.0, -1.0, 1.0),
        (2.0, 0.5, -1.0),
        (-0.5, -1.5, 0.75),
    ]
    .into_iter()
    .map(|(a, b, c)| HeisenbergPoint::new(a, b, c))
    .collect()
}

pub fn folland_harmonicity(points: &[HeisenbergPoint], h: f64) -> Result<f64> {
    Ok(folland_residuals(points, h)?.into_iter().fold(0.0, f64::max))
}
