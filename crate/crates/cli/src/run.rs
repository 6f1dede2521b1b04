//! One function per experiment, each producing a [`Table`].

use std::f64::consts::PI;
use std::path::Path;

use ncft::freelie::{bch, lyndon_basis, LieElement};
use ncft::matfun::{amitsur_levitsky, CMatrix};
use ncft::mc::{sample_rng, Exec};
use ncft::ncmeasure::{deconcatenation, shuffle_eval, MomentFunctional, MAX_EVAL_DEGREE};
use ncft::ncseries::{words_up_to, Word};
use ncft::pathsig::{signature, GroupWord, PlPath};
use ncft::rmt::{
    gue_word_moments, haar_coefficient, haar_coefficients, jacobian_exp_map, matrix_fourier_coeff, unitary_volume,
    Spectral,
};
use ncft::wiener::{
    expected_signature, folland_grid, folland_residuals, gaussian_target, gaveau_mass, heisenberg_heat_check, HeatRow,
    GAVEAU_V_SCALE,
};
use ncft::Complex64;
use rand::Rng;

use crate::config::{ExperimentConfig, MomentSource, Plan, ScalarFn};
use crate::output::{Cell, Table};
use crate::CliError;

/// A finished table, plus the reason a deterministic check failed, if one did.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub failure: Option<String>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome { table, failure: None }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

/// Runs the experiment described by `cfg`. The data never depends on `exec`.
pub fn execute(cfg: &ExperimentConfig, exec: Exec) -> Result<Outcome, CliError> {
    let seed = cfg.seed;
    match &cfg.plan {
        Plan::Sig { input, cap } => sig(input, *cap),
        Plan::Bch { n, degree } => bch_table(*n, *degree).map(Into::into),
        Plan::Basis { n, degree } => basis(*n, *degree).map(Into::into),
        Plan::ShuffleCheck { n, cap, segments, tol } => shuffle_check(*n, *cap, *segments, *tol, seed),
        Plan::WienerExpsig { n, cap, q, paths } => {
            let est = expected_signature(*n, *cap, *q, *paths, seed, exec)?;
            let target = gaussian_target(*n, *cap, 1.0)?;
            let mut t = Table::new(&["word", "estimate_re", "estimate_im", "target", "std_error"]);
            for (k, w) in est.words.iter().enumerate() {
                t.push(vec![
                    w.to_string().into(),
                    est.mean[k].into(),
                    0.0.into(),
                    target.coeff(w).re.into(),
                    est.std_error[k].into(),
                ]);
            }
            Ok(t.into())
        }
        Plan::HeisHeat {
            lambdas,
            q,
            paths,
            quad,
            se_mult,
            rel_tol,
        } => {
            let check = heisenberg_heat_check(lambdas, *paths, *q, seed, *quad, exec)?;
            let mut t = Table::new(&[
                "lambda",
                "scale",
                "empirical",
                "empirical_im",
                "kernel",
                "se",
                "within_band",
            ]);
            let mut push = |rows: &[HeatRow], scale: f64| {
                for r in rows {
                    t.push(vec![
                        r.lambda.into(),
                        scale.into(),
                        r.empirical.re.into(),
                        r.empirical.im.into(),
                        r.kernel.into(),
                        r.std_error.into(),
                        r.passes(*se_mult, *rel_tol).into(),
                    ]);
                }
            };
            push(&check.rows, GAVEAU_V_SCALE);
            push(&check.literal, 1.0);
            t.note("best_fit_scale", crate::output::fmt_float(check.best_scale));
            t.note("quadrature_change", crate::output::fmt_float(check.quad_change));
            t.note("kernel_mass", crate::output::fmt_float(gaveau_mass(*quad)));
            Ok(t.into())
        }
        Plan::Folland { h, tol } => folland(*h, *tol),
        Plan::HaarCoeff {
            f,
            gammas,
            size,
            samples,
        } => {
            let reps = haar_coefficients(f, gammas, *size, *samples, seed, exec)?;
            let mut t = Table::new(&[
                "experiment",
                "gamma",
                "N",
                "samples",
                "seed",
                "value_re",
                "value_im",
                "std_error",
                "exact",
            ]);
            for (g, r) in gammas.iter().zip(reps) {
                // Exact coefficient: sum of the coefficients of monomials equal to g.
                let exact: Complex64 = f.terms().iter().filter(|(w, _)| w == g).map(|(_, c)| *c).sum();
                t.push(vec![
                    "haar-coeff".into(),
                    g.to_string().into(),
                    (*size).into(),
                    (*samples).into(),
                    seed.to_string().into(),
                    r.value.re.into(),
                    r.value.im.into(),
                    r.std_error.into(),
                    exact.re.into(),
                ]);
            }
            Ok(t.into())
        }
        Plan::HaarOrth { gamma, sizes, samples } => {
            let f = ncft::rmt::LaurentPoly::new(vec![(gamma.clone(), Complex64::new(1.0, 0.0))]);
            let mut t = Table::new(&[
                "experiment",
                "gamma",
                "N",
                "samples",
                "seed",
                "value_re",
                "value_im",
                "std_error",
                "abs_value",
                "decays",
            ]);
            let mut prev: Option<f64> = None;
            let mut monotone = true;
            for &n in sizes {
                // E tr(X^γ) is the identity-coefficient of X^γ.
                let r = haar_coefficient(&f, &GroupWord::identity(), n, *samples, seed, exec)?;
                let a = r.value.norm();
                let decays = prev.map(|p| a < p);
                monotone &= decays.unwrap_or(true);
                t.push(vec![
                    "haar-orth".into(),
                    gamma.to_string().into(),
                    n.into(),
                    (*samples).into(),
                    seed.to_string().into(),
                    r.value.re.into(),
                    r.value.im.into(),
                    r.std_error.into(),
                    a.into(),
                    decays.map_or(Cell::Empty, Cell::Bool),
                ]);
                prev = Some(a);
            }
            t.note("monotone_decay", monotone);
            Ok(t.into())
        }
        Plan::GueMoments { words, size, samples } => {
            let reps = gue_word_moments(words, *size, *samples, seed, exec)?;
            let arity = words
                .iter()
                .map(|w| usize::from(w.max_letter()))
                .max()
                .unwrap_or(1)
                .max(1);
            let semicircle = MomentFunctional::free_semicircle(arity, MAX_EVAL_DEGREE)?;
            let literal = MomentFunctional::free_gaussian(arity)?;
            let mut t = Table::new(&[
                "experiment",
                "word",
                "N",
                "samples",
                "seed",
                "value_re",
                "value_im",
                "std_error",
                "free_semicircle",
                "literal_xi",
            ]);
            for (w, r) in words.iter().zip(reps) {
                t.push(vec![
                    "gue-moments".into(),
                    w.to_string().into(),
                    (*size).into(),
                    (*samples).into(),
                    seed.to_string().into(),
                    r.value.re.into(),
                    r.value.im.into(),
                    r.std_error.into(),
                    semicircle.eval(w)?.re.into(),
                    literal.eval(w)?.re.into(),
                ]);
            }
            Ok(t.into())
        }
        Plan::FreeMoments { source, degree } => {
            let tau = match source {
                MomentSource::Rule(m) => m.clone(),
                MomentSource::Table(p) => MomentFunctional::parse_table(&read(p)?)?,
            };
            let n = tau.arity().max(1);
            ncft::ncseries::TruncSeries::zero(n, *degree)?;
            let mut t = Table::new(&["word", "re", "im"]);
            for w in words_up_to(n, *degree) {
                let v = tau.eval(&w)?;
                t.push(vec![w.to_string().into(), v.re.into(), v.im.into()]);
            }
            Ok(t.into())
        }
        Plan::MatrixFourier {
            function,
            ks,
            size,
            samples,
        } => {
            let f = *function;
            let spectral = Spectral {
                variable: 0,
                arity: 1,
                f: move |z: f64| Complex64::new(f.eval(z), 0.0),
            };
            let mut t = Table::new(&[
                "experiment",
                "k",
                "N",
                "samples",
                "seed",
                "value_re",
                "value_im",
                "std_error",
                "redraws",
                "quadrature",
            ]);
            for &k in ks {
                let gamma = GroupWord::from_signed(&vec![k.signum(); k.unsigned_abs() as usize]);
                let r = matrix_fourier_coeff(&spectral, &gamma, *size, *samples, seed, exec)?;
                let quad = if *size == 1 {
                    Cell::Float(classical_coefficient(f, k))
                } else {
                    Cell::Empty
                };
                t.push(vec![
                    "matrix-fourier".into(),
                    k.into(),
                    (*size).into(),
                    (*samples).into(),
                    seed.to_string().into(),
                    r.report.value.re.into(),
                    r.report.value.im.into(),
                    r.report.std_error.into(),
                    r.redraws.into(),
                    quad,
                ]);
            }
            t.note("jacobian_at_zero", jacobian_exp_map(&vec![0.0; *size]));
            t.note("unitary_volume", crate::output::fmt_float(unitary_volume(*size)));
            Ok(t.into())
        }
        Plan::AlIdentity {
            size,
            trials,
            input,
            tol,
        } => al_identity(*size, *trials, input.as_deref(), *tol, seed),
    }
}

fn sig(input: &Path, cap: usize) -> Result<Outcome, CliError> {
    let paths = PlPath::parse_file(&read(input)?)?;
    if paths.is_empty() {
        return Err(CliError::Config(format!("{} holds no paths", input.display())));
    }
    let mut t = Table::new(&["path", "word", "re", "im"]);
    for (k, p) in paths.iter().enumerate() {
        let s = signature(p, cap)?;
        for w in words_up_to(p.dim(), cap) {
            let c = s.coeff(&w);
            t.push(vec![(k + 1).into(), w.to_string().into(), c.re.into(), c.im.into()]);
        }
    }
    Ok(t.into())
}

/// `log(exp Z1 exp Z2)` in Lyndon coordinates.
fn bch_table(n: usize, degree: usize) -> Result<Table, CliError> {
    let z1 = LieElement::generator(n, degree, 1)?;
    let z2 = LieElement::generator(n, degree, 2)?;
    let c = bch(&z1, &z2)?;
    let mut t = Table::new(&["degree", "lyndon_word", "bracketing", "coefficient"]);
    for e in &lyndon_basis(n, degree)?.elements {
        let v = c.coord(&e.word);
        t.push(vec![
            e.word.degree().into(),
            e.word.to_string().into(),
            e.bracketing.clone().into(),
            v.re.into(),
        ]);
    }
    Ok(t)
}

fn basis(n: usize, degree: usize) -> Result<Table, CliError> {
    let mut t = Table::new(&["degree", "lyndon_word", "bracketing"]);
    for e in &lyndon_basis(n, degree)?.elements {
        t.push(vec![
            e.word.degree().into(),
            e.word.to_string().into(),
            e.bracketing.clone().into(),
        ]);
    }
    Ok(t)
}

fn random_path(n: usize, segments: usize, seed: u64, index: u64) -> Result<PlPath, CliError> {
    let mut rng = sample_rng(seed, index);
    let incs = (0..segments)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    Ok(PlPath::new(n, incs)?)
}

fn shuffle_check(n: usize, cap: usize, segments: usize, tol: f64, seed: u64) -> Result<Outcome, CliError> {
    let p = random_path(n, segments, seed, 0)?;
    let q = random_path(n, segments, seed, 1)?;
    let mut t = Table::new(&["identity", "j", "k", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_diff"]);
    let mut worst: f64 = 0.0;
    let mut row = |t: &mut Table, id: &str, j: &Word, k: Option<&Word>, lhs: Complex64, rhs: Complex64| {
        let d = (lhs - rhs).norm();
        worst = worst.max(d / lhs.norm().max(1.0));
        t.push(vec![
            id.into(),
            j.to_string().into(),
            k.map_or(Cell::Empty, |k| k.to_string().into()),
            lhs.re.into(),
            lhs.im.into(),
            rhs.re.into(),
            rhs.im.into(),
            d.into(),
        ]);
    };
    let words: Vec<Word> = words_up_to(n, cap).filter(|w| w.degree() > 0).collect();
    for j in &words {
        for k in words.iter().filter(|k| j.degree() + k.degree() <= cap) {
            let (lhs, rhs) = shuffle_eval(j, k, &p, cap)?;
            row(&mut t, "shuffle", j, Some(k), lhs, rhs);
        }
    }
    for j in &words {
        let (lhs, rhs) = deconcatenation(j, &p, &q, cap)?;
        row(&mut t, "deconcatenation", j, None, lhs, rhs);
    }
    t.note("max_relative_diff", crate::output::fmt_float(worst));
    let failure = (worst > tol).then(|| format!("identity residual {worst:e} above {tol:e}"));
    Ok(Outcome { table: t, failure })
}

fn folland(h: f64, tol: f64) -> Result<Outcome, CliError> {
    let points = folland_grid();
    let coarse = folland_residuals(&points, h)?;
    let fine = folland_residuals(&points, 0.5 * h)?;
    let mut t = Table::new(&["y1", "y2", "v", "residual", "residual_half_step", "ratio"]);
    let mut failure = None;
    for ((p, &a), &b) in points.iter().zip(&coarse).zip(&fine) {
        let ratio = a / b;
        if a > tol || !(3.0..=5.0).contains(&ratio) {
            failure.get_or_insert(format!(
                "residual {a:e} (ratio {ratio:.3}) at ({}, {}, {})",
                p.y1, p.y2, p.v
            ));
        }
        t.push(vec![
            p.y1.into(),
            p.y2.into(),
            p.v.into(),
            a.into(),
            b.into(),
            ratio.into(),
        ]);
    }
    Ok(Outcome { table: t, failure })
}

/// `(1/2π) ∫_{-π}^{π} f(θ) e^{-ikθ} dθ` by composite Simpson; the imaginary
/// part vanishes for the even functions offered.
fn classical_coefficient(f: ScalarFn, k: i32) -> f64 {
    let m = 1 << 14;
    let h = 2.0 * PI / m as f64;
    let mut acc = 0.0;
    for j in 0..=m {
        let th = -PI + j as f64 * h;
        let w = if j == 0 || j == m {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * f.eval(th) * (k as f64 * th).cos();
    }
    acc * h / 3.0 / (2.0 * PI)
}

fn al_identity(size: usize, trials: usize, input: Option<&Path>, tol: f64, seed: u64) -> Result<Outcome, CliError> {
    let tuples: Vec<Vec<CMatrix>> = match input {
        Some(p) => {
            let mats = CMatrix::parse_many(&read(p)?)?;
            if mats.len() != 2 * size || mats.iter().any(|m| m.order() != size) {
                return Err(CliError::Config(format!(
                    "{} must hold {} matrices of order {size}",
                    p.display(),
                    2 * size
                )));
            }
            vec![mats]
        }
        None => (0..trials as u64)
            .map(|i| {
                let mut rng = sample_rng(seed, i);
                (0..2 * size)
                    .map(|_| {
                        CMatrix::from_fn(size, size, |_, _| {
                            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                        })
                    })
                    .collect()
            })
            .collect(),
    };
    let mut t = Table::new(&["trial", "input_scale", "norm", "relative"]);
    let mut failure = None;
    for (i, mats) in tuples.iter().enumerate() {
        let scale: f64 = mats.iter().map(CMatrix::frobenius_norm).product();
        let norm = amitsur_levitsky(mats)?.frobenius_norm();
        let rel = if scale > 0.0 { norm / scale } else { norm };
        if rel > tol {
            failure.get_or_insert(format!("trial {}: relative norm {rel:e} above {tol:e}", i + 1));
        }
        t.push(vec![(i + 1).into(), scale.into(), norm.into(), rel.into()]);
    }
    Ok(Outcome { table: t, failure })
}
