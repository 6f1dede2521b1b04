//! Agreement between independently implemented modules.

use ncft::freelie::{bch, LieElement};
use ncft::matfun::{eval_exact_path, eval_exact_word, eval_trunc, CMatrix, MatrixTuple};
use ncft::mc::Exec;
use ncft::ncmeasure::MomentFunctional;
use ncft::ncseries::{Word, DEFAULT_TOL};
use ncft::pathsig::{signature, signature_word, GroupWord, PlPath};
use ncft::rmt::{gue_word_moments, haar_coefficients, LaurentPoly};
use ncft::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_tuple(rng: &mut ChaCha8Rng, dim: usize, order: usize, size: f64) -> MatrixTuple {
    MatrixTuple::new(
        (0..dim)
            .map(|_| {
                CMatrix::from_fn(order, order, |_, _| {
                    Complex64::new(rng.random_range(-size..size), rng.random_range(-size..size))
                })
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn truncated_signature_approximates_exact_holonomy() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let i = Complex64::new(0.0, 1.0);
    for _ in 0..5 {
        let incs = (0..3)
            .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .collect();
        let p = PlPath::new(2, incs).unwrap();
        let t = small_tuple(&mut rng, 2, 3, 0.05);
        let exact = eval_exact_path(&p, &t, i).unwrap();
        let approx = eval_trunc(&signature(&p, 8).unwrap(), &t, i).unwrap();
        assert!(exact.distance(&approx) < 1e-12, "{}", exact.distance(&approx));
    }
}

#[test]
fn word_signature_matches_lattice_path_holonomy() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = GroupWord::parse("1 2 -1 1 -2 -2").unwrap();
    let t = small_tuple(&mut rng, 2, 2, 0.05);
    let one = Complex64::new(1.0, 0.0);
    let exact = eval_exact_word(&g, &t, one).unwrap();
    let approx = eval_trunc(&signature_word(&g, 2, 8).unwrap(), &t, one).unwrap();
    assert!(exact.distance(&approx) < 1e-11);
}

#[test]
fn log_signature_of_two_steps_is_bch() {
    let cap = 5;
    let log = signature_word(&GroupWord::parse("1 2").unwrap(), 2, cap)
        .unwrap()
        .log()
        .unwrap();
    let lie = LieElement::from_series(&log, DEFAULT_TOL).unwrap();
    let x = LieElement::generator(2, cap, 1).unwrap();
    let y = LieElement::generator(2, cap, 2).unwrap();
    let h = bch(&x, &y).unwrap();
    assert!(lie.to_series().max_abs_diff(&h.to_series()) < 1e-12);
}

#[test]
fn haar_estimates_approach_free_haar_functional() {
    // f = X1 X2 + 2 X1^-1: coefficients of f at γ are the free Haar values τ(f X^{-γ}).
    let terms = vec![
        (GroupWord::parse("1 2").unwrap(), Complex64::new(1.0, 0.0)),
        (GroupWord::parse("-1").unwrap(), Complex64::new(2.0, 0.0)),
    ];
    let f = LaurentPoly::new(terms.clone());
    let gammas: Vec<GroupWord> = ["1 2", "-1", "e", "2 1", "1 -2"]
        .iter()
        .map(|s| GroupWord::parse(s).unwrap())
        .collect();
    let tau = MomentFunctional::haar_free_product(2).unwrap();
    let reps = haar_coefficients(&f, &gammas, 16, 4000, 3, Exec::Parallel).unwrap();
    for (g, r) in gammas.iter().zip(reps) {
        let exact: Complex64 = terms
            .iter()
            .map(|(w, c)| c * tau.eval_group(&w.compose(&g.inverse())).unwrap())
            .sum();
        assert!(r.within(exact, 3.0, 0.05), "{g}: {} vs {exact}", r.value);
    }
}

#[test]
fn gue_moments_approach_free_semicircle() {
    let words: Vec<Word> = [
        vec![1, 2, 2, 1],
        vec![1, 1, 1, 1, 1, 1],
        vec![1, 2, 1, 1, 2, 1],
        vec![1, 1, 1],
    ]
    .into_iter()
    .map(Word::new)
    .collect();
    let sc = MomentFunctional::free_semicircle(2, 8).unwrap();
    let reps = gue_word_moments(&words, 32, 200, 4, Exec::Parallel).unwrap();
    for (w, r) in words.iter().zip(reps) {
        let t = sc.eval(w).unwrap();
        assert!(r.within(t, 3.0, 0.15), "{w}: {} vs {t}", r.value);
    }
}
