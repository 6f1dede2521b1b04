use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::ncseries::{commutative_exp, commutativize, is_grouplike, words_up_to, TruncSeries, Word, DEFAULT_TOL};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_path(rng: &mut ChaCha8Rng, dim: usize, segs: usize) -> PlPath {
    let incs = (0..segs)
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    PlPath::new(dim, incs).unwrap()
}

fn exp_of(terms: &[(u8, f64)], dim: usize, cap: usize) -> TruncSeries {
    let mut s = TruncSeries::zero(dim, cap).unwrap();
    for &(i, a) in terms {
        s = &s + &TruncSeries::generator(dim, cap, i).unwrap().scale(c(a));
    }
    s.exp().unwrap()
}

#[test]
fn diagonal_segment() {
    let p = PlPath::new(2, vec![vec![1.0, 1.0]]).unwrap();
    let sig = signature(&p, 4).unwrap();
    assert!(sig.max_abs_diff(&exp_of(&[(1, 1.0), (2, 1.0)], 2, 4)) < 1e-14);
}

#[test]
fn staircase_order_convention() {
    // First-traversed segment is the leftmost factor.
    let h_then_v = PlPath::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let v_then_h = PlPath::new(2, vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let e1 = exp_of(&[(1, 1.0)], 2, 4);
    let e2 = exp_of(&[(2, 1.0)], 2, 4);
    assert!(signature(&h_then_v, 4).unwrap().max_abs_diff(&(&e1 * &e2)) < 1e-14);
    assert!(signature(&v_then_h, 4).unwrap().max_abs_diff(&(&e2 * &e1)) < 1e-14);
    let l_shape = signature(&h_then_v, 2).unwrap();
    assert_eq!(l_shape.coeff(&Word::new([1, 2])), c(1.0));
    assert_eq!(l_shape.coeff(&Word::new([2, 1])), c(0.0));
}

#[test]
fn unit_square_area() {
    let sq = PlPath::new(
        2,
        vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
    )
    .unwrap();
    let sig = signature(&sq, 2).unwrap();
    let diff = sig.coeff(&Word::new([1, 2])) - sig.coeff(&Word::new([2, 1]));
    assert!((diff.re - 2.0).abs() < 1e-14);
    assert!((levy_area(&sig, 1, 2) - 1.0).abs() < 1e-14);
    // Riemann oracle agrees on both orderings.
    let w12 = iterated_integral(&sq, &Word::new([1, 2]), 4096).unwrap();
    let w21 = iterated_integral(&sq, &Word::new([2, 1]), 4096).unwrap();
    assert!((0.5 * (w12 - w21) - 1.0).abs() < 1e-3);
}

#[test]
fn group_word_signatures() {
    let x1 = GroupWord::from_signed(&[1]);
    assert!(
        signature_word(&x1, 2, 4)
            .unwrap()
            .max_abs_diff(&exp_of(&[(1, 1.0)], 2, 4))
            < 1e-15
    );
    let w = GroupWord::from_signed(&[1, 2, -1]);
    let id = signature_word(&w.compose(&w.inverse()), 2, 4).unwrap();
    assert!(id.max_abs_diff(&TruncSeries::one(2, 4).unwrap()) < 1e-15);
    // Unreduced product w * w^{-1} also collapses to 1 algebraically.
    let raw = &signature_word(&w, 2, 4).unwrap() * &signature_word(&w.inverse(), 2, 4).unwrap();
    assert!(raw.max_abs_diff(&TruncSeries::one(2, 4).unwrap()) < 1e-14);
}

#[test]
fn commutator_word_at_cap_two() {
    // e^{Z1} e^{Z2} e^{-Z1} e^{-Z2} = 1 + [Z1, Z2] + O(3), expanded by hand.
    let w = GroupWord::from_signed(&[1, 2, -1, -2]);
    let sig = signature_word(&w, 2, 2).unwrap();
    let expected = TruncSeries::from_terms(
        2,
        2,
        [
            (Word::empty(), c(1.0)),
            (Word::new([1, 2]), c(1.0)),
            (Word::new([2, 1]), c(-1.0)),
        ],
    )
    .unwrap();
    assert!(sig.max_abs_diff(&expected) < 1e-15);
}

#[test]
fn word_signature_matches_lattice_path() {
    let w = GroupWord::from_signed(&[1, 2, 2, -1, 3, -2]);
    let by_word = signature_word(&w, 3, 5).unwrap();
    let by_path = signature(&w.to_path(3).unwrap(), 5).unwrap();
    assert!(by_word.max_abs_diff(&by_path) < 1e-13);
}

#[test]
fn degree_one_is_endpoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = random_path(&mut rng, 3, 7);
    let sig = signature(&p, 3).unwrap();
    for (i, e) in p.endpoint().iter().enumerate() {
        assert!((sig.coeff(&Word::letter(i as u8 + 1)).re - e).abs() < 1e-14);
        let oracle = iterated_integral(&p, &Word::letter(i as u8 + 1), 64).unwrap();
        assert!((oracle - e).abs() < 1e-12);
    }
}

#[test]
fn polygon_area_close_to_circle() {
    let p = PlPath::regular_polygon(1.0, 64).unwrap();
    let sig = signature(&p, 2).unwrap();
    let polygon_area = 32.0 * (2.0 * std::f64::consts::PI / 64.0).sin();
    assert!((levy_area(&sig, 1, 2) - polygon_area).abs() < 1e-12);
    assert!((levy_area(&sig, 1, 2) - std::f64::consts::PI).abs() < 6e-3);
    let w12 = iterated_integral(&p, &Word::new([1, 2]), 1 << 12).unwrap();
    let w21 = iterated_integral(&p, &Word::new([2, 1]), 1 << 12).unwrap();
    assert!((0.5 * (w12 - w21) - polygon_area).abs() < 1e-4);
}

#[test]
fn oracle_matches_signature_on_random_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let p = random_path(&mut rng, 2, 5);
        let sig = signature(&p, 3).unwrap();
        for w in words_up_to(2, 3).filter(|w| w.degree() > 0) {
            let oracle = iterated_integral(&p, &w, 1 << 12).unwrap();
            assert!((sig.coeff(&w).re - oracle).abs() < 1e-4, "{w}");
        }
    }
}

#[test]
fn oracle_guards() {
    let p = PlPath::new(2, vec![vec![1.0, 0.0]]).unwrap();
    assert!(iterated_integral(&p, &Word::new([1; 5]), 8).is_err());
    assert!(iterated_integral(&p, &Word::letter(3), 8).is_err());
    assert!(iterated_integral(&p, &Word::letter(1), 0).is_err());
    assert_eq!(
        iterated_integral(&PlPath::empty(2).unwrap(), &Word::empty(), 4).unwrap(),
        1.0
    );
}

#[test]
fn commutativized_signature_is_commutative_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = random_path(&mut rng, 3, 6);
    let got = commutativize(&signature(&p, 4).unwrap());
    let want = commutative_exp(&p.endpoint(), 4);
    for (alpha, v) in &want {
        let g = got.get(alpha).copied().unwrap_or_default();
        assert!((g - v).norm() < 1e-12, "{alpha:?}");
    }
}

#[test]
fn batch_signatures_preserve_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let paths: Vec<PlPath> = (0..16).map(|_| random_path(&mut rng, 2, 4)).collect();
    let batch = signatures(&paths, 3).unwrap();
    for (p, s) in paths.iter().zip(&batch) {
        assert_eq!(&signature(p, 3).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn chen_identity(seed in any::<u64>(), a in 1usize..5, b in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_path(&mut rng, 3, a);
        let q = random_path(&mut rng, 3, b);
        let lhs = signature(&p.concat(&q).unwrap(), 5).unwrap();
        let rhs = &signature(&p, 5).unwrap() * &signature(&q, 5).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn inverse_path_gives_inverse_series(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_path(&mut rng, 2, 4);
        let sig = signature(&p, 4).unwrap();
        prop_assert!(signature(&p.invert(), 4).unwrap().max_abs_diff(&sig.inv().unwrap()) < 1e-10);
        prop_assert!(is_grouplike(&sig, DEFAULT_TOL));
    }

    #[test]
    fn reparametrization_invariance(seed in any::<u64>(), k in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_path(&mut rng, 2, 3);
        let a = signature(&p, 5).unwrap();
        let b = signature(&p.subdivide(k), 5).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
    }
}
