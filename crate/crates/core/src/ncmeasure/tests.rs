use super::*;
use crate::ncseries::{words_of_degree, words_up_to};
use crate::pathsig::{signature, PlPath};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_moments(rng: &mut ChaCha8Rng, degree: usize) -> Component {
    Component::Moments(
        (0..degree)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

/// Independent oracle: expand every block as `μ + b°`, then repeatedly
/// rewrite the first adjacent pair of centered elements from the same
/// component with `b° b'° = (bb')° - μ b'° - μ' b° + (φ(bb') - μ μ')`.
/// Terms that reach an alternating centered product contribute 0.
fn brute_force(comps: &[Component], w: &Word) -> Complex64 {
    let phi = |c: u8, k: i32| comps[usize::from(c) - 1].moment(k).unwrap();
    // Each term: coefficient and a sequence of centered powers.
    let mut work: Vec<(Complex64, Vec<(u8, i32)>)> = vec![(c(1.0), Vec::new())];
    for &l in w.letters() {
        let mut next = Vec::new();
        for (coef, seq) in work {
            next.push((coef * phi(l, 1), seq.clone()));
            let mut s = seq;
            s.push((l, 1));
            next.push((coef, s));
        }
        work = next;
    }
    let mut total = c(0.0);
    while let Some((coef, seq)) = work.pop() {
        if coef == c(0.0) {
            continue;
        }
        let Some(j) = (1..seq.len()).find(|&j| seq[j - 1].0 == seq[j].0) else {
            if seq.is_empty() {
                total += coef;
            }
            continue;
        };
        let ((ca, ka), (_, kb)) = (seq[j - 1], seq[j]);
        let (head, tail) = (&seq[..j - 1], &seq[j + 1..]);
        let with = |mid: &[(u8, i32)]| [head, mid, tail].concat();
        let (ma, mb) = (phi(ca, ka), phi(ca, kb));
        if ka + kb != 0 {
            work.push((coef, with(&[(ca, ka + kb)])));
        }
        work.push((-coef * ma, with(&[(ca, kb)])));
        work.push((-coef * mb, with(&[(ca, ka)])));
        work.push((coef * (phi(ca, ka + kb) - ma * mb), with(&[])));
    }
    total
}

#[test]
fn recursion_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..5 {
        let comps: Vec<Component> = (0..3).map(|_| random_moments(&mut rng, 6)).collect();
        let tau = MomentFunctional::free_product(comps.clone()).unwrap();
        for w in words_up_to(3, 6) {
            let (a, b) = (tau.eval(&w).unwrap(), brute_force(&comps, &w));
            assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()), "{w}: {a} vs {b}");
        }
    }
}

#[test]
fn example_formulas_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let comps: Vec<Component> = (0..2).map(|_| random_moments(&mut rng, 6)).collect();
    let chi = MomentFunctional::free_product(comps.clone()).unwrap();
    let phi = MomentFunctional::free_product(vec![comps[0].clone()]).unwrap();
    let psi_f = MomentFunctional::free_product(vec![comps[1].clone()]).unwrap();
    // Random polynomials of degree <= 2 in one variable, relabelled as needed.
    let mut poly = |letter: u8| {
        let terms = (0..=2usize).map(|d| {
            (
                Word::new(vec![letter; d]),
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        });
        TruncSeries::from_terms(2, 8, terms).unwrap()
    };
    let a = poly(1);
    let b = poly(2);
    let a2 = poly(1);
    let b2 = poly(2);
    let relabel = |s: &TruncSeries| {
        TruncSeries::from_terms(1, 8, s.iter().map(|(w, c)| (Word::new(vec![1; w.degree()]), c))).unwrap()
    };
    let f = |s: &TruncSeries| phi.eval_poly(&relabel(s)).unwrap();
    let g = |s: &TruncSeries| psi_f.eval_poly(&relabel(s)).unwrap();
    let ev = |s: &TruncSeries| chi.eval_poly(s).unwrap();

    let ab = ev(&(&a * &b));
    assert!((ab - f(&a) * g(&b)).norm() < 1e-12);

    let abab = ev(&(&(&(&a * &b) * &a2) * &b2));
    let want = f(&(&a * &a2)) * g(&b) * g(&b2) + f(&a) * f(&a2) * g(&(&b * &b2)) - f(&a) * f(&a2) * g(&b) * g(&b2);
    assert!((abab - want).norm() < 1e-12, "{abab} vs {want}");
}

#[test]
fn free_gaussian_values() {
    let xi = MomentFunctional::free_gaussian(2).unwrap();
    assert_eq!(xi.eval(&Word::new([1, 1])).unwrap(), c(1.0));
    assert_eq!(xi.eval(&Word::new([1, 1, 1, 1])).unwrap(), c(3.0));
    assert_eq!(xi.eval(&Word::new([1, 2, 1, 2])).unwrap(), c(0.0));
    assert_eq!(xi.eval(&Word::new([1, 1, 2, 2])).unwrap(), c(1.0));
    assert_eq!(xi.eval(&Word::new([1, 1, 1, 1, 1, 1])).unwrap(), c(15.0));
    assert!(xi.is_normalized());
}

#[test]
fn free_semicircle_counts_noncrossing_pairings() {
    let s = MomentFunctional::free_semicircle(2, 8).unwrap();
    assert_eq!(s.eval(&Word::new([1, 1, 1, 1])).unwrap(), c(2.0));
    assert_eq!(s.eval(&Word::new([1, 1, 2, 2])).unwrap(), c(1.0));
    assert_eq!(s.eval(&Word::new([1, 2, 1, 2])).unwrap(), c(0.0));
    assert_eq!(s.eval(&Word::new([1, 2, 2, 1])).unwrap(), c(1.0));
    assert_eq!(s.eval(&Word::new([1, 1, 1, 1, 1, 1])).unwrap(), c(5.0));
    assert!(matches!(
        s.eval(&Word::new([1; 10])),
        Err(Error::MomentUnavailable { degree: 10, max: 8 })
    ));
}

#[test]
fn restriction_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let comps: Vec<Component> = (0..3).map(|_| random_moments(&mut rng, 5)).collect();
    let tau = MomentFunctional::free_product(comps.clone()).unwrap();
    for (i, comp) in comps.iter().enumerate() {
        for k in 0..=5 {
            let w = Word::new(vec![i as u8 + 1; k]);
            assert_eq!(tau.eval(&w).unwrap(), comp.moment(k as i32).unwrap());
        }
    }
}

#[test]
fn alternating_centered_products_vanish() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let comps: Vec<Component> = (0..2).map(|_| random_moments(&mut rng, 6)).collect();
    let tau = MomentFunctional::free_product(comps.clone()).unwrap();
    // Centered x_i^k: x_i^k - φ_i(x_i^k).
    let centered = |i: u8, k: usize| {
        let m = comps[usize::from(i) - 1].moment(k as i32).unwrap();
        TruncSeries::from_terms(2, 8, [(Word::new(vec![i; k]), c(1.0)), (Word::empty(), -m)]).unwrap()
    };
    let prod = &(&(&centered(1, 2) * &centered(2, 1)) * &centered(1, 1)) * &centered(2, 3);
    assert!(tau.eval_poly(&prod).unwrap().norm() < 1e-12);
    let prod = &(&centered(2, 2) * &centered(1, 3)) * &centered(2, 1);
    assert!(tau.eval_poly(&prod).unwrap().norm() < 1e-12);
}

#[test]
fn free_gaussian_is_positive() {
    let xi = MomentFunctional::free_gaussian(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for w in words_up_to(2, 3) {
        let ww = w.concat(&w.reversed());
        assert!(xi.eval(&ww).unwrap().re >= -1e-12);
    }
    for _ in 0..20 {
        // f f* for random real f; all letters self-adjoint.
        let f = TruncSeries::from_terms(2, 6, words_up_to(2, 3).map(|w| (w, c(rng.random_range(-1.0..1.0))))).unwrap();
        let fstar = TruncSeries::from_terms(2, 6, f.iter().map(|(w, c)| (w.reversed(), c.conj()))).unwrap();
        assert!(xi.eval_poly(&(&f * &fstar)).unwrap().re >= -1e-12);
    }
}

#[test]
fn haar_values_and_free_product_agree() {
    let haar = MomentFunctional::haar_free_product(2).unwrap();
    let circles = MomentFunctional::free_product(vec![Component::HaarCircle; 2]).unwrap();
    assert_eq!(
        haar.eval_group(&GroupWord::from_signed(&[1, 2, -2, -1])).unwrap(),
        c(1.0)
    );
    assert_eq!(
        haar.eval_group(&GroupWord::from_signed(&[1, 2, -1, -2])).unwrap(),
        c(0.0)
    );
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let len = rng.random_range(0..8);
        let raw: Vec<i32> = (0..len)
            .map(|_| if rng.random_bool(0.5) { 1 } else { -1 } * rng.random_range(1..=2))
            .collect();
        let g = GroupWord::from_signed(&raw);
        assert_eq!(haar.eval_group(&g).unwrap(), circles.eval_group(&g).unwrap(), "{raw:?}");
    }
}

#[test]
fn delta_values() {
    let d = MomentFunctional::delta_free_product(&[c(2.0), c(3.0)]).unwrap();
    assert_eq!(d.eval(&Word::new([1, 2, 1])).unwrap(), c(12.0));
    assert_eq!(
        d.eval_group(&GroupWord::from_signed(&[1, -2, 1])).unwrap(),
        c(4.0 / 3.0)
    );
    let z = MomentFunctional::delta_free_product(&[c(0.0)]).unwrap();
    assert!(z.eval_group(&GroupWord::from_signed(&[-1])).is_err());
}

#[test]
fn dual_ft_of_delta_is_character() {
    let a = [c(0.7), c(-1.1)];
    let d = MomentFunctional::delta_free_product(&a).unwrap();
    let p = PlPath::new(2, vec![vec![0.3, 0.1], vec![-0.2, 0.4], vec![0.1, -0.05]]).unwrap();
    let e = p.endpoint();
    let exact = Complex64::new(0.0, e[0] * a[0].re + e[1] * a[1].re).exp();
    let v = dual_ft(&d, &p, 10).unwrap();
    assert!((v - exact).norm() < 1e-8, "{v} {exact}");
    assert_eq!(dual_ft(&d, &PlPath::empty(2).unwrap(), 6).unwrap(), c(1.0));
    let g = GroupWord::from_signed(&[1, 2, -1]);
    let v = dual_ft_word(&d, &g, 14).unwrap();
    assert!((v - Complex64::new(0.0, -1.1).exp()).norm() < 1e-8);
}

#[test]
fn dual_ft_of_delta_j_is_iterated_integral() {
    let p = PlPath::new(2, vec![vec![1.0, 0.5], vec![-0.3, 0.8]]).unwrap();
    let sig = signature(&p, 4).unwrap();
    for j in words_of_degree(2, 3) {
        let v = dual_ft_series(&MomentFunctional::delta_j(j.clone()), &sig, c(1.0)).unwrap();
        assert_eq!(v, sig.coeff(&j));
    }
}

#[test]
fn dual_ft_degree_check() {
    let s = MomentFunctional::free_semicircle(1, 4).unwrap();
    let p = PlPath::new(1, vec![vec![0.5]]).unwrap();
    assert!(matches!(dual_ft(&s, &p, 6), Err(Error::MomentUnavailable { .. })));
    // Semicircle transform at t: Σ (it)^{2m} C_m / (2m)! = J_1(2t)/t.
    let v = dual_ft(&s, &p, 4).unwrap();
    assert!((v - c(1.0 - 0.125 + 2.0 * 0.5f64.powi(4) / 24.0)).norm() < 1e-15);
}

#[test]
fn pairing() {
    let f = TruncSeries::from_terms(2, 2, [(Word::new([1, 2]), c(1.0)), (Word::new([2, 1]), c(-1.0))]).unwrap();
    assert_eq!(
        MomentFunctional::delta_j(Word::new([1, 2])).eval_poly(&f).unwrap(),
        c(1.0)
    );
    let p = PlPath::new(2, vec![vec![0.4, 1.0], vec![0.2, -0.3]]).unwrap();
    let sig = signature(&p, 3).unwrap();
    let z1 = TruncSeries::generator(2, 1, 1).unwrap();
    assert!((pair(&z1, &sig).unwrap() - c(0.6)).norm() < 1e-15);
    // pair(f, exp(Σ a_i Z_i)) = Σ_w f[w] Π a_{w_k} / |w|!.
    let a = [c(0.3), c(-0.8)];
    let e = TruncSeries::linear(4, &a).unwrap().exp().unwrap();
    let g = TruncSeries::from_terms(2, 4, words_up_to(2, 4).enumerate().map(|(k, w)| (w, c(k as f64 * 0.1)))).unwrap();
    let mut want = c(0.0);
    for (w, coef) in g.iter() {
        let fact: f64 = (1..=w.degree()).map(|x| x as f64).product();
        want += coef
            * w.letters()
                .iter()
                .map(|&l| a[usize::from(l) - 1])
                .product::<Complex64>()
            / fact;
    }
    assert!((pair(&g, &e).unwrap() - want).norm() < 1e-13);
    assert!(pair(&g, &sig).is_err());
}

#[test]
fn convolution_unit_and_deltas() {
    let xi = MomentFunctional::free_gaussian(2).unwrap();
    let zero = MomentFunctional::delta_free_product(&[c(0.0), c(0.0)]).unwrap();
    let conv = convolve(&xi, &zero).unwrap();
    for w in words_up_to(2, 4) {
        assert_eq!(conv.eval(&w).unwrap(), xi.eval(&w).unwrap());
    }
    let da = MomentFunctional::delta_free_product(&[c(0.5), c(2.0)]).unwrap();
    let db = MomentFunctional::delta_free_product(&[c(-1.5), c(1.0)]).unwrap();
    let dab = MomentFunctional::delta_free_product(&[c(-1.0), c(3.0)]).unwrap();
    let conv = convolve(&da, &db).unwrap();
    for w in words_up_to(2, 4) {
        assert!((conv.eval(&w).unwrap() - dab.eval(&w).unwrap()).norm() < 1e-12);
    }
    assert!(convolve(&MomentFunctional::haar_free_product(1).unwrap(), &xi).is_err());
}

#[test]
fn convolution_multiplies_transforms() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let tau = MomentFunctional::free_product((0..2).map(|_| random_moments(&mut rng, 4)).collect()).unwrap();
    let sigma = MomentFunctional::free_gaussian(2).unwrap();
    let conv = convolve(&tau, &sigma).unwrap();
    for _ in 0..5 {
        let incs = (0..3)
            .map(|_| (0..2).map(|_| rng.random_range(-0.5..0.5)).collect())
            .collect();
        let p = PlPath::new(2, incs).unwrap();
        let sig = signature(&p, 4).unwrap();
        let i = Complex64::new(0.0, 1.0);
        // Compare at matching truncation: the product is truncated at degree 4.
        let ft = |m: &MomentFunctional| {
            TruncSeries::from_terms(
                2,
                4,
                sig.iter()
                    .map(|(w, s)| (w.clone(), s * i.powi(w.degree() as i32) * m.eval(&w).unwrap())),
            )
            .unwrap()
        };
        let lhs = dual_ft_series(&conv, &sig, i).unwrap();
        let (ft_t, ft_s) = (ft(&tau), ft(&sigma));
        // Degree-graded product of the two transforms.
        let mut rhs = c(0.0);
        for d in 0..=4 {
            for e in 0..=4 - d {
                let a: Complex64 = ft_t.iter_degree(d).map(|(_, x)| x).sum();
                let b: Complex64 = ft_s.iter_degree(e).map(|(_, x)| x).sum();
                rhs += a * b;
            }
        }
        assert!((lhs - rhs).norm() < 1e-12, "{lhs} {rhs}");
    }
}

#[test]
fn shuffle_and_deconcatenation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut path = || {
        let incs = (0..4)
            .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        PlPath::new(3, incs).unwrap()
    };
    let (p, q) = (path(), path());
    let (l, r) = shuffle_eval(&Word::new([1]), &Word::new([2]), &p, 4).unwrap();
    assert!((l - r).norm() < 1e-12);
    let (l, r) = shuffle_eval(&Word::new([1]), &Word::new([1]), &p, 4).unwrap();
    let sig = signature(&p, 2).unwrap();
    assert!((l - 2.0 * sig.coeff(&Word::new([1, 1]))).norm() < 1e-12);
    assert!((l - r).norm() < 1e-12);
    let (l, r) = shuffle_eval(&Word::new([1, 3]), &Word::new([2, 1, 2]), &p, 5).unwrap();
    assert!((l - r).norm() < 1e-10);
    let (l, r) = deconcatenation(&Word::new([1, 3, 2]), &p, &q, 4).unwrap();
    assert!((l - r).norm() < 1e-10);
    assert!(shuffle_eval(&Word::new([1, 2]), &Word::new([2, 1]), &p, 3).is_err());
}

#[test]
fn rule_parser() {
    let t = MomentFunctional::parse_rule("free(gauss, gauss, gauss)").unwrap();
    assert_eq!(t, MomentFunctional::free_gaussian(3).unwrap());
    assert_eq!(
        MomentFunctional::parse_rule("haar(2)").unwrap(),
        MomentFunctional::haar_free_product(2).unwrap()
    );
    assert_eq!(
        MomentFunctional::parse_rule("delta(1.5,-2)").unwrap(),
        MomentFunctional::delta_free_product(&[c(1.5), c(-2.0)]).unwrap()
    );
    let m = MomentFunctional::parse_rule("free(moments(0, 1, 0, 2), delta(0.5), haar-circle)").unwrap();
    assert_eq!(m.arity(), 3);
    assert_eq!(m.max_degree(), Some(4));
    for bad in [
        "",
        "free()",
        "free(gauss",
        "free(gauss))",
        "haar(0)",
        "haar(x)",
        "delta()",
        "free(bogus)",
        "nope(1)",
        "free(gauss(1))",
        "delta(nan)",
        "free(moments())",
        "free(gauss,,gauss)",
    ] {
        assert!(MomentFunctional::parse_rule(bad).is_err(), "{bad:?}");
    }
}

#[test]
fn table_parser() {
    let text = "# moments\ndim = 2\ndegree = 4\ne : 1\n1 1 : 1 0\n1 2 : 0.5 -0.25\n2 2 1 1 : 3\n";
    let t = MomentFunctional::parse_table(text).unwrap();
    assert_eq!(t.arity(), 2);
    assert_eq!(t.max_degree(), Some(4));
    assert!(t.is_normalized());
    assert_eq!(t.eval(&Word::new([1, 2])).unwrap(), Complex64::new(0.5, -0.25));
    assert_eq!(t.eval(&Word::new([2, 1])).unwrap(), c(0.0));
    assert!(t.eval(&Word::new([1; 5])).is_err());
    let inferred = MomentFunctional::parse_table("e : 1\n1 2 1 : 2").unwrap();
    assert_eq!((inferred.arity(), inferred.max_degree()), (2, Some(3)));
    for bad in [
        "1 : 1\n1 : 2",
        "1 : x",
        "1 1",
        "dim = 1\n2 : 1",
        "degree = 1\n1 1 : 1",
        "0 : 1",
        "1 : inf",
        "foo = 2",
    ] {
        assert!(MomentFunctional::parse_table(bad).is_err(), "{bad:?}");
    }
}

#[test]
fn letters_out_of_range() {
    let xi = MomentFunctional::free_gaussian(2).unwrap();
    assert!(matches!(xi.eval(&Word::new([3])), Err(Error::LetterOutOfRange { .. })));
    assert!(xi.eval_group(&GroupWord::from_signed(&[-1])).is_err());
    assert!(xi.eval(&Word::new([1; MAX_EVAL_DEGREE + 2])).is_err());
}
