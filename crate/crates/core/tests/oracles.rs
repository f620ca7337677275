//! Independent oracles: floating-point evaluation for the function rings and
//! naive one-letter-at-a-time rewriting for normal-form products.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use prcalc_core::random;
use prcalc_core::{ChartKind, ChartSpec, FunElem, GaussRat, NormalForm, VecElem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_c(c: &GaussRat) -> Complex64 {
    Complex64::new(c.re.to_f64().unwrap(), c.im.to_f64().unwrap())
}

fn eval(f: &FunElem, pt: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, c) in f.terms() {
        let basis = match f.chart().kind {
            ChartKind::Euclid => Complex64::new(e.iter().zip(pt).map(|(&k, &x)| x.powi(k)).product(), 0.0),
            ChartKind::Torus => Complex64::from_polar(1.0, e.iter().zip(pt).map(|(&k, &t)| k as f64 * t).sum()),
        };
        acc += to_c(c) * basis;
    }
    acc
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

fn point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect()
}

/// Central difference, fourth order.
fn num_derivative(f: &FunElem, pt: &[f64], i: usize) -> Complex64 {
    let h = 1e-3;
    let at = |s: f64| {
        let mut p = pt.to_vec();
        p[i] += s * h;
        eval(f, &p)
    };
    (at(-2.0) - at(-1.0) * 8.0 + at(1.0) * 8.0 - at(2.0)) / (12.0 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn function_ring_matches_pointwise_arithmetic(seed in any::<u64>(), torus in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = if torus { ChartSpec::torus(2) } else { ChartSpec::euclid(2) };
        let f = random::function(&mut rng, c, 3, 4);
        let g = random::function(&mut rng, c, 3, 4);
        for _ in 0..3 {
            let pt = point(&mut rng, 2);
            prop_assert!(close(eval(&(&f * &g), &pt), eval(&f, &pt) * eval(&g, &pt), 1e-9));
            prop_assert!(close(eval(&(&f + &g), &pt), eval(&f, &pt) + eval(&g, &pt), 1e-9));
            for i in 0..2 {
                prop_assert!(close(eval(&f.derive(i).unwrap(), &pt), num_derivative(&f, &pt, i), 1e-6));
            }
        }
    }

    #[test]
    fn vector_fields_act_as_derivations_numerically(seed in any::<u64>(), torus in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = if torus { ChartSpec::torus(2) } else { ChartSpec::euclid(2) };
        let v = random::vector(&mut rng, c, 2);
        let f = random::function(&mut rng, c, 3, 4);
        let pt = point(&mut rng, 2);
        let expected: Complex64 = (0..2).map(|i| eval(v.coeff(i), &pt) * num_derivative(&f, &pt, i)).sum();
        prop_assert!(close(eval(&v.apply(&f).unwrap(), &pt), expected, 1e-6));
    }

    #[test]
    fn products_match_naive_rewriting(seed in any::<u64>(), torus in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = if torus { ChartSpec::torus(2) } else { ChartSpec::euclid(2) };
        let a = random::normal_form(&mut rng, c, 3, 2);
        let b = random::normal_form(&mut rng, c, 3, 2);
        prop_assert_eq!(&a * &b, naive_product(&a, &b));
    }
}

type Terms = BTreeMap<(Vec<u32>, u32), FunElem>;

fn push(t: &mut Terms, key: (Vec<u32>, u32), f: FunElem) {
    let e = t.entry(key).or_insert_with(|| FunElem::zero(f.chart()));
    *e = &*e + &f;
}

/// `(f p^α z^a)(g p^β z^b)` by moving one momentum letter at a time past
/// the function with `pᵢ g = g pᵢ + z ∂ᵢg`.
fn naive_product(a: &NormalForm, b: &NormalForm) -> NormalForm {
    let c = a.chart();
    let mut out = NormalForm::zero(c);
    for (ka, f) in a.terms() {
        for (kb, g) in b.terms() {
            let mut cur: Terms = BTreeMap::new();
            push(&mut cur, (kb.momenta.clone(), kb.zpow), g.clone());
            let letters: Vec<usize> =
                ka.momenta.iter().enumerate().flat_map(|(i, &m)| std::iter::repeat_n(i, m as usize)).collect();
            for &i in letters.iter().rev() {
                let mut next = BTreeMap::new();
                for ((m, k), h) in cur {
                    let mut m2 = m.clone();
                    m2[i] += 1;
                    push(&mut next, (m2, k), h.clone());
                    let dh = h.derive(i).unwrap();
                    if !dh.is_zero() {
                        push(&mut next, (m, k + 1), dh);
                    }
                }
                cur = next;
            }
            for ((m, k), h) in cur {
                out = &out + &NormalForm::term(f * &h, m, k + ka.zpow);
            }
        }
    }
    out
}

#[test]
fn ring_examples() {
    let t = ChartSpec::circle();
    let cos = FunElem::cos(t, 0).unwrap();
    let sin = FunElem::sin(t, 0).unwrap();
    let half = FunElem::constant(t, GaussRat::frac(1, 2));
    let cos2 = &FunElem::fourier(t, 0, 2).unwrap().scale(&GaussRat::frac(1, 4))
        + &FunElem::fourier(t, 0, -2).unwrap().scale(&GaussRat::frac(1, 4));
    assert_eq!(&cos * &cos, &half + &cos2);

    let d = VecElem::frame(t, 0).unwrap();
    let cd = VecElem::rinehart(&cos, &d).unwrap();
    let sd = VecElem::rinehart(&sin, &d).unwrap();
    assert_eq!(cd.apply(&sin).unwrap(), &half + &cos2);
    assert_eq!(cd.bracket(&sd).unwrap(), d);

    let e = ChartSpec::euclid(1);
    let x = FunElem::coordinate(e, 0).unwrap();
    let p = NormalForm::momentum(e, 0).unwrap();
    let px2 = &p * &NormalForm::fun(&x * &x);
    assert_eq!(px2.to_string(), "x1^2*p1 + 2*x1*z");
    assert_eq!(px2, naive_product(&p, &NormalForm::fun(&x * &x)));
}
