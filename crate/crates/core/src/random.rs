//! Seeded generators for property checks.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chart::{ChartKind, ChartSpec};
use crate::free::{FreeElem, FreeLiePoisson};
use crate::fun::FunElem;
use crate::normal::NormalForm;
use crate::scalar::GaussRat;
use crate::vector::VecElem;

/// Independent stream for one trial of one suite.
pub fn trial_rng(seed: u64, suite: &str, trial: u64) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&h.to_le_bytes());
    key[16..24].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational<R: Rng>(rng: &mut R) -> BigRational {
    let d = rng.gen_range(1..=3);
    let mut n = rng.gen_range(-4..=4);
    if n == 0 {
        n = 1;
    }
    rat(n, d)
}

/// Nonzero Gaussian rational; purely real when `complex` is false.
pub fn scalar<R: Rng>(rng: &mut R, complex: bool) -> GaussRat {
    let re = rational(rng);
    if complex && rng.gen_bool(0.5) {
        let im = rational(rng);
        if rng.gen_bool(0.3) {
            GaussRat::new(BigRational::zero(), im)
        } else {
            GaussRat::new(re, im)
        }
    } else {
        GaussRat::real(re)
    }
}

/// Random function of degree at most `degree` with up to `max_terms` terms.
pub fn function<R: Rng>(rng: &mut R, chart: ChartSpec, degree: u32, max_terms: usize) -> FunElem {
    let n = rng.gen_range(1..=max_terms);
    let d = degree as i32;
    let complex = chart.kind == ChartKind::Torus;
    let terms = (0..n).map(|_| {
        let exps: Vec<i32> = match chart.kind {
            ChartKind::Euclid => {
                let mut budget = rng.gen_range(0..=d);
                (0..chart.dim)
                    .map(|_| {
                        let e = rng.gen_range(0..=budget);
                        budget -= e;
                        e
                    })
                    .collect()
            }
            ChartKind::Torus => (0..chart.dim).map(|_| rng.gen_range(-d..=d)).collect(),
        };
        (exps, scalar(rng, complex))
    });
    FunElem::from_terms(chart, terms.collect::<Vec<_>>()).expect("well-formed exponents")
}

pub fn vector<R: Rng>(rng: &mut R, chart: ChartSpec, degree: u32) -> VecElem {
    let coeffs = (0..chart.dim)
        .map(|_| if rng.gen_bool(0.25) { FunElem::zero(chart) } else { function(rng, chart, degree, 2) })
        .collect();
    VecElem::from_coeffs(chart, coeffs).expect("coefficients on the chart")
}

/// Random normal form with p-degree `≤ p_degree`, function degree `≤ f_degree`
/// and z-power at most one.
pub fn normal_form<R: Rng>(rng: &mut R, chart: ChartSpec, p_degree: u32, f_degree: u32) -> NormalForm {
    let n = rng.gen_range(1..=3);
    let mut out = NormalForm::zero(chart);
    for _ in 0..n {
        let mut budget = rng.gen_range(0..=p_degree);
        let momenta = (0..chart.dim)
            .map(|_| {
                let e = rng.gen_range(0..=budget);
                budget -= e;
                e
            })
            .collect();
        let zpow = u32::from(rng.gen_bool(0.25));
        let f = function(rng, chart, f_degree, 2);
        out = &out + &NormalForm::term(f, momenta, zpow);
    }
    out
}

/// Jacobi-valid three-dimensional structure constants from a random class
/// `(N, a)` with `N` symmetric and `N·a = 0`.
pub fn three_dim_algebra<R: Rng>(rng: &mut R) -> Arc<FreeLiePoisson> {
    let small = |rng: &mut R| rat(rng.gen_range(-2..=2), 1);
    let a: [BigRational; 3] = if rng.gen_bool(0.4) {
        [BigRational::zero(), BigRational::zero(), BigRational::zero()]
    } else {
        [small(rng), small(rng), small(rng)]
    };
    let mut n: [[BigRational; 3]; 3] = Default::default();
    for _ in 0..2 {
        let r = [small(rng), small(rng), small(rng)];
        // project onto the plane orthogonal to a by a cross product
        let u = if a.iter().all(Zero::is_zero) {
            r
        } else {
            [
                &a[1] * &r[2] - &a[2] * &r[1],
                &a[2] * &r[0] - &a[0] * &r[2],
                &a[0] * &r[1] - &a[1] * &r[0],
            ]
        };
        let s = small(rng);
        for i in 0..3 {
            for j in 0..3 {
                n[i][j] += &s * &u[i] * &u[j];
            }
        }
    }
    FreeLiePoisson::three_dim(n, a).expect("orthogonal class satisfies Jacobi")
}

/// Random element with words of length `≤ max_len`.
pub fn free_elem<R: Rng>(rng: &mut R, ctx: &Arc<FreeLiePoisson>, max_len: usize, max_terms: usize) -> FreeElem {
    let n = rng.gen_range(1..=max_terms);
    let mut out = FreeElem::zero(ctx);
    for _ in 0..n {
        let len = rng.gen_range(1..=max_len);
        let w = (0..len).map(|_| rng.gen_range(0..ctx.dim()) as u8).collect();
        out = &out + &FreeElem::word(ctx, w, scalar(rng, false));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = trial_rng(7, "dvf", 3).gen();
        let b: u64 = trial_rng(7, "dvf", 3).gen();
        let c: u64 = trial_rng(7, "dvf", 4).gen();
        let d: u64 = trial_rng(7, "jordan", 3).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn generated_elements_respect_bounds() {
        let mut rng = trial_rng(1, "bounds", 0);
        for chart in [ChartSpec::euclid(2), ChartSpec::torus(2)] {
            for _ in 0..50 {
                let nf = normal_form(&mut rng, chart, 2, 2);
                assert!(nf.p_degree() <= 2);
                assert!(nf.fun_degree() <= 2);
                assert!(nf.z_degree() <= 1);
            }
        }
    }

    #[test]
    fn random_algebras_are_valid() {
        let mut rng = trial_rng(2, "algebras", 0);
        for _ in 0..30 {
            assert_eq!(three_dim_algebra(&mut rng).dim(), 3);
        }
    }
}
