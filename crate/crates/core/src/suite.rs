//! Seeded property suites behind `prcalc check`.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chart::ChartSpec;
use crate::classical::ClassicalSymbol;
use crate::error::{Error, Result};
use crate::free::{self, FreeElem, FreeLiePoisson, LieEnvVerdict};
use crate::fun::FunElem;
use crate::normal::NormalForm;
use crate::quantum::{self, RepConfig};
use crate::random;
use crate::report::{Record, Report, Verdict};
use crate::scalar::GaussRat;
use crate::scheme::{self, PartitionScheme};
use crate::vector::VecElem;

pub const SUITES: &[&str] = &[
    "lr-axioms",
    "dvf",
    "z-divisibility",
    "theorem1",
    "jordan",
    "quantum-lr",
    "classical-hom",
    "rep-interior",
    "twist",
    "involution",
    "free-defect",
    "lie-env",
];

const BOTH: &str = "euclid:2,torus:2";

fn charts() -> [ChartSpec; 2] {
    [ChartSpec::euclid(2), ChartSpec::torus(2)]
}

/// Anchor and chart label of a suite.
pub fn describe(name: &str) -> Result<(&'static str, &'static str)> {
    Ok(match name {
        "lr-axioms" => (
            "Lie-Rinehart axioms: {u,{v,w}} + cyclic = 0, f∘(g∘v) = (fg)∘v, {v, f∘w} = v(f)∘w + f∘{v,w}; \
             bracket is Leibniz in both slots and satisfies Jacobi",
            BOTH,
        ),
        "dvf" => ("[A,B]{C,D} = {A,B}[C,D]", BOTH),
        "z-divisibility" => ("[A,B] = z·{A,B}", BOTH),
        "theorem1" => ("Z = Σ [qᵢ, gᵢ∘wᵢ] equals z, is central and antihermitian", "torus:1,torus:2,euclid:n"),
        "jordan" => ("image(f∘v) = ½(f·image(v) + image(v)·f)", BOTH),
        "quantum-lr" => ("[v, w] = z·{v,w} and [v, f] = z·v(f) on images", BOTH),
        "classical-hom" => ("z = 0 projection preserves products and brackets", BOTH),
        "rep-interior" => ("π(A)π(B) = π(AB) and π(A*) = π(A)† on the interior block", "torus:1"),
        "twist" => ("twisted circle representations are equivalent iff α − α′ ∈ ℤ", "torus:1"),
        "involution" => ("(AB)* = B*A*, A** = A, {A,B}* = {A*,B*}", BOTH),
        "free-defect" => ("{AB,CD} expanded in either slot first differs by {A,C}[B,D] − [A,C]{B,D}", "free"),
        "lie-env" => ("[A,B]·Z₁ = λ·{A,B}·Z₂ with Z₁ the Killing quadratic and Z₂ the structure cubic", "free"),
        _ => return Err(Error::UnknownSuite(name.to_string())),
    })
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eng<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn lr_axioms(rng: &mut ChaCha8Rng) -> Check {
    for c in charts() {
        let (u, v, w) = (random::vector(rng, c, 3), random::vector(rng, c, 3), random::vector(rng, c, 3));
        let (f, g) = (random::function(rng, c, 2, 3), random::function(rng, c, 2, 3));
        let jac = &(&eng(u.bracket(&eng(v.bracket(&w))?))? + &eng(v.bracket(&eng(w.bracket(&u))?))?)
            + &eng(w.bracket(&eng(u.bracket(&v))?))?;
        ensure(jac.is_zero(), || format!("{c}: field Jacobi fails for {u} | {v} | {w}"))?;
        let lhs = eng(VecElem::rinehart(&f, &eng(VecElem::rinehart(&g, &v))?))?;
        ensure(lhs == eng(VecElem::rinehart(&(&f * &g), &v))?, || format!("{c}: f∘(g∘v) for f = {f}, g = {g}"))?;
        let lhs = eng(v.bracket(&eng(VecElem::rinehart(&f, &w))?))?;
        let rhs = &eng(VecElem::rinehart(&eng(v.apply(&f))?, &w))? + &eng(VecElem::rinehart(&f, &eng(v.bracket(&w))?))?;
        ensure(lhs == rhs, || format!("{c}: {{v, f∘w}} for v = {v}, f = {f}, w = {w}"))?;
        let op = eng(eng(v.bracket(&w))?.apply(&g))?;
        let direct = &eng(v.apply(&eng(w.apply(&g))?))? - &eng(w.apply(&eng(v.apply(&g))?))?;
        ensure(op == direct, || format!("{c}: bracket as commutator of derivations at g = {g}"))?;
        ensure(eng(v.apply(&FunElem::one(c)))?.is_zero(), || format!("{c}: v(1) ≠ 0"))?;

        let (a, b, d) = (
            random::normal_form(rng, c, 2, 2),
            random::normal_form(rng, c, 1, 2),
            random::normal_form(rng, c, 1, 2),
        );
        let br = |x: &NormalForm, y: &NormalForm| eng(x.poisson_bracket(y));
        let jac = &(&br(&a, &br(&b, &d)?)? + &br(&b, &br(&d, &a)?)?) + &br(&d, &br(&a, &b)?)?;
        ensure(jac.is_zero(), || format!("{c}: Jacobi fails for {a} | {b} | {d}"))?;
        let right = &(&br(&a, &b)? * &d) + &(&b * &br(&a, &d)?);
        ensure(br(&a, &(&b * &d))? == right, || format!("{c}: right Leibniz for {a} | {b} | {d}"))?;
        let left = &(&a * &br(&b, &d)?) + &(&br(&a, &d)? * &b);
        ensure(br(&(&a * &b), &d)? == left, || format!("{c}: left Leibniz for {a} | {b} | {d}"))?;
        ensure(br(&a, &b)? == -&br(&b, &a)?, || format!("{c}: antisymmetry for {a} | {b}"))?;
    }
    Ok(String::new())
}

fn dvf(rng: &mut ChaCha8Rng) -> Check {
    for c in charts() {
        let q: Vec<NormalForm> = (0..4).map(|_| random::normal_form(rng, c, 1, 2)).collect();
        let lhs = &eng(q[0].commutator(&q[1]))? * &eng(q[2].poisson_bracket(&q[3]))?;
        let rhs = &eng(q[0].poisson_bracket(&q[1]))? * &eng(q[2].commutator(&q[3]))?;
        ensure(lhs == rhs, || format!("{c}: A = {}, B = {}, C = {}, D = {}", q[0], q[1], q[2], q[3]))?;
    }
    Ok(String::new())
}

fn z_divisibility(rng: &mut ChaCha8Rng) -> Check {
    for c in charts() {
        let a = random::normal_form(rng, c, 2, 2);
        let b = random::normal_form(rng, c, 2, 2);
        let comm = eng(a.commutator(&b))?;
        let q = comm.divide_z().map_err(|e| format!("{c}: [{a}, {b}]: {e}"))?;
        ensure(q == eng(a.poisson_bracket(&b))?, || format!("{c}: [A,B]/z ≠ {{A,B}} for A = {a}, B = {b}"))?;
    }
    Ok(String::new())
}

fn jordan(rng: &mut ChaCha8Rng) -> Check {
    for c in charts() {
        let f = random::function(rng, c, 2, 3);
        let v = random::vector(rng, c, 2);
        let img = NormalForm::from_vector(&v);
        let ff = NormalForm::fun(f.clone());
        let sym = (&(&ff * &img) + &(&img * &ff)).scale(&GaussRat::frac(1, 2));
        ensure(eng(NormalForm::from_rinehart(&f, &v))? == sym, || format!("{c}: f = {f}, v = {v}"))?;
    }
    Ok(String::new())
}

fn quantum_lr(rng: &mut ChaCha8Rng) -> Check {
    for c in charts() {
        let (v, w) = (random::vector(rng, c, 2), random::vector(rng, c, 2));
        let f = random::function(rng, c, 2, 3);
        let (iv, iw) = (NormalForm::from_vector(&v), NormalForm::from_vector(&w));
        let lhs = eng(iv.commutator(&iw))?;
        ensure(lhs == NormalForm::from_vector(&eng(v.bracket(&w))?).mul_z(1), || format!("{c}: [v, w] for v = {v}, w = {w}"))?;
        let lhs = eng(iv.commutator(&NormalForm::fun(f.clone())))?;
        ensure(lhs == NormalForm::fun(eng(v.apply(&f))?).mul_z(1), || format!("{c}: [v, f] for v = {v}, f = {f}"))?;
    }
    Ok(String::new())
}

fn classical_hom(rng: &mut ChaCha8Rng) -> Check {
    for c in charts() {
        let a = random::normal_form(rng, c, 2, 2);
        let b = random::normal_form(rng, c, 2, 2);
        let (pa, pb) = (ClassicalSymbol::project(&a), ClassicalSymbol::project(&b));
        ensure(ClassicalSymbol::project(&(&a * &b)) == eng(pa.try_mul(&pb))?, || format!("{c}: product for {a} | {b}"))?;
        let cb = eng(pa.bracket(&pb))?;
        ensure(ClassicalSymbol::project(&eng(a.poisson_bracket(&b))?) == cb, || format!("{c}: bracket for {a} | {b}"))?;
        let dirac = ClassicalSymbol::project(&eng(eng(a.commutator(&b))?.divide_z())?);
        ensure(dirac == cb, || format!("{c}: [A,B]/z at z = 0 for {a} | {b}"))?;
    }
    Ok(String::new())
}

fn involution(rng: &mut ChaCha8Rng) -> Check {
    for c in charts() {
        let a = random::normal_form(rng, c, 2, 2);
        let b = random::normal_form(rng, c, 2, 2);
        ensure(a.involution().involution() == a, || format!("{c}: A** ≠ A for {a}"))?;
        ensure((&a * &b).involution() == &b.involution() * &a.involution(), || format!("{c}: (AB)* for {a} | {b}"))?;
        let lhs = eng(a.poisson_bracket(&b))?.involution();
        ensure(lhs == eng(a.involution().poisson_bracket(&b.involution()))?, || format!("{c}: {{A,B}}* for {a} | {b}"))?;
    }
    Ok(String::new())
}

fn rep_interior(rng: &mut ChaCha8Rng, trial: u64) -> Check {
    let t = ChartSpec::circle();
    let alpha = if trial.is_multiple_of(2) { BigRational::from_integer(0.into()) } else { BigRational::new(1.into(), 3.into()) };
    let cfg = eng(RepConfig::new(16, alpha, BigRational::from_integer(BigInt::from(1))))?;
    let a = random::normal_form(rng, t, 2, 3);
    let b = random::normal_form(rng, t, 2, 3);
    match eng(quantum::rep_interior_check(&a, &b, &cfg))? {
        quantum::InteriorVerdict::Exact => {}
        quantum::InteriorVerdict::Mismatch(m) => return Err(format!("α = {}: A = {a}, B = {b}: {m}", cfg.alpha)),
    }
    let v = random::vector(rng, t, 3);
    let f = random::function(rng, t, 3, 3);
    let (pf, pv) = (eng(quantum::quantum_rep(&NormalForm::fun(f.clone()), &cfg))?, eng(quantum::quantum_rep(&NormalForm::from_vector(&v), &cfg))?);
    let rhs = eng(quantum::quantum_rep(&NormalForm::fun(eng(v.apply(&f))?).mul_z(1), &cfg))?;
    let radius = eng(quantum::interior_radius(&cfg, 3))?;
    if let Some(m) = pv.commutator(&pf).interior_mismatch(&rhs, radius) {
        return Err(format!("[π(v), π(f)] for v = {v}, f = {f}: {m}"));
    }
    match eng(quantum::adjoint_check(&a, &cfg))? {
        quantum::InteriorVerdict::Exact => Ok(format!("α = {}", cfg.alpha)),
        quantum::InteriorVerdict::Mismatch(m) => Err(format!("adjoint of {a}: {m}")),
    }
}

fn free_defect(rng: &mut ChaCha8Rng) -> Check {
    let ctx = random::three_dim_algebra(rng);
    let e: Vec<FreeElem> = (0..4).map(|_| random::free_elem(rng, &ctx, 2, 2)).collect();
    let d = eng(free::dvf_defect(&e[0], &e[1], &e[2], &e[3]))?;
    ensure(d.holds(), || format!("A = {}, B = {}, C = {}, D = {}", e[0], e[1], e[2], e[3]))?;
    Ok(String::new())
}

type TrialFn = fn(&mut ChaCha8Rng, u64) -> Check;

fn trial_fn(name: &str) -> Option<TrialFn> {
    Some(match name {
        "lr-axioms" => |r, _| lr_axioms(r),
        "dvf" => |r, _| dvf(r),
        "z-divisibility" => |r, _| z_divisibility(r),
        "jordan" => |r, _| jordan(r),
        "quantum-lr" => |r, _| quantum_lr(r),
        "classical-hom" => |r, _| classical_hom(r),
        "involution" => |r, _| involution(r),
        "rep-interior" => rep_interior,
        "free-defect" => |r, _| free_defect(r),
        _ => return None,
    })
}

fn record_from(name: String, anchor: &str, check: Check) -> Record {
    match check {
        Ok(w) => Record::new(name, anchor, Verdict::Pass, w),
        Err(w) => Record::new(name, anchor, Verdict::Fail, w),
    }
}

fn timed(timings: bool, f: impl FnOnce() -> Record) -> Record {
    let start = Instant::now();
    let mut r = f();
    if timings {
        r.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    r
}

fn theorem1_records(seed: u64, anchor: &str, timings: bool) -> Vec<Record> {
    let mut jobs: Vec<(String, Box<dyn Fn() -> Check + Send + Sync>)> = Vec::new();
    for name in ["circle", "circle3", "torus:2", "euclid:1", "euclid:2", "euclid:3"] {
        jobs.push((
            format!("theorem1/construct-z/{name}"),
            Box::new(move || {
                let s = eng(PartitionScheme::builtin(name))?;
                let z = eng(scheme::construct_z(&s))?;
                ensure(z == NormalForm::z(s.chart()), || format!("construct_Z = {z}"))?;
                ensure(z.involution() == -&z, || format!("Z* = {}", z.involution()))?;
                Ok(z.to_string())
            }),
        ));
        jobs.push((
            format!("theorem1/central/{name}"),
            Box::new(move || {
                let s = eng(PartitionScheme::builtin(name))?;
                let c = s.chart();
                let z = eng(scheme::construct_z(&s))?;
                let mut rng = random::trial_rng(seed, &format!("theorem1/{name}"), 0);
                let mut probes = scheme::generators(c);
                probes.extend((0..50).map(|_| random::normal_form(&mut rng, c, 2, 2)));
                eng(scheme::check_central(&z, &probes))?;
                // the unreduced commutator sum and the expanded bracket on a few probes
                eng(scheme::check_central_expr(&scheme::construct_z_expr(&s), c, &probes[..probes.len().min(8)]))?;
                for a in &probes[..probes.len().min(8)] {
                    let e = eng(scheme::expanded_bracket_with(&s, a))?;
                    ensure(e.is_zero(), || format!("Σ([{{qᵢ,A}}, pᵢ] + [qᵢ, {{pᵢ,A}}]) = {e} for A = {a}"))?;
                }
                Ok(format!("{} probes", probes.len()))
            }),
        ));
    }
    jobs.push((
        "theorem1/redundant-triple".into(),
        Box::new(|| {
            let s = PartitionScheme::circle();
            let t = s.chart();
            let extra = scheme::Triple::new(eng(FunElem::cos(t, 0))?, FunElem::zero(t), eng(VecElem::frame(t, 0))?);
            let z2 = eng(scheme::construct_z(&eng(s.with_triple(extra))?))?;
            ensure(z2 == NormalForm::z(t), || format!("construct_Z = {z2}"))?;
            Ok(z2.to_string())
        }),
    ));
    for n in 1..=3usize {
        jobs.push((
            format!("theorem1/heisenberg/{n}"),
            Box::new(move || {
                let r = eng(scheme::heisenberg_check(n))?;
                ensure(r.holds(), || format!("{r:?}"))?;
                Ok(format!("[x1,p1] = {}", r.diagonal[0]))
            }),
        ));
    }
    jobs.into_par_iter().map(|(name, job)| timed(timings, || record_from(name, anchor, job()))).collect()
}

fn twist_records(anchor: &str, timings: bool) -> Vec<Record> {
    let grid: Vec<(i64, i64)> = vec![(0, 1), (1, 4), (1, 3), (1, 2), (1, 1)];
    let mut out = Vec::new();
    for &(an, ad) in &grid {
        for &(bn, bd) in &grid {
            out.push(timed(timings, || {
                let mk = |n: i64, d: i64| {
                    RepConfig::new(4, BigRational::new(n.into(), d.into()), BigRational::from_integer(1.into())).unwrap()
                };
                let (a, b) = (mk(an, ad), mk(bn, bd));
                let expected = (&a.alpha - &b.alpha).is_integer();
                let got = quantum::twist_equivalent(&a, &b);
                let name = format!("twist/{}~{}", crate::scalar::render_rational(&a.alpha), crate::scalar::render_rational(&b.alpha));
                let witness = if got { "equivalent" } else { "inequivalent" };
                record_from(name, anchor, if got == expected { Ok(witness.into()) } else { Err(witness.into()) })
            }));
        }
    }
    out
}

fn lie_env_records(anchor: &str, timings: bool) -> Vec<Record> {
    let mut out = Vec::new();
    let su2 = FreeLiePoisson::su2();
    let g: Vec<FreeElem> = (0..3).map(|i| FreeElem::generator(&su2, i)).collect();
    out.push(timed(timings, || match free::lie_env_check(&su2, &g[0], &g[1], 3) {
        Ok(LieEnvVerdict::Proved { constant, depth }) => {
            Record::new("lie-env/su2", anchor, Verdict::Pass, format!("proved with λ = {constant} at depth {depth}"))
        }
        Ok(LieEnvVerdict::Unresolved) => Record::new("lie-env/su2", anchor, Verdict::Unresolved, "depth 3"),
        Err(e) => Record::new("lie-env/su2", anchor, Verdict::Fail, e.to_string()),
    }));
    out.push(timed(timings, || {
        let check = (|| {
            let w = eng(free::su2_image_witness(&g[0], &g[1]))?;
            let lambda = w.constant().ok_or_else(|| format!("image of [A,B]·Z₁ = {} is no multiple of {}", w.lhs, w.rhs))?;
            ensure(lambda == GaussRat::from_int(-2), || format!("λ = {lambda}"))?;
            ensure(!w.holds_with(&GaussRat::one()), || "λ = 1 also holds".into())?;
            Ok(format!("λ = {lambda} in the rotation-field image; λ = 1 refuted"))
        })();
        record_from("lie-env/su2-image".into(), anchor, check)
    }));
    out.push(timed(timings, || {
        let check: std::result::Result<(Verdict, String), String> = (|| {
            // so(2,1): N = diag(1, 1, −1), a = 0
            let one = BigRational::from_integer(1.into());
            let zero = BigRational::from_integer(0.into());
            let n = [
                [one.clone(), zero.clone(), zero.clone()],
                [zero.clone(), one.clone(), zero.clone()],
                [zero.clone(), zero.clone(), -one.clone()],
            ];
            let ctx = eng(FreeLiePoisson::three_dim(n, [zero.clone(), zero.clone(), zero]))?;
            let a = FreeElem::generator(&ctx, 0);
            let b = FreeElem::generator(&ctx, 2);
            Ok(match eng(free::lie_env_check(&ctx, &a, &b, 3))? {
                LieEnvVerdict::Proved { constant, depth } => {
                    (Verdict::Pass, format!("proved with λ = {constant} at depth {depth}"))
                }
                // Z₁ and Z₂ are taken with indices as written, which is only
                // basis-invariant when the Killing form is a multiple of δ.
                LieEnvVerdict::Unresolved => {
                    (Verdict::Unresolved, "unresolved at depth 3; Killing form diag(2, 2, -2) is not a multiple of δ".into())
                }
            })
        })();
        match check {
            Ok((v, w)) => Record::new("lie-env/so21", anchor, v, w),
            Err(w) => Record::new("lie-env/so21", anchor, Verdict::Fail, w),
        }
    }));
    out.push(timed(timings, || {
        let ab = FreeLiePoisson::abelian(3);
        let (a, b) = (FreeElem::generator(&ab, 0), FreeElem::generator(&ab, 1));
        let check = match free::lie_env_check(&ab, &a, &b, 0) {
            Ok(LieEnvVerdict::Proved { depth: 0, .. }) => Ok("both sides vanish".into()),
            other => Err(format!("{other:?}")),
        };
        record_from("lie-env/abelian".into(), anchor, check)
    }));
    out
}

fn classical_generator_record(anchor: &str) -> Record {
    let c = ChartSpec::euclid(1);
    let p = ClassicalSymbol::project(&NormalForm::momentum(c, 0).unwrap());
    let x = ClassicalSymbol::project(&NormalForm::fun(FunElem::coordinate(c, 0).unwrap()));
    let b = p.bracket(&x).unwrap();
    let ok = b.to_normal_form() == NormalForm::one(c);
    record_from("classical-hom/generator".into(), anchor, if ok { Ok(format!("{{p1, x1}} = {b}")) } else { Err(b.to_string()) })
}

/// Run one suite, or every suite for `all`. Records come out in a fixed
/// order so that equal `(name, trials, seed)` give byte-identical reports
/// unless `timings` is set.
pub fn run_suite(name: &str, trials: u64, seed: u64, timings: bool) -> Result<Report> {
    if name == "all" {
        let mut report = Report::new("all", seed);
        report.suite = Some("all".into());
        report.trials = Some(trials);
        for s in SUITES {
            report.records.extend(run_suite(s, trials, seed, timings)?.records);
        }
        return Ok(report);
    }
    let (anchor, chart) = describe(name)?;
    let mut report = Report::new(chart, seed);
    report.suite = Some(name.to_string());
    match name {
        "theorem1" => report.records = theorem1_records(seed, anchor, timings),
        "twist" => report.records = twist_records(anchor, timings),
        "lie-env" => report.records = lie_env_records(anchor, timings),
        _ => {
            let f = trial_fn(name).expect("trial suite");
            report.trials = Some(trials);
            let width = trials.saturating_sub(1).to_string().len().max(3);
            if name == "classical-hom" {
                report.records.push(classical_generator_record(anchor));
            }
            let records: Vec<Record> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    timed(timings, || {
                        let mut rng = random::trial_rng(seed, name, t);
                        let check = f(&mut rng, t);
                        record_from(format!("{name}/{t:0width$}"), anchor, check)
                    })
                })
                .collect();
            report.records.extend(records);
        }
    }
    Ok(report)
}

/// Draw a seed from the thread RNG; used only when the caller gives none.
pub fn fresh_seed() -> u64 {
    rand::thread_rng().gen()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("unknown", 1, 0, false), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        for s in SUITES {
            let r = run_suite(s, 3, 11, false).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.failures().collect::<Vec<_>>());
            assert!(!r.records.is_empty());
        }
    }

    #[test]
    fn deterministic_without_timings() {
        let a = run_suite("z-divisibility", 8, 5, false).unwrap().to_json();
        let b = run_suite("z-divisibility", 8, 5, false).unwrap().to_json();
        assert_eq!(a, b);
        assert_ne!(a, run_suite("z-divisibility", 8, 6, false).unwrap().to_json());
    }
}
