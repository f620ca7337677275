//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use prcalc_core::dsl::lower::{lower, Env};
use prcalc_core::dsl::parse_expr;
use prcalc_core::free::{self, LieEnvVerdict};
use prcalc_core::random;
use prcalc_core::scheme;
use prcalc_core::suite::run_suite;
use prcalc_core::{ChartSpec, FreeElem, FreeLiePoisson, PExpr, Report, Verdict};
use rand::Rng;

const SEED: u64 = 20240601;

struct Outcome {
    ok: bool,
    detail: String,
}

fn suite_ok(name: &str, trials: u64) -> Result<Report, String> {
    let r = run_suite(name, trials, SEED, false).map_err(|e| e.to_string())?;
    if let Some(f) = r.failures().next() {
        return Err(format!("{}: {}", f.name, f.witness));
    }
    Ok(r)
}

fn within(budget: Duration, f: impl FnOnce() -> Result<String, String>) -> Outcome {
    let start = Instant::now();
    let res = f();
    let took = start.elapsed();
    match res {
        Ok(d) if took <= budget => Outcome { ok: true, detail: format!("{d} in {:.1} s", took.as_secs_f64()) },
        Ok(d) => Outcome { ok: false, detail: format!("{d}, but took {:.1} s > {} s", took.as_secs_f64(), budget.as_secs()) },
        Err(e) => Outcome { ok: false, detail: e },
    }
}

fn untimed(f: impl FnOnce() -> Result<String, String>) -> Outcome {
    within(Duration::MAX, f)
}

fn records(r: &Report) -> String {
    format!("{} records", r.records.len())
}

fn lr_axioms() -> Outcome {
    within(Duration::from_secs(30), || suite_ok("lr-axioms", 200).map(|r| records(&r) + " per chart"))
}

fn theorem1() -> Outcome {
    within(Duration::from_secs(30), || {
        let r = suite_ok("theorem1", 0)?;
        for s in ["circle", "circle3", "torus:2"] {
            let name = format!("theorem1/construct-z/{s}");
            let rec = r.records.iter().find(|x| x.name == name).ok_or(format!("missing {name}"))?;
            if rec.witness != "z" {
                return Err(format!("{name}: {}", rec.witness));
            }
        }
        Ok(records(&r))
    })
}

fn z_divisibility() -> Outcome {
    within(Duration::from_secs(60), || suite_ok("z-divisibility", 200).map(|r| records(&r) + " per chart"))
}

fn dvf() -> Outcome {
    within(Duration::from_secs(60), || {
        let a = suite_ok("dvf", 200)?;
        let b = suite_ok("free-defect", 500)?;
        Ok(format!("{} model quadruples per chart, {} free quadruples", a.records.len(), b.records.len()))
    })
}

fn simple(name: &'static str, trials: u64) -> impl FnOnce() -> Outcome {
    move || untimed(|| suite_ok(name, trials).map(|r| records(&r)))
}

fn classical() -> Outcome {
    untimed(|| {
        let r = suite_ok("classical-hom", 200)?;
        let g = r.records.iter().find(|x| x.name == "classical-hom/generator").ok_or("missing generator record")?;
        Ok(format!("{}, {}", records(&r), g.witness))
    })
}

fn heisenberg() -> Outcome {
    untimed(|| {
        for n in 1..=3 {
            let h = scheme::heisenberg_check(n).map_err(|e| e.to_string())?;
            if !h.holds() || !h.independent_of_index() {
                return Err(format!("n = {n}: {h:?}"));
            }
        }
        Ok("n = 1, 2, 3".into())
    })
}

fn lie_env() -> Outcome {
    untimed(|| {
        let su2 = FreeLiePoisson::su2();
        let (a, b) = (FreeElem::generator(&su2, 0), FreeElem::generator(&su2, 1));
        match free::lie_env_check(&su2, &a, &b, 3).map_err(|e| e.to_string())? {
            LieEnvVerdict::Proved { constant, depth } if depth <= 3 => Ok(format!("proved, λ = {constant}, depth {depth}")),
            LieEnvVerdict::Proved { depth, .. } => Err(format!("proved only at depth {depth}")),
            LieEnvVerdict::Unresolved => {
                let w = free::su2_image_witness(&a, &b).map_err(|e| e.to_string())?;
                match w.constant() {
                    Some(l) => Ok(format!("unresolved; image witness holds with λ = {l}")),
                    None => Err("unresolved and the image witness fails".into()),
                }
            }
        }
    })
}

fn tree(rng: &mut rand_chacha::ChaCha8Rng, c: ChartSpec, depth: u32) -> PExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 => PExpr::Scalar(random::scalar(rng, true)),
            1 => PExpr::Z,
            2 => PExpr::Vec(random::vector(rng, c, 1)),
            _ => PExpr::Fun(random::function(rng, c, 2, 3)),
        };
    }
    match rng.gen_range(0..4) {
        0 => PExpr::Sum(vec![tree(rng, c, depth - 1), tree(rng, c, depth - 1)]),
        1 => PExpr::Prod(vec![tree(rng, c, depth - 1), tree(rng, c, depth - 1)]),
        2 => PExpr::bracket(tree(rng, c, depth - 1), tree(rng, c, depth - 1)),
        _ => PExpr::star(tree(rng, c, depth - 1)),
    }
}

fn prcalc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_prcalc")).args(args).env_remove("PRCALC_SEED").output().expect("run prcalc")
}

fn cli() -> Outcome {
    within(Duration::from_secs(300), || {
        for t in 0..200 {
            let mut rng = random::trial_rng(SEED, "round-trip", t);
            let c = if t % 2 == 0 { ChartSpec::euclid(2) } else { ChartSpec::torus(2) };
            let e = tree(&mut rng, c, 3);
            let text = e.to_string();
            let back = parse_expr(&text).and_then(|a| lower(&a, c, &Env::new())).map_err(|x| format!("{text}: {x}"))?;
            if back.normalize(c).ok() != e.normalize(c).ok() {
                return Err(format!("round trip changed {text}"));
            }
        }
        let seed = SEED.to_string();
        let run = || prcalc(&["check", "--suite", "z-divisibility", "--trials", "50", "--seed", &seed]);
        let (a, b) = (run(), run());
        if a.stdout != b.stdout || a.status.code() != Some(0) {
            return Err("check output differs between identical runs".into());
        }
        if prcalc(&["check", "--suite", "unknown"]).status.code() != Some(2) {
            return Err("unknown suite does not exit with 2".into());
        }
        let dir = std::env::temp_dir().join(format!("prcalc-acceptance-{}", std::process::id()));
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        let out = dir.join("all.json");
        let full = prcalc(&["check", "--suite", "all", "--trials", "200", "--seed", &seed, "--out", out.to_str().unwrap()]);
        let report: Report = serde_json::from_str(&std::fs::read_to_string(&out).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let _ = std::fs::remove_dir_all(&dir);
        if full.status.code() != Some(0) {
            return Err(format!("full run exit {:?}", full.status.code()));
        }
        Ok(format!(
            "200 round trips, deterministic reports, full run of {} records ({} unresolved)",
            report.records.len(),
            report.count(Verdict::Unresolved)
        ))
    })
}

fn main() {
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Outcome>)> = vec![
        ("1  LR axioms", Box::new(lr_axioms)),
        ("2  central element from partition schemes", Box::new(theorem1)),
        ("3  z-divisibility of commutators", Box::new(z_divisibility)),
        ("4  DVF identity and free defect", Box::new(dvf)),
        ("5  Jordan product realises f∘v", Box::new(simple("jordan", 200))),
        ("6  quantum LR relations", Box::new(simple("quantum-lr", 200))),
        ("7  classical quotient homomorphism", Box::new(classical)),
        ("8  quantum quotient on interior blocks", Box::new(simple("rep-interior", 100))),
        ("9  twist classification", Box::new(simple("twist", 0))),
        ("10 Heisenberg relations", Box::new(heisenberg)),
        ("11 Killing-form relation for su(2)", Box::new(lie_env)),
        ("12 CLI round trip, determinism, full run", Box::new(cli)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        println!("{} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.ok);
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
