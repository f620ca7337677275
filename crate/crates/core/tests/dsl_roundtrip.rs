use prcalc_core::dsl::lower::{lower, Env};
use prcalc_core::dsl::{parse_expr, run_script, ScriptOptions};
use prcalc_core::random;
use prcalc_core::{ChartSpec, PExpr};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tree(rng: &mut ChaCha8Rng, c: ChartSpec, depth: u32) -> PExpr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..5) {
            0 => PExpr::Scalar(random::scalar(rng, true)),
            1 => PExpr::Z,
            2 => PExpr::Vec(random::vector(rng, c, 1)),
            3 => PExpr::Jordan(random::function(rng, c, 1, 2), random::vector(rng, c, 1)),
            _ => PExpr::Fun(random::function(rng, c, 2, 3)),
        };
    }
    let op = rng.gen_range(0..4);
    let mut kids = |n: usize| (0..n).map(|_| tree(rng, c, depth - 1)).collect::<Vec<_>>();
    match op {
        0 => PExpr::Sum(kids(3)),
        1 => PExpr::Prod(kids(2)),
        2 => {
            let mut k = kids(2);
            let b = k.pop().unwrap();
            PExpr::bracket(k.pop().unwrap(), b)
        }
        _ => PExpr::star(kids(1).pop().unwrap()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parse_of_render_normalizes_alike(seed in any::<u64>(), torus in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = if torus { ChartSpec::torus(2) } else { ChartSpec::euclid(2) };
        let e = tree(&mut rng, c, 3);
        let text = e.to_string();
        let back = lower(&parse_expr(&text).unwrap(), c, &Env::new()).unwrap();
        prop_assert_eq!(back.normalize(c).unwrap(), e.normalize(c).unwrap(), "{}", text);
    }

    #[test]
    fn normal_forms_render_parseably(seed in any::<u64>(), torus in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = if torus { ChartSpec::torus(2) } else { ChartSpec::euclid(2) };
        let a = random::normal_form(&mut rng, c, 2, 2);
        let back = lower(&parse_expr(&a.to_string()).unwrap(), c, &Env::new()).unwrap();
        prop_assert_eq!(back.normalize(c).unwrap(), a);
    }
}

#[test]
fn scripts_are_deterministic() {
    let text = "chart torus:2\nlet a = sin(t1) o dt2\n{a, star(a)}\ncheck --suite dvf --trials 5\ncheck --suite rep-interior --trials 3\n";
    let opts = ScriptOptions { seed: 9, ..Default::default() };
    let a = run_script(text, &opts).unwrap().report.to_json();
    let b = run_script(text, &opts).unwrap().report.to_json();
    assert_eq!(a, b);
}

#[test]
fn syntax_error_reports_position() {
    let err = run_script("chart euclid:1\nnormalize x1 + (d1", &ScriptOptions::default()).unwrap_err();
    assert_eq!(err.to_string(), "syntax error at 2:19: expected `)`, found end of input");
}
