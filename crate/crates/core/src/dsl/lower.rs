//! Name resolution, chart inference and lowering of [`Ast`] to [`PExpr`].

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::parser::Ast;
use crate::chart::{ChartKind, ChartSpec};
use crate::error::{Error, Result};
use crate::expr::PExpr;
use crate::fun::FunElem;
use crate::scalar::GaussRat;
use crate::vector::VecElem;

pub type Env = HashMap<String, PExpr>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Builtin {
    /// `xk`
    Coord(usize),
    /// `dk`, `dtk` or `pk`
    Frame(usize, Option<ChartKind>),
    /// `tk`, only as an argument of `sin` / `cos`
    Angle(usize),
    I,
    Z,
}

fn indexed(s: &str, prefix: &str) -> Option<usize> {
    let rest = s.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse::<usize>().ok().map(|k| k - 1)
}

pub fn builtin_name(s: &str) -> Option<Builtin> {
    match s {
        "i" => return Some(Builtin::I),
        "z" => return Some(Builtin::Z),
        _ => {}
    }
    if let Some(k) = indexed(s, "dt") {
        return Some(Builtin::Frame(k, Some(ChartKind::Torus)));
    }
    if let Some(k) = indexed(s, "x") {
        return Some(Builtin::Coord(k));
    }
    if let Some(k) = indexed(s, "d") {
        return Some(Builtin::Frame(k, None));
    }
    if let Some(k) = indexed(s, "p") {
        return Some(Builtin::Frame(k, None));
    }
    indexed(s, "t").map(Builtin::Angle)
}

/// Evidence about the chart an expression lives on.
#[derive(Clone, Debug, Default)]
pub struct ChartHints {
    pub euclid: bool,
    pub torus: bool,
    pub dim: usize,
    pub bound: Option<ChartSpec>,
}

impl ChartHints {
    pub fn collect(&mut self, ast: &Ast, env: &Env) {
        match ast {
            Ast::Int(_) => {}
            Ast::Name(n, _) => {
                if let Some(e) = env.get(n) {
                    if let Some(c) = e.chart() {
                        self.bound.get_or_insert(c);
                    }
                    return;
                }
                match builtin_name(n) {
                    Some(Builtin::Coord(k)) => {
                        self.euclid = true;
                        self.dim = self.dim.max(k + 1);
                    }
                    Some(Builtin::Frame(k, kind)) => {
                        self.torus |= kind == Some(ChartKind::Torus);
                        self.dim = self.dim.max(k + 1);
                    }
                    Some(Builtin::Angle(k)) => {
                        self.torus = true;
                        self.dim = self.dim.max(k + 1);
                    }
                    _ => {}
                }
            }
            Ast::Call(name, args, _) => {
                if name == "e" {
                    self.torus = true;
                    self.dim = self.dim.max(args.len());
                } else {
                    if name == "sin" || name == "cos" {
                        self.torus = true;
                    }
                    for a in args {
                        self.collect(a, env);
                    }
                }
            }
            Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Bracket(a, b) | Ast::Jordan(a, b) => {
                self.collect(a, env);
                self.collect(b, env);
            }
            Ast::Neg(a) | Ast::Div(a, _) | Ast::Pow(a, _) | Ast::Star(a) => self.collect(a, env),
        }
    }

    /// The bound chart if any, else the torus or Euclid chart of the largest
    /// index seen; `euclid:1` when nothing constrains it.
    pub fn chart(&self) -> Result<ChartSpec> {
        if let Some(c) = self.bound {
            return Ok(c);
        }
        if self.euclid && self.torus {
            return Err(Error::ChartMismatch {
                left: ChartSpec::euclid(self.dim.max(1)),
                right: ChartSpec::torus(self.dim.max(1)),
            });
        }
        let kind = if self.torus { ChartKind::Torus } else { ChartKind::Euclid };
        ChartSpec::new(kind, self.dim.max(1))
    }
}

fn int_const(a: &Ast) -> Option<i64> {
    match a {
        Ast::Int(n) => n.to_i64(),
        Ast::Neg(b) => int_const(b).map(|k| -k),
        _ => None,
    }
}

fn flatten(kind: fn(&PExpr) -> Option<&Vec<PExpr>>, parts: [PExpr; 2]) -> Vec<PExpr> {
    let mut out = Vec::new();
    for p in parts {
        match kind(&p) {
            Some(cs) => out.extend(cs.iter().cloned()),
            None => out.push(p),
        }
    }
    out
}

fn as_sum(e: &PExpr) -> Option<&Vec<PExpr>> {
    match e {
        PExpr::Sum(cs) => Some(cs),
        _ => None,
    }
}

fn as_prod(e: &PExpr) -> Option<&Vec<PExpr>> {
    match e {
        PExpr::Prod(cs) => Some(cs),
        _ => None,
    }
}

fn wrong_kind(chart: ChartSpec, wanted: ChartKind) -> Error {
    Error::ChartMismatch { left: chart, right: ChartSpec { kind: wanted, dim: chart.dim } }
}

/// Lower `ast` on `chart`, resolving let-bound names through `env`.
pub fn lower(ast: &Ast, chart: ChartSpec, env: &Env) -> Result<PExpr> {
    Ok(match ast {
        Ast::Int(n) => PExpr::Scalar(GaussRat::real(BigRational::from_integer(n.clone()))),
        Ast::Name(n, _) => {
            if let Some(e) = env.get(n) {
                if let Some(c) = e.chart() {
                    chart.ensure_same(&c)?;
                }
                return Ok(e.clone());
            }
            match builtin_name(n) {
                Some(Builtin::I) => PExpr::Scalar(GaussRat::i()),
                Some(Builtin::Z) => PExpr::Z,
                Some(Builtin::Coord(k)) => {
                    if chart.kind != ChartKind::Euclid {
                        return Err(wrong_kind(chart, ChartKind::Euclid));
                    }
                    PExpr::Fun(FunElem::coordinate(chart, k)?)
                }
                Some(Builtin::Frame(k, kind)) => {
                    if let Some(kind) = kind.filter(|&k| k != chart.kind) {
                        return Err(wrong_kind(chart, kind));
                    }
                    PExpr::Vec(VecElem::frame(chart, k)?)
                }
                Some(Builtin::Angle(_)) => {
                    return Err(Error::MalformedExpr(format!("`{n}` may only appear inside sin(..) or cos(..)")))
                }
                None => return Err(Error::UnboundName(n.clone())),
            }
        }
        Ast::Call(name, args, _) => match name.as_str() {
            "sin" | "cos" => {
                let k = match args.as_slice() {
                    [Ast::Name(t, _)] => match builtin_name(t) {
                        Some(Builtin::Angle(k)) => k,
                        _ => return Err(Error::MalformedExpr(format!("{name} expects an angle tk, got `{t}`"))),
                    },
                    _ => return Err(Error::MalformedExpr(format!("{name} expects one angle tk"))),
                };
                if chart.kind != ChartKind::Torus {
                    return Err(wrong_kind(chart, ChartKind::Torus));
                }
                PExpr::Fun(if name == "sin" { FunElem::sin(chart, k)? } else { FunElem::cos(chart, k)? })
            }
            "e" => {
                if chart.kind != ChartKind::Torus {
                    return Err(wrong_kind(chart, ChartKind::Torus));
                }
                let ks = args
                    .iter()
                    .map(|a| {
                        int_const(a)
                            .and_then(|k| i32::try_from(k).ok())
                            .ok_or_else(|| Error::MalformedExpr("e(..) expects integer frequencies".into()))
                    })
                    .collect::<Result<Vec<i32>>>()?;
                if ks.len() != chart.dim {
                    return Err(Error::MalformedExpr(format!(
                        "e(..) on {chart} expects {} frequencies, got {}",
                        chart.dim,
                        ks.len()
                    )));
                }
                PExpr::Fun(FunElem::monomial(chart, ks, GaussRat::one())?)
            }
            _ => return Err(Error::UnboundName(name.clone())),
        },
        Ast::Add(a, b) => PExpr::Sum(flatten(as_sum, [lower(a, chart, env)?, lower(b, chart, env)?])),
        Ast::Sub(a, b) => PExpr::Sum(flatten(as_sum, [lower(a, chart, env)?, PExpr::negated(lower(b, chart, env)?)])),
        Ast::Neg(a) => PExpr::negated(lower(a, chart, env)?),
        Ast::Mul(a, b) => PExpr::Prod(flatten(as_prod, [lower(a, chart, env)?, lower(b, chart, env)?])),
        Ast::Div(a, n) => PExpr::Prod(flatten(
            as_prod,
            [
                lower(a, chart, env)?,
                PExpr::Scalar(GaussRat::real(BigRational::new(BigInt::from(1), n.clone()))),
            ],
        )),
        Ast::Pow(a, k) => {
            let base = lower(a, chart, env)?;
            PExpr::Prod(vec![base; *k as usize])
        }
        Ast::Bracket(a, b) => PExpr::bracket(lower(a, chart, env)?, lower(b, chart, env)?),
        Ast::Jordan(a, b) => {
            let f = lower(a, chart, env)?.as_function(chart)?;
            let v = lower(b, chart, env)?.as_vector(chart)?;
            PExpr::Jordan(f, v)
        }
        Ast::Star(a) => PExpr::star(lower(a, chart, env)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parser::parse_expr;

    fn norm(s: &str) -> String {
        let ast = parse_expr(s).unwrap();
        let env = Env::new();
        let mut h = ChartHints::default();
        h.collect(&ast, &env);
        let chart = h.chart().unwrap();
        lower(&ast, chart, &env).unwrap().normalize(chart).unwrap().to_string()
    }

    #[test]
    fn names() {
        assert_eq!(builtin_name("x12"), Some(Builtin::Coord(11)));
        assert_eq!(builtin_name("dt2"), Some(Builtin::Frame(1, Some(ChartKind::Torus))));
        assert_eq!(builtin_name("p1"), Some(Builtin::Frame(0, None)));
        assert_eq!(builtin_name("x0"), None);
        assert_eq!(builtin_name("x"), None);
        assert_eq!(builtin_name("abc"), None);
    }

    #[test]
    fn spec_examples() {
        assert_eq!(norm("d1*x1"), "x1*p1 + z");
        assert_eq!(norm("{x1, d1}"), "-1");
        assert_eq!(norm("e(1)*e(-1)"), "1");
        assert_eq!(norm("p1*x1^2"), "x1^2*p1 + 2*x1*z");
        assert_eq!(norm("star(x1*p1)"), "x1*p1 + z");
        assert_eq!(norm("{p1, x1*x2}"), "x2");
    }

    #[test]
    fn jordan_and_trig() {
        assert_eq!(norm("sin(t1) o dt1"), norm("sin(t1)*p1 + z/2*cos(t1)"));
        assert_eq!(norm("x2 o d1"), norm("x2*d1"));
        assert_eq!(norm("1/2*(x1*d1 + d1*x1)"), norm("x1 o d1"));
    }

    #[test]
    fn errors() {
        let env = Env::new();
        let c = ChartSpec::euclid(1);
        let lower_str = |s: &str| lower(&parse_expr(s).unwrap(), c, &env);
        assert!(matches!(lower_str("y"), Err(Error::UnboundName(_))));
        assert!(matches!(lower_str("sin(t1)"), Err(Error::ChartMismatch { .. })));
        assert!(matches!(lower_str("x2"), Err(Error::IndexOutOfRange { index: 2, dim: 1 })));
        assert!(matches!(lower_str("d1 o x1"), Err(Error::MalformedExpr(_))));
        let mut h = ChartHints::default();
        h.collect(&parse_expr("x1 + e(1)").unwrap(), &env);
        assert!(matches!(h.chart(), Err(Error::ChartMismatch { .. })));
    }
}
