//! Free Poisson expression trees and their reduction to [`NormalForm`].

use std::fmt;

use crate::chart::ChartSpec;
use crate::error::{Error, Result};
use crate::fun::FunElem;
use crate::normal::NormalForm;
use crate::scalar::GaussRat;
use crate::vector::VecElem;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PExpr {
    Scalar(GaussRat),
    Fun(FunElem),
    /// A vector field, embedded symmetrically.
    Vec(VecElem),
    Z,
    Sum(Vec<PExpr>),
    /// Ordered, non-commutative product.
    Prod(Vec<PExpr>),
    Bracket(Box<PExpr>, Box<PExpr>),
    Star(Box<PExpr>),
    /// Rinehart product `f ∘ v`, realised as the Jordan product.
    Jordan(FunElem, VecElem),
}

impl PExpr {
    pub fn bracket(a: PExpr, b: PExpr) -> PExpr {
        PExpr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn star(a: PExpr) -> PExpr {
        PExpr::Star(Box::new(a))
    }

    /// `a·b − b·a` as a tree.
    pub fn commutator(a: PExpr, b: PExpr) -> PExpr {
        PExpr::Sum(vec![
            PExpr::Prod(vec![a.clone(), b.clone()]),
            PExpr::Prod(vec![PExpr::Scalar(GaussRat::from_int(-1)), b, a]),
        ])
    }

    pub fn negated(a: PExpr) -> PExpr {
        PExpr::Prod(vec![PExpr::Scalar(GaussRat::from_int(-1)), a])
    }

    /// Chart of the first chart-carrying leaf, if any.
    pub fn chart(&self) -> Option<ChartSpec> {
        match self {
            PExpr::Scalar(_) | PExpr::Z => None,
            PExpr::Fun(f) => Some(f.chart()),
            PExpr::Vec(v) => Some(v.chart()),
            PExpr::Jordan(f, _) => Some(f.chart()),
            PExpr::Sum(cs) | PExpr::Prod(cs) => cs.iter().find_map(PExpr::chart),
            PExpr::Bracket(a, b) => a.chart().or_else(|| b.chart()),
            PExpr::Star(a) => a.chart(),
        }
    }

    /// Reduce to PBW normal form on `chart`.
    ///
    /// Products are reordered with `pᵢ·f → f·pᵢ + z·∂ᵢf`, brackets are
    /// expanded by the two-sided Leibniz rule down to generator brackets, and
    /// `star` applies the involution. Every leaf must live on `chart`.
    pub fn normalize(&self, chart: ChartSpec) -> Result<NormalForm> {
        match self {
            PExpr::Scalar(c) => Ok(NormalForm::scalar(chart, c.clone())),
            PExpr::Z => Ok(NormalForm::z(chart)),
            PExpr::Fun(f) => {
                chart.ensure_same(&f.chart())?;
                Ok(NormalForm::fun(f.clone()))
            }
            PExpr::Vec(v) => {
                chart.ensure_same(&v.chart())?;
                Ok(NormalForm::from_vector(v))
            }
            PExpr::Jordan(f, v) => {
                chart.ensure_same(&f.chart())?;
                NormalForm::from_rinehart(f, v)
            }
            PExpr::Sum(cs) => cs.iter().try_fold(NormalForm::zero(chart), |acc, c| acc.try_add(&c.normalize(chart)?)),
            PExpr::Prod(cs) => cs.iter().try_fold(NormalForm::one(chart), |acc, c| acc.try_mul(&c.normalize(chart)?)),
            PExpr::Bracket(a, b) => a.normalize(chart)?.poisson_bracket(&b.normalize(chart)?),
            PExpr::Star(a) => Ok(a.normalize(chart)?.involution()),
        }
    }

    /// Interpret as an element of the function ring, if the tree only
    /// involves scalars and functions.
    pub fn as_function(&self, chart: ChartSpec) -> Result<FunElem> {
        let fail = || Error::MalformedExpr(format!("`{self}` is not a function"));
        match self {
            PExpr::Scalar(c) => Ok(FunElem::constant(chart, c.clone())),
            PExpr::Fun(f) => {
                chart.ensure_same(&f.chart())?;
                Ok(f.clone())
            }
            PExpr::Sum(cs) => cs.iter().try_fold(FunElem::zero(chart), |acc, c| acc.try_add(&c.as_function(chart)?)),
            PExpr::Prod(cs) => cs.iter().try_fold(FunElem::one(chart), |acc, c| acc.try_mul(&c.as_function(chart)?)),
            PExpr::Star(a) => Ok(a.as_function(chart)?.conj()),
            PExpr::Bracket(a, b) => {
                // functions Poisson-commute
                a.as_function(chart)?;
                b.as_function(chart)?;
                Ok(FunElem::zero(chart))
            }
            PExpr::Z | PExpr::Vec(_) | PExpr::Jordan(..) => Err(fail()),
        }
    }

    /// Interpret as a vector field. Inside this reading a product of functions
    /// with one field is the Rinehart product and `{v, w}` is the field bracket.
    pub fn as_vector(&self, chart: ChartSpec) -> Result<VecElem> {
        let fail = || Error::MalformedExpr(format!("`{self}` is not a vector field"));
        match self {
            PExpr::Scalar(c) if c.is_zero() => Ok(VecElem::zero(chart)),
            PExpr::Vec(v) => {
                chart.ensure_same(&v.chart())?;
                Ok(v.clone())
            }
            PExpr::Jordan(f, v) => VecElem::rinehart(f, v),
            PExpr::Sum(cs) => cs.iter().try_fold(VecElem::zero(chart), |acc, c| acc.try_add(&c.as_vector(chart)?)),
            PExpr::Prod(cs) => {
                let mut field = None;
                let mut scale = FunElem::one(chart);
                for c in cs {
                    match c.as_function(chart) {
                        Ok(f) => scale = scale.try_mul(&f)?,
                        Err(_) if field.is_none() => field = Some(c.as_vector(chart)?),
                        Err(_) => return Err(fail()),
                    }
                }
                VecElem::rinehart(&scale, &field.ok_or_else(fail)?)
            }
            PExpr::Bracket(a, b) => a.as_vector(chart)?.bracket(&b.as_vector(chart)?),
            PExpr::Star(a) => {
                let v = a.as_vector(chart)?;
                VecElem::from_coeffs(chart, v.coeffs().iter().map(FunElem::conj).collect())
            }
            PExpr::Scalar(_) | PExpr::Fun(_) | PExpr::Z => Err(fail()),
        }
    }

    /// Binding strength of the rendered form: 1 sum, 2 product, 3 `o`, 4 atom.
    fn precedence(&self) -> u8 {
        match self {
            PExpr::Scalar(c) => {
                let s = c.to_string();
                if s.starts_with('-') {
                    1
                } else if s.contains('/') {
                    2
                } else {
                    4
                }
            }
            PExpr::Fun(f) => {
                let s = f.to_string();
                if f.len() > 1 || s.starts_with('-') {
                    1
                } else if s.contains('*') || s.contains('/') {
                    2
                } else {
                    4
                }
            }
            PExpr::Vec(v) => {
                let s = v.to_string();
                if s.contains(" + ") || s.contains(" - ") || s.starts_with('-') {
                    1
                } else if s.contains(" o ") {
                    3
                } else {
                    4
                }
            }
            PExpr::Z | PExpr::Bracket(..) | PExpr::Star(_) => 4,
            PExpr::Sum(cs) if cs.is_empty() => 4,
            PExpr::Sum(_) => 1,
            PExpr::Prod(cs) if cs.is_empty() => 4,
            PExpr::Prod(_) => 2,
            PExpr::Jordan(..) => 3,
        }
    }

    fn fmt_at(&self, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_bare(f)?;
            write!(f, ")")
        } else {
            self.fmt_bare(f)
        }
    }

    fn fmt_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExpr::Scalar(c) => write!(f, "{c}"),
            PExpr::Fun(g) => write!(f, "{g}"),
            PExpr::Vec(v) if v.is_zero() => write!(f, "0"),
            PExpr::Vec(v) => write!(f, "{v}"),
            PExpr::Z => write!(f, "z"),
            PExpr::Sum(cs) if cs.is_empty() => write!(f, "0"),
            PExpr::Sum(cs) => {
                for (n, c) in cs.iter().enumerate() {
                    if n > 0 {
                        write!(f, " + ")?;
                    }
                    c.fmt_at(2, f)?;
                }
                Ok(())
            }
            PExpr::Prod(cs) if cs.is_empty() => write!(f, "1"),
            PExpr::Prod(cs) => {
                for (n, c) in cs.iter().enumerate() {
                    if n > 0 {
                        write!(f, "*")?;
                    }
                    c.fmt_at(2, f)?;
                }
                Ok(())
            }
            PExpr::Bracket(a, b) => {
                write!(f, "{{")?;
                a.fmt_at(0, f)?;
                write!(f, ", ")?;
                b.fmt_at(0, f)?;
                write!(f, "}}")
            }
            PExpr::Star(a) => {
                write!(f, "star(")?;
                a.fmt_at(0, f)?;
                write!(f, ")")
            }
            PExpr::Jordan(g, v) => write!(f, "({g}) o ({v})"),
        }
    }
}

impl fmt::Display for PExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_star_of_xp() {
        let c = ChartSpec::euclid(1);
        let x = FunElem::coordinate(c, 0).unwrap();
        let d = VecElem::frame(c, 0).unwrap();
        let e = PExpr::star(PExpr::Prod(vec![PExpr::Fun(x.clone()), PExpr::Vec(d.clone())]));
        let nf = e.normalize(c).unwrap();
        assert_eq!(nf.to_string(), "x1*p1 + z");
        let back = PExpr::star(e).normalize(c).unwrap();
        assert_eq!(back.to_string(), "x1*p1");
    }

    #[test]
    fn chart_mismatch_is_reported() {
        let e = PExpr::Fun(FunElem::one(ChartSpec::euclid(2)));
        assert!(matches!(e.normalize(ChartSpec::euclid(1)), Err(Error::ChartMismatch { .. })));
    }

    #[test]
    fn vector_reading_of_products() {
        let c = ChartSpec::euclid(2);
        let x2 = PExpr::Fun(FunElem::coordinate(c, 1).unwrap());
        let d1 = PExpr::Vec(VecElem::frame(c, 0).unwrap());
        let v = PExpr::Prod(vec![x2.clone(), d1.clone()]).as_vector(c).unwrap();
        assert_eq!(v.to_string(), "(x2) o d1");
        assert!(PExpr::Prod(vec![d1.clone(), d1]).as_vector(c).is_err());
        assert!(PExpr::Z.as_function(c).is_err());
    }

    #[test]
    fn rendering_parenthesises_by_precedence() {
        let c = ChartSpec::euclid(1);
        let x = PExpr::Fun(FunElem::coordinate(c, 0).unwrap());
        let s = PExpr::Sum(vec![x.clone(), PExpr::Z]);
        let e = PExpr::Prod(vec![s.clone(), PExpr::Scalar(GaussRat::frac(-1, 2)), x.clone()]);
        assert_eq!(e.to_string(), "(x1 + z)*(-1/2)*x1");
        assert_eq!(PExpr::bracket(s, PExpr::star(x)).to_string(), "{x1 + z, star(x1)}");
    }
}
