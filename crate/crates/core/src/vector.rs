//! Vector fields as the free module over [`FunElem`] with basis `∂1..∂n`,
//! together with their Lie bracket, action on functions and the Rinehart product.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::chart::ChartSpec;
use crate::error::{Error, Result};
use crate::fun::{join_sum, FunElem};
use crate::scalar::GaussRat;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VecElem {
    chart: ChartSpec,
    coeffs: Vec<FunElem>,
}

impl VecElem {
    pub fn zero(chart: ChartSpec) -> Self {
        VecElem { chart, coeffs: vec![FunElem::zero(chart); chart.dim] }
    }

    /// The frame field `∂_{i+1}`.
    pub fn frame(chart: ChartSpec, i: usize) -> Result<Self> {
        chart.check_index(i)?;
        let mut v = Self::zero(chart);
        v.coeffs[i] = FunElem::one(chart);
        Ok(v)
    }

    pub fn from_coeffs(chart: ChartSpec, coeffs: Vec<FunElem>) -> Result<Self> {
        if coeffs.len() != chart.dim {
            return Err(Error::MalformedExpr(format!(
                "vector field with {} components on {chart}",
                coeffs.len()
            )));
        }
        for c in &coeffs {
            chart.ensure_same(&c.chart())?;
        }
        Ok(VecElem { chart, coeffs })
    }

    pub fn chart(&self) -> ChartSpec {
        self.chart
    }

    pub fn coeffs(&self) -> &[FunElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &FunElem {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FunElem::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(FunElem::is_real)
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.iter().map(FunElem::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        VecElem { chart: self.chart, coeffs: self.coeffs.iter().map(|f| f.scale(c)).collect() }
    }

    /// `v(f) = Σ vᵢ ∂ᵢ f`.
    pub fn apply(&self, f: &FunElem) -> Result<FunElem> {
        self.chart.ensure_same(&f.chart())?;
        let mut out = FunElem::zero(self.chart);
        for (i, vi) in self.coeffs.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            out = &out + &(vi * &f.derive(i)?);
        }
        Ok(out)
    }

    /// Lie bracket `{v, w}`: component `j` is `Σᵢ vᵢ ∂ᵢ wⱼ − wᵢ ∂ᵢ vⱼ`.
    pub fn bracket(&self, other: &VecElem) -> Result<VecElem> {
        self.chart.ensure_same(&other.chart)?;
        let coeffs = (0..self.chart.dim)
            .map(|j| Ok(&self.apply(&other.coeffs[j])? - &other.apply(&self.coeffs[j])?))
            .collect::<Result<Vec<_>>>()?;
        Ok(VecElem { chart: self.chart, coeffs })
    }

    /// Rinehart product `f ∘ v`, the field `g ↦ f·v(g)`.
    pub fn rinehart(f: &FunElem, v: &VecElem) -> Result<VecElem> {
        v.chart.ensure_same(&f.chart())?;
        Ok(VecElem { chart: v.chart, coeffs: v.coeffs.iter().map(|c| f * c).collect() })
    }

    /// Flat divergence `Σ ∂ᵢ vᵢ`.
    pub fn divergence(&self) -> FunElem {
        let mut out = FunElem::zero(self.chart);
        for (i, c) in self.coeffs.iter().enumerate() {
            out = &out + &c.derive(i).expect("index within chart");
        }
        out
    }

    pub fn try_add(&self, other: &VecElem) -> Result<VecElem> {
        self.chart.ensure_same(&other.chart)?;
        Ok(VecElem {
            chart: self.chart,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }
}

impl Add for &VecElem {
    type Output = VecElem;
    fn add(self, rhs: &VecElem) -> VecElem {
        self.try_add(rhs).expect("VecElem addition across charts")
    }
}

impl Neg for &VecElem {
    type Output = VecElem;
    fn neg(self) -> VecElem {
        VecElem { chart: self.chart, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &VecElem {
    type Output = VecElem;
    fn sub(self, rhs: &VecElem) -> VecElem {
        self + &(-rhs)
    }
}

impl fmt::Display for VecElem {
    /// DSL form `(f1) o d1 + (f2) o d2`; parses back to the same field.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| {
            match c.as_constant() {
                Some(k) if k.is_one() => format!("d{}", i + 1),
                _ => format!("({c}) o d{}", i + 1),
            }
        });
        f.write_str(&join_sum(parts))
    }
}
