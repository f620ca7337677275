//! The classical quotient `z = 0`: commutative symbols on the cotangent
//! bundle with the canonical Poisson bracket.

use std::collections::BTreeMap;
use std::fmt;

use crate::chart::ChartSpec;
use crate::error::Result;
use crate::fun::FunElem;
use crate::normal::NormalForm;
use crate::scalar::GaussRat;

/// `Σ f_α(x)·p^α` with commuting momenta.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ClassicalSymbol {
    chart: ChartSpec,
    terms: BTreeMap<Vec<u32>, FunElem>,
}

impl ClassicalSymbol {
    pub fn zero(chart: ChartSpec) -> Self {
        ClassicalSymbol { chart, terms: BTreeMap::new() }
    }

    /// Drop every term carrying a power of `z`.
    pub fn project(a: &NormalForm) -> Self {
        let mut out = Self::zero(a.chart());
        for (k, f) in a.terms() {
            if k.zpow == 0 {
                out.add_term(k.momenta.clone(), f);
            }
        }
        out
    }

    pub fn chart(&self) -> ChartSpec {
        self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FunElem)> {
        self.terms.iter()
    }

    fn add_term(&mut self, momenta: Vec<u32>, f: &FunElem) {
        if f.is_zero() {
            return;
        }
        let entry = self.terms.entry(momenta.clone()).or_insert_with(|| FunElem::zero(self.chart));
        *entry = &*entry + f;
        if entry.is_zero() {
            self.terms.remove(&momenta);
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let mut out = self.clone();
        for (a, f) in &other.terms {
            out.add_term(a.clone(), f);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        let mut out = Self::zero(self.chart);
        for (a, f) in &self.terms {
            out.add_term(a.clone(), &f.scale(c));
        }
        out
    }

    /// Commutative product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let mut out = Self::zero(self.chart);
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                let m = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(m, &(f * g));
            }
        }
        Ok(out)
    }

    /// `∂/∂xᵢ`.
    pub fn d_position(&self, i: usize) -> Result<Self> {
        let mut out = Self::zero(self.chart);
        for (a, f) in &self.terms {
            out.add_term(a.clone(), &f.derive(i)?);
        }
        Ok(out)
    }

    /// `∂/∂pᵢ`.
    pub fn d_momentum(&self, i: usize) -> Result<Self> {
        self.chart.check_index(i)?;
        let mut out = Self::zero(self.chart);
        for (a, f) in &self.terms {
            if a[i] == 0 {
                continue;
            }
            let mut b = a.clone();
            b[i] -= 1;
            out.add_term(b, &f.scale(&GaussRat::from_int(a[i] as i64)));
        }
        Ok(out)
    }

    /// `Σᵢ ∂a/∂pᵢ·∂b/∂xᵢ − ∂a/∂xᵢ·∂b/∂pᵢ`, so that `{p₁, x₁} = 1`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let mut out = Self::zero(self.chart);
        for i in 0..self.chart.dim {
            let plus = self.d_momentum(i)?.try_mul(&other.d_position(i)?)?;
            let minus = self.d_position(i)?.try_mul(&other.d_momentum(i)?)?;
            out = out.try_add(&plus)?.try_add(&minus.scale(&GaussRat::from_int(-1)))?;
        }
        Ok(out)
    }

    /// The same terms read as a `z`-free normal form.
    pub fn to_normal_form(&self) -> NormalForm {
        self.terms.iter().fold(NormalForm::zero(self.chart), |acc, (a, f)| {
            &acc + &NormalForm::term(f.clone(), a.clone(), 0)
        })
    }
}

impl fmt::Display for ClassicalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_normal_form())
    }
}
