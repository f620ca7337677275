//! Coefficient function rings.
//!
//! On `euclid:n` a [`FunElem`] is a polynomial in `x1..xn`; on `torus:n` it is a
//! finite Fourier sum `Σ c_k e^{i k·θ}`. Both are stored as a sparse map from
//! exponent vectors to Gaussian-rational coefficients, so multiplication is
//! convolution of coefficient maps and equality is exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::chart::{ChartKind, ChartSpec};
use crate::error::{Error, Result};
use crate::scalar::GaussRat;

/// Exponent vector: `ℕⁿ` powers of `x` on Euclid charts, `ℤⁿ` frequencies on tori.
pub type Exps = Vec<i32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FunElem {
    chart: ChartSpec,
    terms: BTreeMap<Exps, GaussRat>,
}

impl FunElem {
    pub fn zero(chart: ChartSpec) -> Self {
        FunElem { chart, terms: BTreeMap::new() }
    }

    pub fn constant(chart: ChartSpec, c: GaussRat) -> Self {
        Self::monomial(chart, vec![0; chart.dim], c).expect("constant monomial is always valid")
    }

    pub fn one(chart: ChartSpec) -> Self {
        Self::constant(chart, GaussRat::one())
    }

    /// `c · x^e` (Euclid) or `c · e^{i e·θ}` (Torus).
    pub fn monomial(chart: ChartSpec, exps: Exps, c: GaussRat) -> Result<Self> {
        if exps.len() != chart.dim {
            return Err(Error::MalformedExpr(format!(
                "exponent vector of length {} on {chart}",
                exps.len()
            )));
        }
        if chart.kind == ChartKind::Euclid && exps.iter().any(|&e| e < 0) {
            return Err(Error::MalformedExpr("negative power on a Euclid chart".into()));
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Ok(FunElem { chart, terms })
    }

    /// Build from arbitrary `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(chart: ChartSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exps, GaussRat)>,
    {
        let mut out = FunElem::zero(chart);
        for (e, c) in terms {
            let m = FunElem::monomial(chart, e, c)?;
            out = &out + &m;
        }
        Ok(out)
    }

    /// Coordinate function `x_{i+1}` on a Euclid chart.
    pub fn coordinate(chart: ChartSpec, i: usize) -> Result<Self> {
        chart.check_index(i)?;
        if chart.kind != ChartKind::Euclid {
            return Err(Error::MalformedExpr(format!("coordinate x{} needs a Euclid chart", i + 1)));
        }
        let mut e = vec![0; chart.dim];
        e[i] = 1;
        Self::monomial(chart, e, GaussRat::one())
    }

    /// `e^{i k θ_{j+1}}` on a torus chart.
    pub fn fourier(chart: ChartSpec, j: usize, k: i32) -> Result<Self> {
        chart.check_index(j)?;
        if chart.kind != ChartKind::Torus {
            return Err(Error::MalformedExpr("Fourier modes need a torus chart".into()));
        }
        let mut e = vec![0; chart.dim];
        e[j] = k;
        Self::monomial(chart, e, GaussRat::one())
    }

    /// `cos θ_{j+1} = (e^{iθ} + e^{-iθ})/2`.
    pub fn cos(chart: ChartSpec, j: usize) -> Result<Self> {
        let half = GaussRat::frac(1, 2);
        Ok(&Self::fourier(chart, j, 1)?.scale(&half) + &Self::fourier(chart, j, -1)?.scale(&half))
    }

    /// `sin θ_{j+1} = (e^{iθ} - e^{-iθ})/(2i)`.
    pub fn sin(chart: ChartSpec, j: usize) -> Result<Self> {
        let c = GaussRat::complex((0, 1), (-1, 2));
        Ok(&Self::fourier(chart, j, 1)?.scale(&c) - &Self::fourier(chart, j, -1)?.scale(&c))
    }

    pub fn chart(&self) -> ChartSpec {
        self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &GaussRat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[i32]) -> GaussRat {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// The value when the element is a constant, `None` otherwise.
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Euclid: total degree. Torus: largest `|k_j|` over all modes.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| match self.chart.kind {
                ChartKind::Euclid => e.iter().map(|&k| k as i64).sum(),
                ChartKind::Torus => e.iter().map(|&k| (k as i64).abs()).max().unwrap_or(0),
            })
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return FunElem::zero(self.chart);
        }
        FunElem {
            chart: self.chart,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &FunElem) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(&mut terms, e.clone(), c);
        }
        Ok(FunElem { chart: self.chart, terms })
    }

    /// Ring product; fails only when the charts differ.
    pub fn try_mul(&self, other: &FunElem) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                accumulate(&mut terms, e, &(ca * cb));
            }
        }
        Ok(FunElem { chart: self.chart, terms })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = FunElem::one(self.chart);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative along the frame field `∂_{i+1}`.
    ///
    /// Euclid: formal derivative in `x_{i+1}`. Torus: `e^{i k·θ} ↦ i k_i e^{i k·θ}`.
    pub fn derive(&self, i: usize) -> Result<Self> {
        self.chart.check_index(i)?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[i];
            if k == 0 {
                continue;
            }
            let factor = GaussRat::from_int(k as i64);
            match self.chart.kind {
                ChartKind::Euclid => {
                    let mut e2 = e.clone();
                    e2[i] -= 1;
                    accumulate(&mut terms, e2, &(c * &factor));
                }
                ChartKind::Torus => {
                    accumulate(&mut terms, e.clone(), &(c * &factor).mul_i_pow(1));
                }
            }
        }
        Ok(FunElem { chart: self.chart, terms })
    }

    /// Iterated derivative `∂^γ` for a multi-index `γ`.
    pub fn derive_multi(&self, gamma: &[u32]) -> Result<Self> {
        let mut out = self.clone();
        for (i, &g) in gamma.iter().enumerate() {
            for _ in 0..g {
                out = out.derive(i)?;
            }
        }
        Ok(out)
    }

    /// Complex conjugation: conjugates coefficients and, on tori, negates frequencies.
    pub fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let e = match self.chart.kind {
                    ChartKind::Euclid => e.clone(),
                    ChartKind::Torus => e.iter().map(|k| -k).collect(),
                };
                (e, c.conj())
            })
            .collect();
        FunElem { chart: self.chart, terms }
    }

    /// Real-valued as a function: fixed by [`FunElem::conj`].
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Numeric evaluation at a point (coordinates or angles). Oracle use only.
    pub fn eval_f64(&self, point: &[f64]) -> (f64, f64) {
        let (mut re, mut im) = (0.0, 0.0);
        for (e, c) in &self.terms {
            let (cr, ci) = c.to_f64_pair();
            let (br, bi) = match self.chart.kind {
                ChartKind::Euclid => {
                    let v: f64 = e.iter().zip(point).map(|(&k, &x)| x.powi(k)).product();
                    (v, 0.0)
                }
                ChartKind::Torus => {
                    let phase: f64 = e.iter().zip(point).map(|(&k, &t)| k as f64 * t).sum();
                    (phase.cos(), phase.sin())
                }
            };
            re += cr * br - ci * bi;
            im += cr * bi + ci * br;
        }
        (re, im)
    }

    /// Terms in rendering order: descending degree, then descending exponents.
    fn render_order(&self) -> Vec<(&Exps, &GaussRat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        let kind = self.chart.kind;
        v.sort_by(|(a, _), (b, _)| render_cmp(kind, b, a));
        v
    }

    /// True when the rendering is a single product (no top-level `+`/`-`).
    pub(crate) fn renders_atomic(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.values().next().unwrap().is_atomic(),
            _ => false,
        }
    }
}

fn render_cmp(kind: ChartKind, a: &Exps, b: &Exps) -> Ordering {
    match kind {
        ChartKind::Euclid => {
            let da: i64 = a.iter().map(|&k| k as i64).sum();
            let db: i64 = b.iter().map(|&k| k as i64).sum();
            da.cmp(&db).then_with(|| a.cmp(b))
        }
        ChartKind::Torus => a.cmp(b),
    }
}

pub(crate) fn accumulate(terms: &mut BTreeMap<Exps, GaussRat>, e: Exps, c: &GaussRat) {
    if c.is_zero() {
        return;
    }
    match terms.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn render_monomial(kind: ChartKind, e: &[i32]) -> Option<String> {
    if e.iter().all(|&k| k == 0) {
        return None;
    }
    Some(match kind {
        ChartKind::Euclid => e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k != 0)
            .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
            .collect::<Vec<_>>()
            .join("*"),
        ChartKind::Torus => {
            let ks: Vec<String> = e.iter().map(|k| k.to_string()).collect();
            format!("e({})", ks.join(","))
        }
    })
}

/// Render `c * m` where `m` is an optional product of factors.
pub(crate) fn render_scaled(c: &GaussRat, m: Option<&str>) -> String {
    match m {
        None => c.to_string(),
        Some(m) if c.is_one() => m.to_string(),
        Some(m) if (-c).is_one() => format!("-{m}"),
        Some(m) => format!("{c}*{m}"),
    }
}

/// Join rendered summands with ` + ` / ` - `.
pub(crate) fn join_sum<I: IntoIterator<Item = String>>(parts: I) -> String {
    let mut out = String::new();
    for (n, p) in parts.into_iter().enumerate() {
        if n == 0 {
            out.push_str(&p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&p);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for FunElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = self.chart.kind;
        let parts = self
            .render_order()
            .into_iter()
            .map(|(e, c)| render_scaled(c, render_monomial(kind, e).as_deref()));
        f.write_str(&join_sum(parts))
    }
}

impl Add for &FunElem {
    type Output = FunElem;
    /// Panics on a chart mismatch; use [`FunElem::try_add`] for a checked sum.
    fn add(self, rhs: &FunElem) -> FunElem {
        self.try_add(rhs).expect("FunElem addition across charts")
    }
}

impl Sub for &FunElem {
    type Output = FunElem;
    fn sub(self, rhs: &FunElem) -> FunElem {
        self + &(-rhs)
    }
}

impl Neg for &FunElem {
    type Output = FunElem;
    fn neg(self) -> FunElem {
        FunElem {
            chart: self.chart,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &FunElem {
    type Output = FunElem;
    /// Panics on a chart mismatch; use [`FunElem::try_mul`] for a checked product.
    fn mul(self, rhs: &FunElem) -> FunElem {
        self.try_mul(rhs).expect("FunElem product across charts")
    }
}
