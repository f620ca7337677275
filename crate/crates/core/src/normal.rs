//! PBW normal forms of the model algebra Λ̃.
//!
//! An element is a finite sum `Σ f_{α,k}(x) · p^α · z^k` with the function
//! leftmost, momenta `p1 ≤ … ≤ pn` in index order and a formal central `z`.
//! The only generator relation is `pᵢ·f = f·pᵢ + z·∂ᵢf` (and `pᵢ·pⱼ = pⱼ·pᵢ`),
//! so a product is brought back to normal form with the Leibniz expansion
//!
//! ```text
//! p^α · g = Σ_{γ ≤ α} C(α, γ) · z^{|γ|} · (∂^γ g) · p^{α−γ}
//! ```
//!
//! A frame-coordinate vector field `v = Σ vᵢ ∂ᵢ` embeds symmetrically as
//! `Σ vᵢ·pᵢ + (z/2)·∂ᵢvᵢ`, which is the Jordan product `½(vᵢ·pᵢ + pᵢ·vᵢ)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::chart::ChartSpec;
use crate::error::{Error, Result};
use crate::fun::{join_sum, render_scaled, FunElem};
use crate::scalar::GaussRat;
use crate::vector::VecElem;

/// Index of a normal-form term: momentum multi-index and z-power.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct NfKey {
    pub momenta: Vec<u32>,
    pub zpow: u32,
}

impl NfKey {
    pub fn p_degree(&self) -> u32 {
        self.momenta.iter().sum()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NormalForm {
    chart: ChartSpec,
    terms: BTreeMap<NfKey, FunElem>,
}

impl NormalForm {
    pub fn zero(chart: ChartSpec) -> Self {
        NormalForm { chart, terms: BTreeMap::new() }
    }

    pub fn one(chart: ChartSpec) -> Self {
        Self::fun(FunElem::one(chart))
    }

    pub fn scalar(chart: ChartSpec, c: GaussRat) -> Self {
        Self::fun(FunElem::constant(chart, c))
    }

    /// The central element `z`.
    pub fn z(chart: ChartSpec) -> Self {
        Self::term(FunElem::one(chart), vec![0; chart.dim], 1)
    }

    pub fn fun(f: FunElem) -> Self {
        let dim = f.chart().dim;
        Self::term(f, vec![0; dim], 0)
    }

    /// The momentum `p_{i+1}`, image of the frame field `∂_{i+1}`.
    pub fn momentum(chart: ChartSpec, i: usize) -> Result<Self> {
        chart.check_index(i)?;
        let mut a = vec![0; chart.dim];
        a[i] = 1;
        Ok(Self::term(FunElem::one(chart), a, 0))
    }

    /// `f · p^α · z^k`; the momentum vector must have the chart's length.
    pub fn term(f: FunElem, momenta: Vec<u32>, zpow: u32) -> Self {
        let chart = f.chart();
        assert_eq!(momenta.len(), chart.dim, "momentum multi-index length");
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(NfKey { momenta, zpow }, f);
        }
        NormalForm { chart, terms }
    }

    /// Symmetric embedding of a vector field: `Σ vᵢ pᵢ + (z/2) ∂ᵢvᵢ`.
    pub fn from_vector(v: &VecElem) -> Self {
        let chart = v.chart();
        let mut out = NormalForm::zero(chart);
        for (i, c) in v.coeffs().iter().enumerate() {
            let mut a = vec![0; chart.dim];
            a[i] = 1;
            out.add_term(NfKey { momenta: a, zpow: 0 }, c);
        }
        let half_div = v.divergence().scale(&GaussRat::frac(1, 2));
        out.add_term(NfKey { momenta: vec![0; chart.dim], zpow: 1 }, &half_div);
        out
    }

    /// Image of the Rinehart product `f ∘ v`.
    pub fn from_rinehart(f: &FunElem, v: &VecElem) -> Result<Self> {
        Ok(Self::from_vector(&VecElem::rinehart(f, v)?))
    }

    pub fn chart(&self) -> ChartSpec {
        self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NfKey, &FunElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn get(&self, key: &NfKey) -> Option<&FunElem> {
        self.terms.get(key)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total momentum degree.
    pub fn p_degree(&self) -> u32 {
        self.terms.keys().map(NfKey::p_degree).max().unwrap_or(0)
    }

    pub fn z_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.zpow).max().unwrap_or(0)
    }

    /// Largest degree (Euclid) or Fourier degree (Torus) among the coefficient functions.
    pub fn fun_degree(&self) -> i64 {
        self.terms.values().map(FunElem::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, key: NfKey, f: &FunElem) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(g) => {
                *g = &*g + f;
                if g.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, f.clone());
            }
        }
    }

    pub fn try_add(&self, other: &NormalForm) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let mut out = self.clone();
        for (k, f) in &other.terms {
            out.add_term(k.clone(), f);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return NormalForm::zero(self.chart);
        }
        NormalForm {
            chart: self.chart,
            terms: self.terms.iter().map(|(k, f)| (k.clone(), f.scale(c))).collect(),
        }
    }

    /// Multiply by `z^n`.
    pub fn mul_z(&self, n: u32) -> Self {
        NormalForm {
            chart: self.chart,
            terms: self
                .terms
                .iter()
                .map(|(k, f)| (NfKey { momenta: k.momenta.clone(), zpow: k.zpow + n }, f.clone()))
                .collect(),
        }
    }

    /// Associative product, reordered into normal form.
    pub fn try_mul(&self, other: &NormalForm) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let mut out = NormalForm::zero(self.chart);
        for (ka, f) in &self.terms {
            for (kb, g) in &other.terms {
                for (gamma, binom) in sub_multi_indices(&ka.momenta) {
                    let dg = g.derive_multi(&gamma)?;
                    if dg.is_zero() {
                        continue;
                    }
                    let coeff = (f * &dg).scale(&GaussRat::real(binom));
                    let shift: u32 = gamma.iter().sum();
                    let momenta: Vec<u32> = ka
                        .momenta
                        .iter()
                        .zip(&gamma)
                        .zip(&kb.momenta)
                        .map(|((a, c), b)| a - c + b)
                        .collect();
                    out.add_term(NfKey { momenta, zpow: ka.zpow + kb.zpow + shift }, &coeff);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = NormalForm::one(self.chart);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `[A, B] = A·B − B·A`.
    pub fn commutator(&self, other: &NormalForm) -> Result<Self> {
        Ok(&self.try_mul(other)? - &other.try_mul(self)?)
    }

    /// Lie bracket extended from the generators by the Leibniz rule in both slots.
    ///
    /// Each term `f·p^α·z^k` is read as the word `f, p_{i1}, …, p_{im}` with
    /// `z^k` pulled out (z brackets to zero). For words `a` and `b`,
    ///
    /// ```text
    /// {a, b} = Σ_{s,t} a_{<s} · b_{<t} · {a_s, b_t} · b_{>t} · a_{>s}
    /// ```
    ///
    /// with `{f, g} = 0`, `{pᵢ, pⱼ} = 0`, `{pᵢ, f} = ∂ᵢf = −{f, pᵢ}`.
    pub fn poisson_bracket(&self, other: &NormalForm) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let chart = self.chart;
        let mut out = NormalForm::zero(chart);
        for (ka, f) in &self.terms {
            let wa = word(chart, f, &ka.momenta);
            for (kb, g) in &other.terms {
                let wb = word(chart, g, &kb.momenta);
                let mut acc = NormalForm::zero(chart);
                for s in 0..wa.len() {
                    for t in 0..wb.len() {
                        let Some(mid) = letter_bracket(chart, &wa[s], &wb[t])? else {
                            continue;
                        };
                        let inner = &(&product(chart, &wb[..t]) * &mid) * &product(chart, &wb[t + 1..]);
                        let full = &(&product(chart, &wa[..s]) * &inner) * &product(chart, &wa[s + 1..]);
                        acc = &acc + &full;
                    }
                }
                out = &out + &acc.mul_z(ka.zpow + kb.zpow);
            }
        }
        Ok(out)
    }

    /// Exact division by `z`; every term must carry at least one power of `z`.
    pub fn divide_z(&self) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (k, f) in &self.terms {
            if k.zpow == 0 {
                let single = NormalForm::term(f.clone(), k.momenta.clone(), 0);
                return Err(Error::NotDivisible { term: single.to_string() });
            }
            terms.insert(NfKey { momenta: k.momenta.clone(), zpow: k.zpow - 1 }, f.clone());
        }
        Ok(NormalForm { chart: self.chart, terms })
    }

    /// The `*` involution: reverses products, conjugates functions, fixes
    /// momenta and sends `z ↦ −z`.
    pub fn involution(&self) -> Self {
        let chart = self.chart;
        let mut out = NormalForm::zero(chart);
        for (k, f) in &self.terms {
            let p = NormalForm::term(FunElem::one(chart), k.momenta.clone(), 0);
            let reversed = &p * &NormalForm::fun(f.conj());
            let sign = if k.zpow % 2 == 0 { GaussRat::one() } else { GaussRat::from_int(-1) };
            out = &out + &reversed.mul_z(k.zpow).scale(&sign);
        }
        out
    }

    /// The `z⁰` part, i.e. the image under `z ↦ 0`.
    pub fn z_free_part(&self) -> Self {
        NormalForm {
            chart: self.chart,
            terms: self.terms.iter().filter(|(k, _)| k.zpow == 0).map(|(k, f)| (k.clone(), f.clone())).collect(),
        }
    }

    /// Terms in canonical rendering order: descending momentum degree,
    /// then descending multi-index, then ascending z-power.
    pub fn render_order(&self) -> Vec<(&NfKey, &FunElem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            b.p_degree()
                .cmp(&a.p_degree())
                .then_with(|| b.momenta.cmp(&a.momenta))
                .then_with(|| a.zpow.cmp(&b.zpow))
        });
        v
    }
}

/// `∂^γ` multi-indices below `α` with their binomial weights `Π C(αᵢ, γᵢ)`.
fn sub_multi_indices(alpha: &[u32]) -> Vec<(Vec<u32>, BigRational)> {
    let mut out = vec![(Vec::with_capacity(alpha.len()), BigRational::from_integer(BigInt::from(1)))];
    for &a in alpha {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for (g, w) in &out {
            let mut binom = BigInt::from(1);
            for c in 0..=a {
                let mut g2 = g.clone();
                g2.push(c);
                next.push((g2, w * BigRational::from_integer(binom.clone())));
                binom = binom * BigInt::from(a - c) / BigInt::from(c + 1);
            }
        }
        out = next;
    }
    out
}

#[derive(Clone, Debug)]
enum Letter {
    Fun(FunElem),
    P(usize),
}

fn word(chart: ChartSpec, f: &FunElem, momenta: &[u32]) -> Vec<Letter> {
    let mut w = Vec::with_capacity(1 + momenta.iter().sum::<u32>() as usize);
    w.push(Letter::Fun(f.clone()));
    for (i, &a) in momenta.iter().enumerate() {
        w.extend(std::iter::repeat_n(Letter::P(i), a as usize));
    }
    debug_assert!(w.iter().all(|l| match l {
        Letter::Fun(g) => g.chart() == chart,
        Letter::P(i) => *i < chart.dim,
    }));
    w
}

fn letter_nf(chart: ChartSpec, l: &Letter) -> NormalForm {
    match l {
        Letter::Fun(f) => NormalForm::fun(f.clone()),
        Letter::P(i) => NormalForm::momentum(chart, *i).expect("letter index within chart"),
    }
}

fn product(chart: ChartSpec, letters: &[Letter]) -> NormalForm {
    letters.iter().fold(NormalForm::one(chart), |acc, l| &acc * &letter_nf(chart, l))
}

fn letter_bracket(chart: ChartSpec, a: &Letter, b: &Letter) -> Result<Option<NormalForm>> {
    let r = match (a, b) {
        (Letter::P(i), Letter::Fun(f)) => NormalForm::fun(f.derive(*i)?),
        (Letter::Fun(f), Letter::P(i)) => NormalForm::fun(-&f.derive(*i)?),
        _ => return Ok(None),
    };
    debug_assert_eq!(r.chart, chart);
    Ok((!r.is_zero()).then_some(r))
}

fn render_key(key: &NfKey) -> Option<String> {
    let mut parts = Vec::new();
    for (i, &a) in key.momenta.iter().enumerate() {
        match a {
            0 => {}
            1 => parts.push(format!("p{}", i + 1)),
            _ => parts.push(format!("p{}^{}", i + 1, a)),
        }
    }
    match key.zpow {
        0 => {}
        1 => parts.push("z".to_string()),
        k => parts.push(format!("z^{k}")),
    }
    (!parts.is_empty()).then(|| parts.join("*"))
}

impl fmt::Display for NormalForm {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (key, f) in self.render_order() {
            let m = render_key(key);
            match (f.as_constant(), &m) {
                (Some(c), _) => parts.push(render_scaled(&c, m.as_deref())),
                (None, None) => parts.push(f.to_string()),
                (None, Some(m)) if f.len() == 1 && f.renders_atomic() => parts.push(format!("{f}*{m}")),
                (None, Some(m)) => parts.push(format!("({f})*{m}")),
            }
        }
        fm.write_str(&join_sum(parts))
    }
}

impl Add for &NormalForm {
    type Output = NormalForm;
    fn add(self, rhs: &NormalForm) -> NormalForm {
        self.try_add(rhs).expect("NormalForm addition across charts")
    }
}

impl Neg for &NormalForm {
    type Output = NormalForm;
    fn neg(self) -> NormalForm {
        NormalForm { chart: self.chart, terms: self.terms.iter().map(|(k, f)| (k.clone(), -f)).collect() }
    }
}

impl Sub for &NormalForm {
    type Output = NormalForm;
    fn sub(self, rhs: &NormalForm) -> NormalForm {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &NormalForm {
    type Output = NormalForm;
    fn mul(self, rhs: &NormalForm) -> NormalForm {
        self.try_mul(rhs).expect("NormalForm product across charts")
    }
}
