//! The quantum quotient on the circle: exact truncated-Fourier matrices on
//! the basis `e_n = e^{inθ}`, `|n| ≤ N`, with a twist `α` in the momentum
//! spectrum.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::chart::ChartSpec;
use crate::error::{Error, Result};
use crate::fun::FunElem;
use crate::normal::NormalForm;
use crate::scalar::GaussRat;

/// Sign of the substitution `z ↦ ±i·ħ`; `π(p)` carries the opposite sign.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum ZSign {
    /// `π(z) = −iħ`, `π(p) = ħ·diag(n + α)`.
    #[default]
    Minus,
    /// `π(z) = +iħ`, `π(p) = −ħ·diag(n + α)`.
    Plus,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepConfig {
    pub cutoff: usize,
    pub alpha: BigRational,
    pub hbar: BigRational,
    pub orientation: ZSign,
}

impl RepConfig {
    pub fn new(cutoff: usize, alpha: BigRational, hbar: BigRational) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InvalidConfig("cutoff must be positive".into()));
        }
        if !hbar.is_positive() {
            return Err(Error::InvalidConfig("hbar must be positive".into()));
        }
        Ok(RepConfig { cutoff, alpha, hbar, orientation: ZSign::default() })
    }

    pub fn with_orientation(mut self, orientation: ZSign) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn dim(&self) -> usize {
        2 * self.cutoff + 1
    }

    fn p_sign(&self) -> BigRational {
        match self.orientation {
            ZSign::Minus => BigRational::one(),
            ZSign::Plus => -BigRational::one(),
        }
    }

    /// `π(z)` as a scalar.
    pub fn z_value(&self) -> GaussRat {
        let im = match self.orientation {
            ZSign::Minus => -self.hbar.clone(),
            ZSign::Plus => self.hbar.clone(),
        };
        GaussRat::new(BigRational::zero(), im)
    }

    /// Eigenvalue of `π(p)` on `e_n`.
    pub fn momentum_eigenvalue(&self, n: i64) -> BigRational {
        self.p_sign() * &self.hbar * (BigRational::from_integer(n.into()) + &self.alpha)
    }
}

/// Square matrix on `e_n`, `n ∈ [−N, N]`; row and column index `n + N`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OpMatrix {
    cutoff: usize,
    entries: Vec<Vec<GaussRat>>,
}

impl OpMatrix {
    pub fn zero(cutoff: usize) -> Self {
        let d = 2 * cutoff + 1;
        OpMatrix { cutoff, entries: vec![vec![GaussRat::zero(); d]; d] }
    }

    pub fn identity(cutoff: usize) -> Self {
        Self::diagonal(cutoff, |_| GaussRat::one())
    }

    pub fn diagonal(cutoff: usize, f: impl Fn(i64) -> GaussRat) -> Self {
        let mut m = Self::zero(cutoff);
        for n in -(cutoff as i64)..=cutoff as i64 {
            m.set(n, n, f(n));
        }
        m
    }

    /// Truncated shift `e_n ↦ e_{n+k}`; images outside the window are dropped.
    pub fn shift(cutoff: usize, k: i64) -> Self {
        let mut m = Self::zero(cutoff);
        let big_n = cutoff as i64;
        for n in -big_n..=big_n {
            if (n + k).abs() <= big_n {
                m.set(n + k, n, GaussRat::one());
            }
        }
        m
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    fn idx(&self, n: i64) -> usize {
        (n + self.cutoff as i64) as usize
    }

    /// Entry `⟨e_row, A e_col⟩`.
    pub fn get(&self, row: i64, col: i64) -> &GaussRat {
        &self.entries[self.idx(row)][self.idx(col)]
    }

    pub fn set(&mut self, row: i64, col: i64, v: GaussRat) {
        let (r, c) = (self.idx(row), self.idx(col));
        self.entries[r][c] = v;
    }

    pub fn rows(&self) -> &[Vec<GaussRat>] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        OpMatrix { cutoff: self.cutoff, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&GaussRat::from_int(-1)))
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        let entries = self.entries.iter().map(|r| r.iter().map(|x| x * c).collect()).collect();
        OpMatrix { cutoff: self.cutoff, entries }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.dim();
        let mut out = Self::zero(self.cutoff);
        for i in 0..d {
            for (k, a) in self.entries[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &other.entries[k][j];
                    if !b.is_zero() {
                        out.entries[i][j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim();
        let entries = (0..d).map(|i| (0..d).map(|j| self.entries[j][i].conj()).collect()).collect();
        OpMatrix { cutoff: self.cutoff, entries }
    }

    /// First entry with `|row|, |col| ≤ radius` where the two matrices differ.
    pub fn interior_mismatch(&self, other: &Self, radius: i64) -> Option<EntryMismatch> {
        for row in -radius..=radius {
            for col in -radius..=radius {
                let (a, b) = (self.get(row, col), other.get(row, col));
                if a != b {
                    return Some(EntryMismatch { row, col, left: a.clone(), right: b.clone() });
                }
            }
        }
        None
    }

    /// Row-major JSON array of exact entry strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_plain_string())).collect()))
                .collect(),
        )
    }
}

impl fmt::Display for OpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            self.entries.iter().map(|r| r.iter().map(GaussRat::to_plain_string).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for r in &cells {
            let line: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EntryMismatch {
    pub row: i64,
    pub col: i64,
    pub left: GaussRat,
    pub right: GaussRat,
}

impl fmt::Display for EntryMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "entry ({}, {}): {} vs {}", self.row, self.col, self.left, self.right)
    }
}

fn require_circle(chart: ChartSpec) -> Result<()> {
    if chart == ChartSpec::circle() {
        Ok(())
    } else {
        Err(Error::WrongChart(chart))
    }
}

fn fun_rep(f: &FunElem, cutoff: usize) -> OpMatrix {
    let mut m = OpMatrix::zero(cutoff);
    for (k, c) in f.terms() {
        m = m.add(&OpMatrix::shift(cutoff, k[0] as i64).scale(c));
    }
    m
}

/// `π(f·p^a·z^k) = π(f)·π(p)^a·π(z)^k`, summed over terms.
pub fn quantum_rep(a: &NormalForm, cfg: &RepConfig) -> Result<OpMatrix> {
    require_circle(a.chart())?;
    let degree = a.fun_degree();
    if degree >= cfg.cutoff as i64 {
        return Err(Error::CutoffTooSmall { degree, cutoff: cfg.cutoff });
    }
    let n = cfg.cutoff;
    let z = cfg.z_value();
    let mut out = OpMatrix::zero(n);
    for (key, f) in a.terms() {
        let pa = key.momenta[0];
        let zk = (0..key.zpow).fold(GaussRat::one(), |acc, _| &acc * &z);
        let diag = OpMatrix::diagonal(n, |m| {
            let ev = GaussRat::real(cfg.momentum_eigenvalue(m));
            (0..pa).fold(zk.clone(), |acc, _| &acc * &ev)
        });
        out = out.add(&fun_rep(f, n).mul(&diag));
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum InteriorVerdict {
    Exact,
    Mismatch(EntryMismatch),
}

impl InteriorVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, InteriorVerdict::Exact)
    }
}

/// Radius of the block on which products of inputs of Fourier degree `≤ k`
/// are unaffected by truncation; errors unless `N > 2K`.
pub fn interior_radius(cfg: &RepConfig, k: i64) -> Result<i64> {
    let n = cfg.cutoff as i64;
    if n <= 2 * k {
        return Err(Error::CutoffTooSmall { degree: k, cutoff: cfg.cutoff });
    }
    Ok(n - 2 * k)
}

/// `π(A)·π(B) = π(A·B)` on the interior block `|n| ≤ N − 2K`.
pub fn rep_interior_check(a: &NormalForm, b: &NormalForm, cfg: &RepConfig) -> Result<InteriorVerdict> {
    require_circle(a.chart())?;
    require_circle(b.chart())?;
    let radius = interior_radius(cfg, a.fun_degree().max(b.fun_degree()))?;
    let lhs = quantum_rep(a, cfg)?.mul(&quantum_rep(b, cfg)?);
    let rhs = quantum_rep(&a.try_mul(b)?, cfg)?;
    Ok(match lhs.interior_mismatch(&rhs, radius) {
        None => InteriorVerdict::Exact,
        Some(m) => InteriorVerdict::Mismatch(m),
    })
}

/// `π(A*) = π(A)†` on the interior block for `A` of Fourier degree `K`.
pub fn adjoint_check(a: &NormalForm, cfg: &RepConfig) -> Result<InteriorVerdict> {
    let radius = interior_radius(cfg, a.fun_degree())?;
    let lhs = quantum_rep(&a.involution(), cfg)?;
    let rhs = quantum_rep(a, cfg)?.adjoint();
    Ok(match lhs.interior_mismatch(&rhs, radius) {
        None => InteriorVerdict::Exact,
        Some(m) => InteriorVerdict::Mismatch(m),
    })
}

/// Spectrum of `π(p)`, sorted ascending.
pub fn twist_spectrum(cfg: &RepConfig) -> Vec<BigRational> {
    let n = cfg.cutoff as i64;
    let mut s: Vec<BigRational> = (-n..=n).map(|m| cfg.momentum_eigenvalue(m)).collect();
    s.sort();
    s
}

/// Equal `ħ` and window size, and spectra that agree after shifting the
/// window by an integer.
pub fn twist_equivalent(a: &RepConfig, b: &RepConfig) -> bool {
    if a.hbar != b.hbar || a.cutoff != b.cutoff || a.orientation != b.orientation {
        return false;
    }
    let (sa, sb) = (twist_spectrum(a), twist_spectrum(b));
    let shift = (&sb[0] - &sa[0]) / &a.hbar;
    shift.is_integer() && sa.iter().zip(&sb).all(|(x, y)| y - x == &shift * &a.hbar)
}

pub fn spectrum_json(spectrum: &[BigRational]) -> Value {
    Value::Array(spectrum.iter().map(|r| Value::String(crate::scalar::render_rational(r))).collect())
}
