//! Partition schemes and the construction of the central element as a sum
//! of commutators `Σ [qᵢ, gᵢ∘wᵢ]`.

use std::fmt;

use crate::chart::{ChartKind, ChartSpec};
use crate::error::{Error, Result};
use crate::expr::PExpr;
use crate::fun::FunElem;
use crate::normal::NormalForm;
use crate::scalar::GaussRat;
use crate::vector::VecElem;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Triple {
    pub q: FunElem,
    pub g: FunElem,
    pub w: VecElem,
}

impl Triple {
    pub fn new(q: FunElem, g: FunElem, w: VecElem) -> Self {
        Triple { q, g, w }
    }

    /// `{q, w} = −w(q)`.
    fn pairing(&self) -> Result<FunElem> {
        Ok(-&self.w.apply(&self.q)?)
    }

    /// The momentum-like element `gᵢ∘wᵢ` in the model algebra.
    pub fn momentum(&self) -> Result<NormalForm> {
        NormalForm::from_rinehart(&self.g, &self.w)
    }
}

/// Triples `(qᵢ, gᵢ, wᵢ)` with `Σ gᵢ·{qᵢ, wᵢ} = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartitionScheme {
    chart: ChartSpec,
    triples: Vec<Triple>,
}

impl PartitionScheme {
    /// Build and validate.
    pub fn new(chart: ChartSpec, triples: Vec<Triple>) -> Result<Self> {
        let s = Self::unchecked(chart, triples)?;
        validate_scheme(&s)?;
        Ok(s)
    }

    /// Build without checking the certificate; charts are still checked.
    pub fn unchecked(chart: ChartSpec, triples: Vec<Triple>) -> Result<Self> {
        for t in &triples {
            chart.ensure_same(&t.q.chart())?;
            chart.ensure_same(&t.g.chart())?;
            chart.ensure_same(&t.w.chart())?;
        }
        Ok(PartitionScheme { chart, triples })
    }

    pub fn chart(&self) -> ChartSpec {
        self.chart
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn with_triple(&self, t: Triple) -> Result<Self> {
        let mut triples = self.triples.clone();
        triples.push(t);
        Self::new(self.chart, triples)
    }

    /// `(−sinθ, cosθ, ∂)` and `(cosθ, sinθ, ∂)`.
    pub fn circle() -> Self {
        Self::torus(1).expect("circle scheme")
    }

    /// Three rotated charts on the circle: `qᵢ = −sin(θ+φᵢ)`,
    /// `gᵢ = cᵢ·cos(θ+φᵢ)`, `w = ∂`, with `e^{iφ} ∈ {1, (3±4i)/5}` and
    /// weights `7/16, 25/32, 25/32`.
    pub fn circle3() -> Self {
        let t = ChartSpec::circle();
        let d = VecElem::frame(t, 0).expect("frame");
        let rotations = [
            (GaussRat::one(), GaussRat::frac(7, 16)),
            (GaussRat::complex((3, 5), (4, 5)), GaussRat::frac(25, 32)),
            (GaussRat::complex((3, 5), (-4, 5)), GaussRat::frac(25, 32)),
        ];
        let triples = rotations
            .into_iter()
            .map(|(u, c)| {
                let (cos, sin) = shifted_trig(t, &u);
                Triple::new(-&sin, cos.scale(&c), d.clone())
            })
            .collect();
        Self::new(t, triples).expect("rotated circle scheme")
    }

    /// Per-circle pairs on each factor, with `g` scaled by `1/n`; `2n` triples.
    pub fn torus(n: usize) -> Result<Self> {
        let t = ChartSpec::new(ChartKind::Torus, n)?;
        let weight = GaussRat::frac(1, n as i64);
        let mut triples = Vec::with_capacity(2 * n);
        for j in 0..n {
            let (cos, sin) = (FunElem::cos(t, j)?, FunElem::sin(t, j)?);
            let d = VecElem::frame(t, j)?;
            triples.push(Triple::new(-&sin, cos.scale(&weight), d.clone()));
            triples.push(Triple::new(cos, sin.scale(&weight), d));
        }
        Self::new(t, triples)
    }

    /// Global pairs `(−xᵢ, 1/n, ∂ᵢ)`.
    pub fn euclid(n: usize) -> Result<Self> {
        let c = ChartSpec::new(ChartKind::Euclid, n)?;
        let weight = FunElem::constant(c, GaussRat::frac(1, n as i64));
        let triples = (0..n)
            .map(|i| Ok(Triple::new(-&FunElem::coordinate(c, i)?, weight.clone(), VecElem::frame(c, i)?)))
            .collect::<Result<_>>()?;
        Self::new(c, triples)
    }

    /// Builtin schemes: `circle`, `circle3`, `torus:n`, `euclid:n`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "circle" => Ok(Self::circle()),
            "circle3" => Ok(Self::circle3()),
            _ => match name.parse::<ChartSpec>() {
                Ok(c) if c.kind == ChartKind::Torus => Self::torus(c.dim),
                Ok(c) => Self::euclid(c.dim),
                Err(_) => Err(Error::UnknownScheme(name.to_string())),
            },
        }
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["circle", "circle3", "torus:n", "euclid:n"]
    }
}

/// `(cos(θ+φ), sin(θ+φ))` for `u = e^{iφ}` of modulus one.
fn shifted_trig(t: ChartSpec, u: &GaussRat) -> (FunElem, FunElem) {
    let ep = FunElem::fourier(t, 0, 1).expect("circle").scale(u);
    let em = FunElem::fourier(t, 0, -1).expect("circle").scale(&u.conj());
    let cos = (&ep + &em).scale(&GaussRat::frac(1, 2));
    let sin = (&ep - &em).scale(&GaussRat::complex((0, 1), (-1, 2)));
    (cos, sin)
}

impl fmt::Display for PartitionScheme {
    /// Scheme-file form, one `triple q, g, w` per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "chart {}", self.chart)?;
        for t in &self.triples {
            writeln!(f, "triple {}, {}, {}", t.q, t.g, render_field(&t.w))?;
        }
        Ok(())
    }
}

fn render_field(v: &VecElem) -> String {
    if v.is_zero() {
        "0*d1".to_string()
    } else {
        v.to_string()
    }
}

/// Check `Σ gᵢ·{qᵢ, wᵢ} = 1` and, through the model algebra,
/// `Σ {qᵢ, gᵢ∘wᵢ} = 1`.
pub fn validate_scheme(s: &PartitionScheme) -> Result<()> {
    let one = FunElem::one(s.chart);
    let mut cert = FunElem::zero(s.chart);
    for t in &s.triples {
        cert = &cert + &(&t.g * &t.pairing()?);
    }
    if cert != one {
        return Err(Error::CertificateFailed { residual: &cert - &one });
    }
    let mut rewritten = NormalForm::zero(s.chart);
    for t in &s.triples {
        rewritten = &rewritten + &NormalForm::fun(t.q.clone()).poisson_bracket(&t.momentum()?)?;
    }
    let residual = &rewritten - &NormalForm::one(s.chart);
    if !residual.is_zero() {
        let f = residual.terms().next().map(|(_, f)| f.clone()).unwrap_or_else(|| FunElem::zero(s.chart));
        return Err(Error::CertificateFailed { residual: f });
    }
    Ok(())
}

/// `Σ [qᵢ, gᵢ∘wᵢ]` as an unreduced expression tree.
pub fn construct_z_expr(s: &PartitionScheme) -> PExpr {
    PExpr::Sum(
        s.triples
            .iter()
            .map(|t| PExpr::commutator(PExpr::Fun(t.q.clone()), PExpr::Jordan(t.g.clone(), t.w.clone())))
            .collect(),
    )
}

/// Validate `s` and reduce `Σ [qᵢ, gᵢ∘wᵢ]`.
pub fn construct_z(s: &PartitionScheme) -> Result<NormalForm> {
    validate_scheme(s)?;
    construct_z_expr(s).normalize(s.chart)
}

/// Generators of the model algebra on `chart`: coordinates (or `e^{±iθⱼ}`),
/// momenta and `z`.
pub fn generators(chart: ChartSpec) -> Vec<NormalForm> {
    let mut out = Vec::new();
    for j in 0..chart.dim {
        match chart.kind {
            ChartKind::Euclid => out.push(NormalForm::fun(FunElem::coordinate(chart, j).expect("index"))),
            ChartKind::Torus => {
                for k in [1, -1] {
                    out.push(NormalForm::fun(FunElem::fourier(chart, j, k).expect("index")));
                }
            }
        }
    }
    for j in 0..chart.dim {
        out.push(NormalForm::momentum(chart, j).expect("index"));
    }
    out.push(NormalForm::z(chart));
    out
}

/// Both `[Zc, A]` and `{Zc, A}` vanish for every probe.
pub fn check_central(zc: &NormalForm, probes: &[NormalForm]) -> Result<()> {
    for a in probes {
        if !zc.commutator(a)?.is_zero() || !zc.poisson_bracket(a)?.is_zero() {
            return Err(Error::CentralityFailed { witness: a.to_string() });
        }
    }
    Ok(())
}

/// [`check_central`] for an unreduced tree: `[Zc, A]` and `{Zc, A}` are
/// formed as trees and reduced together.
pub fn check_central_expr(zc: &PExpr, chart: ChartSpec, probes: &[NormalForm]) -> Result<()> {
    for a in probes {
        let probe = PExpr::Sum(
            a.terms()
                .map(|(k, f)| {
                    let mut factors = vec![PExpr::Fun(f.clone())];
                    for (i, &m) in k.momenta.iter().enumerate() {
                        let d = PExpr::Vec(VecElem::frame(chart, i).expect("index"));
                        factors.extend(std::iter::repeat_n(d, m as usize));
                    }
                    factors.extend(std::iter::repeat_n(PExpr::Z, k.zpow as usize));
                    PExpr::Prod(factors)
                })
                .collect(),
        );
        // frames embed as momenta exactly, so the tree reduces to `a`
        debug_assert_eq!(probe.normalize(chart).ok().as_ref(), Some(a));
        let comm = PExpr::commutator(zc.clone(), probe.clone()).normalize(chart)?;
        let br = PExpr::bracket(zc.clone(), probe).normalize(chart)?;
        if !comm.is_zero() || !br.is_zero() {
            return Err(Error::CentralityFailed { witness: a.to_string() });
        }
    }
    Ok(())
}

/// `Σ ([{qᵢ,A}, pᵢ] + [qᵢ, {pᵢ,A}])`, the bracket `{Z, A}` expanded through
/// the derivation property of `{·, A}`; vanishes for a valid scheme.
pub fn expanded_bracket_with(s: &PartitionScheme, a: &NormalForm) -> Result<NormalForm> {
    let mut out = NormalForm::zero(s.chart);
    for t in &s.triples {
        let q = NormalForm::fun(t.q.clone());
        let p = t.momentum()?;
        out = &out + &q.poisson_bracket(a)?.commutator(&p)?;
        out = &out + &q.commutator(&p.poisson_bracket(a)?)?;
    }
    Ok(out)
}

/// Outcome of the cartesian Heisenberg relations on `euclid:n`.
#[derive(Clone, Debug)]
pub struct HeisenbergReport {
    /// `[xᵢ, pᵢ]` for each `i`.
    pub diagonal: Vec<NormalForm>,
    /// `[xᵢ, pⱼ] = −z·δᵢⱼ` for all `i, j`.
    pub canonical: bool,
    pub positions_commute: bool,
    pub momenta_commute: bool,
}

impl HeisenbergReport {
    pub fn independent_of_index(&self) -> bool {
        self.diagonal.windows(2).all(|w| w[0] == w[1])
    }

    pub fn holds(&self) -> bool {
        self.canonical && self.positions_commute && self.momenta_commute && self.independent_of_index()
    }
}

pub fn heisenberg_check(n: usize) -> Result<HeisenbergReport> {
    let c = ChartSpec::new(ChartKind::Euclid, n)?;
    let x: Vec<NormalForm> = (0..n).map(|i| NormalForm::fun(FunElem::coordinate(c, i).unwrap())).collect();
    let p: Vec<NormalForm> = (0..n).map(|i| NormalForm::momentum(c, i).unwrap()).collect();
    let minus_z = -&NormalForm::z(c);
    let mut report = HeisenbergReport {
        diagonal: Vec::with_capacity(n),
        canonical: true,
        positions_commute: true,
        momenta_commute: true,
    };
    for i in 0..n {
        for j in 0..n {
            let xp = x[i].commutator(&p[j])?;
            if i == j {
                report.canonical &= xp == minus_z;
                report.diagonal.push(xp);
            } else {
                report.canonical &= xp.is_zero();
            }
            report.positions_commute &= x[i].commutator(&x[j])?.is_zero();
            report.momenta_commute &= p[i].commutator(&p[j])?.is_zero();
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_schemes_validate() {
        for name in ["circle", "circle3", "torus:2", "torus:3", "euclid:1", "euclid:3"] {
            let s = PartitionScheme::builtin(name).unwrap();
            assert!(validate_scheme(&s).is_ok(), "{name}");
        }
        assert_eq!(PartitionScheme::torus(2).unwrap().triples().len(), 4);
        assert!(matches!(PartitionScheme::builtin("sphere"), Err(Error::UnknownScheme(_))));
    }

    #[test]
    fn broken_certificate_reports_residual() {
        let t = ChartSpec::circle();
        let (cos, sin) = (FunElem::cos(t, 0).unwrap(), FunElem::sin(t, 0).unwrap());
        let d = VecElem::frame(t, 0).unwrap();
        let triples = vec![Triple::new(-&sin, cos.clone(), d.clone()), Triple::new(cos, sin.pow(2), d)];
        match PartitionScheme::new(t, triples.clone()) {
            Err(Error::CertificateFailed { residual }) => {
                // cos² + sin³ − 1 = sin³ − sin²
                assert_eq!(residual, &sin.pow(3) - &sin.pow(2));
            }
            other => panic!("expected CertificateFailed, got {other:?}"),
        }
        let raw = PartitionScheme::unchecked(t, triples).unwrap();
        assert!(matches!(construct_z(&raw), Err(Error::CertificateFailed { .. })));
    }

    #[test]
    fn construct_z_is_z_for_every_scheme() {
        for name in ["circle", "circle3", "torus:2", "euclid:1", "euclid:2"] {
            let s = PartitionScheme::builtin(name).unwrap();
            assert_eq!(construct_z(&s).unwrap(), NormalForm::z(s.chart()), "{name}");
        }
    }

    #[test]
    fn circle_commutators_by_hand() {
        // [f, g·p] = −z·g·f' and functions commute, so the two commutators
        // are z·cos²θ and z·sin²θ
        let t = ChartSpec::circle();
        let s = PartitionScheme::circle();
        let parts: Vec<NormalForm> = s
            .triples()
            .iter()
            .map(|tr| NormalForm::fun(tr.q.clone()).commutator(&tr.momentum().unwrap()).unwrap())
            .collect();
        let cos = FunElem::cos(t, 0).unwrap();
        let sin = FunElem::sin(t, 0).unwrap();
        assert_eq!(parts[0], NormalForm::fun(cos.pow(2)).mul_z(1));
        assert_eq!(parts[1], NormalForm::fun(sin.pow(2)).mul_z(1));
    }

    #[test]
    fn redundant_triple_changes_nothing() {
        let s = PartitionScheme::circle();
        let t = ChartSpec::circle();
        let extra = Triple::new(FunElem::cos(t, 0).unwrap(), FunElem::zero(t), VecElem::frame(t, 0).unwrap());
        let s2 = s.with_triple(extra).unwrap();
        assert_eq!(construct_z(&s2).unwrap(), construct_z(&s).unwrap());
    }

    #[test]
    fn central_checks() {
        let c = ChartSpec::euclid(1);
        let z = NormalForm::z(c);
        let x = NormalForm::fun(FunElem::coordinate(c, 0).unwrap());
        let p = NormalForm::momentum(c, 0).unwrap();
        assert!(check_central(&z, &[&x * &p]).is_ok());
        match check_central(&x, &generators(c)) {
            Err(Error::CentralityFailed { witness }) => assert_eq!(witness, "p1"),
            other => panic!("expected CentralityFailed, got {other:?}"),
        }

        let s = PartitionScheme::circle();
        let t = s.chart();
        let raw = construct_z_expr(&s);
        let sin = NormalForm::fun(FunElem::sin(t, 0).unwrap());
        assert!(check_central_expr(&raw, t, std::slice::from_ref(&sin)).is_ok());
        assert!(check_central_expr(&raw, t, &generators(t)).is_ok());
        assert!(expanded_bracket_with(&s, &sin).unwrap().is_zero());
    }

    #[test]
    fn z_is_antihermitian() {
        let z = construct_z(&PartitionScheme::circle3()).unwrap();
        assert_eq!(z.involution(), -&z);
    }

    #[test]
    fn heisenberg() {
        for n in 1..=3 {
            let r = heisenberg_check(n).unwrap();
            assert!(r.holds(), "n = {n}");
            assert_eq!(r.diagonal.len(), n);
        }
    }

    #[test]
    fn scheme_renders_as_triples() {
        let text = PartitionScheme::euclid(1).unwrap().to_string();
        assert_eq!(text, "chart euclid:1\ntriple -x1, 1, d1\n");
    }
}
