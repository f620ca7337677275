//! Sign conventions used across the crate.
//!
//! * Vector fields act on functions through the bracket: `{v, f} = v(f)`
//!   and `{f, v} = −v(f)`. The frame field `∂ᵢ` is the momentum `pᵢ`, so
//!   `{pᵢ, xⱼ} = δᵢⱼ`.
//! * The commutator is `[a, b] = a·b − b·a` and the central element enters as
//!   `[a, b] = z·{a, b}`; in particular `[pᵢ, xⱼ] = z·δᵢⱼ` and
//!   `[xᵢ, pⱼ] = −z·δᵢⱼ`.
//! * Partition certificates pair a function with a field as `{q, w} = −w(q)`.
//! * The classical bracket is `Σᵢ ∂a/∂pᵢ·∂b/∂xᵢ − ∂a/∂xᵢ·∂b/∂pᵢ`, making
//!   projection to `z = 0` a Poisson homomorphism with `{p₁, x₁} = 1`.
//! * The involution conjugates functions, fixes momenta, reverses products
//!   and sends `z ↦ −z`.
//! * The quantum quotient substitutes `z ↦ −iħ` with `π(p) = ħ·diag(n + α)`,
//!   the Schrödinger choice `p = −iħ d/dθ`. [`ZSign::Plus`] flips both signs.

pub use crate::quantum::ZSign;

pub const DEFAULT_Z_SIGN: ZSign = ZSign::Minus;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::ChartSpec;
    use crate::classical::ClassicalSymbol;
    use crate::fun::FunElem;
    use crate::normal::NormalForm;
    use crate::scalar::GaussRat;

    #[test]
    fn stated_signs_hold() {
        let c = ChartSpec::euclid(1);
        let x = NormalForm::fun(FunElem::coordinate(c, 0).unwrap());
        let p = NormalForm::momentum(c, 0).unwrap();
        assert_eq!(p.poisson_bracket(&x).unwrap(), NormalForm::one(c));
        assert_eq!(p.commutator(&x).unwrap(), NormalForm::z(c));
        assert_eq!(x.commutator(&p).unwrap(), -&NormalForm::z(c));
        assert_eq!(
            ClassicalSymbol::project(&p).bracket(&ClassicalSymbol::project(&x)).unwrap().to_normal_form(),
            NormalForm::one(c)
        );
        assert_eq!(NormalForm::z(c).involution(), NormalForm::scalar(c, GaussRat::from_int(-1)).mul_z(1));
        assert_eq!(ZSign::default(), DEFAULT_Z_SIGN);
    }
}
