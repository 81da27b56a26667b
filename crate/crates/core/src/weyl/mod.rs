//! Exact arithmetic in the Weyl algebra `⟨x, p | [x, p] = i⟩`.
//!
//! Everything here is dimensionless (`ħ = 1`). Operators are stored in normal
//! order with all `x` factors left of all `p` factors, with Gaussian-rational
//! coefficients, so identities such as "this order vanishes" are decided by
//! exact comparison.

mod poly;
mod rational;
mod series;

pub use poly::{
    adjoint, apply_to_polynomial, commutator, multiply, symmetry_transform, Monomial, MonomialKey,
    OperatorPoly, SymmetryKind, XPoly,
};
pub use rational::{format_ratio, parse_ratio, ratio, ratio_to_f64, GaussianRational};
pub use series::{bch_conjugate, EpsilonSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("BCH depth must be at least 1, got {0}")]
    InvalidDepth(usize),
    #[error("BCH generator must have a vanishing ε^0 part")]
    GeneratorHasConstantPart,
}

/// Applies the nested commutator `[…[[base, c₁], c₂]…, cₙ]` to `f` by composing
/// position-representation actions only.
///
/// Used as an oracle: no normal-ordered product is ever formed.
pub fn apply_nested_commutator(base: &OperatorPoly, chain: &[&OperatorPoly], f: &XPoly) -> XPoly {
    match chain.split_last() {
        None => base.apply(f),
        Some((last, rest)) => {
            let inner_then_last = apply_nested_commutator(base, rest, &last.apply(f));
            let last_then_inner = last.apply(&apply_nested_commutator(base, rest, f));
            &inner_then_last - &last_then_inner
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_commutator_oracle_matches_algebra() {
        let a = &OperatorPoly::x().pow(3) + &OperatorPoly::p();
        let b = OperatorPoly::p().pow(2);
        let c = &OperatorPoly::x() * &OperatorPoly::p();
        let alg = a.commutator(&b).commutator(&c);
        for n in 0..8 {
            let f = XPoly::power(n);
            assert_eq!(apply_nested_commutator(&a, &[&b, &c], &f), alg.apply(&f));
        }
    }
}
