use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::{multiply, OperatorPoly, SymmetryKind};
use super::rational::GaussianRational;
use super::AlgebraError;

/// Power series in the perturbation parameter, truncated after `ε^order`.
///
/// `coeffs[k]` is the exact coefficient of `ε^k`; every operation discards
/// contributions beyond the truncation order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsilonSeries {
    coeffs: Vec<OperatorPoly>,
}

impl EpsilonSeries {
    /// The zero series through `ε^order`.
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: alloc::vec![OperatorPoly::zero(); order + 1],
        }
    }

    /// `a` placed at `ε^0`.
    pub fn constant(a: OperatorPoly, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = a;
        s
    }

    /// Series from explicit coefficients; `coeffs.len() - 1` becomes the order.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<OperatorPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the ε^0 coefficient");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `ε^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> OperatorPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, k: usize) -> Option<&OperatorPoly> {
        self.coeffs.get(k)
    }

    pub fn coeffs(&self) -> &[OperatorPoly] {
        &self.coeffs
    }

    /// Replaces the coefficient of `ε^k`. Ignored beyond the truncation order.
    pub fn set_coeff(&mut self, k: usize, a: OperatorPoly) {
        if let Some(slot) = self.coeffs.get_mut(k) {
            *slot = a;
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs((0..=order).map(|k| self.coeff(k)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(OperatorPoly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&OperatorPoly) -> OperatorPoly) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map(|a| a.scale(c))
    }

    pub fn scale_ratio(&self, r: &BigRational) -> Self {
        self.map(|a| a.scale_ratio(r))
    }

    /// Truncated Cauchy product; the result has the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = &out.coeffs[i + j] + &multiply(a, b);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(OperatorPoly::one(), self.order());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.mul(other) - &other.mul(self)
    }

    pub fn adjoint(&self) -> Self {
        self.map(OperatorPoly::adjoint)
    }

    pub fn transform(&self, kind: SymmetryKind) -> Self {
        self.map(|a| a.transform(kind))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&OperatorPoly, &OperatorPoly) -> OperatorPoly) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order).map(|k| f(&self.coeffs[k], &other.coeffs[k])).collect(),
        }
    }
}

impl<'a> Add<&'a EpsilonSeries> for &'a EpsilonSeries {
    type Output = EpsilonSeries;
    fn add(self, rhs: &EpsilonSeries) -> EpsilonSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a EpsilonSeries> for &'a EpsilonSeries {
    type Output = EpsilonSeries;
    fn sub(self, rhs: &EpsilonSeries) -> EpsilonSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &EpsilonSeries {
    type Output = EpsilonSeries;
    fn neg(self) -> EpsilonSeries {
        self.map(|a| -a)
    }
}

/// `e^{−A} B e^{A} = B + [B,A] + (1/2!)[[B,A],A] + …`, truncated at the common
/// series order and at `depth` nested commutators.
///
/// `A` must have no `ε^0` part, so each nesting raises the lowest surviving order
/// by at least one and `depth = order` captures every contribution.
pub fn bch_conjugate(
    b: &EpsilonSeries,
    a: &EpsilonSeries,
    depth: usize,
) -> Result<EpsilonSeries, AlgebraError> {
    if depth < 1 {
        return Err(AlgebraError::InvalidDepth(depth));
    }
    if !a.coeff(0).is_zero() {
        return Err(AlgebraError::GeneratorHasConstantPart);
    }
    let order = b.order().min(a.order());
    let mut term = b.truncate(order);
    let mut sum = term.clone();
    for n in 1..=depth {
        let inv_n = BigRational::new(BigInt::from(1), BigInt::from(n as u64));
        term = term.commutator(a).scale_ratio(&inv_n);
        if term.is_zero() {
            break;
        }
        sum = &sum + &term;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::poly::XPoly;

    fn q(t: i64) -> GaussianRational {
        GaussianRational::from_integer(t)
    }

    #[test]
    fn zero_generator_is_identity() {
        let b = EpsilonSeries::constant(OperatorPoly::x().pow(2), 3);
        let a = EpsilonSeries::zero(3);
        assert_eq!(bch_conjugate(&b, &a, 3).unwrap(), b);
    }

    #[test]
    fn depth_zero_rejected() {
        let b = EpsilonSeries::constant(OperatorPoly::x(), 2);
        assert_eq!(
            bch_conjugate(&b, &EpsilonSeries::zero(2), 0),
            Err(AlgebraError::InvalidDepth(0))
        );
        let a = EpsilonSeries::constant(OperatorPoly::p(), 2);
        assert_eq!(bch_conjugate(&b, &a, 2), Err(AlgebraError::GeneratorHasConstantPart));
    }

    #[test]
    fn translation_generator_shifts_position() {
        // A = i·t·p at first order; e^{-A} x e^{A} acts as x − t, i.e. translation
        // conjugation by e^{t d/dx}.
        let t = 3;
        let mut a = EpsilonSeries::zero(1);
        a.set_coeff(1, OperatorPoly::p().scale(&GaussianRational::imag_ratio(t, 1)));
        let b = EpsilonSeries::constant(OperatorPoly::x(), 1);
        let out = bch_conjugate(&b, &a, 4).unwrap();
        assert_eq!(out.coeff(0), OperatorPoly::x());
        assert_eq!(out.coeff(1), OperatorPoly::constant(q(-t)));
        // oracle: (x·f)(x+t) − t·f at first order in the shift, checked on x^n
        for n in 0..6 {
            let f = XPoly::power(n);
            let lhs = out.coeff(1).apply(&f);
            let rhs = f.scale(&q(-t));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn series_product_truncates() {
        let mut s = EpsilonSeries::zero(2);
        s.set_coeff(1, OperatorPoly::x());
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(2), OperatorPoly::x().pow(2));
        assert!(s.pow(3).is_zero());
    }
}
