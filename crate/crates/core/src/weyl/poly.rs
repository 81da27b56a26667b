use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::rational::GaussianRational;

/// Exponent pair `(j, k)` of the normal-ordered monomial `x^j p^k`.
pub type MonomialKey = (u32, u32);

/// A single stored term `coeff · x^xexp · p^pexp` (x factors left of p factors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: GaussianRational,
    pub xexp: u32,
    pub pexp: u32,
}

/// Element of the Weyl algebra generated by `x`, `p` with `[x, p] = i`, kept in
/// x-left-of-p normal order.
///
/// Terms are stored in a `BTreeMap` keyed by `(xexp, pexp)`, so iteration order is
/// ascending and deterministic. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OperatorPoly {
    terms: BTreeMap<MonomialKey, GaussianRational>,
}

/// Discrete symmetries acting on operators by conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryKind {
    /// `x → −x`, `p → −p`.
    Parity,
    /// `p → −p`, `i → −i`.
    TimeReversal,
    /// Composition of parity and time reversal: `x → −x`, `i → −i`.
    PT,
}

impl OperatorPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn x() -> Self {
        Self::monomial(GaussianRational::one(), 1, 0)
    }

    pub fn p() -> Self {
        Self::monomial(GaussianRational::one(), 0, 1)
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(coeff: GaussianRational, xexp: u32, pexp: u32) -> Self {
        let mut out = Self::zero();
        out.add_term(xexp, pexp, &coeff);
        out
    }

    /// Builds a polynomial from already normal-ordered terms; duplicates are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (MonomialKey, GaussianRational)>,
    {
        let mut out = Self::zero();
        for ((j, k), c) in terms {
            out.add_term(j, k, &c);
        }
        out
    }

    /// Accumulates `c · x^j p^k`, dropping the entry if it cancels.
    pub fn add_term(&mut self, j: u32, k: u32, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((j, k)).or_insert_with(GaussianRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(j, k));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (MonomialKey, &GaussianRational)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(&(xexp, pexp), c)| Monomial {
            coeff: c.clone(),
            xexp,
            pexp,
        })
    }

    /// Coefficient of `x^j p^k` (zero if absent).
    pub fn coeff(&self, j: u32, k: u32) -> GaussianRational {
        self.terms.get(&(j, k)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree `j + k` over stored terms, 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(j, k)| j + k).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn scale_ratio(&self, r: &BigRational) -> Self {
        self.scale(&GaussianRational::real(r.clone()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = multiply(&acc, self);
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Self {
        commutator(self, other, false)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        commutator(self, other, true)
    }

    pub fn adjoint(&self) -> Self {
        adjoint(self)
    }

    pub fn is_hermitian(&self) -> bool {
        &adjoint(self) == self
    }

    pub fn is_anti_hermitian(&self) -> bool {
        adjoint(self) == -self
    }

    pub fn transform(&self, kind: SymmetryKind) -> Self {
        symmetry_transform(self, kind)
    }

    /// Position representation with `p = −i d/dx`.
    pub fn apply(&self, f: &XPoly) -> XPoly {
        apply_to_polynomial(self, f)
    }

    /// Keys where `self` and `other` differ, in ascending order.
    pub fn differing_monomials(&self, other: &Self) -> Vec<MonomialKey> {
        (self - other).terms.keys().copied().collect()
    }
}

/// `C(b, k) · C(c, k) · k!`, the integer weight of the `k`-fold contraction in `p^b x^c`.
fn contraction_weight(b: u32, c: u32, k: u32) -> BigInt {
    // b!/(b-k)! * c!/(c-k)! / k!
    let mut num = BigInt::one();
    for t in 0..k {
        num *= BigInt::from(b - t) * BigInt::from(c - t);
    }
    let mut den = BigInt::one();
    for t in 1..=k {
        den *= BigInt::from(t);
    }
    num / den
}

/// Normal-ordered product `a · b`.
///
/// Uses `p^b x^c = Σ_k C(b,k) C(c,k) k! (−i)^k x^(c−k) p^(b−k)`, the closed form of
/// repeatedly rewriting `p x = x p − i`.
pub fn multiply(a: &OperatorPoly, b: &OperatorPoly) -> OperatorPoly {
    let mut out = OperatorPoly::zero();
    for (&(ja, ka), ca) in &a.terms {
        for (&(jb, kb), cb) in &b.terms {
            let prod = ca * cb;
            for k in 0..=ka.min(jb) {
                let w = GaussianRational::real(BigRational::from_integer(contraction_weight(ka, jb, k)));
                // (−i)^k = i^(3k)
                let c = (&prod * &w).mul_i_pow(3 * k);
                out.add_term(ja + jb - k, ka + kb - k, &c);
            }
        }
    }
    out
}

/// `ab − ba`, or `ab + ba` when `anti` is set.
pub fn commutator(a: &OperatorPoly, b: &OperatorPoly, anti: bool) -> OperatorPoly {
    let ab = multiply(a, b);
    let ba = multiply(b, a);
    if anti {
        &ab + &ba
    } else {
        &ab - &ba
    }
}

/// Hermitian adjoint: conjugate coefficients and reverse each monomial to `p^k x^j`.
pub fn adjoint(a: &OperatorPoly) -> OperatorPoly {
    let mut out = OperatorPoly::zero();
    for (&(j, k), c) in &a.terms {
        let reordered = multiply(
            &OperatorPoly::monomial(c.conj(), 0, k),
            &OperatorPoly::monomial(GaussianRational::one(), j, 0),
        );
        out = &out + &reordered;
    }
    out
}

pub fn symmetry_transform(a: &OperatorPoly, kind: SymmetryKind) -> OperatorPoly {
    let terms = a.terms.iter().map(|(&(j, k), c)| {
        let flips = match kind {
            SymmetryKind::Parity => j + k,
            SymmetryKind::TimeReversal => k,
            SymmetryKind::PT => j,
        };
        let c = match kind {
            SymmetryKind::Parity => c.clone(),
            _ => c.conj(),
        };
        let c = if flips % 2 == 1 { -c } else { c };
        ((j, k), c)
    });
    OperatorPoly::from_terms(terms)
}

impl<'a> Add<&'a OperatorPoly> for &'a OperatorPoly {
    type Output = OperatorPoly;
    fn add(self, rhs: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        for (&(j, k), c) in &rhs.terms {
            out.add_term(j, k, c);
        }
        out
    }
}

impl<'a> Sub<&'a OperatorPoly> for &'a OperatorPoly {
    type Output = OperatorPoly;
    fn sub(self, rhs: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        for (&(j, k), c) in &rhs.terms {
            out.add_term(j, k, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a OperatorPoly> for &'a OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, rhs: &OperatorPoly) -> OperatorPoly {
        multiply(self, rhs)
    }
}

impl Neg for &OperatorPoly {
    type Output = OperatorPoly;
    fn neg(self) -> OperatorPoly {
        OperatorPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl Add for OperatorPoly {
    type Output = OperatorPoly;
    fn add(self, rhs: OperatorPoly) -> OperatorPoly {
        &self + &rhs
    }
}

impl Sub for OperatorPoly {
    type Output = OperatorPoly;
    fn sub(self, rhs: OperatorPoly) -> OperatorPoly {
        &self - &rhs
    }
}

impl Mul for OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, rhs: OperatorPoly) -> OperatorPoly {
        multiply(&self, &rhs)
    }
}

impl Neg for OperatorPoly {
    type Output = OperatorPoly;
    fn neg(self) -> OperatorPoly {
        -&self
    }
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&(j, k), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            match j {
                0 => {}
                1 => write!(f, "·x")?,
                _ => write!(f, "·x^{j}")?,
            }
            match k {
                0 => {}
                1 => write!(f, "·p")?,
                _ => write!(f, "·p^{k}")?,
            }
        }
        Ok(())
    }
}

/// Dense polynomial in the position variable with Gaussian-rational coefficients,
/// `coeffs[n]` multiplying `x^n`. Trailing zeros are trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct XPoly {
    coeffs: Vec<GaussianRational>,
}

impl XPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `x^n`.
    pub fn power(n: u32) -> Self {
        let mut coeffs = alloc::vec![GaussianRational::zero(); n as usize + 1];
        coeffs[n as usize] = GaussianRational::one();
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<GaussianRational>) -> Self {
        let mut out = Self { coeffs };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(GaussianRational::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> GaussianRational {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c * &GaussianRational::from_integer(n as i64))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Multiplies by `c · x^shift`.
    pub fn shift_scale(&self, shift: u32, c: &GaussianRational) -> Self {
        if self.is_zero() || c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = alloc::vec![GaussianRational::zero(); shift as usize];
        coeffs.extend(self.coeffs.iter().map(|a| a * c));
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.shift_scale(0, c)
    }
}

impl<'a> Add<&'a XPoly> for &'a XPoly {
    type Output = XPoly;
    fn add(self, rhs: &XPoly) -> XPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        XPoly::from_coeffs((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a XPoly> for &'a XPoly {
    type Output = XPoly;
    fn sub(self, rhs: &XPoly) -> XPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        XPoly::from_coeffs((0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

/// Acts with `a` on `f(x)` in the position representation, `p = −i d/dx`.
///
/// This path never uses the commutation relation, so it serves as an independent
/// check on [`multiply`].
pub fn apply_to_polynomial(a: &OperatorPoly, f: &XPoly) -> XPoly {
    let max_k = a.terms.keys().map(|&(_, k)| k).max().unwrap_or(0);
    let mut derivs = Vec::with_capacity(max_k as usize + 1);
    derivs.push(f.clone());
    for n in 1..=max_k as usize {
        let next = derivs[n - 1].derivative();
        derivs.push(next);
    }
    let mut out = XPoly::zero();
    for (&(j, k), c) in &a.terms {
        // (−i)^k = i^(3k)
        let c = c.mul_i_pow(3 * k);
        out = &out + &derivs[k as usize].shift_scale(j, &c);
    }
    out
}
