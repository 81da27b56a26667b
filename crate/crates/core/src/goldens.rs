//! Published closed forms, transcribed in their original anticommutator
//! presentation and normal-ordered only by the algebra engine.
//!
//! These are reference values for verification, not inputs to any solver.

use num_bigint::BigInt;
use num_rational::BigRational;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::hermitian::{DimExponents, DimensionfulOperator, UnscaleError};
use crate::weyl::{EpsilonSeries, GaussianRational, OperatorPoly};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `𝓜^e` for any integer `e`.
pub fn m_pow(m: &BigRational, e: i32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= m;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

fn x(n: u32) -> OperatorPoly {
    OperatorPoly::monomial(GaussianRational::one(), n, 0)
}

fn p(n: u32) -> OperatorPoly {
    OperatorPoly::monomial(GaussianRational::one(), 0, n)
}

/// `{x^a, p^b}`.
pub fn anti(a: u32, b: u32) -> OperatorPoly {
    x(a).anticommutator(&p(b))
}

/// Sum of `coefficient · operator` pairs.
fn combo(terms: &[(BigRational, OperatorPoly)]) -> OperatorPoly {
    terms
        .iter()
        .fold(OperatorPoly::zero(), |acc, (c, op)| &acc + &op.scale_ratio(c))
}

/// `Q₁ = −𝓜⁻⁴[(4/3)p³ + 𝓜²{x², p}]`.
pub fn q1(m: &BigRational) -> OperatorPoly {
    let inner = combo(&[(r(4, 3), p(3)), (m_pow(m, 2), anti(2, 1))]);
    inner.scale_ratio(&-m_pow(m, -4))
}

/// `Q₁ = −𝓜⁻⁴((4/3)p³ + 2𝓜² x p x)`, the second printed form.
pub fn q1_symmetric(m: &BigRational) -> OperatorPoly {
    let xpx = &(&x(1) * &p(1)) * &x(1);
    let inner = combo(&[(r(4, 3), p(3)), (m_pow(m, 2) * r(2, 1), xpx)]);
    inner.scale_ratio(&-m_pow(m, -4))
}

/// `Q₃ = 4𝓜⁻¹⁰[(32/15)p⁵ + (5/3)𝓜²{x², p³} + 𝓜⁴{x⁴, p} + 2𝓜² p]`.
pub fn q3_anticommutator_form(m: &BigRational) -> OperatorPoly {
    let inner = combo(&[
        (r(32, 15), p(5)),
        (r(5, 3) * m_pow(m, 2), anti(2, 3)),
        (m_pow(m, 4), anti(4, 1)),
        (r(2, 1) * m_pow(m, 2), p(1)),
    ]);
    inner.scale_ratio(&(r(4, 1) * m_pow(m, -10)))
}

/// `Q₃ = (128/15)𝓜⁻¹⁰p⁵ + (40/3)𝓜⁻⁸ x p³ x + 8𝓜⁻⁶ x² p x² + c·𝓜⁻⁸ p` with a
/// configurable last coefficient `c`.
pub fn q3_with_last_coefficient(m: &BigRational, last: BigRational) -> OperatorPoly {
    let xp3x = &(&x(1) * &p(3)) * &x(1);
    let x2px2 = &(&x(2) * &p(1)) * &x(2);
    combo(&[
        (r(128, 15) * m_pow(m, -10), p(5)),
        (r(40, 3) * m_pow(m, -8), xp3x),
        (r(8, 1) * m_pow(m, -6), x2px2),
        (last * m_pow(m, -8), p(1)),
    ])
}

/// The published `Q₃`, last coefficient `−32/𝓜⁸`.
pub fn q3(m: &BigRational) -> OperatorPoly {
    q3_with_last_coefficient(m, r(-32, 1))
}

/// `[H₁, Q₁] = 6𝓜⁻⁴({x², p²} + 𝓜²x⁴ + 2/3)`.
pub fn comm_h1_q1(m: &BigRational) -> OperatorPoly {
    let inner = combo(&[(r(1, 1), anti(2, 2)), (m_pow(m, 2), x(4)), (r(2, 3), OperatorPoly::one())]);
    inner.scale_ratio(&(r(6, 1) * m_pow(m, -4)))
}

/// `[H₁, Q₃] = −4𝓜⁻¹⁰(16{x²,p⁴} + 15𝓜²{x⁴,p²} + 64p² + 6𝓜⁴x⁶ + 76𝓜²x²)`.
pub fn comm_h1_q3(m: &BigRational) -> OperatorPoly {
    let inner = combo(&[
        (r(16, 1), anti(2, 4)),
        (r(15, 1) * m_pow(m, 2), anti(4, 2)),
        (r(64, 1), p(2)),
        (r(6, 1) * m_pow(m, 4), x(6)),
        (r(76, 1) * m_pow(m, 2), x(2)),
    ]);
    inner.scale_ratio(&(r(-4, 1) * m_pow(m, -10)))
}

/// `[[[H₁,Q₁],Q₁],Q₁] = −48𝓜⁻¹²(8p⁶ − 8𝓜²{x²,p⁴} + 9𝓜⁴{x⁴,p²} − 68𝓜²p² + 10𝓜⁶x⁶ + 28𝓜⁴x²)`.
pub fn triple_comm_h1_q1(m: &BigRational) -> OperatorPoly {
    let inner = combo(&[
        (r(8, 1), p(6)),
        (r(-8, 1) * m_pow(m, 2), anti(2, 4)),
        (r(9, 1) * m_pow(m, 4), anti(4, 2)),
        (r(-68, 1) * m_pow(m, 2), p(2)),
        (r(10, 1) * m_pow(m, 6), x(6)),
        (r(28, 1) * m_pow(m, 4), x(2)),
    ]);
    inner.scale_ratio(&(r(-48, 1) * m_pow(m, -12)))
}

/// `h⁽²⁾ = (3/2)𝓜⁻⁴({x², p²} + 𝓜²x⁴ + 2/3)`.
pub fn h2(m: &BigRational) -> OperatorPoly {
    let inner = combo(&[(r(1, 1), anti(2, 2)), (m_pow(m, 2), x(4)), (r(2, 3), OperatorPoly::one())]);
    inner.scale_ratio(&(r(3, 2) * m_pow(m, -4)))
}

/// `h⁽⁴⁾ = 2𝓜⁻¹²(p⁶ − 9𝓜²{x²,p⁴} − (51/8)𝓜⁴{x⁴,p²} − (81/2)𝓜²p² − (7/4)𝓜⁶x⁶ − (69/2)𝓜⁴x²)`.
pub fn h4(m: &BigRational) -> OperatorPoly {
    let inner = combo(&[
        (r(1, 1), p(6)),
        (r(-9, 1) * m_pow(m, 2), anti(2, 4)),
        (r(-51, 8) * m_pow(m, 4), anti(4, 2)),
        (r(-81, 2) * m_pow(m, 2), p(2)),
        (r(-7, 4) * m_pow(m, 6), x(6)),
        (r(-69, 2) * m_pow(m, 4), x(2)),
    ]);
    inner.scale_ratio(&(r(2, 1) * m_pow(m, -12)))
}

/// `X = x + 2i𝓜⁻⁴(p² + 𝓜²x²/2)ε + 𝓜⁻⁶({x, p²} − 𝓜²x³)ε²`.
pub fn x_observable(m: &BigRational) -> EpsilonSeries {
    let first = combo(&[(r(1, 1), p(2)), (r(1, 2) * m_pow(m, 2), x(2))])
        .scale(&GaussianRational::new(BigRational::zero(), r(2, 1) * m_pow(m, -4)));
    let second = combo(&[(r(1, 1), anti(1, 2)), (-m_pow(m, 2), x(3))]).scale_ratio(&m_pow(m, -6));
    EpsilonSeries::from_coeffs(alloc::vec![x(1), first, second])
}

/// `P = p − i𝓜⁻²{x, p}ε + 𝓜⁻⁶(2p³ − 𝓜²{x², p}/2)ε²`.
pub fn p_observable(m: &BigRational) -> EpsilonSeries {
    let first = anti(1, 1).scale(&GaussianRational::new(BigRational::zero(), -m_pow(m, -2)));
    let second = combo(&[(r(2, 1), p(3)), (r(-1, 2) * m_pow(m, 2), anti(2, 1))]).scale_ratio(&m_pow(m, -6));
    EpsilonSeries::from_coeffs(alloc::vec![p(1), first, second])
}

/// `(30n² + 30n + 11)/8`, the `ε²𝓜⁻⁴` coefficient of the `n`-th level.
pub fn energy_coefficient(n: u64) -> BigRational {
    let n = BigInt::from(n);
    let num = BigInt::from(30) * &n * &n + BigInt::from(30) * &n + BigInt::from(11);
    BigRational::new(num, BigInt::from(8))
}

/// The three ordering identities (with `ħ = 1`) as `(lhs, rhs)` pairs:
/// `p x² p − {x²,p²}/2 = 1`, `x²p²x² − {x⁴,p²}/2 = 4x²`, `p²x²p² − {x²,p⁴}/2 = 4p²`.
pub fn ordering_identities() -> [(OperatorPoly, OperatorPoly); 3] {
    let half = r(1, 2);
    let lhs1 = &(&(&p(1) * &x(2)) * &p(1)) - &anti(2, 2).scale_ratio(&half);
    let lhs2 = &(&(&x(2) * &p(2)) * &x(2)) - &anti(4, 2).scale_ratio(&half);
    let lhs3 = &(&(&p(2) * &x(2)) * &p(2)) - &anti(2, 4).scale_ratio(&half);
    [
        (lhs1, OperatorPoly::one()),
        (lhs2, x(2).scale_ratio(&r(4, 1))),
        (lhs3, p(2).scale_ratio(&r(4, 1))),
    ]
}

/// One printed term: `coef · m^m μ^mu ϵ^eps ħ^hbar · op`, `op` of total degree `deg`.
struct DimEntry {
    coef: BigRational,
    exps: [i32; 4],
    op: OperatorPoly,
    deg: u32,
}

fn entry(coef: BigRational, exps: [i32; 4], op: OperatorPoly, deg: u32) -> DimEntry {
    DimEntry { coef, exps, op, deg }
}

fn dimensionful(entries: &[DimEntry]) -> Result<DimensionfulOperator, UnscaleError> {
    let mut out = DimensionfulOperator::new();
    for s in entries {
        let [m, mu, eps, hbar] = s.exps;
        out.add_ordered(DimExponents::new(m, mu, eps, hbar), &s.coef, &s.op, s.deg)?;
    }
    Ok(out)
}

fn xpx(a: u32, b: u32) -> OperatorPoly {
    &(&x(a) * &p(b)) * &x(a)
}

fn pxp(a: u32, b: u32) -> OperatorPoly {
    &(&p(a) * &x(b)) * &p(a)
}

fn h_free() -> [DimEntry; 2] {
    [entry(r(1, 2), [-1, 0, 0, 0], p(2), 2), entry(r(1, 2), [0, 2, 0, 0], x(2), 2)]
}

/// The unscaled `h` through `ϵ⁴` in anticommutator form:
/// `p²/2m + μ²x²/2 + (3/2μ⁴)({x²,p²}/m + μ²x⁴ + 2ħ²/3m)ϵ²
///  + (2/μ¹²)(p⁶/m³ − 9μ²{x²,p⁴}/m² − 51μ⁴{x⁴,p²}/8m − 7μ⁶x⁶/4 − 81ħ²μ²p²/2m² − 69ħ²μ⁴x²/2m)ϵ⁴`.
pub fn h_dimensionful() -> DimensionfulOperator {
    let mut entries: Vec<DimEntry> = h_free().into_iter().collect();
    entries.extend([
        entry(r(3, 2), [-1, -4, 2, 0], anti(2, 2), 4),
        entry(r(3, 2), [0, -2, 2, 0], x(4), 4),
        entry(r(1, 1), [-1, -4, 2, 2], OperatorPoly::one(), 0),
        entry(r(2, 1), [-3, -12, 4, 0], p(6), 6),
        entry(r(-18, 1), [-2, -10, 4, 0], anti(2, 4), 6),
        entry(r(-51, 4), [-1, -8, 4, 0], anti(4, 2), 6),
        entry(r(-7, 2), [0, -6, 4, 0], x(6), 6),
        entry(r(-81, 1), [-2, -10, 4, 2], p(2), 2),
        entry(r(-69, 1), [-1, -8, 4, 2], x(2), 2),
    ]);
    dimensionful(&entries).expect("printed form is dimensionally consistent")
}

/// The same `h` with the `ħ²` terms absorbed into symmetric orderings:
/// `(1/mμ⁴)({x²,p²} + p x² p + 3mμ²x⁴/2)ϵ² + (2/μ¹²)(p⁶/m³ − 63μ²{x²,p⁴}/16m²
///  − 81μ²p²x²p²/8m² − 33μ⁴{x⁴,p²}/16m − c·μ⁴x²p²x²/m − 7μ⁶x⁶/4)ϵ⁴`, `c = 69/8`.
///
/// With `stray_hbar` the `x²p²x²` term carries an extra `ħ²`, as in the
/// printed operator form of `H` in terms of `X` and `P`; that version cannot be
/// assigned consistent units.
pub fn h_dimensionful_symmetric(stray_hbar: bool) -> Result<DimensionfulOperator, UnscaleError> {
    let mut entries: Vec<DimEntry> = h_free().into_iter().collect();
    entries.extend([
        entry(r(1, 1), [-1, -4, 2, 0], anti(2, 2), 4),
        entry(r(1, 1), [-1, -4, 2, 0], pxp(1, 2), 4),
        entry(r(3, 2), [0, -2, 2, 0], x(4), 4),
        entry(r(2, 1), [-3, -12, 4, 0], p(6), 6),
        entry(r(-63, 8), [-2, -10, 4, 0], anti(2, 4), 6),
        entry(r(-81, 4), [-2, -10, 4, 0], pxp(2, 2), 6),
        entry(r(-33, 8), [-1, -8, 4, 0], anti(4, 2), 6),
        entry(r(-69, 4), [-1, -8, 4, if stray_hbar { 2 } else { 0 }], xpx(2, 2), 6),
        entry(r(-7, 2), [0, -6, 4, 0], x(6), 6),
    ]);
    dimensionful(&entries)
}

/// `H_c = p²/2m + μ²x²/2 + (3/2μ⁴)(2x²p²/m + μ²x⁴)ϵ²
///  + (2/μ¹²)(p⁶/m³ − 18μ²x²p⁴/m² − 51μ⁴x⁴p²/4m − 7μ⁶x⁶/4)ϵ⁴` with commuting `x, p`.
pub fn classical_hamiltonian() -> DimensionfulOperator {
    let mut entries: Vec<DimEntry> = h_free().into_iter().collect();
    entries.extend([
        entry(r(3, 1), [-1, -4, 2, 0], OperatorPoly::monomial(GaussianRational::one(), 2, 2), 4),
        entry(r(3, 2), [0, -2, 2, 0], x(4), 4),
        entry(r(2, 1), [-3, -12, 4, 0], p(6), 6),
        entry(r(-36, 1), [-2, -10, 4, 0], OperatorPoly::monomial(GaussianRational::one(), 2, 4), 6),
        entry(r(-51, 2), [-1, -8, 4, 0], OperatorPoly::monomial(GaussianRational::one(), 4, 2), 6),
        entry(r(-7, 2), [0, -6, 4, 0], x(6), 6),
    ]);
    dimensionful(&entries).expect("printed form is dimensionally consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_forms_agree() {
        for m in [r(1, 1), r(3, 2), r(2, 7)] {
            assert_eq!(q1(&m), q1_symmetric(&m));
            assert_eq!(q3(&m), q3_anticommutator_form(&m));
        }
    }

    #[test]
    fn h2_is_quarter_commutator() {
        let m = r(3, 2);
        assert_eq!(h2(&m), comm_h1_q1(&m).scale_ratio(&r(1, 4)));
        let h4_from_ids = &comm_h1_q3(&m).scale_ratio(&r(1, 4)) - &triple_comm_h1_q1(&m).scale_ratio(&r(1, 192));
        assert_eq!(h4(&m), h4_from_ids);
    }

    #[test]
    fn ordering_identities_hold() {
        for (lhs, rhs) in ordering_identities() {
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn symmetric_h_agrees_and_stray_hbar_is_inconsistent() {
        assert_eq!(h_dimensionful_symmetric(false).unwrap(), h_dimensionful());
        assert!(matches!(
            h_dimensionful_symmetric(true),
            Err(UnscaleError::InconsistentExponents { order: 4, .. })
        ));
    }

    #[test]
    fn energy_coefficients() {
        assert_eq!(energy_coefficient(0), r(11, 8));
        assert_eq!(energy_coefficient(1), r(71, 8));
    }
}
