//! Equivalent Hermitian Hamiltonian `h = ρHρ⁻¹` and pseudo-Hermitian
//! observables `O = ρ⁻¹oρ`, with `ρ = e^{−Q/2}`.

mod dimensionful;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub use dimensionful::{m_power_doubled, unscale, unscale_poly, DimTerm, DimExponents, DimensionfulOperator, OperatorKind, UnscaleError};

use crate::metric::MetricSolution;
use crate::params::ModelParams;
use crate::weyl::{bch_conjugate, AlgebraError, EpsilonSeries, OperatorPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HermitianError {
    #[error("h^({order}) does not vanish")]
    NonvanishingOddOrder { order: usize },
    #[error("h^({order}) is not Hermitian")]
    NonHermitian { order: usize },
    #[error("h^({order}) disagrees with its closed form in terms of [H1, Q] commutators")]
    ClosedFormMismatch { order: usize },
    #[error("series through ε^{requested} needs Q through order {needed}, but only order {available} is solved")]
    InsufficientMetric {
        requested: usize,
        needed: u32,
        available: u32,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Highest `ε` order computable from a metric solved through `max_order`.
fn reachable_order(max_order: u32) -> usize {
    max_order as usize + 1
}

/// `h` through `ε⁴` (or `ε⁵` when `Q₅` is available) and the commutators
/// that express its even orders in closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianExpansion {
    pub series: EpsilonSeries,
    /// `[H₁, Q₁]`.
    pub comm_h1_q1: OperatorPoly,
    /// `[H₁, Q₃]`, when `Q₃` is known.
    pub comm_h1_q3: Option<OperatorPoly>,
    /// `[[[H₁, Q₁], Q₁], Q₁]`.
    pub triple_comm_h1_q1: OperatorPoly,
}

impl HermitianExpansion {
    /// `h⁽ʲ⁾`.
    pub fn coeff(&self, j: usize) -> OperatorPoly {
        self.series.coeff(j)
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }
}

/// Computes `h = e^{−Q/2} H e^{Q/2}` order by order.
///
/// Every odd order must vanish identically and every even order must be
/// Hermitian; `h⁽²⁾` and `h⁽⁴⁾` are cross-checked against
/// `¼[H₁,Q₁]` and `¼[H₁,Q₃] − (1/192)[[[H₁,Q₁],Q₁],Q₁]`.
pub fn hermitian_equivalent(sol: &MetricSolution) -> Result<HermitianExpansion, HermitianError> {
    let order = reachable_order(sol.max_order()).min(5);
    if sol.max_order() == 0 {
        return Err(HermitianError::InsufficientMetric {
            requested: 2,
            needed: 1,
            available: 0,
        });
    }
    let model = sol.model();
    let h = model.hamiltonian(order);
    let half_q = sol.generator(order).scale_ratio(&r(1, 2));
    let series = bch_conjugate(&h, &half_q, order)?;

    for j in 0..=order {
        let c = series.coeff(j);
        if j % 2 == 1 {
            if !c.is_zero() {
                return Err(HermitianError::NonvanishingOddOrder { order: j });
            }
        } else if !c.is_hermitian() {
            return Err(HermitianError::NonHermitian { order: j });
        }
    }

    let h1 = model.h1();
    let q1 = sol.q(1).expect("max_order >= 1");
    let comm_h1_q1 = h1.commutator(q1);
    let triple_comm_h1_q1 = comm_h1_q1.commutator(q1).commutator(q1);
    let comm_h1_q3 = sol.q(3).map(|q3| h1.commutator(q3));

    if series.coeff(2) != comm_h1_q1.scale_ratio(&r(1, 4)) {
        return Err(HermitianError::ClosedFormMismatch { order: 2 });
    }
    if let Some(c13) = &comm_h1_q3 {
        let closed = &c13.scale_ratio(&r(1, 4)) - &triple_comm_h1_q1.scale_ratio(&r(1, 192));
        if series.coeff(4) != closed {
            return Err(HermitianError::ClosedFormMismatch { order: 4 });
        }
    }

    Ok(HermitianExpansion {
        series,
        comm_h1_q1,
        comm_h1_q3,
        triple_comm_h1_q1,
    })
}

/// The individual BCH contributions `(1/(n!2ⁿ))[…[H_a, Q_{b₁}]…, Q_{bₙ}]` to
/// `h⁽ʲ⁾`, before any cancellation. Each is Hermitian for even `j` and
/// anti-Hermitian for odd `j`.
pub fn bch_contributions(sol: &MetricSolution, j: usize) -> Vec<OperatorPoly> {
    let model = sol.model();
    let h0 = model.h0();
    let bases = [(0usize, &h0), (1usize, model.h1())];
    let mut out = Vec::new();
    for (base_order, base) in bases {
        if base_order > j {
            continue;
        }
        let mut chains: Vec<Vec<u32>> = Vec::new();
        odd_compositions(j - base_order, sol.max_order(), &mut Vec::new(), &mut chains);
        for chain in chains {
            if chain.is_empty() {
                if base_order == j {
                    out.push(base.clone());
                }
                continue;
            }
            let mut acc = base.clone();
            for &o in &chain {
                acc = acc.commutator(sol.q(o).expect("chain only uses solved orders"));
            }
            let n = chain.len() as i64;
            let weight = (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(2 * k));
            out.push(acc.scale_ratio(&BigRational::new(BigInt::one(), weight)));
        }
    }
    out.retain(|c| !c.is_zero());
    out
}

/// Ordered sequences of odd parts `≤ max_part` summing to `total`.
fn odd_compositions(total: usize, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if total == 0 {
        out.push(prefix.clone());
        return;
    }
    let mut part = 1;
    while part <= max_part as usize && part <= total {
        prefix.push(part as u32);
        odd_compositions(total - part, max_part, prefix, out);
        prefix.pop();
        part += 2;
    }
}

/// `O = e^{Q/2} o e^{−Q/2} = o − ½[o,Q] + (1/8)[[o,Q],Q] − …` through `ε^order`.
pub fn pseudo_observable(o: &OperatorPoly, sol: &MetricSolution, order: usize) -> Result<EpsilonSeries, HermitianError> {
    let reachable = reachable_order(sol.max_order());
    if order > reachable || (order > 0 && sol.max_order() == 0) {
        return Err(HermitianError::InsufficientMetric {
            requested: order,
            needed: if order.is_multiple_of(2) { order as u32 - 1 } else { order as u32 },
            available: sol.max_order(),
        });
    }
    let o = EpsilonSeries::constant(o.clone(), order);
    if order == 0 {
        return Ok(o);
    }
    let minus_half_q = sol.generator(order).scale_ratio(&r(-1, 2));
    Ok(bch_conjugate(&o, &minus_half_q, order)?)
}

/// `X` and `P` together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservablePair {
    pub x: EpsilonSeries,
    pub p: EpsilonSeries,
}

pub fn observables(sol: &MetricSolution, order: usize) -> Result<ObservablePair, HermitianError> {
    Ok(ObservablePair {
        x: pseudo_observable(&OperatorPoly::x(), sol, order)?,
        p: pseudo_observable(&OperatorPoly::p(), sol, order)?,
    })
}

/// Replaces `x → X`, `p → P` in every normal-ordered monomial of `h`
/// (keeping the `ε` power each coefficient already carries) and truncates at the
/// common order. For the exact `h` this reproduces `H`.
pub fn represent_in_observables(h: &EpsilonSeries, pair: &ObservablePair) -> EpsilonSeries {
    let order = h.order().min(pair.x.order()).min(pair.p.order());
    let mut out = EpsilonSeries::zero(order);
    let mut xpow = alloc::vec![EpsilonSeries::constant(OperatorPoly::one(), order)];
    let mut ppow = xpow.clone();
    for j in 0..=order {
        let coeff = h.coeff(j);
        for ((a, b), c) in coeff.terms() {
            while xpow.len() <= a as usize {
                let next = xpow.last().unwrap().mul(&pair.x);
                xpow.push(next);
            }
            while ppow.len() <= b as usize {
                let next = ppow.last().unwrap().mul(&pair.p);
                ppow.push(next);
            }
            let term = xpow[a as usize].mul(&ppow[b as usize]).scale(c);
            // shift by ε^j
            for k in 0..=(order - j) {
                let shifted = &out.coeff(k + j) + &term.coeff(k);
                out.set_coeff(k + j, shifted);
            }
        }
    }
    out
}

/// `E_n ≈ 𝓜(n+½) + ε²(30n² + 30n + 11)/(8𝓜⁴)` in dimensionless units.
pub fn perturbative_energy(n: u64, params: &ModelParams) -> f64 {
    let m = params.scaled_frequency();
    let eps = params.scaled_coupling();
    let nf = n as f64;
    m * (nf + 0.5) + eps * eps * (30.0 * nf * nf + 30.0 * nf + 11.0) / (8.0 * m * m * m * m)
}
