//! Perturbative metric operator `η₊ = e^{−Q}`, `Q = Q₁ε + Q₃ε³ + Q₅ε⁵`.
//!
//! Each `Q_{2i+1}` solves `[H₀, Q_{2i+1}] = R_i` where the right-hand side is
//! built from lower orders. Solutions are sought in the span of the symmetrized
//! monomials `{x^{2j}, p^{2k+1}}`; coefficients are matched on normal-ordered
//! monomials and the resulting system is solved exactly over `ℚ(i)`.

mod linsolve;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use linsolve::{solve_exact, LinearSolution};

use crate::weyl::{
    apply_nested_commutator, EpsilonSeries, GaussianRational, MonomialKey, OperatorPoly, SymmetryKind, XPoly,
};

/// Highest odd order the solver knows the right-hand side for.
pub const MAX_SUPPORTED_ORDER: u32 = 5;

/// Largest `n` used by the position-representation oracle.
pub const ORACLE_MAX_POWER: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("order {0} is not supported (expected one of 1, 3, 5)")]
    UnsupportedOrder(u32),
    #[error("Q_{needed} is required but has not been solved")]
    MissingOrder { needed: u32 },
    #[error("no solution in ansatz space for Q_{order}")]
    NoSolution { order: u32 },
    #[error("Q_{order} is not unique: {free} free ansatz parameters")]
    FreeParameters { order: u32, free: usize },
}

/// `H = H₀ + εH₁` in dimensionless units, with a rational value of `𝓜`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicModel {
    m_value: BigRational,
    perturbation: OperatorPoly,
}

impl CubicModel {
    /// The cubic oscillator, `H₁ = i x³`.
    pub fn new(m_value: BigRational) -> Self {
        Self {
            m_value,
            perturbation: h1(),
        }
    }

    /// `H₁ = 0`; every metric order is then zero.
    pub fn unperturbed(m_value: BigRational) -> Self {
        Self {
            m_value,
            perturbation: OperatorPoly::zero(),
        }
    }

    pub fn m_value(&self) -> &BigRational {
        &self.m_value
    }

    pub fn h0(&self) -> OperatorPoly {
        h0(&self.m_value)
    }

    pub fn h1(&self) -> &OperatorPoly {
        &self.perturbation
    }

    /// `H₀ + εH₁` truncated at `ε^order`.
    pub fn hamiltonian(&self, order: usize) -> EpsilonSeries {
        let mut s = EpsilonSeries::constant(self.h0(), order);
        s.set_coeff(1, self.perturbation.clone());
        s
    }
}

/// `H₀ = p²/2 + 𝓜²x²/2`.
pub fn h0(m_value: &BigRational) -> OperatorPoly {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    OperatorPoly::from_terms([
        ((0, 2), GaussianRational::real(half.clone())),
        ((2, 0), GaussianRational::real(half * m_value * m_value)),
    ])
}

/// `H₁ = i x³`.
pub fn h1() -> OperatorPoly {
    OperatorPoly::monomial(GaussianRational::i(), 3, 0)
}

/// Solved metric orders together with the ansatz coefficients `c_{ijk}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSolution {
    model: CubicModel,
    max_order: u32,
    q_terms: BTreeMap<u32, OperatorPoly>,
    ansatz_coeffs: BTreeMap<(u32, u32, u32), GaussianRational>,
    widened: Vec<u32>,
}

impl MetricSolution {
    pub fn empty(model: CubicModel) -> Self {
        Self {
            model,
            max_order: 0,
            q_terms: BTreeMap::new(),
            ansatz_coeffs: BTreeMap::new(),
            widened: Vec::new(),
        }
    }

    /// Wraps externally supplied `Q_{2i+1}` (e.g. a cache or hand-written goldens).
    pub fn from_terms(model: CubicModel, q_terms: BTreeMap<u32, OperatorPoly>) -> Self {
        let max_order = q_terms.keys().copied().max().unwrap_or(0);
        Self {
            model,
            max_order,
            q_terms,
            ansatz_coeffs: BTreeMap::new(),
            widened: Vec::new(),
        }
    }

    pub fn model(&self) -> &CubicModel {
        &self.model
    }

    pub fn m_value(&self) -> &BigRational {
        &self.model.m_value
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn q(&self, order: u32) -> Option<&OperatorPoly> {
        self.q_terms.get(&order)
    }

    pub fn q_terms(&self) -> &BTreeMap<u32, OperatorPoly> {
        &self.q_terms
    }

    pub fn ansatz_coeffs(&self) -> &BTreeMap<(u32, u32, u32), GaussianRational> {
        &self.ansatz_coeffs
    }

    /// Odd orders at which the momentum range of the ansatz had to be widened.
    pub fn widened_orders(&self) -> &[u32] {
        &self.widened
    }

    fn require(&self, order: u32) -> Result<&OperatorPoly, MetricError> {
        self.q_terms.get(&order).ok_or(MetricError::MissingOrder { needed: order })
    }

    /// `Q` as a series truncated at `ε^order`. Orders beyond `max_order` are zero.
    pub fn generator(&self, order: usize) -> EpsilonSeries {
        let mut s = EpsilonSeries::zero(order);
        for (&k, q) in &self.q_terms {
            s.set_coeff(k as usize, q.clone());
        }
        s
    }
}

/// One term `coeff · [...[[H₁, Q_{a}], Q_{b}]..., Q_{z}]` of a right-hand side.
struct RhsTerm {
    coeff: BigRational,
    chain: &'static [u32],
}

fn rhs_terms(index: u32) -> Result<Vec<RhsTerm>, MetricError> {
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    Ok(match index {
        0 => alloc::vec![RhsTerm { coeff: r(-2, 1), chain: &[] }],
        1 => alloc::vec![RhsTerm { coeff: r(-1, 6), chain: &[1, 1] }],
        2 => alloc::vec![
            RhsTerm { coeff: r(-1, 6), chain: &[1, 3] },
            RhsTerm { coeff: r(-1, 6), chain: &[3, 1] },
            RhsTerm { coeff: r(1, 360), chain: &[1, 1, 1, 1] },
        ],
        _ => return Err(MetricError::UnsupportedOrder(2 * index + 1)),
    })
}

/// Right-hand side `R_i` of `[H₀, Q_{2i+1}] = R_i` for order index `i`.
pub fn rhs_for_order(index: u32, previous: &MetricSolution) -> Result<OperatorPoly, MetricError> {
    let mut out = OperatorPoly::zero();
    for term in rhs_terms(index)? {
        let mut acc = previous.model.h1().clone();
        for &order in term.chain {
            acc = acc.commutator(previous.require(order)?);
        }
        out = &out + &acc.scale_ratio(&term.coeff);
    }
    Ok(out)
}

/// Result of solving a single commutator equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzSolution {
    pub poly: OperatorPoly,
    /// `(j, k) → c` multiplying `{x^{2j}, p^{2k+1}}`.
    pub coeffs: BTreeMap<(u32, u32), GaussianRational>,
    pub k_max: u32,
    pub widened: bool,
}

/// `{x^{2j}, p^{2k+1}}` in normal order.
pub fn ansatz_element(j: u32, k: u32) -> OperatorPoly {
    let xs = OperatorPoly::monomial(GaussianRational::one(), 2 * j, 0);
    let ps = OperatorPoly::monomial(GaussianRational::one(), 0, 2 * k + 1);
    xs.anticommutator(&ps)
}

/// Solves `[H₀, Q_{2i+1}] = rhs` in the ansatz span with `j, k = 0..=i+1`.
///
/// If that span is inconsistent the momentum range is widened by one and the
/// solve retried; the widening is reported in the result.
pub fn solve_commutator_equation(
    rhs: &OperatorPoly,
    index: u32,
    m_value: &BigRational,
) -> Result<AnsatzSolution, MetricError> {
    let order = 2 * index + 1;
    let h0 = h0(m_value);
    let base = index + 1;
    for k_max in [base, base + 1] {
        let basis: Vec<(u32, u32)> = (0..=base).flat_map(|j| (0..=k_max).map(move |k| (j, k))).collect();
        let elements: Vec<OperatorPoly> = basis.iter().map(|&(j, k)| ansatz_element(j, k)).collect();
        let images: Vec<OperatorPoly> = elements.iter().map(|e| h0.commutator(e)).collect();

        let mut keys: Vec<MonomialKey> = images.iter().flat_map(|p| p.terms().map(|(k, _)| k)).collect();
        keys.extend(rhs.terms().map(|(k, _)| k));
        keys.sort_unstable();
        keys.dedup();

        let rows = keys
            .iter()
            .map(|&(a, b)| images.iter().map(|img| img.coeff(a, b)).collect())
            .collect();
        let target = keys.iter().map(|&(a, b)| rhs.coeff(a, b)).collect();

        match solve_exact(rows, target) {
            LinearSolution::Unique(c) => {
                let mut poly = OperatorPoly::zero();
                for (e, ci) in elements.iter().zip(&c) {
                    poly = &poly + &e.scale(ci);
                }
                let coeffs = basis.into_iter().zip(c).filter(|(_, ci)| !ci.is_zero()).collect();
                return Ok(AnsatzSolution {
                    poly,
                    coeffs,
                    k_max,
                    widened: k_max != base,
                });
            }
            LinearSolution::Underdetermined(free) => {
                return Err(MetricError::FreeParameters { order, free: free.len() });
            }
            LinearSolution::Inconsistent => continue,
        }
    }
    Err(MetricError::NoSolution { order })
}

/// Solves `Q₁, …, Q_{max_order}` for the cubic oscillator at the given `𝓜`.
pub fn solve_metric(max_order: u32, m_value: &BigRational) -> Result<MetricSolution, MetricError> {
    solve_metric_for(CubicModel::new(m_value.clone()), max_order)
}

pub fn solve_metric_for(model: CubicModel, max_order: u32) -> Result<MetricSolution, MetricError> {
    if !(max_order % 2 == 1 && max_order <= MAX_SUPPORTED_ORDER) {
        return Err(MetricError::UnsupportedOrder(max_order));
    }
    let mut sol = MetricSolution::empty(model);
    for index in 0..=(max_order - 1) / 2 {
        let order = 2 * index + 1;
        let rhs = rhs_for_order(index, &sol)?;
        let found = solve_commutator_equation(&rhs, index, sol.m_value())?;
        for ((j, k), c) in found.coeffs {
            sol.ansatz_coeffs.insert((index, j, k), c);
        }
        if found.widened {
            sol.widened.push(order);
        }
        sol.q_terms.insert(order, found.poly);
        sol.max_order = order;
    }
    Ok(sol)
}

/// Property checked by [`verify_metric`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricCheck {
    /// `[H₀, Q] − R` is the zero polynomial.
    Residual,
    /// `Q† = Q`.
    Hermitian,
    /// `𝒫 Q 𝒫 = −Q`.
    ParityOdd,
    /// `𝒯 Q 𝒯 = −Q`: odd in the momentum.
    MomentumOdd,
    /// Residual applied to `x^n` vanishes, computed without normal ordering.
    PositionOracle,
}

impl fmt::Display for MetricCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Residual => "residual",
            Self::Hermitian => "hermitian",
            Self::ParityOdd => "parity-odd",
            Self::MomentumOdd => "momentum-odd",
            Self::PositionOracle => "position oracle",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("Q_{order}: {check} check failed{}{}", fmt_monomial(.monomial), fmt_power(.power))]
pub struct MetricCheckFailure {
    pub order: u32,
    pub check: MetricCheck,
    /// First offending normal-ordered monomial, when the check is polynomial.
    pub monomial: Option<MonomialKey>,
    /// Offending `n` for the position oracle.
    pub power: Option<u32>,
}

fn fmt_monomial(m: &Option<MonomialKey>) -> alloc::string::String {
    match m {
        Some((j, k)) => alloc::format!(" at x^{j} p^{k}"),
        None => alloc::string::String::new(),
    }
}

fn fmt_power(n: &Option<u32>) -> alloc::string::String {
    match n {
        Some(n) => alloc::format!(" on x^{n}"),
        None => alloc::string::String::new(),
    }
}

/// Checks that passed, in the order they were run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MetricReport {
    pub passed: Vec<(u32, MetricCheck)>,
}

fn expect_equal(
    order: u32,
    check: MetricCheck,
    lhs: &OperatorPoly,
    rhs: &OperatorPoly,
) -> Result<(), MetricCheckFailure> {
    match lhs.differing_monomials(rhs).first() {
        None => Ok(()),
        Some(&m) => Err(MetricCheckFailure {
            order,
            check,
            monomial: Some(m),
            power: None,
        }),
    }
}

/// Runs every per-order check on a solution; the first failure is returned.
pub fn verify_metric(sol: &MetricSolution) -> Result<MetricReport, MetricCheckFailure> {
    let mut report = MetricReport::default();
    let h0 = sol.model.h0();
    for (&order, q) in &sol.q_terms {
        let index = (order - 1) / 2;
        let fail = |check| MetricCheckFailure {
            order,
            check,
            monomial: None,
            power: None,
        };
        let rhs = rhs_for_order(index, sol).map_err(|_| fail(MetricCheck::Residual))?;
        expect_equal(order, MetricCheck::Residual, &h0.commutator(q), &rhs)?;
        report.passed.push((order, MetricCheck::Residual));

        expect_equal(order, MetricCheck::Hermitian, &q.adjoint(), q)?;
        report.passed.push((order, MetricCheck::Hermitian));

        expect_equal(order, MetricCheck::ParityOdd, &q.transform(SymmetryKind::Parity), &-q)?;
        report.passed.push((order, MetricCheck::ParityOdd));

        expect_equal(order, MetricCheck::MomentumOdd, &q.transform(SymmetryKind::TimeReversal), &-q)?;
        report.passed.push((order, MetricCheck::MomentumOdd));

        for n in 0..=ORACLE_MAX_POWER {
            if !position_residual(sol, index, n).map_err(|_| fail(MetricCheck::PositionOracle))?.is_zero() {
                return Err(MetricCheckFailure {
                    order,
                    check: MetricCheck::PositionOracle,
                    monomial: None,
                    power: Some(n),
                });
            }
        }
        report.passed.push((order, MetricCheck::PositionOracle));
    }
    Ok(report)
}

/// `([H₀, Q_{2i+1}] − R_i) xⁿ` computed purely by composing differential actions.
pub fn position_residual(sol: &MetricSolution, index: u32, n: u32) -> Result<XPoly, MetricError> {
    let order = 2 * index + 1;
    let q = sol.require(order)?;
    let h0 = sol.model.h0();
    let f = XPoly::power(n);
    let mut residual = apply_nested_commutator(&h0, &[q], &f);
    for term in rhs_terms(index)? {
        let chain: Vec<&OperatorPoly> = term.chain.iter().map(|&o| sol.require(o)).collect::<Result<_, _>>()?;
        let image = apply_nested_commutator(sol.model.h1(), &chain, &f);
        let c = GaussianRational::real(term.coeff);
        residual = &residual - &image.scale(&c);
    }
    Ok(residual)
}

/// Converts an `f64` to the exactly equal rational.
pub fn rational_from_f64(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}

/// `1` as a rational; the conventional golden value of `𝓜`.
pub fn unit_m() -> BigRational {
    BigRational::one()
}

/// `true` when every ansatz coefficient is real, i.e. `Q` is a real combination of
/// Hermitian basis elements.
pub fn has_real_ansatz(sol: &MetricSolution) -> bool {
    sol.ansatz_coeffs.values().all(|c| c.im().is_zero())
}
