//! Restoring physical units: `x → x/ℓ`, `p → ℓp/ħ`, `𝓜 → ℓ²√m μ/ħ`,
//! `ε → ℓ⁵mϵ/ħ²`, with an overall unit prefactor fixed by the operator kind.

use alloc::collections::BTreeMap;
use core::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::goldens::m_pow;
use crate::params::ModelParams;
use crate::weyl::{EpsilonSeries, GaussianRational, OperatorPoly};

/// What a dimensionless series represents. Fixes the power of `𝓜` carried by
/// each coefficient and the unit prefactor restored by [`unscale`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorKind {
    /// Unit `ħ²/(mℓ²)`.
    Energy,
    /// Unit `ℓ`.
    Position,
    /// Unit `ħ/ℓ`.
    Momentum,
    /// No unit; `Q` and friends.
    Dimensionless,
}

impl OperatorKind {
    /// Twice the `𝓜`-weight under `x → 𝓜^{−1/2}x`, `p → 𝓜^{1/2}p`.
    fn doubled_weight(self) -> i64 {
        match self {
            OperatorKind::Energy => 2,
            OperatorKind::Position => -1,
            OperatorKind::Momentum => 1,
            OperatorKind::Dimensionless => 0,
        }
    }

    /// Exponents of `(m, ħ, ℓ)` in the unit prefactor.
    fn unit(self) -> (i64, i64, i64) {
        match self {
            OperatorKind::Energy => (-1, 2, -2),
            OperatorKind::Position => (0, 0, 1),
            OperatorKind::Momentum => (0, 1, -1),
            OperatorKind::Dimensionless => (0, 0, 0),
        }
    }
}

/// Integer exponents of the physical constants attached to one monomial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimExponents {
    pub m: i32,
    pub mu: i32,
    pub eps: i32,
    pub hbar: i32,
}

impl DimExponents {
    pub fn new(m: i32, mu: i32, eps: i32, hbar: i32) -> Self {
        DimExponents { m, mu, eps, hbar }
    }

    /// `m^m μ^mu ϵ^eps ħ^hbar` at the given parameters.
    pub fn evaluate(&self, params: &ModelParams) -> f64 {
        libm::pow(params.m, self.m as f64)
            * libm::pow(params.mu, self.mu as f64)
            * libm::pow(params.epsilon, self.eps as f64)
            * libm::pow(params.hbar, self.hbar as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum UnscaleError {
    #[error("ε^{order} coefficient of x^{x} p^{p}: {symbol} exponent {num}/{den} is not an integer")]
    FractionalExponent {
        order: usize,
        x: u32,
        p: u32,
        symbol: &'static str,
        num: i64,
        den: i64,
    },
    #[error("ε^{order} coefficient of x^{x} p^{p}: length scale survives with power {power}")]
    LengthDoesNotCancel { order: usize, x: u32, p: u32, power: i64 },
    #[error("ε^{order} coefficient of x^{x} p^{p} appears with two different unit assignments")]
    InconsistentExponents { order: usize, x: u32, p: u32 },
}

/// One term `coef · m^· μ^· ϵ^· ħ^· x^a p^b` (normal-ordered).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimTerm {
    pub exps: DimExponents,
    pub x: u32,
    pub p: u32,
    pub coef: GaussianRational,
}

/// A normal-ordered operator in physical units. Terms are keyed by
/// `(ϵ power, x power, p power)`, which determines the remaining exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DimensionfulOperator {
    terms: BTreeMap<(i32, u32, u32), (DimExponents, GaussianRational)>,
}

impl DimensionfulOperator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coef · exps · x^a p^b`, merging with an existing term of the same shape.
    pub fn add_term(&mut self, exps: DimExponents, x: u32, p: u32, coef: &GaussianRational) -> Result<(), UnscaleError> {
        if coef.is_zero() {
            return Ok(());
        }
        let key = (exps.eps, x, p);
        match self.terms.get_mut(&key) {
            Some((e, c)) => {
                if *e != exps {
                    return Err(UnscaleError::InconsistentExponents {
                        order: exps.eps.max(0) as usize,
                        x,
                        p,
                    });
                }
                *c += coef;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, (exps, coef.clone()));
            }
        }
        Ok(())
    }

    /// Adds every normal-ordered monomial of `poly` times `coef · base`, with
    /// one extra `ħ` for every two degrees lost to reordering relative to
    /// `ordered_degree`.
    pub fn add_ordered(
        &mut self,
        base: DimExponents,
        coef: &BigRational,
        poly: &OperatorPoly,
        ordered_degree: u32,
    ) -> Result<(), UnscaleError> {
        for ((a, b), c) in poly.terms() {
            let lost = ordered_degree - (a + b);
            debug_assert!(lost.is_multiple_of(2));
            let exps = DimExponents {
                hbar: base.hbar + (lost / 2) as i32,
                ..base
            };
            self.add_term(exps, a, b, &c.scale(coef))?;
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = DimTerm> + '_ {
        self.terms.iter().map(|(&(_, x, p), (e, c))| DimTerm {
            exps: *e,
            x,
            p,
            coef: c.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Keeps terms with `ϵ` power at most `order`.
    pub fn truncate(&self, order: i32) -> Self {
        DimensionfulOperator {
            terms: self.terms.iter().filter(|((e, _, _), _)| *e <= order).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// Numerical coefficient of each `x^a p^b` at the given parameters.
    pub fn evaluate(&self, params: &ModelParams) -> BTreeMap<(u32, u32), Complex64> {
        let mut out: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
        for (&(_, a, b), (e, c)) in &self.terms {
            *out.entry((a, b)).or_insert_with(Complex64::zero) += c.to_complex64() * e.evaluate(params);
        }
        out
    }
}

impl fmt::Display for DimensionfulOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})", t.coef)?;
            for (name, e) in [("m", t.exps.m), ("μ", t.exps.mu), ("ϵ", t.exps.eps), ("ħ", t.exps.hbar)] {
                if e != 0 {
                    write!(f, "·{name}^{e}")?;
                }
            }
            if t.x > 0 {
                write!(f, "·x^{}", t.x)?;
            }
            if t.p > 0 {
                write!(f, "·p^{}", t.p)?;
            }
        }
        Ok(())
    }
}

fn exact_div(num: i64, den: i64, order: usize, x: u32, p: u32, symbol: &'static str) -> Result<i32, UnscaleError> {
    if num % den != 0 {
        return Err(UnscaleError::FractionalExponent {
            order,
            x,
            p,
            symbol,
            num,
            den,
        });
    }
    Ok((num / den) as i32)
}

/// `2P` where `𝓜^P` is the power carried by the `x^a p^b ε^j` coefficient of an
/// operator of the given kind.
pub fn m_power_doubled(kind: OperatorKind, order: usize, x: u32, p: u32) -> i64 {
    kind.doubled_weight() - 5 * order as i64 + x as i64 - p as i64
}

/// Converts a dimensionless series, solved at `𝓜 = m_value`, to physical units.
///
/// The coefficient of `x^a p^b ε^j` scales as `𝓜^P` with
/// `2P = 2w − 5j + a − b`, `w` the weight of `kind`; it is divided out and
/// replaced by the physical constants. The power of `ℓ` must cancel.
pub fn unscale(series: &EpsilonSeries, m_value: &BigRational, kind: OperatorKind) -> Result<DimensionfulOperator, UnscaleError> {
    let (unit_m, unit_hbar, unit_ell) = kind.unit();
    let mut out = DimensionfulOperator::new();
    for (j, poly) in series.coeffs().iter().enumerate() {
        let ji = j as i64;
        for ((a, b), c) in poly.terms() {
            let (ai, bi) = (a as i64, b as i64);
            let p_pow = exact_div(m_power_doubled(kind, j, a, b), 2, j, a, b, "𝓜")?;
            let pi = p_pow as i64;
            // 𝓜^P = ℓ^{2P} m^{P/2} μ^P ħ^{−P};  ε^j = ℓ^{5j} m^j ϵ^j ħ^{−2j};
            // x^a = ℓ^{−a} x^a;  p^b = ℓ^b ħ^{−b} p^b.
            let ell = unit_ell + 2 * pi + 5 * ji - ai + bi;
            if ell != 0 {
                return Err(UnscaleError::LengthDoesNotCancel { order: j, x: a, p: b, power: ell });
            }
            let m = exact_div(2 * unit_m + pi + 2 * ji, 2, j, a, b, "m")?;
            let exps = DimExponents {
                m,
                mu: p_pow,
                eps: j as i32,
                hbar: (unit_hbar - pi - 2 * ji - bi) as i32,
            };
            let bare = c.scale(&m_pow(m_value, -p_pow));
            out.add_term(exps, a, b, &bare)?;
        }
    }
    Ok(out)
}

/// `unscale` for a single operator at `ε⁰`.
pub fn unscale_poly(poly: &OperatorPoly, m_value: &BigRational, kind: OperatorKind) -> Result<DimensionfulOperator, UnscaleError> {
    unscale(&EpsilonSeries::from_coeffs(alloc::vec![poly.clone()]), m_value, kind)
}
