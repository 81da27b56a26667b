//! JSON and CSV encodings. Operator JSON uses exact rational strings and sorted
//! terms, so identical inputs give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use ptcubic::classical::OrbitTrace;
use ptcubic::density::DensityCurve;
use ptcubic::hermitian::{DimExponents, DimensionfulOperator};
use ptcubic::metric::{CubicModel, MetricSolution};
use ptcubic::spectral::SpectrumReport;
use ptcubic::weyl::{format_ratio, parse_ratio, GaussianRational, OperatorPoly};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub x: u32,
    pub p: u32,
    pub re: String,
    pub im: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub terms: Vec<PolyTerm>,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_ratio(s).ok_or_else(|| format!("not a rational: {s:?}"))
}

impl PolyJson {
    pub fn from_poly(a: &OperatorPoly) -> Self {
        Self {
            terms: a
                .terms()
                .map(|((x, p), c)| PolyTerm { x, p, re: format_ratio(c.re()), im: format_ratio(c.im()) })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<OperatorPoly, String> {
        let mut out = OperatorPoly::zero();
        for t in &self.terms {
            out.add_term(t.x, t.p, &GaussianRational::new(rational(&t.re)?, rational(&t.im)?));
        }
        Ok(out)
    }
}

/// `{"M": "a/b", "orders": {"1": …, "3": …}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricJson {
    #[serde(rename = "M")]
    pub m: String,
    pub orders: BTreeMap<String, PolyJson>,
}

impl MetricJson {
    pub fn from_solution(sol: &MetricSolution) -> Self {
        Self {
            m: format_ratio(sol.m_value()),
            orders: sol.q_terms().iter().map(|(k, q)| (k.to_string(), PolyJson::from_poly(q))).collect(),
        }
    }

    pub fn to_solution(&self) -> Result<MetricSolution, String> {
        let m = rational(&self.m)?;
        let mut terms = BTreeMap::new();
        for (k, q) in &self.orders {
            let order: u32 = k.parse().map_err(|_| format!("bad order key {k:?}"))?;
            terms.insert(order, q.to_poly()?);
        }
        Ok(MetricSolution::from_terms(CubicModel::new(m), terms))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimTermJson {
    pub m: i32,
    pub mu: i32,
    pub eps: i32,
    pub hbar: i32,
    pub x: u32,
    pub p: u32,
    pub coef: String,
    pub coef_im: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimJson {
    pub terms: Vec<DimTermJson>,
}

impl DimJson {
    pub fn from_operator(d: &DimensionfulOperator) -> Self {
        Self {
            terms: d
                .terms()
                .map(|t| DimTermJson {
                    m: t.exps.m,
                    mu: t.exps.mu,
                    eps: t.exps.eps,
                    hbar: t.exps.hbar,
                    x: t.x,
                    p: t.p,
                    coef: format_ratio(t.coef.re()),
                    coef_im: format_ratio(t.coef.im()),
                })
                .collect(),
        }
    }

    pub fn to_operator(&self) -> Result<DimensionfulOperator, String> {
        let mut out = DimensionfulOperator::new();
        for t in &self.terms {
            let c = GaussianRational::new(rational(&t.coef)?, rational(&t.coef_im)?);
            out.add_term(DimExponents::new(t.m, t.mu, t.eps, t.hbar), t.x, t.p, &c).map_err(|e| e.to_string())?;
        }
        Ok(out)
    }
}

/// `{"X": …, "P": …}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservablesJson {
    #[serde(rename = "X")]
    pub x: DimJson,
    #[serde(rename = "P")]
    pub p: DimJson,
}

/// `{"eigs": [[re, im], …], "formula": […], "dev": […]}` over the requested levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumJson {
    pub eigs: Vec<[f64; 2]>,
    pub formula: Vec<f64>,
    pub dev: Vec<f64>,
}

impl SpectrumJson {
    pub fn from_report(r: &SpectrumReport) -> Self {
        Self {
            eigs: r.levels().iter().map(|e| [e.re, e.im]).collect(),
            formula: r.formula.clone(),
            dev: r.deviations.clone(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn push_row(out: &mut String, values: &[f64]) {
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "{v:.16e}").unwrap();
    }
    out.push('\n');
}

pub fn orbit_csv(trace: &OrbitTrace) -> String {
    let mut out = String::from("t,x,p,H\n");
    for s in &trace.samples {
        push_row(&mut out, &[s.t, s.x, s.p, s.h]);
    }
    out
}

pub fn density_csv(curve: &DensityCurve) -> String {
    let mut out = String::from("x,re_psi,im_psi,rho\n");
    for k in 0..curve.grid.len() {
        push_row(&mut out, &[curve.grid[k], curve.psi_re[k], curve.psi_im[k], curve.rho[k]]);
    }
    out
}

/// Header and numeric rows of a CSV file written by this crate.
pub fn parse_csv(text: &str) -> Result<(String, Vec<Vec<f64>>), String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty CSV")?.to_string();
    let rows = lines
        .enumerate()
        .map(|(k, line)| {
            line.split(',').map(|v| v.trim().parse::<f64>().map_err(|e| format!("row {}: {e}", k + 1))).collect()
        })
        .collect::<Result<_, _>>()?;
    Ok((header, rows))
}
