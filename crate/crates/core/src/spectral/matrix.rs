use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
use num_traits::Zero;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: alloc::vec![Complex64::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &CMatrix, c: Complex64) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        let mut out = self.clone();
        out.add_scaled(other, Complex64::new(-1.0, 0.0));
        out
    }

    /// Leading `k × k` block.
    pub fn truncate(&self, k: usize) -> CMatrix {
        assert!(k <= self.n);
        let mut out = CMatrix::zeros(k);
        for i in 0..k {
            for j in 0..k {
                out[(i, j)] = self[(i, j)];
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// `x = (a + a†)/√(2𝓜)` in the first `k` oscillator states.
pub fn position_matrix(k: usize, m: f64) -> CMatrix {
    let mut out = CMatrix::zeros(k);
    let s = 1.0 / libm::sqrt(2.0 * m);
    for n in 1..k {
        let v = libm::sqrt(n as f64) * s;
        out[(n - 1, n)] = Complex64::new(v, 0.0);
        out[(n, n - 1)] = Complex64::new(v, 0.0);
    }
    out
}

/// `p = i√(𝓜/2)(a† − a)` in the first `k` oscillator states.
pub fn momentum_matrix(k: usize, m: f64) -> CMatrix {
    let mut out = CMatrix::zeros(k);
    let s = libm::sqrt(m / 2.0);
    for n in 1..k {
        let v = libm::sqrt(n as f64) * s;
        // ⟨n|a†|n−1⟩ = √n, ⟨n−1|a|n⟩ = √n
        out[(n, n - 1)] = Complex64::new(0.0, v);
        out[(n - 1, n)] = Complex64::new(0.0, -v);
    }
    out
}

/// Builds `Σ c·x^a p^b` at size `k` from numeric coefficients, reusing powers.
pub fn assemble(terms: &BTreeMap<(u32, u32), Complex64>, k: usize, m: f64) -> CMatrix {
    let max_a = terms.keys().map(|t| t.0).max().unwrap_or(0) as usize;
    let max_b = terms.keys().map(|t| t.1).max().unwrap_or(0) as usize;
    let x = position_matrix(k, m);
    let p = momentum_matrix(k, m);
    let mut xp = alloc::vec![CMatrix::identity(k)];
    for i in 1..=max_a {
        xp.push(xp[i - 1].mul(&x));
    }
    let mut pp = alloc::vec![CMatrix::identity(k)];
    for i in 1..=max_b {
        pp.push(pp[i - 1].mul(&p));
    }
    let mut out = CMatrix::zeros(k);
    for (&(a, b), &c) in terms {
        if c.is_zero() {
            continue;
        }
        let term = if a == 0 {
            pp[b as usize].clone()
        } else if b == 0 {
            xp[a as usize].clone()
        } else {
            xp[a as usize].mul(&pp[b as usize])
        };
        out.add_scaled(&term, c);
    }
    out
}
