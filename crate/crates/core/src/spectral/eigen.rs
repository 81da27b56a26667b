//! Eigenvalues of a dense complex matrix: balancing, Householder reduction to
//! Hessenberg form, then single-shift QR with Wilkinson shifts and deflation.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
use num_traits::Zero;

use super::matrix::CMatrix;
use super::SpectralError;

/// Iteration budget per eigenvalue.
const MAX_ITER_PER_EIG: usize = 60;

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity by powers of two so that row and column norms are comparable.
pub fn balance(a: &mut CMatrix) {
    let n = a.dim();
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / RADIX;
            let mut f = 1.0;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Unitary similarity to upper Hessenberg form via Householder reflections.
pub fn hessenberg(a: &mut CMatrix) {
    let n = a.dim();
    if n < 3 {
        return;
    }
    let mut v = alloc::vec![Complex64::zero(); n];
    for k in 0..n - 2 {
        let norm: f64 = libm::sqrt((k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>());
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        v.fill(Complex64::zero());
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = a[(i, k)];
        }
        let vnorm: f64 = libm::sqrt((k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>());
        if vnorm == 0.0 {
            continue;
        }
        for item in v.iter_mut().take(n).skip(k + 1) {
            *item /= vnorm;
        }
        // A ← (I − 2vvᴴ) A
        for j in k..n {
            let mut s = Complex64::zero();
            for i in k + 1..n {
                s += v[i].conj() * a[(i, j)];
            }
            s *= 2.0;
            for i in k + 1..n {
                a[(i, j)] -= v[i] * s;
            }
        }
        // A ← A (I − 2vvᴴ)
        for i in 0..n {
            let mut s = Complex64::zero();
            for j in k + 1..n {
                s += a[(i, j)] * v[j];
            }
            s *= 2.0;
            for j in k + 1..n {
                a[(i, j)] -= s * v[j].conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = Complex64::zero();
        }
    }
}

/// `(c, s)` with `[[c̄, s̄], [−s, c]] · (a, b)ᵀ = (r, 0)ᵀ`.
fn givens(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    let r = libm::sqrt(a.norm_sqr() + b.norm_sqr());
    if r == 0.0 {
        (Complex64::new(1.0, 0.0), Complex64::zero())
    } else {
        (a / r, b / r)
    }
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m = (a + d) * 0.5;
    let l1 = m + disc;
    let l2 = m - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues of an upper Hessenberg matrix (destroyed).
pub fn hessenberg_eigenvalues(h: &mut CMatrix) -> Result<Vec<Complex64>, SpectralError> {
    let n = h.dim();
    let mut eig = alloc::vec![Complex64::zero(); n];
    if n == 0 {
        return Ok(eig);
    }
    let scale: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| abs1(h[(i, j)]))
        .fold(0.0, f64::max);
    let mut rot = alloc::vec![(Complex64::zero(), Complex64::zero()); n];
    let mut hi = n - 1;
    let mut its = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let mut s = abs1(h[(lo, lo)]) + abs1(h[(lo - 1, lo - 1)]);
            if s == 0.0 {
                s = scale;
            }
            if abs1(h[(lo, lo - 1)]) <= f64::EPSILON * s {
                h[(lo, lo - 1)] = Complex64::zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if its > MAX_ITER_PER_EIG {
            return Err(SpectralError::NoConvergence { iterations: total, unresolved: hi + 1 });
        }
        let shift = if its.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex64::new(0.75 * abs1(h[(hi, hi - 1)]), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rot[k] = (c, s);
            for j in k..=hi {
                let u = h[(k, j)];
                let v = h[(k + 1, j)];
                h[(k, j)] = c.conj() * u + s.conj() * v;
                h[(k + 1, j)] = -s * u + c * v;
            }
        }
        for k in lo..hi {
            let (c, s) = rot[k];
            for i in lo..=(k + 1).min(hi) {
                let u = h[(i, k)];
                let v = h[(i, k + 1)];
                h[(i, k)] = u * c + v * s;
                h[(i, k + 1)] = -u * s.conj() + v * c.conj();
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    Ok(eig)
}

/// Orders by real part, then imaginary part.
pub fn sort_spectrum(eigs: &mut [Complex64]) {
    eigs.sort_by(|a, b| match a.re.total_cmp(&b.re) {
        Ordering::Equal => a.im.total_cmp(&b.im),
        o => o,
    });
}

/// All eigenvalues of `a`, sorted by real part with imaginary tiebreak.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>, SpectralError> {
    if a.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(SpectralError::NonFinite);
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let mut eigs = hessenberg_eigenvalues(&mut h)?;
    sort_spectrum(&mut eigs);
    Ok(eigs)
}
