use alloc::vec::Vec;

use crate::weyl::GaussianRational;

/// Outcome of an exact linear solve over `ℚ(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<GaussianRational>),
    Inconsistent,
    /// Column indices left without a pivot.
    Underdetermined(Vec<usize>),
}

/// Gauss–Jordan elimination on the (possibly overdetermined) system `rows · c = rhs`.
#[allow(clippy::needless_range_loop)]
pub fn solve_exact(mut rows: Vec<Vec<GaussianRational>>, mut rhs: Vec<GaussianRational>) -> LinearSolution {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        rhs.swap(r, pr);
        let inv = rows[r][col].inv().expect("pivot is nonzero");
        for c in col..ncols {
            rows[r][c] = &rows[r][c] * &inv;
        }
        rhs[r] = &rhs[r] * &inv;
        for i in 0..nrows {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for c in col..ncols {
                let d = &factor * &rows[r][c];
                rows[i][c] -= &d;
            }
            let d = &factor * &rhs[r];
            rhs[i] -= &d;
        }
        pivots.push(col);
        r += 1;
        if r == nrows {
            break;
        }
    }
    if rhs[r..].iter().any(|v| !v.is_zero()) {
        return LinearSolution::Inconsistent;
    }
    if pivots.len() < ncols {
        let free = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        return LinearSolution::Underdetermined(free);
    }
    let mut sol = alloc::vec![GaussianRational::zero(); ncols];
    for (row, &col) in pivots.iter().enumerate() {
        sol[col] = rhs[row].clone();
    }
    LinearSolution::Unique(sol)
}
