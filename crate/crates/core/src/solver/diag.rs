use std::ops::Range;

use faer::{Mat, MatRef, Side};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pair::SparseHermitian;

/// Tracked energy shift of the initial manifold after exact diagonalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackedShift {
    /// Mean of the selected eigenvalues weighted by `|<init|psi>|^2` (GHz).
    pub shift: f64,
    /// Selected eigenvalues, ascending (GHz).
    pub member_shifts: Vec<f64>,
    /// Summed manifold weight of each selected eigenvector, same order.
    pub overlaps: Vec<f64>,
}

impl TrackedShift {
    /// Relative spread of the member shifts.
    pub fn spread(&self) -> f64 {
        let lo = self.member_shifts.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.member_shifts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if self.shift == 0.0 {
            hi - lo
        } else {
            (hi - lo) / self.shift.abs()
        }
    }
}

struct Candidate {
    energy: f64,
    weight: f64,
    initial: f64,
    order: (usize, usize),
}

/// Eigenpairs of one connected block as `(eigenvalues, |U|^2)`.
fn block_eigen(h: &SparseHermitian, rows: &[usize], local: &[usize]) -> Result<(Vec<f64>, Mat<f64>)> {
    let m = rows.len();
    let real = h.upper.iter().all(|e| e.2.im == 0.0);
    if real {
        let mut sub = Mat::<f64>::zeros(m, m);
        for (r, &row) in rows.iter().enumerate() {
            sub[(r, r)] = h.diagonal[row];
        }
        for &(i, j, v) in &h.upper {
            if local[i] != usize::MAX && local[j] != usize::MAX {
                sub[(local[i], local[j])] = v.re;
                sub[(local[j], local[i])] = v.re;
            }
        }
        let evd = sub.self_adjoint_eigen(Side::Lower).map_err(|_| Error::Eigen)?;
        let s = evd.S().column_vector();
        let u = evd.U();
        Ok(((0..m).map(|i| s[i]).collect(), Mat::from_fn(m, m, |i, j| u[(i, j)] * u[(i, j)])))
    } else {
        let mut sub = Mat::<Complex64>::zeros(m, m);
        for (r, &row) in rows.iter().enumerate() {
            sub[(r, r)] = Complex64::new(h.diagonal[row], 0.0);
        }
        for &(i, j, v) in &h.upper {
            if local[i] != usize::MAX && local[j] != usize::MAX {
                sub[(local[i], local[j])] = v;
                sub[(local[j], local[i])] = v.conj();
            }
        }
        let evd = sub.self_adjoint_eigen(Side::Lower).map_err(|_| Error::Eigen)?;
        let s = evd.S().column_vector();
        let u = evd.U();
        Ok(((0..m).map(|i| s[i].re).collect(), Mat::from_fn(m, m, |i, j| u[(i, j)].norm_sqr())))
    }
}

/// [`diagonalize_track`] on a sparse Hermitian matrix.
pub fn track_sparse(h: &SparseHermitian, manifold: Range<usize>) -> Result<TrackedShift> {
    let n = h.dim();
    if manifold.is_empty() || manifold.end > n {
        return Err(Error::InvalidInput("manifold must be a nonempty range inside the matrix".into()));
    }
    let mut adjacency = vec![Vec::new(); n];
    for &(i, j, _) in &h.upper {
        adjacency[i].push(j);
        adjacency[j].push(i);
    }
    let mut owner = vec![usize::MAX; n];
    let mut local = vec![usize::MAX; n];
    let mut candidates = Vec::new();
    for seed in manifold.clone() {
        if owner[seed] != usize::MAX {
            continue;
        }
        owner[seed] = seed;
        let mut rows = vec![seed];
        let mut stack = vec![seed];
        while let Some(i) = stack.pop() {
            for &j in &adjacency[i] {
                if owner[j] == usize::MAX {
                    owner[j] = seed;
                    rows.push(j);
                    stack.push(j);
                }
            }
        }
        rows.sort_unstable();
        for (r, &row) in rows.iter().enumerate() {
            local[row] = r;
        }
        let (energies, probs) = block_eigen(h, &rows, &local)?;
        for &row in &rows {
            local[row] = usize::MAX;
        }
        for (c, &energy) in energies.iter().enumerate() {
            let mut weight = 0.0;
            let mut initial = 0.0;
            for (r, &row) in rows.iter().enumerate() {
                if manifold.contains(&row) {
                    weight += probs[(r, c)];
                    if row == manifold.start {
                        initial = probs[(r, c)];
                    }
                }
            }
            candidates.push(Candidate { energy, weight, initial, order: (seed, c) });
        }
    }

    candidates.sort_by(|a, b| b.weight.total_cmp(&a.weight).then(a.order.cmp(&b.order)));
    candidates.truncate(manifold.len());
    if let Some(c) = candidates.iter().min_by(|a, b| a.weight.total_cmp(&b.weight)) {
        if c.weight < 0.5 {
            return Err(Error::TrackingFailed { overlap: c.weight });
        }
    }
    candidates.sort_by(|a, b| a.energy.total_cmp(&b.energy));

    let den: f64 = candidates.iter().map(|c| c.initial).sum();
    let shift = if den > 0.0 {
        candidates.iter().map(|c| c.initial * c.energy).sum::<f64>() / den
    } else {
        candidates.iter().map(|c| c.energy).sum::<f64>() / candidates.len() as f64
    };
    Ok(TrackedShift {
        shift,
        member_shifts: candidates.iter().map(|c| c.energy).collect(),
        overlaps: candidates.iter().map(|c| c.weight).collect(),
    })
}

/// Diagonalizes `h` and follows the states adiabatically connected to the
/// initial manifold (`manifold.start` is the initial pair).
///
/// Only the blocks of `h` connected to the manifold are diagonalized; exact
/// zeros from selection rules make this a large saving. The
/// `manifold.len()` eigenvectors with the largest summed weight on the
/// manifold are selected. Each must keep at least half of its weight there,
/// otherwise the levels are too strongly mixed to be identified.
pub fn diagonalize_track(h: MatRef<'_, Complex64>, manifold: Range<usize>) -> Result<TrackedShift> {
    if h.nrows() != h.ncols() {
        return Err(Error::InvalidInput("matrix must be square".into()));
    }
    track_sparse(&SparseHermitian::from_dense(h), manifold)
}
