//! Envelope (skyline) `LDLᵀ` factorization with reverse Cuthill–McKee ordering.
//!
//! No pivoting: the factor of a symmetric positive definite matrix is exact up
//! to rounding, and for `K − λM` the signs of `D` give the inertia (Sylvester).

use std::collections::VecDeque;

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Reverse Cuthill–McKee permutation: `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.n();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| a.row(i).map(|(j, _)| j).filter(|&j| j != i).collect())
        .collect();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n)
            .filter(|&i| !visited[i])
            .min_by_key(|&i| degree[i])
            .unwrap();
        let start = pseudo_peripheral(&adj, &degree, seed);
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&u| !visited[u]).collect();
            next.sort_by_key(|&u| (degree[u], u));
            for u in next {
                visited[u] = true;
                queue.push_back(u);
            }
        }
    }
    order.reverse();
    order
}

fn bfs_levels(adj: &[Vec<usize>], start: usize) -> (Vec<usize>, usize) {
    let mut level = vec![usize::MAX; adj.len()];
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut last = start;
    while let Some(v) = queue.pop_front() {
        last = v;
        for &u in &adj[v] {
            if level[u] == usize::MAX {
                level[u] = level[v] + 1;
                queue.push_back(u);
            }
        }
    }
    (level, last)
}

fn pseudo_peripheral(adj: &[Vec<usize>], degree: &[usize], seed: usize) -> usize {
    let mut node = seed;
    let mut ecc = 0;
    for _ in 0..8 {
        let (level, _) = bfs_levels(adj, node);
        let far = level.iter().filter(|&&l| l != usize::MAX).max().copied().unwrap_or(0);
        if far <= ecc && node != seed {
            break;
        }
        ecc = far;
        let candidate = (0..adj.len())
            .filter(|&i| level[i] == far)
            .min_by_key(|&i| degree[i])
            .unwrap();
        if candidate == node {
            break;
        }
        node = candidate;
    }
    node
}

/// `P A Pᵀ = L D Lᵀ` in envelope storage.
#[derive(Debug, Clone)]
pub struct SkylineLdl {
    perm: Vec<usize>,
    first: Vec<usize>,
    offset: Vec<usize>,
    lower: Vec<f64>,
    diag: Vec<f64>,
}

impl SkylineLdl {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let perm = reverse_cuthill_mckee(a);
        Self::factor_with(a, perm)
    }

    pub fn factor_with(a: &CsrMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = a.n();
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (new_i, &old_i) in perm.iter().enumerate() {
            for (old_j, _) in a.row(old_i) {
                let new_j = inv[old_j];
                if new_j < first[new_i] {
                    first[new_i] = new_j;
                }
            }
        }
        let mut offset = vec![0usize; n + 1];
        for i in 0..n {
            offset[i + 1] = offset[i] + (i - first[i]);
        }
        let mut lower = vec![0.0; offset[n]];
        let mut diag = vec![0.0; n];
        for (new_i, &old_i) in perm.iter().enumerate() {
            for (old_j, v) in a.row(old_i) {
                let new_j = inv[old_j];
                if new_j < new_i {
                    lower[offset[new_i] + new_j - first[new_i]] = v;
                } else if new_j == new_i {
                    diag[new_i] = v;
                }
            }
        }
        let scale = diag.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        // row-oriented envelope factorization; row i holds g_j = l_ij d_j while it is built
        for i in 0..n {
            let fi = first[i];
            let ri = offset[i];
            for j in fi..i {
                let fj = first[j];
                let rj = offset[j];
                let k0 = fi.max(fj);
                let mut s = lower[ri + j - fi];
                for k in k0..j {
                    s -= lower[ri + k - fi] * lower[rj + k - fj];
                }
                lower[ri + j - fi] = s;
            }
            let mut di = diag[i];
            for j in fi..i {
                let g = lower[ri + j - fi];
                let l = g / diag[j];
                di -= g * l;
                lower[ri + j - fi] = l;
            }
            if !di.is_finite() || di.abs() <= 1e-14 * scale {
                return Err(Error::Numerical(format!(
                    "zero pivot at row {i} of {n} in LDLᵀ factorization"
                )));
            }
            diag[i] = di;
        }
        Ok(SkylineLdl {
            perm,
            first,
            offset,
            lower,
            diag,
        })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn envelope_size(&self) -> usize {
        self.lower.len()
    }

    /// Number of negative pivots, the count of negative eigenvalues.
    pub fn negative_pivots(&self) -> usize {
        self.diag.iter().filter(|&&d| d < 0.0).count()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut x: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let ri = self.offset[i];
            let mut s = x[i];
            for j in fi..i {
                s -= self.lower[ri + j - fi] * x[j];
            }
            x[i] = s;
        }
        for (xi, d) in x.iter_mut().zip(&self.diag) {
            *xi /= d;
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let ri = self.offset[i];
            let xi = x[i];
            for j in fi..i {
                x[j] -= self.lower[ri + j - fi] * xi;
            }
        }
        let mut out = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            out[old] = x[new];
        }
        out
    }
}
