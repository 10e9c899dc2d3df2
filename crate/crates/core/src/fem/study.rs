//! Refinement studies: observed convergence order and Richardson extrapolation.

use serde::Serialize;

use super::assemble::assemble;
use super::eigen::{solve_smallest, DEFAULT_TOL};
use super::mesh::triangulate;
use crate::error::{Error, Result};
use crate::geometry::Polygon;
use crate::par::{self, Execution};
use crate::spectra::{BoundaryCondition, Method, Spectrum};

/// Order assumed for extrapolation when only two levels are available.
pub const DEFAULT_ORDER: f64 = 2.0;
const ORDER_RANGE: (f64, f64) = (0.5, 4.0);

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStudy {
    pub bc: BoundaryCondition,
    pub levels: Vec<u32>,
    pub h: Vec<f64>,
    /// `values[level_index][mode]`.
    pub values: Vec<Vec<f64>>,
    /// Algebraic error bounds from the solver, same layout as `values`.
    pub solver_errors: Vec<Vec<f64>>,
    /// Per mode; `None` with fewer than three levels or a non-monotone sequence.
    pub observed_order: Vec<Option<f64>>,
    pub extrapolated: Vec<f64>,
    /// `|finest − extrapolated|` plus the finest solver error.
    pub extrapolation_error: Vec<f64>,
    pub measure: f64,
}

/// Solves each refinement level (levels run concurrently) and extrapolates.
pub fn convergence_study(
    poly: &Polygon,
    bc: BoundaryCondition,
    k: usize,
    levels: &[u32],
    exec: Execution,
) -> Result<ConvergenceStudy> {
    if levels.len() < 2 {
        return Err(Error::arg("a convergence study needs at least two levels"));
    }
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::arg("refinement levels must increase"));
    }
    if k == 0 {
        return Err(Error::arg("need at least one mode"));
    }
    let runs = par::map_slice(exec, levels, |&level| -> Result<(f64, Vec<f64>, Vec<f64>, f64)> {
        let pencil = assemble(&triangulate(poly, level)?)?;
        let sol = solve_smallest(&pencil, bc, k, DEFAULT_TOL)?;
        Ok((
            pencil.h,
            sol.spectrum.values().to_vec(),
            sol.spectrum.errors().to_vec(),
            pencil.measure,
        ))
    });
    let mut h = Vec::new();
    let mut values = Vec::new();
    let mut solver_errors = Vec::new();
    let mut measure = 0.0;
    for run in runs {
        let (hi, v, e, m) = run?;
        h.push(hi);
        values.push(v);
        solver_errors.push(e);
        measure = m;
    }
    let last = levels.len() - 1;
    let mut observed_order = Vec::with_capacity(k);
    let mut extrapolated = Vec::with_capacity(k);
    let mut extrapolation_error = Vec::with_capacity(k);
    for mode in 0..k {
        let seq: Vec<f64> = values.iter().map(|v| v[mode]).collect();
        let order = if levels.len() >= 3 {
            observed(&h[last - 2..], &seq[last - 2..])
        } else {
            None
        };
        let p = order.unwrap_or(DEFAULT_ORDER).clamp(ORDER_RANGE.0, ORDER_RANGE.1);
        let (h1, h2) = (h[last - 1], h[last]);
        let (e1, e2) = (seq[last - 1], seq[last]);
        let limit = (e2 + (e2 - e1) * h2.powf(p) / (h1.powf(p) - h2.powf(p))).max(0.0);
        observed_order.push(order);
        extrapolated.push(limit);
        extrapolation_error.push((e2 - limit).abs() + solver_errors[last][mode]);
    }
    Ok(ConvergenceStudy {
        bc,
        levels: levels.to_vec(),
        h,
        values,
        solver_errors,
        observed_order,
        extrapolated,
        extrapolation_error,
        measure,
    })
}

/// Order `p` with `e_i = e + C h_i^p` through three points.
fn observed(h: &[f64], e: &[f64]) -> Option<f64> {
    let d1 = e[0] - e[1];
    let d2 = e[1] - e[2];
    if !(d1.abs() > 0.0 && d2.abs() > 0.0) || d1.signum() != d2.signum() {
        return None;
    }
    let target = d1 / d2;
    let ratio = |p: f64| (h[0].powf(p) - h[1].powf(p)) / (h[1].powf(p) - h[2].powf(p));
    let (mut lo, mut hi) = (1e-3, 16.0);
    if (ratio(lo) - target) * (ratio(hi) - target) > 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (ratio(lo) - target) * (ratio(mid) - target) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

impl ConvergenceStudy {
    pub fn modes(&self) -> usize {
        self.extrapolated.len()
    }

    /// Table with header `level,h,eig_1..eig_k`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,h");
        for j in 1..=self.modes() {
            out.push_str(&format!(",eig_{j}"));
        }
        out.push('\n');
        for (i, level) in self.levels.iter().enumerate() {
            out.push_str(&format!("{level},{}", self.h[i]));
            for v in &self.values[i] {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }

    /// Extrapolated values as a spectrum; entries are re-sorted with their errors.
    pub fn extrapolated_spectrum(&self) -> Result<Spectrum> {
        let mut pairs: Vec<(f64, f64)> = self
            .extrapolated
            .iter()
            .copied()
            .zip(self.extrapolation_error.iter().copied())
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let finest = *self.levels.last().expect("at least two levels");
        let complete_below = pairs.last().map_or(0.0, |p| p.0);
        Spectrum::new(
            self.bc,
            Method::Extrapolated { finest_level: finest },
            pairs.iter().map(|p| p.0).collect(),
            pairs.iter().map(|p| p.1).collect(),
            self.measure,
            2,
            complete_below,
        )
    }
}
