//! Closed-form Laplace spectra, lattice-point counting and Weyl terms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Upper limit on stored eigenvalues for enumerated spectra.
const MAX_EIGENVALUES: usize = 50_000_000;
/// Upper limit on lattice points visited by [`count_box_neumann`] outside the last axis.
const MAX_OUTER_POINTS: f64 = 1e11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl std::fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
        })
    }
}

/// How the eigenvalues were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    Exact,
    /// Conforming P1 elements at the given uniform refinement level; values
    /// are upper bounds of the true eigenvalues.
    Fem { level: u32 },
    /// Richardson extrapolation from a refinement sequence; errors hold the
    /// distance to the finest computed level.
    Extrapolated { finest_level: u32 },
}

impl Method {
    pub fn is_exact(&self) -> bool {
        matches!(self, Method::Exact)
    }
}

/// Nondecreasing eigenvalue list with per-value error bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub bc: BoundaryCondition,
    pub method: Method,
    values: Vec<f64>,
    errors: Vec<f64>,
    pub domain_measure: f64,
    pub dim: usize,
    /// The list contains every eigenvalue strictly below this threshold.
    pub complete_below: f64,
}

impl Spectrum {
    pub fn new(
        bc: BoundaryCondition,
        method: Method,
        values: Vec<f64>,
        errors: Vec<f64>,
        domain_measure: f64,
        dim: usize,
        complete_below: f64,
    ) -> Result<Self> {
        if values.len() != errors.len() {
            return Err(Error::arg("values and error bounds differ in length"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::arg("spectrum values must be sorted"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::arg("eigenvalues must be finite and nonnegative"));
        }
        if errors.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
            return Err(Error::arg("error bounds must be finite and nonnegative"));
        }
        if method.is_exact() && dim > 0 {
            match bc {
                BoundaryCondition::Neumann if values.first().is_some_and(|&v| v != 0.0) => {
                    return Err(Error::arg("exact Neumann spectrum must start at 0"));
                }
                BoundaryCondition::Dirichlet if values.first() == Some(&0.0) => {
                    return Err(Error::arg("Dirichlet eigenvalues are positive"));
                }
                _ => {}
            }
        }
        Ok(Spectrum {
            bc,
            method,
            values,
            errors,
            domain_measure,
            dim,
            complete_below,
        })
    }

    fn exact(bc: BoundaryCondition, values: Vec<f64>, measure: f64, dim: usize, complete_below: f64) -> Self {
        let errors = vec![0.0; values.len()];
        Spectrum {
            bc,
            method: Method::Exact,
            values,
            errors,
            domain_measure: measure,
            dim,
            complete_below,
        }
    }

    /// Spectrum of a zero-dimensional factor: the single eigenvalue 0.
    pub fn point(bc: BoundaryCondition) -> Self {
        Spectrum::exact(bc, vec![0.0], 1.0, 0, f64::INFINITY)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn errors(&self) -> &[f64] {
        &self.errors
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `k`-th eigenvalue, 1-based as in `λ_1 ≤ λ_2 ≤ …`.
    pub fn nth(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    /// `#{k : value_k < λ}` over the stored values.
    pub fn count_below(&self, lambda: f64) -> usize {
        self.values.partition_point(|&v| v < lambda)
    }

    /// Eigenvalues of the domain scaled by `s`: each divided by `s²`.
    pub fn scaled(&self, s: f64) -> Spectrum {
        let f = 1.0 / (s * s);
        Spectrum {
            values: self.values.iter().map(|v| v * f).collect(),
            errors: self.errors.iter().map(|e| e * f).collect(),
            domain_measure: self.domain_measure * s.powi(self.dim as i32),
            complete_below: self.complete_below * f,
            ..self.clone()
        }
    }

    /// Merge the spectra of disjoint pieces (eigenvalues of a disjoint union).
    pub fn merged(parts: &[Spectrum]) -> Result<Spectrum> {
        let first = parts.first().ok_or_else(|| Error::arg("nothing to merge"))?;
        if parts.iter().any(|p| p.bc != first.bc || p.dim != first.dim) {
            return Err(Error::arg("merged spectra differ in boundary condition or dimension"));
        }
        let mut pairs: Vec<(f64, f64)> = parts
            .iter()
            .flat_map(|p| p.values.iter().copied().zip(p.errors.iter().copied()))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let method = if parts.iter().all(|p| p.method.is_exact()) {
            Method::Exact
        } else {
            parts
                .iter()
                .map(|p| p.method)
                .find(|m| !m.is_exact())
                .unwrap()
        };
        Ok(Spectrum {
            bc: first.bc,
            method,
            values: pairs.iter().map(|p| p.0).collect(),
            errors: pairs.iter().map(|p| p.1).collect(),
            domain_measure: parts.iter().map(|p| p.domain_measure).sum(),
            dim: first.dim,
            complete_below: parts
                .iter()
                .map(|p| p.complete_below)
                .fold(f64::INFINITY, f64::min),
        })
    }
}

/// First `count` eigenvalues of an interval of the given length:
/// Dirichlet `π²k²/ℓ²` for `k ≥ 1`, Neumann `0, π²/ℓ², …`.
pub fn interval_spectrum(length: f64, bc: BoundaryCondition, count: usize) -> Result<Spectrum> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::arg(format!("interval length must be positive, got {length}")));
    }
    if count == 0 {
        return Err(Error::arg("count must be at least 1"));
    }
    let offset = match bc {
        BoundaryCondition::Dirichlet => 1,
        BoundaryCondition::Neumann => 0,
    };
    let ev = |k: usize| {
        let k = k as f64;
        PI * PI * k * k / (length * length)
    };
    let values: Vec<f64> = (0..count).map(|i| ev(i + offset)).collect();
    let next = ev(count + offset);
    Ok(Spectrum::exact(bc, values, length, 1, next))
}

/// All eigenvalues below `lambda_max` of the box with the given half-widths,
/// by separation of variables: `Σ_j π² n_j² / (4 a_j²)`.
pub fn box_spectrum(half_widths: &[f64], bc: BoundaryCondition, lambda_max: f64) -> Result<Spectrum> {
    if half_widths.is_empty() {
        return Err(Error::arg("box needs at least one axis"));
    }
    if half_widths.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::arg("half-widths must be positive"));
    }
    if !(lambda_max > 0.0) {
        return Err(Error::arg(format!("lambda_max must be positive, got {lambda_max}")));
    }
    let scale: Vec<f64> = half_widths.iter().map(|a| PI * PI / (4.0 * a * a)).collect();
    let start = match bc {
        BoundaryCondition::Dirichlet => 1u64,
        BoundaryCondition::Neumann => 0,
    };
    let mut values = Vec::new();
    enumerate_box(&scale, start, 0, 0.0, lambda_max, &mut values)?;
    values.sort_by(f64::total_cmp);
    let measure = half_widths.iter().map(|a| 2.0 * a).product();
    Ok(Spectrum::exact(bc, values, measure, half_widths.len(), lambda_max))
}

fn enumerate_box(
    scale: &[f64],
    start: u64,
    axis: usize,
    partial: f64,
    lambda_max: f64,
    out: &mut Vec<f64>,
) -> Result<()> {
    // the remaining axes contribute at least their minimum
    let rest_min: f64 = scale[axis + 1..]
        .iter()
        .map(|s| s * (start * start) as f64)
        .sum();
    let mut n = start;
    loop {
        let v = partial + scale[axis] * (n * n) as f64;
        if v + rest_min >= lambda_max {
            break;
        }
        if axis + 1 == scale.len() {
            if out.len() >= MAX_EIGENVALUES {
                return Err(Error::arg("too many eigenvalues below lambda_max"));
            }
            out.push(v);
        } else {
            enumerate_box(scale, start, axis + 1, v, lambda_max, out)?;
        }
        n += 1;
    }
    Ok(())
}

/// `#{n ∈ ℕ₀^d : |n| < 2Lπ⁻¹√λ}`, the Neumann counting function of `(−L, L)^d`.
pub fn count_box_neumann(lambda: f64, half_width: f64, dim: usize) -> Result<u64> {
    count_box_neumann_with(lambda, half_width, dim, Execution::default())
}

pub fn count_box_neumann_with(lambda: f64, half_width: f64, dim: usize, exec: Execution) -> Result<u64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::arg(format!("lambda must be positive, got {lambda}")));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::arg("half-width must be positive"));
    }
    if dim == 0 {
        return Err(Error::arg("dimension must be at least 1"));
    }
    let r2 = 4.0 * half_width * half_width * lambda / (PI * PI);
    let r = r2.sqrt();
    let estimate = unit_ball_volume(dim) * r.powi(dim as i32) / 2f64.powi(dim as i32) + 1.0;
    if estimate > 1e15 || (r + 1.0).powi(dim as i32 - 1) > MAX_OUTER_POINTS {
        return Err(Error::arg(format!(
            "lattice radius {r:.3e} too large to enumerate in dimension {dim}"
        )));
    }
    if dim == 1 {
        return Ok(count_last_axis(r2));
    }
    let outer = max_index_below(r2) as usize + 1;
    Ok(par::sum_range(exec, outer, |n0| {
        let rem = r2 - (n0 * n0) as f64;
        count_rec(rem, dim - 1)
    }))
}

/// Largest `n ≥ 0` with `n² < r2`, or 0 when none (callers check `r2 > 0`).
fn max_index_below(r2: f64) -> u64 {
    if r2 <= 0.0 {
        return 0;
    }
    let mut k = r2.sqrt().floor() as u64;
    while k > 0 && (k * k) as f64 >= r2 {
        k -= 1;
    }
    while (((k + 1) * (k + 1)) as f64) < r2 {
        k += 1;
    }
    k
}

fn count_last_axis(r2: f64) -> u64 {
    if r2 <= 0.0 {
        0
    } else {
        max_index_below(r2) + 1
    }
}

fn count_rec(rem: f64, axes_left: usize) -> u64 {
    if rem <= 0.0 {
        return 0;
    }
    if axes_left == 1 {
        return count_last_axis(rem);
    }
    (0..=max_index_below(rem))
        .map(|n| count_rec(rem - (n * n) as f64, axes_left - 1))
        .sum()
}

/// Volume of the unit ball, `ω_d`, via `ω_d = ω_{d−2}·2π/d`.
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        0 => 1.0,
        1 => 2.0,
        2 => PI,
        d => unit_ball_volume(d - 2) * 2.0 * PI / d as f64,
    }
}

/// Weyl term `ω_d |Ω| λ^{d/2} / (2π)^d`.
pub fn weyl_term(lambda: f64, measure: f64, dim: usize) -> f64 {
    let d = dim as i32;
    unit_ball_volume(dim) * measure * lambda.max(0.0).powf(0.5 * dim as f64) / (2.0 * PI).powi(d)
}

/// `ω_d π^{−d} L^d λ^{d/2}`, the lower bound for the Neumann count of `(−L, L)^d`.
pub fn cube_lower_bound(lambda: f64, half_width: f64, dim: usize) -> f64 {
    let d = dim as i32;
    unit_ball_volume(dim) * PI.powi(-d) * half_width.powi(d) * lambda.max(0.0).powf(0.5 * dim as f64)
}

/// Eigenvalues of `Ω₁ × Ω₂` below `lambda_max`: all pairwise sums.
pub fn product_spectrum(s1: &Spectrum, s2: &Spectrum, lambda_max: f64) -> Result<Spectrum> {
    if s1.bc != s2.bc {
        return Err(Error::arg("product of spectra with different boundary conditions"));
    }
    if !(s1.method.is_exact() && s2.method.is_exact()) {
        return Err(Error::arg("product spectra need exact factors"));
    }
    if !(lambda_max > 0.0) {
        return Err(Error::arg("lambda_max must be positive"));
    }
    let min1 = s1.values().first().copied().unwrap_or(f64::INFINITY);
    let min2 = s2.values().first().copied().unwrap_or(f64::INFINITY);
    // each factor must hold every value that can pair below lambda_max
    if s1.complete_below < lambda_max - min2 || s2.complete_below < lambda_max - min1 {
        return Err(Error::SpectrumUnavailable(
            "factor spectra are truncated below the requested lambda_max".into(),
        ));
    }
    let mut values = Vec::new();
    for &a in s1.values() {
        if a + min2 >= lambda_max {
            break;
        }
        for &b in s2.values() {
            let v = a + b;
            if v >= lambda_max {
                break;
            }
            values.push(v);
        }
    }
    values.sort_by(f64::total_cmp);
    Ok(Spectrum::exact(
        s1.bc,
        values,
        s1.domain_measure * s2.domain_measure,
        s1.dim + s2.dim,
        lambda_max,
    ))
}

/// Bessel function `J₀` by its power series (accurate for `|x| ≲ 10`).
pub fn bessel_j0(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// First positive zero of `J₀`, bisected on `[2, 3]` to an interval below 1e-12.
pub fn bessel_j0_first_zero() -> f64 {
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    let f_lo = bessel_j0(lo);
    debug_assert!(f_lo > 0.0 && bessel_j0(hi) < 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if bessel_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First Dirichlet eigenvalue of the disk of the given radius, `j₀,₁² / r²`.
pub fn ball_dirichlet_lambda1(radius: f64) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::arg("radius must be positive"));
    }
    let j = bessel_j0_first_zero();
    Ok(j * j / (radius * radius))
}
