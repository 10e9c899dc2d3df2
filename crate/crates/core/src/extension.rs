//! Reflection extension of grid functions from `(−L, L)^d \ Q` to the padded
//! box `(−L−R, L+R)^d \ Q`, and the eigenvalue-count transfer it implies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, Domain};
use crate::inequality::{certified_lower_count, counting_function, CheckRecord, Inequality, InequalityReport};
use crate::par::{self, Execution};
use crate::solve::{spectrum_below, SolveOptions};
use crate::spectra::{BoundaryCondition, Method};

/// Relative tolerance for grid alignment of `L`, `R` and the holes.
const ALIGN_TOL: f64 = 1e-9;

/// Coordinatewise fold of the padded box onto `[−L, L]^d`.
pub fn reflect_point(x: &[f64], l: f64, r: f64) -> Result<Vec<f64>> {
    if !(l > 0.0 && r >= 0.0) {
        return Err(Error::arg("need L > 0 and R ≥ 0"));
    }
    x.iter()
        .map(|&xj| {
            if !(xj.abs() < l + r || (r == 0.0 && xj.abs() <= l)) {
                return Err(Error::arg(format!("coordinate {xj} outside the padded box (−{}, {})", l + r, l + r)));
            }
            Ok(if xj < -l {
                -2.0 * l - xj
            } else if xj > l {
                2.0 * l - xj
            } else {
                xj
            })
        })
        .collect()
}

/// Nodal values on a uniform grid over a box, with an activity mask.
///
/// A cell is active when its centre lies in the open box and outside every
/// hole; a node is active when it is a corner of some active cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    dim: usize,
    h: f64,
    lo: Vec<f64>,
    shape: Vec<usize>,
    values: Vec<f64>,
    cell_active: Vec<bool>,
    node_active: Vec<bool>,
}

/// JSON header accompanying the raw little-endian `f64` node values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub dim: usize,
    pub spacing: f64,
    pub lower: Vec<f64>,
    pub shape: Vec<usize>,
    /// Run-length encoded node mask as `(active, run)` pairs.
    pub mask: Vec<(bool, usize)>,
}

fn steps(len: f64, h: f64) -> Result<usize> {
    let n = len / h;
    let r = n.round();
    if (n - r).abs() > ALIGN_TOL * n.max(1.0) {
        return Err(Error::arg(format!("length {len} is not a multiple of the spacing {h}")));
    }
    Ok(r as usize)
}

impl GridField {
    /// Samples `f` on `[lo, lo + n·h]` per axis; `holes` are removed (closed sets).
    pub fn sample<F>(lo: Vec<f64>, shape: Vec<usize>, h: f64, holes: &[AxisBox], f: F) -> Result<GridField>
    where
        F: Fn(&[f64]) -> f64,
    {
        let dim = lo.len();
        if dim == 0 || shape.len() != dim {
            return Err(Error::arg("grid lower corner and shape differ in dimension"));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::arg("grid spacing must be positive"));
        }
        if shape.iter().any(|&n| n < 2) {
            return Err(Error::arg("each axis needs at least two nodes"));
        }
        if holes.iter().any(|q| q.dim() != dim) {
            return Err(Error::arg("hole dimension mismatch"));
        }
        for q in holes {
            for (a, &(qa, qb)) in q.bounds().iter().enumerate() {
                steps(qa - lo[a], h)?;
                steps(qb - lo[a], h)?;
            }
        }
        let nodes: usize = shape.iter().product();
        if nodes > 50_000_000 {
            return Err(Error::arg("grid too large"));
        }
        let mut g = GridField {
            dim,
            h,
            lo,
            shape,
            values: vec![0.0; nodes],
            cell_active: Vec::new(),
            node_active: vec![false; nodes],
        };
        let cells: usize = g.shape.iter().map(|n| n - 1).product();
        g.cell_active = (0..cells)
            .map(|c| {
                let centre: Vec<f64> = g
                    .cell_multi(c)
                    .iter()
                    .enumerate()
                    .map(|(a, &i)| g.lo[a] + (i as f64 + 0.5) * h)
                    .collect();
                !holes.iter().any(|q| q.contains_closed(&centre))
            })
            .collect();
        for c in 0..cells {
            if g.cell_active[c] {
                for node in g.cell_corners(c) {
                    g.node_active[node] = true;
                }
            }
        }
        let mut x = vec![0.0; dim];
        for i in 0..nodes {
            if g.node_active[i] {
                g.coords_into(i, &mut x);
                g.values[i] = f(&x);
            }
        }
        Ok(g)
    }

    /// Field on `[−L, L]^d` with spacing `h`.
    pub fn on_cube<F>(dim: usize, l: f64, h: f64, holes: &[AxisBox], f: F) -> Result<GridField>
    where
        F: Fn(&[f64]) -> f64,
    {
        let n = steps(2.0 * l, h)?;
        GridField::sample(vec![-l; dim], vec![n + 1; dim], h, holes, f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_active(&self, node: usize) -> bool {
        self.node_active[node]
    }

    pub fn active_nodes(&self) -> usize {
        self.node_active.iter().filter(|&&a| a).count()
    }

    /// Total volume of active cells.
    pub fn measure(&self) -> f64 {
        self.cell_active.iter().filter(|&&a| a).count() as f64 * self.h.powi(self.dim as i32)
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.node_active)
            .filter(|(_, a)| **a)
            .fold(0.0, |m, (v, _)| m.max(v.abs()))
    }

    fn node_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    fn node_multi(&self, mut idx: usize) -> Vec<usize> {
        let mut m = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            m[a] = idx % self.shape[a];
            idx /= self.shape[a];
        }
        m
    }

    fn cell_multi(&self, mut idx: usize) -> Vec<usize> {
        let mut m = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            let n = self.shape[a] - 1;
            m[a] = idx % n;
            idx /= n;
        }
        m
    }

    fn cell_corners(&self, cell: usize) -> Vec<usize> {
        let base = self.cell_multi(cell);
        (0..1usize << self.dim)
            .map(|bits| {
                let m: Vec<usize> = base.iter().enumerate().map(|(a, &i)| i + ((bits >> a) & 1)).collect();
                self.node_index(&m)
            })
            .collect()
    }

    fn coords_into(&self, idx: usize, x: &mut [f64]) {
        for (a, i) in self.node_multi(idx).into_iter().enumerate() {
            x[a] = self.lo[a] + i as f64 * self.h;
        }
    }

    pub fn coords(&self, idx: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        self.coords_into(idx, &mut x);
        x
    }

    /// Node index of the grid point `x`, if `x` lies on the grid.
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        let mut m = Vec::with_capacity(self.dim);
        for (a, &xa) in x.iter().enumerate() {
            let t = (xa - self.lo[a]) / self.h;
            let r = t.round();
            if (t - r).abs() > 1e-6 || r < 0.0 || r as usize >= self.shape[a] {
                return None;
            }
            m.push(r as usize);
        }
        Some(self.node_index(&m))
    }

    /// Tensor trapezoidal `‖f‖²_{L²}` plus forward-difference `‖∇f‖²`, both
    /// summed over active cells.
    pub fn sobolev_norm_sq(&self) -> f64 {
        let cells = self.cell_active.len();
        let vol = self.h.powi(self.dim as i32);
        let corners = 1usize << self.dim;
        let mut total = 0.0;
        for c in 0..cells {
            if !self.cell_active[c] {
                continue;
            }
            let nodes = self.cell_corners(c);
            let l2: f64 = nodes.iter().map(|&i| self.values[i] * self.values[i]).sum::<f64>() / corners as f64;
            let mut grad = 0.0;
            for a in 0..self.dim {
                // edges along axis a join corners differing in bit a
                for (bits, &n0) in nodes.iter().enumerate() {
                    if bits >> a & 1 == 0 {
                        let n1 = nodes[bits | 1 << a];
                        let d = (self.values[n1] - self.values[n0]) / self.h;
                        grad += d * d;
                    }
                }
            }
            total += vol * (l2 + grad / (corners / 2) as f64);
        }
        total
    }

    /// Copies values onto the nodes of `target` that lie on this grid.
    pub fn restrict_to(&self, target: &GridField) -> Result<GridField> {
        let mut out = target.clone();
        for i in 0..out.values.len() {
            if out.node_active[i] {
                let j = self
                    .locate(&out.coords(i))
                    .ok_or_else(|| Error::arg("target grid does not lie on this grid"))?;
                out.values[i] = self.values[j];
            }
        }
        Ok(out)
    }

    pub fn header(&self) -> FieldHeader {
        let mut mask: Vec<(bool, usize)> = Vec::new();
        for &a in &self.node_active {
            match mask.last_mut() {
                Some((b, n)) if *b == a => *n += 1,
                _ => mask.push((a, 1)),
            }
        }
        FieldHeader {
            dim: self.dim,
            spacing: self.h,
            lower: self.lo.clone(),
            shape: self.shape.clone(),
            mask,
        }
    }

    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.values.iter().flat_map(|v| v.to_le_bytes()).collect()
    }
}

fn holes_inside_margin(holes: &[AxisBox], l: f64, r: f64) -> Result<()> {
    for q in holes {
        if q.bounds().iter().any(|&(a, b)| !(a > -l + r && b < l - r)) {
            return Err(Error::arg(format!(
                "hole {:?} must lie inside (−L+R, L−R)^d = ({}, {})^d",
                q.bounds(),
                -l + r,
                l - r
            )));
        }
    }
    Ok(())
}

/// `Πf(x) = f(x̄)` on the padded grid. `f` must live on `[−L, L]^d` with holes
/// strictly inside `(−L+R, L−R)^d`.
pub fn extend_field(f: &GridField, l: f64, r: f64, holes: &[AxisBox]) -> Result<GridField> {
    let d = f.dim;
    if f.lo.iter().any(|&a| (a + l).abs() > ALIGN_TOL * l) || f.shape.iter().any(|&n| steps(2.0 * l, f.h).map_or(true, |s| s + 1 != n)) {
        return Err(Error::arg("field must cover [−L, L]^d exactly"));
    }
    if !(r > 0.0 && r < l) {
        return Err(Error::arg("need 0 < R < L"));
    }
    holes_inside_margin(holes, l, r)?;
    let n = steps(2.0 * (l + r), f.h)?;
    steps(r, f.h)?;
    let mut out = GridField::sample(vec![-(l + r); d], vec![n + 1; d], f.h, holes, |_| 0.0)?;
    for i in 0..out.values.len() {
        if !out.node_active[i] {
            continue;
        }
        let x = out.coords(i);
        // nodes on the outer boundary are closure points; fold them with a tiny inward nudge
        let xin: Vec<f64> = x.iter().map(|&v| v.clamp(-(l + r) * (1.0 - 1e-15), (l + r) * (1.0 - 1e-15))).collect();
        let xbar = reflect_point(&xin, l, r)?;
        let j = f
            .locate(&xbar)
            .ok_or_else(|| Error::Numerical(format!("reflected node {xbar:?} is off the grid")))?;
        if !f.node_active[j] {
            return Err(Error::Numerical(format!("reflected node {xbar:?} falls in a hole")));
        }
        out.values[i] = f.values[j];
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionReport {
    pub dim: usize,
    pub spacing: f64,
    pub original_norm_sq: f64,
    pub extended_norm_sq: f64,
    pub ratio: f64,
    /// `2^d`
    pub bound: f64,
    /// `C·h` with `C = 10·max|f|`.
    pub slack: f64,
    pub pass: bool,
    /// The bound was exceeded but by less than the slack.
    pub within_slack_only: bool,
}

pub fn check_extension_bound(f: &GridField, l: f64, r: f64, holes: &[AxisBox]) -> Result<ExtensionReport> {
    let ext = extend_field(f, l, r, holes)?;
    let original = f.sobolev_norm_sq();
    let extended = ext.sobolev_norm_sq();
    let bound = (1u64 << f.dim) as f64;
    let slack = 10.0 * f.max_abs() * f.h;
    let limit = bound * original;
    let report = ExtensionReport {
        dim: f.dim,
        spacing: f.h,
        original_norm_sq: original,
        extended_norm_sq: extended,
        ratio: if original > 0.0 { extended / original } else { 0.0 },
        bound,
        slack,
        pass: extended <= limit + slack,
        within_slack_only: extended > limit && extended <= limit + slack,
    };
    if !report.pass {
        return Err(Error::BoundViolated(format!(
            "extended norm² {extended} exceeds 2^d·{original} + {slack}"
        )));
    }
    Ok(report)
}

/// Random smooth field: a short trigonometric sum with seeded coefficients.
pub fn random_trig_field(rng: &mut ChaCha8Rng, dim: usize) -> impl Fn(&[f64]) -> f64 {
    let terms = rng.gen_range(1..=4);
    let modes: Vec<(f64, Vec<f64>, f64)> = (0..terms)
        .map(|_| {
            let amp = rng.gen_range(-1.0..1.0);
            let freq: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            (amp, freq, phase)
        })
        .collect();
    move |x: &[f64]| {
        modes
            .iter()
            .map(|(a, k, p)| a * (k.iter().zip(x).map(|(ki, xi)| ki * xi).sum::<f64>() + p).cos())
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionTrials {
    pub dim: usize,
    pub l: f64,
    pub r: f64,
    pub spacing: f64,
    pub seed: u64,
    pub reports: Vec<ExtensionReport>,
    pub max_ratio: f64,
    pub pass: bool,
}

/// Field and holes of trial `t`: a random trigonometric sum seeded with
/// `seed + t`, with a central hole on odd trials when one fits the margin.
pub fn trial_field(dim: usize, l: f64, r: f64, h: f64, seed: u64, t: usize) -> Result<(GridField, Vec<AxisBox>)> {
    let hole_half = ((l - r) / 2.0 / h).floor() * h;
    let holes = if t % 2 == 1 && hole_half > 0.0 {
        vec![AxisBox::centered_cube(hole_half, dim)?]
    } else {
        Vec::new()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
    let f = random_trig_field(&mut rng, dim);
    Ok((GridField::on_cube(dim, l, h, &holes, f)?, holes))
}

/// Runs [`check_extension_bound`] on `trials` fields from [`trial_field`].
pub fn extension_trials(
    dim: usize,
    l: f64,
    r: f64,
    h: f64,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<ExtensionTrials> {
    if trials == 0 {
        return Err(Error::arg("need at least one trial"));
    }
    let results = par::map_range(exec, trials, |t| {
        let (field, holes) = trial_field(dim, l, r, h, seed, t)?;
        check_extension_bound(&field, l, r, &holes)
    });
    let reports = results.into_iter().collect::<Result<Vec<_>>>()?;
    let max_ratio = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(ExtensionTrials {
        dim,
        l,
        r,
        spacing: h,
        seed,
        pass: reports.iter().all(|r| r.pass),
        reports,
        max_ratio,
    })
}

/// `N_N(λ, inner) ≤ N_N(c·(λ+1), outer)` with `c` the squared extension norm.
///
/// Approximate counts are widened soundly: the inner side uses the upper end
/// of its bracket, the outer side the certified lower count.
pub fn check_count_transfer(
    grid: &[f64],
    inner: &Domain,
    outer: &Domain,
    norm_sq_bound: f64,
    opts: SolveOptions,
) -> Result<InequalityReport> {
    if !(norm_sq_bound >= 1.0) {
        return Err(Error::arg("an extension operator has norm at least 1"));
    }
    if grid.is_empty() || grid.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
        return Err(Error::arg("λ grid must be nonempty, finite and nonnegative"));
    }
    if inner.dim() != outer.dim() {
        return Err(Error::arg("inner and outer domains differ in dimension"));
    }
    let top = grid.iter().copied().fold(0.0, f64::max);
    let bc = BoundaryCondition::Neumann;
    let s_in = spectrum_below(inner, bc, top.max(f64::MIN_POSITIVE) * (1.0 + 1e-12) + 1e-12, opts)?;
    let s_out = spectrum_below(outer, bc, norm_sq_bound * (top + 1.0) * (1.0 + 1e-12), opts)?;
    let caveat = !(s_in.method.is_exact() && s_out.method.is_exact());
    let records = grid
        .iter()
        .map(|&lambda| {
            let c = counting_function(&s_in, lambda);
            let lhs = c.bracket.map_or(c.count, |b| b.1) as f64;
            let inflated = norm_sq_bound * (lambda + 1.0);
            let rhs = if s_out.method.is_exact() {
                s_out.count_below(inflated)
            } else {
                certified_lower_count(&s_out, inflated)
            } as f64;
            CheckRecord::new(lambda, lhs, rhs, rhs - lhs, caveat)
        })
        .collect();
    let method = if caveat {
        if s_in.method.is_exact() { s_out.method } else { s_in.method }
    } else {
        Method::Exact
    };
    Ok(InequalityReport::from_records(Inequality::CountTransfer, method, inner.dim(), records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reflect_examples() {
        assert!((reflect_point(&[1.2], 1.0, 0.5).unwrap()[0] - 0.8).abs() < 1e-15);
        assert_eq!(reflect_point(&[0.3], 1.0, 0.5).unwrap(), vec![0.3]);
        let y = reflect_point(&[-1.3, 1.1], 1.0, 0.5).unwrap();
        assert!((y[0] + 0.7).abs() < 1e-15 && (y[1] - 0.9).abs() < 1e-15);
        assert!(reflect_point(&[1.6], 1.0, 0.5).is_err());
    }

    #[test]
    fn preimages_are_at_most_two_to_the_d() {
        // count padded grid points folding onto each image point
        let (l, r, h): (f64, f64, f64) = (1.0, 0.5, 0.1);
        let n = ((2.0 * (l + r)) / h).round() as i64;
        let mut hits = std::collections::HashMap::new();
        for i in 1..n {
            for j in 1..n {
                let x = [-(l + r) + i as f64 * h, -(l + r) + j as f64 * h];
                let y = reflect_point(&x, l, r).unwrap();
                let key = ((y[0] / h).round() as i64, (y[1] / h).round() as i64);
                *hits.entry(key).or_insert(0) += 1;
            }
        }
        assert_eq!(*hits.values().max().unwrap(), 4);
    }

    #[test]
    fn norm_examples() {
        let one = GridField::on_cube(1, 1.0, 0.01, &[], |_| 1.0).unwrap();
        assert!((one.sobolev_norm_sq() - 2.0).abs() < 1e-12);
        let lin = GridField::on_cube(1, 1.0, 0.01, &[], |x| x[0]).unwrap();
        assert!((lin.sobolev_norm_sq() - 8.0 / 3.0).abs() < 1e-3);
        let coarse = GridField::on_cube(1, 1.0, 0.02, &[], |x| x[0].sin()).unwrap();
        let fine = GridField::on_cube(1, 1.0, 0.01, &[], |x| x[0].sin()).unwrap();
        assert!((coarse.sobolev_norm_sq() - fine.sobolev_norm_sq()).abs() < 0.02);
    }

    #[test]
    fn linear_field_extension() {
        let f = GridField::on_cube(1, 1.0, 0.01, &[], |x| x[0]).unwrap();
        let e = extend_field(&f, 1.0, 0.5, &[]).unwrap();
        let i = e.locate(&[1.2]).unwrap();
        assert!((e.values()[i] - 0.8).abs() < 1e-12);
        let rep = check_extension_bound(&f, 1.0, 0.5, &[]).unwrap();
        assert!((rep.extended_norm_sq - 4.25).abs() < 1e-3);
        assert!((rep.original_norm_sq - 8.0 / 3.0).abs() < 1e-3);
        assert!(rep.pass && !rep.within_slack_only);
        let c = check_extension_bound(&GridField::on_cube(1, 1.0, 0.01, &[], |_| 1.0).unwrap(), 1.0, 0.5, &[]).unwrap();
        assert!((c.ratio - 1.5).abs() < 1e-12);
    }

    #[test]
    fn extension_restricts_back_and_respects_holes() {
        let hole = AxisBox::centered_cube(0.25, 2).unwrap();
        let g = |x: &[f64]| x[0] * x[0] - 0.3 * x[1];
        let f = GridField::on_cube(2, 1.0, 0.05, std::slice::from_ref(&hole), g).unwrap();
        assert!((f.measure() - (4.0 - 0.25)).abs() < 1e-12);
        let e = extend_field(&f, 1.0, 0.5, std::slice::from_ref(&hole)).unwrap();
        assert_eq!(e.restrict_to(&f).unwrap(), f);
        let bad = AxisBox::centered_cube(0.75, 2).unwrap();
        let f2 = GridField::on_cube(2, 1.0, 0.05, std::slice::from_ref(&bad), g).unwrap();
        assert!(extend_field(&f2, 1.0, 0.5, &[bad]).is_err());
    }

    #[test]
    fn separable_fields_extend_to_products() {
        let g = |t: f64| (1.3 * t).sin() + 0.2;
        let f2 = GridField::on_cube(2, 1.0, 0.1, &[], |x| g(x[0]) * g(x[1])).unwrap();
        let f1 = GridField::on_cube(1, 1.0, 0.1, &[], |x| g(x[0])).unwrap();
        let e2 = extend_field(&f2, 1.0, 0.5, &[]).unwrap();
        let e1 = extend_field(&f1, 1.0, 0.5, &[]).unwrap();
        for i in 0..e2.values().len() {
            let x = e2.coords(i);
            let a = e1.values()[e1.locate(&x[..1]).unwrap()];
            let b = e1.values()[e1.locate(&x[1..]).unwrap()];
            assert!((e2.values()[i] - a * b).abs() < 1e-14);
        }
    }

    #[test]
    fn random_trials_pass_in_one_and_two_dimensions() {
        for d in [1, 2] {
            let t = extension_trials(d, 1.0, 0.5, 0.05, 200, 7, Execution::Parallel).unwrap();
            assert!(t.pass);
            assert!(t.max_ratio <= 2f64.powi(d as i32));
            let s = extension_trials(d, 1.0, 0.5, 0.05, 6, 7, Execution::Sequential).unwrap();
            assert_eq!(s.reports[..], t.reports[..6]);
        }
    }

    #[test]
    fn header_and_bytes() {
        let hole = AxisBox::centered_cube(0.25, 1).unwrap();
        let f = GridField::on_cube(1, 1.0, 0.25, &[hole], |x| x[0]).unwrap();
        let h = f.header();
        assert_eq!(h.shape, vec![9]);
        assert_eq!(h.mask, vec![(true, 4), (false, 1), (true, 4)]);
        assert_eq!(f.to_le_bytes().len(), 9 * 8);
    }

    #[test]
    fn count_transfer_examples() {
        let opts = SolveOptions::default();
        let inner = Domain::interval(-1.0, 1.0).unwrap();
        let outer = Domain::interval(-1.5, 1.5).unwrap();
        let r = check_count_transfer(&[10.0], &inner, &outer, 2.0, opts).unwrap();
        assert_eq!((r.records[0].lhs, r.records[0].rhs), (3.0, 5.0));
        assert!(r.pass);
        let r = check_count_transfer(&[10.0], &inner, &inner, 1.0, opts).unwrap();
        assert!(r.pass);
        let bi = Domain::axis_box(vec![(-1.0, 1.0); 2]).unwrap();
        let bo = Domain::axis_box(vec![(-1.5, 1.5); 2]).unwrap();
        let grid: Vec<f64> = (1..=100).map(|i| i as f64 * 0.5).collect();
        let r = check_count_transfer(&grid, &bi, &bo, 4.0, opts).unwrap();
        assert!(r.pass && !r.discretization_caveat);
        assert_eq!(r.records[19].lhs, 6.0);
    }

    proptest! {
        #[test]
        fn fold_lands_in_closed_cube(x in -1.49f64..1.49, y in -1.49f64..1.49) {
            let z = reflect_point(&[x, y], 1.0, 0.5).unwrap();
            prop_assert!(z.iter().all(|v| v.abs() <= 1.0));
        }
    }
}
