//! Numerical replay of the tiling argument: bracketing, the cube comparison
//! chain and the lower bound on `N_N(λ, Ω)` as the cube grows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{interiors_disjoint, AxisBox, Domain};
use crate::inequality::{certified_lower_count, counting_function, CheckRecord, Inequality, InequalityReport};
use crate::par::{self, Execution};
use crate::solve::{extrapolated_spectrum_below, has_exact_spectrum, spectrum_below, SolveOptions};
use crate::spectra::{cube_lower_bound, weyl_term, BoundaryCondition, Method, Spectrum};
use crate::tiling::{generate_tiling, index_set_bounds, index_sets, IndexSetBounds, Tiling};

/// Index-set validation is skipped above this half-width.
pub const MAX_ENUMERATED_L: f64 = 64.0;

/// `N_N(λ, whole) ≤ Σ_j N_N(λ, part_j)` on each grid point.
pub fn check_bracketing(whole: &Domain, parts: &[Domain], grid: &[f64], opts: SolveOptions) -> Result<InequalityReport> {
    if parts.is_empty() {
        return Err(Error::arg("bracketing needs at least one part"));
    }
    if grid.is_empty() || grid.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
        return Err(Error::arg("λ grid must be nonempty, finite and nonnegative"));
    }
    if parts.iter().any(|p| p.dim() != whole.dim()) {
        return Err(Error::arg("parts and whole differ in dimension"));
    }
    let total: f64 = parts.iter().map(Domain::measure).sum();
    if (total - whole.measure()).abs() > 1e-9 * whole.measure() {
        return Err(Error::arg(format!(
            "parts have total measure {total}, the whole has {}",
            whole.measure()
        )));
    }
    if parts.len() > 1 && !interiors_disjoint(parts) {
        return Err(Error::arg("parts overlap"));
    }
    let top = grid.iter().copied().fold(0.0, f64::max) * (1.0 + 1e-12) + 1e-12;
    let bc = BoundaryCondition::Neumann;
    let whole_s = extrapolated_spectrum_below(whole, bc, top, opts)?;
    let part_s = parts
        .iter()
        .map(|p| spectrum_below(p, bc, top, opts))
        .collect::<Result<Vec<_>>>()?;
    let caveat = !whole_s.method.is_exact() || part_s.iter().any(|s| !s.method.is_exact());
    let records = grid
        .iter()
        .map(|&lambda| {
            let c = counting_function(&whole_s, lambda);
            let lhs = c.bracket.map_or(c.count, |b| b.1) as f64;
            let rhs: usize = part_s
                .iter()
                .map(|s| {
                    if s.method.is_exact() {
                        s.count_below(lambda)
                    } else {
                        certified_lower_count(s, lambda)
                    }
                })
                .sum();
            CheckRecord::new(lambda, lhs, rhs as f64, rhs as f64 - lhs, caveat)
        })
        .collect();
    let method = if caveat { whole_s.method } else { Method::Exact };
    Ok(InequalityReport::from_records(Inequality::Bracketing, method, whole.dim(), records))
}

/// `((L+R)^d − (L−2R)^d) / L^d`
pub fn defect(l: f64, r: f64, dim: usize) -> Result<f64> {
    if !(l > 2.0 * r) {
        return Err(Error::arg(format!("L = {l} must exceed 2R = {}", 2.0 * r)));
    }
    let d = dim as i32;
    Ok(((l + r).powi(d) - (l - 2.0 * r).powi(d)) / l.powi(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prototile {
    pub measure: f64,
    pub diameter: f64,
    pub dim: usize,
}

impl Prototile {
    pub fn of(domain: &Domain) -> Prototile {
        Prototile {
            measure: domain.measure(),
            diameter: domain.diameter(),
            dim: domain.dim(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBound {
    pub l: f64,
    pub defect: f64,
    pub lower_bound: f64,
    pub weyl_term: f64,
    pub n_self: usize,
    /// `N_self ≥ lower_bound`
    pub pass: bool,
}

/// `W(λ) − defect(L)·N_N(2^d(λ+1), Ω)`, compared against `N_self`.
pub fn proof_lower_bound(lambda: f64, tile: Prototile, n_self: usize, n_inflated: usize, l: f64) -> Result<LowerBound> {
    if !(lambda > 0.0) {
        return Err(Error::arg("λ must be positive"));
    }
    let defect = defect(l, tile.diameter, tile.dim)?;
    let w = weyl_term(lambda, tile.measure, tile.dim);
    let lower_bound = w - defect * n_inflated as f64;
    Ok(LowerBound {
        l,
        defect,
        lower_bound,
        weyl_term: w,
        n_self,
        pass: n_self as f64 >= lower_bound,
    })
}

/// Enumerated check at one `L`: index-set counts against their volume bounds,
/// and `ω_d π^{−d} L^d λ^{d/2} ≤ #I·N_N(λ) + #K·N_N(2^d(λ+1))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCheck {
    pub bounds: IndexSetBounds,
    pub count_meeting: usize,
    pub cube_lower_bound: f64,
    pub chain_rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofRow {
    #[serde(flatten)]
    pub bound: LowerBound,
    pub chain: Option<ChainCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofReport {
    pub tiling: Option<String>,
    pub lambda: f64,
    pub inflated_lambda: f64,
    pub prototile: Prototile,
    pub weyl_term: f64,
    pub n_self: usize,
    pub n_inflated: usize,
    pub counts_method: Method,
    /// Counts come from finite elements: they never exceed the true counts,
    /// which can only make the asserted bound harder to meet.
    pub fem_caveat: bool,
    pub rows: Vec<ProofRow>,
    pub bound_nondecreasing: bool,
    pub chain_pass: bool,
    pub pass: bool,
}

impl ProofReport {
    /// Columns `L,defect,lower_bound,weyl_term,N_self`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("L,defect,lower_bound,weyl_term,N_self\n");
        for r in &self.rows {
            let b = &r.bound;
            out.push_str(&format!("{},{},{},{},{}\n", b.l, b.defect, b.lower_bound, b.weyl_term, b.n_self));
        }
        out
    }
}

fn chain_check(t: &Tiling, l: f64, lambda: f64, n_self: usize, n_inflated: usize) -> Result<Option<ChainCheck>> {
    let d = t.dim();
    let cube = AxisBox::centered_cube(l, d)?;
    let regenerated;
    let tiling = if t.window.encloses(&cube) {
        t
    } else if let Some(shape) = t.shape {
        regenerated = generate_tiling(shape, t.scale, &AxisBox::centered_cube(l + 1e-9 * l, d)?)?;
        &regenerated
    } else {
        return Ok(None);
    };
    let sets = index_sets(tiling, l)?;
    let bounds = index_set_bounds(&sets, tiling.prototile.measure(), d)?;
    let lower = cube_lower_bound(lambda, l, d);
    let rhs = (sets.inner.len() * n_self + sets.boundary_layer.len() * n_inflated) as f64;
    Ok(Some(ChainCheck {
        bounds,
        count_meeting: sets.meeting.len(),
        cube_lower_bound: lower,
        chain_rhs: rhs,
        pass: lower <= rhs,
    }))
}

/// Replays the argument for the tiling's prototile at each `L` (evaluated
/// concurrently, reported in increasing `L`).
pub fn proof_report(t: &Tiling, lambda: f64, l_list: &[f64], opts: SolveOptions, exec: Execution) -> Result<ProofReport> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::arg("λ must be positive and finite"));
    }
    if l_list.is_empty() {
        return Err(Error::arg("need at least one L"));
    }
    let tile = Prototile::of(&t.prototile);
    let inflated = 2f64.powi(tile.dim as i32) * (lambda + 1.0);
    let spectrum: Spectrum = spectrum_below(&t.prototile, BoundaryCondition::Neumann, inflated * (1.0 + 1e-12), opts)?;
    let exact = has_exact_spectrum(&t.prototile) && spectrum.method.is_exact();
    let count = |x: f64| if exact { spectrum.count_below(x) } else { certified_lower_count(&spectrum, x) };
    let n_self = count(lambda);
    let n_inflated = count(inflated);

    let mut ls = l_list.to_vec();
    ls.sort_by(f64::total_cmp);
    ls.dedup();
    let rows = par::map_slice(exec, &ls, |&l| -> Result<ProofRow> {
        let bound = proof_lower_bound(lambda, tile, n_self, n_inflated, l)?;
        let chain = if l <= MAX_ENUMERATED_L {
            chain_check(t, l, lambda, n_self, n_inflated)?
        } else {
            None
        };
        Ok(ProofRow { bound, chain })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let bound_nondecreasing = rows
        .windows(2)
        .all(|w| w[1].bound.lower_bound >= w[0].bound.lower_bound);
    let chain_pass = rows.iter().all(|r| r.chain.as_ref().is_none_or(|c| c.pass));
    let last = rows.last().expect("nonempty");
    Ok(ProofReport {
        tiling: t.shape.map(|s| s.name().to_string()),
        lambda,
        inflated_lambda: inflated,
        prototile: tile,
        weyl_term: last.bound.weyl_term,
        n_self,
        n_inflated,
        counts_method: spectrum.method,
        fem_caveat: !exact,
        pass: last.bound.pass && bound_nondecreasing && chain_pass,
        bound_nondecreasing,
        chain_pass,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::CatalogShape;

    fn square_tiling(half: f64) -> Tiling {
        generate_tiling(CatalogShape::Square, 1.0, &AxisBox::centered_cube(half, 2).unwrap()).unwrap()
    }

    #[test]
    fn bracketing_examples() {
        let opts = SolveOptions::default();
        let whole = Domain::axis_box(vec![(-1.0, 1.0); 2]).unwrap();
        let quads: Vec<Domain> = [(-1.0, 0.0), (0.0, 1.0)]
            .iter()
            .flat_map(|&x| [(-1.0, 0.0), (0.0, 1.0)].map(|y| Domain::axis_box(vec![x, y]).unwrap()))
            .collect();
        let r = check_bracketing(&whole, &quads, &[10.0], opts).unwrap();
        assert_eq!((r.records[0].lhs, r.records[0].rhs), (6.0, 12.0));
        let r = check_bracketing(&whole, std::slice::from_ref(&whole), &[10.0, 50.0], opts).unwrap();
        assert!(r.pass && r.equality_cases == 2);
        let line = Domain::interval(0.0, 2.0).unwrap();
        let halves = [Domain::interval(0.0, 1.0).unwrap(), Domain::interval(1.0, 2.0).unwrap()];
        let r = check_bracketing(&line, &halves, &[10.0], opts).unwrap();
        assert_eq!((r.records[0].lhs, r.records[0].rhs), (3.0, 4.0));
        assert!(check_bracketing(&whole, &quads[..3], &[10.0], opts).is_err());
    }

    #[test]
    fn bracketing_with_fem_parts_is_flagged() {
        let opts = SolveOptions { refine: 3, ..Default::default() };
        let whole = Domain::axis_box(vec![(0.0, 1.0), (0.0, 1.0)]).unwrap();
        let parts = [
            Domain::polygon(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap(),
            Domain::polygon(vec![[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap(),
        ];
        let r = check_bracketing(&whole, &parts, &[20.0, 60.0, 100.0], opts).unwrap();
        assert!(r.pass && r.discretization_caveat);
    }

    #[test]
    fn lower_bound_arithmetic() {
        let tile = Prototile { measure: 1.0, diameter: 2f64.sqrt(), dim: 2 };
        let b = proof_lower_bound(100.0, tile, 13, 39, 1024.0).unwrap();
        assert!((b.defect - 0.0082807).abs() < 1e-6);
        assert!((b.lower_bound - 7.635).abs() < 1e-3 && b.pass);
        let b = proof_lower_bound(100.0, tile, 13, 39, 32.0).unwrap();
        assert!((b.lower_bound + 2.16).abs() < 1e-2);
        let far = proof_lower_bound(100.0, tile, 13, 39, 1e9).unwrap();
        assert!((far.lower_bound - far.weyl_term).abs() < 1e-6);
        assert!(proof_lower_bound(100.0, tile, 13, 39, 2.0).is_err());
        let mut prev = f64::INFINITY;
        for l in [3.0, 4.0, 8.0, 16.0, 100.0, 1e4] {
            let d = defect(l, 2f64.sqrt(), 2).unwrap();
            assert!(d < prev);
            prev = d;
        }
    }

    #[test]
    fn square_report() {
        let t = square_tiling(9.0);
        let r = proof_report(&t, 100.0, &[1024.0, 8.0, 32.0], SolveOptions::default(), Execution::Parallel).unwrap();
        assert_eq!((r.n_self, r.n_inflated), (13, 39));
        assert!(r.pass && !r.fem_caveat);
        let l: Vec<f64> = r.rows.iter().map(|x| x.bound.l).collect();
        assert_eq!(l, vec![8.0, 32.0, 1024.0]);
        assert!((r.rows[0].bound.defect - 0.96691).abs() < 1e-5);
        assert!((r.rows[0].bound.lower_bound + 29.75).abs() < 0.01);
        assert!(r.rows[0].chain.is_some() && r.rows[2].chain.is_none());
        let csv = r.to_csv();
        assert!(csv.starts_with("L,defect,lower_bound,weyl_term,N_self\n8,"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn chain_inequality_on_square_tiling() {
        let t = square_tiling(33.0);
        for lambda in [10.0, 100.0] {
            let r = proof_report(&t, lambda, &[8.0, 16.0, 32.0], SolveOptions::default(), Execution::Sequential).unwrap();
            for row in &r.rows {
                let c = row.chain.as_ref().unwrap();
                assert!(c.pass, "L={} λ={lambda}: {} > {}", row.bound.l, c.cube_lower_bound, c.chain_rhs);
            }
        }
    }

    #[test]
    fn log_grid_on_exact_prototiles() {
        for shape in [CatalogShape::Square, CatalogShape::Rectangle] {
            let t = generate_tiling(shape, 1.0, &AxisBox::centered_cube(4.0, 2).unwrap()).unwrap();
            for e in 0..=6 {
                let lambda = 10f64.powf(e as f64 * 0.5);
                let r = proof_report(&t, lambda, &[1e4, 1e6], SolveOptions::default(), Execution::Parallel).unwrap();
                assert!(r.pass, "{shape:?} λ={lambda}");
            }
        }
    }

    #[test]
    fn tiny_lambda_is_trivial() {
        let t = square_tiling(4.0);
        let r = proof_report(&t, 1e-9, &[10.0], SolveOptions::default(), Execution::Sequential).unwrap();
        assert_eq!(r.n_self, 1);
        assert!(r.pass);
    }
}
