//! Spectra of arbitrary domains: closed forms where they exist, finite elements otherwise.

use crate::error::{Error, Result};
use crate::fem::{self, assemble, assemble_interval, convergence_study, triangulate, IntervalMesh};
use crate::geometry::Domain;
use crate::par::Execution;
use crate::spectra::{box_spectrum, product_spectrum, unit_ball_volume, BoundaryCondition, Spectrum};

/// Discretization settings used when a domain has no closed-form spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub refine: u32,
    pub tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            refine: 4,
            tol: fem::DEFAULT_TOL,
        }
    }
}

/// `true` when [`spectrum_below`] uses closed forms for this domain.
pub fn has_exact_spectrum(domain: &Domain) -> bool {
    match domain {
        Domain::IntervalUnion(_) | Domain::Box(_) => true,
        Domain::Polygon(_) => false,
        Domain::Copy(c) => has_exact_spectrum(c.base()),
        Domain::DisjointUnion(m) => m.iter().all(has_exact_spectrum),
        Domain::Product(a, b) => has_exact_spectrum(a) && has_exact_spectrum(b),
    }
}

/// Every eigenvalue strictly below `lambda_max`.
pub fn spectrum_below(domain: &Domain, bc: BoundaryCondition, lambda_max: f64, opts: SolveOptions) -> Result<Spectrum> {
    if !(lambda_max > 0.0 && lambda_max.is_finite()) {
        return Err(Error::arg(format!("lambda_max must be positive and finite, got {lambda_max}")));
    }
    match domain {
        Domain::IntervalUnion(iv) => {
            let parts = iv
                .iter()
                .map(|&(a, b)| box_spectrum(&[0.5 * (b - a)], bc, lambda_max))
                .collect::<Result<Vec<_>>>()?;
            Spectrum::merged(&parts)
        }
        Domain::Box(b) => box_spectrum(&b.half_widths(), bc, lambda_max),
        Domain::Polygon(p) => {
            let pencil = assemble(&triangulate(p, opts.refine)?)?;
            fem::fem_spectrum_below(&pencil, bc, lambda_max, opts.tol)
        }
        Domain::Copy(c) => spectrum_below(c.base(), bc, lambda_max, opts),
        Domain::DisjointUnion(members) => {
            let parts = members
                .iter()
                .map(|m| spectrum_below(m, bc, lambda_max, opts))
                .collect::<Result<Vec<_>>>()?;
            Spectrum::merged(&parts)
        }
        Domain::Product(a, b) => {
            if !(has_exact_spectrum(a) && has_exact_spectrum(b)) {
                return Err(Error::SpectrumUnavailable(
                    "products are supported only for factors with closed-form spectra".into(),
                ));
            }
            let s1 = spectrum_below(a, bc, lambda_max, opts)?;
            let s2 = spectrum_below(b, bc, lambda_max, opts)?;
            product_spectrum(&s1, &s2, lambda_max)
        }
    }
}

/// Like [`spectrum_below`], but finite-element values are replaced by Richardson
/// extrapolation over the levels `refine−2, refine−1, refine` (only the last two
/// when the coarsest mesh is too small; errors hold the extrapolation distance). Closed-form spectra are returned unchanged.
pub fn extrapolated_spectrum_below(
    domain: &Domain,
    bc: BoundaryCondition,
    lambda_max: f64,
    opts: SolveOptions,
) -> Result<Spectrum> {
    match domain.canonical() {
        Domain::Polygon(p) => {
            if opts.refine < 1 {
                return Err(Error::arg("extrapolation needs refinement level 1 or more"));
            }
            let finest = assemble(&triangulate(p, opts.refine)?)?;
            // dofs available at each candidate coarse level
            let room = |level: u32| -> Result<usize> { Ok(assemble(&triangulate(p, level)?)?.dofs(bc).len()) };
            let three = if opts.refine >= 2 { room(opts.refine - 2)? } else { 0 };
            let two = room(opts.refine - 1)?;
            let mut k = fem::inertia_count(&finest, bc, lambda_max)? + 2;
            loop {
                let levels: Vec<u32> = if k <= three {
                    vec![opts.refine - 2, opts.refine - 1, opts.refine]
                } else if k <= two {
                    vec![opts.refine - 1, opts.refine]
                } else {
                    return Err(Error::SpectrumUnavailable(format!(
                        "level {} mesh is too coarse to extrapolate {k} eigenvalues; raise the refinement",
                        opts.refine - 1
                    )));
                };
                let study = convergence_study(p, bc, k, &levels, Execution::Sequential)?;
                let s = study.extrapolated_spectrum()?;
                let top = s.values().iter().zip(s.errors()).map(|(v, e)| v - e).fold(f64::NEG_INFINITY, f64::max);
                if top >= lambda_max {
                    return Spectrum::new(s.bc, s.method, s.values().to_vec(), s.errors().to_vec(), s.domain_measure, s.dim, lambda_max);
                }
                k += k / 2 + 2;
            }
        }
        Domain::DisjointUnion(members) if !has_exact_spectrum(domain) => {
            let parts = members
                .iter()
                .map(|m| extrapolated_spectrum_below(m, bc, lambda_max, opts))
                .collect::<Result<Vec<_>>>()?;
            Spectrum::merged(&parts)
        }
        other => spectrum_below(other, bc, lambda_max, opts),
    }
}

/// FEM spectrum of a 1D interval with `elements` uniform cells; exists to
/// cross-check the closed form.
pub fn interval_fem_spectrum(length: f64, bc: BoundaryCondition, k: usize, elements: usize, tol: f64) -> Result<Spectrum> {
    let pencil = assemble_interval(&IntervalMesh::uniform(length, elements)?)?;
    Ok(fem::solve_smallest(&pencil, bc, k, tol)?.spectrum)
}

/// The `k` smallest eigenvalues.
pub fn smallest(domain: &Domain, bc: BoundaryCondition, k: usize, opts: SolveOptions) -> Result<Spectrum> {
    if k == 0 {
        return Err(Error::arg("k must be at least 1"));
    }
    if let Domain::Polygon(p) = domain.canonical() {
        let pencil = assemble(&triangulate(p, opts.refine)?)?;
        return Ok(fem::solve_smallest(&pencil, bc, k, opts.tol)?.spectrum);
    }
    // start from the Weyl estimate of the k-th eigenvalue and widen
    let d = domain.dim() as f64;
    let weyl_k = (2.0 * std::f64::consts::PI).powi(2)
        * ((k as f64 + 1.0) / (unit_ball_volume(domain.dim()) * domain.measure())).powf(2.0 / d);
    let mut lambda = 2.0 * weyl_k + 1.0;
    for _ in 0..64 {
        let s = spectrum_below(domain, bc, lambda, opts)?;
        if s.len() >= k {
            return truncate(&s, k);
        }
        lambda *= 2.0;
    }
    Err(Error::SpectrumUnavailable(format!("could not collect {k} eigenvalues")))
}

/// The first `k` entries of a spectrum.
pub fn truncate(s: &Spectrum, k: usize) -> Result<Spectrum> {
    if k >= s.len() {
        return Ok(s.clone());
    }
    Spectrum::new(
        s.bc,
        s.method,
        s.values()[..k].to_vec(),
        s.errors()[..k].to_vec(),
        s.domain_measure,
        s.dim,
        s.complete_below.min(s.values()[k]),
    )
}

/// `N(λ)` for the domain.
pub fn count_below(domain: &Domain, bc: BoundaryCondition, lambda: f64, opts: SolveOptions) -> Result<usize> {
    if lambda <= 0.0 {
        return Ok(0);
    }
    Ok(spectrum_below(domain, bc, lambda, opts)?.count_below(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Isometry;
    use crate::spectra::{count_box_neumann, Method};
    use std::f64::consts::PI;

    #[test]
    fn interval_unions_merge() {
        let d = Domain::interval_union(vec![(0.0, 1.0), (2.0, 4.0)]).unwrap();
        let s = spectrum_below(&d, BoundaryCondition::Neumann, 12.0, SolveOptions::default()).unwrap();
        // (0,1): 0, π²; (2,4): 0, π²/4, π²
        assert_eq!(s.len(), 5);
        assert_eq!(s.values()[1], 0.0);
        assert!((s.values()[4] - PI * PI).abs() < 1e-12);
    }

    #[test]
    fn copies_share_the_base_spectrum() {
        let b = Domain::axis_box(vec![(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let c = b.apply_isometry(&Isometry::rotation_about(0.3, [2.0, 5.0])).unwrap();
        let opts = SolveOptions::default();
        assert_eq!(
            spectrum_below(&b, BoundaryCondition::Neumann, 50.0, opts).unwrap(),
            spectrum_below(&c, BoundaryCondition::Neumann, 50.0, opts).unwrap()
        );
        assert_eq!(count_below(&b, BoundaryCondition::Neumann, 10.0, opts).unwrap() as u64, count_box_neumann(10.0, 1.0, 2).unwrap());
    }

    #[test]
    fn product_of_intervals_matches_box() {
        let p = Domain::product(Domain::interval(0.0, 1.0).unwrap(), Domain::interval(0.0, 2.0).unwrap());
        let b = Domain::axis_box(vec![(0.0, 1.0), (0.0, 2.0)]).unwrap();
        let opts = SolveOptions::default();
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let a = spectrum_below(&p, bc, 200.0, opts).unwrap();
            let e = spectrum_below(&b, bc, 200.0, opts).unwrap();
            assert_eq!(a.len(), e.len());
            for (x, y) in a.values().iter().zip(e.values()) {
                assert!((x - y).abs() < 1e-12 * y.max(1.0));
            }
        }
    }

    #[test]
    fn smallest_on_exact_and_fem_domains() {
        let sq = Domain::axis_box(vec![(0.0, 1.0), (0.0, 1.0)]).unwrap();
        let s = smallest(&sq, BoundaryCondition::Dirichlet, 3, SolveOptions::default()).unwrap();
        assert_eq!(s.len(), 3);
        assert!((s.values()[2] - 5.0 * PI * PI).abs() < 1e-9);
        assert!(s.complete_below <= 8.0 * PI * PI);
        let tri = Domain::polygon(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let f = smallest(&tri, BoundaryCondition::Dirichlet, 2, SolveOptions { refine: 4, ..Default::default() }).unwrap();
        assert!(matches!(f.method, Method::Fem { level: 4 }));
        // right isosceles triangle: λ₁ = 5π²
        assert!(f.values()[0] >= 5.0 * PI * PI && f.values()[0] < 1.02 * 5.0 * PI * PI);
    }

    #[test]
    fn extrapolation_improves_on_the_finest_level() {
        let sq = Domain::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let opts = SolveOptions { refine: 4, ..Default::default() };
        let raw = spectrum_below(&sq, BoundaryCondition::Dirichlet, 60.0, opts).unwrap();
        let ex = extrapolated_spectrum_below(&sq, BoundaryCondition::Dirichlet, 60.0, opts).unwrap();
        assert!(matches!(ex.method, Method::Extrapolated { finest_level: 4 }));
        assert_eq!(ex.count_below(60.0), 3);
        let exact = 2.0 * PI * PI;
        assert!((ex.values()[0] - exact).abs() < 0.1 * (raw.values()[0] - exact));
        assert!((ex.values()[0] - exact).abs() <= ex.errors()[0]);
    }

    #[test]
    fn interval_fem_agrees_with_closed_form() {
        let s = interval_fem_spectrum(1.0, BoundaryCondition::Neumann, 3, 128, 1e-9).unwrap();
        assert!(s.values()[0].abs() < 1e-8);
        assert!((s.values()[1] / (PI * PI) - 1.0).abs() < 1e-3);
    }
}
