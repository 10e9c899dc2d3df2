//! Shift-invert block subspace iteration for `K u = μ M u`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::assemble::AssembledPencil;
use super::skyline::SkylineLdl;
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::spectra::{BoundaryCondition, Method, Spectrum};

pub const DEFAULT_TOL: f64 = 1e-8;
const START_SEED: u64 = 0x5eed_f00d;

/// Eigenpairs of a pencil restricted to its free equations.
#[derive(Debug, Clone)]
pub struct FemSolution {
    pub spectrum: Spectrum,
    /// M-orthonormal eigenvectors over the full node set (eliminated nodes are 0).
    pub vectors: Vec<Vec<f64>>,
    /// `‖K u − μ M u‖₂` for each pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

struct Reduced {
    dofs: Vec<usize>,
    k: CsrMatrix,
    m: CsrMatrix,
    shift: f64,
}

fn reduce(p: &AssembledPencil, bc: BoundaryCondition) -> Result<Reduced> {
    let dofs = p.dofs(bc);
    if dofs.is_empty() {
        return Err(Error::domain("mesh has no interior nodes; refine it"));
    }
    let (k, m) = if dofs.len() == p.n() {
        (p.stiffness.clone(), p.mass.clone())
    } else {
        (p.stiffness.principal_submatrix(&dofs), p.mass.principal_submatrix(&dofs))
    };
    let shift = match bc {
        BoundaryCondition::Neumann => -1.0 / (p.length_scale * p.length_scale),
        BoundaryCondition::Dirichlet => 0.0,
    };
    Ok(Reduced { dofs, k, m, shift })
}

/// Number of discrete eigenvalues strictly below `lambda`, from the inertia
/// of `K − λM`.
pub fn inertia_count(p: &AssembledPencil, bc: BoundaryCondition, lambda: f64) -> Result<usize> {
    let r = reduce(p, bc)?;
    inertia(&r, lambda)
}

fn inertia(r: &Reduced, lambda: f64) -> Result<usize> {
    if !lambda.is_finite() {
        return Err(Error::arg("inertia shift must be finite"));
    }
    if lambda <= 0.0 && r.shift == 0.0 {
        return Ok(0);
    }
    let a = r.k.add_scaled(-lambda, &r.m);
    Ok(SkylineLdl::factor(&a)?.negative_pivots())
}

fn matvec_cols(a: &CsrMatrix, x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut y = DMatrix::zeros(x.nrows(), x.ncols());
    for j in 0..x.ncols() {
        let col: Vec<f64> = x.column(j).iter().copied().collect();
        let out = a.mul_vec(&col);
        y.column_mut(j).copy_from_slice(&out);
    }
    y
}

/// M-orthonormalizes the columns of `y` in place (two passes of modified
/// Gram–Schmidt) and returns `M y`. Collapsed columns are refilled from `rng`.
fn m_orthonormalize(y: &mut DMatrix<f64>, m: &CsrMatrix, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let (n, p) = (y.nrows(), y.ncols());
    let mut my = DMatrix::zeros(n, p);
    for j in 0..p {
        let mut attempts = 0;
        loop {
            let col: Vec<f64> = y.column(j).iter().copied().collect();
            let mut mcol = DVector::from_vec(m.mul_vec(&col));
            let norm0 = y.column(j).dot(&mcol).max(0.0).sqrt();
            for _pass in 0..2 {
                for i in 0..j {
                    let c = my.column(i).dot(&y.column(j));
                    let qi = y.column(i).clone_owned();
                    let mqi = my.column(i).clone_owned();
                    y.column_mut(j).axpy(-c, &qi, 1.0);
                    mcol.axpy(-c, &mqi, 1.0);
                }
            }
            let norm = y.column(j).dot(&mcol).max(0.0).sqrt();
            if norm > 1e-10 * norm0 && norm > 0.0 {
                y.column_mut(j).scale_mut(1.0 / norm);
                my.column_mut(j).copy_from(&(mcol / norm));
                break;
            }
            attempts += 1;
            assert!(attempts < 8, "cannot extend an M-orthonormal basis");
            for v in y.column_mut(j).iter_mut() {
                *v = rng.gen_range(-1.0..1.0);
            }
        }
    }
    my
}

/// The `m` smallest eigenpairs. Converged when every pair satisfies
/// `‖K u − μ M u‖₂ ≤ tol` with `‖u‖_M = 1`; the iteration cap is `10·dof`.
pub fn solve_smallest(p: &AssembledPencil, bc: BoundaryCondition, m: usize, tol: f64) -> Result<FemSolution> {
    if m == 0 {
        return Err(Error::arg("need at least one eigenpair"));
    }
    if !(tol > 0.0) {
        return Err(Error::arg("tolerance must be positive"));
    }
    let r = reduce(p, bc)?;
    let n = r.dofs.len();
    if m > n {
        return Err(Error::arg(format!("{m} eigenpairs requested but only {n} degrees of freedom")));
    }
    let block = n.min((2 * m).max(m + 8));
    let shifted = r.k.add_scaled(-r.shift, &r.m);
    let ldl = SkylineLdl::factor(&shifted)?;
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut x = DMatrix::from_fn(n, block, |_, _| rng.gen_range(-1.0..1.0));
    let cap = 10 * n.max(1);
    let mut worst = f64::INFINITY;
    for it in 1..=cap {
        // Y = (K − σM)⁻¹ M X
        let mx = matvec_cols(&r.m, &x);
        let mut y = DMatrix::zeros(n, block);
        for j in 0..block {
            let rhs: Vec<f64> = mx.column(j).iter().copied().collect();
            y.column_mut(j).copy_from_slice(&ldl.solve(&rhs));
        }
        let mq = m_orthonormalize(&mut y, &r.m, &mut rng);
        let kq = matvec_cols(&r.k, &y);
        let mut h = y.transpose() * &kq;
        h = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let theta: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let v = DMatrix::from_fn(block, block, |i, j| eig.eigenvectors[(i, order[j])]);
        x = &y * &v;
        let kx = &kq * &v;
        let mxr = &mq * &v;
        let residuals: Vec<f64> = (0..m)
            .map(|j| (kx.column(j) - mxr.column(j) * theta[j]).norm())
            .collect();
        worst = residuals.iter().copied().fold(0.0, f64::max);
        if worst <= tol || block == n {
            return finish(p, bc, &r, &x, &theta, residuals, it, m, block);
        }
    }
    Err(Error::NonConvergence {
        iterations: cap,
        residual: worst,
        tol,
    })
}

#[allow(clippy::too_many_arguments)]
fn finish(
    p: &AssembledPencil,
    bc: BoundaryCondition,
    r: &Reduced,
    x: &DMatrix<f64>,
    theta: &[f64],
    residuals: Vec<f64>,
    iterations: usize,
    m: usize,
    block: usize,
) -> Result<FemSolution> {
    let n = r.dofs.len();
    let errors: Vec<f64> = residuals
        .iter()
        .map(|res| res / p.mass_lower_bound.sqrt())
        .collect();
    let values: Vec<f64> = theta[..m].iter().map(|&t| t.max(0.0)).collect();
    // every discrete eigenvalue below the cut must be among the computed ones
    let complete_below = if block == n {
        f64::INFINITY
    } else {
        let top = theta[m - 1];
        let margin = (2.0 * errors[m - 1]).max(1e-9 * top.max(1.0));
        let mut certified = None;
        for cut in [top + margin, top - margin] {
            if cut <= 0.0 {
                continue;
            }
            let found = values.iter().filter(|&&v| v < cut).count();
            if inertia(r, cut)? == found {
                certified = Some(cut);
                break;
            }
        }
        certified.ok_or_else(|| {
            Error::Numerical(format!("subspace iteration missed an eigenvalue below {top}"))
        })?
    };
    let mut vectors = Vec::with_capacity(m);
    for j in 0..m {
        let mut full = vec![0.0; p.n()];
        for (k, &d) in r.dofs.iter().enumerate() {
            full[d] = x[(k, j)];
        }
        vectors.push(full);
    }
    let spectrum = Spectrum::new(
        bc,
        Method::Fem { level: p.refinement_level },
        values,
        errors,
        p.measure,
        p.dim,
        complete_below,
    )?;
    Ok(FemSolution {
        spectrum,
        vectors,
        residuals,
        iterations,
    })
}

/// Every discrete eigenvalue strictly below `lambda`.
pub fn fem_spectrum_below(p: &AssembledPencil, bc: BoundaryCondition, lambda: f64, tol: f64) -> Result<Spectrum> {
    let count = inertia_count(p, bc, lambda)?;
    if count == 0 {
        return Spectrum::new(
            bc,
            Method::Fem { level: p.refinement_level },
            vec![],
            vec![],
            p.measure,
            p.dim,
            lambda,
        );
    }
    let sol = solve_smallest(p, bc, count, tol)?;
    let s = sol.spectrum;
    let complete = s.complete_below.max(lambda);
    Spectrum::new(s.bc, s.method, s.values().to_vec(), s.errors().to_vec(), s.domain_measure, s.dim, complete)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::assemble::{assemble, assemble_interval};
    use crate::fem::mesh::{triangulate, IntervalMesh};
    use crate::geometry::Polygon;
    use crate::spectra::box_spectrum;
    use std::f64::consts::PI;

    fn square(side: f64) -> Polygon {
        Polygon::new(vec![[0.0, 0.0], [side, 0.0], [side, side], [0.0, side]]).unwrap()
    }

    #[test]
    fn unit_square_dirichlet_level5() {
        let p = assemble(&triangulate(&square(1.0), 5).unwrap()).unwrap();
        let sol = solve_smallest(&p, BoundaryCondition::Dirichlet, 1, DEFAULT_TOL).unwrap();
        let l1 = sol.spectrum.values()[0];
        assert!(l1 >= 2.0 * PI * PI && l1 <= 1.01 * 2.0 * PI * PI, "{l1}");
        assert!(sol.residuals[0] <= DEFAULT_TOL);
    }

    #[test]
    fn unit_square_neumann_level5() {
        let p = assemble(&triangulate(&square(1.0), 5).unwrap()).unwrap();
        let sol = solve_smallest(&p, BoundaryCondition::Neumann, 3, DEFAULT_TOL).unwrap();
        let v = sol.spectrum.values();
        assert!(v[0].abs() < 1e-8);
        assert!(v[1] >= PI * PI && v[1] <= 1.01 * PI * PI, "{}", v[1]);
        assert!(v[2] >= PI * PI && v[2] <= 1.01 * PI * PI, "{}", v[2]);
    }

    #[test]
    fn interval_dirichlet_64() {
        let p = assemble_interval(&IntervalMesh::uniform(1.0, 64).unwrap()).unwrap();
        let sol = solve_smallest(&p, BoundaryCondition::Dirichlet, 1, DEFAULT_TOL).unwrap();
        let l1 = sol.spectrum.values()[0];
        assert!((l1 / (PI * PI) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn interval_matches_closed_form_discrete_values() {
        // P1 on a uniform grid: λ_k = 6/h² · (1 − cos kπh)/(2 + cos kπh)
        let n = 20;
        let h = 1.0 / n as f64;
        let p = assemble_interval(&IntervalMesh::uniform(1.0, n).unwrap()).unwrap();
        let sol = solve_smallest(&p, BoundaryCondition::Dirichlet, 5, 1e-10).unwrap();
        for (k, v) in sol.spectrum.values().iter().enumerate() {
            let c = ((k + 1) as f64 * PI * h).cos();
            let expect = 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
            assert!((v - expect).abs() < 1e-8 * expect, "{v} {expect}");
        }
    }

    #[test]
    fn vectors_are_m_orthonormal() {
        let p = assemble(&triangulate(&square(1.0), 3).unwrap()).unwrap();
        let sol = solve_smallest(&p, BoundaryCondition::Neumann, 6, DEFAULT_TOL).unwrap();
        for i in 0..6 {
            let mi = p.mass.mul_vec(&sol.vectors[i]);
            for j in 0..6 {
                let d: f64 = mi.iter().zip(&sol.vectors[j]).map(|(a, b)| a * b).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((d - expect).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn upper_bounds_and_monotone_refinement() {
        let exact = box_spectrum(&[0.5, 0.5], BoundaryCondition::Dirichlet, 400.0).unwrap();
        let exact_n = box_spectrum(&[0.5, 0.5], BoundaryCondition::Neumann, 400.0).unwrap();
        for (bc, ex) in [(BoundaryCondition::Dirichlet, &exact), (BoundaryCondition::Neumann, &exact_n)] {
            let mut prev: Option<Vec<f64>> = None;
            for level in 1..=4 {
                let p = assemble(&triangulate(&square(1.0), level).unwrap()).unwrap();
                let k = 10.min(p.dofs(bc).len());
                let sol = solve_smallest(&p, bc, k, DEFAULT_TOL).unwrap();
                let v = sol.spectrum.values();
                for (a, b) in v.iter().zip(ex.values()) {
                    assert!(*a >= b - 1e-9, "{bc} level {level}: {a} < {b}");
                }
                if let Some(prev) = &prev {
                    for (a, b) in v.iter().zip(prev) {
                        assert!(*a <= b + 1e-9, "{bc} level {level}: {a} > {b}");
                    }
                }
                prev = Some(v.to_vec());
            }
        }
    }

    #[test]
    fn inertia_matches_computed_count() {
        let poly = Polygon::new(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]).unwrap();
        let p = assemble(&triangulate(&poly, 3).unwrap()).unwrap();
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let s = fem_spectrum_below(&p, bc, 60.0, DEFAULT_TOL).unwrap();
            assert_eq!(s.len(), inertia_count(&p, bc, 60.0).unwrap());
            assert!(s.values().iter().all(|&v| v < 60.0));
            assert_eq!(s.complete_below, 60.0);
        }
    }

    #[test]
    fn too_many_pairs_is_an_error() {
        let p = assemble(&triangulate(&square(1.0), 1).unwrap()).unwrap();
        assert!(solve_smallest(&p, BoundaryCondition::Dirichlet, 2, DEFAULT_TOL).is_err());
        assert!(solve_smallest(&p, BoundaryCondition::Dirichlet, 1, DEFAULT_TOL).is_ok());
    }
}
