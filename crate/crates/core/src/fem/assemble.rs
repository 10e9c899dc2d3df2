//! P1 stiffness and mass matrices.

use super::mesh::{IntervalMesh, Mesh};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Stiffness/mass pair for the generalized problem `K u = μ M u`.
#[derive(Debug, Clone)]
pub struct AssembledPencil {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    /// `true` for nodes eliminated under Dirichlet conditions.
    pub boundary: Vec<bool>,
    /// Rigorous lower bound on the smallest eigenvalue of `M`
    /// (`min area / 12` in 2D, `min h / 6` in 1D).
    pub mass_lower_bound: f64,
    pub dim: usize,
    pub measure: f64,
    /// Diameter of the mesh bounding box, used to pick the solver shift.
    pub length_scale: f64,
    pub h: f64,
    pub refinement_level: u32,
}

impl AssembledPencil {
    pub fn n(&self) -> usize {
        self.stiffness.n()
    }

    /// Equation indices kept for the given boundary condition.
    pub fn dofs(&self, bc: crate::spectra::BoundaryCondition) -> Vec<usize> {
        match bc {
            crate::spectra::BoundaryCondition::Neumann => (0..self.n()).collect(),
            crate::spectra::BoundaryCondition::Dirichlet => {
                (0..self.n()).filter(|&i| !self.boundary[i]).collect()
            }
        }
    }
}

/// Element matrices of a P1 triangle: stiffness `area·∇φ_i·∇φ_j` and the
/// exact mass `area/12·(1 + δ_ij)`.
pub fn element_matrices(p: [[f64; 2]; 3]) -> Result<([[f64; 3]; 3], [[f64; 3]; 3], f64)> {
    let area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]));
    let scale = p
        .iter()
        .flat_map(|q| q.iter())
        .fold(1e-300f64, |m, v| m.max(v.abs()));
    if !(area > 1e-14 * scale * scale) {
        return Err(Error::domain(format!("degenerate or clockwise triangle {p:?}")));
    }
    // ∇φ_i = perp(p_{i+2} − p_{i+1}) / (2A), rotated so it points inward toward p_i
    let grad: Vec<[f64; 2]> = (0..3)
        .map(|i| {
            let a = p[(i + 1) % 3];
            let b = p[(i + 2) % 3];
            [(a[1] - b[1]) / (2.0 * area), (b[0] - a[0]) / (2.0 * area)]
        })
        .collect();
    let mut k = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
            m[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
        }
    }
    Ok((k, m, area))
}

pub fn assemble(mesh: &Mesh) -> Result<AssembledPencil> {
    let n = mesh.nodes.len();
    let mut kt = Vec::with_capacity(9 * mesh.triangles.len());
    let mut mt = Vec::with_capacity(9 * mesh.triangles.len());
    let mut min_area = f64::INFINITY;
    let mut measure = 0.0;
    for tri in &mesh.triangles {
        let p = [mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]];
        let (ke, me, area) = element_matrices(p)?;
        min_area = min_area.min(area);
        measure += area;
        for i in 0..3 {
            for j in 0..3 {
                kt.push((tri[i], tri[j], ke[i][j]));
                mt.push((tri[i], tri[j], me[i][j]));
            }
        }
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &mesh.nodes {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    Ok(AssembledPencil {
        stiffness: CsrMatrix::from_triplets(n, kt)?,
        mass: CsrMatrix::from_triplets(n, mt)?,
        boundary: mesh.boundary.clone(),
        mass_lower_bound: min_area / 12.0,
        dim: 2,
        measure,
        length_scale: (hi[0] - lo[0]).hypot(hi[1] - lo[1]),
        h: mesh.h(),
        refinement_level: mesh.refinement_level,
    })
}

/// 1D P1 pencil: `K_e = [[1, −1], [−1, 1]]/h`, `M_e = h/6·[[2, 1], [1, 2]]`.
pub fn assemble_interval(mesh: &IntervalMesh) -> Result<AssembledPencil> {
    let n = mesh.nodes.len();
    let mut kt = Vec::new();
    let mut mt = Vec::new();
    let mut min_h = f64::INFINITY;
    let mut max_h: f64 = 0.0;
    for e in 0..n - 1 {
        let h = mesh.nodes[e + 1] - mesh.nodes[e];
        if !(h > 0.0) {
            return Err(Error::domain("interval mesh nodes must increase"));
        }
        min_h = min_h.min(h);
        max_h = max_h.max(h);
        for (i, j, ks, ms) in [(0, 0, 1.0, 2.0), (0, 1, -1.0, 1.0), (1, 0, -1.0, 1.0), (1, 1, 1.0, 2.0)] {
            kt.push((e + i, e + j, ks / h));
            mt.push((e + i, e + j, ms * h / 6.0));
        }
    }
    let mut boundary = vec![false; n];
    boundary[0] = true;
    boundary[n - 1] = true;
    let length = mesh.nodes[n - 1] - mesh.nodes[0];
    Ok(AssembledPencil {
        stiffness: CsrMatrix::from_triplets(n, kt)?,
        mass: CsrMatrix::from_triplets(n, mt)?,
        boundary,
        mass_lower_bound: min_h / 6.0,
        dim: 1,
        measure: length,
        length_scale: length,
        h: max_h,
        refinement_level: 0,
    })
}
