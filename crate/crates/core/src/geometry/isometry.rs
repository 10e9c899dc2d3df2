use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ORTHO_TOL: f64 = 1e-12;

/// Rigid motion `x ↦ A x + t` with `A` orthogonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IsometryRepr", into = "IsometryRepr")]
pub struct Isometry {
    dim: usize,
    // row-major d×d
    linear: Vec<f64>,
    translation: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct IsometryRepr {
    linear: Vec<Vec<f64>>,
    translation: Vec<f64>,
}

impl TryFrom<IsometryRepr> for Isometry {
    type Error = Error;
    fn try_from(r: IsometryRepr) -> Result<Self> {
        Isometry::new(r.linear, r.translation)
    }
}

impl From<Isometry> for IsometryRepr {
    fn from(g: Isometry) -> Self {
        IsometryRepr {
            linear: (0..g.dim).map(|i| g.row(i).to_vec()).collect(),
            translation: g.translation,
        }
    }
}

impl Isometry {
    pub fn new(linear: Vec<Vec<f64>>, translation: Vec<f64>) -> Result<Self> {
        let d = translation.len();
        if d == 0 {
            return Err(Error::InvalidIsometry("zero dimension".into()));
        }
        if linear.len() != d || linear.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidIsometry(format!(
                "linear part must be {d}x{d}"
            )));
        }
        let flat: Vec<f64> = linear.into_iter().flatten().collect();
        if flat.iter().chain(translation.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidIsometry("non-finite entry".into()));
        }
        let g = Isometry {
            dim: d,
            linear: flat,
            translation,
        };
        g.check_orthogonal()?;
        Ok(g)
    }

    fn check_orthogonal(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d).map(|k| self.at(k, i) * self.at(k, j)).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                if (dot - expect).abs() > ORTHO_TOL {
                    return Err(Error::InvalidIsometry(format!(
                        "linear part is not orthogonal (AᵀA[{i}][{j}] = {dot})"
                    )));
                }
            }
        }
        let det = self.det();
        if (det.abs() - 1.0).abs() > ORTHO_TOL {
            return Err(Error::InvalidIsometry(format!("|det| = {} != 1", det.abs())));
        }
        Ok(())
    }

    pub fn identity(dim: usize) -> Self {
        let mut linear = vec![0.0; dim * dim];
        for i in 0..dim {
            linear[i * dim + i] = 1.0;
        }
        Isometry {
            dim,
            linear,
            translation: vec![0.0; dim],
        }
    }

    pub fn translation(v: &[f64]) -> Self {
        let mut g = Isometry::identity(v.len());
        g.translation = v.to_vec();
        g
    }

    /// Counter-clockwise rotation by `angle` about the origin (2D).
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        // snap the quarter turns so that catalog copies stay exact
        let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
        Isometry {
            dim: 2,
            linear: vec![snap(c), snap(-s), snap(s), snap(c)],
            translation: vec![0.0, 0.0],
        }
    }

    /// Rotation by `angle` about `center` (2D).
    pub fn rotation_about(angle: f64, center: [f64; 2]) -> Self {
        let r = Isometry::rotation(angle);
        let rc = r.apply(&center);
        let mut g = r;
        g.translation = vec![center[0] - rc[0], center[1] - rc[1]];
        g
    }

    /// `x ↦ 2c − x` (2D half turn about `c`).
    pub fn point_reflection(center: [f64; 2]) -> Self {
        Isometry {
            dim: 2,
            linear: vec![-1.0, 0.0, 0.0, -1.0],
            translation: vec![2.0 * center[0], 2.0 * center[1]],
        }
    }

    /// Mirror across the vertical line `x = x0` (2D, det −1).
    pub fn reflect_x(x0: f64) -> Self {
        Isometry {
            dim: 2,
            linear: vec![-1.0, 0.0, 0.0, 1.0],
            translation: vec![2.0 * x0, 0.0],
        }
    }

    /// Mirror across a line through the origin at `angle` to the x-axis (2D).
    pub fn reflection(angle: f64) -> Self {
        let (s, c) = (2.0 * angle).sin_cos();
        Isometry {
            dim: 2,
            linear: vec![c, s, s, -c],
            translation: vec![0.0, 0.0],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.linear[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.linear[i * self.dim..(i + 1) * self.dim]
    }

    pub fn translation_part(&self) -> &[f64] {
        &self.translation
    }

    pub fn det(&self) -> f64 {
        let m = nalgebra::DMatrix::from_row_slice(self.dim, self.dim, &self.linear);
        m.determinant()
    }

    pub fn preserves_orientation(&self) -> bool {
        self.det() > 0.0
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.row(i).iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.translation[i]
            })
            .collect()
    }

    pub fn apply2(&self, p: [f64; 2]) -> [f64; 2] {
        let v = self.apply(&p);
        [v[0], v[1]]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        assert_eq!(self.dim, other.dim, "dimension mismatch in composition");
        let d = self.dim;
        let mut linear = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                linear[i * d + j] = (0..d).map(|k| self.at(i, k) * other.at(k, j)).sum();
            }
        }
        let mut translation = self.apply(&other.translation);
        // apply() already added self.translation
        for t in translation.iter_mut() {
            if t.abs() < 1e-15 {
                *t = 0.0;
            }
        }
        Isometry {
            dim: d,
            linear,
            translation,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let d = self.dim;
        let mut linear = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                linear[i * d + j] = self.at(j, i);
            }
        }
        let translation = (0..d)
            .map(|i| -(0..d).map(|k| linear[i * d + k] * self.translation[k]).sum::<f64>())
            .collect();
        Isometry {
            dim: d,
            linear,
            translation,
        }
    }

    /// True when the linear part maps coordinate axes onto coordinate axes.
    pub fn is_signed_permutation(&self) -> bool {
        (0..self.dim).all(|i| {
            let nz = self
                .row(i)
                .iter()
                .filter(|v| v.abs() > ORTHO_TOL)
                .count();
            nz == 1
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == Isometry::identity(self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_non_orthogonal() {
        let err = Isometry::new(vec![vec![2.0, 0.0], vec![0.0, 1.0]], vec![0.0, 0.0]);
        assert!(matches!(err, Err(Error::InvalidIsometry(_))));
        let shear = Isometry::new(vec![vec![1.0, 1.0], vec![0.0, 1.0]], vec![0.0, 0.0]);
        assert!(shear.is_err());
    }

    #[test]
    fn reflection_is_an_isometry() {
        let g = Isometry::new(vec![vec![1.0, 0.0], vec![0.0, -1.0]], vec![3.0, 0.0]).unwrap();
        assert!((g.det() + 1.0).abs() < 1e-15);
        assert!(!g.preserves_orientation());
    }

    #[test]
    fn composition_and_inverse() {
        let a = Isometry::rotation_about(0.7, [1.0, -2.0]);
        let b = Isometry::reflection(0.3).compose(&Isometry::translation(&[0.5, 4.0]));
        let x = [0.25, -1.5];
        let ab = a.compose(&b).apply(&x);
        let direct = a.apply(&b.apply(&x));
        for (u, v) in ab.iter().zip(&direct) {
            assert!((u - v).abs() < 1e-12);
        }
        let back = a.inverse().apply(&a.apply(&x));
        assert!((back[0] - x[0]).abs() < 1e-12 && (back[1] - x[1]).abs() < 1e-12);
    }

    #[test]
    fn quarter_turn_is_exact() {
        let g = Isometry::rotation(PI / 2.0);
        assert_eq!(g.apply2([1.0, 0.0]), [0.0, 1.0]);
        assert!(g.is_signed_permutation());
    }

    #[test]
    fn json_round_trip_validates() {
        let g = Isometry::rotation_about(0.4, [1.0, 1.0]);
        let s = serde_json::to_string(&g).unwrap();
        let h: Isometry = serde_json::from_str(&s).unwrap();
        assert_eq!(g, h);
        let bad = r#"{"linear":[[1,1],[0,1]],"translation":[0,0]}"#;
        assert!(serde_json::from_str::<Isometry>(bad).is_err());
    }
}
