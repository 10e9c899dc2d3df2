//! Triangle meshes of simple polygons and uniform meshes of intervals.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::Polygon;

/// Conforming triangulation with counter-clockwise triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    /// `true` for nodes on the polygon boundary.
    pub boundary: Vec<bool>,
    pub refinement_level: u32,
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn in_closed_triangle(p: [f64; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2], eps: f64) -> bool {
    cross(a, b, p) >= -eps && cross(b, c, p) >= -eps && cross(c, a, p) >= -eps
}

fn min_angle(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let ang = |o: [f64; 2], p: [f64; 2], q: [f64; 2]| {
        let u = [p[0] - o[0], p[1] - o[1]];
        let v = [q[0] - o[0], q[1] - o[1]];
        (u[0] * v[1] - u[1] * v[0]).abs().atan2(u[0] * v[0] + u[1] * v[1])
    };
    ang(a, b, c).min(ang(b, c, a)).min(ang(c, a, b))
}

/// Ear clipping; among the available ears the one with the largest minimum
/// angle is cut first.
pub fn ear_clip(poly: &Polygon) -> Result<Vec<[usize; 3]>> {
    let v = poly.vertices();
    let scale = {
        let (lo, hi) = poly.bounds();
        (hi[0] - lo[0]).max(hi[1] - lo[1])
    };
    let eps = 1e-12 * scale * scale;
    let mut ring: Vec<usize> = (0..v.len()).collect();
    let mut tris = Vec::with_capacity(v.len() - 2);
    while ring.len() > 3 {
        let n = ring.len();
        let mut best: Option<(usize, f64)> = None;
        for k in 0..n {
            let (ip, ic, inx) = (ring[(k + n - 1) % n], ring[k], ring[(k + 1) % n]);
            let (a, b, c) = (v[ip], v[ic], v[inx]);
            if cross(a, b, c) <= eps {
                continue;
            }
            let blocked = ring
                .iter()
                .filter(|&&q| q != ip && q != ic && q != inx)
                .any(|&q| in_closed_triangle(v[q], a, b, c, eps));
            if blocked {
                continue;
            }
            let quality = min_angle(a, b, c);
            if best.map_or(true, |(_, q)| quality > q) {
                best = Some((k, quality));
            }
        }
        let (k, _) = best.ok_or_else(|| {
            Error::domain("ear clipping found no ear (self-intersecting or degenerate polygon)")
        })?;
        tris.push([ring[(k + n - 1) % n], ring[k], ring[(k + 1) % n]]);
        ring.remove(k);
    }
    if cross(v[ring[0]], v[ring[1]], v[ring[2]]) <= eps {
        return Err(Error::domain("degenerate final ear"));
    }
    tris.push([ring[0], ring[1], ring[2]]);
    Ok(tris)
}

/// Ear-clipped base mesh followed by `refinement` rounds of midpoint subdivision.
pub fn triangulate(poly: &Polygon, refinement: u32) -> Result<Mesh> {
    // re-validate: a polygon built unchecked could still be self-intersecting
    let poly = Polygon::new(poly.vertices().to_vec())?;
    let triangles = ear_clip(&poly)?;
    let mut mesh = Mesh {
        nodes: poly.vertices().to_vec(),
        triangles,
        boundary: vec![],
        refinement_level: 0,
    };
    for _ in 0..refinement {
        mesh = mesh.refined();
    }
    mesh.mark_boundary();
    Ok(mesh)
}

impl Mesh {
    fn refined(&self) -> Mesh {
        let mut nodes = self.nodes.clone();
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, nodes: &mut Vec<[f64; 2]>| {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                let (p, q) = (nodes[a], nodes[b]);
                nodes.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                nodes.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut nodes);
            let bc = midpoint(b, c, &mut nodes);
            let ca = midpoint(c, a, &mut nodes);
            triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        Mesh {
            nodes,
            triangles,
            boundary: vec![],
            refinement_level: self.refinement_level + 1,
        }
    }

    fn edge_counts(&self) -> HashMap<(usize, usize), u32> {
        let mut counts = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        counts
    }

    fn mark_boundary(&mut self) {
        let mut boundary = vec![false; self.nodes.len()];
        for ((a, b), c) in self.edge_counts() {
            if c == 1 {
                boundary[a] = true;
                boundary[b] = true;
            }
        }
        self.boundary = boundary;
    }

    pub fn edge_count(&self) -> usize {
        self.edge_counts().len()
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        0.5 * cross(self.nodes[a], self.nodes[b], self.nodes[c])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Longest edge length.
    pub fn h(&self) -> f64 {
        self.edge_counts()
            .keys()
            .map(|&(a, b)| {
                let (p, q) = (self.nodes[a], self.nodes[b]);
                (p[0] - q[0]).hypot(p[1] - q[1])
            })
            .fold(0.0, f64::max)
    }

    /// Conformity: every edge is shared by at most two triangles, with
    /// consistent opposite orientation when shared.
    pub fn is_conforming(&self) -> bool {
        let mut directed: HashMap<(usize, usize), u32> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                *directed.entry((t[k], t[(k + 1) % 3])).or_insert(0) += 1;
            }
        }
        directed.values().all(|&c| c == 1) && self.edge_counts().values().all(|&c| c <= 2)
    }
}

/// Nodes of a uniform mesh of `(0, length)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMesh {
    pub nodes: Vec<f64>,
}

impl IntervalMesh {
    pub fn uniform(length: f64, elements: usize) -> Result<Self> {
        if !(length > 0.0) || elements == 0 {
            return Err(Error::arg("interval mesh needs positive length and elements"));
        }
        Ok(IntervalMesh {
            nodes: (0..=elements)
                .map(|i| length * i as f64 / elements as f64)
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::regular_hexagon;

    fn unit_square() -> Polygon {
        Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
    }

    fn l_shape() -> Polygon {
        Polygon::new(vec![
            [-1.0, -1.0],
            [0.0, -1.0],
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [-1.0, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn square_counts() {
        let m = triangulate(&unit_square(), 0).unwrap();
        assert_eq!((m.triangles.len(), m.nodes.len()), (2, 4));
        let m = triangulate(&unit_square(), 1).unwrap();
        assert_eq!((m.triangles.len(), m.nodes.len()), (8, 9));
        assert_eq!(m.boundary.iter().filter(|&&b| b).count(), 8);
    }

    #[test]
    fn euler_relation_and_area() {
        for poly in [unit_square(), l_shape(), regular_hexagon(1.0)] {
            for level in 0..4 {
                let m = triangulate(&poly, level).unwrap();
                let (v, e, f) = (m.nodes.len() as i64, m.edge_count() as i64, m.triangles.len() as i64);
                assert_eq!(v - e + f, 1);
                assert!((m.area() - poly.area()).abs() < 1e-12);
                assert!((0..m.triangles.len()).all(|t| m.triangle_area(t) > 0.0));
                assert!(m.is_conforming());
            }
        }
    }

    #[test]
    fn boundary_nodes_lie_on_the_boundary() {
        let poly = l_shape();
        let m = triangulate(&poly, 3).unwrap();
        for (p, &b) in m.nodes.iter().zip(&m.boundary) {
            assert_eq!(poly.on_boundary(*p), b, "{p:?}");
        }
    }

    #[test]
    fn refinement_halves_h() {
        let a = triangulate(&unit_square(), 2).unwrap();
        let b = triangulate(&unit_square(), 3).unwrap();
        assert!((a.h() / b.h() - 2.0).abs() < 1e-12);
    }
}
