use crate::error::{Error, Result};

use super::Isometry;

/// Distance below which a point counts as lying on the boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Simple polygon stored as a counter-clockwise vertex loop.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn on_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0]) - 1e-14
        && p[0] <= a[0].max(b[0]) + 1e-14
        && p[1] >= a[1].min(b[1]) - 1e-14
        && p[1] <= a[1].max(b[1]) + 1e-14
}

/// Closed-segment intersection test (touching counts).
pub(crate) fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let scale = [a, b, c, d]
        .iter()
        .flat_map(|p| p.iter())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let eps = 1e-12 * scale * scale;
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps))
        && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
    {
        return true;
    }
    (d1.abs() <= eps && on_segment(a, c, d))
        || (d2.abs() <= eps && on_segment(b, c, d))
        || (d3.abs() <= eps && on_segment(c, a, b))
        || (d4.abs() <= eps && on_segment(d, a, b))
}

pub(crate) fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = [a[0] + t * ab[0] - p[0], a[1] + t * ab[1] - p[1]];
    q[0].hypot(q[1])
}

impl Polygon {
    /// Builds a polygon, reordering clockwise input to counter-clockwise.
    ///
    /// Rejects fewer than three vertices, repeated vertices, zero area and
    /// self-intersections.
    pub fn new(mut vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::domain("polygon needs at least 3 vertices"));
        }
        if vertices.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::domain("polygon has non-finite coordinates"));
        }
        if vertices.len() > 3 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        let area = signed_area(&vertices);
        let scale = bbox_extent(&vertices);
        if area.abs() <= 1e-14 * scale * scale {
            return Err(Error::domain("degenerate polygon (zero area)"));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        let poly = Polygon { vertices };
        poly.check_simple()?;
        Ok(poly)
    }

    /// Skips validation; the caller guarantees a simple CCW loop.
    pub(crate) fn new_unchecked(vertices: Vec<[f64; 2]>) -> Self {
        Polygon { vertices }
    }

    fn check_simple(&self) -> Result<()> {
        let n = self.vertices.len();
        let v = &self.vertices;
        for i in 0..n {
            for j in (i + 1)..n {
                if v[i] == v[j] {
                    return Err(Error::domain(format!("repeated vertex {:?}", v[i])));
                }
            }
        }
        for i in 0..n {
            let (a, b) = (v[i], v[(i + 1) % n]);
            for j in (i + 1)..n {
                let (c, d) = (v[j], v[(j + 1) % n]);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // shared endpoint is fine; collinear backtracking is not
                    let shared = if j == i + 1 { b } else { a };
                    let (p, q) = if j == i + 1 { (a, d) } else { (c, b) };
                    let turn = cross(shared, p, q);
                    let dot = (p[0] - shared[0]) * (q[0] - shared[0])
                        + (p[1] - shared[1]) * (q[1] - shared[1]);
                    if turn.abs() < 1e-14 && dot > 0.0 {
                        return Err(Error::domain("polygon edges fold back on themselves"));
                    }
                    continue;
                }
                if segments_intersect(a, b, c, d) {
                    return Err(Error::domain(format!(
                        "self-intersecting polygon: edges {i} and {j} meet"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges()
            .map(|(a, b)| (b[0] - a[0]).hypot(b[1] - a[1]))
            .sum()
    }

    /// Largest vertex-to-vertex distance, which is the diameter of the closed polygon.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                best = best.max((v[i][0] - v[j][0]).hypot(v[i][1] - v[j][1]));
            }
        }
        best
    }

    pub fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    pub fn on_boundary(&self, p: [f64; 2]) -> bool {
        self.edges()
            .any(|(a, b)| point_segment_distance(p, a, b) <= BOUNDARY_TOL)
    }

    /// Open-set membership: winding number, with boundary points excluded.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        let (lo, hi) = self.bounds();
        if p[0] <= lo[0] || p[0] >= hi[0] || p[1] <= lo[1] || p[1] >= hi[1] {
            return false;
        }
        if self.on_boundary(p) {
            return false;
        }
        self.winding_number(p) != 0
    }

    pub fn winding_number(&self, p: [f64; 2]) -> i32 {
        let mut wn = 0;
        for (a, b) in self.edges() {
            if a[1] <= p[1] {
                if b[1] > p[1] && cross(a, b, p) > 0.0 {
                    wn += 1;
                }
            } else if b[1] <= p[1] && cross(a, b, p) < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    /// Image under a 2D isometry; orientation-reversing maps get their loop reversed.
    pub fn transformed(&self, g: &Isometry) -> Polygon {
        let mut vertices: Vec<[f64; 2]> = self.vertices.iter().map(|&p| g.apply2(p)).collect();
        if !g.preserves_orientation() {
            vertices.reverse();
            // keep the image of the first vertex in front
            vertices.rotate_right(1);
        }
        Polygon { vertices }
    }

    /// Area of the intersection with the axis box `[lo, hi]`
    /// (Sutherland–Hodgman against the convex clip window).
    pub fn clipped_area(&self, lo: [f64; 2], hi: [f64; 2]) -> f64 {
        let mut pts = self.vertices.clone();
        for axis in 0..2 {
            for (bound, keep_above) in [(lo[axis], true), (hi[axis], false)] {
                pts = clip_half_plane(&pts, axis, bound, keep_above);
                if pts.is_empty() {
                    return 0.0;
                }
            }
        }
        signed_area(&pts).max(0.0)
    }

    /// True when the closed polygon meets the closed box.
    pub fn closure_meets_box(&self, lo: [f64; 2], hi: [f64; 2]) -> bool {
        let (plo, phi) = self.bounds();
        if phi[0] < lo[0] || plo[0] > hi[0] || phi[1] < lo[1] || plo[1] > hi[1] {
            return false;
        }
        let inside = |p: [f64; 2]| p[0] >= lo[0] && p[0] <= hi[0] && p[1] >= lo[1] && p[1] <= hi[1];
        if self.vertices.iter().any(|&p| inside(p)) {
            return true;
        }
        let corners = [lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]];
        if corners.iter().any(|&c| self.winding_number(c) != 0 || self.on_boundary(c)) {
            return true;
        }
        for (a, b) in self.edges() {
            for k in 0..4 {
                if segments_intersect(a, b, corners[k], corners[(k + 1) % 4]) {
                    return true;
                }
            }
        }
        false
    }
}

fn clip_half_plane(pts: &[[f64; 2]], axis: usize, bound: f64, keep_above: bool) -> Vec<[f64; 2]> {
    let inside = |p: &[f64; 2]| {
        if keep_above {
            p[axis] >= bound
        } else {
            p[axis] <= bound
        }
    };
    let mut out = Vec::with_capacity(pts.len() + 2);
    for i in 0..pts.len() {
        let cur = pts[i];
        let prev = pts[(i + pts.len() - 1) % pts.len()];
        let (ci, pi) = (inside(&cur), inside(&prev));
        if ci != pi {
            let t = (bound - prev[axis]) / (cur[axis] - prev[axis]);
            let mut x = [
                prev[0] + t * (cur[0] - prev[0]),
                prev[1] + t * (cur[1] - prev[1]),
            ];
            x[axis] = bound;
            out.push(x);
        }
        if ci {
            out.push(cur);
        }
    }
    out
}

pub(crate) fn signed_area(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

fn bbox_extent(v: &[[f64; 2]]) -> f64 {
    let p = Polygon::new_unchecked(v.to_vec());
    let (lo, hi) = p.bounds();
    (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE)
}

/// Regular hexagon centred at the origin with a vertex on the positive x-axis.
pub fn regular_hexagon(side: f64) -> Polygon {
    let vertices = (0..6)
        .map(|k| {
            let t = std::f64::consts::PI / 3.0 * k as f64;
            [side * t.cos(), side * t.sin()]
        })
        .collect();
    Polygon::new_unchecked(vertices)
}
