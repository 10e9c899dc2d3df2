//! Bounded open regions, rigid motions and sampled coverage measurement.

mod coverage;
mod isometry;
mod polygon;
mod schema;

pub use coverage::{coverage_report, coverage_report_with, CoverageReport, SampleGrid};
pub use isometry::Isometry;
pub use polygon::{regular_hexagon, Polygon, BOUNDARY_TOL};
pub use schema::DomainSpec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned open box `∏ (a_j, b_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct AxisBox {
    bounds: Vec<(f64, f64)>,
}

impl TryFrom<Vec<[f64; 2]>> for AxisBox {
    type Error = Error;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        AxisBox::new(v.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<AxisBox> for Vec<[f64; 2]> {
    fn from(b: AxisBox) -> Self {
        b.bounds.into_iter().map(|(a, b)| [a, b]).collect()
    }
}

impl AxisBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::domain("box needs at least one axis"));
        }
        for &(a, b) in &bounds {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::domain("box bounds must be finite"));
            }
            if b <= a {
                return Err(Error::domain(format!("empty box axis ({a}, {b})")));
            }
        }
        Ok(AxisBox { bounds })
    }

    /// `(−half, half)^d`.
    pub fn centered_cube(half: f64, dim: usize) -> Result<Self> {
        AxisBox::new(vec![(-half, half); dim])
    }

    pub fn cube(lo: f64, hi: f64, dim: usize) -> Result<Self> {
        AxisBox::new(vec![(lo, hi); dim])
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn widths(&self) -> Vec<f64> {
        self.bounds.iter().map(|(a, b)| b - a).collect()
    }

    pub fn half_widths(&self) -> Vec<f64> {
        self.bounds.iter().map(|(a, b)| 0.5 * (b - a)).collect()
    }

    pub fn measure(&self) -> f64 {
        self.widths().iter().product()
    }

    pub fn diameter(&self) -> f64 {
        self.widths().iter().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn surface_measure(&self) -> f64 {
        let w = self.widths();
        if w.len() == 1 {
            return 2.0;
        }
        (0..w.len())
            .map(|skip| {
                2.0 * w
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, v)| v)
                    .product::<f64>()
            })
            .sum()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.bounds.iter().zip(x).all(|(&(a, b), &v)| v > a && v < b)
    }

    pub fn contains_closed(&self, x: &[f64]) -> bool {
        self.bounds.iter().zip(x).all(|(&(a, b), &v)| v >= a && v <= b)
    }

    /// Closed-box containment of another closed box.
    pub fn encloses(&self, other: &AxisBox) -> bool {
        self.bounds
            .iter()
            .zip(&other.bounds)
            .all(|(&(a, b), &(c, d))| c >= a && d <= b)
    }

    pub fn closures_meet(&self, other: &AxisBox) -> bool {
        self.bounds
            .iter()
            .zip(&other.bounds)
            .all(|(&(a, b), &(c, d))| c <= b && a <= d)
    }

    pub fn interiors_meet(&self, other: &AxisBox) -> bool {
        self.bounds
            .iter()
            .zip(&other.bounds)
            .all(|(&(a, b), &(c, d))| c < b && a < d)
    }

    pub fn corners(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..1usize << d)
            .map(|mask| {
                (0..d)
                    .map(|j| {
                        if mask >> j & 1 == 0 {
                            self.bounds[j].0
                        } else {
                            self.bounds[j].1
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn scaled(&self, s: f64) -> AxisBox {
        AxisBox {
            bounds: self.bounds.iter().map(|&(a, b)| (s * a, s * b)).collect(),
        }
    }

    pub(crate) fn from_points<'a>(pts: impl IntoIterator<Item = &'a [f64]>) -> Option<AxisBox> {
        let mut it = pts.into_iter();
        let first = it.next()?;
        let mut bounds: Vec<(f64, f64)> = first.iter().map(|&v| (v, v)).collect();
        for p in it {
            for (b, &v) in bounds.iter_mut().zip(p) {
                b.0 = b.0.min(v);
                b.1 = b.1.max(v);
            }
        }
        Some(AxisBox { bounds })
    }

    fn as_polygon(&self) -> Polygon {
        let (a, b) = (self.bounds[0], self.bounds[1]);
        Polygon::new_unchecked(vec![[a.0, b.0], [a.1, b.0], [a.1, b.1], [a.0, b.1]])
    }
}

/// An isometric image of a base domain, with the transformed form cached when
/// it has an explicit representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Copy {
    isometry: Isometry,
    base: Box<Domain>,
    realized: Option<Box<Domain>>,
}

impl Copy {
    pub fn isometry(&self) -> &Isometry {
        &self.isometry
    }

    pub fn base(&self) -> &Domain {
        &self.base
    }

    /// Explicit image, when one exists (2D polytopes, axis-preserving box maps, 1D sets).
    pub fn realized(&self) -> Option<&Domain> {
        self.realized.as_deref()
    }
}

/// Bounded open region in `R^d`.
///
/// Values are immutable once built; constructors validate the invariants
/// (positive measure, simple polygons, matching dimensions).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainSpec", into = "DomainSpec")]
pub enum Domain {
    /// Disjoint open intervals on the line, sorted.
    IntervalUnion(Vec<(f64, f64)>),
    Box(AxisBox),
    Polygon(Polygon),
    Copy(Copy),
    DisjointUnion(Vec<Domain>),
    Product(Box<Domain>, Box<Domain>),
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Result<Domain> {
        Domain::interval_union(vec![(a, b)])
    }

    pub fn interval_union(mut intervals: Vec<(f64, f64)>) -> Result<Domain> {
        if intervals.is_empty() {
            return Err(Error::domain("interval union is empty"));
        }
        for &(a, b) in &intervals {
            if !(a.is_finite() && b.is_finite()) || b <= a {
                return Err(Error::domain(format!("bad interval ({a}, {b})")));
            }
        }
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        if intervals.windows(2).any(|w| w[1].0 < w[0].1) {
            return Err(Error::domain("intervals overlap"));
        }
        Ok(Domain::IntervalUnion(intervals))
    }

    pub fn axis_box(bounds: Vec<(f64, f64)>) -> Result<Domain> {
        Ok(Domain::Box(AxisBox::new(bounds)?))
    }

    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Domain> {
        Ok(Domain::Polygon(Polygon::new(vertices)?))
    }

    pub fn product(a: Domain, b: Domain) -> Domain {
        Domain::Product(Box::new(a), Box::new(b))
    }

    /// Union of members with pairwise disjoint interiors.
    ///
    /// Disjointness is checked exactly for boxes and intervals and by grid
    /// sampling (resolution 128, overlap ≤ 2d/128) otherwise.
    pub fn disjoint_union(members: Vec<Domain>) -> Result<Domain> {
        if members.is_empty() {
            return Err(Error::domain("union has no members"));
        }
        let d = members[0].dim();
        if members.iter().any(|m| m.dim() != d) {
            return Err(Error::domain("union members differ in dimension"));
        }
        if !interiors_disjoint(&members) {
            return Err(Error::domain("union members overlap"));
        }
        Ok(Domain::DisjointUnion(members))
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::IntervalUnion(_) => 1,
            Domain::Box(b) => b.dim(),
            Domain::Polygon(_) => 2,
            Domain::Copy(c) => c.base.dim(),
            Domain::DisjointUnion(m) => m[0].dim(),
            Domain::Product(a, b) => a.dim() + b.dim(),
        }
    }

    /// Lebesgue measure `|Ω|`.
    pub fn measure(&self) -> f64 {
        match self {
            Domain::IntervalUnion(iv) => iv.iter().map(|(a, b)| b - a).sum(),
            Domain::Box(b) => b.measure(),
            Domain::Polygon(p) => p.area(),
            Domain::Copy(c) => c.base.measure(),
            Domain::DisjointUnion(m) => m.iter().map(Domain::measure).sum(),
            Domain::Product(a, b) => a.measure() * b.measure(),
        }
    }

    /// Perimeter in 2D, surface measure for boxes, endpoint count in 1D.
    pub fn boundary_measure(&self) -> f64 {
        match self {
            Domain::IntervalUnion(iv) => 2.0 * iv.len() as f64,
            Domain::Box(b) => b.surface_measure(),
            Domain::Polygon(p) => p.perimeter(),
            Domain::Copy(c) => c.base.boundary_measure(),
            Domain::DisjointUnion(m) => m.iter().map(Domain::boundary_measure).sum(),
            Domain::Product(a, b) => {
                a.boundary_measure() * b.measure() + a.measure() * b.boundary_measure()
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Domain::IntervalUnion(iv) => iv.last().unwrap().1 - iv[0].0,
            Domain::Box(b) => b.diameter(),
            Domain::Polygon(p) => p.diameter(),
            Domain::Copy(c) => c.base.diameter(),
            Domain::Product(a, b) => a.diameter().hypot(b.diameter()),
            Domain::DisjointUnion(_) => {
                let v = self.vertices();
                let mut best = 0.0f64;
                for i in 0..v.len() {
                    for j in (i + 1)..v.len() {
                        let d2: f64 = v[i].iter().zip(&v[j]).map(|(x, y)| (x - y) * (x - y)).sum();
                        best = best.max(d2.sqrt());
                    }
                }
                best
            }
        }
    }

    /// Extreme points whose convex hull contains the closure.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        match self {
            Domain::IntervalUnion(iv) => iv
                .iter()
                .flat_map(|&(a, b)| [vec![a], vec![b]])
                .collect(),
            Domain::Box(b) => b.corners(),
            Domain::Polygon(p) => p.vertices().iter().map(|v| v.to_vec()).collect(),
            Domain::Copy(c) => match &c.realized {
                Some(r) => r.vertices(),
                None => c
                    .base
                    .vertices()
                    .iter()
                    .map(|v| c.isometry.apply(v))
                    .collect(),
            },
            Domain::DisjointUnion(m) => m.iter().flat_map(Domain::vertices).collect(),
            Domain::Product(a, b) => {
                let (va, vb) = (a.vertices(), b.vertices());
                va.iter()
                    .flat_map(|x| {
                        vb.iter().map(move |y| x.iter().chain(y).copied().collect())
                    })
                    .collect()
            }
        }
    }

    /// Smallest closed axis box containing the closure.
    pub fn bounding_box(&self) -> AxisBox {
        match self {
            Domain::Box(b) => b.clone(),
            Domain::Product(a, b) => {
                let mut bounds = a.bounding_box().bounds;
                bounds.extend(b.bounding_box().bounds);
                AxisBox { bounds }
            }
            _ => {
                let v = self.vertices();
                AxisBox::from_points(v.iter().map(|p| p.as_slice()))
                    .expect("domains have at least one vertex")
            }
        }
    }

    /// Open-set membership; points within [`BOUNDARY_TOL`] of a polygon edge are outside.
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::IntervalUnion(iv) => iv.iter().any(|&(a, b)| x[0] > a && x[0] < b),
            Domain::Box(b) => b.contains(x),
            Domain::Polygon(p) => p.contains([x[0], x[1]]),
            Domain::Copy(c) => match &c.realized {
                Some(r) => r.contains(x),
                None => c.base.contains(&c.isometry.inverse().apply(x)),
            },
            Domain::DisjointUnion(m) => m.iter().any(|d| d.contains(x)),
            Domain::Product(a, b) => {
                let k = a.dim();
                a.contains(&x[..k]) && b.contains(&x[k..])
            }
        }
    }

    /// Image `g(Ω)`.
    pub fn apply_isometry(&self, g: &Isometry) -> Result<Domain> {
        if g.dim() != self.dim() {
            return Err(Error::InvalidIsometry(format!(
                "isometry acts on R^{} but domain lives in R^{}",
                g.dim(),
                self.dim()
            )));
        }
        // collapse nested copies into one transform
        let (base, iso) = match self {
            Domain::Copy(c) => (c.base.as_ref().clone(), g.compose(&c.isometry)),
            other => (other.clone(), g.clone()),
        };
        if iso.is_identity() {
            return Ok(base);
        }
        let realized = realize(&base, &iso).map(Box::new);
        Ok(Domain::Copy(Copy {
            isometry: iso,
            base: Box::new(base),
            realized,
        }))
    }

    /// The underlying domain of a copy (identity otherwise). Spectra are
    /// isometry invariant so solvers only need this.
    pub fn canonical(&self) -> &Domain {
        match self {
            Domain::Copy(c) => c.base.canonical(),
            other => other,
        }
    }

    /// Explicit polygon when the domain is 2D and polygonal.
    pub fn as_polygon(&self) -> Option<Polygon> {
        match self {
            Domain::Polygon(p) => Some(p.clone()),
            Domain::Box(b) if b.dim() == 2 => Some(b.as_polygon()),
            Domain::Copy(c) => c.realized.as_ref().and_then(|r| r.as_polygon()),
            _ => None,
        }
    }

    /// Area of the part inside the closed box `window` (exact for polytopes in 1D/2D and boxes).
    pub fn measure_inside(&self, window: &AxisBox) -> Option<f64> {
        match self {
            Domain::Box(b) => Some(
                b.bounds
                    .iter()
                    .zip(&window.bounds)
                    .map(|(&(a, bb), &(c, d))| (bb.min(d) - a.max(c)).max(0.0))
                    .product(),
            ),
            Domain::IntervalUnion(iv) => {
                let (c, d) = window.bounds[0];
                Some(iv.iter().map(|&(a, b)| (b.min(d) - a.max(c)).max(0.0)).sum())
            }
            Domain::Polygon(p) => {
                let w = &window.bounds;
                Some(p.clipped_area([w[0].0, w[1].0], [w[0].1, w[1].1]))
            }
            Domain::Copy(c) => c.realized.as_ref().and_then(|r| r.measure_inside(window)),
            Domain::DisjointUnion(m) => m.iter().map(|d| d.measure_inside(window)).sum(),
            Domain::Product(a, b) => {
                let k = a.dim();
                let wa = AxisBox {
                    bounds: window.bounds[..k].to_vec(),
                };
                let wb = AxisBox {
                    bounds: window.bounds[k..].to_vec(),
                };
                Some(a.measure_inside(&wa)? * b.measure_inside(&wb)?)
            }
        }
    }

    /// Uniform scaling `sΩ` about the origin.
    pub fn scaled(&self, s: f64) -> Result<Domain> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::arg("scale factor must be positive"));
        }
        Ok(match self {
            Domain::IntervalUnion(iv) => {
                Domain::IntervalUnion(iv.iter().map(|&(a, b)| (s * a, s * b)).collect())
            }
            Domain::Box(b) => Domain::Box(b.scaled(s)),
            Domain::Polygon(p) => Domain::Polygon(Polygon::new_unchecked(
                p.vertices().iter().map(|v| [s * v[0], s * v[1]]).collect(),
            )),
            Domain::Copy(c) => {
                let base = c.base.scaled(s)?;
                let t: Vec<f64> = c.isometry.translation_part().iter().map(|v| s * v).collect();
                let lin = (0..c.isometry.dim()).map(|i| c.isometry.row(i).to_vec()).collect();
                base.apply_isometry(&Isometry::new(lin, t)?)?
            }
            Domain::DisjointUnion(m) => {
                Domain::DisjointUnion(m.iter().map(|d| d.scaled(s)).collect::<Result<_>>()?)
            }
            Domain::Product(a, b) => Domain::product(a.scaled(s)?, b.scaled(s)?),
        })
    }
}

fn realize(base: &Domain, g: &Isometry) -> Option<Domain> {
    match base {
        Domain::Polygon(p) => Some(Domain::Polygon(p.transformed(g))),
        Domain::Box(b) if b.dim() == 2 => Some(Domain::Polygon(b.as_polygon().transformed(g))),
        Domain::Box(b) if g.is_signed_permutation() => {
            let corners: Vec<Vec<f64>> = b.corners().iter().map(|c| g.apply(c)).collect();
            AxisBox::from_points(corners.iter().map(|c| c.as_slice())).map(Domain::Box)
        }
        Domain::IntervalUnion(iv) => {
            let mut out: Vec<(f64, f64)> = iv
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (g.apply(&[a])[0], g.apply(&[b])[0]);
                    (x.min(y), x.max(y))
                })
                .collect();
            out.sort_by(|x, y| x.0.total_cmp(&y.0));
            Some(Domain::IntervalUnion(out))
        }
        _ => None,
    }
}

/// Pairwise interior-disjointness of a list of same-dimensional domains.
pub fn interiors_disjoint(members: &[Domain]) -> bool {
    let boxes: Vec<AxisBox> = members.iter().map(Domain::bounding_box).collect();
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            if !boxes[i].interiors_meet(&boxes[j]) {
                continue;
            }
            let exact = |d: &Domain| matches!(d, Domain::Box(_) | Domain::IntervalUnion(_));
            if exact(&members[i]) && exact(&members[j]) {
                let overlap = match (&members[i], &members[j]) {
                    (Domain::Box(a), Domain::Box(b)) => a.interiors_meet(b),
                    (Domain::IntervalUnion(a), Domain::IntervalUnion(b)) => a
                        .iter()
                        .any(|&(p, q)| b.iter().any(|&(r, s)| r < q && p < s)),
                    _ => true,
                };
                if overlap {
                    return false;
                }
                continue;
            }
            let window = intersect_boxes(&boxes[i], &boxes[j]);
            let d = window.dim();
            let Ok(rep) = coverage_report(&[members[i].clone(), members[j].clone()], &window, 128)
            else {
                continue;
            };
            let window_share = window.measure()
                / members[i].measure().min(members[j].measure()).max(f64::MIN_POSITIVE);
            if rep.overlap_fraction * window_share.min(1.0) > 2.0 * d as f64 / 128.0 {
                return false;
            }
        }
    }
    true
}

fn intersect_boxes(a: &AxisBox, b: &AxisBox) -> AxisBox {
    AxisBox {
        bounds: a
            .bounds
            .iter()
            .zip(&b.bounds)
            .map(|(&(p, q), &(r, s))| (p.max(r), q.min(s)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn unit_square() -> Domain {
        Domain::axis_box(vec![(0.0, 1.0), (0.0, 1.0)]).unwrap()
    }

    #[test]
    fn measures() {
        assert_eq!(unit_square().measure(), 1.0);
        assert_eq!(Domain::Box(AxisBox::centered_cube(1.0, 2).unwrap()).measure(), 4.0);
        let hex = Domain::Polygon(regular_hexagon(1.0));
        assert!((hex.measure() - 2.598076211353316).abs() < 1e-12);
        let u = Domain::disjoint_union(vec![
            unit_square(),
            Domain::axis_box(vec![(1.0, 3.0), (0.0, 1.0)]).unwrap(),
        ])
        .unwrap();
        assert_eq!(u.measure(), 3.0);
    }

    #[test]
    fn diameters() {
        assert!((unit_square().diameter() - 2f64.sqrt()).abs() < 1e-15);
        let b = Domain::Box(AxisBox::centered_cube(1.0, 2).unwrap());
        assert!((b.diameter() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!((Domain::Polygon(regular_hexagon(1.0)).diameter() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn quarter_turn_of_unit_square() {
        let img = unit_square()
            .apply_isometry(&Isometry::rotation(PI / 2.0))
            .unwrap();
        let poly = img.as_polygon().unwrap();
        assert_eq!(
            poly.vertices(),
            &[[0.0, 0.0], [0.0, 1.0], [-1.0, 1.0], [-1.0, 0.0]]
        );
    }

    #[test]
    fn identity_copy_is_the_same_domain() {
        let sq = unit_square();
        assert_eq!(sq.apply_isometry(&Isometry::identity(2)).unwrap(), sq);
    }

    #[test]
    fn reflection_keeps_measure() {
        let img = unit_square()
            .apply_isometry(&Isometry::reflection(0.3))
            .unwrap();
        assert!((img.measure() - 1.0).abs() < 1e-15);
        let p = img.as_polygon().unwrap();
        assert!((p.area() - 1.0).abs() < 1e-12, "realized copy stays CCW");
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        assert!(unit_square()
            .apply_isometry(&Isometry::identity(3))
            .is_err());
    }

    #[test]
    fn overlapping_union_rejected() {
        let a = unit_square();
        let b = Domain::axis_box(vec![(0.5, 1.5), (0.0, 1.0)]).unwrap();
        assert!(Domain::disjoint_union(vec![a, b]).is_err());
        let tri1 = Domain::polygon(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let tri2 = Domain::polygon(vec![[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(Domain::disjoint_union(vec![tri1, tri2]).is_ok());
    }

    #[test]
    fn product_domains() {
        let p = Domain::product(
            Domain::interval(0.0, 1.0).unwrap(),
            Domain::interval(0.0, 2.0).unwrap(),
        );
        assert_eq!(p.dim(), 2);
        assert_eq!(p.measure(), 2.0);
        assert!((p.diameter() - 5f64.sqrt()).abs() < 1e-15);
        assert!(p.contains(&[0.5, 1.5]));
        assert!(!p.contains(&[0.5, 2.5]));
        assert_eq!(p.boundary_measure(), 6.0);
    }

    #[test]
    fn rotated_cube_uses_inverse_membership() {
        let c = Domain::Box(AxisBox::centered_cube(1.0, 3).unwrap());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let g = Isometry::new(
            vec![vec![s, -s, 0.0], vec![s, s, 0.0], vec![0.0, 0.0, 1.0]],
            vec![0.0, 0.0, 0.0],
        )
        .unwrap();
        let img = c.apply_isometry(&g).unwrap();
        assert!(img.contains(&[1.3, 0.0, 0.0]));
        assert!(!img.contains(&[1.0, 1.0, 0.0]));
        assert_eq!(img.measure(), 8.0);
    }

    fn arb_isometry() -> impl Strategy<Value = Isometry> {
        (0.0..(2.0 * PI), any::<bool>(), -5.0..5.0f64, -5.0..5.0f64).prop_map(|(t, refl, x, y)| {
            let base = if refl {
                Isometry::reflection(t)
            } else {
                Isometry::rotation(t)
            };
            Isometry::translation(&[x, y]).compose(&base)
        })
    }

    proptest! {
        #[test]
        fn isometries_preserve_measure_and_diameter(g in arb_isometry()) {
            let dom = Domain::polygon(vec![
                [0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0],
            ]).unwrap();
            let img = dom.apply_isometry(&g).unwrap();
            let realized = img.as_polygon().unwrap();
            prop_assert!((realized.area() - dom.measure()).abs() <= 1e-10 * dom.measure());
            prop_assert!((img.diameter() - dom.diameter()).abs() <= 1e-10);
            prop_assert!((realized.diameter() - dom.diameter()).abs() <= 1e-10);
        }

        #[test]
        fn diameter_scales_linearly(s in 0.1..10.0f64) {
            let hex = Domain::Polygon(regular_hexagon(1.0));
            let scaled = hex.scaled(s).unwrap();
            prop_assert!((scaled.diameter() - s * hex.diameter()).abs() <= 1e-12 * s);
            let b = Domain::axis_box(vec![(0.0, 1.0), (0.0, 3.0), (-1.0, 1.0)]).unwrap();
            prop_assert!((b.scaled(s).unwrap().diameter() - s * b.diameter()).abs() <= 1e-12 * s);
        }
    }
}
