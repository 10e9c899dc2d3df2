//! Periodic tilings by isometric copies of one prototile.
//!
//! A [`Tiling`] lists the copies meeting a finite window. The catalog shapes are
//! all lattice periodic: a motif of `l` copies forms a supertile that tiles by
//! translations of a [`Lattice`].

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    coverage_report_with, regular_hexagon, AxisBox, CoverageReport, Domain, Isometry, Polygon,
    SampleGrid,
};
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogShape {
    Square,
    Rectangle,
    RightTriangle,
    EquilateralTriangle,
    Hexagon,
    LTromino,
}

impl CatalogShape {
    pub const ALL: [CatalogShape; 6] = [
        CatalogShape::Square,
        CatalogShape::Rectangle,
        CatalogShape::RightTriangle,
        CatalogShape::EquilateralTriangle,
        CatalogShape::Hexagon,
        CatalogShape::LTromino,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogShape::Square => "square",
            CatalogShape::Rectangle => "rectangle",
            CatalogShape::RightTriangle => "right_triangle",
            CatalogShape::EquilateralTriangle => "equilateral_triangle",
            CatalogShape::Hexagon => "hexagon",
            CatalogShape::LTromino => "l_tromino",
        }
    }

    /// The prototile at the given scale, in its reference position.
    pub fn prototile(self, s: f64) -> Domain {
        let h = 3f64.sqrt() / 2.0;
        match self {
            CatalogShape::Square => Domain::Box(AxisBox::cube(0.0, s, 2).unwrap()),
            CatalogShape::Rectangle => {
                Domain::Box(AxisBox::new(vec![(0.0, 2.0 * s), (0.0, s)]).unwrap())
            }
            CatalogShape::RightTriangle => {
                Domain::Polygon(Polygon::new(vec![[0.0, 0.0], [s, 0.0], [0.0, s]]).unwrap())
            }
            CatalogShape::EquilateralTriangle => Domain::Polygon(
                Polygon::new(vec![[0.0, 0.0], [s, 0.0], [0.5 * s, h * s]]).unwrap(),
            ),
            CatalogShape::Hexagon => Domain::Polygon(regular_hexagon(s)),
            CatalogShape::LTromino => Domain::Polygon(
                Polygon::new(vec![
                    [0.0, 0.0],
                    [2.0 * s, 0.0],
                    [2.0 * s, s],
                    [s, s],
                    [s, 2.0 * s],
                    [0.0, 2.0 * s],
                ])
                .unwrap(),
            ),
        }
    }

    fn lattice(self, s: f64) -> Lattice {
        let h = 3f64.sqrt() / 2.0;
        let basis = match self {
            CatalogShape::Square | CatalogShape::RightTriangle => vec![vec![s, 0.0], vec![0.0, s]],
            CatalogShape::Rectangle => vec![vec![2.0 * s, 0.0], vec![0.0, s]],
            CatalogShape::EquilateralTriangle => vec![vec![s, 0.0], vec![0.5 * s, h * s]],
            CatalogShape::Hexagon => vec![vec![1.5 * s, h * s], vec![0.0, 2.0 * h * s]],
            CatalogShape::LTromino => vec![vec![4.0 * s, 0.0], vec![0.0, 3.0 * s]],
        };
        Lattice { basis }
    }

    /// Copies of the prototile making up one supertile.
    fn motif(self, s: f64) -> Vec<Isometry> {
        let h = 3f64.sqrt() / 2.0;
        let id = Isometry::identity(2);
        match self {
            CatalogShape::Square | CatalogShape::Rectangle | CatalogShape::Hexagon => vec![id],
            CatalogShape::RightTriangle => {
                vec![id, Isometry::point_reflection([0.5 * s, 0.5 * s])]
            }
            CatalogShape::EquilateralTriangle => {
                vec![id, Isometry::point_reflection([0.75 * s, 0.5 * h * s])]
            }
            CatalogShape::LTromino => {
                // two trominoes fill [0,2]×[0,3]; the mirror image fills [2,4]×[0,3]
                let turn = Isometry::point_reflection([s, 1.5 * s]);
                let mirror = Isometry::reflect_x(2.0 * s);
                vec![id.clone(), turn.clone(), mirror.compose(&id), mirror.compose(&turn)]
            }
        }
    }

    fn kind(self) -> TilingKind {
        match self {
            CatalogShape::Square | CatalogShape::Rectangle | CatalogShape::Hexagon => {
                TilingKind::Translational
            }
            _ => TilingKind::Regular,
        }
    }
}

impl FromStr for CatalogShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        CatalogShape::ALL
            .into_iter()
            .find(|c| c.name() == norm)
            .ok_or_else(|| Error::arg(format!("unknown tiling shape '{s}'")))
    }
}

/// `{ Σ n_j v_j : n_j ∈ ℤ }` for a basis `v_1..v_d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LatticeRepr", into = "LatticeRepr")]
pub struct Lattice {
    basis: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    basis: Vec<Vec<f64>>,
}

impl TryFrom<LatticeRepr> for Lattice {
    type Error = Error;
    fn try_from(r: LatticeRepr) -> Result<Self> {
        Lattice::new(r.basis)
    }
}

impl From<Lattice> for LatticeRepr {
    fn from(l: Lattice) -> Self {
        LatticeRepr { basis: l.basis }
    }
}

impl Lattice {
    pub fn new(basis: Vec<Vec<f64>>) -> Result<Self> {
        let d = basis.len();
        if d == 0 || basis.iter().any(|v| v.len() != d) {
            return Err(Error::arg("lattice basis must be d vectors in R^d"));
        }
        let l = Lattice { basis };
        if !(l.covolume() > 1e-14) {
            return Err(Error::arg("lattice basis is linearly dependent"));
        }
        Ok(l)
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    fn matrix(&self) -> nalgebra::DMatrix<f64> {
        let d = self.basis.len();
        // columns are basis vectors
        nalgebra::DMatrix::from_fn(d, d, |i, j| self.basis[j][i])
    }

    /// `|det(basis)|`, the volume of a fundamental cell.
    pub fn covolume(&self) -> f64 {
        self.matrix().determinant().abs()
    }

    pub fn point(&self, coeffs: &[i64]) -> Vec<f64> {
        let d = self.basis.len();
        (0..d)
            .map(|i| coeffs.iter().zip(&self.basis).map(|(&n, v)| n as f64 * v[i]).sum())
            .collect()
    }

    /// Real coordinates of `x` in the basis.
    pub fn coordinates(&self, x: &[f64]) -> Vec<f64> {
        let m = self.matrix();
        let inv = m.try_inverse().expect("basis is invertible");
        let v = inv * nalgebra::DVector::from_column_slice(x);
        v.iter().copied().collect()
    }

    /// Integer coordinates when `x` is a lattice vector (to 1e-9).
    pub fn integer_coordinates(&self, x: &[f64]) -> Option<Vec<i64>> {
        let c = self.coordinates(x);
        c.iter()
            .all(|v| (v - v.round()).abs() < 1e-9)
            .then(|| c.iter().map(|v| v.round() as i64).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TilingKind {
    General,
    Translational,
    Regular,
}

/// The copies `g(Ω)` of a prototile that meet a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tiling {
    pub shape: Option<CatalogShape>,
    pub scale: f64,
    pub kind: TilingKind,
    /// Every copy whose closure meets this closed box is listed.
    pub window: AxisBox,
    pub prototile: Domain,
    pub lattice: Option<Lattice>,
    /// Supertile copies for lattice tilings (one identity entry when translational).
    pub motif: Vec<Isometry>,
    pub placements: Vec<Isometry>,
}

impl Tiling {
    pub fn dim(&self) -> usize {
        self.prototile.dim()
    }

    pub fn copies(&self) -> Result<Vec<Domain>> {
        self.placements
            .iter()
            .map(|g| self.prototile.apply_isometry(g))
            .collect()
    }

    pub fn copy(&self, index: usize) -> Result<Domain> {
        self.prototile.apply_isometry(&self.placements[index])
    }

    /// Checks the structural claims of `kind`: lattice translations only for a
    /// translational tiling; lattice translations of the motif, with the motif
    /// filling one fundamental cell, for a regular one.
    pub fn check_structure(&self) -> Result<()> {
        if self.kind == TilingKind::General {
            return Ok(());
        }
        let lattice = self
            .lattice
            .as_ref()
            .ok_or_else(|| Error::arg("periodic tiling without a lattice"))?;
        if self.kind == TilingKind::Translational && !(self.motif.len() == 1 && self.motif[0].is_identity()) {
            return Err(Error::arg("translational tiling must use the identity motif"));
        }
        let covered = self.motif.len() as f64 * self.prototile.measure();
        if (covered - lattice.covolume()).abs() > 1e-9 * covered {
            return Err(Error::arg(format!(
                "motif of {} copies covers {covered}, fundamental cell has volume {}",
                self.motif.len(),
                lattice.covolume()
            )));
        }
        let motif_copies: Vec<Domain> = self
            .motif
            .iter()
            .map(|g| self.prototile.apply_isometry(g))
            .collect::<Result<_>>()?;
        if !crate::geometry::interiors_disjoint(&motif_copies) {
            return Err(Error::arg("motif copies overlap"));
        }
        for (idx, g) in self.placements.iter().enumerate() {
            let ok = self.motif.iter().any(|m| {
                // g = T_v ∘ m  ⇔  g ∘ m⁻¹ is a translation by a lattice vector
                let t = g.compose(&m.inverse());
                t.is_signed_permutation()
                    && (0..t.dim()).all(|i| (t.at(i, i) - 1.0).abs() < 1e-12)
                    && lattice.integer_coordinates(t.translation_part()).is_some()
            });
            if !ok {
                return Err(Error::arg(format!(
                    "placement {idx} is not a lattice translate of a motif copy"
                )));
            }
        }
        Ok(())
    }
}

/// Catalog tiling at `scale`, listing every copy whose closure meets `window`.
pub fn generate_tiling(shape: CatalogShape, scale: f64, window: &AxisBox) -> Result<Tiling> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::arg("scale must be positive"));
    }
    if window.dim() != 2 {
        return Err(Error::arg("catalog tilings are planar; window must be 2D"));
    }
    let prototile = shape.prototile(scale);
    let lattice = shape.lattice(scale);
    let motif = shape.motif(scale);

    let motif_copies: Vec<Domain> = motif
        .iter()
        .map(|g| prototile.apply_isometry(g))
        .collect::<Result<_>>()?;
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for c in &motif_copies {
        let b = c.bounding_box();
        for k in 0..2 {
            lo[k] = lo[k].min(b.bounds()[k].0);
            hi[k] = hi[k].max(b.bounds()[k].1);
        }
    }
    // lattice translations v with (v + supertile bbox) meeting the window
    let w = window.bounds();
    let corners = [
        [w[0].0 - hi[0], w[1].0 - hi[1]],
        [w[0].1 - lo[0], w[1].0 - hi[1]],
        [w[0].0 - hi[0], w[1].1 - lo[1]],
        [w[0].1 - lo[0], w[1].1 - lo[1]],
    ];
    let mut cmin = [f64::INFINITY; 2];
    let mut cmax = [f64::NEG_INFINITY; 2];
    for c in corners {
        let coords = lattice.coordinates(&c);
        for k in 0..2 {
            cmin[k] = cmin[k].min(coords[k]);
            cmax[k] = cmax[k].max(coords[k]);
        }
    }
    let span = (cmax[0] - cmin[0] + 3.0) * (cmax[1] - cmin[1] + 3.0) * motif.len() as f64;
    if span > 5e7 {
        return Err(Error::arg("window too large for the tiling scale"));
    }
    let (wlo, whi) = ([w[0].0, w[1].0], [w[0].1, w[1].1]);
    let mut placements = Vec::new();
    for n0 in (cmin[0].floor() as i64 - 1)..=(cmax[0].ceil() as i64 + 1) {
        for n1 in (cmin[1].floor() as i64 - 1)..=(cmax[1].ceil() as i64 + 1) {
            let v = lattice.point(&[n0, n1]);
            let t = Isometry::translation(&v);
            for m in &motif {
                let g = t.compose(m);
                let copy = prototile.apply_isometry(&g)?;
                let meets = match copy.as_polygon() {
                    Some(p) => p.closure_meets_box(wlo, whi),
                    None => copy.bounding_box().closures_meet(window),
                };
                if meets {
                    placements.push(g);
                }
            }
        }
    }
    Ok(Tiling {
        shape: Some(shape),
        scale,
        kind: shape.kind(),
        window: window.clone(),
        prototile,
        lattice: Some(lattice),
        motif,
        placements,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TilingValidation {
    pub coverage: CoverageReport,
    /// Boundary length inside the window over the window's side length.
    pub perimeter_estimate: f64,
    pub overlap_threshold: f64,
    pub uncovered_threshold: f64,
    pub pass: bool,
}

/// Samples the window and checks that the copies neither overlap nor leave
/// gaps beyond what boundary samples can explain.
///
/// Passes when `overlap ≤ 2d/res` and `uncovered ≤ 2d·perimeter_estimate/res`.
pub fn validate_tiling(t: &Tiling, window: &AxisBox, resolution: usize) -> Result<TilingValidation> {
    validate_tiling_with(t, window, SampleGrid::centered(resolution), Execution::default())
}

pub fn validate_tiling_with(
    t: &Tiling,
    window: &AxisBox,
    grid: SampleGrid,
    exec: Execution,
) -> Result<TilingValidation> {
    let copies = t.copies()?;
    let coverage = coverage_report_with(&copies, window, grid, exec)?;
    let d = window.dim() as f64;
    let boundary: f64 = copies
        .iter()
        .map(|c| {
            let share = c
                .measure_inside(window)
                .map(|m| m / c.measure())
                .unwrap_or(1.0);
            c.boundary_measure() * share
        })
        .sum();
    let side = window.measure().powf(1.0 / d);
    let perimeter_estimate = boundary / side.powf(d - 1.0);
    let res = grid.resolution as f64;
    let overlap_threshold = 2.0 * d / res;
    let uncovered_threshold = 2.0 * d * perimeter_estimate / res;
    let pass = coverage.overlap_fraction <= overlap_threshold
        && coverage.uncovered_fraction <= uncovered_threshold;
    Ok(TilingValidation {
        coverage,
        perimeter_estimate,
        overlap_threshold,
        uncovered_threshold,
        pass,
    })
}

/// Copies inside the inner box (`I`), copies meeting `(−L, L)^d` (`J`) and `K = J \ I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSets {
    pub half_width: f64,
    pub diameter: f64,
    pub dim: usize,
    pub inner: Vec<usize>,
    pub meeting: Vec<usize>,
    pub boundary_layer: Vec<usize>,
}

/// Index sets of placements for the box `(−L, L)^d`, with `R` the prototile diameter:
/// `I = {j : Ω_j ⊂ (−L+R, L−R)^d}`, `J = {j : Ω_j ∩ (−L, L)^d ≠ ∅}`, `K = J \ I`.
pub fn index_sets(t: &Tiling, half_width: f64) -> Result<IndexSets> {
    let r = t.prototile.diameter();
    let l = half_width;
    if !(l > 2.0 * r) {
        return Err(Error::arg(format!("L = {l} must exceed 2R = {}", 2.0 * r)));
    }
    let d = t.dim();
    let outer = AxisBox::centered_cube(l, d)?;
    if !t.window.encloses(&outer) {
        return Err(Error::arg(format!(
            "tiling window does not contain [-{l}, {l}]^{d}; regenerate with a larger window"
        )));
    }
    let inner_box = AxisBox::centered_cube(l - r, d)?;
    let mut inner = Vec::new();
    let mut meeting = Vec::new();
    for (idx, g) in t.placements.iter().enumerate() {
        let copy = t.prototile.apply_isometry(g)?;
        // open polytope ⊂ open box ⇔ all vertices in the closed box
        if copy.vertices().iter().all(|v| inner_box.contains_closed(v)) {
            inner.push(idx);
        }
        let bbox = copy.bounding_box();
        if !bbox.interiors_meet(&outer) {
            continue;
        }
        let overlap = copy
            .measure_inside(&outer)
            .ok_or_else(|| Error::arg("copy has no explicit form for clipping"))?;
        if overlap > 1e-12 * copy.measure() {
            meeting.push(idx);
        }
    }
    let boundary_layer = meeting
        .iter()
        .copied()
        .filter(|j| inner.binary_search(j).is_err())
        .collect();
    Ok(IndexSets {
        half_width: l,
        diameter: r,
        dim: d,
        inner,
        meeting,
        boundary_layer,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSetBounds {
    pub count_inner: usize,
    /// `2^d (L−R)^d / |Ω|`
    pub bound_inner: f64,
    pub count_boundary: usize,
    /// `2^d ((L+R)^d − (L−2R)^d) / |Ω|`
    pub bound_boundary: f64,
}

/// Checks the volume-counting bounds on `#I` and `#K`.
pub fn index_set_bounds(sets: &IndexSets, prototile_measure: f64, dim: usize) -> Result<IndexSetBounds> {
    if !(prototile_measure > 0.0) {
        return Err(Error::arg("prototile measure must be positive"));
    }
    let (l, r) = (sets.half_width, sets.diameter);
    let d = dim as i32;
    let two_d = 2f64.powi(d);
    let bounds = IndexSetBounds {
        count_inner: sets.inner.len(),
        bound_inner: two_d * (l - r).powi(d) / prototile_measure,
        count_boundary: sets.boundary_layer.len(),
        bound_boundary: two_d * ((l + r).powi(d) - (l - 2.0 * r).powi(d)) / prototile_measure,
    };
    if bounds.count_inner as f64 > bounds.bound_inner {
        return Err(Error::BoundViolated(format!(
            "#I = {} exceeds {}",
            bounds.count_inner, bounds.bound_inner
        )));
    }
    if bounds.count_boundary as f64 > bounds.bound_boundary {
        return Err(Error::BoundViolated(format!(
            "#K = {} exceeds {}",
            bounds.count_boundary, bounds.bound_boundary
        )));
    }
    Ok(bounds)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn square_tiling(half: f64) -> Tiling {
        generate_tiling(
            CatalogShape::Square,
            1.0,
            &AxisBox::centered_cube(half, 2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn square_catalog_counts() {
        let t = square_tiling(4.0);
        // squares [i, i+1]² with closures meeting [-4, 4]²: i ∈ -5..=4
        assert_eq!(t.placements.len(), 100);
        let window = AxisBox::centered_cube(4.0, 2).unwrap();
        let interior = t
            .copies()
            .unwrap()
            .iter()
            .filter(|c| window.encloses(&c.bounding_box()))
            .count();
        assert_eq!(interior, 64);
        t.check_structure().unwrap();
        let v = validate_tiling(&t, &window, 512).unwrap();
        assert!(v.pass, "{v:?}");
    }

    #[test]
    fn every_catalog_shape_tiles() {
        let window = AxisBox::cube(0.0, 6.0, 2).unwrap();
        for shape in CatalogShape::ALL {
            let t = generate_tiling(shape, 1.0, &window).unwrap();
            t.check_structure().unwrap_or_else(|e| panic!("{shape:?}: {e}"));
            let v = validate_tiling(&t, &window, 256).unwrap();
            assert!(v.pass, "{shape:?}: {v:?}");
            assert_eq!(v.coverage.max_multiplicity, 1, "{shape:?}");
        }
    }

    #[test]
    fn motif_sizes() {
        let w = AxisBox::cube(0.0, 4.0, 2).unwrap();
        let l = |s| generate_tiling(s, 1.0, &w).unwrap().motif.len();
        assert_eq!(l(CatalogShape::Square), 1);
        assert_eq!(l(CatalogShape::Hexagon), 1);
        assert_eq!(l(CatalogShape::RightTriangle), 2);
        assert_eq!(l(CatalogShape::EquilateralTriangle), 2);
        assert_eq!(l(CatalogShape::LTromino), 4);
    }

    #[test]
    fn tromino_supertiles_are_four_copies() {
        let w = AxisBox::cube(0.0, 4.0, 2).unwrap();
        let t = generate_tiling(CatalogShape::LTromino, 1.0, &w).unwrap();
        let lattice = t.lattice.as_ref().unwrap();
        assert_eq!(lattice.covolume(), 12.0);
        // group placements by lattice cell: each full cell holds 4 trominoes
        let mut cells = std::collections::BTreeMap::new();
        for g in &t.placements {
            for (m, motif) in t.motif.iter().enumerate() {
                let tr = g.compose(&motif.inverse());
                if let Some(c) = lattice.integer_coordinates(tr.translation_part()) {
                    if (tr.at(0, 0) - 1.0).abs() < 1e-12 && (tr.at(1, 1) - 1.0).abs() < 1e-12 {
                        cells.entry(c).or_insert_with(Vec::new).push(m);
                    }
                }
            }
        }
        assert_eq!(cells[&vec![0, 0]], vec![0, 1, 2, 3]);
    }

    #[test]
    fn hexagon_lattice_basis() {
        let t = generate_tiling(CatalogShape::Hexagon, 1.0, &AxisBox::cube(0.0, 6.0, 2).unwrap()).unwrap();
        let b = t.lattice.unwrap().basis().to_vec();
        let h = 3f64.sqrt();
        assert!((b[0][0] - 1.5).abs() < 1e-15 && (b[0][1] - h / 2.0).abs() < 1e-15);
        assert!(b[1][0].abs() < 1e-15 && (b[1][1] - h).abs() < 1e-15);
    }

    #[test]
    fn shifted_copy_fails_validation() {
        let mut t = square_tiling(4.0);
        let window = AxisBox::centered_cube(4.0, 2).unwrap();
        // move the copy at [0,1]² right by 0.3
        let idx = t
            .placements
            .iter()
            .position(|g| g.translation_part() == [0.0, 0.0])
            .unwrap();
        t.placements[idx] = Isometry::translation(&[0.3, 0.0]);
        let v = validate_tiling(&t, &window, 1024).unwrap();
        assert!(!v.pass);
        // overlap with the right neighbour has area 0.3
        assert!((v.coverage.overlap_fraction - 0.3 / 64.0).abs() < 2.0 / 1024.0);
        assert!(t.check_structure().is_err());
    }

    #[test]
    fn single_copy_on_its_bounding_box() {
        let t = generate_tiling(CatalogShape::Square, 1.0, &AxisBox::cube(0.2, 0.8, 2).unwrap()).unwrap();
        assert_eq!(t.placements.len(), 1);
        let window = AxisBox::cube(0.0, 1.0, 2).unwrap();
        assert!(validate_tiling(&t, &window, 64).unwrap().pass);
    }

    #[test]
    fn index_sets_for_unit_squares() {
        let t = square_tiling(4.0);
        let sets = index_sets(&t, 4.0).unwrap();
        assert_eq!(sets.inner.len(), 16);
        assert_eq!(sets.meeting.len(), 64);
        assert_eq!(sets.boundary_layer.len(), 48);
        let b = index_set_bounds(&sets, 1.0, 2).unwrap();
        let r = 2f64.sqrt();
        assert!((b.bound_inner - 4.0 * (4.0 - r).powi(2)).abs() < 1e-12);
        assert!((b.bound_inner - 26.75).abs() < 0.01);
        assert!((b.bound_boundary - 111.75).abs() < 0.02);
    }

    #[test]
    fn index_sets_at_l8() {
        let t = square_tiling(8.0);
        let sets = index_sets(&t, 8.0).unwrap();
        // i ∈ -6..=5 per axis fits in (-8+√2, 8-√2)
        assert_eq!(sets.inner.len(), 144);
        let b = index_set_bounds(&sets, 1.0, 2).unwrap();
        assert!((b.bound_inner - 173.4).abs() < 0.1);
    }

    #[test]
    fn index_sets_reject_small_l() {
        let t = square_tiling(4.0);
        assert!(index_sets(&t, 2.0 * 2f64.sqrt()).is_err());
        assert!(index_sets(&t, 2.0).is_err());
        // window too small for L
        assert!(index_sets(&t, 5.0).is_err());
    }

    #[test]
    fn inner_set_nonempty_just_above_two_r() {
        // the copy containing the centre lies within R of it, hence inside (−L+R, L−R)^d
        for shape in CatalogShape::ALL {
            let t = generate_tiling(shape, 1.0, &AxisBox::centered_cube(8.0, 2).unwrap()).unwrap();
            let r = t.prototile.diameter();
            let sets = index_sets(&t, 2.0 * r + 1e-3).unwrap();
            assert!(!sets.inner.is_empty(), "{shape:?}");
        }
    }

    #[test]
    fn empty_inner_set_meets_bound_trivially() {
        let sets = IndexSets {
            half_width: 3.0,
            diameter: 1.0,
            dim: 2,
            inner: vec![],
            meeting: vec![],
            boundary_layer: vec![],
        };
        let b = index_set_bounds(&sets, 1.0, 2).unwrap();
        assert_eq!(b.count_inner, 0);
        assert!(b.bound_inner > 0.0);
        let bad = IndexSets {
            inner: (0..100).collect(),
            ..sets
        };
        assert!(matches!(index_set_bounds(&bad, 1.0, 2), Err(Error::BoundViolated(_))));
    }

    #[test]
    fn index_set_invariants_on_catalog() {
        for shape in CatalogShape::ALL {
            let t = generate_tiling(shape, 1.0, &AxisBox::centered_cube(13.0, 2).unwrap()).unwrap();
            let r = t.prototile.diameter();
            for l in [2.0 * r + 0.5, 8.0, 12.5] {
                if l <= 2.0 * r {
                    continue;
                }
                let sets = index_sets(&t, l).unwrap();
                for i in &sets.inner {
                    assert!(sets.meeting.contains(i), "{shape:?}: I ⊄ J");
                    let bb = t.copy(*i).unwrap().bounding_box();
                    assert!(AxisBox::centered_cube(l, 2).unwrap().encloses(&bb));
                }
                assert!(sets.boundary_layer.iter().all(|k| !sets.inner.contains(k)));
                index_set_bounds(&sets, t.prototile.measure(), 2)
                    .unwrap_or_else(|e| panic!("{shape:?} L={l}: {e}"));
            }
        }
    }

    #[test]
    fn refining_resolution_keeps_pass() {
        let window = AxisBox::cube(0.0, 5.0, 2).unwrap();
        for shape in CatalogShape::ALL {
            let t = generate_tiling(shape, 1.0, &window).unwrap();
            for res in [64, 128, 256] {
                assert!(validate_tiling(&t, &window, res).unwrap().pass, "{shape:?} {res}");
            }
        }
    }

    #[test]
    fn shape_names_parse() {
        for s in CatalogShape::ALL {
            assert_eq!(s.name().parse::<CatalogShape>().unwrap(), s);
        }
        assert!("penrose".parse::<CatalogShape>().is_err());
    }

    #[test]
    fn tiling_json_round_trip() {
        let t = generate_tiling(CatalogShape::EquilateralTriangle, 0.5, &AxisBox::cube(0.0, 2.0, 2).unwrap()).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        let back: Tiling = serde_json::from_str(&s).unwrap();
        assert_eq!(t, back);
    }
}
