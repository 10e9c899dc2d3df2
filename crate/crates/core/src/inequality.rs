//! Counting functions and verdicts for Pólya-type eigenvalue inequalities.
//!
//! Finite-element spectra are handled asymmetrically. Discrete eigenvalues are
//! upper bounds of the true ones, so a discrete count never exceeds the true
//! count: lower bounds on `N_N` are certified directly, while upper bounds on
//! `N_D` are widened by the error bounds and flagged with a caveat.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::spectra::{ball_dirichlet_lambda1, weyl_term, BoundaryCondition, Method, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    PolyaDirichlet,
    PolyaNeumann,
    LiYau,
    Kroger,
    Friedlander,
    FaberKrahn,
    WeylRatio,
    CountTransfer,
    Bracketing,
}

impl std::fmt::Display for Inequality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Inequality::PolyaDirichlet => "polya-dirichlet",
            Inequality::PolyaNeumann => "polya-neumann",
            Inequality::LiYau => "li-yau",
            Inequality::Kroger => "kroger",
            Inequality::Friedlander => "friedlander",
            Inequality::FaberKrahn => "faber-krahn",
            Inequality::WeylRatio => "weyl-ratio",
            Inequality::CountTransfer => "count-transfer",
            Inequality::Bracketing => "bracketing",
        })
    }
}

/// Which side of the Weyl term a Pólya check asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyaSide {
    /// `N_D(λ) ≤ W(λ)`
    DirichletUpper,
    /// `N_N(λ) ≥ W(λ)`
    NeumannLower,
}

impl PolyaSide {
    pub fn bc(self) -> BoundaryCondition {
        match self {
            PolyaSide::DirichletUpper => BoundaryCondition::Dirichlet,
            PolyaSide::NeumannLower => BoundaryCondition::Neumann,
        }
    }
}

/// One comparison. `at` is λ or the eigenvalue index `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub at: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Signed so that `margin ≥ 0` means the inequality holds.
    pub margin: f64,
    pub pass: bool,
    /// `lhs == rhs` exactly.
    pub equality: bool,
    pub discretization_caveat: bool,
}

impl CheckRecord {
    pub(crate) fn new(at: f64, lhs: f64, rhs: f64, margin: f64, caveat: bool) -> Self {
        CheckRecord {
            at,
            lhs,
            rhs,
            margin,
            pass: margin >= 0.0,
            equality: margin == 0.0,
            discretization_caveat: caveat,
        }
    }

    fn strict(at: f64, lhs: f64, rhs: f64, margin: f64, caveat: bool) -> Self {
        CheckRecord {
            pass: margin > 0.0,
            ..CheckRecord::new(at, lhs, rhs, margin, caveat)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub inequality: Inequality,
    pub method: Method,
    pub dim: usize,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
    pub discretization_caveat: bool,
    pub equality_cases: usize,
    pub violations: usize,
}

impl InequalityReport {
    pub fn from_records(inequality: Inequality, method: Method, dim: usize, records: Vec<CheckRecord>) -> Self {
        let violations = records.iter().filter(|r| !r.pass).count();
        InequalityReport {
            inequality,
            method,
            dim,
            pass: violations == 0,
            discretization_caveat: records.iter().any(|r| r.discretization_caveat),
            equality_cases: records.iter().filter(|r| r.equality).count(),
            violations,
            records,
        }
    }

    /// Smallest margin over all records.
    pub fn worst_margin(&self) -> Option<f64> {
        self.records.iter().map(|r| r.margin).min_by(f64::total_cmp)
    }
}

/// `N(λ)` with, for approximate spectra, the bracket
/// `[#{value < λ}, #{value − error < λ}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Count {
    pub count: usize,
    pub bracket: Option<(usize, usize)>,
}

pub fn counting_function(s: &Spectrum, lambda: f64) -> Count {
    let count = if lambda <= 0.0 { 0 } else { s.count_below(lambda) };
    let bracket = (!s.method.is_exact()).then(|| {
        let widened = s
            .values()
            .iter()
            .zip(s.errors())
            .filter(|(v, e)| *v - *e < lambda)
            .count();
        (count, widened.max(count))
    });
    Count { count, bracket }
}

/// `#{value + error < λ}`: a count that stays below the true count even if the
/// reported values are off by their error bounds.
pub fn certified_lower_count(s: &Spectrum, lambda: f64) -> usize {
    s.values()
        .iter()
        .zip(s.errors())
        .filter(|(v, e)| *v + *e < lambda)
        .count()
}

fn require_complete(s: &Spectrum, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::arg("empty λ grid"));
    }
    if let Some(bad) = grid.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
        return Err(Error::arg(format!("λ values must be finite and nonnegative, got {bad}")));
    }
    let top = grid.iter().copied().fold(0.0, f64::max);
    if top > s.complete_below {
        return Err(Error::SpectrumUnavailable(format!(
            "spectrum is complete only below {} but λ = {top} was requested",
            s.complete_below
        )));
    }
    Ok(())
}

fn require_bc(s: &Spectrum, bc: BoundaryCondition) -> Result<()> {
    if s.bc != bc {
        return Err(Error::arg(format!("check needs a {bc} spectrum, got {}", s.bc)));
    }
    Ok(())
}

/// Compares `N(λ)` with `factor · W(λ)`; the side fixes the direction.
fn weyl_comparison(
    s: &Spectrum,
    side: PolyaSide,
    factor: f64,
    tag: Inequality,
    grid: &[f64],
    exec: Execution,
) -> Result<InequalityReport> {
    require_bc(s, side.bc())?;
    require_complete(s, grid)?;
    let approximate = !s.method.is_exact();
    let records = par::map_slice(exec, grid, |&lambda| {
        let rhs = factor * weyl_term(lambda, s.domain_measure, s.dim);
        match side {
            PolyaSide::NeumannLower => {
                let n = if approximate {
                    certified_lower_count(s, lambda)
                } else {
                    s.count_below(lambda)
                } as f64;
                CheckRecord::new(lambda, n, rhs, n - rhs, false)
            }
            PolyaSide::DirichletUpper => {
                let c = counting_function(s, lambda);
                let n = c.bracket.map_or(c.count, |b| b.1) as f64;
                CheckRecord::new(lambda, n, rhs, rhs - n, approximate)
            }
        }
    });
    Ok(InequalityReport::from_records(tag, s.method, s.dim, records))
}

/// `N_D(λ) ≤ W(λ)` or `N_N(λ) ≥ W(λ)` on each grid point.
pub fn check_polya(s: &Spectrum, side: PolyaSide, grid: &[f64], exec: Execution) -> Result<InequalityReport> {
    let tag = match side {
        PolyaSide::DirichletUpper => Inequality::PolyaDirichlet,
        PolyaSide::NeumannLower => Inequality::PolyaNeumann,
    };
    weyl_comparison(s, side, 1.0, tag, grid, exec)
}

pub fn li_yau_constant(dim: usize) -> f64 {
    let d = dim as f64;
    ((d + 2.0) / d).powf(0.5 * d)
}

pub fn kroger_constant(dim: usize) -> f64 {
    2.0 / (dim as f64 + 2.0)
}

/// Li–Yau for Dirichlet spectra, Kröger for Neumann spectra.
pub fn check_li_yau_kroger(s: &Spectrum, grid: &[f64], exec: Execution) -> Result<InequalityReport> {
    match s.bc {
        BoundaryCondition::Dirichlet => weyl_comparison(
            s,
            PolyaSide::DirichletUpper,
            li_yau_constant(s.dim),
            Inequality::LiYau,
            grid,
            exec,
        ),
        BoundaryCondition::Neumann => weyl_comparison(
            s,
            PolyaSide::NeumannLower,
            kroger_constant(s.dim),
            Inequality::Kroger,
            grid,
            exec,
        ),
    }
}

/// `μ_{k+1} ≤ λ_k` for `k = 1..=k_max`, strict when `d ≥ 2` and both spectra are exact.
pub fn check_friedlander(dir: &Spectrum, neu: &Spectrum, k_max: usize) -> Result<InequalityReport> {
    require_bc(dir, BoundaryCondition::Dirichlet)?;
    require_bc(neu, BoundaryCondition::Neumann)?;
    if dir.dim != neu.dim {
        return Err(Error::arg("Dirichlet and Neumann spectra differ in dimension"));
    }
    let rel = (dir.domain_measure - neu.domain_measure).abs() / dir.domain_measure.max(f64::MIN_POSITIVE);
    if rel > 1e-9 {
        return Err(Error::arg("Dirichlet and Neumann spectra come from domains of different measure"));
    }
    if k_max == 0 || dir.len() < k_max || neu.len() < k_max + 1 {
        return Err(Error::SpectrumUnavailable(format!(
            "need {k_max} Dirichlet and {} Neumann eigenvalues, have {} and {}",
            k_max + 1,
            dir.len(),
            neu.len()
        )));
    }
    let exact = dir.method.is_exact() && neu.method.is_exact();
    let strict = exact && dir.dim >= 2;
    let records = (1..=k_max)
        .map(|k| {
            let lam = dir.values()[k - 1];
            let mu = neu.values()[k];
            let margin = (lam - dir.errors()[k - 1]) - (mu + neu.errors()[k]);
            if strict {
                CheckRecord::strict(k as f64, mu, lam, margin, false)
            } else {
                CheckRecord::new(k as f64, mu, lam, margin, !exact)
            }
        })
        .collect();
    let method = if exact { Method::Exact } else if dir.method.is_exact() { neu.method } else { dir.method };
    Ok(InequalityReport::from_records(Inequality::Friedlander, method, dir.dim, records))
}

/// `λ₁(Ω) ≥ λ₁(B)` for the disk `B` with `|B| = |Ω|` (planar domains only).
pub fn check_faber_krahn(dir: &Spectrum, measure: f64) -> Result<InequalityReport> {
    require_bc(dir, BoundaryCondition::Dirichlet)?;
    if dir.dim != 2 {
        return Err(Error::arg(format!(
            "Faber–Krahn is implemented for planar domains only, got dimension {}",
            dir.dim
        )));
    }
    if !(measure > 0.0) {
        return Err(Error::arg("measure must be positive"));
    }
    let lam1 = dir
        .nth(1)
        .ok_or_else(|| Error::SpectrumUnavailable("empty Dirichlet spectrum".into()))?;
    let widened = lam1 - dir.errors()[0];
    let disk = ball_dirichlet_lambda1((measure / std::f64::consts::PI).sqrt())?;
    let record = CheckRecord::new(1.0, widened, disk, widened - disk, !dir.method.is_exact());
    Ok(InequalityReport::from_records(Inequality::FaberKrahn, dir.method, 2, vec![record]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylRatioRow {
    pub lambda: f64,
    pub count: usize,
    pub weyl_term: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylRatioTable {
    pub rows: Vec<WeylRatioRow>,
    pub band: (f64, f64),
    /// The ratio at the largest λ lies in `band`.
    pub pass: bool,
}

/// `N(λ)/W(λ)` along `lambdas`; exact spectra only.
pub fn check_weyl_ratio(s: &Spectrum, lambdas: &[f64], band: (f64, f64)) -> Result<WeylRatioTable> {
    if !s.method.is_exact() {
        return Err(Error::arg("Weyl ratios need an exact spectrum"));
    }
    require_complete(s, lambdas)?;
    if lambdas.iter().any(|&l| l <= 0.0) {
        return Err(Error::arg("λ values must be positive"));
    }
    let rows: Vec<WeylRatioRow> = lambdas
        .iter()
        .map(|&lambda| {
            let count = s.count_below(lambda);
            let w = weyl_term(lambda, s.domain_measure, s.dim);
            WeylRatioRow {
                lambda,
                count,
                weyl_term: w,
                ratio: count as f64 / w,
            }
        })
        .collect();
    let last = rows
        .iter()
        .max_by(|a, b| a.lambda.total_cmp(&b.lambda))
        .expect("nonempty");
    let pass = (band.0..=band.1).contains(&last.ratio);
    Ok(WeylRatioTable { rows, band, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{box_spectrum, count_box_neumann};
    use std::f64::consts::PI;

    fn unit_square(bc: BoundaryCondition, lmax: f64) -> Spectrum {
        box_spectrum(&[0.5, 0.5], bc, lmax).unwrap()
    }

    #[test]
    fn counting_conventions() {
        let s = box_spectrum(&[1.0, 1.0], BoundaryCondition::Neumann, 50.0).unwrap();
        assert_eq!(counting_function(&s, 10.0).count as u64, count_box_neumann(10.0, 1.0, 2).unwrap());
        assert_eq!(counting_function(&s, PI * PI / 4.0).count, 1);
        assert_eq!(counting_function(&s, 0.0).count, 0);
        assert!(counting_function(&s, 10.0).bracket.is_none());
    }

    #[test]
    fn fem_bracket() {
        let s = Spectrum::new(
            BoundaryCondition::Dirichlet,
            Method::Fem { level: 3 },
            vec![1.0, 2.0, 3.0],
            vec![0.0, 0.5, 0.5],
            1.0,
            2,
            10.0,
        )
        .unwrap();
        let c = counting_function(&s, 2.2);
        assert_eq!(c.count, 2);
        assert_eq!(c.bracket, Some((2, 2)));
        assert_eq!(certified_lower_count(&s, 2.2), 1);
        assert_eq!(counting_function(&s, 2.6).bracket, Some((2, 3)));
    }

    #[test]
    fn polya_on_unit_square() {
        let e = Execution::Sequential;
        let neu = unit_square(BoundaryCondition::Neumann, 200.0);
        let r = check_polya(&neu, PolyaSide::NeumannLower, &[10.0, 100.0], e).unwrap();
        assert!(r.pass);
        assert_eq!(r.records[0].lhs, 3.0);
        assert!((r.records[0].rhs - 10.0 / (4.0 * PI)).abs() < 1e-12);
        assert_eq!(r.records[1].lhs, 13.0);
        let dir = unit_square(BoundaryCondition::Dirichlet, 200.0);
        let r = check_polya(&dir, PolyaSide::DirichletUpper, &[50.0], e).unwrap();
        assert!(r.pass && r.records[0].lhs == 3.0);
        assert!((r.records[0].rhs - 3.9789).abs() < 1e-4);
        assert!(check_polya(&dir, PolyaSide::NeumannLower, &[50.0], e).is_err());
        assert!(check_polya(&dir, PolyaSide::DirichletUpper, &[500.0], e).is_err());
    }

    #[test]
    fn dense_grids_on_exact_spectra() {
        let grid: Vec<f64> = (1..=10_000).map(|i| i as f64).collect();
        for half in [vec![0.5, 0.5], vec![1.0, 0.3], vec![0.7]] {
            for (bc, side) in [
                (BoundaryCondition::Neumann, PolyaSide::NeumannLower),
                (BoundaryCondition::Dirichlet, PolyaSide::DirichletUpper),
            ] {
                let s = box_spectrum(&half, bc, 10_001.0).unwrap();
                let r = check_polya(&s, side, &grid, Execution::Parallel).unwrap();
                assert!(r.pass, "{half:?} {bc}: {:?}", r.worst_margin());
                let ly = check_li_yau_kroger(&s, &grid, Execution::Parallel).unwrap();
                assert!(ly.pass);
                for (a, b) in r.records.iter().zip(&ly.records) {
                    assert!(a.margin <= b.margin + 1e-12);
                }
            }
        }
    }

    #[test]
    fn li_yau_and_kroger_constants() {
        assert_eq!(li_yau_constant(2), 2.0);
        assert_eq!(kroger_constant(2), 0.5);
        let dir = unit_square(BoundaryCondition::Dirichlet, 100.0);
        let r = check_li_yau_kroger(&dir, &[50.0], Execution::Sequential).unwrap();
        assert_eq!(r.inequality, Inequality::LiYau);
        assert!((r.records[0].rhs - 7.958).abs() < 1e-3);
        let neu = unit_square(BoundaryCondition::Neumann, 200.0);
        let r = check_li_yau_kroger(&neu, &[100.0], Execution::Sequential).unwrap();
        assert_eq!(r.inequality, Inequality::Kroger);
        assert!(r.pass && (r.records[0].rhs - 3.979).abs() < 1e-3);
    }

    #[test]
    fn friedlander_square_and_interval() {
        let dir = unit_square(BoundaryCondition::Dirichlet, 2000.0);
        let neu = unit_square(BoundaryCondition::Neumann, 2000.0);
        let r = check_friedlander(&dir, &neu, 20).unwrap();
        assert!(r.pass && r.equality_cases == 0);
        let di = box_spectrum(&[0.5], BoundaryCondition::Dirichlet, 2000.0).unwrap();
        let ni = box_spectrum(&[0.5], BoundaryCondition::Neumann, 2000.0).unwrap();
        let r = check_friedlander(&di, &ni, 10).unwrap();
        assert!(r.pass);
        assert_eq!(r.equality_cases, 10);
        assert!(check_friedlander(&di, &ni, 1000).is_err());
    }

    #[test]
    fn faber_krahn_cases() {
        let sq = unit_square(BoundaryCondition::Dirichlet, 100.0);
        let r = check_faber_krahn(&sq, 1.0).unwrap();
        assert!(r.pass);
        assert!((r.records[0].rhs - 18.168).abs() < 1e-3);
        let rect = box_spectrum(&[1.0, 0.25], BoundaryCondition::Dirichlet, 100.0).unwrap();
        let r = check_faber_krahn(&rect, 1.0).unwrap();
        assert!((r.records[0].lhs - 4.25 * PI * PI).abs() < 1e-9 && r.pass);
        let disk_val = ball_dirichlet_lambda1(1.0).unwrap();
        let disk = Spectrum::new(BoundaryCondition::Dirichlet, Method::Exact, vec![disk_val], vec![0.0], PI, 2, disk_val).unwrap();
        let r = check_faber_krahn(&disk, PI).unwrap();
        assert!(r.pass && r.records[0].margin.abs() < 1e-6);
        let line = box_spectrum(&[0.5], BoundaryCondition::Dirichlet, 100.0).unwrap();
        assert!(check_faber_krahn(&line, 1.0).is_err());
    }

    #[test]
    fn weyl_ratio_tables() {
        let s = box_spectrum(&[1.0, 1.0], BoundaryCondition::Neumann, 10_001.0).unwrap();
        let t = check_weyl_ratio(&s, &[100.0, 1000.0, 10_000.0], (1.0, 1.05)).unwrap();
        assert!(t.pass);
        let dev: Vec<f64> = t.rows.iter().map(|r| (r.ratio - 1.0).abs()).collect();
        assert!(dev[0] > dev[1] && dev[1] > dev[2]);
        let line = box_spectrum(&[0.5], BoundaryCondition::Neumann, 1.0e6 + 1.0).unwrap();
        let t = check_weyl_ratio(&line, &[1.0e6], (0.997, 1.003)).unwrap();
        assert!(t.pass);
        assert!(check_weyl_ratio(&line, &[2.0e6], (0.9, 1.1)).is_err());
    }
}
