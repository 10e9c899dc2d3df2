use serde::{Deserialize, Serialize};

use super::{AxisBox, Domain};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

const MAX_SAMPLES: u64 = 1 << 32;

/// Regular sampling grid: `resolution` points per axis, each placed at
/// `offset` (a fraction of the cell width) inside its cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleGrid {
    pub resolution: usize,
    pub offset: f64,
}

impl SampleGrid {
    /// Cell-centred grid.
    pub fn centered(resolution: usize) -> Self {
        SampleGrid {
            resolution,
            offset: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub window: AxisBox,
    pub resolution: usize,
    pub samples: u64,
    pub covered_fraction: f64,
    pub uncovered_fraction: f64,
    /// Fraction of samples lying in two or more domains.
    pub overlap_fraction: f64,
    pub max_multiplicity: u32,
}

/// Samples `window` on a cell-centred grid and records how many of `doms`
/// contain each sample.
pub fn coverage_report(doms: &[Domain], window: &AxisBox, resolution: usize) -> Result<CoverageReport> {
    coverage_report_with(doms, window, SampleGrid::centered(resolution), Execution::default())
}

pub fn coverage_report_with(
    doms: &[Domain],
    window: &AxisBox,
    grid: SampleGrid,
    exec: Execution,
) -> Result<CoverageReport> {
    let res = grid.resolution;
    if res < 16 {
        return Err(Error::arg(format!("resolution {res} below minimum 16")));
    }
    if !(0.0..1.0).contains(&grid.offset) {
        return Err(Error::arg("grid offset must lie in [0, 1)"));
    }
    let d = window.dim();
    if window.measure() <= 0.0 {
        return Err(Error::arg("empty sampling window"));
    }
    if let Some(bad) = doms.iter().find(|m| m.dim() != d) {
        return Err(Error::arg(format!(
            "domain of dimension {} sampled in a {d}-dimensional window",
            bad.dim()
        )));
    }
    let samples = (res as u64)
        .checked_pow(d as u32)
        .filter(|&n| n <= MAX_SAMPLES)
        .ok_or_else(|| Error::arg("too many samples for this resolution and dimension"))?;

    let boxes: Vec<AxisBox> = doms.iter().map(Domain::bounding_box).collect();
    let steps: Vec<f64> = window.widths().iter().map(|w| w / res as f64).collect();
    let coord = |axis: usize, i: usize| {
        window.bounds()[axis].0 + (i as f64 + grid.offset) * steps[axis]
    };
    let inner = samples / res as u64;

    // one slab per index along the first axis
    let slabs = par::map_range(exec, res, |i0| {
        let x0 = coord(0, i0);
        let candidates: Vec<usize> = (0..doms.len())
            .filter(|&k| {
                let (a, b) = boxes[k].bounds()[0];
                x0 >= a && x0 <= b
            })
            .collect();
        let mut covered = 0u64;
        let mut overlapped = 0u64;
        let mut max_mult = 0u32;
        let mut x = vec![0.0; d];
        x[0] = x0;
        for rest in 0..inner {
            let mut r = rest;
            for (axis, xa) in x.iter_mut().enumerate().skip(1) {
                *xa = coord(axis, (r % res as u64) as usize);
                r /= res as u64;
            }
            let mult = candidates
                .iter()
                .filter(|&&k| boxes[k].contains_closed(&x) && doms[k].contains(&x))
                .count() as u32;
            if mult >= 1 {
                covered += 1;
            }
            if mult >= 2 {
                overlapped += 1;
            }
            max_mult = max_mult.max(mult);
        }
        (covered, overlapped, max_mult)
    });
    let (covered, overlapped, max_mult) = slabs
        .into_iter()
        .fold((0u64, 0u64, 0u32), |acc, s| (acc.0 + s.0, acc.1 + s.1, acc.2.max(s.2)));
    let n = samples as f64;
    Ok(CoverageReport {
        window: window.clone(),
        resolution: res,
        samples,
        covered_fraction: covered as f64 / n,
        uncovered_fraction: (samples - covered) as f64 / n,
        overlap_fraction: overlapped as f64 / n,
        max_multiplicity: max_mult,
    })
}
