use std::path::Path;

use anyhow::{bail, Context, Result};
use polya_core::extension::{extend_field, extension_trials, trial_field};
use polya_core::fem::convergence_study;
use polya_core::geometry::{AxisBox, Domain, SampleGrid};
use polya_core::inequality::{
    check_faber_krahn, check_friedlander, check_li_yau_kroger, check_polya, check_weyl_ratio, counting_function,
    InequalityReport, PolyaSide,
};
use polya_core::prover::proof_report;
use polya_core::solve::{extrapolated_spectrum_below, has_exact_spectrum, smallest, spectrum_below, SolveOptions};
use polya_core::spectra::{BoundaryCondition, Method, Spectrum};
use polya_core::tiling::{generate_tiling, validate_tiling_with, CatalogShape, Tiling};
use polya_core::Execution;
use serde::Serialize;

use crate::grid::{parse_lambda_spec, parse_list};
use crate::output::{provenance, spectrum_provenance, Envelope, Outputs};
use crate::{CheckKind, Command, ExtensionCommand, SolverArgs, TileCommand};

fn load_domain(path: &Path) -> Result<Domain> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read domain file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse domain file {}", path.display()))
}

fn opts(s: SolverArgs) -> Result<SolveOptions> {
    if !(s.tol > 0.0) {
        bail!("--tol must be positive");
    }
    Ok(SolveOptions {
        refine: s.refine,
        tol: s.tol,
    })
}

/// Upper end of a λ grid, nudged so the spectrum is complete there.
fn reach(grid: &[f64]) -> f64 {
    grid.iter().copied().fold(0.0, f64::max) * (1.0 + 1e-12) + 1e-12
}

fn emit<T: Serialize>(
    out: Option<&Path>,
    command: &str,
    pass: bool,
    provenance: Vec<(&str, String)>,
    seed: Option<u64>,
    report: &T,
    extra: Outputs,
) -> Result<bool> {
    let mut files = extra;
    if let Some(path) = out {
        files.add_json(
            path,
            &Envelope {
                command,
                pass,
                provenance: provenance.into_iter().collect(),
                seed,
                report,
            },
        )?;
    }
    files.write_all()?;
    Ok(pass)
}

fn summarize(r: &InequalityReport) {
    println!(
        "{}: {} ({} records, {} violations, {} equality cases{})",
        r.inequality,
        if r.pass { "pass" } else { "FAIL" },
        r.records.len(),
        r.violations,
        r.equality_cases,
        if r.discretization_caveat { ", discretization caveat" } else { "" }
    );
    if let Some(m) = r.worst_margin() {
        println!("  worst margin {m:.6}");
    }
}

fn report_check(out: Option<&Path>, name: &str, spectra: &[&Spectrum], r: &InequalityReport) -> Result<bool> {
    summarize(r);
    let mut prov: Vec<(&str, String)> = match spectra {
        [one] => vec![("counts", spectrum_provenance(one))],
        [d, n] => vec![("dirichlet", spectrum_provenance(d)), ("neumann", spectrum_provenance(n))],
        _ => vec![],
    };
    prov.push(("rhs", "arithmetic".into()));
    emit(out, name, r.pass, prov, None, r, Outputs::default())
}

/// Dirichlet-side upper bounds use extrapolated values when no closed form exists.
fn dirichlet_spectrum(d: &Domain, lambda_max: f64, o: SolveOptions) -> Result<Spectrum> {
    if has_exact_spectrum(d) {
        Ok(spectrum_below(d, BoundaryCondition::Dirichlet, lambda_max, o)?)
    } else {
        Ok(extrapolated_spectrum_below(d, BoundaryCondition::Dirichlet, lambda_max, o)?)
    }
}

fn load_tiling(source: &crate::TileSource) -> Result<Tiling> {
    match (&source.tiling, &source.shape) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read tiling {}", path.display()))?;
            let t: Tiling = serde_json::from_str(&text).with_context(|| format!("cannot parse tiling {}", path.display()))?;
            t.check_structure()?;
            Ok(t)
        }
        (None, Some(shape)) => {
            let shape: CatalogShape = shape.parse()?;
            Ok(generate_tiling(shape, source.scale, &AxisBox::centered_cube(source.window, 2)?)?)
        }
        (None, None) => bail!("give --tiling FILE or --shape NAME"),
    }
}

#[derive(Serialize)]
struct SpectrumOut<'a> {
    domain_measure: f64,
    dim: usize,
    spectrum: &'a Spectrum,
}

#[derive(Serialize)]
struct CountRow {
    lambda: f64,
    count: usize,
    bracket: Option<(usize, usize)>,
}

pub fn dispatch(command: Command, exec: Execution) -> Result<bool> {
    match command {
        Command::Spectrum(a) => {
            let d = load_domain(&a.domain)?;
            let o = opts(a.solver)?;
            let bc = a.bc.into();
            let s = match (a.k, a.lambda_max) {
                (Some(k), None) => smallest(&d, bc, k, o)?,
                (None, Some(l)) => spectrum_below(&d, bc, l, o)?,
                _ => bail!("give exactly one of -k/--count or --lambda-max"),
            };
            println!("{} eigenvalues ({}):", s.len(), spectrum_provenance(&s));
            for (i, (v, e)) in s.values().iter().zip(s.errors()).enumerate() {
                println!("  {:>4}  {v:.10}  ± {e:.2e}", i + 1);
            }
            let mut files = Outputs::default();
            match a.out.as_deref() {
                Some(p) if p.extension().is_some_and(|e| e == "csv") => {
                    let mut csv = String::from("index,eigenvalue,error_bound\n");
                    for (i, (v, e)) in s.values().iter().zip(s.errors()).enumerate() {
                        csv.push_str(&format!("{},{v},{e}\n", i + 1));
                    }
                    files.add(p, csv.into_bytes());
                    emit(None, "spectrum", true, vec![], None, &(), files)
                }
                out => emit(
                    out,
                    "spectrum",
                    true,
                    vec![("values", spectrum_provenance(&s))],
                    None,
                    &SpectrumOut {
                        domain_measure: d.measure(),
                        dim: d.dim(),
                        spectrum: &s,
                    },
                    files,
                ),
            }
        }
        Command::Count(a) => {
            let d = load_domain(&a.domain)?;
            let grid = parse_lambda_spec(&a.lambda)?;
            let s = spectrum_below(&d, a.bc.into(), reach(&grid), opts(a.solver)?)?;
            let rows: Vec<CountRow> = grid
                .iter()
                .map(|&l| {
                    let c = counting_function(&s, l);
                    CountRow {
                        lambda: l,
                        count: c.count,
                        bracket: c.bracket,
                    }
                })
                .collect();
            for r in &rows {
                match r.bracket {
                    Some((lo, hi)) => println!("N({}) = {} [{lo}, {hi}]", r.lambda, r.count),
                    None => println!("N({}) = {}", r.lambda, r.count),
                }
            }
            emit(a.out.as_deref(), "count", true, vec![("counts", spectrum_provenance(&s))], None, &rows, Outputs::default())
        }
        Command::Check { kind } => check(kind, exec),
        Command::Tile { action } => match action {
            TileCommand::Generate { shape, scale, window, out } => {
                let shape: CatalogShape = shape.parse()?;
                let t = generate_tiling(shape, scale, &AxisBox::centered_cube(window, 2)?)?;
                println!("{}: {} copies meet the window [-{window}, {window}]^2", shape.name(), t.placements.len());
                let mut files = Outputs::default();
                if let Some(p) = out {
                    files.add_json(&p, &t)?;
                }
                files.write_all()?;
                Ok(true)
            }
            TileCommand::Validate { source, resolution, out } => {
                let t = load_tiling(&source)?;
                let w = t.window.clone();
                let v = validate_tiling_with(&t, &w, SampleGrid::centered(resolution), exec)?;
                println!(
                    "tiling validation: {} (covered {:.6}, overlap {:.6} ≤ {:.6}, uncovered {:.6} ≤ {:.6})",
                    if v.pass { "pass" } else { "FAIL" },
                    v.coverage.covered_fraction,
                    v.coverage.overlap_fraction,
                    v.overlap_threshold,
                    v.coverage.uncovered_fraction,
                    v.uncovered_threshold
                );
                emit(out.as_deref(), "tile validate", v.pass, vec![("coverage", "sampled".into())], None, &v, Outputs::default())
            }
        },
        Command::Extension { action } => match action {
            ExtensionCommand::Check { dim, l, r, h, trials, seed, out, dump_field } => {
                let t = extension_trials(dim, l, r, h, trials, seed, exec)?;
                println!(
                    "extension bound 2^{dim}: {} over {trials} fields (max ratio {:.6})",
                    if t.pass { "pass" } else { "FAIL" },
                    t.max_ratio
                );
                let mut files = Outputs::default();
                if let Some(prefix) = dump_field {
                    let (f, holes) = trial_field(dim, l, r, h, seed, 0)?;
                    let e = extend_field(&f, l, r, &holes)?;
                    files.add_json(&prefix.with_extension("json"), &e.header())?;
                    files.add(&prefix.with_extension("bin"), e.to_le_bytes());
                }
                emit(out.as_deref(), "extension check", t.pass, vec![("norms", "arithmetic".into())], Some(seed), &t, files)
            }
        },
        Command::Prove(a) => {
            let t = if a.tiling.ends_with(".json") {
                let text = std::fs::read_to_string(&a.tiling).with_context(|| format!("cannot read tiling {}", a.tiling))?;
                serde_json::from_str::<Tiling>(&text).with_context(|| format!("cannot parse tiling {}", a.tiling))?
            } else {
                let shape: CatalogShape = a.tiling.parse()?;
                generate_tiling(shape, a.scale, &AxisBox::centered_cube(3.0 * a.scale, 2)?)?
            };
            let ls: Vec<f64> = parse_list(&a.l, "half-width")?;
            let r = proof_report(&t, a.lambda, &ls, opts(a.solver)?, exec)?;
            println!(
                "proof replay λ = {}: N_N = {}, N_N(2^d(λ+1)) = {}, Weyl term {:.6}{}",
                r.lambda,
                r.n_self,
                r.n_inflated,
                r.weyl_term,
                if r.fem_caveat { " (finite-element counts)" } else { "" }
            );
            for row in &r.rows {
                println!(
                    "  L = {:<8} defect {:.6}  bound {:.6}{}",
                    row.bound.l,
                    row.bound.defect,
                    row.bound.lower_bound,
                    match &row.chain {
                        Some(c) => format!(
                            "  #I = {} #K = {} chain {}",
                            c.bounds.count_inner,
                            c.bounds.count_boundary,
                            if c.pass { "ok" } else { "FAIL" }
                        ),
                        None => String::new(),
                    }
                );
            }
            println!("verdict: {}", if r.pass { "pass" } else { "FAIL" });
            let mut files = Outputs::default();
            if let Some(p) = &a.plot {
                files.add(p, r.to_csv().into_bytes());
            }
            let counts = match r.counts_method {
                Method::Fem { level } => format!("fem(level={level}, certified lower counts)"),
                m => provenance(m, 0.0),
            };
            emit(
                a.out.as_deref(),
                "prove",
                r.pass,
                vec![("counts", counts), ("defect", "arithmetic".into()), ("lower_bound", "arithmetic".into())],
                None,
                &r,
                files,
            )
        }
        Command::Convergence(a) => {
            let d = load_domain(&a.domain)?;
            let poly = d
                .as_polygon()
                .context("convergence studies need a polygonal domain")?;
            let levels: Vec<u32> = parse_list(&a.levels, "refinement level")?;
            let st = convergence_study(&poly, a.bc.into(), a.k, &levels, exec)?;
            print!("{}", st.to_csv());
            for (j, (x, p)) in st.extrapolated.iter().zip(&st.observed_order).enumerate() {
                match p {
                    Some(p) => println!("eig_{}: extrapolated {x:.8} (observed order {p:.3})", j + 1),
                    None => println!("eig_{}: extrapolated {x:.8}", j + 1),
                }
            }
            let mut files = Outputs::default();
            if let Some(p) = &a.csv {
                files.add(p, st.to_csv().into_bytes());
            }
            emit(a.out.as_deref(), "convergence", true, vec![("values", "fem".into()), ("extrapolated", "arithmetic".into())], None, &st, files)
        }
        Command::Run { .. } => bail!("nested `run` is not supported"),
    }
}

fn check(kind: CheckKind, exec: Execution) -> Result<bool> {
    match kind {
        CheckKind::PolyaNeumann(a) => {
            let d = load_domain(&a.domain)?;
            let grid = parse_lambda_spec(&a.lambda)?;
            let s = spectrum_below(&d, BoundaryCondition::Neumann, reach(&grid), opts(a.solver)?)?;
            let r = check_polya(&s, PolyaSide::NeumannLower, &grid, exec)?;
            report_check(a.out.as_deref(), "check polya-neumann", &[&s], &r)
        }
        CheckKind::Kroger(a) => {
            let d = load_domain(&a.domain)?;
            let grid = parse_lambda_spec(&a.lambda)?;
            let s = spectrum_below(&d, BoundaryCondition::Neumann, reach(&grid), opts(a.solver)?)?;
            let r = check_li_yau_kroger(&s, &grid, exec)?;
            report_check(a.out.as_deref(), "check kroger", &[&s], &r)
        }
        CheckKind::PolyaDirichlet(a) => {
            let d = load_domain(&a.domain)?;
            let grid = parse_lambda_spec(&a.lambda)?;
            let s = dirichlet_spectrum(&d, reach(&grid), opts(a.solver)?)?;
            let r = check_polya(&s, PolyaSide::DirichletUpper, &grid, exec)?;
            report_check(a.out.as_deref(), "check polya-dirichlet", &[&s], &r)
        }
        CheckKind::LiYau(a) => {
            let d = load_domain(&a.domain)?;
            let grid = parse_lambda_spec(&a.lambda)?;
            let s = dirichlet_spectrum(&d, reach(&grid), opts(a.solver)?)?;
            let r = check_li_yau_kroger(&s, &grid, exec)?;
            report_check(a.out.as_deref(), "check li-yau", &[&s], &r)
        }
        CheckKind::Friedlander(a) => {
            let d = load_domain(&a.domain)?;
            let o = opts(a.solver)?;
            let dir = smallest(&d, BoundaryCondition::Dirichlet, a.k_max, o)?;
            let neu = smallest(&d, BoundaryCondition::Neumann, a.k_max + 1, o)?;
            let r = check_friedlander(&dir, &neu, a.k_max)?;
            report_check(a.out.as_deref(), "check friedlander", &[&dir, &neu], &r)
        }
        CheckKind::FaberKrahn(a) => {
            let d = load_domain(&a.domain)?;
            let o = opts(a.solver)?;
            let first = smallest(&d, BoundaryCondition::Dirichlet, 1, o)?;
            let s = if first.method.is_exact() {
                first
            } else {
                let top = first.values()[0] + first.errors()[0];
                dirichlet_spectrum(&d, top * (1.0 + 1e-9), o)?
            };
            let r = check_faber_krahn(&s, d.measure())?;
            report_check(a.out.as_deref(), "check faber-krahn", &[&s], &r)
        }
        CheckKind::Weyl(a) => {
            let d = load_domain(&a.domain)?;
            let grid = parse_lambda_spec(&a.lambda)?;
            let bc: BoundaryCondition = a.bc.into();
            let band = match &a.band {
                Some(b) => {
                    let v: Vec<f64> = parse_list(b, "band limit")?;
                    if v.len() != 2 || v[0] > v[1] {
                        bail!("--band must be lo,hi with lo ≤ hi");
                    }
                    (v[0], v[1])
                }
                None => match bc {
                    BoundaryCondition::Neumann => (1.0, 1.05),
                    BoundaryCondition::Dirichlet => (0.95, 1.0),
                },
            };
            if !has_exact_spectrum(&d) {
                bail!("Weyl ratios need a domain with a closed-form spectrum");
            }
            let s = spectrum_below(&d, bc, reach(&grid), SolveOptions::default())?;
            let t = check_weyl_ratio(&s, &grid, band)?;
            for row in &t.rows {
                println!("λ = {:<12} N = {:<8} W = {:<14.6} ratio {:.6}", row.lambda, row.count, row.weyl_term, row.ratio);
            }
            println!("weyl ratio in [{}, {}]: {}", band.0, band.1, if t.pass { "pass" } else { "FAIL" });
            emit(
                a.out.as_deref(),
                "check weyl",
                t.pass,
                vec![("counts", spectrum_provenance(&s)), ("weyl_term", "arithmetic".into())],
                None,
                &t,
                Outputs::default(),
            )
        }
    }
}
