//! Config-driven experiments with simultaneous Padé-Faber approximants.
//!
//! An experiment fixes a geometry, a vector of test functions and a
//! multi-index `m`, runs the row `n = n_start..=n_end` and writes per-row
//! error tables, rate fits and diagnostics.

pub mod config;
pub mod output;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use padefaber::simpade::quadrature_radii;
use padefaber::{run_row_sequence, RowEnd, RowSequenceReport};

use crate::config::{parse_config, Experiment, ExperimentConfig};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "PADEFABER_OUT";
pub const DEFAULT_OUT: &str = "padefaber-out";

/// `--out`, then the config, then the environment, then the default.
pub fn resolve_out_dir(flag: Option<&Path>, config: &ExperimentConfig, env: Option<&str>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| config.output.dir.clone())
        .or_else(|| env.filter(|s| !s.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("invalid config {}", path.display()))
}

/// Human-readable description of what a run would compute.
pub fn plan(exp: &Experiment, out: &Path) -> String {
    let mut s = String::new();
    let g = exp.spec.geometry();
    let _ = writeln!(s, "geometry     {:?}", g.kind());
    let _ = writeln!(s, "components   {}", exp.spec.dim());
    let _ = writeln!(s, "m            {} (|m| = {})", exp.m, exp.m.total());
    let rows = match exp.n_end {
        RowEnd::At(end) => format!("{}..={end}", exp.n_start),
        RowEnd::FloorHits => format!("{}.. until two rows reach the error floor", exp.n_start),
    };
    let _ = writeln!(s, "rows         n = {rows}");
    let q = &exp.settings.quad;
    let radii = quadrature_radii(&exp.spec, q).unwrap_or_default();
    let _ = writeln!(s, "quadrature   {} nodes, {:?}, rho per component {:?}", q.nodes, q.precision, radii);
    match &exp.profile {
        Some(p) => {
            let _ = writeln!(s, "rho_m        {}", p.rho_m);
            let _ = writeln!(s, "threshold L  {}", p.threshold);
            for v in &p.poles {
                let _ = writeln!(s, "pole         {} (order {}, |Φ| = {})", v.location, v.order, v.level);
            }
        }
        None => {
            let _ = writeln!(s, "poles        none (no rate bounds)");
        }
    }
    for grid in &exp.grids {
        let _ = write!(s, "grid         {} ({} points, ‖Φ‖_K = {})", grid.name, grid.points.len(), grid.phi_sup);
        if let Some(p) = &exp.profile {
            let b = padefaber::theoretical_bounds(p, grid);
            let _ = write!(s, ", bounds {} / {}", b.bound_24, b.bound_25);
        }
        s.push('\n');
    }
    let _ = writeln!(s, "output       {}", out.display());
    s
}

pub fn run_experiment(exp: &Experiment) -> padefaber::Result<RowSequenceReport> {
    run_row_sequence(&exp.spec, &exp.m, exp.n_start, exp.n_end, &exp.grids, &exp.settings)
}

/// Outcome of `run`: the report, the files written and any contract violations.
pub struct RunOutcome {
    pub report: RowSequenceReport,
    pub files: Vec<PathBuf>,
    pub violations: Vec<String>,
}

pub fn run_and_write(config: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    let exp = config.build()?;
    let report = run_experiment(&exp)?;
    let files = output::write_all(out, config, &report).with_context(|| format!("writing to {}", out.display()))?;
    Ok(RunOutcome {
        violations: output::violations(&report),
        report,
        files,
    })
}

/// Re-fits the rates of every row table in `dir` and renders them as TOML.
pub fn report(dir: &Path) -> Result<String> {
    let fit = match fs::read_to_string(dir.join(output::EFFECTIVE_CONFIG)) {
        Ok(text) => parse_config(&text)?.build()?.settings.fit,
        Err(_) => padefaber::FitSettings::default(),
    };
    let mut tables: Vec<(String, PathBuf)> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let name = e.file_name().into_string().ok()?;
            let grid = name.strip_prefix("rows_")?.strip_suffix(".csv")?.to_string();
            Some((grid, e.path()))
        })
        .collect();
    if tables.is_empty() {
        anyhow::bail!("no row tables (rows_<grid>.csv) in {}", dir.display());
    }
    tables.sort();
    #[derive(serde::Serialize)]
    struct Refit {
        grid: String,
        r_q: output::FitSummary,
        r_sup: Vec<output::FitSummary>,
        r_pole: Vec<output::FitSummary>,
    }
    #[derive(serde::Serialize)]
    struct Doc {
        tables: Vec<Refit>,
    }
    let mut doc = Doc { tables: Vec::new() };
    for (grid, path) in tables {
        let series = output::read_rows(&path).with_context(|| format!("reading {}", path.display()))?;
        let fits = output::refit(&series, &fit);
        doc.tables.push(Refit {
            grid,
            r_q: (&fits.r_q).into(),
            r_sup: fits.r_sup[0].iter().map(Into::into).collect(),
            r_pole: fits.r_pole.iter().map(Into::into).collect(),
        });
    }
    Ok(toml::to_string(&doc)?)
}
