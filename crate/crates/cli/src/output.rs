//! Files written by a run: row tables, the summary and coefficient dumps.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use padefaber::analysis::RowFits;
use padefaber::{FitOutcome, FitSettings, RowRecord, RowSequenceReport};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, C};

pub const EFFECTIVE_CONFIG: &str = "effective_config.toml";
pub const SUMMARY: &str = "summary.toml";
pub const COEFFICIENTS: &str = "coefficients.csv";

/// Relative |Δ| below which the components count as dependent.
pub const DELTA_THRESHOLD: f64 = 1e-8;

pub fn rows_file(grid: &str) -> String {
    format!("rows_{grid}.csv")
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSummary {
    /// `fitted`, `below_floor` or `insufficient`.
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nth_root: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last: Option<usize>,
    pub points: usize,
}

impl From<&FitOutcome> for FitSummary {
    fn from(f: &FitOutcome) -> Self {
        match f {
            FitOutcome::Fitted(r) => Self {
                outcome: "fitted".into(),
                rate: Some(r.rate),
                nth_root: Some(r.nth_root),
                first: Some(r.first),
                last: Some(r.last),
                points: r.points,
            },
            FitOutcome::BelowFloor => Self {
                outcome: "below_floor".into(),
                rate: None,
                nth_root: None,
                first: None,
                last: None,
                points: 0,
            },
            FitOutcome::Insufficient { available } => Self {
                outcome: "insufficient".into(),
                rate: None,
                nth_root: None,
                first: None,
                last: None,
                points: *available,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleSummary {
    pub location: C,
    pub order: usize,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSummary {
    pub rho_m: f64,
    pub threshold: f64,
    pub poles: Vec<PoleSummary>,
    /// Power-basis coefficients of the normalized true denominator.
    pub q_true: Vec<C>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaSummary {
    pub det: C,
    pub scale: f64,
    pub relative: f64,
    pub eps: f64,
    pub size: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSummary {
    pub name: String,
    pub points: usize,
    pub phi_sup: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_24: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_25: Option<f64>,
    pub superlinear: bool,
    /// One fit per component.
    pub r_sup: Vec<FitSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    /// `ok` or `invariant_violation`.
    pub status: String,
    pub violations: Vec<String>,
    pub m: Vec<usize>,
    pub n_first: usize,
    pub n_last: usize,
    pub rows: usize,
    pub unique_rows: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniqueness_onset: Option<usize>,
    pub r_q: FitSummary,
    pub r_pole: Vec<FitSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<DeltaSummary>,
    pub grids: Vec<GridSummary>,
}

/// Rows that break a contract of the construction.
pub fn violations(report: &RowSequenceReport) -> Vec<String> {
    let mut out = Vec::new();
    for r in &report.records {
        if let Some(why) = &r.failure {
            out.push(format!("row n = {} failed: {why}", r.n));
        } else if !r.defect_ok {
            out.push(format!("row n = {}: defect window {:e} exceeds the tolerance", r.n, r.defect));
        }
    }
    out
}

pub fn summary(report: &RowSequenceReport) -> Summary {
    let violations = violations(report);
    let records = &report.records;
    Summary {
        status: if violations.is_empty() { "ok" } else { "invariant_violation" }.into(),
        violations,
        m: report.m.as_slice().to_vec(),
        n_first: records.first().map_or(0, |r| r.n),
        n_last: records.last().map_or(0, |r| r.n),
        rows: records.len(),
        unique_rows: records.iter().filter(|r| r.unique).count(),
        uniqueness_onset: report.uniqueness_onset,
        r_q: (&report.fits.r_q).into(),
        r_pole: report.fits.r_pole.iter().map(Into::into).collect(),
        profile: report.profile.as_ref().map(|p| ProfileSummary {
            rho_m: p.rho_m,
            threshold: p.threshold,
            poles: p
                .poles
                .iter()
                .map(|v| PoleSummary {
                    location: [v.location.re, v.location.im],
                    order: v.order,
                    level: v.level,
                })
                .collect(),
            q_true: p.q_true.coeffs().iter().map(|c| [c.re, c.im]).collect(),
        }),
        delta: report.delta.as_ref().map(|d| DeltaSummary {
            det: [d.det.re, d.det.im],
            scale: d.scale,
            relative: d.relative,
            eps: d.eps,
            size: d.size,
            degenerate: d.relative < DELTA_THRESHOLD,
        }),
        grids: report
            .grids
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let bounds = report.bounds.get(k);
                GridSummary {
                    name: g.name.clone(),
                    points: g.points.len(),
                    phi_sup: g.phi_sup,
                    bound_24: bounds.map(|b| b.bound_24),
                    bound_25: bounds.map(|b| b.bound_25),
                    superlinear: bounds.is_some_and(|b| b.superlinear),
                    r_sup: report.fits.r_sup[k].iter().map(Into::into).collect(),
                }
            })
            .collect(),
    }
}

/// Header of a row table with `poles` matched-pole columns.
pub fn rows_header(poles: usize) -> Vec<String> {
    let mut h: Vec<String> = ["n", "alpha", "sup_err", "q_coeff_err"].iter().map(|s| s.to_string()).collect();
    h.extend((1..=poles).map(|j| format!("pole_err_{j}")));
    h.extend(["sigma_min", "sigma_second", "unique"].iter().map(|s| s.to_string()));
    h
}

/// One line per `(n, α)`, components numbered from 1.
pub fn write_rows(path: &Path, records: &[RowRecord], grid: usize, poles: usize) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(rows_header(poles))?;
    for r in records {
        for (alpha, e) in r.sup_err[grid].iter().enumerate() {
            let mut line = vec![r.n.to_string(), (alpha + 1).to_string(), num(*e), r.q_coeff_err.map(num).unwrap_or_default()];
            line.extend(r.pole_err.iter().map(|d| num(*d)));
            line.extend([num(r.sigma_min), num(r.sigma_second), r.unique.to_string()]);
            w.write_record(&line)?;
        }
    }
    w.flush()
}

/// Power-basis `Q`, Faber-basis `P_α` and the residuals `[Q F_α]_k` of every row.
pub fn write_coefficients(path: &Path, records: &[RowRecord]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "series", "alpha", "k", "re", "im"])?;
    for r in records {
        let Some(a) = &r.approximant else { continue };
        for (k, c) in a.q.coeffs().iter().enumerate() {
            w.write_record([r.n.to_string(), "q".into(), String::new(), k.to_string(), num(c.re), num(c.im)])?;
        }
        for (alpha, p) in a.p.iter().enumerate() {
            for (k, c) in p.coeffs.iter().enumerate() {
                w.write_record([r.n.to_string(), "p".into(), (alpha + 1).to_string(), k.to_string(), num(c.re), num(c.im)])?;
            }
        }
        for (alpha, res) in a.residuals.iter().enumerate() {
            let first = r.n + 1 - a.m.get(alpha);
            for (i, c) in res.iter().enumerate() {
                w.write_record([
                    r.n.to_string(),
                    "residual".into(),
                    (alpha + 1).to_string(),
                    (first + i).to_string(),
                    num(c.re),
                    num(c.im),
                ])?;
            }
        }
    }
    w.flush()
}

/// Writes every output of a run into `dir` and returns the paths.
pub fn write_all(dir: &Path, config: &ExperimentConfig, report: &RowSequenceReport) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let path = dir.join(EFFECTIVE_CONFIG);
    fs::write(&path, config.to_toml())?;
    files.push(path);
    let poles = report.profile.as_ref().map_or(0, |p| p.poles.len());
    for (k, g) in report.grids.iter().enumerate() {
        let path = dir.join(rows_file(&g.name));
        write_rows(&path, &report.records, k, poles)?;
        files.push(path);
    }
    if config.output.coefficients {
        let path = dir.join(COEFFICIENTS);
        write_coefficients(&path, &report.records)?;
        files.push(path);
    }
    let path = dir.join(SUMMARY);
    let text = toml::to_string(&summary(report)).map_err(io::Error::other)?;
    fs::write(&path, text)?;
    files.push(path);
    Ok(files)
}

/// Error series recovered from a row table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TableSeries {
    /// `sup_err[α]`
    pub sup_err: Vec<Vec<(usize, f64)>>,
    pub q_coeff_err: Vec<(usize, f64)>,
    /// `pole_err[j]`
    pub pole_err: Vec<Vec<(usize, f64)>>,
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// Reads a row table back into per-series `(n, e_n)` lists.
pub fn read_rows(path: &Path) -> Result<TableSeries, TableError> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    let col = |name: &str| header.iter().position(|h| h == name);
    let malformed = |line: usize, message: String| TableError::Malformed { line, message };
    let (Some(n_col), Some(a_col), Some(s_col), Some(q_col)) = (col("n"), col("alpha"), col("sup_err"), col("q_coeff_err")) else {
        return Err(malformed(1, "missing one of the columns n, alpha, sup_err, q_coeff_err".into()));
    };
    let pole_cols: Vec<usize> = (1..).map_while(|j| col(&format!("pole_err_{j}"))).collect();
    let mut out = TableSeries {
        pole_err: vec![Vec::new(); pole_cols.len()],
        ..TableSeries::default()
    };
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let int = |c: usize| rec[c].parse::<usize>().map_err(|e| malformed(line, format!("{}: {e}", &header[c])));
        let float = |c: usize| rec[c].parse::<f64>().map_err(|e| malformed(line, format!("{}: {e}", &header[c])));
        let n = int(n_col)?;
        let alpha = int(a_col)?;
        if alpha == 0 {
            return Err(malformed(line, "components are numbered from 1".into()));
        }
        if out.sup_err.len() < alpha {
            out.sup_err.resize(alpha, Vec::new());
        }
        out.sup_err[alpha - 1].push((n, float(s_col)?));
        // per-row columns repeat on every component line
        if alpha == 1 {
            if !rec[q_col].is_empty() {
                out.q_coeff_err.push((n, float(q_col)?));
            }
            for (j, &c) in pole_cols.iter().enumerate() {
                out.pole_err[j].push((n, float(c)?));
            }
        }
    }
    Ok(out)
}

/// Rate fits of a row table, in the layout of a run's fits for one grid.
pub fn refit(series: &TableSeries, fit: &FitSettings) -> RowFits {
    RowFits {
        r_q: padefaber::classify_fit(&series.q_coeff_err, fit),
        r_sup: vec![series.sup_err.iter().map(|s| padefaber::classify_fit(s, fit)).collect()],
        r_pole: series.pole_err.iter().map(|s| padefaber::classify_fit(s, fit)).collect(),
    }
}
