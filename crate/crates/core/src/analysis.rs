//! Row sequences `n = n₀, n₀ + 1, …` with fixed `m`: error decay, rate fits,
//! pole matching and the polewise-independence determinant.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::faber::least_squares_slope;
use crate::function::{ComplexFunction, VectorFunctionSpec};
use crate::geometry::{Geometry, GeometryKind};
use crate::polynomial::ComplexPolynomial;
use crate::simpade::{
    pole_profile, simultaneous_pade, ApproximantResult, MultiIndex, PoleProfile, QuadratureSettings,
    Tolerances,
};

pub const DEFAULT_GRID_POINTS: usize = 256;
/// Upper end of a row whose length is chosen by the floor-hit rule.
pub const MAX_ROW_END: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub enum GridKind {
    /// ∂E; for a segment, the segment itself.
    Boundary,
    /// Level curves `|Φ| = r` for `rings` radii evenly spaced in `[1, r_max]`.
    LevelBand { r_max: f64, rings: usize },
    Disk { center: Complex64, radius: f64 },
    AnnulusSector {
        center: Complex64,
        r_inner: f64,
        r_outer: f64,
        theta_start: f64,
        theta_end: f64,
    },
    Rectangle { lower_left: Complex64, upper_right: Complex64 },
    /// Uniform random points in a disk.
    RandomDisk { center: Complex64, radius: f64, seed: u64 },
}

/// A finite sample of a compact set K on which sup-norms are taken.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactGrid {
    pub name: String,
    pub kind: GridKind,
    pub points: Vec<Complex64>,
    /// `max(1, max_z |Φ(z)|)` over the samples.
    pub phi_sup: f64,
}

impl CompactGrid {
    pub fn new(name: impl Into<String>, kind: GridKind, count: usize, g: &Geometry) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("a grid needs at least one point".into()));
        }
        let points = match &kind {
            GridKind::Boundary => boundary_points(g, count),
            GridKind::LevelBand { r_max, rings } => {
                if !(*r_max >= 1.0 && r_max.is_finite()) || *rings == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "level band needs r_max ≥ 1 and at least one ring, got r_max = {r_max}, rings = {rings}"
                    )));
                }
                let per_ring = count.div_ceil(*rings);
                let mut pts = Vec::with_capacity(per_ring * rings);
                for i in 0..*rings {
                    let r = if *rings == 1 {
                        *r_max
                    } else {
                        1.0 + (r_max - 1.0) * i as f64 / (*rings - 1) as f64
                    };
                    for s in 0..per_ring {
                        // nudge the innermost ring off E so Φ stays defined
                        let w = Complex64::from_polar(r.max(1.0 + 1e-12), std::f64::consts::TAU * s as f64 / per_ring as f64);
                        pts.push(g.psi_in(w));
                    }
                }
                pts
            }
            GridKind::Disk { center, radius } => {
                positive(*radius, "disk radius")?;
                let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
                (0..count)
                    .map(|k| {
                        let r = radius * ((k as f64 + 0.5) / count as f64).sqrt();
                        center + Complex64::from_polar(r, golden * k as f64)
                    })
                    .collect()
            }
            GridKind::AnnulusSector {
                center,
                r_inner,
                r_outer,
                theta_start,
                theta_end,
            } => {
                if !(*r_inner >= 0.0 && r_outer >= r_inner && theta_end >= theta_start) {
                    return Err(Error::InvalidArgument(
                        "annulus sector needs 0 ≤ r_inner ≤ r_outer and theta_start ≤ theta_end".into(),
                    ));
                }
                let (nr, na) = split(count);
                let mut pts = Vec::with_capacity(nr * na);
                for i in 0..nr {
                    let r = lerp(*r_inner, *r_outer, i, nr);
                    for j in 0..na {
                        pts.push(center + Complex64::from_polar(r, lerp(*theta_start, *theta_end, j, na)));
                    }
                }
                pts
            }
            GridKind::Rectangle {
                lower_left,
                upper_right,
            } => {
                if !(upper_right.re >= lower_left.re && upper_right.im >= lower_left.im) {
                    return Err(Error::InvalidArgument("rectangle corners are out of order".into()));
                }
                let (nx, ny) = split(count);
                let mut pts = Vec::with_capacity(nx * ny);
                for i in 0..nx {
                    for j in 0..ny {
                        pts.push(Complex64::new(
                            lerp(lower_left.re, upper_right.re, i, nx),
                            lerp(lower_left.im, upper_right.im, j, ny),
                        ));
                    }
                }
                pts
            }
            GridKind::RandomDisk { center, radius, seed } => {
                positive(*radius, "disk radius")?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..count)
                    .map(|_| {
                        let r = radius * rng.random::<f64>().sqrt();
                        let theta = std::f64::consts::TAU * rng.random::<f64>();
                        center + Complex64::from_polar(r, theta)
                    })
                    .collect()
            }
        };
        let phi_sup = points.iter().map(|z| g.level(*z)).fold(1.0, f64::max);
        Ok(Self {
            name: name.into(),
            kind,
            points,
            phi_sup,
        })
    }

    /// The default grid: 256 points on E.
    pub fn boundary(g: &Geometry) -> Self {
        Self::new("E", GridKind::Boundary, DEFAULT_GRID_POINTS, g).expect("boundary grid is valid")
    }

    /// Checks that every sample lies in `D_{ρ_m}` and away from the poles.
    pub fn validate(&self, profile: &PoleProfile, g: &Geometry) -> Result<()> {
        for z in &self.points {
            let level = g.level(*z);
            if !(level < profile.rho_m) {
                return Err(Error::InvalidArgument(format!(
                    "grid '{}': point {z} has |Φ| = {level} ≥ ρ_m = {}",
                    self.name, profile.rho_m
                )));
            }
            for p in &profile.poles {
                let gap = match (g.phi(*z), g.phi(p.location)) {
                    (Ok(a), Ok(b)) => (a - b).norm(),
                    _ => p.level - level,
                };
                if gap < 1e-3 {
                    return Err(Error::InvalidArgument(format!(
                        "grid '{}': point {z} is within 1e-3 of the pole {} in the Φ-plane",
                        self.name, p.location
                    )));
                }
            }
        }
        Ok(())
    }
}

fn boundary_points(g: &Geometry, count: usize) -> Vec<Complex64> {
    match g.kind() {
        GeometryKind::Segment { .. } => {
            if count == 1 {
                return vec![g.center()];
            }
            (0..count)
                .map(|s| {
                    let theta = std::f64::consts::PI * s as f64 / (count - 1) as f64;
                    g.psi_in(Complex64::from_polar(1.0, theta))
                })
                .collect()
        }
        _ => (0..count)
            .map(|s| g.psi_in(Complex64::from_polar(1.0, std::f64::consts::TAU * s as f64 / count as f64)))
            .collect(),
    }
}

fn positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} must be positive, got {x}")))
    }
}

fn split(count: usize) -> (usize, usize) {
    let a = (count as f64).sqrt().ceil() as usize;
    (a, count.div_ceil(a))
}

fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if n <= 1 {
        a
    } else {
        a + (b - a) * i as f64 / (n - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// `exp` of the least-squares slope of `ln e_n` against `n`.
    pub rate: f64,
    /// `max e_n^{1/n}` over the window.
    pub nth_root: f64,
    pub first: usize,
    pub last: usize,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitOutcome {
    Fitted(RateFit),
    /// Every error is already below the floor: the sequence is exact to
    /// working precision and no rate can be measured.
    BelowFloor,
    Insufficient { available: usize },
}

impl FitOutcome {
    pub fn rate(&self) -> Option<f64> {
        match self {
            FitOutcome::Fitted(f) => Some(f.rate),
            _ => None,
        }
    }

    /// Whether the fitted rate (if any) is at most `bound`.
    pub fn conforms(&self, bound: f64) -> bool {
        match self {
            FitOutcome::Fitted(f) => f.rate <= bound,
            FitOutcome::BelowFloor => true,
            FitOutcome::Insufficient { .. } => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitSettings {
    pub floor: f64,
    pub cap: f64,
    pub min_points: usize,
}

impl Default for FitSettings {
    fn default() -> Self {
        Self {
            floor: 1e-12,
            cap: 1e-1,
            min_points: 5,
        }
    }
}

/// Geometric rate of `errors` (pairs `(n, e_n)`) over the entries in `[floor, cap]`.
pub fn fit_rate(errors: &[(usize, f64)], floor: f64, cap: f64) -> Result<RateFit> {
    fit_rate_with(errors, &FitSettings { floor, cap, min_points: 5 })
}

pub fn fit_rate_with(errors: &[(usize, f64)], settings: &FitSettings) -> Result<RateFit> {
    let window: Vec<(usize, f64)> = errors
        .iter()
        .copied()
        .filter(|&(_, e)| e.is_finite() && e >= settings.floor && e <= settings.cap && e > 0.0)
        .collect();
    if window.len() < settings.min_points.max(2) {
        return Err(Error::InsufficientData {
            available: window.len(),
            required: settings.min_points.max(2),
        });
    }
    let points: Vec<(f64, f64)> = window.iter().map(|&(n, e)| (n as f64, e.ln())).collect();
    let nth_root = window
        .iter()
        .filter(|&&(n, _)| n > 0)
        .map(|&(n, e)| e.powf(1.0 / n as f64))
        .fold(0.0, f64::max);
    Ok(RateFit {
        rate: least_squares_slope(&points).exp(),
        nth_root,
        first: window[0].0,
        last: window[window.len() - 1].0,
        points: window.len(),
    })
}

/// Like [`fit_rate_with`], separating "already exact" from "not enough data".
pub fn classify_fit(errors: &[(usize, f64)], settings: &FitSettings) -> FitOutcome {
    let finite: Vec<f64> = errors.iter().map(|e| e.1).filter(|e| e.is_finite()).collect();
    if !finite.is_empty() && finite.len() == errors.len() && finite.iter().all(|&e| e < settings.floor) {
        return FitOutcome::BelowFloor;
    }
    match fit_rate_with(errors, settings) {
        Ok(fit) => FitOutcome::Fitted(fit),
        Err(Error::InsufficientData { available, .. }) => FitOutcome::Insufficient { available },
        Err(_) => FitOutcome::Insufficient { available: 0 },
    }
}

const MAX_MATCHED: usize = 8;

/// Distance from each inside pole to the roots assigned to it by the
/// minimum-total-distance matching; `∞` where a root is missing.
pub fn match_poles(roots: &[Complex64], profile: &PoleProfile) -> Result<Vec<f64>> {
    let slots: Vec<usize> = profile
        .poles
        .iter()
        .enumerate()
        .flat_map(|(j, p)| std::iter::repeat_n(j, p.order))
        .collect();
    let size = slots.len().max(roots.len());
    if size > MAX_MATCHED {
        return Err(Error::TooManyPoles(size));
    }
    // candidate[i] is the root assigned to slot i, None for a missing root
    let mut candidates: Vec<Option<usize>> = (0..size).map(|i| (i < roots.len()).then_some(i)).collect();
    let mut best: Option<(f64, Vec<Option<usize>>)> = None;
    permute(&mut candidates, 0, &mut |perm| {
        let cost: f64 = slots
            .iter()
            .zip(perm)
            .filter_map(|(&j, r)| r.map(|r| (roots[r] - profile.poles[j].location).norm()))
            .sum();
        if best.as_ref().is_none_or(|b| cost < b.0) {
            best = Some((cost, perm.to_vec()));
        }
    });
    let mut out = vec![0.0f64; profile.poles.len()];
    if let Some((_, perm)) = best {
        for (&j, r) in slots.iter().zip(&perm) {
            let d = r.map_or(f64::INFINITY, |r| (roots[r] - profile.poles[j].location).norm());
            out[j] = out[j].max(d);
        }
    }
    Ok(out)
}

fn permute<T: Clone>(items: &mut [T], k: usize, visit: &mut impl FnMut(&[T])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaReport {
    pub det: Complex64,
    /// Product of the row norms, an upper bound for `|det|`.
    pub scale: f64,
    /// `|det| / scale`, in `[0, 1]`.
    pub relative: f64,
    pub eps: f64,
    pub size: usize,
}

const CAUCHY_NODES: usize = 128;

/// Default circle radius: a quarter of the smallest gap between poles, and at
/// most half the distance from an inside pole to E.
pub fn default_delta_radius(profile: &PoleProfile, g: &Geometry) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in profile.all_poles.iter().enumerate() {
        for b in &profile.all_poles[i + 1..] {
            gap = gap.min((a.location - b.location).norm());
        }
    }
    let to_set = profile
        .poles
        .iter()
        .map(|p| g.distance_to_set(p.location))
        .fold(f64::INFINITY, f64::min);
    (gap / 4.0).min(to_set / 2.0)
}

/// `det Δ` with rows `(α, s)`, columns `(j, t)` and entries
/// `d^t/dz^t [(z − λ_j)^{τ_j} F_α(z) Φ(z)^s]` at `z = λ_j`.
///
/// When the inside poles have total multiplicity below `|m|` the missing
/// columns are zero and so is the determinant.
pub fn polewise_independence_delta(
    spec: &VectorFunctionSpec,
    m: &MultiIndex,
    profile: &PoleProfile,
    eps: Option<f64>,
) -> Result<DeltaReport> {
    let g = spec.geometry();
    let eps = match eps {
        Some(e) => {
            check_circles(e, profile, g)?;
            e
        }
        None => default_delta_radius(profile, g),
    };
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("Cauchy circle radius must be positive, got {eps}")));
    }
    let size = m.total();
    let mut delta = DMatrix::<Complex64>::zeros(size, size);
    let mut row = 0;
    for alpha in 0..m.dim() {
        let f = spec.component(alpha);
        for s in 0..m.get(alpha) {
            let mut col = 0;
            for p in &profile.poles {
                for t in 0..p.order {
                    if col < size {
                        delta[(row, col)] = cauchy_derivative(p.location, p.order, t, eps, |z| {
                            Ok(f.eval(z) * g.phi(z)?.powu(s as u32))
                        })?;
                    }
                    col += 1;
                }
            }
            row += 1;
        }
    }
    let scale: f64 = delta.row_iter().map(|r| r.norm()).product();
    let det = delta.determinant();
    let relative = if scale > 0.0 { det.norm() / scale } else { 0.0 };
    Ok(DeltaReport {
        det,
        scale,
        relative,
        eps,
        size,
    })
}

/// `t!/(2πi) ∮ (z − λ)^{τ−t−1} h(z) dz` on `|z − λ| = eps`.
fn cauchy_derivative(
    lambda: Complex64,
    tau: usize,
    t: usize,
    eps: f64,
    h: impl Fn(Complex64) -> Result<Complex64>,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..CAUCHY_NODES {
        let e = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / CAUCHY_NODES as f64);
        let dz = e * eps;
        let g = dz.powu(tau as u32) * h(lambda + dz)?;
        acc += g * e.powu(t as u32).conj();
    }
    let factorial: f64 = (1..=t).map(|x| x as f64).product();
    Ok(acc / CAUCHY_NODES as f64 * factorial / eps.powi(t as i32))
}

fn check_circles(eps: f64, profile: &PoleProfile, g: &Geometry) -> Result<()> {
    for a in &profile.poles {
        if g.distance_to_set(a.location) <= eps {
            return Err(Error::InvalidArgument(format!(
                "Cauchy circle of radius {eps} around {} meets E",
                a.location
            )));
        }
        for b in &profile.all_poles {
            if a.location == b.location {
                continue;
            }
            // two circles must not meet; a circle must not reach another singularity
            let circled = profile.poles.iter().any(|p| p.location == b.location);
            let limit = if circled { 2.0 * eps } else { eps };
            if (a.location - b.location).norm() <= limit {
                return Err(Error::OverlappingCircles {
                    eps,
                    a: a.location,
                    b: b.location,
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoreticalBounds {
    /// `‖Φ‖_K / ρ_m`
    pub bound_24: f64,
    /// `max_j |Φ(λ_j)| / ρ_m`
    pub bound_25: f64,
    /// `ρ_m = ∞`: convergence is faster than any geometric rate and both bounds are 0.
    pub superlinear: bool,
}

pub fn theoretical_bounds(profile: &PoleProfile, grid: &CompactGrid) -> TheoreticalBounds {
    if !profile.rho_m.is_finite() {
        return TheoreticalBounds {
            bound_24: 0.0,
            bound_25: 0.0,
            superlinear: true,
        };
    }
    TheoreticalBounds {
        bound_24: grid.phi_sup / profile.rho_m,
        bound_25: profile.max_level().unwrap_or(1.0) / profile.rho_m,
        superlinear: false,
    }
}

/// Where a row sequence ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowEnd {
    At(usize),
    /// Stop after two consecutive rows whose errors are all below the fit floor.
    FloorHits,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowRecord {
    pub n: usize,
    /// `sup_err[grid][α] = max_K |F_α − R_{n,m,α}|`.
    pub sup_err: Vec<Vec<f64>>,
    /// `max_i |coeff_i(Q_n − Q_true)|`.
    pub q_coeff_err: Option<f64>,
    /// Matched root distance per inside pole.
    pub pole_err: Vec<f64>,
    pub sigma_min: f64,
    pub sigma_second: f64,
    pub unique: bool,
    pub defect_ok: bool,
    /// Largest `|[Q F_α]_k|` over the defect windows.
    pub defect: f64,
    /// Set when this row could not be computed.
    pub failure: Option<String>,
    pub approximant: Option<ApproximantResult>,
}

impl RowRecord {
    fn failed(n: usize, grids: usize, d: usize, poles: usize, why: String) -> Self {
        Self {
            n,
            sup_err: vec![vec![f64::NAN; d]; grids],
            q_coeff_err: None,
            pole_err: vec![f64::NAN; poles],
            sigma_min: f64::NAN,
            sigma_second: f64::NAN,
            unique: false,
            defect_ok: false,
            defect: f64::NAN,
            failure: Some(why),
            approximant: None,
        }
    }

    fn below_floor(&self, floor: f64) -> bool {
        self.failure.is_none()
            && self.sup_err.iter().flatten().all(|e| *e < floor)
            && self.q_coeff_err.is_none_or(|e| e < floor)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowFits {
    pub r_q: FitOutcome,
    /// `r_sup[grid][α]`
    pub r_sup: Vec<Vec<FitOutcome>>,
    pub r_pole: Vec<FitOutcome>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowSequenceReport {
    pub m: MultiIndex,
    pub profile: Option<PoleProfile>,
    pub grids: Vec<CompactGrid>,
    pub records: Vec<RowRecord>,
    pub fits: RowFits,
    /// One entry per grid.
    pub bounds: Vec<TheoreticalBounds>,
    pub delta: Option<DeltaReport>,
    /// First n after which every row has a unique solution.
    pub uniqueness_onset: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RowSettings {
    pub quad: QuadratureSettings,
    pub tol: Tolerances,
    pub fit: FitSettings,
    /// Keep each `ApproximantResult` in its record.
    pub keep_approximants: bool,
}

pub fn run_row_sequence(
    spec: &VectorFunctionSpec,
    m: &MultiIndex,
    n_start: usize,
    n_end: RowEnd,
    grids: &[CompactGrid],
    settings: &RowSettings,
) -> Result<RowSequenceReport> {
    if spec.dim() != m.dim() {
        return Err(Error::InvalidMultiIndex(format!(
            "m has {} entries but the function has {} components",
            m.dim(),
            spec.dim()
        )));
    }
    if n_start < m.max() {
        return Err(Error::InvalidArgument(format!(
            "n_start = {n_start} must be at least max_α m_α = {}",
            m.max()
        )));
    }
    if let RowEnd::At(end) = n_end {
        if end < n_start {
            return Err(Error::InvalidArgument(format!("empty row: n_end = {end} < n_start = {n_start}")));
        }
    }
    let profile = match pole_profile(spec, m) {
        Ok(p) => Some(p),
        Err(Error::PoleFree) => None,
        Err(e) => return Err(e),
    };
    if let Some(p) = &profile {
        for grid in grids {
            grid.validate(p, spec.geometry())?;
        }
    }
    let row = |n: usize| row_record(spec, m, n, grids, profile.as_ref(), settings);
    let records: Vec<RowRecord> = match n_end {
        RowEnd::At(end) => (n_start..=end).into_par_iter().map(row).collect(),
        RowEnd::FloorHits => {
            let batch = rayon::current_num_threads().max(1);
            let mut out: Vec<RowRecord> = Vec::new();
            let mut hits = 0;
            let mut next = n_start;
            'outer: while next <= MAX_ROW_END {
                let last = (next + batch - 1).min(MAX_ROW_END);
                let chunk: Vec<RowRecord> = (next..=last).into_par_iter().map(row).collect();
                next = last + 1;
                for rec in chunk {
                    hits = if rec.below_floor(settings.fit.floor) { hits + 1 } else { 0 };
                    out.push(rec);
                    if hits == 2 {
                        break 'outer;
                    }
                }
            }
            out
        }
    };
    let fits = fit_records(&records, grids.len(), m.dim(), profile.as_ref().map_or(0, |p| p.poles.len()), &settings.fit);
    let bounds = match &profile {
        Some(p) => grids.iter().map(|g| theoretical_bounds(p, g)).collect(),
        None => Vec::new(),
    };
    let delta = match &profile {
        Some(p) => Some(polewise_independence_delta(spec, m, p, None)?),
        None => None,
    };
    Ok(RowSequenceReport {
        m: m.clone(),
        uniqueness_onset: uniqueness_onset(&records),
        profile,
        grids: grids.to_vec(),
        records,
        fits,
        bounds,
        delta,
    })
}

/// Smallest n such that every record from n on is unique.
pub fn uniqueness_onset(records: &[RowRecord]) -> Option<usize> {
    let mut onset = None;
    for rec in records.iter().rev() {
        if rec.unique {
            onset = Some(rec.n);
        } else {
            break;
        }
    }
    onset
}

/// Rate fits for every series in a set of records.
pub fn fit_records(records: &[RowRecord], grids: usize, d: usize, poles: usize, fit: &FitSettings) -> RowFits {
    let series = |f: &dyn Fn(&RowRecord) -> Option<f64>| -> Vec<(usize, f64)> {
        records.iter().filter_map(|r| f(r).map(|e| (r.n, e))).collect()
    };
    RowFits {
        r_q: classify_fit(&series(&|r| r.q_coeff_err), fit),
        r_sup: (0..grids)
            .map(|k| (0..d).map(|a| classify_fit(&series(&|r| r.sup_err.get(k).and_then(|v| v.get(a)).copied()), fit)).collect())
            .collect(),
        r_pole: (0..poles)
            .map(|j| classify_fit(&series(&|r| r.pole_err.get(j).copied()), fit))
            .collect(),
    }
}

fn row_record(
    spec: &VectorFunctionSpec,
    m: &MultiIndex,
    n: usize,
    grids: &[CompactGrid],
    profile: Option<&PoleProfile>,
    settings: &RowSettings,
) -> RowRecord {
    let d = spec.dim();
    let poles = profile.map_or(0, |p| p.poles.len());
    let res = match simultaneous_pade(spec, m, n, &settings.quad, &settings.tol, profile) {
        Ok(res) => res,
        Err(e) => return RowRecord::failed(n, grids.len(), d, poles, e.to_string()),
    };
    let sup_err = grids
        .iter()
        .map(|grid| {
            (0..d)
                .map(|alpha| {
                    grid.points
                        .iter()
                        .map(|&z| match res.evaluate(alpha, z) {
                            Ok(r) => (spec.component(alpha).eval(z) - r).norm(),
                            Err(_) => f64::INFINITY,
                        })
                        .fold(0.0, f64::max)
                })
                .collect()
        })
        .collect();
    let q_coeff_err = profile.map(|p| res.q.coeff_distance(&p.q_true));
    let pole_err = match (profile, &res.roots) {
        (Some(p), Some(roots)) => match_poles(roots, p).unwrap_or_else(|_| vec![f64::NAN; poles]),
        _ => vec![f64::NAN; poles],
    };
    let defect = (0..d).map(|a| res.defect(a)).fold(0.0, f64::max);
    RowRecord {
        n,
        sup_err,
        q_coeff_err,
        pole_err,
        sigma_min: res.sigma_min,
        sigma_second: res.sigma_second,
        unique: res.unique,
        defect_ok: res.defect_ok,
        defect,
        failure: None,
        approximant: settings.keep_approximants.then_some(res),
    }
}

/// `max_K |Q|` for each record's normalized denominator.
pub fn denominator_sup(records: &[RowRecord], grid: &CompactGrid) -> Vec<(usize, f64)> {
    records
        .iter()
        .filter_map(|r| {
            r.approximant.as_ref().map(|a| {
                let q: &ComplexPolynomial = &a.q;
                (r.n, grid.points.iter().map(|z| q.eval(*z).norm()).fold(0.0, f64::max))
            })
        })
        .collect()
}
