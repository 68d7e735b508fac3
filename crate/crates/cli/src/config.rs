//! Experiment description: a TOML document, validated into core objects.

use std::path::PathBuf;

use num_complex::Complex64;
use padefaber::analysis::MAX_ROW_END;
use padefaber::simpade::quadrature_radii;
use padefaber::{
    pole_profile, CompactGrid, ComplexPolynomial, ComponentFunction, Error as CoreError, FitSettings, Geometry,
    GridKind, MultiIndex, PoleProfile, Precision, PrincipalPart, QuadratureSettings, RowEnd, RowSettings,
    Tolerances, VectorFunctionSpec,
};
use serde::{Deserialize, Serialize};

/// A complex number written as `[re, im]`.
pub type C = [f64; 2];

/// A configuration problem, located by its key path.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl std::fmt::Display) -> Self {
        Self {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub m: Vec<usize>,
    pub n_start: usize,
    /// Last row; absent means "stop after two rows at the error floor".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_end: Option<usize>,
    /// Seed for randomized grids that do not set their own.
    #[serde(default)]
    pub seed: u64,
    pub geometry: GeometryConfig,
    pub components: Vec<ComponentConfig>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default = "default_grids")]
    pub grids: Vec<GridConfig>,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub fit: FitConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryKindName {
    Disk,
    Segment,
    Ellipse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub kind: GeometryKindName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<C>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<C>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<C>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<f64>,
    /// Half the focal distance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focal: Option<f64>,
    /// Level of the ellipse in the exterior of its focal segment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    /// Power-basis coefficients of the entire part.
    #[serde(default)]
    pub entire: Vec<C>,
    #[serde(default)]
    pub poles: Vec<PoleConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleConfig {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
    #[serde(default = "one")]
    pub order: usize,
    /// `coefficients[l - 1]` multiplies `(z − λ)^{−l}`; defaults to `(z − λ)^{−order}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<C>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PrecisionName {
    #[default]
    Double,
    DoubleDouble,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default)]
    pub precision: PrecisionName,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rho: None,
            nodes: default_nodes(),
            precision: PrecisionName::Double,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKindName {
    Boundary,
    LevelBand,
    Disk,
    AnnulusSector,
    Rectangle,
    RandomDisk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub name: String,
    pub kind: GridKindName,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<C>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rings: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_inner: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_outer: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_left: Option<C>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_right: Option<C>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl GridConfig {
    pub fn boundary() -> Self {
        Self {
            name: "E".into(),
            kind: GridKindName::Boundary,
            points: default_points(),
            center: None,
            radius: None,
            r_max: None,
            rings: None,
            r_inner: None,
            r_outer: None,
            theta_start: None,
            theta_end: None,
            lower_left: None,
            upper_right: None,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceConfig {
    pub defect: f64,
    pub root: f64,
    pub degeneracy_ratio: f64,
    pub absolute_floor: f64,
    pub residual_buffer: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        let t = Tolerances::default();
        Self {
            defect: t.defect,
            root: t.root,
            degeneracy_ratio: t.degeneracy_ratio,
            absolute_floor: t.absolute_floor,
            residual_buffer: t.residual_buffer,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitConfig {
    pub floor: f64,
    pub cap: f64,
    pub min_points: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        let f = FitSettings::default();
        Self {
            floor: f.floor,
            cap: f.cap,
            min_points: f.min_points,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// Also write `coefficients.csv`.
    #[serde(default)]
    pub coefficients: bool,
}

fn one() -> usize {
    1
}

fn default_nodes() -> usize {
    4096
}

fn default_points() -> usize {
    padefaber::analysis::DEFAULT_GRID_POINTS
}

fn default_grids() -> Vec<GridConfig> {
    vec![GridConfig::boundary()]
}

/// Parses and validates a TOML experiment description, filling defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let de = toml::Deserializer::parse(text).map_err(|e| ConfigError::new("<document>", e.message()))?;
    let mut cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::new(if path == "." { "<document>".into() } else { path }, e.inner().message())
    })?;
    cfg.fill_defaults();
    cfg.build()?;
    Ok(cfg)
}

impl ExperimentConfig {
    /// Writes every defaulted value out explicitly.
    fn fill_defaults(&mut self) {
        let g = &mut self.geometry;
        match g.kind {
            GeometryKindName::Disk => {
                g.center.get_or_insert([0.0, 0.0]);
            }
            GeometryKindName::Segment => {}
            GeometryKindName::Ellipse => {
                g.center.get_or_insert([0.0, 0.0]);
                g.rotation.get_or_insert(0.0);
            }
        }
        for comp in &mut self.components {
            for pole in &mut comp.poles {
                if pole.coefficients.is_empty() && pole.order > 0 {
                    pole.coefficients = vec![[0.0, 0.0]; pole.order];
                    pole.coefficients[pole.order - 1] = [1.0, 0.0];
                }
            }
        }
        for grid in &mut self.grids {
            match grid.kind {
                GridKindName::Disk => {
                    grid.center.get_or_insert([0.0, 0.0]);
                }
                GridKindName::RandomDisk => {
                    grid.center.get_or_insert([0.0, 0.0]);
                    grid.seed.get_or_insert(self.seed);
                }
                GridKindName::AnnulusSector => {
                    grid.center.get_or_insert([0.0, 0.0]);
                    grid.r_inner.get_or_insert(0.0);
                    grid.theta_start.get_or_insert(0.0);
                    grid.theta_end.get_or_insert(std::f64::consts::TAU);
                }
                GridKindName::LevelBand => {
                    grid.rings.get_or_insert(4);
                }
                GridKindName::Boundary | GridKindName::Rectangle => {}
            }
        }
    }

    /// The effective configuration as a TOML document.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// Validates every precondition and builds the core objects.
    pub fn build(&self) -> Result<Experiment> {
        let geometry = self.geometry.build()?;
        if self.components.is_empty() {
            return Err(ConfigError::new("components", "at least one component is required"));
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| c.build(i))
            .collect::<Result<Vec<_>>>()?;
        let spec = VectorFunctionSpec::new(geometry, components).map_err(|e| ConfigError::new("components", e))?;
        if self.m.len() != spec.dim() {
            return Err(ConfigError::new(
                "m",
                format!("has {} entries but there are {} components", self.m.len(), spec.dim()),
            ));
        }
        let m = MultiIndex::new(self.m.clone()).map_err(|e| ConfigError::new("m", e))?;
        if self.n_start < m.max() {
            return Err(ConfigError::new(
                "n_start",
                format!("must be at least max(m) = {}", m.max()),
            ));
        }
        let n_end = match self.n_end {
            Some(end) if end < self.n_start => {
                return Err(ConfigError::new("n_end", format!("must be at least n_start = {}", self.n_start)));
            }
            Some(end) => RowEnd::At(end),
            None => RowEnd::FloorHits,
        };
        let last = match n_end {
            RowEnd::At(end) => end,
            RowEnd::FloorHits => MAX_ROW_END.max(self.n_start),
        };
        let tol = self.tolerances.build()?;
        let quad = self.quadrature.build(last + tol.residual_buffer)?;
        quadrature_radii(&spec, &quad).map_err(|e| ConfigError::new("quadrature.rho", e))?;
        let fit = self.fit.build()?;
        let profile = match pole_profile(&spec, &m) {
            Ok(p) => Some(p),
            Err(CoreError::PoleFree) => None,
            Err(e) => return Err(ConfigError::new("components", e)),
        };
        if self.grids.is_empty() {
            return Err(ConfigError::new("grids", "at least one grid is required"));
        }
        let mut grids = Vec::with_capacity(self.grids.len());
        for (i, gc) in self.grids.iter().enumerate() {
            if self.grids[..i].iter().any(|o| o.name == gc.name) {
                return Err(ConfigError::new(format!("grids[{i}].name"), format!("duplicate grid name '{}'", gc.name)));
            }
            let grid = gc.build(i, &geometry)?;
            if let Some(p) = &profile {
                grid.validate(p, &geometry).map_err(|e| ConfigError::new(format!("grids[{i}]"), e))?;
            }
            grids.push(grid);
        }
        Ok(Experiment {
            spec,
            m,
            n_start: self.n_start,
            n_end,
            grids,
            settings: RowSettings {
                quad,
                tol,
                fit,
                keep_approximants: self.output.coefficients,
            },
            profile,
        })
    }
}

/// A validated experiment, ready to run.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub spec: VectorFunctionSpec,
    pub m: MultiIndex,
    pub n_start: usize,
    pub n_end: RowEnd,
    pub grids: Vec<CompactGrid>,
    pub settings: RowSettings,
    pub profile: Option<PoleProfile>,
}

fn complex(c: C) -> Complex64 {
    Complex64::new(c[0], c[1])
}

fn require<T: Copy>(value: Option<T>, path: impl Into<String>) -> Result<T> {
    value.ok_or_else(|| ConfigError::new(path, "missing required key"))
}

fn finite(values: &[f64], path: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(ConfigError::new(path, "values must be finite"))
    }
}

impl GeometryConfig {
    pub fn build(&self) -> Result<Geometry> {
        let unused = |keys: &[(&str, bool)]| -> Result<()> {
            match keys.iter().find(|k| k.1) {
                Some((k, _)) => Err(ConfigError::new(
                    format!("geometry.{k}"),
                    format!("not a parameter of kind '{}'", self.kind_name()),
                )),
                None => Ok(()),
            }
        };
        let g = match self.kind {
            GeometryKindName::Disk => {
                unused(&[("a", self.a.is_some()), ("b", self.b.is_some()), ("rotation", self.rotation.is_some()), ("focal", self.focal.is_some()), ("r", self.r.is_some())])?;
                let center = self.center.unwrap_or([0.0, 0.0]);
                finite(&center, "geometry.center")?;
                Geometry::disk(complex(center), require(self.radius, "geometry.radius")?)
                    .map_err(|e| ConfigError::new("geometry.radius", e))?
            }
            GeometryKindName::Segment => {
                unused(&[("center", self.center.is_some()), ("radius", self.radius.is_some()), ("rotation", self.rotation.is_some()), ("focal", self.focal.is_some()), ("r", self.r.is_some())])?;
                let a = require(self.a, "geometry.a")?;
                let b = require(self.b, "geometry.b")?;
                finite(&a, "geometry.a")?;
                finite(&b, "geometry.b")?;
                Geometry::segment(complex(a), complex(b)).map_err(|e| ConfigError::new("geometry", e))?
            }
            GeometryKindName::Ellipse => {
                unused(&[("radius", self.radius.is_some()), ("a", self.a.is_some()), ("b", self.b.is_some())])?;
                let center = self.center.unwrap_or([0.0, 0.0]);
                finite(&center, "geometry.center")?;
                let focal = require(self.focal, "geometry.focal")?;
                let r = require(self.r, "geometry.r")?;
                Geometry::ellipse(complex(center), self.rotation.unwrap_or(0.0), focal, r)
                    .map_err(|e| ConfigError::new("geometry", e))?
            }
        };
        Ok(g)
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            GeometryKindName::Disk => "disk",
            GeometryKindName::Segment => "segment",
            GeometryKindName::Ellipse => "ellipse",
        }
    }
}

impl ComponentConfig {
    fn build(&self, i: usize) -> Result<ComponentFunction> {
        for (k, c) in self.entire.iter().enumerate() {
            finite(c, &format!("components[{i}].entire[{k}]"))?;
        }
        let mut parts = Vec::with_capacity(self.poles.len());
        for (j, p) in self.poles.iter().enumerate() {
            let path = format!("components[{i}].poles[{j}]");
            finite(&[p.re, p.im], &path)?;
            if p.order == 0 {
                return Err(ConfigError::new(format!("{path}.order"), "must be positive"));
            }
            let coefficients: Vec<Complex64> = if p.coefficients.is_empty() {
                PrincipalPart::simple(Complex64::new(p.re, p.im), p.order).coefficients
            } else {
                if p.coefficients.len() != p.order {
                    return Err(ConfigError::new(
                        format!("{path}.coefficients"),
                        format!("expected {} entries (one per order), got {}", p.order, p.coefficients.len()),
                    ));
                }
                for (k, c) in p.coefficients.iter().enumerate() {
                    finite(c, &format!("{path}.coefficients[{k}]"))?;
                }
                if p.coefficients[p.order - 1] == [0.0, 0.0] {
                    return Err(ConfigError::new(
                        format!("{path}.coefficients"),
                        "the top-order coefficient must be nonzero",
                    ));
                }
                p.coefficients.iter().copied().map(complex).collect()
            };
            parts.push(PrincipalPart::new(Complex64::new(p.re, p.im), coefficients));
        }
        let entire = ComplexPolynomial::new(self.entire.iter().copied().map(complex).collect());
        Ok(ComponentFunction::new(parts, entire))
    }
}

impl QuadratureConfig {
    fn build(&self, n_max: usize) -> Result<QuadratureSettings> {
        if let Some(rho) = self.rho {
            if !(rho > 1.0 && rho.is_finite()) {
                return Err(ConfigError::new("quadrature.rho", format!("must exceed 1, got {rho}")));
            }
        }
        let required = 2 * (n_max + 1);
        if self.nodes < required {
            return Err(ConfigError::new(
                "quadrature.nodes",
                format!("{} nodes cannot resolve coefficients up to index {n_max}; need at least {required}", self.nodes),
            ));
        }
        Ok(QuadratureSettings {
            rho: self.rho,
            nodes: self.nodes,
            precision: match self.precision {
                PrecisionName::Double => Precision::Double,
                PrecisionName::DoubleDouble => Precision::DoubleDouble,
            },
        })
    }
}

impl ToleranceConfig {
    fn build(&self) -> Result<Tolerances> {
        for (key, v) in [
            ("defect", self.defect),
            ("root", self.root),
            ("degeneracy_ratio", self.degeneracy_ratio),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::new(format!("tolerances.{key}"), format!("must be positive, got {v}")));
            }
        }
        if !(self.absolute_floor >= 0.0 && self.absolute_floor.is_finite()) {
            return Err(ConfigError::new("tolerances.absolute_floor", "must be nonnegative"));
        }
        Ok(Tolerances {
            defect: self.defect,
            root: self.root,
            degeneracy_ratio: self.degeneracy_ratio,
            absolute_floor: self.absolute_floor,
            residual_buffer: self.residual_buffer,
        })
    }
}

impl FitConfig {
    fn build(&self) -> Result<FitSettings> {
        if !(self.floor > 0.0 && self.floor < self.cap) {
            return Err(ConfigError::new("fit", format!("need 0 < floor < cap, got floor = {}, cap = {}", self.floor, self.cap)));
        }
        if self.min_points < 2 {
            return Err(ConfigError::new("fit.min_points", "a slope needs at least 2 points"));
        }
        Ok(FitSettings {
            floor: self.floor,
            cap: self.cap,
            min_points: self.min_points,
        })
    }
}

impl GridConfig {
    fn build(&self, i: usize, g: &Geometry) -> Result<CompactGrid> {
        let path = |k: &str| format!("grids[{i}].{k}");
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(ConfigError::new(path("name"), "use letters, digits, '_' or '-' (it names an output file)"));
        }
        if self.points == 0 {
            return Err(ConfigError::new(path("points"), "must be positive"));
        }
        let center = complex(self.center.unwrap_or([0.0, 0.0]));
        let kind = match self.kind {
            GridKindName::Boundary => GridKind::Boundary,
            GridKindName::LevelBand => GridKind::LevelBand {
                r_max: require(self.r_max, path("r_max"))?,
                rings: self.rings.unwrap_or(4),
            },
            GridKindName::Disk => GridKind::Disk {
                center,
                radius: require(self.radius, path("radius"))?,
            },
            GridKindName::AnnulusSector => GridKind::AnnulusSector {
                center,
                r_inner: self.r_inner.unwrap_or(0.0),
                r_outer: require(self.r_outer, path("r_outer"))?,
                theta_start: self.theta_start.unwrap_or(0.0),
                theta_end: self.theta_end.unwrap_or(std::f64::consts::TAU),
            },
            GridKindName::Rectangle => GridKind::Rectangle {
                lower_left: complex(require(self.lower_left, path("lower_left"))?),
                upper_right: complex(require(self.upper_right, path("upper_right"))?),
            },
            GridKindName::RandomDisk => GridKind::RandomDisk {
                center,
                radius: require(self.radius, path("radius"))?,
                seed: self.seed.unwrap_or(0),
            },
        };
        CompactGrid::new(self.name.clone(), kind, self.points, g).map_err(|e| ConfigError::new(format!("grids[{i}]"), e))
    }
}
