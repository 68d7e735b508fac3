//! Simultaneous Padé-Faber approximants: the defect system, its null-space
//! solution, the zero-based normalization of the denominator and the numerators.

use std::fmt;

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::faber::{faber_values, ContourQuadrature};
use crate::function::{same_point, VectorFunctionSpec};
use crate::geometry::Geometry;
use crate::linalg::{jacobi_svd, Matrix};
use crate::polynomial::{polynomial_roots, ComplexPolynomial};
use crate::precision::{cabs, lift, lower, DoubleDouble, Precision, Real};

/// Denominator budget `m = (m_1, …, m_d)`, not all zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(m: Vec<usize>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidMultiIndex("m must have at least one entry".into()));
        }
        if m.iter().all(|&x| x == 0) {
            return Err(Error::InvalidMultiIndex(
                "m must lie in N^d \\ {0}: at least one entry must be positive".into(),
            ));
        }
        Ok(Self(m))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|m|`
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn max(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn get(&self, alpha: usize) -> usize {
        self.0[alpha]
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    /// Radius of the level curve. `None` picks one per component from its poles.
    pub rho: Option<f64>,
    pub nodes: usize,
    pub precision: Precision,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rho: None,
            nodes: 4096,
            precision: Precision::Double,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative bound on the defect window `|[Q F_α]_k|`.
    pub defect: f64,
    /// Relative backward residual accepted from the root finder.
    pub root: f64,
    pub degeneracy_ratio: f64,
    pub absolute_floor: f64,
    /// Residual coefficients reported past `k = n`.
    pub residual_buffer: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            defect: 1e-9,
            root: 1e-10,
            degeneracy_ratio: 1e6,
            absolute_floor: 1e-12,
            residual_buffer: 8,
        }
    }
}

/// A pole of the vector function with its vector order and `|Φ(λ)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorPole {
    pub location: Complex64,
    pub order: usize,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleProfile {
    /// Poles strictly inside `D_{ρ_m}`, by increasing level.
    pub poles: Vec<VectorPole>,
    /// All poles of the vector function, by increasing level.
    pub all_poles: Vec<VectorPole>,
    /// `ρ_{|m|}(F)`, infinite when F has at most `|m|` poles.
    pub rho_m: f64,
    /// Threshold separating `(z − λ)` from `(1 − z/λ)` factors.
    pub threshold: f64,
    pub q_true: ComplexPolynomial,
}

impl PoleProfile {
    /// Total multiplicity `Σ τ_j` of the inside poles.
    pub fn multiplicity(&self) -> usize {
        self.poles.iter().map(|p| p.order).sum()
    }

    /// Largest `|Φ(λ_j)|` among the inside poles.
    pub fn max_level(&self) -> Option<f64> {
        self.poles.iter().map(|p| p.level).reduce(f64::max)
    }

    /// Inside poles repeated by order.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.poles
            .iter()
            .flat_map(|p| std::iter::repeat_n(p.location, p.order))
            .collect()
    }
}

/// Poles of the vector function, merged across components with the largest order.
pub fn vector_poles(spec: &VectorFunctionSpec) -> Vec<VectorPole> {
    let g = spec.geometry();
    let mut poles: Vec<VectorPole> = Vec::new();
    for comp in spec.components() {
        for (location, order) in comp.poles() {
            match poles.iter_mut().find(|p| same_point(p.location, location)) {
                Some(p) => p.order = p.order.max(order),
                None => poles.push(VectorPole {
                    location,
                    order,
                    level: g.level(location),
                }),
            }
        }
    }
    poles.sort_by(|a, b| {
        a.level
            .total_cmp(&b.level)
            .then(a.location.re.total_cmp(&b.location.re))
            .then(a.location.im.total_cmp(&b.location.im))
    });
    poles
}

pub fn pole_profile(spec: &VectorFunctionSpec, m: &MultiIndex) -> Result<PoleProfile> {
    if !spec.has_poles() {
        return Err(Error::PoleFree);
    }
    check_dims(spec, m)?;
    let all_poles = vector_poles(spec);
    let budget = m.total();
    let mut cumulative = 0;
    let mut rho_m = f64::INFINITY;
    for p in &all_poles {
        cumulative += p.order;
        if cumulative > budget {
            rho_m = p.level;
            break;
        }
    }
    let poles: Vec<VectorPole> = all_poles.iter().copied().filter(|p| p.level < rho_m).collect();
    let threshold = match poles.first() {
        Some(p) => (1.0 + p.level) / 2.0,
        None => (1.0 + rho_m) / 2.0,
    };
    let roots: Vec<Complex64> = poles
        .iter()
        .flat_map(|p| std::iter::repeat_n(p.location, p.order))
        .collect();
    let q_true = normalized_from_roots(&roots, threshold, spec.geometry());
    Ok(PoleProfile {
        poles,
        all_poles,
        rho_m,
        threshold,
        q_true,
    })
}

fn check_dims(spec: &VectorFunctionSpec, m: &MultiIndex) -> Result<()> {
    if spec.dim() != m.dim() {
        return Err(Error::InvalidMultiIndex(format!(
            "m has {} entries but the function has {} components",
            m.dim(),
            spec.dim()
        )));
    }
    Ok(())
}

/// `Π_{|Φ(λ)| ≤ L} (z − λ) · Π_{|Φ(λ)| > L} (1 − z/λ)`.
pub fn normalized_from_roots(roots: &[Complex64], threshold: f64, g: &Geometry) -> ComplexPolynomial {
    let mut q = ComplexPolynomial::one();
    for &r in roots {
        let factor = if r.norm() < 1e-10 || g.level(r) <= threshold {
            ComplexPolynomial::new(vec![-r, Complex64::one()])
        } else {
            ComplexPolynomial::new(vec![Complex64::one(), -Complex64::one() / r])
        };
        q = &q * &factor;
    }
    q
}

/// Rescales `q_raw` per the zero-based normalization with threshold `L`.
pub fn normalize_denominator(
    q_raw: &ComplexPolynomial,
    threshold: f64,
    g: &Geometry,
    root_tol: f64,
) -> Result<ComplexPolynomial> {
    if q_raw.is_zero() {
        return Err(Error::InvalidArgument("cannot normalize the zero polynomial".into()));
    }
    if q_raw.degree() == Some(0) {
        return Ok(ComplexPolynomial::one());
    }
    let roots = polynomial_roots(q_raw, root_tol)?;
    Ok(normalized_from_roots(&roots, threshold, g))
}

/// Level-curve radius per component: 90% of the way from E to its nearest pole.
pub fn quadrature_radii(spec: &VectorFunctionSpec, quad: &QuadratureSettings) -> Result<Vec<f64>> {
    (0..spec.dim())
        .map(|alpha| {
            let nearest = spec.nearest_pole_level(alpha);
            match (quad.rho, nearest) {
                (Some(rho), Some(r)) if !(rho > 1.0 && rho < r) => Err(Error::InvalidArgument(format!(
                    "quadrature radius {rho} must lie in (1, {r}) for component {}",
                    alpha + 1
                ))),
                (Some(rho), _) if !(rho > 1.0 && rho.is_finite()) => Err(Error::InvalidRadius(rho)),
                (Some(rho), _) => Ok(rho),
                (None, Some(r)) => Ok(1.0 + 0.9 * (r - 1.0)),
                (None, None) => Ok(2.0),
            }
        })
        .collect()
}

/// Samples of one component on its level curve.
struct ComponentSamples<T: Real> {
    quad: ContourQuadrature<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> ComponentSamples<T> {
    fn new(spec: &VectorFunctionSpec, alpha: usize, rho: f64, nodes: usize, n_max: usize) -> Result<Self> {
        let quad = ContourQuadrature::new(spec.geometry(), rho, nodes, n_max)?;
        let values = quad.sample(spec.component(alpha))?;
        Ok(Self { quad, values })
    }

    /// `[z^j F_α]_k` for `j = 0..=deg`, `k = 0..=n_max`.
    fn power_columns(&self, deg: usize) -> Vec<Vec<Complex<T>>> {
        let mut weighted = self.values.clone();
        let mut out = Vec::with_capacity(deg + 1);
        for j in 0..=deg {
            if j > 0 {
                for (v, t) in weighted.iter_mut().zip(self.quad.nodes()) {
                    *v = *v * *t;
                }
            }
            out.push(self.quad.coefficients(&weighted));
        }
        out
    }

    /// `[Q F_α]_k`, `k = 0..=n_max`.
    fn times_polynomial(&self, q: &ComplexPolynomial) -> Vec<Complex<T>> {
        let weighted: Vec<Complex<T>> = self
            .values
            .iter()
            .zip(self.quad.nodes())
            .map(|(v, t)| *v * q.eval_in(*t))
            .collect();
        self.quad.coefficients(&weighted)
    }
}

fn defect_matrix_in<T: Real>(
    samples: &[ComponentSamples<T>],
    n: usize,
    m: &MultiIndex,
) -> Matrix<T> {
    let deg = m.total();
    let mut rows = Vec::with_capacity(deg);
    for (alpha, s) in samples.iter().enumerate() {
        let m_alpha = m.get(alpha);
        if m_alpha == 0 {
            continue;
        }
        let columns = s.power_columns(deg);
        for k in n + 1 - m_alpha..=n {
            rows.push(columns.iter().map(|c| c[k]).collect());
        }
    }
    Matrix::from_rows(rows)
}

fn check_row_index(n: usize, m: &MultiIndex) -> Result<()> {
    if n < m.max() {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must be at least max_α m_α = {}",
            m.max()
        )));
    }
    Ok(())
}

/// The `|m| × (|m| + 1)` system `[z^j F_α]_k = 0`, `k = n − m_α + 1..=n`.
pub fn defect_matrix(
    spec: &VectorFunctionSpec,
    n: usize,
    m: &MultiIndex,
    quad: &QuadratureSettings,
) -> Result<Matrix<f64>> {
    check_dims(spec, m)?;
    check_row_index(n, m)?;
    let rhos = quadrature_radii(spec, quad)?;
    match quad.precision {
        Precision::Double => {
            let samples = sample_components::<f64>(spec, &rhos, quad.nodes, n)?;
            Ok(defect_matrix_in(&samples, n, m))
        }
        Precision::DoubleDouble => {
            let samples = sample_components::<DoubleDouble>(spec, &rhos, quad.nodes, n)?;
            Ok(defect_matrix_in(&samples, n, m).map(|z| lift(lower(z))))
        }
    }
}

fn sample_components<T: Real>(
    spec: &VectorFunctionSpec,
    rhos: &[f64],
    nodes: usize,
    n_max: usize,
) -> Result<Vec<ComponentSamples<T>>> {
    rhos.iter()
        .enumerate()
        .map(|(alpha, &rho)| ComponentSamples::new(spec, alpha, rho, nodes, n_max))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenominatorSolution {
    /// Unit-norm power-basis coefficients of `Q`.
    pub q: Vec<Complex64>,
    pub sigma_min: f64,
    pub sigma_second: f64,
    pub unique: bool,
}

/// Null vector of the defect matrix from the smallest singular value of its
/// row-equilibrated form.
pub fn solve_denominator<T: Real>(matrix: &Matrix<T>, tol: &Tolerances) -> DenominatorSolution {
    let mut a = matrix.clone();
    for i in 0..a.rows() {
        let row = a.row_mut(i);
        let norm = row.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if norm > T::zero() {
            for z in row.iter_mut() {
                *z = *z / norm;
            }
        }
    }
    let svd = jacobi_svd(&a);
    let sigma_min = svd.singular_values.first().map_or(0.0, |s| s.to_f64());
    let sigma_second = svd.singular_values.get(1).map_or(f64::INFINITY, |s| s.to_f64());
    let mut q: Vec<Complex64> = svd.vectors[0].iter().map(|z| lower(*z)).collect();
    let norm = q.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in q.iter_mut() {
        *z /= norm;
    }
    DenominatorSolution {
        q,
        sigma_min,
        sigma_second,
        unique: sigma_second > tol.degeneracy_ratio * sigma_min + tol.absolute_floor,
    }
}

/// `Σ_k c_k Φ_k` on a fixed geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct FaberSeries {
    pub geometry: Geometry,
    pub coeffs: Vec<Complex64>,
}

impl FaberSeries {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if self.coeffs.is_empty() {
            return Complex64::zero();
        }
        faber_values(&self.geometry, z, self.coeffs.len() - 1)
            .iter()
            .zip(&self.coeffs)
            .map(|(p, c)| p * c)
            .sum()
    }

    /// Power-basis form. Cancellation grows with the degree on elongated sets,
    /// so evaluation should go through [`FaberSeries::eval`].
    pub fn to_polynomial(&self) -> ComplexPolynomial {
        let basis = crate::faber::faber_basis(&self.geometry, self.coeffs.len().saturating_sub(1));
        basis
            .polys()
            .iter()
            .zip(&self.coeffs)
            .fold(ComplexPolynomial::zero(), |acc, (p, c)| &acc + &p.scale(*c))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Numerators {
    pub p: Vec<FaberSeries>,
    /// `[Q F_α]_k` for `k = n − m_α + 1..=n + W`.
    pub residuals: Vec<Vec<Complex64>>,
    /// `max_k |[Q F_α]_k|` over `k = 0..=n + W`.
    pub scales: Vec<f64>,
}

fn numerators_in<T: Real>(
    samples: &[ComponentSamples<T>],
    q: &ComplexPolynomial,
    n: usize,
    m: &MultiIndex,
    g: &Geometry,
) -> Numerators {
    let mut out = Numerators {
        p: Vec::with_capacity(samples.len()),
        residuals: Vec::with_capacity(samples.len()),
        scales: Vec::with_capacity(samples.len()),
    };
    for (alpha, s) in samples.iter().enumerate() {
        let coeffs: Vec<Complex64> = s.times_polynomial(q).into_iter().map(lower).collect();
        let split = n + 1 - m.get(alpha);
        out.scales.push(coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max));
        out.p.push(FaberSeries {
            geometry: *g,
            coeffs: coeffs[..split].to_vec(),
        });
        out.residuals.push(coeffs[split..].to_vec());
    }
    out
}

/// `P_α = Σ_{k ≤ n − m_α} [Q F_α]_k Φ_k` and the residual coefficients past it.
pub fn numerators(
    spec: &VectorFunctionSpec,
    q: &ComplexPolynomial,
    n: usize,
    m: &MultiIndex,
    quad: &QuadratureSettings,
    tol: &Tolerances,
) -> Result<Numerators> {
    check_dims(spec, m)?;
    check_row_index(n, m)?;
    let rhos = quadrature_radii(spec, quad)?;
    let n_max = n + tol.residual_buffer;
    let g = spec.geometry();
    Ok(match quad.precision {
        Precision::Double => {
            numerators_in(&sample_components::<f64>(spec, &rhos, quad.nodes, n_max)?, q, n, m, g)
        }
        Precision::DoubleDouble => numerators_in(
            &sample_components::<DoubleDouble>(spec, &rhos, quad.nodes, n_max)?,
            q,
            n,
            m,
            g,
        ),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproximantResult {
    pub n: usize,
    pub m: MultiIndex,
    /// Normalized denominator.
    pub q: ComplexPolynomial,
    /// Zeros of `Q` when they were computed.
    pub roots: Option<Vec<Complex64>>,
    /// Whether the zero-based normalization was applied.
    pub normalized: bool,
    pub p: Vec<FaberSeries>,
    pub residuals: Vec<Vec<Complex64>>,
    pub residual_scales: Vec<f64>,
    pub sigma_min: f64,
    pub sigma_second: f64,
    pub unique: bool,
    /// Every defect window is below the relative defect tolerance.
    pub defect_ok: bool,
    pub rhos: Vec<f64>,
}

impl ApproximantResult {
    /// `max_{k ≤ n} |[Q F_α]_k|` over the defect window of component `alpha`.
    pub fn defect(&self, alpha: usize) -> f64 {
        self.residuals[alpha][..self.m.get(alpha)]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// `R_{n,m,α}(z) = P_α(z) / Q(z)`.
    pub fn evaluate(&self, alpha: usize, z: Complex64) -> Result<Complex64> {
        let q = self.q.eval(z);
        if q.is_zero() || q.norm() <= 64.0 * f64::EPSILON * self.q.eval_scale(z) {
            return Err(Error::PoleEvaluation { z });
        }
        Ok(self.p[alpha].eval(z) / q)
    }
}

pub fn evaluate_approximant(res: &ApproximantResult, alpha: usize, z: Complex64) -> Result<Complex64> {
    res.evaluate(alpha, z)
}

/// Computes `(Q_{n,m}, P_{n,m,α})`. With a pole profile the denominator is
/// normalized by its zeros; otherwise it keeps unit Euclidean norm.
pub fn simultaneous_pade(
    spec: &VectorFunctionSpec,
    m: &MultiIndex,
    n: usize,
    quad: &QuadratureSettings,
    tol: &Tolerances,
    profile: Option<&PoleProfile>,
) -> Result<ApproximantResult> {
    check_dims(spec, m)?;
    check_row_index(n, m)?;
    let rhos = quadrature_radii(spec, quad)?;
    match quad.precision {
        Precision::Double => solve_in::<f64>(spec, m, n, quad, tol, profile, rhos),
        Precision::DoubleDouble => solve_in::<DoubleDouble>(spec, m, n, quad, tol, profile, rhos),
    }
}

fn solve_in<T: Real>(
    spec: &VectorFunctionSpec,
    m: &MultiIndex,
    n: usize,
    quad: &QuadratureSettings,
    tol: &Tolerances,
    profile: Option<&PoleProfile>,
    rhos: Vec<f64>,
) -> Result<ApproximantResult> {
    let samples = sample_components::<T>(spec, &rhos, quad.nodes, n + tol.residual_buffer)?;
    let matrix = defect_matrix_in(&samples, n, m);
    let sol = solve_denominator(&matrix, tol);
    let q_raw = ComplexPolynomial::new(sol.q.clone());
    let (q, roots) = match profile {
        Some(profile) => {
            let roots = if q_raw.degree().unwrap_or(0) == 0 {
                Vec::new()
            } else {
                polynomial_roots(&q_raw, tol.root)?
            };
            let q = normalized_from_roots(&roots, profile.threshold, spec.geometry());
            (q, Some(roots))
        }
        None => {
            let roots = match q_raw.degree() {
                Some(d) if d > 0 => polynomial_roots(&q_raw, tol.root).ok(),
                _ => Some(Vec::new()),
            };
            (q_raw, roots)
        }
    };
    let nums = numerators_in(&samples, &q, n, m, spec.geometry());
    let defect_ok = (0..m.dim()).all(|alpha| {
        let window = nums.residuals[alpha][..m.get(alpha)]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        window <= tol.defect * nums.scales[alpha]
    });
    Ok(ApproximantResult {
        n,
        m: m.clone(),
        q,
        roots,
        normalized: profile.is_some(),
        p: nums.p,
        residuals: nums.residuals,
        residual_scales: nums.scales,
        sigma_min: sol.sigma_min,
        sigma_second: sol.sigma_second,
        unique: sol.unique,
        defect_ok,
        rhos,
    })
}

/// Largest `|Q(z)|` sampled on the boundary of E, used for boundedness checks.
pub fn boundary_sup(q: &ComplexPolynomial, g: &Geometry, samples: usize) -> f64 {
    (0..samples)
        .map(|s| {
            let w = f64::unit_root(s, samples) * (1.0 + 1e-12);
            cabs(q.eval_in(g.psi_in(w)))
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::ComponentFunction;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disk_spec(components: &[&[f64]]) -> VectorFunctionSpec {
        VectorFunctionSpec::new(
            Geometry::unit_disk(),
            components
                .iter()
                .map(|poles| ComponentFunction::simple_poles(&poles.iter().map(|&p| c(p, 0.0)).collect::<Vec<_>>()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn multi_index_validation() {
        assert!(MultiIndex::new(vec![0, 0]).is_err());
        assert!(MultiIndex::new(vec![]).is_err());
        let m = MultiIndex::new(vec![2, 0, 1]).unwrap();
        assert_eq!(m.total(), 3);
        assert_eq!(m.max(), 2);
        assert_eq!(m.to_string(), "(2, 0, 1)");
    }

    #[test]
    fn profile_of_the_disk_ensemble() {
        let spec = disk_spec(&[&[2.0, 6.0], &[3.0, 6.0]]);
        let p = pole_profile(&spec, &MultiIndex::new(vec![1, 1]).unwrap()).unwrap();
        assert_eq!(p.poles.len(), 2);
        assert_eq!(p.poles[0].location, c(2.0, 0.0));
        assert_eq!(p.poles[1].location, c(3.0, 0.0));
        assert_eq!(p.rho_m, 6.0);
        assert_eq!(p.threshold, 1.5);
        let expected = ComplexPolynomial::from_real(&[1.0, -5.0 / 6.0, 1.0 / 6.0]);
        assert!(p.q_true.coeff_distance(&expected) < 1e-15);
    }

    #[test]
    fn profile_of_the_segment_ensemble() {
        let spec = VectorFunctionSpec::new(
            Geometry::unit_segment(),
            vec![
                ComponentFunction::simple_poles(&[c(1.25, 0.0), c(2.125, 0.0)]),
                ComponentFunction::simple_poles(&[c(-1.25, 0.0)]),
            ],
        )
        .unwrap();
        let p = pole_profile(&spec, &MultiIndex::new(vec![1, 1]).unwrap()).unwrap();
        let locations: Vec<Complex64> = p.poles.iter().map(|x| x.location).collect();
        assert_eq!(locations, vec![c(-1.25, 0.0), c(1.25, 0.0)]);
        assert!((p.rho_m - 4.0).abs() < 1e-14);
        assert!((p.threshold - 1.5).abs() < 1e-14);
    }

    #[test]
    fn profile_with_few_poles_has_infinite_index() {
        let spec = disk_spec(&[&[2.0], &[3.0]]);
        let p = pole_profile(&spec, &MultiIndex::new(vec![1, 1]).unwrap()).unwrap();
        assert_eq!(p.rho_m, f64::INFINITY);
        assert_eq!(p.multiplicity(), 2);
        let free = VectorFunctionSpec::new(Geometry::unit_disk(), vec![ComponentFunction::default()]).unwrap();
        assert_eq!(pole_profile(&free, &MultiIndex::new(vec![1]).unwrap()), Err(Error::PoleFree));
    }

    #[test]
    fn scalar_defect_row() {
        let spec = disk_spec(&[&[2.0]]);
        let m = MultiIndex::new(vec![1]).unwrap();
        for n in 1..6 {
            let a = defect_matrix(&spec, n, &m, &QuadratureSettings::default()).unwrap();
            assert_eq!((a.rows(), a.cols()), (1, 2));
            let e0 = -(0.5f64).powi(n as i32 + 1);
            let e1 = -(0.5f64).powi(n as i32);
            assert!((a.get(0, 0) - c(e0, 0.0)).norm() < 1e-15);
            assert!((a.get(0, 1) - c(e1, 0.0)).norm() < 1e-15);
            let sol = solve_denominator(&a, &Tolerances::default());
            let ratio = sol.q[0] / sol.q[1];
            assert!((ratio - c(-2.0, 0.0)).norm() < 1e-12);
            assert!(sol.unique);
        }
    }

    #[test]
    fn identical_rows_are_flagged() {
        let spec = disk_spec(&[&[2.0], &[2.0]]);
        let m = MultiIndex::new(vec![1, 1]).unwrap();
        let a = defect_matrix(&spec, 3, &m, &QuadratureSettings::default()).unwrap();
        assert!(!solve_denominator(&a, &Tolerances::default()).unique);
        let zero = solve_denominator(&Matrix::<f64>::zeros(2, 3), &Tolerances::default());
        assert!(!zero.unique);
        let norm: f64 = zero.q.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalization_examples() {
        let g = Geometry::unit_disk();
        let raw = ComplexPolynomial::from_real(&[6.0, -5.0, 1.0]);
        let q = normalize_denominator(&raw, 1.5, &g, 1e-10).unwrap();
        let expected = ComplexPolynomial::from_real(&[1.0, -5.0 / 6.0, 1.0 / 6.0]);
        assert!(q.coeff_distance(&expected) < 1e-14);
        let inside = ComplexPolynomial::from_real(&[-2.6, 2.0]);
        let q = normalize_denominator(&inside, 1.5, &g, 1e-10).unwrap();
        assert!(q.coeff_distance(&ComplexPolynomial::from_real(&[-1.3, 1.0])) < 1e-15);
        let constant = ComplexPolynomial::constant(c(0.0, 3.0));
        assert_eq!(normalize_denominator(&constant, 1.5, &g, 1e-10).unwrap(), ComplexPolynomial::one());
        // a zero at the origin always gets the monic factor
        let origin = ComplexPolynomial::from_real(&[0.0, 5.0]);
        assert_eq!(normalized_from_roots(&[c(0.0, 0.0)], 0.75, &g), ComplexPolynomial::monomial(1));
        assert!(normalize_denominator(&origin, 0.75, &g, 1e-10).is_ok());
    }

    #[test]
    fn scalar_numerator_is_exact() {
        let spec = disk_spec(&[&[2.0]]);
        let m = MultiIndex::new(vec![1]).unwrap();
        let q = ComplexPolynomial::from_real(&[1.0, -0.5]);
        let nums = numerators(&spec, &q, 3, &m, &QuadratureSettings::default(), &Tolerances::default()).unwrap();
        assert!((nums.p[0].coeffs[0] - c(-0.5, 0.0)).norm() < 1e-15);
        assert!(nums.p[0].coeffs[1..].iter().all(|z| z.norm() < 1e-15));
        assert_eq!(nums.residuals[0].len(), 1 + 8);
        assert!(nums.residuals[0].iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn scalar_approximant_recovers_the_function() {
        let spec = disk_spec(&[&[2.0]]);
        let m = MultiIndex::new(vec![1]).unwrap();
        let profile = pole_profile(&spec, &m).unwrap();
        let res = simultaneous_pade(&spec, &m, 2, &QuadratureSettings::default(), &Tolerances::default(), Some(&profile)).unwrap();
        assert!(res.q.coeff_distance(&ComplexPolynomial::from_real(&[1.0, -0.5])) < 1e-13);
        assert!((res.evaluate(0, c(0.0, 0.0)).unwrap() - c(-0.5, 0.0)).norm() < 1e-13);
        assert!(matches!(res.evaluate(0, c(2.0, 0.0)), Err(Error::PoleEvaluation { .. })));
        assert!(res.evaluate(0, c(0.3, 0.9)).unwrap().norm().is_finite());
        assert!(res.defect_ok);
    }

    #[test]
    fn radii_respect_the_nearest_pole() {
        let spec = disk_spec(&[&[2.0, 6.0], &[3.0]]);
        let r = quadrature_radii(&spec, &QuadratureSettings::default()).unwrap();
        assert!((r[0] - 1.9).abs() < 1e-15 && (r[1] - 2.8).abs() < 1e-15);
        let bad = QuadratureSettings {
            rho: Some(2.5),
            ..QuadratureSettings::default()
        };
        assert!(quadrature_radii(&spec, &bad).is_err());
    }

    #[test]
    fn row_index_must_cover_the_multi_index() {
        let spec = disk_spec(&[&[2.0]]);
        let m = MultiIndex::new(vec![3]).unwrap();
        assert!(defect_matrix(&spec, 2, &m, &QuadratureSettings::default()).is_err());
    }
}
