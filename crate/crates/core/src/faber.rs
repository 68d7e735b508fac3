//! Faber polynomials, Faber coefficients by contour quadrature, and the
//! root-test estimate of the convergence radius.

use std::ops::Range;

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::function::ComplexFunction;
use crate::geometry::Geometry;
use crate::polynomial::ComplexPolynomial;
use crate::precision::{is_finite_complex, lift, lower, DoubleDouble, Precision, Real};

/// Relative level below which Faber coefficients are treated as quadrature noise.
pub const NOISE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct FaberBasis {
    geometry: Geometry,
    polys: Vec<ComplexPolynomial>,
}

impl FaberBasis {
    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn polys(&self) -> &[ComplexPolynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// `Φ_0(z), …, Φ_{len−1}(z)` by the three-term recurrence, which stays
    /// accurate where the power-basis coefficients would cancel badly.
    pub fn values(&self, z: Complex64) -> Vec<Complex64> {
        faber_values(&self.geometry, z, self.polys.len().saturating_sub(1))
    }
}

/// `Φ_0, …, Φ_{n_max}` in the power basis.
pub fn faber_basis(g: &Geometry, n_max: usize) -> FaberBasis {
    let a = Complex64::new(g.capacity(), 0.0);
    let shift = ComplexPolynomial::new(vec![-g.center(), Complex64::one()]);
    let tail = g.tail();
    let mut polys = Vec::with_capacity(n_max + 1);
    polys.push(ComplexPolynomial::one());
    for n in 0..n_max {
        let mut next = &shift * &polys[n];
        if n >= 1 {
            next = &next - &polys[n - 1].scale(tail);
        }
        if n == 1 {
            next = &next - &ComplexPolynomial::constant(tail);
        }
        polys.push(next.scale(Complex64::one() / a));
    }
    FaberBasis {
        geometry: *g,
        polys,
    }
}

/// `Φ_0(z), …, Φ_{n_max}(z)` evaluated pointwise in the working precision.
pub fn faber_values_in<T: Real>(g: &Geometry, z: Complex<T>, n_max: usize) -> Vec<Complex<T>> {
    let inv_a = T::one() / T::from_f64(g.capacity());
    let u = z - lift::<T>(g.center());
    let tail = lift::<T>(g.tail());
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(Complex::<T>::one());
    for n in 0..n_max {
        let mut next = u * out[n];
        if n >= 1 {
            next -= tail * out[n - 1];
        }
        if n == 1 {
            next -= tail;
        }
        out.push(next * inv_a);
    }
    out
}

pub fn faber_values(g: &Geometry, z: Complex64, n_max: usize) -> Vec<Complex64> {
    faber_values_in(g, z, n_max)
}

/// The Faber polynomial `Φ_n` of a geometry, evaluated by recurrence.
#[derive(Debug, Clone, Copy)]
pub struct FaberPolynomial {
    pub geometry: Geometry,
    pub degree: usize,
}

impl ComplexFunction for FaberPolynomial {
    fn eval<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        faber_values_in(&self.geometry, z, self.degree)[self.degree]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaberCoefficients {
    pub values: Vec<Complex64>,
    pub rho_used: f64,
    pub nodes_used: usize,
}

/// Trapezoidal rule on the level curve `|Φ| = ρ` in working precision `T`.
#[derive(Debug, Clone)]
pub struct ContourQuadrature<T: Real> {
    rho: f64,
    nodes: Vec<Complex<T>>,
    scales: Vec<T>,
}

impl<T: Real> ContourQuadrature<T> {
    /// Nodes `Ψ(ρ e^{2πis/N})` able to resolve coefficients `0..=n_max`.
    pub fn new(g: &Geometry, rho: f64, count: usize, n_max: usize) -> Result<Self> {
        if !(rho > 1.0 && rho.is_finite()) {
            return Err(Error::InvalidRadius(rho));
        }
        let required = 2 * (n_max + 1);
        if count < required {
            return Err(Error::TooFewNodes {
                nodes: count,
                coefficients: n_max + 1,
                required,
            });
        }
        let r = T::from_f64(rho);
        let nodes = (0..count)
            .map(|s| g.psi_in(T::unit_root(s, count) * r))
            .collect();
        // ρ^{-n} / N
        let inv_r = T::one() / r;
        let mut scales = Vec::with_capacity(n_max + 1);
        let mut scale = T::one() / T::from_f64(count as f64);
        for _ in 0..=n_max {
            scales.push(scale);
            scale *= inv_r;
        }
        Ok(Self { rho, nodes, scales })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn nodes(&self) -> &[Complex<T>] {
        &self.nodes
    }

    pub fn n_max(&self) -> usize {
        self.scales.len() - 1
    }

    /// Samples of `f` at the nodes, rejecting non-finite values.
    pub fn sample<F: ComplexFunction + ?Sized>(&self, f: &F) -> Result<Vec<Complex<T>>> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(index, &t)| {
                let value = f.eval(t);
                if is_finite_complex(value) {
                    Ok(value)
                } else {
                    Err(Error::NonFiniteSample {
                        index,
                        t: lower(t),
                        value: lower(value),
                    })
                }
            })
            .collect()
    }

    /// Faber coefficients `0..=n_max` from samples at the nodes.
    pub fn coefficients(&self, samples: &[Complex<T>]) -> Vec<Complex<T>> {
        debug_assert_eq!(samples.len(), self.nodes.len());
        let mut out = T::forward_dft(samples, self.scales.len());
        for (c, s) in out.iter_mut().zip(&self.scales) {
            *c = *c * *s;
        }
        out
    }
}

/// `[G]_n`, `n = 0..=n_max`, by the trapezoidal rule on `|Φ| = ρ` with `count` nodes.
pub fn faber_coefficients<F: ComplexFunction + ?Sized>(
    f: &F,
    g: &Geometry,
    n_max: usize,
    rho: f64,
    count: usize,
) -> Result<FaberCoefficients> {
    faber_coefficients_in_precision(f, g, n_max, rho, count, Precision::Double)
}

pub fn faber_coefficients_in_precision<F: ComplexFunction + ?Sized>(
    f: &F,
    g: &Geometry,
    n_max: usize,
    rho: f64,
    count: usize,
    precision: Precision,
) -> Result<FaberCoefficients> {
    let values = match precision {
        Precision::Double => coefficients_with::<f64, F>(f, g, n_max, rho, count)?,
        Precision::DoubleDouble => coefficients_with::<DoubleDouble, F>(f, g, n_max, rho, count)?,
    };
    Ok(FaberCoefficients {
        values,
        rho_used: rho,
        nodes_used: count,
    })
}

fn coefficients_with<T: Real, F: ComplexFunction + ?Sized>(
    f: &F,
    g: &Geometry,
    n_max: usize,
    rho: f64,
    count: usize,
) -> Result<Vec<Complex64>> {
    let quad = ContourQuadrature::<T>::new(g, rho, count, n_max)?;
    let samples = quad.sample(f)?;
    Ok(quad.coefficients(&samples).into_iter().map(lower).collect())
}

/// `Σ_{n < n_terms} [G]_n Φ_n(z)`.
pub fn evaluate_faber_series(
    c: &FaberCoefficients,
    basis: &FaberBasis,
    z: Complex64,
    n_terms: usize,
) -> Result<Complex64> {
    let available = c.values.len().min(basis.len());
    if n_terms > available {
        return Err(Error::InvalidArgument(format!(
            "{n_terms} terms requested but only {available} are available"
        )));
    }
    if n_terms == 0 {
        return Ok(Complex64::zero());
    }
    let phis = faber_values(basis.geometry(), z, n_terms - 1);
    Ok(c.values[..n_terms]
        .iter()
        .zip(&phis)
        .map(|(a, p)| a * p)
        .sum())
}

/// `1 / limsup |[G]_n|^{1/n}` estimated by a least-squares fit of
/// `log |[G]_n|` against `n` over `window`.
pub fn estimate_rho0(c: &FaberCoefficients, window: Range<usize>) -> Result<f64> {
    let scale = c.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let floor = NOISE_FLOOR * scale;
    if window.is_empty() {
        return Err(Error::InvalidArgument("empty coefficient window".into()));
    }
    let points: Vec<(f64, f64)> = window
        .filter(|&n| n < c.values.len())
        .filter_map(|n| {
            let a = c.values[n].norm();
            (a > floor && a > 0.0).then(|| (n as f64, a.ln()))
        })
        .collect();
    match points.len() {
        0 => Err(Error::IndeterminateRate { floor }),
        1 => Err(Error::InsufficientData {
            available: 1,
            required: 2,
        }),
        _ => Ok((-least_squares_slope(&points)).exp()),
    }
}

pub(crate) fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// `Φ_n` as the polynomial part of `Φ(z)^n`, with the coefficients of its
/// expansion about `c₀` computed as contour integrals over `|Φ| = ρ`.
pub fn faber_polynomial_by_quadrature(
    g: &Geometry,
    n: usize,
    rho: f64,
    count: usize,
    precision: Precision,
) -> Result<ComplexPolynomial> {
    if !(rho > 1.0 && rho.is_finite()) {
        return Err(Error::InvalidRadius(rho));
    }
    if count < 2 * (n + 1) {
        return Err(Error::TooFewNodes {
            nodes: count,
            coefficients: n + 1,
            required: 2 * (n + 1),
        });
    }
    let about_center = match precision {
        Precision::Double => polynomial_part::<f64>(g, n, rho, count),
        Precision::DoubleDouble => polynomial_part::<DoubleDouble>(g, n, rho, count),
    };
    Ok(ComplexPolynomial::new(about_center).shifted(-g.center()))
}

fn polynomial_part<T: Real>(g: &Geometry, n: usize, rho: f64, count: usize) -> Vec<Complex64> {
    let r = T::from_f64(rho);
    let c0 = lift::<T>(g.center());
    let mut sums = vec![Complex::<T>::zero(); n + 1];
    for s in 0..count {
        let w = T::unit_root(s, count) * r;
        let mut wn = w;
        for _ in 0..n {
            wn *= w;
        }
        // (1/2πi) ∮ Φ^n (z − c₀)^{−i−1} dz with z = Ψ(w), dz = Ψ'(w) i w dθ
        let inv = Complex::<T>::one() / (g.psi_in(w) - c0);
        let mut term = wn * g.psi_prime_in(w) * inv;
        for acc in sums.iter_mut() {
            *acc += term;
            term *= inv;
        }
    }
    let inv_count = T::one() / T::from_f64(count as f64);
    sums.into_iter().map(|v| lower(v * inv_count)).collect()
}
