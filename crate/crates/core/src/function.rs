//! Test functions: vectors of rational functions with known poles.

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::polynomial::ComplexPolynomial;
use crate::precision::{lift, lower, Real};

/// A function that can be sampled in any working precision.
pub trait ComplexFunction: Sync {
    fn eval<T: Real>(&self, z: Complex<T>) -> Complex<T>;
}

impl<F: ComplexFunction> ComplexFunction for &F {
    fn eval<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        (**self).eval(z)
    }
}

/// Adapter for plain `f64` closures. Higher working precisions only see the
/// closure's double-precision values.
pub struct FnFunction<F>(pub F);

impl<F: Fn(Complex64) -> Complex64 + Sync> ComplexFunction for FnFunction<F> {
    fn eval<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        lift((self.0)(lower(z)))
    }
}

/// `Σ_l c_l (z − λ)^{−l}`, `l = 1..=τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalPart {
    pub pole: Complex64,
    /// `coefficients[l - 1]` multiplies `(z − λ)^{−l}`.
    pub coefficients: Vec<Complex64>,
}

impl PrincipalPart {
    pub fn new(pole: Complex64, coefficients: Vec<Complex64>) -> Self {
        Self { pole, coefficients }
    }

    /// A pole of the given order with top coefficient 1 and no lower terms.
    pub fn simple(pole: Complex64, order: usize) -> Self {
        let mut coefficients = vec![Complex64::zero(); order];
        if let Some(top) = coefficients.last_mut() {
            *top = Complex64::one();
        }
        Self { pole, coefficients }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn eval<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        let u = Complex::<T>::one() / (z - lift::<T>(self.pole));
        let mut acc = Complex::<T>::zero();
        for c in self.coefficients.iter().rev() {
            acc = (acc + lift::<T>(*c)) * u;
        }
        acc
    }
}

/// One component `F_α`: principal parts plus a polynomial entire part.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComponentFunction {
    pub principal_parts: Vec<PrincipalPart>,
    pub entire: ComplexPolynomial,
}

impl ComponentFunction {
    pub fn new(principal_parts: Vec<PrincipalPart>, entire: ComplexPolynomial) -> Self {
        Self {
            principal_parts,
            entire,
        }
    }

    /// `Σ_j 1/(z − λ_j)`.
    pub fn simple_poles(poles: &[Complex64]) -> Self {
        Self {
            principal_parts: poles.iter().map(|&p| PrincipalPart::simple(p, 1)).collect(),
            entire: ComplexPolynomial::zero(),
        }
    }

    /// Poles with their orders in this component.
    pub fn poles(&self) -> impl Iterator<Item = (Complex64, usize)> + '_ {
        self.principal_parts.iter().map(|p| (p.pole, p.order()))
    }

    /// The same function multiplied by `s`.
    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            principal_parts: self
                .principal_parts
                .iter()
                .map(|p| PrincipalPart::new(p.pole, p.coefficients.iter().map(|c| c * s).collect()))
                .collect(),
            entire: self.entire.scale(s),
        }
    }
}

impl ComplexFunction for ComponentFunction {
    fn eval<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = self.entire.eval_in(z);
        for part in &self.principal_parts {
            acc += part.eval(z);
        }
        acc
    }
}

/// A d-vector of meromorphic test functions on a compact set, with exact pole data.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFunctionSpec {
    geometry: Geometry,
    components: Vec<ComponentFunction>,
}

impl VectorFunctionSpec {
    pub fn new(geometry: Geometry, components: Vec<ComponentFunction>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidFunction("at least one component is required".into()));
        }
        for (alpha, comp) in components.iter().enumerate() {
            for (j, part) in comp.principal_parts.iter().enumerate() {
                let where_ = format!("component {}, pole {}", alpha + 1, j + 1);
                if !(part.pole.re.is_finite() && part.pole.im.is_finite()) {
                    return Err(Error::InvalidFunction(format!("{where_}: pole must be finite")));
                }
                if part.coefficients.is_empty() {
                    return Err(Error::InvalidFunction(format!("{where_}: order must be positive")));
                }
                if part.coefficients.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
                    return Err(Error::InvalidFunction(format!(
                        "{where_}: coefficients must be finite"
                    )));
                }
                if part.coefficients.last().is_some_and(|c| c.is_zero()) {
                    return Err(Error::InvalidFunction(format!(
                        "{where_}: top principal coefficient must be nonzero"
                    )));
                }
                let level = geometry.level(part.pole);
                if !(level > 1.0) {
                    return Err(Error::InvalidFunction(format!(
                        "{where_}: pole {} lies in E (|Φ| = {level})",
                        part.pole
                    )));
                }
                for other in &comp.principal_parts[..j] {
                    if same_point(other.pole, part.pole) {
                        return Err(Error::InvalidFunction(format!(
                            "{where_}: pole {} is listed twice; merge the principal parts",
                            part.pole
                        )));
                    }
                }
            }
        }
        Ok(Self {
            geometry,
            components,
        })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn components(&self) -> &[ComponentFunction] {
        &self.components
    }

    pub fn component(&self, alpha: usize) -> &ComponentFunction {
        &self.components[alpha]
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, alpha: usize, z: Complex64) -> Complex64 {
        self.components[alpha].eval(z)
    }

    /// Smallest `|Φ(λ)|` over the poles of component `alpha`, `None` if it has none.
    pub fn nearest_pole_level(&self, alpha: usize) -> Option<f64> {
        self.components[alpha]
            .poles()
            .map(|(p, _)| self.geometry.level(p))
            .reduce(f64::min)
    }

    pub fn has_poles(&self) -> bool {
        self.components.iter().any(|c| !c.principal_parts.is_empty())
    }

    /// Same spec with component `alpha` multiplied by `s`.
    pub fn with_scaled_component(&self, alpha: usize, s: Complex64) -> Self {
        let mut out = self.clone();
        out.components[alpha] = out.components[alpha].scaled(s);
        out
    }
}

/// Pole identity used across components.
pub(crate) fn same_point(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * (1.0 + a.norm().max(b.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::DoubleDouble;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn component_evaluation() {
        let f = ComponentFunction::new(
            vec![PrincipalPart::new(c(2.0, 0.0), vec![c(1.0, 0.0), c(3.0, 0.0)])],
            ComplexPolynomial::from_real(&[1.0, 1.0]),
        );
        // 1/(z-2) + 3/(z-2)^2 + 1 + z at z = 0
        let v = f.eval(c(0.0, 0.0));
        assert!((v - c(-0.5 + 0.75 + 1.0, 0.0)).norm() < 1e-15);
        let dd = f.eval(Complex::new(DoubleDouble::from(0.0), DoubleDouble::from(0.0)));
        assert!((lower(dd) - v).norm() < 1e-15);
    }

    #[test]
    fn validation() {
        let g = Geometry::unit_disk();
        let inside = ComponentFunction::simple_poles(&[c(0.5, 0.0)]);
        assert!(VectorFunctionSpec::new(g, vec![inside]).is_err());
        assert!(VectorFunctionSpec::new(g, vec![]).is_err());
        let zero_top = ComponentFunction::new(
            vec![PrincipalPart::new(c(2.0, 0.0), vec![c(1.0, 0.0), c(0.0, 0.0)])],
            ComplexPolynomial::zero(),
        );
        assert!(VectorFunctionSpec::new(g, vec![zero_top]).is_err());
        let dup = ComponentFunction::simple_poles(&[c(2.0, 0.0), c(2.0, 0.0)]);
        assert!(VectorFunctionSpec::new(g, vec![dup]).is_err());
        let ok = ComponentFunction::simple_poles(&[c(2.0, 0.0), c(3.0, 0.0)]);
        let spec = VectorFunctionSpec::new(g, vec![ok]).unwrap();
        assert_eq!(spec.nearest_pole_level(0), Some(2.0));
    }

    #[test]
    fn closures_adapt() {
        let f = FnFunction(|z: Complex64| z * z);
        assert_eq!(f.eval(c(0.0, 2.0)), c(-4.0, 0.0));
    }
}
