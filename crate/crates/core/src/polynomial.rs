//! Dense complex polynomials in the power basis and their roots.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::function::ComplexFunction;
use crate::precision::{lift, Real};

/// `coeffs[i]` multiplies `z^i`. Trailing zeros are trimmed on construction,
/// so the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Default)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for ComplexPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl ComplexPolynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::zero(); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// `Π (z - r)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| {
            &acc * &Self::new(vec![-r, Complex64::new(1.0, 0.0)])
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Complex64 {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    pub fn eval_in<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + lift::<T>(c))
    }

    /// `Σ |c_i| |z|^i`, the natural scale for rounding errors in `eval`.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// The polynomial `z ↦ p(z + s)`.
    pub fn shifted(&self, s: Complex64) -> Self {
        // Horner in the shifted variable
        let linear = Self::new(vec![s, Complex64::new(1.0, 0.0)]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, &c| {
            &(&acc * &linear) + &Self::constant(c)
        })
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficientwise maximum-modulus distance, padding the shorter polynomial with zeros.
    pub fn coeff_distance(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|i| (self.coeff(i) - other.coeff(i)).norm())
            .fold(0.0, f64::max)
    }

    /// Unit Euclidean norm of the coefficient vector.
    pub fn normalized_euclidean(&self) -> Self {
        let norm = self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return self.clone();
        }
        self.scale(Complex64::new(1.0 / norm, 0.0))
    }
}

impl Add for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn add(self, rhs: Self) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn sub(self, rhs: Self) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn mul(self, rhs: Self) -> ComplexPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPolynomial::zero();
        }
        let mut out = vec![Complex64::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out)
    }
}

impl ComplexFunction for ComplexPolynomial {
    fn eval<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        self.eval_in(z)
    }
}

/// Frobenius companion matrix of the monic rescaling of `p` (degree ≥ 1).
fn companion(p: &ComplexPolynomial) -> DMatrix<Complex64> {
    let d = p.coeffs.len() - 1;
    let lead = p.leading();
    let mut c = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        c[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        c[(i, d - 1)] = -p.coeffs[i] / lead;
    }
    c
}

/// Parlett-Reinsch balancing with radix-2 scalings; eigenvalues are unchanged.
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let norm1 = |z: &Complex64| z.re.abs() + z.im.abs();
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += norm1(&m[(j, i)]);
                    r += norm1(&m[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            let mut rr = r;
            while cc < rr / 2.0 {
                cc *= 4.0;
                rr /= 4.0;
                f *= 2.0;
            }
            while cc >= rr * 2.0 {
                cc /= 4.0;
                rr *= 4.0;
                f /= 2.0;
            }
            if (c * f + r / f) < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Normwise backward error `|p(r)| / (max_i |c_i| Σ_i |r|^i)`.
fn relative_residual(p: &ComplexPolynomial, r: Complex64) -> f64 {
    let m = r.norm();
    let powers = (0..p.coeffs.len()).rev().fold(0.0, |acc, _| acc * m + 1.0);
    let scale = p.max_abs_coeff() * powers;
    if scale == 0.0 {
        return 0.0;
    }
    p.eval(r).norm() / scale
}

/// All roots of `p` with multiplicity.
///
/// Eigenvalues of the balanced companion matrix of the monic rescaling,
/// followed by a few Newton steps on `p` that are kept only when they reduce
/// the residual. Fails when some root still has a relative backward residual
/// above `tol`.
pub fn polynomial_roots(p: &ComplexPolynomial, tol: f64) -> Result<Vec<Complex64>> {
    let degree = p.degree().ok_or_else(|| Error::RootFinding {
        degree: 0,
        reason: "the zero polynomial has no finite root set".into(),
        residual: f64::NAN,
    })?;
    if degree == 0 {
        return Ok(Vec::new());
    }
    if p.coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::RootFinding {
            degree,
            reason: "non-finite coefficient".into(),
            residual: f64::NAN,
        });
    }
    let mut roots = if degree == 1 {
        vec![-p.coeffs[0] / p.coeffs[1]]
    } else {
        let mut c = companion(p);
        balance(&mut c);
        let schur = c
            .try_schur(f64::EPSILON, 10_000)
            .ok_or_else(|| Error::RootFinding {
                degree,
                reason: "Schur iteration did not converge".into(),
                residual: f64::NAN,
            })?;
        let (_, t) = schur.unpack();
        t.diagonal().iter().copied().collect::<Vec<_>>()
    };

    let dp = p.derivative();
    for r in roots.iter_mut() {
        let mut best = relative_residual(p, *r);
        for _ in 0..8 {
            let d = dp.eval(*r);
            if d.is_zero() || best == 0.0 {
                break;
            }
            let candidate = *r - p.eval(*r) / d;
            let res = relative_residual(p, candidate);
            if res < best && candidate.re.is_finite() && candidate.im.is_finite() {
                *r = candidate;
                best = res;
            } else {
                break;
            }
        }
    }

    let worst = roots
        .iter()
        .map(|&r| relative_residual(p, r))
        .fold(0.0, f64::max);
    if !(worst <= tol) {
        return Err(Error::RootFinding {
            degree,
            reason: "backward residual above tolerance".into(),
            residual: worst,
        });
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = ComplexPolynomial::from_real(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        assert!(ComplexPolynomial::from_real(&[0.0]).is_zero());
        assert_eq!(ComplexPolynomial::zero().degree(), None);
    }

    #[test]
    fn roots_of_monic_quadratic() {
        let p = ComplexPolynomial::from_real(&[6.0, -5.0, 1.0]);
        let r = sorted_by_re(polynomial_roots(&p, 1e-10).unwrap());
        assert!((r[0] - c(2.0, 0.0)).norm() < 1e-13);
        assert!((r[1] - c(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn roots_of_rescaled_quadratic() {
        let p = ComplexPolynomial::from_real(&[1.0, -5.0 / 6.0, 1.0 / 6.0]);
        let r = sorted_by_re(polynomial_roots(&p, 1e-10).unwrap());
        assert!((r[0] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn roots_symmetric_pair() {
        let p = ComplexPolynomial::from_real(&[-1.5625, 0.0, 1.0]);
        let r = sorted_by_re(polynomial_roots(&p, 1e-10).unwrap());
        assert!((r[0] - c(-1.25, 0.0)).norm() < 1e-13);
        assert!((r[1] - c(1.25, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn roots_complex_and_zero() {
        let roots = [c(0.0, 0.0), c(1.0, 2.0), c(-3.0, 0.5), c(0.2, -0.7)];
        let p = ComplexPolynomial::from_roots(&roots);
        let found = polynomial_roots(&p, 1e-10).unwrap();
        for r in roots {
            let best = found.iter().map(|f| (f - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10, "missing root {r}");
        }
    }

    #[test]
    fn constant_and_zero_polynomials() {
        assert!(polynomial_roots(&ComplexPolynomial::one(), 1e-10).unwrap().is_empty());
        assert!(matches!(
            polynomial_roots(&ComplexPolynomial::zero(), 1e-10),
            Err(Error::RootFinding { .. })
        ));
    }

    #[test]
    fn shift_and_multiply() {
        // (z + 1)^2 shifted by -1 is z^2
        let p = ComplexPolynomial::from_real(&[1.0, 2.0, 1.0]);
        let q = p.shifted(c(-1.0, 0.0));
        assert!(q.coeff_distance(&ComplexPolynomial::monomial(2)) < 1e-15);
        let prod = &ComplexPolynomial::from_real(&[1.0, 1.0]) * &ComplexPolynomial::from_real(&[1.0, 1.0]);
        assert_eq!(prod, p);
    }
}
