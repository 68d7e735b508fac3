//! Working-precision scalars.
//!
//! Most of the crate runs in `f64`. The defect system of a row sequence is
//! exponentially ill-conditioned in `n` whenever the poles of `F` sit on
//! widely separated level curves, and the Faber coefficients of large-degree
//! polynomials on a level curve `Γ_ρ` carry absolute rounding errors of order
//! `ε ρ^n`. For those cases the quadrature and the null-space solve can be
//! carried out in double-double arithmetic (about 32 significant digits).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{
    Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign,
};
use std::str::FromStr;
use std::sync::Arc;

use num_complex::{Complex, Complex64};
use num_traits::{Num, NumAssign, One, Zero};
use rustfft::FftPlanner;

/// Arithmetic used by the quadrature and null-space kernels.
pub trait Real:
    Copy
    + Send
    + Sync
    + fmt::Debug
    + PartialOrd
    + Num
    + NumAssign
    + Neg<Output = Self>
    + 'static
{
    /// Unit roundoff of the representation.
    const EPSILON: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn pi() -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn is_finite(self) -> bool;

    fn hypot(self, other: Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let r = small / big;
        big * (Self::one() + r * r).sqrt()
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// `exp(i θ)` for θ = 2π k / n, accurate to the working precision.
    fn unit_root(k: usize, n: usize) -> Complex<Self> {
        let theta = Self::pi() * Self::from_f64(2.0) * Self::from_f64(k as f64)
            / Self::from_f64(n as f64);
        let (s, c) = theta.sin_cos();
        Complex::new(c, s)
    }

    /// Leading `count` bins of the forward DFT `Σ_s x_s e^{-2πi k s / N}`.
    fn forward_dft(samples: &[Complex<Self>], count: usize) -> Vec<Complex<Self>>;
}

/// Modulus of a complex number in the working precision.
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

pub fn lift<T: Real>(z: Complex64) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

pub fn lower<T: Real>(z: Complex<T>) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

pub fn is_finite_complex<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl Real for f64 {
    const EPSILON: f64 = f64::EPSILON;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn hypot(self, other: Self) -> Self {
        f64::hypot(self, other)
    }
    fn unit_root(k: usize, n: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
    }

    fn forward_dft(samples: &[Complex64], count: usize) -> Vec<Complex64> {
        let mut buffer = samples.to_vec();
        let fft: Arc<dyn rustfft::Fft<f64>> =
            FftPlanner::new().plan_fft_forward(samples.len());
        fft.process(&mut buffer);
        buffer.truncate(count);
        buffer
    }
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    fn renormalized(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn trunc(self) -> Self {
        let hi = self.hi.trunc();
        if hi == self.hi {
            Self::renormalized(hi, self.lo.trunc())
        } else {
            Self::new(hi, 0.0)
        }
    }

    pub fn round(self) -> Self {
        let hi = self.hi.round();
        if hi == self.hi {
            Self::renormalized(hi, self.lo.round())
        } else if (hi - self.hi).abs() == 0.5 {
            // tie on the leading word: the trailing word decides
            let adjusted = if self.lo < 0.0 && hi > self.hi {
                hi - 1.0
            } else if self.lo > 0.0 && hi < self.hi {
                hi + 1.0
            } else {
                hi
            };
            Self::new(adjusted, 0.0)
        } else {
            Self::new(hi, 0.0)
        }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Self::renormalized(p, e + self.lo * b)
    }

    const PI: DoubleDouble = DoubleDouble::new(3.141592653589793, 1.2246467991473532e-16);
    const FRAC_PI_2: DoubleDouble = DoubleDouble::new(1.5707963267948966, 6.123233995736766e-17);

    /// Taylor series for |x| ≤ π/4.
    fn sin_cos_reduced(x: Self) -> (Self, Self) {
        let x2 = x * x;
        let tiny = 1e-34;
        let mut sin = x;
        let mut term = x;
        let mut k = 1.0;
        loop {
            term = -(term * x2) / Self::from(((k + 1.0) * (k + 2.0)) as f64);
            k += 2.0;
            sin += term;
            if term.hi.abs() < tiny {
                break;
            }
        }
        let mut cos = Self::one();
        let mut term = Self::one();
        let mut k = 0.0;
        loop {
            term = -(term * x2) / Self::from(((k + 1.0) * (k + 2.0)) as f64);
            k += 2.0;
            cos += term;
            if term.hi.abs() < tiny {
                break;
            }
        }
        (sin, cos)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::new(x, 0.0)
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.hi, f)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Self::renormalized(s, e + f)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.hi, -self.lo)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        Self::renormalized(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self::new(q1, q2) + Self::from(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        self - b * (self / b).trunc()
    }
}

macro_rules! assign_op {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            fn $method(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    };
}

assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);
assign_op!(RemAssign, rem_assign, %);

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::new(1.0, 0.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = std::num::ParseFloatError;

    // Parses through `f64`; literals are therefore exact only to double precision.
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            // only decimal literals are meaningful here
            return f64::from_str("not a number").map(Self::from);
        }
        f64::from_str(s).map(Self::from)
    }
}

impl Real for DoubleDouble {
    const EPSILON: f64 = 4.93038065763132e-32;

    fn from_f64(x: f64) -> Self {
        Self::from(x)
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from(self.hi.sqrt());
        }
        let a = self.hi.sqrt();
        let y = Self::from(a);
        y + (self - y * y).mul_f64(0.5 / a)
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
    fn pi() -> Self {
        Self::PI
    }
    fn sin_cos(self) -> (Self, Self) {
        let k = (self / Self::FRAC_PI_2).round();
        let r = self - k * Self::FRAC_PI_2;
        let (s, c) = Self::sin_cos_reduced(r);
        match (k.hi as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    fn forward_dft(samples: &[Complex<Self>], count: usize) -> Vec<Complex<Self>> {
        let n = samples.len();
        let twiddles: Vec<Complex<Self>> = (0..n).map(|s| Self::unit_root(s, n).conj()).collect();
        (0..count)
            .map(|k| {
                let mut acc = Complex::new(Self::zero(), Self::zero());
                let mut idx = 0usize;
                for x in samples {
                    acc += *x * twiddles[idx];
                    idx += k;
                    if idx >= n {
                        idx %= n;
                    }
                }
                acc
            })
            .collect()
    }
}

/// Arithmetic used for quadrature and the defect-system solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    DoubleDouble,
}
