//! Compact sets with closed-form exterior conformal maps.
//!
//! Every supported set is the image of the closed unit disk's complement under
//! a Joukowski-type map
//!
//! ```text
//! Ψ(w) = c₀ + c₋₁ w + c₁ / w,     c₋₁ > 0,  |c₁| ≤ c₋₁,
//! ```
//!
//! so `Φ = Ψ⁻¹` is the root of `c₋₁ w² − (z − c₀) w + c₁ = 0` lying outside
//! the unit circle. The disk has `c₁ = 0`, the segment `|c₁| = c₋₁` and the
//! ellipse `|c₁| = c₋₁ / R²`.

use num_complex::{Complex, Complex64};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::precision::{lift, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryKind {
    Disk {
        center: Complex64,
        radius: f64,
    },
    Segment {
        a: Complex64,
        b: Complex64,
    },
    /// Interior of the ellipse with foci `center ± focal e^{i rotation}` and
    /// semi-axes `focal (r ± 1/r) / 2`.
    Ellipse {
        center: Complex64,
        rotation: f64,
        focal: f64,
        r: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    kind: GeometryKind,
    /// c₋₁ = 1 / Φ'(∞)
    capacity: f64,
    /// c₀
    center: Complex64,
    /// c₁
    tail: Complex64,
}

impl Geometry {
    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !finite(center) {
            return Err(Error::InvalidGeometry(format!(
                "disk radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self {
            kind: GeometryKind::Disk { center, radius },
            capacity: radius,
            center,
            tail: Complex64::zero(),
        })
    }

    pub fn unit_disk() -> Self {
        Self::disk(Complex64::zero(), 1.0).expect("unit disk is valid")
    }

    pub fn segment(a: Complex64, b: Complex64) -> Result<Self> {
        if !finite(a) || !finite(b) || a == b {
            return Err(Error::InvalidGeometry(format!(
                "segment endpoints must be finite and distinct, got {a} and {b}"
            )));
        }
        let half = (b - a) / 2.0;
        let h = half.norm();
        let phase = half / h;
        Ok(Self {
            kind: GeometryKind::Segment { a, b },
            capacity: h / 2.0,
            center: (a + b) / 2.0,
            tail: half * phase / 2.0,
        })
    }

    /// The segment `[-1, 1]`.
    pub fn unit_segment() -> Self {
        Self::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0))
            .expect("[-1, 1] is valid")
    }

    pub fn ellipse(center: Complex64, rotation: f64, focal: f64, r: f64) -> Result<Self> {
        if !finite(center) || !rotation.is_finite() {
            return Err(Error::InvalidGeometry("ellipse center and rotation must be finite".into()));
        }
        if !(focal > 0.0 && focal.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "ellipse focal half-distance must be positive, got {focal}"
            )));
        }
        if !(r > 1.0 && r.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "ellipse parameter R must exceed 1, got {r}"
            )));
        }
        let rot = Complex64::from_polar(1.0, 2.0 * rotation);
        Ok(Self {
            kind: GeometryKind::Ellipse {
                center,
                rotation,
                focal,
                r,
            },
            capacity: focal * r / 2.0,
            center,
            tail: rot * (focal / (2.0 * r)),
        })
    }

    pub fn kind(&self) -> &GeometryKind {
        &self.kind
    }

    /// Laurent coefficients `(c₋₁, c₀, c₁, …)` of Ψ at infinity, trailing zeros dropped.
    pub fn laurent(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(self.capacity, 0.0), self.center, self.tail];
        while out.len() > 2 && out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    /// c₋₁
    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    /// c₀
    pub fn center(&self) -> Complex64 {
        self.center
    }

    /// c₁
    pub fn tail(&self) -> Complex64 {
        self.tail
    }

    /// The two preimages of `z` under Ψ, larger modulus first.
    fn preimages(&self, z: Complex64) -> (Complex64, Complex64) {
        let u = z - self.center;
        if self.tail.is_zero() {
            return (u / self.capacity, Complex64::zero());
        }
        // sqrt(u - s) sqrt(u + s) is analytic off the focal segment [-s, s]
        let s = 2.0 * (self.tail * self.capacity).sqrt();
        let root = (u - s).sqrt() * (u + s).sqrt();
        let plus = u + root;
        let minus = u - root;
        let big = if plus.norm() >= minus.norm() { plus } else { minus };
        let w = big / (2.0 * self.capacity);
        let other = if w.is_zero() {
            Complex64::zero()
        } else {
            self.tail / (self.capacity * w)
        };
        (w, other)
    }

    /// `|Φ(z)|` outside E; inside E the larger modulus of the two Ψ-preimages,
    /// which is at most 1. Continuous across ∂E.
    pub fn level(&self, z: Complex64) -> f64 {
        self.preimages(z).0.norm()
    }

    /// Whether `z` lies in the closed set E.
    pub fn contains(&self, z: Complex64) -> bool {
        self.level(z) <= 1.0
    }

    pub fn phi(&self, z: Complex64) -> Result<Complex64> {
        let (w, _) = self.preimages(z);
        let level = w.norm();
        if !(level > 1.0) {
            return Err(Error::PointInsideSet { z, level });
        }
        Ok(w)
    }

    pub fn psi(&self, w: Complex64) -> Result<Complex64> {
        let modulus = w.norm();
        if !(modulus > 1.0) {
            return Err(Error::InsideUnitDisk { modulus });
        }
        Ok(self.psi_in(w))
    }

    pub fn phi_prime(&self, z: Complex64) -> Result<Complex64> {
        let w = self.phi(z)?;
        Ok(Complex64::new(1.0, 0.0) / self.psi_prime_in(w))
    }

    /// Ψ without the `|w| > 1` check, in any working precision.
    pub fn psi_in<T: Real>(&self, w: Complex<T>) -> Complex<T> {
        lift::<T>(self.center)
            + w * T::from_f64(self.capacity)
            + lift::<T>(self.tail) / w
    }

    pub fn psi_prime_in<T: Real>(&self, w: Complex<T>) -> Complex<T> {
        Complex::new(T::from_f64(self.capacity), T::zero()) - lift::<T>(self.tail) / (w * w)
    }

    /// Nodes `t_s = Ψ(ρ e^{2πis/N})` together with `w_s = ρ e^{2πis/N}`.
    pub fn level_curve_nodes(&self, rho: f64, count: usize) -> Result<Vec<(Complex64, Complex64)>> {
        if !(rho > 1.0) {
            return Err(Error::InvalidRadius(rho));
        }
        if count == 0 {
            return Err(Error::InvalidArgument("level curve needs at least one node".into()));
        }
        Ok((0..count)
            .map(|s| {
                let w = f64::unit_root(s, count) * rho;
                (self.psi_in(w), w)
            })
            .collect())
    }

    /// Euclidean distance from `z` to E (zero inside E).
    pub fn distance_to_set(&self, z: Complex64) -> f64 {
        if self.contains(z) {
            return 0.0;
        }
        match self.kind {
            GeometryKind::Disk { center, radius } => ((z - center).norm() - radius).max(0.0),
            GeometryKind::Segment { a, b } => {
                let d = b - a;
                let t = ((z - a) * d.conj()).re / d.norm_sqr();
                let t = t.clamp(0.0, 1.0);
                (z - (a + d * t)).norm()
            }
            GeometryKind::Ellipse { .. } => {
                const SAMPLES: usize = 4096;
                (0..SAMPLES)
                    .map(|s| (z - self.psi_in(f64::unit_root(s, SAMPLES))).norm())
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
