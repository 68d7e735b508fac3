//! Small dense complex linear algebra in a generic working precision.

use num_complex::Complex;
use num_traits::Zero;

use crate::precision::{cabs, Real};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex<T>] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Real>(&self, f: impl Fn(Complex<T>) -> Complex<U>) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }
}

/// Singular values and right singular vectors, smallest singular value first.
///
/// A matrix with `cols > rows` reports `cols` values, the surplus being zero,
/// so that the first vector always spans a null direction.
#[derive(Debug, Clone)]
pub struct RightSvd<T: Real> {
    pub singular_values: Vec<T>,
    pub vectors: Vec<Vec<Complex<T>>>,
    pub sweeps: usize,
}

const MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi SVD: rotate column pairs of `A V` until they
/// are mutually orthogonal; the column norms are then the singular values.
pub fn jacobi_svd<T: Real>(a: &Matrix<T>) -> RightSvd<T> {
    let (m, n) = (a.rows, a.cols);
    // column-major working copies
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| (0..m).map(|i| a.get(i, j)).collect()).collect();
    let mut v: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex::zero(); n];
            e[j] = Complex::new(T::one(), T::zero());
            e
        })
        .collect();
    let tol = T::from_f64(T::EPSILON * (m.max(1) as f64));
    // columns below this squared norm are rounding noise of a null direction
    let negligible = cols.iter().fold(T::zero(), |acc, c| acc + norm_sqr(c)) * tol * tol;
    let mut sweeps = 0;
    for _ in 0..MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&cols[p]);
                let beta = norm_sqr(&cols[q]);
                let gamma = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .fold(Complex::<T>::zero(), |acc, (x, y)| acc + x.conj() * *y);
                let g = cabs(gamma);
                if g.is_zero()
                    || alpha <= negligible
                    || beta <= negligible
                    || g <= tol * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let phase = Complex::new(gamma.re / g, -(gamma.im / g));
                let zeta = (beta - alpha) / (T::from_f64(2.0) * g);
                let root = (T::one() + zeta * zeta).sqrt();
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + root)
                } else {
                    -T::one() / (-zeta + root)
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(T, usize)> = cols.iter().enumerate().map(|(j, c)| (norm_sqr(c).sqrt(), j)).collect();
    order.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal).then(x.1.cmp(&y.1)));
    RightSvd {
        singular_values: order.iter().map(|o| o.0).collect(),
        vectors: order.iter().map(|o| v[o.1].clone()).collect(),
        sweeps,
    }
}

fn norm_sqr<T: Real>(x: &[Complex<T>]) -> T {
    x.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
}

/// `x_p ← c x_p − s e x_q`, `x_q ← s x_p + c e x_q`.
fn rotate<T: Real>(x: &mut [Vec<Complex<T>>], p: usize, q: usize, phase: Complex<T>, c: T, s: T) {
    let (lo, hi) = x.split_at_mut(q);
    let xp = &mut lo[p];
    let xq = &mut hi[0];
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bp = *b * phase;
        let ap = *a;
        *a = ap * c - bp * s;
        *b = ap * s + bp * c;
    }
}
