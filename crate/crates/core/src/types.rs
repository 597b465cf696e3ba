//! Complex unit vectors, certified unitary matrices, tolerances and phase
//! helpers shared by every other module.
//!
//! Inner products are conjugate-linear in the **first** argument:
//! `(u, v) = Σ_j conj(u_j) v_j`. Every Bargmann-invariant phase in this crate
//! changes sign under the opposite convention, so this is not cosmetic.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Numerical thresholds used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed `| ||v||^2 - 1 |` for unit vectors.
    pub norm: f64,
    /// Allowed `max |M^H M - I|` for unitary matrices.
    pub unitary: f64,
    /// Moduli at or below this are treated as zero (undefined phases,
    /// non-generic configurations).
    pub generic: f64,
    /// Phase comparisons, in radians.
    pub phase: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            norm: 1e-12,
            unitary: 1e-10,
            generic: 1e-8,
            phase: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn new(norm: f64, unitary: f64, generic: f64, phase: f64) -> Result<Self> {
        let tol = Tolerances {
            norm,
            unitary,
            generic,
            phase,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("norm", self.norm),
            ("unitary", self.unitary),
            ("generic", self.generic),
            ("phase", self.phase),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }
}

pub(crate) fn check_finite<'a>(values: impl IntoIterator<Item = &'a Complex64>) -> Result<()> {
    if values.into_iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// A normalized complex vector of dimension `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(DVector<Complex64>);

impl UnitVector {
    /// Accepts `components` if their squared norm is within the default
    /// `tol.norm` of one.
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(components, Tolerances::default().norm)
    }

    pub fn with_tolerance(components: Vec<Complex64>, tol_norm: f64) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Empty);
        }
        check_finite(&components)?;
        let v = DVector::from_vec(components);
        let deviation = (v.norm_squared() - 1.0).abs();
        if deviation > tol_norm {
            return Err(Error::NotNormalized {
                deviation,
                tol: tol_norm,
            });
        }
        Ok(UnitVector(v))
    }

    /// Rescales an arbitrary nonzero vector to unit length.
    pub fn normalized(components: Vec<Complex64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Empty);
        }
        check_finite(&components)?;
        let v = DVector::from_vec(components);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(UnitVector(v.unscale(norm)))
    }

    /// Convenience constructor from real amplitudes, normalized.
    pub fn from_real(components: &[f64]) -> Result<Self> {
        Self::normalized(components.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Standard basis vector `e_k` (0-based).
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        let mut v = DVector::zeros(dim);
        v[k] = Complex64::new(1.0, 0.0);
        Ok(UnitVector(v))
    }

    /// Wraps a vector already known to be normalized (columns of certified
    /// unitaries, products of unit vectors with phases).
    pub(crate) fn from_dvector_unchecked(v: DVector<Complex64>) -> Self {
        UnitVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn as_dvector(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn get(&self, k: usize) -> Complex64 {
        self.0[k]
    }

    /// `e^{iθ} v`.
    pub fn with_phase(&self, theta: f64) -> Self {
        UnitVector(&self.0 * Complex64::from_polar(1.0, theta))
    }

    /// `(self, other)`, conjugate-linear in `self`.
    pub fn inner(&self, other: &UnitVector) -> Result<Complex64> {
        inner_product(self, other)
    }
}

/// `(u, v) = Σ_j conj(u_j) v_j`.
pub fn inner_product(u: &UnitVector, v: &UnitVector) -> Result<Complex64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(u.0.dotc(&v.0))
}

/// Unchecked inner product for callers that already verified dimensions.
#[inline]
pub(crate) fn overlap(u: &DVector<Complex64>, v: &DVector<Complex64>) -> Complex64 {
    u.dotc(v)
}

/// `max_{jk} |(M^H M - I)_{jk}|`.
pub fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.ncols();
    let gram = m.adjoint() * m;
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((gram[(j, k)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// An `n x n` matrix certified unitary to within `tol.unitary`.
///
/// The certificate is the measured deviation `max |M^H M - I|`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    m: DMatrix<Complex64>,
    deviation: f64,
}

/// Checks `m` for squareness, finiteness and unitarity.
pub fn validate_unitary(m: DMatrix<Complex64>, tol: &Tolerances) -> Result<UnitaryMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::Empty);
    }
    check_finite(m.iter())?;
    let deviation = unitarity_deviation(&m);
    if deviation > tol.unitary {
        return Err(Error::NotUnitary {
            deviation,
            tol: tol.unitary,
        });
    }
    Ok(UnitaryMatrix { m, deviation })
}

impl UnitaryMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        validate_unitary(m, &Tolerances::default())
    }

    /// Row-major constructor.
    pub fn from_rows(n: usize, entries: &[Complex64], tol: &Tolerances) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        validate_unitary(DMatrix::from_row_slice(n, n, entries), tol)
    }

    pub fn identity(n: usize) -> Self {
        UnitaryMatrix {
            m: DMatrix::identity(n, n),
            deviation: 0.0,
        }
    }

    /// `diag(e^{iθ_1}, ..., e^{iθ_n})`.
    pub fn diagonal_phases(thetas: &[f64]) -> Self {
        let d = DVector::from_iterator(
            thetas.len(),
            thetas.iter().map(|&t| Complex64::from_polar(1.0, t)),
        );
        let m = DMatrix::from_diagonal(&d);
        let deviation = unitarity_deviation(&m);
        UnitaryMatrix { m, deviation }
    }

    /// Records the certificate without rejecting; for products of certified
    /// unitaries where drift is pure rounding.
    pub(crate) fn from_product(m: DMatrix<Complex64>) -> Self {
        let deviation = unitarity_deviation(&m);
        UnitaryMatrix { m, deviation }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn deviation(&self) -> f64 {
        self.deviation
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    /// Entry `(j, k)`, 0-based.
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.m[(j, k)]
    }

    /// Column `k` as a unit vector.
    pub fn column(&self, k: usize) -> UnitVector {
        UnitVector::from_dvector_unchecked(self.m.column(k).into_owned())
    }

    pub fn columns(&self) -> Vec<UnitVector> {
        (0..self.dim()).map(|k| self.column(k)).collect()
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix {
            m: self.m.adjoint(),
            deviation: self.deviation,
        }
    }

    pub fn mul(&self, other: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(UnitaryMatrix::from_product(&self.m * &other.m))
    }

    /// Max-entry distance `max |a_jk - b_jk|`.
    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> f64 {
        max_abs_diff(&self.m, &other.m)
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                out.push(self.m[(j, k)]);
            }
        }
        out
    }
}

pub(crate) fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let mut r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    // rem_euclid can land on 2π exactly for tiny negative inputs
    if r <= -PI {
        r += 2.0 * PI;
    }
    r
}

/// Argument in `(-π, π]` without a modulus check. `-π` (from a negative
/// zero imaginary part) is mapped to `π`.
#[inline]
pub fn raw_arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Principal argument in `(-π, π]`.
///
/// Fails with [`Error::UndefinedPhase`] when `|z| <= tol.generic`.
pub fn principal_arg(z: Complex64, tol: &Tolerances) -> Result<f64> {
    let modulus = z.norm();
    if !(modulus > tol.generic) {
        return Err(Error::UndefinedPhase { modulus });
    }
    Ok(raw_arg(z))
}

/// `min(|a - b|, 2π - |a - b|)` after reducing both to `(-π, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (wrap_phase(a) - wrap_phase(b)).abs();
    d.min(2.0 * PI - d)
}

/// Sum with Neumaier compensation; the Pancharatnam sums run over up to
/// 10^5 terms and the convergence checks sit near 1e-10.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}
