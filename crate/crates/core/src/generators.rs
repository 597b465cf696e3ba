//! Seeded test inputs: Haar unitaries, eigenframes of Hermitian paths and a
//! few hand-built frame evolutions.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::canonical::decompose;
use crate::error::{Error, Result};
use crate::phase::{uniform_grid, FrameEvolution};
use crate::types::{unitarity_deviation, Tolerances, UnitVector, UnitaryMatrix};

/// Eigenvalue gaps at or below this are treated as degeneracies.
pub const MIN_EIGENGAP: f64 = 1e-6;

/// Deviation from unitarity above which generated frames are
/// re-orthonormalized.
const REORTHO_THRESHOLD: f64 = 1e-12;

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| complex_normal(rng))
}

/// QR with the phases of `diag(R)` moved into `Q`, so the result is unique
/// and, for Gaussian input, Haar distributed.
fn orthonormalize(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (k, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(k, k)];
        let norm = d.norm();
        if norm > 0.0 {
            col *= d / norm;
        }
    }
    q
}

/// Haar-random element of U(n).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    UnitaryMatrix::from_product(orthonormalize(ginibre(n, rng)))
}

/// Uniform random unit vector in C^n.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitVector {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
        if let Ok(u) = UnitVector::normalized(v) {
            return u;
        }
    }
}

/// Random Hermitian matrix `(G + G^H) / 2` with Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = ginibre(n, rng);
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Haar unitary accepted by [`decompose`] under `tol`, with the number of
/// rejected draws.
pub fn random_generic_unitary_census(n: usize, seed: u64, tol: &Tolerances) -> (UnitaryMatrix, usize) {
    assert!(n >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rejected = 0;
    loop {
        let u = haar_unitary(n, &mut rng);
        match decompose(&u, tol) {
            Ok(_) => return (u, rejected),
            Err(e) => {
                rejected += 1;
                log::debug!("seed {seed}: rejected draw {rejected} ({e})");
            }
        }
    }
}

/// Seeded Haar unitary that decomposes without hitting a non-generic level.
pub fn random_generic_unitary(n: usize, seed: u64) -> UnitaryMatrix {
    random_generic_unitary_census(n, seed, &Tolerances::default()).0
}

/// Smooth real coefficient function of a [`HermitianPath`].
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    /// `Σ_k c_k s^k`.
    Polynomial(Vec<f64>),
    /// `a_0 + Σ_{k>=1} (a_k cos(k ω s) + b_k sin(k ω s))`; `cos[0]` is `a_0`
    /// and `sin[0]` is ignored.
    Fourier { omega: f64, cos: Vec<f64>, sin: Vec<f64> },
}

impl Coefficient {
    pub fn constant(c: f64) -> Self {
        Coefficient::Polynomial(vec![c])
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Coefficient::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &x| acc * s + x),
            Coefficient::Fourier { omega, cos, sin } => {
                let mut v = cos.first().copied().unwrap_or(0.0);
                for (k, a) in cos.iter().enumerate().skip(1) {
                    v += a * (k as f64 * omega * s).cos();
                }
                for (k, b) in sin.iter().enumerate().skip(1) {
                    v += b * (k as f64 * omega * s).sin();
                }
                v
            }
        }
    }
}

/// `h(s) = Σ_i c_i(s) H_i` over a fixed Hermitian basis, for `s` in
/// `[s1, s2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPath {
    basis: Vec<DMatrix<Complex64>>,
    coefficients: Vec<Coefficient>,
    domain: (f64, f64),
}

fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl HermitianPath {
    pub fn new(
        basis: Vec<DMatrix<Complex64>>,
        coefficients: Vec<Coefficient>,
        domain: (f64, f64),
    ) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Empty);
        }
        if coefficients.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: coefficients.len(),
            });
        }
        let n = basis[0].nrows();
        for (index, h) in basis.iter().enumerate() {
            if h.nrows() != h.ncols() {
                return Err(Error::NotSquare {
                    rows: h.nrows(),
                    cols: h.ncols(),
                });
            }
            if h.nrows() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: h.nrows(),
                });
            }
            let deviation = hermiticity_deviation(h);
            if !(deviation <= 1e-12) {
                return Err(Error::NotHermitian { index, deviation });
            }
        }
        if !(domain.0.is_finite() && domain.1.is_finite()) || domain.1 <= domain.0 {
            return Err(Error::InvalidGrid { index: 1 });
        }
        Ok(HermitianPath {
            basis,
            coefficients,
            domain,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis[0].nrows()
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// `h(s)`, symmetrized so the result is exactly Hermitian.
    pub fn sample(&self, s: f64) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut h = DMatrix::zeros(n, n);
        for (b, c) in self.basis.iter().zip(&self.coefficients) {
            h += b * Complex64::new(c.eval(s), 0.0);
        }
        (&h + h.adjoint()) * Complex64::new(0.5, 0.0)
    }

    /// `diag(e_1, ..., e_n)` conjugated by the planar rotation
    /// `R(s) = [[cos s, -sin s], [sin s, cos s]]`, 2 levels only.
    pub fn rotated_two_level(e1: f64, e2: f64, domain: (f64, f64)) -> Result<Self> {
        let c = |re: [[f64; 2]; 2]| DMatrix::from_fn(2, 2, |j, k| Complex64::new(re[j][k], 0.0));
        let mean = 0.5 * (e1 + e2);
        let half = 0.5 * (e2 - e1);
        // R diag(e1,e2) R^T = mean I - half cos2s σz - half sin2s σx
        Self::new(
            vec![c([[1.0, 0.0], [0.0, 1.0]]), c([[1.0, 0.0], [0.0, -1.0]]), c([[0.0, 1.0], [1.0, 0.0]])],
            vec![
                Coefficient::constant(mean),
                Coefficient::Fourier {
                    omega: 2.0,
                    cos: vec![0.0, -half],
                    sin: vec![],
                },
                Coefficient::Fourier {
                    omega: 2.0,
                    cos: vec![],
                    sin: vec![0.0, -half],
                },
            ],
            domain,
        )
    }
}

/// Eigenvectors of a Hermitian matrix as columns, eigenvalues ascending.
fn sorted_eigenframe(h: DMatrix<Complex64>, s: f64) -> Result<DMatrix<Complex64>> {
    let n = h.nrows();
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    for w in order.windows(2) {
        let gap = eig.eigenvalues[w[1]] - eig.eigenvalues[w[0]];
        if !(gap > MIN_EIGENGAP) {
            return Err(Error::DegenerateSpectrum { s, gap });
        }
    }
    let mut v = DMatrix::from_fn(n, n, |j, k| eig.eigenvectors[(j, order[k])]);
    if unitarity_deviation(&v) > REORTHO_THRESHOLD {
        v = orthonormalize(v);
    }
    Ok(v)
}

/// Largest-modulus component of each column made real positive.
fn fix_initial_phases(v: &mut DMatrix<Complex64>) {
    for mut col in v.column_iter_mut() {
        let pivot = col
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(Complex64::new(1.0, 0.0));
        if pivot.norm() > 0.0 {
            col *= pivot.conj() / pivot.norm();
        }
    }
}

/// Phases chosen so that `(prev_j, v_j)` is real positive for every column.
fn align_to(prev: &DMatrix<Complex64>, v: &mut DMatrix<Complex64>) {
    for k in 0..v.ncols() {
        let o = prev.column(k).dotc(&v.column(k));
        if o.norm() > 0.0 {
            let fix = o.conj() / o.norm();
            v.column_mut(k).iter_mut().for_each(|x| *x *= fix);
        }
    }
}

/// Ordered, phase-aligned eigenframes of `h` on `points` equally spaced
/// parameters covering its domain.
pub fn frame_evolution_from_path(h: &HermitianPath, points: usize) -> Result<FrameEvolution> {
    if points < 2 {
        return Err(Error::TooFew { min: 2, found: points });
    }
    let (s1, s2) = h.domain();
    let grid = uniform_grid(s1, s2, points - 1);
    let mut frames = Vec::with_capacity(points);
    let mut prev: Option<DMatrix<Complex64>> = None;
    for &s in &grid {
        let mut v = sorted_eigenframe(h.sample(s), s)?;
        match &prev {
            None => fix_initial_phases(&mut v),
            Some(p) => align_to(p, &mut v),
        }
        frames.push(UnitaryMatrix::from_product(v.clone()));
        prev = Some(v);
    }
    FrameEvolution::new(grid, frames)
}

fn planar_rotation(n: usize, j: usize, k: usize, s: f64) -> UnitaryMatrix {
    let mut m = DMatrix::<Complex64>::identity(n, n);
    let (sin, cos) = s.sin_cos();
    m[(j, j)] = Complex64::new(cos, 0.0);
    m[(k, j)] = Complex64::new(sin, 0.0);
    m[(j, k)] = Complex64::new(-sin, 0.0);
    m[(k, k)] = Complex64::new(cos, 0.0);
    UnitaryMatrix::from_product(m)
}

/// Rotation through `π/2` in the `(j, k)` plane on `[0, π/2]`:
/// `ψ_j(s) = cos s e_j + sin s e_k`, `ψ_k(s) = -sin s e_j + cos s e_k`, so
/// `φ_j = ψ_k` and `φ_k = -ψ_j`. Other levels stay constant.
pub fn engineered_swap_evolution(n: usize, j: usize, k: usize, points: usize) -> Result<FrameEvolution> {
    for i in [j, k] {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
    }
    if j == k {
        return Err(Error::SameLevel(j));
    }
    if points < 2 {
        return Err(Error::TooFew { min: 2, found: points });
    }
    let grid = uniform_grid(0.0, FRAC_PI_2, points - 1);
    let frames = grid.iter().map(|&s| planar_rotation(n, j, k, s)).collect();
    FrameEvolution::new(grid, frames)
}

/// The same frame at every one of `points` parameters in `[0, 1]`.
pub fn constant_frame_evolution(u: &UnitaryMatrix, points: usize) -> Result<FrameEvolution> {
    if points < 2 {
        return Err(Error::TooFew { min: 2, found: points });
    }
    FrameEvolution::new(uniform_grid(0.0, 1.0, points - 1), vec![u.clone(); points])
}

/// `F(s) = U_0 W diag(e^{isλ}) W^H` on `[0, 1]` with Haar `U_0`, `W` and
/// `λ` uniform in `(-π, π)`. The endpoint overlap `exp(iK)` is generic with
/// probability one.
pub fn random_frame_evolution(n: usize, points: usize, seed: u64) -> Result<FrameEvolution> {
    if points < 2 {
        return Err(Error::TooFew { min: 2, found: points });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u0 = haar_unitary(n, &mut rng).into_matrix();
    let w = haar_unitary(n, &mut rng).into_matrix();
    let lambda: Vec<f64> = (0..n).map(|_| rng.random_range(-PI..PI)).collect();
    let left = &u0 * &w;
    let wh = w.adjoint();
    let grid = uniform_grid(0.0, 1.0, points - 1);
    let frames = grid
        .iter()
        .map(|&s| {
            let d = DVector::from_iterator(n, lambda.iter().map(|l| Complex64::from_polar(1.0, s * l)));
            UnitaryMatrix::from_product(&left * DMatrix::from_diagonal(&d) * &wh)
        })
        .collect();
    FrameEvolution::new(grid, frames)
}
