//! Gauge transformations and checks of their transformation laws.
//!
//! On an overlap matrix a gauge transformation is `A' = D(θ) A D(θ')` with
//! `D(θ) = diag(e^{iθ_1}, ..., e^{iθ_n})`, so `a'_{jk} = e^{i(θ_j + θ'_k)} a_{jk}`.
//! On a curve it is a pointwise phase change `ψ'(s) = e^{iα(s)} ψ(s)`.
//!
//! Under `A -> A'` the canonical tower transforms as
//! `ζ'_j = e^{i(θ_j + θ'_n)} ζ_j` and
//! `A'_{n-1} = D_{n-1}(θ_2, ..., θ_n) A_{n-1} D_{n-1}(θ'_1, ..., θ'_{n-1})`,
//! which [`verify_gauge_recursion`] checks directly.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bargmann::Delta4Grid;
use crate::canonical::{coset_representative, decompose, modulus_invariants, phase_invariant_list};
use crate::error::{Error, Result};
use crate::phase::{FrameEvolution, StateCurve};
use crate::types::{max_abs_diff, wrap_phase, Tolerances, UnitVector, UnitaryMatrix};

/// Phases `θ_1, ..., θ_n` of a diagonal unitary, stored in `(-π, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalPhases(Vec<f64>);

impl DiagonalPhases {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(DiagonalPhases(thetas.into_iter().map(wrap_phase).collect()))
    }

    pub fn zeros(n: usize) -> Self {
        DiagonalPhases(vec![0.0; n])
    }

    /// Uniform on `(-π, π]`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        DiagonalPhases((0..n).map(|_| wrap_phase(rng.random_range(-PI..PI))).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.0
    }

    pub fn to_unitary(&self) -> UnitaryMatrix {
        UnitaryMatrix::diagonal_phases(&self.0)
    }
}

/// `D(left) · A · D(right)`.
pub fn gauge_transform_matrix(
    a: &UnitaryMatrix,
    left: &DiagonalPhases,
    right: &DiagonalPhases,
) -> Result<UnitaryMatrix> {
    let n = a.dim();
    for d in [left, right] {
        if d.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: d.len(),
            });
        }
    }
    Ok(apply_phases(a.matrix(), left.thetas(), right.thetas()))
}

fn apply_phases(a: &DMatrix<Complex64>, left: &[f64], right: &[f64]) -> UnitaryMatrix {
    let m = DMatrix::from_fn(a.nrows(), a.ncols(), |j, k| {
        a[(j, k)] * Complex64::from_polar(1.0, left[j] + right[k])
    });
    UnitaryMatrix::from_product(m)
}

/// `ψ'(s_i) = e^{iα_i} ψ(s_i)`; `alpha` is sampled on the curve's grid.
pub fn gauge_transform_curve(c: &StateCurve, alpha: &[f64]) -> Result<StateCurve> {
    if alpha.len() != c.grid().len() {
        return Err(Error::GridMismatch {
            expected: c.grid().len(),
            found: alpha.len(),
        });
    }
    if alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite);
    }
    let states: Vec<UnitVector> = c
        .states()
        .iter()
        .zip(alpha)
        .map(|(psi, &a)| psi.with_phase(a))
        .collect();
    Ok(StateCurve::from_parts_unchecked(c.grid().to_vec(), states))
}

/// A smooth random phase function `α(s) = a + b sin(c s)` sampled on `grid`,
/// with `a, b` uniform in `[-3, 3)` and `c` in `[0.5, 4)`.
pub fn random_smooth_phases<R: Rng + ?Sized>(grid: &[f64], rng: &mut R) -> Vec<f64> {
    let a = rng.random_range(-3.0..3.0);
    let b = rng.random_range(-3.0..3.0);
    let c = rng.random_range(0.5..4.0);
    grid.iter().map(|s| a + b * (c * s).sin()).collect::<Vec<f64>>()
}

/// Independent phase change of every frame vector: column `j` at grid
/// point `i` is multiplied by `e^{i alphas[j][i]}`.
pub fn gauge_transform_frames(f: &FrameEvolution, alphas: &[Vec<f64>]) -> Result<FrameEvolution> {
    let n = f.dim();
    let points = f.grid().len();
    if alphas.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: alphas.len(),
        });
    }
    if let Some(a) = alphas.iter().find(|a| a.len() != points) {
        return Err(Error::GridMismatch {
            expected: points,
            found: a.len(),
        });
    }
    let zeros = vec![0.0; n];
    let frames = f
        .frames()
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let right: Vec<f64> = alphas.iter().map(|a| a[i]).collect();
            apply_phases(u.matrix(), &zeros, &right)
        })
        .collect();
    // phase changes leave |(ψ_j(s_i), ψ_j(s_{i+1}))| untouched
    FrameEvolution::with_smoothness(f.grid().to_vec(), frames, -1.0)
}

/// Residual block `A_{n-1}` of `A = A_n(ζ) A_{n-1}` as an `(n-1) x (n-1)`
/// matrix.
fn residual_block(a: &UnitaryMatrix, tol: &Tolerances) -> Result<DMatrix<Complex64>> {
    let n = a.dim();
    let zeta = a.column(n - 1);
    let lead = zeta.get(0).norm();
    if !(lead > tol.generic) {
        return Err(Error::NonGenericMatrix { level: n, modulus: lead });
    }
    let rep = coset_representative(&zeta, tol)?;
    let rest = rep.matrix().adjoint() * a.matrix();
    Ok(rest.view((0, 0), (n - 1, n - 1)).into_owned())
}

/// Deviations found by [`verify_gauge_recursion`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionReport {
    /// `max_j |ζ'_j - e^{i(θ_j + θ'_n)} ζ_j|`.
    pub zeta_deviation: f64,
    /// Max-entry distance between the residual block of `A'` and the
    /// predicted transform of the residual block of `A`.
    pub block_deviation: f64,
}

impl RecursionReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.zeta_deviation <= tol && self.block_deviation <= tol
    }
}

/// Checks how one gauge transformation acts on the top level of the tower.
pub fn verify_gauge_recursion(
    a: &UnitaryMatrix,
    left: &DiagonalPhases,
    right: &DiagonalPhases,
    tol: &Tolerances,
) -> Result<RecursionReport> {
    let n = a.dim();
    if n < 2 {
        return Err(Error::TooFew { min: 2, found: n });
    }
    let transformed = gauge_transform_matrix(a, left, right)?;
    let (th, thp) = (left.thetas(), right.thetas());

    let zeta = a.column(n - 1);
    let zeta_new = transformed.column(n - 1);
    let zeta_deviation = (0..n)
        .map(|j| (zeta_new.get(j) - Complex64::from_polar(1.0, th[j] + thp[n - 1]) * zeta.get(j)).norm())
        .fold(0.0, f64::max);

    let block = residual_block(a, tol)?;
    let block_new = residual_block(&transformed, tol)?;
    let predicted = apply_phases(&block, &th[1..], &thp[..n - 1]);
    Ok(RecursionReport {
        zeta_deviation,
        block_deviation: max_abs_diff(&block_new, predicted.matrix()),
    })
}

/// Worst deviations over the trials of [`verify_invariants_under_gauge`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InvarianceReport {
    pub trials: usize,
    /// `max | |a'_{jk}| - |a_{jk}| |`.
    pub entry_modulus_deviation: f64,
    /// `max |Δ'_{jk} - Δ_{jk}|` over the primitive grid.
    pub delta4_deviation: f64,
    /// `max |Δ'_{jlkm} - Δ_{jlkm}|` over all row/column pairs.
    pub delta4_general_deviation: f64,
    /// `max |p' - p|` over the canonical phase-invariant list.
    pub phase_list_deviation: f64,
    /// `max |m' - m|` over the canonical modulus invariants.
    pub modulus_invariant_deviation: f64,
}

impl InvarianceReport {
    /// Thresholds: entry moduli, Δ values and modulus invariants to
    /// `delta_tol`; the phase list (which goes through a full decomposition)
    /// to `list_tol`.
    pub fn passed(&self, delta_tol: f64, list_tol: f64) -> bool {
        self.entry_modulus_deviation <= delta_tol
            && self.delta4_deviation <= delta_tol
            && self.delta4_general_deviation <= delta_tol
            && self.modulus_invariant_deviation <= delta_tol
            && self.phase_list_deviation <= list_tol
    }
}

fn all_delta4(a: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = a.nrows();
    let mut out = Vec::new();
    for j in 0..n {
        for l in j + 1..n {
            for k in 0..n {
                for m in k + 1..n {
                    out.push(a[(j, k)] * a[(l, k)].conj() * a[(l, m)] * a[(j, m)].conj());
                }
            }
        }
    }
    out
}

fn max_complex_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Applies `trials` random gauge transformations (phases uniform on
/// `(-π, π]`, seeded) and records how far each invariant moves.
pub fn verify_invariants_under_gauge(
    a: &UnitaryMatrix,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<InvarianceReport> {
    let n = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = decompose(a, tol)?;
    let moduli = modulus_invariants(&params);
    let list = phase_invariant_list(&params, tol)?;
    let grid: Vec<Complex64> = Delta4Grid::new(a, tol).values().iter().map(|b| b.value).collect();
    let general = all_delta4(a.matrix());

    let mut report = InvarianceReport {
        trials,
        ..Default::default()
    };
    for _ in 0..trials {
        let left = DiagonalPhases::random(n, &mut rng);
        let right = DiagonalPhases::random(n, &mut rng);
        let b = gauge_transform_matrix(a, &left, &right)?;

        let entry_dev = a
            .matrix()
            .iter()
            .zip(b.matrix().iter())
            .map(|(x, y)| (x.norm() - y.norm()).abs())
            .fold(0.0, f64::max);
        let grid_b: Vec<Complex64> = Delta4Grid::new(&b, tol).values().iter().map(|v| v.value).collect();
        let params_b = decompose(&b, tol)?;
        let moduli_b = modulus_invariants(&params_b);
        let list_b = phase_invariant_list(&params_b, tol)?;

        report.entry_modulus_deviation = report.entry_modulus_deviation.max(entry_dev);
        report.delta4_deviation = report.delta4_deviation.max(max_complex_diff(&grid, &grid_b));
        report.delta4_general_deviation = report
            .delta4_general_deviation
            .max(max_complex_diff(&general, &all_delta4(b.matrix())));
        report.phase_list_deviation = report.phase_list_deviation.max(max_complex_diff(&list, &list_b));
        report.modulus_invariant_deviation = report.modulus_invariant_deviation.max(
            moduli
                .iter()
                .zip(&moduli_b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
        );
    }
    Ok(report)
}
