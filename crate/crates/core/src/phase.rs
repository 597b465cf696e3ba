//! Total, dynamical and geometric phases of sampled curves of unit vectors,
//! and of orthonormal frames moving along a parameter.
//!
//! For a curve `ψ(s)`, `s_1 <= s <= s_2`:
//!
//! ```text
//! φ_tot = arg (ψ(s_1), ψ(s_2))
//! φ_dyn = Im ∫ (ψ, dψ/ds) ds
//! φ_g   = φ_tot - φ_dyn
//! ```
//!
//! The default discretization of `φ_dyn` is the Pancharatnam sum
//! `Σ_i arg (ψ_i, ψ_{i+1})`. It depends only on the sampled states, so it is
//! exactly reparametrization invariant, and a pointwise phase change
//! `ψ_i -> e^{iα_i} ψ_i` shifts it by exactly `α_N - α_0`, which makes the
//! discrete `φ_g` exactly gauge invariant. The local error is `O(h^3)`, so
//! the global error is second order.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::types::{
    compensated_sum, overlap, raw_arg, wrap_phase, Tolerances, UnitVector, UnitaryMatrix,
};

/// Minimum `|(ψ_i, ψ_{i+1})|` accepted between successive samples.
pub const DEFAULT_SMOOTHNESS: f64 = 0.9;

/// Discretization of `Im ∫ (ψ, dψ/ds) ds`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Quadrature {
    /// `Σ arg (ψ_i, ψ_{i+1})`.
    #[default]
    Pancharatnam,
    /// `Im Σ (ψ_i, ψ_{i+1} - ψ_i)`.
    Trapezoid,
}

/// Quadrature and tolerances used by the phase functionals.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseOptions {
    pub quadrature: Quadrature,
    pub tol: Tolerances,
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::TooFew {
            min: 2,
            found: grid.len(),
        });
    }
    for (i, s) in grid.iter().enumerate() {
        if !s.is_finite() || (i > 0 && *s <= grid[i - 1]) {
            return Err(Error::InvalidGrid { index: i });
        }
    }
    Ok(())
}

/// A curve of unit vectors sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StateCurve {
    grid: Vec<f64>,
    states: Vec<UnitVector>,
}

impl StateCurve {
    pub fn new(grid: Vec<f64>, states: Vec<UnitVector>) -> Result<Self> {
        Self::with_smoothness(grid, states, DEFAULT_SMOOTHNESS)
    }

    /// Like [`Self::new`] with a custom successive-overlap guard.
    pub fn with_smoothness(grid: Vec<f64>, states: Vec<UnitVector>, min_overlap: f64) -> Result<Self> {
        validate_grid(&grid)?;
        if states.len() != grid.len() {
            return Err(Error::GridMismatch {
                expected: grid.len(),
                found: states.len(),
            });
        }
        let dim = states[0].dim();
        if let Some(v) = states.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        for (i, w) in states.windows(2).enumerate() {
            let o = overlap(w[0].as_dvector(), w[1].as_dvector()).norm();
            if !(o > min_overlap) {
                return Err(Error::CurveNotSmooth {
                    index: i,
                    overlap: o,
                    min: min_overlap,
                });
            }
        }
        Ok(StateCurve { grid, states })
    }

    /// Samples `f` at `points + 1` equally spaced parameters in `[s1, s2]`.
    pub fn sample(
        s1: f64,
        s2: f64,
        points: usize,
        f: impl Fn(f64) -> Result<UnitVector>,
    ) -> Result<Self> {
        let grid = uniform_grid(s1, s2, points);
        let states = grid.iter().map(|&s| f(s)).collect::<Result<Vec<_>>>()?;
        Self::new(grid, states)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn states(&self) -> &[UnitVector] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// Same states on a different grid (reparametrization).
    pub fn regrid(&self, grid: Vec<f64>) -> Result<Self> {
        validate_grid(&grid)?;
        if grid.len() != self.grid.len() {
            return Err(Error::GridMismatch {
                expected: self.grid.len(),
                found: grid.len(),
            });
        }
        Ok(StateCurve {
            grid,
            states: self.states.clone(),
        })
    }

    pub(crate) fn from_parts_unchecked(grid: Vec<f64>, states: Vec<UnitVector>) -> Self {
        StateCurve { grid, states }
    }

    /// `(ψ(s_1), ψ(s_2))`.
    pub fn endpoint_overlap(&self) -> Complex64 {
        overlap(
            self.states[0].as_dvector(),
            self.states[self.states.len() - 1].as_dvector(),
        )
    }
}

/// `segments + 1` equally spaced points from `s1` to `s2` inclusive.
pub fn uniform_grid(s1: f64, s2: f64, segments: usize) -> Vec<f64> {
    let h = (s2 - s1) / segments as f64;
    (0..=segments)
        .map(|i| if i == segments { s2 } else { s1 + h * i as f64 })
        .collect()
}

/// `arg (ψ(s_1), ψ(s_2))`, or `None` for (near-)orthogonal endpoints.
pub fn total_phase(c: &StateCurve, tol: &Tolerances) -> Option<f64> {
    let z = c.endpoint_overlap();
    (z.norm() > tol.generic).then(|| raw_arg(z))
}

/// Discretized `Im ∫ (ψ, dψ/ds) ds`.
pub fn dynamical_phase(c: &StateCurve, quadrature: Quadrature) -> f64 {
    let steps = c.states.windows(2).map(|w| overlap(w[0].as_dvector(), w[1].as_dvector()));
    match quadrature {
        Quadrature::Pancharatnam => compensated_sum(steps.map(raw_arg)),
        // Im (ψ_i, ψ_i) = 0, so Im (ψ_i, ψ_{i+1} - ψ_i) = Im (ψ_i, ψ_{i+1})
        Quadrature::Trapezoid => compensated_sum(steps.map(|z| z.im)),
    }
}

/// `φ_tot - φ_dyn` reduced to `(-π, π]`; `None` iff the total phase is.
pub fn geometric_phase(c: &StateCurve, opts: &PhaseOptions) -> Option<f64> {
    total_phase(c, &opts.tol).map(|t| wrap_phase(t - dynamical_phase(c, opts.quadrature)))
}

/// The three phases of one curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseReport {
    pub total: Option<f64>,
    pub dynamical: f64,
    pub geometric: Option<f64>,
    pub endpoint_overlap_modulus: f64,
}

pub fn phase_report(c: &StateCurve, opts: &PhaseOptions) -> PhaseReport {
    let total = total_phase(c, &opts.tol);
    let dynamical = dynamical_phase(c, opts.quadrature);
    PhaseReport {
        total,
        dynamical,
        geometric: total.map(|t| wrap_phase(t - dynamical)),
        endpoint_overlap_modulus: c.endpoint_overlap().norm(),
    }
}

/// An orthonormal frame `ψ_j(s)` sampled on a grid; column `j` of each
/// matrix holds `ψ_j(s)` in a fixed reference basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameEvolution {
    grid: Vec<f64>,
    frames: Vec<UnitaryMatrix>,
}

impl FrameEvolution {
    pub fn new(grid: Vec<f64>, frames: Vec<UnitaryMatrix>) -> Result<Self> {
        Self::with_smoothness(grid, frames, DEFAULT_SMOOTHNESS)
    }

    /// Each column curve must pass the same smoothness guard as a
    /// [`StateCurve`].
    pub fn with_smoothness(grid: Vec<f64>, frames: Vec<UnitaryMatrix>, min_overlap: f64) -> Result<Self> {
        validate_grid(&grid)?;
        if frames.len() != grid.len() {
            return Err(Error::GridMismatch {
                expected: grid.len(),
                found: frames.len(),
            });
        }
        let n = frames[0].dim();
        if let Some(f) = frames.iter().find(|f| f.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f.dim(),
            });
        }
        for (i, w) in frames.windows(2).enumerate() {
            let prod = w[0].matrix().adjoint() * w[1].matrix();
            for j in 0..n {
                let o = prod[(j, j)].norm();
                if !(o > min_overlap) {
                    return Err(Error::CurveNotSmooth {
                        index: i,
                        overlap: o,
                        min: min_overlap,
                    });
                }
            }
        }
        Ok(FrameEvolution { grid, frames })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn frames(&self) -> &[UnitaryMatrix] {
        &self.frames
    }

    pub fn dim(&self) -> usize {
        self.frames[0].dim()
    }

    /// Frame at `s_1`: columns `ψ_j`.
    pub fn initial(&self) -> &UnitaryMatrix {
        &self.frames[0]
    }

    /// Frame at `s_2`: columns `φ_j`.
    pub fn last(&self) -> &UnitaryMatrix {
        &self.frames[self.frames.len() - 1]
    }

    /// The curve `C_j` traced by column `j`.
    pub fn column_curve(&self, j: usize) -> Result<StateCurve> {
        if j >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: j,
                dim: self.dim(),
            });
        }
        // columns inherit the frame-level smoothness check
        Ok(StateCurve::from_parts_unchecked(
            self.grid.clone(),
            self.frames.iter().map(|f| f.column(j)).collect(),
        ))
    }
}

/// One [`PhaseReport`] per level.
pub fn frame_phase_bundle(f: &FrameEvolution, opts: &PhaseOptions) -> Vec<PhaseReport> {
    (0..f.dim())
        .map(|j| phase_report(&f.column_curve(j).expect("level in range"), opts))
        .collect()
}

/// `A = F(s_1)^H F(s_2)`, i.e. `a_{jk} = (ψ_j, φ_k)`.
pub fn endpoint_overlap_matrix(f: &FrameEvolution) -> UnitaryMatrix {
    let m: DMatrix<Complex64> = f.initial().matrix().adjoint() * f.last().matrix();
    UnitaryMatrix::from_product(m)
}
