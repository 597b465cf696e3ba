//! Off-diagonal geometric phases of a moving frame.
//!
//! With `ψ_j = ψ_j(s_1)`, `φ_j = ψ_j(s_2)` and `C_j` the curve of level `j`:
//!
//! ```text
//! I_j     = exp(-i φ_dyn[C_j])
//! σ_jk    = exp(i arg (ψ_j, φ_k)) I_k                  (j != k)
//! γ_jk    = σ_jk σ_kj
//! γ_{j1..jl} = σ_{j1 j2} σ_{j2 j3} ... σ_{jl j1}
//! ```
//!
//! The γ are gauge invariant and can be rebuilt from Bargmann invariants and
//! ordinary geometric phases:
//!
//! ```text
//! γ_jk       = exp(i arg Δ_4(ψ_j, φ_k, ψ_k, φ_j) + i φ_g[C_j] + i φ_g[C_k])
//! γ_{j1..jl} = exp(i arg Δ_2l(φ_j1, ψ_j1, φ_j2, ψ_j2, ...) + i Σ φ_g[C_ji])
//! ```
//!
//! The rebuilt form needs every `φ_g[C_ji]`, which is undefined when some
//! `|(ψ_j, φ_k)| = 1`; the direct σ product stays defined there.

use num_complex::Complex64;

use crate::bargmann::{bargmann_invariant, interleaved_invariant, Vertex};
use crate::error::{Error, Result};
use crate::phase::{dynamical_phase, endpoint_overlap_matrix, geometric_phase, FrameEvolution, PhaseOptions};
use crate::types::{circular_distance, raw_arg, UnitVector, UnitaryMatrix};

fn unit(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Per-level data of one frame evolution, computed once.
#[derive(Debug, Clone)]
pub struct OffDiagonalPhases {
    overlap: UnitaryMatrix,
    psis: Vec<UnitVector>,
    phis: Vec<UnitVector>,
    dynamical: Vec<f64>,
    geometric: Vec<Option<f64>>,
    opts: PhaseOptions,
}

impl OffDiagonalPhases {
    pub fn new(f: &FrameEvolution, opts: &PhaseOptions) -> Self {
        let n = f.dim();
        let curves: Vec<_> = (0..n)
            .map(|j| f.column_curve(j).expect("level in range"))
            .collect();
        OffDiagonalPhases {
            overlap: endpoint_overlap_matrix(f),
            psis: f.initial().columns(),
            phis: f.last().columns(),
            dynamical: curves.iter().map(|c| dynamical_phase(c, opts.quadrature)).collect(),
            geometric: curves.iter().map(|c| geometric_phase(c, opts)).collect(),
            opts: *opts,
        }
    }

    pub fn dim(&self) -> usize {
        self.overlap.dim()
    }

    /// `a_jk = (ψ_j, φ_k)`.
    pub fn overlap_matrix(&self) -> &UnitaryMatrix {
        &self.overlap
    }

    pub fn dynamical_phase(&self, j: usize) -> Result<f64> {
        self.check(j)?;
        Ok(self.dynamical[j])
    }

    /// `φ_g[C_j]`, `None` when `ψ_j ⟂ φ_j`.
    pub fn geometric_phase(&self, j: usize) -> Result<Option<f64>> {
        self.check(j)?;
        Ok(self.geometric[j])
    }

    fn check(&self, j: usize) -> Result<()> {
        if j >= self.dim() {
            Err(Error::IndexOutOfRange {
                index: j,
                dim: self.dim(),
            })
        } else {
            Ok(())
        }
    }

    fn check_pair(&self, j: usize, k: usize) -> Result<()> {
        self.check(j)?;
        self.check(k)?;
        if j == k {
            return Err(Error::SameLevel(j));
        }
        Ok(())
    }

    fn check_tuple(&self, indices: &[usize]) -> Result<()> {
        if indices.len() < 2 {
            return Err(Error::TooFew {
                min: 2,
                found: indices.len(),
            });
        }
        for (i, &j) in indices.iter().enumerate() {
            self.check(j)?;
            if indices[..i].contains(&j) {
                return Err(Error::DuplicateIndex(j));
            }
        }
        Ok(())
    }

    /// `I_j`.
    pub fn dynamical_factor(&self, j: usize) -> Result<Complex64> {
        self.check(j)?;
        Ok(unit(-self.dynamical[j]))
    }

    /// `σ_jk`; `None` when `|(ψ_j, φ_k)| <= tol.generic`.
    pub fn sigma(&self, j: usize, k: usize) -> Result<Option<Complex64>> {
        self.check_pair(j, k)?;
        let a = self.overlap.get(j, k);
        Ok((a.norm() > self.opts.tol.generic).then(|| unit(raw_arg(a) - self.dynamical[k])))
    }

    /// `γ_jk = σ_jk σ_kj`.
    pub fn gamma_pair(&self, j: usize, k: usize) -> Result<Option<Complex64>> {
        self.gamma_multi(&[j, k])
    }

    /// `γ_j = exp(i φ_g[C_j])`.
    pub fn gamma_diag(&self, j: usize) -> Result<Option<Complex64>> {
        self.check(j)?;
        Ok(self.geometric[j].map(unit))
    }

    /// Cyclic σ product over `indices`.
    pub fn gamma_multi(&self, indices: &[usize]) -> Result<Option<Complex64>> {
        self.check_tuple(indices)?;
        let l = indices.len();
        let mut acc = Complex64::new(1.0, 0.0);
        for i in 0..l {
            match self.sigma(indices[i], indices[(i + 1) % l])? {
                Some(s) => acc *= s,
                None => return Ok(None),
            }
        }
        // renormalize away rounding drift of the product
        Ok(Some(acc / acc.norm()))
    }

    /// Rebuilt γ from `Δ_2l` and the levels' geometric phases.
    pub fn gamma_via_invariants(&self, indices: &[usize]) -> Result<Option<Complex64>> {
        self.check_tuple(indices)?;
        let mut phase_sum = 0.0;
        for &j in indices {
            match self.geometric[j] {
                Some(g) => phase_sum += g,
                None => return Ok(None),
            }
        }
        let delta = if let [j, k] = *indices {
            let vs = [
                self.psis[j].clone(),
                self.phis[k].clone(),
                self.psis[k].clone(),
                self.phis[j].clone(),
            ];
            bargmann_invariant(&vs, &self.opts.tol)?
        } else {
            let pattern: Vec<Vertex> = indices
                .iter()
                .flat_map(|&j| [Vertex::Final(j), Vertex::Initial(j)])
                .collect();
            interleaved_invariant(&self.psis, &self.phis, &pattern, &self.opts.tol)?
        };
        Ok(delta.arg().map(|d| unit(d + phase_sum)))
    }

    /// γ of order `l >= 4` rebuilt from orders 2 and 3:
    /// `γ_{j1..jl} = Π_{i=2}^{l-1} γ_{j1 ji j(i+1)} / Π_{i=3}^{l-1} γ_{j1 ji}`.
    /// Orders 2 and 3 are returned directly.
    pub fn gamma_multi_reduced(&self, indices: &[usize]) -> Result<Option<Complex64>> {
        self.check_tuple(indices)?;
        let l = indices.len();
        if l <= 3 {
            return self.gamma_multi(indices);
        }
        let j1 = indices[0];
        let mut acc = Complex64::new(1.0, 0.0);
        for i in 1..l - 1 {
            match self.gamma_multi(&[j1, indices[i], indices[i + 1]])? {
                Some(g) => acc *= g,
                None => return Ok(None),
            }
        }
        for &ji in &indices[2..l - 1] {
            match self.gamma_pair(j1, ji)? {
                Some(g) => acc /= g,
                None => return Ok(None),
            }
        }
        Ok(Some(acc / acc.norm()))
    }

    /// Both sides of the rebuild identity for one index tuple.
    pub fn identity_entry(&self, indices: &[usize]) -> Result<GammaEntry> {
        let direct = self.gamma_multi(indices)?;
        let via_invariants = self.gamma_via_invariants(indices)?;
        let residual = match (direct, via_invariants) {
            (Some(d), Some(v)) => Some(circular_distance(d.arg(), v.arg())),
            _ => None,
        };
        let exceptional = direct.is_some() && indices.iter().any(|&j| self.geometric[j].is_none());
        Ok(GammaEntry {
            indices: indices.to_vec(),
            direct,
            via_invariants,
            residual,
            exceptional,
        })
    }
}

/// One index tuple of an [`OffDiagReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct GammaEntry {
    pub indices: Vec<usize>,
    /// σ product.
    pub direct: Option<Complex64>,
    /// Bargmann-invariant rebuild.
    pub via_invariants: Option<Complex64>,
    /// Circular distance of the two args when both are defined.
    pub residual: Option<f64>,
    /// γ defined although some level's `φ_g` is not.
    pub exceptional: bool,
}

/// γ for every pair `j < k` and every triple (both orientations, smallest
/// level first), each compared with its rebuild.
#[derive(Debug, Clone, PartialEq)]
pub struct OffDiagReport {
    pub pairs: Vec<GammaEntry>,
    pub triples: Vec<GammaEntry>,
}

impl OffDiagReport {
    pub fn entries(&self) -> impl Iterator<Item = &GammaEntry> {
        self.pairs.iter().chain(&self.triples)
    }

    /// Largest recorded residual, `0` if none was recorded.
    pub fn max_residual(&self) -> f64 {
        self.entries().filter_map(|e| e.residual).fold(0.0, f64::max)
    }

    pub fn has_exceptional(&self) -> bool {
        self.entries().any(|e| e.exceptional)
    }
}

pub fn pair_indices(n: usize) -> Vec<[usize; 2]> {
    (0..n).flat_map(|j| (j + 1..n).map(move |k| [j, k])).collect()
}

pub fn triple_indices(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push([a, b, c]);
                out.push([a, c, b]);
            }
        }
    }
    out
}

pub fn verify_offdiag_identity(f: &FrameEvolution, opts: &PhaseOptions) -> OffDiagReport {
    let od = OffDiagonalPhases::new(f, opts);
    let n = od.dim();
    let entry = |idx: &[usize]| od.identity_entry(idx).expect("valid index tuple");
    OffDiagReport {
        pairs: pair_indices(n).iter().map(|p| entry(p)).collect(),
        triples: triple_indices(n).iter().map(|t| entry(t)).collect(),
    }
}

pub fn sigma(f: &FrameEvolution, j: usize, k: usize, opts: &PhaseOptions) -> Result<Option<Complex64>> {
    OffDiagonalPhases::new(f, opts).sigma(j, k)
}

pub fn dynamical_factor(f: &FrameEvolution, j: usize, opts: &PhaseOptions) -> Result<Complex64> {
    OffDiagonalPhases::new(f, opts).dynamical_factor(j)
}

pub fn gamma_pair(f: &FrameEvolution, j: usize, k: usize, opts: &PhaseOptions) -> Result<Option<Complex64>> {
    OffDiagonalPhases::new(f, opts).gamma_pair(j, k)
}

pub fn gamma_diag(f: &FrameEvolution, j: usize, opts: &PhaseOptions) -> Result<Option<Complex64>> {
    OffDiagonalPhases::new(f, opts).gamma_diag(j)
}

pub fn gamma_multi(f: &FrameEvolution, indices: &[usize], opts: &PhaseOptions) -> Result<Option<Complex64>> {
    OffDiagonalPhases::new(f, opts).gamma_multi(indices)
}

pub fn gamma_via_invariants(
    f: &FrameEvolution,
    indices: &[usize],
    opts: &PhaseOptions,
) -> Result<Option<Complex64>> {
    OffDiagonalPhases::new(f, opts).gamma_via_invariants(indices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{constant_frame_evolution, engineered_swap_evolution, random_frame_evolution};
    use crate::types::Tolerances;

    fn opts() -> PhaseOptions {
        PhaseOptions::default()
    }

    #[test]
    fn planar_rotation_sigmas() {
        let f = engineered_swap_evolution(2, 0, 1, 1001).unwrap();
        let od = OffDiagonalPhases::new(&f, &opts());
        let s12 = od.sigma(0, 1).unwrap().unwrap();
        let s21 = od.sigma(1, 0).unwrap().unwrap();
        assert!((s12 + 1.0).norm() < 1e-12);
        assert!((s21 - 1.0).norm() < 1e-12);
        assert!((od.gamma_pair(0, 1).unwrap().unwrap() + 1.0).norm() < 1e-12);
        assert_eq!(od.geometric_phase(0).unwrap(), None);
        assert_eq!(od.gamma_diag(1).unwrap(), None);
    }

    #[test]
    fn index_errors() {
        let f = engineered_swap_evolution(3, 0, 2, 101).unwrap();
        let od = OffDiagonalPhases::new(&f, &opts());
        assert_eq!(od.sigma(1, 1), Err(Error::SameLevel(1)));
        assert_eq!(od.gamma_multi(&[0, 1, 0]), Err(Error::DuplicateIndex(0)));
        assert!(matches!(od.gamma_multi(&[0]), Err(Error::TooFew { .. })));
        assert!(matches!(od.sigma(0, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn constant_frame_undefined() {
        let f = constant_frame_evolution(&UnitaryMatrix::identity(3), 11).unwrap();
        let od = OffDiagonalPhases::new(&f, &opts());
        assert_eq!(od.sigma(0, 1).unwrap(), None);
        assert_eq!(od.dynamical_factor(2).unwrap(), Complex64::new(1.0, 0.0));
        let report = verify_offdiag_identity(&f, &opts());
        assert!(report.entries().all(|e| e.direct.is_none() && e.residual.is_none()));
        assert_eq!(report.max_residual(), 0.0);
    }

    #[test]
    fn identity_on_random_evolutions() {
        for n in 3..=5 {
            let f = random_frame_evolution(n, 400, 17 + n as u64).unwrap();
            let report = verify_offdiag_identity(&f, &opts());
            assert_eq!(report.pairs.len(), n * (n - 1) / 2);
            for e in report.entries() {
                assert!(e.residual.unwrap() < 1e-8, "{e:?}");
                assert!((e.direct.unwrap().norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn order_four_regrouping() {
        let f = random_frame_evolution(5, 300, 2).unwrap();
        let od = OffDiagonalPhases::new(&f, &opts());
        for idx in [[0, 1, 2, 3], [4, 2, 0, 1], [1, 3, 4, 0]] {
            let d = od.gamma_multi(&idx).unwrap().unwrap();
            let r = od.gamma_multi_reduced(&idx).unwrap().unwrap();
            assert!(circular_distance(d.arg(), r.arg()) < 1e-12);
        }
        let d = od.gamma_multi(&[0, 1, 2, 3, 4]).unwrap().unwrap();
        let r = od.gamma_multi_reduced(&[0, 1, 2, 3, 4]).unwrap().unwrap();
        assert!(circular_distance(d.arg(), r.arg()) < 1e-12);
    }

    #[test]
    fn swap_flags_exceptional() {
        let f = engineered_swap_evolution(3, 0, 1, 501).unwrap();
        let report = verify_offdiag_identity(&f, &PhaseOptions {
            tol: Tolerances::default(),
            ..Default::default()
        });
        let e = &report.pairs[0];
        assert_eq!(e.indices, vec![0, 1]);
        assert!(e.exceptional);
        assert!((e.direct.unwrap() + 1.0).norm() < 1e-9);
        assert_eq!(e.via_invariants, None);
    }
}
