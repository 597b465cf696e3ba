//! Canonical factorization of generic `U(n)` matrices.
//!
//! A generic `A ∈ U(n)` is written uniquely as
//!
//! ```text
//! A = A_n(ζ) · A_{n-1}(η) · ... · A_2(α) · A_1(χ)
//! ```
//!
//! where `ζ` is the last column of `A`, each `A_m(v)` is the coset
//! representative of `U(m)/U(m-1)` fixed by a unit vector `v ∈ C^m`, and
//! `A_1(χ) = diag(e^{iχ}, 1, ..., 1)`. Lower factors act on the *first* `m`
//! coordinates and are bordered with the identity.
//!
//! `A_m(v)` is the unique unitary with last column `v`, zeros two or more
//! steps below the diagonal, and real positive first subdiagonal. Its
//! entries, with `ρ_j = (|v_1|^2 + ... + |v_j|^2)^{1/2}`, are
//!
//! ```text
//! a_{j,j-1} = ρ_{j-1} / ρ_j                    2 <= j <= m
//! a_{j,k}   = -conj(v_{k+1}) v_j / (ρ_k ρ_{k+1})   j <= k <= m-1
//! a_{j,m}   = v_j
//! ```
//!
//! All of this requires `v_1 != 0`; below `tol.generic` we fail rather than
//! switching chart.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::types::{raw_arg, validate_unitary, wrap_phase, Tolerances, UnitVector, UnitaryMatrix};

/// Partial norms `ρ_1 <= ρ_2 <= ... <= ρ_n` of a unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoLadder(Vec<f64>);

impl RhoLadder {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// `ρ_{j+1}` in 1-based notation.
    pub fn get(&self, j: usize) -> f64 {
        self.0[j]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn rho_ladder(zeta: &UnitVector) -> RhoLadder {
    let mut acc = 0.0;
    let rho = zeta
        .as_slice()
        .iter()
        .map(|z| {
            acc += z.norm_sqr();
            acc.sqrt()
        })
        .collect();
    RhoLadder(rho)
}

/// The coset representative `A_m(ζ)` with `m = ζ.dim()`.
pub fn coset_representative(zeta: &UnitVector, tol: &Tolerances) -> Result<UnitaryMatrix> {
    let m = coset_matrix(zeta, tol)?;
    validate_unitary(m, tol)
}

fn coset_matrix(zeta: &UnitVector, tol: &Tolerances) -> Result<DMatrix<Complex64>> {
    let n = zeta.dim();
    let lead = zeta.get(0).norm();
    if !(lead > tol.generic) {
        return Err(Error::NonGenericVector { modulus: lead });
    }
    let rho = rho_ladder(zeta);
    let v = zeta.as_slice();
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    for j in 1..n {
        a[(j, j - 1)] = Complex64::new(rho.get(j - 1) / rho.get(j), 0.0);
    }
    for k in 0..n.saturating_sub(1) {
        let scale = rho.get(k) * rho.get(k + 1);
        let c = v[k + 1].conj();
        for j in 0..=k {
            a[(j, k)] = -(c * v[j]) / scale;
        }
    }
    for j in 0..n {
        a[(j, n - 1)] = v[j];
    }
    Ok(a)
}

/// The tower `(ζ, η, ..., α; χ)` of a generic `U(n)` element.
///
/// `vectors[k]` has dimension `n - k`; for `n = 1` the tower is empty and
/// only `χ` remains.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalParams {
    dim: usize,
    vectors: Vec<UnitVector>,
    chi: f64,
}

impl CanonicalParams {
    pub fn new(vectors: Vec<UnitVector>, chi: f64) -> Result<Self> {
        if !chi.is_finite() {
            return Err(Error::NonFinite);
        }
        let dim = vectors.first().map_or(1, UnitVector::dim);
        for (k, v) in vectors.iter().enumerate() {
            if v.dim() != dim - k {
                return Err(Error::DimensionMismatch {
                    expected: dim - k,
                    found: v.dim(),
                });
            }
        }
        if dim >= 2 && vectors.len() != dim - 1 {
            return Err(Error::TooFew {
                min: dim - 1,
                found: vectors.len(),
            });
        }
        Ok(CanonicalParams {
            dim,
            vectors,
            chi: wrap_phase(chi),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `[ζ, η, ..., α]`, largest first.
    pub fn vectors(&self) -> &[UnitVector] {
        &self.vectors
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    /// Last column of the factored matrix.
    pub fn zeta(&self) -> Option<&UnitVector> {
        self.vectors.first()
    }

    /// `Σ_{m=2..n} (2m - 1) + 1`, which equals `n^2`.
    pub fn real_parameter_count(&self) -> usize {
        self.vectors.iter().map(|v| 2 * v.dim() - 1).sum::<usize>() + 1
    }

    /// `min_m |v^{(m)}_1|` over the tower: how close the matrix sits to the
    /// boundary of the chart. No continuity claim is attached to it.
    pub fn condition(&self) -> f64 {
        self.vectors
            .iter()
            .map(|v| v.get(0).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Number of local real coordinates (`n^2`); see [`Self::perturbed`].
    pub fn chart_dim(&self) -> usize {
        self.real_parameter_count()
    }

    /// Moves along local coordinate `direction` by `t`.
    ///
    /// Directions are ordered vector by vector (largest first), `2m - 1`
    /// tangent directions for a vector in `C^m`, followed by `χ`. Each vector
    /// moves along a great circle `cos t · v + sin t · u`, so it stays
    /// normalized.
    pub fn perturbed(&self, direction: usize, t: f64) -> CanonicalParams {
        let mut out = self.clone();
        let mut offset = direction;
        for (k, v) in self.vectors.iter().enumerate() {
            let count = 2 * v.dim() - 1;
            if offset < count {
                let u = sphere_tangent_basis(v).swap_remove(offset);
                let moved = v.as_dvector() * Complex64::new(t.cos(), 0.0)
                    + u * Complex64::new(t.sin(), 0.0);
                out.vectors[k] = UnitVector::from_dvector_unchecked(moved);
                return out;
            }
            offset -= count;
        }
        assert_eq!(offset, 0, "direction {direction} out of range");
        out.chi = wrap_phase(self.chi + t);
        out
    }
}

/// Orthonormal basis (real inner product `Re(u^H w)`) of the tangent space of
/// the unit sphere `S^{2m-1}` at `v`.
fn sphere_tangent_basis(v: &UnitVector) -> Vec<DVector<Complex64>> {
    let m = v.dim();
    let re_inner = |a: &DVector<Complex64>, b: &DVector<Complex64>| a.dotc(b).re;
    let mut basis: Vec<DVector<Complex64>> = vec![v.as_dvector().clone()];
    for idx in 0..2 * m {
        let mut cand = DVector::<Complex64>::zeros(m);
        cand[idx / 2] = if idx % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        // two Gram-Schmidt passes
        for _ in 0..2 {
            for b in &basis {
                let p = re_inner(b, &cand);
                cand -= b * Complex64::new(p, 0.0);
            }
        }
        let norm = re_inner(&cand, &cand).sqrt();
        if norm > 1e-6 {
            basis.push(cand.unscale(norm));
        }
        if basis.len() == 2 * m {
            break;
        }
    }
    basis.remove(0);
    basis
}

/// Factors a generic unitary into its canonical tower.
///
/// At level `m` the last column `v` of the current `m x m` block must have
/// `|v_1| > tol.generic`; otherwise [`Error::NonGenericMatrix`] names `m`.
pub fn decompose(a: &UnitaryMatrix, tol: &Tolerances) -> Result<CanonicalParams> {
    let n = a.dim();
    let col_tol = tol.norm.max(tol.unitary);
    let mut block = a.matrix().clone();
    let mut vectors = Vec::with_capacity(n.saturating_sub(1));
    for m in (2..=n).rev() {
        let col: Vec<Complex64> = block.column(m - 1).iter().copied().collect();
        let lead = col[0].norm();
        if !(lead > tol.generic) {
            return Err(Error::NonGenericMatrix { level: m, modulus: lead });
        }
        let v = UnitVector::with_tolerance(col, col_tol)?;
        let rep = coset_matrix(&v, tol)?;
        let rest = rep.adjoint() * &block;
        // last row and column of `rest` must be e_m
        let mut border = 0.0f64;
        for i in 0..m - 1 {
            border = border.max(rest[(m - 1, i)].norm()).max(rest[(i, m - 1)].norm());
        }
        border = border.max((rest[(m - 1, m - 1)] - Complex64::new(1.0, 0.0)).norm());
        if border > tol.unitary {
            return Err(Error::NotUnitary {
                deviation: border,
                tol: tol.unitary,
            });
        }
        block = rest.view((0, 0), (m - 1, m - 1)).into_owned();
        vectors.push(v);
    }
    let residual = block[(0, 0)];
    if (residual.norm() - 1.0).abs() > tol.unitary {
        return Err(Error::NotUnitary {
            deviation: (residual.norm() - 1.0).abs(),
            tol: tol.unitary,
        });
    }
    Ok(CanonicalParams {
        dim: n,
        vectors,
        chi: raw_arg(residual),
    })
}

/// Multiplies the tower back together.
pub fn reconstruct(p: &CanonicalParams, tol: &Tolerances) -> Result<UnitaryMatrix> {
    let mut acc = DMatrix::<Complex64>::from_element(1, 1, Complex64::from_polar(1.0, p.chi));
    for v in p.vectors.iter().rev() {
        let m = v.dim();
        let rep = coset_matrix(v, tol)?;
        let mut lower = DMatrix::<Complex64>::identity(m, m);
        lower.view_mut((0, 0), (m - 1, m - 1)).copy_from(&acc);
        acc = rep * lower;
    }
    debug_assert_eq!(acc.nrows(), p.dim);
    validate_unitary(acc, tol)
}

/// `|α_1|, |β_1|, |β_2|, ..., |ζ_1|, ..., |ζ_{n-1}|`: the `n(n-1)/2` moduli
/// left untouched by left/right diagonal phase changes.
pub fn modulus_invariants(p: &CanonicalParams) -> Vec<f64> {
    p.vectors
        .iter()
        .rev()
        .flat_map(|v| v.as_slice()[..v.dim() - 1].iter().map(|z| z.norm()))
        .collect()
}

/// The `(n-1)(n-2)/2` complex phase invariants
/// `s_j conj(s_{j+1}) conj(l_{j+1}) l_{j+2}` for each adjacent pair of
/// tower vectors `s ∈ C^{m-1}`, `l ∈ C^m`, smallest pair first.
pub fn phase_invariant_list(p: &CanonicalParams, tol: &Tolerances) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for pair in p.vectors.windows(2).rev() {
        let (large, small) = (&pair[0], &pair[1]);
        for j in 0..small.dim() - 1 {
            let factors = [
                small.get(j),
                small.get(j + 1).conj(),
                large.get(j + 1).conj(),
                large.get(j + 2),
            ];
            if let Some(f) = factors.iter().find(|f| !(f.norm() > tol.generic)) {
                return Err(Error::NonGenericVector { modulus: f.norm() });
            }
            out.push(factors.iter().product());
        }
    }
    Ok(out)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_matrix_close(a: &DMatrix<Complex64>, expected: &[[f64; 3]], tol: f64) {
        for j in 0..3 {
            for k in 0..3 {
                assert!(
                    (a[(j, k)] - c(expected[j][k])).norm() < tol,
                    "entry ({j},{k}) = {} vs {}",
                    a[(j, k)],
                    expected[j][k]
                );
            }
        }
    }

    #[test]
    fn rho_ladder_examples() {
        let r = rho_ladder(&UnitVector::from_real(&[1.0, 0.0]).unwrap());
        assert_eq!(r.values(), &[1.0, 1.0]);

        let r = rho_ladder(&UnitVector::from_real(&[1.0, 1.0, 1.0]).unwrap());
        assert_abs_diff_eq!(r.get(0), 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(r.get(1), (2.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(r.get(2), 1.0, epsilon = 1e-15);

        let r = rho_ladder(&UnitVector::from_real(&[0.0, 0.0, 1.0]).unwrap());
        assert_eq!(r.values(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn coset_representative_two_level() {
        let tol = Tolerances::default();
        let a = coset_representative(&UnitVector::from_real(&[1.0, 0.0]).unwrap(), &tol).unwrap();
        let expected = [[0.0, 1.0], [1.0, 0.0]];
        for j in 0..2 {
            for k in 0..2 {
                assert!((a.get(j, k) - c(expected[j][k])).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn coset_representative_three_level() {
        let tol = Tolerances::default();
        let beta = UnitVector::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let a = coset_representative(&beta, &tol).unwrap();
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        let s6 = 6f64.sqrt();
        let expected = [
            [-1.0 / s2, -1.0 / s6, 1.0 / s3],
            [1.0 / s2, -1.0 / s6, 1.0 / s3],
            [0.0, 2.0 / s6, 1.0 / s3],
        ];
        assert_matrix_close(a.matrix(), &expected, 1e-14);
    }

    #[test]
    fn coset_representative_rejects_zero_lead() {
        let tol = Tolerances::default();
        let zeta = UnitVector::from_real(&[0.0, 1.0]).unwrap();
        assert!(matches!(
            coset_representative(&zeta, &tol),
            Err(Error::NonGenericVector { .. })
        ));
    }

    #[test]
    fn decompose_two_level_coset() {
        let tol = Tolerances::default();
        let alpha = UnitVector::from_real(&[1.0, 1.0]).unwrap();
        let a = coset_representative(&alpha, &tol).unwrap();
        let p = decompose(&a, &tol).unwrap();
        assert_eq!(p.vectors().len(), 1);
        assert!((p.vectors()[0].get(0) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((p.vectors()[0].get(1) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert_abs_diff_eq!(p.chi(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn decompose_identity_is_non_generic_at_top_level() {
        let tol = Tolerances::default();
        for n in 2..6 {
            match decompose(&UnitaryMatrix::identity(n), &tol) {
                Err(Error::NonGenericMatrix { level, .. }) => assert_eq!(level, n),
                other => panic!("expected NonGenericMatrix, got {other:?}"),
            }
        }
    }

    #[test]
    fn decompose_one_by_one() {
        let tol = Tolerances::default();
        let a = UnitaryMatrix::diagonal_phases(&[0.7]);
        let p = decompose(&a, &tol).unwrap();
        assert_eq!(p.dim(), 1);
        assert_abs_diff_eq!(p.chi(), 0.7, epsilon = 1e-15);
        assert_eq!(p.real_parameter_count(), 1);
        assert!(reconstruct(&p, &tol).unwrap().max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn reconstruct_examples() {
        let tol = Tolerances::default();
        let alpha = UnitVector::from_real(&[1.0, 0.0]).unwrap();
        let p = CanonicalParams::new(vec![alpha.clone()], 0.0).unwrap();
        let a = reconstruct(&p, &tol).unwrap();
        let swap = [[0.0, 1.0], [1.0, 0.0]];
        for j in 0..2 {
            for k in 0..2 {
                assert!((a.get(j, k) - c(swap[j][k])).norm() < 1e-15);
            }
        }

        // A_2(α) · diag(e^{iπ}, 1)
        let p = CanonicalParams::new(vec![alpha], PI).unwrap();
        let a = reconstruct(&p, &tol).unwrap();
        let expected = [[0.0, 1.0], [-1.0, 0.0]];
        for j in 0..2 {
            for k in 0..2 {
                assert!((a.get(j, k) - c(expected[j][k])).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn params_reject_wrong_tower_shape() {
        let z3 = UnitVector::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let z3b = UnitVector::from_real(&[1.0, 2.0, 1.0]).unwrap();
        assert!(matches!(
            CanonicalParams::new(vec![z3.clone(), z3b], 0.0),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            CanonicalParams::new(vec![z3], 0.0),
            Err(Error::TooFew { .. })
        ));
    }

    #[test]
    fn invariant_counts_small_cases() {
        let tol = Tolerances::default();
        let alpha = UnitVector::from_real(&[1.0, 1.0]).unwrap();
        let p = CanonicalParams::new(vec![alpha], 0.0).unwrap();
        let m = modulus_invariants(&p);
        assert_eq!(m.len(), 1);
        assert_abs_diff_eq!(m[0], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert!(phase_invariant_list(&p, &tol).unwrap().is_empty());
        assert_eq!(p.real_parameter_count(), 4);
    }

    #[test]
    fn phase_invariant_three_level_is_single_product() {
        let tol = Tolerances::default();
        let beta = UnitVector::normalized(vec![
            Complex64::new(0.5, 0.2),
            Complex64::new(-0.3, 0.6),
            Complex64::new(0.1, -0.4),
        ])
        .unwrap();
        let alpha = UnitVector::normalized(vec![Complex64::new(0.3, -0.8), Complex64::new(0.5, 0.1)])
            .unwrap();
        let p = CanonicalParams::new(vec![beta.clone(), alpha.clone()], 0.4).unwrap();
        let list = phase_invariant_list(&p, &tol).unwrap();
        assert_eq!(list.len(), 1);
        let expected = alpha.get(0) * alpha.get(1).conj() * beta.get(1).conj() * beta.get(2);
        assert!((list[0] - expected).norm() < 1e-15);
    }

    #[test]
    fn phase_invariants_of_real_tower_have_zero_phase() {
        let tol = Tolerances::default();
        let p = CanonicalParams::new(
            vec![
                UnitVector::from_real(&[1.0, 2.0, 3.0, 4.0]).unwrap(),
                UnitVector::from_real(&[2.0, 1.0, 1.0]).unwrap(),
                UnitVector::from_real(&[1.0, 3.0]).unwrap(),
            ],
            0.0,
        )
        .unwrap();
        let list = phase_invariant_list(&p, &tol).unwrap();
        assert_eq!(list.len(), 3);
        for z in list {
            assert!(z.re > 0.0 && z.im.abs() < 1e-16);
        }
    }

    #[test]
    fn phase_invariant_list_rejects_vanishing_factor() {
        let tol = Tolerances::default();
        let p = CanonicalParams::new(
            vec![
                UnitVector::from_real(&[1.0, 2.0, 0.0]).unwrap(),
                UnitVector::from_real(&[1.0, 3.0]).unwrap(),
            ],
            0.0,
        )
        .unwrap();
        assert!(matches!(
            phase_invariant_list(&p, &tol),
            Err(Error::NonGenericVector { .. })
        ));
    }

    #[test]
    fn perturbation_keeps_vectors_normalized() {
        let p = CanonicalParams::new(
            vec![
                UnitVector::normalized(vec![
                    Complex64::new(0.5, 0.2),
                    Complex64::new(-0.3, 0.6),
                    Complex64::new(0.1, -0.4),
                ])
                .unwrap(),
                UnitVector::from_real(&[1.0, 3.0]).unwrap(),
            ],
            0.1,
        )
        .unwrap();
        assert_eq!(p.chart_dim(), 9);
        for d in 0..p.chart_dim() {
            let q = p.perturbed(d, 0.3);
            for v in q.vectors() {
                assert_abs_diff_eq!(v.as_dvector().norm(), 1.0, epsilon = 1e-14);
            }
            assert_ne!(q, p);
        }
    }
}
