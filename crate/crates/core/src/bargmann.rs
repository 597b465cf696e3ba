//! Bargmann invariants.
//!
//! The `n`-vertex invariant of unit vectors `ψ_1, ..., ψ_n` is the cyclic
//! product of successive inner products
//!
//! ```text
//! Δ_n(ψ_1, ..., ψ_n) = (ψ_1, ψ_2)(ψ_2, ψ_3) ... (ψ_n, ψ_1)
//! ```
//!
//! It is unchanged by cyclic rotations and by independent phase changes of
//! the vectors. For two orthonormal frames (initial `ψ_j`, final `φ_k`) only
//! alternating, even-order invariants survive, and with the overlap matrix
//! `a_{jk} = (ψ_j, φ_k)` the four-vertex ones read
//!
//! ```text
//! Δ_{jlkm} = a_{jk} conj(a_{lk}) a_{lm} conj(a_{jm})
//! ```
//!
//! Indices are 0-based throughout this module.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::canonical::{reconstruct, CanonicalParams};
use crate::error::{Error, Result};
use crate::types::{overlap, raw_arg, wrap_phase, Tolerances, UnitVector, UnitaryMatrix};

/// Value of a Bargmann invariant together with a genericity flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BargmannValue {
    pub value: Complex64,
    pub vertex_count: usize,
    /// `false` when some successive inner product has modulus at or below
    /// `tol.generic`.
    pub defined: bool,
}

impl BargmannValue {
    /// Phase of the invariant, `None` when not defined.
    pub fn arg(&self) -> Option<f64> {
        self.defined.then(|| raw_arg(self.value))
    }
}

fn cyclic_product(overlaps: impl Iterator<Item = Complex64>, tol: &Tolerances) -> (Complex64, bool) {
    let mut value = Complex64::new(1.0, 0.0);
    let mut defined = true;
    for z in overlaps {
        defined &= z.norm() > tol.generic;
        value *= z;
    }
    (value, defined)
}

/// `Δ_n(ψ_1, ..., ψ_n)`, cyclically closed.
pub fn bargmann_invariant(vectors: &[UnitVector], tol: &Tolerances) -> Result<BargmannValue> {
    let n = vectors.len();
    if n < 2 {
        return Err(Error::TooFew { min: 2, found: n });
    }
    let dim = vectors[0].dim();
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        });
    }
    let (value, defined) = cyclic_product(
        (0..n).map(|i| overlap(vectors[i].as_dvector(), vectors[(i + 1) % n].as_dvector())),
        tol,
    );
    Ok(BargmannValue {
        value,
        vertex_count: n,
        defined,
    })
}

/// A vertex drawn from one of two orthonormal frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    /// `ψ_j`, a vector of the initial frame.
    Initial(usize),
    /// `φ_k`, a vector of the final frame.
    Final(usize),
}

impl Vertex {
    fn is_initial(self) -> bool {
        matches!(self, Vertex::Initial(_))
    }
}

/// Even-order invariant `Δ_{2l}` over an alternating ψ/φ pattern.
pub fn interleaved_invariant(
    psis: &[UnitVector],
    phis: &[UnitVector],
    pattern: &[Vertex],
    tol: &Tolerances,
) -> Result<BargmannValue> {
    let vectors = resolve_pattern(psis, phis, pattern)?;
    bargmann_invariant(&vectors, tol)
}

fn resolve_pattern(
    psis: &[UnitVector],
    phis: &[UnitVector],
    pattern: &[Vertex],
) -> Result<Vec<UnitVector>> {
    if pattern.len() < 2 {
        return Err(Error::TooFew {
            min: 2,
            found: pattern.len(),
        });
    }
    // the closing step pattern[last] -> pattern[0] must alternate as well,
    // which forces an even length
    for i in 0..pattern.len() {
        let next = pattern[(i + 1) % pattern.len()];
        if pattern[i].is_initial() == next.is_initial() {
            return Err(Error::PatternNotAlternating { position: i });
        }
    }
    pattern
        .iter()
        .map(|v| {
            let (family, idx) = match *v {
                Vertex::Initial(j) => (psis, j),
                Vertex::Final(k) => (phis, k),
            };
            family.get(idx).cloned().ok_or(Error::IndexOutOfRange {
                index: idx,
                dim: family.len(),
            })
        })
        .collect()
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        Err(Error::IndexOutOfRange { index: i, dim: n })
    } else {
        Ok(())
    }
}

/// `Δ_{jlkm} = a_{jk} conj(a_{lk}) a_{lm} conj(a_{jm})` for rows `j < l`
/// and columns `k < m`.
pub fn delta4_general(a: &UnitaryMatrix, j: usize, l: usize, k: usize, m: usize) -> Result<Complex64> {
    let n = a.dim();
    for i in [j, l, k, m] {
        check_index(i, n)?;
    }
    if j >= l {
        return Err(Error::IndexOrder { first: j, second: l });
    }
    if k >= m {
        return Err(Error::IndexOrder { first: k, second: m });
    }
    Ok(delta4_raw(a.matrix(), j, l, k, m))
}

#[inline]
fn delta4_raw(a: &DMatrix<Complex64>, j: usize, l: usize, k: usize, m: usize) -> Complex64 {
    a[(j, k)] * a[(l, k)].conj() * a[(l, m)] * a[(j, m)].conj()
}

fn delta4_defined(a: &DMatrix<Complex64>, j: usize, l: usize, k: usize, m: usize, tol: &Tolerances) -> bool {
    [a[(j, k)], a[(l, k)], a[(l, m)], a[(j, m)]]
        .iter()
        .all(|z| z.norm() > tol.generic)
}

/// Primitive invariant `Δ_{jk} = Δ_{j,j+1,k,k+1}` on adjacent rows and
/// columns; `j, k < n - 1`.
pub fn delta4_primitive(a: &UnitaryMatrix, j: usize, k: usize) -> Result<Complex64> {
    let bound = a.dim().saturating_sub(1);
    check_index(j, bound)?;
    check_index(k, bound)?;
    Ok(delta4_raw(a.matrix(), j, j + 1, k, k + 1))
}

/// All `(n-1)^2` primitive invariants of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Delta4Grid {
    size: usize,
    values: Vec<BargmannValue>,
}

impl Delta4Grid {
    pub fn new(a: &UnitaryMatrix, tol: &Tolerances) -> Self {
        let size = a.dim().saturating_sub(1);
        let m = a.matrix();
        let mut values = Vec::with_capacity(size * size);
        for j in 0..size {
            for k in 0..size {
                values.push(BargmannValue {
                    value: delta4_raw(m, j, j + 1, k, k + 1),
                    vertex_count: 4,
                    defined: delta4_defined(m, j, j + 1, k, k + 1, tol),
                });
            }
        }
        Delta4Grid { size, values }
    }

    /// Side length `n - 1`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, j: usize, k: usize) -> &BargmannValue {
        &self.values[j * self.size + k]
    }

    /// Row-major entries.
    pub fn values(&self) -> &[BargmannValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Primitive index pairs `(j', k')` with
/// `arg Δ_{jlkm} ≡ Σ arg Δ_{j'k'} (mod 2π)` in the generic case.
///
/// Rows are split first (`Δ_{jlkm} ∝ Δ_{j,l-1,k,m} Δ_{l-1,l,k,m}`), then
/// columns (`Δ_{jlkm} ∝ Δ_{j,l,k,m-1} Δ_{j,l,m-1,m}`); the dropped factors
/// are positive squared moduli.
pub fn reduce_to_adjacent(j: usize, l: usize, k: usize, m: usize) -> Result<Vec<(usize, usize)>> {
    if j >= l {
        return Err(Error::IndexOrder { first: j, second: l });
    }
    if k >= m {
        return Err(Error::IndexOrder { first: k, second: m });
    }
    let mut out = Vec::with_capacity((l - j) * (m - k));
    split(j, l, k, m, &mut out);
    Ok(out)
}

fn split(j: usize, l: usize, k: usize, m: usize, out: &mut Vec<(usize, usize)>) {
    if l > j + 1 {
        split(j, l - 1, k, m, out);
        split(l - 1, l, k, m, out);
    } else if m > k + 1 {
        split(j, l, k, m - 1, out);
        split(j, l, m - 1, m, out);
    } else {
        out.push((j, k));
    }
}

/// Whether a cycle of vertices is generic or alternates between two
/// orthonormal frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    /// Arbitrary unit vectors: reduce to three-vertex factors.
    Generic,
    /// Alternating ψ/φ vertices: reduce to four-vertex factors.
    Interleaved,
}

/// Factorization of a Bargmann invariant into smaller ones.
///
/// The exact identity is
/// `Δ(all) = Π Δ(factor) / Π |(v_a, v_b)|^2` over the anchors, so phases
/// add. Positions index into the vertex list passed to
/// [`reduce_general_bargmann`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub factors: Vec<Vec<usize>>,
    pub anchors: Vec<(usize, usize)>,
}

impl Reduction {
    /// `(Π Δ(factor), Π |anchor overlap|^2)` for the given vertices.
    pub fn evaluate(&self, vectors: &[UnitVector], tol: &Tolerances) -> Result<(Complex64, f64)> {
        let mut product = Complex64::new(1.0, 0.0);
        for f in &self.factors {
            let vs: Vec<UnitVector> = f.iter().map(|&i| vectors[i].clone()).collect();
            product *= bargmann_invariant(&vs, tol)?.value;
        }
        let weight = self
            .anchors
            .iter()
            .map(|&(a, b)| overlap(vectors[a].as_dvector(), vectors[b].as_dvector()).norm_sqr())
            .product();
        Ok((product, weight))
    }

    /// Sum of factor phases, reduced to `(-π, π]`.
    pub fn arg_sum(&self, vectors: &[UnitVector], tol: &Tolerances) -> Result<f64> {
        let mut total = 0.0;
        for f in &self.factors {
            let vs: Vec<UnitVector> = f.iter().map(|&i| vectors[i].clone()).collect();
            total += raw_arg(bargmann_invariant(&vs, tol)?.value);
        }
        Ok(wrap_phase(total))
    }
}

/// Fan triangulation anchored at the first vertex.
///
/// Generic cycles split into `Δ_3(v_0, v_i, v_{i+1})`; interleaved cycles
/// of length `2l` split into `Δ_4(v_0, v_{2i-1}, v_{2i}, v_{2i+1})`. Every
/// anchor overlap must be nonzero.
pub fn reduce_general_bargmann(
    vectors: &[UnitVector],
    kind: CycleKind,
    tol: &Tolerances,
) -> Result<Reduction> {
    let n = vectors.len();
    let (factors, anchors): (Vec<Vec<usize>>, Vec<(usize, usize)>) = match kind {
        CycleKind::Generic => {
            if n < 3 {
                return Err(Error::TooFew { min: 3, found: n });
            }
            (
                (1..n - 1).map(|i| vec![0, i, i + 1]).collect(),
                (2..n - 1).map(|i| (0, i)).collect(),
            )
        }
        CycleKind::Interleaved => {
            if n < 4 {
                return Err(Error::TooFew { min: 4, found: n });
            }
            if !n.is_multiple_of(2) {
                return Err(Error::PatternNotAlternating { position: n - 1 });
            }
            let l = n / 2;
            (
                (1..l).map(|i| vec![0, 2 * i - 1, 2 * i, 2 * i + 1]).collect(),
                (1..l - 1).map(|i| (0, 2 * i + 1)).collect(),
            )
        }
    };
    let dim = vectors[0].dim();
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        });
    }
    for &(a, b) in &anchors {
        let modulus = overlap(vectors[a].as_dvector(), vectors[b].as_dvector()).norm();
        if !(modulus > tol.generic) {
            return Err(Error::NonGenericAnchor {
                first: a,
                second: b,
                modulus,
            });
        }
    }
    Ok(Reduction { factors, anchors })
}

/// The `(n-1)(n-2)/2` pairs `(j, k)`, `j < k <= n - 2` (0-based), whose
/// primitive invariants carry independent phases.
pub fn independent_primitive_set(n: usize) -> Vec<(usize, usize)> {
    let top = n.saturating_sub(1);
    (0..top)
        .flat_map(|j| (j + 1..top).map(move |k| (j, k)))
        .collect()
}

/// Finite-difference Jacobian of `{arg Δ_{jk} : (j,k) in pairs}` with respect
/// to the `n^2` local coordinates of [`CanonicalParams::perturbed`].
///
/// Central differences with step `h`; arg differences are taken on the
/// circle.
pub fn phase_jacobian(
    p: &CanonicalParams,
    pairs: &[(usize, usize)],
    h: f64,
    tol: &Tolerances,
) -> Result<DMatrix<f64>> {
    let cols = p.chart_dim();
    let mut jac = DMatrix::<f64>::zeros(pairs.len(), cols);
    let args_at = |q: &CanonicalParams| -> Result<Vec<f64>> {
        let a = reconstruct(q, tol)?;
        pairs
            .iter()
            .map(|&(j, k)| Ok(raw_arg(delta4_primitive(&a, j, k)?)))
            .collect()
    };
    for d in 0..cols {
        let plus = args_at(&p.perturbed(d, h))?;
        let minus = args_at(&p.perturbed(d, -h))?;
        for (r, (a, b)) in plus.iter().zip(&minus).enumerate() {
            jac[(r, d)] = wrap_phase(a - b) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Number of singular values above `rel_cutoff × σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>, rel_cutoff: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let largest = sv.iter().copied().fold(0.0, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_cutoff * largest).count()
}
