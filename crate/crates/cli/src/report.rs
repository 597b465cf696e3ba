//! Report documents emitted by the subcommands.
//!
//! Undefined phases are written as `null` next to a `reason` field; NaN never
//! appears.

use bargmann_core::{
    decompose, endpoint_overlap_matrix, frame_phase_bundle, modulus_invariants,
    phase_invariant_list, Complex64, Delta4Grid, FrameEvolution, OffDiagonalPhases, PhaseOptions,
    Tolerances, UnitaryMatrix,
};
use serde::Serialize;

use crate::io::{pair, MatrixFile, Pair};
use crate::CliError;

/// Endpoints of a curve (or of a σ factor) are orthogonal.
pub const ORTHOGONAL_ENDPOINTS: &str = "orthogonal_endpoints";
/// Some overlap inside an invariant vanishes.
pub const VANISHING_OVERLAP: &str = "vanishing_overlap";

fn reason_if(undefined: bool, reason: &'static str) -> Option<&'static str> {
    undefined.then_some(reason)
}

#[derive(Debug, Serialize)]
pub struct ComplexPhase {
    pub value: Pair,
    pub arg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
}

impl ComplexPhase {
    fn new(z: Complex64, tol: &Tolerances) -> Self {
        let defined = z.norm() > tol.generic;
        ComplexPhase {
            value: pair(z),
            arg: defined.then(|| bargmann_core::raw_arg(z)),
            reason: reason_if(!defined, VANISHING_OVERLAP),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GridEntry {
    pub j: usize,
    pub k: usize,
    pub value: Pair,
    pub arg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct DecomposeReport {
    pub n: usize,
    /// Tower vectors, largest first.
    pub vectors: Vec<Vec<Pair>>,
    pub chi: f64,
    pub condition: f64,
    pub modulus_invariants: Vec<f64>,
    pub phase_invariants: Vec<ComplexPhase>,
    pub delta4_grid: Vec<GridEntry>,
}

pub fn decompose_report(a: &UnitaryMatrix, tol: &Tolerances) -> Result<DecomposeReport, CliError> {
    let p = decompose(a, tol)?;
    let grid = Delta4Grid::new(a, tol);
    let size = grid.size();
    let mut delta4_grid = Vec::with_capacity(size * size);
    for j in 0..size {
        for k in 0..size {
            let b = grid.get(j, k);
            delta4_grid.push(GridEntry {
                j,
                k,
                value: pair(b.value),
                arg: b.arg(),
                reason: reason_if(!b.defined, VANISHING_OVERLAP),
            });
        }
    }
    Ok(DecomposeReport {
        n: a.dim(),
        vectors: p
            .vectors()
            .iter()
            .map(|v| v.as_slice().iter().copied().map(pair).collect())
            .collect(),
        chi: p.chi(),
        condition: p.condition(),
        modulus_invariants: modulus_invariants(&p),
        phase_invariants: phase_invariant_list(&p, tol)?
            .into_iter()
            .map(|z| ComplexPhase::new(z, tol))
            .collect(),
        delta4_grid,
    })
}

#[derive(Debug, Serialize)]
pub struct LevelPhases {
    pub level: usize,
    pub total: Option<f64>,
    pub dynamical: f64,
    pub geometric: Option<f64>,
    pub endpoint_overlap_modulus: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct PhasesReport {
    pub n: usize,
    pub quadrature: &'static str,
    pub levels: Vec<LevelPhases>,
    pub overlap_matrix: MatrixFile,
}

pub fn quadrature_name(opts: &PhaseOptions) -> &'static str {
    match opts.quadrature {
        bargmann_core::Quadrature::Pancharatnam => "pancharatnam",
        bargmann_core::Quadrature::Trapezoid => "trapezoid",
    }
}

pub fn phases_report(f: &FrameEvolution, opts: &PhaseOptions) -> PhasesReport {
    let levels = frame_phase_bundle(f, opts)
        .into_iter()
        .enumerate()
        .map(|(level, r)| LevelPhases {
            level,
            total: r.total,
            dynamical: r.dynamical,
            geometric: r.geometric,
            endpoint_overlap_modulus: r.endpoint_overlap_modulus,
            reason: reason_if(r.total.is_none(), ORTHOGONAL_ENDPOINTS),
        })
        .collect();
    PhasesReport {
        n: f.dim(),
        quadrature: quadrature_name(opts),
        levels,
        overlap_matrix: MatrixFile::from_unitary(&endpoint_overlap_matrix(f)),
    }
}

#[derive(Debug, Serialize)]
pub struct GammaRow {
    pub indices: Vec<usize>,
    pub gamma: Option<Pair>,
    pub arg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct IdentityRow {
    pub indices: Vec<usize>,
    pub direct_arg: Option<f64>,
    pub via_invariants_arg: Option<f64>,
    pub residual: Option<f64>,
    /// γ is defined while some level's geometric phase is not.
    pub exceptional: bool,
}

#[derive(Debug, Serialize)]
pub struct IdentitySection {
    pub max_residual: f64,
    pub exceptional_count: usize,
    pub entries: Vec<IdentityRow>,
}

#[derive(Debug, Serialize)]
pub struct OffDiagDocument {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<GammaRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triples: Option<Vec<GammaRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity: Option<IdentitySection>,
}

fn gamma_row(indices: Vec<usize>, g: Option<Complex64>) -> GammaRow {
    GammaRow {
        indices,
        gamma: g.map(pair),
        arg: g.map(bargmann_core::raw_arg),
        reason: reason_if(g.is_none(), ORTHOGONAL_ENDPOINTS),
    }
}

pub fn offdiag_report(
    f: &FrameEvolution,
    opts: &PhaseOptions,
    pairs: bool,
    triples: bool,
    identity: bool,
) -> Result<OffDiagDocument, CliError> {
    let od = OffDiagonalPhases::new(f, opts);
    let n = od.dim();
    let pair_rows = pairs
        .then(|| {
            bargmann_core::pair_indices(n)
                .into_iter()
                .map(|p| Ok(gamma_row(p.to_vec(), od.gamma_multi(&p)?)))
                .collect::<Result<Vec<_>, CliError>>()
        })
        .transpose()?;
    let triple_rows = triples
        .then(|| {
            bargmann_core::triple_indices(n)
                .into_iter()
                .map(|t| Ok(gamma_row(t.to_vec(), od.gamma_multi(&t)?)))
                .collect::<Result<Vec<_>, CliError>>()
        })
        .transpose()?;
    let identity = identity.then(|| {
        let report = bargmann_core::verify_offdiag_identity(f, opts);
        IdentitySection {
            max_residual: report.max_residual(),
            exceptional_count: report.entries().filter(|e| e.exceptional).count(),
            entries: report
                .entries()
                .map(|e| IdentityRow {
                    indices: e.indices.clone(),
                    direct_arg: e.direct.map(bargmann_core::raw_arg),
                    via_invariants_arg: e.via_invariants.map(bargmann_core::raw_arg),
                    residual: e.residual,
                    exceptional: e.exceptional,
                })
                .collect(),
        }
    });
    Ok(OffDiagDocument {
        n,
        pairs: pair_rows,
        triples: triple_rows,
        identity,
    })
}
