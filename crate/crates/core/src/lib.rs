//! Canonical factorization of U(n), Bargmann invariants, and geometric and
//! off-diagonal phases of moving orthonormal frames.
//!
//! All level, row and column indices are 0-based.

// `!(x > t)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bargmann;
pub mod canonical;
pub mod error;
pub mod gauge;
pub mod generators;
pub mod offdiag;
pub mod phase;
pub mod types;

pub use bargmann::{
    bargmann_invariant, delta4_general, delta4_primitive, independent_primitive_set,
    interleaved_invariant, numerical_rank, phase_jacobian, reduce_general_bargmann,
    reduce_to_adjacent, BargmannValue, CycleKind, Delta4Grid, Reduction, Vertex,
};
pub use canonical::{
    coset_representative, decompose, modulus_invariants, phase_invariant_list, reconstruct,
    rho_ladder, CanonicalParams, RhoLadder,
};
pub use error::{Error, Result};
pub use gauge::{
    gauge_transform_curve, gauge_transform_frames, gauge_transform_matrix, random_smooth_phases,
    verify_gauge_recursion, verify_invariants_under_gauge, DiagonalPhases, InvarianceReport,
    RecursionReport,
};
pub use generators::{
    constant_frame_evolution, engineered_swap_evolution, frame_evolution_from_path,
    haar_unitary, random_frame_evolution, random_generic_unitary, random_generic_unitary_census,
    random_hermitian, random_unit_vector, Coefficient, HermitianPath,
};
pub use offdiag::{
    dynamical_factor, gamma_diag, gamma_multi, gamma_pair, gamma_via_invariants, pair_indices,
    sigma, triple_indices, verify_offdiag_identity, GammaEntry, OffDiagReport,
    OffDiagonalPhases,
};
pub use phase::{
    dynamical_phase, endpoint_overlap_matrix, frame_phase_bundle, geometric_phase,
    phase_report, total_phase, uniform_grid, FrameEvolution, PhaseOptions, PhaseReport,
    Quadrature, StateCurve,
};
pub use types::{
    circular_distance, inner_product, principal_arg, raw_arg, unitarity_deviation,
    validate_unitary, wrap_phase, Tolerances, UnitVector, UnitaryMatrix,
};

pub use num_complex::Complex64;
