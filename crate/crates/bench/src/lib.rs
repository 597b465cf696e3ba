//! Fixed inputs shared by the benchmarks.

use bargmann_core::{random_frame_evolution, random_generic_unitary, FrameEvolution, UnitaryMatrix};

/// Seeded generic unitaries, one per dimension.
pub fn unitaries(dims: &[usize]) -> Vec<UnitaryMatrix> {
    dims.iter().map(|&n| random_generic_unitary(n, n as u64)).collect()
}

/// Seeded random frame evolution on `points` grid points.
pub fn evolution(n: usize, points: usize) -> FrameEvolution {
    random_frame_evolution(n, points, 1000 + n as u64).expect("smooth at this resolution")
}
