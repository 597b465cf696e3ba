//! Seeded verification suites behind `bargmann verify`.

use bargmann_core::{
    bargmann_invariant, circular_distance, decompose, delta4_general, delta4_primitive,
    gauge_transform_frames, haar_unitary, independent_primitive_set, interleaved_invariant,
    modulus_invariants, numerical_rank, phase_invariant_list, phase_jacobian, random_frame_evolution,
    random_generic_unitary, random_smooth_phases, random_unit_vector, raw_arg, reconstruct,
    reduce_general_bargmann, reduce_to_adjacent, verify_gauge_recursion, verify_invariants_under_gauge,
    verify_offdiag_identity, CycleKind, DiagonalPhases, OffDiagonalPhases, PhaseOptions, UnitVector,
    Vertex,
};
use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Gauge,
    Reduction,
    Counting,
    Roundtrip,
    Offdiag,
}

/// Outcome of one property.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found: Option<usize>,
}

impl Check {
    /// Passes when `deviation <= threshold`.
    fn at_most(name: &'static str, deviation: f64, threshold: f64) -> Self {
        Check {
            name,
            passed: deviation <= threshold,
            max_deviation: Some(deviation),
            min_value: None,
            threshold: Some(threshold),
            expected: None,
            found: None,
        }
    }

    /// Passes when `value > threshold`.
    fn above(name: &'static str, value: f64, threshold: f64) -> Self {
        Check {
            name,
            passed: value > threshold,
            max_deviation: None,
            min_value: Some(value),
            threshold: Some(threshold),
            expected: None,
            found: None,
        }
    }

    fn count(name: &'static str, expected: usize, found: usize) -> Self {
        Check {
            name,
            passed: expected == found,
            max_deviation: None,
            min_value: None,
            threshold: None,
            expected: Some(expected),
            found: Some(found),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Trial `t` of a run seeded with `seed` draws from stream `seed * 2^20 + t`.
fn trial_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_mul(1 << 20).wrapping_add(t as u64)
}

const GAUGE_TOL: f64 = 1e-10;
const ROUNDTRIP_TOL: f64 = 1e-10;
const REDUCTION_TOL: f64 = 1e-10;
const OFFDIAG_TOL: f64 = 1e-8;
const SIGMA_MOVE: f64 = 1e-3;
const RANK_CUTOFF: f64 = 1e-6;
/// Grid points of the random frame evolutions used by the suites.
const EVOLUTION_POINTS: usize = 200;

pub fn run_suite(suite: Suite, n: usize, trials: usize, seed: u64, opts: &PhaseOptions) -> Result<VerifyReport, CliError> {
    if n < 2 {
        return Err(CliError::Parse(format!("--n must be at least 2, got {n}")));
    }
    let checks = match suite {
        Suite::Gauge => gauge_suite(n, trials, seed, opts)?,
        Suite::Reduction => reduction_suite(n, trials, seed, opts)?,
        Suite::Counting => counting_suite(n, seed, opts)?,
        Suite::Roundtrip => roundtrip_suite(n, trials, seed, opts)?,
        Suite::Offdiag => offdiag_suite(n, trials, seed, opts)?,
    };
    Ok(VerifyReport {
        suite,
        n,
        trials,
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn gauge_suite(n: usize, trials: usize, seed: u64, opts: &PhaseOptions) -> Result<Vec<Check>, CliError> {
    let tol = &opts.tol;
    let a = random_generic_unitary(n, seed);
    let inv = verify_invariants_under_gauge(&a, trials, trial_seed(seed, 1), tol)?;

    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, 2));
    let mut recursion = 0.0f64;
    for _ in 0..trials {
        let r = verify_gauge_recursion(
            &a,
            &DiagonalPhases::random(n, &mut rng),
            &DiagonalPhases::random(n, &mut rng),
            tol,
        )?;
        recursion = recursion.max(r.zeta_deviation).max(r.block_deviation);
    }

    // γ and σ under independent smooth phase changes of each frame vector
    let f = random_frame_evolution(n, EVOLUTION_POINTS, trial_seed(seed, 3))?;
    let od = OffDiagonalPhases::new(&f, opts);
    let pairs = bargmann_core::pair_indices(n);
    let triples = bargmann_core::triple_indices(n);
    let mut gamma_dev = 0.0f64;
    let mut sigma_min_move = f64::INFINITY;
    for _ in 0..trials {
        let alphas: Vec<Vec<f64>> = (0..n).map(|_| random_smooth_phases(f.grid(), &mut rng)).collect();
        let g = OffDiagonalPhases::new(&gauge_transform_frames(&f, &alphas)?, opts);
        let tuples = pairs.iter().map(|p| p.as_slice()).chain(triples.iter().map(|t| t.as_slice()));
        for idx in tuples {
            if let (Some(x), Some(y)) = (od.gamma_multi(idx)?, g.gamma_multi(idx)?) {
                gamma_dev = gamma_dev.max((x - y).norm());
            }
        }
        let mut moved = 0.0f64;
        for p in &pairs {
            for (j, k) in [(p[0], p[1]), (p[1], p[0])] {
                if let (Some(x), Some(y)) = (od.sigma(j, k)?, g.sigma(j, k)?) {
                    moved = moved.max((x - y).norm());
                }
            }
        }
        sigma_min_move = sigma_min_move.min(moved);
    }
    if trials == 0 {
        sigma_min_move = f64::INFINITY;
    }

    Ok(vec![
        Check::at_most("entry_moduli", inv.entry_modulus_deviation, GAUGE_TOL),
        Check::at_most("delta4_primitive", inv.delta4_deviation, GAUGE_TOL),
        Check::at_most("delta4_general", inv.delta4_general_deviation, GAUGE_TOL),
        Check::at_most("phase_invariant_list", inv.phase_list_deviation, GAUGE_TOL),
        Check::at_most("modulus_invariants", inv.modulus_invariant_deviation, GAUGE_TOL),
        Check::at_most("tower_recursion", recursion, GAUGE_TOL),
        Check::at_most("gamma_pair_and_multi", gamma_dev, GAUGE_TOL),
        Check::above("sigma_changes", sigma_min_move, SIGMA_MOVE),
    ])
}

fn reduction_suite(n: usize, trials: usize, seed: u64, opts: &PhaseOptions) -> Result<Vec<Check>, CliError> {
    let tol = &opts.tol;
    let n = n.max(3);
    let mut quad = 0.0f64;
    let mut fan = 0.0f64;
    let mut interleaved = 0.0f64;
    let mut adjacent = 0.0f64;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
        let dim = n;

        // four vertices into two triangles
        let v: Vec<UnitVector> = (0..4).map(|_| random_unit_vector(dim, &mut rng)).collect();
        let lhs = bargmann_invariant(&v, tol)?;
        let red = reduce_general_bargmann(&v, CycleKind::Generic, tol)?;
        quad = quad.max(circular_distance(raw_arg(lhs.value), red.arg_sum(&v, tol)?));

        // n vertices into a fan of triangles
        let v: Vec<UnitVector> = (0..n).map(|_| random_unit_vector(dim, &mut rng)).collect();
        let lhs = bargmann_invariant(&v, tol)?;
        let red = reduce_general_bargmann(&v, CycleKind::Generic, tol)?;
        fan = fan.max(circular_distance(raw_arg(lhs.value), red.arg_sum(&v, tol)?));

        // alternating cycle of length 2n between two frames
        let psis = haar_unitary(dim, &mut rng).columns();
        let phis = haar_unitary(dim, &mut rng).columns();
        let pattern: Vec<Vertex> = (0..n)
            .flat_map(|i| [Vertex::Initial(i), Vertex::Final((i + 1) % n)])
            .collect();
        let lhs = interleaved_invariant(&psis, &phis, &pattern, tol)?;
        let verts: Vec<UnitVector> = pattern
            .iter()
            .map(|v| match *v {
                Vertex::Initial(j) => psis[j].clone(),
                Vertex::Final(k) => phis[k].clone(),
            })
            .collect();
        let red = reduce_general_bargmann(&verts, CycleKind::Interleaved, tol)?;
        interleaved = interleaved.max(circular_distance(raw_arg(lhs.value), red.arg_sum(&verts, tol)?));

        // every Δ_{jlkm} of a random unitary into adjacent primitives
        let a = random_generic_unitary(n, trial_seed(seed, t));
        for j in 0..n {
            for l in j + 1..n {
                for k in 0..n {
                    for m in k + 1..n {
                        let lhs = raw_arg(delta4_general(&a, j, l, k, m)?);
                        let mut rhs = 0.0;
                        for (p, q) in reduce_to_adjacent(j, l, k, m)? {
                            rhs += raw_arg(delta4_primitive(&a, p, q)?);
                        }
                        adjacent = adjacent.max(circular_distance(lhs, rhs));
                    }
                }
            }
        }
    }
    Ok(vec![
        Check::at_most("quadrilateral_to_triangles", quad, REDUCTION_TOL),
        Check::at_most("cycle_to_triangle_fan", fan, REDUCTION_TOL),
        Check::at_most("interleaved_to_quadrilaterals", interleaved, REDUCTION_TOL),
        Check::at_most("delta4_to_adjacent", adjacent, REDUCTION_TOL),
    ])
}

fn counting_suite(n: usize, seed: u64, opts: &PhaseOptions) -> Result<Vec<Check>, CliError> {
    let tol = &opts.tol;
    let p = decompose(&random_generic_unitary(n, seed), tol)?;
    let independent = (n - 1) * (n - 2) / 2;
    let mut checks = vec![
        Check::count("modulus_invariants", n * (n - 1) / 2, modulus_invariants(&p).len()),
        Check::count("phase_invariants", independent, phase_invariant_list(&p, tol)?.len()),
        Check::count("canonical_parameters", n * n, p.real_parameter_count()),
    ];
    if n >= 3 {
        let pairs = independent_primitive_set(n);
        let jac = phase_jacobian(&p, &pairs, 1e-5, tol)?;
        checks.push(Check::count("primitive_phase_rank", independent, numerical_rank(&jac, RANK_CUTOFF)));
    }
    Ok(checks)
}

fn roundtrip_suite(n: usize, trials: usize, seed: u64, opts: &PhaseOptions) -> Result<Vec<Check>, CliError> {
    let tol = &opts.tol;
    let mut worst = 0.0f64;
    for t in 0..trials {
        let a = random_generic_unitary(n, trial_seed(seed, t));
        let b = reconstruct(&decompose(&a, tol)?, tol)?;
        worst = worst.max(a.max_abs_diff(&b));
    }
    Ok(vec![Check::at_most("reconstruct_decompose", worst, ROUNDTRIP_TOL)])
}

fn offdiag_suite(n: usize, trials: usize, seed: u64, opts: &PhaseOptions) -> Result<Vec<Check>, CliError> {
    let mut residual = 0.0f64;
    let mut regroup = 0.0f64;
    let mut undefined = 0usize;
    for t in 0..trials {
        let f = random_frame_evolution(n, EVOLUTION_POINTS, trial_seed(seed, t))?;
        let report = verify_offdiag_identity(&f, opts);
        residual = residual.max(report.max_residual());
        undefined += report.entries().filter(|e| e.residual.is_none()).count();
        if n >= 4 {
            let od = OffDiagonalPhases::new(&f, opts);
            let idx: Vec<usize> = (0..n).collect();
            if let (Some(d), Some(r)) = (od.gamma_multi(&idx)?, od.gamma_multi_reduced(&idx)?) {
                regroup = regroup.max(circular_distance(raw_arg(d), raw_arg(r)));
            }
        }
    }
    let mut checks = vec![
        Check::at_most("gamma_identity", residual, OFFDIAG_TOL),
        Check::count("undefined_entries", 0, undefined),
    ];
    if n >= 4 {
        checks.push(Check::at_most("higher_order_regrouping", regroup, OFFDIAG_TOL));
    }
    Ok(checks)
}
