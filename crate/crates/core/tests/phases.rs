use std::f64::consts::PI;

use bargmann_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(cos(θ/2), e^{is} sin(θ/2))`: a latitude circle on the Bloch sphere.
fn latitude(theta: f64, s: f64) -> UnitVector {
    UnitVector::new(vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), s),
    ])
    .unwrap()
}

#[test]
fn pancharatnam_is_second_order() {
    // sin^2(θ/2) = 1/4, so the exact dynamical phase over [0, L] is L/4
    let theta = PI / 3.0;
    let len = 2.0;
    let mut errors = Vec::new();
    let mut n = 100;
    while n <= 102_400 {
        let c = StateCurve::sample(0.0, len, n, |s| Ok(latitude(theta, s))).unwrap();
        errors.push((dynamical_phase(&c, Quadrature::Pancharatnam) - len / 4.0).abs());
        n *= 2;
    }
    for w in errors.windows(2) {
        assert!(w[0] / w[1] >= 3.5, "{errors:?}");
    }
}

#[test]
fn closed_latitude_loop() {
    for theta in [0.3, 1.0, 2.0] {
        let c = StateCurve::sample(0.0, 2.0 * PI, 4000, |s| Ok(latitude(theta, s))).unwrap();
        let g = geometric_phase(&c, &PhaseOptions::default()).unwrap();
        let expect = wrap_phase(-2.0 * PI * (theta / 2.0).sin().powi(2));
        assert!(circular_distance(g, expect) < 1e-5, "{g} vs {expect}");
    }
}

#[test]
fn reparametrization_is_exact() {
    let c = StateCurve::sample(0.0, 1.5, 500, |s| Ok(latitude(0.8, s * s))).unwrap();
    let warped: Vec<f64> = c.grid().iter().map(|s| s.powi(3) + 2.0 * s).collect();
    let d = c.regrid(warped).unwrap();
    let opts = PhaseOptions::default();
    assert_eq!(total_phase(&c, &opts.tol), total_phase(&d, &opts.tol));
    for q in [Quadrature::Pancharatnam, Quadrature::Trapezoid] {
        assert!((dynamical_phase(&c, q) - dynamical_phase(&d, q)).abs() < 1e-13);
    }
}

#[test]
fn geometric_phase_exactly_gauge_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = StateCurve::sample(0.0, 3.0, 1000, |s| Ok(latitude(1.1 + 0.3 * s.sin(), s))).unwrap();
    let opts = PhaseOptions::default();
    let g = geometric_phase(&c, &opts).unwrap();
    // smooth gauge
    let smooth: Vec<f64> = c.grid().iter().map(|s| 3.0 * s.sin() + s * s).collect();
    // rough gauge: any pointwise phase works for the discrete functional
    let rough: Vec<f64> = c.grid().iter().map(|_| rng.random_range(-PI..PI)).collect();
    for alpha in [smooth, rough] {
        let d = gauge_transform_curve(&c, &alpha).unwrap();
        let h = geometric_phase(&d, &opts).unwrap();
        assert!(circular_distance(g, h) <= 1e-12);
    }
}

#[test]
fn undefined_total_tracks_diagonal_overlap() {
    let f = engineered_swap_evolution(4, 1, 3, 301).unwrap();
    let a = endpoint_overlap_matrix(&f);
    let bundle = frame_phase_bundle(&f, &PhaseOptions::default());
    for (j, r) in bundle.iter().enumerate() {
        assert_eq!(r.total.is_none(), a.get(j, j).norm() <= 1e-8, "level {j}");
    }
    assert!(bundle[0].total.is_some() && bundle[2].total.is_some());
    assert_eq!(bundle[0].geometric, Some(0.0));
}

fn random_column_gauges(f: &FrameEvolution, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..f.dim()).map(|_| random_smooth_phases(f.grid(), rng)).collect()
}

#[test]
fn gamma_gauge_invariant_sigma_not() {
    let opts = PhaseOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 3..=5 {
        let f = random_frame_evolution(n, 300, 40 + n as u64).unwrap();
        let od = OffDiagonalPhases::new(&f, &opts);
        let mut sigma_moved = 0.0f64;
        for _ in 0..20 {
            let g = gauge_transform_frames(&f, &random_column_gauges(&f, &mut rng)).unwrap();
            let og = OffDiagonalPhases::new(&g, &opts);
            for [j, k] in pair_indices(n) {
                let a = od.gamma_pair(j, k).unwrap().unwrap();
                let b = og.gamma_pair(j, k).unwrap().unwrap();
                assert!((a - b).norm() < 1e-10);
                let s = (od.sigma(j, k).unwrap().unwrap() - og.sigma(j, k).unwrap().unwrap()).norm();
                sigma_moved = sigma_moved.max(s);
            }
            for t in triple_indices(n) {
                let a = od.gamma_multi(&t).unwrap().unwrap();
                let b = og.gamma_multi(&t).unwrap().unwrap();
                assert!((a - b).norm() < 1e-10);
            }
            for j in 0..n {
                let a = od.gamma_diag(j).unwrap().unwrap();
                let b = og.gamma_diag(j).unwrap().unwrap();
                assert!((a - b).norm() < 1e-10);
            }
        }
        assert!(sigma_moved > 1e-3);
    }
}

#[test]
fn dynamical_factor_examples() {
    let opts = PhaseOptions::default();
    let f = random_frame_evolution(4, 200, 3).unwrap();
    for j in 0..4 {
        assert!((dynamical_factor(&f, j, &opts).unwrap().norm() - 1.0).abs() < 1e-13);
    }
    // e^{is} ψ_0 on [0, π] in every column: φ_dyn = π
    let grid = uniform_grid(0.0, PI, 400);
    let frames = grid
        .iter()
        .map(|&s| UnitaryMatrix::diagonal_phases(&[s, s]))
        .collect();
    let f = FrameEvolution::new(grid, frames).unwrap();
    assert!((dynamical_factor(&f, 0, &opts).unwrap() + 1.0).norm() < 1e-12);
}

#[test]
fn exceptional_pairs_stay_defined() {
    let opts = PhaseOptions::default();
    for (n, j, k) in [(2, 0, 1), (3, 0, 2), (5, 1, 4)] {
        let f = engineered_swap_evolution(n, j, k, 801).unwrap();
        let od = OffDiagonalPhases::new(&f, &opts);
        let g = od.gamma_pair(j, k).unwrap().unwrap();
        assert!((g + 1.0).norm() < 1e-9);
        assert_eq!(od.geometric_phase(j).unwrap(), None);
        assert_eq!(od.geometric_phase(k).unwrap(), None);
        assert_eq!(od.gamma_via_invariants(&[j, k]).unwrap(), None);
    }
}

#[test]
fn eigenframes_orthonormal_and_continuous() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 4;
    let basis = vec![random_hermitian(n, &mut rng), random_hermitian(n, &mut rng), random_hermitian(n, &mut rng)];
    let coefficients = vec![
        Coefficient::constant(1.0),
        Coefficient::Polynomial(vec![0.0, 0.4, -0.1]),
        Coefficient::Fourier {
            omega: 1.0,
            cos: vec![0.0, 0.3],
            sin: vec![0.0, 0.2],
        },
    ];
    let h = HermitianPath::new(basis, coefficients, (0.0, 1.0)).unwrap();
    let f = frame_evolution_from_path(&h, 1000).unwrap();
    for u in f.frames() {
        assert!(u.deviation() < 1e-10);
    }
    for w in f.frames().windows(2) {
        let p = w[0].matrix().adjoint() * w[1].matrix();
        for j in 0..n {
            assert!(p[(j, j)].norm() > 0.999);
            // aligned: successive overlaps real positive
            assert!(p[(j, j)].im.abs() < 1e-12 && p[(j, j)].re > 0.0);
        }
    }
    // identical inputs, identical bits
    assert_eq!(f, frame_evolution_from_path(&h, 1000).unwrap());
}
