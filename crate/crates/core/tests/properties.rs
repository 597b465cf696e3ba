use bargmann_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vectors(n: usize, dim: usize, seed: u64) -> Vec<UnitVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_unit_vector(dim, &mut rng)).collect()
}

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inner_product_conjugate_symmetric(dim in 1usize..8, seed: u64) {
        let v = vectors(2, dim, seed);
        let uv = inner_product(&v[0], &v[1]).unwrap();
        let vu = inner_product(&v[1], &v[0]).unwrap();
        prop_assert!((uv - vu.conj()).norm() < 1e-14);
    }

    #[test]
    fn arg_is_additive(a in 0.01f64..10.0, ta in -3.2f64..3.2, b in 0.01f64..10.0, tb in -3.2f64..3.2) {
        let z = Complex64::from_polar(a, ta);
        let w = Complex64::from_polar(b, tb);
        let lhs = principal_arg(z * w, &tol()).unwrap();
        let rhs = principal_arg(z, &tol()).unwrap() + principal_arg(w, &tol()).unwrap();
        prop_assert!(circular_distance(lhs, rhs) < 1e-12);
    }

    #[test]
    fn bargmann_cyclic_invariance(n in 2usize..8, dim in 2usize..5, shift in 0usize..8, seed: u64) {
        let v = vectors(n, dim, seed);
        let mut r = v.clone();
        r.rotate_left(shift % n);
        let a = bargmann_invariant(&v, &tol()).unwrap().value;
        let b = bargmann_invariant(&r, &tol()).unwrap().value;
        prop_assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn bargmann_phase_change_invariance(n in 2usize..8, idx in 0usize..8, theta in -3.2f64..3.2, seed: u64) {
        let v = vectors(n, 3, seed);
        let mut w = v.clone();
        w[idx % n] = w[idx % n].with_phase(theta);
        let a = bargmann_invariant(&v, &tol()).unwrap().value;
        let b = bargmann_invariant(&w, &tol()).unwrap().value;
        prop_assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn two_vertex_interleaved_is_real(dim in 2usize..6, j in 0usize..6, k in 0usize..6, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psis = haar_unitary(dim, &mut rng).columns();
        let phis = haar_unitary(dim, &mut rng).columns();
        let v = interleaved_invariant(
            &psis,
            &phis,
            &[Vertex::Initial(j % dim), Vertex::Final(k % dim)],
            &tol(),
        )
        .unwrap()
        .value;
        prop_assert!(v.im.abs() < 1e-15 && v.re >= 0.0);
    }

    #[test]
    fn round_trip_and_uniqueness(n in 2usize..=8, seed: u64) {
        let a = random_generic_unitary(n, seed);
        let p = decompose(&a, &tol()).unwrap();
        let b = reconstruct(&p, &tol()).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-10);
        prop_assert!(validate_unitary(b.matrix().clone(), &tol()).is_ok());
        let q = decompose(&b, &tol()).unwrap();
        for (u, v) in p.vectors().iter().zip(q.vectors()) {
            for (x, y) in u.as_slice().iter().zip(v.as_slice()) {
                prop_assert!((x - y).norm() < 1e-10);
            }
        }
        prop_assert!(circular_distance(p.chi(), q.chi()) < 1e-10);
    }

    #[test]
    fn coset_structure(n in 2usize..=8, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zeta = random_unit_vector(n, &mut rng);
        let a = coset_representative(&zeta, &tol()).unwrap();
        let rho = rho_ladder(&zeta);
        for j in 0..n {
            for k in 0..n {
                let x = a.get(j, k);
                if j >= k + 2 {
                    prop_assert_eq!(x, Complex64::new(0.0, 0.0));
                } else if j == k + 1 {
                    prop_assert!(x.re > 0.0 && x.im.abs() < 1e-14);
                    prop_assert!((x.re - rho.get(k) / rho.get(j)).abs() < 1e-12);
                } else if k == n - 1 {
                    prop_assert_eq!(x, zeta.get(j));
                } else {
                    let expect = -zeta.get(k + 1).conj() * zeta.get(j) / (rho.get(k) * rho.get(k + 1));
                    prop_assert!((x - expect).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn general_cycle_reduces(n in 3usize..=6, seed: u64) {
        let v = vectors(n, 3, seed);
        let lhs = bargmann_invariant(&v, &tol()).unwrap();
        let red = reduce_general_bargmann(&v, CycleKind::Generic, &tol()).unwrap();
        prop_assert!(circular_distance(lhs.arg().unwrap(), red.arg_sum(&v, &tol()).unwrap()) < 1e-10);
        let (prod, weight) = red.evaluate(&v, &tol()).unwrap();
        prop_assert!((prod / weight - lhs.value).norm() < 1e-12);
    }

    #[test]
    fn interleaved_cycle_reduces(l in 2usize..=4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = l + 1;
        let psis = haar_unitary(dim, &mut rng).columns();
        let phis = haar_unitary(dim, &mut rng).columns();
        let pattern: Vec<Vertex> = (0..l).flat_map(|i| [Vertex::Initial(i), Vertex::Final(i + 1)]).collect();
        let lhs = interleaved_invariant(&psis, &phis, &pattern, &tol()).unwrap();
        let verts: Vec<UnitVector> = pattern
            .iter()
            .map(|v| match *v {
                Vertex::Initial(j) => psis[j].clone(),
                Vertex::Final(k) => phis[k].clone(),
            })
            .collect();
        let red = reduce_general_bargmann(&verts, CycleKind::Interleaved, &tol()).unwrap();
        prop_assert!(red.factors.iter().all(|f| f.len() == 4));
        prop_assert!(circular_distance(lhs.arg().unwrap(), red.arg_sum(&verts, &tol()).unwrap()) < 1e-10);
    }

    #[test]
    fn delta4_reduces_to_adjacent(n in 3usize..=6, seed: u64, a in 0usize..6, b in 0usize..6, c in 0usize..6, d in 0usize..6) {
        let j = a % (n - 1);
        let l = j + 1 + b % (n - 1 - j);
        let k = c % (n - 1);
        let m = k + 1 + d % (n - 1 - k);
        let u = random_generic_unitary(n, seed);
        let lhs = raw_arg(delta4_general(&u, j, l, k, m).unwrap());
        let rhs: f64 = reduce_to_adjacent(j, l, k, m)
            .unwrap()
            .into_iter()
            .map(|(p, q)| raw_arg(delta4_primitive(&u, p, q).unwrap()))
            .sum();
        prop_assert!(circular_distance(lhs, rhs) < 1e-10);
    }

    #[test]
    fn gauge_leaves_invariants(n in 3usize..=6, seed: u64) {
        let a = random_generic_unitary(n, seed);
        let r = verify_invariants_under_gauge(&a, 5, seed ^ 0x5eed, &tol()).unwrap();
        prop_assert!(r.passed(1e-12, 1e-10), "{:?}", r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rec = verify_gauge_recursion(
            &a,
            &DiagonalPhases::random(n, &mut rng),
            &DiagonalPhases::random(n, &mut rng),
            &tol(),
        )
        .unwrap();
        prop_assert!(rec.passed(1e-10), "{:?}", rec);
    }

    #[test]
    fn gamma_cyclic_invariance(n in 3usize..=5, seed: u64) {
        let f = random_frame_evolution(n, 120, seed).unwrap();
        let od = OffDiagonalPhases::new(&f, &PhaseOptions::default());
        let idx: Vec<usize> = (0..n).collect();
        let g = od.gamma_multi(&idx).unwrap().unwrap();
        for s in 1..n {
            let mut r = idx.clone();
            r.rotate_left(s);
            let h = od.gamma_multi(&r).unwrap().unwrap();
            prop_assert!((g - h).norm() < 1e-14);
        }
    }
}

#[test]
fn counting_claims() {
    for n in 2..=10 {
        let p = decompose(&random_generic_unitary(n, n as u64), &tol()).unwrap();
        assert_eq!(modulus_invariants(&p).len(), n * (n - 1) / 2);
        assert_eq!(phase_invariant_list(&p, &tol()).unwrap().len(), (n - 1) * (n - 2) / 2);
        assert_eq!(independent_primitive_set(n).len(), (n - 1) * (n - 2) / 2);
        assert_eq!(p.real_parameter_count(), n * n);
    }
}

#[test]
fn independence_rank() {
    for n in 3..=5 {
        for seed in 0..5 {
            let p = decompose(&random_generic_unitary(n, 100 + seed), &tol()).unwrap();
            let pairs = independent_primitive_set(n);
            let jac = phase_jacobian(&p, &pairs, 1e-5, &tol()).unwrap();
            assert_eq!(numerical_rank(&jac, 1e-6), (n - 1) * (n - 2) / 2);
        }
    }
}
