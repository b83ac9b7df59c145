use bihermitian::biunitary::{eigenframe_of, frame_unit_vector};
use bihermitian::forms::{connecting_operator, validate_form};
use bihermitian::genericity::{commutant_basis, genericity_of, krylov_rank};
use bihermitian::linalg::{c, columns_to_matrix, diag, vectorize, CMatrix, CVector};
use bihermitian::selftest::{
    brute_force_dimensions, engineered_instance, instance_set, random_instance, rref_null_space,
};
use bihermitian::Tolerances;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

/// The 2x2 Krylov matrix `[x, G x]` has rank 2 iff its determinant is
/// nonzero.
#[test]
fn two_by_two_krylov_rank_by_determinant() {
    let g = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
    for x in [[1.0, 0.0], [1.0, 2.0], [0.3, -0.7]] {
        let x = CVector::from_vec(vec![c(x[0], 0.0), c(x[1], 0.0)]);
        let gx = &g * &x;
        let det = x[0] * gx[1] - x[1] * gx[0];
        let expected = if det.norm() > 1e-12 { 2 } else { 1 };
        assert_eq!(krylov_rank(&g, &x, 1e-10), expected);
    }
    // eigenvectors of G are never cyclic
    let e = CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
    assert_eq!(krylov_rank(&g, &e, 1e-10), 1);
}

#[test]
fn rref_oracle_on_known_systems() {
    let m = CMatrix::from_row_slice(
        2,
        3,
        &[
            c(1.0, 0.0),
            c(2.0, 0.0),
            c(3.0, 0.0),
            c(2.0, 0.0),
            c(4.0, 0.0),
            c(6.0, 0.0),
        ],
    );
    let ns = rref_null_space(&m, 1e-12);
    assert_eq!(ns.len(), 2);
    for v in &ns {
        assert!((&m * v).norm() < 1e-12);
    }
    assert_eq!(brute_force_dimensions(&diag(&[2.0, 2.0, 5.0])), (5, 2));
    assert_eq!(brute_force_dimensions(&diag(&[1.0, 3.0])), (2, 2));
    assert_eq!(brute_force_dimensions(&CMatrix::identity(2, 2)), (4, 1));
}

#[test]
fn unit_vector_in_the_eigenframe_is_cyclic_for_generic_pairs() {
    let mut checked = 0;
    for inst in instance_set(200, 8, 11) {
        let g = connecting_operator(&inst.h1, &inst.h2, &tol()).unwrap();
        let report = genericity_of(&g, 1, &tol()).unwrap();
        let frame = eigenframe_of(g.clone(), &tol());
        let x0 = frame_unit_vector(&frame);
        let rank = krylov_rank(g.matrix(), &x0, tol().rank);
        assert_eq!(rank == g.dim(), report.is_generic());
        checked += usize::from(report.is_generic());
    }
    assert!(checked > 50);
}

/// For generic `G`, every commutant element is a polynomial in `G`.
#[test]
fn generic_commutant_is_polynomial_in_g() {
    for inst in instance_set(200, 6, 5) {
        let g = connecting_operator(&inst.h1, &inst.h2, &tol()).unwrap();
        let n = g.dim();
        if !genericity_of(&g, 0, &tol()).unwrap().is_generic() {
            continue;
        }
        let mut powers = vec![CMatrix::identity(n, n)];
        for k in 1..n {
            powers.push(&powers[k - 1] * g.matrix());
        }
        let basis = columns_to_matrix(&powers.iter().map(vectorize).collect::<Vec<_>>(), n * n);
        let qr = basis.clone().qr();
        let q = qr.q();
        for e in commutant_basis(&g, &tol()).elements {
            let v = vectorize(&e);
            let residual = &v - &q * (q.adjoint() * &v);
            let worst = residual.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(worst < tol().herm, "residual {worst}");
        }
    }
}

#[test]
fn engineered_instances_report_their_multiplicities() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=8 {
        for _ in 0..10 {
            let inst = engineered_instance(n, &mut rng, &tol()).unwrap();
            let g = connecting_operator(&inst.h1, &inst.h2, &tol()).unwrap();
            let r = genericity_of(&g, 0, &tol()).unwrap();
            let sizes = inst.cluster_sizes.unwrap();
            assert_eq!(r.clusters.multiplicities(), sizes);
            assert!(!r.is_generic());
            assert_eq!(r.commutant_dim, sizes.iter().map(|k| k * k).sum::<usize>());
            assert_eq!(r.bicommutant_dim, sizes.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn three_tests_agree(seed in any::<u64>(), n in 1usize..=8, engineered in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = if engineered {
            engineered_instance(n, &mut rng, &tol()).unwrap()
        } else {
            random_instance(n, &mut rng, &tol()).unwrap()
        };
        let g = connecting_operator(&inst.h1, &inst.h2, &tol()).unwrap();
        let r = genericity_of(&g, seed, &tol()).unwrap();
        prop_assert!(r.dimension_law_holds());
        let generic = r.is_generic();
        prop_assert_eq!(generic, r.commutant_dim == n);
        prop_assert_eq!(generic, r.bicommutant_dim == n);
        prop_assert_eq!(generic, r.krylov_rank == n);
    }

    #[test]
    fn proportional_forms_are_degenerate(seed in any::<u64>(), n in 2usize..=6, factor in 0.1f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h1 = validate_form(bihermitian::selftest::random_form_matrix(n, &mut rng), &tol()).unwrap();
        let h2 = h1.scaled(factor).unwrap();
        let g = connecting_operator(&h1, &h2, &tol()).unwrap();
        let r = genericity_of(&g, seed, &tol()).unwrap();
        prop_assert_eq!(r.clusters.multiplicities(), vec![n]);
        prop_assert_eq!(r.commutant_dim, n * n);
        prop_assert_eq!(r.bicommutant_dim, 1);
    }
}
