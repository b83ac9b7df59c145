use bihermitian::biunitary::{
    biunitary_from_function, commutation_audit, eigenframe_of, off_block_norm, random_h1_unitary,
    sample_biunitary, verify_against, verify_biunitary,
};
use bihermitian::forms::{connecting_operator, validate_form};
use bihermitian::genericity::commutant_basis;
use bihermitian::linalg::{c, diag, max_norm, CMatrix};
use bihermitian::selftest::{engineered_instance, instance_set, random_instance};
use bihermitian::{Error, Tolerances};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn closure_and_inverses() {
    for (k, inst) in instance_set(40, 8, 21).into_iter().enumerate() {
        let g = connecting_operator(&inst.h1, &inst.h2, &tol()).unwrap();
        let frame = eigenframe_of(g.clone(), &tol());
        let a = sample_biunitary(&frame, 2 * k as u64).matrix;
        let b = sample_biunitary(&frame, 2 * k as u64 + 1).matrix;
        let product = &a * &b;
        assert!(verify_against(&product, &g, &tol()).unwrap().is_biunitary);
        let inverse = a.clone().try_inverse().unwrap();
        assert!(verify_against(&inverse, &g, &tol()).unwrap().is_biunitary);
        // the inverse of an h1-unitary is H1^-1 U^dagger H1
        let via_adjoint =
            inst.h1.matrix().clone().try_inverse().unwrap() * a.adjoint() * inst.h1.matrix();
        assert!(max_norm(&(inverse - via_adjoint)) < 1e-10);
    }
}

#[test]
fn phase_functions_pass_verification() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 1..=6 {
        let inst = engineered_instance(n, &mut rng, &tol()).unwrap();
        let g = connecting_operator(&inst.h1, &inst.h2, &tol()).unwrap();
        let frame = eigenframe_of(g, &tol());
        let m = frame.cluster_count();
        let theta: Vec<f64> = (0..m).map(|k| 0.7 * k as f64 - 1.0).collect();
        let u = biunitary_from_function(&frame, &theta).unwrap();
        assert!(
            verify_biunitary(&u.matrix, &inst.h1, &inst.h2, &tol())
                .unwrap()
                .is_biunitary
        );
        assert!(off_block_norm(&frame, &u.matrix) < 1e-10);
        assert!(matches!(
            biunitary_from_function(&frame, &theta[..m - 1]),
            Err(Error::MissingClusterValue { .. })
        ));
    }
}

#[test]
fn swap_is_not_biunitary_for_distinct_eigenvalues() {
    let h1 = validate_form(CMatrix::identity(2, 2), &tol()).unwrap();
    let h2 = validate_form(diag(&[1.0, 3.0]), &tol()).unwrap();
    let swap = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let v = verify_biunitary(&swap, &h1, &h2, &tol()).unwrap();
    assert!(v.h1_unitary && !v.is_biunitary && v.equivalence_holds);
    // with equal eigenvalues the swap is allowed
    let h2 = validate_form(diag(&[2.0, 2.0]), &tol()).unwrap();
    assert!(
        verify_biunitary(&swap, &h1, &h2, &tol())
            .unwrap()
            .is_biunitary
    );
}

#[test]
fn audit_separates_generic_from_degenerate() {
    for inst in instance_set(120, 6, 4) {
        let g = connecting_operator(&inst.h1, &inst.h2, &tol()).unwrap();
        let n = g.dim();
        let audit = commutation_audit(&commutant_basis(&g, &tol()));
        match inst.cluster_sizes {
            Some(sizes) if sizes.iter().any(|&k| k > 1) => assert!(audit > 0.1, "audit {audit}"),
            _ => assert!(audit < 1e-8 * n as f64, "audit {audit}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// For `h1`-unitary `U`, `U^dagger H2 U = H2` iff `[G, U] = 0`.
    #[test]
    fn preservation_iff_commutation(seed in any::<u64>(), n in 1usize..=6, engineered in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = if engineered {
            engineered_instance(n, &mut rng, &tol()).unwrap()
        } else {
            random_instance(n, &mut rng, &tol()).unwrap()
        };
        let g = connecting_operator(&inst.h1, &inst.h2, &tol()).unwrap();
        let frame = eigenframe_of(g.clone(), &tol());
        let threshold = 1e-8 * n as f64;
        for s in 0..100u64 {
            let u = if s % 2 == 0 {
                random_h1_unitary(&inst.h1, seed ^ s)
            } else {
                sample_biunitary(&frame, seed ^ s).matrix
            };
            let r = verify_against(&u, &g, &tol()).unwrap().residuals;
            prop_assert!(r.preserves_h1 < threshold);
            prop_assert_eq!(r.preserves_h2 < threshold, r.commutes_with_g < threshold);
        }
    }

    #[test]
    fn samples_are_block_diagonal(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = engineered_instance(n, &mut rng, &tol()).unwrap();
        let g = connecting_operator(&inst.h1, &inst.h2, &tol()).unwrap();
        let frame = eigenframe_of(g.clone(), &tol());
        let u = sample_biunitary(&frame, seed);
        prop_assert!(verify_against(&u.matrix, &g, &tol()).unwrap().is_biunitary);
        prop_assert!(off_block_norm(&frame, &u.matrix) < 1e-10);
    }
}
