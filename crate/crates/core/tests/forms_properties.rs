use bihermitian::forms::{connecting_operator, validate_form, HermitianForm};
use bihermitian::linalg::{c, max_norm, standard_complex_gaussian, CMatrix, CVector};
use bihermitian::real_structures::realify_operator;
use bihermitian::selftest::random_form_matrix;
use bihermitian::{Error, Tolerances};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn pair(n: usize, seed: u64) -> (HermitianForm, HermitianForm, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h1 = validate_form(random_form_matrix(n, &mut rng), &tol()).unwrap();
    let h2 = validate_form(random_form_matrix(n, &mut rng), &tol()).unwrap();
    (h1, h2, rng)
}

fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> CVector {
    CVector::from_fn(n, |_, _| standard_complex_gaussian(rng))
}

/// Solve `G^dagger H1 = H2` by Gaussian elimination on the transposed system,
/// independently of the Cholesky route.
fn oracle_g(h1: &CMatrix, h2: &CMatrix) -> CMatrix {
    let lu = h1.adjoint().lu();
    lu.solve(&h2.adjoint()).unwrap()
}

#[test]
fn defining_identity_on_100_random_pairs() {
    for seed in 0..100u64 {
        let n = 1 + (seed % 8) as usize;
        let (h1, h2, mut rng) = pair(n, seed);
        let g = connecting_operator(&h1, &h2, &tol()).unwrap();
        for _ in 0..100 {
            let x = random_vector(n, &mut rng);
            let y = random_vector(n, &mut rng);
            let lhs = h2.eval(&x, &y);
            let rhs = h1.eval(&(g.matrix() * &x), &y);
            let scale = x.norm() * y.norm();
            assert!((lhs - rhs).norm() <= 1e-12 * scale.max(1.0), "seed {seed}");
        }
        assert!(max_norm(&(g.matrix() - oracle_g(h1.matrix(), h2.matrix()))) < 1e-10);
    }
}

#[test]
fn eigenvalues_are_positive_and_match_the_pencil() {
    for seed in 0..50u64 {
        let n = 1 + (seed % 6) as usize;
        let (h1, h2, _) = pair(n, seed);
        let g = connecting_operator(&h1, &h2, &tol()).unwrap();
        assert!(g.eigenvalues().iter().all(|&l| l > 0.0));
        // independent: Schur eigenvalues of the real representation of the LU
        // solution, where each eigenvalue of G appears twice
        let real = realify_operator(&oracle_g(h1.matrix(), h2.matrix()));
        let mut oracle: Vec<_> = real.complex_eigenvalues().iter().copied().collect();
        assert!(oracle.iter().all(|z| z.im.abs() < 1e-8));
        oracle.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (k, a) in g.eigenvalues().iter().enumerate() {
            assert!((a - oracle[2 * k].re).abs() < 1e-8 * a.max(1.0));
            assert!((a - oracle[2 * k + 1].re).abs() < 1e-8 * a.max(1.0));
        }
    }
}

#[test]
fn rejected_inputs() {
    let h = validate_form(CMatrix::identity(2, 2), &tol()).unwrap();
    let h3 = validate_form(CMatrix::identity(3, 3), &tol()).unwrap();
    assert!(matches!(
        connecting_operator(&h, &h3, &tol()),
        Err(Error::DimensionMismatch {
            expected: 2,
            found: 3
        })
    ));
    let skew = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)]);
    assert!(matches!(
        validate_form(skew, &tol()),
        Err(Error::NotHermitian { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scale_equivariance(seed in any::<u64>(), n in 1usize..7, factor in 0.01f64..100.0) {
        let (h1, h2, _) = pair(n, seed);
        let g = connecting_operator(&h1, &h2, &tol()).unwrap();
        let scaled = connecting_operator(&h1, &h2.scaled(factor).unwrap(), &tol()).unwrap();
        let diff = max_norm(&(scaled.matrix() - g.matrix().scale(factor)));
        prop_assert!(diff <= 1e-12 * factor.max(1.0) * max_norm(g.matrix()).max(1.0));
    }

    #[test]
    fn equal_forms_give_identity(seed in any::<u64>(), n in 1usize..8) {
        let (h, _, _) = pair(n, seed);
        let g = connecting_operator(&h, &h, &tol()).unwrap();
        prop_assert!(max_norm(&(g.matrix() - CMatrix::identity(n, n))) <= tol().herm);
    }

    #[test]
    fn connecting_operator_is_self_adjoint_for_both(seed in any::<u64>(), n in 1usize..8) {
        let (h1, h2, _) = pair(n, seed);
        let g = connecting_operator(&h1, &h2, &tol()).unwrap();
        prop_assert!(g.self_adjoint_residual_1 <= tol().herm_scaled(n));
        prop_assert!(g.self_adjoint_residual_2 <= tol().herm_scaled(n));
        prop_assert!(g.defining_residual() <= tol().herm_scaled(n));
    }
}
