//! Realify a pair of forms, then compare two triples whose complex
//! structures agree on one subspace and are opposite on another.

use bihermitian::forms::validate_form;
use bihermitian::linalg::{c, CMatrix};
use bihermitian::real_structures::{
    admissibility_check, compatibility_operators, hermitian_comparison, plus_minus_split, realify,
};
use bihermitian::selftest::mixed_triples;
use bihermitian::Tolerances;
use rand::SeedableRng;

fn main() -> bihermitian::Result<()> {
    let tol = Tolerances::default();
    let h1 = validate_form(CMatrix::identity(2, 2), &tol)?;
    let h2 = validate_form(
        CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)]),
        &tol,
    )?;
    let (t1, t2) = (realify(&h1), realify(&h2));
    println!(
        "admissible: {} {}",
        admissibility_check(&t1, &tol).admissible,
        admissibility_check(&t2, &tol).admissible
    );
    let pair = compatibility_operators(&t1, &t2, &tol)?;
    println!(
        "same J: compatible={} |T + JGJ| = {:.1e}",
        pair.compatible,
        pair.recursion_identity.unwrap()
    );

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let (t1, t2) = mixed_triples(3, 1, &mut rng, &tol);
    let pair = compatibility_operators(&t1, &t2, &tol)?;
    let split = plus_minus_split(&pair)?;
    println!(
        "mixed: d+ = {}, d- = {}, |C^2 - 1| = {:.1e}",
        split.dims().0,
        split.dims().1,
        split.involution_residual
    );
    let report = hermitian_comparison(&pair, &split);
    println!(
        "h2 linear on V+ ({:.1e}), antilinear on V- ({:.1e}), neither across ({:.3})",
        report.plus_residual.unwrap(),
        report.minus_residual.unwrap(),
        report.mixed_failure_witness.unwrap()
    );
    Ok(())
}
