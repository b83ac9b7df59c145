//! Sample the group preserving both forms and show what fails for a mere
//! `h1`-unitary.

use bihermitian::biunitary::{
    biunitary_from_function, commutation_audit, eigenframe, random_h1_unitary, sample_biunitary,
    verify_against,
};
use bihermitian::forms::validate_form;
use bihermitian::genericity::commutant_basis;
use bihermitian::linalg::diag;
use bihermitian::Tolerances;

fn main() -> bihermitian::Result<()> {
    let tol = Tolerances::default();
    let h1 = validate_form(diag(&[1.0, 2.0, 1.0]), &tol)?;
    let h2 = validate_form(diag(&[2.0, 4.0, 5.0]), &tol)?;
    let frame = eigenframe(&h1, &h2, &tol)?;
    println!("cluster sizes {:?}: group U(2) x U(1)", frame.cluster_sizes);

    let u = sample_biunitary(&frame, 42);
    let v = verify_against(&u.matrix, frame.operator(), &tol)?;
    println!(
        "Haar sample: biunitary={} {:?}",
        v.is_biunitary, v.residuals
    );

    let phases = biunitary_from_function(&frame, &[0.3, -1.2])?;
    println!("exp(i theta(G)): {:?}", phases.residuals);

    let w = random_h1_unitary(&h1, 1);
    let v = verify_against(&w, frame.operator(), &tol)?;
    println!(
        "random h1-unitary: biunitary={} preserves h2 {:.2}, [G, U] {:.2}",
        v.is_biunitary, v.residuals.preserves_h2, v.residuals.commutes_with_g
    );

    let commutant = commutant_basis(frame.operator(), &tol);
    println!(
        "commutant dimension {}, largest commutator of basis elements {:.3}",
        commutant.dimension(),
        commutation_audit(&commutant)
    );
    Ok(())
}
