//! Build two Hermitian forms, solve for the connecting operator and check
//! `h2(x, y) = h1(G x, y)` on a pair of vectors.
//!
//! ```text
//! cargo run --example connecting_operator
//! ```

use bihermitian::forms::{connecting_operator, validate_form};
use bihermitian::linalg::{c, diag, CMatrix, CVector};
use bihermitian::Tolerances;

fn main() -> bihermitian::Result<()> {
    let tol = Tolerances::default();

    let h1 = validate_form(diag(&[2.0, 1.0]), &tol)?;
    let h2 = validate_form(diag(&[2.0, 3.0]), &tol)?;
    let g = connecting_operator(&h1, &h2, &tol)?;
    println!("G = {:.3}", g.matrix());
    println!("eigenvalues {:?}", g.eigenvalues());

    // a non-diagonal pair
    let h2 = CMatrix::from_row_slice(2, 2, &[c(3.0, 0.0), c(1.0, -1.0), c(1.0, 1.0), c(2.0, 0.0)]);
    let h2 = validate_form(h2, &tol)?;
    let g = connecting_operator(&h1, &h2, &tol)?;
    let x = CVector::from_vec(vec![c(1.0, 0.5), c(-0.3, 2.0)]);
    let y = CVector::from_vec(vec![c(0.0, 1.0), c(1.5, -0.5)]);
    let gx = g.matrix() * &x;
    println!("h2(x, y)    = {}", h2.eval(&x, &y));
    println!("h1(G x, y)  = {}", h1.eval(&gx, &y));
    println!("defining residual {:.1e}", g.defining_residual());
    println!(
        "self-adjoint for h1: {:.1e}, for h2: {:.1e}",
        g.self_adjoint_residual_1, g.self_adjoint_residual_2
    );

    match validate_form(
        CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]),
        &tol,
    ) {
        Err(e) => println!("[[1,2],[2,1]] rejected: {e}"),
        Ok(_) => unreachable!("indefinite matrix accepted"),
    }
    Ok(())
}
