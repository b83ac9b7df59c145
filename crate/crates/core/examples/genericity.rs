//! The three genericity tests on a generic and a degenerate pair.

use bihermitian::forms::validate_form;
use bihermitian::genericity::genericity_report;
use bihermitian::linalg::{c, diag, CMatrix};
use bihermitian::Tolerances;

fn main() -> bihermitian::Result<()> {
    let tol = Tolerances::default();
    let id = validate_form(CMatrix::identity(3, 3), &tol)?;

    let cases = [
        ("diag(1, 2, 3)", diag(&[1.0, 2.0, 3.0])),
        ("diag(2, 2, 5)", diag(&[2.0, 2.0, 5.0])),
        (
            "coupled",
            CMatrix::from_row_slice(
                3,
                3,
                &[
                    c(2.0, 0.0),
                    c(1.0, 0.0),
                    c(0.0, 0.0),
                    c(1.0, 0.0),
                    c(2.0, 0.0),
                    c(0.0, 1.0),
                    c(0.0, 0.0),
                    c(0.0, -1.0),
                    c(2.0, 0.0),
                ],
            ),
        ),
    ];
    for (name, h2) in cases {
        let h2 = validate_form(h2, &tol)?;
        let r = genericity_report(&id, &h2, 7, &tol)?;
        println!(
            "{name:>14}: generic={} clusters={:?} krylov rank={} dim G'={} dim G''={}",
            r.is_generic(),
            r.clusters.multiplicities(),
            r.krylov_rank,
            r.commutant_dim,
            r.bicommutant_dim
        );
    }
    Ok(())
}
