//! Grid model of `1 + x^2` on symmetric, half and asymmetric boxes.

use bihermitian::direct_integral::{
    build_box_operator, cyclicity_audit, multiplicity_profile_with_breaks, sample_box_biunitary,
    sigma_measure, BoxShape,
};

fn main() -> bihermitian::Result<()> {
    let shapes = [
        BoxShape::Symmetric { alpha: 1.0 },
        BoxShape::Half { alpha: 1.0 },
        BoxShape::Asymmetric {
            alpha: 1.0,
            beta: 2.0,
        },
    ];
    for shape in shapes {
        let op = build_box_operator(shape, 200)?;
        let profile = multiplicity_profile_with_breaks(&op, 0.25, &shape.breakpoints())?;
        let audit = cyclicity_audit(&op, 1);
        let u = sample_box_biunitary(&op, 1);
        println!("{shape:?}");
        for b in &profile.bins {
            println!(
                "  [{:.2}, {:.2})  multiplicity {}",
                b.lo, b.hi, b.multiplicity
            );
        }
        println!(
            "  Krylov rank {} of {} points, largest bi-unitary block {}",
            audit.krylov_rank,
            op.len(),
            u.max_block_size()
        );
    }

    let op = build_box_operator(BoxShape::Symmetric { alpha: 1.0 }, 1000)?;
    for lambda in [1.25, 1.5, 1.75] {
        let s = sigma_measure(&op, lambda)?;
        println!(
            "sigma({lambda}) = {:.5}  (exact {:.5})",
            s.numeric, s.analytic
        );
    }
    Ok(())
}
