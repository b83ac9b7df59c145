//! Real picture: metrics, symplectic forms and complex structures on `R^{2n}`.
//!
//! `C^n` is identified with `R^{2n}` by `z -> (Re z, Im z)`, the real parts
//! stacked above the imaginary parts. Multiplication by `i` is then
//! `J = [[0, -1], [1, 0]]` in blocks. Bilinear forms are stored as Gram
//! matrices, `g(x, y) = x^T g y`, so the admissibility identity
//! `omega(x, y) = g(J x, y)` becomes `omega = J^T g`.

use nalgebra::{Cholesky, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::HermitianForm;
use crate::linalg::{c, commutator_real, max_norm_real, CMatrix, RMatrix};
use crate::tolerance::Tolerances;

/// Realified multiplication by `i` on `R^{2n}`.
pub fn standard_complex_structure(n: usize) -> RMatrix {
    let mut j = RMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = -1.0;
        j[(n + k, k)] = 1.0;
    }
    j
}

/// Real `2n x 2n` matrix of a complex-linear map `P + iQ`: `[[P, -Q], [Q, P]]`.
pub fn realify_operator(m: &CMatrix) -> RMatrix {
    let n = m.nrows();
    let mut r = RMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            r[(i, j)] = z.re;
            r[(i, n + j)] = -z.im;
            r[(n + i, j)] = z.im;
            r[(n + i, n + j)] = z.re;
        }
    }
    r
}

/// Inverse of [`realify_operator`] for matrices commuting with the standard
/// `J`; the anti-linear part is discarded.
pub fn complexify_operator(r: &RMatrix) -> CMatrix {
    let n = r.nrows() / 2;
    CMatrix::from_fn(n, n, |i, j| {
        c(
            0.5 * (r[(i, j)] + r[(n + i, n + j)]),
            0.5 * (r[(n + i, j)] - r[(i, n + j)]),
        )
    })
}

/// A metric `g`, a symplectic form `omega` and a complex structure `J`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleTriple {
    pub g: RMatrix,
    pub omega: RMatrix,
    pub j: RMatrix,
}

impl AdmissibleTriple {
    /// Assemble a triple as given. Admissibility is not checked here; see
    /// [`admissibility_check`].
    pub fn new(g: RMatrix, omega: RMatrix, j: RMatrix) -> Result<Self> {
        let d = g.nrows();
        for m in [&g, &omega, &j] {
            if m.nrows() != m.ncols() {
                return Err(Error::NotSquare {
                    rows: m.nrows(),
                    cols: m.ncols(),
                });
            }
            if m.nrows() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: m.nrows(),
                });
            }
        }
        if d == 0 || !d.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "real dimension must be even and positive, got {d}"
            )));
        }
        Ok(Self { g, omega, j })
    }

    /// Triple with `omega = J^T g`.
    pub fn from_metric(g: RMatrix, j: RMatrix) -> Result<Self> {
        let omega = j.transpose() * &g;
        Self::new(g, omega, j)
    }

    pub fn real_dim(&self) -> usize {
        self.g.nrows()
    }

    /// Push forward along an invertible `r`: `g -> r^-T g r^-1`,
    /// `J -> r J r^-1`, `omega -> r^-T omega r^-1`.
    pub fn transported(&self, r: &RMatrix) -> Result<Self> {
        let r_inv = r
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("transport map is singular".into()))?;
        let pull = |m: &RMatrix| r_inv.transpose() * m * &r_inv;
        Self::new(pull(&self.g), pull(&self.omega), r * &self.j * &r_inv)
    }

    /// `g(x, y) + i omega(x, y)`, the form built from this triple.
    pub fn hermitian_value(
        &self,
        x: &nalgebra::DVector<f64>,
        y: &nalgebra::DVector<f64>,
    ) -> Complex64 {
        c(x.dot(&(&self.g * y)), x.dot(&(&self.omega * y)))
    }
}

/// Realification of a Hermitian form: `g = Re h`, `omega = Im h`, `J = i`.
pub fn realify(h: &HermitianForm) -> AdmissibleTriple {
    let n = h.dim();
    let m = h.matrix();
    let mut g = RMatrix::zeros(2 * n, 2 * n);
    let mut omega = RMatrix::zeros(2 * n, 2 * n);
    // H = A + iB, with A symmetric and B antisymmetric
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (m[(i, j)].re, m[(i, j)].im);
            g[(i, j)] = a;
            g[(i, n + j)] = -b;
            g[(n + i, j)] = b;
            g[(n + i, n + j)] = a;
            omega[(i, j)] = b;
            omega[(i, n + j)] = a;
            omega[(n + i, j)] = -a;
            omega[(n + i, n + j)] = b;
        }
    }
    AdmissibleTriple {
        g,
        omega,
        j: standard_complex_structure(n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    /// max |g - g^T|
    pub metric_symmetry: f64,
    /// smallest eigenvalue of the symmetric part of g
    pub metric_min_eigenvalue: f64,
    /// max |omega + omega^T|
    pub omega_antisymmetry: f64,
    /// smallest singular value of omega relative to its largest
    pub omega_nondegeneracy: f64,
    /// max |J^2 + 1|
    pub j_square: f64,
    /// max |omega - J^T g|, i.e. omega(x, y) = g(Jx, y)
    pub compatibility: f64,
    /// max |J^T g + g J|, i.e. g(Jx, y) = -g(x, Jy)
    pub j_skew: f64,
    pub admissible: bool,
    pub threshold: f64,
}

pub fn admissibility_check(t: &AdmissibleTriple, tol: &Tolerances) -> AdmissibilityReport {
    let d = t.real_dim();
    let g_t = t.g.transpose();
    let metric_symmetry = max_norm_real(&(&t.g - &g_t));
    let sym = (&t.g + &g_t) * 0.5;
    let metric_min_eigenvalue = SymmetricEigen::new(sym).eigenvalues.min();
    let omega_antisymmetry = max_norm_real(&(&t.omega + t.omega.transpose()));
    let sv = t.omega.clone().singular_values();
    let omega_nondegeneracy = if sv.max() > 0.0 {
        sv.min() / sv.max()
    } else {
        0.0
    };
    let j_square = max_norm_real(&(&t.j * &t.j + RMatrix::identity(d, d)));
    let jt_g = t.j.transpose() * &t.g;
    let compatibility = max_norm_real(&(&t.omega - &jt_g));
    let j_skew = max_norm_real(&(&jt_g + &t.g * &t.j));
    let threshold = tol.herm;
    let admissible = metric_symmetry <= threshold
        && metric_min_eigenvalue > 0.0
        && omega_antisymmetry <= threshold
        && omega_nondegeneracy > tol.psd
        && j_square <= threshold
        && compatibility <= threshold
        && j_skew <= threshold;
    AdmissibilityReport {
        metric_symmetry,
        metric_min_eigenvalue,
        omega_antisymmetry,
        omega_nondegeneracy,
        j_square,
        compatibility,
        j_skew,
        admissible,
        threshold,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutationResiduals {
    pub g_t: f64,
    pub g_j1: f64,
    pub g_j2: f64,
    pub t_j1: f64,
    pub t_j2: f64,
    pub j1_j2: f64,
}

impl CommutationResiduals {
    pub fn max(&self) -> f64 {
        [
            self.g_t, self.g_j1, self.g_j2, self.t_j1, self.t_j2, self.j1_j2,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelfAdjointnessResiduals {
    /// max |G^T g1 - g1 G| and likewise for the other three pairings
    pub g_wrt_g1: f64,
    pub g_wrt_g2: f64,
    pub t_wrt_g1: f64,
    pub t_wrt_g2: f64,
}

/// Two triples with the derived operators `G = g1^-1 g2` and
/// `T = omega1^-1 omega2`.
#[derive(Debug, Clone)]
pub struct CompatiblePair {
    pub triple1: AdmissibleTriple,
    pub triple2: AdmissibleTriple,
    pub g: RMatrix,
    pub t: RMatrix,
    pub commutation: CommutationResiduals,
    pub self_adjointness: SelfAdjointnessResiduals,
    /// max |T + J G J|, present when the two complex structures agree.
    pub recursion_identity: Option<f64>,
    pub compatible: bool,
    pub threshold: f64,
}

fn condition_of_spd(m: &RMatrix) -> f64 {
    let eig = SymmetricEigen::new((m + m.transpose()) * 0.5).eigenvalues;
    let (lo, hi) = (eig.min(), eig.max());
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

pub fn compatibility_operators(
    t1: &AdmissibleTriple,
    t2: &AdmissibleTriple,
    tol: &Tolerances,
) -> Result<CompatiblePair> {
    let d = t1.real_dim();
    if t2.real_dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: t2.real_dim(),
        });
    }
    let condition = condition_of_spd(&t1.g);
    if condition > tol.cond_cap {
        return Err(Error::IllConditioned {
            condition,
            cap: tol.cond_cap,
        });
    }
    let g = Cholesky::new(t1.g.clone())
        .ok_or(Error::IllConditioned {
            condition,
            cap: tol.cond_cap,
        })?
        .solve(&t2.g);

    let lu = t1.omega.clone().lu();
    let sv = t1.omega.clone().singular_values();
    let omega_condition = sv.max() / sv.min();
    if omega_condition.is_nan() || omega_condition > tol.cond_cap {
        return Err(Error::IllConditioned {
            condition: omega_condition,
            cap: tol.cond_cap,
        });
    }
    let t = lu.solve(&t2.omega).ok_or(Error::IllConditioned {
        condition: omega_condition,
        cap: tol.cond_cap,
    })?;

    let (j1, j2) = (&t1.j, &t2.j);
    let comm = |a: &RMatrix, b: &RMatrix| max_norm_real(&commutator_real(a, b));
    let commutation = CommutationResiduals {
        g_t: comm(&g, &t),
        g_j1: comm(&g, j1),
        g_j2: comm(&g, j2),
        t_j1: comm(&t, j1),
        t_j2: comm(&t, j2),
        j1_j2: comm(j1, j2),
    };
    let adj = |a: &RMatrix, metric: &RMatrix| max_norm_real(&(a.transpose() * metric - metric * a));
    let self_adjointness = SelfAdjointnessResiduals {
        g_wrt_g1: adj(&g, &t1.g),
        g_wrt_g2: adj(&g, &t2.g),
        t_wrt_g1: adj(&t, &t1.g),
        t_wrt_g2: adj(&t, &t2.g),
    };
    let threshold = tol.herm_scaled(d);
    let recursion_identity =
        (max_norm_real(&(j1 - j2)) <= threshold).then(|| max_norm_real(&(&t + j1 * &g * j1)));
    let compatible = commutation.max() <= threshold;
    Ok(CompatiblePair {
        triple1: t1.clone(),
        triple2: t2.clone(),
        g,
        t,
        commutation,
        self_adjointness,
        recursion_identity,
        compatible,
        threshold,
    })
}

/// The `g1`-orthogonal splitting into the `+1` and `-1` eigenspaces of
/// `C = -J1 J2`: on the first `J2 = J1`, on the second `J2 = -J1`.
#[derive(Debug, Clone)]
pub struct PlusMinusSplit {
    /// Columns form a `g1`-orthonormal basis.
    pub basis_plus: RMatrix,
    pub basis_minus: RMatrix,
    pub involution: RMatrix,
    /// max |C^2 - 1|
    pub involution_residual: f64,
    /// max |J2 b - J1 b| over the plus basis
    pub plus_residual: f64,
    /// max |J2 b + J1 b| over the minus basis
    pub minus_residual: f64,
    /// max |[C, G]|, |[C, T]|
    pub commutes_with_g: f64,
    pub commutes_with_t: f64,
}

impl PlusMinusSplit {
    pub fn dims(&self) -> (usize, usize) {
        (self.basis_plus.ncols(), self.basis_minus.ncols())
    }
}

/// Column-pivoted Gram-Schmidt of the columns of `p` under the metric `g`.
fn range_basis(p: &RMatrix, g: &RMatrix, rel_tol: f64) -> RMatrix {
    let d = p.nrows();
    let norm = |v: &nalgebra::DVector<f64>| v.dot(&(g * v)).max(0.0).sqrt();
    let mut remaining: Vec<nalgebra::DVector<f64>> =
        (0..p.ncols()).map(|j| p.column(j).into_owned()).collect();
    // compare against unit vectors, not the columns of p: a projector that is
    // zero up to rounding must yield an empty basis
    let scale = (0..d)
        .map(|i| g[(i, i)].max(0.0).sqrt())
        .fold(0.0, f64::max);
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::new();
    while !remaining.is_empty() {
        let (best, best_norm) = remaining
            .iter()
            .enumerate()
            .map(|(k, v)| (k, norm(v)))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_norm <= rel_tol * scale || best_norm <= 0.0 {
            break;
        }
        let mut v = remaining.swap_remove(best);
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dot(&(g * &v));
                v -= b * proj;
            }
        }
        let n = norm(&v);
        let v = v / n;
        for r in remaining.iter_mut() {
            let proj = v.dot(&(g * &*r));
            *r -= &v * proj;
        }
        basis.push(v);
    }
    let mut m = RMatrix::zeros(d, basis.len());
    for (j, b) in basis.iter().enumerate() {
        m.set_column(j, b);
    }
    m
}

pub fn plus_minus_split(pair: &CompatiblePair) -> Result<PlusMinusSplit> {
    if pair.commutation.j1_j2 > pair.threshold {
        return Err(Error::NotCompatible {
            residual: pair.commutation.j1_j2,
        });
    }
    let d = pair.triple1.real_dim();
    let (j1, j2) = (&pair.triple1.j, &pair.triple2.j);
    let c_mat = -(j1 * j2);
    let id = RMatrix::identity(d, d);
    let involution_residual = max_norm_real(&(&c_mat * &c_mat - &id));
    let p_plus = (&id + &c_mat) * 0.5;
    let p_minus = (&id - &c_mat) * 0.5;
    let g1 = &pair.triple1.g;
    let basis_plus = range_basis(&p_plus, g1, 1e-8);
    let basis_minus = range_basis(&p_minus, g1, 1e-8);
    let plus_residual = max_norm_real(&(j2 * &basis_plus - j1 * &basis_plus));
    let minus_residual = max_norm_real(&(j2 * &basis_minus + j1 * &basis_minus));
    Ok(PlusMinusSplit {
        commutes_with_g: max_norm_real(&commutator_real(&c_mat, &pair.g)),
        commutes_with_t: max_norm_real(&commutator_real(&c_mat, &pair.t)),
        basis_plus,
        basis_minus,
        involution: c_mat,
        involution_residual,
        plus_residual,
        minus_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SesquilinearityReport {
    /// max |h2(x, J1 y) - i h2(x, y)| over plus basis pairs
    pub plus_residual: Option<f64>,
    /// max |h2(x, J1 y) + i h2(x, y)| over minus basis pairs
    pub minus_residual: Option<f64>,
    /// For `x = y = b+ + b-`, the smaller of the failures of linearity
    /// and of anti-linearity. Present when both subspaces are nontrivial.
    pub mixed_failure_witness: Option<f64>,
}

/// Read `h2 = g2 + i omega2` as a function on the `J1`-complexification and
/// test how it transforms under `y -> J1 y` on each subspace.
pub fn hermitian_comparison(
    pair: &CompatiblePair,
    split: &PlusMinusSplit,
) -> SesquilinearityReport {
    let t2 = &pair.triple2;
    let j1 = &pair.triple1.j;
    let i = c(0.0, 1.0);
    let check = |basis: &RMatrix, sign: f64| -> Option<f64> {
        if basis.ncols() == 0 {
            return None;
        }
        let mut worst: f64 = 0.0;
        for a in 0..basis.ncols() {
            let x = basis.column(a).into_owned();
            for b in 0..basis.ncols() {
                let y = basis.column(b).into_owned();
                let lhs = t2.hermitian_value(&x, &(j1 * &y));
                let rhs = i * sign * t2.hermitian_value(&x, &y);
                worst = worst.max((lhs - rhs).norm());
            }
        }
        Some(worst)
    };
    let plus_residual = check(&split.basis_plus, 1.0);
    let minus_residual = check(&split.basis_minus, -1.0);
    let mixed_failure_witness = (split.basis_plus.ncols() > 0 && split.basis_minus.ncols() > 0)
        .then(|| {
            let v = split.basis_plus.column(0) + split.basis_minus.column(0);
            let base = t2.hermitian_value(&v, &v);
            let shifted = t2.hermitian_value(&v, &(j1 * &v));
            let linear_failure = (shifted - i * base).norm();
            let antilinear_failure = (shifted + i * base).norm();
            linear_failure.min(antilinear_failure)
        });
    SesquilinearityReport {
        plus_residual,
        minus_residual,
        mixed_failure_witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::validate_form;
    use crate::linalg::diag;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn standard_form_on_one_complex_dimension() {
        let h = validate_form(CMatrix::identity(1, 1), &tol()).unwrap();
        let t = realify(&h);
        assert_eq!(t.g, RMatrix::identity(2, 2));
        assert_eq!(t.j, RMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        // omega(e1, e2) = Im h(1, i) = 1
        assert_eq!(
            t.omega,
            RMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
        );
        let e1 = nalgebra::DVector::from_vec(vec![1.0, 0.0]);
        let e2 = nalgebra::DVector::from_vec(vec![0.0, 1.0]);
        let jx = &t.j * &e1;
        assert_eq!(e1.dot(&(&t.omega * &e2)), jx.dot(&(&t.g * &e2)));
        assert!(admissibility_check(&t, &tol()).admissible);
    }

    #[test]
    fn scaling_doubles_metric_and_symplectic_form() {
        let h = validate_form(diag(&[2.0]), &tol()).unwrap();
        let t = realify(&h);
        assert_eq!(t.g, RMatrix::identity(2, 2) * 2.0);
        assert_eq!(
            t.omega,
            RMatrix::from_row_slice(2, 2, &[0.0, 2.0, -2.0, 0.0])
        );
        assert_eq!(t.j, standard_complex_structure(1));
    }

    #[test]
    fn realified_form_matches_complex_values() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 0.5), c(1.0, -0.5), c(2.0, 0.0)]);
        let h = validate_form(m, &tol()).unwrap();
        let t = realify(&h);
        let x = crate::linalg::CVector::from_vec(vec![c(0.3, -1.0), c(2.0, 0.7)]);
        let y = crate::linalg::CVector::from_vec(vec![c(-0.4, 0.2), c(1.1, 1.5)]);
        let re = |v: &crate::linalg::CVector| {
            nalgebra::DVector::from_vec(vec![v[0].re, v[1].re, v[0].im, v[1].im])
        };
        let direct = h.eval(&x, &y);
        let via_real = t.hermitian_value(&re(&x), &re(&y));
        assert!((direct - via_real).norm() < 1e-14);
        let report = admissibility_check(&t, &tol());
        assert!(report.admissible);
        assert!(report.compatibility < 1e-12 && report.j_skew < 1e-12 && report.j_square < 1e-12);
    }

    #[test]
    fn sign_flips_break_admissibility() {
        let h = validate_form(diag(&[1.0, 3.0]), &tol()).unwrap();
        let t = realify(&h);
        let flipped_j = AdmissibleTriple::new(t.g.clone(), t.omega.clone(), -&t.j).unwrap();
        let report = admissibility_check(&flipped_j, &tol());
        assert!(!report.admissible && report.compatibility > 0.1);
        let both = AdmissibleTriple::new(t.g.clone(), -&t.omega, -&t.j).unwrap();
        assert!(admissibility_check(&both, &tol()).admissible);
        let id =
            AdmissibleTriple::new(t.g.clone(), t.omega.clone(), RMatrix::identity(4, 4)).unwrap();
        let report = admissibility_check(&id, &tol());
        assert!(!report.admissible && report.j_square > 1.0);
    }

    #[test]
    fn identical_triples_give_identity_operators() {
        let t = realify(&validate_form(diag(&[2.0, 5.0]), &tol()).unwrap());
        let pair = compatibility_operators(&t, &t, &tol()).unwrap();
        assert!(max_norm_real(&(&pair.g - RMatrix::identity(4, 4))) < 1e-14);
        assert!(max_norm_real(&(&pair.t - RMatrix::identity(4, 4))) < 1e-14);
        assert!(pair.compatible);
        assert!(pair.commutation.max() < 1e-14);
    }

    #[test]
    fn non_commuting_complex_structures_are_incompatible() {
        let t1 = realify(&validate_form(CMatrix::identity(1, 1), &tol()).unwrap());
        let squeeze = RMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        let t2 = t1.transported(&squeeze).unwrap();
        assert!(admissibility_check(&t2, &tol()).admissible);
        let pair = compatibility_operators(&t1, &t2, &tol()).unwrap();
        assert!(!pair.compatible);
        assert!(pair.commutation.j1_j2 > 1.0);
        assert!(matches!(
            plus_minus_split(&pair),
            Err(Error::NotCompatible { .. })
        ));
    }

    #[test]
    fn opposite_complex_structure_is_all_minus() {
        let t1 = realify(&validate_form(diag(&[1.0, 2.0]), &tol()).unwrap());
        let t2 = AdmissibleTriple::from_metric(t1.g.clone() * 3.0, -&t1.j).unwrap();
        let pair = compatibility_operators(&t1, &t2, &tol()).unwrap();
        assert!(pair.compatible);
        let split = plus_minus_split(&pair).unwrap();
        assert_eq!(split.dims(), (0, 4));
        let report = hermitian_comparison(&pair, &split);
        assert!(report.plus_residual.is_none());
        assert!(report.minus_residual.unwrap() < 1e-12);
        assert!(report.mixed_failure_witness.is_none());
    }
}
