//! Dense complex linear-algebra helpers shared across modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest absolute entry.
pub fn max_norm(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_norm_real(m: &RMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn commutator_real(a: &RMatrix, b: &RMatrix) -> RMatrix {
    a * b - b * a
}

/// Build a complex matrix from a real one.
pub fn complexify(m: &RMatrix) -> CMatrix {
    m.map(|x| c(x, 0.0))
}

/// Complex matrix from row-major `[re, im]` pairs.
pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> CMatrix {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    CMatrix::from_fn(n_rows, n_cols, |i, j| {
        let [re, im] = rows[i][j];
        c(re, im)
    })
}

/// Row-major `[re, im]` pairs, the wire format used by every JSON file.
pub fn to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn real_from_rows(rows: &[Vec<f64>]) -> RMatrix {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    RMatrix::from_fn(n_rows, n_cols, |i, j| rows[i][j])
}

pub fn real_to_rows(m: &RMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|&x| c(x, 0.0)),
    ))
}

/// Sorted (ascending) eigen-decomposition of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Orthonormal basis of the null space of `m`: the right singular vectors
/// whose singular value is at most `cutoff`.
pub fn null_space(m: &CMatrix, cutoff: f64) -> Vec<CVector> {
    let cols = m.ncols();
    // thin SVD of a wide matrix drops part of the null space; pad with zeros
    let padded = if m.nrows() < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect()
}

/// Numerical rank from singular values with a relative cutoff.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    let svd = SVD::new(m.clone(), false, false);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > rel_tol * sigma_max)
        .count()
}

/// Matrix of `X -> A X - X A` acting on column-major `vec(X)`.
pub fn commutator_operator(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let id = CMatrix::identity(n, n);
    id.kronecker(a) - a.transpose().kronecker(&id)
}

pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_column_slice(n, n, v.as_slice())
}

/// `h(x, y) = x^dagger H y`.
pub fn form_value(h: &CMatrix, x: &CVector, y: &CVector) -> Complex64 {
    x.dotc(&(h * y))
}

/// Modified Gram-Schmidt under the inner product `x^dagger H y`, applied
/// twice per vector. Vectors whose remaining norm falls below
/// `drop_tol * (largest input norm)` are discarded.
pub fn orthonormalize(vectors: &[CVector], metric: &CMatrix, drop_tol: f64) -> Vec<CVector> {
    let scale = vectors
        .iter()
        .map(|v| form_value(metric, v, v).re.max(0.0).sqrt())
        .fold(0.0, f64::max);
    let mut basis: Vec<CVector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = form_value(metric, b, &w);
                w -= b * proj;
            }
        }
        let norm = form_value(metric, &w, &w).re.max(0.0).sqrt();
        if norm > drop_tol * scale && norm > 0.0 {
            basis.push(w.unscale(norm));
        }
    }
    basis
}

pub fn columns_to_matrix(columns: &[CVector], rows: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, columns.len());
    for (j, col) in columns.iter().enumerate() {
        m.set_column(j, col);
    }
    m
}

pub fn standard_complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed `k x k` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal pushed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(k: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(k, k, |_, _| standard_complex_gaussian(rng));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..k {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Complex number with modulus uniform in `[0.5, 1.5]` and uniform phase.
pub fn bounded_random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let modulus = rng.random_range(0.5..=1.5);
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(modulus, phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_sample_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..6 {
            let u = haar_unitary(k, &mut rng);
            let residual = max_norm(&(u.adjoint() * &u - CMatrix::identity(k, k)));
            assert!(residual < 1e-13, "k={k} residual={residual}");
        }
    }

    #[test]
    fn null_space_of_wide_matrix_is_complete() {
        let m = CMatrix::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(null_space(&m, 1e-12).len(), 2);
    }

    #[test]
    fn commutator_operator_matches_direct_commutator() {
        let a = CMatrix::from_fn(3, 3, |i, j| c((i * 3 + j) as f64, (i as f64) - (j as f64)));
        let x = CMatrix::from_fn(3, 3, |i, j| c((i + 2 * j) as f64 * 0.5, 1.0));
        let via_kron = unvectorize(&(commutator_operator(&a) * vectorize(&x)), 3);
        assert!(max_norm(&(via_kron - commutator(&a, &x))) < 1e-12);
    }

    #[test]
    fn orthonormalize_drops_dependent_vectors() {
        let h = diag(&[2.0, 1.0]);
        let v1 = CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let v2 = v1.scale(3.0);
        let v3 = CVector::from_vec(vec![c(0.0, 0.0), c(0.0, 1.0)]);
        let basis = orthonormalize(&[v1, v2, v3], &h, 1e-10);
        assert_eq!(basis.len(), 2);
        let g = form_value(&h, &basis[0], &basis[1]);
        assert!(g.norm() < 1e-14);
    }
}
