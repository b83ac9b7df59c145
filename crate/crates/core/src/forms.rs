//! Hermitian structures and the operator connecting two of them.
//!
//! Forms are linear in the second argument: `h(x, y) = x^dagger H y`. The
//! connecting operator `G` of a pair is characterised by
//! `h2(x, y) = h1(G x, y)`, which in matrix terms reads `H1 G = H2`.

use nalgebra::Cholesky;

use crate::error::{Error, Result};
use crate::linalg::{form_value, hermitian_eigen, max_norm, CMatrix, CVector};
use crate::tolerance::Tolerances;

/// A validated positive-definite Hermitian form. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianForm {
    matrix: CMatrix,
    min_eigenvalue: f64,
    max_eigenvalue: f64,
}

impl HermitianForm {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eval(&self, x: &CVector, y: &CVector) -> num_complex::Complex64 {
        form_value(&self.matrix, x, y)
    }

    pub fn eigenvalue_range(&self) -> (f64, f64) {
        (self.min_eigenvalue, self.max_eigenvalue)
    }

    pub fn condition_number(&self) -> f64 {
        self.max_eigenvalue / self.min_eigenvalue
    }

    /// `c * h` for a real `c > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        Ok(Self {
            matrix: self.matrix.scale(factor),
            min_eigenvalue: self.min_eigenvalue * factor,
            max_eigenvalue: self.max_eigenvalue * factor,
        })
    }
}

/// Check that `matrix` is Hermitian and positive definite. The matrix is kept
/// exactly as given.
pub fn validate_form(matrix: CMatrix, tol: &Tolerances) -> Result<HermitianForm> {
    let (rows, cols) = matrix.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Err(Error::Empty);
    }
    if matrix
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    let residual = max_norm(&(&matrix - matrix.adjoint()));
    if residual > tol.herm {
        return Err(Error::NotHermitian {
            residual,
            tolerance: tol.herm,
        });
    }
    let (values, _) = hermitian_eigen(&matrix);
    let min_eigenvalue = values[0];
    let max_eigenvalue = values[rows - 1];
    if max_eigenvalue <= 0.0 || min_eigenvalue <= tol.psd * max_eigenvalue {
        return Err(Error::NotPositive {
            min_eigenvalue,
            max_eigenvalue,
        });
    }
    Ok(HermitianForm {
        matrix,
        min_eigenvalue,
        max_eigenvalue,
    })
}

/// The operator `G` with `h2(x, y) = h1(G x, y)`, together with its
/// certificates.
#[derive(Debug, Clone)]
pub struct ConnectingOperator {
    matrix: CMatrix,
    h1: HermitianForm,
    h2: HermitianForm,
    /// max |G^dagger H1 - H1 G|
    pub self_adjoint_residual_1: f64,
    /// max |G^dagger H2 - H2 G|
    pub self_adjoint_residual_2: f64,
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl ConnectingOperator {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn h1(&self) -> &HermitianForm {
        &self.h1
    }

    pub fn h2(&self) -> &HermitianForm {
        &self.h2
    }

    /// Eigenvalues in ascending order. All real and strictly positive.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors of `G` as columns, aligned with [`Self::eigenvalues`] and
    /// orthonormal under `h1`.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    /// max |h2(x, y) - h1(G x, y)| in matrix form: `G^dagger H1 - H2`.
    pub fn defining_residual(&self) -> f64 {
        max_norm(&(self.matrix.adjoint() * self.h1.matrix() - self.h2.matrix()))
    }

    /// Projection onto the `h1`-orthogonal complement of `ker G`, assembled
    /// from the eigenvectors whose eigenvalue exceeds `tol.psd` (relative).
    /// For a positive `G` this is the identity.
    pub fn principal_identity(&self, tol: &Tolerances) -> CMatrix {
        let n = self.dim();
        let top = self.eigenvalues.last().copied().unwrap_or(0.0);
        let mut e0 = CMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            if lambda > tol.psd * top {
                let v = self.eigenvectors.column(k);
                e0 += v * (v.adjoint() * self.h1.matrix());
            }
        }
        e0
    }
}

/// Solve `H1 G = H2` and certify the result.
pub fn connecting_operator(
    h1: &HermitianForm,
    h2: &HermitianForm,
    tol: &Tolerances,
) -> Result<ConnectingOperator> {
    if h1.dim() != h2.dim() {
        return Err(Error::DimensionMismatch {
            expected: h1.dim(),
            found: h2.dim(),
        });
    }
    let condition = h1.condition_number();
    if condition > tol.cond_cap {
        return Err(Error::IllConditioned {
            condition,
            cap: tol.cond_cap,
        });
    }
    let chol = Cholesky::new(h1.matrix.clone()).ok_or(Error::NotPositive {
        min_eigenvalue: h1.min_eigenvalue,
        max_eigenvalue: h1.max_eigenvalue,
    })?;
    let g = chol.solve(&h2.matrix);

    let (eigenvalues, eigenvectors) = definite_pencil(&chol, &h2.matrix);

    let g_adj = g.adjoint();
    let self_adjoint_residual_1 = max_norm(&(&g_adj * &h1.matrix - &h1.matrix * &g));
    let self_adjoint_residual_2 = max_norm(&(&g_adj * &h2.matrix - &h2.matrix * &g));

    Ok(ConnectingOperator {
        matrix: g,
        h1: h1.clone(),
        h2: h2.clone(),
        self_adjoint_residual_1,
        self_adjoint_residual_2,
        eigenvalues,
        eigenvectors,
    })
}

/// Solve `H2 v = lambda H1 v` with `H1 = L L^dagger` by reducing to the
/// Hermitian matrix `L^-1 H2 L^-dagger`. Returned eigenvectors satisfy
/// `V^dagger H1 V = 1`.
fn definite_pencil(
    chol: &Cholesky<num_complex::Complex64, nalgebra::Dyn>,
    h2: &CMatrix,
) -> (Vec<f64>, CMatrix) {
    let l = chol.l();
    let y = l
        .solve_lower_triangular(h2)
        .expect("Cholesky factor is nonsingular");
    let reduced = l
        .solve_lower_triangular(&y.adjoint())
        .expect("Cholesky factor is nonsingular")
        .adjoint();
    let reduced = (&reduced + reduced.adjoint()).unscale(2.0);
    let (values, w) = hermitian_eigen(&reduced);
    let v = l
        .adjoint()
        .solve_upper_triangular(&w)
        .expect("Cholesky factor is nonsingular");
    (values, v)
}
