//! The group of transformations preserving both forms of a pair.
//!
//! In an `h1`-orthonormal eigenframe of `G` the group is block diagonal,
//! one unitary block per eigenvalue cluster: `U(n_1) x ... x U(n_m)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{connecting_operator, ConnectingOperator, HermitianForm};
use crate::genericity::{spectral_clusters, OperatorAlgebraBasis};
use crate::linalg::{c, commutator, haar_unitary, max_norm, CMatrix, CVector};
use crate::tolerance::Tolerances;

/// Columns of `v` are `h1`-orthonormal eigenvectors of `G`, grouped by
/// cluster.
#[derive(Debug, Clone)]
pub struct EigenFrame {
    pub v: CMatrix,
    /// Cluster eigenvalue for each column.
    pub eigenvalues: Vec<f64>,
    /// Cluster index for each column.
    pub cluster_index: Vec<usize>,
    /// Number of columns in each cluster.
    pub cluster_sizes: Vec<usize>,
    operator: ConnectingOperator,
}

impl EigenFrame {
    pub fn dim(&self) -> usize {
        self.v.nrows()
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_sizes.len()
    }

    pub fn operator(&self) -> &ConnectingOperator {
        &self.operator
    }

    /// `V^-1 = V^dagger H1`.
    pub fn inverse(&self) -> CMatrix {
        self.v.adjoint() * self.operator.h1().matrix()
    }

    /// Express an operator in frame coordinates: `V^-1 A V`.
    pub fn to_frame(&self, a: &CMatrix) -> CMatrix {
        self.inverse() * a * &self.v
    }

    /// Map a frame-coordinate operator back: `V B V^-1`.
    pub fn from_frame(&self, b: &CMatrix) -> CMatrix {
        &self.v * b * self.inverse()
    }

    /// Column offset of each cluster block.
    pub fn cluster_offsets(&self) -> Vec<usize> {
        self.cluster_sizes
            .iter()
            .scan(0, |acc, &size| {
                let start = *acc;
                *acc += size;
                Some(start)
            })
            .collect()
    }

    /// max |V^dagger H1 V - 1|
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.dim();
        max_norm(
            &(self.v.adjoint() * self.operator.h1().matrix() * &self.v - CMatrix::identity(n, n)),
        )
    }

    /// max |V^-1 G V - diag(eigenvalues)|
    pub fn diagonalization_residual(&self) -> f64 {
        max_norm(&(self.to_frame(self.operator.matrix()) - self.lambda_matrix()))
    }

    /// max |V^dagger H2 V - diag(eigenvalues)|: h2 restricted to each
    /// eigenspace is the eigenvalue times h1.
    pub fn proportionality_residual(&self) -> f64 {
        max_norm(&(self.v.adjoint() * self.operator.h2().matrix() * &self.v - self.lambda_matrix()))
    }

    fn lambda_matrix(&self) -> CMatrix {
        crate::linalg::diag(&self.eigenvalues)
    }
}

pub fn eigenframe(h1: &HermitianForm, h2: &HermitianForm, tol: &Tolerances) -> Result<EigenFrame> {
    let operator = connecting_operator(h1, h2, tol)?;
    Ok(eigenframe_of(operator, tol))
}

pub fn eigenframe_of(operator: ConnectingOperator, tol: &Tolerances) -> EigenFrame {
    let n = operator.dim();
    let clusters = spectral_clusters(&operator, tol.cluster);
    let mut v = CMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut cluster_index = Vec::with_capacity(n);
    let mut col = 0;
    for (k, cluster) in clusters.clusters.iter().enumerate() {
        for b in &cluster.basis {
            v.set_column(col, b);
            eigenvalues.push(cluster.eigenvalue);
            cluster_index.push(k);
            col += 1;
        }
    }
    EigenFrame {
        v,
        eigenvalues,
        cluster_index,
        cluster_sizes: clusters.multiplicities(),
        operator,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiUnitaryResiduals {
    /// max |U^dagger H1 U - H1|
    pub preserves_h1: f64,
    /// max |U^dagger H2 U - H2|
    pub preserves_h2: f64,
    /// max |G U - U G|
    pub commutes_with_g: f64,
}

impl BiUnitaryResiduals {
    fn compute(u: &CMatrix, g: &ConnectingOperator) -> Self {
        let h1 = g.h1().matrix();
        let h2 = g.h2().matrix();
        let u_adj = u.adjoint();
        Self {
            preserves_h1: max_norm(&(&u_adj * h1 * u - h1)),
            preserves_h2: max_norm(&(&u_adj * h2 * u - h2)),
            commutes_with_g: max_norm(&commutator(g.matrix(), u)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BiUnitary {
    pub matrix: CMatrix,
    pub residuals: BiUnitaryResiduals,
}

/// Block-diagonal frame matrix mapped back to the original coordinates.
fn assemble(frame: &EigenFrame, blocks: &[CMatrix]) -> BiUnitary {
    let n = frame.dim();
    let mut b = CMatrix::zeros(n, n);
    for (offset, block) in frame.cluster_offsets().into_iter().zip(blocks) {
        let size = block.nrows();
        b.view_mut((offset, offset), (size, size)).copy_from(block);
    }
    let matrix = frame.from_frame(&b);
    let residuals = BiUnitaryResiduals::compute(&matrix, frame.operator());
    BiUnitary { matrix, residuals }
}

/// `U = V blockdiag(U_1, ..., U_m) V^-1` with each block Haar-distributed on
/// the unitary group of its cluster size.
pub fn sample_biunitary(frame: &EigenFrame, seed: u64) -> BiUnitary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks: Vec<CMatrix> = frame
        .cluster_sizes
        .iter()
        .map(|&size| haar_unitary(size, &mut rng))
        .collect();
    assemble(frame, &blocks)
}

/// `U = exp(i theta(G))`: acts as `e^{i theta_k}` on cluster `k`.
pub fn biunitary_from_function(frame: &EigenFrame, theta: &[f64]) -> Result<BiUnitary> {
    let m = frame.cluster_count();
    if theta.len() < m {
        return Err(Error::MissingClusterValue {
            expected: m,
            found: theta.len(),
        });
    }
    if theta.len() > m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: theta.len(),
        });
    }
    let blocks: Vec<CMatrix> = frame
        .cluster_sizes
        .iter()
        .zip(theta)
        .map(|(&size, &t)| CMatrix::identity(size, size) * c(t.cos(), t.sin()))
        .collect();
    Ok(assemble(frame, &blocks))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verification {
    pub is_biunitary: bool,
    pub residuals: BiUnitaryResiduals,
    /// Whether `U` is unitary for `h1`.
    pub h1_unitary: bool,
    /// For `h1`-unitary `U`, preserving `h2` and commuting with `G` must
    /// coincide. Vacuously true otherwise.
    pub equivalence_holds: bool,
    pub threshold: f64,
}

/// Check both form-preservation identities and the commutation identity.
pub fn verify_biunitary(
    u: &CMatrix,
    h1: &HermitianForm,
    h2: &HermitianForm,
    tol: &Tolerances,
) -> Result<Verification> {
    let g = connecting_operator(h1, h2, tol)?;
    verify_against(u, &g, tol)
}

pub fn verify_against(
    u: &CMatrix,
    g: &ConnectingOperator,
    tol: &Tolerances,
) -> Result<Verification> {
    let n = g.dim();
    if u.nrows() != n || u.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if u.nrows() != n { u.nrows() } else { u.ncols() },
        });
    }
    let residuals = BiUnitaryResiduals::compute(u, g);
    Ok(classify(residuals, tol.herm_scaled(n)))
}

/// Verdicts from residuals at a given threshold.
pub fn classify(residuals: BiUnitaryResiduals, threshold: f64) -> Verification {
    let h1_unitary = residuals.preserves_h1 <= threshold;
    let preserves_h2 = residuals.preserves_h2 <= threshold;
    let commutes = residuals.commutes_with_g <= threshold;
    Verification {
        is_biunitary: h1_unitary && preserves_h2 && commutes,
        residuals,
        h1_unitary,
        equivalence_holds: !h1_unitary || preserves_h2 == commutes,
        threshold,
    }
}

/// Largest `|A B - B A|` over pairs of basis elements.
pub fn commutation_audit(commutant: &OperatorAlgebraBasis) -> f64 {
    let elements = &commutant.elements;
    let mut worst: f64 = 0.0;
    for (i, a) in elements.iter().enumerate() {
        for b in &elements[i + 1..] {
            worst = worst.max(max_norm(&commutator(a, b)));
        }
    }
    worst
}

/// A random `h1`-unitary: `L^-dagger W L^dagger` for Haar `W` and
/// `H1 = L L^dagger`. Generally not bi-unitary.
pub fn random_h1_unitary(h1: &HermitianForm, seed: u64) -> CMatrix {
    let n = h1.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = haar_unitary(n, &mut rng);
    let l = nalgebra::Cholesky::new(h1.matrix().clone())
        .expect("validated form is positive definite")
        .l();
    let l_adj = l.adjoint();
    let rhs = &w * &l_adj;
    l_adj
        .solve_upper_triangular(&rhs)
        .expect("Cholesky factor is nonsingular")
}

/// Frame-coordinate entries of `U` outside the cluster blocks.
pub fn off_block_norm(frame: &EigenFrame, u: &CMatrix) -> f64 {
    let b = frame.to_frame(u);
    let idx = &frame.cluster_index;
    let mut worst: f64 = 0.0;
    for i in 0..b.nrows() {
        for j in 0..b.ncols() {
            if idx[i] != idx[j] {
                worst = worst.max(b[(i, j)].norm());
            }
        }
    }
    worst
}

/// Vector with all coordinates equal to one in the eigenframe: `sum_k e_k`.
pub fn frame_unit_vector(frame: &EigenFrame) -> CVector {
    &frame.v * CVector::from_element(frame.dim(), c(1.0, 0.0))
}
