//! Generic relative position of two Hermitian forms.
//!
//! Three characterisations are computed independently of each other:
//!
//! * nondegeneracy: every eigenvalue of `G` is simple (clustering of the
//!   pencil spectrum),
//! * cyclicity: some `x0` has a Krylov space `span{x0, G x0, ...}` of full
//!   dimension (singular values of a Krylov matrix),
//! * commutativity of the commutant: `G'' = G'` (null spaces of vectorized
//!   commutator maps).
//!
//! They are equivalent, so [`genericity_report`] treats any disagreement as
//! an internal error.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{connecting_operator, ConnectingOperator, HermitianForm};
use crate::linalg::{
    bounded_random_complex, columns_to_matrix, commutator_operator, null_space, numerical_rank,
    orthonormalize, unvectorize, CMatrix, CVector,
};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone)]
pub struct SpectralCluster {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    /// `h1`-orthonormal eigenvectors spanning the eigenspace.
    pub basis: Vec<CVector>,
}

#[derive(Debug, Clone)]
pub struct SpectralClusters {
    pub clusters: Vec<SpectralCluster>,
    /// Absolute gap threshold actually applied.
    pub threshold: f64,
}

impl SpectralClusters {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.multiplicity).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.eigenvalue).collect()
    }

    pub fn is_simple(&self) -> bool {
        self.clusters.iter().all(|c| c.multiplicity == 1)
    }

    /// Sum of squared multiplicities: the dimension of the commutant.
    pub fn commutant_dimension(&self) -> usize {
        self.clusters
            .iter()
            .map(|c| c.multiplicity * c.multiplicity)
            .sum()
    }
}

/// Group the spectrum of `G` by greedy gap clustering on sorted eigenvalues.
///
/// Two consecutive eigenvalues land in the same cluster when their gap is at
/// most `rel_tol * lambda_max`. Eigenvectors of each cluster are
/// re-orthonormalized under `h1`.
pub fn spectral_clusters(g: &ConnectingOperator, rel_tol: f64) -> SpectralClusters {
    let values = g.eigenvalues();
    let vectors = g.eigenvectors();
    let scale = values.last().copied().unwrap_or(1.0).abs();
    let threshold = rel_tol * scale;

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, &lambda) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(group) if lambda - values[*group.last().unwrap()] <= threshold => group.push(k),
            _ => groups.push(vec![k]),
        }
    }

    let h1 = g.h1().matrix();
    let clusters = groups
        .into_iter()
        .map(|group| {
            let eigenvalue = group.iter().map(|&k| values[k]).sum::<f64>() / group.len() as f64;
            let raw: Vec<CVector> = group
                .iter()
                .map(|&k| vectors.column(k).into_owned())
                .collect();
            let basis = orthonormalize(&raw, h1, 1e-8);
            debug_assert_eq!(basis.len(), group.len());
            SpectralCluster {
                eigenvalue,
                multiplicity: group.len(),
                basis,
            }
        })
        .collect();
    SpectralClusters {
        clusters,
        threshold,
    }
}

#[derive(Debug, Clone)]
pub struct CyclicityResult {
    pub is_cyclic: bool,
    pub krylov_rank: usize,
    pub witness: CVector,
}

/// Numerical dimension of `span{x0, G x0, ..., G^{n-1} x0}`.
///
/// The span is generated with Chebyshev polynomials of `G` rescaled to
/// `[-1, 1]` instead of raw powers; both families span the same space, the
/// former with far better conditioned columns. Columns are normalized before
/// the singular values are taken.
pub fn krylov_rank(g: &CMatrix, x0: &CVector, rel_tol: f64) -> usize {
    let n = g.nrows();
    // induced 1-norm bounds the spectral radius
    let bound = (0..n)
        .map(|j| g.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    if bound == 0.0 {
        return usize::from(x0.norm() > 0.0);
    }
    let shifted = (g.scale(2.0) - CMatrix::identity(n, n).scale(bound)).unscale(bound);

    let mut columns: Vec<CVector> = Vec::with_capacity(n);
    let mut prev = x0.clone();
    let mut curr = &shifted * x0;
    columns.push(prev.clone());
    if n > 1 {
        columns.push(curr.clone());
    }
    for _ in 2..n {
        let next = (&shifted * &curr).scale(2.0) - &prev;
        prev = std::mem::replace(&mut curr, next);
        columns.push(curr.clone());
    }
    let normalized: Vec<CVector> = columns
        .into_iter()
        .map(|v| {
            let norm = v.norm();
            if norm > 0.0 {
                v.unscale(norm)
            } else {
                v
            }
        })
        .collect();
    numerical_rank(&columns_to_matrix(&normalized, n), rel_tol)
}

/// Draw `x0` with every component of modulus in `[0.5, 1.5]` and test whether
/// it is cyclic for `G`.
pub fn cyclicity_test(g: &ConnectingOperator, seed: u64, tol: &Tolerances) -> CyclicityResult {
    let n = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let witness = CVector::from_fn(n, |_, _| bounded_random_complex(&mut rng));
    let krylov_rank = krylov_rank(g.matrix(), &witness, tol.rank);
    CyclicityResult {
        is_cyclic: krylov_rank == n,
        krylov_rank,
        witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlgebraKind {
    Commutant,
    Bicommutant,
}

/// Basis of a matrix algebra, stored as `n x n` matrices whose vectorizations
/// are orthonormal.
#[derive(Debug, Clone)]
pub struct OperatorAlgebraBasis {
    pub elements: Vec<CMatrix>,
    pub kind: AlgebraKind,
}

impl OperatorAlgebraBasis {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }
}

/// Null space of `A -> G A - A G`.
pub fn commutant_basis(g: &ConnectingOperator, tol: &Tolerances) -> OperatorAlgebraBasis {
    let n = g.dim();
    let system = commutator_operator(g.matrix());
    // singular values of the commutator map scale with |G|, not with its own
    // largest singular value (which vanishes when G is scalar)
    let cutoff = tol.rank * g.matrix().norm();
    let elements = null_space(&system, cutoff)
        .iter()
        .map(|v| unvectorize(v, n))
        .collect();
    OperatorAlgebraBasis {
        elements,
        kind: AlgebraKind::Commutant,
    }
}

/// Matrices commuting with every element of `commutant`.
pub fn bicommutant_basis(
    g: &ConnectingOperator,
    commutant: &OperatorAlgebraBasis,
    tol: &Tolerances,
) -> OperatorAlgebraBasis {
    let n = g.dim();
    let n2 = n * n;
    let mut stacked = CMatrix::zeros(n2 * commutant.dimension().max(1), n2);
    for (k, element) in commutant.elements.iter().enumerate() {
        stacked
            .view_mut((k * n2, 0), (n2, n2))
            .copy_from(&commutator_operator(element));
    }
    if commutant.dimension() > 1 {
        // same null space, square system
        stacked = stacked.qr().r();
    }
    let scale = commutant
        .elements
        .iter()
        .map(|e| e.norm())
        .fold(0.0, f64::max);
    let elements = null_space(&stacked, tol.rank * scale)
        .iter()
        .map(|v| unvectorize(v, n))
        .collect();
    OperatorAlgebraBasis {
        elements,
        kind: AlgebraKind::Bicommutant,
    }
}

#[derive(Debug, Clone)]
pub struct GenericityReport {
    pub by_nondegeneracy: bool,
    pub by_cyclicity: bool,
    pub by_commutant: bool,
    pub clusters: SpectralClusters,
    pub krylov_rank: usize,
    pub commutant_dim: usize,
    pub bicommutant_dim: usize,
}

impl GenericityReport {
    pub fn is_generic(&self) -> bool {
        self.by_nondegeneracy
    }

    /// `dim G' = sum n_k^2` and `dim G'' = m`.
    pub fn dimension_law_holds(&self) -> bool {
        self.commutant_dim == self.clusters.commutant_dimension()
            && self.bicommutant_dim == self.clusters.len()
    }
}

/// Run the three genericity tests on an existing connecting operator.
pub fn genericity_of(
    g: &ConnectingOperator,
    seed: u64,
    tol: &Tolerances,
) -> Result<GenericityReport> {
    let n = g.dim();
    let clusters = spectral_clusters(g, tol.cluster);
    let cyclic = cyclicity_test(g, seed, tol);
    let commutant = commutant_basis(g, tol);
    let bicommutant = bicommutant_basis(g, &commutant, tol);

    let by_nondegeneracy = clusters.len() == n;
    let by_cyclicity = cyclic.is_cyclic;
    // G'' is always contained in G'; equality is a dimension count
    let by_commutant = bicommutant.dimension() == commutant.dimension();

    if !(by_nondegeneracy == by_cyclicity && by_cyclicity == by_commutant) {
        return Err(Error::EquivalenceViolation {
            by_nondegeneracy,
            by_cyclicity,
            by_commutant,
        });
    }
    Ok(GenericityReport {
        by_nondegeneracy,
        by_cyclicity,
        by_commutant,
        clusters,
        krylov_rank: cyclic.krylov_rank,
        commutant_dim: commutant.dimension(),
        bicommutant_dim: bicommutant.dimension(),
    })
}

pub fn genericity_report(
    h1: &HermitianForm,
    h2: &HermitianForm,
    seed: u64,
    tol: &Tolerances,
) -> Result<GenericityReport> {
    let g = connecting_operator(h1, h2, tol)?;
    genericity_of(&g, seed, tol)
}
