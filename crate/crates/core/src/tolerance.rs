use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every routine in the crate.
///
/// `herm` is an absolute max-norm threshold. `psd`, `cluster` and `rank` are
/// relative to the largest eigenvalue or singular value of the object they
/// gate. `cond_cap` bounds the condition number of any form that has to be
/// inverted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub psd: f64,
    pub cluster: f64,
    pub rank: f64,
    pub cond_cap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            psd: 1e-10,
            cluster: 1e-8,
            rank: 1e-10,
            cond_cap: 1e12,
        }
    }
}

impl Tolerances {
    /// Hermiticity threshold scaled by the dimension, used for accumulated
    /// residuals such as `U^dagger H U - H`.
    pub fn herm_scaled(&self, n: usize) -> f64 {
        self.herm * n.max(1) as f64
    }
}
