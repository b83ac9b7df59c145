//! Grid model of multiplication operators and the particle-in-a-box pair.
//!
//! A [`GridOperator`] is multiplication by `f(x)` on a midpoint grid with
//! cell-length weights, so `<u, v> = sum_i w_i conj(u_i) v_i` discretizes
//! `L2`. The box operators use `f(x) = 1 + x^2` on `[-alpha, alpha]`,
//! `[0, alpha]` or `[-alpha, beta]`. On the symmetric part of a box grid the
//! negative abscissae are exact negations of the positive ones, so values of
//! `f` tie in exact pairs and multiplicities are read off by equality.
//!
//! Spectral bins are half-open, `[lo, hi)`.

use std::collections::BTreeMap;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, haar_unitary, max_norm, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoxShape {
    /// `[-alpha, alpha]`
    Symmetric { alpha: f64 },
    /// `[0, alpha]`
    Half { alpha: f64 },
    /// `[-alpha, beta]` with `beta > alpha`
    Asymmetric { alpha: f64, beta: f64 },
}

impl BoxShape {
    pub fn alpha(&self) -> f64 {
        match *self {
            BoxShape::Symmetric { alpha }
            | BoxShape::Half { alpha }
            | BoxShape::Asymmetric { alpha, .. } => alpha,
        }
    }

    /// Largest `|x|` on the interval.
    pub fn reach(&self) -> f64 {
        match *self {
            BoxShape::Symmetric { alpha } | BoxShape::Half { alpha } => alpha,
            BoxShape::Asymmetric { beta, .. } => beta,
        }
    }

    /// The spectrum `[1, 1 + reach^2]` of `1 + x^2`.
    pub fn spectrum(&self) -> (f64, f64) {
        (1.0, 1.0 + self.reach() * self.reach())
    }

    /// Where the multiplicity profile jumps, if anywhere.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            BoxShape::Asymmetric { alpha, .. } => vec![1.0 + alpha * alpha],
            _ => Vec::new(),
        }
    }

    /// Lower end of the interval.
    pub fn left(&self) -> f64 {
        match *self {
            BoxShape::Half { .. } => 0.0,
            _ => -self.alpha(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GridOperator {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    /// Values of the multiplication symbol at the grid points.
    pub diag: Vec<f64>,
    /// Set for box operators built by [`build_box_operator`].
    pub shape: Option<BoxShape>,
    /// Index of the grid point at `-x`, when present.
    pub mirror: Vec<Option<usize>>,
}

impl GridOperator {
    /// Multiplication operator from explicit samples.
    pub fn from_samples(points: Vec<f64>, weights: Vec<f64>, diag: Vec<f64>) -> Result<Self> {
        let n = points.len();
        if n == 0 || weights.len() != n || diag.len() != n {
            return Err(Error::InvalidArgument(
                "grid arrays must be nonempty and of equal length".into(),
            ));
        }
        if points.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::BadInterval(
                "grid must be strictly increasing".into(),
            ));
        }
        if weights.iter().any(|&w| w.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        let mirror = (0..n)
            .map(|i| {
                points
                    .iter()
                    .position(|&y| y == -points[i])
                    .filter(|&j| j != i)
            })
            .collect();
        Ok(Self {
            points,
            weights,
            diag,
            shape: None,
            mirror,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(u.iter().zip(v))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    pub fn norm(&self, u: &[f64]) -> f64 {
        self.inner(u, u).sqrt()
    }

    /// Groups of indices with exactly equal symbol values, ordered by value.
    pub fn tie_groups(&self) -> Vec<(f64, Vec<usize>)> {
        let mut groups: BTreeMap<u64, (f64, Vec<usize>)> = BTreeMap::new();
        for (i, &v) in self.diag.iter().enumerate() {
            // all symbol values are finite; order positive floats via bits
            groups
                .entry(order_key(v))
                .or_insert((v, Vec::new()))
                .1
                .push(i);
        }
        groups.into_values().collect()
    }

    pub fn distinct_values(&self) -> usize {
        self.tie_groups().len()
    }
}

fn order_key(v: f64) -> u64 {
    let bits = v.to_bits();
    if v.is_sign_negative() {
        !bits
    } else {
        bits | (1 << 63)
    }
}

fn midpoints(start: f64, width: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| start + (k as f64 + 0.5) * width)
        .collect()
}

/// Midpoint grid for `1 + x^2` on a box with `n` cells in total (even).
///
/// For the asymmetric box the symmetric part `[-alpha, alpha]` receives an
/// even number of cells roughly proportional to its length; the tail
/// `[alpha, beta]` receives the rest.
pub fn build_box_operator(shape: BoxShape, n: usize) -> Result<GridOperator> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::BadInterval(format!(
            "grid size must be even and at least 2, got {n}"
        )));
    }
    let alpha = shape.alpha();
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::BadInterval(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let (points, weights) = match shape {
        BoxShape::Symmetric { alpha } => symmetric_half_grid(alpha, n),
        BoxShape::Half { alpha } => {
            let h = alpha / n as f64;
            (midpoints(0.0, h, n), vec![h; n])
        }
        BoxShape::Asymmetric { alpha, beta } => {
            if !(beta > alpha && beta.is_finite()) {
                return Err(Error::BadInterval(format!(
                    "asymmetric box needs beta > alpha, got alpha={alpha} beta={beta}"
                )));
            }
            if n < 4 {
                return Err(Error::BadInterval(format!(
                    "grid size {n} too small for an asymmetric box"
                )));
            }
            let share = n as f64 * 2.0 * alpha / (alpha + beta);
            let paired = (2 * ((share / 2.0).round() as usize)).clamp(2, n - 2);
            let tail = n - paired;
            let (mut points, mut weights) = symmetric_half_grid(alpha, paired);
            let h = (beta - alpha) / tail as f64;
            points.extend(midpoints(alpha, h, tail));
            weights.extend(std::iter::repeat_n(h, tail));
            (points, weights)
        }
    };
    let diag = points.iter().map(|&x| 1.0 + x * x).collect();
    let mut op = GridOperator::from_samples(points, weights, diag)?;
    op.shape = Some(shape);
    Ok(op)
}

/// Points `-p_{k}, ..., -p_0, p_0, ..., p_k` with the negatives computed by
/// negation, never by separate arithmetic.
fn symmetric_half_grid(alpha: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 * alpha / n as f64;
    let positive = midpoints(0.0, h, n / 2);
    let mut points: Vec<f64> = positive.iter().rev().map(|&p| -p).collect();
    points.extend(&positive);
    (points, vec![h; n])
}

fn require_box(op: &GridOperator) -> Result<BoxShape> {
    op.shape.ok_or(Error::NotBoxOperator)
}

/// Diagonal of `P_G(lambda)`: indicator of `f(x_i) <= lambda`.
pub fn spectral_projection(op: &GridOperator, lambda: f64) -> Vec<f64> {
    op.diag
        .iter()
        .map(|&v| f64::from(u8::from(v <= lambda)))
        .collect()
}

/// Diagonal of the position projection `P(mu)`: indicator of
/// `left <= x_i <= mu`.
pub fn position_projection(op: &GridOperator, mu: f64) -> Vec<f64> {
    op.points
        .iter()
        .map(|&x| f64::from(u8::from(x <= mu)))
        .collect()
}

/// Largest entry of `P_G(lambda) - (P(sqrt(lambda - 1)) - P(-sqrt(lambda - 1)))`
/// over the sampled `lambda`.
pub fn spectral_family_check(op: &GridOperator, lambdas: &[f64]) -> Result<f64> {
    require_box(op)?;
    let mut worst: f64 = 0.0;
    for &lambda in lambdas {
        let s = (lambda - 1.0).max(0.0).sqrt();
        let lhs = spectral_projection(op, lambda);
        let upper = position_projection(op, s);
        let lower = position_projection(op, -s);
        for i in 0..op.len() {
            worst = worst.max((lhs[i] - (upper[i] - lower[i])).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaValue {
    pub lambda: f64,
    pub numeric: f64,
    pub analytic: f64,
    /// `lambda` fell outside `[1, 1 + alpha^2]` and was clamped.
    pub clamped: bool,
}

/// `sigma(lambda) = (P_G(lambda) chi, chi)` with `chi` the indicator of
/// `[0, alpha]`, by the rectangle rule. The exact value is `sqrt(lambda - 1)`.
pub fn sigma_measure(op: &GridOperator, lambda: f64) -> Result<SigmaValue> {
    let shape = require_box(op)?;
    let alpha = shape.alpha();
    let top = 1.0 + alpha * alpha;
    let clamped = !(1.0..=top).contains(&lambda);
    let lam = lambda.clamp(1.0, top);
    let numeric = op
        .points
        .iter()
        .zip(&op.weights)
        .zip(&op.diag)
        .filter(|((&x, _), &v)| (0.0..=alpha).contains(&x) && v <= lam)
        .map(|((_, &w), _)| w)
        .sum();
    Ok(SigmaValue {
        lambda,
        numeric,
        analytic: (lam - 1.0).sqrt(),
        clamped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralBin {
    pub lo: f64,
    pub hi: f64,
    pub multiplicity: usize,
    /// Grid points whose value falls in the bin.
    pub points: usize,
    /// Distinct values in the bin.
    pub distinct: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicityProfile {
    pub bins: Vec<SpectralBin>,
    pub bin_width: f64,
}

impl MultiplicityProfile {
    /// `sum_bins distinct * multiplicity`, which equals the grid size.
    /// Empty bins carry an inherited multiplicity but no values.
    pub fn total_points(&self) -> usize {
        self.bins.iter().map(|b| b.distinct * b.multiplicity).sum()
    }

    /// Nonempty bins with their multiplicity.
    pub fn occupied(&self) -> impl Iterator<Item = &SpectralBin> {
        self.bins.iter().filter(|b| b.points > 0)
    }

    /// Write `lambda_lo,lambda_hi,multiplicity` rows.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["lambda_lo", "lambda_hi", "multiplicity"])?;
        for b in &self.bins {
            w.write_record([
                b.lo.to_string(),
                b.hi.to_string(),
                b.multiplicity.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Multiplicity profile over bins of width `bin_width` covering the spectrum.
pub fn multiplicity_profile(op: &GridOperator, bin_width: f64) -> Result<MultiplicityProfile> {
    multiplicity_profile_with_breaks(op, bin_width, &[])
}

/// Like [`multiplicity_profile`], but the bin grid restarts at every
/// breakpoint so no bin straddles one.
pub fn multiplicity_profile_with_breaks(
    op: &GridOperator,
    bin_width: f64,
    breakpoints: &[f64],
) -> Result<MultiplicityProfile> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    let groups = op.tie_groups();
    let (min_value, max_value) = (groups[0].0, groups[groups.len() - 1].0);
    let (start, end) = match op.shape {
        Some(shape) => shape.spectrum(),
        None => (min_value, max_value),
    };
    let mut edges = vec![start];
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&b| b > start && b < end)
        .collect();
    cuts.sort_by(f64::total_cmp);
    edges.extend(cuts);
    edges.push(end);

    let mut bins = Vec::new();
    for (s, (&seg_lo, &seg_hi)) in edges.iter().zip(edges.iter().skip(1)).enumerate() {
        let last_segment = s + 2 == edges.len();
        let count = (((seg_hi - seg_lo) / bin_width) - 1e-9).ceil().max(1.0) as usize;
        for k in 0..count {
            let lo = seg_lo + k as f64 * bin_width;
            let mut hi = if k + 1 == count {
                seg_hi
            } else {
                seg_lo + (k + 1) as f64 * bin_width
            };
            if last_segment && k + 1 == count && hi <= max_value {
                // the top value must land somewhere despite half-open bins
                hi = f64::max(hi, max_value) + bin_width * 1e-9;
            }
            bins.push((s, lo, hi));
        }
    }

    let mut out: Vec<SpectralBin> = Vec::with_capacity(bins.len());
    let mut segment_of = Vec::with_capacity(bins.len());
    for (segment, lo, hi) in bins {
        segment_of.push(segment);
        let inside: Vec<usize> = groups
            .iter()
            .filter(|(v, _)| *v >= lo && *v < hi)
            .map(|(_, idx)| idx.len())
            .collect();
        let mut kinds = inside.clone();
        kinds.sort_unstable();
        kinds.dedup();
        if kinds.len() > 1 {
            return Err(Error::MixedBin {
                lo,
                hi,
                found: kinds,
            });
        }
        out.push(SpectralBin {
            lo,
            hi,
            multiplicity: kinds.first().copied().unwrap_or(0),
            points: inside.iter().sum(),
            distinct: inside.len(),
        });
    }
    fill_empty_bins(&mut out, &segment_of);
    Ok(MultiplicityProfile {
        bins: out,
        bin_width,
    })
}

/// A bin inside the spectrum can hold no grid value when the grid is coarse
/// there; it inherits the multiplicity of the nearest occupied bin of the
/// same segment, preferring the one below.
fn fill_empty_bins(bins: &mut [SpectralBin], segment_of: &[usize]) {
    let n = bins.len();
    for k in 0..n {
        if bins[k].points > 0 {
            continue;
        }
        let same = |j: usize| segment_of[j] == segment_of[k] && bins[j].points > 0;
        let below = (0..k).rev().find(|&j| same(j));
        let above = (k + 1..n).find(|&j| same(j));
        if let Some(j) = below.or(above) {
            bins[k].multiplicity = bins[j].multiplicity;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CyclicityAudit {
    pub krylov_rank: usize,
    pub distinct_values: usize,
    /// max over `m <= N` of `|<u, G^m f>| / (|u| |G^m f|)` with
    /// `u(x) = x f(-x)`. Absent when the grid has no mirrored points.
    pub parity_witness_residual: Option<f64>,
    /// `|u|`, nonzero whenever present.
    pub parity_witness_norm: Option<f64>,
}

/// Dimension of `span{f, G f, G^2 f, ...}` for the diagonal `G = diag(values)`.
///
/// Floating-point Krylov iteration cannot resolve this rank on fine grids:
/// directions absent from `f` are seeded by rounding and amplified at every
/// normalization. Every finite double is a rational with a power-of-two
/// denominator, so the rank is instead computed exactly over the prime field
/// `Z / (2^61 - 1)` by incremental elimination. The Krylov space does not
/// depend on the inner product, so the weights play no role.
pub fn krylov_rank_exact(values: &[f64], f: &[f64]) -> usize {
    let n = values.len();
    let d: Vec<u64> = values.iter().map(|&v| modp::from_f64(v)).collect();
    let mut current: Vec<u64> = f.iter().map(|&v| modp::from_f64(v)).collect();
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    while basis.len() < n {
        for (pivot, b) in &basis {
            let factor = current[*pivot];
            if factor != 0 {
                for (x, &y) in current.iter_mut().zip(b) {
                    *x = modp::sub(*x, modp::mul(factor, y));
                }
            }
        }
        let Some(pivot) = current.iter().position(|&x| x != 0) else {
            break;
        };
        let inv = modp::inv(current[pivot]);
        for x in current.iter_mut() {
            *x = modp::mul(*x, inv);
        }
        let next: Vec<u64> = current
            .iter()
            .zip(&d)
            .map(|(&x, &g)| modp::mul(x, g))
            .collect();
        basis.push((pivot, std::mem::replace(&mut current, next)));
    }
    basis.len()
}

/// Arithmetic modulo the Mersenne prime `2^61 - 1`.
mod modp {
    pub const P: u64 = (1 << 61) - 1;

    pub fn reduce(x: u128) -> u64 {
        let lo = (x as u64) & P;
        let hi = (x >> 61) as u64;
        let s = lo + (hi & P) + (hi >> 61);
        let s = (s & P) + (s >> 61);
        if s >= P {
            s - P
        } else {
            s
        }
    }

    pub fn mul(a: u64, b: u64) -> u64 {
        reduce(a as u128 * b as u128)
    }

    pub fn sub(a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + P - b
        }
    }

    pub fn pow(mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(a: u64) -> u64 {
        pow(a, P - 2)
    }

    /// Exact image of a finite double: `mantissa * 2^exponent`. Since
    /// `2^61 = 1`, powers of two reduce by their exponent mod 61.
    pub fn from_f64(v: f64) -> u64 {
        assert!(v.is_finite(), "grid values must be finite");
        if v == 0.0 {
            return 0;
        }
        let bits = v.to_bits();
        let negative = bits >> 63 == 1;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1 << 52) - 1);
        let (mantissa, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), raw_exp - 1075)
        };
        let shift = exp.rem_euclid(61) as u32;
        let x = reduce((mantissa as u128) << shift);
        if negative {
            sub(0, x)
        } else {
            x
        }
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn doubles_map_to_their_rationals() {
            assert_eq!(from_f64(1.0), 1);
            assert_eq!(from_f64(3.0), 3);
            assert_eq!(mul(from_f64(0.5), 2), 1);
            assert_eq!(mul(from_f64(0.75), 4), 3);
            assert_eq!(from_f64(-2.0), P - 2);
            assert_eq!(mul(from_f64(1.0625), 16), 17);
            let x = from_f64(1e-300);
            assert_eq!(mul(x, inv(x)), 1);
        }
    }
}

/// Krylov rank for a random `f` (components of modulus in `[0.5, 1.5]` with
/// random sign), the distinct-value count, and the parity witness.
pub fn cyclicity_audit(op: &GridOperator, seed: u64) -> CyclicityAudit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f: Vec<f64> = (0..op.len())
        .map(|_| {
            let m: f64 = rng.random_range(0.5..=1.5);
            if rng.random::<bool>() {
                m
            } else {
                -m
            }
        })
        .collect();
    let krylov_rank = krylov_rank_exact(&op.diag, &f);

    let has_mirror = op.mirror.iter().any(Option::is_some);
    let (parity_witness_residual, parity_witness_norm) = if has_mirror {
        let u: Vec<f64> = (0..op.len())
            .map(|i| op.mirror[i].map_or(0.0, |j| op.points[i] * f[j]))
            .collect();
        let u_norm = op.norm(&u);
        let mut v = f.clone();
        let mut worst: f64 = 0.0;
        for _ in 0..=op.len() {
            let v_norm = op.norm(&v);
            worst = worst.max(op.inner(&u, &v).abs() / (u_norm * v_norm));
            for (vi, g) in v.iter_mut().zip(&op.diag) {
                *vi *= g / v_norm;
            }
        }
        (Some(worst), Some(u_norm))
    } else {
        (None, None)
    };
    CyclicityAudit {
        krylov_rank,
        distinct_values: op.distinct_values(),
        parity_witness_residual,
        parity_witness_norm,
    }
}

/// A unitary block acting on a group of grid indices with equal symbol value.
#[derive(Debug, Clone)]
pub struct GridBlock {
    pub indices: Vec<usize>,
    pub unitary: CMatrix,
}

#[derive(Debug, Clone)]
pub struct BoxBiUnitary {
    pub blocks: Vec<GridBlock>,
    /// max |U^dagger W U - W|, W = diag(w)
    pub inner_product_residual: f64,
    /// max |U^dagger W G U - W G|
    pub g_form_residual: f64,
    /// max |G U - U G|
    pub commutator_residual: f64,
}

impl BoxBiUnitary {
    /// Assemble from explicit blocks and compute residuals blockwise.
    pub fn from_blocks(op: &GridOperator, blocks: Vec<GridBlock>) -> Result<Self> {
        let mut covered = vec![false; op.len()];
        for b in &blocks {
            if b.unitary.nrows() != b.indices.len() || b.unitary.ncols() != b.indices.len() {
                return Err(Error::DimensionMismatch {
                    expected: b.indices.len(),
                    found: b.unitary.nrows(),
                });
            }
            for &i in &b.indices {
                if i >= op.len() || covered[i] {
                    return Err(Error::InvalidArgument(format!(
                        "grid index {i} repeated or out of range"
                    )));
                }
                covered[i] = true;
            }
        }
        if covered.iter().any(|&c| !c) {
            return Err(Error::InvalidArgument(
                "blocks must cover every grid point".into(),
            ));
        }
        let mut inner_product_residual: f64 = 0.0;
        let mut g_form_residual: f64 = 0.0;
        let mut commutator_residual: f64 = 0.0;
        for b in &blocks {
            let w =
                crate::linalg::diag(&b.indices.iter().map(|&i| op.weights[i]).collect::<Vec<_>>());
            let g = crate::linalg::diag(&b.indices.iter().map(|&i| op.diag[i]).collect::<Vec<_>>());
            let u = &b.unitary;
            let u_adj = u.adjoint();
            let wg = &w * &g;
            inner_product_residual = inner_product_residual.max(max_norm(&(&u_adj * &w * u - &w)));
            g_form_residual = g_form_residual.max(max_norm(&(&u_adj * &wg * u - &wg)));
            commutator_residual = commutator_residual.max(max_norm(&(&g * u - u * &g)));
        }
        Ok(Self {
            blocks,
            inner_product_residual,
            g_form_residual,
            commutator_residual,
        })
    }

    pub fn identity(op: &GridOperator) -> Self {
        let blocks = op
            .tie_groups()
            .into_iter()
            .map(|(_, idx)| GridBlock {
                unitary: CMatrix::identity(idx.len(), idx.len()),
                indices: idx,
            })
            .collect();
        Self::from_blocks(op, blocks).expect("tie groups partition the grid")
    }

    pub fn to_dense(&self, n: usize) -> CMatrix {
        let mut u = CMatrix::zeros(n, n);
        for b in &self.blocks {
            for (a, &i) in b.indices.iter().enumerate() {
                for (bb, &j) in b.indices.iter().enumerate() {
                    u[(i, j)] = b.unitary[(a, bb)];
                }
            }
        }
        u
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| b.indices.len())
            .max()
            .unwrap_or(0)
    }
}

/// Haar unitary on each group of tied grid points (a pair `{x, -x}` on the
/// symmetric part) and a random phase on each single point. Blocks are
/// conjugated by `diag(w)^{1/2}` so they preserve the weighted inner product
/// even if tied points carried different weights.
pub fn sample_box_biunitary(op: &GridOperator, seed: u64) -> BoxBiUnitary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = op
        .tie_groups()
        .into_iter()
        .map(|(_, indices)| {
            let k = indices.len();
            let q = if k == 1 {
                let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                CMatrix::from_element(1, 1, c(phase.cos(), phase.sin()))
            } else {
                haar_unitary(k, &mut rng)
            };
            let sqrt_w: Vec<f64> = indices.iter().map(|&i| op.weights[i].sqrt()).collect();
            let d = DVector::from_vec(sqrt_w.clone());
            let unitary = CMatrix::from_fn(k, k, |a, b| q[(a, b)] * (d[b] / d[a]));
            GridBlock { indices, unitary }
        })
        .collect();
    BoxBiUnitary::from_blocks(op, blocks).expect("tie groups partition the grid")
}
