//! Built-in acceptance checks, shared by the `selftest` subcommand and the
//! acceptance test target.
//!
//! Each check returns a [`CriterionResult`] carrying a verdict and a one-line
//! summary of the measured quantities. The random instances come from
//! [`instance_set`]: half of them have engineered repeated eigenvalues, the
//! other half are pairs of independent random forms.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::biunitary::{
    commutation_audit, eigenframe_of, off_block_norm, random_h1_unitary, sample_biunitary,
    verify_against,
};
use crate::direct_integral::{
    build_box_operator, cyclicity_audit, multiplicity_profile_with_breaks, sigma_measure,
    spectral_family_check, BoxShape,
};
use crate::error::Result;
use crate::forms::{connecting_operator, validate_form, ConnectingOperator, HermitianForm};
use crate::genericity::{bicommutant_basis, commutant_basis, genericity_of};
use crate::linalg::{
    c, commutator_operator, diag, haar_unitary, max_norm, unvectorize, CMatrix, CVector,
};
use crate::real_structures::{
    compatibility_operators, hermitian_comparison, plus_minus_split, realify, realify_operator,
    AdmissibleTriple,
};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    /// `criterion 3 [PASS] title: detail (0.12 s)`
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} ({:.2} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.seconds
        )
    }
}

fn timed(id: u32, title: &'static str, f: impl FnOnce() -> (bool, String)) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = f();
    CriterionResult {
        id,
        title,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

// ------------------------------------------------------------ instances

/// A pair of forms. `cluster_sizes` is set when the spectrum of `G` was
/// prescribed.
#[derive(Debug, Clone)]
pub struct Instance {
    pub h1: HermitianForm,
    pub h2: HermitianForm,
    pub cluster_sizes: Option<Vec<usize>>,
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).unscale(2.0)
}

/// `A^dagger A / n + I / 2` for complex Gaussian `A`.
pub fn random_form_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| crate::linalg::standard_complex_gaussian(rng));
    hermitian_part(&(a.adjoint() * &a).unscale(n as f64)) + CMatrix::identity(n, n).scale(0.5)
}

/// Invertible matrix with singular values in `[1, 2]`.
pub fn well_conditioned<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let s: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..=2.0)).collect();
    haar_unitary(n, rng) * diag(&s) * haar_unitary(n, rng)
}

/// Random composition of `n` into `m` positive parts.
fn composition<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Vec<usize> {
    let mut sizes = vec![1; m];
    for _ in m..n {
        let k = rng.random_range(0..m);
        sizes[k] += 1;
    }
    sizes
}

/// `H1 = V^-dagger V^-1`, `H2 = V^-dagger diag(lambda) V^-1`, so that
/// `G = V diag(lambda) V^-1` with the prescribed multiplicities. At least one
/// eigenvalue is repeated when `n >= 2`.
pub fn engineered_instance<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<Instance> {
    let m = if n == 1 { 1 } else { rng.random_range(1..n) };
    let sizes = composition(n, m, rng);
    let mut lambda = Vec::with_capacity(n);
    let mut value = rng.random_range(0.5..1.0);
    for &size in &sizes {
        lambda.extend(std::iter::repeat_n(value, size));
        value += rng.random_range(0.3..1.0);
    }
    let v = well_conditioned(n, rng);
    let v_inv = v.try_inverse().expect("singular values are at least 1");
    let h1 = hermitian_part(&(v_inv.adjoint() * &v_inv));
    let h2 = hermitian_part(&(v_inv.adjoint() * diag(&lambda) * &v_inv));
    Ok(Instance {
        h1: validate_form(h1, tol)?,
        h2: validate_form(h2, tol)?,
        cluster_sizes: Some(sizes),
    })
}

pub fn random_instance<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<Instance> {
    Ok(Instance {
        h1: validate_form(random_form_matrix(n, rng), tol)?,
        h2: validate_form(random_form_matrix(n, rng), tol)?,
        cluster_sizes: None,
    })
}

/// `count` instances with `n` cycling through `1..=max_n`; even positions are
/// engineered, odd ones random.
pub fn instance_set(count: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = 1 + (i / 2) % max_n;
            if i % 2 == 0 {
                engineered_instance(n, &mut rng, &tol)
            } else {
                random_instance(n, &mut rng, &tol)
            }
            .expect("generated forms are valid")
        })
        .collect()
}

/// Two triples on `R^{2n}` whose complex structures agree on a `J1`-invariant
/// subspace of real dimension `2p` and are opposite on a complement of
/// dimension `2(n - p)`. Both are transported by a random complex-linear map.
pub fn mixed_triples<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> (AdmissibleTriple, AdmissibleTriple) {
    assert!(p <= n);
    let h1 = validate_form(random_form_matrix(n, rng), tol).expect("random form is valid");
    let t1 = realify(&h1);
    let signs: Vec<num_complex::Complex64> = (0..n)
        .map(|k| c(0.0, if k < p { 1.0 } else { -1.0 }))
        .collect();
    let j2 = realify_operator(&CMatrix::from_diagonal(&CVector::from_vec(signs)));
    let metric: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..3.0)).collect();
    let g2 = realify_operator(&diag(&metric));
    let t2 = AdmissibleTriple::from_metric(g2, j2).expect("dimensions agree");
    let r = realify_operator(&well_conditioned(n, rng));
    let t1 = t1.transported(&r).expect("map is invertible");
    let t2 = t2.transported(&r).expect("map is invertible");
    (t1, t2)
}

// ------------------------------------------------------- brute force

/// Null space of `m` by Gauss-Jordan elimination with partial pivoting. A
/// column is free when its best pivot is at most `cutoff`.
pub fn rref_null_space(m: &CMatrix, cutoff: f64) -> Vec<CVector> {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut free = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let best = (r..rows).max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()));
        match best {
            Some(p) if a[(p, col)].norm() > cutoff => {
                a.swap_rows(r, p);
                let pivot = a[(r, col)];
                for j in 0..cols {
                    a[(r, j)] /= pivot;
                }
                for i in 0..rows {
                    if i != r {
                        let factor = a[(i, col)];
                        if factor.norm() > 0.0 {
                            for j in 0..cols {
                                let sub = factor * a[(r, j)];
                                a[(i, j)] -= sub;
                            }
                        }
                    }
                }
                pivots.push((r, col));
                r += 1;
            }
            _ => free.push(col),
        }
    }
    free.iter()
        .map(|&f| {
            let mut v = CVector::zeros(cols);
            v[f] = c(1.0, 0.0);
            for &(row, col) in &pivots {
                v[col] = -a[(row, f)];
            }
            v
        })
        .collect()
}

/// Dimensions of the commutant and bicommutant by Gauss-Jordan elimination.
pub fn brute_force_dimensions(g: &CMatrix) -> (usize, usize) {
    let n = g.nrows();
    let commutant: Vec<CMatrix> = rref_null_space(&commutator_operator(g), 1e-9 * max_norm(g))
        .iter()
        .map(|v| {
            let m = unvectorize(v, n);
            let norm = m.norm();
            m.unscale(norm)
        })
        .collect();
    let n2 = n * n;
    let mut stacked = CMatrix::zeros(n2 * commutant.len().max(1), n2);
    for (k, e) in commutant.iter().enumerate() {
        stacked
            .view_mut((k * n2, 0), (n2, n2))
            .copy_from(&commutator_operator(e));
    }
    // elements have unit Frobenius norm
    let bicommutant = rref_null_space(&stacked, 1e-9).len();
    (commutant.len(), bicommutant)
}

// ---------------------------------------------------------- criteria

pub const INSTANCES: usize = 1000;
pub const MAX_N: usize = 8;

fn operators(instances: &[Instance], tol: &Tolerances) -> Vec<ConnectingOperator> {
    instances
        .iter()
        .map(|i| connecting_operator(&i.h1, &i.h2, tol).expect("instances are well conditioned"))
        .collect()
}

/// The three genericity verdicts agree on every instance, and engineered
/// instances report their prescribed cluster sizes.
pub fn criterion_1(seed: u64) -> CriterionResult {
    timed(1, "three-way genericity equivalence", || {
        let tol = Tolerances::default();
        let instances = instance_set(INSTANCES, MAX_N, seed);
        let mut violations = 0;
        let mut wrong_clusters = 0;
        let mut generic = 0;
        for (inst, g) in instances.iter().zip(operators(&instances, &tol)) {
            match genericity_of(&g, seed, &tol) {
                Ok(r) => {
                    generic += usize::from(r.is_generic());
                    if let Some(sizes) = &inst.cluster_sizes {
                        wrong_clusters += usize::from(&r.clusters.multiplicities() != sizes);
                    }
                }
                Err(_) => violations += 1,
            }
        }
        (
            violations == 0 && wrong_clusters == 0,
            format!(
                "{} instances, {generic} generic, {violations} disagreements, {wrong_clusters} wrong cluster structures",
                instances.len()
            ),
        )
    })
}

/// `dim G' = sum n_k^2`, `dim G'' = m`, and a Gauss-Jordan cross-check for
/// `n <= 5`.
pub fn criterion_2(seed: u64) -> CriterionResult {
    timed(2, "commutant and bicommutant dimension laws", || {
        let tol = Tolerances::default();
        let instances = instance_set(INSTANCES, MAX_N, seed);
        let mut law_failures = 0;
        let mut oracle_failures = 0;
        let mut oracle_checked = 0;
        for g in operators(&instances, &tol) {
            let Ok(r) = genericity_of(&g, seed, &tol) else {
                law_failures += 1;
                continue;
            };
            law_failures += usize::from(!r.dimension_law_holds());
            if g.dim() <= 5 {
                oracle_checked += 1;
                let (dc, db) = brute_force_dimensions(g.matrix());
                oracle_failures += usize::from(dc != r.commutant_dim || db != r.bicommutant_dim);
            }
        }
        (
            law_failures == 0 && oracle_failures == 0,
            format!(
                "{law_failures} law failures; {oracle_failures}/{oracle_checked} disagreements with elimination"
            ),
        )
    })
}

/// For `h1`-unitary `U`, preserving `h2` and commuting with `G` coincide.
pub fn criterion_3(seed: u64) -> CriterionResult {
    timed(3, "form preservation iff commutation", || {
        let tol = Tolerances::default();
        let instances = instance_set(20, MAX_N, seed ^ 0x3);
        let mut counterexamples = 0;
        let mut not_h1_unitary = 0;
        let (mut both, mut neither) = (0, 0);
        for (k, g) in operators(&instances, &tol).into_iter().enumerate() {
            let n = g.dim();
            let threshold = 1e-8 * n as f64;
            let frame = eigenframe_of(g.clone(), &tol);
            for s in 0..100u64 {
                let sample_seed = seed.wrapping_add(1000 * k as u64 + s);
                let u = if s % 2 == 0 {
                    random_h1_unitary(g.h1(), sample_seed)
                } else {
                    sample_biunitary(&frame, sample_seed).matrix
                };
                let v = verify_against(&u, &g, &tol).expect("dimensions agree");
                let r = v.residuals;
                if r.preserves_h1 > threshold {
                    not_h1_unitary += 1;
                    continue;
                }
                let preserves = r.preserves_h2 <= threshold;
                let commutes = r.commutes_with_g <= threshold;
                if preserves != commutes {
                    counterexamples += 1;
                } else if preserves {
                    both += 1;
                } else {
                    neither += 1;
                }
            }
        }
        (
            counterexamples == 0 && not_h1_unitary == 0,
            format!("{counterexamples} counterexamples; {both} preserve and commute, {neither} do neither"),
        )
    })
}

/// Sampled bi-unitaries verify and are block diagonal in the eigenframe.
pub fn criterion_4(seed: u64) -> CriterionResult {
    timed(4, "bi-unitary sampling", || {
        let tol = Tolerances::default();
        let instances = instance_set(20, MAX_N, seed ^ 0x4);
        let mut worst_residual: f64 = 0.0;
        let mut worst_off_block: f64 = 0.0;
        let mut failures = 0;
        for (k, g) in operators(&instances, &tol).into_iter().enumerate() {
            let n = g.dim();
            let frame = eigenframe_of(g.clone(), &tol);
            for s in 0..100u64 {
                let u = sample_biunitary(&frame, seed.wrapping_add(1000 * k as u64 + s));
                let r = verify_against(&u.matrix, &g, &tol)
                    .expect("dimensions agree")
                    .residuals;
                let residual = r.preserves_h1.max(r.preserves_h2).max(r.commutes_with_g);
                let off = off_block_norm(&frame, &u.matrix);
                worst_residual = worst_residual.max(residual / n as f64);
                worst_off_block = worst_off_block.max(off);
                failures += usize::from(residual >= 1e-8 * n as f64 || off >= 1e-10);
            }
        }
        (
            failures == 0,
            format!(
                "2000 samples, {failures} failures; max residual/n {worst_residual:.1e}, max off-block {worst_off_block:.1e}"
            ),
        )
    })
}

/// The commutant is commutative exactly for generic pairs.
pub fn criterion_5(seed: u64) -> CriterionResult {
    timed(5, "commutant commutativity", || {
        let tol = Tolerances::default();
        let instances = instance_set(INSTANCES, MAX_N, seed);
        let mut worst_generic: f64 = 0.0;
        let mut weakest_witness = f64::INFINITY;
        let mut failures = 0;
        for g in operators(&instances, &tol) {
            let n = g.dim() as f64;
            let commutant = commutant_basis(&g, &tol);
            let bicommutant = bicommutant_basis(&g, &commutant, &tol);
            let audit = commutation_audit(&commutant);
            if bicommutant.dimension() == commutant.dimension() {
                worst_generic = worst_generic.max(audit / n);
                failures += usize::from(audit >= 1e-8 * n);
            } else {
                weakest_witness = weakest_witness.min(audit);
                failures += usize::from(audit <= 0.1);
            }
        }
        (
            failures == 0,
            format!(
                "{failures} failures; generic max audit/n {worst_generic:.1e}, weakest non-generic witness {weakest_witness:.3}"
            ),
        )
    })
}

/// Recursion identity, involution, splitting and sesquilinearity pattern.
pub fn criterion_6(seed: u64) -> CriterionResult {
    timed(6, "compatible triples", || {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6);
        let mut worst_recursion: f64 = 0.0;
        for inst in instance_set(20, 4, seed ^ 0x6) {
            let pair = compatibility_operators(&realify(&inst.h1), &realify(&inst.h2), &tol)
                .expect("well conditioned");
            worst_recursion = worst_recursion.max(pair.recursion_identity.unwrap_or(f64::INFINITY));
        }
        let mut worst = [0.0f64; 4];
        let mut weakest_witness = f64::INFINITY;
        let mut dimension_failures = 0;
        let mut cases = 0;
        for n in 1..=4 {
            for p in 0..=n {
                cases += 1;
                let (t1, t2) = mixed_triples(n, p, &mut rng, &tol);
                let pair = compatibility_operators(&t1, &t2, &tol).expect("well conditioned");
                let split = plus_minus_split(&pair).expect("structures commute");
                let (dp, dm) = split.dims();
                dimension_failures +=
                    usize::from(dp + dm != 2 * n || dp % 2 != 0 || dm % 2 != 0 || dp != 2 * p);
                let report = hermitian_comparison(&pair, &split);
                worst[0] = worst[0].max(split.involution_residual);
                worst[1] = worst[1].max(split.plus_residual).max(split.minus_residual);
                worst[2] = worst[2]
                    .max(report.plus_residual.unwrap_or(0.0))
                    .max(report.minus_residual.unwrap_or(0.0));
                worst[3] = worst[3].max(pair.commutation.max());
                if let Some(w) = report.mixed_failure_witness {
                    weakest_witness = weakest_witness.min(w);
                }
            }
        }
        let passed = worst_recursion < 1e-10
            && worst[0] < 1e-10
            && worst[1] < 1e-10
            && worst[2] < 1e-10
            && dimension_failures == 0
            && weakest_witness > 0.1;
        (
            passed,
            format!(
                "T+JGJ {worst_recursion:.1e}; C^2-1 {:.1e}; J2=+-J1 {:.1e}; sesquilinear {:.1e}; \
                 {dimension_failures}/{cases} dimension failures; weakest mixed witness {weakest_witness:.3}",
                worst[0], worst[1], worst[2]
            ),
        )
    })
}

/// The grid model of the particle in a box.
pub fn criterion_7(seed: u64) -> CriterionResult {
    timed(7, "particle in a box", || {
        let alpha = 1.0;
        let n = 1000;
        let sym = BoxShape::Symmetric { alpha };
        let half = BoxShape::Half { alpha };
        let asym = BoxShape::Asymmetric { alpha, beta: 2.0 };
        let op_sym = build_box_operator(sym, n).expect("valid box");
        let op_half = build_box_operator(half, n).expect("valid box");
        let op_asym = build_box_operator(asym, n).expect("valid box");

        // (a)
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7);
        let lambdas: Vec<f64> = (0..50).map(|_| rng.random_range(0.9..2.1)).collect();
        let family = spectral_family_check(&op_sym, &lambdas).expect("box operator");
        let a = family == 0.0;

        // (b)
        let interior = crate::cli::sigma_lambdas(alpha, 20);
        let mut errors = Vec::new();
        let mut b = true;
        for grid in [100, 1000] {
            let op = build_box_operator(sym, grid).expect("valid box");
            let err = interior
                .iter()
                .map(|&l| {
                    let s = sigma_measure(&op, l).expect("box operator");
                    (s.numeric - s.analytic).abs()
                })
                .fold(0.0, f64::max);
            b &= err <= 2.0 * alpha / grid as f64;
            errors.push(err);
        }

        // (c)
        let profile_of = |op, shape: BoxShape| {
            multiplicity_profile_with_breaks(op, 0.05, &shape.breakpoints()).expect("no mixed bins")
        };
        let all = |p: &crate::direct_integral::MultiplicityProfile, m: usize| {
            p.bins.iter().all(|b| b.multiplicity == m)
        };
        let p_sym = profile_of(&op_sym, sym);
        let p_half = profile_of(&op_half, half);
        let p_asym = profile_of(&op_asym, asym);
        let break_at = 1.0 + alpha * alpha;
        let asym_ok = p_asym.bins.iter().all(|b| {
            if b.hi <= break_at {
                b.multiplicity == 2
            } else {
                b.lo >= break_at && b.multiplicity == 1
            }
        }) && p_asym.bins.iter().any(|b| b.lo == break_at);
        let c_ok = all(&p_sym, 2) && all(&p_half, 1) && asym_ok;

        // (d)
        let audit_sym = cyclicity_audit(&op_sym, seed);
        let audit_half = cyclicity_audit(&op_half, seed);
        let parity = audit_sym.parity_witness_residual.unwrap_or(f64::INFINITY);
        let d = audit_sym.krylov_rank == n / 2 && audit_half.krylov_rank == n && parity < 1e-10;

        (
            a && b && c_ok && d,
            format!(
                "(a) family residual {family}; (b) sigma error {:.2e} at N=100, {:.2e} at N=1000; \
                 (c) profiles {}; (d) Krylov ranks {} / {} at N={n}, parity {parity:.1e}",
                errors[0],
                errors[1],
                if c_ok { "match" } else { "differ" },
                audit_sym.krylov_rank,
                audit_half.krylov_rank
            ),
        )
    })
}

/// Two identical CLI invocations write byte-identical reports.
pub fn criterion_8(seed: u64) -> CriterionResult {
    timed(8, "CLI determinism", || {
        let dir = std::env::temp_dir().join(format!(
            "bihermitian-selftest-{}-{}",
            std::process::id(),
            seed
        ));
        let outcome = determinism_in(&dir, seed);
        let _ = std::fs::remove_dir_all(&dir);
        match outcome {
            Ok(mismatches) => (
                mismatches.is_empty(),
                if mismatches.is_empty() {
                    "analyze, biunitary-sample, triples and box reports identical across runs"
                        .into()
                } else {
                    format!("reports differ: {mismatches:?}")
                },
            ),
            Err(e) => (false, format!("could not run: {e}")),
        }
    })
}

fn determinism_in(dir: &std::path::Path, seed: u64) -> std::io::Result<Vec<&'static str>> {
    std::fs::create_dir_all(dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x8);
    let h1 = dir.join("h1.json");
    let h2 = dir.join("h2.json");
    crate::cli::write_form_file(&h1, &random_form_matrix(4, &mut rng))?;
    crate::cli::write_form_file(&h2, &random_form_matrix(4, &mut rng))?;
    let p = |s: &std::path::Path| s.display().to_string();
    let seed_s = seed.to_string();
    let runs: Vec<(&'static str, Vec<String>)> = vec![
        (
            "analyze",
            vec![
                "analyze".into(),
                "--h1".into(),
                p(&h1),
                "--h2".into(),
                p(&h2),
            ],
        ),
        (
            "biunitary-sample",
            vec![
                "biunitary-sample".into(),
                "--h1".into(),
                p(&h1),
                "--h2".into(),
                p(&h2),
                "--samples".into(),
                "3".into(),
            ],
        ),
        (
            "triples",
            vec![
                "triples".into(),
                "--h1".into(),
                p(&h1),
                "--h2".into(),
                p(&h2),
            ],
        ),
    ];
    let mut mismatches = Vec::new();
    for (name, args) in runs {
        let mut bodies = Vec::new();
        for run in 0..2 {
            let out = dir.join(format!("{name}-{run}.json"));
            let mut argv = vec!["bihermitian".to_string()];
            argv.extend(args.iter().cloned());
            argv.extend(["--seed".into(), seed_s.clone(), "--out".into(), p(&out)]);
            if crate::cli::run_command(argv) != 0 {
                return Err(std::io::Error::other(format!("{name} exited nonzero")));
            }
            bodies.push(std::fs::read(&out)?);
        }
        if bodies[0] != bodies[1] {
            mismatches.push(name);
        }
    }
    let mut bodies = Vec::new();
    for run in 0..2 {
        let csv = dir.join(format!("box-{run}.csv"));
        let report = dir.join(format!("box-{run}.json"));
        let argv = [
            "bihermitian",
            "box",
            "--alpha",
            "1",
            "--beta",
            "2",
            "--n",
            "200",
            "--bins",
            "0.05",
            "--seed",
            &seed_s,
            "--out",
            &p(&csv),
            "--report",
            &p(&report),
        ]
        .map(String::from);
        if crate::cli::run_command(argv) != 0 {
            return Err(std::io::Error::other("box exited nonzero"));
        }
        bodies.push((std::fs::read(&csv)?, std::fs::read(&report)?));
    }
    if bodies[0] != bodies[1] {
        mismatches.push("box");
    }
    Ok(mismatches)
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        criterion_1(seed),
        criterion_2(seed),
        criterion_3(seed),
        criterion_4(seed),
        criterion_5(seed),
        criterion_6(seed),
        criterion_7(seed),
        criterion_8(seed),
    ]
}
