//! Command-line front end.
//!
//! Every subcommand writes a JSON report (CSV for `box`) and exits with
//! 0 on success, 1 on user error and 2 when the genericity tests disagree.
//! Failures are reported on stderr as `{"schema": 1, "error": {...}}`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::biunitary::{
    commutation_audit, eigenframe_of, off_block_norm, sample_biunitary, BiUnitaryResiduals,
};
use crate::direct_integral::{
    build_box_operator, cyclicity_audit, multiplicity_profile_with_breaks, sample_box_biunitary,
    sigma_measure, spectral_family_check, BoxShape, CyclicityAudit, MultiplicityProfile,
};
use crate::error::Error;
use crate::forms::{connecting_operator, validate_form, HermitianForm};
use crate::genericity::{commutant_basis, genericity_of};
use crate::linalg::{from_rows, real_from_rows, real_to_rows, to_rows, CMatrix, RMatrix};
use crate::real_structures::{
    admissibility_check, compatibility_operators, hermitian_comparison, plus_minus_split, realify,
    AdmissibilityReport, AdmissibleTriple, CommutationResiduals, SelfAdjointnessResiduals,
    SesquilinearityReport,
};
use crate::selftest;
use crate::tolerance::Tolerances;

pub const SCHEMA: u32 = 1;
const TOOL: &str = "bihermitian";

#[derive(Debug, Parser)]
#[command(
    name = "bihermitian",
    version,
    about = "Analysis of pairs of Hermitian structures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Connecting operator, genericity tests and bi-unitary group of a pair of forms.
    Analyze(AnalyzeArgs),
    /// Draw Haar-random bi-unitary transformations of a pair of forms.
    BiunitarySample(SampleArgs),
    /// Compatibility analysis of two real triples (g, omega, J).
    Triples(TriplesArgs),
    /// Grid model of the particle in a box: multiplicity profile and spectral measure.
    Box(BoxArgs),
    /// Run the built-in acceptance checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Absolute max-norm tolerance for Hermitian and identity residuals.
    #[arg(long, default_value_t = 1e-10)]
    pub tol_herm: f64,
    /// Positivity tolerance, relative to the largest eigenvalue.
    #[arg(long, default_value_t = 1e-10)]
    pub tol_psd: f64,
    /// Eigenvalue clustering tolerance, relative to the largest eigenvalue.
    #[arg(long, default_value_t = 1e-8)]
    pub tol_cluster: f64,
    /// Numerical rank tolerance, relative to the largest singular value.
    #[arg(long, default_value_t = 1e-10)]
    pub tol_rank: f64,
    /// Largest accepted condition number of an inverted form.
    #[arg(long, default_value_t = 1e12)]
    pub cond_cap: f64,
    /// Seed for every random draw (random test vectors, Haar samples).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            herm: self.tol_herm,
            psd: self.tol_psd,
            cluster: self.tol_cluster,
            rank: self.tol_rank,
            cond_cap: self.cond_cap,
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Form file `{"n": .., "matrix": [[[re, im], ..], ..]}`; must be positive definite.
    #[arg(long)]
    pub h1: PathBuf,
    /// Second form file, same format; may be semidefinite.
    #[arg(long)]
    pub h2: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Form file `{"n": .., "matrix": [[[re, im], ..], ..]}`; must be positive definite.
    #[arg(long)]
    pub h1: PathBuf,
    /// Second form file, same format; may be semidefinite.
    #[arg(long)]
    pub h2: PathBuf,
    /// Number of bi-unitary samples.
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct TriplesArgs {
    /// First form; realified into (g1, omega1, J1).
    #[arg(long, requires = "h2", conflicts_with_all = ["t1", "t2"])]
    pub h1: Option<PathBuf>,
    /// Second form.
    #[arg(long, requires = "h1")]
    pub h2: Option<PathBuf>,
    /// Real complex structure replacing the standard one for the first form.
    #[arg(long, requires = "h1")]
    pub j1: Option<PathBuf>,
    /// Real complex structure for the second form.
    #[arg(long, requires = "h1")]
    pub j2: Option<PathBuf>,
    /// Triple file `{"g": [[..]], "omega": [[..]], "j": [[..]]}`; `omega`
    /// defaults to `J^T g`.
    #[arg(long, requires = "t2", required_unless_present = "h1")]
    pub t1: Option<PathBuf>,
    /// Second triple file.
    #[arg(long, requires = "t1")]
    pub t2: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct BoxArgs {
    /// Half-width of the symmetric box `[-alpha, alpha]`.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Right end of an asymmetric box `[-alpha, beta]`.
    #[arg(long, conflicts_with = "half")]
    pub beta: Option<f64>,
    /// Use the half box `[0, alpha]`.
    #[arg(long)]
    pub half: bool,
    /// Number of grid points.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Bin width of the multiplicity profile.
    #[arg(long, default_value_t = 0.05)]
    pub bins: f64,
    /// CSV of `lambda,sigma_numeric,sigma_analytic`.
    #[arg(long)]
    pub sigma_out: Option<PathBuf>,
    /// Number of interior sample points for the sigma CSV and the report.
    #[arg(long, default_value_t = 20)]
    pub sigma_points: usize,
    /// JSON report with residuals and the cyclicity audit.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: String, message: String },
    Parse { path: String, message: String },
    Numeric { file: Option<String>, source: Error },
    ChecksFailed(Vec<u32>),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Io { .. } => "IoError",
            CliError::Parse { .. } => "ParseError",
            CliError::Numeric { source, .. } => source.kind(),
            CliError::ChecksFailed(_) => "ChecksFailed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric {
                source: Error::EquivalenceViolation { .. },
                ..
            } => 2,
            _ => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Io { path, message } => format!("{path}: {message}"),
            CliError::Parse { path, message } => format!("{path}: {message}"),
            CliError::Numeric {
                file: Some(f),
                source,
            } => format!("{f}: {source}"),
            CliError::Numeric { file: None, source } => source.to_string(),
            CliError::ChecksFailed(ids) => format!("failed criteria: {ids:?}"),
        }
    }

    fn file(&self) -> Option<&str> {
        match self {
            CliError::Io { path, .. } | CliError::Parse { path, .. } => Some(path),
            CliError::Numeric { file, .. } => file.as_deref(),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        let body = ErrorBody {
            schema: SCHEMA,
            error: ErrorDetail {
                kind: self.kind(),
                message: self.message(),
                file: self.file(),
            },
        };
        serde_json::to_string(&body).expect("error object serializes")
    }
}

impl From<Error> for CliError {
    fn from(source: Error) -> Self {
        CliError::Numeric { file: None, source }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    schema: u32,
    error: ErrorDetail<'a>,
}

#[derive(Serialize)]
struct ErrorDetail<'a> {
    kind: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<&'a str>,
}

/// Parse arguments, run, and return the process exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                // a closed pipe is not worth a panic
                let _ = write!(std::io::stdout(), "{e}");
                return 0;
            }
            let err = CliError::Usage(e.to_string().trim_end().to_string());
            eprintln!("{}", err.to_json());
            return err.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("{}", err.to_json());
            err.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(a) => emit(&a.common.out, &analyze(a)?),
        Command::BiunitarySample(a) => emit(&a.common.out, &biunitary_samples(a)?),
        Command::Triples(a) => emit(&a.common.out, &triples(a)?),
        Command::Box(a) => run_box(a),
        Command::Selftest(a) => run_selftest(a),
    }
}

fn emit<T: Serialize>(out: &Option<PathBuf>, report: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    write_text(out.as_deref(), &text)
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_error(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io {
                path: "<stdout>".into(),
                message: e.to_string(),
            }),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

// ---------------------------------------------------------------- inputs

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormFile {
    n: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RealMatrixFile {
    n: usize,
    matrix: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleFile {
    g: Vec<Vec<f64>>,
    #[serde(default)]
    omega: Option<Vec<Vec<f64>>>,
    j: Vec<Vec<f64>>,
}

/// Input file contents and its hash for the report echo.
struct Loaded {
    bytes: Vec<u8>,
    echo: InputEcho,
}

#[derive(Debug, Clone, Serialize)]
struct InputEcho {
    role: &'static str,
    path: String,
    n: usize,
    sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn load(path: &Path, role: &'static str) -> Result<Loaded, CliError> {
    let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
    let echo = InputEcho {
        role,
        path: path.display().to_string(),
        n: 0,
        sha256: sha256_hex(&bytes),
    };
    Ok(Loaded { bytes, echo })
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, bytes: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_error(path: &Path, message: String) -> CliError {
    CliError::Parse {
        path: path.display().to_string(),
        message,
    }
}

fn check_square<T>(path: &Path, field: &str, n: usize, rows: &[Vec<T>]) -> Result<(), CliError> {
    if rows.len() != n {
        return Err(parse_error(
            path,
            format!("field `{field}`: expected {n} rows, found {}", rows.len()),
        ));
    }
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(parse_error(
            path,
            format!(
                "field `{field}`: row {i} has {} entries, expected {n}",
                row.len()
            ),
        ));
    }
    Ok(())
}

fn form_from_bytes(path: &Path, bytes: &[u8], tol: &Tolerances) -> Result<HermitianForm, CliError> {
    let file: FormFile = parse_json(path, bytes)?;
    if file.n == 0 {
        return Err(parse_error(path, "field `n`: must be positive".into()));
    }
    check_square(path, "matrix", file.n, &file.matrix)?;
    validate_form(from_rows(&file.matrix), tol).map_err(|source| CliError::Numeric {
        file: Some(path.display().to_string()),
        source,
    })
}

/// Read and validate a form file `{"n": .., "matrix": [[[re, im], ..], ..]}`.
pub fn parse_form_file(path: &Path, tol: &Tolerances) -> Result<HermitianForm, CliError> {
    let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
    form_from_bytes(path, &bytes, tol)
}

fn load_form(
    path: &Path,
    role: &'static str,
    tol: &Tolerances,
) -> Result<(HermitianForm, InputEcho), CliError> {
    let mut loaded = load(path, role)?;
    let form = form_from_bytes(path, &loaded.bytes, tol)?;
    loaded.echo.n = form.dim();
    Ok((form, loaded.echo))
}

fn load_real_matrix(path: &Path, role: &'static str) -> Result<(RMatrix, InputEcho), CliError> {
    let mut loaded = load(path, role)?;
    let file: RealMatrixFile = parse_json(path, &loaded.bytes)?;
    check_square(path, "matrix", file.n, &file.matrix)?;
    loaded.echo.n = file.n;
    Ok((real_from_rows(&file.matrix), loaded.echo))
}

fn load_triple(path: &Path, role: &'static str) -> Result<(AdmissibleTriple, InputEcho), CliError> {
    let mut loaded = load(path, role)?;
    let file: TripleFile = parse_json(path, &loaded.bytes)?;
    let d = file.g.len();
    check_square(path, "g", d, &file.g)?;
    check_square(path, "j", d, &file.j)?;
    if let Some(omega) = &file.omega {
        check_square(path, "omega", d, omega)?;
    }
    let g = real_from_rows(&file.g);
    let j = real_from_rows(&file.j);
    let with_file = |source| CliError::Numeric {
        file: Some(path.display().to_string()),
        source,
    };
    let triple = match file.omega {
        Some(omega) => AdmissibleTriple::new(g, real_from_rows(&omega), j),
        None => AdmissibleTriple::from_metric(g, j),
    }
    .map_err(with_file)?;
    loaded.echo.n = d;
    Ok((triple, loaded.echo))
}

// --------------------------------------------------------------- reports

#[derive(Debug, Serialize)]
struct Header {
    schema: u32,
    tool: &'static str,
    tool_version: &'static str,
    command: &'static str,
    seed: u64,
    tolerances: Tolerances,
}

impl Header {
    fn new(command: &'static str, common: &CommonArgs) -> Self {
        Self {
            schema: SCHEMA,
            tool: TOOL,
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            seed: common.seed,
            tolerances: common.tolerances(),
        }
    }
}

/// One residual together with the tolerance that gates it.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualEntry {
    pub quantity: &'static str,
    pub value: f64,
    /// Which tolerance applies, e.g. `tol_herm * n`.
    pub gate: &'static str,
    pub tolerance: f64,
    pub within: bool,
}

impl ResidualEntry {
    fn new(quantity: &'static str, value: f64, gate: &'static str, tolerance: f64) -> Self {
        Self {
            quantity,
            value,
            gate,
            tolerance,
            within: value <= tolerance,
        }
    }
}

#[derive(Debug, Serialize)]
struct ClusterEcho {
    eigenvalue: f64,
    multiplicity: usize,
}

#[derive(Debug, Serialize)]
struct OperatorSummary {
    matrix: Vec<Vec<[f64; 2]>>,
    eigenvalues: Vec<f64>,
    clusters: Vec<ClusterEcho>,
    cluster_threshold: f64,
    cluster_gate: &'static str,
}

#[derive(Debug, Serialize)]
struct GenericitySummary {
    generic: bool,
    by_nondegeneracy: bool,
    by_cyclicity: bool,
    by_commutant: bool,
    krylov_rank: usize,
    krylov_gate: &'static str,
    commutant_dim: usize,
    bicommutant_dim: usize,
    dimension_law_holds: bool,
}

#[derive(Debug, Serialize)]
struct GroupSummary {
    block_sizes: Vec<usize>,
    /// Real dimension `sum n_k^2` of `U(n_1) x ... x U(n_m)`.
    real_dimension: usize,
}

#[derive(Debug, Serialize)]
struct AnalysisReport {
    #[serde(flatten)]
    header: Header,
    inputs: Vec<InputEcho>,
    connecting_operator: OperatorSummary,
    genericity: GenericitySummary,
    biunitary_group: GroupSummary,
    residuals: Vec<ResidualEntry>,
}

fn analyze(args: &AnalyzeArgs) -> Result<AnalysisReport, CliError> {
    let tol = args.common.tolerances();
    let (h1, e1) = load_form(&args.h1, "h1", &tol)?;
    let (h2, e2) = load_form(&args.h2, "h2", &tol)?;
    let g = connecting_operator(&h1, &h2, &tol)?;
    let report = genericity_of(&g, args.common.seed, &tol)?;
    let n = g.dim();
    let commutant = commutant_basis(&g, &tol);
    let audit = commutation_audit(&commutant);
    let frame = eigenframe_of(g.clone(), &tol);
    let gate = tol.herm_scaled(n);

    let sizes = report.clusters.multiplicities();
    let residuals = vec![
        ResidualEntry::new(
            "h2 - h1(G., .)",
            g.defining_residual(),
            "tol_herm * n",
            gate,
        ),
        ResidualEntry::new(
            "G self-adjoint for h1",
            g.self_adjoint_residual_1,
            "tol_herm * n",
            gate,
        ),
        ResidualEntry::new(
            "G self-adjoint for h2",
            g.self_adjoint_residual_2,
            "tol_herm * n",
            gate,
        ),
        ResidualEntry::new(
            "eigenframe h1-orthonormality",
            frame.orthonormality_residual(),
            "tol_herm * n",
            gate,
        ),
        ResidualEntry::new(
            "eigenframe diagonalizes G",
            frame.diagonalization_residual(),
            "tol_herm * n",
            gate,
        ),
        ResidualEntry::new(
            "h2 = lambda h1 on eigenspaces",
            frame.proportionality_residual(),
            "tol_herm * n",
            gate,
        ),
        ResidualEntry::new("commutant is commutative", audit, "tol_herm * n", gate),
    ];
    Ok(AnalysisReport {
        header: Header::new("analyze", &args.common),
        inputs: vec![e1, e2],
        connecting_operator: OperatorSummary {
            matrix: to_rows(g.matrix()),
            eigenvalues: g.eigenvalues().to_vec(),
            clusters: report
                .clusters
                .clusters
                .iter()
                .map(|c| ClusterEcho {
                    eigenvalue: c.eigenvalue,
                    multiplicity: c.multiplicity,
                })
                .collect(),
            cluster_threshold: report.clusters.threshold,
            cluster_gate: "tol_cluster * lambda_max",
        },
        genericity: GenericitySummary {
            generic: report.is_generic(),
            by_nondegeneracy: report.by_nondegeneracy,
            by_cyclicity: report.by_cyclicity,
            by_commutant: report.by_commutant,
            krylov_rank: report.krylov_rank,
            krylov_gate: "tol_rank * sigma_max",
            commutant_dim: report.commutant_dim,
            bicommutant_dim: report.bicommutant_dim,
            dimension_law_holds: report.dimension_law_holds(),
        },
        biunitary_group: GroupSummary {
            real_dimension: sizes.iter().map(|k| k * k).sum(),
            block_sizes: sizes,
        },
        residuals,
    })
}

#[derive(Debug, Serialize)]
struct SampleEcho {
    seed: u64,
    matrix: Vec<Vec<[f64; 2]>>,
    residuals: BiUnitaryResiduals,
    off_block: f64,
    is_biunitary: bool,
}

#[derive(Debug, Serialize)]
struct SampleReport {
    #[serde(flatten)]
    header: Header,
    inputs: Vec<InputEcho>,
    biunitary_group: GroupSummary,
    threshold: f64,
    gate: &'static str,
    samples: Vec<SampleEcho>,
}

fn biunitary_samples(args: &SampleArgs) -> Result<SampleReport, CliError> {
    let tol = args.common.tolerances();
    let (h1, e1) = load_form(&args.h1, "h1", &tol)?;
    let (h2, e2) = load_form(&args.h2, "h2", &tol)?;
    let g = connecting_operator(&h1, &h2, &tol)?;
    let n = g.dim();
    let frame = eigenframe_of(g, &tol);
    let threshold = tol.herm_scaled(n);
    let mut seeds = ChaCha8Rng::seed_from_u64(args.common.seed);
    let samples = (0..args.samples)
        .map(|_| {
            let seed: u64 = seeds.random();
            let u = sample_biunitary(&frame, seed);
            let r = u.residuals;
            SampleEcho {
                seed,
                off_block: off_block_norm(&frame, &u.matrix),
                matrix: to_rows(&u.matrix),
                is_biunitary: r.preserves_h1 <= threshold
                    && r.preserves_h2 <= threshold
                    && r.commutes_with_g <= threshold,
                residuals: r,
            }
        })
        .collect();
    let sizes = frame.cluster_sizes.clone();
    Ok(SampleReport {
        header: Header::new("biunitary-sample", &args.common),
        inputs: vec![e1, e2],
        biunitary_group: GroupSummary {
            real_dimension: sizes.iter().map(|k| k * k).sum(),
            block_sizes: sizes,
        },
        threshold,
        gate: "tol_herm * n",
        samples,
    })
}

#[derive(Debug, Serialize)]
struct SplitEcho {
    d_plus: usize,
    d_minus: usize,
    involution_residual: f64,
    plus_residual: f64,
    minus_residual: f64,
    commutes_with_g: f64,
    commutes_with_t: f64,
    sesquilinearity: SesquilinearityReport,
}

#[derive(Debug, Serialize)]
struct TriplesReport {
    #[serde(flatten)]
    header: Header,
    inputs: Vec<InputEcho>,
    admissibility: [AdmissibilityReport; 2],
    g: Vec<Vec<f64>>,
    t: Vec<Vec<f64>>,
    commutation: CommutationResiduals,
    self_adjointness: SelfAdjointnessResiduals,
    recursion_identity: Option<f64>,
    compatible: bool,
    threshold: f64,
    gate: &'static str,
    split: Option<SplitEcho>,
    residuals: Vec<ResidualEntry>,
}

fn with_structure(
    t: AdmissibleTriple,
    j: Option<RMatrix>,
    path: &Path,
) -> Result<AdmissibleTriple, CliError> {
    match j {
        None => Ok(t),
        Some(j) => AdmissibleTriple::from_metric(t.g, j).map_err(|source| CliError::Numeric {
            file: Some(path.display().to_string()),
            source,
        }),
    }
}

fn triples(args: &TriplesArgs) -> Result<TriplesReport, CliError> {
    let tol = args.common.tolerances();
    let mut inputs = Vec::new();
    let (t1, t2) = match (&args.h1, &args.h2, &args.t1, &args.t2) {
        (Some(p1), Some(p2), _, _) => {
            let (h1, e1) = load_form(p1, "h1", &tol)?;
            let (h2, e2) = load_form(p2, "h2", &tol)?;
            inputs.extend([e1, e2]);
            let mut structure =
                |path: &Option<PathBuf>, role| -> Result<Option<RMatrix>, CliError> {
                    path.as_deref()
                        .map(|p| {
                            let (j, echo) = load_real_matrix(p, role)?;
                            inputs.push(echo);
                            Ok(j)
                        })
                        .transpose()
                };
            let j1 = structure(&args.j1, "j1")?;
            let j2 = structure(&args.j2, "j2")?;
            let j1_path = args.j1.clone().unwrap_or_default();
            let j2_path = args.j2.clone().unwrap_or_default();
            (
                with_structure(realify(&h1), j1, &j1_path)?,
                with_structure(realify(&h2), j2, &j2_path)?,
            )
        }
        (_, _, Some(p1), Some(p2)) => {
            let (t1, e1) = load_triple(p1, "t1")?;
            let (t2, e2) = load_triple(p2, "t2")?;
            inputs.extend([e1, e2]);
            (t1, t2)
        }
        _ => return Err(CliError::Usage("give either --h1/--h2 or --t1/--t2".into())),
    };

    let admissibility = [
        admissibility_check(&t1, &tol),
        admissibility_check(&t2, &tol),
    ];
    let pair = compatibility_operators(&t1, &t2, &tol)?;
    let gate = "tol_herm * 2n";
    let mut residuals = vec![
        ResidualEntry::new("[J1, J2]", pair.commutation.j1_j2, gate, pair.threshold),
        ResidualEntry::new("[G, T]", pair.commutation.g_t, gate, pair.threshold),
        ResidualEntry::new("[G, J1]", pair.commutation.g_j1, gate, pair.threshold),
        ResidualEntry::new("[G, J2]", pair.commutation.g_j2, gate, pair.threshold),
        ResidualEntry::new("[T, J1]", pair.commutation.t_j1, gate, pair.threshold),
        ResidualEntry::new("[T, J2]", pair.commutation.t_j2, gate, pair.threshold),
    ];
    if let Some(r) = pair.recursion_identity {
        residuals.push(ResidualEntry::new("T + J G J", r, gate, pair.threshold));
    }
    let split = if pair.commutation.j1_j2 <= pair.threshold {
        let split = plus_minus_split(&pair)?;
        let (d_plus, d_minus) = split.dims();
        residuals.push(ResidualEntry::new(
            "C^2 - 1",
            split.involution_residual,
            gate,
            pair.threshold,
        ));
        residuals.push(ResidualEntry::new(
            "J2 - J1 on V+",
            split.plus_residual,
            gate,
            pair.threshold,
        ));
        residuals.push(ResidualEntry::new(
            "J2 + J1 on V-",
            split.minus_residual,
            gate,
            pair.threshold,
        ));
        Some(SplitEcho {
            d_plus,
            d_minus,
            involution_residual: split.involution_residual,
            plus_residual: split.plus_residual,
            minus_residual: split.minus_residual,
            commutes_with_g: split.commutes_with_g,
            commutes_with_t: split.commutes_with_t,
            sesquilinearity: hermitian_comparison(&pair, &split),
        })
    } else {
        None
    };
    Ok(TriplesReport {
        header: Header::new("triples", &args.common),
        inputs,
        admissibility,
        g: real_to_rows(&pair.g),
        t: real_to_rows(&pair.t),
        commutation: pair.commutation,
        self_adjointness: pair.self_adjointness,
        recursion_identity: pair.recursion_identity,
        compatible: pair.compatible,
        threshold: pair.threshold,
        gate,
        split,
        residuals,
    })
}

#[derive(Debug, Serialize)]
struct Segment {
    lo: f64,
    hi: f64,
    multiplicity: usize,
}

#[derive(Debug, Serialize)]
struct BoxReport {
    #[serde(flatten)]
    header: Header,
    shape: BoxShape,
    n: usize,
    bin_width: f64,
    breakpoints: Vec<f64>,
    segments: Vec<Segment>,
    sigma_max_error: f64,
    sigma_gate: &'static str,
    cyclicity: CyclicityAudit,
    biunitary_blocks: usize,
    biunitary_max_block: usize,
    residuals: Vec<ResidualEntry>,
}

fn shape_of(args: &BoxArgs) -> BoxShape {
    match (args.half, args.beta) {
        (true, _) => BoxShape::Half { alpha: args.alpha },
        (false, Some(beta)) => BoxShape::Asymmetric {
            alpha: args.alpha,
            beta,
        },
        (false, None) => BoxShape::Symmetric { alpha: args.alpha },
    }
}

/// Merge consecutive bins of equal multiplicity.
fn segments(profile: &MultiplicityProfile) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::new();
    for b in &profile.bins {
        match out.last_mut() {
            Some(s) if s.multiplicity == b.multiplicity => s.hi = b.hi,
            _ => out.push(Segment {
                lo: b.lo,
                hi: b.hi,
                multiplicity: b.multiplicity,
            }),
        }
    }
    out
}

/// `count` interior points of `[1, 1 + alpha^2]`, at cell midpoints.
pub fn sigma_lambdas(alpha: f64, count: usize) -> Vec<f64> {
    let top = alpha * alpha;
    (0..count)
        .map(|k| 1.0 + top * (k as f64 + 0.5) / count as f64)
        .collect()
}

fn run_box(args: &BoxArgs) -> Result<(), CliError> {
    if !(args.alpha > 0.0 && args.alpha.is_finite()) {
        return Err(
            Error::BadInterval(format!("alpha must be positive, got {}", args.alpha)).into(),
        );
    }
    let shape = shape_of(args);
    let op = build_box_operator(shape, args.n)?;
    let breaks = shape.breakpoints();
    let profile = multiplicity_profile_with_breaks(&op, args.bins, &breaks)?;

    let mut csv = Vec::new();
    profile.write_csv(&mut csv).map_err(|e| CliError::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    })?;
    write_text(
        args.common.out.as_deref(),
        std::str::from_utf8(&csv).expect("csv is utf-8"),
    )?;

    let lambdas = sigma_lambdas(shape.alpha(), args.sigma_points);
    let sigmas = lambdas
        .iter()
        .map(|&l| sigma_measure(&op, l))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(path) = &args.sigma_out {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| io_error(path, std::io::Error::other(e.to_string()));
        w.write_record(["lambda", "sigma_numeric", "sigma_analytic"])
            .map_err(io)?;
        for s in &sigmas {
            w.write_record([
                s.lambda.to_string(),
                s.numeric.to_string(),
                s.analytic.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| io_error(path, std::io::Error::other(e.to_string())))?;
        fs::write(path, bytes).map_err(|e| io_error(path, e))?;
    }

    if let Some(path) = &args.report {
        let tol = args.common.tolerances();
        let (lo, hi) = shape.spectrum();
        let mut rng = ChaCha8Rng::seed_from_u64(args.common.seed);
        let family_lambdas: Vec<f64> = (0..50).map(|_| rng.random_range(lo..hi)).collect();
        let family = spectral_family_check(&op, &family_lambdas)?;
        let sigma_max_error = sigmas
            .iter()
            .map(|s| (s.numeric - s.analytic).abs())
            .fold(0.0, f64::max);
        let audit = cyclicity_audit(&op, args.common.seed);
        let u = sample_box_biunitary(&op, args.common.seed);
        let mut residuals = vec![
            ResidualEntry::new("spectral family factorization", family, "exact", 0.0),
            ResidualEntry::new(
                "sigma - sqrt(lambda - 1)",
                sigma_max_error,
                "2 alpha / n",
                2.0 * shape.alpha() / args.n as f64,
            ),
            ResidualEntry::new(
                "U preserves weighted inner product",
                u.inner_product_residual,
                "tol_herm * n",
                tol.herm_scaled(args.n),
            ),
            ResidualEntry::new(
                "U preserves G form",
                u.g_form_residual,
                "tol_herm * n",
                tol.herm_scaled(args.n),
            ),
            ResidualEntry::new(
                "[G, U]",
                u.commutator_residual,
                "tol_herm * n",
                tol.herm_scaled(args.n),
            ),
        ];
        if let Some(p) = audit.parity_witness_residual {
            residuals.push(ResidualEntry::new(
                "parity witness orthogonality",
                p,
                "tol_herm",
                tol.herm,
            ));
        }
        let report = BoxReport {
            header: Header::new("box", &args.common),
            shape,
            n: args.n,
            bin_width: args.bins,
            breakpoints: breaks,
            segments: segments(&profile),
            sigma_max_error,
            sigma_gate: "2 alpha / n",
            cyclicity: audit,
            biunitary_blocks: u.blocks.len(),
            biunitary_max_block: u.max_block_size(),
            residuals,
        };
        emit(&Some(path.clone()), &report)?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct SelftestReport {
    #[serde(flatten)]
    header: Header,
    criteria: Vec<selftest::CriterionResult>,
    passed: bool,
}

fn run_selftest(args: &SelftestArgs) -> Result<(), CliError> {
    let results = selftest::run_all(args.common.seed);
    for r in &results {
        eprintln!("{}", r.line());
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    let report = SelftestReport {
        header: Header::new("selftest", &args.common),
        passed: failed.is_empty(),
        criteria: results,
    };
    emit(&args.common.out, &report)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failed))
    }
}

/// Write `m` in the form-file format read by [`parse_form_file`].
pub fn write_form_file(path: &Path, m: &CMatrix) -> std::io::Result<()> {
    #[derive(Serialize)]
    struct Out {
        n: usize,
        matrix: Vec<Vec<[f64; 2]>>,
    }
    let body = serde_json::to_string(&Out {
        n: m.nrows(),
        matrix: to_rows(m),
    })
    .expect("form serializes");
    fs::write(path, body)
}
