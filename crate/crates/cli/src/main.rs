//! `kuechle-lab`: command-line front end for the exact-arithmetic checks in
//! `kuechle-core`. Every operation reads JSON, writes JSON to standard
//! output, and exits 0 when a result was computed, 1 when a verification or
//! internal invariant failed, and 2 on invalid input.

mod reports;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kuechle_core::chow::{
    degeneracy_classes, ledger_by_name, ChowClass, ChowError, GradedRing,
};
use kuechle_core::complete_quadrics::{
    g_subalgebra, orbit_classify, phi, verify_embedding, y_point_count, CQPoint,
    EmbeddingConfig, QuadricError,
};
use kuechle_core::encoding::{
    cq_point_from_json, matrix_or_grid_from_json, parse_json, pencil_from_json,
    subspace_from_json, trivector_from_json, EncodingError,
};
use kuechle_core::linalg::LinalgError;
use kuechle_core::pencils::{
    b4_line_count, d3_point_counts, expected_lagrangian_count, hyperbolic_quadric,
    MultilinearForm, PencilError, SkewPencil,
};
use kuechle_core::scalars::{proj_line_points, ScalarError};
use kuechle_core::trivectors::{
    invariant_space_dim, is_isotropic, kuchle_coordinate_form, stabilizer_dim, trace_form,
    TriVector, TrivectorError,
};
use kuechle_core::Field;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "kuechle-lab", version, about = "Exact-arithmetic checks for skew pencils, 3-forms, complete quadrics and decomposition ledgers")]
struct Cli {
    /// Also write the JSON result to this file
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Skew-form pencils: smoothness, normal form, Lagrangian enumeration
    Pencil {
        #[command(subcommand)]
        op: PencilOp,
    },
    /// Point counts of a multilinear hypersurface and its blowup identity
    D3 {
        #[command(subcommand)]
        op: D3Op,
    },
    /// Line counts on the split quadric fourfold
    B4 {
        #[command(subcommand)]
        op: B4Op,
    },
    /// Alternating 3-forms on an 8-space
    Trivector {
        #[command(subcommand)]
        op: TrivectorOp,
    },
    /// Complete quadrics of a 3-space and the subalgebra embedding
    Cq {
        #[command(subcommand)]
        op: CqOp,
    },
    /// Chow-class arithmetic and decomposition ledgers
    Chow {
        #[command(subcommand)]
        op: ChowOp,
    },
    /// Run the full check registry and report pass/fail per check
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random samples per sampled check; 0 keeps only the
        /// structural checks
        #[arg(long, default_value_t = 100)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum PencilOp {
    /// Smoothness analysis from the Pfaffian form and member kernels
    Analyze {
        /// Pencil file: {"field":…,"A":…,"B":…}
        #[arg(long)]
        input: PathBuf,
    },
    /// Simultaneous block normal form of a smooth pencil
    StandardForm {
        #[arg(long)]
        input: PathBuf,
    },
    /// Exhaustive common-Lagrangian search over a finite field
    Enumerate {
        /// Pencil file; when absent, a split pencil over F_q is used
        #[arg(long)]
        input: Option<PathBuf>,
        /// Prime order of the base field for the default split pencil
        #[arg(long)]
        q: Option<u64>,
        /// Number of 2x2 blocks of the default split pencil
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum D3Op {
    /// Count points of a seeded random multilinear hypersurface and check
    /// the blowup identity
    Counts {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of multilinear factors
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum B4Op {
    /// Count lines on the split quadric, directly and by the closed formula
    Lines {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Subcommand)]
enum TrivectorOp {
    /// Dimension of the infinitesimal stabilizer in gl(8)
    Stabilizer {
        /// "trace", "kuchle", or a trivector JSON file
        #[arg(long)]
        form: String,
    },
    /// Dimension of the space of ad-invariant 3-forms on the traceless
    /// 3x3 matrices
    InvariantDim,
    /// Whether a 3-form vanishes identically on a subspace
    Isotropic {
        #[arg(long)]
        form: String,
        /// Basis matrix file, one vector per row
        #[arg(long)]
        subspace: PathBuf,
    },
}

#[derive(Subcommand)]
enum CqOp {
    /// Orbit of a pair (C, Cp) with C·Cp proportional to the identity
    Classify {
        /// 3x3 symmetric matrix, inline JSON or a file
        #[arg(long = "C")]
        c: String,
        #[arg(long = "Cp")]
        cp: String,
        /// Prime field order; rational when absent
        #[arg(long)]
        p: Option<u64>,
    },
    /// The rank-3 subalgebra attached to a point
    G {
        /// Point file: {"C":…,"Cp":…,"field":…}
        #[arg(long)]
        point: PathBuf,
    },
    /// The 5-dimensional orthogonal image of the subalgebra with its
    /// Pluecker coordinates
    Phi {
        #[arg(long)]
        point: PathBuf,
    },
    /// Check the embedding invariants at representatives and seeded samples
    Verify {
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 7)]
        p: u64,
    },
    /// Count points over F_q directly and via the blowup formula
    Count {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Subcommand)]
enum ChowOp {
    /// Corank-1 and corank-2 degeneracy-locus classes from c1, c2, c3
    Degeneracy {
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
        #[arg(long)]
        c3: String,
        /// "P<d>" for projective space, "P1^<n>" for a product of lines
        #[arg(long)]
        ring: String,
    },
    /// Exceptional-object bookkeeping for a named fourfold
    Ledger {
        /// One of b9, d3, c7, b4
        name: String,
    },
}

enum CliError {
    /// Exit 2: the input could not be parsed or violates a precondition.
    Input(String),
    /// Exit 1: a computation contradicted an invariant it must satisfy.
    Invariant(String),
}

impl From<EncodingError> for CliError {
    fn from(e: EncodingError) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<ScalarError> for CliError {
    fn from(e: ScalarError) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<ChowError> for CliError {
    fn from(e: ChowError) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<TrivectorError> for CliError {
    fn from(e: TrivectorError) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<PencilError> for CliError {
    fn from(e: PencilError) -> CliError {
        match e {
            PencilError::InvariantViolation(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<QuadricError> for CliError {
    fn from(e: QuadricError) -> CliError {
        match e {
            // These mean a computed object broke a property it is proved to
            // have, not that the input was bad.
            QuadricError::RankNotThree(_)
            | QuadricError::NotTraceless
            | QuadricError::NotClosed
            | QuadricError::NotUnique(_)
            | QuadricError::NoAnnihilator => CliError::Invariant(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_json_file(path: &Path) -> Result<Value, CliError> {
    Ok(parse_json(&read_file(path)?)?)
}

/// Inline JSON when the argument looks like JSON, otherwise a file path.
fn json_arg(arg: &str) -> Result<Value, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        Ok(parse_json(arg)?)
    } else {
        read_json_file(Path::new(arg))
    }
}

fn field_from_p(p: Option<u64>) -> Result<Field, CliError> {
    match p {
        None => Ok(Field::Rational),
        Some(p) => Ok(Field::prime(p)?),
    }
}

fn load_trivector(source: &str) -> Result<TriVector, CliError> {
    match source {
        "trace" => Ok(trace_form(Field::Rational)?),
        "kuchle" => Ok(kuchle_coordinate_form(Field::Rational)),
        path => Ok(trivector_from_json(&read_json_file(Path::new(path))?)?),
    }
}

fn load_cq_point(path: &Path) -> Result<CQPoint, CliError> {
    Ok(cq_point_from_json(&read_json_file(path)?)?)
}

fn parse_ring(text: &str) -> Result<GradedRing, CliError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || CliError::Input(format!("unknown ring {text:?}; use P<d> or P1^<n>"));
    if let Some(rest) = compact.strip_prefix("(P1)^").or_else(|| compact.strip_prefix("P1^")) {
        let n: u32 = rest.parse().map_err(|_| err())?;
        return Ok(GradedRing::multi_p1(n));
    }
    if let Some(rest) = compact.strip_prefix('P') {
        let d: u32 = rest.parse().map_err(|_| err())?;
        return Ok(GradedRing::projective(d));
    }
    Err(err())
}

/// Result JSON plus whether the verification it encodes (if any) passed.
struct Outcome {
    json: Value,
    ok: bool,
}

impl Outcome {
    fn computed(json: Value) -> Outcome {
        Outcome { json, ok: true }
    }

    fn verified(json: Value, ok: bool) -> Outcome {
        Outcome { json, ok }
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Pencil { op } => run_pencil(op),
        Command::D3 { op } => run_d3(op),
        Command::B4 { op } => run_b4(op),
        Command::Trivector { op } => run_trivector(op),
        Command::Cq { op } => run_cq(op),
        Command::Chow { op } => run_chow(op),
        Command::VerifyAll { seed, budget } => {
            let (json, ok) = verify::run_all(&verify::VerifyConfig { seed, budget });
            Ok(Outcome::verified(json, ok))
        }
    }
}

fn run_pencil(op: PencilOp) -> Result<Outcome, CliError> {
    match op {
        PencilOp::Analyze { input } => {
            let pencil = pencil_from_json(&read_json_file(&input)?)?;
            Ok(Outcome::computed(reports::smoothness_json(&pencil.analyze())))
        }
        PencilOp::StandardForm { input } => {
            let pencil = pencil_from_json(&read_json_file(&input)?)?;
            let form = pencil.standard_form()?;
            Ok(Outcome::computed(reports::standard_form_json(&form)))
        }
        PencilOp::Enumerate { input, q, n } => {
            let pencil = match (input, q) {
                (Some(path), _) => pencil_from_json(&read_json_file(&path)?)?,
                (None, Some(q)) => {
                    let field = Field::prime(q)?;
                    let points = proj_line_points(field.clone())
                        .expect("finite fields have finitely many line points");
                    if n > points.len() {
                        return Err(CliError::Input(format!(
                            "the projective line over F_{q} has only {} points, cannot \
                             build {n} blocks",
                            points.len()
                        )));
                    }
                    SkewPencil::from_root_points(field, &points[..n])?
                }
                (None, None) => {
                    return Err(CliError::Input(
                        "give a pencil with --input or a field with --q".into(),
                    ))
                }
            };
            let run = pencil.enumerate_lagrangians()?;
            let expected = match pencil.field() {
                Field::Prime(q) => Some(expected_lagrangian_count(q, pencil.n())),
                Field::Rational => None,
            };
            Ok(Outcome::computed(reports::enumeration_json(&run, expected)))
        }
    }
}

fn run_d3(op: D3Op) -> Result<Outcome, CliError> {
    let D3Op::Counts { q, seed, n } = op;
    let field = Field::prime(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = MultilinearForm::random(field, n, &mut rng);
    let report = d3_point_counts(&s)?;
    let ok = report.identity_holds();
    Ok(Outcome::verified(reports::d3_json(&report, seed), ok))
}

fn run_b4(op: B4Op) -> Result<Outcome, CliError> {
    let B4Op::Lines { q } = op;
    let field = Field::prime(q)?;
    let report = b4_line_count(&hyperbolic_quadric(field))?;
    let ok = report.matches_split_formula();
    Ok(Outcome::verified(reports::b4_json(&report), ok))
}

fn run_trivector(op: TrivectorOp) -> Result<Outcome, CliError> {
    match op {
        TrivectorOp::Stabilizer { form } => {
            let t = load_trivector(&form)?;
            Ok(Outcome::computed(json!({"dim": stabilizer_dim(&t)})))
        }
        TrivectorOp::InvariantDim => {
            let space = invariant_space_dim()?;
            Ok(Outcome::computed(json!({"dim": space.dim})))
        }
        TrivectorOp::Isotropic { form, subspace } => {
            let t = load_trivector(&form)?;
            let s = subspace_from_json(&t.field(), &read_json_file(&subspace)?)?;
            if s.ambient_dim() != t.dim() {
                return Err(CliError::Input(format!(
                    "subspace lives in dimension {}, the form in {}",
                    s.ambient_dim(),
                    t.dim()
                )));
            }
            Ok(Outcome::computed(json!({"isotropic": is_isotropic(&t, &s)})))
        }
    }
}

fn run_cq(op: CqOp) -> Result<Outcome, CliError> {
    match op {
        CqOp::Classify { c, cp, p } => {
            let field = field_from_p(p)?;
            let c = matrix_or_grid_from_json(&field, &json_arg(&c)?)?;
            let cp = matrix_or_grid_from_json(&field, &json_arg(&cp)?)?;
            let point = CQPoint::new(c, cp)?;
            let label = orbit_classify(&point)?;
            Ok(Outcome::computed(json!({
                "orbit": label.name(),
                "t": point.t().to_string(),
            })))
        }
        CqOp::G { point } => {
            let y = load_cq_point(&point)?;
            let g = g_subalgebra(&y)?;
            Ok(Outcome::computed(reports::subalgebra_json(&g)))
        }
        CqOp::Phi { point } => {
            let y = load_cq_point(&point)?;
            let image = phi(&y)?;
            Ok(Outcome::computed(reports::phi_json(&image)))
        }
        CqOp::Verify { budget, seed, p } => {
            Field::prime(p)?;
            let report = verify_embedding(&EmbeddingConfig {
                seed,
                budget,
                prime: p,
            })?;
            let ok = report.all_passed();
            Ok(Outcome::verified(reports::embedding_json(&report), ok))
        }
        CqOp::Count { q } => {
            let field = Field::prime(q)?;
            let report = y_point_count(field)?;
            let ok = report.matches();
            Ok(Outcome::verified(reports::y_count_json(&report), ok))
        }
    }
}

fn run_chow(op: ChowOp) -> Result<Outcome, CliError> {
    match op {
        ChowOp::Degeneracy { c1, c2, c3, ring } => {
            let ring = parse_ring(&ring)?;
            let c1 = ChowClass::parse(&ring, &c1)?;
            let c2 = ChowClass::parse(&ring, &c2)?;
            let c3 = ChowClass::parse(&ring, &c3)?;
            let classes = degeneracy_classes(&c1, &c2, &c3)?;
            Ok(Outcome::computed(json!({
                "discriminant": classes.discriminant.to_string(),
                "corank2": classes.corank2.to_string(),
            })))
        }
        ChowOp::Ledger { name } => {
            let ledger = ledger_by_name(&name).ok_or_else(|| {
                CliError::Input(format!("unknown ledger {name:?}; use b9, d3, c7 or b4"))
            })?;
            Ok(Outcome::computed(reports::ledger_json(&ledger)))
        }
    }
}

fn emit(json: &Value, output: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(json).expect("reports serialize");
    println!("{text}");
    if let Some(path) = output {
        fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command).and_then(|outcome| {
        emit(&outcome.json, cli.output.as_deref())?;
        Ok(outcome.ok)
    }) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Invariant(msg)) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
