//! Command-line front end: load space specs and subspace files, run the
//! analyses, and emit deterministic reports.
//!
//! Output is either human-readable text or JSON (`--json`), assembled in full
//! before anything is written, so error paths never leave partial output on
//! stdout. Exit codes: 0 when the requested decision or sweep completed (and
//! any checks passed), 1 when a verification sweep reports failures, 2 for
//! input errors of any kind, including violated preconditions.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use isopar_core::congruence::{are_congruent, automorphism_group, IsometryWitness};
use isopar_core::geometry::{InhomogeneityWitness, Spectrum, Subspace};
use isopar_core::linalg::{parse_rat, Rat};
use isopar_core::rootsys::{preset, RootDatum, SpaceSpec};
use isopar_core::verify::{
    austere_search, genericity_experiment, reference_fixtures, verify_collinear_all,
    CollinearStatus, SampleConfig,
};
use isopar_core::Error as CoreError;

const EXIT_OK: i32 = 0;
const EXIT_FAILURE: i32 = 1;
const EXIT_INPUT: i32 = 2;

#[derive(Parser)]
#[command(
    name = "isopar",
    about = "Exact decision procedures for polar-foliation orbit data",
    disable_help_subcommand = true
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a space spec and echo the built datum.
    Build(BuildArgs),
    /// Report minimality, austerity, spectra, and curvature data for a subspace.
    Analyze(AnalyzeArgs),
    /// Random search for austere subspaces at a fixed codimension.
    AustereSearch(AustereSearchArgs),
    /// Decide whether two subspaces differ by a root-datum symmetry.
    Congruence(CongruenceArgs),
    /// Sweep bounded-rank data for the root whose sums avoid the half-sum line.
    VerifyCollinear(VerifyCollinearArgs),
    /// Sample subspaces through the half-sum vector; count minimal and austere ones.
    Genericity(GenericityArgs),
    /// Run the bundled regression fixtures.
    Fixtures,
}

/// Where the space spec comes from: a JSON file or a built-in shorthand.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct SpecSource {
    /// Path to a JSON space spec file.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Built-in shorthand, e.g. "split:a4", "sl5/so5", "(rh2)^4".
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    source: SpecSource,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: SpecSource,
    /// Path to a JSON subspace file: {"vectors": [["p/q", ...], ...]}.
    #[arg(long, value_name = "FILE")]
    subspace: PathBuf,
    /// Normal direction, comma-separated rationals, e.g. "1,-1/2,0,0".
    #[arg(long, value_name = "VEC")]
    xi: Option<String>,
    /// Tube radius, a positive rational; needs --xi.
    #[arg(long, value_name = "RAT", requires = "xi")]
    t: Option<String>,
}

#[derive(Args)]
struct AustereSearchArgs {
    #[command(flatten)]
    source: SpecSource,
    /// Codimension of the sampled subspaces.
    #[arg(long, value_name = "K")]
    codim: usize,
    /// Number of samples to draw.
    #[arg(long, value_name = "N")]
    count: usize,
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Random coordinates are integers in [-B, B].
    #[arg(long, value_name = "B", default_value_t = 10)]
    coeff_bound: i64,
    /// Force every sample through the half-sum vector.
    #[arg(long)]
    require_minimal: bool,
}

#[derive(Args)]
struct CongruenceArgs {
    #[command(flatten)]
    source: SpecSource,
    /// First subspace file.
    #[arg(long, value_name = "FILE")]
    b1: PathBuf,
    /// Second subspace file.
    #[arg(long, value_name = "FILE")]
    b2: PathBuf,
}

#[derive(Args)]
struct VerifyCollinearArgs {
    /// Largest rank to sweep, between 3 and 8.
    #[arg(long, value_name = "N")]
    max_rank: usize,
    /// Also sweep reducible factor multisets of total rank 3..=max-rank.
    #[arg(long)]
    reducible: bool,
    /// Extra passes per instance with random multiplicities in [1, 4].
    #[arg(long, value_name = "P", default_value_t = 5)]
    mult_passes: usize,
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenericityArgs {
    #[command(flatten)]
    source: SpecSource,
    /// Codimension of the sampled subspaces (2..=rank-1).
    #[arg(long, value_name = "K")]
    codim: usize,
    /// Number of samples to draw.
    #[arg(long, value_name = "N")]
    count: usize,
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Random coordinates are integers in [-B, B].
    #[arg(long, value_name = "B", default_value_t = 10)]
    coeff_bound: i64,
}

struct CliError {
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { message: message.into() }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError { message: e.to_string() }
    }
}

enum Rendered {
    Text(String),
    Json(Value),
}

/// Parses argv, runs the subcommand, and writes the finished report to `out`.
/// Returns the process exit code; errors go to `err` and nothing to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let stream: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(stream, "{e}");
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((rendered, code)) => {
            match rendered {
                Rendered::Text(s) => {
                    let _ = write!(out, "{s}");
                }
                Rendered::Json(v) => {
                    let _ = writeln!(out, "{:#}", v);
                }
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            EXIT_INPUT
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(Rendered, i32), CliError> {
    match &cli.command {
        Command::Build(a) => cmd_build(a, cli.json),
        Command::Analyze(a) => cmd_analyze(a, cli.json),
        Command::AustereSearch(a) => cmd_austere_search(a, cli.json),
        Command::Congruence(a) => cmd_congruence(a, cli.json),
        Command::VerifyCollinear(a) => cmd_verify_collinear(a, cli.json),
        Command::Genericity(a) => cmd_genericity(a, cli.json),
        Command::Fixtures => cmd_fixtures(cli.json),
    }
}

// ---- input loading ----

fn load_spec(source: &SpecSource) -> Result<SpaceSpec, CliError> {
    if let Some(path) = &source.spec {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::input(format!("{} is not a valid space spec: {e}", path.display()))
        })
    } else {
        let name = source.preset.as_deref().expect("clap enforces one source");
        preset(name).ok_or_else(|| CliError::input(format!("unknown preset {name:?}")))
    }
}

#[derive(serde::Deserialize)]
struct SubspaceFile {
    vectors: Vec<Vec<String>>,
}

fn load_subspace(datum: &Arc<RootDatum>, path: &Path) -> Result<Subspace, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let file: SubspaceFile = serde_json::from_str(&text).map_err(|e| {
        CliError::input(format!("{} is not a valid subspace file: {e}", path.display()))
    })?;
    let mut vectors = Vec::with_capacity(file.vectors.len());
    for (i, row) in file.vectors.iter().enumerate() {
        let mut v = Vec::with_capacity(row.len());
        for s in row {
            v.push(parse_rat(s).map_err(|e| {
                CliError::input(format!("{}, vector {i}: {e}", path.display()))
            })?);
        }
        vectors.push(v);
    }
    Ok(Subspace::span(datum, &vectors)?)
}

fn parse_vec(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',')
        .map(|part| parse_rat(part.trim()).map_err(CliError::from))
        .collect()
}

// ---- rendering helpers ----

fn rat_str(r: &Rat) -> String {
    r.to_string()
}

fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(Rat::to_string).collect();
    format!("({})", parts.join(", "))
}

fn fmt_spectrum(s: &Spectrum) -> String {
    let parts: Vec<String> = s
        .entries()
        .iter()
        .map(|(value, mult)| match value {
            isopar_core::geometry::SpectrumValue::Value(r) => format!("{r} x{mult}"),
            isopar_core::geometry::SpectrumValue::Direction(d) => {
                format!("<., {}> x{mult}", fmt_vec(d))
            }
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn json_value(v: &Rat) -> Value {
    Value::String(rat_str(v))
}

fn json_vec(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(json_value).collect())
}

fn json_mat_rows(rows: &[Vec<Rat>]) -> Value {
    Value::Array(rows.iter().map(|r| json_vec(r)).collect())
}

fn inhomogeneity_json(datum: &RootDatum, w: &InhomogeneityWitness) -> Value {
    let h = &datum.positive(w.root).hvec;
    json!({
        "root": w.root,
        "xi1": json_vec(&w.xi1),
        "xi2": json_vec(&w.xi2),
        "value1": rat_str(&datum.gram_dot(h, &w.xi1)),
        "value2": rat_str(&datum.gram_dot(h, &w.xi2)),
    })
}

fn inhomogeneity_text(datum: &RootDatum, w: &InhomogeneityWitness) -> String {
    let h = &datum.positive(w.root).hvec;
    format!(
        "root {} takes value {} on xi1 = {} and {} on xi2 = {} (equal norms)",
        w.root,
        datum.gram_dot(h, &w.xi1),
        fmt_vec(&w.xi1),
        datum.gram_dot(h, &w.xi2),
        fmt_vec(&w.xi2),
    )
}

fn isometry_json(w: &IsometryWitness) -> Value {
    json!({
        "matrix": json_mat_rows(&w.matrix.row_vecs()),
        "root_permutation": w.root_permutation,
        "factor_permutation": w.factor_permutation,
        "identity": w.is_identity(),
    })
}

fn wrap(command: &str, mut payload: Value) -> Value {
    let obj = payload.as_object_mut().expect("reports are objects");
    obj.insert("schema".to_string(), Value::String("1".to_string()));
    obj.insert("command".to_string(), Value::String(command.to_string()));
    payload
}

// ---- subcommands ----

fn cmd_build(a: &BuildArgs, json: bool) -> Result<(Rendered, i32), CliError> {
    let spec = load_spec(&a.source)?;
    let datum = RootDatum::build(&spec)?;
    let axioms = datum.check_axioms();
    if json {
        let factors: Vec<Value> = spec
            .factors
            .iter()
            .map(|f| {
                json!({
                    "label": f.label(),
                    "family": f.family.to_string(),
                    "rank": f.rank,
                    "multiplicities": f.multiplicities,
                    "scale": rat_str(&f.scale),
                })
            })
            .collect();
        let simples: Vec<Value> = datum
            .simple_indices
            .iter()
            .map(|&i| {
                let e = datum.positive(i);
                json!({
                    "index": i,
                    "hvec": json_vec(&e.hvec),
                    "class": e.class,
                    "mult": e.mult,
                    "factor": e.factor,
                })
            })
            .collect();
        let payload = json!({
            "label": datum.label(),
            "rank": datum.rank,
            "ambient_dim": datum.ambient_dim,
            "factors": factors,
            "root_count": datum.roots.len(),
            "positive_count": datum.pos_count(),
            "total_multiplicity": datum.total_mult(),
            "simples": simples,
            "hdelta": json_vec(datum.hdelta()),
            "axioms_passed": axioms.passed(),
            "axiom_checks": axioms.checks.len(),
        });
        Ok((Rendered::Json(wrap("build", payload)), EXIT_OK))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "label: {}", datum.label());
        let _ = writeln!(s, "rank: {}  ambient dim: {}", datum.rank, datum.ambient_dim);
        let _ = writeln!(s, "factors:");
        for f in &spec.factors {
            let mults: Vec<String> =
                f.multiplicities.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(
                s,
                "  {}  multiplicities: {}  scale: {}",
                f.label(),
                mults.join(", "),
                f.scale
            );
        }
        let _ = writeln!(
            s,
            "roots: {} ({} positive), total multiplicity {}",
            datum.roots.len(),
            datum.pos_count(),
            datum.total_mult()
        );
        let _ = writeln!(s, "simple roots:");
        for &i in &datum.simple_indices {
            let e = datum.positive(i);
            let _ = writeln!(s, "  [{i}] {}  class {}  mult {}", fmt_vec(&e.hvec), e.class, e.mult);
        }
        let _ = writeln!(s, "half-sum vector: {}", fmt_vec(datum.hdelta()));
        let _ = writeln!(
            s,
            "axioms: {} ({} checks)",
            if axioms.passed() { "ok" } else { "FAILED" },
            axioms.checks.len()
        );
        Ok((Rendered::Text(s), EXIT_OK))
    }
}

fn cmd_analyze(a: &AnalyzeArgs, json: bool) -> Result<(Rendered, i32), CliError> {
    let spec = load_spec(&a.source)?;
    let datum = Arc::new(RootDatum::build(&spec)?);
    let b = load_subspace(&datum, &a.subspace)?;
    let xi = a.xi.as_deref().map(parse_vec).transpose()?;
    let t = a
        .t
        .as_deref()
        .map(|s| parse_rat(s).map_err(CliError::from))
        .transpose()?;

    let minimal = b.is_minimal();
    let mean_curvature = b.mean_curvature_vector();
    let (austere, austere_witness) = b.is_austere();

    // focal data, symbolic unless a direction was supplied
    let focal = match &xi {
        Some(xi) => {
            let spectrum = b.focal_spectrum(xi)?;
            let trace = spectrum.trace().expect("evaluated spectra have traces");
            (Some(xi.clone()), spectrum, Some(trace))
        }
        None => (None, b.focal_spectrum_symbolic(), None),
    };

    // per-radius mean curvature of the tube, with its exact operands
    let radial_count = b.codim().saturating_sub(1);
    let tube = match &t {
        Some(t) => {
            let xi = focal.0.as_ref().expect("clap ties --t to --xi");
            let spectrum = b.tube_spectrum(xi, t)?;
            let cmc = b.tube_cmc(t)?;
            Some((spectrum, cmc, t.clone()))
        }
        None => None,
    };

    let constancy = if b.codim() == 0 {
        None
    } else {
        Some(b.has_constant_principal_curvatures()?)
    };
    let cpc = if b.codim() >= 2 { Some(b.is_cpc()?) } else { None };

    if json {
        let focal_json = match (&focal.0, &focal.2) {
            (Some(xi), Some(trace)) => json!({
                "xi": json_vec(xi),
                "xi_norm_sq": rat_str(&datum.gram_norm_sq(xi)),
                "spectrum": serde_json::to_value(&focal.1).expect("spectra serialize"),
                "trace": rat_str(trace),
            }),
            _ => json!({
                "symbolic": true,
                "spectrum": serde_json::to_value(&focal.1).expect("spectra serialize"),
            }),
        };
        let cmc_json = match &tube {
            Some((_, cmc, t)) => json!({
                "formula": "-(codim - 1)/t",
                "codim": b.codim(),
                "radial_directions": radial_count,
                "t": rat_str(t),
                "value": rat_str(cmc),
            }),
            None => json!({
                "formula": "-(codim - 1)/t",
                "codim": b.codim(),
                "radial_directions": radial_count,
            }),
        };
        let tube_json = match &tube {
            Some((spectrum, cmc, t)) => json!({
                "t": rat_str(t),
                "spectrum": serde_json::to_value(spectrum).expect("spectra serialize"),
                "trace": rat_str(cmc),
            }),
            None => Value::Null,
        };
        let constancy_json = match &constancy {
            Some(c) => json!({
                "constant": c.constant,
                "codim_one_degenerate": c.codim_one_degenerate,
                "witness": c
                    .witness
                    .as_ref()
                    .map(|w| inhomogeneity_json(&datum, w))
                    .unwrap_or(Value::Null),
            }),
            None => Value::Null,
        };
        let cpc_json = match &cpc {
            Some((value, witness)) => json!({
                "value": value,
                "witness": witness
                    .as_ref()
                    .map(|w| inhomogeneity_json(&datum, w))
                    .unwrap_or(Value::Null),
            }),
            None => Value::Null,
        };
        let payload = json!({
            "space": {
                "label": datum.label(),
                "rank": datum.rank,
                "ambient_dim": datum.ambient_dim,
            },
            "subspace": {
                "basis": json_mat_rows(&b.basis().row_vecs()),
                "dim": b.dim(),
                "codim": b.codim(),
            },
            "minimal": minimal,
            "mean_curvature_vector": json_vec(&mean_curvature),
            "austere": austere,
            "austere_witness": austere_witness
                .as_ref()
                .map(|w| serde_json::to_value(w).expect("witnesses serialize"))
                .unwrap_or(Value::Null),
            "focal": focal_json,
            "cmc_per_radius": cmc_json,
            "tube": tube_json,
            "curvature_constancy": constancy_json,
            "cpc": cpc_json,
        });
        Ok((Rendered::Json(wrap("analyze", payload)), EXIT_OK))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "space: {}  rank {}  ambient dim {}", datum.label(), datum.rank, datum.ambient_dim);
        let _ = writeln!(s, "subspace: dim {}  codim {}", b.dim(), b.codim());
        for row in b.basis().row_vecs() {
            let _ = writeln!(s, "  basis {}", fmt_vec(&row));
        }
        let _ = writeln!(s, "minimal: {minimal}");
        let _ = writeln!(s, "mean curvature vector: {}", fmt_vec(&mean_curvature));
        match &austere_witness {
            Some(w) => {
                let pairs: Vec<String> =
                    w.pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
                let _ = writeln!(s, "austere: true  pairing: {}", pairs.join(" "));
            }
            None => {
                let _ = writeln!(s, "austere: {austere}");
            }
        }
        match (&focal.0, &focal.2) {
            (Some(xi), Some(trace)) => {
                let _ = writeln!(
                    s,
                    "focal spectrum at xi = {} (|xi|^2 = {}): {}  trace {}",
                    fmt_vec(xi),
                    datum.gram_norm_sq(xi),
                    fmt_spectrum(&focal.1),
                    trace
                );
            }
            _ => {
                let _ = writeln!(s, "focal spectrum (symbolic): {}", fmt_spectrum(&focal.1));
            }
        }
        let _ = writeln!(
            s,
            "tube mean curvature: -(codim - 1)/t with codim = {} so -{}/t",
            b.codim(),
            radial_count
        );
        if let Some((spectrum, cmc, t)) = &tube {
            let _ = writeln!(
                s,
                "tube at t = {}: {}  trace {} = -({} - 1)/({})",
                t,
                fmt_spectrum(spectrum),
                cmc,
                b.codim(),
                t
            );
        }
        match &constancy {
            Some(c) if c.codim_one_degenerate => {
                let _ = writeln!(
                    s,
                    "principal curvatures constant: true (codimension one: the only unit normals are opposite, so constancy is automatic)"
                );
            }
            Some(c) => {
                let _ = writeln!(s, "principal curvatures constant: {}", c.constant);
                if let Some(w) = &c.witness {
                    let _ = writeln!(s, "  witness: {}", inhomogeneity_text(&datum, w));
                }
            }
            None => {
                let _ = writeln!(s, "principal curvatures constant: not applicable (the subspace is the whole flat)");
            }
        }
        if let Some((value, witness)) = &cpc {
            let _ = writeln!(s, "cpc: {value}");
            if let Some(w) = witness {
                let _ = writeln!(s, "  witness: {}", inhomogeneity_text(&datum, w));
            }
        }
        Ok((Rendered::Text(s), EXIT_OK))
    }
}

fn cmd_austere_search(a: &AustereSearchArgs, json: bool) -> Result<(Rendered, i32), CliError> {
    let spec = load_spec(&a.source)?;
    let cfg = SampleConfig {
        seed: a.seed,
        count: a.count,
        coeff_bound: a.coeff_bound,
        codim: a.codim,
    };
    let report = austere_search(&spec, &cfg, a.require_minimal)?;
    if json {
        let payload = serde_json::to_value(&report).expect("reports serialize");
        Ok((Rendered::Json(wrap("austere-search", payload)), EXIT_OK))
    } else {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "space: {}  codim {}  samples {}  seed {}  require-minimal {}",
            report.label, cfg.codim, report.sampled, cfg.seed, report.require_minimal
        );
        let _ = writeln!(s, "rejected degenerate draws: {}", report.rejected_draws);
        let _ = writeln!(
            s,
            "austere hits: {} ({} up to congruence)",
            report.hits.len(),
            report.distinct_classes
        );
        for hit in &report.hits {
            let rows: Vec<String> =
                hit.basis.iter().map(|r| format!("({})", r.join(", "))).collect();
            let pairs: Vec<String> =
                hit.pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
            let _ = writeln!(
                s,
                "  span{{{}}}  minimal {}  pairing {}",
                rows.join(", "),
                hit.minimal,
                pairs.join(" ")
            );
        }
        Ok((Rendered::Text(s), EXIT_OK))
    }
}

fn cmd_congruence(a: &CongruenceArgs, json: bool) -> Result<(Rendered, i32), CliError> {
    let spec = load_spec(&a.source)?;
    let datum = Arc::new(RootDatum::build(&spec)?);
    let b1 = load_subspace(&datum, &a.b1)?;
    let b2 = load_subspace(&datum, &a.b2)?;
    let group = automorphism_group(&datum);
    let witness = are_congruent(&b1, &b2)?;
    if json {
        let payload = json!({
            "label": datum.label(),
            "b1": json_mat_rows(&b1.basis().row_vecs()),
            "b2": json_mat_rows(&b2.basis().row_vecs()),
            "congruent": witness.is_some(),
            "witness": witness.as_ref().map(isometry_json).unwrap_or(Value::Null),
            "symmetry_group_order": group.len(),
        });
        Ok((Rendered::Json(wrap("congruence", payload)), EXIT_OK))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "space: {}  symmetry group order {}", datum.label(), group.len());
        let _ = writeln!(s, "b1: dim {}", b1.dim());
        let _ = writeln!(s, "b2: dim {}", b2.dim());
        match &witness {
            Some(w) => {
                let _ = writeln!(s, "congruent: true");
                let _ = writeln!(s, "witness root permutation: {:?}", w.root_permutation);
                let _ = writeln!(s, "witness factor permutation: {:?}", w.factor_permutation);
                for row in w.matrix.row_vecs() {
                    let _ = writeln!(s, "  matrix row {}", fmt_vec(&row));
                }
            }
            None => {
                let _ = writeln!(s, "congruent: false");
            }
        }
        Ok((Rendered::Text(s), EXIT_OK))
    }
}

fn cmd_verify_collinear(a: &VerifyCollinearArgs, json: bool) -> Result<(Rendered, i32), CliError> {
    let report = verify_collinear_all(a.max_rank, a.reducible, a.mult_passes, a.seed)?;
    let code = if report.failures == 0 { EXIT_OK } else { EXIT_FAILURE };
    if json {
        let payload = serde_json::to_value(&report).expect("reports serialize");
        Ok((Rendered::Json(wrap("verify-collinear", payload)), code))
    } else {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "sweep: max rank {}  reducible {}  random mult passes {}  seed {}",
            report.max_rank, report.include_reducible, report.random_mult_passes, report.seed
        );
        for case in &report.cases {
            let status = match &case.status {
                CollinearStatus::Witness { root, hvec } => {
                    format!("witness root {root} -> ({})", hvec.join(", "))
                }
                CollinearStatus::BelowRank { witness } => match witness {
                    Some(root) => format!("rank below 3; witness root {root} anyway"),
                    None => "rank below 3; no witness (not required)".to_string(),
                },
                CollinearStatus::Failure => "FAILURE: no witness root".to_string(),
            };
            let note = case.note.as_deref().map(|n| format!("  [{n}]")).unwrap_or_default();
            let _ = writeln!(s, "  {:<28} {status}{note}", case.label);
        }
        let _ = writeln!(s, "cases: {}  failures: {}", report.cases.len(), report.failures);
        Ok((Rendered::Text(s), code))
    }
}

fn cmd_genericity(a: &GenericityArgs, json: bool) -> Result<(Rendered, i32), CliError> {
    let spec = load_spec(&a.source)?;
    let cfg = SampleConfig {
        seed: a.seed,
        count: a.count,
        coeff_bound: a.coeff_bound,
        codim: a.codim,
    };
    let report = genericity_experiment(&spec, &cfg)?;
    // every sample contains the half-sum vector, so minimality must be unanimous
    let code = if report.minimal_count == report.sampled { EXIT_OK } else { EXIT_FAILURE };
    if json {
        let payload = serde_json::to_value(&report).expect("reports serialize");
        Ok((Rendered::Json(wrap("genericity", payload)), code))
    } else {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "space: {}  codim {}  samples {}  seed {}  coefficient bound {}",
            report.label, cfg.codim, report.sampled, cfg.seed, cfg.coeff_bound
        );
        let _ = writeln!(s, "rejected degenerate draws: {}", report.rejected_draws);
        let _ = writeln!(s, "minimal: {} of {}", report.minimal_count, report.sampled);
        let _ = writeln!(s, "austere: {} of {}", report.austere_count, report.sampled);
        for basis in &report.austere_examples {
            let rows: Vec<String> = basis.iter().map(|r| format!("({})", r.join(", "))).collect();
            let _ = writeln!(s, "  austere sample: span{{{}}}", rows.join(", "));
        }
        Ok((Rendered::Text(s), code))
    }
}

fn cmd_fixtures(json: bool) -> Result<(Rendered, i32), CliError> {
    let report = reference_fixtures();
    let code = if report.passed() { EXIT_OK } else { EXIT_FAILURE };
    if json {
        let payload = serde_json::to_value(&report).expect("reports serialize");
        Ok((Rendered::Json(wrap("fixtures", payload)), code))
    } else {
        let mut s = String::new();
        for check in &report.checks {
            let _ = writeln!(
                s,
                "  {} {:<32} {}",
                if check.passed { "pass" } else { "FAIL" },
                check.name,
                check.detail
            );
        }
        let _ = writeln!(s, "fixtures: {}", if report.passed() { "all passed" } else { "FAILED" });
        Ok((Rendered::Text(s), code))
    }
}
