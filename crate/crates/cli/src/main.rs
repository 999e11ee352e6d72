use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use eqlift_core::certifier::{
    certify, make_tight_rotation, max_coprime_subset, CertifyError, CertifyOptions, Verdict, MAX_ORBIT_CAP,
};
use eqlift_core::complex::{validate_action, verify_pl_embedding, ComplexKind, VertexAction};
use eqlift_core::forge::{counterexample_pipeline, forge_surface, hurwitz_dimension, orbit_audit, MAX_FORGE_L};
use eqlift_core::format::{
    decode_action, decode_witnesses, encode_witnesses, load_complex, parse_json, read_bytes, to_json_string,
    to_off, write_json, ActionBlock, ComplexFile, FormatError, GroupFile, MatrixFile, RepFile, RepRef,
    WitnessEntry,
};
use eqlift_core::group::{make_cyclic, validate_table};
use eqlift_core::lifter::{verify_equivariance, LiftedEmbedding, DEFAULT_DIMENSION_CAP};
use eqlift_core::manifest::RunManifest;
use eqlift_core::pipeline::{pipeline_lower, pipeline_roundtrip, pipeline_upper, UpperOptions};

/// Equivariant embeddings of simplicial complexes: lifts, lower-bound
/// certificates and branched-cover surfaces.
///
/// Exit status: 0 when every verification passes, 1 when one fails, 2 on
/// input errors.
#[derive(Debug, Parser)]
#[command(name = "eqlift", version)]
struct Cli {
    /// Print a short human-readable summary instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// Tolerance for floating comparisons.
    #[arg(long, global = true, env = "EQLIFT_TOL", default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Group multiplication tables.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Simplicial complexes and their actions.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Equivariant lift of an embedded complex with an action.
    Lift(LiftCmd),
    /// Lower-bound certificates for cyclic actions.
    #[command(subcommand)]
    Certify(CertifyCmd),
    /// Branched-cover surfaces and the Hurwitz dimension.
    #[command(subcommand)]
    Forge(ForgeCmd),
    /// End-to-end runs.
    #[command(subcommand)]
    Pipeline(PipelineCmd),
}

#[derive(Debug, Subcommand)]
enum GroupCmd {
    /// Check the group axioms for a table file.
    Validate { file: PathBuf },
    /// Write the table of the cyclic group of order n.
    Cyclic {
        n: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum ComplexCmd {
    /// Check structure, coordinates and the attached action.
    Validate { file: PathBuf },
    /// Print V, E, F and the Euler characteristic.
    Euler { file: PathBuf },
    /// Export as OFF (floating point; canonical coordinates if none given).
    Off {
        file: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
struct LiftCmd {
    #[command(subcommand)]
    sub: Option<LiftSub>,
    /// Complex file with coordinates and an action block.
    #[arg(long)]
    complex: Option<PathBuf>,
    /// Output complex file; the representation goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append the determinant coordinate even if not needed.
    #[arg(long)]
    force_extend: bool,
    /// Largest allowed lifted dimension.
    #[arg(long, default_value_t = DEFAULT_DIMENSION_CAP)]
    cap: usize,
}

#[derive(Debug, Subcommand)]
enum LiftSub {
    /// Re-check equivariance and the PL embedding of a lifted complex file.
    Verify {
        #[arg(long)]
        lift: PathBuf,
    },
    /// Export the dense matrix of one group element as exact rationals.
    Matrix {
        #[arg(long)]
        lift: PathBuf,
        /// 1-based group label.
        #[arg(long)]
        element: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum CertifyCmd {
    /// Largest pairwise coprime subset of orbit lengths and the bound 2l.
    Bound {
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<u64>,
    },
    /// Certify m >= 2s for an orthogonal matrix and orbit witnesses.
    Matrix {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        witnesses: PathBuf,
        /// Audit this ambient dimension instead of the matrix size.
        #[arg(long)]
        claim_dim: Option<usize>,
        /// Orbit search cap (default: lcm of the claimed lengths).
        #[arg(long)]
        cap: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write a block rotation in SO(2s) realizing pairwise coprime lengths.
    Tight {
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        #[arg(long)]
        matrix_out: PathBuf,
        #[arg(long)]
        witnesses_out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum ForgeCmd {
    /// Build the surface for l and write it as a complex file.
    Surface {
        #[arg(long)]
        l: usize,
        #[arg(short, long)]
        out: PathBuf,
        /// Include canonical simplex coordinates.
        #[arg(long)]
        coords: bool,
    },
    /// Print 252(g-1)+1.
    Hurwitz {
        #[arg(long)]
        genus: u64,
    },
    /// Show that no equivariant embedding into R^m exists for a forged surface.
    Counterexample {
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Subcommand)]
enum PipelineCmd {
    /// Lift, extend and verify a complex with an action.
    Upper {
        #[arg(long)]
        complex: PathBuf,
        /// Action file replacing the one in the complex file.
        #[arg(long)]
        action: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_DIMENSION_CAP)]
        cap: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Counterexample statement for m.
    Lower {
        #[arg(long)]
        m: usize,
    },
    /// Forge, lift canonical coordinates, and compare with the bound 2l.
    Roundtrip {
        #[arg(long)]
        l: usize,
        /// Skip the PL embedding check on the lift.
        #[arg(long)]
        skip_embedding: bool,
    },
}

/// Result of a command that ran to completion.
struct Outcome {
    passed: bool,
    json: Value,
    human: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, json: Value, human: Vec<String>) -> Self {
        Outcome { passed, json, human }
    }
}

fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.human {
                for line in &out.human {
                    println!("{line}");
                }
            } else {
                print!("{}", to_json_string(&out.json));
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        bail!("tolerance must be a positive finite number, got {}", cli.tol);
    }
    match &cli.command {
        Command::Group(cmd) => group(cmd),
        Command::Complex(cmd) => complex(cmd),
        Command::Lift(cmd) => lift(cmd, cli.tol),
        Command::Certify(cmd) => certify_cmd(cmd, cli.tol),
        Command::Forge(cmd) => forge(cmd, cli.tol),
        Command::Pipeline(cmd) => pipeline(cmd, cli.tol),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn group(cmd: &GroupCmd) -> Result<Outcome> {
    match cmd {
        GroupCmd::Validate { file } => {
            let g: GroupFile = parse_json(file, &read_bytes(file)?)?;
            let report = validate_table(&g.table);
            let passed = report.passed() && g.order == g.table.len();
            let mut human = vec![format!("group of order {}: {}", g.order, status(passed))];
            for (name, c) in [
                ("shape", &report.shape),
                ("latin square", &report.latin_square),
                ("identity", &report.identity),
                ("associativity", &report.associativity),
                ("inverses", &report.inverses),
            ] {
                human.push(format!("  {name}: {}{}", status(c.passed), c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()));
            }
            let mut json = to_value(&report);
            json["passed"] = json!(passed);
            Ok(Outcome::new(passed, json, human))
        }
        GroupCmd::Cyclic { n, out } => {
            let t = make_cyclic(*n)?;
            write_json(out, &GroupFile::from_table(&t))?;
            Ok(Outcome::new(
                true,
                json!({"order": n, "out": out.display().to_string()}),
                vec![format!("wrote Z_{n} to {}", out.display())],
            ))
        }
    }
}

/// Structural complex errors are verification failures; anything that
/// stops the file from being read is an input error.
fn is_input_error(e: &FormatError) -> bool {
    matches!(e, FormatError::Io { .. } | FormatError::Json { .. } | FormatError::Rational(_))
}

fn complex(cmd: &ComplexCmd) -> Result<Outcome> {
    match cmd {
        ComplexCmd::Validate { file } => {
            let loaded = match load_complex(file) {
                Ok(l) => l,
                Err(e) if is_input_error(&e) => return Err(e.into()),
                Err(e) => {
                    return Ok(Outcome::new(
                        false,
                        json!({"valid": false, "error": e.to_string()}),
                        vec![format!("invalid complex: {e}")],
                    ))
                }
            };
            let c = &loaded.complex;
            let surface = c.check_closed_surface();
            let orientable = surface.is_ok() && c.orient().is_some();
            let embedding = loaded.embedded.as_ref().map(verify_pl_embedding);
            let action = loaded.action.as_ref().map(|a| validate_action(c, a));
            let passed = embedding.as_ref().is_none_or(|r| r.passed())
                && action.as_ref().is_none_or(|r| r.passed())
                && (loaded.kind != ComplexKind::Surface || surface.is_ok());
            let json = json!({
                "valid": passed,
                "vertex_count": c.vertex_count(),
                "edges": c.edges().len(),
                "triangles": c.triangles().len(),
                "euler_characteristic": c.euler_characteristic(),
                "connected": c.is_connected(),
                "closed_surface": surface.is_ok(),
                "orientable": orientable,
                "dim": loaded.embedded.as_ref().map(|e| e.dim()),
                "embedding": embedding,
                "action": action,
            });
            let mut human = vec![
                format!("complex: {}", status(passed)),
                format!(
                    "  V={} E={} F={} chi={}",
                    c.vertex_count(),
                    c.edges().len(),
                    c.triangles().len(),
                    c.euler_characteristic()
                ),
                format!("  closed surface: {}, orientable: {}", surface.is_ok(), orientable),
            ];
            if let Some(r) = &embedding {
                human.push(format!("  PL embedding: {} ({:?}, {} pairs)", status(r.passed()), r.method, r.pairs_checked));
                human.extend(r.failures.iter().map(|f| format!("    {f}")));
            }
            if let Some(r) = &action {
                human.push(format!("  action: {}", status(r.passed())));
            }
            Ok(Outcome::new(passed, json, human))
        }
        ComplexCmd::Euler { file } => {
            let loaded = load_complex(file)?;
            let c = &loaded.complex;
            let (v, e, f) = (c.vertex_count(), c.edges().len(), c.triangles().len());
            let chi = c.euler_characteristic();
            Ok(Outcome::new(
                true,
                json!({"V": v, "E": e, "F": f, "chi": chi}),
                vec![format!("V - E + F = {v} - {e} + {f} = {chi}")],
            ))
        }
        ComplexCmd::Off { file, out } => {
            let loaded = load_complex(file)?;
            let e = loaded.embedded_or_canonical();
            std::fs::write(out, to_off(&e)).with_context(|| format!("writing {}", out.display()))?;
            Ok(Outcome::new(
                true,
                json!({"out": out.display().to_string(), "dim": e.dim()}),
                vec![format!("wrote OFF ({}-dimensional) to {}", e.dim(), out.display())],
            ))
        }
    }
}

fn rep_path_for(out: &Path) -> PathBuf {
    let stem = out.file_stem().map_or_else(|| "lift".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.rep.json"))
}

fn upper_human(r: &eqlift_core::pipeline::UpperReport) -> Vec<String> {
    let mut h = vec![
        format!("lift: {}", status(r.passed())),
        format!("  d={} |G|={} m={}{}", r.d, r.n, r.m, if r.extended { " (determinant coordinate appended)" } else { "" }),
        format!("  action: {}", status(r.action.passed())),
        format!(
            "  equivariance: {} ({} checks, {} failures)",
            status(r.equivariance.passed()),
            r.equivariance.checked,
            r.equivariance.failures.len()
        ),
    ];
    for c in [&r.action.homomorphism, &r.action.simplicial, &r.action.faithful] {
        if let Some(d) = &c.detail {
            h.push(format!("    {d}"));
        }
    }
    if let Some(e) = &r.embedding {
        h.push(format!("  PL embedding: {} ({:?})", status(e.passed()), e.method));
    }
    h
}

fn write_lift(out: &Path, lifted: &LiftedEmbedding, action: &VertexAction, manifest: RunManifest) -> Result<()> {
    let rep_path = rep_path_for(out);
    write_json(&rep_path, &RepFile::from_rep(lifted.rep()))?;
    let rep_name = rep_path.file_name().expect("file name").to_string_lossy().into_owned();
    let mut file = ComplexFile::embedded(lifted.complex()).with_action(action);
    file.representation = Some(RepRef::Path(rep_name));
    file.manifest = Some(manifest);
    write_json(out, &file)?;
    Ok(())
}

fn lift(cmd: &LiftCmd, tol: f64) -> Result<Outcome> {
    match &cmd.sub {
        Some(LiftSub::Verify { lift }) => {
            let loaded = load_complex(lift)?;
            let e = loaded.embedded.clone().ok_or_else(|| anyhow!("{} has no coordinates", lift.display()))?;
            let rep = loaded.representation.clone().ok_or_else(|| anyhow!("{} has no representation", lift.display()))?;
            let action = loaded.action.clone().ok_or_else(|| anyhow!("{} has no action block", lift.display()))?;
            if action.group() != rep.group() {
                bail!("action group and representation group differ");
            }
            let le = LiftedEmbedding::from_parts(e, rep)?;
            let action_report = validate_action(le.complex().complex(), &action);
            let eq = verify_equivariance(&le, &action);
            let emb = verify_pl_embedding(le.complex());
            let dets_ok = le.rep().group().elements().all(|g| le.rep().det(g) == 1);
            let passed = action_report.passed() && eq.passed() && emb.passed();
            let json = json!({
                "passed": passed,
                "m": le.dim(),
                "extended": le.rep().is_extended(),
                "special_orthogonal": dets_ok,
                "action": action_report,
                "equivariance": eq,
                "embedding": emb,
            });
            let human = vec![
                format!("lift verify: {}", status(passed)),
                format!("  m={} special orthogonal: {}", le.dim(), dets_ok),
                format!("  equivariance: {} ({} checks)", status(eq.passed()), eq.checked),
                format!("  PL embedding: {} ({:?})", status(emb.passed()), emb.method),
            ];
            Ok(Outcome::new(passed, json, human))
        }
        Some(LiftSub::Matrix { lift, element, out }) => {
            let loaded = load_complex(lift)?;
            let rep = loaded.representation.ok_or_else(|| anyhow!("{} has no representation", lift.display()))?;
            rep.group().check_label(*element)?;
            write_json(out, &MatrixFile::from_rep(&rep, *element))?;
            Ok(Outcome::new(
                true,
                json!({"element": element, "m": rep.dim(), "det": rep.det(*element), "out": out.display().to_string()}),
                vec![format!("wrote {}x{} matrix of element {element} to {}", rep.dim(), rep.dim(), out.display())],
            ))
        }
        None => {
            let complex = cmd.complex.as_ref().ok_or_else(|| anyhow!("--complex is required"))?;
            let out = cmd.out.as_ref().ok_or_else(|| anyhow!("--out is required"))?;
            let bytes = read_bytes(complex)?;
            let file: ComplexFile = parse_json(complex, &bytes)?;
            let loaded = file.resolve(complex.parent().unwrap_or(Path::new(".")))?;
            let e = loaded.embedded.clone().ok_or_else(|| anyhow!("{} has no coordinates", complex.display()))?;
            let action = loaded.action.clone().ok_or_else(|| anyhow!("{} has no action block", complex.display()))?;
            let opts = UpperOptions { cap: cmd.cap, force_extend: cmd.force_extend, verify_embedding: true };
            let (lifted, report) = pipeline_upper(&e, &action, opts)?;
            let mut manifest = RunManifest::new("lift", tol).with_cap("dimension", cmd.cap as u64);
            manifest.add_input(complex, &bytes);
            manifest.outcome = status(report.passed()).to_string();
            write_lift(out, &lifted, &action, manifest)?;
            let mut json = to_value(&report);
            json["passed"] = json!(report.passed());
            json["out"] = json!(out.display().to_string());
            json["representation"] = json!(rep_path_for(out).display().to_string());
            Ok(Outcome::new(report.passed(), json, upper_human(&report)))
        }
    }
}

fn certify_cmd(cmd: &CertifyCmd, tol: f64) -> Result<Outcome> {
    match cmd {
        CertifyCmd::Bound { lengths } => {
            let p = max_coprime_subset(lengths)?;
            let human = vec![format!("pairwise coprime lengths {:?}: l = {}, bound 2l = {}", p.chosen, p.l, p.bound)];
            Ok(Outcome::new(true, to_value(&p), human))
        }
        CertifyCmd::Matrix { matrix, witnesses, claim_dim, cap, out } => {
            let mbytes = read_bytes(matrix)?;
            let wbytes = read_bytes(witnesses)?;
            let op = parse_json::<MatrixFile>(matrix, &mbytes)?.to_operator()?;
            let ws = decode_witnesses(&parse_json::<Vec<WitnessEntry>>(witnesses, &wbytes)?)?;
            let opts = CertifyOptions { tol, cap: *cap, claimed_dim: *claim_dim };
            let mut manifest =
                RunManifest::new("certify matrix", tol).with_cap("orbit", cap.unwrap_or(MAX_ORBIT_CAP) as u64);
            manifest.add_input(matrix, &mbytes);
            manifest.add_input(witnesses, &wbytes);
            let cert = match certify(&op, &ws, opts) {
                Ok(c) => c,
                Err(e @ (CertifyError::Witness(_) | CertifyError::Spectral(_) | CertifyError::OrbitLength(_))) => {
                    return Ok(Outcome::new(
                        false,
                        json!({"certified": false, "error": e.to_string()}),
                        vec![format!("certificate: FAIL ({e})")],
                    ))
                }
                Err(e) => return Err(e.into()),
            };
            let passed = cert.verdict == Verdict::Consistent;
            manifest.outcome = format!("{:?}", cert.verdict);
            let mut json = to_value(&cert);
            json["bound"] = json!(cert.bound());
            json["manifest"] = to_value(&manifest);
            if let Some(out) = out {
                write_json(out, &json)?;
            }
            let verdict = match cert.verdict {
                Verdict::Consistent => "consistent".to_string(),
                Verdict::Contradiction(r) => format!("contradiction ({})", to_value(&r).as_str().unwrap_or("")),
            };
            let mut human = vec![
                format!("certificate: {verdict}"),
                format!("  m={} s={} bound 2s={}", cert.m, cert.s, cert.bound()),
            ];
            for r in &cert.records {
                human.push(format!(
                    "  w={}: eigenvalue exp(2 pi i {}/{}), |det(I+A+...+A^(w-1))| = {:.3e}",
                    r.w, r.root[0], r.root[1], r.det_residual
                ));
            }
            human.push(format!(
                "  dimension {} forces {} eigenvalues, product sign {:+}",
                cert.audit.claimed_dim, cert.audit.forced_eigenvalues, cert.audit.product_sign
            ));
            Ok(Outcome::new(passed, json, human))
        }
        CertifyCmd::Tight { lengths, matrix_out, witnesses_out } => {
            let t = make_tight_rotation(lengths)?;
            write_json(matrix_out, &MatrixFile::from_blocks(&t.blocks))?;
            write_json(witnesses_out, &encode_witnesses(&t.witnesses))?;
            Ok(Outcome::new(
                true,
                json!({"m": t.blocks.dim(), "lengths": lengths}),
                vec![format!("wrote SO({}) rotation and {} witnesses", t.blocks.dim(), lengths.len())],
            ))
        }
    }
}

fn forge(cmd: &ForgeCmd, tol: f64) -> Result<Outcome> {
    match cmd {
        ForgeCmd::Surface { l, out, coords } => {
            let s = forge_surface(*l)?;
            let audit = orbit_audit(&s);
            let mut file = if *coords {
                ComplexFile::embedded(&s.canonical_embedding())
            } else {
                ComplexFile::abstract_complex(&s.complex)
            }
            .with_kind(ComplexKind::Surface)
            .with_action(&s.deck);
            let meta = s.metadata();
            file.metadata = Some(to_value(&meta));
            let mut manifest = RunManifest::new(format!("forge surface --l {l}"), tol).with_cap("l", MAX_FORGE_L as u64);
            manifest.outcome = status(audit.passed()).to_string();
            file.manifest = Some(manifest);
            write_json(out, &file)?;
            let human = vec![
                format!("forged surface for l={l}: {}", status(audit.passed())),
                format!(
                    "  genus {} (chi {}), Z_{} deck action, V={} F={}",
                    meta.genus,
                    meta.chi,
                    meta.order,
                    s.complex.vertex_count(),
                    s.complex.triangles().len()
                ),
                format!(
                    "  cone fibers: {:?}",
                    audit.cone_fibers.iter().map(|c| c.fiber.len()).collect::<Vec<_>>()
                ),
            ];
            let json = json!({"metadata": meta, "vertex_count": s.complex.vertex_count(), "audit": audit, "out": out.display().to_string()});
            Ok(Outcome::new(audit.passed(), json, human))
        }
        ForgeCmd::Hurwitz { genus } => {
            let dim = hurwitz_dimension(*genus)?;
            Ok(Outcome::new(
                true,
                json!(dim),
                vec![format!("every finite group action on a genus-{genus} surface embeds equivariantly in R^{dim}")],
            ))
        }
        ForgeCmd::Counterexample { m } => {
            let (_, r) = counterexample_pipeline(*m)?;
            Ok(Outcome::new(r.holds(), to_value(&r), counterexample_human(&r)))
        }
    }
}

fn counterexample_human(r: &eqlift_core::forge::CounterexampleReport) -> Vec<String> {
    vec![
        format!(
            "genus-{} surface with Z_{} action: no equivariant embedding into R^{} (needs dimension >= {})",
            r.surface.genus, r.surface.order, r.m, r.bound
        ),
        format!("  coprime orbit lengths {:?}; audit {}", r.audit.profile.chosen, status(r.audit.passed())),
        format!("  statement: {}", status(r.holds())),
    ]
}

fn pipeline(cmd: &PipelineCmd, tol: f64) -> Result<Outcome> {
    match cmd {
        PipelineCmd::Upper { complex, action, cap, out } => {
            let bytes = read_bytes(complex)?;
            let file: ComplexFile = parse_json(complex, &bytes)?;
            let base = complex.parent().unwrap_or(Path::new("."));
            let loaded = file.resolve(base)?;
            let mut manifest = RunManifest::new("pipeline upper", tol).with_cap("dimension", *cap as u64);
            manifest.add_input(complex, &bytes);
            let a = match action {
                Some(p) => {
                    let abytes = read_bytes(p)?;
                    manifest.add_input(p, &abytes);
                    let block: ActionBlock = parse_json(p, &abytes)?;
                    decode_action(&block, p.parent().unwrap_or(Path::new(".")))?
                }
                None => loaded.action.clone().ok_or_else(|| anyhow!("no action block and no --action file"))?,
            };
            let e = loaded.embedded_or_canonical();
            let opts = UpperOptions { cap: *cap, ..Default::default() };
            let (lifted, report) = pipeline_upper(&e, &a, opts)?;
            manifest.outcome = status(report.passed()).to_string();
            if let Some(out) = out {
                write_lift(out, &lifted, &a, manifest)?;
            }
            let mut json = to_value(&report);
            json["passed"] = json!(report.passed());
            Ok(Outcome::new(report.passed(), json, upper_human(&report)))
        }
        PipelineCmd::Lower { m } => {
            let r = pipeline_lower(*m)?;
            Ok(Outcome::new(r.holds(), to_value(&r), counterexample_human(&r)))
        }
        PipelineCmd::Roundtrip { l, skip_embedding } => {
            let opts = UpperOptions { verify_embedding: !skip_embedding, ..Default::default() };
            let r = pipeline_roundtrip(*l, opts)?;
            let human = vec![
                format!("roundtrip l={l}: {}", status(r.passed())),
                format!("  genus {} surface, V={}, Z_{}", r.surface.genus, r.vertex_count, r.surface.order),
                format!("  lower bound 2l = {}, lifted dimension m = {}", r.lower_bound, r.lifted_dim),
            ];
            Ok(Outcome::new(r.passed(), to_value(&r), human))
        }
    }
}
