//! `mub-lab`: construct, verify, search and reproduce from the command line.

pub mod io;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use mub_core::constellation::{theorem2_pipeline, Theorem2Config};
use mub_core::constructions::{
    mu_basis_exact, pair_exact, pair_family, triple, triple_exact, BasisId, BasisLabel, Constellation554,
    PairChoice, PairFamily, ParamSet, ProductBasis, StateLabel, Triple,
};
use mub_core::linalg::{Mode, Scalar};
use mub_core::search::{search, Constraints, SearchConfig};
use mub_core::theorem1::{enumerate_c3_mu_to_zx, theorem1_pipeline, Theorem1Config};
use mub_core::verify::{validate_constellation, validate_mu_set, vector_mu_to_bases, MuReport, SetReport, Tolerance};
use serde::Serialize;

use crate::io::DataFile;
use crate::report::ReportDocument;

pub const THREADS_ENV: &str = "MUB_LAB_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{field}: {message}")]
    Schema { field: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] mub_core::Error),
}

#[derive(Debug, Parser)]
#[command(name = "mub-lab", version, about = "Mutually unbiased product bases in dimension six")]
struct Cli {
    /// Tolerance for every equality check.
    #[arg(long, global = true, default_value_t = mub_core::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Float)]
    mode: ModeArg,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Restart count for searches; each command has its own default.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Write the JSON report (or exported data) to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Float,
    Exact,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Float => Mode::Float,
            ModeArg::Exact => Mode::Exact,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an object and check its defining properties.
    Construct {
        #[command(subcommand)]
        target: Target,
    },
    /// Check the bases and states of a data file.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
    /// Multi-start search for vectors unbiased to a set of bases.
    Search {
        #[arg(long, value_enum, conflicts_with = "file")]
        target: Option<SearchTarget>,
        /// Use the bases of a data file as constraints.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-6)]
        cluster_threshold: f64,
        /// Fail unless exactly this many clusters are found.
        #[arg(long)]
        expect: Option<usize>,
    },
    /// Run one of the reproduction pipelines.
    Reproduce {
        #[command(subcommand)]
        what: Reproduce,
    },
    /// Write an object as a data file.
    Export {
        #[command(subcommand)]
        target: Target,
    },
}

#[derive(Debug, Clone, Subcommand)]
enum Target {
    /// A Heisenberg-Weyl eigenbasis.
    Basis {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_parser = parse_label)]
        label: BasisLabel,
    },
    /// One of the MU product triples.
    Triple {
        #[arg(value_enum)]
        which: TripleArg,
    },
    /// A representative of a family of MU product pairs.
    Pair {
        #[arg(value_enum)]
        family: FamilyArg,
        #[command(flatten)]
        params: Params,
    },
    /// Two product bases plus four product states, e.g.
    /// `--states 0_y:0_y,0_y:1_y,1_y:0_w,1_y:1_w`.
    Constellation {
        #[arg(long, default_value = "0_y:0_y,0_y:1_y,0_y:2_y,1_y:0_w")]
        states: String,
        /// Use P1 with these (xi, eta) instead of P0.
        #[arg(long, num_args = 2, value_names = ["XI", "ETA"])]
        p1: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, clap::Args)]
struct Params {
    #[arg(long, default_value_t = 0.0)]
    xi: f64,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    #[arg(long, default_value_t = 0.0)]
    zeta: f64,
    #[arg(long, default_value_t = 0.0)]
    chi: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    sigma: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    tau: f64,
}

impl From<&Params> for ParamSet {
    fn from(p: &Params) -> Self {
        ParamSet {
            xi: p.xi,
            eta: p.eta,
            zeta: p.zeta,
            chi: p.chi,
            sigma: p.sigma,
            tau: p.tau,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TripleArg {
    #[value(name = "T0", alias = "t0")]
    T0,
    #[value(name = "T1", alias = "t1")]
    T1,
}

impl From<TripleArg> for Triple {
    fn from(t: TripleArg) -> Self {
        match t {
            TripleArg::T0 => Triple::T0,
            TripleArg::T1 => Triple::T1,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "P0", alias = "p0")]
    P0,
    #[value(name = "P1", alias = "p1")]
    P1,
    #[value(name = "P2", alias = "p2")]
    P2,
    #[value(name = "P3", alias = "p3")]
    P3,
}

impl From<FamilyArg> for PairFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::P0 => PairFamily::P0,
            FamilyArg::P1 => PairFamily::P1,
            FamilyArg::P2 => PairFamily::P2,
            FamilyArg::P3 => PairFamily::P3,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SearchTarget {
    #[value(name = "T0", alias = "t0")]
    T0,
    #[value(name = "T1", alias = "t1")]
    T1,
    #[value(name = "P0", alias = "p0")]
    P0,
    #[value(name = "P2", alias = "p2")]
    P2,
}

#[derive(Debug, Subcommand)]
enum Reproduce {
    /// No vector is unbiased to a product triple.
    Theorem1 {
        #[arg(long, value_enum, default_value = "T0")]
        triple: TripleArg,
        #[arg(long, default_value_t = 720)]
        resolution: usize,
        #[arg(long, num_args = 2, value_names = ["THETA", "PHI"], default_values_t = [181, 360])]
        scan: Vec<usize>,
    },
    /// The {5,5,4} constellation extends only by product states.
    Theorem2 {
        #[arg(long, default_value_t = 360)]
        grid: usize,
        /// Also run the triple pipelines that close the argument.
        #[arg(long)]
        with_triples: bool,
    },
    /// Exactly 48 vectors are unbiased to P0.
    Grassl48 {
        #[arg(long, default_value_t = 1e-6)]
        cluster_threshold: f64,
    },
    /// Exactly six vectors of C3 are unbiased to B_z and B_x.
    C3six {
        #[arg(long, default_value_t = 720)]
        resolution: usize,
    },
}

fn parse_label(s: &str) -> Result<BasisLabel, String> {
    BasisLabel::parse(s).ok_or_else(|| format!("unknown basis label {s:?}; expected z, x, y or w"))
}

/// Outcome of one command before printing.
struct Outcome {
    payload: serde_json::Value,
    summary: Vec<String>,
    verdict: String,
    success: bool,
    /// Data file to write instead of the report, for `export`.
    data: Option<DataFile>,
}

impl Outcome {
    fn new(payload: impl Serialize, summary: Vec<String>, verdict: impl Into<String>, success: bool) -> Self {
        Self {
            payload: serde_json::to_value(payload).expect("payloads serialize"),
            summary,
            verdict: verdict.into(),
            success,
            data: None,
        }
    }
}

struct Context {
    tol: Tolerance,
    mode: Mode,
    seed: u64,
    restarts: Option<usize>,
    verbose: bool,
}

/// Parse `argv` (including the program name), run the command and return
/// the exit code: 0 on the expected verdict, 1 on a failed check, 2 on
/// invalid input.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, &echo) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    // a pool built earlier in the same process stays in place
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn execute(cli: &Cli, echo: &[String]) -> Result<i32, CliError> {
    configure_threads()?;
    let ctx = Context {
        tol: Tolerance::new(cli.tol)?,
        mode: cli.mode.into(),
        seed: cli.seed,
        restarts: cli.restarts,
        verbose: cli.verbose,
    };
    let outcome = match &cli.command {
        Command::Construct { target } => construct(&ctx, target)?,
        Command::Export { target } => export(&ctx, target)?,
        Command::Verify { file } => verify(&ctx, file)?,
        Command::Search {
            target,
            file,
            cluster_threshold,
            expect,
        } => run_search(&ctx, *target, file.as_ref(), *cluster_threshold, *expect)?,
        Command::Reproduce { what } => reproduce(&ctx, what)?,
    };

    let doc = ReportDocument::new(echo, ctx.seed, ctx.mode, &outcome.payload, &outcome.verdict, outcome.success);
    if let Some(data) = &outcome.data {
        match &cli.out {
            Some(path) => {
                io::write(path, &data.to_json())?;
                println!("wrote {}", path.display());
            }
            None => println!("{}", data.to_json()),
        }
        return Ok(0);
    }
    if let Some(path) = &cli.out {
        io::write(path, &doc.to_json())?;
    }
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    if cli.json {
        let _ = writeln!(w, "{}", doc.to_json());
    } else {
        for line in &outcome.summary {
            let _ = writeln!(w, "{line}");
        }
        let _ = writeln!(w, "verdict: {}", outcome.verdict);
    }
    Ok(if outcome.success { 0 } else { 1 })
}

fn product_labels(pb: &ProductBasis) -> Vec<String> {
    pb.columns
        .iter()
        .map(|c| {
            let q = c.qubit_label.map_or("·".to_string(), |l| l.to_string());
            let t = c.qutrit_label.map_or("·".to_string(), |l| l.to_string());
            format!("{q},{t}")
        })
        .collect()
}

/// The data file for a target, with exact coordinates when they exist.
fn build_file(ctx: &Context, target: &Target) -> Result<DataFile, CliError> {
    let no_exact = |what: &str| -> Result<DataFile, CliError> {
        Err(CliError::Usage(format!("{what} has no exact form; use --mode float")))
    };
    match target {
        Target::Basis { dim, label } => {
            let id = BasisId::new(*dim, *label)?;
            let exact = mu_basis_exact(id);
            let mut f = DataFile::new(*dim).with_name(format!("B_{}", label.as_char()));
            let labels = (0..*dim).map(|k| id.state(k).to_string()).collect();
            f.push_basis(&exact, Some(labels));
            f.attach_exact(&[exact], &[]);
            Ok(f)
        }
        Target::Triple { which } => {
            let exact = triple_exact((*which).into());
            let mut f = DataFile::new(6).with_name(format!("{:?}", Triple::from(*which)));
            for pb in &exact {
                f.push_basis(&pb.basis(), Some(product_labels(&pb.to_float())));
            }
            f.attach_exact(&exact.map(|b| b.basis()), &[]);
            Ok(f)
        }
        Target::Pair { family, params } => {
            let fam: PairFamily = (*family).into();
            let pair = pair_family(fam, &params.into())?;
            let mut f = DataFile::new(6).with_name(format!("{fam:?}"));
            for pb in &pair {
                f.push_basis(&pb.basis(), Some(product_labels(pb)));
            }
            match pair_exact(fam) {
                Ok(exact) => f.attach_exact(&exact.map(|b| b.basis()), &[]),
                Err(_) if ctx.mode == Mode::Exact => return no_exact(&format!("{fam:?}")),
                Err(_) => {}
            }
            Ok(f)
        }
        Target::Constellation { states, p1 } => {
            if ctx.mode == Mode::Exact {
                return no_exact("the constellation export");
            }
            let c = constellation(states, p1.as_deref())?;
            let mut f = DataFile::new(6).with_name(format!("{:?}", c.shape));
            for pb in &c.pair {
                f.push_basis(&pb.basis(), Some(product_labels(pb)));
            }
            for col in &c.extra {
                f.push_state(&col.state);
            }
            Ok(f)
        }
    }
}

fn constellation(states: &str, p1: Option<&[f64]>) -> Result<Constellation554, CliError> {
    let pair = match p1 {
        Some([xi, eta]) => PairChoice::P1 { xi: *xi, eta: *eta },
        Some(_) => return Err(CliError::Usage("--p1 takes two values".into())),
        None => PairChoice::P0,
    };
    let parsed = states
        .split(',')
        .map(|s| {
            let (q, t) = s
                .trim()
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("state {s:?} is not of the form QUBIT:QUTRIT")))?;
            Ok((StateLabel::parse(q, 2)?, StateLabel::parse(t, 3)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Constellation554::from_states(pair, &parsed)?)
}

fn export(ctx: &Context, target: &Target) -> Result<Outcome, CliError> {
    let data = build_file(ctx, target)?;
    let mut o = Outcome::new(serde_json::Value::Null, Vec::new(), "exported", true);
    o.data = Some(data);
    Ok(o)
}

fn set_summary(report: &SetReport) -> Vec<String> {
    let mut lines = Vec::new();
    for (k, r) in report.orthonormality.iter().enumerate() {
        lines.push(format!(
            "basis {k}: orthonormal {} (deviation {:.3e}){}",
            r.pass,
            r.worst_deviation,
            offender_note(r, Some((k, k)))
        ));
    }
    for (i, j, r) in &report.unbiasedness {
        lines.push(format!(
            "bases {i} and {j}: unbiased {} (deviation {:.3e}){}",
            r.pass,
            r.worst_deviation,
            offender_note(r, Some((*i, *j)))
        ));
    }
    lines
}

/// Name the worst condition of a failing report. `bases` maps the report's
/// local basis numbering onto file indices.
fn offender_note(r: &MuReport, bases: Option<(usize, usize)>) -> String {
    if r.pass {
        return String::new();
    }
    let Some(o) = r.offender else {
        return String::new();
    };
    let (b0, b1) = bases.unwrap_or((o.first.0, o.second.map_or(0, |s| s.0)));
    let pick = |local: usize| if local == 0 { b0 } else { b1 };
    match o.second {
        Some(s) => format!(
            "; worst pair: basis {} column {} / basis {} column {}",
            pick(o.first.0),
            o.first.1,
            pick(s.0),
            s.1
        ),
        None => format!("; worst: basis {} column {}", o.first.0, o.first.1),
    }
}

fn verify_set<S: Scalar>(
    bases: &[mub_core::constructions::Basis<S>],
    states: &[mub_core::linalg::StateVector<S>],
    tol: Tolerance,
) -> Result<(SetReport, Vec<MuReport>), CliError> {
    let set = validate_mu_set(bases, tol)?;
    let states = states
        .iter()
        .map(|s| vector_mu_to_bases(s, bases, tol))
        .collect::<mub_core::Result<Vec<_>>>()?;
    Ok((set, states))
}

#[derive(Serialize)]
struct VerifyPayload {
    file: String,
    set: SetReport,
    states: Vec<MuReport>,
}

fn verify(ctx: &Context, path: &PathBuf) -> Result<Outcome, CliError> {
    let file = io::import(path)?;
    let (set, states) = match ctx.mode {
        Mode::Float => verify_set(&file.float_bases(), &file.float_states(), ctx.tol)?,
        Mode::Exact => {
            let (b, s) = file.exact_objects().ok_or_else(|| CliError::Schema {
                field: format!("{}: metadata.exact", path.display()),
                message: "exact mode needs exact coordinates".into(),
            })?;
            verify_set(&b, &s, ctx.tol)?
        }
    };
    let mut summary = vec![format!(
        "{}: {} bases, {} states, dim {}, mode {}",
        path.display(),
        file.bases.len(),
        file.states.len(),
        file.dim,
        ctx.mode
    )];
    summary.extend(set_summary(&set));
    for (k, r) in states.iter().enumerate() {
        summary.push(format!(
            "state {k}: unbiased to every basis {} (deviation {:.3e}){}",
            r.pass,
            r.worst_deviation,
            offender_note(r, None)
        ));
    }
    let pass = set.pass && states.iter().all(|r| r.pass);
    let verdict = if pass {
        "valid".to_string()
    } else {
        format!("invalid (worst deviation {:.3e})", set.worst_deviation.max(states.iter().map(|r| r.worst_deviation).fold(0.0, f64::max)))
    };
    let payload = VerifyPayload {
        file: path.display().to_string(),
        set,
        states,
    };
    Ok(Outcome::new(payload, summary, verdict, pass))
}

fn construct(ctx: &Context, target: &Target) -> Result<Outcome, CliError> {
    let file = build_file(ctx, target)?;
    let (set, _) = match ctx.mode {
        Mode::Exact => {
            let (b, s) = file
                .exact_objects()
                .ok_or_else(|| CliError::Usage("no exact form; use --mode float".into()))?;
            verify_set(&b, &s, ctx.tol)?
        }
        Mode::Float => verify_set(&file.float_bases(), &file.float_states(), ctx.tol)?,
    };
    let mut summary = vec![format!(
        "{}: {} bases in dimension {}, mode {}",
        file.metadata.name.as_deref().unwrap_or("object"),
        file.bases.len(),
        file.dim,
        ctx.mode
    )];
    if ctx.verbose {
        for (k, labels) in file.metadata.labels.iter().enumerate() {
            summary.push(format!("basis {k}: {}", labels.join("  ")));
        }
    }
    summary.extend(set_summary(&set));
    let mut pass = set.pass;
    let mut verdict = match (file.bases.len(), pass) {
        (1, true) => "orthonormal basis".to_string(),
        (_, true) => "pairwise mutually unbiased".to_string(),
        _ => "not mutually unbiased".to_string(),
    };
    if let Target::Constellation { states, p1 } = target {
        let c = constellation(states, p1.as_deref())?;
        let r = validate_constellation(&c, ctx.tol)?;
        summary.push(format!(
            "shape {:?}: orthogonality deviation {:.3e}, unbiasedness deviation {:.3e}",
            c.shape, r.orthogonality.worst_deviation, r.unbiasedness.worst_deviation
        ));
        pass = r.pass;
        verdict = if r.pass { "valid constellation" } else { "invalid constellation" }.to_string();
    }
    Ok(Outcome::new(&file, summary, verdict, pass))
}

fn search_constraints(target: Option<SearchTarget>, file: Option<&PathBuf>) -> Result<(String, Constraints), CliError> {
    if let Some(path) = file {
        let f = io::import(path)?;
        if f.bases.is_empty() {
            return Err(CliError::Schema {
                field: format!("{}: bases", path.display()),
                message: "no bases to search against".into(),
            });
        }
        return Ok((path.display().to_string(), Constraints::from_bases(&f.float_bases())?));
    }
    let t = target.ok_or_else(|| CliError::Usage("search needs --target or --file".into()))?;
    let bases: Vec<ProductBasis> = match t {
        SearchTarget::T0 => triple(Triple::T0).to_vec(),
        SearchTarget::T1 => triple(Triple::T1).to_vec(),
        SearchTarget::P0 => pair_family(PairFamily::P0, &ParamSet::default())?.to_vec(),
        SearchTarget::P2 => pair_family(PairFamily::P2, &ParamSet::default())?.to_vec(),
    };
    Ok((format!("{t:?}"), Constraints::from_product_bases(&bases)?))
}

fn run_search(
    ctx: &Context,
    target: Option<SearchTarget>,
    file: Option<&PathBuf>,
    cluster_threshold: f64,
    expect: Option<usize>,
) -> Result<Outcome, CliError> {
    let (name, constraints) = search_constraints(target, file)?;
    let config = SearchConfig {
        restarts: ctx.restarts.unwrap_or(1000),
        seed: ctx.seed,
        cluster_threshold,
        ..SearchConfig::default()
    };
    let r = search(&constraints, &config)?;
    let summary = vec![
        format!("target {name}: {} constraints, seed {}", r.constraint_count, ctx.seed),
        format!(
            "{} restarts, {} successes, min residual {:.3e}, stalled {}, iteration cap {}",
            config.restarts, r.successes, r.min_residual, r.stalled, r.unconverged
        ),
        format!("wall time {:.2} s", r.wall_time_secs),
    ];
    let verdict = format!("{} clusters", r.clusters);
    let success = expect.is_none_or(|n| n == r.clusters);
    Ok(Outcome::new(&r, summary, verdict, success))
}

fn reproduce(ctx: &Context, what: &Reproduce) -> Result<Outcome, CliError> {
    let seed_line = format!("seed: {}", ctx.seed);
    let search_config = |default: usize| SearchConfig {
        restarts: ctx.restarts.unwrap_or(default),
        seed: ctx.seed,
        ..SearchConfig::default()
    };
    match what {
        Reproduce::Theorem1 {
            triple,
            resolution,
            scan,
        } => {
            let config = Theorem1Config {
                resolution: *resolution,
                scan_grid: (scan[0], scan[1]),
                search: search_config(1000),
                tol: ctx.tol.value(),
            };
            let which: Triple = (*triple).into();
            let r = theorem1_pipeline(which, &config)?;
            let worst_min = r.violations.iter().map(|v| v.max_deviation).fold(f64::INFINITY, f64::min);
            let summary = vec![
                seed_line,
                format!("triple {which:?}: valid {}", r.triple_valid),
                format!(
                    "C3 vectors unbiased to B_z and B_x: {} (match B_y and B_w: {})",
                    r.enumeration.solutions.len(),
                    r.enumeration_matches_yw
                ),
                format!(
                    "scans without off-pole zeros: {}/{}",
                    r.scans.iter().filter(|s| s.near_zeros_off_poles == 0).count(),
                    r.scans.len()
                ),
                format!(
                    "candidates: {}, smallest step-3 deviation {worst_min:.6}, over phase families {:.6}",
                    r.candidates.len(),
                    r.family_min_deviation
                ),
                format!(
                    "search: {} restarts, {} solutions, min residual {:.5}",
                    config.search.restarts,
                    r.search.solutions.len(),
                    r.search.min_residual
                ),
            ];
            let ok = r.verdict == "unextendible";
            let verdict = r.verdict.clone();
            Ok(Outcome::new(&r, summary, verdict, ok))
        }
        Reproduce::Theorem2 { grid, with_triples } => {
            let config = Theorem2Config {
                grid: (*grid, *grid),
                tol: ctx.tol.value(),
                seed: ctx.seed,
                theorem1: with_triples.then(|| Theorem1Config {
                    search: search_config(1000),
                    ..Theorem1Config::default()
                }),
                ..Theorem2Config::default()
            };
            let r = theorem2_pipeline(&config)?;
            let mut summary = vec![
                seed_line,
                format!(
                    "admissible product states: P0 {}, P2 {}, P3 {}",
                    r.p0_admissible.states.len(),
                    r.p2_admissible,
                    r.p3_admissible
                ),
                format!(
                    "S1 instances: {}, all extensions product: {}",
                    r.s1.len(),
                    r.s1.iter().all(|s| s.all_product)
                ),
                format!(
                    "S2 instances: {}, extend only by product states: {}",
                    r.s2.len(),
                    r.s2.iter().filter(|s| s.verdict == "extends only by product states").count()
                ),
                format!("ordered pairs: {}, interior residual floor {:.6}", r.pairs.len(), r.floor),
            ];
            for p in &r.p1_samples {
                summary.push(format!(
                    "P1 sample (xi {:.4}, eta {:.4}): {} admissible, largest orthogonal set {}",
                    p.xi, p.eta, p.admissible, p.max_orthogonal
                ));
            }
            for (t, v) in &r.triples {
                summary.push(format!("triple {t:?}: {v}"));
            }
            let ok = r.verdict == "excluded";
            let verdict = r.verdict.clone();
            Ok(Outcome::new(&r, summary, verdict, ok))
        }
        Reproduce::Grassl48 { cluster_threshold } => {
            let pair = pair_family(PairFamily::P0, &ParamSet::default())?;
            let c = Constraints::from_product_bases(&pair)?;
            let config = SearchConfig {
                cluster_threshold: *cluster_threshold,
                ..search_config(100_000)
            };
            let r = search(&c, &config)?;
            let stability: Vec<(f64, usize)> = [1e-7, 1e-6, 1e-5, 1e-4]
                .into_iter()
                .map(|t| (t, r.recluster(t).len()))
                .collect();
            let stable = stability.iter().all(|(_, n)| *n == r.clusters);
            let summary = vec![
                seed_line,
                format!("{} restarts, {} successes, wall time {:.2} s", config.restarts, r.successes, r.wall_time_secs),
                format!(
                    "clusters by threshold: {}",
                    stability.iter().map(|(t, n)| format!("{t:e}: {n}")).collect::<Vec<_>>().join(", ")
                ),
            ];
            #[derive(Serialize)]
            struct Payload<'a> {
                search: &'a mub_core::search::SearchResult,
                stability: Vec<(f64, usize)>,
            }
            let ok = r.clusters == 48 && stable;
            let verdict = format!("{} clusters", r.clusters);
            Ok(Outcome::new(Payload { search: &r, stability }, summary, verdict, ok))
        }
        Reproduce::C3six { resolution } => {
            let e = enumerate_c3_mu_to_zx(*resolution, 1e-12)?;
            let matches = e.matches(1e-8);
            let mut summary = vec![
                seed_line,
                format!("grid {resolution}x{resolution}: {} local minima", e.grid_minima),
            ];
            for (s, m) in e.solutions.iter().zip(&matches) {
                let amps: Vec<String> = s.amps().iter().map(|a| format!("{:+.6}{:+.6}i", a.re, a.im)).collect();
                summary.push(format!(
                    "({})  = {}",
                    amps.join(", "),
                    m.map_or("unmatched".to_string(), |l| l.to_string())
                ));
            }
            let ok = e.solutions.len() == 6 && e.matches_yw(1e-8);
            let verdict = format!("{} vectors", e.solutions.len());
            Ok(Outcome::new(&e, summary, verdict, ok))
        }
    }
}
