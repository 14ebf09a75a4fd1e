//! Driver behind the `sptinv` binary: argument types, command dispatch and
//! reports.

pub mod report;

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sptinv_core::classify::{classify_sector, ClassifyMode, ClassifyOptions};
use sptinv_core::crt::random_b;
use sptinv_core::group::{load_group, serialize_group};
use sptinv_core::io::{
    cochain_to_value, load_pentuple, load_triple, read_group_file, read_text, serialize_pentuple, serialize_triple,
    write_text,
};
use sptinv_core::{
    all_z2_homs, equiv_with, is_in_diagonal_class, reduce, synthesize_pentuple, validate_crt, validate_triple, Bit,
    DiagonalOutcome, EquivOptions, EquivOutcome, Error, FiniteGroup, Pd0Triple, Result, SampleMode, TripleSampler,
    Z2Hom, DEFAULT_BUDGET,
};

pub use report::{emit_report, Format, Report, Status};

/// Environment variable holding the worker thread count.
pub const WORKERS_ENV: &str = "PD0_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "sptinv", version, about = "Invariants of reflection-symmetric fermionic SPT data on finite groups")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Include wall-clock time in JSON reports.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a group file.
    MakeGroup(MakeGroupArgs),
    /// Check the cocycle conditions of a triple file.
    ValidateTriple(ValidateTripleArgs),
    /// Check the constraints of a pentuple file.
    ValidateCrt(InputArgs),
    /// Reduce a pentuple to a diagonal triple.
    Reduce(ReduceArgs),
    /// Decide whether two triples are equivalent.
    Equiv(EquivArgs),
    /// Enumerate the classes of one `a`.
    Classify(ClassifyArgs),
    /// Build a pentuple that reduces to a given diagonal triple.
    Synthesize(SynthesizeArgs),
    /// Draw a random valid triple.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GroupChoice {
    /// Cyclic group of order n.
    #[arg(long, value_name = "N")]
    pub cyclic: Option<usize>,
    /// Dihedral group of order 2n.
    #[arg(long, value_name = "N")]
    pub dihedral: Option<usize>,
    /// Direct product of two group files.
    #[arg(long, num_args = 2, value_names = ["LEFT", "RIGHT"])]
    pub product: Option<Vec<PathBuf>>,
    /// Group of order 1.
    #[arg(long)]
    pub trivial: bool,
}

#[derive(Debug, Args)]
pub struct MakeGroupArgs {
    #[command(flatten)]
    pub choice: GroupChoice,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateTripleArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Also search for a diagonal triple in the class.
    #[arg(long)]
    pub diagonal_class: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Where to write the diagonal representative, if found.
    #[arg(long, requires = "diagonal_class")]
    pub representative: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    #[arg(long)]
    pub left: PathBuf,
    #[arg(long)]
    pub right: PathBuf,
    /// Maximum number of m candidates tried.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Restrict moves to normalized cochains.
    #[arg(long)]
    pub normalized_moves: bool,
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub group: PathBuf,
    /// Index into the homomorphisms G → ℤ₂ in lexicographic order of their
    /// value lists; 0 is the trivial one.
    #[arg(long, default_value_t = 0)]
    pub a: usize,
    /// Phase denominator; defaults to lcm(|G|, 8).
    #[arg(long)]
    pub denominator: Option<u64>,
    #[arg(long)]
    pub diagonal_only: bool,
    #[arg(long, default_value_t = 1 << 16)]
    pub max_classes: usize,
    /// Include the representative triples in the report.
    #[arg(long)]
    pub representatives: bool,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    #[arg(long)]
    pub triple: PathBuf,
    /// `random`, or one 0/1 character per group element.
    #[arg(long, default_value = "random")]
    pub b: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub a: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub denominator: u64,
    /// Draw from the diagonal triples only.
    #[arg(long)]
    pub diagonal: bool,
    #[arg(long)]
    pub out: PathBuf,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::MakeGroup(_) => "make-group",
            Command::ValidateTriple(_) => "validate-triple",
            Command::ValidateCrt(_) => "validate-crt",
            Command::Reduce(_) => "reduce",
            Command::Equiv(_) => "equiv",
            Command::Classify(_) => "classify",
            Command::Synthesize(_) => "synthesize",
            Command::Sample(_) => "sample",
        }
    }
}

/// Runs one command. Errors become reports; the exit status lives in
/// [`Report::status`].
pub fn run(command: &Command) -> Report {
    let start = Instant::now();
    let mut report = match dispatch(command) {
        Ok(r) => r,
        Err(e) => Report::error(command.name(), &e),
    };
    report.elapsed = Some(start.elapsed());
    report
}

fn dispatch(command: &Command) -> Result<Report> {
    match command {
        Command::MakeGroup(args) => make_group(args),
        Command::ValidateTriple(args) => validate_triple_cmd(args),
        Command::ValidateCrt(args) => validate_crt_cmd(args),
        Command::Reduce(args) => reduce_cmd(args),
        Command::Equiv(args) => equiv_cmd(args),
        Command::Classify(args) => classify_cmd(args),
        Command::Synthesize(args) => synthesize_cmd(args),
        Command::Sample(args) => sample_cmd(args),
    }
}

fn read_triple(path: &Path) -> Result<Pd0Triple> {
    load_triple(&read_text(path)?, path.parent())
}

fn bits_string(bits: &[Bit]) -> String {
    bits.iter().map(|b| if b.is_one() { '1' } else { '0' }).collect()
}

fn hom_by_index(group: &FiniteGroup, index: usize) -> Result<Z2Hom> {
    let homs = all_z2_homs(group);
    let n = homs.len();
    homs.into_iter()
        .nth(index)
        .ok_or_else(|| Error::InvalidArgument(format!("--a {index} is out of range: the group has {n} homomorphisms to ℤ₂")))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn make_group(args: &MakeGroupArgs) -> Result<Report> {
    let c = &args.choice;
    let group = if let Some(n) = c.cyclic {
        FiniteGroup::cyclic(n)?
    } else if let Some(n) = c.dihedral {
        FiniteGroup::dihedral(n)?
    } else if let Some(files) = &c.product {
        FiniteGroup::direct_product(&read_group_file(&files[0])?, &read_group_file(&files[1])?)
    } else {
        FiniteGroup::trivial()
    };
    let text = serialize_group(&group);
    debug_assert!(load_group(&text).is_ok());
    write_text(&args.out, &text)?;
    let homs = all_z2_homs(&group).len();
    let mut r = Report::new("make-group");
    r.set("order", group.order());
    r.set("abelian", group.is_abelian());
    r.set("z2Homomorphisms", homs);
    r.set("out", args.out.display().to_string());
    r.line(format!("order {} written to {}", group.order(), args.out.display()));
    r.line(format!("{homs} homomorphisms to ℤ₂"));
    Ok(r)
}

fn validate_triple_cmd(args: &ValidateTripleArgs) -> Result<Report> {
    let t = read_triple(&args.input)?;
    let mut r = Report::new("validate-triple");
    r.set("diagonal", t.is_diagonal());
    match validate_triple(&t) {
        Ok(()) => {
            r.set("valid", true);
            r.line(format!("valid ({})", if t.is_diagonal() { "diagonal" } else { "not diagonal" }));
        }
        Err(v) => {
            r.set("valid", false);
            r.set("violation", to_value(&v));
            r.line(format!("violation: {v}"));
            return Ok(r.with_status(Status::Violation));
        }
    }
    if args.diagonal_class {
        match is_in_diagonal_class(&t, args.budget)? {
            DiagonalOutcome::Diagonal { representative, .. } => {
                r.set("diagonalClass", true);
                r.set("representativeDigest", sptinv_core::classify::triple_digest(&representative));
                r.line("class contains a diagonal triple");
                if let Some(path) = &args.representative {
                    write_text(path, &serialize_triple(&representative))?;
                }
            }
            DiagonalOutcome::NotDiagonal { kappa_diagonalizable, candidates } => {
                r.set("diagonalClass", false);
                r.set("kappaDiagonalizable", kappa_diagonalizable);
                r.set("candidates", candidates);
                r.line(format!("class contains no diagonal triple ({candidates} candidates tried)"));
            }
            DiagonalOutcome::BudgetExceeded { budget, coset_size } => {
                r.set("budget", budget);
                r.set("cosetSize", coset_size);
                r.line(format!("budget {budget} below the {coset_size} candidates"));
                return Ok(r.with_status(Status::BudgetExceeded));
            }
        }
    }
    Ok(r)
}

fn validate_crt_cmd(args: &InputArgs) -> Result<Report> {
    let p = load_pentuple(&read_text(&args.input)?, args.input.parent())?;
    let mut r = Report::new("validate-crt");
    match validate_crt(&p) {
        Ok(()) => {
            r.set("valid", true);
            r.line("valid");
            Ok(r)
        }
        Err(v) => {
            r.set("valid", false);
            r.set("violation", to_value(&v));
            r.line(format!("violation: {v}"));
            Ok(r.with_status(Status::Violation))
        }
    }
}

fn reduce_cmd(args: &ReduceArgs) -> Result<Report> {
    let p = load_pentuple(&read_text(&args.input)?, args.input.parent())?;
    let mut r = Report::new("reduce");
    if let Err(v) = validate_crt(&p) {
        r.set("violation", to_value(&v));
        r.line(format!("rejected: {v}"));
        return Ok(r.with_status(Status::Violation));
    }
    let (t, cert) = reduce(&p)?;
    r.set("diagonal", t.is_diagonal());
    r.set("valid", validate_triple(&t).is_ok());
    r.set("digest", sptinv_core::classify::triple_digest(&t));
    r.set("checks", to_value(&cert.checks));
    r.line(format!("reduced to a diagonal triple, digest {}", sptinv_core::classify::triple_digest(&t)));
    for v in &cert.checks {
        r.line(format!("{}: {}", v.name, if v.passed { "pass" } else { "FAIL" }));
    }
    if let Some(path) = &args.out {
        write_text(path, &serialize_triple(&t))?;
    }
    if let Some(path) = &args.cert {
        write_text(path, &sptinv_core::io::to_canonical_json(&cert.to_json()))?;
    }
    Ok(r)
}

fn equiv_cmd(args: &EquivArgs) -> Result<Report> {
    let t1 = read_triple(&args.left)?;
    let t2 = read_triple(&args.right)?;
    let opts = EquivOptions { budget: args.budget, normalized_moves: args.normalized_moves };
    let mut r = Report::new("equiv");
    r.set("budget", args.budget);
    r.set("normalizedMoves", args.normalized_moves);
    match equiv_with(&t1, &t2, opts)? {
        EquivOutcome::Equivalent(cert) => {
            let cv = json!({"m": cochain_to_value(&cert.m), "sigma": cochain_to_value(&cert.sigma)});
            r.set("equivalent", true);
            r.set("mIsZero", cert.m.is_identity());
            r.set("certificate", cv.clone());
            r.line(format!("equivalent (m {})", if cert.m.is_identity() { "= 0" } else { "≠ 0" }));
            if let Some(path) = &args.cert {
                write_text(path, &sptinv_core::io::to_canonical_json(&cv))?;
            }
            Ok(r)
        }
        EquivOutcome::Inequivalent(why) => {
            r.set("equivalent", false);
            let (reason, detail) = match why {
                sptinv_core::invariant::Inequivalence::DifferentA => ("different_a", Value::Null),
                sptinv_core::invariant::Inequivalence::KappaClasses => ("kappa_classes", Value::Null),
                sptinv_core::invariant::Inequivalence::CRatio { candidates, witness, pairing } => (
                    "c_ratio",
                    json!({"candidates": candidates, "witness": witness, "pairing": pairing.to_string()}),
                ),
            };
            r.set("reason", reason);
            if !detail.is_null() {
                r.set("detail", detail);
            }
            r.line(format!("inequivalent: {reason}"));
            Ok(r.with_status(Status::Violation))
        }
        EquivOutcome::BudgetExceeded { budget, coset_size } => {
            r.set("cosetSize", coset_size);
            r.line(format!("budget {budget} below the {coset_size} candidates"));
            Ok(r.with_status(Status::BudgetExceeded))
        }
    }
}

fn classify_cmd(args: &ClassifyArgs) -> Result<Report> {
    let group = Arc::new(read_group_file(&args.group)?);
    let a = hom_by_index(&group, args.a)?;
    let mode = if args.diagonal_only { ClassifyMode::DiagonalOnly } else { ClassifyMode::Full };
    let opts = ClassifyOptions { denominator: args.denominator, mode, max_classes: args.max_classes };
    let rep = classify_sector(&group, &a, opts)?;
    let mut r = Report::new("classify");
    let body = if args.representatives { rep.to_json() } else { rep.summary_json() };
    if let Value::Object(map) = body {
        r.fields.extend(map);
    }
    r.set("aIndex", args.a);
    r.line(format!(
        "|G| = {}, a = {}, N = {}, {}",
        rep.order,
        bits_string(rep.a.values()),
        rep.denominator,
        if args.diagonal_only { "diagonal classes only" } else { "all classes" }
    ));
    r.line(format!("class count: {}", rep.class_count()));
    for (i, s) in rep.sectors.iter().enumerate() {
        if s.solvable {
            r.line(format!("sector {i}: {} classes", s.class_count));
        } else {
            r.line(format!("sector {i}: empty"));
        }
    }
    for c in &rep.classes {
        r.line(format!("  sector {} class {}", c.sector, c.digest));
    }
    Ok(r)
}

fn parse_b(arg: &str, group: &FiniteGroup, seed: u64) -> Result<Vec<Bit>> {
    if arg == "random" {
        return Ok(random_b(group, seed));
    }
    if arg.len() != group.order() || !arg.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::InvalidArgument(format!(
            "--b must be `random` or {} characters from {{0, 1}}",
            group.order()
        )));
    }
    Ok(arg.chars().map(|c| Bit::from(c == '1')).collect())
}

fn synthesize_cmd(args: &SynthesizeArgs) -> Result<Report> {
    let t = read_triple(&args.triple)?;
    let b = parse_b(&args.b, t.group(), args.seed)?;
    let p = synthesize_pentuple(&t, &b)?;
    let mut r = Report::new("synthesize");
    r.set("b", bits_string(&b));
    r.set("seed", args.seed);
    r.set("valid", true);
    r.set("kappaMirrored", p.kappa_l != p.kappa_r);
    r.line(format!("b = {}, pentuple passes validation", bits_string(&b)));
    if let Some(path) = &args.out {
        write_text(path, &serialize_pentuple(&p))?;
    }
    Ok(r)
}

fn sample_cmd(args: &SampleArgs) -> Result<Report> {
    let group = Arc::new(read_group_file(&args.group)?);
    let a = hom_by_index(&group, args.a)?;
    let mode = if args.diagonal { SampleMode::Diagonal } else { SampleMode::Full };
    let sampler = TripleSampler::new(&group, &a, args.denominator, mode)?;
    let t = sampler.sample(&mut ChaCha8Rng::seed_from_u64(args.seed));
    write_text(&args.out, &serialize_triple(&t))?;
    let mut r = Report::new("sample");
    r.set("diagonal", t.is_diagonal());
    r.set("digest", sptinv_core::classify::triple_digest(&t));
    r.line(format!("triple {} written to {}", sptinv_core::classify::triple_digest(&t), args.out.display()));
    Ok(r)
}

/// Sizes the global thread pool from [`WORKERS_ENV`].
pub fn configure_workers() -> Result<()> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("{WORKERS_ENV} must be a positive integer, found {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidArgument(format!("cannot size the worker pool: {e}")))
}
