//! Command-line front end. Exit status: 0 on success, 1 when a checked
//! property fails (with a JSON report), 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use orderbench_core::aronszajn::AronszajnBuild;
use orderbench_core::backforth::back_and_forth;
use orderbench_core::order::{builtin, EnumeratedOrder, Rationals};
use orderbench_core::suslin::{labelled_full_tree, line_to_tree, tree_to_line, BranchOracle, HonestQ, IntervalTree};
use orderbench_core::tree::{normalize, LeveledTree};
use orderbench_core::Rat;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dot::tree_to_dot;
use crate::json::{self, FiniteOrderJson, FormatError, LineJson, TreeJson};
use crate::suites;

pub const BUDGET_ENV: &str = "ORDERBENCH_BUDGET";

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "orderbench",
    version,
    about = "Exact checks for back-and-forth, Aronszajn and Suslin constructions"
)]
pub struct Cli {
    /// Seed for every randomized input.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Search budget (enumeration prefix scanned by searches).
    #[arg(long, global = true, env = BUDGET_ENV, default_value_t = 4096,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Back-and-forth between two countable orders.
    #[command(subcommand)]
    Backforth(BackforthCmd),
    /// Finite fragments of the special Aronszajn tree.
    #[command(subcommand)]
    Aronszajn(AronszajnCmd),
    /// Lines from trees and trees from lines.
    #[command(subcommand)]
    Suslin(SuslinCmd),
    /// Tree files: DOT export, normalization, normality check.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Runs an invariant suite.
    Check(CheckArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackforthCmd {
    Run(RunArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct RunArgs {
    /// Built-in order name or a finite order JSON file.
    #[arg(long)]
    pub left: String,
    #[arg(long)]
    pub right: String,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    pub rounds: u64,
    /// Write the transcript here instead of printing it.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AronszajnCmd {
    Build(BuildArgs),
    Check(InArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct BuildArgs {
    /// Comma-separated ordinals, e.g. 0,1,2,w,w+1,w*2.
    #[arg(long)]
    pub support: String,
    /// Comma-separated rationals, e.g. 0,1,2,3.
    #[arg(long)]
    pub grid: String,
    /// Tree JSON output; printed with the report when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid targets per node (least first); all of them when omitted.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub fanout: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct InArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuslinCmd {
    TreeToLine(TreeToLineArgs),
    LineToTree(LineToTreeArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct TreeToLineArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    /// Intervals of nodes in a labelled tree's branch line.
    Computable,
    /// Neighbouring rationals in (0, 1) among the first --budget of Q.
    HonestQ,
}

#[derive(Debug, Args, Serialize)]
pub struct LineToTreeArgs {
    #[arg(long, value_enum)]
    pub oracle: OracleKind,
    /// Stages to run; the oracle may stop earlier with a density report.
    #[arg(long, default_value_t = 16)]
    pub steps: u64,
    /// Labelled tree for the computable oracle; a full binary tree of
    /// depth 3 when omitted.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Interval tree JSON output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeCmd {
    Export(ExportArgs),
    Normalize(NormalizeArgs),
    Check(WidthArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ExportArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// DOT output file; standard output when omitted.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct NormalizeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Normalized tree JSON output; printed with the report when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Children a node needs at the next level.
    #[arg(long, default_value_t = 2)]
    pub width: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct WidthArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Children a node needs at the next level.
    #[arg(long, default_value_t = 2)]
    pub width: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(suites::SUITES))]
    pub suite: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Format(#[from] FormatError),
    /// A checked property failed; the report has already been printed.
    #[error("check failed")]
    Violation,
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Violation => 1,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn read_tree(path: &Path) -> Result<TreeJson, CliError> {
    Ok(serde_json::from_str(&read(path)?).map_err(FormatError::from)?)
}

fn order_arg(arg: &str) -> Result<Box<dyn EnumeratedOrder + Send + Sync>, CliError> {
    if let Some(o) = builtin(arg) {
        return Ok(o);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "--left/--right: {arg:?} is neither a built-in order ({}) nor a file",
            orderbench_core::order::BUILTIN_NAMES.join(", ")
        )));
    }
    let j: FiniteOrderJson = serde_json::from_str(&read(path)?).map_err(FormatError::from)?;
    Ok(Box::new(j.to_order()?))
}

/// Parses `args` and runs the command, writing reports to `out` and the
/// resolved config and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let _ = writeln!(err, "{}", json!({ "config": cli }));
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::Violation) {
                let _ = writeln!(err, "error: {e}");
            }
            e.code()
        }
    }
}

fn report(out: &mut dyn Write, value: &Value, passed: bool) -> Result<(), CliError> {
    let _ = write!(out, "{}", pretty(value));
    if passed {
        Ok(())
    } else {
        Err(CliError::Violation)
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let budget = cli.budget as usize;
    match &cli.command {
        Command::Backforth(BackforthCmd::Run(a)) => backforth_run(a, budget, out),
        Command::Aronszajn(AronszajnCmd::Build(a)) => aronszajn_build(a, out),
        Command::Aronszajn(AronszajnCmd::Check(a)) => aronszajn_check(&a.input, out),
        Command::Suslin(SuslinCmd::TreeToLine(a)) => suslin_tree_to_line(a, out),
        Command::Suslin(SuslinCmd::LineToTree(a)) => suslin_line_to_tree(a, budget, out),
        Command::Tree(TreeCmd::Export(a)) => {
            let t = read_tree(&a.input)?.to_tree()?;
            let name = a
                .input
                .file_stem()
                .map_or("tree".into(), |s| s.to_string_lossy().into_owned());
            let dot = tree_to_dot(&t, &name);
            match &a.dot {
                Some(p) => write_file(p, &dot),
                None => {
                    let _ = write!(out, "{dot}");
                    Ok(())
                }
            }
        }
        Command::Tree(TreeCmd::Normalize(a)) => tree_normalize(a, out),
        Command::Tree(TreeCmd::Check(a)) => tree_check(a, out),
        Command::Check(a) => {
            let rep =
                suites::run(&a.suite, cli.seed).ok_or_else(|| CliError::Usage(format!("unknown suite {}", a.suite)))?;
            let passed = rep.passed;
            report(out, &serde_json::to_value(&rep).expect("serializable"), passed)
        }
    }
}

fn backforth_run(a: &RunArgs, budget: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let (left, right) = (order_arg(&a.left)?, order_arg(&a.right)?);
    let iso = match back_and_forth(&*left, &*right, a.rounds as usize, budget) {
        Ok(iso) => iso,
        Err(e) => return report(out, &json!({ "error": e.to_string() }), false),
    };
    let transcript = json::transcript_json(iso.transcript());
    let broken = iso
        .verify(&*left, &*right)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut body = json!({
        "left": left.name(),
        "right": right.name(),
        "rounds": a.rounds,
        "pairs": iso.pairs().map(|(x, y)| [x, y]).collect::<Vec<_>>(),
        "order_preserving": broken.is_none(),
    });
    match &a.emit {
        Some(p) => write_file(p, &pretty(&transcript))?,
        None => body["transcript"] = serde_json::to_value(&transcript).expect("serializable"),
    }
    report(out, &body, broken.is_none())
}

fn aronszajn_build(a: &BuildArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let support = json::list(&a.support, json::ordinal)?;
    let grid = json::list(&a.grid, json::rational)?;
    let b = AronszajnBuild::build(&support, &grid, a.fanout.map(|f| f as usize))
        .map_err(|e| CliError::Usage(format!("--support/--grid: {e}")))?;
    let item = suites::aronszajn_checks(&b);
    let levels: Vec<Value> = b
        .level_sets()
        .map(|(o, ids)| json!({ "level": o.to_string(), "size": ids.len() }))
        .collect();
    let tree = b.to_tree(true).map_err(|e| CliError::Usage(e.to_string()))?;
    let file = TreeJson::from_tree(&tree, Some(b.grid()));
    let mut body = json!({ "nodes": b.len(), "levels": levels, "check": item });
    match &a.out {
        Some(p) => write_file(p, &pretty(&file))?,
        None => body["tree"] = serde_json::to_value(&file).expect("serializable"),
    }
    report(out, &body, item.passed)
}

fn aronszajn_check(input: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let file = read_tree(input)?;
    let grid: Vec<Rat> = file
        .grid()?
        .ok_or_else(|| CliError::Usage(format!("{}: no grid recorded", input.display())))?;
    let tree = file.to_tree()?;
    let b = AronszajnBuild::from_tree(&tree, &grid).map_err(|e| CliError::Usage(e.to_string()))?;
    let item = suites::aronszajn_checks(&b);
    report(out, &json!({ "nodes": b.len(), "check": item }), item.passed)
}

fn suslin_tree_to_line(a: &TreeToLineArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let tree = read_tree(&a.input)?.to_tree()?;
    let line = tree_to_line(&tree).map_err(FormatError::from)?;
    let order = line.check_total_order();
    let file = LineJson::from(&line);
    let mut body = json!({ "branches": line.branches().len(), "total_order": order.is_ok() });
    if let Err(v) = &order {
        body["violation"] = json!(format!("{v:?}"));
    }
    match &a.emit {
        Some(p) => write_file(p, &pretty(&file))?,
        None => body["line"] = serde_json::to_value(&file).expect("serializable"),
    }
    report(out, &body, order.is_ok())
}

fn interval_report(it: &IntervalTree) -> Value {
    json!({
        "intervals": it.intervals.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
        "dense": it.dense.as_ref().map(|d| json!({ "stage": d.stage, "endpoints": d.endpoints, "reason": d.reason })),
        "tree": TreeJson::from_tree(&it.tree, None),
    })
}

fn suslin_line_to_tree(a: &LineToTreeArgs, budget: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let steps = a.steps as usize;
    let it = match a.oracle {
        OracleKind::Computable => {
            let tree: LeveledTree = match &a.input {
                Some(p) => read_tree(p)?.to_tree()?,
                None => labelled_full_tree(3, 2),
            };
            let line = tree_to_line(&tree).map_err(FormatError::from)?;
            let mut oracle = BranchOracle::new(&line).map_err(FormatError::from)?;
            line_to_tree(&line, &mut oracle, steps)
        }
        OracleKind::HonestQ => {
            if a.input.is_some() {
                return Err(CliError::Usage(
                    "--in: the honest-q oracle works over Q and takes no input".into(),
                ));
            }
            line_to_tree(&Rationals, &mut HonestQ::new(Rat::zero(), Rat::one(), budget), steps)
        }
    };
    let it = match it {
        Ok(it) => it,
        Err(e) => return report(out, &json!({ "error": e.to_string() }), false),
    };
    let body = interval_report(&it);
    if let Some(p) = &a.out {
        write_file(p, &pretty(&body["tree"]))?;
    }
    report(out, &body, true)
}

fn tree_normalize(a: &NormalizeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let tree = read_tree(&a.input)?.to_tree()?;
    let (norm, log) = match normalize(&tree, a.width) {
        Ok(x) => x,
        Err(e) => return report(out, &json!({ "error": e.to_string() }), false),
    };
    let log: Vec<Value> = log
        .iter()
        .map(|e| json!({ "pass": e.pass, "stage": e.stage.to_string(), "removed": e.removed, "added": e.added, "note": e.note }))
        .collect();
    let file = TreeJson::from_tree(&norm, None);
    let mut body = json!({ "nodes": norm.len(), "stages": log });
    match &a.out {
        Some(p) => write_file(p, &pretty(&file))?,
        None => body["tree"] = serde_json::to_value(&file).expect("serializable"),
    }
    report(out, &body, true)
}

fn tree_check(a: &WidthArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let tree = read_tree(&a.input)?.to_tree()?;
    let rep = tree.check_normal(a.width);
    let props: Vec<Value> = rep
        .results
        .iter()
        .enumerate()
        .map(|(k, r)| json!({ "property": k + 1, "passed": r.is_ok(), "witness": r.as_ref().err().map(ToString::to_string) }))
        .collect();
    let sizes: Vec<Value> = rep
        .level_sizes
        .iter()
        .map(|(o, n)| json!({ "level": o.to_string(), "size": n }))
        .collect();
    report(
        out,
        &json!({ "properties": props, "level_sizes": sizes }),
        rep.all_pass(),
    )
}
