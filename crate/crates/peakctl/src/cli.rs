//! Command-line surface. `run` parses arguments, executes one command and
//! returns the exit code with the text to print.
//!
//! Exit codes: 0 positive answer, 1 negative answer, 2 usage or input
//! error, 3 search cap exceeded.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use peak_core::control::{is_feasible_ccav, is_feasible_ccdv, Pruning, SearchOptions, Solution, DEFAULT_CAP};
use peak_core::election::{Cand, Election};
use peak_core::error::Error;
use peak_core::fpt::{ApprovalProgram, CondorcetProgram, IpInstance, Relation};
use peak_core::gadgets::{brute_force_rx3c, build_gadget, mine_rx3c, ControlInstance, GadgetCounts, GadgetKind};
use peak_core::rules::{parse_rule, scores, winners, Rule};
use peak_core::structure::{
    check_certificate, cp_certificate, find_alpha_structure, find_axis, find_wd_structure, recognize_two_axes,
    verify_k_axes, AxesCertificate, Axis,
};

use crate::formats::{self, FormatError, InstanceFile};
use crate::parallel;

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Draws allowed when mining an RX3C instance of the requested kind.
const MINING_ATTEMPTS: usize = 100_000;

#[derive(Debug, Parser)]
#[command(name = "peakctl", version, about = "Election control on nearly single-peaked profiles")]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Most subsets an exhaustive search may visit.
    #[arg(long, global = true)]
    pub cap: Option<u128>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    Brute,
    Fpt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Prune {
    ApprovingP,
    NonApprovingP,
}

#[derive(Debug, Clone, clap::Args)]
pub struct SolveArgs {
    /// Instance file.
    pub file: PathBuf,
    /// Overrides the instance's `[rule]`.
    #[arg(long)]
    pub rule: Option<String>,
    #[arg(long, value_enum, default_value = "brute")]
    pub solver: Solver,
    /// Axes for the parameterized solver (text, one per line, or a JSON witness).
    #[arg(long)]
    pub axes: Option<PathBuf>,
    /// Restrict the exhaustive search to votes that can matter.
    #[arg(long, value_enum)]
    pub prune: Option<Prune>,
    /// Comma-separated 0-based vote indices the exhaustive search skips.
    #[arg(long, value_delimiter = ',')]
    pub exclude: Vec<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Winners of an election under a rule.
    Winners {
        #[arg(long)]
        rule: String,
        file: PathBuf,
    },
    /// Find an axis, or a forbidden substructure.
    RecognizeSp { file: PathBuf },
    /// Split the votes over two axes.
    #[command(name = "recognize-2axes")]
    Recognize2axes { file: PathBuf },
    /// Check that every vote is single-peaked on one of the given axes.
    VerifyAxes {
        #[arg(long)]
        axes: PathBuf,
        file: PathBuf,
    },
    /// Check that every part of a candidate partition is single-peaked.
    VerifyCp {
        #[arg(long)]
        partition: PathBuf,
        file: PathBuf,
    },
    /// Control by adding votes.
    SolveCcav(SolveArgs),
    /// Control by deleting votes.
    SolveCcdv(SolveArgs),
    /// Build a control instance from an exact-cover instance.
    GenGadget {
        #[arg(long)]
        kind: String,
        /// RX3C file; otherwise one is mined with `--kappa` and `--seed`.
        #[arg(long, conflicts_with = "kappa")]
        rx3c: Option<PathBuf>,
        #[arg(long)]
        kappa: Option<usize>,
        /// Mine an instance without an exact cover.
        #[arg(long)]
        no_cover: bool,
        #[arg(long)]
        rule: Option<String>,
        /// Directory for instance.txt, rx3c.txt, witness.json and axis files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two vertex orders covering a 3-regular bipartite graph.
    GraphOrders { file: PathBuf },
    /// Exact cover of an RX3C instance.
    Rx3cSolve { file: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Winners { .. } => "winners",
            Command::RecognizeSp { .. } => "recognize-sp",
            Command::Recognize2axes { .. } => "recognize-2axes",
            Command::VerifyAxes { .. } => "verify-axes",
            Command::VerifyCp { .. } => "verify-cp",
            Command::SolveCcav(_) => "solve-ccav",
            Command::SolveCcdv(_) => "solve-ccdv",
            Command::GenGadget { .. } => "gen-gadget",
            Command::GraphOrders { .. } => "graph-orders",
            Command::Rx3cSolve { .. } => "rx3c-solve",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::CapExceeded { .. }) => EXIT_CAP,
            _ => EXIT_USAGE,
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

/// What a command prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    positive: bool,
    verdict: String,
    text: String,
    witness: Value,
    counts: Value,
}

impl Report {
    fn new(positive: bool, verdict: impl Into<String>, text: String) -> Report {
        Report { positive, verdict: verdict.into(), text, witness: Value::Null, counts: json!({}) }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_POSITIVE };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let started = Instant::now();
    let name = cli.command.name();
    match execute(&cli) {
        Ok(report) => {
            let code = if report.positive { EXIT_POSITIVE } else { EXIT_NEGATIVE };
            let stdout = if cli.json {
                let doc = json!({
                    "command": name,
                    "verdict": report.verdict,
                    "positive": report.positive,
                    "witness": report.witness,
                    "counts": report.counts,
                    "timings": { "total_ms": started.elapsed().as_secs_f64() * 1000.0 },
                });
                format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
            } else {
                report.text
            };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(err) => {
            let code = err.exit_code();
            let verdict = if code == EXIT_CAP { "cap-exceeded" } else { "error" };
            let stdout = if cli.json {
                let doc = json!({ "command": name, "verdict": verdict, "message": err.to_string() });
                format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
            } else {
                String::new()
            };
            Outcome { code, stdout, stderr: format!("peakctl {name}: {err}\n") }
        }
    }
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Winners { rule, file } => cmd_winners(rule, file),
        Command::RecognizeSp { file } => cmd_recognize_sp(file),
        Command::Recognize2axes { file } => cmd_recognize_2axes(file),
        Command::VerifyAxes { axes, file } => cmd_verify_axes(axes, file),
        Command::VerifyCp { partition, file } => cmd_verify_cp(partition, file),
        Command::SolveCcav(args) => cmd_solve(cli, args, true),
        Command::SolveCcdv(args) => cmd_solve(cli, args, false),
        Command::GenGadget { kind, rx3c, kappa, no_cover, rule, out } => {
            cmd_gen_gadget(cli, kind, rx3c.as_deref(), *kappa, !*no_cover, rule.as_deref(), out.as_deref())
        }
        Command::GraphOrders { file } => cmd_graph_orders(file),
        Command::Rx3cSolve { file } => cmd_rx3c_solve(file),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn format_err(path: &Path) -> impl FnOnce(FormatError) -> CliError + '_ {
    move |source| CliError::Format { path: path.display().to_string(), source }
}

/// An election file, or the registered and pool votes of an instance file.
fn load_profile(path: &Path) -> Result<Election, CliError> {
    let text = read(path)?;
    if formats::looks_like_instance(&text) {
        Ok(formats::parse_instance(&text).map_err(format_err(path))?.profile())
    } else {
        formats::parse_election(&text).map_err(format_err(path))
    }
}

fn rule_arg(text: &str) -> Result<Rule, CliError> {
    parse_rule(text).map_err(|e| usage(format!("--rule {text}: {e}")))
}

fn names(e: &Election, cands: &[Cand]) -> Vec<String> {
    cands.iter().map(|&c| e.name(c).to_string()).collect()
}

fn joined(e: &Election, cands: &[Cand]) -> String {
    names(e, cands).join(" ")
}

fn indices(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn ratio_text(r: num_rational::Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn certificate_json(e: &Election, cert: &AxesCertificate) -> Value {
    json!({
        "axes": cert.axes.iter().map(|a| names(e, a.order())).collect::<Vec<_>>(),
        "assignment": cert.assignment,
    })
}

fn certificate_text(e: &Election, cert: &AxesCertificate) -> String {
    let mut out = String::new();
    for (i, a) in cert.axes.iter().enumerate() {
        let on: Vec<usize> = (0..cert.assignment.len()).filter(|&v| cert.assignment[v] == i).collect();
        out.push_str(&format!("axis {}: {}\nvotes on axis {}: {}\n", i + 1, joined(e, a.order()), i + 1, indices(&on)));
    }
    out
}

fn cmd_winners(rule: &str, file: &Path) -> Result<Report, CliError> {
    let rule = rule_arg(rule)?;
    let e = load_profile(file)?;
    let w = winners(&rule, &e);
    let mut report = Report::new(true, "winners", format!("winners: {}\n", joined(&e, &w)));
    let score_map: Option<serde_json::Map<String, Value>> =
        scores(&rule, &e).map(|s| (0..e.m()).map(|c| (e.name(c).to_string(), json!(ratio_text(s[c])))).collect());
    report.witness = json!({ "winners": names(&e, &w), "scores": score_map });
    report.counts = json!({ "candidates": e.m(), "votes": e.n() });
    Ok(report)
}

fn cmd_recognize_sp(file: &Path) -> Result<Report, CliError> {
    let e = load_profile(file)?;
    let counts = json!({ "candidates": e.m(), "votes": e.n() });
    if let Some(axis) = find_axis(&e) {
        let mut report = Report::new(true, "single-peaked", format!("single-peaked\naxis: {}\n", joined(&e, axis.order())));
        let cert = AxesCertificate { axes: vec![axis], assignment: vec![0; e.n()] };
        report.witness = certificate_json(&e, &cert);
        report.counts = counts;
        return Ok(report);
    }
    let mut report = if let Some(wd) = find_wd_structure(&e) {
        let mut r = Report::new(
            false,
            "not-single-peaked",
            format!("not single-peaked\nWD-structure: votes {}, candidates {}\n", indices(&wd.votes), joined(&e, &wd.cands)),
        );
        r.witness = json!({ "wd": { "votes": wd.votes, "candidates": names(&e, &wd.cands) } });
        r
    } else {
        let a = find_alpha_structure(&e).expect("a profile without an axis has a forbidden substructure");
        let quad = [a.a, a.b, a.c, a.d];
        let mut r = Report::new(
            false,
            "not-single-peaked",
            format!("not single-peaked\nalpha-structure: votes {} {}, candidates {}\n", a.x, a.y, joined(&e, &quad)),
        );
        r.witness = json!({ "alpha": { "votes": [a.x, a.y], "candidates": names(&e, &quad) } });
        r
    };
    report.counts = counts;
    Ok(report)
}

fn cmd_recognize_2axes(file: &Path) -> Result<Report, CliError> {
    let e = load_profile(file)?;
    let mut report = match recognize_two_axes(&e) {
        Some(two) => {
            let cert = two.certificate(e.n());
            let mut r = Report::new(true, "2-axes", format!("2-axes\n{}", certificate_text(&e, &cert)));
            r.witness = certificate_json(&e, &cert);
            r
        }
        None => Report::new(false, "not-2-axes", "not 2-axes\n".into()),
    };
    report.counts = json!({ "candidates": e.m(), "votes": e.n() });
    Ok(report)
}

/// The object holding witness fields: the `witness` member of a report, or
/// the document itself.
fn witness_object(v: &Value) -> &Value {
    v.get("witness").filter(|w| w.is_object()).unwrap_or(v)
}

fn name_lists(v: &Value, key: &str, e: &Election, path: &Path) -> Result<Vec<Vec<Cand>>, CliError> {
    let bad = || usage(format!("{}: `{key}` must be a list of candidate-name lists", path.display()));
    let lists = v.get(key).and_then(Value::as_array).ok_or_else(bad)?;
    lists
        .iter()
        .map(|l| {
            l.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|n| {
                    let n = n.as_str().ok_or_else(bad)?;
                    e.candidate(n).ok_or_else(|| usage(format!("{}: unknown candidate `{n}`", path.display())))
                })
                .collect()
        })
        .collect()
}

fn parse_json(text: &str, path: &Path) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|err| {
        CliError::Format { path: path.display().to_string(), source: FormatError { line: err.line(), message: err.to_string() } }
    })
}

/// Axes from a text file or a JSON witness, with the witness's assignment if any.
fn load_axes(path: &Path, e: &Election) -> Result<(Vec<Axis>, Option<Vec<usize>>), CliError> {
    let text = read(path)?;
    if !text.trim_start().starts_with('{') {
        return Ok((formats::parse_axes(&text, e).map_err(format_err(path))?, None));
    }
    let doc = parse_json(&text, path)?;
    let w = witness_object(&doc);
    let axes = name_lists(w, "axes", e, path)?
        .into_iter()
        .map(|order| {
            if order.len() != e.m() {
                return Err(usage(format!("{}: an axis must list all {} candidates", path.display(), e.m())));
            }
            Axis::new(order).map_err(CliError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let assignment = w.get("assignment").and_then(Value::as_array).map(|a| {
        a.iter().map(|x| x.as_u64().map_or(usize::MAX, |x| x as usize)).collect::<Vec<_>>()
    });
    Ok((axes, assignment))
}

fn cmd_verify_axes(axes_path: &Path, file: &Path) -> Result<Report, CliError> {
    let e = load_profile(file)?;
    let (axes, assignment) = load_axes(axes_path, &e)?;
    let cert = match assignment {
        Some(assignment) => {
            let cert = AxesCertificate { axes: axes.clone(), assignment };
            check_certificate(&e, &cert).then_some(cert)
        }
        None => verify_k_axes(&e, &axes)?,
    };
    let mut report = match cert {
        Some(cert) => {
            let mut r = Report::new(true, "verified", format!("verified\n{}", certificate_text(&e, &cert)));
            r.witness = certificate_json(&e, &cert);
            r
        }
        None => {
            let failing: Vec<usize> = (0..e.n())
                .filter(|&v| !axes.iter().any(|a| peak_core::structure::is_single_peaked_wrt(&e.votes()[v], a).unwrap_or(false)))
                .collect();
            let mut r = Report::new(false, "rejected", format!("rejected\nvotes on no axis: {}\n", indices(&failing)));
            r.witness = json!({ "failing_votes": failing });
            r
        }
    };
    report.counts = json!({ "candidates": e.m(), "votes": e.n(), "axes": axes.len() });
    Ok(report)
}

fn cmd_verify_cp(partition_path: &Path, file: &Path) -> Result<Report, CliError> {
    let e = load_profile(file)?;
    let text = read(partition_path)?;
    let parts = if text.trim_start().starts_with('{') {
        let doc = parse_json(&text, partition_path)?;
        name_lists(witness_object(&doc), "partition", &e, partition_path)?
    } else {
        formats::parse_partition(&text, &e).map_err(format_err(partition_path))?
    };
    let mut report = match cp_certificate(&e, &parts)? {
        Some(cert) => {
            let mut text = String::from("verified\n");
            let mut part_axes = Vec::new();
            for (i, (part, axis)) in cert.parts.iter().zip(&cert.axes).enumerate() {
                let mut members = part.clone();
                members.sort_unstable();
                let order: Vec<Cand> = axis.order().iter().map(|&j| members[j]).collect();
                text.push_str(&format!("part {}: {}\naxis {}: {}\n", i + 1, joined(&e, part), i + 1, joined(&e, &order)));
                part_axes.push(names(&e, &order));
            }
            let mut r = Report::new(true, "verified", text);
            r.witness = json!({
                "partition": parts.iter().map(|p| names(&e, p)).collect::<Vec<_>>(),
                "axes": part_axes,
            });
            r
        }
        None => {
            let failing: Vec<usize> = (0..parts.len())
                .filter(|&i| e.restrict(&parts[i]).map(|r| find_axis(&r).is_none()).unwrap_or(true))
                .collect();
            let mut r = Report::new(false, "rejected", format!("rejected\nparts not single-peaked: {}\n", indices(&failing)));
            r.witness = json!({ "failing_parts": failing });
            r
        }
    };
    report.counts = json!({ "candidates": e.m(), "votes": e.n(), "parts": parts.len() });
    Ok(report)
}

fn relation_text(r: Relation) -> &'static str {
    match r {
        Relation::Le => "<=",
        Relation::Ge => ">=",
        Relation::Eq => "=",
    }
}

/// Full dump of an integer program.
pub fn ip_json(ip: &IpInstance) -> Value {
    json!({
        "bounds": ip.bounds,
        "constraints": ip.constraints.iter().map(|c| json!({
            "functions": c.fns.iter().map(|f| f.points().iter().map(|&(x, y)| json!([x, ratio_text(y)])).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "relation": relation_text(c.rel),
            "rhs": c.rhs,
        })).collect::<Vec<_>>(),
        "rows": ip.rows.iter().map(|r| json!({
            "coefficients": r.coeffs,
            "relation": relation_text(r.rel),
            "rhs": r.rhs,
        })).collect::<Vec<_>>(),
    })
}

/// Axes for the votes the parameterized solver picks from: from a file, or
/// recognized with one or two axes.
fn solver_axes(args: &SolveArgs, votes: &Election) -> Result<AxesCertificate, CliError> {
    if let Some(path) = &args.axes {
        let (axes, _) = load_axes(path, votes)?;
        return verify_k_axes(votes, &axes)?
            .ok_or_else(|| usage(format!("{}: some vote is single-peaked on none of the axes", path.display())));
    }
    if let Some(axis) = find_axis(votes) {
        return Ok(AxesCertificate { axes: vec![axis], assignment: vec![0; votes.n()] });
    }
    recognize_two_axes(votes)
        .map(|t| t.certificate(votes.n()))
        .ok_or_else(|| usage("the votes are not 1- or 2-axes; pass --axes"))
}

fn cmd_solve(cli: &Cli, args: &SolveArgs, adding: bool) -> Result<Report, CliError> {
    let file: InstanceFile = formats::parse_instance(&read(&args.file)?).map_err(format_err(&args.file))?;
    let rule = match (&args.rule, file.rule) {
        (Some(text), _) => rule_arg(text)?,
        (None, Some(rule)) => rule,
        (None, None) => return Err(usage("no rule: add a [rule] section or pass --rule")),
    };
    if adding && file.pool.is_none() {
        return Err(usage(format!("{}: adding votes needs a [pool] section", args.file.display())));
    }
    if !adding && file.pool.is_some() {
        return Err(usage(format!("{}: a [pool] section makes no sense when deleting votes", args.file.display())));
    }
    let mut counts = json!({
        "candidates": file.base.m(),
        "registered": file.base.n(),
        "pool": file.pool.as_ref().map_or(0, Vec::len),
        "budget": file.budget,
    });
    let mut witness = json!({ "solver": match args.solver { Solver::Brute => "brute", Solver::Fpt => "fpt" } });
    let solution: Option<Solution> = match args.solver {
        Solver::Brute => {
            let pruning = match (args.prune, args.exclude.is_empty()) {
                (Some(_), false) => return Err(usage("--prune and --exclude do not combine")),
                (Some(Prune::ApprovingP), true) => Some(Pruning::ApprovingP),
                (Some(Prune::NonApprovingP), true) => Some(Pruning::NonApprovingP),
                (None, false) => Some(Pruning::Exclude { votes: args.exclude.clone(), reason: "command-line" }),
                (None, true) => None,
            };
            if let Some(p) = &pruning {
                witness["pruning"] = json!(p.tag());
            }
            let opts = SearchOptions { cap: cli.cap.unwrap_or(DEFAULT_CAP), pruning };
            let threads = parallel::thread_count();
            counts["threads"] = json!(threads);
            if adding {
                parallel::brute_force_ccav(&file.ccav(rule), &opts, threads)?
            } else {
                parallel::brute_force_ccdv(&file.ccdv(rule), &opts, threads)?
            }
        }
        Solver::Fpt => {
            if args.prune.is_some() || !args.exclude.is_empty() {
                return Err(usage("pruning applies to the brute-force solver only"));
            }
            let (ip, result) = match (rule, adding) {
                (Rule::RApproval(_), true) => {
                    let prog = ApprovalProgram::build(&file.ccav(rule))?;
                    counts["approved_candidates"] = json!(prog.stats.candidates);
                    counts["approval_sets"] = json!(prog.stats.subsets);
                    (prog.ip.clone(), prog.solve())
                }
                (Rule::Condorcet, true) => {
                    let inst = file.ccav(rule);
                    let cert = solver_axes(args, &inst.base.with_votes(inst.pool.clone()))?;
                    counts["axes"] = json!(cert.axes.len());
                    let prog = CondorcetProgram::ccav(&inst, &cert)?;
                    (prog.ip.clone(), prog.solve())
                }
                (Rule::Condorcet, false) => {
                    let inst = file.ccdv(rule);
                    let cert = solver_axes(args, &inst.base)?;
                    counts["axes"] = json!(cert.axes.len());
                    let prog = CondorcetProgram::ccdv(&inst, &cert)?;
                    (prog.ip.clone(), prog.solve())
                }
                _ => {
                    return Err(usage(
                        "the parameterized solver handles condorcet (adding or deleting) and approval:R (adding)",
                    ))
                }
            };
            counts["ip_variables"] = json!(ip.bounds.len());
            witness["ip"] = ip_json(&ip);
            if let Some(r) = &result {
                witness["assignment"] = json!(r.assignment);
            }
            result.map(|r| r.solution)
        }
    };
    if let Some(sol) = &solution {
        let ok = if adding { is_feasible_ccav(&file.ccav(rule), sol)? } else { is_feasible_ccdv(&file.ccdv(rule), sol)? };
        assert!(ok, "solver returned an infeasible solution");
    }
    let verb = if adding { "add" } else { "delete" };
    let report = match solution {
        Some(sol) => {
            witness["solution"] = json!(sol.indices);
            let text = format!("feasible\n{verb} {} vote(s): {}\n", sol.len(), indices(&sol.indices));
            Report { witness, counts, ..Report::new(true, "feasible", text) }
        }
        None => {
            let text = format!("infeasible within budget {}\n", file.budget);
            Report { witness, counts, ..Report::new(false, "infeasible", text) }
        }
    };
    Ok(report)
}

fn counts_json(c: GadgetCounts) -> Value {
    json!({ "candidates": c.candidates, "registered": c.registered, "pool": c.pool, "budget": c.budget })
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn cmd_gen_gadget(
    cli: &Cli,
    kind: &str,
    rx3c_path: Option<&Path>,
    kappa: Option<usize>,
    coverable: bool,
    rule: Option<&str>,
    out: Option<&Path>,
) -> Result<Report, CliError> {
    let kind = GadgetKind::parse(kind).ok_or_else(|| {
        let all: Vec<&str> = GadgetKind::ALL.iter().map(|k| k.name()).collect();
        usage(format!("unknown gadget kind `{kind}`; one of: {}", all.join(", ")))
    })?;
    let rx3c = match (rx3c_path, kappa) {
        (Some(path), _) => formats::parse_rx3c(&read(path)?).map_err(format_err(path))?.0,
        (None, Some(kappa)) => {
            let seed = cli.seed.ok_or_else(|| usage("mining an instance needs --seed"))?;
            mine_rx3c(kappa, coverable, seed, MINING_ATTEMPTS)
                .ok_or_else(|| usage(format!("no matching instance with kappa {kappa} in {MINING_ATTEMPTS} draws")))?
        }
        (None, None) => return Err(usage("pass --rx3c FILE or --kappa N")),
    };
    let rule = rule.map(rule_arg).transpose()?;
    let g = build_gadget(kind, &rx3c, rule)?;
    let instance_text = match &g.instance {
        ControlInstance::Ccav(i) => formats::write_instance(&i.base, Some(&i.pool), i.p, i.budget, i.rule, i.model),
        ControlInstance::Ccdv(i) => formats::write_instance(&i.base, None, i.p, i.budget, i.rule, i.model),
    };
    let profile = g.instance.profile();
    let cover = brute_force_rx3c(&rx3c);
    let mut witness = json!({ "kind": kind.name(), "rule": g.instance.rule().to_string(), "cover": cover });
    if let Some(cert) = &g.axes {
        witness["axes"] = certificate_json(&profile, cert)["axes"].clone();
        witness["assignment"] = json!(cert.assignment);
    }
    if let Some(parts) = &g.partition {
        witness["partition"] = json!(parts.iter().map(|p| names(&profile, p)).collect::<Vec<_>>());
    }
    if let Some(p) = &g.pruning {
        let votes = match p {
            Pruning::Exclude { votes, .. } => json!(votes),
            _ => Value::Null,
        };
        witness["pruning"] = json!({ "tag": p.tag(), "excluded_votes": votes });
    }
    if let Some(cover) = &cover {
        witness["forward_solution"] = json!(g.forward_solution(cover).indices);
    }
    let mut counts = counts_json(g.counts());
    counts["expected"] = counts_json(g.expected);
    let text = if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
        write_file(&dir.join("instance.txt"), &instance_text)?;
        write_file(&dir.join("rx3c.txt"), &formats::write_rx3c(&rx3c))?;
        write_file(&dir.join("witness.json"), &serde_json::to_string_pretty(&witness).expect("serializable"))?;
        if let Some(cert) = &g.axes {
            let lines: Vec<String> = cert.axes.iter().map(|a| formats::write_axis(a, &profile)).collect();
            write_file(&dir.join("axes.txt"), &(lines.join("\n") + "\n"))?;
        }
        if let Some(parts) = &g.partition {
            let lines: Vec<String> = parts.iter().map(|p| joined(&profile, p)).collect();
            write_file(&dir.join("partition.txt"), &(lines.join("\n") + "\n"))?;
        }
        let c = g.counts();
        format!(
            "{kind}: {} candidates, {} registered, {} pool, budget {}\nwrote {}\n",
            c.candidates,
            c.registered,
            c.pool,
            c.budget,
            dir.display()
        )
    } else {
        instance_text.clone()
    };
    witness["instance"] = json!(instance_text);
    Ok(Report { witness, counts, ..Report::new(true, "generated", text) })
}

fn vertex_name(left: usize, v: usize) -> String {
    if v < left {
        format!("l{v}")
    } else {
        format!("r{}", v - left)
    }
}

fn cmd_graph_orders(file: &Path) -> Result<Report, CliError> {
    let g = formats::parse_graph(&read(file)?).map_err(format_err(file))?;
    let co = peak_core::graphs::consecutive_pair_orders(&g)?;
    let verified = peak_core::graphs::verify_consecutive_cover(&g, &co);
    let order = |o: &[usize]| o.iter().map(|&v| vertex_name(g.left(), v)).collect::<Vec<_>>();
    let edges = |ids: &[usize]| ids.iter().map(|&e| g.edges()[e]).collect::<Vec<_>>();
    let edge_text = |ids: &[usize]| ids.iter().map(|&e| format!("{}-{}", g.edges()[e].0, g.edges()[e].1)).collect::<Vec<_>>().join(" ");
    let text = format!(
        "{}\n{}\nA1: {}\nA2: {}\n",
        order(&co.order1).join(" "),
        order(&co.order2).join(" "),
        edge_text(&co.edge_partition.0),
        edge_text(&co.edge_partition.1)
    );
    let mut report = Report::new(verified, if verified { "orders" } else { "unverified" }, text);
    report.witness = json!({
        "order1": order(&co.order1),
        "order2": order(&co.order2),
        "a1": edges(&co.edge_partition.0),
        "a2": edges(&co.edge_partition.1),
        "verified": verified,
    });
    report.counts = json!({ "left": g.left(), "right": g.right(), "edges": g.edges().len() });
    Ok(report)
}

fn cmd_rx3c_solve(file: &Path) -> Result<Report, CliError> {
    let (inst, elem) = formats::parse_rx3c(&read(file)?).map_err(format_err(file))?;
    let mut report = match brute_force_rx3c(&inst) {
        Some(cover) => {
            let mut text = format!("cover: sets {}\n", indices(&cover));
            for &j in &cover {
                let s = inst.sets[j];
                text.push_str(&format!("{} {} {}\n", elem[s[0]], elem[s[1]], elem[s[2]]));
            }
            let mut r = Report::new(true, "cover", text);
            r.witness = json!({ "cover": cover });
            r
        }
        None => Report::new(false, "no-cover", "no exact cover\n".into()),
    };
    report.counts = json!({ "kappa": inst.kappa, "sets": inst.sets.len() });
    Ok(report)
}
