//! Batch command-line front end.
//!
//! Exit codes: 0 on success, 2 on bad input, 3 when a requested guarantee
//! could not be met. Every random choice is drawn from ChaCha8 seeded with
//! `--seed` (default 0), so identical inputs give byte-identical output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::branching::{
    generate_hn, hat_matrices, local_convergence_rate, merged_hat_matrices, parse_branching,
    parse_typed_hypergraph, reversibility, stationary_distributions, tree_neighborhood,
    validate_branching, verify_incidence_counts, write_typed_hypergraph, BranchingError,
    BranchingMatrices, Reversibility,
};
use crate::counting::{
    approx_log_partition, approx_partition, classify_regime, regime_grid, CountOptions,
    CountingError, VertexOrder,
};
use crate::decay::{
    contraction_ratio, critical_activity, fixed_point, truncated_marginal_with,
    two_periodic_points, ModelParams,
};
use crate::exact::{exact_partition_rational, DEFAULT_MAX_VERTICES};
use crate::format::{parse_hypergraph, parse_pinning, write_hypergraph};
use crate::gadget::gadget_reduce;
use crate::hypergraph::{ActivityVector, Hypergraph, Pinning};
use crate::sawtree::{build_saw_tree, saw_marginal_exact_with, EdgeOrdering, DEFAULT_EXPANSION_LIMIT};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Guarantee(String),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Guarantee(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

impl From<CountingError> for CliError {
    fn from(e: CountingError) -> Self {
        match e {
            CountingError::DepthCap { .. } | CountingError::NotCertified { .. } => {
                CliError::Guarantee(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<BranchingError> for CliError {
    fn from(e: BranchingError) -> Self {
        match e {
            BranchingError::Infeasible { requested, next } => CliError::Input(format!(
                "n = {requested} is not feasible for these matrices; try --n {next}"
            )),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "hypercount", version, about = "Counting hypergraph independent sets and matchings by correlation decay")]
struct Cli {
    /// Worker threads for parallel sections; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact partition function by enumeration (small instances).
    Exact(ExactArgs),
    /// Deterministic approximation of Z or ln Z.
    Count(CountArgs),
    /// Marginal of one vertex from the SAW tree.
    Marginal(MarginalArgs),
    /// Dump the SAW tree of a vertex.
    Saw(SawArgs),
    /// Uniqueness threshold and fixed-point data of the regular hypertree.
    Threshold(ThresholdArgs),
    /// Regime grid over d and k at a fixed activity.
    Regimes(RegimesArgs),
    /// Reduce a graph to a hypergraph with Z_H(λ) = Z_G(tλ).
    Gadget(GadgetArgs),
    /// Swap the roles of vertices and hyperedges.
    Dualize(InputArg),
    /// Validate branching matrices and decide reversibility.
    BranchingCheck(BranchingCheckArgs),
    /// Sample a typed hypergraph realizing reversible branching matrices.
    BranchingGen(BranchingGenArgs),
    /// Check incidence counts and local tree-likeness of a typed hypergraph.
    BranchingVerify(BranchingVerifyArgs),
}

#[derive(Args, Debug)]
struct InputArg {
    /// Hypergraph file, or `-` for stdin.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    input: PathBuf,
    /// Activity; decimals and `p/q` are read exactly.
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    pin: Option<PathBuf>,
    /// Also report the exact marginal of this vertex.
    #[arg(long)]
    vertex: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Input,
    Mindeg,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    eps: f64,
    /// Approximate ln Z instead of Z.
    #[arg(long)]
    log: bool,
    #[arg(long, value_enum, default_value = "input")]
    order: OrderArg,
    /// Cap on the SAW tree depth.
    #[arg(long)]
    depth: Option<usize>,
    /// Shuffle the per-vertex edge ordering with this seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct MarginalArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    vertex: usize,
    #[arg(long)]
    pin: Option<PathBuf>,
    /// Truncate the SAW tree at this depth and report the certified interval.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct SawArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    vertex: usize,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    pin: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
    /// Also report the fixed point, contraction ratio and periodic orbit.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args, Debug)]
struct RegimesArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long, default_value_t = 8)]
    dmax: usize,
    #[arg(long, default_value_t = 8)]
    kmax: usize,
}

#[derive(Args, Debug)]
struct GadgetArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
}

#[derive(Args, Debug)]
struct BranchingSource {
    /// Branching-matrix file.
    #[arg(long, conflicts_with_all = ["d", "k", "hat"])]
    matrices: Option<PathBuf>,
    /// Without --matrices: the single-type pair D = [d+1], K = [k+1].
    #[arg(long, requires = "k")]
    d: Option<usize>,
    #[arg(long, requires = "d")]
    k: Option<usize>,
    /// With --d and --k: the two-type hat matrices instead.
    #[arg(long, requires = "d")]
    hat: bool,
    /// With --hat at k = 1: merge the two identical edge types.
    #[arg(long, requires = "hat")]
    merge_k1: bool,
}

#[derive(Args, Debug)]
struct BranchingCheckArgs {
    #[command(flatten)]
    source: BranchingSource,
    /// Also print the typed tree neighborhood of each vertex type.
    #[arg(long)]
    radius: Option<usize>,
}

#[derive(Args, Debug)]
struct BranchingGenArgs {
    #[command(flatten)]
    source: BranchingSource,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BranchingVerifyArgs {
    /// Typed hypergraph file.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    source: BranchingSource,
    #[arg(long, default_value_t = 2)]
    radius: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(input(e)),
        },
        None => dispatch(&cli),
    };
    let result = result.and_then(|text| Ok(out.write_all(text.as_bytes())?));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let json = cli.json;
    let text = match &cli.command {
        Command::Exact(a) => exact_cmd(a, json)?,
        Command::Count(a) => count_cmd(a, json)?,
        Command::Marginal(a) => marginal_cmd(a, json)?,
        Command::Saw(a) => saw_cmd(a)?,
        Command::Threshold(a) => threshold_cmd(a, json)?,
        Command::Regimes(a) => regimes_cmd(a, json)?,
        Command::Gadget(a) => gadget_cmd(a)?,
        Command::Dualize(a) => write_hypergraph(&load_hypergraph(&a.input)?.dualize()),
        Command::BranchingCheck(a) => branching_check_cmd(a, json)?,
        Command::BranchingGen(a) => {
            let b = load_branching(&a.source)?;
            write_typed_hypergraph(&generate_hn(&b, a.n, a.seed)?)
        }
        Command::BranchingVerify(a) => branching_verify_cmd(a, json)?,
    };
    Ok(text)
}

fn read_text(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(input)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_hypergraph(path: &Path) -> Result<Hypergraph, CliError> {
    parse_hypergraph(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_pinning(path: Option<&PathBuf>, h: &Hypergraph) -> Result<Pinning, CliError> {
    let Some(path) = path else {
        return Ok(Pinning::new());
    };
    let pin = parse_pinning(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    pin.validate(h).map_err(input)?;
    Ok(pin)
}

fn edge_ordering(h: &Hypergraph, seed: Option<u64>) -> EdgeOrdering {
    match seed {
        Some(s) => EdgeOrdering::shuffled(h, &mut ChaCha8Rng::seed_from_u64(s)),
        None => EdgeOrdering::input_order(h),
    }
}

fn to_json(value: serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(&value).expect("json values serialize"))
}

/// `null` for an infinite threshold.
fn finite_or_null(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        serde_json::Value::Null
    }
}

/// Reads `p/q`, integers and decimals with an optional exponent exactly.
fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        return (!q.is_zero()).then(|| BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let factor = if scale >= 0 {
        num::pow(ten, scale as usize)
    } else {
        BigRational::one() / num::pow(ten, (-scale) as usize)
    };
    Some(BigRational::from_integer(num) * factor)
}

fn show_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn exact_cmd(a: &ExactArgs, json: bool) -> Result<String, CliError> {
    let h = load_hypergraph(&a.input)?;
    let pin = load_pinning(a.pin.as_ref(), &h)?;
    let lambda = parse_rational(&a.lambda)
        .filter(|l| *l > BigRational::zero())
        .ok_or_else(|| CliError::Input(format!("--lambda must be a positive number, got {:?}", a.lambda)))?;
    if let Some(v) = a.vertex {
        if v >= h.num_vertices() {
            return Err(input(format!("vertex {v} is out of range")));
        }
    }
    let act = vec![lambda; h.num_vertices()];
    let r = exact_partition_rational(&h, &act, &pin, DEFAULT_MAX_VERTICES).map_err(input)?;
    let z = &r.partition;
    let zf = z.to_f64().unwrap_or(f64::NAN);
    let marginal = a.vertex.map(|v| (v, r.marginal(v)));
    if json {
        let mut obj = json!({
            "partition": show_rational(z),
            "partition_f64": zf,
            "log_partition": zf.ln(),
        });
        if let Some((v, p)) = &marginal {
            obj["vertex"] = json!(v);
            obj["marginal"] = json!(show_rational(p));
            obj["marginal_f64"] = json!(p.to_f64());
        }
        return Ok(to_json(obj));
    }
    let mut s = format!("Z = {}\n", show_rational(z));
    if !z.is_integer() {
        writeln!(s, "Z ~ {zf}").unwrap();
    }
    if let Some((v, p)) = marginal {
        writeln!(s, "P(vertex {v} occupied) = {} ~ {}", show_rational(&p), p.to_f64().unwrap_or(f64::NAN)).unwrap();
    }
    Ok(s)
}

fn count_cmd(a: &CountArgs, json: bool) -> Result<String, CliError> {
    let h = load_hypergraph(&a.input)?;
    let opts = CountOptions {
        order: match a.order {
            OrderArg::Input => VertexOrder::Input,
            OrderArg::Mindeg => VertexOrder::MinDegree,
        },
        max_depth: a.depth,
        edge_ordering: a.seed.map(|s| edge_ordering(&h, Some(s))),
    };
    let r = if a.log {
        approx_log_partition(&h, a.lambda, a.eps, &opts)?
    } else {
        approx_partition(&h, a.lambda, a.eps, &opts)?
    };
    let lc = critical_activity(r.params.d, r.params.k);
    if json {
        return Ok(to_json(json!({
            "estimate": r.estimate,
            "log_estimate": r.log_estimate,
            "eps": a.eps,
            "depth_max": r.depth_used,
            "regime": r.regime,
            "d": r.params.d,
            "k": r.params.k,
            "lambda_c": finite_or_null(lc),
            "certified_error": r.certified_error,
            "log_lower": r.log_lower,
            "log_upper": r.log_upper,
            "guaranteed": r.guaranteed,
        })));
    }
    let target = if a.log { "ln Z" } else { "Z" };
    let mut s = String::new();
    writeln!(s, "{:<16}{}", "target", target).unwrap();
    writeln!(s, "{:<16}{}", "estimate", r.estimate).unwrap();
    writeln!(s, "{:<16}{}", "log_estimate", r.log_estimate).unwrap();
    writeln!(s, "{:<16}[{}, {}]", "ln Z bounds", r.log_lower, r.log_upper).unwrap();
    writeln!(s, "{:<16}{}", "eps", a.eps).unwrap();
    writeln!(s, "{:<16}{}", "certified_error", r.certified_error).unwrap();
    writeln!(s, "{:<16}{}", "depth_max", r.depth_used).unwrap();
    writeln!(s, "{:<16}{}", "regime", r.regime).unwrap();
    writeln!(s, "{:<16}d={} k={} lambda_c={}", "parameters", r.params.d, r.params.k, lc).unwrap();
    if !r.guaranteed {
        writeln!(s, "note            no a-priori guarantee in this regime").unwrap();
    }
    Ok(s)
}

fn activities(lambda: f64) -> Result<ActivityVector, CliError> {
    ActivityVector::uniform(lambda).map_err(input)
}

fn marginal_cmd(a: &MarginalArgs, json: bool) -> Result<String, CliError> {
    let h = load_hypergraph(&a.input)?;
    let pin = load_pinning(a.pin.as_ref(), &h)?;
    let act = activities(a.lambda)?;
    let ord = edge_ordering(&h, a.seed);
    let (lo, hi, truncated, depth) = match a.depth {
        Some(t) => {
            let m = truncated_marginal_with(&h, a.vertex, &ord, &pin, &act, t).map_err(input)?;
            let (lo, hi) = m.interval.probability_bounds();
            (lo, hi, m.truncated, Some(t))
        }
        None => {
            let p = saw_marginal_exact_with(&h, a.vertex, &ord, &pin, &act, DEFAULT_EXPANSION_LIMIT)
                .map_err(input)?;
            (p, p, false, None)
        }
    };
    if json {
        return Ok(to_json(json!({
            "vertex": a.vertex,
            "lower": lo,
            "upper": hi,
            "midpoint": 0.5 * (lo + hi),
            "depth": depth,
            "truncated": truncated,
        })));
    }
    Ok(match depth {
        None => format!("P(vertex {} occupied) = {lo}\n", a.vertex),
        Some(t) => format!(
            "P(vertex {} occupied) in [{lo}, {hi}] at depth {t}{}\n",
            a.vertex,
            if truncated { "" } else { " (exact, tree exhausted)" }
        ),
    })
}

fn saw_cmd(a: &SawArgs) -> Result<String, CliError> {
    let h = load_hypergraph(&a.input)?;
    let pin = load_pinning(a.pin.as_ref(), &h)?;
    let act = activities(a.lambda)?;
    let ord = edge_ordering(&h, a.seed);
    let tree = build_saw_tree(&h, a.vertex, &ord, &pin, &act, a.depth).map_err(input)?;
    Ok(tree.dump())
}

fn threshold_cmd(a: &ThresholdArgs, json: bool) -> Result<String, CliError> {
    if a.d == 0 || a.k == 0 {
        return Err(input("--d and --k must be at least 1"));
    }
    let lc = critical_activity(a.d, a.k);
    let detail = match a.lambda {
        Some(lambda) => {
            let p = ModelParams::new(a.d, a.k, lambda).map_err(input)?;
            Some((
                lambda,
                fixed_point(p.d, p.k, lambda),
                contraction_ratio(p.d, p.k, lambda),
                two_periodic_points(p.d, p.k, lambda),
                classify_regime(p.d, p.k, lambda),
            ))
        }
        None => None,
    };
    if json {
        let mut obj = json!({ "d": a.d, "k": a.k, "lambda_c": finite_or_null(lc) });
        if let Some((lambda, x, r, pts, regime)) = &detail {
            obj["lambda"] = json!(lambda);
            obj["fixed_point"] = json!(x);
            obj["contraction_ratio"] = json!(r);
            obj["two_periodic_points"] = json!(pts);
            obj["regime"] = json!(regime);
        }
        return Ok(to_json(obj));
    }
    let mut s = format!("lambda_c = {lc}\n");
    if let Some((lambda, x, r, pts, regime)) = detail {
        writeln!(s, "lambda = {lambda}").unwrap();
        writeln!(s, "fixed_point = {x}").unwrap();
        writeln!(s, "contraction_ratio = {r}").unwrap();
        let pts: Vec<String> = pts.iter().map(f64::to_string).collect();
        writeln!(s, "two_periodic_points = {}", pts.join(" ")).unwrap();
        writeln!(s, "regime = {regime}").unwrap();
    }
    Ok(s)
}

fn regimes_cmd(a: &RegimesArgs, json: bool) -> Result<String, CliError> {
    if !(a.lambda.is_finite() && a.lambda > 0.0) || a.dmax == 0 || a.kmax == 0 {
        return Err(input("need --lambda > 0 and --dmax, --kmax >= 1"));
    }
    let grid = regime_grid(a.lambda, a.dmax, a.kmax);
    if json {
        let rows: Vec<_> = grid
            .iter()
            .enumerate()
            .flat_map(|(di, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(ki, r)| json!({ "d": di + 1, "k": ki + 1, "regime": r }))
            })
            .collect();
        return Ok(to_json(json!({ "lambda": a.lambda, "cells": rows })));
    }
    let width = 13;
    let mut s = format!("{:<6}", "d\\k");
    for k in 1..=a.kmax {
        write!(s, "{:<width$}", k).unwrap();
    }
    s = s.trim_end().to_string();
    s.push('\n');
    for (di, row) in grid.iter().enumerate() {
        let mut line = format!("{:<6}", di + 1);
        for r in row {
            write!(line, "{:<width$}", r.label()).unwrap();
        }
        s.push_str(line.trim_end());
        s.push('\n');
    }
    Ok(s)
}

fn gadget_cmd(a: &GadgetArgs) -> Result<String, CliError> {
    let g = load_hypergraph(&a.input)?;
    let gadget = gadget_reduce(&g, a.k).map_err(input)?;
    Ok(format!(
        "# copies per vertex t = {}; vertex v becomes v*t .. v*t+t-1\n{}",
        gadget.copies,
        write_hypergraph(&gadget.hypergraph)
    ))
}

fn load_branching(src: &BranchingSource) -> Result<BranchingMatrices, CliError> {
    let b = match (&src.matrices, src.d, src.k) {
        (Some(path), _, _) => {
            parse_branching(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        }
        (None, Some(d), Some(k)) if src.hat => {
            if d == 0 || k == 0 {
                return Err(input("hat matrices need d, k >= 1"));
            }
            if src.merge_k1 {
                if k != 1 {
                    return Err(input("--merge-k1 applies only to k = 1"));
                }
                merged_hat_matrices(d)
            } else {
                hat_matrices(d, k)
            }
        }
        (None, Some(d), Some(k)) => BranchingMatrices::single_type(d, k),
        _ => return Err(input("give --matrices PATH or --d D --k K")),
    };
    validate_branching(&b).map_err(|e| CliError::Input(format!("invalid branching matrices: {e}")))?;
    Ok(b)
}

fn show_vec(v: &[BigRational]) -> String {
    v.iter().map(show_rational).collect::<Vec<_>>().join(" ")
}

fn branching_check_cmd(a: &BranchingCheckArgs, json: bool) -> Result<String, CliError> {
    let b = load_branching(&a.source)?;
    let rev = reversibility(&b)?;
    let trees: Vec<(usize, String, usize, usize)> = match a.radius {
        Some(r) => (0..b.num_vertex_types())
            .map(|i| {
                let t = tree_neighborhood(&b, i, r);
                (i, t.canonical(), t.num_vertices(), t.num_edges())
            })
            .collect(),
        None => Vec::new(),
    };
    let stationary = match &rev {
        Reversibility::Reversible(_) => Some(stationary_distributions(&b)?),
        Reversibility::NotReversible { .. } => None,
    };
    if json {
        let mut obj = json!({
            "tau_v": b.num_vertex_types(),
            "tau_e": b.num_edge_types(),
            "d": b.d(),
            "k": b.k(),
            "valid": true,
            "reversible": rev.is_reversible(),
        });
        match (&rev, &stationary) {
            (Reversibility::Reversible(sol), Some(st)) => {
                obj["p"] = json!(sol.p.iter().map(show_rational).collect::<Vec<_>>());
                obj["q"] = json!(sol.q.iter().map(show_rational).collect::<Vec<_>>());
                obj["vertex_stationary"] = json!(st.p.iter().map(show_rational).collect::<Vec<_>>());
                obj["edge_stationary"] = json!(st.q.iter().map(show_rational).collect::<Vec<_>>());
            }
            (Reversibility::NotReversible { vertex_type, edge_type }, _) => {
                obj["witness"] = json!([vertex_type, edge_type]);
            }
            _ => {}
        }
        if !trees.is_empty() {
            obj["neighborhoods"] = json!(trees
                .iter()
                .map(|(i, c, nv, ne)| json!({ "type": i, "vertices": nv, "edges": ne, "canonical": c }))
                .collect::<Vec<_>>());
        }
        return Ok(to_json(obj));
    }
    let mut s = format!(
        "valid: tau_v={} tau_e={} d={} k={}\n",
        b.num_vertex_types(),
        b.num_edge_types(),
        b.d(),
        b.k()
    );
    match (&rev, &stationary) {
        (Reversibility::Reversible(sol), Some(st)) => {
            writeln!(s, "reversible: yes").unwrap();
            writeln!(s, "p = {}", show_vec(&sol.p)).unwrap();
            writeln!(s, "q = {}", show_vec(&sol.q)).unwrap();
            writeln!(s, "vertex-stationary p' = {}", show_vec(&st.p)).unwrap();
            writeln!(s, "edge-stationary q' = {}", show_vec(&st.q)).unwrap();
        }
        (Reversibility::NotReversible { vertex_type, edge_type }, _) => {
            writeln!(
                s,
                "reversible: no (balance fails at vertex type {vertex_type}, edge type {edge_type})"
            )
            .unwrap();
        }
        _ => {}
    }
    for (i, c, nv, ne) in &trees {
        writeln!(s, "type {i}: {nv} vertices, {ne} edges: {c}").unwrap();
    }
    Ok(s)
}

fn branching_verify_cmd(a: &BranchingVerifyArgs, json: bool) -> Result<String, CliError> {
    let b = load_branching(&a.source)?;
    let h = parse_typed_hypergraph(&read_text(&a.input)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", a.input.display())))?;
    let counts = verify_incidence_counts(&h, &b);
    let fractions = local_convergence_rate(&h, &b, a.radius, a.samples, a.seed)?;
    if json {
        return Ok(to_json(json!({
            "vertices": h.num_vertices(),
            "edges": h.num_edges(),
            "incidence_counts_exact": counts.is_ok(),
            "incidence_defect": counts.err().map(|d| format!("{d:?}")),
            "radius": a.radius,
            "tree_fraction": fractions,
        })));
    }
    let mut s = format!("vertices = {}, edges = {}\n", h.num_vertices(), h.num_edges());
    match counts {
        Ok(()) => writeln!(s, "incidence counts: exact").unwrap(),
        Err(d) => writeln!(s, "incidence counts: defect {d:?}").unwrap(),
    }
    writeln!(s, "{:<6}tree fraction at radius {}", "type", a.radius).unwrap();
    for (i, f) in fractions.iter().enumerate() {
        match f {
            Some(f) => writeln!(s, "{i:<6}{f}").unwrap(),
            None => writeln!(s, "{i:<6}-").unwrap(),
        }
    }
    Ok(s)
}
