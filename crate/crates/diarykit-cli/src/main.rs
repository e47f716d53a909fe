//! Command-line surface for diary enumeration, counting, big Ramsey
//! degrees, the naive oracle, anticlique counting and tangent numbers.
//!
//! Exit codes: 0 success, 1 input error, 2 validation failed, 3 resource
//! cap exceeded. Results go to stdout; diagnostics and progress go to
//! stderr. Set `DIARYKIT_LOG=debug` for verbose diagnostics.

use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use diarykit::diary::{self, Diary};
use diarykit::graphs::{self, SmallGraph};
use diarykit::oracle::{self, OracleConfig, OracleError};
use diarykit::search::{self, SearchError, SearchLimits};
use diarykit::seq;
use diarykit::state::MAX_BRANCHES;

/// Largest target vertex count the CLI will search for.
const MAX_TARGET_VERTICES: usize = 4;

#[derive(Parser)]
#[command(
    name = "diarykit",
    version,
    about = "Diaries and big Ramsey degrees in the K4-free Henson graph"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for result records.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Override the per-path event cap.
    #[arg(long, global = true)]
    depth_cap: Option<u32>,
    /// Abort after this many explored nodes.
    #[arg(long, global = true)]
    node_cap: Option<u64>,
    /// Worker threads for counting searches.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Print periodic progress to stderr.
    #[arg(long, global = true)]
    progress: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Count diaries for a target graph and compute its big Ramsey degree.
    Degree { spec: String },
    /// Stream every diary for a target graph.
    Enumerate {
        spec: String,
        /// Stream format: one JSON object per line, or one DOT document per
        /// diary.
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
    /// Validate a diary file ({"words": [...]}; "-" reads stdin).
    Validate { path: String },
    /// Run the naive explicit-word oracle and report class counts.
    Oracle {
        /// Collect diaries with at most this many leaves.
        #[arg(long, default_value_t = 2)]
        max_leaves: usize,
        /// Cross-check one target graph against the abstract engine.
        #[arg(long)]
        check: Option<String>,
    },
    /// Count anticlique diaries with the memoized engine.
    Anticlique { n: usize },
    /// Print the n-th odd tangent number.
    Tangent { n: usize },
    /// Print the automorphism group order of a graph.
    Aut { spec: String },
    /// Test two graphs for isomorphism.
    Iso { a: String, b: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Dot,
}

// ===== Failure plumbing =====

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }

    fn validation(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    fn capped(message: impl Into<String>) -> Failure {
        Failure { code: 3, message: message.into() }
    }
}

fn search_failure(e: SearchError) -> Failure {
    match e {
        SearchError::DepthCapExceeded { .. } | SearchError::NodeCapExceeded { .. } => {
            Failure::capped(e.to_string())
        }
        _ => Failure::input(e.to_string()),
    }
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::DepthCapExceeded { .. } => Failure::capped(e.to_string()),
        OracleError::Search(inner) => search_failure(inner),
        _ => Failure::input(e.to_string()),
    }
}

fn verbose() -> bool {
    matches!(
        std::env::var("DIARYKIT_LOG").ok().as_deref(),
        Some("1") | Some("debug") | Some("verbose")
    )
}

fn vlog(msg: impl AsRef<str>) {
    if verbose() {
        eprintln!("[diarykit] {}", msg.as_ref());
    }
}

// ===== Output records =====

fn print_record(
    format: Format,
    command: &str,
    input: serde_json::Value,
    result: serde_json::Value,
    plain: &str,
    started: Instant,
) {
    match format {
        Format::Plain => println!("{plain}"),
        Format::Json => {
            let record = json!({
                "command": command,
                "input": input,
                "result": result,
                "elapsed_ms": started.elapsed().as_millis() as u64,
                "version": env!("CARGO_PKG_VERSION"),
            });
            println!("{record}");
        }
    }
}

// ===== Limits =====

fn search_limits(cli: &Cli, target_size: usize) -> SearchLimits {
    let mut limits = SearchLimits::for_target_size(target_size.min(MAX_TARGET_VERTICES));
    limits.max_vertices = MAX_TARGET_VERTICES;
    if let Some(cap) = cli.depth_cap {
        limits.depth_cap = cap;
    }
    limits.node_cap = cli.node_cap;
    limits.workers = cli.workers.max(1);
    limits.progress = cli.progress;
    limits
}

fn parse_target(spec: &str) -> Result<SmallGraph, Failure> {
    graphs::parse_spec(spec).map_err(|e| Failure::input(format!("bad graph spec: {e}")))
}

// ===== Commands =====

fn cmd_degree(cli: &Cli, spec: &str) -> Result<(), Failure> {
    let started = Instant::now();
    let g = parse_target(spec)?;
    let limits = search_limits(cli, g.n());
    vlog(format!(
        "degree target={} depth_cap={} node_cap={:?} workers={}",
        graphs::describe(&g),
        limits.depth_cap,
        limits.node_cap,
        limits.workers
    ));
    let r = search::count_diaries(&g, &limits).map_err(search_failure)?;
    vlog(format!("explored {} nodes in {:?}", r.nodes_explored, started.elapsed()));
    let plain = format!(
        "target: {}\ndiary_count: {}\naut: {}\ndegree: {}\nnodes_explored: {}",
        graphs::describe(&g),
        r.diary_count,
        r.aut,
        r.degree,
        r.nodes_explored
    );
    print_record(
        cli.format,
        "degree",
        json!(spec),
        json!({
            "target": graphs::describe(&g),
            "diary_count": r.diary_count.to_string(),
            "aut": r.aut.to_string(),
            "degree": r.degree.to_string(),
            "nodes_explored": r.nodes_explored.to_string(),
        }),
        &plain,
        started,
    );
    Ok(())
}

fn cmd_enumerate(cli: &Cli, spec: &str, emit: Emit) -> Result<(), Failure> {
    let g = parse_target(spec)?;
    let limits = search_limits(cli, g.n());
    let started = Instant::now();
    let diaries = search::enumerate_diaries(&g, &limits).map_err(search_failure)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for d in &diaries {
        let text = match emit {
            Emit::Json => serde_json::to_string(d)
                .map_err(|e| Failure::input(format!("serialization failed: {e}")))?,
            Emit::Dot => diary::to_dot(d)
                .map_err(|e| Failure::input(format!("DOT export failed: {e}")))?,
        };
        // Downstream consumers (head, grep -m) may close the stream early;
        // that is a normal end of output, not an error.
        if let Err(e) = writeln!(out, "{text}") {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                return Ok(());
            }
            return Err(Failure::input(format!("cannot write to stdout: {e}")));
        }
    }
    vlog(format!("enumerated {} diaries in {:?}", diaries.len(), started.elapsed()));
    Ok(())
}

fn read_diary(path: &str) -> Result<Diary, Failure> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::input(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("bad diary file: {e}")))
}

fn cmd_validate(cli: &Cli, path: &str) -> Result<(), Failure> {
    let started = Instant::now();
    let d = read_diary(path)?;
    let report = diary::validate(&d);
    match &report {
        diary::ValidationReport::Valid { events } => {
            let mut plain = String::from("valid: true");
            for e in events {
                plain.push('\n');
                plain.push_str(&e.to_string());
            }
            print_record(
                cli.format,
                "validate",
                json!(path),
                json!({ "valid": true, "events": events }),
                &plain,
                started,
            );
            Ok(())
        }
        diary::ValidationReport::Invalid { failure } => {
            let plain = format!(
                "valid: false\nlevel: {}\nreason: {}",
                failure.level.map_or("none".to_string(), |l| l.to_string()),
                failure.reason
            );
            print_record(
                cli.format,
                "validate",
                json!(path),
                json!({ "valid": false, "failure": failure }),
                &plain,
                started,
            );
            Err(Failure::validation(format!("diary is invalid: {}", failure.reason)))
        }
    }
}

fn cmd_oracle(cli: &Cli, max_leaves: usize, check: Option<&str>) -> Result<(), Failure> {
    let started = Instant::now();
    let mut cfg = OracleConfig::for_max_leaves(max_leaves);
    if let Some(cap) = cli.depth_cap {
        cfg.depth_cap = cap;
    }
    if let Some(spec) = check {
        let g = parse_target(spec)?;
        let report = oracle::cross_check(&g, &cfg).map_err(oracle_failure)?;
        let plain = format!(
            "target: {}\nmatches: {}\noracle_count: {}\nengine_count: {}",
            graphs::describe(&g),
            report.matches,
            report.oracle_count,
            report.engine_count
        );
        let diff = |side: &[Diary]| -> Vec<serde_json::Value> {
            side.iter().take(5).map(|d| serde_json::to_value(d).unwrap_or_default()).collect()
        };
        print_record(
            cli.format,
            "oracle",
            json!({ "max_leaves": max_leaves, "check": spec }),
            json!({
                "matches": report.matches,
                "oracle_count": report.oracle_count.to_string(),
                "engine_count": report.engine_count.to_string(),
                "only_oracle": diff(&report.only_oracle),
                "only_engine": diff(&report.only_engine),
            }),
            &plain,
            started,
        );
        if !report.matches {
            return Err(Failure::validation(format!(
                "oracle and engine disagree on {}: {} vs {} diaries",
                graphs::describe(&g),
                report.oracle_count,
                report.engine_count
            )));
        }
        return Ok(());
    }
    let diaries = oracle::naive_enumerate(&cfg).map_err(oracle_failure)?;
    let buckets = oracle::classify_by_graph(&diaries).map_err(oracle_failure)?;
    let exactly_max = diaries.iter().filter(|d| d.len() == max_leaves).count();
    let mut plain = format!(
        "oracle enumerated {} diaries with at most {} leaves ({} with exactly {})",
        diaries.len(),
        max_leaves,
        exactly_max,
        max_leaves
    );
    let mut classes = serde_json::Map::new();
    let mut named: Vec<(String, usize)> =
        buckets.values().map(|(g, c)| (graphs::describe(g), *c)).collect();
    named.sort();
    for (name, count) in &named {
        plain.push_str(&format!("\n  {name}: {count}"));
        classes.insert(name.clone(), json!(count.to_string()));
    }
    print_record(
        cli.format,
        "oracle",
        json!({ "max_leaves": max_leaves }),
        json!({
            "total": diaries.len().to_string(),
            "exactly_max": exactly_max.to_string(),
            "classes": classes,
        }),
        &plain,
        started,
    );
    Ok(())
}

fn cmd_anticlique(cli: &Cli, n: usize) -> Result<(), Failure> {
    let started = Instant::now();
    if n > MAX_BRANCHES {
        return Err(Failure::input(format!(
            "anticlique sizes above {MAX_BRANCHES} are unsupported"
        )));
    }
    let mut limits = SearchLimits::for_target_size(n.max(1));
    limits.node_cap = cli.node_cap;
    limits.progress = cli.progress;
    let count = search::count_anticlique_memoized(n, &limits).map_err(search_failure)?;
    let plain = format!("n: {n}\ndiary_count: {count}");
    print_record(
        cli.format,
        "anticlique",
        json!(n),
        json!({ "n": n.to_string(), "diary_count": count.to_string() }),
        &plain,
        started,
    );
    Ok(())
}

fn cmd_tangent(cli: &Cli, n: usize) -> Result<(), Failure> {
    let started = Instant::now();
    let value = seq::tangent_number(n).map_err(|e| Failure::input(e.to_string()))?;
    print_record(
        cli.format,
        "tangent",
        json!(n),
        json!({ "n": n.to_string(), "value": value.to_string() }),
        &format!("tangent({n}): {value}"),
        started,
    );
    Ok(())
}

fn cmd_aut(cli: &Cli, spec: &str) -> Result<(), Failure> {
    let started = Instant::now();
    let g = parse_target(spec)?;
    let order = graphs::aut_order(&g).map_err(|e| Failure::input(e.to_string()))?;
    print_record(
        cli.format,
        "aut",
        json!(spec),
        json!({ "target": graphs::describe(&g), "aut": order.to_string() }),
        &format!("target: {}\naut: {order}", graphs::describe(&g)),
        started,
    );
    Ok(())
}

fn cmd_iso(cli: &Cli, a: &str, b: &str) -> Result<(), Failure> {
    let started = Instant::now();
    let ga = parse_target(a)?;
    let gb = parse_target(b)?;
    let same = graphs::is_isomorphic(&ga, &gb).map_err(|e| Failure::input(e.to_string()))?;
    print_record(
        cli.format,
        "iso",
        json!({ "a": a, "b": b }),
        json!({ "isomorphic": same }),
        &format!("isomorphic: {same}"),
        started,
    );
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Degree { spec } => cmd_degree(cli, spec),
        Command::Enumerate { spec, emit } => cmd_enumerate(cli, spec, *emit),
        Command::Validate { path } => cmd_validate(cli, path),
        Command::Oracle { max_leaves, check } => {
            cmd_oracle(cli, *max_leaves, check.as_deref())
        }
        Command::Anticlique { n } => cmd_anticlique(cli, *n),
        Command::Tangent { n } => cmd_tangent(cli, *n),
        Command::Aut { spec } => cmd_aut(cli, spec),
        Command::Iso { a, b } => cmd_iso(cli, a, b),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
