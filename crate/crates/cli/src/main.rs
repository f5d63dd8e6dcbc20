//! `pancake`: girths, cycle-length searches and explicit cycles in
//! generalized pancake graphs.
//!
//! Exit codes: 0 success, 1 verification or girth prediction mismatch, 2 usage error,
//! 3 search budget expired.

mod reference;
mod report;

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pancake_core::construct::{admissible_lengths, check_admissible, construct_cycle};
use pancake_core::graph::{girth, to_dot};
use pancake_core::search::{parallel_cycle_search, SearchConfig, DEFAULT_SPAWN_DEPTH};
use pancake_core::witness::{read_witnesses, write_witness};
use pancake_core::{Error, GraphParams};

use report::{describe, RunReport};

const SUCCESS: i32 = 0;
const MISMATCH: i32 = 1;
const USAGE: i32 = 2;
const BUDGET: i32 = 3;

/// Default vertex cap for exhaustive commands.
const EXHAUSTIVE_CAP: u64 = 200;

#[derive(Parser)]
#[command(
    name = "pancake",
    version,
    about = "Cycles in generalized pancake graphs"
)]
struct Cli {
    /// Write a machine-readable report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Shape {
    /// Number of signs.
    #[arg(short = 'm')]
    m: u32,
    /// Number of symbols.
    #[arg(short = 'n')]
    n: usize,
    /// Use the directed graph P(m,n) instead of UP(m,n).
    #[arg(long)]
    directed: bool,
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Path length (in edges) at which work is split into tasks.
    #[arg(long, default_value_t = DEFAULT_SPAWN_DEPTH)]
    spawn_depth: usize,
    /// Stop after this many seconds and report partial results.
    #[arg(long)]
    budget_seconds: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Girth of UP(m,n) or P(m,n).
    Girth {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 1_000_000)]
        max_vertices: u64,
    },
    /// Exhaustive search for every cycle length.
    Search {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        search: SearchArgs,
        /// Witness file (one JSON record per length found).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = EXHAUSTIVE_CAP)]
        max_vertices: u64,
    },
    /// Build and verify an explicit cycle in UP(m,n).
    Construct {
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: usize,
        /// Cycle length to build.
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        length: Option<usize>,
        /// Build every admissible length.
        #[arg(long)]
        all: bool,
        /// Witness file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay every witness record in a file.
    Verify { file: PathBuf },
    /// Recompute the published cycle-length rows that fit under the cap.
    Table {
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = EXHAUSTIVE_CAP)]
        max_vertices: u64,
    },
    /// Graphviz rendering of the graph.
    ExportDot {
        #[command(flatten)]
        shape: Shape,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = EXHAUSTIVE_CAP)]
        max_vertices: u64,
    },
}

/// Result of a command: exit code, echoed parameters and payload.
struct Done {
    code: i32,
    params: Value,
    result: Value,
}

/// Failure before a result was produced.
struct Failed {
    code: i32,
    message: String,
}

impl From<Error> for Failed {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Construction(_) | Error::Witness(_) => MISMATCH,
            _ => USAGE,
        };
        Failed {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failed {
    fn from(e: std::io::Error) -> Self {
        Failed {
            code: USAGE,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<Done, Failed>;

fn graph_name(p: &GraphParams) -> String {
    let prefix = if p.directed { "P" } else { "UP" };
    format!("{prefix}({},{})", p.m, p.n)
}

fn shape_json(p: &GraphParams) -> Value {
    json!({ "m": p.m, "n": p.n, "directed": p.directed })
}

fn create(path: &Path) -> Result<BufWriter<File>, Failed> {
    File::create(path).map(BufWriter::new).map_err(|e| Failed {
        code: USAGE,
        message: format!("cannot create {}: {e}", path.display()),
    })
}

fn config(params: GraphParams, args: &SearchArgs) -> Result<SearchConfig, Failed> {
    let budget = match args.budget_seconds {
        Some(s) if !(s.is_finite() && s >= 0.0) => {
            return Err(Failed {
                code: USAGE,
                message: format!("budget {s} is not a non-negative number of seconds"),
            })
        }
        s => s.map(Duration::from_secs_f64),
    };
    Ok(SearchConfig::new(params)
        .threads(args.threads)
        .spawn_depth(args.spawn_depth)
        .budget(budget))
}

fn cmd_girth(shape: Shape, cap: u64) -> Outcome {
    let params = GraphParams::with_cap(shape.m, shape.n, shape.directed, cap)?;
    let g = girth(&params)?;
    let predicted = params.predicted_girth();
    let shown = g.map_or("none (acyclic)".to_string(), |g| g.to_string());
    let mut code = SUCCESS;
    match predicted {
        Some(p) => {
            let ok = g == Some(p);
            println!(
                "girth {} = {shown} (predicted {p}, {})",
                graph_name(&params),
                if ok { "match" } else { "MISMATCH" }
            );
            if !ok {
                code = MISMATCH;
            }
        }
        None => println!("girth {} = {shown}", graph_name(&params)),
    }
    Ok(Done {
        code,
        params: shape_json(&params),
        result: json!({ "girth": g, "predicted": predicted, "matches": predicted.map(|p| g == Some(p)) }),
    })
}

/// Prints the published comparison for a search result.
fn compare(params: &GraphParams, found: &BTreeSet<usize>, exhausted: bool) -> Value {
    let published = reference::lookup(params).map(|r| r.lengths);
    if let Some(expected) = &published {
        if found == expected {
            println!("  published: {} (match)", describe(expected));
        } else {
            let extra: Vec<usize> = found.difference(expected).copied().collect();
            let absent: Vec<usize> = expected.difference(found).copied().collect();
            println!(
                "  published: {} (DIFFERS: found extra {:?}, missing {:?}{})",
                describe(expected),
                extra,
                absent,
                if exhausted { "" } else { "; search incomplete" }
            );
        }
    }
    let note = reference::p32_variant(params, found);
    if let Some(note) = &note {
        println!("  note: {note}");
    }
    json!({
        "published": published.as_ref().map(|p| p.iter().copied().collect::<Vec<_>>()),
        "matches_published": published.as_ref().map(|p| p == found),
        "note": note,
    })
}

fn cmd_search(shape: Shape, args: &SearchArgs, out: Option<&Path>, cap: u64) -> Outcome {
    let params = GraphParams::with_cap(shape.m, shape.n, shape.directed, cap)?;
    let config = config(params, args)?;
    let mut sink = out.map(create).transpose()?;
    let outcome =
        parallel_cycle_search(&config, sink.as_mut().map(|w| w as &mut (dyn Write + Send)))?;
    println!(
        "{}: {} vertices, cycle lengths {}, {}",
        graph_name(&params),
        params.vertex_count(),
        describe(&outcome.lengths),
        if outcome.exhausted {
            "exhausted"
        } else {
            "BUDGET EXPIRED (partial)"
        }
    );
    let comparison = compare(&params, &outcome.lengths, outcome.exhausted);
    if let Some(path) = out {
        println!("  witnesses: {}", path.display());
    }
    Ok(Done {
        code: if outcome.exhausted { SUCCESS } else { BUDGET },
        params: json!({
            "graph": shape_json(&params),
            "threads": args.threads,
            "spawn_depth": args.spawn_depth,
            "budget_seconds": args.budget_seconds,
        }),
        result: json!({
            "summary": outcome.summary(),
            "comparison": comparison,
            "nodes": outcome.stats.nodes,
            "tasks": outcome.stats.tasks,
        }),
    })
}

fn cmd_construct(
    m: u32,
    n: usize,
    length: Option<usize>,
    all: bool,
    out: Option<&Path>,
) -> Outcome {
    let lengths = if all {
        admissible_lengths(m, n)?
    } else {
        let length = length.expect("clap requires --length or --all");
        check_admissible(m, n, length)?;
        vec![length]
    };
    let mut sink = out.map(create).transpose()?;
    let mut failures = Vec::new();
    let mut built = 0usize;
    for &len in &lengths {
        let verdict = construct_cycle(m, n, len).and_then(|w| {
            w.verify()?;
            if let Some(sink) = sink.as_mut() {
                write_witness(sink, &w)?;
            }
            Ok(())
        });
        match verdict {
            Ok(()) => built += 1,
            Err(e) => {
                eprintln!("length {len}: {e}");
                failures.push(json!({ "length": len, "error": e.to_string() }));
            }
        }
    }
    if let Some(sink) = sink.as_mut() {
        sink.flush()?;
    }
    let name = format!("UP({m},{n})");
    if all {
        let set: BTreeSet<usize> = lengths.iter().copied().collect();
        println!(
            "{name}: {built} of {} witnesses verified (lengths {})",
            lengths.len(),
            describe(&set)
        );
    } else if failures.is_empty() {
        println!("{name}: length {} witness verified", lengths[0]);
    }
    Ok(Done {
        code: if failures.is_empty() {
            SUCCESS
        } else {
            MISMATCH
        },
        params: json!({ "m": m, "n": n, "length": length, "all": all }),
        result: json!({
            "lengths": lengths,
            "verified": built,
            "failures": failures,
            "out": out.map(|p| p.display().to_string()),
        }),
    })
}

fn cmd_verify(file: &Path) -> Outcome {
    let reader = File::open(file).map_err(|e| Failed {
        code: USAGE,
        message: format!("cannot open {}: {e}", file.display()),
    })?;
    let records = read_witnesses(BufReader::new(reader));
    let mut failures = Vec::new();
    for (line, record) in &records {
        if let Err(e) = record
            .as_ref()
            .map_err(Error::clone)
            .and_then(|w| w.verify())
        {
            println!("line {line}: FAIL {e}");
            failures.push(json!({ "line": line, "error": e.to_string() }));
        }
    }
    println!(
        "{} records, {} passed, {} failed",
        records.len(),
        records.len() - failures.len(),
        failures.len()
    );
    Ok(Done {
        code: if failures.is_empty() {
            SUCCESS
        } else {
            MISMATCH
        },
        params: json!({ "file": file.display().to_string() }),
        result: json!({ "records": records.len(), "failures": failures }),
    })
}

fn cmd_table(args: &SearchArgs, cap: u64) -> Outcome {
    let mut rows = Vec::new();
    let mut code = SUCCESS;
    for row in reference::rows() {
        let Ok(params) = GraphParams::with_cap(row.m, row.n, row.directed, cap) else {
            continue;
        };
        let outcome = parallel_cycle_search(&config(params, args)?, None)?;
        let verdict = if !outcome.exhausted {
            code = BUDGET;
            "incomplete"
        } else if outcome.lengths == row.lengths {
            "match"
        } else {
            "DIFFERS"
        };
        println!(
            "{:<8} {:>4} vertices  found {}  published {}  {verdict}",
            graph_name(&params),
            params.vertex_count(),
            describe(&outcome.lengths),
            describe(&row.lengths),
        );
        let note = reference::p32_variant(&params, &outcome.lengths);
        if let Some(note) = &note {
            println!("         note: {note}");
        }
        rows.push(json!({
            "graph": shape_json(&params),
            "found": outcome.lengths,
            "published": row.lengths,
            "exhausted": outcome.exhausted,
            "matches_published": outcome.lengths == row.lengths,
            "note": note,
            "wall_seconds": outcome.wall_seconds,
        }));
    }
    Ok(Done {
        code,
        params: json!({ "max_vertices": cap, "threads": args.threads }),
        result: json!({ "rows": rows }),
    })
}

fn cmd_export_dot(shape: Shape, out: Option<&Path>, cap: u64) -> Outcome {
    let params = GraphParams::with_cap(shape.m, shape.n, shape.directed, cap)?;
    let dot = to_dot(&params, cap)?;
    match out {
        Some(path) => {
            let mut w = create(path)?;
            w.write_all(dot.as_bytes())?;
            w.flush()?;
            println!("{} written to {}", graph_name(&params), path.display());
        }
        None => print!("{dot}"),
    }
    Ok(Done {
        code: SUCCESS,
        params: shape_json(&params),
        result: json!({ "out": out.map(|p| p.display().to_string()) }),
    })
}

fn run(command: &Command) -> Outcome {
    match command {
        Command::Girth {
            shape,
            max_vertices,
        } => cmd_girth(*shape, *max_vertices),
        Command::Search {
            shape,
            search,
            out,
            max_vertices,
        } => cmd_search(*shape, search, out.as_deref(), *max_vertices),
        Command::Construct {
            m,
            n,
            length,
            all,
            out,
        } => cmd_construct(*m, *n, *length, *all, out.as_deref()),
        Command::Verify { file } => cmd_verify(file),
        Command::Table {
            search,
            max_vertices,
        } => cmd_table(search, *max_vertices),
        Command::ExportDot {
            shape,
            out,
            max_vertices,
        } => cmd_export_dot(*shape, out.as_deref(), *max_vertices),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (code, params, result) = match run(&cli.command) {
        Ok(done) => (done.code, done.params, done.result),
        Err(failed) => {
            eprintln!("error: {}", failed.message);
            (failed.code, Value::Null, json!({ "error": failed.message }))
        }
    };
    if let Some(path) = &cli.json {
        let report = RunReport {
            command: std::env::args().collect(),
            params,
            result,
            wall_seconds: started.elapsed().as_secs_f64(),
            exit_code: code,
        };
        if let Err(e) = report.write(path) {
            eprintln!("error: {e:#}");
            return ExitCode::from(USAGE as u8);
        }
    }
    ExitCode::from(code as u8)
}
