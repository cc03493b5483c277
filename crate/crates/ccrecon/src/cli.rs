//! `ccrecon enumerate | run | verify`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use ccrecon_core::graphs::{class_by_name, CATALOG_NAMES};
use ccrecon_core::protocols::{build, ProtocolId};
use ccrecon_core::{execute, GraphClass, LabeledGraph, Outcome};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::graph_file;
use crate::oracle::suites::{self, Selection};
use crate::oracle::{all_graphs_on, SeedRange, TrialReport};
use crate::report::{self, SummaryRow};
use crate::transcript_json::TranscriptJson;

#[derive(Debug, Parser)]
#[command(name = "ccrecon", version, about = "Graph reconstruction in the congested clique")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the members of a class in canonical order.
    Enumerate(EnumerateArgs),
    /// Run a protocol and print one summary row per input graph.
    Run(RunArgs),
    /// Run verification suites; exits nonzero if any claim fails.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub class: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub class: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub protocol: ProtocolId,
    /// A graph file, `member:IDX`, `all-members` or `all-graphs`.
    #[arg(long, default_value = "all-members")]
    pub graph: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seeds per input graph, starting at `--seed`.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Fail the run if any message exceeds this many bits.
    #[arg(long)]
    pub bandwidth_cap: Option<usize>,
    /// Directory receiving one transcript JSON per run.
    #[arg(long)]
    pub transcripts: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma1,
    Distance,
    Separator,
    Protocols,
    Hereditary,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Restrict class-based suites to these classes (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub class: Option<Vec<String>>,
    /// Restrict class-based suites to this order.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seeds per graph for randomized protocols.
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `json` prints one report per line, `text` one summary per line.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

pub fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Enumerate(a) => enumerate(a),
        Command::Run(a) => run_protocol(a),
        Command::Verify(a) => verify(a),
    }
}

fn lookup_class(name: &str) -> anyhow::Result<GraphClass> {
    class_by_name(name).with_context(|| format!("unknown class `{name}`; known: {}", CATALOG_NAMES.join(", ")))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn edge_pairs(g: &LabeledGraph) -> Vec<[usize; 2]> {
    g.edges().map(|(u, v)| [u + 1, v + 1]).collect()
}

#[derive(Serialize)]
struct Listing<'a> {
    class: &'a str,
    n: usize,
    count: usize,
    graphs: Vec<Vec<[usize; 2]>>,
}

fn enumerate(a: EnumerateArgs) -> anyhow::Result<ExitCode> {
    let class = lookup_class(&a.class)?;
    let members = class.enumerate(a.n)?;
    let text = match a.format {
        Format::Text => {
            let mut s = format!("# {} n={}: {} graphs\n", class.name(), a.n, members.len());
            for (i, g) in members.iter().enumerate() {
                writeln!(s, "{i} {g}")?;
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("index,edges\n");
            for (i, g) in members.iter().enumerate() {
                let edges: Vec<String> = g.edges().map(|(u, v)| format!("{}-{}", u + 1, v + 1)).collect();
                writeln!(s, "{i},{}", edges.join(" "))?;
            }
            s
        }
        Format::Json => {
            let listing = Listing {
                class: class.name(),
                n: a.n,
                count: members.len(),
                graphs: members.iter().map(edge_pairs).collect(),
            };
            serde_json::to_string_pretty(&listing)? + "\n"
        }
    };
    emit(a.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

/// Inputs of a run, each with its membership.
fn inputs(class: &GraphClass, n: usize, source: &str) -> anyhow::Result<Vec<(LabeledGraph, bool)>> {
    let members = class.enumerate(n)?;
    Ok(match source {
        "all-members" => members.iter().map(|g| (g.clone(), true)).collect(),
        "all-graphs" => {
            if n > 7 {
                bail!("all-graphs is limited to n <= 7");
            }
            all_graphs_on(n)
                .into_iter()
                .map(|g| {
                    let m = class.contains(&g);
                    (g, m)
                })
                .collect()
        }
        s if s.starts_with("member:") => {
            let idx: usize = s["member:".len()..].parse().context("member index")?;
            let g = members
                .get(idx)
                .with_context(|| format!("member index {idx} out of range (class has {})", members.len()))?;
            vec![(g.clone(), true)]
        }
        s => {
            let path = s.strip_prefix("file:").unwrap_or(s);
            let g = graph_file::read(Path::new(path))?;
            if g.n() != n {
                bail!("graph file has {} nodes, --n is {n}", g.n());
            }
            let m = class.contains(&g);
            vec![(g, m)]
        }
    })
}

struct GraphRuns {
    row: SummaryRow,
    transcripts: Vec<(u64, TranscriptJson)>,
}

fn run_protocol(a: RunArgs) -> anyhow::Result<ExitCode> {
    let class = lookup_class(&a.class)?;
    let n = a.n;
    let class_size = class.cardinality(n)?;
    let inputs = inputs(&class, n, &a.graph)?;
    let proto = build(a.protocol, &class, n)?;
    let keep = a.transcripts.is_some();
    if a.trials == 0 {
        bail!("--trials must be positive");
    }

    let runs: Vec<anyhow::Result<GraphRuns>> = inputs
        .par_iter()
        .map(|(g, member)| {
            let mut row = SummaryRow {
                protocol: a.protocol.to_string(),
                class: class.name().to_string(),
                n,
                class_size,
                rounds: 0,
                bandwidth_bits: 0,
                cost: 0,
                lb_bits: report::lower_bound_bits(class_size, n),
                accepts: 0,
                rejects: 0,
                errors: 0,
            };
            let mut transcripts = Vec::new();
            for seed in a.seed..a.seed + a.trials {
                let run = execute(&proto, g, seed, a.bandwidth_cap)
                    .with_context(|| format!("{} on {g}, seed {seed}", a.protocol))?;
                let t = &run.transcript;
                row.rounds = row.rounds.max(t.rounds_used());
                row.bandwidth_bits = row.bandwidth_bits.max(t.bandwidth());
                row.cost = row.cost.max(t.cost());
                let out = run.outcome();
                if out.is_accept() {
                    row.accepts += 1;
                } else {
                    row.rejects += 1;
                }
                let wrong = if *member {
                    *out != Outcome::Reconstructed(g.clone())
                } else {
                    a.protocol.is_strong() && out.is_accept()
                };
                row.errors += u64::from(wrong);
                if keep {
                    transcripts.push((seed, TranscriptJson::from_execution(&run)));
                }
            }
            Ok(GraphRuns { row, transcripts })
        })
        .collect();
    let runs = runs.into_iter().collect::<anyhow::Result<Vec<_>>>()?;

    if let Some(dir) = &a.transcripts {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (i, r) in runs.iter().enumerate() {
            for (seed, t) in &r.transcripts {
                let path = dir.join(format!("g{i:05}-s{seed}.json"));
                fs::write(&path, serde_json::to_string_pretty(t)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }

    let rows: Vec<SummaryRow> = runs.into_iter().map(|r| r.row).collect();
    let text = match a.format {
        Format::Json => report::to_json(&rows),
        Format::Csv | Format::Text => report::to_csv(&rows)?,
    };
    emit(a.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn selection(a: &VerifyArgs) -> anyhow::Result<Selection> {
    let mut sel = match &a.class {
        None => Selection::standard(),
        Some(names) => {
            let mut entries = Vec::new();
            for name in names.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
                let class = lookup_class(name)?;
                let top = class.n_max().min(5);
                entries.push((class, (1..=top).collect()));
            }
            Selection { entries }
        }
    };
    if let Some(n) = a.n {
        for (class, ns) in &mut sel.entries {
            *ns = if n <= class.n_max() { vec![n] } else { Vec::new() };
        }
    }
    Ok(sel)
}

fn verify(a: VerifyArgs) -> anyhow::Result<ExitCode> {
    let sel = selection(&a)?;
    let seeds = SeedRange::new(a.seed, a.trials);
    let wants = |s: Suite| a.suite == s || a.suite == Suite::All;
    let needs_classes = [Suite::Separator, Suite::Protocols, Suite::Hereditary, Suite::All].contains(&a.suite);
    if needs_classes && sel.is_empty() {
        eprintln!("warning: the class selection is empty; class-based checks skipped");
    }

    let mut reports: Vec<TrialReport> = Vec::new();
    let mut hard_error = None;
    let mut step = |r: Result<Vec<TrialReport>, crate::oracle::OracleError>| match r {
        Ok(v) => reports.extend(v),
        Err(e) => {
            hard_error.get_or_insert(e);
        }
    };
    if wants(Suite::Lemma1) {
        step(suites::lemma1());
    }
    if wants(Suite::Distance) {
        step(suites::distance());
    }
    if wants(Suite::Separator) {
        step(suites::separator(&sel));
    }
    if wants(Suite::Protocols) {
        step(suites::protocols(&sel, seeds));
    }
    if wants(Suite::Hereditary) {
        step(suites::hereditary(&sel, seeds));
    }

    let mut text = String::new();
    for r in &reports {
        match a.format {
            Format::Text | Format::Csv => writeln!(text, "{}", r.summary())?,
            Format::Json => writeln!(text, "{}", r.to_json_line())?,
        }
    }
    emit(a.out.as_deref(), &text)?;

    let failed = reports.iter().filter(|r| !r.pass).count();
    if let Some(e) = hard_error {
        eprintln!("verification error: {e}");
        return Ok(ExitCode::FAILURE);
    }
    if failed > 0 {
        eprintln!("{failed} of {} claims failed", reports.len());
        return Ok(ExitCode::FAILURE);
    }
    eprintln!("all {} claims passed", reports.len());
    Ok(ExitCode::SUCCESS)
}
