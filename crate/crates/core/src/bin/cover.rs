use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use deltacover::approx::approx_cover;
use deltacover::bench::{run_bench, write_csv, BenchConfig, BenchOptions, GeneratorSpec, NamedGraph, SourceGraph};
use deltacover::generators::Family;
use deltacover::io::{format_cover, format_graph, parse_graph_file, read_cover};
use deltacover::setcover::{min_cover_exact, Budget, SolveResult};
use deltacover::tree::tree_cover;
use deltacover::unit::unit_fraction_cover;
use deltacover::verify::{is_delta_cover, probe_cover};
use deltacover::{CoverError, Cover, Graph, Rational};

const EXIT_NOT_A_COVER: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "cover", version, about = "Place points on a graph so every point lies within distance delta of one")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Limits {
    /// Wall-clock limit for exact searches, in seconds.
    #[arg(long, global = true, default_value_t = 60)]
    budget_secs: u64,
    /// Node limit for exact searches.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget_nodes: u64,
}

impl Limits {
    fn budget(&self) -> Budget {
        Budget { max_nodes: self.budget_nodes, max_time: Some(Duration::from_secs(self.budget_secs)) }
    }
}

#[derive(Args)]
struct Instance {
    /// Graph file.
    #[arg(long, short)]
    input: PathBuf,
    /// Covering range as `a/b`.
    #[arg(long, short)]
    delta: Rational,
    /// Where to write the cover; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum cover.
    Solve {
        #[command(flatten)]
        inst: Instance,
        /// Branch and bound over discretized candidates (the default).
        #[arg(long, conflicts_with = "unit_fraction")]
        exact: bool,
        /// Solve via the b-subdivision; needs delta = 1/b.
        #[arg(long, value_name = "B")]
        unit_fraction: Option<usize>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Minimum cover of a forest.
    Tree {
        #[command(flatten)]
        inst: Instance,
    },
    /// Approximate cover with the algorithm for the given range.
    Approx {
        #[command(flatten)]
        inst: Instance,
        /// Print the ratio report to stderr.
        #[arg(long, value_enum)]
        report: Option<ReportFormat>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Check a cover file.
    Verify {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        cover: PathBuf,
        #[arg(long, short)]
        delta: Rational,
        /// Also cross-check this many random points.
        #[arg(long, default_value_t = 0)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a member of a generated family.
    Gen {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        x: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        variant: Option<String>,
        /// Input graph file for reductions and gadgets.
        #[arg(long, conflicts_with = "source_named")]
        source: Option<PathBuf>,
        /// Named input graph, e.g. `cycle:4` or `petersen`.
        #[arg(long)]
        source_named: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Where to write family metadata as JSON.
        #[arg(long)]
        metadata: Option<PathBuf>,
    },
    /// Run a benchmark suite.
    Bench {
        /// Suite description (JSON).
        #[arg(long)]
        config: PathBuf,
        /// CSV rows; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// JSON summary.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Directory for per-row cover files.
        #[arg(long)]
        cover_dir: Option<PathBuf>,
        /// Override the suite's per-row time limit.
        #[arg(long)]
        budget_secs: Option<u64>,
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: CoverError| e.to_string())
}

fn parse_named(s: &str) -> Result<NamedGraph, CoverError> {
    let (name, n) = s.split_once(':').unwrap_or((s, "0"));
    let n = n.parse().map_err(|_| CoverError::Parse { line: 0, message: format!("bad graph size in `{s}`") })?;
    Ok(NamedGraph { named: name.to_string(), n })
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CoverError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn finish_solve(g: &Graph, delta: &Rational, res: SolveResult, out: Option<&Path>) -> Result<ExitCode, CoverError> {
    let check = is_delta_cover(g, &res.cover, delta);
    if !check.is_cover {
        return Err(CoverError::Internal(format!("solver returned a non-cover, witness {:?}", check.witness)));
    }
    emit(out, &format_cover(&res.cover))?;
    eprintln!(
        "size {} optimal {} nodes {} elapsed_ms {}",
        res.size,
        res.optimal,
        res.nodes_explored,
        res.elapsed.as_millis()
    );
    Ok(if res.optimal { ExitCode::SUCCESS } else { ExitCode::from(EXIT_BUDGET) })
}

fn run(cli: Cli) -> Result<ExitCode, CoverError> {
    match cli.command {
        Command::Solve { inst, exact: _, unit_fraction, limits } => {
            let g = parse_graph_file(&inst.input)?;
            let res = match unit_fraction {
                Some(b) => {
                    if inst.delta != Rational::new(1, b as i64) {
                        return Err(CoverError::DeltaOutOfRange { delta: inst.delta, interval: format!("{{1/{b}}}") });
                    }
                    unit_fraction_cover(&g, b, &limits.budget())?
                }
                None => min_cover_exact(&g, &inst.delta, &limits.budget())?,
            };
            finish_solve(&g, &inst.delta, res, inst.output.as_deref())
        }
        Command::Tree { inst } => {
            let g = parse_graph_file(&inst.input)?;
            let res = tree_cover(&g, &inst.delta)?;
            finish_solve(&g, &inst.delta, res, inst.output.as_deref())
        }
        Command::Approx { inst, report, limits } => {
            let g = parse_graph_file(&inst.input)?;
            let rep = approx_cover(&g, &inst.delta, &limits.budget())?;
            emit(inst.output.as_deref(), &format_cover(&rep.cover))?;
            match report {
                Some(ReportFormat::Json) => eprintln!("{}", serde_json::to_string_pretty(&rep)?),
                None => eprintln!("size {} regime {} claimed_factor {}", rep.size(), rep.regime, rep.claimed_factor),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input, cover, delta, probes, seed } => {
            let g = parse_graph_file(&input)?;
            let s: Cover = read_cover(&cover, &g)?;
            let rep = is_delta_cover(&g, &s, &delta);
            let mut summary = json!({
                "is_cover": rep.is_cover,
                "size": s.len(),
                "witness": rep.witness.as_ref().map(|p| p.to_string()),
                "gaps": rep.per_edge_gaps.len(),
            });
            let mut ok = rep.is_cover;
            if probes > 0 {
                let pr = probe_cover(&g, &s, &delta, probes, seed);
                ok &= pr.disagreements.is_empty();
                summary["probes"] = json!(pr.probes);
                summary["probe_disagreements"] = json!(pr.disagreements.len());
            }
            println!("{summary}");
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NOT_A_COVER) })
        }
        Command::Gen { family, k, x, ell, variant, source, source_named, output, metadata } => {
            let source = match (source, source_named) {
                (Some(file), _) => Some(SourceGraph::File { file }),
                (None, Some(name)) => Some(SourceGraph::Named(parse_named(&name)?)),
                (None, None) => None,
            };
            let spec = GeneratorSpec { family, k, x, ell, variant, source };
            let inst = spec.build(Path::new("."))?;
            emit(output.as_deref(), &format_graph(&inst.graph))?;
            if let Some(path) = metadata {
                std::fs::write(path, serde_json::to_string_pretty(&inst)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { config, output, summary, cover_dir, budget_secs, budget_nodes } => {
            let mut cfg = BenchConfig::from_json_file(&config)?;
            cfg.budget_secs = budget_secs.or(cfg.budget_secs);
            cfg.budget_nodes = budget_nodes.or(cfg.budget_nodes);
            let base = config.parent().unwrap_or(Path::new("."));
            let instances = cfg.resolve(base)?;
            if let Some(dir) = &cover_dir {
                std::fs::create_dir_all(dir)?;
            }
            let opts = BenchOptions { budget: cfg.budget(), oracle: cfg.oracle, cover_dir };
            let out = run_bench(&instances, &cfg.deltas, &opts)?;
            match output {
                Some(p) => write_csv(BufWriter::new(File::create(p)?), &out.rows)?,
                None => write_csv(io::stdout().lock(), &out.rows)?,
            }
            let text = serde_json::to_string_pretty(&out.summary)?;
            match summary {
                Some(p) => std::fs::write(p, text)?,
                None => eprintln!("{text}"),
            }
            Ok(if out.summary.violations > 0 { ExitCode::from(EXIT_NOT_A_COVER) } else { ExitCode::SUCCESS })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CoverError::NotACover { .. } | CoverError::Internal(_) => EXIT_NOT_A_COVER,
                CoverError::BudgetExhausted { .. } => EXIT_BUDGET,
                _ => EXIT_USAGE,
            })
        }
    }
}
