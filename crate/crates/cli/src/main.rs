use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commgraph::alt::{alt_label, b_distance, b_geodesic, BGraph, VertexType};
use commgraph::cache::{resolve_cache_dir, LatticeCache};
use commgraph::catalog::realize;
use commgraph::verify::{run_suite, SuiteConfig, DEFAULT_SEED};
use commgraph::{CommGraph, Error, GroupDescriptor, Lattice, Limits};

#[derive(Parser)]
#[command(name = "commgraph", version, about = "p-local commensurability graphs of finite permutation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Lattice cache directory [default: ./.commgraph-cache].
    #[arg(long, global = true, env = "COMMGRAPH_CACHE")]
    cache_dir: Option<PathBuf>,

    /// Never read or write the lattice cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// More logging (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Build and inspect Γ_p(G).
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Subgroup lattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// The B-graph of alternating subgroups.
    #[command(subcommand)]
    Alt(AltCmd),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Enumerate subgroups and write the graph as JSON (stdout unless --out).
    Build {
        #[arg(long)]
        group: String,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Per-component report for a graph file.
    Components {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Shortest path between two vertex ids.
    Geodesic {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Recompute every adjacency from the vertex generators; exit 1 on mismatch.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// List all subgroups as JSON.
    Enum {
        #[arg(long)]
        group: String,
    },
}

#[derive(Args)]
struct AltParams {
    #[arg(long)]
    x: usize,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    k: u32,
}

#[derive(Subcommand)]
enum AltCmd {
    /// Summarize the B-graph; optionally write DOT or JSON.
    Bgraph {
        #[command(flatten)]
        params: AltParams,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Distance between Alt_{O1} and Alt_{O2}, |O1| = |O2| = p^k.
    Distance {
        #[command(flatten)]
        params: AltParams,
        #[arg(long, value_delimiter = ',')]
        o1: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        o2: Vec<usize>,
        /// Also print one geodesic.
        #[arg(long)]
        path: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Skip the Alt_7 lattice.
    #[arg(long)]
    fast: bool,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

/// A check ran and did not hold.
struct CheckFailed;

enum Failure {
    Lib(Error),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<CheckFailed> for Failure {
    fn from(_: CheckFailed) -> Self {
        Failure::Check
    }
}

type CliResult = Result<(), Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        e if e.is_resource() => 3,
        Error::CacheCorrupt { .. } => 3,
        Error::Invariant(_) => 1,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.into(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.into(),
        source,
    })
}

struct Context {
    cache: Option<LatticeCache>,
    limits: Limits,
}

impl Context {
    fn lattice(&self, descriptor: &str) -> Result<Lattice, Error> {
        let d: GroupDescriptor = descriptor.parse()?;
        let group = Arc::new(realize(&d, &self.limits)?);
        match &self.cache {
            Some(c) => c.lattice(group, &self.limits),
            None => Lattice::enumerate(group, &self.limits),
        }
    }
}

fn graph_cmd(ctx: &Context, cmd: GraphCmd) -> CliResult {
    match cmd {
        GraphCmd::Build { group, prime, out, dot } => {
            let lattice = ctx.lattice(&group)?;
            let graph = CommGraph::build(&lattice, prime)?;
            let text = graph.export_json()?;
            match out {
                Some(path) => write(&path, &text)?,
                None => println!("{text}"),
            }
            if let Some(path) = dot {
                write(&path, &graph.export_dot(false))?;
            }
            eprintln!(
                "{}: {} vertices, {} edges, {} components",
                graph.group(),
                graph.vertex_count(),
                graph.edge_count(),
                graph.component_sets().len()
            );
        }
        GraphCmd::Components { input } => {
            let graph = CommGraph::import_json(&read(&input)?)?;
            let reports = graph.components()?;
            println!("{}", serde_json::to_string_pretty(&reports).map_err(Error::from)?);
        }
        GraphCmd::Geodesic { input, from, to } => {
            let graph = CommGraph::import_json(&read(&input)?)?;
            let (u, v) = (graph.position_of(&from)?, graph.position_of(&to)?);
            let out = match graph.geodesic(u, v)? {
                Some(path) => json!({
                    "distance": path.len() - 1,
                    "path": path.iter().map(|&i| &graph.vertices()[i].id).collect::<Vec<_>>(),
                }),
                None => json!({ "distance": null, "path": null }),
            };
            println!("{}", serde_json::to_string_pretty(&out).map_err(Error::from)?);
        }
        GraphCmd::Check { input } => {
            let graph = CommGraph::import_json(&read(&input)?)?;
            let bad = graph.recheck_edges()?;
            for [i, j] in &bad {
                let (a, b) = (&graph.vertices()[*i], &graph.vertices()[*j]);
                let stored = if graph.has_edge(*i, *j) { "present" } else { "absent" };
                println!("mismatch: {} -- {} (edge {stored} in file)", a.id, b.id);
            }
            if !bad.is_empty() {
                return Err(CheckFailed.into());
            }
            println!("ok: {} vertices, {} edges recomputed", graph.vertex_count(), graph.edge_count());
        }
    }
    Ok(())
}

fn lattice_cmd(ctx: &Context, cmd: LatticeCmd) -> CliResult {
    match cmd {
        LatticeCmd::Enum { group } => {
            let lattice = ctx.lattice(&group)?;
            let g_order = lattice.group().order();
            let rows: Vec<_> = lattice
                .subgroups()
                .iter()
                .map(|s| {
                    json!({
                        "id": s.id(),
                        "order": s.order(),
                        "index": g_order / s.order(),
                        "generators": s.generators().iter().map(|g| g.to_cycle_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let out = json!({ "group": lattice.group().descriptor().to_string(), "order": g_order, "subgroups": rows });
            println!("{}", serde_json::to_string_pretty(&out).map_err(Error::from)?);
        }
    }
    Ok(())
}

fn alt_cmd(cmd: AltCmd) -> CliResult {
    match cmd {
        AltCmd::Bgraph { params, dot, json } => {
            let bg = BGraph::new(params.x, params.p, params.k)?;
            let count = |t: VertexType| (0..bg.vertex_count()).filter(|&v| bg.kind(v) == t).count();
            let valences = |t: VertexType| {
                let mut v: Vec<usize> = (0..bg.vertex_count())
                    .filter(|&v| bg.kind(v) == t)
                    .map(|v| bg.neighbors(v).len())
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            let summary = json!({
                "x": params.x,
                "p": params.p,
                "k": params.k,
                "vertices": bg.vertex_count(),
                "edges": bg.edge_count(),
                "type1": count(VertexType::Type1),
                "type2": count(VertexType::Type2),
                "type1_valences": valences(VertexType::Type1),
                "type2_valences": valences(VertexType::Type2),
            });
            println!("{}", serde_json::to_string_pretty(&summary).map_err(Error::from)?);
            if dot.is_some() || json.is_some() {
                let graph = bg.to_comm_graph()?;
                if let Some(path) = dot {
                    write(&path, &graph.export_dot(true))?;
                }
                if let Some(path) = json {
                    write(&path, &graph.export_json()?)?;
                }
            }
        }
        AltCmd::Distance { params, o1, o2, path } => {
            let bg = BGraph::new(params.x, params.p, params.k)?;
            println!("{}", b_distance(&bg, &o1, &o2)?);
            if path {
                for m in b_geodesic(&bg, &o1, &o2)? {
                    println!("{}", alt_label(m));
                }
            }
        }
    }
    Ok(())
}

fn verify_cmd(cache_dir: Option<PathBuf>, args: VerifyArgs) -> CliResult {
    let config = SuiteConfig {
        fast: args.fast,
        seed: args.seed,
        cache_dir,
        limits: Limits::default(),
    };
    let report = run_suite(&config);
    for c in &report.checks {
        println!(
            "{} {} ({} ms)",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.duration_ms
        );
        if let Some(w) = &c.witness {
            println!("     witness: {w}");
        }
    }
    println!("overall: {}", if report.overall { "PASS" } else { "FAIL" });
    if let Some(path) = args.json {
        write(&path, &report.to_json()?)?;
    }
    if report.overall {
        Ok(())
    } else {
        Err(CheckFailed.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let cache_dir = (!cli.no_cache).then(|| resolve_cache_dir(cli.cache_dir));
    let ctx = Context {
        cache: cache_dir.clone().map(LatticeCache::new),
        limits: Limits::default(),
    };
    let result = match cli.command {
        Command::Graph(cmd) => graph_cmd(&ctx, cmd),
        Command::Lattice(cmd) => lattice_cmd(&ctx, cmd),
        Command::Alt(cmd) => alt_cmd(cmd),
        Command::Verify(args) => verify_cmd(cache_dir, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
