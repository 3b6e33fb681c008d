mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use meshroute::bench::{emit_table, run_bench, BenchConfig, TableFormat};
use meshroute::export::{from_json, to_dot, to_json};
use meshroute::mesh::{MeshGraph, NodeId, Path, UnitId};
use meshroute::routing::{
    build_hash_list, build_hash_list_for_pairs, enumerate_fabric_permutations, hash_list_route, FaultStrategy,
    HashList, MultiRouteResult, PairRoute, RoutingSession,
};
use meshroute::search::{
    bidirectional_shortest, dfs_all_paths, dfs_cycles, dfs_fixed_weight_cycle, dfs_fixed_weight_path,
    dfs_shortest_cycle, dfs_shortest_path, dijkstra_baseline, BidirOutcome, Cycle,
};
use meshroute::topology::{build_hex_network, build_switch_fabric, FabricTopology, NetworkSpec, SwitchFabricSpec};
use output::{to_text, MultiRecord, PathRecord};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

#[derive(Debug, Parser)]
#[command(name = "meshroute", version, about = "Route light through hexagonal MZI meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct NetArg {
    /// Network file written by `build`.
    #[arg(long, env = "MESHROUTE_NET")]
    net: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a hexagonal network or a switch fabric and write it out.
    Build {
        #[arg(long, conflicts_with = "config")]
        cells: Option<u32>,
        /// Build configuration: network fields, or a `fabric` entry.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search between two ports.
    Route {
        #[command(flatten)]
        net: NetArg,
        #[arg(long)]
        from: NodeId,
        #[arg(long)]
        to: NodeId,
        #[arg(long, default_value = "shortest")]
        mode: PathMode,
        #[arg(long, value_enum, default_value_t = Algo::Dfs)]
        algo: Algo,
        /// Also write a DOT drawing with the paths overlaid.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Route ordered pairs one after another without sharing nodes.
    RouteMulti {
        #[command(flatten)]
        net: NetArg,
        /// One "source target" pair per line.
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Closed paths through a parent port.
    Cycles {
        #[command(flatten)]
        net: NetArg,
        #[arg(long)]
        parent: NodeId,
        #[arg(long, default_value = "all")]
        mode: PathMode,
    },
    /// Build an N x N switch fabric, optionally listing its permutations.
    Fabric {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value = "benes")]
        topology: FabricTopology,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Precompute path lists, or route from a precomputed list.
    Hashlist(HashlistArgs),
    /// Route after marking units faulty.
    Fault {
        #[command(flatten)]
        net: NetArg,
        #[arg(long, required = true)]
        unit: Vec<UnitId>,
        #[arg(long)]
        strategy: FaultStrategy,
        #[command(flatten)]
        query: Query,
        /// Write the session state after routing.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Time the search algorithms on sampled pairs.
    Bench {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Table::Markdown)]
        format: Table,
    },
    /// Write the network as DOT or as the network file format.
    Export {
        #[command(flatten)]
        net: NetArg,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
struct Query {
    #[arg(long, requires = "to", conflicts_with = "pairs")]
    from: Option<NodeId>,
    #[arg(long, requires = "from")]
    to: Option<NodeId>,
    #[arg(long)]
    pairs: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct HashlistArgs {
    #[command(flatten)]
    net: NetArg,
    #[arg(long, conflicts_with = "lookup", required_unless_present = "lookup")]
    generate: bool,
    /// Hash list file to route from.
    #[arg(long)]
    lookup: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', requires = "outputs")]
    inputs: Vec<NodeId>,
    #[arg(long, value_delimiter = ',', requires = "inputs")]
    outputs: Vec<NodeId>,
    #[arg(long, requires = "to")]
    from: Option<NodeId>,
    #[arg(long, requires = "from")]
    to: Option<NodeId>,
    #[arg(long)]
    pairs: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PathMode {
    Shortest,
    All,
    Fixed(i64),
}

impl FromStr for PathMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shortest" => Ok(PathMode::Shortest),
            "all" => Ok(PathMode::All),
            _ => match s.strip_prefix("fixed:").map(str::parse) {
                Some(Ok(w)) if w >= 1 => Ok(PathMode::Fixed(w)),
                _ => Err(format!("expected shortest, all or fixed:W with W >= 1, got '{s}'")),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Dfs,
    Bidir,
    Dijkstra,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Table {
    Markdown,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Debug, Default, Deserialize)]
struct BuildConfig {
    #[serde(flatten)]
    network: NetworkSpec,
    #[serde(default)]
    fabric: Option<SwitchFabricSpec>,
}

enum Failure {
    /// Bad arguments or unusable input files.
    Usage(String),
    /// The query ran but found nothing.
    NotFound(String),
}

type Run = Result<(), Failure>;

fn usage(arg: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{arg}: {e}"))
}

fn read(arg: &str, path: &FsPath) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(arg, format!("cannot read {}: {e}", path.display())))
}

fn write_or_print(arg: &str, out: Option<&FsPath>, text: &str) -> Run {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(arg, format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(net: &NetArg) -> Result<MeshGraph, Failure> {
    from_json(&read("--net", &net.net)?).map_err(|e| usage("--net", e))
}

fn resolve(g: &MeshGraph, arg: &str, n: NodeId) -> Result<NodeId, Failure> {
    let r = g
        .resolve(n)
        .ok_or_else(|| usage(arg, format!("node {n} is not in the network")))?;
    if !r.is_dummy() {
        return Err(usage(arg, format!("{n} is not a port (letters e..h)")));
    }
    Ok(r)
}

fn read_pairs(g: &MeshGraph, path: &FsPath) -> Result<Vec<(NodeId, NodeId)>, Failure> {
    let text = read("--pairs", path)?;
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = words[..] else {
            return Err(usage("--pairs", format!("line {}: expected \"source target\"", k + 1)));
        };
        let parse = |w: &str| {
            NodeId::parse(w)
                .map_err(|e| usage("--pairs", format!("line {}: {e}", k + 1)))
                .and_then(|n| resolve(g, "--pairs", n))
        };
        out.push((parse(a)?, parse(b)?));
    }
    if out.is_empty() {
        return Err(usage("--pairs", "no pairs in file"));
    }
    Ok(out)
}

fn found(paths: &[Path], what: &str) -> Run {
    if paths.is_empty() {
        Err(Failure::NotFound(format!("no {what} found")))
    } else {
        Ok(())
    }
}

fn build(cells: Option<u32>, config: Option<PathBuf>, out: Option<PathBuf>) -> Run {
    let cfg: BuildConfig = match (&config, cells) {
        (Some(p), _) => serde_json::from_str(&read("--config", p)?).map_err(|e| usage("--config", e))?,
        (None, Some(c)) => BuildConfig {
            network: NetworkSpec::cells(c),
            fabric: None,
        },
        (None, None) => return Err(usage("--cells", "give --cells or --config")),
    };
    let arg = if config.is_some() { "--config" } else { "--cells" };
    let g = match cfg.fabric {
        Some(spec) => build_switch_fabric(spec).map_err(|e| usage(arg, e))?.graph,
        None => build_hex_network(&cfg.network).map_err(|e| usage(arg, e))?,
    };
    write_or_print("--out", out.as_deref(), &to_json(&g))?;
    if out.is_some() {
        eprintln!(
            "{} units, {} nodes, {} edges",
            g.unit_count(),
            g.node_count(),
            g.edge_count()
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct PathsOut {
    source: NodeId,
    target: NodeId,
    count: usize,
    paths: Vec<PathRecord>,
}

fn route(net: &NetArg, from: NodeId, to: NodeId, mode: PathMode, algo: Algo, dot: Option<PathBuf>) -> Run {
    let g = load(net)?;
    let s = resolve(&g, "--from", from)?;
    let t = resolve(&g, "--to", to)?;
    if s == t {
        return Err(usage("--to", "equals --from; use `cycles` for closed paths"));
    }
    if algo != Algo::Dfs && mode != PathMode::Shortest {
        return Err(usage("--algo", "bidir and dijkstra only support --mode shortest"));
    }
    let none = BTreeSet::new();
    let search_err = |e| usage("--from", e);
    let paths: Vec<Path> = match (mode, algo) {
        (PathMode::All, _) => dfs_all_paths(&g, s, t, &none).map_err(search_err)?.paths,
        (PathMode::Fixed(w), _) => dfs_fixed_weight_path(&g, s, t, &none, w)
            .map_err(search_err)?
            .into_iter()
            .collect(),
        (PathMode::Shortest, Algo::Dfs) => dfs_shortest_path(&g, s, t, &none)
            .map_err(search_err)?
            .into_iter()
            .collect(),
        (PathMode::Shortest, Algo::Dijkstra) => dijkstra_baseline(&g, s, t, &none)
            .map_err(search_err)?
            .into_iter()
            .collect(),
        (PathMode::Shortest, Algo::Bidir) => match bidirectional_shortest(&g, s, t, &none).map_err(search_err)? {
            BidirOutcome::Found(p) => vec![p],
            BidirOutcome::NonphysicalIntersection { node, .. } => {
                return Err(Failure::NotFound(format!(
                    "the two searches met at {node} but the joined path is not physical"
                )))
            }
            BidirOutcome::NotFound => Vec::new(),
        },
    };
    print!(
        "{}",
        to_text(&PathsOut {
            source: s,
            target: t,
            count: paths.len(),
            paths: paths.iter().map(PathRecord::from).collect(),
        })
    );
    if let Some(d) = dot {
        write_or_print("--dot", Some(&d), &to_dot(&g, &paths))?;
    }
    found(&paths, "physical path")
}

fn multi_result(r: &MultiRouteResult) -> Run {
    print!("{}", to_text(&MultiRecord::from(r)));
    let missing = r.outcomes.len() - r.routed();
    if missing > 0 {
        return Err(Failure::NotFound(format!(
            "{missing} of {} pairs unroutable",
            r.outcomes.len()
        )));
    }
    Ok(())
}

fn route_multi(net: &NetArg, pairs: &FsPath, dot: Option<PathBuf>) -> Run {
    let g = load(net)?;
    let pairs = read_pairs(&g, pairs)?;
    let mut session = RoutingSession::new(g);
    let r = session.route_multi(&pairs).map_err(|e| usage("--pairs", e))?;
    if let Some(d) = dot {
        let paths: Vec<Path> = r.paths().cloned().collect();
        write_or_print("--dot", Some(&d), &to_dot(session.base(), &paths))?;
    }
    multi_result(&r)
}

#[derive(Serialize)]
struct CyclesOut {
    parent: NodeId,
    count: usize,
    raw_count: Option<usize>,
    cycles: Vec<PathRecord>,
}

fn cycles(net: &NetArg, parent: NodeId, mode: PathMode) -> Run {
    let g = load(net)?;
    let p = resolve(&g, "--parent", parent)?;
    let none = BTreeSet::new();
    let err = |e| usage("--parent", e);
    let (list, raw): (Vec<Cycle>, Option<usize>) = match mode {
        PathMode::All => {
            let c = dfs_cycles(&g, p, &none).map_err(err)?;
            (c.cycles, Some(c.raw_count))
        }
        PathMode::Shortest => (
            dfs_shortest_cycle(&g, p, &none).map_err(err)?.into_iter().collect(),
            None,
        ),
        PathMode::Fixed(w) => (
            dfs_fixed_weight_cycle(&g, p, &none, w)
                .map_err(err)?
                .into_iter()
                .collect(),
            None,
        ),
    };
    let paths: Vec<Path> = list.into_iter().map(|c| c.path).collect();
    print!(
        "{}",
        to_text(&CyclesOut {
            parent: p,
            count: paths.len(),
            raw_count: raw,
            cycles: paths.iter().map(PathRecord::from).collect(),
        })
    );
    found(&paths, "cycle")
}

#[derive(Serialize)]
struct PermutationOut {
    permutation: Vec<usize>,
    paths: Vec<PathRecord>,
}

#[derive(Serialize)]
struct FabricOut {
    n: usize,
    topology: FabricTopology,
    switches: usize,
    realised: usize,
    failed: Vec<Vec<usize>>,
    route_multi_calls: usize,
    permutations: Vec<PermutationOut>,
}

fn fabric(n: usize, topology: FabricTopology, enumerate: bool, out: Option<PathBuf>) -> Run {
    let f = build_switch_fabric(SwitchFabricSpec { n, topology }).map_err(|e| usage("--n", e))?;
    if !enumerate {
        return write_or_print("--out", out.as_deref(), &to_json(&f.graph));
    }
    let e = enumerate_fabric_permutations(&f).map_err(|e| usage("--n", e))?;
    let text = to_text(&FabricOut {
        n,
        topology,
        switches: f.switches().len(),
        realised: e.permutations.len(),
        failed: e.failed.clone(),
        route_multi_calls: e.route_multi_calls,
        permutations: e
            .permutations
            .iter()
            .map(|(perm, paths)| PermutationOut {
                permutation: perm.clone(),
                paths: paths.iter().map(PathRecord::from).collect(),
            })
            .collect(),
    });
    write_or_print("--out", out.as_deref(), &text)
}

fn query_pairs(
    g: &MeshGraph,
    from: Option<NodeId>,
    to: Option<NodeId>,
    pairs: Option<&FsPath>,
) -> Result<Vec<(NodeId, NodeId)>, Failure> {
    match (from, to, pairs) {
        (_, _, Some(p)) => read_pairs(g, p),
        (Some(s), Some(t), None) => Ok(vec![(resolve(g, "--from", s)?, resolve(g, "--to", t)?)]),
        _ => Err(usage("--from", "give --from and --to, or --pairs")),
    }
}

fn hashlist(a: HashlistArgs) -> Run {
    let g = load(&a.net)?;
    if a.generate {
        let list = if !a.inputs.is_empty() {
            let ins = a
                .inputs
                .iter()
                .map(|&n| resolve(&g, "--inputs", n))
                .collect::<Result<Vec<_>, _>>()?;
            let outs = a
                .outputs
                .iter()
                .map(|&n| resolve(&g, "--outputs", n))
                .collect::<Result<Vec<_>, _>>()?;
            build_hash_list(&g, &ins, &outs).map_err(|e| usage("--inputs", e))?
        } else {
            let pairs = query_pairs(&g, a.from, a.to, a.pairs.as_deref())
                .map_err(|_| usage("--generate", "give --inputs and --outputs, --from and --to, or --pairs"))?;
            build_hash_list_for_pairs(&g, &pairs).map_err(|e| usage("--pairs", e))?
        };
        eprintln!("{} pairs, {} paths", list.meta.pair_count, list.meta.path_count);
        return write_or_print("--out", a.out.as_deref(), &to_text(&list));
    }
    let file = a.lookup.expect("clap requires --generate or --lookup");
    let list: HashList = serde_json::from_str(&read("--lookup", &file)?).map_err(|e| usage("--lookup", e))?;
    let pairs = query_pairs(&g, a.from, a.to, a.pairs.as_deref())?;
    let mut session = RoutingSession::new(g);
    let mut outcomes = Vec::new();
    for (s, t) in pairs {
        let outcome = hash_list_route(&list, &mut session, s, t).map_err(|e| usage("--lookup", e))?;
        outcomes.push(PairRoute {
            source: s,
            target: t,
            outcome,
        });
    }
    multi_result(&MultiRouteResult {
        order_used: outcomes.iter().map(|o| (o.source, o.target)).collect(),
        outcomes,
        elapsed: Duration::ZERO,
    })
}

fn fault(net: &NetArg, units: &[UnitId], strategy: FaultStrategy, query: Query, snapshot: Option<PathBuf>) -> Run {
    let g = load(net)?;
    let pairs = query_pairs(&g, query.from, query.to, query.pairs.as_deref())?;
    let mut session = RoutingSession::new(g);
    for &u in units {
        session.apply_fault(u, strategy).map_err(|e| usage("--unit", e))?;
    }
    let mut outcomes = Vec::new();
    for (s, t) in pairs {
        let outcome = session.route(s, t).map_err(|e| usage("--from", e))?;
        outcomes.push(PairRoute {
            source: s,
            target: t,
            outcome,
        });
    }
    if let Some(p) = snapshot {
        write_or_print("--snapshot", Some(&p), &to_text(&session.snapshot()))?;
    }
    multi_result(&MultiRouteResult {
        order_used: outcomes.iter().map(|o| (o.source, o.target)).collect(),
        outcomes,
        elapsed: Duration::ZERO,
    })
}

fn bench(config: Option<PathBuf>, format: Table) -> Run {
    let cfg: BenchConfig = match config {
        Some(p) => serde_json::from_str(&read("--config", &p)?).map_err(|e| usage("--config", e))?,
        None => BenchConfig::default(),
    };
    let report = run_bench(&cfg).map_err(|e| usage("--config", e))?;
    let text = match format {
        Table::Markdown => emit_table(&report, TableFormat::Markdown),
        Table::Csv => emit_table(&report, TableFormat::Csv),
        Table::Json => Ok(to_text(&report)),
    }
    .map_err(|e| usage("--config", e))?;
    print!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Build { cells, config, out } => build(cells, config, out),
        Command::Route {
            net,
            from,
            to,
            mode,
            algo,
            dot,
        } => route(&net, from, to, mode, algo, dot),
        Command::RouteMulti { net, pairs, dot } => route_multi(&net, &pairs, dot),
        Command::Cycles { net, parent, mode } => cycles(&net, parent, mode),
        Command::Fabric {
            n,
            topology,
            enumerate,
            out,
        } => fabric(n, topology, enumerate, out),
        Command::Hashlist(a) => hashlist(a),
        Command::Fault {
            net,
            unit,
            strategy,
            query,
            snapshot,
        } => fault(&net, &unit, strategy, query, snapshot),
        Command::Bench { config, format } => bench(config, format),
        Command::Export { net, format, out } => {
            let g = load(&net)?;
            let text = match format {
                Format::Dot => to_dot(&g, &[]),
                Format::Json => to_json(&g),
            };
            write_or_print("--out", out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NotFound(msg)) => {
            eprintln!("meshroute: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("meshroute: error: {msg}");
            ExitCode::from(2)
        }
    }
}
