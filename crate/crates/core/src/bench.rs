//! Timing harness that reports searches in a comparison table.

use crate::error::BenchError;
use crate::mesh::{MeshGraph, NodeId, Path};
use crate::routing::{build_hash_list_for_pairs, hash_list_route, RoutingSession};
use crate::search::{
    bidirectional_shortest, dfs_all_paths, dfs_cycles, dfs_shortest_path, dijkstra_baseline, BidirOutcome,
};
use crate::topology::{build_hex_network, NetworkSpec};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    DfsShortest,
    DfsAllPaths,
    MultiRoute,
    Bidirectional,
    Dijkstra,
    Cycles,
    HashList,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Dijkstra,
        Algorithm::Bidirectional,
        Algorithm::DfsShortest,
        Algorithm::MultiRoute,
        Algorithm::DfsAllPaths,
        Algorithm::Cycles,
        Algorithm::HashList,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::DfsShortest => "Modified DFS",
            Algorithm::DfsAllPaths => "Modified DFS (all paths)",
            Algorithm::MultiRoute => "Modified DFS (multi-pair)",
            Algorithm::Bidirectional => "Modified Bidirectional Search",
            Algorithm::Dijkstra => "Modified Dijkstra",
            Algorithm::Cycles => "Cycle Search",
            Algorithm::HashList => "Hash List Lookup",
        }
    }

    pub fn complexity(self) -> &'static str {
        match self {
            Algorithm::DfsShortest | Algorithm::DfsAllPaths | Algorithm::MultiRoute | Algorithm::Cycles => "O(V+E)",
            Algorithm::Bidirectional => "O(2^(d/2))",
            Algorithm::Dijkstra => "O(V^2)",
            Algorithm::HashList => "O(E)",
        }
    }

    /// Multi-result searches report the total time of one run.
    fn reports_total(self) -> bool {
        matches!(self, Algorithm::MultiRoute)
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "dfs" | "dfs_shortest" => Algorithm::DfsShortest,
            "all" | "dfs_all_paths" => Algorithm::DfsAllPaths,
            "multi" | "multi_route" => Algorithm::MultiRoute,
            "bidir" | "bidirectional" => Algorithm::Bidirectional,
            "dijkstra" => Algorithm::Dijkstra,
            "cycles" => Algorithm::Cycles,
            "hashlist" | "hash_list" => Algorithm::HashList,
            other => return Err(format!("unknown algorithm '{other}'")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub network: NetworkSpec,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    /// Number of sampled source/target pairs.
    pub pairs: usize,
    pub repetitions: usize,
    pub warmup: usize,
    /// Pairs routed together in the multi-pair row.
    pub multi_pairs: usize,
    /// Keep same-unit parallel port pairs in the bidirectional row.
    pub include_parallel: bool,
    /// Worker threads for single-pair rows; 1 keeps timings stable.
    pub threads: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            network: NetworkSpec::cells(5),
            algorithms: vec![Algorithm::DfsShortest, Algorithm::Bidirectional, Algorithm::Dijkstra],
            seed: 1,
            pairs: 100,
            repetitions: 1,
            warmup: 1,
            multi_pairs: 7,
            include_parallel: false,
            threads: 1,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.algorithms.is_empty() {
            return Err(BenchError::Config("no algorithms selected".into()));
        }
        if self.pairs == 0 {
            return Err(BenchError::Config("pairs must be at least 1".into()));
        }
        if self.repetitions == 0 {
            return Err(BenchError::Config("repetitions must be at least 1".into()));
        }
        if self.threads == 0 {
            return Err(BenchError::Config("threads must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeKind {
    Mean,
    Total,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    pub complexity: String,
    pub total_units: usize,
    pub max_units_traversed: usize,
    pub paths_found: usize,
    pub time: Duration,
    pub time_kind: TimeKind,
    pub queries: usize,
    /// Bidirectional only: joins rejected as nonphysical.
    pub nonphysical: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub seed: u64,
    pub pairs: Vec<(NodeId, NodeId)>,
    pub rows: Vec<BenchRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    Markdown,
    Csv,
}

/// Both ports sit on the same side of one unit.
pub fn is_parallel_pair(s: NodeId, t: NodeId) -> bool {
    s.unit_id() == t.unit_id() && s.letter.partner().is_input_side() == t.letter.partner().is_input_side()
}

/// Distinct boundary-port pairs with a physical path, drawn from `seed`.
pub fn sample_pairs(g: &MeshGraph, seed: u64, count: usize) -> Result<Vec<(NodeId, NodeId)>, BenchError> {
    let ports: Vec<NodeId> = g.boundary_ports().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let none = BTreeSet::new();
    let mut draws = 0;
    while out.len() < count && draws < 20 * count && ports.len() >= 2 {
        draws += 1;
        let pick: Vec<NodeId> = ports.choose_multiple(&mut rng, 2).copied().collect();
        let (s, t) = (pick[0], pick[1]);
        if dfs_shortest_path(g, s, t, &none)?.is_some() {
            out.push((s, t));
        }
    }
    if out.is_empty() {
        return Err(BenchError::NoReachablePair);
    }
    Ok(out)
}

/// The first pairs whose endpoints are all distinct, up to `k` of them.
fn disjoint_endpoints(pairs: &[(NodeId, NodeId)], k: usize) -> Vec<(NodeId, NodeId)> {
    let mut used = BTreeSet::new();
    let mut out = Vec::new();
    for &(s, t) in pairs {
        if out.len() == k {
            break;
        }
        if !used.contains(&s) && !used.contains(&t) {
            used.insert(s);
            used.insert(t);
            out.push((s, t));
        }
    }
    out
}

#[derive(Default)]
struct Tally {
    found: usize,
    max_units: usize,
    nonphysical: usize,
}

impl Tally {
    fn add(&mut self, p: &Path) {
        self.found += 1;
        self.max_units = self.max_units.max(p.units_traversed);
    }
}

/// Runs `f` once per warmup, then `reps` timed times; returns the mean time
/// and the tally of the last run.
fn measure(
    warmup: usize,
    reps: usize,
    mut f: impl FnMut() -> Result<Tally, BenchError>,
) -> Result<(Duration, Tally), BenchError> {
    for _ in 0..warmup {
        f()?;
    }
    let mut total = Duration::ZERO;
    let mut last = Tally::default();
    for _ in 0..reps {
        let t0 = Instant::now();
        last = f()?;
        total += t0.elapsed();
    }
    Ok((total / reps as u32, last))
}

fn per_pair(
    g: &MeshGraph,
    pairs: &[(NodeId, NodeId)],
    threads: usize,
    one: impl Fn(&MeshGraph, NodeId, NodeId, &mut Tally) -> Result<(), BenchError> + Sync,
) -> Result<Tally, BenchError> {
    let chunk = pairs.len().div_ceil(threads).max(1);
    let parts: Vec<Result<Tally, BenchError>> = std::thread::scope(|sc| {
        let handles: Vec<_> = pairs
            .chunks(chunk)
            .map(|part| {
                let one = &one;
                sc.spawn(move || {
                    let mut t = Tally::default();
                    for &(s, d) in part {
                        one(g, s, d, &mut t)?;
                    }
                    Ok(t)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("bench worker panicked"))
            .collect()
    });
    let mut out = Tally::default();
    for p in parts {
        let p = p?;
        out.found += p.found;
        out.max_units = out.max_units.max(p.max_units);
        out.nonphysical += p.nonphysical;
    }
    Ok(out)
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    cfg.validate()?;
    let g = build_hex_network(&cfg.network)?;
    run_bench_on(&g, cfg)
}

/// Same as [`run_bench`] on an already built graph; `cfg.network` is ignored.
pub fn run_bench_on(g: &MeshGraph, cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    cfg.validate()?;
    let pairs = sample_pairs(g, cfg.seed, cfg.pairs)?;
    let none = BTreeSet::new();
    let mut rows = Vec::new();
    for &alg in &cfg.algorithms {
        let mut queries = pairs.len();
        let (time, tally) = match alg {
            Algorithm::DfsShortest => measure(cfg.warmup, cfg.repetitions, || {
                per_pair(g, &pairs, cfg.threads, |g, s, t, tally| {
                    if let Some(p) = dfs_shortest_path(g, s, t, &BTreeSet::new())? {
                        tally.add(&p);
                    }
                    Ok(())
                })
            })?,
            Algorithm::Dijkstra => measure(cfg.warmup, cfg.repetitions, || {
                per_pair(g, &pairs, cfg.threads, |g, s, t, tally| {
                    if let Some(p) = dijkstra_baseline(g, s, t, &BTreeSet::new())? {
                        tally.add(&p);
                    }
                    Ok(())
                })
            })?,
            Algorithm::Bidirectional => {
                let chosen: Vec<_> = pairs
                    .iter()
                    .copied()
                    .filter(|&(s, t)| cfg.include_parallel || !is_parallel_pair(s, t))
                    .collect();
                queries = chosen.len();
                measure(cfg.warmup, cfg.repetitions, || {
                    per_pair(g, &chosen, cfg.threads, |g, s, t, tally| {
                        match bidirectional_shortest(g, s, t, &BTreeSet::new())? {
                            BidirOutcome::Found(p) => tally.add(&p),
                            BidirOutcome::NonphysicalIntersection { .. } => tally.nonphysical += 1,
                            BidirOutcome::NotFound => {}
                        }
                        Ok(())
                    })
                })?
            }
            Algorithm::DfsAllPaths => measure(cfg.warmup, cfg.repetitions, || {
                per_pair(g, &pairs, cfg.threads, |g, s, t, tally| {
                    for p in &dfs_all_paths(g, s, t, &BTreeSet::new())?.paths {
                        tally.add(p);
                    }
                    Ok(())
                })
            })?,
            Algorithm::Cycles => {
                let parents: Vec<NodeId> = pairs.iter().map(|p| p.0).collect::<BTreeSet<_>>().into_iter().collect();
                queries = parents.len();
                measure(cfg.warmup, cfg.repetitions, || {
                    let mut tally = Tally::default();
                    for &p in &parents {
                        for c in &dfs_cycles(g, p, &none)?.cycles {
                            tally.add(&c.path);
                        }
                    }
                    Ok(tally)
                })?
            }
            Algorithm::MultiRoute => {
                let batch = disjoint_endpoints(&pairs, cfg.multi_pairs.max(1));
                queries = 1;
                measure(cfg.warmup, cfg.repetitions, || {
                    let mut session = RoutingSession::new(g.clone());
                    let res = session.route_multi(&batch)?;
                    let mut tally = Tally::default();
                    for p in res.paths() {
                        tally.add(p);
                    }
                    Ok(tally)
                })?
            }
            Algorithm::HashList => {
                let list = build_hash_list_for_pairs(g, &pairs)?;
                let session = RoutingSession::new(g.clone());
                measure(cfg.warmup, cfg.repetitions, || {
                    let mut tally = Tally::default();
                    for &(s, t) in &pairs {
                        let mut fresh = session.clone();
                        if let Some(p) = hash_list_route(&list, &mut fresh, s, t)?.path() {
                            tally.add(p);
                        }
                    }
                    Ok(tally)
                })?
            }
        };
        let time_kind = if alg.reports_total() {
            TimeKind::Total
        } else {
            TimeKind::Mean
        };
        let time = match time_kind {
            TimeKind::Total => time,
            TimeKind::Mean => time / queries.max(1) as u32,
        };
        rows.push(BenchRow {
            algorithm: alg,
            complexity: alg.complexity().into(),
            total_units: g.unit_count(),
            max_units_traversed: tally.max_units,
            paths_found: tally.found,
            time,
            time_kind,
            queries,
            nonphysical: tally.nonphysical,
        });
    }
    Ok(BenchReport {
        seed: cfg.seed,
        pairs,
        rows,
    })
}

pub const TABLE_COLUMNS: [&str; 6] = [
    "Algorithm",
    "Complexity",
    "Total MZIs",
    "Maximum MZIs Traversed",
    "Number of Paths Searched",
    "Time Taken",
];

fn format_time(d: Duration, kind: TimeKind) -> String {
    let ms = d.as_secs_f64() * 1e3;
    let kind = match kind {
        TimeKind::Mean => "mean",
        TimeKind::Total => "total",
    };
    format!("{ms:.3} ms ({kind})")
}

fn cells(r: &BenchRow) -> [String; 6] {
    [
        r.algorithm.label().to_string(),
        r.complexity.clone(),
        r.total_units.to_string(),
        r.max_units_traversed.to_string(),
        r.paths_found.to_string(),
        format_time(r.time, r.time_kind),
    ]
}

pub fn emit_table(report: &BenchReport, format: TableFormat) -> Result<String, BenchError> {
    if report.rows.is_empty() {
        return Err(BenchError::EmptyReport);
    }
    let mut s = String::new();
    match format {
        TableFormat::Markdown => {
            let _ = writeln!(s, "| {} |", TABLE_COLUMNS.join(" | "));
            let _ = writeln!(s, "|{}", "---|".repeat(TABLE_COLUMNS.len()));
            for r in &report.rows {
                let _ = writeln!(s, "| {} |", cells(r).join(" | "));
            }
        }
        TableFormat::Csv => {
            let _ = writeln!(s, "{}", TABLE_COLUMNS.join(","));
            for r in &report.rows {
                let _ = writeln!(s, "{}", cells(r).join(","));
            }
        }
    }
    Ok(s)
}
