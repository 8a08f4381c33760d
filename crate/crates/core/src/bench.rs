//! Benchmark manifests, records and CSV output.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{heuristic_layout, inorder_allocation, layout_allocation, trickle_down, LayoutStrategy};
use crate::error::{Error, Result};
use crate::exact::{solve_exact_bruteforce, solve_exact_dp};
use crate::graph::Graph;
use crate::instance::{HouseValues, Instance};
use crate::random::sample_gnp_half;

pub const CSV_SCHEMA_LINE: &str = "schema=1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchFamily {
    RandomTree,
    RandomConnected,
    GnpHalf,
    /// Sizes are depths.
    CompleteBinary,
    Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchAlgorithm {
    Exact,
    Bruteforce,
    Trickle,
    LayoutBfs,
    LayoutDfs,
    LayoutExact,
    Inorder,
}

impl BenchAlgorithm {
    fn tag(self) -> &'static str {
        match self {
            BenchAlgorithm::Exact => "exact",
            BenchAlgorithm::Bruteforce => "bruteforce",
            BenchAlgorithm::Trickle => "trickle",
            BenchAlgorithm::LayoutBfs => "layout-bfs",
            BenchAlgorithm::LayoutDfs => "layout-dfs",
            BenchAlgorithm::LayoutExact => "layout-exact",
            BenchAlgorithm::Inorder => "inorder",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub family: BenchFamily,
    pub sizes: Vec<usize>,
    pub algorithms: Vec<BenchAlgorithm>,
    pub seeds: Vec<u64>,
    /// House values are drawn uniformly from `0..=max_value`.
    #[serde(default = "default_max_value")]
    pub max_value: u64,
}

fn default_max_value() -> u64 {
    100
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub entries: Vec<ManifestEntry>,
    /// When false, `wall_ms` is written as 0 so output is byte-reproducible.
    #[serde(default = "default_true")]
    pub record_timing: bool,
}

fn default_true() -> bool {
    true
}

pub fn parse_manifest(text: &str) -> Result<Manifest> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance_id: String,
    pub family: String,
    pub n: usize,
    pub algorithm: String,
    pub seed: u64,
    pub achieved_envy: Option<String>,
    pub certificate_bound: Option<String>,
    pub optimal_envy: Option<String>,
    pub ratio: Option<f64>,
    pub wall_ms: f64,
    pub error: Option<String>,
}

fn family_name(f: BenchFamily) -> &'static str {
    match f {
        BenchFamily::RandomTree => "random-tree",
        BenchFamily::RandomConnected => "random-connected",
        BenchFamily::GnpHalf => "gnp-half",
        BenchFamily::CompleteBinary => "complete-binary",
        BenchFamily::Path => "path",
    }
}

fn build_instance(entry: &ManifestEntry, size: usize, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = match entry.family {
        BenchFamily::RandomTree => Graph::random_prufer_tree(size, &mut rng),
        BenchFamily::RandomConnected => Graph::random_connected(size, 0.3, &mut rng),
        BenchFamily::GnpHalf => sample_gnp_half(size, rng.gen()),
        BenchFamily::CompleteBinary => {
            if size > 20 {
                return Err(Error::OutOfRange { value: size, reason: "complete-binary depth above 20" });
            }
            Graph::complete_binary_tree(size as u32)
        }
        BenchFamily::Path => Graph::path(size),
    };
    let mut values: Vec<u64> = (0..graph.n()).map(|_| rng.gen_range(0..=entry.max_value)).collect();
    values.sort_unstable();
    Instance::new(graph, HouseValues::from_u64s(&values)?)
}

struct Outcome {
    achieved: BigUint,
    bound: Option<BigUint>,
}

fn run_algorithm(alg: BenchAlgorithm, inst: &Instance) -> Result<Outcome> {
    let with_cert = |(_, c): (_, crate::approx::ApproxCertificate)| Outcome {
        achieved: c.achieved_envy,
        bound: Some(c.guarantee_bound),
    };
    match alg {
        BenchAlgorithm::Exact => solve_exact_dp(inst).map(|r| Outcome { achieved: r.optimal_envy, bound: None }),
        BenchAlgorithm::Bruteforce => {
            solve_exact_bruteforce(inst).map(|r| Outcome { achieved: r.optimal_envy, bound: None })
        }
        BenchAlgorithm::Trickle => trickle_down(inst.graph(), inst.houses()).map(with_cert),
        BenchAlgorithm::LayoutBfs | BenchAlgorithm::LayoutDfs | BenchAlgorithm::LayoutExact => {
            let strategy = match alg {
                BenchAlgorithm::LayoutBfs => LayoutStrategy::BfsOrder,
                BenchAlgorithm::LayoutDfs => LayoutStrategy::DfsOrder,
                _ => LayoutStrategy::ExactSmall,
            };
            let layout = heuristic_layout(inst.graph(), strategy)?;
            layout_allocation(inst, &layout).map(with_cert)
        }
        BenchAlgorithm::Inorder => {
            let depth = crate::approx::complete_tree_depth(inst.n())?;
            inorder_allocation(depth, inst.houses()).map(with_cert)
        }
    }
}

fn ratio(achieved: &BigUint, optimal: &BigUint) -> Option<f64> {
    if optimal == &BigUint::default() {
        return (achieved == optimal).then_some(1.0);
    }
    Some(achieved.to_f64()? / optimal.to_f64()?)
}

/// Runs every `(size, seed)` instance of every entry, in parallel, with
/// records in manifest order. Per-record failures land in the `error`
/// column and do not stop the run.
pub fn bench_run(manifest: &Manifest) -> Vec<BenchRecord> {
    let mut tasks = Vec::new();
    for (e, entry) in manifest.entries.iter().enumerate() {
        for &size in &entry.sizes {
            for &seed in &entry.seeds {
                tasks.push((e, entry, size, seed));
            }
        }
    }
    tasks
        .par_iter()
        .map(|&(e, entry, size, seed)| {
            let id = format!("{e}-{}-{size}-{seed}", family_name(entry.family));
            let family = family_name(entry.family).to_string();
            let inst = match build_instance(entry, size, seed) {
                Ok(i) => i,
                Err(err) => {
                    return entry
                        .algorithms
                        .iter()
                        .map(|a| BenchRecord {
                            instance_id: id.clone(),
                            family: family.clone(),
                            n: size,
                            algorithm: a.tag().into(),
                            seed,
                            achieved_envy: None,
                            certificate_bound: None,
                            optimal_envy: None,
                            ratio: None,
                            wall_ms: 0.0,
                            error: Some(err.to_string()),
                        })
                        .collect::<Vec<_>>();
                }
            };
            let runs: Vec<(BenchAlgorithm, Result<Outcome>, f64)> = entry
                .algorithms
                .iter()
                .map(|&a| {
                    let t = Instant::now();
                    let out = run_algorithm(a, &inst);
                    let ms = if manifest.record_timing { t.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
                    (a, out, ms)
                })
                .collect();
            let optimal = runs
                .iter()
                .find(|(a, r, _)| matches!(a, BenchAlgorithm::Exact | BenchAlgorithm::Bruteforce) && r.is_ok())
                .map(|(_, r, _)| r.as_ref().expect("checked ok").achieved.clone());
            runs.into_iter()
                .map(|(a, out, ms)| {
                    let (achieved, bound, error) = match out {
                        Ok(o) => (Some(o.achieved), o.bound, None),
                        Err(err) => (None, None, Some(err.to_string())),
                    };
                    BenchRecord {
                        instance_id: id.clone(),
                        family: family.clone(),
                        n: inst.n(),
                        algorithm: a.tag().into(),
                        seed,
                        ratio: match (&achieved, &optimal) {
                            (Some(x), Some(o)) => ratio(x, o),
                            _ => None,
                        },
                        achieved_envy: achieved.map(|x| x.to_str_radix(10)),
                        certificate_bound: bound.map(|x| x.to_str_radix(10)),
                        optimal_envy: optimal.as_ref().map(|x| x.to_str_radix(10)),
                        wall_ms: ms,
                        error,
                    }
                })
                .collect()
        })
        .collect::<Vec<Vec<BenchRecord>>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Writes the schema line, a header, then one row per record.
pub fn write_csv<W: Write>(records: &[BenchRecord], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_SCHEMA_LINE}").map_err(|e| Error::Parse(e.to_string()))?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record([
        "instance_id",
        "family",
        "n",
        "algorithm",
        "seed",
        "achieved_envy",
        "certificate_bound",
        "optimal_envy",
        "ratio",
        "wall_ms",
        "error",
    ])
    .map_err(|e| Error::Parse(e.to_string()))?;
    for r in records {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_csv(text: &str) -> Result<Vec<BenchRecord>> {
    let body = text
        .strip_prefix(CSV_SCHEMA_LINE)
        .ok_or_else(|| Error::Parse("missing schema line".into()))?
        .trim_start_matches(['\r', '\n']);
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    rdr.deserialize().map(|r| r.map_err(|e| Error::Parse(e.to_string()))).collect()
}

/// `(n, ratio)` points per family, for records that carry a ratio.
pub fn plot_data(records: &[BenchRecord]) -> BTreeMap<String, Vec<(usize, String, f64)>> {
    let mut out: BTreeMap<String, Vec<(usize, String, f64)>> = BTreeMap::new();
    for r in records {
        if let Some(x) = r.ratio {
            out.entry(r.family.clone()).or_default().push((r.n, r.algorithm.clone(), x));
        }
    }
    out
}
