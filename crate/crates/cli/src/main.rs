use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gha_core::approx::{complete_tree_depth, heuristic_layout, inorder_allocation, layout_allocation, trickle_down, LayoutStrategy};
use gha_core::bench::{bench_run, parse_manifest, plot_data, write_csv};
use gha_core::exact::{solve_exact_bruteforce, solve_exact_dp};
use gha_core::gadgets::{
    envy_yes_threshold, gen_bounded_tree_instance, gen_clique, gen_depth2_tree, gen_expander, gen_flower_instance, gen_grid,
    hub_yes_bound, yes_allocation, BoundedTreeOptions, GadgetFamily, GadgetInstance,
};
use gha_core::io::{
    allocation_to_json, approx_to_json, exact_result_to_json, instance_to_json, parse_instance, parse_three_partition, parse_values,
    parse_witness, roles_to_json,
};
use gha_core::random::{allocation_envelope, arbitrary_allocation_ratio, concentration_check, epsilon_threshold, sample_gnp_half};
use gha_core::repunit::{elegance_table, runs};
use gha_core::verify::run_suite;
use gha_core::{envy, Error, Graph, HouseValues};
use num_bigint::BigUint;
use serde_json::json;

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_TOO_LARGE: u8 = 3;

#[derive(Parser)]
#[command(name = "gha", version, about = "Graphical house allocation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact optimum by subset DP (or brute force).
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        bruteforce: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Approximate allocation with its certificate.
    Approx {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Depth of the complete binary tree (inorder only).
        #[arg(long)]
        depth: Option<u32>,
        /// JSON array of house values (inorder only).
        #[arg(long)]
        values: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "bfs")]
        layout: LayoutKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hardness gadget instance from a 3-partition instance.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        tp: Option<PathBuf>,
        #[arg(long = "C", default_value_t = 1)]
        c: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Flower size (flower family).
        #[arg(long)]
        n: Option<usize>,
        /// Petal count parameter (flower family).
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Allow items below the hardness scale (bounded-tree family).
        #[arg(long)]
        desk_scale: bool,
        /// Partition witness; emits and checks the certificate allocation.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        roles_out: Option<PathBuf>,
        #[arg(long)]
        alloc_out: Option<PathBuf>,
    },
    /// CSV of elegance(m) for m = 1..=upto.
    Elegance {
        #[arg(long)]
        upto: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cut concentration and allocation ratios on G(n, 1/2).
    RandomExperiment {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 1000)]
        subsets: usize,
        #[arg(long, default_value_t = 20)]
        allocations: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Built-in check suite.
    Verify {
        #[arg(long)]
        suite: String,
    },
    /// Benchmark from a manifest.
    Bench {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for per-family plot-data files.
        #[arg(long)]
        plot_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Trickle,
    Layout,
    Inorder,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutKind {
    Bfs,
    Dfs,
    Trickle,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Depth2,
    Clique,
    Grid,
    Expander,
    Flower,
    BoundedTree,
}

enum Failure {
    Usage(String),
    Verify(String),
    TooLarge(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge { .. } => Failure::TooLarge(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn line(s: String) -> String {
    s + "\n"
}

fn solve(instance: &Path, bruteforce: bool, out: Option<&Path>) -> Result<()> {
    let inst = parse_instance(&read(instance)?)?;
    let r = if bruteforce { solve_exact_bruteforce(&inst)? } else { solve_exact_dp(&inst)? };
    emit(out, &line(exact_result_to_json(&r)))
}

fn approx(algo: Algo, instance: Option<&Path>, depth: Option<u32>, values: Option<&Path>, layout: LayoutKind, out: Option<&Path>) -> Result<()> {
    let (alloc, cert) = match algo {
        Algo::Inorder => {
            let houses = match (instance, values) {
                (Some(p), None) => {
                    let inst = parse_instance(&read(p)?)?;
                    let d = complete_tree_depth(inst.n())?;
                    if *inst.graph() != Graph::complete_binary_tree(d) {
                        return Err(Failure::Usage("inorder needs a complete binary tree in heap order".into()));
                    }
                    inst.houses().clone()
                }
                (None, Some(p)) => parse_values(&read(p)?)?,
                _ => return Err(Failure::Usage("inorder takes exactly one of --instance or --values".into())),
            };
            let d = complete_tree_depth(houses.len())?;
            if let Some(want) = depth {
                if want != d {
                    return Err(Failure::Usage(format!("{} values fit depth {d}, not {want}", houses.len())));
                }
            }
            inorder_allocation(d, &houses)?
        }
        Algo::Trickle | Algo::Layout => {
            let p = instance.ok_or_else(|| Failure::Usage("--instance is required".into()))?;
            let inst = parse_instance(&read(p)?)?;
            if matches!(algo, Algo::Trickle) {
                trickle_down(inst.graph(), inst.houses())?
            } else {
                let strategy = match layout {
                    LayoutKind::Bfs => LayoutStrategy::BfsOrder,
                    LayoutKind::Dfs => LayoutStrategy::DfsOrder,
                    LayoutKind::Trickle => LayoutStrategy::TreeTrickleOrder,
                    LayoutKind::Exact => LayoutStrategy::ExactSmall,
                };
                layout_allocation(&inst, &heuristic_layout(inst.graph(), strategy)?)?
            }
        }
    };
    emit(out, &line(approx_to_json(&alloc, &cert)))?;
    if !cert.holds() {
        return Err(Failure::Verify(format!("achieved {} exceeds bound {}", cert.achieved_envy, cert.guarantee_bound)));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn generate(
    family: Family,
    tp_path: Option<&Path>,
    c: usize,
    seed: u64,
    n: Option<usize>,
    k: usize,
    desk_scale: bool,
    witness: Option<&Path>,
    out: Option<&Path>,
    roles_out: Option<&Path>,
    alloc_out: Option<&Path>,
) -> Result<()> {
    let gadget: GadgetInstance = if let Family::Flower = family {
        let n = n.ok_or_else(|| Failure::Usage("flower needs --n".into()))?;
        gen_flower_instance(n, k)?
    } else {
        let p = tp_path.ok_or_else(|| Failure::Usage("--tp is required".into()))?;
        let tp = parse_three_partition(&read(p)?)?;
        match family {
            Family::Depth2 => gen_depth2_tree(&tp, c)?,
            Family::Clique => gen_clique(&tp, c)?,
            Family::Grid => gen_grid(&tp, c)?,
            Family::Expander => gen_expander(&tp, c, seed)?,
            Family::BoundedTree => {
                let opts = BoundedTreeOptions { enforce_scale: !desk_scale, ..Default::default() };
                gen_bounded_tree_instance(&tp, &opts)?
            }
            Family::Flower => unreachable!(),
        }
    };
    emit(out, &line(instance_to_json(&gadget.instance)))?;
    if let Some(p) = roles_out {
        fs::write(p, line(roles_to_json(&gadget.roles)))?;
    }
    if let Some(w) = witness {
        let w = parse_witness(&read(w)?)?;
        let alloc = yes_allocation(&gadget, &w)?;
        let got = envy(&gadget.instance, &alloc)?;
        let tp = gadget.tp.as_ref().expect("witness families carry tp");
        let bound = match gadget.family {
            GadgetFamily::BoundedTree => envy_yes_threshold(tp),
            _ => BigUint::from(hub_yes_bound(tp)),
        };
        if let Some(p) = alloc_out {
            fs::write(p, line(allocation_to_json(&alloc)))?;
        }
        eprintln!("yes allocation envy {got}, bound {bound}");
        if got > bound {
            return Err(Failure::Verify(format!("yes allocation envy {got} exceeds {bound}")));
        }
    }
    Ok(())
}

fn elegance_csv(upto: u64, out: Option<&Path>) -> Result<()> {
    let table = elegance_table(upto);
    let mut text = String::from("m,elegance,witness_terms,runs\n");
    for m in 1..=upto {
        let rec = table.record(m);
        let terms: Vec<String> = rec.witness.terms.iter().map(|t| t.to_string()).collect();
        text.push_str(&format!("{m},{},{},{}\n", rec.elegance, terms.join(";"), runs(m)));
    }
    emit(out, &text)
}

#[allow(clippy::too_many_arguments)]
fn random_experiment(
    n: usize,
    seed: u64,
    trials: usize,
    subsets: usize,
    allocations: usize,
    out: Option<&Path>,
    summary: Option<&Path>,
) -> Result<()> {
    if n < 2 {
        return Err(Failure::Usage("--n must be at least 2".into()));
    }
    let eps = epsilon_threshold(n);
    let envelope = allocation_envelope(n);
    let houses = HouseValues::from_u64s(&(0..n as u64).collect::<Vec<_>>())?;
    let mut text = String::from("trial,seed,edges,subsets,violations,worst_low_ratio,worst_high_ratio,allocation_ratio,passed\n");
    let mut failures = Vec::new();
    let mut worst_ratio = 0.0f64;
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        let g = sample_gnp_half(n, s);
        let rep = concentration_check(&g, eps, subsets, s)?;
        let ratio = arbitrary_allocation_ratio(&g, &houses, allocations, s)?;
        let passed = rep.violations == 0 && ratio <= envelope;
        if !passed {
            failures.push(s);
        }
        worst_ratio = worst_ratio.max(ratio);
        text.push_str(&format!(
            "{t},{s},{},{},{},{},{},{ratio:.6},{passed}\n",
            g.edge_count(),
            rep.samples,
            rep.violations,
            rep.worst_low_ratio,
            rep.worst_high_ratio
        ));
    }
    emit(out, &text)?;
    let report = json!({
        "n": n,
        "seed": seed,
        "trials": trials,
        "epsilon": eps,
        "allocation_envelope": envelope,
        "worst_allocation_ratio": worst_ratio,
        "failed_seeds": failures,
    });
    match summary {
        Some(p) => fs::write(p, line(report.to_string()))?,
        None => eprintln!("{report}"),
    }
    Ok(())
}

fn verify(suite: &str) -> Result<()> {
    let results = run_suite(suite)?;
    let mut failed = 0;
    for r in &results {
        println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
        failed += usize::from(!r.passed);
    }
    if failed > 0 {
        return Err(Failure::Verify(format!("{failed} of {} checks failed", results.len())));
    }
    Ok(())
}

fn bench(manifest: &Path, out: Option<&Path>, plot_dir: Option<&Path>) -> Result<()> {
    let m = parse_manifest(&read(manifest)?)?;
    let records = bench_run(&m);
    let mut buf = Vec::new();
    write_csv(&records, &mut buf)?;
    emit(out, &String::from_utf8(buf).expect("csv is utf-8"))?;
    if let Some(dir) = plot_dir {
        fs::create_dir_all(dir)?;
        for (family, points) in plot_data(&records) {
            let mut text = String::from("n,algorithm,ratio\n");
            for (n, algo, ratio) in points {
                text.push_str(&format!("{n},{algo},{ratio}\n"));
            }
            fs::write(dir.join(format!("{family}.csv")), text)?;
        }
    }
    for r in records.iter().filter(|r| r.error.is_some()) {
        eprintln!("{} {}: {}", r.instance_id, r.algorithm, r.error.as_deref().unwrap_or_default());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve { instance, bruteforce, out } => solve(&instance, bruteforce, out.as_deref()),
        Command::Approx { algo, instance, depth, values, layout, out } => {
            approx(algo, instance.as_deref(), depth, values.as_deref(), layout, out.as_deref())
        }
        Command::Generate { family, tp, c, seed, n, k, desk_scale, witness, out, roles_out, alloc_out } => generate(
            family,
            tp.as_deref(),
            c,
            seed,
            n,
            k,
            desk_scale,
            witness.as_deref(),
            out.as_deref(),
            roles_out.as_deref(),
            alloc_out.as_deref(),
        ),
        Command::Elegance { upto, out } => elegance_csv(upto, out.as_deref()),
        Command::RandomExperiment { n, seed, trials, subsets, allocations, out, summary } => {
            random_experiment(n, seed, trials, subsets, allocations, out.as_deref(), summary.as_deref())
        }
        Command::Verify { suite } => verify(&suite),
        Command::Bench { manifest, out, plot_dir } => bench(&manifest, out.as_deref(), plot_dir.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::TooLarge(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_TOO_LARGE)
        }
    }
}
