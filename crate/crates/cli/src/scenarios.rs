//! The experiment subcommands.

use crate::config::{Config, SeedRange};
use anyhow::{bail, Context, Result};
use clap::Args;
use onlab_core::analysis::{approximate, certify_error, Evaluator};
use onlab_core::binpacking::{first_fit_pack, optimal_pack_exact, PackingInstance};
use onlab_core::colouring::{
    bean_adversary, cbip_colour, chromatic_exact, first_fit_colour, generate_bipartite,
    generate_d_inductive, performance_report, Colouring, FirstFit,
};
use onlab_core::interval::{kt_chain_cover, random_interval_instance};
use onlab_core::ratio::{format_big, format_rat, parse_rat, Rat};
use onlab_core::reductions::{
    check_ratio_preserving, incr_to_sw, limiting_run, sw_to_incr, CostModel, IncrementalChange,
    IncrementalReduction, RatioReduction,
};
use onlab_core::report::{to_csv, ReportRow};
use onlab_core::wkl::{
    block_boundary, check_separating, composed_limiting_path, limiting_path, widen_separating,
    Node, TreeStages,
};
use onlab_core::{ArrivalPrefix, Event, StructureKind};
use std::fs;
use std::path::{Path, PathBuf};

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

// ---------------------------------------------------------------------------
// colour
// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct ColourArgs {
    /// Solver: first-fit or cbip.
    #[arg(long)]
    solver: Option<String>,
    /// Vertex count.
    #[arg(long)]
    n: Option<usize>,
    /// Back-edge bound of the generated graphs (first-fit generator).
    #[arg(long)]
    d: Option<usize>,
    /// Play the forest adversary for this target colour count instead of
    /// running on generated instances.
    #[arg(long)]
    t: Option<usize>,
    /// Edge density of bipartite instances (cbip generator).
    #[arg(long)]
    density: Option<f64>,
    /// Seed or inclusive range `a..b`.
    #[arg(long)]
    seeds: Option<SeedRange>,
    /// Vertex cap of the exact chromatic oracle.
    #[arg(long)]
    oracle_cap: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run_colour(args: ColourArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let solver = cfg.resolve(&args.solver, "solver", "first-fit".to_string())?;
    let n = cfg.resolve(&args.n, "n", 14)?;
    let d = cfg.resolve(&args.d, "d", 2)?;
    let t = cfg.resolve(&args.t, "t", 0)?;
    let density = cfg.resolve(&args.density, "density", 0.05)?;
    let seeds = cfg.resolve(&args.seeds, "seeds", SeedRange { lo: 1, hi: 10 })?;
    let cap = cfg.resolve(&args.oracle_cap, "oracle-cap", 16)?;
    let out_dir = cfg.resolve(&args.out_dir, "out-dir", PathBuf::from("out"))?;

    if t > 0 {
        return run_colour_adversary(&solver, t, &out_dir);
    }

    let mut rows = Vec::new();
    for seed in seeds.iter() {
        let (graph, trace, d_or_k) = match solver.as_str() {
            "first-fit" => {
                let g = generate_d_inductive(d, n, seed);
                let t = first_fit_colour(&g.to_prefix());
                (g, t, d as u64)
            }
            "cbip" => {
                let g = generate_bipartite(n, density, seed);
                let t = cbip_colour(&g.to_prefix())
                    .map_err(|e| anyhow::anyhow!("seed {seed}: {e}"))?;
                (g, t, 2)
            }
            other => bail!("unknown solver {other:?} (expected first-fit or cbip)"),
        };
        if !trace.ok() {
            bail!("seed {seed}: solver violated its contract: {:?}", trace.first_violation());
        }
        let colouring = Colouring::from_trace(&trace).expect("clean run commits output");
        let online = colouring.count() as u64;
        let offline = chromatic_exact(&graph, cap)
            .map_err(|e| anyhow::anyhow!("offline oracle on seed {seed}: {e}"))?
            as u64;
        let report = performance_report(online, offline)?;
        write_file(
            &out_dir,
            &format!("colour_{solver}_n{n}_k{d_or_k}_s{seed}.jsonl"),
            &graph.to_prefix().to_jsonl(),
        )?;
        rows.push(ReportRow {
            kind: format!("colour-{solver}"),
            n,
            d_or_k,
            online_cost: online,
            offline_cost: offline,
            ratio: report.ratio,
            seed,
        });
    }
    let csv = to_csv(&rows);
    let path = write_file(&out_dir, &format!("colour_{solver}.csv"), &csv)?;
    print!("{csv}");
    eprintln!("wrote {}", path.display());
    Ok(())
}

/// Adversary game: force `t` colours out of the chosen solver on a forest
/// with at most `2^(t-1)` vertices.
fn run_colour_adversary(solver: &str, t: usize, out_dir: &Path) -> Result<()> {
    let outcome = match solver {
        "first-fit" => bean_adversary(t, &mut FirstFit::new()),
        "cbip" => bean_adversary(t, &mut onlab_core::colouring::Cbip::new()),
        other => bail!("unknown solver {other:?} (expected first-fit or cbip)"),
    }
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    if !outcome.graph.is_forest() {
        bail!("adversary instance is not a forest");
    }
    let prefix = outcome.graph.to_prefix();
    let path = write_file(out_dir, &format!("bean_{solver}_t{t}.jsonl"), &prefix.to_jsonl())?;
    println!(
        "forced {} colours on a forest with {} vertices (bound {})",
        outcome.forced,
        outcome.graph.n(),
        1usize << (t - 1)
    );
    eprintln!("wrote {}", path.display());
    if outcome.forced < t {
        bail!("adversary fell short: {} < {t}", outcome.forced);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// pack
// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct PackArgs {
    /// Item count per instance.
    #[arg(long)]
    n: Option<usize>,
    /// Sizes are drawn uniformly from {1/grid, ..., grid/grid}.
    #[arg(long)]
    grid: Option<u32>,
    #[arg(long)]
    seeds: Option<SeedRange>,
    /// Item cap of the exact optimum.
    #[arg(long)]
    oracle_cap: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run_pack(args: PackArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let n = cfg.resolve(&args.n, "n", 10)?;
    let grid = cfg.resolve(&args.grid, "grid", 6)?;
    let seeds = cfg.resolve(&args.seeds, "seeds", SeedRange { lo: 1, hi: 20 })?;
    let cap = cfg.resolve(&args.oracle_cap, "oracle-cap", 12)?;
    let out_dir = cfg.resolve(&args.out_dir, "out-dir", PathBuf::from("out"))?;

    use rand::{Rng, SeedableRng};
    let mut rows = Vec::new();
    for seed in seeds.iter() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let sizes: Vec<Rat> = (0..n)
            .map(|_| Rat::new(rng.gen_range(1..=grid) as i64, grid as i64))
            .collect();
        let inst = PackingInstance::new(Rat::from_integer(1), sizes)?;
        let (trace, packing) = first_fit_pack(&inst);
        if !trace.ok() {
            bail!("seed {seed}: packing run violated its contract");
        }
        let opt = optimal_pack_exact(&inst, cap)
            .map_err(|e| anyhow::anyhow!("offline oracle on seed {seed}: {e}"))?;
        let report = performance_report(packing.bin_count() as u64, opt as u64)?;
        write_file(&out_dir, &format!("pack_n{n}_g{grid}_s{seed}.jsonl"), &inst.to_jsonl())?;
        rows.push(ReportRow {
            kind: "pack-first-fit".into(),
            n,
            d_or_k: grid as u64,
            online_cost: packing.bin_count() as u64,
            offline_cost: opt as u64,
            ratio: report.ratio,
            seed,
        });
    }
    let csv = to_csv(&rows);
    let path = write_file(&out_dir, "pack.csv", &csv)?;
    print!("{csv}");
    eprintln!("wrote {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// chains
// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct ChainsArgs {
    /// Interval count per instance.
    #[arg(long)]
    n: Option<usize>,
    /// Target width.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seeds: Option<SeedRange>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run_chains(args: ChainsArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let n = cfg.resolve(&args.n, "n", 80)?;
    let k = cfg.resolve(&args.k, "k", 3)?;
    let seeds = cfg.resolve(&args.seeds, "seeds", SeedRange { lo: 1, hi: 20 })?;
    let out_dir = cfg.resolve(&args.out_dir, "out-dir", PathBuf::from("out"))?;

    let mut rows = Vec::new();
    for seed in seeds.iter() {
        let inst = random_interval_instance(n, k, seed);
        let prefix = inst.to_order_prefix();
        let (trace, cover) =
            kt_chain_cover(&prefix, k).map_err(|e| anyhow::anyhow!("seed {seed}: {e}"))?;
        if !trace.ok() {
            bail!("seed {seed}: chain cover violated its contract");
        }
        write_file(&out_dir, &format!("chains_k{k}_s{seed}.jsonl"), &inst.to_jsonl())?;
        write_file(&out_dir, &format!("chains_k{k}_s{seed}_cover.csv"), &cover.to_csv())?;
        let chains = cover.chain_count() as u64;
        let report = performance_report(chains, k as u64)?;
        rows.push(ReportRow {
            kind: "chains-kt".into(),
            n,
            d_or_k: k as u64,
            online_cost: chains,
            offline_cost: k as u64,
            ratio: report.ratio,
            seed,
        });
    }
    let csv = to_csv(&rows);
    let path = write_file(&out_dir, &format!("chains_k{k}.csv"), &csv)?;
    print!("{csv}");
    eprintln!("wrote {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// roundtrip (incremental <-> sW on enumerated graphs) or ratio
    /// (chain-cover reduction on random interval instances).
    #[arg(long)]
    mode: Option<String>,
    /// Enumeration height cap (roundtrip) or interval count (ratio).
    #[arg(long)]
    n: Option<usize>,
    /// Width bound for ratio mode.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seeds: Option<SeedRange>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn edge_rows_to_bits(p: &ArrivalPrefix) -> ArrivalPrefix {
    let mut out = ArrivalPrefix::new(StructureKind::Bitstring);
    for e in p.events() {
        let has = e.as_row().is_some_and(|r| r.iter().any(|&b| b));
        out.push(Event::Row(vec![has]));
    }
    out
}

fn all_graph_prefixes(max_height: usize) -> Vec<ArrivalPrefix> {
    let mut out = vec![ArrivalPrefix::new(StructureKind::Graph)];
    for h in 1..=max_height {
        let mut next = Vec::new();
        for p in &out {
            if p.height() + 1 != h {
                continue;
            }
            for bits in 0u32..(1 << (h - 1)) {
                let mut q = p.clone();
                q.push(Event::Row((0..h - 1).map(|i| bits & (1 << i) != 0).collect()));
                next.push(q);
            }
        }
        out.extend(next);
    }
    out
}

pub fn run_reduce(args: ReduceArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let mode = cfg.resolve(&args.mode, "mode", "roundtrip".to_string())?;
    let out_dir = cfg.resolve(&args.out_dir, "out-dir", PathBuf::from("out"))?;
    match mode.as_str() {
        "roundtrip" => {
            let n = cfg.resolve(&args.n, "n", 4)?;
            run_reduce_roundtrip(n, &out_dir)
        }
        "ratio" => {
            let n = cfg.resolve(&args.n, "n", 60)?;
            let k = cfg.resolve(&args.k, "k", 4)?;
            let seeds = cfg.resolve(&args.seeds, "seeds", SeedRange { lo: 1, hi: 10 })?;
            run_reduce_ratio(n, k, seeds, &out_dir)
        }
        other => bail!("unknown mode {other:?} (expected roundtrip or ratio)"),
    }
}

fn run_reduce_roundtrip(max_height: usize, out_dir: &Path) -> Result<()> {
    use onlab_core::reductions::DecisionProblem;
    let p = DecisionProblem::new("has-edge", StructureKind::Graph, |p: &ArrivalPrefix| {
        p.events()
            .iter()
            .any(|e| e.as_row().is_some_and(|r| r.iter().any(|&b| b)))
    });
    let q = DecisionProblem::new("has-one", StructureKind::Bitstring, |p: &ArrivalPrefix| {
        p.events()
            .iter()
            .any(|e| e.as_row().is_some_and(|r| r.iter().any(|&b| b)))
    });
    let incr = IncrementalReduction::new(
        "edge-rows-to-bits",
        edge_rows_to_bits,
        |p: &ArrivalPrefix, change: &IncrementalChange| {
            let p2 = change.apply(p);
            IncrementalChange::diff(&edge_rows_to_bits(p), &edge_rows_to_bits(&p2))
                .expect("same length")
        },
        |n| n,
    );
    let sw = incr_to_sw(&incr);
    let back = sw_to_incr(&sw).map_err(|e| anyhow::anyhow!("{e}"))?;

    let mut rows = Vec::new();
    let mut total = 0u64;
    let mut passed = 0u64;
    for height in 0..=max_height {
        let mut height_total = 0u64;
        let mut height_passed = 0u64;
        for inst in all_graph_prefixes(max_height)
            .into_iter()
            .filter(|p| p.height() == height)
        {
            let direct = p.holds(&inst);
            let ok = direct == q.holds(&incr.transform(&inst))
                && direct == q.holds(&sw.forward(&inst))
                && direct == q.holds(&back.transform(&inst));
            height_total += 1;
            height_passed += ok as u64;
        }
        total += height_total;
        passed += height_passed;
        rows.push(ReportRow {
            kind: "reduce-roundtrip".into(),
            n: height,
            d_or_k: 0,
            online_cost: height_passed,
            offline_cost: height_total,
            ratio: Rat::new(height_passed as i64, height_total.max(1) as i64),
            seed: 0,
        });
    }
    let csv = to_csv(&rows);
    let path = write_file(out_dir, "reduce_roundtrip.csv", &csv)?;
    print!("{csv}");
    eprintln!("round trip verdicts preserved on {passed}/{total} instances");
    eprintln!("wrote {}", path.display());
    if passed != total {
        bail!("round trip failed on {} instances", total - passed);
    }
    Ok(())
}

fn run_reduce_ratio(n: usize, k: usize, seeds: SeedRange, out_dir: &Path) -> Result<()> {
    let reduction = RatioReduction {
        b: Box::new(|p: &ArrivalPrefix| {
            let mut out = ArrivalPrefix::new(StructureKind::IntervalOrder);
            for e in p.events() {
                out.push(e.clone());
            }
            out
        }),
        a: Box::new(|_p: &ArrivalPrefix, sol: &[u32]| sol.to_vec()),
        d: Rat::from_integer(1),
    };
    let count_distinct =
        |out: &[u32]| out.iter().collect::<std::collections::BTreeSet<_>>().len() as u64;
    let k_for_cost = k;
    let costs = CostModel {
        cost: Box::new(move |out| count_distinct(out)),
        offline: Box::new(move |p: &ArrivalPrefix| {
            let rows = onlab_core::interval::OrderArrival::from_prefix(p).expect("rows");
            onlab_core::interval::width_exact(&rows, usize::MAX, None).unwrap_or(k_for_cost) as u64
        }),
    };

    let mut rows = Vec::new();
    let mut worst = Rat::from_integer(0);
    for seed in seeds.iter() {
        let inst = random_interval_instance(n, k, seed);
        let order = inst.to_order_prefix();
        write_file(out_dir, &format!("reduce_ratio_k{k}_s{seed}.jsonl"), &inst.to_jsonl())?;

        let mut f_solve = |p: &ArrivalPrefix| -> Vec<u32> {
            let (_, cover) = onlab_core::interval::colour_via_chains(p, k).expect("width promise");
            cover.assignments.iter().map(|&(_, c)| c).collect()
        };
        let mut g_solve = |p: &ArrivalPrefix| -> Vec<u32> {
            let (_, cover) = kt_chain_cover(p, k).expect("width promise");
            cover.assignments.iter().map(|&(_, c)| c).collect()
        };
        let g_costs = CostModel {
            cost: Box::new(move |out| count_distinct(out)),
            offline: Box::new(move |p: &ArrivalPrefix| {
                let rows = onlab_core::interval::OrderArrival::from_prefix(p).expect("rows");
                onlab_core::interval::width_exact(&rows, usize::MAX, None).unwrap_or(1) as u64
            }),
        };
        let report = check_ratio_preserving(
            &reduction,
            &mut f_solve,
            &mut g_solve,
            &costs,
            &g_costs,
            &[order.clone()],
        );
        if !report.pass {
            bail!("ratio reduction failed on seed {seed}: {:?}", report.failures);
        }
        worst = worst.max(report.max_quotient);
        let (_, cover) = kt_chain_cover(&order, k).map_err(|e| anyhow::anyhow!("{e}"))?;
        rows.push(ReportRow {
            kind: "reduce-ratio".into(),
            n,
            d_or_k: k as u64,
            online_cost: cover.chain_count() as u64,
            offline_cost: k as u64,
            ratio: report.max_quotient,
            seed,
        });
    }
    let csv = to_csv(&rows);
    let path = write_file(out_dir, &format!("reduce_ratio_k{k}.csv"), &csv)?;
    print!("{csv}");
    eprintln!("max source/target ratio quotient: {} (d = 1)", format_rat(&worst));
    eprintln!("wrote {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// wkl
// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct WklArgs {
    /// Height of the base tree.
    #[arg(long)]
    height: Option<usize>,
    /// Number of death stages.
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    seeds: Option<SeedRange>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run_wkl(args: WklArgs) -> Result<()> {
    use rand::{Rng, SeedableRng};
    let cfg = Config::load(args.config.as_deref())?;
    let height = cfg.resolve(&args.height, "height", 3)?;
    let horizon = cfg.resolve(&args.horizon, "horizon", 8)?;
    let seeds = cfg.resolve(&args.seeds, "seeds", SeedRange { lo: 1, hi: 10 })?;
    let out_dir = cfg.resolve(&args.out_dir, "out-dir", PathBuf::from("out"))?;

    let mut rows = Vec::new();
    let mut paths_out = String::new();
    for seed in seeds.iter() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let deaths: Vec<Vec<Node>> = (0..horizon)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    let len = rng.gen_range(1..=height);
                    vec![Node { len, code: rng.gen_range(0..(1u64 << len)) }]
                } else {
                    vec![]
                }
            })
            .collect();
        let stages = TreeStages::new(height, deaths);
        write_file(&out_dir, &format!("wkl_h{height}_s{seed}.jsonl"), &stages.to_jsonl())?;

        let final_tree = stages.snapshot(horizon);
        let widened = widen_separating(&final_tree);
        if widened.height() <= 20 {
            let explicit = widened.to_pruned_tree().map_err(|e| anyhow::anyhow!("{e}"))?;
            if !check_separating(&explicit).is_separating() {
                bail!("seed {seed}: widened tree is not separating");
            }
        }
        let direct = limiting_path(&stages, horizon);
        let composed = composed_limiting_path(&stages, horizon);
        let settle = |t: &onlab_core::reductions::LimitingTrace| -> u64 {
            (1..=height).filter_map(|n| t.last_change(n)).sum::<usize>() as u64
        };
        let (ds, cs) = (settle(&direct).max(1), settle(&composed).max(1));
        let final_path = direct
            .rows
            .last()
            .map(|r| {
                r.iter()
                    .map(|&b| if b == 1 { '1' } else { '0' })
                    .collect::<String>()
            })
            .unwrap_or_default();
        paths_out.push_str(&format!("seed={seed} path={final_path}\n"));
        rows.push(ReportRow {
            kind: "wkl-limiting".into(),
            n: height,
            d_or_k: block_boundary(height) as u64,
            online_cost: cs,
            offline_cost: ds,
            ratio: Rat::new(cs as i64, ds as i64),
            seed,
        });
    }
    let csv = to_csv(&rows);
    let path = write_file(&out_dir, &format!("wkl_h{height}.csv"), &csv)?;
    write_file(&out_dir, &format!("wkl_h{height}_paths.txt"), &paths_out)?;
    print!("{csv}");
    eprintln!("wrote {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// analysis
// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct AnalysisArgs {
    /// Evaluator: id, sq, abs or sin.
    #[arg(long)]
    f: Option<String>,
    /// Smallest precision index.
    #[arg(long)]
    nmin: Option<u32>,
    /// Largest precision index.
    #[arg(long)]
    nmax: Option<u32>,
    /// Total sample budget for certification.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run_analysis(args: AnalysisArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let fname = cfg.resolve(&args.f, "f", "sq".to_string())?;
    let nmin = cfg.resolve(&args.nmin, "nmin", 2)?;
    let nmax = cfg.resolve(&args.nmax, "nmax", 8)?;
    let samples = cfg.resolve(&args.samples, "samples", 4096)?;
    let out_dir = cfg.resolve(&args.out_dir, "out-dir", PathBuf::from("out"))?;

    let f = Evaluator::by_name(&fname)
        .ok_or_else(|| anyhow::anyhow!("unknown evaluator {fname:?} (id, sq, abs, sin)"))?;
    if nmin < 2 || nmin > nmax {
        bail!("need 2 <= nmin <= nmax");
    }
    let mut summary = String::new();
    for n in nmin..=nmax {
        let h = approximate(&f, n).map_err(|e| anyhow::anyhow!("{e}"))?;
        let gaps = h.breakpoints.len().saturating_sub(1).max(1);
        let per_gap = (samples / gaps).max(2);
        let report = certify_error(&f, &h, per_gap);
        let line = format!(
            "f={fname} n={n} breakpoints={} depth={} budget={} certified={} measured={} samples={} pass={}\n",
            h.breakpoints.len(),
            h.depth,
            format_big(&h.budget),
            format_big(&h.certified),
            format_big(&report.measured_sup),
            report.samples,
            report.pass
        );
        summary.push_str(&line);
        print!("{line}");
        write_file(&out_dir, &format!("approx_{fname}_n{n}.csv"), &h.to_csv())?;
        if !report.pass {
            bail!("certification failed for f={fname} at n={n}");
        }
    }
    write_file(&out_dir, &format!("analysis_{fname}.txt"), &summary)?;
    Ok(())
}

