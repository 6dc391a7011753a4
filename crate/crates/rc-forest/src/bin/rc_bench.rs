//! Benchmark and verification driver.
//!
//! Generates a random forest stream, pushes it through the ternarized
//! batch-dynamic pipeline and times one operation, optionally checking
//! every answer against the brute-force oracles (small inputs) or a
//! freshly rebuilt structure (large inputs). Reports are one
//! machine-parseable `key=value` record per line.
//!
//! ```text
//! rc-bench --op build --n 100000 --threads 4
//! rc-bench --op subtree-batch --n 100000 --batch-size 10000 --verify
//! rc-bench --op msf --n 500 --batch-size 50 --batches 20 --verify
//! ```

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use rc_forest::msf::IncrementalMsf;
use rc_forest::oracle::{
    oracle_connected, oracle_lca, oracle_msf, oracle_nearest_marked, oracle_path_min,
    oracle_path_sum, oracle_subtree_aggregate,
};
use rc_forest::rc::{RcConfig, Scheme};
use rc_forest::treegen::{generate_forest, generate_queries, ForestGenConfig, QueryBatch, QueryKind};
use rc_forest::{AggKind, Forest, SubtreeContent, TernaryForest, WeightedEdge};

#[derive(Clone, Debug)]
struct Args {
    op: String,
    n: usize,
    mean: f64,
    dist: String,
    local_prob: f64,
    seed: u64,
    threads: usize,
    batch_size: usize,
    batches: usize,
    weight_max: i64,
    deterministic: bool,
    verify: bool,
    report: Option<String>,
}

impl Default for Args {
    fn default() -> Self {
        Args {
            op: "build".into(),
            n: 100_000,
            mean: 10.0,
            dist: "geometric".into(),
            local_prob: 0.5,
            seed: 42,
            threads: 1,
            batch_size: 1000,
            batches: 20,
            weight_max: 1_000_000,
            deterministic: false,
            verify: false,
            report: None,
        }
    }
}

const USAGE: &str = "\
rc-bench: generate forests, run one batch-dynamic operation, report timings

  --op <name>         build | link | cut | connected | subtree |
                      subtree-batch | path-sum | path-min | lca | nearest | msf
  --n <int>           vertex count (default 100000)
  --mean <float>      mean chunk length of the generator (default 10)
  --dist <name>       exponential | geometric | uniform | constant
  --local-prob <p>    chunk attaches to its left neighbor with probability p
  --seed <int>        generator and contraction seed (default 42)
  --threads <int>     worker threads (default 1)
  --batch-size <int>  k: update batch size / query count (default 1000)
  --batches <int>     msf batches to stream (default 20)
  --weight-max <int>  edge weights drawn from [1, weight-max]
  --deterministic     deterministic contraction scheme instead of randomized
  --verify            check answers against oracles (small n) or a rebuild
  --report <path>     append the report record to a file
  --help              this text
";

fn parse_args() -> Result<Args, String> {
    let mut args = Args::default();
    let mut it = std::env::args().skip(1);
    while let Some(flag) = it.next() {
        let mut grab = || it.next().ok_or(format!("{flag} needs a value"));
        match flag.as_str() {
            "--op" => args.op = grab()?,
            "--n" => args.n = grab()?.parse().map_err(|e| format!("--n: {e}"))?,
            "--mean" => args.mean = grab()?.parse().map_err(|e| format!("--mean: {e}"))?,
            "--dist" => args.dist = grab()?,
            "--local-prob" => {
                args.local_prob = grab()?.parse().map_err(|e| format!("--local-prob: {e}"))?
            }
            "--seed" => args.seed = grab()?.parse().map_err(|e| format!("--seed: {e}"))?,
            "--threads" => args.threads = grab()?.parse().map_err(|e| format!("--threads: {e}"))?,
            "--batch-size" => {
                args.batch_size = grab()?.parse().map_err(|e| format!("--batch-size: {e}"))?
            }
            "--batches" => args.batches = grab()?.parse().map_err(|e| format!("--batches: {e}"))?,
            "--weight-max" => {
                args.weight_max = grab()?.parse().map_err(|e| format!("--weight-max: {e}"))?
            }
            "--deterministic" => args.deterministic = true,
            "--verify" => args.verify = true,
            "--report" => args.report = Some(grab()?),
            "--help" | "-h" => {
                print!("{USAGE}");
                std::process::exit(0);
            }
            other => return Err(format!("unknown flag {other}; try --help")),
        }
    }
    Ok(args)
}

struct Report {
    fields: Vec<(String, String)>,
}

impl Report {
    fn new(args: &Args, k: usize) -> Self {
        let mut r = Report { fields: Vec::new() };
        r.push("op", &args.op);
        r.push("n", args.n);
        r.push("k", k);
        r.push("threads", args.threads);
        r.push("seed", args.seed);
        r.push(
            "scheme",
            if args.deterministic { "deterministic" } else { "randomized" },
        );
        r
    }

    fn push(&mut self, key: &str, value: impl ToString) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    fn line(&self) -> String {
        let mut out = String::new();
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{k}={v}");
        }
        out
    }
}

fn config(args: &Args) -> RcConfig {
    RcConfig {
        scheme: if args.deterministic { Scheme::Deterministic } else { Scheme::Randomized },
        seed: args.seed,
        ..Default::default()
    }
}

/// Oracle checks are quadratic-ish; above this the verifier rebuilds a
/// fresh structure and compares answers instead.
const ORACLE_LIMIT: usize = 20_000;

fn main() -> ExitCode {
    let args = match parse_args() {
        Ok(a) => a,
        Err(e) => {
            eprintln!("rc-bench: {e}");
            return ExitCode::from(2);
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .expect("thread pool");
    let outcome = pool.install(|| run(&args));
    match outcome {
        Ok(report) => {
            let line = report.line();
            println!("{line}");
            if let Some(path) = &args.report {
                let mut text = std::fs::read_to_string(path).unwrap_or_default();
                text.push_str(&line);
                text.push('\n');
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("rc-bench: writing {path}: {e}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("rc-bench: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(args: &Args) -> Result<Report, String> {
    let gen_cfg = ForestGenConfig {
        n: args.n,
        mean: args.mean,
        dist: args.dist.parse().map_err(|e: rc_forest::Error| e.to_string())?,
        local_prob: args.local_prob,
        seed: args.seed,
        max_weight: args.weight_max,
    };
    match args.op.as_str() {
        "build" => bench_build(args, &gen_cfg),
        "link" => bench_link(args, &gen_cfg),
        "cut" => bench_cut(args, &gen_cfg),
        "connected" | "path-sum" | "path-min" | "lca" | "nearest" => bench_query(args, &gen_cfg),
        "subtree" | "subtree-batch" => bench_subtree(args, &gen_cfg),
        "msf" => bench_msf(args, &gen_cfg),
        other => Err(format!("unknown op {other}; try --help")),
    }
}

type Built = (TernaryForest<i64>, Vec<(usize, usize, i64)>, Vec<(usize, usize)>);

fn build_forest(args: &Args, gen_cfg: &ForestGenConfig) -> Result<Built, String> {
    let stream = generate_forest(gen_cfg).map_err(|e| e.to_string())?;
    let mut tf = TernaryForest::new(args.n, config(args));
    tf.batch_link(&stream.adds).map_err(|e| e.to_string())?;
    Ok((tf, stream.adds, stream.delete_candidates))
}

fn bench_build(args: &Args, gen_cfg: &ForestGenConfig) -> Result<Report, String> {
    let stream = generate_forest(gen_cfg).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let mut tf = TernaryForest::new(args.n, config(args));
    tf.batch_link(&stream.adds).map_err(|e| e.to_string())?;
    let wall = start.elapsed();
    let mut report = Report::new(args, stream.adds.len());
    report.push("wall_ms", format!("{:.3}", wall.as_secs_f64() * 1e3));
    report.push("rounds", tf.rc().rounds());
    report.push("touched", tf.touched_nodes_last_batch());
    let counts = tf.rc().round_live_counts();
    report.push("live0", counts.first().copied().unwrap_or(0));
    if args.verify {
        let bound = 4.0 * (args.n.max(2) as f64).log2();
        if counts.len() as f64 > bound {
            return Err(format!("rounds {} exceed 4 log2 n = {bound:.1}", counts.len()));
        }
        if args.n <= ORACLE_LIMIT {
            tf.rc().audit_structure();
        }
        report.push("verified", "ok");
    }
    Ok(report)
}

fn bench_link(args: &Args, gen_cfg: &ForestGenConfig) -> Result<Report, String> {
    let stream = generate_forest(gen_cfg).map_err(|e| e.to_string())?;
    let k = args.batch_size.min(stream.adds.len());
    let (base, batch) = stream.adds.split_at(stream.adds.len() - k);
    let mut tf = TernaryForest::new(args.n, config(args));
    tf.batch_link(base).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let stats = tf.batch_link(batch).map_err(|e| e.to_string())?;
    let wall = start.elapsed();
    let mut report = Report::new(args, k);
    report.push("wall_ms", format!("{:.3}", wall.as_secs_f64() * 1e3));
    report.push("touched", stats.touched_nodes);
    report.push("levels", stats.levels_replayed);
    if args.verify {
        verify_against_rebuild_or_oracle(args, &tf, &stream.adds, &mut report)?;
    }
    Ok(report)
}

fn bench_cut(args: &Args, gen_cfg: &ForestGenConfig) -> Result<Report, String> {
    let (mut tf, adds, candidates) = build_forest(args, gen_cfg)?;
    let k = args.batch_size.min(candidates.len());
    let batch: Vec<(usize, usize)> = candidates[..k].to_vec();
    let start = Instant::now();
    let stats = tf.batch_cut(&batch).map_err(|e| e.to_string())?;
    let wall = start.elapsed();
    let mut report = Report::new(args, k);
    report.push("wall_ms", format!("{:.3}", wall.as_secs_f64() * 1e3));
    report.push("touched", stats.touched_nodes);
    report.push("levels", stats.levels_replayed);
    if args.verify {
        let cut_set: std::collections::HashSet<(usize, usize)> = batch
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        let live: Vec<(usize, usize, i64)> = adds
            .iter()
            .filter(|&&(u, v, _)| !cut_set.contains(&(u.min(v), u.max(v))))
            .copied()
            .collect();
        verify_against_rebuild_or_oracle(args, &tf, &live, &mut report)?;
    }
    Ok(report)
}

fn bench_query(args: &Args, gen_cfg: &ForestGenConfig) -> Result<Report, String> {
    let (mut tf, adds, _) = build_forest(args, gen_cfg)?;
    let forest = Forest::new(args.n, adds.iter().copied()).map_err(|e| e.to_string())?;
    let kind: QueryKind = args.op.parse().map_err(|e: rc_forest::Error| e.to_string())?;
    let queries =
        generate_queries(kind, args.batch_size, &forest, args.seed).map_err(|e| e.to_string())?;
    let mut report = Report::new(args, args.batch_size);
    let oracle_ok = args.n <= ORACLE_LIMIT;

    match &queries {
        QueryBatch::Connected(pairs) => {
            let start = Instant::now();
            let got = tf.batch_connected(pairs);
            report.push("wall_ms", format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
            if args.verify {
                if oracle_ok {
                    for (i, &(u, v)) in pairs.iter().enumerate() {
                        let want = oracle_connected(&forest, u, v).map_err(|e| e.to_string())?;
                        if got[i] != want {
                            return Err(format!("connected({u},{v}) = {} want {want}", got[i]));
                        }
                    }
                } else {
                    let fresh =
                        TernaryForest::build(&forest, config(args)).map_err(|e| e.to_string())?;
                    if fresh.batch_connected(pairs) != got {
                        return Err("connectivity disagrees with a fresh rebuild".into());
                    }
                }
                report.push("verified", "ok");
            }
        }
        QueryBatch::PathSum(pairs) => {
            let start = Instant::now();
            let got = tf.batch_path_sum(pairs).map_err(|e| e.to_string())?;
            report.push("wall_ms", format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
            if args.verify {
                if oracle_ok {
                    for (i, &(u, v)) in pairs.iter().enumerate() {
                        let want = oracle_path_sum(&forest, u, v).map_err(|e| e.to_string())?;
                        if got[i] != want {
                            return Err(format!("path_sum({u},{v}) = {:?} want {want:?}", got[i]));
                        }
                    }
                } else {
                    let fresh =
                        TernaryForest::build(&forest, config(args)).map_err(|e| e.to_string())?;
                    if fresh.batch_path_sum(pairs).map_err(|e| e.to_string())? != got {
                        return Err("path sums disagree with a fresh rebuild".into());
                    }
                }
                report.push("verified", "ok");
            }
        }
        QueryBatch::PathMin(pairs) => {
            let start = Instant::now();
            let got = tf.batch_path_min(pairs).map_err(|e| e.to_string())?;
            report.push("wall_ms", format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
            if args.verify && oracle_ok {
                for (i, &(u, v)) in pairs.iter().enumerate() {
                    let want = oracle_path_min(&forest, u, v).map_err(|e| e.to_string())?;
                    let got_e = got[i].map(|x| WeightedEdge::new(x.u, x.v, x.weight));
                    if got_e != want {
                        return Err(format!("path_min({u},{v}) = {got_e:?} want {want:?}"));
                    }
                }
                report.push("verified", "ok");
            }
        }
        QueryBatch::Lca(triples) => {
            let start = Instant::now();
            let got = tf.batch_lca(triples);
            report.push("wall_ms", format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
            if args.verify && oracle_ok {
                for (i, &(u, v, r)) in triples.iter().enumerate() {
                    let want = oracle_lca(&forest, u, v, r).map_err(|e| e.to_string())?;
                    if got[i] != want {
                        return Err(format!("lca({u},{v},{r}) = {:?} want {want:?}", got[i]));
                    }
                }
                report.push("verified", "ok");
            }
        }
        QueryBatch::NearestMarked { marks, queries } => {
            tf.batch_mark(marks).map_err(|e| e.to_string())?;
            let start = Instant::now();
            let got = tf.batch_nearest_marked(queries).map_err(|e| e.to_string())?;
            report.push("wall_ms", format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
            if args.verify && oracle_ok {
                for (i, &v) in queries.iter().enumerate() {
                    let want =
                        oracle_nearest_marked(&forest, marks, v).map_err(|e| e.to_string())?;
                    if got[i] != want {
                        return Err(format!("nearest({v}) = {:?} want {want:?}", got[i]));
                    }
                }
                report.push("verified", "ok");
            }
        }
        QueryBatch::Subtree(_) => unreachable!("handled by bench_subtree"),
    }
    Ok(report)
}

fn bench_subtree(args: &Args, gen_cfg: &ForestGenConfig) -> Result<Report, String> {
    let (tf, adds, _) = build_forest(args, gen_cfg)?;
    let forest = Forest::new(args.n, adds.iter().copied()).map_err(|e| e.to_string())?;
    let QueryBatch::Subtree(pairs) =
        generate_queries(QueryKind::Subtree, args.batch_size, &forest, args.seed)
            .map_err(|e| e.to_string())?
    else {
        unreachable!()
    };
    let mut report = Report::new(args, pairs.len());

    let answers: Vec<Option<i64>> = if args.op == "subtree-batch" {
        let start = Instant::now();
        let shadow_pairs: Vec<(usize, usize)> = pairs
            .iter()
            .map(|&(u, p)| {
                Ok((
                    tf.entry_dummy(u, p).map_err(|e| e.to_string())?,
                    tf.entry_dummy(p, u).map_err(|e| e.to_string())?,
                ))
            })
            .collect::<Result<_, String>>()?;
        let (got, stats) = tf
            .rc()
            .batch_subtree_weight_with_stats(&shadow_pairs, AggKind::Sum)
            .map_err(|e| e.to_string())?;
        report.push("wall_ms", format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
        report.push("touched", stats.marked_clusters);
        got.into_iter()
            .map(|r| r.map_err(|e| e.to_string()))
            .collect::<Result<_, String>>()?
    } else {
        let start = Instant::now();
        let mut touched = 0usize;
        let mut out = Vec::with_capacity(pairs.len());
        for &(u, p) in &pairs {
            let (du, dp) = (
                tf.entry_dummy(u, p).map_err(|e| e.to_string())?,
                tf.entry_dummy(p, u).map_err(|e| e.to_string())?,
            );
            let (a, stats) = tf
                .rc()
                .subtree_query_with_stats(du, dp, AggKind::Sum)
                .map_err(|e| e.to_string())?;
            touched += stats.marked_clusters;
            out.push(a);
        }
        report.push("wall_ms", format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
        report.push("touched", touched);
        out
    };

    if args.verify && args.n <= ORACLE_LIMIT {
        for (i, &(u, p)) in pairs.iter().enumerate() {
            let want = oracle_subtree_aggregate(&forest, u, p, SubtreeContent::Edges, AggKind::Sum)
                .map_err(|e| e.to_string())?;
            if answers[i] != want {
                return Err(format!("subtree({u},{p}) = {:?} want {want:?}", answers[i]));
            }
        }
        report.push("verified", "ok");
    }
    Ok(report)
}

fn bench_msf(args: &Args, gen_cfg: &ForestGenConfig) -> Result<Report, String> {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(gen_cfg.seed ^ 0x6d73_66);
    let mut msf = IncrementalMsf::<i64>::new(args.n, config(args)).map_err(|e| e.to_string())?;
    let mut all: Vec<WeightedEdge<i64>> = Vec::new();
    let mut report = Report::new(args, args.batch_size);
    let start = Instant::now();
    let mut touched = 0usize;
    let mut accepted = 0usize;
    let mut evicted = 0usize;
    for _ in 0..args.batches {
        let batch: Vec<(usize, usize, i64)> = (0..args.batch_size)
            .map(|_| {
                let u = rng.gen_range(0..args.n);
                let v = (u + rng.gen_range(1..args.n)) % args.n;
                (u, v, rng.gen_range(1..=gen_cfg.max_weight))
            })
            .collect();
        for &(u, v, w) in &batch {
            all.push(WeightedEdge::new(u, v, w));
        }
        let r = msf.insert_batch(&batch).map_err(|e| e.to_string())?;
        touched += r.touched_nodes;
        accepted += r.added.len();
        evicted += r.evicted.len();
        if args.verify {
            let want = oracle_msf(&all, args.n);
            let got = msf.edges();
            if got != want {
                let diff = want.iter().find(|e| !got.contains(e));
                return Err(format!("msf diverged from the Kruskal oracle at {diff:?}"));
            }
        }
    }
    report.push("batches", args.batches);
    report.push("wall_ms", format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
    report.push("touched", touched);
    report.push("accepted", accepted);
    report.push("evicted", evicted);
    if args.verify {
        report.push("verified", "ok");
    }
    Ok(report)
}

/// Large-scale verification: rebuild from the live edge list and compare
/// a sample of answers; small scale goes straight to the oracles.
fn verify_against_rebuild_or_oracle(
    args: &Args,
    tf: &TernaryForest<i64>,
    live: &[(usize, usize, i64)],
    report: &mut Report,
) -> Result<(), String> {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ 0x7e57);
    let forest = Forest::new(args.n, live.iter().copied()).map_err(|e| e.to_string())?;
    if args.n <= ORACLE_LIMIT {
        for _ in 0..200.min(args.n) {
            let (u, v) = (rng.gen_range(0..args.n), rng.gen_range(0..args.n));
            let want = oracle_connected(&forest, u, v).map_err(|e| e.to_string())?;
            if tf.batch_connected(&[(u, v)])[0] != want {
                return Err(format!("connected({u},{v}) disagrees with the oracle"));
            }
            let want = oracle_path_sum(&forest, u, v).map_err(|e| e.to_string())?;
            if tf.batch_path_sum(&[(u, v)]).map_err(|e| e.to_string())?[0] != want {
                return Err(format!("path_sum({u},{v}) disagrees with the oracle"));
            }
        }
    } else {
        let fresh = TernaryForest::build(&forest, config(args)).map_err(|e| e.to_string())?;
        let pairs: Vec<(usize, usize)> = (0..200)
            .map(|_| (rng.gen_range(0..args.n), rng.gen_range(0..args.n)))
            .collect();
        if tf.batch_connected(&pairs) != fresh.batch_connected(&pairs) {
            return Err("connectivity disagrees with a fresh rebuild".into());
        }
        if tf.batch_path_sum(&pairs).map_err(|e| e.to_string())?
            != fresh.batch_path_sum(&pairs).map_err(|e| e.to_string())?
        {
            return Err("path sums disagree with a fresh rebuild".into());
        }
    }
    report.push("verified", "ok");
    Ok(())
}
