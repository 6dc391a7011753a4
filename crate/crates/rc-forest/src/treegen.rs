//! Streaming random-forest generation for benchmarks and tests.
//!
//! The generator lays out chunks of contiguous vertices as linked lists,
//! then chains each chunk either to the chunk immediately to its left
//! (with probability `local_prob`) or to a uniformly random earlier chunk.
//! Chunk lengths come from a configurable distribution, so one knob family
//! covers deep path-like forests, shallow star-like forests and everything
//! between. Edge labels are passed through a seeded bijective shuffle so
//! vertex ids carry no structure.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::algebra::GroupWeight;
use crate::error::{Error, Result};
use crate::forest::Forest;

/// Chunk-length distribution.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ChunkDist {
    Exponential,
    Geometric,
    Uniform,
    Constant,
}

impl std::str::FromStr for ChunkDist {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exponential" | "exp" => Ok(ChunkDist::Exponential),
            "geometric" | "geom" => Ok(ChunkDist::Geometric),
            "uniform" => Ok(ChunkDist::Uniform),
            "constant" | "const" => Ok(ChunkDist::Constant),
            other => Err(Error::Config(format!("unknown distribution {other:?}"))),
        }
    }
}

/// Generator parameters. `local_prob` is the probability that a chunk
/// attaches to its immediate predecessor; values near 1 produce deep
/// forests, values near 0 shallow ones.
#[derive(Clone, Debug)]
pub struct ForestGenConfig {
    pub n: usize,
    /// Expected chunk length; must be at least 1.
    pub mean: f64,
    pub dist: ChunkDist,
    pub local_prob: f64,
    pub seed: u64,
    /// Edge weights are uniform integers in `[1, max_weight]`.
    pub max_weight: i64,
}

impl Default for ForestGenConfig {
    fn default() -> Self {
        ForestGenConfig {
            n: 1000,
            mean: 10.0,
            dist: ChunkDist::Geometric,
            local_prob: 0.5,
            seed: 0,
            max_weight: 1_000_000,
        }
    }
}

/// A generated update stream: edges to insert and the per-chunk attachment
/// edges, which are safe delete targets (each splits off one whole chunk).
#[derive(Clone, Debug)]
pub struct GeneratedForest {
    pub n: usize,
    pub adds: Vec<(usize, usize, i64)>,
    pub delete_candidates: Vec<(usize, usize)>,
}

impl GeneratedForest {
    pub fn forest(&self) -> Forest<i64> {
        Forest::new(self.n, self.adds.iter().copied()).expect("generated stream is a forest")
    }
}

fn chunk_len(cfg: &ForestGenConfig, rng: &mut ChaCha8Rng) -> usize {
    let len = match cfg.dist {
        ChunkDist::Constant => cfg.mean.round(),
        ChunkDist::Uniform => {
            let hi = (2.0 * cfg.mean - 1.0).max(1.0) as u64;
            rng.gen_range(1..=hi) as f64
        }
        ChunkDist::Exponential => {
            let u: f64 = rng.gen_range(f64::EPSILON..1.0);
            (-cfg.mean * u.ln()).round()
        }
        ChunkDist::Geometric => {
            let p = (1.0 / cfg.mean).clamp(f64::EPSILON, 1.0);
            let u: f64 = rng.gen_range(f64::EPSILON..1.0);
            (u.ln() / (1.0 - p).ln()).ceil()
        }
    };
    (len.max(1.0) as usize).max(1)
}

/// Generates the edge stream for one forest.
pub fn generate_forest(cfg: &ForestGenConfig) -> Result<GeneratedForest> {
    if cfg.n == 0 {
        return Ok(GeneratedForest { n: 0, adds: Vec::new(), delete_candidates: Vec::new() });
    }
    if cfg.mean < 1.0 {
        return Err(Error::Config("mean chunk length must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&cfg.local_prob) {
        return Err(Error::Config("local_prob must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // carve [0, n) into chunks
    let mut chunks: Vec<(usize, usize)> = Vec::new(); // [start, end)
    let mut at = 0;
    while at < cfg.n {
        let len = chunk_len(cfg, &mut rng).min(cfg.n - at);
        chunks.push((at, at + len));
        at += len;
    }

    let mut adds: Vec<(usize, usize, i64)> = Vec::new();
    let mut delete_candidates: Vec<(usize, usize)> = Vec::new();
    for &(s, e) in &chunks {
        for v in s..e - 1 {
            adds.push((v, v + 1, rng.gen_range(1..=cfg.max_weight)));
        }
    }
    for i in 1..chunks.len() {
        let j = if rng.gen_bool(cfg.local_prob) {
            i - 1
        } else {
            rng.gen_range(0..i)
        };
        let (s, e) = chunks[j];
        let target = rng.gen_range(s..e);
        let head = chunks[i].0;
        let w = rng.gen_range(1..=cfg.max_weight);
        adds.push((head, target, w));
        delete_candidates.push((head, target));
    }

    // bijective relabeling
    let mut perm: Vec<usize> = (0..cfg.n).collect();
    perm.shuffle(&mut rng);
    for (u, v, _) in adds.iter_mut() {
        *u = perm[*u];
        *v = perm[*v];
    }
    for (u, v) in delete_candidates.iter_mut() {
        *u = perm[*u];
        *v = perm[*v];
    }
    Ok(GeneratedForest { n: cfg.n, adds, delete_candidates })
}

/// A random forest with maximum degree 3 (no ternarization needed): each
/// vertex attaches to a uniformly random earlier vertex that still has
/// spare degree, except every `gap`-th vertex, which starts a fresh
/// component. `gap == 0` keeps everything in one tree.
pub fn bounded_degree_forest(n: usize, gap: usize, seed: u64) -> Vec<(usize, usize, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut avail: Vec<usize> = Vec::new(); // vertices with degree < 3, multiplicity = spare
    for v in 0..n {
        if v == 0 || (gap != 0 && v % gap == 0) || avail.is_empty() {
            avail.extend([v, v, v]);
            continue;
        }
        let i = rng.gen_range(0..avail.len());
        let p = avail.swap_remove(i);
        edges.push((p, v, rng.gen_range(1..=1_000_000i64)));
        avail.extend([v, v]); // v used one of its three slots
    }
    edges
}

/// One generated query batch.
#[derive(Clone, Debug)]
pub enum QueryBatch {
    Connected(Vec<(usize, usize)>),
    Subtree(Vec<(usize, usize)>),
    PathSum(Vec<(usize, usize)>),
    PathMin(Vec<(usize, usize)>),
    Lca(Vec<(usize, usize, usize)>),
    NearestMarked { marks: Vec<usize>, queries: Vec<usize> },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum QueryKind {
    Connected,
    Subtree,
    PathSum,
    PathMin,
    Lca,
    NearestMarked,
}

impl std::str::FromStr for QueryKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "connected" => Ok(QueryKind::Connected),
            "subtree" | "subtree-batch" | "subtree-single" => Ok(QueryKind::Subtree),
            "path-sum" => Ok(QueryKind::PathSum),
            "path-min" => Ok(QueryKind::PathMin),
            "lca" => Ok(QueryKind::Lca),
            "nearest" => Ok(QueryKind::NearestMarked),
            other => Err(Error::Config(format!("unknown query kind {other:?}"))),
        }
    }
}

/// Random queries over a forest: pairs for connectivity/path queries,
/// (vertex, random neighbor) pairs for subtree queries, triples for LCA,
/// and vertices plus a random mark set for nearest-marked.
pub fn generate_queries<W: GroupWeight>(
    kind: QueryKind,
    k: usize,
    forest: &Forest<W>,
    seed: u64,
) -> Result<QueryBatch> {
    let n = forest.len();
    if n == 0 && k > 0 {
        return Err(Error::Config("cannot sample queries from an empty forest".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51_7cc1b727220a95);
    let vert = |rng: &mut ChaCha8Rng| rng.gen_range(0..n);
    match kind {
        QueryKind::Connected => Ok(QueryBatch::Connected(
            (0..k).map(|_| (vert(&mut rng), vert(&mut rng))).collect(),
        )),
        QueryKind::PathSum => Ok(QueryBatch::PathSum(
            (0..k).map(|_| (vert(&mut rng), vert(&mut rng))).collect(),
        )),
        QueryKind::PathMin => Ok(QueryBatch::PathMin(
            (0..k).map(|_| (vert(&mut rng), vert(&mut rng))).collect(),
        )),
        QueryKind::Lca => Ok(QueryBatch::Lca(
            (0..k)
                .map(|_| (vert(&mut rng), vert(&mut rng), vert(&mut rng)))
                .collect(),
        )),
        QueryKind::Subtree => {
            if k > 0 && (0..n).all(|v| forest.degree(v) == 0) {
                return Err(Error::Config("subtree queries need at least one edge".into()));
            }
            let mut out = Vec::with_capacity(k);
            while out.len() < k {
                let u = vert(&mut rng);
                let nbrs = forest.neighbors(u);
                if nbrs.is_empty() {
                    continue; // resample
                }
                let (p, _) = nbrs[rng.gen_range(0..nbrs.len())];
                out.push((u, p));
            }
            Ok(QueryBatch::Subtree(out))
        }
        QueryKind::NearestMarked => {
            let m = k.clamp(1, n);
            let marks = rand::seq::index::sample(&mut rng, n, m).into_vec();
            let queries = (0..k).map(|_| vert(&mut rng)).collect();
            Ok(QueryBatch::NearestMarked { marks, queries })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_batch() {
        let f = generate_forest(&ForestGenConfig { n: 5, ..Default::default() }).unwrap();
        let q = generate_queries(QueryKind::Connected, 0, &f.forest(), 1).unwrap();
        match q {
            QueryBatch::Connected(v) => assert!(v.is_empty()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn single_chunk_is_a_path() {
        let cfg = ForestGenConfig {
            n: 40,
            mean: 40.0,
            dist: ChunkDist::Constant,
            ..Default::default()
        };
        let g = generate_forest(&cfg).unwrap();
        let f = g.forest();
        assert_eq!(g.adds.len(), 39);
        assert!((0..40).all(|v| f.degree(v) <= 2), "path after relabeling");
        assert!(g.delete_candidates.is_empty());
    }

    #[test]
    fn local_prob_one_keeps_single_component() {
        // with local_prob = 1 and unit chunks the (unshuffled) forest is
        // one long path: every chunk hangs off its immediate predecessor
        let cfg = ForestGenConfig {
            n: 50,
            mean: 1.0,
            dist: ChunkDist::Constant,
            local_prob: 1.0,
            seed: 3,
            ..Default::default()
        };
        let g = generate_forest(&cfg).unwrap();
        let f = g.forest();
        assert!((0..50).all(|v| f.degree(v) <= 2));
        assert_eq!(g.adds.len(), 49);
        let mut dsu = crate::forest::Dsu::new(50);
        for &(u, v, _) in &g.adds {
            dsu.union(u, v);
        }
        assert!((1..50).all(|v| dsu.same(0, v)));
    }

    #[test]
    fn streams_are_forests_and_reproducible() {
        for dist in [
            ChunkDist::Exponential,
            ChunkDist::Geometric,
            ChunkDist::Uniform,
            ChunkDist::Constant,
        ] {
            let cfg = ForestGenConfig {
                n: 10_000,
                mean: 10.0,
                dist,
                local_prob: 0.3,
                seed: 42,
                ..Default::default()
            };
            let a = generate_forest(&cfg).unwrap();
            let b = generate_forest(&cfg).unwrap();
            assert_eq!(a.adds, b.adds, "reproducibility under a fixed seed");
            assert_eq!(a.delete_candidates, b.delete_candidates);
            // Forest::new validates acyclicity; candidates must be live edges
            let f = a.forest();
            assert!(a.delete_candidates.iter().all(|&(u, v)| f.has_edge(u, v)));
        }
    }

    #[test]
    fn subtree_queries_pick_neighbors() {
        let g = generate_forest(&ForestGenConfig {
            n: 30,
            mean: 30.0,
            dist: ChunkDist::Constant,
            ..Default::default()
        })
        .unwrap();
        let f = g.forest();
        match generate_queries(QueryKind::Subtree, 50, &f, 9).unwrap() {
            QueryBatch::Subtree(items) => {
                assert_eq!(items.len(), 50);
                for (u, p) in items {
                    assert!(f.has_edge(u, p));
                }
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn bounded_degree_forest_respects_cap() {
        let edges = bounded_degree_forest(500, 71, 5);
        let f = Forest::new(500, edges.iter().copied()).unwrap();
        assert!(f.max_degree() <= 3);
        assert!(f.edges().len() >= 400);
    }
}
