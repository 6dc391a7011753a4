//! Rake-compress forests: batch-dynamic trees for forests of maximum
//! degree 3.
//!
//! Contraction proceeds in rounds. Each round picks an independent set of
//! *eligible* vertices (current degree at most 2) and contracts them:
//! degree 0 finalizes into a nullary root cluster, degree 1 rakes into its
//! neighbor as a unary cluster, degree 2 compresses its two incident edges
//! into one binary cluster. The per-round neighborhoods are recorded in a
//! per-vertex history, so a later batch of links and cuts only replays the
//! contraction around the nodes it actually disturbs.

use std::collections::HashMap;

use crate::algebra::GroupWeight;
use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::oracle::SubtreeContent;

pub(crate) mod audit;
mod compressed;
mod payload;
mod queries;
mod replay;
mod select;

#[cfg(test)]
mod tests;

pub use audit::{ClusterContents, DecompPart};
pub use compressed::{CompressedEdge, CompressedPathTree, ExtremeMode};
pub use queries::{PathExtreme, QueryStats};

pub(crate) use payload::{NearAgg, SubAgg};
pub(crate) use replay::LinkEdge;

pub(crate) const NONE32: u32 = u32::MAX;

/// How each round's independent set of contracting vertices is chosen.
#[derive(Clone, Debug)]
pub enum Scheme {
    /// Per-round hashed colors; strict local maxima contract. Reproducible
    /// from the seed.
    Randomized,
    /// Chain coloring against the maximum-colored eligible neighbor with
    /// two reserved colors for local extrema, then a color-by-color sweep
    /// extracting a maximal independent set. Bit-reproducible.
    Deterministic,
    /// Explicit per-round contraction sets. Test hook for reproducing
    /// specific schedules; rounds past the end of the list fall back to
    /// the deterministic scheme.
    #[doc(hidden)]
    Forced(std::sync::Arc<Vec<Vec<usize>>>),
}

/// Which augmented values the forest maintains. Disabled groups cost no
/// memory; queries that need a disabled group return
/// [`Error::AggregateDisabled`].
#[derive(Clone, Copy, Debug)]
pub struct StoreConfig {
    /// Cluster-path sums (group algebra): path-sum queries. Also required
    /// by `nearest`, which measures distances with the same sums.
    pub path_sum: bool,
    /// Lightest/heaviest edge per cluster path: path min/max queries,
    /// compressed path trees, incremental MSF.
    pub path_extrema: bool,
    /// Subtree totals (sum/min/max): subtree queries.
    pub subtree: bool,
    /// Nearest-marked-vertex triples.
    pub nearest: bool,
}

impl StoreConfig {
    pub fn all() -> Self {
        StoreConfig { path_sum: true, path_extrema: true, subtree: true, nearest: true }
    }

    /// Topology only: connectivity and structural updates.
    pub fn none() -> Self {
        StoreConfig { path_sum: false, path_extrema: false, subtree: false, nearest: false }
    }

    pub(crate) fn need_path_sum(&self) -> bool {
        self.path_sum || self.nearest
    }
}

/// Construction-time configuration of an [`RcForest`].
#[derive(Clone, Debug)]
pub struct RcConfig {
    pub scheme: Scheme,
    pub seed: u64,
    pub store: StoreConfig,
    /// What subtree totals range over (ignored unless `store.subtree`).
    pub subtree_content: SubtreeContent,
}

impl Default for RcConfig {
    fn default() -> Self {
        RcConfig {
            scheme: Scheme::Randomized,
            seed: 0,
            store: StoreConfig::all(),
            subtree_content: SubtreeContent::Edges,
        }
    }
}

impl RcConfig {
    pub fn deterministic() -> Self {
        RcConfig { scheme: Scheme::Deterministic, ..Self::default() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum ClusterKind {
    /// Unallocated slot, or a vertex that currently has no contraction.
    Vacant,
    BaseEdge,
    Unary,
    Binary,
    Nullary,
}

impl ClusterKind {
    pub(crate) fn is_edge_like(self) -> bool {
        matches!(self, ClusterKind::BaseEdge | ClusterKind::Binary)
    }
}

/// One RC-tree node. Slots `0..cap` hold the internal cluster created when
/// the vertex of the same index contracted; slots from `cap` up are
/// dynamically allocated base-edge clusters. Base *vertex* clusters are
/// not materialized: children arrays hold only edge and internal clusters.
#[derive(Clone, Debug)]
pub(crate) struct Cluster {
    pub kind: ClusterKind,
    /// Internal clusters: contraction round + 1. Base edges: 0. Strictly
    /// increases from child to parent.
    pub level: u32,
    pub parent: u32,
    pub children: [u32; 4],
    pub n_children: u8,
    pub boundary: [u32; 2],
    pub n_boundary: u8,
    /// For edge-like clusters: the original neighbor of `boundary[i]` on
    /// the cluster path, i.e. the first hop leaving that boundary inward.
    pub end_nbr: [u32; 2],
}

impl Cluster {
    pub(crate) fn vacant() -> Self {
        Cluster {
            kind: ClusterKind::Vacant,
            level: 0,
            parent: NONE32,
            children: [NONE32; 4],
            n_children: 0,
            boundary: [NONE32; 2],
            n_boundary: 0,
            end_nbr: [NONE32; 2],
        }
    }

    pub(crate) fn children(&self) -> &[u32] {
        &self.children[..self.n_children as usize]
    }

    pub(crate) fn boundary(&self) -> &[u32] {
        &self.boundary[..self.n_boundary as usize]
    }

    pub(crate) fn boundary_index(&self, v: u32) -> Option<usize> {
        self.boundary().iter().position(|&b| b == v)
    }
}

/// Weight and provenance of one base edge.
#[derive(Clone, Copy, Debug)]
pub(crate) struct BaseEdge<W> {
    pub u: u32,
    pub v: u32,
    pub weight: W,
    /// Originating real edge; `None` for ternarization chain edges, which
    /// carry the identity and are excluded from extrema.
    pub real: Option<(u32, u32)>,
}

/// Contracted-tree adjacency entry: which edge cluster currently covers
/// the connection and which live vertex sits at the far end.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct AdjEntry {
    pub edge: u32,
    pub other: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Outcome {
    Live,
    Rake,
    Compress,
    Finalize,
}

/// State of one vertex during one contraction round: adjacency at the
/// start of the round plus what the round did to the vertex.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct Record {
    pub adj: [AdjEntry; 3],
    pub deg: u8,
    pub outcome: Outcome,
}

impl Record {
    pub(crate) fn empty() -> Self {
        Record {
            adj: [AdjEntry { edge: NONE32, other: NONE32 }; 3],
            deg: 0,
            outcome: Outcome::Live,
        }
    }

    pub(crate) fn adj(&self) -> &[AdjEntry] {
        &self.adj[..self.deg as usize]
    }

    pub(crate) fn push_adj(&mut self, e: AdjEntry) {
        self.adj[self.deg as usize] = e;
        self.deg += 1;
        self.adj[..self.deg as usize].sort_unstable_by_key(|a| a.other);
    }

    pub(crate) fn remove_adj_edge(&mut self, edge: u32) -> bool {
        let Some(i) = self.adj().iter().position(|a| a.edge == edge) else {
            return false;
        };
        for j in i..self.deg as usize - 1 {
            self.adj[j] = self.adj[j + 1];
        }
        self.deg -= 1;
        self.adj[self.deg as usize] = AdjEntry { edge: NONE32, other: NONE32 };
        true
    }
}

/// Counters for one update batch.
#[derive(Clone, Copy, Debug, Default)]
pub struct UpdateStats {
    /// History nodes created, edited or deleted by the batch.
    pub touched_nodes: usize,
    /// Contraction levels the batch replayed.
    pub levels_replayed: usize,
}

impl UpdateStats {
    pub(crate) fn merge(self, other: UpdateStats) -> UpdateStats {
        UpdateStats {
            touched_nodes: self.touched_nodes + other.touched_nodes,
            levels_replayed: self.levels_replayed.max(other.levels_replayed),
        }
    }
}

/// A batch-dynamic rake-compress forest over vertices `0..capacity` with
/// maximum degree 3.
pub struct RcForest<W: GroupWeight> {
    pub(crate) cap: usize,
    pub(crate) config: RcConfig,
    pub(crate) clusters: Vec<Cluster>,
    pub(crate) base_info: Vec<BaseEdge<W>>,
    pub(crate) edge_free: Vec<u32>,
    pub(crate) hist: Vec<Vec<Record>>,
    pub(crate) pending: Vec<Vec<(u32, u32)>>,
    pub(crate) present: Vec<bool>,
    pub(crate) marks: Vec<bool>,
    pub(crate) vweights: Option<Vec<W>>,
    pub(crate) edge_index: HashMap<(u32, u32), u32>,
    pub(crate) negative_edges: usize,
    pub(crate) last_stats: UpdateStats,
    // augmented values, parallel to `clusters`; empty when disabled
    pub(crate) path_sum: Vec<W>,
    pub(crate) path_min: Vec<Option<(W, u32, u32)>>,
    pub(crate) path_max: Vec<Option<(W, u32, u32)>>,
    pub(crate) sub: Vec<SubAgg<W>>,
    pub(crate) near: Vec<NearAgg<W>>,
}

impl<W: GroupWeight> RcForest<W> {
    /// An empty forest with room for vertices `0..capacity`. Vertices
    /// materialize either through [`RcForest::insert_vertices`] or on
    /// first use by a link batch.
    pub fn new(capacity: usize, config: RcConfig) -> Self {
        let mut f = RcForest {
            cap: capacity,
            config,
            clusters: vec![Cluster::vacant(); capacity],
            base_info: Vec::new(),
            edge_free: Vec::new(),
            hist: vec![Vec::new(); capacity],
            pending: vec![Vec::new(); capacity],
            present: vec![false; capacity],
            marks: vec![false; capacity],
            vweights: None,
            edge_index: HashMap::new(),
            negative_edges: 0,
            last_stats: UpdateStats::default(),
            path_sum: Vec::new(),
            path_min: Vec::new(),
            path_max: Vec::new(),
            sub: Vec::new(),
            near: Vec::new(),
        };
        f.grow_aggregates(capacity);
        f
    }

    /// Builds the forest for a degree-at-most-3 input in one link batch.
    pub fn build(forest: &Forest<W>, config: RcConfig) -> Result<Self> {
        if forest.max_degree() > 3 {
            let v = (0..forest.len()).find(|&v| forest.degree(v) > 3).unwrap();
            return Err(Error::DegreeExceeded(v, 3));
        }
        let mut f = Self::new(forest.len(), config);
        if let Some(ws) = forest.vertex_weights() {
            f.vweights = Some(ws.to_vec());
        }
        f.insert_vertices(0..forest.len());
        let edges: Vec<(usize, usize, W)> =
            forest.edges().iter().map(|e| (e.u, e.v, e.weight)).collect();
        f.batch_link(&edges)?;
        Ok(f)
    }

    /// Makes the given vertices present as isolated singletons.
    pub fn insert_vertices(&mut self, vs: impl IntoIterator<Item = usize>) {
        for v in vs {
            assert!(v < self.cap, "vertex {v} out of range");
            if self.present[v] {
                continue;
            }
            self.present[v] = true;
            let mut rec = Record::empty();
            rec.outcome = Outcome::Finalize;
            self.hist[v] = vec![rec];
            let c = &mut self.clusters[v];
            c.kind = ClusterKind::Nullary;
            c.level = 1;
            c.parent = NONE32;
            c.n_children = 0;
            c.n_boundary = 0;
            let tmp = self.compute_payload(ClusterKind::Nullary, v as u32, &[], &[]);
            self.store_payload(v as u32, &tmp);
        }
    }

    pub fn capacity(&self) -> usize {
        self.cap
    }

    pub fn config(&self) -> &RcConfig {
        &self.config
    }

    pub fn is_present(&self, v: usize) -> bool {
        v < self.cap && self.present[v]
    }

    /// Weight of a live edge, if present.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<W> {
        let key = (u.min(v) as u32, u.max(v) as u32);
        let &e = self.edge_index.get(&key)?;
        Some(self.base_info[e as usize - self.cap].weight)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_weight(u, v).is_some()
    }

    pub fn live_edges(&self) -> impl Iterator<Item = (usize, usize, W)> + '_ {
        self.edge_index.values().map(|&e| {
            let b = &self.base_info[e as usize - self.cap];
            (b.u as usize, b.v as usize, b.weight)
        })
    }

    /// Sets per-vertex weights for subtree queries in
    /// [`SubtreeContent::EdgesAndVertices`] mode. Refreshes every cluster,
    /// so intended for use right after a build.
    pub fn set_vertex_weights(&mut self, weights: Vec<W>) -> Result<()> {
        if weights.len() != self.cap {
            return Err(Error::Config(format!(
                "expected {} vertex weights, got {}",
                self.cap,
                weights.len()
            )));
        }
        self.vweights = Some(weights);
        self.refresh_all_payloads();
        Ok(())
    }

    /// Representative of the component containing `v`: the vertex whose
    /// finalize created the component's root cluster. Isolated or absent
    /// vertices answer themselves.
    pub fn find_representative(&self, v: usize) -> usize {
        let mut c = v as u32;
        loop {
            let p = self.clusters[c as usize].parent;
            if p == NONE32 {
                return c as usize;
            }
            c = p;
        }
    }

    /// Counters from the most recent link/cut batch.
    pub fn touched_nodes_last_batch(&self) -> usize {
        self.last_stats.touched_nodes
    }

    pub fn last_update_stats(&self) -> UpdateStats {
        self.last_stats
    }

    /// Number of contraction rounds in the current history.
    pub fn rounds(&self) -> usize {
        self.hist.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Live-vertex count entering each round.
    pub fn round_live_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.rounds()];
        for h in &self.hist {
            for c in counts.iter_mut().take(h.len()) {
                *c += 1;
            }
        }
        counts
    }

    /// Text dump of the contraction history, one line per live vertex per
    /// level: `level t: v[state] -> neighbors`. Golden-test format.
    pub fn dump_history(&self) -> String {
        let mut out = String::new();
        for t in 0..self.rounds() {
            for v in 0..self.cap {
                let Some(rec) = self.hist[v].get(t) else { continue };
                let state = match rec.outcome {
                    Outcome::Live => "L",
                    Outcome::Rake => "U",
                    Outcome::Compress => "B",
                    Outcome::Finalize => "N",
                };
                out.push_str(&format!("level {t}: {v}[{state}] ->"));
                for a in rec.adj() {
                    out.push_str(&format!(" {}", a.other));
                }
                out.push('\n');
            }
        }
        out
    }

    pub(crate) fn vertex_weight(&self, v: u32) -> W {
        match (&self.vweights, self.config.subtree_content) {
            (Some(ws), SubtreeContent::EdgesAndVertices) => ws[v as usize],
            _ => W::zero(),
        }
    }

    pub(crate) fn grow_aggregates(&mut self, len: usize) {
        let total = self.clusters.len().max(len);
        if self.config.store.need_path_sum() {
            self.path_sum.resize(total, W::zero());
        }
        if self.config.store.path_extrema {
            self.path_min.resize(total, None);
            self.path_max.resize(total, None);
        }
        if self.config.store.subtree {
            self.sub.resize(total, SubAgg::empty());
        }
        if self.config.store.nearest {
            self.near.resize(total, NearAgg::empty());
        }
    }

    pub(crate) fn reserve_edges(&mut self, extra: usize) {
        let fresh = extra.saturating_sub(self.edge_free.len());
        self.clusters.reserve(fresh);
        self.base_info.reserve(fresh);
        self.edge_index.reserve(extra);
    }

    /// Allocates a base-edge cluster slot.
    pub(crate) fn alloc_edge(&mut self, u: u32, v: u32, weight: W, real: Option<(u32, u32)>) -> u32 {
        let id = if let Some(id) = self.edge_free.pop() {
            self.base_info[id as usize - self.cap] = BaseEdge { u, v, weight, real };
            id
        } else {
            let id = self.clusters.len() as u32;
            self.clusters.push(Cluster::vacant());
            self.base_info.push(BaseEdge { u, v, weight, real });
            self.grow_aggregates(self.clusters.len());
            id
        };
        let (bu, bv) = (u.min(v), u.max(v));
        let c = &mut self.clusters[id as usize];
        *c = Cluster::vacant();
        c.kind = ClusterKind::BaseEdge;
        c.level = 0;
        c.boundary = [bu, bv];
        c.n_boundary = 2;
        c.end_nbr = [bv, bu];
        if weight < W::zero() {
            self.negative_edges += 1;
        }
        let tmp = self.base_edge_payload(id);
        self.store_payload(id, &tmp);
        id
    }

    pub(crate) fn base(&self, id: u32) -> &BaseEdge<W> {
        &self.base_info[id as usize - self.cap]
    }

    /// Contraction round of a vertex with complete history.
    pub(crate) fn contraction_round(&self, v: u32) -> u32 {
        debug_assert!(!self.hist[v as usize].is_empty());
        self.hist[v as usize].len() as u32 - 1
    }
}
