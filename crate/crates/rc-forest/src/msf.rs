//! Incremental minimum spanning forests over batches of new edges.
//!
//! Each batch marks the endpoints of the incoming edges, builds the
//! compressed path tree of the current spanning forest with respect to
//! those endpoints in heaviest-edge mode, and runs a small Kruskal over
//! the compressed edges plus the new edges. Compressed edges that lose
//! evict their heaviest original edge from the maintained forest; winning
//! new edges link in. All ties break on `(weight, u, v)`, which makes the
//! maintained forest unique and equal to a from-scratch Kruskal over
//! everything ever inserted.

use std::collections::HashMap;

use crate::algebra::GroupWeight;
use crate::error::{Error, Result};
use crate::forest::{Dsu, WeightedEdge};
use crate::rc::{ExtremeMode, RcConfig};
use crate::ternary::TernaryForest;

/// What one insertion batch did.
#[derive(Clone, Debug)]
pub struct MsfBatchReport<W> {
    /// New edges that joined the maintained forest.
    pub added: Vec<WeightedEdge<W>>,
    /// Previous forest edges displaced by lighter new arrivals.
    pub evicted: Vec<WeightedEdge<W>>,
    /// Endpoint pairs that repeated within the batch or were already
    /// forest edges. Such inputs still compete: the lightest parallel
    /// edge per pair wins and the rest lose to the two-edge cycle.
    pub duplicates: Vec<(usize, usize)>,
    pub compressed_vertices: usize,
    pub compressed_edges: usize,
    pub touched_nodes: usize,
}

impl<W> Default for MsfBatchReport<W> {
    fn default() -> Self {
        MsfBatchReport {
            added: Vec::new(),
            evicted: Vec::new(),
            duplicates: Vec::new(),
            compressed_vertices: 0,
            compressed_edges: 0,
            touched_nodes: 0,
        }
    }
}

/// Incremental MSF state: the maintained forest lives in a
/// [`TernaryForest`], so arbitrary degrees are fine.
pub struct IncrementalMsf<W: GroupWeight> {
    forest: TernaryForest<W>,
    n: usize,
}

impl<W: GroupWeight> IncrementalMsf<W> {
    /// State over vertices `0..n`. The configuration must keep the
    /// path-extrema aggregate enabled.
    pub fn new(n: usize, config: RcConfig) -> Result<Self> {
        if !config.store.path_extrema {
            return Err(Error::AggregateDisabled("path-extrema"));
        }
        Ok(IncrementalMsf { forest: TernaryForest::new(n, config), n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The maintained forest, for queries between batches.
    pub fn forest(&self) -> &TernaryForest<W> {
        &self.forest
    }

    /// Current forest edges, canonical and sorted.
    pub fn edges(&self) -> Vec<WeightedEdge<W>> {
        let mut out: Vec<WeightedEdge<W>> = self
            .forest
            .live_edges()
            .into_iter()
            .map(|(u, v, w)| WeightedEdge::new(u, v, w))
            .collect();
        out.sort();
        out
    }

    /// Inserts a batch of weighted edges and re-establishes minimality.
    pub fn insert_batch(&mut self, edges: &[(usize, usize, W)]) -> Result<MsfBatchReport<W>> {
        let mut report = MsfBatchReport::default();
        let mut fresh: Vec<WeightedEdge<W>> = Vec::with_capacity(edges.len());
        let mut seen: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
        for &(u, v, w) in edges {
            if u >= self.n || v >= self.n {
                return Err(Error::VertexOutOfRange(u.max(v), self.n));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if self.forest.has_edge(u, v) || !seen.insert(key) {
                report.duplicates.push(key);
            }
            fresh.push(WeightedEdge::new(u, v, w));
        }
        if fresh.is_empty() {
            return Ok(report);
        }

        let endpoints: Vec<usize> = {
            let mut e: Vec<usize> = fresh.iter().flat_map(|e| [e.u, e.v]).collect();
            e.sort_unstable();
            e.dedup();
            e
        };
        let tree = self
            .forest
            .compressed_path_tree(&endpoints, ExtremeMode::Max)?;
        report.compressed_vertices = tree.vertices.len();
        report.compressed_edges = tree.edges.len();

        // Kruskal over compressed connectivity plus the new edges, all
        // keyed by (weight, u, v); structural identity-weight segments
        // sort first and are never displaced.
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let id_of = |v: usize, ids: &mut HashMap<usize, usize>| -> usize {
            let next = ids.len();
            *ids.entry(v).or_insert(next)
        };
        struct Item<W> {
            key: Option<(W, usize, usize)>,
            a: usize,
            b: usize,
            new_edge: Option<usize>, // index into fresh
            evict: Option<WeightedEdge<W>>,
        }
        let mut items: Vec<Item<W>> = Vec::with_capacity(tree.edges.len() + fresh.len());
        for e in &tree.edges {
            let (a, b) = (id_of(e.a, &mut ids), id_of(e.b, &mut ids));
            items.push(Item {
                key: e.extremal.map(|x| (x.weight, x.u, x.v)),
                a,
                b,
                new_edge: None,
                evict: e.extremal.map(|x| WeightedEdge::new(x.u, x.v, x.weight)),
            });
        }
        for (i, e) in fresh.iter().enumerate() {
            let (a, b) = (id_of(e.u, &mut ids), id_of(e.v, &mut ids));
            items.push(Item {
                key: Some((e.weight, e.u, e.v)),
                a,
                b,
                new_edge: Some(i),
                evict: None,
            });
        }
        items.sort_by(|x, y| match (&x.key, &y.key) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (Some(_), None) => std::cmp::Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(b),
        });

        let mut dsu = Dsu::new(ids.len());
        for item in &items {
            if dsu.union(item.a, item.b) {
                if let Some(i) = item.new_edge {
                    report.added.push(fresh[i]);
                }
            } else if let Some(old) = item.evict {
                report.evicted.push(old);
            }
            // a rejected new edge is simply forgotten
        }

        let cuts: Vec<(usize, usize)> =
            report.evicted.iter().map(|e| (e.u, e.v)).collect();
        let links: Vec<(usize, usize, W)> =
            report.added.iter().map(|e| (e.u, e.v, e.weight)).collect();
        let stats = self.forest.batch_update(&cuts, &links)?;
        report.touched_nodes = stats.touched_nodes;
        report.added.sort();
        report.evicted.sort();
        Ok(report)
    }
}
