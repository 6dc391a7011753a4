//! Arbitrary-degree batch-dynamic forests: a [`Ternarizer`] translating
//! real updates into shadow updates, feeding a degree-3 [`RcForest`].

use crate::algebra::{AggKind, GroupWeight};
use crate::error::{Error, Result};
use crate::forest::{Dsu, Forest};
use crate::rc::{
    CompressedPathTree, ExtremeMode, PathExtreme, QueryStats, RcConfig, RcForest, UpdateStats,
};

use super::Ternarizer;

/// A batch-dynamic forest over vertices `0..n` with no degree bound.
///
/// Real vertices keep their ids in the shadow forest (dummies live at ids
/// `n..3n-2`), so connectivity, path and LCA queries pass real ids
/// straight through; subtree queries enter through the carrier dummies of
/// the orienting edge, and LCA answers map back through chain ownership.
pub struct TernaryForest<W: GroupWeight> {
    tern: Ternarizer<W>,
    rc: RcForest<W>,
    n: usize,
    last_stats: UpdateStats,
}

impl<W: GroupWeight> TernaryForest<W> {
    pub fn new(n: usize, config: RcConfig) -> Self {
        let tern = Ternarizer::new(n);
        let mut rc = RcForest::new(tern.shadow_capacity(), config);
        rc.insert_vertices(0..n);
        TernaryForest { tern, rc, n, last_stats: UpdateStats::default() }
    }

    /// Builds from an arbitrary-degree forest in one link batch.
    pub fn build(forest: &Forest<W>, config: RcConfig) -> Result<Self> {
        let mut f = Self::new(forest.len(), config);
        if let Some(ws) = forest.vertex_weights() {
            f.set_vertex_weights(ws.to_vec())?;
        }
        let edges: Vec<(usize, usize, W)> =
            forest.edges().iter().map(|e| (e.u, e.v, e.weight)).collect();
        f.batch_link(&edges)?;
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The degree-3 structure underneath; vertex ids there are shadow ids.
    pub fn rc(&self) -> &RcForest<W> {
        &self.rc
    }

    pub fn ternarizer(&self) -> &Ternarizer<W> {
        &self.tern
    }

    pub fn owner(&self, shadow: usize) -> Result<usize> {
        self.tern.owner(shadow)
    }

    pub fn entry_dummy(&self, v: usize, toward: usize) -> Result<usize> {
        self.tern.entry_dummy(v, toward)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.tern.has_real_edge(u, v)
    }

    pub fn live_edges(&self) -> Vec<(usize, usize, W)> {
        let mut out: Vec<(usize, usize, W)> = self
            .tern
            .live_real_edges()
            .map(|(u, v)| {
                let du = self.tern.entry_dummy(u, v).expect("live edge");
                let dv = self.tern.entry_dummy(v, u).expect("live edge");
                (u, v, self.rc.edge_weight(du, dv).expect("carrier edge"))
            })
            .collect();
        out.sort_unstable_by_key(|&(u, v, _)| (u, v));
        out
    }

    pub fn set_vertex_weights(&mut self, weights: Vec<W>) -> Result<()> {
        if weights.len() != self.n {
            return Err(Error::Config(format!(
                "expected {} vertex weights, got {}",
                self.n,
                weights.len()
            )));
        }
        // dummies carry the identity
        let mut shadow = vec![W::zero(); self.rc.capacity()];
        shadow[..self.n].copy_from_slice(&weights);
        self.rc.set_vertex_weights(shadow)
    }

    pub fn last_update_stats(&self) -> UpdateStats {
        self.last_stats
    }

    pub fn touched_nodes_last_batch(&self) -> usize {
        self.last_stats.touched_nodes
    }

    // ------------------------------------------------------------- updates

    /// Inserts real edges of any degree. Three shadow links per edge.
    pub fn batch_link(&mut self, edges: &[(usize, usize, W)]) -> Result<UpdateStats> {
        // acyclicity at the real level, before any state changes
        let mut roots: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        let mut reps = Vec::with_capacity(edges.len() * 2);
        for &(u, v, _) in edges {
            if u >= self.n || v >= self.n {
                return Err(Error::VertexOutOfRange(u.max(v), self.n));
            }
            for x in [u, v] {
                let r = self.tern.owner(self.rc.find_representative(x))?;
                let m = roots.len();
                reps.push(*roots.entry(r).or_insert(m));
            }
        }
        let mut dsu = Dsu::new(roots.len());
        for (i, &(u, v, _)) in edges.iter().enumerate() {
            if !dsu.union(reps[2 * i], reps[2 * i + 1]) {
                return Err(Error::Cycle(u, v));
            }
        }
        let delta = self.tern.ternarize_adds(edges)?;
        let links: Vec<crate::rc::LinkEdge<W>> = delta
            .adds
            .iter()
            .map(|e| crate::rc::LinkEdge {
                u: e.u as u32,
                v: e.v as u32,
                weight: e.weight,
                real: e.real.map(|(a, b)| (a as u32, b as u32)),
            })
            .collect();
        let stats = self
            .rc
            .batch_link_tagged(&links)
            .expect("validated shadow links must apply");
        self.last_stats = stats;
        Ok(stats)
    }

    /// Deletes live real edges. At most five shadow cuts plus one splice
    /// link per contiguous run of freed dummies.
    pub fn batch_cut(&mut self, edges: &[(usize, usize)]) -> Result<UpdateStats> {
        let delta = self.tern.ternarize_deletes(edges)?;
        let cuts: Vec<(usize, usize)> = delta.deletes.clone();
        let stats = self
            .rc
            .batch_cut(&cuts)
            .expect("validated shadow cuts must apply");
        let splices: Vec<crate::rc::LinkEdge<W>> = delta
            .adds
            .iter()
            .map(|e| crate::rc::LinkEdge {
                u: e.u as u32,
                v: e.v as u32,
                weight: e.weight,
                real: None,
            })
            .collect();
        let stats = if splices.is_empty() {
            stats
        } else {
            stats.merge(
                self.rc
                    .batch_link_tagged(&splices)
                    .expect("chain splices must apply"),
            )
        };
        self.last_stats = stats;
        Ok(stats)
    }

    /// Cuts, then links.
    pub fn batch_update(
        &mut self,
        cuts: &[(usize, usize)],
        links: &[(usize, usize, W)],
    ) -> Result<UpdateStats> {
        let a = if cuts.is_empty() { UpdateStats::default() } else { self.batch_cut(cuts)? };
        let b = if links.is_empty() { UpdateStats::default() } else { self.batch_link(links)? };
        let merged = a.merge(b);
        self.last_stats = merged;
        Ok(merged)
    }

    // ------------------------------------------------------------- queries

    fn check_real(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v, self.n))
        }
    }

    pub fn find_representative(&self, v: usize) -> usize {
        self.tern
            .owner(self.rc.find_representative(v))
            .expect("component representative has an owner")
    }

    pub fn batch_connected(&self, pairs: &[(usize, usize)]) -> Vec<bool> {
        assert!(pairs.iter().all(|&(u, v)| u < self.n && v < self.n));
        self.rc.batch_connected(pairs)
    }

    /// Subtree aggregates on the real forest: the query `(u, p)` enters
    /// the shadow forest at the carrier dummies of the edge `(u, p)`.
    pub fn batch_subtree_weight(
        &self,
        pairs: &[(usize, usize)],
        agg: AggKind,
    ) -> Result<Vec<Result<Option<W>>>> {
        let translated: Vec<Result<(usize, usize)>> = pairs
            .iter()
            .map(|&(u, p)| {
                self.check_real(u)?;
                self.check_real(p)?;
                Ok((self.tern.entry_dummy(u, p)?, self.tern.entry_dummy(p, u)?))
            })
            .collect();
        let shadow_pairs: Vec<(usize, usize)> = translated
            .iter()
            .filter_map(|t| t.as_ref().ok().copied())
            .collect();
        let shadow_answers = self.rc.batch_subtree_weight(&shadow_pairs, agg)?;
        let mut it = shadow_answers.into_iter();
        Ok(translated
            .into_iter()
            .map(|t| match t {
                Ok(_) => it.next().expect("translated query answered"),
                Err(e) => Err(e),
            })
            .collect())
    }

    pub fn subtree_query(&self, u: usize, p: usize, agg: AggKind) -> Result<Option<W>> {
        self.check_real(u)?;
        self.check_real(p)?;
        let (du, dp) = (self.tern.entry_dummy(u, p)?, self.tern.entry_dummy(p, u)?);
        self.rc.subtree_query(du, dp, agg)
    }

    /// Batched LCAs on the real forest: shadow answers map back through
    /// chain ownership.
    pub fn batch_lca(&self, triples: &[(usize, usize, usize)]) -> Vec<Option<usize>> {
        assert!(triples.iter().all(|&(u, v, r)| u < self.n && v < self.n && r < self.n));
        self.rc
            .batch_lca(triples)
            .into_iter()
            .map(|a| a.map(|c| self.tern.owner(c).expect("lca owner")))
            .collect()
    }

    pub fn batch_fixed_lca(&self, root: usize, pairs: &[(usize, usize)]) -> Result<Vec<usize>> {
        self.check_real(root)?;
        Ok(self
            .rc
            .batch_fixed_lca(root, pairs)?
            .into_iter()
            .map(|c| self.tern.owner(c).expect("lca owner"))
            .collect())
    }

    pub fn batch_path_sum(&self, pairs: &[(usize, usize)]) -> Result<Vec<Option<W>>> {
        for &(u, v) in pairs {
            self.check_real(u)?;
            self.check_real(v)?;
        }
        self.rc.batch_path_sum(pairs)
    }

    pub fn path_query(&self, u: usize, v: usize) -> Result<Option<W>> {
        self.check_real(u)?;
        self.check_real(v)?;
        self.rc.path_query(u, v)
    }

    pub fn batch_path_min(&self, pairs: &[(usize, usize)]) -> Result<Vec<Option<PathExtreme<W>>>> {
        for &(u, v) in pairs {
            self.check_real(u)?;
            self.check_real(v)?;
        }
        self.rc.batch_path_min(pairs)
    }

    pub fn batch_path_max(&self, pairs: &[(usize, usize)]) -> Result<Vec<Option<PathExtreme<W>>>> {
        for &(u, v) in pairs {
            self.check_real(u)?;
            self.check_real(v)?;
        }
        self.rc.batch_path_max(pairs)
    }

    pub fn batch_mark(&mut self, vertices: &[usize]) -> Result<()> {
        for &v in vertices {
            self.check_real(v)?;
        }
        self.rc.batch_mark(vertices)
    }

    pub fn batch_unmark(&mut self, vertices: &[usize]) -> Result<()> {
        for &v in vertices {
            self.check_real(v)?;
        }
        self.rc.batch_unmark(vertices)
    }

    pub fn batch_nearest_marked(&self, vertices: &[usize]) -> Result<Vec<Option<(usize, W)>>> {
        for &v in vertices {
            self.check_real(v)?;
        }
        self.rc.batch_nearest_marked(vertices)
    }

    /// Compressed path tree over real marked vertices. Steiner vertices in
    /// the result may be shadow dummies; map them with
    /// [`TernaryForest::owner`] when a real-vertex view is needed.
    pub fn compressed_path_tree(
        &self,
        marked: &[usize],
        mode: ExtremeMode,
    ) -> Result<CompressedPathTree<W>> {
        for &v in marked {
            self.check_real(v)?;
        }
        self.rc.compressed_path_tree(marked, mode)
    }

    pub fn compressed_path_tree_with_stats(
        &self,
        marked: &[usize],
        mode: ExtremeMode,
    ) -> Result<(CompressedPathTree<W>, QueryStats)> {
        for &v in marked {
            self.check_real(v)?;
        }
        self.rc.compressed_path_tree_with_stats(marked, mode)
    }
}
