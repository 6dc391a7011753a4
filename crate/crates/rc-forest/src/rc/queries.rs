//! The six batch query families plus single-query forms.
//!
//! Every batch query starts the same way: the clusters of the query
//! vertices are collected together with all their ancestors (deduplicated,
//! so the total is the size of the union of the root paths), and the
//! per-batch computation runs over that marked subtree only. Bottom-up
//! information comes precomputed from the augmented values; top-down
//! sweeps (root directions, root-to-representative sums, subtrees growing
//! out of boundaries, global nearest marks) run parents-first over the
//! marked subtree in constant work per node.

use std::collections::HashMap;

use crate::algebra::{AggKind, GroupWeight};
use crate::error::{Error, Result};

use super::payload::{near_min, near_shift};
use super::{ClusterKind, RcForest, NONE32};

/// Work counter for one query batch.
#[derive(Clone, Copy, Debug, Default)]
pub struct QueryStats {
    /// Clusters in the union of the root paths of the batch's seeds.
    pub marked_clusters: usize,
}

/// An extremal edge answer, identified by its original endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathExtreme<W> {
    pub u: usize,
    pub v: usize,
    pub weight: W,
}

/// The marked subtree of one batch: seed clusters plus all ancestors, in
/// parents-first order (levels strictly decrease along parent links, so
/// sorting by descending level puts every parent before its children).
pub(crate) struct Sweep {
    pub ids: Vec<u32>,
    pub index: HashMap<u32, u32>,
    /// Dense parent index, `NONE32` at roots.
    pub parent: Vec<u32>,
}

impl Sweep {
    pub(crate) fn len(&self) -> usize {
        self.ids.len()
    }

    pub(crate) fn dense(&self, cluster: u32) -> u32 {
        self.index[&cluster]
    }

    /// Component root of every node, top-down.
    pub(crate) fn roots(&self) -> Vec<u32> {
        let mut out = vec![NONE32; self.len()];
        for i in 0..self.len() {
            out[i] = if self.parent[i] == NONE32 {
                i as u32
            } else {
                out[self.parent[i] as usize]
            };
        }
        out
    }
}

impl<W: GroupWeight> RcForest<W> {
    /// Collects the seed clusters and all ancestors.
    pub(crate) fn build_sweep(&self, seeds: impl IntoIterator<Item = u32>) -> Sweep {
        let mut set = std::collections::HashSet::new();
        for s in seeds {
            let mut c = s;
            while set.insert(c) {
                let p = self.clusters[c as usize].parent;
                if p == NONE32 {
                    break;
                }
                c = p;
            }
        }
        let mut ids: Vec<u32> = set.into_iter().collect();
        ids.sort_unstable_by_key(|&c| (std::cmp::Reverse(self.clusters[c as usize].level), c));
        let index: HashMap<u32, u32> =
            ids.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        let parent = ids
            .iter()
            .map(|&c| {
                let p = self.clusters[c as usize].parent;
                if p == NONE32 {
                    NONE32
                } else {
                    index[&p]
                }
            })
            .collect();
        Sweep { ids, index, parent }
    }

    fn seed_of(&self, v: usize) -> Option<u32> {
        (self.is_present(v) && self.clusters[v].kind != ClusterKind::Vacant).then_some(v as u32)
    }

    // ---------------------------------------------------------------- connectivity

    /// `result[i]` iff the pair shares a component root.
    pub fn batch_connected(&self, pairs: &[(usize, usize)]) -> Vec<bool> {
        self.batch_connected_with_stats(pairs).0
    }

    pub fn batch_connected_with_stats(
        &self,
        pairs: &[(usize, usize)],
    ) -> (Vec<bool>, QueryStats) {
        assert!(
            pairs.iter().all(|&(u, v)| u < self.cap && v < self.cap),
            "connectivity query out of range"
        );
        let seeds = pairs
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .filter_map(|v| self.seed_of(v));
        let sweep = self.build_sweep(seeds);
        let roots = sweep.roots();
        let root_of = |v: usize| -> usize {
            match self.seed_of(v) {
                Some(c) => sweep.ids[roots[sweep.dense(c) as usize] as usize] as usize,
                None => v,
            }
        };
        let answers = pairs.iter().map(|&(u, v)| root_of(u) == root_of(v)).collect();
        (answers, QueryStats { marked_clusters: sweep.len() })
    }

    // ---------------------------------------------------------------- top-down sweeps

    /// For each marked binary cluster, the index of its boundary vertex on
    /// the root side. Derived from the parent's kind: a nullary parent
    /// means the parent's representative *is* the root; a unary parent's
    /// single far end leads to the root; a binary parent delegates to its
    /// own root direction.
    pub(crate) fn rootward(&self, sweep: &Sweep) -> Vec<u8> {
        let mut out = vec![0u8; sweep.len()];
        for i in 0..sweep.len() {
            let c = &self.clusters[sweep.ids[i] as usize];
            if c.kind != ClusterKind::Binary {
                continue;
            }
            let p = sweep.parent[i];
            debug_assert_ne!(p, NONE32, "binary cluster cannot be a root");
            let pid = sweep.ids[p as usize];
            let pc = &self.clusters[pid as usize];
            let z_idx = c
                .boundary_index(pid)
                .expect("parent representative bounds its children") as u8;
            let other_idx = 1 - z_idx;
            out[i] = match pc.kind {
                ClusterKind::Nullary => z_idx,
                ClusterKind::Unary => other_idx,
                ClusterKind::Binary => {
                    let beta = pc.boundary[out[p as usize] as usize];
                    if beta == c.boundary[other_idx as usize] {
                        other_idx
                    } else {
                        z_idx
                    }
                }
                _ => unreachable!("parent is an internal cluster"),
            };
        }
        out
    }

    /// Total path weight from the component root to each marked cluster's
    /// representative. A unary cluster reaches the root through its only
    /// boundary; a binary cluster through its rootward boundary; either
    /// way the remaining distance inside the cluster is the cluster-path
    /// weight of the edge child on that side.
    pub(crate) fn root_sums(&self, sweep: &Sweep, rootward: &[u8]) -> Vec<W> {
        let mut out = vec![W::zero(); sweep.len()];
        for i in 0..sweep.len() {
            let id = sweep.ids[i];
            let c = &self.clusters[id as usize];
            let b = match c.kind {
                ClusterKind::Nullary => continue, // zero
                ClusterKind::Unary => c.boundary[0],
                ClusterKind::Binary => c.boundary[rootward[i] as usize],
                _ => unreachable!(),
            };
            let e = self.edge_child_at(c, b).expect("boundary edge child");
            let via = out[sweep.dense(b) as usize];
            out[i] = via.add(self.path_sum[e as usize]);
        }
        out
    }

    /// For each marked cluster and each of its boundary vertices `b`, the
    /// aggregate of the subtree growing out of `b` (everything on the far
    /// side of `b`, including `b` itself). Where the parent's
    /// representative is `b` the value combines the parent's other
    /// children with the parent's own outward values; otherwise the value
    /// is inherited unchanged.
    pub(crate) fn sweep_out<T: Copy>(
        &self,
        sweep: &Sweep,
        total: &impl Fn(&Self, u32) -> T,
        vitem: &impl Fn(&Self, u32) -> T,
        combine: &impl Fn(T, T) -> T,
        zero: T,
    ) -> Vec<[T; 2]> {
        let mut out = vec![[zero; 2]; sweep.len()];
        for i in 0..sweep.len() {
            let id = sweep.ids[i];
            let c = &self.clusters[id as usize];
            let p = sweep.parent[i];
            for j in 0..c.n_boundary as usize {
                let b = c.boundary[j];
                debug_assert_ne!(p, NONE32, "bounded cluster always has a parent");
                let pid = sweep.ids[p as usize];
                let pc = &self.clusters[pid as usize];
                out[i][j] = if pid == b {
                    let mut acc = vitem(self, b);
                    for &child in pc.children() {
                        if child != id {
                            acc = combine(acc, total(self, child));
                        }
                    }
                    for (j2, &b2) in pc.boundary().iter().enumerate() {
                        if c.boundary_index(b2).is_none() {
                            acc = combine(acc, out[p as usize][j2]);
                        }
                    }
                    acc
                } else {
                    let j2 = pc
                        .boundary_index(b)
                        .expect("boundary persists into the parent");
                    out[p as usize][j2]
                };
            }
        }
        out
    }

    // ---------------------------------------------------------------- subtree queries

    /// The child of `u`'s cluster that contains the original edge
    /// `(u, p)`: either an edge-like child whose first hop from `u` is
    /// `p`, or a unary child hanging on `u` whose own edge child makes
    /// that first hop (the cover of the edge got absorbed when the far
    /// vertex raked onto `u`).
    fn child_toward(&self, u: usize, p: usize) -> u32 {
        let first_hop_at_u = |edge_like: u32| -> Option<u32> {
            let cc = &self.clusters[edge_like as usize];
            cc.boundary_index(u as u32).map(|i| cc.end_nbr[i])
        };
        let c = &self.clusters[u];
        for &child in c.children() {
            let cc = &self.clusters[child as usize];
            let hop = match cc.kind {
                k if k.is_edge_like() => first_hop_at_u(child),
                ClusterKind::Unary => self
                    .edge_child_at(cc, u as u32)
                    .and_then(&first_hop_at_u),
                _ => None,
            };
            if hop == Some(p as u32) {
                return child;
            }
        }
        unreachable!("edge ({u},{p}) not covered by any child of {u}")
    }

    fn check_subtree_store(&self) -> Result<()> {
        if self.config.store.subtree {
            Ok(())
        } else {
            Err(Error::AggregateDisabled("subtree"))
        }
    }

    /// Batched subtree aggregates: `result[i]` folds the contents of the
    /// subtree rooted at `u_i` when its component hangs from `p_i`.
    /// `(u_i, p_i)` must be a live edge; offending items error
    /// individually. Sum of empty contents is zero, min/max are `None`.
    pub fn batch_subtree_weight(
        &self,
        pairs: &[(usize, usize)],
        agg: AggKind,
    ) -> Result<Vec<Result<Option<W>>>> {
        self.batch_subtree_weight_with_stats(pairs, agg).map(|(a, _)| a)
    }

    pub fn batch_subtree_weight_with_stats(
        &self,
        pairs: &[(usize, usize)],
        agg: AggKind,
    ) -> Result<(Vec<Result<Option<W>>>, QueryStats)> {
        self.check_subtree_store()?;
        let valid = |&(u, p): &(usize, usize)| -> bool {
            u < self.cap && p < self.cap && self.has_edge(u, p)
        };
        let seeds = pairs
            .iter()
            .filter(|q| valid(q))
            .filter_map(|&(u, _)| self.seed_of(u));
        let sweep = self.build_sweep(seeds);
        let stats = QueryStats { marked_clusters: sweep.len() };

        // one outward sweep per aggregate kind; sums fold over W, extrema
        // over Option<W>
        let answers: Vec<Result<Option<W>>> = match agg {
            AggKind::Sum => {
                let total = |f: &Self, c: u32| f.sub[c as usize].sum;
                let vitem = |f: &Self, v: u32| f.vertex_weight(v);
                let combine = |a: W, b: W| a.add(b);
                let out = self.sweep_out(&sweep, &total, &vitem, &combine, W::zero());
                pairs
                    .iter()
                    .map(|q| {
                        if !valid(q) {
                            return Err(Error::NotAnEdge(q.0, q.1));
                        }
                        let acc = self.subtree_answer(
                            &sweep, &out, q.0, q.1, &total, &vitem, &combine, W::zero(),
                        );
                        Ok(Some(acc))
                    })
                    .collect()
            }
            AggKind::Min | AggKind::Max => {
                let min_mode = agg == AggKind::Min;
                let total = move |f: &Self, c: u32| {
                    if min_mode { f.sub[c as usize].min } else { f.sub[c as usize].max }
                };
                let vitem = |f: &Self, v: u32| f.subtree_vertex_item(v);
                let combine = move |a: Option<W>, b: Option<W>| match (a, b) {
                    (Some(x), Some(y)) => Some(if min_mode { x.min(y) } else { x.max(y) }),
                    (x, None) => x,
                    (None, y) => y,
                };
                let out = self.sweep_out(&sweep, &total, &vitem, &combine, None);
                pairs
                    .iter()
                    .map(|q| {
                        if !valid(q) {
                            return Err(Error::NotAnEdge(q.0, q.1));
                        }
                        Ok(self.subtree_answer(
                            &sweep, &out, q.0, q.1, &total, &vitem, &combine, None,
                        ))
                    })
                    .collect()
            }
        };
        Ok((answers, stats))
    }

    fn subtree_vertex_item(&self, v: u32) -> Option<W> {
        match self.config.subtree_content {
            crate::oracle::SubtreeContent::EdgesAndVertices => Some(self.vertex_weight(v)),
            crate::oracle::SubtreeContent::Edges => None,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn subtree_answer<T: Copy>(
        &self,
        sweep: &Sweep,
        out: &[[T; 2]],
        u: usize,
        p: usize,
        total: &impl Fn(&Self, u32) -> T,
        vitem: &impl Fn(&Self, u32) -> T,
        combine: &impl Fn(T, T) -> T,
        zero: T,
    ) -> T {
        let c = &self.clusters[u];
        let cp = self.child_toward(u, p);
        let cpc = &self.clusters[cp as usize];
        let mut acc = combine(zero, vitem(self, u as u32));
        for &child in c.children() {
            if child != cp {
                acc = combine(acc, total(self, child));
            }
        }
        let i = sweep.dense(u as u32) as usize;
        for (j, &b) in c.boundary().iter().enumerate() {
            if cpc.boundary_index(b).is_none() {
                acc = combine(acc, out[i][j]);
            }
        }
        acc
    }

    /// Single subtree aggregate by direct ascent; the batched form must
    /// agree with this on every input.
    pub fn subtree_query(&self, u: usize, p: usize, agg: AggKind) -> Result<Option<W>> {
        self.subtree_query_with_stats(u, p, agg).map(|(a, _)| a)
    }

    pub fn subtree_query_with_stats(
        &self,
        u: usize,
        p: usize,
        agg: AggKind,
    ) -> Result<(Option<W>, QueryStats)> {
        self.check_subtree_store()?;
        let (clusters, stats) = self.subtree_ascent(u, p)?;
        let mut items: Vec<Option<W>> = Vec::with_capacity(clusters.len() + 1);
        items.push(match agg {
            AggKind::Sum => Some(
                clusters
                    .iter()
                    .map(|&(kind, x)| match kind {
                        Collected::Cluster => self.sub[x as usize].sum,
                        Collected::Vertex => self.vertex_weight(x),
                    })
                    .fold(W::zero(), W::add),
            ),
            AggKind::Min | AggKind::Max => {
                let vals = clusters.iter().filter_map(|&(kind, x)| match kind {
                    Collected::Cluster => {
                        if agg == AggKind::Min {
                            self.sub[x as usize].min
                        } else {
                            self.sub[x as usize].max
                        }
                    }
                    Collected::Vertex => self.subtree_vertex_item(x),
                });
                if agg == AggKind::Min {
                    vals.min()
                } else {
                    vals.max()
                }
            }
        });
        Ok((items.pop().unwrap(), stats))
    }

    /// The clusters (and interior vertices) whose disjoint contents tile
    /// the subtree rooted at `u` away from `p`.
    pub(crate) fn subtree_ascent(
        &self,
        u: usize,
        p: usize,
    ) -> Result<(Vec<(Collected, u32)>, QueryStats)> {
        if u >= self.cap || p >= self.cap || !self.has_edge(u, p) {
            return Err(Error::NotAnEdge(u, p));
        }
        let mut collected: Vec<(Collected, u32)> = vec![(Collected::Vertex, u as u32)];
        let mut touched = 1usize;
        let uc = &self.clusters[u];
        let cp = self.child_toward(u, p);
        let cpc = &self.clusters[cp as usize];
        for &child in uc.children() {
            if child != cp {
                collected.push((Collected::Cluster, child));
            }
        }
        let mut pending: Vec<u32> = uc
            .boundary()
            .iter()
            .copied()
            .filter(|&b| cpc.boundary_index(b).is_none())
            .collect();
        let mut cur = u as u32;
        while !pending.is_empty() {
            let pid = self.clusters[cur as usize].parent;
            debug_assert_ne!(pid, NONE32, "pending boundaries always resolve by the root");
            let pc = &self.clusters[pid as usize];
            touched += 1;
            if let Some(pos) = pending.iter().position(|&b| b == pid) {
                pending.swap_remove(pos);
                collected.push((Collected::Vertex, pid));
                for &child in pc.children() {
                    if child != cur {
                        collected.push((Collected::Cluster, child));
                    }
                }
                let cc = &self.clusters[cur as usize];
                for &b2 in pc.boundary() {
                    if cc.boundary_index(b2).is_none() {
                        pending.push(b2);
                    }
                }
            }
            cur = pid;
        }
        Ok((collected, QueryStats { marked_clusters: touched }))
    }

    // ---------------------------------------------------------------- LCA

    /// Batched lowest common ancestors: `result[i]` is the LCA of
    /// `(u_i, v_i)` rooted at `r_i`, or `None` when the three vertices do
    /// not share a component. Arbitrary roots reduce to three fixed-root
    /// answers combined by the odd-one-out rule.
    pub fn batch_lca(&self, triples: &[(usize, usize, usize)]) -> Vec<Option<usize>> {
        self.batch_lca_with_stats(triples).0
    }

    pub fn batch_lca_with_stats(
        &self,
        triples: &[(usize, usize, usize)],
    ) -> (Vec<Option<usize>>, QueryStats) {
        assert!(
            triples.iter().all(|&(u, v, r)| u < self.cap && v < self.cap && r < self.cap),
            "lca query out of range"
        );
        let seeds = triples
            .iter()
            .flat_map(|&(u, v, r)| [u, v, r])
            .filter_map(|v| self.seed_of(v));
        let sweep = self.build_sweep(seeds);
        let scaffold = self.lca_scaffold(&sweep);
        let roots = sweep.roots();
        let root_of = |v: usize| -> usize {
            match self.seed_of(v) {
                Some(c) => sweep.ids[roots[sweep.dense(c) as usize] as usize] as usize,
                None => v,
            }
        };
        let answers = triples
            .iter()
            .map(|&(u, v, r)| {
                let root = root_of(u);
                if root_of(v) != root || root_of(r) != root {
                    return None;
                }
                Some(self.lca_via_root(&sweep, &scaffold, root, u, v, r))
            })
            .collect();
        (answers, QueryStats { marked_clusters: sweep.len() })
    }

    /// Fixed-root batch: every pair must lie in `root`'s component.
    pub fn batch_fixed_lca(
        &self,
        root: usize,
        pairs: &[(usize, usize)],
    ) -> Result<Vec<usize>> {
        if root >= self.cap {
            return Err(Error::VertexOutOfRange(root, self.cap));
        }
        let comp = self.find_representative(root);
        for &(u, v) in pairs {
            if u >= self.cap || v >= self.cap {
                return Err(Error::VertexOutOfRange(u.max(v), self.cap));
            }
            if self.find_representative(u) != comp || self.find_representative(v) != comp {
                return Err(Error::OutsideComponent(u, v));
            }
        }
        let seeds = pairs
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .chain([root])
            .filter_map(|v| self.seed_of(v));
        let sweep = self.build_sweep(seeds);
        let scaffold = self.lca_scaffold(&sweep);
        Ok(pairs
            .iter()
            .map(|&(u, v)| self.lca_via_root(&sweep, &scaffold, comp, u, v, root))
            .collect())
    }

    /// LCA w.r.t. an arbitrary root `r2`, through the component's own root
    /// cluster representative `r0`: evaluate the three fixed-root answers
    /// and take the odd one out (three distinct values would close a
    /// cycle, which a forest cannot).
    fn lca_via_root(
        &self,
        sweep: &Sweep,
        scaffold: &LcaScaffold,
        r0: usize,
        u: usize,
        v: usize,
        r2: usize,
    ) -> usize {
        if r2 == r0 {
            return self.fixed_lca_one(sweep, scaffold, r0, u, v);
        }
        let a = self.fixed_lca_one(sweep, scaffold, r0, u, v);
        let b = self.fixed_lca_one(sweep, scaffold, r0, u, r2);
        let c = self.fixed_lca_one(sweep, scaffold, r0, v, r2);
        if a == b && b == c {
            a
        } else if a == b {
            c
        } else if a == c {
            b
        } else {
            assert!(b == c, "three distinct fixed-root LCAs would form a cycle");
            a
        }
    }

    fn lca_scaffold(&self, sweep: &Sweep) -> LcaScaffold {
        let n = sweep.len();
        let mut depth = vec![0u32; n];
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
        for i in 0..n {
            let p = sweep.parent[i];
            if p != NONE32 {
                depth[i] = depth[p as usize] + 1;
                children[p as usize].push(i as u32);
            }
        }
        // euler tour over every root, for range-minimum LCA
        let mut tour: Vec<u32> = Vec::with_capacity(2 * n);
        let mut first = vec![NONE32; n];
        for i in 0..n {
            if sweep.parent[i] != NONE32 {
                continue;
            }
            let mut stack: Vec<(u32, usize)> = vec![(i as u32, 0)];
            while let Some(&mut (x, ref mut ci)) = stack.last_mut() {
                if first[x as usize] == NONE32 {
                    first[x as usize] = tour.len() as u32;
                }
                tour.push(x);
                if *ci < children[x as usize].len() {
                    let c = children[x as usize][*ci];
                    *ci += 1;
                    stack.push((c, 0));
                } else {
                    stack.pop();
                }
            }
        }
        // sparse table of minimum-depth positions
        let m = tour.len().max(1);
        let levels = (usize::BITS - m.leading_zeros()) as usize;
        let mut sparse: Vec<Vec<u32>> = Vec::with_capacity(levels);
        sparse.push((0..tour.len() as u32).collect());
        let mut span = 1;
        while 2 * span <= m {
            let prev = sparse.last().unwrap();
            let mut row = Vec::with_capacity(m - 2 * span + 1);
            for i in 0..=m - 2 * span {
                let (a, b) = (prev[i], prev[i + span]);
                row.push(
                    if depth[tour[a as usize] as usize] <= depth[tour[b as usize] as usize] {
                        a
                    } else {
                        b
                    },
                );
            }
            sparse.push(row);
            span *= 2;
        }
        // binary lifting, tracking the shallowest unary cluster in each
        // half-open jump window for cluster-path projections
        let jlevels = (usize::BITS - n.leading_zeros()).max(1) as usize;
        let mut up: Vec<Vec<u32>> = Vec::with_capacity(jlevels);
        let mut unary: Vec<Vec<(u32, u32)>> = Vec::with_capacity(jlevels);
        up.push(sweep.parent.clone());
        unary.push(
            (0..n)
                .map(|i| {
                    if self.clusters[sweep.ids[i] as usize].kind == ClusterKind::Unary {
                        (depth[i], i as u32)
                    } else {
                        (u32::MAX, NONE32)
                    }
                })
                .collect(),
        );
        for j in 1..jlevels {
            let (pu, pun) = (&up[j - 1], &unary[j - 1]);
            let mut nu = vec![NONE32; n];
            let mut nun = vec![(u32::MAX, NONE32); n];
            for i in 0..n {
                let mid = pu[i];
                if mid != NONE32 {
                    nu[i] = pu[mid as usize];
                    nun[i] = pun[i].min(pun[mid as usize]);
                } else {
                    nun[i] = pun[i];
                }
            }
            up.push(nu);
            unary.push(nun);
        }
        let rootward = self.rootward(sweep);
        LcaScaffold { depth, tour, first, sparse, up, unary, rootward }
    }

    /// LCA of the clusters of `u` and `v` within the marked subtree.
    fn rc_lca(&self, sweep: &Sweep, sc: &LcaScaffold, a: u32, b: u32) -> u32 {
        let (mut x, mut y) = (sc.first[a as usize], sc.first[b as usize]);
        if x > y {
            std::mem::swap(&mut x, &mut y);
        }
        let len = (y - x + 1) as usize;
        let k = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let p1 = sc.sparse[k][x as usize];
        let p2 = sc.sparse[k][y as usize + 1 - (1 << k)];
        let (c1, c2) = (sc.tour[p1 as usize], sc.tour[p2 as usize]);
        let _ = sweep;
        if sc.depth[c1 as usize] <= sc.depth[c2 as usize] {
            c1
        } else {
            c2
        }
    }

    fn ancestor_at_depth(&self, sc: &LcaScaffold, mut i: u32, d: u32) -> u32 {
        let mut delta = sc.depth[i as usize] - d;
        let mut j = 0;
        while delta > 0 {
            if delta & 1 == 1 {
                i = sc.up[j][i as usize];
            }
            delta >>= 1;
            j += 1;
        }
        i
    }

    /// Shallowest unary cluster on the half-open dense path `[i, stop)`.
    fn highest_unary_below(&self, sc: &LcaScaffold, mut i: u32, stop: u32) -> Option<u32> {
        let mut best = (u32::MAX, NONE32);
        let mut delta = sc.depth[i as usize] - sc.depth[stop as usize];
        let mut j = 0;
        while delta > 0 {
            if delta & 1 == 1 {
                best = best.min(sc.unary[j][i as usize]);
                i = sc.up[j][i as usize];
            }
            delta >>= 1;
            j += 1;
        }
        (best.1 != NONE32).then_some(best.1)
    }

    /// Closest vertex to `q` on the cluster path of the binary cluster at
    /// dense index `x`: `q` itself if all its ancestors below `x` are
    /// binary, otherwise the boundary of the shallowest unary ancestor.
    fn close_path(&self, sweep: &Sweep, sc: &LcaScaffold, q: usize, x: u32) -> usize {
        let qd = sweep.dense(q as u32);
        match self.highest_unary_below(sc, qd, x) {
            None => q,
            Some(w) => self.clusters[sweep.ids[w as usize] as usize].boundary[0] as usize,
        }
    }

    /// One fixed-root LCA over the prepared scaffold. `r` must be the
    /// representative of the component's root cluster.
    fn fixed_lca_one(
        &self,
        sweep: &Sweep,
        sc: &LcaScaffold,
        r: usize,
        u: usize,
        v: usize,
    ) -> usize {
        if u == v || v == r {
            // LCA(u, u, r) = u; LCA(u, r, r) = r handled by symmetry below
            return if v == r { r } else { u };
        }
        if u == r {
            return r;
        }
        let (ud, vd) = (sweep.dense(u as u32), sweep.dense(v as u32));
        let cd = self.rc_lca(sweep, sc, ud, vd);
        let c = sweep.ids[cd as usize] as usize;
        if c == r {
            return r;
        }
        if c == u || c == v {
            let (q, cv) = if c == v { (u, v) } else { (v, u) };
            let qd = sweep.dense(q as u32);
            let x = self.ancestor_at_depth(sc, qd, sc.depth[cd as usize] + 1);
            let xid = sweep.ids[x as usize];
            if self.clusters[xid as usize].kind == ClusterKind::Unary {
                return cv;
            }
            let beta = self.rootward_vertex(sweep, sc, x);
            if beta == cv as u32 {
                cv
            } else {
                self.close_path(sweep, sc, q, x)
            }
        } else {
            let x = self.ancestor_at_depth(sc, ud, sc.depth[cd as usize] + 1);
            let y = self.ancestor_at_depth(sc, vd, sc.depth[cd as usize] + 1);
            let through_c = |side: u32| -> bool {
                let id = sweep.ids[side as usize];
                match self.clusters[id as usize].kind {
                    ClusterKind::Unary => true,
                    ClusterKind::Binary => self.rootward_vertex(sweep, sc, side) == c as u32,
                    _ => unreachable!("direct child of an internal cluster"),
                }
            };
            match (through_c(x), through_c(y)) {
                (true, true) => c,
                (false, true) => self.close_path(sweep, sc, u, x),
                (true, false) => self.close_path(sweep, sc, v, y),
                (false, false) => unreachable!("the root path leaves c through one child"),
            }
        }
    }

    /// Rootward boundary vertex of the binary cluster at dense index `x`.
    fn rootward_vertex(&self, sweep: &Sweep, sc: &LcaScaffold, x: u32) -> u32 {
        let cl = &self.clusters[sweep.ids[x as usize] as usize];
        cl.boundary[sc.rootward[x as usize] as usize]
    }

    // ---------------------------------------------------------------- path sums

    fn check_path_sum_store(&self) -> Result<()> {
        if self.config.store.path_sum {
            Ok(())
        } else {
            Err(Error::SemigroupPathQuery)
        }
    }

    /// Batched path sums over the group algebra:
    /// `sum(root, u) + sum(root, v) - 2 sum(root, lca(u, v))` per pair,
    /// with the root-to-representative sums produced by one top-down pass.
    /// `None` for disconnected pairs; the identity for `u == v`.
    pub fn batch_path_sum(&self, pairs: &[(usize, usize)]) -> Result<Vec<Option<W>>> {
        self.batch_path_sum_with_stats(pairs).map(|(a, _)| a)
    }

    pub fn batch_path_sum_with_stats(
        &self,
        pairs: &[(usize, usize)],
    ) -> Result<(Vec<Option<W>>, QueryStats)> {
        self.check_path_sum_store()?;
        let seeds = pairs
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .filter_map(|v| self.seed_of(v));
        for &(u, v) in pairs {
            if u >= self.cap || v >= self.cap {
                return Err(Error::VertexOutOfRange(u.max(v), self.cap));
            }
        }
        let sweep = self.build_sweep(seeds);
        let scaffold = self.lca_scaffold(&sweep);
        let sums = self.root_sums(&sweep, &scaffold.rootward);
        let roots = sweep.roots();
        let answers = pairs
            .iter()
            .map(|&(u, v)| {
                if u == v {
                    return Some(W::zero());
                }
                let (ud, vd) = match (self.seed_of(u), self.seed_of(v)) {
                    (Some(a), Some(b)) => (sweep.dense(a), sweep.dense(b)),
                    _ => return None,
                };
                let (ru, rv) = (roots[ud as usize], roots[vd as usize]);
                if ru != rv {
                    return None;
                }
                let r0 = sweep.ids[ru as usize] as usize;
                let l = self.fixed_lca_one(&sweep, &scaffold, r0, u, v);
                let ld = sweep.dense(l as u32);
                let s = sums[ud as usize]
                    .add(sums[vd as usize])
                    .sub(sums[ld as usize])
                    .sub(sums[ld as usize]);
                Some(s)
            })
            .collect();
        Ok((answers, QueryStats { marked_clusters: sweep.len() }))
    }

    /// Single path sum by the two-sided ascent to the common boundary.
    pub fn path_query(&self, u: usize, v: usize) -> Result<Option<W>> {
        self.check_path_sum_store()?;
        Ok(self.path_ascent(u, v)?.map(|(w, _)| w))
    }

    /// The binary clusters whose cluster paths partition the `u`..`v`
    /// path, paired with the total weight. Exposed for verification.
    #[doc(hidden)]
    pub fn path_decomposition(&self, u: usize, v: usize) -> Result<Option<(W, Vec<usize>)>> {
        self.check_path_sum_store()?;
        Ok(self
            .path_ascent(u, v)?
            .map(|(w, parts)| (w, parts.into_iter().map(|c| c as usize).collect())))
    }

    /// Two-sided ascent: each side tracks, per boundary vertex of its
    /// current cluster, the path weight from the origin vertex plus the
    /// edge-like clusters whose paths tile it. Sides alternate by cluster
    /// level until they meet at the lowest common RC ancestor, whose
    /// representative is the common boundary on the `u`..`v` path.
    fn path_ascent(&self, u: usize, v: usize) -> Result<Option<(W, Vec<u32>)>> {
        if u >= self.cap {
            return Err(Error::VertexOutOfRange(u, self.cap));
        }
        if v >= self.cap {
            return Err(Error::VertexOutOfRange(v, self.cap));
        }
        if u == v {
            return Ok(Some((W::zero(), Vec::new())));
        }
        if self.seed_of(u).is_none() || self.seed_of(v).is_none() {
            return Ok(None);
        }

        struct Side<W> {
            cur: u32,
            to_rep: (W, Vec<u32>),
            to_bnd: [(W, Vec<u32>); 2],
        }
        let init = |x: usize| -> Side<W> {
            let c = &self.clusters[x];
            let mut side = Side {
                cur: x as u32,
                to_rep: (W::zero(), Vec::new()),
                to_bnd: [(W::zero(), Vec::new()), (W::zero(), Vec::new())],
            };
            for (j, &b) in c.boundary().iter().enumerate() {
                let e = self.edge_child_at(c, b).expect("boundary edge child");
                side.to_bnd[j] = (self.path_sum[e as usize], vec![e]);
            }
            side
        };
        let step = |side: &mut Side<W>| {
            let pid = self.clusters[side.cur as usize].parent;
            debug_assert_ne!(pid, NONE32);
            let c = &self.clusters[side.cur as usize];
            let pc = &self.clusters[pid as usize];
            let z_idx = c.boundary_index(pid).expect("parent rep bounds child");
            let to_z = side.to_bnd[z_idx].clone();
            let mut nb: [(W, Vec<u32>); 2] =
                [(W::zero(), Vec::new()), (W::zero(), Vec::new())];
            for (j, &b2) in pc.boundary().iter().enumerate() {
                nb[j] = if let Some(old) = c.boundary_index(b2) {
                    side.to_bnd[old].clone()
                } else {
                    let e = self.edge_child_at(pc, b2).expect("boundary edge child");
                    let mut parts = to_z.1.clone();
                    parts.push(e);
                    (to_z.0.add(self.path_sum[e as usize]), parts)
                };
            }
            side.to_rep = to_z;
            side.to_bnd = nb;
            side.cur = pid;
        };

        let mut a = init(u);
        let mut b = init(v);
        while a.cur != b.cur {
            let (la, lb) = (
                self.clusters[a.cur as usize].level,
                self.clusters[b.cur as usize].level,
            );
            let side = if la <= lb { &mut a } else { &mut b };
            if self.clusters[side.cur as usize].parent == NONE32 {
                return Ok(None); // ran out of tree: different components
            }
            step(side);
        }
        let mut parts = a.to_rep.1;
        parts.extend(b.to_rep.1);
        Ok(Some((a.to_rep.0.add(b.to_rep.0), parts)))
    }

    // ---------------------------------------------------------------- marks & nearest

    fn check_nearest_store(&self) -> Result<()> {
        if !self.config.store.nearest {
            return Err(Error::AggregateDisabled("nearest"));
        }
        if self.negative_edges > 0 {
            return Err(Error::Config(
                "nearest-marked queries need non-negative edge weights".into(),
            ));
        }
        Ok(())
    }

    pub fn is_marked(&self, v: usize) -> bool {
        v < self.cap && self.marks[v]
    }

    /// Sets marks and repairs the nearest-marked values along the root
    /// paths of the changed vertices only.
    pub fn batch_mark(&mut self, vertices: &[usize]) -> Result<()> {
        self.set_marks(vertices, true)
    }

    pub fn batch_unmark(&mut self, vertices: &[usize]) -> Result<()> {
        self.set_marks(vertices, false)
    }

    fn set_marks(&mut self, vertices: &[usize], value: bool) -> Result<()> {
        self.check_nearest_store()?;
        let mut changed = Vec::new();
        for &v in vertices {
            if v >= self.cap {
                return Err(Error::VertexOutOfRange(v, self.cap));
            }
            if self.marks[v] != value {
                self.marks[v] = value;
                if self.clusters[v].kind != ClusterKind::Vacant {
                    changed.push(v as u32);
                }
            }
        }
        self.refresh_upward(changed);
        Ok(())
    }

    /// Batched nearest-marked-vertex queries; ties go to the smaller
    /// vertex id, `None` when the component holds no marks.
    pub fn batch_nearest_marked(&self, vertices: &[usize]) -> Result<Vec<Option<(usize, W)>>> {
        self.batch_nearest_marked_with_stats(vertices).map(|(a, _)| a)
    }

    pub fn batch_nearest_marked_with_stats(
        &self,
        vertices: &[usize],
    ) -> Result<(Vec<Option<(usize, W)>>, QueryStats)> {
        self.check_nearest_store()?;
        for &v in vertices {
            if v >= self.cap {
                return Err(Error::VertexOutOfRange(v, self.cap));
            }
        }
        let seeds = vertices.iter().filter_map(|&v| self.seed_of(v));
        let sweep = self.build_sweep(seeds);
        // global nearest to each marked cluster's representative: inside
        // the cluster from the augmented value, outside through a boundary
        // vertex whose own answer is already final
        let mut global: Vec<Option<(W, u32)>> = vec![None; sweep.len()];
        for i in 0..sweep.len() {
            let id = sweep.ids[i];
            let c = &self.clusters[id as usize];
            let mut g = self.near[id as usize].to_repr;
            for &b in c.boundary() {
                let bg = global[sweep.dense(b) as usize];
                let e = self.edge_child_at(c, b).expect("boundary edge child");
                g = near_min(g, near_shift(bg, self.path_sum[e as usize]));
            }
            global[i] = g;
        }
        let answers = vertices
            .iter()
            .map(|&v| match self.seed_of(v) {
                Some(c) => global[sweep.dense(c) as usize].map(|(d, x)| (x as usize, d)),
                None => self.marks[v].then(|| (v, W::zero())),
            })
            .collect();
        Ok((answers, QueryStats { marked_clusters: sweep.len() }))
    }
}

/// What a subtree ascent collected: whole clusters or single interior
/// vertices (the representatives resolved along the way).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Collected {
    Cluster,
    Vertex,
}

pub(crate) struct LcaScaffold {
    pub depth: Vec<u32>,
    tour: Vec<u32>,
    first: Vec<u32>,
    sparse: Vec<Vec<u32>>,
    up: Vec<Vec<u32>>,
    /// `(depth, dense id)` of the shallowest unary cluster in each jump
    /// window.
    unary: Vec<Vec<(u32, u32)>>,
    /// Rootward boundary index per marked binary cluster.
    rootward: Vec<u8>,
}
