//! Augmented values stored on clusters and the merge rules that maintain
//! them bottom-up.
//!
//! Binary clusters carry aggregates over their *cluster path* (the path
//! between their two boundary vertices): the group sum plus the extremal
//! real edges. Every cluster carries subtree totals over its contents and
//! the nearest-marked triples. All merges are constant time in the number
//! of children, which is what keeps both builds and localized replays
//! cheap.

use crate::algebra::GroupWeight;

use super::{Cluster, ClusterKind, RcForest, NONE32};

/// Subtree totals over cluster contents. `sum` treats missing items as
/// zero; `min`/`max` are `None` for empty contents (identity-weight chain
/// edges are excluded from the extrema and contribute zero to the sum).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct SubAgg<W> {
    pub sum: W,
    pub min: Option<W>,
    pub max: Option<W>,
}

impl<W: GroupWeight> SubAgg<W> {
    pub(crate) fn empty() -> Self {
        SubAgg { sum: W::zero(), min: None, max: None }
    }

    fn merge(self, other: SubAgg<W>) -> SubAgg<W> {
        SubAgg {
            sum: self.sum.add(other.sum),
            min: opt_min(self.min, other.min),
            max: opt_max(self.max, other.max),
        }
    }

}

fn opt_min<W: Ord>(a: Option<W>, b: Option<W>) -> Option<W> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn opt_max<W: Ord>(a: Option<W>, b: Option<W>) -> Option<W> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `(weight, real u, real v)` of an extremal edge; compared
/// lexicographically so ties resolve identically everywhere.
pub(crate) type Ext<W> = Option<(W, u32, u32)>;

pub(crate) fn ext_min<W: Ord + Copy>(a: Ext<W>, b: Ext<W>) -> Ext<W> {
    opt_min(a, b)
}

pub(crate) fn ext_max<W: Ord + Copy>(a: Ext<W>, b: Ext<W>) -> Ext<W> {
    opt_max(a, b)
}

/// Nearest marked vertex `(distance, vertex)` to the representative and to
/// each boundary, measured inside the cluster. `None` when the cluster
/// contains no marked vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct NearAgg<W> {
    pub to_repr: Option<(W, u32)>,
    pub to_bnd: [Option<(W, u32)>; 2],
}

impl<W: GroupWeight> NearAgg<W> {
    pub(crate) fn empty() -> Self {
        NearAgg { to_repr: None, to_bnd: [None, None] }
    }
}

pub(crate) fn near_min<W: Ord + Copy>(
    a: Option<(W, u32)>,
    b: Option<(W, u32)>,
) -> Option<(W, u32)> {
    opt_min(a, b)
}

pub(crate) fn near_shift<W: GroupWeight>(n: Option<(W, u32)>, by: W) -> Option<(W, u32)> {
    n.map(|(d, v)| (d.add(by), v))
}

/// All augmented values of one cluster, computed before being stored.
#[derive(Clone, Debug)]
pub(crate) struct PayloadTmp<W> {
    pub path_sum: W,
    pub path_min: Ext<W>,
    pub path_max: Ext<W>,
    pub sub: SubAgg<W>,
    pub near: NearAgg<W>,
    pub end_nbr: [u32; 2],
}

impl<W: GroupWeight> RcForest<W> {
    fn vertex_item(&self, v: u32) -> Option<W> {
        match self.config.subtree_content {
            crate::oracle::SubtreeContent::EdgesAndVertices => Some(self.vertex_weight(v)),
            crate::oracle::SubtreeContent::Edges => None,
        }
    }

    /// Nearest-marked value within `child`, measured to `vertex` (which
    /// must be one of the child's boundary vertices).
    fn child_near_to(&self, child: u32, vertex: u32) -> Option<(W, u32)> {
        let c = &self.clusters[child as usize];
        let i = c.boundary_index(vertex)?;
        self.near[child as usize].to_bnd[i]
    }

    pub(crate) fn base_edge_payload(&self, id: u32) -> PayloadTmp<W> {
        let b = self.base(id);
        let ext = b.real.map(|(u, v)| (b.weight, u, v));
        let (bu, bv) = (b.u.min(b.v), b.u.max(b.v));
        PayloadTmp {
            path_sum: b.weight,
            path_min: ext,
            path_max: ext,
            sub: SubAgg {
                sum: b.weight,
                min: ext.map(|(w, _, _)| w),
                max: ext.map(|(w, _, _)| w),
            },
            near: NearAgg::empty(),
            end_nbr: [bv, bu],
        }
    }

    /// Merge payload for the internal cluster created when `v` contracts,
    /// from its children's stored payloads. Children payloads are final
    /// because children always contract at strictly lower levels.
    pub(crate) fn compute_payload(
        &self,
        kind: ClusterKind,
        v: u32,
        children: &[u32],
        boundary: &[u32],
    ) -> PayloadTmp<W> {
        let store = self.config.store;
        let mut out = PayloadTmp {
            path_sum: W::zero(),
            path_min: None,
            path_max: None,
            sub: SubAgg::empty(),
            near: NearAgg::empty(),
            end_nbr: [NONE32; 2],
        };

        if store.subtree {
            let mut acc = SubAgg::empty();
            for &c in children {
                acc = acc.merge(self.sub[c as usize]);
            }
            if let Some(w) = self.vertex_item(v) {
                acc = acc.merge(SubAgg { sum: w, min: Some(w), max: Some(w) });
            }
            out.sub = acc;
        }

        // the edge-like child attached to each boundary vertex
        let edge_child_at = |b: u32| {
            children.iter().copied().find(|&c| {
                let cc = &self.clusters[c as usize];
                cc.kind.is_edge_like() && cc.boundary_index(b).is_some()
            })
        };

        if kind == ClusterKind::Binary && (store.need_path_sum() || store.path_extrema) {
            let e0 = edge_child_at(boundary[0]).expect("binary cluster lacks an edge child");
            let e1 = edge_child_at(boundary[1]).expect("binary cluster lacks an edge child");
            debug_assert_ne!(e0, e1);
            if store.need_path_sum() {
                out.path_sum = self.path_sum[e0 as usize].add(self.path_sum[e1 as usize]);
            }
            if store.path_extrema {
                out.path_min = ext_min(self.path_min[e0 as usize], self.path_min[e1 as usize]);
                out.path_max = ext_max(self.path_max[e0 as usize], self.path_max[e1 as usize]);
            }
            let c0 = &self.clusters[e0 as usize];
            let c1 = &self.clusters[e1 as usize];
            out.end_nbr = [
                c0.end_nbr[c0.boundary_index(boundary[0]).unwrap()],
                c1.end_nbr[c1.boundary_index(boundary[1]).unwrap()],
            ];
        }

        if store.nearest {
            let mut to_repr = if self.marks[v as usize] {
                Some((W::zero(), v))
            } else {
                None
            };
            for &c in children {
                to_repr = near_min(to_repr, self.child_near_to(c, v));
            }
            let mut near = NearAgg { to_repr, to_bnd: [None, None] };
            for (i, &b) in boundary.iter().enumerate() {
                let e = edge_child_at(b).expect("boundary without an edge child");
                let via_inside = self.child_near_to(e, b);
                let via_repr = near_shift(to_repr, self.path_sum[e as usize]);
                near.to_bnd[i] = near_min(via_inside, via_repr);
            }
            out.near = near;
        }

        out
    }

    pub(crate) fn store_payload(&mut self, id: u32, tmp: &PayloadTmp<W>) {
        let store = self.config.store;
        if store.need_path_sum() {
            self.path_sum[id as usize] = tmp.path_sum;
        }
        if store.path_extrema {
            self.path_min[id as usize] = tmp.path_min;
            self.path_max[id as usize] = tmp.path_max;
        }
        if store.subtree {
            self.sub[id as usize] = tmp.sub;
        }
        if store.nearest {
            self.near[id as usize] = tmp.near;
        }
        let c = &mut self.clusters[id as usize];
        if c.kind.is_edge_like() {
            c.end_nbr = tmp.end_nbr;
        }
    }

    /// Recomputes one cluster's payload from its children. Used by the
    /// post-replay refresh and by mark updates; callers order calls so
    /// that children come first.
    pub(crate) fn recompute_cluster(&mut self, id: u32) {
        let c = &self.clusters[id as usize];
        let tmp = match c.kind {
            ClusterKind::Vacant => return,
            ClusterKind::BaseEdge => {
                let mut tmp = self.base_edge_payload(id);
                tmp.end_nbr = c.end_nbr;
                tmp
            }
            kind => {
                let children: Vec<u32> = c.children().to_vec();
                let boundary: Vec<u32> = c.boundary().to_vec();
                self.compute_payload(kind, id, &children, &boundary)
            }
        };
        self.store_payload(id, &tmp);
    }

    /// Recomputes every cluster bottom-up.
    pub(crate) fn refresh_all_payloads(&mut self) {
        let mut order: Vec<(u32, u32)> = (0..self.clusters.len() as u32)
            .filter(|&id| self.clusters[id as usize].kind != ClusterKind::Vacant)
            .map(|id| (self.clusters[id as usize].level, id))
            .collect();
        order.sort_unstable();
        for (_, id) in order {
            self.recompute_cluster(id);
        }
    }

    /// Recomputes the given clusters and all their ancestors, children
    /// before parents. Clusters of equal level never contain one another,
    /// so each level band recomputes in parallel.
    pub(crate) fn refresh_upward(&mut self, seeds: impl IntoIterator<Item = u32>) {
        use rayon::prelude::*;
        let mut visited = vec![false; self.clusters.len()];
        let mut stack: Vec<u32> = seeds.into_iter().collect();
        let mut order: Vec<(u32, u32)> = Vec::new();
        while let Some(id) = stack.pop() {
            if id == NONE32 || std::mem::replace(&mut visited[id as usize], true) {
                continue;
            }
            let c = &self.clusters[id as usize];
            if c.kind == ClusterKind::Vacant {
                continue;
            }
            order.push((c.level, id));
            if c.parent != NONE32 {
                stack.push(c.parent);
            }
        }
        if order.len() >= 4096 {
            order.par_sort_unstable();
        } else {
            order.sort_unstable();
        }
        let mut at = 0;
        while at < order.len() {
            let level = order[at].0;
            let mut end = at;
            while end < order.len() && order[end].0 == level {
                end += 1;
            }
            let band = &order[at..end];
            if band.len() >= 4096 {
                let tmps: Vec<(u32, PayloadTmp<W>)> = band
                    .par_iter()
                    .filter_map(|&(_, id)| self.payload_for(id).map(|t| (id, t)))
                    .collect();
                for (id, tmp) in &tmps {
                    self.store_payload(*id, tmp);
                }
            } else {
                for &(_, id) in band {
                    self.recompute_cluster(id);
                }
            }
            at = end;
        }
    }

    /// The recomputed payload of one cluster, or `None` for vacant slots.
    fn payload_for(&self, id: u32) -> Option<PayloadTmp<W>> {
        let c = &self.clusters[id as usize];
        match c.kind {
            ClusterKind::Vacant => None,
            ClusterKind::BaseEdge => {
                let mut tmp = self.base_edge_payload(id);
                tmp.end_nbr = c.end_nbr;
                Some(tmp)
            }
            kind => {
                Some(self.compute_payload(kind, id, c.children(), c.boundary()))
            }
        }
    }

    /// The edge-like child of `cluster` attached to boundary vertex `b`.
    pub(crate) fn edge_child_at(&self, cluster: &Cluster, b: u32) -> Option<u32> {
        cluster.children().iter().copied().find(|&c| {
            let cc = &self.clusters[c as usize];
            cc.kind.is_edge_like() && cc.boundary_index(b).is_some()
        })
    }
}
