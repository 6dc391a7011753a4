//! Structure verification: expands cluster contents explicitly and checks
//! the clustering axioms. Linear-to-quadratic cost, meant for tests,
//! debugging and `rc-bench --verify`, not for production paths.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::GroupWeight;

use super::{ClusterKind, Outcome, RcForest, NONE32};

/// Explicit contents of one cluster.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClusterContents {
    pub vertices: BTreeSet<usize>,
    /// Edges by canonical shadow endpoints.
    pub edges: BTreeSet<(usize, usize)>,
}

/// One piece of a subtree decomposition: a whole cluster or a single
/// interior vertex.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompPart {
    Cluster(usize),
    Vertex(usize),
}

impl<W: GroupWeight> RcForest<W> {
    /// Expanded contents of one cluster, for verification.
    #[doc(hidden)]
    pub fn cluster_contents(&self, id: usize) -> ClusterContents {
        self.expand_contents(id as u32)
    }

    /// The cluster path of an edge-like cluster as explicit edges, for
    /// verification: the unique path between its two boundary vertices.
    #[doc(hidden)]
    pub fn cluster_path_edges(&self, id: usize) -> Vec<(usize, usize)> {
        let c = &self.clusters[id];
        assert!(c.kind.is_edge_like(), "cluster {id} has no cluster path");
        let contents = self.expand_contents(id as u32);
        let (from, to) = (c.boundary[0] as usize, c.boundary[1] as usize);
        // BFS over the contained edges only
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(a, b) in &contents.edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut prev: BTreeMap<usize, usize> = BTreeMap::from([(from, from)]);
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &y in adj.get(&x).into_iter().flatten() {
                if !prev.contains_key(&y) {
                    prev.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
        let mut out = Vec::new();
        let mut x = to;
        while x != from {
            let p = prev[&x];
            out.push((p.min(x), p.max(x)));
            x = p;
        }
        out
    }

    /// The disjoint pieces whose union is exactly the subtree rooted at
    /// `u` away from `p`, for verification.
    #[doc(hidden)]
    pub fn subtree_decomposition(&self, u: usize, p: usize) -> crate::error::Result<Vec<DecompPart>> {
        let (collected, _) = self.subtree_ascent(u, p)?;
        Ok(collected
            .into_iter()
            .map(|(kind, x)| match kind {
                super::queries::Collected::Cluster => DecompPart::Cluster(x as usize),
                super::queries::Collected::Vertex => DecompPart::Vertex(x as usize),
            })
            .collect())
    }

    /// Recursively expands the vertices and edges contained in a cluster.
    pub(crate) fn expand_contents(&self, id: u32) -> ClusterContents {
        let mut out = ClusterContents::default();
        let mut stack = vec![id];
        while let Some(c) = stack.pop() {
            let cl = &self.clusters[c as usize];
            match cl.kind {
                ClusterKind::BaseEdge => {
                    let b = self.base(c);
                    out.edges
                        .insert((b.u.min(b.v) as usize, b.u.max(b.v) as usize));
                }
                ClusterKind::Vacant => panic!("expanding vacant cluster {c}"),
                _ => {
                    out.vertices.insert(c as usize);
                    stack.extend(cl.children().iter().copied());
                }
            }
        }
        out
    }

    /// Checks the full clustering structure against the current live edge
    /// set. Covers: cluster axioms (induced connectivity, edge closure,
    /// endpoint condition), boundary counts per kind, parent/child
    /// consistency, the one-to-one vertex/internal-cluster mapping, and
    /// that children arrays hold only edge and internal clusters. Panics
    /// with a description on the first violation.
    pub fn audit_structure(&self) {
        let mut adj: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (u, v, _) in self.live_edges() {
            adj.entry(u).or_default().insert(v);
            adj.entry(v).or_default().insert(u);
        }
        let edge_set: BTreeSet<(usize, usize)> = self
            .live_edges()
            .map(|(u, v, _)| (u.min(v), u.max(v)))
            .collect();

        for v in 0..self.cap {
            if !self.present[v] {
                assert!(self.hist[v].is_empty(), "absent vertex {v} has history");
                continue;
            }
            let h = &self.hist[v];
            assert!(!h.is_empty(), "present vertex {v} lacks history");
            for (t, rec) in h.iter().enumerate() {
                let last = t == h.len() - 1;
                assert_eq!(
                    rec.outcome != Outcome::Live,
                    last,
                    "vertex {v} outcome placement at level {t}"
                );
            }
            let cl = &self.clusters[v];
            match h.last().unwrap().outcome {
                Outcome::Rake => assert_eq!(cl.kind, ClusterKind::Unary, "vertex {v}"),
                Outcome::Compress => assert_eq!(cl.kind, ClusterKind::Binary, "vertex {v}"),
                Outcome::Finalize => assert_eq!(cl.kind, ClusterKind::Nullary, "vertex {v}"),
                Outcome::Live => unreachable!(),
            }
            assert_eq!(cl.level as usize, h.len(), "vertex {v} cluster level");

            let expected_boundary = match cl.kind {
                ClusterKind::Nullary => 0,
                ClusterKind::Unary => 1,
                ClusterKind::Binary => 2,
                _ => unreachable!(),
            };
            assert_eq!(cl.n_boundary as usize, expected_boundary, "vertex {v} boundary count");

            // children are edge or internal clusters, never base vertices,
            // and point back to the parent
            for &ch in cl.children() {
                let cc = &self.clusters[ch as usize];
                assert!(
                    cc.kind != ClusterKind::Vacant && cc.kind != ClusterKind::Nullary,
                    "vertex {v} child {ch} has kind {:?}",
                    cc.kind
                );
                assert_eq!(cc.parent, v as u32, "child {ch} parent link");
                assert!(cc.level < cl.level, "child {ch} level ordering");
            }

            // cluster axioms via explicit contents
            let contents = self.expand_contents(v as u32);
            assert!(contents.vertices.contains(&v));
            // (1) induced subgraph on the vertex set is connected
            if !contents.vertices.is_empty() {
                let start = *contents.vertices.iter().next().unwrap();
                let mut seen = BTreeSet::from([start]);
                let mut stack = vec![start];
                while let Some(x) = stack.pop() {
                    if let Some(nbrs) = adj.get(&x) {
                        for &y in nbrs {
                            if contents.vertices.contains(&y) && seen.insert(y) {
                                stack.push(y);
                            }
                        }
                    }
                }
                assert_eq!(
                    seen.len(),
                    contents.vertices.len(),
                    "cluster {v} induced subgraph disconnected"
                );
            }
            // (2) edge set contains every induced edge
            for &(a, b) in &edge_set {
                if contents.vertices.contains(&a) && contents.vertices.contains(&b) {
                    assert!(
                        contents.edges.contains(&(a, b)),
                        "cluster {v} missing induced edge ({a},{b})"
                    );
                }
            }
            // (3) every contained edge has an endpoint in the vertex set,
            // and endpoints outside are exactly the boundary vertices
            let mut boundary = BTreeSet::new();
            for &(a, b) in &contents.edges {
                assert!(edge_set.contains(&(a, b)), "cluster {v} contains dead edge");
                let ain = contents.vertices.contains(&a);
                let bin = contents.vertices.contains(&b);
                assert!(ain || bin, "cluster {v} edge ({a},{b}) floats");
                if !ain {
                    boundary.insert(a);
                }
                if !bin {
                    boundary.insert(b);
                }
            }
            let stored: BTreeSet<usize> =
                cl.boundary().iter().map(|&b| b as usize).collect();
            assert_eq!(boundary, stored, "cluster {v} boundary mismatch");
        }

        // one-to-one: every present vertex appears in exactly one internal
        // cluster's contents as a newly added vertex — equivalently, the
        // union of root-cluster contents covers each vertex once
        let mut covered: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..self.cap {
            if self.present[v] && self.clusters[v].parent == NONE32 {
                assert_eq!(self.clusters[v].kind, ClusterKind::Nullary, "root {v} kind");
                let contents = self.expand_contents(v as u32);
                for &x in &contents.vertices {
                    *covered.entry(x).or_default() += 1;
                }
                for &e in &contents.edges {
                    assert!(edge_set.contains(&e));
                }
            }
        }
        for v in 0..self.cap {
            if self.present[v] {
                assert_eq!(covered.get(&v), Some(&1), "vertex {v} root coverage");
            }
        }
        // pending entries mirror standing rakes exactly
        for w in 0..self.cap {
            for &(x, lvl) in &self.pending[w] {
                let hx = &self.hist[x as usize];
                assert_eq!(hx.len() as u32, lvl + 1, "pending level for {x} on {w}");
                assert_eq!(hx.last().unwrap().outcome, Outcome::Rake, "pending kind");
                assert_eq!(self.clusters[x as usize].boundary(), &[w as u32], "pending target");
            }
        }
        for v in 0..self.cap {
            if self.present[v] && self.clusters[v].kind == ClusterKind::Unary {
                let target = self.clusters[v].boundary[0] as usize;
                let lvl = self.clusters[v].level - 1;
                assert!(
                    self.pending[target].contains(&(v as u32, lvl)),
                    "standing rake {v} missing from pending of {target}"
                );
            }
        }

        // every live edge is in some root's contents
        for &(a, b) in &edge_set {
            let r = self.find_representative(a);
            let contents = self.expand_contents(r as u32);
            assert!(contents.edges.contains(&(a, b)), "edge ({a},{b}) not covered");
            assert_eq!(self.find_representative(b), r, "edge endpoints in one component");
        }
    }

    /// Checks every stored aggregate against brute-force recomputation
    /// from expanded contents. Quadratic; small forests only.
    pub fn audit_aggregates(&self) {
        let edges: Vec<(usize, usize, W)> = self.live_edges().collect();
        let weight_of = |a: usize, b: usize| -> W {
            edges
                .iter()
                .find(|&&(u, v, _)| (u.min(v), u.max(v)) == (a.min(b), a.max(b)))
                .map(|&(_, _, w)| w)
                .unwrap()
        };
        let real_of = |a: usize, b: usize| -> Option<(u32, u32)> {
            let key = (a.min(b) as u32, a.max(b) as u32);
            let id = self.edge_index[&key];
            self.base(id).real
        };
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(u, v, _) in &edges {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        let path_between = |a: usize, b: usize| -> Vec<(usize, usize)> {
            // BFS within the component
            let mut prev: BTreeMap<usize, usize> = BTreeMap::from([(a, a)]);
            let mut queue = std::collections::VecDeque::from([a]);
            while let Some(x) = queue.pop_front() {
                if x == b {
                    break;
                }
                for &y in adj.get(&x).into_iter().flatten() {
                    if !prev.contains_key(&y) {
                        prev.insert(y, x);
                        queue.push_back(y);
                    }
                }
            }
            let mut out = Vec::new();
            let mut x = b;
            while x != a {
                let p = prev[&x];
                out.push((p, x));
                x = p;
            }
            out
        };

        for v in 0..self.cap {
            if !self.present[v] {
                continue;
            }
            let cl = self.clusters[v].clone();
            let contents = self.expand_contents(v as u32);

            if self.config.store.subtree {
                let mut sum = W::zero();
                let mut items: Vec<W> = Vec::new();
                for &(a, b) in &contents.edges {
                    let w = weight_of(a, b);
                    sum = sum.add(w);
                    if real_of(a, b).is_some() {
                        items.push(w);
                    }
                }
                for &x in &contents.vertices {
                    if let Some(w) = match self.config.subtree_content {
                        crate::oracle::SubtreeContent::EdgesAndVertices => {
                            Some(self.vertex_weight(x as u32))
                        }
                        crate::oracle::SubtreeContent::Edges => None,
                    } {
                        sum = sum.add(w);
                        items.push(w);
                    }
                }
                let s = &self.sub[v];
                assert_eq!(s.sum, sum, "subtree sum at cluster {v}");
                assert_eq!(s.min, items.iter().copied().min(), "subtree min at {v}");
                assert_eq!(s.max, items.iter().copied().max(), "subtree max at {v}");
            }

            if cl.kind == ClusterKind::Binary {
                let (b0, b1) = (cl.boundary[0] as usize, cl.boundary[1] as usize);
                let path = path_between(b0, b1);
                for &(a, b) in &path {
                    assert!(
                        contents.edges.contains(&(a.min(b), a.max(b))),
                        "cluster path edge outside cluster {v}"
                    );
                }
                if self.config.store.need_path_sum() {
                    let sum = path
                        .iter()
                        .fold(W::zero(), |acc, &(a, b)| acc.add(weight_of(a, b)));
                    assert_eq!(self.path_sum[v], sum, "cluster path sum at {v}");
                }
                if self.config.store.path_extrema {
                    let exts: Vec<(W, u32, u32)> = path
                        .iter()
                        .filter_map(|&(a, b)| {
                            real_of(a, b).map(|(ru, rv)| (weight_of(a, b), ru, rv))
                        })
                        .collect();
                    assert_eq!(
                        self.path_min[v],
                        exts.iter().copied().min(),
                        "path min at {v}"
                    );
                    assert_eq!(
                        self.path_max[v],
                        exts.iter().copied().max(),
                        "path max at {v}"
                    );
                }
                // first hop inward from each boundary
                for (i, &b) in [b0, b1].iter().enumerate() {
                    let hop = path
                        .iter()
                        .find_map(|&(x, y)| {
                            if x == b {
                                Some(y)
                            } else if y == b {
                                Some(x)
                            } else {
                                None
                            }
                        })
                        .unwrap();
                    assert_eq!(cl.end_nbr[i] as usize, hop, "end neighbor at {v}");
                }
            }

            if self.config.store.nearest {
                // weighted distances within the cluster contents
                let dist_from = |s: usize| -> BTreeMap<usize, W> {
                    let mut dist = BTreeMap::from([(s, W::zero())]);
                    let mut heap = std::collections::BinaryHeap::new();
                    heap.push(std::cmp::Reverse((W::zero(), s)));
                    while let Some(std::cmp::Reverse((d, x))) = heap.pop() {
                        if dist.get(&x) != Some(&d) {
                            continue;
                        }
                        for &y in adj.get(&x).into_iter().flatten() {
                            let key = (x.min(y), x.max(y));
                            if !contents.edges.contains(&key) {
                                continue;
                            }
                            let nd = d.add(weight_of(x, y));
                            if dist.get(&y).is_none_or(|&old| nd < old) {
                                dist.insert(y, nd);
                                heap.push(std::cmp::Reverse((nd, y)));
                            }
                        }
                    }
                    dist
                };
                let near_to = |s: usize| -> Option<(W, u32)> {
                    dist_from(s)
                        .into_iter()
                        .filter(|(x, _)| contents.vertices.contains(x) && self.marks[*x])
                        .map(|(x, d)| (d, x as u32))
                        .min()
                };
                let n = &self.near[v];
                assert_eq!(n.to_repr, near_to(v), "nearest to representative at {v}");
                for (i, &b) in cl.boundary().iter().enumerate() {
                    assert_eq!(n.to_bnd[i], near_to(b as usize), "nearest to boundary at {v}");
                }
            }
        }
    }
}

impl<W: GroupWeight> RcForest<W> {
    /// Prints one cluster's internals; debugging helper.
    #[doc(hidden)]
    pub fn debug_cluster(&self, id: usize) {
        let c = &self.clusters[id];
        println!(
            "cluster {id}: kind={:?} level={} parent={} boundary={:?} end_nbr={:?}",
            c.kind, c.level, c.parent as i64, c.boundary(), &c.end_nbr
        );
        for &ch in c.children() {
            let cc = &self.clusters[ch as usize];
            println!(
                "  child {ch}: kind={:?} level={} boundary={:?} end_nbr={:?}",
                cc.kind, cc.level, cc.boundary(), &cc.end_nbr
            );
        }
    }
}
