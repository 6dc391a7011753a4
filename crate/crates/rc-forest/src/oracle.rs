//! Brute-force reference oracles.
//!
//! Every oracle here is single threaded, walks the plain [`Forest`]
//! adjacency directly, and shares no traversal code with the dynamic
//! structures, so the two sides of every equivalence test are independent.
//! Costs are O(n) or O(n log n) per query; that is the point, not a flaw.

use std::collections::BinaryHeap;

use crate::algebra::{AggKind, GroupWeight, Semigroup};
use crate::error::{Error, Result};
use crate::forest::{Dsu, Forest, WeightedEdge};

/// True iff `u` and `v` lie in the same tree. Union-find reference.
pub fn oracle_connected<W: GroupWeight>(f: &Forest<W>, u: usize, v: usize) -> Result<bool> {
    f.check_vertex(u)?;
    f.check_vertex(v)?;
    let mut dsu = Dsu::new(f.len());
    for e in f.edges() {
        dsu.union(e.u, e.v);
    }
    Ok(dsu.same(u, v))
}

/// Parent array of a DFS from `root`; `usize::MAX` marks unreached vertices.
fn dfs_parents<W: GroupWeight>(f: &Forest<W>, root: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; f.len()];
    parent[root] = root;
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        for &(y, _) in f.neighbors(x) {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    parent
}

/// Edges along the unique `u`..`v` path, or None if disconnected.
fn path_edges<W: GroupWeight>(f: &Forest<W>, u: usize, v: usize) -> Option<Vec<(usize, usize, W)>> {
    let parent = dfs_parents(f, u);
    if parent[v] == usize::MAX {
        return None;
    }
    let mut edges = Vec::new();
    let mut x = v;
    while x != u {
        let p = parent[x];
        edges.push((p, x, f.edge_weight(p, x).unwrap()));
        x = p;
    }
    edges.reverse();
    Some(edges)
}

/// Folds `lift(edge weight)` over the `u`..`v` path with the semigroup
/// combine. `None` when disconnected, and also for the empty `u == v` path
/// (a bare semigroup has no identity to return).
pub fn oracle_path_aggregate<W: GroupWeight, S: Semigroup>(
    f: &Forest<W>,
    u: usize,
    v: usize,
    lift: impl Fn(W) -> S,
) -> Result<Option<S>> {
    f.check_vertex(u)?;
    f.check_vertex(v)?;
    let Some(edges) = path_edges(f, u, v) else {
        return Ok(None);
    };
    Ok(edges
        .into_iter()
        .map(|(_, _, w)| lift(w))
        .reduce(S::combine))
}

/// Sum of edge weights along the `u`..`v` path; identity for `u == v`.
pub fn oracle_path_sum<W: GroupWeight>(f: &Forest<W>, u: usize, v: usize) -> Result<Option<W>> {
    f.check_vertex(u)?;
    f.check_vertex(v)?;
    match path_edges(f, u, v) {
        None => Ok(None),
        Some(edges) => Ok(Some(
            edges.into_iter().fold(W::zero(), |acc, (_, _, w)| acc.add(w)),
        )),
    }
}

/// Lightest edge on the `u`..`v` path, ties broken on `(weight, u, v)`.
/// None for `u == v` and for disconnected pairs.
pub fn oracle_path_min<W: GroupWeight>(
    f: &Forest<W>,
    u: usize,
    v: usize,
) -> Result<Option<WeightedEdge<W>>> {
    f.check_vertex(u)?;
    f.check_vertex(v)?;
    let Some(edges) = path_edges(f, u, v) else {
        return Ok(None);
    };
    Ok(edges
        .into_iter()
        .map(|(a, b, w)| WeightedEdge::new(a, b, w))
        .min_by_key(|e| (e.weight, e.u, e.v)))
}

/// Heaviest edge on the `u`..`v` path, ties broken on `(weight, u, v)`.
pub fn oracle_path_max<W: GroupWeight>(
    f: &Forest<W>,
    u: usize,
    v: usize,
) -> Result<Option<WeightedEdge<W>>> {
    f.check_vertex(u)?;
    f.check_vertex(v)?;
    let Some(edges) = path_edges(f, u, v) else {
        return Ok(None);
    };
    Ok(edges
        .into_iter()
        .map(|(a, b, w)| WeightedEdge::new(a, b, w))
        .max_by_key(|e| (e.weight, e.u, e.v)))
}

/// What a subtree aggregate ranges over.
#[derive(Copy, Clone, Eq, PartialEq, Debug)]
pub enum SubtreeContent {
    /// Edge weights only.
    Edges,
    /// Edge weights plus the weights of the vertices inside the subtree.
    EdgesAndVertices,
}

/// Aggregate over the contents of the subtree rooted at `root` when the
/// tree is rooted at `parent`. `(root, parent)` must be an edge.
///
/// Rooted-DFS reference. Sum of empty contents is zero; min/max of empty
/// contents is `None`.
pub fn oracle_subtree_aggregate<W: GroupWeight>(
    f: &Forest<W>,
    root: usize,
    parent: usize,
    content: SubtreeContent,
    agg: AggKind,
) -> Result<Option<W>> {
    f.check_vertex(root)?;
    f.check_vertex(parent)?;
    if !f.has_edge(root, parent) {
        return Err(Error::NotAnEdge(root, parent));
    }
    let mut items: Vec<W> = Vec::new();
    if content == SubtreeContent::EdgesAndVertices {
        items.push(f.vertex_weight(root));
    }
    let mut stack = vec![(root, parent)];
    while let Some((x, from)) = stack.pop() {
        for &(y, w) in f.neighbors(x) {
            if y != from {
                items.push(w);
                if content == SubtreeContent::EdgesAndVertices {
                    items.push(f.vertex_weight(y));
                }
                stack.push((y, x));
            }
        }
    }
    Ok(match agg {
        AggKind::Sum => Some(items.into_iter().fold(W::zero(), W::add)),
        AggKind::Min => items.into_iter().min(),
        AggKind::Max => items.into_iter().max(),
    })
}

fn distances_from<W: GroupWeight>(f: &Forest<W>, s: usize) -> Vec<Option<usize>> {
    // hop distances; used by the distance-minimizing LCA definition
    let mut dist = vec![None; f.len()];
    dist[s] = Some(0);
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in f.neighbors(x) {
            if dist[y].is_none() {
                dist[y] = Some(dist[x].unwrap() + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Lowest common ancestor of `u` and `v` with respect to root `r`,
/// computed as the unique minimizer of `d(u,c) + d(v,c) + d(r,c)`.
/// None when `u`, `v`, `r` are not all in one tree.
pub fn oracle_lca<W: GroupWeight>(
    f: &Forest<W>,
    u: usize,
    v: usize,
    r: usize,
) -> Result<Option<usize>> {
    f.check_vertex(u)?;
    f.check_vertex(v)?;
    f.check_vertex(r)?;
    let (du, dv, dr) = (distances_from(f, u), distances_from(f, v), distances_from(f, r));
    let mut best: Option<(usize, usize)> = None;
    for c in 0..f.len() {
        if let (Some(a), Some(b), Some(g)) = (du[c], dv[c], dr[c]) {
            let total = a + b + g;
            if best.is_none_or(|(t, _)| total < t) {
                best = Some((total, c));
            }
        }
    }
    Ok(best.map(|(_, c)| c))
}

/// Nearest marked vertex to `v` by weighted distance, ties broken by the
/// smaller vertex id. Dijkstra reference; weights must be non-negative.
pub fn oracle_nearest_marked<W: GroupWeight>(
    f: &Forest<W>,
    marks: &[usize],
    v: usize,
) -> Result<Option<(usize, W)>> {
    f.check_vertex(v)?;
    for e in f.edges() {
        if e.weight < W::zero() {
            return Err(Error::NegativeWeight(e.u, e.v));
        }
    }
    let mut marked = vec![false; f.len()];
    for &m in marks {
        f.check_vertex(m)?;
        marked[m] = true;
    }
    let mut dist: Vec<Option<W>> = vec![None; f.len()];
    let mut heap = BinaryHeap::new();
    dist[v] = Some(W::zero());
    heap.push(std::cmp::Reverse((W::zero(), v)));
    let mut best: Option<(usize, W)> = None;
    while let Some(std::cmp::Reverse((d, x))) = heap.pop() {
        if dist[x] != Some(d) {
            continue;
        }
        if marked[x] {
            match best {
                Some((bx, bd)) if (bd, bx) <= (d, x) => {}
                _ => best = Some((x, d)),
            }
        }
        for &(y, w) in f.neighbors(x) {
            let nd = d.add(w);
            if dist[y].is_none_or(|old| nd < old) {
                dist[y] = Some(nd);
                heap.push(std::cmp::Reverse((nd, y)));
            }
        }
    }
    Ok(best)
}

/// Minimum spanning forest by Kruskal with `(weight, u, v)` lexicographic
/// tie-break, so the result is unique and both sides of every MSF test can
/// agree exactly.
pub fn oracle_msf<W: GroupWeight>(edges: &[WeightedEdge<W>], n: usize) -> Vec<WeightedEdge<W>> {
    let mut sorted: Vec<WeightedEdge<W>> = edges.to_vec();
    sorted.sort_by_key(|e| (e.weight, e.u, e.v));
    sorted.dedup_by_key(|e| (e.u, e.v));
    let mut dsu = Dsu::new(n);
    let mut out = Vec::new();
    for e in sorted {
        if dsu.union(e.u, e.v) {
            out.push(e);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Min, Sum};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_forest(n: usize, extra_gap: usize, seed: u64) -> Forest<i64> {
        // random tree with a few vertices left out so several components exist
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for v in 1..n {
            if v % extra_gap == 0 {
                continue; // start a fresh component
            }
            let p = rng.gen_range(0..v);
            edges.push((p, v, rng.gen_range(1..100i64)));
        }
        Forest::new(n, edges).unwrap()
    }

    #[test]
    fn connected_basics() {
        let single = Forest::<i64>::new(1, []).unwrap();
        assert!(oracle_connected(&single, 0, 0).unwrap());

        let two = Forest::<i64>::new(2, []).unwrap();
        assert!(!oracle_connected(&two, 0, 1).unwrap());
        assert!(oracle_connected(&two, 1, 1).unwrap());

        assert!(oracle_connected(&two, 2, 0).is_err());
    }

    #[test]
    fn path_aggregate_basics() {
        let f = Forest::new(3, [(0, 1, 5i64), (1, 2, 3)]).unwrap();
        assert_eq!(oracle_path_sum(&f, 0, 0).unwrap(), Some(0));
        assert_eq!(oracle_path_sum(&f, 0, 2).unwrap(), Some(8));
        assert_eq!(
            oracle_path_aggregate(&f, 0, 2, Min).unwrap(),
            Some(Min(3))
        );
        assert_eq!(oracle_path_aggregate(&f, 1, 1, Sum).unwrap(), None);
        assert_eq!(
            oracle_path_min(&f, 0, 2).unwrap(),
            Some(WeightedEdge::new(1, 2, 3))
        );
        assert_eq!(oracle_path_min(&f, 2, 2).unwrap(), None);
    }

    #[test]
    fn subtree_basics() {
        // leaf with its only neighbor as parent: nothing strictly inside
        let f = Forest::new(2, [(0, 1, 7i64)]).unwrap();
        assert_eq!(
            oracle_subtree_aggregate(&f, 0, 1, SubtreeContent::Edges, AggKind::Sum).unwrap(),
            Some(0)
        );
        assert_eq!(
            oracle_subtree_aggregate(&f, 0, 1, SubtreeContent::Edges, AggKind::Min).unwrap(),
            None
        );

        // star center with 3 leaves: subtree away from leaf 1 sums the other spokes
        let star = Forest::new(4, [(0, 1, 1i64), (0, 2, 2), (0, 3, 4)]).unwrap();
        assert_eq!(
            oracle_subtree_aggregate(&star, 0, 1, SubtreeContent::Edges, AggKind::Sum).unwrap(),
            Some(6)
        );
        assert!(oracle_subtree_aggregate(&star, 1, 2, SubtreeContent::Edges, AggKind::Sum).is_err());
    }

    #[test]
    fn subtree_vertex_mode() {
        let f = Forest::new(3, [(0, 1, 5i64), (1, 2, 3)])
            .unwrap()
            .with_vertex_weights(vec![10, 20, 40])
            .unwrap();
        // subtree rooted at 1 with parent 0: edge (1,2) plus vertices 1 and 2
        assert_eq!(
            oracle_subtree_aggregate(&f, 1, 0, SubtreeContent::EdgesAndVertices, AggKind::Sum)
                .unwrap(),
            Some(3 + 20 + 40)
        );
    }

    #[test]
    fn lca_basics() {
        let f = Forest::new(4, [(0, 1, 1i64), (1, 2, 1), (1, 3, 1)]).unwrap();
        assert_eq!(oracle_lca(&f, 2, 2, 0).unwrap(), Some(2));
        assert_eq!(oracle_lca(&f, 2, 3, 2).unwrap(), Some(2));
        assert_eq!(oracle_lca(&f, 2, 3, 0).unwrap(), Some(1));
        let two = Forest::<i64>::new(3, [(0, 1, 1)]).unwrap();
        assert_eq!(oracle_lca(&two, 0, 1, 2).unwrap(), None);
    }

    /// LCA by the ancestor definition: deepest common ancestor under root r.
    fn lca_by_ancestors(f: &Forest<i64>, u: usize, v: usize, r: usize) -> Option<usize> {
        let parent = dfs_parents(f, r);
        if parent[u] == usize::MAX || parent[v] == usize::MAX {
            return None;
        }
        let mut anc_u = vec![u];
        let mut x = u;
        while x != r {
            x = parent[x];
            anc_u.push(x);
        }
        let mut x = v;
        loop {
            if anc_u.contains(&x) {
                return Some(x);
            }
            x = parent[x];
        }
    }

    #[test]
    fn lca_definitions_agree() {
        for seed in 0..8 {
            let f = random_forest(25, 9, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
            for _ in 0..60 {
                let (u, v, r) = (
                    rng.gen_range(0..25),
                    rng.gen_range(0..25),
                    rng.gen_range(0..25),
                );
                assert_eq!(
                    oracle_lca(&f, u, v, r).unwrap(),
                    lca_by_ancestors(&f, u, v, r),
                    "u={u} v={v} r={r} seed={seed}"
                );
            }
        }
    }

    #[test]
    fn nearest_marked_basics() {
        let f = Forest::new(3, [(0, 1, 1i64), (1, 2, 1)]).unwrap();
        assert_eq!(oracle_nearest_marked(&f, &[0], 0).unwrap(), Some((0, 0)));
        assert_eq!(oracle_nearest_marked(&f, &[2], 0).unwrap(), Some((2, 2)));
        assert_eq!(oracle_nearest_marked(&f, &[], 0).unwrap(), None);

        let neg = Forest::new(2, [(0, 1, -1i64)]).unwrap();
        assert!(oracle_nearest_marked(&neg, &[0], 1).is_err());
    }

    #[test]
    fn msf_basics() {
        assert!(oracle_msf::<i64>(&[], 4).is_empty());
        let tri = [
            WeightedEdge::new(0, 1, 1i64),
            WeightedEdge::new(1, 2, 2),
            WeightedEdge::new(0, 2, 3),
        ];
        let msf = oracle_msf(&tri, 3);
        assert_eq!(msf, vec![WeightedEdge::new(0, 1, 1), WeightedEdge::new(1, 2, 2)]);
    }

    #[test]
    fn msf_exchange_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 40;
        let edges: Vec<WeightedEdge<i64>> = (0..100)
            .map(|_| {
                let u = rng.gen_range(0..n);
                let v = (u + rng.gen_range(1..n)) % n;
                WeightedEdge::new(u, v, rng.gen_range(1..50))
            })
            .collect();
        let msf = oracle_msf(&edges, n);

        // acyclic and spanning
        let mut dsu = Dsu::new(n);
        for e in &msf {
            assert!(dsu.union(e.u, e.v), "msf edge closes a cycle");
        }
        let mut all = Dsu::new(n);
        for e in &edges {
            all.union(e.u, e.v);
        }
        for u in 0..n {
            for v in 0..n {
                assert_eq!(all.same(u, v), dsu.same(u, v), "spanning mismatch {u} {v}");
            }
        }

        // no improving 1-edge swap: every non-tree edge is at least as heavy
        // as the heaviest tree edge on the cycle it closes
        let forest = Forest::new(
            n,
            msf.iter().map(|e| (e.u, e.v, e.weight)),
        )
        .unwrap();
        for e in &edges {
            if msf.iter().any(|t| t.endpoints() == e.endpoints()) {
                continue;
            }
            if let Some(heaviest) = oracle_path_max(&forest, e.u, e.v).unwrap() {
                assert!(
                    (heaviest.weight, heaviest.u, heaviest.v) <= (e.weight, e.u, e.v),
                    "swap improves: {e:?} vs {heaviest:?}"
                );
            }
        }
    }
}
