//! Ternarization: translating updates on an arbitrary-degree forest into
//! updates on a maintained degree-3 *shadow* forest.
//!
//! Every real vertex `v < n` owns a chain of dummy vertices connected by
//! identity-weight edges; each real edge `(v, w)` is carried by one
//! weighted edge between a dummy owned by `v` and a dummy owned by `w`.
//! Connectivity, path sums, subtree aggregates and (owner-mapped) LCAs on
//! the shadow forest agree with the real forest, so the degree-3 machinery
//! in [`crate::rc`] serves arbitrary degree unchanged.

use std::collections::HashMap;

use crate::algebra::GroupWeight;
use crate::error::{Error, Result};

/// One edge of the shadow forest. `real` carries the originating real edge
/// for weighted edges and is `None` for identity-weight chain edges.
#[derive(Copy, Clone, Eq, PartialEq, Debug)]
pub struct ShadowEdge<W> {
    pub u: usize,
    pub v: usize,
    pub weight: W,
    pub real: Option<(usize, usize)>,
}

/// The shadow-forest updates produced for one batch of real updates.
#[derive(Clone, Debug)]
pub struct EdgeDelta<W> {
    pub adds: Vec<ShadowEdge<W>>,
    pub deletes: Vec<(usize, usize)>,
    /// Dummies allocated by this batch (now live).
    pub new_dummies: Vec<usize>,
    /// Dummies released by this batch (now degree 0 and recycled).
    pub freed_dummies: Vec<usize>,
}

impl<W> Default for EdgeDelta<W> {
    fn default() -> Self {
        EdgeDelta {
            adds: Vec::new(),
            deletes: Vec::new(),
            new_dummies: Vec::new(),
            freed_dummies: Vec::new(),
        }
    }
}

#[derive(Copy, Clone, Debug)]
struct Slot<W> {
    owner: u32,
    prev: Option<u32>,
    next: Option<u32>,
    cross: Option<(u32, W)>,
}

impl<W> Slot<W> {
    fn vacant(owner: u32) -> Self {
        Slot { owner, prev: None, next: None, cross: None }
    }
}

/// Chain state for one forest: `3n - 2` vertex slots, a free list, per-real
/// chain tails, a cursor for never-used dummies, and the pair table mapping
/// each live real edge to the dummies that carry it.
pub struct Ternarizer<W> {
    n: usize,
    slots: Vec<Slot<W>>,
    tails: Vec<u32>,
    freed: Vec<u32>,
    cursor: usize,
    /// (min real, max real) -> (dummy owned by min, dummy owned by max)
    pairs: HashMap<(usize, usize), (u32, u32)>,
}

impl<W: GroupWeight> Ternarizer<W> {
    /// A ternarizer for real vertices `0..n`, with room for `2n - 2`
    /// dummies (`3n - 2` shadow ids in total; the bound is forced by the
    /// fact that a forest has at most `n - 1` edges).
    pub fn new(n: usize) -> Self {
        let cap = Self::shadow_capacity_for(n);
        let mut slots = Vec::with_capacity(cap);
        for v in 0..cap {
            slots.push(Slot::vacant(if v < n { v as u32 } else { u32::MAX }));
        }
        Ternarizer {
            n,
            slots,
            tails: (0..n as u32).collect(),
            freed: Vec::new(),
            cursor: n,
            pairs: HashMap::new(),
        }
    }

    fn shadow_capacity_for(n: usize) -> usize {
        if n == 0 { 0 } else { 3 * n - 2 }
    }

    /// Number of shadow vertex ids, i.e. `3n - 2`.
    pub fn shadow_capacity(&self) -> usize {
        self.slots.len()
    }

    pub fn real_count(&self) -> usize {
        self.n
    }

    pub fn is_real(&self, x: usize) -> bool {
        x < self.n
    }

    pub fn is_live_dummy(&self, x: usize) -> bool {
        x >= self.n && x < self.slots.len() && self.slots[x].owner != u32::MAX
    }

    /// The real vertex owning the chain that contains `x`; identity on
    /// real vertices.
    pub fn owner(&self, x: usize) -> Result<usize> {
        if x < self.n {
            return Ok(x);
        }
        if self.is_live_dummy(x) {
            Ok(self.slots[x].owner as usize)
        } else {
            Err(Error::UnallocatedDummy(x))
        }
    }

    /// The dummy owned by `v` that carries the live real edge `(v, toward)`.
    pub fn entry_dummy(&self, v: usize, toward: usize) -> Result<usize> {
        let key = (v.min(toward), v.max(toward));
        let &(d_min, d_max) = self.pairs.get(&key).ok_or(Error::NotAnEdge(v, toward))?;
        Ok(if v == key.0 { d_min as usize } else { d_max as usize })
    }

    pub fn has_real_edge(&self, u: usize, v: usize) -> bool {
        self.pairs.contains_key(&(u.min(v), u.max(v)))
    }

    pub fn live_real_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.keys().copied()
    }

    fn free_dummy_count(&self) -> usize {
        self.freed.len() + (self.slots.len() - self.cursor)
    }

    fn alloc(&mut self, owner: usize) -> u32 {
        let d = if let Some(d) = self.freed.pop() {
            d
        } else {
            let d = self.cursor as u32;
            self.cursor += 1;
            d
        };
        self.slots[d as usize] = Slot::vacant(owner as u32);
        d
    }

    /// Translates a batch of real edge insertions. Exactly three shadow
    /// adds per input edge: one identity edge extending each endpoint's
    /// chain and one weighted edge joining the two fresh dummies.
    pub fn ternarize_adds(&mut self, adds: &[(usize, usize, W)]) -> Result<EdgeDelta<W>> {
        for &(u, v, _) in adds {
            if u >= self.n {
                return Err(Error::VertexOutOfRange(u, self.n));
            }
            if v >= self.n {
                return Err(Error::VertexOutOfRange(v, self.n));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if self.has_real_edge(u, v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        let mut batch_pairs: Vec<(usize, usize)> =
            adds.iter().map(|&(u, v, _)| (u.min(v), u.max(v))).collect();
        batch_pairs.sort_unstable();
        if batch_pairs.windows(2).any(|p| p[0] == p[1]) {
            let d = batch_pairs.windows(2).find(|p| p[0] == p[1]).unwrap()[0];
            return Err(Error::DuplicateEdge(d.0, d.1));
        }
        if self.free_dummy_count() < 2 * adds.len() {
            return Err(Error::CapacityExhausted(self.slots.len()));
        }

        let mut delta = EdgeDelta::default();
        for &(u, v, w) in adds {
            let du = self.append_dummy(u, &mut delta);
            let dv = self.append_dummy(v, &mut delta);
            self.slots[du as usize].cross = Some((dv, w));
            self.slots[dv as usize].cross = Some((du, w));
            delta.adds.push(ShadowEdge {
                u: du as usize,
                v: dv as usize,
                weight: w,
                real: Some((u.min(v), u.max(v))),
            });
            let key = (u.min(v), u.max(v));
            let value = if u < v { (du, dv) } else { (dv, du) };
            self.pairs.insert(key, value);
        }
        Ok(delta)
    }

    fn append_dummy(&mut self, real: usize, delta: &mut EdgeDelta<W>) -> u32 {
        let d = self.alloc(real);
        let tail = self.tails[real];
        self.slots[d as usize].prev = Some(tail);
        self.slots[tail as usize].next = Some(d);
        self.tails[real] = d;
        delta.adds.push(ShadowEdge {
            u: tail as usize,
            v: d as usize,
            weight: W::zero(),
            real: None,
        });
        delta.new_dummies.push(d as usize);
        d
    }

    /// Translates a batch of real edge deletions. Each input edge removes
    /// its weighted shadow edge plus the chain edges around the two carrier
    /// dummies (at most five deletes in total), and each contiguous run of
    /// removed dummies inside a chain is spliced shut with at most one
    /// identity edge.
    pub fn ternarize_deletes(&mut self, deletes: &[(usize, usize)]) -> Result<EdgeDelta<W>> {
        let mut keys = Vec::with_capacity(deletes.len());
        for &(u, v) in deletes {
            let key = (u.min(v), u.max(v));
            if !self.pairs.contains_key(&key) {
                return Err(Error::NotAnEdge(u, v));
            }
            keys.push(key);
        }
        keys.sort_unstable();
        if keys.windows(2).any(|p| p[0] == p[1]) {
            let d = keys.windows(2).find(|p| p[0] == p[1]).unwrap()[0];
            return Err(Error::NotAnEdge(d.0, d.1));
        }

        let mut delta = EdgeDelta::default();
        let mut marked: Vec<u32> = Vec::with_capacity(2 * keys.len());
        let mut owners: Vec<usize> = Vec::with_capacity(2 * keys.len());
        for &key in &keys {
            let (d_min, d_max) = self.pairs.remove(&key).unwrap();
            delta.deletes.push((d_min as usize, d_max as usize));
            for d in [d_min, d_max] {
                marked.push(d);
                owners.push(self.slots[d as usize].owner as usize);
            }
        }
        let mark_set: std::collections::HashSet<u32> = marked.iter().copied().collect();
        owners.sort_unstable();
        owners.dedup();

        // sweep each affected chain once, splicing out runs of marked dummies
        for &v in &owners {
            let mut x = self.slots[v].next;
            while let Some(d) = x {
                if !mark_set.contains(&d) {
                    x = self.slots[d as usize].next;
                    continue;
                }
                let seg_start = d;
                let left = self.slots[seg_start as usize].prev.unwrap();
                let mut seg_end = seg_start;
                delta.deletes.push((left as usize, seg_start as usize));
                while let Some(nx) = self.slots[seg_end as usize].next {
                    if mark_set.contains(&nx) {
                        delta.deletes.push((seg_end as usize, nx as usize));
                        seg_end = nx;
                    } else {
                        break;
                    }
                }
                let right = self.slots[seg_end as usize].next;
                match right {
                    Some(r) => {
                        delta.deletes.push((seg_end as usize, r as usize));
                        delta.adds.push(ShadowEdge {
                            u: left as usize,
                            v: r as usize,
                            weight: W::zero(),
                            real: None,
                        });
                        self.slots[left as usize].next = Some(r);
                        self.slots[r as usize].prev = Some(left);
                    }
                    None => {
                        self.slots[left as usize].next = None;
                        self.tails[v] = left;
                    }
                }
                // release the segment
                let mut cur = seg_start;
                loop {
                    let nx = self.slots[cur as usize].next;
                    self.slots[cur as usize] = Slot::vacant(u32::MAX);
                    self.freed.push(cur);
                    delta.freed_dummies.push(cur as usize);
                    if cur == seg_end {
                        break;
                    }
                    cur = nx.unwrap();
                }
                x = right;
            }
        }
        Ok(delta)
    }

    /// Text dump of every non-empty chain, one real vertex per line:
    /// `v: d1 d2 d3`. Stable across runs; used by golden tests.
    pub fn dump_chains(&self) -> String {
        let mut out = String::new();
        for v in 0..self.n {
            if self.slots[v].next.is_none() {
                continue;
            }
            out.push_str(&format!("{v}:"));
            let mut x = self.slots[v].next;
            while let Some(d) = x {
                out.push_str(&format!(" {d}"));
                x = self.slots[d as usize].next;
            }
            out.push('\n');
        }
        out
    }

    /// All current shadow edges (chain edges and weighted carrier edges).
    pub fn shadow_edges(&self) -> Vec<ShadowEdge<W>> {
        let mut out = Vec::new();
        for x in 0..self.slots.len() {
            if x >= self.n && self.slots[x].owner == u32::MAX {
                continue;
            }
            if let Some(nx) = self.slots[x].next {
                out.push(ShadowEdge { u: x, v: nx as usize, weight: W::zero(), real: None });
            }
            if let Some((p, w)) = self.slots[x].cross {
                if x < p as usize {
                    let a = self.slots[x].owner as usize;
                    let b = self.slots[p as usize].owner as usize;
                    out.push(ShadowEdge {
                        u: x,
                        v: p as usize,
                        weight: w,
                        real: Some((a.min(b), a.max(b))),
                    });
                }
            }
        }
        out
    }

    /// Degree of a shadow vertex in the shadow forest.
    pub fn shadow_degree(&self, x: usize) -> usize {
        let s = &self.slots[x];
        usize::from(s.prev.is_some())
            + usize::from(s.next.is_some())
            + usize::from(s.cross.is_some())
    }

    /// `(allocated, recycled, never_used)` dummy counts; the three always
    /// sum to `2n - 2`.
    pub fn dummy_accounting(&self) -> (usize, usize, usize) {
        let never = self.slots.len() - self.cursor;
        let recycled = self.freed.len();
        let allocated = (self.cursor - self.n) - recycled;
        (allocated, recycled, never)
    }
}

#[path = "ternary/wrapper.rs"]
mod wrapper;
pub use wrapper::TernaryForest;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::Forest;
    use crate::oracle::{oracle_lca, oracle_path_sum};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn shadow_forest(t: &Ternarizer<i64>) -> Forest<i64> {
        Forest::new(
            t.shadow_capacity(),
            t.shadow_edges().into_iter().map(|e| (e.u, e.v, e.weight)),
        )
        .unwrap()
    }

    #[test]
    fn empty_batches() {
        let mut t = Ternarizer::<i64>::new(5);
        assert!(t.ternarize_adds(&[]).unwrap().adds.is_empty());
        assert!(t.ternarize_deletes(&[]).unwrap().deletes.is_empty());
    }

    #[test]
    fn single_add_shape() {
        let mut t = Ternarizer::<i64>::new(3);
        let delta = t.ternarize_adds(&[(1, 2, 5)]).unwrap();
        assert_eq!(delta.adds.len(), 3);
        let d1 = delta.adds[0].v;
        let d2 = delta.adds[1].v;
        assert_eq!(delta.adds[0], ShadowEdge { u: 1, v: d1, weight: 0, real: None });
        assert_eq!(delta.adds[1], ShadowEdge { u: 2, v: d2, weight: 0, real: None });
        assert_eq!(delta.adds[2], ShadowEdge { u: d1, v: d2, weight: 5, real: Some((1, 2)) });
        assert_eq!(t.owner(d1).unwrap(), 1);
        assert_eq!(t.owner(d2).unwrap(), 2);
        assert_eq!(t.owner(1).unwrap(), 1);
        assert_eq!(t.entry_dummy(1, 2).unwrap(), d1);
        assert_eq!(t.entry_dummy(2, 1).unwrap(), d2);
        assert!(t.entry_dummy(0, 1).is_err());
        assert!(t.owner(t.shadow_capacity() - 1).is_err());
    }

    #[test]
    fn single_add_then_delete_frees_chains() {
        let mut t = Ternarizer::<i64>::new(3);
        let added = t.ternarize_adds(&[(1, 2, 5)]).unwrap();
        let d1 = added.adds[0].v;
        let d2 = added.adds[1].v;
        let delta = t.ternarize_deletes(&[(1, 2)]).unwrap();
        // five-edge bound collapses to three on a one-edge chain
        assert!(delta.deletes.len() <= 5);
        assert!(delta.deletes.contains(&(d1.min(d2), d1.max(d2))) || delta.deletes.contains(&(d2, d1)) || delta.deletes.contains(&(d1, d2)));
        assert!(delta.adds.is_empty());
        assert_eq!(t.dump_chains(), "");
        let (alloc, _, _) = t.dummy_accounting();
        assert_eq!(alloc, 0);
        // tails reset: a fresh add chains directly off the real vertices again
        let re = t.ternarize_adds(&[(1, 2, 7)]).unwrap();
        assert_eq!(re.adds[0].u, 1);
        assert_eq!(re.adds[1].u, 2);
    }

    #[test]
    fn star_entry_dummies_distinct() {
        let mut t = Ternarizer::<i64>::new(8);
        let adds: Vec<(usize, usize, i64)> = (1..7).map(|leaf| (0, leaf, leaf as i64)).collect();
        t.ternarize_adds(&adds).unwrap();
        let mut entries: Vec<usize> = (1..7).map(|leaf| t.entry_dummy(0, leaf).unwrap()).collect();
        for &d in &entries {
            assert_eq!(t.owner(d).unwrap(), 0);
        }
        entries.sort_unstable();
        entries.dedup();
        assert_eq!(entries.len(), 6);
        // every shadow vertex keeps degree <= 3
        for x in 0..t.shadow_capacity() {
            assert!(t.shadow_degree(x) <= 3);
        }
    }

    #[test]
    fn entry_dummies_are_cross_adjacent() {
        let mut t = Ternarizer::<i64>::new(20);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut edges = Vec::new();
        for v in 1..20usize {
            let p = rng.gen_range(0..v);
            edges.push((p, v, rng.gen_range(1..50i64)));
        }
        t.ternarize_adds(&edges).unwrap();
        let f = shadow_forest(&t);
        for &(u, v, w) in &edges {
            let du = t.entry_dummy(u, v).unwrap();
            let dv = t.entry_dummy(v, u).unwrap();
            assert_eq!(f.edge_weight(du, dv), Some(w));
        }
    }

    /// Random add/delete churn: bounds, degree cap, free-list conservation
    /// and path-sum preservation against the DFS oracle.
    #[test]
    fn random_churn_preserves_path_sums() {
        let n = 60;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut t = Ternarizer::<i64>::new(n);
        let mut real_edges: Vec<(usize, usize, i64)> = Vec::new();
        let dsu_edges = |edges: &Vec<(usize, usize, i64)>| {
            Forest::new(n, edges.iter().copied()).unwrap()
        };

        for round in 0..12 {
            // grow: random acyclic adds
            let real = dsu_edges(&real_edges);
            let mut dsu = crate::forest::Dsu::new(n);
            for &(u, v, _) in &real_edges {
                dsu.union(u, v);
            }
            let mut adds = Vec::new();
            for _ in 0..10 {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v && !dsu.same(u, v) {
                    dsu.union(u, v);
                    adds.push((u, v, rng.gen_range(1..100i64)));
                }
            }
            drop(real);
            let delta = t.ternarize_adds(&adds).unwrap();
            assert_eq!(delta.adds.len(), 3 * adds.len(), "exactly 3 adds per edge");
            real_edges.extend(adds.iter().copied());

            // shrink: delete a random subset
            let del_count = real_edges.len().min(rng.gen_range(0..6));
            let mut dels = Vec::new();
            for _ in 0..del_count {
                let i = rng.gen_range(0..real_edges.len());
                let (u, v, _) = real_edges.swap_remove(i);
                dels.push((u, v));
            }
            let delta = t.ternarize_deletes(&dels).unwrap();
            assert!(delta.deletes.len() <= 5 * dels.len(), "five-delete bound");
            assert!(delta.adds.len() <= 2 * dels.len(), "two-splice bound");

            for x in 0..t.shadow_capacity() {
                assert!(t.shadow_degree(x) <= 3, "degree bound at {x}");
            }
            let (a, r, nv) = t.dummy_accounting();
            assert_eq!(a + r + nv, 2 * n - 2, "free-list conservation");

            // shadow path sums match real path sums for all live pairs
            let real = dsu_edges(&real_edges);
            let shadow = shadow_forest(&t);
            for _ in 0..40 {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                assert_eq!(
                    oracle_path_sum(&real, u, v).unwrap(),
                    oracle_path_sum(&shadow, u, v).unwrap(),
                    "path sum mismatch round {round} pair ({u},{v})"
                );
            }
        }
    }

    #[test]
    fn owner_of_shadow_lca_matches_real_lca() {
        let n = 30;
        for seed in 0..6 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut t = Ternarizer::<i64>::new(n);
            let mut edges = Vec::new();
            for v in 1..n {
                if v % 11 == 0 {
                    continue;
                }
                // skewed attachment creates high-degree hubs
                let p = rng.gen_range(0..=(v / 3).min(v - 1));
                edges.push((p, v, rng.gen_range(1..9i64)));
            }
            t.ternarize_adds(&edges).unwrap();
            let real = Forest::new(n, edges.iter().copied()).unwrap();
            let shadow = shadow_forest(&t);
            for _ in 0..40 {
                let (u, v, r) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                let real_lca = oracle_lca(&real, u, v, r).unwrap();
                let shadow_lca = oracle_lca(&shadow, u, v, r).unwrap();
                assert_eq!(
                    real_lca,
                    shadow_lca.map(|c| t.owner(c).unwrap()),
                    "seed {seed} ({u},{v},{r})"
                );
            }
        }
    }

    #[test]
    fn capacity_and_duplicate_errors() {
        let mut t = Ternarizer::<i64>::new(2);
        t.ternarize_adds(&[(0, 1, 1)]).unwrap();
        assert_eq!(
            t.ternarize_adds(&[(1, 0, 2)]).unwrap_err(),
            Error::DuplicateEdge(0, 1)
        );
        // capacity: n=2 has 2n-2 = 2 dummies, already used by the one edge
        let mut t2 = Ternarizer::<i64>::new(3);
        t2.ternarize_adds(&[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert!(matches!(
            t2.ternarize_adds(&[(0, 2, 1)]),
            Err(Error::CapacityExhausted(_)) | Err(Error::DuplicateEdge(..))
        ));
        assert_eq!(t2.ternarize_deletes(&[(0, 2)]).unwrap_err(), Error::NotAnEdge(0, 2));
    }

    #[test]
    fn golden_chain_dump() {
        let mut t = Ternarizer::<i64>::new(4);
        t.ternarize_adds(&[(0, 1, 3), (0, 2, 4), (0, 3, 5)]).unwrap();
        // chain layout is allocation order: dummies 4.. appended at tails
        assert_eq!(t.dump_chains(), "0: 4 6 8\n1: 5\n2: 7\n3: 9\n");
        t.ternarize_deletes(&[(0, 2)]).unwrap();
        assert_eq!(t.dump_chains(), "0: 4 8\n1: 5\n3: 9\n");
    }
}
