//! The level-replay engine behind builds, batch links and batch cuts.
//!
//! A batch edits the level-0 records of the touched endpoints and then
//! replays the contraction level by level around the *affected* vertices:
//! those whose record at the current level changed, widened to the
//! eligible, not-yet-contracted vertices within two hops (a vertex there
//! may have been unable to contract only because of an affected one).
//! Candidates re-decide the round. Decisions that come out identical drop
//! out of the wave immediately, so the records rewritten per batch stay
//! proportional to what the batch disturbs rather than to forest size.
//!
//! Phases with per-item independence (candidate gathering, selection
//! inputs, contraction parts, payload merges, next-level derivation) run
//! on the current rayon pool once a level is large enough; the reconcile
//! step that commits decisions stays sequential in vertex order, which
//! keeps results identical across thread counts.

use rayon::prelude::*;

use crate::algebra::GroupWeight;
use crate::error::{Error, Result};
use crate::forest::Dsu;

use super::select::{select, CandNbr, SelectInput};
use super::{
    AdjEntry, ClusterKind, Outcome, RcForest, Record, Scheme, UpdateStats, NONE32,
};

/// Below this many items per phase the engine stays sequential.
const PAR_THRESHOLD: usize = 4096;

#[derive(Clone, Copy, Debug)]
pub(crate) struct LinkEdge<W> {
    pub u: u32,
    pub v: u32,
    pub weight: W,
    pub real: Option<(u32, u32)>,
}

/// Children and boundary of one contraction, inline.
#[derive(Clone, Copy, Debug)]
struct Parts {
    children: [u32; 4],
    n_children: u8,
    boundary: [u32; 2],
    n_boundary: u8,
}

impl Parts {
    fn children(&self) -> &[u32] {
        &self.children[..self.n_children as usize]
    }

    fn boundary(&self) -> &[u32] {
        &self.boundary[..self.n_boundary as usize]
    }
}

impl<W: GroupWeight> RcForest<W> {
    /// Inserts a batch of edges. The batch must keep the forest acyclic
    /// and every vertex at degree three or less; on error the forest is
    /// unchanged. Unseen endpoints materialize as new vertices.
    pub fn batch_link(&mut self, edges: &[(usize, usize, W)]) -> Result<UpdateStats> {
        let tagged: Vec<LinkEdge<W>> = edges
            .iter()
            .map(|&(u, v, w)| LinkEdge {
                u: u as u32,
                v: v as u32,
                weight: w,
                real: Some((u.min(v) as u32, u.max(v) as u32)),
            })
            .collect();
        self.batch_link_tagged(&tagged)
    }

    pub(crate) fn batch_link_tagged(&mut self, edges: &[LinkEdge<W>]) -> Result<UpdateStats> {
        self.validate_links(edges)?;
        let stats = self.replay(&[], edges);
        self.last_stats = stats;
        Ok(stats)
    }

    /// Deletes a batch of live edges; on error the forest is unchanged.
    pub fn batch_cut(&mut self, edges: &[(usize, usize)]) -> Result<UpdateStats> {
        let cuts: Vec<(u32, u32)> = edges
            .iter()
            .map(|&(u, v)| (u.min(v) as u32, u.max(v) as u32))
            .collect();
        self.validate_cuts(&cuts)?;
        let stats = self.replay(&cuts, &[]);
        self.last_stats = stats;
        Ok(stats)
    }

    /// Cuts, then links, as two sub-batches. Cut errors abort the whole
    /// call; a link error after valid cuts leaves the cuts applied.
    pub fn batch_update(
        &mut self,
        cuts: &[(usize, usize)],
        links: &[(usize, usize, W)],
    ) -> Result<UpdateStats> {
        let cut_stats = if cuts.is_empty() {
            UpdateStats::default()
        } else {
            self.batch_cut(cuts)?
        };
        let link_stats = if links.is_empty() {
            UpdateStats::default()
        } else {
            self.batch_link(links)?
        };
        let merged = cut_stats.merge(link_stats);
        self.last_stats = merged;
        Ok(merged)
    }

    fn level0_degree(&self, v: u32) -> usize {
        self.hist[v as usize].first().map_or(0, |r| r.deg as usize)
    }

    fn validate_links(&self, edges: &[LinkEdge<W>]) -> Result<()> {
        let mut keys = Vec::with_capacity(edges.len());
        for e in edges {
            if e.u as usize >= self.cap {
                return Err(Error::VertexOutOfRange(e.u as usize, self.cap));
            }
            if e.v as usize >= self.cap {
                return Err(Error::VertexOutOfRange(e.v as usize, self.cap));
            }
            if e.u == e.v {
                return Err(Error::SelfLoop(e.u as usize));
            }
            let key = (e.u.min(e.v), e.u.max(e.v));
            if self.edge_index.contains_key(&key) {
                return Err(Error::DuplicateEdge(key.0 as usize, key.1 as usize));
            }
            keys.push(key);
        }
        keys.sort_unstable();
        if let Some(d) = keys.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::DuplicateEdge(d[0].0 as usize, d[0].1 as usize));
        }
        // degree and cycle checks over the touched vertices only, with a
        // dense scratch keyed by vertex
        let mut touched: Vec<u32> = Vec::with_capacity(edges.len() * 2);
        for e in edges {
            touched.push(e.u);
            touched.push(e.v);
        }
        touched.sort_unstable();
        touched.dedup();
        let slot_of = |v: u32| touched.binary_search(&v).unwrap();
        let mut deg_inc = vec![0usize; touched.len()];
        for e in edges {
            deg_inc[slot_of(e.u)] += 1;
            deg_inc[slot_of(e.v)] += 1;
        }
        for (i, &v) in touched.iter().enumerate() {
            if self.level0_degree(v) + deg_inc[i] > 3 {
                return Err(Error::DegreeExceeded(v as usize, 3));
            }
        }
        // cycle check on component representatives
        let reps: Vec<u32> = if touched.len() >= PAR_THRESHOLD {
            touched
                .par_iter()
                .map(|&v| self.find_representative(v as usize) as u32)
                .collect()
        } else {
            touched
                .iter()
                .map(|&v| self.find_representative(v as usize) as u32)
                .collect()
        };
        let mut root_sorted: Vec<u32> = reps.clone();
        root_sorted.sort_unstable();
        root_sorted.dedup();
        let mut dsu = Dsu::new(root_sorted.len());
        for e in edges {
            let iu = root_sorted
                .binary_search(&reps[slot_of(e.u)])
                .unwrap();
            let iv = root_sorted
                .binary_search(&reps[slot_of(e.v)])
                .unwrap();
            if !dsu.union(iu, iv) {
                return Err(Error::Cycle(e.u as usize, e.v as usize));
            }
        }
        Ok(())
    }

    fn validate_cuts(&self, cuts: &[(u32, u32)]) -> Result<()> {
        for &(u, v) in cuts {
            if u == v || !self.edge_index.contains_key(&(u, v)) {
                return Err(Error::NotAnEdge(u as usize, v as usize));
            }
        }
        let mut keys = cuts.to_vec();
        keys.sort_unstable();
        if let Some(d) = keys.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::NotAnEdge(d[0].0 as usize, d[0].1 as usize));
        }
        Ok(())
    }

    /// The engine. Inputs are pre-validated.
    fn replay(&mut self, cuts: &[(u32, u32)], links: &[LinkEdge<W>]) -> UpdateStats {
        let timing = std::env::var_os("RC_PHASE_TIMING").is_some();
        let mut phase = [0.0f64; 10];
        macro_rules! clock {
            ($slot:expr, $body:expr) => {{
                if timing {
                    let s = std::time::Instant::now();
                    let r = $body;
                    phase[$slot] += s.elapsed().as_secs_f64();
                    r
                } else {
                    $body
                }
            }};
        }
        let mut touched = 0usize;
        let mut tombstoned: Vec<u32> = Vec::new();
        let mut dirty: Vec<u32> = Vec::new();
        let mut needs_parent: Vec<u32> = Vec::new();
        let mut frontier: Vec<u32> = Vec::new();
        // vertices whose pending rake set changed: their next contraction
        // consumes a different child set even if their adjacency records
        // converge, so they stay candidates until a contraction decision
        // re-confirms them
        let mut pending_dirty: std::collections::HashSet<u32> = std::collections::HashSet::new();

        let level0_clock = std::time::Instant::now();
        for &(u, v) in cuts {
            let e = self.edge_index.remove(&(u, v)).unwrap();
            tombstoned.push(e);
            for x in [u, v] {
                let removed = self.hist[x as usize][0].remove_adj_edge(e);
                debug_assert!(removed);
                touched += 1;
                frontier.push(x);
            }
        }
        self.reserve_edges(links.len());
        for l in links {
            for x in [l.u, l.v] {
                if !self.present[x as usize] {
                    self.present[x as usize] = true;
                    self.hist[x as usize] = vec![Record::empty()];
                    touched += 1;
                }
            }
            let e = self.alloc_edge(l.u, l.v, l.weight, l.real);
            self.edge_index.insert((l.u.min(l.v), l.u.max(l.v)), e);
            needs_parent.push(e);
            self.hist[l.u as usize][0].push_adj(AdjEntry { edge: e, other: l.v });
            self.hist[l.v as usize][0].push_adj(AdjEntry { edge: e, other: l.u });
            touched += 2;
            frontier.push(l.u);
            frontier.push(l.v);
        }
        frontier.sort_unstable();
        frontier.dedup();
        if timing {
            phase[0] = level0_clock.elapsed().as_secs_f64();
        }

        let mut t = 0usize;
        let mut levels = 0usize;
        // dense candidate index used by large levels; lazily allocated
        let mut cand_slot: Vec<u32> = Vec::new();
        // pending-dirty vertices park until `t` reaches their standing
        // contraction level, so the loop runs while any remain live
        while !frontier.is_empty()
            || pending_dirty.iter().any(|&w| self.hist[w as usize].len() > t)
        {
            levels += 1;
            let cands = clock!(1, self.gather_candidates(t, &frontier, &pending_dirty));
            let input = clock!(2, self.build_select_input(t, &cands, &mut cand_slot));
            let selected = clock!(3, self.run_selection(t, &input));

            // contraction parts are pure reads; precompute them in
            // parallel and fall back to a fresh computation whenever an
            // earlier revocation in the commit loop disturbed a pending set
            let decide = |i: usize| -> Option<Parts> {
                if selected[i] {
                    Some(self.contraction_parts(cands[i], t))
                } else {
                    None
                }
            };
            let parts_pre: Vec<Option<Parts>> = clock!(4, if cands.len() >= PAR_THRESHOLD {
                (0..cands.len()).into_par_iter().map(decide).collect()
            } else {
                (0..cands.len()).map(decide).collect()
            });

            // commit decisions serially in vertex order: revoke stale
            // futures, apply changed contractions
            let commit_t = std::time::Instant::now();
            let mut contracted = 0usize;
            for (i, &v) in cands.iter().enumerate() {
                let new_outcome = if selected[i] {
                    match input.degs[i] {
                        0 => Outcome::Finalize,
                        1 => Outcome::Rake,
                        2 => Outcome::Compress,
                        _ => unreachable!(),
                    }
                } else {
                    Outcome::Live
                };
                let old_outcome = self.hist[v as usize][t].outcome;
                let parts = match parts_pre[i] {
                    Some(p) if !pending_dirty.contains(&v) => Some(p),
                    Some(_) => Some(self.contraction_parts(v, t)),
                    None => None,
                };
                if old_outcome == new_outcome {
                    match &parts {
                        None => continue, // live stays live
                        Some(p) => {
                            let c = &self.clusters[v as usize];
                            if c.kind == kind_for(new_outcome)
                                && c.level as usize == t + 1
                                && c.children() == p.children()
                                && c.boundary() == p.boundary()
                            {
                                // standing contraction still valid
                                pending_dirty.remove(&v);
                                continue;
                            }
                        }
                    }
                }
                touched += self.revoke_future(v, t, &mut needs_parent, &mut pending_dirty);
                self.hist[v as usize][t].outcome = new_outcome;
                touched += 1;
                if let Some(p) = parts {
                    let kind = kind_for(new_outcome);
                    self.apply_contraction(v, t, kind, &p, &mut needs_parent, &mut pending_dirty);
                    dirty.push(v);
                    pending_dirty.remove(&v);
                    contracted += 1;
                }
            }

            let _ = contracted; // payloads are refreshed level-ordered at the end
            if timing {
                phase[5] += commit_t.elapsed().as_secs_f64();
            }

            // derive next-level records for candidates and their neighbors
            let collect_targets = |&v: &u32| {
                let rec = &self.hist[v as usize][t];
                let mut out = [NONE32; 4];
                out[0] = v;
                for (j, a) in rec.adj().iter().enumerate() {
                    out[j + 1] = a.other;
                }
                out
            };
            let mut targets: Vec<u32> = clock!(6, if cands.len() >= PAR_THRESHOLD {
                cands.par_iter().flat_map_iter(collect_targets).collect()
            } else {
                cands.iter().flat_map(collect_targets).collect()
            });
            if targets.len() >= PAR_THRESHOLD {
                targets.par_sort_unstable();
            } else {
                targets.sort_unstable();
            }
            targets.dedup();
            if targets.last() == Some(&NONE32) {
                targets.pop();
            }

            let derive = |&w: &u32| -> Option<(u32, Record)> {
                let rec = &self.hist[w as usize][t];
                if rec.outcome != Outcome::Live {
                    debug_assert_eq!(self.hist[w as usize].len(), t + 1);
                    return None;
                }
                let mut nrec = Record::empty();
                for a in rec.adj() {
                    let xrec = &self.hist[a.other as usize][t];
                    match xrec.outcome {
                        Outcome::Live => nrec.push_adj(*a),
                        Outcome::Rake => {
                            debug_assert_eq!(xrec.deg, 1);
                            debug_assert_eq!(xrec.adj[0].other, w);
                        }
                        Outcome::Compress => {
                            let far = xrec
                                .adj()
                                .iter()
                                .find(|e| e.other != w)
                                .expect("compress partner")
                                .other;
                            nrec.push_adj(AdjEntry { edge: a.other, other: far });
                        }
                        Outcome::Finalize => unreachable!("finalizing vertex has a neighbor"),
                    }
                }
                Some((w, nrec))
            };
            let derived: Vec<Option<(u32, Record)>> = clock!(7, if targets.len() >= PAR_THRESHOLD {
                targets.par_iter().map(derive).collect()
            } else {
                targets.iter().map(derive).collect()
            });

            let apply_t = std::time::Instant::now();
            let mut next_frontier: Vec<u32> = Vec::new();
            for item in derived.into_iter().flatten() {
                let (w, nrec) = item;
                let h = &mut self.hist[w as usize];
                match h.get(t + 1) {
                    Some(old) if old.adj == nrec.adj && old.deg == nrec.deg => {}
                    Some(old) => {
                        let keep = old.outcome;
                        h[t + 1] = nrec;
                        h[t + 1].outcome = keep;
                        touched += 1;
                        next_frontier.push(w);
                    }
                    None => {
                        h.push(nrec);
                        touched += 1;
                        next_frontier.push(w);
                    }
                }
            }
            if timing {
                phase[8] += apply_t.elapsed().as_secs_f64();
            }
            frontier = next_frontier;
            t += 1;
        }

        // release cut base edges only now; stale ids may appear in records
        // rewritten mid-replay, so slots must not be recycled earlier
        for e in tombstoned {
            if self.base(e).weight < W::zero() {
                self.negative_edges -= 1;
            }
            self.clusters[e as usize] = super::Cluster::vacant();
            self.edge_free.push(e);
        }

        self.fix_parents(&needs_parent);
        clock!(9, self.refresh_upward(dirty));
        if timing {
            eprintln!(
                "phases: level0={:.2} gather={:.2} input={:.2} select={:.2} parts={:.2} \
                 commit={:.2} targets={:.2} derive={:.2} apply={:.2} refresh={:.2}",
                phase[0], phase[1], phase[2], phase[3], phase[4], phase[5], phase[6], phase[7],
                phase[8], phase[9]
            );
        }

        UpdateStats { touched_nodes: touched, levels_replayed: levels }
    }

    /// Affected vertices plus eligible uncontracted vertices within two
    /// hops of them at this level, plus any parked pending-dirty vertex
    /// whose standing contraction sits exactly at this level.
    fn gather_candidates(
        &self,
        t: usize,
        frontier: &[u32],
        pending_dirty: &std::collections::HashSet<u32>,
    ) -> Vec<u32> {
        let expand = |out: &mut Vec<u32>, &a: &u32| {
            out.push(a);
            let consider = |w: u32, out: &mut Vec<u32>| {
                if let Some(rec) = self.hist[w as usize].get(t) {
                    if rec.deg <= 2 && rec.outcome == Outcome::Live {
                        out.push(w);
                    }
                }
            };
            let rec = &self.hist[a as usize][t];
            for e in rec.adj() {
                consider(e.other, out);
                for e2 in self.hist[e.other as usize][t].adj() {
                    consider(e2.other, out);
                }
            }
        };
        let mut cands: Vec<u32> = if frontier.len() >= PAR_THRESHOLD {
            frontier
                .par_iter()
                .fold(Vec::new, |mut acc, a| {
                    expand(&mut acc, a);
                    acc
                })
                .reduce(Vec::new, |mut a, mut b| {
                    if a.len() < b.len() {
                        std::mem::swap(&mut a, &mut b);
                    }
                    a.extend(b);
                    a
                })
        } else {
            let mut acc = Vec::with_capacity(frontier.len() * 4);
            for a in frontier {
                expand(&mut acc, a);
            }
            acc
        };
        for &w in pending_dirty {
            // re-validate exactly at the standing contraction level; while
            // the standing decision is Live it needs no re-examination
            if let Some(rec) = self.hist[w as usize].get(t) {
                if rec.outcome != Outcome::Live {
                    cands.push(w);
                }
            }
        }
        if cands.len() >= PAR_THRESHOLD {
            cands.par_sort_unstable();
        } else {
            cands.sort_unstable();
        }
        cands.dedup();
        cands
    }

    fn build_select_input(&self, t: usize, cands: &[u32], cand_slot: &mut Vec<u32>) -> SelectInput {
        // candidate index lookup: a dense scratch table for big levels, a
        // hash map otherwise
        let big = cands.len() >= PAR_THRESHOLD;
        let mut map: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        if big {
            if cand_slot.is_empty() {
                cand_slot.resize(self.cap, NONE32);
            }
            for (i, &v) in cands.iter().enumerate() {
                cand_slot[v as usize] = i as u32;
            }
        } else {
            map.extend(cands.iter().enumerate().map(|(i, &v)| (v, i as u32)));
        }
        let lookup = |v: u32| -> u32 {
            if big {
                cand_slot[v as usize]
            } else {
                map.get(&v).copied().unwrap_or(NONE32)
            }
        };

        let build_one = |&v: &u32| -> (u8, [CandNbr; 3]) {
            let rec = &self.hist[v as usize][t];
            let mut nbrs = [CandNbr::empty(); 3];
            for (j, a) in rec.adj().iter().enumerate() {
                let xrec = &self.hist[a.other as usize][t];
                let cand = lookup(a.other);
                nbrs[j] = CandNbr {
                    vert: a.other,
                    cand,
                    eligible: xrec.deg <= 2,
                    contracted: cand == NONE32 && xrec.outcome != Outcome::Live,
                };
            }
            (rec.deg, nbrs)
        };
        let rows: Vec<(u8, [CandNbr; 3])> = if big {
            cands.par_iter().map(build_one).collect()
        } else {
            cands.iter().map(build_one).collect()
        };
        if big {
            for &v in cands {
                cand_slot[v as usize] = NONE32;
            }
        }
        let mut input = SelectInput {
            verts: cands.to_vec(),
            degs: Vec::with_capacity(cands.len()),
            nbrs: Vec::with_capacity(cands.len()),
        };
        for (deg, nbrs) in rows {
            input.degs.push(deg);
            input.nbrs.push(nbrs);
        }
        input
    }

    fn run_selection(&self, t: usize, input: &SelectInput) -> Vec<bool> {
        match &self.config.scheme {
            Scheme::Forced(schedule) => {
                if let Some(set) = schedule.get(t) {
                    let chosen: std::collections::HashSet<u32> =
                        set.iter().map(|&v| v as u32).collect();
                    let sel: Vec<bool> = input
                        .verts
                        .iter()
                        .map(|v| chosen.contains(v))
                        .collect();
                    self.check_forced(input, &sel);
                    sel
                } else {
                    select(&Scheme::Deterministic, self.config.seed, t as u32, input)
                }
            }
            s => select(s, self.config.seed, t as u32, input),
        }
    }

    fn check_forced(&self, input: &SelectInput, sel: &[bool]) {
        for (i, &s) in sel.iter().enumerate() {
            if !s {
                continue;
            }
            assert!(input.degs[i] <= 2, "forced vertex {} not eligible", input.verts[i]);
            for n in &input.nbrs[i][..input.degs[i] as usize] {
                assert!(!n.contracted, "forced vertex adjacent to standing contraction");
                if n.cand != NONE32 {
                    assert!(!sel[n.cand as usize], "forced set not independent");
                }
            }
        }
    }

    /// Children and boundary for `v` contracting at level `t`: the edge
    /// clusters of its current adjacency plus the standing unary clusters
    /// raked onto it at earlier levels.
    fn contraction_parts(&self, v: u32, t: usize) -> Parts {
        let rec = &self.hist[v as usize][t];
        let mut parts = Parts {
            children: [NONE32; 4],
            n_children: 0,
            boundary: [NONE32; 2],
            n_boundary: 0,
        };
        for (j, a) in rec.adj().iter().enumerate() {
            parts.children[j] = a.edge;
            parts.boundary[j] = a.other;
        }
        parts.n_children = rec.deg;
        parts.n_boundary = rec.deg;
        for &(id, lvl) in &self.pending[v as usize] {
            if (lvl as usize) < t {
                debug_assert_eq!(self.hist[id as usize].len(), lvl as usize + 1);
                debug_assert_eq!(self.hist[id as usize][lvl as usize].outcome, Outcome::Rake);
                parts.children[parts.n_children as usize] = id;
                parts.n_children += 1;
            }
        }
        parts.children[..parts.n_children as usize].sort_unstable();
        parts
    }

    /// Removes `v`'s history strictly above level `t` and unwinds its old
    /// contraction, if any. Returns the number of records removed.
    fn revoke_future(
        &mut self,
        v: u32,
        t: usize,
        needs_parent: &mut Vec<u32>,
        pending_dirty: &mut std::collections::HashSet<u32>,
    ) -> usize {
        if self.hist[v as usize].last().map(|r| r.outcome) != Some(Outcome::Live) {
            self.revoke_contraction(v, needs_parent, pending_dirty);
        }
        let h = &mut self.hist[v as usize];
        let removed = h.len() - (t + 1);
        h.truncate(t + 1);
        h[t].outcome = Outcome::Live;
        removed
    }

    fn revoke_contraction(
        &mut self,
        v: u32,
        needs_parent: &mut Vec<u32>,
        pending_dirty: &mut std::collections::HashSet<u32>,
    ) {
        let c = self.clusters[v as usize].clone();
        debug_assert!(matches!(
            c.kind,
            ClusterKind::Unary | ClusterKind::Binary | ClusterKind::Nullary
        ));
        for &child in c.children() {
            self.clusters[child as usize].parent = NONE32;
            needs_parent.push(child);
        }
        if c.kind == ClusterKind::Unary {
            // the standing rake disappears from its target's pending set
            let target = c.boundary[0] as usize;
            let lvl = c.level - 1;
            self.pending[target].retain(|&(id, l)| !(id == v && l == lvl));
            pending_dirty.insert(target as u32);
        }
        self.clusters[v as usize] = super::Cluster::vacant();
    }

    fn apply_contraction(
        &mut self,
        v: u32,
        t: usize,
        kind: ClusterKind,
        parts: &Parts,
        needs_parent: &mut Vec<u32>,
        pending_dirty: &mut std::collections::HashSet<u32>,
    ) {
        {
            let c = &mut self.clusters[v as usize];
            *c = super::Cluster::vacant();
            c.kind = kind;
            c.level = t as u32 + 1;
            c.children = parts.children;
            c.n_children = parts.n_children;
            c.boundary = parts.boundary;
            c.n_boundary = parts.n_boundary;
        }
        for &ch in parts.children() {
            self.clusters[ch as usize].parent = v;
        }
        if kind == ClusterKind::Unary {
            // the target's next contraction gains a child; it re-validates
            // when the replay reaches its level
            self.pending[parts.boundary[0] as usize].push((v, t as u32));
            pending_dirty.insert(parts.boundary[0]);
        }
        needs_parent.push(v);
    }

    /// Reattaches parent pointers of clusters whose consumer was not
    /// itself re-contracted: an edge-like cluster is consumed by whichever
    /// boundary vertex contracts first, a unary cluster by its target.
    fn fix_parents(&mut self, needs_parent: &[u32]) {
        for &id in needs_parent {
            let c = &self.clusters[id as usize];
            if c.parent != NONE32
                || matches!(c.kind, ClusterKind::Vacant | ClusterKind::Nullary)
            {
                continue;
            }
            let consumer = match c.kind {
                ClusterKind::Unary => c.boundary[0],
                ClusterKind::Binary | ClusterKind::BaseEdge => {
                    let (b0, b1) = (c.boundary[0], c.boundary[1]);
                    let (r0, r1) = (self.contraction_round(b0), self.contraction_round(b1));
                    debug_assert_ne!(r0, r1, "adjacent vertices contracted the same round");
                    if r0 < r1 {
                        b0
                    } else {
                        b1
                    }
                }
                _ => unreachable!(),
            };
            self.clusters[id as usize].parent = consumer;
            debug_assert!(
                self.clusters[consumer as usize].children().contains(&id),
                "consumer {consumer} missing child {id}"
            );
        }
    }
}

fn kind_for(o: Outcome) -> ClusterKind {
    match o {
        Outcome::Rake => ClusterKind::Unary,
        Outcome::Compress => ClusterKind::Binary,
        Outcome::Finalize => ClusterKind::Nullary,
        Outcome::Live => unreachable!(),
    }
}
