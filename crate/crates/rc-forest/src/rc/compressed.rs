//! Compressed path trees: given a set of marked vertices, a tree of size
//! proportional to the marked count whose pairwise path extrema equal the
//! original forest's.
//!
//! The construction walks the marked subtree twice after the usual
//! ancestor marking: a bottom-up count of marked vertices per cluster, a
//! top-down count of marked vertices beyond each boundary, then a
//! bottom-up merge that decides which junction vertices the output keeps
//! (marked vertices, plus Steiner branch vertices where at least three
//! directions hold marks), emits a compressed edge between consecutive
//! kept vertices, and dangles the unfinished segments toward boundaries
//! with marks beyond them. Every merge is constant work per marked
//! cluster. The same structure drives the offline bottleneck answers for
//! batch path minima/maxima and the incremental MSF edge selection.

use std::collections::HashMap;

use crate::algebra::GroupWeight;
use crate::error::{Error, Result};

use super::payload::{ext_max, ext_min, Ext};
use super::queries::{PathExtreme, QueryStats};
use super::{ClusterKind, RcForest, NONE32};

/// Whether compressed edges carry the lightest or the heaviest original
/// edge of the segment they contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremeMode {
    Min,
    Max,
}

/// One compressed edge: a contracted segment of the original forest
/// between two kept vertices. `extremal` is the lightest/heaviest real
/// edge on the segment, `None` when the segment consists solely of
/// identity-weight chain edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompressedEdge<W> {
    pub a: usize,
    pub b: usize,
    pub extremal: Option<PathExtreme<W>>,
}

/// The compressed path tree over a marked vertex set.
#[derive(Clone, Debug)]
pub struct CompressedPathTree<W> {
    /// Marked vertices plus Steiner branch vertices, ascending.
    pub vertices: Vec<usize>,
    pub edges: Vec<CompressedEdge<W>>,
}

impl<W: GroupWeight> CompressedPathTree<W> {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// How far a direction's dangling Steiner fragment reaches, seen from the
/// contracting representative.
#[derive(Clone, Copy, Debug)]
enum Reach<W> {
    /// First kept vertex inward, with the extremal of the segment from
    /// the representative to it.
    Inside(u32, Ext<W>),
    /// No kept vertex on this side of the cluster; the segment continues
    /// through the given boundary slot.
    Out(usize, Ext<W>),
}

#[derive(Clone, Copy, Debug)]
struct Sketch<W> {
    /// Per boundary slot: first kept vertex walking inward from that
    /// boundary, with the segment extremal. Populated exactly when the
    /// cluster holds marks and marks exist beyond that boundary.
    toward: [Option<(u32, Ext<W>)>; 2],
}

struct Dir {
    marks: u32,
    child: u32,
    /// Parent boundary slot, or `usize::MAX` for a hanging unary child.
    slot: usize,
    inside: u32,
}

impl<W: GroupWeight> RcForest<W> {
    /// Builds the compressed path tree over `marked`, preserving pairwise
    /// path minima (`ExtremeMode::Min`) or maxima (`Max`).
    pub fn compressed_path_tree(
        &self,
        marked: &[usize],
        mode: ExtremeMode,
    ) -> Result<CompressedPathTree<W>> {
        self.compressed_path_tree_with_stats(marked, mode).map(|(t, _)| t)
    }

    pub fn compressed_path_tree_with_stats(
        &self,
        marked: &[usize],
        mode: ExtremeMode,
    ) -> Result<(CompressedPathTree<W>, QueryStats)> {
        if !self.config.store.path_extrema {
            return Err(Error::AggregateDisabled("path-extrema"));
        }
        if marked.is_empty() {
            return Err(Error::EmptyMarkedSet);
        }
        let mut mark_set: Vec<usize> = Vec::with_capacity(marked.len());
        for &v in marked {
            if v >= self.cap {
                return Err(Error::VertexOutOfRange(v, self.cap));
            }
            mark_set.push(v);
        }
        mark_set.sort_unstable();
        mark_set.dedup();
        let is_marked = |v: u32| mark_set.binary_search(&(v as usize)).is_ok();

        let mut kept: Vec<u32> = Vec::new();
        let mut edges: Vec<CompressedEdge<W>> = Vec::new();

        // isolated or absent marked vertices become lone kept vertices
        let mut seeds: Vec<u32> = Vec::new();
        for &v in &mark_set {
            match self.seed_of_compressed(v) {
                Some(c) => seeds.push(c),
                None => kept.push(v as u32),
            }
        }
        let sweep = self.build_sweep(seeds);
        let stats = QueryStats { marked_clusters: sweep.len() };
        let n = sweep.len();
        if n == 0 {
            kept.sort_unstable();
            return Ok((
                CompressedPathTree {
                    vertices: kept.into_iter().map(|v| v as usize).collect(),
                    edges,
                },
                stats,
            ));
        }

        // bottom-up marked counts per sweep cluster
        let mut cnt = vec![0u32; n];
        for i in (0..n).rev() {
            cnt[i] += u32::from(is_marked(sweep.ids[i]));
            let p = sweep.parent[i];
            if p != NONE32 {
                let c = cnt[i];
                cnt[p as usize] += c;
            }
        }
        let cnt_of = |c: u32| -> u32 {
            match sweep.index.get(&c) {
                Some(&i) => cnt[i as usize],
                None => 0,
            }
        };
        // top-down counts beyond each boundary
        let out_cnt = self.sweep_out(
            &sweep,
            &|_, c| cnt_of(c),
            &|_, v| u32::from(is_marked(v)),
            &|a, b| a + b,
            0u32,
        );

        let compose = |a: Ext<W>, b: Ext<W>| match mode {
            ExtremeMode::Min => ext_min(a, b),
            ExtremeMode::Max => ext_max(a, b),
        };
        let path_ext = |e: u32| match mode {
            ExtremeMode::Min => self.path_min[e as usize],
            ExtremeMode::Max => self.path_max[e as usize],
        };
        let to_extreme = |ext: Ext<W>| {
            ext.map(|(w, u, x)| PathExtreme { u: u as usize, v: x as usize, weight: w })
        };

        // bottom-up merge, children first
        let mut sketch: Vec<Sketch<W>> = vec![Sketch { toward: [None, None] }; n];
        for i in (0..n).rev() {
            let id = sweep.ids[i];
            let cl = &self.clusters[id as usize];
            let v = id;

            let mut dirs: Vec<Dir> = Vec::with_capacity(4);
            for (slot, &b) in cl.boundary().iter().enumerate() {
                let e = self.edge_child_at(cl, b).expect("boundary edge child");
                let inside = cnt_of(e);
                dirs.push(Dir { marks: inside + out_cnt[i][slot], child: e, slot, inside });
                // marks beyond this boundary reach marks inside the edge
                // child without passing the representative: hand the
                // child's outer dangle straight up
                if out_cnt[i][slot] > 0 && inside > 0 {
                    let cc = &self.clusters[e as usize];
                    let outer = cc.boundary_index(b).expect("shared boundary");
                    let handed = sketch[sweep.dense(e) as usize].toward[outer]
                        .expect("marks inside and beyond imply an outer dangle");
                    sketch[i].toward[slot] = Some(handed);
                }
            }
            for &ch in cl.children() {
                if self.clusters[ch as usize].kind == ClusterKind::Unary {
                    let inside = cnt_of(ch);
                    dirs.push(Dir { marks: inside, child: ch, slot: usize::MAX, inside });
                }
            }
            let v_marked = is_marked(v);
            let total: u32 = u32::from(v_marked) + dirs.iter().map(|d| d.marks).sum::<u32>();
            let active: Vec<usize> = (0..dirs.len())
                .filter(|&d| dirs[d].marks > 0 && total > dirs[d].marks)
                .collect();
            let v_kept = v_marked || active.len() >= 3;

            let reaches: Vec<Reach<W>> = active
                .iter()
                .map(|&d| {
                    let d = &dirs[d];
                    if d.inside > 0 {
                        let ci = sweep.dense(d.child) as usize;
                        let cc = &self.clusters[d.child as usize];
                        let v_slot = cc
                            .boundary_index(v)
                            .expect("child is adjacent to its representative");
                        let (k, ext) = sketch[ci].toward[v_slot]
                            .expect("active direction with inner marks must dangle inward");
                        Reach::Inside(k, ext)
                    } else {
                        Reach::Out(d.slot, path_ext(d.child))
                    }
                })
                .collect();

            if v_kept {
                kept.push(v);
                for r in &reaches {
                    match *r {
                        Reach::Inside(k, ext) => edges.push(CompressedEdge {
                            a: v as usize,
                            b: k as usize,
                            extremal: to_extreme(ext),
                        }),
                        Reach::Out(slot, ext) => {
                            sketch[i].toward[slot] = Some((v, ext));
                        }
                    }
                }
            } else {
                match reaches.as_slice() {
                    [] => {}
                    &[r1, r2] => match (r1, r2) {
                        (Reach::Inside(k1, e1), Reach::Inside(k2, e2)) => {
                            edges.push(CompressedEdge {
                                a: k1 as usize,
                                b: k2 as usize,
                                extremal: to_extreme(compose(e1, e2)),
                            });
                        }
                        (Reach::Inside(k, e1), Reach::Out(slot, e2))
                        | (Reach::Out(slot, e2), Reach::Inside(k, e1)) => {
                            sketch[i].toward[slot] = Some((k, compose(e1, e2)));
                        }
                        (Reach::Out(..), Reach::Out(..)) => {
                            unreachable!("a marked-subtree cluster holds at least one mark")
                        }
                    },
                    other => {
                        unreachable!("unmarked junction with {} active directions", other.len())
                    }
                }
            }
        }

        kept.sort_unstable();
        kept.dedup();
        let vertices = kept.into_iter().map(|v| v as usize).collect();
        edges.sort_unstable_by_key(|e| (e.a.min(e.b), e.a.max(e.b)));
        Ok((CompressedPathTree { vertices, edges }, stats))
    }

    fn seed_of_compressed(&self, v: usize) -> Option<u32> {
        (self.is_present(v) && self.clusters[v].kind != ClusterKind::Vacant).then_some(v as u32)
    }

    /// Batched path minima: the lightest edge on each `u..v` path,
    /// answered offline on the compressed path tree of the endpoint set.
    /// `None` for `u == v`, for disconnected pairs, and for paths carrying
    /// only identity-weight chain edges.
    pub fn batch_path_min(
        &self,
        pairs: &[(usize, usize)],
    ) -> Result<Vec<Option<PathExtreme<W>>>> {
        self.batch_path_extreme_with_stats(pairs, ExtremeMode::Min).map(|(a, _)| a)
    }

    /// Batched path maxima; comparisons reversed relative to
    /// [`RcForest::batch_path_min`].
    pub fn batch_path_max(
        &self,
        pairs: &[(usize, usize)],
    ) -> Result<Vec<Option<PathExtreme<W>>>> {
        self.batch_path_extreme_with_stats(pairs, ExtremeMode::Max).map(|(a, _)| a)
    }

    pub fn batch_path_extreme_with_stats(
        &self,
        pairs: &[(usize, usize)],
        mode: ExtremeMode,
    ) -> Result<(Vec<Option<PathExtreme<W>>>, QueryStats)> {
        for &(u, v) in pairs {
            if u >= self.cap || v >= self.cap {
                return Err(Error::VertexOutOfRange(u.max(v), self.cap));
            }
        }
        let marked: Vec<usize> = pairs
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        if marked.is_empty() {
            return Ok((Vec::new(), QueryStats::default()));
        }
        let (tree, stats) = self.compressed_path_tree_with_stats(&marked, mode)?;
        let answers = offline_bottleneck(&tree, pairs, mode);
        Ok((answers, stats))
    }
}

/// Offline bottleneck answers on a small tree: edges join components in
/// extremal order (descending for minima, ascending for maxima, identity
/// segments first either way), and a query resolves the moment its
/// endpoints meet, at which point the joining edge is the path's extremal.
pub(crate) fn offline_bottleneck<W: GroupWeight>(
    tree: &CompressedPathTree<W>,
    pairs: &[(usize, usize)],
    mode: ExtremeMode,
) -> Vec<Option<PathExtreme<W>>> {
    let index: HashMap<usize, usize> =
        tree.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = tree.vertices.len();

    let mut order: Vec<usize> = (0..tree.edges.len()).collect();
    let key = |i: &usize| tree.edges[*i].extremal.map(|x| (x.weight, x.u, x.v));
    match mode {
        // descending, identity segments first: the joining edge is the path min
        ExtremeMode::Min => {
            order.sort_by(|a, b| match (key(a), key(b)) {
                (None, None) => a.cmp(b),
                (None, Some(_)) => std::cmp::Ordering::Less,
                (Some(_), None) => std::cmp::Ordering::Greater,
                (Some(x), Some(y)) => y.cmp(&x),
            });
        }
        // ascending, identity segments first: the joining edge is the path max
        ExtremeMode::Max => {
            order.sort_by(|a, b| match (key(a), key(b)) {
                (None, None) => a.cmp(b),
                (None, Some(_)) => std::cmp::Ordering::Less,
                (Some(_), None) => std::cmp::Ordering::Greater,
                (Some(x), Some(y)) => x.cmp(&y),
            });
        }
    }

    let mut answers: Vec<Option<PathExtreme<W>>> = vec![None; pairs.len()];
    let mut resolved: Vec<bool> = vec![false; pairs.len()];
    let mut parent: Vec<usize> = (0..n).collect();
    // queries bucketed at both endpoints; resolved on the union that joins them
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut open = 0usize;
    for (qi, &(u, v)) in pairs.iter().enumerate() {
        if u == v {
            continue;
        }
        let (Some(&du), Some(&dv)) = (index.get(&u), index.get(&v)) else {
            continue;
        };
        if du == dv {
            continue;
        }
        buckets[du].push(qi);
        buckets[dv].push(qi);
        open += 1;
    }
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for ei in order {
        if open == 0 {
            break;
        }
        let e = &tree.edges[ei];
        let (ra, rb) = (find(&mut parent, index[&e.a]), find(&mut parent, index[&e.b]));
        debug_assert_ne!(ra, rb, "compressed tree has a cycle");
        // small-to-large bucket merge
        let (big, small) = if buckets[ra].len() >= buckets[rb].len() { (ra, rb) } else { (rb, ra) };
        parent[small] = big;
        let pending = std::mem::take(&mut buckets[small]);
        for qi in pending {
            if resolved[qi] {
                continue;
            }
            let (u, v) = pairs[qi];
            let (du, dv) = (index[&u], index[&v]);
            if find(&mut parent, du) == find(&mut parent, dv) {
                answers[qi] = e.extremal;
                resolved[qi] = true;
                open -= 1;
            } else {
                buckets[big].push(qi);
            }
        }
    }
    answers
}
