//! Plain adjacency-list forests: the input format for builds and the shared
//! ground truth the reference oracles in [`crate::oracle`] walk over.

use crate::algebra::GroupWeight;
use crate::error::{Error, Result};

/// An undirected weighted edge. Stored canonically with `u < v`.
#[derive(Copy, Clone, Eq, PartialEq, Hash, Debug, PartialOrd, Ord)]
pub struct WeightedEdge<W> {
    pub u: usize,
    pub v: usize,
    pub weight: W,
}

impl<W: GroupWeight> WeightedEdge<W> {
    pub fn new(u: usize, v: usize, weight: W) -> Self {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        WeightedEdge { u, v, weight }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }
}

/// An immutable forest over vertices `0..n` with optional vertex weights.
///
/// Cheap to build, trivial to traverse; every reference oracle works on this
/// representation and nothing else.
#[derive(Clone, Debug)]
pub struct Forest<W> {
    n: usize,
    edges: Vec<WeightedEdge<W>>,
    adj: Vec<Vec<(usize, W)>>,
    vertex_weights: Option<Vec<W>>,
}

impl<W: GroupWeight> Forest<W> {
    /// Builds a forest from an edge list. Rejects out-of-range endpoints,
    /// self loops, duplicate edges and cycles.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, W)>) -> Result<Self> {
        let mut f = Forest {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            vertex_weights: None,
        };
        let mut dsu = Dsu::new(n);
        for (u, v, w) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(Error::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !dsu.union(u, v) {
                return Err(Error::Cycle(u, v));
            }
            f.edges.push(WeightedEdge::new(u, v, w));
            f.adj[u].push((v, w));
            f.adj[v].push((u, w));
        }
        f.edges.sort();
        if f.edges.windows(2).any(|p| p[0].endpoints() == p[1].endpoints()) {
            let d = f
                .edges
                .windows(2)
                .find(|p| p[0].endpoints() == p[1].endpoints())
                .unwrap();
            return Err(Error::DuplicateEdge(d[0].u, d[0].v));
        }
        Ok(f)
    }

    /// Attaches per-vertex weights (must cover all `n` vertices).
    pub fn with_vertex_weights(mut self, weights: Vec<W>) -> Result<Self> {
        if weights.len() != self.n {
            return Err(Error::Config(format!(
                "expected {} vertex weights, got {}",
                self.n,
                weights.len()
            )));
        }
        self.vertex_weights = Some(weights);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edges(&self) -> &[WeightedEdge<W>] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, W)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn vertex_weights(&self) -> Option<&[W]> {
        self.vertex_weights.as_deref()
    }

    pub fn vertex_weight(&self, v: usize) -> W {
        self.vertex_weights
            .as_ref()
            .map(|ws| ws[v])
            .unwrap_or_else(W::zero)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|a| a.iter().any(|&(x, _)| x == v))
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<W> {
        self.adj.get(u)?.iter().find(|&&(x, _)| x == v).map(|&(_, w)| w)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v, self.n))
        }
    }
}

/// Small union-find used for input validation and by the Kruskal oracle.
/// Deliberately separate from anything the dynamic structures do.
#[derive(Clone, Debug)]
pub struct Dsu {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `x` and `y` were already in the same set.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (x, y) = (self.find(x), self.find(y));
        if x == y {
            return false;
        }
        let (x, y) = if self.rank[x] < self.rank[y] { (y, x) } else { (x, y) };
        self.parent[y] = x;
        if self.rank[x] == self.rank[y] {
            self.rank[x] += 1;
        }
        true
    }

    pub fn same(&mut self, x: usize, y: usize) -> bool {
        self.find(x) == self.find(y)
    }
}
