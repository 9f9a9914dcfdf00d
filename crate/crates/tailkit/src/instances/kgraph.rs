//! k-uniform hypergraphs on small vertex sets: canonical labeling by
//! exhaustive permutation, isomorphism tests, copy enumeration and the
//! small brute-force invariants (automorphisms, chromatic number).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex-count guard for exhaustive permutation canonicalization.
pub const CANONICAL_VERTEX_LIMIT: usize = 8;

/// A k-uniform hypergraph. Vertices are 0..vertices; isolated vertices are
/// allowed and count toward the vertex total.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KGraph {
    k: usize,
    vertices: usize,
    edges: Vec<Vec<usize>>,
}

impl KGraph {
    pub fn new(k: usize, vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidGraph(format!("uniformity k={k} must be ≥ 2")));
        }
        let mut norm: Vec<Vec<usize>> = Vec::with_capacity(edges.len());
        for e in edges {
            let mut e = e;
            e.sort_unstable();
            if e.len() != k || e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!(
                    "edge {e:?} is not a {k}-subset"
                )));
            }
            if e.iter().any(|&v| v >= vertices) {
                return Err(Error::InvalidGraph(format!(
                    "edge {e:?} uses a vertex ≥ {vertices}"
                )));
            }
            norm.push(e);
        }
        norm.sort();
        if norm.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }
        Ok(Self {
            k,
            vertices,
            edges: norm,
        })
    }

    /// Complete k-graph on v vertices.
    pub fn complete(k: usize, v: usize) -> Result<Self> {
        let edges = k_subsets(v, k);
        Self::new(k, v, edges)
    }

    /// Path with `len` edges (k = 2).
    pub fn path(len: usize) -> Result<Self> {
        let edges = (0..len).map(|i| vec![i, i + 1]).collect();
        Self::new(2, len + 1, edges)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn has_edge(&self, e: &[usize]) -> bool {
        self.edges.binary_search_by(|cand| cand.as_slice().cmp(e)).is_ok()
    }

    /// Lexicographically smallest edge list over all vertex relabelings.
    pub fn canonical_form(&self) -> Result<Vec<Vec<usize>>> {
        if self.vertices > CANONICAL_VERTEX_LIMIT {
            return Err(Error::SearchGuard(format!(
                "canonical labeling limited to {CANONICAL_VERTEX_LIMIT} vertices, got {}",
                self.vertices
            )));
        }
        let mut best: Option<Vec<Vec<usize>>> = None;
        for perm in permutations(self.vertices) {
            let mut mapped: Vec<Vec<usize>> = self
                .edges
                .iter()
                .map(|e| {
                    let mut img: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
                    img.sort_unstable();
                    img
                })
                .collect();
            mapped.sort();
            if best.as_ref().is_none_or(|b| &mapped < b) {
                best = Some(mapped);
            }
        }
        Ok(best.unwrap_or_default())
    }

    pub fn is_isomorphic(&self, other: &KGraph) -> Result<bool> {
        if self.k != other.k
            || self.vertices != other.vertices
            || self.edges.len() != other.edges.len()
        {
            return Ok(false);
        }
        let mut deg_a = degree_multiset(self);
        let mut deg_b = degree_multiset(other);
        deg_a.sort_unstable();
        deg_b.sort_unstable();
        if deg_a != deg_b {
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }

    /// Number of vertex permutations fixing the edge set.
    pub fn automorphism_count(&self) -> Result<u64> {
        if self.vertices > CANONICAL_VERTEX_LIMIT {
            return Err(Error::SearchGuard(format!(
                "automorphism count limited to {CANONICAL_VERTEX_LIMIT} vertices"
            )));
        }
        let mut count = 0u64;
        for perm in permutations(self.vertices) {
            let mut mapped: Vec<Vec<usize>> = self
                .edges
                .iter()
                .map(|e| {
                    let mut img: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
                    img.sort_unstable();
                    img
                })
                .collect();
            mapped.sort();
            if mapped == self.edges {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Distinct edge-set images of this graph under bijections of its own
    /// vertex set; one entry per copy of the graph on a fixed v-set.
    pub fn placement_patterns(&self) -> Result<Vec<Vec<Vec<usize>>>> {
        if self.vertices > CANONICAL_VERTEX_LIMIT {
            return Err(Error::SearchGuard(
                "placement patterns limited to 8 vertices".into(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for perm in permutations(self.vertices) {
            let mut mapped: Vec<Vec<usize>> = self
                .edges
                .iter()
                .map(|e| {
                    let mut img: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
                    img.sort_unstable();
                    img
                })
                .collect();
            mapped.sort();
            seen.insert(mapped);
        }
        // BTreeSet keeps the pattern order deterministic across processes
        Ok(seen.into_iter().collect())
    }

    /// Chromatic number by backtracking (graphs only, k = 2).
    pub fn chromatic_number(&self) -> Result<usize> {
        if self.k != 2 {
            return Err(Error::Domain(
                "chromatic number implemented for k = 2 only".into(),
            ));
        }
        if self.edges.is_empty() {
            return Ok(if self.vertices == 0 { 0 } else { 1 });
        }
        let adj: Vec<Vec<usize>> = {
            let mut adj = vec![Vec::new(); self.vertices];
            for e in &self.edges {
                adj[e[0]].push(e[1]);
                adj[e[1]].push(e[0]);
            }
            adj
        };
        fn feasible(adj: &[Vec<usize>], colors: usize) -> bool {
            fn go(adj: &[Vec<usize>], colors: usize, assign: &mut Vec<usize>, v: usize) -> bool {
                if v == adj.len() {
                    return true;
                }
                for c in 0..colors {
                    if adj[v].iter().all(|&u| u >= v || assign[u] != c) {
                        assign[v] = c;
                        if go(adj, colors, assign, v + 1) {
                            return true;
                        }
                    }
                }
                false
            }
            go(adj, colors, &mut vec![usize::MAX; adj.len()], 0)
        }
        for c in 2..=self.vertices {
            if feasible(&adj, c) {
                return Ok(c);
            }
        }
        Ok(self.vertices)
    }

    /// Copies of this graph inside `host`: distinct pairs (vertex subset,
    /// edge subset of host) isomorphic to self, with isolated vertices of
    /// self occupying host vertices.
    pub fn copies_in(&self, host: &KGraph) -> Result<Vec<GraphCopy>> {
        if self.k != host.k {
            return Err(Error::InvalidGraph("uniformity mismatch".into()));
        }
        if self.vertices > host.vertices {
            return Ok(Vec::new());
        }
        let patterns = self.placement_patterns()?;
        let mut out = Vec::new();
        for w in k_subsets(host.vertices, self.vertices) {
            for pat in &patterns {
                let mapped: Vec<Vec<usize>> = pat
                    .iter()
                    .map(|e| {
                        let mut img: Vec<usize> = e.iter().map(|&v| w[v]).collect();
                        img.sort_unstable();
                        img
                    })
                    .collect();
                if mapped.iter().all(|e| host.has_edge(e)) {
                    let mut edges = mapped;
                    edges.sort();
                    out.push(GraphCopy {
                        vertices: w.clone(),
                        edges,
                    });
                }
            }
        }
        Ok(out)
    }

    /// True when every copy of `self` in `host` is induced: its edge set
    /// equals all host edges inside its vertex set.
    pub fn all_copies_induced_in(&self, host: &KGraph) -> Result<bool> {
        for copy in self.copies_in(host)? {
            let induced: Vec<Vec<usize>> = host
                .edges
                .iter()
                .filter(|e| e.iter().all(|v| copy.vertices.contains(v)))
                .cloned()
                .collect();
            if induced != copy.edges {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A concrete copy of a pattern graph inside a host: the host vertices it
/// occupies and the host edges it uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphCopy {
    pub vertices: Vec<usize>,
    pub edges: Vec<Vec<usize>>,
}

/// All k-subsets of {0..n−1} in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // rightmost position that can still advance
        let mut i = k as isize - 1;
        while i >= 0 && cur[i as usize] == i as usize + n - k {
            i -= 1;
        }
        if i < 0 {
            return out;
        }
        let i = i as usize;
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Colex rank of a sorted k-subset: Σ C(c_i, i+1). Independent of n.
pub fn subset_rank(subset: &[usize]) -> u32 {
    let mut rank = 0u64;
    for (i, &c) in subset.iter().enumerate() {
        rank += crate::numeric::binomial_u64(c as u64, i as u64 + 1);
    }
    rank as u32
}

fn degree_multiset(g: &KGraph) -> Vec<usize> {
    let mut deg = vec![0usize; g.vertices];
    for e in &g.edges {
        for &v in e {
            deg[v] += 1;
        }
    }
    deg
}

/// All permutations of 0..n (n ≤ 8 in practice), by Heap's algorithm.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    fn heap(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(items, k - 1, out);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    if n == 0 {
        out.push(Vec::new());
    } else {
        heap(&mut items, n, &mut out);
    }
    out
}
