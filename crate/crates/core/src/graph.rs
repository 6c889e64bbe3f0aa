//! Simple undirected graphs with the enumeration and structural
//! primitives the rest of the crate is built on.
//!
//! Vertices are `0..n`, edges carry stable indices `0..m` assigned in
//! construction order. Edge subsets are bitmasks ([`EdgeSet`]), which caps
//! a graph at [`MAX_EDGES`] edges; every algorithm in this crate operates
//! far below that.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Hard cap on edge count so edge subsets fit in a `u64` bitmask.
pub const MAX_EDGES: usize = 64;

/// Guard against absurd vertex counts from untrusted input files.
pub const MAX_VERTICES: usize = 1 << 20;

/// Default size guard for the exact chromatic number solver.
pub const DEFAULT_CHROMATIC_BOUND: usize = 16;

/// Canonical forms are computed by permutation backtracking and store the
/// upper-triangle adjacency in a `u128`, which limits them to 16 vertices.
pub const MAX_CANONICAL_VERTICES: usize = 16;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {v} out of range for graph with {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("edge index {e} out of range for graph with {m} edges")]
    EdgeOutOfRange { e: usize, m: usize },
    #[error("graph has {m} edges, at most {max} supported")]
    TooManyEdges { m: usize, max: usize },
    #[error("graph has {n} vertices, at most {max} supported")]
    TooManyVertices { n: usize, max: usize },
    #[error("edge subset contains a cycle")]
    NotAForest,
    #[error("{what} limited to {max} vertices, graph has {n}")]
    SizeBound {
        what: &'static str,
        n: usize,
        max: usize,
    },
}

/// Set of edge indices of some parent graph, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EdgeSet(u64);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn single(e: usize) -> EdgeSet {
        debug_assert!(e < MAX_EDGES);
        EdgeSet(1 << e)
    }

    /// All edge indices `0..m`.
    pub fn full(m: usize) -> EdgeSet {
        debug_assert!(m <= MAX_EDGES);
        if m == MAX_EDGES {
            EdgeSet(u64::MAX)
        } else {
            EdgeSet((1u64 << m) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> EdgeSet {
        let mut s = EdgeSet::EMPTY;
        for e in indices {
            s.insert(e);
        }
        s
    }

    pub fn from_mask(mask: u64) -> EdgeSet {
        EdgeSet(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, e: usize) {
        debug_assert!(e < MAX_EDGES);
        self.0 |= 1 << e;
    }

    pub fn remove(&mut self, e: usize) {
        self.0 &= !(1 << e);
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_EDGES && self.0 >> e & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & other.0)
    }

    pub fn difference(self, other: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & !other.0)
    }

    pub fn without(self, e: usize) -> EdgeSet {
        EdgeSet(self.0 & !(1 << e))
    }

    pub fn with(self, e: usize) -> EdgeSet {
        EdgeSet(self.0 | 1 << e)
    }

    pub fn is_subset_of(self, other: EdgeSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Edge indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut mask = self.0;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let e = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                Some(e)
            }
        })
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        EdgeSet::from_indices(iter)
    }
}

impl Serialize for EdgeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for EdgeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(deserializer)?;
        let mut s = EdgeSet::EMPTY;
        for e in indices {
            if e >= MAX_EDGES {
                return Err(D::Error::custom(format!("edge index {e} too large")));
            }
            if s.contains(e) {
                return Err(D::Error::custom(format!("duplicate edge index {e}")));
            }
            s.insert(e);
        }
        Ok(s)
    }
}

/// Simple undirected graph: agents are vertices, goods are edges.
///
/// No self-loops, no multi-edges. Stored edge endpoints are normalized to
/// `(min, max)`; edge index `i` is position `i` in the construction list
/// and is stable across all operations on the same value.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n, max: MAX_VERTICES });
        }
        let mut norm = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if u >= n {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            let e = (u.min(v), u.max(v));
            if norm.contains(&e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
            norm.push(e);
        }
        if norm.len() > MAX_EDGES {
            return Err(GraphError::TooManyEdges { m: norm.len(), max: MAX_EDGES });
        }
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in norm.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, edges: norm, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints of edge `e`, normalized `(min, max)`.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { v, n: self.n })
        }
    }

    pub fn check_edge(&self, e: usize) -> Result<(), GraphError> {
        if e < self.edges.len() {
            Ok(())
        } else {
            Err(GraphError::EdgeOutOfRange { e, m: self.edges.len() })
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges incident to `v` as a set.
    pub fn incident_edges(&self, v: usize) -> EdgeSet {
        self.adj[v].iter().map(|&(_, e)| e).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_between(u, v).is_some()
    }

    /// Index of the edge `{u, v}` if present.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        let (short, other) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[short]
            .binary_search_by_key(&other, |&(w, _)| w)
            .ok()
            .map(|i| self.adj[short][i].1)
    }

    /// Given an edge and one endpoint, the other endpoint.
    pub fn other_endpoint(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        debug_assert!(v == a || v == b);
        if v == a {
            b
        } else {
            a
        }
    }

    /// Vertices sharing an edge with `v`. Panics if `v` is out of range.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        assert!(v < self.n, "vertex {v} out of range (n = {})", self.n);
        self.adj[v].iter().map(|&(w, _)| w)
    }

    /// Vertices adjacent to `v` via edges of `h` only.
    pub fn neighbors_in(&self, h: EdgeSet, v: usize) -> BTreeSet<usize> {
        assert!(v < self.n, "vertex {v} out of range (n = {})", self.n);
        self.adj[v]
            .iter()
            .filter(|&&(_, e)| h.contains(e))
            .map(|&(w, _)| w)
            .collect()
    }

    /// True iff no edge of the graph has both endpoints in `s`.
    pub fn is_independent_set(&self, s: &BTreeSet<usize>) -> bool {
        let mut seen = Vec::with_capacity(s.len());
        for &v in s {
            for &u in &seen {
                if self.has_edge(u, v) {
                    return false;
                }
            }
            seen.push(v);
        }
        true
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Every matching (including the empty one), each exactly once, in
    /// ascending bitmask order.
    pub fn enumerate_matchings(&self) -> Matchings {
        let m = self.edges.len();
        let mut conflict = vec![0u64; m];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            for (j, &(x, y)) in self.edges.iter().enumerate() {
                if i != j && (u == x || u == y || v == x || v == y) {
                    conflict[i] |= 1 << j;
                }
            }
        }
        Matchings { next: 0, end: 1u128 << m, conflict }
    }

    /// Every acyclic edge subset (including the empty one), each exactly
    /// once, in ascending bitmask order. Forests are identified with their
    /// edge sets; isolated vertices are not part of a forest.
    pub fn enumerate_forests(&self) -> Forests<'_> {
        Forests { g: self, next: 0, end: 1u128 << self.edges.len(), uf: UnionFind::new(self.n) }
    }

    /// True iff the edge subset contains no cycle.
    pub fn is_acyclic(&self, h: EdgeSet) -> bool {
        let mut uf = UnionFind::new(self.n);
        for e in h.iter() {
            let (u, v) = self.edges[e];
            if !uf.union(u, v) {
                return false;
            }
        }
        true
    }

    /// Connected components of an acyclic edge subset. Each component is a
    /// tree with at least one edge; isolated vertices are excluded.
    pub fn forest_components(&self, h: EdgeSet) -> Result<Vec<TreeComponent>, GraphError> {
        if !self.is_acyclic(h) {
            return Err(GraphError::NotAForest);
        }
        Ok(self.edge_components(h))
    }

    /// Connected components of an arbitrary edge subset, ordered by their
    /// minimum vertex. Isolated vertices are excluded.
    pub fn edge_components(&self, h: EdgeSet) -> Vec<TreeComponent> {
        let mut comp_of = vec![usize::MAX; self.n];
        let mut comps: Vec<TreeComponent> = Vec::new();
        for v in 0..self.n {
            if comp_of[v] != usize::MAX || self.adj[v].iter().all(|&(_, e)| !h.contains(e)) {
                continue;
            }
            let id = comps.len();
            let mut tree = TreeComponent::default();
            let mut queue = vec![v];
            comp_of[v] = id;
            while let Some(x) = queue.pop() {
                tree.vertices.insert(x);
                for &(w, e) in &self.adj[x] {
                    if !h.contains(e) {
                        continue;
                    }
                    tree.edges.insert(e);
                    if comp_of[w] == usize::MAX {
                        comp_of[w] = id;
                        queue.push(w);
                    }
                }
            }
            comps.push(tree);
        }
        comps
    }

    /// A proper 2-coloring if the graph is bipartite. Each connected
    /// component is colored with its lowest-index vertex in class A, which
    /// makes the result unique per component up to the swap.
    pub fn two_coloring(&self) -> Option<Bipartition> {
        self.two_coloring_without(EdgeSet::EMPTY, None)
    }

    /// 2-coloring of the graph minus `excluded` edges. `first_root` is
    /// visited first and placed in class A.
    pub fn two_coloring_without(
        &self,
        excluded: EdgeSet,
        first_root: Option<usize>,
    ) -> Option<Bipartition> {
        let mut side = vec![u8::MAX; self.n];
        let roots = first_root.into_iter().chain(0..self.n);
        for root in roots {
            if side[root] != u8::MAX {
                continue;
            }
            side[root] = 0;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for &(w, e) in &self.adj[x] {
                    if excluded.contains(e) {
                        continue;
                    }
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[x];
                        queue.push_back(w);
                    } else if side[w] == side[x] {
                        return None;
                    }
                }
            }
        }
        Some(Bipartition { side })
    }

    /// Exact chromatic number, guarded by [`DEFAULT_CHROMATIC_BOUND`].
    pub fn chromatic_number(&self) -> Result<usize, GraphError> {
        self.chromatic_number_with_bound(DEFAULT_CHROMATIC_BOUND)
    }

    /// Exact chromatic number via backtracking between a greedy clique
    /// lower bound and a greedy coloring upper bound. Fails loudly when the
    /// graph exceeds `max_n` instead of approximating.
    pub fn chromatic_number_with_bound(&self, max_n: usize) -> Result<usize, GraphError> {
        if self.n > max_n {
            return Err(GraphError::SizeBound { what: "chromatic_number", n: self.n, max: max_n });
        }
        if self.n == 0 {
            return Ok(0);
        }
        if self.edges.is_empty() {
            return Ok(1);
        }
        // Static order: degree descending, index ascending.
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));

        let lower = self.greedy_clique().len().max(2);
        let upper = self.greedy_coloring(&order);
        for k in lower..upper {
            let mut colors = vec![usize::MAX; self.n];
            if self.colorable(k, &order, 0, 0, &mut colors) {
                return Ok(k);
            }
        }
        Ok(upper)
    }

    fn greedy_clique(&self) -> Vec<usize> {
        let mut best = Vec::new();
        for start in 0..self.n {
            let mut clique = vec![start];
            let mut candidates: Vec<usize> = self.neighbors(start).collect();
            candidates.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
            for v in candidates {
                if clique.iter().all(|&u| self.has_edge(u, v)) {
                    clique.push(v);
                }
            }
            if clique.len() > best.len() {
                best = clique;
            }
        }
        best
    }

    fn greedy_coloring(&self, order: &[usize]) -> usize {
        let mut colors = vec![usize::MAX; self.n];
        let mut used = 0;
        for &v in order {
            let mut taken = 0u64;
            for &(w, _) in &self.adj[v] {
                if colors[w] != usize::MAX {
                    taken |= 1 << colors[w];
                }
            }
            let c = (!taken).trailing_zeros() as usize;
            colors[v] = c;
            used = used.max(c + 1);
        }
        used
    }

    fn colorable(
        &self,
        k: usize,
        order: &[usize],
        pos: usize,
        max_used: usize,
        colors: &mut Vec<usize>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        // New colors are introduced in order, killing color-permutation symmetry.
        for c in 0..k.min(max_used + 1) {
            if self.adj[v].iter().any(|&(w, _)| colors[w] == c) {
                continue;
            }
            colors[v] = c;
            if self.colorable(k, order, pos + 1, max_used.max(c + 1), colors) {
                return true;
            }
            colors[v] = usize::MAX;
        }
        false
    }

    /// All articulation points, via DFS low-links.
    pub fn cut_vertices(&self) -> BTreeSet<usize> {
        let mut disc = vec![usize::MAX; self.n];
        let mut low = vec![usize::MAX; self.n];
        let mut cuts = BTreeSet::new();
        let mut timer = 0;
        for root in 0..self.n {
            if disc[root] != usize::MAX {
                continue;
            }
            // Iterative DFS: (vertex, parent edge, next adjacency slot).
            let mut stack = vec![(root, usize::MAX, 0usize)];
            let mut root_children = 0;
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (v, pe, ref mut slot)) = stack.last_mut() {
                if *slot < self.adj[v].len() {
                    let (w, e) = self.adj[v][*slot];
                    *slot += 1;
                    if e == pe {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, e, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if p != root && low[v] >= disc[p] {
                            cuts.insert(p);
                        }
                    }
                }
            }
            if root_children >= 2 {
                cuts.insert(root);
            }
        }
        cuts
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop() {
            for &(w, _) in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push(w);
                }
            }
        }
        count == self.n
    }

    /// Replace edge `e = {u, v}` with a new vertex `w` and edges `{u, w}`,
    /// `{w, v}`. The new edges are appended at the end of the index space;
    /// surviving edges keep their order, and the remap records old index to
    /// new index (`None` for the removed edge).
    pub fn subdivide_edge(&self, e: usize) -> Result<SubdividedEdge, GraphError> {
        self.check_edge(e)?;
        let (u, v) = self.edges[e];
        let w = self.n;
        let mut edges = Vec::with_capacity(self.edges.len() + 1);
        let mut remap = vec![None; self.edges.len()];
        for (i, &pair) in self.edges.iter().enumerate() {
            if i != e {
                remap[i] = Some(edges.len());
                edges.push(pair);
            }
        }
        let first = edges.len();
        edges.push((u, w));
        edges.push((w, v));
        let graph = Graph::new(self.n + 1, edges)?;
        Ok(SubdividedEdge { graph, new_vertex: w, new_edges: [first, first + 1], edge_remap: remap })
    }

    /// Canonical form for isomorphism tests, computed by backtracking over
    /// vertex orderings for the lexicographically largest adjacency
    /// bitstring. Exponential in the worst case; intended for small graphs.
    pub fn canonical_form(&self) -> Result<CanonicalForm, GraphError> {
        if self.n > MAX_CANONICAL_VERTICES {
            return Err(GraphError::SizeBound {
                what: "canonical_form",
                n: self.n,
                max: MAX_CANONICAL_VERTICES,
            });
        }
        let total_bits = self.n * (self.n.saturating_sub(1)) / 2;
        let mut best: Option<u128> = None;
        let mut placed = Vec::with_capacity(self.n);
        self.canonical_rec(&mut placed, 0, 0, total_bits, &mut best);
        Ok(CanonicalForm { n: self.n, bits: best.unwrap_or(0) })
    }

    fn canonical_rec(
        &self,
        placed: &mut Vec<usize>,
        acc: u128,
        bits_used: usize,
        total_bits: usize,
        best: &mut Option<u128>,
    ) {
        if placed.len() == self.n {
            if best.map_or(true, |b| acc > b) {
                *best = Some(acc);
            }
            return;
        }
        let k = placed.len();
        let mut candidates: Vec<(u128, usize)> = (0..self.n)
            .filter(|c| !placed.contains(c))
            .map(|c| {
                let mut group: u128 = 0;
                for &p in placed.iter() {
                    group = group << 1 | u128::from(self.has_edge(c, p));
                }
                (group, c)
            })
            .collect();
        candidates.sort_unstable_by(|a, b| b.cmp(a));
        let new_bits = bits_used + k;
        for (group, c) in candidates {
            let new_acc = acc << k | group;
            if let Some(b) = *best {
                // Compare against the best prefix of the same length.
                let best_prefix = b >> (total_bits - new_bits);
                if new_acc < best_prefix {
                    continue;
                }
            }
            placed.push(c);
            self.canonical_rec(placed, new_acc, new_bits, total_bits, best);
            placed.pop();
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            n: usize,
            edges: &'a [(usize, usize)],
        }
        Doc { n: self.n, edges: &self.edges }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Doc {
            n: usize,
            edges: Vec<(usize, usize)>,
        }
        let doc = Doc::deserialize(deserializer)?;
        Graph::new(doc.n, doc.edges).map_err(D::Error::custom)
    }
}

/// Standard small-graph constructors, mainly for tests and benchmarks.
impl Graph {
    /// Complete graph on `n` vertices, edges in lexicographic order.
    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is valid")
    }

    /// Cycle `0-1-...-(n-1)-0`; the closing edge is last.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let edges = (0..n - 1).map(|i| (i, i + 1)).chain([(0, n - 1)]);
        Graph::new(n, edges).expect("cycle is valid")
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Graph {
        Graph::new(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1))).expect("path is valid")
    }

    /// Complete bipartite graph with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let edges = (0..a).flat_map(move |u| (0..b).map(move |j| (u, a + j)));
        Graph::new(a + b, edges).expect("complete bipartite graph is valid")
    }
}

/// One tree of a forest: its edges plus the vertices they touch.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TreeComponent {
    pub edges: EdgeSet,
    pub vertices: BTreeSet<usize>,
}

/// Proper 2-coloring; class A holds the per-component roots.
#[derive(Clone, Debug)]
pub struct Bipartition {
    side: Vec<u8>,
}

impl Bipartition {
    pub fn in_a(&self, v: usize) -> bool {
        self.side[v] == 0
    }

    pub fn class_a(&self) -> BTreeSet<usize> {
        (0..self.side.len()).filter(|&v| self.side[v] == 0).collect()
    }

    pub fn class_b(&self) -> BTreeSet<usize> {
        (0..self.side.len()).filter(|&v| self.side[v] == 1).collect()
    }
}

/// Result of [`Graph::subdivide_edge`].
#[derive(Clone, Debug)]
pub struct SubdividedEdge {
    pub graph: Graph,
    pub new_vertex: usize,
    pub new_edges: [usize; 2],
    /// Old edge index to new edge index; `None` for the subdivided edge.
    pub edge_remap: Vec<Option<usize>>,
}

/// Isomorphism-invariant key: two graphs are isomorphic iff their
/// canonical forms are equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub n: usize,
    pub bits: u128,
}

/// Lazy stream over all matchings of a graph.
pub struct Matchings {
    next: u128,
    end: u128,
    conflict: Vec<u64>,
}

impl Matchings {
    fn is_matching(&self, mask: u64) -> bool {
        let mut rest = mask;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            if self.conflict[e] & mask != 0 {
                return false;
            }
            rest &= rest - 1;
        }
        true
    }
}

impl Iterator for Matchings {
    type Item = EdgeSet;

    fn next(&mut self) -> Option<EdgeSet> {
        while self.next < self.end {
            let mask = self.next as u64;
            self.next += 1;
            if self.is_matching(mask) {
                return Some(EdgeSet(mask));
            }
        }
        None
    }
}

/// Lazy stream over all forests (acyclic edge subsets) of a graph.
pub struct Forests<'a> {
    g: &'a Graph,
    next: u128,
    end: u128,
    uf: UnionFind,
}

impl<'a> Iterator for Forests<'a> {
    type Item = EdgeSet;

    fn next(&mut self) -> Option<EdgeSet> {
        while self.next < self.end {
            let mask = EdgeSet(self.next as u64);
            self.next += 1;
            self.uf.reset();
            let mut acyclic = true;
            for e in mask.iter() {
                let (u, v) = self.g.edges[e];
                if !self.uf.union(u, v) {
                    acyclic = false;
                    break;
                }
            }
            if acyclic {
                return Some(mask);
            }
        }
        None
    }
}

/// Union-find with path halving, resettable so enumeration loops can reuse
/// the allocation.
#[derive(Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    touched: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect(), touched: Vec::new() }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.parent[v] = v;
        }
        self.touched.clear();
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false iff `u` and `v` were already in the same set.
    pub(crate) fn union(&mut self, u: usize, v: usize) -> bool {
        let ru = self.find(u);
        let rv = self.find(v);
        if ru == rv {
            return false;
        }
        self.parent[ru] = rv;
        self.touched.push(ru);
        self.touched.push(rv);
        true
    }
}
