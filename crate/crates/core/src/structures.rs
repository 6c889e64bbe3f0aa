//! Scan for pairs of odd cycles in configurations known to rule out
//! strong EFX-orientability: sharing exactly one edge, sharing exactly one
//! vertex, or vertex-disjoint and connected by a path. Each match carries
//! an adversarial valuation supported on the matched structure (all other
//! edges weigh zero).

use serde::Serialize;

use crate::graph::{EdgeSet, Graph};
use crate::valuation::{ratio, AdditiveValuation, AnyValuation, ZeroOneValuation};

/// How two odd cycles relate in a matched forbidden structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum StructureKind {
    /// Exactly one shared edge (and no other shared vertices).
    SharedEdge { edge: usize },
    /// Exactly one shared vertex, edge-disjoint.
    SharedVertex { vertex: usize },
    /// Vertex-disjoint cycles joined by a path; the path's first vertex
    /// lies on the first cycle, the last on the second, and interior
    /// vertices avoid both.
    ConnectedByPath { path: Vec<usize> },
}

/// Two odd cycles in one of the forbidden configurations. Cycles are
/// closed vertex sequences without the repeated endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureMatch {
    pub kind: StructureKind,
    pub cycle1: Vec<usize>,
    pub cycle2: Vec<usize>,
}

impl StructureMatch {
    /// Total edges of the structure (cycles plus connector).
    pub fn edge_count(&self) -> usize {
        let shared = matches!(self.kind, StructureKind::SharedEdge { .. }) as usize;
        let path = match &self.kind {
            StructureKind::ConnectedByPath { path } => path.len() - 1,
            _ => 0,
        };
        self.cycle1.len() + self.cycle2.len() - shared + path
    }
}

/// All simple cycles of length `3..=max_len`, each exactly once, as vertex
/// sequences starting at their minimum vertex with the smaller neighbor
/// second. Deterministic order: by (length, sequence).
pub fn simple_cycles_up_to(g: &Graph, max_len: usize, step_budget: u64) -> Option<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut steps = 0u64;
    let mut path = Vec::new();
    let mut in_path = vec![false; g.vertex_count()];
    for start in 0..g.vertex_count() {
        path.push(start);
        in_path[start] = true;
        if !extend(g, start, max_len, &mut path, &mut in_path, &mut cycles, &mut steps, step_budget)
        {
            return None;
        }
        in_path[start] = false;
        path.pop();
    }
    cycles.sort_by_key(|c| (c.len(), c.clone()));
    Some(cycles)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &Graph,
    start: usize,
    max_len: usize,
    path: &mut Vec<usize>,
    in_path: &mut Vec<bool>,
    cycles: &mut Vec<Vec<usize>>,
    steps: &mut u64,
    budget: u64,
) -> bool {
    let last = *path.last().unwrap();
    for w in g.neighbors(last) {
        *steps += 1;
        if *steps > budget {
            return false;
        }
        if w == start && path.len() >= 3 {
            // Avoid counting each cycle twice (once per direction).
            if path[1] < last {
                cycles.push(path.clone());
            }
            continue;
        }
        // Vertices below the start belong to cycles already rooted there.
        if w <= start || in_path[w] || path.len() == max_len {
            continue;
        }
        path.push(w);
        in_path[w] = true;
        if !extend(g, start, max_len, path, in_path, cycles, steps, budget) {
            return false;
        }
        in_path[w] = false;
        path.pop();
    }
    true
}

fn cycle_edges(g: &Graph, cycle: &[usize]) -> EdgeSet {
    (0..cycle.len())
        .map(|i| {
            g.edge_between(cycle[i], cycle[(i + 1) % cycle.len()])
                .expect("cycle uses graph edges")
        })
        .collect()
}

/// First forbidden structure of at most `max_total_edges` edges, in a
/// deterministic order, or `None` if the bounded scan finds nothing.
/// Returns `Err(())` only when the cycle enumeration exceeds `step_budget`.
pub fn find_forbidden_structure(
    g: &Graph,
    max_total_edges: usize,
    step_budget: u64,
) -> Result<Option<StructureMatch>, ScanAborted> {
    let max_len = max_total_edges.saturating_sub(3).max(3);
    let Some(cycles) = simple_cycles_up_to(g, max_len, step_budget) else {
        return Err(ScanAborted);
    };
    let odd: Vec<(Vec<usize>, EdgeSet)> = cycles
        .into_iter()
        .filter(|c| c.len() % 2 == 1)
        .map(|c| {
            let edges = cycle_edges(g, &c);
            (c, edges)
        })
        .collect();

    for i in 0..odd.len() {
        for j in i + 1..odd.len() {
            let (c1, e1) = &odd[i];
            let (c2, e2) = &odd[j];
            if c1.len() + c2.len() > max_total_edges {
                continue;
            }
            let shared_edges = e1.intersection(*e2);
            let shared_vertices: Vec<usize> =
                c1.iter().filter(|v| c2.contains(v)).copied().collect();
            match (shared_edges.len(), shared_vertices.len()) {
                (1, 2) => {
                    let edge = shared_edges.iter().next().unwrap();
                    return Ok(Some(StructureMatch {
                        kind: StructureKind::SharedEdge { edge },
                        cycle1: c1.clone(),
                        cycle2: c2.clone(),
                    }));
                }
                (0, 1) => {
                    return Ok(Some(StructureMatch {
                        kind: StructureKind::SharedVertex { vertex: shared_vertices[0] },
                        cycle1: c1.clone(),
                        cycle2: c2.clone(),
                    }));
                }
                (0, 0) => {
                    let budget = max_total_edges - c1.len() - c2.len();
                    if let Some(path) = connecting_path(g, c1, c2, budget) {
                        return Ok(Some(StructureMatch {
                            kind: StructureKind::ConnectedByPath { path },
                            cycle1: c1.clone(),
                            cycle2: c2.clone(),
                        }));
                    }
                }
                // Heavier overlaps are outside the known families.
                _ => {}
            }
        }
    }
    Ok(None)
}

/// The bounded cycle scan gave up; the caller should fall back to Unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanAborted;

/// Shortest path from `c1` to `c2` whose interior avoids both cycles, of
/// at most `max_edges` edges. BFS in index order, so deterministic.
fn connecting_path(
    g: &Graph,
    c1: &[usize],
    c2: &[usize],
    max_edges: usize,
) -> Option<Vec<usize>> {
    if max_edges == 0 {
        return None;
    }
    let n = g.vertex_count();
    let mut on1 = vec![false; n];
    let mut on2 = vec![false; n];
    for &v in c1 {
        on1[v] = true;
    }
    for &v in c2 {
        on2[v] = true;
    }
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    let mut sources: Vec<usize> = c1.to_vec();
    sources.sort_unstable();
    for v in sources {
        dist[v] = 0;
        queue.push_back(v);
    }
    while let Some(x) = queue.pop_front() {
        if dist[x] + 1 > max_edges {
            continue;
        }
        for w in g.neighbors(x) {
            if on2[w] {
                let mut path = vec![w, x];
                let mut back = x;
                while parent[back] != usize::MAX {
                    back = parent[back];
                    path.push(back);
                }
                path.reverse();
                return Some(path);
            }
            if !on1[w] && dist[w] == usize::MAX {
                dist[w] = dist[x] + 1;
                parent[w] = x;
                queue.push_back(w);
            }
        }
    }
    None
}

fn rotate_to(cycle: &[usize], start: usize) -> Vec<usize> {
    let pos = cycle.iter().position(|&v| v == start).expect("start lies on cycle");
    let mut out = Vec::with_capacity(cycle.len());
    out.extend_from_slice(&cycle[pos..]);
    out.extend_from_slice(&cycle[..pos]);
    out
}

/// Walk a rotated cycle and pick the edges at positions of the given
/// parity (`0` selects edge 0, 2, 4, ...).
fn alternating_edges(g: &Graph, rotated: &[usize], parity: usize) -> EdgeSet {
    (0..rotated.len())
        .filter(|k| k % 2 == parity)
        .map(|k| {
            g.edge_between(rotated[k], rotated[(k + 1) % rotated.len()])
                .expect("cycle uses graph edges")
        })
        .collect()
}

/// Adversarial valuation for a matched structure, mapped onto the host
/// graph with zeros everywhere else. Search confirms non-orientability for
/// instances within budget; the patterns come from the transformer
/// constructions in [`crate::counterexamples`].
pub fn structure_valuation(g: &Graph, m: &StructureMatch) -> AnyValuation {
    match &m.kind {
        StructureKind::SharedVertex { vertex } => {
            // First cycle: unit edges adjacent to the shared vertex, then
            // alternating. Second cycle: the complementary alternation, a
            // matching that avoids the shared vertex.
            let r1 = rotate_to(&m.cycle1, *vertex);
            let r2 = rotate_to(&m.cycle2, *vertex);
            let ones = alternating_edges(g, &r1, 0).union(alternating_edges(g, &r2, 1));
            AnyValuation::ZeroOne(ZeroOneValuation::ones_on(g, ones))
        }
        StructureKind::SharedEdge { edge } => {
            // Shared edge worth 1/2 to both endpoints; walking away from it
            // along either cycle alternates 1, 0, ..., 0.
            let (p, q) = g.edge(*edge);
            let mut r1 = rotate_to(&m.cycle1, p);
            if r1[1] == q {
                r1[1..].reverse();
            }
            let mut r2 = rotate_to(&m.cycle2, q);
            if r2[1] == p {
                r2[1..].reverse();
            }
            // The closing edge of each rotated walk is the shared edge, so
            // even positions excluding it are exactly the unit edges.
            let ones = alternating_edges(g, &r1, 0)
                .union(alternating_edges(g, &r2, 0))
                .without(*edge);
            let mut triples = Vec::new();
            for e in ones.iter() {
                let (a, b) = g.edge(e);
                triples.push((a, e, ratio(1, 1)));
                triples.push((b, e, ratio(1, 1)));
            }
            triples.push((p, *edge, ratio(1, 2)));
            triples.push((q, *edge, ratio(1, 2)));
            AnyValuation::Additive(
                AdditiveValuation::new(g, triples).expect("pattern weights are valid"),
            )
        }
        StructureKind::ConnectedByPath { path } => {
            let a1 = path[0];
            let a2 = *path.last().unwrap();
            let r1 = rotate_to(&m.cycle1, a1);
            let r2 = rotate_to(&m.cycle2, a2);
            let t = path.len() - 1;
            let path_edges: Vec<usize> = (0..t)
                .map(|k| g.edge_between(path[k], path[k + 1]).expect("path uses graph edges"))
                .collect();
            let mut ones = alternating_edges(g, &r2, 1);
            if t % 2 == 1 {
                // Odd connector: both cycles carry matchings avoiding their
                // attachment; the path alternates 1, 0, ..., 1.
                ones = ones.union(alternating_edges(g, &r1, 1));
                for (k, &e) in path_edges.iter().enumerate() {
                    if k % 2 == 0 {
                        ones.insert(e);
                    }
                }
            } else {
                // Even connector: the first cycle carries unit edges at its
                // attachment; the path alternates 0, 1, ..., 1.
                ones = ones.union(alternating_edges(g, &r1, 0));
                for (k, &e) in path_edges.iter().enumerate() {
                    if k % 2 == 1 {
                        ones.insert(e);
                    }
                }
            }
            AnyValuation::ZeroOne(ZeroOneValuation::ones_on(g, ones))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{check_counterexample, CounterexampleCheck, SearchConfig};

    fn glued_triangles() -> Graph {
        Graph::new(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn cycle_enumeration_counts() {
        // K4: four triangles plus three 4-cycles.
        let cycles = simple_cycles_up_to(&Graph::complete(4), 14, 1 << 20).unwrap();
        assert_eq!(cycles.iter().filter(|c| c.len() == 3).count(), 4);
        assert_eq!(cycles.iter().filter(|c| c.len() == 4).count(), 3);

        let c5 = simple_cycles_up_to(&Graph::cycle(5), 14, 1 << 20).unwrap();
        assert_eq!(c5, vec![vec![0, 1, 2, 3, 4]]);

        // Length bound excludes longer cycles.
        let few = simple_cycles_up_to(&Graph::cycle(7), 5, 1 << 20).unwrap();
        assert!(few.is_empty());
    }

    #[test]
    fn detects_shared_vertex() {
        let m = find_forbidden_structure(&glued_triangles(), 14, 1 << 20)
            .unwrap()
            .expect("glued triangles match");
        assert_eq!(m.kind, StructureKind::SharedVertex { vertex: 2 });
        assert_eq!(m.edge_count(), 6);
    }

    #[test]
    fn detects_shared_edge() {
        let g = Graph::new(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let m = find_forbidden_structure(&g, 14, 1 << 20).unwrap().expect("match");
        assert_eq!(m.kind, StructureKind::SharedEdge { edge: 2 });
    }

    #[test]
    fn detects_path_connection() {
        // Two triangles joined by a bridge.
        let g = Graph::new(
            6,
            [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)],
        )
        .unwrap();
        let m = find_forbidden_structure(&g, 14, 1 << 20).unwrap().expect("match");
        assert_eq!(m.kind, StructureKind::ConnectedByPath { path: vec![2, 3] });
    }

    #[test]
    fn no_match_on_bipartite_or_single_cycle() {
        assert_eq!(find_forbidden_structure(&Graph::cycle(5), 14, 1 << 20).unwrap(), None);
        assert_eq!(
            find_forbidden_structure(&Graph::complete_bipartite(3, 3), 14, 1 << 20).unwrap(),
            None
        );
    }

    #[test]
    fn matched_valuations_are_confirmed_by_search() {
        let hosts = [
            glued_triangles(),
            Graph::new(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap(),
            Graph::new(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]).unwrap(),
            // Triangles joined by a path of length 2.
            Graph::new(
                7,
                [(0, 1), (0, 2), (1, 2), (4, 5), (4, 6), (5, 6), (2, 3), (3, 4)],
            )
            .unwrap(),
            // C5 sharing a vertex with a triangle.
            Graph::new(7, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5), (5, 6), (0, 6)])
                .unwrap(),
        ];
        for g in hosts {
            let m = find_forbidden_structure(&g, 14, 1 << 20).unwrap().expect("match");
            let val = structure_valuation(&g, &m);
            let check = check_counterexample(&g, &val, &SearchConfig::default()).unwrap();
            assert_eq!(check, CounterexampleCheck::Confirmed, "graph {g:?} match {m:?}");
        }
    }
}
