//! Exhaustive EFX-orientation search with sound pruning, plus the 0-1
//! brute-force oracle built on top of it.
//!
//! Soundness of nonexistence verdicts is the point of this module: a
//! partial assignment is only cut when no extension can repair it, the
//! node budget produces a distinct error rather than a fake exhaustion
//! result, and every returned witness is re-checked with the
//! definition-literal verifier.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeSet, Graph};
use crate::valuation::{Valuation, ZeroOneValuation};
use crate::verify::{verify_efx, Orientation};

/// Default guard on the orientation space: `2^m` leaves.
pub const DEFAULT_SEARCH_EDGE_BOUND: usize = 24;

/// Default guard for [`exists_efx_for_all_01`]: `4^m` valuations times
/// `2^m` orientations.
pub const DEFAULT_ORACLE_EDGE_BOUND: usize = 8;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("graph has {m} edges, search limited to {max}")]
    TooManyEdges { m: usize, max: usize },
    #[error("node budget of {budget} exhausted after {nodes} nodes")]
    BudgetExhausted { budget: u64, nodes: u64 },
    #[error("graph has {m} edges, 0-1 oracle limited to {max}")]
    OracleBound { m: usize, max: usize },
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub max_edges: usize,
    pub node_budget: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_edges: DEFAULT_SEARCH_EDGE_BOUND, node_budget: None }
    }
}

impl SearchConfig {
    pub fn with_budget(budget: u64) -> Self {
        SearchConfig { node_budget: Some(budget), ..Default::default() }
    }
}

/// What the search concluded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Found(Orientation),
    /// The whole orientation space was covered: every leaf was either
    /// checked or below a sound prune.
    ExhaustedNone,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
    #[serde(with = "duration_millis")]
    pub elapsed: Duration,
}

mod duration_millis {
    use super::Duration;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u128(d.as_millis())
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub result: SearchResult,
    pub stats: SearchStats,
}

struct SearchState<'a, V: Valuation> {
    g: &'a Graph,
    val: &'a V,
    heads: Vec<usize>,
    bundles: Vec<EdgeSet>,
    /// Incident edges of each vertex not yet assigned a head.
    undecided: Vec<usize>,
    nodes: u64,
    prunes: u64,
    budget: Option<u64>,
    budget_used: Option<&'a AtomicU64>,
}

impl<'a, V: Valuation> SearchState<'a, V> {
    fn new(g: &'a Graph, val: &'a V, budget: Option<u64>, shared: Option<&'a AtomicU64>) -> Self {
        SearchState {
            g,
            val,
            heads: vec![usize::MAX; g.edge_count()],
            bundles: vec![EdgeSet::EMPTY; g.vertex_count()],
            undecided: (0..g.vertex_count()).map(|v| g.degree(v)).collect(),
            nodes: 0,
            prunes: 0,
            budget,
            budget_used: shared,
        }
    }

    fn charge_node(&mut self) -> Result<(), SearchError> {
        self.nodes += 1;
        let total = match self.budget_used {
            Some(shared) => shared.fetch_add(1, Ordering::Relaxed) + 1,
            None => self.nodes,
        };
        if let Some(budget) = self.budget {
            if total > budget {
                return Err(SearchError::BudgetExhausted { budget, nodes: total });
            }
        }
        Ok(())
    }

    /// Apply `e -> head` and report whether the position is already dead.
    ///
    /// The prune rule: some vertex `j` holds at least two edges and a
    /// neighbor `i` with edge `ij` in `X_j` has all of its incident edges
    /// decided and values `ij` above its own final bundle. No extension
    /// alters any quantity in that condition, so cutting is sound. Only
    /// pairs whose enabling event is this assignment need rechecking.
    fn assign(&mut self, e: usize, head: usize) -> bool {
        let tail = self.g.other_endpoint(e, head);
        self.heads[e] = head;
        self.bundles[head].insert(e);
        self.undecided[head] -= 1;
        self.undecided[tail] -= 1;

        if self.bundles[head].len() >= 2 {
            for e2 in self.bundles[head].iter() {
                let i = self.g.other_endpoint(e2, head);
                if self.undecided[i] == 0
                    && self.val.edge_value(i, e2) > self.val.value(i, self.bundles[i])
                {
                    return false;
                }
            }
        }
        for w in [head, tail] {
            if self.undecided[w] != 0 {
                continue;
            }
            let own = self.val.value(w, self.bundles[w]);
            for e2 in self.g.incident_edges(w).iter() {
                let j = self.heads[e2];
                if j == usize::MAX || j == w {
                    continue;
                }
                if self.bundles[j].len() >= 2 && self.val.edge_value(w, e2) > own {
                    return false;
                }
            }
        }
        true
    }

    fn unassign(&mut self, e: usize, head: usize) {
        let tail = self.g.other_endpoint(e, head);
        self.heads[e] = usize::MAX;
        self.bundles[head].remove(e);
        self.undecided[head] += 1;
        self.undecided[tail] += 1;
    }

    /// DFS over edges `from..m` in index order, lower endpoint first.
    fn dfs(&mut self, from: usize) -> Result<Option<Vec<usize>>, SearchError> {
        if from == self.g.edge_count() {
            return Ok(Some(self.heads.clone()));
        }
        let (u, v) = self.g.edge(from);
        for head in [u, v] {
            self.charge_node()?;
            if self.assign(from, head) {
                if let Some(found) = self.dfs(from + 1)? {
                    return Ok(Some(found));
                }
            } else {
                self.prunes += 1;
            }
            self.unassign(from, head);
        }
        Ok(None)
    }
}

/// Decide whether `g` has an EFX orientation under `val` by exhaustive
/// search. Edges are assigned in index order with the lower endpoint tried
/// first, so both the `Found` witness (the lexicographically least EFX
/// orientation) and `ExhaustedNone` are reproducible.
pub fn find_efx_orientation<V: Valuation>(
    g: &Graph,
    val: &V,
    config: &SearchConfig,
) -> Result<SearchOutcome, SearchError> {
    let m = g.edge_count();
    if m > config.max_edges {
        return Err(SearchError::TooManyEdges { m, max: config.max_edges });
    }
    let start = Instant::now();
    let mut state = SearchState::new(g, val, config.node_budget, None);
    let found = state.dfs(0)?;
    let stats = SearchStats { nodes: state.nodes, prunes: state.prunes, elapsed: start.elapsed() };
    let result = match found {
        Some(heads) => {
            let o = Orientation::new(g, heads).expect("search only assigns endpoints");
            assert!(verify_efx(g, val, &o).verdict, "search returned a non-EFX orientation");
            SearchResult::Found(o)
        }
        None => SearchResult::ExhaustedNone,
    };
    Ok(SearchOutcome { result, stats })
}

/// Parallel variant: the first `prefix_depth` edge heads are fixed per
/// subtree and subtrees run concurrently in prefix order. The witness is
/// identical to the sequential search (lexicographically least). With a
/// node budget the total is tracked globally, so which subtree trips it
/// can vary across runs; the Found/ExhaustedNone outcome does not.
pub fn find_efx_orientation_parallel<V: Valuation + Sync>(
    g: &Graph,
    val: &V,
    config: &SearchConfig,
    prefix_depth: usize,
) -> Result<SearchOutcome, SearchError> {
    let m = g.edge_count();
    if m > config.max_edges {
        return Err(SearchError::TooManyEdges { m, max: config.max_edges });
    }
    let depth = prefix_depth.min(m);
    let start = Instant::now();
    let used = AtomicU64::new(0);
    let nodes = AtomicU64::new(0);
    let prunes = AtomicU64::new(0);

    let subtree = |prefix: u64| -> Result<Option<Vec<usize>>, SearchError> {
        let mut state = SearchState::new(g, val, config.node_budget, Some(&used));
        let mut alive = true;
        for e in 0..depth {
            let (u, v) = g.edge(e);
            // Ascending prefix index must follow the DFS order, where the
            // first edge is the most significant decision.
            let head = if prefix >> (depth - 1 - e) & 1 == 0 { u } else { v };
            state.charge_node()?;
            if !state.assign(e, head) {
                state.prunes += 1;
                alive = false;
                break;
            }
        }
        let found = if alive { state.dfs(depth)? } else { None };
        nodes.fetch_add(state.nodes, Ordering::Relaxed);
        prunes.fetch_add(state.prunes, Ordering::Relaxed);
        Ok(found)
    };

    let first = (0..1u64 << depth)
        .into_par_iter()
        .map(subtree)
        .find_first(|r| !matches!(r, Ok(None)));

    let stats = SearchStats {
        nodes: nodes.load(Ordering::Relaxed),
        prunes: prunes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    };
    let result = match first {
        None => SearchResult::ExhaustedNone,
        Some(Err(e)) => return Err(e),
        Some(Ok(None)) => unreachable!("filtered by find_first predicate"),
        Some(Ok(Some(heads))) => {
            let o = Orientation::new(g, heads).expect("search only assigns endpoints");
            assert!(verify_efx(g, val, &o).verdict, "search returned a non-EFX orientation");
            SearchResult::Found(o)
        }
    };
    Ok(SearchOutcome { result, stats })
}

/// Verdict of the 0-1 brute-force oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Oracle01 {
    /// Every additive 0-1 valuation admits an EFX orientation.
    Yes,
    /// The first failing valuation in code order.
    No(ZeroOneValuation),
}

/// Brute-force check over all `4^m` 0-1 valuations, each decided by
/// exhaustive search over all `2^m` orientations.
pub fn exists_efx_for_all_01(g: &Graph) -> Result<Oracle01, SearchError> {
    exists_efx_for_all_01_with_bound(g, DEFAULT_ORACLE_EDGE_BOUND)
}

pub fn exists_efx_for_all_01_with_bound(g: &Graph, max_m: usize) -> Result<Oracle01, SearchError> {
    let m = g.edge_count();
    if m > max_m {
        return Err(SearchError::OracleBound { m, max: max_m });
    }
    let config = SearchConfig { max_edges: m.max(1), node_budget: None };
    let failing = (0..1u64 << (2 * m)).into_par_iter().find_first(|&code| {
        let val = ZeroOneValuation::from_code(g, code);
        let outcome = find_efx_orientation(g, &val, &config).expect("no budget configured");
        matches!(outcome.result, SearchResult::ExhaustedNone)
    });
    Ok(match failing {
        None => Oracle01::Yes,
        Some(code) => Oracle01::No(ZeroOneValuation::from_code(g, code)),
    })
}

/// Outcome of re-checking a claimed counterexample instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CounterexampleCheck {
    /// Exhaustive search found no EFX orientation.
    Confirmed,
    /// The claim is wrong; here is an EFX orientation.
    Refuted(Orientation),
}

/// Certify or refute a claimed no-EFX-orientation instance.
pub fn check_counterexample<V: Valuation>(
    g: &Graph,
    val: &V,
    config: &SearchConfig,
) -> Result<CounterexampleCheck, SearchError> {
    let outcome = find_efx_orientation(g, val, config)?;
    Ok(match outcome.result {
        SearchResult::ExhaustedNone => CounterexampleCheck::Confirmed,
        SearchResult::Found(o) => CounterexampleCheck::Refuted(o),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::{ratio, AdditiveValuation};
    use crate::verify::verify_efx;

    /// All orientations in the order the DFS visits them: edge 0 is the
    /// most significant decision, lower endpoint first.
    fn all_orientations_in_search_order(g: &Graph) -> impl Iterator<Item = Orientation> + '_ {
        let m = g.edge_count();
        (0..1u64 << m).map(move |i| {
            let heads = (0..m)
                .map(|e| {
                    let (u, v) = g.edge(e);
                    if i >> (m - 1 - e) & 1 == 0 {
                        u
                    } else {
                        v
                    }
                })
                .collect();
            Orientation::new(g, heads).unwrap()
        })
    }

    fn shared_edge_instance() -> (Graph, AdditiveValuation) {
        let g = Graph::new(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let val = AdditiveValuation::new(
            &g,
            [
                (0, 0, ratio(1, 1)),
                (1, 0, ratio(1, 1)),
                (1, 2, ratio(1, 2)),
                (2, 2, ratio(1, 2)),
                (2, 4, ratio(1, 1)),
                (3, 4, ratio(1, 1)),
            ],
        )
        .unwrap();
        (g, val)
    }

    #[test]
    fn triangle_all_ones_is_orientable() {
        let g = Graph::complete(3);
        let val = AdditiveValuation::uniform(&g, ratio(1, 1));
        let outcome = find_efx_orientation(&g, &val, &SearchConfig::default()).unwrap();
        let SearchResult::Found(o) = outcome.result else {
            panic!("expected an orientation");
        };
        // Every vertex must get exactly one edge; the witness is the first
        // such orientation in code order.
        assert!((0..3).all(|v| o.bundle(&g, v).len() == 1));
        let brute = all_orientations_in_search_order(&g)
            .find(|o| verify_efx(&g, &val, o).verdict)
            .unwrap();
        assert_eq!(o, brute);
    }

    #[test]
    fn shared_edge_triangles_have_no_efx_orientation() {
        let (g, val) = shared_edge_instance();
        let outcome = find_efx_orientation(&g, &val, &SearchConfig::default()).unwrap();
        assert_eq!(outcome.result, SearchResult::ExhaustedNone);
    }

    #[test]
    fn empty_graph_is_trivially_orientable() {
        let g = Graph::new(3, []).unwrap();
        let val = AdditiveValuation::new(&g, []).unwrap();
        let outcome = find_efx_orientation(&g, &val, &SearchConfig::default()).unwrap();
        assert!(matches!(outcome.result, SearchResult::Found(_)));
        assert_eq!(outcome.stats.nodes, 0);
    }

    #[test]
    fn budget_exhaustion_is_a_distinct_error() {
        let (g, val) = shared_edge_instance();
        let config = SearchConfig::with_budget(3);
        assert!(matches!(
            find_efx_orientation(&g, &val, &config),
            Err(SearchError::BudgetExhausted { budget: 3, .. })
        ));
    }

    #[test]
    fn edge_bound_is_enforced() {
        let g = Graph::complete(5);
        let val = AdditiveValuation::uniform(&g, ratio(1, 1));
        let config = SearchConfig { max_edges: 5, node_budget: None };
        assert!(matches!(
            find_efx_orientation(&g, &val, &config),
            Err(SearchError::TooManyEdges { m: 10, max: 5 })
        ));
    }

    #[test]
    fn pruning_agrees_with_unpruned_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let graphs = [
            Graph::complete(3),
            Graph::cycle(4),
            Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap(),
            Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)]).unwrap(),
        ];
        for g in &graphs {
            for _ in 0..25 {
                let triples: Vec<_> = (0..g.edge_count())
                    .flat_map(|e| {
                        let (u, v) = g.edge(e);
                        [(u, e, ratio(rng.gen_range(0..6), 1)), (v, e, ratio(rng.gen_range(0..6), 1))]
                    })
                    .collect();
                let val = AdditiveValuation::new(g, triples).unwrap();
                let searched = find_efx_orientation(g, &val, &SearchConfig::default()).unwrap();
                let brute =
                    all_orientations_in_search_order(g).find(|o| verify_efx(g, &val, o).verdict);
                match (searched.result, brute) {
                    (SearchResult::Found(a), Some(b)) => assert_eq!(a, b),
                    (SearchResult::ExhaustedNone, None) => {}
                    (got, want) => panic!("mismatch: search {got:?}, brute {want:?}"),
                }
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let (g, val) = shared_edge_instance();
        for depth in [0, 2, 5] {
            let par = find_efx_orientation_parallel(&g, &val, &SearchConfig::default(), depth)
                .unwrap();
            assert_eq!(par.result, SearchResult::ExhaustedNone);
        }

        let tri = Graph::complete(3);
        let ones = AdditiveValuation::uniform(&tri, ratio(1, 1));
        let seq = find_efx_orientation(&tri, &ones, &SearchConfig::default()).unwrap();
        let par = find_efx_orientation_parallel(&tri, &ones, &SearchConfig::default(), 2).unwrap();
        assert_eq!(seq.result, par.result);
    }

    #[test]
    fn oracle_examples() {
        let k24 = Graph::complete_bipartite(2, 4);
        assert_eq!(exists_efx_for_all_01(&k24).unwrap(), Oracle01::Yes);

        let single = Graph::path(2);
        assert_eq!(exists_efx_for_all_01(&single).unwrap(), Oracle01::Yes);

        let glued = Graph::new(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        let Oracle01::No(witness) = exists_efx_for_all_01(&glued).unwrap() else {
            panic!("glued triangles must fail");
        };
        // The witness really admits no EFX orientation.
        let outcome = find_efx_orientation(&glued, &witness, &SearchConfig::default()).unwrap();
        assert_eq!(outcome.result, SearchResult::ExhaustedNone);
        // Determinism: the same first failing code every run.
        let Oracle01::No(again) = exists_efx_for_all_01(&glued).unwrap() else { panic!() };
        assert_eq!(witness, again);

        let big = Graph::complete_bipartite(3, 3);
        assert!(matches!(
            exists_efx_for_all_01(&big),
            Err(SearchError::OracleBound { m: 9, max: 8 })
        ));
    }

    #[test]
    fn counterexample_check_examples() {
        let (g, val) = shared_edge_instance();
        assert_eq!(
            check_counterexample(&g, &val, &SearchConfig::default()).unwrap(),
            CounterexampleCheck::Confirmed
        );

        let tri = Graph::complete(3);
        let ones = AdditiveValuation::uniform(&tri, ratio(1, 1));
        let CounterexampleCheck::Refuted(o) =
            check_counterexample(&tri, &ones, &SearchConfig::default()).unwrap()
        else {
            panic!("triangle all-ones is orientable");
        };
        assert!(verify_efx(&tri, &ones, &o).verdict);
    }
}
