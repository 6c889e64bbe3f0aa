//! Orientations and EFX verification.
//!
//! An orientation gives every edge a head; vertex `v`'s bundle is the set
//! of edges with head `v`, so bundles partition the edge set. Two
//! verifiers are provided: [`verify_efx`] transcribes the EFX definition
//! over all ordered agent pairs and all single-good removals, and
//! [`verify_efx_fast`] exploits the graphical restriction. The literal one
//! is the trusted oracle; the fast one is what search relies on, and the
//! two are equivalence-tested against each other.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeSet, Graph};
use crate::valuation::Valuation;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OrientationError {
    #[error("orientation has {found} heads, graph has {expected} edges")]
    WrongLength { expected: usize, found: usize },
    #[error("head {head} of edge {e} is not one of its endpoints {endpoints:?}")]
    HeadNotIncident { e: usize, head: usize, endpoints: (usize, usize) },
}

/// Assignment of each edge to one of its endpoints (the head).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Orientation {
    heads: Vec<usize>,
}

impl Orientation {
    pub fn new(g: &Graph, heads: Vec<usize>) -> Result<Orientation, OrientationError> {
        if heads.len() != g.edge_count() {
            return Err(OrientationError::WrongLength {
                expected: g.edge_count(),
                found: heads.len(),
            });
        }
        for (e, &head) in heads.iter().enumerate() {
            let (u, v) = g.edge(e);
            if head != u && head != v {
                return Err(OrientationError::HeadNotIncident { e, head, endpoints: (u, v) });
            }
        }
        Ok(Orientation { heads })
    }

    /// Decode bit `e` of `code`: 0 orients edge `e` to its lower endpoint,
    /// 1 to its higher endpoint. This is the search enumeration order.
    pub fn from_code(g: &Graph, code: u64) -> Orientation {
        let heads = (0..g.edge_count())
            .map(|e| {
                let (u, v) = g.edge(e);
                if code >> e & 1 == 0 {
                    u
                } else {
                    v
                }
            })
            .collect();
        Orientation { heads }
    }

    pub fn code(&self, g: &Graph) -> u64 {
        let mut code = 0;
        for (e, &head) in self.heads.iter().enumerate() {
            if head == g.edge(e).1 && head != g.edge(e).0 {
                code |= 1 << e;
            }
        }
        code
    }

    pub fn head(&self, e: usize) -> usize {
        self.heads[e]
    }

    pub fn tail(&self, g: &Graph, e: usize) -> usize {
        g.other_endpoint(e, self.heads[e])
    }

    pub fn heads(&self) -> &[usize] {
        &self.heads
    }

    /// Edges with head `v`.
    pub fn bundle(&self, g: &Graph, v: usize) -> EdgeSet {
        g.incident_edges(v)
            .iter()
            .filter(|&e| self.heads[e] == v)
            .collect()
    }

    /// All bundles at once. They partition the edge set.
    pub fn bundles(&self, g: &Graph) -> Vec<EdgeSet> {
        let mut bundles = vec![EdgeSet::EMPTY; g.vertex_count()];
        for (e, &head) in self.heads.iter().enumerate() {
            bundles[head].insert(e);
        }
        bundles
    }
}

/// On-disk form: `{"heads": [h_0, ..., h_{m-1}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrientationDoc {
    pub heads: Vec<usize>,
}

impl OrientationDoc {
    pub fn bind(&self, g: &Graph) -> Result<Orientation, OrientationError> {
        Orientation::new(g, self.heads.clone())
    }
}

/// A failed EFX comparison: `envier` prefers `enviee`'s bundle even after
/// `removed` is taken out of it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EfxViolation {
    pub envier: usize,
    pub enviee: usize,
    pub removed: usize,
}

/// Outcome of an EFX check, with the full violation list and the set of
/// plainly envied vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EfxReport {
    pub verdict: bool,
    pub violations: Vec<EfxViolation>,
    pub envied_vertices: BTreeSet<usize>,
}

fn assert_partition(g: &Graph, bundles: &[EdgeSet]) {
    let mut union = EdgeSet::EMPTY;
    let mut total = 0;
    for b in bundles {
        union = union.union(*b);
        total += b.len();
    }
    assert!(
        total == g.edge_count() && union == EdgeSet::full(g.edge_count()),
        "bundles must partition the edge set"
    );
}

/// EFX check by the definition: for all ordered pairs `(i, j)` and every
/// good `e` in `j`'s bundle, `f_i(X_i) >= f_i(X_j - e)`.
pub fn verify_efx<V: Valuation>(g: &Graph, val: &V, o: &Orientation) -> EfxReport {
    let bundles = o.bundles(g);
    assert_partition(g, &bundles);
    let own: Vec<V::Value> = (0..g.vertex_count()).map(|v| val.value(v, bundles[v])).collect();

    let mut violations = Vec::new();
    let mut envied = BTreeSet::new();
    for i in 0..g.vertex_count() {
        for j in 0..g.vertex_count() {
            if i == j {
                continue;
            }
            if val.value(i, bundles[j]) > own[i] {
                envied.insert(j);
            }
            for e in bundles[j].iter() {
                if val.value(i, bundles[j].without(e)) > own[i] {
                    violations.push(EfxViolation { envier: i, enviee: j, removed: e });
                }
            }
        }
    }
    violations.sort();
    EfxReport { verdict: violations.is_empty(), violations, envied_vertices: envied }
}

/// Same verdict and report as [`verify_efx`], computed per edge.
///
/// In an orientation the bundles are incident sets, so for a simple graph
/// `X_j ∩ E(i) ⊆ {ij}`. The tail `t` of an edge with head `h` EFX-envies
/// `h` exactly when `h` holds a second good and `f_t({th}) > f_t(X_t)`; a
/// one-good bundle can never be EFX-envied because removal empties it.
pub fn verify_efx_fast<V: Valuation>(g: &Graph, val: &V, o: &Orientation) -> EfxReport {
    let bundles = o.bundles(g);
    assert_partition(g, &bundles);
    let own: Vec<V::Value> = (0..g.vertex_count()).map(|v| val.value(v, bundles[v])).collect();

    let mut violations = Vec::new();
    let mut envied = BTreeSet::new();
    for e in 0..g.edge_count() {
        let h = o.head(e);
        let t = o.tail(g, e);
        if val.edge_value(t, e) > own[t] {
            envied.insert(h);
            if bundles[h].len() >= 2 {
                // Removing any other good still leaves e in the bundle.
                for removed in bundles[h].iter().filter(|&r| r != e) {
                    violations.push(EfxViolation { envier: t, enviee: h, removed });
                }
            }
        }
    }
    violations.sort();
    EfxReport { verdict: violations.is_empty(), violations, envied_vertices: envied }
}

/// Verdict-only fast check that short-circuits on the first violation.
pub fn is_efx_fast<V: Valuation>(g: &Graph, val: &V, o: &Orientation) -> bool {
    let bundles = o.bundles(g);
    let own: Vec<V::Value> = (0..g.vertex_count()).map(|v| val.value(v, bundles[v])).collect();
    (0..g.edge_count()).all(|e| {
        let h = o.head(e);
        let t = o.tail(g, e);
        bundles[h].len() < 2 || val.edge_value(t, e) <= own[t]
    })
}

/// Vertices plainly envied by someone: `f_i(X_j) > f_i(X_i)` for some `i`.
pub fn envied_vertices<V: Valuation>(g: &Graph, val: &V, o: &Orientation) -> BTreeSet<usize> {
    verify_efx_fast(g, val, o).envied_vertices
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::{ratio, AdditiveValuation, ZeroOneValuation};

    #[test]
    fn bundle_examples() {
        let tri = Graph::complete(3);
        // Cyclic: 01 -> 1, 12 -> 2, 02 -> 0.
        let o = Orientation::new(&tri, vec![1, 0, 2]).unwrap();
        for v in 0..3 {
            assert_eq!(o.bundle(&tri, v).len(), 1);
        }

        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let o = Orientation::new(&star, vec![0, 0, 0]).unwrap();
        assert_eq!(o.bundle(&star, 0), EdgeSet::full(3));
        assert_eq!(o.bundle(&star, 1), EdgeSet::EMPTY);

        let single = Graph::path(2);
        let o = Orientation::new(&single, vec![0]).unwrap();
        assert_eq!(o.bundle(&single, 0), EdgeSet::single(0));
        assert_eq!(o.bundle(&single, 1), EdgeSet::EMPTY);
    }

    #[test]
    fn orientation_validation() {
        let tri = Graph::complete(3);
        assert!(matches!(
            Orientation::new(&tri, vec![1, 0]),
            Err(OrientationError::WrongLength { expected: 3, found: 2 })
        ));
        assert!(matches!(
            Orientation::new(&tri, vec![2, 0, 2]),
            Err(OrientationError::HeadNotIncident { e: 0, head: 2, .. })
        ));
    }

    #[test]
    fn shared_edge_triangles_violation() {
        // Triangles {0,1,2} and {1,2,3} sharing edge {1,2} with the
        // half-weight valuation on the shared edge. Orienting both {1,2}
        // and {0,1} to vertex 1 makes vertex 0 envy vertex 1 even after
        // the shared edge is removed.
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
        let o = Orientation::new(&g, vec![1, 0, 1, 3, 2]).unwrap();
        let report = verify_efx(&g, &val, &o);
        assert!(!report.verdict);
        assert!(report
            .violations
            .contains(&EfxViolation { envier: 0, enviee: 1, removed: 2 }));
    }

    #[test]
    fn single_edge_is_always_efx() {
        let g = Graph::path(2);
        for code in 0..4 {
            let val = ZeroOneValuation::from_code(&g, code);
            for heads in [vec![0], vec![1]] {
                let o = Orientation::new(&g, heads).unwrap();
                assert!(verify_efx(&g, &val, &o).verdict);
            }
        }
    }

    #[test]
    fn star_to_center_fails() {
        let g = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let val = AdditiveValuation::uniform(&g, ratio(1, 1));
        let o = Orientation::new(&g, vec![0, 0, 0]).unwrap();
        let report = verify_efx(&g, &val, &o);
        assert!(!report.verdict);
        // Each leaf envies the center after removal of an edge it does not share.
        for leaf in 1..4 {
            assert!(report.violations.iter().any(|v| v.envier == leaf && v.enviee == 0));
        }
    }

    #[test]
    fn fast_matches_literal_small_sweep() {
        for g in [
            Graph::complete(3),
            Graph::path(4),
            Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap(),
            Graph::cycle(4),
        ] {
            let m = g.edge_count();
            for vcode in 0..1u64 << (2 * m) {
                let val = ZeroOneValuation::from_code(&g, vcode);
                for ocode in 0..1u64 << m {
                    let o = Orientation::from_code(&g, ocode);
                    let lit = verify_efx(&g, &val, &o);
                    let fast = verify_efx_fast(&g, &val, &o);
                    assert_eq!(lit, fast, "graph {g:?} vcode {vcode} ocode {ocode}");
                    assert_eq!(lit.verdict, is_efx_fast(&g, &val, &o));
                }
            }
        }
    }

    #[test]
    fn envied_vertices_examples() {
        let g = Graph::path(2);
        let zero = ZeroOneValuation::from_code(&g, 0);
        let o = Orientation::new(&g, vec![0]).unwrap();
        assert!(envied_vertices(&g, &zero, &o).is_empty());

        let both = ZeroOneValuation::from_code(&g, 0b11);
        assert_eq!(envied_vertices(&g, &both, &o), BTreeSet::from([0]));
    }

    #[test]
    fn singly_loaded_envied_vertices_mean_efx() {
        // If every envied vertex holds exactly one edge the orientation is
        // EFX: removal of that edge empties the bundle.
        let g = Graph::cycle(5);
        for vcode in (0..1u64 << (2 * 5)).step_by(7) {
            let val = ZeroOneValuation::from_code(&g, vcode);
            for ocode in 0..1u64 << 5 {
                let o = Orientation::from_code(&g, ocode);
                let report = verify_efx_fast(&g, &val, &o);
                let bundles = o.bundles(&g);
                if report.envied_vertices.iter().all(|&v| bundles[v].len() == 1) {
                    assert!(report.verdict);
                }
            }
        }
    }
}
