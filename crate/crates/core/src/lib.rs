//! EFX orientation toolkit for graphical fair-division instances.
//!
//! Agents are the vertices of a simple undirected graph, goods are its
//! edges, and each agent values only the edges incident to it. An
//! orientation assigns every edge to one of its endpoints; the induced
//! allocation gives each vertex its in-edges. This crate verifies
//! envy-freeness up to any good (EFX) for orientations, searches the
//! orientation space exhaustively with sound pruning, decides 0-1 strong
//! EFX-orientability via an exact forest/independent-set characterization,
//! constructs EFX orientations for bipartite and near-bipartite graphs,
//! and generates certified counterexample instances.

pub mod characterize;
pub mod graph;
pub mod search;
pub mod structures;
pub mod valuation;
pub mod verify;

pub use characterize::{
    adversarial_01_valuation, check_01_characterization, classify_strong, find_near_bipartite_vertex,
    forest_selection, matching_condition, orient_01, orient_bipartite, orient_near_bipartite,
    peel_degree_one, CharacterizeError, Classification01, ClassifyConfig, MatchingCondition,
    NoCertificate, NoSource, PeelResult, PeeledLeaf, SkippedStage, StrongClassification,
    StrongVerdict, Witness01, YesReason,
};
pub use graph::{
    Bipartition, CanonicalForm, EdgeSet, Graph, GraphError, SubdividedEdge, TreeComponent,
};
pub use structures::{find_forbidden_structure, structure_valuation, StructureKind, StructureMatch};
pub use search::{
    check_counterexample, exists_efx_for_all_01, find_efx_orientation,
    find_efx_orientation_parallel, CounterexampleCheck, Oracle01, SearchConfig, SearchError,
    SearchOutcome, SearchResult, SearchStats,
};
pub use valuation::{
    enumerate_01_valuations, AdditiveValuation, AnyValuation, MonotoneTableValuation, Valuation,
    ValuationDoc, ValuationError, ValuationViolation, ZeroOneValuation,
};
pub use verify::{
    envied_vertices, is_efx_fast, verify_efx, verify_efx_fast, EfxReport, EfxViolation,
    Orientation, OrientationDoc, OrientationError,
};
