//! Graphical valuation functions: each agent (vertex) values only its
//! incident edges, so `f_v(X) = f_v(X ∩ E(v))` for every bundle `X`.
//!
//! Three representations are supported: additive with exact rational
//! weights, additive 0-1 (two independent bits per edge), and explicit
//! monotone tables over the incident-edge power set. Envy comparisons are
//! exact inequalities, so everything is rational arithmetic; the 0-1 form
//! evaluates to plain integers, which keeps brute-force sweeps fast.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeSet, Graph};

/// Default guard for [`enumerate_01_valuations`]: `4^m` assignments.
pub const DEFAULT_ENUMERATION_BOUND: usize = 10;

/// Default guard on per-vertex table size: `2^deg(v)` entries.
pub const DEFAULT_TABLE_DEGREE_BOUND: usize = 12;

/// A valuation queryable per vertex over edge bundles.
///
/// `Value` only needs a total order: EFX is defined by comparisons, never
/// by arithmetic on the caller's side.
pub trait Valuation {
    type Value: Ord + Clone + fmt::Debug;

    /// `f_v(bundle ∩ E(v))`. Non-incident edges contribute nothing.
    fn value(&self, v: usize, bundle: EdgeSet) -> Self::Value;

    /// Value of the singleton bundle `{e}` to `v`.
    fn edge_value(&self, v: usize, e: usize) -> Self::Value {
        self.value(v, EdgeSet::single(e))
    }

    /// True iff removing `e` from any bundle never changes `v`'s value.
    fn is_zero_value_item(&self, v: usize, e: usize) -> bool;
}

/// A constraint violated by a valuation, reported by `validate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ValuationViolation {
    NegativeWeight { v: usize, e: usize },
    NonIncident { v: usize, e: usize },
    DuplicateWeight { v: usize, e: usize },
    NotZeroOne { v: usize, e: usize },
    VertexOutOfRange { v: usize },
    EdgeOutOfRange { e: usize },
    NegativeTableValue { v: usize, subset: EdgeSet },
    NotMonotone { v: usize, subset: EdgeSet, superset: EdgeSet },
    MissingSubset { v: usize, subset: EdgeSet },
    DegreeTooLarge { v: usize, degree: usize, max: usize },
    WrongVertexCount { expected: usize, found: usize },
}

impl fmt::Display for ValuationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegativeWeight { v, e } => write!(f, "negative weight at (v={v}, e={e})"),
            Self::NonIncident { v, e } => write!(f, "edge {e} is not incident to vertex {v}"),
            Self::DuplicateWeight { v, e } => write!(f, "duplicate weight for (v={v}, e={e})"),
            Self::NotZeroOne { v, e } => write!(f, "weight at (v={v}, e={e}) is not 0 or 1"),
            Self::VertexOutOfRange { v } => write!(f, "vertex {v} out of range"),
            Self::EdgeOutOfRange { e } => write!(f, "edge {e} out of range"),
            Self::NegativeTableValue { v, subset } => {
                write!(f, "negative table value at (v={v}, subset={subset:?})")
            }
            Self::NotMonotone { v, subset, superset } => {
                write!(f, "table for vertex {v} decreases from {subset:?} to {superset:?}")
            }
            Self::MissingSubset { v, subset } => {
                write!(f, "table for vertex {v} is missing subset {subset:?}")
            }
            Self::DegreeTooLarge { v, degree, max } => {
                write!(f, "vertex {v} has degree {degree}, tables limited to {max}")
            }
            Self::WrongVertexCount { expected, found } => {
                write!(f, "valuation built for {found} vertices, graph has {expected}")
            }
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ValuationError {
    #[error("invalid valuation: {}", format_violations(.0))]
    Invalid(Vec<ValuationViolation>),
    #[error("graph has {m} edges, 0-1 enumeration limited to {max}")]
    EnumerationBound { m: usize, max: usize },
}

fn format_violations(vs: &[ValuationViolation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

fn check<T>(violations: Vec<ValuationViolation>, value: T) -> Result<T, ValuationError> {
    if violations.is_empty() {
        Ok(value)
    } else {
        Err(ValuationError::Invalid(violations))
    }
}

/// Additive valuation with nonnegative exact rational weights on incident
/// (vertex, edge) pairs. Anything not stored weighs zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveValuation {
    // Per vertex: (incident edge index, weight), sorted by edge index.
    weights: Vec<Vec<(usize, BigRational)>>,
}

impl AdditiveValuation {
    /// Build from `(vertex, edge, weight)` triples, validating incidence
    /// and nonnegativity against the graph.
    pub fn new(
        g: &Graph,
        triples: impl IntoIterator<Item = (usize, usize, BigRational)>,
    ) -> Result<AdditiveValuation, ValuationError> {
        let mut weights = vec![Vec::new(); g.vertex_count()];
        let mut violations = Vec::new();
        for (v, e, w) in triples {
            if v >= g.vertex_count() {
                violations.push(ValuationViolation::VertexOutOfRange { v });
                continue;
            }
            if e >= g.edge_count() {
                violations.push(ValuationViolation::EdgeOutOfRange { e });
                continue;
            }
            let (a, b) = g.edge(e);
            if v != a && v != b {
                violations.push(ValuationViolation::NonIncident { v, e });
                continue;
            }
            if w < BigRational::zero() {
                violations.push(ValuationViolation::NegativeWeight { v, e });
                continue;
            }
            if weights[v].iter().any(|&(f, _)| f == e) {
                violations.push(ValuationViolation::DuplicateWeight { v, e });
                continue;
            }
            weights[v].push((e, w));
        }
        for row in &mut weights {
            row.sort_by_key(|&(e, _)| e);
        }
        check(violations, AdditiveValuation { weights })
    }

    /// Every incident (vertex, edge) pair gets the same weight.
    pub fn uniform(g: &Graph, w: BigRational) -> AdditiveValuation {
        let triples = (0..g.edge_count()).flat_map(|e| {
            let (u, v) = g.edge(e);
            [(u, e, w.clone()), (v, e, w.clone())]
        });
        Self::new(g, triples).expect("uniform weights are valid")
    }

    pub fn weight(&self, v: usize, e: usize) -> BigRational {
        self.weights[v]
            .iter()
            .find(|&&(f, _)| f == e)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Stored triples in `(vertex, edge)` order, zeros omitted.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.weights
            .iter()
            .enumerate()
            .flat_map(|(v, row)| row.iter().map(move |(e, w)| (v, *e, w)))
    }

    /// Re-check all constraints against a graph, reporting every violation.
    pub fn validate(&self, g: &Graph) -> Vec<ValuationViolation> {
        let mut violations = Vec::new();
        if self.weights.len() != g.vertex_count() {
            violations.push(ValuationViolation::WrongVertexCount {
                expected: g.vertex_count(),
                found: self.weights.len(),
            });
            return violations;
        }
        for (v, row) in self.weights.iter().enumerate() {
            for &(e, ref w) in row {
                if e >= g.edge_count() {
                    violations.push(ValuationViolation::EdgeOutOfRange { e });
                    continue;
                }
                let (a, b) = g.edge(e);
                if v != a && v != b {
                    violations.push(ValuationViolation::NonIncident { v, e });
                }
                if *w < BigRational::zero() {
                    violations.push(ValuationViolation::NegativeWeight { v, e });
                }
            }
        }
        violations
    }
}

impl Valuation for AdditiveValuation {
    type Value = BigRational;

    fn value(&self, v: usize, bundle: EdgeSet) -> BigRational {
        let mut total = BigRational::zero();
        for &(e, ref w) in &self.weights[v] {
            if bundle.contains(e) {
                total += w;
            }
        }
        total
    }

    fn is_zero_value_item(&self, v: usize, e: usize) -> bool {
        self.weights[v]
            .iter()
            .find(|&&(f, _)| f == e)
            .map_or(true, |(_, w)| w.is_zero())
    }
}

/// Additive 0-1 valuation: one bit per (vertex, incident edge) pair.
///
/// Values are bundle bit-counts, so sweeps over all `4^m` assignments stay
/// in integer arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZeroOneValuation {
    // Per vertex: incident edges it values at 1.
    one_mask: Vec<u64>,
    m: usize,
}

impl ZeroOneValuation {
    /// Build from the (vertex, edge) pairs valued at 1.
    pub fn new(
        g: &Graph,
        ones: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<ZeroOneValuation, ValuationError> {
        let mut one_mask = vec![0u64; g.vertex_count()];
        let mut violations = Vec::new();
        for (v, e) in ones {
            if v >= g.vertex_count() {
                violations.push(ValuationViolation::VertexOutOfRange { v });
                continue;
            }
            if e >= g.edge_count() {
                violations.push(ValuationViolation::EdgeOutOfRange { e });
                continue;
            }
            let (a, b) = g.edge(e);
            if v != a && v != b {
                violations.push(ValuationViolation::NonIncident { v, e });
                continue;
            }
            one_mask[v] |= 1 << e;
        }
        check(violations, ZeroOneValuation { one_mask, m: g.edge_count() })
    }

    /// Decode assignment `code` in `0..4^m`: bit `2e` is the lower
    /// endpoint's bit for edge `e`, bit `2e+1` the higher endpoint's.
    pub fn from_code(g: &Graph, code: u64) -> ZeroOneValuation {
        let mut one_mask = vec![0u64; g.vertex_count()];
        for e in 0..g.edge_count() {
            let (u, v) = g.edge(e);
            if code >> (2 * e) & 1 == 1 {
                one_mask[u] |= 1 << e;
            }
            if code >> (2 * e + 1) & 1 == 1 {
                one_mask[v] |= 1 << e;
            }
        }
        ZeroOneValuation { one_mask, m: g.edge_count() }
    }

    pub fn code(&self, g: &Graph) -> u64 {
        let mut code = 0;
        for e in 0..self.m {
            let (u, v) = g.edge(e);
            code |= u64::from(self.one(u, e)) << (2 * e);
            code |= u64::from(self.one(v, e)) << (2 * e + 1);
        }
        code
    }

    /// Value 1 on both endpoints of every edge in `h`, 0 elsewhere.
    pub fn ones_on(g: &Graph, h: EdgeSet) -> ZeroOneValuation {
        let pairs = h.iter().flat_map(|e| {
            let (u, v) = g.edge(e);
            [(u, e), (v, e)]
        });
        Self::new(g, pairs).expect("edge endpoints are incident")
    }

    pub fn one(&self, v: usize, e: usize) -> bool {
        self.one_mask[v] >> e & 1 == 1
    }

    /// The (vertex, edge) pairs valued at 1, sorted.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.one_mask
            .iter()
            .enumerate()
            .flat_map(|(v, &mask)| EdgeSet::from_mask(mask).iter().map(move |e| (v, e)))
    }

    /// Edges valued 1 by both endpoints.
    pub fn symmetric_ones(&self, g: &Graph) -> EdgeSet {
        (0..self.m)
            .filter(|&e| {
                let (u, v) = g.edge(e);
                self.one(u, e) && self.one(v, e)
            })
            .collect()
    }

    pub fn validate(&self, g: &Graph) -> Vec<ValuationViolation> {
        let mut violations = Vec::new();
        if self.one_mask.len() != g.vertex_count() || self.m != g.edge_count() {
            violations.push(ValuationViolation::WrongVertexCount {
                expected: g.vertex_count(),
                found: self.one_mask.len(),
            });
            return violations;
        }
        for (v, &mask) in self.one_mask.iter().enumerate() {
            for e in EdgeSet::from_mask(mask).iter() {
                if e >= g.edge_count() {
                    violations.push(ValuationViolation::EdgeOutOfRange { e });
                    continue;
                }
                let (a, b) = g.edge(e);
                if v != a && v != b {
                    violations.push(ValuationViolation::NonIncident { v, e });
                }
            }
        }
        violations
    }
}

impl Valuation for ZeroOneValuation {
    type Value = u32;

    fn value(&self, v: usize, bundle: EdgeSet) -> u32 {
        (self.one_mask[v] & bundle.mask()).count_ones()
    }

    fn is_zero_value_item(&self, v: usize, e: usize) -> bool {
        !self.one(v, e)
    }
}

/// All `4^m` 0-1 assignments in code order, guarded by
/// [`DEFAULT_ENUMERATION_BOUND`].
pub fn enumerate_01_valuations(
    g: &Graph,
) -> Result<impl Iterator<Item = ZeroOneValuation> + '_, ValuationError> {
    enumerate_01_valuations_with_bound(g, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_01_valuations_with_bound(
    g: &Graph,
    max_m: usize,
) -> Result<impl Iterator<Item = ZeroOneValuation> + '_, ValuationError> {
    let m = g.edge_count();
    if m > max_m {
        return Err(ValuationError::EnumerationBound { m, max: max_m });
    }
    Ok((0..1u64 << (2 * m)).map(move |code| ZeroOneValuation::from_code(g, code)))
}

/// Explicit monotone valuation: per vertex, a value for every subset of
/// its incident edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneTableValuation {
    incident: Vec<EdgeSet>,
    // Keyed by subset of the vertex's incident-edge mask.
    tables: Vec<BTreeMap<u64, BigRational>>,
}

impl MonotoneTableValuation {
    /// Build from per-vertex `(subset, value)` entries. Every subset of
    /// every vertex's incident edges must be present; monotonicity and
    /// nonnegativity are validated.
    pub fn new(
        g: &Graph,
        entries: impl IntoIterator<Item = (usize, Vec<(EdgeSet, BigRational)>)>,
    ) -> Result<MonotoneTableValuation, ValuationError> {
        Self::with_degree_bound(g, entries, DEFAULT_TABLE_DEGREE_BOUND)
    }

    pub fn with_degree_bound(
        g: &Graph,
        entries: impl IntoIterator<Item = (usize, Vec<(EdgeSet, BigRational)>)>,
        max_degree: usize,
    ) -> Result<MonotoneTableValuation, ValuationError> {
        let n = g.vertex_count();
        let mut violations = Vec::new();
        for v in 0..n {
            if g.degree(v) > max_degree {
                violations.push(ValuationViolation::DegreeTooLarge {
                    v,
                    degree: g.degree(v),
                    max: max_degree,
                });
            }
        }
        if !violations.is_empty() {
            return Err(ValuationError::Invalid(violations));
        }

        let incident: Vec<EdgeSet> = (0..n).map(|v| g.incident_edges(v)).collect();
        let mut tables = vec![BTreeMap::new(); n];
        for (v, rows) in entries {
            if v >= n {
                violations.push(ValuationViolation::VertexOutOfRange { v });
                continue;
            }
            for (subset, value) in rows {
                if !subset.is_subset_of(incident[v]) {
                    let stray = subset.difference(incident[v]).iter().next().unwrap();
                    violations.push(ValuationViolation::NonIncident { v, e: stray });
                    continue;
                }
                tables[v].insert(subset.mask(), value);
            }
        }
        let val = MonotoneTableValuation { incident, tables };
        let mut more = val.validate(g);
        violations.append(&mut more);
        check(violations, val)
    }

    pub fn validate(&self, g: &Graph) -> Vec<ValuationViolation> {
        let mut violations = Vec::new();
        if self.tables.len() != g.vertex_count() {
            violations.push(ValuationViolation::WrongVertexCount {
                expected: g.vertex_count(),
                found: self.tables.len(),
            });
            return violations;
        }
        for v in 0..self.tables.len() {
            let inc = self.incident[v];
            if inc != g.incident_edges(v) {
                violations.push(ValuationViolation::WrongVertexCount {
                    expected: g.vertex_count(),
                    found: self.tables.len(),
                });
                continue;
            }
            // Walk every subset of E(v); single-edge extensions suffice for
            // monotonicity because inclusions factor through them.
            let members: Vec<usize> = inc.iter().collect();
            for bits in 0..1u64 << members.len() {
                let subset: EdgeSet =
                    members.iter().enumerate().filter(|&(i, _)| bits >> i & 1 == 1).map(|(_, &e)| e).collect();
                let Some(value) = self.tables[v].get(&subset.mask()) else {
                    violations.push(ValuationViolation::MissingSubset { v, subset });
                    continue;
                };
                if *value < BigRational::zero() {
                    violations.push(ValuationViolation::NegativeTableValue { v, subset });
                }
                for &e in &members {
                    if subset.contains(e) {
                        continue;
                    }
                    let superset = subset.with(e);
                    if let Some(bigger) = self.tables[v].get(&superset.mask()) {
                        if bigger < value {
                            violations.push(ValuationViolation::NotMonotone { v, subset, superset });
                        }
                    }
                }
            }
        }
        violations
    }

    pub fn incident_edges(&self, v: usize) -> EdgeSet {
        self.incident[v]
    }

    pub fn entries(&self, v: usize) -> impl Iterator<Item = (EdgeSet, &BigRational)> {
        self.tables[v].iter().map(|(&mask, w)| (EdgeSet::from_mask(mask), w))
    }

    /// Express an additive valuation as an explicit table.
    pub fn from_additive(
        g: &Graph,
        additive: &AdditiveValuation,
    ) -> Result<MonotoneTableValuation, ValuationError> {
        let entries = (0..g.vertex_count()).map(|v| {
            let members: Vec<usize> = g.incident_edges(v).iter().collect();
            let rows = (0..1u64 << members.len())
                .map(|bits| {
                    let subset: EdgeSet = members
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| bits >> i & 1 == 1)
                        .map(|(_, &e)| e)
                        .collect();
                    (subset, additive.value(v, subset))
                })
                .collect();
            (v, rows)
        });
        Self::new(g, entries.collect::<Vec<_>>())
    }
}

impl Valuation for MonotoneTableValuation {
    type Value = BigRational;

    fn value(&self, v: usize, bundle: EdgeSet) -> BigRational {
        let key = bundle.intersection(self.incident[v]).mask();
        self.tables[v].get(&key).cloned().unwrap_or_else(BigRational::zero)
    }

    fn is_zero_value_item(&self, v: usize, e: usize) -> bool {
        if !self.incident[v].contains(e) {
            return true;
        }
        let members: Vec<usize> = self.incident[v].without(e).iter().collect();
        (0..1u64 << members.len()).all(|bits| {
            let subset: EdgeSet = members
                .iter()
                .enumerate()
                .filter(|&(i, _)| bits >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            self.value(v, subset) == self.value(v, subset.with(e))
        })
    }
}

/// Any supported valuation, evaluated over rationals. This is the form the
/// JSON interfaces produce.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyValuation {
    Additive(AdditiveValuation),
    ZeroOne(ZeroOneValuation),
    Table(MonotoneTableValuation),
}

impl AnyValuation {
    pub fn validate(&self, g: &Graph) -> Vec<ValuationViolation> {
        match self {
            Self::Additive(v) => v.validate(g),
            Self::ZeroOne(v) => v.validate(g),
            Self::Table(v) => v.validate(g),
        }
    }
}

impl Valuation for AnyValuation {
    type Value = BigRational;

    fn value(&self, v: usize, bundle: EdgeSet) -> BigRational {
        match self {
            Self::Additive(val) => val.value(v, bundle),
            Self::ZeroOne(val) => BigRational::from_integer(BigInt::from(val.value(v, bundle))),
            Self::Table(val) => val.value(v, bundle),
        }
    }

    fn is_zero_value_item(&self, v: usize, e: usize) -> bool {
        match self {
            Self::Additive(val) => val.is_zero_value_item(v, e),
            Self::ZeroOne(val) => val.is_zero_value_item(v, e),
            Self::Table(val) => val.is_zero_value_item(v, e),
        }
    }
}

// ---------------------------------------------------------------------------
// JSON interface
// ---------------------------------------------------------------------------

/// Weight in a valuation file: a nonnegative integer or a `"p/q"` string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightDoc {
    Int(i64),
    Ratio(String),
}

impl WeightDoc {
    pub fn to_rational(&self) -> Result<BigRational, String> {
        match self {
            WeightDoc::Int(i) => Ok(BigRational::from_integer(BigInt::from(*i))),
            WeightDoc::Ratio(s) => {
                s.parse::<BigRational>().map_err(|e| format!("bad rational {s:?}: {e}"))
            }
        }
    }

    pub fn from_rational(r: &BigRational) -> WeightDoc {
        if r.is_integer() {
            if let Ok(i) = i64::try_from(r.to_integer()) {
                return WeightDoc::Int(i);
            }
        }
        WeightDoc::Ratio(r.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightEntry {
    pub v: usize,
    pub e: usize,
    pub w: WeightDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableEntry {
    pub edges: Vec<usize>,
    pub w: WeightDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexTable {
    pub v: usize,
    pub entries: Vec<TableEntry>,
}

/// On-disk valuation document. Binding it to a graph validates it.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ValuationDoc {
    Additive { weights: Vec<WeightEntry> },
    ZeroOne { weights: Vec<WeightEntry> },
    Table { tables: Vec<VertexTable> },
}

impl ValuationDoc {
    pub fn bind(&self, g: &Graph) -> Result<AnyValuation, ValuationError> {
        match self {
            ValuationDoc::Additive { weights } => {
                let mut triples = Vec::new();
                let mut violations = Vec::new();
                for entry in weights {
                    match entry.w.to_rational() {
                        Ok(w) => triples.push((entry.v, entry.e, w)),
                        Err(_) => {
                            violations.push(ValuationViolation::NegativeWeight {
                                v: entry.v,
                                e: entry.e,
                            });
                        }
                    }
                }
                if !violations.is_empty() {
                    return Err(ValuationError::Invalid(violations));
                }
                AdditiveValuation::new(g, triples).map(AnyValuation::Additive)
            }
            ValuationDoc::ZeroOne { weights } => {
                let mut ones = Vec::new();
                let mut violations = Vec::new();
                for entry in weights {
                    match entry.w.to_rational() {
                        Ok(w) if w.is_zero() => {}
                        Ok(w) if w == BigRational::from_integer(BigInt::from(1)) => {
                            ones.push((entry.v, entry.e));
                        }
                        _ => violations
                            .push(ValuationViolation::NotZeroOne { v: entry.v, e: entry.e }),
                    }
                }
                if !violations.is_empty() {
                    return Err(ValuationError::Invalid(violations));
                }
                ZeroOneValuation::new(g, ones).map(AnyValuation::ZeroOne)
            }
            ValuationDoc::Table { tables } => {
                let mut entries = Vec::new();
                for table in tables {
                    let mut rows = Vec::new();
                    for row in &table.entries {
                        let subset = EdgeSet::from_indices(row.edges.iter().copied());
                        let w = row.w.to_rational().map_err(|_| {
                            ValuationError::Invalid(vec![ValuationViolation::NegativeTableValue {
                                v: table.v,
                                subset,
                            }])
                        })?;
                        rows.push((subset, w));
                    }
                    entries.push((table.v, rows));
                }
                MonotoneTableValuation::new(g, entries).map(AnyValuation::Table)
            }
        }
    }

    pub fn from_valuation(val: &AnyValuation, g: &Graph) -> ValuationDoc {
        match val {
            AnyValuation::Additive(v) => ValuationDoc::Additive {
                weights: v
                    .triples()
                    .map(|(v, e, w)| WeightEntry { v, e, w: WeightDoc::from_rational(w) })
                    .collect(),
            },
            AnyValuation::ZeroOne(v) => ValuationDoc::ZeroOne {
                weights: v
                    .ones()
                    .map(|(v, e)| WeightEntry { v, e, w: WeightDoc::Int(1) })
                    .collect(),
            },
            AnyValuation::Table(v) => ValuationDoc::Table {
                tables: (0..g.vertex_count())
                    .map(|u| VertexTable {
                        v: u,
                        entries: v
                            .entries(u)
                            .map(|(subset, w)| TableEntry {
                                edges: subset.iter().collect(),
                                w: WeightDoc::from_rational(w),
                            })
                            .collect(),
                    })
                    .collect(),
            },
        }
    }
}

/// Convenience for rational literals in tests and generators.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn shared_edge_triangles() -> (Graph, AdditiveValuation) {
        // Triangles {0,1,2} and {1,2,3} sharing edge {1,2}; the shared edge
        // is worth 1/2 to both endpoints, {0,1} and {2,3} worth 1, the rest 0.
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
    fn value_examples() {
        let (_, val) = shared_edge_triangles();
        assert_eq!(val.value(1, EdgeSet::single(2)), ratio(1, 2));
        assert_eq!(val.value(1, EdgeSet::EMPTY), BigRational::zero());

        let tri = Graph::complete(3);
        let ones = AdditiveValuation::uniform(&tri, ratio(1, 1));
        assert_eq!(ones.value(0, EdgeSet::full(3)), ratio(2, 1));
    }

    #[test]
    fn graphical_restriction_holds() {
        let (g, val) = shared_edge_triangles();
        for v in 0..g.vertex_count() {
            for mask in 0..1u64 << g.edge_count() {
                let bundle = EdgeSet::from_mask(mask);
                let restricted = bundle.intersection(g.incident_edges(v));
                assert_eq!(val.value(v, bundle), val.value(v, restricted));
            }
        }
    }

    #[test]
    fn zero_value_item_examples() {
        let (g, val) = shared_edge_triangles();
        // {0,2} and {1,3} have weight 0 for both endpoints.
        assert!(val.is_zero_value_item(0, 1));
        assert!(val.is_zero_value_item(2, 1));
        assert!(val.is_zero_value_item(1, 3));
        assert!(!val.is_zero_value_item(1, 2));
        // Non-incident edges are zero-value by the graphical restriction.
        assert!(val.is_zero_value_item(3, 0));
        drop(g);
    }

    #[test]
    fn zero_value_item_in_tables() {
        let g = Graph::path(3);
        // Vertex 1 is incident to edges 0 and 1. Edge 1 flips the value on
        // exactly one subset, so it is not a zero-value item.
        let val = MonotoneTableValuation::new(
            &g,
            [
                (0, vec![(EdgeSet::EMPTY, ratio(0, 1)), (EdgeSet::single(0), ratio(1, 1))]),
                (
                    1,
                    vec![
                        (EdgeSet::EMPTY, ratio(0, 1)),
                        (EdgeSet::single(0), ratio(1, 1)),
                        (EdgeSet::single(1), ratio(0, 1)),
                        (EdgeSet::from_indices([0, 1]), ratio(2, 1)),
                    ],
                ),
                (2, vec![(EdgeSet::EMPTY, ratio(0, 1)), (EdgeSet::single(1), ratio(0, 1))]),
            ],
        )
        .unwrap();
        assert!(!val.is_zero_value_item(1, 1));
        assert!(val.is_zero_value_item(2, 1));
    }

    #[test]
    fn validation_reports_violations() {
        let g = Graph::path(3);
        let err = AdditiveValuation::new(&g, [(0, 0, ratio(-1, 2))]).unwrap_err();
        assert!(matches!(
            err,
            ValuationError::Invalid(ref v) if v == &[ValuationViolation::NegativeWeight { v: 0, e: 0 }]
        ));

        let err = AdditiveValuation::new(&g, [(2, 0, ratio(1, 1))]).unwrap_err();
        assert!(matches!(
            err,
            ValuationError::Invalid(ref v) if v == &[ValuationViolation::NonIncident { v: 2, e: 0 }]
        ));

        // Monotonicity violation at (1, {0,1}).
        let err = MonotoneTableValuation::new(
            &g,
            [
                (0, vec![(EdgeSet::EMPTY, ratio(0, 1)), (EdgeSet::single(0), ratio(0, 1))]),
                (
                    1,
                    vec![
                        (EdgeSet::EMPTY, ratio(0, 1)),
                        (EdgeSet::single(0), ratio(3, 1)),
                        (EdgeSet::single(1), ratio(0, 1)),
                        (EdgeSet::from_indices([0, 1]), ratio(1, 1)),
                    ],
                ),
                (2, vec![(EdgeSet::EMPTY, ratio(0, 1)), (EdgeSet::single(1), ratio(0, 1))]),
            ],
        )
        .unwrap_err();
        let ValuationError::Invalid(violations) = err else { panic!() };
        assert!(violations.iter().any(|v| matches!(
            v,
            ValuationViolation::NotMonotone { v: 1, .. }
        )));

        // Missing subsets are an error.
        let err = MonotoneTableValuation::new(
            &g,
            [(0, vec![(EdgeSet::EMPTY, ratio(0, 1))])],
        )
        .unwrap_err();
        let ValuationError::Invalid(violations) = err else { panic!() };
        assert!(violations
            .iter()
            .any(|v| matches!(v, ValuationViolation::MissingSubset { .. })));
    }

    #[test]
    fn enumeration_counts() {
        let single = Graph::path(2);
        assert_eq!(enumerate_01_valuations(&single).unwrap().count(), 4);

        let two = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(enumerate_01_valuations(&two).unwrap().count(), 16);

        let tri = Graph::complete(3);
        assert_eq!(enumerate_01_valuations(&tri).unwrap().count(), 64);

        let big = Graph::complete_bipartite(3, 4);
        assert!(matches!(
            enumerate_01_valuations(&big).map(|_| ()),
            Err(ValuationError::EnumerationBound { m: 12, max: 10 })
        ));
    }

    #[test]
    fn zero_one_codes_round_trip() {
        let g = Graph::complete(3);
        for code in 0..64 {
            let val = ZeroOneValuation::from_code(&g, code);
            assert_eq!(val.code(&g), code);
        }
    }

    #[test]
    fn additive_matches_table_representation() {
        let (g, val) = shared_edge_triangles();
        let table = MonotoneTableValuation::from_additive(&g, &val).unwrap();
        for v in 0..g.vertex_count() {
            for mask in 0..1u64 << g.edge_count() {
                let bundle = EdgeSet::from_mask(mask);
                assert_eq!(val.value(v, bundle), table.value(v, bundle));
                for e in bundle.iter() {
                    assert_eq!(val.is_zero_value_item(v, e), table.is_zero_value_item(v, e));
                }
            }
        }
    }

    #[test]
    fn valuation_json_round_trip() {
        let (g, val) = shared_edge_triangles();
        let any = AnyValuation::Additive(val);
        let doc = ValuationDoc::from_valuation(&any, &g);
        let json = serde_json::to_string(&doc).unwrap();
        let parsed: ValuationDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.bind(&g).unwrap(), any);

        let zo = AnyValuation::ZeroOne(ZeroOneValuation::ones_on(&g, EdgeSet::from_indices([0, 4])));
        let doc = ValuationDoc::from_valuation(&zo, &g);
        let json = serde_json::to_string(&doc).unwrap();
        let parsed: ValuationDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.bind(&g).unwrap(), zo);
    }
}
