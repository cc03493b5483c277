//! Labeled graphs and the catalog of graph classes.
//!
//! Nodes are indexed `0..n` in code; everything user-facing (files, JSON,
//! display) numbers them `1..=n`.
//!
//! The canonical order of `n`-node graphs is lexicographic on the row-major
//! upper-triangle bit string `b(0,1) b(0,2) .. b(0,n-1) b(1,2) ..`, so every
//! node derives the same listing of a class without communication.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use once_cell::race::OnceBox;
use thiserror::Error;

use crate::matrix::SquareMatrix;

/// Largest node count a [`LabeledGraph`] can hold (one `u64` per row).
pub const MAX_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("class `{class}` is only enumerable up to n = {n_max}, asked for n = {n}")]
    UnsupportedScale {
        class: String,
        n: usize,
        n_max: usize,
    },
    #[error("graphs must have at least one node")]
    EmptyOrder,
    #[error("class `{class}` has no member on at most {n} nodes")]
    EmptyClass { class: String, n: usize },
}

/// An undirected graph on nodes `0..n`, stored as one adjacency bitmask per row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    n: usize,
    rows: Vec<u64>,
}

impl LabeledGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_NODES, "at most {MAX_NODES} nodes are supported");
        LabeledGraph { n, rows: vec![0; n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Builds a graph from 0-based edges. Panics on loops or out-of-range nodes.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Builds a graph from symmetric adjacency rows with empty diagonal.
    pub fn from_rows(rows: Vec<u64>) -> Option<Self> {
        let n = rows.len();
        if n > MAX_NODES {
            return None;
        }
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for (i, &r) in rows.iter().enumerate() {
            if r & !mask != 0 || (r >> i) & 1 == 1 {
                return None;
            }
            for j in 0..n {
                if (r >> j) & 1 != (rows[j] >> i) & 1 {
                    return None;
                }
            }
        }
        Some(LabeledGraph { n, rows })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Adjacency row of `v` as a bitmask: bit `j` is set iff `v ~ j`.
    #[inline]
    pub fn row(&self, v: usize) -> u64 {
        self.rows[v]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.rows[u] >> v) & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.set_edge(u, v, true);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.set_edge(u, v, false);
    }

    pub fn toggle_edge(&mut self, u: usize, v: usize) {
        let present = self.has_edge(u, v);
        self.set_edge(u, v, !present);
    }

    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        assert!(u < self.n && v < self.n, "node out of range");
        assert_ne!(u, v, "self-loops are not allowed");
        if present {
            self.rows[u] |= 1 << v;
            self.rows[v] |= 1 << u;
        } else {
            self.rows[u] &= !(1 << v);
            self.rows[v] &= !(1 << u);
        }
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.rows[v].count_ones()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in canonical pair order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n)
                .filter(move |&v| self.has_edge(u, v))
                .map(move |v| (u, v))
        })
    }

    /// `A(G)` as a 0/1 matrix.
    pub fn adjacency_matrix(&self) -> SquareMatrix {
        let mut m = SquareMatrix::zeros(self.n);
        for (u, v) in self.edges() {
            m.set(u, v, 1);
            m.set(v, u, 1);
        }
        m
    }

    /// The upper-triangle bit string read as a big-endian integer
    /// (pair `(0,1)` is the most significant bit). Requires `n <= 11`.
    pub fn code(&self) -> u64 {
        assert!(self.n <= 11, "graph codes need at most 55 pair bits");
        let mut code = 0u64;
        for u in 0..self.n {
            for v in u + 1..self.n {
                code = (code << 1) | u64::from(self.has_edge(u, v));
            }
        }
        code
    }

    pub fn from_code(n: usize, code: u64) -> Self {
        assert!(n <= 11, "graph codes need at most 55 pair bits");
        let pairs = n * n.saturating_sub(1) / 2;
        let mut g = Self::empty(n);
        let mut bit = pairs;
        for u in 0..n {
            for v in u + 1..n {
                bit -= 1;
                if (code >> bit) & 1 == 1 {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Compares two graphs of equal order in canonical (upper-triangle
    /// lexicographic) order.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.n, other.n, "canonical order compares equal orders only");
        for u in 0..self.n {
            for v in u + 1..self.n {
                match self.has_edge(u, v).cmp(&other.has_edge(u, v)) {
                    Ordering::Equal => {}
                    o => return o,
                }
            }
        }
        Ordering::Equal
    }

    /// `G[U]`, nodes renumbered by increasing original index. `nodes` may be
    /// given in any order; duplicates are ignored. Panics if empty.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> LabeledGraph {
        let mut keep: Vec<usize> = nodes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        assert!(!keep.is_empty(), "induced subgraph of an empty node set");
        assert!(keep.iter().all(|&v| v < self.n), "node out of range");
        let mut h = LabeledGraph::empty(keep.len());
        for (a, &u) in keep.iter().enumerate() {
            for (b, &v) in keep.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    h.add_edge(a, b);
                }
            }
        }
        h
    }

    /// Induced subgraph on the node set given as a bitmask.
    pub fn induced_by_mask(&self, mask: u64) -> LabeledGraph {
        let nodes: Vec<usize> = (0..self.n).filter(|&v| (mask >> v) & 1 == 1).collect();
        self.induced_subgraph(&nodes)
    }

    /// The graph with node `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> LabeledGraph {
        assert_eq!(perm.len(), self.n);
        let mut h = LabeledGraph::empty(self.n);
        for (u, v) in self.edges() {
            h.add_edge(perm[u], perm[v]);
        }
        h
    }

    /// Number of rows in which the adjacency matrices differ.
    pub fn row_distance(&self, other: &LabeledGraph) -> usize {
        assert_eq!(self.n, other.n, "row distance needs equal orders");
        self.rows
            .iter()
            .zip(&other.rows)
            .filter(|(a, b)| a != b)
            .count()
    }

    fn component_count(&self) -> usize {
        let mut seen = 0u64;
        let mut components = 0;
        for s in 0..self.n {
            if (seen >> s) & 1 == 1 {
                continue;
            }
            components += 1;
            let mut frontier = 1u64 << s;
            seen |= frontier;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.rows[v] & !seen;
                seen |= fresh;
                frontier |= fresh;
            }
        }
        components
    }
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} {{", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}-{}", u + 1, v + 1)?;
        }
        f.write_str("}")
    }
}

pub fn is_forest(g: &LabeledGraph) -> bool {
    g.edge_count() + g.component_count() == g.n()
}

pub fn is_triangle_free(g: &LabeledGraph) -> bool {
    g.edges().all(|(u, v)| g.row(u) & g.row(v) == 0)
}

pub fn is_matching(g: &LabeledGraph) -> bool {
    (0..g.n()).all(|v| g.degree(v) <= 1)
}

pub fn is_edgeless(g: &LabeledGraph) -> bool {
    g.rows().iter().all(|&r| r == 0)
}

/// True iff no four nodes induce a path on four nodes.
pub fn is_cograph(g: &LabeledGraph) -> bool {
    let n = g.n();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let quad = [a, b, c, d];
                    let mask: u64 = quad.iter().map(|&v| 1u64 << v).sum();
                    let mut degrees = [0u32; 4];
                    for (i, &v) in quad.iter().enumerate() {
                        degrees[i] = (g.row(v) & mask).count_ones();
                    }
                    degrees.sort_unstable();
                    // Among 4-node graphs only P4 has degrees (1,1,2,2).
                    if degrees == [1, 1, 2, 2] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

type Predicate = Box<dyn Fn(&LabeledGraph) -> bool + Send + Sync>;

/// A set of labeled graphs given by a membership predicate, enumerable for
/// every order up to `n_max`.
pub struct GraphClass {
    name: String,
    predicate: Predicate,
    hereditary: bool,
    edge_monotone: bool,
    n_max: usize,
    levels: Vec<OnceBox<Vec<LabeledGraph>>>,
}

impl fmt::Debug for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphClass")
            .field("name", &self.name)
            .field("hereditary", &self.hereditary)
            .field("edge_monotone", &self.edge_monotone)
            .field("n_max", &self.n_max)
            .finish()
    }
}

impl GraphClass {
    /// A class enumerated by filtering all graphs of each order.
    ///
    /// `hereditary` is a declaration; [`verify_hereditary`] checks it.
    pub fn new<F>(name: &str, n_max: usize, hereditary: bool, predicate: F) -> Self
    where
        F: Fn(&LabeledGraph) -> bool + Send + Sync + 'static,
    {
        assert!(n_max <= 11, "exhaustive enumeration is limited to n <= 11");
        GraphClass {
            name: name.to_string(),
            predicate: Box::new(predicate),
            hereditary,
            edge_monotone: false,
            n_max,
            levels: (0..=n_max).map(|_| OnceBox::new()).collect(),
        }
    }

    /// Declares the class closed under edge deletion, which lets the
    /// enumerator prune every extension of a non-member.
    pub fn with_edge_deletion_closure(mut self) -> Self {
        self.edge_monotone = true;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_hereditary(&self) -> bool {
        self.hereditary
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn contains(&self, g: &LabeledGraph) -> bool {
        (self.predicate)(g)
    }

    fn check_order(&self, n: usize) -> Result<(), GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyOrder);
        }
        if n > self.n_max {
            return Err(GraphError::UnsupportedScale {
                class: self.name.clone(),
                n,
                n_max: self.n_max,
            });
        }
        Ok(())
    }

    /// All members on `n` nodes in canonical order. Computed once per order.
    pub fn enumerate(&self, n: usize) -> Result<&[LabeledGraph], GraphError> {
        self.check_order(n)?;
        let level = self.levels[n].get_or_init(|| Box::new(self.enumerate_uncached(n)));
        Ok(level.as_slice())
    }

    fn enumerate_uncached(&self, n: usize) -> Vec<LabeledGraph> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let mut out = Vec::new();
        let mut g = LabeledGraph::empty(n);
        if self.edge_monotone && !self.contains(&g) {
            return out;
        }
        self.extend(&pairs, 0, &mut g, &mut out);
        out
    }

    // Depth-first over pair bits, 0 before 1, which yields canonical order.
    fn extend(
        &self,
        pairs: &[(usize, usize)],
        idx: usize,
        g: &mut LabeledGraph,
        out: &mut Vec<LabeledGraph>,
    ) {
        if idx == pairs.len() {
            if self.contains(g) {
                out.push(g.clone());
            }
            return;
        }
        self.extend(pairs, idx + 1, g, out);
        let (u, v) = pairs[idx];
        g.add_edge(u, v);
        if !self.edge_monotone || self.contains(g) {
            self.extend(pairs, idx + 1, g, out);
        }
        g.remove_edge(u, v);
    }

    /// Position of `g` in the canonical listing, if it is a member.
    pub fn index_of(&self, g: &LabeledGraph) -> Result<Option<usize>, GraphError> {
        let members = self.enumerate(g.n())?;
        Ok(members.binary_search_by(|h| h.canonical_cmp(g)).ok())
    }

    /// `|G_n|` by exhaustive enumeration.
    pub fn cardinality(&self, n: usize) -> Result<u64, GraphError> {
        Ok(self.enumerate(n)?.len() as u64)
    }

    /// `f(n) = n * max_{k <= n} log2|G_k| / k`, skipping empty levels.
    pub fn f_of_n(&self, n: usize) -> Result<f64, GraphError> {
        let mut best: Option<f64> = None;
        for k in 1..=n {
            let size = self.cardinality(k)?;
            if size == 0 {
                continue;
            }
            let ratio = libm::log2(size as f64) / k as f64;
            best = Some(best.map_or(ratio, |b| b.max(ratio)));
        }
        best.map(|b| n as f64 * b).ok_or_else(|| GraphError::EmptyClass {
            class: self.name.clone(),
            n,
        })
    }

    /// `ceil(f(n) / n)` computed on integers: the least `c >= 0` with
    /// `|G_k| <= 2^(c k)` for every `k <= n`.
    pub fn growth_exponent(&self, n: usize) -> Result<u32, GraphError> {
        let mut c = 0;
        let mut any = false;
        for k in 1..=n {
            let size = self.cardinality(k)?;
            if size > 0 {
                any = true;
                c = c.max(ceil_log2_over(u128::from(size), k as u32));
            }
        }
        if any {
            Ok(c)
        } else {
            Err(GraphError::EmptyClass {
                class: self.name.clone(),
                n,
            })
        }
    }
}

/// Least integer `c >= 0` with `count <= 2^(c * k)`, i.e. `ceil(log2(count) / k)`.
pub fn ceil_log2_over(count: u128, k: u32) -> u32 {
    assert!(k > 0);
    let mut c = 0u32;
    while c * k < 128 && count > 1u128 << (c * k) {
        c += 1;
    }
    c
}

/// Checks closure under induced subgraphs for every member up to `n_max` nodes.
pub fn verify_hereditary(class: &GraphClass, n_max: usize) -> Result<bool, GraphError> {
    assert!(n_max <= 5, "hereditary check is exhaustive over subsets, n <= 5");
    for m in 1..=n_max {
        for g in class.enumerate(m)? {
            for mask in 1u64..(1 << m) {
                if !class.contains(&g.induced_by_mask(mask)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn all_graphs() -> GraphClass {
    GraphClass::new("all-graphs", 6, true, |_| true).with_edge_deletion_closure()
}

pub fn empty_graphs() -> GraphClass {
    GraphClass::new("empty-graphs", 7, true, is_edgeless).with_edge_deletion_closure()
}

pub fn forests() -> GraphClass {
    GraphClass::new("forests", 7, true, is_forest).with_edge_deletion_closure()
}

pub fn triangle_free() -> GraphClass {
    GraphClass::new("triangle-free", 6, true, is_triangle_free).with_edge_deletion_closure()
}

pub fn matchings() -> GraphClass {
    GraphClass::new("matchings", 7, true, is_matching).with_edge_deletion_closure()
}

pub fn cographs() -> GraphClass {
    GraphClass::new("cographs", 6, true, is_cograph)
}

pub const CATALOG_NAMES: [&str; 6] = [
    "all-graphs",
    "empty-graphs",
    "forests",
    "triangle-free",
    "matchings",
    "cographs",
];

pub fn catalog() -> Vec<GraphClass> {
    vec![
        all_graphs(),
        empty_graphs(),
        forests(),
        triangle_free(),
        matchings(),
        cographs(),
    ]
}

pub fn class_by_name(name: &str) -> Option<GraphClass> {
    match name {
        "all-graphs" => Some(all_graphs()),
        "empty-graphs" => Some(empty_graphs()),
        "forests" => Some(forests()),
        "triangle-free" => Some(triangle_free()),
        "matchings" => Some(matchings()),
        "cographs" => Some(cographs()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> LabeledGraph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        LabeledGraph::from_edges(n, &edges)
    }

    #[test]
    fn induced_examples() {
        let tri = LabeledGraph::complete(3);
        assert_eq!(tri.induced_subgraph(&[0, 1]), LabeledGraph::complete(2));
        assert_eq!(path(3).induced_subgraph(&[0, 2]), LabeledGraph::empty(2));
        assert_eq!(path(4).induced_subgraph(&[0, 1, 2, 3]), path(4));
        assert_eq!(path(4).induced_subgraph(&[3, 2, 3]), path(2));
    }

    #[test]
    #[should_panic(expected = "empty node set")]
    fn induced_empty_panics() {
        path(3).induced_subgraph(&[]);
    }

    #[test]
    fn codes_follow_upper_triangle_order() {
        // Pairs for n = 3: (0,1) (0,2) (1,2), most significant first.
        assert_eq!(LabeledGraph::from_edges(3, &[(0, 1)]).code(), 0b100);
        assert_eq!(LabeledGraph::from_edges(3, &[(1, 2)]).code(), 0b001);
        for code in 0..64 {
            assert_eq!(LabeledGraph::from_code(4, code).code(), code);
        }
    }

    #[test]
    fn cardinalities() {
        assert_eq!(all_graphs().cardinality(3), Ok(8));
        let f = forests();
        let sizes: Vec<u64> = (1..=7).map(|n| f.cardinality(n).unwrap()).collect();
        assert_eq!(sizes, [1, 2, 7, 38, 291, 2932, 36961]);
        assert_eq!(empty_graphs().cardinality(5), Ok(1));
        // Involutions: 1, 2, 4, 10, 26, 76.
        let m = matchings();
        let sizes: Vec<u64> = (1..=6).map(|n| m.cardinality(n).unwrap()).collect();
        assert_eq!(sizes, [1, 2, 4, 10, 26, 76]);
    }

    #[test]
    fn scale_limit() {
        assert!(matches!(
            all_graphs().cardinality(7),
            Err(GraphError::UnsupportedScale { n: 7, n_max: 6, .. })
        ));
        assert_eq!(forests().enumerate(0).unwrap_err(), GraphError::EmptyOrder);
    }

    #[test]
    fn f_of_n_examples() {
        assert!((all_graphs().f_of_n(3).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(empty_graphs().f_of_n(6).unwrap(), 0.0);
        let expected = 3.0 * libm::log2(7.0) / 3.0;
        assert!((forests().f_of_n(3).unwrap() - expected).abs() < 1e-12);
        assert!((forests().f_of_n(3).unwrap() - 2.807).abs() < 1e-3);
        let none = GraphClass::new("nothing", 4, true, |_| false);
        assert!(matches!(none.f_of_n(3), Err(GraphError::EmptyClass { .. })));
    }

    #[test]
    fn growth_exponent_matches_real_ceiling() {
        for class in catalog() {
            for n in 1..=5 {
                let exact = class.growth_exponent(n).unwrap();
                let real = class.f_of_n(n).unwrap() / n as f64;
                assert!(f64::from(exact) >= real - 1e-9);
                assert!(f64::from(exact) < real + 1.0);
            }
        }
        assert_eq!(ceil_log2_over(1, 3), 0);
        assert_eq!(ceil_log2_over(1444, 4), 3);
        assert_eq!(ceil_log2_over(4, 2), 1);
        assert_eq!(ceil_log2_over(5, 2), 2);
    }

    #[test]
    fn hereditary_examples() {
        assert_eq!(verify_hereditary(&forests(), 5), Ok(true));
        assert_eq!(verify_hereditary(&all_graphs(), 4), Ok(true));
        let single_edge = GraphClass::new("single-edge", 4, false, |g| {
            g.n() == 2 && g.edge_count() == 1
        });
        assert_eq!(verify_hereditary(&single_edge, 3), Ok(false));
        for class in catalog() {
            assert_eq!(verify_hereditary(&class, 5), Ok(true), "{}", class.name());
        }
    }

    #[test]
    fn enumeration_matches_brute_scan() {
        for class in catalog() {
            for n in 1..=class.n_max().min(6) {
                let pairs = n * (n - 1) / 2;
                let scanned: Vec<LabeledGraph> = (0..1u64 << pairs)
                    .map(|c| LabeledGraph::from_code(n, c))
                    .filter(|g| class.contains(g))
                    .collect();
                assert_eq!(class.enumerate(n).unwrap(), scanned.as_slice(), "{} n={n}", class.name());
            }
        }
    }

    #[test]
    fn catalog_closed_under_relabeling() {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        for class in catalog() {
            for n in 1..=4 {
                for g in class.enumerate(n).unwrap() {
                    for p in perms(n) {
                        assert!(class.contains(&g.relabel(&p)));
                    }
                }
            }
        }
    }

    #[test]
    fn cograph_counts() {
        // Labeled cographs: 1, 2, 8, 52, 472, 5504.
        let c = cographs();
        let sizes: Vec<u64> = (1..=6).map(|n| c.cardinality(n).unwrap()).collect();
        assert_eq!(sizes, [1, 2, 8, 52, 472, 5504]);
        assert!(!is_cograph(&path(4)));
    }

    #[test]
    fn index_lookup() {
        let f = forests();
        for (i, g) in f.enumerate(4).unwrap().iter().enumerate() {
            assert_eq!(f.index_of(g), Ok(Some(i)));
        }
        assert_eq!(f.index_of(&LabeledGraph::complete(4)), Ok(None));
    }

    #[test]
    fn rows_validation() {
        assert!(LabeledGraph::from_rows(vec![0b10, 0b01]).is_some());
        assert!(LabeledGraph::from_rows(vec![0b10, 0b00]).is_none());
        assert!(LabeledGraph::from_rows(vec![0b01]).is_none());
    }
}
