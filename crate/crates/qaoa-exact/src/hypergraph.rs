//! Weighted hypergraphs and the neighborhood decompositions used by the
//! product-mixer formulas.
//!
//! Edges are subsets of the vertex set `0..n`; the empty edge is a valid
//! edge and carries the constant cost offset. Every edge has an independent
//! cost weight and phase weight, and the construction order of edges is the
//! canonical index used by all per-edge angle sequences and subhypergraph
//! bit strings.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A hyperedge: strictly increasing vertex ids, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(Vec<usize>);

impl Edge {
    /// Builds an edge from vertex ids in any order; rejects duplicates.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertexInEdge);
        }
        Ok(Edge(vertices))
    }

    /// The empty edge (constant term).
    pub fn empty() -> Self {
        Edge(Vec::new())
    }

    /// Convenience constructor for a 2-vertex edge.
    pub fn pair(u: usize, v: usize) -> Result<Self> {
        Edge::new(vec![u, v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.0.binary_search(&u).is_ok()
    }
}

/// One edge of a [`WeightedHypergraph`] with its cost and phase weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEdge<T> {
    pub edge: Edge,
    pub cost: T,
    pub phase: T,
}

/// A weighted undirected hypergraph. Immutable after construction; the edge
/// order is stable and indexes every per-edge quantity elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedHypergraph<T> {
    n: usize,
    edges: Vec<WeightedEdge<T>>,
    index: HashMap<Edge, usize>,
}

impl<T: Real> WeightedHypergraph<T> {
    /// Builds a hypergraph from `(edge, cost_weight, phase_weight)` triples.
    pub fn new(n: usize, triples: Vec<(Edge, T, T)>) -> Result<Self> {
        let mut edges = Vec::with_capacity(triples.len());
        let mut index = HashMap::with_capacity(triples.len());
        for (edge, cost, phase) in triples {
            if let Some(&v) = edge.vertices().iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if !cost.is_finite() || !phase.is_finite() {
                return Err(Error::NonFiniteWeight);
            }
            if index.insert(edge.clone(), edges.len()).is_some() {
                return Err(Error::DuplicateEdge);
            }
            edges.push(WeightedEdge { edge, cost, phase });
        }
        Ok(WeightedHypergraph { n, edges, index })
    }

    /// Builds a simple graph from `(u, v, weight)` triples with phase weights
    /// equal to cost weights.
    pub fn from_weighted_pairs(n: usize, pairs: &[(usize, usize, T)]) -> Result<Self> {
        let triples = pairs
            .iter()
            .map(|&(u, v, w)| Ok((Edge::pair(u, v)?, w, w)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, triples)
    }

    /// Unit-weight path graph 0-1-...-(n-1).
    pub fn path(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|v| (v - 1, v, T::one())).collect();
        Self::from_weighted_pairs(n, &pairs).expect("valid path")
    }

    /// Unit-weight cycle graph on n vertices.
    pub fn cycle(n: usize) -> Self {
        let pairs: Vec<_> = (0..n).map(|v| (v, (v + 1) % n, T::one())).collect();
        Self::from_weighted_pairs(n, &pairs).expect("valid cycle")
    }

    /// Unit-weight complete graph on n vertices.
    pub fn complete(n: usize) -> Self {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                pairs.push((u, v, T::one()));
            }
        }
        Self::from_weighted_pairs(n, &pairs).expect("valid complete graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges, counting the empty edge if present.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[WeightedEdge<T>] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &WeightedEdge<T> {
        &self.edges[k]
    }

    pub fn edge_index(&self, edge: &Edge) -> Option<usize> {
        self.index.get(edge).copied()
    }

    pub fn contains_edge(&self, edge: &Edge) -> bool {
        self.index.contains_key(edge)
    }

    /// Total cost weight over all edges.
    pub fn total_cost_weight(&self) -> T {
        self.edges.iter().fold(T::zero(), |acc, e| acc + e.cost)
    }

    /// True when every edge touches exactly two vertices.
    pub fn is_simple_graph(&self) -> bool {
        self.edges.iter().all(|e| e.edge.arity() == 2)
    }

    /// Indices of edges incident to vertex `u`, in construction order.
    pub fn incident_edges(&self, u: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.edge.contains(u))
            .map(|(k, _)| k)
            .collect()
    }

    /// Neighbors of `u` on a simple graph, as a sorted set.
    pub fn neighbors(&self, u: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for e in &self.edges {
            if e.edge.arity() == 2 && e.edge.contains(u) {
                let vs = e.edge.vertices();
                out.insert(if vs[0] == u { vs[1] } else { vs[0] });
            }
        }
        out
    }

    /// Vertex degree counting only 2-vertex edges.
    pub fn degree(&self, u: usize) -> usize {
        self.neighbors(u).len()
    }
}

/// The neighborhood sets around an edge `{u, v}` of a simple graph.
///
/// `n_uv` holds the common neighbors (each closes a triangle with the edge),
/// `n_u_bbslash_v` the neighbors of `u` that are not `v` and not adjacent to
/// `v`, and `n_u_minus_v` their disjoint union, i.e. all neighbors of `u`
/// except `v`. The `v`-side sets mirror these.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodDecomposition {
    pub n_u_minus_v: BTreeSet<usize>,
    pub n_u_bbslash_v: BTreeSet<usize>,
    pub n_v_minus_u: BTreeSet<usize>,
    pub n_v_bbslash_u: BTreeSet<usize>,
    pub n_uv: BTreeSet<usize>,
}

impl NeighborhoodDecomposition {
    /// deg(u) - 1.
    pub fn d(&self) -> usize {
        self.n_u_minus_v.len()
    }

    /// deg(v) - 1.
    pub fn e(&self) -> usize {
        self.n_v_minus_u.len()
    }

    /// Number of triangles containing the edge.
    pub fn f(&self) -> usize {
        self.n_uv.len()
    }
}

/// Decomposes the neighborhoods of an edge `{u, v}` of a simple graph.
pub fn neighborhoods<T: Real>(
    graph: &WeightedHypergraph<T>,
    u: usize,
    v: usize,
) -> Result<NeighborhoodDecomposition> {
    if !graph.is_simple_graph() {
        return Err(Error::NotASimpleGraph);
    }
    let edge = Edge::pair(u, v).map_err(|_| Error::NotAnEdge { u, v })?;
    if !graph.contains_edge(&edge) {
        return Err(Error::NotAnEdge { u, v });
    }
    let nu = graph.neighbors(u);
    let nv = graph.neighbors(v);
    let n_uv: BTreeSet<_> = nu.intersection(&nv).copied().collect();
    let mut n_u_minus_v = nu.clone();
    n_u_minus_v.remove(&v);
    let mut n_v_minus_u = nv.clone();
    n_v_minus_u.remove(&u);
    let n_u_bbslash_v: BTreeSet<_> = n_u_minus_v.difference(&n_uv).copied().collect();
    let n_v_bbslash_u: BTreeSet<_> = n_v_minus_u.difference(&n_uv).copied().collect();
    Ok(NeighborhoodDecomposition {
        n_u_minus_v,
        n_u_bbslash_v,
        n_v_minus_u,
        n_v_bbslash_u,
        n_uv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> WeightedHypergraph<f64> {
        WeightedHypergraph::complete(3)
    }

    #[test]
    fn edge_sorts_and_rejects_duplicates() {
        let e = Edge::new(vec![3, 1, 2]).unwrap();
        assert_eq!(e.vertices(), &[1, 2, 3]);
        assert!(Edge::new(vec![1, 1]).is_err());
        assert!(Edge::empty().is_empty());
    }

    #[test]
    fn hypergraph_rejects_bad_input() {
        let e = Edge::pair(0, 5).unwrap();
        assert_eq!(
            WeightedHypergraph::new(3, vec![(e, 1.0, 1.0)]),
            Err(Error::VertexOutOfRange { vertex: 5, n: 3 })
        );
        let e = Edge::pair(0, 1).unwrap();
        assert_eq!(
            WeightedHypergraph::new(3, vec![(e.clone(), 1.0, 1.0), (e, 2.0, 2.0)]),
            Err(Error::DuplicateEdge)
        );
    }

    #[test]
    fn neighborhoods_on_triangle() {
        let nd = neighborhoods(&k3(), 0, 1).unwrap();
        assert_eq!(nd.n_uv, BTreeSet::from([2]));
        assert!(nd.n_u_bbslash_v.is_empty());
        assert_eq!((nd.d(), nd.e(), nd.f()), (1, 1, 1));
    }

    #[test]
    fn neighborhoods_on_path() {
        let p3: WeightedHypergraph<f64> = WeightedHypergraph::path(3);
        let nd = neighborhoods(&p3, 0, 1).unwrap();
        assert!(nd.n_uv.is_empty());
        assert_eq!(nd.n_v_minus_u, BTreeSet::from([2]));
        assert_eq!((nd.d(), nd.e(), nd.f()), (0, 1, 0));
    }

    #[test]
    fn neighborhoods_rejects_non_edges_and_hyperedges() {
        let p3: WeightedHypergraph<f64> = WeightedHypergraph::path(3);
        assert_eq!(
            neighborhoods(&p3, 0, 2),
            Err(Error::NotAnEdge { u: 0, v: 2 })
        );
        let h = WeightedHypergraph::new(3, vec![(Edge::new(vec![0, 1, 2]).unwrap(), 1.0, 1.0)])
            .unwrap();
        assert_eq!(neighborhoods(&h, 0, 1), Err(Error::NotASimpleGraph));
    }

    /// Brute-force set builder over adjacency lists, as an independent check
    /// on random graphs.
    #[test]
    fn neighborhoods_match_double_loop_builder() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) as f64 / (1u64 << 31) as f64
        };
        for _ in 0..20 {
            let n = 8;
            let mut pairs = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if next() < 0.5 {
                        pairs.push((u, v, 1.0));
                    }
                }
            }
            let g = WeightedHypergraph::from_weighted_pairs(n, &pairs).unwrap();
            for &(u, v, _) in &pairs {
                let nd = neighborhoods(&g, u, v).unwrap();
                let mut nu = BTreeSet::new();
                let mut nv = BTreeSet::new();
                for &(a, b, _) in &pairs {
                    if a == u {
                        nu.insert(b);
                    }
                    if b == u {
                        nu.insert(a);
                    }
                    if a == v {
                        nv.insert(b);
                    }
                    if b == v {
                        nv.insert(a);
                    }
                }
                let common: BTreeSet<_> = nu.intersection(&nv).copied().collect();
                let mut numv = nu.clone();
                numv.remove(&v);
                let mut nvmu = nv.clone();
                nvmu.remove(&u);
                assert_eq!(nd.n_uv, common);
                assert_eq!(nd.n_u_minus_v, numv);
                assert_eq!(nd.n_v_minus_u, nvmu);
                // disjoint-union invariant
                assert!(nd.n_u_bbslash_v.is_disjoint(&nd.n_uv));
                let rebuilt: BTreeSet<_> = nd.n_u_bbslash_v.union(&nd.n_uv).copied().collect();
                assert_eq!(rebuilt, nd.n_u_minus_v);
                assert!(!nd.n_u_minus_v.contains(&u) && !nd.n_u_minus_v.contains(&v));
            }
        }
    }
}
