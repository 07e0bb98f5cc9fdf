//! Builders mapping optimization problems onto Ising weight structures.
//!
//! Phase weights default to cost weights; instances expose explicit phase
//! overrides where the formulation allows distinct phase Hamiltonians.

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, WeightedHypergraph};
use crate::pm::IsingWeights;
use crate::scalar::{lit, Real};

/// Weighted MaxCut instance: a simple graph whose edge cost weights are the
/// cut weights (edge phase weights act as the optional phase override).
#[derive(Debug, Clone)]
pub struct MaxCutInstance<T> {
    graph: WeightedHypergraph<T>,
}

impl<T: Real> MaxCutInstance<T> {
    pub fn new(graph: WeightedHypergraph<T>) -> Result<Self> {
        if !graph.is_simple_graph() {
            return Err(Error::NotASimpleGraph);
        }
        Ok(MaxCutInstance { graph })
    }

    pub fn graph(&self) -> &WeightedHypergraph<T> {
        &self.graph
    }
}

/// MaxIndependentSet instance in the penalty (QUBO) formulation.
#[derive(Debug, Clone)]
pub struct MisInstance<T> {
    graph: WeightedHypergraph<T>,
    pub s: Vec<T>,
    pub s_prime: Vec<T>,
    pub lambda1: T,
    pub lambda2: T,
    pub lambda1_prime: T,
    pub lambda2_prime: T,
}

impl<T: Real> MisInstance<T> {
    pub fn new(
        graph: WeightedHypergraph<T>,
        s: Vec<T>,
        s_prime: Vec<T>,
        (lambda1, lambda2): (T, T),
        (lambda1_prime, lambda2_prime): (T, T),
    ) -> Result<Self> {
        if !graph.is_simple_graph() {
            return Err(Error::NotASimpleGraph);
        }
        if s.len() != graph.n() || s_prime.len() != graph.n() {
            return Err(Error::ShapeMismatch {
                what: "mis vertex weights",
                expected: graph.n(),
                got: s.len().min(s_prime.len()),
            });
        }
        if lambda2 <= T::zero() || lambda2_prime <= T::zero() {
            return Err(Error::PenaltyNotPositive);
        }
        if !(lambda1.is_finite() && lambda2.is_finite()) {
            return Err(Error::NonFiniteWeight);
        }
        Ok(MisInstance {
            graph,
            s,
            s_prime,
            lambda1,
            lambda2,
            lambda1_prime,
            lambda2_prime,
        })
    }

    pub fn graph(&self) -> &WeightedHypergraph<T> {
        &self.graph
    }
}

/// MaxCut weights: `a = W/2`, `h = 0`, `J_uv = -w_uv/2`, with the phase side
/// built from the instance's phase weights (equal to cost by default).
pub fn maxcut_to_ising<T: Real>(inst: &MaxCutInstance<T>) -> IsingWeights<T> {
    let g = inst.graph();
    let half = lit::<T>(0.5);
    let w_total = g.total_cost_weight();
    let wp_total = g.edges().iter().fold(T::zero(), |acc, e| acc + e.phase);
    IsingWeights {
        a: w_total * half,
        a_prime: wp_total * half,
        h: vec![T::zero(); g.n()],
        h_prime: vec![T::zero(); g.n()],
        j: g.edges().iter().map(|e| -e.cost * half).collect(),
        j_prime: g.edges().iter().map(|e| -e.phase * half).collect(),
    }
}

/// MIS penalty weights: `a = l1 sum(s) - l2 m`, `h_u = l2 deg(u) - l1 s_u`,
/// `J = -l2`, and the primed analogues from the primed parameters.
pub fn mis_to_ising<T: Real>(inst: &MisInstance<T>) -> IsingWeights<T> {
    let g = inst.graph();
    let m_count = T::from_usize(g.m()).unwrap();
    let sum = |v: &[T]| v.iter().fold(T::zero(), |a, &x| a + x);
    let degrees: Vec<T> = (0..g.n())
        .map(|u| T::from_usize(g.degree(u)).unwrap())
        .collect();
    IsingWeights {
        a: inst.lambda1 * sum(&inst.s) - inst.lambda2 * m_count,
        a_prime: inst.lambda1_prime * sum(&inst.s_prime) - inst.lambda2_prime * m_count,
        h: (0..g.n())
            .map(|u| inst.lambda2 * degrees[u] - inst.lambda1 * inst.s[u])
            .collect(),
        h_prime: (0..g.n())
            .map(|u| inst.lambda2_prime * degrees[u] - inst.lambda1_prime * inst.s_prime[u])
            .collect(),
        j: vec![-inst.lambda2; g.m()],
        j_prime: vec![-inst.lambda2_prime; g.m()],
    }
}

/// Exact Ising form of a QUBO `offset + linear.x + x.Q.x` (Q upper
/// triangular, diagonal folded into the linear part) under `x = (1 - Z)/2`.
/// Returns the interaction graph (edges where `Q` is nonzero) and weights;
/// phase weights default to cost weights.
pub fn qubo_to_ising<T: Real>(
    q: &[Vec<T>],
    linear: &[T],
    offset: T,
) -> Result<(WeightedHypergraph<T>, IsingWeights<T>)> {
    let n = linear.len();
    if q.len() != n || q.iter().any(|row| row.len() != n) {
        return Err(Error::ShapeMismatch {
            what: "qubo matrix",
            expected: n,
            got: q.len(),
        });
    }
    let half = lit::<T>(0.5);
    let quarter = lit::<T>(0.25);
    // x_u^2 = x_u folds the diagonal into the linear coefficients
    let lin: Vec<T> = (0..n).map(|u| linear[u] + q[u][u]).collect();
    let mut a = offset;
    let mut h = vec![T::zero(); n];
    for u in 0..n {
        a += half * lin[u];
        h[u] -= half * lin[u];
    }
    let mut edges = Vec::new();
    let mut j = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let quv = q[u][v];
            if quv == T::zero() {
                continue;
            }
            a += quarter * quv;
            h[u] -= quarter * quv;
            h[v] -= quarter * quv;
            edges.push((Edge::pair(u, v)?, quarter * quv, quarter * quv));
            j.push(quarter * quv);
        }
    }
    let graph = WeightedHypergraph::new(n, edges)?;
    let weights = IsingWeights::from_cost(a, h, j);
    Ok((graph, weights))
}

/// Classical cost of a bit assignment under Ising weights on a graph:
/// `a + sum h_u z_u + sum J_uv z_u z_v` with `z = 1 - 2x`.
pub fn ising_cost_of_bits<T: Real>(
    graph: &WeightedHypergraph<T>,
    weights: &IsingWeights<T>,
    bits: &[bool],
) -> T {
    let z = |u: usize| if bits[u] { -T::one() } else { T::one() };
    let mut total = weights.a;
    for u in 0..graph.n() {
        total += weights.h[u] * z(u);
    }
    for (k, we) in graph.edges().iter().enumerate() {
        let vs = we.edge.vertices();
        total += weights.j[k] * z(vs[0]) * z(vs[1]);
    }
    total
}
