//! Seeded generation of random problem instances, used by the verification
//! tooling. The generator is SplitMix64 so fixtures regenerate identically
//! from a seed in any implementation:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output = z ^ (z >> 31)
//! ```
//!
//! Doubles are `(output >> 11) * 2^-53` in `[0, 1)`.

use crate::gm::{GmParams, ProductStateParams};
use crate::hypergraph::{Edge, WeightedHypergraph};
use crate::pm::{IsingWeights, MixerAxes, PmParams};

/// SplitMix64 pseudo-random stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform double in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform double in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn uniform_usize(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn unit_axis(&mut self) -> [f64; 3] {
        loop {
            let v = [
                self.uniform(-1.0, 1.0),
                self.uniform(-1.0, 1.0),
                self.uniform(-1.0, 1.0),
            ];
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if norm > 1e-3 {
                return [v[0] / norm, v[1] / norm, v[2] / norm];
            }
        }
    }
}

/// A random weighted Ising instance for PM verification: G(n, 1/2) edges,
/// weights and independent phase weights U(-2, 2), per-term angles, random
/// unit mixer axes.
pub fn random_pm_instance(
    rng: &mut SplitMix64,
    n: usize,
) -> (
    WeightedHypergraph<f64>,
    IsingWeights<f64>,
    PmParams<f64>,
    MixerAxes<f64>,
) {
    let mut triples = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.next_f64() < 0.5 {
                triples.push((
                    Edge::pair(u, v).expect("distinct"),
                    rng.uniform(-2.0, 2.0),
                    rng.uniform(-2.0, 2.0),
                ));
            }
        }
    }
    let graph = WeightedHypergraph::new(n, triples).expect("valid graph");
    let m = graph.m();
    let weights = IsingWeights {
        a: rng.uniform(-2.0, 2.0),
        a_prime: rng.uniform(-2.0, 2.0),
        h: (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect(),
        h_prime: (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect(),
        j: graph.edges().iter().map(|e| e.cost).collect(),
        j_prime: graph.edges().iter().map(|e| e.phase).collect(),
    };
    let params = PmParams {
        beta: (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect(),
        gamma_vertex: (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect(),
        gamma_edge: (0..m).map(|_| rng.uniform(-2.0, 2.0)).collect(),
        gamma_const: rng.uniform(-2.0, 2.0),
    };
    let axes = MixerAxes::new((0..n).map(|_| rng.unit_axis()).collect()).expect("unit axes");
    (graph, weights, params, axes)
}

/// A random weighted hypergraph with `m` distinct edges of arity at most
/// `max_arity` (the empty edge may occur), plus `p`-layer GM angles and a
/// random product state.
pub fn random_gm_instance(
    rng: &mut SplitMix64,
    n: usize,
    m: usize,
    max_arity: usize,
    p: usize,
) -> (
    WeightedHypergraph<f64>,
    GmParams<f64>,
    ProductStateParams<f64>,
) {
    let mut triples: Vec<(Edge, f64, f64)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut guard = 0;
    while triples.len() < m && guard < 10_000 {
        guard += 1;
        let arity = rng.uniform_usize(0, max_arity.min(n));
        let mut pool: Vec<usize> = (0..n).collect();
        for i in (1..pool.len()).rev() {
            let j = rng.uniform_usize(0, i);
            pool.swap(i, j);
        }
        pool.truncate(arity);
        let edge = Edge::new(pool).expect("distinct vertices");
        if seen.insert(edge.clone()) {
            triples.push((edge, rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)));
        }
    }
    let graph = WeightedHypergraph::new(n, triples).expect("valid hypergraph");
    let m = graph.m();
    let params = GmParams {
        gamma: (0..p)
            .map(|_| (0..m).map(|_| rng.uniform(-1.5, 1.5)).collect())
            .collect(),
        beta: (0..p).map(|_| rng.uniform(-2.0, 2.0)).collect(),
    };
    let state = ProductStateParams::new(
        (0..n)
            .map(|_| rng.uniform(0.0, std::f64::consts::TAU))
            .collect(),
        (0..n)
            .map(|_| rng.uniform(0.0, std::f64::consts::PI))
            .collect(),
    )
    .expect("valid state");
    (graph, params, state)
}
