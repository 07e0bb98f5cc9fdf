//! Brute-force statevector simulator of the exact QAOA circuits; the ground
//! truth every analytic formula is checked against.
//!
//! Qubit ordering is little-endian throughout: qubit 0 is the least
//! significant bit of a basis-state index.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::gm::{GmParams, ProductStateParams};
use crate::hypergraph::{Edge, WeightedHypergraph};
use crate::pm::{IsingWeights, MixerAxes, PmParams};
use crate::scalar::{lit, Real};

/// Options for the circuit runners.
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Apply the physically irrelevant constant (global-phase) terms too.
    pub include_constant_phase: bool,
    /// Refuse simulations above this qubit count.
    pub qubit_cap: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            include_constant_phase: false,
            qubit_cap: 16,
        }
    }
}

/// Dense state of `n` qubits: `2^n` complex amplitudes, qubit 0 = LSB.
#[derive(Debug, Clone)]
pub struct StateVector<T> {
    n: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// `(x) R_Z(lambda_u) R_Y(omega_u) |0>`.
    pub fn prepare_product_state(state: &ProductStateParams<T>) -> Self {
        let n = state.n();
        let half = lit::<T>(0.5);
        // per-qubit amplitudes for |0> and |1>
        let qubit_amps: Vec<[Complex<T>; 2]> = (0..n)
            .map(|u| {
                let (lam, om) = (state.lambda()[u], state.omega()[u]);
                let (c, s) = ((om * half).cos(), (om * half).sin());
                [
                    Complex::from_polar(T::one(), -lam * half) * c,
                    Complex::from_polar(T::one(), lam * half) * s,
                ]
            })
            .collect();
        let mut amps = Vec::with_capacity(1 << n);
        for x in 0..(1usize << n) {
            let mut a = Complex::new(T::one(), T::zero());
            for (u, qa) in qubit_amps.iter().enumerate() {
                a *= qa[x >> u & 1];
            }
            amps.push(a);
        }
        let sv = StateVector { n, amps };
        debug_assert!(sv.norm_error() < lit(1e-12));
        sv
    }

    /// The uniform superposition `|s>`.
    pub fn uniform(n: usize) -> Self {
        Self::prepare_product_state(&ProductStateParams::uniform_s(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    fn norm_error(&self) -> T {
        let norm2 = self
            .amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr());
        (norm2 - T::one()).abs()
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &StateVector<T>) -> Complex<T> {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            })
    }

    /// Applies the diagonal phase unitary `exp(-i sum_e gamma_e w'_e Z_e)`
    /// over the given edges (empty edge included when present).
    pub fn apply_phase(&mut self, graph: &WeightedHypergraph<T>, gamma: &[T]) {
        assert_eq!(gamma.len(), graph.m(), "gamma length");
        let masks: Vec<u64> = graph
            .edges()
            .iter()
            .map(|we| we.edge.vertices().iter().fold(0u64, |m, &u| m | 1 << u))
            .collect();
        for (x, amp) in self.amps.iter_mut().enumerate() {
            let mut angle = T::zero();
            for (k, we) in graph.edges().iter().enumerate() {
                let parity = (x as u64 & masks[k]).count_ones() % 2;
                let sign = if parity == 1 { -T::one() } else { T::one() };
                angle += gamma[k] * we.phase * sign;
            }
            *amp *= Complex::from_polar(T::one(), -angle);
        }
        debug_assert!(self.norm_error() < lit(1e-12));
    }

    /// Applies `prod_u exp(-i beta_u r_u . P_u)` as independent single-qubit
    /// rotations.
    pub fn apply_product_mixer(&mut self, axes: &MixerAxes<T>, beta: &[T]) {
        assert_eq!(axes.n(), self.n, "axes length");
        assert_eq!(beta.len(), self.n, "beta length");
        for (u, b) in beta.iter().enumerate() {
            let r = axes.axis(u);
            let (c, s) = (b.cos(), b.sin());
            // cos(b) I - i sin(b) (r . P) as a 2x2 on qubit u
            let m00 = Complex::new(c, -s * r[2]);
            let m01 = Complex::new(-s * r[1], -s * r[0]);
            let m10 = Complex::new(s * r[1], -s * r[0]);
            let m11 = Complex::new(c, s * r[2]);
            let bit = 1usize << u;
            for x in 0..self.amps.len() {
                if x & bit != 0 {
                    continue;
                }
                let a0 = self.amps[x];
                let a1 = self.amps[x | bit];
                self.amps[x] = m00 * a0 + m01 * a1;
                self.amps[x | bit] = m10 * a0 + m11 * a1;
            }
        }
        debug_assert!(self.norm_error() < lit(1e-12));
    }

    /// Applies `exp(-i beta |Omega><Omega|)` as the rank-one update
    /// `psi + (e^{-i beta} - 1) <Omega|psi> |Omega>`.
    pub fn apply_grover_mixer(&mut self, omega: &StateVector<T>, beta: T) {
        let overlap = omega.inner(self);
        let factor = (Complex::from_polar(T::one(), -beta) - T::one()) * overlap;
        for (a, o) in self.amps.iter_mut().zip(&omega.amps) {
            *a += factor * o;
        }
        debug_assert!(self.norm_error() < lit(1e-12));
    }

    /// `<Z_e> = sum_x |psi_x|^2 (-1)^(parity of x on e)`.
    pub fn measure_z_edge(&self, e: &Edge) -> T {
        let mask = e.vertices().iter().fold(0u64, |m, &u| m | 1 << u);
        let mut total = T::zero();
        for (x, amp) in self.amps.iter().enumerate() {
            let parity = (x as u64 & mask).count_ones() % 2;
            let sign = if parity == 1 { -T::one() } else { T::one() };
            total += amp.norm_sqr() * sign;
        }
        total
    }

    /// `<Z_u>` of a single qubit.
    pub fn measure_z_vertex(&self, u: usize) -> T {
        self.measure_z_edge(&Edge::new(vec![u]).expect("single vertex"))
    }
}

/// Per-term expectations of a PM-QAOA circuit run.
#[derive(Debug, Clone)]
pub struct PmRun<T> {
    /// `<Z_u>` per vertex.
    pub f_vertex: Vec<T>,
    /// `<Z_u Z_v>` per edge, in graph edge order.
    pub f_edge: Vec<T>,
    /// `a + sum h_u <Z_u> + sum J_uv <Z_u Z_v>`.
    pub total: T,
}

/// Runs the exact single-layer PM circuit on `|s>` and measures every cost
/// term.
pub fn run_pm<T: Real>(
    graph: &WeightedHypergraph<T>,
    weights: &IsingWeights<T>,
    params: &PmParams<T>,
    axes: &MixerAxes<T>,
    options: &OracleOptions,
) -> Result<PmRun<T>> {
    if graph.n() > options.qubit_cap {
        return Err(Error::TooManyQubits {
            n: graph.n(),
            cap: options.qubit_cap,
        });
    }
    if !graph.is_simple_graph() {
        return Err(Error::NotASimpleGraph);
    }
    weights.validate(graph.n(), graph.m())?;
    params.validate(graph.n(), graph.m())?;
    let n = graph.n();
    let mut psi = StateVector::uniform(n);
    // diagonal phase: vertex terms and edge terms (constant term optional)
    {
        let masks: Vec<u64> = graph
            .edges()
            .iter()
            .map(|we| we.edge.vertices().iter().fold(0u64, |m, &u| m | 1 << u))
            .collect();
        for (x, amp) in psi.amps.iter_mut().enumerate() {
            let mut angle = if options.include_constant_phase {
                params.gamma_const * weights.a_prime
            } else {
                T::zero()
            };
            for u in 0..n {
                let sign = if x >> u & 1 == 1 { -T::one() } else { T::one() };
                angle += params.gamma_vertex[u] * weights.h_prime[u] * sign;
            }
            for (k, mask) in masks.iter().enumerate() {
                let parity = (x as u64 & mask).count_ones() % 2;
                let sign = if parity == 1 { -T::one() } else { T::one() };
                angle += params.gamma_edge[k] * weights.j_prime[k] * sign;
            }
            *amp *= Complex::from_polar(T::one(), -angle);
        }
    }
    psi.apply_product_mixer(axes, &params.beta);
    let f_vertex: Vec<T> = (0..n).map(|u| psi.measure_z_vertex(u)).collect();
    let f_edge: Vec<T> = graph
        .edges()
        .iter()
        .map(|we| psi.measure_z_edge(&we.edge))
        .collect();
    let mut total = weights.a;
    for (h, f) in weights.h.iter().zip(&f_vertex) {
        total += *h * *f;
    }
    for (j, f) in weights.j.iter().zip(&f_edge) {
        total += *j * *f;
    }
    Ok(PmRun {
        f_vertex,
        f_edge,
        total,
    })
}

/// Per-edge expectations of a GM-QAOA circuit run.
#[derive(Debug, Clone)]
pub struct GmRun<T> {
    /// `<Z_e>` per edge, in graph edge order.
    pub z_edge: Vec<T>,
    /// `w_e <Z_e>` per edge.
    pub cost_edge: Vec<T>,
    /// Sum of the weighted terms.
    pub total: T,
}

/// Runs the exact p-layer GM circuit and measures every edge. `state = None`
/// starts from `|s>`.
pub fn run_gm<T: Real>(
    graph: &WeightedHypergraph<T>,
    params: &GmParams<T>,
    state: Option<&ProductStateParams<T>>,
    options: &OracleOptions,
) -> Result<GmRun<T>> {
    if graph.n() > options.qubit_cap {
        return Err(Error::TooManyQubits {
            n: graph.n(),
            cap: options.qubit_cap,
        });
    }
    params.validate(graph.m())?;
    let owned;
    let state = match state {
        Some(st) => {
            if st.n() != graph.n() {
                return Err(Error::ShapeMismatch {
                    what: "state",
                    expected: graph.n(),
                    got: st.n(),
                });
            }
            st
        }
        None => {
            owned = ProductStateParams::uniform_s(graph.n());
            &owned
        }
    };
    let omega = StateVector::prepare_product_state(state);
    let mut psi = omega.clone();
    for l in 0..params.layers() {
        if options.include_constant_phase {
            psi.apply_phase(graph, &params.gamma[l]);
        } else {
            // skip the constant (empty-edge) phase: a pure global phase
            let mut gamma = params.gamma[l].clone();
            if let Some(k) = graph.edge_index(&Edge::empty()) {
                gamma[k] = T::zero();
            }
            psi.apply_phase(graph, &gamma);
        }
        psi.apply_grover_mixer(&omega, params.beta[l]);
    }
    let z_edge: Vec<T> = graph
        .edges()
        .iter()
        .map(|we| psi.measure_z_edge(&we.edge))
        .collect();
    let cost_edge: Vec<T> = graph
        .edges()
        .iter()
        .zip(&z_edge)
        .map(|(we, &z)| we.cost * z)
        .collect();
    let total = cost_edge.iter().fold(T::zero(), |a, &x| a + x);
    Ok(GmRun {
        z_edge,
        cost_edge,
        total,
    })
}
