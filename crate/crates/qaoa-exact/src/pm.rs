//! Single-layer product-mixer QAOA: exact cost expectations on weighted
//! Ising graphs.
//!
//! The expectation of each cost term factorizes into mixer-side coefficients
//! `a` (depending only on the mixer angles and axes) and phase-side
//! coefficients `xi` (depending only on the phase angles and weights); the
//! engine evaluates both from closed forms and assembles
//! `<C> = a + sum_u h_u F_u + sum_uv J_uv F_uv`.

use crate::error::{Error, Result};
use crate::hypergraph::{neighborhoods, Edge, WeightedHypergraph};
use crate::scalar::{lit, two, Real};

/// Non-identity single-qubit Pauli labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
}

/// Per-vertex unit rotation axes of the product mixer.
#[derive(Debug, Clone, PartialEq)]
pub struct MixerAxes<T> {
    axes: Vec<[T; 3]>,
}

impl<T: Real> MixerAxes<T> {
    /// Validates that every axis is unit length (within 1e-12).
    pub fn new(axes: Vec<[T; 3]>) -> Result<Self> {
        for (u, r) in axes.iter().enumerate() {
            let norm2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
            if (norm2 - T::one()).abs() > lit(1e-12) {
                return Err(Error::NonUnitAxis { vertex: u });
            }
        }
        Ok(MixerAxes { axes })
    }

    pub fn n(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, u: usize) -> &[T; 3] {
        &self.axes[u]
    }
}

/// Named special cases of the product mixer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixerVariant {
    Vanilla,
    WarmStart,
    FreeAxis,
}

/// Axes reducing the product mixer to a named variant. `theta` is ignored
/// for `Vanilla`.
pub fn variant_axes<T: Real>(variant: MixerVariant, n: usize, theta: &[T]) -> Result<MixerAxes<T>> {
    if variant != MixerVariant::Vanilla && theta.len() != n {
        return Err(Error::ShapeMismatch {
            what: "theta",
            expected: n,
            got: theta.len(),
        });
    }
    let axes = (0..n)
        .map(|u| match variant {
            MixerVariant::Vanilla => [T::one(), T::zero(), T::zero()],
            MixerVariant::WarmStart => [-theta[u].sin(), T::zero(), -theta[u].cos()],
            MixerVariant::FreeAxis => [theta[u].cos(), -theta[u].sin(), T::zero()],
        })
        .collect();
    MixerAxes::new(axes)
}

/// Ising weights `(a, h, J)` for the cost Hamiltonian and `(a', h', J')` for
/// the phase Hamiltonian, with `J` keyed by the owning graph's edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingWeights<T> {
    pub a: T,
    pub h: Vec<T>,
    pub j: Vec<T>,
    pub a_prime: T,
    pub h_prime: Vec<T>,
    pub j_prime: Vec<T>,
}

impl<T: Real> IsingWeights<T> {
    /// Phase weights equal to cost weights.
    pub fn from_cost(a: T, h: Vec<T>, j: Vec<T>) -> Self {
        IsingWeights {
            a,
            a_prime: a,
            h_prime: h.clone(),
            j_prime: j.clone(),
            h,
            j,
        }
    }

    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        for (what, len, expected) in [
            ("h", self.h.len(), n),
            ("h_prime", self.h_prime.len(), n),
            ("J", self.j.len(), m),
            ("J_prime", self.j_prime.len(), m),
        ] {
            if len != expected {
                return Err(Error::ShapeMismatch {
                    what,
                    expected,
                    got: len,
                });
            }
        }
        Ok(())
    }
}

/// Per-vertex mixer angles and the `n + m + 1` phase angles.
#[derive(Debug, Clone, PartialEq)]
pub struct PmParams<T> {
    pub beta: Vec<T>,
    pub gamma_vertex: Vec<T>,
    pub gamma_edge: Vec<T>,
    /// Angle on the constant phase term; a global phase, accepted and unused.
    pub gamma_const: T,
}

impl<T: Real> PmParams<T> {
    /// Single shared mixer and phase angle broadcast to every term.
    pub fn uniform(n: usize, m: usize, beta: T, gamma: T) -> Self {
        PmParams {
            beta: vec![beta; n],
            gamma_vertex: vec![gamma; n],
            gamma_edge: vec![gamma; m],
            gamma_const: gamma,
        }
    }

    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        for (what, len, expected) in [
            ("beta", self.beta.len(), n),
            ("gamma_vertex", self.gamma_vertex.len(), n),
            ("gamma_edge", self.gamma_edge.len(), m),
        ] {
            if len != expected {
                return Err(Error::ShapeMismatch {
                    what,
                    expected,
                    got: len,
                });
            }
        }
        Ok(())
    }
}

// vertex-level mixer coefficients; pair coefficients factorize over them
fn a_x<T: Real>(beta: T, r: &[T; 3]) -> T {
    two::<T>() * beta.sin() * beta.sin() * r[0] * r[2] - (two::<T>() * beta).sin() * r[1]
}

fn a_y<T: Real>(beta: T, r: &[T; 3]) -> T {
    two::<T>() * beta.sin() * beta.sin() * r[1] * r[2] + (two::<T>() * beta).sin() * r[0]
}

fn a_z<T: Real>(beta: T, r: &[T; 3]) -> T {
    let s2 = beta.sin() * beta.sin();
    beta.cos() * beta.cos() - s2 * (T::one() - two::<T>() * r[2] * r[2])
}

/// Mixer-side coefficient `a^P_u(beta)` of the conjugated `Z_u`.
pub fn a_coeff_vertex<T: Real>(p: Pauli, beta: T, axis: &[T; 3]) -> T {
    match p {
        Pauli::X => a_x(beta, axis),
        Pauli::Y => a_y(beta, axis),
        Pauli::Z => a_z(beta, axis),
    }
}

/// Mixer-side coefficient `a^{PQ}_{uv}(beta)` of the conjugated `Z_u Z_v`.
/// The product mixer acts on `u` and `v` independently, so the pair
/// coefficient is the product of the vertex coefficients; this reproduces
/// the tabulated closed forms channel by channel.
pub fn a_coeff_pair<T: Real>(
    p: Pauli,
    q: Pauli,
    beta_u: T,
    axis_u: &[T; 3],
    beta_v: T,
    axis_v: &[T; 3],
) -> T {
    a_coeff_vertex(p, beta_u, axis_u) * a_coeff_vertex(q, beta_v, axis_v)
}

/// Single-layer PM-QAOA evaluator over one problem instance.
pub struct PmEngine<'a, T> {
    graph: &'a WeightedHypergraph<T>,
    weights: &'a IsingWeights<T>,
    params: &'a PmParams<T>,
    axes: &'a MixerAxes<T>,
}

impl<'a, T: Real> PmEngine<'a, T> {
    pub fn new(
        graph: &'a WeightedHypergraph<T>,
        weights: &'a IsingWeights<T>,
        params: &'a PmParams<T>,
        axes: &'a MixerAxes<T>,
    ) -> Result<Self> {
        if !graph.is_simple_graph() {
            return Err(Error::NotASimpleGraph);
        }
        weights.validate(graph.n(), graph.m())?;
        params.validate(graph.n(), graph.m())?;
        if axes.n() != graph.n() {
            return Err(Error::ShapeMismatch {
                what: "axes",
                expected: graph.n(),
                got: axes.n(),
            });
        }
        Ok(PmEngine {
            graph,
            weights,
            params,
            axes,
        })
    }

    fn edge_index(&self, u: usize, v: usize) -> Result<usize> {
        let e = Edge::pair(u, v).map_err(|_| Error::NotAnEdge { u, v })?;
        self.graph.edge_index(&e).ok_or(Error::NotAnEdge { u, v })
    }

    // 2 J'_{uv} gamma_{uv}: the effective phase rotation angle of an edge
    fn edge_angle(&self, k: usize) -> T {
        two::<T>() * self.weights.j_prime[k] * self.params.gamma_edge[k]
    }

    // 2 h'_u gamma_u
    fn vertex_angle(&self, u: usize) -> T {
        two::<T>() * self.weights.h_prime[u] * self.params.gamma_vertex[u]
    }

    fn cos_product<I: IntoIterator<Item = usize>>(&self, u: usize, others: I) -> Result<T> {
        let mut acc = T::one();
        for g in others {
            acc *= self.edge_angle(self.edge_index(u, g)?).cos();
        }
        Ok(acc)
    }

    pub fn a_vertex(&self, p: Pauli, u: usize) -> T {
        a_coeff_vertex(p, self.params.beta[u], self.axes.axis(u))
    }

    pub fn a_pair(&self, p: Pauli, q: Pauli, u: usize, v: usize) -> T {
        self.a_vertex(p, u) * self.a_vertex(q, v)
    }

    /// Phase-side coefficient `xi^P_u` written relative to the incident
    /// anchor edge `{u, v_anchor}`.
    pub fn xi_vertex(&self, p: Pauli, u: usize, v_anchor: usize) -> Result<T> {
        let k = self.edge_index(u, v_anchor)?;
        let nbhd = neighborhoods(self.graph, u, v_anchor)?;
        let r_setminus = self.cos_product(u, nbhd.n_u_minus_v.iter().copied())?;
        let envelope = self.edge_angle(k).cos() * r_setminus;
        Ok(match p {
            Pauli::X => self.vertex_angle(u).cos() * envelope,
            Pauli::Y => self.vertex_angle(u).sin() * envelope,
            Pauli::Z => T::zero(),
        })
    }

    /// Phase-side coefficient `xi^{PQ}_{uv}`.
    pub fn xi_pair(&self, p: Pauli, q: Pauli, u: usize, v: usize) -> Result<T> {
        use Pauli::*;
        let k = self.edge_index(u, v)?;
        let nbhd = neighborhoods(self.graph, u, v)?;
        let half = lit::<T>(0.5);
        let (cu, su) = (self.vertex_angle(u).cos(), self.vertex_angle(u).sin());
        let (cv, sv) = (self.vertex_angle(v).cos(), self.vertex_angle(v).sin());
        match (p, q) {
            (X, X) | (X, Y) | (Y, X) | (Y, Y) => {
                let rb_uv = self.cos_product(u, nbhd.n_u_bbslash_v.iter().copied())?;
                let rb_vu = self.cos_product(v, nbhd.n_v_bbslash_u.iter().copied())?;
                let mut r_minus = T::one();
                let mut r_plus = T::one();
                for &a in &nbhd.n_uv {
                    let ua = self.edge_angle(self.edge_index(u, a)?);
                    let va = self.edge_angle(self.edge_index(v, a)?);
                    r_minus *= (ua - va).cos();
                    r_plus *= (ua + va).cos();
                }
                let even = r_minus + r_plus;
                let odd = r_minus - r_plus;
                let core = match (p, q) {
                    (X, X) => cu * cv * even + su * sv * odd,
                    (X, Y) => cu * sv * even - su * cv * odd,
                    (Y, X) => cv * su * even - sv * cu * odd,
                    (Y, Y) => cu * cv * odd + su * sv * even,
                    _ => unreachable!(),
                };
                Ok(half * rb_uv * rb_vu * core)
            }
            (X, Z) | (Y, Z) => {
                let r_setminus = self.cos_product(u, nbhd.n_u_minus_v.iter().copied())?;
                let suv = self.edge_angle(k).sin();
                Ok(match p {
                    X => -su * suv * r_setminus,
                    _ => cu * suv * r_setminus,
                })
            }
            (Z, X) => self.xi_pair(X, Z, v, u),
            (Z, Y) => self.xi_pair(Y, Z, v, u),
            (Z, Z) => Ok(T::zero()),
        }
    }

    /// `F_u = sum_P a^P_u xi^P_u`, evaluated anchor-free: the anchor edge's
    /// cosine factor joins the product over all edges incident to `u`.
    pub fn f_vertex(&self, u: usize) -> T {
        let mut envelope = T::one();
        for k in self.graph.incident_edges(u) {
            envelope *= self.edge_angle(k).cos();
        }
        let ang = self.vertex_angle(u);
        self.a_vertex(Pauli::X, u) * ang.cos() * envelope
            + self.a_vertex(Pauli::Y, u) * ang.sin() * envelope
    }

    /// `F_uv = sum_{P,Q} a^{PQ}_{uv} xi^{PQ}_{uv}`.
    pub fn f_edge(&self, u: usize, v: usize) -> Result<T> {
        let mut acc = T::zero();
        for p in Pauli::ALL {
            for q in Pauli::ALL {
                if (p, q) == (Pauli::Z, Pauli::Z) {
                    continue; // xi^{ZZ} = 0
                }
                let xi = self.xi_pair(p, q, u, v)?;
                if xi != T::zero() {
                    acc += self.a_pair(p, q, u, v) * xi;
                }
            }
        }
        Ok(acc)
    }

    /// Overall cost expectation `a + sum_u h_u F_u + sum_uv J_uv F_uv`.
    pub fn cost_expectation(&self) -> Result<T> {
        let mut total = self.weights.a;
        for u in 0..self.graph.n() {
            total += self.weights.h[u] * self.f_vertex(u);
        }
        for (k, we) in self.graph.edges().iter().enumerate() {
            let vs = we.edge.vertices();
            total += self.weights.j[k] * self.f_edge(vs[0], vs[1])?;
        }
        Ok(total)
    }
}

/// Dedicated closed forms for the named variants, as tabulated per variant.
/// These duplicate the general engine on purpose and exist to cross-check it.
pub mod variant_tables {
    use super::*;

    /// `a^P_u` for a named variant at mixer angle `beta` and state angle
    /// `theta` (ignored for `Vanilla`).
    pub fn a_vertex<T: Real>(variant: MixerVariant, p: Pauli, beta: T, theta: T) -> T {
        let two_beta = two::<T>() * beta;
        match variant {
            MixerVariant::Vanilla => match p {
                Pauli::X => T::zero(),
                Pauli::Y => two_beta.sin(),
                Pauli::Z => two_beta.cos(),
            },
            MixerVariant::WarmStart => {
                let s2 = beta.sin() * beta.sin();
                match p {
                    Pauli::X => s2 * (two::<T>() * theta).sin(),
                    Pauli::Y => -two_beta.sin() * theta.sin(),
                    Pauli::Z => beta.cos() * beta.cos() + s2 * (two::<T>() * theta).cos(),
                }
            }
            MixerVariant::FreeAxis => match p {
                Pauli::X => two_beta.sin() * theta.sin(),
                Pauli::Y => two_beta.sin() * theta.cos(),
                Pauli::Z => two_beta.cos(),
            },
        }
    }

    /// `a^{PQ}_{uv}` for a named variant; the tabulated pair entries are the
    /// products of the vertex entries.
    pub fn a_pair<T: Real>(
        variant: MixerVariant,
        p: Pauli,
        q: Pauli,
        beta_u: T,
        theta_u: T,
        beta_v: T,
        theta_v: T,
    ) -> T {
        a_vertex(variant, p, beta_u, theta_u) * a_vertex(variant, q, beta_v, theta_v)
    }
}

/// Closed-form MaxCut edge expectation for unweighted graphs with one shared
/// phase angle, using only the neighborhood sizes `(d, e, f)`.
#[allow(clippy::too_many_arguments)]
pub fn maxcut_fast_edge<T: Real>(
    d: usize,
    e: usize,
    f: usize,
    beta_u: T,
    beta_v: T,
    gamma: T,
    axis_u: &[T; 3],
    axis_v: &[T; 3],
) -> T {
    let half = lit::<T>(0.5);
    let c = gamma.cos();
    let cf2 = (two::<T>() * gamma).cos().powi(f as i32);
    let c_de = c.powi((d + e - 2 * f) as i32);
    let a_xx = a_coeff_pair(Pauli::X, Pauli::X, beta_u, axis_u, beta_v, axis_v);
    let a_yy = a_coeff_pair(Pauli::Y, Pauli::Y, beta_u, axis_u, beta_v, axis_v);
    let a_yz = a_coeff_pair(Pauli::Y, Pauli::Z, beta_u, axis_u, beta_v, axis_v);
    let a_zy = a_coeff_pair(Pauli::Z, Pauli::Y, beta_u, axis_u, beta_v, axis_v);
    half * (T::one()
        - half * a_xx * c_de * (T::one() + cf2)
        - half * a_yy * c_de * (T::one() - cf2)
        + a_yz * gamma.sin() * c.powi(d as i32)
        + a_zy * gamma.sin() * c.powi(e as i32))
}
