//! Grover-mixer QAOA on weighted Ising-type hypergraphs: structural factors
//! over subhypergraph families, and the trajectory sum that yields exact
//! cost expectations for any number of ansatz layers.
//!
//! The `L` factors (initial state `|s>`) sum over the even-regular
//! subhypergraph family; the `T` factors (general product state `|Omega>`)
//! sum over all subhypergraphs, weighting odd-parity vertices by
//! `cos(omega_u)`. Everything downstream is assembled from these.

use std::collections::HashMap;

use num_complex::Complex;

use crate::cycle_space::{coset_family, even_subhypergraph_basis, SubhypergraphFamily};
use crate::error::{Error, Result};
use crate::hypergraph::{Edge, WeightedHypergraph};
use crate::scalar::{lit, two, Real};

/// Caps on the exponential enumerations; exceeding one is an error, never a
/// silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCaps {
    /// Max GF(2) family dimension for 2^dim member walks.
    pub family_dimension: usize,
    /// Max edge count for full 2^m subhypergraph sums (T factors).
    pub full_subsets: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps {
            family_dimension: 24,
            full_subsets: 26,
        }
    }
}

/// Angles `(lambda, omega)` of the product state `|Omega>`. Construction
/// reduces `lambda` into `[0, 2pi)` and `omega` into `[0, pi]` (a reduction
/// that preserves the physical state), and snaps `cos(omega)` values below
/// 1e-15 to exact zero so that `omega = pi/2` behaves as the uniform state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductStateParams<T> {
    lambda: Vec<T>,
    omega: Vec<T>,
    cos_omega: Vec<T>,
}

impl<T: Real> ProductStateParams<T> {
    pub fn new(lambda: Vec<T>, omega: Vec<T>) -> Result<Self> {
        if lambda.len() != omega.len() {
            return Err(Error::ShapeMismatch {
                what: "lambda",
                expected: omega.len(),
                got: lambda.len(),
            });
        }
        let tau = two::<T>() * T::PI();
        let mut lam = Vec::with_capacity(lambda.len());
        let mut om = Vec::with_capacity(omega.len());
        for (&l, &o) in lambda.iter().zip(&omega) {
            let mut l = l - (l / tau).floor() * tau;
            let mut o = o - (o / tau).floor() * tau;
            if o > T::PI() {
                // R_Y(2pi - o) flips the |1> amplitude sign; absorb it into
                // a lambda shift of pi so the state is unchanged
                o = tau - o;
                l += T::PI();
                l = l - (l / tau).floor() * tau;
            }
            lam.push(l);
            om.push(o);
        }
        let cos_omega = om
            .iter()
            .map(|&o| {
                let c = o.cos();
                if c.abs() < lit(1e-15) {
                    T::zero()
                } else {
                    c
                }
            })
            .collect();
        Ok(ProductStateParams {
            lambda: lam,
            omega: om,
            cos_omega,
        })
    }

    /// The uniform superposition `|s>`: lambda = 0, omega = pi/2.
    pub fn uniform_s(n: usize) -> Self {
        Self::new(vec![T::zero(); n], vec![T::FRAC_PI_2(); n]).expect("valid uniform state")
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn lambda(&self) -> &[T] {
        &self.lambda
    }

    pub fn omega(&self) -> &[T] {
        &self.omega
    }

    pub fn cos_omega(&self, u: usize) -> T {
        self.cos_omega[u]
    }
}

/// Per-layer phase angles (one per edge, layer-major) and per-layer mixer
/// angles.
#[derive(Debug, Clone, PartialEq)]
pub struct GmParams<T> {
    pub gamma: Vec<Vec<T>>,
    pub beta: Vec<T>,
}

impl<T: Real> GmParams<T> {
    pub fn uniform(p: usize, m: usize, gamma: T, beta: T) -> Self {
        GmParams {
            gamma: vec![vec![gamma; m]; p],
            beta: vec![beta; p],
        }
    }

    pub fn layers(&self) -> usize {
        self.beta.len()
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if self.gamma.len() != self.beta.len() {
            return Err(Error::ShapeMismatch {
                what: "gamma layers",
                expected: self.beta.len(),
                got: self.gamma.len(),
            });
        }
        if self.beta.is_empty() {
            return Err(Error::ShapeMismatch {
                what: "beta layers",
                expected: 1,
                got: 0,
            });
        }
        for layer in &self.gamma {
            if layer.len() != m {
                return Err(Error::ShapeMismatch {
                    what: "gamma per layer",
                    expected: m,
                    got: layer.len(),
                });
            }
        }
        Ok(())
    }
}

/// A pair of layer bit strings selecting identity vs projector per layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryKey {
    pub f: Vec<bool>,
    pub g: Vec<bool>,
}

/// 1-based indices of the set bits of `f`, ascending.
pub fn trajectory_indices(f: &[bool]) -> Vec<usize> {
    f.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i + 1)
        .collect()
}

/// Sums of the per-edge angle vectors over the layer intervals induced by
/// the set bits of `f`, with a trailing remainder block (possibly all-zero).
/// Always `weight(f) + 1` blocks.
pub fn gamma_blocks<T: Real>(f: &[bool], params: &GmParams<T>) -> Vec<Vec<T>> {
    let p = f.len();
    let m = params.gamma.first().map_or(0, Vec::len);
    let mut blocks = Vec::new();
    let mut prev = 0usize; // last consumed layer, 1-based
    for idx in trajectory_indices(f) {
        blocks.push(sum_layers(params, prev, idx, m));
        prev = idx;
    }
    blocks.push(sum_layers(params, prev, p, m));
    blocks
}

fn sum_layers<T: Real>(params: &GmParams<T>, from_excl: usize, to_incl: usize, m: usize) -> Vec<T> {
    let mut out = vec![T::zero(); m];
    for l in from_excl..to_incl {
        for (o, &g) in out.iter_mut().zip(&params.gamma[l]) {
            *o += g;
        }
    }
    out
}

fn check_edge_arg<T: Real>(graph: &WeightedHypergraph<T>, e: &Edge) -> Result<()> {
    if e.is_empty() || graph.contains_edge(e) {
        Ok(())
    } else {
        Err(Error::EdgeNotInHypergraph)
    }
}

fn check_gamma_len<T: Real>(graph: &WeightedHypergraph<T>, gamma: &[T]) -> Result<()> {
    if gamma.len() != graph.m() {
        return Err(Error::ShapeMismatch {
            what: "gamma",
            expected: graph.m(),
            got: gamma.len(),
        });
    }
    Ok(())
}

/// Structural factor `L^e_G(gamma)`: the signed trigonometric sum over the
/// family of subhypergraphs that are even-regular except on the vertices of
/// `e`. `family` must be the even family of `graph` (a reusable cache).
pub fn structural_factor_l<T: Real>(
    graph: &WeightedHypergraph<T>,
    e: &Edge,
    gamma: &[T],
    family: &SubhypergraphFamily,
    caps: &EnumerationCaps,
) -> Result<Complex<T>> {
    check_edge_arg(graph, e)?;
    check_gamma_len(graph, gamma)?;
    let coset;
    let members = if graph.contains_edge(e) {
        coset = coset_family(family, e, graph)?;
        &coset
    } else {
        family // e = empty and absent: C^∅ = C
    };
    let m = graph.m();
    let mut cos_f = Vec::with_capacity(m);
    let mut isin_f = Vec::with_capacity(m);
    for (k, g) in gamma.iter().enumerate() {
        let ang = *g * graph.edge(k).phase;
        cos_f.push(Complex::new(ang.cos(), T::zero()));
        isin_f.push(Complex::new(T::zero(), ang.sin()));
    }
    let mut total = Complex::new(T::zero(), T::zero());
    members.for_each_member(caps.family_dimension, |member| {
        let mut prod = Complex::new(T::one(), T::zero());
        for k in 0..m {
            prod *= if member.test(k) { isin_f[k] } else { cos_f[k] };
        }
        total += prod;
    })?;
    Ok(total)
}

struct SubsetWalker<'a, T> {
    cos_f: &'a [Complex<T>],
    isin_f: &'a [Complex<T>],
    cos_omega: &'a [T],
    edge_vertices: &'a [&'a [usize]],
    finalize_at: &'a [Vec<usize>],
    parity: Vec<bool>,
    total: Complex<T>,
}

impl<T: Real> SubsetWalker<'_, T> {
    fn walk(&mut self, k: usize, acc: Complex<T>) {
        if acc == Complex::new(T::zero(), T::zero()) {
            return; // a zero cos(omega) factor killed this branch
        }
        if k == self.cos_f.len() {
            self.total += acc;
            return;
        }
        for include in [false, true] {
            let mut next = acc
                * if include {
                    self.isin_f[k]
                } else {
                    self.cos_f[k]
                };
            if include {
                for &u in self.edge_vertices[k] {
                    self.parity[u] = !self.parity[u];
                }
            }
            for &u in &self.finalize_at[k] {
                if self.parity[u] {
                    next *= self.cos_omega[u];
                }
            }
            self.walk(k + 1, next);
            if include {
                for &u in self.edge_vertices[k] {
                    self.parity[u] = !self.parity[u];
                }
            }
        }
    }
}

/// Structural factor `T^e_G(gamma)`: sums over all `2^m` subhypergraphs,
/// weighting each odd-parity vertex of `H (symdiff) {e}` by `cos(omega_u)`.
/// Branches whose settled parity forces an exactly-zero cosine are pruned,
/// which in particular reduces the walk to the even family for `|s>`.
pub fn structural_factor_t<T: Real>(
    graph: &WeightedHypergraph<T>,
    e: &Edge,
    gamma: &[T],
    state: &ProductStateParams<T>,
    caps: &EnumerationCaps,
) -> Result<Complex<T>> {
    check_edge_arg(graph, e)?;
    check_gamma_len(graph, gamma)?;
    let (n, m) = (graph.n(), graph.m());
    if m > caps.full_subsets {
        return Err(Error::FamilyTooLarge {
            dimension: m,
            cap: caps.full_subsets,
        });
    }
    if state.n() != n {
        return Err(Error::ShapeMismatch {
            what: "state",
            expected: n,
            got: state.n(),
        });
    }
    let mut cos_f = Vec::with_capacity(m);
    let mut isin_f = Vec::with_capacity(m);
    for (k, g) in gamma.iter().enumerate() {
        let ang = *g * graph.edge(k).phase;
        cos_f.push(Complex::new(ang.cos(), T::zero()));
        isin_f.push(Complex::new(T::zero(), ang.sin()));
    }
    // the parity of a vertex is settled once its last incident edge is decided
    let mut last_edge: Vec<Option<usize>> = vec![None; n];
    for k in 0..m {
        for &u in graph.edge(k).edge.vertices() {
            last_edge[u] = Some(k);
        }
    }
    let mut finalize_at: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut parity = vec![false; n];
    let mut base = Complex::new(T::one(), T::zero());
    for &u in e.vertices() {
        match last_edge[u] {
            Some(k) => {
                parity[u] = true;
                let _ = k;
            }
            None => base *= state.cos_omega(u), // vertex in no edge: settled now
        }
    }
    for (u, le) in last_edge.iter().enumerate() {
        if let Some(k) = le {
            finalize_at[*k].push(u);
        }
    }
    let edge_vertices: Vec<&[usize]> = (0..m).map(|k| graph.edge(k).edge.vertices()).collect();
    let mut walker = SubsetWalker {
        cos_f: &cos_f,
        isin_f: &isin_f,
        cos_omega: &state.cos_omega,
        edge_vertices: &edge_vertices,
        finalize_at: &finalize_at,
        parity,
        total: Complex::new(T::zero(), T::zero()),
    };
    walker.walk(0, base);
    Ok(walker.total)
}

/// Cost-weighted sum of structural factors over all edges:
/// `sum_e w_e Phi^e(gamma)` with `Phi = L` (state `None`) or `T`.
pub fn super_factor<T: Real>(
    graph: &WeightedHypergraph<T>,
    gamma: &[T],
    state: Option<&ProductStateParams<T>>,
    family: &SubhypergraphFamily,
    caps: &EnumerationCaps,
) -> Result<Complex<T>> {
    let mut total = Complex::new(T::zero(), T::zero());
    for we in graph.edges() {
        let phi = match state {
            None => structural_factor_l(graph, &we.edge, gamma, family, caps)?,
            Some(st) => structural_factor_t(graph, &we.edge, gamma, st, caps)?,
        };
        total += phi * we.cost;
    }
    Ok(total)
}

/// `L`-super factor for unit-weight hypergraphs with a single shared angle,
/// evaluated from the even-subhypergraph counts `N_G(k)`. The `k = 0` term
/// contributes only through its second summand.
pub fn unweighted_fast_super_l<T: Real>(
    graph: &WeightedHypergraph<T>,
    gamma: T,
    counts: &std::collections::BTreeMap<usize, u64>,
) -> Result<Complex<T>> {
    if graph
        .edges()
        .iter()
        .any(|we| we.cost != T::one() || we.phase != T::one())
    {
        return Err(Error::NonUnitWeights);
    }
    let m = graph.m();
    let isin = Complex::new(T::zero(), gamma.sin());
    let cos = Complex::new(gamma.cos(), T::zero());
    let mut total = Complex::new(T::zero(), T::zero());
    for (&k, &count) in counts {
        let count = T::from_u64(count).expect("count fits scalar");
        let mut term = Complex::new(T::zero(), T::zero());
        if k >= 1 {
            term += isin.powu((k - 1) as u32)
                * cos.powu((m - k + 1) as u32)
                * T::from_usize(k).unwrap();
        }
        if m > k {
            term += isin.powu((k + 1) as u32)
                * cos.powu((m - k - 1) as u32)
                * T::from_usize(m - k).unwrap();
        }
        total += term * count;
    }
    Ok(total)
}

/// Re-encodes a weighted MaxCut graph as the Ising-type hypergraph whose GM
/// expectations reproduce the MaxCut cost: the empty edge carries `W/2` and
/// each graph edge carries `-w_uv/2` (phase weights equal).
pub fn maxcut_gm_encode<T: Real>(graph: &WeightedHypergraph<T>) -> Result<WeightedHypergraph<T>> {
    if !graph.is_simple_graph() {
        return Err(Error::NotASimpleGraph);
    }
    let half = lit::<T>(0.5);
    let w_total = graph.total_cost_weight();
    let mut triples = vec![(Edge::empty(), w_total * half, w_total * half)];
    for we in graph.edges() {
        let w = -we.cost * half;
        triples.push((we.edge.clone(), w, w));
    }
    WeightedHypergraph::new(graph.n(), triples)
}

const IM_TOLERANCE: f64 = 1e-10;

fn clamp_real<T: Real>(z: Complex<T>) -> Result<T> {
    let residue = z.im.abs().to_f64().unwrap_or(f64::INFINITY);
    if residue > IM_TOLERANCE {
        return Err(Error::ResidualImaginary { residue });
    }
    Ok(z.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum PhiSelector {
    Empty,
    Edge(usize),
    Super,
}

/// Multi-layer GM-QAOA evaluator. Holds the even-family cache and a memo of
/// structural-factor evaluations keyed by quantized angle blocks; build one
/// per thread.
pub struct GmEngine<'a, T: Real> {
    graph: &'a WeightedHypergraph<T>,
    params: &'a GmParams<T>,
    state: Option<&'a ProductStateParams<T>>,
    caps: EnumerationCaps,
    family: SubhypergraphFamily,
    memo: HashMap<(PhiSelector, Vec<i128>), Complex<T>>,
}

impl<'a, T: Real> GmEngine<'a, T> {
    /// `state = None` evaluates for the uniform state `|s>` via `L` factors;
    /// `state = Some(..)` for `|Omega>` via `T` factors.
    pub fn new(
        graph: &'a WeightedHypergraph<T>,
        params: &'a GmParams<T>,
        state: Option<&'a ProductStateParams<T>>,
        caps: EnumerationCaps,
    ) -> Result<Self> {
        params.validate(graph.m())?;
        if let Some(st) = state {
            if st.n() != graph.n() {
                return Err(Error::ShapeMismatch {
                    what: "state",
                    expected: graph.n(),
                    got: st.n(),
                });
            }
        }
        Ok(GmEngine {
            graph,
            params,
            state,
            caps,
            family: even_subhypergraph_basis(graph),
            memo: HashMap::new(),
        })
    }

    fn quantize(angles: &[T]) -> Vec<i128> {
        // key-equality rounding only; arithmetic always uses exact angles
        angles
            .iter()
            .map(|a| (a.to_f64().unwrap() / 1e-15).round() as i128)
            .collect()
    }

    fn phi(&mut self, sel: PhiSelector, angles: &[T]) -> Result<Complex<T>> {
        let key = (sel, Self::quantize(angles));
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let value = match sel {
            PhiSelector::Empty => self.factor(&Edge::empty(), angles)?,
            PhiSelector::Edge(k) => {
                let e = self.graph.edge(k).edge.clone();
                self.factor(&e, angles)?
            }
            PhiSelector::Super => {
                let mut total = Complex::new(T::zero(), T::zero());
                for k in 0..self.graph.m() {
                    let e = self.graph.edge(k).edge.clone();
                    total += self.factor(&e, angles)? * self.graph.edge(k).cost;
                }
                total
            }
        };
        self.memo.insert(key, value);
        Ok(value)
    }

    /// Super factor over the non-empty edges only (the empty edge's exact
    /// contribution is accounted separately so the trailing-zero shortcut
    /// stays valid).
    fn phi_super_nonempty(&mut self, angles: &[T]) -> Result<Complex<T>> {
        let mut total = self.phi(PhiSelector::Super, angles)?;
        if let Some(k) = self.graph.edge_index(&Edge::empty()) {
            total -= self.phi(PhiSelector::Empty, angles)? * self.graph.edge(k).cost;
        }
        Ok(total)
    }

    fn factor(&self, e: &Edge, angles: &[T]) -> Result<Complex<T>> {
        match self.state {
            None => structural_factor_l(self.graph, e, angles, &self.family, &self.caps),
            Some(st) => structural_factor_t(self.graph, e, angles, st, &self.caps),
        }
    }

    fn beta_factor(&self, bits: &[bool], conjugated: bool) -> Complex<T> {
        let mut out = Complex::new(T::one(), T::zero());
        for (l, &b) in bits.iter().enumerate() {
            if b {
                let ang = if conjugated {
                    -self.params.beta[l]
                } else {
                    self.params.beta[l]
                };
                out *= Complex::from_polar(T::one(), ang) - T::one();
            }
        }
        out
    }

    fn q_contribution(&mut self, f: &[bool], g: &[bool], sel: PhiSelector) -> Result<Complex<T>> {
        let mut pref = self.beta_factor(f, false) * self.beta_factor(g, true);
        let bf = gamma_blocks(f, self.params);
        let bg = gamma_blocks(g, self.params);
        for block in &bf[..bf.len() - 1] {
            pref *= self.phi(PhiSelector::Empty, block)?;
        }
        for block in &bg[..bg.len() - 1] {
            pref *= self.phi(PhiSelector::Empty, block)?.conj();
        }
        let diff: Vec<T> = bf
            .last()
            .unwrap()
            .iter()
            .zip(bg.last().unwrap())
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(pref * self.phi(sel, &diff)?)
    }

    /// Trajectory contribution `Q^(e)_{f g}`.
    pub fn trajectory_contribution(&mut self, key: &TrajectoryKey, e: &Edge) -> Result<Complex<T>> {
        check_edge_arg(self.graph, e)?;
        let sel = match self.graph.edge_index(e) {
            Some(k) => PhiSelector::Edge(k),
            None => PhiSelector::Empty, // empty edge absent from the graph
        };
        self.q_contribution(&key.f, &key.g, sel)
    }

    fn trailing_zeros(bits: &[bool]) -> usize {
        bits.iter().rev().take_while(|&&b| !b).count()
    }

    fn bit_strings(p: usize) -> Vec<Vec<bool>> {
        // ascending in the integer value with the first layer as the most
        // significant bit
        (0..(1usize << p))
            .map(|v| (0..p).map(|l| v >> (p - 1 - l) & 1 == 1).collect())
            .collect()
    }

    fn hermitian_sum(&mut self, sel: PhiSelector, skip_equal_trailing: bool) -> Result<Complex<T>> {
        let p = self.params.layers();
        let strings = Self::bit_strings(p);
        let mut total = Complex::new(T::zero(), T::zero());
        for (fi, f) in strings.iter().enumerate() {
            for g in &strings[..=fi] {
                if skip_equal_trailing && Self::trailing_zeros(f) == Self::trailing_zeros(g) {
                    continue;
                }
                let q = self.q_contribution(f, g, sel)?;
                if f == g {
                    total += q;
                } else {
                    total += Complex::new(two::<T>() * q.re, T::zero());
                }
            }
        }
        Ok(total)
    }

    /// `<Z_e>` after `p` layers.
    pub fn z_edge(&mut self, e: &Edge) -> Result<T> {
        check_edge_arg(self.graph, e)?;
        if e.is_empty() {
            return Ok(T::one()); // identity observable
        }
        let sel = PhiSelector::Edge(self.graph.edge_index(e).expect("checked edge"));
        // in |s> mode, L^e(0) = 0 for non-empty e, so pairs whose bit strings
        // share the trailing-zero count contribute nothing
        let shortcut = self.state.is_none();
        clamp_real(self.hermitian_sum(sel, shortcut)?)
    }

    /// `<Z_e>` without the trailing-zero shortcut (cross-check path).
    pub fn z_edge_unshortcut(&mut self, e: &Edge) -> Result<T> {
        check_edge_arg(self.graph, e)?;
        if e.is_empty() {
            return Ok(T::one());
        }
        let sel = PhiSelector::Edge(self.graph.edge_index(e).expect("checked edge"));
        clamp_real(self.hermitian_sum(sel, false)?)
    }

    /// `<C_e> = w_e <Z_e>` for an edge of the hypergraph.
    pub fn cost_edge(&mut self, e: &Edge) -> Result<T> {
        let k = self.graph.edge_index(e).ok_or(Error::EdgeNotInHypergraph)?;
        Ok(self.graph.edge(k).cost * self.z_edge(e)?)
    }

    /// Overall `<C>` after `p` layers via the cost-weighted trajectory sum.
    pub fn cost_expectation(&mut self) -> Result<T> {
        match self.state {
            None => {
                // separate the empty edge (its <Z> is exactly 1) so the
                // remaining super factor vanishes at zero angles and the
                // trailing-zero shortcut applies
                let w_empty = self
                    .graph
                    .edge_index(&Edge::empty())
                    .map_or(T::zero(), |k| self.graph.edge(k).cost);
                let p = self.params.layers();
                let strings = Self::bit_strings(p);
                let mut total = Complex::new(T::zero(), T::zero());
                for (fi, f) in strings.iter().enumerate() {
                    for g in &strings[..=fi] {
                        if Self::trailing_zeros(f) == Self::trailing_zeros(g) {
                            continue;
                        }
                        let mut pref = self.beta_factor(f, false) * self.beta_factor(g, true);
                        let bf = gamma_blocks(f, self.params);
                        let bg = gamma_blocks(g, self.params);
                        for block in &bf[..bf.len() - 1] {
                            pref *= self.phi(PhiSelector::Empty, block)?;
                        }
                        for block in &bg[..bg.len() - 1] {
                            pref *= self.phi(PhiSelector::Empty, block)?.conj();
                        }
                        let diff: Vec<T> = bf
                            .last()
                            .unwrap()
                            .iter()
                            .zip(bg.last().unwrap())
                            .map(|(&a, &b)| a - b)
                            .collect();
                        let q = pref * self.phi_super_nonempty(&diff)?;
                        if f == g {
                            total += q;
                        } else {
                            total += Complex::new(two::<T>() * q.re, T::zero());
                        }
                    }
                }
                Ok(w_empty + clamp_real(total)?)
            }
            Some(_) => clamp_real(self.hermitian_sum(PhiSelector::Super, false)?),
        }
    }

    /// Single-layer `<Z_e>` via the dedicated closed form; requires `p = 1`.
    pub fn z_edge_single_layer(&mut self, e: &Edge) -> Result<T> {
        assert_eq!(self.params.layers(), 1, "single-layer closed form");
        check_edge_arg(self.graph, e)?;
        if e.is_empty() {
            return Ok(T::one());
        }
        let sel = PhiSelector::Edge(self.graph.edge_index(e).expect("checked edge"));
        let gamma = self.params.gamma[0].clone();
        let beta = self.params.beta[0];
        let zero = vec![T::zero(); self.graph.m()];
        let phi0_g = self.phi(PhiSelector::Empty, &gamma)?;
        let phi_e_mg = self.phi(sel, &gamma)?.conj();
        let phi_e_0 = self.phi(sel, &zero)?;
        let e_ib = Complex::from_polar(T::one(), beta);
        let one = Complex::new(T::one(), T::zero());
        let amp =
            one + (one - Complex::new(beta.cos(), T::zero())) * two::<T>() * phi0_g.norm_sqr();
        let cross = (e_ib - one) * phi0_g * phi_e_mg;
        clamp_real(amp * phi_e_0 + Complex::new(two::<T>() * cross.re, T::zero()))
    }

    /// Single-layer `<C>` via the dedicated closed form; requires `p = 1`.
    pub fn cost_expectation_single_layer(&mut self) -> Result<T> {
        assert_eq!(self.params.layers(), 1, "single-layer closed form");
        let gamma = self.params.gamma[0].clone();
        let beta = self.params.beta[0];
        let zero = vec![T::zero(); self.graph.m()];
        let phi0_g = self.phi(PhiSelector::Empty, &gamma)?;
        let super_mg = self.phi(PhiSelector::Super, &gamma)?.conj();
        let super_0 = self.phi(PhiSelector::Super, &zero)?;
        let e_ib = Complex::from_polar(T::one(), beta);
        let one = Complex::new(T::one(), T::zero());
        let amp =
            one + (one - Complex::new(beta.cos(), T::zero())) * two::<T>() * phi0_g.norm_sqr();
        let cross = (e_ib - one) * phi0_g * super_mg;
        clamp_real(amp * super_0 + Complex::new(two::<T>() * cross.re, T::zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::WeightedHypergraph;

    fn caps() -> EnumerationCaps {
        EnumerationCaps::default()
    }

    fn rand_stream(seed: u64) -> impl FnMut() -> f64 {
        let mut state = seed;
        move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        }
    }

    fn k3_hyper() -> WeightedHypergraph<f64> {
        WeightedHypergraph::complete(3)
    }

    #[test]
    fn l_factor_zero_angles_is_kronecker_delta() {
        let g = k3_hyper();
        let fam = even_subhypergraph_basis(&g);
        let zero = vec![0.0; g.m()];
        let l_empty = structural_factor_l(&g, &Edge::empty(), &zero, &fam, &caps()).unwrap();
        assert_eq!(l_empty, Complex::new(1.0, 0.0));
        let e = Edge::pair(0, 1).unwrap();
        let l_e = structural_factor_l(&g, &e, &zero, &fam, &caps()).unwrap();
        assert_eq!(l_e, Complex::new(0.0, 0.0));
    }

    #[test]
    fn l_factor_on_forest_closed_form() {
        let g: WeightedHypergraph<f64> =
            WeightedHypergraph::from_weighted_pairs(4, &[(0, 1, 0.7), (1, 2, -1.3), (2, 3, 0.4)])
                .unwrap();
        let fam = even_subhypergraph_basis(&g);
        let mut next = rand_stream(31);
        for _ in 0..10 {
            let gamma: Vec<f64> = (0..3).map(|_| next() * 4.0 - 2.0).collect();
            for (k, we) in g.edges().iter().enumerate() {
                let got = structural_factor_l(&g, &we.edge, &gamma, &fam, &caps()).unwrap();
                let mut want = Complex::new(0.0, (gamma[k] * we.phase).sin());
                for (j, other) in g.edges().iter().enumerate() {
                    if j != k {
                        want *= (gamma[j] * other.phase).cos();
                    }
                }
                assert!((got - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn l_factor_conjugation_symmetry() {
        let g = k3_hyper();
        let fam = even_subhypergraph_basis(&g);
        let mut next = rand_stream(7);
        for _ in 0..10 {
            let gamma: Vec<f64> = (0..3).map(|_| next() * 4.0 - 2.0).collect();
            let neg: Vec<f64> = gamma.iter().map(|x| -x).collect();
            for we in g.edges() {
                let a = structural_factor_l(&g, &we.edge, &gamma, &fam, &caps()).unwrap();
                let b = structural_factor_l(&g, &we.edge, &neg, &fam, &caps()).unwrap();
                assert!((a.conj() - b).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn t_factor_zero_angles() {
        let g = k3_hyper();
        let state = ProductStateParams::new(vec![0.3, 0.4, 0.5], vec![0.3, 1.1, 2.0]).unwrap();
        let zero = vec![0.0; g.m()];
        let e = Edge::pair(0, 2).unwrap();
        let got = structural_factor_t(&g, &e, &zero, &state, &caps()).unwrap();
        let want = state.cos_omega(0) * state.cos_omega(2);
        assert!((got - Complex::new(want, 0.0)).norm() < 1e-15);
        let got0 = structural_factor_t(&g, &Edge::empty(), &zero, &state, &caps()).unwrap();
        assert!((got0 - Complex::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn t_reduces_to_l_at_uniform_state() {
        let g = WeightedHypergraph::new(
            4,
            vec![
                (Edge::empty(), 0.4, 0.8),
                (Edge::new(vec![0]).unwrap(), -0.3, 0.5),
                (Edge::new(vec![0, 1, 2]).unwrap(), 0.9, -0.2),
                (Edge::pair(1, 3).unwrap(), 1.1, 0.6),
                (Edge::pair(0, 2).unwrap(), -0.5, 1.4),
            ],
        )
        .unwrap();
        let fam = even_subhypergraph_basis(&g);
        let state = ProductStateParams::uniform_s(4);
        let mut next = rand_stream(13);
        for _ in 0..10 {
            let gamma: Vec<f64> = (0..g.m()).map(|_| next() * 4.0 - 2.0).collect();
            for we in g.edges() {
                let t = structural_factor_t(&g, &we.edge, &gamma, &state, &caps()).unwrap();
                let l = structural_factor_l(&g, &we.edge, &gamma, &fam, &caps()).unwrap();
                assert!((t - l).norm() < 1e-13, "edge {:?}", we.edge);
            }
        }
    }

    #[test]
    fn super_factor_zero_angles() {
        let g = WeightedHypergraph::new(
            3,
            vec![
                (Edge::empty(), 0.7, 0.7),
                (Edge::pair(0, 1).unwrap(), 1.5, 1.5),
                (Edge::pair(1, 2).unwrap(), -2.0, -2.0),
            ],
        )
        .unwrap();
        let fam = even_subhypergraph_basis(&g);
        let zero = vec![0.0; g.m()];
        let lbar = super_factor(&g, &zero, None, &fam, &caps()).unwrap();
        assert!((lbar - Complex::new(0.7, 0.0)).norm() < 1e-15);

        let state = ProductStateParams::new(vec![0.0; 3], vec![0.0; 3]).unwrap();
        let tbar = super_factor(&g, &zero, Some(&state), &fam, &caps()).unwrap();
        // all cos(omega) = 1: total cost weight
        assert!((tbar - Complex::new(0.2, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn unweighted_fast_path_matches_super_factor() {
        for g in [
            WeightedHypergraph::<f64>::complete(3),
            WeightedHypergraph::<f64>::complete(4),
            WeightedHypergraph::<f64>::path(5),
        ] {
            let fam = even_subhypergraph_basis(&g);
            let counts = crate::cycle_space::count_even_by_size(&g, 24).unwrap();
            let mut next = rand_stream(1717);
            for _ in 0..8 {
                let gamma = next() * 4.0 - 2.0;
                let vec_gamma = vec![gamma; g.m()];
                let direct = super_factor(&g, &vec_gamma, None, &fam, &caps()).unwrap();
                let fast = unweighted_fast_super_l(&g, gamma, &counts).unwrap();
                assert!((direct - fast).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn fast_path_rejects_non_unit_weights() {
        let g = WeightedHypergraph::from_weighted_pairs(3, &[(0, 1, 2.0)]).unwrap();
        let counts = crate::cycle_space::count_even_by_size(&g, 24).unwrap();
        assert_eq!(
            unweighted_fast_super_l(&g, 0.5, &counts),
            Err(Error::NonUnitWeights)
        );
    }

    #[test]
    fn forest_fast_path_value() {
        let g: WeightedHypergraph<f64> = WeightedHypergraph::path(5);
        let m = g.m() as i32;
        let counts = crate::cycle_space::count_even_by_size(&g, 24).unwrap();
        let gamma = 0.63;
        let got = unweighted_fast_super_l(&g, gamma, &counts).unwrap();
        let want = Complex::new(0.0, (m as f64) * gamma.sin() * gamma.cos().powi(m - 1));
        assert!((got - want).norm() < 1e-15);
    }

    #[test]
    fn trajectory_index_examples() {
        assert_eq!(
            trajectory_indices(&[false, false, false, false]),
            Vec::<usize>::new()
        );
        assert_eq!(trajectory_indices(&[true, false, true, false]), vec![1, 3]);
        assert_eq!(trajectory_indices(&[false, false, false, true]), vec![4]);
    }

    #[test]
    fn gamma_block_examples() {
        let params = GmParams {
            gamma: vec![vec![0.1, 0.2]],
            beta: vec![0.5],
        };
        assert_eq!(gamma_blocks(&[false], &params), vec![vec![0.1, 0.2]]);
        assert_eq!(
            gamma_blocks(&[true], &params),
            vec![vec![0.1, 0.2], vec![0.0, 0.0]]
        );
        let params2 = GmParams {
            gamma: vec![vec![0.1, 0.2], vec![0.3, 0.4]],
            beta: vec![0.5, 0.6],
        };
        assert_eq!(
            gamma_blocks(&[true, false], &params2),
            vec![vec![0.1, 0.2], vec![0.3, 0.4]]
        );
    }

    #[test]
    fn maxcut_encode_values() {
        let g: WeightedHypergraph<f64> = WeightedHypergraph::complete(3);
        let h = maxcut_gm_encode(&g).unwrap();
        assert_eq!(h.edge(0).edge, Edge::empty());
        assert_eq!(h.edge(0).cost, 1.5);
        for k in 1..h.m() {
            assert_eq!(h.edge(k).cost, -0.5);
        }
        let single = WeightedHypergraph::from_weighted_pairs(2, &[(0, 1, 2.0)]).unwrap();
        let h = maxcut_gm_encode(&single).unwrap();
        assert_eq!(h.edge(0).cost, 1.0);
        assert_eq!(h.edge(1).cost, -1.0);
    }

    #[test]
    fn maxcut_zero_angles_is_half_weight() {
        let g: WeightedHypergraph<f64> = WeightedHypergraph::complete(3);
        let h = maxcut_gm_encode(&g).unwrap();
        let params = GmParams::uniform(1, h.m(), 0.0, 0.0);
        let mut engine = GmEngine::new(&h, &params, None, caps()).unwrap();
        let total = engine.cost_expectation().unwrap();
        assert!((total - 1.5).abs() < 1e-12);
        // edge-resolved terms: w_e <Z_e>, zero at zero angles for real edges
        assert!((engine.cost_edge(&Edge::empty()).unwrap() - 1.5).abs() < 1e-12);
        assert!(engine.cost_edge(&Edge::pair(0, 1).unwrap()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn omega_mode_gamma_zero_keeps_initial_marginals() {
        let g = WeightedHypergraph::new(
            3,
            vec![
                (Edge::pair(0, 1).unwrap(), 1.0, 1.0),
                (Edge::new(vec![2]).unwrap(), -0.7, 0.4),
            ],
        )
        .unwrap();
        let state =
            ProductStateParams::<f64>::new(vec![0.1, 0.2, 0.3], vec![0.7, 1.9, 2.4]).unwrap();
        let params = GmParams {
            gamma: vec![vec![0.0; g.m()]],
            beta: vec![1.234],
        };
        let mut engine = GmEngine::new(&g, &params, Some(&state), caps()).unwrap();
        let z01 = engine.z_edge(&Edge::pair(0, 1).unwrap()).unwrap();
        assert!((z01 - state.cos_omega(0) * state.cos_omega(1)).abs() < 1e-12);
        let z2 = engine.z_edge(&Edge::new(vec![2]).unwrap()).unwrap();
        assert!((z2 - state.cos_omega(2)).abs() < 1e-12);
    }

    #[test]
    fn empty_edge_expectation_is_one() {
        let g = WeightedHypergraph::new(
            2,
            vec![
                (Edge::empty(), 0.3, 0.3),
                (Edge::pair(0, 1).unwrap(), 1.0, 1.0),
            ],
        )
        .unwrap();
        let params = GmParams::uniform(2, g.m(), 0.8, 1.1);
        let mut engine = GmEngine::new(&g, &params, None, caps()).unwrap();
        assert_eq!(engine.z_edge(&Edge::empty()).unwrap(), 1.0);
    }

    #[test]
    fn shortcut_matches_full_enumeration() {
        let g = WeightedHypergraph::new(
            4,
            vec![
                (Edge::pair(0, 1).unwrap(), 0.8, 0.5),
                (Edge::pair(1, 2).unwrap(), -0.6, 1.2),
                (Edge::pair(2, 0).unwrap(), 1.4, -0.9),
                (Edge::new(vec![3]).unwrap(), 0.3, 0.7),
            ],
        )
        .unwrap();
        let mut next = rand_stream(2024);
        for p in 1..=3usize {
            let params = GmParams {
                gamma: (0..p)
                    .map(|_| (0..g.m()).map(|_| next() * 3.0 - 1.5).collect())
                    .collect(),
                beta: (0..p).map(|_| next() * 3.0 - 1.5).collect(),
            };
            let mut engine = GmEngine::new(&g, &params, None, caps()).unwrap();
            for we in g.edges() {
                let a = engine.z_edge(&we.edge).unwrap();
                let b = engine.z_edge_unshortcut(&we.edge).unwrap();
                assert!((a - b).abs() < 1e-13);
            }
        }
    }

    /// p = 1 special cases of the trajectory contributions: the s-mode
    /// diagonal vanishes for a real edge, and the (1, 0) off-diagonal is
    /// the mixer factor times the two structural factors.
    #[test]
    fn trajectory_special_cases_at_p1() {
        let g = WeightedHypergraph::new(
            3,
            vec![
                (Edge::pair(0, 1).unwrap(), 1.0, 0.8),
                (Edge::pair(1, 2).unwrap(), -0.5, 1.1),
            ],
        )
        .unwrap();
        let fam = even_subhypergraph_basis(&g);
        let (gamma, beta) = (0.7, 1.2);
        let params = GmParams::uniform(1, g.m(), gamma, beta);
        let mut engine = GmEngine::new(&g, &params, None, caps()).unwrap();
        let e = Edge::pair(0, 1).unwrap();
        let diag = engine
            .trajectory_contribution(
                &TrajectoryKey {
                    f: vec![false],
                    g: vec![false],
                },
                &e,
            )
            .unwrap();
        assert_eq!(diag, Complex::new(0.0, 0.0));
        let q10 = engine
            .trajectory_contribution(
                &TrajectoryKey {
                    f: vec![true],
                    g: vec![false],
                },
                &e,
            )
            .unwrap();
        let gvec = vec![gamma; g.m()];
        let ngvec = vec![-gamma; g.m()];
        let l0 = structural_factor_l(&g, &Edge::empty(), &gvec, &fam, &caps()).unwrap();
        let le = structural_factor_l(&g, &e, &ngvec, &fam, &caps()).unwrap();
        let want = (Complex::from_polar(1.0, beta) - 1.0) * l0 * le;
        assert!((q10 - want).norm() < 1e-15);
    }

    #[test]
    fn q_matrix_is_hermitian() {
        let g = WeightedHypergraph::new(
            3,
            vec![
                (Edge::empty(), 0.2, 0.4),
                (Edge::pair(0, 1).unwrap(), 0.8, 0.5),
                (Edge::new(vec![0, 1, 2]).unwrap(), -0.6, 1.2),
            ],
        )
        .unwrap();
        let state = ProductStateParams::new(vec![0.0; 3], vec![0.9, 1.3, 2.1]).unwrap();
        let mut next = rand_stream(555);
        for p in 1..=3usize {
            let params = GmParams {
                gamma: (0..p)
                    .map(|_| (0..g.m()).map(|_| next() * 3.0 - 1.5).collect())
                    .collect(),
                beta: (0..p).map(|_| next() * 3.0 - 1.5).collect(),
            };
            for state_opt in [None, Some(&state)] {
                let mut engine = GmEngine::new(&g, &params, state_opt, caps()).unwrap();
                let strings = GmEngine::<f64>::bit_strings(p);
                for e in [Edge::empty(), Edge::pair(0, 1).unwrap()] {
                    for f in &strings {
                        for gbits in &strings {
                            let key = TrajectoryKey {
                                f: f.clone(),
                                g: gbits.clone(),
                            };
                            let rev = TrajectoryKey {
                                f: gbits.clone(),
                                g: f.clone(),
                            };
                            let q = engine.trajectory_contribution(&key, &e).unwrap();
                            let qr = engine.trajectory_contribution(&rev, &e).unwrap();
                            assert!((q.conj() - qr).norm() < 1e-13);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn single_layer_closed_form_matches_trajectory_path() {
        let g = WeightedHypergraph::new(
            4,
            vec![
                (Edge::empty(), 0.25, 0.5),
                (Edge::pair(0, 1).unwrap(), 0.8, 0.5),
                (Edge::pair(1, 2).unwrap(), -0.6, 1.2),
                (Edge::new(vec![1, 2, 3]).unwrap(), 0.45, -0.8),
            ],
        )
        .unwrap();
        let state = ProductStateParams::new(vec![0.4; 4], vec![0.9, 1.3, 2.1, 0.4]).unwrap();
        let mut next = rand_stream(808);
        for _ in 0..6 {
            let params = GmParams {
                gamma: vec![(0..g.m()).map(|_| next() * 3.0 - 1.5).collect()],
                beta: vec![next() * 3.0 - 1.5],
            };
            for state_opt in [None, Some(&state)] {
                let mut engine = GmEngine::new(&g, &params, state_opt, caps()).unwrap();
                for we in g.edges() {
                    let a = engine.z_edge(&we.edge).unwrap();
                    let b = engine.z_edge_single_layer(&we.edge).unwrap();
                    assert!((a - b).abs() < 1e-13, "edge {:?}", we.edge);
                }
                let a = engine.cost_expectation().unwrap();
                let b = engine.cost_expectation_single_layer().unwrap();
                assert!((a - b).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn state_normalization_preserves_cosines() {
        let st = ProductStateParams::new(vec![7.5, -1.0], vec![4.0, -0.5]).unwrap();
        // omega reduced into [0, pi]
        for &o in st.omega() {
            assert!((0.0..=std::f64::consts::PI).contains(&o));
        }
        assert!((st.cos_omega(0) - (4.0f64).cos()).abs() < 1e-12);
        assert!((st.cos_omega(1) - (-0.5f64).cos()).abs() < 1e-12);
        let s = ProductStateParams::<f64>::uniform_s(3);
        assert_eq!(s.cos_omega(0), 0.0);
    }
}
