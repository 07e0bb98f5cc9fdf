//! JSON schemas for problems, hypergraphs, and circuit parameters (f64 wire
//! format). Validation is strict: unknown fields are rejected, and shape
//! errors carry the offending field name.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gm::{GmParams, ProductStateParams};
use crate::hypergraph::{Edge, WeightedHypergraph};
use crate::pm::{variant_axes, IsingWeights, MixerAxes, MixerVariant, PmParams};
use crate::problems::{maxcut_to_ising, mis_to_ising, qubo_to_ising, MaxCutInstance, MisInstance};

/// A JSON number or array, broadcast to a fixed length on demand.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NumOrVec {
    Num(f64),
    Vec(Vec<f64>),
}

impl NumOrVec {
    pub fn broadcast(&self, len: usize, what: &'static str) -> Result<Vec<f64>> {
        match self {
            NumOrVec::Num(x) => Ok(vec![*x; len]),
            NumOrVec::Vec(v) if v.len() == len => Ok(v.clone()),
            NumOrVec::Vec(v) => Err(Error::ShapeMismatch {
                what,
                expected: len,
                got: v.len(),
            }),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HyperEdgeJson {
    v: Vec<usize>,
    w: f64,
    #[serde(default)]
    wp: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphJson {
    n: usize,
    edges: Vec<HyperEdgeJson>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairEdgeJson {
    u: usize,
    v: usize,
    w: f64,
    #[serde(default)]
    wp: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum TypedProblemJson {
    Maxcut {
        n: usize,
        edges: Vec<PairEdgeJson>,
    },
    Mis {
        n: usize,
        edges: Vec<PairEdgeJson>,
        #[serde(default)]
        s: Option<NumOrVec>,
        #[serde(default)]
        sp: Option<NumOrVec>,
        lambda1: f64,
        lambda2: f64,
        #[serde(default)]
        lambda1p: Option<f64>,
        #[serde(default)]
        lambda2p: Option<f64>,
    },
    Qubo {
        q: Vec<Vec<f64>>,
        linear: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
}

/// A parsed problem input: either a typed problem or a raw hypergraph.
#[derive(Debug, Clone)]
pub enum ProblemInput {
    MaxCut(MaxCutInstance<f64>),
    Mis(MisInstance<f64>),
    Qubo {
        graph: WeightedHypergraph<f64>,
        weights: IsingWeights<f64>,
    },
    Hypergraph(WeightedHypergraph<f64>),
}

/// Schema or semantic failure while reading an input file.
#[derive(Debug)]
pub enum ParseError {
    /// Malformed JSON or unknown/missing fields (carries serde's line/column
    /// diagnostic).
    Json(serde_json::Error),
    /// Well-formed JSON with invalid content.
    Semantic(Error),
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseError::Json(e) => write!(f, "invalid JSON: {e}"),
            ParseError::Semantic(e) => write!(f, "invalid input: {e}"),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<Error> for ParseError {
    fn from(e: Error) -> Self {
        ParseError::Semantic(e)
    }
}

fn build_hypergraph(raw: HypergraphJson) -> Result<WeightedHypergraph<f64>> {
    let triples = raw
        .edges
        .into_iter()
        .map(|e| {
            let wp = e.wp.unwrap_or(e.w);
            Ok((Edge::new(e.v)?, e.w, wp))
        })
        .collect::<Result<Vec<_>>>()?;
    WeightedHypergraph::new(raw.n, triples)
}

fn build_pair_graph(n: usize, edges: Vec<PairEdgeJson>) -> Result<WeightedHypergraph<f64>> {
    let triples = edges
        .into_iter()
        .map(|e| {
            let wp = e.wp.unwrap_or(e.w);
            Ok((Edge::pair(e.u, e.v)?, e.w, wp))
        })
        .collect::<Result<Vec<_>>>()?;
    WeightedHypergraph::new(n, triples)
}

/// Parses a problem file: `{"type": ...}` selects a problem builder, while a
/// bare `{"n": ..., "edges": [...]}` is a raw weighted hypergraph.
pub fn parse_problem(text: &str) -> std::result::Result<ProblemInput, ParseError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(ParseError::Json)?;
    if value.get("type").is_some() {
        let typed: TypedProblemJson = serde_json::from_value(value).map_err(ParseError::Json)?;
        match typed {
            TypedProblemJson::Maxcut { n, edges } => {
                let graph = build_pair_graph(n, edges)?;
                Ok(ProblemInput::MaxCut(MaxCutInstance::new(graph)?))
            }
            TypedProblemJson::Mis {
                n,
                edges,
                s,
                sp,
                lambda1,
                lambda2,
                lambda1p,
                lambda2p,
            } => {
                let graph = build_pair_graph(n, edges)?;
                let s = s
                    .unwrap_or(NumOrVec::Num(1.0))
                    .broadcast(n, "mis vertex weights")?;
                let sp = match sp {
                    Some(v) => v.broadcast(n, "mis vertex weights")?,
                    None => s.clone(),
                };
                let inst = MisInstance::new(
                    graph,
                    s,
                    sp,
                    (lambda1, lambda2),
                    (lambda1p.unwrap_or(lambda1), lambda2p.unwrap_or(lambda2)),
                )?;
                Ok(ProblemInput::Mis(inst))
            }
            TypedProblemJson::Qubo { q, linear, offset } => {
                let (graph, weights) = qubo_to_ising(&q, &linear, offset)?;
                Ok(ProblemInput::Qubo { graph, weights })
            }
        }
    } else {
        let raw: HypergraphJson = serde_json::from_value(value).map_err(ParseError::Json)?;
        Ok(ProblemInput::Hypergraph(build_hypergraph(raw)?))
    }
}

/// The PM view of a problem: a simple graph plus Ising weights.
pub fn problem_to_pm(input: &ProblemInput) -> Result<(WeightedHypergraph<f64>, IsingWeights<f64>)> {
    match input {
        ProblemInput::MaxCut(inst) => Ok((inst.graph().clone(), maxcut_to_ising(inst))),
        ProblemInput::Mis(inst) => Ok((inst.graph().clone(), mis_to_ising(inst))),
        ProblemInput::Qubo { graph, weights } => Ok((graph.clone(), weights.clone())),
        ProblemInput::Hypergraph(h) => ising_view_of_hypergraph(h),
    }
}

/// Splits an arity <= 2 hypergraph into a simple graph plus Ising weights:
/// the empty edge is the constant, singletons are vertex terms, pairs are
/// couplings.
fn ising_view_of_hypergraph(
    h: &WeightedHypergraph<f64>,
) -> Result<(WeightedHypergraph<f64>, IsingWeights<f64>)> {
    let n = h.n();
    let mut a = 0.0;
    let mut a_prime = 0.0;
    let mut hv = vec![0.0; n];
    let mut hv_prime = vec![0.0; n];
    let mut triples = Vec::new();
    let mut j = Vec::new();
    let mut j_prime = Vec::new();
    for we in h.edges() {
        match we.edge.arity() {
            0 => {
                a += we.cost;
                a_prime += we.phase;
            }
            1 => {
                let u = we.edge.vertices()[0];
                hv[u] += we.cost;
                hv_prime[u] += we.phase;
            }
            2 => {
                triples.push((we.edge.clone(), we.cost, we.phase));
                j.push(we.cost);
                j_prime.push(we.phase);
            }
            _ => return Err(Error::NotASimpleGraph),
        }
    }
    let graph = WeightedHypergraph::new(n, triples)?;
    let weights = IsingWeights {
        a,
        a_prime,
        h: hv,
        h_prime: hv_prime,
        j,
        j_prime,
    };
    Ok((graph, weights))
}

/// The GM view of a problem: an Ising-type weighted hypergraph.
pub fn problem_to_gm(input: &ProblemInput) -> Result<WeightedHypergraph<f64>> {
    match input {
        ProblemInput::Hypergraph(h) => Ok(h.clone()),
        ProblemInput::MaxCut(inst) => crate::gm::maxcut_gm_encode(inst.graph()),
        ProblemInput::Mis(inst) => ising_to_hypergraph(inst.graph(), &mis_to_ising(inst)),
        ProblemInput::Qubo { graph, weights } => ising_to_hypergraph(graph, weights),
    }
}

/// Encodes Ising weights on a simple graph as a hypergraph: the empty edge
/// first, then one singleton per vertex with a nonzero field, then the graph
/// edges in order.
pub fn ising_to_hypergraph(
    graph: &WeightedHypergraph<f64>,
    weights: &IsingWeights<f64>,
) -> Result<WeightedHypergraph<f64>> {
    weights.validate(graph.n(), graph.m())?;
    let mut triples = vec![(Edge::empty(), weights.a, weights.a_prime)];
    for u in 0..graph.n() {
        if weights.h[u] != 0.0 || weights.h_prime[u] != 0.0 {
            triples.push((Edge::new(vec![u])?, weights.h[u], weights.h_prime[u]));
        }
    }
    for (k, we) in graph.edges().iter().enumerate() {
        triples.push((we.edge.clone(), weights.j[k], weights.j_prime[k]));
    }
    WeightedHypergraph::new(graph.n(), triples)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxesJson {
    #[serde(default)]
    variant: Option<String>,
    #[serde(default)]
    theta: Option<NumOrVec>,
    #[serde(default)]
    explicit: Option<Vec<[f64; 3]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PmParamsJson {
    beta: NumOrVec,
    #[serde(default)]
    gamma: Option<f64>,
    #[serde(default)]
    gamma_vertex: Option<NumOrVec>,
    #[serde(default)]
    gamma_edge: Option<NumOrVec>,
    #[serde(default)]
    gamma_const: Option<f64>,
    #[serde(default)]
    axes: Option<AxesJson>,
}

/// How the mixer axes of a parsed parameter set were specified.
#[derive(Debug, Clone, PartialEq)]
pub enum AxesSpec {
    Variant(MixerVariant, Vec<f64>),
    Explicit,
}

/// Parses PM params against a problem with `n` vertices and `m` edges.
/// `gamma` broadcasts to every phase angle unless overridden per group;
/// axes default to the vanilla mixer.
pub fn parse_pm_params(
    text: &str,
    n: usize,
    m: usize,
) -> std::result::Result<(PmParams<f64>, MixerAxes<f64>, AxesSpec), ParseError> {
    let raw: PmParamsJson = serde_json::from_str(text).map_err(ParseError::Json)?;
    let shared = raw.gamma.unwrap_or(0.0);
    let params = PmParams {
        beta: raw.beta.broadcast(n, "beta")?,
        gamma_vertex: raw
            .gamma_vertex
            .unwrap_or(NumOrVec::Num(shared))
            .broadcast(n, "gamma_vertex")?,
        gamma_edge: raw
            .gamma_edge
            .unwrap_or(NumOrVec::Num(shared))
            .broadcast(m, "gamma_edge")?,
        gamma_const: raw.gamma_const.unwrap_or(shared),
    };
    let (axes, spec) = match raw.axes {
        None => (
            variant_axes(MixerVariant::Vanilla, n, &[])?,
            AxesSpec::Variant(MixerVariant::Vanilla, vec![0.0; n]),
        ),
        Some(a) => {
            if let Some(explicit) = a.explicit {
                if a.variant.is_some() || a.theta.is_some() {
                    return Err(ParseError::Semantic(Error::ShapeMismatch {
                        what: "axes: explicit excludes variant/theta",
                        expected: 0,
                        got: 1,
                    }));
                }
                if explicit.len() != n {
                    return Err(ParseError::Semantic(Error::ShapeMismatch {
                        what: "axes",
                        expected: n,
                        got: explicit.len(),
                    }));
                }
                (MixerAxes::new(explicit)?, AxesSpec::Explicit)
            } else {
                let variant = match a.variant.as_deref() {
                    Some("vanilla") | None => MixerVariant::Vanilla,
                    Some("warmstart") => MixerVariant::WarmStart,
                    Some("freeaxis") => MixerVariant::FreeAxis,
                    Some(other) => {
                        return Err(ParseError::Json(serde::de::Error::custom(format!(
                            "unknown mixer variant {other:?}"
                        ))))
                    }
                };
                let theta = a
                    .theta
                    .unwrap_or(NumOrVec::Num(0.0))
                    .broadcast(n, "theta")?;
                (
                    variant_axes(variant, n, &theta)?,
                    AxesSpec::Variant(variant, theta),
                )
            }
        }
    };
    Ok((params, axes, spec))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateJson {
    lambda: NumOrVec,
    omega: NumOrVec,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GmGammaJson {
    Shared(f64),
    PerLayer(Vec<f64>),
    Full(Vec<Vec<f64>>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GmParamsJson {
    gamma: GmGammaJson,
    beta: NumOrVec,
    #[serde(default)]
    state: Option<StateJson>,
}

/// Parses GM params against a hypergraph with `m` edges and `n` vertices.
/// `layers` fixes `p` when gamma/beta are scalars; array forms must agree
/// with it.
pub fn parse_gm_params(
    text: &str,
    n: usize,
    m: usize,
    layers: usize,
) -> std::result::Result<(GmParams<f64>, Option<ProductStateParams<f64>>), ParseError> {
    let raw: GmParamsJson = serde_json::from_str(text).map_err(ParseError::Json)?;
    let beta = raw.beta.broadcast(layers, "beta")?;
    let gamma = match raw.gamma {
        GmGammaJson::Shared(x) => vec![vec![x; m]; layers],
        GmGammaJson::PerLayer(per_layer) => {
            if per_layer.len() != layers {
                return Err(ParseError::Semantic(Error::ShapeMismatch {
                    what: "gamma layers",
                    expected: layers,
                    got: per_layer.len(),
                }));
            }
            per_layer.into_iter().map(|x| vec![x; m]).collect()
        }
        GmGammaJson::Full(full) => {
            if full.len() != layers {
                return Err(ParseError::Semantic(Error::ShapeMismatch {
                    what: "gamma layers",
                    expected: layers,
                    got: full.len(),
                }));
            }
            for layer in &full {
                if layer.len() != m {
                    return Err(ParseError::Semantic(Error::ShapeMismatch {
                        what: "gamma per layer",
                        expected: m,
                        got: layer.len(),
                    }));
                }
            }
            full
        }
    };
    let state = raw
        .state
        .map(|s| {
            ProductStateParams::new(
                s.lambda.broadcast(n, "lambda")?,
                s.omega.broadcast(n, "omega")?,
            )
        })
        .transpose()?;
    Ok((GmParams { gamma, beta }, state))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypergraph_round_trip() {
        let text = r#"{"n": 3, "edges": [
            {"v": [], "w": 0.5},
            {"v": [0, 1], "w": 1.0, "wp": -0.25},
            {"v": [0, 1, 2], "w": 2.0}
        ]}"#;
        let ProblemInput::Hypergraph(h) = parse_problem(text).unwrap() else {
            panic!("expected hypergraph");
        };
        assert_eq!(h.n(), 3);
        assert_eq!(h.m(), 3);
        assert!(h.edge(0).edge.is_empty());
        assert_eq!(h.edge(1).phase, -0.25);
        assert_eq!(h.edge(2).phase, 2.0); // wp defaults to w
    }

    #[test]
    fn malformed_json_is_rejected_with_diagnostic() {
        let err = parse_problem("{\"n\": 3,").unwrap_err();
        let msg = format!("{err}");
        assert!(
            msg.contains("line"),
            "diagnostic should cite a location: {msg}"
        );
        let err = parse_problem(r#"{"n": 1, "edges": [], "bogus": 1}"#).unwrap_err();
        assert!(matches!(err, ParseError::Json(_)));
    }

    #[test]
    fn maxcut_problem_parses() {
        let text = r#"{"type": "maxcut", "n": 3, "edges": [
            {"u": 0, "v": 1, "w": 1.0},
            {"u": 1, "v": 2, "w": 2.0}
        ]}"#;
        let input = parse_problem(text).unwrap();
        let (graph, weights) = problem_to_pm(&input).unwrap();
        assert_eq!(graph.m(), 2);
        assert_eq!(weights.a, 1.5);
        assert_eq!(weights.j, vec![-0.5, -1.0]);
        let h = problem_to_gm(&input).unwrap();
        assert_eq!(h.m(), 3);
        assert_eq!(h.edge(0).cost, 1.5);
    }

    #[test]
    fn mis_problem_parses_with_defaults() {
        let text = r#"{"type": "mis", "n": 3,
            "edges": [{"u":0,"v":1,"w":1.0},{"u":1,"v":2,"w":1.0},{"u":0,"v":2,"w":1.0}],
            "lambda1": 1.0, "lambda2": 2.0}"#;
        let input = parse_problem(text).unwrap();
        let (_, weights) = problem_to_pm(&input).unwrap();
        assert_eq!(weights.a, -3.0);
        assert_eq!(weights.h, vec![3.0; 3]);
    }

    #[test]
    fn qubo_problem_parses() {
        let text = r#"{"type": "qubo", "q": [[0.0, 1.0], [0.0, 0.0]], "linear": [0.0, 0.0]}"#;
        let input = parse_problem(text).unwrap();
        let (graph, weights) = problem_to_pm(&input).unwrap();
        assert_eq!(graph.m(), 1);
        assert_eq!(weights.a, 0.25);
    }

    #[test]
    fn hypergraph_pm_view_splits_arities() {
        let text = r#"{"n": 2, "edges": [
            {"v": [], "w": 0.5},
            {"v": [0], "w": 1.5, "wp": 0.25},
            {"v": [0, 1], "w": -1.0}
        ]}"#;
        let input = parse_problem(text).unwrap();
        let (graph, weights) = problem_to_pm(&input).unwrap();
        assert_eq!(graph.m(), 1);
        assert_eq!(weights.a, 0.5);
        assert_eq!(weights.h, vec![1.5, 0.0]);
        assert_eq!(weights.h_prime, vec![0.25, 0.0]);
        assert_eq!(weights.j, vec![-1.0]);
    }

    #[test]
    fn pm_params_parse_and_broadcast() {
        let (params, axes, spec) = parse_pm_params(
            r#"{"beta": 0.3, "gamma": 0.7, "axes": {"variant": "warmstart", "theta": 0.5}}"#,
            3,
            2,
        )
        .unwrap();
        assert_eq!(
            spec,
            AxesSpec::Variant(MixerVariant::WarmStart, vec![0.5; 3])
        );
        assert_eq!(params.beta, vec![0.3; 3]);
        assert_eq!(params.gamma_edge, vec![0.7; 2]);
        assert_eq!(axes.n(), 3);
        assert!((axes.axis(0)[0] + (0.5f64).sin()).abs() < 1e-15);
    }

    #[test]
    fn gm_params_parse_forms() {
        let (p, state) = parse_gm_params(r#"{"gamma": 0.4, "beta": 0.2}"#, 3, 5, 2).unwrap();
        assert_eq!(p.layers(), 2);
        assert_eq!(p.gamma[1], vec![0.4; 5]);
        assert!(state.is_none());

        let (p, _) =
            parse_gm_params(r#"{"gamma": [0.4, 0.6], "beta": [0.2, 0.3]}"#, 3, 5, 2).unwrap();
        assert_eq!(p.gamma[1], vec![0.6; 5]);

        let (_, state) = parse_gm_params(
            r#"{"gamma": 0.4, "beta": 0.2, "state": {"lambda": 0.0, "omega": 1.2}}"#,
            3,
            5,
            1,
        )
        .unwrap();
        assert!((state.unwrap().omega()[2] - 1.2).abs() < 1e-15);
    }
}
