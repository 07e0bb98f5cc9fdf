//! Property tests for the structural invariants.

use num_complex::Complex64;
use proptest::prelude::*;
use qaoa_exact::cycle_space::{coset_family, even_subhypergraph_basis};
use qaoa_exact::gm::ProductStateParams;
use qaoa_exact::hypergraph::{Edge, WeightedHypergraph};
use qaoa_exact::oracle::StateVector;
use qaoa_exact::pm::{a_coeff_pair, a_coeff_vertex, Pauli};

fn unit_axis() -> impl Strategy<Value = [f64; 3]> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_filter_map("nonzero axis", |(x, y, z)| {
        let n = (x * x + y * y + z * z).sqrt();
        (n > 1e-3).then(|| [x / n, y / n, z / n])
    })
}

fn simple_graph() -> impl Strategy<Value = WeightedHypergraph<f64>> {
    (2usize..8, any::<u64>()).prop_map(|(n, seed)| {
        let mut state = seed | 1;
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                if state >> 63 == 1 {
                    pairs.push((u, v, 1.0));
                }
            }
        }
        WeightedHypergraph::from_weighted_pairs(n, &pairs).unwrap()
    })
}

proptest! {
    /// Edge construction sorts vertices and is order-insensitive.
    #[test]
    fn edge_is_order_insensitive(mut vs in proptest::collection::vec(0usize..32, 0..6)) {
        vs.sort_unstable();
        vs.dedup();
        let forward = Edge::new(vs.clone()).unwrap();
        let mut reversed = vs.clone();
        reversed.reverse();
        prop_assert_eq!(forward, Edge::new(reversed).unwrap());
    }

    /// Pair coefficients factorize and are symmetric for arbitrary angles
    /// and axes.
    #[test]
    fn a_coefficients_factorize(
        bu in -6.0f64..6.0,
        bv in -6.0f64..6.0,
        ru in unit_axis(),
        rv in unit_axis(),
    ) {
        for p in Pauli::ALL {
            for q in Pauli::ALL {
                let pair = a_coeff_pair(p, q, bu, &ru, bv, &rv);
                prop_assert_eq!(pair, a_coeff_vertex(p, bu, &ru) * a_coeff_vertex(q, bv, &rv));
                prop_assert_eq!(pair, a_coeff_pair(q, p, bv, &rv, bu, &ru));
            }
        }
    }

    /// Range reduction of the product-state angles never changes the
    /// physical state: the overlap with the unreduced amplitudes stays 1.
    #[test]
    fn state_normalization_preserves_state(
        lam in proptest::collection::vec(-20.0f64..20.0, 1..5),
        om in proptest::collection::vec(-20.0f64..20.0, 1..5),
    ) {
        prop_assume!(lam.len() == om.len());
        let n = lam.len();
        let reduced = ProductStateParams::new(lam.clone(), om.clone()).unwrap();
        let sv = StateVector::prepare_product_state(&reduced);
        // rebuild the raw state amplitudes without any reduction
        let mut overlap = Complex64::new(0.0, 0.0);
        for x in 0..(1usize << n) {
            let mut amp = Complex64::new(1.0, 0.0);
            for u in 0..n {
                let half_l = lam[u] / 2.0;
                let half_o = om[u] / 2.0;
                amp *= if x >> u & 1 == 0 {
                    Complex64::from_polar(1.0, -half_l) * half_o.cos()
                } else {
                    Complex64::from_polar(1.0, half_l) * half_o.sin()
                };
            }
            overlap += amp.conj() * sv.amplitudes()[x];
        }
        // equality up to a global phase
        prop_assert!((overlap.norm() - 1.0).abs() < 1e-9, "overlap {}", overlap.norm());
    }

    /// Taking the coset by the same edge twice returns the original family,
    /// and coset members have odd parity exactly on the edge's vertices.
    #[test]
    fn coset_is_involutive(graph in simple_graph()) {
        prop_assume!(graph.m() > 0);
        let base = even_subhypergraph_basis(&graph);
        let edge = graph.edge(0).edge.clone();
        let coset = coset_family(&base, &edge, &graph).unwrap();
        let back = coset_family(&coset, &edge, &graph).unwrap();
        prop_assert_eq!(&back, &base);
        if coset.dimension() <= 12 {
            coset
                .for_each_member(12, |member| {
                    for u in 0..graph.n() {
                        assert_eq!(
                            qaoa_exact::cycle_space::vertex_parity(&graph, member, u),
                            edge.contains(u)
                        );
                    }
                })
                .unwrap();
        }
    }

    /// The mixer unitary preserves the norm for arbitrary angles and axes.
    #[test]
    fn product_mixer_preserves_norm(
        beta in proptest::collection::vec(-6.0f64..6.0, 3),
        axes in proptest::collection::vec(unit_axis(), 3),
    ) {
        let axes = qaoa_exact::pm::MixerAxes::new(axes).unwrap();
        let mut sv = StateVector::<f64>::uniform(3);
        sv.apply_product_mixer(&axes, &beta);
        let norm2: f64 = sv.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        prop_assert!((norm2 - 1.0).abs() < 1e-12);
    }
}
