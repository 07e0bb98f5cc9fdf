//! GF(2) machinery over edge subsets: the even-regular subhypergraph family
//! (the cycle space, on graphs), its symmetric-difference cosets, and
//! size-resolved member counts.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, WeightedHypergraph};
use crate::scalar::Real;

/// Packed bit string over edge indices of a hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    len: usize,
    blocks: Vec<u64>,
}

impl EdgeSet {
    pub fn zeros(len: usize) -> Self {
        EdgeSet {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    pub fn singleton(len: usize, k: usize) -> Self {
        let mut s = Self::zeros(len);
        s.set(k);
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, k: usize) {
        self.blocks[k / 64] |= 1 << (k % 64);
    }

    pub fn test(&self, k: usize) -> bool {
        self.blocks[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &EdgeSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&k| self.test(k))
    }
}

/// A coset of a GF(2)-linear family of edge subsets: `shift ⊕ span(basis)`.
///
/// Produced by [`even_subhypergraph_basis`] (shift absent: the even-regular
/// family itself) and [`coset_family`] (shift = indicator of the chosen
/// edge). Enumeration walks all `2^dimension` members.
#[derive(Debug, Clone, PartialEq)]
pub struct SubhypergraphFamily {
    basis: Vec<EdgeSet>,
    dimension: usize,
    shift: Option<EdgeSet>,
    num_edges: usize,
    // free column of each basis vector; no other basis vector is set there
    free_cols: Vec<usize>,
}

impl SubhypergraphFamily {
    pub fn basis(&self) -> &[EdgeSet] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn shift(&self) -> Option<&EdgeSet> {
        self.shift.as_ref()
    }

    /// Number of edges of the owning hypergraph (bit-string length).
    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    fn check_cap(&self, cap: usize) -> Result<()> {
        if self.dimension > cap {
            return Err(Error::FamilyTooLarge {
                dimension: self.dimension,
                cap,
            });
        }
        Ok(())
    }

    /// Visits every member once, in Gray-code order starting from the shift
    /// (or the empty set). The visited reference is a reused buffer.
    pub fn for_each_member<F: FnMut(&EdgeSet)>(&self, cap: usize, mut f: F) -> Result<()> {
        self.check_cap(cap)?;
        let mut current = match &self.shift {
            Some(s) => s.clone(),
            None => EdgeSet::zeros(self.num_edges),
        };
        f(&current);
        for k in 1u64..(1u64 << self.dimension) {
            let flip = k.trailing_zeros() as usize;
            current.xor_assign(&self.basis[flip]);
            f(&current);
        }
        Ok(())
    }
}

/// Basis of the even-regular subhypergraph family of `G` over GF(2): the
/// nullspace of the vertex-edge incidence parity matrix. On simple graphs
/// this is the cycle space.
pub fn even_subhypergraph_basis<T: Real>(graph: &WeightedHypergraph<T>) -> SubhypergraphFamily {
    let n = graph.n();
    let m = graph.m();
    // rows = vertex parity constraints, packed over edge columns
    let mut rows: Vec<EdgeSet> = Vec::with_capacity(n);
    for u in 0..n {
        let mut row = EdgeSet::zeros(m);
        for k in graph.incident_edges(u) {
            row.set(k);
        }
        rows.push(row);
    }
    // Gaussian elimination to row echelon form; record pivot column per row.
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; m];
    let mut rank = 0;
    #[allow(clippy::needless_range_loop)]
    for col in 0..m {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r].test(col)) else {
            continue;
        };
        rows.swap(rank, r);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.test(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    // Free columns generate the nullspace basis.
    let mut basis = Vec::with_capacity(m - rank);
    let mut free_cols = Vec::with_capacity(m - rank);
    for col in 0..m {
        if pivot_of_col[col].is_some() {
            continue;
        }
        let mut vec = EdgeSet::singleton(m, col);
        for (pc, pr) in pivot_of_col.iter().enumerate() {
            if let Some(r) = pr {
                if rows[*r].test(col) {
                    vec.set(pc);
                }
            }
        }
        basis.push(vec);
        free_cols.push(col);
    }
    SubhypergraphFamily {
        dimension: basis.len(),
        basis,
        shift: None,
        num_edges: m,
        free_cols,
    }
}

/// Shifts `base` by the indicator of edge `e`, yielding the family whose
/// members have odd degree exactly on the vertices of `e`. Shifting twice by
/// the same edge returns the original family.
///
/// The shift is canonicalized modulo the basis span, so a shift that lies
/// inside the family (e.g. by the empty edge) reduces to no shift at all.
pub fn coset_family<T: Real>(
    base: &SubhypergraphFamily,
    e: &Edge,
    graph: &WeightedHypergraph<T>,
) -> Result<SubhypergraphFamily> {
    let k = graph.edge_index(e).ok_or(Error::EdgeNotInHypergraph)?;
    let mut shift = match base.shift() {
        Some(s) => s.clone(),
        None => EdgeSet::zeros(base.num_edges),
    };
    shift.xor_assign(&EdgeSet::singleton(base.num_edges, k));
    // Zeroing the free columns picks the unique canonical representative of
    // the coset, so a shift inside the span reduces to no shift.
    for (b, &c) in base.basis.iter().zip(&base.free_cols) {
        if shift.test(c) {
            shift.xor_assign(b);
        }
    }
    Ok(SubhypergraphFamily {
        basis: base.basis.clone(),
        dimension: base.dimension,
        shift: if shift.is_zero() { None } else { Some(shift) },
        num_edges: base.num_edges,
        free_cols: base.free_cols.clone(),
    })
}

/// Counts even-regular subhypergraphs of `G` by edge count: `k -> N_G(k)`.
/// Absent keys are zero. The family dimension must not exceed `cap`.
pub fn count_even_by_size<T: Real>(
    graph: &WeightedHypergraph<T>,
    cap: usize,
) -> Result<BTreeMap<usize, u64>> {
    let family = even_subhypergraph_basis(graph);
    let mut counts = BTreeMap::new();
    family.for_each_member(cap, |member| {
        *counts.entry(member.count_ones()).or_insert(0u64) += 1;
    })?;
    Ok(counts)
}

/// Degree parity of vertex `u` in the member subhypergraph (true = odd).
pub fn vertex_parity<T: Real>(graph: &WeightedHypergraph<T>, member: &EdgeSet, u: usize) -> bool {
    member
        .ones()
        .filter(|&k| graph.edge(k).edge.contains(u))
        .count()
        % 2
        == 1
}
