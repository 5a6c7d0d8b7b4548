use serde::{Deserialize, Serialize};

use crate::designs::{build_design, build_regular_3graph, expand_h, pack, Design, PackingWitness};
use crate::error::{Budget, Error, Result};
use crate::hcore::Hypergraph;
use crate::num::binom;

/// Limits for toy-mode materialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyLimits {
    /// Largest n accepted at all.
    pub vertex_cap: usize,
    /// G itself is only built when C(n,3) is at most this; otherwise only the removed part is kept.
    pub edge_cap: u64,
    pub design_budget: u64,
    pub regular_budget: u64,
    pub packing_budget: u64,
}

impl Default for AssemblyLimits {
    fn default() -> Self {
        AssemblyLimits {
            vertex_cap: 5000,
            edge_cap: 5_000_000,
            design_budget: 5_000_000,
            regular_budget: 10_000_000,
            packing_budget: 10_000_000,
        }
    }
}

/// G = K³_n ∖ (H(D) ∪ S) with S = φ(S′) edge-disjoint from H(D).
#[derive(Clone, Debug)]
pub struct GiAssembly {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub design: Design,
    pub h_d: Hypergraph,
    /// The s-regular graph S′ before relabelling.
    pub regular: Hypergraph,
    pub packing: PackingWitness,
    /// φ(S′).
    pub placed: Hypergraph,
    /// H(D) ∪ φ(S′).
    pub removed: Hypergraph,
    /// Present when C(n,3) is within the edge cap.
    pub g: Option<Hypergraph>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblySummary {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub design_blocks: usize,
    pub h_d_edges: usize,
    pub s_edges: usize,
    pub g_edges: u128,
    pub closed_form_edges: u128,
    pub materialized: bool,
    pub lu_szekely_held: bool,
    pub phi: Vec<usize>,
}

impl GiAssembly {
    /// |G|, counted from the materialized graph when present.
    pub fn edge_count(&self) -> u128 {
        match &self.g {
            Some(g) => g.len() as u128,
            None => binom(self.n as u64, 3) - self.removed.len() as u128,
        }
    }

    pub fn summary(&self) -> AssemblySummary {
        AssemblySummary {
            n: self.n,
            k: self.k,
            s: self.s,
            design_blocks: self.design.blocks.len(),
            h_d_edges: self.h_d.len(),
            s_edges: self.placed.len(),
            g_edges: self.edge_count(),
            closed_form_edges: closed_form_edge_count(self.n, self.k, self.s),
            materialized: self.g.is_some(),
            lu_szekely_held: self.packing.lu_szekely_held,
            phi: self.packing.phi.clone(),
        }
    }
}

/// C(n,3) − (k−2)n(n−1)/6 − sn/3.
pub fn closed_form_edge_count(n: usize, k: usize, s: usize) -> u128 {
    let (n, k, s) = (n as u128, k as u128, s as u128);
    binom(n as u64, 3) - (k - 2) * n * (n - 1) / 6 - s * n / 3
}

/// Builds a toy G for (n, k, s). The design, the s-regular graph and the packing are all
/// verified; the edge count is checked against the closed form.
pub fn assemble_gi(n: usize, k: usize, s: usize, seed: u64, limits: &AssemblyLimits) -> Result<GiAssembly> {
    if n > limits.vertex_cap {
        return Err(Error::InvalidSize(format!("n = {n} exceeds the vertex cap {}", limits.vertex_cap)));
    }
    if n % 3 != 0 && s > 0 {
        return Err(Error::Precondition(format!("an s-regular 3-graph needs 3 | n, got n = {n}")));
    }
    let design = build_design(n, k, &mut Budget::new("design search", limits.design_budget))?;
    let h_d = expand_h(&design);
    let regular = if s == 0 {
        Hypergraph::empty(3, n)
    } else {
        build_regular_3graph(n, s, seed, &mut Budget::new("regular 3-graph", limits.regular_budget))?
    };
    let packing = pack(&regular, &h_d, seed, &mut Budget::new("packing", limits.packing_budget))?;
    let placed = packing.apply(&regular)?;
    if placed.intersection_size(&h_d) != 0 {
        return Err(Error::InvariantViolation("S meets H(D)".into()));
    }
    let removed = h_d.union(&placed)?;
    let g = if binom(n as u64, 3) <= limits.edge_cap as u128 {
        Some(Hypergraph::complete(3, n).difference(&removed)?)
    } else {
        None
    };
    let a = GiAssembly { n, k, s, design, h_d, regular, packing, placed, removed, g };
    let expected = closed_form_edge_count(n, k, s);
    if a.edge_count() != expected {
        return Err(Error::InvariantViolation(format!("|G| = {} but the closed form gives {expected}", a.edge_count())));
    }
    Ok(a)
}
