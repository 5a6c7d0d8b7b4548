//! (n,k)-designs, their triple expansions H(D), regular 3-graphs and packings.

mod construct;
mod packing;
mod regular;

pub use construct::{bose_sts, build_design, skolem_sts, AG_2_4, PG_2_3};
pub use packing::{lu_szekely_condition, pack, PackingWitness, INV_E_LOWER_DEN, INV_E_LOWER_NUM};
pub use regular::build_regular_3graph;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcore::{for_each_subset, pair_index, Hypergraph};

/// A k-graph on n points in which every pair of points lies in exactly one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    pub n: usize,
    pub k: usize,
    pub blocks: Hypergraph,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DesignSummary {
    pub n: usize,
    pub k: usize,
    pub blocks: usize,
    pub triples: usize,
}

impl Design {
    pub fn summary(&self) -> DesignSummary {
        DesignSummary {
            n: self.n,
            k: self.k,
            blocks: self.blocks.len(),
            triples: triple_count(self.n, self.k),
        }
    }
}

/// (k−1) | (n−1) and k(k−1) | n(n−1).
pub fn divisibility_holds(n: usize, k: usize) -> bool {
    k >= 2 && n >= k && (n - 1) % (k - 1) == 0 && (n * (n - 1)) % (k * (k - 1)) == 0
}

/// Scans all C(n,2) pairs and checks each is covered exactly once, plus the block count.
pub fn verify_design(d: &Design) -> Result<()> {
    if d.blocks.uniformity() != d.k || d.blocks.vertex_count() != d.n {
        return Err(Error::InvariantViolation("design shape does not match (n, k)".into()));
    }
    let n = d.n;
    let mut cover = vec![0u32; n * n.saturating_sub(1) / 2];
    for b in d.blocks.edges() {
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                cover[pair_index(n, b[i], b[j])] += 1;
            }
        }
    }
    if let Some(p) = cover.iter().position(|&c| c != 1) {
        return Err(Error::InvariantViolation(format!("pair #{p} covered {} times", cover[p])));
    }
    let expected = n * (n - 1) / (d.k * (d.k - 1));
    if d.blocks.len() != expected {
        return Err(Error::InvariantViolation(format!(
            "{} blocks, expected {expected}",
            d.blocks.len()
        )));
    }
    Ok(())
}

/// |H(D)| = (k−2)n(n−1)/6.
pub fn triple_count(n: usize, k: usize) -> usize {
    k.saturating_sub(2) * n * n.saturating_sub(1) / 6
}

/// H(D): every triple inside a block.
pub fn expand_h(d: &Design) -> Hypergraph {
    if d.k < 3 {
        return Hypergraph::empty(3, d.n);
    }
    let mut flat = Vec::with_capacity(d.blocks.len() * crate::num::binom(d.k as u64, 3) as usize * 3);
    for b in d.blocks.edges() {
        for_each_subset(b.len(), 3, |idx| flat.extend(idx.iter().map(|&i| b[i])));
    }
    Hypergraph::from_flat_rows(3, d.n, flat)
}
