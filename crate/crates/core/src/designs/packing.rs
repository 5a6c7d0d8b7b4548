use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Budget, Error, Result};
use crate::hcore::Hypergraph;
use crate::num::binom_big;

/// 1/e > INV_E_LOWER_NUM / INV_E_LOWER_DEN.
pub const INV_E_LOWER_NUM: u64 = 367_879_441;
pub const INV_E_LOWER_DEN: u64 = 1_000_000_000;

/// Sufficient condition for a packing: Δ(H₁)|H₂| + Δ(H₂)|H₁| < C(n,r)/(e·r).
/// Evaluated exactly against a certified lower bound for 1/e, so `true` is always sound.
pub fn lu_szekely_condition(h1: &Hypergraph, h2: &Hypergraph) -> Result<bool> {
    h1.same_shape(h2)?;
    let r = h1.uniformity() as u64;
    let max_deg = |h: &Hypergraph| h.degrees().iter().copied().max().unwrap_or(0) as u64;
    let lhs = (BigUint::from(max_deg(h1)) * h2.len() as u64 + BigUint::from(max_deg(h2)) * h1.len() as u64)
        * r
        * INV_E_LOWER_DEN;
    let rhs = binom_big(&BigUint::from(h1.vertex_count()), r as u32) * INV_E_LOWER_NUM;
    Ok(lhs < rhs)
}

/// A vertex permutation φ placing S′ edge-disjointly from a forbidden graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingWitness {
    pub phi: Vec<usize>,
    pub verified: bool,
    pub lu_szekely_held: bool,
    pub conflicts: usize,
}

impl PackingWitness {
    /// φ(H).
    pub fn apply(&self, h: &Hypergraph) -> Result<Hypergraph> {
        h.relabel(&self.phi, self.phi.len())
    }
}

fn image_conflict(s_prime: &Hypergraph, forbidden: &Hypergraph, phi: &[usize], e: usize, buf: &mut Vec<usize>) -> bool {
    buf.clear();
    buf.extend(s_prime.edge(e).iter().map(|&v| phi[v]));
    buf.sort_unstable();
    forbidden.contains_sorted(buf)
}

/// Finds φ with φ(S′) ∩ forbidden = ∅. Tries the identity, then a seeded random
/// permutation improved by non-worsening transpositions at a conflicting edge.
pub fn pack(s_prime: &Hypergraph, forbidden: &Hypergraph, seed: u64, budget: &mut Budget) -> Result<PackingWitness> {
    s_prime.same_shape(forbidden)?;
    let n = s_prime.vertex_count();
    let held = lu_szekely_condition(s_prime, forbidden)?;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in s_prime.edges().enumerate() {
        for &v in e {
            incident[v].push(i);
        }
    }
    let mut buf = Vec::with_capacity(s_prime.uniformity());
    let mut phi: Vec<usize> = (0..n).collect();
    let mut bad: Vec<bool> =
        (0..s_prime.len()).map(|e| image_conflict(s_prime, forbidden, &phi, e, &mut buf)).collect();
    let mut conflicts = bad.iter().filter(|&&b| b).count();
    if conflicts > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        phi.shuffle(&mut rng);
        for e in 0..s_prime.len() {
            bad[e] = image_conflict(s_prime, forbidden, &phi, e, &mut buf);
        }
        conflicts = bad.iter().filter(|&&b| b).count();
        let mut touched: Vec<usize> = Vec::new();
        while conflicts > 0 {
            if budget.tick().is_err() {
                return Err(Error::PackingFailed { conflicts });
            }
            let bad_edges: Vec<usize> = (0..bad.len()).filter(|&e| bad[e]).collect();
            let e = bad_edges[rng.gen_range(0..bad_edges.len())];
            let edge = s_prime.edge(e);
            let v = edge[rng.gen_range(0..edge.len())];
            let w = rng.gen_range(0..n);
            if v == w {
                continue;
            }
            touched.clear();
            touched.extend(incident[v].iter().chain(&incident[w]).copied());
            touched.sort_unstable();
            touched.dedup();
            let before = touched.iter().filter(|&&f| bad[f]).count();
            phi.swap(v, w);
            let now: Vec<bool> =
                touched.iter().map(|&f| image_conflict(s_prime, forbidden, &phi, f, &mut buf)).collect();
            let after = now.iter().filter(|&&b| b).count();
            if after <= before {
                for (&f, &b) in touched.iter().zip(&now) {
                    bad[f] = b;
                }
                conflicts = conflicts + after - before;
            } else {
                phi.swap(v, w);
            }
        }
    }
    let witness = PackingWitness { phi, verified: true, lu_szekely_held: held, conflicts: 0 };
    if witness.apply(s_prime)?.intersection_size(forbidden) != 0 {
        return Err(Error::InvariantViolation("packing search returned a conflicting map".into()));
    }
    Ok(witness)
}
