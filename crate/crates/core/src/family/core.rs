use serde::{Deserialize, Serialize};

use crate::error::{Budget, Error, Result};
use crate::hcore::{is_two_covered, shadow_graph, transversal_number, Hypergraph};
use crate::num::binom;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoreKind {
    /// K_ℓ³: at most C(ℓ,2) edges.
    K,
    /// K̂_ℓ³: at most C(ℓ,3) edges.
    KHat,
}

impl CoreKind {
    pub fn edge_bound(self, ell: usize) -> u128 {
        match self {
            CoreKind::K => binom(ell as u64, 2),
            CoreKind::KHat => binom(ell as u64, 3),
        }
    }
}

/// A 2-covered ℓ-set certifying membership of F in K_ℓ³ or K̂_ℓ³.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreWitness {
    pub core: Vec<usize>,
    pub ell: usize,
    pub kind: CoreKind,
    pub tau_ge_2: Option<bool>,
}

impl CoreWitness {
    /// Re-checks the 2-cover and the edge-count gate.
    pub fn verify(&self, f: &Hypergraph) -> bool {
        self.core.len() == self.ell
            && is_two_covered(f, &self.core)
            && f.len() as u128 <= self.kind.edge_bound(self.ell)
    }
}

/// Looks for a 2-covered ℓ-set (an ℓ-clique of ∂F). With `require_tau2`, only cores with
/// τ(F[S]) ≥ 2 are returned.
pub fn find_core(
    f: &Hypergraph,
    ell: usize,
    kind: CoreKind,
    require_tau2: bool,
    budget: &mut Budget,
) -> Result<Option<CoreWitness>> {
    if f.uniformity() != 3 {
        return Err(Error::InvalidUniformity("cores are defined for 3-graphs".into()));
    }
    if f.len() as u128 > kind.edge_bound(ell) || ell > f.vertex_count() {
        return Ok(None);
    }
    let sh = shadow_graph(f);
    let mut found = None;
    let mut tau_budget = Budget::new("core transversal", budget.remaining());
    sh.for_each_clique(ell, ell, budget, &mut |s| {
        let tau_ok = Some(transversal_number(&f.induced(s), &mut tau_budget)? >= 2);
        if require_tau2 && tau_ok != Some(true) {
            return Ok(true);
        }
        found = Some(CoreWitness { core: s.to_vec(), ell, kind, tau_ge_2: tau_ok });
        Ok(false)
    })?;
    if let Some(w) = &found {
        if !w.verify(f) {
            return Err(Error::InvariantViolation("core search returned an invalid witness".into()));
        }
    }
    Ok(found)
}

/// If τ(H) ≥ 2, a subgraph H′ with at most r + 1 edges and τ(H′) ≥ 2: an edge E₁, an edge
/// E₂ meeting it as little as possible, and for each shared vertex an edge avoiding it.
pub fn tau_witness(h: &Hypergraph) -> Option<Hypergraph> {
    let first = h.edges().next()?;
    let e1 = first.to_vec();
    let e2 = h.edges().min_by_key(|e| e.iter().filter(|v| e1.contains(v)).count())?.to_vec();
    let mut chosen = vec![e1.clone()];
    if e2 != e1 {
        chosen.push(e2.clone());
    }
    for &v in e1.iter().filter(|v| e2.contains(v)) {
        let avoid = h.edges().find(|e| !e.contains(&v))?;
        if !chosen.iter().any(|c| c == avoid) {
            chosen.push(avoid.to_vec());
        }
    }
    let w = Hypergraph::new(h.uniformity(), h.vertex_count(), &chosen).ok()?;
    debug_assert!(w.len() <= h.uniformity() + 1);
    Some(w)
}

/// A subgraph of F that lies in K³_{|S|} (or K³_s on an s-subset containing the τ-witness)
/// and keeps τ ≥ 2 on the core: the τ-witness of F[S] plus one covering edge per pair it
/// leaves uncovered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub f_prime: Hypergraph,
    pub core: Vec<usize>,
}

pub fn reduce_to_k(f: &Hypergraph, s: &[usize], target_s: Option<usize>) -> Result<Reduction> {
    let mut s_sorted = s.to_vec();
    s_sorted.sort_unstable();
    s_sorted.dedup();
    if s_sorted.len() < 4 {
        return Err(Error::Precondition("the core needs at least 4 vertices".into()));
    }
    if !is_two_covered(f, &s_sorted) {
        return Err(Error::Precondition("S is not 2-covered in F".into()));
    }
    let witness = tau_witness(&f.induced(&s_sorted))
        .ok_or_else(|| Error::Precondition("τ(F[S]) < 2".into()))?;
    let core = match target_s {
        None => s_sorted.clone(),
        Some(t) => {
            if t < 12 || t > s_sorted.len() {
                return Err(Error::Precondition(format!("target size {t} must lie in [12, |S|]")));
            }
            let mut core: Vec<usize> = witness.non_isolated();
            for &v in &s_sorted {
                if core.len() >= t {
                    break;
                }
                if !core.contains(&v) {
                    core.push(v);
                }
            }
            core.sort_unstable();
            core
        }
    };
    let mut edges: Vec<Vec<usize>> = witness.edge_vecs();
    let covered = |edges: &[Vec<usize>], u: usize, v: usize| edges.iter().any(|e| e.contains(&u) && e.contains(&v));
    for (i, &u) in core.iter().enumerate() {
        for &v in &core[i + 1..] {
            if !covered(&edges, u, v) {
                let e = f.edges().find(|e| e.contains(&u) && e.contains(&v)).expect("S is 2-covered");
                edges.push(e.to_vec());
            }
        }
    }
    let f_prime = Hypergraph::new(3, f.vertex_count(), &edges)?;
    let ell = core.len();
    if f_prime.len() as u128 >= binom(ell as u64, 2) {
        return Err(Error::InvariantViolation(format!("|F'| = {} is not below C({ell},2)", f_prime.len())));
    }
    Ok(Reduction { f_prime, core })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> Hypergraph {
        Hypergraph::new(3, 7, [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]]).unwrap()
    }

    #[test]
    fn core_examples() {
        let mut b = Budget::new("core", 1_000_000);
        let k4 = Hypergraph::complete(3, 4);
        let w = find_core(&k4, 4, CoreKind::K, false, &mut b).unwrap().unwrap();
        assert_eq!(w.core, vec![0, 1, 2, 3]);
        assert_eq!(w.tau_ge_2, Some(true));
        let one = Hypergraph::new(3, 5, [[0, 1, 2]]).unwrap();
        assert!(find_core(&one, 4, CoreKind::KHat, false, &mut b).unwrap().is_none());
        let w = find_core(&fano(), 7, CoreKind::KHat, true, &mut b).unwrap().unwrap();
        assert_eq!(w.core.len(), 7);
        assert!(w.verify(&fano()));
    }

    #[test]
    fn tau_witness_examples() {
        let star = Hypergraph::new(3, 5, [[0, 1, 2], [0, 3, 4], [0, 1, 3]]).unwrap();
        assert!(tau_witness(&star).is_none());
        let two = Hypergraph::new(3, 6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        assert_eq!(tau_witness(&two).unwrap(), two);
        let k4 = Hypergraph::complete(3, 4);
        let w = tau_witness(&k4).unwrap();
        assert!(w.len() <= 4);
        let mut b = Budget::unlimited("tau");
        assert!(transversal_number(&w, &mut b).unwrap() >= 2);
        // K_4^3 minus any edge has τ = 1, so the bound r + 1 = 4 is attained.
        assert_eq!(w.len(), 4);
        let w = tau_witness(&fano()).unwrap();
        assert!(transversal_number(&w, &mut b).unwrap() >= 2 && w.len() <= 4);
    }

    #[test]
    fn reduction_examples() {
        let k4 = Hypergraph::complete(3, 4);
        let r = reduce_to_k(&k4, &[0, 1, 2, 3], None).unwrap();
        assert!(r.f_prime.len() <= 5);
        assert!(r.f_prime.is_subgraph_of(&k4));
        assert!(is_two_covered(&r.f_prime, &r.core));
        let mut b = Budget::unlimited("tau");
        assert!(transversal_number(&r.f_prime.induced(&r.core), &mut b).unwrap() >= 2);

        let k13 = Hypergraph::complete(3, 13);
        let all: Vec<usize> = (0..13).collect();
        let r = reduce_to_k(&k13, &all, Some(12)).unwrap();
        assert_eq!(r.core.len(), 12);
        let w = CoreWitness { core: r.core.clone(), ell: 12, kind: CoreKind::K, tau_ge_2: None };
        assert!(w.verify(&r.f_prime));
        assert!(transversal_number(&r.f_prime.induced(&r.core), &mut b).unwrap() >= 2);
        assert!(reduce_to_k(&k13, &all, Some(11)).is_err());
        assert!(reduce_to_k(&Hypergraph::new(3, 5, [[0, 1, 2]]).unwrap(), &[0, 1, 2, 3], None).is_err());
    }
}
