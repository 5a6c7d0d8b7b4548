use serde::{Deserialize, Serialize};

use super::hom::{find_homomorphism_into, HomMap, HomTarget};
use crate::error::{Budget, Error, Result};
use crate::hcore::{pair_index, shadow_graph, transversal_number, Hypergraph};
use crate::num::binom;

/// A list of target configurations G_1, …, G_t and the core-size cap n_t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyFamily {
    pub name: String,
    pub graphs: Vec<Hypergraph>,
    pub n_t: usize,
}

pub fn fano_plane() -> Hypergraph {
    Hypergraph::new(3, 7, [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]])
        .expect("valid Fano plane")
}

impl ToyFamily {
    pub fn new(name: impl Into<String>, graphs: Vec<Hypergraph>, n_t: usize) -> Result<Self> {
        if graphs.iter().any(|g| g.uniformity() != 3) {
            return Err(Error::InvalidUniformity("family members must be 3-graphs".into()));
        }
        Ok(ToyFamily { name: name.into(), graphs, n_t })
    }

    /// [K_4³, Fano] with cores up to 7 vertices.
    pub fn k4_fano() -> Self {
        ToyFamily { name: "k4-fano".into(), graphs: vec![Hypergraph::complete(3, 4), fano_plane()], n_t: 7 }
    }

    /// [K_4³] with cores up to 5 vertices.
    pub fn k4() -> Self {
        ToyFamily { name: "k4".into(), graphs: vec![Hypergraph::complete(3, 4)], n_t: 5 }
    }

    /// Index of the first G_i that H maps into.
    pub fn coloring(&self, h: &Hypergraph, budget: &mut Budget) -> Result<Option<(usize, HomMap)>> {
        for (i, g) in self.graphs.iter().enumerate() {
            let t = HomTarget::new(g)?;
            if let Some(m) = find_homomorphism_into(h, &t, budget)? {
                return Ok(Some((i, m)));
            }
        }
        Ok(None)
    }
}

/// Three-valued answer; budget exhaustion is never folded into true or false.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict<Y, N> {
    Yes(Y),
    No(N),
    Indeterminate { reason: String },
}

impl<Y, N> Verdict<Y, N> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }
    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }
    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Verdict::Indeterminate { .. })
    }

    fn from_result(r: Result<Verdict<Y, N>>) -> Result<Verdict<Y, N>> {
        match r {
            Err(e) if e.is_budget() => Ok(Verdict::Indeterminate { reason: e.to_string() }),
            other => other,
        }
    }
}

/// A core S of F with τ(F[S]) ≥ 2 and |F| ≤ C(|S|,3); F is G_i-colourable for no i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberCertificate {
    pub core: Vec<usize>,
    pub edges: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NonMember {
    Colorable { index: usize, map: Vec<usize> },
    NoCore,
}

pub type MembershipVerdict = Verdict<MemberCertificate, NonMember>;

/// Membership in M_t: some 2-covered S with |S| ≤ n_t, |F| ≤ C(|S|,3) and τ(F[S]) ≥ 2,
/// and no homomorphism into any G_i.
pub fn in_mt(f: &Hypergraph, family: &ToyFamily, budget: &mut Budget) -> Result<MembershipVerdict> {
    Verdict::from_result(in_mt_inner(f, family, budget))
}

fn in_mt_inner(f: &Hypergraph, family: &ToyFamily, budget: &mut Budget) -> Result<MembershipVerdict> {
    if f.uniformity() != 3 {
        return Err(Error::InvalidUniformity("M_t members are 3-graphs".into()));
    }
    let Some(core) = tau_core(f, family.n_t, budget)? else {
        return Ok(Verdict::No(NonMember::NoCore));
    };
    if let Some((index, m)) = family.coloring(f, budget)? {
        return Ok(Verdict::No(NonMember::Colorable { index, map: m.map }));
    }
    Ok(Verdict::Yes(MemberCertificate { core, edges: f.edge_vecs() }))
}

/// A clique S of ∂F with 4 ≤ |S| ≤ n_t, |F| ≤ C(|S|,3) and τ(F[S]) ≥ 2.
fn tau_core(f: &Hypergraph, n_t: usize, budget: &mut Budget) -> Result<Option<Vec<usize>>> {
    let min = (4..=n_t.max(4)).find(|&l| f.len() as u128 <= binom(l as u64, 3)).unwrap_or(usize::MAX);
    if min > n_t {
        return Ok(None);
    }
    let sh = shadow_graph(f);
    let mut found = None;
    let mut tau_budget = Budget::new("core transversal", budget.remaining());
    sh.for_each_clique(min, n_t, budget, &mut |s| {
        if transversal_number(&f.induced(s), &mut tau_budget)? >= 2 {
            found = Some(s.to_vec());
            return Ok(false);
        }
        Ok(true)
    })?;
    Ok(found)
}

/// Why H fails to be M_t-free: a member F ⊆ H with its core.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub core: Vec<usize>,
    pub member_edges: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum FreeReason {
    Colorable { index: usize, map: Vec<usize> },
    NoMemberSubgraph,
}

pub type FreenessVerdict = Verdict<FreeReason, Violation>;

/// Decides whether H contains a member of M_t.
///
/// A G_i-colourable H is free outright. Otherwise every clique S of ∂H with 4 ≤ |S| ≤ n_t
/// is tried: if |H| ≤ C(|S|,3) then H itself is the candidate member; else a subgraph F
/// with |F| ≤ C(|S|,3) is searched for, pruning with the monotone requirements (2-cover of
/// S, τ(F[S]) ≥ 2, non-colourability) on F ∪ {undecided edges}.
pub fn is_mt_free(h: &Hypergraph, family: &ToyFamily, budget: &mut Budget) -> Result<FreenessVerdict> {
    Verdict::from_result(is_mt_free_inner(h, family, budget))
}

fn is_mt_free_inner(h: &Hypergraph, family: &ToyFamily, budget: &mut Budget) -> Result<FreenessVerdict> {
    if h.uniformity() != 3 {
        return Err(Error::InvalidUniformity("freeness is tested on 3-graphs".into()));
    }
    if let Some((index, m)) = family.coloring(h, budget)? {
        return Ok(Verdict::Yes(FreeReason::Colorable { index, map: m.map }));
    }
    let targets: Vec<HomTarget<'_>> = family.graphs.iter().map(HomTarget::new).collect::<Result<_>>()?;
    let sh = shadow_graph(h);
    let mut violation: Option<Violation> = None;
    let mut inner = Budget::new("member subgraph search", budget.remaining());
    sh.for_each_clique(4, family.n_t, budget, &mut |s| {
        let bound = binom(s.len() as u64, 3) as usize;
        let found = if h.len() <= bound {
            let mut b = Budget::new("core transversal", inner.remaining());
            (transversal_number(&h.induced(s), &mut b)? >= 2).then(|| h.edge_vecs())
        } else {
            SubgraphSearch::new(h, s, bound, &targets).run(&mut inner)?
        };
        match found {
            Some(edges) => {
                violation = Some(Violation { core: s.to_vec(), member_edges: edges });
                Ok(false)
            }
            None => Ok(true),
        }
    })?;
    Ok(match violation {
        Some(v) => Verdict::No(v),
        None => Verdict::Yes(FreeReason::NoMemberSubgraph),
    })
}

/// Include/exclude search over edges of H for a member with core S and at most `bound` edges.
struct SubgraphSearch<'a, 'b> {
    h: &'a Hypergraph,
    core: Vec<usize>,
    bound: usize,
    targets: &'b [HomTarget<'b>],
    /// Edges meeting the core in more vertices are decided first.
    order: Vec<usize>,
    state: Vec<Option<bool>>,
}

impl<'a, 'b> SubgraphSearch<'a, 'b> {
    fn new(h: &'a Hypergraph, core: &[usize], bound: usize, targets: &'b [HomTarget<'b>]) -> Self {
        let mut in_core = vec![false; h.vertex_count()];
        for &v in core {
            in_core[v] = true;
        }
        let weight = |e: &[usize]| e.iter().filter(|&&v| in_core[v]).count();
        let mut order: Vec<usize> = (0..h.len()).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(weight(h.edge(i))), i));
        SubgraphSearch { h, core: core.to_vec(), bound, targets, order, state: vec![None; h.len()] }
    }

    fn run(mut self, budget: &mut Budget) -> Result<Option<Vec<Vec<usize>>>> {
        self.rec(0, 0, budget)
    }

    fn subgraph(&self, optimistic: bool) -> Result<Hypergraph> {
        let edges = (0..self.h.len())
            .filter(|&i| self.state[i] == Some(true) || (optimistic && self.state[i].is_none()))
            .map(|i| self.h.edge(i));
        Hypergraph::new(3, self.h.vertex_count(), edges)
    }

    fn uncovered_pairs(&self, f: &Hypergraph) -> usize {
        let n = self.h.vertex_count();
        let t = f.codegree_table();
        let mut missing = 0;
        for (i, &u) in self.core.iter().enumerate() {
            for &v in &self.core[i + 1..] {
                if t[pair_index(n, u, v)] == 0 {
                    missing += 1;
                }
            }
        }
        missing
    }

    fn satisfies(&self, f: &Hypergraph, budget: &mut Budget) -> Result<bool> {
        if self.uncovered_pairs(f) > 0 {
            return Ok(false);
        }
        if transversal_number(&f.induced(&self.core), budget)? < 2 {
            return Ok(false);
        }
        for t in self.targets {
            if find_homomorphism_into(f, t, budget)?.is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn rec(&mut self, pos: usize, chosen: usize, budget: &mut Budget) -> Result<Option<Vec<Vec<usize>>>> {
        budget.tick()?;
        // Every requirement is monotone, so the chosen set plus all undecided edges must pass.
        let optimistic = self.subgraph(true)?;
        if !self.satisfies(&optimistic, budget)? {
            return Ok(None);
        }
        let current = self.subgraph(false)?;
        let need = self.uncovered_pairs(&current).div_ceil(3);
        if chosen + need > self.bound {
            return Ok(None);
        }
        if self.satisfies(&current, budget)? {
            return Ok(Some(current.edge_vecs()));
        }
        if pos == self.order.len() || chosen == self.bound {
            return Ok(None);
        }
        let e = self.order[pos];
        for include in [true, false] {
            self.state[e] = Some(include);
            let r = self.rec(pos + 1, chosen + include as usize, budget)?;
            if r.is_some() {
                return Ok(r);
            }
        }
        self.state[e] = None;
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hcore::blow_up;

    #[test]
    fn membership_examples() {
        let fam = ToyFamily::k4_fano();
        let mut b = Budget::new("m", 10_000_000);
        assert!(in_mt(&Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap(), &fam, &mut b).unwrap().is_no());
        let k5 = Hypergraph::complete(3, 5);
        assert!(in_mt(&k5, &fam, &mut b).unwrap().is_yes());
        // K_4^3 has a 4-core with τ = 2 but maps into itself.
        assert!(matches!(
            in_mt(&Hypergraph::complete(3, 4), &fam, &mut b).unwrap(),
            Verdict::No(NonMember::Colorable { index: 0, .. })
        ));
        // K_8^3 has 56 edges, needing a core of at least 8 vertices > n_t = 7.
        assert!(matches!(in_mt(&Hypergraph::complete(3, 8), &fam, &mut b).unwrap(), Verdict::No(NonMember::NoCore)));
        let big = ToyFamily { n_t: 8, ..ToyFamily::k4_fano() };
        assert!(in_mt(&Hypergraph::complete(3, 8), &big, &mut b).unwrap().is_yes());
    }

    #[test]
    fn freeness_examples() {
        let fam = ToyFamily::k4();
        let mut b = Budget::new("f", 50_000_000);
        let star = Hypergraph::new(3, 6, [[0, 1, 2], [0, 3, 4], [0, 1, 5], [0, 2, 4]]).unwrap();
        assert!(is_mt_free(&star, &fam, &mut b).unwrap().is_yes());
        let (h, _) = blow_up(&Hypergraph::complete(3, 4), &[2, 2, 2, 2], false).unwrap();
        assert!(is_mt_free(&h, &fam, &mut b).unwrap().is_yes());
        // Vertices 0 and 1 share a block; the extra edge makes {0, 1, 2, 4, 6} 2-covered.
        let h2 = h.with_edges_added([[0, 1, 2]]).unwrap();
        match is_mt_free(&h2, &fam, &mut b).unwrap() {
            Verdict::No(v) => {
                let f = Hypergraph::new(3, h2.vertex_count(), &v.member_edges).unwrap();
                assert!(f.is_subgraph_of(&h2));
                assert!(in_mt(&f, &fam, &mut b).unwrap().is_yes());
            }
            other => panic!("expected a violation, got {other:?}"),
        }
        let mut tiny = Budget::new("f", 5);
        assert!(is_mt_free(&h2, &fam, &mut tiny).unwrap().is_indeterminate());
    }

    #[test]
    fn subgraph_search_finds_sparse_members() {
        // K_5^3 plus pendant edges: too many edges for a 5-core, but K_5^3 itself is a member.
        let mut edges = Hypergraph::complete(3, 5).edge_vecs();
        edges.extend([vec![0, 5, 6], vec![1, 5, 6], vec![2, 5, 6], vec![3, 5, 6], vec![4, 5, 6]]);
        let h = Hypergraph::new(3, 7, &edges).unwrap();
        let fam = ToyFamily { n_t: 5, ..ToyFamily::k4() };
        let mut b = Budget::new("f", 50_000_000);
        let v = is_mt_free(&h, &fam, &mut b).unwrap();
        let Verdict::No(v) = v else { panic!("expected a violation") };
        assert!(v.member_edges.len() <= 10);
    }
}
