use serde::{Deserialize, Serialize};

use crate::error::{Budget, Error, Result};
use crate::graph::BitGraph;
use crate::hcore::{pair_index, shadow_graph, Hypergraph};

/// A vertex map V(F) → V(G) sending every edge of F onto an edge of G.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomMap {
    pub map: Vec<usize>,
}

impl HomMap {
    /// Re-checks the map edge by edge.
    pub fn verify(&self, f: &Hypergraph, g: &Hypergraph) -> bool {
        if self.map.len() != f.vertex_count() || self.map.iter().any(|&x| x >= g.vertex_count()) {
            return false;
        }
        let mut buf = Vec::with_capacity(f.uniformity());
        f.edges().all(|e| {
            buf.clear();
            buf.extend(e.iter().map(|&v| self.map[v]));
            buf.sort_unstable();
            buf.windows(2).all(|w| w[0] < w[1]) && g.contains_sorted(&buf)
        })
    }
}

/// Precomputed adjacency of the target: its shadow and, per pair, the completing vertices.
pub struct HomTarget<'a> {
    g: &'a Hypergraph,
    words: usize,
    shadow: BitGraph,
    pair_link: Vec<u64>,
    support: Vec<u64>,
}

impl<'a> HomTarget<'a> {
    pub fn new(g: &'a Hypergraph) -> Result<Self> {
        if g.uniformity() != 3 {
            return Err(Error::InvalidUniformity("homomorphism search expects 3-graphs".into()));
        }
        let n = g.vertex_count();
        let words = n.div_ceil(64).max(1);
        let mut pair_link = vec![0u64; n * n.saturating_sub(1) / 2 * words];
        let mut support = vec![0u64; words];
        for e in g.edges() {
            for (i, j, c) in [(e[0], e[1], e[2]), (e[0], e[2], e[1]), (e[1], e[2], e[0])] {
                pair_link[pair_index(n, i, j) * words + c / 64] |= 1 << (c % 64);
            }
            for &v in e {
                support[v / 64] |= 1 << (v % 64);
            }
        }
        Ok(HomTarget { g, words, shadow: shadow_graph(g), pair_link, support })
    }

    fn link_words(&self, a: usize, b: usize) -> &[u64] {
        let p = pair_index(self.g.vertex_count(), a, b);
        &self.pair_link[p * self.words..(p + 1) * self.words]
    }
}

/// Searches for a homomorphism F → G. `Ok(None)` is an exhaustive certificate of
/// non-existence; running out of budget is an error, never `None`.
pub fn find_homomorphism(f: &Hypergraph, g: &Hypergraph, budget: &mut Budget) -> Result<Option<HomMap>> {
    let target = HomTarget::new(g)?;
    find_homomorphism_into(f, &target, budget)
}

/// Like [`find_homomorphism`] with the target tables built once by the caller.
pub fn find_homomorphism_into(f: &Hypergraph, t: &HomTarget<'_>, budget: &mut Budget) -> Result<Option<HomMap>> {
    if f.uniformity() != 3 {
        return Err(Error::InvalidUniformity("homomorphism search expects 3-graphs".into()));
    }
    let nf = f.vertex_count();
    if nf == 0 {
        return Ok(Some(HomMap { map: Vec::new() }));
    }
    if t.g.vertex_count() == 0 {
        return Ok(None);
    }
    let mut incident: Vec<Vec<[usize; 2]>> = vec![Vec::new(); nf];
    for e in f.edges() {
        incident[e[0]].push([e[1], e[2]]);
        incident[e[1]].push([e[0], e[2]]);
        incident[e[2]].push([e[0], e[1]]);
    }
    let mut st = HomState { t, incident, assign: vec![None; nf] };
    if !st.rec(budget)? {
        return Ok(None);
    }
    let map: Vec<usize> = st.assign.iter().map(|a| a.unwrap_or(0)).collect();
    let hom = HomMap { map };
    if !hom.verify(f, t.g) {
        return Err(Error::InvariantViolation("homomorphism search returned an invalid map".into()));
    }
    Ok(Some(hom))
}

struct HomState<'a, 'b> {
    t: &'b HomTarget<'a>,
    incident: Vec<Vec<[usize; 2]>>,
    assign: Vec<Option<usize>>,
}

impl HomState<'_, '_> {
    fn candidates(&self, x: usize) -> Vec<u64> {
        let mut c = self.t.support.clone();
        for &[y, z] in &self.incident[x] {
            match (self.assign[y], self.assign[z]) {
                (Some(a), Some(b)) => {
                    if a == b {
                        c.iter_mut().for_each(|w| *w = 0);
                        return c;
                    }
                    for (w, l) in c.iter_mut().zip(self.t.link_words(a, b)) {
                        *w &= l;
                    }
                }
                (Some(a), None) | (None, Some(a)) => {
                    for (w, l) in c.iter_mut().zip(self.t.shadow.row(a)) {
                        *w &= l;
                    }
                }
                (None, None) => {}
            }
        }
        c
    }

    fn rec(&mut self, budget: &mut Budget) -> Result<bool> {
        budget.tick()?;
        // Most constrained unassigned non-isolated vertex.
        let mut pick: Option<(usize, Vec<u64>, u32)> = None;
        for x in 0..self.assign.len() {
            if self.assign[x].is_some() || self.incident[x].is_empty() {
                continue;
            }
            let c = self.candidates(x);
            let count: u32 = c.iter().map(|w| w.count_ones()).sum();
            if pick.as_ref().map_or(true, |p| count < p.2) {
                let done = count == 0;
                pick = Some((x, c, count));
                if done {
                    break;
                }
            }
        }
        let Some((x, cand, _)) = pick else {
            return Ok(true);
        };
        for (wi, &word) in cand.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let v = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                self.assign[x] = Some(v);
                if self.rec(budget)? {
                    return Ok(true);
                }
            }
        }
        self.assign[x] = None;
        Ok(false)
    }
}

/// G-colourability: some homomorphism into G exists.
pub fn is_colorable(f: &Hypergraph, g: &Hypergraph, budget: &mut Budget) -> Result<bool> {
    Ok(find_homomorphism(f, g, budget)?.is_some())
}
