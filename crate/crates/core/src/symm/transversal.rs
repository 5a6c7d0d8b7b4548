use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcore::{Hypergraph, VertexPartition};
use crate::num::{rat_int, Rational};

/// Which sampler hypotheses hold, each decided in exact arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalGates {
    /// |V_j|³ ≥ ((|S|+1)|T|)³ η n³ for every j ∈ T.
    pub class_sizes: bool,
    /// H misses at most ηn³ triples of Ĝ between any three classes of T.
    pub triples: bool,
    /// Every S-link misses at most ηn² pairs of Ĝ's link between two classes of T.
    pub links: bool,
}

impl TransversalGates {
    pub fn all(&self) -> bool {
        self.class_sizes && self.triples && self.links
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalReport {
    pub gates: TransversalGates,
    /// u_j for j ∈ T, in the order of `t`.
    pub selection: Option<Vec<usize>>,
    pub tries_used: usize,
}

fn pair_link_count(h: &Hypergraph, v: usize, a: &[usize], b: &[usize]) -> usize {
    h.edges()
        .filter(|e| e.contains(&v))
        .filter(|e| {
            let rest: Vec<usize> = e.iter().copied().filter(|&x| x != v).collect();
            (a.contains(&rest[0]) && b.contains(&rest[1])) || (a.contains(&rest[1]) && b.contains(&rest[0]))
        })
        .count()
}

fn check_gates(
    h: &Hypergraph,
    g: &Hypergraph,
    parts: &VertexPartition,
    s: &[usize],
    t: &[usize],
    eta: &Rational,
) -> TransversalGates {
    let n = rat_int(h.vertex_count());
    let n2 = &n * &n;
    let n3 = &n2 * &n;
    let factor = rat_int(((s.len() + 1) * t.len()) as u64);
    let need = &factor * &factor * &factor * eta * &n3;
    let class_sizes = t.iter().all(|&j| {
        let sz = rat_int(parts.block(j).len());
        &sz * &sz * &sz >= need
    });
    let mut triples = true;
    let mut label = vec![usize::MAX; h.vertex_count()];
    for (j, b) in parts.blocks().iter().enumerate() {
        for &v in b {
            label[v] = j;
        }
    }
    for x in 0..t.len() {
        for y in x + 1..t.len() {
            for z in y + 1..t.len() {
                let js = [t[x], t[y], t[z]];
                if !g.contains(&js) {
                    continue;
                }
                let full: usize = js.iter().map(|&j| parts.block(j).len()).product();
                let have = h
                    .edges()
                    .filter(|e| {
                        let mut l: Vec<usize> = e.iter().map(|&v| label[v]).collect();
                        l.sort_unstable();
                        let mut want = js;
                        want.sort_unstable();
                        l == want
                    })
                    .count();
                if rat_int(have) < rat_int(full) - eta * &n3 {
                    triples = false;
                }
            }
        }
    }
    let mut links = true;
    for &v in s {
        let p = label[v];
        for x in 0..t.len() {
            for y in x + 1..t.len() {
                let (a, b) = (parts.block(t[x]), parts.block(t[y]));
                let full = if g.contains(&[p, t[x], t[y]]) { a.len() * b.len() } else { 0 };
                if full == 0 {
                    continue;
                }
                if rat_int(pair_link_count(h, v, a, b)) < rat_int(full) - eta * &n2 {
                    links = false;
                }
            }
        }
    }
    TransversalGates { class_sizes, triples, links }
}

/// Draws u_j ∈ V_j uniformly and independently for j ∈ T until Ĝ[U] ⊆ H[U] and every
/// S-link of Ĝ restricted to U is present in H, or `tries` draws fail.
pub fn sample_transversal(
    h: &Hypergraph,
    g: &Hypergraph,
    parts: &VertexPartition,
    s: &[usize],
    t: &[usize],
    eta: &Rational,
    seed: u64,
    tries: usize,
) -> Result<TransversalReport> {
    if parts.vertex_count() != h.vertex_count() || parts.len() != g.vertex_count() {
        return Err(Error::Precondition("partition does not match H and G".into()));
    }
    if t.iter().any(|&j| j >= g.vertex_count() || parts.block(j).is_empty()) {
        return Err(Error::Precondition("T must name non-empty classes".into()));
    }
    let label = |v: usize| parts.block_of(v).expect("partition covers H");
    if s.iter().any(|&v| v >= h.vertex_count() || t.contains(&label(v))) {
        return Err(Error::Precondition("S must lie outside the classes of T".into()));
    }
    let gates = check_gates(h, g, parts, s, t, eta);
    if t.is_empty() {
        return Ok(TransversalReport { gates, selection: Some(Vec::new()), tries_used: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=tries {
        let u: Vec<usize> = t
            .iter()
            .map(|&j| {
                let b = parts.block(j);
                b[rng.gen_range(0..b.len())]
            })
            .collect();
        if accepts(h, g, s, t, &u, &label) {
            return Ok(TransversalReport { gates, selection: Some(u), tries_used: attempt });
        }
    }
    Ok(TransversalReport { gates, selection: None, tries_used: tries })
}

fn accepts(h: &Hypergraph, g: &Hypergraph, s: &[usize], t: &[usize], u: &[usize], label: &impl Fn(usize) -> usize) -> bool {
    let k = t.len();
    for x in 0..k {
        for y in x + 1..k {
            for z in y + 1..k {
                if g.contains(&[t[x], t[y], t[z]]) && !h.contains(&[u[x], u[y], u[z]]) {
                    return false;
                }
            }
            for &v in s {
                if g.contains(&[label(v), t[x], t[y]]) && !h.contains(&[v, u[x], u[y]]) {
                    return false;
                }
            }
        }
    }
    true
}
