use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::hypergraph::{for_each_subset, pair_index, Hypergraph};
use super::partition::VertexPartition;
use crate::error::{Error, Result};
use crate::graph::BitGraph;
use crate::num::{binom, Rational};

/// ∂H: all (r−1)-sets contained in an edge.
pub fn shadow(h: &Hypergraph) -> Result<Hypergraph> {
    let r = h.uniformity();
    if r < 2 {
        return Err(Error::InvalidUniformity(format!("shadow needs r >= 2, got {r}")));
    }
    let mut flat = Vec::with_capacity(h.len() * r * (r - 1));
    for e in h.edges() {
        for skip in 0..r {
            flat.extend(e.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
        }
    }
    Ok(Hypergraph::from_flat_rows(r - 1, h.vertex_count(), flat))
}

/// The 2-shadow of a 3-graph as a bitset graph.
pub fn shadow_graph(h: &Hypergraph) -> BitGraph {
    let mut g = BitGraph::new(h.vertex_count());
    for e in h.edges() {
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                g.add_edge(e[i], e[j]);
            }
        }
    }
    g
}

/// (|∂H| / C(n, r−1), |H| / C(n, r)).
pub fn densities(h: &Hypergraph) -> Result<(Rational, Rational)> {
    let (r, n) = (h.uniformity(), h.vertex_count());
    if n < r {
        return Err(Error::InvalidSize(format!("densities need n >= r, got n = {n}, r = {r}")));
    }
    let sh = shadow(h)?;
    let x = Rational::new(BigInt::from(sh.len()), BigInt::from(binom(n as u64, r as u64 - 1)));
    let y = Rational::new(BigInt::from(h.len()), BigInt::from(binom(n as u64, r as u64)));
    Ok((x, y))
}

/// L_H(v) as an (r−1)-graph on the same vertex set.
pub fn link(h: &Hypergraph, v: usize) -> Result<Hypergraph> {
    h.check_vertex(v)?;
    let r = h.uniformity();
    if r < 2 {
        return Err(Error::InvalidUniformity("link needs r >= 2".into()));
    }
    let mut flat = Vec::new();
    for e in h.edges() {
        if e.contains(&v) {
            flat.extend(e.iter().copied().filter(|&u| u != v));
        }
    }
    // Rows stay sorted: removing one entry from a sorted row keeps it sorted, and the
    // edge order restricted to edges through v induces lexicographic order on the rest.
    Ok(Hypergraph::from_flat_rows(r - 1, h.vertex_count(), flat))
}

/// Link of a vertex in a 3-graph as a bitset graph.
pub fn link_graph(h: &Hypergraph, v: usize) -> Result<BitGraph> {
    h.check_vertex(v)?;
    let mut g = BitGraph::new(h.vertex_count());
    for e in h.edges() {
        if let Some(p) = e.iter().position(|&u| u == v) {
            let rest: Vec<usize> = e.iter().enumerate().filter(|&(i, _)| i != p).map(|(_, &u)| u).collect();
            if rest.len() == 2 {
                g.add_edge(rest[0], rest[1]);
            }
        }
    }
    Ok(g)
}

pub fn degree(h: &Hypergraph, v: usize) -> Result<usize> {
    h.check_vertex(v)?;
    Ok(h.degrees()[v])
}

/// Number of edges containing both u and v.
pub fn codegree(h: &Hypergraph, u: usize, v: usize) -> Result<usize> {
    h.check_vertex(u)?;
    h.check_vertex(v)?;
    if u == v {
        return Err(Error::InvalidPair(u, v));
    }
    Ok(h.codegree_table()[pair_index(h.vertex_count(), u, v)] as usize)
}

/// (δ₂, Δ₂) over all vertex pairs; `None` when n < 2.
pub fn min_max_codegree(h: &Hypergraph) -> Option<(usize, usize)> {
    let t = h.codegree_table();
    let lo = t.iter().min()?;
    let hi = t.iter().max()?;
    Some((*lo as usize, *hi as usize))
}

/// Balanced-or-not blow-up G[V_1, …, V_m]; block j occupies a contiguous id range.
pub fn blow_up(g: &Hypergraph, sizes: &[usize], allow_zero: bool) -> Result<(Hypergraph, VertexPartition)> {
    let m = g.vertex_count();
    if sizes.len() != m {
        return Err(Error::LengthMismatch { expected: m, got: sizes.len() });
    }
    if !allow_zero && sizes.contains(&0) {
        return Err(Error::InvalidSize("zero block size without allow_zero".into()));
    }
    let mut starts = Vec::with_capacity(m);
    let mut acc = 0;
    for &s in sizes {
        starts.push(acc);
        acc += s;
    }
    let blocks: Vec<Vec<usize>> = (0..m).map(|j| (starts[j]..starts[j] + sizes[j]).collect()).collect();
    let r = g.uniformity();
    let mut flat = Vec::new();
    let mut tuple = vec![0usize; r];
    for e in g.edges() {
        product_rec(e, &blocks, 0, &mut tuple, &mut flat);
    }
    let h = Hypergraph::from_flat_rows(r, acc, flat);
    Ok((h, VertexPartition::new(acc, blocks)?))
}

fn product_rec(e: &[usize], blocks: &[Vec<usize>], i: usize, tuple: &mut Vec<usize>, out: &mut Vec<usize>) {
    if i == e.len() {
        out.extend_from_slice(tuple);
        return;
    }
    for &v in &blocks[e[i]] {
        tuple[i] = v;
        product_rec(e, blocks, i + 1, tuple, out);
    }
}

/// Every pair of `s` lies in a common edge.
pub fn is_two_covered(h: &Hypergraph, s: &[usize]) -> bool {
    if s.iter().any(|&v| v >= h.vertex_count()) {
        return false;
    }
    let t = h.codegree_table();
    let n = h.vertex_count();
    for (i, &u) in s.iter().enumerate() {
        for &v in &s[i + 1..] {
            if u == v || t[pair_index(n, u, v)] == 0 {
                return false;
            }
        }
    }
    true
}

/// Groups vertices with identical links; classes are ordered by their smallest vertex.
pub fn equivalence_classes(h: &Hypergraph) -> Result<VertexPartition> {
    let n = h.vertex_count();
    let r = h.uniformity();
    let mut links: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in h.edges() {
        for (p, &v) in e.iter().enumerate() {
            links[v].extend(e.iter().enumerate().filter(|&(i, _)| i != p).map(|(_, &u)| u));
        }
    }
    let mut index: HashMap<&[usize], usize> = HashMap::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut label = vec![0usize; n];
    for v in 0..n {
        let k = *index.entry(links[v].as_slice()).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[k].push(v);
        label[v] = k;
    }
    for e in h.edges() {
        for i in 0..r {
            for j in i + 1..r {
                if label[e[i]] == label[e[j]] {
                    return Err(Error::InvariantViolation(format!(
                        "vertices {} and {} share a link but lie in a common edge",
                        e[i], e[j]
                    )));
                }
            }
        }
    }
    VertexPartition::new(n, blocks)
}

/// Ψ(H) = Σ |C_i|² over equivalence classes.
pub fn psi(h: &Hypergraph) -> Result<usize> {
    Ok(equivalence_classes(h)?.blocks().iter().map(|b| b.len() * b.len()).sum())
}

/// Vertices with degree at most (3λ − 2√ε)n², decided exactly.
///
/// With R = 3λn² − d the condition is R ≥ 2√ε n², i.e. R ≥ 0 and R² ≥ 4εn⁴.
pub fn z_eps(h: &Hypergraph, lambda: &Rational, eps: &Rational) -> Result<Vec<usize>> {
    if !eps.is_positive() || *eps >= Rational::from_integer(1.into()) {
        return Err(Error::Precondition("eps must lie in (0, 1)".into()));
    }
    let n = Rational::from_integer(BigInt::from(h.vertex_count()));
    let n2 = &n * &n;
    let base = Rational::from_integer(3.into()) * lambda * &n2;
    let rhs = Rational::from_integer(4.into()) * eps * &n2 * &n2;
    let d = h.degrees();
    let mut out = Vec::new();
    for v in 0..h.vertex_count() {
        let r = &base - Rational::from_integer(BigInt::from(d[v]));
        if !r.is_negative() && (r.is_zero() && rhs.is_zero() || &r * &r >= rhs) {
            out.push(v);
        }
    }
    Ok(out)
}

/// All r-subsets of `s` that are edges (the edges of H[S]).
pub fn induced_edge_count(h: &Hypergraph, s: &[usize]) -> usize {
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    let mut count = 0;
    let r = h.uniformity();
    let mut buf = vec![0; r];
    for_each_subset(sorted.len(), r, |idx| {
        for (i, &j) in idx.iter().enumerate() {
            buf[i] = sorted[j];
        }
        if h.contains_sorted(&buf) {
            count += 1;
        }
    });
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    pub(crate) fn fano() -> Hypergraph {
        Hypergraph::new(
            3,
            7,
            [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]],
        )
        .unwrap()
    }

    #[test]
    fn shadow_examples() {
        let k4 = Hypergraph::complete(3, 4);
        assert_eq!(shadow(&k4).unwrap(), Hypergraph::complete(2, 4));
        let e = Hypergraph::new(3, 5, [[0, 1, 2]]).unwrap();
        assert_eq!(shadow(&e).unwrap().edge_vecs(), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(shadow(&Hypergraph::empty(3, 4)).unwrap().is_empty());
        assert!(shadow(&Hypergraph::empty(1, 4)).is_err());
    }

    #[test]
    fn density_examples() {
        let one = rat(1, 1);
        assert_eq!(densities(&Hypergraph::complete(3, 4)).unwrap(), (one.clone(), one.clone()));
        assert_eq!(densities(&Hypergraph::complete(3, 3)).unwrap(), (one.clone(), one.clone()));
        assert_eq!(densities(&fano()).unwrap(), (one, rat(1, 5)));
        assert!(densities(&Hypergraph::empty(3, 2)).is_err());
    }

    #[test]
    fn links_degrees_codegrees() {
        let k4 = Hypergraph::complete(3, 4);
        let l = link(&k4, 0).unwrap();
        assert_eq!(l.edge_vecs(), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(degree(&k4, 0).unwrap(), 3);
        assert!(link(&Hypergraph::empty(3, 3), 1).unwrap().is_empty());
        assert!(degree(&k4, 4).is_err());
        let f = fano();
        for v in 0..7 {
            assert_eq!(degree(&f, v).unwrap(), 3);
        }
        assert_eq!(min_max_codegree(&f), Some((1, 1)));
        assert_eq!(min_max_codegree(&Hypergraph::complete(3, 6)), Some((4, 4)));
        assert!(matches!(codegree(&f, 2, 2), Err(Error::InvalidPair(2, 2))));
    }

    #[test]
    fn blow_up_examples() {
        let e = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(blow_up(&e, &[1, 1, 1], false).unwrap().0, e);
        assert_eq!(blow_up(&e, &[2, 2, 2], false).unwrap().0.len(), 8);
        let k4 = Hypergraph::complete(3, 4);
        let (b, p) = blow_up(&k4, &[2, 2, 2, 2], false).unwrap();
        assert_eq!(b.len(), 32);
        assert_eq!(p.sizes(), vec![2, 2, 2, 2]);
        assert!(blow_up(&k4, &[2, 0, 2, 2], false).is_err());
        let (z, _) = blow_up(&k4, &[2, 0, 2, 2], true).unwrap();
        assert_eq!(z.len(), 8);
    }

    #[test]
    fn two_cover_examples() {
        assert!(is_two_covered(&Hypergraph::complete(3, 4), &[0, 1, 2, 3]));
        assert!(!is_two_covered(&Hypergraph::new(3, 4, [[0, 1, 2]]).unwrap(), &[0, 3]));
        assert!(is_two_covered(&fano(), &[0, 1, 2, 3, 4, 5, 6]));
    }

    #[test]
    fn classes_and_psi() {
        let e = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        let (b, _) = blow_up(&e, &[2, 2, 2], false).unwrap();
        let c = equivalence_classes(&b).unwrap();
        assert_eq!(c.blocks(), &[vec![0, 1], vec![2, 3], vec![4, 5]]);
        assert_eq!(psi(&b).unwrap(), 12);
        assert_eq!(psi(&Hypergraph::complete(3, 4)).unwrap(), 4);
        assert_eq!(equivalence_classes(&Hypergraph::complete(3, 4)).unwrap().len(), 4);
        assert_eq!(psi(&Hypergraph::empty(3, 5)).unwrap(), 25);
    }

    #[test]
    fn z_eps_examples() {
        // One isolated vertex next to K_5^3.
        let h = Hypergraph::complete(3, 5).with_vertex_count(6).unwrap();
        assert!(z_eps(&h, &rat(1, 6), &rat(1, 100)).unwrap().contains(&5));
        // Regular graph with degree above the threshold.
        let k6 = Hypergraph::complete(3, 6);
        assert!(z_eps(&k6, &rat(1, 30), &rat(1, 100)).unwrap().is_empty());
        assert!(z_eps(&k6, &rat(1, 6), &rat(0, 1)).is_err());
    }

    #[test]
    fn z_eps_halved_block() {
        // K_4^3 blown up with blocks (4,4,4,2): vertices of the small block have degree 48,
        // the others 40; threshold at λ = 1/16, ε = 1/10000 sits between them.
        let k4 = Hypergraph::complete(3, 4);
        let (h, p) = blow_up(&k4, &[4, 4, 4, 2], false).unwrap();
        let d = h.degrees();
        assert_eq!(d[0], 4 * 4 + 4 * 2 + 4 * 2);
        assert_eq!(d[13], 48);
        let z = z_eps(&h, &rat(1, 16), &rat(1, 10000)).unwrap();
        let expected: Vec<usize> = (0..12).collect();
        assert_eq!(z, expected);
        assert_eq!(p.block(3), &[12, 13]);
    }
}
