use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcore::Hypergraph;
use crate::num::binom;

/// 𝔐(n) over a list of templates: the largest n-vertex blow-up of one of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MfrakValue {
    pub value: u128,
    /// Index of the template attaining the value.
    pub index: usize,
    pub sizes: Vec<usize>,
    /// False when some template was too large to enumerate and a hill-climb was used.
    pub exact: bool,
}

/// Σ over edges of the product of part sizes.
pub fn blowup_edge_count(g: &Hypergraph, sizes: &[usize]) -> u128 {
    g.edges().map(|e| e.iter().map(|&v| sizes[v] as u128).product::<u128>()).sum()
}

fn compositions(n: usize, m: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(left: usize, i: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if i + 1 == cur.len() {
            cur[i] = left;
            f(cur);
            return;
        }
        for x in 0..=left {
            cur[i] = x;
            rec(left - x, i + 1, cur, f);
        }
    }
    if m == 0 {
        if n == 0 {
            f(&[]);
        }
        return;
    }
    rec(n, 0, &mut vec![0; m], f);
}

fn best_by_enumeration(g: &Hypergraph, n: usize) -> (u128, Vec<usize>) {
    let mut best = (0u128, Vec::new());
    compositions(n, g.vertex_count(), &mut |s| {
        let v = blowup_edge_count(g, s);
        if best.1.is_empty() || v > best.0 {
            best = (v, s.to_vec());
        }
    });
    best
}

/// Steepest ascent over single-unit transfers, from the balanced composition.
fn best_by_hill_climb(g: &Hypergraph, n: usize) -> (u128, Vec<usize>) {
    let m = g.vertex_count();
    let mut sizes: Vec<usize> = (0..m).map(|i| n / m + usize::from(i < n % m)).collect();
    let mut value = blowup_edge_count(g, &sizes);
    loop {
        let mut step = None;
        for i in 0..m {
            if sizes[i] == 0 {
                continue;
            }
            for j in 0..m {
                if i == j {
                    continue;
                }
                sizes[i] -= 1;
                sizes[j] += 1;
                let v = blowup_edge_count(g, &sizes);
                if v > step.map_or(value, |(bv, _, _)| bv) {
                    step = Some((v, i, j));
                }
                sizes[i] += 1;
                sizes[j] -= 1;
            }
        }
        let Some((v, i, j)) = step else {
            return (value, sizes);
        };
        sizes[i] -= 1;
        sizes[j] += 1;
        value = v;
    }
}

/// 𝔐(n): exhaustive over compositions when there are at most `enumeration_limit` of them.
pub fn max_colorable_edges(graphs: &[Hypergraph], n: usize, enumeration_limit: u128) -> Result<MfrakValue> {
    if graphs.is_empty() {
        return Err(Error::InvalidArgument("need at least one template".into()));
    }
    let mut best: Option<MfrakValue> = None;
    let mut exact = true;
    for (index, g) in graphs.iter().enumerate() {
        if g.uniformity() != 3 || g.vertex_count() == 0 {
            return Err(Error::InvalidArgument(format!("template {index} is not a non-empty 3-graph")));
        }
        let m = g.vertex_count();
        let count = binom((n + m - 1) as u64, (m - 1) as u64);
        let (value, sizes) = if count <= enumeration_limit {
            best_by_enumeration(g, n)
        } else {
            exact = false;
            best_by_hill_climb(g, n)
        };
        if best.as_ref().map_or(true, |b| value > b.value) {
            best = Some(MfrakValue { value, index, sizes, exact: true });
        }
    }
    let mut best = best.expect("non-empty");
    best.exact = exact;
    Ok(best)
}

/// max over a of a·C(n−a, 2), with the maximizing a. Never exceeds 2n³/27.
pub fn semibipartite_max(n: usize) -> (u128, usize) {
    let mut best = (0u128, 0usize);
    for a in 0..=n {
        let v = a as u128 * binom((n - a) as u64, 2);
        if v > best.0 {
            best = (v, a);
        }
    }
    assert!(27 * best.0 <= 2 * (n as u128).pow(3), "semibipartite bound exceeded at n = {n}");
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_values() {
        let k4 = Hypergraph::complete(3, 4);
        let r = max_colorable_edges(&[k4.clone()], 8, u128::MAX).unwrap();
        assert_eq!((r.value, r.sizes.clone(), r.exact), (32, vec![2, 2, 2, 2], true));
        for n in [4usize, 12, 20] {
            assert_eq!(max_colorable_edges(&[k4.clone()], n, u128::MAX).unwrap().value, (n as u128).pow(3) / 16);
        }
        let hc = max_colorable_edges(&[k4], 21, 0).unwrap();
        assert!(!hc.exact);
        // Sizes (6,5,5,5): 5³ + 3·6·5².
        assert_eq!(hc.value, 575);
    }

    #[test]
    fn single_edge_matches_am_gm() {
        let e = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        for n in 3..30usize {
            let (q, r) = (n / 3, n % 3);
            let mut parts = [q; 3];
            for p in parts.iter_mut().take(r) {
                *p += 1;
            }
            let want: u128 = parts.iter().map(|&x| x as u128).product();
            let got = max_colorable_edges(&[e.clone()], n, u128::MAX).unwrap();
            assert_eq!(got.value, want);
            assert_eq!(max_colorable_edges(&[e.clone()], n, 0).unwrap().value, want);
        }
    }

    #[test]
    fn semibipartite_values() {
        assert_eq!(semibipartite_max(6), (12, 2));
        assert_eq!(semibipartite_max(3).0, 1);
        for n in 1..=200 {
            semibipartite_max(n);
        }
    }
}
