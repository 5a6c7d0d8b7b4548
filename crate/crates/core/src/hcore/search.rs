//! Exhaustive searches with explicit node budgets.

use super::hypergraph::Hypergraph;
use super::partition::VertexPartition;
use crate::error::{Budget, Error, Result};

/// τ(H): size of a smallest vertex set meeting every edge.
pub fn transversal_number(h: &Hypergraph, budget: &mut Budget) -> Result<usize> {
    Ok(min_transversal(h, budget)?.len())
}

/// A minimum transversal, found by iterative deepening on its size.
pub fn min_transversal(h: &Hypergraph, budget: &mut Budget) -> Result<Vec<usize>> {
    let edges: Vec<&[usize]> = h.edges().collect();
    let mut chosen = vec![false; h.vertex_count()];
    let mut picked = Vec::new();
    for k in 0..=h.vertex_count() {
        if hit_rec(&edges, &mut chosen, &mut picked, k, budget)? {
            picked.sort_unstable();
            return Ok(picked);
        }
    }
    unreachable!("the full vertex set is a transversal")
}

fn hit_rec(
    edges: &[&[usize]],
    chosen: &mut [bool],
    picked: &mut Vec<usize>,
    left: usize,
    budget: &mut Budget,
) -> Result<bool> {
    budget.tick()?;
    let Some(e) = edges.iter().find(|e| e.iter().all(|&v| !chosen[v])) else {
        return Ok(true);
    };
    if left == 0 {
        return Ok(false);
    }
    for &v in e.iter() {
        chosen[v] = true;
        picked.push(v);
        if hit_rec(edges, chosen, picked, left - 1, budget)? {
            return Ok(true);
        }
        picked.pop();
        chosen[v] = false;
    }
    Ok(false)
}

/// Checks that every edge meets `a` in exactly one vertex. Runs in O(|H|).
pub fn check_semibipartition(h: &Hypergraph, a: &[usize]) -> bool {
    let mut in_a = vec![false; h.vertex_count()];
    for &v in a {
        if v >= h.vertex_count() {
            return false;
        }
        in_a[v] = true;
    }
    h.edges().all(|e| e.iter().filter(|&&v| in_a[v]).count() == 1)
}

/// Finds A with every edge meeting A in exactly one vertex; the partition is (A, B).
/// Isolated vertices go to B, so the empty graph yields A = ∅.
pub fn is_semibipartite(h: &Hypergraph, budget: &mut Budget) -> Result<Option<VertexPartition>> {
    if h.uniformity() != 3 {
        return Err(Error::InvalidUniformity("semibipartite search expects r = 3".into()));
    }
    let n = h.vertex_count();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in h.edges().enumerate() {
        for &v in e {
            incident[v].push(i);
        }
    }
    let order: Vec<usize> = h.non_isolated();
    let mut side: Vec<Option<bool>> = vec![None; n];
    if !semi_rec(h, &incident, &order, 0, &mut side, budget)? {
        return Ok(None);
    }
    let a: Vec<usize> = (0..n).filter(|&v| side[v] == Some(true)).collect();
    let b: Vec<usize> = (0..n).filter(|&v| side[v] != Some(true)).collect();
    debug_assert!(check_semibipartition(h, &a));
    Ok(Some(VertexPartition::new(n, vec![a, b])?))
}

fn semi_rec(
    h: &Hypergraph,
    incident: &[Vec<usize>],
    order: &[usize],
    pos: usize,
    side: &mut Vec<Option<bool>>,
    budget: &mut Budget,
) -> Result<bool> {
    budget.tick()?;
    if pos == order.len() {
        return Ok(true);
    }
    let v = order[pos];
    for choice in [true, false] {
        side[v] = Some(choice);
        let ok = incident[v].iter().all(|&i| {
            let e = h.edge(i);
            let in_a = e.iter().filter(|&&u| side[u] == Some(true)).count();
            let open = e.iter().filter(|&&u| side[u].is_none()).count();
            in_a <= 1 && (in_a == 1 || open > 0)
        });
        if ok && semi_rec(h, incident, order, pos + 1, side, budget)? {
            return Ok(true);
        }
    }
    side[v] = None;
    Ok(false)
}

/// d₁(H, H′) = min over relabellings π of |H △ π(H′)|, by branch and bound over π.
pub fn edit_distance_d1(h: &Hypergraph, h2: &Hypergraph, budget: &mut Budget) -> Result<usize> {
    h.same_shape(h2)?;
    let n = h.vertex_count();
    if n > 10 {
        return Err(Error::InvalidSize(format!("edit distance is exhaustive; n = {n} exceeds 10")));
    }
    // Assign the vertices of H′ in decreasing-degree order so edges close early.
    let d = h2.degrees();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(d[v]), v));
    let mut pos_of = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos_of[v] = i;
    }
    // Edges of H′ grouped by the step at which they become fully assigned.
    let mut closes_at: Vec<Vec<&[usize]>> = vec![Vec::new(); n];
    for e in h2.edges() {
        let last = e.iter().map(|&v| pos_of[v]).max().unwrap_or(0);
        closes_at[last].push(e);
    }
    let mut remaining_after = vec![0usize; n + 1];
    for i in (0..n).rev() {
        remaining_after[i] = remaining_after[i + 1] + closes_at[i].len();
    }
    let mut st = D1State {
        h,
        order,
        closes_at,
        remaining_after,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        best: 0,
        cap: h.len().min(h2.len()),
    };
    st.rec(0, 0, budget)?;
    Ok(h.len() + h2.len() - 2 * st.best)
}

struct D1State<'a> {
    h: &'a Hypergraph,
    order: Vec<usize>,
    closes_at: Vec<Vec<&'a [usize]>>,
    remaining_after: Vec<usize>,
    image: Vec<usize>,
    used: Vec<bool>,
    best: usize,
    cap: usize,
}

impl D1State<'_> {
    fn rec(&mut self, depth: usize, overlap: usize, budget: &mut Budget) -> Result<()> {
        budget.tick()?;
        if overlap > self.best {
            self.best = overlap;
        }
        if depth == self.order.len() || self.best == self.cap {
            return Ok(());
        }
        if overlap + self.remaining_after[depth] <= self.best {
            return Ok(());
        }
        let v = self.order[depth];
        let n = self.order.len();
        let mut buf = vec![0usize; self.h.uniformity()];
        for target in 0..n {
            if self.used[target] {
                continue;
            }
            self.used[target] = true;
            self.image[v] = target;
            let mut gained = 0;
            for e in &self.closes_at[depth] {
                for (i, &u) in e.iter().enumerate() {
                    buf[i] = self.image[u];
                }
                buf.sort_unstable();
                if self.h.contains_sorted(&buf) {
                    gained += 1;
                }
            }
            self.rec(depth + 1, overlap + gained, budget)?;
            self.used[target] = false;
            self.image[v] = usize::MAX;
            if self.best == self.cap {
                break;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hcore::hypergraph::for_each_subset;

    fn star(n: usize) -> Hypergraph {
        let mut edges = Vec::new();
        for a in 1..n {
            for b in a + 1..n {
                edges.push([0, a, b]);
            }
        }
        Hypergraph::new(3, n, edges).unwrap()
    }

    #[test]
    fn transversal_examples() {
        let mut b = Budget::new("tau", 100_000);
        assert_eq!(transversal_number(&Hypergraph::empty(3, 4), &mut b).unwrap(), 0);
        assert_eq!(transversal_number(&star(6), &mut b).unwrap(), 1);
        assert_eq!(transversal_number(&Hypergraph::complete(3, 4), &mut b).unwrap(), 2);
        let mut tiny = Budget::new("tau", 2);
        assert!(transversal_number(&Hypergraph::complete(3, 9), &mut tiny).unwrap_err().is_budget());
    }

    #[test]
    fn semibipartite_examples() {
        let mut b = Budget::new("semi", 100_000);
        let p = is_semibipartite(&star(6), &mut b).unwrap().unwrap();
        assert_eq!(p.block(0), &[0]);
        assert!(is_semibipartite(&Hypergraph::complete(3, 4), &mut b).unwrap().is_none());
        let e = is_semibipartite(&Hypergraph::empty(3, 4), &mut b).unwrap().unwrap();
        assert!(e.block(0).is_empty());
        assert_eq!(e.block(1), &[0, 1, 2, 3]);
        // Brute force over all 2^4 splits of K_4^3 agrees.
        let k4 = Hypergraph::complete(3, 4);
        for mask in 0u32..16 {
            let a: Vec<usize> = (0..4).filter(|&i| mask >> i & 1 == 1).collect();
            assert!(!check_semibipartition(&k4, &a));
        }
    }

    #[test]
    fn d1_examples() {
        let mut b = Budget::new("d1", 1_000_000);
        let k4 = Hypergraph::complete(3, 4);
        assert_eq!(edit_distance_d1(&k4, &k4, &mut b).unwrap(), 0);
        let a = Hypergraph::new(3, 4, [[0, 1, 2]]).unwrap();
        let c = Hypergraph::new(3, 4, [[1, 2, 3]]).unwrap();
        assert_eq!(edit_distance_d1(&a, &c, &mut b).unwrap(), 0);
        let one = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(edit_distance_d1(&one, &Hypergraph::empty(3, 3), &mut b).unwrap(), 1);
        assert!(edit_distance_d1(&one, &Hypergraph::empty(3, 4), &mut b).is_err());
    }

    #[test]
    fn transversal_matches_subset_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(3..=8);
            let mut edges = Vec::new();
            for_each_subset(n, 3, |s| {
                if rng.gen_bool(0.3) {
                    edges.push(s.to_vec());
                }
            });
            let h = Hypergraph::new(3, n, &edges).unwrap();
            let mut brute = n;
            for mask in 0u32..(1 << n) {
                if edges.iter().all(|e| e.iter().any(|&v| mask >> v & 1 == 1)) {
                    brute = brute.min(mask.count_ones() as usize);
                }
            }
            let mut b = Budget::unlimited("tau");
            assert_eq!(transversal_number(&h, &mut b).unwrap(), brute);
        }
    }
}
