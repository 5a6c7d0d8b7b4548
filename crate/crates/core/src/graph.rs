//! Small bitset graphs: adjacency rows as `u64` words, used for shadows, link graphs and
//! clique searches.

use crate::error::{Budget, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet { words: vec![0; n.div_ceil(64)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = BitSet::new(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, row: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(row) {
            *a &= *b;
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn as_words(&self) -> &[u64] {
        &self.words
    }
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitGraph { n, words, rows: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = BitGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    pub fn is_clique(&self, s: &[usize]) -> bool {
        s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Exact maximum clique (branch and bound with a greedy-colouring bound).
    pub fn max_clique(&self, budget: &mut Budget) -> Result<Vec<usize>> {
        let mut best = Vec::new();
        let mut current = Vec::new();
        let cand: Vec<usize> = (0..self.n).collect();
        self.expand(&mut current, cand, &mut best, budget)?;
        best.sort_unstable();
        Ok(best)
    }

    pub fn clique_number(&self, budget: &mut Budget) -> Result<usize> {
        Ok(self.max_clique(budget)?.len())
    }

    fn expand(
        &self,
        current: &mut Vec<usize>,
        cand: Vec<usize>,
        best: &mut Vec<usize>,
        budget: &mut Budget,
    ) -> Result<()> {
        budget.tick()?;
        let (order, colours) = self.colour_sort(&cand);
        for idx in (0..order.len()).rev() {
            if current.len() + colours[idx] <= best.len() {
                return Ok(());
            }
            let v = order[idx];
            current.push(v);
            let next: Vec<usize> = order[..idx].iter().copied().filter(|&u| self.has_edge(u, v)).collect();
            if next.is_empty() {
                if current.len() > best.len() {
                    *best = current.clone();
                }
            } else {
                self.expand(current, next, best, budget)?;
            }
            current.pop();
        }
        Ok(())
    }

    /// Greedy sequential colouring; returns vertices ordered by colour and the running colour count.
    fn colour_sort(&self, cand: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cand {
            match classes.iter_mut().find(|c| c.iter().all(|&u| !self.has_edge(u, v))) {
                Some(c) => c.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::with_capacity(cand.len());
        let mut colours = Vec::with_capacity(cand.len());
        for (k, c) in classes.iter().enumerate() {
            for &v in c {
                order.push(v);
                colours.push(k + 1);
            }
        }
        (order, colours)
    }

    /// Visits every clique with `min <= size <= max` exactly once (as a sorted vertex list).
    /// The visitor returns `false` to stop early; the function then returns `Ok(false)`.
    pub fn for_each_clique(
        &self,
        min: usize,
        max: usize,
        budget: &mut Budget,
        f: &mut dyn FnMut(&[usize]) -> Result<bool>,
    ) -> Result<bool> {
        let mut current = Vec::new();
        let all = BitSet::full(self.n);
        self.clique_rec(&mut current, &all, 0, min, max, budget, f)
    }

    #[allow(clippy::too_many_arguments)]
    fn clique_rec(
        &self,
        current: &mut Vec<usize>,
        cand: &BitSet,
        from: usize,
        min: usize,
        max: usize,
        budget: &mut Budget,
        f: &mut dyn FnMut(&[usize]) -> Result<bool>,
    ) -> Result<bool> {
        budget.tick()?;
        if current.len() >= min && !f(current)? {
            return Ok(false);
        }
        if current.len() == max {
            return Ok(true);
        }
        if current.len() + cand.iter().filter(|&v| v >= from).count() < min {
            return Ok(true);
        }
        let verts: Vec<usize> = cand.iter().filter(|&v| v >= from).collect();
        for v in verts {
            let mut next = cand.clone();
            next.intersect_with(self.row(v));
            current.push(v);
            let go_on = self.clique_rec(current, &next, v + 1, min, max, budget, f)?;
            current.pop();
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn turan(parts: usize, size: usize) -> BitGraph {
        let n = parts * size;
        let mut g = BitGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if u % parts != v % parts {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    #[test]
    fn clique_number_of_turan_graphs() {
        let mut b = Budget::new("clique", 1_000_000);
        assert_eq!(turan(28, 2).clique_number(&mut b).unwrap(), 28);
        assert_eq!(turan(5, 3).clique_number(&mut b).unwrap(), 5);
        assert_eq!(BitGraph::new(4).clique_number(&mut b).unwrap(), 1);
        assert_eq!(BitGraph::new(0).clique_number(&mut b).unwrap(), 0);
    }

    #[test]
    fn clique_enumeration_counts() {
        let g = BitGraph::complete(6);
        let mut b = Budget::unlimited("cliques");
        let mut by_size = [0usize; 7];
        g.for_each_clique(0, 6, &mut b, &mut |c| {
            by_size[c.len()] += 1;
            Ok(true)
        })
        .unwrap();
        assert_eq!(by_size, [1, 6, 15, 20, 15, 6, 1]);
    }

    #[test]
    fn clique_number_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(1..12);
            let mut g = BitGraph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v);
                    }
                }
            }
            let mut brute = 0;
            for mask in 0u32..(1 << n) {
                let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                if g.is_clique(&s) {
                    brute = brute.max(s.len());
                }
            }
            let mut b = Budget::unlimited("clique");
            assert_eq!(g.clique_number(&mut b).unwrap(), brute);
        }
    }
}
