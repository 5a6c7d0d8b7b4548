use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// An r-uniform hypergraph on the vertex set `0..n`.
///
/// Edges are stored flat (`r` entries per edge), each edge strictly increasing and the
/// edge list in lexicographic order, so iteration order is canonical and membership is a
/// binary search. Degree and pair-codegree tables are built on first use.
#[derive(Clone)]
pub struct Hypergraph {
    r: usize,
    n: usize,
    flat: Vec<usize>,
    degrees: OnceLock<Vec<usize>>,
    codegrees: OnceLock<Vec<u32>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.n == other.n && self.flat == other.flat
    }
}

impl Eq for Hypergraph {}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(r={}, n={}, edges=[", self.r, self.n)?;
        for (i, e) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if i == 16 {
                write!(f, "... {} more", self.len() - 16)?;
                break;
            }
            write!(f, "{e:?}")?;
        }
        write!(f, "])")
    }
}

/// Index of the unordered pair {u, v} (u != v) in a triangular table over n vertices.
#[inline]
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

impl Hypergraph {
    /// Strict constructor: every edge must have `r` distinct in-range vertices and no edge
    /// may repeat. Vertex order inside an edge is irrelevant.
    pub fn new<E: AsRef<[usize]>>(r: usize, n: usize, edges: impl IntoIterator<Item = E>) -> Result<Self> {
        Self::build(r, n, edges, true)
    }

    /// Like [`Hypergraph::new`] but repeated edges are merged.
    pub fn from_edges_dedup<E: AsRef<[usize]>>(
        r: usize,
        n: usize,
        edges: impl IntoIterator<Item = E>,
    ) -> Result<Self> {
        Self::build(r, n, edges, false)
    }

    fn build<E: AsRef<[usize]>>(
        r: usize,
        n: usize,
        edges: impl IntoIterator<Item = E>,
        strict: bool,
    ) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidUniformity("uniformity must be positive".into()));
        }
        let mut rows: Vec<Vec<usize>> = Vec::new();
        for e in edges {
            let e = e.as_ref();
            if e.len() != r {
                return Err(Error::InvalidUniformity(format!(
                    "edge {e:?} has {} vertices, expected {r}",
                    e.len()
                )));
            }
            let mut row = e.to_vec();
            row.sort_unstable();
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::Precondition(format!("edge {e:?} repeats vertex {}", w[0])));
                }
            }
            if let Some(&v) = row.last() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            rows.push(row);
        }
        rows.sort_unstable();
        let before = rows.len();
        rows.dedup();
        if strict && rows.len() != before {
            return Err(Error::Precondition("duplicate edge".into()));
        }
        Ok(Self::from_sorted_rows(r, n, rows))
    }

    pub(crate) fn from_sorted_rows(r: usize, n: usize, rows: Vec<Vec<usize>>) -> Self {
        let mut flat = Vec::with_capacity(rows.len() * r);
        for row in rows {
            flat.extend_from_slice(&row);
        }
        Hypergraph::from_flat_unchecked(r, n, flat)
    }

    /// `flat` must already be canonical (sorted rows, sorted edges, no duplicates).
    pub(crate) fn from_flat_unchecked(r: usize, n: usize, flat: Vec<usize>) -> Self {
        debug_assert!(flat.len() % r == 0);
        Hypergraph { r, n, flat, degrees: OnceLock::new(), codegrees: OnceLock::new() }
    }

    /// Sorts and deduplicates a flat buffer of already-increasing rows.
    pub(crate) fn from_flat_rows(r: usize, n: usize, flat: Vec<usize>) -> Self {
        let mut rows: Vec<&[usize]> = flat.chunks_exact(r).collect();
        rows.sort_unstable();
        rows.dedup();
        let mut out = Vec::with_capacity(rows.len() * r);
        for row in rows {
            out.extend_from_slice(row);
        }
        Hypergraph::from_flat_unchecked(r, n, out)
    }

    pub fn empty(r: usize, n: usize) -> Self {
        assert!(r > 0, "uniformity must be positive");
        Hypergraph::from_flat_unchecked(r, n, Vec::new())
    }

    /// K^r_n: every r-subset of `0..n`.
    pub fn complete(r: usize, n: usize) -> Self {
        assert!(r > 0, "uniformity must be positive");
        let mut flat = Vec::new();
        for_each_subset(n, r, |s| flat.extend_from_slice(s));
        Hypergraph::from_flat_unchecked(r, n, flat)
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.r
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn edge(&self, i: usize) -> &[usize] {
        &self.flat[i * self.r..(i + 1) * self.r]
    }

    pub fn edges(&self) -> std::slice::ChunksExact<'_, usize> {
        self.flat.chunks_exact(self.r)
    }

    pub fn edge_vecs(&self) -> Vec<Vec<usize>> {
        self.edges().map(|e| e.to_vec()).collect()
    }

    /// Membership test; `e` must be sorted.
    pub fn contains_sorted(&self, e: &[usize]) -> bool {
        if e.len() != self.r {
            return false;
        }
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.edge(mid).cmp(e) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn contains(&self, e: &[usize]) -> bool {
        let mut s = e.to_vec();
        s.sort_unstable();
        self.contains_sorted(&s)
    }

    pub fn contains3(&self, a: usize, b: usize, c: usize) -> bool {
        let mut s = [a, b, c];
        s.sort_unstable();
        self.r == 3 && self.contains_sorted(&s)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn degrees(&self) -> &[usize] {
        self.degrees.get_or_init(|| {
            let mut d = vec![0usize; self.n];
            for &v in &self.flat {
                d[v] += 1;
            }
            d
        })
    }

    /// Pair-codegree table indexed by [`pair_index`]; empty when n < 2.
    pub(crate) fn codegree_table(&self) -> &[u32] {
        self.codegrees.get_or_init(|| {
            let n = self.n;
            let mut t = vec![0u32; n * n.saturating_sub(1) / 2];
            for e in self.edges() {
                for i in 0..e.len() {
                    for j in i + 1..e.len() {
                        t[pair_index(n, e[i], e[j])] += 1;
                    }
                }
            }
            t
        })
    }

    /// Subgraph on the same vertex set keeping only edges inside `keep`.
    pub fn induced(&self, keep: &[usize]) -> Hypergraph {
        let mut mask = vec![false; self.n];
        for &v in keep {
            if v < self.n {
                mask[v] = true;
            }
        }
        let flat: Vec<usize> = self
            .edges()
            .filter(|e| e.iter().all(|&v| mask[v]))
            .flatten()
            .copied()
            .collect();
        Hypergraph::from_flat_unchecked(self.r, self.n, flat)
    }

    /// Induced subgraph relabelled onto `0..keep.len()` in the order given.
    pub fn compact_induced(&self, keep: &[usize]) -> Hypergraph {
        let mut label = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            label[v] = i;
        }
        let mut flat = Vec::new();
        for e in self.edges() {
            if e.iter().all(|&v| label[v] != usize::MAX) {
                let mut row: Vec<usize> = e.iter().map(|&v| label[v]).collect();
                row.sort_unstable();
                flat.extend_from_slice(&row);
            }
        }
        Hypergraph::from_flat_rows(self.r, keep.len(), flat)
    }

    /// Image under the vertex map `perm` (must be injective into `0..n_new`).
    pub fn relabel(&self, perm: &[usize], n_new: usize) -> Result<Hypergraph> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: perm.len() });
        }
        let mut flat = Vec::with_capacity(self.flat.len());
        for e in self.edges() {
            let mut row: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Precondition("relabelling collapses an edge".into()));
            }
            if row[self.r - 1] >= n_new {
                return Err(Error::VertexOutOfRange { vertex: row[self.r - 1], n: n_new });
            }
            flat.extend_from_slice(&row);
        }
        let out = Hypergraph::from_flat_rows(self.r, n_new, flat);
        if out.len() != self.len() {
            return Err(Error::Precondition("relabelling is not injective on edges".into()));
        }
        Ok(out)
    }

    pub fn union(&self, other: &Hypergraph) -> Result<Hypergraph> {
        self.same_shape(other)?;
        let mut flat = self.flat.clone();
        flat.extend_from_slice(&other.flat);
        Ok(Hypergraph::from_flat_rows(self.r, self.n, flat))
    }

    pub fn difference(&self, other: &Hypergraph) -> Result<Hypergraph> {
        self.same_shape(other)?;
        let flat: Vec<usize> = self
            .edges()
            .filter(|e| !other.contains_sorted(e))
            .flatten()
            .copied()
            .collect();
        Ok(Hypergraph::from_flat_unchecked(self.r, self.n, flat))
    }

    pub fn intersection_size(&self, other: &Hypergraph) -> usize {
        self.edges().filter(|e| other.contains_sorted(e)).count()
    }

    pub fn is_subgraph_of(&self, other: &Hypergraph) -> bool {
        self.r == other.r && self.edges().all(|e| other.contains_sorted(e))
    }

    /// Same graph with extra isolated vertices appended (or an error when shrinking would drop edges).
    pub fn with_vertex_count(&self, n: usize) -> Result<Hypergraph> {
        if let Some(&max) = self.flat.iter().max() {
            if max >= n {
                return Err(Error::VertexOutOfRange { vertex: max, n });
            }
        }
        Ok(Hypergraph::from_flat_unchecked(self.r, n, self.flat.clone()))
    }

    pub fn with_edges_added<E: AsRef<[usize]>>(&self, extra: impl IntoIterator<Item = E>) -> Result<Hypergraph> {
        let add = Hypergraph::from_edges_dedup(self.r, self.n, extra)?;
        self.union(&add)
    }

    pub(crate) fn same_shape(&self, other: &Hypergraph) -> Result<()> {
        if self.r != other.r {
            return Err(Error::InvalidUniformity(format!("{} vs {}", self.r, other.r)));
        }
        if self.n != other.n {
            return Err(Error::LengthMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }

    pub fn non_isolated(&self) -> Vec<usize> {
        let d = self.degrees();
        (0..self.n).filter(|&v| d[v] > 0).collect()
    }
}

/// Calls `f` on every k-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerated_in_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut count = 0;
        for_each_subset(5, 0, |_| count += 1);
        assert_eq!(count, 1);
        for_each_subset(2, 3, |_| panic!("no 3-subsets of a 2-set"));
        let mut c = 0;
        for_each_subset(7, 7, |_| c += 1);
        assert_eq!(c, 1);
    }

    #[test]
    fn strict_constructor_rejects_bad_input() {
        assert!(Hypergraph::new(3, 4, [[0, 1, 2], [2, 1, 0]]).is_err());
        assert!(Hypergraph::new(3, 4, [[0, 1, 4]]).is_err());
        assert!(Hypergraph::new(3, 4, [[0, 1, 1]]).is_err());
        assert!(Hypergraph::new(3, 4, [vec![0, 1]]).is_err());
        let h = Hypergraph::from_edges_dedup(3, 4, [[0, 1, 2], [2, 1, 0]]).unwrap();
        assert_eq!(h.len(), 1);
    }

    #[test]
    fn edges_are_canonical() {
        let h = Hypergraph::new(3, 5, [[4, 3, 2], [0, 2, 1], [1, 0, 3]]).unwrap();
        assert_eq!(h.edge_vecs(), vec![vec![0, 1, 2], vec![0, 1, 3], vec![2, 3, 4]]);
        assert!(h.contains(&[3, 0, 1]));
        assert!(!h.contains(&[0, 1, 4]));
    }

    #[test]
    fn pair_index_is_a_bijection() {
        let n = 9;
        let mut seen = vec![false; n * (n - 1) / 2];
        for u in 0..n {
            for v in u + 1..n {
                let i = pair_index(n, u, v);
                assert!(!seen[i]);
                seen[i] = true;
                assert_eq!(i, pair_index(n, v, u));
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn compact_and_relabel() {
        let k4 = Hypergraph::complete(3, 4);
        let sub = k4.compact_induced(&[3, 1, 2]);
        assert_eq!(sub.vertex_count(), 3);
        assert_eq!(sub.len(), 1);
        let rl = k4.relabel(&[3, 2, 1, 0], 4).unwrap();
        assert_eq!(rl, k4);
        assert!(k4.relabel(&[0, 0, 1, 2], 4).is_err());
    }
}
