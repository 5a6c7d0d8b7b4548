use super::{divisibility_holds, verify_design, Design};
use crate::error::{Budget, Error, Result};
use crate::graph::BitGraph;
use crate::hcore::{for_each_subset, Hypergraph};

/// The projective plane of order 3: 13 points, lines of size 4 (translates of {0,1,3,9} mod 13).
pub const PG_2_3: [[usize; 4]; 13] = [
    [0, 1, 3, 9],
    [0, 2, 8, 12],
    [0, 4, 5, 7],
    [0, 6, 10, 11],
    [1, 2, 4, 10],
    [1, 5, 6, 8],
    [1, 7, 11, 12],
    [2, 3, 5, 11],
    [2, 6, 7, 9],
    [3, 4, 6, 12],
    [3, 7, 8, 10],
    [4, 8, 9, 11],
    [5, 9, 10, 12],
];

/// The affine plane of order 4: 16 points, 20 lines of size 4.
pub const AG_2_4: [[usize; 4]; 20] = [
    [0, 1, 2, 3],
    [0, 4, 8, 12],
    [0, 5, 10, 15],
    [0, 6, 11, 13],
    [0, 7, 9, 14],
    [1, 4, 11, 14],
    [1, 5, 9, 13],
    [1, 6, 8, 15],
    [1, 7, 10, 12],
    [2, 4, 9, 15],
    [2, 5, 11, 12],
    [2, 6, 10, 14],
    [2, 7, 8, 13],
    [3, 4, 10, 13],
    [3, 5, 8, 14],
    [3, 6, 9, 12],
    [3, 7, 11, 15],
    [4, 5, 6, 7],
    [8, 9, 10, 11],
    [12, 13, 14, 15],
];

/// Builds and verifies an (n,k)-design.
///
/// Direct constructions: k = 2 (all pairs), k = n (one block), Steiner triple systems via
/// Bose (n ≡ 3 mod 6) and Skolem (n ≡ 1 mod 6), and the stored planes for (13,4) and
/// (16,4). When k(k−1) | n−1 a cyclic difference family on Z_n is searched first;
/// everything else goes through a budgeted exact-cover search.
pub fn build_design(n: usize, k: usize, budget: &mut Budget) -> Result<Design> {
    if k < 2 || k > n {
        return Err(Error::InvalidSize(format!("need 2 <= k <= n, got (n, k) = ({n}, {k})")));
    }
    if !divisibility_holds(n, k) {
        return Err(Error::Divisibility { n, k });
    }
    let blocks = if k == 2 {
        Hypergraph::complete(2, n)
    } else if k == n {
        Hypergraph::complete(n, n)
    } else if k == 3 && n % 6 == 3 {
        bose_sts(n)?
    } else if k == 3 && n % 6 == 1 {
        skolem_sts(n)?
    } else if k == 4 && n == 13 {
        Hypergraph::new(4, 13, PG_2_3)?
    } else if k == 4 && n == 16 {
        Hypergraph::new(4, 16, AG_2_4)?
    } else if (n - 1) % (k * (k - 1)) == 0 {
        match cyclic_design(n, k, budget)? {
            Some(h) => h,
            None => exact_cover(n, k, budget)?,
        }
    } else {
        exact_cover(n, k, budget)?
    };
    let d = Design { n, k, blocks };
    verify_design(&d)?;
    Ok(d)
}

/// Bose construction on Z_m × Z_3 (n = 3m, m odd) with the idempotent commutative
/// quasigroup x∘y = (x+y)(m+1)/2 mod m. Point (x, i) has id i·m + x.
pub fn bose_sts(n: usize) -> Result<Hypergraph> {
    if n % 6 != 3 {
        return Err(Error::DesignUnavailable { n, k: 3, reason: "Bose needs n ≡ 3 (mod 6)".into() });
    }
    let m = n / 3;
    let half = (m + 1) / 2;
    let op = |x: usize, y: usize| (x + y) * half % m;
    let id = |x: usize, i: usize| (i % 3) * m + x;
    let mut blocks = Vec::with_capacity(n * (n - 1) / 6);
    for x in 0..m {
        blocks.push([id(x, 0), id(x, 1), id(x, 2)]);
    }
    for x in 0..m {
        for y in x + 1..m {
            for i in 0..3 {
                blocks.push([id(x, i), id(y, i), id(op(x, y), i + 1)]);
            }
        }
    }
    Hypergraph::new(3, n, blocks)
}

/// Skolem construction on (Z_2m × Z_3) ∪ {∞} (n = 6m+1) with the half-idempotent
/// commutative quasigroup x∘y = f((x+y) mod 2m), f(2i) = i, f(2i+1) = m+i.
/// Point (x, i) has id i·2m + x and ∞ is 6m.
pub fn skolem_sts(n: usize) -> Result<Hypergraph> {
    if n % 6 != 1 || n < 7 {
        return Err(Error::DesignUnavailable { n, k: 3, reason: "Skolem needs n ≡ 1 (mod 6), n ≥ 7".into() });
    }
    let m = (n - 1) / 6;
    let q = 2 * m;
    let f = |z: usize| if z % 2 == 0 { z / 2 } else { m + z / 2 };
    let op = |x: usize, y: usize| f((x + y) % q);
    let id = |x: usize, i: usize| (i % 3) * q + x;
    let inf = 6 * m;
    let mut blocks = Vec::with_capacity(n * (n - 1) / 6);
    for x in 0..m {
        blocks.push([id(x, 0), id(x, 1), id(x, 2)]);
    }
    for x in 0..m {
        for i in 0..3 {
            blocks.push([inf, id(x + m, i), id(x, i + 1)]);
        }
    }
    for x in 0..q {
        for y in x + 1..q {
            for i in 0..3 {
                blocks.push([id(x, i), id(y, i), id(op(x, y), i + 1)]);
            }
        }
    }
    Hypergraph::new(3, n, blocks)
}

/// Develops base blocks through Z_n: each nonzero difference must occur exactly once.
fn cyclic_design(n: usize, k: usize, budget: &mut Budget) -> Result<Option<Hypergraph>> {
    let mut used = vec![false; n];
    used[0] = true;
    let mut bases: Vec<Vec<usize>> = Vec::new();
    if !difference_rec(n, k, &mut used, &mut bases, budget)? {
        return Ok(None);
    }
    let mut blocks = Vec::with_capacity(n * bases.len());
    for base in &bases {
        for shift in 0..n {
            blocks.push(base.iter().map(|&x| (x + shift) % n).collect::<Vec<_>>());
        }
    }
    Ok(Some(Hypergraph::from_edges_dedup(k, n, blocks)?))
}

fn difference_rec(
    n: usize,
    k: usize,
    used: &mut [bool],
    bases: &mut Vec<Vec<usize>>,
    budget: &mut Budget,
) -> Result<bool> {
    budget.tick()?;
    // Translate so the smallest uncovered difference d appears as the pair (0, d).
    let Some(d) = (1..n).find(|&d| !used[d]) else {
        return Ok(true);
    };
    let mut block = vec![0, d];
    let mut marked = vec![d, n - d];
    used[d] = true;
    used[n - d] = true;
    let ok = extend_base(n, k, d + 1, &mut block, &mut marked, used, bases, budget)?;
    if !ok {
        used[d] = false;
        used[n - d] = false;
    }
    Ok(ok)
}

#[allow(clippy::too_many_arguments)]
fn extend_base(
    n: usize,
    k: usize,
    from: usize,
    block: &mut Vec<usize>,
    marked: &mut Vec<usize>,
    used: &mut [bool],
    bases: &mut Vec<Vec<usize>>,
    budget: &mut Budget,
) -> Result<bool> {
    if block.len() == k {
        bases.push(block.clone());
        if difference_rec(n, k, used, bases, budget)? {
            return Ok(true);
        }
        bases.pop();
        return Ok(false);
    }
    for x in from..n {
        budget.tick()?;
        let mut fresh = Vec::with_capacity(2 * block.len());
        let mut clash = false;
        for &b in block.iter() {
            for diff in [(x + n - b) % n, (b + n - x) % n] {
                if used[diff] || fresh.contains(&diff) {
                    clash = true;
                    break;
                }
                fresh.push(diff);
            }
            if clash {
                break;
            }
        }
        if clash {
            continue;
        }
        for &f in &fresh {
            used[f] = true;
        }
        block.push(x);
        let mark_len = marked.len();
        marked.extend_from_slice(&fresh);
        if extend_base(n, k, x + 1, block, marked, used, bases, budget)? {
            return Ok(true);
        }
        marked.truncate(mark_len);
        block.pop();
        for &f in &fresh {
            used[f] = false;
        }
    }
    Ok(false)
}

/// Algorithm-X style search over blocks through the most constrained uncovered pair.
fn exact_cover(n: usize, k: usize, budget: &mut Budget) -> Result<Hypergraph> {
    let mut open = BitGraph::complete(n);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let target = n * (n - 1) / (k * (k - 1));
    if cover_rec(n, k, &mut open, &mut blocks, target, budget)? {
        Hypergraph::new(k, n, blocks)
    } else {
        Err(Error::DesignUnavailable { n, k, reason: "exhaustive search found no design".into() })
    }
}

fn cover_rec(
    n: usize,
    k: usize,
    open: &mut BitGraph,
    blocks: &mut Vec<Vec<usize>>,
    target: usize,
    budget: &mut Budget,
) -> Result<bool> {
    budget.tick()?;
    if blocks.len() == target {
        return Ok(true);
    }
    // Branch on the open pair lying in the fewest candidate blocks.
    let mut pick: Option<(usize, usize, Vec<usize>, usize)> = None;
    for u in 0..n {
        for v in u + 1..n {
            if !open.has_edge(u, v) {
                continue;
            }
            let cand: Vec<usize> = (0..n).filter(|&w| open.has_edge(u, w) && open.has_edge(v, w)).collect();
            let cap = pick.as_ref().map_or(usize::MAX, |p| p.3);
            let count = count_completions(open, &cand, k - 2, cap);
            if count < cap {
                if count == 0 {
                    return Ok(false);
                }
                pick = Some((u, v, cand, count));
            }
        }
    }
    let Some((u, v, cand, _)) = pick else {
        return Ok(false);
    };
    if cand.len() < k - 2 {
        return Ok(false);
    }
    let mut found = false;
    let mut err = None;
    for_each_subset(cand.len(), k - 2, |idx| {
        if found || err.is_some() {
            return;
        }
        let mut block: Vec<usize> = vec![u, v];
        block.extend(idx.iter().map(|&i| cand[i]));
        for i in 2..block.len() {
            for j in i + 1..block.len() {
                if !open.has_edge(block[i], block[j]) {
                    return;
                }
            }
        }
        for i in 0..block.len() {
            for j in i + 1..block.len() {
                open.remove_edge(block[i], block[j]);
            }
        }
        block.sort_unstable();
        blocks.push(block.clone());
        match cover_rec(n, k, open, blocks, target, budget) {
            Ok(true) => found = true,
            Ok(false) => {}
            Err(e) => err = Some(e),
        }
        if !found {
            blocks.pop();
            for i in 0..block.len() {
                for j in i + 1..block.len() {
                    open.add_edge(block[i], block[j]);
                }
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(found)
}

/// Number of `size`-cliques of the open graph inside `cand`, counted up to `cap`.
fn count_completions(open: &BitGraph, cand: &[usize], size: usize, cap: usize) -> usize {
    fn rec(open: &BitGraph, cand: &[usize], from: usize, chosen: &mut Vec<usize>, size: usize, cap: usize) -> usize {
        if chosen.len() == size {
            return 1;
        }
        let mut total = 0;
        for i in from..cand.len() {
            let w = cand[i];
            if chosen.iter().all(|&c| open.has_edge(c, w)) {
                chosen.push(w);
                total += rec(open, cand, i + 1, chosen, size, cap - total);
                chosen.pop();
                if total >= cap {
                    break;
                }
            }
        }
        total
    }
    rec(open, cand, 0, &mut Vec::with_capacity(size), size, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::verify_design;

    #[test]
    fn exact_cover_reproduces_direct_parameters() {
        for (n, k) in [(7, 3), (9, 3), (13, 3), (13, 4), (16, 4)] {
            let mut b = Budget::new("cover", 2_000_000);
            let blocks = exact_cover(n, k, &mut b).unwrap();
            verify_design(&Design { n, k, blocks }).unwrap();
        }
    }

    #[test]
    fn cyclic_families() {
        for (n, k) in [(13, 3), (13, 4), (37, 4), (21, 5), (41, 5)] {
            let mut b = Budget::new("cyclic", 5_000_000);
            let blocks = cyclic_design(n, k, &mut b).unwrap().unwrap();
            verify_design(&Design { n, k, blocks }).unwrap();
        }
    }
}
