use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Budget, Error, Result};
use crate::hcore::Hypergraph;

type Triple = [usize; 3];

fn sorted(mut t: Triple) -> Triple {
    t.sort_unstable();
    t
}

/// An s-regular 3-graph on [n], built as s pairwise edge-disjoint parallel classes.
///
/// Rotational classes {3i+c, 3i+c+d₁, 3i+c+d₂} (mod n) with d₁ ≡ 1, d₂ ≡ 2 (mod 3) are
/// accepted greedily; if they run out, random classes are repaired by vertex swaps.
pub fn build_regular_3graph(n: usize, s: usize, seed: u64, budget: &mut Budget) -> Result<Hypergraph> {
    if n % 3 != 0 {
        return Err(Error::Precondition(format!("regular 3-graph needs 3 | n, got n = {n}")));
    }
    let max_s = if n == 0 { 0 } else { (n - 1) * (n - 2) / 2 };
    if s > max_s {
        return Err(Error::Precondition(format!("s = {s} exceeds C(n-1, 2) = {max_s}")));
    }
    let mut used: HashSet<Triple> = HashSet::new();
    let mut rounds = 0;
    let m = n / 3;
    'rot: for d1 in (1..n).step_by(3) {
        for d2 in (2..n).step_by(3) {
            for c in 0..3 {
                if rounds == s {
                    break 'rot;
                }
                budget.tick()?;
                let class: Vec<Triple> =
                    (0..m).map(|i| sorted([3 * i + c, (3 * i + c + d1) % n, (3 * i + c + d2) % n])).collect();
                if class.iter().all(|t| !used.contains(t)) {
                    used.extend(class);
                    rounds += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while rounds < s {
        let class = random_class(n, &used, &mut rng, budget)?;
        used.extend(class);
        rounds += 1;
    }
    let h = Hypergraph::new(3, n, used)?;
    debug_assert!(h.degrees().iter().all(|&d| d == s));
    Ok(h)
}

/// A parallel class avoiding `used`: random partition, then swaps that never increase
/// the number of reused triples, restarting when stuck.
fn random_class(n: usize, used: &HashSet<Triple>, rng: &mut ChaCha8Rng, budget: &mut Budget) -> Result<Vec<Triple>> {
    let m = n / 3;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        perm.shuffle(rng);
        let bad = |p: &[usize], b: usize| used.contains(&sorted([p[3 * b], p[3 * b + 1], p[3 * b + 2]])) as usize;
        let mut conflicts: usize = (0..m).map(|b| bad(&perm, b)).sum();
        for _ in 0..50 * n {
            if conflicts == 0 {
                break;
            }
            budget.tick()?;
            let bad_blocks: Vec<usize> = (0..m).filter(|&b| bad(&perm, b) == 1).collect();
            let b = bad_blocks[rng.gen_range(0..bad_blocks.len())];
            let i = 3 * b + rng.gen_range(0..3);
            let j = rng.gen_range(0..n);
            let bj = j / 3;
            if bj == b {
                continue;
            }
            let before = bad(&perm, b) + bad(&perm, bj);
            perm.swap(i, j);
            let after = bad(&perm, b) + bad(&perm, bj);
            if after <= before {
                conflicts = conflicts + after - before;
            } else {
                perm.swap(i, j);
            }
        }
        if conflicts == 0 {
            return Ok((0..m).map(|b| sorted([perm[3 * b], perm[3 * b + 1], perm[3 * b + 2]])).collect());
        }
    }
}
