use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hom::{find_homomorphism_into, HomTarget};
use super::member::{in_mt, is_mt_free, ToyFamily, Verdict};
use crate::error::{Budget, Error, Result};
use crate::hcore::{for_each_subset, Hypergraph};

/// All 3-graphs on [n] (n ≤ 6) encoded as bitmasks over the C(n,3) triples, grouped into
/// isomorphism classes.
pub struct IsoClasses {
    pub n: usize,
    pub triples: Vec<[usize; 3]>,
    /// Smallest mask of each class.
    pub reps: Vec<u32>,
    /// Class id of every mask.
    pub class_of: Vec<u32>,
}

impl IsoClasses {
    pub fn graph(&self, mask: u32) -> Hypergraph {
        let edges = (0..self.triples.len()).filter(|&i| mask >> i & 1 == 1).map(|i| self.triples[i]);
        Hypergraph::new(3, self.n, edges).expect("triples are valid")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Orbit enumeration under S_n; each class is found from its smallest mask.
pub fn iso_classes(n: usize) -> Result<IsoClasses> {
    if n > 6 {
        return Err(Error::InvalidSize(format!("isomorphism catalogue supports n <= 6, got {n}")));
    }
    let mut triples = Vec::new();
    for_each_subset(n, 3, |s| triples.push([s[0], s[1], s[2]]));
    let m = triples.len();
    let index_of = |mut t: [usize; 3]| {
        t.sort_unstable();
        triples.iter().position(|&x| x == t).expect("triple exists")
    };
    let perm_maps: Vec<Vec<usize>> = permutations(n)
        .iter()
        .map(|p| triples.iter().map(|t| index_of([p[t[0]], p[t[1]], p[t[2]]])).collect())
        .collect();
    let total = 1usize << m;
    let mut class_of = vec![u32::MAX; total];
    let mut reps = Vec::new();
    for mask in 0..total {
        if class_of[mask] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(mask as u32);
        for pm in &perm_maps {
            let mut image = 0usize;
            for (i, &j) in pm.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    image |= 1 << j;
                }
            }
            class_of[image] = id;
        }
    }
    Ok(IsoClasses { n, triples, reps, class_of })
}

/// Members of M_t on at most n vertices, up to isomorphism, and the inclusion-minimal ones.
pub struct MemberCatalog {
    pub classes: IsoClasses,
    pub is_member: Vec<bool>,
    /// Representative masks of members with no proper member subgraph.
    pub minimal: Vec<u32>,
}

impl MemberCatalog {
    pub fn minimal_graphs(&self) -> Vec<Hypergraph> {
        self.minimal.iter().map(|&m| self.classes.graph(m)).collect()
    }

    /// Free in the hom sense against the catalogue: no minimal member maps into H.
    pub fn hom_free(&self, h: &Hypergraph, budget: &mut Budget) -> Result<bool> {
        let t = HomTarget::new(h)?;
        for f in self.minimal_graphs() {
            if find_homomorphism_into(&f, &t, budget)?.is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn member_catalog(family: &ToyFamily, n: usize, budget_per_graph: u64) -> Result<MemberCatalog> {
    let classes = iso_classes(n)?;
    let mut is_member = Vec::with_capacity(classes.reps.len());
    for &rep in &classes.reps {
        let mut b = Budget::new("catalogue membership", budget_per_graph);
        match in_mt(&classes.graph(rep), family, &mut b)? {
            Verdict::Yes(_) => is_member.push(true),
            Verdict::No(_) => is_member.push(false),
            Verdict::Indeterminate { reason } => return Err(Error::InvariantViolation(reason)),
        }
    }
    let m = classes.triples.len();
    let mut contains = vec![false; 1 << m];
    for mask in 0..1usize << m {
        contains[mask] = is_member[classes.class_of[mask] as usize]
            || (0..m).any(|i| mask >> i & 1 == 1 && contains[mask ^ (1 << i)]);
    }
    let minimal = classes
        .reps
        .iter()
        .enumerate()
        .filter(|&(c, &rep)| is_member[c] && (0..m).all(|i| rep >> i & 1 == 0 || !contains[rep as usize ^ (1 << i)]))
        .map(|(_, &rep)| rep)
        .collect();
    Ok(MemberCatalog { classes, is_member, minimal })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub samples: usize,
    pub agreed: usize,
    /// Graphs with more vertices than the catalogue where only the sound direction is checked.
    pub beyond_catalog: usize,
    pub indeterminate: usize,
    pub discrepancies: Vec<String>,
}

/// Compares [`is_mt_free`] with the catalogue's hom-freeness on random 3-graphs with
/// 4..=max_n vertices. Above the catalogue size, a catalogue hit must still mean not free.
pub fn hom_free_equiv_fuzz(
    family: &ToyFamily,
    catalog: &MemberCatalog,
    samples: usize,
    max_n: usize,
    seed: u64,
) -> Result<FuzzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FuzzReport { samples, ..Default::default() };
    for i in 0..samples {
        let n = rng.gen_range(4..=max_n.max(4));
        let p = rng.gen_range(0.1..0.9);
        let mut edges = Vec::new();
        for_each_subset(n, 3, |s| {
            if rng.gen_bool(p) {
                edges.push(s.to_vec());
            }
        });
        let h = Hypergraph::new(3, n, &edges)?;
        let mut b = Budget::new("fuzz", 20_000_000);
        let free = match is_mt_free(&h, family, &mut b)? {
            Verdict::Yes(_) => true,
            Verdict::No(_) => false,
            Verdict::Indeterminate { .. } => {
                report.indeterminate += 1;
                continue;
            }
        };
        let oracle = catalog.hom_free(&h, &mut Budget::new("fuzz oracle", 20_000_000))?;
        if n <= catalog.classes.n {
            if free == oracle {
                report.agreed += 1;
            } else {
                report.discrepancies.push(format!("sample {i}: free = {free}, oracle = {oracle}, edges {edges:?}"));
            }
        } else if free && !oracle {
            report.discrepancies.push(format!("sample {i}: catalogue member maps into a graph judged free, edges {edges:?}"));
        } else {
            report.beyond_catalog += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        // Numbers of 3-graphs on n unlabelled vertices.
        for (n, count) in [(3, 2), (4, 5), (5, 34)] {
            assert_eq!(iso_classes(n).unwrap().reps.len(), count);
        }
    }

    #[test]
    fn small_catalogue() {
        let fam = ToyFamily::k4();
        let cat = member_catalog(&fam, 5, 1_000_000).unwrap();
        // On 5 vertices only K_5^3-like graphs fail to be K_4^3-colourable.
        let k5 = Hypergraph::complete(3, 5);
        assert!(!cat.hom_free(&k5, &mut Budget::unlimited("t")).unwrap());
        assert!(cat.hom_free(&Hypergraph::complete(3, 4), &mut Budget::unlimited("t")).unwrap());
        let report = hom_free_equiv_fuzz(&fam, &cat, 40, 5, 3).unwrap();
        assert!(report.discrepancies.is_empty(), "{:?}", report.discrepancies);
    }
}
