use serde::{Deserialize, Serialize};

use crate::error::{Budget, Result};
use crate::family::ToyFamily;
use crate::hcore::{z_eps, Hypergraph};
use crate::num::{rat_int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripReport {
    pub z: Vec<usize>,
    /// n ≥ ε^{-1/2} and |H| ≥ (λ − ε)n³.
    pub hypotheses_met: bool,
    /// |Z| ≤ ε^{1/2}n; only evaluated when the hypotheses hold.
    pub z_size_bound: Option<bool>,
    pub stripped_edges: usize,
    pub stripped_min_degree: usize,
    /// δ(H − Z) ≥ (3λ − 3ε^{1/2})n².
    pub min_degree_bound: Option<bool>,
    /// |H − Z| ≥ (λ − 2ε^{1/2})n³.
    pub edge_bound: Option<bool>,
    /// (index, map on the surviving vertices in increasing order) for the first G_i that colours H − Z.
    pub coloring: Option<(usize, Vec<usize>)>,
    pub coloring_indeterminate: bool,
}

/// value ≥ base − c·√ε·scale, decided without square roots.
fn at_least_minus_sqrt(value: &Rational, base: &Rational, c: &Rational, eps: &Rational, scale: &Rational) -> bool {
    let gap = base - value;
    if gap <= Rational::from_integer(0.into()) {
        return true;
    }
    &gap * &gap <= c * c * eps * scale * scale
}

/// Removes Z_ε(H), checks the size and degree bounds of the stripped graph exactly and
/// tries to colour what is left with each template.
pub fn strip_and_color(
    h: &Hypergraph,
    lambda: &Rational,
    eps: &Rational,
    family: &ToyFamily,
    budget: &mut Budget,
) -> Result<StripReport> {
    let n = h.vertex_count();
    let z = z_eps(h, lambda, eps)?;
    let nr = rat_int(n);
    let n2 = &nr * &nr;
    let n3 = &n2 * &nr;
    let hypotheses_met = eps * &n2 >= rat_int(1) && rat_int(h.len()) >= (lambda - eps) * &n3;
    let keep: Vec<usize> = (0..n).filter(|v| z.binary_search(v).is_err()).collect();
    let stripped = h.compact_induced(&keep);
    let stripped_min_degree = stripped.degrees().iter().copied().min().unwrap_or(0);
    let (z_size_bound, min_degree_bound, edge_bound) = if hypotheses_met {
        let zs = rat_int(z.len());
        let three = rat_int(3);
        (
            Some(&zs * &zs <= eps * &n2),
            Some(at_least_minus_sqrt(&rat_int(stripped_min_degree), &(&three * lambda * &n2), &three, eps, &n2)),
            Some(at_least_minus_sqrt(&rat_int(stripped.len()), &(lambda * &n3), &rat_int(2), eps, &n3)),
        )
    } else {
        (None, None, None)
    };
    let (coloring, coloring_indeterminate) = match family.coloring(&stripped, budget) {
        Ok(c) => (c.map(|(i, m)| (i, m.map)), false),
        Err(e) if e.is_budget() => (None, true),
        Err(e) => return Err(e),
    };
    Ok(StripReport {
        z,
        hypotheses_met,
        z_size_bound,
        stripped_edges: stripped.len(),
        stripped_min_degree,
        min_degree_bound,
        edge_bound,
        coloring,
        coloring_indeterminate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hcore::blow_up;
    use crate::num::rat;

    #[test]
    fn balanced_blow_up_strips_nothing() {
        let fam = ToyFamily::k4();
        let (h, _) = blow_up(&fam.graphs[0], &[4, 4, 4, 4], false).unwrap();
        let r = strip_and_color(&h, &rat(1, 16), &rat(1, 100), &fam, &mut Budget::new("t", 1_000_000)).unwrap();
        assert!(r.z.is_empty());
        assert!(r.hypotheses_met);
        assert_eq!((r.z_size_bound, r.min_degree_bound, r.edge_bound), (Some(true), Some(true), Some(true)));
        assert_eq!(r.coloring.map(|c| c.0), Some(0));
    }

    #[test]
    fn isolated_vertices_are_stripped() {
        let fam = ToyFamily::k4();
        let (core, _) = blow_up(&fam.graphs[0], &[20, 20, 20, 20], false).unwrap();
        // ε^{1/2}n/2 = 2.05 isolated vertices at n = 82.
        let h = core.with_vertex_count(82).unwrap();
        let eps = rat(1, 400);
        let r = strip_and_color(&h, &rat(1, 16), &eps, &fam, &mut Budget::new("t", 1_000_000)).unwrap();
        assert_eq!(r.z, vec![80, 81]);
        assert!(r.coloring.is_some());

        let sparse = Hypergraph::new(3, 82, [[0, 1, 2]]).unwrap();
        let r = strip_and_color(&sparse, &rat(1, 16), &eps, &fam, &mut Budget::new("t", 1_000_000)).unwrap();
        assert!(!r.hypotheses_met);
        assert_eq!(r.z_size_bound, None);
    }
}
