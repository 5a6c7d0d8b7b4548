use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::assemble::GiAssembly;
use super::params::{clique_gap_holds, FamilyParams};
use crate::error::{Budget, Result};
use crate::graph::BitGraph;
use crate::hcore::{codegree, link_graph, pair_index};
use crate::num::{rat_int, rational_string, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "detail", rename_all = "snake_case")]
pub enum CheckOutcome {
    Pass,
    Violated(String),
    NotApplicable(String),
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationReport {
    /// k = 2s, the regime the structural bounds are stated for.
    pub balanced_regime: bool,
    pub degree: CheckOutcome,
    pub degree_value: Option<usize>,
    pub expected_degree: String,
    pub codegree: CheckOutcome,
    pub codegree_range: Option<(usize, usize)>,
    pub codegree_window: (usize, usize),
    pub link_clique: CheckOutcome,
    pub link_clique_range: Option<(usize, usize)>,
    pub link_clique_window: (usize, usize),
    pub clique_gap: CheckOutcome,
}

impl ObservationReport {
    pub fn all_pass(&self) -> bool {
        [&self.degree, &self.codegree, &self.link_clique, &self.clique_gap]
            .iter()
            .all(|c| !matches!(c, CheckOutcome::Violated(_)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationLimits {
    /// Links are only searched for cliques up to this n.
    pub link_vertex_cap: usize,
    pub clique_budget: u64,
}

impl Default for ObservationLimits {
    fn default() -> Self {
        ObservationLimits { link_vertex_cap: 400, clique_budget: 50_000_000 }
    }
}

/// Structural checks on an assembled G: regular of degree 3λn², codegrees in
/// [n − k − s, n − k], link clique numbers in [(n−1)/(k−1) − s, (n−1)/(k−1)], and the
/// full-scale clique gap when parameters are supplied.
pub fn verify_observation(
    a: &GiAssembly,
    lambda: &Rational,
    params: Option<&FamilyParams>,
    limits: &ObservationLimits,
) -> Result<ObservationReport> {
    let (n, k, s) = (a.n, a.k, a.s);
    let balanced_regime = k == 2 * s;

    // Degree: G is regular iff the removed graph is.
    let expected = lambda * rat_int(3) * rat_int(BigInt::from(n) * BigInt::from(n));
    let full = (n - 1) * (n - 2) / 2;
    let degrees: Vec<usize> = match &a.g {
        Some(g) => g.degrees().to_vec(),
        None => a.removed.degrees().iter().map(|d| full - d).collect(),
    };
    let degree_value = degrees.first().copied().filter(|&d| degrees.iter().all(|&x| x == d));
    let degree = match degree_value {
        None => CheckOutcome::Violated("G is not regular".into()),
        Some(d) if Rational::from_integer(BigInt::from(d)) == expected => CheckOutcome::Pass,
        Some(d) => CheckOutcome::Violated(format!("degree {d} differs from 3λn² = {}", rational_string(&expected))),
    };

    // Codegrees.
    let window = (n.saturating_sub(k + s), n - k);
    let codegree_range = if n < 2 {
        None
    } else {
        let mut lo = usize::MAX;
        let mut hi = 0;
        match &a.g {
            Some(g) => {
                for u in 0..n {
                    for v in u + 1..n {
                        let c = codegree(g, u, v)?;
                        lo = lo.min(c);
                        hi = hi.max(c);
                    }
                }
            }
            None => {
                let mut removed = vec![0u32; n * (n - 1) / 2];
                for e in a.removed.edges() {
                    removed[pair_index(n, e[0], e[1])] += 1;
                    removed[pair_index(n, e[0], e[2])] += 1;
                    removed[pair_index(n, e[1], e[2])] += 1;
                }
                for r in removed {
                    let c = n - 2 - r as usize;
                    lo = lo.min(c);
                    hi = hi.max(c);
                }
            }
        }
        Some((lo, hi))
    };
    let codegree_outcome = match codegree_range {
        None => CheckOutcome::NotApplicable("fewer than two vertices".into()),
        Some((lo, hi)) if lo >= window.0 && hi <= window.1 => CheckOutcome::Pass,
        Some((lo, hi)) => CheckOutcome::Violated(format!("codegrees span [{lo}, {hi}], outside [{}, {}]", window.0, window.1)),
    };

    // Link clique numbers.
    let parts = (n - 1) / (k - 1);
    let clique_window = (parts.saturating_sub(s), parts);
    let (link_clique, link_clique_range) = if n > limits.link_vertex_cap {
        (CheckOutcome::NotApplicable(format!("n = {n} above the link cap {}", limits.link_vertex_cap)), None)
    } else {
        let mut budget = Budget::new("link clique", limits.clique_budget);
        let mut lo = usize::MAX;
        let mut hi = 0;
        for v in 0..n {
            let lg = match &a.g {
                Some(g) => link_graph(g, v)?,
                None => complement_link(a, v),
            };
            let w = lg.clique_number(&mut budget)?;
            lo = lo.min(w);
            hi = hi.max(w);
        }
        let outcome = if lo >= clique_window.0 && hi <= clique_window.1 {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Violated(format!(
                "link clique numbers span [{lo}, {hi}], outside [{}, {}]",
                clique_window.0, clique_window.1
            ))
        };
        (outcome, Some((lo, hi)))
    };

    let clique_gap = match params {
        None => CheckOutcome::NotApplicable("no family parameters supplied".into()),
        Some(p) if p.t < 2 => CheckOutcome::NotApplicable("t = 1 has no consecutive pair".into()),
        Some(p) => {
            let gaps = clique_gap_holds(p);
            match gaps.iter().position(|&g| !g) {
                None => CheckOutcome::Pass,
                Some(i) => CheckOutcome::Violated(format!("gap fails between i = {} and i = {}", i + 1, i + 2)),
            }
        }
    };

    Ok(ObservationReport {
        balanced_regime,
        degree,
        degree_value,
        expected_degree: rational_string(&expected),
        codegree: codegree_outcome,
        codegree_range,
        codegree_window: window,
        link_clique,
        link_clique_range,
        link_clique_window: clique_window,
        clique_gap,
    })
}

fn complement_link(a: &GiAssembly, v: usize) -> BitGraph {
    let n = a.n;
    let mut lg = BitGraph::complete(n);
    for u in 0..n {
        if u != v {
            lg.remove_edge(u, v);
        }
    }
    for e in a.removed.edges() {
        if let Some(p) = e.iter().position(|&x| x == v) {
            let rest: Vec<usize> = e.iter().enumerate().filter(|&(i, _)| i != p).map(|(_, &x)| x).collect();
            lg.remove_edge(rest[0], rest[1]);
        }
    }
    lg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::{assemble_gi, construct_params, AssemblyLimits};
    use crate::lagrange::design_lagrangian;

    #[test]
    fn steiner_toy_observation() {
        let a = assemble_gi(57, 3, 0, 0, &AssemblyLimits::default()).unwrap();
        let lam = design_lagrangian(57, 3, 0).value;
        let r = verify_observation(&a, &lam, None, &ObservationLimits::default()).unwrap();
        assert!(r.degree.passed());
        assert_eq!(r.codegree_range, Some((54, 54)));
        assert_eq!(r.link_clique_range, Some((28, 28)));
        assert!(r.all_pass());
    }

    #[test]
    fn unmaterialized_path_agrees() {
        let lam = design_lagrangian(57, 3, 1).value;
        let lim = ObservationLimits::default();
        let a = assemble_gi(57, 3, 1, 2, &AssemblyLimits::default()).unwrap();
        let b = assemble_gi(57, 3, 1, 2, &AssemblyLimits { edge_cap: 0, ..Default::default() }).unwrap();
        let ra = verify_observation(&a, &lam, None, &lim).unwrap();
        let rb = verify_observation(&b, &lam, None, &lim).unwrap();
        assert_eq!(ra, rb);
        let (lo, hi) = ra.codegree_range.unwrap();
        assert!(lo >= 52 && hi <= 54);
        assert!(ra.all_pass());
    }

    #[test]
    fn balanced_regime_and_gap() {
        // (27, 2, 1): Q = 9, k = 2s.
        let a = assemble_gi(27, 2, 1, 0, &AssemblyLimits::default()).unwrap();
        let lam = design_lagrangian(27, 2, 1).value;
        let p = construct_params(2, &3u32.into(), &1u32.into(), None, false).unwrap();
        let r = verify_observation(&a, &lam, Some(&p), &ObservationLimits::default()).unwrap();
        assert!(r.balanced_regime);
        assert!(r.all_pass());
        assert!(r.clique_gap.passed());
        let wrong = verify_observation(&a, &(lam + rat_int(1)), None, &ObservationLimits::default()).unwrap();
        assert!(matches!(wrong.degree, CheckOutcome::Violated(_)));
    }
}
