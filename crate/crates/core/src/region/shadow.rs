use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::HomMap;
use crate::hcore::{shadow_graph, Hypergraph};
use crate::num::{rat_int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowBoundReport {
    pub shadow_pairs: usize,
    /// The colouring is a homomorphism and |H| ≥ (λ − ε)n³.
    pub hypotheses_met: bool,
    /// |∂H| ≥ ((v−1)/(2v) − 3ε^{1/2}v)n² with v = v(G); None when the hypotheses fail.
    pub bound_holds: Option<bool>,
    /// Pairs in different colour classes that are not in ∂H.
    pub missing_pairs: usize,
    /// δ₂(G) ≥ 7v/8, under which the missing-pair count is bounded.
    pub codegree_gate: bool,
    /// |M| < 4εn²; evaluated when the hypotheses and the codegree gate hold.
    pub missing_bound: Option<bool>,
}

/// Checks the shadow lower bound for a G-coloured H, deciding every inequality exactly.
pub fn shadow_lower_bound_check(
    h: &Hypergraph,
    g: &Hypergraph,
    coloring: &HomMap,
    lambda: &Rational,
    eps: &Rational,
) -> Result<ShadowBoundReport> {
    if *eps <= rat_int(0) {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let n = h.vertex_count();
    let v = g.vertex_count();
    let sh = shadow_graph(h);
    let shadow_pairs = sh.edge_count();
    let mut missing_pairs = 0;
    if coloring.map.len() == n {
        for x in 0..n {
            for y in x + 1..n {
                if coloring.map[x] != coloring.map[y] && !sh.has_edge(x, y) {
                    missing_pairs += 1;
                }
            }
        }
    }
    let nr = rat_int(n);
    let n2 = &nr * &nr;
    let hypotheses_met = coloring.verify(h, g) && rat_int(h.len()) >= (lambda - eps) * &n2 * &nr;
    let codegree_gate = v >= 3 && {
        let table = g.codegree_table();
        table.iter().all(|&c| 8 * c as usize >= 7 * v)
    };
    let bound_holds = hypotheses_met.then(|| {
        // |∂H| − (v−1)n²/(2v) ≥ −3v·ε^{1/2}n².
        let vr = rat_int(v);
        let gap = (&vr - rat_int(1)) * &n2 / (rat_int(2) * &vr) - rat_int(shadow_pairs);
        gap <= rat_int(0) || &gap * &gap <= rat_int(9) * &vr * &vr * eps * &n2 * &n2
    });
    let missing_bound = (hypotheses_met && codegree_gate).then(|| rat_int(missing_pairs) < rat_int(4) * eps * &n2);
    Ok(ShadowBoundReport { shadow_pairs, hypotheses_met, bound_holds, missing_pairs, codegree_gate, missing_bound })
}
