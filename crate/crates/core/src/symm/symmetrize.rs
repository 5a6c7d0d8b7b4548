use serde::{Deserialize, Serialize};

use crate::error::{Budget, Error, Result};
use crate::family::{find_homomorphism, is_mt_free, HomMap, ToyFamily, Verdict, Violation};
use crate::graph::BitGraph;
use crate::hcore::{equivalence_classes, is_semibipartite, psi, shadow_graph, transversal_number, Hypergraph};

/// Two equivalence classes (as sorted vertex lists) with no shadow pair between them.
pub fn find_missing_class_pair(h: &Hypergraph) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let classes = equivalence_classes(h)?;
    let sh = shadow_graph(h);
    let blocks = classes.blocks();
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let (a, b) = (&blocks[i], &blocks[j]);
            if !sh.has_edge(a[0], b[0]) {
                if a.iter().any(|&u| b.iter().any(|&v| sh.has_edge(u, v))) {
                    return Err(Error::InvariantViolation(format!(
                        "classes of {} and {} are only partly joined in the shadow",
                        a[0], b[0]
                    )));
                }
                return Ok(Some((a.clone(), b.clone())));
            }
        }
    }
    Ok(None)
}

fn check_missing(sh: &BitGraph, c1: &[usize], c2: &[usize]) -> Result<()> {
    if c1.iter().any(|&u| c2.iter().any(|&v| u == v || sh.has_edge(u, v))) {
        return Err(Error::Precondition("the two vertex sets are not cross-missing in the shadow".into()));
    }
    Ok(())
}

/// Edges avoiding `drop`, plus a copy of every edge through `source` with `source`
/// replaced by each vertex of `targets`.
fn copy_links(h: &Hypergraph, drop: &[usize], source: usize, targets: &[usize]) -> Result<Hypergraph> {
    let mut dropped = vec![false; h.vertex_count()];
    for &v in drop {
        dropped[v] = true;
    }
    let mut edges: Vec<Vec<usize>> = h.edges().filter(|e| e.iter().all(|&v| !dropped[v])).map(|e| e.to_vec()).collect();
    for e in h.edges().filter(|e| e.contains(&source)) {
        for &t in targets {
            edges.push(e.iter().map(|&v| if v == source { t } else { v }).collect());
        }
    }
    Hypergraph::from_edges_dedup(3, h.vertex_count(), &edges)
}

/// Gives every vertex of C1 the link of C2. Requires C1, C2 to be classes with no shadow
/// pair between them.
pub fn symmetrize_class(h: &Hypergraph, c1: &[usize], c2: &[usize]) -> Result<Hypergraph> {
    check_missing(&shadow_graph(h), c1, c2)?;
    if c1.is_empty() || c2.is_empty() {
        return Err(Error::Precondition("classes must be non-empty".into()));
    }
    let d = h.degrees();
    let (d1, d2) = (d[c1[0]] as i128, d[c2[0]] as i128);
    let out = copy_links(h, c1, c2[0], c1)?;
    let expected = h.len() as i128 + c1.len() as i128 * (d2 - d1);
    if out.len() as i128 != expected {
        return Err(Error::InvariantViolation(format!("|H'| = {} but the class identity gives {expected}", out.len())));
    }
    Ok(out)
}

/// Gives v1 the link of v2 (v1, v2 not joined in the shadow).
pub fn symmetrize_vertex(h: &Hypergraph, v1: usize, v2: usize) -> Result<Hypergraph> {
    check_missing(&shadow_graph(h), &[v1], &[v2])?;
    let d = h.degrees();
    let out = copy_links(h, &[v1], v2, &[v1])?;
    if out.len() + d[v1] != h.len() + d[v2] {
        return Err(Error::InvariantViolation("vertex symmetrization changed |H| unexpectedly".into()));
    }
    Ok(out)
}

/// The map sending every vertex of `moved` to `onto` and fixing the rest: H′ → H.
pub fn collapse_map(n: usize, moved: &[usize], onto: usize) -> HomMap {
    let mut map: Vec<usize> = (0..n).collect();
    for &v in moved {
        map[v] = onto;
    }
    HomMap { map }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetrizationMode {
    Class,
    Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub edges: usize,
    pub psi: usize,
    pub action: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SymmetrizationOutcome {
    Semibipartite { a: Vec<usize> },
    Colorable { index: usize, map: Vec<usize> },
    /// No family was supplied (or it does not apply); the transversal number of the
    /// one-vertex-per-class subgraph is recorded.
    Terminal { classes: usize, transversal_tau: usize },
    NotFreeDetected { violation: Violation },
    Budget { what: String },
    CertificationFailed { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetrizationTrace {
    pub mode: SymmetrizationMode,
    pub steps: Vec<TraceStep>,
    pub outcome: SymmetrizationOutcome,
    pub final_edges: Vec<Vec<usize>>,
}

impl SymmetrizationTrace {
    /// (|H|, Ψ) strictly increases along the trace.
    pub fn strictly_increasing(&self) -> bool {
        self.steps.windows(2).all(|w| (w[0].edges, w[0].psi) < (w[1].edges, w[1].psi))
    }
}

/// One step: pick the first cross-missing class pair, orient it by (d(C), |C|) and
/// symmetrize. Returns the new graph, the hom map back and a description.
pub fn symmetrization_step(h: &Hypergraph, mode: SymmetrizationMode) -> Result<Option<(Hypergraph, HomMap, String)>> {
    let Some((a, b)) = find_missing_class_pair(h)? else {
        return Ok(None);
    };
    let d = h.degrees();
    let key = |c: &[usize]| (d[c[0]], c.len());
    let (c1, c2) = if key(&a) <= key(&b) { (a, b) } else { (b, a) };
    let n = h.vertex_count();
    Ok(Some(match mode {
        SymmetrizationMode::Class => {
            let out = symmetrize_class(h, &c1, &c2)?;
            let desc = format!("class {:?} <- link of class {:?}", c1, c2);
            (out, collapse_map(n, &c1, c2[0]), desc)
        }
        SymmetrizationMode::Vertex => {
            let (v1, v2) = (c1[0], c2[0]);
            let out = symmetrize_vertex(h, v1, v2)?;
            if d[v1] == d[v2] {
                let gain = psi(&out)? as i64 - psi(h)? as i64;
                let promised = 2 * (c2.len() as i64 - c1.len() as i64 + 1);
                if gain < promised {
                    return Err(Error::InvariantViolation(format!("Psi grew by {gain}, expected at least {promised}")));
                }
            }
            (out, collapse_map(n, &[v1], v2), format!("vertex {v1} <- link of vertex {v2}"))
        }
    }))
}

/// Symmetrizes until no cross-missing class pair is left, then certifies the end state:
/// if the transversal graph T (one vertex per class) has τ(T) < 2 then H is
/// semibipartite, otherwise a colouring of T by some G_i is lifted to H.
pub fn run_symmetrization(
    h: &Hypergraph,
    family: Option<&ToyFamily>,
    mode: SymmetrizationMode,
    budget: &mut Budget,
) -> Result<SymmetrizationTrace> {
    let n = h.vertex_count();
    let mut cur = h.clone();
    let mut steps = vec![TraceStep { edges: cur.len(), psi: psi(&cur)?, action: "start".into() }];
    let finish = |steps, outcome, g: &Hypergraph| SymmetrizationTrace { mode, steps, outcome, final_edges: g.edge_vecs() };
    let recheck_every = if n <= 12 { 1 } else { 10 };
    let mut since_check = recheck_every;
    loop {
        if budget.tick().is_err() {
            return Ok(finish(steps, SymmetrizationOutcome::Budget { what: "symmetrization steps".into() }, &cur));
        }
        if let Some(fam) = family {
            if since_check >= recheck_every {
                since_check = 0;
                let mut b = Budget::new("freeness re-check", budget.remaining().max(1));
                match is_mt_free(&cur, fam, &mut b)? {
                    Verdict::No(violation) => {
                        return Ok(finish(steps, SymmetrizationOutcome::NotFreeDetected { violation }, &cur));
                    }
                    Verdict::Indeterminate { reason } => {
                        return Ok(finish(steps, SymmetrizationOutcome::Budget { what: reason }, &cur));
                    }
                    Verdict::Yes(_) => {}
                }
            }
            since_check += 1;
        }
        let Some((next, back, action)) = symmetrization_step(&cur, mode)? else {
            break;
        };
        if !back.verify(&next, &cur) {
            return Err(Error::InvariantViolation("symmetrized graph does not map back".into()));
        }
        let step = TraceStep { edges: next.len(), psi: psi(&next)?, action };
        let last = steps.last().expect("non-empty");
        if (step.edges, step.psi) <= (last.edges, last.psi) {
            return Err(Error::InvariantViolation("(|H|, Psi) did not increase".into()));
        }
        steps.push(step);
        cur = next;
    }
    let outcome = certify(&cur, family, budget)?;
    Ok(finish(steps, outcome, &cur))
}

fn certify(h: &Hypergraph, family: Option<&ToyFamily>, budget: &mut Budget) -> Result<SymmetrizationOutcome> {
    let classes = equivalence_classes(h)?;
    let reps: Vec<usize> = classes.blocks().iter().map(|b| b[0]).collect();
    let t = h.induced(&reps);
    let mut b = Budget::new("terminal transversal", budget.remaining().max(1));
    let tau = match transversal_number(&t, &mut b) {
        Ok(x) => x,
        Err(e) if e.is_budget() => return Ok(SymmetrizationOutcome::Budget { what: e.to_string() }),
        Err(e) => return Err(e),
    };
    if tau < 2 {
        let mut b = Budget::new("semibipartition", budget.remaining().max(1));
        return match is_semibipartite(h, &mut b) {
            Ok(Some(p)) => Ok(SymmetrizationOutcome::Semibipartite { a: p.block(0).to_vec() }),
            Ok(None) => Ok(SymmetrizationOutcome::CertificationFailed {
                reason: "tau(T) < 2 but H is not semibipartite".into(),
            }),
            Err(e) if e.is_budget() => Ok(SymmetrizationOutcome::Budget { what: e.to_string() }),
            Err(e) => Err(e),
        };
    }
    let Some(fam) = family else {
        return Ok(SymmetrizationOutcome::Terminal { classes: reps.len(), transversal_tau: tau });
    };
    for (index, g) in fam.graphs.iter().enumerate() {
        let mut b = Budget::new("terminal colouring", budget.remaining().max(1));
        let found = match find_homomorphism(&t, g, &mut b) {
            Ok(x) => x,
            Err(e) if e.is_budget() => return Ok(SymmetrizationOutcome::Budget { what: e.to_string() }),
            Err(e) => return Err(e),
        };
        if let Some(m) = found {
            let mut map = vec![0; h.vertex_count()];
            for (c, block) in classes.blocks().iter().enumerate() {
                for &v in block {
                    map[v] = m.map[reps[c]];
                }
            }
            let lifted = HomMap { map };
            if !lifted.verify(h, g) {
                return Ok(SymmetrizationOutcome::CertificationFailed {
                    reason: format!("colouring of T by G_{} does not lift", index + 1),
                });
            }
            return Ok(SymmetrizationOutcome::Colorable { index, map: lifted.map });
        }
    }
    Ok(SymmetrizationOutcome::CertificationFailed { reason: "T is not colourable by any G_i".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hcore::blow_up;

    #[test]
    fn missing_pair_examples() {
        let (e, _) = blow_up(&Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap(), &[2, 2, 2], false).unwrap();
        assert!(find_missing_class_pair(&e).unwrap().is_none());
        let two = Hypergraph::new(3, 6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        let (a, b) = find_missing_class_pair(&two).unwrap().unwrap();
        assert_eq!((a, b), (vec![0], vec![3]));
        assert!(find_missing_class_pair(&Hypergraph::complete(3, 4)).unwrap().is_none());
    }

    #[test]
    fn class_identity() {
        // Star at 0 plus a disjoint edge: vertex 0 has degree 2.
        let h = Hypergraph::new(3, 8, [[0, 1, 2], [0, 3, 4], [5, 6, 7]]).unwrap();
        let out = symmetrize_class(&h, &[5], &[0]).unwrap();
        assert_eq!(out.len(), h.len() + (2 - 1));
        assert!(collapse_map(8, &[5], 0).verify(&out, &h));
        let same = Hypergraph::new(3, 6, [[0, 1, 2], [3, 1, 2]]).unwrap();
        // 0 and 3 already share a link: nothing changes.
        assert_eq!(symmetrize_class(&same, &[0], &[3]).unwrap(), same);
    }

    #[test]
    fn vertex_psi_gain() {
        let two = Hypergraph::new(3, 6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        let out = symmetrize_vertex(&two, 0, 3).unwrap();
        assert_eq!(out.len(), 2);
        // 0 joins 3, and 1, 2 become isolated and merge: Ψ goes from 6 to 10.
        assert_eq!((psi(&two).unwrap(), psi(&out).unwrap()), (6, 10));
        let h = Hypergraph::new(3, 7, [[0, 1, 2], [3, 4, 5], [3, 4, 6]]).unwrap();
        assert!(symmetrize_vertex(&h, 0, 3).unwrap().len() > h.len());
        assert!(symmetrize_vertex(&h, 0, 1).is_err());
    }

    #[test]
    fn runs_terminate_with_certificates() {
        let fam = ToyFamily::k4_fano();
        let mut b = Budget::new("s", 1_000_000);
        let (blow, _) = blow_up(&fam.graphs[1], &[1, 2, 1, 1, 1, 2, 1], false).unwrap();
        let tr = run_symmetrization(&blow, Some(&fam), SymmetrizationMode::Vertex, &mut b).unwrap();
        assert_eq!(tr.steps.len(), 1);
        assert!(matches!(tr.outcome, SymmetrizationOutcome::Colorable { index: 1, .. }));

        let two = Hypergraph::new(3, 6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        for mode in [SymmetrizationMode::Vertex, SymmetrizationMode::Class] {
            let tr = run_symmetrization(&two, Some(&fam), mode, &mut b).unwrap();
            assert!(tr.strictly_increasing());
            assert!(matches!(
                tr.outcome,
                SymmetrizationOutcome::Semibipartite { .. } | SymmetrizationOutcome::Colorable { .. }
            ));
        }
        let star = Hypergraph::new(3, 5, [[0, 1, 2], [0, 3, 4], [0, 1, 3]]).unwrap();
        let tr = run_symmetrization(&star, Some(&fam), SymmetrizationMode::Vertex, &mut b).unwrap();
        assert!(matches!(tr.outcome, SymmetrizationOutcome::Semibipartite { .. }));
    }

    #[test]
    fn violation_is_reported() {
        let fam = ToyFamily::k4();
        let mut b = Budget::new("s", 1_000_000);
        let tr = run_symmetrization(&Hypergraph::complete(3, 5), Some(&fam), SymmetrizationMode::Vertex, &mut b).unwrap();
        assert!(matches!(tr.outcome, SymmetrizationOutcome::NotFreeDetected { .. }));
    }
}
