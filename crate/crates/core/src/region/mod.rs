//! Points of the feasible region (shadow density, edge density) realised by explicit
//! constructions, the shadow lower bound for dense colourable graphs, and CSV output.

mod emit;
mod shadow;

pub use emit::{emit_region, parse_region_csv, plot_script, region_csv, CsvRow, RegionMarkers};
pub use shadow::{shadow_lower_bound_check, ShadowBoundReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcore::{blow_up, shadow_graph, Hypergraph};
use crate::num::{binom, rat_int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionPoint {
    #[serde(with = "crate::num::serde_big::rational")]
    pub x: Rational,
    #[serde(with = "crate::num::serde_big::rational")]
    pub y: Rational,
    pub family: String,
    /// None for the limit n → ∞.
    pub n: Option<usize>,
}

impl RegionPoint {
    pub fn in_unit_box(&self) -> bool {
        let (zero, one) = (rat_int(0), rat_int(1));
        self.x >= zero && self.x <= one && self.y >= zero && self.y <= one
    }
}

/// (|∂H|/C(n,2), |H|/C(n,3)) of a 3-graph on at least 3 vertices.
pub fn density_point(h: &Hypergraph, family: &str) -> Result<RegionPoint> {
    let n = h.vertex_count();
    if h.uniformity() != 3 || n < 3 {
        return Err(Error::InvalidSize("densities need a 3-graph on at least 3 vertices".into()));
    }
    let pairs = shadow_graph(h).edge_count();
    Ok(RegionPoint {
        x: Rational::new(pairs.into(), binom(n as u64, 2).into()),
        y: Rational::new(h.len().into(), binom(n as u64, 3).into()),
        family: family.into(),
        n: Some(n),
    })
}

/// Every triple with exactly one vertex in A = {0, …, a−1}.
pub fn complete_semibipartite(n: usize, a: usize) -> Result<Hypergraph> {
    if a > n {
        return Err(Error::InvalidSize(format!("a = {a} exceeds n = {n}")));
    }
    let mut edges = Vec::new();
    for x in 0..a {
        for y in a..n {
            for z in y + 1..n {
                edges.push([x, y, z]);
            }
        }
    }
    Hypergraph::new(3, n, edges)
}

/// Exact densities of the complete semibipartite graph with |A| = a.
pub fn semibipartite_point(n: usize, a: usize) -> Result<RegionPoint> {
    if a < 1 || a + 2 > n {
        return Err(Error::InvalidSize(format!("need 1 <= a <= n - 2, got a = {a}, n = {n}")));
    }
    let (n64, a64) = (n as u64, a as u64);
    let pairs = binom(n64, 2) - binom(a64, 2);
    let edges = a as u128 * binom(n64 - a64, 2);
    Ok(RegionPoint {
        x: Rational::new(pairs.into(), binom(n64, 2).into()),
        y: Rational::new(edges.into(), binom(n64, 3).into()),
        family: "semibipartite".into(),
        n: Some(n),
    })
}

/// (1 − α², 3α(1 − α)²).
pub fn semibipartite_limit(alpha: &Rational) -> RegionPoint {
    let one = rat_int(1);
    let b = &one - alpha;
    RegionPoint {
        x: &one - alpha * alpha,
        y: rat_int(3) * alpha * &b * &b,
        family: "semibipartite".into(),
        n: None,
    }
}

/// round(αn), halves rounded up.
fn round_alpha(alpha: &Rational, n: usize) -> usize {
    let v = alpha * rat_int(n) + Rational::new(1.into(), 2.into());
    let f = v.floor().to_integer();
    usize::try_from(f).unwrap_or(usize::MAX)
}

/// One point per α with a = round(αn). Graphs small enough are also materialized and
/// their measured densities compared with the closed form.
pub fn semibipartite_curve(n: usize, alphas: &[Rational]) -> Result<Vec<RegionPoint>> {
    let mut out = Vec::with_capacity(alphas.len());
    for alpha in alphas {
        if *alpha <= rat_int(0) || *alpha >= rat_int(1) {
            return Err(Error::InvalidArgument("alpha must lie in (0, 1)".into()));
        }
        let a = round_alpha(alpha, n);
        let p = semibipartite_point(n, a)?;
        if binom(n as u64, 3) <= 200_000 {
            let measured = density_point(&complete_semibipartite(n, a)?, "semibipartite")?;
            if (measured.x.clone(), measured.y.clone()) != (p.x.clone(), p.y.clone()) {
                return Err(Error::InvariantViolation(format!("semibipartite closed form disagrees at n = {n}, a = {a}")));
            }
        }
        out.push(p);
    }
    Ok(out)
}

/// Exact densities of the balanced blow-up G(m) on m·v(G) vertices, from counts:
/// |∂G(m)| = m²|∂G| and |G(m)| = m³|G|.
pub fn blowup_point(g: &Hypergraph, m: usize, family: &str) -> Result<RegionPoint> {
    let v = g.vertex_count();
    let n = m * v;
    if g.uniformity() != 3 || n < 3 {
        return Err(Error::InvalidSize("blow-up needs at least 3 vertices".into()));
    }
    let pairs = (m * m) as u128 * shadow_graph(g).edge_count() as u128;
    let edges = (m as u128).pow(3) * g.len() as u128;
    Ok(RegionPoint {
        x: Rational::new(pairs.into(), binom(n as u64, 2).into()),
        y: Rational::new(edges.into(), binom(n as u64, 3).into()),
        family: family.into(),
        n: Some(n),
    })
}

/// The m → ∞ limit (2|∂G|/v², 6|G|/v³).
pub fn blowup_limit(g: &Hypergraph, family: &str) -> RegionPoint {
    let v = rat_int(g.vertex_count());
    RegionPoint {
        x: rat_int(2 * shadow_graph(g).edge_count()) / (&v * &v),
        y: rat_int(6 * g.len()) / (&v * &v * &v),
        family: family.into(),
        n: None,
    }
}

/// Points for each multiple, followed by the limit row. Multiples whose blow-up has at most
/// `materialize_cap` edges are also built and measured.
pub fn blowup_points(g: &Hypergraph, multiples: &[usize], family: &str, materialize_cap: u128) -> Result<Vec<RegionPoint>> {
    let mut out = Vec::with_capacity(multiples.len() + 1);
    for &m in multiples {
        let p = blowup_point(g, m, family)?;
        if (m as u128).pow(3) * g.len() as u128 <= materialize_cap {
            let (h, _) = blow_up(g, &vec![m; g.vertex_count()], false)?;
            let measured = density_point(&h, family)?;
            if (measured.x.clone(), measured.y.clone()) != (p.x.clone(), p.y.clone()) {
                return Err(Error::InvariantViolation(format!("blow-up count formula disagrees at m = {m}")));
            }
        }
        out.push(p);
    }
    out.push(blowup_limit(g, family));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use num_traits::Signed;

    #[test]
    fn semibipartite_examples() {
        let p = semibipartite_point(10, 1).unwrap();
        assert_eq!((p.x, p.y), (rat(1, 1), rat(3, 10)));
        let tail = semibipartite_point(10, 8).unwrap();
        assert_eq!(tail.y, rat(8, 120));
        assert!(semibipartite_point(10, 9).is_err());
        let third = semibipartite_curve(300, &[rat(1, 3)]).unwrap().remove(0);
        let lim = semibipartite_limit(&rat(1, 3));
        assert_eq!((lim.x.clone(), lim.y.clone()), (rat(8, 9), rat(4, 9)));
        assert!((third.x - lim.x).abs() < rat(1, 100) && (third.y - lim.y).abs() < rat(1, 100));
        let pts = semibipartite_curve(30, &[rat(1, 10), rat(1, 3), rat(1, 2), rat(9, 10)]).unwrap();
        for p in pts {
            assert!(p.in_unit_box());
            assert!(p.y * rat_int(binom(30, 3)) <= rat(2 * 27_000, 27));
        }
    }

    #[test]
    fn k4_blow_ups() {
        let k4 = Hypergraph::complete(3, 4);
        let pts = blowup_points(&k4, &[1, 2, 3, 4, 5], "blowup(1)", 10_000).unwrap();
        assert_eq!((pts[0].x.clone(), pts[0].y.clone()), (rat(1, 1), rat(1, 1)));
        let at20 = &pts[4];
        assert_eq!(at20.n, Some(20));
        assert_eq!(at20.y, rat(4 * 125, 1140));
        let lim = pts.last().unwrap();
        assert_eq!((lim.x.clone(), lim.y.clone(), lim.n), (rat(3, 4), rat(3, 8), None));
        // Shadow density (v−1)m/(vm−1) falls towards its limit.
        let xs: Vec<Rational> = (1..=20).map(|m| blowup_point(&k4, m, "b").unwrap().x).collect();
        assert!(xs.windows(2).all(|w| w[0] > w[1]) && xs.iter().all(|x| *x > rat(3, 4)));
    }
}
