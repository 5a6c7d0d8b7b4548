//! Hypergraph Lagrangians: evaluation, gradients, multi-start simplex maximization and
//! the exact certificates attached to almost-complete 3-graphs.
//!
//! Floating point is confined to the optimizer. Closed forms, identities and the
//! concavity bound's equality case are checked in exact rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcore::Hypergraph;
use crate::num::{rat_int, Rational};

/// A point of the standard simplex Δ_{n−1}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexPoint {
    weights: Vec<f64>,
}

impl SimplexPoint {
    /// Clamps negatives to zero and renormalizes to sum 1.
    pub fn new(mut weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidSize("simplex point needs at least one coordinate".into()));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Precondition("non-finite weight".into()));
        }
        for w in weights.iter_mut() {
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let s: f64 = weights.iter().sum();
        if s <= 0.0 {
            return Err(Error::Precondition("weights sum to zero".into()));
        }
        for w in weights.iter_mut() {
            *w /= s;
        }
        Ok(SimplexPoint { weights })
    }

    pub fn uniform(n: usize) -> Self {
        SimplexPoint { weights: vec![1.0 / n as f64; n] }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn linf_distance_to_uniform(&self) -> f64 {
        let u = 1.0 / self.weights.len() as f64;
        self.weights.iter().map(|w| (w - u).abs()).fold(0.0, f64::max)
    }
}

/// A multilinear objective on the simplex.
pub trait Objective: Sync {
    fn dim(&self) -> usize;
    fn edge_count(&self) -> u128;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64], out: &mut [f64]);
    fn value_exact(&self, x: &[Rational]) -> Rational;
}

impl Objective for Hypergraph {
    fn dim(&self) -> usize {
        self.vertex_count()
    }

    fn edge_count(&self) -> u128 {
        self.len() as u128
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.edges().map(|e| e.iter().map(|&v| x[v]).product::<f64>()).sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|g| *g = 0.0);
        if self.uniformity() == 3 {
            for e in self.edges() {
                let (a, b, c) = (e[0], e[1], e[2]);
                out[a] += x[b] * x[c];
                out[b] += x[a] * x[c];
                out[c] += x[a] * x[b];
            }
            return;
        }
        for e in self.edges() {
            for (i, &v) in e.iter().enumerate() {
                out[v] += e.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &u)| x[u]).product::<f64>();
            }
        }
    }

    fn value_exact(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for e in self.edges() {
            let mut p = Rational::one();
            for &v in e {
                p *= &x[v];
            }
            acc += p;
        }
        acc
    }
}

/// K³_n minus a set of removed triples, evaluated without listing the complete graph:
/// L = e₃(x) − L_removed(x) with e₃ = (p₁³ − 3p₁p₂ + 2p₃)/6.
pub struct CliqueComplement<'a> {
    n: usize,
    removed: &'a Hypergraph,
}

impl<'a> CliqueComplement<'a> {
    pub fn new(removed: &'a Hypergraph) -> Result<Self> {
        if removed.uniformity() != 3 {
            return Err(Error::InvalidUniformity("complement objective expects a 3-graph".into()));
        }
        Ok(CliqueComplement { n: removed.vertex_count(), removed })
    }
}

impl Objective for CliqueComplement<'_> {
    fn dim(&self) -> usize {
        self.n
    }

    fn edge_count(&self) -> u128 {
        crate::num::binom(self.n as u64, 3) - self.removed.len() as u128
    }

    fn value(&self, x: &[f64]) -> f64 {
        let (p1, p2, p3) = power_sums(x);
        (p1 * p1 * p1 - 3.0 * p1 * p2 + 2.0 * p3) / 6.0 - self.removed.value(x)
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        self.removed.gradient(x, out);
        let (p1, p2, _) = power_sums(x);
        for (g, &xi) in out.iter_mut().zip(x) {
            let s1 = p1 - xi;
            let s2 = p2 - xi * xi;
            *g = 0.5 * (s1 * s1 - s2) - *g;
        }
    }

    fn value_exact(&self, x: &[Rational]) -> Rational {
        let mut p = [Rational::zero(), Rational::zero(), Rational::zero()];
        for xi in x {
            let sq = xi * xi;
            p[2] += &sq * xi;
            p[1] += sq;
            p[0] += xi;
        }
        let e3 = (&p[0] * &p[0] * &p[0] - rat_int(3) * &p[0] * &p[1] + rat_int(2) * &p[2]) / rat_int(6);
        e3 - self.removed.value_exact(x)
    }
}

fn power_sums(x: &[f64]) -> (f64, f64, f64) {
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for &v in x {
        a += v;
        b += v * v;
        c += v * v * v;
    }
    (a, b, c)
}

/// L_G(x) over floats.
pub fn evaluate(g: &Hypergraph, x: &[f64]) -> Result<f64> {
    check_len(g.vertex_count(), x.len())?;
    Ok(g.value(x))
}

/// L_G(x) over exact rationals.
pub fn evaluate_exact(g: &Hypergraph, x: &[Rational]) -> Result<Rational> {
    check_len(g.vertex_count(), x.len())?;
    Ok(g.value_exact(x))
}

/// ∂L_G/∂x_i = L_i(x), the link polynomial of i.
pub fn gradient(g: &Hypergraph, x: &[f64]) -> Result<Vec<f64>> {
    check_len(g.vertex_count(), x.len())?;
    let mut out = vec![0.0; x.len()];
    g.gradient(x, &mut out);
    Ok(out)
}

pub fn gradient_exact(g: &Hypergraph, x: &[Rational]) -> Result<Vec<Rational>> {
    check_len(g.vertex_count(), x.len())?;
    let mut out = vec![Rational::zero(); x.len()];
    for e in g.edges() {
        for (i, &v) in e.iter().enumerate() {
            let mut p = Rational::one();
            for (j, &u) in e.iter().enumerate() {
                if j != i {
                    p *= &x[u];
                }
            }
            out[v] += p;
        }
    }
    Ok(out)
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(Error::LengthMismatch { expected, got })
    } else {
        Ok(())
    }
}

/// Euclidean projection onto the simplex by sorting and thresholding.
pub fn project_simplex(v: &[f64], out: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cum += uj;
        let t = (cum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    for (o, &vi) in out.iter_mut().zip(v) {
        *o = (vi - theta).max(0.0);
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaximizeConfig {
    pub starts: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub threads: usize,
}

impl Default for MaximizeConfig {
    fn default() -> Self {
        MaximizeConfig { starts: 32, tol: 1e-10, max_iter: 100_000, seed: 0, threads: 1 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimizerReport {
    pub best_value: f64,
    pub best_point: SimplexPoint,
    pub starts: usize,
    pub iterations: usize,
    pub converged: bool,
    pub first_order_residual: f64,
}

struct StartResult {
    value: f64,
    point: Vec<f64>,
    iterations: usize,
    converged: bool,
    residual: f64,
}

/// Multi-start projected gradient ascent. Start 0 is the uniform point; the others are
/// Dirichlet(1) draws from a ChaCha stream keyed by the start index.
pub fn maximize<O: Objective + ?Sized>(g: &O, config: &MaximizeConfig) -> OptimizerReport {
    let n = g.dim();
    assert!(n >= 1, "maximize needs at least one vertex");
    let starts = config.starts.max(1);
    let threads = config.threads.max(1).min(starts);
    let run = |i: usize| -> StartResult {
        let x0 = if i == 0 {
            vec![1.0 / n as f64; n]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            dirichlet_point(&mut rng, n)
        };
        ascend(g, x0, config)
    };
    let results: Vec<StartResult> = if threads == 1 {
        (0..starts).map(run).collect()
    } else {
        let mut slots: Vec<Option<StartResult>> = (0..starts).map(|_| None).collect();
        std::thread::scope(|s| {
            let chunks: Vec<_> = slots.chunks_mut(starts.div_ceil(threads)).enumerate().collect();
            let chunk_len = starts.div_ceil(threads);
            for (c, chunk) in chunks {
                let run = &run;
                s.spawn(move || {
                    for (j, slot) in chunk.iter_mut().enumerate() {
                        *slot = Some(run(c * chunk_len + j));
                    }
                });
            }
        });
        slots.into_iter().map(|s| s.expect("every start ran")).collect()
    };
    let iterations = results.iter().map(|r| r.iterations).sum();
    let best = results
        .into_iter()
        .reduce(|a, b| {
            if b.value > a.value || (b.value == a.value && lex_less(&b.point, &a.point)) {
                b
            } else {
                a
            }
        })
        .expect("at least one start");
    OptimizerReport {
        best_value: best.value,
        best_point: SimplexPoint { weights: best.point },
        starts,
        iterations,
        converged: best.converged,
        first_order_residual: best.residual,
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

fn dirichlet_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= s);
    x
}

fn ascend<O: Objective + ?Sized>(g: &O, mut x: Vec<f64>, config: &MaximizeConfig) -> StartResult {
    let n = x.len();
    let mut grad = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut f = g.value(&x);
    g.gradient(&x, &mut grad);
    let mut step = 1.0f64;
    // Largest step that last passed a decisive sufficient-increase test.
    let mut trusted = 1.0f64;
    let mut iterations = 0;
    let mut residual = kkt_residual(&x, &grad, &mut trial, &mut y);
    while residual >= config.tol && iterations < config.max_iter {
        iterations += 1;
        // Value differences below this are rounding noise.
        let noise = 1e-14 * f.abs().max(f64::MIN_POSITIVE);
        let mut accepted = false;
        let mut decisive = false;
        while step > 1e-18 {
            for i in 0..n {
                trial[i] = x[i] + step * grad[i];
            }
            project_simplex(&trial, &mut y);
            let fy = g.value(&y);
            let (mut lin, mut sq) = (0.0, 0.0);
            for i in 0..n {
                let d = y[i] - x[i];
                lin += grad[i] * d;
                sq += d * d;
            }
            // Quadratic-model test: f(y) ≥ f(x) + ∇f·(y−x) − |y−x|²/(2t).
            let model = lin - sq / (2.0 * step);
            if model > noise {
                if fy - f >= model {
                    decisive = true;
                    accepted = true;
                    trusted = step;
                }
            } else if step <= trusted {
                accepted = fy >= f - noise;
            }
            if accepted {
                std::mem::swap(&mut x, &mut y);
                f = fy;
                break;
            }
            step = if model <= noise && step > trusted { trusted } else { step * 0.5 };
        }
        if !accepted {
            break;
        }
        g.gradient(&x, &mut grad);
        residual = kkt_residual(&x, &grad, &mut trial, &mut y);
        if decisive {
            step = (step * 2.0).min(1e6);
        }
    }
    StartResult { value: f, point: x, iterations, converged: residual < config.tol, residual }
}

/// ‖proj(x + ∇L) − x‖_∞, zero exactly at KKT points.
fn kkt_residual(x: &[f64], grad: &[f64], trial: &mut [f64], y: &mut [f64]) -> f64 {
    for i in 0..x.len() {
        trial[i] = x[i] + grad[i];
    }
    project_simplex(trial, y);
    x.iter().zip(y.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// (1/6)(1 − (k+1)/n + (k−2s)/n²) with a flag for the hypothesis n ≥ 18k + 3⁷s³.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignLagrangian {
    #[serde(with = "crate::num::serde_big::rational")]
    pub value: Rational,
    pub hypothesis_holds: bool,
}

pub fn design_lagrangian(n: u64, k: u64, s: u64) -> DesignLagrangian {
    design_lagrangian_big(&BigInt::from(n), &BigInt::from(k), &BigInt::from(s))
}

/// [`design_lagrangian`] for arbitrary-precision parameters.
pub fn design_lagrangian_big(n: &BigInt, k: &BigInt, s: &BigInt) -> DesignLagrangian {
    let nn = Rational::from_integer(n.clone());
    let kk = Rational::from_integer(k.clone());
    let ss = Rational::from_integer(s.clone());
    let value = (Rational::one() - (&kk + Rational::one()) / &nn + (&kk - ss * rat_int(2)) / (&nn * &nn)) / rat_int(6);
    let hypothesis_holds = *n >= k * 18 + s.pow(3) * 2187;
    DesignLagrangian { value, hypothesis_holds }
}

/// Smallest n meeting n ≥ 18k + 3⁷s³.
pub fn design_hypothesis_threshold(k: u64, s: u64) -> u128 {
    18 * k as u128 + 2187 * (s as u128).pow(3)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConcavityReport {
    pub points_checked: usize,
    pub min_slack: f64,
    pub max_violation: f64,
    pub violations: usize,
    pub uniform_exact_equality: bool,
    pub hypothesis_holds: bool,
}

/// Slack guard for the floating-point side of the concavity check.
pub const CONCAVITY_GUARD: f64 = 1e-12;

/// Tests L(x) + (1/9)Σ(x_i − 1/n)² ≤ |G|/n³ at random simplex points, the uniform point
/// (exactly, where it is an equality) and every corner.
pub fn check_concavity_bound<O: Objective + ?Sized>(
    g: &O,
    n: u64,
    k: u64,
    s: u64,
    sample_count: usize,
    seed: u64,
) -> Result<ConcavityReport> {
    let dim = g.dim();
    if dim as u64 != n {
        return Err(Error::LengthMismatch { expected: n as usize, got: dim });
    }
    let rhs = g.edge_count() as f64 / (n as f64).powi(3);
    let u = 1.0 / n as f64;
    let slack_at = |x: &[f64]| -> f64 {
        let dev: f64 = x.iter().map(|xi| (xi - u) * (xi - u)).sum();
        rhs - g.value(x) - dev / 9.0
    };
    let mut min_slack = f64::INFINITY;
    let mut violations = 0;
    let mut record = |sl: f64| {
        min_slack = min_slack.min(sl);
        if sl < -CONCAVITY_GUARD {
            violations += 1;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sample_count {
        let x = dirichlet_point(&mut rng, dim);
        record(slack_at(&x));
    }
    let mut corner = vec![0.0; dim];
    for i in 0..dim {
        corner[i] = 1.0;
        record(slack_at(&corner));
        corner[i] = 0.0;
    }
    record(slack_at(&vec![u; dim]));
    let uq = Rational::new(BigInt::one(), BigInt::from(n));
    let exact_uniform = g.value_exact(&vec![uq.clone(); dim]);
    let exact_rhs = Rational::from_integer(BigInt::from(g.edge_count())) * &uq * &uq * &uq;
    Ok(ConcavityReport {
        points_checked: sample_count + dim + 1,
        min_slack,
        max_violation: (-min_slack).max(0.0),
        violations,
        uniform_exact_equality: exact_uniform == exact_rhs,
        hypothesis_holds: design_lagrangian(n, k, s).hypothesis_holds,
    })
}

/// For α_i ∈ [−1, α] summing to zero, checks L_G(α) ≤ (αn)³ exactly.
pub fn fact_cubic_bound(g: &Hypergraph, alpha_vec: &[Rational], alpha: &Rational) -> Result<bool> {
    check_len(g.vertex_count(), alpha_vec.len())?;
    let minus_one = -Rational::one();
    if alpha_vec.iter().any(|a| *a < minus_one || a > alpha) {
        return Err(Error::Precondition("every entry must lie in [-1, alpha]".into()));
    }
    let sum: Rational = alpha_vec.iter().sum();
    if !sum.is_zero() {
        return Err(Error::Precondition("entries must sum to zero".into()));
    }
    let lhs = g.value_exact(alpha_vec);
    let an = alpha * rat_int(g.vertex_count() as u64);
    Ok(lhs <= &an * &an * &an)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlowupBoundReport {
    pub edges: usize,
    pub vertices: usize,
    /// |H| / v(H)^r, which equals L_G at the block-size point.
    #[serde(with = "crate::num::serde_big::rational")]
    pub point_value: Rational,
    pub optimizer_value: f64,
    pub optimizer_bound_holds: bool,
    pub exact_bound_holds: Option<bool>,
}

/// Checks |H| ≤ λ(G)·v(H)^r for a blow-up H of G, given the block map V(H) → V(G).
pub fn blowup_bound_check(
    g: &Hypergraph,
    h: &Hypergraph,
    witness_map: &[usize],
    exact_lambda: Option<&Rational>,
    config: &MaximizeConfig,
) -> Result<BlowupBoundReport> {
    let r = g.uniformity();
    if h.uniformity() != r {
        return Err(Error::InvalidUniformity(format!("{} vs {}", h.uniformity(), r)));
    }
    check_len(h.vertex_count(), witness_map.len())?;
    let mut sizes = vec![0u64; g.vertex_count()];
    for &j in witness_map {
        if j >= g.vertex_count() {
            return Err(Error::Precondition(format!("invalid witness: block {j} is not a vertex of G")));
        }
        sizes[j] += 1;
    }
    let mut img = vec![0usize; r];
    for e in h.edges() {
        for (i, &v) in e.iter().enumerate() {
            img[i] = witness_map[v];
        }
        img.sort_unstable();
        if img.windows(2).any(|w| w[0] == w[1]) || !g.contains_sorted(&img) {
            return Err(Error::Precondition(format!("invalid witness: edge {e:?} does not map onto an edge")));
        }
    }
    let full: u128 = g.edges().map(|e| e.iter().map(|&j| sizes[j] as u128).product::<u128>()).sum();
    if full != h.len() as u128 {
        return Err(Error::Precondition(format!(
            "invalid witness: H has {} edges but the blow-up has {full}",
            h.len()
        )));
    }
    let v = h.vertex_count();
    let vr = Rational::from_integer(BigInt::from(v).pow(r as u32));
    let point_value = rat_int(h.len() as u64) / &vr;
    let report = maximize(g, config);
    let vr_f = (v as f64).powi(r as i32);
    let guard = 1e-9 * vr_f.max(1.0);
    let exact_bound_holds = exact_lambda.map(|lam| rat_int(h.len() as u64) <= lam * &vr);
    Ok(BlowupBoundReport {
        edges: h.len(),
        vertices: v,
        point_value,
        optimizer_value: report.best_value,
        optimizer_bound_holds: h.len() as f64 <= report.best_value * vr_f + guard,
        exact_bound_holds,
    })
}

/// True when `x` is non-negative and sums to one (exact simplex membership).
pub fn in_simplex_exact(x: &[Rational]) -> bool {
    x.iter().all(|v| !v.is_negative()) && x.iter().sum::<Rational>() == Rational::one()
}
