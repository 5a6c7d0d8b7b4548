use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lagrange::design_lagrangian_big;
use crate::num::serde_big;
use crate::num::{rat, Rational};

/// Parameters of the configurations G_1, …, G_t at their true magnitudes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub t: usize,
    #[serde(with = "serde_big::biguint")]
    pub q: BigUint,
    #[serde(with = "serde_big::biguint_vec")]
    pub s: Vec<BigUint>,
    #[serde(with = "serde_big::biguint_vec")]
    pub k: Vec<BigUint>,
    /// The lower bound actually used for Q (after raising, in raise-c mode).
    #[serde(rename = "C", with = "serde_big::biguint")]
    pub c: BigUint,
    #[serde(rename = "Q", with = "serde_big::biguint")]
    pub big_q: BigUint,
    #[serde(with = "serde_big::biguint_vec")]
    pub n: Vec<BigUint>,
    #[serde(with = "serde_big::rational")]
    pub lambda_t: Rational,
    /// The known terms 2k_t³ and 3⁸ of the lower bound on C. The Wilson thresholds are not known.
    #[serde(with = "serde_big::biguint_vec")]
    pub c_lower_terms: Vec<BigUint>,
    pub raise_c: bool,
}

/// s_1 = s1, s_{i+1} = Π_{j≤i} s_j(2s_j − 1) + 1. Checks that the moduli s_i(2s_i − 1) are
/// pairwise coprime.
pub fn derive_s_sequence(t: usize, q: &BigUint, s1: &BigUint) -> Result<Vec<BigUint>> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    if q.is_zero() || s1.is_zero() || !(s1 % q).is_zero() {
        return Err(Error::InvalidArgument(format!("s1 = {s1} must be a positive multiple of q = {q}")));
    }
    let mut s = vec![s1.clone()];
    let mut prod = BigUint::one();
    while s.len() < t {
        prod *= modulus(s.last().unwrap());
        s.push(&prod + 1u32);
    }
    let moduli: Vec<BigUint> = s.iter().map(modulus).collect();
    for i in 0..moduli.len() {
        for j in i + 1..moduli.len() {
            if !moduli[i].gcd(&moduli[j]).is_one() {
                return Err(Error::InvariantViolation(format!("moduli {} and {} share a factor", moduli[i], moduli[j])));
            }
        }
    }
    Ok(s)
}

/// s(2s − 1) = k(k − 1)/2 with k = 2s.
fn modulus(s: &BigUint) -> BigUint {
    s * (s * 2u32 - 1u32)
}

/// The minimal even Q ≥ C with Q/2 ≡ s_i² (mod s_i(2s_i − 1)) for every i.
pub fn solve_q(s: &[BigUint], c: &BigUint) -> Result<BigUint> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for si in s {
        let mi = BigInt::from(modulus(si));
        let ri = BigInt::from(si * si) % &mi;
        // x + m·y ≡ ri (mod mi)
        let e = m.extended_gcd(&mi);
        if !e.gcd.is_one() {
            return Err(Error::InvariantViolation(format!("modulus {mi} is not coprime to {m}")));
        }
        let y = ((&ri - &x) * e.x).mod_floor(&mi);
        x += &m * y;
        m *= &mi;
        x = x.mod_floor(&m);
    }
    // Smallest x' ≡ x (mod m) with 2x' ≥ C.
    let half = BigInt::from(c.div_ceil(&BigUint::from(2u32)));
    if x < half {
        let steps = (&half - &x).div_ceil(&m);
        x += steps * &m;
    }
    let big_q = (x * 2u32).to_biguint().expect("non-negative");
    for si in s {
        if !congruence_holds(&big_q, &(si * 2u32)) {
            return Err(Error::InvariantViolation(format!("Q = {big_q} misses the congruence for s = {si}")));
        }
    }
    Ok(big_q)
}

/// Q ≡ k²/2 (mod k(k − 1)).
pub fn congruence_holds(big_q: &BigUint, k: &BigUint) -> bool {
    if k < &BigUint::from(2u32) || (k * k).is_odd() {
        return false;
    }
    let m = k * (k - 1u32);
    big_q % &m == (k * k / 2u32) % &m
}

/// λ_t = (1/6)(1 − 1/Q).
pub fn lambda_t(big_q: &BigUint) -> Result<Rational> {
    if big_q.is_zero() {
        return Err(Error::InvalidArgument("Q must be positive".into()));
    }
    let qq = Rational::from_integer(BigInt::from(big_q.clone()));
    Ok((Rational::one() - Rational::one() / qq) / rat(6, 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaCheck {
    #[serde(with = "serde_big::rational")]
    pub value: Rational,
    /// Q ≥ 16, under which λ_t ∈ [5/32, 1/6) is claimed.
    pub hypothesis_holds: bool,
    pub in_interval: bool,
}

pub fn lambda_interval_check(big_q: &BigUint) -> Result<LambdaCheck> {
    let value = lambda_t(big_q)?;
    let in_interval = value >= rat(5, 32) && value < rat(1, 6);
    Ok(LambdaCheck { value, hypothesis_holds: *big_q >= BigUint::from(16u32), in_interval })
}

/// Builds FamilyParams. With `raise_c`, C is raised to max{C, 2k_t³, 3⁸}.
pub fn construct_params(
    t: usize,
    q: &BigUint,
    c: &BigUint,
    s1: Option<&BigUint>,
    raise_c: bool,
) -> Result<FamilyParams> {
    if c.is_zero() {
        return Err(Error::InvalidArgument("C must be at least 1".into()));
    }
    let s = derive_s_sequence(t, q, s1.unwrap_or(q))?;
    let k: Vec<BigUint> = s.iter().map(|x| x * 2u32).collect();
    let kt = k.last().unwrap();
    let c_lower_terms = vec![kt.pow(3) * 2u32, BigUint::from(6561u32)];
    let c_used = if raise_c { c_lower_terms.iter().chain([c]).max().unwrap().clone() } else { c.clone() };
    let big_q = solve_q(&s, &c_used)?;
    let n = k.iter().map(|ki| &big_q * (ki + 1u32)).collect();
    Ok(FamilyParams {
        t,
        q: q.clone(),
        s,
        k,
        c: c_used,
        lambda_t: lambda_t(&big_q)?,
        big_q,
        n,
        c_lower_terms,
        raise_c,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityRow {
    pub i: usize,
    pub q_divides_n: bool,
    pub k_minus_1_divides_n_minus_1: bool,
    pub pair_count_divides: bool,
    pub q_times_k_plus_1_is_n: bool,
    pub congruence: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    pub rows: Vec<DivisibilityRow>,
    pub q_even: bool,
    pub q_at_least_c: bool,
    pub n_increasing: bool,
    pub violations: Vec<String>,
}

impl DivisibilityReport {
    pub fn all_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks q | n_i, (k_i − 1) | (n_i − 1), k_i(k_i − 1) | n_i(n_i − 1), n_i = Q(k_i + 1), the
/// congruence on Q, parity of Q and Q ≥ C, all exactly.
pub fn verify_divisibility(p: &FamilyParams) -> DivisibilityReport {
    let mut violations = Vec::new();
    let mut rows = Vec::new();
    let len = p.s.len().min(p.k.len()).min(p.n.len());
    if len != p.t || p.s.len() != p.t || p.k.len() != p.t || p.n.len() != p.t {
        violations.push(format!("list lengths do not match t = {}", p.t));
    }
    for i in 0..len {
        let (ki, ni) = (&p.k[i], &p.n[i]);
        let row = DivisibilityRow {
            i: i + 1,
            q_divides_n: !p.q.is_zero() && (ni % &p.q).is_zero(),
            k_minus_1_divides_n_minus_1: *ki > BigUint::one()
                && !ni.is_zero()
                && ((ni - 1u32) % (ki - 1u32)).is_zero(),
            pair_count_divides: *ki > BigUint::one() && !ni.is_zero() && ((ni * (ni - 1u32)) % (ki * (ki - 1u32))).is_zero(),
            q_times_k_plus_1_is_n: &p.big_q * (ki + 1u32) == *ni,
            congruence: congruence_holds(&p.big_q, ki),
        };
        let checks = [
            (row.q_divides_n, "q | n"),
            (row.k_minus_1_divides_n_minus_1, "(k-1) | (n-1)"),
            (row.pair_count_divides, "k(k-1) | n(n-1)"),
            (row.q_times_k_plus_1_is_n, "n = Q(k+1)"),
            (row.congruence, "Q = k^2/2 mod k(k-1)"),
        ];
        for (ok, what) in checks {
            if !ok {
                violations.push(format!("i = {}: {what} fails", i + 1));
            }
        }
        rows.push(row);
    }
    let q_even = p.big_q.is_even();
    if !q_even {
        violations.push(format!("Q = {} is odd", p.big_q));
    }
    let q_at_least_c = p.big_q >= p.c;
    if !q_at_least_c {
        violations.push(format!("Q = {} < C = {}", p.big_q, p.c));
    }
    let n_increasing = p.n.windows(2).all(|w| w[0] < w[1]);
    if !n_increasing {
        violations.push("n_i not strictly increasing".into());
    }
    DivisibilityReport { rows, q_even, q_at_least_c, n_increasing, violations }
}

/// design_lagrangian(n_i, k_i, s_i) for every i, as exact rationals.
pub fn design_lagrangians(p: &FamilyParams) -> Vec<Rational> {
    p.n.iter()
        .zip(&p.k)
        .zip(&p.s)
        .map(|((n, k), s)| {
            design_lagrangian_big(&BigInt::from(n.clone()), &BigInt::from(k.clone()), &BigInt::from(s.clone())).value
        })
        .collect()
}

/// (n_i − 1)/(k_i − 1) − (n_{i+1} − 1)/(k_{i+1} − 1) > Q/k_i², for i = 1..t−1.
pub fn clique_gap_holds(p: &FamilyParams) -> Vec<bool> {
    let r = |x: &BigUint| Rational::from_integer(BigInt::from(x.clone()));
    let qq = r(&p.big_q);
    (0..p.t.saturating_sub(1))
        .map(|i| {
            let one = Rational::one();
            let a = (r(&p.n[i]) - &one) / (r(&p.k[i]) - &one);
            let b = (r(&p.n[i + 1]) - &one) / (r(&p.k[i + 1]) - &one);
            let lhs = a - b;
            lhs > &qq / (r(&p.k[i]) * r(&p.k[i]))
        })
        .collect()
}

/// Converts to u64 where the toy layer needs machine integers.
pub fn small(x: &BigUint) -> Option<u64> {
    x.to_u64()
}

/// Brute-force minimal even Q ≥ C, for cross-checking [`solve_q`] on small moduli.
pub fn scan_q(s: &[u64], c: u64, limit: u64) -> Option<u64> {
    (c..=limit).filter(|q| q % 2 == 0).find(|&q| {
        s.iter().all(|&si| {
            let m = si * (2 * si - 1);
            (q / 2) % m == (si * si) % m
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn s_sequences() {
        assert_eq!(derive_s_sequence(1, &b(3), &b(3)).unwrap(), vec![b(3)]);
        assert_eq!(derive_s_sequence(2, &b(3), &b(3)).unwrap(), vec![b(3), b(16)]);
        assert_eq!(derive_s_sequence(3, &b(3), &b(3)).unwrap(), vec![b(3), b(16), b(3 * 5 * 16 * 31 + 1)]);
        assert!(derive_s_sequence(2, &b(3), &b(4)).is_err());
        assert!(derive_s_sequence(0, &b(3), &b(3)).is_err());
    }

    #[test]
    fn q_examples() {
        assert_eq!(solve_q(&[b(3)], &b(1)).unwrap(), b(18));
        assert_eq!(solve_q(&[b(3)], &b(100)).unwrap(), b(108));
        assert_eq!(solve_q(&[b(3)], &b(108)).unwrap(), b(108));
        assert_eq!(solve_q(&[b(3)], &b(109)).unwrap(), b(138));
        let q2 = solve_q(&[b(3), b(16)], &b(1)).unwrap();
        assert_eq!(Some(small(&q2).unwrap()), scan_q(&[3, 16], 1, 1_000_000));
    }

    #[test]
    fn solver_matches_scan() {
        for s1 in [1u64, 2, 3, 4, 5, 6] {
            let s = derive_s_sequence(2, &b(1), &b(s1)).unwrap();
            let ss: Vec<u64> = s.iter().map(|x| small(x).unwrap()).collect();
            for c in [1u64, 7, 50, 333] {
                let got = small(&solve_q(&s, &b(c)).unwrap()).unwrap();
                assert_eq!(Some(got), scan_q(&ss, c, 10_000_000), "s={ss:?} C={c}");
            }
        }
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_t(&b(16)).unwrap(), rat(5, 32));
        assert_eq!(lambda_t(&b(18)).unwrap(), rat(17, 108));
        let c = lambda_interval_check(&b(16)).unwrap();
        assert!(c.hypothesis_holds && c.in_interval);
        assert!(!lambda_interval_check(&b(15)).unwrap().in_interval);
        let huge = BigUint::from(10u32).pow(40);
        assert!(lambda_interval_check(&huge).unwrap().in_interval);
    }

    #[test]
    fn params_and_divisibility() {
        let p = construct_params(1, &b(3), &b(1), None, false).unwrap();
        assert_eq!(p.big_q, b(18));
        assert_eq!(p.n, vec![b(126)]);
        assert!(verify_divisibility(&p).all_pass());
        for t in 1..=3 {
            let p = construct_params(t, &b(3), &b(1), None, false).unwrap();
            assert!(verify_divisibility(&p).all_pass());
            for l in design_lagrangians(&p) {
                assert_eq!(l, p.lambda_t);
            }
            assert!(clique_gap_holds(&p).iter().all(|&x| x));
        }
        let pf = construct_params(2, &b(3), &b(1), None, true).unwrap();
        assert!(pf.big_q >= b(2 * 32 * 32 * 32) && pf.big_q >= b(6561));
        let mut odd = p.clone();
        odd.big_q = b(19);
        let r = verify_divisibility(&odd);
        assert!(!r.q_even && !r.all_pass());
    }

    #[test]
    fn params_json_round_trip() {
        let p = construct_params(3, &b(3), &b(1), None, false).unwrap();
        let j = serde_json::to_string(&p).unwrap();
        assert!(j.contains("\"Q\":\""));
        assert_eq!(serde_json::from_str::<FamilyParams>(&j).unwrap(), p);
    }
}
