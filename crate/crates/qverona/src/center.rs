//! The center of the Veronese subring: the lattice M of central exponent
//! vectors, a brute-force centrality oracle, the y_k elements and
//! enumeration of central monomials.
//!
//! The lattice is
//!
//!   M = ( m Z^n + t Z (1, -1, 1, ...) ) intersect H_v
//!
//! where the alternating stride t is g = gcd(v, m) for odd n and m/g for
//! even n. Membership is tested by direct congruence rather than through a
//! stored basis of the intersection.

use crate::skew_ring::{
    degree_v_monomials, in_veronese, monos_commute, Monomial, RingParams, SkewElement,
};
use crate::QvError;

/// The subgroup M of H_v whose monomials span the center of the Laurent
/// Veronese ring.
#[derive(Debug, Clone)]
pub struct CenterLattice {
    params: RingParams,
    /// m e_1, ..., m e_n and the alternating vector scaled by the stride.
    /// These span the ambient lattice before intersecting with H_v.
    generators: Vec<Vec<i64>>,
}

impl CenterLattice {
    pub fn new(params: RingParams) -> Self {
        let n = params.n;
        let m = params.m as i64;
        let mut generators = Vec::with_capacity(n + 1);
        for i in 0..n {
            let mut v = vec![0i64; i];
            v.push(m);
            v.resize(n, 0);
            generators.push(v);
        }
        let stride = params.stride() as i64;
        generators.push(params.alternating().iter().map(|a| a * stride).collect());
        CenterLattice { params, generators }
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// s in M: s is congruent mod m Z^n to a stride multiple of the
    /// alternating vector, and its coordinate sum is a multiple of v.
    pub fn contains(&self, s: &[i64]) -> bool {
        assert_eq!(s.len(), self.params.n, "exponent vector length");
        let m = self.params.m as i64;
        let stride = self.params.stride() as i64;
        let sum: i64 = s.iter().sum();
        if sum.rem_euclid(self.params.v as i64) != 0 {
            return false;
        }
        let r = s[0].rem_euclid(m);
        if r % stride != 0 {
            return false;
        }
        s.iter().enumerate().all(|(i, &si)| {
            let want = if i % 2 == 0 { r } else { (-r).rem_euclid(m) };
            si.rem_euclid(m) == want
        })
    }
}

/// Lattice membership for monomials.
pub fn in_m(s: &Monomial, lattice: &CenterLattice) -> bool {
    lattice.contains(s.exps())
}

/// Necessary condition from the commutation witnesses x_i x_{i+1}^{vm-1}:
/// consecutive exponents sum to 0 mod m.
fn witness_reject(s: &Monomial, p: &RingParams) -> bool {
    let m = p.m as i64;
    s.exps().windows(2).any(|w| (w[0] + w[1]).rem_euclid(m) != 0)
}

/// Brute-force centrality of a single monomial in the Veronese ring:
/// commutation against every monomial of total degree v.
pub fn monomial_is_central(s: &Monomial, p: &RingParams) -> bool {
    if witness_reject(s, p) {
        return false;
    }
    degree_v_monomials(1, p).iter().all(|t| monos_commute(s, t, p))
}

/// Commutation oracle, independent of the lattice description: true iff `a`
/// commutes with the full degree-v generating set. A Z^n-graded element
/// commutes iff each of its monomials does.
pub fn is_central(a: &SkewElement, p: &RingParams) -> Result<bool, QvError> {
    if !in_veronese(a, p) {
        return Err(QvError::NotInVeronese);
    }
    Ok(a.terms().all(|(mono, _)| monomial_is_central(mono, p)))
}

/// The element y_k = q^{-floor(n/2) k(k+1)/2} x^{(k, m-k, k, m-k, ...)},
/// for 0 <= k <= m.
pub fn y_element(k: u32, p: &RingParams) -> Result<SkewElement, QvError> {
    if k > p.m {
        return Err(QvError::OutOfRange(k as i64));
    }
    let exps: Vec<i64> = (0..p.n)
        .map(|i| if i % 2 == 0 { k as i64 } else { (p.m - k) as i64 })
        .collect();
    let half_n = (p.n / 2) as i64;
    let kk = k as i64;
    let scalar = p.q_pow(-half_n * kk * (kk + 1) / 2);
    Ok(SkewElement::monomial(Monomial::new(exps), scalar))
}

/// All s in H_v^+ with total degree <= bound and s in M, ordered by total
/// degree then lexicographically.
pub fn central_monomials_up_to(bound: i64, p: &RingParams) -> Vec<Monomial> {
    let lattice = CenterLattice::new(*p);
    let mut out = Vec::new();
    let mut d = 0i64;
    while d <= bound {
        for mono in crate::skew_ring::monomials_of_degree(p.n, d) {
            if in_m(&mono, &lattice) {
                out.push(mono);
            }
        }
        d += p.v as i64;
    }
    out
}

/// All monomials in H_v^+ of total degree <= bound (central or not), ordered
/// by total degree then lexicographically.
pub fn veronese_monomials_up_to(bound: i64, p: &RingParams) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut d = 0i64;
    while d <= bound {
        out.extend(crate::skew_ring::monomials_of_degree(p.n, d));
        d += p.v as i64;
    }
    out
}
