//! The q-skew polynomial ring k_q[x_1, ..., x_n], its Laurent localization
//! and the Veronese grading.
//!
//! Monomials are kept in normal order x_1^{s_1} ... x_n^{s_n}; the scalar
//! picked up when multiplying two normal-ordered monomials is computed by the
//! closed exponent formula
//!
//!   x^s x^t = q^{sum_{i<j} s_j t_i} x^{s+t}
//!
//! rather than by generator-by-generator rewriting.

use num_integer::Integer;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

use crate::cyclo::CycScalar;
use crate::QvError;

/// Parameters (n, m, v) of a Veronese subring of a q-skew polynomial ring,
/// with the quantities derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RingParams {
    /// Number of variables, n >= 2.
    pub n: usize,
    /// Multiplicative order of q, m >= 2.
    pub m: u32,
    /// Veronese index, v >= 1.
    pub v: u32,
}

impl RingParams {
    pub fn new(n: usize, m: u32, v: u32) -> Result<Self, QvError> {
        if n < 2 {
            return Err(QvError::InvalidParams(format!("n must be >= 2, got {}", n)));
        }
        if m < 2 {
            return Err(QvError::InvalidParams(format!("m must be >= 2, got {}", m)));
        }
        if v < 1 {
            return Err(QvError::InvalidParams(format!("v must be >= 1, got {}", v)));
        }
        Ok(RingParams { n, m, v })
    }

    /// g = gcd(v, m).
    pub fn g(&self) -> u32 {
        self.v.gcd(&self.m)
    }

    /// Rank of the Veronese ring over the graded fraction field of its
    /// center: m^{n-1} for odd n, m^n / g^2 for even n.
    pub fn w(&self) -> u64 {
        let m = self.m as u64;
        if self.n % 2 == 1 {
            m.pow(self.n as u32 - 1)
        } else {
            let g = self.g() as u64;
            m.pow(self.n as u32) / (g * g)
        }
    }

    /// Multiplier of the alternating vector in the center lattice:
    /// g for odd n, m/g for even n.
    pub fn stride(&self) -> u32 {
        if self.n % 2 == 1 {
            self.g()
        } else {
            self.m / self.g()
        }
    }

    /// The alternating vector (1, -1, 1, -1, ...).
    pub fn alternating(&self) -> Vec<i64> {
        (0..self.n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect()
    }

    /// Upper bound vm/g of the last normal-form box coordinate.
    pub fn last_box(&self) -> i64 {
        (self.v as i64) * (self.m as i64) / (self.g() as i64)
    }

    pub fn q(&self) -> CycScalar {
        CycScalar::q(self.m)
    }

    pub fn q_pow(&self, e: i64) -> CycScalar {
        CycScalar::q_pow(self.m, e)
    }
}

/// An exponent vector in Z^n, denoting the normal-ordered monomial
/// x_1^{s_1} ... x_n^{s_n}. Negative entries are allowed (Laurent ring);
/// operations restricted to N^n state so.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<i64>,
}

impl Monomial {
    pub fn new(exps: Vec<i64>) -> Self {
        Monomial { exps }
    }

    pub fn unit(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    /// x_i^k for a 1-based variable index.
    pub fn var_pow(n: usize, i: usize, k: i64) -> Self {
        assert!(i >= 1 && i <= n);
        let mut exps = vec![0; n];
        exps[i - 1] = k;
        Monomial { exps }
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total_degree(&self) -> i64 {
        self.exps.iter().sum()
    }

    pub fn is_polynomial(&self) -> bool {
        self.exps.iter().all(|&e| e >= 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Monomial { exps: self.exps.iter().map(|e| -e).collect() }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.iter().all(|&e| e == 0) {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
            first = false;
        }
        Ok(())
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.exps.len()))?;
        for e in &self.exps {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

/// q-exponent picked up when normal-ordering x^s x^t: sum over i < j of
/// s_j t_i.
pub fn reorder_exponent(s: &Monomial, t: &Monomial) -> i64 {
    let mut total = 0i64;
    let mut t_prefix = 0i64;
    for (sj, tj) in s.exps.iter().zip(&t.exps) {
        total += sj * t_prefix;
        t_prefix += tj;
    }
    total
}

/// Normal-ordered product of two monomials: the q-power scalar and the
/// exponent sum.
pub fn mono_mul(a: &Monomial, b: &Monomial, p: &RingParams) -> (CycScalar, Monomial) {
    (p.q_pow(reorder_exponent(a, b)), a.add(b))
}

/// Whether x^s and x^t commute; pure integer arithmetic on q-exponents.
pub fn monos_commute(s: &Monomial, t: &Monomial, p: &RingParams) -> bool {
    let m = p.m as i64;
    (reorder_exponent(s, t) - reorder_exponent(t, s)).rem_euclid(m) == 0
}

/// A finite formal sum of scalar-weighted normal-ordered monomials, in
/// canonical form: no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SkewElement {
    terms: BTreeMap<Monomial, CycScalar>,
}

impl SkewElement {
    pub fn zero() -> Self {
        SkewElement { terms: BTreeMap::new() }
    }

    pub fn one(p: &RingParams) -> Self {
        Self::monomial(Monomial::unit(p.n), CycScalar::one(p.m))
    }

    pub fn monomial(m: Monomial, c: CycScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SkewElement { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, CycScalar)>) -> Result<Self, QvError> {
        let mut out = SkewElement::zero();
        for (m, c) in it {
            out.add_term(m, c)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&CycScalar> {
        self.terms.get(m)
    }

    /// The single (monomial, coefficient) pair, when there is exactly one.
    pub fn as_single(&self) -> Option<(&Monomial, &CycScalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: CycScalar) -> Result<(), QvError> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = old.add(&c)?;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, QvError> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QvError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SkewElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &CycScalar) -> Result<Self, QvError> {
        if c.is_zero() {
            return Ok(SkewElement::zero());
        }
        let mut terms = BTreeMap::new();
        for (m, a) in &self.terms {
            let s = a.mul(c)?;
            if !s.is_zero() {
                terms.insert(m.clone(), s);
            }
        }
        Ok(SkewElement { terms })
    }

    /// Bilinear extension of `mono_mul`.
    pub fn mul(&self, other: &Self, p: &RingParams) -> Result<Self, QvError> {
        let mut out = SkewElement::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (q, m) = mono_mul(ma, mb, p);
                out.add_term(m, ca.mul(cb)?.mul(&q)?)?;
            }
        }
        Ok(out)
    }

    /// Product in the commutative model: exponent addition with no q-twist.
    /// Used for derivations that live in the ordinary polynomial ring.
    pub fn mul_plain(&self, other: &Self) -> Result<Self, QvError> {
        let mut out = SkewElement::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.add(mb), ca.mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32, p: &RingParams) -> Result<Self, QvError> {
        let mut acc = SkewElement::one(p);
        for _ in 0..e {
            acc = acc.mul(self, p)?;
        }
        Ok(acc)
    }

    /// All monomials have nonnegative exponents.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.is_polynomial())
    }

    /// Minimum total degree over the support; None for zero.
    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.total_degree()).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// The homogeneous component of minimal total degree.
    pub fn leading_component(&self) -> SkewElement {
        match self.min_degree() {
            None => SkewElement::zero(),
            Some(d) => SkewElement {
                terms: self
                    .terms
                    .iter()
                    .filter(|(m, _)| m.total_degree() == d)
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .collect(),
            },
        }
    }
}

impl Serialize for SkewElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exps: &'a Monomial,
            coeff: &'a CycScalar,
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&Term { exps: m, coeff: c })?;
        }
        seq.end()
    }
}

impl fmt::Display for SkewElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*{}", c, m)?;
        }
        Ok(())
    }
}

/// True iff every monomial of `a` has total degree divisible by v.
pub fn in_veronese(a: &SkewElement, p: &RingParams) -> bool {
    a.terms.keys().all(|m| m.total_degree().rem_euclid(p.v as i64) == 0)
}

/// All monomials in N^n of total degree d, in ascending lexicographic order.
pub fn monomials_of_degree(n: usize, d: i64) -> Vec<Monomial> {
    assert!(d >= 0);
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(cur: &mut Vec<i64>, i: usize, rest: i64, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = rest;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for k in 0..=rest {
            cur[i] = k;
            rec(cur, i + 1, rest - k, out);
        }
        cur[i] = 0;
    }
    rec(&mut cur, 0, d, &mut out);
    out
}

/// All monomials of total degree N*v: the degree-N slice of the generating
/// set of the Veronese subring.
pub fn degree_v_monomials(big_n: u32, p: &RingParams) -> Vec<Monomial> {
    monomials_of_degree(p.n, big_n as i64 * p.v as i64)
}
