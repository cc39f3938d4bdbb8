//! Exact arithmetic in the m-th cyclotomic field Q(q).
//!
//! Elements are polynomials in a fixed primitive m-th root of unity q,
//! reduced modulo the m-th cyclotomic polynomial, with arbitrary-precision
//! rational coefficients. Equality of reduced coefficient vectors is
//! canonical equality in the field, so "up to a nonzero scalar" comparisons
//! downstream never depend on floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::QvError;

/// Shared per-order data: the cyclotomic polynomial and the reduced powers
/// q^0, ..., q^{m-1}.
struct CycloContext {
    phi: usize,
    /// Monic modulus Phi_m as its coefficient vector, degree phi.
    modulus: Vec<BigRational>,
    /// q^k reduced mod Phi_m, for 0 <= k < m.
    q_powers: Vec<Vec<BigRational>>,
}

fn context_cache() -> &'static Mutex<HashMap<u32, Arc<CycloContext>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloContext>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn context(m: u32) -> Arc<CycloContext> {
    assert!(m >= 1, "order of q must be positive");
    let mut cache = context_cache().lock().unwrap();
    if let Some(ctx) = cache.get(&m) {
        return ctx.clone();
    }
    let ctx = Arc::new(CycloContext::build(m, &mut cache));
    cache.insert(m, ctx.clone());
    ctx
}

/// Exact quotient of polynomials over Q; panics if the division is not exact.
/// Coefficient vectors are little-endian (index = degree).
fn poly_div_exact(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let dd = den.len() - 1;
    assert!(!den[dd].is_zero());
    let mut rem = num.to_vec();
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigRational::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = &rem[k + dd] / &den[dd];
        if !c.is_zero() {
            for (i, dc) in den.iter().enumerate() {
                let t = &c * dc;
                rem[k + i] -= t;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    out
}

impl CycloContext {
    /// Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d, by recursion on divisors.
    fn build(m: u32, cache: &mut HashMap<u32, Arc<CycloContext>>) -> CycloContext {
        let modulus = if m == 1 {
            // x - 1
            vec![-BigRational::one(), BigRational::one()]
        } else {
            let mut num = vec![BigRational::zero(); m as usize + 1];
            num[0] = -BigRational::one();
            num[m as usize] = BigRational::one();
            let mut den = vec![BigRational::one()];
            for d in 1..m {
                if m % d == 0 {
                    let sub = match cache.get(&d) {
                        Some(ctx) => ctx.clone(),
                        None => {
                            let built = Arc::new(CycloContext::build(d, cache));
                            cache.insert(d, built.clone());
                            built
                        }
                    };
                    den = poly_mul(&den, &sub.modulus);
                }
            }
            poly_div_exact(&num, &den)
        };
        let phi = modulus.len() - 1;
        // q^k for k < m by repeated multiplication by x and reduction.
        let mut q_powers = Vec::with_capacity(m as usize);
        let mut cur = vec![BigRational::zero(); phi];
        if phi > 0 {
            cur[0] = BigRational::one();
        }
        for _ in 0..m {
            q_powers.push(cur.clone());
            cur = Self::shift_reduce(&cur, &modulus, phi);
        }
        CycloContext { phi, modulus, q_powers }
    }

    /// Multiply a reduced vector by x and reduce again.
    fn shift_reduce(v: &[BigRational], modulus: &[BigRational], phi: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); phi];
        if phi == 0 {
            return out;
        }
        // x * v has the old top coefficient landing on degree phi; fold it
        // back through the monic modulus.
        let top = v[phi - 1].clone();
        out[1..phi].clone_from_slice(&v[..phi - 1]);
        if !top.is_zero() {
            for i in 0..phi {
                out[i] -= &top * &modulus[i];
            }
        }
        out
    }

    fn reduce(&self, mut poly: Vec<BigRational>) -> Vec<BigRational> {
        // The modulus is monic of degree phi, so x^d folds down to degree
        // d - 1 and below, one top coefficient at a time.
        while poly.len() > self.phi {
            let top = poly.pop().unwrap();
            if !top.is_zero() {
                let off = poly.len() - self.phi;
                for i in 0..self.phi {
                    let t = &top * &self.modulus[i];
                    poly[off + i] -= t;
                }
            }
        }
        poly.resize(self.phi, BigRational::zero());
        poly
    }
}

/// An element of Q(q), q a fixed primitive m-th root of unity.
///
/// `coeffs` has length phi(m) and is always reduced mod the m-th cyclotomic
/// polynomial, so derived equality and hashing are canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycScalar {
    m: u32,
    coeffs: Vec<BigRational>,
}

impl CycScalar {
    pub fn zero(m: u32) -> Self {
        let ctx = context(m);
        CycScalar { m, coeffs: vec![BigRational::zero(); ctx.phi] }
    }

    pub fn one(m: u32) -> Self {
        Self::from_rational(m, BigRational::one())
    }

    pub fn from_rational(m: u32, r: BigRational) -> Self {
        let ctx = context(m);
        let mut coeffs = vec![BigRational::zero(); ctx.phi];
        if ctx.phi > 0 {
            coeffs[0] = r;
        }
        CycScalar { m, coeffs }
    }

    pub fn from_integer(m: u32, k: i64) -> Self {
        Self::from_rational(m, BigRational::from_integer(BigInt::from(k)))
    }

    pub fn from_bigint(m: u32, k: BigInt) -> Self {
        Self::from_rational(m, BigRational::from_integer(k))
    }

    /// q^{e mod m}, e may be negative.
    pub fn q_pow(m: u32, e: i64) -> Self {
        let ctx = context(m);
        let e = e.rem_euclid(m as i64) as usize;
        CycScalar { m, coeffs: ctx.q_powers[e].clone() }
    }

    /// The generator q itself.
    pub fn q(m: u32) -> Self {
        Self::q_pow(m, 1)
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.m)
    }

    fn check_order(&self, other: &Self) -> Result<(), QvError> {
        if self.m != other.m {
            return Err(QvError::OrderMismatch { left: self.m, right: other.m });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, QvError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycScalar { m: self.m, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QvError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycScalar { m: self.m, coeffs })
    }

    pub fn neg(&self) -> Self {
        CycScalar { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, QvError> {
        self.check_order(other)?;
        let ctx = context(self.m);
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.m));
        }
        let prod = poly_mul(&self.coeffs, &other.coeffs);
        Ok(CycScalar { m: self.m, coeffs: ctx.reduce(prod) })
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        CycScalar { m: self.m, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on
    /// rational polynomials against the cyclotomic modulus.
    pub fn inv(&self) -> Result<Self, QvError> {
        if self.is_zero() {
            return Err(QvError::DivisionByZero);
        }
        let ctx = context(self.m);
        // Bezout: a * self + b * modulus = gcd = nonzero constant.
        let mut r0: Vec<BigRational> = ctx.modulus.clone();
        let mut r1: Vec<BigRational> = trim(self.coeffs.clone());
        let mut s0: Vec<BigRational> = vec![BigRational::zero()];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while degree(&r1) > 0 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = trim(r);
            s0 = s1;
            s1 = trim(s);
        }
        assert!(!r1.is_empty() && !r1[0].is_zero(), "modulus not coprime to nonzero element");
        let c = r1[0].recip();
        let inv: Vec<BigRational> = s1.iter().map(|x| x * &c).collect();
        Ok(CycScalar { m: self.m, coeffs: ctx.reduce(inv) })
    }

    pub fn div(&self, other: &Self) -> Result<Self, QvError> {
        self.mul(&other.inv()?)
    }

    /// Integer power, negative allowed for nonzero elements.
    pub fn pow(&self, e: i64) -> Result<Self, QvError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.m);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
    v
}

fn degree(v: &[BigRational]) -> usize {
    v.len().saturating_sub(1)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect()
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = trim(den.to_vec());
    let dd = degree(&den);
    let mut rem = trim(num.to_vec());
    if degree(&rem) < dd || (dd == 0 && den[0].is_zero()) {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); degree(&rem) - dd + 1];
    while degree(&rem) >= dd && !(rem.len() == 1 && rem[0].is_zero()) {
        let k = degree(&rem) - dd;
        let c = rem.last().unwrap() / &den[dd];
        quot[k] = c.clone();
        for i in 0..=dd {
            let t = &c * &den[i];
            rem[k + i] -= t;
        }
        rem = trim(rem);
        if rem.len() == 1 && rem[0].is_zero() {
            break;
        }
        if degree(&rem) < dd {
            break;
        }
    }
    (quot, rem)
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc(m={})[", self.m)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if i == 0 {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "q^{}", i)?;
            } else {
                write!(f, "{}*q^{}", a, i)?;
            }
            first = false;
        }
        Ok(())
    }
}

/// JSON form: array of phi(m) rational strings "p/q".
impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&format!("{}/{}", c.numer(), c.denom()))?;
        }
        seq.end()
    }
}

/// Euler's totient, by trial factorization (orders here are small).
pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials_have_expected_degree() {
        for m in [1u32, 2, 3, 4, 5, 6, 8, 12] {
            let ctx = context(m);
            assert_eq!(ctx.phi as u32, euler_phi(m), "phi({})", m);
        }
    }

    #[test]
    fn known_cyclotomic_polynomials() {
        // Phi_4 = x^2 + 1, Phi_3 = x^2 + x + 1, Phi_6 = x^2 - x + 1
        let as_i64 = |m: u32| -> Vec<i64> {
            context(m)
                .modulus
                .iter()
                .map(|c| {
                    assert!(c.is_integer());
                    i64::try_from(c.to_integer()).unwrap()
                })
                .collect()
        };
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(3), vec![1, 1, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(8), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn add_identity_and_m2_values() {
        // q + 0 = q
        let q = CycScalar::q(5);
        assert_eq!(q.add(&CycScalar::zero(5)).unwrap(), q);
        // m=2: q = -1, so q + q = -2
        let q2 = CycScalar::q(2);
        assert_eq!(q2.add(&q2).unwrap(), CycScalar::from_integer(2, -2));
    }

    #[test]
    fn m4_q_squared_plus_one_vanishes() {
        // reduce q^2 + 1 mod x^2 + 1
        let s = CycScalar::q_pow(4, 2).add(&CycScalar::one(4)).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn mul_wraps_at_order() {
        for m in [2u32, 3, 4, 5, 6, 8] {
            let a = CycScalar::q(m);
            let b = CycScalar::q_pow(m, m as i64 - 1);
            assert_eq!(a.mul(&b).unwrap(), CycScalar::one(m), "q * q^(m-1) at m={}", m);
        }
        // m=3: q*q = -1 - q, reduced mod x^2 + x + 1
        let q = CycScalar::q(3);
        let expect = CycScalar::from_integer(3, -1).sub(&q).unwrap();
        assert_eq!(q.mul(&q).unwrap(), expect);
        // 0 * q = 0
        assert!(CycScalar::zero(3).mul(&q).unwrap().is_zero());
    }

    #[test]
    fn q_pow_examples() {
        assert_eq!(CycScalar::q_pow(7, 0), CycScalar::one(7));
        assert_eq!(CycScalar::q_pow(2, 3), CycScalar::from_integer(2, -1));
        assert_eq!(CycScalar::q_pow(4, -1), CycScalar::q_pow(4, 3));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(CycScalar::one(5).inv().unwrap(), CycScalar::one(5));
        assert_eq!(
            CycScalar::from_integer(2, -1).inv().unwrap(),
            CycScalar::from_integer(2, -1)
        );
        // m=3: 1/q = q^2
        assert_eq!(CycScalar::q(3).inv().unwrap(), CycScalar::q_pow(3, 2));
        assert!(CycScalar::zero(3).inv().is_err());
        // rational: 1/2
        let two = CycScalar::from_integer(6, 2);
        assert_eq!(two.mul(&two.inv().unwrap()).unwrap(), CycScalar::one(6));
    }

    #[test]
    fn primitivity_is_structural() {
        for m in [2u32, 3, 4, 5, 6, 8] {
            for k in 1..m {
                assert_ne!(CycScalar::q_pow(m, k as i64), CycScalar::one(m), "q^{} at m={}", k, m);
            }
            assert_eq!(CycScalar::q_pow(m, m as i64), CycScalar::one(m));
        }
    }

    #[test]
    fn mismatched_orders_error() {
        let a = CycScalar::q(3);
        let b = CycScalar::q(4);
        assert!(a.add(&b).is_err());
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn serialization_rational_strings() {
        let s = CycScalar::q(4).add(&CycScalar::from_rational(
            4,
            BigRational::new(BigInt::from(1), BigInt::from(2)),
        ))
        .unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"["1/2","1/1"]"#);
    }
}
