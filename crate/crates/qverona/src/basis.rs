//! Coset normal forms of the center lattice M in H_v, the quasi-basis of
//! canonical representatives and the star involution b_i -> b_i* with
//! b_i + b_i* in M.
//!
//! The canonical representative of a coset is the unique vector p with
//! 0 <= p_1 < t, 0 <= p_i < m for 1 < i < n and 0 <= p_n < vm/g, where the
//! stride t is g for odd n and m/g for even n.

use std::collections::HashMap;

use crate::center::CenterLattice;
use crate::skew_ring::{Monomial, RingParams};
use crate::QvError;

/// Translation vector with first coordinate equal to the stride: for odd n
/// the alternating vector scaled by g needs an e_n correction to stay in
/// H_v; for even n the scaled alternating vector already has coordinate sum
/// zero.
fn stride_vector(p: &RingParams) -> Vec<i64> {
    let stride = p.stride() as i64;
    let mut u: Vec<i64> = p.alternating().iter().map(|a| a * stride).collect();
    if p.n % 2 == 1 {
        let m = p.m as i64;
        let v = p.v as i64;
        let g = p.g() as i64;
        // c with c*m = g (mod v); exists because gcd(m/g, v/g) = 1.
        let c = (0..v)
            .find(|c| (c * m - g).rem_euclid(v) == 0)
            .expect("gcd(m/g, v/g) = 1 guarantees a solution");
        u[p.n - 1] -= c * m;
    }
    u
}

/// The unique canonical representative of s + M. Errors when s is not in
/// H_v. Each reduction step subtracts a lattice vector, so the result is
/// congruent to s mod M; idempotent on representatives.
pub fn normal_form(s: &[i64], p: &RingParams) -> Result<Vec<i64>, QvError> {
    if s.len() != p.n {
        return Err(QvError::InvalidParams(format!(
            "exponent vector has length {}, expected {}",
            s.len(),
            p.n
        )));
    }
    let v = p.v as i64;
    if s.iter().sum::<i64>().rem_euclid(v) != 0 {
        return Err(QvError::NotInLattice);
    }
    let mut out = s.to_vec();
    let stride = p.stride() as i64;
    let u = stride_vector(p);
    // first coordinate, by the stride vector
    let k = out[0].div_euclid(stride);
    if k != 0 {
        for (o, ui) in out.iter_mut().zip(&u) {
            *o -= k * ui;
        }
    }
    // middle coordinates, by m(e_i - e_n)
    let m = p.m as i64;
    for i in 1..p.n - 1 {
        let k = out[i].div_euclid(m);
        out[i] -= k * m;
        out[p.n - 1] += k * m;
    }
    // last coordinate, by (vm/g) e_n
    let last = p.last_box();
    let k = out[p.n - 1].div_euclid(last);
    out[p.n - 1] -= k * last;
    Ok(out)
}

/// The quasi-basis: all w canonical coset representatives, their positions
/// and the star involution.
#[derive(Debug, Clone)]
pub struct QuasiBasis {
    params: RingParams,
    lattice: CenterLattice,
    reps: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    star: Vec<usize>,
}

impl QuasiBasis {
    /// Direct box enumeration with the H_v sum filter; the count against w
    /// is a built-in self-test.
    pub fn enumerate(params: RingParams) -> Self {
        let reps_raw = enumerate_box(&params, 0, params.n - 1);
        let w = params.w();
        assert_eq!(
            reps_raw.len() as u64,
            w,
            "box enumeration must produce exactly w representatives"
        );
        let reps: Vec<Monomial> = reps_raw.into_iter().map(Monomial::new).collect();
        let index: HashMap<Monomial, usize> =
            reps.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut star = Vec::with_capacity(reps.len());
        for rep in &reps {
            let neg: Vec<i64> = rep.exps().iter().map(|e| -e).collect();
            let nf = normal_form(&neg, &params).expect("representatives lie in H_v");
            let j = *index
                .get(&Monomial::new(nf))
                .expect("normal form of a negated representative is a representative");
            star.push(j);
        }
        let lattice = CenterLattice::new(params);
        QuasiBasis { params, lattice, reps, index, star }
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn lattice(&self) -> &CenterLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Monomial] {
        &self.reps
    }

    pub fn rep(&self, i: usize) -> &Monomial {
        &self.reps[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Position of the canonical representative of s + M.
    pub fn coset_of(&self, s: &[i64]) -> Result<usize, QvError> {
        let nf = normal_form(s, &self.params)?;
        Ok(*self
            .index
            .get(&Monomial::new(nf))
            .expect("every normal form is a representative"))
    }

    /// The unique j with b_i + b_j in M; an involution.
    pub fn star(&self, i: usize) -> usize {
        self.star[i]
    }

    pub fn normal_form(&self, s: &[i64]) -> Result<Vec<i64>, QvError> {
        normal_form(s, &self.params)
    }
}

/// Ascending lexicographic enumeration of the representative box with the
/// given (stride, last) coordinates; used both for the standard basis
/// (mu = 0, nu = n-1) and for the relabeling self-check.
fn enumerate_box(p: &RingParams, mu: usize, nu: usize) -> Vec<Vec<i64>> {
    assert_ne!(mu, nu);
    let n = p.n;
    let v = p.v as i64;
    let hi = |i: usize| -> i64 {
        if i == mu {
            p.stride() as i64
        } else if i == nu {
            p.last_box()
        } else {
            p.m as i64
        }
    };
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        if cur.iter().sum::<i64>().rem_euclid(v) == 0 {
            out.push(cur.clone());
        }
        // odometer increment, most significant coordinate first
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < hi(i) {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// The relabeled box at coordinates (mu, nu) also contains exactly one
/// representative per coset; returns the vectors it enumerates. Used to
/// check the relabeling claim and as the justification of the per-coordinate
/// coset minima.
pub fn relabeled_representatives(p: &RingParams, mu: usize, nu: usize) -> Vec<Vec<i64>> {
    enumerate_box(p, mu, nu)
}
