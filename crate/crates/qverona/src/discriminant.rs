//! The regular trace, Gram-matrix discriminants d_r(Z, Z'), p-power
//! discriminants via per-coset exponent minima, monomial gcds in the
//! Veronese ring, and discriminant stability.

use num_bigint::BigInt;

use crate::basis::QuasiBasis;
use crate::center::{in_m, CenterLattice};
use crate::skew_ring::{
    in_veronese, mono_mul, reorder_exponent, Monomial, RingParams, SkewElement,
};
use crate::{CycScalar, QvError};

/// An element of the center: a SkewElement all of whose monomials lie in M.
/// Multiplication is commutative, so determinant arithmetic is legitimate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralElement {
    inner: SkewElement,
}

impl CentralElement {
    pub fn new(e: SkewElement, lattice: &CenterLattice) -> Result<Self, QvError> {
        if !e.terms().all(|(m, _)| in_m(m, lattice)) {
            return Err(QvError::NotInLattice);
        }
        Ok(CentralElement { inner: e })
    }

    pub fn zero() -> Self {
        CentralElement { inner: SkewElement::zero() }
    }

    pub fn one(p: &RingParams) -> Self {
        CentralElement { inner: SkewElement::one(p) }
    }

    pub fn as_element(&self) -> &SkewElement {
        &self.inner
    }

    pub fn into_element(self) -> SkewElement {
        self.inner
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self, QvError> {
        Ok(CentralElement { inner: self.inner.add(&other.inner)? })
    }

    pub fn neg(&self) -> Self {
        CentralElement { inner: self.inner.neg() }
    }

    pub fn mul(&self, other: &Self, p: &RingParams) -> Result<Self, QvError> {
        Ok(CentralElement { inner: self.inner.mul(&other.inner, p)? })
    }

    pub fn scale(&self, c: &CycScalar) -> Result<Self, QvError> {
        Ok(CentralElement { inner: self.inner.scale(c)? })
    }
}

/// Trace by the vanishing rule: central monomials go to w times themselves,
/// noncentral monomials to zero; extended linearly.
pub fn trace(a: &SkewElement, q: &QuasiBasis) -> Result<CentralElement, QvError> {
    let p = q.params();
    if !in_veronese(a, p) {
        return Err(QvError::NotInVeronese);
    }
    let w = CycScalar::from_bigint(p.m, BigInt::from(q.rank()));
    let mut out = SkewElement::zero();
    for (mono, c) in a.terms() {
        if in_m(mono, q.lattice()) {
            out.add_term(mono.clone(), c.mul(&w)?)?;
        }
    }
    CentralElement::new(out, q.lattice())
}

/// Trace through the regular representation: build the column of the
/// left-multiplication matrix over the central Laurent field in the free
/// basis B and sum the diagonal. Independent of the lattice membership test
/// used by `trace` (coset recognition goes through `normal_form`).
pub fn trace_oracle(a: &SkewElement, q: &QuasiBasis) -> Result<CentralElement, QvError> {
    let p = q.params();
    if !in_veronese(a, p) {
        return Err(QvError::NotInVeronese);
    }
    let mut out = SkewElement::zero();
    for (s, c) in a.terms() {
        let mut diag = CycScalar::zero(p.m);
        for j in 0..q.rank() {
            let bj = q.rep(j);
            let sum = s.add(bj);
            let nf = Monomial::new(q.normal_form(sum.exps())?);
            if &nf != bj {
                continue;
            }
            // x^s x^{b_j} = q^e x^{s+b_j} and x^{s+b_j} = q^{-e'} x^mu x^{b_j}
            // with mu = s + b_j - b_j = s, so the diagonal entry is
            // q^{e - e'} x^mu.
            let e = reorder_exponent(s, bj);
            let mu = sum.sub(&nf);
            let e2 = reorder_exponent(&mu, bj);
            diag = diag.add(&p.q_pow(e - e2))?;
        }
        if !diag.is_zero() {
            out.add_term(s.clone(), c.mul(&diag)?)?;
        }
    }
    CentralElement::new(out, q.lattice())
}

/// The matrix (tr(z_i z'_j)) of the trace pairing.
pub fn gram_matrix(
    z: &[SkewElement],
    zp: &[SkewElement],
    q: &QuasiBasis,
) -> Result<Vec<Vec<CentralElement>>, QvError> {
    if z.len() != zp.len() {
        return Err(QvError::InvalidParams(format!(
            "subsets have different sizes: {} vs {}",
            z.len(),
            zp.len()
        )));
    }
    if z.is_empty() {
        return Err(QvError::EmptyInput);
    }
    let p = q.params();
    let mut rows = Vec::with_capacity(z.len());
    for zi in z {
        let mut row = Vec::with_capacity(zp.len());
        for zj in zp {
            row.push(trace(&zi.mul(zj, p)?, q)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn permutation_sign(sigma: &[usize]) -> i32 {
    let mut seen = vec![false; sigma.len()];
    let mut sign = 1;
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = sigma[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Exact determinant over the center. A matrix with at most one nonzero
/// entry per row and column is resolved by the permutation-product formula
/// (the Gram matrix of a quasi-basis always has this shape); anything dense
/// falls back to memoized cofactor expansion, bounded at size 10.
pub fn determinant(
    mat: &[Vec<CentralElement>],
    p: &RingParams,
) -> Result<CentralElement, QvError> {
    let r = mat.len();
    if r == 0 {
        return Err(QvError::EmptyInput);
    }
    debug_assert!(mat.iter().all(|row| row.len() == r));

    let mut sigma = Vec::with_capacity(r);
    let mut generalized_permutation = true;
    for row in mat {
        let nz: Vec<usize> = (0..r).filter(|&j| !row[j].is_zero()).collect();
        match nz.len() {
            0 => return Ok(CentralElement::zero()),
            1 => sigma.push(nz[0]),
            _ => {
                generalized_permutation = false;
                break;
            }
        }
    }
    if generalized_permutation {
        let mut seen = vec![false; r];
        for &j in &sigma {
            if seen[j] {
                return Ok(CentralElement::zero());
            }
            seen[j] = true;
        }
        let mut prod = CentralElement::one(p);
        for (i, &j) in sigma.iter().enumerate() {
            prod = prod.mul(&mat[i][j], p)?;
        }
        return Ok(if permutation_sign(&sigma) < 0 { prod.neg() } else { prod });
    }

    if r > 10 {
        return Err(QvError::DenseDeterminant(r));
    }
    // Laplace expansion along rows, memoized over the set of free columns.
    let full: u32 = (1u32 << r) - 1;
    let mut memo: std::collections::HashMap<u32, CentralElement> =
        std::collections::HashMap::new();
    fn expand(
        mask: u32,
        mat: &[Vec<CentralElement>],
        p: &RingParams,
        memo: &mut std::collections::HashMap<u32, CentralElement>,
    ) -> Result<CentralElement, QvError> {
        if mask == 0 {
            return Ok(CentralElement::one(p));
        }
        if let Some(v) = memo.get(&mask) {
            return Ok(v.clone());
        }
        let r = mat.len();
        let row = r - mask.count_ones() as usize;
        let mut acc = CentralElement::zero();
        let mut parity = 0u32;
        for j in 0..r {
            if mask & (1 << j) == 0 {
                continue;
            }
            if !mat[row][j].is_zero() {
                let minor = expand(mask & !(1 << j), mat, p, memo)?;
                let term = mat[row][j].mul(&minor, p)?;
                acc = if parity % 2 == 0 { acc.add(&term)? } else { acc.add(&term.neg())? };
            }
            parity += 1;
        }
        memo.insert(mask, acc.clone());
        Ok(acc)
    }
    expand(full, mat, p, &mut memo)
}

/// d_r(Z, Z') = det(tr(z_i z'_j)).
pub fn gram_discriminant(
    z: &[SkewElement],
    zp: &[SkewElement],
    q: &QuasiBasis,
) -> Result<CentralElement, QvError> {
    let mat = gram_matrix(z, zp, q)?;
    determinant(&mat, q.params())
}

/// The quasi-basis as ring elements.
pub fn basis_elements(q: &QuasiBasis) -> Vec<SkewElement> {
    q.reps()
        .iter()
        .map(|b| SkewElement::monomial(b.clone(), CycScalar::one(q.params().m)))
        .collect()
}

/// Closed-form discriminant of the quasi-basis: w^w times the product of the
/// central monomials x^{b_i} x^{b_i*}, which must agree with
/// gram_discriminant(B, B) up to a unit scalar.
pub fn basis_discriminant(q: &QuasiBasis) -> Result<CentralElement, QvError> {
    let p = q.params();
    let mut prod = SkewElement::one(p);
    for i in 0..q.rank() {
        let (c, m) = mono_mul(q.rep(i), q.rep(q.star(i)), p);
        prod = prod.mul(&SkewElement::monomial(m, c), p)?;
    }
    let ww = BigInt::from(q.rank()).pow(q.rank() as u32);
    let scaled = prod.scale(&CycScalar::from_bigint(p.m, ww))?;
    CentralElement::new(scaled, q.lattice())
}

/// Componentwise-minimum exponent vector of a set, with the flag telling
/// whether the gcd monomial lies in H_v^+.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdResult {
    /// Componentwise minimum f.
    pub exps: Vec<i64>,
    /// Whether the total degree of f is a multiple of v.
    pub in_veronese: bool,
    /// The gcd monomial x^f, present exactly when the flag is true.
    pub witness: Option<Monomial>,
}

/// Componentwise minimum over a nonempty list of exponent vectors.
pub fn monomial_gcd(set: &[Monomial], p: &RingParams) -> Result<GcdResult, QvError> {
    if set.is_empty() {
        return Err(QvError::EmptyInput);
    }
    let n = p.n;
    let mut f = set[0].exps().to_vec();
    for mono in &set[1..] {
        for (fi, &e) in f.iter_mut().zip(mono.exps()) {
            *fi = (*fi).min(e);
        }
    }
    debug_assert_eq!(f.len(), n);
    let flag = f.iter().sum::<i64>().rem_euclid(p.v as i64) == 0;
    let witness = flag.then(|| Monomial::new(f.clone()));
    Ok(GcdResult { exps: f, in_veronese: flag, witness })
}

/// Per-coset componentwise minima of N^n intersect (M + b_i), found by
/// sweeping the box [0, vm/g]^n once. The relabeled normal forms bound the
/// minimum of coordinate mu by (b_i)_mu mod stride, so the box is large
/// enough; that bound doubles as an independent fast path and the two are
/// required to agree.
pub fn coset_minima(q: &QuasiBasis) -> Vec<Vec<i64>> {
    let p = q.params();
    let n = p.n;
    let v = p.v as i64;
    let bound = p.last_box();
    let w = q.rank();
    let mut minima = vec![vec![i64::MAX; n]; w];

    let mut cur = vec![0i64; n];
    'sweep: loop {
        if cur.iter().sum::<i64>().rem_euclid(v) == 0 {
            let i = q.coset_of(&cur).expect("box point is in H_v");
            for (mc, &tc) in minima[i].iter_mut().zip(cur.iter()) {
                *mc = (*mc).min(tc);
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                break 'sweep;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] <= bound {
                break;
            }
            cur[i] = 0;
        }
    }

    let stride = p.stride() as i64;
    for (i, mins) in minima.iter().enumerate() {
        for (c, &mc) in mins.iter().enumerate() {
            let fast = q.rep(i).exps()[c].rem_euclid(stride);
            assert_eq!(mc, fast, "coset minimum disagrees with the relabeling bound");
        }
    }
    minima
}

/// The p-power discriminant as a gcd exponent: the componentwise minima are
/// summed over the cosets and doubled 2p times. When the flag is true the
/// witness is the gcd inside the Veronese ring; when it is false only the
/// ambient-ring gcd is returned and no Veronese gcd is claimed.
pub fn p_power_discriminant(p_exp: u32, q: &QuasiBasis) -> GcdResult {
    let p = q.params();
    let minima = coset_minima(q);
    let mut f = vec![0i64; p.n];
    for mins in &minima {
        for (fi, &mc) in f.iter_mut().zip(mins) {
            *fi += mc;
        }
    }
    let exps: Vec<i64> = f.iter().map(|&x| 2 * p_exp as i64 * x).collect();
    let flag = exps.iter().sum::<i64>().rem_euclid(p.v as i64) == 0;
    let witness = flag.then(|| Monomial::new(exps.clone()));
    GcdResult { exps, in_veronese: flag, witness }
}

/// Stability: the ip-power gcd must be the i-th power of the p-power one
/// for 1 <= i <= imax, compared as recomputed gcd exponents with flags.
pub fn stability_check(p_exp: u32, imax: u32, q: &QuasiBasis) -> bool {
    let base = p_power_discriminant(p_exp, q);
    if !base.in_veronese {
        return false;
    }
    (1..=imax).all(|i| {
        let d = p_power_discriminant(i * p_exp, q);
        d.in_veronese
            && d.exps
                .iter()
                .zip(&base.exps)
                .all(|(&a, &b)| a == i as i64 * b)
    })
}

/// Equality up to a nonzero scalar of the base field: single monomials must
/// share their support; multi-term elements are compared after dividing by
/// the leading coefficient.
pub fn eq_up_to_unit(a: &SkewElement, b: &SkewElement) -> Result<bool, QvError> {
    if a.is_zero() || b.is_zero() {
        return Ok(a.is_zero() && b.is_zero());
    }
    if let (Some((ma, _)), Some((mb, _))) = (a.as_single(), b.as_single()) {
        return Ok(ma == mb);
    }
    let lead = |e: &SkewElement| e.terms().last().map(|(_, c)| c.clone()).unwrap();
    let na = a.scale(&lead(a).inv()?)?;
    let nb = b.scale(&lead(b).inv()?)?;
    Ok(na == nb)
}

/// The closed-form exponent wp(g - 1) for odd n / wp(m/g - 1) for even n,
/// and whether the divisibility hypothesis v | exponent holds.
pub fn theorem_exponent(p_exp: u32, p: &RingParams) -> (i64, bool) {
    let e = p.w() as i64 * p_exp as i64 * (p.stride() as i64 - 1);
    (e, e.rem_euclid(p.v as i64) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::center::veronese_monomials_up_to;

    fn params(n: usize, m: u32, v: u32) -> RingParams {
        RingParams::new(n, m, v).unwrap()
    }

    fn mono_elem(exps: Vec<i64>, m: u32) -> SkewElement {
        SkewElement::monomial(Monomial::new(exps), CycScalar::one(m))
    }

    #[test]
    fn trace_examples() {
        let q = QuasiBasis::enumerate(params(2, 2, 1));
        // trace(1) = w * 1
        let t = trace(&SkewElement::one(q.params()), &q).unwrap();
        assert_eq!(
            t.as_element(),
            &SkewElement::monomial(Monomial::unit(2), CycScalar::from_integer(2, 4))
        );
        // x1 x2 is noncentral
        let t = trace(&mono_elem(vec![1, 1], 2), &q).unwrap();
        assert!(t.is_zero());
        // x1^2 is central, w = 4
        let t = trace(&mono_elem(vec![2, 0], 2), &q).unwrap();
        assert_eq!(
            t.as_element(),
            &SkewElement::monomial(Monomial::new(vec![2, 0]), CycScalar::from_integer(2, 4))
        );
    }

    #[test]
    fn trace_oracle_matches_trace() {
        for (n, m, v) in [(2usize, 2u32, 1u32), (3, 2, 2), (2, 3, 1), (3, 3, 3), (2, 4, 2)] {
            let q = QuasiBasis::enumerate(params(n, m, v));
            for mono in veronese_monomials_up_to(3 * v as i64, q.params()) {
                let e = SkewElement::monomial(mono.clone(), CycScalar::one(m));
                assert_eq!(
                    trace(&e, &q).unwrap(),
                    trace_oracle(&e, &q).unwrap(),
                    "disagreement at {:?} for ({},{},{})",
                    mono,
                    n,
                    m,
                    v
                );
            }
        }
    }

    #[test]
    fn trace_oracle_examples() {
        let q = QuasiBasis::enumerate(params(2, 2, 1));
        let t = trace_oracle(&SkewElement::one(q.params()), &q).unwrap();
        assert_eq!(
            t.as_element(),
            &SkewElement::monomial(Monomial::unit(2), CycScalar::from_integer(2, 4))
        );
        assert!(trace_oracle(&mono_elem(vec![1, 1], 2), &q).unwrap().is_zero());
    }

    #[test]
    fn gram_discriminant_of_basis() {
        // (n=2, m=2, v=1): det = 256 q (x1 x2)^4
        let q = QuasiBasis::enumerate(params(2, 2, 1));
        let b = basis_elements(&q);
        let d = gram_discriminant(&b, &b, &q).unwrap();
        let (mono, coeff) = d.as_element().as_single().expect("single monomial");
        assert_eq!(mono, &Monomial::new(vec![4, 4]));
        // diagonal entries 4, 4 x2^2, 4 x1^2, 4q x1^2 x2^2; det = 256 q = -256
        assert_eq!(coeff, &CycScalar::from_integer(2, -256));
        let closed = basis_discriminant(&q).unwrap();
        assert!(eq_up_to_unit(d.as_element(), closed.as_element()).unwrap());

        // repeated rows collapse the determinant
        let mut z = b.clone();
        z[1] = z[0].clone();
        assert!(gram_discriminant(&z, &b, &q).unwrap().is_zero());

        // (n=3, m=2, v=2)
        let q = QuasiBasis::enumerate(params(3, 2, 2));
        let b = basis_elements(&q);
        let d = gram_discriminant(&b, &b, &q).unwrap();
        let (mono, _) = d.as_element().as_single().unwrap();
        assert_eq!(mono, &Monomial::new(vec![4, 4, 4]));
    }

    #[test]
    fn basis_discriminant_examples() {
        let q = QuasiBasis::enumerate(params(2, 2, 1));
        let d = basis_discriminant(&q).unwrap();
        assert_eq!(d.as_element().as_single().unwrap().0, &Monomial::new(vec![4, 4]));
        let q = QuasiBasis::enumerate(params(3, 2, 2));
        let d = basis_discriminant(&q).unwrap();
        assert_eq!(d.as_element().as_single().unwrap().0, &Monomial::new(vec![4, 4, 4]));
        // g = 1 makes the p-power discriminant a unit, but d_w(b,b) itself
        // is still the squared product of the representatives
        let q = QuasiBasis::enumerate(params(3, 2, 1));
        let d = p_power_discriminant(1, &q);
        assert_eq!(d.exps, vec![0, 0, 0]);
        assert!(d.in_veronese);
    }

    #[test]
    fn monomial_gcd_examples() {
        let p = params(2, 2, 2);
        let r = monomial_gcd(
            &[Monomial::new(vec![2, 4]), Monomial::new(vec![4, 2])],
            &p,
        )
        .unwrap();
        assert_eq!(r.exps, vec![2, 2]);
        assert!(r.in_veronese);
        assert_eq!(r.witness.unwrap(), Monomial::new(vec![2, 2]));

        let p = params(2, 2, 1);
        let r = monomial_gcd(
            &[Monomial::new(vec![1, 0]), Monomial::new(vec![0, 1])],
            &p,
        )
        .unwrap();
        assert_eq!(r.exps, vec![0, 0]);
        assert_eq!(r.witness.unwrap(), Monomial::unit(2));

        assert_eq!(monomial_gcd(&[], &p), Err(QvError::EmptyInput));
    }

    #[test]
    fn trace_handles_laurent_support() {
        // central Laurent monomials scale by w, noncentral ones die
        let q = QuasiBasis::enumerate(params(2, 2, 1));
        let central = mono_elem(vec![-2, 4], 2);
        let t = trace(&central, &q).unwrap();
        assert_eq!(
            t.as_element(),
            &SkewElement::monomial(Monomial::new(vec![-2, 4]), CycScalar::from_integer(2, 4))
        );
        assert_eq!(t, trace_oracle(&central, &q).unwrap());
        let noncentral = mono_elem(vec![-1, 2], 2);
        assert!(trace(&noncentral, &q).unwrap().is_zero());
        assert!(trace_oracle(&noncentral, &q).unwrap().is_zero());
    }

    #[test]
    fn coset_minimum_sums() {
        // (n=3, m=2, v=2, p=1): f = w(g-1)/2 * (1,1,1) = (2,2,2)
        let q = QuasiBasis::enumerate(params(3, 2, 2));
        let minima = coset_minima(&q);
        let mut f = vec![0i64; 3];
        for mins in &minima {
            for (fi, &v) in f.iter_mut().zip(mins) {
                *fi += v;
            }
        }
        assert_eq!(f, vec![2, 2, 2]);
    }

    #[test]
    fn coset_minima_stable_under_larger_box() {
        // the sweep bound vm/g is justified by the relabeled normal forms;
        // doubling the box must not find smaller coordinates
        for (n, m, v) in [(2usize, 4u32, 2u32), (3, 3, 3), (3, 2, 2), (2, 3, 1), (4, 2, 1)] {
            let p = params(n, m, v);
            let q = QuasiBasis::enumerate(p);
            let minima = coset_minima(&q);
            let bound = 2 * p.last_box();
            let mut wide = vec![vec![i64::MAX; n]; q.rank()];
            let mut cur = vec![0i64; n];
            'sweep: loop {
                if cur.iter().sum::<i64>().rem_euclid(v as i64) == 0 {
                    let i = q.coset_of(&cur).unwrap();
                    for (w, &t) in wide[i].iter_mut().zip(&cur) {
                        *w = (*w).min(t);
                    }
                }
                let mut i = n;
                loop {
                    if i == 0 {
                        break 'sweep;
                    }
                    i -= 1;
                    cur[i] += 1;
                    if cur[i] <= bound {
                        break;
                    }
                    cur[i] = 0;
                }
            }
            assert_eq!(minima, wide, "(n,m,v)=({},{},{})", n, m, v);
        }
    }

    #[test]
    fn p_power_examples() {
        // (3,2,2,p=1) -> (x1 x2 x3)^4
        let q = QuasiBasis::enumerate(params(3, 2, 2));
        let r = p_power_discriminant(1, &q);
        assert_eq!(r.exps, vec![4, 4, 4]);
        assert!(r.in_veronese);
        // (2,2,1,p=1) -> (x1 x2)^4
        let q = QuasiBasis::enumerate(params(2, 2, 1));
        let r = p_power_discriminant(1, &q);
        assert_eq!(r.exps, vec![4, 4]);
        assert!(r.in_veronese);
        // (3,3,3,p=1): w=9, g=3, exponent 18
        let q = QuasiBasis::enumerate(params(3, 3, 3));
        let r = p_power_discriminant(1, &q);
        assert_eq!(r.exps, vec![18, 18, 18]);
        assert!(r.in_veronese);
    }

    #[test]
    fn stability_examples() {
        for (n, m, v) in [(3usize, 2u32, 2u32), (2, 2, 1), (2, 3, 1)] {
            let q = QuasiBasis::enumerate(params(n, m, v));
            assert!(stability_check(1, 3, &q), "({},{},{})", n, m, v);
        }
        let q = QuasiBasis::enumerate(params(2, 3, 1));
        assert!(stability_check(1, 2, &q));
    }

    #[test]
    fn monotonicity_in_p() {
        for (n, m, v) in [(3usize, 2u32, 2u32), (2, 4, 2), (3, 3, 3)] {
            let q = QuasiBasis::enumerate(params(n, m, v));
            let d1 = p_power_discriminant(1, &q);
            let d2 = p_power_discriminant(2, &q);
            assert!(d1.exps.iter().zip(&d2.exps).all(|(a, b)| a <= b));
        }
    }

    #[test]
    fn dense_determinant_small() {
        // 2x2 dense over the center of (2,2,1): [[w, a], [a, w]] with
        // a = 4 x1^2, determinant w^2 - a^2
        let p = params(2, 2, 1);
        let q = QuasiBasis::enumerate(p);
        let lat = q.lattice();
        let w = CentralElement::new(
            SkewElement::monomial(Monomial::unit(2), CycScalar::from_integer(2, 4)),
            lat,
        )
        .unwrap();
        let a = CentralElement::new(
            SkewElement::monomial(Monomial::new(vec![2, 0]), CycScalar::from_integer(2, 4)),
            lat,
        )
        .unwrap();
        let det = determinant(
            &[vec![w.clone(), a.clone()], vec![a.clone(), w.clone()]],
            &p,
        )
        .unwrap();
        let expect = w.mul(&w, &p).unwrap().add(&a.mul(&a, &p).unwrap().neg()).unwrap();
        assert_eq!(det, expect);
    }

    #[test]
    fn central_multiplication_commutes() {
        let p = params(3, 3, 3);
        let q = QuasiBasis::enumerate(p);
        let lat = q.lattice();
        let a = CentralElement::new(
            SkewElement::monomial(Monomial::new(vec![3, 0, 0]), CycScalar::q(3)),
            lat,
        )
        .unwrap();
        let b = CentralElement::new(
            SkewElement::monomial(Monomial::new(vec![0, 3, 0]), CycScalar::one(3))
                .add(&SkewElement::monomial(Monomial::new(vec![0, 0, 3]), CycScalar::q(3)))
                .unwrap(),
            lat,
        )
        .unwrap();
        assert_eq!(a.mul(&b, &p).unwrap(), b.mul(&a, &p).unwrap());
    }

    #[test]
    fn unit_comparison() {
        let p = params(2, 2, 1);
        let a = SkewElement::monomial(Monomial::new(vec![4, 4]), CycScalar::from_integer(2, 256));
        let b = SkewElement::monomial(Monomial::new(vec![4, 4]), CycScalar::from_integer(2, -3));
        let c = SkewElement::monomial(Monomial::new(vec![4, 2]), CycScalar::one(2));
        assert!(eq_up_to_unit(&a, &b).unwrap());
        assert!(!eq_up_to_unit(&a, &c).unwrap());
        assert!(eq_up_to_unit(&SkewElement::zero(), &SkewElement::zero()).unwrap());
        assert!(!eq_up_to_unit(&a, &SkewElement::zero()).unwrap());
        let _ = p;
    }
}
