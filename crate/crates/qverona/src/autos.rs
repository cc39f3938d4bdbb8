//! Constructive automorphism families of the Veronese subring, lowering to
//! generator images, homomorphism verification, locally nilpotent
//! derivations with their exponentials, discriminant invariance and
//! free-subgroup word falsification.
//!
//! Automorphisms are stored by what they do to the degree-v monomial
//! generators; the generators x_i of the ambient ring need not survive into
//! the Veronese subring, so images of x_i are only ever attached to
//! derivations (which do live in the ambient ring).

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::basis::QuasiBasis;
use crate::discriminant::{eq_up_to_unit, p_power_discriminant};
use crate::skew_ring::{
    degree_v_monomials, in_veronese, mono_mul, monomials_of_degree, reorder_exponent, Monomial,
    RingParams, SkewElement,
};
use crate::{CycScalar, QvError};

/// A derivation of the ambient ring, given by the images of the generators.
/// For the two-variable family with m | v the ambient ring is the
/// commutative model of the Veronese ring, flagged by `commutative_model`;
/// everything else lives in the skew ring itself.
#[derive(Debug, Clone)]
pub struct Derivation {
    params: RingParams,
    images: Vec<SkewElement>,
    degree_shift: i64,
    commutative_model: bool,
}

impl Derivation {
    pub fn new(
        params: RingParams,
        images: Vec<SkewElement>,
        commutative_model: bool,
    ) -> Result<Self, QvError> {
        if images.len() != params.n {
            return Err(QvError::InvalidParams(format!(
                "expected {} generator images, got {}",
                params.n,
                images.len()
            )));
        }
        let mut shift: Option<i64> = None;
        for img in &images {
            if img.is_zero() {
                continue;
            }
            if !img.is_polynomial() {
                return Err(QvError::DerivationInvariant(
                    "generator images must be polynomial".into(),
                ));
            }
            let (lo, hi) = (img.min_degree().unwrap(), img.max_degree().unwrap());
            if lo != hi {
                return Err(QvError::DerivationInvariant(
                    "generator images must be homogeneous".into(),
                ));
            }
            match shift {
                None => shift = Some(lo - 1),
                Some(s) if s == lo - 1 => {}
                Some(_) => {
                    return Err(QvError::DerivationInvariant(
                        "generator images must share a common degree shift".into(),
                    ))
                }
            }
        }
        let d = Derivation {
            params,
            images,
            degree_shift: shift.unwrap_or(0),
            commutative_model,
        };
        d.check_leibniz()?;
        d.check_nilpotent()?;
        Ok(d)
    }

    pub fn zero(params: RingParams) -> Self {
        Derivation {
            images: vec![SkewElement::zero(); params.n],
            params,
            degree_shift: 0,
            commutative_model: false,
        }
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn image_of_generator(&self, i: usize) -> &SkewElement {
        &self.images[i]
    }

    /// Common degree shift of the derivation (beta v for the odd family).
    pub fn degree_shift(&self) -> i64 {
        self.degree_shift
    }

    pub fn is_commutative_model(&self) -> bool {
        self.commutative_model
    }

    pub fn neg(&self) -> Self {
        Derivation {
            params: self.params,
            images: self.images.iter().map(|e| e.neg()).collect(),
            degree_shift: self.degree_shift,
            commutative_model: self.commutative_model,
        }
    }

    fn ring_mul(&self, a: &SkewElement, b: &SkewElement) -> Result<SkewElement, QvError> {
        if self.commutative_model {
            a.mul_plain(b)
        } else {
            a.mul(b, &self.params)
        }
    }

    /// Leibniz rule against the defining relations. In the skew model the
    /// relation x_j x_i = q x_i x_j is checked on formal products; in the
    /// commutative model the relation is plain commutativity.
    pub fn check_leibniz(&self) -> Result<(), QvError> {
        let n = self.params.n;
        let m = self.params.m;
        for i in 0..n {
            for j in i + 1..n {
                let xi = SkewElement::monomial(Monomial::var_pow(n, i + 1, 1), CycScalar::one(m));
                let xj = SkewElement::monomial(Monomial::var_pow(n, j + 1, 1), CycScalar::one(m));
                // d(x_j x_i) = d(x_j) x_i + x_j d(x_i)
                let lhs = self
                    .ring_mul(&self.images[j], &xi)?
                    .add(&self.ring_mul(&xj, &self.images[i])?)?;
                // d(q x_i x_j) with q = 1 in the commutative model
                let inner = self
                    .ring_mul(&self.images[i], &xj)?
                    .add(&self.ring_mul(&xi, &self.images[j])?)?;
                let rhs = if self.commutative_model {
                    inner
                } else {
                    inner.scale(&self.params.q())?
                };
                if lhs != rhs {
                    return Err(QvError::DerivationInvariant(format!(
                        "Leibniz fails on the relation for (x_{}, x_{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// d^2(x_i) = 0 for every generator.
    pub fn check_nilpotent(&self) -> Result<(), QvError> {
        for (i, img) in self.images.iter().enumerate() {
            if !self.apply(img)?.is_zero() {
                return Err(QvError::DerivationInvariant(format!(
                    "d^2(x_{}) is nonzero",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Leibniz extension to arbitrary polynomial elements.
    pub fn apply(&self, a: &SkewElement) -> Result<SkewElement, QvError> {
        let mut out = SkewElement::zero();
        for (mono, c) in a.terms() {
            let img = self.apply_monomial(mono)?;
            out = out.add(&img.scale(c)?)?;
        }
        Ok(out)
    }

    fn apply_monomial(&self, mono: &Monomial) -> Result<SkewElement, QvError> {
        if !mono.is_polynomial() {
            return Err(QvError::DerivationInvariant(
                "derivations are applied to polynomial monomials".into(),
            ));
        }
        // peel the first variable: x^s = x_i x^{s - e_i} exactly when i is
        // the first nonzero coordinate
        let Some(i) = mono.exps().iter().position(|&e| e > 0) else {
            return Ok(SkewElement::zero());
        };
        let n = self.params.n;
        let m = self.params.m;
        let xi = SkewElement::monomial(Monomial::var_pow(n, i + 1, 1), CycScalar::one(m));
        let mut rest_exps = mono.exps().to_vec();
        rest_exps[i] -= 1;
        let rest_mono = Monomial::new(rest_exps);
        let rest = SkewElement::monomial(rest_mono.clone(), CycScalar::one(m));
        let d_rest = self.apply_monomial(&rest_mono)?;
        self.ring_mul(&self.images[i], &rest)?
            .add(&self.ring_mul(&xi, &d_rest)?)
    }

    /// Smallest positive (alpha, beta) with (alpha + s) m - beta v = 1,
    /// scanning beta upwards; requires gcd(m, v) = 1.
    pub fn degree_split(m: u32, v: u32, s: u32) -> Result<(u32, u32), QvError> {
        use num_integer::Integer;
        if m.gcd(&v) != 1 {
            return Err(QvError::Inapplicable(format!(
                "gcd(m, v) = {} must be 1",
                m.gcd(&v)
            )));
        }
        for beta in 1u64..=10_000 {
            let t = 1 + beta * v as u64;
            if t % m as u64 == 0 {
                let total = t / m as u64;
                if total > s as u64 {
                    return Ok(((total - s as u64) as u32, beta as u32));
                }
            }
        }
        unreachable!("a solution exists for coprime (m, v)")
    }

    /// The locally nilpotent pair for odd n >= 3 with gcd(m, v) = 1: the
    /// first sends x_1 to x_2^{alpha m} (x_2 x_3^{m-1} x_4 x_5^{m-1} ...),
    /// the second sends x_3 to x_2^{alpha m} (x_1^{m-1} x_2 x_4 x_5^{m-1}
    /// ...); everything else to zero. Both have degree shift beta v.
    pub fn odd_coprime_pair(params: &RingParams) -> Result<(Derivation, Derivation), QvError> {
        if params.n % 2 == 0 || params.n < 3 {
            return Err(QvError::Inapplicable(format!(
                "odd n >= 3 required, got n = {}",
                params.n
            )));
        }
        if params.g() != 1 {
            return Err(QvError::Inapplicable(format!(
                "gcd(m, v) = {} must be 1",
                params.g()
            )));
        }
        let n = params.n;
        let s = ((n - 1) / 2) as u32;
        let (alpha, beta) = Self::degree_split(params.m, params.v, s)?;
        let m = params.m as i64;
        let am = alpha as i64 * m;

        let mut first = vec![0i64; n];
        first[1] = am + 1;
        let mut third = vec![0i64; n];
        third[0] = m - 1;
        third[1] = am + 1;
        for t in 1..=s as usize {
            if t == 1 {
                first[2] = m - 1;
            } else {
                first[2 * t - 1] = 1;
                first[2 * t] = m - 1;
                third[2 * t - 1] = 1;
                third[2 * t] = m - 1;
            }
        }

        let one = CycScalar::one(params.m);
        let mut img1 = vec![SkewElement::zero(); n];
        img1[0] = SkewElement::monomial(Monomial::new(first), one.clone());
        let mut img3 = vec![SkewElement::zero(); n];
        img3[2] = SkewElement::monomial(Monomial::new(third), one);
        let d1 = Derivation::new(*params, img1, false)?;
        let d3 = Derivation::new(*params, img3, false)?;
        // degree identity: alpha m + s m - 1 = beta v
        let shift = beta as i64 * params.v as i64;
        debug_assert_eq!(d1.degree_shift(), shift);
        debug_assert_eq!(d3.degree_shift(), shift);
        Ok((d1, d3))
    }

    /// The pair x_1 -> x_2^{v+1} and x_2 -> x_1^{v+1} for n = 2 with m | v,
    /// acting through the commutative model of the Veronese ring.
    pub fn two_variable_pair(params: &RingParams) -> Result<(Derivation, Derivation), QvError> {
        if params.n != 2 {
            return Err(QvError::Inapplicable(format!("n = 2 required, got {}", params.n)));
        }
        if params.v % params.m != 0 {
            return Err(QvError::Inapplicable(format!(
                "m = {} must divide v = {}",
                params.m, params.v
            )));
        }
        let one = CycScalar::one(params.m);
        let v1 = params.v as i64 + 1;
        let d1 = Derivation::new(
            *params,
            vec![
                SkewElement::monomial(Monomial::new(vec![0, v1]), one.clone()),
                SkewElement::zero(),
            ],
            true,
        )?;
        let d2 = Derivation::new(
            *params,
            vec![
                SkewElement::zero(),
                SkewElement::monomial(Monomial::new(vec![v1, 0]), one),
            ],
            true,
        )?;
        Ok((d1, d2))
    }
}

/// One of the constructive automorphism families, or a raw table of
/// generator images.
#[derive(Debug, Clone)]
pub enum AutoKind {
    /// x^s of degree Nv goes to c^N k_2^{s_2} ... k_n^{s_n} x^s.
    Scaling { c: CycScalar, ks: Vec<CycScalar> },
    /// x^s goes to x_{pi(1)}^{s_1} ... x_{pi(n)}^{s_n}; requires q = -1.
    Permutation { pi: Vec<usize> },
    /// Iterates of the cyclic shift x^s -> q^{s_n^2} x^s_pi with
    /// pi(i) = i + 1 mod n; requires q^v = +-1. Negative shifts iterate the
    /// inverse map.
    TwistedShift { shift: i64 },
    /// exp of a locally nilpotent derivation, lowered to generator images.
    ExpDerivation {
        derivation: Derivation,
        images: BTreeMap<Monomial, SkewElement>,
    },
    /// Images of every degree-v monomial.
    GeneratorImages { images: BTreeMap<Monomial, SkewElement> },
}

#[derive(Debug, Clone)]
pub struct AutoSpec {
    params: RingParams,
    kind: AutoKind,
}

/// Twist exponent of the two-variable commutative model isomorphism
/// x^u -> q^{u_1 (u_1 - 1) / 2} X^u.
fn two_var_twist(u: &Monomial) -> i64 {
    let u1 = u.exps()[0];
    u1 * (u1 - 1) / 2
}

impl AutoSpec {
    pub fn identity(params: RingParams) -> Self {
        AutoSpec {
            params,
            kind: AutoKind::Scaling {
                c: CycScalar::one(params.m),
                ks: vec![CycScalar::one(params.m); params.n - 1],
            },
        }
    }

    pub fn scaling(params: RingParams, c: CycScalar, ks: Vec<CycScalar>) -> Result<Self, QvError> {
        if ks.len() != params.n - 1 {
            return Err(QvError::InvalidParams(format!(
                "expected {} scale factors k_2..k_n, got {}",
                params.n - 1,
                ks.len()
            )));
        }
        if c.is_zero() || ks.iter().any(|k| k.is_zero()) {
            return Err(QvError::InvalidParams("scale factors must be nonzero".into()));
        }
        if c.order() != params.m || ks.iter().any(|k| k.order() != params.m) {
            return Err(QvError::OrderMismatch { left: c.order(), right: params.m });
        }
        Ok(AutoSpec { params, kind: AutoKind::Scaling { c, ks } })
    }

    fn validate_permutation(params: &RingParams, pi: &[usize]) -> Result<(), QvError> {
        let mut sorted = pi.to_vec();
        sorted.sort_unstable();
        if sorted != (0..params.n).collect::<Vec<_>>() {
            return Err(QvError::InvalidParams(format!(
                "{:?} is not a permutation of 0..{}",
                pi, params.n
            )));
        }
        Ok(())
    }

    pub fn permutation(params: RingParams, pi: Vec<usize>) -> Result<Self, QvError> {
        if params.m != 2 {
            return Err(QvError::Inapplicable(format!(
                "permutation automorphisms need q = -1, i.e. m = 2 (got m = {})",
                params.m
            )));
        }
        Self::permutation_unchecked(params, pi)
    }

    /// Permutation map without the q = -1 gate; used by rigidity searches,
    /// where failing `verify_homomorphism` is the point.
    pub fn permutation_unchecked(params: RingParams, pi: Vec<usize>) -> Result<Self, QvError> {
        Self::validate_permutation(&params, &pi)?;
        Ok(AutoSpec { params, kind: AutoKind::Permutation { pi } })
    }

    pub fn twisted_shift(params: RingParams, shift: i64) -> Result<Self, QvError> {
        if (2 * params.v) % params.m != 0 {
            return Err(QvError::Inapplicable(format!(
                "twisted shifts need q^v = +-1, i.e. m | 2v (got m = {}, v = {})",
                params.m, params.v
            )));
        }
        Ok(Self::twisted_shift_unchecked(params, shift))
    }

    pub fn twisted_shift_unchecked(params: RingParams, shift: i64) -> Self {
        AutoSpec { params, kind: AutoKind::TwistedShift { shift } }
    }

    /// A raw table of generator images; the keys must be exactly the
    /// degree-v monomials.
    pub fn from_generator_images(
        params: RingParams,
        images: BTreeMap<Monomial, SkewElement>,
    ) -> Result<Self, QvError> {
        let gens = degree_v_monomials(1, &params);
        if images.len() != gens.len() || gens.iter().any(|g| !images.contains_key(g)) {
            return Err(QvError::InvalidParams(
                "generator images must cover exactly the degree-v monomials".into(),
            ));
        }
        if images.values().any(|e| !in_veronese(e, &params)) {
            return Err(QvError::NotInVeronese);
        }
        Ok(AutoSpec { params, kind: AutoKind::GeneratorImages { images } })
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn kind(&self) -> &AutoKind {
        &self.kind
    }

    pub fn inverse(&self) -> Result<AutoSpec, QvError> {
        match &self.kind {
            AutoKind::Scaling { c, ks } => {
                let ks_inv: Result<Vec<_>, _> = ks.iter().map(|k| k.inv()).collect();
                Ok(AutoSpec {
                    params: self.params,
                    kind: AutoKind::Scaling { c: c.inv()?, ks: ks_inv? },
                })
            }
            AutoKind::Permutation { pi } => {
                let mut inv = vec![0usize; pi.len()];
                for (i, &j) in pi.iter().enumerate() {
                    inv[j] = i;
                }
                Ok(AutoSpec { params: self.params, kind: AutoKind::Permutation { pi: inv } })
            }
            AutoKind::TwistedShift { shift } => Ok(AutoSpec {
                params: self.params,
                kind: AutoKind::TwistedShift { shift: -shift },
            }),
            AutoKind::ExpDerivation { derivation, .. } => {
                exp_derivation(&derivation.neg(), &self.params)
            }
            AutoKind::GeneratorImages { .. } => Err(QvError::Inapplicable(
                "raw generator-image automorphisms carry no structural inverse".into(),
            )),
        }
    }

    /// Composition self after `inner`, lowered to generator images. Useful
    /// for computing conjugates, e.g. the twisted action of a permutation
    /// on the scaling parameters.
    pub fn compose(&self, inner: &AutoSpec) -> Result<AutoSpec, QvError> {
        if inner.params != self.params {
            return Err(QvError::InvalidParams("automorphism parameter mismatch".into()));
        }
        let mut images = BTreeMap::new();
        for g in degree_v_monomials(1, &self.params) {
            let mid = apply_auto(
                inner,
                &SkewElement::monomial(g.clone(), CycScalar::one(self.params.m)),
            )?;
            images.insert(g, apply_auto(self, &mid)?);
        }
        AutoSpec::from_generator_images(self.params, images)
    }

    /// The lowering to generator images that every kind admits.
    pub fn generator_image_map(&self) -> Result<BTreeMap<Monomial, SkewElement>, QvError> {
        if let AutoKind::ExpDerivation { images, .. } | AutoKind::GeneratorImages { images } =
            &self.kind
        {
            return Ok(images.clone());
        }
        let mut out = BTreeMap::new();
        for g in degree_v_monomials(1, &self.params) {
            let img = apply_auto(
                self,
                &SkewElement::monomial(g.clone(), CycScalar::one(self.params.m)),
            )?;
            out.insert(g, img);
        }
        Ok(out)
    }

    fn apply_monomial(&self, mono: &Monomial, coeff: &CycScalar) -> Result<SkewElement, QvError> {
        let p = &self.params;
        match &self.kind {
            AutoKind::Scaling { c, ks } => {
                let deg = mono.total_degree();
                let big_n = deg.div_euclid(p.v as i64);
                let mut scalar = coeff.mul(&c.pow(big_n)?)?;
                for (i, k) in ks.iter().enumerate() {
                    let e = mono.exps()[i + 1];
                    if e != 0 {
                        scalar = scalar.mul(&k.pow(e)?)?;
                    }
                }
                Ok(SkewElement::monomial(mono.clone(), scalar))
            }
            AutoKind::Permutation { pi } => {
                let (c, m) = permuted_product(mono, pi, p);
                Ok(SkewElement::monomial(m, coeff.mul(&c)?))
            }
            AutoKind::TwistedShift { shift } => {
                let mut cur_m = mono.clone();
                let mut cur_c = coeff.clone();
                for _ in 0..shift.unsigned_abs() {
                    let (c, m) = if *shift >= 0 {
                        shift_forward(&cur_m, p)
                    } else {
                        shift_backward(&cur_m, p)
                    };
                    cur_c = cur_c.mul(&c)?;
                    cur_m = m;
                }
                Ok(SkewElement::monomial(cur_m, cur_c))
            }
            AutoKind::ExpDerivation { images, .. } | AutoKind::GeneratorImages { images } => {
                apply_images(images, mono, coeff, p)
            }
        }
    }
}

/// x^s_pi = x_{pi(1)}^{s_1} ... x_{pi(n)}^{s_n}, normal-ordered.
fn permuted_product(mono: &Monomial, pi: &[usize], p: &RingParams) -> (CycScalar, Monomial) {
    let mut acc_c = CycScalar::one(p.m);
    let mut acc_m = Monomial::unit(p.n);
    for (i, &e) in mono.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        let (c, m) = mono_mul(&acc_m, &Monomial::var_pow(p.n, pi[i] + 1, e), p);
        acc_c = acc_c.mul(&c).unwrap();
        acc_m = m;
    }
    (acc_c, acc_m)
}

/// The basic twisted shift: x^s -> q^{s_n^2} x^s_pi with pi the cycle
/// i -> i + 1.
fn shift_forward(mono: &Monomial, p: &RingParams) -> (CycScalar, Monomial) {
    let n = p.n;
    let pi: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let (c, m) = permuted_product(mono, &pi, p);
    let sn = mono.exps()[n - 1];
    (c.mul(&p.q_pow(sn * sn)).unwrap(), m)
}

/// Exact inverse of `shift_forward`: x^u -> q^{-u_1 |u|} x^{sigma^{-1}(u)}.
fn shift_backward(mono: &Monomial, p: &RingParams) -> (CycScalar, Monomial) {
    let n = p.n;
    let u = mono.exps();
    let total: i64 = u.iter().sum();
    let pre: Vec<i64> = (0..n).map(|i| u[(i + 1) % n]).collect();
    (p.q_pow(-u[0] * total), Monomial::new(pre))
}

/// Greedy split of a degree-Nv exponent vector into N degree-v pieces,
/// filling coordinates left to right.
fn peel(mono: &Monomial, p: &RingParams) -> Vec<Monomial> {
    let v = p.v as i64;
    let total = mono.total_degree();
    debug_assert!(total >= 0 && total % v == 0);
    let mut rest = mono.exps().to_vec();
    let mut out = Vec::with_capacity((total / v) as usize);
    for _ in 0..total / v {
        let mut piece = vec![0i64; p.n];
        let mut need = v;
        for (pc, rc) in piece.iter_mut().zip(rest.iter_mut()) {
            let take = (*rc).min(need);
            *pc = take;
            *rc -= take;
            need -= take;
            if need == 0 {
                break;
            }
        }
        debug_assert_eq!(need, 0);
        out.push(Monomial::new(piece));
    }
    out
}

/// Apply a generator-image table to a monomial by factoring it into
/// degree-v pieces: x^t = q^{-E} x^{p_1} ... x^{p_N}, so the image is
/// q^{-E} times the product of the piece images.
fn apply_images(
    images: &BTreeMap<Monomial, SkewElement>,
    mono: &Monomial,
    coeff: &CycScalar,
    p: &RingParams,
) -> Result<SkewElement, QvError> {
    if mono.total_degree() == 0 {
        return Ok(SkewElement::monomial(mono.clone(), coeff.clone()));
    }
    if !mono.is_polynomial() {
        return Err(QvError::Inapplicable(
            "generator-image automorphisms act on polynomial monomials".into(),
        ));
    }
    let pieces = peel(mono, p);
    let mut e = 0i64;
    let mut acc = Monomial::unit(p.n);
    for piece in &pieces {
        e += reorder_exponent(&acc, piece);
        acc = acc.add(piece);
    }
    debug_assert_eq!(&acc, mono);
    let mut out = SkewElement::monomial(Monomial::unit(p.n), coeff.mul(&p.q_pow(-e))?);
    for piece in &pieces {
        let img = images.get(piece).ok_or_else(|| {
            QvError::InvalidParams(format!("missing generator image for {:?}", piece))
        })?;
        out = out.mul(img, p)?;
    }
    Ok(out)
}

/// Image of a Veronese element under the automorphism; linear extension
/// over the terms.
pub fn apply_auto(g: &AutoSpec, a: &SkewElement) -> Result<SkewElement, QvError> {
    if !in_veronese(a, &g.params) {
        return Err(QvError::NotInVeronese);
    }
    let mut out = SkewElement::zero();
    for (mono, c) in a.terms() {
        out = out.add(&g.apply_monomial(mono, c)?)?;
    }
    Ok(out)
}

/// Cached per-monomial application, for word evaluation and pair scans.
pub struct AutoEvaluator {
    spec: AutoSpec,
    cache: HashMap<Monomial, SkewElement>,
}

impl AutoEvaluator {
    pub fn new(spec: AutoSpec) -> Self {
        AutoEvaluator { spec, cache: HashMap::new() }
    }

    pub fn spec(&self) -> &AutoSpec {
        &self.spec
    }

    pub fn apply_monomial(&mut self, mono: &Monomial) -> Result<SkewElement, QvError> {
        if let Some(img) = self.cache.get(mono) {
            return Ok(img.clone());
        }
        let img = self
            .spec
            .apply_monomial(mono, &CycScalar::one(self.spec.params.m))?;
        self.cache.insert(mono.clone(), img.clone());
        Ok(img)
    }

    pub fn apply(&mut self, a: &SkewElement) -> Result<SkewElement, QvError> {
        if !in_veronese(a, &self.spec.params) {
            return Err(QvError::NotInVeronese);
        }
        let mut out = SkewElement::zero();
        for (mono, c) in a.terms() {
            let img = self.apply_monomial(mono)?;
            out = out.add(&img.scale(c)?)?;
        }
        Ok(out)
    }
}

/// exp of a locally nilpotent derivation, lowered to images of the
/// degree-v monomials. In the skew model the image of x^s is the ordered
/// product of (x_i + d(x_i))^{s_i}; in the commutative model the exponential
/// is computed in the plain polynomial ring and transported through the
/// twist isomorphism x^u -> q^{u_1(u_1-1)/2} X^u.
pub fn exp_derivation(d: &Derivation, p: &RingParams) -> Result<AutoSpec, QvError> {
    if d.params() != p {
        return Err(QvError::InvalidParams("derivation built for different parameters".into()));
    }
    d.check_leibniz()?;
    d.check_nilpotent()?;
    if d.commutative_model && (p.n != 2 || p.v % p.m != 0) {
        return Err(QvError::Inapplicable(
            "the commutative model needs n = 2 and m | v".into(),
        ));
    }
    let mut images = BTreeMap::new();
    for s in degree_v_monomials(1, p) {
        let img = if d.commutative_model {
            exp_image_commutative(d, &s, p)?
        } else {
            exp_image_skew(d, &s, p)?
        };
        images.insert(s, img);
    }
    Ok(AutoSpec { params: *p, kind: AutoKind::ExpDerivation { derivation: d.clone(), images } })
}

fn exp_image_skew(d: &Derivation, s: &Monomial, p: &RingParams) -> Result<SkewElement, QvError> {
    let mut acc = SkewElement::one(p);
    for (i, &e) in s.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        let gi = SkewElement::monomial(Monomial::var_pow(p.n, i + 1, 1), CycScalar::one(p.m))
            .add(&d.images[i])?;
        for _ in 0..e {
            acc = acc.mul(&gi, p)?;
        }
    }
    Ok(acc)
}

fn exp_image_commutative(
    d: &Derivation,
    s: &Monomial,
    p: &RingParams,
) -> Result<SkewElement, QvError> {
    let mut acc = SkewElement::one(p);
    for (i, &e) in s.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        let gi = SkewElement::monomial(Monomial::var_pow(p.n, i + 1, 1), CycScalar::one(p.m))
            .add(&d.images[i])?;
        for _ in 0..e {
            acc = acc.mul_plain(&gi)?;
        }
    }
    // transport back through the twist isomorphism
    let gs = two_var_twist(s);
    let mut out = SkewElement::zero();
    for (u, c) in acc.terms() {
        out.add_term(u.clone(), c.mul(&p.q_pow(gs - two_var_twist(u)))?)?;
    }
    Ok(out)
}

/// Multiplicativity of the automorphism on every pair of Veronese monomials
/// of total degree at most `d_bound`, plus degree-filtered invertibility on
/// that range: each image must lead with a single monomial of the same
/// degree, injectively within each degree class.
pub fn verify_homomorphism(g: &AutoSpec, d_bound: i64) -> Result<bool, QvError> {
    let p = *g.params();
    let v = p.v as i64;
    if d_bound < 2 * v {
        return Err(QvError::InvalidParams(format!(
            "degree bound {} must be at least 2v = {}",
            d_bound,
            2 * v
        )));
    }
    let mut eval = AutoEvaluator::new(g.clone());
    let mut classes: Vec<Vec<Monomial>> = Vec::new();
    let mut deg = v;
    while deg <= d_bound {
        classes.push(monomials_of_degree(p.n, deg));
        deg += v;
    }
    let all: Vec<&Monomial> = classes.iter().flatten().collect();
    for &a in &all {
        let img_a = eval.apply_monomial(a)?;
        for &b in &all {
            let (c, ab) = mono_mul(a, b, &p);
            let img_ab = eval.apply_monomial(&ab)?.scale(&c)?;
            let img_b = eval.apply_monomial(b)?;
            if img_ab != img_a.mul(&img_b, &p)? {
                return Ok(false);
            }
        }
    }
    for class in &classes {
        let mut leads = HashSet::new();
        for u in class {
            let img = eval.apply_monomial(u)?;
            let lead = img.leading_component();
            let Some((lm, _)) = lead.as_single() else { return Ok(false) };
            if lm.total_degree() != u.total_degree() || !leads.insert(lm.clone()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Reduced words over g1^{+-1}, g2^{+-1} of length at most `max_len` that
/// act as the identity on every Veronese monomial of degree at most
/// `d_bound`. Letters in the output are 1, -1, 2, -2. A nonempty result
/// falsifies freeness on the tested range; an empty result certifies that
/// no short word collapses there.
pub fn free_word_check(
    g1: &AutoSpec,
    g2: &AutoSpec,
    max_len: usize,
    d_bound: i64,
) -> Result<Vec<Vec<i32>>, QvError> {
    let p = *g1.params();
    if g2.params() != &p {
        return Err(QvError::InvalidParams("automorphism parameter mismatch".into()));
    }
    let mut evals = [
        AutoEvaluator::new(g1.clone()),
        AutoEvaluator::new(g1.inverse()?),
        AutoEvaluator::new(g2.clone()),
        AutoEvaluator::new(g2.inverse()?),
    ];
    let mut tests: Vec<Monomial> = Vec::new();
    let mut deg = p.v as i64;
    while deg <= d_bound {
        tests.extend(monomials_of_degree(p.n, deg));
        deg += p.v as i64;
    }

    let mut collapsing = Vec::new();
    let mut word: Vec<usize> = Vec::new();
    enumerate_reduced(&mut word, max_len, &mut |word| {
        let identity = word_is_identity(word, &mut evals, &tests, &p)?;
        if identity {
            collapsing.push(word.iter().map(|&l| encode_letter(l)).collect());
        }
        Ok(())
    })?;
    Ok(collapsing)
}

fn encode_letter(l: usize) -> i32 {
    match l {
        0 => 1,
        1 => -1,
        2 => 2,
        _ => -2,
    }
}

fn enumerate_reduced(
    word: &mut Vec<usize>,
    max_len: usize,
    visit: &mut impl FnMut(&[usize]) -> Result<(), QvError>,
) -> Result<(), QvError> {
    if !word.is_empty() {
        visit(word)?;
    }
    if word.len() == max_len {
        return Ok(());
    }
    for l in 0..4usize {
        if let Some(&last) = word.last() {
            if last ^ 1 == l {
                continue; // cancellation with the previous letter
            }
        }
        word.push(l);
        enumerate_reduced(word, max_len, visit)?;
        word.pop();
    }
    Ok(())
}

fn word_is_identity(
    word: &[usize],
    evals: &mut [AutoEvaluator; 4],
    tests: &[Monomial],
    p: &RingParams,
) -> Result<bool, QvError> {
    for t in tests {
        let original = SkewElement::monomial(t.clone(), CycScalar::one(p.m));
        let mut el = original.clone();
        for &l in word.iter().rev() {
            el = evals[l].apply(&el)?;
        }
        if el != original {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Invariance of the discriminant witness: the image of the p-power gcd
/// monomial must be a unit multiple of itself.
pub fn check_discriminant_invariance(
    g: &AutoSpec,
    q: &QuasiBasis,
    p_exp: u32,
) -> Result<bool, QvError> {
    let d = p_power_discriminant(p_exp, q);
    let Some(witness) = d.witness else {
        return Err(QvError::Inapplicable(
            "p-power discriminant is not in the Veronese ring".into(),
        ));
    };
    let el = SkewElement::monomial(witness, CycScalar::one(q.params().m));
    let img = apply_auto(g, &el)?;
    eq_up_to_unit(&img, &el)
}

/// True iff g maps (x_1^v ... x_n^v)^a to a nonzero scalar multiple of
/// itself.
pub fn fixes_power_of_product(g: &AutoSpec, a: u32) -> Result<bool, QvError> {
    let p = g.params();
    let e = (p.v * a) as i64;
    let mono = Monomial::new(vec![e; p.n]);
    let el = SkewElement::monomial(mono.clone(), CycScalar::one(p.m));
    let img = apply_auto(g, &el)?;
    Ok(matches!(img.as_single(), Some((m, _)) if m == &mono))
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Exhaustive search over plain permutation maps: the permutations whose
/// monomial-permutation action verifies as a homomorphism at the given
/// degree bound.
pub fn permutation_survivors(p: &RingParams, d_bound: i64) -> Result<Vec<Vec<usize>>, QvError> {
    let mut out = Vec::new();
    for pi in all_permutations(p.n) {
        let g = AutoSpec::permutation_unchecked(*p, pi.clone())?;
        if verify_homomorphism(&g, d_bound)? {
            out.push(pi);
        }
    }
    Ok(out)
}

/// Permutations compatible with the commutation-factor counts of the
/// degree-v elements x_i^{v-1} x_j: for each ordered pair (i, j) the number
/// of third indices k with y_{i,j} y_{i,k} = q y_{i,k} y_{i,j} must be
/// preserved. Needs q distinct from q^{-1} (m > 2), v >= 2 and n >= 3.
pub fn cyclic_shift_survivors(p: &RingParams) -> Result<Vec<Vec<usize>>, QvError> {
    if p.m <= 2 || p.v < 2 || p.n < 3 {
        return Err(QvError::Inapplicable(
            "the commutation-count test needs m > 2, v >= 2 and n >= 3".into(),
        ));
    }
    let n = p.n;
    let q = p.q();
    let y = |i: usize, j: usize| -> Monomial {
        let mut exps = vec![0i64; n];
        exps[i] += p.v as i64 - 1;
        exps[j] += 1;
        Monomial::new(exps)
    };
    let mut counts = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let yij = y(i, j);
                let yik = y(i, k);
                let (c1, m1) = mono_mul(&yij, &yik, p);
                let (c2, m2) = mono_mul(&yik, &yij, p);
                debug_assert_eq!(m1, m2);
                let r = c1.div(&c2)?;
                if r == q {
                    counts[i][j] += 1;
                }
            }
        }
    }
    let mut out = Vec::new();
    for pi in all_permutations(n) {
        let compatible =
            (0..n).all(|i| (0..n).all(|j| i == j || counts[pi[i]][pi[j]] == counts[i][j]));
        if compatible {
            out.push(pi);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::QuasiBasis;

    fn params(n: usize, m: u32, v: u32) -> RingParams {
        RingParams::new(n, m, v).unwrap()
    }

    fn mono_elem(exps: Vec<i64>, m: u32) -> SkewElement {
        SkewElement::monomial(Monomial::new(exps), CycScalar::one(m))
    }

    #[test]
    fn scaling_examples() {
        let p = params(2, 2, 2);
        let id = AutoSpec::identity(p);
        let e = mono_elem(vec![1, 1], 2);
        assert_eq!(apply_auto(&id, &e).unwrap(), e);
        // Scaling(c, k2) on x^{(1,1)}: c * k2 * x^{(1,1)} with N = 1
        let c = CycScalar::from_integer(2, 3);
        let k2 = CycScalar::from_integer(2, 5);
        let g = AutoSpec::scaling(p, c.clone(), vec![k2.clone()]).unwrap();
        let img = apply_auto(&g, &e).unwrap();
        let expect = e.scale(&c.mul(&k2).unwrap()).unwrap();
        assert_eq!(img, expect);
        // rejects the wrong number of factors and zero factors
        assert!(AutoSpec::scaling(p, CycScalar::one(2), vec![]).is_err());
        assert!(AutoSpec::scaling(p, CycScalar::zero(2), vec![CycScalar::one(2)]).is_err());
    }

    #[test]
    fn permutation_requires_m2() {
        assert!(AutoSpec::permutation(params(3, 3, 1), vec![1, 2, 0]).is_err());
        assert!(AutoSpec::permutation(params(3, 2, 1), vec![1, 2, 0]).is_ok());
        assert!(AutoSpec::permutation(params(3, 2, 1), vec![1, 1, 0]).is_err());
    }

    #[test]
    fn twisted_shift_example() {
        // (n=2, m=4, v=2): x^{(0,2)} -> q^4 x^{(2,0)} = x^{(2,0)}
        let p = params(2, 4, 2);
        let g = AutoSpec::twisted_shift(p, 1).unwrap();
        let img = apply_auto(&g, &mono_elem(vec![0, 2], 4)).unwrap();
        assert_eq!(img, mono_elem(vec![2, 0], 4));
        // q^v = q^3 not +-1 at (2,4,3)
        assert!(AutoSpec::twisted_shift(params(2, 4, 3), 1).is_err());
    }

    #[test]
    fn twisted_shift_round_trip() {
        for (n, m, v) in [(2usize, 4u32, 2u32), (3, 2, 1), (4, 3, 3)] {
            let p = params(n, m, v);
            let g = AutoSpec::twisted_shift_unchecked(p, 1);
            let h = g.inverse().unwrap();
            for mono in degree_v_monomials(2, &p) {
                let e = SkewElement::monomial(mono, CycScalar::one(m));
                let round = apply_auto(&h, &apply_auto(&g, &e).unwrap()).unwrap();
                assert_eq!(round, e);
            }
        }
    }

    #[test]
    fn shift_closed_form_matches_reordering() {
        // q^{s_n^2} x^s_pi equals q^{s_n |s|} x^{sigma(s)}
        let p = params(3, 4, 1);
        for mono in monomials_of_degree(3, 3) {
            let (c, m) = shift_forward(&mono, &p);
            let sn = mono.exps()[2];
            let total = mono.total_degree();
            let mut shifted = vec![0i64; 3];
            for i in 0..3 {
                shifted[(i + 1) % 3] = mono.exps()[i];
            }
            assert_eq!(m, Monomial::new(shifted));
            assert_eq!(c, p.q_pow(sn * total));
        }
    }

    #[test]
    fn homomorphism_verdicts() {
        // scaling is always multiplicative
        let p = params(2, 4, 3);
        let g = AutoSpec::scaling(
            p,
            CycScalar::q(4),
            vec![CycScalar::from_integer(4, 2)],
        )
        .unwrap();
        assert!(verify_homomorphism(&g, 2 * 3).unwrap());
        // permutations at q = -1 are automorphisms
        let p = params(3, 2, 1);
        let g = AutoSpec::permutation(p, vec![2, 0, 1]).unwrap();
        assert!(verify_homomorphism(&g, 3).unwrap());
        // the twisted shift fails multiplicativity when q^v is not +-1
        let p = params(2, 4, 3);
        let g = AutoSpec::twisted_shift_unchecked(p, 1);
        assert!(!verify_homomorphism(&g, 6).unwrap());
        // degree bound must be at least 2v
        assert!(verify_homomorphism(&g, 3).is_err());
    }

    #[test]
    fn degree_split_examples() {
        assert_eq!(Derivation::degree_split(2, 1, 1).unwrap(), (1, 3));
        assert_eq!(Derivation::degree_split(3, 2, 1).unwrap(), (2, 4));
        assert_eq!(Derivation::degree_split(2, 1, 2).unwrap(), (1, 5));
        assert!(Derivation::degree_split(4, 2, 1).is_err());
    }

    #[test]
    fn odd_pair_images() {
        // (3,2,1): d1(x_1) = x_2^3 x_3, d3(x_3) = x_1 x_2^3
        let p = params(3, 2, 1);
        let (d1, d3) = Derivation::odd_coprime_pair(&p).unwrap();
        assert_eq!(d1.image_of_generator(0), &mono_elem(vec![0, 3, 1], 2));
        assert!(d1.image_of_generator(1).is_zero());
        assert_eq!(d3.image_of_generator(2), &mono_elem(vec![1, 3, 0], 2));
        assert_eq!(d1.degree_shift(), 3); // beta v = 3
        // (5,2,1): d1(x_1) = x_2^3 x_3 x_4 x_5
        let p = params(5, 2, 1);
        let (d1, d3) = Derivation::odd_coprime_pair(&p).unwrap();
        assert_eq!(d1.image_of_generator(0), &mono_elem(vec![0, 3, 1, 1, 1], 2));
        assert_eq!(d3.image_of_generator(2), &mono_elem(vec![1, 3, 0, 1, 1], 2));
        assert_eq!(d1.degree_shift(), 5);
        // (3,3,2): d1(x_1) = x_2^7 x_3^2, shift beta v = 8
        let p = params(3, 3, 2);
        let (d1, _) = Derivation::odd_coprime_pair(&p).unwrap();
        assert_eq!(d1.image_of_generator(0), &mono_elem(vec![0, 7, 2], 3));
        assert_eq!(d1.degree_shift(), 8);
        // gcd(m, v) = 1 required
        assert!(Derivation::odd_coprime_pair(&params(3, 2, 2)).is_err());
        assert!(Derivation::odd_coprime_pair(&params(4, 3, 2)).is_err());
    }

    #[test]
    fn exp_examples() {
        // zero derivation exponentiates to the identity
        let p = params(3, 2, 1);
        let g = exp_derivation(&Derivation::zero(p), &p).unwrap();
        for mono in degree_v_monomials(2, &p) {
            let e = SkewElement::monomial(mono, CycScalar::one(2));
            assert_eq!(apply_auto(&g, &e).unwrap(), e);
        }
        // (3,2,1): g1(x_1) = x_1 + x_2^3 x_3
        let (d1, _) = Derivation::odd_coprime_pair(&p).unwrap();
        let g1 = exp_derivation(&d1, &p).unwrap();
        let img = apply_auto(&g1, &mono_elem(vec![1, 0, 0], 2)).unwrap();
        let expect = mono_elem(vec![1, 0, 0], 2).add(&mono_elem(vec![0, 3, 1], 2)).unwrap();
        assert_eq!(img, expect);
        // n=2 commutative family: x_1 -> x_2^{v+1}, x_2 -> 0
        let p = params(2, 2, 2);
        let (d1, d2) = Derivation::two_variable_pair(&p).unwrap();
        assert_eq!(d1.image_of_generator(0), &mono_elem(vec![0, 3], 2));
        assert!(d1.image_of_generator(1).is_zero());
        assert_eq!(d2.image_of_generator(1), &mono_elem(vec![3, 0], 2));
        assert_eq!(d1.degree_shift(), 2);
        let g1 = exp_derivation(&d1, &p).unwrap();
        let img = apply_auto(&g1, &mono_elem(vec![2, 0], 2)).unwrap();
        assert_eq!(img.leading_component(), mono_elem(vec![2, 0], 2));
        assert_eq!(img.num_terms(), 3); // (x1 + x2^3)^2 transported
    }

    #[test]
    fn exp_inverse_round_trip() {
        let p = params(3, 2, 1);
        let (d1, _) = Derivation::odd_coprime_pair(&p).unwrap();
        let g = exp_derivation(&d1, &p).unwrap();
        let h = g.inverse().unwrap();
        for mono in degree_v_monomials(3, &p) {
            let e = SkewElement::monomial(mono, CycScalar::one(2));
            assert_eq!(apply_auto(&h, &apply_auto(&g, &e).unwrap()).unwrap(), e);
        }
        let p = params(2, 3, 3);
        let (d1, _) = Derivation::two_variable_pair(&p).unwrap();
        let g = exp_derivation(&d1, &p).unwrap();
        let h = g.inverse().unwrap();
        for mono in degree_v_monomials(2, &p) {
            let e = SkewElement::monomial(mono, CycScalar::one(3));
            assert_eq!(apply_auto(&h, &apply_auto(&g, &e).unwrap()).unwrap(), e);
        }
    }

    #[test]
    fn peeled_application_matches_ambient_product() {
        // the generator-image route must agree with applying the ambient
        // substitution x_i -> x_i + d(x_i) directly
        let p = params(3, 2, 1);
        let (d1, _) = Derivation::odd_coprime_pair(&p).unwrap();
        let g = exp_derivation(&d1, &p).unwrap();
        for mono in monomials_of_degree(3, 3) {
            let via_images = apply_auto(
                &g,
                &SkewElement::monomial(mono.clone(), CycScalar::one(2)),
            )
            .unwrap();
            let direct = exp_image_skew(&d1, &mono, &p).unwrap();
            assert_eq!(via_images, direct, "at {:?}", mono);
        }
    }

    #[test]
    fn two_variable_transport_is_multiplicative() {
        // the twist x^u -> q^{u_1(u_1-1)/2} X^u turns the skew product into
        // the plain product when n = 2 and m | v
        for (m, v) in [(2u32, 2u32), (3, 3), (2, 4)] {
            let p = params(2, m, v);
            let monos = degree_v_monomials(1, &p);
            for a in &monos {
                for b in &monos {
                    let (c, ab) = mono_mul(a, b, &p);
                    // phi(x^a x^b) = c * q^{gamma(ab)} X^{ab}
                    let lhs = c.mul(&p.q_pow(two_var_twist(&ab))).unwrap();
                    // phi(x^a) phi(x^b) = q^{gamma(a) + gamma(b)} X^{ab}
                    let rhs = p.q_pow(two_var_twist(a) + two_var_twist(b));
                    assert_eq!(lhs, rhs, "a={:?} b={:?} (m,v)=({},{})", a, b, m, v);
                }
            }
        }
    }

    #[test]
    fn generator_image_lowering_covers_all_kinds() {
        let p = params(3, 2, 2);
        let g = AutoSpec::permutation(p, vec![1, 0, 2]).unwrap();
        let images = g.generator_image_map().unwrap();
        assert_eq!(images.len(), degree_v_monomials(1, &p).len());
        // pure powers map to scalar multiples of pure powers
        for i in 0..3 {
            let key = Monomial::var_pow(3, i + 1, 2);
            let (mono, _) = images[&key].as_single().unwrap();
            let e: Vec<i64> = mono.exps().to_vec();
            assert_eq!(e.iter().filter(|&&x| x != 0).count(), 1);
            assert_eq!(e.iter().sum::<i64>(), 2);
        }
    }

    #[test]
    fn free_words_on_identity_collapse() {
        let p = params(3, 2, 1);
        let id = AutoSpec::identity(p);
        let words = free_word_check(&id, &id, 2, 2).unwrap();
        // every reduced word acts as the identity
        assert_eq!(words.len(), 4 + 12);
    }

    #[test]
    fn commutator_of_two_variable_pair_is_nontrivial() {
        let p = params(2, 2, 2);
        let (d1, d2) = Derivation::two_variable_pair(&p).unwrap();
        let g1 = exp_derivation(&d1, &p).unwrap();
        let g2 = exp_derivation(&d2, &p).unwrap();
        // [g1, g2] moves x_1^2
        let e = mono_elem(vec![2, 0], 2);
        let mut el = e.clone();
        for g in [&g2.inverse().unwrap(), &g1.inverse().unwrap(), &g2, &g1] {
            el = apply_auto(g, &el).unwrap();
        }
        assert_ne!(el, e);
    }

    #[test]
    fn rigidity_search_small() {
        // q^v not +-1: only the identity permutation survives
        for (n, m, v) in [(3usize, 4u32, 1u32), (2, 3, 1), (3, 3, 1), (2, 5, 2), (3, 5, 1)] {
            let p = params(n, m, v);
            assert_eq!(
                permutation_survivors(&p, 2 * v as i64).unwrap(),
                vec![(0..n).collect::<Vec<_>>()],
                "(n,m,v)=({},{},{})",
                n,
                m,
                v
            );
        }
        // q = -1: all permutations survive
        let p = params(3, 2, 1);
        assert_eq!(permutation_survivors(&p, 2).unwrap().len(), 6);
    }

    #[test]
    fn graded_families_send_pure_powers_to_pure_powers() {
        // any verified automorphism fixing (x_1^v ... x_n^v)^a up to scalar
        // must send each x_i^v to a scalar multiple of some x_j^v
        let graded: Vec<AutoSpec> = vec![
            AutoSpec::scaling(
                params(3, 3, 2),
                CycScalar::q(3),
                vec![CycScalar::from_integer(3, 2), CycScalar::q_pow(3, 2)],
            )
            .unwrap(),
            AutoSpec::permutation(params(3, 2, 2), vec![2, 0, 1]).unwrap(),
            AutoSpec::twisted_shift(params(3, 4, 2), 1).unwrap(),
            AutoSpec::twisted_shift(params(2, 3, 3), 1).unwrap(),
        ];
        for g in graded {
            let p = *g.params();
            assert!(fixes_power_of_product(&g, 1).unwrap());
            let images = g.generator_image_map().unwrap();
            for i in 1..=p.n {
                let img = &images[&Monomial::var_pow(p.n, i, p.v as i64)];
                let (mono, _) = img.as_single().expect("image is a scalar times a monomial");
                assert_eq!(mono.exps().iter().filter(|&&e| e != 0).count(), 1);
                assert_eq!(mono.total_degree(), p.v as i64);
            }
        }
    }

    #[test]
    fn shift_compatibility_counts() {
        // compatible permutations are exactly the cyclic shifts
        for (n, m, v) in [(3usize, 4u32, 2u32), (4, 3, 3)] {
            let p = params(n, m, v);
            let got = cyclic_shift_survivors(&p).unwrap();
            let mut expect: Vec<Vec<usize>> = (0..n)
                .map(|t| (0..n).map(|i| (i + t) % n).collect())
                .collect();
            expect.sort();
            let mut got = got;
            got.sort();
            assert_eq!(got, expect, "(n,m,v)=({},{},{})", n, m, v);
        }
        assert!(cyclic_shift_survivors(&params(3, 2, 2)).is_err());
    }

    #[test]
    fn conjugating_a_scaling_by_a_permutation_is_a_scaling() {
        // the permutation action on the scaling parameters can be read off
        // from the composite's generator images: still diagonal, entries
        // permuted and twisted
        let p = params(3, 2, 1);
        let sigma = AutoSpec::permutation(p, vec![1, 2, 0]).unwrap();
        let scale = AutoSpec::scaling(
            p,
            CycScalar::from_integer(2, 2),
            vec![CycScalar::from_integer(2, 3), CycScalar::from_integer(2, 5)],
        )
        .unwrap();
        let conj = sigma
            .compose(&scale.compose(&sigma.inverse().unwrap()).unwrap())
            .unwrap();
        assert!(verify_homomorphism(&conj, 2).unwrap());
        for (gen, img) in conj.generator_image_map().unwrap() {
            let (mono, c) = img.as_single().expect("diagonal images");
            assert_eq!(mono, &gen);
            assert!(!c.is_zero());
        }
    }

    #[test]
    fn discriminant_invariance_examples() {
        let p = params(3, 2, 2);
        let q = QuasiBasis::enumerate(p);
        assert!(check_discriminant_invariance(&AutoSpec::identity(p), &q, 1).unwrap());
        let g = AutoSpec::scaling(
            p,
            CycScalar::from_integer(2, 2),
            vec![CycScalar::from_integer(2, 3), CycScalar::q(2)],
        )
        .unwrap();
        assert!(check_discriminant_invariance(&g, &q, 1).unwrap());
        let p = params(2, 2, 1);
        let q = QuasiBasis::enumerate(p);
        let swap = AutoSpec::permutation(p, vec![1, 0]).unwrap();
        assert!(check_discriminant_invariance(&swap, &q, 1).unwrap());
    }

    #[test]
    fn product_power_fixing() {
        let p = params(3, 2, 1);
        assert!(fixes_power_of_product(&AutoSpec::permutation(p, vec![2, 0, 1]).unwrap(), 1)
            .unwrap());
        let (d1, _) = Derivation::odd_coprime_pair(&p).unwrap();
        let g1 = exp_derivation(&d1, &p).unwrap();
        assert!(!fixes_power_of_product(&g1, 1).unwrap());
    }
}
