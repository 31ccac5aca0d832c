//! Sparse multivariate polynomials over an exact coefficient field
//! (the rationals or a prime field).

use super::monomial::{Monomial, MonomialOrder};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Coefficient field of a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoeffField {
    Rationals,
    Prime(u64),
}

/// A field scalar. `Fp` values are stored reduced to `0..p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coef {
    Rat(BigRational),
    Fp(u64),
}

impl Coef {
    pub fn is_zero(&self) -> bool {
        match self {
            Coef::Rat(r) => r.is_zero(),
            Coef::Fp(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coef::Rat(r) => r.is_one(),
            Coef::Fp(x) => *x == 1,
        }
    }
}

impl CoeffField {
    pub fn zero(&self) -> Coef {
        match self {
            CoeffField::Rationals => Coef::Rat(BigRational::zero()),
            CoeffField::Prime(_) => Coef::Fp(0),
        }
    }

    pub fn one(&self) -> Coef {
        match self {
            CoeffField::Rationals => Coef::Rat(BigRational::one()),
            CoeffField::Prime(_) => Coef::Fp(1),
        }
    }

    pub fn from_int(&self, n: &BigInt) -> Coef {
        match self {
            CoeffField::Rationals => Coef::Rat(BigRational::from(n.clone())),
            CoeffField::Prime(p) => {
                let m = BigInt::from(*p);
                let mut r = n % &m;
                if r.is_negative() {
                    r += &m;
                }
                let digits = r.to_u64_digits().1;
                Coef::Fp(if digits.is_empty() { 0 } else { digits[0] })
            }
        }
    }

    pub fn add(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (CoeffField::Rationals, Coef::Rat(x), Coef::Rat(y)) => Coef::Rat(x + y),
            (CoeffField::Prime(p), Coef::Fp(x), Coef::Fp(y)) => {
                Coef::Fp(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("coefficient field mismatch"),
        }
    }

    pub fn sub(&self, a: &Coef, b: &Coef) -> Coef {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coef) -> Coef {
        match (self, a) {
            (CoeffField::Rationals, Coef::Rat(x)) => Coef::Rat(-x),
            (CoeffField::Prime(p), Coef::Fp(x)) => Coef::Fp(if *x == 0 { 0 } else { p - x }),
            _ => panic!("coefficient field mismatch"),
        }
    }

    pub fn mul(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (CoeffField::Rationals, Coef::Rat(x), Coef::Rat(y)) => Coef::Rat(x * y),
            (CoeffField::Prime(p), Coef::Fp(x), Coef::Fp(y)) => {
                Coef::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("coefficient field mismatch"),
        }
    }

    pub fn inv(&self, a: &Coef) -> Coef {
        match (self, a) {
            (CoeffField::Rationals, Coef::Rat(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Coef::Rat(x.recip())
            }
            (CoeffField::Prime(p), Coef::Fp(x)) => Coef::Fp(mod_inverse(*x, *p)),
            _ => panic!("coefficient field mismatch"),
        }
    }

    pub fn div(&self, a: &Coef, b: &Coef) -> Coef {
        self.mul(a, &self.inv(b))
    }
}

/// Extended-Euclid inverse mod p (p prime, x nonzero mod p).
pub fn mod_inverse(x: u64, p: u64) -> u64 {
    assert!(x % p != 0, "inverse of zero mod {}", p);
    let (mut r0, mut r1) = (p as i128, (x % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    (t0.rem_euclid(p as i128)) as u64
}

/// Sparse polynomial: terms sorted descending under the owning ring's order,
/// no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    pub terms: Vec<(Monomial, Coef)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn constant(field: &CoeffField, c: Coef, nvars: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let _ = field;
        MultiPoly {
            terms: vec![(Monomial::one(nvars), c)],
        }
    }

    pub fn var(field: &CoeffField, nvars: usize, i: usize) -> Self {
        MultiPoly {
            terms: vec![(Monomial::var(nvars, i, 1), field.one())],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading(&self) -> Option<&(Monomial, Coef)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    fn merge(order: MonomialOrder, field: &CoeffField, a: &MultiPoly, b: &MultiPoly, negate_b: bool) -> MultiPoly {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.terms.len() || j < b.terms.len() {
            let take_a = if i >= a.terms.len() {
                false
            } else if j >= b.terms.len() {
                true
            } else {
                match order.cmp(&a.terms[i].0, &b.terms[j].0) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => {
                        let bc = if negate_b {
                            field.neg(&b.terms[j].1)
                        } else {
                            b.terms[j].1.clone()
                        };
                        let c = field.add(&a.terms[i].1, &bc);
                        if !c.is_zero() {
                            out.push((a.terms[i].0.clone(), c));
                        }
                        i += 1;
                        j += 1;
                        continue;
                    }
                }
            };
            if take_a {
                out.push(a.terms[i].clone());
                i += 1;
            } else {
                let bc = if negate_b {
                    field.neg(&b.terms[j].1)
                } else {
                    b.terms[j].1.clone()
                };
                out.push((b.terms[j].0.clone(), bc));
                j += 1;
            }
        }
        MultiPoly { terms: out }
    }

    pub fn add(order: MonomialOrder, field: &CoeffField, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        Self::merge(order, field, a, b, false)
    }

    pub fn sub(order: MonomialOrder, field: &CoeffField, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        Self::merge(order, field, a, b, true)
    }

    pub fn neg(&self, field: &CoeffField) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(c)))
                .collect(),
        }
    }

    /// Multiply by a single term; preserves sortedness.
    pub fn mul_term(&self, field: &CoeffField, mono: &Monomial, coef: &Coef) -> MultiPoly {
        if coef.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), field.mul(c, coef)))
                .collect(),
        }
    }

    pub fn scale(&self, field: &CoeffField, coef: &Coef) -> MultiPoly {
        if coef.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.mul(c, coef)))
                .collect(),
        }
    }

    pub fn mul(order: MonomialOrder, field: &CoeffField, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for (m, c) in &a.terms {
            let part = b.mul_term(field, m, c);
            acc = Self::add(order, field, &acc, &part);
        }
        acc
    }

    pub fn pow(order: MonomialOrder, field: &CoeffField, a: &MultiPoly, n: u32) -> MultiPoly {
        let nvars = a
            .terms
            .first()
            .map(|(m, _)| m.nvars())
            .unwrap_or(0);
        let mut acc = MultiPoly::constant(field, field.one(), nvars);
        for _ in 0..n {
            acc = Self::mul(order, field, &acc, a);
        }
        acc
    }

    /// Make the leading coefficient 1 (no-op for zero).
    pub fn monic(&self, field: &CoeffField) -> MultiPoly {
        match self.leading() {
            None => MultiPoly::zero(),
            Some((_, c)) => self.scale(field, &field.inv(c)),
        }
    }

    /// Full normal form of `self` modulo `divisors` (each nonzero): the
    /// remainder of multivariate division, with every term reduced.
    pub fn normal_form(
        &self,
        order: MonomialOrder,
        field: &CoeffField,
        divisors: &[MultiPoly],
    ) -> MultiPoly {
        let mut rem = MultiPoly::zero();
        let mut cur = self.clone();
        'outer: while let Some((lm, lc)) = cur.leading().cloned() {
            for d in divisors {
                if let Some((dm, dc)) = d.leading() {
                    if dm.divides(&lm) {
                        let factor_m = dm.quotient_into(&lm);
                        let factor_c = field.div(&lc, dc);
                        let sub = d.mul_term(field, &factor_m, &factor_c);
                        cur = Self::sub(order, field, &cur, &sub);
                        continue 'outer;
                    }
                }
            }
            // leading term irreducible: move it to the remainder
            rem.terms.push((lm, lc));
            cur.terms.remove(0);
        }
        rem
    }
}
