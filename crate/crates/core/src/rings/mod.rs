//! Exact base rings and their elements: the integers, Z/m, prime fields,
//! the rationals, multivariate polynomial rings over a field, and quotients
//! of polynomial rings by an ideal (stored through its reduced Groebner
//! basis). All arithmetic is exact; equality is representational.

mod groebner;
mod linalg;
mod matrix;
mod monomial;
mod poly;
mod snf;

pub use groebner::{module_groebner, vec_normal_form, GraphSolver, VecPoly};
pub use linalg::{kernel, rank, solve_matrix, solve_vector};
pub use matrix::Matrix;
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{Coef, CoeffField, MultiPoly};
pub use snf::{det_bigint, smith_normal_form, Snf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingError {
    WrongRingKind { expected: &'static str, found: String },
    MixedRings,
    NotPrime(u64),
    BadModulus(String),
    BadVariables(String),
    DimensionMismatch(String),
    NotInvertible,
    UnsupportedMap(String),
    ResolutionTooShort { needed: usize },
    NotFiniteLength,
    InvalidMap(String),
    InvalidComplex(String),
    BadArgument(String),
    CheckFailed(String),
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::WrongRingKind { expected, found } => {
                write!(f, "wrong ring kind: expected {}, found {}", expected, found)
            }
            RingError::MixedRings => write!(f, "elements from different rings"),
            RingError::NotPrime(p) => write!(f, "{} is not prime", p),
            RingError::BadModulus(s) => write!(f, "bad modulus: {}", s),
            RingError::BadVariables(s) => write!(f, "bad variables: {}", s),
            RingError::DimensionMismatch(s) => write!(f, "dimension mismatch: {}", s),
            RingError::NotInvertible => write!(f, "element is not invertible"),
            RingError::UnsupportedMap(s) => write!(f, "unsupported ring map: {}", s),
            RingError::ResolutionTooShort { needed } => {
                write!(f, "resolution too short: increase length to at least {}", needed)
            }
            RingError::NotFiniteLength => write!(f, "module does not have finite length"),
            RingError::InvalidMap(s) => write!(f, "invalid map: {}", s),
            RingError::InvalidComplex(s) => write!(f, "invalid complex: {}", s),
            RingError::BadArgument(s) => write!(f, "bad argument: {}", s),
            RingError::CheckFailed(s) => write!(f, "check failed: {}", s),
        }
    }
}

impl std::error::Error for RingError {}

pub type Result<T> = std::result::Result<T, RingError>;

#[derive(Debug)]
pub struct PolyRing {
    pub coeff: CoeffField,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
}

#[derive(Debug)]
pub struct QuotientRing {
    /// The underlying polynomial ring.
    pub base: Ring,
    /// Reduced, auto-reduced Groebner basis of the defining ideal.
    pub basis: Vec<MultiPoly>,
}

#[derive(Debug)]
pub enum RingKind {
    Integers,
    IntegersMod(BigInt),
    PrimeField(u64),
    Rationals,
    Poly(PolyRing),
    Quotient(QuotientRing),
}

/// A shared ring descriptor. Cloning is cheap; equality is structural.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingKind>);

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&*self.0, &*other.0) {
            (RingKind::Integers, RingKind::Integers) => true,
            (RingKind::Rationals, RingKind::Rationals) => true,
            (RingKind::IntegersMod(a), RingKind::IntegersMod(b)) => a == b,
            (RingKind::PrimeField(a), RingKind::PrimeField(b)) => a == b,
            (RingKind::Poly(a), RingKind::Poly(b)) => {
                a.coeff == b.coeff && a.vars == b.vars && a.order == b.order
            }
            (RingKind::Quotient(a), RingKind::Quotient(b)) => {
                a.base == b.base && a.basis == b.basis
            }
            _ => false,
        }
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn integers() -> Ring {
        Ring(Arc::new(RingKind::Integers))
    }

    pub fn rationals() -> Ring {
        Ring(Arc::new(RingKind::Rationals))
    }

    pub fn integers_mod(m: &BigInt) -> Result<Ring> {
        if m < &BigInt::from(2) {
            return Err(RingError::BadModulus(format!("{}", m)));
        }
        Ok(Ring(Arc::new(RingKind::IntegersMod(m.clone()))))
    }

    pub fn prime_field(p: u64) -> Result<Ring> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        Ok(Ring(Arc::new(RingKind::PrimeField(p))))
    }

    pub fn poly(coeff: &Ring, vars: &[&str], order: MonomialOrder) -> Result<Ring> {
        let cf = match coeff.kind() {
            RingKind::Rationals => CoeffField::Rationals,
            RingKind::PrimeField(p) => CoeffField::Prime(*p),
            other => {
                return Err(RingError::WrongRingKind {
                    expected: "a coefficient field (rationals or prime field)",
                    found: format!("{:?}", other),
                })
            }
        };
        if vars.is_empty() {
            return Err(RingError::BadVariables("need at least one variable".into()));
        }
        let mut names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(RingError::BadVariables("duplicate variable names".into()));
        }
        names.shrink_to_fit();
        Ok(Ring(Arc::new(RingKind::Poly(PolyRing {
            coeff: cf,
            vars: names,
            order,
        }))))
    }

    /// Quotient of a polynomial ring by the ideal generated by `gens`;
    /// the stored defining basis is the reduced Groebner basis.
    pub fn quotient(base: &Ring, gens: &[RingElement]) -> Result<Ring> {
        let pr = base.poly_ring()?;
        let mut polys = Vec::new();
        for g in gens {
            if g.ring() != base {
                return Err(RingError::MixedRings);
            }
            if let Repr::Poly(p) = &g.repr {
                if !p.is_zero() {
                    polys.push(p.clone());
                }
            }
        }
        let basis = groebner::ideal_groebner(pr, polys);
        Ok(Ring(Arc::new(RingKind::Quotient(QuotientRing {
            base: base.clone(),
            basis,
        }))))
    }

    pub fn kind(&self) -> &RingKind {
        &self.0
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind(), RingKind::Rationals | RingKind::PrimeField(_))
    }

    pub fn poly_ring(&self) -> Result<&PolyRing> {
        match self.kind() {
            RingKind::Poly(pr) => Ok(pr),
            other => Err(RingError::WrongRingKind {
                expected: "polynomial ring",
                found: format!("{:?}", other),
            }),
        }
    }

    /// For a quotient ring, the underlying polynomial ring and defining basis.
    pub fn quotient_parts(&self) -> Result<(&Ring, &[MultiPoly])> {
        match self.kind() {
            RingKind::Quotient(q) => Ok((&q.base, &q.basis)),
            other => Err(RingError::WrongRingKind {
                expected: "quotient ring",
                found: format!("{:?}", other),
            }),
        }
    }

    /// The polynomial structure this ring computes with (itself for a
    /// polynomial ring, the base for a quotient).
    pub fn poly_structure(&self) -> Result<&PolyRing> {
        match self.kind() {
            RingKind::Poly(pr) => Ok(pr),
            RingKind::Quotient(q) => q.base.poly_ring(),
            other => Err(RingError::WrongRingKind {
                expected: "polynomial or quotient ring",
                found: format!("{:?}", other),
            }),
        }
    }

    pub fn nvars(&self) -> usize {
        self.poly_structure().map(|pr| pr.vars.len()).unwrap_or(0)
    }

    pub fn zero(&self) -> RingElement {
        let repr = match self.kind() {
            RingKind::Integers | RingKind::IntegersMod(_) => Repr::Int(BigInt::zero()),
            RingKind::PrimeField(_) => Repr::Fp(0),
            RingKind::Rationals => Repr::Rat(BigRational::zero()),
            RingKind::Poly(_) | RingKind::Quotient(_) => Repr::Poly(MultiPoly::zero()),
        };
        RingElement { ring: self.clone(), repr }
    }

    pub fn one(&self) -> RingElement {
        self.from_bigint(&BigInt::one())
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> RingElement {
        let repr = match self.kind() {
            RingKind::Integers => Repr::Int(n.clone()),
            RingKind::IntegersMod(m) => Repr::Int(n.mod_floor(m)),
            RingKind::PrimeField(p) => {
                let m = BigInt::from(*p);
                let r = n.mod_floor(&m);
                let digits = r.to_u64_digits().1;
                Repr::Fp(if digits.is_empty() { 0 } else { digits[0] })
            }
            RingKind::Rationals => Repr::Rat(BigRational::from(n.clone())),
            RingKind::Poly(pr) => Repr::Poly(MultiPoly::constant(
                &pr.coeff,
                pr.coeff.from_int(n),
                pr.vars.len(),
            )),
            RingKind::Quotient(q) => {
                let pr = q.base.poly_ring().expect("quotient over polynomial ring");
                let p = MultiPoly::constant(&pr.coeff, pr.coeff.from_int(n), pr.vars.len());
                Repr::Poly(p.normal_form(pr.order, &pr.coeff, &q.basis))
            }
        };
        RingElement { ring: self.clone(), repr }
    }

    pub fn var(&self, i: usize) -> Result<RingElement> {
        let pr = self.poly_structure()?;
        if i >= pr.vars.len() {
            return Err(RingError::BadVariables(format!("no variable #{}", i)));
        }
        let p = MultiPoly::var(&pr.coeff, pr.vars.len(), i);
        Ok(self.make_poly(p))
    }

    pub fn var_named(&self, name: &str) -> Result<RingElement> {
        let pr = self.poly_structure()?;
        match pr.vars.iter().position(|v| v == name) {
            Some(i) => self.var(i),
            None => Err(RingError::BadVariables(format!("no variable `{}`", name))),
        }
    }

    /// Wrap a raw polynomial as an element, normal-forming in a quotient.
    pub fn make_poly(&self, p: MultiPoly) -> RingElement {
        let repr = match self.kind() {
            RingKind::Poly(_) => Repr::Poly(p),
            RingKind::Quotient(q) => {
                let pr = q.base.poly_ring().expect("quotient over polynomial ring");
                Repr::Poly(p.normal_form(pr.order, &pr.coeff, &q.basis))
            }
            _ => panic!("make_poly on non-polynomial ring"),
        };
        RingElement { ring: self.clone(), repr }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            RingKind::Integers => write!(f, "ZZ"),
            RingKind::IntegersMod(m) => write!(f, "ZZ/{}", m),
            RingKind::PrimeField(p) => write!(f, "GF({})", p),
            RingKind::Rationals => write!(f, "QQ"),
            RingKind::Poly(pr) => {
                let coeff = match pr.coeff {
                    CoeffField::Rationals => "QQ".to_string(),
                    CoeffField::Prime(p) => format!("GF({})", p),
                };
                write!(f, "{}[{}]", coeff, pr.vars.join(","))
            }
            RingKind::Quotient(q) => {
                let parts: Vec<String> = q
                    .basis
                    .iter()
                    .map(|p| display_poly(p, &q.base).to_string())
                    .collect();
                write!(f, "{}/({})", q.base, parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Repr {
    Int(BigInt),
    Fp(u64),
    Rat(BigRational),
    Poly(MultiPoly),
}

/// An element of a concrete ring, stored as its canonical representative.
#[derive(Clone, Debug)]
pub struct RingElement {
    ring: Ring,
    pub(crate) repr: Repr,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(self.ring == other.ring, "comparing elements of different rings");
        self.repr == other.repr
    }
}

impl Eq for RingElement {}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Int(n) => n.is_zero(),
            Repr::Fp(x) => *x == 0,
            Repr::Rat(r) => r.is_zero(),
            Repr::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    fn check_same(&self, other: &RingElement) {
        assert!(self.ring == other.ring, "elements from different rings");
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        self.check_same(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Int(a), Repr::Int(b)) => match self.ring.kind() {
                RingKind::IntegersMod(m) => Repr::Int((a + b).mod_floor(m)),
                _ => Repr::Int(a + b),
            },
            (Repr::Fp(a), Repr::Fp(b)) => {
                let p = match self.ring.kind() {
                    RingKind::PrimeField(p) => *p,
                    _ => unreachable!(),
                };
                Repr::Fp(((*a as u128 + *b as u128) % p as u128) as u64)
            }
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a + b),
            (Repr::Poly(a), Repr::Poly(b)) => {
                let pr = self.ring.poly_structure().unwrap();
                Repr::Poly(MultiPoly::add(pr.order, &pr.coeff, a, b))
            }
            _ => panic!("mismatched representations"),
        };
        RingElement { ring: self.ring.clone(), repr }
    }

    pub fn neg(&self) -> RingElement {
        let repr = match &self.repr {
            Repr::Int(a) => match self.ring.kind() {
                RingKind::IntegersMod(m) => Repr::Int((-a).mod_floor(m)),
                _ => Repr::Int(-a),
            },
            Repr::Fp(a) => {
                let p = match self.ring.kind() {
                    RingKind::PrimeField(p) => *p,
                    _ => unreachable!(),
                };
                Repr::Fp(if *a == 0 { 0 } else { p - a })
            }
            Repr::Rat(a) => Repr::Rat(-a),
            Repr::Poly(a) => {
                let pr = self.ring.poly_structure().unwrap();
                Repr::Poly(a.neg(&pr.coeff))
            }
        };
        RingElement { ring: self.ring.clone(), repr }
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RingElement) -> RingElement {
        self.check_same(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Int(a), Repr::Int(b)) => match self.ring.kind() {
                RingKind::IntegersMod(m) => Repr::Int((a * b).mod_floor(m)),
                _ => Repr::Int(a * b),
            },
            (Repr::Fp(a), Repr::Fp(b)) => {
                let p = match self.ring.kind() {
                    RingKind::PrimeField(p) => *p,
                    _ => unreachable!(),
                };
                Repr::Fp(((*a as u128 * *b as u128) % p as u128) as u64)
            }
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a * b),
            (Repr::Poly(a), Repr::Poly(b)) => {
                let pr = self.ring.poly_structure().unwrap();
                let prod = MultiPoly::mul(pr.order, &pr.coeff, a, b);
                match self.ring.kind() {
                    RingKind::Quotient(q) => {
                        Repr::Poly(prod.normal_form(pr.order, &pr.coeff, &q.basis))
                    }
                    _ => Repr::Poly(prod),
                }
            }
            _ => panic!("mismatched representations"),
        };
        RingElement { ring: self.ring.clone(), repr }
    }

    pub fn pow(&self, n: u32) -> RingElement {
        let mut acc = self.ring.one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse where the ring supports deciding it.
    pub fn inverse(&self) -> Option<RingElement> {
        match (&self.repr, self.ring.kind()) {
            (Repr::Rat(a), RingKind::Rationals) => {
                if a.is_zero() {
                    None
                } else {
                    Some(RingElement { ring: self.ring.clone(), repr: Repr::Rat(a.recip()) })
                }
            }
            (Repr::Fp(a), RingKind::PrimeField(p)) => {
                if *a == 0 {
                    None
                } else {
                    Some(RingElement {
                        ring: self.ring.clone(),
                        repr: Repr::Fp(poly::mod_inverse(*a, *p)),
                    })
                }
            }
            (Repr::Int(a), RingKind::Integers) => {
                if a.abs().is_one() {
                    Some(self.clone())
                } else {
                    None
                }
            }
            (Repr::Int(a), RingKind::IntegersMod(m)) => {
                let g = a.gcd(m);
                if !g.is_one() {
                    return None;
                }
                let e = a.extended_gcd(m);
                Some(RingElement {
                    ring: self.ring.clone(),
                    repr: Repr::Int(e.x.mod_floor(m)),
                })
            }
            (Repr::Poly(p), _) => {
                // constants invertible in the coefficient field; in a quotient
                // a unit may be non-constant, which we do not decide here
                if p.is_constant() && !p.is_zero() {
                    let pr = self.ring.poly_structure().unwrap();
                    let (m, c) = &p.terms[0];
                    let inv = MultiPoly {
                        terms: vec![(m.clone(), pr.coeff.inv(c))],
                    };
                    Some(RingElement { ring: self.ring.clone(), repr: Repr::Poly(inv) })
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub(crate) fn as_bigint(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Int(n) => Some(n),
            _ => None,
        }
    }

    pub(crate) fn as_poly(&self) -> Option<&MultiPoly> {
        match &self.repr {
            Repr::Poly(p) => Some(p),
            _ => None,
        }
    }

    /// The integer representative, for elements of Z or Z/m.
    pub fn integer_value(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Int(n) => Some(n.clone()),
            _ => None,
        }
    }

    /// Terms of a polynomial over the rationals as (exponents, coefficient)
    /// pairs; `None` for other representations.
    pub fn rational_terms(&self) -> Option<Vec<(Vec<u32>, BigRational)>> {
        match &self.repr {
            Repr::Poly(p) => {
                let mut out = Vec::new();
                for (m, c) in &p.terms {
                    match c {
                        Coef::Rat(r) => out.push((m.0.to_vec(), r.clone())),
                        Coef::Fp(_) => return None,
                    }
                }
                Some(out)
            }
            Repr::Rat(r) => Some(vec![(Vec::new(), r.clone())]),
            _ => None,
        }
    }
}

impl Ring {
    /// An element from an exact rational: the rationals themselves, or a
    /// constant in a polynomial ring over the rationals.
    pub fn from_rational(&self, r: &BigRational) -> Result<RingElement> {
        match self.kind() {
            RingKind::Rationals => Ok(RingElement {
                ring: self.clone(),
                repr: Repr::Rat(r.clone()),
            }),
            RingKind::Poly(pr) if pr.coeff == CoeffField::Rationals => {
                let p = MultiPoly::constant(&pr.coeff, Coef::Rat(r.clone()), pr.vars.len());
                Ok(self.make_poly(p))
            }
            other => Err(RingError::WrongRingKind {
                expected: "rationals or polynomials over the rationals",
                found: format!("{:?}", other),
            }),
        }
    }
}

struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    vars: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms.iter().enumerate() {
            let coef_str = match c {
                Coef::Rat(r) => r.to_string(),
                Coef::Fp(x) => x.to_string(),
            };
            let neg = coef_str.starts_with('-');
            let abs = if neg { &coef_str[1..] } else { &coef_str[..] };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = mono_string(m, self.vars);
            if mono.is_empty() {
                write!(f, "{}", abs)?;
            } else if abs == "1" {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", abs, mono)?;
            }
        }
        Ok(())
    }
}

fn mono_string(m: &Monomial, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if e == 1 {
            parts.push(vars[i].clone());
        } else {
            parts.push(format!("{}^{}", vars[i], e));
        }
    }
    parts.join("*")
}

fn display_poly<'a>(p: &'a MultiPoly, base: &'a Ring) -> PolyDisplay<'a> {
    let vars = base.poly_ring().map(|pr| pr.vars.as_slice()).unwrap_or(&[]);
    PolyDisplay { poly: p, vars }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Int(n) => write!(f, "{}", n),
            Repr::Fp(x) => write!(f, "{}", x),
            Repr::Rat(r) => write!(f, "{}", r),
            Repr::Poly(p) => {
                let pr = self.ring.poly_structure().unwrap();
                write!(f, "{}", PolyDisplay { poly: p, vars: &pr.vars })
            }
        }
    }
}

/// Reduced, auto-reduced Groebner basis of the ideal generated by the given
/// polynomial-ring elements, deterministic for a fixed monomial order.
pub fn groebner_basis(gens: &[RingElement]) -> Result<Vec<RingElement>> {
    if gens.is_empty() {
        return Err(RingError::BadArgument("empty generator list".into()));
    }
    let ring = gens[0].ring().clone();
    let pr = ring.poly_ring()?;
    let mut polys = Vec::new();
    for g in gens {
        if g.ring() != &ring {
            return Err(RingError::MixedRings);
        }
        if let Some(p) = g.as_poly() {
            if !p.is_zero() {
                polys.push(p.clone());
            }
        }
    }
    Ok(groebner::ideal_groebner(pr, polys)
        .into_iter()
        .map(|p| ring.make_poly(p))
        .collect())
}

/// The unique remainder of f modulo a Groebner basis; zero iff f lies in
/// the ideal.
pub fn normal_form(f: &RingElement, basis: &[RingElement]) -> Result<RingElement> {
    let ring = f.ring().clone();
    let pr = ring.poly_ring()?;
    let mut polys = Vec::new();
    for b in basis {
        if b.ring() != &ring {
            return Err(RingError::MixedRings);
        }
        if let Some(p) = b.as_poly() {
            if !p.is_zero() {
                polys.push(p.clone());
            }
        }
    }
    let p = f.as_poly().ok_or(RingError::MixedRings)?;
    Ok(ring.make_poly(p.normal_form(pr.order, &pr.coeff, &polys)))
}

/// All degree-`n` products of the generators, deduplicated; generators of
/// the n-th power of the ideal they generate.
pub fn ideal_power(gens: &[RingElement], n: u32) -> Result<Vec<RingElement>> {
    if n == 0 {
        return Err(RingError::BadArgument(
            "ideal_power requires n >= 1 (the unit ideal is represented explicitly)".into(),
        ));
    }
    if gens.is_empty() {
        return Err(RingError::BadArgument("empty generator list".into()));
    }
    let ring = gens[0].ring().clone();
    for g in gens {
        if g.ring() != &ring {
            return Err(RingError::MixedRings);
        }
    }
    let mut current: Vec<RingElement> = gens.to_vec();
    for _ in 1..n {
        let mut next = Vec::new();
        for a in &current {
            for g in gens {
                let prod = a.mul(g);
                if !prod.is_zero() && !next.contains(&prod) {
                    next.push(prod);
                }
            }
        }
        current = next;
    }
    let mut out = Vec::new();
    for e in current {
        if !e.is_zero() && !out.contains(&e) {
            out.push(e);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groebner_and_normal_form_ops() {
        let q = Ring::rationals();
        let p = Ring::poly(&q, &["x", "y"], MonomialOrder::Lex).unwrap();
        let x = p.var(0).unwrap();
        let y = p.var(1).unwrap();
        // {x} stays {x}; {x - y, y} reduces to {x, y}
        assert_eq!(groebner_basis(&[x.clone()]).unwrap(), vec![x.clone()]);
        let gb = groebner_basis(&[x.sub(&y), y.clone()]).unwrap();
        assert_eq!(gb.len(), 2);
        assert!(gb.contains(&x) && gb.contains(&y));
        // normal forms against {x^2, xy}
        let basis = vec![x.pow(2), x.mul(&y)];
        assert!(normal_form(&x.pow(2), &[x.clone()]).unwrap().is_zero());
        assert_eq!(normal_form(&y, &[x.clone()]).unwrap(), y);
        assert_eq!(normal_form(&x.pow(2).add(&y), &basis).unwrap(), y);
        // wrong ring kind is rejected
        let z = Ring::integers();
        assert!(groebner_basis(&[z.from_int(2)]).is_err());
        // mismatched rings are rejected
        let p2 = Ring::poly(&q, &["x"], MonomialOrder::Lex).unwrap();
        assert!(normal_form(&p2.var(0).unwrap(), &[x]).is_err());
    }

    #[test]
    fn integer_and_rational_arithmetic() {
        let z = Ring::integers();
        let a = z.from_int(7);
        let b = z.from_int(-3);
        assert_eq!(a.add(&b), z.from_int(4));
        assert_eq!(a.mul(&b), z.from_int(-21));
        assert!(z.from_int(1).inverse().is_some());
        assert!(z.from_int(2).inverse().is_none());

        let q = Ring::rationals();
        let h = q.from_int(2).inverse().unwrap();
        assert_eq!(h.add(&h), q.one());
    }

    #[test]
    fn modular_ring() {
        let z4 = Ring::integers_mod(&BigInt::from(4)).unwrap();
        let two = z4.from_int(2);
        assert!(two.mul(&two).is_zero());
        assert_eq!(z4.from_int(7), z4.from_int(3));
        assert_eq!(z4.from_int(3).inverse().unwrap(), z4.from_int(3));
        assert!(two.inverse().is_none());
    }

    #[test]
    fn quotient_ring_normal_forms() {
        let q = Ring::rationals();
        let p = Ring::poly(&q, &["x"], MonomialOrder::GrevLex).unwrap();
        let x = p.var(0).unwrap();
        let r = Ring::quotient(&p, &[x.mul(&x)]).unwrap();
        let xb = r.var(0).unwrap();
        assert!(xb.mul(&xb).is_zero());
        assert!(!xb.is_zero());
        // x^3 also dies
        assert!(xb.pow(3).is_zero());
    }

    #[test]
    fn ideal_power_examples() {
        let z = Ring::integers();
        // (p)^1 = (p)
        let g = ideal_power(&[z.from_int(5)], 1).unwrap();
        assert_eq!(g, vec![z.from_int(5)]);
        // (2,6)^2 = (4, 12, 36)
        let g = ideal_power(&[z.from_int(2), z.from_int(6)], 2).unwrap();
        assert_eq!(g, vec![z.from_int(4), z.from_int(12), z.from_int(36)]);
        // (x,y)^2 = (x^2, xy, y^2)
        let q = Ring::rationals();
        let p = Ring::poly(&q, &["x", "y"], MonomialOrder::GrevLex).unwrap();
        let x = p.var(0).unwrap();
        let y = p.var(1).unwrap();
        let g = ideal_power(&[x.clone(), y.clone()], 2).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.contains(&x.mul(&x)));
        assert!(g.contains(&x.mul(&y)));
        assert!(g.contains(&y.mul(&y)));
        // n = 0 rejected
        assert!(ideal_power(&[x], 0).is_err());
    }
}
