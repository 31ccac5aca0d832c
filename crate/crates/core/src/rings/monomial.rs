//! Monomials (exponent vectors) and the monomial orders used by the
//! polynomial arithmetic and Groebner engine.

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial; the length always equals the number of
/// variables of the owning polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0u32; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0u32; nvars];
        v[i] = e;
        Monomial(v.into_boxed_slice())
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial(
            other
                .0
                .iter()
                .zip(self.0.iter())
                .map(|(b, a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "v{}", i)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
}

impl MonomialOrder {
    /// Compare monomials; `Greater` means `a` comes earlier (is larger).
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.0.len(), b.0.len());
        match self {
            MonomialOrder::Lex => {
                for (x, y) in a.0.iter().zip(b.0.iter()) {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::GrevLex => {
                match a.degree().cmp(&b.degree()) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                // ties broken by the *last* variable in which they differ,
                // with the smaller exponent winning
                for (x, y) in a.0.iter().zip(b.0.iter()).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "grevlex" => Ok(MonomialOrder::GrevLex),
            other => Err(format!("unknown monomial order `{}`", other)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[u32]) -> Monomial {
        Monomial(v.to_vec().into_boxed_slice())
    }

    #[test]
    fn lex_order_prefers_leading_variable() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[2, 1]), &m(&[2, 3])), Ordering::Less);
    }

    #[test]
    fn grevlex_orders_by_degree_then_reverse_tiebreak() {
        let o = MonomialOrder::GrevLex;
        // x^2 > x*y > y^2 in grevlex with x = v0, y = v1
        assert_eq!(o.cmp(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1]), &m(&[0, 2])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 3]), &m(&[2, 0])), Ordering::Greater);
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[2, 1]);
        let b = m(&[1, 3]);
        assert!(!a.divides(&b));
        assert_eq!(a.lcm(&b), m(&[2, 3]));
        assert_eq!(m(&[1, 1]).quotient_into(&a), m(&[1, 0]));
        assert!(m(&[0, 0]).divides(&a));
    }
}
