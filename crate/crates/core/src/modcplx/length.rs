//! Length of a finitely presented module. Over a field this is the
//! dimension; over Z the number of prime factors (with multiplicity) of the
//! torsion part; over a polynomial ring the coefficient-field dimension of
//! the quotient, counted from the Groebner staircase.

use super::FpModule;
use crate::rings::{module_groebner, rank, Monomial, Result, RingError, RingKind, VecPoly};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Length {
    Finite(u64),
    Infinite,
}

pub fn finite_length(m: &FpModule) -> Result<Length> {
    match m.ring().kind() {
        RingKind::Rationals | RingKind::PrimeField(_) => {
            Ok(Length::Finite((m.gens() - rank(m.presentation())) as u64))
        }
        RingKind::Integers => {
            let snf = crate::rings::smith_normal_form(m.presentation())?;
            let nonzero = snf.diag.iter().filter(|d| !d.is_zero()).count();
            if m.gens() > nonzero {
                return Ok(Length::Infinite); // positive free rank
            }
            let mut total = 0u64;
            for d in &snf.diag {
                if d.is_zero() || d.is_one() {
                    continue;
                }
                total += prime_factor_count(d);
            }
            Ok(Length::Finite(total))
        }
        RingKind::Poly(_) => {
            let pr = m.ring().poly_ring().unwrap();
            let cols = presentation_columns(m, 0);
            let gb = module_groebner(pr, cols, m.gens());
            staircase_count(pr.vars.len(), m.gens(), &gb)
        }
        RingKind::Quotient(q) => {
            // coefficient-field dimension of the module seen over the base
            // polynomial ring, with the defining relations adjoined
            let pr = q.base.poly_ring().unwrap();
            let mut cols = presentation_columns(m, 0);
            for g in &q.basis {
                for i in 0..m.gens() {
                    cols.push(VecPoly::single(i, g.clone()));
                }
            }
            let gb = module_groebner(pr, cols, m.gens());
            staircase_count(pr.vars.len(), m.gens(), &gb)
        }
        other => Err(RingError::WrongRingKind {
            expected: "field, integers, or polynomial ring",
            found: format!("{:?}", other),
        }),
    }
}

fn presentation_columns(m: &FpModule, _from: usize) -> Vec<VecPoly> {
    (0..m.presentation().cols())
        .map(|j| {
            let mut comps = Vec::new();
            for i in 0..m.gens() {
                if let Some(p) = m.presentation().at(i, j).as_poly() {
                    if !p.is_zero() {
                        comps.push((i, p.clone()));
                    }
                }
            }
            VecPoly(comps)
        })
        .collect()
}

fn prime_factor_count(d: &BigInt) -> u64 {
    let mut n = d.clone();
    let mut count = 0u64;
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        while (&n % &p).is_zero() {
            n /= &p;
            count += 1;
        }
        p += 1;
    }
    if n > BigInt::one() {
        count += 1;
    }
    count
}

/// Count standard monomials (those outside the leading-term module) per
/// position; `Infinite` when some position's staircase is unbounded.
fn staircase_count(nvars: usize, gens: usize, gb: &[VecPoly]) -> Result<Length> {
    let mut total = 0u64;
    for pos in 0..gens {
        let leads: Vec<&Monomial> = gb
            .iter()
            .filter_map(|v| {
                let (p, m, _) = v.lead()?;
                if p == pos {
                    Some(m)
                } else {
                    None
                }
            })
            .collect();
        // bounded iff for each variable some pure power of it leads
        let mut bound = vec![None::<u32>; nvars];
        for lm in &leads {
            let support: Vec<usize> = (0..nvars).filter(|&v| lm.0[v] > 0).collect();
            if support.len() == 1 {
                let v = support[0];
                let e = lm.0[v];
                bound[v] = Some(bound[v].map_or(e, |b: u32| b.min(e)));
            }
            if support.is_empty() {
                // a unit leads this position: no standard monomials
                bound.iter_mut().for_each(|b| *b = Some(0));
                break;
            }
        }
        if bound.iter().any(|b| b.is_none()) {
            return Ok(Length::Infinite);
        }
        let bounds: Vec<u32> = bound.into_iter().map(|b| b.unwrap()).collect();
        // enumerate the box and drop monomials under some leading term
        let mut stack = vec![vec![]];
        for &b in &bounds {
            let mut next = Vec::new();
            for partial in &stack {
                for e in 0..b {
                    let mut p: Vec<u32> = partial.clone();
                    p.push(e);
                    next.push(p);
                }
            }
            stack = next;
        }
        for exps in stack {
            let mono = Monomial(exps.into_boxed_slice());
            if !leads.iter().any(|lm| lm.divides(&mono)) {
                total += 1;
            }
        }
    }
    Ok(Length::Finite(total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{MonomialOrder, Ring};

    #[test]
    fn length_over_polynomials() {
        let q = Ring::rationals();
        let p = Ring::poly(&q, &["x"], MonomialOrder::GrevLex).unwrap();
        let x = p.var(0).unwrap();
        // k[x]/(x^3) has length 3
        let m = FpModule::cyclic(&p, &[x.pow(3)]);
        assert_eq!(finite_length(&m).unwrap(), Length::Finite(3));

        let p2 = Ring::poly(&q, &["x", "y"], MonomialOrder::GrevLex).unwrap();
        let x = p2.var(0).unwrap();
        let y = p2.var(1).unwrap();
        // k[x,y]/(y - x^2, y) = k[x]/(x^2): length 2
        let m = FpModule::cyclic(&p2, &[y.sub(&x.mul(&x)), y.clone()]);
        assert_eq!(finite_length(&m).unwrap(), Length::Finite(2));
        // k[x,y]/(x) is infinite
        let m = FpModule::cyclic(&p2, &[x.clone()]);
        assert_eq!(finite_length(&m).unwrap(), Length::Infinite);
    }

    #[test]
    fn length_over_integers() {
        let z = Ring::integers();
        let m = FpModule::cyclic(&z, &[z.from_int(6)]);
        assert_eq!(finite_length(&m).unwrap(), Length::Finite(2));
        let m = FpModule::free(&z, 1);
        assert_eq!(finite_length(&m).unwrap(), Length::Infinite);
        let m = FpModule::cyclic(&z, &[z.from_int(8)]);
        assert_eq!(finite_length(&m).unwrap(), Length::Finite(3));
    }

    #[test]
    fn length_over_field() {
        let q = Ring::rationals();
        assert_eq!(
            finite_length(&FpModule::free(&q, 3)).unwrap(),
            Length::Finite(3)
        );
    }
}
