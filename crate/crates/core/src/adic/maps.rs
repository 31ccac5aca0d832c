//! Ring maps expressible in the engine (variable substitution, quotient
//! projection, modular reduction) and the base-change compatibility of the
//! stage complexes along them.

use super::AdicContext;
use crate::modcplx::{Complex, ComplexMap, FpModule, ModuleMap};
use crate::rings::{Matrix, MultiPoly, Result, Ring, RingElement, RingError, RingKind};
use num_traits::Zero;

#[derive(Clone, Debug)]
enum MapKind {
    Identity,
    /// Z -> Z/m or Z -> GF(p)
    IntegerReduction,
    /// Z/m -> Z/m' with m' | m
    ModularReduction,
    /// polynomial/quotient source: variable i maps to images[i]; the
    /// coefficient fields must coincide
    Substitution { images: Vec<RingElement> },
}

/// A ring homomorphism between engine rings.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: Ring,
    target: Ring,
    kind: MapKind,
}

impl RingMap {
    pub fn identity(r: &Ring) -> RingMap {
        RingMap { source: r.clone(), target: r.clone(), kind: MapKind::Identity }
    }

    /// Z -> Z/m, Z -> GF(p), or Z/m -> Z/m' (m' dividing m).
    pub fn reduction(source: &Ring, target: &Ring) -> Result<RingMap> {
        match (source.kind(), target.kind()) {
            (RingKind::Integers, RingKind::IntegersMod(_))
            | (RingKind::Integers, RingKind::PrimeField(_)) => Ok(RingMap {
                source: source.clone(),
                target: target.clone(),
                kind: MapKind::IntegerReduction,
            }),
            (RingKind::IntegersMod(m), RingKind::IntegersMod(m2)) => {
                if (m % m2).is_zero() {
                    Ok(RingMap {
                        source: source.clone(),
                        target: target.clone(),
                        kind: MapKind::ModularReduction,
                    })
                } else {
                    Err(RingError::UnsupportedMap(format!(
                        "{} does not divide {}",
                        m2, m
                    )))
                }
            }
            _ => Err(RingError::UnsupportedMap(
                "reduction requires integer or modular rings".into(),
            )),
        }
    }

    /// Substitution sending variable i of the source to images[i] in the
    /// target (a polynomial or quotient ring over the same coefficient
    /// field). The canonical quotient projection is substitution by the
    /// target's own variables.
    pub fn substitution(source: &Ring, target: &Ring, images: Vec<RingElement>) -> Result<RingMap> {
        let spr = source.poly_structure()?;
        let tpr = target.poly_structure()?;
        if spr.coeff != tpr.coeff {
            return Err(RingError::UnsupportedMap(
                "coefficient fields differ".into(),
            ));
        }
        if images.len() != spr.vars.len() {
            return Err(RingError::UnsupportedMap(format!(
                "need {} images, got {}",
                spr.vars.len(),
                images.len()
            )));
        }
        for im in &images {
            if im.ring() != target {
                return Err(RingError::MixedRings);
            }
        }
        Ok(RingMap { source: source.clone(), target: target.clone(), kind: MapKind::Substitution { images } })
    }

    /// P -> P/J canonical projection.
    pub fn quotient_projection(source: &Ring, target: &Ring) -> Result<RingMap> {
        let (base, _) = target.quotient_parts()?;
        if base != source {
            return Err(RingError::UnsupportedMap(
                "target is not a quotient of the source".into(),
            ));
        }
        let images: Result<Vec<RingElement>> = (0..source.nvars()).map(|i| target.var(i)).collect();
        RingMap::substitution(source, target, images?)
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn apply(&self, e: &RingElement) -> RingElement {
        assert!(e.ring() == &self.source, "element not in the map's source");
        match &self.kind {
            MapKind::Identity => e.clone(),
            MapKind::IntegerReduction | MapKind::ModularReduction => {
                self.target.from_bigint(e.as_bigint().expect("integer representative"))
            }
            MapKind::Substitution { images } => {
                let p = e.as_poly().expect("polynomial representative");
                self.eval_poly(p, images)
            }
        }
    }

    fn eval_poly(&self, p: &MultiPoly, images: &[RingElement]) -> RingElement {
        let tpr = self.target.poly_structure().expect("polynomial target");
        let mut acc = self.target.zero();
        for (mono, coef) in &p.terms {
            let c = MultiPoly::constant(&tpr.coeff, coef.clone(), tpr.vars.len());
            let mut term = self.target.make_poly(c);
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn apply_matrix(&self, m: &Matrix) -> Matrix {
        Matrix::from_fn(&self.target, m.rows(), m.cols(), |i, j| self.apply(m.at(i, j)))
    }

    /// Extension of scalars M (x)_A B, via the mapped presentation.
    pub fn apply_module(&self, m: &FpModule) -> FpModule {
        FpModule::new(self.apply_matrix(m.presentation()))
    }

    pub fn apply_complex(&self, c: &Complex) -> Complex {
        let terms: Vec<FpModule> = (c.lo()..=c.hi()).map(|i| self.apply_module(&c.term(i))).collect();
        let mut diffs = Vec::new();
        for i in c.lo()..c.hi() {
            let k = (i - c.lo()) as usize;
            diffs.push(
                ModuleMap::new(
                    terms[k].clone(),
                    terms[k + 1].clone(),
                    self.apply_matrix(c.diff(i).matrix()),
                )
                .expect("mapped differential"),
            );
        }
        Complex::new(self.target.clone(), c.lo(), terms, diffs).expect("mapped complex")
    }
}

/// Context transported along a ring map, with the stagewise base-change
/// isomorphisms made explicit.
pub struct BaseChange {
    pub map: RingMap,
    pub source_ctx: AdicContext,
    pub target_ctx: AdicContext,
}

/// Transport a context along f; the target context is generated by the
/// images of the sequence.
pub fn base_change(ctx: &AdicContext, f: RingMap) -> Result<BaseChange> {
    if f.source() != ctx.ring() {
        return Err(RingError::MixedRings);
    }
    let gens: Vec<RingElement> = ctx.gens().iter().map(|g| f.apply(g)).collect();
    let target_ctx = AdicContext::new(f.target(), gens)?;
    Ok(BaseChange { map: f, source_ctx: ctx.clone(), target_ctx })
}

impl BaseChange {
    /// Kos(A; a^j) (x)_A B and Kos(B; f(a)^j) are equal as complexes; the
    /// returned isomorphism is the identity on generators and the
    /// construction verifies the differentials agree exactly.
    pub fn koszul_stage_iso(&self, j: u32) -> Result<ComplexMap> {
        let lhs = self.map.apply_complex(&self.source_ctx.koszul_stage(j));
        let rhs = self.target_ctx.koszul_stage(j);
        identity_complex_iso(&lhs, &rhs)
    }

    pub fn telescope_stage_iso(&self, j: u32) -> Result<ComplexMap> {
        let lhs = self.map.apply_complex(&self.source_ctx.telescope_stage(j));
        let rhs = self.target_ctx.telescope_stage(j);
        identity_complex_iso(&lhs, &rhs)
    }

    pub fn dual_stage_iso(&self, t: u32) -> Result<ComplexMap> {
        let lhs = self.map.apply_complex(&self.source_ctx.dual_stage(t));
        let rhs = self.target_ctx.dual_stage(t);
        identity_complex_iso(&lhs, &rhs)
    }
}

/// Identity-on-generators isomorphism between complexes that must agree
/// term-for-term and differential-for-differential. Useful for collapsing a
/// tensor with the unit complex and for base-change comparisons.
pub fn identity_complex_iso(lhs: &Complex, rhs: &Complex) -> Result<ComplexMap> {
    if lhs.lo() != rhs.lo() || lhs.hi() != rhs.hi() {
        return Err(RingError::InvalidComplex(format!(
            "degree ranges differ: [{}, {}] vs [{}, {}]",
            lhs.lo(),
            lhs.hi(),
            rhs.lo(),
            rhs.hi()
        )));
    }
    for i in lhs.lo()..=lhs.hi() {
        if lhs.term(i).gens() != rhs.term(i).gens() {
            return Err(RingError::InvalidComplex(format!(
                "ranks differ in degree {}",
                i
            )));
        }
        if i < lhs.hi() && lhs.diff(i).matrix() != rhs.diff(i).matrix() {
            return Err(RingError::InvalidComplex(format!(
                "differentials differ in degree {}",
                i
            )));
        }
    }
    let maps = (lhs.lo()..=lhs.hi())
        .map(|i| {
            let m = ModuleMap::new(
                lhs.term(i),
                rhs.term(i),
                Matrix::identity(lhs.ring(), lhs.term(i).gens()),
            )
            .expect("identity component");
            (i, m)
        })
        .collect();
    ComplexMap::new(lhs.clone(), rhs.clone(), maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcplx::invariants;
    use crate::rings::MonomialOrder;
    use num_bigint::BigInt;

    #[test]
    fn identity_base_change() {
        let z = Ring::integers();
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        let bc = base_change(&ctx, RingMap::identity(&z)).unwrap();
        assert!(bc.koszul_stage_iso(2).is_ok());
        assert!(bc.telescope_stage_iso(2).is_ok());
    }

    #[test]
    fn integers_to_z4() {
        let z = Ring::integers();
        let z4 = Ring::integers_mod(&BigInt::from(4)).unwrap();
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        let f = RingMap::reduction(&z, &z4).unwrap();
        let bc = base_change(&ctx, f).unwrap();
        let iso = bc.koszul_stage_iso(1).unwrap();
        // both sides have H^-1 = Ann(2) = 2Z/4
        let h = iso.target().cohomology(-1).module;
        assert!(!h.is_zero());
        let two = z4.from_int(2);
        let expect = FpModule::cyclic(&z4, &[two]);
        assert_eq!(invariants(&h), invariants(&expect));
        let _ = bc.dual_stage_iso(2).unwrap();
    }

    #[test]
    fn polynomial_variable_embedding() {
        let q = Ring::rationals();
        let p1 = Ring::poly(&q, &["x"], MonomialOrder::GrevLex).unwrap();
        let p2 = Ring::poly(&q, &["x", "y"], MonomialOrder::GrevLex).unwrap();
        let ctx = AdicContext::new(&p1, vec![p1.var(0).unwrap()]).unwrap();
        let f = RingMap::substitution(&p1, &p2, vec![p2.var(0).unwrap()]).unwrap();
        let bc = base_change(&ctx, f).unwrap();
        for j in 1..=3 {
            assert!(bc.koszul_stage_iso(j).is_ok());
            assert!(bc.telescope_stage_iso(j).is_ok());
        }
    }

    #[test]
    fn quotient_projection_map() {
        let q = Ring::rationals();
        let p = Ring::poly(&q, &["x"], MonomialOrder::GrevLex).unwrap();
        let x = p.var(0).unwrap();
        let r = Ring::quotient(&p, &[x.pow(2)]).unwrap();
        let f = RingMap::quotient_projection(&p, &r).unwrap();
        assert!(f.apply(&x.pow(2)).is_zero());
        assert_eq!(f.apply(&x.pow(3).add(&x)), r.var(0).unwrap());
        let ctx = AdicContext::new(&p, vec![x]).unwrap();
        let bc = base_change(&ctx, f).unwrap();
        assert!(bc.koszul_stage_iso(1).is_ok());
        // powers x^j vanish in the quotient for j >= 2, and the identity
        // iso still holds because both sides see the same zero map
        assert!(bc.koszul_stage_iso(2).is_ok());
    }

    #[test]
    fn inexpressible_map_is_rejected() {
        let z = Ring::integers();
        let q = Ring::rationals();
        assert!(RingMap::reduction(&z, &q).is_err());
        let z6 = Ring::integers_mod(&BigInt::from(6)).unwrap();
        let z4 = Ring::integers_mod(&BigInt::from(4)).unwrap();
        assert!(RingMap::reduction(&z6, &z4).is_err());
    }
}
