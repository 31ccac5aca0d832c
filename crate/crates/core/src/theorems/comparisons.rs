//! The two single-variance comparison cores relating derived torsion and
//! derived completion, and the invariance of torsion under completing the
//! coefficients. Every verdict is a pro/ind isomorphism check along an
//! explicitly constructed natural map.

use super::{CheckId, TheoremInstance, Verdict};
use crate::adic::AdicContext;
use crate::modcplx::{tensor_complexes, Complex, ComplexMap, Submodule};
use crate::rings::Result;
use crate::towers::{
    ind_iso_check, pro_iso_check, IndComplex, IndMap, IndModule, ProComplex, ProMap, ProModule,
};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Cohomology of a pro-complex with shared per-(level, degree) caches, so a
/// pipeline never computes the same subquotient twice.
#[derive(Clone)]
pub(crate) struct ProCohomology {
    pub pc: ProComplex,
    cache: Arc<Mutex<HashMap<(u32, i64), Arc<Submodule>>>>,
}

impl ProCohomology {
    pub fn new(pc: ProComplex) -> Self {
        ProCohomology { pc, cache: Default::default() }
    }

    pub fn sub(&self, n: u32, degree: i64) -> Arc<Submodule> {
        if let Some(s) = self.cache.lock().unwrap().get(&(n, degree)) {
            return s.clone();
        }
        let s = Arc::new(self.pc.level(n).cohomology(degree));
        let mut guard = self.cache.lock().unwrap();
        guard.entry((n, degree)).or_insert(s).clone()
    }

    pub fn tower(&self, degree: i64) -> ProModule {
        let me = self.clone();
        let me2 = self.clone();
        ProModule::from_fns(
            move |n| me.sub(n, degree).module.clone(),
            move |n| {
                let src = me2.sub(n + 1, degree);
                let tgt = me2.sub(n, degree);
                me2.pc.transition(n).induced(degree, &src, &tgt)
            },
        )
    }
}

#[derive(Clone)]
pub(crate) struct IndCohomology {
    pub ic: IndComplex,
    cache: Arc<Mutex<HashMap<(u32, i64), Arc<Submodule>>>>,
}

impl IndCohomology {
    pub fn new(ic: IndComplex) -> Self {
        IndCohomology { ic, cache: Default::default() }
    }

    pub fn sub(&self, n: u32, degree: i64) -> Arc<Submodule> {
        if let Some(s) = self.cache.lock().unwrap().get(&(n, degree)) {
            return s.clone();
        }
        let s = Arc::new(self.ic.level(n).cohomology(degree));
        let mut guard = self.cache.lock().unwrap();
        guard.entry((n, degree)).or_insert(s).clone()
    }

    pub fn tower(&self, degree: i64) -> IndModule {
        let me = self.clone();
        let me2 = self.clone();
        IndModule::from_fns(
            move |n| me.sub(n, degree).module.clone(),
            move |n| {
                let src = me2.sub(n, degree);
                let tgt = me2.sub(n + 1, degree);
                me2.ic.transition(n).induced(degree, &src, &tgt)
            },
        )
    }
}

/// Cohomology of a fixed complex with a per-degree cache.
#[derive(Clone)]
pub(crate) struct FixedCohomology {
    pub complex: Complex,
    cache: Arc<Mutex<HashMap<i64, Arc<Submodule>>>>,
}

impl FixedCohomology {
    pub fn new(complex: Complex) -> Self {
        FixedCohomology { complex, cache: Default::default() }
    }

    pub fn sub(&self, degree: i64) -> Arc<Submodule> {
        if let Some(s) = self.cache.lock().unwrap().get(&degree) {
            return s.clone();
        }
        let s = Arc::new(self.complex.cohomology(degree));
        let mut guard = self.cache.lock().unwrap();
        guard.entry(degree).or_insert(s).clone()
    }
}

/// Shared cache of the inner smash complexes Kos_j (x) X (resp.
/// Kdual_t (x) X) reused across every outer stage of a comparison.
#[derive(Clone)]
struct InnerSmash {
    cache: Arc<Mutex<HashMap<u32, Arc<Complex>>>>,
}

impl InnerSmash {
    fn new() -> Self {
        InnerSmash { cache: Default::default() }
    }

    fn get(&self, j: u32, f: impl FnOnce() -> Complex) -> Arc<Complex> {
        if let Some(c) = self.cache.lock().unwrap().get(&j) {
            return c.clone();
        }
        let c = Arc::new(f());
        let mut guard = self.cache.lock().unwrap();
        guard.entry(j).or_insert(c).clone()
    }
}

/// For each stage t: the constant system H(Kdual_t (x) X) maps into the
/// j-tower H(Kdual_t (x) Kos_j (x) X) through the stage unit; the map must
/// be a pro-isomorphism in every degree. This is the stage form of
/// "derived torsion does not see the difference between a complex and its
/// derived completion".
pub fn check_torsion_of_completion(
    ctx: &AdicContext,
    x: &Complex,
    bound: u32,
) -> Result<TheoremInstance> {
    let mut verdict = Verdict::Verified;
    let mut trace = Vec::new();
    let n = ctx.num_gens() as i64;
    let degrees: Vec<i64> = (x.lo() - n..=x.hi() + n).collect();
    let inner_smash = InnerSmash::new();
    for t in 1..=bound {
        let dual_t = ctx.dual_stage(t);
        let lhs = FixedCohomology::new(tensor_complexes(&dual_t, x));
        let tower = {
            let ctx_l = ctx.clone();
            let x_l = x.clone();
            let d_l = dual_t.clone();
            let ctx_t = ctx.clone();
            let x_t = x.clone();
            let d_t = dual_t.clone();
            let smash = inner_smash.clone();
            ProCohomology::new(ProComplex::from_fns(
                move |j| {
                    let inner = smash.get(j, || tensor_complexes(&ctx_l.koszul_stage(j), &x_l));
                    tensor_complexes(&d_l, &inner)
                },
                move |j| {
                    let inner = ctx_t.koszul_transition(j).tensor(&ComplexMap::identity(&x_t));
                    ComplexMap::identity(&d_t).tensor(&inner)
                },
            ))
        };
        // the level map: smash the stage unit X -> Kos_j (x) X with the dual
        // stage identity
        let phi = {
            let ctx_m = ctx.clone();
            let x_m = x.clone();
            let d_m = dual_t.clone();
            Arc::new(move |j: u32| -> ComplexMap {
                ComplexMap::identity(&d_m).tensor(&ctx_m.unit_into_koszul(&x_m, j))
            })
        };
        for &i in &degrees {
            let lhs_sub = lhs.sub(i);
            if lhs_sub.module.is_zero() && tower.sub(1, i).module.is_zero() {
                // quick exit for degrees empty on both sides at level 1:
                // still verify the tower decays by running the iso check
            }
            let source = ProModule::constant(lhs_sub.module.clone());
            let target = tower.tower(i);
            let phi_i = phi.clone();
            let tower_i = tower.clone();
            let lhs_i = lhs.clone();
            let f = ProMap::new(source, target, move |j| {
                let tgt_sub = tower_i.sub(j, i);
                phi_i(j).induced(i, &lhs_i.sub(i), &tgt_sub)
            });
            let rep = pro_iso_check(&f, bound)?;
            let v = Verdict::from_status(&rep.status, &format!("stage {}, degree {}", t, i));
            if !v.ok() {
                trace.push(format!("stage {} degree {}: {:?}", t, i, rep.status));
            }
            verdict = verdict.merge(v);
        }
    }
    trace.push(format!(
        "checked stages 1..={} in degrees {:?}",
        bound, degrees
    ));
    Ok(TheoremInstance {
        id: CheckId::TorsionOfCompletion,
        description: "derived torsion of the derived completion agrees with derived torsion"
            .into(),
        bound,
        verdict,
        trace,
    })
}

/// For each stage j: the t-tower H(Kos_j (x) Kdual_t (x) X) maps onto the
/// constant system H(Kos_j (x) X) through the stage counit; the map must be
/// an ind-isomorphism in every degree. This is the stage form of "derived
/// completion of the derived torsion agrees with derived completion".
pub fn check_completion_of_torsion(
    ctx: &AdicContext,
    x: &Complex,
    bound: u32,
) -> Result<TheoremInstance> {
    let mut verdict = Verdict::Verified;
    let mut trace = Vec::new();
    let n = ctx.num_gens() as i64;
    let degrees: Vec<i64> = (x.lo() - n..=x.hi() + n).collect();
    let inner_smash = InnerSmash::new();
    for j in 1..=bound {
        let kos_j = ctx.koszul_stage(j);
        let rhs = FixedCohomology::new(tensor_complexes(&kos_j, x));
        let tower = {
            let ctx_l = ctx.clone();
            let x_l = x.clone();
            let k_l = kos_j.clone();
            let ctx_t = ctx.clone();
            let x_t = x.clone();
            let k_t = kos_j.clone();
            let smash = inner_smash.clone();
            IndCohomology::new(IndComplex::from_fns(
                move |t| {
                    let inner = smash.get(t, || tensor_complexes(&ctx_l.dual_stage(t), &x_l));
                    tensor_complexes(&k_l, &inner)
                },
                move |t| {
                    let inner = ctx_t.dual_transition(t).tensor(&ComplexMap::identity(&x_t));
                    ComplexMap::identity(&k_t).tensor(&inner)
                },
            ))
        };
        let psi = {
            let ctx_m = ctx.clone();
            let x_m = x.clone();
            let k_m = kos_j.clone();
            Arc::new(move |t: u32| -> ComplexMap {
                ComplexMap::identity(&k_m).tensor(&ctx_m.counit_from_dual(&x_m, t))
            })
        };
        for &i in &degrees {
            let rhs_sub = rhs.sub(i);
            let source = tower.tower(i);
            let target = IndModule::constant(rhs_sub.module.clone());
            let psi_i = psi.clone();
            let tower_i = tower.clone();
            let rhs_i = rhs.clone();
            let f = IndMap::new(source, target, move |t| {
                let src_sub = tower_i.sub(t, i);
                psi_i(t).induced(i, &src_sub, &rhs_i.sub(i))
            });
            let rep = ind_iso_check(&f, bound)?;
            let v = Verdict::from_status(&rep.status, &format!("stage {}, degree {}", j, i));
            if !v.ok() {
                trace.push(format!("stage {} degree {}: {:?}", j, i, rep.status));
            }
            verdict = verdict.merge(v);
        }
    }
    trace.push(format!(
        "checked stages 1..={} in degrees {:?}",
        bound, degrees
    ));
    Ok(TheoremInstance {
        id: CheckId::CompletionOfTorsion,
        description: "derived completion of the derived torsion agrees with derived completion"
            .into(),
        bound,
        verdict,
        trace,
    })
}

/// For each stage t: the constant system H(Kdual_t (x) P) maps into the
/// j-tower H(Kdual_t (x) P/a^j P); a pro-isomorphism in every degree for
/// K-flat (here: bounded free) P. The stage form of "smashing with the dual
/// Koszul complex cannot tell P from its completion tower".
pub fn check_torsion_completion_invariance(
    ctx: &AdicContext,
    p: &Complex,
    bound: u32,
) -> Result<TheoremInstance> {
    // precondition: free terms
    for i in p.lo()..=p.hi() {
        if p.term(i).presentation().cols() != 0 {
            return Err(crate::rings::RingError::BadArgument(format!(
                "term in degree {} is not free; the invariance check needs a flat complex",
                i
            )));
        }
    }
    let mut verdict = Verdict::Verified;
    let mut trace = Vec::new();
    let n = ctx.num_gens() as i64;
    let degrees: Vec<i64> = (p.lo()..=p.hi() + n).collect();
    for t in 1..=bound {
        let dual_t = ctx.dual_stage(t);
        let lhs = FixedCohomology::new(tensor_complexes(&dual_t, p));
        let tower = {
            let ctx_l = ctx.clone();
            let p_l = p.clone();
            let d_l = dual_t.clone();
            let ctx_t = ctx.clone();
            let p_t = p.clone();
            let d_t = dual_t.clone();
            ProCohomology::new(ProComplex::from_fns(
                move |j| {
                    let quot = p_l.quotient_by_ideal(&ctx_l.power(j));
                    tensor_complexes(&d_l, &quot)
                },
                move |j| {
                    let src = p_t.quotient_by_ideal(&ctx_t.power(j + 1));
                    let tgt = p_t.quotient_by_ideal(&ctx_t.power(j));
                    let comps = (p_t.lo()..=p_t.hi())
                        .map(|i| {
                            (
                                i,
                                crate::modcplx::ModuleMap::new(
                                    src.term(i),
                                    tgt.term(i),
                                    crate::rings::Matrix::identity(
                                        p_t.ring(),
                                        src.term(i).gens(),
                                    ),
                                )
                                .expect("reduction transition"),
                            )
                        })
                        .collect();
                    let q = ComplexMap::new(src, tgt, comps).expect("tower transition");
                    ComplexMap::identity(&d_t).tensor(&q)
                },
            ))
        };
        let phi = {
            let ctx_m = ctx.clone();
            let p_m = p.clone();
            let d_m = dual_t.clone();
            Arc::new(move |j: u32| -> ComplexMap {
                let quot = p_m.quotient_by_ideal(&ctx_m.power(j));
                let comps = (p_m.lo()..=p_m.hi())
                    .map(|i| {
                        (
                            i,
                            crate::modcplx::ModuleMap::new(
                                p_m.term(i),
                                quot.term(i),
                                crate::rings::Matrix::identity(p_m.ring(), p_m.term(i).gens()),
                            )
                            .expect("reduction map"),
                        )
                    })
                    .collect();
                let q = ComplexMap::new(p_m.clone(), quot, comps).expect("reduction chain map");
                ComplexMap::identity(&d_m).tensor(&q)
            })
        };
        for &i in &degrees {
            let source = ProModule::constant(lhs.sub(i).module.clone());
            let target = tower.tower(i);
            let phi_i = phi.clone();
            let tower_i = tower.clone();
            let lhs_i = lhs.clone();
            let f = ProMap::new(source, target, move |j| {
                phi_i(j).induced(i, &lhs_i.sub(i), &tower_i.sub(j, i))
            });
            let rep = pro_iso_check(&f, bound)?;
            let v = Verdict::from_status(&rep.status, &format!("stage {}, degree {}", t, i));
            if !v.ok() {
                trace.push(format!("stage {} degree {}: {:?}", t, i, rep.status));
            }
            verdict = verdict.merge(v);
        }
    }
    trace.push(format!("checked stages 1..={} in degrees {:?}", bound, degrees));
    Ok(TheoremInstance {
        id: CheckId::TorsionCompletionInvariance,
        description: "torsion smash is invariant under replacing a flat complex by its reduction tower".into(),
        bound,
        verdict,
        trace,
    })
}

/// At every stage, the truncated telescope smashed with a module maps
/// quasi-isomorphically onto the dual Koszul stage smash, and the dual
/// stage cohomology matches the Koszul stage under the homological degree
/// reindexing (computed through canonical module invariants).
pub fn check_telescope_koszul(
    ctx: &AdicContext,
    m: &crate::modcplx::FpModule,
    bound: u32,
) -> Result<TheoremInstance> {
    use crate::modcplx::{invariants, quasi_iso_check};
    let mc = Complex::single(m.clone(), 0);
    let n = ctx.num_gens() as i64;
    let mut verdict = Verdict::Verified;
    let mut trace = Vec::new();
    for j in 1..=bound {
        let f = ctx.telescope_to_dual(j).tensor(&ComplexMap::identity(&mc));
        let rep = quasi_iso_check(&f);
        if !rep.ok {
            verdict = verdict.merge(Verdict::Failed(format!(
                "stage {} comparison fails in degrees {:?}",
                j,
                rep.failures.iter().map(|f| f.0).collect::<Vec<_>>()
            )));
            continue;
        }
        let dual = f.target().clone();
        let kos = tensor_complexes(&ctx.koszul_stage(j), &mc);
        for i in dual.lo()..=dual.hi() {
            let a = invariants(&dual.cohomology(i).module);
            let b = invariants(&kos.cohomology(i - n).module);
            if a != b {
                verdict = verdict.merge(Verdict::Failed(format!(
                    "stage {}: invariants differ between dual degree {} and stage degree {}",
                    j,
                    i,
                    i - n
                )));
            }
        }
        trace.push(format!("stage {} comparison is a quasi-isomorphism", j));
    }
    Ok(TheoremInstance {
        id: CheckId::TelescopeKoszul,
        description: "telescope stages compute the dual Koszul stages".into(),
        bound,
        verdict,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcplx::FpModule;
    use crate::rings::{MonomialOrder, Ring};

    fn zz() -> Ring {
        Ring::integers()
    }

    #[test]
    fn torsion_of_completion_for_integers() {
        let z = zz();
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        let x = Complex::single(FpModule::free(&z, 1), 0);
        let inst = check_torsion_of_completion(&ctx, &x, 3).unwrap();
        assert!(inst.ok(), "{:?}", inst);
    }

    #[test]
    fn torsion_of_completion_for_cyclic_torsion_module() {
        let z = zz();
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        let x = Complex::single(FpModule::cyclic(&z, &[z.from_int(4)]), 0);
        let inst = check_torsion_of_completion(&ctx, &x, 3).unwrap();
        assert!(inst.ok(), "{:?}", inst);
    }

    #[test]
    fn torsion_of_completion_when_ideal_acts_invertibly() {
        // over QQ the ideal (2) is the unit ideal: both sides vanish
        let q = Ring::rationals();
        let ctx = AdicContext::new(&q, vec![q.from_int(2)]).unwrap();
        let x = Complex::single(FpModule::free(&q, 1), 0);
        let inst = check_torsion_of_completion(&ctx, &x, 2).unwrap();
        assert!(inst.ok(), "{:?}", inst);
    }

    #[test]
    fn completion_of_torsion_for_integers() {
        let z = zz();
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        let x = Complex::single(FpModule::free(&z, 1), 0);
        let inst = check_completion_of_torsion(&ctx, &x, 3).unwrap();
        assert!(inst.ok(), "{:?}", inst);
        let x = Complex::single(FpModule::cyclic(&z, &[z.from_int(8)]), 0);
        let inst = check_completion_of_torsion(&ctx, &x, 3).unwrap();
        assert!(inst.ok(), "{:?}", inst);
    }

    #[test]
    fn invariance_check_on_free_complexes() {
        let z = zz();
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        let p = Complex::single(FpModule::free(&z, 1), 0);
        let inst = check_torsion_completion_invariance(&ctx, &p, 3).unwrap();
        assert!(inst.ok(), "{:?}", inst);
        // rejected on non-flat input
        let bad = Complex::single(FpModule::cyclic(&z, &[z.from_int(2)]), 0);
        assert!(check_torsion_completion_invariance(&ctx, &bad, 3).is_err());
    }

    #[test]
    fn invariance_check_over_polynomials() {
        let q = Ring::rationals();
        let p = Ring::poly(&q, &["x"], MonomialOrder::GrevLex).unwrap();
        let ctx = AdicContext::new(&p, vec![p.var(0).unwrap()]).unwrap();
        let c = Complex::single(FpModule::free(&p, 1), 0);
        let inst = check_torsion_completion_invariance(&ctx, &c, 2).unwrap();
        assert!(inst.ok(), "{:?}", inst);
    }
}
