//! Completion and torsion as towers, their derived versions as pro/ind
//! complexes over the stage complexes, the weak-proregularity checker, and
//! the levelwise comparison of tensoring against reduction.

use super::AdicContext;
use crate::modcplx::{
    tensor_complexes, Complex, ComplexMap, FpModule, ModuleMap, Submodule,
};
use crate::rings::{solve_matrix, Matrix};
use crate::towers::{
    pro_zero_check, IndComplex, IndModule, ProComplex, ProModule, StabilizationReport,
};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// {M / a^n M} with the canonical surjective transitions.
pub fn completion_tower(m: &FpModule, ctx: &AdicContext) -> ProModule {
    let ml = m.clone();
    let ctx_l = ctx.clone();
    let mt = m.clone();
    let ctx_t = ctx.clone();
    ProModule::from_fns(
        move |n| ml.quotient_by_ideal(&ctx_l.power(n)),
        move |n| {
            let src = mt.quotient_by_ideal(&ctx_t.power(n + 1));
            let tgt = mt.quotient_by_ideal(&ctx_t.power(n));
            ModuleMap::new(src, tgt, Matrix::identity(mt.ring(), mt.gens()))
                .expect("completion transition")
        },
    )
}

/// {Ann_M(a^n)} = {Hom(A/a^n, M)} with the inclusion transitions.
pub fn torsion_ind(m: &FpModule, ctx: &AdicContext) -> IndModule {
    let cache: Arc<Mutex<HashMap<u32, Arc<Submodule>>>> = Default::default();
    let get = {
        let m = m.clone();
        let ctx = ctx.clone();
        move |cache: &Mutex<HashMap<u32, Arc<Submodule>>>, n: u32| -> Arc<Submodule> {
            if let Some(s) = cache.lock().unwrap().get(&n) {
                return s.clone();
            }
            let s = Arc::new(m.annihilator_submodule(&ctx.power(n)));
            let mut guard = cache.lock().unwrap();
            guard.entry(n).or_insert(s).clone()
        }
    };
    let get_l = get.clone();
    let cache_l = cache.clone();
    let m_t = m.clone();
    IndModule::from_fns(
        move |n| get_l(&cache_l, n).module.clone(),
        move |n| {
            let src = get(&cache, n);
            let tgt = get(&cache, n + 1);
            // the inclusion Ann(a^n) <= Ann(a^{n+1}) expressed on generators
            let combined = tgt.reps.hstack(m_t.presentation());
            let sol = solve_matrix(&combined, &src.reps).expect("annihilators are nested");
            let mat = sol.take_rows(0, tgt.module.gens());
            ModuleMap::new(src.module.clone(), tgt.module.clone(), mat)
                .expect("torsion transition")
        },
    )
}

/// Pro-complex {Kos_j (x) X} computing derived completion stagewise.
pub fn derived_completion(x: &Complex, ctx: &AdicContext) -> ProComplex {
    let xl = x.clone();
    let ctx_l = ctx.clone();
    let xt = x.clone();
    let ctx_t = ctx.clone();
    ProComplex::from_fns(
        move |j| tensor_complexes(&ctx_l.koszul_stage(j), &xl),
        move |j| ctx_t.koszul_transition(j).tensor(&ComplexMap::identity(&xt)),
    )
}

/// Ind-complex {Kdual_t (x) X} computing derived torsion stagewise.
pub fn derived_torsion(x: &Complex, ctx: &AdicContext) -> IndComplex {
    let xl = x.clone();
    let ctx_l = ctx.clone();
    let xt = x.clone();
    let ctx_t = ctx.clone();
    IndComplex::from_fns(
        move |t| tensor_complexes(&ctx_l.dual_stage(t), &xl),
        move |t| ctx_t.dual_transition(t).tensor(&ComplexMap::identity(&xt)),
    )
}

#[derive(Clone, Debug)]
pub struct WprReport {
    /// per homological degree 1..=n: the pro-zero report of the Koszul
    /// cohomology tower
    pub per_degree: Vec<(usize, StabilizationReport)>,
    pub verified: bool,
}

/// Weak proregularity surrogate: the towers {H_i(Kos(A; a^j))} with the
/// stage transitions must be pro-zero for every 1 <= i <= n.
pub fn wpr_check(ctx: &AdicContext, bound: u32) -> WprReport {
    assert!(bound >= 2);
    let n = ctx.num_gens();
    let ctx_l = ctx.clone();
    let ctx_t = ctx.clone();
    let stages = ProComplex::from_fns(
        move |j| ctx_l.koszul_stage(j),
        move |j| ctx_t.koszul_transition(j),
    );
    let mut per_degree = Vec::new();
    let mut verified = true;
    for i in 1..=n {
        let tower = stages.levelwise_cohomology(-(i as i64));
        let rep = pro_zero_check(&tower, bound);
        verified &= rep.ok();
        per_degree.push((i, rep));
    }
    WprReport { per_degree, verified }
}

#[derive(Clone, Debug)]
pub struct PsiReport {
    pub iso: bool,
    pub tensor_side: FpModule,
    pub quotient_side: FpModule,
}

/// Level-n shadow of the comparison between tensoring with the reduced ring
/// and reducing: M (x) A/a^n -> M/a^n M on the identity of generators.
pub fn psi_comparison(m: &FpModule, ctx: &AdicContext, n: u32) -> PsiReport {
    assert!(n >= 1);
    let power = ctx.power(n);
    let cyclic = FpModule::cyclic(ctx.ring(), &power);
    let tensor_side = m.tensor(&cyclic);
    let quotient_side = m.quotient_by_ideal(&power);
    let map = ModuleMap::new(
        tensor_side.clone(),
        quotient_side.clone(),
        Matrix::identity(m.ring(), m.gens()),
    )
    .expect("generator identification");
    PsiReport { iso: map.is_iso(), tensor_side, quotient_side }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcplx::invariants;
    use crate::rings::{MonomialOrder, Ring};
    use crate::towers::{ind_zero_check, stable_value_ind, TowerStatus};

    fn zz() -> Ring {
        Ring::integers()
    }

    fn zmod(n: i64) -> FpModule {
        let z = zz();
        FpModule::cyclic(&z, &[z.from_int(n)])
    }

    #[test]
    fn completion_tower_of_integers() {
        let z = zz();
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        let t = completion_tower(&FpModule::free(&z, 1), &ctx);
        assert_eq!(invariants(&t.level(3)), invariants(&zmod(8)));
        assert!(t.transition(2).is_surjective());
        // a module killed by the ideal gives a constant tower
        let m = zmod(2);
        let t = completion_tower(&m, &ctx);
        assert_eq!(invariants(&t.level(1)), invariants(&m));
        assert_eq!(invariants(&t.level(4)), invariants(&m));
        assert!(t.transition(1).is_iso());
    }

    #[test]
    fn torsion_ind_examples() {
        let z = zz();
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        // torsion of Z at (2) is zero
        let t = torsion_ind(&FpModule::free(&z, 1), &ctx);
        assert!(t.level(3).is_zero());
        // torsion of Z/4: {Z/2, Z/4, Z/4, ...} stabilizing to Z/4
        let t = torsion_ind(&zmod(4), &ctx);
        assert_eq!(invariants(&t.level(1)), invariants(&zmod(2)));
        assert_eq!(invariants(&t.level(2)), invariants(&zmod(4)));
        let (level, value) = stable_value_ind(&t, 4).unwrap();
        assert_eq!(level, 2);
        assert_eq!(invariants(&value), invariants(&zmod(4)));
    }

    #[test]
    fn derived_completion_of_integers() {
        let z = zz();
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        let x = Complex::single(FpModule::free(&z, 1), 0);
        let dc = derived_completion(&x, &ctx);
        let h0 = dc.levelwise_cohomology(0);
        assert_eq!(invariants(&h0.level(3)), invariants(&zmod(8)));
        let hm1 = dc.levelwise_cohomology(-1);
        assert!(hm1.level(3).is_zero());
    }

    #[test]
    fn derived_torsion_of_integers() {
        let z = zz();
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        let x = Complex::single(FpModule::free(&z, 1), 0);
        let dt = derived_torsion(&x, &ctx);
        // H^1 levels are Z/2^t with multiplication-by-2 transitions
        let h1 = dt.levelwise_cohomology(1);
        assert_eq!(invariants(&h1.level(3)), invariants(&zmod(8)));
        let tr = h1.transition(1);
        assert!(tr.is_injective());
        assert!(!tr.is_surjective());
        // H^0 is zero
        let h0 = dt.levelwise_cohomology(0);
        assert!(h0.level(2).is_zero());
    }

    #[test]
    fn derived_torsion_of_torsion_module_stabilizes() {
        let z = zz();
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        let x = Complex::single(zmod(4), 0);
        let dt = derived_torsion(&x, &ctx);
        let h0 = dt.levelwise_cohomology(0);
        let (_, value) = stable_value_ind(&h0, 4).unwrap();
        assert_eq!(invariants(&value), invariants(&zmod(4)));
        // H^1 is ind-zero: Z/4 with x2 transitions dies
        let h1 = dt.levelwise_cohomology(1);
        let rep = ind_zero_check(&h1, 3);
        assert!(rep.ok(), "{:?}", rep.status);
    }

    #[test]
    fn wpr_verified_for_noetherian_examples() {
        let z = zz();
        // (2) in Z: trivial
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        assert!(wpr_check(&ctx, 3).verified);
        // (2, 6) in Z: nonzero levels, killed by composites
        let ctx = AdicContext::new(&z, vec![z.from_int(2), z.from_int(6)]).unwrap();
        let rep = wpr_check(&ctx, 3);
        assert!(rep.verified, "{:?}", rep.per_degree);
        // (x) in k[x]/(x^2): nonzero levels killed by two-step composites
        let q = Ring::rationals();
        let p = Ring::poly(&q, &["x"], MonomialOrder::GrevLex).unwrap();
        let xv = p.var(0).unwrap();
        let r = Ring::quotient(&p, &[xv.mul(&xv)]).unwrap();
        let ctx = AdicContext::new(&r, vec![r.var(0).unwrap()]).unwrap();
        let rep = wpr_check(&ctx, 3);
        assert!(rep.verified, "{:?}", rep.per_degree);
    }

    #[test]
    fn wpr_regular_sequence_has_zero_towers() {
        let q = Ring::rationals();
        let p = Ring::poly(&q, &["x", "y"], MonomialOrder::GrevLex).unwrap();
        let ctx = AdicContext::new(&p, vec![p.var(0).unwrap(), p.var(1).unwrap()]).unwrap();
        let rep = wpr_check(&ctx, 2);
        assert!(rep.verified);
        for (_, r) in &rep.per_degree {
            assert!(matches!(r.status, TowerStatus::ZeroVerified { .. }));
        }
    }

    #[test]
    fn psi_comparison_examples() {
        let z = zz();
        // M = A: identity on A/a^n
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        let rep = psi_comparison(&FpModule::free(&z, 1), &ctx, 3);
        assert!(rep.iso);
        // M = Z/6, a = (2), n = 3: both sides Z/2
        let rep = psi_comparison(&zmod(6), &ctx, 3);
        assert!(rep.iso);
        assert_eq!(invariants(&rep.quotient_side), invariants(&zmod(2)));
        // M = QQ[x,y]/(x^2), a = (x,y), n = 2
        let q = Ring::rationals();
        let p = Ring::poly(&q, &["x", "y"], MonomialOrder::GrevLex).unwrap();
        let x = p.var(0).unwrap();
        let y = p.var(1).unwrap();
        let ctx = AdicContext::new(&p, vec![x.clone(), y]).unwrap();
        let m = FpModule::cyclic(&p, &[x.mul(&x)]);
        let rep = psi_comparison(&m, &ctx, 2);
        assert!(rep.iso);
        assert_eq!(
            crate::modcplx::finite_length(&rep.quotient_side).unwrap(),
            crate::modcplx::Length::Finite(3)
        );
    }

    #[test]
    fn unit_generator_makes_stages_acyclic() {
        let z = zz();
        let ctx = AdicContext::new(&z, vec![z.from_int(1), z.from_int(2)]).unwrap();
        assert!(ctx.koszul_stage(2).is_exact());
        assert!(ctx.dual_stage(2).is_exact());
        let m = completion_tower(&FpModule::free(&z, 1), &ctx);
        assert!(m.level(2).is_zero());
        let t = torsion_ind(&FpModule::free(&z, 1), &ctx);
        assert!(t.level(2).is_zero());
    }
}
