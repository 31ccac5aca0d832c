//! Cofiniteness versus derived completion: the Ext modules against the
//! quotient ring are finitely generated in every degree exactly when the
//! derived-completion cohomology towers are. Inputs may be honest modules or
//! designated direct systems (the interesting cases are not finitely
//! presented).

use super::comparisons::IndCohomology;
use super::{CheckId, TheoremInstance, Verdict};
use crate::adic::AdicContext;
use crate::modcplx::{
    free_resolution, hom_from_free_resolution, tensor_complexes, Complex, ComplexMap, FpModule,
    ModuleMap,
};
use crate::rings::{Matrix, Result, Ring, RingError};
use crate::towers::{
    ind_zero_check, pro_iso_check, stable_value_ind, stable_value_pro, IndComplex, IndModule,
    ProModule, ProMap,
};

/// Input to the cofiniteness check.
pub enum CofinitenessInput {
    /// a finitely presented module, treated as a constant system
    Module(FpModule),
    /// a designated direct system with a display name
    Ind(IndModule, String),
}

impl CofinitenessInput {
    fn tower(&self) -> IndModule {
        match self {
            CofinitenessInput::Module(m) => IndModule::constant(m.clone()),
            CofinitenessInput::Ind(t, _) => t.clone(),
        }
    }

    fn name(&self) -> String {
        match self {
            CofinitenessInput::Module(_) => "finitely presented module".into(),
            CofinitenessInput::Ind(_, n) => n.clone(),
        }
    }
}

/// Finite-generation flag for a direct or inverse system of modules.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Flag {
    Fg,
    NotFg,
    Unknown(String),
}

/// Classify a direct system: stabilization or eventual vanishing means
/// finitely generated; strictly growing injective systems are certified not
/// finitely generated.
fn classify_ind(t: &IndModule, bound: u32) -> Flag {
    if ind_zero_check(t, bound).ok() {
        return Flag::Fg;
    }
    if stable_value_ind(t, bound).is_some() {
        return Flag::Fg;
    }
    let win = 2 * bound;
    let mut injective = true;
    for n in 1..win {
        if !t.transition(n).is_injective() {
            injective = false;
            break;
        }
    }
    if injective {
        let first = t.level(1).min_gens();
        let last = t.level(win).min_gens();
        if last > first {
            return Flag::NotFg;
        }
    }
    Flag::Unknown("neither stabilized nor certified growing".into())
}

/// The three designated direct systems over the integers used by the suite.
pub fn prufer_system(z: &Ring, p: i64) -> IndModule {
    let zl = z.clone();
    let zt = z.clone();
    let pw = move |z: &Ring, s: u32| {
        z.from_bigint(&num_bigint::BigInt::from(p).pow(s))
    };
    let pw_l = pw.clone();
    IndModule::from_fns(
        move |s| FpModule::cyclic(&zl, &[pw_l(&zl, s)]),
        move |s| {
            let src = FpModule::cyclic(&zt, &[pw(&zt, s)]);
            let tgt = FpModule::cyclic(&zt, &[pw(&zt, s + 1)]);
            ModuleMap::new(src, tgt, Matrix::from_fn(&zt, 1, 1, |_, _| zt.from_int(p))).unwrap()
        },
    )
}

pub fn rationals_system(z: &Ring) -> IndModule {
    let zl = z.clone();
    let zt = z.clone();
    IndModule::from_fns(
        move |_| FpModule::free(&zl, 1),
        move |s| {
            let free = FpModule::free(&zt, 1);
            ModuleMap::new(
                free.clone(),
                free,
                Matrix::from_fn(&zt, 1, 1, |_, _| zt.from_int(s as i64 + 1)),
            )
            .unwrap()
        },
    )
}

pub fn repeated_sum_system(z: &Ring, p: i64) -> IndModule {
    let zl = z.clone();
    let zt = z.clone();
    let level = move |s: u32, z: &Ring| {
        let copies: Vec<FpModule> = (0..s).map(|_| FpModule::cyclic(z, &[z.from_int(p)])).collect();
        let refs: Vec<&FpModule> = copies.iter().collect();
        FpModule::direct_sum(&refs)
    };
    let level_l = level.clone();
    IndModule::from_fns(
        move |s| level_l(s, &zl),
        move |s| {
            let src = level(s, &zt);
            let tgt = level(s + 1, &zt);
            let mat = Matrix::from_fn(&zt, (s + 1) as usize, s as usize, |i, j| {
                if i == j {
                    zt.one()
                } else {
                    zt.zero()
                }
            });
            ModuleMap::new(src, tgt, mat).unwrap()
        },
    )
}

/// Resolution of one outer level of the completion side: the inner direct
/// system over the input levels, classified.
enum InnerLevel {
    Zero,
    Stable { s0: u32, coh: IndCohomology },
    Growing,
    Unknown(String),
}

/// Classify the inner system at one stage. The death scan gets a deeper
/// budget than the generic window because input systems may shed torsion
/// slowly (the all-denominators system kills p-power classes at a rate of
/// roughly one power per p levels).
fn classify_inner(tower: &IndModule, coh: &IndCohomology, bound: u32) -> InnerLevel {
    // growing systems never die; certify them before the deep death scan
    if classify_ind(tower, bound) == Flag::NotFg {
        return InnerLevel::Growing;
    }
    let die_window = 8 * bound;
    let mut all_die = true;
    for s in 1..=bound {
        if tower.level(s).is_zero() {
            continue;
        }
        let mut died = false;
        let mut comp = tower.transition(s);
        for k in s + 1..=s + die_window {
            if comp.is_zero_map() {
                died = true;
                break;
            }
            if k < s + die_window {
                comp = tower.transition(k).compose(&comp);
            }
        }
        if !died {
            all_die = false;
            break;
        }
    }
    if all_die {
        return InnerLevel::Zero;
    }
    // stabilization may begin as deep as the outer stage; search past the
    // generic window and confirm over a window of the same length
    let max_start = 2 * bound + 1;
    let confirm = 2 * bound;
    let flags: Vec<bool> = (1..max_start + confirm)
        .map(|s| tower.transition(s).is_iso())
        .collect();
    for s0 in 1..=max_start {
        if (s0..s0 + confirm).all(|s| flags[(s - 1) as usize]) {
            return InnerLevel::Stable { s0, coh: coh.clone() };
        }
    }
    match classify_ind(tower, bound) {
        Flag::NotFg => InnerLevel::Growing,
        Flag::Unknown(msg) => InnerLevel::Unknown(msg),
        Flag::Fg => InnerLevel::Zero,
    }
}

pub fn check_cofiniteness(
    ctx: &AdicContext,
    input: &CofinitenessInput,
    bound: u32,
) -> Result<TheoremInstance> {
    let ring = ctx.ring().clone();
    let quotient = FpModule::cyclic(&ring, ctx.gens());
    let res = free_resolution(&quotient, crate::modcplx::default_resolution_length(&ring) + 2);
    if !res.complete {
        return Err(RingError::ResolutionTooShort { needed: res.length() + 1 });
    }
    let m_tower = input.tower();
    let mut trace = vec![format!("input: {}", input.name())];

    // Ext side: Hom complexes of the resolution into the levels
    let hom_levels = {
        let res2 = res.clone();
        let mt = m_tower.clone();
        let res3 = res.clone();
        let mt2 = m_tower.clone();
        IndCohomology::new(IndComplex::from_fns(
            move |s| hom_from_free_resolution(&res2, &mt.level(s)),
            move |s| {
                let src = hom_from_free_resolution(&res3, &mt2.level(s));
                let tgt = hom_from_free_resolution(&res3, &mt2.level(s + 1));
                let tau = mt2.transition(s);
                let mut comps = Vec::new();
                for k in src.lo()..=src.hi() {
                    let rank = res3.complex.term(-k).gens();
                    let mat = Matrix::identity(tau.ring(), rank).kronecker(tau.matrix());
                    comps.push((
                        k,
                        ModuleMap::new(src.term(k), tgt.term(k), mat)
                            .expect("hom transition"),
                    ));
                }
                ComplexMap::new(src, tgt, comps).expect("hom tower transition")
            },
        ))
    };
    let ext_degrees: Vec<i64> = (0..=res.length() as i64).collect();
    let mut ext_flags = Vec::new();
    for &i in &ext_degrees {
        let tower = hom_levels.tower(i);
        let flag = classify_ind(&tower, bound);
        trace.push(format!("ext degree {}: {:?}", i, flag));
        ext_flags.push(flag);
    }

    // completion side: outer tower over the stage index, inner system over
    // the input levels
    let n = ctx.num_gens() as i64;
    let win = 2 * bound;
    let lambda_degrees: Vec<i64> = (-n..=0).collect();
    let mut lambda_flags = Vec::new();
    for &d in &lambda_degrees {
        let mut inner: Vec<InnerLevel> = Vec::new();
        for j in 1..=win {
            let coh = {
                let ctx_l = ctx.clone();
                let mt = m_tower.clone();
                let ctx_t = ctx.clone();
                let mt2 = m_tower.clone();
                IndCohomology::new(IndComplex::from_fns(
                    move |s| {
                        tensor_complexes(
                            &ctx_l.koszul_stage(j),
                            &Complex::single(mt.level(s), 0),
                        )
                    },
                    move |s| {
                        let tau = mt2.transition(s);
                        let tau_c = ComplexMap::new(
                            Complex::single(tau.source().clone(), 0),
                            Complex::single(tau.target().clone(), 0),
                            vec![(0, tau.clone())],
                        )
                        .expect("level transition");
                        ComplexMap::identity(&ctx_t.koszul_stage(j)).tensor(&tau_c)
                    },
                ))
            };
            let tower = coh.tower(d);
            inner.push(classify_inner(&tower, &coh, bound));
        }
        if inner.iter().any(|l| matches!(l, InnerLevel::Growing)) {
            trace.push(format!(
                "completion degree {}: unbounded generator growth at some stage",
                d
            ));
            lambda_flags.push(Flag::NotFg);
            continue;
        }
        if let Some(InnerLevel::Unknown(msg)) =
            inner.iter().find(|l| matches!(l, InnerLevel::Unknown(_)))
        {
            lambda_flags.push(Flag::Unknown(msg.clone()));
            trace.push(format!("completion degree {}: {}", d, msg));
            continue;
        }
        if inner.iter().all(|l| matches!(l, InnerLevel::Zero)) {
            trace.push(format!("completion degree {}: tower vanishes", d));
            lambda_flags.push(Flag::Fg);
            continue;
        }
        // all levels resolve; build the outer tower through the common
        // stabilization levels
        let inner = std::sync::Arc::new(inner);
        let resolve = {
            let inner = inner.clone();
            move |j: u32| -> (u32, Option<IndCohomology>) {
                match &inner[(j - 1) as usize] {
                    InnerLevel::Zero => (1, None),
                    InnerLevel::Stable { s0, coh } => (*s0, Some(coh.clone())),
                    _ => unreachable!(),
                }
            }
        };
        let ring2 = ring.clone();
        let outer_level = {
            let resolve = resolve.clone();
            move |j: u32| -> FpModule {
                match resolve(j) {
                    (_, None) => FpModule::zero_module(&ring2),
                    (s0, Some(coh)) => coh.sub(s0, d).module.clone(),
                }
            }
        };
        let ctx_o = ctx.clone();
        let resolve_t = resolve.clone();
        let outer_level2 = outer_level.clone();
        let m_tower2 = m_tower.clone();
        let outer = ProModule::from_fns(outer_level.clone(), move |j: u32| {
            let src_m = outer_level2(j + 1);
            let tgt_m = outer_level2(j);
            if src_m.is_zero() || tgt_m.is_zero() {
                return ModuleMap::zero_map(src_m, tgt_m);
            }
            let (s_src, coh_src) = resolve_t(j + 1);
            let (s_tgt, coh_tgt) = resolve_t(j);
            let coh_src = coh_src.unwrap();
            let coh_tgt = coh_tgt.unwrap();
            let s_star = s_src.max(s_tgt);
            // transport both stabilized values to the common inner level
            let a = coh_src.tower(d).composite(s_src, s_star);
            let c = coh_tgt.tower(d).composite(s_tgt, s_star);
            let c_inv = c.inverse().expect("stabilized transport is invertible");
            // the stage transition at the common inner level
            let m_level = Complex::single(m_tower2.level(s_star), 0);
            let kappa = ctx_o
                .koszul_transition(j)
                .tensor(&ComplexMap::identity(&m_level));
            let b = kappa.induced(d, &coh_src.sub(s_star, d), &coh_tgt.sub(s_star, d));
            c_inv.compose(&b).compose(&a)
        });
        // finitely generated if the outer tower stabilizes, or if it is
        // pro-isomorphic to the completion tower of its deepest level
        if stable_value_pro(&outer, bound).is_some() {
            trace.push(format!("completion degree {}: tower stabilizes", d));
            lambda_flags.push(Flag::Fg);
            continue;
        }
        let torsion_ok = (1..=bound).all(|j| {
            let level = outer.level(j);
            ctx.power(j)
                .iter()
                .all(|g| ModuleMap::scalar(&level, g).is_zero_map())
        });
        if torsion_ok {
            let candidate = outer.level(win);
            let cand_tower = crate::adic::completion_tower(&candidate, ctx);
            let outer2 = outer.clone();
            let cand2 = cand_tower.clone();
            let outer3 = outer.clone();
            let f = ProMap::new(cand_tower, outer2, move |j| {
                let mat = outer3.composite(win, j).matrix().clone();
                ModuleMap::new(cand2.level(j), outer3.level(j), mat)
                    .expect("candidate comparison descends")
            });
            let rep = pro_iso_check(&f, bound)?;
            if rep.ok() {
                trace.push(format!(
                    "completion degree {}: pro-isomorphic to the completion tower of a finitely presented module",
                    d
                ));
                lambda_flags.push(Flag::Fg);
                continue;
            }
        }
        lambda_flags.push(Flag::Unknown(format!(
            "completion degree {} tower not resolved",
            d
        )));
        trace.push(format!("completion degree {}: not resolved within bound", d));
    }

    let ext_unknown = ext_flags.iter().any(|f| matches!(f, Flag::Unknown(_)));
    let lam_unknown = lambda_flags.iter().any(|f| matches!(f, Flag::Unknown(_)));
    trace.push(format!("ext flags: {:?}", ext_flags));
    trace.push(format!("completion flags: {:?}", lambda_flags));
    let verdict = if ext_unknown || lam_unknown {
        Verdict::Inconclusive("a finite-generation flag could not be decided".into())
    } else {
        let ext_fg = ext_flags.iter().all(|f| *f == Flag::Fg);
        let lam_fg = lambda_flags.iter().all(|f| *f == Flag::Fg);
        if ext_fg == lam_fg {
            Verdict::Verified
        } else {
            Verdict::Failed(format!(
                "ext side finitely generated: {}, completion side finitely generated: {}",
                ext_fg, lam_fg
            ))
        }
    };
    Ok(TheoremInstance {
        id: CheckId::Cofiniteness,
        description: "ext finiteness against the quotient matches derived-completion finiteness"
            .into(),
        bound,
        verdict,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Ring, AdicContext) {
        let z = Ring::integers();
        let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
        (z, ctx)
    }

    #[test]
    fn rationals_are_cofinite_with_vanishing_completion() {
        let (z, ctx) = setup();
        let input = CofinitenessInput::Ind(rationals_system(&z), "all denominators".into());
        let inst = check_cofiniteness(&ctx, &input, 4).unwrap();
        assert!(inst.ok(), "{:?}", inst);
    }

    #[test]
    fn prufer_system_is_cofinite() {
        let (z, ctx) = setup();
        let input = CofinitenessInput::Ind(prufer_system(&z, 2), "prufer".into());
        let inst = check_cofiniteness(&ctx, &input, 4).unwrap();
        assert!(inst.ok(), "{:?}", inst);
    }

    #[test]
    fn repeated_sum_fails_on_both_sides_consistently() {
        let (z, ctx) = setup();
        let input = CofinitenessInput::Ind(repeated_sum_system(&z, 2), "repeated sum".into());
        let inst = check_cofiniteness(&ctx, &input, 4).unwrap();
        assert!(inst.ok(), "{:?}", inst);
        // both sides flagged not finitely generated
        assert!(inst.trace.iter().any(|l| l.contains("ext flags") && l.contains("NotFg")));
    }

    #[test]
    fn plain_module_input() {
        let (z, ctx) = setup();
        let m = FpModule::cyclic(&z, &[z.from_int(8)]);
        let input = CofinitenessInput::Module(m);
        let inst = check_cofiniteness(&ctx, &input, 3).unwrap();
        assert!(inst.ok(), "{:?}", inst);
    }
}
