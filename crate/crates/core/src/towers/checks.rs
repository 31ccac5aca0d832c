//! Bounded semi-decision procedures on towers: pro/ind-zero certification,
//! Mittag-Leffler stabilization, and isomorphism checks along constructed
//! natural maps (kernel and cokernel towers both pro/ind-zero).

use super::{IndMap, IndModule, ProMap, ProModule};
use crate::modcplx::{FpModule, ModuleMap, Submodule};
use crate::rings::{solve_matrix, Result, RingError};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerStatus {
    /// transitions are isomorphisms from `level` through the window
    Stabilized { level: u32 },
    /// every level <= bound admits a zero composite within the window
    ZeroVerified { bound: u32 },
    /// iso check passed to the bound
    Verified { bound: u32 },
    /// honest counterexample (constant nonzero obstruction)
    Failed { level: u32, detail: String },
    /// bounded search exhausted without a certificate
    Inconclusive { level: u32, detail: String },
}

impl TowerStatus {
    pub fn is_verified(&self) -> bool {
        matches!(
            self,
            TowerStatus::ZeroVerified { .. } | TowerStatus::Verified { .. } | TowerStatus::Stabilized { .. }
        )
    }
}

#[derive(Clone, Debug)]
pub struct StabilizationReport {
    pub status: TowerStatus,
    pub witnesses: Vec<String>,
}

impl StabilizationReport {
    pub fn ok(&self) -> bool {
        self.status.is_verified()
    }
}

fn window(bound: u32) -> u32 {
    2 * bound
}

/// Pro-zero: for every level j <= bound some composite from within
/// (j, 2*bound] is the zero map. Never claims failure; pro-zeroness is a
/// limit property.
pub fn pro_zero_check(t: &ProModule, bound: u32) -> StabilizationReport {
    assert!(bound >= 2, "bound must be at least 2");
    let win = window(bound);
    let mut witnesses = Vec::new();
    for j in 1..=bound {
        if t.level(j).is_zero() {
            continue;
        }
        let mut found = None;
        let mut comp = t.transition(j); // level j+1 -> j
        for k in j + 1..=win {
            if comp.is_zero_map() {
                found = Some(k);
                break;
            }
            if k < win {
                comp = comp.compose(&t.transition(k));
            }
        }
        match found {
            Some(k) => witnesses.push(format!("level {} killed from level {}", j, k)),
            None => {
                return StabilizationReport {
                    status: TowerStatus::Inconclusive {
                        level: j,
                        detail: format!("no zero composite into level {} within window {}", j, win),
                    },
                    witnesses,
                }
            }
        }
    }
    StabilizationReport { status: TowerStatus::ZeroVerified { bound }, witnesses }
}

/// Ind-zero: every class at level j <= bound dies by some level in
/// (j, 2*bound].
pub fn ind_zero_check(t: &IndModule, bound: u32) -> StabilizationReport {
    assert!(bound >= 2, "bound must be at least 2");
    let win = window(bound);
    let mut witnesses = Vec::new();
    for j in 1..=bound {
        if t.level(j).is_zero() {
            continue;
        }
        let mut found = None;
        let mut comp = t.transition(j); // level j -> j+1
        for k in j + 1..=win {
            if comp.is_zero_map() {
                found = Some(k);
                break;
            }
            if k < win {
                comp = t.transition(k).compose(&comp);
            }
        }
        match found {
            Some(k) => witnesses.push(format!("level {} dies by level {}", j, k)),
            None => {
                return StabilizationReport {
                    status: TowerStatus::Inconclusive {
                        level: j,
                        detail: format!("classes at level {} survive to level {}", j, win),
                    },
                    witnesses,
                }
            }
        }
    }
    StabilizationReport { status: TowerStatus::ZeroVerified { bound }, witnesses }
}

/// Smallest level n < bound from which every transition through the window
/// is an isomorphism, with that level's module.
pub fn stable_value_pro(t: &ProModule, bound: u32) -> Option<(u32, FpModule)> {
    assert!(bound >= 2);
    let win = window(bound);
    let mut first_bad = 0u32;
    for n in (1..win).rev() {
        if !t.transition(n).is_iso() {
            first_bad = n;
            break;
        }
    }
    let start = first_bad + 1;
    if start < bound {
        Some((start, t.level(start)))
    } else {
        None
    }
}

pub fn stable_value_ind(t: &IndModule, bound: u32) -> Option<(u32, FpModule)> {
    assert!(bound >= 2);
    let win = window(bound);
    let mut first_bad = 0u32;
    for n in (1..win).rev() {
        if !t.transition(n).is_iso() {
            first_bad = n;
            break;
        }
    }
    let start = first_bad + 1;
    if start < bound {
        Some((start, t.level(start)))
    } else {
        None
    }
}

struct SubCache {
    subs: Mutex<HashMap<u32, Arc<Submodule>>>,
}

impl SubCache {
    fn new() -> Arc<Self> {
        Arc::new(SubCache { subs: Mutex::new(HashMap::new()) })
    }

    fn get(&self, n: u32, f: impl FnOnce() -> Submodule) -> Arc<Submodule> {
        if let Some(s) = self.subs.lock().unwrap().get(&n) {
            return s.clone();
        }
        let s = Arc::new(f());
        let mut guard = self.subs.lock().unwrap();
        guard.entry(n).or_insert(s).clone()
    }
}

/// Kernel tower of a levelwise map of pro-modules; source transitions
/// restrict to the kernels.
pub fn kernel_tower_pro(f: &ProMap) -> ProModule {
    let cache = SubCache::new();
    let fl = f.clone();
    let cl = cache.clone();
    let ft = f.clone();
    let level = move |n: u32| {
        let sub = cl.get(n, || fl.level(n).kernel());
        sub.module.clone()
    };
    let trans = move |n: u32| {
        let src = cache.get(n + 1, || ft.level(n + 1).kernel());
        let tgt = cache.get(n, || ft.level(n).kernel());
        restrict_map(&ft.source.transition(n), &src, &tgt)
    };
    ProModule::from_fns(level, trans)
}

pub fn cokernel_tower_pro(f: &ProMap) -> ProModule {
    let fl = f.clone();
    let ft = f.clone();
    let level = move |n: u32| fl.level(n).cokernel();
    let trans = move |n: u32| {
        let src = ft.level(n + 1).cokernel();
        let tgt = ft.level(n).cokernel();
        ModuleMap::new(src, tgt, ft.target.transition(n).matrix().clone())
            .expect("cokernel transition")
    };
    ProModule::from_fns(level, trans)
}

pub fn kernel_tower_ind(f: &IndMap) -> IndModule {
    let cache = SubCache::new();
    let fl = f.clone();
    let cl = cache.clone();
    let ft = f.clone();
    let level = move |n: u32| {
        let sub = cl.get(n, || fl.level(n).kernel());
        sub.module.clone()
    };
    let trans = move |n: u32| {
        let src = cache.get(n, || ft.level(n).kernel());
        let tgt = cache.get(n + 1, || ft.level(n + 1).kernel());
        restrict_map(&ft.source.transition(n), &src, &tgt)
    };
    IndModule::from_fns(level, trans)
}

pub fn cokernel_tower_ind(f: &IndMap) -> IndModule {
    let fl = f.clone();
    let ft = f.clone();
    let level = move |n: u32| fl.level(n).cokernel();
    let trans = move |n: u32| {
        let src = ft.level(n).cokernel();
        let tgt = ft.level(n + 1).cokernel();
        ModuleMap::new(src, tgt, ft.target.transition(n).matrix().clone())
            .expect("cokernel transition")
    };
    IndModule::from_fns(level, trans)
}

/// Restrict an ambient map to given sub-presentations: express the images of
/// the source representatives in the target representatives.
fn restrict_map(ambient: &ModuleMap, src: &Submodule, tgt: &Submodule) -> ModuleMap {
    let images = ambient.matrix().mul(&src.reps);
    let combined = tgt.reps.hstack(tgt.ambient.presentation());
    let sol = solve_matrix(&combined, &images)
        .expect("transition restricts to the subquotient");
    let mat = sol.take_rows(0, tgt.module.gens());
    ModuleMap::new(src.module.clone(), tgt.module.clone(), mat).expect("restricted transition")
}

fn naturality_sweep_pro(f: &ProMap, win: u32) -> Result<()> {
    for n in 1..win {
        if !f.natural_at(n) {
            return Err(RingError::InvalidMap(format!(
                "level maps do not commute with transitions at level {}",
                n
            )));
        }
    }
    Ok(())
}

fn naturality_sweep_ind(f: &IndMap, win: u32) -> Result<()> {
    for n in 1..win {
        if !f.natural_at(n) {
            return Err(RingError::InvalidMap(format!(
                "level maps do not commute with transitions at level {}",
                n
            )));
        }
    }
    Ok(())
}

/// Certify failure honestly: the obstruction tower is syntactically constant
/// (identity transition matrices on a fixed module) and nonzero.
fn constant_nonzero_pro(t: &ProModule, win: u32) -> bool {
    let first = t.level(1);
    if first.is_zero() {
        return false;
    }
    for n in 1..win {
        if t.level(n + 1) != first || !t.transition(n).matrix().is_identity() {
            return false;
        }
    }
    true
}

fn constant_nonzero_ind(t: &IndModule, win: u32) -> bool {
    let first = t.level(1);
    if first.is_zero() {
        return false;
    }
    for n in 1..win {
        if t.level(n + 1) != first || !t.transition(n).matrix().is_identity() {
            return false;
        }
    }
    true
}

/// Pro-isomorphism along a constructed natural map: kernel and cokernel
/// towers must both be pro-zero within the bound.
pub fn pro_iso_check(f: &ProMap, bound: u32) -> Result<StabilizationReport> {
    assert!(bound >= 2);
    naturality_sweep_pro(f, window(bound))?;
    let ker = kernel_tower_pro(f);
    let coker = cokernel_tower_pro(f);
    let kr = pro_zero_check(&ker, bound);
    if !kr.ok() {
        return Ok(obstruction_report_pro(&ker, kr, bound, "kernel tower"));
    }
    let cr = pro_zero_check(&coker, bound);
    if !cr.ok() {
        return Ok(obstruction_report_pro(&coker, cr, bound, "cokernel tower"));
    }
    let mut witnesses = kr.witnesses;
    witnesses.extend(cr.witnesses);
    Ok(StabilizationReport { status: TowerStatus::Verified { bound }, witnesses })
}

/// Ind-isomorphism along a constructed natural map: kernel and cokernel
/// towers must both be ind-zero within the bound.
pub fn ind_iso_check(f: &IndMap, bound: u32) -> Result<StabilizationReport> {
    assert!(bound >= 2);
    naturality_sweep_ind(f, window(bound))?;
    let ker = kernel_tower_ind(f);
    let coker = cokernel_tower_ind(f);
    let kr = ind_zero_check(&ker, bound);
    if !kr.ok() {
        return Ok(obstruction_report_ind(&ker, kr, bound, "kernel tower"));
    }
    let cr = ind_zero_check(&coker, bound);
    if !cr.ok() {
        return Ok(obstruction_report_ind(&coker, cr, bound, "cokernel tower"));
    }
    let mut witnesses = kr.witnesses;
    witnesses.extend(cr.witnesses);
    Ok(StabilizationReport { status: TowerStatus::Verified { bound }, witnesses })
}

fn obstruction_report_pro(
    tower: &ProModule,
    inner: StabilizationReport,
    bound: u32,
    kind: &str,
) -> StabilizationReport {
    let level = match &inner.status {
        TowerStatus::Inconclusive { level, .. } => *level,
        _ => 1,
    };
    if constant_nonzero_pro(tower, window(bound)) {
        StabilizationReport {
            status: TowerStatus::Failed {
                level,
                detail: format!("{} is constant and nonzero", kind),
            },
            witnesses: vec![format!(
                "witness module with {} generators at level {}",
                tower.level(level).gens(),
                level
            )],
        }
    } else {
        StabilizationReport {
            status: TowerStatus::Inconclusive {
                level,
                detail: format!("{} not certified pro-zero within bound {}", kind, bound),
            },
            witnesses: inner.witnesses,
        }
    }
}

fn obstruction_report_ind(
    tower: &IndModule,
    inner: StabilizationReport,
    bound: u32,
    kind: &str,
) -> StabilizationReport {
    let level = match &inner.status {
        TowerStatus::Inconclusive { level, .. } => *level,
        _ => 1,
    };
    if constant_nonzero_ind(tower, window(bound)) {
        StabilizationReport {
            status: TowerStatus::Failed {
                level,
                detail: format!("{} is constant and nonzero", kind),
            },
            witnesses: vec![format!(
                "witness module with {} generators at level {}",
                tower.level(level).gens(),
                level
            )],
        }
    } else {
        StabilizationReport {
            status: TowerStatus::Inconclusive {
                level,
                detail: format!("{} not certified ind-zero within bound {}", kind, bound),
            },
            witnesses: inner.witnesses,
        }
    }
}
