//! Inverse and direct systems of finitely presented modules and complexes,
//! evaluated lazily with memoization. These towers are the computational
//! stand-ins for completion, torsion, and their derived functors; the
//! bounded checks live in `checks`.

mod checks;

pub use checks::{
    ind_iso_check, ind_zero_check, kernel_tower_ind, kernel_tower_pro, cokernel_tower_ind,
    cokernel_tower_pro, pro_iso_check, pro_zero_check, stable_value_ind, stable_value_pro,
    StabilizationReport, TowerStatus,
};

use crate::modcplx::{Complex, ComplexMap, FpModule, ModuleMap};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Levels are indexed from 1. The inspection window of every bounded check
/// is `2 * bound`: levels 1..=bound are certified, witnesses are searched up
/// to twice the bound.
pub const LEVEL_BASE: u32 = 1;

struct TowerInner<T, M> {
    level_fn: Box<dyn Fn(u32) -> T + Send + Sync>,
    trans_fn: Box<dyn Fn(u32) -> M + Send + Sync>,
    levels: Mutex<HashMap<u32, Arc<T>>>,
    trans: Mutex<HashMap<u32, Arc<M>>>,
}

impl<T, M> TowerInner<T, M> {
    fn new(
        level_fn: impl Fn(u32) -> T + Send + Sync + 'static,
        trans_fn: impl Fn(u32) -> M + Send + Sync + 'static,
    ) -> Arc<Self> {
        Arc::new(TowerInner {
            level_fn: Box::new(level_fn),
            trans_fn: Box::new(trans_fn),
            levels: Mutex::new(HashMap::new()),
            trans: Mutex::new(HashMap::new()),
        })
    }

    fn level(&self, n: u32) -> Arc<T> {
        if let Some(v) = self.levels.lock().unwrap().get(&n) {
            return v.clone();
        }
        let v = Arc::new((self.level_fn)(n));
        let mut cache = self.levels.lock().unwrap();
        cache.entry(n).or_insert(v).clone()
    }

    fn transition(&self, n: u32) -> Arc<M> {
        if let Some(v) = self.trans.lock().unwrap().get(&n) {
            return v.clone();
        }
        let v = Arc::new((self.trans_fn)(n));
        let mut cache = self.trans.lock().unwrap();
        cache.entry(n).or_insert(v).clone()
    }
}

/// Inverse system of modules: transition(n) maps level n+1 to level n.
#[derive(Clone)]
pub struct ProModule {
    inner: Arc<TowerInner<FpModule, ModuleMap>>,
}

/// Direct system of modules: transition(n) maps level n to level n+1.
#[derive(Clone)]
pub struct IndModule {
    inner: Arc<TowerInner<FpModule, ModuleMap>>,
}

impl ProModule {
    pub fn from_fns(
        level: impl Fn(u32) -> FpModule + Send + Sync + 'static,
        trans: impl Fn(u32) -> ModuleMap + Send + Sync + 'static,
    ) -> ProModule {
        ProModule { inner: TowerInner::new(level, trans) }
    }

    pub fn constant(m: FpModule) -> ProModule {
        let m2 = m.clone();
        ProModule::from_fns(move |_| m.clone(), move |_| ModuleMap::identity(&m2))
    }

    pub fn level(&self, n: u32) -> FpModule {
        (*self.inner.level(n)).clone()
    }

    /// Map level n+1 -> level n.
    pub fn transition(&self, n: u32) -> ModuleMap {
        let t = (*self.inner.transition(n)).clone();
        debug_assert!(t.source() == &self.level(n + 1) && t.target() == &self.level(n));
        t
    }

    /// Composite map level `from` -> level `to`, from >= to.
    pub fn composite(&self, from: u32, to: u32) -> ModuleMap {
        assert!(from >= to);
        let mut map = ModuleMap::identity(&self.level(from));
        for n in (to..from).rev() {
            map = self.transition(n).compose(&map);
        }
        map
    }
}

impl IndModule {
    pub fn from_fns(
        level: impl Fn(u32) -> FpModule + Send + Sync + 'static,
        trans: impl Fn(u32) -> ModuleMap + Send + Sync + 'static,
    ) -> IndModule {
        IndModule { inner: TowerInner::new(level, trans) }
    }

    pub fn constant(m: FpModule) -> IndModule {
        let m2 = m.clone();
        IndModule::from_fns(move |_| m.clone(), move |_| ModuleMap::identity(&m2))
    }

    pub fn level(&self, n: u32) -> FpModule {
        (*self.inner.level(n)).clone()
    }

    /// Map level n -> level n+1.
    pub fn transition(&self, n: u32) -> ModuleMap {
        let t = (*self.inner.transition(n)).clone();
        debug_assert!(t.source() == &self.level(n) && t.target() == &self.level(n + 1));
        t
    }

    /// Composite map level `from` -> level `to`, from <= to.
    pub fn composite(&self, from: u32, to: u32) -> ModuleMap {
        assert!(from <= to);
        let mut map = ModuleMap::identity(&self.level(from));
        for n in from..to {
            map = self.transition(n).compose(&map);
        }
        map
    }
}

/// Inverse system of complexes with chain-map transitions (level n+1 -> n).
#[derive(Clone)]
pub struct ProComplex {
    inner: Arc<TowerInner<Complex, ComplexMap>>,
}

/// Direct system of complexes with chain-map transitions (level n -> n+1).
#[derive(Clone)]
pub struct IndComplex {
    inner: Arc<TowerInner<Complex, ComplexMap>>,
}

impl ProComplex {
    pub fn from_fns(
        level: impl Fn(u32) -> Complex + Send + Sync + 'static,
        trans: impl Fn(u32) -> ComplexMap + Send + Sync + 'static,
    ) -> ProComplex {
        ProComplex { inner: TowerInner::new(level, trans) }
    }

    pub fn constant(c: Complex) -> ProComplex {
        let c2 = c.clone();
        ProComplex::from_fns(move |_| c.clone(), move |_| ComplexMap::identity(&c2))
    }

    pub fn level(&self, n: u32) -> Complex {
        (*self.inner.level(n)).clone()
    }

    pub fn transition(&self, n: u32) -> ComplexMap {
        (*self.inner.transition(n)).clone()
    }

    /// Tower of H^i(level) with the induced transitions.
    pub fn levelwise_cohomology(&self, degree: i64) -> ProModule {
        let subs = Arc::new(Mutex::new(HashMap::<u32, Arc<crate::modcplx::Submodule>>::new()));
        let this = self.clone();
        let subs_l = subs.clone();
        let this_t = self.clone();
        let level = move |n: u32| -> FpModule {
            let sub = cohomology_cached(&this, &subs_l, n, degree);
            sub.module.clone()
        };
        let trans = move |n: u32| -> ModuleMap {
            let src = cohomology_cached(&this_t, &subs, n + 1, degree);
            let tgt = cohomology_cached(&this_t, &subs, n, degree);
            this_t.transition(n).induced(degree, &src, &tgt)
        };
        ProModule::from_fns(level, trans)
    }
}

impl IndComplex {
    pub fn from_fns(
        level: impl Fn(u32) -> Complex + Send + Sync + 'static,
        trans: impl Fn(u32) -> ComplexMap + Send + Sync + 'static,
    ) -> IndComplex {
        IndComplex { inner: TowerInner::new(level, trans) }
    }

    pub fn constant(c: Complex) -> IndComplex {
        let c2 = c.clone();
        IndComplex::from_fns(move |_| c.clone(), move |_| ComplexMap::identity(&c2))
    }

    pub fn level(&self, n: u32) -> Complex {
        (*self.inner.level(n)).clone()
    }

    pub fn transition(&self, n: u32) -> ComplexMap {
        (*self.inner.transition(n)).clone()
    }

    pub fn levelwise_cohomology(&self, degree: i64) -> IndModule {
        let subs = Arc::new(Mutex::new(HashMap::<u32, Arc<crate::modcplx::Submodule>>::new()));
        let this = self.clone();
        let subs_l = subs.clone();
        let this_t = self.clone();
        let level = move |n: u32| -> FpModule {
            let sub = cohomology_cached_ind(&this, &subs_l, n, degree);
            sub.module.clone()
        };
        let trans = move |n: u32| -> ModuleMap {
            let src = cohomology_cached_ind(&this_t, &subs, n, degree);
            let tgt = cohomology_cached_ind(&this_t, &subs, n + 1, degree);
            this_t.transition(n).induced(degree, &src, &tgt)
        };
        IndModule::from_fns(level, trans)
    }
}

fn cohomology_cached(
    pc: &ProComplex,
    cache: &Arc<Mutex<HashMap<u32, Arc<crate::modcplx::Submodule>>>>,
    n: u32,
    degree: i64,
) -> Arc<crate::modcplx::Submodule> {
    if let Some(s) = cache.lock().unwrap().get(&n) {
        return s.clone();
    }
    let s = Arc::new(pc.level(n).cohomology(degree));
    let mut guard = cache.lock().unwrap();
    guard.entry(n).or_insert(s).clone()
}

fn cohomology_cached_ind(
    pc: &IndComplex,
    cache: &Arc<Mutex<HashMap<u32, Arc<crate::modcplx::Submodule>>>>,
    n: u32,
    degree: i64,
) -> Arc<crate::modcplx::Submodule> {
    if let Some(s) = cache.lock().unwrap().get(&n) {
        return s.clone();
    }
    let s = Arc::new(pc.level(n).cohomology(degree));
    let mut guard = cache.lock().unwrap();
    guard.entry(n).or_insert(s).clone()
}

/// Levelwise natural map of pro-modules. Naturality of the provided level
/// maps is verified by the iso checks as they walk the towers.
#[derive(Clone)]
pub struct ProMap {
    pub source: ProModule,
    pub target: ProModule,
    map_fn: Arc<dyn Fn(u32) -> ModuleMap + Send + Sync>,
    cache: Arc<Mutex<HashMap<u32, Arc<ModuleMap>>>>,
}

impl ProMap {
    pub fn new(
        source: ProModule,
        target: ProModule,
        f: impl Fn(u32) -> ModuleMap + Send + Sync + 'static,
    ) -> ProMap {
        ProMap { source, target, map_fn: Arc::new(f), cache: Default::default() }
    }

    pub fn level(&self, n: u32) -> ModuleMap {
        if let Some(m) = self.cache.lock().unwrap().get(&n) {
            return (**m).clone();
        }
        let m = Arc::new((self.map_fn)(n));
        let mut guard = self.cache.lock().unwrap();
        (**guard.entry(n).or_insert(m)).clone()
    }

    /// f_n o trans_src = trans_tgt o f_{n+1} at level n.
    pub fn natural_at(&self, n: u32) -> bool {
        let left = self.level(n).compose(&self.source.transition(n));
        let right = self.target.transition(n).compose(&self.level(n + 1));
        left.equal(&right)
    }
}

/// Levelwise natural map of ind-modules.
#[derive(Clone)]
pub struct IndMap {
    pub source: IndModule,
    pub target: IndModule,
    map_fn: Arc<dyn Fn(u32) -> ModuleMap + Send + Sync>,
    cache: Arc<Mutex<HashMap<u32, Arc<ModuleMap>>>>,
}

impl IndMap {
    pub fn new(
        source: IndModule,
        target: IndModule,
        f: impl Fn(u32) -> ModuleMap + Send + Sync + 'static,
    ) -> IndMap {
        IndMap { source, target, map_fn: Arc::new(f), cache: Default::default() }
    }

    pub fn level(&self, n: u32) -> ModuleMap {
        if let Some(m) = self.cache.lock().unwrap().get(&n) {
            return (**m).clone();
        }
        let m = Arc::new((self.map_fn)(n));
        let mut guard = self.cache.lock().unwrap();
        (**guard.entry(n).or_insert(m)).clone()
    }

    /// trans_tgt o f_n = f_{n+1} o trans_src at level n.
    pub fn natural_at(&self, n: u32) -> bool {
        let left = self.target.transition(n).compose(&self.level(n));
        let right = self.level(n + 1).compose(&self.source.transition(n));
        left.equal(&right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcplx::invariants;
    use crate::rings::{Matrix, Ring};

    fn zz() -> Ring {
        Ring::integers()
    }

    /// the tower {Z/p^n} with reduction transitions
    pub(crate) fn padic_tower(p: i64) -> ProModule {
        let z = zz();
        let zt = z.clone();
        ProModule::from_fns(
            move |n| FpModule::cyclic(&z, &[z.from_int(p.pow(n))]),
            move |n| {
                let src = FpModule::cyclic(&zt, &[zt.from_int(p.pow(n + 1))]);
                let tgt = FpModule::cyclic(&zt, &[zt.from_int(p.pow(n))]);
                ModuleMap::new(src, tgt, Matrix::identity(&zt, 1)).unwrap()
            },
        )
    }

    #[test]
    fn tower_levels_and_composites() {
        let t = padic_tower(2);
        let z = zz();
        assert_eq!(
            invariants(&t.level(3)),
            invariants(&FpModule::cyclic(&z, &[z.from_int(8)]))
        );
        let c = t.composite(4, 1);
        assert!(c.is_surjective());
        assert!(!c.is_injective());
    }

    #[test]
    fn levelwise_cohomology_of_koszul_tower() {
        // {[Z ->p^j Z]} has H^1 tower {Z/p^j} with reduction transitions
        let z = zz();
        let zt = z.clone();
        let pc = ProComplex::from_fns(
            move |j| {
                let free = FpModule::free(&z, 1);
                let d = ModuleMap::new(
                    free.clone(),
                    free.clone(),
                    Matrix::from_fn(&z, 1, 1, |_, _| z.from_int(2i64.pow(j))),
                )
                .unwrap();
                Complex::two_term(d, 0)
            },
            move |j| {
                let free = FpModule::free(&zt, 1);
                let mk = |e: i64| {
                    ModuleMap::new(
                        free.clone(),
                        free.clone(),
                        Matrix::from_fn(&zt, 1, 1, |_, _| zt.from_int(e)),
                    )
                    .unwrap()
                };
                let src = {
                    let d = mk(2i64.pow(j + 1));
                    Complex::two_term(d, 0)
                };
                let tgt = {
                    let d = mk(2i64.pow(j));
                    Complex::two_term(d, 0)
                };
                // degree 0: multiply by 2, degree 1: identity
                ComplexMap::new(src, tgt, vec![(0, mk(2)), (1, mk(1))]).unwrap()
            },
        );
        let h1 = pc.levelwise_cohomology(1);
        let zr = zz();
        assert_eq!(
            invariants(&h1.level(2)),
            invariants(&FpModule::cyclic(&zr, &[zr.from_int(4)]))
        );
        let t = h1.transition(1);
        assert!(t.is_surjective());
        // H^0 tower is zero
        let h0 = pc.levelwise_cohomology(0);
        assert!(h0.level(3).is_zero());
    }
}
