//! Finite free resolutions by iterated syzygies, and Tor/Ext computed from
//! them.

use super::{Complex, FpModule, ModuleMap};
use crate::rings::{kernel, Matrix, Result, Ring, RingError, RingKind};

/// A free resolution ... -> F_2 -> F_1 -> F_0 of a module M, stored as a
/// complex in degrees -length..0 together with the augmentation F_0 -> M.
/// `complete` records that the last computed kernel vanished, so the
/// resolution is exact everywhere to the left.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub module: FpModule,
    pub complex: Complex,
    pub augmentation: ModuleMap,
    pub complete: bool,
}

impl FreeResolution {
    pub fn length(&self) -> usize {
        (self.complex.hi() - self.complex.lo()) as usize
    }
}

/// Default resolution length for a module over its ring: the number of ring
/// variables plus two (slack above the syzygy bound), and 2 over Z.
pub fn default_resolution_length(ring: &Ring) -> usize {
    match ring.kind() {
        RingKind::Integers | RingKind::IntegersMod(_) => 2,
        RingKind::Rationals | RingKind::PrimeField(_) => 2,
        _ => ring.nvars() + 2,
    }
}

/// Resolve M by free modules up to the requested length. Exactness at each
/// computed interior degree holds by construction (each differential's
/// columns generate the kernel of the previous one); the augmented head is
/// verified.
pub fn free_resolution(m: &FpModule, length: usize) -> FreeResolution {
    let ring = m.ring().clone();
    let mut mats: Vec<Matrix> = Vec::new(); // mats[k] : F_{k+1} -> F_k
    let mut cur = m.presentation().clone();
    let mut complete = false;
    for _ in 0..length {
        if cur.cols() == 0 {
            complete = true;
            break;
        }
        mats.push(cur.clone());
        cur = kernel(&cur);
    }
    if !complete && cur.cols() == 0 {
        complete = true;
    }
    // terms F_0 .. F_n, degrees 0, -1, ..., -n
    let n = mats.len();
    let mut terms: Vec<FpModule> = Vec::with_capacity(n + 1);
    let mut ranks = Vec::with_capacity(n + 1);
    ranks.push(m.gens());
    for mat in &mats {
        ranks.push(mat.cols());
    }
    for r in &ranks {
        terms.push(FpModule::free(&ring, *r));
    }
    // cochain order: degree -n first
    let terms_rev: Vec<FpModule> = terms.iter().rev().cloned().collect();
    let mut diffs = Vec::new();
    for k in (0..n).rev() {
        let src = terms_rev[(n - 1 - k) as usize].clone();
        let tgt = terms_rev[(n - k) as usize].clone();
        diffs.push(ModuleMap::new(src, tgt, mats[k].clone()).expect("free differential"));
    }
    let complex = Complex::new(ring.clone(), -(n as i64), terms_rev, diffs)
        .expect("resolution differentials compose to zero");
    let augmentation = ModuleMap::new(
        terms[0].clone(),
        m.clone(),
        Matrix::identity(&ring, m.gens()),
    )
    .expect("augmentation");
    FreeResolution { module: m.clone(), complex, augmentation, complete }
}

/// Tor_i(M, N) = H^{-i} of (free resolution of M) (x) N.
pub fn tor(m: &FpModule, n: &FpModule, i: usize, length: usize) -> Result<FpModule> {
    let res = free_resolution(m, length);
    if !res.complete && i + 1 > res.length() {
        return Err(RingError::ResolutionTooShort { needed: i + 1 });
    }
    let t = super::tensor_complexes(&res.complex, &Complex::single(n.clone(), 0));
    Ok(t.cohomology(-(i as i64)).module)
}

/// Ext^i(M, N) = H^i of Hom(free resolution of M, N).
pub fn ext(m: &FpModule, n: &FpModule, i: usize, length: usize) -> Result<FpModule> {
    let res = free_resolution(m, length);
    if !res.complete && i + 1 > res.length() {
        return Err(RingError::ResolutionTooShort { needed: i + 1 });
    }
    let hom = hom_from_free_resolution(&res, n);
    Ok(hom.cohomology(i as i64).module)
}

/// Hom(F_., N) as a cochain complex in degrees 0..length: Hom(R^a, N) = N^a,
/// and the differential is precomposition by the resolution differential.
pub fn hom_from_free_resolution(res: &FreeResolution, n: &FpModule) -> Complex {
    let ring = res.module.ring().clone();
    let len = res.length() as i64;
    let mut terms = Vec::new();
    for k in 0..=len {
        let rank = res.complex.term(-k).gens();
        terms.push(hom_free_into(n, rank));
    }
    let mut diffs = Vec::new();
    for k in 0..len {
        // Hom(F_k, N) -> Hom(F_{k+1}, N): precompose with F_{k+1} -> F_k
        let d = res.complex.diff(-(k + 1)); // F_{k+1} -> F_k
        let mat = d
            .matrix()
            .transpose()
            .kronecker(&Matrix::identity(&ring, n.gens()));
        diffs.push(
            ModuleMap::new(terms[k as usize].clone(), terms[k as usize + 1].clone(), mat)
                .expect("hom differential"),
        );
    }
    Complex::new(ring, 0, terms, diffs).expect("hom complex")
}

/// Tor with the default resolution length, retrying once with double the
/// length if it comes up short.
pub fn tor_auto(m: &FpModule, n: &FpModule, i: usize) -> Result<FpModule> {
    let len = default_resolution_length(m.ring()).max(i + 1);
    match tor(m, n, i, len) {
        Err(RingError::ResolutionTooShort { .. }) => tor(m, n, i, 2 * len),
        other => other,
    }
}

/// Ext with the default resolution length, retrying once with double the
/// length if it comes up short.
pub fn ext_auto(m: &FpModule, n: &FpModule, i: usize) -> Result<FpModule> {
    let len = default_resolution_length(m.ring()).max(i + 1);
    match ext(m, n, i, len) {
        Err(RingError::ResolutionTooShort { .. }) => ext(m, n, i, 2 * len),
        other => other,
    }
}

/// Hom(R^rank, N) = N^rank with block-diagonal presentation.
pub fn hom_free_into(n: &FpModule, rank: usize) -> FpModule {
    if rank == 0 {
        return FpModule::zero_module(n.ring());
    }
    let copies: Vec<FpModule> = (0..rank).map(|_| n.clone()).collect();
    let refs: Vec<&FpModule> = copies.iter().collect();
    FpModule::direct_sum(&refs)
}
