//! Bounded cochain complexes of finitely presented modules, with the tensor
//! product (Koszul signs), cohomology as explicit subquotients, induced maps
//! on cohomology, and the mapping-cone-free quasi-isomorphism check.

use super::{subquotient_mod, FpModule, ModuleMap, Submodule};
use crate::rings::{solve_matrix, Matrix, Result, Ring, RingError};

/// Bounded cochain complex; `terms[k]` sits in degree `lo + k` and
/// `diffs[k] : terms[k] -> terms[k+1]`. d o d = 0 is verified at
/// construction.
#[derive(Clone, Debug)]
pub struct Complex {
    ring: Ring,
    lo: i64,
    terms: Vec<FpModule>,
    diffs: Vec<ModuleMap>,
}

impl Complex {
    pub fn new(ring: Ring, lo: i64, terms: Vec<FpModule>, diffs: Vec<ModuleMap>) -> Result<Complex> {
        if !terms.is_empty() && diffs.len() + 1 != terms.len() {
            return Err(RingError::InvalidComplex(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source() != &terms[k] || d.target() != &terms[k + 1] {
                return Err(RingError::InvalidComplex(format!(
                    "differential {} does not match adjacent terms",
                    k
                )));
            }
        }
        for k in 0..diffs.len().saturating_sub(1) {
            let dd = diffs[k + 1].compose(&diffs[k]);
            if !dd.is_zero_map() {
                return Err(RingError::InvalidComplex(format!(
                    "d o d != 0 between degrees {} and {}",
                    lo + k as i64,
                    lo + k as i64 + 2
                )));
            }
        }
        Ok(Complex { ring, lo, terms, diffs })
    }

    pub fn empty(ring: &Ring) -> Complex {
        Complex { ring: ring.clone(), lo: 0, terms: Vec::new(), diffs: Vec::new() }
    }

    /// A single module concentrated in one degree.
    pub fn single(module: FpModule, degree: i64) -> Complex {
        Complex {
            ring: module.ring().clone(),
            lo: degree,
            terms: vec![module],
            diffs: Vec::new(),
        }
    }

    /// Two-term complex [source -> target] with the source in degree `lo`.
    pub fn two_term(map: ModuleMap, lo: i64) -> Complex {
        Complex {
            ring: map.ring().clone(),
            lo,
            terms: vec![map.source().clone(), map.target().clone()],
            diffs: vec![map],
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn in_range(&self, i: i64) -> bool {
        !self.terms.is_empty() && i >= self.lo && i <= self.hi()
    }

    pub fn term(&self, i: i64) -> FpModule {
        if self.in_range(i) {
            self.terms[(i - self.lo) as usize].clone()
        } else {
            FpModule::zero_module(&self.ring)
        }
    }

    pub fn diff(&self, i: i64) -> ModuleMap {
        if self.in_range(i) && self.in_range(i + 1) {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            ModuleMap::zero_map(self.term(i), self.term(i + 1))
        }
    }

    /// H^i = ker d^i / im d^(i-1) as a subquotient of term(i).
    pub fn cohomology(&self, i: i64) -> Submodule {
        let term = self.term(i);
        let d = self.diff(i);
        let combined = d.matrix().hstack(self.term(i + 1).presentation());
        let syz = crate::rings::kernel(&combined);
        let kernel_reps = syz.take_rows(0, term.gens());
        let prev = self.diff(i - 1);
        subquotient_mod(&term, kernel_reps, prev.matrix())
    }

    pub fn is_exact(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        (self.lo..=self.hi()).all(|i| self.cohomology(i).module.is_zero())
    }

    /// Quotient complex with terms M/JM and the same differential matrices.
    pub fn quotient_by_ideal(&self, gens: &[crate::rings::RingElement]) -> Complex {
        let terms: Vec<FpModule> = self
            .terms
            .iter()
            .map(|t| t.quotient_by_ideal(gens))
            .collect();
        let mut diffs = Vec::new();
        for (k, d) in self.diffs.iter().enumerate() {
            diffs.push(
                ModuleMap::new(terms[k].clone(), terms[k + 1].clone(), d.matrix().clone())
                    .expect("quotient differential"),
            );
        }
        Complex { ring: self.ring.clone(), lo: self.lo, terms, diffs }
    }

    /// Per-degree generator counts, for traces.
    pub fn profile(&self) -> Vec<(i64, usize)> {
        (self.lo..=self.hi()).map(|i| (i, self.term(i).gens())).collect()
    }
}

/// Index layout of the tensor product in one degree: blocks (p, q = i - p)
/// ordered by ascending p, with generator offsets.
fn tensor_layout(a: &Complex, b: &Complex, i: i64) -> Vec<(i64, i64, usize, usize)> {
    let mut out = Vec::new();
    let mut offset = 0usize;
    if a.hi() < a.lo() || b.hi() < b.lo() {
        return out;
    }
    for p in a.lo()..=a.hi() {
        let q = i - p;
        if q < b.lo() || q > b.hi() {
            continue;
        }
        let size = a.term(p).gens() * b.term(q).gens();
        out.push((p, q, offset, size));
        offset += size;
    }
    out
}

fn tensor_term(a: &Complex, b: &Complex, i: i64) -> FpModule {
    let layout = tensor_layout(a, b, i);
    if layout.is_empty() {
        return FpModule::zero_module(a.ring());
    }
    let blocks: Vec<FpModule> = layout
        .iter()
        .map(|(p, q, _, _)| a.term(*p).tensor(&b.term(*q)))
        .collect();
    let refs: Vec<&FpModule> = blocks.iter().collect();
    FpModule::direct_sum(&refs)
}

/// Total complex of the tensor product, with d(x (x) y) =
/// dx (x) y + (-1)^p x (x) dy.
pub fn tensor_complexes(a: &Complex, b: &Complex) -> Complex {
    assert!(a.ring() == b.ring(), "tensor over the same ring");
    let ring = a.ring().clone();
    if a.terms.is_empty() || b.terms.is_empty() {
        return Complex::empty(&ring);
    }
    let lo = a.lo() + b.lo();
    let hi = a.hi() + b.hi();
    let mut terms = Vec::new();
    for i in lo..=hi {
        terms.push(tensor_term(a, b, i));
    }
    let mut diffs = Vec::new();
    for i in lo..hi {
        let src_layout = tensor_layout(a, b, i);
        let tgt_layout = tensor_layout(a, b, i + 1);
        let src = &terms[(i - lo) as usize];
        let tgt = &terms[(i + 1 - lo) as usize];
        let mut mat = Matrix::zero(&ring, tgt.gens(), src.gens());
        for (p, q, c0, _) in &src_layout {
            // dx (x) y
            if let Some((_, _, r0, _)) = tgt_layout
                .iter()
                .find(|(tp, tq, _, _)| *tp == p + 1 && tq == q)
            {
                let block = a
                    .diff(*p)
                    .matrix()
                    .kronecker(&Matrix::identity(&ring, b.term(*q).gens()));
                write_block(&mut mat, *r0, *c0, &block);
            }
            // (-1)^p x (x) dy
            if let Some((_, _, r0, _)) = tgt_layout
                .iter()
                .find(|(tp, tq, _, _)| tp == p && *tq == q + 1)
            {
                let mut block = Matrix::identity(&ring, a.term(*p).gens())
                    .kronecker(b.diff(*q).matrix());
                if p.rem_euclid(2) == 1 {
                    block = block.neg();
                }
                write_block(&mut mat, *r0, *c0, &block);
            }
        }
        diffs.push(
            ModuleMap::new(src.clone(), tgt.clone(), mat).expect("tensor differential is a map"),
        );
    }
    Complex::new(ring, lo, terms, diffs).expect("tensor complex satisfies d o d = 0")
}

fn write_block(mat: &mut Matrix, r0: usize, c0: usize, block: &Matrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            *mat.at_mut(r0 + i, c0 + j) = block.at(i, j).clone();
        }
    }
}

/// A chain map between bounded complexes; commuting squares are verified at
/// construction. Degrees without an explicit component are zero maps.
#[derive(Clone, Debug)]
pub struct ComplexMap {
    source: Complex,
    target: Complex,
    maps: Vec<(i64, ModuleMap)>,
}

impl ComplexMap {
    pub fn new(source: Complex, target: Complex, maps: Vec<(i64, ModuleMap)>) -> Result<ComplexMap> {
        for (i, f) in &maps {
            if f.source() != &source.term(*i) || f.target() != &target.term(*i) {
                return Err(RingError::InvalidMap(format!(
                    "component at degree {} does not match the complexes",
                    i
                )));
            }
        }
        let cm = ComplexMap { source, target, maps };
        let lo = cm.source.lo().min(cm.target.lo()) - 1;
        let hi = cm.source.hi().max(cm.target.hi());
        for i in lo..=hi {
            let left = cm.target.diff(i).compose(&cm.component(i));
            let right = cm.component(i + 1).compose(&cm.source.diff(i));
            if !left.equal(&right) {
                return Err(RingError::InvalidMap(format!(
                    "chain map squares do not commute at degree {}",
                    i
                )));
            }
        }
        Ok(cm)
    }

    pub fn identity(c: &Complex) -> ComplexMap {
        let maps = (c.lo()..=c.hi())
            .map(|i| (i, ModuleMap::identity(&c.term(i))))
            .collect();
        ComplexMap { source: c.clone(), target: c.clone(), maps }
    }

    pub fn zero(source: &Complex, target: &Complex) -> ComplexMap {
        ComplexMap { source: source.clone(), target: target.clone(), maps: Vec::new() }
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn component(&self, i: i64) -> ModuleMap {
        match self.maps.iter().find(|(d, _)| *d == i) {
            Some((_, f)) => f.clone(),
            None => ModuleMap::zero_map(self.source.term(i), self.target.term(i)),
        }
    }

    pub fn compose(&self, other: &ComplexMap) -> ComplexMap {
        let lo = other.source.lo().min(self.target.lo());
        let hi = other.source.hi().max(self.target.hi());
        let mut maps = Vec::new();
        for i in lo..=hi {
            let m = self.component(i).compose(&other.component(i));
            maps.push((i, m));
        }
        ComplexMap { source: other.source.clone(), target: self.target.clone(), maps }
    }

    /// Induced map H^i(source) -> H^i(target), expressed on the given
    /// cohomology presentations.
    pub fn induced(&self, i: i64, h_src: &Submodule, h_tgt: &Submodule) -> ModuleMap {
        let images = self.component(i).matrix().mul(&h_src.reps);
        let prev = self.target.diff(i - 1);
        let combined = h_tgt
            .reps
            .hstack(prev.matrix())
            .hstack(self.target.term(i).presentation());
        let sol = solve_matrix(&combined, &images)
            .expect("chain map carries cocycles to cocycles");
        let mat = sol.take_rows(0, h_tgt.module.gens());
        ModuleMap::new(h_src.module.clone(), h_tgt.module.clone(), mat)
            .expect("induced map on cohomology")
    }

    /// Tensor of chain maps, aligned with `tensor_complexes`.
    pub fn tensor(&self, other: &ComplexMap) -> ComplexMap {
        let source = tensor_complexes(&self.source, &other.source);
        let target = tensor_complexes(&self.target, &other.target);
        let ring = source.ring().clone();
        let mut maps = Vec::new();
        for i in source.lo()..=source.hi() {
            let src_layout = tensor_layout(&self.source, &other.source, i);
            let tgt_layout = tensor_layout(&self.target, &other.target, i);
            let mut mat = Matrix::zero(&ring, target.term(i).gens(), source.term(i).gens());
            for (p, q, c0, _) in &src_layout {
                if let Some((_, _, r0, _)) =
                    tgt_layout.iter().find(|(tp, tq, _, _)| tp == p && tq == q)
                {
                    let block = self.component(*p).matrix().kronecker(other.component(*q).matrix());
                    write_block(&mut mat, *r0, *c0, &block);
                }
            }
            maps.push((
                i,
                ModuleMap::new(source.term(i), target.term(i), mat).expect("tensor of chain maps"),
            ));
        }
        ComplexMap { source, target, maps }
    }
}

/// Convenience: tensor of maps returning only the map.
pub fn tensor_maps(f: &ComplexMap, g: &ComplexMap) -> ComplexMap {
    f.tensor(g)
}

/// Outcome of a quasi-isomorphism check, with per-degree witnesses on
/// failure.
#[derive(Clone, Debug)]
pub struct QuasiIsoReport {
    pub ok: bool,
    /// degrees where the induced map fails, with kernel and cokernel
    /// presentations
    pub failures: Vec<(i64, FpModule, FpModule)>,
}

/// True iff the chain map induces isomorphisms on all cohomology.
pub fn quasi_iso_check(f: &ComplexMap) -> QuasiIsoReport {
    let lo = f.source().lo().min(f.target().lo());
    let hi = f.source().hi().max(f.target().hi());
    let mut failures = Vec::new();
    for i in lo..=hi {
        let hs = f.source().cohomology(i);
        let ht = f.target().cohomology(i);
        let induced = f.induced(i, &hs, &ht);
        if !(induced.is_injective() && induced.is_surjective()) {
            failures.push((i, induced.kernel().module, induced.cokernel()));
        }
    }
    QuasiIsoReport { ok: failures.is_empty(), failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcplx::invariants;
    use crate::rings::Ring;

    fn zz() -> Ring {
        Ring::integers()
    }

    fn mult_complex(n: i64, lo: i64) -> Complex {
        // [Z -> Z] multiplication by n, source in degree lo
        let z = zz();
        let free = FpModule::free(&z, 1);
        let m = ModuleMap::new(
            free.clone(),
            free.clone(),
            Matrix::new(z.clone(), 1, 1, vec![z.from_int(n)]).unwrap(),
        )
        .unwrap();
        Complex::two_term(m, lo)
    }

    #[test]
    fn cohomology_of_multiplication_by_two() {
        // degrees 0,1: H^0 = 0, H^1 = Z/2
        let c = mult_complex(2, 0);
        let h0 = c.cohomology(0);
        assert!(h0.module.is_zero());
        let h1 = c.cohomology(1);
        let z = zz();
        let z2 = FpModule::cyclic(&z, &[z.from_int(2)]);
        assert_eq!(invariants(&h1.module), invariants(&z2));
        // outside the range cohomology vanishes
        assert!(c.cohomology(5).module.is_zero());
        assert!(c.cohomology(-1).module.is_zero());
    }

    #[test]
    fn zero_complex_cohomology() {
        let z = zz();
        let c = Complex::empty(&z);
        assert!(c.cohomology(0).module.is_zero());
        assert!(c.is_exact());
    }

    #[test]
    fn tensor_is_koszul_complex() {
        // [Z ->2 Z] (x) [Z ->3 Z]: H^0 = 0, H^0..: total over degrees -2..0
        let a = mult_complex(2, -1);
        let b = mult_complex(3, -1);
        let t = tensor_complexes(&a, &b);
        assert_eq!(t.lo(), -2);
        assert_eq!(t.hi(), 0);
        assert_eq!(t.term(-1).gens(), 2);
        // gcd(2,3)=1 so all cohomology vanishes
        assert!(t.is_exact());
        // tensoring with the unit complex changes nothing
        let unit = Complex::single(FpModule::free(&zz(), 1), 0);
        let u = tensor_complexes(&a, &unit);
        assert_eq!(u.lo(), a.lo());
        assert_eq!(u.term(-1).gens(), 1);
        let h = u.cohomology(0);
        let z = zz();
        assert_eq!(
            invariants(&h.module),
            invariants(&FpModule::cyclic(&z, &[z.from_int(2)]))
        );
    }

    #[test]
    fn koszul_self_tensor_sign_check() {
        // [Z ->2 Z] (x) [Z ->2 Z] must satisfy d o d = 0 (construction
        // panics otherwise) and have H^0 = Z/2, H^-1 = Z/2
        let a = mult_complex(2, -1);
        let t = tensor_complexes(&a, &a);
        let z = zz();
        let z2 = FpModule::cyclic(&z, &[z.from_int(2)]);
        assert_eq!(invariants(&t.cohomology(0).module), invariants(&z2));
        assert_eq!(invariants(&t.cohomology(-1).module), invariants(&z2));
        assert!(t.cohomology(-2).module.is_zero());
    }

    #[test]
    fn quasi_iso_projection() {
        // [Z ->2 Z] -> [0 -> Z/2] degreewise projection is a quasi-iso
        let z = zz();
        let c = mult_complex(2, 0);
        let z2 = FpModule::cyclic(&z, &[z.from_int(2)]);
        let d = Complex::single(z2.clone(), 1);
        let proj = ModuleMap::new(
            FpModule::free(&z, 1),
            z2.clone(),
            Matrix::identity(&z, 1),
        )
        .unwrap();
        let f = ComplexMap::new(c.clone(), d.clone(), vec![(1, proj)]).unwrap();
        assert!(quasi_iso_check(&f).ok);
        // identity is a quasi-iso
        assert!(quasi_iso_check(&ComplexMap::identity(&c)).ok);
        // the zero map between non-acyclic complexes is not
        let zf = ComplexMap::zero(&d, &d);
        let rep = quasi_iso_check(&zf);
        assert!(!rep.ok);
        assert_eq!(rep.failures[0].0, 1);
        assert!(!rep.failures[0].1.is_zero());
    }

    #[test]
    fn induced_map_on_cohomology() {
        // doubling on [Z ->4 Z] induces x2 on H^1 = Z/4
        let z = zz();
        let c = mult_complex(4, 0);
        let two = ModuleMap::scalar(&FpModule::free(&z, 1), &z.from_int(2));
        let f = ComplexMap::new(c.clone(), c.clone(), vec![(0, two.clone()), (1, two)]).unwrap();
        let h1s = c.cohomology(1);
        let h1t = c.cohomology(1);
        let ind = f.induced(1, &h1s, &h1t);
        assert!(!ind.is_zero_map());
        assert!(!ind.is_iso());
        let k = ind.kernel();
        let z2 = FpModule::cyclic(&z, &[z.from_int(2)]);
        assert_eq!(invariants(&k.module), invariants(&z2));
    }
}
