//! Finitely presented modules and their maps. A module is the cokernel of
//! its presentation matrix (columns = relations among the standard
//! generators); every kernel, image, and subquotient is produced through
//! syzygy computations in the base ring.

mod complex;
mod length;
mod resolution;

pub use complex::{
    quasi_iso_check, tensor_complexes, tensor_maps, Complex, ComplexMap, QuasiIsoReport,
};
pub use length::{finite_length, Length};
pub use resolution::{
    default_resolution_length, ext, ext_auto, free_resolution, hom_free_into,
    hom_from_free_resolution, tor, tor_auto, FreeResolution,
};

use crate::rings::{kernel, solve_matrix, Matrix, Result, Ring, RingElement, RingError};

/// Finitely presented module: cokernel of the presentation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpModule {
    ring: Ring,
    presentation: Matrix,
}

impl FpModule {
    pub fn new(presentation: Matrix) -> FpModule {
        FpModule { ring: presentation.ring().clone(), presentation }
    }

    pub fn free(ring: &Ring, n: usize) -> FpModule {
        FpModule { ring: ring.clone(), presentation: Matrix::zero(ring, n, 0) }
    }

    pub fn zero_module(ring: &Ring) -> FpModule {
        FpModule::free(ring, 0)
    }

    /// R/(rels) as a cyclic module.
    pub fn cyclic(ring: &Ring, rels: &[RingElement]) -> FpModule {
        let m = Matrix::from_fn(ring, 1, rels.len(), |_, j| rels[j].clone());
        FpModule::new(m)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> usize {
        self.presentation.rows()
    }

    pub fn presentation(&self) -> &Matrix {
        &self.presentation
    }

    /// True iff every generator lies in the relation span.
    pub fn is_zero(&self) -> bool {
        if self.gens() == 0 {
            return true;
        }
        let id = Matrix::identity(&self.ring, self.gens());
        solve_matrix(&self.presentation, &id).is_some()
    }

    pub fn direct_sum(parts: &[&FpModule]) -> FpModule {
        assert!(!parts.is_empty());
        let ring = parts[0].ring.clone();
        let blocks: Vec<&Matrix> = parts.iter().map(|m| &m.presentation).collect();
        FpModule::new(Matrix::block_diag(&ring, &blocks))
    }

    /// M (x) N: generators g_i (x) h_j ordered with the second index fastest.
    pub fn tensor(&self, other: &FpModule) -> FpModule {
        assert!(self.ring == other.ring);
        let im = Matrix::identity(&self.ring, self.gens());
        let in_ = Matrix::identity(&self.ring, other.gens());
        let a = self.presentation.kronecker(&in_);
        let b = im.kronecker(&other.presentation);
        FpModule::new(a.hstack(&b))
    }

    /// M / (ideal gens) M.
    pub fn quotient_by_ideal(&self, gens: &[RingElement]) -> FpModule {
        let mut pres = self.presentation.clone();
        for g in gens {
            let block = Matrix::identity(&self.ring, self.gens()).scale(g);
            pres = pres.hstack(&block);
        }
        FpModule::new(pres)
    }

    /// Annihilator submodule {m : g m = 0 for all g}: the kernel of the
    /// stacked multiplication map M -> M^k.
    pub fn annihilator_submodule(&self, gens: &[RingElement]) -> Submodule {
        let copies: Vec<FpModule> = gens.iter().map(|_| self.clone()).collect();
        let refs: Vec<&FpModule> = copies.iter().collect();
        if gens.is_empty() {
            return Submodule {
                ambient: self.clone(),
                module: self.clone(),
                reps: Matrix::identity(&self.ring, self.gens()),
            };
        }
        let target = FpModule::direct_sum(&refs);
        let mut mat = Matrix::zero(&self.ring, 0, self.gens());
        for g in gens {
            mat = mat.vstack(&Matrix::identity(&self.ring, self.gens()).scale(g));
        }
        let map = ModuleMap::new(self.clone(), target, mat).expect("multiplication is a map");
        map.kernel()
    }

    /// Minimal generator count where a canonical form exists (fields and the
    /// integers); otherwise the presented generator count.
    pub fn min_gens(&self) -> usize {
        use crate::rings::RingKind;
        match self.ring.kind() {
            RingKind::Rationals | RingKind::PrimeField(_) => {
                self.gens() - crate::rings::rank(&self.presentation)
            }
            RingKind::Integers => {
                let snf = crate::rings::smith_normal_form(&self.presentation).unwrap();
                let units = snf
                    .diag
                    .iter()
                    .filter(|d| **d == num_bigint::BigInt::from(1))
                    .count();
                self.gens() - units
            }
            _ => self.gens(),
        }
    }
}

/// A submodule of an ambient module, presented on its own generators with
/// representatives in the ambient generator coordinates.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub ambient: FpModule,
    pub module: FpModule,
    /// ambient.gens() x module.gens(): column j represents generator j.
    pub reps: Matrix,
}

/// Map of finitely presented modules, given by its matrix on generators.
/// Construction verifies that source relations map into target relations.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: FpModule,
    target: FpModule,
    matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: FpModule, target: FpModule, matrix: Matrix) -> Result<ModuleMap> {
        if matrix.rows() != target.gens() || matrix.cols() != source.gens() {
            return Err(RingError::DimensionMismatch(format!(
                "map matrix {}x{} between modules with {} and {} generators",
                matrix.rows(),
                matrix.cols(),
                source.gens(),
                target.gens()
            )));
        }
        if source.ring() != target.ring() || matrix.ring() != source.ring() {
            return Err(RingError::MixedRings);
        }
        let carried = matrix.mul(source.presentation());
        if solve_matrix(target.presentation(), &carried).is_none() {
            return Err(RingError::InvalidMap(
                "matrix does not carry source relations into target relations".into(),
            ));
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn identity(m: &FpModule) -> ModuleMap {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.ring(), m.gens()),
        }
    }

    pub fn zero_map(source: FpModule, target: FpModule) -> ModuleMap {
        let matrix = Matrix::zero(source.ring(), target.gens(), source.gens());
        ModuleMap { source, target, matrix }
    }

    /// Multiplication by a ring element as an endomorphism.
    pub fn scalar(m: &FpModule, c: &RingElement) -> ModuleMap {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.ring(), m.gens()).scale(c),
        }
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }

    pub fn target(&self) -> &FpModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// self o other (other first).
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        assert!(other.target == self.source, "composition mismatch");
        ModuleMap {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        assert!(self.source == other.source && self.target == other.target);
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.neg(),
        }
    }

    /// Equal as maps: the difference sends every generator into relations.
    pub fn equal(&self, other: &ModuleMap) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let diff = self.matrix.sub(&other.matrix);
        solve_matrix(self.target.presentation(), &diff).is_some()
    }

    pub fn is_zero_map(&self) -> bool {
        solve_matrix(self.target.presentation(), &self.matrix).is_some()
    }

    /// Kernel as a submodule of the source: generators are the first-block
    /// syzygies of [matrix | target relations]; relations are the
    /// first-block syzygies of [reps | source relations].
    pub fn kernel(&self) -> Submodule {
        let combined = self.matrix.hstack(self.target.presentation());
        let syz = kernel(&combined);
        let reps = syz.take_rows(0, self.source.gens());
        subquotient(&self.source, reps)
    }

    /// Cokernel: target generators with the image columns adjoined.
    pub fn cokernel(&self) -> FpModule {
        FpModule::new(self.target.presentation().hstack(&self.matrix))
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_zero()
    }

    pub fn is_injective(&self) -> bool {
        // every kernel generator is already a source relation
        let k = self.kernel();
        if k.module.gens() == 0 {
            return true;
        }
        solve_matrix(self.source.presentation(), &k.reps).is_some()
    }

    pub fn is_iso(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }

    /// Inverse of an isomorphism: solve for preimages of the target
    /// generators through [matrix | target relations].
    pub fn inverse(&self) -> Option<ModuleMap> {
        let combined = self.matrix.hstack(self.target.presentation());
        let id = Matrix::identity(self.ring(), self.target.gens());
        let sol = solve_matrix(&combined, &id)?;
        let inv = sol.take_rows(0, self.source.gens());
        ModuleMap::new(self.target.clone(), self.source.clone(), inv).ok()
    }

    pub fn ring(&self) -> &Ring {
        self.source.ring()
    }

    /// Kronecker product of maps on the tensor modules.
    pub fn tensor(&self, other: &ModuleMap) -> ModuleMap {
        let source = self.source.tensor(&other.source);
        let target = self.target.tensor(&other.target);
        ModuleMap {
            source,
            target,
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    pub fn direct_sum(parts: &[&ModuleMap]) -> ModuleMap {
        let sources: Vec<&FpModule> = parts.iter().map(|p| &p.source).collect();
        let targets: Vec<&FpModule> = parts.iter().map(|p| &p.target).collect();
        let mats: Vec<&Matrix> = parts.iter().map(|p| &p.matrix).collect();
        let ring = parts[0].ring().clone();
        ModuleMap {
            source: FpModule::direct_sum(&sources),
            target: FpModule::direct_sum(&targets),
            matrix: Matrix::block_diag(&ring, &mats),
        }
    }
}

/// Eliminate generators with a unit pivot in some relation: repeatedly clear
/// the pivot row by column operations and delete the (generator, relation)
/// pair. The cokernel is unchanged and the surviving generators keep their
/// classes. Returns the pruned presentation and the kept generator indices.
pub fn prune_presentation(p: &Matrix) -> (Matrix, Vec<usize>) {
    let ring = p.ring().clone();
    let (rows, cols) = (p.rows(), p.cols());
    let mut grid: Vec<Vec<RingElement>> = (0..rows)
        .map(|i| (0..cols).map(|j| p.at(i, j).clone()).collect())
        .collect();
    let mut row_alive = vec![true; rows];
    let mut col_alive = vec![true; cols];
    loop {
        // pick the invertible pivot with the least expected fill-in
        let mut best: Option<(usize, usize, RingElement, usize)> = None;
        for i in 0..rows {
            if !row_alive[i] {
                continue;
            }
            let row_nnz = (0..cols)
                .filter(|&j| col_alive[j] && !grid[i][j].is_zero())
                .count();
            for j in 0..cols {
                if !col_alive[j] || grid[i][j].is_zero() {
                    continue;
                }
                if let Some(inv) = grid[i][j].inverse() {
                    let col_nnz = (0..rows)
                        .filter(|&r| row_alive[r] && !grid[r][j].is_zero())
                        .count();
                    let score = (row_nnz - 1) * (col_nnz - 1);
                    if best.as_ref().map_or(true, |b| score < b.3) {
                        best = Some((i, j, inv, score));
                        if score == 0 {
                            break;
                        }
                    }
                }
            }
            if best.as_ref().map_or(false, |b| b.3 == 0) {
                break;
            }
        }
        let (pi, pj, u_inv, _) = match best {
            None => break,
            Some(b) => b,
        };
        let touched_cols: Vec<usize> = (0..cols)
            .filter(|&c| col_alive[c] && c != pj && !grid[pi][c].is_zero())
            .collect();
        let touched_rows: Vec<usize> = (0..rows)
            .filter(|&r| row_alive[r] && r != pi && !grid[r][pj].is_zero())
            .collect();
        for &c in &touched_cols {
            let factor = grid[pi][c].mul(&u_inv);
            for &r in &touched_rows {
                let adj = factor.mul(&grid[r][pj]);
                grid[r][c] = grid[r][c].sub(&adj);
            }
        }
        row_alive[pi] = false;
        col_alive[pj] = false;
    }
    let kept: Vec<usize> = (0..rows).filter(|&i| row_alive[i]).collect();
    let live_cols: Vec<usize> = (0..cols).filter(|&j| col_alive[j]).collect();
    let m = Matrix::from_fn(&ring, kept.len(), live_cols.len(), |i, j| {
        grid[kept[i]][live_cols[j]].clone()
    });
    (m.drop_zero_columns(), kept)
}

fn pruned_submodule(ambient: &FpModule, reps: Matrix, rels: Matrix) -> Submodule {
    let (pruned, kept) = prune_presentation(&rels);
    let reps = reps.submatrix_cols(&kept);
    Submodule {
        ambient: ambient.clone(),
        module: FpModule::new(pruned),
        reps,
    }
}

/// The subquotient of `ambient` generated by the columns of `reps`, as a
/// module on those columns: relations are combinations falling into the
/// ambient relations.
pub fn subquotient(ambient: &FpModule, reps: Matrix) -> Submodule {
    let combined = reps.hstack(ambient.presentation());
    let syz = kernel(&combined);
    let rels = syz.take_rows(0, reps.cols());
    pruned_submodule(ambient, reps, rels)
}

/// The subquotient (span of `gens_reps` + relations) / (span of `denom_reps`
/// + relations), presented on the columns of `gens_reps`. The denominator
/// columns must lie in the numerator span for the result to be meaningful.
pub fn subquotient_mod(ambient: &FpModule, gens_reps: Matrix, denom_reps: &Matrix) -> Submodule {
    let combined = gens_reps
        .hstack(denom_reps)
        .hstack(ambient.presentation());
    let syz = kernel(&combined);
    let rels = syz.take_rows(0, gens_reps.cols());
    pruned_submodule(ambient, gens_reps, rels)
}

/// Canonical invariants for isomorphism checks where they are complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleInvariants {
    /// free rank + nontrivial invariant factors (1s dropped) over Z
    IntegerFactors { rank: usize, factors: Vec<num_bigint::BigInt> },
    /// dimension over a field
    Dimension(usize),
    /// coefficient-field dimension for finite length polynomial modules
    FiniteDimension(u64),
    /// no complete canonical form
    Opaque,
}

pub fn invariants(m: &FpModule) -> ModuleInvariants {
    use crate::rings::RingKind;
    use num_traits::{One, Zero};
    match m.ring().kind() {
        RingKind::Integers => {
            let snf = crate::rings::smith_normal_form(m.presentation()).unwrap();
            let mut factors: Vec<num_bigint::BigInt> = snf
                .diag
                .iter()
                .filter(|d| !d.is_zero() && !d.is_one())
                .cloned()
                .collect();
            factors.sort();
            let nonzero = snf.diag.iter().filter(|d| !d.is_zero()).count();
            ModuleInvariants::IntegerFactors { rank: m.gens() - nonzero, factors }
        }
        RingKind::Rationals | RingKind::PrimeField(_) => {
            ModuleInvariants::Dimension(m.gens() - crate::rings::rank(m.presentation()))
        }
        RingKind::Poly(_) | RingKind::Quotient(_) => match finite_length(m) {
            Ok(Length::Finite(n)) => ModuleInvariants::FiniteDimension(n),
            _ => ModuleInvariants::Opaque,
        },
        _ => ModuleInvariants::Opaque,
    }
}
