//! Exact computational homological algebra for adic completion and torsion:
//! concrete rings with Smith normal form and Groebner kernels, finitely
//! presented modules and bounded complexes, pro/ind towers of modules, the
//! adic functor toolbox (Koszul, dual Koszul, telescope, completion,
//! torsion), and instance-level verification pipelines for the structural
//! isomorphisms relating them.

pub mod adic;
pub mod modcplx;
pub mod rings;
pub mod theorems;
pub mod towers;

pub use modcplx::{
    ext, ext_auto, finite_length, free_resolution, invariants, quasi_iso_check, subquotient,
    subquotient_mod, tensor_complexes, tor, tor_auto, Complex, ComplexMap, FpModule,
    FreeResolution, Length, ModuleInvariants, ModuleMap, QuasiIsoReport, Submodule,
};
pub use rings::{
    ideal_power, kernel, smith_normal_form, solve_matrix, solve_vector, Coef, CoeffField, Matrix,
    MonomialOrder, Monomial, MultiPoly, Result, Ring, RingElement, RingError, RingKind, Snf,
};
