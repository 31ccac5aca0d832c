//! Manual scale probe for the polynomial syzygy engine on telescope-sized
//! complexes. Run with `cargo test --test perf_probe -- --ignored --nocapture`.

use adic_core::rings::{Matrix, MonomialOrder, Ring};
use adic_core::{tensor_complexes, Complex, FpModule, ModuleMap};
use std::time::Instant;

/// Truncated telescope differential on generators delta_0..delta_j:
/// d(delta_0) = delta_0, d(delta_i) = delta_{i-1} - a delta_i.
fn telescope_stage(ring: &Ring, a: &adic_core::RingElement, j: usize) -> Complex {
    let n = j + 1;
    let free = FpModule::free(ring, n);
    let mut mat = Matrix::zero(ring, n, n);
    *mat.at_mut(0, 0) = ring.one();
    for i in 1..n {
        *mat.at_mut(i - 1, i) = ring.one();
        *mat.at_mut(i, i) = a.neg();
    }
    let d = ModuleMap::new(free.clone(), free.clone(), mat).unwrap();
    Complex::two_term(d, 0)
}

#[test]
#[ignore]
fn telescope_tensor_cohomology_scale() {
    let q = Ring::rationals();
    let p = Ring::poly(&q, &["x", "y"], MonomialOrder::GrevLex).unwrap();
    let x = p.var(0).unwrap();
    let y = p.var(1).unwrap();

    for j in [4usize, 8] {
        let t0 = Instant::now();
        let tx = telescope_stage(&p, &x, j);
        let ty = telescope_stage(&p, &y, j);
        let tt = tensor_complexes(&tx, &ty);
        let built = t0.elapsed();
        let t1 = Instant::now();
        let mut dims = Vec::new();
        for i in 0..=2 {
            let h = tt.cohomology(i);
            dims.push((i, h.module.gens()));
        }
        println!(
            "stage {}: ranks {:?} build {:?} cohomology {:?} dims {:?}",
            j,
            tt.profile(),
            built,
            t1.elapsed(),
            dims
        );
    }
}

#[test]
#[ignore]
fn telescope_tensor_with_cyclic_module() {
    let q = Ring::rationals();
    let p = Ring::poly(&q, &["x", "y"], MonomialOrder::GrevLex).unwrap();
    let x = p.var(0).unwrap();
    let y = p.var(1).unwrap();
    let m = FpModule::cyclic(&p, &[x.mul(&x), x.mul(&y)]);

    let j = 8;
    let tx = telescope_stage(&p, &x, j);
    let ty = telescope_stage(&p, &y, j);
    let tt = tensor_complexes(&tx, &ty);
    let tm = tensor_complexes(&tt, &Complex::single(m, 0));
    let t1 = Instant::now();
    for i in 0..=2 {
        let h = tt.cohomology(i);
        let _ = h;
    }
    println!("with module: cohomology of tensor {:?}", t1.elapsed());
    let t2 = Instant::now();
    let h1 = tm.cohomology(1);
    println!("H^1 with module gens={} in {:?}", h1.module.gens(), t2.elapsed());
}
