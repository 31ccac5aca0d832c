//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Run with `cargo test --test acceptance -- --nocapture` to see them.

use adic_core::adic::{completion_tower, derived_completion, derived_torsion, AdicContext, DiagonalContext};
use adic_core::modcplx::{Complex, FpModule, ModuleMap};
use adic_core::rings::{kernel, solve_vector, Matrix, MonomialOrder, Ring};
use adic_core::theorems::{
    check_completion_of_torsion, check_mgm_complete_side, check_mgm_torsion_side,
    check_telescope_koszul, check_torsion_completion_invariance, check_torsion_of_completion,
    check_cofiniteness, prufer_system, rationals_system, repeated_sum_system, serre_chi,
    CofinitenessInput,
};
use adic_core::towers::{ind_iso_check, ind_zero_check, pro_iso_check, pro_zero_check, IndMap, IndModule, ProMap};
use adic_core::{tensor_complexes, Submodule};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const BOUND: u32 = 8;

fn zz() -> Ring {
    Ring::integers()
}

fn zmod(n: i64) -> FpModule {
    let z = zz();
    FpModule::cyclic(&z, &[z.from_int(n)])
}

fn qq_poly(vars: &[&str]) -> Ring {
    Ring::poly(&Ring::rationals(), vars, MonomialOrder::GrevLex).unwrap()
}

fn nilpotent_line() -> Ring {
    let p = qq_poly(&["x"]);
    let x = p.var(0).unwrap();
    Ring::quotient(&p, &[x.mul(&x)]).unwrap()
}

fn pass(criterion: u32, elapsed: std::time::Duration, detail: &str) {
    println!(
        "ACCEPTANCE {}: PASS ({:.2?}) {}",
        criterion, elapsed, detail
    );
}

/// Map a cyclic module onto the class of an ambient generator vector inside
/// a cohomology presentation.
fn cyclic_into_cohomology(
    source: &FpModule,
    sub: &Submodule,
    complex: &Complex,
    degree: i64,
    ambient_index: usize,
) -> ModuleMap {
    let ring = source.ring().clone();
    let term = complex.term(degree);
    let mut vec = Matrix::zero(&ring, term.gens(), 1);
    *vec.at_mut(ambient_index, 0) = ring.one();
    let prev = complex.diff(degree - 1);
    let combined = sub
        .reps
        .hstack(prev.matrix())
        .hstack(term.presentation());
    let sol = adic_core::solve_matrix(&combined, &vec).expect("generator is a cocycle");
    let mat = sol.take_rows(0, sub.module.gens());
    ModuleMap::new(source.clone(), sub.module.clone(), mat).expect("cyclic comparison map")
}

#[test]
fn criterion_1_telescope_koszul_stage_equivalence() {
    let start = Instant::now();
    let z = zz();
    let mut cells: Vec<(String, AdicContext, Vec<FpModule>)> = Vec::new();

    let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
    cells.push((
        "integers at (2)".into(),
        ctx,
        vec![
            FpModule::free(&z, 1),
            FpModule::free(&z, 2),
            zmod(4),
            zmod(3),
            FpModule::direct_sum(&[&FpModule::free(&z, 1), &zmod(8)]),
        ],
    ));
    let ctx = AdicContext::new(&z, vec![z.from_int(6)]).unwrap();
    cells.push((
        "integers at (6)".into(),
        ctx,
        vec![
            FpModule::free(&z, 1),
            zmod(4),
            zmod(9),
            zmod(5),
            FpModule::free(&z, 2),
        ],
    ));
    let p1 = qq_poly(&["x"]);
    let x = p1.var(0).unwrap();
    let ctx = AdicContext::new(&p1, vec![x.clone()]).unwrap();
    cells.push((
        "line at (x)".into(),
        ctx,
        vec![
            FpModule::free(&p1, 1),
            FpModule::free(&p1, 2),
            FpModule::cyclic(&p1, &[x.clone()]),
            FpModule::cyclic(&p1, &[x.pow(3)]),
            FpModule::cyclic(&p1, &[x.sub(&p1.one())]),
        ],
    ));
    let p2 = qq_poly(&["x", "y"]);
    let (x, y) = (p2.var(0).unwrap(), p2.var(1).unwrap());
    let ctx = AdicContext::new(&p2, vec![x.clone(), y.clone()]).unwrap();
    cells.push((
        "plane at (x, y)".into(),
        ctx,
        vec![
            FpModule::free(&p2, 1),
            FpModule::cyclic(&p2, &[x.clone(), y.clone()]),
            FpModule::cyclic(&p2, &[x.pow(2), x.mul(&y), y.pow(2)]),
            FpModule::cyclic(&p2, &[y.sub(&x.pow(2)), y.clone()]),
            FpModule::free(&p2, 2),
        ],
    ));
    let r = nilpotent_line();
    let xb = r.var(0).unwrap();
    let ctx = AdicContext::new(&r, vec![xb.clone()]).unwrap();
    cells.push((
        "nilpotent line at (x)".into(),
        ctx,
        vec![
            FpModule::free(&r, 1),
            FpModule::free(&r, 2),
            FpModule::cyclic(&r, &[xb.clone()]),
            FpModule::direct_sum(&[&FpModule::free(&r, 1), &FpModule::cyclic(&r, &[xb.clone()])]),
            FpModule::cyclic(&r, &[xb.clone()]),
        ],
    ));

    for (name, ctx, modules) in &cells {
        assert_eq!(modules.len(), 5, "{} ships five modules", name);
        for (k, m) in modules.iter().enumerate() {
            let inst = check_telescope_koszul(ctx, m, BOUND).unwrap();
            assert!(
                inst.ok(),
                "criterion 1 fails at {} module #{}: {:?}",
                name,
                k,
                inst.verdict
            );
        }
    }
    pass(1, start.elapsed(), "telescope vs Koszul stages on 5 contexts x 5 modules, stages <= 8");
}

#[test]
fn criterion_2_derived_functors_of_the_integers() {
    let start = Instant::now();
    let z = zz();
    for p in [2i64, 3, 5] {
        let ctx = AdicContext::new(&z, vec![z.from_int(p)]).unwrap();
        let a = Complex::single(FpModule::free(&z, 1), 0);

        // completion: H^0 tower pro-isomorphic to the completion tower
        let dc = derived_completion(&a, &ctx);
        let h0 = dc.levelwise_cohomology(0);
        let comp = completion_tower(&FpModule::free(&z, 1), &ctx);
        let dc2 = dc.clone();
        let comp2 = comp.clone();
        let f = ProMap::new(comp, h0, move |j| {
            let sub = dc2.level(j).cohomology(0);
            cyclic_into_cohomology(&comp2.level(j), &sub, &dc2.level(j), 0, 0)
        });
        let rep = pro_iso_check(&f, BOUND).unwrap();
        assert!(rep.ok(), "completion H^0 tower at p={}: {:?}", p, rep.status);
        // all other degrees pro-zero
        let hm1 = dc.levelwise_cohomology(-1);
        let rep = pro_zero_check(&hm1, BOUND);
        assert!(rep.ok(), "completion H^-1 tower at p={}: {:?}", p, rep.status);

        // torsion: H^1 interleaves with the standard divisible system, H^0
        // ind-zero
        let dt = derived_torsion(&a, &ctx);
        let h1 = dt.levelwise_cohomology(1);
        let standard = {
            let z2 = z.clone();
            let zt = z.clone();
            IndModule::from_fns(
                move |t| FpModule::cyclic(&z2, &[z2.from_bigint(&BigInt::from(p).pow(t))]),
                move |t| {
                    let src = FpModule::cyclic(&zt, &[zt.from_bigint(&BigInt::from(p).pow(t))]);
                    let tgt =
                        FpModule::cyclic(&zt, &[zt.from_bigint(&BigInt::from(p).pow(t + 1))]);
                    ModuleMap::new(src, tgt, Matrix::from_fn(&zt, 1, 1, |_, _| zt.from_int(p)))
                        .unwrap()
                },
            )
        };
        let dt2 = dt.clone();
        let std2 = standard.clone();
        let g = IndMap::new(standard, h1, move |t| {
            let sub = dt2.level(t).cohomology(1);
            // the degree-1 ambient generator represents the class
            cyclic_into_cohomology(&std2.level(t), &sub, &dt2.level(t), 1, 0)
        });
        let rep = ind_iso_check(&g, BOUND).unwrap();
        assert!(rep.ok(), "torsion H^1 system at p={}: {:?}", p, rep.status);
        let h0 = dt.levelwise_cohomology(0);
        let rep = ind_zero_check(&h0, BOUND);
        assert!(rep.ok(), "torsion H^0 system at p={}: {:?}", p, rep.status);
    }
    pass(2, start.elapsed(), "derived completion/torsion of the integers at p = 2, 3, 5");
}

#[test]
fn criterion_3_comparison_suite_on_the_instance_matrix() {
    let start = Instant::now();
    let mut contexts: Vec<(String, AdicContext)> = Vec::new();
    let z = zz();
    contexts.push(("integers at (2)".into(), AdicContext::new(&z, vec![z.from_int(2)]).unwrap()));
    let p1 = qq_poly(&["x"]);
    contexts.push((
        "line at (x)".into(),
        AdicContext::new(&p1, vec![p1.var(0).unwrap()]).unwrap(),
    ));
    let p2 = qq_poly(&["x", "y"]);
    contexts.push((
        "plane at (x, y)".into(),
        AdicContext::new(&p2, vec![p2.var(0).unwrap(), p2.var(1).unwrap()]).unwrap(),
    ));

    for (name, ctx) in &contexts {
        let ring = ctx.ring().clone();
        let free = Complex::single(FpModule::free(&ring, 1), 0);
        let quotient = Complex::single(FpModule::cyclic(&ring, &ctx.power(2)), 0);
        let torsion_built = tensor_complexes(&ctx.dual_stage(2), &free);
        let completion_built = tensor_complexes(&ctx.koszul_stage(2), &free);
        let instances = vec![
            ("ring", free.clone()),
            ("ring mod square", quotient),
            ("torsion stage", torsion_built.clone()),
            ("completion stage", completion_built.clone()),
        ];
        for bound in [4u32, BOUND] {
            for (label, x) in &instances {
                let inst = check_torsion_of_completion(ctx, x, bound).unwrap();
                assert!(
                    inst.ok(),
                    "torsion-of-completion {} / {} bound {}: {:?}",
                    name,
                    label,
                    bound,
                    inst.verdict
                );
                let inst = check_completion_of_torsion(ctx, x, bound).unwrap();
                assert!(
                    inst.ok(),
                    "completion-of-torsion {} / {} bound {}: {:?}",
                    name,
                    label,
                    bound,
                    inst.verdict
                );
            }
            // the flat invariance check on the free instances
            for (label, x) in [("ring", &free), ("torsion stage", &torsion_built), ("completion stage", &completion_built)] {
                let inst = check_torsion_completion_invariance(ctx, x, bound).unwrap();
                assert!(
                    inst.ok(),
                    "invariance {} / {} bound {}: {:?}",
                    name,
                    label,
                    bound,
                    inst.verdict
                );
            }
            // round trips on certified inputs
            for (label, x) in &instances[1..2] {
                for side in ["tor", "com"] {
                    let inst = if side == "tor" {
                        check_mgm_torsion_side(ctx, x, bound).unwrap()
                    } else {
                        check_mgm_complete_side(ctx, x, bound).unwrap()
                    };
                    assert!(
                        inst.ok(),
                        "mgm-{} {} / {} bound {}: {:?}",
                        side,
                        name,
                        label,
                        bound,
                        inst.verdict
                    );
                }
            }
            let inst = check_mgm_torsion_side(ctx, &torsion_built, bound).unwrap();
            assert!(inst.ok(), "mgm-tor {} / torsion stage bound {}: {:?}", name, bound, inst.verdict);
            let inst = check_mgm_complete_side(ctx, &completion_built, bound).unwrap();
            assert!(inst.ok(), "mgm-com {} / completion stage bound {}: {:?}", name, bound, inst.verdict);
        }
    }
    pass(3, start.elapsed(), "comparison and round-trip suite on 3 contexts x 4 instances, bounds 4 and 8");
}

#[test]
fn criterion_4_intersection_multiplicities_by_both_routes() {
    let start = Instant::now();
    let q = Ring::rationals();
    let d = DiagonalContext::new(&q, &["x", "y"], MonomialOrder::GrevLex).unwrap();
    let x = d.a_gens[0].clone();
    let y = d.a_gens[1].clone();
    let parabola = FpModule::cyclic(&d.a_ring, &[y.sub(&x.pow(2))]);
    let line = FpModule::cyclic(&d.a_ring, &[y.clone()]);
    let xaxis = FpModule::cyclic(&d.a_ring, &[x.clone()]);
    let antidiag = FpModule::cyclic(&d.a_ring, &[x.add(&y)]);

    let chi = serre_chi(&d, &parabola, &line).unwrap();
    assert_eq!(chi.value, 2, "parabola against line");
    let chi = serre_chi(&d, &xaxis, &line).unwrap();
    assert_eq!(chi.value, 1, "transverse axes");
    let chi = serre_chi(&d, &xaxis, &antidiag).unwrap();
    assert_eq!(chi.value, 1, "transverse lines");

    // Koszul self-intersection: Tor dimension vector of (K, K) over
    // K[x_1..x_n] equals the binomial coefficients, by both routes
    for n in 1usize..=3 {
        let vars: Vec<String> = (0..n).map(|i| format!("x{}", i)).collect();
        let vrefs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let dn = DiagonalContext::new(&q, &vrefs, MonomialOrder::GrevLex).unwrap();
        let point = FpModule::cyclic(&dn.a_ring, &dn.a_gens);
        let chi = serre_chi(&dn, &point, &point).unwrap();
        let binomials: Vec<u64> = (0..=n as u64).map(|k| binomial(n as u64, k)).collect();
        assert_eq!(chi.direct, binomials, "direct route, n = {}", n);
        assert_eq!(chi.diagonal, binomials, "diagonal route, n = {}", n);
    }
    pass(4, start.elapsed(), "multiplicities and self-intersection dimension vectors by both routes");
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[test]
fn criterion_5_cofiniteness_equivalence() {
    let start = Instant::now();
    let z = zz();
    let ctx = AdicContext::new(&z, vec![z.from_int(2)]).unwrap();
    let instances = vec![
        ("all denominators", CofinitenessInput::Ind(rationals_system(&z), "all denominators".into()), true),
        ("divisible system", CofinitenessInput::Ind(prufer_system(&z, 2), "divisible".into()), true),
        ("growing sum", CofinitenessInput::Ind(repeated_sum_system(&z, 2), "growing sum".into()), false),
    ];
    for (name, input, expect_fg) in instances {
        let inst = check_cofiniteness(&ctx, &input, BOUND).unwrap();
        assert!(inst.ok(), "cofiniteness on {}: {:?}", name, inst.verdict);
        let flags_line = inst
            .trace
            .iter()
            .find(|l| l.starts_with("ext flags"))
            .expect("trace records flags");
        if expect_fg {
            assert!(!flags_line.contains("NotFg"), "{}: {}", name, flags_line);
        } else {
            assert!(flags_line.contains("NotFg"), "{}: {}", name, flags_line);
        }
    }
    pass(5, start.elapsed(), "ext-side and completion-side finiteness flags agree on all three systems");
}

#[test]
fn criterion_6_weak_proregularity_suite() {
    let start = Instant::now();
    let z = zz();
    let p1 = qq_poly(&["x"]);
    let p2 = qq_poly(&["x", "y"]);
    let r = nilpotent_line();
    let x1 = p1.var(0).unwrap();
    let (x2, y2) = (p2.var(0).unwrap(), p2.var(1).unwrap());
    let xb = r.var(0).unwrap();

    // pairs of generating sequences of the same ideal
    let suites: Vec<(String, Vec<Vec<adic_core::RingElement>>)> = vec![
        ("(2) in the integers".into(), vec![vec![z.from_int(2)], vec![z.from_int(2), z.from_int(6)]]),
        ("(x) in the line".into(), vec![vec![x1.clone()], vec![x1.clone(), x1.pow(2)]]),
        (
            "(x, y) in the plane".into(),
            vec![
                vec![x2.clone(), y2.clone()],
                vec![x2.clone(), y2.clone(), x2.add(&y2)],
            ],
        ),
        ("(x) in the nilpotent line".into(), vec![vec![xb.clone()], vec![xb.clone(), xb.clone()]]),
    ];
    for (name, sequences) in suites {
        let mut verdicts = Vec::new();
        for gens in sequences {
            let ring = gens[0].ring().clone();
            let ctx = AdicContext::new(&ring, gens).unwrap();
            let rep = adic_core::adic::wpr_check(&ctx, BOUND);
            assert!(rep.verified, "{}: {:?}", name, rep.per_degree);
            verdicts.push(rep.verified);
        }
        assert!(verdicts.windows(2).all(|w| w[0] == w[1]), "{}: sequence verdicts differ", name);
    }
    pass(6, start.elapsed(), "weak proregularity verified across the suite, stable across generating sequences");
}

#[test]
fn criterion_7_randomized_kernel_correctness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let z = zz();

    // 200 random integer matrices up to 6x6 with entries in [-20, 20]
    for trial in 0..200 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let entries: Vec<adic_core::RingElement> = (0..rows * cols)
            .map(|_| z.from_int(rng.gen_range(-20..=20)))
            .collect();
        let m = Matrix::new(z.clone(), rows, cols, entries).unwrap();
        let snf = adic_core::smith_normal_form(&m).unwrap();
        let d = snf.left.mul(&m).mul(&snf.right);
        for i in 0..rows {
            for j in 0..cols {
                let expect = if i == j && i < snf.diag.len() {
                    snf.diag[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(
                    d.at(i, j).integer_value().unwrap().abs(),
                    expect.abs(),
                    "trial {} entry ({}, {})",
                    trial,
                    i,
                    j
                );
            }
        }
        for w in snf.diag.windows(2) {
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "trial {} divisibility", trial);
            } else {
                assert!(w[1].is_zero(), "trial {} zero tail", trial);
            }
        }
        assert!(adic_core::rings::det_bigint(&snf.left).unwrap().abs().is_one());
        assert!(adic_core::rings::det_bigint(&snf.right).unwrap().abs().is_one());
    }

    // 50 random syzygy instances over the plane: exact annihilation plus
    // kernel membership of brute-force witnesses found by degree-bounded
    // linear algebra over the rationals
    let p2 = qq_poly(&["x", "y"]);
    let mut checked_membership = 0usize;
    for trial in 0..50 {
        let k = rng.gen_range(2..=3);
        let gens: Vec<adic_core::RingElement> = (0..k)
            .map(|_| random_poly(&p2, &mut rng, 3))
            .collect();
        let m = Matrix::from_fn(&p2, 1, k, |_, j| gens[j].clone());
        let syz = kernel(&m);
        let prod = m.mul(&syz);
        assert!(prod.is_zero(), "trial {}: matrix times syzygy not zero", trial);
        // brute-force kernel vectors of degree <= 4 via linear algebra on
        // coefficients
        let witnesses = brute_force_kernel(&p2, &gens, 4);
        for w in witnesses.into_iter().take(3) {
            // membership: w must be a combination of the syzygy columns
            assert!(
                solve_vector(&syz, &w).is_some(),
                "trial {}: brute-force kernel vector not in the syzygy span",
                trial
            );
            checked_membership += 1;
        }
    }
    assert!(checked_membership > 0, "spot checks actually ran");
    pass(
        7,
        start.elapsed(),
        "200 randomized Smith decompositions and 50 randomized syzygy instances verified",
    );
}

fn random_poly(ring: &Ring, rng: &mut ChaCha8Rng, max_deg: u32) -> adic_core::RingElement {
    let x = ring.var(0).unwrap();
    let y = ring.var(1).unwrap();
    let mut acc = ring.zero();
    for _ in 0..rng.gen_range(1..=3) {
        let dx = rng.gen_range(0..=max_deg);
        let dy = rng.gen_range(0..=max_deg.saturating_sub(dx));
        let c = rng.gen_range(-4i64..=4);
        if c == 0 {
            continue;
        }
        let term = ring.from_int(c).mul(&x.pow(dx)).mul(&y.pow(dy));
        acc = acc.add(&term);
    }
    if acc.is_zero() {
        x
    } else {
        acc
    }
}

/// All kernel vectors of (g_1..g_k) with polynomial entries of degree at
/// most `deg`, found by exact linear algebra over the coefficient field:
/// an oracle fully independent of the Groebner machinery.
fn brute_force_kernel(
    ring: &Ring,
    gens: &[adic_core::RingElement],
    deg: u32,
) -> Vec<Vec<adic_core::RingElement>> {
    let q = Ring::rationals();
    let x = ring.var(0).unwrap();
    let y = ring.var(1).unwrap();
    // monomial basis of degree <= deg
    let mut basis = Vec::new();
    for dx in 0..=deg {
        for dy in 0..=(deg - dx) {
            basis.push(x.pow(dx).mul(&y.pow(dy)));
        }
    }
    let unknowns = basis.len() * gens.len();
    // constraint monomials go up to deg + max generator degree
    let max_deg = deg + 6;
    let mut cons_index = std::collections::BTreeMap::new();
    for dx in 0..=max_deg {
        for dy in 0..=(max_deg - dx) {
            let idx = cons_index.len();
            cons_index.insert((dx, dy), idx);
        }
    }
    let mut rows = vec![vec![q.zero(); unknowns]; cons_index.len()];
    for (gi, g) in gens.iter().enumerate() {
        for (bi, b) in basis.iter().enumerate() {
            let prod = g.mul(b);
            // read off the coefficients of the product
            for (mono, coef) in poly_terms(&prod) {
                let row = cons_index[&mono];
                rows[row][gi * basis.len() + bi] = q.from_rational(&coef).unwrap();
            }
        }
    }
    let flat: Vec<adic_core::RingElement> = rows.into_iter().flatten().collect();
    let big = Matrix::new(q.clone(), cons_index.len(), unknowns, flat).unwrap();
    let ker = kernel(&big);
    let mut out = Vec::new();
    for c in 0..ker.cols() {
        let mut vec_out = vec![ring.zero(); gens.len()];
        for gi in 0..gens.len() {
            let mut poly = ring.zero();
            for (bi, b) in basis.iter().enumerate() {
                let coef = ker.at(gi * basis.len() + bi, c);
                if !coef.is_zero() {
                    let rat = coef
                        .rational_terms()
                        .and_then(|t| t.into_iter().next())
                        .map(|(_, r)| r)
                        .unwrap();
                    poly = poly.add(&b.mul(&ring.from_rational(&rat).unwrap()));
                }
            }
            vec_out[gi] = poly;
        }
        if vec_out.iter().any(|e| !e.is_zero()) {
            out.push(vec_out);
        }
    }
    out
}

fn poly_terms(e: &adic_core::RingElement) -> Vec<((u32, u32), num_rational::BigRational)> {
    e.rational_terms()
        .unwrap_or_default()
        .into_iter()
        .map(|(exps, r)| ((exps[0], exps[1]), r))
        .collect()
}
