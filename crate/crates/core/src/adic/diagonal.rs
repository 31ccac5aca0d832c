//! The polynomial diagonal model: A = K[x_1..x_n], the enveloping ring
//! B = K[x_1..x_n, y_1..y_n], the diagonal sequence x_i - y_i (a regular
//! sequence resolving A over B), the doubled augmentation ideal, and the
//! external tensor of A-modules as a B-module.

use super::maps::RingMap;
use crate::modcplx::{tensor_complexes, Complex, FpModule};
use crate::rings::{MonomialOrder, Result, Ring, RingElement, RingError};

pub struct DiagonalContext {
    pub base: Ring,
    pub n: usize,
    /// A = K[x_1..x_n]
    pub a_ring: Ring,
    /// B = K[x.., y..]
    pub b_ring: Ring,
    /// A -> B on the x variables
    pub x_embed: RingMap,
    /// A -> B on the y variables
    pub y_embed: RingMap,
    /// B -> A collapsing y_i to x_i
    pub mult: RingMap,
    /// x_i - y_i in B
    pub diag: Vec<RingElement>,
    /// x_1..x_n, y_1..y_n in B (the doubled augmentation sequence)
    pub envelope_gens: Vec<RingElement>,
    /// x_1..x_n in A
    pub a_gens: Vec<RingElement>,
}

impl DiagonalContext {
    pub fn new(base: &Ring, vars: &[&str], order: MonomialOrder) -> Result<DiagonalContext> {
        if !base.is_field() {
            return Err(RingError::WrongRingKind {
                expected: "field base",
                found: format!("{:?}", base.kind()),
            });
        }
        let n = vars.len();
        let a_ring = Ring::poly(base, vars, order)?;
        let mut all: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        for v in vars {
            all.push(format!("{}_r", v));
        }
        let all_refs: Vec<&str> = all.iter().map(|s| s.as_str()).collect();
        let b_ring = Ring::poly(base, &all_refs, order)?;
        let x_images: Result<Vec<RingElement>> = (0..n).map(|i| b_ring.var(i)).collect();
        let y_images: Result<Vec<RingElement>> = (0..n).map(|i| b_ring.var(n + i)).collect();
        let x_images = x_images?;
        let y_images = y_images?;
        let x_embed = RingMap::substitution(&a_ring, &b_ring, x_images.clone())?;
        let y_embed = RingMap::substitution(&a_ring, &b_ring, y_images.clone())?;
        let mut mult_images: Vec<RingElement> = Vec::new();
        for i in 0..n {
            mult_images.push(a_ring.var(i)?);
        }
        for i in 0..n {
            mult_images.push(a_ring.var(i)?);
        }
        let mult = RingMap::substitution(&b_ring, &a_ring, mult_images)?;
        let diag: Vec<RingElement> = (0..n)
            .map(|i| x_images[i].sub(&y_images[i]))
            .collect();
        let mut envelope_gens = x_images;
        envelope_gens.extend(y_images);
        let a_gens: Result<Vec<RingElement>> = (0..n).map(|i| a_ring.var(i)).collect();
        Ok(DiagonalContext {
            base: base.clone(),
            n,
            a_ring,
            b_ring,
            x_embed,
            y_embed,
            mult,
            diag,
            envelope_gens,
            a_gens: a_gens?,
        })
    }

    /// M boxtimes N as a B-module: (M (x)_A B_x) (x)_B (B_y (x)_A N).
    pub fn external_tensor(&self, m: &FpModule, n: &FpModule) -> FpModule {
        let mb = self.x_embed.apply_module(m);
        let nb = self.y_embed.apply_module(n);
        mb.tensor(&nb)
    }

    /// External tensor of complexes over A, as a complex over B.
    pub fn external_tensor_complexes(&self, p: &Complex, q: &Complex) -> Complex {
        let pb = self.x_embed.apply_complex(p);
        let qb = self.y_embed.apply_complex(q);
        tensor_complexes(&pb, &qb)
    }

    /// Koszul complex of the diagonal sequence: the free B-resolution of A
    /// (the sequence is regular), in degrees [-n, 0].
    pub fn diagonal_koszul(&self) -> Complex {
        let ctx = super::AdicContext::new(&self.b_ring, self.diag.clone())
            .expect("diagonal context");
        ctx.koszul_stage(1)
    }

    /// A as a cyclic B-module B/(diag).
    pub fn a_as_b_module(&self) -> FpModule {
        FpModule::cyclic(&self.b_ring, &self.diag)
    }

    /// Restriction of scalars along mult: an A-module as a B-module, with
    /// the diagonal relations adjoined.
    pub fn restrict_module(&self, m: &FpModule) -> FpModule {
        let lifted = self.x_embed.apply_module(m);
        lifted.quotient_by_ideal(&self.diag)
    }

    /// Restriction of scalars of a complex over A.
    pub fn restrict_complex(&self, c: &Complex) -> Complex {
        self.x_embed.apply_complex(c).quotient_by_ideal(&self.diag)
    }
}
