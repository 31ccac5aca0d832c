//! Buchberger's algorithm for submodules of free modules over a polynomial
//! ring, and the graph-module solver built on it: kernels (syzygies),
//! membership, normal forms, and lifts all come from one Groebner basis of
//! the graph `{(column_i, e_i)}` under a position-over-term order in which
//! the ambient block dominates the coefficient block.

use super::monomial::Monomial;
use super::poly::{Coef, MultiPoly};
use super::PolyRing;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Sparse vector of polynomials: components sorted by position, no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VecPoly(pub Vec<(usize, MultiPoly)>);

impl VecPoly {
    pub fn zero() -> Self {
        VecPoly(Vec::new())
    }

    pub fn single(pos: usize, p: MultiPoly) -> Self {
        if p.is_zero() {
            VecPoly::zero()
        } else {
            VecPoly(vec![(pos, p)])
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn component(&self, pos: usize) -> Option<&MultiPoly> {
        self.0
            .binary_search_by_key(&pos, |(p, _)| *p)
            .ok()
            .map(|i| &self.0[i].1)
    }

    /// Leading term under position-over-term: the smallest position wins,
    /// then the polynomial's own leading monomial.
    pub fn lead(&self) -> Option<(usize, &Monomial, &Coef)> {
        self.0.first().map(|(pos, p)| {
            let (m, c) = p.leading().expect("nonzero component");
            (*pos, m, c)
        })
    }

    pub fn add(pr: &PolyRing, a: &VecPoly, b: &VecPoly) -> VecPoly {
        let mut out = Vec::with_capacity(a.0.len() + b.0.len());
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.0.len() || j < b.0.len() {
            if i < a.0.len() && (j >= b.0.len() || a.0[i].0 < b.0[j].0) {
                out.push(a.0[i].clone());
                i += 1;
            } else if j < b.0.len() && (i >= a.0.len() || b.0[j].0 < a.0[i].0) {
                out.push(b.0[j].clone());
                j += 1;
            } else {
                let sum = MultiPoly::add(pr.order, &pr.coeff, &a.0[i].1, &b.0[j].1);
                if !sum.is_zero() {
                    out.push((a.0[i].0, sum));
                }
                i += 1;
                j += 1;
            }
        }
        VecPoly(out)
    }

    pub fn sub(pr: &PolyRing, a: &VecPoly, b: &VecPoly) -> VecPoly {
        Self::add(pr, a, &b.neg(pr))
    }

    pub fn neg(&self, pr: &PolyRing) -> VecPoly {
        VecPoly(self.0.iter().map(|(p, q)| (*p, q.neg(&pr.coeff))).collect())
    }

    pub fn mul_term(&self, pr: &PolyRing, m: &Monomial, c: &Coef) -> VecPoly {
        if c.is_zero() {
            return VecPoly::zero();
        }
        VecPoly(
            self.0
                .iter()
                .map(|(p, q)| (*p, q.mul_term(&pr.coeff, m, c)))
                .collect(),
        )
    }

    pub fn monic(&self, pr: &PolyRing) -> VecPoly {
        match self.lead() {
            None => VecPoly::zero(),
            Some((_, _, c)) => {
                let inv = pr.coeff.inv(c);
                VecPoly(
                    self.0
                        .iter()
                        .map(|(p, q)| (*p, q.scale(&pr.coeff, &inv)))
                        .collect(),
                )
            }
        }
    }

    /// Remove the current leading term (the first term of the first
    /// component).
    fn pop_lead(&mut self) -> (usize, Monomial, Coef) {
        let pos = self.0[0].0;
        let (m, c) = self.0[0].1.terms.remove(0);
        if self.0[0].1.is_zero() {
            self.0.remove(0);
        }
        (pos, m, c)
    }

    pub fn nvars(&self) -> Option<usize> {
        self.0
            .first()
            .and_then(|(_, p)| p.terms.first())
            .map(|(m, _)| m.nvars())
    }
}

fn cmp_term(pr: &PolyRing, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
    // smaller position = larger term
    match a.0.cmp(&b.0) {
        Ordering::Less => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
        Ordering::Equal => pr.order.cmp(a.1, b.1),
    }
}

/// Buckets of basis indices by leading position, for fast reducer lookup.
#[derive(Default)]
struct LeadIndex {
    by_pos: std::collections::HashMap<usize, Vec<usize>>,
}

impl LeadIndex {
    fn build(basis: &[VecPoly]) -> Self {
        let mut idx = LeadIndex::default();
        for (i, b) in basis.iter().enumerate() {
            idx.insert(i, b);
        }
        idx
    }

    fn insert(&mut self, i: usize, b: &VecPoly) {
        if let Some((pos, _, _)) = b.lead() {
            self.by_pos.entry(pos).or_default().push(i);
        }
    }

    fn candidates(&self, pos: usize) -> &[usize] {
        self.by_pos.get(&pos).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// Full normal form of `v` against `basis` (each element nonzero).
pub fn vec_normal_form(pr: &PolyRing, v: &VecPoly, basis: &[VecPoly]) -> VecPoly {
    let idx = LeadIndex::build(basis);
    vec_normal_form_indexed(pr, v, basis, &idx, usize::MAX)
}

fn vec_normal_form_indexed(
    pr: &PolyRing,
    v: &VecPoly,
    basis: &[VecPoly],
    idx: &LeadIndex,
    skip: usize,
) -> VecPoly {
    let mut work = v.clone();
    let mut rem: Vec<(usize, MultiPoly)> = Vec::new();
    'outer: while let Some((pos, lm, lc)) = work.lead().map(|(p, m, c)| (p, m.clone(), c.clone())) {
        for &bi in idx.candidates(pos) {
            if bi == skip {
                continue;
            }
            let b = &basis[bi];
            let (_, bm, bc) = b.lead().expect("basis elements nonzero");
            if bm.divides(&lm) {
                let factor_m = bm.quotient_into(&lm);
                let factor_c = pr.coeff.div(&lc, bc);
                let sub = b.mul_term(pr, &factor_m, &factor_c);
                work = VecPoly::sub(pr, &work, &sub);
                continue 'outer;
            }
        }
        // irreducible leading term: move to remainder
        let (pos, m, c) = work.pop_lead();
        match rem.iter_mut().find(|(p, _)| *p == pos) {
            Some((_, poly)) => poly.terms.push((m, c)),
            None => rem.push((pos, MultiPoly { terms: vec![(m, c)] })),
        }
    }
    rem.sort_by_key(|(p, _)| *p);
    VecPoly(rem)
}

struct Pair {
    deg: u64,
    lcm: Monomial,
    i: usize,
    j: usize,
}

impl PartialEq for Pair {
    fn eq(&self, other: &Self) -> bool {
        self.deg == other.deg && self.lcm == other.lcm && self.i == other.i && self.j == other.j
    }
}
impl Eq for Pair {}
impl Ord for Pair {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap: invert so the lowest degree pops first
        other
            .deg
            .cmp(&self.deg)
            .then_with(|| other.lcm.0.cmp(&self.lcm.0))
            .then_with(|| other.i.cmp(&self.i))
            .then_with(|| other.j.cmp(&self.j))
    }
}
impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Buchberger with the chain criterion (and the coprimality criterion in the
/// rank-one case, where it is valid). With `inter_reduce` the result is the
/// reduced Groebner basis; otherwise only lead-minimal, which suffices for
/// kernels, membership, and lifts.
fn buchberger(pr: &PolyRing, gens: Vec<VecPoly>, rank: usize, inter_reduce: bool) -> Vec<VecPoly> {
    let mut basis: Vec<VecPoly> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(g.monic(pr));
        }
    }
    let mut idx = LeadIndex::build(&basis);
    let mut queue: BinaryHeap<Pair> = BinaryHeap::new();
    let mut pending: std::collections::HashSet<(usize, usize)> = Default::default();
    let push_pair = |queue: &mut BinaryHeap<Pair>,
                     pending: &mut std::collections::HashSet<(usize, usize)>,
                     basis: &[VecPoly],
                     i: usize,
                     j: usize| {
        let (pi, mi, _) = basis[i].lead().unwrap();
        let (pj, mj, _) = basis[j].lead().unwrap();
        if pi != pj {
            return;
        }
        if rank == 1 && mi.coprime(mj) {
            return; // product criterion (ideal case only)
        }
        let lcm = mi.lcm(mj);
        pending.insert((i, j));
        queue.push(Pair { deg: lcm.degree(), lcm, i, j });
    };
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            push_pair(&mut queue, &mut pending, &basis, i, j);
        }
    }
    while let Some(Pair { lcm, i, j, .. }) = queue.pop() {
        if !pending.remove(&(i, j)) {
            continue;
        }
        // chain criterion: some k with lead dividing the lcm and both pairs
        // already handled
        let (pi, mi, _) = basis[i].lead().unwrap();
        let (_, mj, _) = basis[j].lead().unwrap();
        let mut skip = false;
        for &k in idx.candidates(pi) {
            if k == i || k == j {
                continue;
            }
            let (_, mk, _) = basis[k].lead().unwrap();
            if !mk.divides(&lcm) {
                continue;
            }
            let p1 = (i.min(k), i.max(k));
            let p2 = (j.min(k), j.max(k));
            if !pending.contains(&p1) && !pending.contains(&p2) {
                skip = true;
                break;
            }
        }
        if skip {
            continue;
        }
        let fi = basis[i].mul_term(pr, &mi.quotient_into(&lcm), &pr.coeff.one());
        let fj = basis[j].mul_term(pr, &mj.quotient_into(&lcm), &pr.coeff.one());
        let s = VecPoly::sub(pr, &fi, &fj);
        let r = vec_normal_form_indexed(pr, &s, &basis, &idx, usize::MAX);
        if !r.is_zero() {
            let r = r.monic(pr);
            basis.push(r);
            let new = basis.len() - 1;
            idx.insert(new, &basis[new]);
            for k in 0..new {
                push_pair(&mut queue, &mut pending, &basis, k, new);
            }
        }
    }
    reduce_basis(pr, basis, inter_reduce)
}

/// Reduced Groebner basis of a submodule of P^rank.
pub fn module_groebner(pr: &PolyRing, gens: Vec<VecPoly>, rank: usize) -> Vec<VecPoly> {
    buchberger(pr, gens, rank, true)
}

fn reduce_basis(pr: &PolyRing, mut basis: Vec<VecPoly>, inter_reduce: bool) -> Vec<VecPoly> {
    // minimize: drop elements whose lead is divisible by another lead
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (pi, mi, _) = basis[i].lead().unwrap();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (pj, mj, _) = basis[j].lead().unwrap();
            if pi == pj && mj.divides(mi) && !(mi == mj && j > i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<VecPoly> = basis
        .drain(..)
        .zip(keep)
        .filter_map(|(b, k)| if k { Some(b) } else { None })
        .collect();
    if inter_reduce {
        // leads are already pairwise irreducible, so the index stays valid
        // while tails shrink
        let idx = LeadIndex::build(&minimal);
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..minimal.len() {
                let r = vec_normal_form_indexed(pr, &minimal[i], &minimal, &idx, i).monic(pr);
                if r != minimal[i] {
                    minimal[i] = r;
                    changed = true;
                }
            }
        }
    }
    minimal.sort_by(|a, b| {
        let la = a.lead().unwrap();
        let lb = b.lead().unwrap();
        cmp_term(pr, (la.0, la.1), (lb.0, lb.1))
    });
    minimal
}

/// Reduced Groebner basis of an ideal.
pub fn ideal_groebner(pr: &PolyRing, gens: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let vgens = gens.into_iter().map(|p| VecPoly::single(0, p)).collect();
    buchberger(pr, vgens, 1, true)
        .into_iter()
        .map(|v| v.0.into_iter().next().map(|(_, p)| p).unwrap_or_else(MultiPoly::zero))
        .collect()
}

/// Groebner basis of the graph module `{(col_i, e_{r+i})}` in P^r (+) P^s.
/// Kernels, membership tests, normal forms, and lifts for the column module
/// all read off from it.
pub struct GraphSolver<'a> {
    pr: &'a PolyRing,
    r: usize,
    s: usize,
    gb: Vec<VecPoly>,
    idx: LeadIndex,
}

impl<'a> GraphSolver<'a> {
    pub fn new(pr: &'a PolyRing, r: usize, columns: Vec<VecPoly>) -> Self {
        let s = columns.len();
        let nv = pr.vars.len();
        let mut gens = Vec::with_capacity(s);
        for (i, col) in columns.into_iter().enumerate() {
            debug_assert!(col.0.iter().all(|(p, _)| *p < r));
            let unit = VecPoly::single(
                r + i,
                MultiPoly::constant(&pr.coeff, pr.coeff.one(), nv),
            );
            gens.push(VecPoly::add(pr, &col, &unit));
        }
        let gb = buchberger(pr, gens, r + s, false);
        let idx = LeadIndex::build(&gb);
        GraphSolver { pr, r, s, gb, idx }
    }

    /// Generators of the kernel of the column map P^s -> P^r.
    pub fn kernel(&self) -> Vec<Vec<MultiPoly>> {
        let mut out = Vec::new();
        for g in &self.gb {
            if g.0.iter().all(|(p, _)| *p >= self.r) {
                let mut vec = vec![MultiPoly::zero(); self.s];
                for (p, q) in &g.0 {
                    vec[*p - self.r] = q.clone();
                }
                out.push(vec);
            }
        }
        out
    }

    /// Normal form of an ambient vector against the column module; zero iff
    /// the vector is a combination of the columns.
    pub fn reduce(&self, v: &VecPoly) -> VecPoly {
        debug_assert!(v.0.iter().all(|(p, _)| *p < self.r));
        let nf = vec_normal_form_indexed(self.pr, v, &self.gb, &self.idx, usize::MAX);
        VecPoly(nf.0.into_iter().filter(|(p, _)| *p < self.r).collect())
    }

    /// Coefficients x with (columns) * x = v, if v lies in the column module.
    pub fn solve(&self, v: &VecPoly) -> Option<Vec<MultiPoly>> {
        debug_assert!(v.0.iter().all(|(p, _)| *p < self.r));
        let nf = vec_normal_form_indexed(self.pr, v, &self.gb, &self.idx, usize::MAX);
        if nf.0.iter().any(|(p, _)| *p < self.r) {
            return None;
        }
        let mut x = vec![MultiPoly::zero(); self.s];
        for (p, q) in &nf.0 {
            x[*p - self.r] = q.neg(&self.pr.coeff);
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::monomial::MonomialOrder;
    use crate::rings::poly::CoeffField;
    use num_bigint::BigInt;

    fn pring(order: MonomialOrder) -> PolyRing {
        PolyRing {
            coeff: CoeffField::Rationals,
            vars: vec!["x".into(), "y".into()],
            order,
        }
    }

    fn var(i: usize) -> MultiPoly {
        MultiPoly::var(&CoeffField::Rationals, 2, i)
    }

    fn intp(n: i64) -> Coef {
        CoeffField::Rationals.from_int(&BigInt::from(n))
    }

    #[test]
    fn groebner_examples() {
        let pr = pring(MonomialOrder::Lex);
        let x = var(0);
        let y = var(1);
        // {x} -> {x}
        let gb = ideal_groebner(&pr, vec![x.clone()]);
        assert_eq!(gb, vec![x.clone()]);
        // {x^2, xy} -> {x^2, xy} under lex x>y
        let x2 = MultiPoly::mul(pr.order, &pr.coeff, &x, &x);
        let xy = MultiPoly::mul(pr.order, &pr.coeff, &x, &y);
        let gb = ideal_groebner(&pr, vec![x2.clone(), xy.clone()]);
        assert_eq!(gb.len(), 2);
        assert!(gb.contains(&x2));
        assert!(gb.contains(&xy));
        // {x - y, y} -> {x, y}
        let f = MultiPoly::sub(pr.order, &pr.coeff, &x, &y);
        let gb = ideal_groebner(&pr, vec![f, y.clone()]);
        assert_eq!(gb.len(), 2);
        assert!(gb.contains(&x));
        assert!(gb.contains(&y));
    }

    #[test]
    fn groebner_is_input_order_invariant() {
        let pr = pring(MonomialOrder::GrevLex);
        let x = var(0);
        let y = var(1);
        let f = MultiPoly::sub(
            pr.order,
            &pr.coeff,
            &MultiPoly::mul(pr.order, &pr.coeff, &x, &x),
            &y,
        );
        let g = MultiPoly::sub(
            pr.order,
            &pr.coeff,
            &MultiPoly::mul(pr.order, &pr.coeff, &x, &y),
            &x,
        );
        let gb1 = ideal_groebner(&pr, vec![f.clone(), g.clone()]);
        let gb2 = ideal_groebner(&pr, vec![g, f]);
        assert_eq!(gb1, gb2);
        // every input generator reduces to zero against the basis
        let basis: Vec<VecPoly> = gb1.iter().map(|p| VecPoly::single(0, p.clone())).collect();
        for p in &gb1 {
            let v = VecPoly::single(0, p.clone());
            // reduce against the others only; full NF against all is zero
            let nf = vec_normal_form(&pr, &v, &basis);
            assert!(nf.is_zero());
        }
    }

    #[test]
    fn syzygy_of_koszul_pair() {
        // syz([x, y]) over QQ[x,y] is generated by (y, -x)
        let pr = pring(MonomialOrder::GrevLex);
        let x = var(0);
        let y = var(1);
        let solver = GraphSolver::new(
            &pr,
            1,
            vec![VecPoly::single(0, x.clone()), VecPoly::single(0, y.clone())],
        );
        let ker = solver.kernel();
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        // x*k0 + y*k1 = 0
        let t = MultiPoly::add(
            pr.order,
            &pr.coeff,
            &MultiPoly::mul(pr.order, &pr.coeff, &x, &k[0]),
            &MultiPoly::mul(pr.order, &pr.coeff, &y, &k[1]),
        );
        assert!(t.is_zero());
        // and (y, -x) is in the span
        let deg1: Vec<(usize, &MultiPoly)> = vec![(0, &y), (1, &x)];
        let _ = deg1;
        assert_eq!(k[0].terms.len(), 1);
        assert_eq!(k[1].terms.len(), 1);
    }

    #[test]
    fn solve_and_membership() {
        let pr = pring(MonomialOrder::GrevLex);
        let x = var(0);
        let y = var(1);
        // columns x, y of P^1; x^2 + xy is in the ideal, 1 is not
        let solver = GraphSolver::new(
            &pr,
            1,
            vec![VecPoly::single(0, x.clone()), VecPoly::single(0, y.clone())],
        );
        let x2 = MultiPoly::mul(pr.order, &pr.coeff, &x, &x);
        let xy = MultiPoly::mul(pr.order, &pr.coeff, &x, &y);
        let target = MultiPoly::add(pr.order, &pr.coeff, &x2, &xy);
        let sol = solver.solve(&VecPoly::single(0, target.clone())).unwrap();
        // check x*sol0 + y*sol1 = target
        let got = MultiPoly::add(
            pr.order,
            &pr.coeff,
            &MultiPoly::mul(pr.order, &pr.coeff, &x, &sol[0]),
            &MultiPoly::mul(pr.order, &pr.coeff, &y, &sol[1]),
        );
        assert_eq!(got, target);
        let one = MultiPoly::constant(&pr.coeff, intp(1), 2);
        assert!(solver.solve(&VecPoly::single(0, one)).is_none());
    }

    #[test]
    fn syzygies_of_equal_columns() {
        // syz([x, x]) generated by (1, -1)
        let pr = pring(MonomialOrder::GrevLex);
        let x = var(0);
        let solver = GraphSolver::new(
            &pr,
            1,
            vec![VecPoly::single(0, x.clone()), VecPoly::single(0, x.clone())],
        );
        let ker = solver.kernel();
        assert_eq!(ker.len(), 1);
        assert!(ker[0][0].is_constant());
        // injective single column: no syzygies
        let solver = GraphSolver::new(&pr, 1, vec![VecPoly::single(0, x)]);
        assert!(solver.kernel().is_empty());
    }
}
