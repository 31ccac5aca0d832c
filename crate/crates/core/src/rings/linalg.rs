//! Kernels, solving, and rank over every supported ring kind. Fields use
//! Gaussian elimination, the integers use the Smith decomposition, Z/m and
//! quotient rings lift to Z resp. the polynomial ring with the defining
//! relations adjoined as extra columns.

use super::groebner::{GraphSolver, VecPoly};
use super::poly::MultiPoly;
use super::snf::{kernel_integers, solve_integers};
use super::{Matrix, Ring, RingElement, RingKind};
use num_bigint::BigInt;

/// Columns of the returned matrix generate `{x : m x = 0}`.
pub fn kernel(m: &Matrix) -> Matrix {
    match m.ring().kind() {
        RingKind::Integers => kernel_integers(m),
        RingKind::Rationals | RingKind::PrimeField(_) => kernel_field(m),
        RingKind::IntegersMod(modulus) => kernel_zmod(m, modulus),
        RingKind::Poly(_) => {
            let pr = m.ring().poly_ring().unwrap();
            let solver = GraphSolver::new(pr, m.rows(), matrix_columns_vp(m));
            let ker = solver.kernel();
            polys_to_matrix(m.ring(), m.cols(), ker)
        }
        RingKind::Quotient(q) => {
            let pr = q.base.poly_ring().unwrap();
            let (cols, extra) = quotient_augmented_columns(m, &q.basis);
            let solver = GraphSolver::new(pr, m.rows(), cols);
            let ker = solver.kernel();
            let trimmed: Vec<Vec<MultiPoly>> = ker
                .into_iter()
                .map(|v| v.into_iter().take(m.cols()).collect())
                .collect();
            let _ = extra;
            let full = polys_to_matrix_quotient(m.ring(), m.cols(), trimmed);
            full.drop_zero_columns()
        }
    }
}

/// Solve m x = v; `None` when v is not in the column span.
pub fn solve_vector(m: &Matrix, v: &[RingElement]) -> Option<Vec<RingElement>> {
    assert_eq!(v.len(), m.rows());
    match m.ring().kind() {
        RingKind::Integers => solve_integers(m, v),
        RingKind::Rationals | RingKind::PrimeField(_) => solve_field(m, v),
        RingKind::IntegersMod(modulus) => solve_zmod(m, v, modulus),
        RingKind::Poly(_) => {
            let pr = m.ring().poly_ring().unwrap();
            let solver = GraphSolver::new(pr, m.rows(), matrix_columns_vp(m));
            let sol = solver.solve(&vector_vp(v))?;
            Some(sol.into_iter().map(|p| m.ring().make_poly(p)).collect())
        }
        RingKind::Quotient(q) => {
            let pr = q.base.poly_ring().unwrap();
            let (cols, _extra) = quotient_augmented_columns(m, &q.basis);
            let solver = GraphSolver::new(pr, m.rows(), cols);
            let sol = solver.solve(&vector_vp(v))?;
            Some(
                sol.into_iter()
                    .take(m.cols())
                    .map(|p| m.ring().make_poly(p))
                    .collect(),
            )
        }
    }
}

/// Solve m X = b column by column, sharing the solver.
pub fn solve_matrix(m: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(m.rows(), b.rows());
    match m.ring().kind() {
        RingKind::Poly(_) => {
            let pr = m.ring().poly_ring().unwrap();
            let solver = GraphSolver::new(pr, m.rows(), matrix_columns_vp(m));
            let mut cols = Vec::with_capacity(b.cols());
            for j in 0..b.cols() {
                let sol = solver.solve(&vector_vp(&b.column(j)))?;
                cols.push(sol.into_iter().map(|p| m.ring().make_poly(p)).collect());
            }
            Some(Matrix::from_columns(m.ring(), m.cols(), cols))
        }
        RingKind::Quotient(q) => {
            let pr = q.base.poly_ring().unwrap();
            let (acols, _extra) = quotient_augmented_columns(m, &q.basis);
            let solver = GraphSolver::new(pr, m.rows(), acols);
            let mut cols = Vec::with_capacity(b.cols());
            for j in 0..b.cols() {
                let sol = solver.solve(&vector_vp(&b.column(j)))?;
                cols.push(
                    sol.into_iter()
                        .take(m.cols())
                        .map(|p| m.ring().make_poly(p))
                        .collect(),
                );
            }
            Some(Matrix::from_columns(m.ring(), m.cols(), cols))
        }
        _ => {
            let mut cols = Vec::with_capacity(b.cols());
            for j in 0..b.cols() {
                cols.push(solve_vector(m, &b.column(j))?);
            }
            Some(Matrix::from_columns(m.ring(), m.cols(), cols))
        }
    }
}

/// Rank over a field.
pub fn rank(m: &Matrix) -> usize {
    assert!(m.ring().is_field(), "rank requires a field");
    let (rr, _) = row_reduce(m, None);
    rr
}

fn matrix_columns_vp(m: &Matrix) -> Vec<VecPoly> {
    (0..m.cols()).map(|j| vector_vp(&m.column(j))).collect()
}

fn vector_vp(v: &[RingElement]) -> VecPoly {
    let mut comps = Vec::new();
    for (i, e) in v.iter().enumerate() {
        if let Some(p) = e.as_poly() {
            if !p.is_zero() {
                comps.push((i, p.clone()));
            }
        }
    }
    VecPoly(comps)
}

fn polys_to_matrix(ring: &Ring, rows: usize, cols: Vec<Vec<MultiPoly>>) -> Matrix {
    let cols: Vec<Vec<RingElement>> = cols
        .into_iter()
        .map(|c| c.into_iter().map(|p| ring.make_poly(p)).collect())
        .collect();
    Matrix::from_columns(ring, rows, cols)
}

fn polys_to_matrix_quotient(ring: &Ring, rows: usize, cols: Vec<Vec<MultiPoly>>) -> Matrix {
    polys_to_matrix(ring, rows, cols)
}

/// Augment the lifted columns with basis-multiples of each ambient unit
/// vector, so kernels over the quotient are first blocks of kernels upstairs.
fn quotient_augmented_columns(m: &Matrix, basis: &[MultiPoly]) -> (Vec<VecPoly>, usize) {
    let mut cols: Vec<VecPoly> = (0..m.cols())
        .map(|j| {
            let mut comps = Vec::new();
            for i in 0..m.rows() {
                if let Some(p) = m.at(i, j).as_poly() {
                    if !p.is_zero() {
                        comps.push((i, p.clone()));
                    }
                }
            }
            VecPoly(comps)
        })
        .collect();
    let mut extra = 0usize;
    for g in basis {
        for i in 0..m.rows() {
            cols.push(VecPoly::single(i, g.clone()));
            extra += 1;
        }
    }
    (cols, extra)
}

// ---- field linear algebra ----

/// Row-reduce (Gauss-Jordan); returns (rank, pivot column indices). When
/// `aug` is given the same row operations are applied to it.
fn row_reduce_in_place(a: &mut Matrix, mut aug: Option<&mut Matrix>) -> (usize, Vec<usize>) {
    let ring = a.ring().clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let pivot_row = (r..rows).find(|&i| !a.at(i, c).is_zero());
        let pr = match pivot_row {
            None => continue,
            Some(p) => p,
        };
        if pr != r {
            for j in 0..cols {
                let tmp = a.at(pr, j).clone();
                *a.at_mut(pr, j) = a.at(r, j).clone();
                *a.at_mut(r, j) = tmp;
            }
            if let Some(b) = aug.as_deref_mut() {
                for j in 0..b.cols() {
                    let tmp = b.at(pr, j).clone();
                    *b.at_mut(pr, j) = b.at(r, j).clone();
                    *b.at_mut(r, j) = tmp;
                }
            }
        }
        let inv = a.at(r, c).inverse().expect("field pivot");
        for j in 0..cols {
            *a.at_mut(r, j) = a.at(r, j).mul(&inv);
        }
        if let Some(b) = aug.as_deref_mut() {
            for j in 0..b.cols() {
                *b.at_mut(r, j) = b.at(r, j).mul(&inv);
            }
        }
        for i in 0..rows {
            if i == r || a.at(i, c).is_zero() {
                continue;
            }
            let f = a.at(i, c).clone();
            for j in 0..cols {
                let v = a.at(r, j).mul(&f);
                *a.at_mut(i, j) = a.at(i, j).sub(&v);
            }
            if let Some(b) = aug.as_deref_mut() {
                for j in 0..b.cols() {
                    let v = b.at(r, j).mul(&f);
                    *b.at_mut(i, j) = b.at(i, j).sub(&v);
                }
            }
        }
        pivots.push(c);
        r += 1;
        let _ = ring;
    }
    (r, pivots)
}

fn row_reduce(m: &Matrix, aug: Option<&Matrix>) -> (usize, Vec<usize>) {
    let mut a = m.clone();
    let mut b = aug.cloned();
    row_reduce_in_place(&mut a, b.as_mut())
}

fn kernel_field(m: &Matrix) -> Matrix {
    let ring = m.ring().clone();
    let mut a = m.clone();
    let (_, pivots) = row_reduce_in_place(&mut a, None);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut cols = Vec::new();
    for &f in &free {
        let mut v = vec![ring.zero(); m.cols()];
        v[f] = ring.one();
        for (ridx, &p) in pivots.iter().enumerate() {
            v[p] = a.at(ridx, f).neg();
        }
        cols.push(v);
    }
    Matrix::from_columns(&ring, m.cols(), cols)
}

fn solve_field(m: &Matrix, v: &[RingElement]) -> Option<Vec<RingElement>> {
    let ring = m.ring().clone();
    let mut a = m.clone();
    let mut b = Matrix::from_columns(&ring, m.rows(), vec![v.to_vec()]);
    let (_, pivots) = row_reduce_in_place(&mut a, Some(&mut b));
    let mut x = vec![ring.zero(); m.cols()];
    for (ridx, &p) in pivots.iter().enumerate() {
        x[p] = b.at(ridx, 0).clone();
    }
    // consistency: rows beyond the rank must have zero rhs
    for i in pivots.len()..m.rows() {
        if !b.at(i, 0).is_zero() {
            return None;
        }
    }
    Some(x)
}

// ---- Z/m via lifting to Z ----

fn lift_to_integers(m: &Matrix) -> Matrix {
    let z = Ring::integers();
    Matrix::from_fn(&z, m.rows(), m.cols(), |i, j| {
        z.from_bigint(m.at(i, j).as_bigint().expect("modular entry"))
    })
}

fn zmod_augmented(m: &Matrix, modulus: &BigInt) -> Matrix {
    let z = Ring::integers();
    let lifted = lift_to_integers(m);
    let scaled = Matrix::identity(&z, m.rows()).scale(&z.from_bigint(modulus));
    lifted.hstack(&scaled)
}

fn kernel_zmod(m: &Matrix, modulus: &BigInt) -> Matrix {
    let aug = zmod_augmented(m, modulus);
    let k = kernel_integers(&aug);
    let ring = m.ring().clone();
    let reduced = Matrix::from_fn(&ring, m.cols(), k.cols(), |i, j| {
        ring.from_bigint(k.at(i, j).as_bigint().unwrap())
    });
    reduced.drop_zero_columns()
}

fn solve_zmod(m: &Matrix, v: &[RingElement], modulus: &BigInt) -> Option<Vec<RingElement>> {
    let z = Ring::integers();
    let aug = zmod_augmented(m, modulus);
    let vz: Vec<RingElement> = v
        .iter()
        .map(|e| z.from_bigint(e.as_bigint().unwrap()))
        .collect();
    let sol = solve_integers(&aug, &vz)?;
    let ring = m.ring().clone();
    Some(
        sol.into_iter()
            .take(m.cols())
            .map(|e| ring.from_bigint(e.as_bigint().unwrap()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::MonomialOrder;

    #[test]
    fn field_kernel_and_solve() {
        let q = Ring::rationals();
        let m = Matrix::new(
            q.clone(),
            2,
            3,
            vec![
                q.from_int(1),
                q.from_int(2),
                q.from_int(3),
                q.from_int(2),
                q.from_int(4),
                q.from_int(6),
            ],
        )
        .unwrap();
        let k = kernel(&m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
        assert_eq!(rank(&m), 1);
        let sol = solve_vector(&m, &[q.from_int(3), q.from_int(6)]).unwrap();
        assert_eq!(m.apply(&sol), vec![q.from_int(3), q.from_int(6)]);
        assert!(solve_vector(&m, &[q.from_int(1), q.from_int(0)]).is_none());
    }

    #[test]
    fn zmod_kernel() {
        use num_bigint::BigInt;
        let z4 = Ring::integers_mod(&BigInt::from(4)).unwrap();
        // multiplication by 2 on Z/4 has kernel (2)
        let m = Matrix::new(z4.clone(), 1, 1, vec![z4.from_int(2)]).unwrap();
        let k = kernel(&m);
        assert!(m.mul(&k).is_zero());
        assert!(!k.is_zero());
        let sol = solve_vector(&m, &[z4.from_int(2)]).unwrap();
        assert_eq!(m.apply(&sol), vec![z4.from_int(2)]);
        assert!(solve_vector(&m, &[z4.from_int(1)]).is_none());
    }

    #[test]
    fn quotient_ring_kernel() {
        // over R = QQ[x]/(x^2), the kernel of multiplication by x is (x)
        let q = Ring::rationals();
        let p = Ring::poly(&q, &["x"], MonomialOrder::GrevLex).unwrap();
        let x = p.var(0).unwrap();
        let r = Ring::quotient(&p, &[x.mul(&x)]).unwrap();
        let xb = r.var(0).unwrap();
        let m = Matrix::new(r.clone(), 1, 1, vec![xb.clone()]).unwrap();
        let k = kernel(&m);
        assert!(m.mul(&k).is_zero());
        assert_eq!(k.cols(), 1);
        assert_eq!(k.at(0, 0), &xb);
    }

    #[test]
    fn poly_solve_matrix() {
        let q = Ring::rationals();
        let p = Ring::poly(&q, &["x", "y"], MonomialOrder::GrevLex).unwrap();
        let x = p.var(0).unwrap();
        let y = p.var(1).unwrap();
        let m = Matrix::new(p.clone(), 1, 2, vec![x.clone(), y.clone()]).unwrap();
        let b = Matrix::new(p.clone(), 1, 1, vec![x.mul(&y)]).unwrap();
        let sol = solve_matrix(&m, &b).unwrap();
        assert_eq!(m.mul(&sol), b);
    }
}
