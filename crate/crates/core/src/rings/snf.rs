//! Smith normal form over the integers with unimodular transforms.

use super::{Matrix, Result, Ring, RingElement, RingError, RingKind};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Result of a Smith decomposition: `left * m * right = diag(diag)`, with
/// `left` and `right` unimodular and `diag` a nonnegative divisibility chain.
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub left: Matrix,
    pub right: Matrix,
}

type Grid = Vec<Vec<BigInt>>;

fn to_grid(m: &Matrix) -> Grid {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m.at(i, j).as_bigint().expect("integer matrix").clone())
                .collect()
        })
        .collect()
}

fn from_grid(ring: &Ring, g: &Grid, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(ring, rows, cols, |i, j| ring.from_bigint(&g[i][j]))
}

fn swap_rows(g: &mut Grid, a: usize, b: usize) {
    g.swap(a, b);
}

fn swap_cols(g: &mut Grid, a: usize, b: usize) {
    for row in g.iter_mut() {
        row.swap(a, b);
    }
}

/// row[a] += c * row[b]
fn add_row(g: &mut Grid, a: usize, b: usize, c: &BigInt) {
    let src: Vec<BigInt> = g[b].clone();
    for (x, s) in g[a].iter_mut().zip(src.iter()) {
        *x += c * s;
    }
}

/// col[a] += c * col[b]
fn add_col(g: &mut Grid, a: usize, b: usize, c: &BigInt) {
    for row in g.iter_mut() {
        let v = &row[b] * c;
        row[a] += v;
    }
}

fn negate_row(g: &mut Grid, a: usize) {
    for x in g[a].iter_mut() {
        *x = -x.clone();
    }
}

/// Smith normal form of an integer matrix. `left` and `right` start as
/// identities and receive every elementary operation, so the decomposition
/// identity holds exactly.
pub fn smith_normal_form(m: &Matrix) -> Result<Snf> {
    match m.ring().kind() {
        RingKind::Integers => {}
        other => {
            return Err(RingError::WrongRingKind {
                expected: "integers",
                found: format!("{:?}", other),
            })
        }
    }
    let ring = m.ring().clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = to_grid(m);
    let mut l: Grid = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut r: Grid = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let n = rows.min(cols);
    for k in 0..n {
        loop {
            // find the entry of least nonzero absolute value in the submatrix
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    match &best {
                        None => best = Some((i, j)),
                        Some((bi, bj)) => {
                            if a[i][j].abs() < a[*bi][*bj].abs() {
                                best = Some((i, j));
                            }
                        }
                    }
                }
            }
            let (pi, pj) = match best {
                None => break, // submatrix is zero
                Some(p) => p,
            };
            if pi != k {
                swap_rows(&mut a, k, pi);
                swap_rows(&mut l, k, pi);
            }
            if pj != k {
                swap_cols(&mut a, k, pj);
                swap_cols(&mut r, k, pj);
            }
            if a[k][k].is_negative() {
                negate_row(&mut a, k);
                negate_row(&mut l, k);
            }
            // clear column k below the pivot
            let mut dirty = false;
            for i in k + 1..rows {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = a[i][k].div_floor(&a[k][k]);
                if !q.is_zero() {
                    let c = -q;
                    add_row(&mut a, i, k, &c);
                    add_row(&mut l, i, k, &c);
                }
                if !a[i][k].is_zero() {
                    dirty = true;
                }
            }
            // clear row k to the right of the pivot
            for j in k + 1..cols {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = a[k][j].div_floor(&a[k][k]);
                if !q.is_zero() {
                    let c = -q;
                    add_col(&mut a, j, k, &c);
                    add_col(&mut r, j, k, &c);
                }
                if !a[k][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot divides everything below-right? if not, fold the bad row in
            let mut fixed = true;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(&a[i][j] % &a[k][k]).is_zero() {
                        add_row(&mut a, k, i, &BigInt::one());
                        add_row(&mut l, k, i, &BigInt::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }

    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        diag.push(a[k][k].abs());
    }
    Ok(Snf {
        diag,
        left: from_grid(&ring, &l, rows, rows),
        right: from_grid(&ring, &r, cols, cols),
    })
}

/// Determinant by fraction-free Gaussian elimination (Bareiss).
pub fn det_bigint(m: &Matrix) -> Result<BigInt> {
    if m.rows() != m.cols() {
        return Err(RingError::DimensionMismatch("determinant of non-square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = to_grid(m);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
            match swap {
                None => return Ok(BigInt::zero()),
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num.checked_div(&prev).expect("bareiss exact division");
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(sign * a[n - 1][n - 1].clone())
}

/// Kernel of an integer matrix: columns generate `{x : m x = 0}`.
pub(super) fn kernel_integers(m: &Matrix) -> Matrix {
    let snf = smith_normal_form(m).expect("integer matrix");
    let n = m.rows().min(m.cols());
    let mut cols = Vec::new();
    for j in 0..m.cols() {
        let in_kernel = j >= n || snf.diag[j].is_zero();
        if in_kernel {
            cols.push(snf.right.column(j));
        }
    }
    Matrix::from_columns(m.ring(), m.cols(), cols)
}

/// Solve m x = v over the integers.
pub(super) fn solve_integers(m: &Matrix, v: &[RingElement]) -> Option<Vec<RingElement>> {
    let ring = m.ring().clone();
    let snf = smith_normal_form(m).expect("integer matrix");
    let lv = snf.left.apply(v);
    let n = m.rows().min(m.cols());
    let mut y = vec![ring.zero(); m.cols()];
    for i in 0..m.rows() {
        let c = lv[i].as_bigint().unwrap();
        if i < n && !snf.diag[i].is_zero() {
            let (q, rem) = c.div_rem(&snf.diag[i]);
            if !rem.is_zero() {
                return None;
            }
            // left multiplication may have flipped signs into |diag|; recover
            // the signed pivot from L*m*R directly
            y[i] = ring.from_bigint(&q);
        } else if !c.is_zero() {
            return None;
        }
    }
    // adjust for the sign of the true diagonal of L*m*R
    let d = snf.left.mul(m).mul(&snf.right);
    for (i, yi) in y.iter_mut().enumerate().take(n) {
        if yi.is_zero() {
            continue;
        }
        let pivot = d.at(i, i).as_bigint().unwrap();
        if pivot.is_negative() {
            *yi = yi.neg();
        }
    }
    Some(snf.right.apply(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Ring;

    fn imat(rows: usize, cols: usize, v: &[i64]) -> Matrix {
        let z = Ring::integers();
        let data = v.iter().map(|&x| z.from_int(x)).collect();
        Matrix::new(z, rows, cols, data).unwrap()
    }

    fn check(m: &Matrix) -> Vec<BigInt> {
        let snf = smith_normal_form(m).unwrap();
        let d = snf.left.mul(m).mul(&snf.right);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let expect = if i == j && i < snf.diag.len() {
                    snf.diag[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(d.at(i, j).as_bigint().unwrap().abs(), expect.abs());
            }
        }
        for w in snf.diag.windows(2) {
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
            } else {
                assert!(w[1].is_zero());
            }
        }
        assert_eq!(det_bigint(&snf.left).unwrap().abs(), BigInt::one());
        assert_eq!(det_bigint(&snf.right).unwrap().abs(), BigInt::one());
        snf.diag
    }

    #[test]
    fn identity_and_zero() {
        let d = check(&imat(2, 2, &[1, 0, 0, 1]));
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(1)]);
        let d = check(&imat(2, 2, &[0, 0, 0, 0]));
        assert_eq!(d, vec![BigInt::from(0), BigInt::from(0)]);
    }

    #[test]
    fn diag_2_3_normalizes_to_1_6() {
        let d = check(&imat(2, 2, &[2, 0, 0, 3]));
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn kernel_and_solve() {
        let z = Ring::integers();
        // m = [2 4] : Z^2 -> Z, kernel generated by (2,-1)
        let m = imat(1, 2, &[2, 4]);
        let k = kernel_integers(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        // solve [2 4] x = 6
        let sol = solve_integers(&m, &[z.from_int(6)]).unwrap();
        let img = m.apply(&sol);
        assert_eq!(img[0], z.from_int(6));
        // no solution for odd target
        assert!(solve_integers(&m, &[z.from_int(3)]).is_none());
    }

    #[test]
    fn rectangular_kernel() {
        // 2x3 matrix of rank 2
        let m = imat(2, 3, &[1, 2, 3, 0, 1, 1]);
        let k = kernel_integers(&m);
        assert!(m.mul(&k).is_zero());
        assert_eq!(k.cols(), 1);
    }
}
