//! Column-style Hermite normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `h = a * u` with `h` lower-triangular in echelon form and `u` unimodular.
///
/// Pivots are positive; entries left of a pivot in its row lie in `[0, pivot)`.
/// Zero columns (the kernel part of `u`) come last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf {
    pub h: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    /// Row index of each pivot, in column order.
    pub pivot_rows: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

fn col_op(m: &mut [Vec<BigInt>], j: usize, k: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
    // (col_j, col_k) <- (a col_j + b col_k, c col_j + d col_k)
    for row in m.iter_mut() {
        let x = row[j].clone();
        let y = row[k].clone();
        row[j] = a * &x + b * &y;
        row[k] = c * &x + d * &y;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
    for row in m.iter_mut() {
        let t = &row[src] * f;
        row[dst] -= t;
    }
}

fn col_swap(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn col_neg(m: &mut [Vec<BigInt>], j: usize) {
    for row in m.iter_mut() {
        row[j] = -&row[j];
    }
}

/// Hermite normal form of an `rows x cols` integer matrix (given by rows).
pub fn hnf(a: &[Vec<BigInt>]) -> Hnf {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivot_rows = Vec::new();
    let mut k = 0;
    for i in 0..rows {
        if k == cols {
            break;
        }
        // fold columns k+1.. into column k on row i
        for j in k + 1..cols {
            if h[i][j].is_zero() {
                continue;
            }
            if h[i][k].is_zero() {
                col_swap(&mut h, k, j);
                col_swap(&mut u, k, j);
                continue;
            }
            let x = h[i][k].clone();
            let y = h[i][j].clone();
            let e = x.extended_gcd(&y);
            let g = e.gcd;
            // [x y] * [[s, -y/g], [t, x/g]] = [g 0]
            let (s, t) = (e.x, e.y);
            let (yg, xg) = (&y / &g, &x / &g);
            col_op(&mut h, k, j, &s, &t, &-&yg, &xg);
            col_op(&mut u, k, j, &s, &t, &-&yg, &xg);
        }
        if h[i][k].is_zero() {
            continue;
        }
        if h[i][k].is_negative() {
            col_neg(&mut h, k);
            col_neg(&mut u, k);
        }
        let p = h[i][k].clone();
        for j in 0..k {
            let q = h[i][j].div_floor(&p);
            if !q.is_zero() {
                col_axpy(&mut h, j, k, &q);
                col_axpy(&mut u, j, k, &q);
            }
        }
        pivot_rows.push(i);
        k += 1;
    }
    Hnf { h, u, pivot_rows }
}

/// Integer kernel basis of `a` (columns), from the zero columns of the HNF transform.
pub fn integer_kernel(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let res = hnf(a);
    let cols = res.u.len();
    (res.rank()..cols).map(|j| res.u.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Z-basis (as rows) of the row lattice of an integer matrix.
pub fn row_lattice_basis(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let t = crate::exactnum::linalg::transpose(rows);
    let res = hnf(&t);
    (0..res.rank()).map(|j| res.h.iter().map(|row| row[j].clone()).collect()).collect()
}
