//! Dense exact linear algebra over any field-like scalar (Q or the ambient field E).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact field arithmetic needed by Gaussian elimination.
pub trait Scalar: Clone {
    fn sis_zero(&self) -> bool;
    fn sadd(&self, o: &Self) -> Self;
    fn ssub(&self, o: &Self) -> Self;
    fn smul(&self, o: &Self) -> Self;
    fn sneg(&self) -> Self;
    /// Multiplicative inverse; callers never pass zero.
    fn sinv(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
}

impl Scalar for BigRational {
    fn sis_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sadd(&self, o: &Self) -> Self {
        self + o
    }
    fn ssub(&self, o: &Self) -> Self {
        self - o
    }
    fn smul(&self, o: &Self) -> Self {
        self * o
    }
    fn sneg(&self) -> Self {
        -self
    }
    fn sinv(&self) -> Self {
        self.recip()
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<T: Scalar>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].sis_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].sinv();
        for j in c..cols {
            m[r][j] = m[r][j].smul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].sis_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = f.smul(&m[r][j]);
                    m[i][j] = m[i][j].ssub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(rows: &[Vec<T>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Determinant of a square matrix.
pub fn det<T: Scalar>(a: &[Vec<T>]) -> T {
    let n = a.len();
    assert!(n > 0 && a.iter().all(|r| r.len() == n), "det needs a nonempty square matrix");
    let mut m = a.to_vec();
    let mut acc = m[0][0].one_like();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].sis_zero()) else {
            return m[0][0].zero_like();
        };
        if p != c {
            m.swap(p, c);
            acc = acc.sneg();
        }
        acc = acc.smul(&m[c][c]);
        let inv = m[c][c].sinv();
        for i in c + 1..n {
            if m[i][c].sis_zero() {
                continue;
            }
            let f = m[i][c].smul(&inv);
            for j in c..n {
                let t = f.smul(&m[c][j]);
                m[i][j] = m[i][j].ssub(&t);
            }
        }
    }
    acc
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<T: Scalar>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    let zero = a[0][0].zero_like();
    let one = a[0][0].one_like();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let piv = rref(&mut m);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the right null space `{x : A x = 0}`.
pub fn nullspace<T: Scalar>(a: &[Vec<T>], cols: usize, sample: &T) -> Vec<Vec<T>> {
    let mut m = a.to_vec();
    let piv = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![sample.zero_like(); cols];
            v[f] = sample.one_like();
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = m[r][f].sneg();
            }
            v
        })
        .collect()
}

pub fn mat_vec<T: Scalar>(a: &[Vec<T>], x: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            row.iter().zip(x).fold(x[0].zero_like(), |acc, (r, v)| acc.sadd(&r.smul(v)))
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Growing echelon basis used to test span membership vector by vector.
#[derive(Clone, Debug)]
pub struct EchelonBasis<T> {
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Scalar> Default for EchelonBasis<T> {
    fn default() -> Self {
        EchelonBasis { rows: Vec::new() }
    }
}

impl<T: Scalar> EchelonBasis<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, v: &[T]) -> Vec<T> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].sis_zero() {
                let f = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x = x.ssub(&f.smul(r));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(|x| x.sis_zero())
    }

    /// Insert `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: &[T]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.sis_zero()) else { return false };
        let inv = r[p].sinv();
        let r: Vec<T> = r.iter().map(|x| x.smul(&inv)).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[p].sis_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = x.ssub(&f.smul(y));
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int_to_rat(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Exact rank of an integer matrix given by rows.
pub fn int_rank(rows: &[Vec<BigInt>]) -> usize {
    let m: Vec<Vec<BigRational>> = rows.iter().map(|r| int_to_rat(r)).collect();
    rank(&m)
}

/// Absolute determinant of an integer square matrix, computed fraction-free (Bareiss).
pub fn int_det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else { return BigInt::zero() };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v.div_floor(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn rat_is_integer_vec(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn abs_rat(x: &BigRational) -> BigRational {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(det(&a), rat(1, 1));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn nullspace_dim() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&a, 3, &rat(0, 1));
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(mat_vec(&a, &v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn bareiss_matches_rational() {
        let a: Vec<Vec<BigInt>> = vec![
            vec![3.into(), 1.into(), 4.into()],
            vec![1.into(), 5.into(), 9.into()],
            vec![2.into(), 6.into(), 5.into()],
        ];
        let r: Vec<Vec<BigRational>> = a.iter().map(|x| int_to_rat(x)).collect();
        assert_eq!(BigRational::from_integer(int_det(&a)), det(&r));
    }

    #[test]
    fn echelon_basis_membership() {
        let mut b = EchelonBasis::new();
        assert!(b.insert(&[rat(1, 1), rat(2, 1)]));
        assert!(!b.insert(&[rat(2, 1), rat(4, 1)]));
        assert!(b.contains(&[rat(-1, 2), rat(-1, 1)]));
        assert!(b.insert(&[rat(0, 1), rat(1, 1)]));
        assert_eq!(b.len(), 2);
    }
}
