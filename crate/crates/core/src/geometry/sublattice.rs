use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::hnf::{hnf, integer_kernel};
use crate::error::{Error, Result};
use crate::exactnum::linalg::int_det;

/// Full-rank sublattice of `Z^n` (coordinates in the ambient lattice basis).
///
/// `coeffs` is stored by rows; its columns are the sublattice basis. After
/// construction it holds the canonical HNF basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sublattice {
    pub coeffs: Vec<Vec<BigInt>>,
    pub index: BigInt,
}

impl Sublattice {
    /// Build from basis columns given by rows of the coefficient matrix.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("sublattice matrix must be square and nonempty".into()));
        }
        let d = int_det(&rows).abs();
        if d.is_zero() {
            return Err(Error::InvalidInput("sublattice matrix is singular".into()));
        }
        let h = hnf(&rows).h;
        Ok(Sublattice { coeffs: h, index: d })
    }

    /// Build from a list of basis columns.
    pub fn from_columns(cols: &[Vec<BigInt>]) -> Result<Self> {
        let n = cols.len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidInput("sublattice matrix must be square".into()));
        }
        let rows = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        let n = self.dim();
        (0..n).map(|j| self.coeffs.iter().map(|r| r[j].clone()).collect()).collect()
    }

    /// Whether `x` (ambient coordinates) lies in the sublattice.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        membership(x, self)
    }
}

/// Forward substitution against the lower-triangular HNF basis.
pub fn membership(x: &[BigInt], g: &Sublattice) -> bool {
    let n = g.dim();
    assert_eq!(x.len(), n, "dimension mismatch");
    let h = &g.coeffs;
    let mut z: Vec<BigInt> = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = x[i].clone();
        for (j, zj) in z.iter().enumerate() {
            r -= &h[i][j] * zj;
        }
        let (q, rem) = r.div_rem(&h[i][i]);
        if !rem.is_zero() {
            return false;
        }
        z.push(q);
    }
    true
}

fn intersect_two(a: &Sublattice, b: &Sublattice) -> Sublattice {
    let n = a.dim();
    // kernel of [A | -B]; the A-part of each kernel vector gives a point A u = B v
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = a.coeffs[i].clone();
            row.extend(b.coeffs[i].iter().map(|x| -x));
            row
        })
        .collect();
    let ker = integer_kernel(&m);
    let cols: Vec<Vec<BigInt>> = ker
        .iter()
        .map(|k| (0..n).map(|i| (0..n).map(|j| &a.coeffs[i][j] * &k[j]).sum()).collect())
        .collect();
    Sublattice::from_columns(&cols).expect("intersection of full-rank lattices has full rank")
}

/// Intersection of full-rank sublattices.
pub fn intersect(gs: &[Sublattice]) -> Result<Sublattice> {
    let Some(first) = gs.first() else {
        return Err(Error::InvalidInput("intersection of an empty family".into()));
    };
    let mut acc = first.clone();
    for g in &gs[1..] {
        if g.dim() != acc.dim() {
            return Err(Error::InvalidInput("sublattices of different dimensions".into()));
        }
        acc = intersect_two(&acc, g);
    }
    let prod: BigInt = gs.iter().map(|g| g.index.clone()).product();
    debug_assert!(acc.index <= prod);
    Ok(acc)
}
