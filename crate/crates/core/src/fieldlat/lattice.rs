use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactnum::linalg::{self, EchelonBasis};
use crate::exactnum::{Field, FieldElement};
use crate::geometry::Sublattice;

/// Lattice of rank `n` in `R^m` with an exact basis over the ambient field.
#[derive(Clone, Debug)]
pub struct EmbeddedLattice {
    field: Field,
    cols: Vec<Vec<FieldElement>>,
}

impl EmbeddedLattice {
    /// Basis columns must be linearly independent over `E` (hence over `R`).
    pub fn new(field: &Field, cols: Vec<Vec<FieldElement>>) -> Result<Self> {
        let Some(first) = cols.first() else {
            return Err(Error::RankDeficient { rank: 0, expected: 1 });
        };
        let m = first.len();
        if cols.iter().any(|c| c.len() != m) {
            return Err(Error::InvalidInput("lattice basis columns have different lengths".into()));
        }
        let mut eb = EchelonBasis::new();
        let mut rank = 0;
        for c in &cols {
            if eb.insert(c) {
                rank += 1;
            }
        }
        if rank < cols.len() {
            return Err(Error::RankDeficient { rank, expected: cols.len() });
        }
        Ok(EmbeddedLattice { field: field.clone(), cols })
    }

    pub fn from_rational_columns(field: &Field, cols: &[Vec<BigRational>]) -> Result<Self> {
        let c = cols
            .iter()
            .map(|col| col.iter().map(|q| FieldElement::from_rational(field, q.clone())).collect())
            .collect();
        Self::new(field, c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    pub fn dim(&self) -> usize {
        self.cols[0].len()
    }

    pub fn columns(&self) -> &[Vec<FieldElement>] {
        &self.cols
    }

    /// Rows of the basis matrix (`dim x rank`).
    pub fn rows(&self) -> Vec<Vec<FieldElement>> {
        linalg::transpose(&self.cols)
    }

    /// The lattice point with integer coordinates `c` in this basis.
    pub fn point(&self, c: &[BigInt]) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::zero(&self.field); self.dim()];
        for (col, k) in self.cols.iter().zip(c) {
            if k.sign() == num_bigint::Sign::NoSign {
                continue;
            }
            for (o, x) in out.iter_mut().zip(col) {
                *o = &*o + &x.scale_int(k);
            }
        }
        out
    }

    pub fn gram(&self) -> Vec<Vec<FieldElement>> {
        let n = self.rank();
        let mut g = vec![vec![FieldElement::zero(&self.field); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.cols[i]
                    .iter()
                    .zip(&self.cols[j])
                    .fold(FieldElement::zero(&self.field), |acc, (a, b)| &acc + &(a * b));
                g[i][j] = v.clone();
                g[j][i] = v;
            }
        }
        g
    }

    /// `det(B^T B)`, the squared covolume.
    pub fn gram_det(&self) -> FieldElement {
        linalg::det(&self.gram())
    }

    /// The sublattice whose basis has coordinates given by `s` in this basis.
    pub fn sublattice(&self, s: &Sublattice) -> EmbeddedLattice {
        let cols = s.columns().iter().map(|c| self.point(c)).collect();
        EmbeddedLattice { field: self.field.clone(), cols }
    }
}
