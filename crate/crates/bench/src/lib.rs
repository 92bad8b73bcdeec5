//! Benchmark fixtures.

use kronecker_core::exactnum::{Field, FieldDescriptor, FieldElement, IntPoly};
use kronecker_core::fieldlat::EmbeddedLattice;
use kronecker_core::problem::Problem;
use num_rational::BigRational;

pub const FIRST_THEOREM: &str = include_str!("../../../problems/sqrt2_sqrt3_t1.json");
pub const SECOND_THEOREM: &str = include_str!("../../../problems/sqrt2_sqrt3_t2.json");

pub fn ri(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn sqrt2() -> Field {
    FieldDescriptor::validate(IntPoly::from_i64(&[-2, 0, 1]), Some((ri(1), ri(2)))).unwrap()
}

pub fn quartic() -> Field {
    FieldDescriptor::validate(IntPoly::from_i64(&[1, 0, -10, 0, 1]), Some((ri(3), BigRational::new(16.into(), 5.into()))))
        .unwrap()
}

pub fn element(f: &Field, c: &[i64]) -> FieldElement {
    FieldElement::from_coords(f, c.iter().map(|&x| ri(x)).collect()).unwrap()
}

/// Integer lattice with a skewed basis of the given rank.
pub fn skewed_lattice(rank: usize) -> EmbeddedLattice {
    let cols: Vec<Vec<BigRational>> = (0..rank)
        .map(|j| (0..rank).map(|i| ri(if i == j { 3 } else if i < j { (i + j) as i64 % 3 - 1 } else { 0 })).collect())
        .collect();
    EmbeddedLattice::from_rational_columns(&FieldDescriptor::rationals(), &cols).unwrap()
}

pub fn problem(text: &str) -> Problem {
    Problem::from_json_str(text).unwrap()
}
