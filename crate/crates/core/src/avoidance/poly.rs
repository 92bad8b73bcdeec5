use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, FieldElement, Interval};

/// A polynomial in `nvars` variables with rational coefficients, stored as
/// exponent vector -> coefficient with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn new(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::InvalidInput(format!(
                    "exponent vector of length {} in a polynomial of {} variables",
                    e.len(),
                    nvars
                )));
            }
            *map.entry(e).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Polynomial { nvars, terms: map })
    }

    /// The coordinate function `x_i` (0-based).
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Polynomial { nvars, terms: BTreeMap::from([(e, BigRational::one())]) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, o.nvars);
        let mut map: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *map.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial { nvars: self.nvars, terms: map }
    }

    /// Exact value at a point of `E^nvars`.
    pub fn eval(&self, x: &[FieldElement]) -> FieldElement {
        assert_eq!(x.len(), self.nvars);
        let field = x[0].field();
        let mut acc = FieldElement::zero(field);
        for (e, c) in &self.terms {
            let mut t = FieldElement::from_rational(field, c.clone());
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = &t * &xi.pow(k as u64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Exact value at an integer point.
    pub fn eval_int(&self, x: &[BigInt]) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(x).fold(c.clone(), |acc, (&k, xi)| acc * BigRational::from_integer(num_traits::pow(xi.clone(), k as usize)))
            })
            .sum()
    }

    /// Interval evaluation from enclosures of the coordinates.
    pub fn eval_interval(&self, x: &[Interval], prec: u32) -> Interval {
        let mut acc = Interval::zero(prec);
        for (e, c) in &self.terms {
            let mut t = Interval::from_rational(c, prec);
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&xi.powi(k as i64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::linalg::rat;

    #[test]
    fn basics() {
        let p = Polynomial::new(2, [(vec![2, 0], rat(1, 1)), (vec![0, 2], rat(1, 1))]).unwrap();
        assert!(p.is_homogeneous());
        assert_eq!(p.degree(), 2);
        assert_eq!(p.to_string(), "x1^2 + x2^2");
        let q = Polynomial::new(2, [(vec![1, 0], rat(1, 1)), (vec![0, 0], rat(1, 1))]).unwrap();
        assert!(!q.is_homogeneous());
        let z = Polynomial::new(2, [(vec![1, 0], rat(1, 1)), (vec![1, 0], rat(-1, 1))]).unwrap();
        assert!(z.is_zero());
        let x1 = Polynomial::variable(2, 0);
        let x2 = Polynomial::variable(2, 1);
        let prod = x1.mul(&x2);
        assert_eq!(prod.eval_int(&[3.into(), 5.into()]), rat(15, 1));
    }
}
