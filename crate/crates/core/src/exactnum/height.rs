//! Absolute multiplicative Weil heights.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Interval, DEFAULT_PREC};
use super::field::{minimal_polynomial, Field, FieldElement};
use super::poly::IntPoly;
use super::roots::{complex_roots, mahler_measure, CInterval, ComplexBall};

/// Height of a rational number `p/q` in lowest terms: `max(|p|, |q|)`.
pub fn rational_height(q: &num_rational::BigRational) -> BigInt {
    q.numer().abs().max(q.denom().clone())
}

/// Height of an algebraic number from its minimal polynomial: `M(f)^(1/deg f)`.
pub fn poly_height(f: &IntPoly, prec: u32) -> Interval {
    let d = f.degree() as u32;
    if d == 1 {
        let q = num_rational::BigRational::new(-&f.coeffs[0], f.coeffs[1].clone());
        return Interval::from_int(rational_height(&q), prec);
    }
    mahler_measure(f, prec + 16).nth_root(d).with_prec(prec)
}

/// Enclosure of `h(x)`; `h(0) = 1`.
pub fn weil_height(x: &FieldElement) -> Interval {
    weil_height_prec(x, DEFAULT_PREC)
}

pub fn weil_height_prec(x: &FieldElement, prec: u32) -> Interval {
    if let Some(q) = x.as_rational() {
        if q.numer().is_zero() {
            return Interval::one(prec);
        }
        return Interval::from_int(rational_height(&q), prec);
    }
    poly_height(&minimal_polynomial(x), prec)
}

/// Certified enclosures of all complex conjugates of the field generator.
pub fn generator_conjugates(field: &Field, prec: u32) -> Vec<ComplexBall> {
    complex_roots(field.minpoly(), prec)
}

/// Enclosures of `|sigma_k(x)|` over all embeddings `sigma_k`.
pub fn conjugate_abs(x: &FieldElement, conj: &[ComplexBall], prec: u32) -> Vec<Interval> {
    conj.iter()
        .map(|c| {
            let z = c.to_cinterval(prec);
            CInterval::horner(x.coords(), &z, prec).abs()
        })
        .collect()
}

/// Archimedean part `prod_k max(1, max_j |sigma_k(b_j)|)^(1/l)` of the height of a vector.
pub fn archimedean_height(entries: &[FieldElement], prec: u32) -> Interval {
    let Some(first) = entries.first() else { return Interval::one(prec) };
    let field = first.field();
    let conj = generator_conjugates(field, prec + 32);
    let l = conj.len() as u32;
    let mut per_place: Vec<Interval> = vec![Interval::one(prec); conj.len()];
    for e in entries {
        for (k, a) in conjugate_abs(e, &conj, prec + 16).into_iter().enumerate() {
            per_place[k] = per_place[k].max(&a);
        }
    }
    let prod = per_place.iter().fold(Interval::one(prec + 16), |acc, m| acc.mul(m));
    prod.nth_root(l).with_prec(prec)
}

/// Enclosure of the height `h(b_1, ..., b_n)` of a vector over the ambient field.
///
/// The lower end is `max(archimedean part, max_j h(b_j))`; the upper end
/// multiplies the archimedean part by the finite-place factors
/// `|lead(f_j)|^(1/deg f_j)` of each entry. Both are exact when every entry
/// is an algebraic integer.
pub fn vector_height(entries: &[FieldElement], prec: u32) -> Interval {
    let arch = archimedean_height(entries, prec);
    let mut lower = arch.lo.clone();
    let mut finite = Interval::one(prec);
    for e in entries {
        let f = if let Some(q) = e.as_rational() {
            IntPoly::new(vec![-q.numer().clone(), q.denom().clone()])
        } else {
            minimal_polynomial(e)
        };
        let lead = f.lead().abs();
        if !lead.is_one() {
            finite = finite.mul(&Interval::from_int(lead, prec).nth_root(f.degree() as u32));
            let h = weil_height_prec(e, prec);
            if h.lo > lower {
                lower = h.lo;
            }
        }
    }
    let upper = arch.mul(&finite).hi;
    let lower = lower.min(upper.clone());
    Interval::new(lower, upper, prec)
}
