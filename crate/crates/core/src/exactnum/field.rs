//! The ambient real number field `E = Q(gamma)` and its exact elements.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Interval};
use super::irreducible::is_irreducible;
use super::linalg::{self, EchelonBasis, Scalar};
use super::poly::{count_real_roots, sturm_sequence, IntPoly, RatPoly};
use crate::error::{Error, Result};

/// Largest supported field degree.
pub const MAX_DEGREE: usize = 16;

/// Width (in bits below the binary point) to which the root bracket is refined at load.
const STORED_BRACKET_BITS: i64 = 128;

#[derive(Clone, Debug)]
struct RootBracket {
    lo: Dyadic,
    hi: Dyadic,
    /// Sign of the minimal polynomial at `lo`.
    lo_sign: i32,
}

/// A validated number field `Q[x]/(minpoly)`, optionally with a chosen real root.
#[derive(Debug)]
pub struct FieldDescriptor {
    minpoly: IntPoly,
    degree: usize,
    // x^(degree + k) reduced modulo minpoly, k = 0..degree-1
    reduction: Vec<Vec<BigRational>>,
    root: Option<RootBracket>,
    root_interval: Option<(BigRational, BigRational)>,
}

pub type Field = Arc<FieldDescriptor>;

impl FieldDescriptor {
    /// Validate a monic integer minimal polynomial and, when given, the
    /// interval isolating the real root that fixes the embedding.
    pub fn validate(minpoly: IntPoly, root_interval: Option<(BigRational, BigRational)>) -> Result<Field> {
        if minpoly.is_zero() || minpoly.degree() < 1 {
            return Err(Error::InvalidInput("minimal polynomial must have degree >= 1".into()));
        }
        if !minpoly.is_monic() {
            return Err(Error::InvalidInput(format!("minimal polynomial {minpoly} is not monic")));
        }
        let degree = minpoly.degree();
        if degree > MAX_DEGREE {
            return Err(Error::DegreeCapExceeded { degree, cap: MAX_DEGREE });
        }
        if !is_irreducible(&minpoly) {
            return Err(Error::ReducibleMinPoly(minpoly.to_string()));
        }
        let root = match &root_interval {
            None => None,
            Some((lo, hi)) => Some(isolate(&minpoly, lo, hi)?),
        };
        let reduction = reduction_table(&minpoly);
        Ok(Arc::new(FieldDescriptor { minpoly, degree, reduction, root, root_interval }))
    }

    /// The field of rationals, embedded as `Q(0)`.
    pub fn rationals() -> Field {
        let zero = BigRational::zero();
        FieldDescriptor::validate(IntPoly::from_i64(&[0, 1]), Some((zero.clone(), zero))).expect("Q is valid")
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_real(&self) -> bool {
        self.root.is_some()
    }

    pub fn root_interval(&self) -> Option<&(BigRational, BigRational)> {
        self.root_interval.as_ref()
    }

    /// Dyadic bracket of the real root with width at most `2^-abs_bits`.
    pub fn root_bracket(&self, abs_bits: i64) -> Option<(Dyadic, Dyadic)> {
        let r = self.root.as_ref()?;
        if self.degree == 1 {
            let g = Dyadic::from_int(-&self.minpoly.coeffs[0]);
            return Some((g.clone(), g));
        }
        let (mut lo, mut hi) = (r.lo.clone(), r.hi.clone());
        let target = Dyadic::pow2(-abs_bits);
        while hi.sub(&lo) > target {
            let mid = lo.add(&hi).shl(-1);
            let s = self.minpoly.eval_dyadic(&mid).signum();
            if s == 0 {
                return Some((mid.clone(), mid));
            }
            if s == r.lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some((lo, hi))
    }

    fn reduce(&self, mut prod: Vec<BigRational>) -> Vec<BigRational> {
        let n = self.degree;
        if prod.len() <= n {
            prod.resize(n, BigRational::zero());
            return prod;
        }
        let mut out: Vec<BigRational> = prod[..n].to_vec();
        for (k, c) in prod.drain(n..).enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.reduction[k]) {
                if !r.is_zero() {
                    *o += &c * r;
                }
            }
        }
        out
    }

    fn same(&self, other: &FieldDescriptor) -> bool {
        std::ptr::eq(self, other) || self.minpoly == other.minpoly
    }
}

fn reduction_table(f: &IntPoly) -> Vec<Vec<BigRational>> {
    let n = f.degree();
    // x^n = -(f_0 + ... + f_{n-1} x^{n-1})
    let mut cur: Vec<BigRational> = f.coeffs[..n].iter().map(|c| BigRational::from_integer(-c)).collect();
    let mut table = Vec::with_capacity(n);
    for _ in 0..n {
        table.push(cur.clone());
        // multiply by x
        let top = cur[n - 1].clone();
        let mut next = vec![BigRational::zero(); n];
        for j in (1..n).rev() {
            next[j] = cur[j - 1].clone();
        }
        if !top.is_zero() {
            for j in 0..n {
                next[j] += &top * &BigRational::from_integer(-&f.coeffs[j]);
            }
        }
        cur = next;
    }
    table
}

fn dyadic_floor_at(q: &BigRational, bits: i64, up: bool) -> Dyadic {
    let scaled = q * BigRational::from_integer(BigInt::one() << bits as usize);
    let m = if up { scaled.ceil().to_integer() } else { scaled.floor().to_integer() };
    Dyadic::new(m, -bits)
}

fn isolate(f: &IntPoly, lo: &BigRational, hi: &BigRational) -> Result<RootBracket> {
    if lo > hi {
        return Err(Error::EmptyOrAmbiguousRootInterval { roots: 0 });
    }
    if f.degree() == 1 {
        let root = BigRational::new(-&f.coeffs[0], f.coeffs[1].clone());
        if &root < lo || &root > hi {
            return Err(Error::EmptyOrAmbiguousRootInterval { roots: 0 });
        }
        let d = Dyadic::from_int(root.to_integer());
        return Ok(RootBracket { lo: d.clone(), hi: d, lo_sign: 0 });
    }
    let fr = f.to_rat();
    let seq = sturm_sequence(&fr);
    // the degree >= 2 irreducible case has no rational roots, so (lo, hi] and [lo, hi] agree
    let n = count_real_roots(&seq, lo, hi);
    if n != 1 {
        return Err(Error::EmptyOrAmbiguousRootInterval { roots: n });
    }
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let mut bits: i64 = 8;
    loop {
        // shrink the rational bracket, then snap outward to a dyadic grid
        while (&b - &a) > BigRational::new(BigInt::one(), BigInt::one() << (bits as usize + 2)) {
            let mid = (&a + &b) / BigRational::from_integer(2.into());
            if count_real_roots(&seq, &a, &mid) == 1 {
                b = mid;
            } else {
                a = mid;
            }
        }
        let dlo = dyadic_floor_at(&a, bits, false);
        let dhi = dyadic_floor_at(&b, bits, true);
        if count_real_roots(&seq, &dlo.to_rational(), &dhi.to_rational()) == 1 {
            let s_lo = f.eval_dyadic(&dlo).signum();
            let s_hi = f.eval_dyadic(&dhi).signum();
            if s_lo != 0 && s_hi != 0 && s_lo != s_hi {
                let mut br = RootBracket { lo: dlo, hi: dhi, lo_sign: s_lo };
                let target = Dyadic::pow2(-STORED_BRACKET_BITS);
                while br.hi.sub(&br.lo) > target {
                    let mid = br.lo.add(&br.hi).shl(-1);
                    if f.eval_dyadic(&mid).signum() == br.lo_sign {
                        br.lo = mid;
                    } else {
                        br.hi = mid;
                    }
                }
                return Ok(br);
            }
        }
        bits += 8;
    }
}

/// Exact element of a number field, stored in the power basis `1, gamma, ..., gamma^(n-1)`.
#[derive(Clone)]
pub struct FieldElement {
    coords: Vec<BigRational>,
    field: Field,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same(&other.field) && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn from_coords(field: &Field, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() > field.degree {
            return Err(Error::InvalidInput(format!(
                "field element has {} coordinates, field degree is {}",
                coords.len(),
                field.degree
            )));
        }
        let mut c = coords;
        c.resize(field.degree, BigRational::zero());
        Ok(FieldElement { coords: c, field: field.clone() })
    }

    /// Reduce an arbitrary polynomial in the generator.
    pub fn from_poly(field: &Field, poly: &RatPoly) -> Self {
        let coords = field.reduce(poly.coeffs.clone());
        FieldElement { coords, field: field.clone() }
    }

    pub fn zero(field: &Field) -> Self {
        FieldElement { coords: vec![BigRational::zero(); field.degree], field: field.clone() }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_rational(field: &Field, q: BigRational) -> Self {
        let mut e = Self::zero(field);
        e.coords[0] = q;
        e
    }

    pub fn from_int(field: &Field, v: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(v.into()))
    }

    pub fn from_bigint(field: &Field, v: &BigInt) -> Self {
        Self::from_rational(field, BigRational::from_integer(v.clone()))
    }

    pub fn generator(field: &Field) -> Self {
        if field.degree == 1 {
            return Self::from_bigint(field, &-&field.minpoly.coeffs[0]);
        }
        let mut e = Self::zero(field);
        e.coords[1] = BigRational::one();
        e
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn to_poly(&self) -> RatPoly {
        RatPoly::new(self.coords.clone())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        FieldElement { coords: self.coords.iter().map(|c| c * q).collect(), field: self.field.clone() }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(k.clone()))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Self::from_rational(&self.field, q.recip()));
        }
        let (g, s, _) = self.to_poly().ext_gcd(&self.field.minpoly.to_rat());
        debug_assert_eq!(g, RatPoly::one());
        Some(Self::from_poly(&self.field, &s))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Certified enclosure of the real value under the chosen embedding, with
    /// width at most `2^-bits * max(1, |value|)`. Results are nested: the
    /// enclosure at `bits + 8` lies inside the one at `bits`.
    pub fn evaluate(&self, bits: u32) -> Interval {
        let bits = bits.max(4);
        let mut b = 4 + (bits - 4) % 8;
        let mut acc = self.enclose(b);
        while b < bits {
            b += 8;
            let next = self.enclose(b);
            acc = Interval {
                lo: acc.lo.max(next.lo),
                hi: acc.hi.min(next.hi),
                prec: next.prec,
            };
        }
        acc
    }

    /// Single-shot enclosure with the same width guarantee as [`evaluate`](Self::evaluate),
    /// without the nesting guarantee.
    pub fn enclose(&self, bits: u32) -> Interval {
        assert!(self.field.is_real(), "evaluate needs a field with a chosen real root");
        let bits = bits.max(4);
        if let Some(q) = self.as_rational() {
            return Interval::from_rational(&q, bits + 2);
        }
        let mut p = bits as i64 + 32;
        loop {
            let (glo, ghi) = self.field.root_bracket(p).expect("real field");
            let mag = glo.abs().max(ghi.abs()).ilog2().unwrap_or(0).max(0);
            let prec = (p + mag + 8) as u32;
            let g = Interval::new(glo, ghi, prec);
            let mut acc = Interval::zero(prec);
            for c in self.coords.iter().rev() {
                acc = acc.mul(&g).add(&Interval::from_rational(c, prec));
            }
            let lower_mag = acc.abs().lo.max(Dyadic::one());
            if acc.width() <= lower_mag.shl(-(bits as i64)) {
                return acc;
            }
            p *= 2;
        }
    }

    /// Exact sign under the chosen real embedding.
    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some(q) = self.as_rational() {
            return if q.is_positive() { 1 } else { -1 };
        }
        let mut bits = 32;
        loop {
            if let Some(s) = self.enclose(bits).sign() {
                if s != 0 {
                    return s;
                }
            }
            bits *= 2;
        }
    }

    /// Exact comparison of absolute values, `|self|` against `|other|`.
    pub fn cmp_abs(&self, other: &FieldElement) -> std::cmp::Ordering {
        let d = &(self * self) - &(other * other);
        d.sign().cmp(&0)
    }

    pub fn abs(&self) -> FieldElement {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
            field: self.field.clone(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
            field: self.field.clone(),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { coords: self.coords.iter().map(|a| -a).collect(), field: self.field.clone() }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        if let Some(q) = self.as_rational() {
            return o.scale(&q);
        }
        if let Some(q) = o.as_rational() {
            return self.scale(&q);
        }
        let n = self.coords.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        FieldElement { coords: self.field.reduce(prod), field: self.field.clone() }
    }
}

impl Scalar for FieldElement {
    fn sis_zero(&self) -> bool {
        FieldElement::is_zero(self)
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
        self.inv().expect("inverse of zero field element")
    }
    fn zero_like(&self) -> Self {
        FieldElement::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        FieldElement::one(&self.field)
    }
}

/// Minimal polynomial over Q as a primitive integer polynomial with positive
/// leading coefficient, found from the first rational dependence among powers.
pub fn minimal_polynomial(x: &FieldElement) -> IntPoly {
    let mut powers: Vec<Vec<BigRational>> = Vec::new();
    let mut basis = EchelonBasis::new();
    let mut cur = FieldElement::one(x.field());
    loop {
        let v = cur.coords().to_vec();
        if !basis.insert(&v) {
            powers.push(v);
            break;
        }
        powers.push(v);
        cur = &cur * x;
    }
    let k = powers.len() - 1;
    // columns are the powers; one-dimensional kernel gives the relation
    let rows: Vec<Vec<BigRational>> =
        (0..x.field().degree()).map(|r| powers.iter().map(|p| p[r].clone()).collect()).collect();
    let ns = linalg::nullspace(&rows, k + 1, &BigRational::zero());
    debug_assert_eq!(ns.len(), 1);
    RatPoly::new(ns[0].clone()).to_primitive_int()
}

/// Q-basis (as field elements) of the subalgebra generated by `gens`.
pub fn generated_subalgebra(field: &Field, gens: &[FieldElement]) -> Vec<FieldElement> {
    let mut basis_vecs = EchelonBasis::new();
    let one = FieldElement::one(field);
    basis_vecs.insert(one.coords());
    let mut basis = vec![one];
    let mut i = 0;
    while i < basis.len() {
        let b = basis[i].clone();
        for g in gens {
            let prod = &b * g;
            if basis_vecs.insert(prod.coords()) {
                basis.push(prod);
            }
        }
        i += 1;
    }
    basis
}

/// Q-rank of a family of field elements.
pub fn rational_rank(elems: &[FieldElement]) -> usize {
    let rows: Vec<Vec<BigRational>> = elems.iter().map(|e| e.coords().to_vec()).collect();
    if rows.is_empty() {
        return 0;
    }
    linalg::rank(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::linalg::rat;

    fn sqrt2() -> Field {
        FieldDescriptor::validate(IntPoly::from_i64(&[-2, 0, 1]), Some((rat(1, 1), rat(2, 1)))).unwrap()
    }

    #[test]
    fn validate_examples() {
        let f = sqrt2();
        assert_eq!(f.degree(), 2);
        let err = FieldDescriptor::validate(IntPoly::from_i64(&[-1, 0, 1]), Some((rat(0, 1), rat(2, 1))));
        assert!(matches!(err, Err(Error::ReducibleMinPoly(_))));
        let e = FieldDescriptor::validate(IntPoly::from_i64(&[1, 0, -10, 0, 1]), Some((rat(3, 1), rat(16, 5))))
            .unwrap();
        let g = FieldElement::generator(&e).evaluate(40);
        assert!((g.mid_f64() - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-10);
        let amb = FieldDescriptor::validate(IntPoly::from_i64(&[-2, 0, 1]), Some((rat(-2, 1), rat(2, 1))));
        assert_eq!(amb.unwrap_err(), Error::EmptyOrAmbiguousRootInterval { roots: 2 });
        let none = FieldDescriptor::validate(IntPoly::from_i64(&[-2, 0, 1]), Some((rat(2, 1), rat(3, 1))));
        assert_eq!(none.unwrap_err(), Error::EmptyOrAmbiguousRootInterval { roots: 0 });
    }

    #[test]
    fn evaluate_sqrt2() {
        let f = sqrt2();
        let g = FieldElement::generator(&f);
        let iv = g.evaluate(20);
        assert!(iv.width().to_f64() <= 2f64.powi(-20) * 2.0);
        assert!(iv.lo.to_f64() <= 2f64.sqrt() && 2f64.sqrt() <= iv.hi.to_f64());
        assert!(FieldElement::zero(&f).evaluate(20).is_point());
        let q = FieldElement::from_rational(&f, rat(3, 4)).evaluate(20);
        assert!(q.is_point());
        assert_eq!(q.lo.to_rational(), rat(3, 4));
    }

    #[test]
    fn evaluate_monotone_in_precision() {
        let f = sqrt2();
        let x = &FieldElement::generator(&f) * &FieldElement::from_rational(&f, rat(7, 3));
        for b in [8u32, 16, 32, 64] {
            let coarse = x.evaluate(b);
            let fine = x.evaluate(b + 8);
            assert!(coarse.contains_interval(&fine));
        }
    }

    #[test]
    fn sign_examples() {
        let f = sqrt2();
        let g = FieldElement::generator(&f);
        let one = FieldElement::one(&f);
        assert_eq!((&g - &one).sign(), 1);
        assert_eq!(FieldElement::zero(&f).sign(), 0);
        let two = FieldElement::from_int(&f, 2);
        let z = &(&g * &g) - &two;
        assert!(z.is_zero());
        assert_eq!(z.sign(), 0);
    }

    #[test]
    fn minimal_polynomial_examples() {
        let f = sqrt2();
        let g = FieldElement::generator(&f);
        assert_eq!(minimal_polynomial(&g), IntPoly::from_i64(&[-2, 0, 1]));
        assert_eq!(minimal_polynomial(&FieldElement::from_int(&f, 3)), IntPoly::from_i64(&[-3, 1]));
        let gp1 = &g + &FieldElement::one(&f);
        assert_eq!(minimal_polynomial(&gp1), IntPoly::from_i64(&[-1, -2, 1]));
        assert_eq!(minimal_polynomial(&FieldElement::zero(&f)), IntPoly::from_i64(&[0, 1]));
    }

    #[test]
    fn inverse_roundtrip() {
        let e = FieldDescriptor::validate(IntPoly::from_i64(&[1, 0, -10, 0, 1]), Some((rat(3, 1), rat(16, 5))))
            .unwrap();
        let g = FieldElement::generator(&e);
        let x = &(&g * &g) + &FieldElement::from_rational(&e, rat(1, 3));
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
    }

    #[test]
    fn subalgebra_dimension() {
        let e = FieldDescriptor::validate(IntPoly::from_i64(&[1, 0, -10, 0, 1]), Some((rat(3, 1), rat(16, 5))))
            .unwrap();
        let g = FieldElement::generator(&e);
        let g3 = g.pow(3);
        // sqrt2 = (g^3 - 9g)/2
        let s2 = (&g3 - &g.scale(&rat(9, 1))).scale(&rat(1, 2));
        assert!((&(&s2 * &s2) - &FieldElement::from_int(&e, 2)).is_zero());
        assert_eq!(generated_subalgebra(&e, std::slice::from_ref(&s2)).len(), 2);
        assert_eq!(generated_subalgebra(&e, std::slice::from_ref(&g)).len(), 4);
    }
}
