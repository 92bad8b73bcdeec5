//! Dyadic numbers and outward-rounded dyadic intervals.
//!
//! A [`Dyadic`] is an exact value `mant * 2^exp`. Arithmetic on dyadics is
//! exact; rounding only happens through the explicit `round_*` helpers, which
//! are what [`Interval`] uses to keep its endpoints at a bounded number of
//! significant bits while staying on the safe side.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact binary rational `mant * 2^exp`, kept with an odd mantissa (or zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    pub fn pow2(exp: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp }
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz as usize;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Number of bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Floor of log2 of |self|; `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as usize))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << ((self.exp - e) as usize);
        let b = &o.mant << ((o.exp - e) as usize);
        Dyadic::new(a + b, e)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &o.mant, self.exp + o.exp)
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic::new(&self.mant * k, self.exp)
    }

    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Round to at most `prec` significant bits toward -inf (`up == false`) or +inf.
    pub fn round(&self, prec: u32, up: bool) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = (bits - prec as u64) as usize;
        let div = BigInt::one() << shift;
        let m = if up { ceil_div(&self.mant, &div) } else { self.mant.div_floor(&div) };
        Dyadic::new(m, self.exp + shift as i64)
    }

    pub fn round_down(&self, prec: u32) -> Dyadic {
        self.round(prec, false)
    }

    pub fn round_up(&self, prec: u32) -> Dyadic {
        self.round(prec, true)
    }

    /// Directed rational division `num / den` at `prec` bits.
    pub fn div_rational(num: &BigInt, den: &BigInt, prec: u32, up: bool) -> Dyadic {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Dyadic::zero();
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        let k = prec as i64 + den.bits() as i64 - num.bits() as i64 + 2;
        let k = k.max(0);
        let scaled = &num << (k as usize);
        let q = if up { ceil_div(&scaled, &den) } else { scaled.div_floor(&den) };
        Dyadic::new(q, -k)
    }

    pub fn from_rational(q: &BigRational, prec: u32, up: bool) -> Dyadic {
        let d = Dyadic::div_rational(q.numer(), q.denom(), prec, up);
        d.round(prec, up)
    }

    /// `self / o` rounded in the given direction.
    pub fn div(&self, o: &Dyadic, prec: u32, up: bool) -> Dyadic {
        let q = Dyadic::div_rational(&self.mant, &o.mant, prec, up);
        q.shl(self.exp - o.exp)
    }

    /// Directed square root of a non-negative dyadic.
    pub fn sqrt(&self, prec: u32, up: bool) -> Dyadic {
        self.nth_root(2, prec, up)
    }

    /// Directed `n`-th root of a non-negative dyadic.
    pub fn nth_root(&self, n: u32, prec: u32, up: bool) -> Dyadic {
        assert!(n >= 1);
        assert!(self.signum() >= 0, "root of negative dyadic");
        if self.is_zero() || n == 1 {
            return self.clone();
        }
        let n64 = n as i64;
        // scale so that mant * 2^(shift) has about n*(prec+2) bits and exp - shift is divisible by n
        let want = n64 * (prec as i64 + 2);
        let mut shift = (want - self.mant.bits() as i64).max(0);
        let rem = (self.exp - shift).rem_euclid(n64);
        shift += rem;
        let m = &self.mant << (shift as usize);
        let e = self.exp - shift;
        debug_assert_eq!(e.rem_euclid(n64), 0);
        let r = m.nth_root(n);
        let r = if up && r.pow(n) != m { r + 1 } else { r };
        Dyadic::new(r, e / n64).round(prec, up)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as usize)
        } else {
            self.mant.div_floor(&(BigInt::one() << ((-self.exp) as usize)))
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as usize)
        } else {
            ceil_div(&self.mant, &(BigInt::one() << ((-self.exp) as usize)))
        }
    }

    /// Approximate value as f64 (saturates to ±inf for huge values).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.mant >> (shift as usize)).to_f64().unwrap_or(0.0);
        let e = self.exp + shift;
        if e > 2000 {
            return if top > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if e < -2000 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    /// Approximate log2 |self| (useful to print huge bounds).
    pub fn log2_approx(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.mant.abs() >> (shift as usize)).to_f64().unwrap_or(1.0);
        top.log2() + (self.exp + shift) as f64
    }

    /// Exact string `num/den` (or `num`).
    pub fn to_rational_string(&self) -> String {
        crate::exactnum::format_rational(&self.to_rational())
    }
}

pub(crate) fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.sub(other);
        d.signum().cmp(&0)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_f64();
        if v.is_finite() {
            write!(f, "{v:.6e}")
        } else {
            write!(f, "2^{:.3}", self.log2_approx())
        }
    }
}

/// Default working precision (significant bits) for bound enclosures.
pub const DEFAULT_PREC: u32 = 128;

/// Closed interval `[lo, hi]` with dyadic endpoints, rounded outward to `prec` bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo: lo.round_down(prec), hi: hi.round_up(prec), prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        Interval::new(x.clone(), x, prec)
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> Self {
        Interval::point(Dyadic::from_int(v), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Interval::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Interval::point(Dyadic::one(), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(q, prec, false),
            hi: Dyadic::from_rational(q, prec, true),
            prec,
        }
    }

    fn p(&self, o: &Interval) -> u32 {
        self.prec.max(o.prec)
    }

    pub fn with_prec(&self, prec: u32) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.p(o);
        Interval { lo: self.lo.add(&o.lo).round_down(p), hi: self.hi.add(&o.hi).round_up(p), prec: p }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.p(o);
        let c = [self.lo.mul(&o.lo), self.lo.mul(&o.hi), self.hi.mul(&o.lo), self.hi.mul(&o.hi)];
        let lo = c.iter().min().unwrap().round_down(p);
        let hi = c.iter().max().unwrap().round_up(p);
        Interval { lo, hi, prec: p }
    }

    pub fn mul_int(&self, k: &BigInt) -> Interval {
        let a = self.lo.mul_int(k);
        let b = self.hi.mul_int(k);
        let (lo, hi) = if k.is_negative() { (b, a) } else { (a, b) };
        Interval { lo: lo.round_down(self.prec), hi: hi.round_up(self.prec), prec: self.prec }
    }

    pub fn mul_rational(&self, q: &BigRational) -> Interval {
        self.mul(&Interval::from_rational(q, self.prec))
    }

    /// Quotient; panics if `o` contains zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(!o.contains_zero(), "interval division by an interval containing zero");
        let p = self.p(o);
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs.iter().map(|(a, b)| a.div(b, p, false)).min().unwrap();
        let hi = pairs.iter().map(|(a, b)| a.div(b, p, true)).max().unwrap();
        Interval { lo, hi, prec: p }
    }

    pub fn recip(&self) -> Interval {
        Interval::one(self.prec).div(self)
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            let m = self.lo.neg().max(self.hi.clone());
            Interval { lo: Dyadic::zero(), hi: m, prec: self.prec }
        }
    }

    pub fn square(&self) -> Interval {
        let a = self.abs();
        a.mul(&a)
    }

    pub fn sqrt(&self) -> Interval {
        self.nth_root(2)
    }

    /// `n`-th root; negative parts are clamped to zero.
    pub fn nth_root(&self, n: u32) -> Interval {
        let lo = if self.lo.signum() <= 0 { Dyadic::zero() } else { self.lo.nth_root(n, self.prec, false) };
        let hi = if self.hi.signum() <= 0 { Dyadic::zero() } else { self.hi.nth_root(n, self.prec, true) };
        Interval { lo, hi, prec: self.prec }
    }

    /// Integer power (negative exponents take the reciprocal).
    pub fn powi(&self, n: i64) -> Interval {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut base = if n % 2 == 0 { self.abs() } else { self.clone() };
        let mut acc = Interval::one(self.prec);
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^(num/den)` for a non-negative interval.
    pub fn pow_frac(&self, num: i64, den: u32) -> Interval {
        assert!(den >= 1);
        if den == 1 {
            return self.powi(num);
        }
        self.nth_root(den).powi(num)
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().max(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()), prec: self.p(o) }
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().min(o.hi.clone()), prec: self.p(o) }
    }

    /// Hull of two intervals.
    pub fn hull(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()), prec: self.p(o) }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn intersects(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    /// Sign when certain: `Some(-1|0|1)`; zero only for the degenerate point `[0,0]`.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// Certainly `self <= o` (upper end of self below lower end of o).
    pub fn certainly_le(&self, o: &Interval) -> bool {
        self.hi <= o.lo
    }

    pub fn certainly_lt(&self, o: &Interval) -> bool {
        self.hi < o.lo
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// `max(1, self)`.
    pub fn max_one(&self) -> Interval {
        self.max(&Interval::one(self.prec))
    }

    /// Does `self` contain an integer, and if so is it unique?
    pub fn integers_inside(&self) -> (BigInt, BigInt) {
        (self.lo.ceil(), self.hi.floor())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rounding_is_directed() {
        let third = Interval::from_rational(&q(1, 3), 40);
        assert!(third.lo.to_rational() < q(1, 3));
        assert!(third.hi.to_rational() > q(1, 3));
        assert!(third.width().to_f64() < 1e-11);
    }

    #[test]
    fn dyadic_rational_is_exact() {
        let x = Interval::from_rational(&q(3, 4), 8);
        assert!(x.is_point());
        assert_eq!(x.lo.to_rational(), q(3, 4));
    }

    #[test]
    fn sqrt_two_encloses() {
        let s = Interval::from_int(2, 64).sqrt();
        assert!(s.lo.mul(&s.lo) <= Dyadic::from_int(2));
        assert!(s.hi.mul(&s.hi) >= Dyadic::from_int(2));
        assert!((s.mid_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn exact_roots_stay_points() {
        let x = Interval::from_int(4096, 64).nth_root(12);
        assert_eq!(x.lo, Dyadic::from_int(2));
        assert_eq!(x.hi, Dyadic::from_int(2));
    }

    #[test]
    fn division_and_powers() {
        let a = Interval::from_int(1, 64).div(&Interval::from_int(3, 64));
        let b = a.mul(&Interval::from_int(3, 64));
        assert!(b.contains(&Dyadic::one()));
        let p = Interval::from_int(-2, 64).powi(3);
        assert_eq!(p.lo, Dyadic::from_int(-8));
        let r = Interval::from_int(2, 64).powi(-2);
        assert!(r.contains(&Dyadic::new(1.into(), -2)));
    }

    #[test]
    fn floor_ceil_negative() {
        let d = Dyadic::new((-3).into(), -1); // -1.5
        assert_eq!(d.floor(), BigInt::from(-2));
        assert_eq!(d.ceil(), BigInt::from(-1));
    }
}
