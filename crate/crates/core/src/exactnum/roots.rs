//! Certified complex root enclosures of squarefree integer polynomials.
//!
//! Approximations come from Weierstrass (Durand-Kerner) iteration at growing
//! precision. Each root is then enclosed in the disc `|z - z_i| <= n |W_i|`,
//! where `W_i` is the Weierstrass correction computed exactly; when the discs
//! are pairwise disjoint each contains exactly one root.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::dyadic::{Dyadic, Interval};
use super::poly::IntPoly;

/// Complex dyadic number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CDyadic {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl CDyadic {
    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        CDyadic { re, im }
    }

    pub fn zero() -> Self {
        CDyadic::new(Dyadic::zero(), Dyadic::zero())
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        CDyadic::new(f64_to_dyadic(re), f64_to_dyadic(im))
    }

    pub fn add(&self, o: &CDyadic) -> CDyadic {
        CDyadic::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &CDyadic) -> CDyadic {
        CDyadic::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &CDyadic) -> CDyadic {
        CDyadic::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn mul_int(&self, k: &BigInt) -> CDyadic {
        CDyadic::new(self.re.mul_int(k), self.im.mul_int(k))
    }

    pub fn norm_sqr(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn round(&self, prec: u32) -> CDyadic {
        CDyadic::new(self.re.round_down(prec), self.im.round_down(prec))
    }

    /// Approximate quotient at `prec` bits (not directed).
    pub fn div_approx(&self, o: &CDyadic, prec: u32) -> CDyadic {
        let den = o.norm_sqr();
        let num = CDyadic::new(
            self.re.mul(&o.re).add(&self.im.mul(&o.im)),
            self.im.mul(&o.re).sub(&self.re.mul(&o.im)),
        );
        CDyadic::new(num.re.div(&den, prec, false), num.im.div(&den, prec, false))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

fn f64_to_dyadic(x: f64) -> Dyadic {
    if x == 0.0 || !x.is_finite() {
        return Dyadic::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1i64 << 52), exp - 1075) };
    let m = if x < 0.0 { -m } else { m };
    Dyadic::new(BigInt::from(m), e)
}

/// Closed disc with dyadic centre and radius.
#[derive(Clone, Debug)]
pub struct ComplexBall {
    pub re: Dyadic,
    pub im: Dyadic,
    pub rad: Dyadic,
}

impl ComplexBall {
    pub fn to_cinterval(&self, prec: u32) -> CInterval {
        CInterval {
            re: Interval::new(self.re.sub(&self.rad), self.re.add(&self.rad), prec),
            im: Interval::new(self.im.sub(&self.rad), self.im.add(&self.rad), prec),
        }
    }

    /// Enclosure of `|z|` for all `z` in the disc.
    pub fn abs(&self, prec: u32) -> Interval {
        let c = CDyadic::new(self.re.clone(), self.im.clone());
        let m = Interval::new(c.norm_sqr(), c.norm_sqr(), prec).sqrt();
        let r = Interval::point(self.rad.clone(), prec);
        let lo = m.sub(&r);
        let lo = if lo.lo.signum() < 0 { Dyadic::zero() } else { lo.lo };
        Interval::new(lo, m.add(&r).hi, prec)
    }

    /// The disc certainly meets the real axis only when its centre is within `rad` of it.
    pub fn may_be_real(&self) -> bool {
        self.im.abs() <= self.rad
    }
}

/// Rectangular complex interval.
#[derive(Clone, Debug)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl CInterval {
    pub fn from_real(re: Interval) -> Self {
        let p = re.prec;
        CInterval { re, im: Interval::zero(p) }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        CInterval::from_real(Interval::from_rational(q, prec))
    }

    pub fn one(prec: u32) -> Self {
        CInterval::from_real(Interval::one(prec))
    }

    pub fn zero(prec: u32) -> Self {
        CInterval::from_real(Interval::zero(prec))
    }

    pub fn add(&self, o: &CInterval) -> CInterval {
        CInterval { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CInterval) -> CInterval {
        CInterval { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> CInterval {
        CInterval { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &CInterval) -> CInterval {
        CInterval {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn abs(&self) -> Interval {
        self.re.square().add(&self.im.square()).sqrt()
    }

    /// Evaluate a polynomial with rational coefficients (constant first) by Horner.
    pub fn horner(coeffs: &[BigRational], z: &CInterval, prec: u32) -> CInterval {
        let mut acc = CInterval::zero(prec);
        for c in coeffs.iter().rev() {
            acc = acc.mul(z);
            if !c.is_zero() {
                acc = acc.add(&CInterval::from_rational(c, prec));
            }
        }
        acc
    }
}

fn eval_exact(f: &IntPoly, z: &CDyadic) -> CDyadic {
    let mut acc = CDyadic::zero();
    for c in f.coeffs.iter().rev() {
        acc = acc.mul(z);
        acc.re = acc.re.add(&Dyadic::from_int(c.clone()));
    }
    acc
}

fn initial_guesses(f: &IntPoly) -> Vec<CDyadic> {
    let n = f.degree();
    let lead = f.lead();
    let lf = lead_to_f64(&lead);
    let coeffs: Vec<f64> = f.coeffs.iter().map(|c| lead_to_f64(c) / lf).collect();
    let finite = coeffs.iter().all(|c| c.is_finite());
    // Cauchy radius
    let radius = if finite { 1.0 + coeffs[..n].iter().fold(0.0f64, |m, c| m.max(c.abs())) } else { 2.0 };
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            (radius.min(1e6) * 0.5 * a.cos(), radius.min(1e6) * 0.5 * a.sin())
        })
        .collect();
    if finite {
        // Aberth iterations in f64
        for _ in 0..500 {
            let mut max_step: f64 = 0.0;
            for i in 0..n {
                let (p, dp) = horner_f64(&coeffs, z[i]);
                if p == (0.0, 0.0) {
                    continue;
                }
                let ratio = cdiv(p, dp);
                let mut s = (0.0, 0.0);
                for j in 0..n {
                    if j != i {
                        let d = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                        let inv = cdiv((1.0, 0.0), d);
                        s = (s.0 + inv.0, s.1 + inv.1);
                    }
                }
                let rs = cmul(ratio, s);
                let w = cdiv(ratio, (1.0 - rs.0, -rs.1));
                if w.0.is_finite() && w.1.is_finite() {
                    z[i] = (z[i].0 - w.0, z[i].1 - w.1);
                    max_step = max_step.max((w.0 * w.0 + w.1 * w.1).sqrt());
                }
            }
            if max_step < 1e-15 {
                break;
            }
        }
    }
    z.into_iter().map(|(a, b)| CDyadic::from_f64(a, b)).collect()
}

fn lead_to_f64(c: &BigInt) -> f64 {
    Dyadic::from_int(c.clone()).to_f64()
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

fn horner_f64(c: &[f64], z: (f64, f64)) -> ((f64, f64), (f64, f64)) {
    let mut p = (0.0, 0.0);
    let mut dp = (0.0, 0.0);
    for a in c.iter().rev() {
        dp = cmul(dp, z);
        dp = (dp.0 + p.0, dp.1 + p.1);
        p = cmul(p, z);
        p = (p.0 + a, p.1);
    }
    (p, dp)
}

/// Upper bound for `n |W_i|`, with the Weierstrass correction `W_i` evaluated exactly.
fn inclusion_radius(f: &IntPoly, z: &[CDyadic], i: usize, prec: u32) -> Option<Dyadic> {
    let n = z.len();
    let num = eval_exact(f, &z[i]);
    let mut den = CDyadic::new(Dyadic::from_int(f.lead()), Dyadic::zero());
    for (j, zj) in z.iter().enumerate() {
        if j != i {
            den = den.mul(&z[i].sub(zj));
        }
    }
    let dn = den.norm_sqr();
    if dn.is_zero() {
        return None;
    }
    // |W|^2 = |num|^2 / |den|^2, radius = n |W|
    let w2 = num.norm_sqr().div(&dn, prec, true);
    let w = w2.sqrt(prec, true);
    Some(w.mul_int(&BigInt::from(n)).round_up(prec))
}

/// Certified root discs of a squarefree polynomial, each of radius at most
/// `2^-bits * max(1, |root|)` and pairwise disjoint.
pub fn complex_roots(f: &IntPoly, bits: u32) -> Vec<ComplexBall> {
    let n = f.degree();
    assert!(n >= 1, "constant polynomial has no roots");
    if n == 1 {
        let r = BigRational::new(-&f.coeffs[0], f.coeffs[1].clone());
        let prec = bits + 8;
        let lo = Dyadic::from_rational(&r, prec, false);
        let hi = Dyadic::from_rational(&r, prec, true);
        let rad = hi.sub(&lo);
        return vec![ComplexBall { re: lo, im: Dyadic::zero(), rad }];
    }
    let mut z = initial_guesses(f);
    let mut prec: u32 = 64;
    loop {
        // Weierstrass iteration at the current working precision
        for _ in 0..(60 + 4 * n) {
            let mut converged = true;
            let tol = Dyadic::pow2(-(prec as i64) + 4);
            let mut next = z.clone();
            for i in 0..n {
                let num = eval_exact(f, &z[i]).round(prec + 16);
                let mut den = CDyadic::new(Dyadic::from_int(f.lead()), Dyadic::zero());
                for j in 0..n {
                    if j != i {
                        den = den.mul(&z[i].sub(&z[j])).round(prec + 16);
                    }
                }
                if den.norm_sqr().is_zero() {
                    // coincident approximations; nudge apart
                    next[i] = z[i].add(&CDyadic::new(Dyadic::pow2(-(prec as i64) / 4), Dyadic::pow2(-20)));
                    converged = false;
                    continue;
                }
                let w = num.div_approx(&den, prec + 16);
                let scale = z[i].norm_sqr().max(Dyadic::one());
                if w.norm_sqr() > tol.mul(&tol).mul(&scale) {
                    converged = false;
                }
                next[i] = z[i].sub(&w).round(prec);
            }
            z = next;
            if converged {
                break;
            }
        }
        if let Some(balls) = certify(f, &z, bits, prec) {
            return balls;
        }
        prec *= 2;
        assert!(prec <= 1 << 20, "root isolation failed to converge");
    }
}

fn certify(f: &IntPoly, z: &[CDyadic], bits: u32, prec: u32) -> Option<Vec<ComplexBall>> {
    let n = z.len();
    let mut balls = Vec::with_capacity(n);
    for i in 0..n {
        let rad = inclusion_radius(f, z, i, prec.max(bits + 16))?;
        let mag = z[i].norm_sqr().max(Dyadic::one());
        let target = Dyadic::pow2(-2 * bits as i64).mul(&mag);
        if rad.mul(&rad) > target {
            return None;
        }
        balls.push(ComplexBall { re: z[i].re.clone(), im: z[i].im.clone(), rad });
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = z[i].sub(&z[j]).norm_sqr();
            let r = balls[i].rad.add(&balls[j].rad);
            if r.mul(&r) >= d {
                return None;
            }
        }
    }
    Some(balls)
}

/// Mahler measure `|lead| * prod max(1, |root|)` as an enclosure.
pub fn mahler_measure(f: &IntPoly, prec: u32) -> Interval {
    let lead = Interval::from_int(f.lead().magnitude().clone(), prec);
    if f.degree() == 0 {
        return lead;
    }
    let roots = complex_roots(f, prec);
    roots.iter().fold(lead, |acc, r| acc.mul(&r.abs(prec).max_one()))
}
