//! Irreducibility over Q for integer polynomials of small degree.
//!
//! Factor degrees are first constrained by distinct-degree factorization
//! modulo several primes. Surviving degrees are settled by recombining
//! certified complex roots: a candidate factor is accepted only after exact
//! division in Z[x], and rejected once an interval coefficient excludes every
//! integer (or has nonzero imaginary part).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::poly::IntPoly;
use super::roots::{complex_roots, CInterval, ComplexBall};

const PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

type Fp = Vec<u64>;

fn trim(a: &mut Fp) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn rem_p(a: &Fp, b: &Fp, p: u64) -> Fp {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while r.len() > db {
        let k = r.len() - 1;
        let c = r[k] * inv % p;
        let shift = k - db;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn mul_mod(a: &Fp, b: &Fp, m: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem_p(&out, m, p)
}

fn gcd_p(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem_p(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let inv = inv_mod(l, p);
        for x in a.iter_mut() {
            *x = *x * inv % p;
        }
    }
    a
}

fn div_p(a: &Fp, b: &Fp, p: u64) -> Fp {
    let mut r = a.clone();
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let c = r[k] * inv % p;
        let shift = k - db;
        q[shift] = c;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    q
}

fn reduce_mod(f: &IntPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    let mut v: Fp = f.coeffs.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    trim(&mut v);
    v
}

fn derivative_p(f: &Fp, p: u64) -> Fp {
    let mut d: Fp = f.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect();
    trim(&mut d);
    d
}

/// Degrees of the irreducible factors of a squarefree polynomial over F_p.
fn ddf_degrees(f: &Fp, p: u64) -> Vec<usize> {
    let mut degs = Vec::new();
    let mut g = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = rem_p(&x, &g, p);
    let mut i = 1;
    while g.len() > 2 * i {
        // h = x^(p^i) mod g
        let mut acc: Fp = vec![1];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, &g, p);
            }
            base = mul_mod(&base, &base, &g, p);
            e >>= 1;
        }
        h = acc;
        let mut hx = h.clone();
        if hx.len() < 2 {
            hx.resize(2, 0);
        }
        hx[1] = (hx[1] + p - 1) % p;
        trim(&mut hx);
        let d = gcd_p(&g, &hx, p);
        if d.len() > 1 {
            let k = (d.len() - 1) / i;
            degs.extend(std::iter::repeat_n(i, k));
            g = div_p(&g, &d, p);
            h = rem_p(&h, &g, p);
        }
        i += 1;
    }
    if g.len() > 1 {
        degs.push(g.len() - 1);
    }
    degs
}

fn subset_sums(degs: &[usize]) -> BTreeSet<usize> {
    let mut s = BTreeSet::from([0usize]);
    for &d in degs {
        let add: Vec<usize> = s.iter().map(|x| x + d).collect();
        s.extend(add);
    }
    s
}

/// Monic associate `lead^(n-1) f(x / lead)`; irreducible iff `f` is (for primitive `f`).
fn monicize(f: &IntPoly) -> IntPoly {
    let a = f.lead();
    if a.is_one() {
        return f.clone();
    }
    let n = f.degree();
    let mut c = Vec::with_capacity(n + 1);
    let mut pw = BigInt::one();
    for i in (0..=n).rev() {
        c.push(&f.coeffs[i] * &pw);
        if i > 0 {
            pw *= &a;
        }
    }
    c.reverse();
    // coefficient i gets a^(n-1-i); the top coefficient is divided by a
    let mut out = Vec::with_capacity(n + 1);
    for (i, ci) in c.into_iter().enumerate() {
        if i == n {
            out.push(BigInt::one());
        } else {
            out.push(ci / &a);
        }
    }
    IntPoly::new(out)
}

/// Possible degrees of a proper factor allowed by modular degree patterns.
pub fn allowed_factor_degrees(f: &IntPoly) -> BTreeSet<usize> {
    let n = f.degree();
    let mut allowed: BTreeSet<usize> = (1..n).collect();
    let mut used = 0;
    for &p in PRIMES.iter() {
        let fp = reduce_mod(f, p);
        if fp.len() != n + 1 {
            continue;
        }
        let g = gcd_p(&fp, &derivative_p(&fp, p), p);
        if g.len() > 1 {
            continue;
        }
        let sums = subset_sums(&ddf_degrees(&fp, p));
        allowed.retain(|d| sums.contains(d));
        used += 1;
        if allowed.is_empty() || used >= 8 {
            break;
        }
    }
    allowed
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

enum Candidate {
    Excluded,
    Factor,
    Undecided,
}

fn try_subset(f: &IntPoly, balls: &[ComplexBall], subset: &[usize], prec: u32) -> Candidate {
    // product of (x - r_i), coefficients constant first
    let mut coeffs = vec![CInterval::one(prec)];
    for &i in subset {
        let r = balls[i].to_cinterval(prec);
        let mut next = vec![CInterval::zero(prec); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j + 1] = next[j + 1].add(c);
            next[j] = next[j].sub(&c.mul(&r));
        }
        coeffs = next;
    }
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        if !c.im.contains_zero() {
            return Candidate::Excluded;
        }
        let (lo, hi) = c.re.integers_inside();
        if lo > hi {
            return Candidate::Excluded;
        }
        ints.push(lo);
    }
    let g = IntPoly::new(ints);
    if f.div_exact(&g).is_some() {
        Candidate::Factor
    } else {
        Candidate::Undecided
    }
}

/// Decide irreducibility over Q of a nonconstant integer polynomial.
pub fn is_irreducible(f: &IntPoly) -> bool {
    let n = f.degree();
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if !f.content().abs().is_one() {
        return false;
    }
    let fr = f.to_rat();
    if fr.gcd(&fr.derivative()).degree() > 0 {
        return false;
    }
    let g = monicize(f);
    let allowed: Vec<usize> = allowed_factor_degrees(&g).into_iter().filter(|&k| 2 * k <= n).collect();
    if allowed.is_empty() {
        return true;
    }
    let candidates: Vec<Vec<usize>> = allowed.iter().flat_map(|&k| subsets(n, k)).collect();
    let mut bits = 64u32;
    loop {
        let balls = complex_roots(&g, bits);
        let prec = bits + 64;
        let mut undecided = false;
        for s in &candidates {
            match try_subset(&g, &balls, s, prec) {
                Candidate::Factor => return false,
                Candidate::Excluded => {}
                Candidate::Undecided => undecided = true,
            }
        }
        if !undecided {
            return true;
        }
        bits *= 2;
        assert!(bits <= 1 << 16, "irreducibility test did not settle");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert!(is_irreducible(&IntPoly::from_i64(&[-2, 0, 1])));
        assert!(!is_irreducible(&IntPoly::from_i64(&[-1, 0, 1])));
        assert!(is_irreducible(&IntPoly::from_i64(&[1, 0, -10, 0, 1])));
        // x^4 + 4 = (x^2+2x+2)(x^2-2x+2)
        assert!(!is_irreducible(&IntPoly::from_i64(&[4, 0, 0, 0, 1])));
        // x^4 + 1 is reducible mod every prime but irreducible over Q
        assert!(is_irreducible(&IntPoly::from_i64(&[1, 0, 0, 0, 1])));
        assert!(is_irreducible(&IntPoly::from_i64(&[-1, 0, 3])));
        assert!(!is_irreducible(&IntPoly::from_i64(&[-1, 0, 4])));
        assert!(!is_irreducible(&IntPoly::from_i64(&[0, 0, 1])));
    }

    #[test]
    fn products_are_reducible() {
        let a = IntPoly::from_i64(&[-3, 0, 0, 1]);
        let b = IntPoly::from_i64(&[5, 1, 0, 0, 1]);
        assert!(is_irreducible(&a));
        assert!(is_irreducible(&b));
        assert!(!is_irreducible(&a.mul(&b)));
    }

    #[test]
    fn cyclotomic_16() {
        // x^8 + 1
        assert!(is_irreducible(&IntPoly::from_i64(&[1, 0, 0, 0, 0, 0, 0, 0, 1])));
    }

    #[test]
    fn monicize_roundtrip() {
        let f = IntPoly::from_i64(&[-1, 0, 3]);
        assert_eq!(monicize(&f), IntPoly::from_i64(&[-3, 0, 1]));
    }
}
