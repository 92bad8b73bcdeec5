//! Effective inhomogeneous Kronecker approximation: the values `theta_i`,
//! the Liouville constant, the KR bound and the certified multiplier search.

mod theorems;

pub use theorems::{
    avoidance_witness, bound_theorem1, bound_theorem2, kr_bounds, oracle_min_x, point_avoids, solve_theorem1, solve_theorem2,
    theta_height_bound1, theta_height_bound2, Solution, Theorem1Bound, Theorem2Bound, TheoremBound,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::height::{vector_height, weil_height_prec};
use crate::exactnum::{
    generated_subalgebra, minimal_polynomial, rational_rank, Dyadic, FieldElement, IntPoly, Interval, DEFAULT_PREC,
};

/// Precision cap for residual certification.
pub const PRECISION_CAP: u32 = 1 << 14;

const SEARCH_BITS: u32 = 128;
const BLOCK: u64 = 4096;

/// The linear forms `L_i(x) = sum_j b_ij x_j` with their heights.
#[derive(Clone, Debug)]
pub struct FormMatrix {
    pub rows: Vec<Vec<FieldElement>>,
    pub row_heights: Vec<Interval>,
    /// `h(B)`, the height of all entries taken together.
    pub height: Interval,
}

impl FormMatrix {
    pub fn new(rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::InvalidInput("at least one linear form is required".into()));
        };
        let n = first.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("all linear forms need the same positive number of coefficients".into()));
        }
        let row_heights = rows.iter().map(|r| vector_height(r, DEFAULT_PREC)).collect();
        let all: Vec<FieldElement> = rows.iter().flatten().cloned().collect();
        let height = vector_height(&all, DEFAULT_PREC);
        Ok(FormMatrix { rows, row_heights, height })
    }

    pub fn t(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn entries(&self) -> Vec<FieldElement> {
        self.rows.iter().flatten().cloned().collect()
    }

    /// `L_i(x)` for every form.
    pub fn apply(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(x).fold(FieldElement::zero(x[0].field()), |acc, (b, y)| &acc + &(b * y)))
            .collect()
    }
}

/// Whether `1, b_11, ..., b_t(wd)` are linearly independent over the field
/// spanned by `k1_basis`, by exact Q-rank of all products.
pub fn independence_check(b: &FormMatrix, k1_basis: &[FieldElement]) -> bool {
    let Some(first) = k1_basis.first() else { return false };
    let one = FieldElement::one(first.field());
    let betas: Vec<FieldElement> = std::iter::once(one).chain(b.entries()).collect();
    let prods: Vec<FieldElement> = k1_basis.iter().flat_map(|k| betas.iter().map(move |beta| k * beta)).collect();
    rational_rank(&prods) == betas.len() * k1_basis.len()
}

/// The numbers `theta_i = L_i(y)` with the data of the Liouville inequality.
#[derive(Clone, Debug)]
pub struct ThetaSystem {
    pub thetas: Vec<FieldElement>,
    pub minpolys: Vec<IntPoly>,
    pub degrees: Vec<usize>,
    /// Degree of `Q(theta_1, ..., theta_t)`.
    pub e: usize,
    pub heights: Vec<Interval>,
    /// lcm of the leading coefficients of the minimal polynomials.
    pub a_lcm: BigInt,
    pub c1: Interval,
}

impl ThetaSystem {
    pub fn new(thetas: Vec<FieldElement>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::InvalidInput("empty theta system".into()));
        }
        for (i, th) in thetas.iter().enumerate() {
            if th.is_zero() {
                return Err(Error::ZeroTheta { form: i + 1 });
            }
        }
        let field = thetas[0].field().clone();
        let with_one: Vec<FieldElement> = std::iter::once(FieldElement::one(&field)).chain(thetas.iter().cloned()).collect();
        if rational_rank(&with_one) != with_one.len() {
            return Err(Error::IndependenceFailure("1, theta_1, ..., theta_t are linearly dependent over Q".into()));
        }
        let minpolys: Vec<IntPoly> = thetas.iter().map(minimal_polynomial).collect();
        let degrees: Vec<usize> = minpolys.iter().map(|f| f.degree()).collect();
        let e = generated_subalgebra(&field, &thetas).len();
        let heights: Vec<Interval> = thetas.iter().map(|th| weil_height_prec(th, DEFAULT_PREC)).collect();
        let a_lcm = minpolys.iter().fold(BigInt::one(), |acc, f| acc.lcm(&f.lead().abs()));
        let c1 = c1_constant(&heights, &degrees, e);
        let a_bound = heights
            .iter()
            .zip(&degrees)
            .fold(Interval::one(DEFAULT_PREC), |acc, (h, &d)| acc.mul(&h.mul_int(&2.into()).powi(d as i64)));
        if Interval::from_int(a_lcm.clone(), DEFAULT_PREC).lo > a_bound.hi {
            return Err(Error::BoundViolation {
                what: "leading coefficient lcm".into(),
                value: a_lcm.to_string(),
                bound: a_bound.to_string(),
            });
        }
        Ok(ThetaSystem { thetas, minpolys, degrees, e, heights, a_lcm, c1 })
    }

    pub fn t(&self) -> usize {
        self.thetas.len()
    }

    /// Upper end of `max h(theta_j)`.
    pub fn max_height(&self) -> Interval {
        self.heights.iter().skip(1).fold(self.heights[0].clone(), |a, b| a.max(b))
    }

    /// `max(e, d_1, ..., d_t)`, the smallest admissible `l` in the KR bound.
    pub fn ell_min(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(1).max(self.e)
    }
}

/// `theta_i = L_i(y)`; fails when some `theta_i` vanishes.
pub fn thetas_from_witness(b: &FormMatrix, y: &[FieldElement]) -> Result<ThetaSystem> {
    if y.len() != b.ncols() {
        return Err(Error::InvalidInput(format!("witness has {} coordinates, forms have {}", y.len(), b.ncols())));
    }
    ThetaSystem::new(b.apply(y))
}

/// `C_1 = ((t+1) max h_j^(d_j))^(e-1) prod (2 h_j)^(e d_j)`.
pub fn c1_constant(heights: &[Interval], degrees: &[usize], e: usize) -> Interval {
    let t = heights.len();
    let max_hd = heights
        .iter()
        .zip(degrees)
        .map(|(h, &d)| h.powi(d as i64))
        .reduce(|a, b| a.max(&b))
        .expect("nonempty");
    let first = max_hd.mul_int(&BigInt::from(t + 1)).powi(e as i64 - 1);
    heights
        .iter()
        .zip(degrees)
        .fold(first, |acc, (h, &d)| acc.mul(&h.mul_int(&2.into()).powi((e * d) as i64)))
}

/// Distance to the nearest integer of an exact real, with that integer.
pub fn nearest_integer_distance(v: &FieldElement) -> (BigInt, FieldElement) {
    let enc = v.enclose(64);
    let half = BigRational::new(1.into(), 2.into());
    let field = v.field();
    let mut p = round_interval(&enc);
    loop {
        let d = v - &FieldElement::from_rational(field, BigRational::from_integer(p.clone()) + &half);
        if d.sign() >= 0 {
            p += 1;
            continue;
        }
        let d = v - &FieldElement::from_rational(field, BigRational::from_integer(p.clone()) - &half);
        if d.sign() < 0 {
            p -= 1;
            continue;
        }
        break;
    }
    let dist = (v - &FieldElement::from_bigint(field, &p)).abs();
    (p, dist)
}

/// Liouville lower bound `C_1^-1 |m|^(-e+1)` and the certified value of `||m . theta||`.
#[derive(Clone, Debug)]
pub struct LiouvilleCheck {
    pub lower_bound: Interval,
    pub distance: FieldElement,
    pub distance_enclosure: Interval,
}

pub fn liouville_lower(ts: &ThetaSystem, m: &[BigInt]) -> Result<LiouvilleCheck> {
    if m.len() != ts.t() {
        return Err(Error::InvalidInput("multiplier vector length differs from t".into()));
    }
    let norm = m.iter().map(|x| x.abs()).max().unwrap_or_default();
    if norm.is_zero() {
        return Err(Error::InvalidInput("the Liouville bound needs a nonzero integer vector".into()));
    }
    let field = ts.thetas[0].field();
    let v = ts.thetas.iter().zip(m).fold(FieldElement::zero(field), |acc, (th, k)| &acc + &th.scale_int(k));
    let (_, distance) = nearest_integer_distance(&v);
    let lower_bound = ts.c1.mul(&Interval::from_int(norm, DEFAULT_PREC).powi(ts.e as i64 - 1)).recip();
    Ok(LiouvilleCheck { distance_enclosure: distance.evaluate(64), lower_bound, distance })
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn eps_power(eps: &BigRational, exp: i64) -> BigRational {
    if exp >= 0 {
        num_traits::pow(eps.clone(), exp as usize)
    } else {
        num_traits::pow(eps.recip(), (-exp) as usize)
    }
}

/// `2^(l t (l-1)) (t+1)^(3l-1) (t!)^(2l)`.
pub fn kr_prefactor(t: usize, ell: usize) -> BigInt {
    let tf = factorial(t);
    (BigInt::one() << (ell * t * (ell - 1))) * num_traits::pow(BigInt::from(t + 1), 3 * ell - 1) * num_traits::pow(tf, 2 * ell)
}

/// The exponent `l^2 (t+1) - l`.
pub fn kappa(t: usize, ell: usize) -> u64 {
    (ell * ell * (t + 1) - ell) as u64
}

/// `2^(l t (l-1)) (t+1)^(3l-1) (t!)^(2l) H^(l^2(t+1)-l) eps^(-l+1)`.
pub fn kr_bound(t: usize, ell: usize, h: &Interval, eps: &BigRational) -> Result<Interval> {
    if t == 0 || ell == 0 {
        return Err(Error::InvalidInput("t and l must be positive".into()));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let pre = Interval::from_int(kr_prefactor(t, ell), DEFAULT_PREC);
    let e = eps_power(eps, 1 - ell as i64);
    Ok(pre.mul(&h.powi(kappa(t, ell) as i64)).mul_rational(&e))
}

/// `2^(-e t) ((t+1)!)^(2e) C_1 eps^(-e+1)`.
pub fn kr_bound_sharp(t: usize, e: usize, c1: &Interval, eps: &BigRational) -> Result<Interval> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let f = num_traits::pow(factorial(t + 1), 2 * e);
    let q = BigRational::new(f, BigInt::one() << (e * t)) * eps_power(eps, 1 - e as i64);
    Ok(c1.mul_rational(&q))
}

/// A certified solution of `||n phi_i + psi_i|| < eps`.
#[derive(Clone, Debug)]
pub struct MultiplierSolution {
    pub n: BigInt,
    pub p: Vec<BigInt>,
    /// Enclosures of `|n phi_i + psi_i - p_i|`.
    pub residuals: Vec<Interval>,
}

enum Verdict {
    Pass(Vec<BigInt>, Vec<Interval>),
    Fail,
    Indeterminate,
}

/// Integer nearest to the midpoint of `i`.
fn round_interval(i: &Interval) -> BigInt {
    let mid = i.lo.add(&i.hi).shl(-1);
    mid.add(&Dyadic::pow2(-1)).floor()
}

fn check_multiplier(
    n: i64,
    phi: &[FieldElement],
    psi: &[FieldElement],
    enc: &[(Interval, Interval)],
    eps: &Interval,
    prec_cap: u32,
) -> Verdict {
    let nb = BigInt::from(n);
    let mut ps = Vec::with_capacity(phi.len());
    let mut res = Vec::with_capacity(phi.len());
    for i in 0..phi.len() {
        let (pe, se) = &enc[i];
        let v = pe.mul_int(&nb).add(se);
        match residual_verdict(&v, eps) {
            Some(Some((p, r))) => {
                ps.push(p);
                res.push(r);
            }
            Some(None) => return Verdict::Fail,
            None => {
                let exact = &phi[i].scale_int(&nb) + &psi[i];
                let mut bits = SEARCH_BITS * 2;
                loop {
                    match residual_verdict(&exact.enclose(bits), eps) {
                        Some(Some((p, r))) => {
                            ps.push(p);
                            res.push(r);
                            break;
                        }
                        Some(None) => return Verdict::Fail,
                        None if bits >= prec_cap => return Verdict::Indeterminate,
                        None => bits *= 2,
                    }
                }
            }
        }
    }
    Verdict::Pass(ps, res)
}

/// `Some(Some)` certified `< eps`, `Some(None)` certified `>= eps`, `None` undecided.
fn residual_verdict(v: &Interval, eps: &Interval) -> Option<Option<(BigInt, Interval)>> {
    let p = round_interval(v);
    let r = v.sub(&Interval::from_int(p.clone(), v.prec)).abs();
    if r.hi < eps.lo {
        return Some(Some((p, r)));
    }
    // every point of v is at least r.lo from p and 1 - r.hi from any other integer
    let other = Dyadic::one().sub(&r.hi);
    if r.lo.clone().min(other) >= eps.hi {
        return Some(None);
    }
    None
}

/// Multipliers in the order `1, -1, 2, -2, ...` (after `0` when allowed).
fn multiplier_at(idx: u64, include_zero: bool) -> i64 {
    let k = if include_zero {
        if idx == 0 {
            return 0;
        }
        idx - 1
    } else {
        idx
    };
    let mag = (k / 2 + 1) as i64;
    if k % 2 == 0 {
        mag
    } else {
        -mag
    }
}

/// Smallest `|n|` (positive first) with `||n phi_i + psi_i|| < eps` for all `i`.
pub fn search_multiplier(
    phi: &[FieldElement],
    psi: &[FieldElement],
    eps: &BigRational,
    include_zero: bool,
    n_max: &BigInt,
    prec_cap: u32,
) -> Result<MultiplierSolution> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    if phi.len() != psi.len() || phi.is_empty() {
        return Err(Error::InvalidInput("search needs matching nonempty systems".into()));
    }
    let enc: Vec<(Interval, Interval)> =
        phi.iter().zip(psi).map(|(a, b)| (a.enclose(SEARCH_BITS), b.enclose(SEARCH_BITS))).collect();
    let eps_i = Interval::from_rational(eps, SEARCH_BITS);
    let max_mag = n_max.to_i64().unwrap_or(i64::MAX / 4).max(0);
    let total = 2 * max_mag as u64 + u64::from(include_zero);
    let mut start = 0u64;
    while start < total {
        let end = (start + BLOCK).min(total);
        let verdicts: Vec<(i64, Verdict)> = (start..end)
            .into_par_iter()
            .map(|i| {
                let n = multiplier_at(i, include_zero);
                (n, check_multiplier(n, phi, psi, &enc, &eps_i, prec_cap))
            })
            .collect();
        for (n, v) in verdicts {
            match v {
                Verdict::Pass(p, residuals) => return Ok(MultiplierSolution { n: n.into(), p, residuals }),
                Verdict::Indeterminate => return Err(Error::BoundaryIndeterminate { multiplier: n.to_string() }),
                Verdict::Fail => {}
            }
        }
        start = end;
    }
    Err(Error::SearchExhausted { cap: n_max.to_string() })
}

/// Smallest nonzero `|q|` with `||q theta_j - a_j|| < eps`, `p_j` the nearest integers.
pub fn kr_search(
    thetas: &[FieldElement],
    a: &[BigRational],
    eps: &BigRational,
    q_max: &BigInt,
    prec_cap: u32,
) -> Result<MultiplierSolution> {
    if thetas.len() != a.len() {
        return Err(Error::InvalidInput("target length differs from t".into()));
    }
    let psi: Vec<FieldElement> =
        thetas.iter().zip(a).map(|(th, ai)| FieldElement::from_rational(th.field(), -ai.clone())).collect();
    search_multiplier(thetas, &psi, eps, false, q_max, prec_cap)
}

/// Exhaustive scan in the same order as [`kr_search`], by exact sign decisions.
pub fn oracle_min_q(thetas: &[FieldElement], a: &[BigRational], eps: &BigRational, cap: u64) -> Result<i64> {
    let field = thetas[0].field();
    let eps2 = FieldElement::from_rational(field, eps * eps);
    for idx in 0..2 * cap {
        let q = multiplier_at(idx, false);
        let ok = thetas.iter().zip(a).all(|(th, ai)| {
            let v = &th.scale_int(&q.into()) - &FieldElement::from_rational(field, ai.clone());
            let (_, d) = nearest_integer_distance(&v);
            (&eps2 - &(&d * &d)).sign() > 0
        });
        if ok {
            return Ok(q);
        }
    }
    Err(Error::CapExceeded { cap: cap.to_string() })
}
