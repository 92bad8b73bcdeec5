//! The two solving pipelines and their explicit bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::{
    kappa, kr_bound, kr_bound_sharp, kr_prefactor, nearest_integer_distance, search_multiplier, MultiplierSolution,
    ThetaSystem,
};
use crate::avoidance::{
    avoids_polys, avoids_sublattices, grid_avoid, select_product_poly, sublattice_avoid, AvoidWitness, BoundInputs,
    ProductPoly,
};
use crate::error::{Error, Result};
use crate::exactnum::{FieldElement, Interval, DEFAULT_PREC};
use crate::fieldlat::{c_k_bound, CkBound};
use crate::geometry::{intersect, points_within, successive_minima, sup_norm, LatticePoint};
use crate::problem::{Avoidance, Problem};

const P: u32 = DEFAULT_PREC;

fn two_pow_halves(halves: i64) -> Interval {
    // 2^(halves/2)
    let s2 = Interval::from_int(2, P).sqrt();
    s2.powi(halves)
}

fn rat_pow_half(q: &BigRational, s: usize) -> Interval {
    // q^(s/2)
    Interval::from_rational(&num_traits::pow(q.clone(), s), P + 16).sqrt().with_prec(P)
}

fn eps_factor(eps: &BigRational, ell: usize) -> BigRational {
    num_traits::pow(eps.recip(), ell - 1)
}

/// Itemised bound of the first theorem.
#[derive(Clone, Debug)]
pub struct Theorem1Bound {
    pub kappa: u64,
    pub ell: usize,
    /// `a_K(t, l, s)`.
    pub a_k: Interval,
    /// `sd M_S |D_K(M)|^(s/2)`.
    pub base: Interval,
    /// `(wd)^(3/2) h(B)`.
    pub hb_factor: Interval,
    pub c_k: CkBound,
    /// Everything except `eps^(-l+1)`.
    pub prefactor: Interval,
    /// `eps^(-l+1)`, exact.
    pub eps_factor: BigRational,
    pub value: Interval,
    /// `det^(K+1) h(B)^K c_K eps^(-l+1)`, without the implied constant.
    pub simplified: Interval,
}

pub fn bound_theorem1(p: &Problem, eps: &BigRational) -> Result<Theorem1Bound> {
    let m_s = p.m_s().ok_or_else(|| Error::InvalidInput("the first theorem needs polynomial avoidance".into()))?;
    if !eps.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let (t, ell, s, sd, wd) = (p.t(), p.ell, p.s(), p.sd(), p.wd());
    let kap = kappa(t, ell);
    let two_exp = BigInt::one() << (s * p.k.r1 * kap as usize);
    let a_k = Interval::from_int(kr_prefactor(t, ell) * two_exp, P).mul(&two_pow_halves(sd as i64 - 1));
    let base = rat_pow_half(&p.abs_disc_m(), s).mul_int(&BigInt::from(sd as u64 * m_s));
    let hb_factor = Interval::from_int(wd as i64, P).pow_frac(3, 2).mul(&p.forms.height);
    let c_k = c_k_bound(&p.ideal, kap, sd)?;
    let prefactor = a_k
        .mul(&base.powi(kap as i64 + 1))
        .mul(&hb_factor.powi(kap as i64))
        .mul(&c_k.value);
    let ef = eps_factor(eps, ell);
    let value = prefactor.mul_rational(&ef);
    let det = Interval::from_rational(&p.det.gram_det, P + 16).sqrt().with_prec(P);
    let simplified = det
        .powi(kap as i64 + 1)
        .mul(&p.forms.height.powi(kap as i64))
        .mul(&c_k.value)
        .mul_rational(&ef);
    Ok(Theorem1Bound { kappa: kap, ell, a_k, base, hb_factor, c_k, prefactor, eps_factor: ef, value, simplified })
}

/// Itemised bound of the second theorem.
#[derive(Clone, Debug)]
pub struct Theorem2Bound {
    pub kappa: u64,
    pub ell: usize,
    /// `b_K(t, l, s, w)`.
    pub b_k: Interval,
    pub alpha: FieldElement,
    pub h_alpha: Interval,
    /// `E_alpha(M, Gamma_1, ..., Gamma_m)`.
    pub e_alpha: Interval,
    /// `D = D_1 ... D_m`.
    pub d_total: Interval,
    /// `sum D/D_i - m + 1`.
    pub sum_factor: Interval,
    pub eps_factor: BigRational,
    pub value: Interval,
    /// `(sum D/D_i)^(K+2) det^(K-m+1) h(B)^K c_K eps^(-l+1)`, without the implied constant.
    pub simplified: Interval,
}

fn sublattice_dets(p: &Problem, indices: &[BigInt]) -> (Interval, Vec<Interval>, Interval) {
    let det = Interval::from_rational(&p.det.gram_det, P + 16).sqrt().with_prec(P);
    let di: Vec<Interval> = indices.iter().map(|k| det.mul_int(k)).collect();
    let d = di.iter().fold(Interval::one(P), |a, b| a.mul(b));
    (det, di, d)
}

fn sum_over_others(di: &[Interval]) -> Interval {
    (0..di.len()).fold(Interval::zero(P), |acc, i| {
        let others = di.iter().enumerate().filter(|(j, _)| *j != i).fold(Interval::one(P), |a, (_, b)| a.mul(b));
        acc.add(&others)
    })
}

pub fn bound_theorem2(p: &Problem, eps: &BigRational) -> Result<Theorem2Bound> {
    let Avoidance::Sublattices(gs) = &p.avoidance else {
        return Err(Error::InvalidInput("the second theorem needs sublattice avoidance".into()));
    };
    if !eps.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let (t, ell, s, sd, wd) = (p.t(), p.ell, p.s(), p.sd(), p.wd());
    let m = gs.len();
    let kap = kappa(t, ell);
    let indices: Vec<BigInt> = gs.iter().map(|g| g.index.clone()).collect();
    let (det, di, d_total) = sublattice_dets(p, &indices);
    let plain_sum = sum_over_others(&di);
    let sum_factor = plain_sum.sub(&Interval::from_int(m as i64 - 1, P));
    let c_k = c_k_bound(&p.ideal, kap, sd)?;
    let h_alpha = c_k.height.clone();
    let disc_half = rat_pow_half(&p.abs_disc_m(), s);
    let e_alpha = two_pow_halves((s * p.k.r1) as i64 - 1)
        .mul(&h_alpha.powi(sd as i64 - 1))
        .mul(&disc_half)
        .mul(&sum_factor)
        .add(&d_total.nth_root(sd as u32));
    let two_exp = BigInt::one() << (s * m * p.k.r2);
    let b_k = Interval::from_int(kr_prefactor(t, ell) * two_exp, P)
        .mul(&two_pow_halves(kap as i64))
        .mul(&Interval::from_int(wd as i64, P).sqrt().powi(3 * kap as i64));
    let ef = eps_factor(eps, ell);
    // h(alpha^-1) = h(alpha)
    let inner = h_alpha.mul(&h_alpha).mul(&p.forms.height).mul(&e_alpha).powi(kap as i64);
    let disc_sm = rat_pow_half(&p.abs_disc_m(), s * m);
    let value = b_k
        .mul(&inner)
        .mul(&d_total)
        .mul_rational(&ef)
        .div(&disc_sm)
        .add(&Interval::one(P))
        .mul(&e_alpha);
    let simplified = plain_sum
        .powi(kap as i64 + 2)
        .mul(&det.powi(kap as i64 - m as i64 + 1))
        .mul(&p.forms.height.powi(kap as i64))
        .mul(&c_k.value)
        .mul_rational(&ef);
    Ok(Theorem2Bound {
        kappa: kap,
        ell,
        b_k,
        alpha: c_k.alpha,
        h_alpha,
        e_alpha,
        d_total,
        sum_factor,
        eps_factor: ef,
        value,
        simplified,
    })
}

/// `2^(sd/2) sd (wd)^(3/2) M_S h(alpha)^sd h(alpha^-1) det h(B)`.
pub fn theta_height_bound1(p: &Problem, h_alpha: &Interval, m_s: u64) -> Interval {
    let (sd, wd) = (p.sd(), p.wd());
    let det = Interval::from_rational(&p.det.gram_det, P + 16).sqrt().with_prec(P);
    two_pow_halves(sd as i64)
        .mul_int(&BigInt::from(sd as u64 * m_s))
        .mul(&Interval::from_int(wd as i64, P).pow_frac(3, 2))
        .mul(&h_alpha.powi(sd as i64 + 1))
        .mul(&det)
        .mul(&p.forms.height)
}

/// `(wd)^(3/2) sqrt2 h(alpha) h(alpha^-1) h(B) ((sqrt2 h(alpha))^(sd-1) det (sum D/D_i - m + 1) + D^(1/sd))`.
pub fn theta_height_bound2(p: &Problem, h_alpha: &Interval, indices: &[BigInt]) -> Interval {
    let (sd, wd) = (p.sd(), p.wd());
    let (det, di, d) = sublattice_dets(p, indices);
    let sum = sum_over_others(&di).sub(&Interval::from_int(indices.len() as i64 - 1, P));
    let s2 = Interval::from_int(2, P).sqrt();
    let ht = s2.mul(h_alpha).powi(sd as i64 - 1).mul(&det).mul(&sum).add(&d.nth_root(sd as u32));
    Interval::from_int(wd as i64, P)
        .pow_frac(3, 2)
        .mul(&s2)
        .mul(&h_alpha.powi(2))
        .mul(&p.forms.height)
        .mul(&ht)
}

#[derive(Clone, Debug)]
pub enum TheoremBound {
    First(Theorem1Bound),
    Second(Theorem2Bound),
}

impl TheoremBound {
    pub fn value(&self) -> &Interval {
        match self {
            TheoremBound::First(b) => &b.value,
            TheoremBound::Second(b) => &b.value,
        }
    }
}

/// Everything produced by a solver run.
#[derive(Clone, Debug)]
pub struct Solution {
    pub theorem: u8,
    pub witness: AvoidWitness,
    pub product: Option<ProductPoly>,
    pub thetas: ThetaSystem,
    /// The system actually searched (`D' theta` for the second theorem).
    pub search_system: ThetaSystem,
    /// `q` for the first theorem, `g` for the second.
    pub multiplier: BigInt,
    pub d_prime: Option<BigInt>,
    pub intersection_index: Option<BigInt>,
    pub x_coords: Vec<BigInt>,
    pub x: Vec<FieldElement>,
    pub x_norm: FieldElement,
    pub x_norm_enclosure: Interval,
    pub p: Vec<BigInt>,
    pub residuals: Vec<Interval>,
    pub bound: TheoremBound,
    pub kr_generic: Interval,
    pub kr_sharp: Interval,
    pub search_cap: BigInt,
    pub theta_height_bound: Interval,
    pub theta_heights_within: bool,
}

fn check_independence(p: &Problem) -> Result<()> {
    if !super::independence_check(&p.forms, &p.k1_basis) {
        return Err(Error::IndependenceFailure(
            "1 and the form coefficients are linearly dependent over the field of the lattice entries".into(),
        ));
    }
    Ok(())
}

fn check_degrees(p: &Problem, ts: &ThetaSystem) -> Result<()> {
    if ts.e > p.ell {
        return Err(Error::DegreeExceedsEll { what: "Q(theta)".into(), degree: ts.e, ell: p.ell });
    }
    for (j, &d) in ts.degrees.iter().enumerate() {
        if d > p.ell {
            return Err(Error::DegreeExceedsEll { what: format!("theta_{}", j + 1), degree: d, ell: p.ell });
        }
    }
    Ok(())
}

/// Generic and sharp KR bounds for a system, and the resulting search cap.
pub fn kr_bounds(p: &Problem, ts: &ThetaSystem) -> Result<(Interval, Interval, BigInt)> {
    let generic = kr_bound(ts.t(), ts.ell_min(), &ts.max_height(), &p.epsilon)?;
    let sharp = kr_bound_sharp(ts.t(), ts.e, &ts.c1, &p.epsilon)?;
    let cap = match &p.options.search_cap {
        Some(c) => c.clone(),
        None => {
            let hi = if generic.hi < sharp.hi { &generic.hi } else { &sharp.hi };
            hi.floor()
        }
    };
    Ok((generic, sharp, cap))
}

fn scale_coords(c: &[BigInt], k: &BigInt) -> Vec<BigInt> {
    c.iter().map(|x| x * k).collect()
}

fn check_norm(x_norm: &FieldElement, bound: &Interval, what: &str) -> Result<Interval> {
    let enc = x_norm.evaluate(64);
    if enc.hi > bound.lo {
        return Err(Error::BoundViolation { what: what.into(), value: enc.to_string(), bound: bound.to_string() });
    }
    Ok(enc)
}

/// Lattice point off the algebraic set with `||L_i(x) - a_i|| < eps`.
pub fn solve_theorem1(p: &Problem) -> Result<Solution> {
    let Avoidance::Polynomials(systems) = &p.avoidance else {
        return Err(Error::InvalidInput("the first theorem needs polynomial avoidance".into()));
    };
    check_independence(p)?;
    let bound = bound_theorem1(p, &p.epsilon)?;
    let minima = successive_minima(&p.lattice)?;
    let product = select_product_poly(systems, &p.lattice, &minima)?;
    let inputs = BoundInputs { sd: p.sd(), gram_det: p.det.gram_det.clone(), alpha: bound.c_k.alpha.clone() };
    let witness = grid_avoid(&p.lattice, &product, &minima, &inputs)?;
    let thetas = super::thetas_from_witness(&p.forms, &witness.y_embedded)?;
    check_degrees(p, &thetas)?;
    let (kr_generic, kr_sharp, search_cap) = kr_bounds(p, &thetas)?;
    let MultiplierSolution { n: q, p: pv, residuals } =
        super::kr_search(&thetas.thetas, &p.a, &p.epsilon, &search_cap, p.options.precision_cap)?;
    let x_coords = scale_coords(&witness.y_coords, &q);
    let x = p.lattice.point(&x_coords);
    if !avoids_polys(&x, &product) {
        return Err(Error::BoundViolation {
            what: "avoidance of the scaled witness".into(),
            value: "0".into(),
            bound: "nonzero".into(),
        });
    }
    let x_norm = witness.norm.scale_int(&q.abs());
    let x_norm_enclosure = check_norm(&x_norm, &bound.value, "solution norm against the first theorem bound")?;
    let theta_height_bound = theta_height_bound1(p, &bound.c_k.height, systems.m_s);
    let theta_heights_within = thetas.heights.iter().all(|h| h.hi <= theta_height_bound.lo);
    Ok(Solution {
        theorem: 1,
        witness,
        product: Some(product),
        search_system: thetas.clone(),
        thetas,
        multiplier: q,
        d_prime: None,
        intersection_index: None,
        x_coords,
        x,
        x_norm,
        x_norm_enclosure,
        p: pv,
        residuals,
        bound: TheoremBound::First(bound),
        kr_generic,
        kr_sharp,
        search_cap,
        theta_height_bound,
        theta_heights_within,
    })
}

/// Lattice point outside every sublattice with `||L_i(x) - a_i|| < eps`.
pub fn solve_theorem2(p: &Problem) -> Result<Solution> {
    let Avoidance::Sublattices(gs) = &p.avoidance else {
        return Err(Error::InvalidInput("the second theorem needs sublattice avoidance".into()));
    };
    check_independence(p)?;
    for (i, g) in gs.iter().enumerate() {
        if g.index.is_one() {
            return Err(Error::NoProperSublattice { index: i + 1 });
        }
    }
    let omega = intersect(gs)?;
    let bound = bound_theorem2(p, &p.epsilon)?;
    let inputs = BoundInputs { sd: p.sd(), gram_det: p.det.gram_det.clone(), alpha: bound.alpha.clone() };
    let witness = sublattice_avoid(&p.lattice, gs, &inputs)?;
    let thetas = super::thetas_from_witness(&p.forms, &witness.y_embedded)?;
    check_degrees(p, &thetas)?;

    let d_prime = p.d_prime().expect("sublattice mode");
    // D'^2 = D^2 / det^(2m) must be the square of an integer
    let m = gs.len();
    let d_sq = gs.iter().fold(BigRational::one(), |a, g| {
        a * BigRational::from_integer(&g.index * &g.index) * &p.det.gram_det
    });
    let ratio = d_sq / num_traits::pow(p.det.gram_det.clone(), m);
    if !ratio.is_integer() || ratio.to_integer() != &d_prime * &d_prime {
        return Err(Error::NonIntegerDPrime);
    }

    let field = &p.efield;
    let phi: Vec<FieldElement> = thetas.thetas.iter().map(|th| th.scale_int(&d_prime)).collect();
    let psi: Vec<FieldElement> = thetas
        .thetas
        .iter()
        .zip(&p.a)
        .map(|(th, a)| th - &FieldElement::from_rational(field, a.clone()))
        .collect();
    let search_system = ThetaSystem::new(phi.clone())?;
    let (kr_generic, kr_sharp, search_cap) = kr_bounds(p, &search_system)?;
    let MultiplierSolution { n: g, p: pv, residuals } =
        search_multiplier(&phi, &psi, &p.epsilon, true, &search_cap, p.options.precision_cap)?;
    let mult = &g * &d_prime + BigInt::one();
    let x_coords = scale_coords(&witness.y_coords, &mult);
    if !avoids_sublattices(&x_coords, gs) {
        return Err(Error::BoundViolation {
            what: "avoidance of the scaled witness".into(),
            value: "member".into(),
            bound: "outside every sublattice".into(),
        });
    }
    let x = p.lattice.point(&x_coords);
    let x_norm = witness.norm.scale_int(&mult.abs());
    let x_norm_enclosure = check_norm(&x_norm, &bound.value, "solution norm against the second theorem bound")?;
    let indices: Vec<BigInt> = gs.iter().map(|g| g.index.clone()).collect();
    let theta_height_bound = theta_height_bound2(p, &bound.h_alpha, &indices);
    let theta_heights_within = thetas.heights.iter().all(|h| h.hi <= theta_height_bound.lo);
    Ok(Solution {
        theorem: 2,
        witness,
        product: None,
        thetas,
        search_system,
        multiplier: g,
        d_prime: Some(d_prime),
        intersection_index: Some(omega.index),
        x_coords,
        x,
        x_norm,
        x_norm_enclosure,
        p: pv,
        residuals,
        bound: TheoremBound::Second(bound),
        kr_generic,
        kr_sharp,
        search_cap,
        theta_height_bound,
        theta_heights_within,
    })
}

/// Whether a lattice point satisfies the avoidance condition of the problem.
pub fn point_avoids(p: &Problem, coeffs: &[BigInt], point: &[FieldElement]) -> bool {
    match &p.avoidance {
        Avoidance::Polynomials(s) => s.systems.iter().all(|sys| sys.iter().any(|f| !f.eval(point).is_zero())),
        Avoidance::Sublattices(gs) => avoids_sublattices(coeffs, gs),
    }
}

/// First lattice point (sup-norm order) with sup-norm at most `cap` that avoids
/// the prescribed set and meets every residual condition.
pub fn oracle_min_x(p: &Problem, cap: u64) -> Result<LatticePoint> {
    let radius = FieldElement::from_int(&p.efield, cap.to_i64().unwrap_or(i64::MAX));
    let eps2 = FieldElement::from_rational(&p.efield, &p.epsilon * &p.epsilon);
    for pt in points_within(&p.lattice, &radius)? {
        if !point_avoids(p, &pt.coeffs, &pt.point) {
            continue;
        }
        let vals = p.forms.apply(&pt.point);
        let ok = vals.iter().zip(&p.a).all(|(v, a)| {
            let (_, d) = nearest_integer_distance(&(v - &FieldElement::from_rational(&p.efield, a.clone())));
            (&eps2 - &(&d * &d)).sign() > 0
        });
        if ok {
            debug_assert!(sup_norm(&pt.point) == pt.norm);
            return Ok(pt);
        }
    }
    Err(Error::CapExceeded { cap: cap.to_string() })
}

/// The avoidance witness `y` the solver would use, without the multiplier search.
pub fn avoidance_witness(p: &Problem) -> Result<AvoidWitness> {
    match &p.avoidance {
        Avoidance::Polynomials(systems) => {
            let b = bound_theorem1(p, &p.epsilon)?;
            let minima = successive_minima(&p.lattice)?;
            let product = select_product_poly(systems, &p.lattice, &minima)?;
            let inputs = BoundInputs { sd: p.sd(), gram_det: p.det.gram_det.clone(), alpha: b.c_k.alpha };
            grid_avoid(&p.lattice, &product, &minima, &inputs)
        }
        Avoidance::Sublattices(gs) => {
            let b = bound_theorem2(p, &p.epsilon)?;
            let inputs = BoundInputs { sd: p.sd(), gram_det: p.det.gram_det.clone(), alpha: b.alpha };
            sublattice_avoid(&p.lattice, gs, &inputs)
        }
    }
}
