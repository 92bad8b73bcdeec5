//! Exact sup-norm enumeration of lattice points and successive minima.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::linalg::{self, EchelonBasis};
use crate::exactnum::{FieldElement, Interval};
use crate::fieldlat::EmbeddedLattice;

/// Largest lattice rank handled by enumeration.
pub const RANK_CAP: usize = 10;

/// Largest coefficient box scanned in one pass.
const BOX_CAP: u128 = 40_000_000;

const FILTER_BITS: u32 = 96;

/// Exact comparison of two real field elements.
pub fn cmp_real(a: &FieldElement, b: &FieldElement) -> Ordering {
    (a - b).sign().cmp(&0)
}

/// Exact sup-norm `max_i |v_i|`.
pub fn sup_norm(v: &[FieldElement]) -> FieldElement {
    let mut best = v[0].abs();
    for x in &v[1..] {
        let a = x.abs();
        if cmp_real(&a, &best) == Ordering::Greater {
            best = a;
        }
    }
    best
}

/// Enclosure of the sup-norm.
pub fn sup_norm_enclosure(v: &[FieldElement], bits: u32) -> Interval {
    v.iter()
        .map(|x| x.evaluate(bits).abs())
        .reduce(|a, b| a.max(&b))
        .unwrap_or_else(|| Interval::zero(bits))
}

/// A lattice point with its coordinates, embedded image and exact sup-norm.
#[derive(Clone, Debug)]
pub struct LatticePoint {
    pub coeffs: Vec<BigInt>,
    pub point: Vec<FieldElement>,
    pub norm: FieldElement,
}

impl LatticePoint {
    pub fn norm_enclosure(&self, bits: u32) -> Interval {
        self.norm.evaluate(bits)
    }
}

fn l1(c: &[BigInt]) -> BigInt {
    c.iter().map(|x| x.abs()).sum()
}

/// Deterministic order: sup-norm, then the L1 norm of the coefficients, then
/// coefficient vectors in descending lexicographic order.
pub fn point_order(a: &LatticePoint, b: &LatticePoint) -> Ordering {
    cmp_real(&a.norm, &b.norm).then_with(|| coeff_order(&a.coeffs, &b.coeffs))
}

/// Tie-break on coefficient vectors alone.
pub fn coeff_order(a: &[BigInt], b: &[BigInt]) -> Ordering {
    l1(a).cmp(&l1(b)).then_with(|| b.cmp(a))
}

struct BoxBounds {
    // |c_i| <= rowsum_i * R for every point with sup-norm <= R
    rowsums: Vec<Interval>,
    col_enclosures: Vec<Vec<Interval>>,
}

fn box_bounds(l: &EmbeddedLattice) -> BoxBounds {
    let n = l.rank();
    let rows = l.rows();
    let mut eb = EchelonBasis::new();
    let mut picked = Vec::new();
    for r in &rows {
        if eb.insert(r) {
            picked.push(r.clone());
            if picked.len() == n {
                break;
            }
        }
    }
    let inv = linalg::inverse(&picked).expect("basis has full rank");
    let rowsums = inv
        .iter()
        .map(|r| r.iter().fold(Interval::zero(64), |acc, x| acc.add(&x.evaluate(64).abs())))
        .collect();
    let col_enclosures =
        l.columns().iter().map(|c| c.iter().map(|x| x.evaluate(FILTER_BITS)).collect()).collect();
    BoxBounds { rowsums, col_enclosures }
}

fn coefficient_limits(bb: &BoxBounds, radius: &FieldElement) -> Result<Vec<i64>> {
    let r = radius.evaluate(64).hi;
    let mut total: u128 = 1;
    let mut lims = Vec::with_capacity(bb.rowsums.len());
    for rs in &bb.rowsums {
        let b = rs.hi.mul(&r).floor();
        let b = b.to_i64().ok_or_else(|| Error::CapExceeded { cap: "enumeration box".into() })?;
        total = total.saturating_mul(2 * b as u128 + 1);
        if total > BOX_CAP {
            return Err(Error::CapExceeded { cap: format!("enumeration box of {total} points") });
        }
        lims.push(b);
    }
    Ok(lims)
}

fn box_points(lims: &[i64], first: i64) -> Vec<Vec<i64>> {
    let n = lims.len();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    cur[0] = first;
    if n == 1 {
        out.push(cur);
        return out;
    }
    for (i, c) in cur.iter_mut().enumerate().skip(1) {
        *c = -lims[i];
    }
    loop {
        out.push(cur.clone());
        let mut i = n - 1;
        loop {
            if cur[i] < lims[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = -lims[i];
            i -= 1;
            if i == 0 {
                return out;
            }
        }
    }
}

/// All nonzero lattice points with sup-norm at most `radius`, in [`point_order`].
pub fn points_within(l: &EmbeddedLattice, radius: &FieldElement) -> Result<Vec<LatticePoint>> {
    if l.rank() > RANK_CAP {
        return Err(Error::RankCapExceeded { rank: l.rank(), cap: RANK_CAP });
    }
    let bb = box_bounds(l);
    points_in_box(l, &bb, radius)
}

fn points_in_box(l: &EmbeddedLattice, bb: &BoxBounds, radius: &FieldElement) -> Result<Vec<LatticePoint>> {
    let lims = coefficient_limits(bb, radius)?;
    let r_hi = radius.evaluate(FILTER_BITS).hi;
    let firsts: Vec<i64> = (-lims[0]..=lims[0]).collect();
    let mut pts: Vec<LatticePoint> = firsts
        .par_iter()
        .flat_map_iter(|&f| {
            box_points(&lims, f).into_iter().filter_map(|c| {
                if c.iter().all(|&x| x == 0) {
                    return None;
                }
                // cheap rejection on enclosures
                let dim = bb.col_enclosures[0].len();
                for row in 0..dim {
                    let mut acc = Interval::zero(FILTER_BITS);
                    for (k, col) in c.iter().zip(&bb.col_enclosures) {
                        if *k != 0 {
                            acc = acc.add(&col[row].mul_int(&BigInt::from(*k)));
                        }
                    }
                    if acc.abs().lo > r_hi {
                        return None;
                    }
                }
                let coeffs: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
                let point = l.point(&coeffs);
                let norm = sup_norm(&point);
                if cmp_real(&norm, radius) == Ordering::Greater {
                    return None;
                }
                Some(LatticePoint { coeffs, point, norm })
            })
        })
        .collect();
    pts.sort_by(point_order);
    Ok(pts)
}

fn min_column_norm(l: &EmbeddedLattice) -> FieldElement {
    let norms: Vec<FieldElement> = l.columns().iter().map(|c| sup_norm(c)).collect();
    norms.into_iter().reduce(|a, b| if cmp_real(&b, &a) == Ordering::Less { b } else { a }).unwrap()
}

fn max_column_norm(l: &EmbeddedLattice) -> FieldElement {
    let norms: Vec<FieldElement> = l.columns().iter().map(|c| sup_norm(c)).collect();
    norms.into_iter().reduce(|a, b| if cmp_real(&b, &a) == Ordering::Greater { b } else { a }).unwrap()
}

/// First lattice point (in [`point_order`]) within `radius` satisfying `pred`.
///
/// The predicate may fail; the first failure in order is returned.
pub fn enumerate_by_norm<P>(l: &EmbeddedLattice, radius: &FieldElement, pred: P) -> Result<LatticePoint>
where
    P: Fn(&LatticePoint) -> Result<bool> + Sync,
{
    if radius.sign() <= 0 {
        return Err(Error::InvalidInput("enumeration radius must be positive".into()));
    }
    if l.rank() > RANK_CAP {
        return Err(Error::RankCapExceeded { rank: l.rank(), cap: RANK_CAP });
    }
    let bb = box_bounds(l);
    let start = min_column_norm(l);
    let mut r = if cmp_real(&start, radius) == Ordering::Less { start } else { radius.clone() };
    let mut done: Option<FieldElement> = None;
    loop {
        let pts = points_in_box(l, &bb, &r)?;
        let fresh: Vec<&LatticePoint> = pts
            .iter()
            .filter(|p| done.as_ref().is_none_or(|d| cmp_real(&p.norm, d) == Ordering::Greater))
            .collect();
        for block in fresh.chunks(256) {
            let res: Vec<Result<bool>> = block.par_iter().map(|p| pred(p)).collect();
            for (p, r) in block.iter().zip(res) {
                if r? {
                    return Ok((*p).clone());
                }
            }
        }
        if cmp_real(&r, radius) != Ordering::Less {
            return Err(Error::NotFoundWithinRadius { radius: radius_text(radius) });
        }
        done = Some(r.clone());
        let doubled = r.scale(&BigRational::from_integer(2.into()));
        r = if cmp_real(&doubled, radius) == Ordering::Less { doubled } else { radius.clone() };
    }
}

fn radius_text(r: &FieldElement) -> String {
    match r.as_rational() {
        Some(q) => crate::exactnum::format_rational(&q),
        None => format!("{}", r.evaluate(32)),
    }
}

/// The first `count` nonzero lattice points in [`point_order`].
pub fn shortest_points(l: &EmbeddedLattice, count: usize) -> Result<Vec<LatticePoint>> {
    if l.rank() > RANK_CAP {
        return Err(Error::RankCapExceeded { rank: l.rank(), cap: RANK_CAP });
    }
    let bb = box_bounds(l);
    let mut r = min_column_norm(l);
    loop {
        let pts = points_in_box(l, &bb, &r)?;
        // every point within r is present, so a prefix of length `count` is final
        if pts.len() >= count {
            return Ok(pts.into_iter().take(count).collect());
        }
        r = r.scale(&BigRational::from_integer(2.into()));
    }
}

/// Sup-norm successive minima with minimizing vectors.
#[derive(Clone, Debug)]
pub struct MinimaResult {
    pub lambdas: Vec<FieldElement>,
    pub enclosures: Vec<Interval>,
    pub vectors: Vec<Vec<BigInt>>,
}

pub fn successive_minima(l: &EmbeddedLattice) -> Result<MinimaResult> {
    let n = l.rank();
    if n > RANK_CAP {
        return Err(Error::RankCapExceeded { rank: n, cap: RANK_CAP });
    }
    let bb = box_bounds(l);
    let cap = max_column_norm(l);
    let mut r = min_column_norm(l);
    loop {
        let pts = points_in_box(l, &bb, &r)?;
        let mut eb: EchelonBasis<BigRational> = EchelonBasis::new();
        let mut chosen: Vec<&LatticePoint> = Vec::new();
        for p in &pts {
            if eb.insert(&linalg::int_to_rat(&p.coeffs)) {
                chosen.push(p);
                if chosen.len() == n {
                    break;
                }
            }
        }
        if chosen.len() == n {
            return Ok(MinimaResult {
                lambdas: chosen.iter().map(|p| p.norm.clone()).collect(),
                enclosures: chosen.iter().map(|p| p.norm_enclosure(64)).collect(),
                vectors: chosen.iter().map(|p| p.coeffs.clone()).collect(),
            });
        }
        if cmp_real(&r, &cap) != Ordering::Less {
            unreachable!("basis columns lie within the maximal column norm");
        }
        let doubled = r.scale(&BigRational::from_integer(2.into()));
        r = if cmp_real(&doubled, &cap) == Ordering::Less { doubled } else { cap.clone() };
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Minkowski's second theorem for the sup-norm, checked exactly:
/// `det / n! <= prod lambda_i <= det`, with `gram_det = det^2`.
pub fn minkowski_sandwich_holds(res: &MinimaResult, gram_det: &FieldElement) -> bool {
    let n = res.lambdas.len();
    let field = gram_det.field();
    let prod = res.lambdas.iter().fold(FieldElement::one(field), |a, b| &a * b);
    let p2 = &prod * &prod;
    let f = factorial(n);
    let lower = gram_det.scale(&BigRational::new(1.into(), &f * &f));
    cmp_real(&lower, &p2) != Ordering::Greater && cmp_real(&p2, gram_det) != Ordering::Greater
}
