//! Avoidance constructions: a lattice point off an algebraic set via a
//! nonvanishing grid point, and a lattice point outside a union of sublattices.

mod poly;

pub use poly::Polynomial;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::height::{rational_height, weil_height_prec};
use crate::exactnum::{FieldElement, Interval};
use crate::fieldlat::EmbeddedLattice;
use crate::geometry::{cmp_real, enumerate_by_norm, sup_norm, MinimaResult, Sublattice};

/// Starting precision for nonvanishing certificates.
pub const START_BITS: u32 = 64;
/// Precision cap for nonvanishing certificates.
pub const PRECISION_CAP: u32 = 1 << 14;

/// Systems `S_1, ..., S_m` of homogeneous polynomials and the grid size `M_S`.
#[derive(Clone, Debug)]
pub struct PolySystemSet {
    pub systems: Vec<Vec<Polynomial>>,
    pub m_s: u64,
    pub zero_locus_trivial: bool,
}

impl PolySystemSet {
    pub fn new(systems: Vec<Vec<Polynomial>>, nvars: usize, zero_locus_trivial: bool) -> Result<Self> {
        if systems.is_empty() {
            return Err(Error::InvalidInput("no polynomial systems given".into()));
        }
        let mut m_s = 0u64;
        for (i, s) in systems.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidInput(format!("system {} is empty", i + 1)));
            }
            for p in s {
                if p.nvars() != nvars {
                    return Err(Error::InvalidInput(format!(
                        "polynomial {} in system {} has {} variables, expected {}",
                        p,
                        i + 1,
                        p.nvars(),
                        nvars
                    )));
                }
                if p.is_zero() {
                    return Err(Error::InvalidInput(format!("system {} contains the zero polynomial", i + 1)));
                }
                if !p.is_homogeneous() {
                    return Err(Error::InvalidInput(format!("polynomial {} is not homogeneous", p)));
                }
                if p.degree() == 0 {
                    return Err(Error::InvalidInput(format!("system {} contains a nonzero constant", i + 1)));
                }
            }
            m_s += s.iter().map(|p| p.degree() as u64).max().unwrap();
        }
        if zero_locus_trivial {
            m_s = 1;
        }
        Ok(PolySystemSet { systems, m_s, zero_locus_trivial })
    }
}

/// The chosen `P_i` from each system; their product is the avoidance polynomial.
#[derive(Clone, Debug)]
pub struct ProductPoly {
    /// Index of the chosen polynomial within each system.
    pub chosen: Vec<usize>,
    pub factors: Vec<Polynomial>,
    pub m_s: u64,
}

impl ProductPoly {
    pub fn product(&self) -> Polynomial {
        let mut it = self.factors.iter();
        let first = it.next().expect("at least one system").clone();
        it.fold(first, |a, b| a.mul(b))
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|p| p.degree()).sum()
    }
}

/// A certified `P_i(y) != 0`.
#[derive(Clone, Debug)]
pub struct NonvanishingCert {
    pub system: usize,
    pub poly_index: usize,
    pub value: Interval,
    pub bits: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    Polynomial,
    Sublattice,
}

#[derive(Clone, Debug)]
pub struct AvoidWitness {
    pub y_coords: Vec<BigInt>,
    pub y_embedded: Vec<FieldElement>,
    pub norm: FieldElement,
    pub norm_enclosure: Interval,
    /// The bound the norm was checked against.
    pub bound: Interval,
    pub kind: WitnessKind,
    pub certificates: Vec<NonvanishingCert>,
    /// Grid point `xi` for polynomial witnesses.
    pub xi: Option<Vec<u64>>,
}

/// Quantities entering the explicit norm bounds.
#[derive(Clone, Debug)]
pub struct BoundInputs {
    pub sd: usize,
    /// `det(Lambda)^2`.
    pub gram_det: BigRational,
    /// An element of the denominator ideal.
    pub alpha: FieldElement,
}

impl BoundInputs {
    fn height_exact(&self) -> Option<BigRational> {
        self.alpha.as_rational().map(|q| {
            if q.is_zero() {
                BigRational::one()
            } else {
                BigRational::from_integer(rational_height(&q))
            }
        })
    }

    fn height(&self, prec: u32) -> Interval {
        match self.height_exact() {
            Some(h) => Interval::from_rational(&h, prec),
            None => weil_height_prec(&self.alpha, prec),
        }
    }

    fn det(&self, prec: u32) -> Interval {
        Interval::from_rational(&self.gram_det, prec + 8).sqrt().with_prec(prec)
    }

    /// `(sqrt2 h(alpha))^(sd-1) det(Lambda)`.
    pub fn minima_bound(&self, prec: u32) -> Interval {
        let s2h = Interval::from_int(2, prec).sqrt().mul(&self.height(prec));
        s2h.powi(self.sd as i64 - 1).mul(&self.det(prec))
    }

    /// `sd M_S (sqrt2 h(alpha))^(sd-1) det(Lambda)`.
    pub fn grid_bound(&self, m_s: u64, prec: u32) -> Interval {
        self.minima_bound(prec).mul_int(&BigInt::from(self.sd as u64 * m_s))
    }

    /// `(sqrt2 h(alpha))^(sd-1) det(Lambda) (sum D/D_i - m + 1) + D^(1/sd)`, `D_i = index_i det(Lambda)`.
    pub fn sublattice_bound(&self, indices: &[BigInt], prec: u32) -> Interval {
        let det = self.det(prec);
        let m = indices.len();
        let di: Vec<Interval> = indices.iter().map(|k| det.mul_int(k)).collect();
        let d = di.iter().fold(Interval::one(prec), |a, b| a.mul(b));
        let mut sum = Interval::zero(prec);
        for i in 0..m {
            let others = di.iter().enumerate().filter(|(j, _)| *j != i).fold(Interval::one(prec), |a, (_, b)| a.mul(b));
            sum = sum.add(&others);
        }
        let factor = sum.sub(&Interval::from_int(m as i64 - 1, prec));
        self.minima_bound(prec).mul(&factor).add(&d.nth_root(self.sd as u32))
    }
}

/// Grid `{0..M}^n` ordered by sup-norm, then lexicographically.
fn grid_shell(n: usize, k: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; n];
    loop {
        if cur.iter().copied().max() == Some(k) {
            out.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < k {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

struct GridPoint {
    xi: Vec<u64>,
    coords: Vec<BigInt>,
    point: Vec<FieldElement>,
}

fn grid_point(l: &EmbeddedLattice, minima: &MinimaResult, xi: Vec<u64>) -> GridPoint {
    let n = l.rank();
    let mut coords = vec![BigInt::zero(); n];
    for (x, v) in xi.iter().zip(&minima.vectors) {
        if *x != 0 {
            for (c, vi) in coords.iter_mut().zip(v) {
                *c += vi * BigInt::from(*x);
            }
        }
    }
    let point = l.point(&coords);
    GridPoint { xi, coords, point }
}

fn grid_points(n: usize, m_s: u64) -> impl Iterator<Item = Vec<u64>> {
    (1..=m_s).flat_map(move |k| grid_shell(n, k))
}

enum Eval {
    Zero,
    Nonzero(Interval, u32),
    Indeterminate,
}

/// Certify `p(x) != 0` by interval evaluation from enclosures of the coordinates.
fn certify_nonzero(p: &Polynomial, x: &[FieldElement]) -> Eval {
    if p.eval(x).is_zero() {
        return Eval::Zero;
    }
    let mut bits = START_BITS;
    loop {
        let xs: Vec<Interval> = x.iter().map(|v| v.enclose(bits)).collect();
        let v = p.eval_interval(&xs, bits + 16);
        if !v.contains_zero() {
            return Eval::Nonzero(v, bits);
        }
        if bits >= PRECISION_CAP {
            return Eval::Indeterminate;
        }
        bits *= 2;
    }
}

/// Choose, in each system, the first polynomial certified nonzero somewhere on the grid.
pub fn select_product_poly(s: &PolySystemSet, l: &EmbeddedLattice, minima: &MinimaResult) -> Result<ProductPoly> {
    let mut chosen = Vec::new();
    let mut factors = Vec::new();
    let mut cache: Vec<GridPoint> = Vec::new();
    let mut order = grid_points(l.rank(), s.m_s);
    for (si, sys) in s.systems.iter().enumerate() {
        let mut found = None;
        let mut indeterminate = false;
        'polys: for (pi, p) in sys.iter().enumerate() {
            let mut k = 0;
            loop {
                if k == cache.len() {
                    match order.next() {
                        Some(xi) => cache.push(grid_point(l, minima, xi)),
                        None => break,
                    }
                }
                match certify_nonzero(p, &cache[k].point) {
                    Eval::Nonzero(..) => {
                        found = Some(pi);
                        break 'polys;
                    }
                    Eval::Indeterminate => indeterminate = true,
                    Eval::Zero => {}
                }
                k += 1;
            }
        }
        match found {
            Some(pi) => {
                chosen.push(pi);
                factors.push(sys[pi].clone());
            }
            None if indeterminate => return Err(Error::CannotWitnessNonvanishing { system: si + 1 }),
            None => return Err(Error::LatticeInsideZeroSet { system: si + 1 }),
        }
    }
    Ok(ProductPoly { chosen, factors, m_s: s.m_s })
}

/// Exact check that `n y` stays off the zero set of every chosen factor.
pub fn avoids_polys(y: &[FieldElement], p: &ProductPoly) -> bool {
    p.factors.iter().all(|f| !f.eval(y).is_zero())
}

/// Exact check that integer coordinates lie outside every sublattice.
pub fn avoids_sublattices(y: &[BigInt], gammas: &[Sublattice]) -> bool {
    gammas.iter().all(|g| !g.contains(y))
}

/// Compare an exact nonnegative real with an interval bound: `Some(true)` when certified `<=` (or `<`).
pub fn compare_to_bound(x: &FieldElement, bound: impl Fn(u32) -> Interval, strict: bool) -> (bool, Interval, Interval) {
    let mut prec = 64;
    loop {
        let xe = x.enclose(prec);
        let b = bound(prec);
        let ok = if strict { xe.hi < b.lo } else { xe.hi <= b.lo };
        let bad = if strict { xe.lo >= b.hi } else { xe.lo > b.hi };
        if ok || bad || prec >= PRECISION_CAP {
            return (ok, xe, b);
        }
        prec *= 2;
    }
}

/// First grid point `v(xi) = sum xi_i v_i`, `xi in {0..M_S}^sd`, with every chosen factor
/// certified nonzero. Points are taken by increasing `|xi|`, then lexicographically.
pub fn grid_avoid(
    l: &EmbeddedLattice,
    p: &ProductPoly,
    minima: &MinimaResult,
    inputs: &BoundInputs,
) -> Result<AvoidWitness> {
    let mut indeterminate = false;
    let xis: Vec<Vec<u64>> = grid_points(l.rank(), p.m_s).collect();
    for block in xis.chunks(64) {
        let evals: Vec<(GridPoint, Option<Vec<NonvanishingCert>>, bool)> = block
            .par_iter()
            .map(|xi| {
                let g = grid_point(l, minima, xi.clone());
                let mut certs = Vec::new();
                for (si, f) in p.factors.iter().enumerate() {
                    match certify_nonzero(f, &g.point) {
                        Eval::Nonzero(value, bits) => {
                            certs.push(NonvanishingCert { system: si + 1, poly_index: p.chosen[si], value, bits })
                        }
                        Eval::Zero => return (g, None, false),
                        Eval::Indeterminate => return (g, None, true),
                    }
                }
                (g, Some(certs), false)
            })
            .collect();
        for (g, certs, ind) in evals {
            indeterminate |= ind;
            let Some(certificates) = certs else { continue };
            return finish_grid_witness(p, inputs, g, certificates);
        }
    }
    if indeterminate {
        Err(Error::GridExhaustedAtPrecisionCap { cap: PRECISION_CAP })
    } else {
        Err(Error::InvalidInput("no grid point avoids the chosen polynomials; the zero locus is not trivial".into()))
    }
}

fn finish_grid_witness(
    p: &ProductPoly,
    inputs: &BoundInputs,
    g: GridPoint,
    certificates: Vec<NonvanishingCert>,
) -> Result<AvoidWitness> {
    let norm = sup_norm(&g.point);
    let ok = match inputs.height_exact() {
        // |y|^2 <= (sd M_S)^2 (2 h^2)^(sd-1) det^2, all rational on the right
        Some(h) => {
            let k = BigRational::from_integer(BigInt::from(inputs.sd as u64 * p.m_s));
            let two_h2 = BigRational::from_integer(2.into()) * &h * &h;
            let rhs = &k * &k * num_traits::pow(two_h2, inputs.sd - 1) * &inputs.gram_det;
            let lhs = &norm * &norm;
            cmp_real(&lhs, &FieldElement::from_rational(norm.field(), rhs)) != std::cmp::Ordering::Greater
        }
        None => compare_to_bound(&norm, |b| inputs.grid_bound(p.m_s, b), false).0,
    };
    let bound = inputs.grid_bound(p.m_s, 64);
    let norm_enclosure = norm.evaluate(64);
    if !ok {
        return Err(Error::BoundViolation {
            what: "grid witness norm".into(),
            value: norm_enclosure.to_string(),
            bound: bound.to_string(),
        });
    }
    Ok(AvoidWitness {
        y_coords: g.coords,
        y_embedded: g.point,
        norm,
        norm_enclosure,
        bound,
        kind: WitnessKind::Polynomial,
        certificates,
        xi: Some(g.xi),
    })
}

/// Shortest lattice point (in enumeration order) outside every `Gamma_i`.
pub fn sublattice_avoid(l: &EmbeddedLattice, gammas: &[Sublattice], inputs: &BoundInputs) -> Result<AvoidWitness> {
    if gammas.is_empty() {
        return Err(Error::InvalidInput("no sublattices given".into()));
    }
    for (i, g) in gammas.iter().enumerate() {
        if g.dim() != l.rank() {
            return Err(Error::InvalidInput(format!(
                "sublattice {} has dimension {}, lattice rank is {}",
                i + 1,
                g.dim(),
                l.rank()
            )));
        }
        if g.index.is_one() {
            return Err(Error::NoProperSublattice { index: i + 1 });
        }
    }
    let indices: Vec<BigInt> = gammas.iter().map(|g| g.index.clone()).collect();
    let bound_at = |prec: u32| inputs.sublattice_bound(&indices, prec);
    let radius_hi = bound_at(64).hi;
    let radius = FieldElement::from_rational(l.field(), radius_hi.round_up(64).to_rational());
    let pt = enumerate_by_norm(l, &radius, |p| Ok(avoids_sublattices(&p.coeffs, gammas)))?;
    let (ok, xe, b) = compare_to_bound(&pt.norm, bound_at, true);
    if !ok {
        return Err(Error::BoundViolation {
            what: "sublattice witness norm".into(),
            value: xe.to_string(),
            bound: b.to_string(),
        });
    }
    Ok(AvoidWitness {
        norm_enclosure: pt.norm.evaluate(64),
        y_coords: pt.coeffs,
        y_embedded: pt.point,
        norm: pt.norm,
        bound: bound_at(64),
        kind: WitnessKind::Sublattice,
        certificates: Vec::new(),
        xi: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::linalg::rat;
    use crate::exactnum::FieldDescriptor;
    use crate::geometry::successive_minima;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    fn z2() -> EmbeddedLattice {
        let q = FieldDescriptor::rationals();
        EmbeddedLattice::from_rational_columns(&q, &[vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]])
            .unwrap()
    }

    fn unit_inputs(l: &EmbeddedLattice) -> BoundInputs {
        BoundInputs { sd: 2, gram_det: rat(1, 1), alpha: FieldElement::one(l.field()) }
    }

    fn poly(terms: &[(&[u32], i64)]) -> Polynomial {
        Polynomial::new(2, terms.iter().map(|(e, c)| (e.to_vec(), rat(*c, 1)))).unwrap()
    }

    #[test]
    fn system_set_rules() {
        let x1 = poly(&[(&[1, 0], 1)]);
        let s = PolySystemSet::new(vec![vec![x1.clone()], vec![poly(&[(&[1, 0], 1), (&[0, 1], 1)])]], 2, false).unwrap();
        assert_eq!(s.m_s, 2);
        let s = PolySystemSet::new(vec![vec![poly(&[(&[2, 0], 1), (&[0, 2], 1)])]], 2, true).unwrap();
        assert_eq!(s.m_s, 1);
        assert!(PolySystemSet::new(vec![vec![poly(&[(&[1, 0], 1), (&[0, 0], 1)])]], 2, false).is_err());
        assert!(PolySystemSet::new(vec![vec![]], 2, false).is_err());
        assert!(PolySystemSet::new(vec![vec![x1]], 3, false).is_err());
    }

    #[test]
    fn grid_order() {
        assert_eq!(grid_shell(2, 1), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(grid_shell(2, 2).len(), 5);
    }

    #[test]
    fn grid_examples() {
        let l = z2();
        let mins = successive_minima(&l).unwrap();
        let s = PolySystemSet::new(vec![vec![poly(&[(&[1, 0], 1)])]], 2, false).unwrap();
        let p = select_product_poly(&s, &l, &mins).unwrap();
        let w = grid_avoid(&l, &p, &mins, &unit_inputs(&l)).unwrap();
        assert_eq!(w.y_coords, ints(&[1, 0]));
        assert_eq!(w.xi, Some(vec![1, 0]));

        let s = PolySystemSet::new(vec![vec![poly(&[(&[1, 1], 1)])]], 2, false).unwrap();
        assert_eq!(s.m_s, 2);
        let p = select_product_poly(&s, &l, &mins).unwrap();
        let w = grid_avoid(&l, &p, &mins, &unit_inputs(&l)).unwrap();
        assert_eq!(w.y_coords, ints(&[1, 1]));
        assert!(w.certificates.iter().all(|c| !c.value.contains_zero()));
    }

    #[test]
    fn selection_examples() {
        let l = z2();
        let mins = successive_minima(&l).unwrap();
        let x1 = poly(&[(&[1, 0], 1)]);
        let s = PolySystemSet::new(vec![vec![x1.clone()], vec![poly(&[(&[1, 0], 1), (&[0, 1], 1)])]], 2, false).unwrap();
        let p = select_product_poly(&s, &l, &mins).unwrap();
        assert_eq!(p.chosen, vec![0, 0]);
        assert!(p.degree() as u64 <= s.m_s);
        let s = PolySystemSet::new(vec![vec![poly(&[(&[2, 0], 1), (&[0, 2], 1)]), x1]], 2, false).unwrap();
        assert_eq!(select_product_poly(&s, &l, &mins).unwrap().chosen, vec![0]);
    }

    #[test]
    fn lattice_inside_zero_set() {
        // the diagonal lattice inside Z^2 embedded in the zero set of x1 - x2
        let q = FieldDescriptor::rationals();
        let l = EmbeddedLattice::from_rational_columns(&q, &[vec![rat(1, 1), rat(1, 1)]]).unwrap();
        let mins = successive_minima(&l).unwrap();
        let s = PolySystemSet::new(vec![vec![poly(&[(&[1, 0], 1), (&[0, 1], -1)])]], 2, false).unwrap();
        assert_eq!(
            select_product_poly(&s, &l, &mins).unwrap_err(),
            Error::LatticeInsideZeroSet { system: 1 }
        );
    }

    fn sub(cols: &[&[i64]]) -> Sublattice {
        Sublattice::from_columns(&cols.iter().map(|c| ints(c)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn sublattice_examples() {
        let l = z2();
        let inp = unit_inputs(&l);
        let two = sub(&[&[2, 0], &[0, 2]]);
        let three = sub(&[&[3, 0], &[0, 3]]);
        let w = sublattice_avoid(&l, std::slice::from_ref(&two), &inp).unwrap();
        assert_eq!(w.y_coords, ints(&[1, 0]));
        assert!(w.norm.is_one());
        let w = sublattice_avoid(&l, &[two, three], &inp).unwrap();
        assert_eq!(w.y_coords, ints(&[1, 0]));
        let diag = sub(&[&[1, 1], &[1, -1]]);
        assert_eq!(diag.index, 2.into());
        let w = sublattice_avoid(&l, &[diag], &inp).unwrap();
        assert_eq!(w.y_coords, ints(&[1, 0]));
        let full = sub(&[&[1, 0], &[0, 1]]);
        assert_eq!(sublattice_avoid(&l, &[full], &inp).unwrap_err(), Error::NoProperSublattice { index: 1 });
    }
}
