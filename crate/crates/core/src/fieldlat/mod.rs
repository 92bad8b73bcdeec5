//! The number field `K` inside `E`, `O_K`-modules given by pseudo-bases, and
//! the lattices they span under the Minkowski embedding.

mod lattice;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::height::weil_height_prec;
use crate::exactnum::linalg::{self, EchelonBasis};
use crate::exactnum::{
    format_rational, minimal_polynomial, Field, FieldDescriptor, FieldElement, IntPoly, Interval, DEFAULT_PREC,
};
use crate::geometry::{row_lattice_basis, shortest_points};

pub use lattice::EmbeddedLattice;

/// Default number of ideal elements tried when minimising the `c_K` objective.
pub const DEFAULT_CANDIDATE_CAP: usize = 200;

/// `K = Q(g)` with its embeddings into `E` and a verified integral basis.
#[derive(Clone, Debug)]
pub struct SubfieldK {
    kfield: Field,
    efield: Field,
    pub d: usize,
    pub r1: usize,
    pub r2: usize,
    pub real_images: Vec<FieldElement>,
    pub complex_images: Vec<(FieldElement, FieldElement)>,
    real_pows: Vec<Vec<FieldElement>>,
    complex_pows: Vec<Vec<(FieldElement, FieldElement)>>,
    integral_basis: Vec<FieldElement>,
    basis_inv: Vec<Vec<BigRational>>,
    pub disc_k: BigInt,
}

fn cmul(a: &(FieldElement, FieldElement), b: &(FieldElement, FieldElement)) -> (FieldElement, FieldElement) {
    (&(&a.0 * &b.0) - &(&a.1 * &b.1), &(&a.0 * &b.1) + &(&a.1 * &b.0))
}

impl SubfieldK {
    pub fn new(
        efield: &Field,
        k_minpoly: IntPoly,
        real_images: Vec<FieldElement>,
        complex_images: Vec<(FieldElement, FieldElement)>,
        integral_basis: Vec<Vec<BigRational>>,
        disc_k: BigInt,
    ) -> Result<Self> {
        let kfield = FieldDescriptor::validate(k_minpoly, None)?;
        let d = kfield.degree();
        let (r1, r2) = (real_images.len(), complex_images.len());
        if r1 + 2 * r2 != d {
            return Err(Error::InvalidInput(format!(
                "embedding signature r1 = {r1}, r2 = {r2} does not match degree {d} of K"
            )));
        }
        let f = kfield.minpoly().clone();
        let real_pows: Vec<Vec<FieldElement>> =
            real_images.iter().map(|g| (0..d).map(|i| g.pow(i as u64)).collect()).collect();
        for (k, g) in real_images.iter().enumerate() {
            let v = f
                .coeffs
                .iter()
                .enumerate()
                .fold(FieldElement::zero(efield), |acc, (i, c)| &acc + &g.pow(i as u64).scale_int(c));
            if !v.is_zero() {
                return Err(Error::ImageNotInE(format!("real image {k} is not a root of the minimal polynomial of K")));
            }
        }
        let one = (FieldElement::one(efield), FieldElement::zero(efield));
        let mut complex_pows = Vec::with_capacity(r2);
        for (k, z) in complex_images.iter().enumerate() {
            if z.1.is_zero() {
                return Err(Error::ImageNotInE(format!("complex image {k} has zero imaginary part")));
            }
            let mut pows = vec![one.clone()];
            for _ in 1..=d {
                let next = cmul(pows.last().unwrap(), z);
                pows.push(next);
            }
            let (mut re, mut im) = (FieldElement::zero(efield), FieldElement::zero(efield));
            for (i, c) in f.coeffs.iter().enumerate() {
                re = &re + &pows[i].0.scale_int(c);
                im = &im + &pows[i].1.scale_int(c);
            }
            if !re.is_zero() || !im.is_zero() {
                return Err(Error::ImageNotInE(format!(
                    "complex image {k} is not a root of the minimal polynomial of K"
                )));
            }
            pows.truncate(d);
            complex_pows.push(pows);
        }
        for i in 0..r1 {
            for j in i + 1..r1 {
                if real_images[i] == real_images[j] {
                    return Err(Error::InvalidInput(format!("real images {i} and {j} coincide")));
                }
            }
        }
        for i in 0..r2 {
            for j in i + 1..r2 {
                let (a, b) = (&complex_images[i], &complex_images[j]);
                if a.0 == b.0 && (a.1 == b.1 || a.1 == -&b.1) {
                    return Err(Error::InvalidInput(format!("complex images {i} and {j} give the same place")));
                }
            }
        }
        if integral_basis.len() != d {
            return Err(Error::InvalidInput(format!("integral basis has {} elements, need {d}", integral_basis.len())));
        }
        let omega: Vec<FieldElement> =
            integral_basis.iter().map(|c| FieldElement::from_coords(&kfield, c.clone())).collect::<Result<_>>()?;
        let w: Vec<Vec<BigRational>> = omega.iter().map(|o| o.coords().to_vec()).collect();
        let basis_inv =
            linalg::inverse(&w).ok_or_else(|| Error::InvalidInput("integral basis is linearly dependent".into()))?;
        let k = SubfieldK {
            kfield: kfield.clone(),
            efield: efield.clone(),
            d,
            r1,
            r2,
            real_images,
            complex_images,
            real_pows,
            complex_pows,
            integral_basis: omega.clone(),
            basis_inv,
            disc_k,
        };
        for (i, o) in omega.iter().enumerate() {
            if !minimal_polynomial(o).lead().is_one() {
                return Err(Error::InvalidInput(format!("integral basis element {i} is not an algebraic integer")));
            }
        }
        for a in &omega {
            for b in &omega {
                if !k.is_integral(&(a * b)) {
                    return Err(Error::InvalidInput("integral basis is not closed under multiplication".into()));
                }
            }
        }
        if !k.is_integral(&FieldElement::one(&kfield)) || !k.is_integral(&FieldElement::generator(&kfield)) {
            return Err(Error::InvalidInput("integral basis does not span an order containing Z[g]".into()));
        }
        let tr: Vec<Vec<BigRational>> =
            omega.iter().map(|a| omega.iter().map(|b| k.trace(&(a * b))).collect()).collect();
        let disc = linalg::det(&tr);
        if disc != BigRational::from_integer(k.disc_k.clone()) {
            return Err(Error::InvalidInput(format!(
                "disc_K = {} does not match the trace-form discriminant {}",
                k.disc_k,
                format_rational(&disc)
            )));
        }
        Ok(k)
    }

    /// `K = Q` inside `E`.
    pub fn rationals(efield: &Field) -> Self {
        SubfieldK::new(
            efield,
            IntPoly::from_i64(&[0, 1]),
            vec![FieldElement::zero(efield)],
            vec![],
            vec![vec![BigRational::one()]],
            BigInt::one(),
        )
        .expect("Q is a valid subfield")
    }

    pub fn kfield(&self) -> &Field {
        &self.kfield
    }

    pub fn efield(&self) -> &Field {
        &self.efield
    }

    pub fn integral_basis(&self) -> &[FieldElement] {
        &self.integral_basis
    }

    /// Coordinates of `a` over the integral basis.
    pub fn basis_coords(&self, a: &FieldElement) -> Vec<BigRational> {
        let p = a.coords();
        (0..self.d).map(|j| (0..self.d).map(|i| &p[i] * &self.basis_inv[i][j]).sum()).collect()
    }

    pub fn from_basis_coords(&self, c: &[BigRational]) -> FieldElement {
        self.integral_basis
            .iter()
            .zip(c)
            .fold(FieldElement::zero(&self.kfield), |acc, (o, x)| &acc + &o.scale(x))
    }

    pub fn is_integral(&self, a: &FieldElement) -> bool {
        linalg::rat_is_integer_vec(&self.basis_coords(a))
    }

    /// Trace from `K` to `Q`.
    pub fn trace(&self, a: &FieldElement) -> BigRational {
        let g = FieldElement::generator(&self.kfield);
        let mut basis = FieldElement::one(&self.kfield);
        let mut t = BigRational::zero();
        for i in 0..self.d {
            t += &(a * &basis).coords()[i];
            basis = &basis * &g;
        }
        t
    }

    /// Image of `a` under the real embedding `k`.
    pub fn sigma(&self, k: usize, a: &FieldElement) -> FieldElement {
        a.coords()
            .iter()
            .zip(&self.real_pows[k])
            .fold(FieldElement::zero(&self.efield), |acc, (c, p)| &acc + &p.scale(c))
    }

    /// Real and imaginary parts of `a` under the complex embedding `k`.
    pub fn tau(&self, k: usize, a: &FieldElement) -> (FieldElement, FieldElement) {
        let (mut re, mut im) = (FieldElement::zero(&self.efield), FieldElement::zero(&self.efield));
        for (c, p) in a.coords().iter().zip(&self.complex_pows[k]) {
            re = &re + &p.0.scale(c);
            im = &im + &p.1.scale(c);
        }
        (re, im)
    }
}

/// One pseudo-basis pair `(I_j, y_j)`.
#[derive(Clone, Debug)]
pub struct PseudoPair {
    /// Z-basis of the fractional ideal, as elements of `K`.
    pub ideal: Vec<FieldElement>,
    /// Coordinates of `y_j` over the integral basis, one row per component.
    pub y_coords: Vec<Vec<BigInt>>,
    pub y: Vec<FieldElement>,
    pub norm: BigRational,
}

/// `M = I_1 y_1 + ... + I_s y_s` inside `K^w`.
#[derive(Clone, Debug)]
pub struct ModuleM {
    pub w: usize,
    pub s: usize,
    pub pairs: Vec<PseudoPair>,
    /// The `sd` Z-generators `beta y_j`.
    pub z_basis: Vec<Vec<FieldElement>>,
}

impl ModuleM {
    pub fn new(k: &SubfieldK, w: usize, raw: Vec<(Vec<Vec<BigRational>>, Vec<Vec<BigInt>>)>) -> Result<Self> {
        let s = raw.len();
        if s == 0 || s > w {
            return Err(Error::InvalidInput(format!("module rank s = {s} must satisfy 1 <= s <= w = {w}")));
        }
        let d = k.d;
        let mut pairs = Vec::with_capacity(s);
        for (j, (ideal_raw, y_raw)) in raw.into_iter().enumerate() {
            if ideal_raw.len() != d {
                return Err(Error::InvalidInput(format!("ideal {j} needs {d} generators")));
            }
            let ideal: Vec<FieldElement> = ideal_raw
                .iter()
                .map(|c| FieldElement::from_coords(k.kfield(), c.clone()))
                .collect::<Result<_>>()?;
            let coords: Vec<Vec<BigRational>> = ideal.iter().map(|b| k.basis_coords(b)).collect();
            let norm = linalg::det(&coords).abs();
            if norm.is_zero() {
                return Err(Error::InvalidInput(format!("ideal {j} basis is linearly dependent")));
            }
            let inv = linalg::inverse(&coords).expect("nonsingular");
            for o in k.integral_basis() {
                for b in &ideal {
                    let c = k.basis_coords(&(o * b));
                    let over_ideal: Vec<BigRational> =
                        (0..d).map(|jj| (0..d).map(|i| &c[i] * &inv[i][jj]).sum()).collect();
                    if !linalg::rat_is_integer_vec(&over_ideal) {
                        return Err(Error::InvalidInput(format!("ideal {j} is not closed under O_K")));
                    }
                }
            }
            if y_raw.len() != w || y_raw.iter().any(|r| r.len() != d) {
                return Err(Error::InvalidInput(format!("y_{j} must have {w} components of {d} integers")));
            }
            let y: Vec<FieldElement> =
                y_raw.iter().map(|c| k.from_basis_coords(&linalg::int_to_rat(c))).collect();
            pairs.push(PseudoPair { ideal, y_coords: y_raw, y, norm });
        }
        let mut eb = EchelonBasis::new();
        for p in &pairs {
            if !eb.insert(&p.y) {
                return Err(Error::RankDeficient { rank: eb.len(), expected: s });
            }
        }
        let z_basis: Vec<Vec<FieldElement>> = pairs
            .iter()
            .flat_map(|p| p.ideal.iter().map(move |b| p.y.iter().map(|yi| b * yi).collect::<Vec<_>>()))
            .collect();
        let flat: Vec<Vec<BigRational>> =
            z_basis.iter().map(|v| v.iter().flat_map(|x| x.coords().to_vec()).collect()).collect();
        let r = linalg::rank(&flat);
        if r != s * d {
            return Err(Error::RankDeficient { rank: r, expected: s * d });
        }
        Ok(ModuleM { w, s, pairs, z_basis })
    }

    /// Whether every generator has coordinates in `O_K`.
    pub fn is_integral(&self, k: &SubfieldK) -> bool {
        self.z_basis.iter().all(|v| v.iter().all(|x| k.is_integral(x)))
    }
}

/// `rho(a)`: real blocks first, then `(Re, Im)` block pairs, each block of length `w`.
pub fn minkowski_embed(a: &[FieldElement], k: &SubfieldK) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(a.len() * k.d);
    for r in 0..k.r1 {
        out.extend(a.iter().map(|x| k.sigma(r, x)));
    }
    for c in 0..k.r2 {
        let parts: Vec<(FieldElement, FieldElement)> = a.iter().map(|x| k.tau(c, x)).collect();
        out.extend(parts.iter().map(|p| p.0.clone()));
        out.extend(parts.into_iter().map(|p| p.1));
    }
    out
}

pub fn build_lattice(m: &ModuleM, k: &SubfieldK) -> Result<EmbeddedLattice> {
    let cols = m.z_basis.iter().map(|z| minkowski_embed(z, k)).collect();
    EmbeddedLattice::new(k.efield(), cols)
}

/// `D_K(M) = D_K * prod N(I_j)^2`.
pub fn discriminant_m(m: &ModuleM, k: &SubfieldK) -> BigRational {
    m.pairs.iter().fold(BigRational::from_integer(k.disc_k.clone()), |acc, p| acc * &p.norm * &p.norm)
}

/// Covolume of the embedded lattice, computed two ways.
#[derive(Clone, Debug)]
pub struct DeterminantReport {
    /// `det(B^T B)`, the exact squared covolume.
    pub gram_det: BigRational,
    /// Enclosure of the covolume.
    pub enclosure: Interval,
    /// `2^(-s r2) |D_K|^(s/2) prod N(I_j)`, squared.
    pub closed_form_sq: BigRational,
    /// `2^(-s r2) |D_K(M)|^(s/2)` as it enters the theorem bounds.
    pub discriminant_form: Interval,
    pub discriminant_form_agrees: bool,
}

fn pow_rat(q: &BigRational, e: usize) -> BigRational {
    num_traits::pow(q.clone(), e)
}

pub fn determinant(l: &EmbeddedLattice, m: &ModuleM, k: &SubfieldK) -> Result<DeterminantReport> {
    let g = l.gram_det();
    let two = BigRational::from_integer(2.into());
    let prod_n = m.pairs.iter().fold(BigRational::one(), |a, p| a * &p.norm);
    let dk = BigRational::from_integer(k.disc_k.abs());
    let closed_sq = pow_rat(&dk, m.s) * &prod_n * &prod_n / pow_rat(&two, 2 * m.s * k.r2);
    let gram = match g.as_rational() {
        Some(q) if q == closed_sq => q,
        _ => {
            return Err(Error::ClosedFormMismatch {
                gram: format!("{}", g.evaluate(64).sqrt()),
                closed_form: format!("{}", Interval::from_rational(&closed_sq, 64).sqrt()),
            })
        }
    };
    let disc_m = discriminant_m(m, k).abs();
    let disc_sq = pow_rat(&disc_m, m.s) / pow_rat(&two, 2 * m.s * k.r2);
    Ok(DeterminantReport {
        enclosure: Interval::from_rational(&gram, DEFAULT_PREC).sqrt(),
        discriminant_form: Interval::from_rational(&disc_sq, DEFAULT_PREC).sqrt(),
        discriminant_form_agrees: disc_sq == gram,
        gram_det: gram,
        closed_form_sq: closed_sq,
    })
}

/// The ideal `{alpha : alpha M in O_K^w}` with short candidate elements.
#[derive(Clone, Debug)]
pub struct DenominatorIdeal {
    pub basis: Vec<FieldElement>,
    pub candidates: Vec<FieldElement>,
}

pub fn denominator_ideal(m: &ModuleM, k: &SubfieldK, cap: usize) -> Result<DenominatorIdeal> {
    let d = k.d;
    // alpha = sum a_i omega_i; alpha * c in O_K  <=>  A_c a integral
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for v in &m.z_basis {
        for c in v.iter().filter(|c| !c.is_zero()) {
            let cols: Vec<Vec<BigRational>> = k.integral_basis().iter().map(|o| k.basis_coords(&(o * c))).collect();
            for r in 0..d {
                rows.push((0..d).map(|i| cols[i][r].clone()).collect());
            }
        }
    }
    let l = rows.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let lq = BigRational::from_integer(l.clone());
    let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|q| (q * &lq).to_integer()).collect()).collect();
    let basis_rows = row_lattice_basis(&int_rows);
    debug_assert_eq!(basis_rows.len(), d);
    let r: Vec<Vec<BigRational>> =
        basis_rows.iter().map(|row| row.iter().map(|x| BigRational::new(x.clone(), l.clone())).collect()).collect();
    let rinv = linalg::inverse(&r).expect("containment conditions have full rank");
    let basis: Vec<FieldElement> =
        (0..d).map(|j| k.from_basis_coords(&(0..d).map(|i| rinv[i][j].clone()).collect::<Vec<_>>())).collect();
    let lat = EmbeddedLattice::new(k.efield(), basis.iter().map(|u| minkowski_embed(std::slice::from_ref(u), k)).collect())?;
    let pts = shortest_points(&lat, cap)?;
    let candidates: Vec<FieldElement> = pts
        .iter()
        .map(|p| basis.iter().zip(&p.coeffs).fold(FieldElement::zero(k.kfield()), |acc, (u, c)| &acc + &u.scale_int(c)))
        .collect();
    for a in &candidates {
        debug_assert!(m.z_basis.iter().all(|v| v.iter().all(|c| k.is_integral(&(a * c)))));
    }
    Ok(DenominatorIdeal { basis, candidates })
}

/// The chosen `alpha` and `h(alpha)^((kappa+1)sd-1) h(alpha^-1)^kappa`.
#[derive(Clone, Debug)]
pub struct CkBound {
    pub alpha: FieldElement,
    pub height: Interval,
    pub value: Interval,
}

pub fn c_k_bound(ideal: &DenominatorIdeal, kappa: u64, sd: usize) -> Result<CkBound> {
    if kappa == 0 {
        return Err(Error::InvalidInput("kappa must be positive".into()));
    }
    let exp = (kappa + 1) * sd as u64 - 1 + kappa;
    let mut best: Option<CkBound> = None;
    for a in &ideal.candidates {
        // h(1/alpha) = h(alpha) for alpha != 0
        let h = weil_height_prec(a, DEFAULT_PREC);
        let value = h.powi(exp as i64);
        if best.as_ref().is_none_or(|b| value.hi < b.value.hi) {
            best = Some(CkBound { alpha: a.clone(), height: h, value });
        }
    }
    best.ok_or_else(|| Error::InvalidInput("no candidate elements in the denominator ideal".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::linalg::rat;

    fn q_field() -> Field {
        FieldDescriptor::rationals()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    fn sqrt5() -> (Field, SubfieldK) {
        let e = FieldDescriptor::validate(IntPoly::from_i64(&[-5, 0, 1]), Some((rat(2, 1), rat(3, 1)))).unwrap();
        let g = FieldElement::generator(&e);
        let k = SubfieldK::new(
            &e,
            IntPoly::from_i64(&[-5, 0, 1]),
            vec![g.clone(), -&g],
            vec![],
            vec![vec![rat(1, 1), rat(0, 1)], vec![rat(1, 2), rat(1, 2)]],
            5.into(),
        )
        .unwrap();
        (e, k)
    }

    #[test]
    fn z2_lattice() {
        let e = q_field();
        let k = SubfieldK::rationals(&e);
        let m = ModuleM::new(
            &k,
            2,
            vec![(vec![vec![rat(1, 1)]], vec![ints(&[1]), ints(&[0])]), (vec![vec![rat(1, 1)]], vec![ints(&[0]), ints(&[1])])],
        )
        .unwrap();
        let l = build_lattice(&m, &k).unwrap();
        assert_eq!(l.gram_det().as_rational(), Some(rat(1, 1)));
        assert_eq!(discriminant_m(&m, &k), rat(1, 1));
        let rep = determinant(&l, &m, &k).unwrap();
        assert!(rep.discriminant_form_agrees);
    }

    #[test]
    fn golden_ring() {
        let (_, k) = sqrt5();
        let m = ModuleM::new(&k, 1, vec![(vec![vec![rat(1, 1), rat(0, 1)], vec![rat(1, 2), rat(1, 2)]], vec![ints(&[1, 0])])])
            .unwrap();
        let l = build_lattice(&m, &k).unwrap();
        assert_eq!(discriminant_m(&m, &k), rat(5, 1));
        let rep = determinant(&l, &m, &k).unwrap();
        assert_eq!(rep.gram_det, rat(5, 1));
        let ideal = denominator_ideal(&m, &k, 20).unwrap();
        let c = c_k_bound(&ideal, 6, 2).unwrap();
        assert!(c.alpha.is_one() || (-&c.alpha).is_one());
        assert_eq!(c.value.hi.to_f64(), 1.0);
    }

    #[test]
    fn half_z() {
        let e = q_field();
        let k = SubfieldK::rationals(&e);
        let m = ModuleM::new(&k, 1, vec![(vec![vec![rat(1, 2)]], vec![ints(&[1])])]).unwrap();
        assert_eq!(discriminant_m(&m, &k), rat(1, 4));
        let l = build_lattice(&m, &k).unwrap();
        let rep = determinant(&l, &m, &k).unwrap();
        assert_eq!(rep.gram_det, rat(1, 4));
        let ideal = denominator_ideal(&m, &k, 10).unwrap();
        assert_eq!(ideal.basis[0].as_rational().map(|q| q.abs()), Some(rat(2, 1)));
        let c = c_k_bound(&ideal, 6, 1).unwrap();
        assert_eq!(c.alpha.as_rational().map(|q| q.abs()), Some(rat(2, 1)));
        assert_eq!(c.value.lo.to_f64(), 4096.0);
        assert_eq!(c.value.hi.to_f64(), 4096.0);
    }

    #[test]
    fn mixed_denominators() {
        let e = q_field();
        let k = SubfieldK::rationals(&e);
        let m = ModuleM::new(
            &k,
            2,
            vec![(vec![vec![rat(1, 3)]], vec![ints(&[1]), ints(&[0])]), (vec![vec![rat(1, 2)]], vec![ints(&[0]), ints(&[1])])],
        )
        .unwrap();
        let ideal = denominator_ideal(&m, &k, 10).unwrap();
        assert_eq!(ideal.basis[0].as_rational().map(|q| q.abs()), Some(rat(6, 1)));
    }

    #[test]
    fn diagonal_line_mismatch() {
        let e = q_field();
        let k = SubfieldK::rationals(&e);
        let m = ModuleM::new(&k, 2, vec![(vec![vec![rat(1, 1)]], vec![ints(&[1]), ints(&[1])])]).unwrap();
        let l = build_lattice(&m, &k).unwrap();
        assert!(matches!(determinant(&l, &m, &k), Err(Error::ClosedFormMismatch { .. })));
    }

    #[test]
    fn sqrt5_embedding() {
        let (_, k) = sqrt5();
        let g = FieldElement::generator(k.kfield());
        let v = minkowski_embed(&[g], &k);
        assert_eq!(v.len(), 2);
        assert_eq!(&v[0] + &v[1], FieldElement::zero(k.efield()));
        assert_eq!(v[0].sign(), 1);
    }

    #[test]
    fn gaussian_field() {
        let e = q_field();
        let k = SubfieldK::new(
            &e,
            IntPoly::from_i64(&[1, 0, 1]),
            vec![],
            vec![(FieldElement::zero(&e), FieldElement::one(&e))],
            vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]],
            (-4).into(),
        )
        .unwrap();
        let m = ModuleM::new(&k, 1, vec![(vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]], vec![ints(&[1, 0])])])
            .unwrap();
        let l = build_lattice(&m, &k).unwrap();
        let rep = determinant(&l, &m, &k).unwrap();
        // 2^-1 * 4^(1/2) = 1
        assert_eq!(rep.gram_det, rat(1, 1));
        let bad = SubfieldK::new(
            &e,
            IntPoly::from_i64(&[1, 0, 1]),
            vec![],
            vec![(FieldElement::zero(&e), FieldElement::one(&e))],
            vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]],
            4.into(),
        );
        assert!(bad.is_err());
    }
}
