//! Hash-stamped solution certificates and their independent verification.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::avoidance::{compare_to_bound, BoundInputs, WitnessKind};
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, FieldElement, Interval, DEFAULT_PREC};
use crate::geometry::sup_norm;
use crate::kronecker::{
    bound_theorem1, bound_theorem2, kr_bounds, point_avoids, thetas_from_witness, theta_height_bound1,
    theta_height_bound2, Solution, ThetaSystem, TheoremBound,
};
use crate::problem::{Avoidance, Problem};

pub const FORMAT: &str = "kronecker-certificate/1";

/// Closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Enclosure {
    pub lo: String,
    pub hi: String,
}

impl From<&Interval> for Enclosure {
    fn from(i: &Interval) -> Self {
        Enclosure { lo: i.lo.to_rational_string(), hi: i.hi.to_rational_string() }
    }
}

fn rational(s: &str) -> Result<BigRational> {
    parse_rational(s).ok_or_else(|| Error::Parse(format!("rational expected, got {s:?}")))
}

impl Enclosure {
    fn bounds(&self) -> Result<(BigRational, BigRational)> {
        Ok((rational(&self.lo)?, rational(&self.hi)?))
    }

    /// Exact test that `x` lies in the enclosure.
    fn contains(&self, x: &FieldElement) -> Result<bool> {
        let (lo, hi) = self.bounds()?;
        let f = x.field();
        Ok((x - &FieldElement::from_rational(f, lo)).sign() >= 0
            && (&FieldElement::from_rational(f, hi) - x).sign() >= 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessRecord {
    pub kind: String,
    /// Lattice-basis coordinates.
    pub y: Vec<String>,
    pub xi: Option<Vec<u64>>,
    pub norm: Enclosure,
    pub avoidance_bound: Enclosure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaRecord {
    /// Power-basis coordinates in the ambient field.
    pub coords: Vec<String>,
    pub minpoly: Vec<String>,
    pub degree: usize,
    pub height: Enclosure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundRecord {
    pub kappa: u64,
    pub ell: usize,
    pub value: Enclosure,
    pub simplified: Enclosure,
    pub eps_factor: String,
    /// Power-basis coordinates of the denominator element used.
    pub alpha: Vec<String>,
    pub constants: BTreeMap<String, Enclosure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrRecord {
    pub generic: Enclosure,
    pub sharp: Enclosure,
    pub search_cap: String,
    pub e: usize,
    pub a_lcm: String,
    pub c1: Enclosure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub format: String,
    pub problem_hash: String,
    pub theorem: u8,
    pub epsilon: String,
    pub a: Vec<String>,
    pub witness: WitnessRecord,
    pub thetas: Vec<ThetaRecord>,
    pub e: usize,
    pub a_lcm: String,
    pub c1: Enclosure,
    /// `q` for the first theorem, `g` for the second.
    pub multiplier: String,
    pub d_prime: Option<String>,
    pub intersection_index: Option<String>,
    pub x: Vec<String>,
    pub x_embedded: Vec<Enclosure>,
    pub x_norm: Enclosure,
    pub p: Vec<String>,
    pub residuals: Vec<Enclosure>,
    pub bound: BoundRecord,
    pub kr: KrRecord,
    pub theta_height_bound: Enclosure,
    pub theta_heights_within: bool,
}

fn strs(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn coords(x: &FieldElement) -> Vec<String> {
    x.coords().iter().map(format_rational).collect()
}

fn bound_record(b: &TheoremBound) -> BoundRecord {
    let mut c = BTreeMap::new();
    match b {
        TheoremBound::First(b) => {
            c.insert("a_k".into(), (&b.a_k).into());
            c.insert("base".into(), (&b.base).into());
            c.insert("hb_factor".into(), (&b.hb_factor).into());
            c.insert("c_k".into(), (&b.c_k.value).into());
            c.insert("h_alpha".into(), (&b.c_k.height).into());
            c.insert("prefactor".into(), (&b.prefactor).into());
            BoundRecord {
                kappa: b.kappa,
                ell: b.ell,
                value: (&b.value).into(),
                simplified: (&b.simplified).into(),
                eps_factor: format_rational(&b.eps_factor),
                alpha: coords(&b.c_k.alpha),
                constants: c,
            }
        }
        TheoremBound::Second(b) => {
            c.insert("b_k".into(), (&b.b_k).into());
            c.insert("e_alpha".into(), (&b.e_alpha).into());
            c.insert("h_alpha".into(), (&b.h_alpha).into());
            c.insert("d_total".into(), (&b.d_total).into());
            c.insert("sum_factor".into(), (&b.sum_factor).into());
            BoundRecord {
                kappa: b.kappa,
                ell: b.ell,
                value: (&b.value).into(),
                simplified: (&b.simplified).into(),
                eps_factor: format_rational(&b.eps_factor),
                alpha: coords(&b.alpha),
                constants: c,
            }
        }
    }
}

fn theta_records(ts: &ThetaSystem) -> Vec<ThetaRecord> {
    ts.thetas
        .iter()
        .enumerate()
        .map(|(i, th)| ThetaRecord {
            coords: coords(th),
            minpoly: strs(&ts.minpolys[i].coeffs),
            degree: ts.degrees[i],
            height: (&ts.heights[i]).into(),
        })
        .collect()
}

impl Certificate {
    pub fn build(sol: &Solution, p: &Problem) -> Self {
        let w = &sol.witness;
        Certificate {
            format: FORMAT.into(),
            problem_hash: p.hash.clone(),
            theorem: sol.theorem,
            epsilon: format_rational(&p.epsilon),
            a: p.a.iter().map(format_rational).collect(),
            witness: WitnessRecord {
                kind: match w.kind {
                    WitnessKind::Polynomial => "polynomial".into(),
                    WitnessKind::Sublattice => "sublattice".into(),
                },
                y: strs(&w.y_coords),
                xi: w.xi.clone(),
                norm: (&w.norm_enclosure).into(),
                avoidance_bound: (&w.bound).into(),
            },
            thetas: theta_records(&sol.thetas),
            e: sol.thetas.e,
            a_lcm: sol.thetas.a_lcm.to_string(),
            c1: (&sol.thetas.c1).into(),
            multiplier: sol.multiplier.to_string(),
            d_prime: sol.d_prime.as_ref().map(|d| d.to_string()),
            intersection_index: sol.intersection_index.as_ref().map(|d| d.to_string()),
            x: strs(&sol.x_coords),
            x_embedded: sol.x.iter().map(|v| (&v.enclose(DEFAULT_PREC)).into()).collect(),
            x_norm: (&sol.x_norm_enclosure).into(),
            p: strs(&sol.p),
            residuals: sol.residuals.iter().map(Enclosure::from).collect(),
            bound: bound_record(&sol.bound),
            kr: KrRecord {
                generic: (&sol.kr_generic).into(),
                sharp: (&sol.kr_sharp).into(),
                search_cap: sol.search_cap.to_string(),
                e: sol.search_system.e,
                a_lcm: sol.search_system.a_lcm.to_string(),
                c1: (&sol.search_system.c1).into(),
            },
            theta_height_bound: (&sol.theta_height_bound).into(),
            theta_heights_within: sol.theta_heights_within,
        }
    }

    /// Canonical text: pretty JSON with sorted keys and a trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let v = serde_json::to_value(self).expect("certificate serializes");
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Outcome of one verification item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyItem {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.items.iter().filter(|i| !i.pass).map(|i| i.name).collect()
    }

    pub fn item(&self, name: &str) -> Option<&VerifyItem> {
        self.items.iter().find(|i| i.name == name)
    }

    fn push(&mut self, name: &'static str, r: Result<Option<String>>) {
        let (pass, detail) = match r {
            Ok(None) => (true, "ok".to_string()),
            Ok(Some(msg)) => (false, msg),
            Err(e) => (false, e.to_string()),
        };
        self.items.push(VerifyItem { name, pass, detail });
    }
}

fn ints(v: &[String]) -> Result<Vec<BigInt>> {
    v.iter().map(|s| s.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("integer expected, got {s:?}")))).collect()
}

fn element(p: &Problem, c: &[String]) -> Result<FieldElement> {
    FieldElement::from_coords(&p.efield, c.iter().map(|s| rational(s)).collect::<Result<_>>()?)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Option<String> {
    if cond {
        None
    } else {
        Some(msg())
    }
}

/// Exact `|v| < eps`.
fn strictly_within(v: &FieldElement, eps: &BigRational) -> bool {
    let e = FieldElement::from_rational(v.field(), eps.clone());
    let e2 = &e * &e;
    (&e2 - &(v * v)).sign() > 0
}

struct Recomputed {
    y: Vec<BigInt>,
    y_pt: Vec<FieldElement>,
    thetas: ThetaSystem,
    bound: TheoremBound,
}

/// Re-derive every recorded inequality from the problem and the exact data in the certificate.
pub fn verify(cert: &Certificate, p: &Problem) -> VerifyReport {
    let mut r = VerifyReport::default();
    r.push(
        "problem_hash",
        Ok(check(cert.problem_hash == p.hash && cert.format == FORMAT, || {
            format!("certificate is for problem {}, loaded problem is {}", cert.problem_hash, p.hash)
        })),
    );
    let rec = match recompute(cert, p) {
        Ok(rc) => rc,
        Err(e) => {
            r.push("witness", Err(e));
            return r;
        }
    };
    r.push("witness", check_witness(cert, p, &rec));
    r.push("thetas", check_thetas(cert, p, &rec));
    r.push("multiplier", check_multiplier(cert, p, &rec));
    r.push("x", check_x(cert, p, &rec));
    r.push("avoidance", check_avoidance(cert, p));
    r.push("residuals", check_residuals(cert, p));
    r.push("norm_bound", check_norm(cert, p, &rec));
    r.push("bound_value", check_bound_value(cert, &rec));
    r.push("constants", check_constants(cert, p, &rec));
    r
}

fn recompute(cert: &Certificate, p: &Problem) -> Result<Recomputed> {
    let y = ints(&cert.witness.y)?;
    if y.len() != p.lattice.rank() {
        return Err(Error::InvalidInput("witness has the wrong number of coordinates".into()));
    }
    if y.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("witness is zero".into()));
    }
    let y_pt = p.lattice.point(&y);
    let thetas = thetas_from_witness(&p.forms, &y_pt)?;
    let bound = match cert.theorem {
        1 => TheoremBound::First(bound_theorem1(p, &p.epsilon)?),
        2 => TheoremBound::Second(bound_theorem2(p, &p.epsilon)?),
        t => return Err(Error::InvalidInput(format!("unknown theorem {t}"))),
    };
    Ok(Recomputed { y, y_pt, thetas, bound })
}

fn inputs(p: &Problem, rc: &Recomputed) -> BoundInputs {
    let alpha = match &rc.bound {
        TheoremBound::First(b) => b.c_k.alpha.clone(),
        TheoremBound::Second(b) => b.alpha.clone(),
    };
    BoundInputs { sd: p.sd(), gram_det: p.det.gram_det.clone(), alpha }
}

fn check_witness(cert: &Certificate, p: &Problem, rc: &Recomputed) -> Result<Option<String>> {
    if !point_avoids(p, &rc.y, &rc.y_pt) {
        return Ok(Some("witness y lies in the avoided set".into()));
    }
    let norm = sup_norm(&rc.y_pt);
    if !cert.witness.norm.contains(&norm)? {
        return Ok(Some("recorded |y| enclosure does not contain |y|".into()));
    }
    let bi = inputs(p, rc);
    let (ok, _, b) = match &p.avoidance {
        Avoidance::Polynomials(s) => compare_to_bound(&norm, |prec| bi.grid_bound(s.m_s, prec), false),
        Avoidance::Sublattices(gs) => {
            let idx: Vec<BigInt> = gs.iter().map(|g| g.index.clone()).collect();
            compare_to_bound(&norm, |prec| bi.sublattice_bound(&idx, prec), true)
        }
    };
    Ok(check(ok, || format!("|y| is not certified below the avoidance bound {b}")))
}

fn check_thetas(cert: &Certificate, p: &Problem, rc: &Recomputed) -> Result<Option<String>> {
    if cert.thetas.len() != p.t() {
        return Ok(Some(format!("{} thetas recorded, {} forms", cert.thetas.len(), p.t())));
    }
    let fresh = theta_records(&rc.thetas);
    for (i, (a, b)) in cert.thetas.iter().zip(&fresh).enumerate() {
        let th = element(p, &a.coords)?;
        if th != rc.thetas.thetas[i] {
            return Ok(Some(format!("theta_{} is not L_{}(y)", i + 1, i + 1)));
        }
        if a != b {
            return Ok(Some(format!("minimal polynomial, degree or height of theta_{} differs", i + 1)));
        }
    }
    let ok = cert.e == rc.thetas.e && cert.a_lcm == rc.thetas.a_lcm.to_string() && cert.c1 == (&rc.thetas.c1).into();
    Ok(check(ok, || "e, A or C1 differ from the recomputed values".into()))
}

/// Multiplier applied to `y` and the value `n phi + psi` searched for each form.
fn scaled(cert: &Certificate, p: &Problem, rc: &Recomputed) -> Result<(BigInt, Vec<FieldElement>)> {
    let n = cert.multiplier.trim().parse::<BigInt>().map_err(|_| Error::Parse("multiplier".into()))?;
    let f = &p.efield;
    match cert.theorem {
        1 => Ok((
            n.clone(),
            rc.thetas
                .thetas
                .iter()
                .zip(&p.a)
                .map(|(th, a)| &th.scale_int(&n) - &FieldElement::from_rational(f, a.clone()))
                .collect(),
        )),
        _ => {
            let dp = p.d_prime().ok_or_else(|| Error::InvalidInput("no sublattices".into()))?;
            let vals = rc
                .thetas
                .thetas
                .iter()
                .zip(&p.a)
                .map(|(th, a)| &(&th.scale_int(&(&n * &dp)) + th) - &FieldElement::from_rational(f, a.clone()))
                .collect();
            Ok((&n * &dp + 1, vals))
        }
    }
}

fn check_multiplier(cert: &Certificate, p: &Problem, rc: &Recomputed) -> Result<Option<String>> {
    let (mult, vals) = scaled(cert, p, rc)?;
    if cert.theorem == 1 && mult.is_zero() {
        return Ok(Some("q = 0".into()));
    }
    if let Some(d) = &cert.d_prime {
        if Some(d.clone()) != p.d_prime().map(|x| x.to_string()) {
            return Ok(Some("recorded D' differs from the product of the indices".into()));
        }
    }
    let pv = ints(&cert.p)?;
    if pv.len() != vals.len() {
        return Ok(Some("p has the wrong length".into()));
    }
    for (i, (v, pi)) in vals.iter().zip(&pv).enumerate() {
        let r = v - &FieldElement::from_bigint(&p.efield, pi);
        if !strictly_within(&r, &p.epsilon) {
            return Ok(Some(format!("the multiplier does not put form {} within epsilon of p_{}", i + 1, i + 1)));
        }
    }
    let n = cert.multiplier.trim().parse::<BigInt>().map_err(|_| Error::Parse("multiplier".into()))?;
    let cap = ints(std::slice::from_ref(&cert.kr.search_cap))?.remove(0);
    Ok(check(n.abs() <= cap, || format!("|multiplier| exceeds the search cap {cap}")))
}

fn check_x(cert: &Certificate, p: &Problem, rc: &Recomputed) -> Result<Option<String>> {
    let (mult, _) = scaled(cert, p, rc)?;
    let x = ints(&cert.x)?;
    let expect: Vec<BigInt> = rc.y.iter().map(|c| c * &mult).collect();
    if x != expect {
        return Ok(Some(format!("x is not {mult} y")));
    }
    let pt = p.lattice.point(&x);
    if cert.x_embedded.len() != pt.len() {
        return Ok(Some("embedded x has the wrong length".into()));
    }
    for (e, v) in cert.x_embedded.iter().zip(&pt) {
        if !e.contains(v)? {
            return Ok(Some("embedded enclosure of x does not contain x".into()));
        }
    }
    Ok(None)
}

fn check_avoidance(cert: &Certificate, p: &Problem) -> Result<Option<String>> {
    let x = ints(&cert.x)?;
    if x.len() != p.lattice.rank() {
        return Ok(Some("x has the wrong number of coordinates".into()));
    }
    let pt = p.lattice.point(&x);
    Ok(check(point_avoids(p, &x, &pt), || match &p.avoidance {
        Avoidance::Polynomials(_) => "x lies in the zero set of a system".into(),
        Avoidance::Sublattices(_) => "x lies in an avoided sublattice".into(),
    }))
}

fn check_residuals(cert: &Certificate, p: &Problem) -> Result<Option<String>> {
    let x = ints(&cert.x)?;
    if x.len() != p.lattice.rank() {
        return Ok(Some("x has the wrong number of coordinates".into()));
    }
    let pv = ints(&cert.p)?;
    if pv.len() != p.t() || cert.residuals.len() != p.t() {
        return Ok(Some("p or residuals have the wrong length".into()));
    }
    let vals = p.forms.apply(&p.lattice.point(&x));
    for (i, v) in vals.iter().enumerate() {
        let r = &(v - &FieldElement::from_rational(&p.efield, p.a[i].clone())) - &FieldElement::from_bigint(&p.efield, &pv[i]);
        if !strictly_within(&r, &p.epsilon) {
            return Ok(Some(format!("|L_{}(x) - a_{} - p_{}| is not below epsilon", i + 1, i + 1, i + 1)));
        }
        if !cert.residuals[i].contains(&r.abs())? {
            return Ok(Some(format!("recorded residual {} does not enclose the exact value", i + 1)));
        }
    }
    Ok(None)
}

fn check_norm(cert: &Certificate, p: &Problem, rc: &Recomputed) -> Result<Option<String>> {
    let x = ints(&cert.x)?;
    if x.len() != p.lattice.rank() {
        return Ok(Some("x has the wrong number of coordinates".into()));
    }
    let norm = sup_norm(&p.lattice.point(&x));
    if !cert.x_norm.contains(&norm)? {
        return Ok(Some("recorded |x| enclosure does not contain |x|".into()));
    }
    let bound = rc.bound.value().clone();
    let (ok, xe, _) = compare_to_bound(&norm, |_| bound.clone(), false);
    Ok(check(ok, || format!("|x| = {xe} is not certified below the bound {bound}")))
}

fn check_bound_value(cert: &Certificate, rc: &Recomputed) -> Result<Option<String>> {
    let fresh = bound_record(&rc.bound);
    if cert.bound.value != fresh.value {
        return Ok(Some(format!(
            "recorded bound [{}, {}] differs from the recomputed [{}, {}]",
            cert.bound.value.lo, cert.bound.value.hi, fresh.value.lo, fresh.value.hi
        )));
    }
    Ok(check(cert.bound.simplified == fresh.simplified && cert.bound.eps_factor == fresh.eps_factor, || {
        "simplified bound or epsilon factor differs".into()
    }))
}

fn check_constants(cert: &Certificate, p: &Problem, rc: &Recomputed) -> Result<Option<String>> {
    let fresh = bound_record(&rc.bound);
    if cert.bound.kappa != fresh.kappa || cert.bound.ell != fresh.ell {
        return Ok(Some("kappa or ell differ".into()));
    }
    if cert.bound.alpha != fresh.alpha || cert.bound.constants != fresh.constants {
        return Ok(Some("bound constants differ".into()));
    }
    let search = match cert.theorem {
        1 => rc.thetas.clone(),
        _ => {
            let dp = p.d_prime().ok_or_else(|| Error::InvalidInput("no sublattices".into()))?;
            ThetaSystem::new(rc.thetas.thetas.iter().map(|t| t.scale_int(&dp)).collect())?
        }
    };
    let (generic, sharp, cap) = kr_bounds(p, &search)?;
    let kr = KrRecord {
        generic: (&generic).into(),
        sharp: (&sharp).into(),
        search_cap: cap.to_string(),
        e: search.e,
        a_lcm: search.a_lcm.to_string(),
        c1: (&search.c1).into(),
    };
    if cert.kr != kr {
        return Ok(Some("KR bounds or constants differ".into()));
    }
    let thb = match (&p.avoidance, &rc.bound) {
        (Avoidance::Polynomials(s), TheoremBound::First(b)) => theta_height_bound1(p, &b.c_k.height, s.m_s),
        (Avoidance::Sublattices(gs), TheoremBound::Second(b)) => {
            theta_height_bound2(p, &b.h_alpha, &gs.iter().map(|g| g.index.clone()).collect::<Vec<_>>())
        }
        _ => return Ok(Some("theorem does not match the avoidance mode".into())),
    };
    let within = rc.thetas.heights.iter().all(|h| h.hi <= thb.lo);
    Ok(check(cert.theta_height_bound == (&thb).into() && cert.theta_heights_within == within, || {
        "theta height bound differs".into()
    }))
}
