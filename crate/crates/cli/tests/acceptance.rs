//! Acceptance suite. Runs every criterion and prints one PASS/FAIL line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use kronecker_core::avoidance::{
    grid_avoid, select_product_poly, sublattice_avoid, BoundInputs, PolySystemSet, Polynomial,
};
use kronecker_core::certificate::{verify, Certificate};
use kronecker_core::exactnum::{FieldDescriptor, FieldElement, IntPoly, Interval};
use kronecker_core::fieldlat::{build_lattice, determinant, EmbeddedLattice, ModuleM, SubfieldK};
use kronecker_core::geometry::{successive_minima, Sublattice};
use kronecker_core::kronecker::{
    bound_theorem1, bound_theorem2, kr_bound, kr_search, liouville_lower, oracle_min_q, solve_theorem1, solve_theorem2,
    ThetaSystem, PRECISION_CAP,
};
use kronecker_core::problem::Problem;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ri(n: i64) -> BigRational {
    rat(n, 1)
}

fn problems_dir() -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "problems"].iter().collect()
}

fn load(name: &str, eps: &str) -> Problem {
    let text = std::fs::read_to_string(problems_dir().join(name)).unwrap();
    Problem::from_json_str(&text.replace("\"epsilon\": \"1/20\"", &format!("\"epsilon\": \"{eps}\""))).unwrap()
}

fn sqrt2_field() -> kronecker_core::exactnum::Field {
    FieldDescriptor::validate(IntPoly::from_i64(&[-2, 0, 1]), Some((ri(1), ri(2)))).unwrap()
}

/// Exact sign of `u + v sqrt2` for rationals `u, v`.
fn sign_sqrt2(u: &BigRational, v: &BigRational) -> i32 {
    let su = u.signum();
    let sv = v.signum();
    let s = |x: &BigRational| if x.is_positive() { 1 } else if x.is_negative() { -1 } else { 0 };
    let (a, b) = (s(&su), s(&sv));
    if a == b || b == 0 {
        return a;
    }
    if a == 0 {
        return b;
    }
    // opposite signs: compare u^2 with 2 v^2
    let lhs = u * u;
    let rhs = ri(2) * v * v;
    if lhs > rhs {
        a
    } else if lhs < rhs {
        b
    } else {
        0
    }
}

/// Exact `||q sqrt2 - a|| < eps` by trying the two integers nearest to the value.
fn within_sqrt2(q: i64, a: &BigRational, eps: &BigRational) -> bool {
    let approx = (q as f64) * std::f64::consts::SQRT_2 - a.to_f64().unwrap();
    let base = approx.floor() as i64;
    (base - 1..=base + 2).any(|p| {
        // |q sqrt2 - a - p| < eps  <=>  q sqrt2 - a - p - eps < 0 < q sqrt2 - a - p + eps
        let c = -a - ri(p);
        sign_sqrt2(&(&c - eps), &ri(q)) < 0 && sign_sqrt2(&(&c + eps), &ri(q)) > 0
    })
}

fn scan_min_q(a: &BigRational, eps: &BigRational, cap: i64) -> Option<i64> {
    (1..=cap).flat_map(|m| [m, -m]).find(|&q| within_sqrt2(q, a, eps))
}

fn timed<T>(limit: Duration, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    let el = t.elapsed();
    assert!(el < limit, "took {el:?}, limit {limit:?}");
    out
}

fn kronecker_core_search() {
    let f = sqrt2_field();
    let th = vec![FieldElement::generator(&f)];
    let ts = ThetaSystem::new(th.clone()).unwrap();
    assert_eq!(ts.e, 2);
    let a = rat(1, 2);
    for (eps, expect) in [(rat(1, 20), Some(6)), (rat(1, 100), None), (rat(1, 1000), None)] {
        timed(Duration::from_secs(5), || {
            let bound = kr_bound(1, 2, &ts.max_height(), &eps).unwrap();
            // 2^2 2^5 (sqrt2)^6 / eps = 1024 / eps
            let exact = ri(1024) / &eps;
            assert!(bound.lo.to_rational() <= exact && exact <= bound.hi.to_rational());
            let cap = exact.to_integer();
            let s = kr_search(&th, std::slice::from_ref(&a), &eps, &cap, PRECISION_CAP).unwrap();
            let oracle = scan_min_q(&a, &eps, cap.to_i64().unwrap()).unwrap();
            assert_eq!(s.n, oracle.into());
            if let Some(e) = expect {
                assert_eq!(oracle, e);
            }
            assert!(BigRational::from_integer(s.n.abs()) <= exact);
            assert_eq!(oracle_min_q(&th, std::slice::from_ref(&a), &eps, 1 << 20).unwrap(), oracle);
        });
    }
}

fn liouville_suite() {
    timed(Duration::from_secs(30), || {
        let f = sqrt2_field();
        let ts = ThetaSystem::new(vec![FieldElement::generator(&f)]).unwrap();
        let c1 = ri(256);
        assert!(ts.c1.lo.to_rational() <= c1 && c1 <= ts.c1.hi.to_rational());
        let mut violations = 0;
        for m in (1..=10_000i64).flat_map(|m| [m, -m]) {
            let chk = liouville_lower(&ts, &[m.into()]).unwrap();
            if chk.distance_enclosure.lo < chk.lower_bound.hi {
                violations += 1;
            }
        }
        assert_eq!(violations, 0);
    });
}

fn int_rows(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
    v.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect()
}

fn rat_rows(v: &[&[i64]]) -> Vec<Vec<BigRational>> {
    v.iter().map(|r| r.iter().map(|&x| ri(x)).collect()).collect()
}

struct DetCase {
    name: &'static str,
    k: SubfieldK,
    disc: i64,
    r2: u32,
    unit_ideal: Vec<Vec<BigRational>>,
    ideal: Vec<Vec<BigRational>>,
    ideal_norm: i64,
}

fn det_cases() -> Vec<DetCase> {
    let q = FieldDescriptor::rationals();
    let s2 = sqrt2_field();
    let s5 = FieldDescriptor::validate(IntPoly::from_i64(&[-5, 0, 1]), Some((ri(2), ri(3)))).unwrap();
    let g2 = FieldElement::generator(&s2);
    let g5 = FieldElement::generator(&s5);
    vec![
        DetCase {
            name: "Q",
            k: SubfieldK::rationals(&q),
            disc: 1,
            r2: 0,
            unit_ideal: rat_rows(&[&[1]]),
            ideal: rat_rows(&[&[3]]),
            ideal_norm: 3,
        },
        DetCase {
            name: "Q(sqrt2)",
            k: SubfieldK::new(&s2, IntPoly::from_i64(&[-2, 0, 1]), vec![g2.clone(), -&g2], vec![], rat_rows(&[&[1, 0], &[0, 1]]), 8.into())
                .unwrap(),
            disc: 8,
            r2: 0,
            unit_ideal: rat_rows(&[&[1, 0], &[0, 1]]),
            ideal: rat_rows(&[&[0, 1], &[2, 0]]),
            ideal_norm: 2,
        },
        DetCase {
            name: "Q(sqrt5)",
            k: SubfieldK::new(
                &s5,
                IntPoly::from_i64(&[-5, 0, 1]),
                vec![g5.clone(), -&g5],
                vec![],
                vec![vec![ri(1), ri(0)], vec![rat(1, 2), rat(1, 2)]],
                5.into(),
            )
            .unwrap(),
            disc: 5,
            r2: 0,
            unit_ideal: vec![vec![ri(1), ri(0)], vec![rat(1, 2), rat(1, 2)]],
            ideal: vec![vec![ri(2), ri(0)], vec![ri(1), ri(1)]],
            ideal_norm: 4,
        },
        DetCase {
            name: "Q(i)",
            k: SubfieldK::new(
                &q,
                IntPoly::from_i64(&[1, 0, 1]),
                vec![],
                vec![(FieldElement::zero(&q), FieldElement::one(&q))],
                rat_rows(&[&[1, 0], &[0, 1]]),
                (-4).into(),
            )
            .unwrap(),
            disc: 4,
            r2: 1,
            unit_ideal: rat_rows(&[&[1, 0], &[0, 1]]),
            ideal: rat_rows(&[&[1, 1], &[2, 0]]),
            ideal_norm: 2,
        },
    ]
}

fn determinant_cross_check() {
    let mut discrepancies = Vec::new();
    for c in det_cases() {
        let d = c.k.d;
        let e1: Vec<i64> = (0..d).map(|i| i64::from(i == 0)).collect();
        let zero = vec![0i64; d];
        let modules: Vec<(usize, Vec<(Vec<Vec<BigRational>>, Vec<Vec<BigInt>>)>, i64)> = vec![
            (1, vec![(c.ideal.clone(), int_rows(&[&e1]))], c.ideal_norm),
            (
                2,
                vec![(c.unit_ideal.clone(), int_rows(&[&e1, &zero])), (c.ideal.clone(), int_rows(&[&e1, &e1]))],
                c.ideal_norm,
            ),
        ];
        for (s, raw, norm) in modules {
            let m = ModuleM::new(&c.k, s, raw).unwrap();
            let l = build_lattice(&m, &c.k).unwrap();
            let rep = determinant(&l, &m, &c.k).unwrap();
            // det^2 = 2^(-2 s r2) |D_K|^s prod N(I_j)^2
            let expect = ri(c.disc).pow(s as i32) * ri(norm * norm) / ri(1i64 << (2 * s as u32 * c.r2));
            assert_eq!(rep.gram_det, expect, "{} s={s}", c.name);
            assert_eq!(rep.closed_form_sq, expect, "{} s={s}", c.name);
            let closed = Interval::from_rational(&expect, 128).sqrt();
            let gram = &rep.enclosure;
            let width = gram.hi.sub(&gram.lo).to_rational().max(closed.hi.sub(&closed.lo).to_rational());
            assert!(width <= gram.lo.to_rational() / ri(1 << 30), "{} s={s} too wide", c.name);
            assert!(gram.lo <= closed.hi && closed.lo <= gram.hi, "{} s={s} disjoint", c.name);
            if !rep.discriminant_form_agrees {
                discrepancies.push(format!("{} s={s}", c.name));
            }
        }
    }
    if !discrepancies.is_empty() {
        println!("    discriminant-form discrepancies: {}", discrepancies.join(", "));
    }
}

fn int_lattice(cols: &[Vec<i64>]) -> EmbeddedLattice {
    let q = FieldDescriptor::rationals();
    let c: Vec<Vec<BigRational>> = cols.iter().map(|c| c.iter().map(|&x| ri(x)).collect()).collect();
    EmbeddedLattice::from_rational_columns(&q, &c).unwrap()
}

fn rank_of(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[rank][col];
                for j in col..ncols {
                    let t = &f * &m[rank][j];
                    m[r][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn det_i64(m: &[Vec<i64>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|&x| ri(x)).collect()).collect();
    let mut det = ri(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return ri(0) };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[r][j] -= t;
            }
        }
    }
    det
}

fn inverse_rowsum(cols: &[Vec<i64>]) -> Option<BigRational> {
    // max row sum of |B^-1|, B with the given columns
    let n = cols.len();
    let mut a: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| ri(cols[j][i])).chain((0..n).map(|j| ri(i64::from(i == j)))).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let inv = a[c][c].recip();
        for j in 0..2 * n {
            a[c][j] = &a[c][j] * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                }
            }
        }
    }
    (0..n).map(|i| (n..2 * n).map(|j| a[i][j].abs()).fold(ri(0), |s, x| s + x)).max()
}

/// Successive minima by scanning every coefficient vector in a box.
fn brute_minima(cols: &[Vec<i64>], r: i64) -> (Vec<i64>, Vec<Vec<i64>>) {
    let n = cols.len();
    let mut pts: Vec<(i64, i64, Vec<i64>)> = Vec::new();
    let mut c = vec![-r; n];
    loop {
        if c.iter().any(|&x| x != 0) {
            let v: Vec<i64> = (0..n).map(|i| (0..n).map(|j| c[j] * cols[j][i]).sum()).collect();
            let sup = v.iter().map(|x| x.abs()).max().unwrap();
            let l1 = c.iter().map(|x| x.abs()).sum();
            pts.push((sup, l1, c.clone()));
        }
        let mut i = 0;
        while i < n {
            if c[i] < r {
                c[i] += 1;
                break;
            }
            c[i] = -r;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    pts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(b.2.cmp(&a.2)));
    let mut lambdas = Vec::new();
    let mut vecs: Vec<Vec<i64>> = Vec::new();
    for (sup, _, c) in pts {
        let mut trial: Vec<Vec<BigRational>> = vecs.iter().map(|v| v.iter().map(|&x| ri(x)).collect()).collect();
        trial.push(c.iter().map(|&x| ri(x)).collect());
        if rank_of(&trial) == trial.len() {
            lambdas.push(sup);
            vecs.push(c);
            if vecs.len() == n {
                break;
            }
        }
    }
    (lambdas, vecs)
}

fn factorial(n: usize) -> BigRational {
    (1..=n as i64).map(ri).fold(ri(1), |a, b| a * b)
}

fn minkowski_sandwich() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut done = 0;
    while done < 50 {
        let n = rng.gen_range(1..=4usize);
        let cols: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let det = det_i64(&cols).abs();
        if det.is_zero() {
            continue;
        }
        let longest = cols.iter().flat_map(|c| c.iter().map(|x| x.abs())).max().unwrap();
        match inverse_rowsum(&cols) {
            Some(rs) if &rs * ri(longest) <= ri(6) => {}
            _ => continue,
        }
        let l = int_lattice(&cols);
        let res = successive_minima(&l).unwrap();
        let (lam, vecs) = brute_minima(&cols, 6);
        let got: Vec<BigRational> = res.lambdas.iter().map(|x| x.as_rational().unwrap()).collect();
        assert_eq!(got, lam.iter().map(|&x| ri(x)).collect::<Vec<_>>(), "cols {cols:?}");
        let gv: Vec<Vec<i64>> = res.vectors.iter().map(|v| v.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        assert_eq!(gv, vecs, "cols {cols:?}");
        let prod = got.iter().fold(ri(1), |a, b| a * b);
        assert!(&det / factorial(n) <= prod && prod <= det, "cols {cols:?}");
        let penc = res.enclosures.iter().fold(Interval::one(64), |a, b| a.mul(b));
        let denc = Interval::from_rational(&det, 64);
        assert!(penc.hi <= denc.lo);
        assert!(penc.lo.to_rational() * factorial(n) >= denc.hi.to_rational());
        done += 1;
    }
}

fn certify(p: &Problem, sol: &kronecker_core::kronecker::Solution) {
    let cert = Certificate::build(sol, p);
    let back = Certificate::parse(&cert.to_canonical_string()).unwrap();
    let r = verify(&back, p);
    assert!(r.all_pass(), "{:?}", r.failed());
}

fn theorem1_end_to_end() {
    for eps in ["9/20", "1/20"] {
        timed(Duration::from_secs(10), || {
            let p = load("sqrt2_sqrt3_t1.json", eps);
            let s = solve_theorem1(&p).unwrap();
            certify(&p, &s);
            let x: Vec<i64> = s.x_coords.iter().map(|c| c.to_i64().unwrap()).collect();
            assert_ne!(x[0], 0);
            // x = q y with y = (1, 0), so L(x) = q sqrt2
            assert_eq!(x[1], 0);
            let q = s.multiplier.to_i64().unwrap();
            assert!(within_sqrt2(q, &rat(1, 2), &p.epsilon));
            let bound = bound_theorem1(&p, &p.epsilon).unwrap().value;
            assert!(ri(x[0].abs()) <= bound.lo.to_rational());
            if eps == "9/20" {
                assert_eq!((x[0], q), (1, 1));
            } else {
                assert_eq!(q, scan_min_q(&rat(1, 2), &p.epsilon, 1000).unwrap());
            }
        });
    }
}

fn theorem2_end_to_end() {
    for eps in ["9/20", "1/20"] {
        timed(Duration::from_secs(10), || {
            let p = load("sqrt2_sqrt3_t2.json", eps);
            let s = solve_theorem2(&p).unwrap();
            certify(&p, &s);
            let x: Vec<i64> = s.x_coords.iter().map(|c| c.to_i64().unwrap()).collect();
            let g = s.multiplier.to_i64().unwrap();
            assert_eq!(s.d_prime, Some(4.into()));
            assert_eq!(x, vec![4 * g + 1, 0]);
            assert_eq!(x[0].rem_euclid(2), 1);
            // L(x) = (4g + 1) sqrt2
            assert!(within_sqrt2(4 * g + 1, &rat(1, 2), &p.epsilon));
            let bound = bound_theorem2(&p, &p.epsilon).unwrap().value;
            assert!(ri(x[0].abs()) <= bound.lo.to_rational());
            if eps == "9/20" {
                assert_eq!(g, 0);
            }
        });
    }
}

fn epsilon_scaling() {
    let p = load("sqrt2_ell2.json", "1/20");
    assert_eq!(p.ell, 2);
    assert!(solve_theorem1(&p).is_ok());
    for eps in [rat(1, 20), rat(1, 3), rat(7, 1000), ri(2)] {
        let a = bound_theorem1(&p, &eps).unwrap();
        let b = bound_theorem1(&p, &(&eps / ri(10))).unwrap();
        assert_eq!(a.eps_factor, eps.recip());
        assert_eq!(b.eps_factor, &a.eps_factor * ri(10));
        assert_eq!(a.prefactor, b.prefactor);
        // value = prefactor * eps^(-l+1), so the ratio of values is exactly 10
        let ten_a = a.prefactor.mul_rational(&(&a.eps_factor * ri(10)));
        assert_eq!(ten_a, b.value);
        assert!(b.value.lo <= a.value.hi.mul_int(&10.into()) && a.value.lo.mul_int(&10.into()) <= b.value.hi);
    }
}

fn in_sublattice(cols: &[Vec<i64>], y: &[BigInt]) -> bool {
    // solve G c = y over Q, then test integrality
    let n = cols.len();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| ri(cols[j][i])).chain(std::iter::once(BigRational::from_integer(y[i].clone()))).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).unwrap();
        a.swap(p, c);
        let inv = a[c][c].recip();
        for j in 0..=n {
            a[c][j] = &a[c][j] * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..=n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                }
            }
        }
    }
    (0..n).all(|i| a[i][n].is_integer())
}

fn sublattice_bound_f64(det: f64, indices: &[i64], n: usize) -> f64 {
    let di: Vec<f64> = indices.iter().map(|&k| k as f64 * det).collect();
    let d: f64 = di.iter().product();
    let sum: f64 = di.iter().map(|x| d / x).sum();
    2f64.sqrt().powi(n as i32 - 1) * det * (sum - indices.len() as f64 + 1.0) + d.powf(1.0 / n as f64)
}

fn avoidance_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let q = FieldDescriptor::rationals();
    let mut done = 0;
    let mut failures = 0;
    while done < 200 {
        let n = rng.gen_range(2..=3usize);
        let cols: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let det = det_i64(&cols).abs();
        if det.is_zero() {
            continue;
        }
        let l = int_lattice(&cols);
        let inputs = BoundInputs { sd: n, gram_det: &det * &det, alpha: FieldElement::one(&q) };
        let ok = if done % 2 == 0 {
            let m = rng.gen_range(1..=3usize);
            let mut gcols = Vec::new();
            for _ in 0..m {
                let g: Vec<Vec<i64>> = (0..n)
                    .map(|j| (0..n).map(|i| if i == j { rng.gen_range(1..=4) } else if i < j { rng.gen_range(0..=2) } else { 0 }).collect())
                    .collect();
                if det_i64(&g).abs() == ri(1) {
                    continue;
                }
                gcols.push(g);
            }
            if gcols.is_empty() {
                continue;
            }
            let gs: Vec<Sublattice> = gcols
                .iter()
                .map(|g| Sublattice::from_columns(&g.iter().map(|c| c.iter().map(|&x| x.into()).collect()).collect::<Vec<_>>()).unwrap())
                .collect();
            let w = sublattice_avoid(&l, &gs, &inputs).unwrap();
            let indices: Vec<i64> = gcols.iter().map(|g| det_i64(g).abs().to_integer().to_i64().unwrap()).collect();
            let bound = sublattice_bound_f64(det.to_f64().unwrap(), &indices, n);
            let norm = w.norm.as_rational().unwrap().to_f64().unwrap();
            w.y_coords.iter().any(|c| !c.is_zero())
                && gcols.iter().all(|g| !in_sublattice(g, &w.y_coords))
                && norm < bound * (1.0 + 1e-9)
                && w.norm_enclosure.hi < w.bound.lo
        } else {
            let nsys = rng.gen_range(1..=2usize);
            let mut systems = Vec::new();
            let mut exps = Vec::new();
            for _ in 0..nsys {
                let e: Vec<u32> = loop {
                    let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
                    if e.iter().sum::<u32>() > 0 {
                        break e;
                    }
                };
                systems.push(vec![Polynomial::new(n, [(e.clone(), ri(1))]).unwrap()]);
                exps.push(e);
            }
            let s = PolySystemSet::new(systems, n, false).unwrap();
            let minima = successive_minima(&l).unwrap();
            let prod = select_product_poly(&s, &l, &minima).unwrap();
            let w = grid_avoid(&l, &prod, &minima, &inputs).unwrap();
            let y: Vec<BigRational> = w.y_embedded.iter().map(|v| v.as_rational().unwrap()).collect();
            let direct: Vec<BigRational> = (0..n)
                .map(|i| (0..n).map(|j| ri(cols[j][i]) * BigRational::from_integer(w.y_coords[j].clone())).fold(ri(0), |a, b| a + b))
                .collect();
            let nonvanishing = exps.iter().all(|e| {
                let v = e.iter().zip(&direct).fold(ri(1), |a, (&k, x)| a * x.pow(k as i32));
                !v.is_zero()
            });
            let m_s: u32 = exps.iter().map(|e| e.iter().sum::<u32>()).sum();
            let minima_det: f64 = det.to_f64().unwrap();
            let bound = (n as f64) * m_s as f64 * 2f64.sqrt().powi(n as i32 - 1) * minima_det;
            let norm = y.iter().map(|x| x.abs()).max().unwrap().to_f64().unwrap();
            y == direct && nonvanishing && norm <= bound * (1.0 + 1e-9) && w.norm_enclosure.hi <= w.bound.lo
        };
        if !ok {
            failures += 1;
        }
        done += 1;
    }
    assert_eq!(failures, 0);
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut full = vec!["kronecker"];
    full.extend_from_slice(args);
    let parsed = <kronecker_cli::Cli as clap::Parser>::try_parse_from(full).unwrap();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = kronecker_cli::run(parsed, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
}

fn failing_items(report: &str) -> Vec<String> {
    report
        .lines()
        .filter(|l| l.split_whitespace().nth(1) == Some("FAIL"))
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect()
}

fn tamper_suite() {
    let dir = tempfile::tempdir().unwrap();
    for (problem, theorem) in [("sqrt2_sqrt3_t1.json", "1"), ("sqrt2_sqrt3_t2.json", "2")] {
        let ppath = problems_dir().join(problem);
        let cpath = dir.path().join("cert.json");
        let ps = ppath.to_str().unwrap();
        let cs = cpath.to_str().unwrap();
        let (code, _) = cli(&["solve", ps, "--theorem", theorem, "--out", cs]);
        assert_eq!(code, 0);
        let (code, _) = cli(&["verify", cs, ps]);
        assert_eq!(code, 0);
        let original = Certificate::parse(&std::fs::read_to_string(&cpath).unwrap()).unwrap();
        let bump = |s: &str| (s.parse::<i64>().unwrap() + 1).to_string();
        let cases: Vec<(&str, Box<dyn Fn(&mut Certificate)>, i32)> = vec![
            ("residuals", Box::new(move |c: &mut Certificate| c.p[0] = bump(&c.p[0])), 1),
            ("multiplier", Box::new(move |c: &mut Certificate| c.multiplier = bump(&c.multiplier)), 1),
            ("x", Box::new(move |c: &mut Certificate| c.x[0] = bump(&c.x[0])), 1),
            ("bound_value", Box::new(|c: &mut Certificate| c.bound.value.lo = format!("{}/3", c.bound.value.lo.split('/').next().unwrap())), 1),
            ("problem_hash", Box::new(|c: &mut Certificate| c.problem_hash = "f".repeat(64)), 2),
        ];
        for (item, edit, expect_code) in cases {
            let mut c = original.clone();
            edit(&mut c);
            let tpath = dir.path().join(format!("tampered-{item}.json"));
            std::fs::write(&tpath, c.to_canonical_string()).unwrap();
            let (code, report) = cli(&["verify", tpath.to_str().unwrap(), ps]);
            assert_eq!(code, expect_code, "{item}: {report}");
            assert!(failing_items(&report).contains(&item.to_string()), "{item}: {report}");
        }
    }
}

fn main() {
    let criteria: Vec<(&str, fn())> = vec![
        ("1 effective Kronecker core", kronecker_core_search),
        ("2 Liouville suite", liouville_suite),
        ("3 determinant cross-check", determinant_cross_check),
        ("4 Minkowski sandwich", minkowski_sandwich),
        ("5 first theorem end-to-end", theorem1_end_to_end),
        ("6 second theorem end-to-end", theorem2_end_to_end),
        ("7 epsilon scaling law", epsilon_scaling),
        ("8 avoidance soundness fuzz", avoidance_fuzz),
        ("9 certificate tamper suite", tamper_suite),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f));
        let verdict = if r.is_ok() { "PASS" } else { "FAIL" };
        if r.is_err() {
            failed += 1;
        }
        println!("criterion {name:<32} {verdict} ({:.2?})", t.elapsed());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
