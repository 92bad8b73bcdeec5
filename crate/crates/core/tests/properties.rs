use kronecker_core::exactnum::{weil_height, Field, FieldDescriptor, FieldElement, IntPoly, Interval};
use kronecker_core::fieldlat::EmbeddedLattice;
use kronecker_core::geometry::{intersect, successive_minima, Sublattice};
use kronecker_core::kronecker::{kr_search, oracle_min_q, PRECISION_CAP};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn ri(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn sqrt2() -> Field {
    FieldDescriptor::validate(IntPoly::from_i64(&[-2, 0, 1]), Some((ri(1), ri(2)))).unwrap()
}

fn elem(f: &Field, a: i64, b: i64) -> FieldElement {
    FieldElement::from_coords(f, vec![ri(a), ri(b)]).unwrap()
}

fn overlaps(a: &Interval, b: &Interval) -> bool {
    a.lo <= b.hi && b.lo <= a.hi
}

fn int_lattice(cols: &[Vec<i64>]) -> EmbeddedLattice {
    let c: Vec<Vec<BigRational>> = cols.iter().map(|c| c.iter().map(|&x| ri(x)).collect()).collect();
    EmbeddedLattice::from_rational_columns(&FieldDescriptor::rationals(), &c).unwrap()
}

fn det2(c: &[Vec<i64>]) -> i64 {
    c[0][0] * c[1][1] - c[0][1] * c[1][0]
}

fn hnf_sublattice(d: &[i64], off: i64) -> Sublattice {
    let cols: Vec<Vec<BigInt>> = vec![vec![d[0].into(), 0.into()], vec![off.rem_euclid(d[0]).into(), d[1].into()]];
    Sublattice::from_columns(&cols).unwrap()
}

/// `x` in the lattice spanned by the columns `(a, 0)`, `(b, c)`.
fn member(a: i64, b: i64, c: i64, x: &[i64]) -> bool {
    x[1] % c == 0 && (x[0] - b * (x[1] / c)) % a == 0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn height_is_submultiplicative(a in -9i64..9, b in -9i64..9, c in -9i64..9, d in -9i64..9) {
        prop_assume!((a, b) != (0, 0) && (c, d) != (0, 0));
        let f = sqrt2();
        let (x, y) = (elem(&f, a, b), elem(&f, c, d));
        let hx = weil_height(&x);
        let hy = weil_height(&y);
        prop_assert!(weil_height(&(&x * &y)).lo <= hx.mul(&hy).hi);
        prop_assert!(overlaps(&weil_height(&x.inv().unwrap()), &hx));
        prop_assert!(overlaps(&weil_height(&x.pow(3)), &hx.powi(3)));
    }

    #[test]
    fn sign_matches_squares(a in -50i64..50, b in -50i64..50) {
        let f = sqrt2();
        // sign of a + b sqrt2
        let expect = if b == 0 {
            a.signum()
        } else if a.signum() == b.signum() || a == 0 {
            b.signum()
        } else if a * a > 2 * b * b {
            a.signum()
        } else {
            b.signum()
        };
        prop_assert_eq!(elem(&f, a, b).sign() as i64, expect);
    }

    #[test]
    fn minkowski_sandwich(a in -4i64..5, b in -4i64..5, c in -4i64..5, d in -4i64..5) {
        let cols = vec![vec![a, b], vec![c, d]];
        let det = det2(&cols).abs();
        prop_assume!(det != 0);
        let res = successive_minima(&int_lattice(&cols)).unwrap();
        let prod = res.lambdas.iter().fold(ri(1), |acc, l| acc * l.as_rational().unwrap());
        prop_assert!(ri(det) / ri(2) <= prod && prod <= ri(det));
    }

    #[test]
    fn minima_scale_linearly(a in -4i64..5, b in -4i64..5, c in -4i64..5, d in -4i64..5, n in 1i64..=10) {
        let cols = vec![vec![a, b], vec![c, d]];
        prop_assume!(det2(&cols) != 0);
        let scaled: Vec<Vec<i64>> = cols.iter().map(|c| c.iter().map(|x| x * n).collect()).collect();
        let base = successive_minima(&int_lattice(&cols)).unwrap();
        let big = successive_minima(&int_lattice(&scaled)).unwrap();
        for (l, m) in base.lambdas.iter().zip(&big.lambdas) {
            prop_assert_eq!(l.as_rational().unwrap() * ri(n), m.as_rational().unwrap());
        }
        prop_assert_eq!(base.vectors, big.vectors);
    }

    #[test]
    fn membership_matches_direct(a in 1i64..6, c in 1i64..6, b in 0i64..6, x0 in -20i64..20, x1 in -20i64..20) {
        let g = hnf_sublattice(&[a, c], b);
        let b = b.rem_euclid(a);
        prop_assert_eq!(g.index.clone(), BigInt::from(a * c));
        prop_assert_eq!(g.contains(&[x0.into(), x1.into()]), member(a, b, c, &[x0, x1]));
    }

    #[test]
    fn intersection_is_conjunction(
        a in 1i64..5, c in 1i64..5, b in 0i64..5,
        a2 in 1i64..5, c2 in 1i64..5, b2 in 0i64..5,
        x0 in -30i64..30, x1 in -30i64..30,
    ) {
        let g1 = hnf_sublattice(&[a, c], b);
        let g2 = hnf_sublattice(&[a2, c2], b2);
        let both = intersect(&[g1.clone(), g2.clone()]).unwrap();
        let x: Vec<BigInt> = vec![x0.into(), x1.into()];
        prop_assert_eq!(both.contains(&x), g1.contains(&x) && g2.contains(&x));
        prop_assert!((&both.index % &g1.index).is_zero() && (&both.index % &g2.index).is_zero());
    }

    #[test]
    fn search_is_oracle_minimal(num in 0i64..20, den in 1i64..20, eps_den in 3i64..60) {
        let f = sqrt2();
        let th = vec![FieldElement::generator(&f)];
        let a = BigRational::new(num.into(), den.into());
        let eps = BigRational::new(1.into(), eps_den.into());
        let s = kr_search(&th, std::slice::from_ref(&a), &eps, &BigInt::from(10_000), PRECISION_CAP).unwrap();
        let o = oracle_min_q(&th, &[a], &eps, 10_000).unwrap();
        prop_assert_eq!(s.n.clone(), BigInt::from(o));
        prop_assert!(s.residuals[0].hi.to_rational() < eps);
        prop_assert!(!s.n.abs().is_zero());
    }
}
