use std::path::PathBuf;

use kronecker_core::kronecker::{solve_theorem1, solve_theorem2};
use kronecker_core::problem::Problem;
use kronecker_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;

fn problem(name: &str, eps: Option<&str>) -> Problem {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "problems", name].iter().collect();
    let mut text = std::fs::read_to_string(path).unwrap();
    if let Some(e) = eps {
        text = text.replace("\"epsilon\": \"1/20\"", &format!("\"epsilon\": \"{e}\""));
    }
    Problem::from_json_str(&text).unwrap()
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| x.into()).collect()
}

#[test]
fn first_theorem_small_epsilon() {
    let p = problem("sqrt2_sqrt3_t1.json", None);
    let s = solve_theorem1(&p).unwrap();
    assert_eq!(s.witness.y_coords, ints(&[1, 0]));
    assert_eq!(s.multiplier, 6.into());
    assert_eq!(s.x_coords, ints(&[6, 0]));
    assert_eq!(s.p, ints(&[8]));
    assert!(s.theta_heights_within);
}

#[test]
fn first_theorem_large_epsilon() {
    let p = problem("sqrt2_sqrt3_t1.json", Some("9/20"));
    let s = solve_theorem1(&p).unwrap();
    assert_eq!(s.multiplier, 1.into());
    assert_eq!(s.x_coords, ints(&[1, 0]));
}

#[test]
fn second_theorem() {
    let p = problem("sqrt2_sqrt3_t2.json", None);
    let s = solve_theorem2(&p).unwrap();
    assert_eq!(s.d_prime, Some(4.into()));
    assert_eq!(s.multiplier, (-6).into());
    assert_eq!(s.x_coords, ints(&[-23, 0]));
    let p = problem("sqrt2_sqrt3_t2.json", Some("9/20"));
    let s = solve_theorem2(&p).unwrap();
    assert_eq!(s.multiplier, 0.into());
    assert_eq!(s.x_coords, ints(&[1, 0]));
}

#[test]
fn dependent_forms_refused() {
    let p = problem("dependent.json", None);
    assert!(matches!(solve_theorem1(&p), Err(Error::IndependenceFailure(_))));
}

#[test]
fn wrong_mode_rejected() {
    let p = problem("sqrt2_sqrt3_t1.json", None);
    assert!(matches!(solve_theorem2(&p), Err(Error::InvalidInput(_))));
    let _ = BigRational::from_integer(1.into());
}
