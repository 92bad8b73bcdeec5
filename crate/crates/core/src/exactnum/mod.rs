//! Exact arithmetic: dyadic intervals, integer and rational polynomials, the
//! ambient number field, certified complex roots and heights.

pub mod dyadic;
pub mod field;
pub mod height;
pub mod irreducible;
pub mod linalg;
pub mod poly;
pub mod roots;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub use dyadic::{Dyadic, Interval, DEFAULT_PREC};
pub use field::{generated_subalgebra, minimal_polynomial, rational_rank, Field, FieldDescriptor, FieldElement};
pub use height::{vector_height, weil_height};
pub use poly::{IntPoly, RatPoly};

/// `"n"` or `"n/d"` form of a rational.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `"n"`, `"n/d"` or a finite decimal like `"0.05"` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let m: BigInt = digits.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(m, den);
        return Some(if neg { -q } else { q });
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_roundtrip() {
        assert_eq!(parse_rational("1/20"), parse_rational("0.05"));
        assert_eq!(parse_rational("-3/6").map(|q| format_rational(&q)), Some("-1/2".into()));
        assert_eq!(parse_rational("-0.5").map(|q| format_rational(&q)), Some("-1/2".into()));
        assert_eq!(parse_rational("7").map(|q| format_rational(&q)), Some("7".into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}
