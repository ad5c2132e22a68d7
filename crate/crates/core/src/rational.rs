//! Exact rational scalars used by all structural algebra.
//!
//! Every quantity that feeds a structural decision (factorization, cone
//! construction, dual generators) is a `BigRational`; floating point only
//! appears in the ODE integrator and the gauge LP, where a numeric answer is
//! the point.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

/// Rational from an integer.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn qr(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational equal to the given finite `f64`.
///
/// Binary floats are dyadic rationals, so the conversion is lossless.
pub fn q_from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float required")
}

/// Nearest `f64` to a rational (used only at numeric boundaries).
pub fn q_to_f64(x: &Q) -> f64 {
    num::ToPrimitive::to_f64(x).expect("rational to f64")
}

/// Renders `p/q`, or just `p` when the denominator is 1.
pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `p/q`, or a plain decimal like `1.5`.
pub fn q_parse(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_part: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        let frac: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Q::new(frac, scale);
        let whole = Q::from_integer(int_part.abs());
        let total = whole + frac;
        return Some(if negative { -total } else { total });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Q::from_integer(n))
}

/// Sign of a rational as −1, 0, or 1.
pub fn sgn(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7", "2/5", "-11/4", "0"] {
            let q = q_parse(s).unwrap();
            assert_eq!(q_to_string(&q), s);
        }
    }

    #[test]
    fn parse_decimals() {
        assert_eq!(q_parse("1.5").unwrap(), qr(3, 2));
        assert_eq!(q_parse("-0.25").unwrap(), qr(-1, 4));
        assert_eq!(q_parse("2.").unwrap_or(qi(0)), qi(0)); // trailing dot rejected
    }

    #[test]
    fn float_round_trip_is_exact_for_dyadics() {
        for x in [0.5, -0.125, 3.0, 1e-9] {
            assert_eq!(q_to_f64(&q_from_f64(x)), x);
        }
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(q_parse("1/0").is_none());
    }
}
