//! Scalar field helpers. Entries are arbitrary-precision rationals, always in
//! canonical form (positive denominator, reduced).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `p/q`. Panics on `q == 0`.
pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"` or an integer string. Decimal and exponent notation are
/// rejected so that no value silently passes through floating point.
pub fn parse(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational string".into());
    }
    if t.contains(['.', 'e', 'E']) {
        return Err(format!(
            "'{t}' looks like a decimal float; write exact values as integers or \"p/q\" (e.g. \"1/2\")"
        ));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("invalid numerator in '{t}'"))?;
    let den: BigInt = den.parse().map_err(|_| format!("invalid denominator in '{t}'"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in '{t}'"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical string: `"p"` for integers, `"p/q"` otherwise.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Scales a nonzero rational vector to the primitive integer vector with the
/// same direction.
pub fn primitive_direction(v: &[Rational]) -> Vec<Rational> {
    use num_integer::Integer;
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x.abs()));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse("-2").unwrap(), int(-2));
        assert_eq!(parse("1/3").unwrap(), frac(1, 3));
        assert_eq!(parse("4/-6").unwrap(), frac(-2, 3));
        assert_eq!(format(&frac(4, 6)), "2/3");
        assert_eq!(format(&int(-7)), "-7");
    }

    #[test]
    fn rejects_floats_and_zero_denominators() {
        assert!(parse("0.5").unwrap_err().contains("decimal"));
        assert!(parse("1e3").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn primitive_direction_clears_denominators() {
        let v = vec![frac(1, 2), frac(-3, 4), zero()];
        assert_eq!(primitive_direction(&v), vec![int(2), int(-3), int(0)]);
    }
}
