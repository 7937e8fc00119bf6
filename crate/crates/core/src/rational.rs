//! Helpers for exact rational values: parsing the `P/Q` wire syntax,
//! formatting, and directed-rounding square roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Parses `P/Q` or a bare integer `P` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = |msg: &str| Error::Domain(format!("invalid rational '{text}': {msg}"));
    let (num_s, den_s) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num_s.parse().map_err(|_| bad("bad numerator"))?;
    let den: BigInt = den_s.parse().map_err(|_| bad("bad denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Renders a rational as `num/den` in lowest terms, denominator always shown.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Decimal approximation for human-readable reports.
pub fn approx_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Rational upper bound on sqrt(q), accurate to a relative error of about
/// 1/scale. Rounds upward so probabilistic guarantees built on it survive.
pub fn sqrt_upper(q: &BigRational, scale: u64) -> Result<BigRational> {
    if q.is_negative() {
        return Err(Error::Domain("square root of negative value".into()));
    }
    if q.is_zero() {
        return Ok(BigRational::zero());
    }
    let scale = BigInt::from(scale);
    // sqrt(n/d) = sqrt(n*d)/d; floor-isqrt of n*d*scale^2, then round up.
    let scaled = q.numer() * q.denom() * &scale * &scale;
    let root = scaled.sqrt();
    let root = if &root * &root == scaled { root } else { root + 1 };
    Ok(BigRational::new(root, q.denom() * scale))
}

/// Default precision for [`sqrt_upper`]: relative error about 1e-9.
pub const SQRT_SCALE: u64 = 1_000_000_000;

/// Exact floor of a rational, as a big integer.
pub fn floor_to_int(q: &BigRational) -> BigInt {
    q.numer().div_floor(q.denom())
}
