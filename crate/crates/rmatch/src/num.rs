//! Exact arithmetic helpers: big binomials, rational binomials, and
//! parsing of `p/q` strings.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational used throughout the crate.
pub type Rat = BigRational;

/// `C(n, k)` over the naturals. `C(n, k) = 0` when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

/// `C(n, k)` as an exact rational.
pub fn binomial_rat_int(n: u64, k: u64) -> Rat {
    Rat::from_integer(BigInt::from(binomial(n, k)))
}

/// Generalized binomial `C(x, k) = x (x-1) ... (x-k+1) / k!` for rational `x`.
///
/// Used for degree thresholds whose arguments (such as `3n/4` or `b - b/k`)
/// need not be integers at desk scale. Negative results are possible for
/// negative `x`; callers compare, they do not count with this.
pub fn binomial_rat(x: &Rat, k: u64) -> Rat {
    let mut num = Rat::one();
    for i in 0..k {
        num *= x - Rat::from_integer(BigInt::from(i));
    }
    let mut den = BigInt::one();
    for i in 1..=k {
        den *= BigInt::from(i);
    }
    num / Rat::from_integer(den)
}

/// Rational from an integer pair.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Rational from a natural number.
pub fn rat_int(p: u64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Parses `"p/q"`, a plain integer, or a decimal such as `"0.05"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse()
                .map_err(|_| Error::Parse(format!("bad decimal in {s:?}")))?
        };
        let frac_val: BigInt = frac
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal in {s:?}")))?;
        let scale = BigInt::from(10u32).pow(digits);
        let neg = s.starts_with('-');
        let abs = int.abs() * &scale + frac_val;
        let signed = if neg { -abs } else { abs };
        return Ok(Rat::new(signed, scale));
    }
    let p: BigInt = s
        .parse()
        .map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?;
    Ok(Rat::from_integer(p))
}

/// Renders a rational as `p/q` (or just `p` when integral).
pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion for sampling probabilities and report summaries.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}
