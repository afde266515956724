//! Exact rational scalars: parsing, formatting, and integer factorization
//! helpers used to canonicalize radical expressions.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use std::str::FromStr;

/// The exact rational type used throughout the crate.
pub type Q = num_rational::BigRational;

/// Errors arising while parsing scalar literals.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("empty scalar literal")]
    Empty,
    #[error("invalid scalar literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses a scalar literal exactly.
///
/// Accepted grammar: an optional sign followed by either a fraction `p/q`
/// (decimal integers), a decimal literal (`12`, `3.25`, `.5`), or a decimal
/// literal with a base-ten exponent (`1e-3`, `2.5E2`). Every form is converted
/// to an exact rational; decimals are **not** rounded through binary floating
/// point.
pub fn parse_rational(s: &str) -> Result<Q, ParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::Empty);
    }
    let (sign, body) = match t.as_bytes()[0] {
        b'+' => (1, &t[1..]),
        b'-' => (-1, &t[1..]),
        _ => (1, t),
    };
    if body.is_empty() {
        return Err(ParseError::Invalid(s.to_string()));
    }
    let magnitude = if let Some((num, den)) = body.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| ParseError::Invalid(s.to_string()))?;
        let d = BigInt::from_str(den.trim()).map_err(|_| ParseError::Invalid(s.to_string()))?;
        if d.is_zero() {
            return Err(ParseError::ZeroDenominator(s.to_string()));
        }
        Q::new(n, d)
    } else {
        parse_decimal(body).ok_or_else(|| ParseError::Invalid(s.to_string()))?
    };
    Ok(if sign < 0 { -magnitude } else { magnitude })
}

/// Parses an unsigned decimal literal with optional fractional part and
/// exponent into an exact rational.
fn parse_decimal(body: &str) -> Option<Q> {
    let (mantissa, exp) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, i64::from_str(e.trim()).ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
    if !digits_ok(int_part) || !digits_ok(frac_part) {
        return None;
    }
    let all = format!("{int_part}{frac_part}");
    let n = if all.is_empty() {
        BigInt::zero()
    } else {
        BigInt::from_str(&all).ok()?
    };
    let scale = frac_part.len() as i64;
    // value = n * 10^(exp - scale)
    let e = exp - scale;
    let ten = BigInt::from(10u32);
    Some(if e >= 0 {
        Q::from_integer(n * ten.pow(e as u32))
    } else {
        Q::new(n, ten.pow((-e) as u32))
    })
}

/// Formats a rational canonically: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Primes below 10 000, used for eager trial division of radical bases.
static SMALL_PRIMES: Lazy<Vec<u64>> = Lazy::new(|| {
    let limit = 10_000usize;
    let mut sieve = vec![true; limit];
    sieve[0] = false;
    sieve[1] = false;
    for i in 2..limit {
        if sieve[i] {
            let mut j = i * i;
            while j < limit {
                sieve[j] = false;
                j += i;
            }
        }
    }
    (2..limit).filter(|&i| sieve[i]).map(|i| i as u64).collect()
});

/// Splits `n ≥ 1` into a small-prime factorization and a residual cofactor
/// with no prime factor below 10 000.
pub fn factor_small(n: &BigUint) -> (Vec<(BigUint, u32)>, BigUint) {
    let mut rem = n.clone();
    let mut out = Vec::new();
    if rem.is_one() {
        return (out, rem);
    }
    for &p in SMALL_PRIMES.iter() {
        let pb = BigUint::from(p);
        if &pb * &pb > rem {
            break;
        }
        let mut e = 0u32;
        while (&rem % &pb).is_zero() {
            rem /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
        if rem.is_one() {
            break;
        }
    }
    // A residual below 10^8 has no prime factor below its square root, hence is prime.
    if !rem.is_one() && rem.to_u64().map_or(false, |v| v < 100_000_000) {
        out.push((rem.clone(), 1));
        rem = BigUint::one();
    }
    (out, rem)
}

/// Reduces `n ≥ 2` to `(r, k)` with `n = r^k` and `k` maximal.
pub fn max_perfect_power(n: &BigUint) -> (BigUint, u32) {
    let bits = n.bits() as u32;
    if bits <= 1 {
        return (n.clone(), 1);
    }
    for k in (2..=bits).rev() {
        let r = n.nth_root(k);
        if r.pow(k) == *n {
            // Recurse in case r itself is a perfect power (handled by maximality of k
            // for prime k, but compose for safety).
            let (r2, k2) = max_perfect_power(&r);
            return (r2, k * k2);
        }
    }
    (n.clone(), 1)
}

/// Greatest common divisor of two positive integers.
pub fn gcd_big(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// Floor of log₂ of a positive rational, used to seed precision choices.
pub fn log2_magnitude(q: &Q) -> i64 {
    if q.is_zero() {
        return 0;
    }
    let n = q.numer().abs().to_biguint().unwrap();
    let d = q.denom().abs().to_biguint().unwrap();
    n.bits() as i64 - d.bits() as i64
}

/// Serde helper: serializes a rational as its canonical string form.
pub fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

/// Convenience constructor for small rationals.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for integers.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}
