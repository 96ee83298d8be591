//! Rate and distance bounds in exact rational arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::AnalysisError;

pub type Rational = num_rational::BigRational;

pub fn ratio(num: usize, den: usize) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Upper bound on the rate for locality `r` and availability `t` on all
/// coordinates: the product of `ir / (ir + 1)` for `i = 1..=t`.
pub fn tamo_rate_bound(r: usize, t: usize) -> Rational {
    (1..=t).map(|i| ratio(i * r, i * r + 1)).product()
}

/// Distance bound `n - sum_{i=0}^{t} floor((k-1) / r^i)`. May be negative
/// when `r = 1` and `k` is large relative to `n`.
pub fn tamo_distance_bound(n: usize, k: usize, r: usize, t: usize) -> Result<i128, AnalysisError> {
    if k == 0 || r == 0 {
        return Err(AnalysisError::InvalidParameters(format!(
            "need k >= 1 and r >= 1, got k={k}, r={r}"
        )));
    }
    let top = (k - 1) as u128;
    let mut sum: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..=t {
        let term = top / power;
        if term == 0 {
            break;
        }
        sum += term;
        power = power.saturating_mul(r as u128);
    }
    Ok(n as i128 - sum as i128)
}

/// Rate bound `r / (r + delta - 1)` for codes with `(r, delta)` locality.
pub fn song_bound(r: usize, delta: usize) -> Result<Rational, AnalysisError> {
    if r == 0 || delta < 2 {
        return Err(AnalysisError::InvalidParameters(format!(
            "need r >= 1 and delta >= 2, got r={r}, delta={delta}"
        )));
    }
    Ok(ratio(r, r + delta - 1))
}

/// Rate bound `r / (r + 2)` for locally 2-reconstructible linear codes.
pub fn prakash_bound(r: usize) -> Rational {
    ratio(r, r + 2)
}

pub fn construction_rate(r: usize, t: usize) -> Rational {
    ratio(r, r + t)
}

pub fn direct_product_rate(r: usize, t: usize) -> Rational {
    num_traits::pow(ratio(r, r + 1), t)
}

pub fn simplex_rate(m: usize) -> Rational {
    Rational::new(BigInt::from(m), (BigInt::one() << m) - 1)
}

/// Rate the construction would reach at the simplex code's locality and
/// availability: `2 / (2^(m-1) + 1)`.
pub fn construction_rate_at_simplex_params(m: usize) -> Rational {
    Rational::new(BigInt::from(2), (BigInt::one() << (m - 1)) + 1)
}

/// Exact decimal rendering with `sig` significant digits, rounding half
/// away from zero. Never uses exponent notation.
pub fn to_decimal(value: &Rational, sig: usize) -> String {
    assert!(sig >= 1);
    if value.is_zero() {
        return if sig > 1 {
            format!("0.{}", "0".repeat(sig - 1))
        } else {
            "0".to_string()
        };
    }
    let negative = value.is_negative();
    let num = value.numer().abs();
    let den = value.denom().clone();
    let ten = BigInt::from(10);

    // Decimal exponent e with 10^e <= num/den < 10^(e+1).
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let below = |e: i64| -> bool {
        if e >= 0 {
            num < &den * num_traits::pow(ten.clone(), e as usize)
        } else {
            &num * num_traits::pow(ten.clone(), (-e) as usize) < den
        }
    };
    if below(e) {
        e -= 1;
    }

    // digits = round(num/den * 10^(sig-1-e))
    let shift = sig as i64 - 1 - e;
    let (scaled_num, scaled_den) = if shift >= 0 {
        (&num * num_traits::pow(ten.clone(), shift as usize), den)
    } else {
        (num, den * num_traits::pow(ten.clone(), (-shift) as usize))
    };
    let (q, rem) = scaled_num.div_rem(&scaled_den);
    let mut digits = if &rem * 2 >= scaled_den { q + 1 } else { q };
    if digits.to_string().len() > sig {
        digits /= &ten;
        e += 1;
    }
    let digits = digits.to_string();

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if e >= 0 {
        let int_len = (e + 1) as usize;
        if int_len >= sig {
            out.push_str(&digits);
            out.push_str(&"0".repeat(int_len - sig));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    } else {
        out.push_str("0.");
        out.push_str(&"0".repeat((-e - 1) as usize));
        out.push_str(&digits);
    }
    out
}

/// `p/q` in lowest terms.
pub fn fraction(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}
