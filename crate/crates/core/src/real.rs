//! High-precision natural logarithms of big integers and rationals.
//!
//! Quality, merit and Tamagawa quality are ratios of logarithms of integers
//! that routinely exceed 2^128, so the logs are evaluated in fixed-point
//! arithmetic at [`PRECISION_BITS`] bits before anything is rounded to `f64`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::sync::OnceLock;

/// Working precision of the fixed-point log evaluation.
pub const PRECISION_BITS: u64 = 192;

fn ln2_fixed() -> &'static BigInt {
    static LN2: OnceLock<BigInt> = OnceLock::new();
    // ln 2 = 2 atanh(1/3)
    LN2.get_or_init(|| {
        let t = (BigInt::from(1) << PRECISION_BITS) / 3;
        atanh_fixed(&t) << 1
    })
}

/// Fixed-point atanh via its power series; `t` is scaled by 2^PRECISION_BITS
/// and must satisfy |t| <= 1/3 so the series converges at >= 3 bits per term.
/// The series runs on |t|: a negative term would never shift down to zero
/// because BigInt right shifts floor towards minus infinity.
fn atanh_fixed(t: &BigInt) -> BigInt {
    let neg = t.is_negative();
    let t_abs = t.abs();
    let tsq = (&t_abs * &t_abs) >> PRECISION_BITS;
    let mut term = t_abs;
    let mut acc = BigInt::zero();
    let mut k: u64 = 0;
    while !term.is_zero() {
        acc += &term / BigInt::from(2 * k + 1);
        term = (&term * &tsq) >> PRECISION_BITS;
        k += 1;
    }
    if neg {
        -acc
    } else {
        acc
    }
}

/// ln(num/den) as a fixed-point integer scaled by 2^PRECISION_BITS.
/// Both arguments must be positive.
fn ln_fixed(num: &BigUint, den: &BigUint) -> BigInt {
    assert!(!num.is_zero() && !den.is_zero(), "log of a nonpositive value");
    // Normalise num/den = m * 2^k with m in (1/2, 2), then
    // ln m = 2 atanh((m-1)/(m+1)) with |(m-1)/(m+1)| < 1/3.
    let k = num.bits() as i64 - den.bits() as i64;
    let (p, q) = if k >= 0 {
        (num.clone(), den << k as u64)
    } else {
        (num << (-k) as u64, den.clone())
    };
    let p = BigInt::from(p);
    let q = BigInt::from(q);
    let t = ((&p - &q) << PRECISION_BITS) / (&p + &q);
    (atanh_fixed(&t) << 1) + BigInt::from(k) * ln2_fixed()
}

/// Natural log of a positive integer, exact to well below 2^-160.
pub fn ln_uint(n: &BigUint) -> BigRational {
    fixed_to_ratio(ln_fixed(n, &BigUint::from(1u32)))
}

/// Natural log of a positive rational.
pub fn ln_ratio(x: &BigRational) -> BigRational {
    assert!(x.is_positive(), "log of a nonpositive value");
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    fixed_to_ratio(ln_fixed(num, den))
}

fn fixed_to_ratio(v: BigInt) -> BigRational {
    BigRational::new(v, BigInt::from(1) << PRECISION_BITS)
}

/// Round an arbitrary-size rational to the nearest `f64`, without overflowing
/// on numerators or denominators beyond the `f64` range.
pub fn to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let neg = x.is_negative();
    let p = x.numer().magnitude();
    let q = x.denom().magnitude();
    // Scale so the integer quotient carries ~80 significant bits.
    let shift = 80i64 - (p.bits() as i64 - q.bits() as i64);
    let (p, q) = if shift >= 0 {
        (p << shift as u64, q.clone())
    } else {
        (p.clone(), q << (-shift) as u64)
    };
    let mantissa: BigUint = p / q;
    let mut out = 0.0f64;
    // At most 81 bits: fold the limbs in from the top.
    for digit in mantissa.to_u64_digits().iter().rev() {
        out = out * 2f64.powi(64) + *digit as f64;
    }
    out = scale_pow2(out, -shift);
    if neg {
        -out
    } else {
        out
    }
}

/// x * 2^e, in chunks so a single powi never over- or underflows on its own.
fn scale_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 900 {
        x *= 2f64.powi(900);
        e -= 900;
    }
    while e < -900 {
        x *= 2f64.powi(-900);
        e += 900;
    }
    x * 2f64.powi(e as i32)
}
