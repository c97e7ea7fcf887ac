//! Floating-point views of arbitrary-precision integers.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

const LN_2: f64 = std::f64::consts::LN_2;

/// Natural logarithm of a big unsigned integer, correct to about one ulp
/// regardless of size. Returns `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().map_or(f64::NAN, |v| (v as f64).ln());
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).ln() + shift as f64 * LN_2
}

/// `ln |x|` for a signed big integer.
pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    ln_biguint(x.abs().magnitude())
}

/// Leading 64 bits as `f64` and the binary exponent that was shifted out.
fn top_bits(x: &BigUint) -> (f64, i64) {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap_or(0) as f64, 0);
    }
    let shift = bits - 64;
    ((x >> shift).to_u64().unwrap_or(u64::MAX) as f64, shift as i64)
}

fn scale_by_pow2(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

/// `num / den` as `f64` without overflowing on huge operands. Underflows to 0.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let (tn, en) = top_bits(num);
    let (td, ed) = top_bits(den);
    scale_by_pow2(tn / td, en - ed)
}

/// Lossy conversion that saturates to `f64::INFINITY` beyond the f64 range.
pub fn biguint_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}
