//! The generalized Gauss map `T_N(x) = {N/x}` and exact N-continued fraction
//! expansion of rationals.
//!
//! All arithmetic here is on arbitrary-precision integers. For `x = p/q` the
//! digit is `floor(N q / p)` and the next orbit point is `(N q mod p) / p`, so
//! the orbit numerators strictly decrease and every rational terminates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::bigmath;
use crate::{Error, Result};

/// Default cap on the number of digits produced by [`expand`].
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// The index `N >= 1` of the map `T_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NIndex(u64);

impl NIndex {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidIndex(n));
        }
        Ok(NIndex(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    pub fn big(self) -> BigUint {
        BigUint::from(self.0)
    }
}

impl fmt::Display for NIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A non-negative rational in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigUint,
    den: BigUint,
}

impl Rational {
    pub fn new(num: BigUint, den: BigUint) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::OutOfDomain {
                what: "denominator",
                value: "0".into(),
                domain: "q > 0",
            });
        }
        Ok(Self::reduced(num, den))
    }

    pub fn from_u64(num: u64, den: u64) -> Result<Self> {
        Self::new(BigUint::from(num), BigUint::from(den))
    }

    pub fn zero() -> Self {
        Rational {
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    fn reduced(num: BigUint, den: BigUint) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        if g.is_one() {
            Rational { num, den }
        } else {
            Rational {
                num: num / &g,
                den: den / g,
            }
        }
    }

    pub fn numer(&self) -> &BigUint {
        &self.num
    }

    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True iff `0 <= x < 1`.
    pub fn in_unit_interval(&self) -> bool {
        self.num < self.den
    }

    pub fn to_f64(&self) -> f64 {
        bigmath::ratio_to_f64(&self.num, &self.den)
    }

    /// `ln x`, `-inf` at zero.
    pub fn ln(&self) -> f64 {
        bigmath::ln_biguint(&self.num) - bigmath::ln_biguint(&self.den)
    }

    fn check_unit(&self) -> Result<()> {
        if self.in_unit_interval() {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                what: "x",
                value: self.to_string(),
                domain: "[0, 1)",
            })
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses exactly `"p/q"`; decimal literals are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p: BigUint = p.trim().parse().map_err(|_| bad())?;
        let q: BigUint = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Rational::new(p, q)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The N-continued fraction digits of a point.
///
/// `terminated` records that the orbit reached 0 right after the last
/// coefficient, i.e. every later digit is infinite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expansion {
    pub n: NIndex,
    #[serde(serialize_with = "serialize_digits")]
    pub coeffs: Vec<BigUint>,
    pub terminated: bool,
}

fn serialize_digits<S: Serializer>(
    digits: &[BigUint],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(digits.iter().map(|d| d.to_string()))
}

impl Expansion {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Digits that fit in a `u64`, in order; `None` if any digit is larger.
    pub fn small_digits(&self) -> Option<Vec<u64>> {
        self.coeffs.iter().map(|d| d.to_u64()).collect()
    }
}

/// `T_N(x)`, computed exactly.
pub fn gauss_map(x: &Rational, n: NIndex) -> Result<Rational> {
    x.check_unit()?;
    if x.is_zero() {
        return Ok(Rational::zero());
    }
    Ok(step_unchecked(x, n).1)
}

/// The first digit `floor(N/x)` of `x > 0`.
pub fn digit(x: &Rational, n: NIndex) -> Result<BigUint> {
    x.check_unit()?;
    if x.is_zero() {
        return Err(Error::ZeroPoint);
    }
    Ok(step_unchecked(x, n).0)
}

/// One step of the orbit: `(floor(N/x), {N/x})` for `0 < x < 1`.
pub(crate) fn step_unchecked(x: &Rational, n: NIndex) -> (BigUint, Rational) {
    let scaled = &x.den * n.get();
    let (a, r) = scaled.div_rem(&x.num);
    (a, Rational::reduced(r, x.num.clone()))
}

/// Expands `x` into at most `max_terms` digits.
pub fn expand(x: &Rational, n: NIndex, max_terms: usize) -> Result<Expansion> {
    x.check_unit()?;
    let mut coeffs = Vec::new();
    let mut cur = x.clone();
    while !cur.is_zero() && coeffs.len() < max_terms {
        let (a, next) = step_unchecked(&cur, n);
        coeffs.push(a);
        cur = next;
    }
    Ok(Expansion {
        n,
        coeffs,
        terminated: cur.is_zero(),
    })
}

/// Checks `a_k >= N` for every coefficient.
pub fn check_admissible(coeffs: &[BigUint], n: NIndex) -> Result<()> {
    if coeffs.is_empty() {
        return Err(Error::EmptyCoefficients);
    }
    let floor = n.big();
    match coeffs.iter().position(|a| *a < floor) {
        Some(i) => Err(Error::InadmissibleDigit {
            position: i + 1,
            digit: coeffs[i].to_string(),
            n: n.get(),
        }),
        None => Ok(()),
    }
}

/// `[a_1, ..., a_n]_N` in lowest terms, evaluated from the innermost level
/// outwards.
///
/// `[N]_N` evaluates to `1`, which lies outside `[0, 1)`. It is accepted: the
/// value is still a valid truncation, it just is not an orbit point.
pub fn evaluate(coeffs: &[BigUint], n: NIndex) -> Result<Rational> {
    check_admissible(coeffs, n)?;
    // tail = num/den, starting from the empty tail 0/1.
    let mut num = BigUint::zero();
    let mut den = BigUint::one();
    for a in coeffs.iter().rev() {
        let next_den = a * &den + &num;
        num = den * n.get();
        den = next_den;
    }
    Ok(Rational::reduced(num, den))
}

/// `z_{N,p} = [p, p, p, ...]_N = (sqrt(p^2 + 4N) - p) / 2` as `f64`.
pub fn fixed_point_f64(n: NIndex, p: u64) -> Result<f64> {
    check_fixed_point_digit(n, p)?;
    let p = p as f64;
    // (sqrt(p^2+4N) - p)/2 == 2N / (sqrt(p^2+4N) + p), the latter without cancellation.
    Ok(2.0 * n.as_f64() / ((p * p + 4.0 * n.as_f64()).sqrt() + p))
}

/// Dyadic approximation of `z_{N,p}` with denominator `2^bits`, accurate to
/// within `2^-bits`. The result is the floor of the exact value.
pub fn fixed_point(n: NIndex, p: u64, bits: u64) -> Result<Rational> {
    check_fixed_point_digit(n, p)?;
    let p_big = BigUint::from(p);
    let disc = &p_big * &p_big + BigUint::from(4u32) * n.get();
    // floor(2^(bits+1) * sqrt(disc)) - p * 2^(bits+1), halved.
    let scale = bits + 1;
    let root = (disc << (2 * scale)).sqrt();
    let num = root - (p_big << scale);
    Rational::new(num, BigUint::one() << (scale + 1))
}

fn check_fixed_point_digit(n: NIndex, p: u64) -> Result<()> {
    if p < n.get() {
        return Err(Error::InadmissibleDigit {
            position: 1,
            digit: p.to_string(),
            n: n.get(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> NIndex {
        NIndex::new(v).unwrap()
    }

    fn q(p: u64, d: u64) -> Rational {
        Rational::from_u64(p, d).unwrap()
    }

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&d| BigUint::from(d)).collect()
    }

    #[test]
    fn index_must_be_positive() {
        assert_eq!(NIndex::new(0), Err(Error::InvalidIndex(0)));
    }

    #[test]
    fn gauss_map_examples() {
        assert_eq!(gauss_map(&Rational::zero(), n(5)).unwrap(), Rational::zero());
        assert_eq!(gauss_map(&q(2, 3), n(1)).unwrap(), q(1, 2));
        assert_eq!(gauss_map(&q(1, 2), n(2)).unwrap(), Rational::zero());
    }

    #[test]
    fn gauss_map_rejects_outside_unit_interval() {
        assert!(matches!(gauss_map(&q(1, 1), n(1)), Err(Error::OutOfDomain { .. })));
        assert!(matches!(gauss_map(&q(5, 3), n(2)), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn result_is_reduced() {
        // 2/3 under T_2: 2*3/2 = 3 -> 0; 3/5 under T_2: 10/3 -> 1/3.
        assert_eq!(gauss_map(&q(3, 5), n(2)).unwrap(), q(1, 3));
        // 4/7 under T_2: 14/4 = 3.5 -> 2/4 = 1/2, stored reduced.
        let y = gauss_map(&q(4, 7), n(2)).unwrap();
        assert_eq!((y.numer().clone(), y.denom().clone()), (BigUint::from(1u32), BigUint::from(2u32)));
    }

    #[test]
    fn digit_examples() {
        assert_eq!(digit(&q(2, 3), n(1)).unwrap(), BigUint::from(1u32));
        assert_eq!(digit(&q(1, 2), n(2)).unwrap(), BigUint::from(4u32));
        let golden = fixed_point(n(1), 1, 256).unwrap();
        assert_eq!(digit(&golden, n(1)).unwrap(), BigUint::from(1u32));
        assert_eq!(digit(&Rational::zero(), n(3)), Err(Error::ZeroPoint));
    }

    #[test]
    fn expand_examples() {
        let e = expand(&q(2, 3), n(1), 10).unwrap();
        assert_eq!(e.coeffs, big(&[1, 2]));
        assert!(e.terminated);

        let e = expand(&q(1, 2), n(2), 10).unwrap();
        assert_eq!(e.coeffs, big(&[4]));
        assert!(e.terminated);

        let e = expand(&Rational::zero(), n(3), 10).unwrap();
        assert!(e.coeffs.is_empty());
        assert!(e.terminated);
    }

    #[test]
    fn expand_respects_max_terms() {
        let x = fixed_point(n(1), 1, 512).unwrap();
        let e = expand(&x, n(1), 25).unwrap();
        assert_eq!(e.len(), 25);
        assert!(!e.terminated);
        assert!(e.coeffs.iter().all(|a| *a == BigUint::one()));
        let e = expand(&x, n(1), 0).unwrap();
        assert!(e.is_empty() && !e.terminated);
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&big(&[1, 2]), n(1)).unwrap(), q(2, 3));
        assert_eq!(evaluate(&big(&[4]), n(2)).unwrap(), q(1, 2));
        // boundary value [N]_N = 1 is accepted
        assert_eq!(evaluate(&big(&[3]), n(3)).unwrap(), q(1, 1));
    }

    #[test]
    fn evaluate_rejects_bad_input() {
        assert_eq!(evaluate(&[], n(1)), Err(Error::EmptyCoefficients));
        assert!(matches!(
            evaluate(&big(&[5, 2]), n(3)),
            Err(Error::InadmissibleDigit { position: 2, .. })
        ));
    }

    #[test]
    fn fixed_point_values() {
        let cases = [
            (1, 1, (5f64.sqrt() - 1.0) / 2.0),
            (2, 2, 3f64.sqrt() - 1.0),
            (1, 2, 2f64.sqrt() - 1.0),
        ];
        for (nn, p, want) in cases {
            assert!((fixed_point_f64(n(nn), p).unwrap() - want).abs() < 1e-15);
            let z = fixed_point(n(nn), p, 200).unwrap();
            assert!((z.to_f64() - want).abs() < 1e-15);
        }
        assert!(fixed_point_f64(n(3), 2).is_err());
        assert!(fixed_point(n(3), 2, 64).is_err());
    }

    #[test]
    fn fixed_point_is_fixed_to_precision() {
        // |T_N(z) - z| grows by |T'| ~ N/z^2 per step from the 2^-bits start.
        for (nn, p) in [(1u64, 1u64), (2, 2), (3, 7), (10, 10)] {
            let z = fixed_point(n(nn), p, 300).unwrap();
            let tz = gauss_map(&z, n(nn)).unwrap();
            let (a, b) = (tz.numer() * z.denom(), z.numer() * tz.denom());
            let diff = if a > b { a - b } else { b - a };
            let gap = crate::bigmath::ratio_to_f64(&diff, &(tz.denom() * z.denom()));
            assert!(gap < 1e-80, "N={nn} p={p}: {gap:e}");
            let e = expand(&z, n(nn), 40).unwrap();
            assert!(e.coeffs.iter().all(|a| *a == BigUint::from(p)));
        }
    }

    #[test]
    fn parse_fraction_strings() {
        assert_eq!("2/3".parse::<Rational>().unwrap(), q(2, 3));
        assert_eq!(" 4 / 8 ".parse::<Rational>().unwrap(), q(1, 2));
        assert_eq!("0/1".parse::<Rational>().unwrap(), Rational::zero());
        for bad in ["2/0", "0.5", "1/", "/3", "-1/3", "a/b", ""] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }
}
