//! Unreduced convergents `A_n / B_n` of an N-continued fraction.
//!
//! The three-term recursion
//!
//! ```text
//! A_n = a_n A_{n-1} + N A_{n-2}        A_0 = 0, A_1 = N
//! B_n = a_n B_{n-1} + N B_{n-2}        B_0 = 1, B_1 = a_1
//! ```
//!
//! keeps every common factor; `gcd(A_n, B_n)` divides `N^n` but is not
//! removed. The seeds reproduce `[a_1]_N = N/a_1` and
//! `[a_1, a_2]_N = N a_2 / (a_1 a_2 + N)`, and satisfy the determinant
//! identity `A_{n-1} B_n - A_n B_{n-1} = (-N)^n` at `n = 1`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::bigmath;
use crate::dynamics::{self, NIndex, Rational};
use crate::{Error, Result};

/// The `n`-th convergent, without reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub a: BigUint,
    pub b: BigUint,
}

impl Convergent {
    /// `A_n / B_n` in lowest terms.
    pub fn reduced(&self) -> Rational {
        Rational::new(self.a.clone(), self.b.clone()).expect("B_n is positive")
    }

    /// `B_n p - A_n q` for `x = p/q`, i.e. `q (B_n x - A_n)`.
    fn scaled_error(&self, x: &Rational) -> BigInt {
        BigInt::from(&self.b * x.numer()) - BigInt::from(&self.a * x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentTrace {
    pub n: NIndex,
    pub coeffs: Vec<BigUint>,
    /// Convergents for indices `0..=coeffs.len()`.
    pub convergents: Vec<Convergent>,
}

/// Runs the recursion over an admissible coefficient sequence.
pub fn convergent_sequence(coeffs: &[BigUint], n: NIndex) -> Result<ConvergentTrace> {
    dynamics::check_admissible(coeffs, n)?;
    let nb = n.big();
    let mut convergents = Vec::with_capacity(coeffs.len() + 1);
    convergents.push(Convergent {
        index: 0,
        a: BigUint::zero(),
        b: BigUint::one(),
    });
    convergents.push(Convergent {
        index: 1,
        a: nb.clone(),
        b: coeffs[0].clone(),
    });
    for (i, a_n) in coeffs.iter().enumerate().skip(1) {
        let (prev2, prev1) = (&convergents[i - 1], &convergents[i]);
        let a = a_n * &prev1.a + &nb * &prev2.a;
        let b = a_n * &prev1.b + &nb * &prev2.b;
        convergents.push(Convergent { index: i + 1, a, b });
    }
    Ok(ConvergentTrace {
        n,
        coeffs: coeffs.to_vec(),
        convergents,
    })
}

impl ConvergentTrace {
    /// Index of the deepest convergent.
    pub fn depth(&self) -> usize {
        self.convergents.len() - 1
    }

    pub fn last(&self) -> &Convergent {
        self.convergents.last().expect("trace always holds the n = 0 seed")
    }

    pub fn get(&self, index: usize) -> Option<&Convergent> {
        self.convergents.get(index)
    }

    /// `A_{n-1} B_n - A_n B_{n-1} == (-N)^n` for every `n >= 1`, exactly.
    pub fn determinant_check(&self) -> bool {
        let minus_n = -BigInt::from(self.n.get());
        let mut expected = BigInt::one();
        self.convergents.windows(2).all(|w| {
            expected *= &minus_n;
            let lhs = BigInt::from(&w[0].a * &w[1].b) - BigInt::from(&w[1].a * &w[0].b);
            lhs == expected
        })
    }

    /// `B_n >= N^n` for every `n`, exactly.
    pub fn growth_check(&self) -> bool {
        let nb = self.n.big();
        let mut power = BigUint::one();
        self.convergents.iter().enumerate().all(|(i, c)| {
            if i > 0 {
                power *= &nb;
            }
            c.b >= power
        })
    }

    /// `(ln B_n) / n` at every `n >= 1`.
    pub fn log_growth(&self) -> Vec<f64> {
        self.convergents
            .iter()
            .skip(1)
            .map(|c| bigmath::ln_biguint(&c.b) / c.index as f64)
            .collect()
    }

    /// Checks `N^{n+1} / (4 B_{n+1}) < |B_n x - A_n| <= N^n / B_n` for each
    /// `n` that has a successor convergent, in exact integer arithmetic.
    ///
    /// `x` must be the point whose expansion produced the trace. When the
    /// trace ends with `x = A_K / B_K` exactly, the lower bound at `n = K`
    /// would read `... < 0`; that index has no successor and is skipped.
    pub fn error_bounds_check(&self, x: &Rational) -> bool {
        let nb = self.n.big();
        let four = BigUint::from(4u32);
        let mut n_pow = BigUint::one();
        for w in self.convergents.windows(2) {
            let (cur, next) = (&w[0], &w[1]);
            let gap = cur.scaled_error(x).abs().magnitude().clone();
            let q = x.denom();
            // |B_n p - A_n q| / q <= N^n / B_n
            let upper_ok = &gap * &cur.b <= &n_pow * q;
            // N^{n+1} / (4 B_{n+1}) < |B_n p - A_n q| / q
            let n_pow_next = &n_pow * &nb;
            let lower_ok = &n_pow_next * q < &four * &next.b * &gap;
            if !(upper_ok && lower_ok) {
                return false;
            }
            n_pow = n_pow_next;
        }
        true
    }
}

/// `-(1/n) ln |x - A_n / B_n|`, from the exact rational difference.
pub fn approximation_rate(x: &Rational, n: NIndex, index: usize) -> Result<f64> {
    if index == 0 {
        return Err(Error::OutOfDomain {
            what: "n",
            value: "0".into(),
            domain: "n >= 1",
        });
    }
    let expansion = dynamics::expand(x, n, index)?;
    // A terminated expansion of length exactly `index` means x == A_n/B_n.
    if expansion.len() < index || (expansion.terminated && expansion.len() == index) {
        return Err(Error::ExpansionTooShort {
            available: expansion.len(),
            requested: index,
            terminated: expansion.terminated,
        });
    }
    let trace = convergent_sequence(&expansion.coeffs, n)?;
    let c = trace.last();
    let gap = c.scaled_error(x);
    // |x - A/B| = |B p - A q| / (q B)
    let ln_err = bigmath::ln_abs_bigint(&gap)
        - bigmath::ln_biguint(x.denom())
        - bigmath::ln_biguint(&c.b);
    Ok(-ln_err / index as f64)
}

/// `N^n` as a big integer.
pub fn n_power(n: NIndex, exp: usize) -> BigUint {
    Pow::pow(n.big(), exp)
}

/// Row of a convergent table: one entry per `n >= 1`.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergentRow {
    pub n: usize,
    pub digit: String,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub reduced: String,
    pub abs_error: f64,
}

/// Tabulates `(n, a_n, A_n, B_n, A_n/B_n reduced, |x - A_n/B_n|)`.
pub fn convergent_table(x: &Rational, trace: &ConvergentTrace) -> Vec<ConvergentRow> {
    trace
        .convergents
        .iter()
        .skip(1)
        .map(|c| {
            let gap = c.scaled_error(x);
            let den = x.denom() * &c.b;
            ConvergentRow {
                n: c.index,
                digit: trace.coeffs[c.index - 1].to_string(),
                a: c.a.to_string(),
                b: c.b.to_string(),
                reduced: c.reduced().to_string(),
                abs_error: bigmath::ratio_to_f64(gap.magnitude(), &den),
            }
        })
        .collect()
}
