//! Closed-form ergodic quantities of `T_N`.
//!
//! The invariant density is `ρ_N(x) = 1 / ((N + x) g(N))` with
//! `g(N) = ln(1 + 1/N)`. Everything else here is an integral against it:
//! digit frequencies, Khinchin and Hölder means of the digits, and the
//! Lyapunov exponent `2Λ_N + ln N` with `Λ_N = Θ(1/N) / ln(1 + 1/N)`.

mod dilog;
mod report;
mod series;

pub use dilog::dilog_theta;
pub use report::{ConstantsReport, HolderEntry, Quantity, QuantityValue};
pub use series::{
    digit_weight, holder_mean, khinchin, log_khinchin, power_series, truncated_mean_closed_form,
    truncated_power_mean, HolderMean, Khinchin, SeriesValue,
};
pub(crate) use series::neumaier;

use crate::dynamics::NIndex;
use crate::{Error, Result};

/// `g(N) = ln(1 + 1/N) = ln(N+1) - ln N`, the normalizing constant.
pub fn log_norm(n: NIndex) -> f64 {
    (1.0 / n.as_f64()).ln_1p()
}

/// `ln(a / b)` for positive `a`, `b`, accurate when `a ≈ b`.
pub(crate) fn ln_ratio(a: f64, b: f64) -> f64 {
    ((a - b) / b).ln_1p()
}

/// Invariant density at `x ∈ [0, 1)`.
pub fn density(n: NIndex, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::OutOfDomain {
            what: "x",
            value: x.to_string(),
            domain: "[0, 1)",
        });
    }
    Ok(1.0 / ((n.as_f64() + x) * log_norm(n)))
}

/// `F(t) = μ_N([0, t)) = ln(1 + t/N) / g(N)`, on the extended domain `t >= 0`.
pub fn cdf(n: NIndex, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::OutOfDomain {
            what: "t",
            value: t.to_string(),
            domain: "[0, ∞)",
        });
    }
    Ok((t / n.as_f64()).ln_1p() / log_norm(n))
}

/// Almost-sure frequency of the digit `M` in the expansion,
/// `(2 ln(M+1) - ln M - ln(M+2)) / g(N)`.
pub fn frequency(n: NIndex, digit: u64) -> Result<f64> {
    if digit < n.get() {
        return Err(Error::OutOfDomain {
            what: "M",
            value: digit.to_string(),
            domain: "M >= N",
        });
    }
    Ok(digit_weight(n, digit))
}

/// `Λ_N = Θ(1/N) / ln(1 + 1/N)`.
pub fn levy_lambda(n: NIndex) -> f64 {
    let x = 1.0 / n.as_f64();
    dilog_theta(x) / x.ln_1p()
}

/// Lyapunov exponent of `T_N`: `2Λ_N + ln N`.
pub fn lyapunov_const(n: NIndex) -> f64 {
    2.0 * levy_lambda(n) + n.as_f64().ln()
}

/// Growth rate of the convergent denominators: `L_N = Λ_N + ln N`.
pub fn levy_l(n: NIndex) -> f64 {
    levy_lambda(n) + n.as_f64().ln()
}

/// Decimal digits of `x` gained per digit of the expansion: `ln 10 / λ_N`.
pub fn loch(n: NIndex) -> f64 {
    std::f64::consts::LN_10 / lyapunov_const(n)
}

/// `1 + 1/(4N) - 7/(72N^2) + 1/(18N^3)`, the large-`N` expansion of `Λ_N`.
/// The neglected terms are `O(N^-4)`; at `N = 1` the error is about `0.02`.
pub fn lambda_asymptotic(n: NIndex) -> f64 {
    let u = 1.0 / n.as_f64();
    1.0 + u * (0.25 + u * (-7.0 / 72.0 + u / 18.0))
}

/// Lower bounds valid for every `x`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LowerBounds {
    /// `2 ln((sqrt(N+4) + sqrt(N)) / 2)` for the lower Lyapunov exponent.
    pub lyapunov: f64,
    /// `ln((sqrt(N^2+4N) + N) / 2)` for `liminf (ln B_n)/n`.
    pub denominator: f64,
}

pub fn lower_bounds(n: NIndex) -> LowerBounds {
    let nf = n.as_f64();
    LowerBounds {
        lyapunov: 2.0 * (((nf + 4.0).sqrt() + nf.sqrt()) / 2.0).ln(),
        denominator: (((nf * nf + 4.0 * nf).sqrt() + nf) / 2.0).ln(),
    }
}

/// Lyapunov exponent along the fixed point `z_{N,p}`:
/// `2 ln((sqrt(p^2+4N) + p)/2) - ln N`.
pub fn fixed_point_lyapunov(n: NIndex, p: u64) -> f64 {
    let (nf, pf) = (n.as_f64(), p as f64);
    2.0 * (((pf * pf + 4.0 * nf).sqrt() + pf) / 2.0).ln() - nf.ln()
}
