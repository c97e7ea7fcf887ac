//! Expectations of digit functions under the invariant measure.
//!
//! The digit equals `k` on `(N/(k+1), N/k]`, which has measure
//! `w_k = ln(1 + 1/(k(k+2))) / ln(1 + 1/N)`, so `E[φ(a)] = Σ_{k>=N} φ(k) w_k`.
//!
//! The series is summed exactly up to a cutoff `K`. Past it,
//! `ln(1 + 1/(k(k+2))) = Σ_{m>=2} c_m k^{-m}` with `c_m = (-1)^m (2^m - 2)/m`,
//! so the remainder is a combination of Hurwitz zeta tails
//! `Σ_{k>K} k^{r-m}` (or `Σ ln(k) k^{-m}` for the geometric mean), each
//! evaluated by Euler–Maclaurin. The reported bound is the size of the
//! first omitted correction in both expansions, so a modest `K` already
//! reaches double precision.

use rayon::prelude::*;
use serde::Serialize;

use super::{ln_ratio, log_norm};
use crate::dynamics::NIndex;

/// A truncated series plus an analytic tail, with the tail's error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Number of explicitly summed terms.
    pub terms: u64,
    /// Rigorous bound on `|value - exact|` from the tail estimate.
    pub tail_bound: f64,
}

/// `K_N` with the diagnostics of the underlying log-series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Khinchin {
    pub value: f64,
    /// `ln K_N`, the summed series.
    pub log_series: SeriesValue,
}

/// A Hölder mean `K_{N,r}`: finite for `r < 1`, `+∞` for `r >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HolderMean {
    Finite {
        value: f64,
        /// The series `Σ k^r w_k` before the `1/r` power (for `r = 0`, `ln K_N`).
        series: SeriesValue,
    },
    Divergent,
}

impl HolderMean {
    pub fn finite(&self) -> Option<f64> {
        match self {
            HolderMean::Finite { value, .. } => Some(*value),
            HolderMean::Divergent => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, HolderMean::Divergent)
    }
}

/// Largest cutoff ever used; beyond it the reported tail bound may exceed `tol`.
const MAX_CUTOFF: u64 = 1 << 31;
const CHUNK: u64 = 1 << 16;

/// `w_k`, the measure of the cylinder where the first digit is `k`.
pub fn digit_weight(n: NIndex, k: u64) -> f64 {
    let kf = k as f64;
    (1.0 / (kf * (kf + 2.0))).ln_1p() / log_norm(n)
}

/// `Σ_{k=N}^{K} φ(k) w_k` with compensated summation, chunked so the result
/// does not depend on the thread count.
fn head_sum(n: NIndex, cutoff: u64, phi: impl Fn(f64) -> f64 + Sync) -> f64 {
    let start = n.get();
    if cutoff < start {
        return 0.0;
    }
    let chunks = (cutoff - start) / CHUNK + 1;
    let partials: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = start + c * CHUNK;
            let hi = (lo + CHUNK - 1).min(cutoff);
            // summed from the small end so the compensation sees small terms first
            neumaier((lo..=hi).rev().map(|k| {
                let kf = k as f64;
                phi(kf) * (1.0 / (kf * (kf + 2.0))).ln_1p()
            }))
        })
        .collect();
    neumaier(partials.into_iter().rev()) / log_norm(n)
}

pub(crate) fn neumaier(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `B_2, B_4, ..., B_20` divided by the matching factorial `(2i)!`.
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
    -174_611.0 / 330.0 / 2_432_902_008_176_640_000.0,
];

/// Euler–Maclaurin for `Σ_{k>=a} k^{-s}` (or `Σ_{k>=a} ln(k) k^{-s}` when
/// `with_log`), `s > 1`. Returns `(value, bound)`; the bound is twice the
/// first omitted correction.
fn hurwitz_tail(s: f64, a: f64, with_log: bool) -> (f64, f64) {
    let ln_a = a.ln();
    let a_s = a.powf(-s);
    let mut value = if with_log {
        a * a_s * (ln_a / (s - 1.0) + 1.0 / ((s - 1.0) * (s - 1.0))) + ln_a * a_s / 2.0
    } else {
        a * a_s / (s - 1.0) + a_s / 2.0
    };
    // (s)_{2i-1} = s (s+1) ... (s+2i-2) and its log-derivative
    let mut poch = s;
    let mut dlog = 1.0 / s;
    let mut power = a_s / a;
    let last = BERNOULLI_OVER_FACTORIAL.len() - 1;
    let mut bound = 0.0;
    for (i, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = b * poch * power * if with_log { ln_a - dlog } else { 1.0 };
        if i == last {
            bound = 2.0 * term.abs();
            break;
        }
        value += term;
        for l in [2 * i + 1, 2 * i + 2] {
            let x = s + l as f64;
            poch *= x;
            dlog += 1.0 / x;
        }
        power /= a * a;
    }
    (value, bound)
}

/// `Σ_{k>K} φ(k) ln(1 + 1/(k(k+2)))` with `φ(k) = k^r` or `ln k` (`r = None`),
/// divided by `g(N)`: `(estimate, bound)`.
fn tail(n: NIndex, r: Option<f64>, cutoff: u64) -> (f64, f64) {
    let a = cutoff as f64 + 1.0;
    assert!(a >= 8.0, "tail expansion needs k > 2 with room to spare");
    let shift = r.unwrap_or(0.0);
    let mut sum = 0.0;
    let mut bound = 0.0;
    let mut sign_pow = 4.0; // (-1)^m 2^m at m = 2
    for m in 2..400 {
        let mf = m as f64;
        let c = (sign_pow - 2.0 * if m % 2 == 0 { 1.0 } else { -1.0 }) / mf;
        let (z, zb) = hurwitz_tail(mf - shift, a, r.is_none());
        let term = c * z;
        sum += term;
        bound += c.abs() * zb;
        // later terms shrink at least geometrically with ratio 2/a (times a
        // slowly varying factor), so 2|term|·(2/a)/(1-2/a) covers the rest
        let rest = 2.0 * term.abs() * (2.0 / a) / (1.0 - 2.0 / a);
        if rest <= 1e-18 * sum.abs() {
            bound += rest;
            break;
        }
        sign_pow *= -2.0;
    }
    let g = log_norm(n);
    (sum / g, bound / g)
}

/// Smallest cutoff `K >= max(N, 16)`, doubling, with `bound(K) <= tol`.
fn choose_cutoff(n: NIndex, tol: f64, bound: impl Fn(u64) -> f64) -> u64 {
    let mut k = n.get().max(16).min(MAX_CUTOFF);
    while bound(k) > tol && k < MAX_CUTOFF {
        k = (k * 2).min(MAX_CUTOFF);
    }
    k
}

/// `ln K_N = Σ_{k>=N} ln(k) w_k`, summed to within `tol`.
pub fn log_khinchin(n: NIndex, tol: f64) -> SeriesValue {
    assert!(tol > 0.0, "tolerance must be positive");
    let cutoff = choose_cutoff(n, tol, |k| tail(n, None, k).1);
    let head = head_sum(n, cutoff, f64::ln);
    let (rest, bound) = tail(n, None, cutoff);
    SeriesValue {
        value: head + rest,
        terms: cutoff - n.get() + 1,
        tail_bound: bound,
    }
}

/// The almost-sure geometric mean of the digits, `K_N`.
pub fn khinchin(n: NIndex, tol: f64) -> Khinchin {
    let log_series = log_khinchin(n, tol);
    Khinchin {
        value: log_series.value.exp(),
        log_series,
    }
}

/// `Σ_{k>=N} k^r w_k` for `r < 1`, `r != 0`, to within `tol`.
pub fn power_series(n: NIndex, r: f64, tol: f64) -> SeriesValue {
    assert!(r < 1.0 && r != 0.0, "power series needs r < 1, r != 0");
    assert!(tol > 0.0, "tolerance must be positive");
    let cutoff = choose_cutoff(n, tol, |k| tail(n, Some(r), k).1);
    let head = head_sum(n, cutoff, |k| k.powf(r));
    let (rest, bound) = tail(n, Some(r), cutoff);
    SeriesValue {
        value: head + rest,
        terms: cutoff - n.get() + 1,
        tail_bound: bound,
    }
}

/// The almost-sure Hölder mean of order `r` of the digits.
///
/// `r = 0` is the geometric mean; `r >= 1` diverges.
pub fn holder_mean(n: NIndex, r: f64, tol: f64) -> HolderMean {
    assert!(r.is_finite(), "order must be finite");
    if r >= 1.0 {
        return HolderMean::Divergent;
    }
    if r == 0.0 {
        let k = khinchin(n, tol);
        return HolderMean::Finite {
            value: k.value,
            series: k.log_series,
        };
    }
    let series = power_series(n, r, tol);
    HolderMean::Finite {
        value: series.value.powf(1.0 / r),
        series,
    }
}

/// `Σ_{k=N}^{M} k^r w_k`, the mean of the digits capped at `M`.
///
/// For `r >= 1` this grows without bound in `M`; it is the lower bound used
/// by the divergence diagnostics.
pub fn truncated_power_mean(n: NIndex, r: f64, cap: u64) -> f64 {
    head_sum(n, cap, |k| k.powf(r))
}

/// Closed form of [`truncated_power_mean`] at `r = 1`:
/// `N - M ln(1+1/(M+1))/g(N) + (ln(M+1) - ln(N+1))/g(N)`.
pub fn truncated_mean_closed_form(n: NIndex, cap: u64) -> f64 {
    let g = log_norm(n);
    let m = cap as f64;
    n.as_f64() - m * (1.0 / (m + 1.0)).ln_1p() / g + ln_ratio(m + 1.0, n.as_f64() + 1.0) / g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> NIndex {
        NIndex::new(v).unwrap()
    }

    // Reference values: mpmath at 40 digits, head summed to 2000 plus the
    // tail as Σ c_m ζ(m - r, 2001) with its own Hurwitz zeta.
    const K1: f64 = 2.685_452_001_065_306_4;
    const K2: f64 = 5.412_651_679_209_027_6;
    const K3: f64 = 8.136_460_059_488_264;
    const K10: f64 = 27.175_974_248_133_23;
    const K1000: f64 = 2_718.281_753_026_673_7;
    const K_100_HARMONIC: f64 = 199.667_229_016_297_92;
    const K_100_HALF: f64 = 400.664_622_820_882_23;
    const K_5_MINUS2: f64 = 8.259_223_790_294_121;
    const K_5_HALF: f64 = 20.629_730_769_413_6;

    #[test]
    fn hurwitz_tail_matches_direct_sums() {
        // Σ_{k>=a} is summed directly to 10^7 and the remainder below ~1e-12 dropped
        for (s_exp, with_log) in [(2.0, false), (2.5, false), (1.5, false), (2.0, true), (3.0, true)] {
            let a = 20.0;
            let (v, b) = hurwitz_tail(s_exp, a, with_log);
            let f = |k: f64| if with_log { k.ln() * k.powf(-s_exp) } else { k.powf(-s_exp) };
            let direct = neumaier((20..10_000_000u64).rev().map(|k| f(k as f64)));
            let (rest, _) = hurwitz_tail(s_exp, 1e7, with_log);
            assert!((v - direct - rest).abs() < 1e-14 * v, "s={s_exp} log={with_log}");
            assert!(b < 1e-20);
        }
    }

    #[test]
    fn weights_sum_to_one() {
        // Σ_{k=N}^{M} w_k telescopes to 1 - ln(1+1/(M+1))/g(N)
        for nn in [1u64, 2, 7, 100] {
            let m = 10_000u64;
            let s = head_sum(n(nn), m, |_| 1.0);
            let want = 1.0 - (1.0 / (m as f64 + 1.0)).ln_1p() / log_norm(n(nn));
            assert!((s - want).abs() < 1e-13, "N={nn}: {s} vs {want}");
        }
    }

    #[test]
    fn khinchin_reference_values() {
        for (nn, want) in [(1, K1), (2, K2), (3, K3), (10, K10), (1000, K1000)] {
            let k = khinchin(n(nn), 1e-12);
            assert!((k.value - want).abs() < 1e-13 * want, "N={nn}: {} vs {want}", k.value);
            assert!(k.log_series.tail_bound <= 1e-12);
        }
    }

    #[test]
    fn khinchin_two_from_one() {
        // ln 1 = 0, so both series share their terms and differ only in normalization.
        let ln_k1 = log_khinchin(n(1), 1e-13).value;
        let ln_k2 = log_khinchin(n(2), 1e-13).value;
        let ratio = 2f64.ln() / (1.5f64).ln();
        assert!((ln_k2 - ln_k1 * ratio).abs() < 1e-11);
    }

    #[test]
    fn tail_bound_is_honest() {
        // A loose tolerance must still land within its own reported bound.
        for nn in [1u64, 4, 50] {
            let coarse = log_khinchin(n(nn), 1e-5);
            let fine = log_khinchin(n(nn), 1e-13);
            assert!(coarse.tail_bound <= 1e-5);
            assert!((coarse.value - fine.value).abs() <= coarse.tail_bound + 1e-12);
        }
        let coarse = power_series(n(3), 0.5, 1e-6);
        let fine = power_series(n(3), 0.5, 1e-13);
        assert!((coarse.value - fine.value).abs() <= coarse.tail_bound + 1e-12);
    }

    #[test]
    fn holder_reference_values() {
        let cases = [
            (100, -1.0, K_100_HARMONIC),
            (100, 0.5, K_100_HALF),
            (5, -2.0, K_5_MINUS2),
            (5, 0.5, K_5_HALF),
        ];
        for (nn, r, want) in cases {
            let v = holder_mean(n(nn), r, 1e-12).finite().unwrap();
            assert!((v - want).abs() < 1e-13 * want, "N={nn} r={r}: {v} vs {want}");
        }
    }

    #[test]
    fn khinchin_over_n_tends_to_e() {
        let mut prev = f64::INFINITY;
        for nn in [10u64, 100, 1000, 1_000_000] {
            let dev = (khinchin(n(nn), 1e-12).value / nn as f64 - std::f64::consts::E).abs();
            assert!(dev < prev);
            prev = dev;
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn holder_limit_laws_at_desk_scale() {
        let h = holder_mean(n(100), -1.0, 1e-10).finite().unwrap();
        assert!((h / 100.0 - 2.0).abs() < 0.02);
        let h = holder_mean(n(100), 0.5, 1e-10).finite().unwrap();
        assert!((h / 100.0 - 4.0).abs() < 0.08);
    }

    #[test]
    fn order_at_least_one_diverges() {
        for r in [1.0, 1.5, 3.0] {
            assert!(holder_mean(n(1), r, 1e-10).is_divergent());
            assert!(holder_mean(n(7), r, 1e-10).is_divergent());
        }
    }

    #[test]
    fn order_zero_is_khinchin() {
        let k = khinchin(n(4), 1e-12).value;
        assert_eq!(holder_mean(n(4), 0.0, 1e-12).finite(), Some(k));
    }

    #[test]
    fn small_orders_approach_geometric_mean() {
        for nn in [1u64, 2, 3, 10] {
            let k = khinchin(n(nn), 1e-13).value;
            for r in [1e-4, -1e-4] {
                let h = holder_mean(n(nn), r, 1e-13).finite().unwrap();
                assert!((h / k - 1.0).abs() < 1e-4, "N={nn} r={r}: {h} vs {k}");
            }
        }
    }

    #[test]
    fn truncated_mean_matches_closed_form_and_grows() {
        for nn in [1u64, 3] {
            let mut prev = 0.0;
            for cap in [10u64, 100, 1000, 10_000, 100_000] {
                let s = truncated_power_mean(n(nn), 1.0, cap);
                let c = truncated_mean_closed_form(n(nn), cap);
                assert!((s - c).abs() < 1e-9 * c, "N={nn} M={cap}: {s} vs {c}");
                assert!(s > prev);
                prev = s;
            }
        }
    }
}
