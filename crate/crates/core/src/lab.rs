//! Monte Carlo verification of the almost-everywhere limit laws.
//!
//! A "typical" point is a random rational `p/q` with a `bits`-bit
//! denominator, expanded exactly. Its orbit behaves like a generic orbit
//! until the denominator becomes small, so each trial stops once the orbit
//! denominator drops below `2^stop_below_bits` (or after `max_terms` digits).
//!
//! Trial `t` draws from a ChaCha8 stream selected by `(seed, t)`, so trials
//! are independent of each other and of the thread count. Trials run in
//! parallel, are collected in trial order and reduced sequentially.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bigmath;
use crate::dynamics::{self, Expansion, NIndex, Rational, DEFAULT_MAX_TERMS};
use crate::measure;
use crate::{Error, Result};

/// Parameters of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleConfig {
    pub n: NIndex,
    pub trials: usize,
    /// Bit length of the random denominator `q`.
    pub bits: u64,
    pub max_terms: usize,
    pub seed: u64,
    /// Stop a trial once the orbit denominator is below `2^stop_below_bits`;
    /// 0 runs every trial to termination.
    pub stop_below_bits: u64,
}

impl SampleConfig {
    /// Defaults: 200 trials, 512-bit denominators, seed 42, stop below 2^64.
    pub fn new(n: NIndex) -> Self {
        SampleConfig {
            n,
            trials: 200,
            bits: 512,
            max_terms: DEFAULT_MAX_TERMS,
            seed: 42,
            stop_below_bits: 64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.bits < 64 {
            return Err(Error::InvalidConfig(format!(
                "denominator bits must be at least 64, got {}",
                self.bits
            )));
        }
        if self.stop_below_bits >= self.bits {
            return Err(Error::InvalidConfig(format!(
                "stop_below_bits ({}) must be below bits ({})",
                self.stop_below_bits, self.bits
            )));
        }
        Ok(())
    }

    fn rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }
}

/// The random starting point of trial `trial`: `q` has exactly `bits` bits
/// and `p` is uniform in `[1, q)`.
pub fn sample_point(cfg: &SampleConfig, trial: usize) -> Rational {
    let mut rng = cfg.rng(trial);
    let q = rng.gen_biguint(cfg.bits) | (BigUint::one() << (cfg.bits - 1));
    let p = rng.gen_biguint_range(&BigUint::one(), &q);
    Rational::new(p, q).expect("q > 0")
}

/// An exact orbit with `ln x_k` for every point that produced a digit.
#[derive(Debug, Clone)]
struct Orbit {
    expansion: Expansion,
    ln_points: Vec<f64>,
}

fn run_orbit(x: &Rational, n: NIndex, max_terms: usize, stop_below_bits: u64) -> Orbit {
    let mut coeffs = Vec::new();
    let mut ln_points = Vec::new();
    let mut cur = x.clone();
    while !cur.is_zero() && coeffs.len() < max_terms && cur.denom().bits() >= stop_below_bits {
        ln_points.push(cur.ln());
        let (a, next) = dynamics::step_unchecked(&cur, n);
        coeffs.push(a);
        cur = next;
    }
    Orbit {
        expansion: Expansion {
            n,
            coeffs,
            terminated: cur.is_zero(),
        },
        ln_points,
    }
}

fn trial_orbit(cfg: &SampleConfig, trial: usize) -> Orbit {
    run_orbit(&sample_point(cfg, trial), cfg.n, cfg.max_terms, cfg.stop_below_bits)
}

fn all_orbits(cfg: &SampleConfig) -> Result<Vec<Orbit>> {
    cfg.validate()?;
    Ok((0..cfg.trials)
        .into_par_iter()
        .map(|t| trial_orbit(cfg, t))
        .collect())
}

/// The exact expansion used by trial `trial`, truncated per `cfg`.
pub fn sample_orbit(cfg: &SampleConfig, trial: usize) -> Result<Expansion> {
    cfg.validate()?;
    Ok(trial_orbit(cfg, trial).expansion)
}

/// A function of the orbit to average.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "param", rename_all = "snake_case")]
pub enum Observable {
    /// `ln a_k`; reported as the geometric mean, target `K_N`.
    LogDigit,
    /// `a_k^r`; reported as the Hölder mean, target `K_{N,r}`. Diverges for `r >= 1`.
    DigitPower(f64),
    /// `1{a_k = M}`, target `V_N(M)`.
    DigitIndicator(u64),
    /// `ln |T_N'(x_k)| = ln(N / x_k^2)`, target the Lyapunov exponent.
    LogDerivative,
}

impl Observable {
    fn name(&self) -> String {
        match self {
            Observable::LogDigit => "geometric_mean".into(),
            Observable::DigitPower(r) => format!("holder_mean[r={r}]"),
            Observable::DigitIndicator(m) => format!("frequency[M={m}]"),
            Observable::LogDerivative => "lyapunov".into(),
        }
    }

    fn eval(&self, n: NIndex, digit: &BigUint, ln_x: f64) -> f64 {
        match *self {
            Observable::LogDigit => bigmath::ln_biguint(digit),
            Observable::DigitPower(r) => (r * bigmath::ln_biguint(digit)).exp(),
            Observable::DigitIndicator(m) => f64::from(digit.to_u64() == Some(m)),
            Observable::LogDerivative => n.as_f64().ln() - 2.0 * ln_x,
        }
    }
}

/// An empirical average next to its closed form.
///
/// `per_trial_std` and `std_error` describe the per-trial averages of the
/// raw observable (before any `exp` or `1/r` power), so they are comparable
/// across trial counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub quantity: String,
    pub n: NIndex,
    pub empirical: f64,
    pub target: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
    pub per_trial_std: f64,
    pub std_error: f64,
    pub per_trial_min: f64,
    pub per_trial_max: f64,
    pub trials: usize,
    pub terms: usize,
}

impl EstimateReport {
    fn new(quantity: String, n: NIndex, empirical: f64, target: f64, per_trial: &[f64], terms: usize) -> Self {
        let k = per_trial.len() as f64;
        let mean = per_trial.iter().sum::<f64>() / k;
        let var = if per_trial.len() > 1 {
            per_trial.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        let abs_dev = (empirical - target).abs();
        EstimateReport {
            quantity,
            n,
            empirical,
            target,
            abs_dev,
            rel_dev: abs_dev / target.abs(),
            per_trial_std: var.sqrt(),
            std_error: (var / k).sqrt(),
            per_trial_min: per_trial.iter().copied().fold(f64::INFINITY, f64::min),
            per_trial_max: per_trial.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            trials: per_trial.len(),
            terms,
        }
    }

    /// `rel_dev <= tol`.
    pub fn within(&self, tol: f64) -> bool {
        self.rel_dev <= tol
    }
}

/// Running means of a divergent observable at checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub quantity: String,
    pub n: NIndex,
    pub r: f64,
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Checkpoint {
    /// Number of digits averaged so far (all trials, in trial order).
    pub terms: usize,
    pub running_mean: f64,
    /// `Σ_{k<=terms} k^r w_k`: the mean of digits capped at the sample
    /// size, which itself grows without bound.
    pub capped_mean: f64,
}

impl DivergenceReport {
    pub fn last_mean(&self) -> f64 {
        self.checkpoints.last().map_or(0.0, |c| c.running_mean)
    }

    /// The last running mean exceeds the first.
    pub fn grows(&self) -> bool {
        match (self.checkpoints.first(), self.checkpoints.last()) {
            (Some(a), Some(b)) => b.running_mean > a.running_mean,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Birkhoff {
    Estimate(EstimateReport),
    Divergent(DivergenceReport),
}

impl Birkhoff {
    pub fn estimate(&self) -> Option<&EstimateReport> {
        match self {
            Birkhoff::Estimate(e) => Some(e),
            Birkhoff::Divergent(_) => None,
        }
    }
}

/// Birkhoff average of `observable` over every digit of every trial.
pub fn birkhoff_estimate(cfg: &SampleConfig, observable: Observable) -> Result<Birkhoff> {
    let n = cfg.n;
    let target = match observable {
        Observable::LogDigit => measure::khinchin(n, 1e-12).value,
        Observable::DigitPower(r) if r >= 1.0 => return divergence(cfg, r).map(Birkhoff::Divergent),
        Observable::DigitPower(r) if r == 0.0 => {
            return birkhoff_estimate(cfg, Observable::LogDigit);
        }
        Observable::DigitPower(r) => {
            measure::holder_mean(n, r, 1e-12).finite().expect("r < 1 is finite")
        }
        Observable::DigitIndicator(m) => measure::frequency(n, m)?,
        Observable::LogDerivative => measure::lyapunov_const(n),
    };
    let orbits = all_orbits(cfg)?;
    let sums: Vec<(f64, usize)> = orbits
        .par_iter()
        .map(|o| {
            let s = measure::neumaier(
                o.expansion
                    .coeffs
                    .iter()
                    .zip(&o.ln_points)
                    .map(|(a, &lx)| observable.eval(n, a, lx)),
            );
            (s, o.expansion.len())
        })
        .collect();
    let terms: usize = sums.iter().map(|s| s.1).sum();
    if terms == 0 {
        return Err(Error::InvalidConfig("no digits were produced".into()));
    }
    let per_trial: Vec<f64> = sums
        .iter()
        .filter(|s| s.1 > 0)
        .map(|&(s, len)| s / len as f64)
        .collect();
    let mean = measure::neumaier(sums.iter().map(|s| s.0)) / terms as f64;
    let empirical = match observable {
        Observable::LogDigit => mean.exp(),
        Observable::DigitPower(r) => mean.powf(1.0 / r),
        _ => mean,
    };
    Ok(Birkhoff::Estimate(EstimateReport::new(
        observable.name(),
        n,
        empirical,
        target,
        &per_trial,
        terms,
    )))
}

fn divergence(cfg: &SampleConfig, r: f64) -> Result<DivergenceReport> {
    let n = cfg.n;
    let orbits = all_orbits(cfg)?;
    let mut checkpoints = Vec::new();
    let mut next = 16usize;
    let mut sum = 0.0;
    let mut count = 0usize;
    let total: usize = orbits.iter().map(|o| o.expansion.len()).sum();
    for a in orbits.iter().flat_map(|o| &o.expansion.coeffs) {
        sum += (r * bigmath::ln_biguint(a)).exp();
        count += 1;
        if count == next || count == total {
            checkpoints.push(Checkpoint {
                terms: count,
                running_mean: sum / count as f64,
                capped_mean: measure::truncated_power_mean(n, r, count as u64),
            });
            next *= 2;
        }
    }
    Ok(DivergenceReport {
        quantity: Observable::DigitPower(r).name(),
        n,
        r,
        checkpoints,
    })
}

/// `(ln B_n) / n` at the deepest convergent of each trial, target `L_N`.
pub fn levy_estimate(cfg: &SampleConfig) -> Result<EstimateReport> {
    let n = cfg.n;
    let orbits = all_orbits(cfg)?;
    let per: Vec<(f64, usize)> = orbits
        .par_iter()
        .filter(|o| !o.expansion.is_empty())
        .map(|o| {
            let b = last_denominator(&o.expansion.coeffs, n);
            let depth = o.expansion.len();
            (bigmath::ln_biguint(&b) / depth as f64, depth)
        })
        .collect();
    if per.is_empty() {
        return Err(Error::InvalidConfig("no digits were produced".into()));
    }
    let values: Vec<f64> = per.iter().map(|p| p.0).collect();
    let terms = per.iter().map(|p| p.1).sum();
    let mean = measure::neumaier(values.iter().copied()) / values.len() as f64;
    Ok(EstimateReport::new(
        "levy".into(),
        n,
        mean,
        measure::levy_l(n),
        &values,
        terms,
    ))
}

/// Birkhoff average of `ln |T_N'|`, target `2Λ_N + ln N`.
pub fn lyapunov_estimate(cfg: &SampleConfig) -> Result<EstimateReport> {
    let b = birkhoff_estimate(cfg, Observable::LogDerivative)?;
    Ok(b.estimate().cloned().expect("log-derivative is integrable"))
}

/// `B_n` for the full coefficient list, by the convergent recursion.
fn last_denominator(coeffs: &[BigUint], n: NIndex) -> BigUint {
    let nb = n.big();
    let mut prev = BigUint::one();
    let mut cur = coeffs.first().cloned().unwrap_or_else(BigUint::one);
    for a in &coeffs[1.min(coeffs.len())..] {
        let next = a * &cur + &nb * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Deviations along the constant-digit orbit at one depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepthRow {
    pub depth: usize,
    pub lyapunov_average: f64,
    pub lyapunov_dev: f64,
    pub log_denominator_rate: f64,
    pub denominator_dev: f64,
}

/// The orbit of `z_{N,N} = [N, N, N, ...]_N`, where both lower bounds are attained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundAchievement {
    pub n: NIndex,
    pub depth: usize,
    pub lyapunov: EstimateReport,
    pub denominator: EstimateReport,
    /// Every tenth depth from 10 on, plus the final one.
    pub rows: Vec<DepthRow>,
}

/// Runs the constant-digit-`N` expansion to `depth` digits.
///
/// The point is a dyadic approximation of `z_{N,N}` accurate enough that
/// all `depth` digits equal `N`. Along that orbit `ln |T_N'|` is constant, so
/// the Lyapunov average matches its bound up to the approximation error;
/// `(ln B_n)/n` approaches its bound like `1/n`.
pub fn bound_achievement(n: NIndex, depth: usize) -> Result<BoundAchievement> {
    if depth < 10 {
        return Err(Error::InvalidConfig(format!("depth must be at least 10, got {depth}")));
    }
    let bounds = measure::lower_bounds(n);
    // each step loses lyapunov / ln 2 bits
    let bits = (depth as f64 * bounds.lyapunov / std::f64::consts::LN_2 * 1.1) as u64 + 128;
    let z = dynamics::fixed_point(n, n.get(), bits)?;
    let orbit = run_orbit(&z, n, depth, 0);
    let nb = n.big();
    if orbit.expansion.len() < depth || orbit.expansion.coeffs.iter().any(|a| *a != nb) {
        return Err(Error::InvalidConfig("fixed-point approximation lost its digits".into()));
    }
    let ln_n = n.as_f64().ln();
    let mut rows = Vec::new();
    let mut lyap_sum = 0.0;
    let (mut prev, mut cur) = (BigUint::one(), nb.clone());
    for k in 1..=depth {
        lyap_sum += ln_n - 2.0 * orbit.ln_points[k - 1];
        if k > 1 {
            let next = &nb * &cur + &nb * &prev;
            prev = std::mem::replace(&mut cur, next);
        }
        if k % 10 == 0 || k == depth {
            let lyap = lyap_sum / k as f64;
            let rate = bigmath::ln_biguint(&cur) / k as f64;
            rows.push(DepthRow {
                depth: k,
                lyapunov_average: lyap,
                lyapunov_dev: (lyap - bounds.lyapunov).abs(),
                log_denominator_rate: rate,
                denominator_dev: (rate - bounds.denominator).abs(),
            });
        }
    }
    let last = *rows.last().expect("depth >= 10");
    let single = |name: &str, v: f64, t: f64| EstimateReport::new(name.into(), n, v, t, &[v], depth);
    Ok(BoundAchievement {
        n,
        depth,
        lyapunov: single("lyapunov_at_fixed_point", last.lyapunov_average, bounds.lyapunov),
        denominator: single("levy_at_fixed_point", last.log_denominator_rate, bounds.denominator),
        rows,
    })
}

/// Exact digits against digits from iterating `T_N` in `f64`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShadowReport {
    pub n: NIndex,
    pub steps: usize,
    /// First index (0-based) where the two digit sequences differ.
    pub first_mismatch: Option<usize>,
}

/// Runs the floating-point orbit next to the exact one.
///
/// The float orbit loses about `λ / ln 2` bits per step, so at double
/// precision its digits stop matching after a few dozen steps. The exact
/// orbit is the ground truth.
pub fn float_shadow(x: &Rational, n: NIndex, steps: usize) -> Result<ShadowReport> {
    let exact = dynamics::expand(x, n, steps)?;
    let nf = n.as_f64();
    let mut xf = x.to_f64();
    let mut first_mismatch = None;
    for (i, a) in exact.coeffs.iter().enumerate() {
        if xf <= 0.0 {
            first_mismatch = Some(i);
            break;
        }
        let y = nf / xf;
        let d = y.floor();
        if a.to_f64() != Some(d) {
            first_mismatch = Some(i);
            break;
        }
        xf = y - d;
    }
    Ok(ShadowReport {
        n,
        steps: exact.len(),
        first_mismatch,
    })
}

/// Mean of `-(1/n) ln|x - A_n/B_n|` over `points` random `bits`-bit
/// rationals, each at depth `index`.
pub fn mean_approximation_rate(cfg: &SampleConfig, index: usize) -> Result<EstimateReport> {
    cfg.validate()?;
    let rates: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| crate::convergents::approximation_rate(&sample_point(cfg, t), cfg.n, index))
        .collect::<Result<_>>()?;
    let mean = measure::neumaier(rates.iter().copied()) / rates.len() as f64;
    Ok(EstimateReport::new(
        "approximation_rate".into(),
        cfg.n,
        mean,
        measure::lyapunov_const(cfg.n),
        &rates,
        index * rates.len(),
    ))
}
