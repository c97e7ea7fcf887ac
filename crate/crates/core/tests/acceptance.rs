//! Acceptance gate. Prints one `[PASS]`/`[FAIL]` line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::{E, LN_2, PI};
use std::time::{Duration, Instant};

use ncfrac::convergents::convergent_sequence;
use ncfrac::dynamics::{evaluate, expand, NIndex, Rational};
use ncfrac::lab::{
    birkhoff_estimate, bound_achievement, levy_estimate, Birkhoff, Observable, SampleConfig,
};
use ncfrac::measure::{
    cdf, holder_mean, khinchin, lambda_asymptotic, levy_lambda, lower_bounds,
};
use ncfrac::ulam::build_model;
use num_bigint::{BigUint, RandBigInt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn n(v: u64) -> NIndex {
    NIndex::new(v).unwrap()
}

struct Gate {
    failed: Vec<&'static str>,
}

impl Gate {
    fn report(&mut self, id: &'static str, pass: bool, elapsed: Duration, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id:<5} {detail} ({:.2}s)", elapsed.as_secs_f64());
        if !pass {
            self.failed.push(id);
        }
    }
}

fn ac1(g: &mut Gate) {
    let want = [(1, 2.685452), (2, 5.412652), (3, 8.136460)];
    let t0 = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (v, k) in want {
        let t = Instant::now();
        let got = khinchin(n(v), 1e-12).value;
        let dt = t.elapsed();
        pass &= (got - k).abs() < 1e-5 && dt < Duration::from_secs(1);
        parts.push(format!("K_{v}={got:.7} ({:.0}ms)", dt.as_secs_f64() * 1e3));
    }
    g.report("AC1", pass, t0.elapsed(), format!("khinchin constants: {}", parts.join(", ")));
}

fn ac2(g: &mut Gate) {
    let t0 = Instant::now();
    let got = levy_lambda(n(1));
    let want = PI * PI / (12.0 * LN_2);
    let dev = (got - want).abs();
    g.report("AC2", dev < 1e-12, t0.elapsed(), format!("levy_lambda(1)={got:.15} dev={dev:.2e}"));
}

fn ac3(g: &mut Gate) {
    let t0 = Instant::now();
    let k = khinchin(n(1000), 1e-12).value / 1000.0;
    let inv = holder_mean(n(100), -1.0, 1e-12).finite().unwrap() / 100.0;
    let half = holder_mean(n(100), 0.5, 1e-12).finite().unwrap() / 100.0;
    let lam = levy_lambda(n(1000));
    let checks = [
        ((k - E).abs() / E, 0.002),
        ((inv - 2.0).abs() / 2.0, 0.01),
        ((half - 4.0).abs() / 4.0, 0.02),
        ((lam - 1.0).abs(), 1e-3),
    ];
    let pass = checks.iter().all(|(d, tol)| d < tol);
    g.report(
        "AC3",
        pass,
        t0.elapsed(),
        format!(
            "limit laws: K_1000/1000={k:.6} K_100,-1/100={inv:.5} K_100,1/2/100={half:.5} Lambda_1000={lam:.7}"
        ),
    );
}

fn ac4(g: &mut Gate) {
    let t0 = Instant::now();
    let err = |v| (lambda_asymptotic(n(v)) - levy_lambda(n(v))).abs();
    let (e50, e500) = (err(50), err(500));
    g.report(
        "AC4",
        e50 < 1e-6 && e500 < 1e-8,
        t0.elapsed(),
        format!("asymptotic expansion: err(50)={e50:.2e} err(500)={e500:.2e}"),
    );
}

fn ac5(g: &mut Gate) {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ns = [1u64, 2, 3, 5, 10];
    let mut bad = Vec::new();
    let mut terms = 0usize;
    for case in 0..10_000 {
        let nn = n(ns[case % ns.len()]);
        let bits = rng.gen_range(2..=256u64);
        let q = rng.gen_biguint(bits) | (BigUint::from(1u8) << (bits - 1));
        let p = rng.gen_biguint_range(&BigUint::from(1u8), &q);
        let x = Rational::new(p, q).unwrap();
        let e = expand(&x, nn, usize::MAX).unwrap();
        terms += e.len();
        let trace = convergent_sequence(&e.coeffs, nn).unwrap();
        let ok = e.terminated
            && trace.determinant_check()
            && trace.growth_check()
            && evaluate(&e.coeffs, nn).unwrap() == x
            && trace.error_bounds_check(&x);
        if !ok {
            bad.push(format!("{}/{} N={}", x.numer(), x.denom(), nn.get()));
        }
    }
    let dt = t0.elapsed();
    g.report(
        "AC5",
        bad.is_empty() && dt < Duration::from_secs(30),
        dt,
        format!("exact identities: 10000 cases, {terms} digits, {} failures {:?}", bad.len(), bad.first()),
    );
}

fn ac6(g: &mut Gate) {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for v in 1..=10u64 {
        let nn = n(v);
        let nf = v as f64;
        for _ in 0..1000 {
            let t: f64 = rng.gen_range(0.0..=10.0);
            let f = |s| cdf(nn, s).unwrap();
            worst = worst.max((f(1.0 + t) - f(t) - f(nf / (nf + t))).abs());
        }
    }
    g.report("AC6", worst < 1e-12, t0.elapsed(), format!("functional equation: worst={worst:.2e}"));
}

fn ac7(g: &mut Gate) {
    let t0 = Instant::now();
    let mut pass = true;
    let mut worst = (0.0, String::new());
    for v in [1u64, 2, 5] {
        let cfg = SampleConfig::new(n(v));
        let mut reports = Vec::new();
        for obs in [Observable::LogDigit, Observable::DigitIndicator(v), Observable::LogDerivative] {
            match birkhoff_estimate(&cfg, obs).unwrap() {
                Birkhoff::Estimate(r) => reports.push(r),
                Birkhoff::Divergent(_) => pass = false,
            }
        }
        reports.push(levy_estimate(&cfg).unwrap());
        for r in reports {
            pass &= r.within(0.02);
            if r.rel_dev > worst.0 {
                worst = (r.rel_dev, format!("{} N={v}", r.quantity));
            }
        }
    }
    let dt = t0.elapsed();
    pass &= dt < Duration::from_secs(120);
    g.report(
        "AC7",
        pass,
        dt,
        format!("birkhoff suite: worst rel dev {:.3}% ({})", worst.0 * 100.0, worst.1),
    );
}

fn ac8(g: &mut Gate) {
    let t0 = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for v in 1..=3u64 {
        let b = bound_achievement(n(v), 200).unwrap();
        let (dl, dd) = (b.lyapunov.abs_dev, b.denominator.abs_dev);
        pass &= dl < 1e-3 && dd < 1e-3;
        parts.push(format!("N={v} lyap_dev={dl:.2e} denom_dev={dd:.2e}"));
    }
    let mut identity = 0.0f64;
    for v in 1..=100u64 {
        let b = lower_bounds(n(v));
        identity = identity.max((b.lyapunov - (2.0 * b.denominator - (v as f64).ln())).abs());
    }
    pass &= identity < 1e-12;
    g.report(
        "AC8",
        pass,
        t0.elapsed(),
        format!("bound achievement at depth 200: {}; identity worst={identity:.2e}", parts.join(", ")),
    );
}

fn ac9(g: &mut Gate) {
    let t0 = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for v in [1u64, 2, 3, 5, 10] {
        let t = Instant::now();
        let errs: Vec<f64> =
            [32usize, 128, 512].iter().map(|&m| build_model(n(v), m, None).unwrap().l1_error).collect();
        let dt = t.elapsed();
        pass &= errs[2] < 0.01 && errs[0] > errs[1] && errs[1] > errs[2] && dt < Duration::from_secs(60);
        parts.push(format!("N={v} L1={:.2e}/{:.2e}/{:.2e}", errs[0], errs[1], errs[2]));
    }
    g.report("AC9", pass, t0.elapsed(), format!("ulam recovery (m=32/128/512): {}", parts.join(", ")));
}

fn ac10(g: &mut Gate) {
    let t0 = Instant::now();
    let signal = holder_mean(n(1), 1.0, 1e-10).is_divergent();
    let mut cfg = SampleConfig::new(n(1));
    cfg.trials = 400;
    cfg.bits = 1024;
    let (pass, detail) = match birkhoff_estimate(&cfg, Observable::DigitPower(1.0)).unwrap() {
        Birkhoff::Divergent(d) => {
            let means: Vec<f64> = d.checkpoints.iter().map(|c| c.running_mean).collect();
            let capped_grows = d.checkpoints.windows(2).all(|w| w[1].capped_mean > w[0].capped_mean);
            let first = d.checkpoints.first().unwrap();
            let last = d.checkpoints.last().unwrap();
            (
                signal && d.grows() && capped_grows,
                format!(
                    "running mean {:.2} at {} terms -> {:.2} at {} terms ({} checkpoints, peak {:.2})",
                    first.running_mean,
                    first.terms,
                    last.running_mean,
                    last.terms,
                    means.len(),
                    means.iter().copied().fold(0.0, f64::max)
                ),
            )
        }
        Birkhoff::Estimate(_) => (false, "unit power returned a finite estimate".into()),
    };
    g.report("AC10", pass, t0.elapsed(), format!("divergence: holder_mean(r=1) signal={signal}, {detail}"));
}

fn main() {
    let mut g = Gate { failed: Vec::new() };
    ac1(&mut g);
    ac2(&mut g);
    ac3(&mut g);
    ac4(&mut g);
    ac5(&mut g);
    ac6(&mut g);
    ac7(&mut g);
    ac8(&mut g);
    ac9(&mut g);
    ac10(&mut g);
    if g.failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: {} of 10 failed: {}", g.failed.len(), g.failed.join(", "));
        std::process::exit(1);
    }
}
