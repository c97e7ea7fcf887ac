//! Growth of the convergent denominators: `(ln B_n)/n` against `Λ_N + ln N`,
//! and the convergence rate `-(1/n) ln|x - A_n/B_n|` against the Lyapunov
//! exponent.

use ncfrac::lab::{levy_estimate, mean_approximation_rate, SampleConfig};
use ncfrac::{measure, NIndex};

fn main() -> ncfrac::Result<()> {
    println!("{:>3} {:>10} {:>10} {:>10} {:>11}", "N", "(ln B_n)/n", "L_N", "rel dev", "worst trial");
    for v in [1u64, 2, 3, 5, 10] {
        let n = NIndex::new(v)?;
        let r = levy_estimate(&SampleConfig::new(n))?;
        println!(
            "{:>3} {:>10.6} {:>10.6} {:>9.3}% {:>11.6}   (bound {:.6})",
            v,
            r.empirical,
            r.target,
            100.0 * r.rel_dev,
            r.per_trial_min,
            measure::lower_bounds(n).denominator
        );
    }

    // 1024-bit points have ~600 digits at N = 1, so depth 400 is still generic
    let n = NIndex::new(1)?;
    let cfg = SampleConfig { trials: 20, bits: 1024, ..SampleConfig::new(n) };
    let r = mean_approximation_rate(&cfg, 400)?;
    println!(
        "\napproximation rate at depth 400, N = 1: {:.5} (Lyapunov {:.5}, {:.2}% off, {} points)",
        r.empirical,
        r.target,
        100.0 * r.rel_dev,
        r.trials
    );
    Ok(())
}
