//! Birkhoff averages over exactly expanded random rationals against the
//! closed forms: geometric mean of the digits, frequency of the smallest
//! digit, and the Lyapunov exponent.
//!
//! ```bash
//! cargo run --release --example birkhoff_averages -- 200 512 42
//! ```

use ncfrac::lab::{birkhoff_estimate, lyapunov_estimate, Observable, SampleConfig};
use ncfrac::NIndex;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let trials = args.first().copied().unwrap_or(200) as usize;
    let bits = args.get(1).copied().unwrap_or(512);
    let seed = args.get(2).copied().unwrap_or(42);

    println!("{:>2} {:<16} {:>12} {:>12} {:>9} {:>10}", "N", "quantity", "empirical", "target", "rel dev", "std err");
    for v in [1u64, 2, 5] {
        let n = NIndex::new(v)?;
        let cfg = SampleConfig { trials, bits, seed, ..SampleConfig::new(n) };
        let mut reports = Vec::new();
        for obs in [Observable::LogDigit, Observable::DigitIndicator(v)] {
            reports.extend(birkhoff_estimate(&cfg, obs)?.estimate().cloned());
        }
        reports.push(lyapunov_estimate(&cfg)?);
        for r in reports {
            println!(
                "{:>2} {:<16} {:>12.6} {:>12.6} {:>8.3}% {:>10.2e}",
                v,
                r.quantity,
                r.empirical,
                r.target,
                100.0 * r.rel_dev,
                r.std_error
            );
        }
    }
    Ok(())
}
