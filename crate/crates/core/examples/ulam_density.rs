//! Recovers the invariant density from the Ulam matrix and compares it
//! with `1/((N+x) ln(1+1/N))`.
//!
//! ```bash
//! cargo run --release --example ulam_density -- 5 > profile.csv
//! ```
//!
//! Writes the summary to stderr and the density profile as CSV to stdout.

use ncfrac::ulam::build_model;
use ncfrac::NIndex;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let profile_n: u64 = std::env::args().nth(1).map_or(Ok(1), |s| s.parse())?;
    for v in [1u64, 2, 3, 5, 10] {
        let n = NIndex::new(v)?;
        let mut line = format!("N = {v:>2}:");
        for m in [32usize, 128, 512] {
            let model = build_model(n, m, None)?;
            line += &format!("  m={m} L1={:.3e} ({} iters)", model.l1_error, model.iterations);
        }
        eprintln!("{line}");
    }

    let model = build_model(NIndex::new(profile_n)?, 512, None)?;
    println!("midpoint,empirical,analytic");
    for r in model.density_profile() {
        println!("{:.16e},{:.16e},{:.16e}", r.midpoint, r.empirical, r.analytic);
    }
    Ok(())
}
