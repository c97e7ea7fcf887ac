//! The arithmetic mean of the digits is infinite: the running mean keeps
//! growing, roughly like the mean of digits capped at the sample size.

use ncfrac::lab::{birkhoff_estimate, Birkhoff, Observable, SampleConfig};
use ncfrac::measure::holder_mean;
use ncfrac::NIndex;

fn main() -> ncfrac::Result<()> {
    let n = NIndex::new(1)?;
    println!("holder_mean(N=1, r=1) divergent: {}", holder_mean(n, 1.0, 1e-10).is_divergent());

    let cfg = SampleConfig { trials: 400, bits: 1024, ..SampleConfig::new(n) };
    let Birkhoff::Divergent(d) = birkhoff_estimate(&cfg, Observable::DigitPower(1.0))? else {
        unreachable!("r = 1 is not integrable");
    };
    println!("{:>8} {:>16} {:>14}", "terms", "running mean", "capped mean");
    for c in &d.checkpoints {
        println!("{:>8} {:>16.4} {:>14.4}", c.terms, c.running_mean, c.capped_mean);
    }
    Ok(())
}
