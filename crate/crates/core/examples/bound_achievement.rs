//! The constant-digit orbit `z_{N,N} = [N, N, N, ...]_N` attains both lower
//! bounds: the Lyapunov exponent `2 ln((√(N+4)+√N)/2)` and the denominator
//! growth `ln((√(N²+4N)+N)/2)`.

use ncfrac::lab::bound_achievement;
use ncfrac::NIndex;

fn main() -> ncfrac::Result<()> {
    for v in [1u64, 2, 3] {
        let b = bound_achievement(NIndex::new(v)?, 400)?;
        println!(
            "N = {v}: lyapunov bound {:.9}, denominator bound {:.9}",
            b.lyapunov.target, b.denominator.target
        );
        println!("{:>6} {:>14} {:>12} {:>14} {:>12}", "depth", "lyap avg", "dev", "(ln B_n)/n", "dev");
        for r in b.rows.iter().filter(|r| [10, 20, 50, 100, 200, 300, 400].contains(&r.depth)) {
            println!(
                "{:>6} {:>14.9} {:>12.3e} {:>14.9} {:>12.3e}",
                r.depth, r.lyapunov_average, r.lyapunov_dev, r.log_denominator_rate, r.denominator_dev
            );
        }
        println!();
    }
    Ok(())
}
