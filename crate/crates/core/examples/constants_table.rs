//! Closed-form constants of `T_N` for a range of `N`.
//!
//! Columns: `K_N`, the harmonic and square-root Hölder means, `Λ_N`, the
//! Lévy and Lyapunov constants, Loch's constant and the two lower bounds.

use ncfrac::measure::{self, ConstantsReport};
use ncfrac::NIndex;

fn main() -> ncfrac::Result<()> {
    let ns: Vec<NIndex> = [1, 2, 3, 4, 5, 10, 100, 1000, 1_000_000]
        .into_iter()
        .map(NIndex::new)
        .collect::<ncfrac::Result<_>>()?;
    let reports = ConstantsReport::batch(&ns, &[-1.0, 0.5], 1e-12);

    println!(
        "{:>8} {:>14} {:>9} {:>9} {:>9} {:>12} {:>10} {:>10} {:>9} {:>9}",
        "N", "K_N", "K/N", "K_{-1}/N", "K_{1/2}/N", "Λ_N", "L_N", "λ_N", "loch", "λ_min"
    );
    for r in &reports {
        let nf = r.n.as_f64();
        let h: Vec<f64> = r.holder.iter().map(|h| h.mean.finite().unwrap_or(f64::NAN)).collect();
        println!(
            "{:>8} {:>14.6} {:>9.6} {:>9.6} {:>9.6} {:>12.9} {:>10.6} {:>10.6} {:>9.6} {:>9.6}",
            r.n,
            r.khinchin.value,
            r.khinchin.value / nf,
            h[0] / nf,
            h[1] / nf,
            r.levy_lambda,
            r.levy_l,
            r.lyapunov,
            r.loch,
            r.lower_bound_lyapunov,
        );
    }

    let e = std::f64::consts::E;
    println!("\nlimits: K_N/N -> e = {e:.6}, K_{{N,-1}}/N -> 2, K_{{N,1/2}}/N -> 4, Λ_N -> 1");
    for v in [10u64, 100, 1000] {
        let n = NIndex::new(v)?;
        println!(
            "N = {v:>4}: Λ_N = {:.12}  asymptotic = {:.12}",
            measure::levy_lambda(n),
            measure::lambda_asymptotic(n)
        );
    }
    Ok(())
}
