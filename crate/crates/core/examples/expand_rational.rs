//! Exact N-continued fraction of a rational, with its convergent table.
//!
//! ```bash
//! cargo run --release --example expand_rational -- 355/452 3
//! ```

use ncfrac::convergents::{convergent_sequence, convergent_table};
use ncfrac::dynamics::{evaluate, expand, DEFAULT_MAX_TERMS};
use ncfrac::{NIndex, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let x: Rational = args.next().as_deref().unwrap_or("355/452").parse()?;
    let n = NIndex::new(args.next().map_or(Ok(3), |s| s.parse())?)?;

    let e = expand(&x, n, DEFAULT_MAX_TERMS)?;
    let digits: Vec<String> = e.coeffs.iter().map(|d| d.to_string()).collect();
    println!("x = {x}, N = {n}");
    println!("digits [{}]  terminated: {}", digits.join(", "), e.terminated);
    if e.is_empty() {
        return Ok(());
    }

    let trace = convergent_sequence(&e.coeffs, n)?;
    println!("\n{:>3} {:>8} {:>14} {:>14} {:>14} {:>12}", "n", "a_n", "A_n", "B_n", "A_n/B_n", "|x-A_n/B_n|");
    for row in convergent_table(&x, &trace) {
        println!(
            "{:>3} {:>8} {:>14} {:>14} {:>14} {:>12.3e}",
            row.n, row.digit, row.a, row.b, row.reduced, row.abs_error
        );
    }
    println!("\ndeterminant identity: {}", trace.determinant_check());
    println!("B_n >= N^n:           {}", trace.growth_check());
    println!("error sandwich:       {}", trace.error_bounds_check(&x));
    println!("round trip:           {}", evaluate(&e.coeffs, n)? == x);
    Ok(())
}
