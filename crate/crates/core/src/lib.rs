//! N-continued fractions and the generalized Gauss map `T_N(x) = {N/x}`.
//!
//! For every positive integer `N` the map `T_N` on `[0, 1)` generates the
//! expansion
//!
//! ```text
//! x = N / (a_1 + N / (a_2 + N / (a_3 + ...)))      a_k >= N
//! ```
//!
//! and preserves the probability measure with density
//! `1 / ((N + x) ln(1 + 1/N))`. This crate provides:
//!
//! - [`dynamics`]: the map, exact expansion of rationals, and reconstruction.
//! - [`convergents`]: unreduced convergents `A_n / B_n` and their exact identities.
//! - [`measure`]: the closed forms (density, digit frequencies, Khinchin and
//!   Hölder means, the Lévy, Lyapunov and Loch constants, lower bounds).
//! - [`lab`]: Monte Carlo Birkhoff averages over exactly expanded random rationals.
//! - [`ulam`]: Ulam discretization of the transfer operator, recovering the
//!   invariant density numerically.
//! - [`cli`]: the report-emitting command surface behind the `ncfrac` binary.
//!
//! Every capability has a runnable program under `examples/`:
//!
//! ```bash
//! cargo run --release -p ncfrac --example expand_rational
//! cargo run --release -p ncfrac --example constants_table
//! cargo run --release -p ncfrac --example birkhoff_averages
//! cargo run --release -p ncfrac --example levy_growth
//! cargo run --release -p ncfrac --example bound_achievement
//! cargo run --release -p ncfrac --example ulam_density
//! cargo run --release -p ncfrac --example divergent_mean
//! ```

pub mod bigmath;
pub mod cli;
pub mod convergents;
pub mod dynamics;
mod error;
pub mod lab;
pub mod measure;
pub mod ulam;

pub use convergents::{Convergent, ConvergentTrace};
pub use dynamics::{Expansion, NIndex, Rational};
pub use error::{Error, Result};
