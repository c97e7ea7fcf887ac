//! Ulam discretization of the transfer operator of `T_N`.
//!
//! With cells `C_i = [i/m, (i+1)/m)` the matrix
//! `P[i][j] = m · |C_i ∩ T_N^{-1}(C_j)|` is row-stochastic, and its
//! stationary vector times `m` approximates the invariant density without
//! using the closed form.
//!
//! On branch `k` the map is `x ↦ N/x - k` on `(N/(k+1), N/k]`, and the
//! preimage of `C_j` is `(Nm/(km+j+1), Nm/(km+j)]`. Branches up to the
//! cutoff are intersected cell by cell. Every branch `k >= Nm` lies inside
//! `C_0`, so the branches past the cutoff only feed row 0; their total for
//! column `j` is `N m (ψ(K+1+(j+1)/m) - ψ(K+1+j/m))`.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::NIndex;
use crate::measure;
use crate::{Error, Result};

pub const MIN_CELLS: usize = 16;
/// Dense storage limit.
pub const MAX_CELLS: usize = 2048;
pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_ITERS: usize = 100_000;

/// `max(10·N·m, 10^5)`.
pub fn default_cutoff(n: NIndex, m: usize) -> u64 {
    (10 * n.get() * m as u64).max(100_000)
}

/// The discretized operator with its stationary vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UlamModel {
    pub n: NIndex,
    pub m: usize,
    pub cutoff: u64,
    /// Row-major `m × m`.
    #[serde(skip)]
    pub matrix: Vec<f64>,
    pub stationary: Vec<f64>,
    pub iterations: usize,
    /// `‖πP - π‖₁` at the returned vector.
    pub residual: f64,
    /// `Σ_i |m π_i - ρ_N(mid_i)| / m`.
    pub l1_error: f64,
}

/// Power-iteration result.
#[derive(Debug, Clone, PartialEq)]
pub struct Stationary {
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub last_step: f64,
}

/// Builds `P`, then finds its stationary vector with the default tolerances.
pub fn build_model(n: NIndex, m: usize, cutoff: Option<u64>) -> Result<UlamModel> {
    let cutoff = cutoff.unwrap_or_else(|| default_cutoff(n, m));
    let matrix = transition_matrix(n, m, cutoff)?;
    let st = stationary(&matrix, m, DEFAULT_TOL, DEFAULT_MAX_ITERS)?;
    let residual = l1_distance(&step(&matrix, m, &st.vector), &st.vector);
    let l1_error = density_profile_of(n, &st.vector)
        .iter()
        .map(|r| (r.empirical - r.analytic).abs())
        .sum::<f64>()
        / m as f64;
    Ok(UlamModel {
        n,
        m,
        cutoff,
        matrix,
        stationary: st.vector,
        iterations: st.iterations,
        residual,
        l1_error,
    })
}

/// The row-stochastic Ulam matrix, row-major.
pub fn transition_matrix(n: NIndex, m: usize, cutoff: u64) -> Result<Vec<f64>> {
    if !(MIN_CELLS..=MAX_CELLS).contains(&m) {
        return Err(Error::InvalidConfig(format!(
            "cell count must be in {MIN_CELLS}..={MAX_CELLS}, got {m}"
        )));
    }
    let nm = n.get() * m as u64;
    if cutoff < nm {
        return Err(Error::InvalidConfig(format!(
            "branch cutoff {cutoff} is below N·m = {nm}"
        )));
    }
    let mut p = vec![0.0; m * m];
    p.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        fill_row(n, m, cutoff, i, row);
        let total = measure::neumaier(row.iter().copied());
        row.iter_mut().for_each(|v| *v /= total);
    });
    Ok(p)
}

fn fill_row(n: NIndex, m: usize, cutoff: u64, i: usize, row: &mut [f64]) {
    let (nf, mf) = (n.as_f64(), m as f64);
    let nm = nf * mf;
    let (lo, hi) = (i as f64 / mf, (i + 1) as f64 / mf);
    // branch k meets C_i iff N/(k+1) < hi and N/k >= lo
    let k_first = ((nm / (i as f64 + 1.0)).floor() as u64).max(n.get());
    let k_last = if i == 0 { cutoff } else { ((nm / i as f64).ceil() as u64 - 1).min(cutoff) };
    for k in k_first..=k_last {
        let km = k as f64 * mf;
        let (b_lo, b_hi) = (nf / (k as f64 + 1.0), nf / k as f64);
        if b_lo >= hi || b_hi < lo {
            continue;
        }
        let inside = b_lo >= lo && b_hi <= hi;
        for (j, v) in row.iter_mut().enumerate() {
            let jf = j as f64;
            if inside {
                *v += nm * mf / ((km + jf) * (km + jf + 1.0));
            } else {
                let a = nm / (km + jf + 1.0);
                let b = nm / (km + jf);
                let overlap = b.min(hi) - a.max(lo);
                if overlap > 0.0 {
                    *v += mf * overlap;
                }
            }
        }
    }
    if i == 0 {
        let base = cutoff as f64 + 1.0;
        for (j, v) in row.iter_mut().enumerate() {
            let c = j as f64 / mf;
            *v += nm * digamma_diff(base, c, c + 1.0 / mf);
        }
    }
}

/// `ψ(a + d) - ψ(a + c)` for `a >= 10`, `0 <= c < d <= 1`, from the
/// asymptotic series of the digamma function.
fn digamma_diff(a: f64, c: f64, d: f64) -> f64 {
    let rest = |x: f64| {
        let y = 1.0 / (x * x);
        -0.5 / x - y * (1.0 / 12.0 - y * (1.0 / 120.0 - y * (1.0 / 252.0 - y / 240.0)))
    };
    ((d - c) / (a + c)).ln_1p() + rest(a + d) - rest(a + c)
}

/// One step `π ↦ πP`, parallel over column blocks.
fn step(p: &[f64], m: usize, pi: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m];
    const BLOCK: usize = 64;
    out.par_chunks_mut(BLOCK).enumerate().for_each(|(b, block)| {
        let start = b * BLOCK;
        for (i, &w) in pi.iter().enumerate() {
            let row = &p[i * m + start..i * m + start + block.len()];
            for (o, &v) in block.iter_mut().zip(row) {
                *o += w * v;
            }
        }
    });
    out
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Left power iteration from the uniform vector until the L1 change of a
/// step is below `tol`.
pub fn stationary(p: &[f64], m: usize, tol: f64, max_iters: usize) -> Result<Stationary> {
    assert_eq!(p.len(), m * m, "matrix must be m × m");
    let mut pi = vec![1.0 / m as f64; m];
    let mut last_step = f64::INFINITY;
    for it in 1..=max_iters {
        let mut next = step(p, m, &pi);
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        last_step = l1_distance(&next, &pi);
        pi = next;
        if last_step < tol {
            return Ok(Stationary {
                vector: pi,
                iterations: it,
                last_step,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: max_iters,
        last_step,
    })
}

/// One row of the density comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub midpoint: f64,
    /// `m · π_i`.
    pub empirical: f64,
    pub analytic: f64,
}

impl UlamModel {
    pub fn density_profile(&self) -> Vec<ProfileRow> {
        density_profile_of(self.n, &self.stationary)
    }

    /// Largest `|row sum - 1|`.
    pub fn max_row_defect(&self) -> f64 {
        self.matrix
            .chunks(self.m)
            .map(|r| (measure::neumaier(r.iter().copied()) - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn density_profile_of(n: NIndex, pi: &[f64]) -> Vec<ProfileRow> {
    let m = pi.len() as f64;
    pi.iter()
        .enumerate()
        .map(|(i, &w)| {
            let mid = (i as f64 + 0.5) / m;
            ProfileRow {
                midpoint: mid,
                empirical: w * m,
                analytic: measure::density(n, mid).expect("midpoints lie in [0, 1)"),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> NIndex {
        NIndex::new(v).unwrap()
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(transition_matrix(n(1), 8, 1000).is_err());
        assert!(transition_matrix(n(1), 4096, 1 << 20).is_err());
        assert!(transition_matrix(n(2), 64, 127).is_err());
        assert!(transition_matrix(n(2), 64, 128).is_ok());
    }

    #[test]
    fn rows_are_stochastic_before_renormalizing() {
        // the digamma tail makes the raw row 0 complete, not just renormalized
        let (nn, m, cutoff) = (n(1), 64usize, 2000u64);
        let mut row = vec![0.0; m];
        fill_row(nn, m, cutoff, 0, &mut row);
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for i in [1usize, 17, 63] {
            let mut row = vec![0.0; m];
            fill_row(nn, m, cutoff, i, &mut row);
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12, "row {i}");
        }
    }

    #[test]
    fn digamma_tail_matches_long_sum() {
        // Σ_{k>K} m/((km+j)(km+j+1)) against the explicit sum to 10^7
        let (m, big_k, j) = (64.0f64, 1000.0f64, 5.0f64);
        let explicit: f64 = measure::neumaier(
            (1001..10_000_000u64)
                .rev()
                .map(|k| m / ((k as f64 * m + j) * (k as f64 * m + j + 1.0))),
        );
        let rest = digamma_diff(1e7, j / m, (j + 1.0) / m);
        let want = digamma_diff(big_k + 1.0, j / m, (j + 1.0) / m);
        assert!((explicit + rest - want).abs() < 1e-15 * want.max(1e-300) + 1e-18);
    }

    #[test]
    fn classical_gauss_density_is_recovered() {
        let model = build_model(n(1), 256, None).unwrap();
        assert!(model.max_row_defect() < 1e-12);
        assert!((model.stationary.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(model.stationary.iter().all(|&v| v >= 0.0));
        assert!(model.residual < 1e-12);
        assert!(model.iterations < 10_000);
        assert!(model.l1_error < 0.01);
    }

    #[test]
    fn refinement_improves_recovery() {
        for nn in [1u64, 3, 5] {
            let errs: Vec<f64> = [32usize, 64, 128]
                .iter()
                .map(|&m| build_model(n(nn), m, None).unwrap().l1_error)
                .collect();
            assert!(errs.windows(2).all(|w| w[1] < w[0]), "N={nn}: {errs:?}");
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let p = transition_matrix(n(1), 32, 1000).unwrap();
        match stationary(&p, 32, 0.0, 5) {
            Err(Error::NotConverged { iterations, .. }) => assert_eq!(iterations, 5),
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn profile_columns() {
        let model = build_model(n(2), 32, None).unwrap();
        let rows = model.density_profile();
        assert_eq!(rows.len(), 32);
        assert!((rows[0].midpoint - 1.0 / 64.0).abs() < 1e-15);
        assert!(rows.iter().all(|r| r.analytic > 0.0));
    }
}
