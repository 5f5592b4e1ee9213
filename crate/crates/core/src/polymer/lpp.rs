//! Max-plus recursion for Brownian last-passage percolation on the grid.
//!
//! `L₁(t) = B⁽¹⁾_{(t0,t)}` and `Lₖ(t) = B⁽ᵏ⁾_t + max_{s <= t}[Lₖ₋₁(s) − B⁽ᵏ⁾_s]`,
//! with `s` ranging over grid points (ties allowed).

use super::transfer::{ProfileMode, TransferProfile};
use crate::environment::BrownianLattice;
use crate::error::{Error, Result};

/// Level-`n` profile on grid indices `j0, j0 + stride, …` up to `j1`.
/// `sign = -1` runs the recursion on negated paths.
fn max_plus(
    lat: &BrownianLattice,
    n: usize,
    j0: usize,
    j1: usize,
    stride: usize,
    sign: f64,
) -> Vec<f64> {
    let idx: Vec<usize> = (j0..=j1).step_by(stride).collect();
    let p0 = lat.path(0);
    let base = sign * p0[j0];
    let mut level: Vec<f64> = idx.iter().map(|&j| sign * p0[j] - base).collect();
    for k in 1..n {
        let p = lat.path(k);
        let mut best = f64::NEG_INFINITY;
        for (v, &j) in level.iter_mut().zip(&idx) {
            let b = sign * p[j];
            best = best.max(*v - b);
            *v = b + best;
        }
    }
    level
}

fn check_stride(j0: usize, j1: usize, stride: usize) -> Result<()> {
    if stride == 0 || !(j1 - j0).is_multiple_of(stride) {
        return Err(Error::GridMismatch(format!(
            "stride {stride} does not divide the {} grid steps",
            j1 - j0
        )));
    }
    Ok(())
}

/// Grid `Lₙ(t)` over `[0, t]`.
pub fn lpp_dp(lat: &BrownianLattice, n: usize, t: f64) -> Result<f64> {
    lpp_dp_strided(lat, n, 0.0, t, 1)
}

/// Grid `Lₙ` over `[t0, t1]` using only every `stride`-th grid point.
pub fn lpp_dp_strided(
    lat: &BrownianLattice,
    n: usize,
    t0: f64,
    t1: f64,
    stride: usize,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "must be positive"));
    }
    let (j0, j1) = lat.span_indices(n, t0, t1)?;
    check_stride(j0, j1, stride)?;
    Ok(*max_plus(lat, n, j0, j1, stride, 1.0).last().unwrap())
}

/// Min-plus analogue: infimum over ordered times of the same energy.
pub fn lpp_min_dp(lat: &BrownianLattice, n: usize, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "must be positive"));
    }
    let (j0, j1) = lat.span_indices(n, 0.0, t)?;
    Ok(-*max_plus(lat, n, j0, j1, 1, -1.0).last().unwrap())
}

/// `Lₙ(s)` for every grid time `s` in `[0, t]`.
pub fn lpp_profile(lat: &BrownianLattice, n: usize, t: f64) -> Result<TransferProfile> {
    if n == 0 {
        return Err(Error::param("n", "must be positive"));
    }
    let (j0, j1) = lat.span_indices(n, 0.0, t)?;
    Ok(TransferProfile {
        level: n,
        mode: ProfileMode::MaxPlus,
        t_first: lat.grid().time(j0),
        dt: lat.dt(),
        log_values: max_plus(lat, n, j0, j1, 1, 1.0),
    })
}
