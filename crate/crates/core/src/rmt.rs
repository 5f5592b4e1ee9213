//! Largest eigenvalue of GUE matrices through the tridiagonal (β = 2) Hermite
//! model, and its comparison with grid last-passage percolation.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::environment::{stream_rng, BrownianLattice};
use crate::error::{Error, Result};
use crate::polymer::lpp_dp_strided;
use crate::stats;

/// Absolute tolerance of the eigenvalue bisection.
pub const EIGEN_TOL: f64 = 1e-10;

const DOMAIN_GUE: u64 = 0x4755_4531; // "GUE1"

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    pub diag: Vec<f64>,
    /// Nonnegative; `offdiag[k]` couples rows `k` and `k + 1`.
    pub offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::param("diag", "must be nonempty"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::param(
                "offdiag",
                "must have one entry fewer than diag",
            ));
        }
        if offdiag.iter().any(|&b| !(b >= 0.0)) {
            return Err(Error::param("offdiag", "entries must be nonnegative"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly less than `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0_f64;
        for (k, &a) in self.diag.iter().enumerate() {
            let b2 = if k == 0 {
                0.0
            } else {
                self.offdiag[k - 1] * self.offdiag[k - 1]
            };
            q = a - x - if k == 0 { 0.0 } else { b2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (a.abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..n {
            let left = if k > 0 { self.offdiag[k - 1] } else { 0.0 };
            let right = if k + 1 < n { self.offdiag[k] } else { 0.0 };
            lo = lo.min(self.diag[k] - left - right);
            hi = hi.max(self.diag[k] + left + right);
        }
        (lo, hi)
    }
}

/// Largest eigenvalue by Sturm-count bisection inside the Gershgorin interval.
pub fn largest_eigenvalue(t: &TridiagonalMatrix) -> f64 {
    let n = t.dim();
    let (mut lo, mut hi) = t.gershgorin();
    let pad = EIGEN_TOL.max(1e-12 * (lo.abs() + hi.abs()));
    lo -= pad;
    hi += pad;
    while hi - lo > EIGEN_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if t.sturm_count(mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `χ_d / √2` via the square root of a gamma(d/2, 2) variate.
fn half_chi(rng: &mut ChaCha8Rng, d: f64) -> f64 {
    let g = Gamma::new(0.5 * d, 2.0).expect("positive shape");
    (0.5 * g.sample(rng)).sqrt()
}

/// Tridiagonal model of an `n × n` GUE matrix with density `∝ exp(−tr H²/2)`:
/// diagonal `N(0, 1)`, off-diagonal `k` distributed as `χ_{2(n−k)}/√2`.
pub fn sample_gue_tridiag(n: usize, seed: u64) -> Result<TridiagonalMatrix> {
    sample_gue_tridiag_replica(n, seed, 0)
}

pub fn sample_gue_tridiag_replica(n: usize, seed: u64, replica: u64) -> Result<TridiagonalMatrix> {
    if n == 0 {
        return Err(Error::param("n", "must be positive"));
    }
    let mut rng = stream_rng(seed, replica, DOMAIN_GUE, n as u64);
    let diag: Vec<f64> = (0..n)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    let offdiag: Vec<f64> = (1..n)
        .map(|k| half_chi(&mut rng, 2.0 * (n - k) as f64))
        .collect();
    TridiagonalMatrix::new(diag, offdiag)
}

/// `λ_max` over replicas `0..replicas`, in order.
pub fn gue_largest_samples(n: usize, replicas: usize, seed: u64) -> Result<Vec<f64>> {
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| Ok(largest_eigenvalue(&sample_gue_tridiag_replica(n, seed, r)?)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GueLppReport {
    pub n: usize,
    pub replicas: usize,
    pub dt: f64,
    pub gue_mean: f64,
    pub gue_stderr: f64,
    /// Grid `Lₙ(1)` at step `dt`.
    pub lpp_mean: f64,
    pub lpp_stderr: f64,
    /// Grid `Lₙ(1)` at step `2·dt` on the same paths.
    pub lpp_coarse_mean: f64,
    /// Estimated gap between continuum and grid `Lₙ(1)` at step `dt`.
    pub allowance: f64,
    /// `|gue − lpp| <= 3·combined stderr + allowance`.
    pub agree: bool,
    /// `gue_mean >= lpp_mean − 3·combined stderr`.
    pub one_sided: bool,
}

impl GueLppReport {
    pub fn combined_stderr(&self) -> f64 {
        self.gue_stderr.hypot(self.lpp_stderr)
    }

    pub fn passed(&self) -> bool {
        self.agree && self.one_sided
    }
}

/// Compares `λ_max(GUEₙ)` with grid `Lₙ(1)`.
///
/// The grid bias of `Lₙ(1)` is taken to scale like `√dt`; comparing the means
/// at `dt` and `2·dt` gives the allowance `(L_dt − L_2dt)/(√2 − 1)`.
pub fn gue_vs_lpp(n: usize, replicas: usize, dt: f64, seed: u64) -> Result<GueLppReport> {
    if replicas < 2 {
        return Err(Error::param("replicas", "at least 2 replicas are required"));
    }
    let steps = (1.0 / dt).round();
    if !(dt > 0.0)
        || steps < 2.0
        || !(steps as usize).is_multiple_of(2)
        || (steps * dt - 1.0).abs() > 1e-9
    {
        return Err(Error::param(
            "dt",
            "must be 1/(2k) for a positive integer k",
        ));
    }
    let gue = gue_largest_samples(n, replicas, seed)?;
    let pairs: Vec<(f64, f64)> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let lat = BrownianLattice::sample_replica(n, 0.0, 1.0, dt, seed, r, 0.0)?;
            Ok((
                lpp_dp_strided(&lat, n, 0.0, 1.0, 1)?,
                lpp_dp_strided(&lat, n, 0.0, 1.0, 2)?,
            ))
        })
        .collect::<Result<_>>()?;
    let fine: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let coarse: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let (gm, gs) = (stats::mean(&gue), stats::std_error(&gue));
    let (lm, ls) = (stats::mean(&fine), stats::std_error(&fine));
    let cm = stats::mean(&coarse);
    let allowance = ((lm - cm) / (2f64.sqrt() - 1.0)).max(0.0);
    let comb = gs.hypot(ls);
    Ok(GueLppReport {
        n,
        replicas,
        dt,
        gue_mean: gm,
        gue_stderr: gs,
        lpp_mean: lm,
        lpp_stderr: ls,
        lpp_coarse_mean: cm,
        allowance,
        agree: (gm - lm).abs() <= 3.0 * comb + allowance,
        one_sided: gm >= lm - 3.0 * comb,
    })
}
