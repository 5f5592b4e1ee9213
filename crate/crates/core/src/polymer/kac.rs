//! Grand-canonical partition function `Ξₙ(m) = ∫ exp n(mx + γₙ(x)) dx` and the
//! concentration of its Kac density near `−Ψ₁(m)`.

use rayon::prelude::*;

use super::transfer::reverse_sweep;
use crate::environment::BrownianLattice;
use crate::error::{Error, Result};
use crate::specialfn::trigamma;
use crate::stats::{logsumexp, mean};

/// Half-width of the window around `−Ψ₁(m)` used for the Kac mass.
pub const KAC_WINDOW: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct KacDiagnostic {
    pub m: f64,
    pub n: usize,
    /// `(1/n) log Ξₙ(m)`.
    pub log_xi: f64,
    /// Maximizer of `m·x + γₙ(x)` over the x grid.
    pub argmax_x: f64,
    /// Kac mass within [`KAC_WINDOW`] of `−Ψ₁(m)`.
    pub mass_window: f64,
}

/// Evenly spaced negative x values from `lo` to `hi` inclusive.
pub fn x_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo < hi && hi < 0.0 && step > 0.0) {
        return Err(Error::param(
            "x",
            format!("need lo < hi < 0 and step > 0, got {lo}:{hi}:{step}"),
        ));
    }
    let k = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=k).map(|i| lo + i as f64 * step).collect())
}

fn check_x_grid(xs: &[f64]) -> Result<()> {
    if xs.len() < 3 {
        return Err(Error::param("x", "grid needs at least 3 points"));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) || !(xs[xs.len() - 1] < 0.0) {
        return Err(Error::param(
            "x",
            "grid must be strictly increasing and negative",
        ));
    }
    Ok(())
}

/// Kac diagnostic for one environment on `lat`, which must span
/// `[xs[0]·n, 0]` with at least `n` paths. Each `x` is evaluated at the grid
/// time nearest to `x·n`.
pub fn kac_from_lattice(
    lat: &BrownianLattice,
    m: f64,
    n: usize,
    xs: &[f64],
) -> Result<KacDiagnostic> {
    if !(m > 0.0) {
        return Err(Error::domain(
            "grand_partition",
            format!("m must be positive, got {m}"),
        ));
    }
    check_x_grid(xs)?;
    let nf = n as f64;
    let grid = lat.grid();
    let (_, j_end) = lat.span_indices(n, grid.t_min, 0.0)?;
    let starts: Vec<usize> = xs.iter().map(|&x| grid.nearest_index(x * nf)).collect();
    let j_first = starts[0];
    if grid.time(j_first) > xs[0] * nf + 0.5 * grid.dt {
        return Err(Error::GridMismatch(format!(
            "lattice does not reach x = {}",
            xs[0]
        )));
    }
    let log_z = reverse_sweep(lat, 1.0, n, j_first, j_end);

    let xe: Vec<f64> = starts.iter().map(|&j| grid.time(j) / nf).collect();
    let g: Vec<f64> = starts
        .iter()
        .zip(&xe)
        .map(|(&j, &x)| m * x + log_z[j - j_first] / nf)
        .collect();

    // Trapezoid weights in x.
    let k = xe.len();
    let w: Vec<f64> = (0..k)
        .map(|i| {
            let left = if i > 0 { xe[i] - xe[i - 1] } else { 0.0 };
            let right = if i + 1 < k { xe[i + 1] - xe[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect();
    let terms: Vec<f64> = g
        .iter()
        .zip(&w)
        .map(|(&gi, &wi)| nf * gi + wi.ln())
        .collect();
    let total = logsumexp(&terms);

    let imax = g
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > g[best] { i } else { best });
    if imax == 0 || imax == k - 1 {
        return Err(Error::WindowMiss {
            argmax: xe[imax],
            lo: xe[0],
            hi: xe[k - 1],
        });
    }
    let centre = -trigamma(m)?;
    let inside: Vec<f64> = terms
        .iter()
        .zip(&xe)
        .filter(|(_, &x)| (x - centre).abs() <= KAC_WINDOW)
        .map(|(&t, _)| t)
        .collect();
    let mass_window = (logsumexp(&inside) - total).exp().min(1.0);

    Ok(KacDiagnostic {
        m,
        n,
        log_xi: total / nf,
        argmax_x: xe[imax],
        mass_window,
    })
}

fn kac_lattice(n: usize, dt: f64, xs: &[f64], seed: u64, replica: u64) -> Result<BrownianLattice> {
    check_x_grid(xs)?;
    let reach = -xs[0] * n as f64;
    let t_min = -(reach / dt - 1e-9).ceil() * dt;
    BrownianLattice::sample_replica(n, t_min, 0.0, dt, seed, replica, 0.0)
}

/// Samples one environment on `[xs[0]·n, 0]` and computes its Kac diagnostic.
pub fn grand_partition(m: f64, n: usize, dt: f64, xs: &[f64], seed: u64) -> Result<KacDiagnostic> {
    let lat = kac_lattice(n, dt, xs, seed, 0)?;
    kac_from_lattice(&lat, m, n, xs)
}

/// Kac diagnostics averaged over `replicas` environments, one entry per `n`.
/// Every field of the returned diagnostics is a replica mean.
pub fn kac_concentration(
    m: f64,
    ns: &[usize],
    dt: f64,
    xs: &[f64],
    seed: u64,
    replicas: usize,
) -> Result<Vec<KacDiagnostic>> {
    if replicas == 0 {
        return Err(Error::param("replicas", "must be positive"));
    }
    ns.iter()
        .map(|&n| {
            let runs: Vec<KacDiagnostic> = (0..replicas as u64)
                .into_par_iter()
                .map(|r| kac_from_lattice(&kac_lattice(n, dt, xs, seed, r)?, m, n, xs))
                .collect::<Result<_>>()?;
            let avg = |f: fn(&KacDiagnostic) -> f64| mean(&runs.iter().map(f).collect::<Vec<_>>());
            Ok(KacDiagnostic {
                m,
                n,
                log_xi: avg(|d| d.log_xi),
                argmax_x: avg(|d| d.argmax_x),
                mass_window: avg(|d| d.mass_window),
            })
        })
        .collect()
}
