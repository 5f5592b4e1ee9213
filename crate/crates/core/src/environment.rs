//! The quenched Brownian environment: `n` independent standard Brownian paths
//! sampled on a shared uniform time grid.
//!
//! Every path draws from its own counter-based stream keyed by
//! `(seed, replica, path, direction)`, so replicas are independent, adding
//! paths leaves existing paths untouched, and extending the grid on one side
//! of the anchor leaves the other side untouched.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::stats;

/// Relative tolerance when checking that a time lies on the grid.
const GRID_TOL: f64 = 1e-9;

/// SplitMix64 finalizer.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A ChaCha generator keyed by `(seed, replica, domain)` on stream `stream`.
pub(crate) fn stream_rng(seed: u64, replica: u64, domain: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut h = mix64(seed ^ mix64(replica ^ mix64(domain)));
    for chunk in key.chunks_mut(8) {
        h = mix64(h);
        chunk.copy_from_slice(&h.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

const DOMAIN_LATTICE: u64 = 0x4c41_5454; // "LATT"

/// Grid geometry shared by all paths of a lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub dt: f64,
    pub grid_size: usize,
}

impl Grid {
    pub fn new(t_min: f64, t_max: f64, dt: f64) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
            return Err(Error::InvalidGrid(format!(
                "need t_min < t_max, got [{t_min}, {t_max}]"
            )));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidGrid(format!("dt must be positive, got {dt}")));
        }
        let span = t_max - t_min;
        let steps = (span / dt).round();
        if steps < 1.0 || ((steps * dt - span) / dt).abs() > GRID_TOL * steps.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "dt = {dt} does not divide the span {span}"
            )));
        }
        Ok(Self {
            t_min,
            t_max,
            dt,
            grid_size: steps as usize,
        })
    }

    #[inline]
    pub fn time(&self, j: usize) -> f64 {
        self.t_min + j as f64 * self.dt
    }

    /// Index of an on-grid time.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let pos = (t - self.t_min) / self.dt;
        let j = pos.round();
        if !(pos.is_finite()) || (pos - j).abs() > GRID_TOL * j.abs().max(1.0) {
            return Err(Error::OutOfRange(format!(
                "time {t} is not on the grid (dt = {})",
                self.dt
            )));
        }
        if j < 0.0 || j > self.grid_size as f64 {
            return Err(Error::OutOfRange(format!(
                "time {t} outside [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        Ok(j as usize)
    }

    /// Index of the grid point nearest to `t`, clamped to the grid.
    pub fn nearest_index(&self, t: f64) -> usize {
        let j = ((t - self.t_min) / self.dt).round();
        j.clamp(0.0, self.grid_size as f64) as usize
    }

    #[inline]
    pub fn points(&self) -> usize {
        self.grid_size + 1
    }
}

/// `n_paths` Brownian paths on a uniform grid, each pinned to zero at the anchor.
/// Immutable once sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianLattice {
    grid: Grid,
    n_paths: usize,
    anchor_index: usize,
    seed: u64,
    replica: u64,
    /// Row-major, `n_paths × (grid_size + 1)`.
    values: Vec<f64>,
}

impl BrownianLattice {
    /// Samples a lattice with replica index 0.
    pub fn sample(
        n_paths: usize,
        t_min: f64,
        t_max: f64,
        dt: f64,
        seed: u64,
        anchor_time: f64,
    ) -> Result<Self> {
        Self::sample_replica(n_paths, t_min, t_max, dt, seed, 0, anchor_time)
    }

    pub fn sample_replica(
        n_paths: usize,
        t_min: f64,
        t_max: f64,
        dt: f64,
        seed: u64,
        replica: u64,
        anchor_time: f64,
    ) -> Result<Self> {
        if n_paths == 0 {
            return Err(Error::param("n_paths", "must be positive"));
        }
        let grid = Grid::new(t_min, t_max, dt)?;
        let anchor_index = grid.index_of(anchor_time)?;
        let points = grid.points();
        let sd = dt.sqrt();
        let mut values = vec![0.0; n_paths * points];
        for (path, row) in values.chunks_mut(points).enumerate() {
            let mut fwd = stream_rng(seed, replica, DOMAIN_LATTICE, 2 * path as u64);
            let mut acc = 0.0;
            for v in row[anchor_index + 1..].iter_mut() {
                let z: f64 = fwd.sample(StandardNormal);
                acc += sd * z;
                *v = acc;
            }
            let mut bwd = stream_rng(seed, replica, DOMAIN_LATTICE, 2 * path as u64 + 1);
            let mut acc = 0.0;
            for v in row[..anchor_index].iter_mut().rev() {
                let z: f64 = bwd.sample(StandardNormal);
                acc -= sd * z;
                *v = acc;
            }
        }
        Ok(Self {
            grid,
            n_paths,
            anchor_index,
            seed,
            replica,
            values,
        })
    }

    /// Builds a lattice from explicit path values (row-major). Used for tests
    /// and for reading dumps.
    pub fn from_values(
        n_paths: usize,
        t_min: f64,
        t_max: f64,
        dt: f64,
        seed: u64,
        anchor_index: usize,
        values: Vec<f64>,
    ) -> Result<Self> {
        let grid = Grid::new(t_min, t_max, dt)?;
        if values.len() != n_paths * grid.points() {
            return Err(Error::GridMismatch(format!(
                "expected {} values, got {}",
                n_paths * grid.points(),
                values.len()
            )));
        }
        if anchor_index > grid.grid_size {
            return Err(Error::OutOfRange(format!("anchor index {anchor_index}")));
        }
        Ok(Self {
            grid,
            n_paths,
            anchor_index,
            seed,
            replica: 0,
            values,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn n_paths(&self) -> usize {
        self.n_paths
    }
    pub fn dt(&self) -> f64 {
        self.grid.dt
    }
    pub fn t_min(&self) -> f64 {
        self.grid.t_min
    }
    pub fn t_max(&self) -> f64 {
        self.grid.t_max
    }
    pub fn grid_size(&self) -> usize {
        self.grid.grid_size
    }
    pub fn anchor_index(&self) -> usize {
        self.anchor_index
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn replica(&self) -> u64 {
        self.replica
    }

    /// Values of one path at every grid point.
    #[inline]
    pub fn path(&self, i: usize) -> &[f64] {
        let p = self.grid.points();
        &self.values[i * p..(i + 1) * p]
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.points() + j]
    }

    /// `B⁽ⁱ⁾(s, t) = B⁽ⁱ⁾_t − B⁽ⁱ⁾_s` for on-grid `s`, `t`.
    pub fn increment(&self, path: usize, s: f64, t: f64) -> Result<f64> {
        if path >= self.n_paths {
            return Err(Error::OutOfRange(format!(
                "path {path} out of range (n_paths = {})",
                self.n_paths
            )));
        }
        let js = self.grid.index_of(s)?;
        let jt = self.grid.index_of(t)?;
        Ok(self.value(path, jt) - self.value(path, js))
    }

    /// Checks that the lattice covers `[t0, t1]` with at least `paths` paths
    /// and returns the grid indices of the endpoints.
    pub(crate) fn span_indices(&self, paths: usize, t0: f64, t1: f64) -> Result<(usize, usize)> {
        if self.n_paths < paths {
            return Err(Error::InsufficientPaths {
                required: paths,
                available: self.n_paths,
            });
        }
        let j0 = self
            .grid
            .index_of(t0)
            .map_err(|e| Error::GridMismatch(format!("start time: {e}")))?;
        let j1 = self
            .grid
            .index_of(t1)
            .map_err(|e| Error::GridMismatch(format!("end time: {e}")))?;
        if j1 < j0 {
            return Err(Error::GridMismatch(format!(
                "interval [{t0}, {t1}] is reversed"
            )));
        }
        Ok((j0, j1))
    }

    /// Writes the lattice: header `n_paths, t_min, t_max, dt, seed` as
    /// little-endian 64-bit fields, then row-major 64-bit floats.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.n_paths as u64).to_le_bytes())?;
        w.write_all(&self.grid.t_min.to_le_bytes())?;
        w.write_all(&self.grid.t_max.to_le_bytes())?;
        w.write_all(&self.grid.dt.to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a dump written by [`write_dump`](Self::write_dump). The anchor is
    /// recovered as the first grid column that is zero on every path.
    pub fn read_dump<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = [0u8; 8];
        let mut next = |r: &mut R| -> Result<[u8; 8]> {
            r.read_exact(&mut buf)?;
            Ok(buf)
        };
        let n_paths = u64::from_le_bytes(next(&mut r)?) as usize;
        let t_min = f64::from_le_bytes(next(&mut r)?);
        let t_max = f64::from_le_bytes(next(&mut r)?);
        let dt = f64::from_le_bytes(next(&mut r)?);
        let seed = u64::from_le_bytes(next(&mut r)?);
        let grid = Grid::new(t_min, t_max, dt)?;
        let mut values = Vec::with_capacity(n_paths * grid.points());
        for _ in 0..n_paths * grid.points() {
            values.push(f64::from_le_bytes(next(&mut r)?));
        }
        let points = grid.points();
        let anchor_index = (0..points)
            .find(|&j| (0..n_paths).all(|i| values[i * points + j] == 0.0))
            .ok_or_else(|| Error::GridMismatch("dump has no anchor column".into()))?;
        Self::from_values(n_paths, t_min, t_max, dt, seed, anchor_index, values)
    }
}

/// A Monte Carlo estimate with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRecord {
    pub quantity: String,
    pub mean: f64,
    pub stderr: f64,
    pub replicas: usize,
    pub n: usize,
    pub dt: f64,
    pub seed: u64,
}

impl EstimateRecord {
    pub fn from_samples(
        quantity: impl Into<String>,
        samples: &[f64],
        n: usize,
        dt: f64,
        seed: u64,
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::param(
                "replicas",
                "at least 2 replicas are needed for a standard error",
            ));
        }
        Ok(Self {
            quantity: quantity.into(),
            mean: stats::mean(samples),
            stderr: stats::std_error(samples),
            replicas: samples.len(),
            n,
            dt,
            seed,
        })
    }
}
