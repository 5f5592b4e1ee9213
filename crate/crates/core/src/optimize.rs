//! One-dimensional maximization and root finding used by the conjugate
//! (Legendre transform) evaluations.

use crate::error::{Error, Result};

/// Hard iteration cap shared by every root-find in the crate.
pub const MAX_ITERATIONS: usize = 200;
/// Relative residual at which a root-find stops.
pub const RELATIVE_TOLERANCE: f64 = 1e-12;
/// Largest half-width of a geometric bracket search.
pub const MAX_BRACKET: f64 = 1.152_921_504_606_847e18; // 2^60

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
/// Returns `(argmax, max)`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if b - a <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
            break;
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    let mut best = (x, fx);
    for (p, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (p, v);
        }
    }
    best
}

/// Solves `deriv(θ) = target` for `θ >= 0`, where `deriv` is strictly increasing
/// on `[0, ∞)` with `deriv(0) <= target`.
///
/// The upper end of the bracket starts at 1 and doubles until it exceeds the
/// root (at most [`MAX_BRACKET`]). Inside the bracket Newton steps using
/// `second` are taken when they stay inside; otherwise the bracket is bisected.
pub fn solve_increasing<D, S>(
    func: &'static str,
    mut deriv: D,
    mut second: S,
    target: f64,
    initial: f64,
) -> Result<f64>
where
    D: FnMut(f64) -> Result<f64>,
    S: FnMut(f64) -> Result<f64>,
{
    let tol = RELATIVE_TOLERANCE * target.abs().max(1.0);
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while deriv(hi)? < target {
        lo = hi;
        hi *= 2.0;
        if hi > MAX_BRACKET {
            return Err(Error::NoConvergence {
                func,
                iterations: 60,
                residual: f64::INFINITY,
            });
        }
    }
    let mut x = initial.clamp(lo, hi);
    if !(x > lo && x < hi) {
        x = 0.5 * (lo + hi);
    }
    let mut residual = f64::NAN;
    for _ in 0..MAX_ITERATIONS {
        let g = deriv(x)? - target;
        residual = g;
        if g.abs() <= tol {
            return Ok(x);
        }
        if g > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(x);
        }
        let h = second(x)?;
        let mut next = x - g / h;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        x = next;
    }
    Err(Error::NoConvergence {
        func,
        iterations: MAX_ITERATIONS,
        residual,
    })
}
