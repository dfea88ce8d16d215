//! Figure-level drivers: sweep physical parameters, assemble states,
//! evaluate measures, verify closed forms and conservation laws, and run the
//! estimation protocols.

mod berry;
mod blackhole;
mod collapse;
mod expansion;
mod flat;

pub use berry::*;
pub use blackhole::*;
pub use collapse::*;
pub use expansion::*;
pub use flat::*;

/// Evenly spaced grid of `points` values on [lo, hi].
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2, "need at least two grid points");
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

/// Default grid size for sweeps.
pub const DEFAULT_GRID_POINTS: usize = 50;

/// Deterministic golden-section maximization of `f` on [lo, hi] to an
/// absolute x tolerance.
pub(crate) fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    let gr = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > xtol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    (x, fx)
}

/// Deterministic bisection for a bracketed sign change, to absolute xtol.
pub(crate) fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    let mut flo = f(lo);
    loop {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= xtol {
            return mid;
        }
        let fm = f(mid);
        if (flo <= 0.0) == (fm <= 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
}
