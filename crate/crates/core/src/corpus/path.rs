//! Bisection for singular configurations along a one-parameter path.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::framework::{Configuration, Framework};
use crate::matrixlab::pinning::{pinned_rigidity_matrix, select_pin_set, PinSet};

const MAX_ITERATIONS: usize = 200;
const MIN_WIDTH: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct SingularPoint {
    pub t: f64,
    pub config: Configuration,
    pub determinant: f64,
    pub iterations: usize,
}

/// Straight-line interpolation, `t = 0` at `from` and `t = 1` at `to`.
pub fn linear_path(from: Configuration, to: Configuration) -> impl Fn(f64) -> Configuration {
    move |t| {
        let coords = from
            .coords()
            .iter()
            .zip(to.coords())
            .map(|(a, b)| a + t * (b - a))
            .collect();
        Configuration::from_flat(from.dimension(), coords)
    }
}

/// Pinned determinant and `N·ε·∏‖column‖`, the scale below which it counts as zero.
fn det_with_floor(f: &Framework, pin: &PinSet) -> Result<(f64, f64)> {
    let r = pinned_rigidity_matrix(f, pin)?.entries;
    if r.nrows() != r.ncols() {
        return Err(Error::NotSquare {
            rows: r.nrows(),
            cols: r.ncols(),
        });
    }
    let hadamard: f64 = r.column_iter().map(|c| c.norm()).product();
    let floor = r.nrows() as f64 * f64::EPSILON * hadamard;
    Ok((DMatrix::lu(r).determinant(), floor))
}

/// Bisects `det R(path(t))` on `bracket`, with the pin set of `f` held fixed.
pub fn find_singular_config<P>(f: &Framework, path: P, bracket: (f64, f64)) -> Result<SingularPoint>
where
    P: Fn(f64) -> Configuration,
{
    let pin = select_pin_set(f)?;
    let eval = |t: f64| -> Result<(f64, f64, Configuration)> {
        let c = path(t);
        let (det, floor) = det_with_floor(&f.with_config(c.clone()), &pin)?;
        Ok((det, floor, c))
    };

    let (mut lo, mut hi) = bracket;
    let (det_lo, floor_lo, c_lo) = eval(lo)?;
    if det_lo.abs() <= floor_lo {
        return Ok(SingularPoint {
            t: lo,
            config: c_lo,
            determinant: det_lo,
            iterations: 0,
        });
    }
    let (det_hi, floor_hi, c_hi) = eval(hi)?;
    if det_hi.abs() <= floor_hi {
        return Ok(SingularPoint {
            t: hi,
            config: c_hi,
            determinant: det_hi,
            iterations: 0,
        });
    }
    if det_lo.signum() == det_hi.signum() {
        return Err(Error::NoSignChange { t0: lo, t1: hi });
    }

    let sign_lo = det_lo.signum();
    let mut best = (hi, det_hi, c_hi);
    for iteration in 1..=MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let (det, floor, c) = eval(mid)?;
        if det.abs() <= floor || (hi - lo).abs() <= MIN_WIDTH {
            return Ok(SingularPoint {
                t: mid,
                config: c,
                determinant: det,
                iterations: iteration,
            });
        }
        if det.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        if det.abs() < best.1.abs() {
            best = (mid, det, c);
        }
    }
    Ok(SingularPoint {
        t: best.0,
        config: best.2,
        determinant: best.1,
        iterations: MAX_ITERATIONS,
    })
}
