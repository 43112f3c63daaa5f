//! Deterministic coarse-to-fine 2-D grid minimization over the complex
//! plane.
//!
//! Stage 1 scans a square around the centering estimate; each later stage
//! shrinks the step by `refinement_factor` and rescans a window around the
//! incumbent wide enough to cover the previous stage's resolution. Scanning
//! is row-major in ascending (re, im) order with strict-improvement
//! acceptance, so equal objective values resolve to the lexicographically
//! smallest grid point and reruns are bit-identical.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub center: Complex64,
    pub half_width: f64,
    pub coarse_step: f64,
    pub final_step: f64,
    pub refinement_factor: u32,
}

impl GridSpec {
    /// The default search protocol: a square of half-width
    /// `3 (|center| + 1)` around the centering estimate, 101 coarse points
    /// per axis, tenfold refinement down to `final_step`.
    pub fn around(center: Complex64, final_step: f64) -> Result<Self> {
        let half_width = 3.0 * (center.norm() + 1.0);
        GridSpec::new(center, half_width, half_width / 50.0, final_step, 10)
    }

    pub fn new(
        center: Complex64,
        half_width: f64,
        coarse_step: f64,
        final_step: f64,
        refinement_factor: u32,
    ) -> Result<Self> {
        if !center.re.is_finite() || !center.im.is_finite() {
            return Err(Error::invalid("grid center must be finite"));
        }
        if !(final_step > 0.0) || !(coarse_step > 0.0) || !(half_width > 0.0) {
            return Err(Error::invalid("grid steps and half-width must be positive"));
        }
        if final_step > coarse_step || half_width < coarse_step {
            return Err(Error::invalid(
                "grid requires final_step <= coarse_step <= half_width",
            ));
        }
        if refinement_factor < 2 {
            return Err(Error::invalid("refinement factor must be >= 2"));
        }
        Ok(GridSpec { center, half_width, coarse_step, final_step, refinement_factor })
    }
}

/// Scans the square `center +/- extent` at `step`, keeping the strictly
/// best point. `best` is updated in place.
fn scan_square<F: FnMut(Complex64) -> f64>(
    objective: &mut F,
    center: Complex64,
    extent: f64,
    step: f64,
    best: &mut (Complex64, f64),
) {
    let k = (extent / step).ceil() as i64;
    for ix in -k..=k {
        let re = center.re + ix as f64 * step;
        for iy in -k..=k {
            let u = Complex64::new(re, center.im + iy as f64 * step);
            let value = objective(u);
            if value < best.1 {
                *best = (u, value);
            }
        }
    }
}

/// Runs the full coarse-to-fine protocol. Returns the winning point, its
/// objective value, and the resolution of the last stage.
pub fn minimize<F: FnMut(Complex64) -> f64>(
    objective: &mut F,
    spec: &GridSpec,
) -> (Complex64, f64, f64) {
    let mut best = (spec.center, objective(spec.center));
    let mut step = spec.coarse_step.min(spec.half_width);
    scan_square(objective, spec.center, spec.half_width, step, &mut best);
    while step > spec.final_step {
        let next = (step / spec.refinement_factor as f64).max(spec.final_step);
        // Window of 1.5x the previous step covers the incumbent's
        // quantization uncertainty.
        scan_square(objective, best.0, 1.5 * step, next, &mut best);
        step = next;
    }
    (best.0, best.1, step)
}
