//! The four channel estimators (DML, MCML, GML, training-based LS), the
//! Viterbi-Viterbi phase estimator with unique-word ambiguity resolution,
//! and the coherent symbol detector used for SER accounting.

mod detect;
mod dml;
mod gml;
mod grid;
mod ls;
mod mcml;
mod phase;

pub use detect::detect_symbols;
pub use dml::{dml_estimate, dml_objective, estimate_b_mag, estimate_sigma_o2};
pub use gml::{gml_estimate, GmlAccumulator};
pub use grid::GridSpec;
pub use ls::{ls_estimate, LsEstimate, PilotBlock};
pub use mcml::{mcml_estimate, mcml_objective};
pub use phase::{phase_candidates, resolve_ambiguity, vv_phase_estimate};

use num_complex::Complex64;

/// Output of one estimator run. Fields an estimator does not produce are
/// left absent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimationResult {
    pub a_hat: Complex64,
    pub b_mag_hat: Option<f64>,
    pub sigma_o2_hat: Option<f64>,
    /// In `[0, 2pi)` when present.
    pub phi_b_hat: Option<f64>,
    pub objective_value: Option<f64>,
    pub grid_resolution: Option<f64>,
}

impl EstimationResult {
    pub fn new(a_hat: Complex64) -> Self {
        EstimationResult {
            a_hat,
            b_mag_hat: None,
            sigma_o2_hat: None,
            phi_b_hat: None,
            objective_value: None,
            grid_resolution: None,
        }
    }
}
