//! Deterministic ML estimation of the cascaded self-interference channel.
//!
//! After removing self-interference with a candidate `u`, the cleaned
//! samples have a constant envelope exactly when `u` equals the true
//! cascaded channel, so the estimator minimizes the sample variance of the
//! cleaned envelope over a 2-D grid.

use num_complex::Complex64;

use super::grid::{minimize, GridSpec};
use super::EstimationResult;
use crate::error::{Error, Result};
use crate::model::ReceivedBlock;

fn envelopes(block: &ReceivedBlock, u: Complex64, a_amp: f64) -> Vec<f64> {
    block
        .z
        .iter()
        .zip(&block.t1)
        .map(|(&z, &t1)| (z - a_amp * u * t1).norm())
        .collect()
}

fn envelope_variance(env: &[f64]) -> f64 {
    let n = env.len() as f64;
    let mean = env.iter().sum::<f64>() / n;
    env.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0)
}

/// Sample variance of the cleaned envelope `|z_i - A u t1_i|`, the DML
/// objective (up to the `1/(N-1)` scale, which does not move the argmin).
pub fn dml_objective(u: Complex64, block: &ReceivedBlock, a_amp: f64) -> Result<f64> {
    if block.len() < 2 {
        return Err(Error::invalid("DML objective needs at least 2 samples"));
    }
    Ok(envelope_variance(&envelopes(block, u, a_amp)))
}

/// `(1 / (N A sqrt(P2))) sum |z_i - A a_hat t1_i|`, the closed-form
/// estimate of `|b|` at a given `a_hat`.
pub fn estimate_b_mag(a_hat: Complex64, block: &ReceivedBlock, a_amp: f64, p2: f64) -> f64 {
    let env = envelopes(block, a_hat, a_amp);
    env.iter().sum::<f64>() / (block.len() as f64 * a_amp * p2.sqrt())
}

/// `(1/N) sum (|z_i - A a_hat t1_i| - mean)^2`, the residual noise-variance
/// estimate at a given `a_hat`.
pub fn estimate_sigma_o2(a_hat: Complex64, block: &ReceivedBlock, a_amp: f64) -> f64 {
    let env = envelopes(block, a_hat, a_amp);
    let n = env.len() as f64;
    let mean = env.iter().sum::<f64>() / n;
    env.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / n
}

/// Grid-search DML estimate of the cascaded channel, with the closed-form
/// `|b|` and noise-variance estimates filled in at the winning point. The
/// phase of the cross channel is left for the Viterbi-Viterbi stage.
pub fn dml_estimate(
    block: &ReceivedBlock,
    a_amp: f64,
    p2: f64,
    grid: &GridSpec,
) -> Result<EstimationResult> {
    if block.len() < 2 {
        return Err(Error::invalid("DML estimation needs at least 2 samples"));
    }
    let mut objective = |u: Complex64| envelope_variance(&envelopes(block, u, a_amp));
    let (a_hat, value, resolution) = minimize(&mut objective, grid);
    Ok(EstimationResult {
        a_hat,
        b_mag_hat: Some(estimate_b_mag(a_hat, block, a_amp, p2)),
        sigma_o2_hat: Some(estimate_sigma_o2(a_hat, block, a_amp)),
        phi_b_hat: None,
        objective_value: Some(value),
        grid_resolution: Some(resolution),
    })
}
