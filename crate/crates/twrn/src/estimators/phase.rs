//! Blind cross-channel phase recovery: Viterbi-Viterbi M-th power
//! estimation on the cleaned residuals, followed by unique-word resolution
//! of the M-fold ambiguity against a few pilots.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::TAU;

/// `(1/M) angle( sum |r_i|^2 e^{j(M angle(r_i) + pi)} )` reduced to
/// `[0, 2pi/M)`. Raising to the M-th power strips the PSK modulation; the
/// `+pi` cancels the half-step offset of the symbol set.
pub fn vv_phase_estimate(residuals: &[Complex64], m: usize) -> Result<f64> {
    if residuals.is_empty() {
        return Err(Error::invalid("phase estimation needs at least 1 residual"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for r in residuals {
        let w = r.norm_sqr();
        if w > 0.0 {
            acc += w * Complex64::from_polar(1.0, m as f64 * r.arg() + std::f64::consts::PI);
        }
    }
    if acc.norm() == 0.0 {
        return Err(Error::invalid("all residuals are zero"));
    }
    Ok((acc.arg() / m as f64).rem_euclid(TAU / m as f64))
}

/// The M ambiguity candidates `phi + 2 pi k / M`, each reduced to `[0, 2pi)`.
pub fn phase_candidates(phi: f64, m: usize) -> Vec<f64> {
    (0..m).map(|k| (phi + TAU * k as f64 / m as f64).rem_euclid(TAU)).collect()
}

/// Unique-word resolution: picks the candidate minimizing the pilot
/// residual `sum_j |s_j - A a_hat x1_j - A b_mag e^{j phi_k} x2_j|^2`.
/// Ties break toward the smallest candidate index.
pub fn resolve_ambiguity(
    candidates: &[f64],
    pilot_s: &[Complex64],
    pilot_x1: &[Complex64],
    pilot_x2: &[Complex64],
    a_hat: Complex64,
    b_mag_hat: f64,
    a_amp: f64,
) -> Result<f64> {
    if pilot_s.is_empty() {
        return Err(Error::invalid("ambiguity resolution needs at least 1 pilot"));
    }
    if candidates.is_empty() {
        return Err(Error::invalid("no phase candidates supplied"));
    }
    let mut best = (0usize, f64::INFINITY);
    for (k, &phi) in candidates.iter().enumerate() {
        let b = b_mag_hat * Complex64::from_polar(1.0, phi);
        let mut cost = 0.0;
        for j in 0..pilot_s.len() {
            cost += (pilot_s[j] - a_amp * a_hat * pilot_x1[j] - a_amp * b * pilot_x2[j]).norm_sqr();
        }
        if cost < best.1 {
            best = (k, cost);
        }
    }
    Ok(candidates[best.0].rem_euclid(TAU))
}
