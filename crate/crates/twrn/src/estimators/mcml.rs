//! Modified constrained ML for BPSK. The intractable joint phase search is
//! replaced by a pilot-based plug-in estimate of the cross-channel phase,
//! leaving a closed-form objective over the cascaded channel alone.

use num_complex::Complex64;

use super::grid::{minimize, GridSpec};
use super::EstimationResult;
use crate::error::{Error, Result};
use crate::model::ReceivedBlock;

struct PilotView {
    s: Vec<Complex64>,
    x1: Vec<Complex64>,
    x2: Vec<Complex64>,
}

fn pilot_view(block: &ReceivedBlock) -> PilotView {
    PilotView {
        s: block.pilot_received(),
        x1: block.pilot_x1(),
        x2: block.x2_pilots.clone(),
    }
}

/// Rotation aligning the cleaned residuals with the real axis at candidate
/// `u`. The pilot plug-in `angle(sum (s_j - A u x1_j) x2_j)` points along
/// `phi_b + pi` because the BPSK points are `+/- j sqrt(P2)` (each `x2^2`
/// contributes `-P2`); the residual direction `phi_b + pi/2` sits a
/// quarter turn away.
fn projection_rotation(pilots: &PilotView, u: Complex64, a_amp: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..pilots.s.len() {
        acc += (pilots.s[j] - a_amp * u * pilots.x1[j]) * pilots.x2[j];
    }
    Complex64::from_polar(1.0, -(acc.arg() - std::f64::consts::FRAC_PI_2))
}

fn objective_inner(block: &ReceivedBlock, pilots: &PilotView, u: Complex64, a_amp: f64) -> f64 {
    let rot = projection_rotation(pilots, u, a_amp);

    let mut quad = 0.0;
    let mut proj = 0.0;
    for (&z, &t1) in block.z.iter().zip(&block.t1) {
        let r = z - a_amp * u * t1;
        quad += r.norm_sqr();
        proj += (r * rot).re.abs();
    }
    quad - proj * proj / block.len() as f64
}

/// The MCML objective at a candidate `u` (BPSK blocks with pilots only).
pub fn mcml_objective(u: Complex64, block: &ReceivedBlock, a_amp: f64) -> Result<f64> {
    validate(block)?;
    Ok(objective_inner(block, &pilot_view(block), u, a_amp))
}

fn validate(block: &ReceivedBlock) -> Result<()> {
    if block.m != 2 {
        return Err(Error::invalid(format!(
            "MCML requires a BPSK block, got M = {}",
            block.m
        )));
    }
    if block.num_pilots() == 0 {
        return Err(Error::invalid("MCML requires at least one pilot"));
    }
    Ok(())
}

/// Grid-search MCML estimate with the constrained-ML `|b|` estimate at the
/// winning point.
pub fn mcml_estimate(
    block: &ReceivedBlock,
    a_amp: f64,
    p2: f64,
    grid: &GridSpec,
) -> Result<EstimationResult> {
    validate(block)?;
    let pilots = pilot_view(block);
    let mut objective = |u: Complex64| objective_inner(block, &pilots, u, a_amp);
    let (a_hat, value, resolution) = minimize(&mut objective, grid);

    // CML |b| at the winner: (1 / (N A sqrt(P2))) sum |Re{e^{-j phi} r_i}|.
    let rot = projection_rotation(&pilots, a_hat, a_amp);
    let b_mag = block
        .z
        .iter()
        .zip(&block.t1)
        .map(|(&z, &t1)| ((z - a_amp * a_hat * t1) * rot).re.abs())
        .sum::<f64>()
        / (block.len() as f64 * a_amp * p2.sqrt());

    Ok(EstimationResult {
        a_hat,
        b_mag_hat: Some(b_mag),
        sigma_o2_hat: None,
        phi_b_hat: None,
        objective_value: Some(value),
        grid_resolution: Some(resolution),
    })
}
