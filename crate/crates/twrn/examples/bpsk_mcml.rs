//! BPSK is the hard case for blind estimation: the DML objective is flat
//! along every residual perpendicular to b, so the constrained (MCML)
//! estimator with a couple of pilots is the right tool. This example shows
//! the failure and the fix side by side on the same block.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twrn::estimators::{dml_estimate, dml_objective, gml_estimate, mcml_estimate, GridSpec};
use twrn::model::{
    derive_channels, generate_channels, mcml_pilots, synthesize_block, SystemParams,
};

fn main() -> twrn::Result<()> {
    let snr_db = 25.0;
    let sigma2 = 10f64.powf(-snr_db / 10.0);
    let params = SystemParams::new(1.0, 1.0, 1.0, sigma2, sigma2)?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let channels = generate_channels(&mut rng, 0.3)?;
    let truth = derive_channels(&channels, &params);
    let pilots = mcml_pilots(params.p1, params.p2, 2)?;
    let block = synthesize_block(&mut rng, &channels, &params, 2, 45, &pilots)?;

    // Walk away from the truth along the perpendicular direction: the blind
    // objective barely moves.
    let perp = Complex64::from_polar(1.0, truth.b.arg() + std::f64::consts::FRAC_PI_2);
    println!("blind objective along v = a - u perpendicular to b:");
    for i in 0..=4 {
        let v = 0.5 * i as f64 * perp;
        let y = dml_objective(truth.a - v, &block, params.a_amp)?;
        println!("  |v| = {:.1}  ->  {:.3e}", v.norm(), y);
    }

    let center = gml_estimate(&block, params.a_amp, params.p1)?;
    let grid = GridSpec::around(center.a_hat, 1e-3)?;
    let dml = dml_estimate(&block, params.a_amp, params.p2, &grid)?;
    let mcml = mcml_estimate(&block, params.a_amp, params.p2, &grid)?;

    println!();
    println!("true a = {:+.4} {:+.4}i", truth.a.re, truth.a.im);
    println!("DML    |err| = {:.4}   (can land anywhere on the flat line)",
        (dml.a_hat - truth.a).norm());
    println!("MCML   |err| = {:.4}   (sign constraint removes the line)",
        (mcml.a_hat - truth.a).norm());
    Ok(())
}
