//! Tabulates the closed forms the CLI `theory` subcommand exposes:
//! the probability of a unique blind minimum, and GML MSE with its floor.

use num_complex::Complex64;
use twrn::bounds::{gml_error_floor, gml_mse_theory, p_unique};
use twrn::model::amplification_factor;

fn main() -> twrn::Result<()> {
    println!("P(unique blind minimum), QPSK:");
    for n in [2usize, 3, 5, 10, 20, 30] {
        println!("  N = {n:>2}: {:.10}", p_unique(4, n));
    }

    let b = Complex64::new(0.6, -0.3);
    let h2 = Complex64::new(0.9, 0.2);
    let n = 45;
    println!();
    println!("GML MSE vs SNR (N = {n}, floor {:.4e}):", gml_error_floor(b, n, 1.0));
    for snr in [0.0f64, 10.0, 20.0, 30.0, 40.0, 60.0] {
        let sigma2 = 10f64.powf(-snr / 10.0);
        let a_amp = amplification_factor(1.0, 1.0, 1.0, sigma2)?;
        let mse = gml_mse_theory(b, h2, a_amp, n, 1.0, 1.0, sigma2);
        println!("  {snr:>5.1} dB: {mse:.4e}");
    }
    Ok(())
}
