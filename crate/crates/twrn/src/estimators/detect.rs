//! Coherent detection of the remote symbols from the cleaned residuals.
//! With a constant-modulus alphabet only the cascaded channel and the
//! cross-channel phase matter; the magnitude estimate is not used.

use num_complex::Complex64;

use crate::model::{PskAlphabet, ReceivedBlock};

/// Detects all `N` remote symbols by nearest-phase slicing of
/// `angle(z_i - A a_hat t1_i) - phi_b_hat`. The caller excludes pilot
/// positions from error accounting.
pub fn detect_symbols(
    block: &ReceivedBlock,
    a_hat: Complex64,
    phi_b_hat: f64,
    a_amp: f64,
    alphabet: &PskAlphabet,
) -> Vec<Complex64> {
    block
        .z
        .iter()
        .zip(&block.t1)
        .map(|(&z, &t1)| {
            let r = z - a_amp * a_hat * t1;
            alphabet.point(alphabet.nearest_index(r.arg() - phi_b_hat))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        derive_channels, generate_channels, synthesize_block, PilotSpec, SystemParams, TAU,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_estimates_give_zero_errors() {
        let params = SystemParams::new(1.0, 1.0, 1.0, 1e-30, 1e-30).unwrap();
        let alphabet = PskAlphabet::new(4, params.p2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let c = generate_channels(&mut rng, 0.3).unwrap();
        let d = derive_channels(&c, &params);
        let block = synthesize_block(&mut rng, &c, &params, 4, 30, &PilotSpec::none()).unwrap();
        let detected = detect_symbols(&block, d.a, d.phi_b, params.a_amp, &alphabet);
        for (got, want) in detected.iter().zip(&block.t2_true) {
            assert!((got - want).norm() < 1e-9);
        }
    }

    #[test]
    fn phase_offset_rotates_every_decision() {
        let params = SystemParams::new(1.0, 1.0, 1.0, 1e-30, 1e-30).unwrap();
        let alphabet = PskAlphabet::new(4, params.p2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let c = generate_channels(&mut rng, 0.3).unwrap();
        let d = derive_channels(&c, &params);
        let block = synthesize_block(&mut rng, &c, &params, 4, 30, &PilotSpec::none()).unwrap();
        let step = TAU / 4.0;
        let shifted = detect_symbols(&block, d.a, d.phi_b + step, params.a_amp, &alphabet);
        let rot = Complex64::from_polar(1.0, -step);
        for (got, want) in shifted.iter().zip(&block.t2_true) {
            assert!((got - want * rot).norm() < 1e-9, "expected one-step rotation");
        }
    }
}
