//! The blind objective in expectation: sample envelope variance of one
//! block against the closed-form prediction V(v), tabulated along a ray
//! through the true channel.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twrn::bounds::envelope_variance_theory;
use twrn::estimators::dml_objective;
use twrn::model::{derive_channels, generate_channels, synthesize_block, PilotSpec, SystemParams};

fn main() -> twrn::Result<()> {
    let sigma2 = 0.05;
    let params = SystemParams::new(1.0, 1.0, 1.0, sigma2, sigma2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let channels = generate_channels(&mut rng, 0.3)?;
    let truth = derive_channels(&channels, &params);

    // One long block so the sample variance hugs its expectation.
    let block = synthesize_block(&mut rng, &channels, &params, 4, 4000, &PilotSpec::none())?;

    let dir = Complex64::from_polar(1.0, 0.7);
    println!("{:>6}  {:>12}  {:>12}", "|v|", "sample", "theory");
    for i in 0..=10 {
        let v = 0.15 * i as f64 * dir;
        let sample = dml_objective(truth.a - v, &block, params.a_amp)?;
        let theory = envelope_variance_theory(
            v,
            truth.b,
            params.a_amp,
            params.p1,
            params.p2,
            truth.sigma_o2,
            4,
        )?;
        println!("{:>6.2}  {:>12.6}  {:>12.6}", v.norm(), sample, theory);
    }
    println!();
    println!("V is minimized at v = 0, which is what makes the blind search work.");
    Ok(())
}
