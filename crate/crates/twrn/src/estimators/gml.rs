//! Gaussian ML estimation: the remote symbols are treated as Gaussian
//! nuisance, which collapses the estimator to a correlator sample average.
//! Consistent, cheap, updatable online, but floor-limited at high SNR.

use num_complex::Complex64;

use super::EstimationResult;
use crate::error::{Error, Result};
use crate::model::ReceivedBlock;

/// `a_hat = (1 / (N A P1)) sum t1_i^* z_i`.
pub fn gml_estimate(block: &ReceivedBlock, a_amp: f64, p1: f64) -> Result<EstimationResult> {
    if block.is_empty() {
        return Err(Error::invalid("GML estimation needs at least 1 sample"));
    }
    let mut acc = GmlAccumulator::new(a_amp, p1);
    for (&z, &t1) in block.z.iter().zip(&block.t1) {
        acc.push(t1, z);
    }
    Ok(EstimationResult::new(acc.estimate().expect("non-empty accumulator")))
}

/// Running-sum form of the GML estimate, updatable as samples arrive.
#[derive(Clone, Copy, Debug)]
pub struct GmlAccumulator {
    a_amp: f64,
    p1: f64,
    sum: Complex64,
    count: usize,
}

impl GmlAccumulator {
    pub fn new(a_amp: f64, p1: f64) -> Self {
        GmlAccumulator { a_amp, p1, sum: Complex64::new(0.0, 0.0), count: 0 }
    }

    pub fn push(&mut self, t1: Complex64, z: Complex64) {
        self.sum += t1.conj() * z;
        self.count += 1;
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn estimate(&self) -> Option<Complex64> {
        if self.count == 0 {
            None
        } else {
            Some(self.sum / (self.count as f64 * self.a_amp * self.p1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        derive_channels, generate_channels, synthesize_block, PilotSpec, SystemParams,
    };
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_when_cross_link_absent() {
        let params = SystemParams::new(1.0, 1.0, 1.0, 1e-30, 1e-30).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let mut c = generate_channels(&mut rng, 0.3).unwrap();
        c.g1 = Complex64::new(0.0, 0.0);
        let d = derive_channels(&c, &params);
        let block = synthesize_block(&mut rng, &c, &params, 4, 32, &PilotSpec::none()).unwrap();
        let est = gml_estimate(&block, params.a_amp, params.p1).unwrap();
        assert!((est.a_hat - d.a).norm() < 1e-12);
    }

    #[test]
    fn matches_two_sample_expansion() {
        // Noiseless N=2: a_hat = a + (b / (2 sqrt(alpha))) sum e^{j(phi_2i - phi_1i)}.
        let params = SystemParams::new(2.0, 1.0, 1.5, 1e-30, 1e-30).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let c = generate_channels(&mut rng, 0.3).unwrap();
        let d = derive_channels(&c, &params);
        let block = synthesize_block(&mut rng, &c, &params, 4, 2, &PilotSpec::none()).unwrap();
        let est = gml_estimate(&block, params.a_amp, params.p1).unwrap();
        let mut cross = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            let d1 = block.t1[i].arg();
            let d2 = block.t2_true[i].arg();
            cross += Complex64::from_polar(1.0, d2 - d1);
        }
        let expect = d.a + d.b / (2.0 * params.alpha.sqrt()) * cross;
        assert!((est.a_hat - expect).norm() < 1e-12, "{} vs {expect}", est.a_hat);
    }

    #[test]
    fn accumulator_matches_batch() {
        let params = SystemParams::new(1.0, 1.0, 1.0, 0.1, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let c = generate_channels(&mut rng, 0.3).unwrap();
        let block = synthesize_block(&mut rng, &c, &params, 4, 16, &PilotSpec::none()).unwrap();
        let batch = gml_estimate(&block, params.a_amp, params.p1).unwrap();
        let mut acc = GmlAccumulator::new(params.a_amp, params.p1);
        for i in 0..block.len() {
            acc.push(block.t1[i], block.z[i]);
        }
        assert_eq!(acc.estimate().unwrap(), batch.a_hat);
    }

    #[test]
    fn unbiased_and_consistent_statistics() {
        // Mean error within 3 standard errors of zero; MSE halves when N
        // doubles (1/N law), both at 10 dB.
        let sigma2 = 0.1;
        let params = SystemParams::new(1.0, 1.0, 1.0, sigma2, sigma2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let trials = 10_000;
        let mut mse = [0.0f64; 2];
        let mut mean_err = Complex64::new(0.0, 0.0);
        let mut sq_spread = 0.0;
        for t in 0..trials {
            let c = generate_channels(&mut rng, 0.3).unwrap();
            let d = derive_channels(&c, &params);
            for (slot, n) in [(0usize, 30usize), (1, 60)] {
                let block =
                    synthesize_block(&mut rng, &c, &params, 4, n, &PilotSpec::none()).unwrap();
                let est = gml_estimate(&block, params.a_amp, params.p1).unwrap();
                let err = est.a_hat - d.a;
                mse[slot] += err.norm_sqr();
                if slot == 0 {
                    mean_err += err;
                    sq_spread += err.norm_sqr();
                }
            }
            let _ = t;
        }
        mse[0] /= trials as f64;
        mse[1] /= trials as f64;
        mean_err /= trials as f64;
        let se = (sq_spread / trials as f64 / trials as f64).sqrt();
        assert!(mean_err.norm() < 3.0 * se, "bias {} vs se {se}", mean_err.norm());
        let ratio = mse[0] / mse[1];
        assert!((ratio - 2.0).abs() < 0.4, "1/N scaling ratio {ratio}");
    }
}
