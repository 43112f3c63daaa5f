//! Training-based least-squares estimation of both cascaded channels from
//! pilot symbols alone. With orthogonal pilot columns the normal equations
//! decouple into two correlators; the general full-rank case is solved by a
//! direct 2x2 complex inversion.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ReceivedBlock;

/// Pilot observations: received samples and the two known pilot columns.
#[derive(Clone, Debug, PartialEq)]
pub struct PilotBlock {
    pub s: Vec<Complex64>,
    pub x1: Vec<Complex64>,
    pub x2: Vec<Complex64>,
}

impl PilotBlock {
    /// Extracts the pilot positions of a received block.
    pub fn from_block(block: &ReceivedBlock) -> Self {
        PilotBlock {
            s: block.pilot_received(),
            x1: block.pilot_x1(),
            x2: block.x2_pilots.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LsEstimate {
    pub a_hat: Complex64,
    pub b_hat: Complex64,
}

/// Least-squares solution of `s ~= A a x1 + A b x2`.
pub fn ls_estimate(pilots: &PilotBlock, a_amp: f64) -> Result<LsEstimate> {
    let j = pilots.s.len();
    if pilots.x1.len() != j || pilots.x2.len() != j {
        return Err(Error::invalid("pilot block columns have mismatched lengths"));
    }
    if j < 2 {
        return Err(Error::invalid("LS estimation needs at least 2 pilots"));
    }

    // Gram matrix and right-hand side of the normal equations.
    let mut g11 = 0.0f64;
    let mut g22 = 0.0f64;
    let mut g12 = Complex64::new(0.0, 0.0);
    let mut r1 = Complex64::new(0.0, 0.0);
    let mut r2 = Complex64::new(0.0, 0.0);
    for i in 0..j {
        g11 += pilots.x1[i].norm_sqr();
        g22 += pilots.x2[i].norm_sqr();
        g12 += pilots.x1[i].conj() * pilots.x2[i];
        r1 += pilots.x1[i].conj() * pilots.s[i];
        r2 += pilots.x2[i].conj() * pilots.s[i];
    }
    let det = g11 * g22 - g12.norm_sqr();
    if det <= 1e-12 * g11 * g22 || g11 == 0.0 || g22 == 0.0 {
        return Err(Error::invalid("pilot matrix is rank deficient"));
    }
    let a_hat = (g22 * r1 - g12 * r2) / (det * a_amp);
    let b_hat = (g11 * r2 - g12.conj() * r1) / (det * a_amp);
    Ok(LsEstimate { a_hat, b_hat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        derive_channels, generate_channels, orthogonal_pilots, synthesize_block, SystemParams,
    };
    use nalgebra::{Complex, Matrix2, Vector2};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn noiseless_orthogonal_pilots_are_exact() {
        let params = SystemParams::new(1.0, 1.0, 1.0, 1e-30, 1e-30).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let c = generate_channels(&mut rng, 0.3).unwrap();
        let d = derive_channels(&c, &params);
        let pilots = orthogonal_pilots(4, params.p1, params.p2, 4).unwrap();
        let block = synthesize_block(&mut rng, &c, &params, 4, 4, &pilots).unwrap();
        let est = ls_estimate(&PilotBlock::from_block(&block), params.a_amp).unwrap();
        assert!((est.a_hat - d.a).norm() < 1e-10);
        assert!((est.b_hat - d.b).norm() < 1e-10);
    }

    #[test]
    fn zero_received_gives_zero() {
        let pilots = orthogonal_pilots(4, 1.0, 1.0, 4).unwrap();
        let pb = PilotBlock {
            s: vec![Complex64::new(0.0, 0.0); 4],
            x1: pilots.x1,
            x2: pilots.x2,
        };
        let est = ls_estimate(&pb, 0.7).unwrap();
        assert_eq!(est.a_hat, Complex64::new(0.0, 0.0));
        assert_eq!(est.b_hat, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn matches_normal_equations_oracle() {
        // Independent route: assemble and invert the 2x2 normal equations
        // with nalgebra's complex inverse.
        let params = SystemParams::new(1.0, 1.0, 1.0, 0.2, 0.2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let c = generate_channels(&mut rng, 0.3).unwrap();
        let pilots = orthogonal_pilots(4, params.p1, params.p2, 6).unwrap();
        let block = synthesize_block(&mut rng, &c, &params, 4, 6, &pilots).unwrap();
        let pb = PilotBlock::from_block(&block);
        let est = ls_estimate(&pb, params.a_amp).unwrap();

        let cx = |z: Complex64| Complex::new(z.re, z.im);
        let mut g = Matrix2::zeros();
        let mut r = Vector2::zeros();
        for i in 0..pb.s.len() {
            let x1 = cx(pb.x1[i]);
            let x2 = cx(pb.x2[i]);
            let s = cx(pb.s[i]);
            g[(0, 0)] += x1.conj() * x1;
            g[(0, 1)] += x1.conj() * x2;
            g[(1, 0)] += x2.conj() * x1;
            g[(1, 1)] += x2.conj() * x2;
            r[0] += x1.conj() * s;
            r[1] += x2.conj() * s;
        }
        let sol = g.try_inverse().unwrap() * r / Complex::new(params.a_amp, 0.0);
        assert!((est.a_hat.re - sol[0].re).abs() < 1e-12);
        assert!((est.a_hat.im - sol[0].im).abs() < 1e-12);
        assert!((est.b_hat.re - sol[1].re).abs() < 1e-12);
        assert!((est.b_hat.im - sol[1].im).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_pilots_rejected() {
        let x = Complex64::new(0.0, 1.0);
        let pb = PilotBlock {
            s: vec![x; 4],
            x1: vec![x; 4],
            x2: vec![x; 4], // colinear with x1
        };
        assert!(ls_estimate(&pb, 1.0).is_err());
        let short = PilotBlock { s: vec![x], x1: vec![x], x2: vec![x] };
        assert!(ls_estimate(&short, 1.0).is_err());
    }
}
