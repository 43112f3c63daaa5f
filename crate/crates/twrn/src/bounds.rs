//! Fisher information, Cramer-Rao bounds, degeneracy detection, and the
//! closed-form performance predictions: envelope variance of the cleaned
//! samples, GML mean squared error, and the probability that the blind
//! objective has a unique high-SNR minimum.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::TAU;
use crate::specfun::laguerre_half;

/// Relative spectral threshold below which the reduced information matrix
/// is declared singular.
const SINGULARITY_THRESHOLD: f64 = 1e-10;

/// Blocks of the Fisher information matrix for the real parameter vector
/// `[Re a, Im a, |b|, phi_b1, ..., phi_bN]`. `H3` is a scalar multiple of
/// the identity and is stored as that scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct FimBlocks {
    pub h1: Matrix3<f64>,
    /// 3 x N cross block.
    pub h2: DMatrix<f64>,
    /// Diagonal entry of `H3`: `2 A^2 |b|^2 P2 / sigma_o2`.
    pub h3_diag: f64,
    pub n: usize,
}

/// Assembles the FIM blocks for one symbol draw.
pub fn fim_blocks(
    t1: &[Complex64],
    t2: &[Complex64],
    b: Complex64,
    a_amp: f64,
    p1: f64,
    p2: f64,
    sigma_o2: f64,
) -> Result<FimBlocks> {
    let n = t1.len();
    if n == 0 || t2.len() != n {
        return Err(Error::invalid(format!(
            "symbol vectors must be nonempty and equal length ({} vs {})",
            n,
            t2.len()
        )));
    }
    if !(sigma_o2 > 0.0) {
        return Err(Error::domain(format!("sigma_o2 must be positive, got {sigma_o2}")));
    }
    let s = 2.0 * a_amp * a_amp / sigma_o2;
    let phi_b = b.arg();
    let cross: Complex64 = t1.iter().zip(t2).map(|(&a, &c)| a.conj() * c).sum();
    let cross = Complex64::from_polar(1.0, phi_b) * cross;

    let mut h1 = Matrix3::zeros();
    h1[(0, 0)] = s * n as f64 * p1;
    h1[(1, 1)] = s * n as f64 * p1;
    h1[(2, 2)] = s * n as f64 * p2;
    h1[(0, 2)] = s * cross.re;
    h1[(2, 0)] = s * cross.re;
    h1[(1, 2)] = s * cross.im;
    h1[(2, 1)] = s * cross.im;

    let mut h2 = DMatrix::zeros(3, n);
    for i in 0..n {
        let prod = b.conj() * t1[i] * t2[i].conj();
        h2[(0, i)] = s * prod.im;
        h2[(1, i)] = s * prod.re;
        // Third row is identically zero.
    }

    Ok(FimBlocks { h1, h2, h3_diag: s * b.norm_sqr() * p2, n })
}

/// Either a finite bound or a flag that the reduced information matrix was
/// numerically singular for this draw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CrbValue {
    Value(f64),
    Singular,
}

impl CrbValue {
    pub fn value(self) -> Option<f64> {
        match self {
            CrbValue::Value(v) => Some(v),
            CrbValue::Singular => None,
        }
    }

    pub fn is_singular(self) -> bool {
        matches!(self, CrbValue::Singular)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrbResult {
    pub crb_a: CrbValue,
    pub crb_b_mag: CrbValue,
    /// Smallest eigenvalue of the Schur complement, the singularity witness.
    pub schur_min_eig: f64,
}

/// Schur-complement Cramer-Rao bounds on `a` and `|b|` for one draw.
pub fn crb(blocks: &FimBlocks) -> Result<CrbResult> {
    if blocks.h3_diag <= 0.0 {
        return Err(Error::domain("H3 is not invertible (b = 0)"));
    }
    let schur: Matrix3<f64> =
        blocks.h1 - (&blocks.h2 * blocks.h2.transpose()).map(|x| x / blocks.h3_diag);
    let eigen = SymmetricEigen::new(schur);
    let min_eig = eigen.eigenvalues.min();
    let trace = schur.trace();
    if min_eig < SINGULARITY_THRESHOLD * trace {
        return Ok(CrbResult {
            crb_a: CrbValue::Singular,
            crb_b_mag: CrbValue::Singular,
            schur_min_eig: min_eig,
        });
    }
    let inv = schur
        .try_inverse()
        .ok_or_else(|| Error::domain("Schur complement inversion failed"))?;
    Ok(CrbResult {
        crb_a: CrbValue::Value(inv[(0, 0)] + inv[(1, 1)]),
        crb_b_mag: CrbValue::Value(inv[(2, 2)]),
        schur_min_eig: min_eig,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McrbResult {
    pub mcrb_a: f64,
    pub mcrb_b_mag: f64,
}

/// Modified CRB: the nuisance-averaged information block in closed form.
pub fn mcrb(a_amp: f64, n: usize, p1: f64, p2: f64, sigma_o2: f64) -> McrbResult {
    let a2n = a_amp * a_amp * n as f64;
    McrbResult {
        mcrb_a: sigma_o2 / (a2n * p1),
        mcrb_b_mag: sigma_o2 / (2.0 * a2n * p2),
    }
}

/// Closed-form variance of the cleaned-sample envelope at residual
/// interference `v`:
/// `V(v) = A^2|v|^2 P1 + A^2|b|^2 P2 + sigma_o2
///         - ( sqrt(pi sigma_o2 / (4 M^2)) sum_k L_{1/2}(-lambda_k(v)) )^2`.
pub fn envelope_variance_theory(
    v: Complex64,
    b: Complex64,
    a_amp: f64,
    p1: f64,
    p2: f64,
    sigma_o2: f64,
    m: usize,
) -> Result<f64> {
    if !(sigma_o2 > 0.0) {
        return Err(Error::domain("sigma_o2 must be positive"));
    }
    if m < 2 {
        return Err(Error::domain("modulation order must be >= 2"));
    }
    let a2 = a_amp * a_amp;
    let power = a2 * v.norm_sqr() * p1 + a2 * b.norm_sqr() * p2;
    let cross = 2.0 * a2 * v.norm() * b.norm() * (p1 * p2).sqrt();
    let phase = v.arg() - b.arg();
    let mut mean_sum = 0.0;
    for k in 0..m {
        let lambda = (power + cross * (phase + TAU * k as f64 / m as f64).cos()) / sigma_o2;
        mean_sum += laguerre_half(-lambda)?;
    }
    let mean = (std::f64::consts::PI * sigma_o2 / (4.0 * (m * m) as f64)).sqrt() * mean_sum;
    Ok(power + sigma_o2 - mean * mean)
}

/// Closed-form GML mean squared error:
/// `|b|^2/(N alpha) + |h2|^2 sigma^2/(N alpha P2) + sigma^2/(N A^2 alpha P2)`.
pub fn gml_mse_theory(
    b: Complex64,
    h2: Complex64,
    a_amp: f64,
    n: usize,
    alpha: f64,
    p2: f64,
    sigma2: f64,
) -> f64 {
    let nf = n as f64;
    b.norm_sqr() / (nf * alpha)
        + h2.norm_sqr() * sigma2 / (nf * alpha * p2)
        + sigma2 / (nf * a_amp * a_amp * alpha * p2)
}

/// The error floor the GML estimator cannot improve past: `|b|^2/(N alpha)`.
pub fn gml_error_floor(b: Complex64, n: usize, alpha: f64) -> f64 {
    b.norm_sqr() / (n as f64 * alpha)
}

/// Raw union-bound expression `1 - (2/M)^{N-1} (M-1)` for the probability
/// that the blind objective has a unique high-SNR minimum. Can go negative
/// for tiny `N`, where the bound is vacuous.
pub fn p_unique_raw(m: usize, n: usize) -> f64 {
    1.0 - (2.0 / m as f64).powi(n as i32 - 1) * (m as f64 - 1.0)
}

/// `max(0, p_unique_raw)`. The expression is a union bound: for very small
/// `N` it overcounts the degenerate draws (exhaustive enumeration is the
/// reference there), while for the block sizes of interest it is tight.
pub fn p_unique(m: usize, n: usize) -> f64 {
    p_unique_raw(m, n).max(0.0)
}

/// True when the phase differences `(phi1_i - phi2_i) mod 2pi` take at most
/// two distinct values; such draws leave the blind objective with infinitely
/// many high-SNR minima and a singular FIM.
pub fn is_degenerate_draw(phi1: &[f64], phi2: &[f64], m: usize) -> Result<bool> {
    let n = phi1.len();
    if n == 0 || phi2.len() != n {
        return Err(Error::invalid("phase vectors must be nonempty and equal length"));
    }
    // Differences of S_M phases are multiples of 2pi/M; classify by index.
    let step = TAU / m as f64;
    let mut seen = [false; 64];
    let mut seen_large;
    let mut distinct = 0usize;
    if m <= 64 {
        for i in 0..n {
            let k = (((phi1[i] - phi2[i]) / step).round() as i64).rem_euclid(m as i64) as usize;
            if !seen[k] {
                seen[k] = true;
                distinct += 1;
                if distinct > 2 {
                    return Ok(false);
                }
            }
        }
    } else {
        seen_large = vec![false; m];
        for i in 0..n {
            let k = (((phi1[i] - phi2[i]) / step).round() as i64).rem_euclid(m as i64) as usize;
            if !seen_large[k] {
                seen_large[k] = true;
                distinct += 1;
                if distinct > 2 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        derive_channels, draw_symbols, generate_channels, PskAlphabet, SystemParams,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qpsk_draw(seed: u64, n: usize, p: f64) -> Vec<Complex64> {
        let alph = PskAlphabet::new(4, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        draw_symbols(&mut rng, &alph, n)
    }

    #[test]
    fn fim_blocks_degenerate_cases() {
        let t1 = qpsk_draw(1, 8, 1.0);
        let t2 = qpsk_draw(2, 8, 1.0);
        // b = 0 zeroes the cross and phase blocks.
        let blocks =
            fim_blocks(&t1, &t2, Complex64::new(0.0, 0.0), 0.7, 1.0, 1.0, 0.3).unwrap();
        assert_eq!(blocks.h3_diag, 0.0);
        assert!(blocks.h2.iter().all(|&x| x == 0.0));
        assert!(crb(&blocks).is_err());
    }

    #[test]
    fn orthogonal_symbols_give_diagonal_h1() {
        // Choose t2 = j * t1 elementwise rotated to make t1^H t2 = 0? Use
        // two orthogonal hand-built columns instead.
        let p = 1.0f64;
        let alph = PskAlphabet::new(4, p).unwrap();
        let t1 = vec![alph.point(0), alph.point(0)];
        let t2 = vec![alph.point(0), alph.point(2)]; // antipodal pair sums to zero
        let b = Complex64::new(0.4, 0.1);
        let blocks = fim_blocks(&t1, &t2, b, 0.7, p, p, 0.3).unwrap();
        assert!(blocks.h1[(0, 2)].abs() < 1e-12);
        assert!(blocks.h1[(1, 2)].abs() < 1e-12);
    }

    #[test]
    fn h1_matches_finite_difference_hessian() {
        // With the observation fixed at the noiseless mean, the negative
        // Hessian of the log-likelihood equals the FIM exactly; check the
        // structural 3x3 block by central differences.
        let n = 12;
        let t1 = qpsk_draw(3, n, 1.0);
        let t2 = qpsk_draw(4, n, 1.0);
        let a = Complex64::new(0.9, -0.4);
        let b = Complex64::new(0.5, 0.7);
        let a_amp = 0.6f64;
        let sigma_o2 = 0.25f64;
        let phi_b = b.arg();
        let b_mag = b.norm();
        let phi_bi: Vec<f64> = t2.iter().map(|s| s.arg() + phi_b).collect();
        let z: Vec<Complex64> = (0..n)
            .map(|i| {
                a_amp * a * t1[i]
                    + a_amp * b_mag * Complex64::from_polar(1.0, phi_bi[i])
            })
            .collect();
        // Negative log-likelihood core as a function of (Re a, Im a, |b|).
        let nll = |p: [f64; 3]| -> f64 {
            let aa = Complex64::new(p[0], p[1]);
            let mut acc = 0.0;
            for i in 0..n {
                let mean = a_amp * aa * t1[i]
                    + a_amp * p[2] * Complex64::from_polar(1.0, phi_bi[i]);
                acc += (z[i] - mean).norm_sqr();
            }
            acc / sigma_o2
        };
        let theta = [a.re, a.im, b_mag];
        let h = 1e-4;
        let blocks = fim_blocks(&t1, &t2, b, a_amp, 1.0, 1.0, sigma_o2).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let mut pp = theta;
                let mut pm = theta;
                let mut mp = theta;
                let mut mm = theta;
                pp[r] += h;
                pp[c] += h;
                pm[r] += h;
                pm[c] -= h;
                mp[r] -= h;
                mp[c] += h;
                mm[r] -= h;
                mm[c] -= h;
                let fd = (nll(pp) - nll(pm) - nll(mp) + nll(mm)) / (4.0 * h * h);
                let want = blocks.h1[(r, c)];
                let scale = blocks.h1[(0, 0)].abs();
                assert!(
                    (fd - want).abs() <= 1e-4 * scale,
                    "H1[{r},{c}] fd {fd} vs {want}"
                );
            }
        }
    }

    #[test]
    fn schur_crb_matches_full_inverse_oracle() {
        let a_amp = 0.65f64;
        let sigma_o2 = 0.2f64;
        for seed in 0..20u64 {
            let n = 10;
            let t1 = qpsk_draw(100 + seed, n, 1.0);
            let t2 = qpsk_draw(200 + seed, n, 1.0);
            let b = Complex64::new(0.8, -0.3);
            let blocks = fim_blocks(&t1, &t2, b, a_amp, 1.0, 1.0, sigma_o2).unwrap();
            let result = crb(&blocks).unwrap();
            if result.crb_a.is_singular() {
                continue;
            }
            // Full (N+3) x (N+3) inverse.
            let dim = n + 3;
            let mut full = DMatrix::zeros(dim, dim);
            for r in 0..3 {
                for c in 0..3 {
                    full[(r, c)] = blocks.h1[(r, c)];
                }
                for c in 0..n {
                    full[(r, 3 + c)] = blocks.h2[(r, c)];
                    full[(3 + c, r)] = blocks.h2[(r, c)];
                }
            }
            for i in 0..n {
                full[(3 + i, 3 + i)] = blocks.h3_diag;
            }
            let inv = full.try_inverse().expect("full FIM invertible");
            let crb_a_full = inv[(0, 0)] + inv[(1, 1)];
            let crb_b_full = inv[(2, 2)];
            let crb_a = result.crb_a.value().unwrap();
            let crb_b = result.crb_b_mag.value().unwrap();
            assert!((crb_a - crb_a_full).abs() <= 1e-8 * crb_a_full, "seed {seed}");
            assert!((crb_b - crb_b_full).abs() <= 1e-8 * crb_b_full, "seed {seed}");
        }
    }

    #[test]
    fn bpsk_draws_are_always_singular() {
        let alph = PskAlphabet::new(2, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let t1 = draw_symbols(&mut rng, &alph, 12);
            let t2 = draw_symbols(&mut rng, &alph, 12);
            let blocks =
                fim_blocks(&t1, &t2, Complex64::new(0.6, 0.2), 0.7, 1.0, 1.0, 0.3).unwrap();
            assert!(crb(&blocks).unwrap().crb_a.is_singular());
        }
    }

    #[test]
    fn two_phase_difference_values_are_singular() {
        // Construct a QPSK draw whose phase differences take exactly 2
        // distinct values.
        let alph = PskAlphabet::new(4, 1.0).unwrap();
        let t1 = vec![alph.point(0); 6];
        let t2 = vec![
            alph.point(0),
            alph.point(1),
            alph.point(0),
            alph.point(1),
            alph.point(0),
            alph.point(1),
        ];
        let blocks = fim_blocks(&t1, &t2, Complex64::new(0.6, 0.2), 0.7, 1.0, 1.0, 0.3).unwrap();
        assert!(crb(&blocks).unwrap().crb_a.is_singular());
        let phi1: Vec<f64> = t1.iter().map(|s| s.arg()).collect();
        let phi2: Vec<f64> = t2.iter().map(|s| s.arg()).collect();
        assert!(is_degenerate_draw(&phi1, &phi2, 4).unwrap());
    }

    #[test]
    fn schur_complement_is_psd() {
        let a_amp = 0.7f64;
        for seed in 0..50u64 {
            let t1 = qpsk_draw(300 + seed, 15, 1.0);
            let t2 = qpsk_draw(400 + seed, 15, 1.0);
            let blocks =
                fim_blocks(&t1, &t2, Complex64::new(0.5, 0.5), a_amp, 1.0, 1.0, 0.3).unwrap();
            let schur: Matrix3<f64> =
                blocks.h1 - (&blocks.h2 * blocks.h2.transpose()).map(|x| x / blocks.h3_diag);
            let eig = SymmetricEigen::new(schur);
            assert!(eig.eigenvalues.min() >= -1e-10 * schur.trace(), "seed {seed}");
        }
    }

    #[test]
    fn mcrb_examples() {
        let r = mcrb(1.0, 10, 1.0, 1.0, 0.1);
        assert!((r.mcrb_a - 0.01).abs() < 1e-15);
        assert!((r.mcrb_b_mag - 0.005).abs() < 1e-15);
        let r2 = mcrb(1.0, 20, 1.0, 1.0, 0.1);
        assert!((r2.mcrb_a - r.mcrb_a / 2.0).abs() < 1e-15);
        assert!((r2.mcrb_b_mag - r.mcrb_b_mag / 2.0).abs() < 1e-15);
    }

    #[test]
    fn mcrb_below_averaged_crb() {
        let a_amp = 0.7f64;
        let sigma_o2 = 0.3f64;
        let n = 20;
        let b = Complex64::new(0.6, 0.4);
        let mut sum = 0.0;
        let mut count = 0;
        for seed in 0..300u64 {
            let t1 = qpsk_draw(1000 + seed, n, 1.0);
            let t2 = qpsk_draw(2000 + seed, n, 1.0);
            let blocks = fim_blocks(&t1, &t2, b, a_amp, 1.0, 1.0, sigma_o2).unwrap();
            if let CrbValue::Value(v) = crb(&blocks).unwrap().crb_a {
                sum += v;
                count += 1;
            }
        }
        let avg = sum / count as f64;
        let m = mcrb(a_amp, n, 1.0, 1.0, sigma_o2);
        assert!(m.mcrb_a <= avg, "MCRB {} vs averaged CRB {avg}", m.mcrb_a);
    }

    #[test]
    fn envelope_variance_rayleigh_case() {
        let v = envelope_variance_theory(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            0.7,
            1.0,
            1.0,
            0.4,
            4,
        )
        .unwrap();
        let expect = 0.4 * (1.0 - std::f64::consts::PI / 4.0);
        assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
    }

    #[test]
    fn envelope_variance_minimum_at_zero() {
        let b = Complex64::new(0.7, -0.5);
        let v0 = envelope_variance_theory(Complex64::new(0.0, 0.0), b, 0.7, 1.0, 1.0, 0.3, 4)
            .unwrap();
        let mut checked = 0;
        for ix in -8..=8 {
            for iy in -8..=8 {
                if ix == 0 && iy == 0 {
                    continue;
                }
                let v = Complex64::new(ix as f64 * 0.25, iy as f64 * 0.25);
                let val =
                    envelope_variance_theory(v, b, 0.7, 1.0, 1.0, 0.3, 4).unwrap();
                assert!(val > v0, "V({v}) = {val} not above V(0) = {v0}");
                checked += 1;
            }
        }
        assert!(checked > 200);
    }

    #[test]
    fn envelope_second_moment_identity() {
        // E{|y(v)|^2} = A^2|v|^2 P1 + A^2|b|^2 P2 + sigma_o2: the theory
        // variance must equal that second moment minus the squared mean.
        use crate::specfun::{noncentral_chi_mean, NonnegReal};
        let v = Complex64::new(0.3, 0.4);
        let b = Complex64::new(0.6, -0.2);
        let (a_amp, p1, p2, so2, m) = (0.7f64, 1.0, 1.0, 0.25, 4usize);
        let second =
            a_amp * a_amp * v.norm_sqr() * p1 + a_amp * a_amp * b.norm_sqr() * p2 + so2;
        let mut mean = 0.0;
        for k in 0..m {
            let cross = 2.0
                * a_amp
                * a_amp
                * v.norm()
                * b.norm()
                * (p1 * p2).sqrt()
                * (v.arg() - b.arg() + TAU * k as f64 / m as f64).cos();
            let lambda =
                (a_amp * a_amp * v.norm_sqr() * p1 + a_amp * a_amp * b.norm_sqr() * p2 + cross)
                    / so2;
            mean += noncentral_chi_mean(NonnegReal::new(lambda.max(0.0)).unwrap(), so2).unwrap();
        }
        mean /= m as f64;
        let theory = envelope_variance_theory(v, b, a_amp, p1, p2, so2, m).unwrap();
        assert!((theory - (second - mean * mean)).abs() < 1e-12);
    }

    #[test]
    fn gml_theory_matches_simulation() {
        // 10 dB, N = 45: empirical MSE within 5% of the closed form,
        // averaged over a fixed channel draw.
        use crate::estimators::gml_estimate;
        use crate::model::{synthesize_block, PilotSpec};
        let sigma2 = 0.1;
        let params = SystemParams::new(1.0, 1.0, 1.0, sigma2, sigma2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let c = generate_channels(&mut rng, 0.3).unwrap();
        let d = derive_channels(&c, &params);
        let n = 45;
        let trials = 20_000;
        let mut mse = 0.0;
        for _ in 0..trials {
            let block = synthesize_block(&mut rng, &c, &params, 4, n, &PilotSpec::none()).unwrap();
            let est = gml_estimate(&block, params.a_amp, params.p1).unwrap();
            mse += (est.a_hat - d.a).norm_sqr();
        }
        mse /= trials as f64;
        let theory = gml_mse_theory(d.b, c.h2, params.a_amp, n, params.alpha, params.p2, sigma2);
        assert!(
            (mse - theory).abs() <= 0.05 * theory,
            "empirical {mse} vs theory {theory}"
        );
    }

    #[test]
    fn gml_floor_limits() {
        let b = Complex64::new(0.5, 0.5);
        let h2 = Complex64::new(1.0, 0.0);
        let floor = gml_error_floor(b, 45, 1.0);
        let near_zero = gml_mse_theory(b, h2, 0.7, 45, 1.0, 1.0, 1e-12);
        assert!((near_zero - floor).abs() < 1e-10);
        assert!(gml_mse_theory(Complex64::new(0.0, 0.0), h2, 0.7, 45, 1.0, 1.0, 1e-300) < 1e-290);
    }

    #[test]
    fn p_unique_values() {
        for n in 1..40 {
            assert_eq!(p_unique(2, n), 0.0);
        }
        assert!((p_unique_raw(4, 3) - 0.25).abs() < 1e-15);
        assert!(1.0 - p_unique(4, 30) < 5.6e-9);
        // Raw expression is negative for tiny N; clamped to zero.
        assert!(p_unique_raw(4, 2) < 0.0);
        assert_eq!(p_unique(4, 2), 0.0);
    }

    #[test]
    fn degenerate_draw_detection() {
        let alph = PskAlphabet::new(4, 1.0).unwrap();
        // All differences equal.
        let phi1 = vec![alph.phase(0); 5];
        let phi2 = vec![alph.phase(2); 5];
        assert!(is_degenerate_draw(&phi1, &phi2, 4).unwrap());
        // Three distinct differences.
        let phi1 = vec![alph.phase(0), alph.phase(1), alph.phase(2)];
        let phi2 = vec![alph.phase(0); 3];
        assert!(!is_degenerate_draw(&phi1, &phi2, 4).unwrap());
        assert!(is_degenerate_draw(&[], &[], 4).is_err());
    }

    #[test]
    fn degenerate_matches_singular_exhaustively() {
        // For N <= 5, enumerate every QPSK draw of t2 against a fixed t1:
        // the combinatorial test and the spectral test must agree.
        let alph = PskAlphabet::new(4, 1.0).unwrap();
        let b = Complex64::new(0.6, 0.3);
        for n in 1..=5usize {
            let t1 = vec![alph.point(0); n];
            let phi1: Vec<f64> = t1.iter().map(|s| s.arg()).collect();
            let total = 4usize.pow(n as u32);
            for code in 0..total {
                let mut idx = code;
                let t2: Vec<Complex64> = (0..n)
                    .map(|_| {
                        let l = idx % 4;
                        idx /= 4;
                        alph.point(l)
                    })
                    .collect();
                let phi2: Vec<f64> = t2.iter().map(|s| s.arg()).collect();
                let degenerate = is_degenerate_draw(&phi1, &phi2, 4).unwrap();
                let blocks = fim_blocks(&t1, &t2, b, 0.7, 1.0, 1.0, 0.3).unwrap();
                let singular = crb(&blocks).unwrap().crb_a.is_singular();
                assert_eq!(degenerate, singular, "N = {n}, code = {code}");
            }
        }
    }

    #[test]
    fn degenerate_frequency_matches_enumeration() {
        // Exhaustive enumeration at (M=4, N=3) gives 40/64; a large random
        // sample must agree.
        let alph = PskAlphabet::new(4, 1.0).unwrap();
        let mut count = 0;
        for code in 0..64 {
            let phi1 = vec![alph.phase(0); 3];
            let mut idx = code;
            let phi2: Vec<f64> = (0..3)
                .map(|_| {
                    let l = idx % 4;
                    idx /= 4;
                    alph.phase(l)
                })
                .collect();
            if is_degenerate_draw(&phi1, &phi2, 4).unwrap() {
                count += 1;
            }
        }
        assert_eq!(count, 40);
        let exact = 40.0 / 64.0;

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 1_000_000;
        let mut hits = 0;
        for _ in 0..draws {
            let t1 = draw_symbols(&mut rng, &alph, 3);
            let t2 = draw_symbols(&mut rng, &alph, 3);
            let phi1: Vec<f64> = t1.iter().map(|s| s.arg()).collect();
            let phi2: Vec<f64> = t2.iter().map(|s| s.arg()).collect();
            if is_degenerate_draw(&phi1, &phi2, 4).unwrap() {
                hits += 1;
            }
        }
        let freq = hits as f64 / draws as f64;
        assert!((freq - exact).abs() < 0.002, "freq {freq} vs exact {exact}");
        // The closed form is a union bound on the same event.
        assert!(1.0 - p_unique(4, 3) >= exact);
    }
}
