//! Domain types and generative signal model: PSK alphabets, correlated
//! channel realization, relay amplification, and synthesis of received blocks
//! for the two-phase relaying exchange.
//!
//! Estimators never see the individual coefficients `h1`, `h2`, `g1`; only
//! the identifiable composites in [`DerivedChannels`] and the observable
//! [`ReceivedBlock`] cross the module boundary.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const TAU: f64 = 2.0 * PI;

/// M-PSK alphabet with symbol power `P`: points `sqrt(P) e^{j(2l-1)pi/M}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PskAlphabet {
    order: usize,
    power: f64,
}

impl PskAlphabet {
    pub fn new(order: usize, power: f64) -> Result<Self> {
        if order < 2 {
            return Err(Error::invalid(format!("PSK order must be >= 2, got {order}")));
        }
        if !(power > 0.0) || !power.is_finite() {
            return Err(Error::invalid(format!("PSK power must be positive, got {power}")));
        }
        Ok(PskAlphabet { order, power })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// Phase of the `l`-th point (`l` zero-based): `(2l + 1) pi / M`.
    pub fn phase(&self, l: usize) -> f64 {
        (2.0 * l as f64 + 1.0) * PI / self.order as f64
    }

    pub fn point(&self, l: usize) -> Complex64 {
        Complex64::from_polar(self.power.sqrt(), self.phase(l))
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.order).map(|l| self.point(l)).collect()
    }

    /// Index of the constellation point whose phase is closest to `phase`.
    pub fn nearest_index(&self, phase: f64) -> usize {
        let m = self.order as f64;
        let step = TAU / m;
        // Solve (2l+1) pi / M closest to phase.
        let l = ((phase - PI / m) / step).round();
        (l.rem_euclid(m)) as usize
    }

    /// True when `s` lies on the constellation within `tol` (absolute, on
    /// both modulus and phase distance).
    pub fn contains(&self, s: Complex64, tol: f64) -> bool {
        let p = self.point(self.nearest_index(s.arg()));
        (s - p).norm() <= tol * (1.0 + self.power.sqrt())
    }
}

/// Relay amplification factor `sqrt(Pr / (P1 + P2 + sigma_r2))`.
pub fn amplification_factor(p1: f64, p2: f64, pr: f64, sigma_r2: f64) -> Result<f64> {
    for (name, v) in [("P1", p1), ("P2", p2), ("Pr", pr), ("sigma_r2", sigma_r2)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok((pr / (p1 + p2 + sigma_r2)).sqrt())
}

/// Transmit/relay powers, noise variances, and the derived amplification
/// factor and power ratios.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    pub p1: f64,
    pub p2: f64,
    pub pr: f64,
    pub sigma_r2: f64,
    pub sigma_t2: f64,
    /// `sqrt(Pr / (P1 + P2 + sigma_r2))`
    pub a_amp: f64,
    /// `P1 / P2`
    pub alpha: f64,
    /// `Pr / (P1 + P2)`
    pub beta: f64,
}

impl SystemParams {
    pub fn new(p1: f64, p2: f64, pr: f64, sigma_r2: f64, sigma_t2: f64) -> Result<Self> {
        if !(sigma_t2 > 0.0) || !sigma_t2.is_finite() {
            return Err(Error::domain(format!("sigma_t2 must be positive, got {sigma_t2}")));
        }
        let a_amp = amplification_factor(p1, p2, pr, sigma_r2)?;
        Ok(SystemParams {
            p1,
            p2,
            pr,
            sigma_r2,
            sigma_t2,
            a_amp,
            alpha: p1 / p2,
            beta: pr / (p1 + p2),
        })
    }
}

/// Raw flat-fading coefficients of one realization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelSet {
    pub h1: Complex64,
    pub h2: Complex64,
    pub g1: Complex64,
    /// Generated for completeness; does not enter the signal seen at the
    /// estimating terminal.
    pub g2: Complex64,
    pub rho: f64,
}

/// The blindly identifiable composites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedChannels {
    /// `h1 * h2`
    pub a: Complex64,
    /// `g1 * h2`
    pub b: Complex64,
    /// `angle(b)` in `[0, 2pi)`
    pub phi_b: f64,
    /// `A^2 |h2|^2 sigma_r2 + sigma_t2`
    pub sigma_o2: f64,
}

/// Draws one sample of circular complex Gaussian noise with total variance
/// `var` (split equally between real and imaginary parts).
pub fn cn_sample<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

/// Generates one channel realization. `(h1, h2)` are jointly circular
/// complex Gaussian with zero mean, unit variance and `E{h1 h2*} = rho`;
/// `(g1, g2)` are an identically distributed independent pair.
pub fn generate_channels<R: Rng + ?Sized>(rng: &mut R, rho: f64) -> Result<ChannelSet> {
    if !rho.is_finite() || rho.abs() > 1.0 {
        return Err(Error::domain(format!("|rho| must be <= 1, got {rho}")));
    }
    let root = (1.0 - rho * rho).sqrt();
    let pair = |rng: &mut R| {
        let first = cn_sample(rng, 1.0);
        let w = cn_sample(rng, 1.0);
        let second = rho * first + root * w;
        (first, second)
    };
    let (h1, h2) = pair(rng);
    let (g1, g2) = pair(rng);
    Ok(ChannelSet { h1, h2, g1, g2, rho })
}

/// Computes the identifiable composites for one realization.
pub fn derive_channels(channels: &ChannelSet, params: &SystemParams) -> DerivedChannels {
    let a = channels.h1 * channels.h2;
    let b = channels.g1 * channels.h2;
    let phi_b = b.arg().rem_euclid(TAU);
    let sigma_o2 =
        params.a_amp * params.a_amp * channels.h2.norm_sqr() * params.sigma_r2 + params.sigma_t2;
    DerivedChannels { a, b, phi_b, sigma_o2 }
}

/// Draws `n` i.i.d. uniform symbols from the alphabet.
pub fn draw_symbols<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: &PskAlphabet,
    n: usize,
) -> Vec<Complex64> {
    (0..n)
        .map(|_| alphabet.point(rng.gen_range(0..alphabet.order())))
        .collect()
}

/// Known pilot symbols transmitted by both terminals; placed at the leading
/// indices of a block.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PilotSpec {
    pub x1: Vec<Complex64>,
    pub x2: Vec<Complex64>,
}

impl PilotSpec {
    pub fn none() -> Self {
        PilotSpec::default()
    }

    pub fn len(&self) -> usize {
        self.x1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x1.is_empty()
    }
}

/// One estimation block: `N` received samples, the locally known symbols,
/// the withheld remote symbols, and pilot bookkeeping. `m` records the
/// alphabet order the block was synthesized with.
#[derive(Clone, Debug, PartialEq)]
pub struct ReceivedBlock {
    pub z: Vec<Complex64>,
    pub t1: Vec<Complex64>,
    /// Ground truth; estimators may only read it for scoring, never for
    /// estimation (pilot positions excepted, via `x2_pilots`).
    pub t2_true: Vec<Complex64>,
    pub pilot_indices: Vec<usize>,
    pub x2_pilots: Vec<Complex64>,
    pub m: usize,
}

impl ReceivedBlock {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn num_pilots(&self) -> usize {
        self.pilot_indices.len()
    }

    /// Indices that carry payload data (everything that is not a pilot).
    pub fn data_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|i| !self.pilot_indices.contains(i)).collect()
    }

    /// Received samples at the pilot positions.
    pub fn pilot_received(&self) -> Vec<Complex64> {
        self.pilot_indices.iter().map(|&i| self.z[i]).collect()
    }

    /// Local pilot symbols at the pilot positions.
    pub fn pilot_x1(&self) -> Vec<Complex64> {
        self.pilot_indices.iter().map(|&i| self.t1[i]).collect()
    }
}

/// Synthesizes one received block:
/// `z_i = A a t1_i + A b t2_i + A h2 n_i + eta_i`.
///
/// Pilots occupy the first `J` indices and replace the random symbols there
/// for both terminals.
pub fn synthesize_block<R: Rng + ?Sized>(
    rng: &mut R,
    channels: &ChannelSet,
    params: &SystemParams,
    alphabet_m: usize,
    n: usize,
    pilots: &PilotSpec,
) -> Result<ReceivedBlock> {
    if n == 0 {
        return Err(Error::invalid("block length must be >= 1"));
    }
    let j = pilots.len();
    if pilots.x2.len() != j {
        return Err(Error::invalid("pilot x1/x2 lengths differ"));
    }
    if j > n {
        return Err(Error::invalid(format!("{j} pilots do not fit in a block of {n}")));
    }
    let alph1 = PskAlphabet::new(alphabet_m, params.p1)?;
    let alph2 = PskAlphabet::new(alphabet_m, params.p2)?;
    for &x in &pilots.x1 {
        if !alph1.contains(x, 1e-9) {
            return Err(Error::invalid(format!("pilot {x} is not an S_M point of power P1")));
        }
    }
    for &x in &pilots.x2 {
        if !alph2.contains(x, 1e-9) {
            return Err(Error::invalid(format!("pilot {x} is not an S_M point of power P2")));
        }
    }

    let mut t1 = draw_symbols(rng, &alph1, n);
    let mut t2 = draw_symbols(rng, &alph2, n);
    t1[..j].copy_from_slice(&pilots.x1);
    t2[..j].copy_from_slice(&pilots.x2);

    let derived = derive_channels(channels, params);
    let a_amp = params.a_amp;
    let z = (0..n)
        .map(|i| {
            let relay_noise = cn_sample(rng, params.sigma_r2);
            let terminal_noise = cn_sample(rng, params.sigma_t2);
            a_amp * derived.a * t1[i]
                + a_amp * derived.b * t2[i]
                + a_amp * channels.h2 * relay_noise
                + terminal_noise
        })
        .collect();

    Ok(ReceivedBlock {
        z,
        t1,
        t2_true: t2,
        pilot_indices: (0..j).collect(),
        x2_pilots: pilots.x2.clone(),
        m: alphabet_m,
    })
}

/// Default orthogonal pilot pattern for training-based LS: a constant
/// column from the local terminal and a sign-alternating column from the
/// remote terminal, both on the `S_M` constellation. For even `J` the two
/// columns are exactly orthogonal.
pub fn orthogonal_pilots(m: usize, p1: f64, p2: f64, j: usize) -> Result<PilotSpec> {
    if m % 2 != 0 {
        return Err(Error::invalid("orthogonal pilot pattern requires even M"));
    }
    let alph1 = PskAlphabet::new(m, p1)?;
    let alph2 = PskAlphabet::new(m, p2)?;
    let x1 = vec![alph1.point(0); j];
    // Point m/2 is the antipode of point 0.
    let x2 = (0..j).map(|i| alph2.point(if i % 2 == 0 { 0 } else { m / 2 })).collect();
    Ok(PilotSpec { x1, x2 })
}

/// Default pilot pattern for MCML phase estimation (BPSK): the products
/// `x1_j x2_j` are not all equal for `J >= 2`, which removes the residual
/// high-SNR ambiguity event entirely.
pub fn mcml_pilots(p1: f64, p2: f64, j: usize) -> Result<PilotSpec> {
    let alph1 = PskAlphabet::new(2, p1)?;
    let alph2 = PskAlphabet::new(2, p2)?;
    let x1 = vec![alph1.point(0); j];
    let x2 = (0..j).map(|i| alph2.point(i % 2)).collect();
    Ok(PilotSpec { x1, x2 })
}
