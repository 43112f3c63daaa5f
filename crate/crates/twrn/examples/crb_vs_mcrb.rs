//! Estimation bounds for one channel realization: the Cramer-Rao bound
//! averaged over random QPSK draws next to the modified CRB, across block
//! lengths. Degenerate draws (at most two distinct phase differences) make
//! the FIM singular and are skipped; their count is reported.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twrn::bounds::{crb, fim_blocks, mcrb, CrbValue};
use twrn::model::{
    derive_channels, draw_symbols, generate_channels, PskAlphabet, SystemParams,
};

fn main() -> twrn::Result<()> {
    let snr_db = 15.0;
    let sigma2 = 10f64.powf(-snr_db / 10.0);
    let params = SystemParams::new(1.0, 1.0, 1.0, sigma2, sigma2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let channels = generate_channels(&mut rng, 0.3)?;
    let truth = derive_channels(&channels, &params);
    let alphabet = PskAlphabet::new(4, params.p2)?;

    println!("|b| = {:.3}, sigma_o2 = {:.4}", truth.b.norm(), truth.sigma_o2);
    println!(
        "{:>4}  {:>12}  {:>12}  {:>12}  {:>9}",
        "N", "CRB_a (avg)", "MCRB_a", "MCRB_|b|", "singular"
    );
    for n in [5usize, 10, 20, 45, 90] {
        let mut sum = 0.0;
        let mut count = 0usize;
        let mut singular = 0usize;
        for _ in 0..500 {
            let t1 = draw_symbols(&mut rng, &alphabet, n);
            let t2 = draw_symbols(&mut rng, &alphabet, n);
            let blocks = fim_blocks(
                &t1,
                &t2,
                truth.b,
                params.a_amp,
                params.p1,
                params.p2,
                truth.sigma_o2,
            )?;
            match crb(&blocks)?.crb_a {
                CrbValue::Value(v) => {
                    sum += v;
                    count += 1;
                }
                CrbValue::Singular => singular += 1,
            }
        }
        let m = mcrb(params.a_amp, n, params.p1, params.p2, truth.sigma_o2);
        println!(
            "{:>4}  {:>12.4e}  {:>12.4e}  {:>12.4e}  {:>6}/500",
            n,
            sum / count.max(1) as f64,
            m.mcrb_a,
            m.mcrb_b_mag,
            singular
        );
    }
    Ok(())
}
