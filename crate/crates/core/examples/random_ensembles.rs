// Draws from each ensemble and prints a few statistics that have closed forms.
//
// ```bash
// cargo run -p ergolab --example random_ensembles
// ```

use ergolab::sampler::{
    sample_bures_state, sample_haar_unitary, sample_hs_state, sample_ngue, sample_pure_state, RngStream,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let d = 4;
    let n = 2000u64;
    let seed = RngStream::derive_seed(99, &[d as u64]);

    let (mut hs, mut bures, mut pure, mut u00, mut width) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        // one stream per draw, so any draw can be replayed on its own
        let mut rng = RngStream::new(seed, i);
        hs += sample_hs_state(d, &mut rng)?.purity();
        bures += sample_bures_state(d, &mut rng)?.purity();
        pure += sample_pure_state(d, &mut rng)?.purity();
        u00 += sample_haar_unitary(d, &mut rng)?[(0, 0)].norm_sqr();
        let h = sample_ngue(d, &mut rng)?;
        width += h.energies[d - 1] - h.energies[0];
    }
    let n = n as f64;
    println!("HS purity     {:.4} (exact 2d/(d^2+1) = {:.4})", hs / n, 8.0 / 17.0);
    println!("Bures purity  {:.4}", bures / n);
    println!("pure purity   {:.4}", pure / n);
    println!("E|U_00|^2     {:.4} (exact 1/d = {:.4})", u00 / n, 0.25);
    println!("nGUE width    {:.4}", width / n);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
