// Closed-form continuity constants and Levy widths for a given dimension.
//
// ```bash
// cargo run -p ergolab --example continuity_bounds
// ```

use ergolab::bounds::{
    entropy_bures_bounds, entropy_fannes_bound, ergotropy_lipschitz_bounds, levy_parameters, levy_tail_bound,
};
use ergolab::sampler::{sample_ngue, RngStream};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let d = 8;
    let h = sample_ngue(d, &mut RngStream::new(3, 0))?.operator;
    let l = ergotropy_lipschitz_bounds(&h)?;
    println!("ergotropy constants: bures {:.3}, trace {:.3}, hs {:.3}", l.erg_bures, l.erg_trace, l.erg_hs);

    let e = entropy_bures_bounds(d)?;
    println!(
        "entropy: bures {:.4} (3 pi = {:.4}), angle coefficient {:.4}",
        e.bures_lipschitz,
        3.0 * std::f64::consts::PI,
        e.bures_angle_coeff
    );
    println!("Fannes bound at trace distance 0.1: {:.4}", entropy_fannes_bound(0.1, d)?);

    for d in [16, 64, 256] {
        let p = levy_parameters(d, 1.0)?;
        println!(
            "d = {d:3}: Upsilon_E = {:.4}, P(|E - <E>| > 0.1) <= {:.3e}",
            p.upsilon_erg,
            levy_tail_bound(0.1, p.upsilon_erg)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
