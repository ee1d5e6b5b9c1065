// Ergotropy of a qubit and of a random six-level battery.
//
// ```bash
// cargo run -p ergolab --example ergotropy_basics
// ```

use ergolab::quantities::{ergotropy, extraction_unitary, passive_state, work_variance};
use ergolab::sampler::{sample_hs_state, sample_ngue, RngStream};
use ergolab::{c64, DensityMatrix, HermitianOperator};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // |+⟩ on a qubit with levels 0 and 1: half the population sits on the
    // excited level, and the coherence lets a unitary take it all.
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DensityMatrix::pure(&[c64::new(s, 0.0), c64::new(s, 0.0)])?;
    let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0])?;
    let erg = ergotropy(&plus, &h)?;
    let work = work_variance(&plus, &h)?;
    println!(
        "|+>: energy {:.3}, ergotropy {:.3}, work variance {:.3}, NSR {:?}",
        erg.initial_energy, erg.ergotropy, work.variance, work.nsr
    );
    assert!((erg.ergotropy - 0.5).abs() < 1e-12);

    // A random battery: Hilbert–Schmidt state, nGUE Hamiltonian.
    let mut rng = RngStream::new(2024, 0);
    let ham = sample_ngue(6, &mut rng)?;
    let rho = sample_hs_state(6, &mut rng)?;
    let erg = ergotropy(&rho, &ham.operator)?;
    let passive = passive_state(&rho, &ham.operator)?;
    let u = extraction_unitary(&rho, &ham.operator)?;
    let after = rho.conjugate_by(&u)?;
    let drained = ergotropy(&after, &ham.operator)?;
    println!(
        "random d=6: E = {:.4}, passive energy {:.4}, ergotropy {:.4}, left after extraction {:.1e}",
        erg.initial_energy, erg.passive_energy, erg.ergotropy, drained.ergotropy
    );
    println!("passive state purity {:.4} (same as rho: {:.4})", passive.purity(), rho.purity());
    assert!(drained.ergotropy < 1e-9);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
