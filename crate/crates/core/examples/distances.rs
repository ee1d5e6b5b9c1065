// Trace, Hilbert–Schmidt and Bures distances between two random states, and
// the orderings between them.
//
// ```bash
// cargo run -p ergolab --example distances
// ```

use ergolab::metrics::{canonical_purification, distance_report, eigenvalue_l1_deviation, euclidean_distance};
use ergolab::sampler::{sample_bures_state, sample_hs_state, RngStream};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let d = 5;
    let mut rng = RngStream::new(7, 0);
    let rho = sample_hs_state(d, &mut rng)?;
    let sigma = sample_bures_state(d, &mut rng)?;

    let r = distance_report(&rho, &sigma)?;
    println!("fidelity     {:.6}", r.fidelity);
    println!("trace        {:.6}", r.trace);
    println!("hs           {:.6}", r.hs);
    println!("bures        {:.6}", r.bures);
    println!("bures angle  {:.6}", r.bures_angle);

    // ½ D_B² ≤ D_Tr ≤ D_B
    assert!(0.5 * r.bures * r.bures <= r.trace + 1e-12 && r.trace <= r.bures + 1e-12);

    let gap = euclidean_distance(&canonical_purification(&rho)?, &canonical_purification(&sigma)?);
    println!("purification gap {gap:.6} >= bures {:.6}", r.bures);

    let spread = eigenvalue_l1_deviation(&rho, &sigma)?;
    println!("sorted-spectrum l1 deviation {spread:.6} <= 2 * trace {:.6}", 2.0 * r.trace);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
