// Operator norm of a 2-local qubit Hamiltonian with a random term on every
// pair of sites. The norm grows polynomially in the number of sites.
//
// ```bash
// cargo run -p ergolab --release --example local_hamiltonian
// ```

use ergolab::experiments::run_local_scaling;
use ergolab::sampler::{build_k_local_hamiltonian, LocalHamiltonianSpec, RngStream, TermPlacement};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = LocalHamiltonianSpec::qubits(5, 2, TermPlacement::UniformRandom { n_terms: 6 }, 0.5);
    let h = build_k_local_hamiltonian(&spec, &mut RngStream::new(1, 0))?;
    println!("supports {:?}", h.supports);
    println!(
        "||H|| = {:.4} <= sum of term norms {:.4}",
        h.hamiltonian.operator_norm()?,
        h.triangle_bound
    );

    let report = run_local_scaling(2, 2, &[3, 4, 5, 6, 7], 1.0, 2, 11)?;
    println!(" N     d  terms   <||H||>");
    for r in &report.rows {
        println!("{:2} {:5} {:6} {:9.4}", r.n_sites, r.d, r.n_terms, r.norm_mean);
    }
    println!("log-log slope {:.3} (R^2 {:.3})", report.slope, report.r_squared);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
