// Ensemble averages of normalized ergotropy, entropy and the work
// noise-to-signal ratio as the dimension grows.
//
// ```bash
// cargo run -p ergolab --release --example average_sweep
// ```

use ergolab::experiments::{inset_transform, run_average_sweep, Measure, SweepConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for measure in [Measure::HilbertSchmidt, Measure::Bures] {
        let config = SweepConfig::new(measure, vec![4, 8, 16, 32], 200, 1);
        let records = run_average_sweep(&config)?;
        println!("{measure}");
        println!("   d   <E^>     sem      <S^>    <NSR>");
        for r in &records {
            println!(
                "{:4}  {:.4}  {:.5}  {:.4}  {:.4}",
                r.d, r.mean_erg_hat, r.sem_erg_hat, r.mean_entropy_hat, r.mean_nsr
            );
        }
        let inset = inset_transform(&records);
        for p in &inset.points {
            println!("  inset: ln d = {:.3}, <E^> lnlnln d = {:.5}", p.ln_d, p.value);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
