// Tail probabilities around the ensemble mean and the exponents of
// `ln(−ln P) ≈ const + x ln ℓ + y ln d`.
//
// ```bash
// cargo run -p ergolab --release --example tail_exponents
// ```

use ergolab::experiments::{
    fit_concentration_exponents, run_tail_experiment, tail_warnings, FitMode, Measure, Observable, SweepConfig,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid: Vec<f64> = (0..12).map(|i| 0.004 * 1.35f64.powi(i)).collect();
    let config = SweepConfig::new(Measure::Bures, vec![4, 8, 16], 1000, 5).with_ell_grid(grid.clone());
    let records = run_tail_experiment(&config)?;
    for w in tail_warnings(&records) {
        println!("note: {w}");
    }
    for observable in [Observable::Ergotropy, Observable::Entropy] {
        for r in &records {
            match fit_concentration_exponents(&records, FitMode::VaryEll { d: r.d }, observable) {
                Ok(fit) => println!(
                    "{observable:?} d={:3}: x = {:.3} (R^2 {:.3}, {} points)",
                    r.d,
                    fit.slope(),
                    fit.r_squared,
                    fit.n_points
                ),
                Err(e) => println!("{observable:?} d={:3}: {e}", r.d),
            }
        }
        let ell = grid[3];
        match fit_concentration_exponents(&records, FitMode::VaryD { ell }, observable) {
            Ok(fit) => println!("{observable:?} ell={ell:.4}: y = {:.3} (R^2 {:.3})", fit.slope(), fit.r_squared),
            Err(e) => println!("{observable:?} ell={ell:.4}: {e}"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
