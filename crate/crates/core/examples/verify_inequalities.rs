// Runs a few verification suites and prints the tightest pair of each check.
//
// ```bash
// cargo run -p ergolab --release --example verify_inequalities
// ```

use ergolab::experiments::{run_verification_suite, PairKind, Suite, VerifyConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for suite in [Suite::LipschitzErgotropy, Suite::LipschitzEntropy, Suite::Fvdg, Suite::Lidskii] {
        let report = run_verification_suite(&VerifyConfig::new(suite, vec![2, 6], 100, 3))?;
        println!("{suite}: {} violations", report.total_violations());
        for c in &report.checks {
            println!(
                "  {:<16} {:<15} d={:<2} max lhs/rhs {:.3}",
                c.inequality,
                c.measure.name(),
                c.d,
                c.max_ratio
            );
        }
        if !report.passed() {
            return Err(format!("{suite} recorded violations").into());
        }
    }

    // Unitarily rotated copies share a spectrum, so the Lidskii side vanishes.
    let mut config = VerifyConfig::new(Suite::Lidskii, vec![5], 50, 3);
    config.pair_kind = PairKind::Isospectral;
    let report = run_verification_suite(&config)?;
    let worst = report.checks.iter().map(|c| c.max_lhs).fold(0.0, f64::max);
    println!("isospectral pairs: largest spectral deviation {worst:.1e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
