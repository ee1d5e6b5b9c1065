//! Acceptance criteria, one test each. Every test writes a single
//! `criterion NN PASS|FAIL` line with the numbers behind the verdict before
//! asserting. The line goes straight to stderr, past the test harness's
//! output capture, so a plain `cargo test` run doubles as a report.

use std::io::Write;
use std::process::Command;
use std::sync::OnceLock;

use ergolab::cli::parse_ell_grid;
use ergolab::experiments::{
    fit_concentration_exponents, run_average_sweep, run_local_scaling, run_tail_experiment, run_verification_suite,
    EnsembleRecord, FitMode, Measure, Observable, Suite, SweepConfig, VerifyConfig,
};
use ergolab::quantities::{energy_expectation, ergotropy, extraction_unitary};
use ergolab::sampler::{sample_hs_state, sample_ngue, sample_ngue_hamiltonian, RngStream};
use ergolab::{c64, DensityMatrix, HermitianOperator};
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rayon::prelude::*;

const SEED: u64 = 20_240_601;

fn verdict(criterion: u32, ok: bool, detail: String) {
    let line = format!("criterion {criterion:02} {}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn hs_sweep() -> &'static [EnsembleRecord] {
    static CELL: OnceLock<Vec<EnsembleRecord>> = OnceLock::new();
    CELL.get_or_init(|| {
        run_average_sweep(&SweepConfig::new(Measure::HilbertSchmidt, vec![32, 64, 128, 256], 1000, SEED)).unwrap()
    })
}

fn bures_sweep() -> &'static [EnsembleRecord] {
    static CELL: OnceLock<Vec<EnsembleRecord>> = OnceLock::new();
    CELL.get_or_init(|| run_average_sweep(&SweepConfig::new(Measure::Bures, vec![32, 64, 128], 1000, SEED)).unwrap())
}

fn at(records: &[EnsembleRecord], d: usize) -> &EnsembleRecord {
    records.iter().find(|r| r.d == d).unwrap()
}

#[test]
fn criterion_01_hs_mean_ergotropy_floor() {
    let rs: Vec<&EnsembleRecord> = [64, 128, 256].iter().map(|&d| at(hs_sweep(), d)).collect();
    let in_band = rs.iter().all(|r| (0.23..=0.45).contains(&r.mean_erg_hat));
    let monotone = rs.windows(2).all(|w| {
        let slack = 3.0 * (w[0].sem_erg_hat.powi(2) + w[1].sem_erg_hat.powi(2)).sqrt();
        w[1].mean_erg_hat <= w[0].mean_erg_hat + slack
    });
    let detail = rs
        .iter()
        .map(|r| format!("d={} E={:.4}±{:.4}", r.d, r.mean_erg_hat, r.sem_erg_hat))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(1, in_band && monotone, detail);
}

#[test]
fn criterion_02_bures_mean_ergotropy() {
    let mut ok = true;
    let mut detail = Vec::new();
    for d in [64, 128] {
        let (b, h) = (at(bures_sweep(), d), at(hs_sweep(), d));
        ok &= b.mean_erg_hat >= 0.20 && (b.mean_erg_hat - h.mean_erg_hat).abs() <= 0.15;
        detail.push(format!("d={d} bures={:.4} hs={:.4}", b.mean_erg_hat, h.mean_erg_hat));
    }
    verdict(2, ok, detail.join(", "));
}

#[test]
fn criterion_03_nsr_plateau() {
    let r = at(hs_sweep(), 128);
    verdict(
        3,
        (1.20..=1.40).contains(&r.mean_nsr) && r.n_nsr_undefined == 0,
        format!("d=128 NSR={:.4}±{:.4}", r.mean_nsr, r.sem_nsr),
    );
}

#[test]
fn criterion_04_ngue_normalization() {
    let d = 128;
    let draws: Vec<(f64, f64, f64)> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let h = sample_ngue(d, &mut RngStream::new(SEED ^ 4, i)).unwrap();
            let fresh = h.operator.eigenvalues().unwrap();
            (h.operator.trace() / d as f64, fresh[0], fresh[d - 1])
        })
        .collect();
    let mean = draws.iter().map(|t| t.0).sum::<f64>() / draws.len() as f64;
    let worst = draws.iter().map(|t| t.1.abs().max((t.2 - 1.0).abs())).fold(0.0f64, f64::max);
    verdict(
        4,
        (mean - 0.5).abs() <= 0.02 && worst <= 1e-10,
        format!("mean tr/d={mean:.5}, worst endpoint error={worst:.2e}"),
    );
}

fn sweep_suite(criterion: u32, suites: &[Suite]) {
    let mut detail = Vec::new();
    let mut violations = 0;
    for &suite in suites {
        let report = run_verification_suite(&VerifyConfig::new(suite, vec![2, 4, 8, 16], 10_000, SEED)).unwrap();
        let mut names: Vec<&str> = report.checks.iter().map(|c| c.inequality.as_str()).collect();
        names.dedup();
        let pairs: usize = report.checks.iter().map(|c| c.pairs).sum();
        violations += report.total_violations();
        detail.push(format!("{suite}: {} violations over {pairs} checks [{}]", report.total_violations(), names.join(" ")));
    }
    verdict(criterion, violations == 0, detail.join("; "));
}

#[test]
fn criterion_05_ergotropy_lipschitz_sweep() {
    sweep_suite(5, &[Suite::LipschitzErgotropy]);
}

#[test]
fn criterion_06_entropy_continuity_sweep() {
    sweep_suite(6, &[Suite::LipschitzEntropy]);
}

#[test]
fn criterion_07_auxiliary_inequalities() {
    sweep_suite(7, &[Suite::Lidskii, Suite::Fvdg, Suite::Schatten, Suite::Purification]);
}

type M4 = [[c64; 4]; 4];

/// Haar unitary by Gram–Schmidt on complex Gaussian columns, kept apart from
/// the library sampler on purpose.
fn gram_schmidt_haar(rng: &mut rand_chacha::ChaCha20Rng) -> M4 {
    let mut cols = [[c64::new(0.0, 0.0); 4]; 4];
    for j in 0..4 {
        let mut v = [c64::new(0.0, 0.0); 4];
        for x in v.iter_mut() {
            *x = c64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        for prev in cols.iter().take(j) {
            let dot: c64 = (0..4).map(|i| prev[i].conj() * v[i]).sum();
            for i in 0..4 {
                v[i] -= dot * prev[i];
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols[j] = v.map(|x| x / norm);
    }
    // u[i][j] = column j, row i
    std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]))
}

fn to_m4(get: impl Fn(usize, usize) -> c64) -> M4 {
    std::array::from_fn(|i| std::array::from_fn(|j| get(i, j)))
}

/// `Re tr(U ρ U† H)`.
fn rotated_energy(u: &M4, rho: &M4, h: &M4) -> f64 {
    let mut ur = [[c64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            ur[i][j] = (0..4).map(|k| u[i][k] * rho[k][j]).sum();
        }
    }
    let mut total = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            // (U ρ U†)_{ij} H_{ji}
            let s: c64 = (0..4).map(|k| ur[i][k] * u[j][k].conj()).sum();
            total += (s * h[j][i]).re;
        }
    }
    total
}

#[test]
fn criterion_08_ergotropy_optimality_oracle() {
    let results: Vec<(f64, f64)> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(SEED ^ 8, i);
            let h: HermitianOperator = sample_ngue_hamiltonian(4, &mut rng).unwrap();
            let rho: DensityMatrix = sample_hs_state(4, &mut rng).unwrap();
            let passive = ergotropy(&rho, &h).unwrap().passive_energy;
            let attained = energy_expectation(&rho.conjugate_by(&extraction_unitary(&rho, &h).unwrap()).unwrap(), &h).unwrap();
            let (rm, hm) = (to_m4(|a, b| rho[(a, b)]), to_m4(|a, b| h[(a, b)]));
            let mut oracle_rng = rand_chacha::ChaCha20Rng::seed_from_u64(SEED.wrapping_add(i));
            let lowest = (0..100_000)
                .map(|_| rotated_energy(&gram_schmidt_haar(&mut oracle_rng), &rm, &hm))
                .fold(f64::INFINITY, f64::min);
            (lowest - passive, (attained - passive).abs())
        })
        .collect();
    let min_gap = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let max_miss = results.iter().map(|r| r.1).fold(0.0f64, f64::max);
    verdict(
        8,
        min_gap >= -1e-9 && max_miss <= 1e-9,
        format!("min over 1e7 unitaries of tr(UρU†H) − passive = {min_gap:.3e}, extraction miss = {max_miss:.1e}"),
    );
}

#[test]
fn criterion_09_levy_dominance() {
    let report = run_verification_suite(&VerifyConfig::new(Suite::LevyHs, vec![16, 32], 100_000, SEED)).unwrap();
    let detail = report
        .checks
        .iter()
        .map(|c| format!("{} d={} max p/bound={:.3}", c.inequality, c.d, c.max_ratio))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(9, report.total_violations() == 0 && report.checks.len() == 4, detail);
}

#[test]
fn criterion_10_concentration_shrinks() {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, records) in [("hs", hs_sweep()), ("bures", bures_sweep())] {
        let ratio = at(records, 128).std_erg_hat / at(records, 32).std_erg_hat;
        ok &= ratio < 0.5;
        detail.push(format!("{name} std(128)/std(32)={ratio:.3}"));
    }
    verdict(10, ok, detail.join(", "));
}

#[test]
fn criterion_11_bures_exponent_fits() {
    let grid = parse_ell_grid("log:0.002:0.3:20").unwrap();
    let fixed_ell = grid[5];
    let config = SweepConfig::new(Measure::Bures, vec![8, 16, 32, 64], 100_000, SEED).with_ell_grid(grid);
    let records = run_tail_experiment(&config).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for observable in [Observable::Ergotropy, Observable::Entropy] {
        let tag = if observable == Observable::Ergotropy { "e" } else { "s" };
        for d in [8, 16, 32, 64] {
            let fit = fit_concentration_exponents(&records, FitMode::VaryEll { d }, observable).unwrap();
            let x = fit.x_exponent.unwrap();
            ok &= x > 0.0 && fit.r_squared >= 0.9;
            detail.push(format!("x_{tag}(d={d})={x:.3} R²={:.3}", fit.r_squared));
        }
        let fit = fit_concentration_exponents(&records, FitMode::VaryD { ell: fixed_ell }, observable).unwrap();
        let y = fit.y_exponent.unwrap();
        ok &= y > 0.0 && fit.r_squared >= 0.9;
        detail.push(format!("y_{tag}(ℓ={fixed_ell:.4})={y:.3} R²={:.3}", fit.r_squared));
    }
    verdict(11, ok, detail.join(", "));
}

/// Mean von Neumann entropy (nats) of the reduced state of a Haar-random pure
/// state on `d ⊗ d`.
fn induced_mean_entropy(d: usize) -> f64 {
    let tail: f64 = (d + 1..=d * d).map(|k| 1.0 / k as f64).sum();
    tail - (d as f64 - 1.0) / (2.0 * d as f64)
}

#[test]
fn criterion_12_hs_entropy_oracle() {
    // frozen from an independent evaluation of the same harmonic sum
    let frozen = [(4, 0.9223956598956597), (8, 1.5885337608486259), (16, 2.2748659695882867)];
    let records = run_average_sweep(&SweepConfig::new(Measure::HilbertSchmidt, vec![4, 8, 16], 10_000, SEED)).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for (r, (d, value)) in records.iter().zip(frozen) {
        assert_eq!(r.d, d);
        assert!((induced_mean_entropy(d) - value).abs() < 1e-12);
        let ln_d = (d as f64).ln();
        let (mean, sem) = (r.mean_entropy_hat * ln_d, r.sem_entropy_hat * ln_d);
        ok &= (mean - value).abs() <= 3.0 * sem;
        detail.push(format!("d={d} S={mean:.5}±{sem:.5} oracle={value:.5}"));
    }
    verdict(12, ok, detail.join(", "));
}

#[test]
fn criterion_13_k_local_scaling() {
    let sites: Vec<usize> = (4..=10).collect();
    let report = run_local_scaling(2, 2, &sites, 1.0, 2, SEED).unwrap();
    verdict(
        13,
        report.slope <= 2.3,
        format!("slope of ln‖H‖ vs ln N = {:.3} (R²={:.3})", report.slope, report.r_squared),
    );
}

#[test]
fn criterion_14_thread_count_determinism() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_ergolab"))
            .args(["avg", "--measure", "bures", "--dims", "8,16,32", "--samples", "2000", "--seed", "5", "--threads", threads])
            .output()
            .unwrap()
    };
    let (one, three) = (run("1"), run("3"));
    let ok = one.status.success() && three.status.success() && one.stdout == three.stdout && !one.stdout.is_empty();
    verdict(14, ok, format!("{} bytes with 1 thread, {} bytes with 3, identical={}", one.stdout.len(), three.stdout.len(), one.stdout == three.stdout));
}
