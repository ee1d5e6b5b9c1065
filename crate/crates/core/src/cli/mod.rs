//! The `ergolab` command line.
//!
//! Every subcommand resolves a flat settings map (config file first, then
//! command-line flags, then defaults), runs the matching experiment driver and
//! writes its output together with a [`RunManifest`]. A manifest passed back
//! through `--config` repeats the run.
//!
//! Exit codes: 0 on success, 1 on usage, configuration or I/O errors, 2 when a
//! verification suite records a violation.

mod manifest;
mod records;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{
    self, fit_concentration_exponents, FitMode, FitResult, HamiltonianModel, Measure, Observable, PairKind, Suite,
    SweepConfig, VerifyConfig,
};

pub use manifest::{content_hash, manifest_path_for, OutputHash, RunManifest};
pub use records::{
    fits_to_csv, format_float, parse_key_values, parse_records_csv, records_to_csv, report_to_csv, to_json,
    write_records, Format, FIT_COLUMNS, RECORD_COLUMNS, TAIL_COLUMNS, VERIFY_COLUMNS,
};

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "ERGOLAB_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ergolab", version, about = "Ergotropy and entropy of random quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ensemble averages of ergotropy, entropy, work noise-to-signal ratio and energy
    Avg(EnsembleArgs),
    /// Tail probabilities of ergotropy and entropy around their ensemble means
    Tails(EnsembleArgs),
    /// Concentration exponents from a tails CSV
    Fit(FitArgs),
    /// Inequality verification suites
    Verify(VerifyArgs),
    /// Operator-norm scaling of all-subsets k-local Hamiltonians
    #[command(name = "local-ham")]
    LocalHam(LocalArgs),
    /// Raw per-draw values behind `avg`
    Sample(EnsembleArgs),
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Worker threads (falls back to ERGOLAB_THREADS)
    #[arg(long)]
    threads: Option<usize>,
    /// key = value file, JSON object, or a run manifest to replay
    #[arg(long)]
    config: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.manifest.json`
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnsembleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// hs, bures or pure
    #[arg(long)]
    measure: Option<String>,
    /// Comma list or inclusive range `lo..hi`
    #[arg(long)]
    dims: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// Comma list or `log:start:stop:count`
    #[arg(long)]
    ell_grid: Option<String>,
    /// One Hamiltonian per dimension instead of one per sample
    #[arg(long)]
    fixed_hamiltonian: bool,
    /// `ngue` or `k-local:K[:C]` on qubits
    #[arg(long)]
    hamiltonian: Option<String>,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Tails CSV produced by `tails`
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// vary-ell, vary-d or both
    #[arg(long)]
    mode: Option<String>,
    /// erg, ent or both
    #[arg(long)]
    observable: Option<String>,
    /// Restrict vary-ell fits to this dimension
    #[arg(long)]
    d: Option<String>,
    /// Restrict vary-d fits to this threshold
    #[arg(long)]
    ell: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    dims: Option<String>,
    #[arg(long)]
    pairs: Option<String>,
    /// Comma list of measures, or `all`
    #[arg(long)]
    measure: Option<String>,
    /// independent, identical or isospectral
    #[arg(long)]
    pair_kind: Option<String>,
    #[arg(long)]
    ell_grid: Option<String>,
}

#[derive(Args, Debug)]
struct LocalArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    k: Option<String>,
    /// Site counts, comma list or `lo..hi`
    #[arg(long)]
    sites: Option<String>,
    /// Norm of every term
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    local_dim: Option<String>,
}

type Overrides = Vec<(&'static str, Option<String>)>;

fn common_overrides(c: &CommonArgs) -> Overrides {
    vec![
        ("seed", c.seed.map(|s| s.to_string())),
        ("format", c.format.clone()),
        ("threads", c.threads.map(|t| t.to_string())),
    ]
}

fn ensemble_overrides(a: &EnsembleArgs) -> Overrides {
    let mut v = common_overrides(&a.common);
    v.extend([
        ("measure", a.measure.clone()),
        ("dims", a.dims.clone()),
        ("samples", a.samples.clone()),
        ("ell_grid", a.ell_grid.clone()),
        ("fixed_hamiltonian", a.fixed_hamiltonian.then(|| "true".to_string())),
        ("hamiltonian", a.hamiltonian.clone()),
    ]);
    v
}

/// Defaults per subcommand. Keys absent here (and not listed as optional)
/// are rejected when they appear in a config file.
fn defaults(command: &str) -> (Vec<(&'static str, &'static str)>, &'static [&'static str]) {
    let sweep = |dims, samples| {
        vec![
            ("seed", "0"),
            ("format", "csv"),
            ("measure", "hilbert_schmidt"),
            ("dims", dims),
            ("samples", samples),
            ("fixed_hamiltonian", "false"),
            ("hamiltonian", "ngue"),
        ]
    };
    match command {
        "avg" => (sweep("8,16,32,64,128,256", "10000"), &["threads", "ell_grid"]),
        "sample" => (sweep("8", "100"), &["threads", "ell_grid"]),
        "tails" => {
            let mut v = sweep("8,16,32,64", "100000");
            v.push(("ell_grid", DEFAULT_ELL_GRID));
            (v, &["threads"])
        }
        "fit" => (
            vec![("format", "csv"), ("mode", "both"), ("observable", "both")],
            &["threads", "seed", "in", "d", "ell"],
        ),
        "verify" => (
            vec![
                ("seed", "0"),
                ("format", "json"),
                ("dims", "2,4,8,16"),
                ("pairs", "10000"),
                ("measure", "all"),
                ("pair_kind", "independent"),
            ],
            &["threads", "suite", "ell_grid"],
        ),
        "local-ham" => (
            vec![
                ("seed", "0"),
                ("format", "csv"),
                ("k", "2"),
                ("sites", "4..10"),
                ("c", "1"),
                ("samples", "1"),
                ("local_dim", "2"),
            ],
            &["threads"],
        ),
        _ => unreachable!("every subcommand has defaults"),
    }
}

/// Threshold grid used by `tails` when none is given.
pub const DEFAULT_ELL_GRID: &str = "log:0.002:0.3:20";

/// Resolved flat settings of one run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::config(format!("missing setting '{key}'")))
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.require(key)?;
        raw.trim()
            .parse()
            .map_err(|e| Error::config(format!("invalid {key} '{raw}': {e}")))
    }

    fn bool(&self, key: &str) -> Result<bool> {
        match self.require(key)?.trim().to_ascii_lowercase().as_str() {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            other => Err(Error::config(format!("invalid {key} '{other}', expected true or false"))),
        }
    }
}

/// Integers as a comma list or an inclusive range `lo..hi`.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    let bad = |part: &str| Error::config(format!("invalid integer list entry '{part}'"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.trim().parse().map_err(|_| bad(part))?;
            let hi: usize = hi.trim_start_matches('=').trim().parse().map_err(|_| bad(part))?;
            if hi < lo {
                return Err(bad(part));
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad(part))?);
        }
    }
    if out.is_empty() {
        return Err(Error::config("empty integer list"));
    }
    Ok(out)
}

/// Thresholds as a comma list or a geometric grid `log:start:stop:count`.
pub fn parse_ell_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if let Some(spec) = s.strip_prefix("log:") {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || Error::config(format!("invalid geometric grid '{s}', expected log:start:stop:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !(start > 0.0 && stop > start && count >= 2) {
            return Err(bad());
        }
        let ratio = (stop / start).ln() / (count - 1) as f64;
        return Ok((0..count).map(|i| start * (ratio * i as f64).exp()).collect());
    }
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().map_err(|_| Error::config(format!("invalid threshold '{p}'"))))
        .collect()
}

fn parse_hamiltonian(s: &str) -> Result<HamiltonianModel> {
    let s = s.trim().to_ascii_lowercase().replace('_', "-");
    if s == "ngue" {
        return Ok(HamiltonianModel::Ngue);
    }
    let bad = || Error::config(format!("invalid hamiltonian '{s}', expected ngue or k-local:K[:C]"));
    let rest = s.strip_prefix("k-local:").ok_or_else(bad)?;
    let mut parts = rest.split(':');
    let k: usize = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
    let c: f64 = match parts.next() {
        Some(p) => p.parse().map_err(|_| bad())?,
        None => 1.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(HamiltonianModel::KLocal { k, local_dim: 2, c })
}

fn load_config_file(path: &Path, command: &str) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if let Ok(manifest) = serde_json::from_str::<RunManifest>(&text) {
        if manifest.command != command {
            return Err(Error::config(format!(
                "manifest {} records a '{}' run, not '{command}'",
                path.display(),
                manifest.command
            )));
        }
        return Ok(manifest.settings);
    }
    if let Ok(serde_json::Value::Object(obj)) = serde_json::from_str::<serde_json::Value>(&text) {
        return Ok(obj
            .into_iter()
            .map(|(k, v)| {
                let value = match v {
                    serde_json::Value::String(s) => s,
                    serde_json::Value::Array(items) => items
                        .iter()
                        .map(|i| i.as_str().map(str::to_string).unwrap_or_else(|| i.to_string()))
                        .collect::<Vec<_>>()
                        .join(","),
                    other => other.to_string(),
                };
                (k.replace('-', "_"), value)
            })
            .collect());
    }
    parse_key_values(&text, path)
}

fn resolve_settings(command: &str, config: Option<&Path>, overrides: Overrides) -> Result<Settings> {
    let (defaults, optional) = defaults(command);
    let mut map = match config {
        Some(path) => load_config_file(path, command)?,
        None => BTreeMap::new(),
    };
    for key in map.keys() {
        if !defaults.iter().any(|(k, _)| k == key) && !optional.contains(&key.as_str()) {
            return Err(Error::config(format!("unknown setting '{key}' for {command}")));
        }
    }
    for (k, v) in overrides {
        if let Some(v) = v {
            map.insert(k.to_string(), v);
        }
    }
    for (k, v) in defaults {
        map.entry(k.to_string()).or_insert_with(|| v.to_string());
    }
    Ok(Settings(map))
}

fn resolve_threads(settings: &Settings) -> Result<Option<usize>> {
    if settings.get("threads").is_some() {
        return Ok(Some(settings.parse("threads")?));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::config(format!("invalid {THREADS_ENV} '{v}'"))),
        _ => Ok(None),
    }
}

fn sweep_config(s: &Settings) -> Result<SweepConfig> {
    let measure: Measure = s.require("measure")?.parse()?;
    let mut config = SweepConfig::new(measure, parse_usize_list(s.require("dims")?)?, s.parse("samples")?, s.parse("seed")?);
    config.hamiltonian = parse_hamiltonian(s.require("hamiltonian")?)?;
    config.fixed_hamiltonian = s.bool("fixed_hamiltonian")?;
    if let Some(grid) = s.get("ell_grid") {
        config.ell_grid = Some(parse_ell_grid(grid)?);
    }
    config.validate()?;
    Ok(config)
}

/// What a subcommand produced.
struct RunOutput {
    payload: String,
    config: serde_json::Value,
    seed: u64,
    exit: i32,
}

fn echo<T: Serialize>(value: &T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(value)?)
}

fn run_avg(s: &Settings, format: Format) -> Result<RunOutput> {
    let config = sweep_config(s)?;
    let records = experiments::run_average_sweep(&config)?;
    for w in experiments::inset_transform(&records).excluded.iter() {
        log_note(&format!("d = {w}: ln ln ln d is not positive, left out of the inset series"));
    }
    Ok(RunOutput {
        payload: match format {
            Format::Csv => records_to_csv(&records, false),
            Format::Json => to_json(&records)?,
        },
        config: echo(&config)?,
        seed: config.seed,
        exit: EXIT_OK,
    })
}

fn run_tails(s: &Settings, format: Format) -> Result<RunOutput> {
    let config = sweep_config(s)?;
    let records = experiments::run_tail_experiment(&config)?;
    for w in experiments::tail_warnings(&records) {
        log_note(&w);
    }
    Ok(RunOutput {
        payload: match format {
            Format::Csv => records_to_csv(&records, true),
            Format::Json => to_json(&records)?,
        },
        config: echo(&config)?,
        seed: config.seed,
        exit: EXIT_OK,
    })
}

fn run_sample(s: &Settings, format: Format) -> Result<RunOutput> {
    let config = sweep_config(s)?;
    let draws = experiments::draw_samples(&config)?;
    let payload = match format {
        Format::Json => to_json(&draws)?,
        Format::Csv => {
            let mut out = String::from("measure,d,index,erg_hat,entropy_hat,nsr,energy_hat\n");
            for d in &draws {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    d.measure,
                    d.d,
                    d.index,
                    format_float(d.erg_hat),
                    format_float(d.entropy_hat),
                    d.nsr.map(format_float).unwrap_or_default(),
                    format_float(d.energy_hat)
                ));
            }
            out
        }
    };
    Ok(RunOutput {
        payload,
        config: echo(&config)?,
        seed: config.seed,
        exit: EXIT_OK,
    })
}

#[derive(Serialize)]
struct FitRow {
    measure: Measure,
    #[serde(flatten)]
    fit: FitResult,
}

fn run_fit(s: &Settings, format: Format) -> Result<RunOutput> {
    let input = PathBuf::from(s.get("in").ok_or_else(|| Error::config("fit needs --in <tails.csv>"))?);
    let text = std::fs::read_to_string(&input).map_err(|e| Error::io(&input, e))?;
    let records = parse_records_csv(&text, &input)?;
    let mode = s.require("mode")?.to_ascii_lowercase().replace('_', "-");
    let (vary_ell, vary_d) = match mode.as_str() {
        "vary-ell" => (true, false),
        "vary-d" => (false, true),
        "both" => (true, true),
        other => return Err(Error::config(format!("invalid mode '{other}', expected vary-ell, vary-d or both"))),
    };
    let observables: Vec<Observable> = match s.require("observable")?.to_ascii_lowercase().as_str() {
        "erg" | "ergotropy" => vec![Observable::Ergotropy],
        "ent" | "entropy" => vec![Observable::Entropy],
        "both" => vec![Observable::Ergotropy, Observable::Entropy],
        other => return Err(Error::config(format!("invalid observable '{other}'"))),
    };
    let only_d: Option<usize> = s.get("d").map(|_| s.parse("d")).transpose()?;
    let only_ell: Option<f64> = s.get("ell").map(|_| s.parse("ell")).transpose()?;

    let mut measures: Vec<Measure> = Vec::new();
    for r in &records {
        if !measures.contains(&r.measure) {
            measures.push(r.measure);
        }
    }
    let mut fits = Vec::new();
    for measure in measures {
        let subset: Vec<_> = records.iter().filter(|r| r.measure == measure).cloned().collect();
        let mut modes = Vec::new();
        if vary_ell {
            modes.extend(
                subset
                    .iter()
                    .map(|r| r.d)
                    .filter(|d| only_d.is_none_or(|x| x == *d))
                    .map(|d| FitMode::VaryEll { d }),
            );
        }
        if vary_d {
            let ells: Vec<f64> = match only_ell {
                Some(l) => vec![l],
                None => subset
                    .first()
                    .and_then(|r| r.tail_counts.as_ref())
                    .map(|c| c.iter().map(|c| c.ell).collect())
                    .unwrap_or_default(),
            };
            modes.extend(ells.into_iter().map(|ell| FitMode::VaryD { ell }));
        }
        for mode in modes {
            for &observable in &observables {
                match fit_concentration_exponents(&subset, mode, observable) {
                    Ok(fit) => fits.push((measure, fit)),
                    Err(Error::InsufficientFitPoints { usable, excluded }) => log_note(&format!(
                        "{measure} {mode:?} {observable:?}: skipped, {usable} usable points ({excluded} excluded)"
                    )),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    if fits.is_empty() {
        return Err(Error::config(format!("no fit in {} had three usable points", input.display())));
    }
    let payload = match format {
        Format::Csv => fits_to_csv(&fits),
        Format::Json => to_json(&fits.iter().map(|(m, f)| FitRow { measure: *m, fit: *f }).collect::<Vec<_>>())?,
    };
    Ok(RunOutput {
        payload,
        config: serde_json::json!({ "in": input, "mode": mode, "observables": observables }),
        seed: 0,
        exit: EXIT_OK,
    })
}

fn run_verify(s: &Settings, format: Format) -> Result<RunOutput> {
    let suite: Suite = s
        .get("suite")
        .ok_or_else(|| Error::config("verify needs --suite"))?
        .parse()?;
    let mut config = VerifyConfig::new(suite, parse_usize_list(s.require("dims")?)?, s.parse("pairs")?, s.parse("seed")?);
    let measure = s.require("measure")?;
    if !measure.eq_ignore_ascii_case("all") {
        config.measures = measure.split(',').map(Measure::from_str).collect::<Result<_>>()?;
    }
    config.pair_kind = s.require("pair_kind")?.parse::<PairKind>()?;
    if let Some(grid) = s.get("ell_grid") {
        config.ell_grid = Some(parse_ell_grid(grid)?);
    }
    let report = experiments::run_verification_suite(&config)?;
    let pairs: usize = report.checks.iter().map(|c| c.pairs).sum();
    log_note(&format!(
        "{}: {} checks, {} evaluations, {} violations",
        report.suite,
        report.checks.len(),
        pairs,
        report.total_violations()
    ));
    Ok(RunOutput {
        payload: match format {
            Format::Csv => report_to_csv(&report),
            Format::Json => to_json(&report)?,
        },
        config: echo(&config)?,
        seed: config.seed,
        exit: if report.passed() { EXIT_OK } else { EXIT_VIOLATION },
    })
}

fn run_local(s: &Settings, format: Format) -> Result<RunOutput> {
    let k: usize = s.parse("k")?;
    let local_dim: usize = s.parse("local_dim")?;
    let sites = parse_usize_list(s.require("sites")?)?;
    let c: f64 = s.parse("c")?;
    let samples: usize = s.parse("samples")?;
    let seed: u64 = s.parse("seed")?;
    let report = experiments::run_local_scaling(k, local_dim, &sites, c, samples, seed)?;
    log_note(&format!(
        "ln ||H|| vs ln N: slope {} (R^2 {})",
        format_float(report.slope),
        format_float(report.r_squared)
    ));
    let payload = match format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut out = String::from("n_sites,d,n_terms,norm_mean,norm_max,triangle_bound\n");
            for r in &report.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.n_sites,
                    r.d,
                    r.n_terms,
                    format_float(r.norm_mean),
                    format_float(r.norm_max),
                    format_float(r.triangle_bound)
                ));
            }
            out
        }
    };
    Ok(RunOutput {
        payload,
        config: serde_json::json!({ "k": k, "local_dim": local_dim, "sites": sites, "c": c, "samples": samples }),
        seed,
        exit: EXIT_OK,
    })
}

fn log_note(message: &str) {
    eprintln!("ergolab: {message}");
}

fn dispatch(cli: Cli) -> Result<i32> {
    let (name, common, overrides): (&str, &CommonArgs, Overrides) = match &cli.command {
        Command::Avg(a) => ("avg", &a.common, ensemble_overrides(a)),
        Command::Tails(a) => ("tails", &a.common, ensemble_overrides(a)),
        Command::Sample(a) => ("sample", &a.common, ensemble_overrides(a)),
        Command::Fit(a) => {
            let mut v = common_overrides(&a.common);
            v.extend([
                ("in", a.input.as_ref().map(|p| p.display().to_string())),
                ("mode", a.mode.clone()),
                ("observable", a.observable.clone()),
                ("d", a.d.clone()),
                ("ell", a.ell.clone()),
            ]);
            ("fit", &a.common, v)
        }
        Command::Verify(a) => {
            let mut v = common_overrides(&a.common);
            v.extend([
                ("suite", a.suite.clone()),
                ("dims", a.dims.clone()),
                ("pairs", a.pairs.clone()),
                ("measure", a.measure.clone()),
                ("pair_kind", a.pair_kind.clone()),
                ("ell_grid", a.ell_grid.clone()),
            ]);
            ("verify", &a.common, v)
        }
        Command::LocalHam(a) => {
            let mut v = common_overrides(&a.common);
            v.extend([
                ("k", a.k.clone()),
                ("sites", a.sites.clone()),
                ("c", a.c.clone()),
                ("samples", a.samples.clone()),
                ("local_dim", a.local_dim.clone()),
            ]);
            ("local-ham", &a.common, v)
        }
    };
    let settings = resolve_settings(name, common.config.as_deref(), overrides)?;
    let format: Format = settings.require("format")?.parse()?;
    let threads = resolve_threads(&settings)?;
    let started = chrono::Utc::now().to_rfc3339();
    let runner = match name {
        "avg" => run_avg,
        "tails" => run_tails,
        "sample" => run_sample,
        "fit" => run_fit,
        "verify" => run_verify,
        _ => run_local,
    };
    let output = experiments::with_threads(threads, || runner(&settings, format))??;

    let mut outputs = Vec::new();
    match &common.out {
        Some(path) => {
            std::fs::write(path, &output.payload).map_err(|e| Error::io(path, e))?;
            outputs.push(OutputHash {
                path: path.clone(),
                sha256: content_hash(output.payload.as_bytes()),
            });
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output.payload.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e))?;
        }
    }
    let manifest_path = common
        .manifest
        .clone()
        .or_else(|| common.out.as_deref().map(manifest_path_for));
    if let Some(path) = manifest_path {
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: name.to_string(),
            settings: settings.0.clone(),
            config: output.config,
            seed: output.seed,
            started,
            finished: chrono::Utc::now().to_rfc3339(),
            outputs,
        };
        manifest.write(&path)?;
    }
    Ok(output.exit)
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_CONFIG,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
