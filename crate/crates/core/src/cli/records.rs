//! CSV and JSON persistence for ensemble records, fits and verification reports.
//!
//! Floats are written like C's `%.12g`, so a parse followed by a re-emit
//! reproduces the original bytes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{EnsembleRecord, FitMode, FitResult, Measure, SuiteReport, TailCount};

pub const RECORD_COLUMNS: [&str; 12] = [
    "measure",
    "d",
    "n_samples",
    "mean_erg_hat",
    "sem_erg_hat",
    "std_erg_hat",
    "mean_entropy_hat",
    "sem_entropy_hat",
    "mean_nsr",
    "sem_nsr",
    "n_nsr_undefined",
    "mean_energy_hat",
];

pub const TAIL_COLUMNS: [&str; 5] = ["ell", "count_erg", "p_erg", "count_ent", "p_ent"];

/// Output encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::config(format!("unknown format '{other}' (expected csv or json)"))),
        }
    }
}

/// Decimal rendering with 12 significant digits, `%.12g` style.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    const PRECISION: i32 = 12;
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..PRECISION).contains(&exp) {
        let decimals = (PRECISION - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn parse_float(field: &str) -> std::result::Result<f64, String> {
    field.trim().parse::<f64>().map_err(|e| format!("bad number '{field}': {e}"))
}

fn parse_int<T: std::str::FromStr>(field: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    field.trim().parse::<T>().map_err(|e| format!("bad integer '{field}': {e}"))
}

fn record_fields(r: &EnsembleRecord) -> Vec<String> {
    vec![
        r.measure.name().to_string(),
        r.d.to_string(),
        r.n_samples.to_string(),
        format_float(r.mean_erg_hat),
        format_float(r.sem_erg_hat),
        format_float(r.std_erg_hat),
        format_float(r.mean_entropy_hat),
        format_float(r.sem_entropy_hat),
        format_float(r.mean_nsr),
        format_float(r.sem_nsr),
        r.n_nsr_undefined.to_string(),
        format_float(r.mean_energy_hat),
    ]
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    let bytes = writer.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("fields are UTF-8")
}

/// Records as CSV. With `tails`, one row per `(d, ℓ)` carrying the extra
/// tail columns; a record without tail counts then leaves them empty.
pub fn records_to_csv(records: &[EnsembleRecord], tails: bool) -> String {
    let mut w = csv_writer();
    let mut header: Vec<&str> = RECORD_COLUMNS.to_vec();
    if tails {
        header.extend(TAIL_COLUMNS);
    }
    w.write_record(&header).expect("in-memory write");
    for r in records {
        let base = record_fields(r);
        if !tails {
            w.write_record(&base).expect("in-memory write");
            continue;
        }
        match r.tail_counts.as_deref() {
            Some(counts) if !counts.is_empty() => {
                for c in counts {
                    let mut row = base.clone();
                    row.extend([
                        format_float(c.ell),
                        c.count_erg.to_string(),
                        format_float(r.p_erg(c)),
                        c.count_ent.to_string(),
                        format_float(r.p_ent(c)),
                    ]);
                    w.write_record(&row).expect("in-memory write");
                }
            }
            _ => {
                let mut row = base;
                row.extend(std::iter::repeat_n(String::new(), TAIL_COLUMNS.len()));
                w.write_record(&row).expect("in-memory write");
            }
        }
    }
    finish(w)
}

/// Parses either CSV layout back into records. Tail rows sharing a
/// `(measure, d)` key are merged into one record.
pub fn parse_records_csv(text: &str, origin: &Path) -> Result<Vec<EnsembleRecord>> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let base_ok = header.len() >= RECORD_COLUMNS.len() && header[..RECORD_COLUMNS.len()] == RECORD_COLUMNS;
    let tails = header.len() == RECORD_COLUMNS.len() + TAIL_COLUMNS.len()
        && header[RECORD_COLUMNS.len()..] == TAIL_COLUMNS;
    if !base_ok || !(tails || header.len() == RECORD_COLUMNS.len()) {
        return Err(parse_err(1, format!("unexpected header {header:?}")));
    }
    let mut records: Vec<EnsembleRecord> = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| parse_err(line, e.to_string()))?;
        let f = |k: usize| row.get(k).unwrap_or("");
        let parsed = (|| -> std::result::Result<(EnsembleRecord, Option<TailCount>), String> {
            let measure: Measure = f(0).parse().map_err(|e: Error| e.to_string())?;
            let record = EnsembleRecord {
                measure,
                d: parse_int(f(1))?,
                n_samples: parse_int(f(2))?,
                mean_erg_hat: parse_float(f(3))?,
                sem_erg_hat: parse_float(f(4))?,
                std_erg_hat: parse_float(f(5))?,
                mean_entropy_hat: parse_float(f(6))?,
                sem_entropy_hat: parse_float(f(7))?,
                mean_nsr: parse_float(f(8))?,
                sem_nsr: parse_float(f(9))?,
                n_nsr_undefined: parse_int(f(10))?,
                mean_energy_hat: parse_float(f(11))?,
                tail_counts: None,
            };
            let count = if tails && !f(12).is_empty() {
                Some(TailCount {
                    ell: parse_float(f(12))?,
                    count_erg: parse_int(f(13))?,
                    count_ent: parse_int(f(15))?,
                })
            } else {
                None
            };
            Ok((record, count))
        })()
        .map_err(|m| parse_err(line, m))?;
        let (record, count) = parsed;
        let same_key = records
            .last()
            .is_some_and(|last| tails && last.measure == record.measure && last.d == record.d);
        if same_key {
            if let (Some(c), Some(list)) = (count, records.last_mut().and_then(|l| l.tail_counts.as_mut())) {
                list.push(c);
            }
            continue;
        }
        let mut record = record;
        if tails {
            record.tail_counts = count.map(|c| vec![c]);
        }
        records.push(record);
    }
    Ok(records)
}

pub const FIT_COLUMNS: [&str; 12] = [
    "observable",
    "mode",
    "d",
    "ell",
    "slope",
    "x_exponent",
    "y_exponent",
    "intercept",
    "r_squared",
    "n_points",
    "n_excluded",
    "measure",
];

fn optional(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

/// Fit results, one row each. `measure` is carried alongside for plotting.
pub fn fits_to_csv(fits: &[(Measure, FitResult)]) -> String {
    let mut w = csv_writer();
    w.write_record(FIT_COLUMNS).expect("in-memory write");
    for (measure, fit) in fits {
        let (mode, d, ell) = match fit.mode {
            FitMode::VaryEll { d } => ("vary_ell", d.to_string(), String::new()),
            FitMode::VaryD { ell } => ("vary_d", String::new(), format_float(ell)),
        };
        let observable = match fit.observable {
            crate::experiments::Observable::Ergotropy => "ergotropy",
            crate::experiments::Observable::Entropy => "entropy",
        };
        w.write_record([
            observable.to_string(),
            mode.to_string(),
            d,
            ell,
            format_float(fit.slope()),
            optional(fit.x_exponent),
            optional(fit.y_exponent),
            format_float(fit.intercept),
            format_float(fit.r_squared),
            fit.n_points.to_string(),
            fit.n_excluded.to_string(),
            measure.name().to_string(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

pub const VERIFY_COLUMNS: [&str; 10] = [
    "suite",
    "pair_kind",
    "measure",
    "d",
    "inequality",
    "pairs",
    "violations",
    "min_margin",
    "max_ratio",
    "max_lhs",
];

pub fn report_to_csv(report: &SuiteReport) -> String {
    let mut w = csv_writer();
    w.write_record(VERIFY_COLUMNS).expect("in-memory write");
    let kind = serde_json::to_value(report.pair_kind).expect("enum serializes");
    for c in &report.checks {
        w.write_record([
            report.suite.name().to_string(),
            kind.as_str().unwrap_or_default().to_string(),
            c.measure.name().to_string(),
            c.d.to_string(),
            c.inequality.clone(),
            c.pairs.to_string(),
            c.violations.to_string(),
            format_float(c.min_margin),
            format_float(c.max_ratio),
            format_float(c.max_lhs),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

/// Pretty JSON followed by a newline. Non-finite floats become `null`.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = serde_json::to_string_pretty(value)?;
    out.push('\n');
    Ok(out)
}

/// Writes records to `path` in the requested format.
pub fn write_records(records: &[EnsembleRecord], path: &Path, format: Format, tails: bool) -> Result<()> {
    let text = match format {
        Format::Csv => records_to_csv(records, tails),
        Format::Json => to_json(&records)?,
    };
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Simple flat `key = value` settings, `#` starts a comment.
pub fn parse_key_values(text: &str, origin: &Path) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            path: origin.to_path_buf(),
            line: i + 1,
            message: format!("expected key = value, got '{line}'"),
        })?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_matches_printf_g() {
        let cases = [
            (0.1, "0.1"),
            (1.0 / 3.0, "0.333333333333"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (1e-5, "1e-05"),
            (0.0001234, "0.0001234"),
            (-2.5, "-2.5"),
            (0.0, "0"),
            (1.2866, "1.2866"),
        ];
        for (x, s) in cases {
            assert_eq!(format_float(x), s, "{x}");
        }
        assert_eq!(format_float(f64::NAN), "nan");
    }

    #[test]
    fn key_values_skip_comments() {
        let map = parse_key_values("# run\nmeasure = hs\ndims=8,16 # two\n\n", Path::new("x")).unwrap();
        assert_eq!(map["measure"], "hs");
        assert_eq!(map["dims"], "8,16");
        assert!(parse_key_values("oops", Path::new("x")).is_err());
    }
}
