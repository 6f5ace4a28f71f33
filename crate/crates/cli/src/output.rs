//! Number formatting, CSV/JSON rendering and atomic file writes.

use serde::Serialize;
use serde_json::Value;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

/// `x` with 12 significant digits, plain decimal notation where that is
/// reasonable and trailing zeros removed.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded = round12(x);
    let e = rounded.abs().log10().floor() as i32;
    if (-5..15).contains(&e) {
        let decimals = (11 - e).max(0) as usize;
        trim_zeros(format!("{rounded:.decimals$}"))
    } else {
        let s = format!("{rounded:.11e}");
        let (mantissa, exp) = s.split_once('e').unwrap_or((&s, "0"));
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Nearest double to `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64().filter(|_| n.is_f64()) {
                if let Some(r) = serde_json::Number::from_f64(round12(f)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut v = serde_json::to_value(value)?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn json_value<T: Serialize>(value: &T) -> Result<Value, CliError> {
    Ok(serde_json::to_value(value)?)
}

/// CSV with LF line endings.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Two-column `volume,area` series.
pub fn series_csv(points: &[(f64, f64)]) -> Result<String, CliError> {
    let rows: Vec<Vec<String>> = points.iter().map(|&(v, a)| vec![fmt_num(v), fmt_num(a)]).collect();
    to_csv(&["volume", "area"], &rows)
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Where results go: a directory, or standard output.
pub enum Sink {
    Dir(PathBuf),
    Stdout,
}

impl Sink {
    pub fn emit(&self, name: &str, contents: &str) -> Result<(), CliError> {
        match self {
            Sink::Dir(dir) => write_atomic(&dir.join(name), contents),
            Sink::Stdout => {
                let mut out = std::io::stdout().lock();
                out.write_all(contents.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_num(1544.4386281), "1544.4386281");
        assert_eq!(fmt_num(20.857591085821944), "20.8575910858");
        assert_eq!(fmt_num(0.0052), "0.0052");
        assert_eq!(fmt_num(2.0), "2");
        assert_eq!(fmt_num(-0.5), "-0.5");
        assert_eq!(fmt_num(1.23456789012345e-9), "1.23456789012e-9");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_uses_lf() {
        let s = series_csv(&[(1.0, 2.0), (3.0, 4.5)]).unwrap();
        assert_eq!(s, "volume,area\n1,2\n3,4.5\n");
    }

    #[test]
    fn json_rounds_floats() {
        let s = to_json(&serde_json::json!({"x": 0.1 + 0.2, "n": 3})).unwrap();
        assert!(s.contains("0.3") && !s.contains("0.30000000000000004"));
        assert!(s.contains("\"n\": 3"));
    }
}
