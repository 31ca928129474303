//! Range parsing, CSV I/O, and atomic report writing.

use crate::CliError;
use std::fs;
use std::io::Write;
use std::path::Path;

/// Parse `start:stop:step` (endpoints inclusive within half a step) or a
/// single value.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |m: &str| CliError::Validation(format!("range `{spec}`: {m}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad("not a number"))
            .and_then(|v| {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(bad("not finite"))
                }
            })
    };
    match parts.as_slice() {
        [single] => Ok(vec![num(single)?]),
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step <= 0.0 {
                return Err(bad("step must be positive"));
            }
            if stop < start {
                return Err(bad("stop below start"));
            }
            let count = ((stop - start) / step + 0.5).floor() as usize;
            Ok((0..=count)
                .map(|i| start + i as f64 * step)
                .filter(|v| *v <= stop + 0.5 * step)
                .collect())
        }
        _ => Err(bad("expected `value` or `start:stop:step`")),
    }
}

/// Integer range with the same syntax; values must be whole numbers.
pub fn parse_range_usize(spec: &str) -> Result<Vec<usize>, CliError> {
    parse_range(spec)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(CliError::Validation(format!(
                    "range `{spec}`: {v} is not a nonnegative integer"
                )))
            }
        })
        .collect()
}

/// 17 significant digits: enough to round-trip any f64.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write bytes to `path` atomically (temp file in the same directory, then
/// rename).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let tmp = path.with_extension(match path.extension() {
        Some(e) => format!("{}.tmp", e.to_string_lossy()),
        None => "tmp".into(),
    });
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Sample CSV: header `index,q`, one outcome per row at 17 significant
/// digits.
pub fn samples_to_csv(samples: &[f64]) -> String {
    let mut out = String::from("index,q\n");
    for (i, q) in samples.iter().enumerate() {
        out.push_str(&format!("{i},{}\n", sig17(*q)));
    }
    out
}

/// Read a sample CSV produced by `lsq sample` (or any `index,q` file).
pub fn read_sample_csv(path: &Path) -> Result<Vec<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    {
        let headers = reader
            .headers()
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        if headers.iter().collect::<Vec<_>>() != ["index", "q"] {
            return Err(CliError::Validation(format!(
                "{}: expected header `index,q`, got `{}`",
                path.display(),
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
    }
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let q = record
            .get(1)
            .ok_or_else(|| CliError::Validation(format!("{}: missing q column", path.display())))?;
        samples.push(q.trim().parse::<f64>().map_err(|_| {
            CliError::Validation(format!("{}: bad sample `{q}`", path.display()))
        })?);
    }
    Ok(samples)
}

/// Serialize a report with the versioned schema tag and write it
/// atomically as pretty JSON.
pub fn write_report(path: &Path, report: &serde_json::Value) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(report)
        .map_err(|e| CliError::Validation(format!("report serialization: {e}")))?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}
