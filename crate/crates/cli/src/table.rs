//! Coverage table CSV: `#`-prefixed metadata lines, then a headed body.
//!
//! Floats are written in Rust's shortest round-trip form so that reading a
//! table back reproduces the in-memory rows bit for bit.

use std::io::{BufRead, Write};

use tailindex::{CoverageRow, Method};

use crate::error::{CliError, CliResult};

pub const COVERAGE_HEADER: &str = "beta,method,k,coverage,avg_length,p_bar,failures";

/// Metadata entries rendered as `# key = value`.
pub type Metadata = Vec<(String, String)>;

pub fn write_coverage<W: Write + ?Sized>(out: &mut W, meta: &Metadata, rows: &[CoverageRow]) -> std::io::Result<()> {
    for (k, v) in meta {
        writeln!(out, "# {k} = {v}")?;
    }
    writeln!(out, "{COVERAGE_HEADER}")?;
    for r in rows {
        let beta = r.beta.map(|b| b.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{beta},{},{},{},{},{},{}",
            r.method, r.k, r.coverage, r.avg_length, r.p_bar, r.failures
        )?;
    }
    Ok(())
}

pub fn read_coverage<R: BufRead>(input: R) -> CliResult<(Metadata, Vec<CoverageRow>)> {
    let mut meta = Vec::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i as u64 + 1;
        let err = |message: String| CliError::Parse { line: lineno, message };
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                meta.push((k.trim().to_owned(), v.trim().to_owned()));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !seen_header {
            if line.trim() != COVERAGE_HEADER {
                return Err(err(format!("expected header '{COVERAGE_HEADER}'")));
            }
            seen_header = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(err(format!("expected 7 fields, found {}", f.len())));
        }
        let num = |s: &str, name: &str| s.parse::<f64>().map_err(|_| err(format!("{name} '{s}' is not a number")));
        let int = |s: &str, name: &str| s.parse::<usize>().map_err(|_| err(format!("{name} '{s}' is not an integer")));
        rows.push(CoverageRow {
            beta: if f[0].is_empty() { None } else { Some(num(f[0], "beta")?) },
            method: f[1].parse::<Method>().map_err(|e| err(e.to_string()))?,
            k: int(f[2], "k")?,
            coverage: num(f[3], "coverage")?,
            avg_length: num(f[4], "avg_length")?,
            p_bar: num(f[5], "p_bar")?,
            failures: int(f[6], "failures")?,
        });
    }
    if !seen_header {
        return Err(CliError::Parse {
            line: 0,
            message: "no coverage header found".into(),
        });
    }
    Ok((meta, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let rows = vec![
            CoverageRow {
                beta: Some(0.05),
                method: Method::Bcl,
                k: 87,
                coverage: 0.963,
                avg_length: 0.1 + 0.2,
                p_bar: 1.0 / 3.0,
                failures: 0,
            },
            CoverageRow {
                beta: None,
                method: Method::Cl2,
                k: 2,
                coverage: 0.0,
                avg_length: f64::NAN,
                p_bar: 1.0,
                failures: 5,
            },
        ];
        let meta = vec![("seed".to_owned(), "42".to_owned())];
        let mut buf = Vec::new();
        write_coverage(&mut buf, &meta, &rows).unwrap();
        let (m2, r2) = read_coverage(buf.as_slice()).unwrap();
        assert_eq!(m2, meta);
        assert_eq!(r2.len(), 2);
        assert_eq!(r2[0], rows[0]);
        assert!(r2[1].avg_length.is_nan());
        assert_eq!((r2[1].beta, r2[1].failures), (None, 5));
    }
}
