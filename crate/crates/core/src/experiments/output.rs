//! On-disk formats: CSV tables, binary field checkpoints and the run
//! manifest.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diagnostics::{DiagnosticsRecord, DiagnosticsTimeSeries, COLUMNS};
use crate::dynamics::Checkpoint;
use crate::error::{Error, Result};
use crate::spectral::{ComplexField, Grid};

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"DMNLSCKP";
pub const CHECKPOINT_VERSION: u32 = 1;

/// 17 significant digits, enough to read the same `f64` back.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::Format(format!(
                "row of {} cells under a header of {}",
                row.len(),
                header.len()
            )));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Writes float columns of equal length.
pub fn write_columns(path: &Path, header: &[&str], columns: &[&[f64]]) -> Result<()> {
    let n = columns.first().map_or(0, |c| c.len());
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::Format("columns of unequal length".into()));
    }
    write_csv(
        path,
        header,
        (0..n).map(|i| columns.iter().map(|c| float(c[i])).collect()),
    )
}

/// A CSV table of floats, as read back.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl NumericTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

pub fn read_csv(path: &Path) -> Result<NumericTable> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Format(format!("{} is empty", path.display())))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|c| {
                c.parse::<f64>()
                    .map_err(|_| Error::Format(format!("line {}: {c:?} is not a number", i + 2)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != header.len() {
            return Err(Error::Format(format!(
                "line {}: expected {} cells",
                i + 2,
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok(NumericTable { header, rows })
}

/// The diagnostics series with the column names of [`COLUMNS`].
pub fn write_series(path: &Path, series: &DiagnosticsTimeSeries) -> Result<()> {
    write_csv(
        path,
        &COLUMNS,
        series
            .records
            .iter()
            .map(|r| r.values().iter().map(|&v| float(v)).collect()),
    )
}

pub fn read_series(path: &Path) -> Result<Vec<DiagnosticsRecord>> {
    let table = read_csv(path)?;
    if table.header != COLUMNS {
        return Err(Error::Format(format!(
            "{} does not carry the series header",
            path.display()
        )));
    }
    Ok(table
        .rows
        .into_iter()
        .map(|r| DiagnosticsRecord::from_values(r.try_into().expect("row length checked")))
        .collect())
}

/// Binary snapshot: 8-byte magic, u32 version, u32 reserved, then u32
/// dimension, u32 points per axis, f64 box length, f64 time and the values
/// as little-endian `(re, im)` pairs in row-major order.
pub fn write_checkpoint(path: &Path, time: f64, field: &ComplexField) -> Result<()> {
    let grid = field.grid();
    let mut buf = Vec::with_capacity(40 + 16 * field.values().len());
    buf.extend_from_slice(CHECKPOINT_MAGIC);
    buf.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    buf.extend_from_slice(&0u32.to_le_bytes());
    buf.extend_from_slice(&(grid.dimension() as u32).to_le_bytes());
    buf.extend_from_slice(&(grid.points_per_axis() as u32).to_le_bytes());
    buf.extend_from_slice(&grid.box_length().to_le_bytes());
    buf.extend_from_slice(&time.to_le_bytes());
    for z in field.values() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    fs::write(path, buf)?;
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    let bad = |what: &str| Error::Format(format!("{}: {what}", path.display()));
    if bytes.len() < 40 || &bytes[..8] != CHECKPOINT_MAGIC {
        return Err(bad("not a field checkpoint"));
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let f64_at = |i: usize| f64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    if u32_at(8) != CHECKPOINT_VERSION {
        return Err(bad(&format!("unsupported version {}", u32_at(8))));
    }
    let (dim, n) = (u32_at(16) as usize, u32_at(20) as usize);
    let (length, time) = (f64_at(24), f64_at(32));
    let grid = Grid::new(dim, n, length)?;
    let count = grid.len();
    if bytes.len() != 40 + 16 * count {
        return Err(bad(&format!("expected {count} values")));
    }
    let values = (0..count)
        .map(|k| Complex64::new(f64_at(40 + 16 * k), f64_at(48 + 16 * k)))
        .collect();
    Ok(Checkpoint {
        time,
        field: ComplexField::from_values(&grid, values)?,
    })
}

/// Reads a checkpoint and requires it to live on `grid`.
pub fn read_checkpoint_on(path: &Path, grid: &Arc<Grid>) -> Result<ComplexField> {
    let ckp = read_checkpoint(path)?;
    let g = ckp.field.grid();
    if g.dimension() != grid.dimension()
        || g.points_per_axis() != grid.points_per_axis()
        || g.box_length() != grid.box_length()
    {
        return Err(Error::GridMismatch);
    }
    ComplexField::from_values(grid, ckp.field.into_values())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Hex SHA-256 of a text.
pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifestStatus {
    Pass,
    CheckFail,
    RuntimeError,
}

/// Provenance record of one run, written last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub preset: String,
    /// SHA-256 of the resolved config as TOML.
    pub config_hash: String,
    pub code_version: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub status: ManifestStatus,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_stage: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub failed_checks: Vec<String>,
    /// Paths relative to the output directory.
    pub files: Vec<String>,
    /// The resolved config, all defaults filled in.
    pub config: serde_json::Value,
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.0] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
        assert!(float(f64::NAN).parse::<f64>().unwrap().is_nan());
    }

    #[test]
    fn checkpoint_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(2, 16, 8.0).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::new(x[0].sin(), x[1] * 0.1));
        let path = dir.path().join("u.ckp");
        write_checkpoint(&path, -0.75, &u).unwrap();
        let back = read_checkpoint(&path).unwrap();
        assert_eq!(back.time, -0.75);
        assert_eq!(back.field.values(), u.values());
        assert_eq!(std::fs::metadata(&path).unwrap().len(), 40 + 16 * 256);
        let other = Grid::new(2, 16, 9.0).unwrap();
        assert!(read_checkpoint_on(&path, &other).is_err());
    }

    #[test]
    fn corrupt_checkpoint_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.ckp");
        std::fs::write(&path, b"DMNLSCKP\x01\x00\x00\x00").unwrap();
        assert!(read_checkpoint(&path).is_err());
    }
}
