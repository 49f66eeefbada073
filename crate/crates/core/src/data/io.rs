//! Matrix and label files.
//!
//! * CSV: one point per row, comma separated, no header. Values are written
//!   with 17 significant digits.
//! * Binary: the magic `LRTM`, then `u32` rows and `u32` cols (little
//!   endian), then the row-major `f64` payload (little endian).
//!
//! [`load_matrix`] and [`save_matrix`] use the points-as-rows convention and
//! transpose so that callers see points as columns. [`read_raw_matrix`] and
//! [`write_raw_matrix`] store a matrix exactly as it is (used for transforms).

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const BINARY_MAGIC: &[u8; 4] = b"LRTM";
const HEADER_LEN: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Binary,
}

impl MatrixFormat {
    /// `.csv` files are CSV, everything else is binary.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => MatrixFormat::Csv,
            _ => MatrixFormat::Binary,
        }
    }
}

/// Load points stored one per row; returns points as columns.
pub fn load_matrix(path: &Path, format: MatrixFormat) -> Result<Matrix> {
    Ok(read_raw_matrix(path, format)?.transpose())
}

/// Save points (columns) one per row.
pub fn save_matrix(path: &Path, points: &Matrix, format: MatrixFormat) -> Result<()> {
    write_raw_matrix(path, &points.transpose(), format)
}

pub fn read_raw_matrix(path: &Path, format: MatrixFormat) -> Result<Matrix> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    match format {
        MatrixFormat::Csv => {
            let text = std::str::from_utf8(&bytes).map_err(|e| Error::parse(path, format!("not UTF-8: {e}")))?;
            parse_csv(text).map_err(|msg| Error::parse(path, msg))
        }
        MatrixFormat::Binary => parse_binary(&bytes).map_err(|msg| Error::parse(path, msg)),
    }
}

pub fn write_raw_matrix(path: &Path, m: &Matrix, format: MatrixFormat) -> Result<()> {
    let bytes = match format {
        MatrixFormat::Csv => format_csv(m).into_bytes(),
        MatrixFormat::Binary => encode_binary(m)?,
    };
    write_atomic(path, &bytes)
}

pub fn parse_csv(text: &str) -> std::result::Result<Matrix, String> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (col, field) in line.split(',').enumerate() {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| format!("line {}, field {}: cannot parse {:?}", lineno + 1, col + 1, field))?;
            if !v.is_finite() {
                return Err(format!(
                    "line {}, field {}: non-finite value {field}",
                    lineno + 1,
                    col + 1
                ));
            }
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(format!(
                    "line {}: expected {} fields, found {}",
                    lineno + 1,
                    first.len(),
                    row.len()
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err("no data rows".into());
    }
    let (r, c) = (rows.len(), rows[0].len());
    Ok(Matrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn format_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let line: Vec<String> = (0..m.ncols()).map(|j| format!("{:.16e}", m[(i, j)])).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_binary(bytes: &[u8]) -> std::result::Result<Matrix, String> {
    if bytes.len() < HEADER_LEN {
        return Err(format!(
            "truncated header: expected {HEADER_LEN} bytes, found {}",
            bytes.len()
        ));
    }
    if &bytes[..4] != BINARY_MAGIC {
        return Err(format!("bad magic {:?}, expected \"LRTM\"", &bytes[..4]));
    }
    let rows = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
    let cols = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes")) as usize;
    if rows == 0 || cols == 0 {
        return Err(format!("empty matrix {rows}x{cols}"));
    }
    let expected = HEADER_LEN + rows * cols * 8;
    if bytes.len() != expected {
        return Err(format!(
            "payload size mismatch for {rows}x{cols}: expected {expected} bytes, found {}",
            bytes.len()
        ));
    }
    let mut m = Matrix::zeros(rows, cols);
    for (k, chunk) in bytes[HEADER_LEN..].chunks_exact(8).enumerate() {
        let v = f64::from_le_bytes(chunk.try_into().expect("8 bytes"));
        let (i, j) = (k / cols, k % cols);
        if !v.is_finite() {
            return Err(format!(
                "non-finite value at row {i}, col {j} (byte offset {})",
                HEADER_LEN + 8 * k
            ));
        }
        m[(i, j)] = v;
    }
    Ok(m)
}

pub fn encode_binary(m: &Matrix) -> Result<Vec<u8>> {
    let (rows, cols) = m.shape();
    let r32 = u32::try_from(rows).map_err(|_| Error::param("too many rows for binary format"))?;
    let c32 = u32::try_from(cols).map_err(|_| Error::param("too many cols for binary format"))?;
    let mut out = Vec::with_capacity(HEADER_LEN + rows * cols * 8);
    out.extend_from_slice(BINARY_MAGIC);
    out.extend_from_slice(&r32.to_le_bytes());
    out.extend_from_slice(&c32.to_le_bytes());
    for i in 0..rows {
        for j in 0..cols {
            out.extend_from_slice(&m[(i, j)].to_le_bytes());
        }
    }
    Ok(out)
}

/// One integer label per line.
pub fn load_labels(path: &Path) -> Result<Vec<i64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text).map_err(|msg| Error::parse(path, msg))
}

pub fn parse_labels(text: &str) -> std::result::Result<Vec<i64>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<i64>()
                .map_err(|_| format!("line {}: not an integer: {:?}", i + 1, l))
        })
        .collect()
}

pub fn save_labels(path: &Path, labels: &[usize]) -> Result<()> {
    let mut text = String::with_capacity(labels.len() * 3);
    for l in labels {
        text.push_str(&l.to_string());
        text.push('\n');
    }
    write_atomic(path, text.as_bytes())
}

/// Write through a sibling temp file and rename over the destination.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::param(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
