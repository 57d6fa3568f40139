//! CSMAT1 binary matrix files.
//!
//! Layout (all integers little-endian):
//!
//! | bytes | content                                   |
//! |-------|-------------------------------------------|
//! | 8     | magic `CSMAT1\0\0`                         |
//! | 4     | rows (u32)                                |
//! | 4     | cols (u32)                                |
//! | 1     | dtype tag, `0x01` = complex128            |
//! | 3     | reserved, zero                            |
//! | 16·n  | entries row-major, `f64` real then imag   |

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

pub const MAGIC: &[u8; 8] = b"CSMAT1\0\0";
pub const DTYPE_COMPLEX128: u8 = 0x01;
const HEADER_LEN: usize = 20;

pub fn encode(m: &ComplexMatrix) -> Result<Vec<u8>> {
    let rows = u32::try_from(m.rows()).map_err(|_| Error::Format("row count exceeds u32".into()))?;
    let cols = u32::try_from(m.cols()).map_err(|_| Error::Format("column count exceeds u32".into()))?;
    let mut buf = Vec::with_capacity(HEADER_LEN + 16 * m.rows() * m.cols());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&rows.to_le_bytes());
    buf.extend_from_slice(&cols.to_le_bytes());
    buf.push(DTYPE_COMPLEX128);
    buf.extend_from_slice(&[0, 0, 0]);
    for z in m.to_row_major() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    Ok(buf)
}

pub fn decode(bytes: &[u8]) -> Result<ComplexMatrix> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "file is {} bytes, shorter than the {HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if &bytes[..8] != MAGIC {
        return Err(Error::Format("bad magic bytes".into()));
    }
    let rows = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    if bytes[16] != DTYPE_COMPLEX128 {
        return Err(Error::Format(format!("unsupported dtype tag {:#04x}", bytes[16])));
    }
    if bytes[17..20] != [0, 0, 0] {
        return Err(Error::Format("reserved header bytes are not zero".into()));
    }
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(16))
        .ok_or_else(|| Error::Format("matrix dimensions overflow".into()))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != expected {
        return Err(Error::Format(format!(
            "payload is {} bytes, expected {expected} for a {rows}x{cols} matrix",
            payload.len()
        )));
    }
    let entries = payload
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    ComplexMatrix::from_row_major(rows, cols, entries).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_matrix<W: Write>(mut w: W, m: &ComplexMatrix) -> Result<()> {
    w.write_all(&encode(m)?)?;
    Ok(())
}

pub fn read_matrix<R: Read>(mut r: R) -> Result<ComplexMatrix> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    decode(&bytes)
}

pub fn write_matrix_file(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    fs::write(path, encode(m)?)?;
    Ok(())
}

pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    decode(&fs::read(path)?)
}
