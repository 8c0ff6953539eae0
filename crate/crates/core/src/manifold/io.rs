//! Binary field dumps.
//!
//! Layout (all little-endian):
//!
//! | bytes | content                         |
//! |-------|---------------------------------|
//! | 8     | magic `SBPPFLD1`                |
//! | 12    | resolutions, 3 × `u32`          |
//! | 24    | side lengths, 3 × `f64`         |
//! | 8·N   | values, row-major `f64`         |

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::torus::TorusSpec;

pub const MAGIC: [u8; 8] = *b"SBPPFLD1";

pub fn write_field<W: Write>(writer: &mut W, field: &ScalarField) -> std::io::Result<()> {
    writer.write_all(&MAGIC)?;
    for n in field.spec().resolution() {
        writer.write_all(&(n as u32).to_le_bytes())?;
    }
    for l in field.spec().side_lengths() {
        writer.write_all(&l.to_le_bytes())?;
    }
    for v in field.values() {
        writer.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field<R: Read>(reader: &mut R) -> Result<ScalarField> {
    let io_err = |e: std::io::Error| SbppError::Format(format!("truncated field stream: {e}"));
    let mut magic = [0u8; 8];
    reader.read_exact(&mut magic).map_err(io_err)?;
    if magic != MAGIC {
        return Err(SbppError::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&magic),
            "SBPPFLD1"
        )));
    }
    let mut res = [0usize; 3];
    let mut b4 = [0u8; 4];
    for r in res.iter_mut() {
        reader.read_exact(&mut b4).map_err(io_err)?;
        *r = u32::from_le_bytes(b4) as usize;
    }
    let mut sides = [0f64; 3];
    let mut b8 = [0u8; 8];
    for s in sides.iter_mut() {
        reader.read_exact(&mut b8).map_err(io_err)?;
        *s = f64::from_le_bytes(b8);
    }
    let spec = TorusSpec::new(sides, res).map_err(|e| SbppError::Format(e.to_string()))?;
    let mut raw = vec![0u8; 8 * spec.len()];
    reader.read_exact(&mut raw).map_err(io_err)?;
    let values = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    // refuse trailing garbage
    let mut probe = [0u8; 1];
    if reader.read(&mut probe).map_err(io_err)? != 0 {
        return Err(SbppError::Format("trailing bytes after field values".into()));
    }
    ScalarField::new(spec, values)
}

pub fn save_field(path: impl AsRef<Path>, field: &ScalarField) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| SbppError::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_field(&mut w, field)
        .and_then(|_| w.flush())
        .map_err(|e| SbppError::io(path, e))
}

pub fn load_field(path: impl AsRef<Path>) -> Result<ScalarField> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| SbppError::io(path, e))?;
    read_field(&mut BufReader::new(file))
}
