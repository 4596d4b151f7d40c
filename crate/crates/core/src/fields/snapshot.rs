//! Binary snapshot format, little-endian:
//!
//! ```text
//! "EKF1" | u32 version = 1 | u32 dim | u32 N | f64 L | f64 t | u32 field_count
//! field_count × N^dim f64, row-major, in the order ρ, m_1, …, m_d
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::constitutive::EKState;
use crate::error::{Error, Result};

use super::field::{ScalarField, VectorField};
use super::grid::TorusGrid;

pub const MAGIC: &[u8; 4] = b"EKF1";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 8 + 8 + 4;

/// Raw contents of a snapshot file.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub grid: TorusGrid,
    pub time: f64,
    pub fields: Vec<ScalarField>,
}

pub fn encode(grid: &TorusGrid, time: f64, fields: &[&ScalarField]) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_LEN + fields.len() * grid.len() * 8);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(grid.dim() as u32).to_le_bytes());
    buf.extend_from_slice(&(grid.points_per_axis() as u32).to_le_bytes());
    buf.extend_from_slice(&grid.length().to_le_bytes());
    buf.extend_from_slice(&time.to_le_bytes());
    buf.extend_from_slice(&(fields.len() as u32).to_le_bytes());
    for f in fields {
        for v in f.values() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    buf
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<Snapshot> {
    let fail = |reason: String| Error::Format {
        path: path.to_path_buf(),
        reason,
    };
    if bytes.len() < HEADER_LEN {
        return Err(fail(format!("truncated header ({} bytes)", bytes.len())));
    }
    if &bytes[0..4] != MAGIC {
        return Err(fail(format!("bad magic {:?}", &bytes[0..4])));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(fail(format!("unsupported version {version}")));
    }
    let dim = u32_at(8) as usize;
    let n = u32_at(12) as usize;
    let length = f64_at(16);
    let time = f64_at(24);
    let count = u32_at(32) as usize;
    let grid = TorusGrid::new(dim, n, length).map_err(|e| fail(e.to_string()))?;
    let expected = HEADER_LEN + count * grid.len() * 8;
    if bytes.len() != expected {
        return Err(fail(format!(
            "expected {expected} bytes for {count} fields, found {}",
            bytes.len()
        )));
    }
    let fields = (0..count)
        .map(|k| {
            let start = HEADER_LEN + k * grid.len() * 8;
            let values = (0..grid.len()).map(|i| f64_at(start + 8 * i)).collect();
            ScalarField::new(grid, values).map_err(|e| fail(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Snapshot { grid, time, fields })
}

pub fn read_fields(path: impl AsRef<Path>) -> Result<Snapshot> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes, path)
}

pub fn write_snapshot(state: &EKState, time: f64, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut fields = vec![state.density()];
    fields.extend(state.momentum().components());
    let bytes = encode(state.grid(), time, &fields);
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&bytes).map_err(|e| Error::io(path, e))
}

/// Read an [`EKState`] back. The density floor is not re-checked here so that
/// any stored state can be inspected.
pub fn read_snapshot(path: impl AsRef<Path>) -> Result<(EKState, f64)> {
    let path = path.as_ref();
    let snap = read_fields(path)?;
    let dim = snap.grid.dim();
    if snap.fields.len() != 1 + dim {
        return Err(Error::Format {
            path: path.to_path_buf(),
            reason: format!("dimension mismatch: {} fields for a {dim}-d state", snap.fields.len()),
        });
    }
    let mut fields = snap.fields.into_iter();
    let rho = fields.next().unwrap();
    let m = VectorField::new(fields.collect())?;
    Ok((EKState::from_parts_unchecked(rho, m), snap.time))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state() -> EKState {
        let g = TorusGrid::new(2, 8, 3.0).unwrap();
        let rho = ScalarField::from_fn(g, |x, y| 1.0 + 0.1 * (x * y).sin());
        let m1 = ScalarField::from_fn(g, |x, _| x.cos() / 3.0);
        let m2 = ScalarField::from_fn(g, |_, y| -y.sin() * 1e-300);
        EKState::from_parts_unchecked(rho, VectorField::new(vec![m1, m2]).unwrap())
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.ekf");
        let s = state();
        write_snapshot(&s, 0.125, &path).unwrap();
        let (back, t) = read_snapshot(&path).unwrap();
        assert_eq!(t, 0.125);
        assert_eq!(back, s);
    }

    #[test]
    fn header_layout() {
        let s = state();
        let bytes = encode(s.grid(), 2.5, &[s.density()]);
        assert_eq!(&bytes[..4], b"EKF1");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 8);
        assert_eq!(f64::from_le_bytes(bytes[16..24].try_into().unwrap()), 3.0);
        assert_eq!(f64::from_le_bytes(bytes[24..32].try_into().unwrap()), 2.5);
        assert_eq!(u32::from_le_bytes(bytes[32..36].try_into().unwrap()), 1);
        assert_eq!(bytes.len(), 36 + 64 * 8);
    }

    #[test]
    fn truncated_file_is_a_format_error() {
        let s = state();
        let mut bytes = encode(s.grid(), 0.0, &[s.density()]);
        bytes.truncate(bytes.len() - 3);
        assert!(matches!(decode(&bytes, Path::new("x")), Err(Error::Format { .. })));
        assert!(matches!(
            decode(&bytes[..10], Path::new("x")),
            Err(Error::Format { .. })
        ));
    }

    #[test]
    fn wrong_magic_is_rejected() {
        let s = state();
        let mut bytes = encode(s.grid(), 0.0, &[s.density()]);
        bytes[0] = b'X';
        let err = decode(&bytes, Path::new("x")).unwrap_err();
        assert!(err.to_string().contains("magic"));
    }

    #[test]
    fn field_count_must_match_dimension() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.ekf");
        let s = state();
        fs::write(&path, encode(s.grid(), 0.0, &[s.density()])).unwrap();
        let err = read_snapshot(&path).unwrap_err();
        assert!(err.to_string().contains("dimension mismatch"));
    }
}
