//! Binary state checkpoints.
//!
//! Layout, all integers and floats little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4     | magic `TRNS` |
//! | 4     | format version (`u32`) |
//! | 4     | `N` (`u32`) |
//! | 8     | `L` (`f64`) |
//! | 8     | `nu` (`f64`) |
//! | 8     | `t` (`f64`) |
//! | 8     | `z` (`f64`) |
//! | 8     | step counter (`u64`) |
//! | 8     | payload length in complex values, `2 N^2` (`u64`) |
//! | 16 each | payload |
//!
//! The payload holds the x-velocity coefficients followed by the y-velocity
//! coefficients, each as `N^2` pairs `(re, im)` of `f64` in row-major FFT
//! order: flat index `a N + b` is the mode `(j_x, j_y)` with
//! `j_x = a` for `a <= N/2` and `a - N` otherwise, likewise for `b`.
//! The two-step history of the ETD2 scheme is not stored; a restarted run
//! bootstraps with one exponential Euler step.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use super::IoError;
use crate::dynamics::State;
use crate::spectral::{SpectralField, WaveGrid};

pub const CHECKPOINT_MAGIC: [u8; 4] = *b"TRNS";
pub const CHECKPOINT_VERSION: u32 = 1;
const HEADER_BYTES: usize = 4 + 4 + 4 + 8 * 6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckpointHeader {
    pub version: u32,
    pub n: u32,
    pub length: f64,
    pub nu: f64,
    pub t: f64,
    pub z: f64,
    pub step: u64,
    /// Number of complex coefficients in the payload.
    pub payload_len: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub header: CheckpointHeader,
    pub state: State,
}

pub fn write_checkpoint(state: &State, nu: f64, path: &Path) -> Result<(), IoError> {
    let grid = state.v.grid();
    let len = grid.len();
    let mut buf = Vec::with_capacity(HEADER_BYTES + 32 * len);
    buf.extend_from_slice(&CHECKPOINT_MAGIC);
    buf.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(grid.n() as u32).to_le_bytes());
    for x in [grid.length(), nu, state.t, state.z] {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    buf.extend_from_slice(&state.step.to_le_bytes());
    buf.extend_from_slice(&(2 * len as u64).to_le_bytes());
    for c in 0..2 {
        for z in state.v.component(c) {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    fs::write(path, buf).map_err(|e| IoError::file(path, e))
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const K: usize>(&mut self) -> [u8; K] {
        let out: [u8; K] = self.bytes[self.pos..self.pos + K].try_into().unwrap();
        self.pos += K;
        out
    }
    fn u32(&mut self) -> u32 {
        u32::from_le_bytes(self.take())
    }
    fn u64(&mut self) -> u64 {
        u64::from_le_bytes(self.take())
    }
    fn f64(&mut self) -> f64 {
        f64::from_le_bytes(self.take())
    }
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint, IoError> {
    let bytes = fs::read(path).map_err(|e| IoError::file(path, e))?;
    let truncated = |expected| IoError::Truncated {
        path: path.to_path_buf(),
        expected,
        found: bytes.len(),
    };
    if bytes.len() < 4 {
        return Err(truncated(HEADER_BYTES));
    }
    if bytes[..4] != CHECKPOINT_MAGIC {
        return Err(IoError::BadMagic { path: path.to_path_buf() });
    }
    if bytes.len() < HEADER_BYTES {
        return Err(truncated(HEADER_BYTES));
    }
    let mut r = Reader { bytes: &bytes, pos: 4 };
    let version = r.u32();
    if version != CHECKPOINT_VERSION {
        return Err(IoError::VersionMismatch {
            path: path.to_path_buf(),
            found: version,
            expected: CHECKPOINT_VERSION,
        });
    }
    let header = CheckpointHeader {
        version,
        n: r.u32(),
        length: r.f64(),
        nu: r.f64(),
        t: r.f64(),
        z: r.f64(),
        step: r.u64(),
        payload_len: r.u64(),
    };
    let invalid = |message: String| IoError::Invalid {
        path: path.to_path_buf(),
        message,
    };
    let grid = WaveGrid::new(header.length, header.n as usize).map_err(|e| invalid(e.to_string()))?;
    let len = grid.len();
    if header.payload_len != 2 * len as u64 {
        return Err(invalid(format!(
            "payload length {} does not match N = {}",
            header.payload_len, header.n
        )));
    }
    let expected = HEADER_BYTES + 32 * len;
    if bytes.len() < expected {
        return Err(truncated(expected));
    }
    if bytes.len() > expected {
        return Err(invalid(format!("{} trailing bytes", bytes.len() - expected)));
    }
    let mut read_component = || -> Vec<Complex64> { (0..len).map(|_| Complex64::new(r.f64(), r.f64())).collect() };
    let x = read_component();
    let y = read_component();
    let v = SpectralField::from_components(&grid, x, y).map_err(|e| invalid(e.to_string()))?;
    let mut state = State::new(header.t, v).with_z(header.z);
    state.step = header.step;
    Ok(Checkpoint { header, state })
}
