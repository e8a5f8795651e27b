//! Binary field snapshots.
//!
//! Little-endian layout: `b"GBSQ"`, `u32` version (1), `u32` n, `f64` t,
//! `f64` σ, γ, ν, κ, α, β, then n² `f64` of ω and n² `f64` of θ, both with
//! `x₁` varying fastest.

use std::fs;
use std::path::Path;

use crate::dynamics::{State, SystemParams};
use crate::error::{Error, Result};
use crate::spectral::{Grid, ScalarField};

pub const SNAPSHOT_MAGIC: [u8; 4] = *b"GBSQ";
pub const SNAPSHOT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 8 * 7;

/// Size in bytes of a snapshot on an `n × n` grid.
pub fn snapshot_len(n: usize) -> usize {
    HEADER_LEN + 16 * n * n
}

pub fn encode_snapshot(state: &State, params: &SystemParams) -> Vec<u8> {
    let n = state.grid().n();
    let mut out = Vec::with_capacity(snapshot_len(n));
    out.extend_from_slice(&SNAPSHOT_MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    for v in [
        state.t,
        params.sigma,
        params.gamma,
        params.nu,
        params.kappa,
        params.alpha,
        params.beta,
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in state.omega.values().iter().chain(state.theta.values()) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    debug_assert_eq!(out.len(), snapshot_len(n));
    out
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<(State, SystemParams)> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "truncated header: {} bytes, need {HEADER_LEN}",
            bytes.len()
        )));
    }
    if bytes[..4] != SNAPSHOT_MAGIC {
        return Err(Error::Format(format!("bad magic {:?}", &bytes[..4])));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes"));
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
    let version = u32_at(4);
    if version != SNAPSHOT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n = u32_at(8) as usize;
    let grid = Grid::new(n).map_err(|_| Error::Format(format!("invalid grid size {n}")))?;
    let expected = snapshot_len(n);
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "payload is {} bytes, expected {expected} for n={n}",
            bytes.len()
        )));
    }
    let h: Vec<f64> = (0..7).map(|i| f64_at(12 + 8 * i)).collect();
    let params = SystemParams {
        sigma: h[1],
        gamma: h[2],
        nu: h[3],
        kappa: h[4],
        alpha: h[5],
        beta: h[6],
    };
    let read_field = |start: usize| -> Result<ScalarField> {
        let values = (0..n * n).map(|i| f64_at(start + 8 * i)).collect();
        ScalarField::new(&grid, values)
    };
    let omega = read_field(HEADER_LEN)?;
    let theta = read_field(HEADER_LEN + 8 * n * n)?;
    Ok((State::new(h[0], omega, theta)?, params))
}

pub fn write_snapshot(path: impl AsRef<Path>, state: &State, params: &SystemParams) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_snapshot(state, params);
    fs::write(path, &bytes).map_err(|e| Error::io(path, e))?;
    let written = fs::metadata(path).map_err(|e| Error::io(path, e))?.len() as usize;
    if written != snapshot_len(state.grid().n()) {
        return Err(Error::Format(format!(
            "{} holds {written} bytes after write, expected {}",
            path.display(),
            snapshot_len(state.grid().n())
        )));
    }
    Ok(())
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<(State, SystemParams)> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_snapshot(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_arithmetic() {
        assert_eq!(snapshot_len(64), 4 + 4 + 4 + 8 * 7 + 16 * 64 * 64);
        assert_eq!(snapshot_len(64), 65_604);
    }

    #[test]
    fn bad_magic_and_truncation() {
        let g = Grid::new(8).unwrap();
        let s = State::zero(&g);
        let mut bytes = encode_snapshot(&s, &SystemParams::default());
        assert!(decode_snapshot(&bytes).is_ok());
        bytes.pop();
        assert!(matches!(decode_snapshot(&bytes), Err(Error::Format(_))));
        bytes.push(0);
        bytes[0] = b'X';
        let err = decode_snapshot(&bytes).unwrap_err();
        assert!(err.to_string().contains("magic"));
    }
}
