//! Binary serialization of [`TransformFactors`]: the HTF1 container.
//!
//! Layout: magic `"HTF1"`, then N as u64 little-endian, then x, d, and Q
//! as 64-bit little-endian floats, with Q written row-major.  In memory Q
//! is column-major, so reading and writing transpose.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::transform::TransformFactors;

const MAGIC: &[u8; 4] = b"HTF1";

/// Serialize factors to `path`, overwriting any existing file.
pub fn write_factors<P: AsRef<Path>>(path: P, f: &TransformFactors) -> Result<()> {
    let n = f.n();
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(MAGIC)?;
    out.write_all(&(n as u64).to_le_bytes())?;
    write_f64s(&mut out, f.nodes())?;
    write_f64s(&mut out, f.d())?;
    let q = f.q();
    let mut row = vec![0.0; n];
    for i in 0..n {
        for (j, r) in row.iter_mut().enumerate() {
            *r = q[j * n + i];
        }
        write_f64s(&mut out, &row)?;
    }
    out.flush()?;
    Ok(())
}

/// Deserialize factors, validating structure and basic plausibility
/// (strictly ascending finite nodes, positive finite d).
pub fn read_factors<P: AsRef<Path>>(path: P) -> Result<TransformFactors> {
    let mut file = File::open(path)?;
    let mut header = [0u8; 12];
    file.read_exact(&mut header)
        .map_err(|_| Error::Format("file too short for HTF1 header".into()))?;
    if &header[..4] != MAGIC {
        return Err(Error::Format("bad magic; not an HTF1 file".into()));
    }
    let n = u64::from_le_bytes(header[4..12].try_into().unwrap());
    if n == 0 {
        return Err(Error::Format("HTF1 size field is zero".into()));
    }
    let n = usize::try_from(n).map_err(|_| Error::Format("HTF1 size field overflows".into()))?;

    let expected = (n as u128) * (n as u128 + 2) * 8;
    let mut body = Vec::new();
    file.read_to_end(&mut body)?;
    if body.len() as u128 != expected {
        return Err(Error::Format(format!(
            "HTF1 payload is {} bytes, expected {expected} for N = {n}",
            body.len()
        )));
    }

    let mut values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    let nodes: Vec<f64> = values.by_ref().take(n).collect();
    let d: Vec<f64> = values.by_ref().take(n).collect();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            q[j * n + i] = values.next().unwrap();
        }
    }

    if nodes.iter().any(|x| !x.is_finite()) || nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Format(
            "HTF1 nodes are not strictly ascending finite values".into(),
        ));
    }
    if d.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::Format("HTF1 d entries must be finite and positive".into()));
    }
    if q.iter().any(|v| !v.is_finite()) {
        return Err(Error::Format("HTF1 Q entries must be finite".into()));
    }

    Ok(TransformFactors::from_parts(n, nodes, d, q))
}

fn write_f64s<W: Write>(out: &mut W, values: &[f64]) -> Result<()> {
    let mut buf = Vec::with_capacity(values.len() * 8);
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::build_golub_welsch;

    #[test]
    fn round_trip_is_bit_exact() {
        let f = build_golub_welsch(17).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("factors.htf1");
        write_factors(&path, &f).unwrap();
        let g = read_factors(&path).unwrap();
        assert_eq!(f.n(), g.n());
        assert_eq!(f.nodes(), g.nodes());
        assert_eq!(f.d(), g.d());
        assert_eq!(f.q(), g.q());
    }

    #[test]
    fn rejects_bad_magic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.htf1");
        std::fs::write(&path, b"NOPE\x01\x00\x00\x00\x00\x00\x00\x00").unwrap();
        assert!(matches!(read_factors(&path), Err(Error::Format(_))));
    }

    #[test]
    fn rejects_truncation_and_trailing_garbage() {
        let f = build_golub_welsch(5).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("factors.htf1");
        write_factors(&path, &f).unwrap();

        let bytes = std::fs::read(&path).unwrap();
        let truncated = dir.path().join("short.htf1");
        std::fs::write(&truncated, &bytes[..bytes.len() - 3]).unwrap();
        assert!(matches!(read_factors(&truncated), Err(Error::Format(_))));

        let padded = dir.path().join("long.htf1");
        let mut extra = bytes.clone();
        extra.extend_from_slice(&[0u8; 8]);
        std::fs::write(&padded, &extra).unwrap();
        assert!(matches!(read_factors(&padded), Err(Error::Format(_))));
    }

    #[test]
    fn rejects_zero_size_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("zero.htf1");
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"HTF1");
        bytes.extend_from_slice(&0u64.to_le_bytes());
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_factors(&path), Err(Error::Format(_))));
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            read_factors("/nonexistent/factors.htf1"),
            Err(Error::Io(_))
        ));
    }
}
