//! Binary dump of a [`CsrMatrix`] for debugging.
//!
//! Layout, all little-endian:
//!
//! | field     | type            |
//! |-----------|-----------------|
//! | magic     | `b"DSCSR\0\0\0"` |
//! | version   | u32 (= 1)       |
//! | dim       | u64             |
//! | nnz       | u64             |
//! | row_ptr   | (dim+1) x u64   |
//! | col_idx   | nnz x u64       |
//! | values    | nnz x (f64 re, f64 im) |

use std::io::{Read, Write};

use num_complex::Complex64;

use super::csr::CsrMatrix;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"DSCSR\0\0\0";
pub const VERSION: u32 = 1;

pub fn write_csr<W: Write>(m: &CsrMatrix, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(m.dim() as u64).to_le_bytes())?;
    w.write_all(&(m.nnz() as u64).to_le_bytes())?;
    for &p in m.row_ptr() {
        w.write_all(&(p as u64).to_le_bytes())?;
    }
    for &c in m.col_idx() {
        w.write_all(&(c as u64).to_le_bytes())?;
    }
    for v in m.values() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}

pub fn read_csr<R: Read>(mut r: R) -> Result<CsrMatrix> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Io("not a CSR dump (bad magic)".into()));
    }
    let mut v = [0u8; 4];
    r.read_exact(&mut v)?;
    let version = u32::from_le_bytes(v);
    if version != VERSION {
        return Err(Error::Io(format!("unsupported CSR dump version {version}")));
    }
    let dim = read_u64(&mut r)? as usize;
    let nnz = read_u64(&mut r)? as usize;
    let row_ptr = (0..=dim).map(|_| read_u64(&mut r).map(|x| x as usize)).collect::<Result<Vec<_>>>()?;
    let col_idx = (0..nnz).map(|_| read_u64(&mut r).map(|x| x as usize)).collect::<Result<Vec<_>>>()?;
    let values = (0..nnz)
        .map(|_| Ok(Complex64::new(read_f64(&mut r)?, read_f64(&mut r)?)))
        .collect::<Result<Vec<_>>>()?;
    CsrMatrix::from_raw(dim, row_ptr, col_idx, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_diag::{build_hamiltonian, HilbertSpace};
    use crate::model::ModelParams;
    use crate::par::Execution;

    #[test]
    fn round_trip() {
        let p = ModelParams::new(1.0, 0.015, 0.3, 0.0168, 3).unwrap();
        let s = HilbertSpace::new(9, 3).unwrap();
        let h = build_hamiltonian(&p, &s, Execution::Sequential).unwrap();
        let mut buf = Vec::new();
        write_csr(&h, &mut buf).unwrap();
        assert_eq!(&buf[..8], MAGIC);
        let back = read_csr(buf.as_slice()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn rejects_bad_magic_and_truncation() {
        assert!(read_csr(&b"NOTACSR\0\x01\0\0\0"[..]).is_err());
        let p = ModelParams::new(1.0, 0.015, 0.3, 0.0, 1).unwrap();
        let h = build_hamiltonian(&p, &HilbertSpace::new(4, 1).unwrap(), Execution::Sequential).unwrap();
        let mut buf = Vec::new();
        write_csr(&h, &mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(read_csr(buf.as_slice()).is_err());
    }
}
