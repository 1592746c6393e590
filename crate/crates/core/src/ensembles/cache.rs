//! Binary cache of eigen-systems.
//!
//! Layout, all little-endian: 8-byte magic `MFXEIG01`, `u32` version,
//! `u64` N, `u64` member count, `u64` seed, `f64` α, `f64` v². Then for each
//! member: N eigenvalues as `f64`, followed by the eigenvector matrix in
//! column-major order with each entry written as `re, im`.

use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::EnsembleSpec;
use crate::error::{Error, Result};
use crate::linalg::EigenSystem;
use crate::{c64, Mat};

const MAGIC: &[u8; 8] = b"MFXEIG01";
const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheHeader {
    pub n_dim: usize,
    pub n_members: usize,
    pub seed: u64,
    pub alpha: f64,
    pub v2: f64,
}

impl From<&EnsembleSpec> for CacheHeader {
    fn from(s: &EnsembleSpec) -> Self {
        CacheHeader {
            n_dim: s.n_dim,
            n_members: s.n_members,
            seed: s.seed,
            alpha: s.alpha,
            v2: s.v2,
        }
    }
}

/// Incremental cache writer; members are appended in order.
pub struct CacheWriter {
    writer: BufWriter<std::fs::File>,
    header: CacheHeader,
    written: usize,
}

impl CacheWriter {
    pub fn create(path: &Path, spec: &EnsembleSpec) -> Result<Self> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        for v in [spec.n_dim as u64, spec.n_members as u64, spec.seed] {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&spec.alpha.to_le_bytes())?;
        w.write_all(&spec.v2.to_le_bytes())?;
        Ok(CacheWriter {
            writer: w,
            header: spec.into(),
            written: 0,
        })
    }

    pub fn push(&mut self, sys: &EigenSystem) -> Result<()> {
        if sys.dim() != self.header.n_dim {
            return Err(Error::DimensionMismatch {
                expected: self.header.n_dim,
                found: sys.dim(),
            });
        }
        if self.written == self.header.n_members {
            return Err(Error::Cache(format!(
                "header declares only {} members",
                self.header.n_members
            )));
        }
        let w = &mut self.writer;
        for &e in &sys.eigenvalues {
            w.write_all(&e.to_le_bytes())?;
        }
        for j in 0..sys.dim() {
            for z in sys.eigenvector(j) {
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
        self.written += 1;
        Ok(())
    }

    /// Flush, checking that every declared member was written.
    pub fn finish(mut self) -> Result<()> {
        if self.written != self.header.n_members {
            return Err(Error::Cache(format!(
                "wrote {} members, header declares {}",
                self.written, self.header.n_members
            )));
        }
        self.writer.flush()?;
        Ok(())
    }
}

/// Write `systems` (exactly `spec.n_members` of them) to `path`.
pub fn write_cache<I>(path: &Path, spec: &EnsembleSpec, systems: I) -> Result<()>
where
    I: IntoIterator<Item = Result<EigenSystem>>,
{
    let mut w = CacheWriter::create(path, spec)?;
    for sys in systems {
        w.push(&sys?)?;
    }
    w.finish()
}

/// Streaming reader over a cache file.
pub struct CacheReader {
    header: CacheHeader,
    reader: BufReader<std::fs::File>,
    next: usize,
}

impl CacheReader {
    pub fn header(&self) -> &CacheHeader {
        &self.header
    }
}

fn read_array<const K: usize>(r: &mut impl Read) -> Result<[u8; K]> {
    let mut buf = [0u8; K];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Cache(format!("truncated cache: {e}")))?;
    Ok(buf)
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    Ok(f64::from_le_bytes(read_array::<8>(r)?))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    Ok(u64::from_le_bytes(read_array::<8>(r)?))
}

/// Open a cache file and validate its header.
pub fn read_cache(path: &Path) -> Result<CacheReader> {
    let mut reader = BufReader::new(std::fs::File::open(path)?);
    if &read_array::<8>(&mut reader)? != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = u32::from_le_bytes(read_array::<4>(&mut reader)?);
    if version != VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let n_dim = read_u64(&mut reader)? as usize;
    let n_members = read_u64(&mut reader)? as usize;
    let seed = read_u64(&mut reader)?;
    let alpha = read_f64(&mut reader)?;
    let v2 = read_f64(&mut reader)?;
    Ok(CacheReader {
        header: CacheHeader {
            n_dim,
            n_members,
            seed,
            alpha,
            v2,
        },
        reader,
        next: 0,
    })
}

impl Iterator for CacheReader {
    type Item = Result<EigenSystem>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.header.n_members {
            return None;
        }
        self.next += 1;
        let n = self.header.n_dim;
        let mut read = || -> Result<EigenSystem> {
            let eigenvalues = (0..n).map(|_| read_f64(&mut self.reader)).collect::<Result<Vec<_>>>()?;
            let mut v = Mat::<c64>::zeros(n, n);
            for j in 0..n {
                for i in 0..n {
                    let re = read_f64(&mut self.reader)?;
                    let im = read_f64(&mut self.reader)?;
                    v[(i, j)] = c64::new(re, im);
                }
            }
            Ok(EigenSystem {
                eigenvalues,
                eigenvectors: v,
            })
        };
        Some(read())
    }
}
