//! Binary checkpoint of a resolution, one record per completed cell.
//!
//! Layout: magic `ASRV1`, format version as `u32` LE, then records of
//! `s`, `t`, generator count, and per generator a bit length, a word count
//! and the words, all `u64` LE. Coordinate `i` is bit `i % 64` of word
//! `i / 64`. A truncated final record is dropped on load.

use std::fs::{File, OpenOptions};
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use super::Resolution;
use crate::f2linalg::F2Vector;

pub const MAGIC: &[u8; 5] = b"ASRV1";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("not a resolution checkpoint")]
    BadMagic,
    #[error("unsupported checkpoint version {0}")]
    BadVersion(u32),
    #[error("record ({s}, {t}) arrives before its dependencies")]
    OutOfOrder { s: u32, t: u32 },
    #[error("record ({s}, {t}) has a row of length {found}, expected {expected}")]
    BadRow { s: u32, t: u32, expected: usize, found: usize },
}

/// Generators added in one cell, as boundary vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellRecord {
    pub s: u32,
    pub t: u32,
    pub boundaries: Vec<F2Vector>,
}

impl CellRecord {
    pub fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for x in [u64::from(self.s), u64::from(self.t), self.boundaries.len() as u64] {
            w.write_all(&x.to_le_bytes())?;
        }
        for b in &self.boundaries {
            w.write_all(&(b.len() as u64).to_le_bytes())?;
            w.write_all(&(b.words().len() as u64).to_le_bytes())?;
            for word in b.words() {
                w.write_all(&word.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// `Ok(None)` at a clean end of input or a truncated record.
    pub fn read_from<R: Read>(r: &mut R) -> io::Result<Option<CellRecord>> {
        let read_u64 = |r: &mut R| -> io::Result<Option<u64>> {
            let mut buf = [0u8; 8];
            match r.read_exact(&mut buf) {
                Ok(()) => Ok(Some(u64::from_le_bytes(buf))),
                Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => Ok(None),
                Err(e) => Err(e),
            }
        };
        macro_rules! next {
            () => {
                match read_u64(r)? {
                    Some(x) => x,
                    None => return Ok(None),
                }
            };
        }
        let s = next!() as u32;
        let t = next!() as u32;
        let count = next!();
        let mut boundaries = Vec::new();
        for _ in 0..count {
            let bits = next!() as usize;
            let n_words = next!() as usize;
            if n_words != bits.div_ceil(64) {
                return Err(io::Error::new(io::ErrorKind::InvalidData, "word count mismatch"));
            }
            let mut words = Vec::with_capacity(n_words);
            for _ in 0..n_words {
                words.push(next!());
            }
            boundaries.push(F2Vector::from_words(bits, words));
        }
        Ok(Some(CellRecord { s, t, boundaries }))
    }
}

pub fn write_header<W: Write>(w: &mut W) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())
}

/// Appends records to a checkpoint file, creating it with a header if
/// missing or empty.
pub struct CheckpointWriter {
    out: BufWriter<File>,
}

impl CheckpointWriter {
    pub fn open(path: &Path) -> Result<Self, CheckpointError> {
        let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut out = BufWriter::new(file);
        if fresh {
            write_header(&mut out)?;
            out.flush()?;
        }
        Ok(CheckpointWriter { out })
    }

    pub fn append(&mut self, record: &CellRecord) -> Result<(), CheckpointError> {
        record.write_to(&mut self.out)?;
        self.out.flush()?;
        Ok(())
    }
}

impl Resolution {
    /// Writes every completed cell to `path`, replacing its contents.
    pub fn save_checkpoint(&self, path: &Path) -> Result<(), CheckpointError> {
        let mut out = BufWriter::new(File::create(path)?);
        write_header(&mut out)?;
        for record in self.cell_records() {
            record.write_to(&mut out)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Rebuilds a resolution from a checkpoint. Records must arrive in
    /// dependency order; a partial trailing record is ignored.
    pub fn load_checkpoint(path: &Path) -> Result<Resolution, CheckpointError> {
        let mut input = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 5];
        input.read_exact(&mut magic).map_err(|_| CheckpointError::BadMagic)?;
        if &magic != MAGIC {
            return Err(CheckpointError::BadMagic);
        }
        let mut v = [0u8; 4];
        input.read_exact(&mut v).map_err(|_| CheckpointError::BadMagic)?;
        let version = u32::from_le_bytes(v);
        if version != VERSION {
            return Err(CheckpointError::BadVersion(version));
        }
        let mut res = Resolution::new();
        while let Some(record) = CellRecord::read_from(&mut input)? {
            let (s, t) = (record.s, record.t);
            if !res.ready_for(s, t) {
                return Err(CheckpointError::OutOfOrder { s, t });
            }
            let expected = if s == 0 { 0 } else { res.module_dim(s - 1, t) };
            if let Some(b) = record.boundaries.iter().find(|b| b.len() != expected) {
                return Err(CheckpointError::BadRow { s, t, expected, found: b.len() });
            }
            res.apply_record(&record);
        }
        Ok(res)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trip() {
        let rec = CellRecord {
            s: 3,
            t: 11,
            boundaries: vec![F2Vector::from_support(70, [0, 65, 69]), F2Vector::zeros(3)],
        };
        let mut buf = Vec::new();
        rec.write_to(&mut buf).unwrap();
        assert_eq!(buf.len(), 24 + 16 + 16 + 16 + 8);
        let back = CellRecord::read_from(&mut buf.as_slice()).unwrap().unwrap();
        assert_eq!(back, rec);
        assert!(CellRecord::read_from(&mut &buf[..buf.len() - 3]).unwrap().is_none());
    }
}
