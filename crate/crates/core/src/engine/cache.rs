//! On-disk outcome tables.
//!
//! Layout, little-endian: the magic bytes `RGF1`, `n` as u32, `m` as u32,
//! the rule hash as u64, then one byte per profile code.

use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::engine::OutcomeTable;
use crate::error::{Error, Result};
use crate::rules::RuleSpec;

pub const MAGIC: &[u8; 4] = b"RGF1";
const HEADER_LEN: usize = 4 + 4 + 4 + 8;

/// First eight bytes of the SHA-256 of the rule's canonical JSON.
pub fn spec_hash(spec: &RuleSpec) -> u64 {
    let json = serde_json::to_vec(spec).expect("rule specs always serialize");
    let digest = Sha256::digest(&json);
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

pub fn encode_table(table: &OutcomeTable) -> Vec<u8> {
    let spec = table.spec();
    let mut out = Vec::with_capacity(HEADER_LEN + table.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(spec.n() as u32).to_le_bytes());
    out.extend_from_slice(&(spec.m() as u32).to_le_bytes());
    out.extend_from_slice(&spec_hash(spec).to_le_bytes());
    out.extend_from_slice(table.outcomes());
    out
}

pub fn decode_table(bytes: &[u8], spec: &RuleSpec) -> Result<OutcomeTable> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(Error::Cache("not an outcome table file".into()));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes")) as usize;
    let (n, m) = (word(4), word(8));
    let hash = u64::from_le_bytes(bytes[12..20].try_into().expect("8 bytes"));
    if (n, m) != (spec.n(), spec.m()) {
        return Err(Error::Mismatch { expected_n: spec.n(), expected_m: spec.m(), n, m });
    }
    if hash != spec_hash(spec) {
        return Err(Error::Cache("cached table was built for a different rule".into()));
    }
    OutcomeTable::from_outcomes(spec, bytes[HEADER_LEN..].to_vec())
}

pub fn write_table(path: &Path, table: &OutcomeTable) -> Result<()> {
    let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(&encode_table(table)).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

pub fn read_table(path: &Path, spec: &RuleSpec) -> Result<OutcomeTable> {
    let bytes = fs::read(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    decode_table(&bytes, spec)
}

/// Reads a valid cached table, or builds one and writes it back. The flag
/// reports whether the cache was used.
pub fn load_or_build(path: &Path, spec: &RuleSpec) -> Result<(OutcomeTable, bool)> {
    if path.exists() {
        match read_table(path, spec) {
            Ok(t) => return Ok((t, true)),
            Err(Error::Cache(_)) | Err(Error::Mismatch { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let table = OutcomeTable::build(spec)?;
    write_table(path, &table)?;
    Ok((table, false))
}
